//! The radial scalar product `∫₀^∞ dp/f u v`, evaluated in `z` through
//! `dp/f = dz / (2√β₀ √(1 - z²))`, plus `⟨p²⟩` and tail diagnostics.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wavefunctions::{Component, MapPoint, RadialState};

/// Relative order-doubling disagreement above which an integral is rejected.
pub const DIVERGENCE_THRESHOLD: f64 = 1e-4;
pub const DEFAULT_ORDER: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Gauss–Chebyshev in `z`: the `1/√(1-z²)` factor of the measure is the
    /// Chebyshev weight, so this is the midpoint rule in the angle.
    #[default]
    GaussChebyshevZ,
    GaussLegendreZ,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureSpec {
    pub order: usize,
    pub scheme: Scheme,
    pub beta0: f64,
}

impl QuadratureSpec {
    pub fn new(beta0: f64) -> Self {
        Self {
            order: DEFAULT_ORDER,
            scheme: Scheme::default(),
            beta0,
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(Error::Config(format!(
                "quadrature order must be at least 2, got {}",
                self.order
            )));
        }
        if !(self.beta0 > 0.0) || !self.beta0.is_finite() {
            return Err(Error::Domain(format!(
                "beta0 must be positive, got {}",
                self.beta0
            )));
        }
        Ok(())
    }
}

/// A node given by `1 + z`, `1 - z` and the weight of `dz/√(1-z²)`.
#[derive(Debug, Clone, Copy)]
struct Node {
    opz: f64,
    omz: f64,
    weight: f64,
}

fn chebyshev_nodes(order: usize) -> Vec<Node> {
    let w = PI / order as f64;
    (0..order)
        .map(|i| {
            let half = (2 * i + 1) as f64 * PI / (4 * order) as f64;
            let (s, c) = half.sin_cos();
            Node {
                opz: 2.0 * c * c,
                omz: 2.0 * s * s,
                weight: w,
            }
        })
        .collect()
}

/// Legendre nodes by Newton iteration in the angle `x = cos θ`.
fn legendre_nodes(order: usize) -> Vec<Node> {
    let n = order as f64;
    (0..order)
        .map(|i| {
            let mut theta = PI * (i as f64 + 0.75) / (n + 0.5);
            let mut dp = 0.0;
            for _ in 0..100 {
                let x = theta.cos();
                let (mut p0, mut p1) = (1.0, x);
                for m in 2..=order {
                    let mf = m as f64;
                    let p2 = ((2.0 * mf - 1.0) * x * p1 - (mf - 1.0) * p0) / mf;
                    p0 = p1;
                    p1 = p2;
                }
                let st = theta.sin();
                // dP/dx = n (P_{n-1} - x P_n) / sin²θ
                dp = n * (p0 - x * p1) / (st * st);
                let step = p1 / (st * dp);
                theta += step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            let st = theta.sin();
            let half = 0.5 * theta;
            let (s, c) = half.sin_cos();
            let w = 2.0 / (st * st * dp * dp);
            Node {
                opz: 2.0 * c * c,
                omz: 2.0 * s * s,
                weight: w / st,
            }
        })
        .collect()
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> Vec<(f64, f64)> {
    nodes(Scheme::GaussLegendreZ, order)
        .iter()
        .map(|n| {
            let x = if n.opz < n.omz {
                n.opz - 1.0
            } else {
                1.0 - n.omz
            };
            (x, n.weight * (n.opz * n.omz).sqrt())
        })
        .collect()
}

type NodeCache = HashMap<(Scheme, usize), Arc<Vec<Node>>>;

fn nodes(scheme: Scheme, order: usize) -> Arc<Vec<Node>> {
    static CACHE: OnceLock<Mutex<NodeCache>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(v) = cache.lock().unwrap().get(&(scheme, order)) {
        return v.clone();
    }
    let built = Arc::new(match scheme {
        Scheme::GaussChebyshevZ => chebyshev_nodes(order),
        Scheme::GaussLegendreZ => legendre_nodes(order),
    });
    cache
        .lock()
        .unwrap()
        .entry((scheme, order))
        .or_insert(built)
        .clone()
}

/// Integration points for `∫₀^∞ dp/f (·)` at one order.
pub fn points(spec: &QuadratureSpec) -> Result<Vec<(MapPoint, f64)>> {
    spec.validate()?;
    let scale = 0.5 / spec.beta0.sqrt();
    Ok(nodes(spec.scheme, spec.order)
        .iter()
        .map(|n| {
            (
                MapPoint::from_parts(n.opz, n.omz, spec.beta0),
                n.weight * scale,
            )
        })
        .collect())
}

fn sum_at<F: Fn(&MapPoint) -> f64>(spec: &QuadratureSpec, f: &F) -> Result<(f64, f64)> {
    let mut s = 0.0;
    let mut a = 0.0;
    for (pt, w) in points(spec)? {
        let v = f(&pt) * w;
        s += v;
        a += v.abs();
    }
    Ok((s, a))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Integral {
    pub value: f64,
    /// `|I(2N) - I(N)|`.
    pub error: f64,
    pub order: usize,
}

/// `∫₀^∞ dp/f F` with the integrand given on map points.
pub fn integrate<F: Fn(&MapPoint) -> f64>(spec: &QuadratureSpec, f: F) -> Result<Integral> {
    let (coarse, _) = sum_at(spec, &f)?;
    let fine_spec = spec.with_order(2 * spec.order);
    let (fine, abs) = sum_at(&fine_spec, &f)?;
    let error = (fine - coarse).abs();
    if !fine.is_finite() || !coarse.is_finite() || error > DIVERGENCE_THRESHOLD * abs {
        return Err(Error::DivergenceSuspected {
            order: spec.order,
            coarse,
            fine: fine_spec.order,
            fine_value: fine,
        });
    }
    Ok(Integral {
        value: fine,
        error,
        order: fine_spec.order,
    })
}

/// `⟨u, v⟩ = ∫₀^∞ dp/f u(p) v(p)` for real radial functions.
pub fn inner_product<U, V>(u: U, v: V, spec: &QuadratureSpec) -> Result<Integral>
where
    U: Fn(f64) -> f64,
    V: Fn(f64) -> f64,
{
    integrate(spec, |pt| u(pt.p) * v(pt.p))
}

/// `∫ dp/f (R₁² + R̃₂²)`.
pub fn normalization(state: &RadialState, spec: &QuadratureSpec) -> Result<Integral> {
    integrate(spec, |pt| {
        state.eval_r1_at(pt).powi(2) + state.eval_r2tilde_at(pt).powi(2)
    })
}

/// `∫ dp/f (R₁ R₁' + R̃₂ R̃₂')`.
pub fn overlap(u: &RadialState, v: &RadialState, spec: &QuadratureSpec) -> Result<Integral> {
    integrate(spec, |pt| {
        u.eval_r1_at(pt) * v.eval_r1_at(pt) + u.eval_r2tilde_at(pt) * v.eval_r2tilde_at(pt)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum P2 {
    Finite {
        value: f64,
        error: f64,
    },
    /// The component's `p²`-weighted integrand decays no faster than `1/p`.
    Divergent {
        component: Component,
        tail_exponent: f64,
    },
}

impl P2 {
    pub fn is_finite(&self) -> bool {
        matches!(self, P2::Finite { .. })
    }
}

/// `⟨p²⟩ = ∫ dp/f p² (R₁² + R̃₂²)`, with divergence decided from the
/// component tails before any integration.
pub fn p2_expectation(state: &RadialState, spec: &QuadratureSpec) -> Result<P2> {
    for (component, asym) in state.asymptotics() {
        if !asym.finite_p2() {
            return Ok(P2::Divergent {
                component,
                tail_exponent: asym.infinity,
            });
        }
    }
    let i = integrate(spec, |pt| {
        pt.p * pt.p * (state.eval_r1_at(pt).powi(2) + state.eval_r2tilde_at(pt).powi(2))
    })?;
    Ok(P2::Finite {
        value: i.value,
        error: i.error,
    })
}

pub const TAIL_SAMPLES: usize = 1024;

/// Least-squares slope of `ln|F|` against `ln p` on `p ∈ [10, 10⁴]/√β₀`,
/// sampled uniformly in `p`. `F` is given as `(sign, ln|F|)`.
pub fn tail_exponent_log<F: Fn(f64) -> (f64, f64)>(f: F, beta0: f64) -> Result<f64> {
    if !(beta0 > 0.0) {
        return Err(Error::Domain(format!(
            "beta0 must be positive, got {beta0}"
        )));
    }
    let (lo, hi) = (10.0 / beta0.sqrt(), 1e4 / beta0.sqrt());
    let mut sign0 = 0.0;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    let m = TAIL_SAMPLES;
    for i in 0..m {
        let p = lo + (hi - lo) * i as f64 / (m - 1) as f64;
        let (sign, ly) = f(p);
        if !ly.is_finite() || sign == 0.0 {
            return Err(Error::Numerical(format!(
                "function vanishes or is not finite at p = {p:e}"
            )));
        }
        if i == 0 {
            sign0 = sign;
        } else if sign != sign0 {
            return Err(Error::Numerical(format!(
                "oscillation: sign change near p = {p:e}"
            )));
        }
        let lx = p.ln();
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    let mf = m as f64;
    Ok((mf * sxy - sx * sy) / (mf * sxx - sx * sx))
}

pub fn tail_exponent<F: Fn(f64) -> f64>(f: F, beta0: f64) -> Result<f64> {
    tail_exponent_log(
        |p| {
            let v = f(p);
            (
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                },
                v.abs().ln(),
            )
        },
        beta0,
    )
}
