//! Radial momentum wavefunctions `R₁`, `R̃₂` and `R₂ = -R̃₂` built from
//! Jacobi polynomials in `z = (β₀p² - 1)/(β₀p² + 1)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{energy_squared, Channel, DeformationParams, Regime};
use crate::operators::{Jet, RadialFunction};
use crate::specfun::{
    jacobi_derivative, jacobi_eval, jacobi_second_derivative, log_gamma, log_gamma_ratio,
};

/// The map `p ∈ (0, ∞) ↔ z ∈ (-1, 1)` for a fixed `β₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridMap {
    pub beta0: f64,
}

impl GridMap {
    pub fn new(beta0: f64) -> Result<Self> {
        if !(beta0 > 0.0) || !beta0.is_finite() {
            return Err(Error::Domain(format!(
                "beta0 must be positive and finite, got {beta0}"
            )));
        }
        Ok(Self { beta0 })
    }

    pub fn p_to_z(&self, p: f64) -> Result<f64> {
        p_to_z(p, self.beta0)
    }

    pub fn z_to_p(&self, z: f64) -> Result<f64> {
        z_to_p(z, self.beta0)
    }

    pub fn f(&self, p: f64) -> f64 {
        1.0 + self.beta0 * p * p
    }
}

pub fn p_to_z(p: f64, beta0: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::Domain(format!(
            "p must be positive and finite, got {p}"
        )));
    }
    Ok(MapPoint::from_p(p, beta0).z)
}

pub fn z_to_p(z: f64, beta0: f64) -> Result<f64> {
    if !(z > -1.0 && z < 1.0) {
        return Err(Error::Domain(format!("z must lie in (-1, 1), got {z}")));
    }
    Ok(MapPoint::from_z(z, beta0).p)
}

/// A point of the map with the derived quantities needed for evaluation,
/// each computed without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapPoint {
    pub p: f64,
    pub z: f64,
    pub f: f64,
    pub ln_p: f64,
    pub ln_f: f64,
    pub one_plus_z: f64,
    pub one_minus_z: f64,
}

impl MapPoint {
    pub fn from_p(p: f64, beta0: f64) -> Self {
        let x = beta0 * p * p;
        let f = 1.0 + x;
        Self {
            p,
            z: (x - 1.0) / f,
            f,
            ln_p: p.ln(),
            ln_f: x.ln_1p(),
            one_plus_z: 2.0 * x / f,
            one_minus_z: 2.0 / f,
        }
    }

    pub fn from_z(z: f64, beta0: f64) -> Self {
        Self::from_parts(1.0 + z, 1.0 - z, beta0)
    }

    /// Builds the point from `1 + z` and `1 - z` given separately, which keeps
    /// full relative precision at both ends of the interval.
    pub fn from_parts(opz: f64, omz: f64, beta0: f64) -> Self {
        let z = if opz < omz { opz - 1.0 } else { 1.0 - omz };
        let ln_p = 0.5 * (opz.ln() - beta0.ln() - omz.ln());
        Self {
            p: ln_p.exp(),
            z,
            f: 2.0 / omz,
            ln_p,
            ln_f: std::f64::consts::LN_2 - omz.ln(),
            one_plus_z: opz,
            one_minus_z: omz,
        }
    }
}

/// `A^(n)(a, b)`, the constant that makes
/// `A p^{b+1/2} f^{-(a+b+1)/2} P_n^{(a,b)}(z)` unit-normalized under `dp/f`.
pub fn normalization_coeff(n: u32, a: f64, b: f64, beta0: f64) -> Result<f64> {
    ln_normalization_coeff(n, a, b, beta0).map(f64::exp)
}

pub fn ln_normalization_coeff(n: u32, a: f64, b: f64, beta0: f64) -> Result<f64> {
    let nf = n as f64;
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::Domain(format!(
            "Jacobi parameters need a, b > -1, got a = {a}, b = {b}"
        )));
    }
    if !(beta0 > 0.0) {
        return Err(Error::Domain(format!(
            "beta0 must be positive, got {beta0}"
        )));
    }
    let s = a + b + 2.0 * nf + 1.0;
    if !(s > 0.0) || !(a + b + nf + 1.0 > 0.0) {
        return Err(Error::Domain(format!(
            "nonpositive Gamma argument for n = {n}, a = {a}, b = {b}"
        )));
    }
    // Γ(a+b+n+1)/Γ(a+n+1) stays accurate for a ~ 1/β₀ ≫ 1
    let ratio = log_gamma_ratio(a + nf + 1.0, b)?;
    let ln_a2 =
        std::f64::consts::LN_2 + (b + 1.0) * beta0.ln() + s.ln() + log_gamma(nf + 1.0)? + ratio
            - log_gamma(b + nf + 1.0)?;
    Ok(0.5 * ln_a2)
}

/// Power-law exponents of a radial function at `p → 0` and `p → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Asymptotics {
    pub origin: f64,
    pub infinity: f64,
}

impl Asymptotics {
    pub fn vanishes_at_origin(&self) -> bool {
        self.origin > 0.0
    }

    /// `∫ dp/f R²` converges at both ends.
    pub fn normalizable(&self) -> bool {
        self.origin > -0.5 && self.infinity < 0.5
    }

    /// `∫ dp/f p² R²` converges at infinity.
    pub fn finite_p2(&self) -> bool {
        self.infinity < -0.5
    }

    pub fn physically_acceptable(&self) -> bool {
        self.vanishes_at_origin() && self.normalizable() && self.finite_p2()
    }
}

/// Unit-normalized profile `A p^{b+1/2} f^{-(a+b+1)/2} P_n^{(a,b)}(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JacobiProfile {
    pub n: u32,
    pub a: f64,
    pub b: f64,
    pub beta0: f64,
    pub ln_norm: f64,
}

impl JacobiProfile {
    pub fn new(n: u32, a: f64, b: f64, beta0: f64) -> Result<Self> {
        let ln_norm = ln_normalization_coeff(n, a, b, beta0)?;
        Ok(Self {
            n,
            a,
            b,
            beta0,
            ln_norm,
        })
    }

    /// Profile of the `n`-th eigenfunction of `b⁺(g,k) b⁻(g,k)`.
    pub fn from_ladder(n: u32, g: f64, k: f64, beta0: f64) -> Result<Self> {
        Self::new(n, g / beta0 - 0.5, k - 0.5, beta0)
    }

    pub fn norm(&self) -> f64 {
        self.ln_norm.exp()
    }

    pub fn asymptotics(&self) -> Asymptotics {
        Asymptotics {
            origin: self.b + 0.5,
            infinity: -(self.a + 0.5),
        }
    }

    fn c(&self) -> f64 {
        0.5 * (self.a + self.b + 1.0)
    }

    pub fn eval_at(&self, pt: &MapPoint) -> f64 {
        let w = (self.ln_norm + (self.b + 0.5) * pt.ln_p - self.c() * pt.ln_f).exp();
        w * jacobi_eval(self.n, self.a, self.b, pt.z)
    }

    pub fn jet_at(&self, pt: &MapPoint) -> Jet {
        let (a, b, n, b0) = (self.a, self.b, self.n, self.beta0);
        let c = self.c();
        let p = pt.p;
        let f = pt.f;
        let w = (self.ln_norm + (b + 0.5) * pt.ln_p - c * pt.ln_f).exp();
        let pj = jacobi_eval(n, a, b, pt.z);
        let pz = jacobi_derivative(n, a, b, pt.z);
        let pzz = jacobi_second_derivative(n, a, b, pt.z);
        let l1 = (b + 0.5) / p - 2.0 * c * b0 * p / f;
        let l1p = -(b + 0.5) / (p * p) - 2.0 * c * b0 * (2.0 / f - 1.0) / f;
        let zp = 4.0 * b0 * p / (f * f);
        let zpp = 4.0 * b0 * (4.0 / f - 3.0) / (f * f);
        Jet::new(
            w * pj,
            w * (l1 * pj + zp * pz),
            w * ((l1 * l1 + l1p) * pj + 2.0 * l1 * zp * pz + zpp * pz + zp * zp * pzz),
        )
    }
}

impl RadialFunction for JacobiProfile {
    fn jet(&self, p: f64) -> Jet {
        self.jet_at(&MapPoint::from_p(p, self.beta0))
    }

    fn value(&self, p: f64) -> f64 {
        self.eval_at(&MapPoint::from_p(p, self.beta0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Component {
    Large,
    Small,
}

/// A bound state `(R₁, R̃₂)` of one `(s, j)` channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialState {
    pub channel: Channel,
    pub omega: f64,
    pub n: u32,
    pub sigma: i32,
    pub epsilon: i32,
    pub energy: f64,
    pub e2_minus_1: f64,
    pub large: JacobiProfile,
    /// `None` when `ñ = -1`.
    pub small: Option<JacobiProfile>,
    pub large_coeff: f64,
    pub small_coeff: f64,
}

impl RadialState {
    /// Physical state `n` of `channel` with energy sign `sigma`.
    pub fn new(channel: &Channel, params: &DeformationParams, n: u32, sigma: i32) -> Result<Self> {
        if channel.regime == Regime::IntermediateJ {
            return Err(Error::NoBoundState {
                detail: format!(
                    "s = {}, j = {}/2 is in the intermediate-j window",
                    channel.spin, channel.two_j
                ),
            });
        }
        let state = Self::build(channel, params, n, sigma, channel.regime)?;
        for (component, asym) in state.asymptotics() {
            if !asym.physically_acceptable() {
                return Err(Error::NoBoundState {
                    detail: format!(
                        "{component:?} component has tail p^{:.6} and origin exponent {:.6}; not physically acceptable",
                        asym.infinity, asym.origin
                    ),
                });
            }
        }
        Ok(state)
    }

    /// The large-j construction applied to any `s = +1/2` channel without
    /// physical-acceptability checks. In the intermediate window this is the
    /// formal solution whose small component has a divergent `⟨p²⟩`.
    pub fn formal_large_j(
        channel: &Channel,
        params: &DeformationParams,
        n: u32,
        sigma: i32,
    ) -> Result<Self> {
        if channel.spin.sign() < 0 {
            return Err(Error::Contract {
                regime: channel.regime,
                detail: "the large-j construction needs s = +1/2".into(),
            });
        }
        Self::build(channel, params, n, sigma, Regime::VeryLargeJ)
    }

    fn build(
        channel: &Channel,
        params: &DeformationParams,
        n: u32,
        sigma: i32,
        regime: Regime,
    ) -> Result<Self> {
        if sigma != 1 && sigma != -1 {
            return Err(Error::Domain(format!(
                "sigma must be +1 or -1, got {sigma}"
            )));
        }
        if regime == Regime::SmallJ && n == 0 && sigma < 0 {
            return Err(Error::Domain(
                "the small-j ground state exists only for E = +1".into(),
            ));
        }
        let b0 = channel.beta0;
        let j = channel.j();
        let a_plus = (channel.g - 0.5 * b0) / b0;
        let (eps, a, b, at, bt, nt) = match regime {
            Regime::SmallJ => (1, a_plus, j, a_plus + 1.0, j + 1.0, n as i64 - 1),
            Regime::VeryLargeJ | Regime::IntermediateJ => {
                (-1, -a_plus, j, -a_plus - 1.0, j + 1.0, n as i64)
            }
            Regime::SMinus => (1, a_plus, j + 1.0, a_plus + 1.0, j, n as i64),
        };
        let mut ch = *channel;
        ch.regime = regime;
        let es = energy_squared(n, &ch, params)?;
        let energy = sigma as f64 * (1.0 + es.e2_minus_1).sqrt();
        let large = JacobiProfile::new(n, a, b, b0)?;
        let small = if nt < 0 {
            None
        } else {
            Some(JacobiProfile::new(nt as u32, at, bt, b0)?)
        };
        let large_coeff = ((energy + 1.0) / (2.0 * energy)).sqrt();
        let small_coeff = if small.is_some() {
            (eps * sigma) as f64 * ((energy - 1.0) / (2.0 * energy)).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            channel: *channel,
            omega: params.omega,
            n,
            sigma,
            epsilon: eps,
            energy,
            e2_minus_1: es.e2_minus_1,
            large,
            small,
            large_coeff,
            small_coeff,
        })
    }

    pub fn beta0(&self) -> f64 {
        self.channel.beta0
    }

    pub fn a(&self) -> f64 {
        self.large.a
    }

    pub fn b(&self) -> f64 {
        self.large.b
    }

    /// `(ã, b̃, ñ)`; `ñ = -1` marks an identically vanishing small component.
    pub fn tilde(&self) -> (f64, f64, i64) {
        let (at, bt) = (
            self.large.a + self.epsilon as f64,
            self.large.b + 2.0 * self.channel.spin.value(),
        );
        let nt = match &self.small {
            Some(s) => s.n as i64,
            None => -1,
        };
        (at, bt, nt)
    }

    /// `√((E+1)/(2E)) A^(n)(a,b)`.
    pub fn n1(&self) -> f64 {
        self.large_coeff * self.large.norm()
    }

    pub fn eval_r1(&self, p: f64) -> f64 {
        self.large_coeff * self.large.value(p)
    }

    pub fn eval_r2tilde(&self, p: f64) -> f64 {
        match &self.small {
            Some(s) => self.small_coeff * s.value(p),
            None => 0.0,
        }
    }

    pub fn eval_r2(&self, p: f64) -> f64 {
        -self.eval_r2tilde(p)
    }

    pub fn r1_jet(&self, p: f64) -> Jet {
        self.large.jet(p).scale(self.large_coeff)
    }

    pub fn r2tilde_jet(&self, p: f64) -> Jet {
        match &self.small {
            Some(s) => s.jet(p).scale(self.small_coeff),
            None => Jet::default(),
        }
    }

    pub fn eval_r1_at(&self, pt: &MapPoint) -> f64 {
        self.large_coeff * self.large.eval_at(pt)
    }

    pub fn eval_r2tilde_at(&self, pt: &MapPoint) -> f64 {
        match &self.small {
            Some(s) => self.small_coeff * s.eval_at(pt),
            None => 0.0,
        }
    }

    /// Asymptotic exponents of the components that do not vanish identically.
    pub fn asymptotics(&self) -> Vec<(Component, Asymptotics)> {
        let mut out = vec![(Component::Large, self.large.asymptotics())];
        if let Some(s) = &self.small {
            out.push((Component::Small, s.asymptotics()));
        }
        out
    }

    pub fn component(&self, which: Component) -> ComponentFn<'_> {
        ComponentFn { state: self, which }
    }
}

/// One component of a state viewed as a radial function.
#[derive(Debug, Clone, Copy)]
pub struct ComponentFn<'a> {
    state: &'a RadialState,
    which: Component,
}

impl RadialFunction for ComponentFn<'_> {
    fn jet(&self, p: f64) -> Jet {
        match self.which {
            Component::Large => self.state.r1_jet(p),
            Component::Small => self.state.r2tilde_jet(p),
        }
    }

    fn value(&self, p: f64) -> f64 {
        match self.which {
            Component::Large => self.state.eval_r1(p),
            Component::Small => self.state.eval_r2tilde(p),
        }
    }
}

/// Candidate ground state `p^{-k} f^{(g+β₀k)/(2β₀)}` of `b⁺`, the would-be
/// small component of a zero-energy solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartnerZeroMode {
    pub g: f64,
    pub k: f64,
    pub beta0: f64,
}

impl PartnerZeroMode {
    pub fn for_channel(channel: &Channel) -> Self {
        Self {
            g: channel.g,
            k: channel.k,
            beta0: channel.beta0,
        }
    }

    pub fn asymptotics(&self) -> Asymptotics {
        Asymptotics {
            origin: -self.k,
            infinity: self.g / self.beta0,
        }
    }
}

impl RadialFunction for PartnerZeroMode {
    fn jet(&self, p: f64) -> Jet {
        let f = 1.0 + self.beta0 * p * p;
        let e = (self.g + self.beta0 * self.k) / (2.0 * self.beta0);
        let v = (-self.k * p.ln() + e * (self.beta0 * p * p).ln_1p()).exp();
        let l1 = -self.k / p + 2.0 * e * self.beta0 * p / f;
        let l1p = self.k / (p * p) + 2.0 * e * self.beta0 * (2.0 / f - 1.0) / f;
        Jet::new(v, v * l1, v * (l1 * l1 + l1p))
    }
}

/// One row of a sampled wavefunction table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WavefunctionSample {
    pub p: f64,
    pub z: f64,
    pub r1: f64,
    pub r2tilde: f64,
    pub r2: f64,
    pub weight: f64,
}

/// Samples at `points` midpoints of a uniform partition of `(-1, 1)` in `z`.
pub fn sample(state: &RadialState, points: usize) -> Vec<WavefunctionSample> {
    let b0 = state.beta0();
    (0..points)
        .map(|i| {
            let z = -1.0 + (2.0 * i as f64 + 1.0) / points as f64;
            let pt = MapPoint::from_z(z, b0);
            let r1 = state.eval_r1_at(&pt);
            let r2t = state.eval_r2tilde_at(&pt);
            WavefunctionSample {
                p: pt.p,
                z,
                r1,
                r2tilde: r2t,
                r2: -r2t,
                weight: 1.0 / pt.f,
            }
        })
        .collect()
}
