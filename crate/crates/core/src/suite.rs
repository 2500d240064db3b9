//! Verification reports over a parameter sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::{harmonics_up_to, verify_angular_identities, verify_orthonormality};
use crate::error::Result;
use crate::model::{
    derive_channel, energy_squared, first_n, Channel, DeformationParams, Regime, Spin,
};
use crate::operators::RadialFunction;
use crate::operators::{
    apply_ladder, ground_factorization, h0_level, refactorize, si_hierarchy, unbroken_level,
    H0Coeffs, Ladder, LadderCoeffs,
};
use crate::oracle::verify_spectrum;
use crate::quadrature::{
    integrate, normalization, overlap, p2_expectation, tail_exponent, QuadratureSpec, P2,
};
use crate::report::VerificationReport;
use crate::wavefunctions::{z_to_p, JacobiProfile, MapPoint, RadialState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    Radial,
    Angular,
    Susy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCase {
    pub params: DeformationParams,
    pub spin: Spin,
    pub two_j: u32,
}

impl SweepCase {
    pub fn new(omega: f64, beta: f64, beta_prime: f64, spin: Spin, two_j: u32) -> Result<Self> {
        Ok(Self {
            params: DeformationParams::new(omega, beta, beta_prime)?,
            spin,
            two_j,
        })
    }

    pub fn channel(&self) -> Result<Channel> {
        derive_channel(self.spin, self.two_j, &self.params)
    }

    pub fn label(&self) -> String {
        format!(
            "omega={} beta={} beta'={} s={} 2j={}",
            self.params.omega, self.params.beta, self.params.beta_prime, self.spin, self.two_j
        )
    }
}

/// One representative channel per regime with bound states.
pub fn default_sweep() -> Vec<SweepCase> {
    vec![
        SweepCase::new(1.0, 0.01, 0.01, Spin::Plus, 1).unwrap(),
        SweepCase::new(1.0, 0.01, 0.01, Spin::Minus, 1).unwrap(),
        SweepCase::new(1.0, 0.01, 0.0, Spin::Plus, 201).unwrap(),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    /// Relative tolerance of grid eigenvalues against closed forms.
    pub oracle_tol: f64,
    pub norm_tol: f64,
    pub residual_tol: f64,
    pub angular_tol: f64,
    pub tail_tol: f64,
    pub quad_order: usize,
    pub radial_n_max: u32,
    pub oracle_n_max: u32,
    pub si_steps: usize,
    pub residual_samples: usize,
    pub angular_two_j_max: u32,
    pub angular_samples: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            oracle_tol: 1e-4,
            norm_tol: 1e-8,
            residual_tol: 1e-9,
            angular_tol: 1e-8,
            tail_tol: 0.01,
            quad_order: crate::quadrature::DEFAULT_ORDER,
            radial_n_max: 3,
            oracle_n_max: 5,
            si_steps: 20,
            residual_samples: 200,
            angular_two_j_max: 7,
            angular_samples: 100,
        }
    }
}

/// States of a channel with `n ≤ n_max` and both energy signs where allowed.
pub fn states(
    channel: &Channel,
    params: &DeformationParams,
    n_max: u32,
) -> Result<Vec<RadialState>> {
    let mut out = Vec::new();
    for sigma in [1, -1] {
        for n in first_n(channel.regime, sigma)..=n_max {
            out.push(RadialState::new(channel, params, n, sigma)?);
        }
    }
    Ok(out)
}

/// Largest relative residual of `ω b⁺ R̃₂ = (E-1) R₁` and `ω b⁻ R₁ = (E+1) R̃₂`
/// over `samples` points uniform in `z ∈ [-0.99, 0.99]`.
pub fn coupled_residual(state: &RadialState, samples: usize) -> Result<f64> {
    let lc = LadderCoeffs::for_channel(&state.channel);
    let (w, e) = (state.omega, state.energy);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let z = -0.99 + 1.98 * i as f64 / (samples - 1).max(1) as f64;
        let p = z_to_p(z, state.beta0())?;
        let (r1, r2) = (state.r1_jet(p), state.r2tilde_jet(p));
        let pairs = [
            (
                w * lc.apply(Ladder::Plus, r2, p),
                (e - 1.0) * r1.value,
                w * lc.apply_scale(r2, p),
            ),
            (
                w * lc.apply(Ladder::Minus, r1, p),
                (e + 1.0) * r2.value,
                w * lc.apply_scale(r1, p),
            ),
        ];
        for (lhs, rhs, s) in pairs {
            let scale = s + rhs.abs();
            if scale > 0.0 {
                worst = worst.max((lhs - rhs).abs() / scale);
            }
        }
    }
    Ok(worst)
}

/// Largest relative deviation of `R₁^(n)` from `(e_n - e_0)^{-1/2} b⁺ R₁^(n-1)`
/// with the shifted pair, over sample points.
pub fn recursion_residual(state: &RadialState, samples: usize) -> Result<f64> {
    if state.n == 0 {
        return Ok(0.0);
    }
    let b0 = state.beta0();
    let fac = ground_factorization(&state.channel)?;
    let lc = LadderCoeffs::new(fac.g, fac.k, b0);
    let prev = JacobiProfile::from_ladder(state.n - 1, fac.g + b0, fac.k + 1.0, b0)?;
    let gap = unbroken_level(fac.g, fac.k, b0, state.n);
    let mut worst = 0.0f64;
    for i in 0..samples {
        let z = -0.99 + 1.98 * i as f64 / (samples - 1).max(1) as f64;
        let p = z_to_p(z, b0)?;
        let jet = prev.jet_at(&MapPoint::from_p(p, b0));
        let lhs = apply_ladder(Ladder::Plus, &lc, &prev, p) / gap.sqrt();
        let rhs = state.large.eval_at(&MapPoint::from_p(p, b0));
        let scale = lc.apply_scale(jet, p) / gap.sqrt() + rhs.abs();
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    Ok(worst)
}

/// Normalization, orthogonality, coupled equations, recursion and `⟨p²⟩`.
pub fn radial_report(case: &SweepCase, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let channel = case.channel()?;
    let mut r = VerificationReport::new(format!("radial {}", case.label()));
    let spec = QuadratureSpec::new(channel.beta0).with_order(cfg.quad_order);
    let all = states(&channel, &case.params, cfg.radial_n_max)?;
    for s in &all {
        let tag = format!("n={} sigma={:+}", s.n, s.sigma);
        match normalization(s, &spec) {
            Ok(i) => r.check_with(
                format!("{tag} norm"),
                (i.value - 1.0).abs(),
                cfg.norm_tol,
                format!("{:.12e} +- {:.1e}", i.value, i.error),
            ),
            Err(e) => r.flag(format!("{tag} norm"), false, e.to_string()),
        };
        r.check(
            format!("{tag} coupled equations"),
            coupled_residual(s, cfg.residual_samples)?,
            cfg.residual_tol,
        );
        r.check(
            format!("{tag} recursion"),
            recursion_residual(s, cfg.residual_samples)?,
            cfg.residual_tol,
        );
        match p2_expectation(s, &spec) {
            Ok(P2::Finite { value, .. }) => r.flag(
                format!("{tag} finite p2"),
                true,
                format!("<p^2> = {value:.6e}"),
            ),
            Ok(P2::Divergent {
                component,
                tail_exponent,
            }) => r.flag(
                format!("{tag} finite p2"),
                false,
                format!("{component:?} tail p^{tail_exponent}"),
            ),
            Err(e) => r.flag(format!("{tag} finite p2"), false, e.to_string()),
        };
        if s.n == 0 {
            for (component, asym) in s.asymptotics() {
                let f = s.component(component);
                let fitted = tail_exponent(|p| f.value(p), channel.beta0);
                match fitted {
                    Ok(t) => r.check_with(
                        format!("{tag} {component:?} tail"),
                        (t - asym.infinity).abs(),
                        cfg.tail_tol,
                        format!("fitted {t:.6}, expected {:.6}", asym.infinity),
                    ),
                    Err(e) => r.flag(format!("{tag} {component:?} tail"), false, e.to_string()),
                };
            }
        }
    }
    for (i, u) in all.iter().enumerate() {
        for v in &all[i + 1..] {
            let tag = format!("n={},{} sigma={:+},{:+}", u.n, v.n, u.sigma, v.sigma);
            if u.sigma == v.sigma {
                match integrate(&spec, |pt| u.large.eval_at(pt) * v.large.eval_at(pt)) {
                    Ok(o) => r.check(
                        format!("{tag} large-component overlap"),
                        o.value.abs(),
                        cfg.norm_tol,
                    ),
                    Err(e) => r.flag(
                        format!("{tag} large-component overlap"),
                        false,
                        e.to_string(),
                    ),
                };
            }
            match overlap(u, v, &spec) {
                Ok(o) => r.check(format!("{tag} state overlap"), o.value.abs(), cfg.norm_tol),
                Err(e) => r.flag(format!("{tag} state overlap"), false, e.to_string()),
            };
        }
    }
    Ok(r)
}

/// Shape-invariance sums, re-factorization, ladder levels and the grid oracle.
pub fn susy_report(case: &SweepCase, cfg: &SuiteConfig) -> Result<VerificationReport> {
    let channel = case.channel()?;
    let b0 = channel.beta0;
    let mut r = VerificationReport::new(format!("susy {}", case.label()));
    let fac = ground_factorization(&channel)?;
    let steps = si_hierarchy(fac.g, fac.k, b0, cfg.si_steps)?;
    let mut sum = 0.0;
    let mut worst = 0.0f64;
    for (i, s) in steps.iter().enumerate() {
        sum += s.epsilon;
        let closed = unbroken_level(fac.g, fac.k, b0, i as u32 + 1);
        worst = worst.max((sum - closed).abs() / closed.abs().max(1.0));
    }
    r.check("shape-invariance sums", worst, 1e-12);
    if channel.regime != Regime::SmallJ {
        let rf = refactorize(channel.regime, channel.g, channel.k, b0)?;
        let lhs = H0Coeffs::factorized(channel.g, channel.k, b0);
        let rhs = H0Coeffs::factorized(rf.g, rf.k, b0).shifted(rf.e0);
        r.check(
            "re-factorization",
            lhs.max_abs_diff(&rhs) / lhs.p2.abs().max(1.0),
            1e-12,
        );
        r.flag("e0 positive", rf.e0 > 0.0, format!("e0 = {:.12e}", rf.e0));
    }
    let mut worst = 0.0f64;
    for n in 0..=cfg.oracle_n_max {
        let a = h0_level(&channel, n)?;
        let b = energy_squared(n, &channel, &case.params)?.e;
        worst = worst.max((a - b).abs() / b.max(1.0));
    }
    r.check("ladder levels vs spectrum", worst, 1e-12);
    r.merge(verify_spectrum(
        &channel,
        &case.params,
        cfg.oracle_n_max,
        cfg.oracle_tol,
    )?);
    Ok(r)
}

pub fn angular_report(cfg: &SuiteConfig) -> Result<VerificationReport> {
    let hs = harmonics_up_to(cfg.angular_two_j_max);
    let reports: Result<Vec<_>> = hs
        .par_iter()
        .map(|h| {
            verify_angular_identities(
                h.spin,
                h.two_j,
                h.two_m,
                cfg.angular_samples,
                cfg.angular_tol,
            )
        })
        .collect();
    let mut r = VerificationReport::new("angular");
    for rep in reports? {
        r.merge(rep);
    }
    r.merge(verify_orthonormality(
        cfg.angular_two_j_max,
        cfg.angular_tol,
    ));
    Ok(r)
}

/// Runs the requested scopes on every case. Cases are evaluated in parallel
/// and merged in input order.
pub fn run_suite(
    cases: &[SweepCase],
    scopes: &[Scope],
    cfg: &SuiteConfig,
) -> Result<VerificationReport> {
    let mut top = VerificationReport::new("suite");
    let per_case: Vec<Result<Vec<VerificationReport>>> = cases
        .par_iter()
        .map(|case| {
            let mut v = Vec::new();
            if scopes.contains(&Scope::Radial) {
                v.push(radial_report(case, cfg)?);
            }
            if scopes.contains(&Scope::Susy) {
                v.push(susy_report(case, cfg)?);
            }
            Ok(v)
        })
        .collect();
    for reps in per_case {
        for rep in reps? {
            top.merge(rep);
        }
    }
    if scopes.contains(&Scope::Angular) {
        top.merge(angular_report(cfg)?);
    }
    Ok(top)
}
