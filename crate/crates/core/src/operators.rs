//! Radial ladder operators `b±(g, k) = ∓f d/dp + g p - k/p`, the partner
//! Hamiltonians `b⁺b⁻` and `b⁻b⁺`, re-factorization of `h₀` in the
//! broken-supersymmetry regimes, and the shape-invariance step.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Channel, DeformationParams, Regime, Spin};

/// Value and first two derivatives of a radial function at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub fn scale(self, c: f64) -> Self {
        Self::new(c * self.value, c * self.d1, c * self.d2)
    }

    pub fn add(self, other: Self) -> Self {
        Self::new(
            self.value + other.value,
            self.d1 + other.d1,
            self.d2 + other.d2,
        )
    }
}

/// A function of the radial momentum `p > 0` that can report derivatives.
pub trait RadialFunction {
    fn jet(&self, p: f64) -> Jet;

    fn value(&self, p: f64) -> f64 {
        self.jet(p).value
    }
}

/// Closure returning a full jet.
pub struct Analytic<F>(pub F);

impl<F: Fn(f64) -> Jet> RadialFunction for Analytic<F> {
    fn jet(&self, p: f64) -> Jet {
        (self.0)(p)
    }
}

/// Closure known only by its values. Derivatives come from fourth-order
/// central differences with step `1e-4 p`.
pub struct Sampled<F>(pub F);

const FD_REL_STEP: f64 = 1e-4;

impl<F: Fn(f64) -> f64> RadialFunction for Sampled<F> {
    fn jet(&self, p: f64) -> Jet {
        let h = FD_REL_STEP * p;
        let f = &self.0;
        let (m2, m1, c, p1, p2) = (f(p - 2.0 * h), f(p - h), f(p), f(p + h), f(p + 2.0 * h));
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d2 = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
        Jet::new(c, d1, d2)
    }

    fn value(&self, p: f64) -> f64 {
        (self.0)(p)
    }
}

impl<T: RadialFunction + ?Sized> RadialFunction for &T {
    fn jet(&self, p: f64) -> Jet {
        (**self).jet(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Ladder {
    Plus,
    Minus,
}

impl Ladder {
    fn sign(self) -> f64 {
        match self {
            Ladder::Plus => 1.0,
            Ladder::Minus => -1.0,
        }
    }
}

/// Coefficients of `b±(g, k)` with `f = 1 + β₀ p²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderCoeffs {
    pub g: f64,
    pub k: f64,
    pub beta0: f64,
}

impl LadderCoeffs {
    pub fn new(g: f64, k: f64, beta0: f64) -> Self {
        Self { g, k, beta0 }
    }

    pub fn for_channel(channel: &Channel) -> Self {
        Self::new(channel.g, channel.k, channel.beta0)
    }

    /// Coefficients for an arbitrary (possibly negative) frequency. The
    /// physical constructors reject `ω ≤ 0`; this one exists for the
    /// `ω → -ω` reflection.
    pub fn from_raw(omega: f64, beta: f64, beta_prime: f64, spin: Spin, two_j: u32) -> Self {
        let k = (spin.sign() * (two_j as i32 + 1)) as f64 / 2.0;
        Self::new(1.0 / omega - beta * k, k, beta + beta_prime)
    }

    pub fn from_params(params: &DeformationParams, spin: Spin, two_j: u32) -> Self {
        Self::from_raw(params.omega, params.beta, params.beta_prime, spin, two_j)
    }

    pub fn f(&self, p: f64) -> f64 {
        1.0 + self.beta0 * p * p
    }

    fn potential(&self, p: f64) -> f64 {
        self.g * p - self.k / p
    }

    /// `b± ψ` at `p` given the jet of `ψ`.
    pub fn apply(&self, dir: Ladder, psi: Jet, p: f64) -> f64 {
        -dir.sign() * self.f(p) * psi.d1 + self.potential(p) * psi.value
    }

    /// Sum of the magnitudes of the two terms of `b± ψ`, the natural scale
    /// for relative residuals.
    pub fn apply_scale(&self, psi: Jet, p: f64) -> f64 {
        (self.f(p) * psi.d1).abs() + (self.potential(p) * psi.value).abs()
    }

    /// `d/dp (b± ψ)` at `p`; needs `ψ''`.
    pub fn apply_d1(&self, dir: Ladder, psi: Jet, p: f64) -> f64 {
        let f = self.f(p);
        let fp = 2.0 * self.beta0 * p;
        -dir.sign() * (fp * psi.d1 + f * psi.d2)
            + (self.g + self.k / (p * p)) * psi.value
            + self.potential(p) * psi.d1
    }

    pub fn h0(&self) -> H0Coeffs {
        H0Coeffs::factorized(self.g, self.k, self.beta0)
    }

    pub fn partner(&self) -> H0Coeffs {
        H0Coeffs::partner(self.g, self.k, self.beta0)
    }
}

pub fn apply_ladder<F: RadialFunction + ?Sized>(
    dir: Ladder,
    coeffs: &LadderCoeffs,
    psi: &F,
    p: f64,
) -> f64 {
    coeffs.apply(dir, psi.jet(p), p)
}

/// Second-order operator
/// `kinetic · (-(f d/dp)²) + p2 · p² + inv_p2 / p² + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct H0Coeffs {
    pub beta0: f64,
    pub kinetic: f64,
    pub p2: f64,
    pub inv_p2: f64,
    pub constant: f64,
}

impl H0Coeffs {
    /// `b⁺(g,k) b⁻(g,k)`.
    pub fn factorized(g: f64, k: f64, beta0: f64) -> Self {
        Self {
            beta0,
            kinetic: 1.0,
            p2: g * (g - beta0),
            inv_p2: k * (k - 1.0),
            constant: -2.0 * g * k - g - beta0 * k,
        }
    }

    /// `b⁻(g,k) b⁺(g,k)`.
    pub fn partner(g: f64, k: f64, beta0: f64) -> Self {
        Self {
            beta0,
            kinetic: 1.0,
            p2: g * (g + beta0),
            inv_p2: k * (k + 1.0),
            constant: -2.0 * g * k + g + beta0 * k,
        }
    }

    pub fn shifted(mut self, by: f64) -> Self {
        self.constant += by;
        self
    }

    /// Largest absolute coefficient difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.beta0 - other.beta0,
            self.kinetic - other.kinetic,
            self.p2 - other.p2,
            self.inv_p2 - other.inv_p2,
            self.constant - other.constant,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()))
    }

    pub fn potential(&self, p: f64) -> f64 {
        self.p2 * p * p + self.inv_p2 / (p * p) + self.constant
    }

    pub fn apply(&self, psi: Jet, p: f64) -> f64 {
        let f = 1.0 + self.beta0 * p * p;
        let d_f_dpsi = 2.0 * self.beta0 * p * psi.d1 + f * psi.d2;
        -self.kinetic * f * d_f_dpsi + self.potential(p) * psi.value
    }
}

pub fn h0_matrix_free<F: RadialFunction + ?Sized>(coeffs: &H0Coeffs, psi: &F, p: f64) -> f64 {
    coeffs.apply(psi.jet(p), p)
}

/// One shape-invariance step `(g_i, k_i) → (g_{i+1}, k_{i+1})` and the
/// energy increment `ε_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiStep {
    pub g: f64,
    pub k: f64,
    pub epsilon: f64,
}

pub fn si_step(g: f64, k: f64, beta0: f64) -> Result<SiStep> {
    if !(k > 0.0) || !(beta0 > 0.0) || !(g / beta0 > 0.5) {
        return Err(Error::Domain(format!(
            "shape-invariance step needs k > 0 and g/beta0 > 1/2, got g = {g}, k = {k}, beta0 = {beta0}"
        )));
    }
    let g1 = g + beta0;
    let k1 = k + 1.0;
    let epsilon = g1 * (2.0 * k1 + 1.0) - g * (2.0 * k - 1.0) + beta0 * (k1 + k);
    Ok(SiStep {
        g: g1,
        k: k1,
        epsilon,
    })
}

/// The first `n` steps of the hierarchy starting from `(g, k)`.
pub fn si_hierarchy(g: f64, k: f64, beta0: f64, n: usize) -> Result<Vec<SiStep>> {
    let mut out = Vec::with_capacity(n);
    let (mut gi, mut ki) = (g, k);
    for _ in 0..n {
        let step = si_step(gi, ki, beta0)?;
        gi = step.g;
        ki = step.k;
        out.push(step);
    }
    Ok(out)
}

/// `e_n = 4n [g + β₀ (k + n)]`, the spectrum of `b⁺(g,k) b⁻(g,k)` in the
/// unbroken case.
pub fn unbroken_level(g: f64, k: f64, beta0: f64, n: u32) -> f64 {
    let nf = n as f64;
    4.0 * nf * (g + beta0 * (k + nf))
}

/// `h₀ = b⁺(g_eff, k_eff) b⁻(g_eff, k_eff) + e0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Factorization {
    pub g: f64,
    pub k: f64,
    pub e0: f64,
}

/// Re-factorization of `h₀` for the broken-supersymmetry regimes.
pub fn refactorize(regime: Regime, g: f64, k: f64, beta0: f64) -> Result<Factorization> {
    match regime {
        Regime::VeryLargeJ | Regime::IntermediateJ => Ok(Factorization {
            g: -g + beta0,
            k,
            e0: (2.0 * k + 1.0) * (-2.0 * g + beta0),
        }),
        // k = -(j + 1/2), so 2 (2g + β₀)(j + 1) = (2g + β₀)(1 - 2k)
        Regime::SMinus => Ok(Factorization {
            g,
            k: 1.0 - k,
            e0: (2.0 * g + beta0) * (1.0 - 2.0 * k),
        }),
        Regime::SmallJ => Err(Error::Contract {
            regime,
            detail: "small-j channels are already factorized with e0 = 0".into(),
        }),
    }
}

/// Factorization whose `b⁻` zero mode is the ground state of the channel.
pub fn ground_factorization(channel: &Channel) -> Result<Factorization> {
    match channel.regime {
        Regime::SmallJ => Ok(Factorization {
            g: channel.g,
            k: channel.k,
            e0: 0.0,
        }),
        Regime::IntermediateJ => Err(Error::NoBoundState {
            detail: format!(
                "s = {}, j = {}/2 is in the intermediate-j window",
                channel.spin, channel.two_j
            ),
        }),
        r => refactorize(r, channel.g, channel.k, channel.beta0),
    }
}

/// `e_n` of `h₀` from the shape-invariant ladder of the effective factorization.
pub fn h0_level(channel: &Channel, n: u32) -> Result<f64> {
    let fac = ground_factorization(channel)?;
    Ok(unbroken_level(fac.g, fac.k, channel.beta0, n) + fac.e0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_channel, energy_squared};
    use proptest::prelude::*;

    fn bump(p0: f64, width: f64) -> impl Fn(f64) -> Jet {
        // p^2 e^{-(p-p0)^2/w^2}, smooth and vanishing at 0
        move |p: f64| {
            let u = (p - p0) / width;
            let e = (-u * u).exp();
            let q = p * p;
            let dq = 2.0 * p;
            let du = -2.0 * u / width;
            let de = du * e;
            let dde = (-2.0 / (width * width) + du * du) * e;
            Jet::new(q * e, dq * e + q * de, 2.0 * e + 2.0 * dq * de + q * dde)
        }
    }

    #[test]
    fn si_step_example() {
        let s = si_step(1.0, 1.0, 0.02).unwrap();
        assert!((s.g - 1.02).abs() < 1e-15);
        assert_eq!(s.k, 2.0);
        assert!((s.epsilon - 4.16).abs() < 1e-14);
    }

    #[test]
    fn si_step_rejects_bad_input() {
        assert!(si_step(1.0, 0.0, 0.02).is_err());
        assert!(si_step(0.005, 1.0, 0.02).is_err());
    }

    #[test]
    fn si_partial_sums_match_closed_form() {
        for &(g, k, b0) in &[(0.99, 1.0, 0.02), (0.5, 3.0, 1e-3), (2.0, 10.0, 0.3)] {
            let steps = si_hierarchy(g, k, b0, 20).unwrap();
            let mut sum = 0.0;
            for (i, s) in steps.iter().enumerate() {
                sum += s.epsilon;
                let n = i as u32 + 1;
                let closed = unbroken_level(g, k, b0, n);
                assert!(
                    (sum - closed).abs() <= 1e-13 * closed,
                    "n = {n}: {sum} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn si_step_undeformed_limit_is_equally_spaced() {
        let s = si_step(0.7, 2.0, 1e-12).unwrap();
        assert!((s.epsilon - 4.0 * 0.7).abs() < 1e-10);
    }

    #[test]
    fn si_identity_at_coefficient_level() {
        let (g, k, b0) = (0.9, 1.5, 0.05);
        let s = si_step(g, k, b0).unwrap();
        let lhs = H0Coeffs::partner(g, k, b0);
        let rhs = H0Coeffs::factorized(s.g, s.k, b0).shifted(s.epsilon);
        assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn refactorize_examples() {
        let p = DeformationParams::new(1.0, 0.01, 0.01).unwrap();
        let c = derive_channel(Spin::Minus, 1, &p).unwrap();
        let r = refactorize(c.regime, c.g, c.k, c.beta0).unwrap();
        assert_eq!(r.k, 2.0);
        assert!((r.e0 - 6.12).abs() < 1e-13);

        let p = DeformationParams::new(1.0, 0.01, 0.0).unwrap();
        let c = derive_channel(Spin::Plus, 201, &p).unwrap();
        assert!((c.g + 0.01).abs() < 1e-15);
        let r = refactorize(c.regime, c.g, c.k, c.beta0).unwrap();
        assert!((r.g - 0.02).abs() < 1e-15);
        assert!((r.e0 - 6.09).abs() < 1e-12);

        let c = derive_channel(Spin::Plus, 1, &p).unwrap();
        assert!(matches!(
            refactorize(c.regime, c.g, c.k, c.beta0),
            Err(Error::Contract { .. })
        ));
    }

    #[test]
    fn refactorized_operator_equals_h0() {
        for &(regime, g, k) in &[
            (Regime::VeryLargeJ, -0.01, 101.0),
            (Regime::SMinus, 1.01, -1.0),
            (Regime::SMinus, 1.2, -4.0),
        ] {
            let b0 = 0.01;
            let r = refactorize(regime, g, k, b0).unwrap();
            assert!(r.e0 > 0.0);
            let lhs = H0Coeffs::factorized(g, k, b0);
            let rhs = H0Coeffs::factorized(r.g, r.k, b0).shifted(r.e0);
            assert!(lhs.max_abs_diff(&rhs) < 1e-12, "{lhs:?} vs {rhs:?}");
        }
    }

    #[test]
    fn ladder_levels_match_spectrum_formula() {
        for &(beta, beta_p, spin, two_j) in &[
            (0.01, 0.01, Spin::Plus, 1),
            (0.01, 0.01, Spin::Minus, 1),
            (0.01, 0.0, Spin::Plus, 201),
            (0.003, 0.02, Spin::Minus, 17),
            (0.02, 0.0, Spin::Plus, 151),
        ] {
            let p = DeformationParams::new(1.3, beta, beta_p).unwrap();
            let c = derive_channel(spin, two_j, &p).unwrap();
            for n in 0..8 {
                let from_ladder = h0_level(&c, n).unwrap();
                let from_formula = energy_squared(n, &c, &p).unwrap().e;
                assert!((from_ladder - from_formula).abs() < 1e-11 * from_formula.max(1.0));
            }
        }
    }

    #[test]
    fn minus_annihilates_ground_state() {
        let (g, k, b0) = (0.99, 1.0, 0.02);
        let c = LadderCoeffs::new(g, k, b0);
        let ground = Analytic(move |p: f64| {
            // p^k f^{-(g + β₀ k)/(2β₀)}
            let f = 1.0 + b0 * p * p;
            let e = (g + b0 * k) / (2.0 * b0);
            let v = p.powf(k) * f.powf(-e);
            let l1 = k / p - 2.0 * e * b0 * p / f;
            Jet::new(v, v * l1, 0.0)
        });
        for &p in &[0.1, 1.0, 3.0, 20.0] {
            let v = ground.value(p);
            let r = apply_ladder(Ladder::Minus, &c, &ground, p);
            assert!(r.abs() < 1e-12 * (v.abs() * (g * p + k / p)).max(1e-300));
        }
    }

    #[test]
    fn ladder_is_linear() {
        let c = LadderCoeffs::new(0.8, 2.0, 0.03);
        let u = bump(2.0, 0.7);
        let v = bump(4.0, 1.5);
        for &p in &[0.5, 2.0, 5.0] {
            let (ju, jv) = (u(p), v(p));
            let combo = ju.scale(1.7).add(jv.scale(-0.4));
            for dir in [Ladder::Plus, Ladder::Minus] {
                let lhs = c.apply(dir, combo, p);
                let rhs = 1.7 * c.apply(dir, ju, p) - 0.4 * c.apply(dir, jv, p);
                assert!((lhs - rhs).abs() < 1e-13 * (lhs.abs() + rhs.abs()).max(1.0));
            }
        }
    }

    #[test]
    fn h0_equals_composition_via_finite_differences() {
        let (g, k, b0) = (0.93, 2.0, 0.04);
        let c = LadderCoeffs::new(g, k, b0);
        let h = c.h0();
        let psi = bump(2.5, 1.1);
        let minus_applied = Sampled(|p: f64| c.apply(Ladder::Minus, psi(p), p));
        for &p in &[0.8, 1.7, 2.5, 3.9] {
            let composed = apply_ladder(Ladder::Plus, &c, &minus_applied, p);
            let direct = h.apply(psi(p), p);
            let scale = psi(p).value.abs() * h.potential(p).abs() + 1.0;
            assert!(
                (composed - direct).abs() < 1e-8 * scale,
                "p = {p}: {composed} vs {direct}"
            );
        }
    }

    #[test]
    fn analytic_composition_matches_h0() {
        let c = LadderCoeffs::new(1.1, -1.0, 0.02);
        let psi = bump(1.5, 0.9);
        for &p in &[0.3, 1.0, 2.2] {
            let jet = psi(p);
            let inner = Jet::new(
                c.apply(Ladder::Minus, jet, p),
                c.apply_d1(Ladder::Minus, jet, p),
                0.0,
            );
            let composed = c.apply(Ladder::Plus, inner, p);
            let direct = c.h0().apply(jet, p);
            assert!((composed - direct).abs() < 1e-12 * (direct.abs() + 1.0));
        }
    }

    #[test]
    fn omega_reflection_swaps_ladders() {
        for two_j in [1u32, 3, 9, 41] {
            for spin in [Spin::Plus, Spin::Minus] {
                let reflected = LadderCoeffs::from_raw(-1.3, 0.02, 0.01, spin, two_j);
                let partner = LadderCoeffs::from_raw(1.3, 0.02, 0.01, spin.flip(), two_j);
                assert_eq!(reflected.g, -partner.g);
                assert_eq!(reflected.k, -partner.k);
                let psi = bump(1.0, 0.5);
                for &p in &[0.4, 1.0, 2.0] {
                    let lhs = reflected.apply(Ladder::Plus, psi(p), p);
                    let rhs = -partner.apply(Ladder::Minus, psi(p), p);
                    assert!((lhs - rhs).abs() <= 1e-14 * lhs.abs().max(1.0));
                }
                // h0 at -ω is the partner Hamiltonian at (ω, -s)
                assert!(reflected.h0().max_abs_diff(&partner.partner()) < 1e-14);
            }
        }
    }

    proptest! {
        #[test]
        fn si_identity_on_test_functions(g in 0.2f64..3.0, k in 0.5f64..20.0, b0 in 1e-3f64..0.2, p0 in 0.5f64..4.0, p in 0.2f64..6.0) {
            prop_assume!(g / b0 > 0.5);
            let s = si_step(g, k, b0).unwrap();
            let c0 = LadderCoeffs::new(g, k, b0);
            let c1 = LadderCoeffs::new(s.g, s.k, b0);
            let jet = bump(p0, 1.0)(p);
            // b⁻b⁺ at (g_i, k_i)
            let inner = Jet::new(c0.apply(Ladder::Plus, jet, p), c0.apply_d1(Ladder::Plus, jet, p), 0.0);
            let lhs = c0.apply(Ladder::Minus, inner, p);
            let rhs = c1.h0().apply(jet, p) + s.epsilon * jet.value;
            let scale = jet.value.abs() * (c1.h0().potential(p).abs() + s.epsilon) + jet.d2.abs() * c1.f(p).powi(2) + 1e-300;
            prop_assert!((lhs - rhs).abs() <= 1e-8 * scale);
        }
    }
}
