//! Deformation parameters, `(s, j)` channels, j-regime classification and
//! the closed-form energy spectrum.
//!
//! Units are `ħ = c = m = 1`. Half-integers are carried as doubled integers
//! (`two_j`) so that `j`, `l` and the principal quantum number stay exact.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack used to decide that a regime inequality is an equality.
const BOUNDARY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationParams {
    pub omega: f64,
    pub beta: f64,
    pub beta_prime: f64,
    /// Weight-function constant of the momentum realization. It drops out of
    /// the radial scalar product and is carried for bookkeeping only.
    pub gamma: f64,
}

impl DeformationParams {
    pub fn new(omega: f64, beta: f64, beta_prime: f64) -> Result<Self> {
        Self::with_gamma(omega, beta, beta_prime, 0.0)
    }

    pub fn with_gamma(omega: f64, beta: f64, beta_prime: f64, gamma: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::Domain(format!(
                "omega must be positive, got {omega}"
            )));
        }
        if !(beta >= 0.0) || !(beta_prime >= 0.0) || !beta.is_finite() || !beta_prime.is_finite() {
            return Err(Error::Domain(format!(
                "beta and beta' must be finite and nonnegative, got {beta}, {beta_prime}"
            )));
        }
        if beta + beta_prime <= 0.0 {
            return Err(Error::Domain(
                "beta + beta' must be strictly positive; use a small value such as 1e-8 \
                 for the undeformed limit"
                    .into(),
            ));
        }
        if !gamma.is_finite() {
            return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
        }
        Ok(Self {
            omega,
            beta,
            beta_prime,
            gamma,
        })
    }

    /// `β₀ = β + β'`, the momentum compactification scale.
    pub fn beta0(&self) -> f64 {
        self.beta + self.beta_prime
    }

    /// `α = (γ - β') / β₀`.
    pub fn alpha(&self) -> f64 {
        (self.gamma - self.beta_prime) / self.beta0()
    }

    pub fn beta_omega(&self) -> f64 {
        self.beta * self.omega
    }

    pub fn beta_prime_omega(&self) -> f64 {
        self.beta_prime * self.omega
    }

    /// Both dimensionless deformations are below `0.1`. Informational only.
    pub fn is_small_deformation(&self) -> bool {
        self.beta_omega() < 0.1 && self.beta_prime_omega() < 0.1
    }
}

/// Spin-orbit label `s = j - l = ±1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Spin {
    /// `s = -1/2`, `l = j + 1/2`.
    #[serde(rename = "-")]
    Minus,
    /// `s = +1/2`, `l = j - 1/2`.
    #[serde(rename = "+")]
    Plus,
}

impl Spin {
    pub fn sign(self) -> i32 {
        match self {
            Spin::Plus => 1,
            Spin::Minus => -1,
        }
    }

    pub fn value(self) -> f64 {
        0.5 * self.sign() as f64
    }

    pub fn flip(self) -> Self {
        match self {
            Spin::Plus => Spin::Minus,
            Spin::Minus => Spin::Plus,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Plus => "+",
            Spin::Minus => "-",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    SmallJ,
    IntermediateJ,
    VeryLargeJ,
    SMinus,
}

impl Regime {
    /// `ε` of the compact spectrum formula; undefined for the intermediate window.
    pub fn epsilon(self) -> Option<i32> {
        match self {
            Regime::SmallJ | Regime::SMinus => Some(1),
            Regime::VeryLargeJ => Some(-1),
            Regime::IntermediateJ => None,
        }
    }

    pub fn has_bound_states(self) -> bool {
        self != Regime::IntermediateJ
    }

    /// Unbroken supersymmetry: a normalizable zero mode of `b⁻` exists.
    pub fn is_susy_unbroken(self) -> bool {
        self == Regime::SmallJ
    }
}

/// The numbers that decide the regime of an `s = +1/2` channel:
/// small iff `2βωj < small_bound`, very large iff `2βωj > very_large_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeInequalities {
    pub two_beta_omega_j: f64,
    /// `2 - 2βω - β'ω`
    pub small_bound: f64,
    /// `2 + β'ω`
    pub very_large_bound: f64,
}

impl RegimeInequalities {
    pub fn new(two_j: u32, params: &DeformationParams) -> Self {
        let bw = params.beta_omega();
        let bpw = params.beta_prime_omega();
        Self {
            two_beta_omega_j: bw * two_j as f64,
            small_bound: 2.0 - 2.0 * bw - bpw,
            very_large_bound: 2.0 + bpw,
        }
    }
}

impl fmt::Display for RegimeInequalities {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "2*beta*omega*j = {:.12e}, small-j bound 2-2*beta*omega-beta'*omega = {:.12e}, \
             very-large-j bound 2+beta'*omega = {:.12e}",
            self.two_beta_omega_j, self.small_bound, self.very_large_bound
        )
    }
}

fn check_two_j(two_j: u32) -> Result<()> {
    if two_j == 0 || two_j % 2 == 0 {
        return Err(Error::Domain(format!(
            "two_j must be a positive odd integer, got {two_j}"
        )));
    }
    Ok(())
}

fn near(x: f64, y: f64) -> bool {
    (x - y).abs() <= BOUNDARY_RTOL * x.abs().max(y.abs()).max(1.0)
}

/// Regime of the channel `(s, j)`. Strict inequalities only; landing on a
/// boundary is reported as [`Error::BoundaryUnphysical`].
pub fn classify(spin: Spin, two_j: u32, params: &DeformationParams) -> Result<Regime> {
    check_two_j(two_j)?;
    if spin == Spin::Minus {
        return Ok(Regime::SMinus);
    }
    let ineq = RegimeInequalities::new(two_j, params);
    let x = ineq.two_beta_omega_j;
    if near(x, ineq.small_bound) || near(x, ineq.very_large_bound) {
        return Err(Error::BoundaryUnphysical(format!(
            "s = +1/2, j = {two_j}/2 lies on a regime boundary ({ineq})"
        )));
    }
    Ok(if x < ineq.small_bound {
        Regime::SmallJ
    } else if x > ineq.very_large_bound {
        Regime::VeryLargeJ
    } else {
        Regime::IntermediateJ
    })
}

/// One radial problem: fixed `(s, j)` with the derived operator parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Channel {
    pub spin: Spin,
    pub two_j: u32,
    /// Orbital quantum number `l = j - s`.
    pub l: u32,
    /// `g = 1/ω - β s (2j + 1)`
    pub g: f64,
    /// `k = s (2j + 1)`
    pub k: f64,
    pub beta0: f64,
    pub regime: Regime,
}

impl Channel {
    pub fn j(&self) -> f64 {
        0.5 * self.two_j as f64
    }

    pub fn epsilon(&self) -> Option<i32> {
        self.regime.epsilon()
    }
}

pub fn derive_channel(spin: Spin, two_j: u32, params: &DeformationParams) -> Result<Channel> {
    check_two_j(two_j)?;
    let regime = classify(spin, two_j, params)?;
    let k = (spin.sign() * (two_j as i32 + 1)) as f64 / 2.0;
    let g = 1.0 / params.omega - params.beta * k;
    let l = ((two_j as i32 - spin.sign()) / 2) as u32;
    Ok(Channel {
        spin,
        two_j,
        l,
        g,
        k,
        beta0: params.beta0(),
        regime,
    })
}

/// `e = (E² - 1)/ω²` together with `E² - 1` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergySquared {
    pub e: f64,
    pub e2_minus_1: f64,
}

fn no_bound_state(channel: &Channel, params: &DeformationParams) -> Error {
    Error::NoBoundState {
        detail: format!(
            "s = {}, j = {}/2 is in the intermediate-j window ({})",
            channel.spin,
            channel.two_j,
            RegimeInequalities::new(channel.two_j, params)
        ),
    }
}

/// Closed-form `E² - 1` for radial quantum number `n`.
pub fn energy_squared(
    n: u32,
    channel: &Channel,
    params: &DeformationParams,
) -> Result<EnergySquared> {
    let w = params.omega;
    let bw = params.beta_omega();
    let bpw = params.beta_prime_omega();
    let nf = n as f64;
    let j = channel.j();
    let e2m1 = match channel.regime {
        Regime::SmallJ => 4.0 * w * nf * (1.0 + bw * nf + bpw * (nf + j + 0.5)),
        Regime::VeryLargeJ => {
            4.0 * w * (nf + j + 1.0) * (-1.0 + bw * (nf + j + 1.0) + bpw * (nf + 0.5))
        }
        Regime::SMinus => 4.0 * w * (nf + j + 1.0) * (1.0 + bw * (nf + j + 1.0) + bpw * (nf + 0.5)),
        Regime::IntermediateJ => return Err(no_bound_state(channel, params)),
    };
    if e2m1 < 0.0 {
        return Err(Error::Consistency(format!(
            "negative E^2 - 1 = {e2m1} for n = {n} in {:?}",
            channel.regime
        )));
    }
    Ok(EnergySquared {
        e: e2m1 / (w * w),
        e2_minus_1: e2m1,
    })
}

/// `E² - 1` from the single formula parameterized by `ε`.
pub fn energy_squared_compact(
    n: u32,
    channel: &Channel,
    params: &DeformationParams,
) -> Result<f64> {
    let eps = channel
        .epsilon()
        .ok_or_else(|| no_bound_state(channel, params))? as f64;
    let s = channel.spin.value();
    let j = channel.j();
    let nf = n as f64;
    let m = nf + (1.0 - s - 0.5 * eps) * (j + 1.0);
    Ok(4.0
        * params.omega
        * m
        * (eps
            + params.beta_omega() * m
            + params.beta_prime_omega() * (nf + 0.5 + (s + 0.5 * eps) * j)))
}

/// Principal quantum number `N = 2n + l`.
pub fn principal_number(n: u32, channel: &Channel) -> u32 {
    2 * n + channel.l
}

/// `E² - 1` written in terms of the principal quantum number `N`.
pub fn energy_squared_principal(
    principal: u32,
    channel: &Channel,
    params: &DeformationParams,
) -> Result<f64> {
    if principal < channel.l || (principal - channel.l) % 2 != 0 {
        return Err(Error::Domain(format!(
            "N = {principal} is not of the form 2n + l with l = {}",
            channel.l
        )));
    }
    let w = params.omega;
    let bw = params.beta_omega();
    let bpw = params.beta_prime_omega();
    let big_n = principal as f64;
    let j = channel.j();
    Ok(match channel.regime {
        Regime::SmallJ => {
            let m = big_n - j + 0.5;
            2.0 * w * m * (1.0 + 0.5 * bw * m + 0.5 * bpw * (big_n + j + 1.5))
        }
        Regime::VeryLargeJ => {
            let m = big_n + j + 2.5;
            2.0 * w * m * (-1.0 + 0.5 * bw * m + 0.5 * bpw * (big_n - j + 1.5))
        }
        Regime::SMinus => {
            let m = big_n + j + 1.5;
            2.0 * w * m * (1.0 + 0.5 * bw * m + 0.5 * bpw * (big_n - j + 0.5))
        }
        Regime::IntermediateJ => return Err(no_bound_state(channel, params)),
    })
}

/// Conventional (undeformed) oscillator: `E² - 1 = 2ω [N + 1 - s(2j+1)]`.
pub fn nondeformed_reference(principal: u32, spin: Spin, two_j: u32, omega: f64) -> Result<f64> {
    check_two_j(two_j)?;
    let l = (two_j as i32 - spin.sign()) / 2;
    if (principal as i32) < l {
        return Err(Error::Domain(format!("N = {principal} is below l = {l}")));
    }
    let k = (spin.sign() * (two_j as i32 + 1)) as f64 / 2.0;
    Ok(2.0 * omega * (principal as f64 + 1.0 - k))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub spin: Spin,
    pub two_j: u32,
    pub regime: Regime,
    pub n: u32,
    /// Principal quantum number `N = 2n + j - s`.
    pub principal: u32,
    pub sigma: i32,
    pub e: f64,
    pub e2_minus_1: f64,
    pub energy: f64,
}

/// Channels that were skipped while tabulating.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedChannel {
    pub spin: Spin,
    pub two_j: u32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub entries: Vec<SpectrumEntry>,
    pub no_bound_state: Vec<SkippedChannel>,
    pub boundary: Vec<SkippedChannel>,
}

/// Smallest `n` carried by the branch `σ` in a channel. The `E = -1` zero
/// mode of the small-j channels is not a solution of the coupled equations.
pub fn first_n(regime: Regime, sigma: i32) -> u32 {
    if regime == Regime::SmallJ && sigma < 0 {
        1
    } else {
        0
    }
}

pub fn spectrum_table(
    params: &DeformationParams,
    two_j_max: u32,
    n_max: u32,
) -> Result<SpectrumTable> {
    if two_j_max == 0 {
        return Err(Error::Domain("two_j_max must be at least 1".into()));
    }
    let mut entries = Vec::new();
    let mut no_bound_state = Vec::new();
    let mut boundary = Vec::new();
    for two_j in (1..=two_j_max).step_by(2) {
        for spin in [Spin::Plus, Spin::Minus] {
            let channel = match derive_channel(spin, two_j, params) {
                Ok(c) => c,
                Err(Error::BoundaryUnphysical(reason)) => {
                    boundary.push(SkippedChannel {
                        spin,
                        two_j,
                        reason,
                    });
                    continue;
                }
                Err(e) => return Err(e),
            };
            if !channel.regime.has_bound_states() {
                no_bound_state.push(SkippedChannel {
                    spin,
                    two_j,
                    reason: RegimeInequalities::new(two_j, params).to_string(),
                });
                continue;
            }
            for sigma in [1, -1] {
                for n in first_n(channel.regime, sigma)..=n_max {
                    let es = energy_squared(n, &channel, params)?;
                    entries.push(SpectrumEntry {
                        spin,
                        two_j,
                        regime: channel.regime,
                        n,
                        principal: principal_number(n, &channel),
                        sigma,
                        e: es.e,
                        e2_minus_1: es.e2_minus_1,
                        energy: sigma as f64 * (1.0 + es.e2_minus_1).sqrt(),
                    });
                }
            }
        }
    }
    entries.sort_by(entry_order);
    Ok(SpectrumTable {
        entries,
        no_bound_state,
        boundary,
    })
}

fn entry_order(x: &SpectrumEntry, y: &SpectrumEntry) -> Ordering {
    x.energy
        .abs()
        .total_cmp(&y.energy.abs())
        .then(x.two_j.cmp(&y.two_j))
        .then(y.spin.cmp(&x.spin))
        .then(y.sigma.cmp(&x.sigma))
        .then(x.n.cmp(&y.n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(omega: f64, beta: f64, beta_prime: f64) -> DeformationParams {
        DeformationParams::new(omega, beta, beta_prime).unwrap()
    }

    #[test]
    fn channel_examples() {
        let p = params(1.0, 0.01, 0.01);
        let c = derive_channel(Spin::Plus, 1, &p).unwrap();
        assert!((c.g - 0.99).abs() < 1e-15);
        assert_eq!(c.k, 1.0);
        assert_eq!(c.l, 0);
        let c = derive_channel(Spin::Minus, 1, &p).unwrap();
        assert!((c.g - 1.01).abs() < 1e-15);
        assert_eq!(c.k, -1.0);
        assert_eq!(c.l, 1);
        let c = derive_channel(Spin::Plus, 1, &params(1.0, 1e-12, 1e-12)).unwrap();
        assert!((c.g - 1.0).abs() < 1e-11);
        assert_eq!(c.k, 1.0);
    }

    #[test]
    fn even_or_zero_two_j_rejected() {
        let p = params(1.0, 0.01, 0.0);
        assert!(matches!(
            derive_channel(Spin::Plus, 2, &p),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            classify(Spin::Minus, 0, &p),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn parameter_validation() {
        assert!(DeformationParams::new(0.0, 0.01, 0.0).is_err());
        assert!(DeformationParams::new(1.0, -0.01, 0.0).is_err());
        assert!(DeformationParams::new(1.0, 0.0, 0.0).is_err());
        let p = DeformationParams::with_gamma(2.0, 0.01, 0.03, 0.05).unwrap();
        assert!((p.beta0() - 0.04).abs() < 1e-16);
        assert!((p.alpha() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn classify_examples() {
        let p = params(1.0, 0.01, 0.0);
        assert_eq!(classify(Spin::Plus, 1, &p).unwrap(), Regime::SmallJ);
        assert_eq!(classify(Spin::Plus, 197, &p).unwrap(), Regime::SmallJ);
        assert_eq!(
            classify(Spin::Plus, 199, &p).unwrap(),
            Regime::IntermediateJ
        );
        assert_eq!(classify(Spin::Plus, 201, &p).unwrap(), Regime::VeryLargeJ);
        for two_j in [1, 199, 201, 999] {
            assert_eq!(classify(Spin::Minus, two_j, &p).unwrap(), Regime::SMinus);
        }
    }

    #[test]
    fn boundary_is_an_error() {
        // 2βω(j+1) + β'ω = 2 with βω = 0.01, β'ω = 0.01 → 2βωj = 1.97 → j = 98.5
        let p = params(1.0, 0.01, 0.01);
        assert!(matches!(
            classify(Spin::Plus, 197, &p),
            Err(Error::BoundaryUnphysical(_))
        ));
        // 2βωj = 2 + β'ω with βω = 0.02, β'ω = 0.02 → j = 50.5
        let p = params(1.0, 0.02, 0.02);
        assert!(matches!(
            classify(Spin::Plus, 101, &p),
            Err(Error::BoundaryUnphysical(_))
        ));
    }

    #[test]
    fn energy_examples() {
        let p = params(1.0, 0.01, 0.01);
        let up = derive_channel(Spin::Plus, 1, &p).unwrap();
        assert_eq!(energy_squared(0, &up, &p).unwrap().e2_minus_1, 0.0);
        let e1 = energy_squared(1, &up, &p).unwrap();
        assert!((e1.e2_minus_1 - 4.12).abs() < 1e-13);
        let down = derive_channel(Spin::Minus, 1, &p).unwrap();
        assert!((energy_squared(0, &down, &p).unwrap().e2_minus_1 - 6.12).abs() < 1e-13);

        let p = params(1.0, 0.01, 0.0);
        let big = derive_channel(Spin::Plus, 201, &p).unwrap();
        assert_eq!(big.regime, Regime::VeryLargeJ);
        assert!((energy_squared(0, &big, &p).unwrap().e2_minus_1 - 6.09).abs() < 1e-12);
    }

    #[test]
    fn intermediate_has_no_bound_state() {
        let p = params(1.0, 0.01, 0.0);
        let c = derive_channel(Spin::Plus, 199, &p).unwrap();
        let err = energy_squared(0, &c, &p).unwrap_err();
        match err {
            Error::NoBoundState { detail } => assert!(detail.contains("2*beta*omega*j")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nondeformed_reference_examples() {
        // N = j - 1/2 = 0, s = +1/2
        assert_eq!(nondeformed_reference(0, Spin::Plus, 1, 1.0).unwrap(), 0.0);
        assert_eq!(nondeformed_reference(2, Spin::Minus, 1, 1.0).unwrap(), 8.0);
        assert_eq!(nondeformed_reference(4, Spin::Plus, 1, 1.0).unwrap(), 8.0);
        assert!(nondeformed_reference(0, Spin::Minus, 1, 1.0).is_err());
    }

    #[test]
    fn table_excludes_negative_zero_mode_and_is_sorted() {
        let p = params(1.0, 0.01, 0.01);
        let t = spectrum_table(&p, 5, 3).unwrap();
        assert!(!t
            .entries
            .iter()
            .any(|e| e.regime == Regime::SmallJ && e.sigma == -1 && e.n == 0));
        assert!(t
            .entries
            .windows(2)
            .all(|w| entry_order(&w[0], &w[1]) != Ordering::Greater));
        let row = t
            .entries
            .iter()
            .find(|e| e.spin == Spin::Plus && e.two_j == 1 && e.n == 1 && e.sigma == 1)
            .unwrap();
        assert!((row.e2_minus_1 - 4.12).abs() < 1e-13);
        // negative branch of the small-j channels starts at N = j + 3/2
        for e in &t.entries {
            if e.regime == Regime::SmallJ && e.sigma < 0 {
                assert!(2 * e.principal >= e.two_j + 3);
            }
        }
    }

    #[test]
    fn table_flags_intermediate_channels() {
        let p = params(1.0, 0.01, 0.0);
        let t = spectrum_table(&p, 203, 0).unwrap();
        assert_eq!(t.no_bound_state.len(), 1);
        assert_eq!(t.no_bound_state[0].two_j, 199);
        assert!(t.entries.iter().any(|e| e.regime == Regime::VeryLargeJ));
    }

    #[test]
    fn nondeformed_limit() {
        let p = params(1.0, 1e-8, 1e-8);
        let t = spectrum_table(&p, 9, 6).unwrap();
        for e in &t.entries {
            let r = nondeformed_reference(e.principal, e.spin, e.two_j, 1.0).unwrap();
            assert!(
                (e.e2_minus_1 - r).abs() <= 1e-6 * r.abs().max(1.0),
                "{e:?} vs {r}"
            );
        }
    }

    fn omegas() -> impl Strategy<Value = f64> {
        0.2f64..5.0
    }

    proptest! {
        #[test]
        fn regime_trichotomy(bw in 1e-4f64..0.2, bpw in 0.0f64..0.2, two_j in (0u32..400).prop_map(|x| 2 * x + 1)) {
            let p = DeformationParams::new(1.0, bw, bpw).unwrap();
            let ineq = RegimeInequalities::new(two_j, &p);
            let x = ineq.two_beta_omega_j;
            let preds = [x < ineq.small_bound, x > ineq.small_bound && x < ineq.very_large_bound, x > ineq.very_large_bound];
            match classify(Spin::Plus, two_j, &p) {
                Ok(r) => {
                    prop_assert_eq!(preds.iter().filter(|&&b| b).count(), 1);
                    let expect = [Regime::SmallJ, Regime::IntermediateJ, Regime::VeryLargeJ];
                    let idx = preds.iter().position(|&b| b).unwrap();
                    prop_assert_eq!(r, expect[idx]);
                }
                Err(Error::BoundaryUnphysical(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }

        #[test]
        fn forms_agree(omega in omegas(), bw in 1e-4f64..0.05, bpw in 0.0f64..0.05, two_j in (0u32..300).prop_map(|x| 2 * x + 1), n in 0u32..30, up in any::<bool>()) {
            let p = DeformationParams::new(omega, bw / omega, bpw / omega).unwrap();
            let spin = if up { Spin::Plus } else { Spin::Minus };
            let Ok(c) = derive_channel(spin, two_j, &p) else { return Ok(()) };
            if !c.regime.has_bound_states() { return Ok(()); }
            let direct = energy_squared(n, &c, &p).unwrap().e2_minus_1;
            let compact = energy_squared_compact(n, &c, &p).unwrap();
            let principal = energy_squared_principal(principal_number(n, &c), &c, &p).unwrap();
            let tol = 1e-12 * direct.abs().max(1.0);
            prop_assert!((direct - compact).abs() < tol);
            prop_assert!((direct - principal).abs() < tol);
        }

        #[test]
        fn spectrum_increases_with_n(omega in omegas(), bw in 1e-4f64..0.05, bpw in 0.0f64..0.05, two_j in (0u32..300).prop_map(|x| 2 * x + 1), up in any::<bool>()) {
            let p = DeformationParams::new(omega, bw / omega, bpw / omega).unwrap();
            let spin = if up { Spin::Plus } else { Spin::Minus };
            let Ok(c) = derive_channel(spin, two_j, &p) else { return Ok(()) };
            if !c.regime.has_bound_states() { return Ok(()); }
            let es: Vec<f64> = (0..20).map(|n| energy_squared(n, &c, &p).unwrap().e).collect();
            prop_assert!(es.iter().all(|&e| e >= 0.0));
            prop_assert!(es.windows(2).all(|w| w[1] > w[0]));
            prop_assert_eq!(es[0] == 0.0, c.regime == Regime::SmallJ);
        }

        #[test]
        fn no_negative_zero_mode(omega in omegas(), bw in 1e-4f64..0.05, bpw in 0.0f64..0.05, two_j_max in (0u32..60).prop_map(|x| 2 * x + 1)) {
            let p = DeformationParams::new(omega, bw / omega, bpw / omega).unwrap();
            let t = spectrum_table(&p, two_j_max, 3).unwrap();
            prop_assert!(!t.entries.iter().any(|e| e.regime == Regime::SmallJ && e.sigma == -1 && e.n == 0));
            prop_assert!(t.entries.iter().all(|e| e.energy.abs() >= 1.0));
        }
    }
}
