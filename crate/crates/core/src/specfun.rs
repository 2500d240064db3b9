//! Real-parameter Jacobi polynomials and the log-gamma function.
//!
//! Jacobi polynomials are evaluated by the forward three-term recurrence in
//! the degree, which is stable on `[-1, 1]` for the moderate degrees used by
//! the radial wavefunctions. Derivatives use the degree-lowering identity
//!
//! ```text
//! d/dz P_n^(a,b)(z) = (n + a + b + 1)/2 * P_{n-1}^(a+1,b+1)(z)
//! ```
//!
//! so no numerical differencing ever enters an operator application.

use crate::error::{Error, Result};

/// Degree and parameters of a Jacobi polynomial `P_n^(a,b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobiParams {
    pub n: u32,
    pub a: f64,
    pub b: f64,
}

impl JacobiParams {
    pub fn new(n: u32, a: f64, b: f64) -> Self {
        Self { n, a, b }
    }

    /// Whether the pair `(a, b)` admits the weight `(1-z)^a (1+z)^b` on `[-1, 1]`.
    pub fn is_orthogonality_admissible(&self) -> bool {
        self.a > -1.0 && self.b > -1.0
    }

    pub fn eval(&self, z: f64) -> f64 {
        jacobi_eval(self.n, self.a, self.b, z)
    }

    pub fn derivative(&self, z: f64) -> f64 {
        jacobi_derivative(self.n, self.a, self.b, z)
    }

    pub fn second_derivative(&self, z: f64) -> f64 {
        jacobi_second_derivative(self.n, self.a, self.b, z)
    }
}

/// `P_n^(a,b)(z)` by the three-term recurrence.
///
/// The recurrence divides by `2n (n+a+b) (2n+a+b-2)`; for the rare parameter
/// sets where that vanishes the explicit binomial sum is used instead.
pub fn jacobi_eval(n: u32, a: f64, b: f64, z: f64) -> f64 {
    debug_assert!(
        (-1.0..=1.0).contains(&z),
        "jacobi_eval called outside [-1, 1]: z = {z}"
    );
    if n == 0 {
        return 1.0;
    }
    let ab = a + b;
    let p1 = 0.5 * ((ab + 2.0) * z + (a - b));
    if n == 1 {
        return p1;
    }
    let mut prev = 1.0;
    let mut cur = p1;
    for k in 2..=n {
        let kf = k as f64;
        let two_k_ab = 2.0 * kf + ab;
        let c0 = 2.0 * kf * (kf + ab) * (two_k_ab - 2.0);
        if c0 == 0.0 {
            return jacobi_binomial_sum(n, a, b, z);
        }
        let c1 = (two_k_ab - 1.0) * (two_k_ab * (two_k_ab - 2.0) * z + a * a - b * b);
        let c2 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * two_k_ab;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    cur
}

/// Explicit form `sum_s C(n+a, n-s) C(n+b, s) ((z-1)/2)^s ((z+1)/2)^(n-s)`
/// with generalized binomial coefficients.
fn jacobi_binomial_sum(n: u32, a: f64, b: f64, z: f64) -> f64 {
    let zm = 0.5 * (z - 1.0);
    let zp = 0.5 * (z + 1.0);
    (0..=n)
        .map(|s| {
            binomial(n as f64 + a, n - s)
                * binomial(n as f64 + b, s)
                * zm.powi(s as i32)
                * zp.powi((n - s) as i32)
        })
        .sum()
}

/// Generalized binomial coefficient `C(x, k)` for real `x` and integer `k`.
fn binomial(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i as f64 + 1.0))
}

/// `dP_n^(a,b)/dz` from the degree-lowering identity.
pub fn jacobi_derivative(n: u32, a: f64, b: f64, z: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    0.5 * (n as f64 + a + b + 1.0) * jacobi_eval(n - 1, a + 1.0, b + 1.0, z)
}

/// `d²P_n^(a,b)/dz²`, the lowering identity applied twice.
pub fn jacobi_second_derivative(n: u32, a: f64, b: f64, z: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    0.25 * (nf + a + b + 1.0) * (nf + a + b + 2.0) * jacobi_eval(n - 2, a + 2.0, b + 2.0, z)
}

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

// Stirling-series coefficients B_{2k} / (2k (2k-1)), k = 1..7.
const STIRLING: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
];

const STIRLING_MIN: f64 = 15.0;

fn stirling_tail(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut term = inv;
    let mut sum = 0.0;
    for c in STIRLING {
        sum += c * term;
        term *= inv2;
    }
    sum
}

/// `ln Γ(x)` for `x > 0`.
///
/// Arguments below 15 are shifted upward with the functional equation, then
/// the Stirling series (seven correction terms) is summed.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "log_gamma requires a positive finite argument, got {x}"
        )));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut shifted = x;
    let mut prod = 1.0;
    while shifted < STIRLING_MIN {
        prod *= shifted;
        shifted += 1.0;
    }
    let lg = (shifted - 0.5) * shifted.ln() - shifted + HALF_LN_TWO_PI + stirling_tail(shifted);
    Ok(lg - prod.ln())
}

/// `ln Γ(x + d) - ln Γ(x)` for `x > 0`, `x + d > 0`.
///
/// For large `x` the difference is formed analytically inside the Stirling
/// series so the two large logarithms never cancel numerically.
pub fn log_gamma_ratio(x: f64, d: f64) -> Result<f64> {
    let y = x + d;
    if !(x > 0.0) || !(y > 0.0) {
        return Err(Error::Domain(format!(
            "log_gamma_ratio requires positive arguments, got x = {x}, x + d = {y}"
        )));
    }
    if x < 1.0e3 || y < 1.0e3 {
        return Ok(log_gamma(y)? - log_gamma(x)?);
    }
    // (y - 1/2) ln y - (x - 1/2) ln x - d, rearranged as
    // (x - 1/2) ln(1 + d/x) + d ln y - d.
    let main = (x - 0.5) * (d / x).ln_1p() + d * y.ln() - d;
    Ok(main + stirling_tail(y) - stirling_tail(x))
}
