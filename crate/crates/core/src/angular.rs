//! Spin spherical harmonics `Y_{s,j,m}` (orbital `l = j - s` coupled to spin
//! 1/2, Condon–Shortley phases) and pointwise checks of the angular identities
//! behind the radial reduction:
//!
//! * `σ_p² = 1` for `σ_p = σ·p̂`,
//! * `(σ·L + 1) Y_{s,j,m} = s(2j+1) Y_{s,j,m}`,
//! * `σ_p Y_{s,j,m} = -Y_{-s,j,m}`,
//! * `{σ_p, σ·L + 1} Y = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::Spin;
use crate::report::VerificationReport;

pub type Spinor = [Complex64; 2];
pub type Matrix2 = [[Complex64; 2]; 2];

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn factorial_ratio(l: u32, m: u32) -> f64 {
    // (l - m)! / (l + m)!
    ((l - m + 1)..=(l + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// Associated Legendre `P_l^m(cos θ)` for `m ≥ 0`, including `(-1)^m`.
fn assoc_legendre(l: u32, m: u32, theta: f64) -> f64 {
    if m > l {
        return 0.0;
    }
    let (s, x) = theta.sin_cos();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= -((2 * k - 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for ll in (m + 2)..=l {
        let next = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pm0) / (ll - m) as f64;
        pm0 = pm1;
        pm1 = next;
    }
    pm1
}

/// `Y_l^m(θ, φ)` with the Condon–Shortley phase; zero for `|m| > l`.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    if am > l {
        return ZERO;
    }
    let norm = ((2 * l + 1) as f64 / (4.0 * PI) * factorial_ratio(l, am)).sqrt();
    let y = Complex64::from_polar(norm * assoc_legendre(l, am, theta), am as f64 * phi);
    if m >= 0 {
        y
    } else if am % 2 == 0 {
        y.conj()
    } else {
        -y.conj()
    }
}

fn ladder_factor(l: u32, m: i32, up: bool) -> f64 {
    let (l, m) = (l as f64, m as f64);
    if up {
        ((l - m) * (l + m + 1.0)).max(0.0).sqrt()
    } else {
        ((l + m) * (l - m + 1.0)).max(0.0).sqrt()
    }
}

/// `∂_θ Y_l^m` from the raising and lowering actions.
pub fn spherical_harmonic_dtheta(l: u32, m: i32, theta: f64, phi: f64) -> Complex64 {
    let up = Complex64::from_polar(0.5 * ladder_factor(l, m, true), -phi)
        * spherical_harmonic(l, m + 1, theta, phi);
    let down = Complex64::from_polar(0.5 * ladder_factor(l, m, false), phi)
        * spherical_harmonic(l, m - 1, theta, phi);
    up - down
}

/// `⟨l μ, 1/2 σ | j m⟩` with `two_sigma = ±1`. Zero whenever a selection
/// rule fails.
pub fn cg_coefficient(l: u32, mu: i32, two_sigma: i32, two_j: u32, two_m: i32) -> f64 {
    if two_sigma.abs() != 1
        || 2 * mu + two_sigma != two_m
        || mu.unsigned_abs() > l
        || two_m.unsigned_abs() > two_j
    {
        return 0.0;
    }
    let lf = l as f64;
    let m = two_m as f64 / 2.0;
    let d = 2.0 * lf + 1.0;
    let plus = ((lf + m + 0.5) / d).max(0.0).sqrt();
    let minus = ((lf - m + 0.5) / d).max(0.0).sqrt();
    if two_j == 2 * l + 1 {
        if two_sigma > 0 {
            plus
        } else {
            minus
        }
    } else if l > 0 && two_j == 2 * l - 1 {
        if two_sigma > 0 {
            -minus
        } else {
            plus
        }
    } else {
        0.0
    }
}

/// `σ·p̂` for the direction `(θ, φ)`.
pub fn sigma_p_matrix(theta: f64, phi: f64) -> Matrix2 {
    let (s, c) = theta.sin_cos();
    [
        [Complex64::new(c, 0.0), Complex64::from_polar(s, -phi)],
        [Complex64::from_polar(s, phi), Complex64::new(-c, 0.0)],
    ]
}

fn sigma_p_dtheta(theta: f64, phi: f64) -> Matrix2 {
    let (s, c) = theta.sin_cos();
    [
        [Complex64::new(-s, 0.0), Complex64::from_polar(c, -phi)],
        [Complex64::from_polar(c, phi), Complex64::new(s, 0.0)],
    ]
}

fn sigma_p_dphi(theta: f64, phi: f64) -> Matrix2 {
    let s = theta.sin();
    [
        [ZERO, -I * Complex64::from_polar(s, -phi)],
        [I * Complex64::from_polar(s, phi), ZERO],
    ]
}

pub fn mat_vec(m: &Matrix2, v: &Spinor) -> Spinor {
    [
        m[0][0] * v[0] + m[0][1] * v[1],
        m[1][0] * v[0] + m[1][1] * v[1],
    ]
}

fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

fn norm(v: &Spinor) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

fn sub(a: &Spinor, b: &Spinor) -> Spinor {
    [a[0] - b[0], a[1] - b[1]]
}

fn add(a: &Spinor, b: &Spinor) -> Spinor {
    [a[0] + b[0], a[1] + b[1]]
}

/// A spinor whose components are finite sums `Σ c Y_l^μ`; closed under `L±`
/// and `L_z`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HarmonicSpinor {
    /// `(component, coefficient, l, μ)`.
    pub terms: Vec<(usize, f64, u32, i32)>,
}

impl HarmonicSpinor {
    pub fn eval(&self, theta: f64, phi: f64) -> Spinor {
        let mut out = [ZERO; 2];
        for &(c, coef, l, mu) in &self.terms {
            out[c] += coef * spherical_harmonic(l, mu, theta, phi);
        }
        out
    }

    pub fn dtheta(&self, theta: f64, phi: f64) -> Spinor {
        let mut out = [ZERO; 2];
        for &(c, coef, l, mu) in &self.terms {
            out[c] += coef * spherical_harmonic_dtheta(l, mu, theta, phi);
        }
        out
    }

    pub fn dphi(&self, theta: f64, phi: f64) -> Spinor {
        let mut out = [ZERO; 2];
        for &(c, coef, l, mu) in &self.terms {
            out[c] += I * (coef * mu as f64) * spherical_harmonic(l, mu, theta, phi);
        }
        out
    }

    /// `(σ·L + 1)` through `L_z Y = μ Y`, `L± Y = √((l∓μ)(l±μ+1)) Y_{μ±1}`.
    pub fn sigma_dot_l_plus_one(&self) -> Self {
        let mut terms = Vec::new();
        for &(c, coef, l, mu) in &self.terms {
            terms.push((c, coef, l, mu));
            if c == 0 {
                terms.push((0, coef * mu as f64, l, mu));
                terms.push((1, coef * ladder_factor(l, mu, true), l, mu + 1));
            } else {
                terms.push((1, -coef * mu as f64, l, mu));
                terms.push((0, coef * ladder_factor(l, mu, false), l, mu - 1));
            }
        }
        terms.retain(|t| t.1 != 0.0 && t.3.unsigned_abs() <= t.2);
        Self { terms }
    }
}

/// `Y_{s,j,m}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpinSphericalHarmonic {
    pub spin: Spin,
    pub two_j: u32,
    pub two_m: i32,
}

impl SpinSphericalHarmonic {
    pub fn new(spin: Spin, two_j: u32, two_m: i32) -> Result<Self> {
        if two_j % 2 == 0 || two_m % 2 == 0 || two_m.unsigned_abs() > two_j {
            return Err(Error::Domain(format!(
                "invalid quantum numbers 2j = {two_j}, 2m = {two_m}"
            )));
        }
        Ok(Self { spin, two_j, two_m })
    }

    /// `l = j - s`.
    pub fn l(&self) -> u32 {
        ((self.two_j as i32 - self.spin.sign()) / 2) as u32
    }

    pub fn flipped(&self) -> Self {
        Self {
            spin: self.spin.flip(),
            ..*self
        }
    }

    pub fn expansion(&self) -> HarmonicSpinor {
        let l = self.l();
        let mut terms = Vec::with_capacity(2);
        for (c, two_sigma) in [(0usize, 1i32), (1, -1)] {
            let mu = (self.two_m - two_sigma) / 2;
            let cg = cg_coefficient(l, mu, two_sigma, self.two_j, self.two_m);
            if cg != 0.0 {
                terms.push((c, cg, l, mu));
            }
        }
        HarmonicSpinor { terms }
    }

    pub fn eval(&self, theta: f64, phi: f64) -> Spinor {
        self.expansion().eval(theta, phi)
    }

    /// `s(2j + 1)`.
    pub fn eigenvalue(&self) -> f64 {
        (self.spin.sign() * (self.two_j as i32 + 1)) as f64 / 2.0
    }
}

/// `(σ·L + 1) F` from the differential form
/// `L_z = -i∂_φ`, `L± = e^{±iφ}(±∂_θ + i cot θ ∂_φ)` given `F`, `∂_θF`, `∂_φF`.
pub fn sigma_dot_l_plus_one_differential(
    f: &Spinor,
    ft: &Spinor,
    fp: &Spinor,
    theta: f64,
    phi: f64,
) -> Spinor {
    let cot = theta.cos() / theta.sin();
    let lz = |k: usize| -I * fp[k];
    let lplus = |k: usize| Complex64::from_polar(1.0, phi) * (ft[k] + I * cot * fp[k]);
    let lminus = |k: usize| Complex64::from_polar(1.0, -phi) * (-ft[k] + I * cot * fp[k]);
    [lz(0) + lminus(1) + f[0], lplus(0) - lz(1) + f[1]]
}

/// Random directions away from the poles, reproducible from `seed`.
pub fn sample_directions(count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let c: f64 = rng.gen_range(-0.995..0.995);
            (c.acos(), rng.gen_range(0.0..2.0 * PI))
        })
        .collect()
}

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Pointwise angular identities for one harmonic.
pub fn verify_angular_identities(
    spin: Spin,
    two_j: u32,
    two_m: i32,
    sample_count: usize,
    tol: f64,
) -> Result<VerificationReport> {
    verify_angular_identities_seeded(
        spin,
        two_j,
        two_m,
        sample_count,
        tol,
        DEFAULT_SEED
            ^ ((two_j as u64) << 8)
            ^ (two_m as i64 as u64)
            ^ ((spin.sign() as i64 as u64) << 20),
    )
}

pub fn verify_angular_identities_seeded(
    spin: Spin,
    two_j: u32,
    two_m: i32,
    sample_count: usize,
    tol: f64,
    seed: u64,
) -> Result<VerificationReport> {
    let y = SpinSphericalHarmonic::new(spin, two_j, two_m)?;
    let yx = y.expansion();
    let partner = y.flipped().expansion();
    let lifted = yx.sigma_dot_l_plus_one();
    let lambda = y.eigenvalue();
    let mut r = VerificationReport::new(format!("angular s={spin} 2j={two_j} 2m={two_m}"));
    let (mut e_sq, mut e_eig, mut e_diff, mut e_flip, mut e_anti, mut e_herm, mut e_trace) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (theta, phi) in sample_directions(sample_count, seed) {
        let sp = sigma_p_matrix(theta, phi);
        let sq = mat_mul(&sp, &sp);
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                e_sq = e_sq.max((sq[i][j] - id).norm());
                e_herm = e_herm.max((sp[i][j] - sp[j][i].conj()).norm());
            }
        }
        e_trace = e_trace.max((sp[0][0] + sp[1][1]).norm());

        let v = yx.eval(theta, phi);
        let vt = yx.dtheta(theta, phi);
        let vp = yx.dphi(theta, phi);
        let scale = norm(&v).max(1.0 / (4.0 * PI).sqrt());

        // (i) eigenvalue, by the closed action and by the differential form
        let closed = lifted.eval(theta, phi);
        let want = [lambda * v[0], lambda * v[1]];
        e_eig = e_eig.max(norm(&sub(&closed, &want)) / (lambda.abs() * scale));
        let diff = sigma_dot_l_plus_one_differential(&v, &vt, &vp, theta, phi);
        e_diff = e_diff.max(norm(&sub(&diff, &closed)) / (lambda.abs() * scale));

        // (ii) σ_p Y_s = -Y_{-s}
        let sy = mat_vec(&sp, &v);
        let other = partner.eval(theta, phi);
        e_flip = e_flip.max(norm(&add(&sy, &other)) / scale);

        // (iii) σ_p (σ·L+1) Y + (σ·L+1)(σ_p Y), the second term through the product rule
        let first = mat_vec(&sp, &closed);
        let g = sy;
        let gt = add(
            &mat_vec(&sigma_p_dtheta(theta, phi), &v),
            &mat_vec(&sp, &vt),
        );
        let gp = add(&mat_vec(&sigma_p_dphi(theta, phi), &v), &mat_vec(&sp, &vp));
        let second = sigma_dot_l_plus_one_differential(&g, &gt, &gp, theta, phi);
        e_anti = e_anti.max(norm(&add(&first, &second)) / (lambda.abs() * scale));
    }
    r.check("sigma_p squared", e_sq, tol);
    r.check("sigma_p hermitian", e_herm, tol);
    r.check("sigma_p traceless", e_trace, tol);
    r.check_with(
        "sigma.L+1 eigenvalue",
        e_eig,
        tol,
        format!("eigenvalue {lambda}"),
    );
    r.check("sigma.L differential form", e_diff, tol);
    r.check("sigma_p flips s", e_flip, tol);
    r.check("anticommutator", e_anti, tol);
    Ok(r)
}

/// Gauss–Legendre in `cos θ` times a uniform rule in `φ`; exact for products
/// of harmonics with `l ≤ order - 1`.
pub fn sphere_rule(order: usize) -> Vec<(f64, f64, f64)> {
    let nphi = 2 * order + 1;
    let dphi = 2.0 * PI / nphi as f64;
    let mut out = Vec::with_capacity(order * nphi);
    for (x, w) in crate::quadrature::gauss_legendre(order) {
        let theta = x.acos();
        for k in 0..nphi {
            out.push((theta, k as f64 * dphi, w * dphi));
        }
    }
    out
}

/// `∫ Y_a† Y_b dΩ`.
pub fn angular_overlap(
    a: &SpinSphericalHarmonic,
    b: &SpinSphericalHarmonic,
    rule: &[(f64, f64, f64)],
) -> Complex64 {
    let (ea, eb) = (a.expansion(), b.expansion());
    rule.iter()
        .map(|&(t, p, w)| {
            let (u, v) = (ea.eval(t, p), eb.eval(t, p));
            w * (u[0].conj() * v[0] + u[1].conj() * v[1])
        })
        .sum()
}

/// All harmonics with `j ≤ two_j_max / 2`.
pub fn harmonics_up_to(two_j_max: u32) -> Vec<SpinSphericalHarmonic> {
    let mut out = Vec::new();
    for two_j in (1..=two_j_max).step_by(2) {
        for spin in [Spin::Plus, Spin::Minus] {
            for two_m in (-(two_j as i32)..=two_j as i32).step_by(2) {
                out.push(SpinSphericalHarmonic { spin, two_j, two_m });
            }
        }
    }
    out
}

/// Orthonormality of every pair of harmonics with `j ≤ two_j_max / 2`.
pub fn verify_orthonormality(two_j_max: u32, tol: f64) -> VerificationReport {
    let hs = harmonics_up_to(two_j_max);
    let lmax = hs.iter().map(|h| h.l()).max().unwrap_or(0) as usize;
    let rule = sphere_rule(lmax + 2);
    let mut worst_norm = 0.0f64;
    let mut worst_overlap = 0.0f64;
    for (i, a) in hs.iter().enumerate() {
        for b in &hs[i..] {
            let o = angular_overlap(a, b, &rule);
            if a == b {
                worst_norm = worst_norm.max((o - 1.0).norm());
            } else {
                worst_overlap = worst_overlap.max(o.norm());
            }
        }
    }
    let mut r = VerificationReport::new(format!("angular orthonormality 2j<={two_j_max}"));
    r.check("unit norm", worst_norm, tol);
    r.check("orthogonality", worst_overlap, tol);
    r
}
