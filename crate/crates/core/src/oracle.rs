//! Brute-force spectrum of `h₀` from a finite-difference discretization,
//! diagonalized by bisection on the matrix inertia.
//!
//! The grid is uniform in the angle `θ ∈ (0, π/2)` with `z = -cos 2θ`,
//! `p = tan θ / √β₀`. In that variable `f d/dp = √β₀ d/dθ`, the measure
//! `dp/f` is `dθ/√β₀`, and
//!
//! `h₀ = -β₀ d²/dθ² + (P/β₀) tan²θ + Q β₀ cot²θ + C`
//!
//! for an operator with `p²` coefficient `P`, `p⁻²` coefficient `Q` and
//! constant `C`. The uniform weight makes the matrix symmetric as built.
//! Only [`H0Coeffs`] enter; no Jacobi polynomial or closed-form level is used.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{energy_squared, Channel, DeformationParams, Regime};
use crate::operators::{ground_factorization, H0Coeffs, LadderCoeffs};
use crate::report::VerificationReport;

pub const MIN_GRID: usize = 64;
pub const DEFAULT_GRID: usize = 3999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub enum FdOrder {
    #[default]
    Second,
    Fourth,
}

impl FdOrder {
    pub fn order(self) -> i32 {
        match self {
            FdOrder::Second => 2,
            FdOrder::Fourth => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Interior nodes.
    pub size: usize,
    pub z_min: f64,
    pub z_max: f64,
    pub fd_order: FdOrder,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            size: DEFAULT_GRID,
            z_min: -1.0,
            z_max: 1.0,
            fd_order: FdOrder::Second,
        }
    }
}

impl GridSpec {
    pub fn with_size(mut self, size: usize) -> Self {
        self.size = size;
        self
    }

    pub fn with_truncation(mut self, delta: f64) -> Self {
        self.z_min = -1.0 + delta;
        self.z_max = 1.0 - delta;
        self
    }

    pub fn with_fd_order(mut self, order: FdOrder) -> Self {
        self.fd_order = order;
        self
    }

    /// Same interval with the spacing halved.
    pub fn refined(&self) -> Self {
        self.with_size(2 * self.size + 1)
    }

    fn validate(&self) -> Result<()> {
        if self.size < MIN_GRID {
            return Err(Error::Config(format!(
                "grid needs at least {MIN_GRID} interior nodes, got {}",
                self.size
            )));
        }
        if !(self.z_min >= -1.0 && self.z_min < self.z_max && self.z_max <= 1.0) {
            return Err(Error::Config(format!(
                "invalid grid interval [{}, {}]",
                self.z_min, self.z_max
            )));
        }
        Ok(())
    }

    /// Angle of `z` with full precision near both ends.
    fn theta(z: f64) -> f64 {
        if z < 0.0 {
            (0.5 * (1.0 + z)).sqrt().asin()
        } else {
            (0.5 * (1.0 - z)).sqrt().acos()
        }
    }

    /// `(θ_min, h)`; node `i` sits at `θ_min + (i + 1) h`.
    pub fn angles(&self) -> (f64, f64) {
        let t0 = Self::theta(self.z_min);
        let t1 = Self::theta(self.z_max);
        (t0, (t1 - t0) / (self.size + 1) as f64)
    }
}

/// Symmetric banded matrix; `bands[d][i] = A[i][i+d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymBandMatrix {
    n: usize,
    bands: Vec<Vec<f64>>,
}

impl SymBandMatrix {
    pub fn zeros(n: usize, bandwidth: usize) -> Self {
        let bands = (0..=bandwidth)
            .map(|d| vec![0.0; n.saturating_sub(d)])
            .collect();
        Self { n, bands }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        Self {
            n: diag.len(),
            bands: vec![diag.to_vec()],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        let d = hi - lo;
        if d > self.bandwidth() {
            0.0
        } else {
            self.bands[d][lo]
        }
    }

    /// Sets `A[i][j]` and `A[j][i]`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.bands[hi - lo][lo] = v;
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let w = self.bandwidth();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let mut r = 0.0;
            for j in i.saturating_sub(w)..(i + w + 1).min(self.n) {
                if j != i {
                    r += self.get(i, j).abs();
                }
            }
            let a = self.get(i, i);
            lo = lo.min(a - r);
            hi = hi.max(a + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues below `sigma`, from the signs of the pivots of
    /// `A - σ I = L D Lᵀ`. Exactly zero pivots are nudged negative.
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.n;
        let w = self.bandwidth();
        let mut d = vec![0.0; n];
        // l[i * w + (t - 1)] = L[i][i - t]
        let mut l = vec![0.0; n * w.max(1)];
        let mut count = 0;
        for i in 0..n {
            for t in (1..=w.min(i)).rev() {
                let m = i - t;
                let mut s = self.bands[t][m];
                for q in i.saturating_sub(w)..m {
                    s -= l[i * w + (i - q - 1)] * l[m * w + (m - q - 1)] * d[q];
                }
                l[i * w + (t - 1)] = s / d[m];
            }
            let aii = self.bands[0][i] - sigma;
            let mut di = aii;
            for q in i.saturating_sub(w)..i {
                let lv = l[i * w + (i - q - 1)];
                di -= lv * lv * d[q];
            }
            if di == 0.0 {
                di = -f64::EPSILON * (aii.abs() + sigma.abs() + f64::MIN_POSITIVE);
            }
            if di < 0.0 {
                count += 1;
            }
            d[i] = di;
        }
        count
    }
}

const MAX_BISECTIONS: usize = 400;
const ABS_RESOLUTION: f64 = 1e-15;

/// The `count` smallest eigenvalues in ascending order.
pub fn lowest_eigenvalues(matrix: &SymBandMatrix, count: usize) -> Result<Vec<f64>> {
    if count > matrix.size() {
        return Err(Error::Config(format!(
            "asked for {count} eigenvalues of a {0}x{0} matrix",
            matrix.size()
        )));
    }
    let (glo, ghi) = matrix.gershgorin();
    if !glo.is_finite() || !ghi.is_finite() {
        return Err(Error::Numerical(format!(
            "matrix has non-finite entries (Gershgorin bounds {glo}, {ghi})"
        )));
    }
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let (mut lo, mut hi) = (out.last().copied().unwrap_or(glo), ghi);
        let mut converged = false;
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (lo + hi);
            if hi - lo <= (4.0 * f64::EPSILON * lo.abs().max(hi.abs())).max(ABS_RESOLUTION)
                || mid <= lo
                || mid >= hi
            {
                converged = true;
                break;
            }
            if matrix.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        if !converged {
            return Err(Error::Numerical(format!(
                "bisection for eigenvalue {k} did not converge: bracket [{lo:e}, {hi:e}]"
            )));
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Finite-difference matrix of a second-order operator in the angle.
pub fn discretize(coeffs: &H0Coeffs, grid: &GridSpec) -> Result<SymBandMatrix> {
    grid.validate()?;
    let n = grid.size;
    let (t0, h) = grid.angles();
    let b0 = coeffs.beta0;
    let kin = coeffs.kinetic * b0 / (h * h);
    let mut m = match grid.fd_order {
        FdOrder::Second => SymBandMatrix::zeros(n, 1),
        FdOrder::Fourth => SymBandMatrix::zeros(n, 2),
    };
    for i in 0..n {
        let t = t0 + (i + 1) as f64 * h;
        let (s, c) = t.sin_cos();
        let (s2, c2) = (s * s, c * c);
        let v = coeffs.p2 / b0 * s2 / c2 + coeffs.inv_p2 * b0 * c2 / s2 + coeffs.constant;
        match grid.fd_order {
            FdOrder::Second => {
                m.set(i, i, 2.0 * kin + v);
                if i + 1 < n {
                    m.set(i, i + 1, -kin);
                }
            }
            FdOrder::Fourth => {
                // odd reflection across the Dirichlet ends for the outer ghost node
                let edge = i == 0 || i == n - 1;
                let diag = if edge { 29.0 } else { 30.0 };
                m.set(i, i, diag * kin / 12.0 + v);
                if i + 1 < n {
                    m.set(i, i + 1, -16.0 * kin / 12.0);
                }
                if i + 2 < n {
                    m.set(i, i + 2, kin / 12.0);
                }
            }
        }
    }
    if m.bands.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Numerical(
            "non-finite matrix entry; check the grid truncation".into(),
        ));
    }
    Ok(m)
}

/// Matrix of `h₀ = b⁺ b⁻` for a channel.
pub fn discretize_h0(channel: &Channel, grid: &GridSpec) -> Result<SymBandMatrix> {
    if channel.regime == Regime::IntermediateJ {
        return Err(Error::NoBoundState {
            detail: format!(
                "s = {}, j = {}/2 is in the intermediate-j window",
                channel.spin, channel.two_j
            ),
        });
    }
    discretize(&LadderCoeffs::for_channel(channel).h0(), grid)
}

/// Lowest eigenvalues on `grid` and on the grid with half the spacing,
/// combined by Richardson extrapolation at the nominal order.
pub fn richardson_eigenvalues(
    coeffs: &H0Coeffs,
    grid: &GridSpec,
    count: usize,
) -> Result<Vec<f64>> {
    let coarse = lowest_eigenvalues(&discretize(coeffs, grid)?, count)?;
    let fine = lowest_eigenvalues(&discretize(coeffs, &grid.refined())?, count)?;
    let r = 2f64.powi(grid.fd_order.order());
    Ok(coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (r * f - c) / (r - 1.0))
        .collect())
}

/// Grid spectrum of `h₀` against the closed-form levels and the partner
/// spectrum against `h₀`.
pub fn verify_spectrum(
    channel: &Channel,
    params: &DeformationParams,
    n_max: u32,
    tol: f64,
) -> Result<VerificationReport> {
    verify_spectrum_on(channel, params, n_max, tol, &GridSpec::default())
}

pub fn verify_spectrum_on(
    channel: &Channel,
    params: &DeformationParams,
    n_max: u32,
    tol: f64,
    grid: &GridSpec,
) -> Result<VerificationReport> {
    ground_factorization(channel)?;
    let count = n_max as usize + 1;
    let mut report =
        VerificationReport::new(format!("oracle s={} 2j={}", channel.spin, channel.two_j));
    let h0 = LadderCoeffs::for_channel(channel).h0();
    let grid_levels = richardson_eigenvalues(&h0, grid, count)?;
    for (n, &eg) in grid_levels.iter().enumerate() {
        let ef = energy_squared(n as u32, channel, params)?.e;
        let rel = (eg - ef).abs() / ef.max(1.0);
        report.check_with(
            format!("e{n}"),
            rel,
            tol,
            format!("grid {eg:.12e}, formula {ef:.12e}"),
        );
    }
    let e0 = grid_levels[0];
    if channel.regime.is_susy_unbroken() {
        report.check_with(
            "zero mode",
            e0.abs(),
            tol,
            format!("lowest grid eigenvalue {e0:.6e}"),
        );
    } else {
        report.flag(
            "broken supersymmetry",
            e0 > 10.0 * tol,
            format!("lowest grid eigenvalue {e0:.6e}"),
        );
    }
    // b⁻b⁺ loses only the zero mode of b⁻ when there is one
    let partner = LadderCoeffs::for_channel(channel).partner();
    let partner_levels = richardson_eigenvalues(&partner, grid, count)?;
    let offset = usize::from(channel.regime.is_susy_unbroken());
    for (i, &ep) in partner_levels.iter().enumerate().take(count - offset) {
        let eh = grid_levels[i + offset];
        let rel = (ep - eh).abs() / eh.abs().max(1.0);
        report.check_with(
            format!("partner{i}"),
            rel,
            tol,
            format!("partner {ep:.12e}, h0 level {} {eh:.12e}", i + offset),
        );
    }
    Ok(report)
}
