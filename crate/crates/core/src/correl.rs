//! Restricted two-point correlation matrices `C(X)` of a single interval and
//! their shifted form `V(X) = 2C(X) − I`.
//!
//! Both are Hermitian Toeplitz and kept as their first row `ξ_0 … ξ_{L−1}`
//! with `C_{nm} = ξ_{n−m}` and `ξ_{−j} = conj(ξ_j)`.

use std::f64::consts::PI;

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ladder::{self, LadderSpec};
use crate::occupation::{ModeSet, OccupationDensity};

/// Hermitian Toeplitz matrix stored by its first row.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianToeplitz {
    first_row: Vec<Complex64>,
}

impl HermitianToeplitz {
    /// `first_row[0]` must be real (imaginary part below 1e-12).
    pub fn new(first_row: Vec<Complex64>) -> Result<Self> {
        if first_row.is_empty() {
            return Err(Error::validation(
                "Toeplitz matrix needs at least one entry",
            ));
        }
        if first_row[0].im.abs() > 1e-12 {
            return Err(Error::validation(format!(
                "diagonal of a Hermitian Toeplitz matrix must be real, got {}",
                first_row[0]
            )));
        }
        let mut first_row = first_row;
        first_row[0].im = 0.0;
        Ok(HermitianToeplitz { first_row })
    }

    pub fn identity(l: usize) -> Self {
        Self::scaled_identity(l, 1.0)
    }

    pub fn scaled_identity(l: usize, diag: f64) -> Self {
        let mut first_row = vec![Complex64::new(0.0, 0.0); l.max(1)];
        first_row[0] = Complex64::new(diag, 0.0);
        HermitianToeplitz { first_row }
    }

    pub fn dim(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[Complex64] {
        &self.first_row
    }

    /// Entry `(n, m)`, zero-based.
    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        if n >= m {
            self.first_row[n - m]
        } else {
            self.first_row[m - n].conj()
        }
    }

    /// The leading `l × l` block (an interval of length `l`).
    pub fn prefix(&self, l: usize) -> Result<Self> {
        if l == 0 || l > self.dim() {
            return Err(Error::validation(format!(
                "prefix length {l} outside 1..={}",
                self.dim()
            )));
        }
        Ok(HermitianToeplitz {
            first_row: self.first_row[..l].to_vec(),
        })
    }

    /// `a·self + b·I`.
    pub fn affine(&self, a: f64, b: f64) -> Self {
        let mut first_row: Vec<Complex64> = self.first_row.iter().map(|x| x * a).collect();
        first_row[0].re += b;
        HermitianToeplitz { first_row }
    }

    pub fn to_dense(&self) -> Mat<c64> {
        Mat::from_fn(self.dim(), self.dim(), |n, m| {
            let z = self.entry(n, m);
            c64::new(z.re, z.im)
        })
    }

    /// Largest entrywise modulus of `self − other` (dimensions must agree).
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.first_row
            .iter()
            .zip(&other.first_row)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Restricted correlation matrix `C(X)` of an interval.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationMatrix(HermitianToeplitz);

impl CorrelationMatrix {
    pub fn from_first_row(first_row: Vec<Complex64>) -> Result<Self> {
        let t = HermitianToeplitz::new(first_row)?;
        let xi0 = t.first_row[0].re;
        if !(-1e-12..=1.0 + 1e-12).contains(&xi0) {
            return Err(Error::validation(format!(
                "correlation diagonal {xi0} outside [0, 1]"
            )));
        }
        Ok(CorrelationMatrix(t))
    }

    /// `C = (V + I) / 2`.
    pub fn from_v(v: &HermitianToeplitz) -> Self {
        CorrelationMatrix(v.affine(0.5, 0.5))
    }

    pub fn len(&self) -> usize {
        self.0.dim()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first_row(&self) -> &[Complex64] {
        self.0.first_row()
    }

    pub fn toeplitz(&self) -> &HermitianToeplitz {
        &self.0
    }

    pub fn prefix(&self, l: usize) -> Result<Self> {
        Ok(CorrelationMatrix(self.0.prefix(l)?))
    }

    pub fn entry(&self, n: usize, m: usize) -> Complex64 {
        self.0.entry(n, m)
    }
}

/// `ξ_j = (1/N) Σ_{k∈K} exp(2πi k j / N)`, an exact finite sum.
pub fn correlation_finite(ms: &ModeSet, l: usize) -> Result<CorrelationMatrix> {
    let n = ms.n();
    if l == 0 || l > n {
        return Err(Error::validation(format!(
            "interval length {l} outside 1..={n}"
        )));
    }
    let first_row = (0..l as i64)
        .map(|j| fourier_sum(ms.iter(), j, n as i64) / n as f64)
        .collect();
    CorrelationMatrix::from_first_row(first_row)
}

/// `Σ_k exp(2πi k j / N)` with the phase reduced modulo `N` in integers.
pub(crate) fn fourier_sum(modes: impl Iterator<Item = i64>, j: i64, n: i64) -> Complex64 {
    modes
        .map(|k| {
            let r = (k * j).rem_euclid(n);
            Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
        })
        .sum()
}

/// Fourier coefficients `V_j = (1/2π) ∫ g(θ) e^{ijθ} dθ` of a piecewise-constant
/// density for `j = 0 … l−1`, in closed form.
pub fn density_fourier_row(g: &OccupationDensity, l: usize) -> Vec<Complex64> {
    let jumps = g.jump_angles();
    let values = g.values();
    let widths = g.plateau_widths();
    let r = values.len();
    let mut row = Vec::with_capacity(l);
    row.push(Complex64::new(
        values.iter().zip(&widths).map(|(t, w)| t * w).sum::<f64>() / (2.0 * PI),
        0.0,
    ));
    for j in 1..l {
        let jf = j as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        if r > 1 {
            for i in 0..r {
                let upper = jumps[i];
                let lower = jumps[(i + r - 1) % r];
                acc += values[i]
                    * (Complex64::from_polar(1.0, upper * jf)
                        - Complex64::from_polar(1.0, lower * jf));
            }
        }
        row.push(acc / Complex64::new(0.0, 2.0 * PI * jf));
    }
    row
}

/// Thermodynamic-limit `C(X)` of an occupation density.
pub fn correlation_thermo(g: &OccupationDensity, l: usize) -> Result<CorrelationMatrix> {
    if l == 0 {
        return Err(Error::validation("interval length must be at least 1"));
    }
    let v = HermitianToeplitz::new(density_fourier_row(g, l))?;
    Ok(CorrelationMatrix::from_v(&v))
}

/// `V = 2C − I`.
pub fn v_matrix(c: &CorrelationMatrix) -> HermitianToeplitz {
    c.0.affine(2.0, -1.0)
}

/// Thermodynamic-limit `V_s(X_0)` of band `s` of a ladder: the Toeplitz matrix of
/// the two-valued density `g_s` (`+1` where the band is negative).
pub fn band_v_matrix(spec: &LadderSpec, s: usize, l: usize) -> Result<HermitianToeplitz> {
    if s >= spec.q() {
        return Err(Error::validation(format!(
            "band index {s} out of range for q = {}",
            spec.q()
        )));
    }
    if l == 0 {
        return Err(Error::validation("interval length must be at least 1"));
    }
    let bands = ladder::dispersion_bands(spec)?;
    let g = bands.band_density(s)?;
    HermitianToeplitz::new(density_fourier_row(&g, l))
}

/// Finite-`N` band matrix `(V_s)_{nm} = (q/N) (Σ_{k∈K, k≡s} − Σ_{k∉K, k≡s}) e^{2πik(n−m)/N}`.
pub fn band_v_matrix_finite(
    ground_state: &ModeSet,
    q: usize,
    s: usize,
    l: usize,
) -> Result<HermitianToeplitz> {
    let n = ground_state.n();
    if q == 0 || !n.is_multiple_of(q) || s >= q || l == 0 || l > n / q {
        return Err(Error::validation(format!(
            "band matrix needs q | N, s < q and 1 <= L <= N/q (q = {q}, N = {n}, s = {s}, L = {l})"
        )));
    }
    let (lo, hi) = (1 - (n / 2) as i64, (n / 2) as i64);
    let in_band = |k: &i64| k.rem_euclid(q as i64) == s as i64;
    let row = (0..l as i64)
        .map(|j| {
            let occ = fourier_sum(ground_state.iter().filter(in_band), j, n as i64);
            let emp = fourier_sum(
                (lo..=hi)
                    .filter(in_band)
                    .filter(|k| !ground_state.contains(*k)),
                j,
                n as i64,
            );
            (occ - emp) * (q as f64 / n as f64)
        })
        .collect();
    HermitianToeplitz::new(row)
}
