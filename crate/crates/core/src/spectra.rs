//! Exact entropies from correlation-matrix spectra.
//!
//! For a Gaussian (Wick) state the reduced density matrix of `L` sites is
//! fixed by the `L` eigenvalues `μ_l` of its correlation matrix, so every
//! Rényi entropy is a sum over single-mode contributions.

use faer::complex_native::c64;
use faer::{Mat, Side};
use rayon::prelude::*;

use crate::correl::{correlation_finite, correlation_thermo, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::occupation::{ModeSet, OccupationDensity, RenyiOrder};

/// Largest excursion outside `[0, 1]` accepted as round-off before clamping.
pub const CLAMP_TOLERANCE: f64 = 1e-10;

/// Eigenvalues `μ_l` of a correlation matrix, ascending and clamped to `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumResult {
    eigenvalues: Vec<f64>,
}

impl SpectrumResult {
    /// Checks the clamping tolerance, clamps and sorts.
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>) -> Result<Self> {
        for mu in eigenvalues.iter_mut() {
            if !mu.is_finite() || *mu < -CLAMP_TOLERANCE || *mu > 1.0 + CLAMP_TOLERANCE {
                return Err(Error::NonContractive { eigenvalue: *mu });
            }
            *mu = mu.clamp(0.0, 1.0);
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(SpectrumResult { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `v_l = 2μ_l − 1`, the spectrum of `V = 2C − I`.
    pub fn v_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|mu| 2.0 * mu - 1.0).collect()
    }

    /// Spectrum of the complementary state, `μ ↦ 1 − μ`.
    pub fn complemented(&self) -> SpectrumResult {
        let mut eigenvalues: Vec<f64> = self.eigenvalues.iter().map(|mu| 1.0 - mu).collect();
        eigenvalues.reverse();
        SpectrumResult { eigenvalues }
    }
}

/// Eigenvalues of a dense Hermitian matrix (lower triangle referenced), ascending.
pub fn hermitian_eigenvalues(m: &Mat<c64>) -> Vec<f64> {
    let mut ev = m.selfadjoint_eigenvalues(Side::Lower);
    ev.sort_by(f64::total_cmp);
    ev
}

pub fn spectrum(c: &CorrelationMatrix) -> Result<SpectrumResult> {
    spectrum_of_dense(&c.toeplitz().to_dense())
}

/// Spectrum of an arbitrary dense Hermitian correlation matrix.
pub fn spectrum_of_dense(m: &Mat<c64>) -> Result<SpectrumResult> {
    SpectrumResult::from_eigenvalues(hermitian_eigenvalues(m))
}

/// Contribution of one mode with occupation `mu` to `S_α`.
pub fn mode_entropy(mu: f64, alpha: RenyiOrder) -> f64 {
    let nu = 1.0 - mu;
    if alpha.is_von_neumann() {
        -(xlogx(mu) + xlogx(nu))
    } else {
        let a = alpha.value();
        (nu.powf(a) + mu.powf(a)).ln() / (1.0 - a)
    }
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// `S_α = (1/(1−α)) Σ log[(1−μ)^α + μ^α]`, or the von Neumann sum at `α = 1`.
pub fn renyi_exact(spec: &SpectrumResult, alpha: RenyiOrder) -> f64 {
    spec.eigenvalues
        .iter()
        .map(|&mu| mode_entropy(mu, alpha))
        .sum()
}

/// Single-particle entanglement energies `ε = log((1 − μ)/μ)`.
/// `μ = 0` maps to `+∞` and `μ = 1` to `−∞`.
pub fn entanglement_hamiltonian_spectrum(spec: &SpectrumResult) -> Vec<f64> {
    spec.eigenvalues
        .iter()
        .map(|&mu| {
            if mu <= 0.0 {
                f64::INFINITY
            } else if mu >= 1.0 {
                f64::NEG_INFINITY
            } else {
                ((1.0 - mu) / mu).ln()
            }
        })
        .collect()
}

/// What an entropy curve is computed from.
#[derive(Clone, Debug)]
pub enum EntropySource {
    Modes(ModeSet),
    Density(OccupationDensity),
}

impl EntropySource {
    /// Correlation matrix of the longest interval; shorter ones are its leading blocks.
    pub fn correlation(&self, l: usize) -> Result<CorrelationMatrix> {
        match self {
            EntropySource::Modes(ms) => correlation_finite(ms, l),
            EntropySource::Density(g) => correlation_thermo(g, l),
        }
    }
}

impl From<ModeSet> for EntropySource {
    fn from(ms: ModeSet) -> Self {
        EntropySource::Modes(ms)
    }
}

impl From<OccupationDensity> for EntropySource {
    fn from(g: OccupationDensity) -> Self {
        EntropySource::Density(g)
    }
}

/// Exact `S_α(L)` for every requested length, in input order.
pub fn entropy_curve(
    source: &EntropySource,
    lengths: &[usize],
    alpha: RenyiOrder,
) -> Result<Vec<(usize, f64)>> {
    let &l_max = lengths
        .iter()
        .max()
        .ok_or_else(|| Error::validation("entropy curve needs at least one length"))?;
    if lengths.contains(&0) {
        return Err(Error::validation("interval lengths must be at least 1"));
    }
    let full = source.correlation(l_max)?;
    lengths
        .par_iter()
        .map(|&l| {
            let spec = spectrum(&full.prefix(l)?)?;
            Ok((l, renyi_exact(&spec, alpha)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use std::f64::consts::LN_2;

    fn order(a: f64) -> RenyiOrder {
        RenyiOrder::new(a).unwrap()
    }

    fn spec(mu: &[f64]) -> SpectrumResult {
        SpectrumResult::from_eigenvalues(mu.to_vec()).unwrap()
    }

    #[test]
    fn trivial_spectra() {
        let id = CorrelationMatrix::from_first_row(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert!(spectrum(&id)
            .unwrap()
            .eigenvalues()
            .iter()
            .all(|&m| (m - 1.0).abs() < 1e-14));
        let zero = CorrelationMatrix::from_first_row(vec![Complex64::new(0.0, 0.0); 3]).unwrap();
        assert!(spectrum(&zero)
            .unwrap()
            .eigenvalues()
            .iter()
            .all(|&m| m.abs() < 1e-14));
    }

    #[test]
    fn two_by_two_rank_one() {
        // [[1/2, 1/2], [1/2, 1/2]] has characteristic polynomial μ² − μ
        let c = CorrelationMatrix::from_first_row(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ])
        .unwrap();
        let s = spectrum(&c).unwrap();
        assert_abs_diff_eq!(s.eigenvalues()[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eigenvalues()[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn non_contractive_input_is_rejected() {
        let c = CorrelationMatrix::from_first_row(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.9, 0.0),
        ])
        .unwrap();
        assert!(matches!(spectrum(&c), Err(Error::NonContractive { .. })));
        assert!(SpectrumResult::from_eigenvalues(vec![1.0 + 5e-11, -5e-11]).is_ok());
        assert!(SpectrumResult::from_eigenvalues(vec![1.0 + 1e-9]).is_err());
    }

    #[test]
    fn renyi_examples() {
        for a in [1.0, 2.0, 3.5] {
            assert_eq!(renyi_exact(&spec(&[0.0, 1.0, 1.0]), order(a)), 0.0);
        }
        assert_abs_diff_eq!(
            renyi_exact(&spec(&[0.5]), order(1.0)),
            LN_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            renyi_exact(&spec(&[0.5]), order(2.0)),
            LN_2,
            epsilon = 1e-15
        );
    }

    #[test]
    fn entanglement_energies() {
        let e = 1f64.exp();
        let eps = entanglement_hamiltonian_spectrum(&spec(&[0.0, 1.0 / (1.0 + e), 0.5, 1.0]));
        assert_eq!(eps[0], f64::INFINITY);
        assert_abs_diff_eq!(eps[1], 1.0, epsilon = 1e-14);
        assert_eq!(eps[2], 0.0);
        assert_eq!(eps[3], f64::NEG_INFINITY);
    }

    #[test]
    fn single_mode_entropy_peaks_at_half_filling() {
        for a in [1.0, 2.0, 4.0] {
            let peak = mode_entropy(0.5, order(a));
            for i in 0..=100 {
                let mu = i as f64 / 100.0;
                assert!(mode_entropy(mu, order(a)) <= peak + 1e-15);
            }
        }
    }

    #[test]
    fn curve_of_full_filling_vanishes() {
        let src = EntropySource::Density(OccupationDensity::constant(1.0).unwrap());
        let curve = entropy_curve(&src, &[10, 100], order(1.0)).unwrap();
        assert_eq!(curve.len(), 2);
        assert_eq!(curve[0].0, 10);
        assert_eq!(curve[1].0, 100);
        assert!(curve.iter().all(|&(_, s)| s.abs() < 1e-12));
        assert!(entropy_curve(&src, &[], order(1.0)).is_err());
        assert!(entropy_curve(&src, &[0, 3], order(1.0)).is_err());
    }

    #[test]
    fn curve_preserves_input_order() {
        let src = EntropySource::Density(OccupationDensity::state1());
        let curve = entropy_curve(&src, &[40, 10, 20], order(2.0)).unwrap();
        let ls: Vec<usize> = curve.iter().map(|p| p.0).collect();
        assert_eq!(ls, vec![40, 10, 20]);
        assert!(curve[0].1 > curve[2].1 && curve[2].1 > curve[1].1);
    }

    proptest! {
        #[test]
        fn entropy_is_nonnegative_and_complement_invariant(
            mus in proptest::collection::vec(0.0f64..=1.0, 1..20),
            a in prop_oneof![Just(1.0), 1.0f64..6.0],
        ) {
            let s = spec(&mus);
            let value = renyi_exact(&s, order(a));
            prop_assert!(value >= -1e-15);
            let comp = renyi_exact(&s.complemented(), order(a));
            prop_assert!((value - comp).abs() < 1e-12);
        }

        #[test]
        fn renyi_approaches_von_neumann(mus in proptest::collection::vec(0.0f64..=1.0, 1..20)) {
            let s = spec(&mus);
            let vn = renyi_exact(&s, order(1.0));
            let near = renyi_exact(&s, order(1.0 + 1e-6));
            prop_assert!((vn - near).abs() < 1e-6 * (1.0 + mus.len() as f64));
        }

        #[test]
        fn entropy_vanishes_only_for_pure_spectra(mus in proptest::collection::vec(0.0f64..=1.0, 1..10)) {
            let s = spec(&mus);
            let pure = s.eigenvalues().iter().all(|&m| m == 0.0 || m == 1.0);
            let value = renyi_exact(&s, order(2.0));
            prop_assert_eq!(value == 0.0, pure);
        }
    }
}
