//! Prismatic ladders with `q` rails: dispersion bands, ground-state
//! occupation densities and the entropy of a fragment (equal aligned
//! intervals on every rail).
//!
//! A ladder is a chain of `N` sites with couplings `J_{p,j}` between sites
//! `n` and `n + pN/q + j`. Modes with `k ≡ s (mod q)` form band `s`, with
//! dispersion `Λ_s(θ) = Σ_j c_j(s) e^{iθj} + c.c.` and
//! `c_j(s) = Σ_p e^{2πisp/q} J_{p,j}`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;

use crate::asymptotics;
use crate::correl::CorrelationMatrix;
use crate::correl::{density_fourier_row, fourier_sum, HermitianToeplitz};
use crate::error::{Error, Result};
use crate::occupation::{normalize_angle, ModeSet, OccupationDensity, RenyiOrder};
use crate::spectra::{renyi_exact, spectrum, spectrum_of_dense};

/// Sampling density used to bracket sign changes of a band.
pub const BAND_SAMPLES: usize = 4096;

/// Zeros of different bands closer than this are taken to coincide.
const COINCIDENT_ZEROS: f64 = 1e-11;

/// Relative size below which a band value counts as zero.
const ZERO_BAND_RELATIVE: f64 = 1e-13;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling {
    pub p: usize,
    pub j: usize,
    pub value: Complex64,
}

/// Rail count and coupling table of a ladder Hamiltonian.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderSpec {
    q: usize,
    couplings: BTreeMap<(usize, usize), Complex64>,
}

impl LadderSpec {
    /// Repeated `(p, j)` entries are added together.
    pub fn new(q: usize, couplings: impl IntoIterator<Item = Coupling>) -> Result<Self> {
        if q == 0 {
            return Err(Error::validation("a ladder needs at least one rail"));
        }
        let mut table = BTreeMap::new();
        for c in couplings {
            if c.p >= q {
                return Err(Error::validation(format!(
                    "coupling rail offset p = {} must be below q = {q}",
                    c.p
                )));
            }
            if !(c.value.re.is_finite() && c.value.im.is_finite()) {
                return Err(Error::validation("coupling values must be finite"));
            }
            *table.entry((c.p, c.j)).or_insert(Complex64::new(0.0, 0.0)) += c.value;
        }
        Ok(LadderSpec {
            q,
            couplings: table,
        })
    }

    /// Nearest-neighbour tight-binding chain `−T Σ a†_n a_{n+1} + h.c.`.
    pub fn tight_binding(hopping: f64) -> Self {
        Self::new(
            1,
            [Coupling {
                p: 0,
                j: 1,
                value: Complex64::new(-hopping, 0.0),
            }],
        )
        .expect("valid literal ladder")
    }

    /// Two-rail ladder whose vacuum is the half-filled-alternating state:
    /// `J_{N/2} = J_0`, `J_1 = −2J_0`.
    pub fn two_rail_example(j0: f64) -> Self {
        Self::new(
            2,
            [
                Coupling {
                    p: 0,
                    j: 0,
                    value: Complex64::new(j0, 0.0),
                },
                Coupling {
                    p: 1,
                    j: 0,
                    value: Complex64::new(j0, 0.0),
                },
                Coupling {
                    p: 0,
                    j: 1,
                    value: Complex64::new(-2.0 * j0, 0.0),
                },
            ],
        )
        .expect("valid literal ladder")
    }

    /// Four-rail ladder whose vacuum is the three-in-four state:
    /// `J_{N/2} = J_0`, `J_{N/4} = 2J_0`, `J_1 = −4J_0`.
    pub fn four_rail_example(j0: f64) -> Self {
        Self::new(
            4,
            [
                Coupling {
                    p: 0,
                    j: 0,
                    value: Complex64::new(j0, 0.0),
                },
                Coupling {
                    p: 2,
                    j: 0,
                    value: Complex64::new(j0, 0.0),
                },
                Coupling {
                    p: 1,
                    j: 0,
                    value: Complex64::new(2.0 * j0, 0.0),
                },
                Coupling {
                    p: 0,
                    j: 1,
                    value: Complex64::new(-4.0 * j0, 0.0),
                },
            ],
        )
        .expect("valid literal ladder")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn couplings(&self) -> impl Iterator<Item = Coupling> + '_ {
        self.couplings
            .iter()
            .map(|(&(p, j), &value)| Coupling { p, j, value })
    }

    /// Same couplings multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        LadderSpec {
            q: self.q,
            couplings: self
                .couplings
                .iter()
                .map(|(&k, &v)| (k, v * factor))
                .collect(),
        }
    }

    fn max_range(&self) -> usize {
        self.couplings.keys().map(|&(_, j)| j).max().unwrap_or(0)
    }
}

/// `e^{2πi m/q}`, exact at multiples of a quarter turn.
fn root_of_unity(m: usize, q: usize) -> Complex64 {
    let m = m % q;
    if (4 * m).is_multiple_of(q) {
        return match 4 * m / q {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * m as f64 / q as f64)
}

/// One dispersion band as the trigonometric polynomial `2 Re Σ_j c_j e^{iθj}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Band {
    coeffs: Vec<Complex64>,
}

impl Band {
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn evaluate(&self, theta: f64) -> f64 {
        2.0 * self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| (c * Complex64::from_polar(1.0, theta * j as f64)).re)
            .sum::<f64>()
    }

    /// Upper bound on `|Λ(θ)|`.
    fn scale(&self) -> f64 {
        2.0 * self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| if j == 0 { c.re.abs() } else { c.norm() })
            .sum::<f64>()
    }
}

/// The `q` bands of a ladder with their transversal zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct BandSet {
    bands: Vec<Band>,
    zero_angles: Vec<Vec<f64>>,
}

impl BandSet {
    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// Sign-change angles of band `s`, ascending in `(-π, π]`.
    pub fn zero_angles(&self, s: usize) -> &[f64] {
        &self.zero_angles[s]
    }

    /// Number of massless excitations `ν_s` of band `s`.
    pub fn nu(&self, s: usize) -> usize {
        self.zero_angles[s].len()
    }

    pub fn total_nu(&self) -> usize {
        self.zero_angles.iter().map(Vec::len).sum()
    }

    /// `g_s = +1` where `Λ_s < 0`, `−1` where `Λ_s > 0`.
    pub fn band_density(&self, s: usize) -> Result<OccupationDensity> {
        let band = self.bands.get(s).ok_or_else(|| {
            Error::validation(format!(
                "band index {s} out of range for q = {}",
                self.bands.len()
            ))
        })?;
        let zeros = &self.zero_angles[s];
        let filled = |theta: f64| {
            if band.evaluate(theta) < 0.0 {
                1.0
            } else {
                -1.0
            }
        };
        if zeros.is_empty() {
            // no sign change: probe where the band is farthest from zero
            let probe = (0..BAND_SAMPLES)
                .map(sample_angle)
                .max_by(|a, b| band.evaluate(*a).abs().total_cmp(&band.evaluate(*b).abs()))
                .unwrap_or(0.0);
            return OccupationDensity::constant(filled(probe));
        }
        let values = arc_midpoints(zeros).into_iter().map(filled).collect();
        OccupationDensity::new(zeros.clone(), values)
    }

    /// Per-band densities and their average `g = (1/q) Σ_s g_s`.
    pub fn ground_state_density(&self) -> Result<(Vec<OccupationDensity>, OccupationDensity)> {
        let per_band = (0..self.bands.len())
            .map(|s| self.band_density(s))
            .collect::<Result<Vec<_>>>()?;
        let mut angles: Vec<f64> = self.zero_angles.iter().flatten().copied().collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup();
        if angles.is_empty() {
            let sum: f64 = per_band.iter().map(|g| g.values()[0]).sum();
            return Ok((
                per_band,
                OccupationDensity::constant(sum / self.bands.len() as f64)?,
            ));
        }
        let q = self.bands.len() as f64;
        let values = arc_midpoints(&angles)
            .into_iter()
            .map(|mid| {
                // integer count of filled minus empty bands, divided once
                let count: f64 = per_band.iter().map(|g| g.evaluate(mid)).sum();
                count / q
            })
            .collect();
        let total = OccupationDensity::new(angles, values)?;
        Ok((per_band, total))
    }
}

fn sample_angle(i: usize) -> f64 {
    -PI + 2.0 * PI * i as f64 / BAND_SAMPLES as f64
}

/// Midpoint of the arc that ends at each angle (the first arc wraps around).
fn arc_midpoints(sorted: &[f64]) -> Vec<f64> {
    let r = sorted.len();
    (0..r)
        .map(|i| {
            let prev = if i == 0 {
                sorted[r - 1] - 2.0 * PI
            } else {
                sorted[i - 1]
            };
            if r == 1 {
                sorted[0] + PI
            } else {
                0.5 * (prev + sorted[i])
            }
        })
        .collect()
}

fn bisect(band: &Band, mut a: f64, mut b: f64) -> f64 {
    let mut fa = band.evaluate(a);
    loop {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            return m;
        }
        let fm = band.evaluate(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
}

fn band_zeros(band: &Band) -> Vec<f64> {
    let tol = ZERO_BAND_RELATIVE * band.scale();
    let signs: Vec<(f64, i8)> = (0..BAND_SAMPLES)
        .filter_map(|i| {
            let theta = sample_angle(i);
            let v = band.evaluate(theta);
            (v.abs() > tol).then_some((theta, if v < 0.0 { -1 } else { 1 }))
        })
        .collect();
    let mut zeros = Vec::new();
    let m = signs.len();
    for i in 0..m {
        let (a, sa) = signs[i];
        let (mut b, sb) = signs[(i + 1) % m];
        if sa == sb {
            continue;
        }
        if i + 1 == m {
            b += 2.0 * PI;
        }
        zeros.push(normalize_angle(bisect(band, a, b)));
    }
    zeros.sort_by(f64::total_cmp);
    zeros
}

/// Bands and their sign changes; sign changes are bracketed on a uniform grid
/// of [`BAND_SAMPLES`] angles and refined by bisection to full precision.
pub fn dispersion_bands(spec: &LadderSpec) -> Result<BandSet> {
    let q = spec.q;
    let range = spec.max_range();
    let coupling_scale: f64 = spec.couplings.values().map(|c| c.norm()).sum();
    let mut bands = Vec::with_capacity(q);
    for s in 0..q {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); range + 1];
        for (&(p, j), &value) in &spec.couplings {
            coeffs[j] += root_of_unity(s * p, q) * value;
        }
        let band = Band { coeffs };
        if band.scale() <= 1e-14 * coupling_scale || coupling_scale == 0.0 {
            return Err(Error::DegenerateBand { band: s });
        }
        bands.push(band);
    }
    let mut zero_angles: Vec<Vec<f64>> = bands.iter().map(band_zeros).collect();
    snap_coincident_zeros(&mut zero_angles);
    Ok(BandSet { bands, zero_angles })
}

/// Zeros of different bands within [`COINCIDENT_ZEROS`] share one angle, so
/// the averaged density has no spurious sliver plateaus.
fn snap_coincident_zeros(zero_angles: &mut [Vec<f64>]) {
    let mut anchors: Vec<f64> = Vec::new();
    for zeros in zero_angles.iter_mut() {
        for z in zeros.iter_mut() {
            let close = anchors.iter().copied().find(|&a| {
                let d = normalize_angle(*z - a).abs();
                d < COINCIDENT_ZEROS
            });
            match close {
                Some(a) => *z = a,
                None => anchors.push(*z),
            }
        }
        zeros.sort_by(f64::total_cmp);
    }
}

/// Per-band densities and the averaged ground-state density.
pub fn ground_state_density(
    bands: &BandSet,
) -> Result<(Vec<OccupationDensity>, OccupationDensity)> {
    bands.ground_state_density()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FragmentMode {
    Exact,
    Asymptotic,
}

/// Entropy of a fragment of length `L` as a sum over bands.
pub fn fragment_entropy(
    spec: &LadderSpec,
    l: usize,
    alpha: RenyiOrder,
    mode: FragmentMode,
) -> Result<f64> {
    let bands = dispersion_bands(spec)?;
    fragment_entropy_with_bands(&bands, l, alpha, mode)
}

pub fn fragment_entropy_with_bands(
    bands: &BandSet,
    l: usize,
    alpha: RenyiOrder,
    mode: FragmentMode,
) -> Result<f64> {
    if l == 0 {
        return Err(Error::validation("fragment length must be at least 1"));
    }
    let (per_band, _) = bands.ground_state_density()?;
    let a = alpha.value();
    let mut total = 0.0;
    for (s, g) in per_band.iter().enumerate() {
        total += match mode {
            FragmentMode::Exact => {
                let v = HermitianToeplitz::new(density_fourier_row(g, l))?;
                renyi_exact(&spectrum(&CorrelationMatrix::from_v(&v))?, alpha)
            }
            FragmentMode::Asymptotic => {
                let log_coeff = (1.0 + a) / a * bands.nu(s) as f64 / 12.0;
                log_coeff * (l as f64).ln() + asymptotics::coeff_c(g, alpha)?
            }
        };
    }
    Ok(total)
}

/// Finite-`N` ground state `{k : Λ_{k mod q}(2πk/N) < 0}`; values within
/// round-off of zero are left empty.
pub fn ground_state_modes(spec: &LadderSpec, n: usize) -> Result<ModeSet> {
    let q = spec.q;
    if n == 0 || !n.is_multiple_of(q) || !n.is_multiple_of(2) {
        return Err(Error::validation(format!(
            "chain length N = {n} must be even and divisible by q = {q}"
        )));
    }
    if 2 * q * spec.max_range() > n {
        return Err(Error::validation(format!(
            "coupling range {} exceeds N/(2q) for N = {n}",
            spec.max_range()
        )));
    }
    let bands = dispersion_bands(spec)?;
    let half = (n / 2) as i64;
    let occupied = (1 - half..=half).filter(|&k| {
        let band = &bands.bands[k.rem_euclid(q as i64) as usize];
        let theta = 2.0 * PI * k as f64 / n as f64;
        band.evaluate(theta) < -ZERO_BAND_RELATIVE * band.scale()
    });
    ModeSet::new(n, occupied)
}

/// Site indices (zero-based) of the fragment `∪_p {pN/q, …, pN/q + L − 1}`.
fn fragment_sites(n: usize, q: usize, l: usize) -> Vec<usize> {
    (0..q)
        .flat_map(|p| (0..l).map(move |i| p * n / q + i))
        .collect()
}

/// Dense `qL × qL` correlation matrix of a ladder fragment in a finite-`N` state.
pub fn fragment_correlation_dense(state: &ModeSet, q: usize, l: usize) -> Result<Mat<c64>> {
    let n = state.n();
    if q == 0 || !n.is_multiple_of(q) || q * l > n || l == 0 {
        return Err(Error::validation(format!(
            "fragment needs q | N and 1 <= qL <= N (q = {q}, N = {n}, L = {l})"
        )));
    }
    let sites = fragment_sites(n, q, l);
    let mut xi: HashMap<usize, Complex64> = HashMap::new();
    for &a in &sites {
        for &b in &sites {
            let d = (a as i64 - b as i64).rem_euclid(n as i64) as usize;
            xi.entry(d)
                .or_insert_with(|| fourier_sum(state.iter(), d as i64, n as i64) / n as f64);
        }
    }
    Ok(Mat::from_fn(sites.len(), sites.len(), |i, j| {
        let d = (sites[i] as i64 - sites[j] as i64).rem_euclid(n as i64) as usize;
        let z = xi[&d];
        c64::new(z.re, z.im)
    }))
}

/// Fragment entropy from the full `qL × qL` finite-`N` correlation matrix,
/// without the band decomposition.
pub fn fragment_entropy_direct(
    spec: &LadderSpec,
    n: usize,
    l: usize,
    alpha: RenyiOrder,
) -> Result<f64> {
    let state = ground_state_modes(spec, n)?;
    let c = fragment_correlation_dense(&state, spec.q, l)?;
    Ok(renyi_exact(&spectrum_of_dense(&c)?, alpha))
}
