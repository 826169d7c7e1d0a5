//! Occupied-mode sets at finite `N` and piecewise-constant occupation
//! densities in the thermodynamic limit.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use crate::asymptotics::JumpData;
use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Maps an angle onto `(-π, π]`.
pub fn normalize_angle(theta: f64) -> f64 {
    let x = theta.rem_euclid(TWO_PI);
    if x > PI {
        x - TWO_PI
    } else {
        x
    }
}

/// Rényi index `α ≥ 1`. `α = 1` is the von Neumann entropy.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub const VON_NEUMANN: RenyiOrder = RenyiOrder(1.0);

    pub fn new(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::validation(format!(
                "Renyi order must be a finite real >= 1, got {alpha}"
            )));
        }
        Ok(RenyiOrder(alpha))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Exact comparison; callers wanting the near-1 branch pass `1 ± δ`.
    pub fn is_von_neumann(self) -> bool {
        self.0 == 1.0
    }

    pub fn as_integer(self) -> Option<u32> {
        (self.0.fract() == 0.0 && self.0 <= u32::MAX as f64).then_some(self.0 as u32)
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A set of occupied momentum modes `k ∈ {1 − N/2, …, N/2}` on a ring of `N` sites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeSet {
    n: usize,
    modes: BTreeSet<i64>,
}

impl ModeSet {
    pub fn new(n: usize, modes: impl IntoIterator<Item = i64>) -> Result<Self> {
        if n == 0 || !n.is_multiple_of(2) {
            return Err(Error::validation(format!(
                "chain length N must be even and positive, got {n}"
            )));
        }
        let (lo, hi) = Self::bounds(n);
        let mut set = BTreeSet::new();
        for k in modes {
            if k < lo || k > hi {
                return Err(Error::validation(format!(
                    "mode {k} outside the window [{lo}, {hi}] for N = {n}"
                )));
            }
            if !set.insert(k) {
                return Err(Error::validation(format!("mode {k} listed twice")));
            }
        }
        Ok(ModeSet { n, modes: set })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, std::iter::empty())
    }

    pub fn full(n: usize) -> Result<Self> {
        let (lo, hi) = Self::bounds(n.max(2));
        Self::new(n, lo..=hi)
    }

    /// The lowest-|k| half of the modes (`N` divisible by 4).
    pub fn state1(n: usize) -> Result<Self> {
        let start = Self::quarter_window(n, 4)?;
        Self::new(n, start..start + (n / 2) as i64)
    }

    /// Every second mode occupied inside the central half, the rest empty.
    pub fn state2(n: usize) -> Result<Self> {
        let start = Self::quarter_window(n, 4)?;
        Self::new(
            n,
            (start..start + (n / 2) as i64).filter(|k| (k - start) % 2 == 0),
        )
    }

    /// Three of every four modes occupied inside the central half (`N` divisible by 8).
    pub fn state3(n: usize) -> Result<Self> {
        let start = Self::quarter_window(n, 8)?;
        Self::new(
            n,
            (start..start + (n / 2) as i64).filter(|k| (k - start) % 4 != 3),
        )
    }

    fn quarter_window(n: usize, divisor: usize) -> Result<i64> {
        if n == 0 || !n.is_multiple_of(divisor) {
            return Err(Error::validation(format!(
                "this filling needs N divisible by {divisor}, got {n}"
            )));
        }
        Ok(1 - (n / 4) as i64)
    }

    fn bounds(n: usize) -> (i64, i64) {
        let half = (n / 2) as i64;
        (1 - half, half)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn contains(&self, k: i64) -> bool {
        self.modes.contains(&k)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.modes.iter().copied()
    }

    /// Wraps any integer momentum into the mode window.
    pub fn wrap(&self, k: i64) -> i64 {
        let (lo, _) = Self::bounds(self.n);
        (k - lo).rem_euclid(self.n as i64) + lo
    }

    /// `{k + Δ}` with wrap-around inside the window.
    pub fn translate(&self, delta: i64) -> ModeSet {
        ModeSet {
            n: self.n,
            modes: self.modes.iter().map(|&k| self.wrap(k + delta)).collect(),
        }
    }

    /// Unoccupied modes of the window.
    pub fn complement(&self) -> ModeSet {
        let (lo, hi) = Self::bounds(self.n);
        ModeSet {
            n: self.n,
            modes: (lo..=hi).filter(|k| !self.modes.contains(k)).collect(),
        }
    }

    /// Maximal circular runs of consecutive occupied modes as `(first, length)`,
    /// ordered by first mode.
    pub fn runs(&self) -> Vec<(i64, usize)> {
        let (lo, hi) = Self::bounds(self.n);
        if self.modes.len() == self.n {
            return vec![(lo, self.n)];
        }
        let mut runs: Vec<(i64, usize)> = Vec::new();
        for k in self.iter() {
            match runs.last_mut() {
                Some((start, len)) if *start + *len as i64 == k => *len += 1,
                _ => runs.push((k, 1)),
            }
        }
        // the window is a ring: a run ending at N/2 continues at 1 - N/2
        if runs.len() > 1 {
            let (first_start, first_len) = runs[0];
            let (last_start, last_len) = *runs.last().unwrap();
            if first_start == lo && last_start + last_len as i64 - 1 == hi {
                runs.pop();
                runs[0] = (last_start, last_len + first_len);
                runs.sort_unstable();
            }
        }
        runs
    }
}

pub fn translate_modes(ms: &ModeSet, delta: i64) -> ModeSet {
    ms.translate(delta)
}

pub fn complement_modes(ms: &ModeSet) -> ModeSet {
    ms.complement()
}

/// Piecewise-constant periodic occupation density.
///
/// With jumps `θ_1 < … < θ_R` in `(-π, π]` and values `t_1, …, t_R`, the
/// density equals `t_r` on `[θ_{r-1}, θ_r)` where `θ_0 = θ_R − 2π`. A
/// constant density is stored with `R = 1` and its single jump at `π`.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupationDensity {
    jumps: Vec<f64>,
    values: Vec<f64>,
}

impl OccupationDensity {
    /// Validates and normalizes: plateaus with equal neighbouring values are merged.
    pub fn new(jumps: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if jumps.is_empty() || jumps.len() != values.len() {
            return Err(Error::validation(format!(
                "density needs as many jumps as values (at least one), got {} and {}",
                jumps.len(),
                values.len()
            )));
        }
        for &theta in &jumps {
            if !theta.is_finite() || theta <= -PI || theta > PI {
                return Err(Error::validation(format!(
                    "jump angle {theta} outside (-pi, pi]"
                )));
            }
        }
        if jumps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation(
                "jump angles must be strictly increasing (coinciding jumps are not supported)",
            ));
        }
        for &t in &values {
            if !t.is_finite() || !(-1.0..=1.0).contains(&t) {
                return Err(Error::validation(format!(
                    "plateau value {t} outside [-1, 1]"
                )));
            }
        }

        let (mut jumps, mut values) = (jumps, values);
        loop {
            let r = values.len();
            if r == 1 {
                break;
            }
            match (0..r).find(|&i| values[i] == values[(i + 1) % r]) {
                Some(i) => {
                    jumps.remove(i);
                    values.remove(i);
                }
                None => break,
            }
        }
        if values.len() == 1 {
            jumps = vec![PI];
        }
        Ok(OccupationDensity { jumps, values })
    }

    pub fn constant(t: f64) -> Result<Self> {
        Self::new(vec![PI], vec![t])
    }

    /// `inside` on `[from, to)`, `outside` elsewhere; `-π < from < to ≤ π`.
    pub fn step(from: f64, to: f64, inside: f64, outside: f64) -> Result<Self> {
        Self::new(vec![from, to], vec![outside, inside])
    }

    /// Fermi sea of the half-filled tight-binding chain: `+1` on `[-π/2, π/2)`.
    pub fn state1() -> Self {
        Self::step(-PI / 2.0, PI / 2.0, 1.0, -1.0).expect("valid literal density")
    }

    /// Alternate filling of the central half: `0` on `[-π/2, π/2)`, `-1` elsewhere.
    pub fn state2() -> Self {
        Self::step(-PI / 2.0, PI / 2.0, 0.0, -1.0).expect("valid literal density")
    }

    /// Three-in-four filling of the central half: `1/2` on `[-π/2, π/2)`, `-1` elsewhere.
    pub fn state3() -> Self {
        Self::step(-PI / 2.0, PI / 2.0, 0.5, -1.0).expect("valid literal density")
    }

    /// Built-in states `1`, `2`, `3`.
    pub fn named_state(index: u32) -> Result<Self> {
        match index {
            1 => Ok(Self::state1()),
            2 => Ok(Self::state2()),
            3 => Ok(Self::state3()),
            _ => Err(Error::validation(format!(
                "unknown state {index}; expected 1, 2 or 3"
            ))),
        }
    }

    pub fn jump_angles(&self) -> &[f64] {
        &self.jumps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of plateaus `R`.
    pub fn plateau_count(&self) -> usize {
        self.values.len()
    }

    pub fn is_constant(&self) -> bool {
        self.values.len() == 1
    }

    /// Width of each plateau `θ_r − θ_{r−1}`, in the order of `values()`.
    pub fn plateau_widths(&self) -> Vec<f64> {
        let r = self.jumps.len();
        if r == 1 {
            return vec![TWO_PI];
        }
        (0..r)
            .map(|i| {
                let prev = if i == 0 {
                    self.jumps[r - 1] - TWO_PI
                } else {
                    self.jumps[i - 1]
                };
                self.jumps[i] - prev
            })
            .collect()
    }

    /// The discontinuities, each with the value just below and just above its angle.
    pub fn discontinuities(&self) -> Vec<JumpData> {
        let r = self.values.len();
        if r == 1 {
            return Vec::new();
        }
        (0..r)
            .map(|i| JumpData {
                index: i,
                angle: self.jumps[i],
                before: self.values[i],
                after: self.values[(i + 1) % r],
            })
            .collect()
    }

    /// `g(θ)`; at a jump angle the value to the right is returned.
    pub fn evaluate(&self, theta: f64) -> f64 {
        let x = (theta + PI).rem_euclid(TWO_PI) - PI;
        self.jumps
            .iter()
            .position(|&j| x < j)
            .map_or(self.values[0], |i| self.values[i])
    }

    /// `g(θ) → −g(θ)`, the density of the complementary mode set.
    pub fn negated(&self) -> Self {
        OccupationDensity {
            jumps: self.jumps.clone(),
            values: self.values.iter().map(|t| -t).collect(),
        }
    }

    /// Rigid rotation of every jump by `shift`.
    pub fn rotated(&self, shift: f64) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = self
            .jumps
            .iter()
            .zip(&self.values)
            .map(|(&j, &t)| (normalize_angle(j + shift), t))
            .collect();
        if pairs.len() == 1 {
            return Self::constant(pairs[0].1);
        }
        // value t_r belongs to the arc that ends at θ_r, so it travels with its jump
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (jumps, values) = pairs.into_iter().unzip();
        Self::new(jumps, values)
    }

    /// Builds a density from ±1 arcs: each `(from, to)` is occupied (`+1`).
    /// Angles may be any reals; arcs must be disjoint on the circle.
    pub(crate) fn from_occupied_arcs(arcs: &[(f64, f64)]) -> Result<Self> {
        if arcs.is_empty() {
            return Self::constant(-1.0);
        }
        let mut edges: Vec<(f64, f64)> = Vec::with_capacity(2 * arcs.len());
        for &(from, to) in arcs {
            // before the start of an occupied arc the density is -1, before its end +1
            edges.push((normalize_angle(from), -1.0));
            edges.push((normalize_angle(to), 1.0));
        }
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (jumps, values) = edges.into_iter().unzip();
        Self::new(jumps, values)
    }
}

/// Thermodynamic-limit density of a mode set: each occupied run `k_a..=k_b`
/// covers `[2π(k_a − ½)/N, 2π(k_b + ½)/N)` with `+1`, everything else is `-1`.
pub fn density_from_modeset(ms: &ModeSet) -> Result<OccupationDensity> {
    density_from_modeset_with_resolution(ms, None)
}

/// As [`density_from_modeset`], rejecting patterns that need more than
/// `max_jumps` discontinuities (irregular fillings with no coarse limit).
pub fn density_from_modeset_with_resolution(
    ms: &ModeSet,
    max_jumps: Option<usize>,
) -> Result<OccupationDensity> {
    if ms.len() == ms.n() {
        return OccupationDensity::constant(1.0);
    }
    let runs = ms.runs();
    if let Some(limit) = max_jumps {
        if 2 * runs.len() > limit {
            return Err(Error::validation(format!(
                "mode pattern has {} discontinuities, more than the resolution of {limit}; \
                 it has no piecewise-constant limit at this resolution",
                2 * runs.len()
            )));
        }
    }
    let n = ms.n() as f64;
    let arcs: Vec<(f64, f64)> = runs
        .iter()
        .map(|&(start, len)| {
            let from = TWO_PI * (start as f64 - 0.5) / n;
            (from, from + TWO_PI * len as f64 / n)
        })
        .collect();
    OccupationDensity::from_occupied_arcs(&arcs)
}

pub fn evaluate_density(g: &OccupationDensity, theta: f64) -> f64 {
    g.evaluate(theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, ks: &[i64]) -> ModeSet {
        ModeSet::new(n, ks.iter().copied()).unwrap()
    }

    #[test]
    fn mode_window_is_validated() {
        assert!(ModeSet::new(4, [3]).is_err());
        assert!(ModeSet::new(4, [-2]).is_err());
        assert!(ModeSet::new(5, [0]).is_err());
        assert!(ModeSet::new(4, [1, 1]).is_err());
        assert_eq!(ModeSet::full(6).unwrap().len(), 6);
    }

    #[test]
    fn translation_examples() {
        assert_eq!(set(8, &[1, 2]).translate(0), set(8, &[1, 2]));
        assert_eq!(set(8, &[1, 2]).translate(1), set(8, &[2, 3]));
        assert_eq!(set(4, &[2]).translate(1), set(4, &[-1]));
        assert_eq!(set(4, &[-1]).translate(-1), set(4, &[2]));
    }

    #[test]
    fn complement_examples() {
        assert_eq!(set(4, &[0, 1]).complement(), set(4, &[-1, 2]));
        assert!(ModeSet::full(4).unwrap().complement().is_empty());
        assert_eq!(
            ModeSet::empty(4).unwrap().complement(),
            ModeSet::full(4).unwrap()
        );
    }

    #[test]
    fn runs_wrap_around_the_window() {
        // N = 8: window -3..=4, so 4 and -3 are neighbours
        assert_eq!(set(8, &[-3, -2, 1, 4]).runs(), vec![(1, 1), (4, 3)]);
        assert_eq!(set(8, &[0, 1, 2]).runs(), vec![(0, 3)]);
    }

    #[test]
    fn finite_states_have_expected_fillings() {
        let s1 = ModeSet::state1(16).unwrap();
        assert_eq!(s1.len(), 8);
        assert_eq!(s1.iter().min(), Some(-3));
        assert_eq!(s1.iter().max(), Some(4));
        assert_eq!(ModeSet::state2(16).unwrap().len(), 4);
        assert_eq!(ModeSet::state3(16).unwrap().len(), 6);
        assert!(ModeSet::state3(12).is_err());
    }

    #[test]
    fn density_normalization_merges_equal_plateaus() {
        let g = OccupationDensity::new(vec![-1.0, 0.0, 1.0], vec![0.5, 0.5, -1.0]).unwrap();
        assert_eq!(g.plateau_count(), 2);
        assert_eq!(g.jump_angles(), &[0.0, 1.0]);
        let c = OccupationDensity::new(vec![-1.0, 2.0], vec![0.25, 0.25]).unwrap();
        assert!(c.is_constant());
        assert_eq!(c.evaluate(0.3), 0.25);
    }

    #[test]
    fn density_rejects_bad_input() {
        assert!(OccupationDensity::new(vec![], vec![]).is_err());
        assert!(OccupationDensity::new(vec![0.0], vec![1.5]).is_err());
        assert!(OccupationDensity::new(vec![1.0, 0.0], vec![1.0, -1.0]).is_err());
        assert!(OccupationDensity::new(vec![0.0, 0.0], vec![1.0, -1.0]).is_err());
        assert!(OccupationDensity::new(vec![-PI], vec![1.0]).is_err());
    }

    #[test]
    fn evaluation_of_named_states() {
        assert_eq!(OccupationDensity::state1().evaluate(0.0), 1.0);
        assert_eq!(OccupationDensity::state2().evaluate(0.0), 0.0);
        assert_eq!(OccupationDensity::state3().evaluate(PI), -1.0);
        // right-continuity at the jumps
        let g = OccupationDensity::state1();
        assert_eq!(g.evaluate(-PI / 2.0), 1.0);
        assert_eq!(g.evaluate(PI / 2.0), -1.0);
        assert_eq!(g.evaluate(2.0 * PI), 1.0);
        assert_eq!(g.evaluate(-PI), -1.0);
    }

    #[test]
    fn full_and_empty_mode_sets_give_constant_densities() {
        let full = density_from_modeset(&ModeSet::full(10).unwrap()).unwrap();
        assert!(full.is_constant());
        assert_eq!(full.values(), &[1.0]);
        let empty = density_from_modeset(&ModeSet::empty(10).unwrap()).unwrap();
        assert!(empty.is_constant());
        assert_eq!(empty.values(), &[-1.0]);
    }

    #[test]
    fn central_half_filling_approaches_state1() {
        let n = 1000;
        let ms = ModeSet::new(
            n,
            (1 - n as i64 / 2..=n as i64 / 2).filter(|k| 4 * k.abs() < n as i64),
        )
        .unwrap();
        let g = density_from_modeset(&ms).unwrap();
        let reference = OccupationDensity::state1();
        assert_eq!(g.values(), reference.values());
        for (a, b) in g.jump_angles().iter().zip(reference.jump_angles()) {
            assert!((a - b).abs() <= PI / n as f64 + 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn resolution_limit_rejects_irregular_fillings() {
        let ms = set(16, &[-7, -4, -2, 0, 3, 5, 8]);
        assert!(density_from_modeset_with_resolution(&ms, Some(4)).is_err());
        assert!(density_from_modeset_with_resolution(&ms, None).is_ok());
    }

    #[test]
    fn discontinuities_carry_neighbouring_values() {
        let jumps = OccupationDensity::state3().discontinuities();
        assert_eq!(jumps.len(), 2);
        assert_eq!((jumps[0].before, jumps[0].after), (-1.0, 0.5));
        assert_eq!((jumps[1].before, jumps[1].after), (0.5, -1.0));
    }

    #[test]
    fn rotation_preserves_plateaus() {
        let g = OccupationDensity::state3().rotated(2.0).unwrap();
        assert_eq!(g.evaluate(2.0), 0.5);
        assert_eq!(g.evaluate(2.0 + PI), -1.0);
        let widths: f64 = g.plateau_widths().iter().sum();
        assert!((widths - TWO_PI).abs() < 1e-12);
    }

    #[test]
    fn renyi_order_bounds() {
        assert!(RenyiOrder::new(0.5).is_err());
        assert!(RenyiOrder::new(f64::NAN).is_err());
        assert!(RenyiOrder::new(1.0).unwrap().is_von_neumann());
        assert_eq!(RenyiOrder::new(3.0).unwrap().as_integer(), Some(3));
        assert_eq!(RenyiOrder::new(2.5).unwrap().as_integer(), None);
    }
}
