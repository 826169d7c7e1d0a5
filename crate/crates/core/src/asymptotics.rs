//! Large-`L` expansion `S_α(L) = A_α L + B_α log L + C_α + o(1)` for a
//! piecewise-constant occupation density.
//!
//! All three coefficients reduce to one-dimensional integrals over the
//! plateau values that a jump connects. Writing `f_α(λ)` for the single-mode
//! entropy as a function of `λ = 2μ − 1`:
//!
//! * `A = (1/2π) ∫ f_α(g(θ)) dθ` is a finite sum over plateaus;
//! * `B = (1/2π²) Σ_r ∫_{t⁻_r}^{t⁺_r} f'_α(λ) log|(λ − t⁺_r)/(λ − t⁻_r)| dλ`;
//! * `C = Σ_r I(r) − Σ_{r≠r'} log[2 − 2cos(θ_r − θ_r')] K(r, r')` with
//!   `I(r) = −(1/π) ∫ f'_α(λ) arg Γ(1/2 + iω_r(λ)) dλ`,
//!   `ω_r(λ) = (1/2π) log|(λ − t⁺_r)/(λ − t⁻_r)|`, and
//!   `K(r, r') = (1/4π²) ∫_{t⁻_r}^{t⁺_r} f'_α(λ) log|(λ − t⁺_r')/(λ − t⁻_r')| dλ`.
//!
//! Here `t⁻_r`/`t⁺_r` are the plateau values just below/above the jump angle
//! `θ_r`, and every integral is oriented from `t⁻_r` to `t⁺_r`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::occupation::{OccupationDensity, RenyiOrder};
use crate::quadrature::{self, QuadSettings};
use crate::special;

pub use crate::special::arg_gamma_half;

/// A discontinuity of an occupation density.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpData {
    pub index: usize,
    pub angle: f64,
    /// Plateau value just below `angle`.
    pub before: f64,
    /// Plateau value just above `angle`.
    pub after: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpansionCoefficients {
    pub alpha: RenyiOrder,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl ExpansionCoefficients {
    /// `A L + B log L + C`.
    pub fn evaluate(&self, l: f64) -> f64 {
        self.a * l + self.b * l.ln() + self.c
    }
}

/// Contribution of one jump to `B` and `C`.
///
/// `c_self` is `I(r)`, `c_cross` is `−Σ_{r'≠r} log[2 − 2cos(θ_r − θ_r')] K(r, r')`;
/// summing `b` and `c_self + c_cross` over all jumps gives `B` and `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JumpContribution {
    pub jump: JumpData,
    pub b: f64,
    pub c_self: f64,
    pub c_cross: f64,
}

fn single_mode(one_plus: f64, one_minus: f64, alpha: RenyiOrder) -> f64 {
    let p = 0.5 * one_plus;
    let q = 0.5 * one_minus;
    if alpha.is_von_neumann() {
        let xlogx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
        -(xlogx(p) + xlogx(q))
    } else {
        let a = alpha.value();
        (p.powf(a) + q.powf(a)).ln() / (1.0 - a)
    }
}

fn single_mode_slope(one_plus: f64, one_minus: f64, alpha: RenyiOrder) -> f64 {
    let p = 0.5 * one_plus;
    let q = 0.5 * one_minus;
    if alpha.is_von_neumann() {
        0.5 * (q.ln() - p.ln())
    } else {
        let a = alpha.value();
        let num = p.powf(a - 1.0) - q.powf(a - 1.0);
        let den = p.powf(a) + q.powf(a);
        a / (1.0 - a) * 0.5 * num / den
    }
}

/// `f_α(1, y) = (1/(1−α)) log[((1+y)/2)^α + ((1−y)/2)^α]`, binary entropy at `α = 1`.
pub fn f_alpha(y: f64, alpha: RenyiOrder) -> Result<f64> {
    if !(-1.0..=1.0).contains(&y) {
        return Err(Error::validation(format!(
            "f_alpha needs |y| <= 1, got {y}"
        )));
    }
    Ok(single_mode(1.0 + y, 1.0 - y, alpha))
}

/// `d f_α(1, λ)/dλ`, defined for `|λ| < 1`.
pub fn df_alpha(lambda: f64, alpha: RenyiOrder) -> Result<f64> {
    if lambda.is_nan() || lambda.abs() >= 1.0 {
        return Err(Error::validation(format!(
            "df_alpha needs |lambda| < 1, got {lambda}"
        )));
    }
    Ok(single_mode_slope(1.0 + lambda, 1.0 - lambda, alpha))
}

/// A node on an oriented sub-segment of a jump integral, with exact offsets
/// to the segment ends.
struct SegmentPoint {
    lambda: f64,
    lo: f64,
    hi: f64,
    from_lo: f64,
    from_hi: f64,
}

impl SegmentPoint {
    /// `λ − v`, exact when `v` is a segment end.
    fn offset(&self, v: f64) -> f64 {
        if v == self.lo {
            self.from_lo
        } else if v == self.hi {
            -self.from_hi
        } else {
            self.lambda - v
        }
    }

    fn slope(&self, alpha: RenyiOrder) -> f64 {
        single_mode_slope(self.offset(-1.0), -self.offset(1.0), alpha)
    }

    /// `log|(λ − upper)/(λ − lower)|`.
    fn log_ratio(&self, lower: f64, upper: f64) -> f64 {
        self.offset(upper).abs().ln() - self.offset(lower).abs().ln()
    }
}

/// `∫_from^to h(λ) dλ`, split at every breakpoint strictly inside the segment.
fn segment_integral<H>(from: f64, to: f64, breakpoints: &[f64], mut h: H) -> Result<f64>
where
    H: FnMut(&SegmentPoint) -> f64,
{
    let (lo, hi) = if from < to { (from, to) } else { (to, from) };
    let mut cuts: Vec<f64> = vec![lo];
    cuts.extend(breakpoints.iter().copied().filter(|&v| v > lo && v < hi));
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        let out = quadrature::integrate(a, b, QuadSettings::default(), |node| {
            h(&SegmentPoint {
                lambda: node.x,
                lo: a,
                hi: b,
                from_lo: node.from_lo,
                from_hi: node.from_hi,
            })
        })?;
        total += out.value;
    }
    Ok(if from < to { total } else { -total })
}

/// `A_α = (1/2π) Σ_r (θ_r − θ_{r−1}) f_α(1, t_r)`.
pub fn coeff_a(g: &OccupationDensity, alpha: RenyiOrder) -> f64 {
    g.values()
        .iter()
        .zip(g.plateau_widths())
        .map(|(&t, w)| w * single_mode(1.0 + t, 1.0 - t, alpha))
        .sum::<f64>()
        / (2.0 * PI)
}

fn plateau_levels(g: &OccupationDensity) -> Vec<f64> {
    let mut levels = g.values().to_vec();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
}

fn jump_b(jump: &JumpData, levels: &[f64], alpha: RenyiOrder) -> Result<f64> {
    let integral = segment_integral(jump.before, jump.after, levels, |p| {
        p.slope(alpha) * p.log_ratio(jump.before, jump.after)
    })?;
    Ok(integral / (2.0 * PI * PI))
}

fn jump_i(jump: &JumpData, levels: &[f64], alpha: RenyiOrder) -> Result<f64> {
    let integral = segment_integral(jump.before, jump.after, levels, |p| {
        let omega = p.log_ratio(jump.before, jump.after) / (2.0 * PI);
        p.slope(alpha) * special::arg_gamma_half(omega)
    })?;
    Ok(-integral / PI)
}

fn jump_k(jump: &JumpData, other: &JumpData, levels: &[f64], alpha: RenyiOrder) -> Result<f64> {
    let integral = segment_integral(jump.before, jump.after, levels, |p| {
        p.slope(alpha) * p.log_ratio(other.before, other.after)
    })?;
    Ok(integral / (4.0 * PI * PI))
}

/// `log[2 − 2cos φ]`, computed as `2 log|2 sin(φ/2)|`.
fn chord_log(phi: f64) -> f64 {
    2.0 * (2.0 * (0.5 * phi).sin()).abs().ln()
}

/// `B_α` as a sum of oriented jump integrals.
pub fn coeff_b(g: &OccupationDensity, alpha: RenyiOrder) -> Result<f64> {
    let levels = plateau_levels(g);
    g.discontinuities()
        .iter()
        .map(|j| jump_b(j, &levels, alpha))
        .sum()
}

/// `C_α` from the self terms `I(r)` and the pairwise terms `K(r, r')`.
pub fn coeff_c(g: &OccupationDensity, alpha: RenyiOrder) -> Result<f64> {
    Ok(jump_contributions(g, alpha)?
        .iter()
        .map(|c| c.c_self + c.c_cross)
        .sum())
}

/// Per-jump breakdown of `B_α` and `C_α`.
pub fn jump_contributions(
    g: &OccupationDensity,
    alpha: RenyiOrder,
) -> Result<Vec<JumpContribution>> {
    let levels = plateau_levels(g);
    let jumps = g.discontinuities();
    jumps
        .iter()
        .map(|jump| {
            let b = jump_b(jump, &levels, alpha)?;
            let c_self = jump_i(jump, &levels, alpha)?;
            let mut c_cross = 0.0;
            for other in jumps.iter().filter(|o| o.index != jump.index) {
                c_cross -=
                    chord_log(jump.angle - other.angle) * jump_k(jump, other, &levels, alpha)?;
            }
            Ok(JumpContribution {
                jump: *jump,
                b,
                c_self,
                c_cross,
            })
        })
        .collect()
}

/// All three coefficients.
pub fn expansion(g: &OccupationDensity, alpha: RenyiOrder) -> Result<ExpansionCoefficients> {
    let parts = jump_contributions(g, alpha)?;
    Ok(ExpansionCoefficients {
        alpha,
        a: coeff_a(g, alpha),
        b: parts.iter().map(|p| p.b).sum(),
        c: parts.iter().map(|p| p.c_self + p.c_cross).sum(),
    })
}

/// `A_α L + B_α log L + C_α`.
pub fn predict_entropy(g: &OccupationDensity, l: usize, alpha: RenyiOrder) -> Result<f64> {
    if l == 0 {
        return Err(Error::validation("interval length must be at least 1"));
    }
    Ok(expansion(g, alpha)?.evaluate(l as f64))
}

/// Closed-form `B_α` of the state that is `0` on half the circle and `−1` on the other half.
pub fn closed_form_b_state2(alpha: RenyiOrder) -> Result<f64> {
    let n = alpha.as_integer().ok_or_else(|| {
        Error::validation(format!("closed-form B needs an integer order, got {alpha}"))
    })?;
    let ln2_over_pi = 2f64.ln() / PI;
    if n == 1 {
        return Ok(0.125 - 0.5 * ln2_over_pi * ln2_over_pi);
    }
    let a = n as f64;
    let sum: f64 = (1..=n)
        .map(|k| {
            let s = ((2 * k - 1) as f64 * PI / (2.0 * a)).sin().ln();
            s * s
        })
        .sum();
    Ok((a + 1.0) / (24.0 * a) - sum / (2.0 * PI * PI * (a - 1.0)))
}

/// Both sides of `∫_{-1}^{1} f_α(1, x) dx/(1 − x²) = (π²/12)(1 + α)/α`.
pub fn intid_check(alpha: RenyiOrder) -> Result<(f64, f64)> {
    let lhs = quadrature::integrate(-1.0, 1.0, QuadSettings::default(), |node| {
        let (one_plus, one_minus) = (node.from_lo, node.from_hi);
        single_mode(one_plus, one_minus, alpha) / (one_plus * one_minus)
    })?
    .value;
    let a = alpha.value();
    Ok((lhs, PI * PI / 12.0 * (1.0 + a) / a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn order(a: f64) -> RenyiOrder {
        RenyiOrder::new(a).unwrap()
    }

    #[test]
    fn single_mode_function() {
        for a in [1.0, 2.0, 3.3] {
            assert_eq!(f_alpha(1.0, order(a)).unwrap(), 0.0);
            assert_abs_diff_eq!(f_alpha(-1.0, order(a)).unwrap(), 0.0, epsilon = 1e-16);
        }
        assert_abs_diff_eq!(f_alpha(0.0, order(1.0)).unwrap(), LN_2, epsilon = 1e-16);
        // −(3/4 log 3/4 + 1/4 log 1/4)
        let expected = -(0.75 * 0.75f64.ln() + 0.25 * 0.25f64.ln());
        assert_abs_diff_eq!(f_alpha(0.5, order(1.0)).unwrap(), expected, epsilon = 1e-15);
        assert_abs_diff_eq!(expected, 0.562_335_144_618_808_4, epsilon = 1e-15);
        assert!(f_alpha(1.5, order(1.0)).is_err());
    }

    #[test]
    fn slope_examples() {
        for a in [1.0, 2.0, 5.0] {
            assert_eq!(df_alpha(0.0, order(a)).unwrap(), 0.0);
        }
        assert_abs_diff_eq!(
            df_alpha(0.5, order(1.0)).unwrap(),
            0.5 * (1.0f64 / 3.0).ln(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(df_alpha(0.5, order(2.0)).unwrap(), -0.8, epsilon = 1e-15);
        assert!(df_alpha(1.0, order(1.0)).is_err());
        assert!(df_alpha(-1.0, order(2.0)).is_err());
    }

    #[test]
    fn slope_matches_finite_differences() {
        for a in [1.0, 1.5, 2.0, 4.0] {
            for &y in &[-0.9, -0.3, 0.2, 0.7] {
                let h = 1e-5;
                let fd = (f_alpha(y + h, order(a)).unwrap() - f_alpha(y - h, order(a)).unwrap())
                    / (2.0 * h);
                assert_abs_diff_eq!(df_alpha(y, order(a)).unwrap(), fd, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn linear_coefficient() {
        let half_ln2 = 0.5 * LN_2;
        for a in [1.0, 2.0] {
            assert_abs_diff_eq!(
                coeff_a(&OccupationDensity::state1(), order(a)),
                0.0,
                epsilon = 1e-16
            );
            assert_abs_diff_eq!(
                coeff_a(&OccupationDensity::state2(), order(a)),
                half_ln2,
                epsilon = 1e-15
            );
        }
        assert_abs_diff_eq!(
            coeff_a(&OccupationDensity::state3(), order(2.0)),
            0.235_001_8,
            epsilon = 5e-8
        );
    }

    #[test]
    fn constant_density_has_no_log_or_constant_term() {
        let g = OccupationDensity::constant(0.3).unwrap();
        let e = expansion(&g, order(2.0)).unwrap();
        assert_eq!(e.b, 0.0);
        assert_eq!(e.c, 0.0);
        assert!(e.a > 0.0);
        let empty = OccupationDensity::constant(-1.0).unwrap();
        for l in [1, 10, 1000] {
            assert_eq!(predict_entropy(&empty, l, order(1.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn state1_log_coefficients() {
        let g = OccupationDensity::state1();
        assert_abs_diff_eq!(coeff_b(&g, order(1.0)).unwrap(), 1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(coeff_b(&g, order(2.0)).unwrap(), 0.25, epsilon = 1e-9);
    }

    #[test]
    fn state2_log_coefficient() {
        let expected = 0.125 - 0.5 * (LN_2 / PI).powi(2);
        assert_abs_diff_eq!(
            coeff_b(&OccupationDensity::state2(), order(1.0)).unwrap(),
            expected,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(expected, 0.100_660, epsilon = 5e-7);
    }

    #[test]
    fn constant_terms() {
        assert_abs_diff_eq!(
            coeff_c(&OccupationDensity::state1(), order(1.0)).unwrap(),
            0.726_067,
            epsilon = 5e-7
        );
        assert_abs_diff_eq!(
            coeff_c(&OccupationDensity::state2(), order(2.0)).unwrap(),
            0.114_183,
            epsilon = 5e-7
        );
    }

    #[test]
    fn predicted_entropy_assembles_coefficients() {
        let s = predict_entropy(&OccupationDensity::state1(), 100, order(1.0)).unwrap();
        assert_abs_diff_eq!(s, 100f64.ln() / 3.0 + 0.726_067, epsilon = 1e-6);
        let s3 = predict_entropy(&OccupationDensity::state3(), 1000, order(1.0)).unwrap();
        let assembled = 0.281_167_6 * 1000.0 + 0.175_015 * 1000f64.ln() + 0.385_367;
        assert_abs_diff_eq!(s3, assembled, epsilon = 1e-4);
        assert!(predict_entropy(&OccupationDensity::state1(), 0, order(1.0)).is_err());
    }

    #[test]
    fn closed_form_matches_integral() {
        let g = OccupationDensity::state2();
        for n in 1..=5 {
            let a = order(n as f64);
            let closed = closed_form_b_state2(a).unwrap();
            let integral = coeff_b(&g, a).unwrap();
            assert_abs_diff_eq!(closed, integral, epsilon = 1e-8);
        }
        assert_abs_diff_eq!(
            closed_form_b_state2(order(2.0)).unwrap(),
            0.050_330,
            epsilon = 5e-7
        );
        // arbitrary-precision evaluation of the closed form at α = 3
        assert_abs_diff_eq!(
            closed_form_b_state2(order(3.0)).unwrap(),
            0.031_215_521_528_195_2,
            epsilon = 1e-14
        );
        assert!(closed_form_b_state2(order(2.5)).is_err());
    }

    #[test]
    fn integral_identity() {
        for a in [1.0, 2.0, 3.0] {
            let (lhs, rhs) = intid_check(order(a)).unwrap();
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-8);
        }
        assert_abs_diff_eq!(
            intid_check(order(1.0)).unwrap().1,
            PI * PI / 6.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            intid_check(order(2.0)).unwrap().1,
            PI * PI / 8.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn particle_hole_symmetry() {
        let g =
            OccupationDensity::new(vec![-2.5, -0.4, 0.9, 2.0], vec![0.2, -1.0, 0.6, 1.0]).unwrap();
        for a in [1.0, 2.0] {
            let e = expansion(&g, order(a)).unwrap();
            let h = expansion(&g.negated(), order(a)).unwrap();
            assert_abs_diff_eq!(e.a, h.a, epsilon = 1e-12);
            assert_abs_diff_eq!(e.b, h.b, epsilon = 1e-9);
            assert_abs_diff_eq!(e.c, h.c, epsilon = 1e-9);
        }
    }

    #[test]
    fn two_valued_log_coefficient_counts_jumps() {
        let g = OccupationDensity::new(
            vec![-2.9, -1.7, -0.2, 0.4, 1.1, 2.6],
            vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
        )
        .unwrap();
        for a in [1.0, 2.0, 3.0, 1.5] {
            let b = coeff_b(&g, order(a)).unwrap();
            assert_abs_diff_eq!(b, (1.0 + a) / a * 6.0 / 12.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn constant_term_is_rotation_invariant() {
        let g = OccupationDensity::new(vec![-1.0, 0.8], vec![0.3, -0.6]).unwrap();
        let base = coeff_c(&g, order(2.0)).unwrap();
        for shift in [0.3, 1.7, -2.2] {
            let rotated = g.rotated(shift).unwrap();
            assert_abs_diff_eq!(coeff_c(&rotated, order(2.0)).unwrap(), base, epsilon = 1e-9);
        }
    }

    #[test]
    fn breakdown_sums_to_totals() {
        let g = OccupationDensity::state3();
        let parts = jump_contributions(&g, order(1.0)).unwrap();
        let e = expansion(&g, order(1.0)).unwrap();
        assert_eq!(parts.len(), 2);
        assert_abs_diff_eq!(parts.iter().map(|p| p.b).sum::<f64>(), e.b, epsilon = 1e-15);
        assert_abs_diff_eq!(
            parts.iter().map(|p| p.c_self + p.c_cross).sum::<f64>(),
            e.c,
            epsilon = 1e-15
        );
    }
}
