//! Curve fitting, Table-1 style reproduction and flat-file reporting.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::asymptotics::{self, ExpansionCoefficients};
use crate::error::{Error, Result};
use crate::occupation::{OccupationDensity, RenyiOrder};
use crate::spectra::{entropy_curve, EntropySource};

/// Smallest interval length admitted into a fit.
pub const MIN_FIT_LENGTH: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual_rms: f64,
    /// Distinct lengths used, ascending.
    pub lengths: Vec<usize>,
}

/// Unweighted least squares of `S(L)` in the basis `{L, log L, 1}`.
pub fn fit_expansion(curve: &[(usize, f64)]) -> Result<FitResult> {
    if let Some(&(l, _)) = curve.iter().find(|(l, _)| *l < MIN_FIT_LENGTH) {
        return Err(Error::validation(format!(
            "fit lengths must be at least {MIN_FIT_LENGTH}, got {l}"
        )));
    }
    if curve.iter().any(|(_, s)| !s.is_finite()) {
        return Err(Error::validation("fit data contains non-finite entropies"));
    }
    let mut lengths: Vec<usize> = curve.iter().map(|p| p.0).collect();
    lengths.sort_unstable();
    lengths.dedup();
    if lengths.len() < 3 {
        return Err(Error::RankDeficient(format!(
            "need at least 3 distinct lengths, got {}",
            lengths.len()
        )));
    }

    let design = DMatrix::from_fn(curve.len(), 3, |i, k| {
        let l = curve[i].0 as f64;
        match k {
            0 => l,
            1 => l.ln(),
            _ => 1.0,
        }
    });
    let rhs = DVector::from_iterator(curve.len(), curve.iter().map(|p| p.1));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 1e-12 * smax {
        return Err(Error::RankDeficient(format!(
            "singular values {smax:e} / {smin:e}"
        )));
    }
    let coef = svd
        .solve(&rhs, 1e-14 * smax)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let residual = &design * &coef - &rhs;
    let residual_rms = (residual.norm_squared() / curve.len() as f64).sqrt();
    Ok(FitResult {
        a: coef[0],
        b: coef[1],
        c: coef[2],
        residual_rms,
        lengths,
    })
}

/// `lmin, lmin + step, …` up to and including `lmax` when it lies on the grid.
pub fn length_grid(lmin: usize, lmax: usize, step: usize) -> Result<Vec<usize>> {
    if lmin == 0 || step == 0 || lmax < lmin {
        return Err(Error::validation(format!(
            "invalid length grid: lmin = {lmin}, lmax = {lmax}, step = {step}"
        )));
    }
    Ok((lmin..=lmax).step_by(step).collect())
}

/// `L = 10, 20, …, 1000`.
pub fn table1_grid() -> Vec<usize> {
    (1..=100).map(|k| 10 * k).collect()
}

/// One row of the comparison: predicted coefficients next to fitted ones.
#[derive(Clone, Debug)]
pub struct Table1Row {
    pub state: u32,
    pub alpha: RenyiOrder,
    pub predicted: ExpansionCoefficients,
    pub fitted: FitResult,
}

impl Table1Row {
    pub fn abs_diffs(&self) -> [f64; 3] {
        [
            (self.predicted.a - self.fitted.a).abs(),
            (self.predicted.b - self.fitted.b).abs(),
            (self.predicted.c - self.fitted.c).abs(),
        ]
    }
}

/// Fisher–Hartwig coefficients only, for states 1–3 and `α ∈ {1, 2}`.
pub fn table1_predictions() -> Result<Vec<(u32, ExpansionCoefficients)>> {
    let mut out = Vec::new();
    for alpha in [1.0, 2.0] {
        for state in 1..=3 {
            let g = OccupationDensity::named_state(state)?;
            out.push((state, asymptotics::expansion(&g, RenyiOrder::new(alpha)?)?));
        }
    }
    Ok(out)
}

pub fn reproduce_table1() -> Result<Vec<Table1Row>> {
    reproduce_table1_on(&table1_grid())
}

/// Predicted coefficients and fits of exact thermodynamic-limit curves on `grid`.
pub fn reproduce_table1_on(grid: &[usize]) -> Result<Vec<Table1Row>> {
    let cases: Vec<(u32, f64)> = [1.0, 2.0]
        .iter()
        .flat_map(|&a| (1..=3).map(move |s| (s, a)))
        .collect();
    cases
        .par_iter()
        .map(|&(state, alpha)| {
            let alpha = RenyiOrder::new(alpha)?;
            let g = OccupationDensity::named_state(state)?;
            let predicted = asymptotics::expansion(&g, alpha)?;
            let curve = entropy_curve(&EntropySource::Density(g), grid, alpha)?;
            let fitted = fit_expansion(&curve)?;
            Ok(Table1Row {
                state,
                alpha,
                predicted,
                fitted,
            })
        })
        .collect()
}

/// Floats at 9 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..9).contains(&exponent) {
        format!("{:.*}", (8 - exponent).max(0) as usize, x)
    } else {
        format!("{x:.8e}")
    }
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("state,alpha,coefficient,fh,num,abs_diff\n");
    for row in rows {
        let diffs = row.abs_diffs();
        let pairs = [
            ("A", row.predicted.a, row.fitted.a),
            ("B", row.predicted.b, row.fitted.b),
            ("C", row.predicted.c, row.fitted.c),
        ];
        for ((name, fh, num), diff) in pairs.into_iter().zip(diffs) {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row.state,
                row.alpha,
                name,
                fmt_sig(fh),
                fmt_sig(num),
                fmt_sig(diff)
            );
        }
    }
    out
}

pub fn curve_csv(curve: &[(usize, f64)]) -> String {
    let mut out = String::from("L,S\n");
    for &(l, s) in curve {
        let _ = writeln!(out, "{l},{}", fmt_sig(s));
    }
    out
}

/// Reads a two-column `L,S` CSV with a header row.
pub fn parse_curve_csv(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    lines
        .next()
        .ok_or_else(|| Error::validation("curve CSV is empty"))?;
    lines
        .enumerate()
        .map(|(i, line)| {
            let mut cols = line.split(',').map(str::trim);
            let l = cols.next().and_then(|c| c.parse::<usize>().ok());
            let s = cols.next().and_then(|c| c.parse::<f64>().ok());
            match (l, s) {
                (Some(l), Some(s)) => Ok((l, s)),
                _ => Err(Error::validation(format!(
                    "curve CSV line {} is not `L,S`: {line}",
                    i + 2
                ))),
            }
        })
        .collect()
}

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;

fn svg_document(title: &str, points: &[(f64, f64)], line: &[(f64, f64)]) -> String {
    let all = points.iter().chain(line);
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let pad = 0.05 * (y1 - y0);
    let (y0, y1) = (y0 - pad, y1 + pad);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (SVG_WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| SVG_HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (SVG_HEIGHT - 2.0 * MARGIN);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{title}</text>"#,
        SVG_WIDTH / 2.0
    );
    // axes
    let _ = writeln!(
        svg,
        r#"<path d="M{m} {t} L{m} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = SVG_HEIGHT - MARGIN,
        r = SVG_WIDTH - MARGIN
    );
    for k in 0..=4 {
        let fx = x0 + (x1 - x0) * k as f64 / 4.0;
        let fy = y0 + (y1 - y0) * k as f64 / 4.0;
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            sx(fx),
            SVG_HEIGHT - MARGIN + 16.0,
            fmt_tick(fx)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            MARGIN - 6.0,
            sy(fy) + 4.0,
            fmt_tick(fy)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">L</text>"#,
        SVG_WIDTH / 2.0,
        SVG_HEIGHT - 12.0
    );
    if !line.is_empty() {
        let path: Vec<String> = line
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline class="prediction" points="{}" stroke="crimson" stroke-width="1.5" fill="none"/>"#,
            path.join(" ")
        );
    }
    for &(x, y) in points {
        let _ = writeln!(
            svg,
            r#"<circle class="exact" cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#,
            sx(x),
            sy(y)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1000.0 || (v != 0.0 && v.abs() < 0.01) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

/// Path of the companion plot with the linear term removed.
pub fn linear_subtracted_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("plot");
    path.with_file_name(format!("{stem}_nolinear.svg"))
}

/// Writes the exact points with the expansion overlaid to `path`, and the same
/// data with `A·L` subtracted to [`linear_subtracted_path`]`(path)`.
pub fn emit_plot(
    curve: &[(usize, f64)],
    prediction: &ExpansionCoefficients,
    path: &Path,
) -> Result<Vec<PathBuf>> {
    if path.as_os_str().is_empty() {
        return Err(Error::validation("plot output path is empty"));
    }
    if curve.is_empty() {
        return Err(Error::validation("nothing to plot: curve is empty"));
    }
    let lmin = curve.iter().map(|p| p.0).min().unwrap_or(1).max(1) as f64;
    let lmax = curve.iter().map(|p| p.0).max().unwrap_or(1) as f64;
    let line_x: Vec<f64> = (0..=200)
        .map(|i| lmin + (lmax - lmin) * i as f64 / 200.0)
        .collect();

    let points: Vec<(f64, f64)> = curve.iter().map(|&(l, s)| (l as f64, s)).collect();
    let line: Vec<(f64, f64)> = line_x
        .iter()
        .map(|&x| (x, prediction.evaluate(x)))
        .collect();
    let title = format!("Renyi entropy, alpha = {}", prediction.alpha);
    fs::write(path, svg_document(&title, &points, &line))?;

    let slope = prediction.a;
    let sub_points: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x, y - slope * x)).collect();
    let sub_line: Vec<(f64, f64)> = line.iter().map(|&(x, y)| (x, y - slope * x)).collect();
    let sub_path = linear_subtracted_path(path);
    fs::write(
        &sub_path,
        svg_document(
            &format!("{title}, linear term subtracted"),
            &sub_points,
            &sub_line,
        ),
    )?;
    Ok(vec![path.to_path_buf(), sub_path])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fit_recovers_exact_model() {
        let curve: Vec<(usize, f64)> = (1..=100)
            .map(|k| {
                let l = 10 * k;
                (l, 0.5 * l as f64 + 0.2 * (l as f64).ln() + 0.1)
            })
            .collect();
        let fit = fit_expansion(&curve).unwrap();
        assert_abs_diff_eq!(fit.a, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.b, 0.2, epsilon = 1e-10);
        assert_abs_diff_eq!(fit.c, 0.1, epsilon = 1e-10);
        assert!(fit.residual_rms < 1e-10);
        assert_eq!(fit.lengths.len(), 100);
    }

    #[test]
    fn fit_rejects_degenerate_designs() {
        assert!(matches!(
            fit_expansion(&[(10, 1.0), (10, 1.1), (10, 0.9)]),
            Err(Error::RankDeficient(_))
        ));
        assert!(matches!(
            fit_expansion(&[(5, 1.0), (20, 1.1), (30, 0.9)]),
            Err(Error::Validation(_))
        ));
        assert!(fit_expansion(&[(10, 1.0), (20, 1.1)]).is_err());
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333");
        assert_eq!(fmt_sig(2.261_083_4), "2.26108340");
        assert_eq!(fmt_sig(281.167_6), "281.167600");
        assert_eq!(fmt_sig(-0.000_123_456_789_12), "-0.000123456789");
        assert_eq!(fmt_sig(1.5e-9), "1.50000000e-9");
    }

    #[test]
    fn curve_csv_round_trip() {
        let curve = vec![(10, 1.25), (20, 1.5)];
        let text = curve_csv(&curve);
        assert!(text.starts_with("L,S\n"));
        assert_eq!(parse_curve_csv(&text).unwrap(), curve);
        assert!(parse_curve_csv("L,S\n10,abc\n").is_err());
        assert!(parse_curve_csv("").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(length_grid(10, 40, 10).unwrap(), vec![10, 20, 30, 40]);
        assert_eq!(length_grid(10, 45, 10).unwrap(), vec![10, 20, 30, 40]);
        assert!(length_grid(0, 10, 1).is_err());
        assert!(length_grid(10, 5, 1).is_err());
        let g = table1_grid();
        assert_eq!((g[0], g[99], g.len()), (10, 1000, 100));
    }

    #[test]
    fn plot_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state1.svg");
        let g = OccupationDensity::state1();
        let alpha = RenyiOrder::new(1.0).unwrap();
        let pred = asymptotics::expansion(&g, alpha).unwrap();
        let curve = entropy_curve(&EntropySource::Density(g), &[10, 20, 40, 80], alpha).unwrap();
        let written = emit_plot(&curve, &pred, &path).unwrap();
        assert_eq!(written.len(), 2);
        let svg = fs::read_to_string(&path).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("class=\"exact\"").count(), 4);
        assert_eq!(svg.matches("class=\"prediction\"").count(), 1);
        assert!(dir.path().join("state1_nolinear.svg").exists());
        assert!(emit_plot(&curve, &pred, Path::new("")).is_err());
        assert!(emit_plot(&[], &pred, &path).is_err());
    }
}
