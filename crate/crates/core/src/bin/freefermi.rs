use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use freefermi::asymptotics::{self, jump_contributions};
use freefermi::config::{LadderConfig, StateConfig};
use freefermi::harness::{
    self, curve_csv, emit_plot, fit_expansion, fmt_sig, length_grid, parse_curve_csv, table1_csv,
};
use freefermi::ladder::{dispersion_bands, fragment_entropy_with_bands, FragmentMode};
use freefermi::{Error, RenyiOrder, Result};

#[derive(Parser)]
#[command(
    name = "freefermi",
    version,
    about = "Renyi entanglement entropies of free-fermion chains"
)]
struct Cli {
    /// JSON state or ladder description.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write CSV output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG plot (and a `_nolinear` companion).
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Grid {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 10)]
    lmin: usize,
    #[arg(long, default_value_t = 1000)]
    lmax: usize,
    #[arg(long, default_value_t = 10)]
    lstep: usize,
}

impl Grid {
    fn lengths(&self) -> Result<Vec<usize>> {
        length_grid(self.lmin, self.lmax, self.lstep)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Exact S_alpha(L) from the correlation-matrix spectrum.
    Exact(Grid),
    /// Fisher-Hartwig coefficients A, B, C with a per-jump breakdown.
    Asympt {
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// Print both sides of the integral identity instead.
        #[arg(long)]
        check_intid: bool,
    },
    /// Least-squares fit of A L + B log L + C.
    Fit {
        #[command(flatten)]
        grid: Grid,
        /// Fit an existing `L,S` CSV instead of computing the curve.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Fragment entropy of a ladder, exact against asymptotic.
    Ladder(Grid),
    /// Predicted and fitted coefficients for the three reference states.
    Table1,
    /// Correlation matrix entries of an interval, as `n,m,re,im`.
    DumpCorr {
        #[arg(long)]
        l: usize,
    },
}

fn require_config(cli: &Cli) -> Result<&Path> {
    cli.config
        .as_deref()
        .ok_or_else(|| Error::Validation("this command needs --config".into()))
}

fn order(alpha: f64) -> Result<RenyiOrder> {
    RenyiOrder::new(alpha)
}

fn run(cli: &Cli) -> Result<String> {
    let mut out = String::new();
    match &cli.command {
        Command::Exact(grid) => {
            let state = StateConfig::load(require_config(cli)?)?;
            let alpha = order(grid.alpha)?;
            let curve =
                freefermi::spectra::entropy_curve(&state.source()?, &grid.lengths()?, alpha)?;
            if let Some(svg) = &cli.svg {
                let prediction = asymptotics::expansion(&state.density()?, alpha)?;
                emit_plot(&curve, &prediction, svg)?;
            }
            out = curve_csv(&curve);
        }
        Command::Asympt { alpha, check_intid } => {
            let alpha = order(*alpha)?;
            if *check_intid {
                let (lhs, rhs) = asymptotics::intid_check(alpha)?;
                out.push_str("alpha,lhs,rhs,abs_diff\n");
                let _ = writeln!(
                    out,
                    "{alpha},{},{},{}",
                    fmt_sig(lhs),
                    fmt_sig(rhs),
                    fmt_sig((lhs - rhs).abs())
                );
            } else {
                let g = StateConfig::load(require_config(cli)?)?.density()?;
                let coeffs = asymptotics::expansion(&g, alpha)?;
                out.push_str("alpha,A,B,C\n");
                let _ = writeln!(
                    out,
                    "{alpha},{},{},{}",
                    fmt_sig(coeffs.a),
                    fmt_sig(coeffs.b),
                    fmt_sig(coeffs.c)
                );
                out.push_str("\njump,angle,before,after,B_part,C_self,C_cross\n");
                for part in jump_contributions(&g, alpha)? {
                    let j = part.jump;
                    let _ = writeln!(
                        out,
                        "{},{},{},{},{},{},{}",
                        j.index,
                        fmt_sig(j.angle),
                        fmt_sig(j.before),
                        fmt_sig(j.after),
                        fmt_sig(part.b),
                        fmt_sig(part.c_self),
                        fmt_sig(part.c_cross)
                    );
                }
            }
        }
        Command::Fit { grid, input } => {
            let curve = match input {
                Some(path) => parse_curve_csv(&fs::read_to_string(path)?)?,
                None => {
                    let state = StateConfig::load(require_config(cli)?)?;
                    freefermi::spectra::entropy_curve(
                        &state.source()?,
                        &grid.lengths()?,
                        order(grid.alpha)?,
                    )?
                }
            };
            let fit = fit_expansion(&curve)?;
            out.push_str("A,B,C,residual_rms\n");
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_sig(fit.a),
                fmt_sig(fit.b),
                fmt_sig(fit.c),
                fmt_sig(fit.residual_rms)
            );
        }
        Command::Ladder(grid) => {
            let spec = LadderConfig::load(require_config(cli)?)?.spec()?;
            let alpha = order(grid.alpha)?;
            let bands = dispersion_bands(&spec)?;
            out.push_str("L,S_exact,S_asym\n");
            for l in grid.lengths()? {
                let exact = fragment_entropy_with_bands(&bands, l, alpha, FragmentMode::Exact)?;
                let asym = fragment_entropy_with_bands(&bands, l, alpha, FragmentMode::Asymptotic)?;
                let _ = writeln!(out, "{l},{},{}", fmt_sig(exact), fmt_sig(asym));
            }
            out.push_str("\nband,nu\n");
            for s in 0..spec.q() {
                let _ = writeln!(out, "{s},{}", bands.nu(s));
            }
            let _ = writeln!(out, "total,{}", bands.total_nu());
        }
        Command::Table1 => {
            out = table1_csv(&harness::reproduce_table1()?);
        }
        Command::DumpCorr { l } => {
            let state = StateConfig::load(require_config(cli)?)?;
            let c = state.source()?.correlation(*l)?;
            out.push_str("n,m,re,im\n");
            for n in 0..*l {
                for m in 0..*l {
                    let z = c.entry(n, m);
                    let _ = writeln!(out, "{n},{m},{},{}", fmt_sig(z.re), fmt_sig(z.im));
                }
            }
        }
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match &cli.out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => io::stdout().write_all(text.as_bytes()).map_err(Error::from),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
