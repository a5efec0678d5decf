//! Command-line front end for the tight-link library: construct the
//! critical clasp and Borromean configurations, emit catalog fixtures,
//! measure thickness, and verify force balance of any link JSON.
//!
//! Every verb is a thin composition of library calls; numeric output is
//! deterministic for fixed flags (shortest round-trip float formatting,
//! no timestamps).  Exit codes: 0 success, 1 domain or numeric failure,
//! 2 usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use tightlinks::balance::{
    report_to_json, solve_balance_with, BalanceConfig, Verdict, DEFAULT_STRUT_TOL,
    DEFAULT_THRESHOLD, DEFAULT_WALL_TOL,
};
use tightlinks::borromean;
use tightlinks::catalog;
use tightlinks::clasp;
use tightlinks::geometry::json::{from_json_str, to_json_string};
use tightlinks::geometry::{link_thickness, PolyLink};
use tightlinks::numerics::{NewtonConfig, Quadrature};

#[derive(Parser)]
#[command(name = "tightlinks", version, about = "Construct and verify tight link configurations")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Args)]
struct QuadOpts {
    /// absolute tolerance for the defining integrals
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
}

impl QuadOpts {
    fn quadrature(&self) -> Quadrature {
        Quadrature::with_abs_tol(self.tol)
    }
}

#[derive(Subcommand)]
enum Verb {
    /// Critical tau-clasp: scalar summary and pointwise profile
    Clasp {
        /// clasp parameter in (0, 1]
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// number of profile rows (u, phi, x, z, kappa, s)
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// write the profile as CSV
        #[arg(long)]
        out: Option<PathBuf>,
        /// write the scalar summary as JSON (also printed to stdout)
        #[arg(long)]
        scalars: Option<PathBuf>,
        /// write the strut family as CSV (s1, s2, x1, y1, z1, x2, y2, z2)
        #[arg(long)]
        struts: Option<PathBuf>,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Scan the length savings of the critical clasp over naive clasps
    ClaspScan {
        #[arg(long, default_value_t = 0.9)]
        lo: f64,
        #[arg(long, default_value_t = 1.0)]
        hi: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// write the scan as CSV (tau, excess, naive_excess, savings_fraction)
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Solve the critical Borromean shape equations for (rho, sigma, tau)
    BorromeanSolve {
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Discretize the critical Borromean rings (or the circular B2 comparison)
    BorromeanBuild {
        /// vertices per component
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// build the three-circle comparison configuration instead
        #[arg(long)]
        b2: bool,
        /// write the link as geometry JSON
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        quad: QuadOpts,
    },
    /// Emit a catalog fixture as geometry JSON
    Catalog {
        fixture: Fixture,
        /// vertices per component (per quarter-turn for chain-like fixtures)
        #[arg(long, default_value_t = 512)]
        n: usize,
        /// clasp parameter, for the clasp-style fixtures
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// straight leg length, for the clasp-style fixtures
        #[arg(long, default_value_t = 1.0)]
        leg: f64,
        /// polygon sides for the wrapped fixture
        #[arg(long, default_value_t = 6)]
        sides: usize,
        /// wrapping multiplicities for the covered Hopf fixture
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        wraps: usize,
        /// write the link as geometry JSON (otherwise printed to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Thickness and length of a link JSON file
    Thickness { input: PathBuf },
    /// Verify force balance of a link JSON file
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_STRUT_TOL)]
        strut_tol: f64,
        #[arg(long, default_value_t = DEFAULT_WALL_TOL)]
        wall_tol: f64,
        #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
        threshold: f64,
        /// write the full balance report as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Fixture {
    #[value(alias = "simple_chain")]
    SimpleChain,
    Wrapped,
    #[value(alias = "covered_hopf")]
    CoveredHopf,
    #[value(alias = "naive_clasp")]
    NaiveClasp,
    #[value(alias = "pressed_clasp")]
    PressedClasp,
    #[value(alias = "clasp_sample")]
    Clasp,
}

fn write_or_print(path: &Option<PathBuf>, text: &str) -> tightlinks::Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| {
            tightlinks::Error::domain(format!("cannot write {}: {e}", p.display()))
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &PathBuf, text: &str) -> tightlinks::Result<()> {
    fs::write(path, text)
        .map_err(|e| tightlinks::Error::domain(format!("cannot write {}: {e}", path.display())))
}

fn read_link(path: &PathBuf) -> tightlinks::Result<PolyLink> {
    let text = fs::read_to_string(path)
        .map_err(|e| tightlinks::Error::domain(format!("cannot read {}: {e}", path.display())))?;
    from_json_str(&text)
}

fn float(v: f64) -> String {
    // shortest round-trip formatting, same as the JSON emitter
    let mut s = v.to_string();
    if !s.contains(['.', 'e', 'n', 'i']) {
        s.push_str(".0");
    }
    s
}

fn run(cli: Cli) -> tightlinks::Result<()> {
    match cli.verb {
        Verb::Clasp { tau, samples, out, scalars, struts, quad } => {
            let q = quad.quadrature();
            let s = clasp::clasp_scalars(tau, &q)?;
            let summary = serde_json::to_string_pretty(&json!({
                "tau": s.tau,
                "tip_distance": s.tip_distance,
                "curved_length": s.curved_length,
                "excess": s.excess,
                "naive_excess": s.naive_excess,
                "savings_fraction": s.savings_fraction,
                "max_kappa": s.max_kappa,
            }))
            .expect("summary serialization cannot fail");
            println!("{summary}");
            if let Some(p) = &scalars {
                write_file(p, &summary)?;
            }
            if let Some(p) = &out {
                if samples < 2 {
                    return Err(tightlinks::Error::domain("profile wants --samples >= 2"));
                }
                let phi_max = tau.asin();
                let mut csv = String::from("u,phi,x,z,kappa,s\n");
                for i in 0..samples {
                    let phi = phi_max * (2.0 * i as f64 / (samples - 1) as f64 - 1.0);
                    let row = clasp::clasp_profile(tau, phi.sin(), &q)?;
                    csv.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        float(row.u),
                        float(row.phi),
                        float(row.x),
                        float(row.z),
                        float(row.kappa),
                        float(row.s)
                    ));
                }
                write_file(p, &csv)?;
            }
            if let Some(p) = &struts {
                let loop_n = samples.max(4);
                let mut csv = String::from("s1,s2,x1,y1,z1,x2,y2,z2\n");
                for pair in clasp::clasp_strut_loop(tau, loop_n, &q)? {
                    csv.push_str(&format!(
                        "{},{},{},{},{},{},{},{}\n",
                        float(pair.s1),
                        float(pair.s2),
                        float(pair.p1.x),
                        float(pair.p1.y),
                        float(pair.p1.z),
                        float(pair.p2.x),
                        float(pair.p2.y),
                        float(pair.p2.z)
                    ));
                }
                write_file(p, &csv)?;
            }
            Ok(())
        }
        Verb::ClaspScan { lo, hi, steps, out, quad } => {
            let q = quad.quadrature();
            let rows = clasp::clasp_savings_scan(lo, hi, steps, &q)?;
            let best = rows
                .iter()
                .max_by(|a, b| a.savings_fraction.partial_cmp(&b.savings_fraction).unwrap())
                .expect("scan returns at least two rows");
            let summary = serde_json::to_string_pretty(&json!({
                "lo": lo,
                "hi": hi,
                "steps": steps,
                "max_savings_fraction": best.savings_fraction,
                "argmax_tau": best.tau,
            }))
            .expect("summary serialization cannot fail");
            println!("{summary}");
            if let Some(p) = &out {
                let mut csv = String::from("tau,excess,naive_excess,savings_fraction\n");
                for r in &rows {
                    csv.push_str(&format!(
                        "{},{},{},{}\n",
                        float(r.tau),
                        float(r.excess),
                        float(r.naive_excess),
                        float(r.savings_fraction)
                    ));
                }
                write_file(p, &csv)?;
            }
            Ok(())
        }
        Verb::BorromeanSolve { quad } => {
            let q = quad.quadrature();
            let p = borromean::solve(&q, &NewtonConfig::default())?;
            let res = borromean::residuals(&p, &q)?;
            let summary = serde_json::to_string_pretty(&json!({
                "rho": p.rho,
                "sigma": p.sigma,
                "tau": p.tau,
                "residual_sup": res.iter().fold(0.0f64, |m, r| m.max(r.abs())),
            }))
            .expect("summary serialization cannot fail");
            println!("{summary}");
            Ok(())
        }
        Verb::BorromeanBuild { n, b2, out, quad } => {
            let link = if b2 {
                borromean::b2_build(n)?
            } else {
                let q = quad.quadrature();
                let p = borromean::solve(&q, &NewtonConfig::default())?;
                borromean::build(&p, n)?
            };
            emit_link(&link, &out)
        }
        Verb::Catalog { fixture, n, tau, leg, sides, m, wraps, out } => {
            let link = match fixture {
                Fixture::SimpleChain => catalog::simple_chain(n)?,
                Fixture::Wrapped => {
                    catalog::wrapped(&catalog::regular_turning_angles(sides), n)?
                }
                Fixture::CoveredHopf => catalog::covered_hopf(m, wraps, n)?,
                Fixture::NaiveClasp => catalog::naive_clasp(tau, n, leg)?,
                Fixture::PressedClasp => catalog::pressed_clasp(n)?,
                Fixture::Clasp => clasp::clasp_sample(tau, n, leg)?,
            };
            emit_link(&link, &out)
        }
        Verb::Thickness { input } => {
            let link = read_link(&input)?;
            let summary = serde_json::to_string_pretty(&json!({
                "total_length": link.total_length(),
                "thickness": link_thickness(&link),
            }))
            .expect("summary serialization cannot fail");
            println!("{summary}");
            Ok(())
        }
        Verb::Verify { input, strut_tol, wall_tol, threshold, out } => {
            let link = read_link(&input)?;
            let cfg = BalanceConfig { strut_tol, wall_tol, threshold };
            let report = solve_balance_with(&link, &cfg)?;
            let summary = serde_json::to_string_pretty(&json!({
                "verdict": match report.verdict {
                    Verdict::Balanced => "balanced",
                    Verdict::Unbalanced => "unbalanced",
                },
                "normalized_residual": report.normalized_residual,
                "residual_norm": report.residual_norm,
                "strut_count": report.system.struts.len(),
                "wall_count": report.system.walls.len(),
            }))
            .expect("summary serialization cannot fail");
            println!("{summary}");
            if let Some(p) = &out {
                write_file(p, &report_to_json(&report))?;
            }
            Ok(())
        }
    }
}

fn emit_link(link: &PolyLink, out: &Option<PathBuf>) -> tightlinks::Result<()> {
    write_or_print(out, &to_json_string(link))
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // usage errors exit with code 2
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
