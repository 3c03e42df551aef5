//! Command-line driver: runs the verification checks of the double-plane
//! construction and validates the shipped curve assets.
//!
//! Exit codes: 0 when every selected check passes, 1 when a check fails,
//! 2 on input or parse errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use doubleplane::assets;
use doubleplane::checks::{available_checks, run, ExampleFilter, RunConfig};
use doubleplane::rings::embed_tower;
use doubleplane::surfaces::campedelli::DEFAULT_PRIME;
use doubleplane::surfaces::oort_peters::OP_GOOD_PRIME;
use doubleplane::surfaces::OortPeters;

#[derive(Parser)]
#[command(
    name = "doubleplane",
    version,
    about = "Exact verification of double-plane surface constructions: branch-curve \
             reconstruction, finite-field smoothness certificates, blow-up intersection \
             theory, and torsion groups."
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleArg {
    Campedelli,
    OortPeters,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the verification checks and emit a report.
    Verify {
        /// Which example to verify.
        #[arg(long, value_enum, default_value = "both")]
        example: ExampleArg,
        /// Run only checks matching these names (prefix match); repeatable.
        #[arg(long = "check")]
        checks: Vec<String>,
        /// Working prime for the tower reduction (needs square roots of 17,
        /// 21 + 5a, 5 + a).
        #[arg(long, default_value_t = DEFAULT_PRIME)]
        prime: u64,
        /// Square-root branch bits for (alpha, beta, delta), e.g. "101";
        /// bit 1 picks the larger root.
        #[arg(long, default_value = "101")]
        branches: String,
        /// Working prime for the second example (must be 1 mod 3).
        #[arg(long, default_value_t = OP_GOOD_PRIME)]
        op_prime: u64,
        /// Report format.
        #[arg(long, value_enum, default_value = "text")]
        report: ReportFormat,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Inspect the built-in curve assets.
    Assets {
        #[command(subcommand)]
        cmd: AssetsCmd,
    },
}

#[derive(Subcommand)]
enum AssetsCmd {
    /// List the built-in assets.
    List,
    /// Validate the built-in assets, or external curve files when paths are
    /// given.
    Validate { paths: Vec<PathBuf> },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.cmd {
        Cmd::Verify {
            example,
            checks,
            prime,
            branches,
            op_prime,
            report,
            output,
        } => verify(example, checks, prime, &branches, op_prime, report, output),
        Cmd::Assets { cmd } => match cmd {
            AssetsCmd::List => {
                for name in assets::ASSET_NAMES {
                    for curve in assets::load_builtin(name)? {
                        println!(
                            "{name:<18} {:<12} degree {} with {} terms{}",
                            curve.name,
                            curve.degree(),
                            match &curve.poly {
                                assets::CurvePoly::Tower(p) => p.num_terms(),
                                assets::CurvePoly::Fp(p) => p.num_terms(),
                            },
                            if curve.singularities.is_empty() {
                                String::new()
                            } else {
                                format!(", {} singular points", curve.singularities.len())
                            }
                        );
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
            AssetsCmd::Validate { paths } => validate_assets(paths),
        },
    }
}

fn parse_branches(s: &str) -> anyhow::Result<[bool; 3]> {
    let bits: Vec<bool> = s
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(anyhow::anyhow!("branch bits must be 0 or 1, got {other:?}")),
        })
        .collect::<Result<_, _>>()?;
    if bits.len() != 3 {
        anyhow::bail!("need exactly three branch bits, e.g. 101");
    }
    Ok([bits[0], bits[1], bits[2]])
}

fn verify(
    example: ExampleArg,
    checks: Vec<String>,
    prime: u64,
    branches: &str,
    op_prime: u64,
    report: ReportFormat,
    output: Option<PathBuf>,
) -> anyhow::Result<ExitCode> {
    let branches = parse_branches(branches)?;
    let example = match example {
        ExampleArg::Campedelli => ExampleFilter::Campedelli,
        ExampleArg::OortPeters => ExampleFilter::OortPeters,
        ExampleArg::Both => ExampleFilter::Both,
    };
    // input validation up front: these failures are usage errors, not check
    // failures
    if example.includes(ExampleFilter::Campedelli) {
        embed_tower(prime, branches)
            .map_err(|e| anyhow::anyhow!("prime {prime} rejected: {e}"))?;
    }
    if example.includes(ExampleFilter::OortPeters) {
        OortPeters::load()?.reduce(op_prime)?;
    }
    let known = available_checks();
    for f in &checks {
        if !known.iter().any(|k| k == f || k.starts_with(f.as_str())) {
            anyhow::bail!("no check matches {f:?}; known checks: {}", known.join(", "));
        }
    }
    let config = RunConfig {
        example,
        prime,
        branches,
        op_prime,
        check_filter: checks,
    };
    let rep = run(config);
    if rep.checks.is_empty() {
        anyhow::bail!("selected example and filters leave no checks to run");
    }
    let text = match report {
        ReportFormat::Text => rep.to_text(),
        ReportFormat::Json => rep.to_json(),
    };
    match output {
        Some(path) => std::fs::write(&path, text)?,
        None => print!("{text}"),
    }
    Ok(if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn validate_assets(paths: Vec<PathBuf>) -> anyhow::Result<ExitCode> {
    if paths.is_empty() {
        for name in assets::ASSET_NAMES {
            let source = assets::builtin_source(name)?;
            let curves = assets::parse_curves(source)?;
            validate_curves(name, &curves)?;
            anyhow::ensure!(
                assets::serialize_curves(&curves) == source,
                "{name} is not in canonical form"
            );
            println!("ok {name} ({} curves)", curves.len());
        }
    } else {
        for path in paths {
            let curves = assets::load_curve_file(&path)?;
            validate_curves(&path.display().to_string(), &curves)?;
            println!("ok {} ({} curves)", path.display(), curves.len());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn validate_curves(label: &str, curves: &[assets::CurveAsset]) -> anyhow::Result<()> {
    anyhow::ensure!(!curves.is_empty(), "{label}: no curves in document");
    for curve in curves {
        match &curve.poly {
            assets::CurvePoly::Tower(p) => {
                anyhow::ensure!(!p.is_zero(), "{label}/{}: zero polynomial", curve.name);
                anyhow::ensure!(
                    p.euler_identity_holds(),
                    "{label}/{}: Euler identity fails",
                    curve.name
                );
                // prescribed singular points must lie on the curve
                for (i, s) in curve.singularities.iter().enumerate() {
                    let v = p
                        .evaluate(&s.point)
                        .map_err(|e| anyhow::anyhow!("{label}/{}: {e}", curve.name))?;
                    anyhow::ensure!(
                        v.is_zero(),
                        "{label}/{}: singular point {i} is not on the curve",
                        curve.name
                    );
                }
            }
            assets::CurvePoly::Fp(p) => {
                anyhow::ensure!(!p.is_zero(), "{label}/{}: zero polynomial", curve.name);
            }
        }
    }
    Ok(())
}
