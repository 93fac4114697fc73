//! Command-line front end: evaluate the signature-four functions, print the
//! hypergeometric periods, emit plot tables, and run the certifier.
//!
//! Exit codes: 0 success, 1 certification failure, 2 usage or domain errors.
//! The success stream carries only the documented JSON/CSV payloads;
//! diagnostics go to stderr.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use sigfour::certify::{certify, render_report, ReportFormat, SamplingConfig};
use sigfour::hypergeom::complete_k;
use sigfour::{Dn2Path, Modulus, Sig4Context};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "sigfour", version, about = "Signature-four elliptic functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one function at a complex point and print JSON
    Eval(EvalArgs),
    /// Print the half-periods, K, and the period ratio as JSON
    Periods(PeriodsArgs),
    /// Emit an evaluation table along an axis as CSV or JSON
    Table(TableArgs),
    /// Run the identity certifier and print its report
    Certify(CertifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FnName {
    #[value(name = "rn")]
    Rn,
    #[value(name = "rnprime")]
    RnPrime,
    #[value(name = "rn2")]
    Rn2,
    #[value(name = "dn2")]
    Dn2,
    #[value(name = "cn2")]
    Cn2,
    #[value(name = "sn2sq")]
    Sn2Sq,
    #[value(name = "wpP")]
    WpBig,
    #[value(name = "wpPprime")]
    WpBigPrime,
    #[value(name = "wpp")]
    WpSmall,
}

impl FnName {
    fn label(self) -> &'static str {
        match self {
            FnName::Rn => "rn",
            FnName::RnPrime => "rnprime",
            FnName::Rn2 => "rn2",
            FnName::Dn2 => "dn2",
            FnName::Cn2 => "cn2",
            FnName::Sn2Sq => "sn2sq",
            FnName::WpBig => "wpP",
            FnName::WpBigPrime => "wpPprime",
            FnName::WpSmall => "wpp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PathChoice {
    #[value(name = "via_rn")]
    ViaRn,
    #[value(name = "via_p")]
    ViaP,
}

impl From<PathChoice> for Dn2Path {
    fn from(p: PathChoice) -> Self {
        match p {
            PathChoice::ViaRn => Dn2Path::ViaRn,
            PathChoice::ViaP => Dn2Path::ViaP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Axis {
    #[value(name = "real")]
    Real,
    #[value(name = "imag")]
    Imag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    #[value(name = "csv")]
    Csv,
    #[value(name = "json")]
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CertifyFormat {
    #[value(name = "json")]
    Json,
    #[value(name = "md")]
    Markdown,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    function: FnName,
    #[arg(long)]
    kappa: f64,
    #[arg(long, allow_negative_numbers = true)]
    re: f64,
    #[arg(long, allow_negative_numbers = true)]
    im: f64,
    /// dn2 evaluation path (ignored by the other functions)
    #[arg(long, value_enum, default_value = "via_rn")]
    path: PathChoice,
}

#[derive(Debug, Args)]
struct PeriodsArgs {
    #[arg(long)]
    kappa: f64,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long = "fn", value_enum)]
    function: FnName,
    #[arg(long)]
    kappa: f64,
    #[arg(long, allow_negative_numbers = true)]
    start: f64,
    #[arg(long, allow_negative_numbers = true)]
    end: f64,
    /// Number of rows, endpoints included
    #[arg(long)]
    count: u32,
    #[arg(long, value_enum)]
    axis: Axis,
    #[arg(long, value_enum, default_value = "csv")]
    format: TableFormat,
    #[arg(long, value_enum, default_value = "via_rn")]
    path: PathChoice,
}

#[derive(Debug, Args)]
struct CertifyArgs {
    /// Comma-separated moduli, each in (0, 1)
    #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.8")]
    kappa: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    samples: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Analytic-tier tolerance (finite-difference and lattice tiers scale
    /// it by 1e3 and 1e4)
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: CertifyFormat,
}

/// 17 significant digits: enough to reconstruct the f64 bit pattern.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn evaluate(
    ctx: &Sig4Context,
    function: FnName,
    path: Dn2Path,
    z: Complex64,
) -> sigfour::Result<Complex64> {
    match function {
        FnName::Rn => ctx.rn(z),
        FnName::RnPrime => ctx.rn_prime(z),
        FnName::Rn2 => ctx.rn_squared(z),
        FnName::Dn2 => ctx.dn2(z, path),
        FnName::Cn2 => ctx.cn2(z),
        FnName::Sn2Sq => ctx.sn2_squared(z),
        FnName::WpBig => ctx.wp_rn().wp(z),
        FnName::WpBigPrime => ctx.wp_rn().wp_prime(z),
        FnName::WpSmall => ctx.wp_dn2().wp(z),
    }
}

fn run_eval(args: &EvalArgs) -> Result<(), String> {
    let modulus = Modulus::new(args.kappa).map_err(|e| e.to_string())?;
    let ctx = Sig4Context::new(modulus).map_err(|e| e.to_string())?;
    let z = Complex64::new(args.re, args.im);
    let value = evaluate(&ctx, args.function, args.path.into(), z).map_err(|e| e.to_string())?;
    println!(
        "{{\"function\":\"{}\",\"kappa\":{},\"z\":{{\"re\":{},\"im\":{}}},\"value\":{{\"re\":{},\"im\":{}}}}}",
        args.function.label(),
        fmt_f64(args.kappa),
        fmt_f64(args.re),
        fmt_f64(args.im),
        fmt_f64(value.re),
        fmt_f64(value.im),
    );
    Ok(())
}

fn run_periods(args: &PeriodsArgs) -> Result<(), String> {
    let modulus = Modulus::new(args.kappa).map_err(|e| e.to_string())?;
    let ctx = Sig4Context::new(modulus).map_err(|e| e.to_string())?;
    let big_k = complete_k(&modulus).map_err(|e| e.to_string())?;
    let omega = ctx.omega();
    let omega_prime = ctx.omega_prime_mag();
    let small = ctx.wp_dn2().half_periods();
    // Omega'/Omega = i (1/sqrt2) F(1/4,3/4;1;1-k^2) / F(1/4,3/4;1;k^2).
    let ratio_im = omega_prime / omega;
    println!(
        "{{\"kappa\":{},\"Omega\":{},\"OmegaPrimeMag\":{},\"omega\":{},\"omegaPrimeMag\":{},\"K\":{},\"periodRatio\":{{\"re\":0.0,\"im\":{}}}}}",
        fmt_f64(args.kappa),
        fmt_f64(omega),
        fmt_f64(omega_prime),
        fmt_f64(small.omega()),
        fmt_f64(small.omega_prime_mag()),
        fmt_f64(big_k),
        fmt_f64(ratio_im),
    );
    Ok(())
}

fn run_table(args: &TableArgs) -> Result<(), String> {
    if args.count == 0 {
        return Err("--count must be at least 1".into());
    }
    let modulus = Modulus::new(args.kappa).map_err(|e| e.to_string())?;
    let ctx = Sig4Context::new(modulus).map_err(|e| e.to_string())?;
    let n = args.count;
    let mut rows: Vec<(f64, Option<Complex64>)> = Vec::with_capacity(n as usize);
    for j in 0..n {
        let u = if n == 1 {
            args.start
        } else {
            args.start + (args.end - args.start) * (j as f64) / ((n - 1) as f64)
        };
        let z = match args.axis {
            Axis::Real => Complex64::new(u, 0.0),
            Axis::Imag => Complex64::new(0.0, u),
        };
        // Poles become rows with empty values so tables can cross them.
        let value = evaluate(&ctx, args.function, args.path.into(), z).ok();
        rows.push((u, value));
    }
    match args.format {
        TableFormat::Csv => {
            println!("u,re,im");
            for (u, value) in rows {
                match value {
                    Some(v) => println!("{},{},{}", fmt_f64(u), fmt_f64(v.re), fmt_f64(v.im)),
                    None => println!("{},,", fmt_f64(u)),
                }
            }
        }
        TableFormat::Json => {
            let mut out = String::new();
            out.push_str(&format!(
                "{{\"function\":\"{}\",\"kappa\":{},\"axis\":\"{}\",\"rows\":[",
                args.function.label(),
                fmt_f64(args.kappa),
                match args.axis {
                    Axis::Real => "real",
                    Axis::Imag => "imag",
                },
            ));
            for (i, (u, value)) in rows.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match value {
                    Some(v) => out.push_str(&format!(
                        "{{\"u\":{},\"re\":{},\"im\":{}}}",
                        fmt_f64(*u),
                        fmt_f64(v.re),
                        fmt_f64(v.im)
                    )),
                    None => out.push_str(&format!(
                        "{{\"u\":{},\"re\":null,\"im\":null}}",
                        fmt_f64(*u)
                    )),
                }
            }
            out.push_str("]}");
            println!("{out}");
        }
    }
    Ok(())
}

/// Returns the process exit code: 0 when every check passed, 1 otherwise.
fn run_certify(args: &CertifyArgs) -> Result<u8, String> {
    let config = SamplingConfig::new(args.seed, args.samples, 0.05, args.tol, args.kappa.clone())
        .map_err(|e| e.to_string())?;
    let report = certify(&config).map_err(|e| e.to_string())?;
    let format = match args.format {
        CertifyFormat::Json => ReportFormat::Json,
        CertifyFormat::Markdown => ReportFormat::Markdown,
    };
    println!("{}", render_report(&report, format));
    Ok(if report.overall_pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Eval(args) => run_eval(args).map(|()| 0),
        Command::Periods(args) => run_periods(args).map(|()| 0),
        Command::Table(args) => run_table(args).map(|()| 0),
        Command::Certify(args) => run_certify(args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
