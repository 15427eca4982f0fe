//! Command-line front end.
//!
//! Exit codes: 0 for a nonmaximal (or positive) answer, 1 for a maximal (or
//! negative) answer, 2 for any error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use phaseless::applications::{cpsd_lift_witness, cpsd_upper_bound, ngon, slack_matrix, PolytopeVH};
use phaseless::certificate::{format_bracket, format_decision, format_phased_matrix};
use phaseless::matrix::{
    comparison_matrix, format_matrix_csv, numerical_rank, parse_matrix_text, rational_rank, ComparisonMatrix,
    NonnegMatrix,
};
use phaseless::mmatrix::{all_methods, is_nonsingular_m_matrix, MCertificate, Method as MMethod};
use phaseless::rank::{amoeba_membership, bracket, decide_nonmaximal, signless_rank_bruteforce, Effort};
use phaseless::rational::{format_rational, parse_rational, Rational};
use phaseless::scan::{render_svg, run_scan, Method as ScanMethod, ScanConfig, ScanFamily, Template};
use phaseless::{Error, Result};

#[derive(Parser)]
#[command(name = "phaseless", version, about = "Phaseless rank of nonnegative matrices")]
struct Cli {
    /// Tolerance for numerical rank checks of witnesses.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EffortArg {
    Low,
    High,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanMethodArg {
    Lp,
    Semialg,
}

#[derive(Clone, Copy, ValueEnum)]
enum MMethodArg {
    All,
    PositiveVector,
    LeadingMinors,
    ReducedMinors,
    Eigenvalue,
    DominanceScaling,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the phaseless rank is below min(n, m) and print a certificate.
    Decide {
        matrix: PathBuf,
        /// Write the certificate to this file as well.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Bracket the phaseless rank between proven bounds.
    Bracket {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "low")]
        effort: EffortArg,
        /// Write the upper-bound witness here when one is available.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Signless rank by brute force over sign patterns.
    Signless { matrix: PathBuf },
    /// Test a Z-matrix (or the comparison matrix of a nonnegative one) for being a nonsingular M-matrix.
    Mmatrix {
        matrix: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: MMethodArg,
    },
    /// Scan a two-parameter family on a grid and write CSV and SVG.
    Scan {
        /// circulant3, param3x4 or slice5.
        #[arg(long, conflicts_with = "template")]
        family: Option<String>,
        /// Matrix template in s and t (custom family).
        #[arg(long)]
        template: Option<PathBuf>,
        #[arg(long, default_value_t = 201)]
        grid: usize,
        #[arg(long, value_enum, default_value = "lp")]
        method: ScanMethodArg,
        /// s window as `lo,hi` (rationals).
        #[arg(long)]
        s_range: Option<String>,
        /// t window as `lo,hi` (rationals).
        #[arg(long)]
        t_range: Option<String>,
        #[arg(long)]
        out_csv: Option<PathBuf>,
        #[arg(long)]
        out_svg: Option<PathBuf>,
    },
    /// Slack matrix, complex psd lift bound and lift witness of a polytope.
    Slack {
        /// Polytope file with `V:` and `H:` sections.
        #[arg(conflicts_with = "ngon", required_unless_present = "ngon")]
        polytope: Option<PathBuf>,
        /// Use the regular n-gon.
        #[arg(long)]
        ngon: Option<usize>,
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Membership of a point in the amoeba of matrices with vanishing maximal minors.
    Amoeba {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        /// Coordinates are logarithms of the entries.
        #[arg(long)]
        log: bool,
        /// Row-major coordinates, comma-separated.
        #[arg(allow_hyphen_values = true)]
        point: String,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Domain(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Domain(format!("cannot write {}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> Result<NonnegMatrix> {
    NonnegMatrix::parse(&read(path)?)
}

fn parse_range(text: &str) -> Result<(Rational, Rational)> {
    let bad = || Error::Domain(format!("expected a range lo,hi, got {text:?}"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    Ok((parse_rational(lo).ok_or_else(bad)?, parse_rational(hi).ok_or_else(bad)?))
}

fn code(yes: bool) -> u8 {
    if yes {
        0
    } else {
        1
    }
}

fn decide(path: &Path, certificate: Option<&Path>) -> Result<u8> {
    let a = load_matrix(path)?;
    let d = decide_nonmaximal(&a)?;
    d.verify(&a)?;
    let text = format_decision(&d);
    print!("{text}");
    if let Some(p) = certificate {
        write(p, &text)?;
    }
    Ok(code(d.is_nonmaximal()))
}

fn run_bracket(a: &NonnegMatrix, effort: EffortArg, seed: u64, tol: f64, witness: Option<&Path>) -> Result<u8> {
    let effort = match effort {
        EffortArg::Low => Effort::Low,
        EffortArg::High => Effort::High,
    };
    let b = bracket(a, effort, seed)?;
    println!("[{}, {}]", b.lower, b.upper);
    print!("{}", format_bracket(&b));
    if let Some(w) = &b.upper_witness {
        println!("witness_rank = {}", numerical_rank(w, tol));
        if let Some(p) = witness {
            write(p, &format_phased_matrix(w))?;
        }
    }
    Ok(0)
}

fn mmatrix(path: &Path, method: MMethodArg) -> Result<u8> {
    let m = parse_matrix_text(&read(path)?)?;
    let z = match ComparisonMatrix::from_z_matrix(m.clone()) {
        Ok(z) => z,
        Err(_) => comparison_matrix(&NonnegMatrix::try_from(m)?)?,
    };
    let reports = match method {
        MMethodArg::All => all_methods(&z),
        other => {
            let m = match other {
                MMethodArg::PositiveVector => MMethod::PositiveVector,
                MMethodArg::LeadingMinors => MMethod::LeadingMinors,
                MMethodArg::ReducedMinors => MMethod::ReducedMinors,
                MMethodArg::Eigenvalue => MMethod::Eigenvalue,
                _ => MMethod::DominanceScaling,
            };
            vec![is_nonsingular_m_matrix(&z, m)]
        }
    };
    let join = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
    for r in &reports {
        let cert = match &r.certificate {
            Some(MCertificate::PositiveVector(x)) => format!("positive_vector = {}", join(x)),
            Some(MCertificate::Scaling(d)) => format!("scaling = {}", join(d)),
            Some(MCertificate::Minors(m)) => format!("minors = {}", join(m)),
            Some(MCertificate::MinRealPart(x)) => format!("min_real_part = {x:?}"),
            None => "none".into(),
        };
        println!("{:?}: {} ({cert})", r.method, r.verdict);
        if !r.verify(&z) {
            return Err(Error::Inconsistent(format!("{:?} certificate does not verify", r.method)));
        }
    }
    let first = reports[0].verdict;
    if reports.iter().any(|r| r.verdict != first) {
        return Err(Error::Inconsistent("methods disagree".into()));
    }
    Ok(code(first))
}

#[allow(clippy::too_many_arguments)]
fn scan(
    family: Option<String>,
    template: Option<PathBuf>,
    grid: usize,
    method: ScanMethodArg,
    s_range: Option<String>,
    t_range: Option<String>,
    out_csv: Option<PathBuf>,
    out_svg: Option<PathBuf>,
) -> Result<u8> {
    let family = match (family, template) {
        (_, Some(path)) => ScanFamily::Custom(Template::parse(&read(&path)?)?),
        (Some(name), None) => ScanFamily::named(&name)?,
        (None, None) => return Err(Error::Domain("give --family or --template".into())),
    };
    let method = match method {
        ScanMethodArg::Lp => ScanMethod::Lp,
        ScanMethodArg::Semialg => ScanMethod::Semialg,
    };
    let mut config = ScanConfig::new(family, grid, method);
    if let Some(r) = s_range {
        config.s_range = parse_range(&r)?;
    }
    if let Some(r) = t_range {
        config.t_range = parse_range(&r)?;
    }
    let region = run_scan(&config)?;
    let csv = region.to_csv();
    match &out_csv {
        Some(p) => write(p, &csv)?,
        None if out_svg.is_none() => print!("{csv}"),
        None => {}
    }
    if let Some(p) = &out_svg {
        write(p, &render_svg(&region))?;
    }
    for v in phaseless::scan::CellVerdict::ALL {
        eprintln!("{}: {}", v, region.count(v));
    }
    Ok(0)
}

fn slack(polytope: Option<PathBuf>, n: Option<usize>, tol: f64, witness: Option<&Path>) -> Result<u8> {
    let p = match (n, polytope) {
        (Some(n), _) => ngon(n)?,
        (None, Some(path)) => PolytopeVH::parse(&read(&path)?)?,
        (None, None) => return Err(Error::Domain("give --ngon or a polytope file".into())),
    };
    let s = slack_matrix(&p)?;
    print!("{}", format_matrix_csv(s.as_rat()));
    println!("rank = {}", rational_rank(s.as_rat()));
    println!("bound = {}", cpsd_upper_bound(&p));
    let lift = cpsd_lift_witness(&p)?;
    let rank = numerical_rank(&lift.witness, tol);
    println!("witness_rank = {rank}");
    println!("approximate = {}", lift.approximate);
    if rank > lift.bound && !lift.approximate {
        return Err(Error::WitnessInvalid(format!("witness rank {rank} exceeds the bound {}", lift.bound)));
    }
    if let Some(path) = witness {
        write(path, &format_phased_matrix(&lift.witness))?;
    }
    Ok(0)
}

fn amoeba(rows: usize, cols: usize, log: bool, point: &str) -> Result<u8> {
    let coords = point
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Domain(format!("bad coordinate {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let member = amoeba_membership(&coords, rows, cols, log)?;
    println!("member = {member}");
    Ok(code(member))
}

fn run(cli: Cli) -> Result<u8> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Decide { matrix, certificate } => decide(&matrix, certificate.as_deref()),
        Command::Bracket { matrix, effort, witness } => {
            run_bracket(&load_matrix(&matrix)?, effort, cli.seed, cli.tol, witness.as_deref())
        }
        Command::Signless { matrix } => {
            println!("signless_rank = {}", signless_rank_bruteforce(&load_matrix(&matrix)?)?);
            Ok(0)
        }
        Command::Mmatrix { matrix, method } => mmatrix(&matrix, method),
        Command::Scan { family, template, grid, method, s_range, t_range, out_csv, out_svg } => {
            scan(family, template, grid, method, s_range, t_range, out_csv, out_svg)
        }
        Command::Slack { polytope, ngon, witness } => slack(polytope, ngon, cli.tol, witness.as_deref()),
        Command::Amoeba { rows, cols, log, point } => amoeba(rows, cols, log, &point),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
