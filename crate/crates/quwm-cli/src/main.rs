//! quwm: construct, verify, decompose, bound, and tabulate families of
//! mutually (quasi-)unbiased weighing matrices.
//!
//! Exit codes: 0 success (or a computed verdict), 1 verification/hypothesis
//! failure, 2 usage error, 3 search exhausted with no decomposition,
//! 4 node budget exceeded. See docs/FORMATS.md.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use quwm::cert::Certificate;
use quwm::construct::{lookup, registry, ConstructOptions};
use quwm::error::{Error, LatticeError, SphericalError};
use quwm::io;
use quwm::lattice::{self, generate_roots, LatticeSpec};
use quwm::matrix::{FamilyParams, MatrixFamily, Screening, WeighingMatrix};
use quwm::search::DEFAULT_NODE_BUDGET;
use quwm::spherical::{find_decomposition, SphericalCode};

#[derive(Parser)]
#[command(name = "quwm", version, about = "weighing-matrix families, spherical codes, and exact bound certificates")]
struct Cli {
    /// Worker threads for pairwise verification (default: available parallelism)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a registered construction pipeline
    Construct {
        /// Construction name; see --list
        name: Option<String>,
        /// List registered constructions
        #[arg(long)]
        list: bool,
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        d: Option<u64>,
        /// Witness lattice override for weight4, e.g. "E8+E8"
        #[arg(long)]
        lattice: Option<String>,
        /// Require inner-product sets to attain every admissible value
        #[arg(long)]
        strict_angles: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Verify a family file; exit 0 iff valid
    Verify {
        family: PathBuf,
        /// Expected parameters "d,k,l,a" (defaults to the file's own)
        #[arg(long)]
        params: Option<String>,
        /// Write the certificate here instead of stdout
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Derive the unbiased family (1/sqrt(a)) W_i W_1^T from a family file
    DeriveMuwm {
        family: PathBuf,
        /// Prepend W_1^T (input must already be unbiased)
        #[arg(long)]
        with_transpose: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Screen parameters (d, k, a) for feasibility
    Screen {
        d: u64,
        k: u64,
        a: u64,
        /// Requested family size
        #[arg(long)]
        size: Option<u64>,
    },
    /// Print an exact bound certificate
    Bound {
        /// "lp" (parameters (d,d,d/2,2d)) or "count" (parameters (d,2,4,1))
        kind: String,
        #[arg(long)]
        d: u64,
    },
    /// Dump the roots of a lattice in the code file format
    Roots {
        #[arg(long)]
        family: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose lattice roots into cross polytopes (2-frames)
    Decompose {
        #[arg(long)]
        family: String,
        #[arg(long)]
        frame_size: usize,
        /// Exact maximum disjoint-frame search instead of a full partition
        #[arg(long)]
        max: bool,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        /// Write the decomposition certificate here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the root dump the indices refer to
        #[arg(long)]
        out_code: Option<PathBuf>,
    },
    /// Reproduce the weight-4 maximum table over a range of orders
    Table {
        /// Range "lo..hi" (inclusive), e.g. 4..17
        #[arg(long)]
        d: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        node_budget: u64,
        /// Per-row confirmation budget; exceeding marks the row UNCONFIRMED
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        confirm_budget: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Usage(_) => 2,
        Error::Lattice(LatticeError::Timeout { .. }) => 4,
        Error::Spherical(SphericalError::BudgetExceeded { .. }) => 4,
        Error::Spherical(SphericalError::NoDecomposition { .. }) => 3,
        _ => 1,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Error> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    fs::write(path, contents)?;
    Ok(())
}

fn run(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Construct { name, list, m, d, lattice, strict_angles, node_budget, out } => {
            if list {
                for c in registry() {
                    println!("{:<14} {}", c.name(), c.summary());
                }
                return Ok(ExitCode::SUCCESS);
            }
            let name = name.ok_or_else(|| {
                Error::Usage("construct needs a name (or --list to see them)".into())
            })?;
            let construction = lookup(&name).ok_or_else(|| {
                let known: Vec<&str> = registry().iter().map(|c| c.name()).collect();
                Error::Usage(format!("unknown construction '{name}'; known: {known:?}"))
            })?;
            let opts = ConstructOptions { m, d, lattice, strict: strict_angles, node_budget };
            let outcome = construction.build(&opts)?;
            let family_text = io::write_family(&outcome.family);
            let family_path = out.join(format!("{}.family.json", outcome.label));
            write_file(&family_path, &family_text)?;
            let mut cert = Certificate::new("pipeline", outcome.payload)
                .with_input(&family_path.display().to_string(), family_text.as_bytes());
            for aux in &outcome.aux {
                let path = out.join(format!("{}.{}", outcome.label, aux.suffix));
                write_file(&path, &aux.contents)?;
                cert = cert.with_input(&path.display().to_string(), aux.contents.as_bytes());
            }
            let cert_path = out.join(format!("{}.cert.json", outcome.label));
            write_file(&cert_path, &cert.to_json_pretty())?;
            println!(
                "{}: {} matrices, params (d,k,l,a) = ({},{},{},{})",
                outcome.label,
                outcome.family.size(),
                outcome.family.params.d,
                outcome.family.params.k,
                outcome.family.params.l,
                outcome.family.params.a
            );
            println!("wrote {}", family_path.display());
            println!("wrote {}", cert_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { family, params, cert } => {
            let text = fs::read_to_string(&family)?;
            let file = io::read_family_raw(&text)?;
            let expected = match params {
                Some(p) => parse_params(&p)?,
                None => file.params,
            };
            let result = verify_family(expected, &file.matrices);
            match result {
                Ok(fam) => {
                    let payload = json!({
                        "params": fam.params,
                        "size": fam.size(),
                        "valid": true,
                        "checks": ["entries", "row-products", "column-products", "pairwise-quasi-unbiased"],
                    });
                    let c = Certificate::new("family-verify", payload)
                        .with_input(&family.display().to_string(), text.as_bytes());
                    match cert {
                        Some(path) => write_file(&path, &c.to_json_pretty())?,
                        None => println!("{}", c.to_json_pretty()),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => {
                    // Debug form keeps the variant name visible to scripts
                    eprintln!("invalid: {e:?} ({e})");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::DeriveMuwm { family, with_transpose, out } => {
            let fam = io::read_family(&fs::read_to_string(&family)?)?;
            let derived = if with_transpose {
                quwm::matrix::derive_muwm_with_transpose(&fam)?
            } else {
                quwm::matrix::derive_muwm(&fam)?
            };
            let text = io::write_family(&derived);
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    println!(
                        "derived {} matrices at params ({},{},{},{}); wrote {}",
                        derived.size(),
                        derived.params.d,
                        derived.params.k,
                        derived.params.l,
                        derived.params.a,
                        path.display()
                    );
                }
                None => println!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Screen { d, k, a, size } => {
            let verdict = quwm::matrix::screen_parameters(d, k, a, size);
            let out = match &verdict {
                Screening::Infeasible { rule } => json!({
                    "d": d, "k": k, "a": a, "size": size,
                    "verdict": "INFEASIBLE",
                    "rule": format!("{rule:?}"),
                    "reason": rule.describe(),
                }),
                Screening::Unknown => json!({
                    "d": d, "k": k, "a": a, "size": size,
                    "verdict": "UNKNOWN",
                    "reason": "no implemented rule excludes these parameters",
                }),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("json"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { kind, d } => match kind.as_str() {
            "lp" => {
                let cert = quwm::bounds::verify_lp_certificate(d)?;
                println!("{}", serde_json::to_string_pretty(&cert).expect("json"));
                Ok(ExitCode::SUCCESS)
            }
            "count" => {
                let cert = quwm::bounds::counting_bound(d);
                println!("{}", serde_json::to_string_pretty(&cert).expect("json"));
                Ok(ExitCode::SUCCESS)
            }
            other => Err(Error::Usage(format!("unknown bound '{other}' (use lp or count)"))),
        },
        Command::Roots { family, out } => {
            let spec: LatticeSpec = family.parse()?;
            let system = generate_roots(&spec)?;
            let code = SphericalCode::new(system.roots().to_vec())?;
            let text = io::write_code(&code);
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    println!("wrote {} roots to {}", code.len(), path.display());
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { family, frame_size, max, node_budget, out, out_code } => {
            let spec: LatticeSpec = family.parse()?;
            let system = generate_roots(&spec)?;
            let code = SphericalCode::new(system.roots().to_vec())?;
            if let Some(path) = &out_code {
                write_file(path, &io::write_code(&code))?;
            }
            if max {
                let search = lattice::max_disjoint_frames(&system, node_budget)?;
                let payload = json!({
                    "family": spec.to_string(),
                    "frame_size": search.decomposition.frame_size,
                    "count": search.count,
                    "nodes": search.nodes,
                    "optimality": search.optimality,
                    "clique_bound": search.clique_bound,
                    "parts": search.decomposition.frames,
                });
                let kind = if search.count == 0 { "exhaustion" } else { "decomposition" };
                let cert = Certificate::new(kind, payload);
                match out {
                    Some(path) => write_file(&path, &cert.to_json_pretty())?,
                    None => println!("{}", cert.to_json_pretty()),
                }
                return Ok(ExitCode::SUCCESS);
            }
            match find_decomposition(&code, frame_size, node_budget) {
                Ok(decomp) => {
                    let text = io::write_decomposition(&decomp);
                    match out {
                        Some(path) => {
                            write_file(&path, &text)?;
                            println!("{} parts; wrote {}", decomp.parts.len(), path.display());
                        }
                        None => println!("{text}"),
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(SphericalError::NoDecomposition { frame_size, nodes }) => {
                    let cert = Certificate::new(
                        "exhaustion",
                        json!({
                            "family": spec.to_string(),
                            "frame_size": frame_size,
                            "nodes": nodes,
                            "decomposition_exists": false,
                        }),
                    );
                    match out {
                        Some(path) => write_file(&path, &cert.to_json_pretty())?,
                        None => println!("{}", cert.to_json_pretty()),
                    }
                    eprintln!("no decomposition with frame size {frame_size} ({nodes} nodes)");
                    Ok(ExitCode::from(3))
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Table { d, out, node_budget, confirm_budget } => {
            let (lo, hi) = parse_range(&d)?;
            println!("{:>3} {:>4}  {:<10} {:<12} family", "d", "m", "lattice", "confirmation");
            for d in lo..=hi {
                let row = lattice::weight4_maximum(d, None, node_budget, false)?;
                let (lattice_name, family_path, confirmation) = match &row.witness {
                    None => ("-".to_string(), "-".to_string(), "-".to_string()),
                    Some(w) => {
                        let family_text = io::write_family(&w.family);
                        let path = out.join(format!("weight4-d{d}.family.json"));
                        write_file(&path, &family_text)?;
                        let confirmation = match lattice::confirm_frames_by_search(
                            &w.spec,
                            confirm_budget,
                        ) {
                            Ok(frames) => {
                                if frames == w.decomposition.frames.len() {
                                    format!("CONFIRMED({frames})")
                                } else {
                                    format!("MISMATCH({frames})")
                                }
                            }
                            Err(LatticeError::Timeout { .. }) => "UNCONFIRMED".to_string(),
                            Err(e) => return Err(e.into()),
                        };
                        (w.spec.to_string(), path.display().to_string(), confirmation)
                    }
                };
                println!("{:>3} {:>4}  {:<10} {:<12} {}", d, row.m, lattice_name, confirmation, family_path);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn verify_family(params: FamilyParams, rows: &[Vec<Vec<i64>>]) -> Result<MatrixFamily, Error> {
    let params = FamilyParams::new(params.d, params.k, params.l, params.a)?;
    let members = rows
        .iter()
        .map(|m| WeighingMatrix::verify(m))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MatrixFamily::verify(params, members)?)
}

fn parse_params(text: &str) -> Result<FamilyParams, Error> {
    let parts: Vec<u64> = text
        .split(',')
        .map(|t| t.trim().parse::<u64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Error::Usage(format!("--params must be 'd,k,l,a', got '{text}'")))?;
    if parts.len() != 4 {
        return Err(Error::Usage(format!("--params must have four values, got {}", parts.len())));
    }
    Ok(FamilyParams::new(parts[0], parts[1], parts[2], parts[3])?)
}

fn parse_range(text: &str) -> Result<(u64, u64), Error> {
    let parse = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| Error::Usage(format!("bad range bound '{t}' in '{text}'")))
    };
    match text.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi || lo < 4 {
                return Err(Error::Usage(format!("range must satisfy 4 <= lo <= hi, got '{text}'")));
            }
            Ok((lo, hi))
        }
        None => {
            let d = parse(text)?;
            Ok((d, d))
        }
    }
}
