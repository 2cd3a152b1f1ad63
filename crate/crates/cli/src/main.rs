use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use torus_ham::{render_report, run_suite, CliError, Manifest, REFERENCE_MANIFEST};
use torus_ham_core::hamilton::verify_certificate;
use torus_ham_core::tracer::trace_with_prefix;
use torus_ham_core::{
    construct_hamiltonian, find_hamiltonian, generate, longest_cycle, map_from_json, map_to_json, to_dot,
    vertex_connectivity, CycleKind, Error as CoreError, GridLabeling, HamiltonianCertificate, MapType,
    SearchBudget, ToroidalMap,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

/// Semi-equivelar torus maps: generation, kind-cycle tracing, Hamiltonian
/// certificates and exact search.
#[derive(Parser)]
#[command(name = "torus-ham", version)]
struct Cli {
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Node budget for oracle searches.
    #[arg(long, global = true)]
    max_nodes: Option<u64>,
    /// Time budget for oracle searches, in seconds.
    #[arg(long, global = true)]
    time_limit: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a map from its (r, s, k) representation.
    Generate {
        #[arg(long = "type")]
        map_type: String,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        k: usize,
    },
    /// Trace the kind-cycle through a seed path.
    Trace {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        kind: String,
        /// Comma-separated seed vertices; two for an edge, more to disambiguate.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        edge: Vec<usize>,
    },
    /// Run the type's Hamiltonian construction and verify the certificate.
    Construct {
        #[arg(long)]
        map: PathBuf,
    },
    /// Exact Hamiltonicity search, optionally longest cycle and connectivity.
    Oracle {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        longest: bool,
        #[arg(long)]
        connectivity: bool,
    },
    /// Run a manifest of instances (the bundled reference manifest by default).
    Suite {
        manifest: Option<PathBuf>,
    },
    /// Re-emit a map as JSON or DOT, highlighting a certificate's cycle.
    Export {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_map(path: &Path) -> Result<(ToroidalMap, Option<GridLabeling>), CliError> {
    Ok(map_from_json(&read(path)?)?)
}

fn budget(cli: &Cli) -> SearchBudget {
    let d = SearchBudget::default();
    SearchBudget::new(
        cli.max_nodes.unwrap_or(d.max_nodes),
        cli.time_limit.map_or(d.time_limit, Duration::from_secs),
    )
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Generate { map_type, r, s, k } => {
            let t: MapType = map_type.parse()?;
            let (map, lab) = generate(t, *r, *s, *k)?;
            let text = match cli.format {
                Format::Json => map_to_json(&map, Some(&lab)),
                Format::Dot => to_dot(&map, None),
            };
            emit(cli, &text)?;
            Ok(0)
        }
        Command::Trace { map, kind, edge } => {
            let (m, lab) = load_map(map)?;
            let kind: CycleKind = kind.parse()?;
            let c = trace_with_prefix(&m, lab.as_ref(), kind, edge)?;
            emit(
                cli,
                &pretty(&json!({ "vertices": c.vertices, "kind": kind, "homology": c.homology })),
            )?;
            Ok(0)
        }
        Command::Construct { map } => {
            let (m, lab) = load_map(map)?;
            let Some(lab) = lab else {
                return Err(CliError::Usage(
                    "construct needs a map with a labeling block (use `generate`)".into(),
                ));
            };
            match construct_hamiltonian(&m, &lab) {
                Ok(cert) => {
                    if let Err(v) = verify_certificate(&m, &cert) {
                        eprintln!("error: certificate rejected: {v}");
                        return Ok(1);
                    }
                    let text = match cli.format {
                        Format::Json => pretty(&cert),
                        Format::Dot => to_dot(&m, Some(&cert.cycle)),
                    };
                    emit(cli, &text)?;
                    Ok(0)
                }
                Err(e @ CoreError::NonHamiltonianType(_)) => {
                    eprintln!("error: {e}");
                    Ok(2)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    Ok(1)
                }
            }
        }
        Command::Oracle {
            map,
            longest,
            connectivity,
        } => {
            let (m, _) = load_map(map)?;
            let t = Instant::now();
            let verdict = find_hamiltonian(&m, budget(cli));
            let mut out = serde_json::to_value(&verdict).expect("verdict serializes");
            if *longest {
                out["longest"] = serde_json::to_value(longest_cycle(&m, budget(cli), None)).expect("serializes");
            }
            if *connectivity {
                out["connectivity"] = json!(vertex_connectivity(&m));
            }
            out["elapsed_ms"] = json!(t.elapsed().as_millis() as u64);
            emit(cli, &pretty(&out))?;
            Ok(0)
        }
        Command::Suite { manifest } => {
            let text = match manifest {
                Some(p) => read(p)?,
                None => REFERENCE_MANIFEST.to_string(),
            };
            let m = Manifest::parse(&text)?;
            let report = run_suite(&m);
            let out_dir = cli.out.clone().or(m.output_dir.clone());
            if let Some(dir) = out_dir {
                fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
                let p = dir.join("report.json");
                fs::write(&p, pretty(&report)).map_err(|e| CliError::io(&p, e))?;
            }
            print!("{}", render_report(&report));
            Ok(report.exit_code())
        }
        Command::Export { map, cert } => {
            let (m, lab) = load_map(map)?;
            let cert: Option<HamiltonianCertificate> = match cert {
                Some(p) => Some(serde_json::from_str(&read(p)?).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?),
                None => None,
            };
            if let Some(c) = &cert {
                if let Err(v) = verify_certificate(&m, c) {
                    eprintln!("error: certificate does not fit this map: {v}");
                    return Ok(1);
                }
            }
            let text = match cli.format {
                Format::Json => map_to_json(&m, lab.as_ref()),
                Format::Dot => to_dot(&m, cert.as_ref().map(|c| c.cycle.as_slice())),
            };
            emit(cli, &text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
