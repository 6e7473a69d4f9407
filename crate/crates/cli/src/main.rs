use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ehc_core::density::parse_rational;
use ehc_core::harness::{run_experiment, ExperimentConfig, HarnessError};
use ehc_core::keys::{build_key, build_key_gk6, verify_key, KeyTournament};
use ehc_core::recognize::{
    recognize_decomposition, recognize_unordered, DecompositionWitness, Grammar, RecognizeOptions,
};
use ehc_core::smooth::{
    extract_outcome, find_well_contained, verify_smooth, xi_labels, SmoothStructure, StructureFile,
};
use ehc_core::{Ordering, PartialDigraph, Tournament};
use serde_json::json;

/// Exit status for a well-formed input that fails the check.
const EXIT_REJECTED: u8 = 1;
/// Exit status for unreadable input or bad arguments.
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ehc",
    version,
    about = "Tournament structures, key tournaments and smooth-structure tools"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide membership in a grammar and print the witness as JSON, or `null`.
    Recognize {
        /// Family tag, e.g. galaxy, nebula, super-nebula, delta-galaxy,
        /// central-triangular-galaxy, sigma-galaxy, gk6.
        #[arg(long)]
        grammar: Grammar,
        /// Comma- or space-separated permutation; every ordering is tried
        /// when omitted (n ≤ 10).
        #[arg(long)]
        ordering: Option<String>,
        file: PathBuf,
    },
    /// Build a key tournament; writes the tournament file and a JSON sidecar.
    BuildKey {
        #[arg(long, value_enum)]
        flavor: Flavor,
        /// N (nebula-galaxy) or H (gk6).
        first: PathBuf,
        /// G, for nebula-galaxy only.
        second: Option<PathBuf>,
        /// Ordering of the first input; searched when omitted.
        #[arg(long)]
        first_ordering: Option<String>,
        /// Ordering of the second input; searched when omitted.
        #[arg(long)]
        second_ordering: Option<String>,
        /// Key tournament file; the sidecar goes to `<output>.json`.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a smooth (c, λ, w)-structure. Exits 1 when it is not smooth.
    VerifySmooth {
        #[arg(long)]
        c: String,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        w: String,
        tournament: PathBuf,
        partition: PathBuf,
    },
    /// Search a well-contained copy of a mutant in a structure.
    Embed {
        /// JSON structure file: host, c, lambda, w, sets and optional delta.
        structure: PathBuf,
        /// Partial digraph in the `-`/`0`/`1` pair format.
        mutant: PathBuf,
        /// Source ordering θ; identity when omitted.
        #[arg(long)]
        ordering: Option<String>,
        /// Sidecar from `build-key`; adds the forced outcome to the output.
        #[arg(long)]
        key: Option<PathBuf>,
    },
    /// Run a sampling experiment described by a config file.
    Experiment {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Flavor {
    NebulaGalaxy,
    Gk6,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_tournament(path: &Path) -> Result<Tournament> {
    Tournament::parse(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn print_json(v: &impl serde::Serialize) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn witness_for(
    t: &Tournament,
    grammar: Grammar,
    ordering: Option<&str>,
    opts: &RecognizeOptions,
) -> Result<Option<DecompositionWitness>> {
    Ok(match ordering {
        Some(s) => recognize_decomposition(t, grammar, &Ordering::parse(s)?, opts)?,
        None => recognize_unordered(t, grammar, opts)?,
    })
}

fn required_witness(
    t: &Tournament,
    grammar: Grammar,
    ordering: Option<&str>,
    what: &str,
) -> Result<DecompositionWitness> {
    match witness_for(t, grammar, ordering, &RecognizeOptions::regular())? {
        Some(w) => Ok(w),
        None => bail!("{what} is not a regular {} under the given ordering(s)", grammar.tag()),
    }
}

fn sidecar(key: &KeyTournament, report: serde_json::Value) -> serde_json::Value {
    json!({
        "flavor": key.flavor,
        "n": key.n(),
        "base": key.base,
        "gadgets": key.gadgets,
        "removed_forward_arcs": key.removed_forward_arcs,
        "report": report,
        "key": key,
    })
}

fn build_key_cmd(
    flavor: Flavor,
    first: &Path,
    second: Option<&Path>,
    first_ordering: Option<&str>,
    second_ordering: Option<&str>,
    output: &Path,
) -> Result<bool> {
    let a = read_tournament(first)?;
    let (key, report, ok) = match flavor {
        Flavor::NebulaGalaxy => {
            let Some(second) = second else {
                bail!("nebula-galaxy keys need both N and G");
            };
            let g = read_tournament(second)?;
            let nw = required_witness(&a, Grammar::SuperNebula, first_ordering, "N")?;
            let gw = required_witness(&g, Grammar::DeltaGalaxy, second_ordering, "G")?;
            let key = build_key(&a, &nw, &g, &gw)?;
            let report = verify_key(&key, &a, &nw, &g, &gw)?;
            let ok = report.all_ok();
            (key, serde_json::to_value(&report)?, ok)
        }
        Flavor::Gk6 => {
            if second.is_some() {
                bail!("gk6 keys take a single input H");
            }
            let hw = required_witness(&a, Grammar::CentralTriangularGalaxy, first_ordering, "H")?;
            let key = build_key_gk6(&a, &hw)?;
            let (back, theta) = ehc_core::keys::undo_gk6_key(&key)?;
            let ok = back == a && theta == hw.ordering;
            (key, json!({ "round_trip": ok }), ok)
        }
    };
    fs::write(output, key.k.to_text()).with_context(|| format!("writing {}", output.display()))?;
    let mut side = output.as_os_str().to_owned();
    side.push(".json");
    fs::write(&side, serde_json::to_string_pretty(&sidecar(&key, report))?)
        .with_context(|| format!("writing {}", Path::new(&side).display()))?;
    Ok(ok)
}

fn embed_cmd(structure: &Path, mutant: &Path, ordering: Option<&str>, key: Option<&Path>) -> Result<bool> {
    let file: StructureFile =
        serde_json::from_str(&read(structure)?).with_context(|| format!("parsing {}", structure.display()))?;
    let (chi, delta) = file.into_structure()?;
    let src = PartialDigraph::parse(&read(mutant)?).with_context(|| format!("parsing {}", mutant.display()))?;
    let theta = match ordering {
        Some(s) => Ordering::parse(s)?,
        None => Ordering::identity(src.n()),
    };
    let smooth = verify_smooth(&chi).ok;
    let xi = xi_labels(&chi, &delta)?;
    let found = find_well_contained(&chi, &src, &theta, &delta)?;
    let outcome = match (&found, key) {
        (Some(f), Some(path)) => {
            let side: serde_json::Value = serde_json::from_str(&read(path)?)?;
            let key: KeyTournament = serde_json::from_value(side["key"].clone()).context("sidecar has no key")?;
            Some(extract_outcome(&chi.host, f, &key)?)
        }
        _ => None,
    };
    let ok = found.is_some();
    print_json(&json!({
        "smooth": smooth,
        "embedding": found.map(|f| f.map),
        "xi": xi,
        "outcome": outcome,
    }))?;
    Ok(ok)
}

fn run(cmd: Cmd) -> Result<bool> {
    match cmd {
        Cmd::Recognize {
            grammar,
            ordering,
            file,
        } => {
            let t = read_tournament(&file)?;
            let w = witness_for(&t, grammar, ordering.as_deref(), &RecognizeOptions::default())?;
            print_json(&w)?;
            Ok(true)
        }
        Cmd::BuildKey {
            flavor,
            first,
            second,
            first_ordering,
            second_ordering,
            output,
        } => build_key_cmd(
            flavor,
            &first,
            second.as_deref(),
            first_ordering.as_deref(),
            second_ordering.as_deref(),
            &output,
        ),
        Cmd::VerifySmooth {
            c,
            lambda,
            w,
            tournament,
            partition,
        } => {
            let host = read_tournament(&tournament)?;
            let sets = SmoothStructure::parse_partition(&read(&partition)?)?;
            let w = SmoothStructure::parse_w(&w)?;
            let chi = SmoothStructure::new(host, sets, w, parse_rational(&c)?, parse_rational(&lambda)?);
            let report = verify_smooth(&chi);
            print_json(&report)?;
            Ok(report.ok)
        }
        Cmd::Embed {
            structure,
            mutant,
            ordering,
            key,
        } => embed_cmd(&structure, &mutant, ordering.as_deref(), key.as_deref()),
        Cmd::Experiment { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let summary = match cfg.output_path() {
                Some(p) => {
                    let mut f = std::io::BufWriter::new(
                        fs::File::create(&p).with_context(|| format!("creating {}", p.display()))?,
                    );
                    run_experiment(&cfg, &mut f)?
                }
                None => run_experiment(&cfg, &mut std::io::stdout().lock())?,
            };
            eprintln!("{} records, {} free", summary.records, summary.free);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_REJECTED),
        Err(e) => {
            if let Some(HarnessError::Config(_)) = e.downcast_ref::<HarnessError>() {
                eprintln!("ehc: config error: {e:#}");
            } else {
                eprintln!("ehc: {e:#}");
            }
            ExitCode::from(EXIT_ERROR)
        }
    }
}
