//! JSON front end for polyprod-core.
//!
//! Every successful command emits `{"meta": {...}, "result": {...}}`. Exit code 1
//! means invalid input, 2 means a capacity guard fired.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use polyprod_core::families::{family_complex, FamilySpec};
use polyprod_core::graph_assoc::{formality_classify, graphical_building_set, nested_set_complex, Graph};
use polyprod_core::hochster::{bigraded_betti_table_with, multigraded_betti, BettiOptions, DEFAULT_CAPACITY};
use polyprod_core::homology::reduced_cohomology_within;
use polyprod_core::koszul::KoszulAlgebra;
use polyprod_core::massey::{
    analyze_massey, search_triple_products, verify_family_massey, DegreeProfile, MasseyInput, SearchOptions,
};
use polyprod_core::multiwedge::{j_construction, WedgeVector};
use polyprod_core::real_dga::real_cohomology_ranks_with;
use polyprod_core::{ComplexSpec, Error, SimplicialComplex, VertexSet};

pub const EXIT_INVALID: i32 = 1;
pub const EXIT_CAPACITY: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "polyprod", version, about = "Moment-angle cohomology and Massey products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Io {
    /// JSON input file
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// JSON input given on the command line
    #[arg(long)]
    pub inline: Option<String>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Bigraded Betti numbers via Hochster's formula
    Betti {
        #[command(flatten)]
        io: Io,
        /// Single multidegree, e.g. "1,3"
        #[arg(long)]
        multidegree: Option<String>,
        /// Largest vertex count enumerated over all subsets
        #[arg(long, default_value_t = DEFAULT_CAPACITY)]
        capacity: usize,
    },
    /// Reduced rational cohomology of the complex or a full subcomplex
    Homology {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        multidegree: Option<String>,
    },
    /// The J-construction K(j_1, ..., j_m)
    Multiwedge {
        #[command(flatten)]
        io: Io,
        /// Wedge vector, e.g. "2,2,1"
        #[arg(long)]
        j: String,
    },
    /// Massey products: a family instance, explicit supports, or a triple search
    Massey {
        #[command(flatten)]
        io: Io,
        /// Family instance "n,s"
        #[arg(long)]
        family: Option<String>,
        /// Supports as JSON, e.g. "[[1,4],[2,5],[3,6]]"
        #[arg(long)]
        supports: Option<String>,
        /// Reduced degrees with --supports; total degrees with --search-triples
        #[arg(long)]
        degrees: Option<String>,
        /// Search for a strictly defined nontrivial triple product
        #[arg(long)]
        search_triples: bool,
    },
    /// Named complexes
    Family {
        #[command(flatten)]
        io: Io,
        /// k, kbar, kns, kbarns, polygon or degrees
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        degrees: Option<String>,
    },
    /// Graph-associahedron nerves and formality
    Graphassoc {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        formality: bool,
    },
    /// Cohomology ranks of the real-coefficient model
    RealBetti {
        #[command(flatten)]
        io: Io,
        /// Vertex bound for the subset enumeration
        #[arg(long, default_value_t = 12)]
        capacity: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Betti { .. } => "betti",
            Command::Homology { .. } => "homology",
            Command::Multiwedge { .. } => "multiwedge",
            Command::Massey { .. } => "massey",
            Command::Family { .. } => "family",
            Command::Graphassoc { .. } => "graphassoc",
            Command::RealBetti { .. } => "real-betti",
        }
    }

    pub fn io(&self) -> &Io {
        match self {
            Command::Betti { io, .. }
            | Command::Homology { io, .. }
            | Command::Multiwedge { io, .. }
            | Command::Massey { io, .. }
            | Command::Family { io, .. }
            | Command::Graphassoc { io, .. }
            | Command::RealBetti { io, .. } => io,
        }
    }
}

#[derive(Debug, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INVALID, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = if e.is_capacity() { EXIT_CAPACITY } else { EXIT_INVALID };
        CliError { code, message: e.to_string() }
    }
}

fn read_input(io: &Io) -> Result<Option<String>, CliError> {
    match (&io.input, &io.inline) {
        (Some(_), Some(_)) => Err(CliError::invalid("give exactly one of --input and --inline")),
        (Some(path), None) => fs::read_to_string(path)
            .map(Some)
            .map_err(|e| CliError::invalid(format!("cannot read {}: {e}", path.display()))),
        (None, Some(text)) => Ok(Some(text.clone())),
        (None, None) => Ok(None),
    }
}

fn require(input: &Option<String>) -> Result<&str, CliError> {
    input.as_deref().ok_or_else(|| CliError::invalid("an input is required (--input or --inline)"))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::invalid(format!("{what}: {e}")))
}

fn parse_complex(text: &str) -> Result<SimplicialComplex, CliError> {
    Ok(parse_json::<ComplexSpec>(text, "complex")?.build()?)
}

fn parse_list(text: &str, flag: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| CliError::invalid(format!("--{flag}: cannot parse {t:?}"))))
        .collect()
}

fn parse_set(text: &str, m: usize, flag: &str) -> Result<VertexSet, CliError> {
    Ok(VertexSet::from_checked(&parse_list(text, flag)?, m)?)
}

fn complex_result(k: &SimplicialComplex) -> Value {
    json!({ "complex": k.to_spec(), "structure": k.structure_report() })
}

fn execute(command: &Command, input: &Option<String>) -> Result<Value, CliError> {
    match command {
        Command::Betti { multidegree, capacity, .. } => {
            let k = parse_complex(require(input)?)?;
            match multidegree {
                Some(text) => {
                    let j = parse_set(text, k.m(), "multidegree")?;
                    let betti = (0..=j.len()).map(|i| multigraded_betti(&k, i, j)).collect::<Result<Vec<_>, _>>()?;
                    Ok(json!({ "multidegree": j, "betti": betti }))
                }
                None => {
                    let table = bigraded_betti_table_with(&k, &BettiOptions { capacity: *capacity, filter: None })?;
                    Ok(serde_json::to_value(table).expect("serializable"))
                }
            }
        }
        Command::Homology { multidegree, .. } => {
            let k = parse_complex(require(input)?)?;
            let within = match multidegree {
                Some(text) => parse_set(text, k.m(), "multidegree")?,
                None => k.vertices(),
            };
            let profile = reduced_cohomology_within(&k, within);
            Ok(json!({ "within": within, "from_degree": -1, "ranks": profile.ranks() }))
        }
        Command::Multiwedge { j, .. } => {
            let k = parse_complex(require(input)?)?;
            let wedge = WedgeVector::new(parse_list(j, "j")?)?;
            let out = j_construction(&k, &wedge)?;
            Ok(json!({ "wedge": wedge, "complex": out.to_spec(), "structure": out.structure_report() }))
        }
        Command::Massey { family, supports, degrees, search_triples, .. } => {
            let modes = [family.is_some(), supports.is_some(), *search_triples].iter().filter(|&&b| b).count();
            if modes != 1 {
                return Err(CliError::invalid("give exactly one of --family, --supports and --search-triples"));
            }
            if let Some(text) = family {
                if input.is_some() {
                    return Err(CliError::invalid("--family takes no input complex"));
                }
                let ns = parse_list(text, "family")?;
                let [n, s] = ns[..] else {
                    return Err(CliError::invalid("--family expects \"n,s\""));
                };
                let report = verify_family_massey(n, s)?;
                return Ok(serde_json::to_value(report).expect("serializable"));
            }
            let k = parse_complex(require(input)?)?;
            let alg = KoszulAlgebra::new(k);
            if let Some(text) = supports {
                let lists: Vec<Vec<usize>> = parse_json(text, "--supports")?;
                let sets = lists
                    .iter()
                    .map(|l| VertexSet::from_checked(l, alg.ambient().m()))
                    .collect::<Result<Vec<_>, _>>()?;
                let degrees = degrees.as_deref().ok_or_else(|| CliError::invalid("--supports needs --degrees"))?;
                let degrees = parse_list(degrees, "degrees")?;
                let input = MasseyInput::from_supports(&alg, &sets, &degrees)?;
                let report = analyze_massey(&alg, &input)?;
                return Ok(serde_json::to_value(report).expect("serializable"));
            }
            let profile = match degrees {
                None => DegreeProfile::ThreeDimensional,
                Some(text) => {
                    let d = parse_list(text, "degrees")?;
                    let [a, b, c] = d[..] else {
                        return Err(CliError::invalid("--degrees with --search-triples expects three total degrees"));
                    };
                    DegreeProfile::Total([a, b, c])
                }
            };
            let witness = search_triple_products(&alg, &profile, &SearchOptions::default())?;
            Ok(json!({ "profile": profile, "found": witness.is_some(), "witness": witness }))
        }
        Command::Family { name, n, s, m, degrees, .. } => {
            let spec = match (input, name) {
                (Some(_), Some(_)) => return Err(CliError::invalid("give either an input or --name, not both")),
                (Some(text), None) => parse_json::<FamilySpec>(text, "family")?,
                (None, Some(name)) => family_from_flags(name, *n, *s, *m, degrees.as_deref())?,
                (None, None) => return Err(CliError::invalid("a family needs an input or --name")),
            };
            spec.validate()?;
            let k = family_complex(&spec)?;
            let mut out = complex_result(&k);
            out["family"] = serde_json::to_value(&spec).expect("serializable");
            Ok(out)
        }
        Command::Graphassoc { formality, .. } => {
            let g: Graph = parse_json(require(input)?, "graph")?;
            if *formality {
                let verdict = formality_classify(&g)?;
                return Ok(serde_json::to_value(verdict).expect("serializable"));
            }
            let b = graphical_building_set(&g)?;
            let nerve = nested_set_complex(&b)?;
            let mut out = complex_result(&nerve);
            out["building_set"] = json!(b.elements);
            Ok(out)
        }
        Command::RealBetti { capacity, .. } => {
            let k = parse_complex(require(input)?)?;
            Ok(json!({ "ranks": real_cohomology_ranks_with(&k, *capacity)? }))
        }
    }
}

fn family_from_flags(
    name: &str,
    n: Option<usize>,
    s: Option<usize>,
    m: Option<usize>,
    degrees: Option<&str>,
) -> Result<FamilySpec, CliError> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| CliError::invalid(format!("family {name} needs --{flag}")));
    Ok(match name {
        "k" => FamilySpec::K { n: need(n, "n")? },
        "kbar" => FamilySpec::Kbar { n: need(n, "n")? },
        "kns" => FamilySpec::Kns { n: need(n, "n")?, s: need(s, "s")? },
        "kbarns" => FamilySpec::Kbarns { n: need(n, "n")?, s: need(s, "s")? },
        "polygon" => FamilySpec::Polygon { m: need(m, "m")? },
        "degrees" => {
            let d = degrees.ok_or_else(|| CliError::invalid("family degrees needs --degrees"))?;
            FamilySpec::Degrees { degrees: parse_list(d, "degrees")? }
        }
        other => return Err(CliError::invalid(format!("unknown family {other:?}"))),
    })
}

/// Flags that change the result, used in the input digest.
fn flag_summary(command: &Command) -> Value {
    match command {
        Command::Betti { multidegree, capacity, .. } => json!({ "multidegree": multidegree, "capacity": capacity }),
        Command::Homology { multidegree, .. } => json!({ "multidegree": multidegree }),
        Command::Multiwedge { j, .. } => json!({ "j": j }),
        Command::Massey { family, supports, degrees, search_triples, .. } => {
            json!({ "family": family, "supports": supports, "degrees": degrees, "search_triples": search_triples })
        }
        Command::Family { name, n, s, m, degrees, .. } => {
            json!({ "name": name, "n": n, "s": s, "m": m, "degrees": degrees })
        }
        Command::Graphassoc { formality, .. } => json!({ "formality": formality }),
        Command::RealBetti { capacity, .. } => json!({ "capacity": capacity }),
    }
}

fn digest(command: &Command, input: &Option<String>) -> String {
    let mut h = Sha256::new();
    h.update(command.name().as_bytes());
    h.update([0]);
    h.update(input.as_deref().unwrap_or("").as_bytes());
    h.update([0]);
    h.update(flag_summary(command).to_string().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// Runs one command and returns the full JSON document.
pub fn run_command(command: &Command) -> Result<Value, CliError> {
    let start = Instant::now();
    let input = read_input(command.io())?;
    let result = execute(command, &input)?;
    Ok(json!({
        "meta": {
            "tool": "polyprod",
            "version": env!("CARGO_PKG_VERSION"),
            "command": command.name(),
            "input_digest": digest(command, &input),
            "elapsed_ms": start.elapsed().as_millis() as u64,
        },
        "result": result,
    }))
}

/// Runs a command and writes the document to `--out` or stdout; returns the exit code.
pub fn run_and_emit(command: &Command) -> i32 {
    let document = match run_command(command) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return e.code;
        }
    };
    let text = serde_json::to_string_pretty(&document).expect("serializable") + "\n";
    match &command.io().out {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_INVALID;
            }
        }
        None => print!("{text}"),
    }
    0
}
