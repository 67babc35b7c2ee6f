use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qgadget::analysis::{analyze, prove_not_both_with, quantum_violation_summary, ProofOptions};
use qgadget::catalog::{self, GadgetFixture};
use qgadget::exact::Coordinatization;
use qgadget::hardy::{hardy_dd_probability, maximize_hardy, sweep};
use qgadget::hypergraph::{AtomId, Hypergraph};
use qgadget::mmp::{emit_json, emit_mmp, export_dot, highlight_atoms, parse_auto};
use qgadget::reproduce;
use qgadget::search::{
    complete_representation, search, verify_for, ComponentAlphabet, CompletionError, SearchOptions, SearchOutcome,
    SearchScope, VerifyMode,
};
use qgadget::states::{classical_probabilities, default_workers, enumerate_states_with, uniform_weights};

#[derive(Parser, Debug)]
#[command(name = "qgadget", version, about = "Two-valued states, gadget relations and orthogonal representations of orthogonality hypergraphs")]
struct Cli {
    /// Worker threads for enumeration and search.
    #[arg(long, global = true, env = "QGADGET_WORKERS")]
    workers: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List built-in fixtures or print one.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Enumerate admissible two-valued states.
    States {
        input: String,
        #[arg(long)]
        count_only: bool,
        /// Keep states with the given value, e.g. `Ψ=1`. Repeatable.
        #[arg(long, value_name = "ATOM=0|1")]
        filter: Vec<String>,
        /// Write the 0/1 state matrix as CSV.
        #[arg(long, value_name = "PATH")]
        vertices: Option<PathBuf>,
    },
    /// Classify true-implies-false, true-implies-true and indistinguishable pairs.
    Classify {
        input: String,
        #[arg(long, value_name = "A,B")]
        pair: Option<String>,
        /// Include the propagation proof for the pair.
        #[arg(long, requires = "pair")]
        trace: bool,
        /// Keep every propagated step, not only those the contradiction needs.
        #[arg(long, requires = "trace")]
        full: bool,
        /// Search exhaustively when propagation stalls.
        #[arg(long, requires = "trace")]
        exhaustive: bool,
    },
    /// Partition logic: the states in which each atom is true.
    Partition {
        input: String,
        /// Add atom probabilities under equal weights on all states.
        #[arg(long)]
        uniform: bool,
    },
    /// Check a coordinatization for orthogonality and faithfulness.
    Verify {
        input: String,
        #[command(flatten)]
        rep: RepSource,
        /// Compare in floating point with this tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Backtracking search for a faithful orthogonal representation.
    Search {
        input: String,
        /// Comma-separated component values, e.g. `0,1,-2,r2`.
        #[arg(long)]
        alphabet: String,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, value_enum, default_value_t = Scope::All)]
        scope: Scope,
        /// Only tensor-decomposable candidate vectors.
        #[arg(long)]
        decomposable_only: bool,
    },
    /// Extend a partial coordinatization to every atom.
    Complete {
        input: String,
        #[command(flatten)]
        rep: RepSource,
    },
    /// Hardy probability P(dd) as a function of α, as CSV.
    Hardy {
        #[arg(long, group = "mode")]
        alpha: Option<f64>,
        #[arg(long, group = "mode", value_name = "N")]
        sweep: Option<usize>,
        #[arg(long, group = "mode")]
        maximize: bool,
    },
    /// Graphviz rendering of the hypergraph.
    ExportDot {
        input: String,
        #[arg(long, value_name = "A,B,...")]
        highlight: Option<String>,
        #[arg(long, default_value = "gold")]
        color: String,
    },
    /// Run the reproduction checks and print a pass/fail table.
    Reproduce {
        /// Run a single criterion.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=12))]
        criterion: Option<u8>,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    List,
    Show {
        name: String,
        #[arg(long, value_enum, default_value_t = Format::Mmp)]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Mmp,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Scope {
    All,
    Intertwining,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct RepSource {
    /// Representation JSON file.
    #[arg(long, value_name = "PATH")]
    rep: Option<PathBuf>,
    /// A coordinatization stored with a catalog fixture.
    #[arg(long, value_name = "NAME")]
    row: Option<String>,
}

/// A domain failure, reported as JSON on stderr with exit status 1.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
    data: Value,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure { kind, message: message.to_string(), data: Value::Null }
    }

    fn with(mut self, data: Value) -> Self {
        self.data = data;
        self
    }

    fn to_json(&self) -> Value {
        let mut v = json!({ "error": self.kind, "message": self.message });
        if !self.data.is_null() {
            v["data"] = self.data.clone();
        }
        v
    }
}

struct Input {
    hypergraph: Hypergraph,
    fixture: Option<GadgetFixture>,
}

fn load(source: &str) -> Result<Input, Failure> {
    if let Some(name) = source.strip_prefix("catalog:") {
        let f = catalog::fixture(name).map_err(|e| Failure::new("catalog", e))?;
        return Ok(Input { hypergraph: f.hypergraph.clone(), fixture: Some(f) });
    }
    let text = if source == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::new("io", e))?;
        s
    } else {
        std::fs::read_to_string(source).map_err(|e| Failure::new("io", format!("{source}: {e}")))?
    };
    let hypergraph = parse_auto(&text).map_err(|e| Failure::new("format", e))?;
    Ok(Input { hypergraph, fixture: None })
}

fn atom(h: &Hypergraph, label: &str) -> Result<AtomId, Failure> {
    h.atom(label).ok_or_else(|| Failure::new("unknown_atom", format!("no atom {label:?}")))
}

fn pair(h: &Hypergraph, text: &str) -> Result<(AtomId, AtomId), Failure> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Failure::new("bad_pair", format!("expected A,B, got {text:?}")))?;
    Ok((atom(h, a.trim())?, atom(h, b.trim())?))
}

fn coordinatization(input: &Input, src: &RepSource) -> Result<Coordinatization, Failure> {
    if let Some(path) = &src.rep {
        let text = std::fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))?;
        return Coordinatization::from_json(&input.hypergraph, &text).map_err(|e| Failure::new("representation", e));
    }
    let name = src.row.as_deref().unwrap_or_default();
    let f = input
        .fixture
        .as_ref()
        .ok_or_else(|| Failure::new("representation", "--row needs a catalog: input"))?;
    f.coordinatization(name).cloned().ok_or_else(|| {
        let rows: Vec<&str> = f.coordinatizations.iter().map(|(n, _)| n.as_str()).collect();
        Failure::new("representation", format!("{} has no row {name:?}", f.name)).with(json!({ "rows": rows }))
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn labels(h: &Hypergraph, atoms: impl IntoIterator<Item = AtomId>) -> Vec<String> {
    atoms.into_iter().map(|a| h.label(a).to_owned()).collect()
}

/// Runs one command; `Ok` holds stdout text and whether the run counts as a failure.
fn run(cli: &Cli) -> Result<(String, Option<Failure>), Failure> {
    let workers = cli.workers.unwrap_or_else(default_workers).max(1);
    let out = match &cli.command {
        Command::Catalog { action: CatalogAction::List } => {
            let mut s = String::new();
            for name in catalog::list() {
                let f = catalog::fixture(name).expect("listed fixtures exist");
                let _ = writeln!(s, "{name}\t{}", f.summary);
            }
            s
        }
        Command::Catalog { action: CatalogAction::Show { name, format } } => {
            let f = catalog::fixture(name).map_err(|e| Failure::new("catalog", e))?;
            match format {
                Format::Mmp => emit_mmp(&f.hypergraph).map_err(|e| Failure::new("format", e))? + "\n",
                Format::Json => emit_json(&f.hypergraph) + "\n",
            }
        }
        Command::States { input, count_only, filter, vertices } => {
            let inp = load(input)?;
            let h = &inp.hypergraph;
            let mut s = enumerate_states_with(h, workers);
            for f in filter {
                let (label, value) = f
                    .split_once('=')
                    .ok_or_else(|| Failure::new("bad_filter", format!("expected ATOM=0|1, got {f:?}")))?;
                let value = match value {
                    "0" => false,
                    "1" => true,
                    _ => return Err(Failure::new("bad_filter", format!("value must be 0 or 1, got {value:?}"))),
                };
                s = s.states_with(atom(h, label)?, value);
            }
            if let Some(path) = vertices {
                std::fs::write(path, s.vertices_csv(h)).map_err(|e| Failure::new("io", e))?;
            }
            if *count_only {
                format!("{}\n", s.len())
            } else {
                let states: Vec<Vec<String>> = s.states().iter().map(|st| labels(h, st.ones())).collect();
                pretty(&json!({ "count": s.len(), "states": states }))
            }
        }
        Command::Classify { input, pair: p, trace, full, exhaustive } => {
            let inp = load(input)?;
            let h = &inp.hypergraph;
            let s = enumerate_states_with(h, workers);
            let report = analyze(h, &s).map_err(|e| Failure::new("analysis", e))?;
            let mut v = report.to_json(h);
            if let Some(p) = p {
                let (a, b) = pair(h, p)?;
                let mut pv = json!({
                    "atoms": [h.label(a), h.label(b)],
                    "true_implies_false": report.is_tifs(a, b),
                    "true_implies_true": report.is_tits(a, b),
                    "indistinguishable": report.is_indistinguishable(a.min(b), a.max(b)),
                });
                if *trace {
                    let t = prove_not_both_with(h, a, b, ProofOptions { exhaustive: *exhaustive, full: *full });
                    pv["trace"] = t.to_json(h);
                    pv["trace_text"] = Value::String(t.render(h));
                }
                v["pair"] = pv;
            }
            if let Some(f) = &inp.fixture {
                if let Some((row, c)) = f.coordinatizations.iter().find(|(_, c)| {
                    f.quantum_pairs.iter().all(|&(a, b)| c.covers(a) && c.covers(b))
                }) {
                    if !f.quantum_pairs.is_empty() {
                        let vs = quantum_violation_summary(f, c).map_err(|e| Failure::new("analysis", e))?;
                        let items: Vec<Value> = vs
                            .iter()
                            .map(|x| {
                                json!({
                                    "atoms": [h.label(x.a), h.label(x.b)],
                                    "classical": x.relation,
                                    "classical_probability": x.relation.classical_probability(),
                                    "quantum_exact": x.exact,
                                    "quantum": x.quantum,
                                })
                            })
                            .collect();
                        v["quantum"] = json!({ "coordinatization": row, "pairs": items });
                    }
                }
            }
            pretty(&v)
        }
        Command::Partition { input, uniform } => {
            let inp = load(input)?;
            let h = &inp.hypergraph;
            let s = enumerate_states_with(h, workers);
            let p = s.partition_logic();
            let sets: serde_json::Map<String, Value> =
                h.atoms().map(|a| (h.label(a).to_owned(), json!(p.set(a)))).collect();
            let mut v = json!({
                "state_count": p.state_count(),
                "partitions_every_context": p.partitions_every_context(h),
                "sets": sets,
            });
            if *uniform {
                if s.is_empty() {
                    return Err(Failure::new("no_states", "equal weights need at least one state"));
                }
                let probs = classical_probabilities(&p, &uniform_weights(s.len())).map_err(|e| Failure::new("probability", e))?;
                let m: serde_json::Map<String, Value> =
                    h.atoms().zip(probs).map(|(a, q)| (h.label(a).to_owned(), Value::String(q.to_string()))).collect();
                v["uniform_probabilities"] = Value::Object(m);
            }
            pretty(&v)
        }
        Command::Verify { input, rep, tol } => {
            let inp = load(input)?;
            let c = coordinatization(&inp, rep)?;
            let mode = match (tol, &c) {
                (Some(t), _) => VerifyMode::Approx(*t),
                (None, Coordinatization::Float(_)) => VerifyMode::Approx(1e-12),
                (None, Coordinatization::Exact(_)) => VerifyMode::Exact,
            };
            let r = verify_for(&inp.hypergraph, &c, mode).map_err(|e| Failure::new("verify", e))?;
            let mut v = r.to_json(&inp.hypergraph);
            v["mode"] = match mode {
                VerifyMode::Exact => json!("exact"),
                VerifyMode::Approx(t) => json!({ "tolerance": t }),
            };
            let failed = (!r.passes()).then(|| Failure::new("not_faithful", "representation fails verification"));
            return Ok((pretty(&v), failed));
        }
        Command::Search { input, alphabet, dim, budget, scope, decomposable_only } => {
            let inp = load(input)?;
            let h = &inp.hypergraph;
            let alphabet = ComponentAlphabet::parse(alphabet).map_err(|e| Failure::new("alphabet", e))?;
            let scope = match scope {
                Scope::All => SearchScope::All,
                Scope::Intertwining => SearchScope::Intertwining,
            };
            let opts = SearchOptions { budget: *budget, scope, decomposable_only: *decomposable_only, workers };
            let r = search(h, &alphabet, *dim, &opts).map_err(|e| Failure::new("search", e))?;
            let mut v = json!({
                "outcome": r.outcome_name(),
                "nodes": r.nodes,
                "pool_size": r.pool_size,
            });
            match &r.outcome {
                SearchOutcome::Found(rep) => {
                    v["representation"] = serde_json::from_str(&rep.to_json(h)).expect("valid JSON");
                }
                SearchOutcome::Exhausted => {
                    v["note"] = json!("every candidate over this alphabet was tried; this is evidence, not a proof that no representation exists");
                }
                SearchOutcome::BudgetExceeded => {
                    v["note"] = json!("node budget exhausted before the search finished");
                }
            }
            pretty(&v)
        }
        Command::Complete { input, rep } => {
            let inp = load(input)?;
            let h = &inp.hypergraph;
            let Coordinatization::Exact(r) = coordinatization(&inp, rep)? else {
                return Err(Failure::new("representation", "completion needs an exact representation"));
            };
            match complete_representation(h, &r) {
                Ok(full) => full.to_json(h) + "\n",
                Err(CompletionError::ForcedDuplicity { pairs }) => {
                    let named: Vec<[&str; 2]> = pairs.iter().map(|&(a, b)| [h.label(a), h.label(b)]).collect();
                    return Err(Failure::new("forced_duplicity", "forced completions collide with existing vectors")
                        .with(json!({ "pairs": named })));
                }
                Err(e) => return Err(Failure::new("inconsistent", e)),
            }
        }
        Command::Hardy { alpha, sweep: n, maximize } => {
            if let Some(a) = alpha {
                if !(*a > 0.0 && *a < 1.0) {
                    return Err(Failure::new("out_of_range", format!("α = {a} is outside (0,1)")));
                }
                format!("alpha,p\n{a},{}\n", hardy_dd_probability(*a))
            } else if let Some(n) = n {
                let mut s = String::from("alpha,p\n");
                for (a, p) in sweep(*n) {
                    let _ = writeln!(s, "{a},{p}");
                }
                s
            } else if *maximize {
                let m = maximize_hardy();
                format!("quantity,value\np_star,{}\nalpha_minus,{}\nalpha_plus,{}\n", m.p_star, m.alpha_minus, m.alpha_plus)
            } else {
                return Err(Failure::new("usage", "choose one of --alpha, --sweep or --maximize"));
            }
        }
        Command::ExportDot { input, highlight, color } => {
            let inp = load(input)?;
            let h = &inp.hypergraph;
            let atoms = match highlight {
                Some(list) => list.split(',').map(|l| atom(h, l.trim())).collect::<Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            export_dot(h, &highlight_atoms(h, &atoms, color))
        }
        Command::Reproduce { criterion } => {
            let ids: Vec<u8> = match criterion {
                Some(c) => vec![*c],
                None => (1..=12).collect(),
            };
            let mut s = String::new();
            let mut failed = Vec::new();
            for id in ids {
                let r = reproduce::run(id, workers);
                let _ = writeln!(s, "{r}");
                if !r.passed {
                    failed.push(id);
                }
            }
            let failure = (!failed.is_empty())
                .then(|| Failure::new("criteria_failed", "some criteria fail").with(json!({ "failed": failed })));
            return Ok((s, failure));
        }
    };
    Ok((out, None))
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::new("io", format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let v = json!({ "error": "usage", "message": e.to_string().trim_end() });
            eprintln!("{v}");
            return ExitCode::from(2);
        }
    };
    let result = run(&cli).and_then(|(text, failure)| emit(&cli, &text).map(|_| failure));
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(f)) | Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(1)
        }
    }
}
