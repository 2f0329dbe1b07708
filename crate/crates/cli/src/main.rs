//! `mcpnet`: command-line access to CP-net dominance, voting, reduction
//! gadgets and the brute-force oracle. Every command prints one JSON
//! document on stdout.
//!
//! Exit codes: 0 when the query was answered (the answer may be `false`),
//! 2 for invalid input, 3 when a size bound or state budget was hit.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use mcpnet::formula::{parse_dimacs, parse_qdimacs};
use mcpnet::gadgets;
use mcpnet::io::{self, format_named_outcome, parse_named_outcome};
use mcpnet::model::validate_net;
use mcpnet::oracle::{self, LemmaInstance, LemmaTag, DEFAULT_ORACLE_BOUND};
use mcpnet::semantics::{self, DEFAULT_MAX_STATES};
use mcpnet::voting::{self, VotingConfig, DEFAULT_CLOSURE_BOUND, DEFAULT_SEARCH_BOUND};
use mcpnet::{CpNet, Error, McpNet, Outcome, SearchConfig};
use serde_json::{json, Map, Value as Json};

#[derive(Parser, Debug)]
#[command(name = "mcpnet", version, about = "Reason about acyclic binary CP-nets and mCP-nets")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Opts {
    /// Read and print outcomes as `Name=value,...` instead of bitstrings.
    #[arg(long, global = true)]
    named: bool,
    /// Largest number of outcomes a single search may visit.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Largest net the brute-force oracle will expand.
    #[arg(long, global = true, default_value_t = DEFAULT_ORACLE_BOUND)]
    oracle_bound: usize,
    /// Largest universe for which voting materializes dominance closures.
    #[arg(long, global = true, default_value_t = DEFAULT_CLOSURE_BOUND)]
    closure_bound: usize,
    /// Largest universe on which majority questions are attempted.
    #[arg(long, global = true, default_value_t = DEFAULT_SEARCH_BOUND)]
    search_bound: usize,
    /// Add visited-state counts and wall time to the output.
    #[arg(long, global = true)]
    stats: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a net for structural problems.
    Validate { net: PathBuf },
    /// The unique optimum of a net.
    Optimum { net: PathBuf },
    /// Does no improving flip leave the outcome?
    IsOptimal { net: PathBuf, outcome: String },
    /// Does the net entail `beta ≻ alpha`?
    Dominates {
        net: PathBuf,
        beta: String,
        alpha: String,
        /// Include an improving flip sequence from alpha to beta.
        #[arg(long)]
        witness: bool,
    },
    /// Is neither outcome preferred to the other?
    Incomparable { net: PathBuf, a: String, b: String },
    /// Pareto voting over a profile.
    #[command(subcommand)]
    Pareto(Voting),
    /// Majority voting over a profile.
    #[command(subcommand)]
    Majority(Voting),
    /// Build a reduction gadget and print it as net or profile JSON.
    Gadget(GadgetArgs),
    /// Brute-force tools for small nets.
    #[command(subcommand)]
    Oracle(OracleCmd),
}

#[derive(Subcommand, Debug)]
enum Voting {
    /// Is `beta` preferred to `alpha`, with the agents split by verdict
    Dominates { profile: PathBuf, beta: String, alpha: String },
    /// Is no outcome preferred to `alpha`?
    IsOptimal { profile: PathBuf, alpha: String },
    /// Is `alpha` preferred to every other outcome?
    IsOptimum { profile: PathBuf, alpha: String },
    /// Find the lowest optimal outcome, if any
    ExistsOptimal { profile: PathBuf },
    /// Find the optimum outcome, if any
    ExistsOptimum { profile: PathBuf },
}

#[derive(Args, Debug)]
struct GadgetArgs {
    #[arg(value_enum)]
    kind: GadgetKind,
    /// CNF formula in DIMACS format.
    #[arg(long)]
    cnf: Option<PathBuf>,
    /// Quantified formula in QDIMACS format (`e` block, then `a` block).
    #[arg(long)]
    qbf: Option<PathBuf>,
    /// Target outcome of a direct net, as a bitstring.
    #[arg(long)]
    outcome: Option<String>,
    /// Number of inputs of an interconnecting net.
    #[arg(short = 'm')]
    inputs: Option<usize>,
    /// Wrap the output with the gadget's distinguished outcomes.
    #[arg(long)]
    describe: bool,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum GadgetKind {
    FormulaNet,
    Summarized,
    Hc,
    Hd,
    Direct,
    MIpo,
    MEml,
    MImm,
    MNowin,
}

#[derive(Subcommand, Debug)]
enum OracleCmd {
    /// The extended preference graph.
    Graph {
        net: PathBuf,
        /// Print Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
    },
    /// Every dominance pair, as `[worse, better]`.
    Closure { net: PathBuf },
    /// Compare the search engine with the closure on every pair.
    Check { net: PathBuf },
    /// Check one of the reduction statements on an instance.
    Verify {
        #[arg(long)]
        lemma: String,
        /// DIMACS formula or profile JSON, depending on the statement.
        input: PathBuf,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_resource_limit() { 3 } else { 2 };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Reply = Result<Json, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let ctx = Ctx { opts: cli.opts };
    match ctx.run(cli.command) {
        Ok(Json::String(raw)) => {
            print!("{raw}");
            ExitCode::SUCCESS
        }
        Ok(mut doc) => {
            if ctx.opts.stats {
                if let Some(obj) = doc.as_object_mut() {
                    let stats = obj.entry("stats").or_insert_with(|| json!({}));
                    stats["wall_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
                }
            } else if let Some(obj) = doc.as_object_mut() {
                obj.remove("stats");
            }
            println!("{doc}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let kind = if f.code == 3 { "resource-limit" } else { "invalid-input" };
            println!("{}", json!({"error": f.message, "kind": kind}));
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

struct Ctx {
    opts: Opts,
}

impl Ctx {
    fn search(&self) -> SearchConfig {
        SearchConfig {
            max_states: self.opts.max_states,
        }
    }

    fn voting(&self) -> VotingConfig {
        VotingConfig {
            max_states: self.opts.max_states,
            closure_bound: self.opts.closure_bound,
            search_bound: self.opts.search_bound,
        }
    }

    fn net(&self, path: &Path) -> Result<CpNet, Failure> {
        Ok(io::net_from_json(&read(path)?)?)
    }

    fn profile(&self, path: &Path) -> Result<McpNet, Failure> {
        Ok(io::profile_from_json(&read(path)?)?)
    }

    /// Parses an outcome of `net`, whose labels drive `--named`.
    fn outcome(&self, net: &CpNet, text: &str) -> Result<Outcome, Failure> {
        Ok(if self.opts.named {
            parse_named_outcome(net, text)?
        } else {
            io::parse_outcome(text, net.len())?
        })
    }

    fn show(&self, net: &CpNet, o: &Outcome) -> Json {
        if self.opts.named {
            json!(format_named_outcome(net, o))
        } else {
            json!(o.to_string())
        }
    }

    fn run(&self, command: Command) -> Reply {
        match command {
            Command::Validate { net } => {
                let parsed = io::net_from_json_unchecked(&read(&net)?)?;
                let report = validate_net(&parsed);
                let violations: Vec<String> =
                    report.violations.iter().map(|v| v.to_string()).collect();
                Ok(json!({"answer": report.is_ok(), "violations": violations}))
            }
            Command::Optimum { net } => {
                let net = self.net(&net)?;
                let o = semantics::forward_sweep_optimum(&net)?;
                Ok(json!({"answer": self.show(&net, &o)}))
            }
            Command::IsOptimal { net, outcome } => {
                let net = self.net(&net)?;
                let o = self.outcome(&net, &outcome)?;
                Ok(json!({"answer": semantics::is_optimal(&net, &o)?}))
            }
            Command::Dominates {
                net,
                beta,
                alpha,
                witness,
            } => {
                let net = self.net(&net)?;
                let beta = self.outcome(&net, &beta)?;
                let alpha = self.outcome(&net, &alpha)?;
                let ans = semantics::dominates_with(&net, &beta, &alpha, &self.search())?;
                let mut doc = json!({"answer": ans.holds, "stats": {"visited": ans.visited}});
                if witness {
                    doc["witness"] = match &ans.witness {
                        Some(w) => self.sequence(&net, w),
                        None => Json::Null,
                    };
                }
                Ok(doc)
            }
            Command::Incomparable { net, a, b } => {
                let net = self.net(&net)?;
                let a = self.outcome(&net, &a)?;
                let b = self.outcome(&net, &b)?;
                Ok(json!({"answer": semantics::incomparable_with(&net, &a, &b, &self.search())?}))
            }
            Command::Pareto(v) => self.voting_query(v, false),
            Command::Majority(v) => self.voting_query(v, true),
            Command::Gadget(args) => self.gadget(args),
            Command::Oracle(cmd) => self.oracle(cmd),
        }
    }

    fn sequence(&self, net: &CpNet, w: &mcpnet::FlipSequence) -> Json {
        let steps: Vec<Json> = w
            .steps
            .iter()
            .map(|s| {
                json!({
                    "feature": net.name(s.feature),
                    "from": u8::from(s.from.bit()),
                    "to": u8::from(s.to.bit()),
                })
            })
            .collect();
        json!({
            "start": self.show(net, &w.start),
            "end": self.show(net, &w.end),
            "steps": steps,
        })
    }

    fn voting_query(&self, v: Voting, majority: bool) -> Reply {
        let cfg = self.voting();
        let answer_with = |p: &McpNet, w: Option<Outcome>| {
            let first = &p.agents()[0];
            match w {
                Some(o) => json!({"answer": true, "witness": self.show(first, &o)}),
                None => json!({"answer": false}),
            }
        };
        match v {
            Voting::Dominates {
                profile,
                beta,
                alpha,
            } => {
                let p = self.profile(&profile)?;
                let beta = self.outcome(p.agent(0), &beta)?;
                let alpha = self.outcome(p.agent(0), &alpha)?;
                let part = voting::agent_partition(&p, &beta, &alpha, &cfg)?;
                let answer = if majority {
                    part.prefers.len() >= voting::majority_threshold(p.len())
                } else {
                    part.prefers.len() == p.len()
                };
                Ok(json!({
                    "answer": answer,
                    "prefers": part.prefers,
                    "opposes": part.opposes,
                    "incomparable": part.incomparables,
                }))
            }
            Voting::IsOptimal { profile, alpha } => {
                let p = self.profile(&profile)?;
                let alpha = self.outcome(p.agent(0), &alpha)?;
                let answer = if majority {
                    voting::is_majority_optimal(&p, &alpha, &cfg)?
                } else {
                    voting::is_pareto_optimal(&p, &alpha, &cfg)?
                };
                Ok(json!({ "answer": answer }))
            }
            Voting::IsOptimum { profile, alpha } => {
                let p = self.profile(&profile)?;
                let alpha = self.outcome(p.agent(0), &alpha)?;
                let answer = if majority {
                    voting::is_majority_optimum(&p, &alpha, &cfg)?
                } else {
                    voting::is_pareto_optimum(&p, &alpha)?
                };
                Ok(json!({ "answer": answer }))
            }
            Voting::ExistsOptimal { profile } => {
                let p = self.profile(&profile)?;
                let w = if majority {
                    voting::exists_majority_optimal(&p, &cfg)?
                } else {
                    Some(voting::exists_pareto_optimal(&p)?)
                };
                Ok(answer_with(&p, w))
            }
            Voting::ExistsOptimum { profile } => {
                let p = self.profile(&profile)?;
                let w = if majority {
                    voting::exists_majority_optimum(&p, &cfg)?
                } else {
                    voting::exists_pareto_optimum(&p)?
                };
                Ok(answer_with(&p, w))
            }
        }
    }

    fn gadget(&self, args: GadgetArgs) -> Reply {
        let cnf = || -> Result<_, Failure> {
            let path = args.cnf.as_ref().ok_or_else(|| invalid("this gadget needs --cnf"))?;
            Ok(parse_dimacs(&read(path)?)?)
        };
        let qbf = || -> Result<_, Failure> {
            let path = args.qbf.as_ref().ok_or_else(|| invalid("this gadget needs --qbf"))?;
            Ok(parse_qdimacs(&read(path)?)?)
        };
        let inputs = || args.inputs.ok_or_else(|| invalid("this gadget needs -m"));
        let mut outcomes = Map::new();
        let body = match args.kind {
            GadgetKind::FormulaNet => {
                let f = gadgets::formula_net(&cnf()?)?;
                outcomes.insert("alpha".into(), json!(f.alpha().to_string()));
                outcomes.insert("beta_bar".into(), json!(f.beta_bar().to_string()));
                io::net_to_json(&f.net)
            }
            GadgetKind::Summarized => {
                let s = gadgets::summarized_formula_net(&cnf()?)?;
                outcomes.insert("alpha".into(), json!(s.alpha().to_string()));
                outcomes.insert("beta_bar".into(), json!(s.beta_bar().to_string()));
                io::net_to_json(&s.net)
            }
            GadgetKind::Hc => io::net_to_json(&gadgets::h_c(inputs()?)?.standalone("A")?),
            GadgetKind::Hd => io::net_to_json(&gadgets::h_d(inputs()?)?.standalone("A")?),
            GadgetKind::Direct => {
                let bits = args.outcome.as_ref().ok_or_else(|| invalid("direct needs --outcome"))?;
                let alpha: Outcome = bits.parse()?;
                let names: Vec<String> = (1..=alpha.len()).map(|i| format!("F{i}")).collect();
                outcomes.insert("optimum".into(), json!(alpha.to_string()));
                io::net_to_json(&gadgets::direct_net(&names, &alpha)?)
            }
            GadgetKind::MIpo => {
                let g = gadgets::m_ipo(&cnf()?)?;
                outcomes.insert("alpha".into(), json!(g.alpha().to_string()));
                io::profile_to_json(&g.profile)
            }
            GadgetKind::MEml | GadgetKind::MImm => {
                let q = qbf()?;
                let g = if matches!(args.kind, GadgetKind::MEml) {
                    gadgets::m_eml(&q)?
                } else {
                    gadgets::m_imm(&q)?
                };
                outcomes.insert("alpha_bar".into(), json!(g.layout.alpha_bar().to_string()));
                io::profile_to_json(&g.profile)
            }
            GadgetKind::MNowin => io::profile_to_json(&gadgets::m_nowin()),
        };
        let doc: Json = serde_json::from_str(&body).expect("library output is valid JSON");
        if args.describe {
            let key = if doc.get("agents").is_some() { "profile" } else { "net" };
            Ok(json!({ key: doc, "outcomes": outcomes }))
        } else {
            Ok(doc)
        }
    }

    fn oracle(&self, cmd: OracleCmd) -> Reply {
        let bound = self.opts.oracle_bound;
        match cmd {
            OracleCmd::Graph { net, dot } => {
                let net = self.net(&net)?;
                let g = oracle::build_graph(&net, bound)?;
                if dot {
                    return Ok(Json::String(g.to_dot()));
                }
                let edges: Vec<[Json; 2]> = g
                    .edges()
                    .iter()
                    .map(|(a, b)| [self.show(&net, a), self.show(&net, b)])
                    .collect();
                Ok(json!({
                    "vertices": g.vertex_count(),
                    "acyclic": g.is_acyclic(),
                    "edges": edges,
                }))
            }
            OracleCmd::Closure { net } => {
                let net = self.net(&net)?;
                let c = oracle::closure_of(&net, bound)?;
                let mut pairs = Vec::with_capacity(c.pair_count());
                for a in Outcome::all(net.len()) {
                    for b in c.above(&a) {
                        pairs.push([self.show(&net, &a), self.show(&net, &b)]);
                    }
                }
                Ok(json!({ "pairs": pairs }))
            }
            OracleCmd::Check { net } => {
                let net = self.net(&net)?;
                let c = oracle::closure_of(&net, bound)?;
                let mut checked = 0usize;
                for a in Outcome::all(net.len()) {
                    for b in Outcome::all(net.len()) {
                        let engine = semantics::dominates_with(&net, &b, &a, &self.search())?.holds;
                        checked += 1;
                        if engine != c.reach(&a, &b) {
                            return Ok(json!({
                                "answer": false,
                                "checked": checked,
                                "counterexample": {
                                    "alpha": self.show(&net, &a),
                                    "beta": self.show(&net, &b),
                                    "engine": engine,
                                },
                            }));
                        }
                    }
                }
                Ok(json!({"answer": true, "checked": checked}))
            }
            OracleCmd::Verify { lemma, input } => {
                let tag: LemmaTag = lemma.parse()?;
                let text = read(&input)?;
                let instance = if tag.takes_formula() {
                    LemmaInstance::Formula(parse_dimacs(&text)?)
                } else {
                    LemmaInstance::Profile(io::profile_from_json(&text)?)
                };
                let report = oracle::verify_lemma(tag, &instance, bound)?;
                let mut doc = serde_json::to_value(&report).expect("reports serialize");
                doc["answer"] = json!(report.passed());
                Ok(doc)
            }
        }
    }
}
