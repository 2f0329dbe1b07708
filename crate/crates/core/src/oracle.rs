//! Brute-force ground truth for small instances.
//!
//! Nothing here shares code with the search engine: the extended preference
//! graph is built explicitly from the CP tables, vertices are numbered by
//! canonical index ([`Outcome::index`]), and reachability is computed by
//! plain breadth-first search.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, PartialAssignment, Qbf2Formula};
use crate::gadgets::{formula_net, m_ipo, summarized_formula_net};
use crate::model::{CpNet, McpNet, Outcome};

/// Largest net for which the full graph is built.
pub const DEFAULT_ORACLE_BOUND: usize = 14;
/// Largest formula the truth-table enumerators accept.
pub const MAX_ENUM_VARS: usize = 24;
/// State cap for the oracle's single-source searches.
pub const ORACLE_MAX_STATES: usize = 1 << 22;

/// The extended preference graph: an edge `u → v` for every improving flip.
#[derive(Clone, Debug)]
pub struct PreferenceGraph {
    n: usize,
    adj: Vec<Vec<u32>>,
}

fn successors(net: &CpNet, o: &Outcome) -> Vec<Outcome> {
    net.features()
        .filter(|&f| net.table(f).preferred(o) != o.get(f))
        .map(|f| o.with_flipped(f))
        .collect()
}

pub fn build_graph(net: &CpNet, bound: usize) -> Result<PreferenceGraph> {
    let n = net.len();
    if n > bound || n > 30 {
        return Err(Error::InstanceTooLarge {
            features: n,
            bound: bound.min(30),
        });
    }
    let adj = (0..1u64 << n)
        .into_par_iter()
        .map(|u| {
            successors(net, &Outcome::from_index(n, u))
                .iter()
                .map(|o| o.index() as u32)
                .collect()
        })
        .collect();
    Ok(PreferenceGraph { n, adj })
}

impl PreferenceGraph {
    pub fn feature_count(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn out_degree(&self, u: &Outcome) -> usize {
        self.adj[u.index() as usize].len()
    }

    /// Every edge as a pair of outcomes, sorted.
    pub fn edges(&self) -> Vec<(Outcome, Outcome)> {
        let mut e: Vec<(Outcome, Outcome)> = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| {
                vs.iter().map(move |&v| {
                    (
                        Outcome::from_index(self.n, u as u64),
                        Outcome::from_index(self.n, u64::from(v)),
                    )
                })
            })
            .collect();
        e.sort();
        e
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    /// Kahn's algorithm over all vertices.
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0u32; self.adj.len()];
        for vs in &self.adj {
            for &v in vs {
                indeg[v as usize] += 1;
            }
        }
        let mut queue: VecDeque<usize> = (0..self.adj.len()).filter(|&u| indeg[u] == 0).collect();
        let mut seen = 0;
        while let Some(u) = queue.pop_front() {
            seen += 1;
            for &v in &self.adj[u] {
                indeg[v as usize] -= 1;
                if indeg[v as usize] == 0 {
                    queue.push_back(v as usize);
                }
            }
        }
        seen == self.adj.len()
    }

    /// Outcomes without improving flips.
    pub fn sinks(&self) -> Vec<Outcome> {
        (0..self.adj.len())
            .filter(|&u| self.adj[u].is_empty())
            .map(|u| Outcome::from_index(self.n, u as u64))
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph preference {\n  rankdir=BT;\n");
        for u in 0..self.adj.len() {
            let _ = writeln!(s, "  \"{}\";", Outcome::from_index(self.n, u as u64));
        }
        for (a, b) in self.edges() {
            let _ = writeln!(s, "  \"{a}\" -> \"{b}\";");
        }
        s.push_str("}\n");
        s
    }
}

/// Reachability matrix: `reach(alpha, beta)` iff `beta ≻ alpha`.
#[derive(Clone, Debug)]
pub struct DominanceClosure {
    n: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

/// One breadth-first search per vertex.
pub fn closure(graph: &PreferenceGraph) -> DominanceClosure {
    let size = graph.adj.len();
    let words = size.div_ceil(64);
    let rows = (0..size)
        .into_par_iter()
        .map(|src| {
            let mut row = vec![0u64; words];
            let mut queue = VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &v in &graph.adj[u] {
                    let v = v as usize;
                    if row[v / 64] >> (v % 64) & 1 == 0 {
                        row[v / 64] |= 1 << (v % 64);
                        queue.push_back(v);
                    }
                }
            }
            row
        })
        .collect();
    DominanceClosure {
        n: graph.n,
        words,
        rows,
    }
}

impl DominanceClosure {
    pub fn feature_count(&self) -> usize {
        self.n
    }

    /// Does `beta ≻ alpha` hold?
    pub fn reach(&self, alpha: &Outcome, beta: &Outcome) -> bool {
        self.reach_index(alpha.index(), beta.index())
    }

    pub fn reach_index(&self, alpha: u64, beta: u64) -> bool {
        let b = beta as usize;
        self.rows[alpha as usize][b / 64] >> (b % 64) & 1 == 1
    }

    /// Outcomes dominating `alpha`, in canonical order.
    pub fn above(&self, alpha: &Outcome) -> Vec<Outcome> {
        let row = &self.rows[alpha.index() as usize];
        (0..1u64 << self.n)
            .filter(|&b| row[b as usize / 64] >> (b % 64) & 1 == 1)
            .map(|b| Outcome::from_index(self.n, b))
            .collect()
    }

    /// Number of ordered pairs in the relation.
    pub fn pair_count(&self) -> usize {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }
}

/// Graph and closure of a net in one call.
pub fn closure_of(net: &CpNet, bound: usize) -> Result<DominanceClosure> {
    Ok(closure(&build_graph(net, bound)?))
}

/// Single-source reachability by explicit search over outcomes.
pub fn reachable(net: &CpNet, from: &Outcome, cap: usize) -> Result<HashSet<Outcome>> {
    let mut seen = HashSet::from([from.clone()]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(u) = queue.pop_front() {
        for v in successors(net, &u) {
            if seen.insert(v.clone()) {
                if seen.len() > cap {
                    return Err(Error::StateBudgetExceeded { cap });
                }
                queue.push_back(v);
            }
        }
    }
    seen.remove(from);
    Ok(seen)
}

/// Is `to` reachable from `from` by one or more improving flips?
pub fn reaches(net: &CpNet, from: &Outcome, to: &Outcome, cap: usize) -> Result<bool> {
    Ok(from != to && reachable(net, from, cap)?.contains(to))
}

/// Does some completion of `sigma` satisfy `phi`?
pub fn sat_enumerate(phi: &CnfFormula, sigma: &PartialAssignment) -> Result<bool> {
    let n = phi.num_vars();
    if n > MAX_ENUM_VARS {
        return Err(Error::InstanceTooLarge {
            features: n,
            bound: MAX_ENUM_VARS,
        });
    }
    sigma.check_range(n)?;
    let free: Vec<usize> = (1..=n).filter(|&v| sigma.get(v).is_none()).collect();
    let mut fixed = 0u64;
    for (var, val) in sigma.iter() {
        if val {
            fixed |= 1 << (var - 1);
        }
    }
    Ok((0..1u64 << free.len()).any(|choice| {
        let mut bits = fixed;
        for (k, &var) in free.iter().enumerate() {
            if choice >> k & 1 == 1 {
                bits |= 1 << (var - 1);
            }
        }
        phi.eval_bits(bits)
    }))
}

/// Is `∃X ∀Y ¬φ` valid?
pub fn qbf2_enumerate(q: &Qbf2Formula) -> Result<bool> {
    let n = q.matrix().num_vars();
    if n > MAX_ENUM_VARS {
        return Err(Error::InstanceTooLarge {
            features: n,
            bound: MAX_ENUM_VARS,
        });
    }
    for x in 0..1u64 << q.exists_vars().len() {
        let mut sigma = PartialAssignment::new();
        for (k, &var) in q.exists_vars().iter().enumerate() {
            sigma.set(var, x >> k & 1 == 1);
        }
        if !sat_enumerate(q.matrix(), &sigma)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Checkable statements, identified by short tags.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaTag {
    Corollary1,
    Lemma1,
    Corollary2,
    Lemma5,
    Lemma7,
    TheoremNowin,
}

impl LemmaTag {
    pub const ALL: [LemmaTag; 6] = [
        LemmaTag::Corollary1,
        LemmaTag::Lemma1,
        LemmaTag::Corollary2,
        LemmaTag::Lemma5,
        LemmaTag::Lemma7,
        LemmaTag::TheoremNowin,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaTag::Corollary1 => "corollary1",
            LemmaTag::Lemma1 => "lemma1",
            LemmaTag::Corollary2 => "corollary2",
            LemmaTag::Lemma5 => "lemma5",
            LemmaTag::Lemma7 => "lemma7",
            LemmaTag::TheoremNowin => "theorem_nowin",
        }
    }

    /// Whether the tag takes a formula (otherwise a profile).
    pub fn takes_formula(self) -> bool {
        matches!(
            self,
            LemmaTag::Corollary1 | LemmaTag::Lemma1 | LemmaTag::Corollary2 | LemmaTag::Lemma5
        )
    }
}

impl std::str::FromStr for LemmaTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::UnknownLemma(s.to_string()))
    }
}

#[derive(Clone, Debug)]
pub enum LemmaInstance {
    Formula(CnfFormula),
    Profile(McpNet),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub reason: String,
    pub outcomes: Vec<Outcome>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: LemmaTag,
    /// Number of elementary equivalences checked.
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn fail(reason: impl Into<String>, outcomes: Vec<Outcome>) -> Option<Counterexample> {
    Some(Counterexample {
        reason: reason.into(),
        outcomes,
    })
}

/// `sat ⇔ high ≻ low` and `¬sat ⇔ high ⋈ low`.
fn check_encoding(net: &CpNet, low: &Outcome, high: &Outcome, sat: bool) -> Result<Option<Counterexample>> {
    let up = reaches(net, low, high, ORACLE_MAX_STATES)?;
    let down = reaches(net, high, low, ORACLE_MAX_STATES)?;
    let pair = vec![low.clone(), high.clone()];
    Ok(if sat && !up {
        fail("satisfiable, but the target does not dominate", pair)
    } else if !sat && up {
        fail("unsatisfiable, but the target dominates", pair)
    } else if !sat && down {
        fail("unsatisfiable, but the pair is comparable", pair)
    } else {
        None
    })
}

fn formula_of(tag: LemmaTag, instance: &LemmaInstance) -> Result<&CnfFormula> {
    match instance {
        LemmaInstance::Formula(phi) => Ok(phi),
        LemmaInstance::Profile(_) => Err(Error::InvalidProfile(format!(
            "`{}` expects a formula",
            tag.name()
        ))),
    }
}

fn profile_of(tag: LemmaTag, instance: &LemmaInstance) -> Result<&McpNet> {
    match instance {
        LemmaInstance::Profile(p) => Ok(p),
        LemmaInstance::Formula(_) => Err(Error::InvalidProfile(format!(
            "`{}` expects a profile",
            tag.name()
        ))),
    }
}

/// Runs the equivalence check behind `tag` on `instance`.
pub fn verify_lemma(tag: LemmaTag, instance: &LemmaInstance, bound: usize) -> Result<LemmaReport> {
    let (checked, counterexample) = match tag {
        LemmaTag::Corollary1 => {
            let phi = formula_of(tag, instance)?;
            let f = formula_net(phi)?;
            let sat = sat_enumerate(phi, &PartialAssignment::new())?;
            (1, check_encoding(&f.net, &f.alpha(), &f.beta_bar(), sat)?)
        }
        LemmaTag::Lemma1 => {
            let phi = formula_of(tag, instance)?;
            let f = formula_net(phi)?;
            let beta = f.beta_bar();
            let mut found = None;
            let all = PartialAssignment::all(phi.num_vars());
            let mut encoded: Vec<(Outcome, PartialAssignment)> = all
                .into_iter()
                .map(|s| Ok((f.encode(&s)?, s)))
                .collect::<Result<_>>()?;
            encoded.sort_by(|a, b| a.0.cmp(&b.0));
            for (alpha, sigma) in &encoded {
                let sat = sat_enumerate(phi, sigma)?;
                if let Some(c) = check_encoding(&f.net, alpha, &beta, sat)? {
                    found = Some(c);
                    break;
                }
            }
            (encoded.len(), found)
        }
        LemmaTag::Corollary2 => {
            let phi = formula_of(tag, instance)?;
            let s = summarized_formula_net(phi)?;
            let sat = sat_enumerate(phi, &PartialAssignment::new())?;
            (1, check_encoding(&s.net, &s.alpha(), &s.beta_bar(), sat)?)
        }
        LemmaTag::Lemma5 => {
            let phi = formula_of(tag, instance)?;
            let g = m_ipo(phi)?;
            let alpha = g.alpha();
            let mut common: Option<HashSet<Outcome>> = None;
            for net in g.profile.agents() {
                let r = reachable(net, &alpha, ORACLE_MAX_STATES)?;
                common = Some(match common {
                    None => r,
                    Some(c) => c.intersection(&r).cloned().collect(),
                });
            }
            let mut common: Vec<Outcome> = common.unwrap_or_default().into_iter().collect();
            common.sort();
            let sat = sat_enumerate(phi, &PartialAssignment::new())?;
            let c = match (sat, common.first()) {
                (true, None) => fail("satisfiable, but the all-plain outcome is Pareto optimal", vec![alpha]),
                (false, Some(b)) => fail(
                    "unsatisfiable, but the all-plain outcome is Pareto dominated",
                    vec![alpha, b.clone()],
                ),
                _ => None,
            };
            (1, c)
        }
        LemmaTag::Lemma7 => {
            let p = profile_of(tag, instance)?;
            verify_pareto_optimum(p, bound)?
        }
        LemmaTag::TheoremNowin => {
            let p = profile_of(tag, instance)?;
            verify_no_majority_winner(p, bound)?
        }
    };
    Ok(LemmaReport {
        lemma: tag,
        checked,
        counterexample,
    })
}

/// Closures of every agent of a profile.
pub fn profile_closures(p: &McpNet, bound: usize) -> Result<Vec<DominanceClosure>> {
    p.agents().iter().map(|n| closure_of(n, bound)).collect()
}

/// Optimum of a net read off its graph: the unique sink.
pub fn graph_optimum(net: &CpNet, bound: usize) -> Result<Outcome> {
    let sinks = build_graph(net, bound)?.sinks();
    Ok(sinks.into_iter().next().expect("acyclic graphs have a sink"))
}

/// Definition-level Pareto optimum: every agent prefers it to every other outcome.
pub fn pareto_optima_by_definition(p: &McpNet, closures: &[DominanceClosure]) -> Vec<Outcome> {
    let n = p.feature_count();
    (0..1u64 << n)
        .filter(|&a| {
            (0..1u64 << n).all(|b| a == b || closures.iter().all(|c| c.reach_index(b, a)))
        })
        .map(|a| Outcome::from_index(n, a))
        .collect()
}

/// Definition-level Pareto optimality: no outcome is preferred by all agents.
pub fn is_pareto_optimal_by_definition(closures: &[DominanceClosure], alpha: &Outcome) -> bool {
    let n = alpha.len();
    let a = alpha.index();
    !(0..1u64 << n).any(|b| b != a && closures.iter().all(|c| c.reach_index(a, b)))
}

/// How many agents prefer `beta` to `alpha`.
pub fn support(closures: &[DominanceClosure], beta: u64, alpha: u64) -> usize {
    closures.iter().filter(|c| c.reach_index(alpha, beta)).count()
}

/// Majority optimal outcomes by exhaustive comparison.
pub fn majority_optimal_by_definition(closures: &[DominanceClosure], n: usize) -> Vec<Outcome> {
    let m = closures.len();
    (0..1u64 << n)
        .filter(|&a| (0..1u64 << n).all(|b| a == b || 2 * support(closures, b, a) <= m))
        .map(|a| Outcome::from_index(n, a))
        .collect()
}

/// Majority optimum outcomes by exhaustive comparison.
pub fn majority_optima_by_definition(closures: &[DominanceClosure], n: usize) -> Vec<Outcome> {
    let m = closures.len();
    (0..1u64 << n)
        .filter(|&a| (0..1u64 << n).all(|b| a == b || 2 * support(closures, a, b) > m))
        .map(|a| Outcome::from_index(n, a))
        .collect()
}

fn verify_pareto_optimum(p: &McpNet, bound: usize) -> Result<(usize, Option<Counterexample>)> {
    let closures = profile_closures(p, bound)?;
    let optima = p
        .agents()
        .iter()
        .map(|n| graph_optimum(n, bound))
        .collect::<Result<Vec<_>>>()?;
    let shared = optima.iter().all(|o| *o == optima[0]);
    let defined = pareto_optima_by_definition(p, &closures);
    let n = p.feature_count();
    let c = if shared && defined != vec![optima[0].clone()] {
        fail(
            "agents share an optimum that is not the unique Pareto optimum",
            optima[..1].to_vec(),
        )
    } else if !shared && !defined.is_empty() {
        fail("agent optima differ, yet a Pareto optimum exists", defined)
    } else {
        None
    };
    Ok((1 << n, c))
}

fn verify_no_majority_winner(p: &McpNet, bound: usize) -> Result<(usize, Option<Counterexample>)> {
    let closures = profile_closures(p, bound)?;
    let n = p.feature_count();
    let optimal = majority_optimal_by_definition(&closures, n);
    let optima = majority_optima_by_definition(&closures, n);
    let c = if let Some(o) = optimal.first() {
        fail("a majority optimal outcome exists", vec![o.clone()])
    } else if let Some(o) = optima.first() {
        fail("a majority optimum exists", vec![o.clone()])
    } else {
        None
    };
    Ok((1 << n, c))
}
