//! Pareto and majority voting over a profile of CP-nets.
//!
//! Majority questions quantify over every outcome. For small universes each
//! agent's full dominance relation is materialized as a bit matrix; larger
//! universes (up to `search_bound` features) fall back to one reachability
//! search per agent and candidate.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{McpNet, Outcome};
use crate::semantics::{
    bfs, dominates_with, forward_sweep_optimum, with_state, Compiled, Direction, SearchConfig,
    State, DEFAULT_MAX_STATES,
};

pub const DEFAULT_CLOSURE_BOUND: usize = 14;
pub const DEFAULT_SEARCH_BOUND: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VotingConfig {
    /// State budget for each individual search.
    pub max_states: usize,
    /// Largest universe for which dominance closures are materialized.
    pub closure_bound: usize,
    /// Largest universe on which majority questions are attempted at all.
    pub search_bound: usize,
}

impl Default for VotingConfig {
    fn default() -> Self {
        VotingConfig {
            max_states: DEFAULT_MAX_STATES,
            closure_bound: DEFAULT_CLOSURE_BOUND,
            search_bound: DEFAULT_SEARCH_BOUND,
        }
    }
}

impl VotingConfig {
    fn search(&self) -> SearchConfig {
        SearchConfig {
            max_states: self.max_states,
        }
    }
}

/// How the agents of a profile judge `beta` against `alpha`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AgentPartition {
    /// Agents whose net entails `beta ≻ alpha`.
    pub prefers: Vec<usize>,
    /// Agents whose net entails `alpha ≻ beta`.
    pub opposes: Vec<usize>,
    pub incomparables: Vec<usize>,
}

impl AgentPartition {
    pub fn sizes(&self) -> (usize, usize, usize) {
        (self.prefers.len(), self.opposes.len(), self.incomparables.len())
    }
}

/// Strict majority of `m` agents.
pub fn majority_threshold(m: usize) -> usize {
    m / 2 + 1
}

pub fn agent_partition(
    profile: &McpNet,
    beta: &Outcome,
    alpha: &Outcome,
    cfg: &VotingConfig,
) -> Result<AgentPartition> {
    profile.check_outcome(beta)?;
    profile.check_outcome(alpha)?;
    let mut part = AgentPartition::default();
    for (i, net) in profile.agents().iter().enumerate() {
        if dominates_with(net, beta, alpha, &cfg.search())?.holds {
            part.prefers.push(i);
        } else if dominates_with(net, alpha, beta, &cfg.search())?.holds {
            part.opposes.push(i);
        } else {
            part.incomparables.push(i);
        }
    }
    Ok(part)
}

/// Every agent prefers `beta` to `alpha`.
pub fn pareto_dominates(
    profile: &McpNet,
    beta: &Outcome,
    alpha: &Outcome,
    cfg: &VotingConfig,
) -> Result<bool> {
    profile.check_outcome(beta)?;
    profile.check_outcome(alpha)?;
    for net in profile.agents() {
        if !dominates_with(net, beta, alpha, &cfg.search())?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}

/// More than half of the agents prefer `beta` to `alpha`.
pub fn majority_dominates(
    profile: &McpNet,
    beta: &Outcome,
    alpha: &Outcome,
    cfg: &VotingConfig,
) -> Result<bool> {
    profile.check_outcome(beta)?;
    profile.check_outcome(alpha)?;
    let need = majority_threshold(profile.len());
    let mut yes = 0;
    for (i, net) in profile.agents().iter().enumerate() {
        if dominates_with(net, beta, alpha, &cfg.search())?.holds {
            yes += 1;
        }
        if yes >= need {
            return Ok(true);
        }
        if yes + (profile.len() - i - 1) < need {
            return Ok(false);
        }
    }
    Ok(false)
}

/// No outcome lies in the improving-flip reach of `alpha` in every agent.
pub fn is_pareto_optimal(profile: &McpNet, alpha: &Outcome, cfg: &VotingConfig) -> Result<bool> {
    profile.check_outcome(alpha)?;
    with_state!(profile.feature_count(), S => {
        pareto_common::<S>(profile, alpha, cfg).map(|c| c.is_empty())
    })
}

fn pareto_common<S: State>(
    profile: &McpNet,
    alpha: &Outcome,
    cfg: &VotingConfig,
) -> Result<HashSet<S>> {
    let start = S::from_outcome(alpha);
    let mut common: Option<HashSet<S>> = None;
    for net in profile.agents() {
        let c = Compiled::new(net);
        let run = bfs(&c, start.clone(), None, Direction::Improving, cfg.max_states)?;
        let reach = run.seen.into_keys().skip(1);
        common = Some(match common {
            None => reach.collect(),
            Some(prev) => reach.filter(|s| prev.contains(s)).collect(),
        });
        if common.as_ref().is_some_and(HashSet::is_empty) {
            break;
        }
    }
    Ok(common.unwrap_or_default())
}

/// The first agent's optimum, which no outcome Pareto-dominates.
pub fn exists_pareto_optimal(profile: &McpNet) -> Result<Outcome> {
    first_optimum(profile)
}

fn first_optimum(profile: &McpNet) -> Result<Outcome> {
    let first = profile
        .agents()
        .first()
        .ok_or_else(|| Error::InvalidProfile("profile needs at least one agent".into()))?;
    forward_sweep_optimum(first)
}

/// `alpha` is every agent's individual optimum.
pub fn is_pareto_optimum(profile: &McpNet, alpha: &Outcome) -> Result<bool> {
    profile.check_outcome(alpha)?;
    for net in profile.agents() {
        if &forward_sweep_optimum(net)? != alpha {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn exists_pareto_optimum(profile: &McpNet) -> Result<Option<Outcome>> {
    let candidate = first_optimum(profile)?;
    Ok(is_pareto_optimum(profile, &candidate)?.then_some(candidate))
}

/// Materialized dominance relation of one net, by packed outcome index.
///
/// An improving closure stores in row `u` every outcome that dominates `u`;
/// a worsening closure stores every outcome that `u` dominates.
#[derive(Clone, Debug)]
pub struct DenseClosure {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    worsening: bool,
}

impl DenseClosure {
    /// Outcomes above each outcome.
    pub fn improving(net: &crate::model::CpNet) -> Result<Self> {
        Self::build(net, Direction::Improving)
    }

    /// Outcomes below each outcome.
    pub fn worsening(net: &crate::model::CpNet) -> Result<Self> {
        Self::build(net, Direction::Worsening)
    }

    /// Post-order walk of the flip graph in direction `dir`: the row of `u`
    /// is the union over its successors `v` of `{v}` and the row of `v`.
    fn build(net: &crate::model::CpNet, dir: Direction) -> Result<Self> {
        let n = net.len();
        if n > 24 {
            return Err(Error::InstanceTooLarge {
                features: n,
                bound: 24,
            });
        }
        let c = Compiled::new(net);
        let size = 1usize << n;
        let words = size.div_ceil(64);
        let mut bits = vec![0u64; size * words];
        let mut done = vec![false; size];
        let mut succ: Vec<Vec<u32>> = vec![Vec::new(); size];
        for (u, s) in succ.iter_mut().enumerate() {
            c.moves(&(u as u64), dir, |f| s.push((u ^ (1 << f)) as u32));
        }
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for root in 0..size {
            if done[root] {
                continue;
            }
            stack.push((root, 0));
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                if let Some(&v) = succ[u].get(*next) {
                    *next += 1;
                    if !done[v as usize] {
                        stack.push((v as usize, 0));
                    }
                    continue;
                }
                stack.pop();
                for &v in &succ[u] {
                    let v = v as usize;
                    let (dst, src) = two_rows(&mut bits, words, u, v);
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d |= s;
                    }
                    bits[u * words + v / 64] |= 1 << (v % 64);
                }
                done[u] = true;
            }
        }
        Ok(DenseClosure {
            n,
            words,
            bits,
            worsening: dir == Direction::Worsening,
        })
    }

    pub fn feature_count(&self) -> usize {
        self.n
    }

    /// Does `beta ≻ alpha` hold (both as packed indices)?
    #[inline]
    pub fn dominates(&self, beta: u64, alpha: u64) -> bool {
        let (row, col) = if self.worsening {
            (beta as usize, alpha as usize)
        } else {
            (alpha as usize, beta as usize)
        };
        (self.bits[row * self.words + col / 64] >> (col % 64)) & 1 == 1
    }

    fn row(&self, u: u64) -> &[u64] {
        let u = u as usize;
        &self.bits[u * self.words..(u + 1) * self.words]
    }
}

/// Mutable row `u` and shared row `v` of a row-major bit matrix (`u != v`).
fn two_rows(bits: &mut [u64], words: usize, u: usize, v: usize) -> (&mut [u64], &[u64]) {
    if u < v {
        let (left, right) = bits.split_at_mut(v * words);
        (&mut left[u * words..(u + 1) * words], &right[..words])
    } else {
        let (left, right) = bits.split_at_mut(u * words);
        (&mut right[..words], &left[v * words..(v + 1) * words])
    }
}

/// Bit mask of positions where at least `need` of `rows` have a 1.
/// Counts are kept bit-sliced: `planes[p]` holds bit `p` of every counter.
fn at_least(rows: &[&[u64]], w: usize, need: usize) -> u64 {
    let mut planes = [0u64; 8];
    for r in rows {
        let mut carry = r[w];
        for p in planes.iter_mut() {
            if carry == 0 {
                break;
            }
            let next = *p & carry;
            *p ^= carry;
            carry = next;
        }
    }
    let (mut gt, mut eq) = (0u64, u64::MAX);
    for (p, plane) in planes.iter().enumerate().rev() {
        if (need >> p) & 1 == 1 {
            eq &= plane;
        } else {
            gt |= eq & plane;
            eq &= !plane;
        }
    }
    gt | eq
}

/// Per-agent dominance oracle used by the majority procedures.
enum Engine {
    Dense(Vec<DenseClosure>),
    Search(Vec<Compiled>),
}

impl Engine {
    fn new(profile: &McpNet, dir: Direction, cfg: &VotingConfig) -> Result<Self> {
        let n = profile.feature_count();
        let bound = cfg.search_bound.min(63);
        if n > bound {
            return Err(Error::InstanceTooLarge {
                features: n,
                bound,
            });
        }
        if n <= cfg.closure_bound.min(24) && profile.len() < 256 {
            let closures = profile
                .agents()
                .par_iter()
                .map(|net| DenseClosure::build(net, dir))
                .collect::<Result<Vec<_>>>()?;
            Ok(Engine::Dense(closures))
        } else {
            Ok(Engine::Search(profile.agents().iter().map(Compiled::new).collect()))
        }
    }

    /// Number of outcomes other than `alpha` that at least `need` agents
    /// place above `alpha` (`Improving`) or below it (`Worsening`).
    fn count_backed(&self, alpha: u64, dir: Direction, need: usize, cfg: &VotingConfig) -> Result<u64> {
        match self {
            Engine::Dense(closures) => {
                debug_assert!(closures.iter().all(|c| c.worsening == (dir == Direction::Worsening)));
                let rows: Vec<&[u64]> = closures.iter().map(|c| c.row(alpha)).collect();
                let words = rows.first().map_or(0, |r| r.len());
                Ok((0..words)
                    .map(|w| u64::from(at_least(&rows, w, need).count_ones()))
                    .sum())
            }
            Engine::Search(nets) => {
                let mut counts: HashMap<u64, usize> = HashMap::new();
                for c in nets {
                    let run = bfs(c, alpha, None, dir, cfg.max_states)?;
                    for s in run.seen.keys().skip(1) {
                        *counts.entry(*s).or_default() += 1;
                    }
                }
                Ok(counts.values().filter(|&&c| c >= need).count() as u64)
            }
        }
    }

    fn is_optimal(&self, alpha: u64, need: usize, cfg: &VotingConfig) -> Result<bool> {
        Ok(self.count_backed(alpha, Direction::Improving, need, cfg)? == 0)
    }

    fn is_optimum(&self, alpha: u64, n: usize, need: usize, cfg: &VotingConfig) -> Result<bool> {
        Ok(self.count_backed(alpha, Direction::Worsening, need, cfg)? == (1u64 << n) - 1)
    }
}

fn first_in_canonical_order(
    n: usize,
    test: impl Fn(u64) -> Result<bool> + Sync,
) -> Result<Option<Outcome>> {
    let found = (0..1u64 << n).into_par_iter().find_map_first(|idx| {
        let o = Outcome::from_index(n, idx);
        match test(o.packed()) {
            Ok(true) => Some(Ok(o)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        }
    });
    found.transpose()
}

/// No outcome is preferred to `alpha` by a strict majority of agents.
pub fn is_majority_optimal(profile: &McpNet, alpha: &Outcome, cfg: &VotingConfig) -> Result<bool> {
    profile.check_outcome(alpha)?;
    let engine = Engine::new(profile, Direction::Improving, cfg)?;
    engine.is_optimal(alpha.packed(), majority_threshold(profile.len()), cfg)
}

/// The lowest majority optimal outcome in canonical order, if any.
pub fn exists_majority_optimal(profile: &McpNet, cfg: &VotingConfig) -> Result<Option<Outcome>> {
    let engine = Engine::new(profile, Direction::Improving, cfg)?;
    let need = majority_threshold(profile.len());
    first_in_canonical_order(profile.feature_count(), |a| engine.is_optimal(a, need, cfg))
}

/// A strict majority prefers `alpha` to every other outcome.
pub fn is_majority_optimum(profile: &McpNet, alpha: &Outcome, cfg: &VotingConfig) -> Result<bool> {
    profile.check_outcome(alpha)?;
    let engine = Engine::new(profile, Direction::Worsening, cfg)?;
    let n = profile.feature_count();
    engine.is_optimum(alpha.packed(), n, majority_threshold(profile.len()), cfg)
}

/// The majority optimum, which is unique when it exists.
pub fn exists_majority_optimum(profile: &McpNet, cfg: &VotingConfig) -> Result<Option<Outcome>> {
    let engine = Engine::new(profile, Direction::Worsening, cfg)?;
    let n = profile.feature_count();
    let need = majority_threshold(profile.len());
    first_in_canonical_order(n, |a| engine.is_optimum(a, n, need, cfg))
}
