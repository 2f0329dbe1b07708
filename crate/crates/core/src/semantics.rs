//! Single-agent semantics: improving flips, dominance search, optimality.

use std::hash::Hash;

use indexmap::IndexMap;
use rustc_hash::FxBuildHasher;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{topological_order, CpNet, FeatureId, Outcome, Value};

/// Default cap on the number of outcomes a single search may visit.
pub const DEFAULT_MAX_STATES: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_states: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FlipStep {
    pub feature: FeatureId,
    pub from: Value,
    pub to: Value,
}

/// A sequence of improving flips leading from `start` to `end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlipSequence {
    pub start: Outcome,
    pub end: Outcome,
    pub steps: Vec<FlipStep>,
}

impl FlipSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replays the steps on `net`, checking that each one is an improving
    /// flip when applied and that the sequence ends at `end`.
    pub fn verify(&self, net: &CpNet) -> bool {
        if net.check_outcome(&self.start).is_err() || net.check_outcome(&self.end).is_err() {
            return false;
        }
        let mut cur = self.start.clone();
        for step in &self.steps {
            if step.feature.0 >= net.len() || cur.get(step.feature) != step.from {
                return false;
            }
            let preferred = net.table(step.feature).preferred(&cur);
            if preferred == step.from || step.to != preferred {
                return false;
            }
            cur.set(step.feature, step.to);
        }
        cur == self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceAnswer {
    pub holds: bool,
    pub witness: Option<FlipSequence>,
    /// Outcomes discovered by the search.
    pub visited: usize,
}

/// Flat, cache-friendly view of a net used by the search routines.
#[derive(Clone, Debug)]
pub(crate) struct Compiled {
    n: usize,
    parents: Vec<Vec<usize>>,
    /// Bit-packed rows: bit `r` of the feature's vector is 1 iff row `r`
    /// prefers the overlined value.
    rows: Vec<Vec<u64>>,
}

impl Compiled {
    pub(crate) fn new(net: &CpNet) -> Self {
        let parents = net
            .tables()
            .iter()
            .map(|t| t.parents().iter().map(|p| p.0).collect())
            .collect();
        let rows = net
            .tables()
            .iter()
            .map(|t| {
                let mut words = vec![0u64; t.rows().len().div_ceil(64)];
                for (r, v) in t.rows().iter().enumerate() {
                    if v.bit() {
                        words[r / 64] |= 1 << (r % 64);
                    }
                }
                words
            })
            .collect();
        Compiled {
            n: net.len(),
            parents,
            rows,
        }
    }

    #[inline]
    /// Features that are `targets` or ancestors of one.
    pub(crate) fn ancestors_of(&self, targets: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut mark = vec![false; self.n];
        let mut stack: Vec<usize> = targets.into_iter().collect();
        while let Some(f) = stack.pop() {
            if !std::mem::replace(&mut mark[f], true) {
                stack.extend(self.parents[f].iter().copied().filter(|&p| !mark[p]));
            }
        }
        (0..self.n).filter(|&f| mark[f]).collect()
    }

    pub(crate) fn preferred<S: State>(&self, state: &S, f: usize) -> bool {
        let mut row = 0usize;
        for (k, &p) in self.parents[f].iter().enumerate() {
            row |= usize::from(state.bit(p)) << k;
        }
        (self.rows[f][row / 64] >> (row % 64)) & 1 == 1
    }

    /// Calls `visit(f)` for every feature whose flip is a legal move.
    /// Forward moves are improving flips; backward moves undo one, so a
    /// predecessor through `f` exists iff `f` already has its preferred value.
    #[inline]
    pub(crate) fn moves<S: State>(&self, state: &S, dir: Direction, visit: impl FnMut(usize)) {
        self.moves_among(state, dir, 0..self.n, visit)
    }

    /// [`Compiled::moves`] restricted to `features`.
    #[inline]
    pub(crate) fn moves_among<S: State>(
        &self,
        state: &S,
        dir: Direction,
        features: impl IntoIterator<Item = usize>,
        mut visit: impl FnMut(usize),
    ) {
        for f in features {
            let pref = self.preferred(state, f);
            let legal = match dir {
                Direction::Improving => pref != state.bit(f),
                Direction::Worsening => pref == state.bit(f),
            };
            if legal {
                visit(f);
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Improving,
    Worsening,
}

/// Search state representation: packed words for small nets, outcomes otherwise.
pub(crate) trait State: Clone + Eq + Hash + Send + Sync {
    fn from_outcome(o: &Outcome) -> Self;
    fn to_outcome(&self, n: usize) -> Outcome;
    fn bit(&self, i: usize) -> bool;
    fn flip(&mut self, i: usize);
}

impl State for u64 {
    fn from_outcome(o: &Outcome) -> Self {
        o.packed()
    }
    fn to_outcome(&self, n: usize) -> Outcome {
        Outcome::from_packed(n, *self)
    }
    #[inline]
    fn bit(&self, i: usize) -> bool {
        (self >> i) & 1 == 1
    }
    #[inline]
    fn flip(&mut self, i: usize) {
        *self ^= 1 << i;
    }
}

impl State for Outcome {
    fn from_outcome(o: &Outcome) -> Self {
        o.clone()
    }
    fn to_outcome(&self, _n: usize) -> Outcome {
        self.clone()
    }
    #[inline]
    fn bit(&self, i: usize) -> bool {
        Outcome::bit(self, FeatureId(i))
    }
    #[inline]
    fn flip(&mut self, i: usize) {
        Outcome::flip(self, FeatureId(i))
    }
}

const ROOT: usize = usize::MAX;

/// Breadth-first exploration from `start`. Entry `i` of the map is the
/// `i`-th discovered state with its parent index and the flipped feature,
/// so the map doubles as the BFS queue.
pub(crate) struct Bfs<S> {
    pub(crate) seen: IndexMap<S, (usize, usize), FxBuildHasher>,
    pub(crate) hit: Option<usize>,
}

pub(crate) fn bfs<S: State>(
    net: &Compiled,
    start: S,
    target: Option<&S>,
    dir: Direction,
    cap: usize,
) -> Result<Bfs<S>> {
    bfs_among(net, start, target, dir, cap, None)
}

/// [`bfs`] that only flips the features in `among`, when given.
pub(crate) fn bfs_among<S: State>(
    net: &Compiled,
    start: S,
    target: Option<&S>,
    dir: Direction,
    cap: usize,
    among: Option<&[usize]>,
) -> Result<Bfs<S>> {
    let all: Vec<usize>;
    let among = match among {
        Some(a) => a,
        None => {
            all = (0..net.n).collect();
            &all
        }
    };
    let mut seen: IndexMap<S, (usize, usize), FxBuildHasher> = IndexMap::default();
    seen.insert(start, (ROOT, ROOT));
    let mut head = 0;
    while head < seen.len() {
        let cur = seen.get_index(head).map(|(s, _)| s.clone()).unwrap();
        let mut found = None;
        net.moves_among(&cur, dir, among.iter().copied(), |f| {
            if found.is_some() {
                return;
            }
            let mut next = cur.clone();
            next.flip(f);
            if !seen.contains_key(&next) {
                let hit = target == Some(&next);
                let (idx, _) = seen.insert_full(next, (head, f));
                if hit {
                    found = Some(idx);
                }
            }
        });
        if found.is_some() {
            return Ok(Bfs { seen, hit: found });
        }
        if seen.len() > cap {
            return Err(Error::StateBudgetExceeded { cap });
        }
        head += 1;
    }
    Ok(Bfs { seen, hit: None })
}

impl<S: State> Bfs<S> {
    /// Flip path from the start to entry `idx`, as outcomes and features.
    fn path(&self, idx: usize) -> Vec<usize> {
        let mut feats = Vec::new();
        let mut i = idx;
        while let Some((_, &(parent, f))) = self.seen.get_index(i) {
            if parent == ROOT {
                break;
            }
            feats.push(f);
            i = parent;
        }
        feats.reverse();
        feats
    }
}

macro_rules! with_state {
    ($n:expr, $S:ident => $body:expr) => {
        if $n <= 64 {
            type $S = u64;
            $body
        } else {
            type $S = Outcome;
            $body
        }
    };
}
pub(crate) use with_state;

fn check_pair(net: &CpNet, a: &Outcome, b: &Outcome) -> Result<()> {
    net.check_outcome(a)?;
    net.check_outcome(b)
}

/// Features whose flip at `outcome` is improving, with the flipped outcome.
pub fn improving_flips(net: &CpNet, outcome: &Outcome) -> Result<Vec<(FeatureId, Outcome)>> {
    net.check_outcome(outcome)?;
    Ok(net
        .features()
        .filter(|&f| net.table(f).preferred(outcome) != outcome.get(f))
        .map(|f| (f, outcome.with_flipped(f)))
        .collect())
}

/// Does `net` entail `beta ≻ alpha`? Uses the default state budget.
pub fn dominates(net: &CpNet, beta: &Outcome, alpha: &Outcome) -> Result<DominanceAnswer> {
    dominates_with(net, beta, alpha, &SearchConfig::default())
}

pub fn dominates_with(
    net: &CpNet,
    beta: &Outcome,
    alpha: &Outcome,
    cfg: &SearchConfig,
) -> Result<DominanceAnswer> {
    check_pair(net, beta, alpha)?;
    if beta == alpha {
        return Ok(DominanceAnswer {
            holds: false,
            witness: None,
            visited: 0,
        });
    }
    let c = Compiled::new(net);
    // A feature that neither differs nor influences a differing feature
    // never needs to move: dropping its flips leaves every other flip legal.
    let differing = net.features().filter(|&f| alpha.get(f) != beta.get(f)).map(|f| f.0);
    let relevant = c.ancestors_of(differing);
    with_state!(net.len(), S => {
        let target = S::from_outcome(beta);
        let run = bfs_among(
            &c,
            S::from_outcome(alpha),
            Some(&target),
            Direction::Improving,
            cfg.max_states,
            Some(&relevant),
        )?;
        let witness = run.hit.map(|idx| {
            let mut cur = alpha.clone();
            let steps = run
                .path(idx)
                .into_iter()
                .map(|f| {
                    let f = FeatureId(f);
                    let from = cur.get(f);
                    cur.flip(f);
                    FlipStep { feature: f, from, to: from.flipped() }
                })
                .collect();
            FlipSequence { start: alpha.clone(), end: beta.clone(), steps }
        });
        Ok(DominanceAnswer { holds: witness.is_some(), witness, visited: run.seen.len() })
    })
}

/// Every outcome reachable from `alpha` by one or more improving flips, in
/// BFS discovery order. These are exactly the outcomes that dominate `alpha`.
pub fn dominating_set(net: &CpNet, alpha: &Outcome, cfg: &SearchConfig) -> Result<Vec<Outcome>> {
    directed_set(net, alpha, Direction::Improving, cfg)
}

/// Every outcome from which `alpha` is reachable, i.e. those `alpha` dominates.
pub fn dominated_set(net: &CpNet, alpha: &Outcome, cfg: &SearchConfig) -> Result<Vec<Outcome>> {
    directed_set(net, alpha, Direction::Worsening, cfg)
}

fn directed_set(
    net: &CpNet,
    alpha: &Outcome,
    dir: Direction,
    cfg: &SearchConfig,
) -> Result<Vec<Outcome>> {
    net.check_outcome(alpha)?;
    let c = Compiled::new(net);
    with_state!(net.len(), S => {
        let run = bfs(&c, S::from_outcome(alpha), None, dir, cfg.max_states)?;
        Ok(run.seen.keys().skip(1).map(|s| s.to_outcome(net.len())).collect())
    })
}

pub fn incomparable(net: &CpNet, alpha: &Outcome, beta: &Outcome) -> Result<bool> {
    incomparable_with(net, alpha, beta, &SearchConfig::default())
}

pub fn incomparable_with(
    net: &CpNet,
    alpha: &Outcome,
    beta: &Outcome,
    cfg: &SearchConfig,
) -> Result<bool> {
    check_pair(net, alpha, beta)?;
    if alpha == beta {
        return Err(Error::EqualOutcomes);
    }
    Ok(!dominates_with(net, alpha, beta, cfg)?.holds && !dominates_with(net, beta, alpha, cfg)?.holds)
}

/// Is there a ranking consistent with `net` that places `alpha` above `beta`?
pub fn ordering_query(net: &CpNet, alpha: &Outcome, beta: &Outcome) -> Result<bool> {
    Ok(!dominates(net, beta, alpha)?.holds)
}

/// True iff no improving flip applies at `alpha`.
pub fn is_optimal(net: &CpNet, alpha: &Outcome) -> Result<bool> {
    net.check_outcome(alpha)?;
    Ok(net
        .features()
        .all(|f| net.table(f).preferred(alpha) == alpha.get(f)))
}

/// The unique optimum, by assigning features in topological order.
pub fn forward_sweep_optimum(net: &CpNet) -> Result<Outcome> {
    let mut o = Outcome::zeros(net.len());
    for f in topological_order(net)? {
        let v = net.table(f).preferred(&o);
        o.set(f, v);
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NetBuilder;

    fn dinner() -> CpNet {
        let mut b = NetBuilder::new();
        let main = b.add("Main");
        let wine = b.add("Wine");
        b.set_unconditional(main, Value::Plain);
        b.set_rule(wine, vec![main], |c| c[0]);
        b.build().unwrap()
    }

    fn o(s: &str) -> Outcome {
        s.parse().unwrap()
    }

    #[test]
    fn flips_at_fish_red() {
        let net = dinner();
        let flips = improving_flips(&net, &o("10")).unwrap();
        assert_eq!(
            flips,
            vec![(FeatureId(0), o("00")), (FeatureId(1), o("11"))]
        );
        assert!(improving_flips(&net, &o("00")).unwrap().is_empty());
        assert!(matches!(
            improving_flips(&net, &o("000")),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn dominance_with_shortest_witness() {
        let net = dinner();
        let ans = dominates(&net, &o("00"), &o("11")).unwrap();
        assert!(ans.holds);
        let w = ans.witness.unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.verify(&net));
        assert_eq!(w.steps[0].feature, FeatureId(0));
        assert!(!dominates(&net, &o("11"), &o("00")).unwrap().holds);
        assert!(!dominates(&net, &o("01"), &o("01")).unwrap().holds);
    }

    #[test]
    fn incomparable_and_ordering() {
        let net = dinner();
        assert!(!incomparable(&net, &o("01"), &o("10")).unwrap());
        assert!(!incomparable(&net, &o("00"), &o("11")).unwrap());
        assert!(matches!(
            incomparable(&net, &o("00"), &o("00")),
            Err(Error::EqualOutcomes)
        ));
        assert!(!ordering_query(&net, &o("11"), &o("00")).unwrap());
        assert!(ordering_query(&net, &o("00"), &o("11")).unwrap());
        assert!(ordering_query(&net, &o("01"), &o("01")).unwrap());
    }

    #[test]
    fn optimum_and_optimality() {
        let net = dinner();
        assert_eq!(forward_sweep_optimum(&net).unwrap(), o("00"));
        assert!(is_optimal(&net, &o("00")).unwrap());
        assert!(!is_optimal(&net, &o("01")).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let mut b = NetBuilder::new();
        for i in 0..12 {
            let f = b.add(format!("F{i}"));
            b.set_unconditional(f, Value::Overlined);
        }
        let net = b.build().unwrap();
        let cfg = SearchConfig { max_states: 100 };
        let err = dominated_set(&net, &Outcome::ones(12), &cfg).unwrap_err();
        assert!(matches!(err, Error::StateBudgetExceeded { cap: 100 }));
        let ok = dominating_set(&net, &Outcome::zeros(12), &SearchConfig::default()).unwrap();
        assert_eq!(ok.len(), (1 << 12) - 1);
    }

    #[test]
    fn wide_nets_use_outcome_states() {
        let mut b = NetBuilder::new();
        for i in 0..70 {
            let f = b.add(format!("F{i}"));
            b.set_unconditional(f, Value::from_bit(i == 69));
        }
        let net = b.build().unwrap();
        let alpha = Outcome::zeros(70);
        let beta = alpha.with_flipped(FeatureId(69));
        let ans = dominates(&net, &beta, &alpha).unwrap();
        assert!(ans.holds);
        assert!(ans.witness.unwrap().verify(&net));
    }

    #[test]
    fn tampered_witness_fails_replay() {
        let net = dinner();
        let mut w = dominates(&net, &o("00"), &o("11")).unwrap().witness.unwrap();
        w.steps.swap(0, 1);
        // Wine first from fw is not improving (under fish, white is preferred)
        assert!(!w.verify(&net));
    }
}
