//! Features, CP tables, CP-nets, outcomes and profiles of CP-nets.
//!
//! Every feature is binary. The non-overlined value `f` is encoded as
//! [`Value::Plain`] (bit 0) and the overlined value `f̄` as
//! [`Value::Overlined`] (bit 1). Features are identified by their position
//! in the net's canonical order, which is the insertion order.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest parent set a CP table may have (2^20 rows).
pub const MAX_PARENTS: usize = 20;

/// Position of a feature in the canonical order of its net.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureId(pub usize);

impl FeatureId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for FeatureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    /// The non-overlined value `f`.
    Plain = 0,
    /// The overlined value `f̄`.
    Overlined = 1,
}

impl Value {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Value::Overlined
        } else {
            Value::Plain
        }
    }

    pub fn bit(self) -> bool {
        self == Value::Overlined
    }

    pub fn flipped(self) -> Self {
        match self {
            Value::Plain => Value::Overlined,
            Value::Overlined => Value::Plain,
        }
    }

    pub fn as_char(self) -> char {
        if self.bit() {
            '1'
        } else {
            '0'
        }
    }
}

impl serde::Serialize for FeatureId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u64(self.0 as u64)
    }
}

impl serde::Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(u8::from(self.bit()))
    }
}

/// Conditional preference table of one feature.
///
/// Row `i` holds the preferred value when parent `k` (in declared order)
/// takes value `(i >> k) & 1`. A complete table has `2^|parents|` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpTable {
    parents: Vec<FeatureId>,
    rows: Vec<Value>,
}

impl CpTable {
    /// Builds a table from raw rows without checking completeness.
    pub fn new(parents: Vec<FeatureId>, rows: Vec<Value>) -> Self {
        CpTable { parents, rows }
    }

    pub fn unconditional(preferred: Value) -> Self {
        CpTable {
            parents: Vec::new(),
            rows: vec![preferred],
        }
    }

    /// Materializes a table from a rule over parent values.
    ///
    /// Panics if `parents.len() > MAX_PARENTS`.
    pub fn from_fn(parents: Vec<FeatureId>, rule: impl Fn(&[Value]) -> Value) -> Self {
        assert!(parents.len() <= MAX_PARENTS, "too many parents");
        let k = parents.len();
        let mut cond = vec![Value::Plain; k];
        let rows = (0..1usize << k)
            .map(|row| {
                for (j, c) in cond.iter_mut().enumerate() {
                    *c = Value::from_bit((row >> j) & 1 == 1);
                }
                rule(&cond)
            })
            .collect();
        CpTable { parents, rows }
    }

    pub fn parents(&self) -> &[FeatureId] {
        &self.parents
    }

    pub fn rows(&self) -> &[Value] {
        &self.rows
    }

    pub fn is_complete(&self) -> bool {
        self.parents.len() <= MAX_PARENTS && self.rows.len() == 1usize << self.parents.len()
    }

    pub fn row_index(&self, outcome: &Outcome) -> usize {
        self.parents
            .iter()
            .enumerate()
            .fold(0, |acc, (k, p)| acc | (usize::from(outcome.bit(*p)) << k))
    }

    /// Preferred value of the feature given the parent values in `outcome`.
    pub fn preferred(&self, outcome: &Outcome) -> Value {
        self.rows[self.row_index(outcome)]
    }
}

/// An acyclic binary CP-net.
///
/// Edges are implied by the tables: `(p, f)` is an edge iff `p` is a parent
/// in the table of `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpNet {
    names: Vec<String>,
    tables: Vec<CpTable>,
    labels: Vec<Option<[String; 2]>>,
}

impl CpNet {
    /// Builds a net and rejects it unless [`validate_net`] reports no violation.
    pub fn new(names: Vec<String>, tables: Vec<CpTable>) -> Result<Self> {
        let net = CpNet::from_parts(names, tables);
        let report = validate_net(&net);
        if report.is_ok() {
            Ok(net)
        } else {
            Err(Error::InvalidNet(report))
        }
    }

    /// Builds a net without validation. Use [`validate_net`] before running
    /// any query on it.
    pub fn from_parts(names: Vec<String>, tables: Vec<CpTable>) -> Self {
        let labels = vec![None; names.len()];
        CpNet {
            names,
            tables,
            labels,
        }
    }

    /// Attaches display labels `[plain, overlined]` to a feature's values.
    pub fn with_labels(mut self, feature: FeatureId, labels: [String; 2]) -> Self {
        self.labels[feature.0] = Some(labels);
        self
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, feature: FeatureId) -> &str {
        &self.names[feature.0]
    }

    pub fn feature(&self, name: &str) -> Option<FeatureId> {
        self.names.iter().position(|n| n == name).map(FeatureId)
    }

    pub fn features(&self) -> impl Iterator<Item = FeatureId> {
        (0..self.names.len()).map(FeatureId)
    }

    pub fn table(&self, feature: FeatureId) -> &CpTable {
        &self.tables[feature.0]
    }

    pub fn tables(&self) -> &[CpTable] {
        &self.tables
    }

    pub fn labels(&self, feature: FeatureId) -> Option<&[String; 2]> {
        self.labels[feature.0].as_ref()
    }

    pub fn parents(&self, feature: FeatureId) -> &[FeatureId] {
        self.tables[feature.0].parents()
    }

    /// All `(parent, child)` pairs, ordered by child then parent position.
    pub fn edges(&self) -> Vec<(FeatureId, FeatureId)> {
        self.features()
            .flat_map(|f| self.parents(f).iter().map(move |&p| (p, f)))
            .collect()
    }

    pub fn check_outcome(&self, outcome: &Outcome) -> Result<()> {
        if outcome.len() == self.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.len(),
                found: outcome.len(),
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoFeatures,
    DuplicateName { name: String },
    ParentOutOfRange { feature: String, parent: usize },
    DuplicateParent { feature: String, parent: String },
    TooManyParents { feature: String, count: usize },
    IncompleteTable { feature: String, expected: usize, found: usize },
    Cycle { features: Vec<String> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoFeatures => write!(f, "net has no features"),
            Violation::DuplicateName { name } => write!(f, "duplicate feature name `{name}`"),
            Violation::ParentOutOfRange { feature, parent } => {
                write!(f, "`{feature}` has out-of-range parent #{parent}")
            }
            Violation::DuplicateParent { feature, parent } => {
                write!(f, "`{feature}` lists parent `{parent}` twice")
            }
            Violation::TooManyParents { feature, count } => {
                write!(f, "`{feature}` has {count} parents (max {MAX_PARENTS})")
            }
            Violation::IncompleteTable {
                feature,
                expected,
                found,
            } => write!(
                f,
                "incomplete table for `{feature}`: {found} rows, needs {expected}"
            ),
            Violation::Cycle { features } => write!(f, "cycle through {}", features.join(", ")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the definitional constraints of a binary acyclic CP-net.
pub fn validate_net(net: &CpNet) -> ValidationReport {
    let mut violations = Vec::new();
    let n = net.len();
    if n == 0 {
        violations.push(Violation::NoFeatures);
    }
    if net.tables.len() != n {
        violations.push(Violation::IncompleteTable {
            feature: "<net>".into(),
            expected: n,
            found: net.tables.len(),
        });
        return ValidationReport { violations };
    }

    let mut seen = HashSet::new();
    for name in &net.names {
        if !seen.insert(name.as_str()) {
            violations.push(Violation::DuplicateName { name: name.clone() });
        }
    }

    let mut structurally_sound = true;
    for f in net.features() {
        let table = net.table(f);
        let name = net.name(f).to_string();
        let mut parents_seen = HashSet::new();
        for p in table.parents() {
            if p.0 >= n {
                violations.push(Violation::ParentOutOfRange {
                    feature: name.clone(),
                    parent: p.0,
                });
                structurally_sound = false;
            } else if !parents_seen.insert(*p) {
                violations.push(Violation::DuplicateParent {
                    feature: name.clone(),
                    parent: net.name(*p).to_string(),
                });
            }
        }
        if table.parents().len() > MAX_PARENTS {
            violations.push(Violation::TooManyParents {
                feature: name.clone(),
                count: table.parents().len(),
            });
        } else if !table.is_complete() {
            violations.push(Violation::IncompleteTable {
                feature: name,
                expected: 1 << table.parents().len(),
                found: table.rows().len(),
            });
        }
    }

    if structurally_sound {
        if let Err(Error::CycleDetected(features)) = topological_order(net) {
            violations.push(Violation::Cycle { features });
        }
    }
    ValidationReport { violations }
}

/// Kahn's algorithm; among ready features the smallest index goes first.
pub fn topological_order(net: &CpNet) -> Result<Vec<FeatureId>> {
    let n = net.len();
    let mut pending = vec![0usize; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for f in net.features() {
        for p in net.parents(f) {
            if p.0 < n {
                pending[f.0] += 1;
                children[p.0].push(f.0);
            }
        }
    }
    let mut ready: BinaryHeap<std::cmp::Reverse<usize>> = (0..n)
        .filter(|&f| pending[f] == 0)
        .map(std::cmp::Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(f)) = ready.pop() {
        order.push(FeatureId(f));
        for &c in &children[f] {
            pending[c] -= 1;
            if pending[c] == 0 {
                ready.push(std::cmp::Reverse(c));
            }
        }
    }
    if order.len() == n {
        Ok(order)
    } else {
        let stuck = (0..n)
            .filter(|&f| pending[f] > 0)
            .map(|f| net.names[f].clone())
            .collect();
        Err(Error::CycleDetected(stuck))
    }
}

/// Largest number of parents of any feature.
pub fn indegree(net: &CpNet) -> usize {
    net.tables.iter().map(|t| t.parents().len()).max().unwrap_or(0)
}

/// True iff there is at most one directed path between any two features.
pub fn is_singly_connected(net: &CpNet) -> bool {
    let Ok(order) = topological_order(net) else {
        return false;
    };
    let n = net.len();
    // paths[s][t] = number of paths from s to t, saturating at 2
    let mut paths = vec![vec![0u8; n]; n];
    for &f in &order {
        for &p in net.parents(f) {
            for (s, row) in paths.iter_mut().enumerate() {
                let via = if s == p.0 { 1 } else { row[p.0] };
                if via > 0 {
                    row[f.0] = (row[f.0] + via).min(2);
                }
            }
        }
    }
    paths.iter().all(|row| row.iter().all(|&c| c <= 1))
}

/// A complete assignment of values to the features of a net.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Outcome {
    len: usize,
    words: SmallVec<[u64; 2]>,
}

impl Outcome {
    pub fn zeros(len: usize) -> Self {
        Outcome {
            len,
            words: SmallVec::from_elem(0, len.div_ceil(64)),
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut o = Outcome::zeros(len);
        for i in 0..len {
            o.set(FeatureId(i), Value::Overlined);
        }
        o
    }

    pub fn from_values(values: &[Value]) -> Self {
        let mut o = Outcome::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            o.set(FeatureId(i), *v);
        }
        o
    }

    /// Outcome whose bitstring, read as a binary number with feature 0 as
    /// the most significant digit, equals `index`. Requires `len <= 64`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= 64);
        let mut o = Outcome::zeros(len);
        for i in 0..len {
            if (index >> (len - 1 - i)) & 1 == 1 {
                o.set(FeatureId(i), Value::Overlined);
            }
        }
        o
    }

    /// Inverse of [`Outcome::from_index`].
    pub fn index(&self) -> u64 {
        assert!(self.len <= 64);
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | u64::from(self.bit(FeatureId(i))))
    }

    /// Every outcome over `len` features, in canonical order. Requires `len < 64`.
    pub fn all(len: usize) -> impl Iterator<Item = Outcome> {
        assert!(len < 64);
        (0..1u64 << len).map(move |i| Outcome::from_index(len, i))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Packs an outcome of at most 64 features into a word, feature `i` at bit `i`.
    pub fn packed(&self) -> u64 {
        debug_assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn from_packed(len: usize, bits: u64) -> Self {
        assert!(len <= 64);
        let mut o = Outcome::zeros(len);
        if len > 0 {
            let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
            o.words[0] = bits & mask;
        }
        o
    }


    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn bit(&self, feature: FeatureId) -> bool {
        (self.words[feature.0 / 64] >> (feature.0 % 64)) & 1 == 1
    }

    #[inline]
    pub fn get(&self, feature: FeatureId) -> Value {
        Value::from_bit(self.bit(feature))
    }

    #[inline]
    pub fn set(&mut self, feature: FeatureId, value: Value) {
        let mask = 1u64 << (feature.0 % 64);
        if value.bit() {
            self.words[feature.0 / 64] |= mask;
        } else {
            self.words[feature.0 / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, feature: FeatureId) {
        self.words[feature.0 / 64] ^= 1u64 << (feature.0 % 64);
    }

    pub fn with_flipped(&self, feature: FeatureId) -> Outcome {
        let mut o = self.clone();
        o.flip(feature);
        o
    }

    pub fn with(&self, feature: FeatureId, value: Value) -> Outcome {
        let mut o = self.clone();
        o.set(feature, value);
        o
    }

    pub fn values(&self) -> impl Iterator<Item = Value> + '_ {
        (0..self.len).map(|i| self.get(FeatureId(i)))
    }

    /// Features set to the overlined value.
    pub fn overlined(&self) -> impl Iterator<Item = FeatureId> + '_ {
        (0..self.len).map(FeatureId).filter(|f| self.bit(*f))
    }

    pub fn count_overlined(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming(&self, other: &Outcome) -> usize {
        self.words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn to_bitstring(&self) -> String {
        self.values().map(Value::as_char).collect()
    }
}

impl Ord for Outcome {
    /// Canonical order: lexicographic on bitstrings, feature 0 first.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff.trailing_zeros();
                return if (a >> low) & 1 == 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Outcome {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

impl fmt::Debug for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Outcome({self})")
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c {
                '0' => Ok(Value::Plain),
                '1' => Ok(Value::Overlined),
                other => Err(Error::Parse(format!(
                    "outcome must be a bitstring, found `{other}`"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Outcome::from_values(&values))
    }
}

impl serde::Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_bitstring())
    }
}

/// A profile of CP-nets over one shared feature universe, one per agent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct McpNet {
    agents: Vec<CpNet>,
}

impl McpNet {
    pub fn new(agents: Vec<CpNet>) -> Result<Self> {
        let profile = McpNet { agents };
        match validate_profile(&profile) {
            Ok(()) => Ok(profile),
            Err(e) => Err(e),
        }
    }

    pub fn from_parts(agents: Vec<CpNet>) -> Self {
        McpNet { agents }
    }

    pub fn agents(&self) -> &[CpNet] {
        &self.agents
    }

    pub fn agent(&self, i: usize) -> &CpNet {
        &self.agents[i]
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Number of features in the shared universe.
    pub fn feature_count(&self) -> usize {
        self.agents.first().map_or(0, CpNet::len)
    }

    pub fn names(&self) -> &[String] {
        self.agents.first().map_or(&[], |a| a.names())
    }

    pub fn check_outcome(&self, outcome: &Outcome) -> Result<()> {
        match self.agents.first() {
            Some(a) => a.check_outcome(outcome),
            None => Err(Error::InvalidProfile("no agents".into())),
        }
    }
}

/// Every agent must be a valid net and all agents must share the same
/// feature names in the same order.
pub fn validate_profile(profile: &McpNet) -> Result<()> {
    let Some(first) = profile.agents.first() else {
        return Err(Error::InvalidProfile("profile needs at least one agent".into()));
    };
    for (i, agent) in profile.agents.iter().enumerate() {
        let report = validate_net(agent);
        if !report.is_ok() {
            return Err(Error::InvalidProfile(format!("agent {i}: {report}")));
        }
        if agent.names() != first.names() {
            return Err(Error::InvalidProfile(format!(
                "agent {i} does not share the feature list of agent 0"
            )));
        }
    }
    Ok(())
}

/// Incremental construction of a net by feature name.
///
/// Gadget constructors declare the whole feature universe first so that
/// several agents can share one canonical order, then fill in tables.
#[derive(Clone, Debug, Default)]
pub struct NetBuilder {
    names: Vec<String>,
    index: HashMap<String, FeatureId>,
    tables: Vec<Option<CpTable>>,
}

impl NetBuilder {
    pub fn new() -> Self {
        NetBuilder::default()
    }

    /// Starts from an existing universe with no tables set.
    pub fn with_universe(names: &[String]) -> Self {
        let mut b = NetBuilder::new();
        for n in names {
            b.add(n.clone());
        }
        b
    }

    /// Declares a feature. Panics on duplicate names.
    pub fn add(&mut self, name: impl Into<String>) -> FeatureId {
        let name = name.into();
        let id = FeatureId(self.names.len());
        let prev = self.index.insert(name.clone(), id);
        assert!(prev.is_none(), "duplicate feature `{name}`");
        self.names.push(name);
        self.tables.push(None);
        id
    }

    pub fn id(&self, name: &str) -> Option<FeatureId> {
        self.index.get(name).copied()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn set(&mut self, feature: FeatureId, table: CpTable) -> &mut Self {
        self.tables[feature.0] = Some(table);
        self
    }

    pub fn set_unconditional(&mut self, feature: FeatureId, preferred: Value) -> &mut Self {
        self.set(feature, CpTable::unconditional(preferred))
    }

    pub fn set_rule(
        &mut self,
        feature: FeatureId,
        parents: Vec<FeatureId>,
        rule: impl Fn(&[Value]) -> Value,
    ) -> &mut Self {
        self.set(feature, CpTable::from_fn(parents, rule))
    }

    pub fn is_set(&self, feature: FeatureId) -> bool {
        self.tables[feature.0].is_some()
    }

    /// Fails with `InvalidNet` if a table is missing or the net is invalid.
    pub fn build(self) -> Result<CpNet> {
        let mut missing = Vec::new();
        let mut tables = Vec::with_capacity(self.tables.len());
        for (i, t) in self.tables.into_iter().enumerate() {
            match t {
                Some(t) => tables.push(t),
                None => {
                    missing.push(Violation::IncompleteTable {
                        feature: self.names[i].clone(),
                        expected: 1,
                        found: 0,
                    });
                    tables.push(CpTable::new(Vec::new(), Vec::new()));
                }
            }
        }
        if !missing.is_empty() {
            return Err(Error::InvalidNet(ValidationReport {
                violations: missing,
            }));
        }
        CpNet::new(self.names, tables)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dinner() -> CpNet {
        let mut b = NetBuilder::new();
        let main = b.add("Main");
        let wine = b.add("Wine");
        b.set_unconditional(main, Value::Plain);
        b.set_rule(wine, vec![main], |c| c[0]);
        b.build().unwrap()
    }

    #[test]
    fn dinner_validates() {
        let net = dinner();
        assert!(validate_net(&net).is_ok());
        assert_eq!(topological_order(&net).unwrap(), vec![FeatureId(0), FeatureId(1)]);
        assert_eq!(indegree(&net), 1);
        assert_eq!(net.edges(), vec![(FeatureId(0), FeatureId(1))]);
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let net = CpNet::from_parts(
            vec!["F".into()],
            vec![CpTable::new(vec![FeatureId(0)], vec![Value::Plain, Value::Overlined])],
        );
        let report = validate_net(&net);
        assert_eq!(
            report.violations,
            vec![Violation::Cycle {
                features: vec!["F".into()]
            }]
        );
        assert!(matches!(topological_order(&net), Err(Error::CycleDetected(_))));
    }

    #[test]
    fn short_table_is_incomplete() {
        let net = CpNet::from_parts(
            vec!["Main".into(), "Wine".into()],
            vec![
                CpTable::unconditional(Value::Plain),
                CpTable::new(vec![FeatureId(0)], vec![Value::Plain]),
            ],
        );
        assert_eq!(
            validate_net(&net).violations,
            vec![Violation::IncompleteTable {
                feature: "Wine".into(),
                expected: 2,
                found: 1
            }]
        );
    }

    #[test]
    fn other_violations_are_enumerated() {
        let net = CpNet::from_parts(
            vec!["A".into(), "A".into(), "C".into()],
            vec![
                CpTable::unconditional(Value::Plain),
                CpTable::new(vec![FeatureId(7)], vec![Value::Plain; 2]),
                CpTable::new(vec![FeatureId(0), FeatureId(0)], vec![Value::Plain; 4]),
            ],
        );
        let v = validate_net(&net).violations;
        assert!(v.contains(&Violation::DuplicateName { name: "A".into() }));
        assert!(v.contains(&Violation::ParentOutOfRange {
            feature: "A".into(),
            parent: 7
        }));
        assert!(v.contains(&Violation::DuplicateParent {
            feature: "C".into(),
            parent: "A".into()
        }));
    }

    #[test]
    fn parent_cap_is_enforced() {
        let n = MAX_PARENTS + 2;
        let mut names: Vec<String> = (0..n).map(|i| format!("F{i}")).collect();
        names.push("Sink".into());
        let mut tables: Vec<CpTable> =
            (0..n).map(|_| CpTable::unconditional(Value::Plain)).collect();
        tables.push(CpTable::new((0..n).map(FeatureId).collect(), vec![Value::Plain]));
        let net = CpNet::from_parts(names, tables);
        assert!(validate_net(&net).violations.contains(&Violation::TooManyParents {
            feature: "Sink".into(),
            count: n
        }));
    }

    #[test]
    fn edgeless_order_is_canonical() {
        let mut b = NetBuilder::new();
        for i in 0..3 {
            let f = b.add(format!("F{i}"));
            b.set_unconditional(f, Value::Overlined);
        }
        let net = b.build().unwrap();
        assert_eq!(
            topological_order(&net).unwrap(),
            vec![FeatureId(0), FeatureId(1), FeatureId(2)]
        );
        assert_eq!(indegree(&net), 0);
    }

    #[test]
    fn topological_ties_prefer_small_index() {
        // F0 <- F2, F1 free: ready set starts {1, 2}
        let net = CpNet::new(
            vec!["F0".into(), "F1".into(), "F2".into()],
            vec![
                CpTable::new(vec![FeatureId(2)], vec![Value::Plain, Value::Overlined]),
                CpTable::unconditional(Value::Plain),
                CpTable::unconditional(Value::Plain),
            ],
        )
        .unwrap();
        assert_eq!(
            topological_order(&net).unwrap(),
            vec![FeatureId(1), FeatureId(2), FeatureId(0)]
        );
    }

    #[test]
    fn outcome_index_round_trip_and_order() {
        let o: Outcome = "0110".parse().unwrap();
        assert_eq!(o.index(), 0b0110);
        assert_eq!(Outcome::from_index(4, 6), o);
        let all: Vec<Outcome> = Outcome::all(3).collect();
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert_eq!(all[0].to_string(), "000");
        assert_eq!(all[1].to_string(), "001");
        assert!("x1".parse::<Outcome>().is_err());
    }

    #[test]
    fn wide_outcomes_span_words() {
        let mut o = Outcome::zeros(130);
        o.set(FeatureId(129), Value::Overlined);
        o.flip(FeatureId(64));
        assert_eq!(o.count_overlined(), 2);
        assert!(o.bit(FeatureId(64)));
        assert!(Outcome::zeros(130) < o);
    }

    #[test]
    fn singly_connected_detects_diamond() {
        let mut b = NetBuilder::new();
        let a = b.add("A");
        let l = b.add("L");
        let r = b.add("R");
        let d = b.add("D");
        b.set_unconditional(a, Value::Plain);
        b.set_rule(l, vec![a], |c| c[0]);
        b.set_rule(r, vec![a], |c| c[0]);
        b.set_rule(d, vec![l, r], |c| c[0]);
        let net = b.build().unwrap();
        assert!(!is_singly_connected(&net));
    }

    #[test]
    fn profile_requires_shared_universe() {
        let a = dinner();
        let b = CpNet::new(
            vec!["Wine".into(), "Main".into()],
            vec![
                CpTable::unconditional(Value::Plain),
                CpTable::unconditional(Value::Plain),
            ],
        )
        .unwrap();
        assert!(McpNet::new(vec![a.clone(), a.clone()]).is_ok());
        assert!(McpNet::new(vec![a, b]).is_err());
        assert!(McpNet::new(vec![]).is_err());
    }
}
