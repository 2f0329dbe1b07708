//! Constructors for the reduction gadgets: formula nets, interconnecting
//! nets, direct nets, summarized formula nets, and the composite profiles
//! built from them.
//!
//! Naming scheme: variable features `V{i}^T`/`V{i}^F` (universally
//! quantified ones `W{i}^T`/`W{i}^F`), literal features `P_{j}_{k}`, clause
//! features `D_{j}`, interconnecting features `A_{i}` or `B_{i}`, the
//! switches `U1`/`U2`, and `V{i}'` for the copies of existential variables.
//! The two copies inside the Pareto-optimality profile carry `^a` and `^b`.

use crate::error::{Error, Result};
use crate::formula::{CnfFormula, Literal, PartialAssignment, Qbf2Formula};
use crate::model::{CpNet, FeatureId, McpNet, NetBuilder, Outcome, Value};

const ONE: Value = Value::Overlined;
const ZERO: Value = Value::Plain;

fn v(bit: bool) -> Value {
    Value::from_bit(bit)
}

/// The two features encoding a Boolean variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VarFeatures {
    /// Variable index in the formula (1-based).
    pub var: usize,
    pub t: FeatureId,
    pub f: FeatureId,
}

/// Positions of the features that mirror a CNF formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaLayout {
    /// One entry per variable, `vars[i]` for `x_{i+1}`.
    pub vars: Vec<VarFeatures>,
    /// `literals[j][k]` is `P_{j+1}_{k+1}`.
    pub literals: Vec<Vec<FeatureId>>,
    pub clauses: Vec<FeatureId>,
}

impl FormulaLayout {
    pub fn literal_features(&self) -> impl Iterator<Item = FeatureId> + '_ {
        self.literals.iter().flatten().copied()
    }

    pub fn variable_features(&self) -> impl Iterator<Item = FeatureId> + '_ {
        self.vars.iter().flat_map(|p| [p.t, p.f])
    }

    fn var(&self, var: usize) -> &VarFeatures {
        &self.vars[var - 1]
    }
}

/// Sets the variable features of `sigma`: true as `10`, false as `01`,
/// undefined as `00` on the `(T, F)` pair. Other bits of `base` are kept.
pub fn encode_assignment(
    sigma: &PartialAssignment,
    vars: &[VarFeatures],
    base: &Outcome,
) -> Result<Outcome> {
    let mut out = base.clone();
    for p in vars {
        let (t, f) = match sigma.get(p.var) {
            Some(true) => (ONE, ZERO),
            Some(false) => (ZERO, ONE),
            None => (ZERO, ZERO),
        };
        out.set(p.t, t);
        out.set(p.f, f);
    }
    if let Some((var, _)) = sigma.iter().find(|(var, _)| !vars.iter().any(|p| p.var == *var)) {
        let num_vars = vars.iter().map(|p| p.var).max().unwrap_or(0);
        return Err(Error::VariableOutOfRange { var, num_vars });
    }
    Ok(out)
}

fn declare_vars(b: &mut NetBuilder, vars: &[usize], letter: &str, suffix: &str) -> Vec<VarFeatures> {
    vars.iter()
        .map(|&var| VarFeatures {
            var,
            t: b.add(format!("{letter}{var}^T{suffix}")),
            f: b.add(format!("{letter}{var}^F{suffix}")),
        })
        .collect()
}

fn declare_literals(b: &mut NetBuilder, phi: &CnfFormula, suffix: &str) -> Vec<Vec<FeatureId>> {
    phi.clauses()
        .iter()
        .enumerate()
        .map(|(j, c)| {
            (0..c.len())
                .map(|k| b.add(format!("P_{}_{}{suffix}", j + 1, k + 1)))
                .collect()
        })
        .collect()
}

fn declare_clauses(b: &mut NetBuilder, phi: &CnfFormula, suffix: &str) -> Vec<FeatureId> {
    (1..=phi.clauses().len())
        .map(|j| b.add(format!("D_{j}{suffix}")))
        .collect()
}

/// Declares variables, literals and clauses in that order.
fn declare_formula(b: &mut NetBuilder, phi: &CnfFormula, suffix: &str) -> FormulaLayout {
    let all: Vec<usize> = (1..=phi.num_vars()).collect();
    let vars = declare_vars(b, &all, "V", suffix);
    let literals = declare_literals(b, phi, suffix);
    let clauses = declare_clauses(b, phi, suffix);
    FormulaLayout {
        vars,
        literals,
        clauses,
    }
}

/// How a variable feature's table depends on an optional gate feature.
#[derive(Clone, Copy)]
enum VarRule {
    /// Unconditionally prefer the overlined value.
    Free,
    /// Prefer overlined while the gate is plain, plain once it is overlined.
    OpenUntil(FeatureId),
    /// Prefer overlined only once the gate is overlined.
    OpenAfter(FeatureId),
}

fn set_var_tables(b: &mut NetBuilder, vars: &[VarFeatures], rule: VarRule) {
    for p in vars {
        for feat in [p.t, p.f] {
            match rule {
                VarRule::Free => {
                    b.set_unconditional(feat, ONE);
                }
                VarRule::OpenUntil(g) => {
                    b.set_rule(feat, vec![g], |c| v(!c[0].bit()));
                }
                VarRule::OpenAfter(g) => {
                    b.set_rule(feat, vec![g], |c| c[0]);
                }
            }
        }
    }
}

fn literal_holds(lit: Literal, t: Value, f: Value) -> bool {
    if lit.positive {
        t.bit() && !f.bit()
    } else {
        !t.bit() && f.bit()
    }
}

/// Literal and clause tables; with a gate, literals only rise while it is plain.
fn set_literal_and_clause_tables(
    b: &mut NetBuilder,
    phi: &CnfFormula,
    layout: &FormulaLayout,
    gate: Option<FeatureId>,
) {
    for (j, clause) in phi.clauses().iter().enumerate() {
        for (k, &lit) in clause.iter().enumerate() {
            let p = layout.var(lit.var);
            let feat = layout.literals[j][k];
            match gate {
                None => b.set_rule(feat, vec![p.t, p.f], |c| v(literal_holds(lit, c[0], c[1]))),
                Some(g) => b.set_rule(feat, vec![g, p.t, p.f], |c| {
                    v(!c[0].bit() && literal_holds(lit, c[1], c[2]))
                }),
            };
        }
        b.set_rule(layout.clauses[j], layout.literals[j].clone(), |c| {
            v(c.iter().any(|x| x.bit()))
        });
    }
}

/// Builds `F(φ)`: variable, literal and clause features in that order.
#[derive(Clone, Debug)]
pub struct FormulaNet {
    pub net: CpNet,
    pub layout: FormulaLayout,
}

impl FormulaNet {
    /// All features plain.
    pub fn alpha(&self) -> Outcome {
        Outcome::zeros(self.net.len())
    }

    /// Exactly the variable and clause features overlined.
    pub fn beta_bar(&self) -> Outcome {
        let mut o = self.alpha();
        for f in self.layout.variable_features().chain(self.layout.clauses.iter().copied()) {
            o.set(f, ONE);
        }
        o
    }

    /// `sigma` on the variable features, everything else plain.
    pub fn encode(&self, sigma: &PartialAssignment) -> Result<Outcome> {
        encode_assignment(sigma, &self.layout.vars, &self.alpha())
    }
}

pub fn formula_net(phi: &CnfFormula) -> Result<FormulaNet> {
    let mut b = NetBuilder::new();
    let layout = declare_formula(&mut b, phi, "");
    set_var_tables(&mut b, &layout.vars, VarRule::Free);
    set_literal_and_clause_tables(&mut b, phi, &layout, None);
    Ok(FormulaNet {
        net: b.build()?,
        layout,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Junction {
    /// A feature prefers overlined iff every parent is overlined.
    Conjunctive,
    /// A feature prefers overlined iff some parent is overlined.
    Disjunctive,
}

impl Junction {
    fn rule(self) -> fn(&[Value]) -> Value {
        match self {
            Junction::Conjunctive => |c| v(c.iter().all(|x| x.bit())),
            Junction::Disjunctive => |c| v(c.iter().any(|x| x.bit())),
        }
    }
}

/// Wiring of an interconnecting net over `inputs` features.
///
/// Node `i < inputs` is the `i`-th input; node `inputs + j` is fresh
/// feature `j`. Each layer pairs the previous one left to right, with a
/// final triple when its size is odd; the last fresh feature is the apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interconnect {
    pub junction: Junction,
    pub inputs: usize,
    /// Parent nodes of each fresh feature.
    pub parents: Vec<Vec<usize>>,
}

impl Interconnect {
    pub fn new(junction: Junction, inputs: usize) -> Result<Self> {
        if inputs == 0 {
            return Err(Error::EmptyInterconnect);
        }
        let mut parents = Vec::new();
        let mut layer: Vec<usize> = (0..inputs).collect();
        if layer.len() == 1 {
            parents.push(vec![0]);
            return Ok(Interconnect {
                junction,
                inputs,
                parents,
            });
        }
        while layer.len() > 1 {
            let mut groups: Vec<Vec<usize>> = layer.chunks(2).map(<[usize]>::to_vec).collect();
            if let Some(lone) = groups.pop_if(|g| g.len() == 1) {
                groups.last_mut().unwrap().push(lone[0]);
            }
            layer = groups
                .into_iter()
                .map(|g| {
                    parents.push(g);
                    inputs + parents.len() - 1
                })
                .collect();
        }
        Ok(Interconnect {
            junction,
            inputs,
            parents,
        })
    }

    pub fn fresh_count(&self) -> usize {
        self.parents.len()
    }

    /// Declares the fresh features `{prefix}_1..` in `b`.
    pub fn declare(&self, b: &mut NetBuilder, prefix: &str) -> Vec<FeatureId> {
        (1..=self.fresh_count())
            .map(|i| b.add(format!("{prefix}_{i}")))
            .collect()
    }

    /// Installs the tables of the fresh features.
    pub fn install(&self, b: &mut NetBuilder, inputs: &[FeatureId], fresh: &[FeatureId]) {
        assert_eq!(inputs.len(), self.inputs);
        assert_eq!(fresh.len(), self.fresh_count());
        let node = |i: usize| {
            if i < self.inputs {
                inputs[i]
            } else {
                fresh[i - self.inputs]
            }
        };
        let rule = self.junction.rule();
        for (j, ps) in self.parents.iter().enumerate() {
            b.set_rule(fresh[j], ps.iter().map(|&i| node(i)).collect(), rule);
        }
    }

    /// A standalone net: parentless inputs `S_1..S_m` preferring the
    /// overlined value, followed by the fresh features.
    pub fn standalone(&self, prefix: &str) -> Result<CpNet> {
        if prefix == "S" {
            return Err(Error::Parse("prefix `S` is reserved for the inputs".into()));
        }
        let mut b = NetBuilder::new();
        let inputs: Vec<FeatureId> = (1..=self.inputs).map(|i| b.add(format!("S_{i}"))).collect();
        for &s in &inputs {
            b.set_unconditional(s, ONE);
        }
        let fresh = self.declare(&mut b, prefix);
        self.install(&mut b, &inputs, &fresh);
        b.build()
    }
}

pub fn h_c(m: usize) -> Result<Interconnect> {
    Interconnect::new(Junction::Conjunctive, m)
}

pub fn h_d(m: usize) -> Result<Interconnect> {
    Interconnect::new(Junction::Disjunctive, m)
}

/// The edgeless net whose every feature prefers its value in `alpha`.
pub fn direct_net(names: &[String], alpha: &Outcome) -> Result<CpNet> {
    if names.len() != alpha.len() {
        return Err(Error::DimensionMismatch {
            expected: names.len(),
            found: alpha.len(),
        });
    }
    let mut b = NetBuilder::with_universe(names);
    for (i, val) in alpha.values().enumerate() {
        b.set_unconditional(FeatureId(i), val);
    }
    b.build()
}

/// Layout of a summarized formula net.
#[derive(Clone, Debug)]
pub struct SummarizedLayout {
    pub formula: FormulaLayout,
    pub a_set: Vec<FeatureId>,
    pub interconnect: Interconnect,
    pub u1: FeatureId,
    pub u2: FeatureId,
}

impl SummarizedLayout {
    pub fn apex(&self) -> FeatureId {
        *self.a_set.last().expect("interconnects have an apex")
    }
}

#[derive(Clone, Debug)]
pub struct SummarizedNet {
    pub net: CpNet,
    pub layout: SummarizedLayout,
}

impl SummarizedNet {
    pub fn alpha(&self) -> Outcome {
        Outcome::zeros(self.net.len())
    }

    /// Only `U1` and `U2` overlined.
    pub fn beta_bar(&self) -> Outcome {
        self.alpha()
            .with(self.layout.u1, ONE)
            .with(self.layout.u2, ONE)
    }

    pub fn encode(&self, sigma: &PartialAssignment) -> Result<Outcome> {
        encode_assignment(sigma, &self.layout.formula.vars, &self.alpha())
    }
}

/// Installs the summarized schema: `gate` opens variables and literals
/// while plain, the conjunctive net collects the clauses, and `flag`
/// follows the apex.
fn set_summarized_tables(
    b: &mut NetBuilder,
    phi: &CnfFormula,
    layout: &SummarizedLayout,
    gate: FeatureId,
    flag: FeatureId,
) {
    b.set_unconditional(gate, ONE);
    set_var_tables(b, &layout.formula.vars, VarRule::OpenUntil(gate));
    set_literal_and_clause_tables(b, phi, &layout.formula, Some(gate));
    layout
        .interconnect
        .install(b, &layout.formula.clauses, &layout.a_set);
    b.set_rule(flag, vec![layout.apex()], |c| c[0]);
}

/// Builds `F_s(φ)`: variables, literals, clauses, `A_i`, `U1`, `U2`.
pub fn summarized_formula_net(phi: &CnfFormula) -> Result<SummarizedNet> {
    let mut b = NetBuilder::new();
    let formula = declare_formula(&mut b, phi, "");
    let interconnect = h_c(formula.clauses.len())?;
    let a_set = interconnect.declare(&mut b, "A");
    let u1 = b.add("U1");
    let u2 = b.add("U2");
    let layout = SummarizedLayout {
        formula,
        a_set,
        interconnect,
        u1,
        u2,
    };
    set_summarized_tables(&mut b, phi, &layout, u1, u2);
    Ok(SummarizedNet {
        net: b.build()?,
        layout,
    })
}

/// The two-agent profile whose all-plain outcome is Pareto optimal iff the
/// formula is unsatisfiable.
#[derive(Clone, Debug)]
pub struct ParetoGadget {
    pub profile: McpNet,
    pub copy_a: FormulaLayout,
    pub copy_b: FormulaLayout,
    /// Interconnecting features, shared by both agents.
    pub a_set: Vec<FeatureId>,
}

impl ParetoGadget {
    pub fn alpha(&self) -> Outcome {
        Outcome::zeros(self.profile.feature_count())
    }
}

pub fn m_ipo(phi: &CnfFormula) -> Result<ParetoGadget> {
    let mut b = NetBuilder::new();
    let copy_a = declare_formula(&mut b, phi, "^a");
    let copy_b = declare_formula(&mut b, phi, "^b");
    let hc = h_c(phi.clauses().len())?;
    let a_set = hc.declare(&mut b, "A");
    let apex = *a_set.last().unwrap();
    let universe = b.names().to_vec();

    let agent = |source: &FormulaLayout, target: &FormulaLayout| -> Result<CpNet> {
        let mut b = NetBuilder::with_universe(&universe);
        set_var_tables(&mut b, &source.vars, VarRule::Free);
        set_var_tables(&mut b, &target.vars, VarRule::OpenAfter(apex));
        set_literal_and_clause_tables(&mut b, phi, source, None);
        set_literal_and_clause_tables(&mut b, phi, target, None);
        hc.install(&mut b, &source.clauses, &a_set);
        b.build()
    };
    let n1 = agent(&copy_a, &copy_b)?;
    let n2 = agent(&copy_b, &copy_a)?;
    Ok(ParetoGadget {
        profile: McpNet::new(vec![n1, n2])?,
        copy_a,
        copy_b,
        a_set,
    })
}

/// Shared universe of the majority gadgets built from `∃X ∀Y ¬φ`.
#[derive(Clone, Debug)]
pub struct QbfLayout {
    /// Variable features of the existential block (`V`).
    pub x_vars: Vec<VarFeatures>,
    /// One `V'` feature per existential variable, aligned with `x_vars`.
    pub v_prime: Vec<FeatureId>,
    /// Variable features of the universal block (`W`).
    pub y_vars: Vec<VarFeatures>,
    /// Literal and clause features; `formula.vars` covers both blocks,
    /// indexed by matrix variable.
    pub formula: FormulaLayout,
    pub a_set: Vec<FeatureId>,
    pub a_net: Interconnect,
    pub b_set: Vec<FeatureId>,
    pub b_net: Interconnect,
    pub u1: FeatureId,
    pub u2: FeatureId,
    pub names: Vec<String>,
}

impl QbfLayout {
    fn new(q: &Qbf2Formula) -> Result<Self> {
        let phi = q.matrix();
        let mut b = NetBuilder::new();
        let x_vars = declare_vars(&mut b, q.exists_vars(), "V", "");
        let v_prime = q
            .exists_vars()
            .iter()
            .map(|x| b.add(format!("V{x}'")))
            .collect::<Vec<_>>();
        let y_vars = declare_vars(&mut b, q.forall_vars(), "W", "");
        let literals = declare_literals(&mut b, phi, "");
        let clauses = declare_clauses(&mut b, phi, "");
        let mut vars: Vec<VarFeatures> = x_vars.iter().chain(y_vars.iter()).copied().collect();
        vars.sort_by_key(|p| p.var);
        let formula = FormulaLayout {
            vars,
            literals,
            clauses,
        };
        let a_net = h_c(formula.clauses.len())?;
        let a_set = a_net.declare(&mut b, "A");
        let b_inputs = v_prime.len()
            + 2 * y_vars.len()
            + formula.literal_features().count()
            + formula.clauses.len()
            + a_set.len();
        let b_net = h_d(b_inputs)?;
        let b_set = b_net.declare(&mut b, "B");
        let u1 = b.add("U1");
        let u2 = b.add("U2");
        Ok(QbfLayout {
            x_vars,
            v_prime,
            y_vars,
            formula,
            a_set,
            a_net,
            b_set,
            b_net,
            u1,
            u2,
            names: b.names().to_vec(),
        })
    }

    pub fn apex_a(&self) -> FeatureId {
        *self.a_set.last().unwrap()
    }

    pub fn apex_b(&self) -> FeatureId {
        *self.b_set.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Inputs of the disjunctive net: `V' ∪ W ∪ P ∪ D ∪ A`, in that order.
    pub fn b_inputs(&self) -> Vec<FeatureId> {
        let mut v = self.v_prime.clone();
        v.extend(self.y_vars.iter().flat_map(|p| [p.t, p.f]));
        v.extend(self.formula.literal_features());
        v.extend(self.formula.clauses.iter().copied());
        v.extend(self.a_set.iter().copied());
        v
    }

    /// The outcome with only `U1` and `U2` overlined.
    pub fn alpha_bar(&self) -> Outcome {
        Outcome::zeros(self.len())
            .with(self.u1, ONE)
            .with(self.u2, ONE)
    }

    /// `sigma` over the existential variables, everything else plain.
    pub fn encode_x(&self, sigma: &PartialAssignment) -> Result<Outcome> {
        encode_assignment(sigma, &self.x_vars, &Outcome::zeros(self.len()))
    }

    fn summarized(&self) -> SummarizedLayout {
        SummarizedLayout {
            formula: self.formula.clone(),
            a_set: self.a_set.clone(),
            interconnect: self.a_net.clone(),
            u1: self.u1,
            u2: self.u2,
        }
    }

    fn universe(&self) -> NetBuilder {
        NetBuilder::with_universe(&self.names)
    }

    fn set_plain(b: &mut NetBuilder, feats: impl IntoIterator<Item = FeatureId>) {
        for f in feats {
            b.set_unconditional(f, ZERO);
        }
    }

    /// `F_s(φ)` with `gate`/`flag` as the two switches, plus plain `V' ∪ B`.
    fn summarized_agent(&self, phi: &CnfFormula, gate: FeatureId, flag: FeatureId) -> Result<CpNet> {
        let mut b = self.universe();
        set_summarized_tables(&mut b, phi, &self.summarized(), gate, flag);
        Self::set_plain(&mut b, self.v_prime.iter().chain(&self.b_set).copied());
        b.build()
    }

    /// Plain `V ∪ W ∪ P ∪ D ∪ A`; `V'` detects doubly-overlined pairs; the
    /// disjunctive net feeds `U1`, which feeds `U2`.
    fn blocking_agent(&self) -> Result<CpNet> {
        let mut b = self.universe();
        Self::set_plain(
            &mut b,
            self.formula
                .variable_features()
                .chain(self.formula.literal_features())
                .chain(self.formula.clauses.iter().copied())
                .chain(self.a_set.iter().copied()),
        );
        for (p, &vp) in self.x_vars.iter().zip(&self.v_prime) {
            b.set_rule(vp, vec![p.t, p.f], |c| v(c[0].bit() && c[1].bit()));
        }
        self.b_net.install(&mut b, &self.b_inputs(), &self.b_set);
        b.set_rule(self.u1, vec![self.apex_b()], |c| c[0]);
        b.set_rule(self.u2, vec![self.u1], |c| c[0]);
        b.build()
    }
}

/// A majority gadget together with its layout.
#[derive(Clone, Debug)]
pub struct MajorityGadget {
    pub profile: McpNet,
    pub layout: QbfLayout,
}

/// The six-agent profile that has a majority optimal outcome iff the QBF is valid.
pub fn m_eml(q: &Qbf2Formula) -> Result<MajorityGadget> {
    let layout = QbfLayout::new(q)?;
    let phi = q.matrix();
    let n1 = layout.summarized_agent(phi, layout.u1, layout.u2)?;
    let n2 = layout.summarized_agent(phi, layout.u2, layout.u1)?;
    let n3 = layout.blocking_agent()?;
    let n4 = n3.clone();

    let mut b5 = layout.universe();
    for f in 0..layout.len() {
        let f = FeatureId(f);
        if f != layout.u1 && f != layout.u2 {
            b5.set_unconditional(f, ZERO);
        }
    }
    b5.set_unconditional(layout.u1, ONE);
    b5.set_rule(layout.u2, vec![layout.u1], |c| c[0]);
    let n5 = b5.build()?;

    let mut b6 = layout.universe();
    b6.set_unconditional(layout.u2, ONE);
    for f in 0..layout.len() {
        let f = FeatureId(f);
        if f != layout.u2 {
            b6.set_rule(f, vec![layout.u2], |c| c[0].flipped());
        }
    }
    let n6 = b6.build()?;

    Ok(MajorityGadget {
        profile: McpNet::new(vec![n1, n2, n3, n4, n5, n6])?,
        layout,
    })
}

/// The three-agent profile that has no majority optimum iff the QBF is valid.
pub fn m_imm(q: &Qbf2Formula) -> Result<MajorityGadget> {
    let layout = QbfLayout::new(q)?;
    let n1 = layout.summarized_agent(q.matrix(), layout.u1, layout.u2)?;
    let n2 = direct_net(&layout.names, &layout.alpha_bar())?;
    let n3 = layout.blocking_agent()?;
    Ok(MajorityGadget {
        profile: McpNet::new(vec![n1, n2, n3])?,
        layout,
    })
}

/// Four agents over features `A`, `B` whose majority relation has no
/// optimal outcome. Agent orders, best first (bits `AB`):
/// `11 10 00 01`, `10 00 01 11`, `00 01 11 10`, `01 11 10 00`.
pub fn m_nowin() -> McpNet {
    let names = vec!["A".to_string(), "B".to_string()];
    let build = |top: usize, top_pref: Value, follow: fn(Value) -> Value| {
        let mut b = NetBuilder::with_universe(&names);
        let other = 1 - top;
        b.set_unconditional(FeatureId(top), top_pref);
        b.set_rule(FeatureId(other), vec![FeatureId(top)], |c| follow(c[0]));
        b.build().expect("fixed nets are valid")
    };
    let same: fn(Value) -> Value = |x| x;
    let opposite: fn(Value) -> Value = Value::flipped;
    McpNet::new(vec![
        build(0, ONE, same),
        build(1, ZERO, opposite),
        build(0, ZERO, same),
        build(1, ONE, opposite),
    ])
    .expect("fixed profile is valid")
}
