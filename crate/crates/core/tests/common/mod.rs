//! Fixtures and seeded generators shared by the integration tests.
#![allow(dead_code)]

use mcpnet::{CnfFormula, CpNet, CpTable, FeatureId, Literal, McpNet, Value};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn o(bits: &str) -> mcpnet::Outcome {
    bits.parse().unwrap()
}

/// The two-feature dinner net: fish (1) or meat (0) main course, red (0) or
/// white (1) wine; meat is preferred and the wine should match the main.
pub fn dinner() -> CpNet {
    mcpnet::io::net_from_json(DINNER_JSON).unwrap()
}

pub const DINNER_JSON: &str = r#"{"features":[
  {"name":"Main","parents":[],"cpt":[{"cond":[],"prefer":0}],"values":["m","f"]},
  {"name":"Wine","parents":["Main"],"cpt":[{"cond":[0],"prefer":0},{"cond":[1],"prefer":1}],"values":["r","w"]}
]}"#;

/// Three dinner guests: Alice as above, Bob always wants meat and white
/// wine, Chuck always wants meat and red wine.
pub fn dinner_party() -> McpNet {
    let bob = two_feature(Value::Plain, |_| Value::Overlined);
    let chuck = two_feature(Value::Plain, |_| Value::Plain);
    McpNet::new(vec![dinner(), bob, chuck]).unwrap()
}

fn two_feature(main: Value, wine: impl Fn(Value) -> Value) -> CpNet {
    let mut b = mcpnet::NetBuilder::new();
    let m = b.add("Main");
    let w = b.add("Wine");
    b.set_unconditional(m, main);
    b.set_rule(w, vec![m], |c| wine(c[0]));
    b.build().unwrap()
}

/// A random acyclic net on `n` features whose indegree is at most
/// `max_parents`. Parents are drawn from earlier positions of a shuffled
/// order, so edges do not always point from lower to higher ids.
pub fn random_net(rng: &mut impl Rng, n: usize, max_parents: usize) -> CpNet {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut tables = vec![CpTable::unconditional(Value::Plain); n];
    for (pos, &f) in order.iter().enumerate() {
        let k = rng.gen_range(0..=max_parents.min(pos));
        let mut parents: Vec<FeatureId> = order[..pos]
            .choose_multiple(rng, k)
            .map(|&p| FeatureId(p))
            .collect();
        parents.shuffle(rng);
        let rows = (0..1usize << k)
            .map(|_| Value::from_bit(rng.gen_bool(0.5)))
            .collect();
        tables[f] = CpTable::new(parents, rows);
    }
    let names = (0..n).map(|i| format!("X{i}")).collect();
    CpNet::new(names, tables).unwrap()
}

pub fn random_profile(rng: &mut impl Rng, n: usize, m: usize, max_parents: usize) -> McpNet {
    McpNet::new((0..m).map(|_| random_net(rng, n, max_parents)).collect()).unwrap()
}

/// Every clause over variables `1..=n` with one to three distinct literals.
/// Complementary literals may share a clause.
pub fn all_clauses(n: usize) -> Vec<Vec<Literal>> {
    let lits: Vec<Literal> = (1..=n).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect();
    let mut out = Vec::new();
    for mask in 1u32..1 << lits.len() {
        if mask.count_ones() <= 3 {
            out.push(
                lits.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, l)| *l)
                    .collect(),
            );
        }
    }
    out
}

/// Every formula over exactly `n` variables with one to `max_clauses`
/// clauses, counted once per multiset of clauses.
pub fn formula_family(n: usize, max_clauses: usize) -> Vec<CnfFormula> {
    assert!((1..=2).contains(&max_clauses));
    let clauses = all_clauses(n);
    let mut out = Vec::new();
    for (i, c) in clauses.iter().enumerate() {
        out.push(CnfFormula::new(n, vec![c.clone()]).unwrap());
        if max_clauses == 2 {
            for d in &clauses[i..] {
                out.push(CnfFormula::new(n, vec![c.clone(), d.clone()]).unwrap());
            }
        }
    }
    out
}

/// `formula_family` for every variable count from 1 to `max_vars`.
pub fn formulas_up_to(max_vars: usize, max_clauses: usize) -> Vec<CnfFormula> {
    (1..=max_vars).flat_map(|n| formula_family(n, max_clauses)).collect()
}

pub fn random_formula(rng: &mut impl Rng, max_vars: usize, max_clauses: usize) -> CnfFormula {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let width = rng.gen_range(1..=3);
            (0..width)
                .map(|_| {
                    let v = rng.gen_range(1..=n);
                    if rng.gen_bool(0.5) {
                        Literal::pos(v)
                    } else {
                        Literal::neg(v)
                    }
                })
                .collect()
        })
        .collect();
    CnfFormula::new(n, clauses).unwrap()
}
