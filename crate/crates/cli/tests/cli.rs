use std::path::{Path, PathBuf};
use std::process::Command;

use mcpnet::gadgets::{formula_net, m_nowin};
use mcpnet::io::{net_from_json, profile_from_json, profile_to_json};
use mcpnet::semantics::dominates;
use mcpnet::voting::{self, VotingConfig};
use mcpnet::{FlipSequence, Outcome};
use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_mcpnet"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let doc = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{stdout:?}: {e}"));
    (out.status.code().unwrap(), doc)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn optimum_of_the_dinner_net() {
    let net = fixture("dinner.json");
    assert_eq!(run(&["optimum", path(&net)]), (0, json!({"answer": "00"})));
    assert_eq!(
        run(&["optimum", path(&net), "--named"]),
        (0, json!({"answer": "Main=m,Wine=r"}))
    );
}

#[test]
fn single_net_queries() {
    let net = fixture("dinner.json");
    let p = path(&net);
    assert_eq!(run(&["dominates", p, "00", "10"]).1["answer"], json!(true));
    assert_eq!(run(&["dominates", p, "10", "00"]).1["answer"], json!(false));
    assert_eq!(
        run(&["--named", "dominates", p, "Main=m,Wine=w", "Main=f,Wine=w"]).1["answer"],
        json!(true)
    );
    assert_eq!(run(&["is-optimal", p, "00"]).1, json!({"answer": true}));
    assert_eq!(run(&["is-optimal", p, "01"]).1, json!({"answer": false}));
    assert_eq!(run(&["incomparable", p, "00", "11"]).1, json!({"answer": false}));
    let (code, doc) = run(&["dominates", p, "00", "10", "--stats"]);
    assert_eq!(code, 0);
    assert!(doc["stats"]["visited"].as_u64().unwrap() >= 1);
    assert!(doc["stats"]["wall_ms"].is_number());
}

#[test]
fn witness_replays_on_the_formula_net() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("fphi.json");
    let (code, doc) = run(&["gadget", "formula-net", "--cnf", path(&fixture("two_clauses.cnf")), "--describe"]);
    assert_eq!(code, 0);
    std::fs::write(&net_path, doc["net"].to_string()).unwrap();
    let alpha = doc["outcomes"]["alpha"].as_str().unwrap().to_string();
    let beta = doc["outcomes"]["beta_bar"].as_str().unwrap().to_string();

    let (code, reply) = run(&["dominates", path(&net_path), &beta, &alpha, "--witness"]);
    assert_eq!(code, 0);
    assert_eq!(reply["answer"], json!(true));

    let net = net_from_json(&std::fs::read_to_string(&net_path).unwrap()).unwrap();
    let w = &reply["witness"];
    let mut cur: Outcome = w["start"].as_str().unwrap().parse().unwrap();
    let mut steps = Vec::new();
    for s in w["steps"].as_array().unwrap() {
        let f = net.feature(s["feature"].as_str().unwrap()).unwrap();
        let to = mcpnet::Value::from_bit(s["to"] == json!(1));
        steps.push(mcpnet::FlipStep {
            feature: f,
            from: cur.get(f),
            to,
        });
        cur.set(f, to);
    }
    let seq = FlipSequence {
        start: alpha.parse().unwrap(),
        end: beta.parse().unwrap(),
        steps,
    };
    assert!(seq.verify(&net));
    let lib = dominates(&net, &seq.end, &seq.start).unwrap();
    assert_eq!(lib.witness.unwrap().len(), seq.len());
}

#[test]
fn voting_answers_match_the_library() {
    let party = fixture("dinner_party.json");
    let profile = profile_from_json(&std::fs::read_to_string(&party).unwrap()).unwrap();
    let cfg = VotingConfig::default();
    let p = path(&party);
    let mr: Outcome = "00".parse().unwrap();
    assert_eq!(
        run(&["majority", "exists-optimum", p]).1,
        json!({"answer": true, "witness": "00"})
    );
    assert_eq!(
        voting::exists_majority_optimum(&profile, &cfg).unwrap(),
        Some(mr.clone())
    );
    assert_eq!(run(&["pareto", "exists-optimum", p]).1, json!({"answer": false}));
    assert_eq!(run(&["pareto", "is-optimal", p, "01"]).1, json!({"answer": true}));
    for a in Outcome::all(2) {
        let bits = a.to_string();
        let cli = run(&["majority", "is-optimal", p, &bits]).1["answer"].as_bool().unwrap();
        assert_eq!(cli, voting::is_majority_optimal(&profile, &a, &cfg).unwrap(), "{a}");
        let cli = run(&["pareto", "is-optimal", p, &bits]).1["answer"].as_bool().unwrap();
        assert_eq!(cli, voting::is_pareto_optimal(&profile, &a, &cfg).unwrap(), "{a}");
    }
    let (code, doc) = run(&["pareto", "dominates", p, "00", "10"]);
    assert_eq!(code, 0);
    assert_eq!(doc["answer"], json!(true));
    assert_eq!(doc["prefers"], json!([0, 1, 2]));
    assert_eq!(
        run(&["--named", "pareto", "exists-optimal", p]).1,
        json!({"answer": true, "witness": "Main=m,Wine=r"})
    );
}

#[test]
fn no_winner_profile() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("m_nowin.json");
    let (code, doc) = run(&["gadget", "m-nowin"]);
    assert_eq!(code, 0);
    assert_eq!(doc, serde_json::from_str::<Value>(&profile_to_json(&m_nowin())).unwrap());
    std::fs::write(&file, doc.to_string()).unwrap();
    assert_eq!(run(&["majority", "exists-optimal", path(&file)]), (0, json!({"answer": false})));
    assert_eq!(run(&["majority", "exists-optimum", path(&file)]), (0, json!({"answer": false})));
    let (_, part) = run(&["majority", "dominates", path(&file), "10", "00"]);
    assert_eq!(part["prefers"], json!([0, 1, 3]));
    assert_eq!(part["opposes"], json!([2]));
    assert_eq!(part["answer"], json!(true));
}

#[test]
fn gadgets_match_the_library() {
    let cnf = fixture("two_clauses.cnf");
    let (code, doc) = run(&["gadget", "formula-net", "--cnf", path(&cnf)]);
    assert_eq!(code, 0);
    let phi = mcpnet::formula::parse_dimacs(&std::fs::read_to_string(&cnf).unwrap()).unwrap();
    let expected = mcpnet::io::net_to_json(&formula_net(&phi).unwrap().net);
    assert_eq!(doc, serde_json::from_str::<Value>(&expected).unwrap());
    assert_eq!(doc["features"].as_array().unwrap().len(), 16);

    let (_, hc) = run(&["gadget", "hc", "-m", "9"]);
    assert_eq!(hc["features"].as_array().unwrap().len(), 9 + 7);
    let (_, d) = run(&["gadget", "direct", "--outcome", "010", "--describe"]);
    assert_eq!(d["outcomes"]["optimum"], json!("010"));
    let (_, imm) = run(&["gadget", "m-imm", "--qbf", path(&fixture("valid.qdimacs"))]);
    assert_eq!(imm["agents"].as_array().unwrap().len(), 3);
    let (_, eml) = run(&["gadget", "m-eml", "--qbf", path(&fixture("valid.qdimacs"))]);
    assert_eq!(eml["agents"].as_array().unwrap().len(), 6);
    let (code, _) = run(&["gadget", "m-ipo"]);
    assert_eq!(code, 2);
}

#[test]
fn oracle_commands() {
    let net = fixture("dinner.json");
    let p = path(&net);
    let (_, g) = run(&["oracle", "graph", p]);
    assert_eq!(g["vertices"], json!(4));
    assert_eq!(g["edges"].as_array().unwrap().len(), 4);
    let (_, c) = run(&["oracle", "closure", p]);
    assert_eq!(c["pairs"].as_array().unwrap().len(), 6);
    assert_eq!(run(&["oracle", "check", p]).1, json!({"answer": true, "checked": 16}));
    let out = Command::new(env!("CARGO_BIN_EXE_mcpnet"))
        .args(["oracle", "graph", p, "--dot"])
        .output()
        .unwrap();
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("\"01\" -> \"00\""));
}

#[test]
fn lemma_verification() {
    for (lemma, input) in [
        ("corollary1", "two_clauses.cnf"),
        ("corollary1", "contradiction.cnf"),
        ("lemma1", "contradiction.cnf"),
        ("corollary2", "contradiction.cnf"),
        ("lemma5", "contradiction.cnf"),
        ("lemma7", "dinner_party.json"),
    ] {
        let (code, doc) = run(&["oracle", "verify", "--lemma", lemma, path(&fixture(input))]);
        assert_eq!(code, 0, "{lemma} {input}: {doc}");
        assert_eq!(doc["answer"], json!(true), "{lemma} {input}: {doc}");
    }
    let (code, doc) = run(&["oracle", "verify", "--lemma", "lemma99", path(&fixture("two_clauses.cnf"))]);
    assert_eq!(code, 2);
    assert_eq!(doc["kind"], json!("invalid-input"));
}

#[test]
fn exit_codes() {
    let (code, doc) = run(&["validate", path(&fixture("cyclic.json"))]);
    assert_eq!(code, 0);
    assert_eq!(doc["answer"], json!(false));
    assert_eq!(doc["violations"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["validate", path(&fixture("dinner.json"))]).1["answer"], json!(true));

    let (code, _) = run(&["optimum", path(&fixture("cyclic.json"))]);
    assert_eq!(code, 2);
    let (code, _) = run(&["dominates", path(&fixture("dinner.json")), "000", "00"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["optimum", "/nonexistent/net.json"]);
    assert_eq!(code, 2);

    let (code, doc) = run(&["--oracle-bound", "1", "oracle", "graph", path(&fixture("dinner.json"))]);
    assert_eq!(code, 3);
    assert_eq!(doc["kind"], json!("resource-limit"));
    let (code, _) = run(&["--search-bound", "1", "majority", "exists-optimal", path(&fixture("dinner_party.json"))]);
    assert_eq!(code, 3);
}
