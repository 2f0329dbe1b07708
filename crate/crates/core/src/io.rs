//! JSON encoding of nets and profiles, and named outcome syntax.
//!
//! ```json
//! {"features":[
//!   {"name":"Main","parents":[],"cpt":[{"cond":[],"prefer":0}]},
//!   {"name":"Wine","parents":["Main"],"cpt":[{"cond":[0],"prefer":0},{"cond":[1],"prefer":1}]}
//! ]}
//! ```
//!
//! A feature may carry `"values":["m","f"]`, display labels for its plain
//! and overlined values, used by the named outcome syntax `Main=m,Wine=r`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_net, CpNet, CpTable, FeatureId, McpNet, Outcome, Value, MAX_PARENTS};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetDoc {
    features: Vec<FeatureDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FeatureDoc {
    name: String,
    #[serde(default)]
    parents: Vec<String>,
    cpt: Vec<RowDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    values: Option<[String; 2]>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RowDoc {
    cond: Vec<u8>,
    prefer: u8,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDoc {
    agents: Vec<NetDoc>,
}

fn bit(x: u8) -> Result<Value> {
    match x {
        0 => Ok(Value::Plain),
        1 => Ok(Value::Overlined),
        other => Err(Error::Parse(format!("value must be 0 or 1, found {other}"))),
    }
}

fn net_from_doc(doc: NetDoc) -> Result<CpNet> {
    let index: HashMap<&str, usize> = doc
        .features
        .iter()
        .enumerate()
        .map(|(i, f)| (f.name.as_str(), i))
        .collect();
    let mut names = Vec::with_capacity(doc.features.len());
    let mut tables = Vec::with_capacity(doc.features.len());
    let mut labels = Vec::with_capacity(doc.features.len());
    for f in &doc.features {
        let parents = f
            .parents
            .iter()
            .map(|p| {
                index
                    .get(p.as_str())
                    .map(|&i| FeatureId(i))
                    .ok_or_else(|| Error::UnknownFeature(p.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        let k = parents.len();
        let mut present: Vec<(usize, Value)> = Vec::with_capacity(f.cpt.len());
        for row in &f.cpt {
            if row.cond.len() != k {
                return Err(Error::Parse(format!(
                    "`{}`: condition {:?} has {} values, feature has {k} parents",
                    f.name,
                    row.cond,
                    row.cond.len()
                )));
            }
            let mut idx = 0usize;
            for (j, &c) in row.cond.iter().enumerate() {
                if bit(c)?.bit() && k <= MAX_PARENTS {
                    idx |= 1 << j;
                }
            }
            if k <= MAX_PARENTS && present.iter().any(|(i, _)| *i == idx) {
                return Err(Error::Parse(format!(
                    "`{}`: condition {:?} listed twice",
                    f.name, row.cond
                )));
            }
            present.push((idx, bit(row.prefer)?));
        }
        let rows = if k <= MAX_PARENTS && present.len() == 1 << k {
            let mut rows = vec![Value::Plain; 1 << k];
            for (i, v) in present {
                rows[i] = v;
            }
            rows
        } else {
            // Left short so validation reports the table as incomplete.
            present.into_iter().map(|(_, v)| v).collect()
        };
        names.push(f.name.clone());
        tables.push(CpTable::new(parents, rows));
        labels.push(f.values.clone());
    }
    let mut net = CpNet::from_parts(names, tables);
    for (i, l) in labels.into_iter().enumerate() {
        if let Some(l) = l {
            if l[0] == l[1] {
                return Err(Error::Parse(format!(
                    "`{}` uses label `{}` for both values",
                    net.name(FeatureId(i)),
                    l[0]
                )));
            }
            net = net.with_labels(FeatureId(i), l);
        }
    }
    Ok(net)
}

fn doc_from_net(net: &CpNet) -> NetDoc {
    let features = net
        .features()
        .map(|f| {
            let t = net.table(f);
            let k = t.parents().len();
            let cpt = t
                .rows()
                .iter()
                .enumerate()
                .map(|(r, v)| RowDoc {
                    cond: (0..k).map(|j| ((r >> j) & 1) as u8).collect(),
                    prefer: u8::from(v.bit()),
                })
                .collect();
            FeatureDoc {
                name: net.name(f).to_string(),
                parents: t.parents().iter().map(|p| net.name(*p).to_string()).collect(),
                cpt,
                values: net.labels(f).cloned(),
            }
        })
        .collect();
    NetDoc { features }
}

/// Parses a net without running [`validate_net`]; only syntax and name
/// resolution errors are reported.
pub fn net_from_json_unchecked(text: &str) -> Result<CpNet> {
    net_from_doc(serde_json::from_str(text)?)
}

/// Parses and validates a net.
pub fn net_from_json(text: &str) -> Result<CpNet> {
    let net = net_from_json_unchecked(text)?;
    let report = validate_net(&net);
    if report.is_ok() {
        Ok(net)
    } else {
        Err(Error::InvalidNet(report))
    }
}

pub fn net_to_json(net: &CpNet) -> String {
    serde_json::to_string(&doc_from_net(net)).expect("net documents always serialize")
}

pub fn net_to_json_pretty(net: &CpNet) -> String {
    serde_json::to_string_pretty(&doc_from_net(net)).expect("net documents always serialize")
}

/// Parses and validates a profile.
pub fn profile_from_json(text: &str) -> Result<McpNet> {
    let doc: ProfileDoc = serde_json::from_str(text)?;
    let agents = doc
        .agents
        .into_iter()
        .map(net_from_doc)
        .collect::<Result<Vec<_>>>()?;
    McpNet::new(agents)
}

pub fn profile_to_json(profile: &McpNet) -> String {
    let doc = ProfileDoc {
        agents: profile.agents().iter().map(doc_from_net).collect(),
    };
    serde_json::to_string(&doc).expect("profile documents always serialize")
}

/// Parses `Name=value,...` where each value is a label from the feature's
/// `values` pair or a literal `0`/`1`. Every feature must appear once.
pub fn parse_named_outcome(net: &CpNet, text: &str) -> Result<Outcome> {
    let mut assigned: Vec<Option<Value>> = vec![None; net.len()];
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, val) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("expected `name=value`, found `{part}`")))?;
        let (name, val) = (name.trim(), val.trim());
        let f = net
            .feature(name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))?;
        let value = match (val, net.labels(f)) {
            ("0", _) => Value::Plain,
            ("1", _) => Value::Overlined,
            (v, Some(l)) if v == l[0] => Value::Plain,
            (v, Some(l)) if v == l[1] => Value::Overlined,
            (v, _) => {
                return Err(Error::Parse(format!("`{v}` is not a value of `{name}`")));
            }
        };
        if assigned[f.0].replace(value).is_some() {
            return Err(Error::Parse(format!("`{name}` assigned twice")));
        }
    }
    let values = assigned
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::Parse(format!("`{}` is not assigned", net.name(FeatureId(i)))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Outcome::from_values(&values))
}

/// Inverse of [`parse_named_outcome`], using labels where the net has them.
pub fn format_named_outcome(net: &CpNet, outcome: &Outcome) -> String {
    net.features()
        .map(|f| {
            let v = outcome.get(f);
            let shown = match net.labels(f) {
                Some(l) => l[usize::from(v.bit())].clone(),
                None => v.as_char().to_string(),
            };
            format!("{}={shown}", net.name(f))
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// Parses a bitstring outcome and checks its length against `len`.
pub fn parse_outcome(text: &str, len: usize) -> Result<Outcome> {
    let o: Outcome = text.trim().parse()?;
    if o.len() != len {
        return Err(Error::DimensionMismatch {
            expected: len,
            found: o.len(),
        });
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Violation;

    const DINNER: &str = r#"{"features":[{"name":"Main","parents":[],"cpt":[{"cond":[],"prefer":0}],"values":["m","f"]},{"name":"Wine","parents":["Main"],"cpt":[{"cond":[0],"prefer":0},{"cond":[1],"prefer":1}],"values":["r","w"]}]}"#;

    #[test]
    fn dinner_round_trip() {
        let net = net_from_json(DINNER).unwrap();
        assert_eq!(net.len(), 2);
        assert_eq!(net_from_json(&net_to_json(&net)).unwrap(), net);
        assert_eq!(net_to_json(&net), DINNER);
    }

    #[test]
    fn rows_may_come_in_any_order() {
        let text = r#"{"features":[{"name":"A","cpt":[{"cond":[],"prefer":1}]},{"name":"B","parents":["A"],"cpt":[{"cond":[1],"prefer":0},{"cond":[0],"prefer":1}]}]}"#;
        let net = net_from_json(text).unwrap();
        assert_eq!(net.table(FeatureId(1)).rows(), &[Value::Overlined, Value::Plain]);
    }

    #[test]
    fn structural_problems() {
        let missing_row = r#"{"features":[{"name":"Main","parents":[],"cpt":[{"cond":[],"prefer":0}]},{"name":"Wine","parents":["Main"],"cpt":[{"cond":[0],"prefer":0}]}]}"#;
        match net_from_json(missing_row) {
            Err(Error::InvalidNet(r)) => assert_eq!(
                r.violations,
                vec![Violation::IncompleteTable {
                    feature: "Wine".into(),
                    expected: 2,
                    found: 1
                }]
            ),
            other => panic!("unexpected {other:?}"),
        }
        let unknown = r#"{"features":[{"name":"A","parents":["Z"],"cpt":[]}]}"#;
        assert!(matches!(net_from_json(unknown), Err(Error::UnknownFeature(_))));
        let bad_value = r#"{"features":[{"name":"A","cpt":[{"cond":[],"prefer":2}]}]}"#;
        assert!(matches!(net_from_json(bad_value), Err(Error::Parse(_))));
        assert!(matches!(net_from_json("{"), Err(Error::Json(_))));
    }

    #[test]
    fn named_outcomes() {
        let net = net_from_json(DINNER).unwrap();
        let o = parse_named_outcome(&net, "Main=f,Wine=r").unwrap();
        assert_eq!(o.to_string(), "10");
        assert_eq!(parse_named_outcome(&net, "Wine=1, Main=0").unwrap().to_string(), "01");
        assert_eq!(format_named_outcome(&net, &o), "Main=f,Wine=r");
        assert!(parse_named_outcome(&net, "Main=f").is_err());
        assert!(parse_named_outcome(&net, "Main=f,Main=m,Wine=r").is_err());
        assert!(parse_named_outcome(&net, "Main=x,Wine=r").is_err());
        assert!(parse_named_outcome(&net, "Dessert=1").is_err());
    }

    #[test]
    fn profile_round_trip() {
        let text = format!(r#"{{"agents":[{DINNER},{DINNER}]}}"#);
        let p = profile_from_json(&text).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(profile_from_json(&profile_to_json(&p)).unwrap(), p);
        assert!(profile_from_json(r#"{"agents":[]}"#).is_err());
    }
}
