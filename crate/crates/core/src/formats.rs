//! JSON/CSV input files and atomic output.
//!
//! Players are referred to by label everywhere in files. The labelled DAG
//! form names them explicitly; the compact form `{"n": .., "edges": ..}`
//! labels them by number, starting at `index_base` (default 0).

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::order_model::Weights;
use crate::poset::{PlayerSet, Poset};
use crate::utility::{lineage_utility, LineageUtility};
use crate::valuation::Grouping;

/// A poset together with the player labels used in files.
#[derive(Debug, Clone)]
pub struct LabeledPoset {
    pub poset: Poset,
    pub labels: Vec<String>,
}

impl LabeledPoset {
    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::Parse(format!("unknown player {label:?}")))
    }

    pub fn set_of<'a>(&self, labels: impl IntoIterator<Item = &'a str>) -> Result<PlayerSet> {
        labels.into_iter().map(|l| self.index_of(l)).collect()
    }
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {msg}", path.display()))
}

/// Label as written in a file: strings verbatim, integers in decimal.
fn label_of(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) if n.is_u64() => Some(n.to_string()),
        _ => None,
    }
}

pub fn read_dag(path: &Path) -> Result<LabeledPoset> {
    let doc = read_json(path)?;
    parse_dag(&doc).map_err(|e| match e {
        Error::Parse(m) => parse_err(path, m),
        other => other,
    })
}

pub fn parse_dag(doc: &Value) -> Result<LabeledPoset> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Labeled {
        players: Vec<Value>,
        #[serde(default)]
        edges: Vec<(Value, Value)>,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Compact {
        n: usize,
        #[serde(default)]
        edges: Vec<(usize, usize)>,
        #[serde(default)]
        index_base: usize,
    }

    let labels: Vec<String>;
    let mut edges = Vec::new();
    if doc.get("players").is_some() {
        let d: Labeled =
            serde_json::from_value(doc.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        labels = d
            .players
            .iter()
            .map(|v| label_of(v).ok_or_else(|| Error::Parse(format!("bad player label {v}"))))
            .collect::<Result<_>>()?;
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::Parse(format!("player {dup:?} listed twice")));
        }
        let find = |v: &Value| -> Result<usize> {
            let l = label_of(v).ok_or_else(|| Error::Parse(format!("bad edge endpoint {v}")))?;
            labels
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| Error::Parse(format!("edge mentions unknown player {l:?}")))
        };
        for (a, b) in &d.edges {
            edges.push((find(a)?, find(b)?));
        }
    } else {
        let d: Compact =
            serde_json::from_value(doc.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        labels = (d.index_base..d.index_base + d.n).map(|i| i.to_string()).collect();
        for (a, b) in d.edges {
            let shift = |x: usize| {
                x.checked_sub(d.index_base)
                    .filter(|&i| i < d.n)
                    .ok_or(Error::IndexOutOfRange { index: x, n: d.n })
            };
            edges.push((shift(a)?, shift(b)?));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    let poset = Poset::new(labels.len(), &edges)?;
    Ok(LabeledPoset { poset, labels })
}

/// Weights file: `{"lambda": {label: value}}` or
/// `{"base": b, "exponents": {label: c}}` meaning `λ = b^c`. Players not
/// mentioned get weight 1 (exponent 0).
pub fn read_weights(path: &Path, dag: &LabeledPoset) -> Result<Weights> {
    let doc = read_json(path)?;
    parse_weights(&doc, dag).map_err(|e| match e {
        Error::Parse(m) => parse_err(path, m),
        other => other,
    })
}

pub fn parse_weights(doc: &Value, dag: &LabeledPoset) -> Result<Weights> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct File {
        lambda: Option<BTreeMap<String, f64>>,
        base: Option<f64>,
        exponents: Option<BTreeMap<String, f64>>,
    }
    let f: File = serde_json::from_value(doc.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    match (f.lambda, f.base, f.exponents) {
        (Some(lambda), None, None) => {
            let mut w = vec![1.0; dag.n()];
            for (label, v) in lambda {
                w[dag.index_of(&label)?] = v;
            }
            Weights::new(w)
        }
        (None, Some(base), exponents) => {
            let mut c = vec![0.0; dag.n()];
            for (label, v) in exponents.unwrap_or_default() {
                c[dag.index_of(&label)?] = v;
            }
            Weights::from_base_exponents(base, &c)
        }
        _ => Err(Error::Parse(
            "weights need either \"lambda\" or \"base\" with \"exponents\"".into(),
        )),
    }
}

/// Inline weights `label=value,label=value` applied on top of `base`.
pub fn parse_inline_weights(spec: &str, dag: &LabeledPoset, base: &Weights) -> Result<Weights> {
    let mut w = base.as_slice().to_vec();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (label, value) = item
            .rsplit_once('=')
            .ok_or_else(|| Error::Parse(format!("expected label=value, got {item:?}")))?;
        let v: f64 = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad weight {value:?} for {label:?}")))?;
        w[dag.index_of(label.trim())?] = v;
    }
    Weights::new(w)
}

/// Grouping file: `{label: group, ...}` covering every player.
pub fn read_grouping(path: &Path, dag: &LabeledPoset) -> Result<Grouping> {
    let doc = read_json(path)?;
    let map: BTreeMap<String, Value> =
        serde_json::from_value(doc).map_err(|e| parse_err(path, e))?;
    let mut assignment = BTreeMap::new();
    for (label, group) in map {
        let g = label_of(&group).ok_or_else(|| parse_err(path, format!("bad group {group}")))?;
        assignment.insert(dag.index_of(&label)?, g);
    }
    Grouping::new(dag.n(), &assignment).map_err(|e| match e {
        Error::IncompleteGrouping(i) => {
            let i: usize = i.parse().unwrap_or(0);
            Error::IncompleteGrouping(dag.labels.get(i).cloned().unwrap_or_default())
        }
        other => other,
    })
}

/// Lineage market file:
/// `{"sources": [..], "copies": {copy: source}, "gains": {label: g},
/// "noise_penalty": {label: p}}`.
pub fn read_lineage(path: &Path, dag: &LabeledPoset) -> Result<LineageUtility> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct File {
        sources: Vec<String>,
        #[serde(default)]
        copies: BTreeMap<String, String>,
        gains: BTreeMap<String, f64>,
        #[serde(default)]
        noise_penalty: BTreeMap<String, f64>,
    }
    let f: File = serde_json::from_value(read_json(path)?).map_err(|e| parse_err(path, e))?;
    let sources = dag.set_of(f.sources.iter().map(String::as_str))?;
    let mut copies = BTreeMap::new();
    for (c, s) in &f.copies {
        copies.insert(dag.index_of(c)?, dag.index_of(s)?);
    }
    let by_index = |m: &BTreeMap<String, f64>| -> Result<BTreeMap<usize, f64>> {
        m.iter().map(|(k, &v)| Ok((dag.index_of(k)?, v))).collect()
    };
    lineage_utility(
        dag.n(),
        &sources,
        &copies,
        &by_index(&f.gains)?,
        &by_index(&f.noise_penalty)?,
    )
}

/// Write `contents` to a sibling temporary file, then rename it over `path`.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path
        .file_name()
        .ok_or_else(|| Error::Parse(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn labeled_dag() {
        let d = parse_dag(&json!({
            "players": ["a", "b", "c"],
            "edges": [["a", "b"], ["a", "b"], ["b", "c"]]
        }))
        .unwrap();
        assert!(d.poset.precedes(0, 2));
        assert_eq!(d.index_of("c").unwrap(), 2);
        assert!(parse_dag(&json!({"players": ["a"], "edges": [["a", "z"]]})).is_err());
        assert!(parse_dag(&json!({"players": ["a", "a"]})).is_err());
    }

    #[test]
    fn compact_dag() {
        let d = parse_dag(&json!({"n": 4, "edges": [[1, 2], [3, 2], [3, 4]], "index_base": 1}))
            .unwrap();
        assert_eq!(d.labels, ["1", "2", "3", "4"]);
        assert_eq!(d.poset.count_linear_extensions(100).unwrap(), 5);
        let z = parse_dag(&json!({"n": 3, "edges": [[0, 1]]})).unwrap();
        assert!(z.poset.precedes(0, 1));
        assert!(parse_dag(&json!({"n": 4, "edges": [[1, 2], [3, 4]]})).is_err());
        assert!(matches!(
            parse_dag(&json!({"n": 2, "edges": [[0, 1], [1, 0]]})),
            Err(Error::CycleDetected(_))
        ));
    }

    #[test]
    fn weights_forms() {
        let d = parse_dag(&json!({"players": ["x", "y"]})).unwrap();
        let w = parse_weights(&json!({"lambda": {"y": 3.0}}), &d).unwrap();
        assert_eq!(w.as_slice(), &[1.0, 3.0]);
        let w = parse_weights(&json!({"base": 2.0, "exponents": {"x": 3}}), &d).unwrap();
        assert_eq!(w.as_slice(), &[8.0, 1.0]);
        assert!(parse_weights(&json!({"lambda": {"x": -1.0}}), &d).is_err());
        assert!(parse_weights(&json!({}), &d).is_err());
        let w = parse_inline_weights("x=0.5", &d, &Weights::uniform(2)).unwrap();
        assert_eq!(w.as_slice(), &[0.5, 1.0]);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
