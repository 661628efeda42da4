//! JSON files for algebras and spaces.
//!
//! Algebras: `{"name", "signature", "size", "elements"?, "ops": {...}}` with
//! exactly the signature's operations. Spaces: `{"kind", "size", "labels"?,
//! "order", "unary", "rels", "subsets"}`. Malformed input is reported with
//! the line (for syntax) or the field path (for content).

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::signature::{Op, Signature};
use crate::space::{SpaceKind, StructuredSpace};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlgebraFile {
    name: String,
    signature: Signature,
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<String>>,
    ops: OpsFile,
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    meet: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    join: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    neg: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    star: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bot: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    top: Option<usize>,
}

fn field_error(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("field `{field}`: {msg}"))
}

fn syntax_error(e: serde_json::Error) -> Error {
    Error::Format(e.to_string())
}

fn check_entry(field: &str, v: usize, size: usize) -> Result<usize> {
    if v < size {
        Ok(v)
    } else {
        Err(field_error(field, format!("{v} is outside the carrier 0..{size}")))
    }
}

fn binary_table(field: &str, rows: &[Vec<usize>], size: usize) -> Result<Vec<usize>> {
    if rows.len() != size {
        return Err(field_error(field, format!("{} rows, expected {size}", rows.len())));
    }
    let mut t = Vec::with_capacity(size * size);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != size {
            return Err(field_error(
                &format!("{field}[{i}]"),
                format!("{} entries, expected {size}", row.len()),
            ));
        }
        for (j, &v) in row.iter().enumerate() {
            t.push(check_entry(&format!("{field}[{i}][{j}]"), v, size)?);
        }
    }
    Ok(t)
}

fn unary_table(field: &str, t: &[usize], size: usize) -> Result<Vec<usize>> {
    if t.len() != size {
        return Err(field_error(field, format!("{} entries, expected {size}", t.len())));
    }
    t.iter()
        .enumerate()
        .map(|(i, &v)| check_entry(&format!("{field}[{i}]"), v, size))
        .collect()
}

pub fn algebra_from_json(text: &str) -> Result<FiniteAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(syntax_error)?;
    let size = file.size;
    if size == 0 {
        return Err(field_error("size", "the carrier must be non-empty"));
    }
    let sig = file.signature;
    let ops = &file.ops;
    let present = [
        (Op::Meet, ops.meet.is_some()),
        (Op::Join, ops.join.is_some()),
        (Op::Neg, ops.neg.is_some()),
        (Op::Star, ops.star.is_some()),
        (Op::Bot, ops.bot.is_some()),
        (Op::Top, ops.top.is_some()),
    ];
    for (op, here) in present {
        let wanted = sig.ops().contains(&op);
        if wanted && !here {
            return Err(field_error(&format!("ops.{}", op.name()), format!("missing; required by `{sig}`")));
        }
        if here && !wanted {
            return Err(field_error(&format!("ops.{}", op.name()), format!("not an operation of `{sig}`")));
        }
    }
    let mut tables: BTreeMap<Op, Vec<usize>> = BTreeMap::new();
    if let Some(rows) = &ops.meet {
        tables.insert(Op::Meet, binary_table("ops.meet", rows, size)?);
    }
    if let Some(rows) = &ops.join {
        tables.insert(Op::Join, binary_table("ops.join", rows, size)?);
    }
    if let Some(t) = &ops.neg {
        tables.insert(Op::Neg, unary_table("ops.neg", t, size)?);
    }
    if let Some(t) = &ops.star {
        tables.insert(Op::Star, unary_table("ops.star", t, size)?);
    }
    if let Some(c) = ops.bot {
        tables.insert(Op::Bot, vec![check_entry("ops.bot", c, size)?]);
    }
    if let Some(c) = ops.top {
        tables.insert(Op::Top, vec![check_entry("ops.top", c, size)?]);
    }
    let alg = FiniteAlgebra::from_fn(file.name, sig, size, |op, args| {
        let t = &tables[&op];
        match args {
            [] => t[0],
            [a] => t[*a],
            [a, b] => t[a * size + b],
            _ => unreachable!(),
        }
    })?;
    match file.elements {
        None => Ok(alg),
        Some(labels) => {
            if labels.len() != size {
                return Err(field_error("elements", format!("{} labels, expected {size}", labels.len())));
            }
            alg.with_labels(labels).map_err(|e| field_error("elements", e))
        }
    }
}

fn default_labels(labels: &[String]) -> bool {
    labels.iter().enumerate().all(|(i, l)| *l == i.to_string())
}

pub fn algebra_to_json(a: &FiniteAlgebra) -> String {
    let mut s = serde_json::to_string_pretty(&algebra_file(a)).expect("algebra serializes");
    s.push('\n');
    s
}

pub fn algebra_value(a: &FiniteAlgebra) -> serde_json::Value {
    serde_json::to_value(algebra_file(a)).expect("algebra serializes")
}

fn algebra_file(a: &FiniteAlgebra) -> AlgebraFile {
    let n = a.size();
    let binary = |op: Op| -> Vec<Vec<usize>> {
        (0..n).map(|x| (0..n).map(|y| a.apply(op, &[x, y])).collect()).collect()
    };
    let unary = |op: Op| -> Vec<usize> { (0..n).map(|x| a.apply(op, &[x])).collect() };
    let mut ops = OpsFile::default();
    for &op in a.signature().ops() {
        match op {
            Op::Meet => ops.meet = Some(binary(op)),
            Op::Join => ops.join = Some(binary(op)),
            Op::Neg => ops.neg = Some(unary(op)),
            Op::Star => ops.star = Some(unary(op)),
            Op::Bot => ops.bot = a.bot(),
            Op::Top => ops.top = a.top(),
        }
    }
    AlgebraFile {
        name: a.name().to_string(),
        signature: a.signature(),
        size: n,
        elements: (!default_labels(a.labels())).then(|| a.labels().to_vec()),
        ops,
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    kind: SpaceKind,
    size: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(default)]
    order: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    unary: BTreeMap<String, Vec<usize>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    rels: BTreeMap<String, Vec<(usize, usize)>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    subsets: BTreeMap<String, Vec<usize>>,
}

pub fn space_from_json(text: &str) -> Result<StructuredSpace> {
    let file: SpaceFile = serde_json::from_str(text).map_err(syntax_error)?;
    let n = file.size;
    let pair_check = |field: &str, pairs: &[(usize, usize)]| -> Result<()> {
        for (k, &(i, j)) in pairs.iter().enumerate() {
            check_entry(&format!("{field}[{k}]"), i.max(j), n)?;
        }
        Ok(())
    };
    pair_check("order", &file.order)?;
    let mut b = StructuredSpace::builder(file.kind, n).order(file.order);
    for (name, t) in file.unary {
        let t = unary_table(&format!("unary.{name}"), &t, n)?;
        b = b.unary(&name, t);
    }
    for (name, pairs) in file.rels {
        pair_check(&format!("rels.{name}"), &pairs)?;
        b = b.relation(&name, pairs);
    }
    for (name, pts) in file.subsets {
        for (k, &p) in pts.iter().enumerate() {
            check_entry(&format!("subsets.{name}[{k}]"), p, n)?;
        }
        b = b.subset(&name, pts);
    }
    if let Some(labels) = file.labels {
        if labels.len() != n {
            return Err(field_error("labels", format!("{} labels, expected {n}", labels.len())));
        }
        b = b.labels(labels);
    }
    b.build()
}

pub fn space_to_json(x: &StructuredSpace) -> String {
    let strict = |pairs: Vec<(usize, usize)>| pairs.into_iter().filter(|(i, j)| i != j).collect();
    let file = SpaceFile {
        kind: x.kind(),
        size: x.size(),
        labels: (!default_labels(x.labels())).then(|| x.labels().to_vec()),
        order: strict(x.order().pairs().collect()),
        unary: x.unary_ops().clone(),
        rels: x.relations().iter().map(|(k, r)| (k.clone(), r.pairs().collect())).collect(),
        subsets: x.subsets().iter().map(|(k, s)| (k.clone(), s.ones().collect())).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("space serializes");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Format(m) => Error::Format(format!("{}: {m}", path.display())),
        other => other,
    }
}

pub fn read_algebra(path: &Path) -> Result<FiniteAlgebra> {
    algebra_from_json(&read(path)?).map_err(|e| with_path(path, e))
}

pub fn read_space(path: &Path) -> Result<StructuredSpace> {
    space_from_json(&read(path)?).map_err(|e| with_path(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{demorgan_d, kleene_space};

    #[test]
    fn algebra_round_trip() {
        let d = demorgan_d();
        let back = algebra_from_json(&algebra_to_json(&d)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn space_round_trip() {
        let k = kleene_space();
        let text = space_to_json(&k);
        assert_eq!(space_to_json(&space_from_json(&text).unwrap()), text);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let bad = r#"{"name":"x","signature":"dl","size":2,"ops":{"meet":[[0,0],[0,1]],"join":[[0,1],[1,7]]}}"#;
        let e = algebra_from_json(bad).unwrap_err().to_string();
        assert!(e.contains("ops.join[1][1]"), "{e}");
        let extra = r#"{"name":"x","signature":"dl","size":1,"ops":{"meet":[[0]],"join":[[0]],"top":0}}"#;
        assert!(algebra_from_json(extra).unwrap_err().to_string().contains("ops.top"));
        let syntax = "{\"name\":\"x\",\n\"size\": }";
        assert!(algebra_from_json(syntax).unwrap_err().to_string().contains("line 2"));
    }
}
