//! Graphviz rendering of finite spaces: Hasse diagram bottom-up, unary maps
//! as gray labeled edges, relations dashed, subset members double-circled.

use std::fmt::Write;

use crate::space::StructuredSpace;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn emit_dot(x: &StructuredSpace, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(name));
    out.push_str("  rankdir=BT;\n  node [shape=circle];\n");
    for p in 0..x.size() {
        let member: Vec<&str> = x
            .subsets()
            .iter()
            .filter(|(_, s)| s.contains(p))
            .map(|(k, _)| k.as_str())
            .collect();
        let _ = write!(out, "  p{p} [label={}", quote(x.label(p)));
        if !member.is_empty() {
            let _ = write!(out, ", shape=doublecircle, tooltip={}", quote(&member.join(",")));
        }
        out.push_str("];\n");
    }
    for (lo, hi) in x.covers() {
        let _ = writeln!(out, "  p{lo} -> p{hi} [arrowhead=none];");
    }
    for (op, t) in x.unary_ops() {
        for (p, &q) in t.iter().enumerate() {
            let _ = writeln!(
                out,
                "  p{p} -> p{q} [color=gray, fontcolor=gray, label={}, constraint=false];",
                quote(op)
            );
        }
    }
    for (rel, r) in x.relations() {
        for (i, j) in r.pairs().filter(|(i, j)| i < j) {
            let _ = writeln!(
                out,
                "  p{i} -> p{j} [style=dashed, dir=none, label={}, constraint=false];",
                quote(rel)
            );
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::stone_space;
    use crate::space::{space_power, SpaceKind};

    #[test]
    fn stone_alter_ego_shape() {
        let dot = emit_dot(&stone_space(), "S~");
        assert_eq!(dot.matches("[label=").count(), 3);
        assert_eq!(dot.matches("arrowhead=none").count(), 1);
        assert_eq!(dot.matches("label=\"d\"").count(), 3);
        assert_eq!(dot, emit_dot(&stone_space(), "S~"));
    }

    #[test]
    fn one_point_space() {
        let x = StructuredSpace::builder(SpaceKind::Priestley, 1).build().unwrap();
        let dot = emit_dot(&x, "pt");
        assert_eq!(dot.matches("->").count(), 0);
        assert_eq!(dot.matches("[label=").count(), 1);
        let p0 = space_power(&crate::generators::two_space(), 0).unwrap();
        assert_eq!(emit_dot(&p0, "pt").matches("[label=").count(), 1);
    }
}
