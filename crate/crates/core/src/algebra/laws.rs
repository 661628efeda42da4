use std::fmt;

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::signature::{Op, Signature};

/// A defining law that fails, with the elements that break it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawViolation {
    pub law: &'static str,
    pub elements: Vec<usize>,
}

impl LawViolation {
    pub fn describe(&self, a: &FiniteAlgebra) -> String {
        let els: Vec<&str> = self.elements.iter().map(|&e| a.label(e)).collect();
        format!("{} fails at ({})", self.law, els.join(", "))
    }
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at {:?}", self.law, self.elements)
    }
}

fn find1(n: usize, law: &'static str, ok: impl Fn(usize) -> bool) -> Option<LawViolation> {
    (0..n).find(|&x| !ok(x)).map(|x| LawViolation { law, elements: vec![x] })
}

fn find2(n: usize, law: &'static str, ok: impl Fn(usize, usize) -> bool) -> Option<LawViolation> {
    for x in 0..n {
        for y in 0..n {
            if !ok(x, y) {
                return Some(LawViolation { law, elements: vec![x, y] });
            }
        }
    }
    None
}

fn find3(n: usize, law: &'static str, ok: impl Fn(usize, usize, usize) -> bool) -> Option<LawViolation> {
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !ok(x, y, z) {
                    return Some(LawViolation {
                        law,
                        elements: vec![x, y, z],
                    });
                }
            }
        }
    }
    None
}

fn lattice_laws(a: &FiniteAlgebra) -> Option<LawViolation> {
    let n = a.size();
    find1(n, "meet idempotence", |x| a.meet(x, x) == x)
        .or_else(|| find1(n, "join idempotence", |x| a.join(x, x) == x))
        .or_else(|| find2(n, "meet commutativity", |x, y| a.meet(x, y) == a.meet(y, x)))
        .or_else(|| find2(n, "join commutativity", |x, y| a.join(x, y) == a.join(y, x)))
        .or_else(|| find2(n, "absorption", |x, y| a.meet(x, a.join(x, y)) == x && a.join(x, a.meet(x, y)) == x))
        .or_else(|| {
            find3(n, "meet associativity", |x, y, z| {
                a.meet(x, a.meet(y, z)) == a.meet(a.meet(x, y), z)
            })
        })
        .or_else(|| {
            find3(n, "join associativity", |x, y, z| {
                a.join(x, a.join(y, z)) == a.join(a.join(x, y), z)
            })
        })
        .or_else(|| {
            find3(n, "distributivity", |x, y, z| {
                a.meet(x, a.join(y, z)) == a.join(a.meet(x, y), a.meet(x, z))
            })
        })
}

/// Checks the defining conditions of `variety` on `a`; `Ok(None)` means
/// every law holds.
pub fn validate_variety(variety: Signature, a: &FiniteAlgebra) -> Result<Option<LawViolation>> {
    if a.signature() != variety {
        return Err(Error::SignatureMismatch {
            expected: variety,
            found: a.signature(),
        });
    }
    let n = a.size();
    if let Some(v) = lattice_laws(a) {
        return Ok(Some(v));
    }
    if let (Some(bot), Some(top)) = (a.bot(), a.top()) {
        if let Some(v) = find1(n, "bounds", |x| a.leq(bot, x) && a.leq(x, top)) {
            return Ok(Some(v));
        }
    }
    if a.has(Op::Neg) {
        if let Some(v) = find1(n, "involution", |x| a.neg(a.neg(x)) == x) {
            return Ok(Some(v));
        }
        if let Some(v) = find2(n, "De Morgan law", |x, y| a.neg(a.meet(x, y)) == a.join(a.neg(x), a.neg(y))) {
            return Ok(Some(v));
        }
    }
    if matches!(variety, Signature::Ka | Signature::Kl) {
        if let Some(v) = find2(n, "Kleene condition", |x, y| {
            a.leq(a.meet(x, a.neg(x)), a.join(y, a.neg(y)))
        }) {
            return Ok(Some(v));
        }
    }
    if variety == Signature::St {
        let (bot, top) = (a.bot().unwrap(), a.top().unwrap());
        if let Some(v) = find1(n, "pseudocomplement", |x| {
            let s = a.star(x);
            a.meet(x, s) == bot && (0..n).all(|b| a.meet(x, b) != bot || a.leq(b, s))
        }) {
            return Ok(Some(v));
        }
        if let Some(v) = find1(n, "Stone identity", |x| a.join(a.star(x), a.star(a.star(x))) == top) {
            return Ok(Some(v));
        }
    }
    Ok(None)
}
