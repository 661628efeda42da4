//! The generating algebras and their alter-ego spaces.
//!
//! Element indices are shared between an algebra and its space:
//! `2 = {0,1}`, `S = {0,a,1}`, `D = {0,a,b,1}`, `K = {0,a,1}`.

use crate::algebra::{direct_power, trivial_algebra, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::signature::{Op, Signature};
use crate::space::{SpaceKind, StructuredSpace};

fn labels(ls: &[&str]) -> Vec<String> {
    ls.iter().map(|s| s.to_string()).collect()
}

/// Lattice tables of a chain whose order is the index order.
fn chain_op(op: Op, args: &[usize]) -> Option<usize> {
    match op {
        Op::Meet => Some(args[0].min(args[1])),
        Op::Join => Some(args[0].max(args[1])),
        _ => None,
    }
}

pub fn two() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("2", Signature::Bdl, 2, |op, args| match op {
        Op::Bot => 0,
        Op::Top => 1,
        _ => chain_op(op, args).unwrap(),
    })
    .unwrap()
    .with_labels(labels(&["0", "1"]))
    .unwrap()
}

/// Three-element Stone algebra `0 < a < 1`.
pub fn stone_s() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("S", Signature::St, 3, |op, args| match op {
        Op::Bot => 0,
        Op::Top => 2,
        Op::Star => usize::from(args[0] == 0) * 2,
        _ => chain_op(op, args).unwrap(),
    })
    .unwrap()
    .with_labels(labels(&["0", "a", "1"]))
    .unwrap()
}

/// Four-element De Morgan algebra: `0 < a, b < 1`, negation fixing `a`, `b`.
pub fn demorgan_d() -> FiniteAlgebra {
    // 2x2 lattice with 0 = 00, a = 10, b = 01, 1 = 11 as bit patterns.
    let bits = [0b00, 0b01, 0b10, 0b11];
    let index = |b: usize| bits.iter().position(|&x| x == b).unwrap();
    FiniteAlgebra::from_fn("D", Signature::Dma, 4, |op, args| match op {
        Op::Bot => 0,
        Op::Top => 3,
        Op::Neg => [3, 1, 2, 0][args[0]],
        Op::Meet => index(bits[args[0]] & bits[args[1]]),
        Op::Join => index(bits[args[0]] | bits[args[1]]),
        Op::Star => unreachable!(),
    })
    .unwrap()
    .with_labels(labels(&["0", "a", "b", "1"]))
    .unwrap()
}

/// Three-element Kleene algebra `0 < a < 1` with `~a = a`.
pub fn kleene_k() -> FiniteAlgebra {
    FiniteAlgebra::from_fn("K", Signature::Ka, 3, |op, args| match op {
        Op::Bot => 0,
        Op::Top => 2,
        Op::Neg => 2 - args[0],
        _ => chain_op(op, args).unwrap(),
    })
    .unwrap()
    .with_labels(labels(&["0", "a", "1"]))
    .unwrap()
}

/// Two-element chain as a Priestley space.
pub fn two_space() -> StructuredSpace {
    StructuredSpace::builder(SpaceKind::Priestley, 2)
        .order([(0, 1)])
        .labels(labels(&["0", "1"]))
        .build()
        .unwrap()
}

/// Alter ego of `S`: `1 ≤ a`, `0` isolated, `d` sending each point to the
/// minimal point below it.
pub fn stone_space() -> StructuredSpace {
    StructuredSpace::builder(SpaceKind::Stone, 3)
        .order([(2, 1)])
        .unary("d", vec![0, 2, 2])
        .labels(labels(&["0", "a", "1"]))
        .build()
        .unwrap()
}

/// Alter ego of `D`: `a` below `0` and `1`, both below `b`; `f` swaps `a`, `b`.
pub fn demorgan_space() -> StructuredSpace {
    StructuredSpace::builder(SpaceKind::Demorgan, 4)
        .order([(1, 0), (1, 3), (0, 2), (3, 2)])
        .unary("f", vec![0, 2, 1, 3])
        .labels(labels(&["0", "a", "b", "1"]))
        .build()
        .unwrap()
}

/// Alter ego of `K`: `0, 1 ≤ a`; `~` relates every pair except `0` with `1`;
/// `Y = {0, 1}`.
pub fn kleene_space() -> StructuredSpace {
    let sim = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|&(i, j)| i + j != 2 || i == 1);
    StructuredSpace::builder(SpaceKind::Kleene, 3)
        .order([(0, 1), (2, 1)])
        .relation("sim", sim)
        .subset("Y", [0, 2])
        .labels(labels(&["0", "a", "1"]))
        .build()
        .unwrap()
}

fn natural(name: &str) -> Option<FiniteAlgebra> {
    match name {
        "2" => Some(two()),
        "S" => Some(stone_s()),
        "D" => Some(demorgan_d()),
        "K" => Some(kleene_k()),
        _ => None,
    }
}

/// Reinterprets `a` in `target` when the operations allow it (a reduct, or
/// the same operations under another variety name).
pub fn as_signature(a: &FiniteAlgebra, target: Signature) -> Result<FiniteAlgebra> {
    if a.signature() == target {
        return Ok(a.clone());
    }
    a.reduct(target)
}

/// Built-in algebras by name: `2`, `S`, `D`, `K`, `trivial`, and powers such
/// as `D^2`, read in the signature of `variety`.
pub fn named_algebra(name: &str, variety: Signature) -> Result<FiniteAlgebra> {
    if name == "trivial" {
        return Ok(trivial_algebra(variety));
    }
    let (base, exp) = match name.split_once('^') {
        Some((b, e)) => {
            let e: usize = e
                .parse()
                .map_err(|_| Error::Invalid(format!("bad exponent in algebra name `{name}`")))?;
            (b, e)
        }
        None => (name, 1),
    };
    let alg = natural(base).ok_or_else(|| {
        Error::Invalid(format!("unknown built-in algebra `{base}` (expected 2, S, D, K or trivial)"))
    })?;
    let alg = as_signature(&alg, variety)?;
    if exp == 1 {
        return Ok(alg);
    }
    direct_power(&alg, exp)
}

pub fn is_builtin_name(name: &str) -> bool {
    name == "trivial" || natural(name.split('^').next().unwrap_or("")).is_some()
}
