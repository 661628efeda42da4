use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::signature::Op;

/// Adjoins a fresh bottom (index 0) and top (index size+1); old element `i`
/// becomes `i+1`. Negation, when present, swaps the new bounds.
pub fn add_bounds(a: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let sig = a.signature();
    let target = sig
        .bounded()
        .ok_or_else(|| Error::Invalid(format!("add_bounds needs an unbounded signature, got `{sig}`")))?;
    let n = a.size();
    let (bot, top) = (0, n + 1);
    let alg = FiniteAlgebra::from_fn(format!("bar({})", a.name()), target, n + 2, |op, args| match op {
        Op::Bot => bot,
        Op::Top => top,
        Op::Neg => match args[0] {
            x if x == bot => top,
            x if x == top => bot,
            x => a.neg(x - 1) + 1,
        },
        Op::Meet => match (args[0], args[1]) {
            (x, y) if x == bot || y == bot => bot,
            (x, y) if x == top => y,
            (x, y) if y == top => x,
            (x, y) => a.meet(x - 1, y - 1) + 1,
        },
        Op::Join => match (args[0], args[1]) {
            (x, y) if x == top || y == top => top,
            (x, y) if x == bot => y,
            (x, y) if y == bot => x,
            (x, y) => a.join(x - 1, y - 1) + 1,
        },
        Op::Star => unreachable!("no unbounded signature has star"),
    })?;
    let mut labels = Vec::with_capacity(n + 2);
    labels.push("bot".to_string());
    labels.extend(a.labels().iter().cloned());
    labels.push("top".to_string());
    alg.with_labels(labels)
}

/// Inverse of [`add_bounds`]: drops the constants from a bounded algebra
/// whose other elements form a subalgebra of the unbounded reduct.
pub fn remove_bounds(a: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let sig = a.signature();
    let target = sig
        .unbounded()
        .ok_or_else(|| Error::Invalid(format!("remove_bounds needs `bdl`, `dma` or `ka`, got `{sig}`")))?;
    let (bot, top) = (a.bot().unwrap(), a.top().unwrap());
    if bot == top || a.size() < 3 {
        return Err(Error::Invalid("removing the bounds would leave no elements".into()));
    }
    let keep: Vec<usize> = (0..a.size()).filter(|&x| x != bot && x != top).collect();
    let mut index = vec![usize::MAX; a.size()];
    for (i, &k) in keep.iter().enumerate() {
        index[k] = i;
    }
    for &x in &keep {
        if a.has(Op::Neg) && index[a.neg(x)] == usize::MAX {
            return Err(Error::Invalid(format!("negation of {} is a bound", a.label(x))));
        }
        for &y in &keep {
            if index[a.meet(x, y)] == usize::MAX {
                return Err(Error::Invalid(format!(
                    "the bottom is a meet of {} and {}",
                    a.label(x),
                    a.label(y)
                )));
            }
            if index[a.join(x, y)] == usize::MAX {
                return Err(Error::Invalid(format!(
                    "the top is a join of {} and {}",
                    a.label(x),
                    a.label(y)
                )));
            }
        }
    }
    let name = a
        .name()
        .strip_prefix("bar(")
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(a.name())
        .to_string();
    let alg = FiniteAlgebra::from_fn(name, target, keep.len(), |op, args| {
        let orig: Vec<usize> = args.iter().map(|&x| keep[x]).collect();
        index[a.apply(op, &orig)]
    })?;
    alg.with_labels(keep.iter().map(|&k| a.label(k).to_string()).collect())
}
