use super::{check_size, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::signature::Signature;

/// The one-element algebra of a signature.
pub fn trivial_algebra(signature: Signature) -> FiniteAlgebra {
    FiniteAlgebra::from_fn("trivial", signature, 1, |_, _| 0).expect("one element always fits")
}

/// Mixed-radix decoding: coordinate 0 is the least significant digit.
pub(crate) fn decode(mut index: usize, radices: &[usize], out: &mut [usize]) {
    for (slot, &r) in out.iter_mut().zip(radices) {
        *slot = index % r;
        index /= r;
    }
}

pub(crate) fn encode(coords: &[usize], radices: &[usize]) -> usize {
    let mut index = 0;
    for (&c, &r) in coords.iter().zip(radices).rev() {
        index = index * r + c;
    }
    index
}

pub(crate) fn tuple_label(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

pub fn direct_product(factors: &[&FiniteAlgebra], signature: Signature) -> Result<FiniteAlgebra> {
    if factors.is_empty() {
        return Ok(trivial_algebra(signature));
    }
    for f in factors {
        if f.signature() != signature {
            return Err(Error::SignatureMismatch {
                expected: signature,
                found: f.signature(),
            });
        }
    }
    if factors.len() == 1 {
        return Ok(factors[0].clone());
    }
    let radices: Vec<usize> = factors.iter().map(|f| f.size()).collect();
    let size = radices
        .iter()
        .try_fold(1u128, |acc, &r| acc.checked_mul(r as u128))
        .unwrap_or(u128::MAX);
    check_size("product", size)?;
    let size = size as usize;
    let k = factors.len();
    let coords: Vec<Vec<usize>> = (0..size)
        .map(|i| {
            let mut c = vec![0; k];
            decode(i, &radices, &mut c);
            c
        })
        .collect();
    let name = factors.iter().map(|f| f.name()).collect::<Vec<_>>().join(" x ");
    let alg = FiniteAlgebra::from_fn(name, signature, size, |op, args| {
        let mut out = vec![0usize; k];
        for (j, f) in factors.iter().enumerate() {
            out[j] = match op.arity() {
                0 => f.apply(op, &[]),
                1 => f.apply(op, &[coords[args[0]][j]]),
                _ => f.apply(op, &[coords[args[0]][j], coords[args[1]][j]]),
            };
        }
        encode(&out, &radices)
    })?;
    let labels = coords
        .iter()
        .map(|c| {
            let parts: Vec<&str> = c.iter().enumerate().map(|(j, &x)| factors[j].label(x)).collect();
            tuple_label(&parts)
        })
        .collect();
    alg.with_labels(labels)
}

pub fn direct_power(a: &FiniteAlgebra, n: usize) -> Result<FiniteAlgebra> {
    let factors = vec![a; n];
    let p = direct_product(&factors, a.signature())?;
    Ok(match n {
        0 => p,
        _ => p.with_name(format!("{}^{}", a.name(), n)),
    })
}
