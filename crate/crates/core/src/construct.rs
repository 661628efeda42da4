//! Explicit surjections `M~^n ↠ X` for spaces meeting the `IS(F)` criterion.
//!
//! Every map built here is checked against the space structure before it is
//! returned.

use crate::criteria::is_criterion;
use crate::error::{Error, Result};
use crate::profile::VarietyProfile;
use crate::space::{is_space_morphism, space_power, SpaceKind, SpaceMorphism, StructuredSpace};

/// A surjective morphism from the `n`-th power of the alter ego.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cover {
    pub n: usize,
    pub map: SpaceMorphism,
}

fn ceil_log2(k: usize) -> usize {
    let mut n = 0;
    while (1usize << n) < k {
        n += 1;
    }
    n
}

fn middle_points(x: &StructuredSpace, s: usize, t: usize) -> Vec<usize> {
    (0..x.size()).filter(|&p| p != s && p != t).collect()
}

/// Maximal chains from the top down to a minimal point covering every point.
fn chain_cover(x: &StructuredSpace, top: usize) -> Vec<Vec<usize>> {
    let covers = x.covers();
    let mut covered = vec![false; x.size()];
    let mut chains = Vec::new();
    for p in 0..x.size() {
        if covered[p] {
            continue;
        }
        let mut up = vec![p];
        while *up.last().unwrap() != top {
            let cur = *up.last().unwrap();
            let next = covers.iter().find(|&&(lo, _)| lo == cur).map(|&(_, hi)| hi).unwrap();
            up.push(next);
        }
        up.reverse();
        loop {
            let cur = *up.last().unwrap();
            match covers.iter().find(|&&(_, hi)| hi == cur) {
                Some(&(lo, _)) => up.push(lo),
                None => break,
            }
        }
        for &q in &up {
            covered[q] = true;
        }
        chains.push(up);
    }
    chains
}

/// Exponent of the construction for `x`, or `None` when `x` fails the
/// `IS(F)` criterion.
pub fn cover_dimension(x: &StructuredSpace) -> Option<usize> {
    is_criterion(x).ok()?;
    Some(match x.kind() {
        SpaceKind::Priestley => {
            let (s, t) = (x.bottom().unwrap(), x.top().unwrap());
            match middle_points(x, s, t).len() {
                0 => usize::from(s != t),
                m => m.max(2),
            }
        }
        SpaceKind::Stone => ceil_log2(x.size() + 1),
        SpaceKind::Demorgan => x.size() - 1,
        SpaceKind::Kleene => {
            let chains = chain_cover(x, x.top().unwrap());
            let depth = chains.iter().map(|c| c.len()).max().unwrap();
            ceil_log2(chains.len()) + depth - 1
        }
    })
}

fn digits(mut p: usize, base: usize, n: usize) -> Vec<usize> {
    (0..n)
        .map(|_| {
            let d = p % base;
            p /= base;
            d
        })
        .collect()
}

fn priestley_map(x: &StructuredSpace, n: usize, point: &[usize]) -> usize {
    let (s, t) = (x.bottom().unwrap(), x.top().unwrap());
    let mid = middle_points(x, s, t);
    let ones: Vec<usize> = (0..n).filter(|&c| point[c] == 1).collect();
    match ones.len() {
        0 => s,
        1 if !mid.is_empty() => mid[ones[0].min(mid.len() - 1)],
        _ => t,
    }
}

/// Alter-ego points: 0, a, 1 with `1 ≤ a`. Maximal points of the power are
/// the words over {0, a}; the all-zero word is reserved for a `d`-fixed point.
fn stone_map(x: &StructuredSpace, point: &[usize]) -> usize {
    let d = x.unary("d").unwrap();
    let mask: usize = point.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, _)| 1 << i).sum();
    let below_max = point.contains(&2);
    if mask >= 1 && mask <= x.size() {
        let target = mask - 1;
        if below_max {
            d[target]
        } else {
            target
        }
    } else {
        d[0]
    }
}

/// Alter-ego points: 0, a, b, 1 with `a` least and `b` greatest. Points are
/// sorted by the balance of `a` against `b` coordinates; balanced points
/// encode the middle of `x`.
fn demorgan_map(x: &StructuredSpace, dim: usize, point: &[usize]) -> usize {
    let f = x.unary("f").unwrap();
    let (u, v) = (x.bottom().unwrap(), x.top().unwrap());
    if dim == 0 {
        return u;
    }
    let na = point.iter().filter(|&&c| c == 1).count();
    let nb = point.iter().filter(|&&c| c == 2).count();
    if na > nb {
        return u;
    }
    if na < nb {
        return v;
    }
    let mid = middle_points(x, u, v);
    let x0 = *mid.iter().find(|&&p| f[p] == p).unwrap();
    let rest: Vec<usize> = mid.iter().copied().filter(|&p| p != x0).collect();
    let k = dim - 2;
    let head = &point[..k];
    let unit = head.iter().filter(|&&c| c == 3).count() == 1 && head.iter().all(|&c| c == 0 || c == 3);
    if unit {
        let i = head.iter().position(|&c| c == 3).unwrap();
        match (point[k], point[k + 1]) {
            (1, 2) => return rest[i],
            (2, 1) => return f[rest[i]],
            _ => {}
        }
    }
    x0
}

/// Alter-ego points: 0, a, 1 with `0, 1 ≤ a`. The word before the first
/// `a` is a node of a binary tree; the first `d` bits pick a chain and the
/// remaining depth walks down it.
fn kleene_map(x: &StructuredSpace, n: usize, point: &[usize], chains: &[Vec<usize>]) -> usize {
    let top = x.top().unwrap();
    let d = ceil_log2(chains.len());
    let depth = point.iter().position(|&c| c == 1).unwrap_or(n);
    if depth < d {
        return top;
    }
    let bits: Vec<usize> = point[..depth].iter().map(|&c| usize::from(c == 2)).collect();
    let branch = bits[..d].iter().fold(0, |acc, &b| acc * 2 + b).min(chains.len() - 1);
    let chain = &chains[branch];
    if bits[d..].iter().all(|&b| b == 0) {
        chain[(depth - d).min(chain.len() - 1)]
    } else {
        *chain.last().unwrap()
    }
}

/// The explicit cover of `x`, or `None` when `x` fails the criterion.
pub fn construct_cover(p: &VarietyProfile, x: &StructuredSpace) -> Result<Option<Cover>> {
    let Some(n) = cover_dimension(x) else {
        return Ok(None);
    };
    let alter = &p.space;
    let source = space_power(alter, n)?;
    let m = alter.size();
    let chains = if x.kind() == SpaceKind::Kleene {
        chain_cover(x, x.top().unwrap())
    } else {
        Vec::new()
    };
    let map: Vec<usize> = (0..source.size())
        .map(|i| {
            let point = digits(i, m, n);
            match x.kind() {
                SpaceKind::Priestley => priestley_map(x, n, &point),
                SpaceKind::Stone => stone_map(x, &point),
                SpaceKind::Demorgan => demorgan_map(x, n, &point),
                SpaceKind::Kleene => kleene_map(x, n, &point, &chains),
            }
        })
        .collect();
    let map = SpaceMorphism::new(map);
    if !is_space_morphism(&source, x, &map.map) || !map.is_surjective(x.size()) {
        return Err(Error::Invariant(format!(
            "explicit cover of a {} space with {} points is not a surjective morphism",
            x.kind(),
            x.size()
        )));
    }
    Ok(Some(Cover { n, map }))
}
