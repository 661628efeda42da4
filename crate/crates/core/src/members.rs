//! Finite members of a profile's quasivariety, as subalgebras of powers of
//! the generator.

use std::collections::HashSet;

use crate::algebra::{direct_power, is_isomorphic, subuniverse, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::profile::VarietyProfile;

/// Most subuniverses visited per power before giving up.
pub const MAX_SUBUNIVERSES: usize = 200_000;

/// Subuniverses of `a` with at most `max_size` elements, in discovery order.
fn small_subuniverses(a: &FiniteAlgebra, max_size: usize) -> Result<Vec<Vec<usize>>> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut push = |s: Vec<usize>, out: &mut Vec<Vec<usize>>| -> Result<()> {
        if !s.is_empty() && s.len() <= max_size && seen.insert(s.clone()) {
            if seen.len() > MAX_SUBUNIVERSES {
                return Err(Error::budget("subuniverse enumeration", seen.len() as u128, MAX_SUBUNIVERSES as u128));
            }
            out.push(s);
        }
        Ok(())
    };
    let base = subuniverse(a, []);
    if base.is_empty() {
        for x in 0..a.size() {
            push(subuniverse(a, [x]), &mut out)?;
        }
    } else {
        push(base, &mut out)?;
    }
    let mut i = 0;
    while i < out.len() {
        let s = out[i].clone();
        let mut inside = vec![false; a.size()];
        for &x in &s {
            inside[x] = true;
        }
        for x in 0..a.size() {
            if !inside[x] {
                let t = subuniverse(a, s.iter().copied().chain([x]));
                push(t, &mut out)?;
            }
        }
        i += 1;
    }
    Ok(out)
}

/// Subalgebras of `M^k` for `k ≤ max_power` with at most `max_size`
/// elements, one per isomorphism type, ordered by size and then by
/// discovery (lower powers first). `M^0` is the trivial algebra.
pub fn enumerate_members(p: &VarietyProfile, max_power: usize, max_size: usize) -> Result<Vec<FiniteAlgebra>> {
    if max_size == 0 {
        return Err(Error::Invalid("max_size must be positive".into()));
    }
    let m = &p.generator;
    let mut found: Vec<FiniteAlgebra> = Vec::new();
    for k in 0..=max_power {
        let power = direct_power(m, k)?;
        let power = match k {
            0 => power.with_name("trivial"),
            1 => power.with_name(m.name()),
            _ => power,
        };
        for s in small_subuniverses(&power, max_size)? {
            let (mut sub, _) = crate::algebra::subalgebra_generated(&power, &s)?;
            if s.len() < power.size() {
                let labels: Vec<&str> = s.iter().map(|&x| power.label(x)).collect();
                sub = sub.with_name(format!("{}{{{}}}", power.name(), labels.join(",")));
            }
            if !found.iter().any(|f| f.size() == sub.size() && is_isomorphic(f, &sub).is_some()) {
                found.push(sub);
            }
        }
    }
    found.sort_by_key(|a| a.size());
    Ok(found)
}
