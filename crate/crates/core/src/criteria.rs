//! Conditions on dual spaces that decide membership in `IS(F)` and `ISP(F)`.
//!
//! Each check returns `Ok(())` or the reason it fails.

use crate::space::{SpaceKind, StructuredSpace};

pub type Criterion = std::result::Result<(), String>;

fn fixpoints(x: &StructuredSpace, op: &str) -> Vec<usize> {
    let t = x.unary(op).expect("kind carries the map");
    (0..x.size()).filter(|&i| t[i] == i).collect()
}

fn bounded(x: &StructuredSpace) -> Criterion {
    if x.is_empty() {
        return Err("dual space is empty".into());
    }
    if x.bottom().is_none() {
        return Err("dual space has no least element".into());
    }
    if x.top().is_none() {
        return Err("dual space has no greatest element".into());
    }
    Ok(())
}

/// `Y` equals the set of minimal points.
fn y_is_min(x: &StructuredSpace) -> Criterion {
    let min = x.minimal();
    for p in 0..x.size() {
        if x.in_subset("Y", p) != min.contains(&p) {
            return Err(if x.in_subset("Y", p) {
                format!("point {} is in Y but not minimal", x.label(p))
            } else {
                format!("point {} is minimal but not in Y", x.label(p))
            });
        }
    }
    Ok(())
}

/// Membership of `A(X)` in `IS(F)`.
pub fn is_criterion(x: &StructuredSpace) -> Criterion {
    match x.kind() {
        SpaceKind::Priestley => bounded(x),
        SpaceKind::Stone => {
            if x.is_empty() {
                Err("dual space is empty".into())
            } else {
                Ok(())
            }
        }
        SpaceKind::Demorgan => {
            bounded(x)?;
            if fixpoints(x, "f").is_empty() {
                return Err("f has no fixpoint".into());
            }
            Ok(())
        }
        SpaceKind::Kleene => {
            if x.top().is_none() {
                return Err("dual space has no greatest element".into());
            }
            y_is_min(x)
        }
    }
}

/// Membership of `A(X)` in `ISP(F)`.
pub fn isp_criterion(x: &StructuredSpace) -> Criterion {
    match x.kind() {
        SpaceKind::Priestley | SpaceKind::Stone => Ok(()),
        SpaceKind::Demorgan => {
            let f = x.unary("f").expect("De Morgan space has f");
            let fix = fixpoints(x, "f");
            for m in x.minimal() {
                if !fix.iter().any(|&z| x.leq(m, z)) {
                    return Err(format!("no f-fixpoint above minimal point {}", x.label(m)));
                }
            }
            for p in 0..x.size() {
                if !(0..x.size()).any(|y| x.leq(y, p) && x.leq(y, f[p])) {
                    return Err(format!("no point below both {} and f({})", x.label(p), x.label(p)));
                }
            }
            Ok(())
        }
        SpaceKind::Kleene => y_is_min(x),
    }
}
