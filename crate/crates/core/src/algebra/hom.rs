use serde::{Deserialize, Serialize};

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::signature::Op;

/// A map between carriers, stored as an index table. Whether it preserves
/// any structure is checked by [`is_homomorphism`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Homomorphism {
    pub map: Vec<usize>,
}

impl Homomorphism {
    pub fn new(map: Vec<usize>) -> Self {
        Homomorphism { map }
    }

    pub fn identity(n: usize) -> Self {
        Homomorphism { map: (0..n).collect() }
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.map.iter().all(|v| seen.insert(*v))
    }

    pub fn is_surjective(&self, target_size: usize) -> bool {
        let mut hit = vec![false; target_size];
        for &v in &self.map {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

/// `g ∘ f`.
pub fn compose(g: &Homomorphism, f: &Homomorphism) -> Homomorphism {
    Homomorphism {
        map: f.map.iter().map(|&x| g.map[x]).collect(),
    }
}

pub fn is_homomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[usize]) -> bool {
    if a.signature() != b.signature() || map.len() != a.size() || map.iter().any(|&v| v >= b.size()) {
        return false;
    }
    let n = a.size();
    for &op in a.signature().ops() {
        let ok = match op.arity() {
            0 => map[a.apply(op, &[])] == b.apply(op, &[]),
            1 => (0..n).all(|x| map[a.apply(op, &[x])] == b.apply(op, &[map[x]])),
            _ => (0..n).all(|x| (0..n).all(|y| map[a.apply(op, &[x, y])] == b.apply(op, &[map[x], map[y]]))),
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Least subuniverse containing `seed` and the constants, in ascending order.
pub fn subuniverse(a: &FiniteAlgebra, seed: impl IntoIterator<Item = usize>) -> Vec<usize> {
    let mut inside = vec![false; a.size()];
    let mut members = Vec::new();
    let push = |x: usize, inside: &mut Vec<bool>, members: &mut Vec<usize>| {
        if !inside[x] {
            inside[x] = true;
            members.push(x);
        }
    };
    for c in [a.bot(), a.top()].into_iter().flatten() {
        push(c, &mut inside, &mut members);
    }
    for x in seed {
        push(x, &mut inside, &mut members);
    }
    let mut i = 0;
    while i < members.len() {
        let x = members[i];
        if a.has(Op::Neg) {
            push(a.neg(x), &mut inside, &mut members);
        }
        if a.has(Op::Star) {
            push(a.star(x), &mut inside, &mut members);
        }
        for j in 0..=i {
            let y = members[j];
            for v in [a.meet(x, y), a.meet(y, x), a.join(x, y), a.join(y, x)] {
                push(v, &mut inside, &mut members);
            }
        }
        i += 1;
    }
    members.sort_unstable();
    members
}

/// Subalgebra generated by `seed`, re-indexed in ascending order of the
/// original indices, with its inclusion map.
pub fn subalgebra_generated(a: &FiniteAlgebra, seed: &[usize]) -> Result<(FiniteAlgebra, Homomorphism)> {
    if let Some(&bad) = seed.iter().find(|&&s| s >= a.size()) {
        return Err(Error::Invalid(format!("seed element {bad} outside carrier of size {}", a.size())));
    }
    let members = subuniverse(a, seed.iter().copied());
    if members.is_empty() {
        return Err(Error::Invalid("the generated subuniverse is empty".into()));
    }
    Ok(restrict(a, &members))
}

/// The subalgebra on a subuniverse given in ascending order.
pub(crate) fn restrict(a: &FiniteAlgebra, members: &[usize]) -> (FiniteAlgebra, Homomorphism) {
    let mut index = vec![usize::MAX; a.size()];
    for (i, &m) in members.iter().enumerate() {
        index[m] = i;
    }
    let sub = FiniteAlgebra::from_fn(a.name().to_string(), a.signature(), members.len(), |op, args| {
        let orig: Vec<usize> = args.iter().map(|&x| members[x]).collect();
        index[a.apply(op, &orig)]
    })
    .expect("subuniverse is closed");
    let sub = sub
        .with_labels(members.iter().map(|&m| a.label(m).to_string()).collect())
        .expect("label count matches");
    (sub, Homomorphism::new(members.to_vec()))
}

/// A generating set built greedily: repeatedly add the least element not yet
/// generated.
pub fn generating_set(a: &FiniteAlgebra) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut inside = vec![false; a.size()];
    for m in subuniverse(a, []) {
        inside[m] = true;
    }
    while let Some(x) = inside.iter().position(|&b| !b) {
        gens.push(x);
        for m in subuniverse(a, gens.iter().copied()) {
            inside[m] = true;
        }
    }
    gens
}

const NONE: usize = usize::MAX;

/// Partial map closed under the operations of its domain. Extending it by
/// one generator image propagates all forced values.
struct Extension<'a> {
    a: &'a FiniteAlgebra,
    b: &'a FiniteAlgebra,
    img: Vec<usize>,
    dom: Vec<usize>,
    processed: usize,
    injective: Option<(Vec<usize>, &'a [u64], &'a [u64])>,
}

impl<'a> Extension<'a> {
    fn assign(&mut self, x: usize, v: usize) -> bool {
        if self.img[x] != NONE {
            return self.img[x] == v;
        }
        if let Some((pre, inv_a, inv_b)) = &mut self.injective {
            if pre[v] != NONE || inv_a[x] != inv_b[v] {
                return false;
            }
            pre[v] = x;
        }
        self.img[x] = v;
        self.dom.push(x);
        true
    }

    fn close(&mut self) -> bool {
        let (a, b) = (self.a, self.b);
        while self.processed < self.dom.len() {
            let i = self.processed;
            self.processed += 1;
            let x = self.dom[i];
            let ix = self.img[x];
            if a.has(Op::Neg) && !self.assign(a.neg(x), b.neg(ix)) {
                return false;
            }
            if a.has(Op::Star) && !self.assign(a.star(x), b.star(ix)) {
                return false;
            }
            for j in 0..=i {
                let y = self.dom[j];
                let iy = self.img[y];
                if !(self.assign(a.meet(x, y), b.meet(ix, iy))
                    && self.assign(a.meet(y, x), b.meet(iy, ix))
                    && self.assign(a.join(x, y), b.join(ix, iy))
                    && self.assign(a.join(y, x), b.join(iy, ix)))
                {
                    return false;
                }
            }
        }
        true
    }

    fn rollback(&mut self, len: usize) {
        for &x in &self.dom[len..] {
            if let Some((pre, _, _)) = &mut self.injective {
                pre[self.img[x]] = NONE;
            }
            self.img[x] = NONE;
        }
        self.dom.truncate(len);
        self.processed = len;
    }

    fn start(&mut self) -> bool {
        let (a, b) = (self.a, self.b);
        for op in [Op::Bot, Op::Top] {
            if a.has(op) && !self.assign(a.apply(op, &[]), b.apply(op, &[])) {
                return false;
            }
        }
        self.close()
    }

    /// Visits every total extension; the visitor returns `false` to stop.
    fn search(&mut self, gens: &[usize], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let Some((&g, rest)) = gens.split_first() else {
            return visit(&self.img);
        };
        if self.img[g] != NONE {
            return self.search(rest, visit);
        }
        let len = self.dom.len();
        for v in 0..self.b.size() {
            if self.assign(g, v) && self.close() && !self.search(rest, visit) {
                self.rollback(len);
                return false;
            }
            self.rollback(len);
        }
        true
    }
}

fn check_signatures(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch {
            expected: a.signature(),
            found: b.signature(),
        });
    }
    Ok(())
}

/// All homomorphisms `a → b`, sorted lexicographically by map.
pub fn homomorphisms(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Vec<Homomorphism>> {
    check_signatures(a, b)?;
    let gens = generating_set(a);
    let mut ext = Extension {
        a,
        b,
        img: vec![NONE; a.size()],
        dom: Vec::new(),
        processed: 0,
        injective: None,
    };
    let mut out = Vec::new();
    if ext.start() {
        ext.search(&gens, &mut |img| {
            out.push(Homomorphism::new(img.to_vec()));
            true
        });
    }
    out.sort();
    Ok(out)
}

/// Per-element isomorphism invariants.
fn invariants(a: &FiniteAlgebra) -> Vec<u64> {
    let n = a.size();
    (0..n)
        .map(|x| {
            let down = (0..n).filter(|&y| a.leq(y, x)).count() as u64;
            let up = (0..n).filter(|&y| a.leq(x, y)).count() as u64;
            let mut flags = 0u64;
            if a.bot() == Some(x) {
                flags |= 1;
            }
            if a.top() == Some(x) {
                flags |= 2;
            }
            if a.has(Op::Neg) && a.neg(x) == x {
                flags |= 4;
            }
            if a.has(Op::Star) {
                let s = a.star(x);
                flags |= ((a.leq(s, x) as u64) << 3) | (((0..n).filter(|&y| a.leq(y, s)).count() as u64) << 8);
            }
            (down << 40) | (up << 24) | flags
        })
        .collect()
}

/// A bijective homomorphism `a → b`, the first in search order, if any.
pub fn is_isomorphic(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Homomorphism> {
    if a.signature() != b.signature() || a.size() != b.size() {
        return None;
    }
    let (inv_a, inv_b) = (invariants(a), invariants(b));
    let (mut sa, mut sb) = (inv_a.clone(), inv_b.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    let gens = generating_set(a);
    let mut ext = Extension {
        a,
        b,
        img: vec![NONE; a.size()],
        dom: Vec::new(),
        processed: 0,
        injective: Some((vec![NONE; b.size()], &inv_a, &inv_b)),
    };
    let mut found = None;
    if ext.start() {
        ext.search(&gens, &mut |img| {
            found = Some(Homomorphism::new(img.to_vec()));
            false
        });
    }
    found
}
