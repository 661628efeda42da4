//! Finite structured spaces: a poset with named unary maps, binary
//! relations and subsets. Every space here is finite, so the topology is
//! discrete and plays no role.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::algebra::Homomorphism;
use crate::error::{Error, Result};

/// Largest carrier accepted for spaces (relations are stored as n² bits).
pub const MAX_POINTS: usize = 1 << 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpaceKind {
    Priestley,
    Stone,
    Demorgan,
    Kleene,
}

impl SpaceKind {
    pub fn name(self) -> &'static str {
        match self {
            SpaceKind::Priestley => "priestley",
            SpaceKind::Stone => "stone",
            SpaceKind::Demorgan => "demorgan",
            SpaceKind::Kleene => "kleene",
        }
    }

    fn required(self) -> (&'static [&'static str], &'static [&'static str], &'static [&'static str]) {
        match self {
            SpaceKind::Priestley => (&[], &[], &[]),
            SpaceKind::Stone => (&["d"], &[], &[]),
            SpaceKind::Demorgan => (&["f"], &[], &[]),
            SpaceKind::Kleene => (&[], &["sim"], &["Y"]),
        }
    }
}

impl fmt::Display for SpaceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SpaceKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        [SpaceKind::Priestley, SpaceKind::Stone, SpaceKind::Demorgan, SpaceKind::Kleene]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown space kind `{s}`"))
    }
}

/// A binary relation on `0..n`, stored row-major as bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    n: usize,
    bits: FixedBitSet,
}

impl Relation {
    pub fn empty(n: usize) -> Relation {
        Relation {
            n,
            bits: FixedBitSet::with_capacity(n * n),
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Relation> {
        let mut r = Relation::empty(n);
        for (i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::Invalid(format!("pair ({i},{j}) outside carrier of size {n}")));
            }
            r.insert(i, j);
        }
        Ok(r)
    }

    #[inline]
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.bits.contains(i * self.n + j)
    }

    pub fn insert(&mut self, i: usize, j: usize) {
        self.bits.insert(i * self.n + j);
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.bits.ones().map(move |b| (b / self.n, b % self.n))
    }

    fn reflexive_transitive_closure(&mut self) {
        let n = self.n;
        let mut rows: Vec<FixedBitSet> = (0..n)
            .map(|i| {
                let mut r = FixedBitSet::with_capacity(n);
                r.insert(i);
                r
            })
            .collect();
        for (i, j) in self.pairs() {
            rows[i].insert(j);
        }
        for k in 0..n {
            let rk = rows[k].clone();
            for row in rows.iter_mut() {
                if row.contains(k) {
                    row.union_with(&rk);
                }
            }
        }
        let mut bits = FixedBitSet::with_capacity(n * n);
        for (i, r) in rows.iter().enumerate() {
            for j in r.ones() {
                bits.insert(i * n + j);
            }
        }
        self.bits = bits;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSpace {
    kind: SpaceKind,
    size: usize,
    order: Relation,
    unary: BTreeMap<String, Vec<usize>>,
    rels: BTreeMap<String, Relation>,
    subsets: BTreeMap<String, FixedBitSet>,
    labels: Vec<String>,
}

/// Assembles a space; the order given is closed reflexively and
/// transitively, then checked for antisymmetry.
#[derive(Debug, Clone)]
pub struct SpaceBuilder {
    kind: SpaceKind,
    size: usize,
    order: Vec<(usize, usize)>,
    unary: BTreeMap<String, Vec<usize>>,
    rels: BTreeMap<String, Vec<(usize, usize)>>,
    subsets: BTreeMap<String, Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl SpaceBuilder {
    pub fn order(mut self, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        self.order.extend(pairs);
        self
    }

    pub fn unary(mut self, name: &str, table: Vec<usize>) -> Self {
        self.unary.insert(name.to_string(), table);
        self
    }

    pub fn relation(mut self, name: &str, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        self.rels.insert(name.to_string(), pairs.into_iter().collect());
        self
    }

    pub fn subset(mut self, name: &str, points: impl IntoIterator<Item = usize>) -> Self {
        self.subsets.insert(name.to_string(), points.into_iter().collect());
        self
    }

    pub fn labels(mut self, labels: Vec<String>) -> Self {
        self.labels = Some(labels);
        self
    }

    pub fn build(self) -> Result<StructuredSpace> {
        let n = self.size;
        if n > MAX_POINTS {
            return Err(Error::budget("space points", n as u128, MAX_POINTS as u128));
        }
        let mut order = Relation::from_pairs(n, self.order)?;
        order.reflexive_transitive_closure();
        for (i, j) in order.pairs() {
            if i != j && order.contains(j, i) {
                return Err(Error::Invalid(format!("order is not antisymmetric: points {i} and {j}")));
            }
        }
        let (req_unary, req_rels, req_subsets) = self.kind.required();
        for name in req_unary {
            if !self.unary.contains_key(*name) {
                return Err(Error::Invalid(format!("{} space needs unary map `{name}`", self.kind)));
            }
        }
        for name in req_rels {
            if !self.rels.contains_key(*name) {
                return Err(Error::Invalid(format!("{} space needs relation `{name}`", self.kind)));
            }
        }
        for name in req_subsets {
            if !self.subsets.contains_key(*name) {
                return Err(Error::Invalid(format!("{} space needs subset `{name}`", self.kind)));
            }
        }
        for (name, t) in &self.unary {
            if t.len() != n || t.iter().any(|&v| v >= n) {
                return Err(Error::Invalid(format!("unary map `{name}` is not a map on 0..{n}")));
            }
        }
        let rels = self
            .rels
            .into_iter()
            .map(|(k, v)| Ok((k, Relation::from_pairs(n, v)?)))
            .collect::<Result<_>>()?;
        let mut subsets = BTreeMap::new();
        for (name, pts) in self.subsets {
            let mut s = FixedBitSet::with_capacity(n);
            for p in pts {
                if p >= n {
                    return Err(Error::Invalid(format!("subset `{name}` contains {p}, outside 0..{n}")));
                }
                s.insert(p);
            }
            subsets.insert(name, s);
        }
        let labels = match self.labels {
            Some(l) if l.len() == n => l,
            Some(l) => {
                return Err(Error::Invalid(format!("{} labels for {n} points", l.len())));
            }
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        Ok(StructuredSpace {
            kind: self.kind,
            size: n,
            order,
            unary: self.unary,
            rels,
            subsets,
            labels,
        })
    }
}

/// A map between space carriers; [`is_space_morphism`] checks structure.
pub type SpaceMorphism = Homomorphism;

impl StructuredSpace {
    pub fn builder(kind: SpaceKind, size: usize) -> SpaceBuilder {
        SpaceBuilder {
            kind,
            size,
            order: Vec::new(),
            unary: BTreeMap::new(),
            rels: BTreeMap::new(),
            subsets: BTreeMap::new(),
            labels: None,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order.contains(i, j)
    }

    pub fn order(&self) -> &Relation {
        &self.order
    }

    pub fn unary_ops(&self) -> &BTreeMap<String, Vec<usize>> {
        &self.unary
    }

    pub fn unary(&self, name: &str) -> Option<&[usize]> {
        self.unary.get(name).map(|v| v.as_slice())
    }

    pub fn relations(&self) -> &BTreeMap<String, Relation> {
        &self.rels
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.rels.get(name)
    }

    pub fn subsets(&self) -> &BTreeMap<String, FixedBitSet> {
        &self.subsets
    }

    pub fn subset(&self, name: &str) -> Option<&FixedBitSet> {
        self.subsets.get(name)
    }

    pub fn in_subset(&self, name: &str, p: usize) -> bool {
        self.subsets.get(name).is_some_and(|s| s.contains(p))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, p: usize) -> &str {
        &self.labels[p]
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::Invalid("label count differs from the number of points".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| (0..self.size).all(|y| y == x || !self.leq(y, x)))
            .collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| (0..self.size).all(|y| y == x || !self.leq(x, y)))
            .collect()
    }

    pub fn top(&self) -> Option<usize> {
        (0..self.size).find(|&x| (0..self.size).all(|y| self.leq(y, x)))
    }

    pub fn bottom(&self) -> Option<usize> {
        (0..self.size).find(|&x| (0..self.size).all(|y| self.leq(x, y)))
    }

    /// Pairs `(x, y)` with `x` covered by `y`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        let mut out = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && self.leq(x, y) && !(0..n).any(|z| z != x && z != y && self.leq(x, z) && self.leq(z, y)) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// Same structure names and kind, so morphisms between the two make sense.
    pub fn same_shape(&self, other: &StructuredSpace) -> bool {
        self.kind == other.kind
            && self.unary.keys().eq(other.unary.keys())
            && self.rels.keys().eq(other.rels.keys())
            && self.subsets.keys().eq(other.subsets.keys())
    }

    /// The substructure on `points` (ascending, closed under the unary maps).
    pub fn induced(&self, points: &[usize]) -> Result<StructuredSpace> {
        let mut index = vec![usize::MAX; self.size];
        for (i, &p) in points.iter().enumerate() {
            index[p] = i;
        }
        let mut b = StructuredSpace::builder(self.kind, points.len()).labels(points.iter().map(|&p| self.labels[p].clone()).collect());
        let mut pairs = Vec::new();
        for (i, &p) in points.iter().enumerate() {
            for (j, &q) in points.iter().enumerate() {
                if self.leq(p, q) {
                    pairs.push((i, j));
                }
            }
        }
        b = b.order(pairs);
        for (name, t) in &self.unary {
            let mut table = Vec::with_capacity(points.len());
            for &p in points {
                let v = index[t[p]];
                if v == usize::MAX {
                    return Err(Error::Invalid(format!("point set is not closed under `{name}`")));
                }
                table.push(v);
            }
            b = b.unary(name, table);
        }
        for (name, r) in &self.rels {
            let mut pairs = Vec::new();
            for (i, &p) in points.iter().enumerate() {
                for (j, &q) in points.iter().enumerate() {
                    if r.contains(p, q) {
                        pairs.push((i, j));
                    }
                }
            }
            b = b.relation(name, pairs);
        }
        for (name, s) in &self.subsets {
            b = b.subset(name, points.iter().enumerate().filter(|(_, &p)| s.contains(p)).map(|(i, _)| i));
        }
        b.build()
    }
}

pub fn is_space_morphism(x: &StructuredSpace, z: &StructuredSpace, map: &[usize]) -> bool {
    if !x.same_shape(z) || map.len() != x.size() || map.iter().any(|&v| v >= z.size()) {
        return false;
    }
    let n = x.size();
    for (i, j) in x.order.pairs() {
        if !z.leq(map[i], map[j]) {
            return false;
        }
    }
    for (name, t) in &x.unary {
        let tz = &z.unary[name];
        if (0..n).any(|p| map[t[p]] != tz[map[p]]) {
            return false;
        }
    }
    for (name, r) in &x.rels {
        let rz = &z.rels[name];
        if r.pairs().any(|(i, j)| !rz.contains(map[i], map[j])) {
            return false;
        }
    }
    for (name, s) in &x.subsets {
        let sz = &z.subsets[name];
        if s.ones().any(|p| !sz.contains(map[p])) {
            return false;
        }
    }
    true
}

fn tuple_label(parts: &[&str]) -> String {
    format!("({})", parts.join(","))
}

/// `s^n` with coordinatewise structure; `n = 0` gives the one-point space.
pub fn space_power(s: &StructuredSpace, n: usize) -> Result<StructuredSpace> {
    let m = s.size;
    let size = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > MAX_POINTS as u128 {
        return Err(Error::budget("space power points", size, MAX_POINTS as u128));
    }
    let size = size as usize;
    let coords: Vec<Vec<usize>> = (0..size)
        .map(|mut i| {
            (0..n)
                .map(|_| {
                    let c = i % m;
                    i /= m;
                    c
                })
                .collect()
        })
        .collect();
    let encode = |c: &[usize]| c.iter().rev().fold(0, |acc, &x| acc * m + x);
    let all2 = |r: &dyn Fn(usize, usize) -> bool, p: usize, q: usize| (0..n).all(|k| r(coords[p][k], coords[q][k]));
    let mut order = Vec::new();
    for p in 0..size {
        for q in 0..size {
            if all2(&|a, b| s.leq(a, b), p, q) {
                order.push((p, q));
            }
        }
    }
    let labels = coords
        .iter()
        .map(|c| {
            if n == 1 {
                s.labels[c[0]].clone()
            } else {
                tuple_label(&c.iter().map(|&x| s.labels[x].as_str()).collect::<Vec<_>>())
            }
        })
        .collect();
    let mut b = StructuredSpace::builder(s.kind, size).order(order).labels(labels);
    for (name, t) in &s.unary {
        let table = coords.iter().map(|c| encode(&c.iter().map(|&x| t[x]).collect::<Vec<_>>())).collect();
        b = b.unary(name, table);
    }
    for (name, r) in &s.rels {
        let mut pairs = Vec::new();
        for p in 0..size {
            for q in 0..size {
                if all2(&|a, b| r.contains(a, b), p, q) {
                    pairs.push((p, q));
                }
            }
        }
        b = b.relation(name, pairs);
    }
    for (name, sub) in &s.subsets {
        b = b.subset(name, (0..size).filter(|&p| coords[p].iter().all(|&x| sub.contains(x))));
    }
    b.build()
}

/// Disjoint union with the injections. No order or relation links
/// different components.
pub fn space_coproduct(parts: &[&StructuredSpace]) -> Result<(StructuredSpace, Vec<SpaceMorphism>)> {
    let Some(first) = parts.first() else {
        return Err(Error::Invalid("coproduct of no spaces has no kind".into()));
    };
    for p in parts {
        if !p.same_shape(first) {
            return Err(Error::KindMismatch {
                expected: first.kind.to_string(),
                found: p.kind.to_string(),
            });
        }
    }
    let size: usize = parts.iter().map(|p| p.size).sum();
    let mut offsets = Vec::with_capacity(parts.len());
    let mut off = 0;
    for p in parts {
        offsets.push(off);
        off += p.size;
    }
    let mut b = StructuredSpace::builder(first.kind, size);
    let mut labels = Vec::with_capacity(size);
    let mut order = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        order.extend(p.order.pairs().map(|(i, j)| (i + offsets[k], j + offsets[k])));
        labels.extend(p.labels.iter().map(|l| format!("{k}.{l}")));
    }
    b = b.order(order).labels(labels);
    for name in first.unary.keys() {
        let mut table = Vec::with_capacity(size);
        for (k, p) in parts.iter().enumerate() {
            table.extend(p.unary[name].iter().map(|&v| v + offsets[k]));
        }
        b = b.unary(name, table);
    }
    for name in first.rels.keys() {
        let mut pairs = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            pairs.extend(p.rels[name].pairs().map(|(i, j)| (i + offsets[k], j + offsets[k])));
        }
        b = b.relation(name, pairs);
    }
    for name in first.subsets.keys() {
        let mut pts = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            pts.extend(p.subsets[name].ones().map(|i| i + offsets[k]));
        }
        b = b.subset(name, pts);
    }
    let space = b.build()?;
    let injections = parts
        .iter()
        .enumerate()
        .map(|(k, p)| SpaceMorphism::new((0..p.size).map(|i| i + offsets[k]).collect()))
        .collect();
    Ok((space, injections))
}

/// The first violated axiom of the space's kind, with the offending points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub points: Vec<usize>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "axiom `{}` fails at points {:?}", self.axiom, self.points)
    }
}

pub fn check_space_axioms(x: &StructuredSpace) -> Option<AxiomViolation> {
    let n = x.size;
    let fail = |axiom, points| Some(AxiomViolation { axiom, points });
    for i in 0..n {
        if !x.leq(i, i) {
            return fail("order.reflexive", vec![i]);
        }
        for j in 0..n {
            if i != j && x.leq(i, j) && x.leq(j, i) {
                return fail("order.antisymmetric", vec![i, j]);
            }
            for k in 0..n {
                if x.leq(i, j) && x.leq(j, k) && !x.leq(i, k) {
                    return fail("order.transitive", vec![i, j, k]);
                }
            }
        }
    }
    match x.kind {
        SpaceKind::Priestley => None,
        SpaceKind::Demorgan => {
            let f = &x.unary["f"];
            for i in 0..n {
                if f[f[i]] != i {
                    return fail("demorgan.involution", vec![i]);
                }
            }
            for (i, j) in x.order.pairs() {
                if !x.leq(f[j], f[i]) {
                    return fail("demorgan.order_reversing", vec![i, j]);
                }
            }
            None
        }
        SpaceKind::Kleene => {
            let sim = &x.rels["sim"];
            let y = &x.subsets["Y"];
            for i in 0..n {
                if !sim.contains(i, i) {
                    return fail("kleene.reflexive", vec![i]);
                }
            }
            for (i, j) in sim.pairs() {
                if y.contains(i) && !x.leq(i, j) {
                    return fail("kleene.Y_below", vec![i, j]);
                }
                for k in 0..n {
                    if x.leq(j, k) && !sim.contains(k, i) {
                        return fail("kleene.upward", vec![i, j, k]);
                    }
                }
            }
            None
        }
        SpaceKind::Stone => {
            let d = &x.unary["d"];
            let minimal = x.minimal();
            for i in 0..n {
                let below: Vec<usize> = minimal.iter().copied().filter(|&m| x.leq(m, i)).collect();
                if below.len() != 1 || below[0] != d[i] {
                    return fail("stone.d_minimal", vec![i]);
                }
            }
            None
        }
    }
}
