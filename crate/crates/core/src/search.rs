//! Backtracking search for structure-preserving maps between spaces.
//!
//! Every source point is a variable whose domain is a bitset of target
//! points. Order, unary maps and relations become binary constraints in both
//! directions; subsets and self-loops shrink the initial domains. Domains are
//! kept arc consistent after every choice.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::space::{SpaceMorphism, StructuredSpace};

/// Default number of search nodes before a search gives up.
pub const NODE_BUDGET: u64 = 2_000_000;
/// Most morphisms [`morphisms`] will materialize.
pub const MAX_SOLUTIONS: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    /// The search space was exhausted without a solution.
    None,
    /// The node budget ran out first.
    Inconclusive,
}

impl<T> SearchOutcome<T> {
    pub fn found(self) -> Option<T> {
        match self {
            SearchOutcome::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(self, SearchOutcome::Inconclusive)
    }
}

#[derive(Clone)]
struct Csp {
    nvars: usize,
    nvals: usize,
    words: usize,
    init: Vec<u64>,
    /// Flattened rows: `tables[t]` holds `nvals` rows of `words` words.
    tables: Vec<Vec<u64>>,
    arcs: Vec<Vec<(usize, usize)>>,
    degree: Vec<usize>,
    cover: Vec<u64>,
}

fn row(table: &[u64], words: usize, a: usize) -> &[u64] {
    &table[a * words..(a + 1) * words]
}

fn count(d: &[u64]) -> u32 {
    d.iter().map(|w| w.count_ones()).sum()
}

fn ones(d: &[u64]) -> impl Iterator<Item = usize> + '_ {
    d.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + b)
        })
    })
}

impl Csp {
    fn new(x: &StructuredSpace, z: &StructuredSpace) -> Result<Csp> {
        if !x.same_shape(z) {
            return Err(Error::KindMismatch {
                expected: x.kind().to_string(),
                found: z.kind().to_string(),
            });
        }
        let (nvars, nvals) = (x.size(), z.size());
        let words = nvals.div_ceil(64).max(1);
        let mut csp = Csp {
            nvars,
            nvals,
            words,
            init: vec![0; nvars * words],
            tables: Vec::new(),
            arcs: vec![Vec::new(); nvars],
            degree: vec![0; nvars],
            cover: vec![0; words],
        };
        let full: Vec<u64> = {
            let mut f = vec![0u64; words];
            for v in 0..nvals {
                f[v / 64] |= 1 << (v % 64);
            }
            f
        };
        for p in 0..nvars {
            csp.init[p * words..(p + 1) * words].copy_from_slice(&full);
        }
        let make = |rel: &dyn Fn(usize, usize) -> bool| -> Vec<u64> {
            let mut t = vec![0u64; nvals * words];
            for a in 0..nvals {
                for b in 0..nvals {
                    if rel(a, b) {
                        t[a * words + b / 64] |= 1 << (b % 64);
                    }
                }
            }
            t
        };
        let restrict = |csp: &mut Csp, p: usize, allowed: &dyn Fn(usize) -> bool| {
            for v in 0..nvals {
                if !allowed(v) {
                    csp.init[p * words + v / 64] &= !(1 << (v % 64));
                }
            }
        };

        let up = csp.add_table(make(&|a, b| z.leq(a, b)));
        let down = csp.add_table(make(&|a, b| z.leq(b, a)));
        for (p, q) in x.covers() {
            csp.add_arc(p, q, up);
            csp.add_arc(q, p, down);
        }
        for (name, t) in x.unary_ops() {
            let tz = z.unary(name).expect("same shape");
            let fwd = csp.add_table(make(&|a, b| tz[a] == b));
            let back = csp.add_table(make(&|a, b| tz[b] == a));
            for p in 0..nvars {
                let q = t[p];
                if q == p {
                    restrict(&mut csp, p, &|v| tz[v] == v);
                } else {
                    csp.add_arc(p, q, fwd);
                    csp.add_arc(q, p, back);
                }
            }
        }
        for (name, r) in x.relations() {
            let rz = z.relation(name).expect("same shape");
            let fwd = csp.add_table(make(&|a, b| rz.contains(a, b)));
            let back = csp.add_table(make(&|a, b| rz.contains(b, a)));
            for (p, q) in r.pairs() {
                if p == q {
                    restrict(&mut csp, p, &|v| rz.contains(v, v));
                } else {
                    csp.add_arc(p, q, fwd);
                    csp.add_arc(q, p, back);
                }
            }
        }
        for (name, s) in x.subsets() {
            let sz = z.subset(name).expect("same shape");
            for p in s.ones() {
                restrict(&mut csp, p, &|v| sz.contains(v));
            }
        }
        for arcs in &mut csp.arcs {
            arcs.sort_unstable();
            arcs.dedup();
        }
        for p in 0..nvars {
            csp.degree[p] = csp.arcs[p].len();
        }
        Ok(csp)
    }

    fn add_table(&mut self, t: Vec<u64>) -> usize {
        self.tables.push(t);
        self.tables.len() - 1
    }

    fn add_arc(&mut self, from: usize, to: usize, table: usize) {
        self.arcs[from].push((to, table));
    }

    fn dom<'a>(&self, doms: &'a [u64], p: usize) -> &'a [u64] {
        &doms[p * self.words..(p + 1) * self.words]
    }

    /// Arc consistency from the points in `queue`. Returns false on a wipeout.
    fn propagate(&self, doms: &mut [u64], mut queue: Vec<usize>) -> bool {
        let w = self.words;
        let mut queued = vec![false; self.nvars];
        for &p in &queue {
            queued[p] = true;
        }
        let mut support = vec![0u64; w];
        while let Some(p) = queue.pop() {
            queued[p] = false;
            for &(q, t) in &self.arcs[p] {
                support.iter_mut().for_each(|s| *s = 0);
                let table = &self.tables[t];
                for a in ones(&doms[p * w..(p + 1) * w]) {
                    for (s, r) in support.iter_mut().zip(row(table, w, a)) {
                        *s |= r;
                    }
                }
                let dq = &mut doms[q * w..(q + 1) * w];
                let mut changed = false;
                let mut empty = true;
                for (d, s) in dq.iter_mut().zip(&support) {
                    let nd = *d & s;
                    changed |= nd != *d;
                    empty &= nd == 0;
                    *d = nd;
                }
                if empty {
                    return false;
                }
                if changed && !queued[q] {
                    queued[q] = true;
                    queue.push(q);
                }
            }
        }
        true
    }

    fn covered(&self, doms: &[u64]) -> bool {
        let w = self.words;
        let mut union = vec![0u64; w];
        for p in 0..self.nvars {
            for (u, d) in union.iter_mut().zip(&doms[p * w..(p + 1) * w]) {
                *u |= d;
            }
        }
        union.iter().zip(&self.cover).all(|(u, c)| c & !u == 0)
    }

    fn choose(&self, doms: &[u64]) -> Option<usize> {
        let mut best: Option<(u32, std::cmp::Reverse<usize>, usize)> = None;
        for p in 0..self.nvars {
            let c = count(self.dom(doms, p));
            if c > 1 {
                let key = (c, std::cmp::Reverse(self.degree[p]), p);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        best.map(|b| b.2)
    }

    fn solution(&self, doms: &[u64]) -> Vec<usize> {
        (0..self.nvars).map(|p| ones(self.dom(doms, p)).next().unwrap()).collect()
    }

    fn with_value(&self, doms: &[u64], p: usize, v: usize) -> Vec<u64> {
        let mut d = doms.to_vec();
        let w = self.words;
        d[p * w..(p + 1) * w].iter_mut().for_each(|x| *x = 0);
        d[p * w + v / 64] = 1 << (v % 64);
        d
    }

    /// Depth-first search; `visit` returns false to stop. Returns false when
    /// stopped by the visitor or the budget.
    fn dfs(&self, doms: Vec<u64>, nodes: &mut u64, budget: u64, visit: &mut dyn FnMut(Vec<usize>) -> bool) -> Flow {
        if !self.covered(&doms) {
            return Flow::Continue;
        }
        let Some(p) = self.choose(&doms) else {
            return if visit(self.solution(&doms)) { Flow::Continue } else { Flow::Stop };
        };
        for v in ones(self.dom(&doms, p)).collect::<Vec<_>>() {
            *nodes += 1;
            if *nodes > budget {
                return Flow::Budget;
            }
            let mut d = self.with_value(&doms, p, v);
            if self.propagate(&mut d, vec![p]) {
                match self.dfs(d, nodes, budget, visit) {
                    Flow::Continue => {}
                    other => return other,
                }
            }
        }
        Flow::Continue
    }

    fn root(&self) -> Option<Vec<u64>> {
        if self.nvars > 0 && self.nvals == 0 {
            return None;
        }
        let mut d = self.init.clone();
        for p in 0..self.nvars {
            if count(self.dom(&d, p)) == 0 {
                return None;
            }
        }
        self.propagate(&mut d, (0..self.nvars).collect()).then_some(d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
    Budget,
}

/// All morphisms `x → z`, sorted lexicographically by map.
pub fn morphisms(x: &StructuredSpace, z: &StructuredSpace) -> Result<Vec<SpaceMorphism>> {
    let csp = Csp::new(x, z)?;
    let Some(root) = csp.root() else {
        return Ok(Vec::new());
    };
    let Some(p) = csp.choose(&root) else {
        return Ok(vec![SpaceMorphism::new(csp.solution(&root))]);
    };
    let branches: Vec<usize> = ones(csp.dom(&root, p)).collect();
    let parts: Vec<Result<Vec<Vec<usize>>>> = branches
        .par_iter()
        .map(|&v| {
            let mut d = csp.with_value(&root, p, v);
            let mut out = Vec::new();
            if csp.propagate(&mut d, vec![p]) {
                let mut nodes = 0;
                let flow = csp.dfs(d, &mut nodes, u64::MAX, &mut |m| {
                    out.push(m);
                    out.len() <= MAX_SOLUTIONS
                });
                if flow == Flow::Stop {
                    return Err(Error::budget("morphism enumeration", out.len() as u128, MAX_SOLUTIONS as u128));
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for part in parts {
        all.extend(part?);
        if all.len() > MAX_SOLUTIONS {
            return Err(Error::budget("morphism enumeration", all.len() as u128, MAX_SOLUTIONS as u128));
        }
    }
    all.sort_unstable();
    Ok(all.into_iter().map(SpaceMorphism::new).collect())
}

/// Number of morphisms `x → z`, or `None` once the count exceeds `cap`.
pub fn count_morphisms(x: &StructuredSpace, z: &StructuredSpace, cap: u64) -> Result<Option<u64>> {
    let csp = Csp::new(x, z)?;
    let Some(root) = csp.root() else {
        return Ok(Some(0));
    };
    let mut n = 0u64;
    let mut nodes = 0;
    let flow = csp.dfs(root, &mut nodes, u64::MAX, &mut |_| {
        n += 1;
        n <= cap
    });
    Ok((flow != Flow::Stop).then_some(n))
}

/// First morphism (in search order) whose image contains every point of
/// `must_cover`.
pub fn find_covering_morphism(
    x: &StructuredSpace,
    z: &StructuredSpace,
    must_cover: &[usize],
    budget: u64,
) -> Result<SearchOutcome<SpaceMorphism>> {
    let mut csp = Csp::new(x, z)?;
    for &c in must_cover {
        csp.cover[c / 64] |= 1 << (c % 64);
    }
    let Some(root) = csp.root() else {
        return Ok(SearchOutcome::None);
    };
    let mut found = None;
    let mut nodes = 0;
    let flow = csp.dfs(root, &mut nodes, budget, &mut |m| {
        found = Some(m);
        false
    });
    Ok(match (found, flow) {
        (Some(m), _) => SearchOutcome::Found(SpaceMorphism::new(m)),
        (None, Flow::Budget) => SearchOutcome::Inconclusive,
        (None, _) => SearchOutcome::None,
    })
}

/// First onto morphism in search order, bounded by `budget` nodes.
pub fn find_surjection(x: &StructuredSpace, z: &StructuredSpace, budget: u64) -> Result<SearchOutcome<SpaceMorphism>> {
    let all: Vec<usize> = (0..z.size()).collect();
    if x.size() < z.size() {
        Csp::new(x, z)?;
        return Ok(SearchOutcome::None);
    }
    find_covering_morphism(x, z, &all, budget)
}

/// An onto morphism `x → z` if one exists; errors when the default node
/// budget cannot settle the question.
pub fn surjective_morphism_exists(x: &StructuredSpace, z: &StructuredSpace) -> Result<Option<SpaceMorphism>> {
    match find_surjection(x, z, NODE_BUDGET)? {
        SearchOutcome::Found(m) => Ok(Some(m)),
        SearchOutcome::None => Ok(None),
        SearchOutcome::Inconclusive => Err(Error::budget("surjection search nodes", NODE_BUDGET as u128 + 1, NODE_BUDGET as u128)),
    }
}
