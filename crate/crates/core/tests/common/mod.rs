//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

/// Monotone Boolean functions of `n` variables, by brute force over truth
/// tables.
pub fn monotone_count(n: u32) -> u64 {
    let points = 1usize << n;
    let mut count = 0;
    for table in 0u64..(1u64 << points) {
        let f = |p: usize| table >> p & 1;
        let monotone = (0..points).all(|p| (0..points).all(|q| p & q != p || f(p) <= f(q)));
        count += monotone as u64;
    }
    count
}

/// A structure on `0..m` given by plain tables, for oracle counts.
pub struct Alter {
    m: usize,
    leq: Vec<(usize, usize)>,
    unary: Vec<usize>,
    sim: Vec<(usize, usize)>,
    subset: Vec<usize>,
}

impl Alter {
    pub fn le(&self, a: usize, b: usize) -> bool {
        a == b || self.leq.contains(&(a, b))
    }

    /// Maps on `0..m` preserving order, the unary map, the relation and the
    /// subset, out of all `m^m`.
    pub fn endomorphisms(&self) -> u64 {
        let m = self.m;
        let mut count = 0;
        for code in 0..m.pow(m as u32) {
            let h: Vec<usize> = (0..m).map(|i| code / m.pow(i as u32) % m).collect();
            let order = (0..m).all(|a| (0..m).all(|b| !self.le(a, b) || self.le(h[a], h[b])));
            let unary = self.unary.is_empty() || (0..m).all(|a| h[self.unary[a]] == self.unary[h[a]]);
            let sim = self.sim.iter().all(|&(a, b)| self.sim.contains(&(h[a], h[b])));
            let sub = self.subset.iter().all(|a| self.subset.contains(&h[*a]));
            count += (order && unary && sim && sub) as u64;
        }
        count
    }
}

pub fn stone_tables() -> Alter {
    Alter { m: 3, leq: vec![(2, 1)], unary: vec![0, 2, 2], sim: vec![], subset: vec![] }
}

pub fn demorgan_tables() -> Alter {
    Alter { m: 4, leq: vec![(1, 0), (1, 3), (0, 2), (3, 2), (1, 2)], unary: vec![0, 2, 1, 3], sim: vec![], subset: vec![] }
}

pub fn kleene_tables() -> Alter {
    let sim = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).filter(|&p| p != (0, 2) && p != (2, 0)).collect();
    Alter { m: 3, leq: vec![(0, 1), (2, 1)], unary: vec![], sim, subset: vec![0, 2] }
}

/// `|F_bdl(n)|` for `n = 0..=4`, frozen from [`monotone_count`].
pub const MONOTONE: [u64; 5] = [2, 3, 6, 20, 168];
