//! Admissibility of clauses, completeness classification and the
//! cross-route verification suite.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{remove_bounds, FiniteAlgebra};
use crate::criteria::is_criterion;
use crate::duality::dual_algebra;
use crate::error::{Error, Result};
use crate::free::{count_free, free_algebra};
use crate::members::enumerate_members;
use crate::membership::{member_is_free, member_isp_free, member_with_witness, Class, MembershipVerdict};
use crate::parse::print_clause;
use crate::profile::{profile, VarietyProfile};
use crate::satisfy::{check_ops, satisfies, satisfies_model, Satisfaction, ASSIGNMENT_LIMIT};
use crate::signature::Signature;
use crate::space::{space_power, SpaceKind, StructuredSpace};
use crate::term::Clause;

pub const DEFAULT_MAX_POWER: usize = 2;
pub const DEFAULT_MAX_SIZE: usize = 8;
/// Largest `m` for which a clause is also tested directly in `F(m)`.
pub const FREE_CHECK_MAX: usize = 2;
/// Largest power `M~^k` the refutation search will scan.
pub const REFUTATION_POINTS: usize = 1024;
/// Count limit when sizing a free algebra for a budget report; beyond it
/// the report gives a lower bound.
const QUASI_PROBE: u64 = 1 << 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Admissibility {
    Admissible,
    NotAdmissible,
    Unknown,
}

impl Admissibility {
    pub fn name(self) -> &'static str {
        match self {
            Admissibility::Admissible => "admissible",
            Admissibility::NotAdmissible => "not_admissible",
            Admissibility::Unknown => "unknown",
        }
    }
}

/// Where a counterexample came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    /// An enumerated member of the quasivariety.
    Member,
    /// A finitely generated free algebra.
    Free,
    /// The algebra of a refuting substructure of `M~^k`.
    Dual,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    #[serde(skip)]
    pub algebra: FiniteAlgebra,
    pub name: String,
    pub size: usize,
    pub source: Source,
    pub assignment: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityVerdict {
    pub profile: Signature,
    pub clause: String,
    pub verdict: Admissibility,
    pub counterexample: Option<Counterexample>,
    pub evidence: String,
    pub members_checked: usize,
    pub max_power: usize,
    pub max_size: usize,
}

fn counterexample(algebra: FiniteAlgebra, c: &Clause, source: Source) -> Result<Option<Counterexample>> {
    Ok(match satisfies(&algebra, c)? {
        Satisfaction::Holds => None,
        Satisfaction::Fails(w) => Some(Counterexample {
            name: algebra.name().to_string(),
            size: algebra.size(),
            source,
            assignment: w.render(&algebra),
            algebra,
        }),
    })
}

/// Points of `M~^k` as coordinate tuples, coordinate 0 least significant.
fn coordinates(m: usize, k: usize, size: usize) -> Vec<Vec<usize>> {
    (0..size)
        .map(|mut i| {
            (0..k)
                .map(|_| {
                    let c = i % m;
                    i /= m;
                    c
                })
                .collect()
        })
        .collect()
}

/// Search for a substructure `Y` of `M~^k` on which the premises hold at
/// the projections, every conclusion fails somewhere, and `A(Y)` lies in
/// `IS(F)`. Such a `Y` exists exactly when the clause is not admissible:
/// its algebra is generated by the projections and refutes the clause
/// there, and every refutation in the free algebra yields one.
struct Refuter<'a> {
    tp: &'a VarietyProfile,
    bar: bool,
    k: usize,
    space: StructuredSpace,
    coords: Vec<Vec<usize>>,
    premise: FixedBitSet,
    fails: Vec<FixedBitSet>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    /// Per variable, points where the projection is not the least (resp.
    /// greatest) value; used for unbounded profiles.
    not_bot: Vec<FixedBitSet>,
    not_top: Vec<FixedBitSet>,
}

fn first(s: &FixedBitSet) -> Option<usize> {
    s.ones().next()
}

fn and(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut r = a.clone();
    r.intersect_with(b);
    r
}

impl<'a> Refuter<'a> {
    fn new(p: &VarietyProfile, c: &Clause) -> Result<Option<Refuter<'static>>> {
        let tp = p.dual_profile();
        let vars = c.variables();
        let bar = p.bar_target.is_some();
        // Unbounded profiles have no free algebra on no generators, so the
        // search keeps at least one coordinate.
        let k = if bar { vars.len().max(1) } else { vars.len() };
        let m = tp.generator.size();
        let size = (m as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if size > REFUTATION_POINTS as u128 {
            return Ok(None);
        }
        let space = space_power(&tp.space, k)?;
        let n = space.size();
        let coords = coordinates(m, k, n);
        let compiled = crate::satisfy::CompiledClause::new(c);
        let g = &tp.generator;
        let mut premise = FixedBitSet::with_capacity(n);
        let mut fails = vec![FixedBitSet::with_capacity(n); compiled.conclusions.len()];
        for pt in 0..n {
            let env = &coords[pt][..vars.len()];
            if compiled.premises_hold(g, env) {
                premise.insert(pt);
                for (j, concl) in compiled.conclusions.iter().enumerate() {
                    if !concl.holds(g, env) {
                        fails[j].insert(pt);
                    }
                }
            }
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (i, j) in space.order().pairs() {
            up[i].insert(j);
            down[j].insert(i);
        }
        let (bot, top) = (g.bot().unwrap(), g.top().unwrap());
        let mut not_bot = vec![FixedBitSet::with_capacity(n); k];
        let mut not_top = vec![FixedBitSet::with_capacity(n); k];
        for pt in 0..n {
            for v in 0..k {
                if coords[pt][v] != bot {
                    not_bot[v].insert(pt);
                }
                if coords[pt][v] != top {
                    not_top[v].insert(pt);
                }
            }
        }
        Ok(Some(Refuter {
            tp,
            bar,
            k,
            space,
            coords,
            premise,
            fails,
            up,
            down,
            not_bot,
            not_top,
        }))
    }

    /// Every conclusion fails on `y`, and for unbounded profiles no
    /// projection is a bound of `A(y)`.
    fn refutes(&self, y: &FixedBitSet) -> bool {
        self.fails.iter().all(|f| !f.is_disjoint(y))
            && (!self.bar || (0..self.k).all(|v| !self.not_bot[v].is_disjoint(y) && !self.not_top[v].is_disjoint(y)))
    }

    fn preimage(&self, op: &str, s: &FixedBitSet) -> FixedBitSet {
        let t = self.space.unary(op).unwrap();
        let mut r = FixedBitSet::with_capacity(self.space.size());
        for p in 0..self.space.size() {
            if s.contains(t[p]) {
                r.insert(p);
            }
        }
        r
    }

    /// The largest candidate for each anchor, returned with the anchors
    /// that must stay in any shrunken witness.
    fn search(&self) -> Option<(FixedBitSet, Vec<usize>)> {
        let p = &self.premise;
        match self.space.kind() {
            SpaceKind::Priestley => {
                for b in p.ones() {
                    for t in and(p, &self.up[b]).ones() {
                        let y = and(&and(p, &self.up[b]), &self.down[t]);
                        if self.refutes(&y) {
                            return Some((y, vec![b, t]));
                        }
                    }
                }
                None
            }
            SpaceKind::Stone => {
                let y = and(p, &self.preimage("d", p));
                (!y.is_clear() && self.refutes(&y)).then_some((y, Vec::new()))
            }
            SpaceKind::Demorgan => {
                let f = self.space.unary("f").unwrap();
                let closed = and(p, &self.preimage("f", p));
                for b in closed.ones() {
                    let t = f[b];
                    if !self.space.leq(b, t) {
                        continue;
                    }
                    let y = and(&and(&closed, &self.up[b]), &self.down[t]);
                    if y.ones().any(|z| f[z] == z) && self.refutes(&y) {
                        return Some((y, vec![b, t]));
                    }
                }
                None
            }
            SpaceKind::Kleene => {
                let yset = self.space.subset("Y").unwrap();
                for t in p.ones() {
                    let q = and(p, &self.down[t]);
                    let mut y = FixedBitSet::with_capacity(self.space.size());
                    for g in and(&q, yset).ones() {
                        y.union_with(&and(&q, &self.up[g]));
                    }
                    if y.contains(t) && self.refutes(&y) {
                        return Some((y, vec![t]));
                    }
                }
                None
            }
        }
    }

    fn closure(&self, s: &mut FixedBitSet) {
        loop {
            let mut grew = false;
            for t in self.space.unary_ops().values() {
                for q in s.ones().collect::<Vec<_>>() {
                    if !s.contains(t[q]) {
                        s.insert(t[q]);
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
    }

    fn acceptable(&self, s: &FixedBitSet) -> Result<bool> {
        let pts: Vec<usize> = s.ones().collect();
        if pts.iter().any(|&q| self.space.unary_ops().values().any(|t| !s.contains(t[q]))) {
            return Ok(false);
        }
        let sub = self.space.induced(&pts)?;
        Ok(is_criterion(&sub).is_ok() && self.refutes(s))
    }

    /// A small refuting substructure inside `y`.
    fn shrink(&self, y: &FixedBitSet, anchors: &[usize]) -> Result<FixedBitSet> {
        let n = self.space.size();
        let mut seed = FixedBitSet::with_capacity(n);
        let pick = |s: &FixedBitSet, seed: &mut FixedBitSet| {
            if let Some(q) = first(&and(s, y)) {
                seed.insert(q);
            }
        };
        for &a in anchors {
            seed.insert(a);
        }
        for f in &self.fails {
            pick(f, &mut seed);
        }
        if self.bar {
            for v in 0..self.k {
                pick(&self.not_bot[v], &mut seed);
                pick(&self.not_top[v], &mut seed);
            }
        }
        match self.space.kind() {
            SpaceKind::Demorgan => {
                let f = self.space.unary("f").unwrap();
                if let Some(z) = y.ones().find(|&z| f[z] == z) {
                    seed.insert(z);
                }
            }
            SpaceKind::Kleene => {
                let yset = and(self.space.subset("Y").unwrap(), y);
                for q in seed.ones().collect::<Vec<_>>() {
                    if let Some(g) = first(&and(&yset, &self.down[q])) {
                        seed.insert(g);
                    }
                }
            }
            SpaceKind::Stone => {
                if seed.is_clear() {
                    if let Some(q) = first(y) {
                        seed.insert(q);
                    }
                }
            }
            SpaceKind::Priestley => {}
        }
        self.closure(&mut seed);
        let mut s = if self.acceptable(&seed)? { seed } else { y.clone() };
        if s.count_ones(..) > 64 {
            return Ok(s);
        }
        for q in s.ones().collect::<Vec<_>>().into_iter().rev() {
            if !s.contains(q) {
                continue;
            }
            let mut t = s.clone();
            t.set(q, false);
            if let Some(f) = self.space.unary("f") {
                t.set(f[q], false);
            }
            if !t.is_clear() && self.acceptable(&t)? {
                s = t;
            }
        }
        Ok(s)
    }

    /// `A(y)`, or its unbounded part for unbounded profiles, with the
    /// projections named after the clause variables.
    fn algebra(&self, sig: Signature, y: &FixedBitSet, vars: &[String]) -> Result<FiniteAlgebra> {
        let pts: Vec<usize> = y.ones().collect();
        let sub = self.space.induced(&pts)?;
        let dual = dual_algebra(self.tp, &sub)?;
        let mut labels: Vec<String> = (0..dual.algebra.size()).map(|i| format!("e{i}")).collect();
        let (bot, top) = (dual.algebra.bot().unwrap(), dual.algebra.top().unwrap());
        labels[bot] = "bot".into();
        labels[top] = "top".into();
        for (v, name) in vars.iter().enumerate() {
            let row: Vec<usize> = pts.iter().map(|&q| self.coords[q][v]).collect();
            if let Some(i) = dual.index_of(&row) {
                if i != bot && i != top {
                    labels[i] = name.clone();
                }
            }
        }
        let name = format!("A(Y), Y a {}-point substructure of {}~^{}", pts.len(), self.tp.generator.name(), self.k);
        let a = dual.algebra.with_labels(labels)?.with_name(name);
        Ok(if self.bar {
            remove_bounds(&a)?.with_name(a.name().to_string())
        } else {
            a
        }
        .reduct(sig)?)
    }
}

/// Admissibility of `c` in the profile's quasivariety: `c` is admissible
/// exactly when it holds in every finite member of `IS(F)`.
///
/// Enumerated members and small free algebras are tried first for a
/// readable counterexample; the verdict then comes from the refutation
/// search over `M~^k`, which is exact. `Unknown` only when `M~^k` exceeds
/// [`REFUTATION_POINTS`].
pub fn admissible_clause(sig: Signature, c: &Clause, max_power: usize, max_size: usize) -> Result<AdmissibilityVerdict> {
    let p = profile(sig);
    check_ops(sig, c.ops())?;
    let mut verdict = AdmissibilityVerdict {
        profile: sig,
        clause: print_clause(c),
        verdict: Admissibility::Unknown,
        counterexample: None,
        evidence: String::new(),
        members_checked: 0,
        max_power,
        max_size,
    };
    let members = enumerate_members(p, max_power, max_size)?;
    for b in members {
        if b.is_trivial() && !c.conclusions.is_empty() {
            continue;
        }
        if !member_is_free(sig, &b)?.result {
            continue;
        }
        verdict.members_checked += 1;
        if let Some(w) = counterexample(b, c, Source::Member)? {
            verdict.verdict = Admissibility::NotAdmissible;
            verdict.evidence = format!("refuted by the member {} of IS(F)", w.name);
            verdict.counterexample = Some(w);
            return Ok(verdict);
        }
    }
    let k = c.variables().len();
    let cap = if k == 0 {
        u64::MAX
    } else {
        (ASSIGNMENT_LIMIT as f64).powf(1.0 / k as f64).floor() as u64
    };
    for m in 0..=FREE_CHECK_MAX {
        if p.bar_target.is_some() && m == 0 {
            continue;
        }
        if count_free(sig, m, cap.min(4096))?.is_none() {
            break;
        }
        let f = free_algebra(sig, m)?;
        let alg = f.unbounded_algebra()?.reduct(sig)?;
        if let Some(w) = counterexample(alg, c, Source::Free)? {
            verdict.verdict = Admissibility::NotAdmissible;
            verdict.evidence = format!("refuted in the free algebra {}", w.name);
            verdict.counterexample = Some(w);
            return Ok(verdict);
        }
    }
    match dual_refutation(sig, c)? {
        None => {
            verdict.evidence = format!(
                "no counterexample among {} members or in F(m), m <= {FREE_CHECK_MAX}; the refutation search over {}~^{k} exceeds {REFUTATION_POINTS} points",
                verdict.members_checked,
                p.dual_profile().generator.name()
            );
        }
        Some(None) => {
            verdict.verdict = Admissibility::Admissible;
            verdict.evidence = format!(
                "no substructure of {}~^{k} refutes the clause",
                p.dual_profile().generator.name()
            );
        }
        Some(Some(w)) => {
            verdict.verdict = Admissibility::NotAdmissible;
            verdict.evidence = format!("refuted by {} ({} elements)", w.name, w.size);
            verdict.counterexample = Some(w);
        }
    }
    Ok(verdict)
}

/// The refutation search on its own: `None` when `M~^k` is too large,
/// `Some(None)` when the clause is admissible, otherwise a verified
/// counterexample in `IS(F)`.
pub fn dual_refutation(sig: Signature, c: &Clause) -> Result<Option<Option<Counterexample>>> {
    let p = profile(sig);
    check_ops(sig, c.ops())?;
    let Some(refuter) = Refuter::new(p, c)? else {
        return Ok(None);
    };
    let Some((y, anchors)) = refuter.search() else {
        return Ok(Some(None));
    };
    let small = refuter.shrink(&y, &anchors)?;
    let alg = refuter.algebra(sig, &small, &c.variables())?;
    if !member_is_free(sig, &alg)?.result {
        return Err(Error::Invariant(format!("refuting algebra {} is not in IS(F)", alg.name())));
    }
    let w = counterexample(alg, c, Source::Dual)?
        .ok_or_else(|| Error::Invariant("refuting algebra satisfies the clause".into()))?;
    Ok(Some(Some(w)))
}

/// Whether the quasi-identity `q` is admissible, by checking it in
/// `F(n0)`, which decides it exactly. Refuses with a budget error when
/// `|F(n0)|^vars` exceeds [`ASSIGNMENT_LIMIT`].
pub fn admissible_quasi_exact(sig: Signature, q: &Clause) -> Result<bool> {
    if !q.is_quasi_identity() {
        return Err(Error::Invalid(format!(
            "`{}` is not a quasi-identity (needs exactly one conclusion)",
            print_clause(q)
        )));
    }
    let p = profile(sig);
    check_ops(sig, q.ops())?;
    let vars = q.variables().len();
    let n0 = p.n0;
    if vars > 0 {
        let cap = (ASSIGNMENT_LIMIT as f64).powf(1.0 / vars as f64).floor() as u64;
        if count_free(sig, n0, cap)?.is_none() {
            let probe = QUASI_PROBE;
            let (size, what) = match count_free(sig, n0, probe)? {
                Some(s) => (s as u128, format!("assignments into F({n0}) of {sig}")),
                None => (probe as u128 + 1, format!("assignments into F({n0}) of {sig} (lower bound)")),
            };
            let requested = size.checked_pow(vars as u32).unwrap_or(u128::MAX);
            return Err(Error::budget(what, requested, ASSIGNMENT_LIMIT));
        }
    }
    let f = free_algebra(sig, n0)?;
    let found = if p.bar_target.is_some() {
        let a = f.unbounded_algebra()?.reduct(sig)?;
        let elements: Vec<usize> = (0..a.size()).collect();
        satisfies_model(&a, &elements, q, ASSIGNMENT_LIMIT)?
    } else {
        let elements: Vec<usize> = (0..f.size()).collect();
        satisfies_model(&*f, &elements, q, ASSIGNMENT_LIMIT)?
    };
    Ok(found.is_none())
}

#[derive(Debug, Clone, Serialize)]
pub struct CompletenessReport {
    pub profile: Signature,
    pub max_power: usize,
    pub max_size: usize,
    pub members_checked: usize,
    pub structurally_complete: bool,
    pub universally_complete: bool,
    pub non_negative_universally_complete: bool,
    /// First member outside `ISP(F)`.
    pub not_in_isp: Option<String>,
    /// First member outside `IS(F)`.
    pub not_in_is: Option<String>,
    /// First non-trivial member outside `IS(F)`.
    pub nontrivial_not_in_is: Option<String>,
}

/// Completeness at the enumeration bound: structural when every member is
/// in `ISP(F)`, universal when every member is in `IS(F)`, non-negative
/// universal when every non-trivial member is.
pub fn classify_completeness(sig: Signature, max_power: usize, max_size: usize) -> Result<CompletenessReport> {
    let members = enumerate_members(profile(sig), max_power, max_size)?;
    let verdicts: Vec<(bool, bool)> = members
        .par_iter()
        .map(|b| Ok((member_is_free(sig, b)?.result, member_isp_free(sig, b)?.result)))
        .collect::<Result<_>>()?;
    let name = |i: usize| members[i].name().to_string();
    let not_in_isp = verdicts.iter().position(|v| !v.1).map(name);
    let not_in_is = verdicts.iter().position(|v| !v.0).map(name);
    let nontrivial_not_in_is = (0..members.len())
        .find(|&i| !members[i].is_trivial() && !verdicts[i].0)
        .map(name);
    Ok(CompletenessReport {
        profile: sig,
        max_power,
        max_size,
        members_checked: members.len(),
        structurally_complete: not_in_isp.is_none(),
        universally_complete: not_in_is.is_none(),
        non_negative_universally_complete: nontrivial_not_in_is.is_none(),
        not_in_isp,
        not_in_is,
        nontrivial_not_in_is,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub max_power: usize,
    pub max_size: usize,
    /// Largest free generator count tried by the witness route; `None`
    /// means `|X(B)| + 2` per member.
    pub n_cap: Option<usize>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_power: DEFAULT_MAX_POWER,
            max_size: DEFAULT_MAX_SIZE,
            n_cap: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub profile: Signature,
    pub bounds: Bounds,
    pub members_checked: usize,
    pub disagreements: Vec<MembershipVerdict>,
    pub bound_limited: usize,
    pub verdicts: Vec<MembershipVerdict>,
}

/// Runs the clause, dual and witness routes for `IS(F)` and `ISP(F)` on
/// every enumerated member and collects disagreements.
pub fn verify_lemma_suite(sig: Signature, bounds: Bounds) -> Result<LemmaReport> {
    let p = profile(sig);
    let members = enumerate_members(p, bounds.max_power, bounds.max_size)?;
    let per_member: Vec<Vec<MembershipVerdict>> = members
        .par_iter()
        .map(|b| {
            let cap = match bounds.n_cap {
                Some(c) => c,
                None => member_is_free(sig, b).map(|_| dual_points(p, b))?? + 2,
            };
            Ok(vec![
                member_with_witness(sig, b, Class::Is, cap)?,
                member_with_witness(sig, b, Class::Isp, cap)?,
            ])
        })
        .collect::<Result<_>>()?;
    let verdicts: Vec<MembershipVerdict> = per_member.into_iter().flatten().collect();
    Ok(LemmaReport {
        profile: sig,
        bounds,
        members_checked: members.len(),
        disagreements: verdicts.iter().filter(|v| v.disagreement).cloned().collect(),
        bound_limited: verdicts.iter().filter(|v| v.bound_limited).count(),
        verdicts,
    })
}

fn dual_points(p: &VarietyProfile, b: &FiniteAlgebra) -> Result<usize> {
    let side = match p.bar_target {
        None => b.clone(),
        Some(_) => crate::algebra::add_bounds(b)?,
    };
    Ok(crate::duality::dual_space(p.dual_profile(), &side)?.space.size())
}
