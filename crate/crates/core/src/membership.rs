//! Membership of finite algebras in `IS(F)` and `ISP(F)`, where `F` is the
//! free algebra of the profile, decided by three independent routes:
//! the basis clauses, a condition on the dual space, and an explicit
//! embedding into (products of) finitely generated free algebras.

use serde::Serialize;

use crate::algebra::{add_bounds, FiniteAlgebra, Homomorphism};
use crate::construct::{construct_cover, cover_dimension};
use crate::criteria::{is_criterion, isp_criterion, Criterion};
use crate::duality::{check_member, dual_space, DualSpace};
use crate::error::{Error, Result};
use crate::free::FreeAlgebra;
use crate::profile::{profile, VarietyProfile};
use crate::registry::ClauseId;
use crate::satisfy::{satisfies, Satisfaction};
use crate::search::{find_covering_morphism, find_surjection, SearchOutcome, NODE_BUDGET};
use crate::signature::Signature;
use crate::space::{is_space_morphism, space_power, SpaceKind, SpaceMorphism, StructuredSpace, MAX_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Clause,
    Dual,
    Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Class {
    #[serde(rename = "IS")]
    Is,
    #[serde(rename = "ISP")]
    Isp,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Is => "IS(F)",
            Class::Isp => "ISP(F)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteVerdict {
    pub route: Route,
    /// `None`: the witness search found nothing within its bound, which
    /// proves nothing.
    pub result: Option<bool>,
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipVerdict {
    pub algebra: String,
    pub size: usize,
    pub class: Class,
    /// The dual route's answer.
    pub result: bool,
    pub routes: Vec<RouteVerdict>,
    /// Two routes gave opposite definite answers.
    pub disagreement: bool,
    /// The dual route says yes but no witness was found within the bound.
    pub bound_limited: bool,
}

impl MembershipVerdict {
    pub fn route(&self, r: Route) -> Option<&RouteVerdict> {
        self.routes.iter().find(|v| v.route == r)
    }
}

/// An embedding `B ↪ F(n)` read off a surjection `M~^n ↠ X(B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeEmbedding {
    pub n: usize,
    /// The surjection; for unbounded profiles it maps onto `X(bar B)`.
    pub cover: SpaceMorphism,
    /// Row `b` is the image of `b`, a map on the points of `M~^n`.
    pub images: Vec<Vec<usize>>,
    /// Built by the explicit construction rather than by search.
    pub constructed: bool,
}

impl FreeEmbedding {
    /// The embedding as indices into a free algebra on `n` generators.
    pub fn into_free(&self, f: &FreeAlgebra) -> Option<Homomorphism> {
        if f.n() != self.n {
            return None;
        }
        self.images
            .iter()
            .map(|row| f.find(&row.iter().map(|&v| v as u8).collect::<Vec<_>>()))
            .collect::<Option<Vec<_>>>()
            .map(Homomorphism::new)
    }
}

/// An embedding `B ↪ F(n_1) × ... × F(n_k)`; no parts means the trivial
/// algebra embedded in the empty product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerEmbedding {
    pub parts: Vec<FreeEmbedding>,
}

/// The algebra whose dual is used: `B` itself, or `bar B` for unbounded
/// profiles, with the offset of `B`'s elements inside it.
fn dual_side(p: &VarietyProfile, b: &FiniteAlgebra) -> Result<(FiniteAlgebra, usize)> {
    Ok(match p.bar_target {
        None => (b.clone(), 0),
        Some(_) => (add_bounds(b)?, 1),
    })
}

fn alter_name(p: &VarietyProfile) -> String {
    format!("{}~", p.dual_profile().generator.name())
}

fn clause_route(p: &VarietyProfile, b: &FiniteAlgebra, ids: &[ClauseId]) -> Result<RouteVerdict> {
    for &id in ids {
        if let Satisfaction::Fails(w) = satisfies(b, id.clause())? {
            return Ok(RouteVerdict {
                route: Route::Clause,
                result: Some(false),
                evidence: format!("{} fails at {}", id.name(), w.render(b)),
            });
        }
    }
    let evidence = if ids.is_empty() {
        format!("no basis clauses for {}", p.name())
    } else {
        let names: Vec<&str> = ids.iter().map(|c| c.name()).collect();
        format!("satisfies {}", names.join(", "))
    };
    Ok(RouteVerdict {
        route: Route::Clause,
        result: Some(true),
        evidence,
    })
}

fn dual_route(p: &VarietyProfile, b: &FiniteAlgebra, x: &DualSpace, class: Class) -> RouteVerdict {
    let what = if p.bar_target.is_some() { "X(bar B)" } else { "X(B)" };
    let verdict: Criterion = match (class, p.bar_target) {
        (Class::Is, _) => is_criterion(&x.space),
        (Class::Isp, None) => isp_criterion(&x.space),
        (Class::Isp, Some(_)) if b.is_trivial() => Ok(()),
        (Class::Isp, Some(_)) => is_criterion(&x.space),
    };
    let n = x.space.size();
    match verdict {
        Ok(()) if class == Class::Isp && p.bar_target.is_some() && b.is_trivial() => RouteVerdict {
            route: Route::Dual,
            result: Some(true),
            evidence: "trivial algebra".into(),
        },
        Ok(()) => RouteVerdict {
            route: Route::Dual,
            result: Some(true),
            evidence: format!("{what} with {n} points meets the condition"),
        },
        Err(why) => RouteVerdict {
            route: Route::Dual,
            result: Some(false),
            evidence: format!("{what} with {n} points: {why}"),
        },
    }
}

struct Powers<'a> {
    alter: &'a StructuredSpace,
    cache: Vec<Option<StructuredSpace>>,
}

impl<'a> Powers<'a> {
    fn new(alter: &'a StructuredSpace) -> Self {
        Powers { alter, cache: Vec::new() }
    }

    /// `M~^n`, or `None` when it exceeds the point budget.
    fn get(&mut self, n: usize) -> Result<Option<&StructuredSpace>> {
        let size = (self.alter.size() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if size > MAX_POINTS as u128 {
            return Ok(None);
        }
        if self.cache.len() <= n {
            self.cache.resize(n + 1, None);
        }
        if self.cache[n].is_none() {
            self.cache[n] = Some(space_power(self.alter, n)?);
        }
        Ok(self.cache[n].as_ref())
    }
}

/// A surjection `M~^n ↠ x` with `n ≤ n_cap`: the explicit construction when
/// the dual criterion holds, otherwise a search.
fn find_is_cover(tp: &VarietyProfile, x: &StructuredSpace, n_cap: usize) -> Result<SearchOutcome<(usize, SpaceMorphism, bool)>> {
    if cover_dimension(x).is_some_and(|d| d <= n_cap) {
        if let Some(c) = construct_cover(tp, x)? {
            return Ok(SearchOutcome::Found((c.n, c.map, true)));
        }
    }
    let mut powers = Powers::new(&tp.space);
    let mut inconclusive = false;
    for n in 0..=n_cap {
        let Some(src) = powers.get(n)? else {
            inconclusive = true;
            break;
        };
        if src.size() < x.size() {
            continue;
        }
        match find_surjection(src, x, NODE_BUDGET)? {
            SearchOutcome::Found(h) => return Ok(SearchOutcome::Found((n, h, false))),
            SearchOutcome::None => {}
            SearchOutcome::Inconclusive => inconclusive = true,
        }
    }
    Ok(if inconclusive {
        SearchOutcome::Inconclusive
    } else {
        SearchOutcome::None
    })
}

fn closure(x: &StructuredSpace, seed: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; x.size()];
    let mut stack: Vec<usize> = seed.to_vec();
    while let Some(p) = stack.pop() {
        if inside[p] {
            continue;
        }
        inside[p] = true;
        for t in x.unary_ops().values() {
            stack.push(t[p]);
        }
    }
    (0..x.size()).filter(|&p| inside[p]).collect()
}

/// A morphism `M~^n → x` whose image contains `part`.
fn cover_part(
    tp: &VarietyProfile,
    x: &StructuredSpace,
    part: &[usize],
    n_cap: usize,
    powers: &mut Powers,
) -> Result<SearchOutcome<(usize, SpaceMorphism, bool)>> {
    let pts = closure(x, part);
    let sub = x.induced(&pts)?;
    if cover_dimension(&sub).is_some_and(|d| d <= n_cap) {
        if let Some(c) = construct_cover(tp, &sub)? {
            let map = c.map.map.iter().map(|&i| pts[i]).collect();
            return Ok(SearchOutcome::Found((c.n, SpaceMorphism::new(map), true)));
        }
    }
    let mut inconclusive = false;
    for n in 0..=n_cap {
        let Some(src) = powers.get(n)? else {
            inconclusive = true;
            break;
        };
        match find_covering_morphism(src, x, &pts, NODE_BUDGET)? {
            SearchOutcome::Found(h) => return Ok(SearchOutcome::Found((n, h, false))),
            SearchOutcome::None => {}
            SearchOutcome::Inconclusive => inconclusive = true,
        }
    }
    Ok(if inconclusive {
        SearchOutcome::Inconclusive
    } else {
        SearchOutcome::None
    })
}

/// Candidate pieces of a cover of `x` by images of free duals.
fn candidate_parts(x: &StructuredSpace) -> Vec<Vec<usize>> {
    let n = x.size();
    match x.kind() {
        SpaceKind::Demorgan => {
            let f = x.unary("f").unwrap();
            x.minimal()
                .into_iter()
                .filter(|&m| x.leq(m, f[m]))
                .map(|m| (0..n).filter(|&p| x.leq(m, p) && x.leq(p, f[m])).collect())
                .collect()
        }
        SpaceKind::Kleene => x.maximal().into_iter().map(|t| (0..n).filter(|&p| x.leq(p, t)).collect()).collect(),
        SpaceKind::Priestley | SpaceKind::Stone => (0..n).map(|p| vec![p]).collect(),
    }
}

fn find_isp_cover(
    tp: &VarietyProfile,
    x: &StructuredSpace,
    n_cap: usize,
    parts_cap: usize,
) -> Result<SearchOutcome<Vec<(usize, SpaceMorphism, bool)>>> {
    if x.is_empty() {
        return Ok(SearchOutcome::Found(Vec::new()));
    }
    if cover_dimension(x).is_some_and(|d| d <= n_cap) {
        if let Some(c) = construct_cover(tp, x)? {
            return Ok(SearchOutcome::Found(vec![(c.n, c.map, true)]));
        }
    }
    let mut powers = Powers::new(&tp.space);
    let mut covered = vec![false; x.size()];
    let mut parts = Vec::new();
    let mut take = |found: (usize, SpaceMorphism, bool), covered: &mut Vec<bool>| {
        for &q in &found.1.map {
            covered[q] = true;
        }
        parts.push(found);
    };
    for part in candidate_parts(x) {
        if part.iter().all(|&q| covered[q]) {
            continue;
        }
        if let SearchOutcome::Found(h) = cover_part(tp, x, &part, n_cap, &mut powers)? {
            take(h, &mut covered);
        }
    }
    let mut inconclusive = false;
    let mut missing = false;
    for q in 0..x.size() {
        if covered[q] {
            continue;
        }
        match cover_part(tp, x, &[q], n_cap, &mut powers)? {
            SearchOutcome::Found(h) => take(h, &mut covered),
            SearchOutcome::None => missing = true,
            SearchOutcome::Inconclusive => inconclusive = true,
        }
    }
    Ok(if inconclusive || parts.len() > parts_cap {
        SearchOutcome::Inconclusive
    } else if missing {
        SearchOutcome::None
    } else {
        SearchOutcome::Found(parts)
    })
}

/// Rows of the embedding read off a cover of the dual.
fn images(dual: &DualSpace, cover: &SpaceMorphism, elements: impl Iterator<Item = usize>) -> Vec<Vec<usize>> {
    elements
        .map(|e| cover.map.iter().map(|&q| dual.points[q].apply(e)).collect())
        .collect()
}

/// Checks that the parts together give a one-to-one homomorphism of `b`
/// into a product of free algebras.
fn verify_embedding(p: &VarietyProfile, b: &FiniteAlgebra, parts: &[FreeEmbedding]) -> Result<()> {
    let tp = p.dual_profile();
    let m = &tp.generator;
    let mut powers = Powers::new(&tp.space);
    for part in parts {
        let src = powers.get(part.n)?.ok_or_else(|| Error::Invariant("witness power exceeds the point budget".into()))?;
        for row in &part.images {
            if !is_space_morphism(src, &tp.space, row) {
                return Err(Error::Invariant("an embedding image is not a morphism into the alter ego".into()));
            }
        }
    }
    let tuple = |x: usize| -> Vec<&Vec<usize>> { parts.iter().map(|part| &part.images[x]).collect() };
    let n = b.size();
    for x in 0..n {
        for y in x + 1..n {
            if tuple(x) == tuple(y) {
                return Err(Error::Invariant(format!(
                    "embedding identifies {} and {}",
                    b.label(x),
                    b.label(y)
                )));
            }
        }
    }
    for &op in b.signature().ops() {
        let args: Vec<Vec<usize>> = match op.arity() {
            0 => vec![vec![]],
            1 => (0..n).map(|x| vec![x]).collect(),
            _ => (0..n).flat_map(|x| (0..n).map(move |y| vec![x, y])).collect(),
        };
        for a in args {
            let r = b.apply(op, &a);
            for part in parts {
                let width = part.cover.map.len();
                for q in 0..width {
                    let vals: Vec<usize> = a.iter().map(|&x| part.images[x][q]).collect();
                    if m.apply(op, &vals) != part.images[r][q] {
                        return Err(Error::Invariant(format!("embedding does not preserve {op}")));
                    }
                }
            }
        }
    }
    Ok(())
}

/// An embedding of `b` into `F(n)` for some `n ≤ n_cap`. For unbounded
/// profiles the search runs on `bar b` and the rows of `b`'s own elements
/// are returned.
pub fn embeds_into_free(sig: Signature, b: &FiniteAlgebra, n_cap: usize) -> Result<SearchOutcome<FreeEmbedding>> {
    let p = profile(sig);
    check_member(p, b)?;
    let (side, offset) = dual_side(p, b)?;
    let dual = dual_space(p.dual_profile(), &side)?;
    embed_with_dual(p, b, &dual, offset, n_cap)
}

fn embed_with_dual(
    p: &VarietyProfile,
    b: &FiniteAlgebra,
    dual: &DualSpace,
    offset: usize,
    n_cap: usize,
) -> Result<SearchOutcome<FreeEmbedding>> {
    Ok(match find_is_cover(p.dual_profile(), &dual.space, n_cap)? {
        SearchOutcome::Found((n, cover, constructed)) => {
            let e = FreeEmbedding {
                n,
                images: images(dual, &cover, (0..b.size()).map(|x| x + offset)),
                cover,
                constructed,
            };
            verify_embedding(p, b, std::slice::from_ref(&e))?;
            SearchOutcome::Found(e)
        }
        SearchOutcome::None => SearchOutcome::None,
        SearchOutcome::Inconclusive => SearchOutcome::Inconclusive,
    })
}

/// An embedding of `b` into a product of at most `parts_cap` free algebras
/// `F(n_i)` with `n_i ≤ n_cap`.
pub fn embeds_into_free_power(
    sig: Signature,
    b: &FiniteAlgebra,
    n_cap: usize,
    parts_cap: usize,
) -> Result<SearchOutcome<PowerEmbedding>> {
    let p = profile(sig);
    check_member(p, b)?;
    let (side, offset) = dual_side(p, b)?;
    let dual = dual_space(p.dual_profile(), &side)?;
    power_with_dual(p, b, &dual, offset, n_cap, parts_cap)
}

fn power_with_dual(
    p: &VarietyProfile,
    b: &FiniteAlgebra,
    dual: &DualSpace,
    offset: usize,
    n_cap: usize,
    parts_cap: usize,
) -> Result<SearchOutcome<PowerEmbedding>> {
    if p.bar_target.is_some() {
        // Unbounded members of ISP(F) are the trivial algebra and the
        // members of IS(F).
        if b.is_trivial() {
            return Ok(SearchOutcome::Found(PowerEmbedding { parts: Vec::new() }));
        }
        return Ok(match embed_with_dual(p, b, dual, offset, n_cap)? {
            SearchOutcome::Found(e) => SearchOutcome::Found(PowerEmbedding { parts: vec![e] }),
            SearchOutcome::None => SearchOutcome::None,
            SearchOutcome::Inconclusive => SearchOutcome::Inconclusive,
        });
    }
    Ok(match find_isp_cover(p, &dual.space, n_cap, parts_cap)? {
        SearchOutcome::Found(found) => {
            let parts: Vec<FreeEmbedding> = found
                .into_iter()
                .map(|(n, cover, constructed)| FreeEmbedding {
                    n,
                    images: images(dual, &cover, 0..b.size()),
                    cover,
                    constructed,
                })
                .collect();
            if parts.is_empty() && !b.is_trivial() {
                return Err(Error::Invariant("empty product offered for a non-trivial algebra".into()));
            }
            verify_embedding(p, b, &parts)?;
            SearchOutcome::Found(PowerEmbedding { parts })
        }
        SearchOutcome::None => SearchOutcome::None,
        SearchOutcome::Inconclusive => SearchOutcome::Inconclusive,
    })
}

fn describe_parts(p: &VarietyProfile, parts: &[FreeEmbedding]) -> String {
    if parts.is_empty() {
        return "embeds in the empty product".into();
    }
    let alter = alter_name(p);
    let list: Vec<String> = parts
        .iter()
        .map(|e| format!("{alter}^{} ({})", e.n, if e.constructed { "construction" } else { "search" }))
        .collect();
    format!("cover of the dual by {}", list.join(", "))
}

fn witness_route(
    p: &VarietyProfile,
    b: &FiniteAlgebra,
    dual: &DualSpace,
    class: Class,
    n_cap: usize,
) -> Result<RouteVerdict> {
    let offset = usize::from(p.bar_target.is_some());
    let outcome = match class {
        Class::Is => match embed_with_dual(p, b, dual, offset, n_cap)? {
            SearchOutcome::Found(e) => SearchOutcome::Found(vec![e]),
            SearchOutcome::None => SearchOutcome::None,
            SearchOutcome::Inconclusive => SearchOutcome::Inconclusive,
        },
        Class::Isp => match power_with_dual(p, b, dual, offset, n_cap, dual.space.size().max(1))? {
            SearchOutcome::Found(e) => SearchOutcome::Found(e.parts),
            SearchOutcome::None => SearchOutcome::None,
            SearchOutcome::Inconclusive => SearchOutcome::Inconclusive,
        },
    };
    Ok(match outcome {
        SearchOutcome::Found(parts) => RouteVerdict {
            route: Route::Witness,
            result: Some(true),
            evidence: describe_parts(p, &parts),
        },
        SearchOutcome::None => RouteVerdict {
            route: Route::Witness,
            result: None,
            evidence: format!("no witness with n <= {n_cap}"),
        },
        SearchOutcome::Inconclusive => RouteVerdict {
            route: Route::Witness,
            result: None,
            evidence: format!("search budget exhausted with n <= {n_cap}"),
        },
    })
}

fn membership(sig: Signature, b: &FiniteAlgebra, class: Class, n_cap: Option<usize>) -> Result<MembershipVerdict> {
    let p = profile(sig);
    check_member(p, b)?;
    let ids = match class {
        Class::Is => p.basis_clauses,
        Class::Isp => p.basis_quasi,
    };
    let clause = clause_route(p, b, ids)?;
    let (side, _) = dual_side(p, b)?;
    let dual = dual_space(p.dual_profile(), &side)?;
    let dual_v = dual_route(p, b, &dual, class);
    let result = dual_v.result == Some(true);
    let mut routes = vec![clause, dual_v];
    if let Some(cap) = n_cap {
        routes.push(witness_route(p, b, &dual, class, cap)?);
    }
    let definite: Vec<bool> = routes.iter().filter_map(|r| r.result).collect();
    let disagreement = definite.iter().any(|&r| r != result);
    let bound_limited = result && routes.iter().any(|r| r.route == Route::Witness && r.result.is_none());
    Ok(MembershipVerdict {
        algebra: b.name().to_string(),
        size: b.size(),
        class,
        result,
        routes,
        disagreement,
        bound_limited,
    })
}

/// Whether `b ∈ IS(F)`, by the clause and dual routes.
pub fn member_is_free(sig: Signature, b: &FiniteAlgebra) -> Result<MembershipVerdict> {
    membership(sig, b, Class::Is, None)
}

/// Whether `b ∈ ISP(F)`, by the clause and dual routes.
pub fn member_isp_free(sig: Signature, b: &FiniteAlgebra) -> Result<MembershipVerdict> {
    membership(sig, b, Class::Isp, None)
}

/// As [`member_is_free`] / [`member_isp_free`], also searching for an
/// explicit embedding with free generators `n ≤ n_cap`.
pub fn member_with_witness(sig: Signature, b: &FiniteAlgebra, class: Class, n_cap: usize) -> Result<MembershipVerdict> {
    membership(sig, b, class, Some(n_cap))
}
