//! The hom-functors between algebras and spaces, and the evaluation map.

use std::collections::HashMap;

use crate::algebra::{homomorphisms, is_homomorphism, FiniteAlgebra, Homomorphism};
use crate::error::{Error, Result};
use crate::profile::VarietyProfile;
use crate::search::morphisms;
use crate::space::{check_space_axioms, SpaceMorphism, StructuredSpace};

/// `X(B)`: the homomorphisms `B → M` with structure lifted from the alter ego.
#[derive(Debug, Clone)]
pub struct DualSpace {
    pub space: StructuredSpace,
    /// Point `i` of `space` is `points[i]`; sorted by map.
    pub points: Vec<Homomorphism>,
}

impl DualSpace {
    pub fn index_of(&self, h: &[usize]) -> Option<usize> {
        self.points.binary_search_by(|p| p.map.as_slice().cmp(h)).ok()
    }
}

/// `A(X)`: the morphisms `X → M~` with pointwise operations.
#[derive(Debug, Clone)]
pub struct DualAlgebra {
    pub algebra: FiniteAlgebra,
    /// Element `i` of `algebra` is `elements[i]`; sorted by map.
    pub elements: Vec<SpaceMorphism>,
}

impl DualAlgebra {
    pub fn index_of(&self, map: &[usize]) -> Option<usize> {
        self.elements.binary_search_by(|e| e.map.as_slice().cmp(map)).ok()
    }
}

pub(crate) fn require_duality(p: &VarietyProfile) -> Result<()> {
    if p.has_duality() {
        Ok(())
    } else {
        Err(Error::NoDuality(p.name().to_string()))
    }
}

/// Signature match plus the defining laws of the profile's variety.
pub fn check_member(p: &VarietyProfile, b: &FiniteAlgebra) -> Result<()> {
    if b.signature() != p.id {
        return Err(Error::SignatureMismatch {
            expected: p.id,
            found: b.signature(),
        });
    }
    if let Some(v) = p.validate(b)? {
        return Err(Error::NotMember(format!("`{}`: {}", b.name(), v.describe(b))));
    }
    Ok(())
}

pub fn dual_space(p: &VarietyProfile, b: &FiniteAlgebra) -> Result<DualSpace> {
    require_duality(p)?;
    check_member(p, b)?;
    let m = &p.generator;
    let alter = &p.space;
    let points = homomorphisms(b, m)?;
    let n = points.len();
    let index: HashMap<&[usize], usize> = points.iter().enumerate().map(|(i, h)| (h.map.as_slice(), i)).collect();
    let all = |pred: &dyn Fn(usize, usize) -> bool, i: usize, j: usize| {
        points[i].map.iter().zip(&points[j].map).all(|(&x, &y)| pred(x, y))
    };
    let mut order = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if all(&|x, y| alter.leq(x, y), i, j) {
                order.push((i, j));
            }
        }
    }
    let labels = (0..n).map(|i| format!("h{i}")).collect();
    let mut builder = StructuredSpace::builder(alter.kind(), n).order(order).labels(labels);
    for (name, t) in alter.unary_ops() {
        let mut table = Vec::with_capacity(n);
        for h in &points {
            let image: Vec<usize> = h.map.iter().map(|&x| t[x]).collect();
            let &j = index.get(image.as_slice()).ok_or_else(|| {
                Error::Invariant(format!("`{name}` applied to a homomorphism is not a homomorphism"))
            })?;
            table.push(j);
        }
        builder = builder.unary(name, table);
    }
    for (name, r) in alter.relations() {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if all(&|x, y| r.contains(x, y), i, j) {
                    pairs.push((i, j));
                }
            }
        }
        builder = builder.relation(name, pairs);
    }
    for (name, s) in alter.subsets() {
        builder = builder.subset(name, (0..n).filter(|&i| points[i].map.iter().all(|&x| s.contains(x))));
    }
    Ok(DualSpace {
        space: builder.build()?,
        points,
    })
}

pub(crate) fn check_space(p: &VarietyProfile, x: &StructuredSpace) -> Result<()> {
    if !x.same_shape(&p.space) {
        return Err(Error::KindMismatch {
            expected: p.space_kind.to_string(),
            found: x.kind().to_string(),
        });
    }
    if let Some(v) = check_space_axioms(x) {
        return Err(Error::Invalid(v.to_string()));
    }
    Ok(())
}

pub fn dual_algebra(p: &VarietyProfile, x: &StructuredSpace) -> Result<DualAlgebra> {
    require_duality(p)?;
    check_space(p, x)?;
    let elements = morphisms(x, &p.space)?;
    let algebra = pointwise_algebra(p, &elements, x.size())?;
    Ok(DualAlgebra { algebra, elements })
}

/// Operation tables on a sorted list of maps into `M`, computed pointwise.
/// Fails if the list is not closed under the operations.
pub(crate) fn pointwise_algebra(p: &VarietyProfile, elements: &[SpaceMorphism], width: usize) -> Result<FiniteAlgebra> {
    let m = &p.generator;
    let size = elements.len();
    crate::algebra::check_size("dual algebra", size as u128)?;
    let find = |v: &[usize], what: &str| -> Result<usize> {
        elements
            .binary_search_by(|e| e.map.as_slice().cmp(v))
            .map_err(|_| Error::Invariant(format!("dual algebra is not closed under {what}")))
    };
    let mut tables: HashMap<crate::signature::Op, Vec<usize>> = HashMap::new();
    let mut scratch = vec![0usize; width];
    for &op in p.id.ops() {
        let mut t = Vec::new();
        match op.arity() {
            0 => {
                let c = m.apply(op, &[]);
                t.push(find(&vec![c; width], op.name())?);
            }
            1 => {
                for e in elements {
                    for (s, &v) in scratch.iter_mut().zip(&e.map) {
                        *s = m.apply(op, &[v]);
                    }
                    t.push(find(&scratch, op.name())?);
                }
            }
            _ => {
                for a in elements {
                    for b in elements {
                        for (k, s) in scratch.iter_mut().enumerate() {
                            *s = m.apply(op, &[a.map[k], b.map[k]]);
                        }
                        t.push(find(&scratch, op.name())?);
                    }
                }
            }
        }
        tables.insert(op, t);
    }
    FiniteAlgebra::from_fn(format!("A(X) in {}", p.id), p.id, size, |op, args| {
        let t = &tables[&op];
        match args {
            [] => t[0],
            [a] => t[*a],
            [a, b] => t[a * size + b],
            _ => unreachable!(),
        }
    })
}

/// `e_B(b)(h) = h(b)`, with the verdict whether it is an isomorphism
/// `B ≅ A(X(B))`.
#[derive(Debug, Clone)]
pub struct EvaluationMap {
    pub dual: DualSpace,
    pub double_dual: DualAlgebra,
    /// `None` when some `e_B(b)` is not a morphism of `X(B)`.
    pub map: Option<Homomorphism>,
    pub is_isomorphism: bool,
}

pub fn evaluation_map(p: &VarietyProfile, b: &FiniteAlgebra) -> Result<EvaluationMap> {
    let dual = dual_space(p, b)?;
    let double_dual = dual_algebra(p, &dual.space)?;
    let map: Option<Vec<usize>> = (0..b.size())
        .map(|x| {
            let v: Vec<usize> = dual.points.iter().map(|h| h.apply(x)).collect();
            double_dual.index_of(&v)
        })
        .collect();
    let map = map.map(Homomorphism::new);
    let is_isomorphism = map.as_ref().is_some_and(|m| {
        b.size() == double_dual.algebra.size()
            && m.is_injective()
            && is_homomorphism(b, &double_dual.algebra, &m.map)
    });
    Ok(EvaluationMap {
        dual,
        double_dual,
        map,
        is_isomorphism,
    })
}

/// `X(f): X(C) → X(B)`, `h ↦ h ∘ f`, for a homomorphism `f: B → C`.
pub fn dual_morphism(f: &Homomorphism, xb: &DualSpace, xc: &DualSpace) -> Result<SpaceMorphism> {
    let map = xc
        .points
        .iter()
        .map(|h| {
            let composed: Vec<usize> = f.map.iter().map(|&y| h.apply(y)).collect();
            xb.index_of(&composed)
                .ok_or_else(|| Error::Invariant("composite of homomorphisms is missing from the dual".into()))
        })
        .collect::<Result<_>>()?;
    Ok(SpaceMorphism::new(map))
}
