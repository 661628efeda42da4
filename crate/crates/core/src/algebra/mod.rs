//! Finite algebras as dense operation tables.

mod bounds;
mod hom;
mod laws;
mod product;

pub use bounds::{add_bounds, remove_bounds};
pub use hom::{
    compose, generating_set, homomorphisms, is_homomorphism, is_isomorphic, subalgebra_generated,
    subuniverse, Homomorphism,
};
pub use laws::{validate_variety, LawViolation};
pub use product::{direct_power, direct_product, trivial_algebra};

use crate::error::{Error, Result};
use crate::signature::{Op, Signature};

/// Largest carrier accepted for powers and products.
pub const MAX_ELEMENTS: usize = 1_000_000;
/// Largest binary table (size²) an algebra may allocate.
pub const MAX_TABLE_CELLS: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    meet: Vec<u32>,
    join: Vec<u32>,
    neg: Vec<u32>,
    star: Vec<u32>,
    bot: Option<u32>,
    top: Option<u32>,
    labels: Vec<String>,
}

pub(crate) fn check_size(what: &str, size: u128) -> Result<()> {
    if size > MAX_ELEMENTS as u128 {
        return Err(Error::budget(format!("{what} carrier"), size, MAX_ELEMENTS as u128));
    }
    if size * size > MAX_TABLE_CELLS as u128 {
        return Err(Error::budget(
            format!("{what} operation tables"),
            size * size,
            MAX_TABLE_CELLS as u128,
        ));
    }
    Ok(())
}

impl FiniteAlgebra {
    /// Builds the tables by calling `f` on every argument tuple of every
    /// operation of the signature.
    pub fn from_fn(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        f: impl Fn(Op, &[usize]) -> usize,
    ) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::Invalid(format!("algebra `{name}` has an empty carrier")));
        }
        check_size(&format!("algebra `{name}`"), size as u128)?;
        let check = |op: Op, v: usize| -> Result<u32> {
            if v >= size {
                Err(Error::Invalid(format!(
                    "operation {op} of `{name}` yields {v}, outside carrier 0..{size}"
                )))
            } else {
                Ok(v as u32)
            }
        };
        let mut alg = FiniteAlgebra {
            name: name.clone(),
            signature,
            size,
            meet: Vec::new(),
            join: Vec::new(),
            neg: Vec::new(),
            star: Vec::new(),
            bot: None,
            top: None,
            labels: (0..size).map(|i| i.to_string()).collect(),
        };
        for &op in signature.ops() {
            match op {
                Op::Meet | Op::Join => {
                    let mut t = Vec::with_capacity(size * size);
                    for a in 0..size {
                        for b in 0..size {
                            t.push(check(op, f(op, &[a, b]))?);
                        }
                    }
                    if op == Op::Meet {
                        alg.meet = t;
                    } else {
                        alg.join = t;
                    }
                }
                Op::Neg | Op::Star => {
                    let t = (0..size)
                        .map(|a| check(op, f(op, &[a])))
                        .collect::<Result<Vec<_>>>()?;
                    if op == Op::Neg {
                        alg.neg = t;
                    } else {
                        alg.star = t;
                    }
                }
                Op::Bot => alg.bot = Some(check(op, f(op, &[]))?),
                Op::Top => alg.top = Some(check(op, f(op, &[]))?),
            }
        }
        Ok(alg)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_trivial(&self) -> bool {
        self.size == 1
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::Invalid(format!(
                "{} labels given for a carrier of size {}",
                labels.len(),
                self.size
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    /// Element index for a label, if the label is used.
    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b] as usize
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b] as usize
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a] as usize
    }

    #[inline]
    pub fn star(&self, a: usize) -> usize {
        self.star[a] as usize
    }

    pub fn bot(&self) -> Option<usize> {
        self.bot.map(|b| b as usize)
    }

    pub fn top(&self) -> Option<usize> {
        self.top.map(|t| t as usize)
    }

    /// Lattice order derived from the meet table.
    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn has(&self, op: Op) -> bool {
        self.signature.has(op)
    }

    /// Applies `op`; panics if the operation is missing from the signature.
    pub fn apply(&self, op: Op, args: &[usize]) -> usize {
        match op {
            Op::Meet => self.meet(args[0], args[1]),
            Op::Join => self.join(args[0], args[1]),
            Op::Neg => self.neg(args[0]),
            Op::Star => self.star(args[0]),
            Op::Bot => self.bot.expect("signature has bot") as usize,
            Op::Top => self.top.expect("signature has top") as usize,
        }
    }

    pub fn try_apply(&self, op: Op, args: &[usize]) -> Result<usize> {
        if !self.has(op) {
            return Err(Error::UnknownOperation {
                op,
                signature: self.signature,
            });
        }
        Ok(self.apply(op, args))
    }

    /// The same tables viewed in another signature. Operations of `target`
    /// must be present here; extra operations are dropped.
    pub fn reduct(&self, target: Signature) -> Result<FiniteAlgebra> {
        for &op in target.ops() {
            if !self.has(op) {
                return Err(Error::UnknownOperation {
                    op,
                    signature: self.signature,
                });
            }
        }
        let mut out = self.clone();
        out.signature = target;
        if !target.has(Op::Neg) {
            out.neg.clear();
        }
        if !target.has(Op::Star) {
            out.star.clear();
        }
        if !target.has(Op::Bot) {
            out.bot = None;
        }
        if !target.has(Op::Top) {
            out.top = None;
        }
        Ok(out)
    }

    /// Relabels the carrier: element `i` of the result is element
    /// `order[i]` of `self`. `order` must be a permutation.
    pub fn permuted(&self, order: &[usize]) -> Result<FiniteAlgebra> {
        let n = self.size;
        let mut inv = vec![usize::MAX; n];
        if order.len() != n {
            return Err(Error::Invalid("permutation has the wrong length".into()));
        }
        for (i, &o) in order.iter().enumerate() {
            if o >= n || inv[o] != usize::MAX {
                return Err(Error::Invalid("not a permutation of the carrier".into()));
            }
            inv[o] = i;
        }
        let args_back = |args: &[usize]| -> Vec<usize> { args.iter().map(|&a| order[a]).collect() };
        let alg = FiniteAlgebra::from_fn(self.name.clone(), self.signature, n, |op, args| {
            inv[self.apply(op, &args_back(args))]
        })?;
        alg.with_labels(order.iter().map(|&o| self.labels[o].clone()).collect())
    }
}
