//! The fixed operation symbols and the seven signatures built from them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Meet,
    Join,
    Neg,
    Star,
    Bot,
    Top,
}

impl Op {
    pub const ALL: [Op; 6] = [Op::Meet, Op::Join, Op::Neg, Op::Star, Op::Bot, Op::Top];

    pub fn arity(self) -> usize {
        match self {
            Op::Meet | Op::Join => 2,
            Op::Neg | Op::Star => 1,
            Op::Bot | Op::Top => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Op::Meet => "meet",
            Op::Join => "join",
            Op::Neg => "neg",
            Op::Star => "star",
            Op::Bot => "bot",
            Op::Top => "top",
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the seven built-in signatures. Signatures with the same operation
/// symbols (e.g. `dma` and `ka`) are still distinct: the name records which
/// variety the algebra is meant to live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Bdl,
    Dl,
    St,
    Dma,
    Dml,
    Ka,
    Kl,
}

impl Signature {
    pub const ALL: [Signature; 7] = [
        Signature::Bdl,
        Signature::Dl,
        Signature::St,
        Signature::Dma,
        Signature::Dml,
        Signature::Ka,
        Signature::Kl,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Signature::Bdl => "bdl",
            Signature::Dl => "dl",
            Signature::St => "st",
            Signature::Dma => "dma",
            Signature::Dml => "dml",
            Signature::Ka => "ka",
            Signature::Kl => "kl",
        }
    }

    pub fn ops(self) -> &'static [Op] {
        use Op::*;
        match self {
            Signature::Bdl => &[Meet, Join, Bot, Top],
            Signature::Dl => &[Meet, Join],
            Signature::St => &[Meet, Join, Star, Bot, Top],
            Signature::Dma | Signature::Ka => &[Meet, Join, Neg, Bot, Top],
            Signature::Dml | Signature::Kl => &[Meet, Join, Neg],
        }
    }

    pub fn has(self, op: Op) -> bool {
        self.ops().contains(&op)
    }

    pub fn is_bounded(self) -> bool {
        self.has(Op::Bot)
    }

    /// Bounded counterpart of an unbounded signature.
    pub fn bounded(self) -> Option<Signature> {
        match self {
            Signature::Dl => Some(Signature::Bdl),
            Signature::Dml => Some(Signature::Dma),
            Signature::Kl => Some(Signature::Ka),
            _ => None,
        }
    }

    /// Unbounded counterpart of a bounded signature, when one exists.
    pub fn unbounded(self) -> Option<Signature> {
        match self {
            Signature::Bdl => Some(Signature::Dl),
            Signature::Dma => Some(Signature::Dml),
            Signature::Ka => Some(Signature::Kl),
            _ => None,
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Signature {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Signature::ALL
            .into_iter()
            .find(|sig| sig.name() == s)
            .ok_or_else(|| format!("unknown signature `{s}` (expected one of bdl, dl, st, dma, dml, ka, kl)"))
    }
}
