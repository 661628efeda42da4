//! The seven variety profiles.

use std::sync::LazyLock;

use crate::algebra::{validate_variety, FiniteAlgebra, LawViolation};
use crate::error::Result;
use crate::generators::{demorgan_d, demorgan_space, kleene_k, kleene_space, stone_s, stone_space, two, two_space};
use crate::registry::ClauseId;
use crate::signature::Signature;
use crate::space::{SpaceKind, StructuredSpace};

#[derive(Debug, Clone)]
pub struct VarietyProfile {
    pub id: Signature,
    /// Generating algebra, in this profile's signature.
    pub generator: FiniteAlgebra,
    /// Alter ego of the generator; for unbounded profiles, that of the
    /// bounded counterpart.
    pub space: StructuredSpace,
    pub space_kind: SpaceKind,
    pub basis_clauses: &'static [ClauseId],
    pub basis_quasi: &'static [ClauseId],
    /// Size of the generator; quasi-identities are decided in the free
    /// algebra on this many generators.
    pub n0: usize,
    pub bar_target: Option<Signature>,
}

impl VarietyProfile {
    pub fn has_duality(&self) -> bool {
        self.bar_target.is_none()
    }

    pub fn name(&self) -> &'static str {
        self.id.name()
    }

    /// The profile whose duality is used: itself, or the bar target.
    pub fn dual_profile(&self) -> &'static VarietyProfile {
        profile(self.bar_target.unwrap_or(self.id))
    }

    pub fn validate(&self, a: &FiniteAlgebra) -> Result<Option<LawViolation>> {
        validate_variety(self.id, a)
    }
}

use ClauseId::*;

fn build(id: Signature) -> VarietyProfile {
    let (generator, space, kind, clauses, quasi): (_, _, _, &'static [ClauseId], &'static [ClauseId]) = match id {
        Signature::Bdl => (two(), two_space(), SpaceKind::Priestley, &[C1, C2, C3], &[]),
        Signature::Dl => (two(), two_space(), SpaceKind::Priestley, &[], &[]),
        Signature::St => (stone_s(), stone_space(), SpaceKind::Stone, &[C1], &[]),
        Signature::Dma => (demorgan_d(), demorgan_space(), SpaceKind::Demorgan, &[C3, C4], &[C6, C7]),
        Signature::Dml => (demorgan_d(), demorgan_space(), SpaceKind::Demorgan, &[C4], &[C5]),
        Signature::Ka => (kleene_k(), kleene_space(), SpaceKind::Kleene, &[C1, C3, C8], &[C8]),
        Signature::Kl => (kleene_k(), kleene_space(), SpaceKind::Kleene, &[C4, C8], &[C8]),
    };
    let generator = generator.reduct(id).expect("generator has the profile's operations");
    VarietyProfile {
        id,
        n0: generator.size(),
        generator,
        space,
        space_kind: kind,
        basis_clauses: clauses,
        basis_quasi: quasi,
        bar_target: id.bounded(),
    }
}

static PROFILES: LazyLock<Vec<VarietyProfile>> = LazyLock::new(|| Signature::ALL.into_iter().map(build).collect());

pub fn profile(id: Signature) -> &'static VarietyProfile {
    &PROFILES[id as usize]
}
