//! Principal ideals `↓W` of the ring of opens.
//!
//! These are the finite elements of the ideal completion. On them both the
//! order and the way-below relation reduce to inclusion of generators, joins
//! and meets to union and intersection, and membership of `↓W` in the point
//! `ι(x)` to `x ∈ W`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::open_ring::OpenSet;
use crate::rational::Rational;

/// `↓gen = {U | U ⊆ gen}`. Serializes as its generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrincipalIdeal {
    gen: OpenSet,
}

impl PrincipalIdeal {
    pub fn new(gen: OpenSet) -> Self {
        PrincipalIdeal { gen }
    }

    pub fn generator(&self) -> &OpenSet {
        &self.gen
    }

    /// Whether `u` belongs to the ideal.
    pub fn contains(&self, u: &OpenSet) -> Result<bool> {
        u.is_subset(&self.gen)
    }
}

impl From<OpenSet> for PrincipalIdeal {
    fn from(gen: OpenSet) -> Self {
        PrincipalIdeal { gen }
    }
}

pub fn ideal_leq(i: &PrincipalIdeal, j: &PrincipalIdeal) -> Result<bool> {
    i.gen.is_subset(&j.gen)
}

/// Every `↓W` is compact, so `↓W ≪ ↓W'` coincides with `↓W ⊑ ↓W'`.
pub fn ideal_way_below(i: &PrincipalIdeal, j: &PrincipalIdeal) -> Result<bool> {
    i.gen.is_subset(&j.gen)
}

pub fn ideal_join(i: &PrincipalIdeal, j: &PrincipalIdeal) -> Result<PrincipalIdeal> {
    Ok(PrincipalIdeal::new(i.gen.union(&j.gen)?))
}

pub fn ideal_meet(i: &PrincipalIdeal, j: &PrincipalIdeal) -> Result<PrincipalIdeal> {
    Ok(PrincipalIdeal::new(i.gen.intersect(&j.gen)?))
}

/// Membership of `↓W` in the completely prime filter `ι(x)`.
pub fn iota_mem(x: &Rational, i: &PrincipalIdeal) -> Result<bool> {
    i.gen.contains_point(x)
}
