//! The Galois connection between functions on the carrier and functions on
//! its spectral compactification: restriction `g* = g ∘ ι` on one side, the
//! envelope `f_*` on the other, with `g* ⊑ f ⟺ g ⊑ f_*`.
//!
//! `f_*` is never tabulated. Deciding `g ⊑ f_*` for a step function `g` only
//! needs the infima `⋀ f(W')` over the opens of `g`: every point of
//! `O_{↓W'}` contains `↓W'`, so `f_*` is at least `⋀ f(W')` there, and the
//! image points `ι(x)`, `x ∈ W'`, attain it because `f = f_* ∘ ι`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval_domain::{box_leq, box_meet, IntervalBox};
use crate::open_ring::{cells, OpenSet};
use crate::sample::{SampleConfig, Sampler};
use crate::step_functions::{make_stepfn, order_cells, Component, StepFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AdjunctionVerdict {
    /// `g* ⊑ f`
    pub lhs: bool,
    /// `g ⊑ f_*`
    pub rhs: bool,
    pub agree: bool,
}

/// `g ↦ g ∘ ι`. Since `ι⁻¹(O_{↓W}) = W`, the restriction of
/// `⊔ b_j χ_{O_{↓W_j}}` is `⊔ b_j χ_{W_j}`: the same representation.
pub fn restrict(g: &StepFn) -> StepFn {
    g.clone()
}

/// `⋀ f(W)` for a non-empty open `W`.
pub fn meet_over_open(f: &StepFn, w: &OpenSet) -> Result<IntervalBox> {
    f.carrier().check_same(w.carrier())?;
    if w.is_empty() {
        return Err(Error::EmptyOpen);
    }
    let mut values = Vec::new();
    for cell in cells(f.carrier(), f.opens().chain(std::iter::once(w)))? {
        let x = cell.representative();
        if w.contains_point(x)? {
            values.push(f.eval(x)?);
        }
    }
    box_meet(&values)
}

/// Decides `g ⊑ f_*` by checking `b'_j ⊑ ⋀ f(W'_j)` for every component of
/// `g` with a non-empty open.
pub fn envelope_leq(g: &StepFn, f: &StepFn) -> Result<bool> {
    g.carrier().check_same(f.carrier())?;
    if g.dim() != f.dim() {
        return Err(Error::dims(f.dim(), g.dim()));
    }
    for c in g.components() {
        if c.open.is_empty() {
            continue;
        }
        if !box_leq(&c.value, &meet_over_open(f, &c.open)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(f_*)*`: the envelope read back along `ι`, one component per cell of
/// `f`, with value `⋀ f(c)` on cell `c`.
pub fn envelope_restricted(f: &StepFn) -> Result<StepFn> {
    let mut comps = Vec::new();
    for cell in f.cells()? {
        let open = OpenSet::from_piece(f.carrier(), cell)?;
        let value = meet_over_open(f, &open)?;
        if !value.is_bottom() {
            comps.push(Component::new(open, value));
        }
    }
    make_stepfn(comps, f.carrier(), f.dim())
}

pub fn adjunction_check(f: &StepFn, g: &StepFn) -> Result<AdjunctionVerdict> {
    let lhs = order_cells(&restrict(g), f)?;
    let rhs = envelope_leq(g, f)?;
    Ok(AdjunctionVerdict {
        lhs,
        rhs,
        agree: lhs == rhs,
    })
}

/// Result of a randomized run of the Galois-connection laws.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub cases: usize,
    pub agreements: usize,
    /// Cases where both sides held.
    pub both_true: usize,
    /// Cases where `(f_*)* = f` failed.
    pub retraction_failures: usize,
    /// First disagreeing pair, serialized.
    pub first_failure: Option<String>,
}

impl FuzzReport {
    pub fn all_agree(&self) -> bool {
        self.agreements == self.cases && self.retraction_failures == 0
    }
}

/// Runs `n` seeded cases of the adjunction law and the retraction identity.
///
/// Half of the pairs are drawn independently; the other half take `g` below
/// `f` by construction so that the lhs = rhs = true branch is exercised.
pub fn fuzz_adjunction(n: usize, seed: u64) -> Result<FuzzReport> {
    let mut report = FuzzReport::default();
    let mut sampler = Sampler::new(seed);
    for case in 0..n {
        let config = SampleConfig {
            dim: 1 + case % 2,
            ..SampleConfig::default()
        };
        let f = sampler.stepfn(&config);
        let g = if case % 4 < 2 {
            sampler.stepfn(&config)
        } else {
            sampler.below(&f, &config)
        };
        let verdict = adjunction_check(&f, &g)?;
        report.cases += 1;
        if verdict.agree {
            report.agreements += 1;
        } else if report.first_failure.is_none() {
            report.first_failure = Some(format!("f = {f}; g = {g}"));
        }
        if verdict.lhs && verdict.rhs {
            report.both_true += 1;
        }
        let back = envelope_restricted(&f)?;
        if !(order_cells(&back, &f)? && order_cells(&f, &back)?) {
            report.retraction_failures += 1;
        }
    }
    Ok(report)
}
