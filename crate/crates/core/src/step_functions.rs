//! Step functions `⊔ b_i χ_{W_i}` with `W_i` in the ring of opens and `b_i`
//! rational boxes.
//!
//! One [`StepFn`] value stands both for the function on the carrier and for
//! the induced function `⊔ b_i χ_{O_{↓W_i}}` on the spectral
//! compactification. Each relation comes in two independently computed
//! flavours so that they can be checked against each other:
//!
//! * order: pointwise on the common refinement of the carrier
//!   ([`OrderStrategy::Cells`]) or over the prime filters of the finite
//!   lattice generated by the opens ([`OrderStrategy::PrimeFilters`]);
//! * way-below: through the subset formula for `g⁻¹(↟b)`
//!   ([`WayBelowStrategy::Spectral`]) or through the cellwise preimage used by
//!   the abstract-basis relation ([`WayBelowStrategy::AbsBasis`]).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval_domain::{box_join, box_leq, box_way_below, IntervalBox};
use crate::lattice_duality::{
    generate_lattice, prime_filters, PrimeFilterStrategy, DEFAULT_LATTICE_CAP,
};
use crate::open_ring::{cells, Carrier, HalfOpenPiece, OpenSet};
use crate::rational::Rational;

pub const DEFAULT_SUBSET_CAP: usize = 20;

/// Enumeration limits for the exponential procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest finite lattice generated for prime-filter decisions.
    pub lattice: usize,
    /// Most components the subset formula will enumerate over.
    pub subsets: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            lattice: DEFAULT_LATTICE_CAP,
            subsets: DEFAULT_SUBSET_CAP,
        }
    }
}

/// Single-step function `value · χ_open`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Component {
    pub open: OpenSet,
    #[serde(rename = "box")]
    pub value: IntervalBox,
}

impl Component {
    pub fn new(open: OpenSet, value: IntervalBox) -> Self {
        Component { open, value }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "StepFnWire", into = "StepFnWire")]
pub struct StepFn {
    carrier: Carrier,
    dim: usize,
    components: Vec<Component>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepFnWire {
    carrier: Carrier,
    dim: usize,
    components: Vec<Component>,
}

impl TryFrom<StepFnWire> for StepFn {
    type Error = Error;
    fn try_from(w: StepFnWire) -> Result<Self> {
        make_stepfn(w.components, &w.carrier, w.dim)
    }
}

impl From<StepFn> for StepFnWire {
    fn from(f: StepFn) -> Self {
        StepFnWire {
            carrier: f.carrier,
            dim: f.dim,
            components: f.components,
        }
    }
}

/// Validates and assembles a step function. Consistency is checked on every
/// cell of the common refinement of the opens: the boxes active there must
/// have a join.
pub fn make_stepfn(components: Vec<Component>, carrier: &Carrier, dim: usize) -> Result<StepFn> {
    if dim == 0 {
        return Err(Error::dims(1, 0));
    }
    for c in &components {
        carrier.check_same(c.open.carrier())?;
        c.value.check_dim(dim)?;
    }
    let f = StepFn {
        carrier: carrier.clone(),
        dim,
        components,
    };
    for cell in cells(carrier, f.opens())? {
        if let Err(Error::InconsistentJoin { .. }) = f.eval_unchecked(cell.representative()) {
            return Err(Error::InconsistentJoin {
                cell: Some(Box::new(cell)),
            });
        }
    }
    Ok(f)
}

impl StepFn {
    /// The constant-bottom function.
    pub fn bottom(carrier: &Carrier, dim: usize) -> Self {
        StepFn {
            carrier: carrier.clone(),
            dim,
            components: Vec::new(),
        }
    }

    pub fn single(open: OpenSet, value: IntervalBox, dim: usize) -> Result<Self> {
        let carrier = open.carrier().clone();
        make_stepfn(vec![Component::new(open, value)], &carrier, dim)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn opens(&self) -> impl Iterator<Item = &OpenSet> {
        self.components.iter().map(|c| &c.open)
    }

    pub fn eval(&self, x: &Rational) -> Result<IntervalBox> {
        self.carrier.check_point(x)?;
        self.eval_unchecked(x)
    }

    fn eval_unchecked(&self, x: &Rational) -> Result<IntervalBox> {
        let mut active = Vec::new();
        for c in &self.components {
            if c.open.contains_point(x)? {
                active.push(&c.value);
            }
        }
        box_join(active)
    }

    /// Common refinement of the carrier for this function alone.
    pub fn cells(&self) -> Result<Vec<HalfOpenPiece>> {
        cells(&self.carrier, self.opens())
    }

    pub(crate) fn check_compatible(&self, other: &StepFn) -> Result<()> {
        self.carrier.check_same(&other.carrier)?;
        if self.dim != other.dim {
            return Err(Error::dims(self.dim, other.dim));
        }
        Ok(())
    }
}

impl fmt::Display for StepFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "⊥");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊔ ")?;
            }
            write!(f, "{}·χ{}", c.value, c.open)?;
        }
        Ok(())
    }
}

/// Cells of the common refinement for two functions.
pub fn joint_cells(f: &StepFn, g: &StepFn) -> Result<Vec<HalfOpenPiece>> {
    f.check_compatible(g)?;
    cells(&f.carrier, f.opens().chain(g.opens()))
}

/// Why a relation failed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// A cell of the common refinement where the two functions disagree.
    Cell(String),
    /// A prime filter (listed by member names) where the order fails.
    PrimeFilter(Vec<String>),
    /// Index of a component of the left-hand function that is not covered.
    Component(usize),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Cell(c) => write!(f, "cell {c}"),
            Witness::PrimeFilter(m) => write!(f, "prime filter {{{}}}", m.join(", ")),
            Witness::Component(i) => write!(f, "component #{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from_witness(witness: Option<Witness>) -> Self {
        Verdict {
            holds: witness.is_none(),
            witness,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderStrategy {
    Cells,
    PrimeFilters,
}

pub fn order(f: &StepFn, g: &StepFn, strategy: OrderStrategy, caps: &Caps) -> Result<Verdict> {
    match strategy {
        OrderStrategy::Cells => order_cells_verdict(f, g),
        OrderStrategy::PrimeFilters => order_primefilters_verdict(f, g, caps.lattice),
    }
}

/// `f ⊑ g` pointwise: both are constant on the joint cells.
pub fn order_cells(f: &StepFn, g: &StepFn) -> Result<bool> {
    Ok(order_cells_verdict(f, g)?.holds)
}

fn order_cells_verdict(f: &StepFn, g: &StepFn) -> Result<Verdict> {
    for cell in joint_cells(f, g)? {
        let x = cell.representative();
        if !box_leq(&f.eval(x)?, &g.eval(x)?)? {
            return Ok(Verdict::from_witness(Some(Witness::Cell(cell.to_string()))));
        }
    }
    Ok(Verdict::from_witness(None))
}

/// `f ⊑ g` as functions on the point space of the lattice generated by the
/// opens of both: at each prime filter `F` compare the joins of the boxes
/// whose opens lie in `F`.
pub fn order_primefilters(f: &StepFn, g: &StepFn) -> Result<bool> {
    Ok(order_primefilters_verdict(f, g, DEFAULT_LATTICE_CAP)?.holds)
}

fn order_primefilters_verdict(f: &StepFn, g: &StepFn, cap: usize) -> Result<Verdict> {
    f.check_compatible(g)?;
    let generators: Vec<OpenSet> = f.opens().chain(g.opens()).cloned().collect();
    let lattice = generate_lattice(&generators, &f.carrier, cap)?;
    let slot = |open: &OpenSet| {
        lattice
            .find_label(open)
            .expect("generators are elements of the generated lattice")
    };
    let f_slots: Vec<usize> = f.opens().map(slot).collect();
    let g_slots: Vec<usize> = g.opens().map(slot).collect();
    for filter in prime_filters(&lattice, PrimeFilterStrategy::JoinIrreducible)? {
        let value = |h: &StepFn, slots: &[usize]| {
            box_join(
                h.components
                    .iter()
                    .zip(slots)
                    .filter(|(_, &s)| filter.contains(s))
                    .map(|(c, _)| &c.value),
            )
        };
        if !box_leq(&value(f, &f_slots)?, &value(g, &g_slots)?)? {
            let names = filter
                .members
                .iter()
                .map(|&i| lattice.name(i).to_string())
                .collect();
            return Ok(Verdict::from_witness(Some(Witness::PrimeFilter(names))));
        }
    }
    Ok(Verdict::from_witness(None))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PreimageStrategy {
    /// `⋃ {⋂_{j∈S} W'_j | b ≪ ⊔_{j∈S} b'_j}` over subsets `S` of components.
    Formula,
    /// Union of the cells of `g` on which `b ≪ g`.
    Cells,
}

/// The open `U` with `{x | b ≪ g(x)} = U`, i.e. `g⁻¹(↟b)`.
pub fn preimage_way_above(
    g: &StepFn,
    b: &IntervalBox,
    strategy: PreimageStrategy,
) -> Result<OpenSet> {
    preimage_way_above_with(g, b, strategy, &Caps::default())
}

pub fn preimage_way_above_with(
    g: &StepFn,
    b: &IntervalBox,
    strategy: PreimageStrategy,
    caps: &Caps,
) -> Result<OpenSet> {
    b.check_dim(g.dim)?;
    match strategy {
        PreimageStrategy::Formula => preimage_formula(g, b, caps.subsets),
        PreimageStrategy::Cells => preimage_cells(g, b),
    }
}

fn preimage_cells(g: &StepFn, b: &IntervalBox) -> Result<OpenSet> {
    let mut hit = Vec::new();
    for cell in g.cells()? {
        if box_way_below(b, &g.eval(cell.representative())?)? {
            hit.push(cell);
        }
    }
    crate::open_ring::canonicalize(hit, &g.carrier)
}

fn preimage_formula(g: &StepFn, b: &IntervalBox, cap: usize) -> Result<OpenSet> {
    if g.components.len() > cap {
        return Err(Error::EnumerationCapExceeded {
            what: "component subsets",
            needed: g.components.len(),
            cap,
        });
    }
    // the empty subset joins to bottom, and only bottom is way-below bottom
    if b.is_bottom() {
        return Ok(OpenSet::full(&g.carrier));
    }
    let mut found = Vec::new();
    subsets_way_above(
        g,
        b,
        0,
        &OpenSet::full(&g.carrier),
        &IntervalBox::Bottom,
        &mut found,
    )?;
    OpenSet::union_all(&g.carrier, &found)
}

/// Extends the current subset by each later component. Supersets only
/// shrink the intersection, so a subset that already qualifies, has an empty
/// intersection, or has no join ends its branch.
fn subsets_way_above(
    g: &StepFn,
    b: &IntervalBox,
    start: usize,
    open: &OpenSet,
    value: &IntervalBox,
    found: &mut Vec<OpenSet>,
) -> Result<()> {
    for j in start..g.components.len() {
        let c = &g.components[j];
        let next_open = open.intersect(&c.open)?;
        if next_open.is_empty() {
            continue;
        }
        let next_value = match box_join([value, &c.value]) {
            Ok(v) => v,
            Err(Error::InconsistentJoin { .. }) => continue,
            Err(e) => return Err(e),
        };
        if box_way_below(b, &next_value)? {
            found.push(next_open);
        } else {
            subsets_way_above(g, b, j + 1, &next_open, &next_value, found)?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WayBelowStrategy {
    /// Preimages through the subset formula.
    Spectral,
    /// Preimages assembled cell by cell.
    AbsBasis,
}

/// `f ≪ g`: every component `b_i χ_{W_i}` of `f` has `W_i ⊆ g⁻¹(↟b_i)`.
pub fn way_below(f: &StepFn, g: &StepFn, strategy: WayBelowStrategy) -> Result<bool> {
    Ok(way_below_verdict(f, g, strategy, &Caps::default())?.holds)
}

pub fn way_below_verdict(
    f: &StepFn,
    g: &StepFn,
    strategy: WayBelowStrategy,
    caps: &Caps,
) -> Result<Verdict> {
    f.check_compatible(g)?;
    let pre = match strategy {
        WayBelowStrategy::Spectral => PreimageStrategy::Formula,
        WayBelowStrategy::AbsBasis => PreimageStrategy::Cells,
    };
    for (i, c) in f.components.iter().enumerate() {
        let u = preimage_way_above_with(g, &c.value, pre, caps)?;
        if !c.open.is_subset(&u)? {
            return Ok(Verdict::from_witness(Some(Witness::Component(i))));
        }
    }
    Ok(Verdict::from_witness(None))
}

/// Some `y` with `f ≪ y ≪ g` for every `f` in `family`.
///
/// On each joint cell `c` inside a component `W_i` of some `f`, with
/// `v = g(c)`, emit `m χ_c` where `m` lies halfway between `b_i` and `v`.
pub fn interpolate(family: &[StepFn], g: &StepFn) -> Result<StepFn> {
    for (index, f) in family.iter().enumerate() {
        if !way_below(f, g, WayBelowStrategy::AbsBasis)? {
            return Err(Error::NotWayBelow { index });
        }
    }
    let all_opens = family.iter().flat_map(|f| f.opens()).chain(g.opens());
    let grid = cells(&g.carrier, all_opens)?;
    let mut out = Vec::new();
    for f in family {
        for c in &f.components {
            for cell in &grid {
                let x = cell.representative();
                if !c.open.contains_point(x)? {
                    continue;
                }
                let v = g.eval(x)?;
                let m = c.value.midway(&v)?;
                out.push(Component::new(
                    OpenSet::from_piece(&g.carrier, cell.clone())?,
                    m,
                ));
            }
        }
    }
    make_stepfn(out, &g.carrier, g.dim)
}
