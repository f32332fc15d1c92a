//! Finite bounded distributive lattices, their prime filters, and the
//! hull-kernel point space.
//!
//! For a finite lattice `L` the points are the prime filters, the opens are
//! `O_u = {F | u ∈ F}`, and `u ↦ O_u` is an isomorphism from `L` onto the
//! open-set lattice of the point space. [`roundtrip`] checks that
//! isomorphism explicitly.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::open_ring::{canonicalize, cells, Carrier, OpenSet};

pub const DEFAULT_LATTICE_CAP: usize = 4096;
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 24;

/// A finite bounded distributive lattice with explicit order and operation
/// tables. Elements may carry the [`OpenSet`] they stand for.
#[derive(Debug, Clone)]
pub struct FinDistLattice {
    names: Vec<String>,
    labels: Option<Vec<OpenSet>>,
    leq: Vec<bool>,
    meet: Vec<u32>,
    join: Vec<u32>,
    bottom: usize,
    top: usize,
}

impl FinDistLattice {
    /// Builds a lattice from an order matrix, deriving the operation tables
    /// and checking the partial-order, bound, and distributivity laws.
    pub fn from_order(
        names: Vec<String>,
        leq: Vec<Vec<bool>>,
        labels: Option<Vec<OpenSet>>,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidLattice("no elements".into()));
        }
        if leq.len() != n || leq.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidLattice(format!("leq must be {n}x{n}")));
        }
        let bad = |msg: String| Err(Error::InvalidLattice(msg));
        for a in 0..n {
            if !leq[a][a] {
                return bad(format!("leq not reflexive at {}", names[a]));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return bad(format!(
                        "{} and {} are distinct but equivalent",
                        names[a], names[b]
                    ));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return bad(format!(
                            "leq not transitive: {} ≤ {} ≤ {}",
                            names[a], names[b], names[c]
                        ));
                    }
                }
            }
        }
        let Some(bottom) = (0..n).find(|&b| (0..n).all(|x| leq[b][x])) else {
            return bad("no bottom element".into());
        };
        let Some(top) = (0..n).find(|&t| (0..n).all(|x| leq[x][t])) else {
            return bad("no top element".into());
        };

        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let uppers: Vec<usize> = (0..n).filter(|&u| leq[a][u] && leq[b][u]).collect();
                let Some(&lub) = uppers.iter().find(|&&u| uppers.iter().all(|&v| leq[u][v])) else {
                    return bad(format!("{} and {} have no join", names[a], names[b]));
                };
                let lowers: Vec<usize> = (0..n).filter(|&l| leq[l][a] && leq[l][b]).collect();
                let Some(&glb) = lowers.iter().find(|&&l| lowers.iter().all(|&v| leq[v][l])) else {
                    return bad(format!("{} and {} have no meet", names[a], names[b]));
                };
                join[a * n + b] = lub as u32;
                meet[a * n + b] = glb as u32;
            }
        }

        if let Some(labels) = &labels {
            if labels.len() != n {
                return bad(format!("{} labels for {n} elements", labels.len()));
            }
            for a in 0..n {
                for b in 0..n {
                    if labels[a].is_subset(&labels[b])? != leq[a][b] {
                        return bad(format!(
                            "label inclusion disagrees with leq at ({}, {})",
                            names[a], names[b]
                        ));
                    }
                }
            }
        }

        let lattice = FinDistLattice {
            names,
            labels,
            leq: leq.into_iter().flatten().collect(),
            meet,
            join,
            bottom,
            top,
        };
        if let Some((x, y, z)) = lattice.distributivity_failure() {
            return bad(format!(
                "not distributive at ({}, {}, {})",
                lattice.names[x], lattice.names[y], lattice.names[z]
            ));
        }
        Ok(lattice)
    }

    fn distributivity_failure(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let lhs = self.meet(x, self.join(y, z));
                    let rhs = self.join(self.meet(x, y), self.meet(x, z));
                    if lhs != rhs {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, i: usize) -> Option<&OpenSet> {
        self.labels.as_ref().map(|l| &l[i])
    }

    pub fn labels(&self) -> Option<&[OpenSet]> {
        self.labels.as_deref()
    }

    /// Index of the element labelled `open`, if any.
    pub fn find_label(&self, open: &OpenSet) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == open)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.len() + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn to_file(&self) -> LatticeFile {
        let n = self.len();
        LatticeFile {
            elements: self.names.clone(),
            leq: (0..n)
                .map(|a| (0..n).map(|b| Flag::Bool(self.leq(a, b))).collect())
                .collect(),
            labels: self
                .labels
                .as_ref()
                .map(|ls| self.names.iter().cloned().zip(ls.iter().cloned()).collect()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Flag {
    Bool(bool),
    Int(u8),
}

impl Flag {
    fn as_bool(self) -> Result<bool> {
        match self {
            Flag::Bool(b) => Ok(b),
            Flag::Int(0) => Ok(false),
            Flag::Int(1) => Ok(true),
            Flag::Int(k) => Err(Error::InvalidLattice(format!("leq entry {k} is not 0/1"))),
        }
    }
}

/// On-disk lattice: element names, an order matrix of booleans or 0/1, and
/// optional labels keyed by element name.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    pub leq: Vec<Vec<Flag>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<BTreeMap<String, OpenSet>>,
}

impl TryFrom<LatticeFile> for FinDistLattice {
    type Error = Error;

    fn try_from(f: LatticeFile) -> Result<Self> {
        let leq = f
            .leq
            .iter()
            .map(|row| row.iter().map(|x| x.as_bool()).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut seen = HashSet::new();
        for name in &f.elements {
            if !seen.insert(name) {
                return Err(Error::InvalidLattice(format!("duplicate element {name}")));
            }
        }
        let labels = match f.labels {
            None => None,
            Some(mut map) => {
                let mut out = Vec::with_capacity(f.elements.len());
                for name in &f.elements {
                    out.push(map.remove(name).ok_or_else(|| {
                        Error::InvalidLattice(format!("missing label for {name}"))
                    })?);
                }
                if let Some(extra) = map.keys().next() {
                    return Err(Error::InvalidLattice(format!(
                        "label for unknown element {extra}"
                    )));
                }
                Some(out)
            }
        };
        FinDistLattice::from_order(f.elements, leq, labels)
    }
}

type Bits = Vec<u64>;

fn bit_or(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x | y).collect()
}

fn bit_and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn popcount(a: &Bits) -> u32 {
    a.iter().map(|w| w.count_ones()).sum()
}

/// Smallest sublattice of the ring of opens containing `generators`, `∅` and
/// the carrier, with elements labelled by their open sets.
///
/// Elements are ordered by the number of cells they cover, then by cell
/// pattern, so the bottom is first and the top last.
pub fn generate_lattice(
    generators: &[OpenSet],
    carrier: &Carrier,
    cap: usize,
) -> Result<FinDistLattice> {
    let cell_list = cells(carrier, generators)?;
    let words = cell_list.len().div_ceil(64);
    let to_bits = |s: &OpenSet| -> Result<Bits> {
        let mut bits = vec![0u64; words];
        for (k, c) in cell_list.iter().enumerate() {
            if s.contains_point(c.representative())? {
                bits[k / 64] |= 1 << (k % 64);
            }
        }
        Ok(bits)
    };
    let over_cap = |needed: usize| Error::EnumerationCapExceeded {
        what: "sublattice",
        needed,
        cap,
    };

    // intersections of generators (with the carrier as the empty intersection)
    let full = to_bits(&OpenSet::full(carrier))?;
    let mut meets: Vec<Bits> = vec![full];
    let mut seen: HashSet<Bits> = meets.iter().cloned().collect();
    for g in generators {
        let gb = to_bits(g)?;
        let snapshot = meets.len();
        for i in 0..snapshot {
            let m = bit_and(&meets[i], &gb);
            if seen.insert(m.clone()) {
                meets.push(m);
                if seen.len() + 1 > cap {
                    return Err(over_cap(seen.len() + 1));
                }
            }
        }
    }

    // unions of those intersections, plus the empty union
    let empty = vec![0u64; words];
    let mut elems: Vec<Bits> = vec![empty.clone()];
    let mut seen: HashSet<Bits> = HashSet::from([empty]);
    for m in &meets {
        let snapshot = elems.len();
        for i in 0..snapshot {
            let u = bit_or(&elems[i], m);
            if seen.insert(u.clone()) {
                elems.push(u);
                if elems.len() > cap {
                    return Err(over_cap(elems.len()));
                }
            }
        }
    }
    elems.sort_by(|a, b| {
        popcount(a)
            .cmp(&popcount(b))
            .then_with(|| a.iter().rev().cmp(b.iter().rev()))
    });

    let n = elems.len();
    let index: HashMap<&Bits, u32> = elems
        .iter()
        .enumerate()
        .map(|(i, b)| (b, i as u32))
        .collect();
    let mut leq = vec![false; n * n];
    let mut meet = vec![0u32; n * n];
    let mut join = vec![0u32; n * n];
    for a in 0..n {
        for b in a..n {
            let m = index[&bit_and(&elems[a], &elems[b])];
            let j = index[&bit_or(&elems[a], &elems[b])];
            meet[a * n + b] = m;
            meet[b * n + a] = m;
            join[a * n + b] = j;
            join[b * n + a] = j;
            leq[a * n + b] = m as usize == a;
            leq[b * n + a] = m as usize == b;
        }
    }

    let labels = elems
        .iter()
        .map(|bits| {
            let pieces = cell_list
                .iter()
                .enumerate()
                .filter(|(k, _)| bits[k / 64] >> (k % 64) & 1 == 1)
                .map(|(_, c)| c.clone())
                .collect();
            canonicalize(pieces, carrier)
        })
        .collect::<Result<Vec<_>>>()?;
    let names = labels.iter().map(|l| l.to_string()).collect();

    Ok(FinDistLattice {
        names,
        labels: Some(labels),
        leq,
        meet,
        join,
        bottom: 0,
        top: n - 1,
    })
}

/// A prime filter, as the sorted list of its member indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PrimeFilter {
    pub members: Vec<usize>,
}

impl PrimeFilter {
    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrimeFilterStrategy {
    /// Every subset of the carrier set, screened by the filter and primality
    /// predicates. Exponential; refuses lattices larger than `cap`.
    Exhaustive { cap: usize },
    /// Principal upper sets `↑x` of join-irreducible `x`. In a finite
    /// distributive lattice these are exactly the prime filters.
    #[default]
    JoinIrreducible,
}

/// All prime filters of `lattice`, sorted by member set.
pub fn prime_filters(
    lattice: &FinDistLattice,
    strategy: PrimeFilterStrategy,
) -> Result<Vec<PrimeFilter>> {
    let mut out = match strategy {
        PrimeFilterStrategy::Exhaustive { cap } => exhaustive_prime_filters(lattice, cap)?,
        PrimeFilterStrategy::JoinIrreducible => join_irreducible_filters(lattice),
    };
    out.sort();
    Ok(out)
}

fn join_irreducible_filters(l: &FinDistLattice) -> Vec<PrimeFilter> {
    let n = l.len();
    let mut out = Vec::new();
    for x in 0..n {
        if x == l.bottom() {
            continue;
        }
        let below = (0..n)
            .filter(|&y| y != x && l.leq(y, x))
            .fold(l.bottom(), |acc, y| l.join(acc, y));
        if below != x {
            out.push(PrimeFilter {
                members: (0..n).filter(|&y| l.leq(x, y)).collect(),
            });
        }
    }
    out
}

fn exhaustive_prime_filters(l: &FinDistLattice, cap: usize) -> Result<Vec<PrimeFilter>> {
    let n = l.len();
    if n > cap.min(63) {
        return Err(Error::EnumerationCapExceeded {
            what: "exhaustive prime-filter search",
            needed: n,
            cap: cap.min(63),
        });
    }
    let up: Vec<u64> = (0..n)
        .map(|x| {
            (0..n)
                .filter(|&y| l.leq(x, y))
                .fold(0u64, |m, y| m | 1 << y)
        })
        .collect();
    let has = |mask: u64, i: usize| mask >> i & 1 == 1;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if has(mask, l.bottom()) {
            continue;
        }
        let upper = (0..n).all(|x| !has(mask, x) || up[x] & !mask == 0);
        if !upper {
            continue;
        }
        let mut ok = true;
        'pairs: for x in 0..n {
            for y in 0..n {
                let both = has(mask, x) && has(mask, y);
                if both && !has(mask, l.meet(x, y)) {
                    ok = false;
                    break 'pairs;
                }
                if has(mask, l.join(x, y)) && !has(mask, x) && !has(mask, y) {
                    ok = false;
                    break 'pairs;
                }
            }
        }
        if ok {
            out.push(PrimeFilter {
                members: (0..n).filter(|&i| has(mask, i)).collect(),
            });
        }
    }
    Ok(out)
}

/// The elements of a labelled lattice that contain the point `x`.
pub fn point_trace(lattice: &FinDistLattice, x: &crate::rational::Rational) -> Result<PrimeFilter> {
    let labels = lattice
        .labels()
        .ok_or_else(|| Error::InvalidLattice("lattice has no labels".into()))?;
    let mut members = Vec::new();
    for (i, l) in labels.iter().enumerate() {
        if l.contains_point(x)? {
            members.push(i);
        }
    }
    Ok(PrimeFilter { members })
}

/// Points (prime filters) with the basic open `O_u` of every element `u`,
/// as a set of point indices.
#[derive(Debug, Clone)]
pub struct HullKernelSpace {
    pub points: Vec<PrimeFilter>,
    pub opens: Vec<BTreeSet<usize>>,
}

pub fn hull_kernel_space(lattice: &FinDistLattice) -> Result<HullKernelSpace> {
    hull_kernel_space_with(lattice, PrimeFilterStrategy::default())
}

pub fn hull_kernel_space_with(
    lattice: &FinDistLattice,
    strategy: PrimeFilterStrategy,
) -> Result<HullKernelSpace> {
    let points = prime_filters(lattice, strategy)?;
    let opens = (0..lattice.len())
        .map(|u| {
            points
                .iter()
                .enumerate()
                .filter(|(_, p)| p.contains(u))
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    Ok(HullKernelSpace { points, opens })
}

/// Outcome of comparing `L` with the open-set lattice of its point space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Roundtrip {
    pub points: usize,
    pub opens: usize,
    pub isomorphic: bool,
    /// A pair `(u, v)` where `u ≤ v` and `O_u ⊆ O_v` disagree, or where
    /// `O_{u∨v}`, `O_{u∧v}` differ from `O_u ∪ O_v`, `O_u ∩ O_v`.
    pub witness: Option<(usize, usize)>,
}

pub fn roundtrip(lattice: &FinDistLattice) -> Result<Roundtrip> {
    let space = hull_kernel_space(lattice)?;
    let n = lattice.len();
    let distinct: BTreeSet<&BTreeSet<usize>> = space.opens.iter().collect();
    let mut witness = None;
    'outer: for u in 0..n {
        for v in 0..n {
            let (ou, ov) = (&space.opens[u], &space.opens[v]);
            let union: BTreeSet<usize> = ou.union(ov).copied().collect();
            let inter: BTreeSet<usize> = ou.intersection(ov).copied().collect();
            if lattice.leq(u, v) != ou.is_subset(ov)
                || space.opens[lattice.join(u, v)] != union
                || space.opens[lattice.meet(u, v)] != inter
            {
                witness = Some((u, v));
                break 'outer;
            }
        }
    }
    // order-reflecting on a poset already forces injectivity; preserving
    // binary unions makes the basic opens the whole topology
    Ok(Roundtrip {
        points: space.points.len(),
        opens: distinct.len(),
        isomorphic: witness.is_none() && distinct.len() == n,
        witness,
    })
}

/// Whether `u ↦ O_u` is an order isomorphism onto the opens of the point space.
pub fn roundtrip_iso_check(lattice: &FinDistLattice) -> Result<bool> {
    Ok(roundtrip(lattice)?.isomorphic)
}
