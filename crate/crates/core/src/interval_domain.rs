//! The interval domain of rational boxes with a bottom element standing for
//! the whole space, ordered by reverse inclusion.
//!
//! A [`IntervalBox`] is either [`IntervalBox::Bottom`] or a product of closed
//! rational intervals. `x ⊑ y` holds when `y` is contained in `x`; `x ≪ y`
//! when `y` sits strictly inside `x`. Joins are intersections (partial),
//! meets are hulls (total on non-empty families).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, midpoint, Rational};

/// Closed rational interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo > hi {
            return Err(Error::MalformedInterval(format!(
                "[{}, {}]",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains_strictly(&self, other: &Interval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    pub fn contains_value(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.clone().max(other.lo.clone());
        let hi = self.hi.clone().min(other.hi.clone());
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Interval halfway between `self` and `inner` endpoint by endpoint.
    pub fn midway(&self, inner: &Interval) -> Interval {
        Interval {
            lo: midpoint(&self.lo, &inner.lo),
            hi: midpoint(&self.hi, &inner.hi),
        }
    }

    /// Widens both ends by `pad`.
    pub fn inflate(&self, pad: &Rational) -> Interval {
        Interval {
            lo: &self.lo - pad,
            hi: &self.hi + pad,
        }
    }

    /// `[0, delta] * self` for `delta >= 0`: the hull of `0` and `delta * self`.
    pub fn sweep_from_zero(&self, delta: &Rational) -> Interval {
        let scaled = self.scale(delta);
        let zero = Rational::zero();
        Interval {
            lo: scaled.lo.min(zero.clone()),
            hi: scaled.hi.max(zero),
        }
    }

    pub fn scale(&self, k: &Rational) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Interval { lo, hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

/// Width of a box; the bottom element has no finite width.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Width {
    Finite(Rational),
    Infinite,
}

/// An element of the interval domain: bottom (the whole space), or a
/// non-empty product of closed rational intervals.
///
/// Bottom carries no dimension and is compatible with every dimension;
/// non-bottom boxes are compared only against boxes of the same dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "wire::BoxWire", into = "wire::BoxWire")]
pub enum IntervalBox {
    Bottom,
    Boxed(Vec<Interval>),
}

impl IntervalBox {
    pub fn new(dims: Vec<Interval>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::dims(1, 0));
        }
        Ok(IntervalBox::Boxed(dims))
    }

    /// Box from `(lo, hi)` pairs of integers-over-denominators; handy in tests.
    pub fn from_pairs(pairs: &[(Rational, Rational)]) -> Result<Self> {
        let dims = pairs
            .iter()
            .map(|(lo, hi)| Interval::new(lo.clone(), hi.clone()))
            .collect::<Result<Vec<_>>>()?;
        IntervalBox::new(dims)
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Ok(IntervalBox::Boxed(vec![Interval::new(lo, hi)?]))
    }

    pub fn point(values: Vec<Rational>) -> Self {
        IntervalBox::Boxed(values.into_iter().map(Interval::point).collect())
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, IntervalBox::Bottom)
    }

    /// `None` for bottom.
    pub fn dim(&self) -> Option<usize> {
        match self {
            IntervalBox::Bottom => None,
            IntervalBox::Boxed(d) => Some(d.len()),
        }
    }

    pub fn dims(&self) -> Option<&[Interval]> {
        match self {
            IntervalBox::Bottom => None,
            IntervalBox::Boxed(d) => Some(d),
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.dim() {
            Some(d) if d != n => Err(Error::dims(n, d)),
            _ => Ok(()),
        }
    }

    /// Componentwise hull with another non-bottom box; bottom absorbs.
    pub fn hull(&self, other: &IntervalBox) -> Result<IntervalBox> {
        box_meet(&[self.clone(), other.clone()])
    }

    /// Box halfway between `self` and the strictly inner box `inner`.
    ///
    /// Bottom outer boxes are replaced by `inner` widened by one unit on every
    /// side, so the result sits strictly between the two in the way-below
    /// order whenever `self ≪ inner`.
    pub fn midway(&self, inner: &IntervalBox) -> Result<IntervalBox> {
        match (self, inner) {
            (_, IntervalBox::Bottom) => Ok(IntervalBox::Bottom),
            (IntervalBox::Bottom, IntervalBox::Boxed(v)) => Ok(IntervalBox::Boxed(
                v.iter().map(|i| i.inflate(&int(1))).collect(),
            )),
            (IntervalBox::Boxed(b), IntervalBox::Boxed(v)) => {
                if b.len() != v.len() {
                    return Err(Error::dims(b.len(), v.len()));
                }
                Ok(IntervalBox::Boxed(
                    b.iter().zip(v).map(|(o, i)| o.midway(i)).collect(),
                ))
            }
        }
    }
}

impl fmt::Display for IntervalBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntervalBox::Bottom => write!(f, "⊥"),
            IntervalBox::Boxed(dims) => {
                for (i, d) in dims.iter().enumerate() {
                    if i > 0 {
                        write!(f, "×")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

fn same_dim(a: &[Interval], b: &[Interval]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::dims(a.len(), b.len()));
    }
    Ok(())
}

/// `x ⊑ y`: `x` is bottom, or `y` lies inside `x`.
pub fn box_leq(x: &IntervalBox, y: &IntervalBox) -> Result<bool> {
    match (x, y) {
        (IntervalBox::Bottom, _) => Ok(true),
        (IntervalBox::Boxed(_), IntervalBox::Bottom) => Ok(false),
        (IntervalBox::Boxed(a), IntervalBox::Boxed(b)) => {
            same_dim(a, b)?;
            Ok(a.iter().zip(b).all(|(ai, bi)| ai.contains(bi)))
        }
    }
}

/// `x ≪ y`: `x` is bottom, or `y` lies in the interior of `x`.
pub fn box_way_below(x: &IntervalBox, y: &IntervalBox) -> Result<bool> {
    match (x, y) {
        (IntervalBox::Bottom, _) => Ok(true),
        (IntervalBox::Boxed(_), IntervalBox::Bottom) => Ok(false),
        (IntervalBox::Boxed(a), IntervalBox::Boxed(b)) => {
            same_dim(a, b)?;
            Ok(a.iter().zip(b).all(|(ai, bi)| ai.contains_strictly(bi)))
        }
    }
}

/// Least upper bound: the intersection of the non-bottom members.
///
/// An empty or all-bottom family joins to bottom; disjoint boxes have no
/// upper bound and yield [`Error::InconsistentJoin`].
pub fn box_join<'a, I>(xs: I) -> Result<IntervalBox>
where
    I: IntoIterator<Item = &'a IntervalBox>,
{
    let mut acc: Option<Vec<Interval>> = None;
    for x in xs {
        let IntervalBox::Boxed(dims) = x else {
            continue;
        };
        acc = Some(match acc {
            None => dims.clone(),
            Some(cur) => {
                same_dim(&cur, dims)?;
                let mut out = Vec::with_capacity(cur.len());
                for (a, b) in cur.iter().zip(dims) {
                    match a.intersect(b) {
                        Some(i) => out.push(i),
                        None => return Err(Error::InconsistentJoin { cell: None }),
                    }
                }
                out
            }
        });
    }
    Ok(acc.map_or(IntervalBox::Bottom, IntervalBox::Boxed))
}

/// Greatest lower bound of a non-empty family: bottom if any member is
/// bottom, the componentwise hull otherwise.
pub fn box_meet(xs: &[IntervalBox]) -> Result<IntervalBox> {
    let (first, rest) = xs.split_first().ok_or(Error::EmptyMeet)?;
    let mut acc = match first {
        IntervalBox::Bottom => None,
        IntervalBox::Boxed(d) => Some(d.clone()),
    };
    for x in rest {
        match (acc.as_mut(), x) {
            (_, IntervalBox::Bottom) => acc = None,
            (None, IntervalBox::Boxed(_)) => {}
            (Some(cur), IntervalBox::Boxed(d)) => {
                same_dim(cur, d)?;
                for (a, b) in cur.iter_mut().zip(d) {
                    *a = a.hull(b);
                }
            }
        }
    }
    // a bottom anywhere wins, but dimensions of the rest still have to agree
    if acc.is_none() {
        let mut n = None;
        for x in xs {
            if let Some(d) = x.dim() {
                match n {
                    None => n = Some(d),
                    Some(m) if m != d => return Err(Error::dims(m, d)),
                    _ => {}
                }
            }
        }
    }
    Ok(acc.map_or(IntervalBox::Bottom, IntervalBox::Boxed))
}

/// Largest side length; infinite for bottom.
pub fn box_width(x: &IntervalBox) -> Width {
    match x {
        IntervalBox::Bottom => Width::Infinite,
        IntervalBox::Boxed(dims) => Width::Finite(
            dims.iter()
                .map(Interval::width)
                .max()
                .unwrap_or_else(Rational::zero),
        ),
    }
}

/// A bounded-complete domain with decidable order and way-below relation.
///
/// Only the interval domain implements it here; the step-function machinery
/// is written against concrete boxes but the order-theoretic surface is
/// collected in this trait.
pub trait BcDomain: Sized + Clone {
    fn bottom() -> Self;
    fn leq(&self, other: &Self) -> Result<bool>;
    fn way_below(&self, other: &Self) -> Result<bool>;
    fn join_all(xs: &[Self]) -> Result<Self>;
    fn meet_all(xs: &[Self]) -> Result<Self>;
}

impl BcDomain for IntervalBox {
    fn bottom() -> Self {
        IntervalBox::Bottom
    }

    fn leq(&self, other: &Self) -> Result<bool> {
        box_leq(self, other)
    }

    fn way_below(&self, other: &Self) -> Result<bool> {
        box_way_below(self, other)
    }

    fn join_all(xs: &[Self]) -> Result<Self> {
        box_join(xs)
    }

    fn meet_all(xs: &[Self]) -> Result<Self> {
        box_meet(xs)
    }
}

mod wire {
    use serde::{Deserialize, Serialize};

    use super::{Interval, IntervalBox};
    use crate::error::Error;
    use crate::rational::{format_rational, parse_rational};

    #[derive(Serialize, Deserialize)]
    pub struct BoxWire {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bottom: Option<bool>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        dims: Option<Vec<[String; 2]>>,
    }

    impl TryFrom<BoxWire> for IntervalBox {
        type Error = Error;

        fn try_from(w: BoxWire) -> Result<Self, Error> {
            match (w.bottom, w.dims) {
                (Some(true), None) => Ok(IntervalBox::Bottom),
                (None | Some(false), Some(dims)) => {
                    let dims = dims
                        .iter()
                        .map(|[lo, hi]| Interval::new(parse_rational(lo)?, parse_rational(hi)?))
                        .collect::<Result<Vec<_>, _>>()?;
                    IntervalBox::new(dims)
                }
                _ => Err(Error::MalformedInterval(
                    "box must be {\"bottom\":true} or {\"dims\":[...]}".into(),
                )),
            }
        }
    }

    impl From<IntervalBox> for BoxWire {
        fn from(b: IntervalBox) -> Self {
            match b {
                IntervalBox::Bottom => BoxWire {
                    bottom: Some(true),
                    dims: None,
                },
                IntervalBox::Boxed(dims) => BoxWire {
                    bottom: None,
                    dims: Some(
                        dims.iter()
                            .map(|i| [format_rational(i.lo()), format_rational(i.hi())])
                            .collect(),
                    ),
                },
            }
        }
    }
}
