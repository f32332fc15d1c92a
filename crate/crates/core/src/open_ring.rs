//! Finite unions of rational half-open intervals `(a, b]`, clipped to a
//! bounded carrier `[lo, hi]`.
//!
//! These form a ring of sets (closed under finite union and intersection,
//! containing the empty set and the carrier) that is a base for the rational
//! upper limit topology on the carrier. Sets containing the left end of the
//! carrier are written with a [`Lower::LeftEnd`] piece; `(q, lo] ∩ [lo, hi]`
//! is the open singleton `{lo}`.
//!
//! Every [`OpenSet`] is kept canonical: pieces sorted, disjoint and
//! non-adjacent, so structural equality is set equality.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{format_rational, Rational};

/// The closed interval `[lo, hi]`, `lo < hi`, carrying the subspace topology.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[String; 2]", into = "[String; 2]")]
pub struct Carrier {
    lo: Rational,
    hi: Rational,
}

impl Carrier {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self> {
        if lo >= hi {
            return Err(Error::MalformedInterval(format!(
                "carrier [{}, {}] must have lo < hi",
                format_rational(&lo),
                format_rational(&hi)
            )));
        }
        Ok(Carrier { lo, hi })
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn check_point(&self, x: &Rational) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::PointOutsideCarrier {
                point: format_rational(x),
                carrier: self.to_string(),
            })
        }
    }

    pub(crate) fn check_same(&self, other: &Carrier) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::CarrierMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{},{}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

impl TryFrom<[String; 2]> for Carrier {
    type Error = Error;
    fn try_from([lo, hi]: [String; 2]) -> Result<Self> {
        use crate::rational::parse_rational;
        Carrier::new(parse_rational(&lo)?, parse_rational(&hi)?)
    }
}

impl From<Carrier> for [String; 2] {
    fn from(c: Carrier) -> Self {
        [format_rational(&c.lo), format_rational(&c.hi)]
    }
}

/// Left boundary of a piece.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lower {
    /// The piece includes the left end of the carrier.
    LeftEnd,
    /// Open at `q`: the piece starts just after `q`.
    Open(Rational),
}

impl PartialOrd for Lower {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lower {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Lower::LeftEnd, Lower::LeftEnd) => Ordering::Equal,
            (Lower::LeftEnd, Lower::Open(_)) => Ordering::Less,
            (Lower::Open(_), Lower::LeftEnd) => Ordering::Greater,
            (Lower::Open(a), Lower::Open(b)) => a.cmp(b),
        }
    }
}

/// `(q, upper]`, or `[carrier.lo, upper]` when the lower end is
/// [`Lower::LeftEnd`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HalfOpenPiece {
    pub lower: Lower,
    pub upper: Rational,
}

impl HalfOpenPiece {
    pub fn open(q: Rational, upper: Rational) -> Self {
        HalfOpenPiece {
            lower: Lower::Open(q),
            upper,
        }
    }

    pub fn left_end(upper: Rational) -> Self {
        HalfOpenPiece {
            lower: Lower::LeftEnd,
            upper,
        }
    }

    pub fn contains(&self, carrier: &Carrier, x: &Rational) -> bool {
        x <= &self.upper
            && match &self.lower {
                Lower::LeftEnd => carrier.lo() <= x,
                Lower::Open(q) => q < x,
            }
    }

    /// A point of the piece; any point works on a cell since inputs are
    /// constant there. The upper end always belongs to the piece.
    pub fn representative(&self) -> &Rational {
        &self.upper
    }

    fn intersect(&self, other: &HalfOpenPiece) -> Option<HalfOpenPiece> {
        let lower = self.lower.clone().max(other.lower.clone());
        let upper = self.upper.clone().min(other.upper.clone());
        let non_empty = match &lower {
            Lower::LeftEnd => true,
            Lower::Open(q) => q < &upper,
        };
        non_empty.then_some(HalfOpenPiece { lower, upper })
    }

    fn contains_piece(&self, inner: &HalfOpenPiece) -> bool {
        self.lower <= inner.lower && inner.upper <= self.upper
    }
}

impl fmt::Display for HalfOpenPiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            Lower::LeftEnd => write!(f, "[leftend,{}]", format_rational(&self.upper)),
            Lower::Open(q) => write!(
                f,
                "({},{}]",
                format_rational(q),
                format_rational(&self.upper)
            ),
        }
    }
}

/// Canonical member of the ring of opens over a carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "wire::OpenWire", into = "wire::OpenWire")]
pub struct OpenSet {
    carrier: Carrier,
    pieces: Vec<HalfOpenPiece>,
}

impl OpenSet {
    pub fn empty(carrier: &Carrier) -> Self {
        OpenSet {
            carrier: carrier.clone(),
            pieces: Vec::new(),
        }
    }

    pub fn full(carrier: &Carrier) -> Self {
        OpenSet {
            carrier: carrier.clone(),
            pieces: vec![HalfOpenPiece::left_end(carrier.hi.clone())],
        }
    }

    /// `(a, b]` clipped to the carrier.
    pub fn interval(carrier: &Carrier, a: Rational, b: Rational) -> Result<Self> {
        canonicalize(vec![HalfOpenPiece::open(a, b)], carrier)
    }

    pub fn from_piece(carrier: &Carrier, piece: HalfOpenPiece) -> Result<Self> {
        canonicalize(vec![piece], carrier)
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn pieces(&self) -> &[HalfOpenPiece] {
        &self.pieces
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_full(&self) -> bool {
        *self == OpenSet::full(&self.carrier)
    }

    pub fn union(&self, other: &OpenSet) -> Result<OpenSet> {
        self.carrier.check_same(&other.carrier)?;
        let raw = self.pieces.iter().chain(&other.pieces).cloned().collect();
        Ok(merge_sorted(&self.carrier, raw))
    }

    pub fn intersect(&self, other: &OpenSet) -> Result<OpenSet> {
        self.carrier.check_same(&other.carrier)?;
        let mut raw = Vec::new();
        for p in &self.pieces {
            for q in &other.pieces {
                raw.extend(p.intersect(q));
            }
        }
        Ok(merge_sorted(&self.carrier, raw))
    }

    pub fn is_subset(&self, other: &OpenSet) -> Result<bool> {
        self.carrier.check_same(&other.carrier)?;
        // canonical pieces are maximal connected components
        Ok(self
            .pieces
            .iter()
            .all(|p| other.pieces.iter().any(|q| q.contains_piece(p))))
    }

    pub fn contains_point(&self, x: &Rational) -> Result<bool> {
        self.carrier.check_point(x)?;
        Ok(self.pieces.iter().any(|p| p.contains(&self.carrier, x)))
    }

    /// Union of arbitrarily many opens over `carrier`.
    pub fn union_all<'a, I>(carrier: &Carrier, sets: I) -> Result<OpenSet>
    where
        I: IntoIterator<Item = &'a OpenSet>,
    {
        let mut raw = Vec::new();
        for s in sets {
            carrier.check_same(&s.carrier)?;
            raw.extend(s.pieces.iter().cloned());
        }
        Ok(merge_sorted(carrier, raw))
    }
}

impl fmt::Display for OpenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pieces.is_empty() {
            return write!(f, "∅");
        }
        for (i, p) in self.pieces.iter().enumerate() {
            if i > 0 {
                write!(f, "∪")?;
            }
            match &p.lower {
                Lower::LeftEnd if p.upper == self.carrier.lo => {
                    write!(f, "{{{}}}", format_rational(&p.upper))?
                }
                Lower::LeftEnd => write!(
                    f,
                    "[{},{}]",
                    format_rational(&self.carrier.lo),
                    format_rational(&p.upper)
                )?,
                Lower::Open(_) => write!(f, "{p}")?,
            }
        }
        Ok(())
    }
}

/// Clips raw pieces to the carrier and puts them in canonical form.
pub fn canonicalize(raw: Vec<HalfOpenPiece>, carrier: &Carrier) -> Result<OpenSet> {
    let mut clipped = Vec::with_capacity(raw.len());
    for piece in raw {
        let upper = piece.upper.clone().min(carrier.hi.clone());
        let lower = match &piece.lower {
            Lower::Open(q) if q < &carrier.lo => Lower::LeftEnd,
            l => l.clone(),
        };
        let well_formed = match &lower {
            Lower::LeftEnd => upper >= carrier.lo,
            Lower::Open(q) => q < &upper,
        };
        if !well_formed {
            return Err(Error::MalformedInterval(format!(
                "{piece} over carrier {carrier}"
            )));
        }
        clipped.push(HalfOpenPiece { lower, upper });
    }
    Ok(merge_sorted(carrier, clipped))
}

/// Sorts well-formed, in-carrier pieces and fuses overlapping or adjacent ones.
fn merge_sorted(carrier: &Carrier, mut pieces: Vec<HalfOpenPiece>) -> OpenSet {
    pieces.sort_by(|a, b| a.lower.cmp(&b.lower).then(a.upper.cmp(&b.upper)));
    let mut out: Vec<HalfOpenPiece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        if let Some(last) = out.last_mut() {
            let touches = match &p.lower {
                Lower::LeftEnd => true,
                Lower::Open(q) => q <= &last.upper,
            };
            if touches {
                if p.upper > last.upper {
                    last.upper = p.upper;
                }
                continue;
            }
        }
        out.push(p);
    }
    OpenSet {
        carrier: carrier.clone(),
        pieces: out,
    }
}

/// Common refinement of the carrier: the singleton `{lo}` followed by the
/// half-open pieces between consecutive breakpoints, where the breakpoints
/// are the carrier ends and every endpoint of every input piece.
///
/// Each input set is a union of the returned cells.
pub fn cells<'a, I>(carrier: &Carrier, sets: I) -> Result<Vec<HalfOpenPiece>>
where
    I: IntoIterator<Item = &'a OpenSet>,
{
    let mut breaks = vec![carrier.lo.clone(), carrier.hi.clone()];
    for s in sets {
        carrier.check_same(&s.carrier)?;
        for p in &s.pieces {
            if let Lower::Open(q) = &p.lower {
                breaks.push(q.clone());
            }
            breaks.push(p.upper.clone());
        }
    }
    breaks.sort();
    breaks.dedup();
    let mut out = Vec::with_capacity(breaks.len());
    out.push(HalfOpenPiece::left_end(carrier.lo.clone()));
    for w in breaks.windows(2) {
        out.push(HalfOpenPiece::open(w[0].clone(), w[1].clone()));
    }
    Ok(out)
}

mod wire {
    use serde::{Deserialize, Serialize};

    use super::{canonicalize, Carrier, HalfOpenPiece, Lower, OpenSet};
    use crate::error::Error;
    use crate::rational::{format_rational, parse_rational};

    #[derive(Serialize, Deserialize)]
    pub struct OpenWire {
        carrier: Carrier,
        pieces: Vec<[String; 2]>,
    }

    impl TryFrom<OpenWire> for OpenSet {
        type Error = Error;

        fn try_from(w: OpenWire) -> Result<Self, Error> {
            let raw = w
                .pieces
                .iter()
                .map(|[lower, upper]| {
                    let lower = if lower == "leftend" {
                        Lower::LeftEnd
                    } else {
                        Lower::Open(parse_rational(lower)?)
                    };
                    Ok(HalfOpenPiece {
                        lower,
                        upper: parse_rational(upper)?,
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            canonicalize(raw, &w.carrier)
        }
    }

    impl From<OpenSet> for OpenWire {
        fn from(s: OpenSet) -> Self {
            let pieces = s
                .pieces
                .iter()
                .map(|p| {
                    let lower = match &p.lower {
                        Lower::LeftEnd => "leftend".to_string(),
                        Lower::Open(q) => format_rational(q),
                    };
                    [lower, format_rational(&p.upper)]
                })
                .collect();
            OpenWire {
                carrier: s.carrier,
                pieces,
            }
        }
    }
}
