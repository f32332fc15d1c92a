//! Validated Euler enclosures for `y' = f(y)`, `y(t0) = y0` on `[t0, T]`.
//!
//! Over a partition `q_0 < … < q_k` the enclosure holds a node box `Y(q_j)`
//! per partition point and a piece box per half-open piece `(q_j, q_{j+1}]`.
//! One application of [`phi_apply`] advances every piece from the node on
//! its left:
//!
//! ```text
//! B_j        a-priori bound: Y(q_j) + [0,Δ]·F(B_j) ⊆ B_j
//! piece'_j = Y(q_j) + [0,Δ]·F(R_j)
//! Y'(q_j+1) = Y(q_j) + Δ·F(R_j)
//! ```
//!
//! with `R_j = B_j ⊓ piece_j`. Pieces are constant on `(q_j, q_{j+1}]`, so the
//! enclosure is a step function in the upper limit topology: its bounds may
//! jump at partition points, where the node boxes are tighter than the piece
//! on their left.

mod expr;

pub use expr::{eval_field, parse_field, FieldExpr};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval_domain::{box_leq, box_meet, box_width, Interval, IntervalBox, Width};
use crate::open_ring::{Carrier, HalfOpenPiece, OpenSet};
use crate::rational::{format_rational, int, parse_rational, ratio, Rational};
use crate::step_functions::{make_stepfn, Component, StepFn};

/// Iteration cap of the a-priori bound search.
pub const APRIORI_ITERATIONS: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IvpProblem {
    n: usize,
    t0: Rational,
    t_end: Rational,
    y0: IntervalBox,
    field: Vec<FieldExpr>,
}

impl IvpProblem {
    pub fn new(
        t0: Rational,
        t_end: Rational,
        y0: IntervalBox,
        field: Vec<FieldExpr>,
    ) -> Result<Self> {
        if t0 >= t_end {
            return Err(Error::InvalidProblem("t0 must be below T".into()));
        }
        let n = y0
            .dim()
            .ok_or_else(|| Error::InvalidProblem("y0 must not be bottom".into()))?;
        if field.len() != n {
            return Err(Error::dims(n, field.len()));
        }
        // rejects out-of-range variables up front
        eval_field(&field, &y0)?;
        Ok(IvpProblem {
            n,
            t0,
            t_end,
            y0,
            field,
        })
    }

    /// Parses the field text against the dimension of `y0`.
    pub fn parse(t0: Rational, t_end: Rational, y0: IntervalBox, field: &str) -> Result<Self> {
        let n = y0
            .dim()
            .ok_or_else(|| Error::InvalidProblem("y0 must not be bottom".into()))?;
        IvpProblem::new(t0, t_end, y0, parse_field(field, n)?)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn t0(&self) -> &Rational {
        &self.t0
    }

    pub fn t_end(&self) -> &Rational {
        &self.t_end
    }

    pub fn y0(&self) -> &IntervalBox {
        &self.y0
    }

    pub fn field(&self) -> &[FieldExpr] {
        &self.field
    }

    pub fn uniform_partition(&self, k: usize) -> Vec<Rational> {
        let span = &self.t_end - &self.t0;
        (0..=k)
            .map(|j| &self.t0 + &span * ratio(j as i64, k as i64))
            .collect()
    }
}

/// On-disk problem: `{"n":1,"t0":"0","T":"1","y0":{...},"field":"y1"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub t0: String,
    #[serde(rename = "T")]
    pub t_end: String,
    pub y0: IntervalBox,
    pub field: String,
}

impl TryFrom<ProblemFile> for IvpProblem {
    type Error = Error;

    fn try_from(f: ProblemFile) -> Result<Self> {
        if f.y0.dim() != Some(f.n) {
            return Err(Error::InvalidProblem(format!(
                "y0 must be a non-bottom box of dimension {}",
                f.n
            )));
        }
        IvpProblem::parse(
            parse_rational(&f.t0)?,
            parse_rational(&f.t_end)?,
            f.y0,
            &f.field,
        )
    }
}

/// Partitioned enclosure: `nodes[j]` encloses `y(q_j)`, `pieces[j]` encloses
/// `y` on `(q_j, q_{j+1}]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    partition: Vec<Rational>,
    pieces: Vec<IntervalBox>,
    nodes: Vec<IntervalBox>,
}

impl Enclosure {
    /// `y0` at `t0`, bottom everywhere else.
    pub fn initial(problem: &IvpProblem, partition: Vec<Rational>) -> Result<Self> {
        let k = partition.len().saturating_sub(1);
        if k == 0 {
            return Err(Error::InvalidProblem(
                "partition needs at least one piece".into(),
            ));
        }
        if partition[0] != problem.t0 || partition[k] != problem.t_end {
            return Err(Error::InvalidProblem("partition must span [t0, T]".into()));
        }
        if partition.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidProblem(
                "partition must be strictly increasing".into(),
            ));
        }
        let mut nodes = vec![IntervalBox::Bottom; k + 1];
        nodes[0] = problem.y0.clone();
        Ok(Enclosure {
            partition,
            pieces: vec![IntervalBox::Bottom; k],
            nodes,
        })
    }

    pub fn partition(&self) -> &[Rational] {
        &self.partition
    }

    pub fn pieces(&self) -> &[IntervalBox] {
        &self.pieces
    }

    pub fn nodes(&self) -> &[IntervalBox] {
        &self.nodes
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    fn carrier(&self) -> Carrier {
        Carrier::new(
            self.partition[0].clone(),
            self.partition[self.piece_count()].clone(),
        )
        .expect("partition is increasing")
    }

    /// Value of the enclosure as a step function: the node box at `t0`, the
    /// piece box on `(q_j, q_{j+1}]`.
    pub fn value_at(&self, t: &Rational) -> Result<&IntervalBox> {
        self.carrier().check_point(t)?;
        if t == &self.partition[0] {
            return Ok(&self.nodes[0]);
        }
        // first q_{j+1} >= t
        let j = self.partition[1..].partition_point(|q| q < t);
        Ok(&self.pieces[j])
    }
}

/// `y + [0,Δ]·v`, dimension by dimension.
fn sweep(y: &[Interval], v: &[Interval], delta: &Rational) -> Vec<Interval> {
    y.iter()
        .zip(v)
        .map(|(a, b)| a + &b.sweep_from_zero(delta))
        .collect()
}

fn magnitude_exceeded(dims: &[Interval], limit: &Rational) -> bool {
    dims.iter().any(|i| i.lo() < &-limit || i.hi() > limit)
}

/// A box `B` with `y + [0,Δ]·F(B) ⊆ B`, found by widening from `y`.
///
/// Each round that fails the containment test replaces `B` by the hull of
/// `B` and the candidate, widened on each side by a tenth of its width plus
/// 1/1024. Gives up with [`Error::DivergenceBound`] after
/// [`APRIORI_ITERATIONS`] rounds, or earlier once an endpoint passes 2^128
/// in magnitude.
pub fn apriori_bound(
    field: &[FieldExpr],
    y: &IntervalBox,
    delta: &Rational,
) -> Result<IntervalBox> {
    if delta <= &int(0) {
        return Err(Error::InvalidProblem("step must be positive".into()));
    }
    let y_dims = y.dims().ok_or(Error::BottomInput)?;
    let limit: Rational = Rational::from_integer(num_traits::pow(num_bigint::BigInt::from(2), 128));
    let pad = ratio(1, 1024);
    let tenth = ratio(1, 10);
    let mut bound = y_dims.to_vec();
    for _ in 0..APRIORI_ITERATIONS {
        let fb = eval_field(field, &IntervalBox::Boxed(bound.clone()))?;
        let cand = sweep(y_dims, fb.dims().expect("field of a box is a box"), delta);
        if bound.iter().zip(&cand).all(|(b, c)| b.contains(c)) {
            return Ok(IntervalBox::Boxed(bound));
        }
        bound = bound
            .iter()
            .zip(&cand)
            .map(|(b, c)| {
                let h = b.hull(c);
                let grow = &h.width() * &tenth + &pad;
                h.inflate(&grow)
            })
            .collect();
        if magnitude_exceeded(&bound, &limit) {
            break;
        }
    }
    Err(Error::DivergenceBound { step: None })
}

/// One application of the Euler functional to `enclosure`.
pub fn phi_apply(problem: &IvpProblem, enclosure: &Enclosure) -> Result<Enclosure> {
    let k = enclosure.piece_count();
    let mut nodes = Vec::with_capacity(k + 1);
    let mut pieces = Vec::with_capacity(k);
    nodes.push(problem.y0.clone());
    for j in 0..k {
        let node = &enclosure.nodes[j];
        let Some(node_dims) = node.dims() else {
            pieces.push(IntervalBox::Bottom);
            nodes.push(IntervalBox::Bottom);
            continue;
        };
        let delta = &enclosure.partition[j + 1] - &enclosure.partition[j];
        let bound = apriori_bound(&problem.field, node, &delta).map_err(|e| match e {
            Error::DivergenceBound { .. } => Error::DivergenceBound { step: Some(j) },
            other => other,
        })?;
        let refined = match &enclosure.pieces[j] {
            IntervalBox::Bottom => bound,
            piece => box_meet(&[bound, piece.clone()])?,
        };
        let slope = eval_field(&problem.field, &refined)?;
        let slope_dims = slope.dims().expect("field of a box is a box");
        pieces.push(IntervalBox::Boxed(sweep(node_dims, slope_dims, &delta)));
        nodes.push(IntervalBox::Boxed(
            node_dims
                .iter()
                .zip(slope_dims)
                .map(|(a, s)| a + &s.scale(&delta))
                .collect(),
        ));
    }
    Ok(Enclosure {
        partition: enclosure.partition.clone(),
        pieces,
        nodes,
    })
}

/// Every iterate from the initial enclosure up to and including the first
/// repeated one, over the uniform `k`-piece partition.
pub fn fixpoint_iterates(problem: &IvpProblem, k: usize) -> Result<Vec<Enclosure>> {
    if k == 0 {
        return Err(Error::InvalidProblem("need at least one piece".into()));
    }
    let cap = k + 2;
    let mut iterates = vec![Enclosure::initial(problem, problem.uniform_partition(k))?];
    for _ in 0..cap {
        let next = phi_apply(problem, iterates.last().unwrap())?;
        let done = &next == iterates.last().unwrap();
        iterates.push(next);
        if done {
            return Ok(iterates);
        }
    }
    Err(Error::NoConvergence { iterations: cap })
}

/// Iterates the functional from the bottom enclosure until two successive
/// iterates coincide. Returns the fixpoint and the number of applications.
pub fn solve_fixpoint(problem: &IvpProblem, k: usize) -> Result<(Enclosure, usize)> {
    let mut iterates = fixpoint_iterates(problem, k)?;
    let count = iterates.len() - 1;
    Ok((iterates.pop().unwrap(), count))
}

/// Largest piece width; infinite while any piece is still bottom.
pub fn enclosure_width(enclosure: &Enclosure) -> Width {
    enclosure
        .pieces
        .iter()
        .map(box_width)
        .max()
        .unwrap_or(Width::Finite(int(0)))
}

/// `{t0} ↦ node_0`, `(q_j, q_{j+1}] ↦ piece_j`.
pub fn enclosure_to_stepfn(enclosure: &Enclosure) -> Result<StepFn> {
    let carrier = enclosure.carrier();
    let dim = enclosure.nodes[0].dim().expect("initial node is a box");
    let mut comps = vec![Component::new(
        OpenSet::from_piece(&carrier, HalfOpenPiece::left_end(carrier.lo().clone()))?,
        enclosure.nodes[0].clone(),
    )];
    for (j, piece) in enclosure.pieces.iter().enumerate() {
        if piece.is_bottom() {
            continue;
        }
        comps.push(Component::new(
            OpenSet::interval(
                &carrier,
                enclosure.partition[j].clone(),
                enclosure.partition[j + 1].clone(),
            )?,
            piece.clone(),
        ));
    }
    make_stepfn(comps, &carrier, dim)
}

/// Whether the enclosure at `t` contains the box `v`.
pub fn enclosure_contains(enclosure: &Enclosure, t: &Rational, v: &IntervalBox) -> Result<bool> {
    box_leq(enclosure.value_at(t)?, v)
}

/// CSV rows: `q_lo,q_hi,y1_lo,y1_hi,…,node`. Node rows have `q_lo = q_hi`
/// and `node = true`; rows run node, piece, node, …, node.
pub fn enclosure_csv(enclosure: &Enclosure) -> String {
    let n = enclosure.nodes[0].dim().unwrap_or(0);
    let mut out = String::from("q_lo,q_hi");
    for i in 1..=n {
        out.push_str(&format!(",y{i}_lo,y{i}_hi"));
    }
    out.push_str(",node\n");
    let row = |out: &mut String, lo: &Rational, hi: &Rational, b: &IntervalBox, node: bool| {
        out.push_str(&format_rational(lo));
        out.push(',');
        out.push_str(&format_rational(hi));
        match b.dims() {
            Some(dims) => {
                for d in dims {
                    out.push_str(&format!(
                        ",{},{}",
                        format_rational(d.lo()),
                        format_rational(d.hi())
                    ));
                }
            }
            None => {
                for _ in 0..n {
                    out.push_str(",bottom,bottom");
                }
            }
        }
        out.push_str(if node { ",true\n" } else { ",false\n" });
    };
    let q = &enclosure.partition;
    for j in 0..enclosure.piece_count() {
        row(&mut out, &q[j], &q[j], &enclosure.nodes[j], true);
        row(&mut out, &q[j], &q[j + 1], &enclosure.pieces[j], false);
    }
    let k = enclosure.piece_count();
    row(&mut out, &q[k], &q[k], &enclosure.nodes[k], true);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceLevel {
    pub pieces: usize,
    pub width: Width,
    /// `width(E_k) / width(E_{k/2})`, from the second level on.
    pub ratio: Option<Rational>,
}

/// Fixpoint widths for `base, 2·base, …` pieces.
pub fn convergence(
    problem: &IvpProblem,
    base: usize,
    levels: usize,
) -> Result<Vec<ConvergenceLevel>> {
    let mut out: Vec<ConvergenceLevel> = Vec::with_capacity(levels);
    for level in 0..levels {
        let k = base << level;
        let (enc, _) = solve_fixpoint(problem, k)?;
        let width = enclosure_width(&enc);
        let ratio = match (out.last().map(|l| &l.width), &width) {
            (Some(Width::Finite(prev)), Width::Finite(w)) if prev > &int(0) => Some(w / prev),
            _ => None,
        };
        out.push(ConvergenceLevel {
            pieces: k,
            width,
            ratio,
        });
    }
    Ok(out)
}
