//! Seeded generators of opens, boxes, and consistent step functions.
//!
//! Endpoints are drawn from a rational grid with bounded denominators so
//! that all generated objects stay exact and small. The generators are
//! deterministic for a given seed.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::interval_domain::{Interval, IntervalBox};
use crate::open_ring::{cells, Carrier, HalfOpenPiece, OpenSet};
use crate::rational::{int, ratio, Rational};
use crate::step_functions::{make_stepfn, preimage_way_above, Component, PreimageStrategy, StepFn};

#[derive(Debug, Clone)]
pub struct SampleConfig {
    pub carrier: Carrier,
    pub max_denominator: i64,
    pub max_components: usize,
    pub dim: usize,
    /// Range of box endpoints.
    pub value_lo: i64,
    pub value_hi: i64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        SampleConfig {
            carrier: Carrier::new(int(0), int(2)).unwrap(),
            max_denominator: 8,
            max_components: 5,
            dim: 1,
            value_lo: -2,
            value_hi: 4,
        }
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A grid rational in `[lo, hi]` with denominator at most `max_den`.
    pub fn rational(&mut self, lo: &Rational, hi: &Rational, max_den: i64) -> Rational {
        let q = self.rng.gen_range(1..=max_den.max(1));
        let qb = BigInt::from(q);
        let p_lo = (lo * Rational::from_integer(qb.clone()))
            .ceil()
            .to_integer();
        let p_hi = (hi * Rational::from_integer(qb.clone()))
            .floor()
            .to_integer();
        let span: i64 = (&p_hi - &p_lo).try_into().unwrap_or(0).max(0);
        let p = p_lo + BigInt::from(self.rng.gen_range(0..=span));
        Rational::new(p, qb)
    }

    fn grid_pair(&mut self, lo: &Rational, hi: &Rational, max_den: i64) -> (Rational, Rational) {
        loop {
            let a = self.rational(lo, hi, max_den);
            let b = self.rational(lo, hi, max_den);
            if a != b {
                return if a < b { (a, b) } else { (b, a) };
            }
        }
    }

    /// A union of one or two pieces; sometimes touching the left end,
    /// sometimes the whole carrier.
    pub fn open_set(&mut self, config: &SampleConfig) -> OpenSet {
        let c = &config.carrier;
        if self.rng.gen_ratio(1, 12) {
            return OpenSet::full(c);
        }
        let count = if self.rng.gen_bool(0.7) { 1 } else { 2 };
        let mut pieces = Vec::with_capacity(count);
        for _ in 0..count {
            let (a, b) = self.grid_pair(c.lo(), c.hi(), config.max_denominator);
            if self.rng.gen_ratio(1, 6) {
                pieces.push(HalfOpenPiece::left_end(b));
            } else {
                pieces.push(HalfOpenPiece::open(a, b));
            }
        }
        crate::open_ring::canonicalize(pieces, c).expect("grid pieces are well formed")
    }

    /// A non-bottom box with grid endpoints.
    pub fn proper_box(&mut self, config: &SampleConfig) -> IntervalBox {
        let lo = int(config.value_lo);
        let hi = int(config.value_hi);
        let dims = (0..config.dim)
            .map(|_| {
                let a = self.rational(&lo, &hi, config.max_denominator);
                let b = self.rational(&lo, &hi, config.max_denominator);
                Interval::new(a.clone().min(b.clone()), a.max(b)).unwrap()
            })
            .collect();
        IntervalBox::Boxed(dims)
    }

    pub fn interval_box(&mut self, config: &SampleConfig) -> IntervalBox {
        if self.rng.gen_ratio(1, 10) {
            IntervalBox::Bottom
        } else {
            self.proper_box(config)
        }
    }

    fn pad(&mut self, config: &SampleConfig) -> Rational {
        let den = config.max_denominator.max(1);
        ratio(self.rng.gen_range(1..=den), den)
    }

    /// `v` widened on every side by a positive grid amount, so that the
    /// result is way-below `v`.
    pub fn widen_strictly(&mut self, v: &IntervalBox, config: &SampleConfig) -> IntervalBox {
        match v {
            IntervalBox::Bottom => IntervalBox::Bottom,
            IntervalBox::Boxed(dims) => IntervalBox::Boxed(
                dims.iter()
                    .map(|i| {
                        let lo = i.lo() - self.pad(config);
                        let hi = i.hi() + self.pad(config);
                        Interval::new(lo, hi).unwrap()
                    })
                    .collect(),
            ),
        }
    }

    /// `v` widened on every side by a non-negative grid amount.
    pub fn widen(&mut self, v: &IntervalBox, config: &SampleConfig) -> IntervalBox {
        match v {
            IntervalBox::Bottom => IntervalBox::Bottom,
            IntervalBox::Boxed(dims) => IntervalBox::Boxed(
                dims.iter()
                    .map(|i| {
                        let lo = if self.rng.gen_bool(0.5) {
                            i.lo() - self.pad(config)
                        } else {
                            i.lo().clone()
                        };
                        let hi = if self.rng.gen_bool(0.5) {
                            i.hi() + self.pad(config)
                        } else {
                            i.hi().clone()
                        };
                        Interval::new(lo, hi).unwrap()
                    })
                    .collect(),
            ),
        }
    }

    /// A random consistent step function. Components that would break
    /// consistency are redrawn a few times, then dropped.
    pub fn stepfn(&mut self, config: &SampleConfig) -> StepFn {
        let target = self.rng.gen_range(0..=config.max_components);
        let mut comps: Vec<Component> = Vec::with_capacity(target);
        for _ in 0..target {
            for _attempt in 0..6 {
                let cand = Component::new(self.open_set(config), self.interval_box(config));
                comps.push(cand);
                if make_stepfn(comps.clone(), &config.carrier, config.dim).is_ok() {
                    break;
                }
                comps.pop();
            }
        }
        make_stepfn(comps, &config.carrier, config.dim).expect("kept components are consistent")
    }

    fn point(&mut self, config: &SampleConfig) -> Rational {
        let c = &config.carrier;
        self.rational(c.lo(), c.hi(), config.max_denominator)
    }

    /// A step function `h` with `h ⊑ f`: each component takes a random open
    /// `W` and a box containing `⋀ f(W)`.
    pub fn below(&mut self, f: &StepFn, config: &SampleConfig) -> StepFn {
        let target = self.rng.gen_range(0..=config.max_components);
        let mut comps = Vec::with_capacity(target);
        for _ in 0..target {
            let w = self.open_set(config);
            if w.is_empty() {
                continue;
            }
            let m = crate::galois::meet_over_open(f, &w).expect("same carrier");
            let b = if self.rng.gen_ratio(1, 8) {
                IntervalBox::Bottom
            } else {
                self.widen(&m, config)
            };
            comps.push(Component::new(w, b));
        }
        make_stepfn(comps, f.carrier(), f.dim()).expect("boxes all contain the values of f")
    }

    /// A step function `h` with `h ≪ g`: each component pairs a box strictly
    /// around some value of `g` with an open inside the preimage of `↟b`.
    pub fn way_below_of(&mut self, g: &StepFn, config: &SampleConfig) -> StepFn {
        let target = self.rng.gen_range(0..=config.max_components);
        let mut comps = Vec::with_capacity(target);
        for _ in 0..target {
            let x = self.point(config);
            let v = g.eval(&x).expect("point in carrier");
            let b = if v.is_bottom() || self.rng.gen_ratio(1, 10) {
                IntervalBox::Bottom
            } else {
                self.widen_strictly(&v, config)
            };
            let u = preimage_way_above(g, &b, PreimageStrategy::Cells).expect("same dimension");
            let w = match self.rng.gen_range(0..3) {
                0 => u.clone(),
                1 => self.cell_subset(&u, g),
                _ => u.intersect(&self.open_set(config)).unwrap(),
            };
            comps.push(Component::new(if w.is_empty() { u } else { w }, b));
        }
        make_stepfn(comps, g.carrier(), g.dim()).expect("boxes all contain the values of g")
    }

    /// A random union of the cells of `g` that lie inside `u`.
    fn cell_subset(&mut self, u: &OpenSet, g: &StepFn) -> OpenSet {
        let grid = cells(g.carrier(), g.opens().chain(std::iter::once(u))).unwrap();
        let picked: Vec<HalfOpenPiece> = grid
            .into_iter()
            .filter(|c| u.contains_point(c.representative()).unwrap())
            .filter(|_| self.rng.gen_bool(0.5))
            .collect();
        crate::open_ring::canonicalize(picked, g.carrier()).unwrap()
    }

    /// Either a step function way-below `g`, or one obtained from such by
    /// enlarging an open, which usually breaks the relation.
    pub fn near_way_below(&mut self, g: &StepFn, config: &SampleConfig) -> StepFn {
        let f = self.way_below_of(g, config);
        if f.components().is_empty() || self.rng.gen_bool(0.5) {
            return f;
        }
        let mut comps = f.components().to_vec();
        let k = self.rng.gen_range(0..comps.len());
        let extra = self.open_set(config);
        comps[k].open = comps[k].open.union(&extra).unwrap();
        make_stepfn(comps.clone(), g.carrier(), g.dim()).unwrap_or(f)
    }
}

pub fn denominator_at_most(x: &Rational, max_den: i64) -> bool {
    *x.denom() <= BigInt::from(max_den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::step_functions::{order_cells, way_below, WayBelowStrategy};

    #[test]
    fn deterministic_for_a_seed() {
        let config = SampleConfig::default();
        let a: Vec<StepFn> = {
            let mut s = Sampler::new(11);
            (0..5).map(|_| s.stepfn(&config)).collect()
        };
        let b: Vec<StepFn> = {
            let mut s = Sampler::new(11);
            (0..5).map(|_| s.stepfn(&config)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn grid_values() {
        let mut s = Sampler::new(1);
        for _ in 0..100 {
            let x = s.rational(&int(0), &int(2), 8);
            assert!(x >= int(0) && x <= int(2));
            assert!(denominator_at_most(&x, 8));
        }
    }

    #[test]
    fn constructed_relations_hold() {
        let config = SampleConfig::default();
        let mut s = Sampler::new(5);
        for _ in 0..30 {
            let g = s.stepfn(&config);
            let h = s.below(&g, &config);
            assert!(order_cells(&h, &g).unwrap());
            let f = s.way_below_of(&g, &config);
            assert!(way_below(&f, &g, WayBelowStrategy::AbsBasis).unwrap());
        }
    }
}
