mod common;

use common::q;
use proptest::prelude::*;
use spectral_steps::{box_join, box_leq, box_meet, box_way_below, Interval, IntervalBox};

/// Boxes as eighths: `None` is bottom.
type Raw = Option<Vec<(i64, i64)>>;

fn make(raw: &Raw) -> IntervalBox {
    match raw {
        None => IntervalBox::Bottom,
        Some(d) => IntervalBox::new(
            d.iter()
                .map(|&(a, b)| Interval::new(q(a, 8), q(b, 8)).unwrap())
                .collect(),
        )
        .unwrap(),
    }
}

/// `x ⊑ y` as inclusion of point sets, bottom being the whole space.
fn raw_leq(x: &Raw, y: &Raw) -> bool {
    match (x, y) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x.iter().zip(y).all(|(a, b)| a.0 <= b.0 && b.1 <= a.1),
    }
}

/// `x ≪ y` iff `x ⊑ y'` for some box `y'` strictly containing `y`; on the
/// eighth grid a sixteenth of slack decides it.
fn raw_way_below(x: &Raw, y: &Raw) -> bool {
    let widen = |y: &Raw| {
        y.as_ref()
            .map(|d| d.iter().map(|&(a, b)| (2 * a - 1, 2 * b + 1)).collect())
    };
    let double = |x: &Raw| {
        x.as_ref()
            .map(|d| d.iter().map(|&(a, b)| (2 * a, 2 * b)).collect())
    };
    raw_leq(&double(x), &widen(y))
}

fn interval(lo: i64, hi: i64) -> impl Strategy<Value = (i64, i64)> {
    (lo..=hi, lo..=hi).prop_map(|(a, b)| (a.min(b), a.max(b)))
}

fn raw_box(dim: usize) -> impl Strategy<Value = Raw> {
    prop_oneof![
        1 => Just(None),
        6 => prop::collection::vec(interval(-16, 16), dim).prop_map(Some),
    ]
}

/// Bottom and every interval on the eighth grid of `[-1, 1]`.
fn all_intervals() -> Vec<Raw> {
    let mut out = vec![None];
    for a in -8..=8 {
        for b in a..=8 {
            out.push(Some(vec![(a, b)]));
        }
    }
    out
}

proptest! {
    #[test]
    fn order_matches_inclusion(x in raw_box(2), y in raw_box(2)) {
        let (bx, by) = (make(&x), make(&y));
        prop_assert_eq!(box_leq(&bx, &by).unwrap(), raw_leq(&x, &y));
        prop_assert_eq!(box_way_below(&bx, &by).unwrap(), raw_way_below(&x, &y));
    }

    #[test]
    fn order_laws(x in raw_box(2), y in raw_box(2), z in raw_box(2)) {
        let (bx, by, bz) = (make(&x), make(&y), make(&z));
        prop_assert!(box_leq(&bx, &bx).unwrap());
        if box_leq(&bx, &by).unwrap() && box_leq(&by, &bx).unwrap() {
            prop_assert_eq!(&bx, &by);
        }
        if box_leq(&bx, &by).unwrap() && box_leq(&by, &bz).unwrap() {
            prop_assert!(box_leq(&bx, &bz).unwrap());
        }
        if box_way_below(&bx, &by).unwrap() {
            prop_assert!(box_leq(&bx, &by).unwrap());
            if box_leq(&by, &bz).unwrap() {
                prop_assert!(box_way_below(&bx, &bz).unwrap());
            }
        }
    }

    #[test]
    fn interpolation_through_midway(x in raw_box(2), y in raw_box(2)) {
        let (bx, by) = (make(&x), make(&y));
        if box_way_below(&bx, &by).unwrap() && !by.is_bottom() {
            let m = bx.midway(&by).unwrap();
            prop_assert!(box_way_below(&bx, &m).unwrap());
            prop_assert!(box_way_below(&m, &by).unwrap());
        }
    }

    #[test]
    fn join_and_meet_are_bounds_on_the_grid(x in raw_box(1), y in raw_box(1)) {
        let (bx, by) = (make(&x), make(&y));
        let upper: Vec<Raw> = all_intervals()
            .into_iter()
            .filter(|z| raw_leq(&x, z) && raw_leq(&y, z))
            .collect();
        match box_join([&bx, &by]) {
            Ok(j) => {
                prop_assert!(box_leq(&bx, &j).unwrap() && box_leq(&by, &j).unwrap());
                for z in &upper {
                    prop_assert!(box_leq(&j, &make(z)).unwrap());
                }
            }
            Err(_) => {
                // disjoint boxes have no upper bound at all, not even off the grid
                let (Some(a), Some(b)) = (&x, &y) else { panic!("bottom always joins") };
                prop_assert!(a[0].1 < b[0].0 || b[0].1 < a[0].0);
                prop_assert!(upper.is_empty());
            }
        }
        let m = box_meet(&[bx.clone(), by.clone()]).unwrap();
        prop_assert!(box_leq(&m, &bx).unwrap() && box_leq(&m, &by).unwrap());
        for z in all_intervals() {
            if raw_leq(&z, &x) && raw_leq(&z, &y) {
                prop_assert!(box_leq(&make(&z), &m).unwrap());
            }
        }
    }
}

#[test]
fn dimension_mismatch_is_an_error() {
    let a = make(&Some(vec![(0, 1)]));
    let b = make(&Some(vec![(0, 1), (0, 1)]));
    assert!(box_leq(&a, &b).is_err());
    assert!(box_meet(&[a.clone(), IntervalBox::Bottom, b.clone()]).is_err());
    assert!(box_join([&a, &b]).is_err());
}
