mod common;

use std::collections::BTreeSet;

use common::{q, Q};
use proptest::prelude::*;
use spectral_steps::lattice_duality::{
    generate_lattice, point_trace, prime_filters, roundtrip, FinDistLattice, PrimeFilter,
    PrimeFilterStrategy, DEFAULT_LATTICE_CAP,
};
use spectral_steps::{Carrier, HalfOpenPiece, OpenSet};

fn carrier() -> Carrier {
    Carrier::new(q(0, 1), q(2, 1)).unwrap()
}

fn probe() -> Vec<Q> {
    (0..=16).map(|i| q(i, 8)).collect()
}

/// Opens with endpoints on the quarter grid, so the eighth probe meets
/// every cell.
fn open_set() -> impl Strategy<Value = OpenSet> {
    let piece = prop_oneof![
        (1i64..=8).prop_map(|b| HalfOpenPiece::left_end(q(b, 4))),
        (0i64..8, 1i64..=8).prop_map(|(a, l)| HalfOpenPiece::open(q(a, 4), q((a + l).min(8), 4))),
    ];
    prop::collection::vec(piece, 0..3)
        .prop_map(|ps| spectral_steps::canonicalize(ps, &carrier()).unwrap())
}

/// Membership pattern of an open on the probe.
fn pattern(u: &OpenSet) -> Vec<bool> {
    probe()
        .iter()
        .map(|x| u.contains_point(x).unwrap())
        .collect()
}

/// Closure of the generators, `∅` and the carrier under binary union and
/// intersection, as probe patterns.
fn naive_closure(gens: &[OpenSet]) -> BTreeSet<Vec<bool>> {
    let n = probe().len();
    let mut set: BTreeSet<Vec<bool>> = gens.iter().map(pattern).collect();
    set.insert(vec![false; n]);
    set.insert(vec![true; n]);
    loop {
        let items: Vec<Vec<bool>> = set.iter().cloned().collect();
        let before = set.len();
        for a in &items {
            for b in &items {
                set.insert(a.iter().zip(b).map(|(x, y)| *x || *y).collect());
                set.insert(a.iter().zip(b).map(|(x, y)| *x && *y).collect());
            }
        }
        if set.len() == before {
            return set;
        }
    }
}

/// Prime filters by checking every subset of elements against the
/// definition.
fn brute_prime_filters(l: &FinDistLattice) -> Vec<PrimeFilter> {
    let n = l.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let has = |i: usize| mask >> i & 1 == 1;
        let proper = has(l.top()) && !has(l.bottom());
        let upward = (0..n).all(|a| (0..n).all(|b| !(has(a) && l.leq(a, b)) || has(b)));
        let meets = (0..n).all(|a| (0..n).all(|b| !(has(a) && has(b)) || has(l.meet(a, b))));
        let prime = (0..n).all(|a| (0..n).all(|b| !has(l.join(a, b)) || has(a) || has(b)));
        if proper && upward && meets && prime {
            out.push(PrimeFilter {
                members: (0..n).filter(|&i| has(i)).collect(),
            });
        }
    }
    out.sort();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_lattice_is_the_closure(gens in prop::collection::vec(open_set(), 0..4)) {
        let l = generate_lattice(&gens, &carrier(), DEFAULT_LATTICE_CAP).unwrap();
        let labels: BTreeSet<Vec<bool>> = l.labels().unwrap().iter().map(pattern).collect();
        prop_assert_eq!(labels.len(), l.len());
        prop_assert_eq!(labels, naive_closure(&gens));
        for a in 0..l.len() {
            for b in 0..l.len() {
                let (la, lb) = (l.label(a).unwrap(), l.label(b).unwrap());
                prop_assert_eq!(l.leq(a, b), la.is_subset(lb).unwrap());
                prop_assert_eq!(l.label(l.join(a, b)).unwrap(), &la.union(lb).unwrap());
                prop_assert_eq!(l.label(l.meet(a, b)).unwrap(), &la.intersect(lb).unwrap());
            }
        }
    }

    #[test]
    fn prime_filters_three_ways(gens in prop::collection::vec(open_set(), 0..4)) {
        let l = generate_lattice(&gens, &carrier(), DEFAULT_LATTICE_CAP).unwrap();
        let fast = prime_filters(&l, PrimeFilterStrategy::JoinIrreducible).unwrap();
        if l.len() <= 16 {
            prop_assert_eq!(&fast, &brute_prime_filters(&l));
            let slow = prime_filters(&l, PrimeFilterStrategy::Exhaustive { cap: 16 }).unwrap();
            prop_assert_eq!(&fast, &slow);
        }
        // one point per Venn region of the generators
        let regions: BTreeSet<Vec<bool>> = probe()
            .iter()
            .map(|x| gens.iter().map(|g| g.contains_point(x).unwrap()).collect())
            .collect();
        prop_assert_eq!(fast.len(), regions.len());
        // traces of points are exactly the prime filters
        let traces: BTreeSet<PrimeFilter> =
            probe().iter().map(|x| point_trace(&l, x).unwrap()).collect();
        prop_assert_eq!(traces, fast.iter().cloned().collect::<BTreeSet<_>>());
        let rt = roundtrip(&l).unwrap();
        prop_assert!(rt.isomorphic, "{:?}", rt);
        prop_assert_eq!(rt.points, fast.len());
    }
}

#[test]
fn worked_examples() {
    let c = Carrier::new(q(0, 1), q(3, 1)).unwrap();
    let a = OpenSet::interval(&c, q(0, 1), q(1, 1)).unwrap();
    let b = OpenSet::interval(&c, q(1, 1), q(2, 1)).unwrap();
    let l = generate_lattice(&[a.clone(), b.clone()], &c, DEFAULT_LATTICE_CAP).unwrap();
    assert_eq!(l.len(), 5);
    let pf = brute_prime_filters(&l);
    assert_eq!(pf.len(), 3);
    assert_eq!(
        prime_filters(&l, PrimeFilterStrategy::default()).unwrap(),
        pf
    );
    let ia = l.find_label(&a).unwrap();
    let ib = l.find_label(&b).unwrap();
    let up = |x: usize| PrimeFilter {
        members: (0..l.len()).filter(|&y| l.leq(x, y)).collect(),
    };
    let top_only = PrimeFilter {
        members: vec![l.top()],
    };
    let mut expected = vec![up(ia), up(ib), top_only];
    expected.sort();
    assert_eq!(pf, expected);
    let rt = roundtrip(&l).unwrap();
    assert_eq!((rt.points, rt.isomorphic), (3, true));

    // the four-element Boolean lattice from an order matrix
    let t = true;
    let f = false;
    let square = FinDistLattice::from_order(
        vec!["0".into(), "a".into(), "b".into(), "1".into()],
        vec![
            vec![t, t, t, t],
            vec![f, t, f, t],
            vec![f, f, t, t],
            vec![f, f, f, t],
        ],
        None,
    )
    .unwrap();
    assert_eq!(brute_prime_filters(&square).len(), 2);
    assert_eq!(
        prime_filters(&square, PrimeFilterStrategy::default())
            .unwrap()
            .len(),
        2
    );

    // a three-element chain has two prime filters
    let chain = FinDistLattice::from_order(
        vec!["0".into(), "m".into(), "1".into()],
        vec![vec![t, t, t], vec![f, t, t], vec![f, f, t]],
        None,
    )
    .unwrap();
    assert_eq!(brute_prime_filters(&chain).len(), 2);
    assert!(roundtrip(&chain).unwrap().isomorphic);
}
