//! Acceptance suite: one line per criterion, non-zero exit on any failure.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{cos_sin_bounds, exp_bounds, q, Q};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_steps::galois::{envelope_restricted, fuzz_adjunction};
use spectral_steps::ivp::{convergence, solve_fixpoint, IvpProblem};
use spectral_steps::lattice_duality::{
    generate_lattice, prime_filters, roundtrip, roundtrip_iso_check, PrimeFilterStrategy,
    DEFAULT_LATTICE_CAP,
};
use spectral_steps::sample::{SampleConfig, Sampler};
use spectral_steps::spectral_points::{ideal_join, ideal_meet, ideal_way_below, PrincipalIdeal};
use spectral_steps::step_functions::{
    interpolate, make_stepfn, order_cells, order_primefilters, preimage_way_above, way_below,
    Component, PreimageStrategy, StepFn, WayBelowStrategy,
};
use spectral_steps::{
    box_leq, box_width, cells, parse_rational, Carrier, HalfOpenPiece, IntervalBox, OpenSet, Width,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn within(limit: Duration, start: Instant, out: Outcome) -> Outcome {
    let took = start.elapsed();
    match out {
        Ok(m) if took > limit => Err(format!("{m}; took {took:.1?}, limit {limit:?}")),
        other => other,
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let report = fuzz_adjunction(1000, 1).map_err(|e| e.to_string())?;
    // retraction again, compared cell by cell for exact equality of values
    let mut s = Sampler::new(2);
    let mut exact = 0;
    for case in 0..1000 {
        let c = SampleConfig {
            dim: 1 + case % 2,
            ..SampleConfig::default()
        };
        let f = s.stepfn(&c);
        let back = envelope_restricted(&f).map_err(|e| e.to_string())?;
        let cells =
            spectral_steps::step_functions::joint_cells(&f, &back).map_err(|e| e.to_string())?;
        if cells
            .iter()
            .all(|x| f.eval(x.representative()) == back.eval(x.representative()))
        {
            exact += 1;
        }
    }
    let out = check(
        report.all_agree() && exact == 1000,
        format!(
            "adjunction agrees on {}/{} pairs ({} with both sides true); (f_*)* = f on {}/1000 by order, {exact}/1000 cellwise",
            report.agreements,
            report.cases,
            report.both_true,
            report.cases - report.retraction_failures
        ),
    );
    within(Duration::from_secs(60), start, out)
}

fn criterion_2() -> Outcome {
    let mut s = Sampler::new(3);
    let (mut agree, mut held) = (0, 0);
    for case in 0..1000 {
        let c = SampleConfig {
            dim: 1 + case % 2,
            ..SampleConfig::default()
        };
        let g = s.stepfn(&c);
        let f = s.near_way_below(&g, &c);
        let a = way_below(&f, &g, WayBelowStrategy::Spectral).map_err(|e| e.to_string())?;
        let b = way_below(&f, &g, WayBelowStrategy::AbsBasis).map_err(|e| e.to_string())?;
        agree += (a == b) as usize;
        held += a as usize;
    }
    let mut same = 0;
    for case in 0..1000 {
        let c = SampleConfig {
            dim: 1 + case % 2,
            ..SampleConfig::default()
        };
        let g = s.stepfn(&c);
        let b = if case % 3 == 0 {
            let x = s.rational(c.carrier.lo(), c.carrier.hi(), 8);
            s.widen_strictly(&g.eval(&x).unwrap(), &c)
        } else {
            s.interval_box(&c)
        };
        let u = preimage_way_above(&g, &b, PreimageStrategy::Formula).map_err(|e| e.to_string())?;
        let v = preimage_way_above(&g, &b, PreimageStrategy::Cells).map_err(|e| e.to_string())?;
        same += (u == v) as usize;
    }
    check(
        agree == 1000 && same == 1000,
        format!("way-below strategies agree on {agree}/1000 ({held} related), preimages equal on {same}/1000"),
    )
}

fn criterion_3() -> Outcome {
    let mut s = Sampler::new(4);
    let c = SampleConfig::default();
    let wb = |f: &StepFn, g: &StepFn| way_below(f, g, WayBelowStrategy::AbsBasis).unwrap();
    let mut transitive = 0;
    for _ in 0..500 {
        let h = s.stepfn(&c);
        let g = s.way_below_of(&h, &c);
        let f = s.way_below_of(&g, &c);
        if wb(&f, &g) && wb(&g, &h) && wb(&f, &h) {
            transitive += 1;
        }
    }
    let mut interpolated = 0;
    for case in 0..200 {
        let g = s.stepfn(&c);
        let family: Vec<StepFn> = (0..case % 4).map(|_| s.way_below_of(&g, &c)).collect();
        match interpolate(&family, &g) {
            Ok(y) if family.iter().all(|f| wb(f, &y)) && wb(&y, &g) => interpolated += 1,
            _ => {}
        }
    }
    check(
        transitive == 500 && interpolated == 200,
        format!("transitive on {transitive}/500 chains, interpolant between on {interpolated}/200"),
    )
}

fn criterion_4() -> Outcome {
    let mut s = Sampler::new(5);
    let (mut agree, mut held) = (0, 0);
    for case in 0..1000 {
        let c = SampleConfig {
            carrier: Carrier::new(q(0, 1), q(3, 1)).unwrap(),
            max_denominator: 2,
            dim: 1 + case % 2,
            ..SampleConfig::default()
        };
        let g = s.stepfn(&c);
        let f = if case % 2 == 0 {
            s.below(&g, &c)
        } else {
            s.stepfn(&c)
        };
        let a = order_cells(&f, &g).map_err(|e| e.to_string())?;
        let b = order_primefilters(&f, &g).map_err(|e| e.to_string())?;
        agree += (a == b) as usize;
        held += a as usize;
    }
    check(
        agree == 1000,
        format!("order procedures agree on {agree}/1000 ({held} ordered)"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(6);
    let c = SampleConfig::default();
    let (mut iso, mut counted) = (0, 0);
    for _ in 0..200 {
        let n = s.rng().gen_range(0..=4);
        let gens: Vec<OpenSet> = (0..n).map(|_| s.open_set(&c)).collect();
        let l =
            generate_lattice(&gens, &c.carrier, DEFAULT_LATTICE_CAP).map_err(|e| e.to_string())?;
        iso += roundtrip_iso_check(&l).map_err(|e| e.to_string())? as usize;
        let pf =
            prime_filters(&l, PrimeFilterStrategy::JoinIrreducible).map_err(|e| e.to_string())?;
        let venn: BTreeSet<Vec<bool>> = cells(&c.carrier, &gens)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|cell| {
                gens.iter()
                    .map(|g| g.contains_point(cell.representative()).unwrap())
                    .collect()
            })
            .collect();
        counted += (pf.len() == venn.len()) as usize;
    }
    let carrier = Carrier::new(q(0, 1), q(3, 1)).unwrap();
    let a = OpenSet::interval(&carrier, q(0, 1), q(1, 1)).unwrap();
    let b = OpenSet::interval(&carrier, q(1, 1), q(2, 1)).unwrap();
    let worked =
        generate_lattice(&[a, b], &carrier, DEFAULT_LATTICE_CAP).map_err(|e| e.to_string())?;
    let worked_pf = prime_filters(&worked, PrimeFilterStrategy::Exhaustive { cap: 24 })
        .map_err(|e| e.to_string())?
        .len();
    let worked_points = roundtrip(&worked).map_err(|e| e.to_string())?.points;
    let out = check(
        iso == 200 && counted == 200 && worked.len() == 5 && worked_pf == 3 && worked_points == 3,
        format!(
            "round trip on {iso}/200, prime filters = Venn cells on {counted}/200; worked lattice: {} elements, {worked_pf} prime filters, {worked_points} points",
            worked.len()
        ),
    );
    within(Duration::from_secs(30), start, out)
}

fn criterion_6() -> Outcome {
    let mut s = Sampler::new(7);
    let c = SampleConfig::default();
    let mut ok = 0;
    for _ in 0..1000 {
        let (u, v) = (s.open_set(&c), s.open_set(&c));
        let (i, j) = (
            PrincipalIdeal::new(u.clone()),
            PrincipalIdeal::new(v.clone()),
        );
        let join = ideal_join(&i, &j).map_err(|e| e.to_string())?;
        let meet = ideal_meet(&i, &j).map_err(|e| e.to_string())?;
        let good = join.generator() == &u.union(&v).unwrap()
            && meet.generator() == &u.intersect(&v).unwrap()
            && ideal_way_below(&i, &j).unwrap() == u.is_subset(&v).unwrap();
        ok += good as usize;
    }
    check(
        ok == 1000,
        format!("join, meet and way-below laws on {ok}/1000 pairs"),
    )
}

fn encloses(b: &IntervalBox, bounds: &[(Q, Q)]) -> bool {
    b.dims().is_some_and(|d| {
        d.iter()
            .zip(bounds)
            .all(|(i, (lo, hi))| i.lo() <= lo && hi <= i.hi())
    })
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let exp = IvpProblem::parse(q(0, 1), q(1, 1), IntervalBox::point(vec![q(1, 1)]), "y1")
        .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut checked, mut violations) = (0, 0);
    for k in [4usize, 8, 16, 32, 64] {
        let (e, _) = solve_fixpoint(&exp, k).map_err(|e| e.to_string())?;
        let mut times = e.partition().to_vec();
        for _ in 0..100 {
            let d: i64 = rng.gen_range(1..=1000);
            times.push(q(rng.gen_range(0..=d), d));
        }
        for t in &times {
            let (lo, hi) = exp_bounds(t);
            checked += 1;
            violations += !encloses(e.value_at(t).unwrap(), &[(lo.clone(), hi.clone())]) as usize;
            // nodes are tighter than pieces; check those too
            if let Some(j) = e.partition().iter().position(|p| p == t) {
                violations += !encloses(&e.nodes()[j], &[(lo, hi)]) as usize;
            }
        }
    }
    let rot = IvpProblem::parse(
        q(0, 1),
        q(1, 1),
        IntervalBox::point(vec![q(1, 1), q(0, 1)]),
        "-y2; y1",
    )
    .map_err(|e| e.to_string())?;
    let (e, _) = solve_fixpoint(&rot, 8).map_err(|e| e.to_string())?;
    let mut rot_violations = 0;
    for (j, t) in e.partition().iter().enumerate() {
        let (c, s) = cos_sin_bounds(t);
        rot_violations += !encloses(&e.nodes()[j], &[c, s]) as usize;
    }
    let out = check(
        violations == 0 && rot_violations == 0,
        format!("e^t enclosed at {checked} times with {violations} violations; rotation: {rot_violations} violations at 9 nodes"),
    );
    within(Duration::from_secs(30), start, out)
}

fn criterion_8() -> Outcome {
    let exp = IvpProblem::parse(q(0, 1), q(1, 1), IntervalBox::point(vec![q(1, 1)]), "y1")
        .map_err(|e| e.to_string())?;
    let levels = convergence(&exp, 4, 5).map_err(|e| e.to_string())?;
    let pinned: Vec<(usize, Q)> = include_str!("data/exp_widths.txt")
        .lines()
        .map(|l| {
            let (k, w) = l.split_once(' ').unwrap();
            (k.parse().unwrap(), parse_rational(w).unwrap())
        })
        .collect();
    let pins_ok = pinned.len() == levels.len()
        && pinned
            .iter()
            .zip(&levels)
            .all(|((k, w), l)| *k == l.pieces && l.width == Width::Finite(w.clone()));
    let ratios: Vec<Q> = levels[2..].iter().filter_map(|l| l.ratio.clone()).collect();
    let in_band = ratios.len() == 3 && ratios.iter().all(|r| *r >= q(3, 10) && *r <= q(7, 10));
    let shown: Vec<String> = ratios
        .iter()
        .map(|r| format!("{:.3}", spectral_steps::rational::to_f64(r)))
        .collect();
    check(
        pins_ok && in_band,
        format!(
            "ratios for k = 8, 16, 32: [{}]; pinned widths {}",
            shown.join(", "),
            if pins_ok { "match exactly" } else { "differ" }
        ),
    )
}

fn criterion_9() -> Outcome {
    let carrier = Carrier::new(q(0, 1), q(2, 1)).unwrap();
    let iv = |a: Q, b: Q| OpenSet::interval(&carrier, a, b).unwrap();
    let bx = |a: Q, b: Q| IntervalBox::interval(a, b).unwrap();
    let g = make_stepfn(
        vec![
            Component::new(iv(q(0, 1), q(1, 1)), bx(q(0, 1), q(1, 1))),
            Component::new(iv(q(1, 2), q(3, 2)), bx(q(1, 4), q(3, 4))),
            Component::new(
                OpenSet::from_piece(&carrier, HalfOpenPiece::left_end(q(1, 4))).unwrap(),
                bx(q(-1, 1), q(2, 1)),
            ),
        ],
        &carrier,
        1,
    )
    .map_err(|e| e.to_string())?;
    // every box with endpoints in sixteenths of [-2, 3]
    let grid: Vec<Q> = (-32..=48).map(|i| q(i, 16)).collect();
    let mut basis = Vec::new();
    for (i, lo) in grid.iter().enumerate() {
        for hi in &grid[i..] {
            let b = bx(lo.clone(), hi.clone());
            let u =
                preimage_way_above(&g, &b, PreimageStrategy::Cells).map_err(|e| e.to_string())?;
            if u.is_empty() {
                continue;
            }
            // the largest admissible open and each of its pieces
            for piece in u.pieces() {
                basis.push(Component::new(
                    OpenSet::from_piece(&carrier, piece.clone()).unwrap(),
                    b.clone(),
                ));
            }
            basis.push(Component::new(u, b));
        }
    }
    let count = basis.len();
    let join = make_stepfn(basis, &carrier, 1).map_err(|e| e.to_string())?;
    let below = order_cells(&join, &g).map_err(|e| e.to_string())?;
    let mut worst = q(0, 1);
    let mut close = true;
    for cell in g.cells().map_err(|e| e.to_string())? {
        let x = cell.representative();
        let (have, want) = (join.eval(x).unwrap(), g.eval(x).unwrap());
        match (box_width(&have), box_width(&want)) {
            (_, Width::Infinite) => {}
            (Width::Finite(h), Width::Finite(w)) => {
                let gap = h - w;
                close &= gap <= q(1, 4);
                worst = worst.max(gap);
            }
            (Width::Infinite, Width::Finite(_)) => close = false,
        }
        close &= box_leq(&have, &want).unwrap();
    }
    check(
        below && close,
        format!("join of {count} basis elements is below g, worst width gap {worst} (limit 1/4)"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("galois connection", criterion_1),
        ("two approaches agree", criterion_2),
        ("abstract basis laws", criterion_3),
        ("order procedures agree", criterion_4),
        ("finite duality round trip", criterion_5),
        ("principal ideals", criterion_6),
        ("ivp soundness", criterion_7),
        ("ivp convergence", criterion_8),
        ("basis approximation", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, msg) = match run() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("{tag} [{}] {name}: {msg} ({:.2?})", i + 1, start.elapsed());
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
