//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use delpezzo::cycles::tame::RestrictedFunction;
use delpezzo::cycles::CycleError;
use delpezzo::degeneration::{invariant_span, BoundaryDecomposition};
use delpezzo::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn ctx(d: i64) -> DelPezzoContext {
    DelPezzoContext::new(d).unwrap()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn count_table() -> Outcome {
    let start = Instant::now();
    let counts: Vec<usize> = (1..=9)
        .rev()
        .map(|d| enumerate_neg_one::<i64>(ctx(d)).len())
        .collect();
    let elapsed = start.elapsed();
    let expected = vec![0, 1, 3, 6, 10, 16, 27, 56, 240];
    outcome(
        counts == expected && elapsed < Duration::from_secs(1),
        format!("counts d=9..1 {counts:?} in {elapsed:.2?}"),
    )
}

fn type_censuses() -> Outcome {
    use CurveKind::*;
    let d1 = type_census(ctx(1));
    let d2 = type_census(ctx(2));
    let want1: BTreeMap<CurveKind, usize> = [
        (Exceptional, 8),
        (Line, binom(8, 2)),
        (Conic, binom(8, 5)),
        (Cubic, 8 * binom(7, 1)),
        (Quartic, binom(8, 3)),
        (Quintic, binom(8, 6)),
        (Sextic, 8),
    ]
    .into_iter()
    .collect();
    let want2: BTreeMap<CurveKind, usize> = [
        (Exceptional, 7),
        (Line, binom(7, 2)),
        (Conic, binom(7, 5)),
        (Cubic, 7),
    ]
    .into_iter()
    .collect();
    let nonzero = |m: BTreeMap<CurveKind, usize>| -> BTreeMap<CurveKind, usize> {
        m.into_iter().filter(|(_, n)| *n > 0).collect()
    };
    let (d1, d2) = (nonzero(d1), nonzero(d2));
    let pass = d1 == want1
        && d2 == want2
        && d1.values().sum::<usize>() == 240
        && d2.values().sum::<usize>() == 56;
    outcome(pass, format!("d=1 {d1:?}; d=2 {d2:?}"))
}

fn branch_lemma() -> Outcome {
    let mut checked = 0;
    let mut failures = 0;
    for d in 1..=8 {
        for c in enumerate_neg_one::<i64>(ctx(d)) {
            if c.curve_type().is_exceptional() {
                continue;
            }
            checked += 1;
            if !verify_branch_lemma(&c).is_ok_and(|l| l.holds()) {
                failures += 1;
            }
        }
    }
    outcome(
        failures == 0 && checked > 0,
        format!("{checked} non-exceptional classes, {failures} with residual != 2"),
    )
}

fn degree_one_incidence() -> Outcome {
    let g = Graph::for_degree(ctx(1)).unwrap();
    let meets: Vec<usize> = (0..g.len()).map(|i| g.meets_count(i).unwrap()).collect();
    let disjoint: Vec<usize> = (0..g.len())
        .map(|i| {
            (0..g.len())
                .filter(|&j| j != i && *g.get(i, j).unwrap() == 0)
                .count()
        })
        .collect();
    let pass =
        g.len() == 240 && meets.iter().all(|&m| m == 183) && disjoint.iter().all(|&m| m == 56);
    outcome(
        pass,
        format!(
            "{} curves, meets_count range {:?}..{:?}, disjoint partners {:?}",
            g.len(),
            meets.iter().min(),
            meets.iter().max(),
            disjoint.iter().min()
        ),
    )
}

fn degree_two_bitangents() -> Outcome {
    let report = bitangent_pairs::<i64>(ctx(2)).unwrap();
    let all_two = report.pairs.iter().all(|p| p.intersection == 2);
    let want: BTreeMap<String, usize> = [
        ("exceptional+cubic".to_string(), 7),
        ("line+conic".to_string(), 21),
    ]
    .into_iter()
    .collect();
    outcome(
        report.pairs.len() == 28 && all_two && report.composition == want,
        format!(
            "{} pairs, all D1.D2 = 2: {all_two}, composition {:?}",
            report.pairs.len(),
            report.composition
        ),
    )
}

fn cubic_surface() -> Outcome {
    let start = Instant::now();
    let g = Graph::for_degree(ctx(3)).unwrap();
    let entries_ok = g.histogram().keys().all(|v| *v == 0 || *v == 1);
    let tens = (0..g.len()).all(|i| g.meets_count(i).unwrap() == 10);
    let sixes = double_sixes(ctx(3)).unwrap();
    let elapsed = start.elapsed();
    outcome(
        g.len() == 27 && entries_ok && tens && sixes.len() == 36 && elapsed < Duration::from_secs(5),
        format!(
            "{} lines, entries in {{0,1}}: {entries_ok}, each meets 10: {tens}, {} double-sixes in {elapsed:.2?}",
            g.len(),
            sixes.len()
        ),
    )
}

fn boundary_replay() -> Outcome {
    let model = DegenerationModel::standard();
    let result = solve_involution_constraints(&model)
        .and_then(|cs| solve_degree_constraint(&model, &cs))
        .and_then(|d| Ok((d, boundary_of_xi(&model, Some(&d))?)));
    match result {
        Ok((d, boundary)) => {
            let witness = indecomposability_witness(&boundary, &invariant_span(&model));
            let want: Combination<Component> = [(Component::T11, 1), (Component::T12, -1)]
                .into_iter()
                .collect();
            outcome(
                d == BoundaryDecomposition { a: 1, b: -1, c: 0 } && boundary == want && witness,
                format!(
                    "(a, b, c) = ({}, {}, {}), boundary {boundary}, indecomposable {witness}",
                    d.a, d.b, d.c
                ),
            )
        }
        Err(e) => outcome(false, e.to_string()),
    }
}

fn random_function(rng: &mut ChaCha8Rng) -> Option<PlaneFunction> {
    let n = rng.gen_range(2..=4);
    let mut exps: Vec<i64> = (0..n - 1)
        .map(|_| {
            let e = rng.gen_range(1..=3);
            if rng.gen_bool(0.5) {
                e
            } else {
                -e
            }
        })
        .collect();
    exps.push(-exps.iter().sum::<i64>());
    let factors = exps
        .into_iter()
        .map(|e| {
            let c: [i64; 3] = std::array::from_fn(|_| rng.gen_range(-9..=9));
            LinearForm::from_ints(c[0], c[1], c[2]).map(|l| (l, e))
        })
        .collect::<Result<Vec<_>, _>>()
        .ok()?;
    LinearFormFunction::new(factors).ok()
}

fn antisymmetric(tau: &Tame, back: &Tame) -> bool {
    let one = RestrictedFunction::one();
    let lookup = |t: &Tame, line| {
        t.component(line)
            .map_or(one.clone(), |c| c.function.clone())
    };
    tau.components()
        .iter()
        .all(|c| c.function.mul(&lookup(back, &c.line)).is_one())
        && back
            .components()
            .iter()
            .all(|c| c.function.mul(&lookup(tau, &c.line)).is_one())
}

fn cocycle_suite() -> Outcome {
    let off = SurfacePoint::new("P", PointLocation::OffBranch);
    let on = SurfacePoint::new("P", PointLocation::OnBranch);
    let (mut pairs, mut on_branch, mut failures) = (0, 0, 0);
    for c in DelPezzoContext::all() {
        let g = Graph::for_degree(c).unwrap();
        for p in candidate_cycle_pairs(&g) {
            let (x, y) = (g.node(p.i).unwrap(), g.node(p.j).unwrap());
            pairs += 1;
            if !build_xi(x, y, &off).is_ok_and(|z| cocycle_check(&z)) {
                failures += 1;
            }
            match build_xi(x, y, &on) {
                Ok(z) => {
                    on_branch += 1;
                    if !cocycle_check(&z) {
                        failures += 1;
                    }
                }
                Err(CycleError::NoSharedNode(..)) => {}
                Err(_) => failures += 1,
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let (mut configs, mut tame_failures) = (0, 0);
    while configs < 1000 {
        let (Some(f), Some(g)) = (random_function(&mut rng), random_function(&mut rng)) else {
            continue;
        };
        let Ok(tau) = tame_symbol(&f, &g) else {
            continue;
        };
        configs += 1;
        let back = tame_symbol(&g, &f).unwrap();
        if !cocycle_check(&tau.to_precycle()) || !antisymmetric(&tau, &back) {
            tame_failures += 1;
        }
    }
    outcome(
        failures == 0 && tame_failures == 0 && on_branch > 0,
        format!(
            "{pairs} candidate pairs ({on_branch} on-branch), {failures} failures; \
             {configs} random tame configurations, {tame_failures} failures"
        ),
    )
}

fn weyl_closure() -> Outcome {
    let mut detail = Vec::new();
    let mut pass = true;
    for c in DelPezzoContext::all() {
        let curves = enumerate_neg_one::<i64>(c);
        let closed = weyl_closed(c, &curves).unwrap();
        let orbit = weyl_orbit(c, &orbit_seeds::<i64>(c)).unwrap();
        let same = orbit.len() == curves.len() && curves.iter().all(|x| orbit.contains(x.class()));
        pass &= closed && same;
        if !(closed && same) {
            detail.push(format!(
                "d={} closed {closed} orbit {}",
                c.degree(),
                orbit.len()
            ));
        }
    }
    outcome(
        pass,
        if detail.is_empty() {
            "every degree closed under all root reflections; orbits match".to_string()
        } else {
            detail.join("; ")
        },
    )
}

fn kontsevich() -> Outcome {
    let start = Instant::now();
    let small: Vec<i64> = (1..=4)
        .map(|d| kontsevich_count::<i64>(d).unwrap())
        .collect();
    let table = kontsevich_table::<BigInt>(10).unwrap();
    let agree = (1..=10).all(|d| table.get(d) == Some(&kontsevich_count::<BigInt>(d).unwrap()));
    let elapsed = start.elapsed();
    outcome(
        small == [1, 1, 12, 620] && agree && elapsed < Duration::from_secs(1),
        format!(
            "N1..N4 = {small:?}, routes agree through 10: {agree}, N10 = {}, in {elapsed:.2?}",
            table.get(10).unwrap()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("count table", count_table),
        ("type census", type_censuses),
        ("branch lemma", branch_lemma),
        ("degree 1 incidence", degree_one_incidence),
        ("degree 2 bitangents", degree_two_bitangents),
        ("degree 3 lines and double-sixes", cubic_surface),
        ("boundary replay", boundary_replay),
        ("cocycle suite", cocycle_suite),
        ("Weyl closure", weyl_closure),
        ("Kontsevich counts", kontsevich),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] {:>2}. {name}: {}", i + 1, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
