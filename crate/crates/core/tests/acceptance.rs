//! Acceptance criteria C1-C11. Prints one PASS/FAIL line per criterion.
//!
//! C8 fails: left strictness breaks on maps with `ε ∈ f(x)` (an empty
//! weighted sum yields `{ε}`, not `∅`), and post-composition only preserves
//! directed joins. It is listed in `EXPECTED_FAILURES`, so the process exits
//! nonzero if any other criterion fails or if C8 unexpectedly passes.

mod oracles;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use convexalg::convexset::{basis_of, hull_membership, join_hull_contains, simplex_hull_contains};
use convexalg::distlaw::{self, WeightedFamily};
use convexalg::monad_cf;
use convexalg::report::Report;
use convexalg::sampling;
use convexalg::semiring::{self, Semiring};
use convexalg::theory::{self, Interval, Term};
use convexalg::{BasisElement, Bool, ConvexSet, FinSupp, Nat, QPlus};
use rand::Rng;

const SEED: u64 = sampling::DEFAULT_SEED;
const EXPECTED_FAILURES: &[u32] = &[8];

type Check = Result<String, String>;

fn e(s: &str) -> BasisElement {
    BasisElement::name(s)
}

fn q(s: &str) -> QPlus {
    s.parse().unwrap()
}

fn fq(entries: &[(&str, &str)]) -> FinSupp<QPlus> {
    FinSupp::from_entries(entries.iter().map(|(k, v)| (e(k), q(v))))
}

fn fam<S: Semiring>(items: &[(&[&str], &str)]) -> WeightedFamily<S> {
    FinSupp::from_entries(
        items
            .iter()
            .map(|(a, w)| (a.iter().map(|s| e(s)).collect(), w.parse().unwrap())),
    )
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn report_ok(r: &Report) -> Result<(), String> {
    let bad: Vec<String> = r
        .failures()
        .map(|c| format!("{} [{}]", c.name, c.witness.clone().unwrap_or_default()))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))
}

fn err(e: convexalg::Error) -> String {
    e.to_string()
}

// C1
fn example_choice_set() -> Check {
    let phi = fam::<QPlus>(&[(&["x", "y"], "1"), (&["y", "z"], "2")]);
    let got = distlaw::choice_set(&phi).map_err(err)?;
    let listed = BTreeSet::from([
        fq(&[("x", "1"), ("y", "2")]),
        fq(&[("x", "1"), ("z", "2")]),
        fq(&[("y", "3")]),
        fq(&[("y", "1"), ("z", "2")]),
    ]);
    ensure(got == listed, || format!("choice set has {} elements: {got:?}", got.len()))?;
    let gens: Vec<_> = got.into_iter().collect();
    let phi_mid = fq(&[("x", "1"), ("y", "1"), ("z", "1")]);
    ensure(hull_membership(&phi_mid, &gens), || "(x↦1,y↦1,z↦1) not in hull".into())?;
    ensure(!gens.contains(&phi_mid), || "(x↦1,y↦1,z↦1) is itself a choice".into())?;
    Ok("four generators match; (x↦1, y↦1, z↦1) is in the hull".into())
}

// C2
fn example_delta() -> Check {
    let basis = basis_of(["x", "y", "z", "a", "b"].map(e));
    let phi = fam::<QPlus>(&[(&["x", "y"], "5"), (&["y", "z"], "9"), (&["a", "b"], "13")]);
    let target = fq(&[("x", "2"), ("y", "7"), ("z", "5"), ("a", "6"), ("b", "7")]);
    let d = distlaw::delta(&phi, &basis).map_err(err)?;
    ensure(d.contains(&target), || format!("{target} not in delta(Φ)"))?;

    let phi_n = fam::<Nat>(&[(&["x", "y"], "5"), (&["y", "z"], "9"), (&["a", "b"], "13")]);
    let target_n: FinSupp<Nat> = FinSupp::from_entries(
        [("x", 2), ("y", 7), ("z", 5), ("a", 6), ("b", 7)].map(|(k, v)| (e(k), Nat::new(v))),
    );
    let via_psi = distlaw::delta_enumerate(&phi_n, &basis).map_err(err)?;
    ensure(via_psi.contains(&target_n), || "φ missing from the Nat law".into())?;
    let choices = distlaw::choice_set(&phi_n).map_err(err)?;
    ensure(!choices.contains(&target_n), || "φ is a choice over Nat".into())?;
    Ok(format!(
        "φ ∈ delta(Φ) over rat; over nat φ ∈ δ(Φ) ({} elements) but φ ∉ c(Φ) ({} elements)",
        via_psi.len(),
        choices.len()
    ))
}

// C3
fn thm2() -> Check {
    let small = distlaw::check_thm2_equivalence(2, 0, SEED).map_err(err)?;
    report_ok(&small)?;
    ensure(small.cases[0].name.contains("16 families"), || small.cases[0].name.clone())?;
    let big = distlaw::check_thm2_equivalence(3, 500, SEED).map_err(err)?;
    report_ok(&big)?;
    ensure(big.cases[0].name.contains("500 families"), || big.cases[0].name.clone())?;
    Ok("16 families on 2 points, 500 sampled on 3 points".into())
}

// C4
fn weak_law() -> Check {
    let mut cases = 0;
    for n in 0..=2 {
        let r = distlaw::check_weak_law(n, 0, SEED).map_err(err)?;
        report_ok(&r)?;
        cases += r.cases.len();
        if n == 2 {
            let fails = r
                .cases
                .iter()
                .find(|c| c.name.starts_with("S-unit triangle"))
                .ok_or("unit triangle case missing")?;
            ensure(fails.witness.is_some(), || "no witness for the failing triangle".into())?;
            ensure(
                r.cases.iter().any(|c| c.name.starts_with("P-unit triangle")),
                || "second triangle missing".into(),
            )?;
        }
    }
    // The failing triangle at A = {0, 1}: δ(Δ_A) also holds Δ_0 + Δ_1.
    let a: BTreeSet<u8> = BTreeSet::from([0, 1]);
    let dirac: WeightedFamily<Bool, u8> = FinSupp::unit(a.clone());
    let lhs = distlaw::delta_enumerate(&dirac, &a).map_err(err)?;
    let rhs: BTreeSet<FinSupp<Bool, u8>> = a.iter().map(|x| FinSupp::unit(*x)).collect();
    ensure(lhs != rhs && lhs.len() == 3, || format!("{lhs:?} vs {rhs:?}"))?;
    Ok(format!(
        "{cases} cases on bases of size 0..2; µ^S, µ^P pentagons, δ∘Sη^P = η^P and naturality hold; \
         δ∘η^S = Pη^S fails at A = {{0, 1}}"
    ))
}

// C5
fn dirac_families() -> Check {
    let xs: Vec<u8> = vec![0, 1, 2];
    let basis: BTreeSet<u8> = xs.iter().copied().collect();
    let arc = Arc::new(basis.clone());
    for mask in 0u8..8 {
        let a: Vec<u8> = xs.iter().copied().filter(|x| mask >> x & 1 == 1).collect();
        let dirac: WeightedFamily<Bool, u8> = FinSupp::unit(a.iter().copied().collect());
        let want = oracles::nonempty_subset_indicators(&a);
        let via_psi = distlaw::delta_enumerate(&dirac, &basis).map_err(err)?;
        let via_hull = distlaw::delta(&dirac, &arc).map_err(err)?.saturate().map_err(err)?;
        ensure(via_psi == want && via_hull == want, || format!("A = {a:?}"))?;
    }
    // Any Φ with Φ(∅) ≠ 0 has δ(Φ) = ∅.
    let subsets: Vec<BTreeSet<u8>> = (0u8..8)
        .map(|m| xs.iter().copied().filter(|x| m >> x & 1 == 1).collect())
        .collect();
    let mut checked = 0;
    for fmask in 0u16..256 {
        if fmask & 1 == 0 {
            continue;
        }
        let phi: WeightedFamily<Bool, u8> = FinSupp::from_entries(
            (0..8).filter(|i| fmask >> i & 1 == 1).map(|i| (subsets[i].clone(), Bool(true))),
        );
        ensure(distlaw::delta_enumerate(&phi, &basis).map_err(err)?.is_empty(), || {
            format!("{phi:?}")
        })?;
        ensure(distlaw::delta(&phi, &arc).map_err(err)?.is_empty(), || format!("{phi:?}"))?;
        checked += 1;
    }
    let qbasis = basis_of(["x"].map(e));
    let phi = fam::<QPlus>(&[(&[], "1/2"), (&["x"], "3")]);
    ensure(distlaw::delta(&phi, &qbasis).map_err(err)?.is_empty(), || "rat case".into())?;
    Ok(format!("all 8 Dirac families; δ(Φ) = ∅ on {checked} bool families with Φ(∅) ≠ 0 and a rat one"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Branch {
    ScaleZero,
    ScaleEmpty,
    AddEmpty,
    JoinLeftEmpty,
    JoinRightEmpty,
    JoinBothEmpty,
}

fn branches(t: &Term<QPlus>, seen: &mut BTreeSet<Branch>) {
    let empty = |t: &Term<QPlus>| theory::interval_eval(t).unwrap() == Interval::Empty;
    match t {
        Term::Scale(l, inner) => {
            if l.is_zero() {
                seen.insert(Branch::ScaleZero);
            } else if empty(inner) {
                seen.insert(Branch::ScaleEmpty);
            }
            branches(inner, seen);
        }
        Term::Add(a, b) => {
            if empty(a) || empty(b) {
                seen.insert(Branch::AddEmpty);
            }
            branches(a, seen);
            branches(b, seen);
        }
        Term::Join(a, b) => {
            match (empty(a), empty(b)) {
                (true, true) => seen.insert(Branch::JoinBothEmpty),
                (true, false) => seen.insert(Branch::JoinLeftEmpty),
                (false, true) => seen.insert(Branch::JoinRightEmpty),
                _ => false,
            };
            branches(a, seen);
            branches(b, seen);
        }
        _ => {}
    }
}

// C6
fn interval_agreement() -> Check {
    let basis = basis_of([e("x")]);
    let vars = vec!["x".to_string()];
    let mut rng = sampling::rng(SEED);
    let mut seen = BTreeSet::new();
    let mut empties = 0;
    for i in 0..500 {
        let t: Term<QPlus> = theory::random_term_with(&vars, 4, &mut rng);
        let set = theory::eval(&t, &basis).map_err(err)?;
        let interval = theory::interval_eval(&t).map_err(err)?;
        if interval == Interval::Empty {
            empties += 1;
            ensure(set.is_empty(), || format!("term {i} `{t}`: {set} vs ∅"))?;
        } else {
            ensure(set.equal(&interval.to_set("x")).map_err(err)?, || {
                format!("term {i} `{t}`: {set} vs {interval}")
            })?;
        }
        branches(&t, &mut seen);
    }
    ensure(seen.len() == 6, || format!("empty branches covered: {seen:?}"))?;
    for _ in 0..50 {
        let a = QPlus::sample(&mut rng);
        let b = a.add(&QPlus::sample(&mut rng));
        let t = Term::join(Term::scale(a.clone(), Term::var("x")), Term::scale(b.clone(), Term::var("x")));
        let want = Interval::Closed(a.clone(), b.clone());
        ensure(theory::interval_eval(&t).map_err(err)? == want, || format!("{t}"))?;
        ensure(
            theory::eval(&t, &basis).map_err(err)?.equal(&want.to_set("x")).map_err(err)?,
            || format!("⟦{t}⟧ ≠ [{a}, {b}]"),
        )?;
    }
    Ok(format!("500 terms ({empties} empty), all six empty-operand branches hit; 50 intervals [a, b]"))
}

// C7
fn axiom_suite() -> Check {
    let xy = basis_of([e("x"), e("y")]);
    let rat = theory::check_axiom_suite::<QPlus>(&xy, 100, SEED).map_err(err)?;
    report_ok(&rat)?;
    let boo = theory::check_axiom_suite::<Bool>(&xy, 0, SEED).map_err(err)?;
    report_ok(&boo)?;
    for r in [&rat, &boo] {
        for axiom in ["x + ⊥ = ⊥", "λ·⊥ = ⊥ for λ ≠ 0"] {
            ensure(r.cases.iter().any(|c| c.name.contains(axiom)), || format!("{axiom} missing"))?;
        }
    }
    Ok(format!("{} axioms, 100 rat instances each and exhaustive bool on two points", rat.cases.len()))
}

// C8
fn kleisli() -> Check {
    let reports = [
        monad_cf::check_kleisli_order::<QPlus>(2, 200, SEED).map_err(err)?,
        monad_cf::check_kleisli_order::<Bool>(2, 200, SEED).map_err(err)?,
        monad_cf::check_monad_laws::<Bool>(2, 200, SEED).map_err(err)?,
        monad_cf::check_monad_laws::<QPlus>(2, 200, SEED).map_err(err)?,
    ];
    let labels = ["rat order", "bool order", "bool monad", "rat monad"];
    let mut bad = Vec::new();
    let mut cases = 0;
    for (label, r) in labels.iter().zip(&reports) {
        cases += r.cases.len();
        for c in r.failures() {
            bad.push(format!(
                "{label}: {} [{}]",
                c.name,
                c.witness.clone().unwrap_or_default()
            ));
        }
    }
    // Independent confirmation of the strictness counterexample.
    let x = basis_of([e("x")]);
    let f = monad_cf::KleisliMap::from_fn(x.clone(), x.clone(), |_| {
        ConvexSet::singleton(x.clone(), FinSupp::<Bool>::zero()).unwrap()
    })
    .map_err(err)?;
    let composed = monad_cf::kleisli_compose(&monad_cf::bottom(x.clone(), x.clone()), &f).map_err(err)?;
    if !composed.get(&e("x")).unwrap().is_empty() {
        bad.push(format!("⊥ ∘ (x ↦ {{ε}}) = {composed}, not ⊥"));
    }
    if bad.is_empty() {
        Ok(format!("{cases} cases"))
    } else {
        Err(bad.join("; "))
    }
}

// C9
fn pentagon() -> Check {
    let mut families = Vec::new();
    for n in 0..=2 {
        let r = monad_cf::check_pentagon(n, SEED).map_err(err)?;
        report_ok(&r)?;
        families.push(r.cases[0].name.clone());
    }
    Ok(families.join("; "))
}

fn small_point(names: &[&str], rng: &mut impl Rng) -> FinSupp<QPlus> {
    FinSupp::from_entries(
        names
            .iter()
            .map(|k| (e(k), QPlus::new(rng.gen_range(0..=4), rng.gen_range(1..=2)).unwrap()))
            .collect::<Vec<_>>(),
    )
}

// C10
fn membership_oracles() -> Check {
    let mut rng = sampling::rng(SEED);
    let names = ["a", "b", "c"];
    let mut inside = 0;
    for i in 0..1000 {
        let dim = rng.gen_range(1..=3);
        let count = rng.gen_range(0..=4);
        let gens: Vec<FinSupp<QPlus>> = (0..count).map(|_| small_point(&names[..dim], &mut rng)).collect();
        let query = if count > 0 && rng.gen_bool(0.5) {
            let weights: Vec<u64> = (0..count).map(|_| rng.gen_range(0..=3)).collect();
            let total: u64 = weights.iter().sum::<u64>().max(1);
            let w: Vec<QPlus> = weights.iter().map(|&k| QPlus::new(k, total).unwrap()).collect();
            if weights.iter().all(|&k| k == 0) {
                gens[0].clone()
            } else {
                FinSupp::sum(&gens.iter().zip(&w).map(|(g, l)| g.scale(l)).collect::<Vec<_>>())
            }
        } else {
            small_point(&names[..dim], &mut rng)
        };
        let oracle = oracles::caratheodory_contains(&query, &gens);
        let simplex = simplex_hull_contains(&query, &gens);
        inside += usize::from(oracle);
        ensure(oracle == simplex && oracle == hull_membership(&query, &gens), || {
            format!("query {i}: {query} in {gens:?}: oracle {oracle}, simplex {simplex}")
        })?;
    }
    let mut bool_cases = 0;
    for n in 0..=3u8 {
        let points: Vec<FinSupp<Bool, u8>> = (0u8..1 << n)
            .map(|m| FinSupp::from_entries((0..n).filter(|x| m >> x & 1 == 1).map(|x| (x, Bool(true)))))
            .collect();
        for gmask in 0u32..(1 << points.len()) {
            let gens: Vec<FinSupp<Bool, u8>> = (0..points.len())
                .filter(|i| gmask >> i & 1 == 1)
                .map(|i| points[i].clone())
                .collect();
            for p in &points {
                bool_cases += 1;
                let oracle = oracles::subset_join_contains(p, &gens);
                ensure(
                    oracle == join_hull_contains(p, &gens) && oracle == hull_membership(p, &gens),
                    || format!("{p:?} in {gens:?}"),
                )?;
            }
        }
    }
    Ok(format!("1000 rat queries ({inside} inside) and {bool_cases} bool queries agree"))
}

// C11
fn refinement_and_distributivity() -> Check {
    let mut rng = sampling::rng(SEED);
    for i in 0..500 {
        let a = QPlus::sample(&mut rng);
        let b = QPlus::sample(&mut rng);
        let total = a.add(&b);
        let k = rng.gen_range(0..=12);
        let c = total.mul(&QPlus::new(k, 12).unwrap());
        let d = c.difference(&total).ok_or("no difference")?;
        let (x, y, z, t) = semiring::refinement_witness(&a, &b, &c, &d).map_err(err)?;
        ensure(
            x.add(&y) == a && z.add(&t) == b && x.add(&z) == c && y.add(&t) == d,
            || format!("quadruple {i}: ({a}, {b}, {c}, {d}) -> ({x}, {y}, {z}, {t})"),
        )?;
    }
    for i in 0..200 {
        let n = rng.gen_range(0..=4);
        let family: Vec<Vec<QPlus>> = (0..n)
            .map(|_| (0..rng.gen_range(0..=3)).map(|_| QPlus::sample(&mut rng)).collect())
            .collect();
        let (lhs, rhs) = oracles::distributivity_sides(&family);
        ensure(lhs == rhs, || format!("family {i}: {family:?}: {lhs} vs {rhs}"))?;
    }
    Ok("500 refinements satisfy the four equations; 200 families distribute".into())
}

fn main() -> ExitCode {
    type Criterion = (u32, &'static str, Option<Duration>, fn() -> Check);
    let criteria: [Criterion; 11] = [
        (1, "choice set of ({x,y}↦1, {y,z}↦2)", Some(Duration::from_secs(1)), example_choice_set),
        (2, "delta of (A1↦5, A2↦9, A3↦13) and the nat contrast", Some(Duration::from_secs(1)), example_delta),
        (3, "delta_enumerate = saturate(delta) over bool", Some(Duration::from_secs(60)), thm2),
        (4, "weak-law diagrams over bool, basis ≤ 2", Some(Duration::from_secs(120)), weak_law),
        (5, "delta of Dirac families", None, dirac_families),
        (6, "eval agrees with the interval semantics", None, interval_agreement),
        (7, "axiom suite E_SL, E_LSM, E_D′", None, axiom_suite),
        (8, "Kleisli strictness, join distributivity and monad laws", Some(Duration::from_secs(60)), kleisli),
        (9, "pentagon of δ-algebras over bool", None, pentagon),
        (10, "simplex and join-trick membership against brute force", None, membership_oracles),
        (11, "refinement witness and generalized distributivity", None, refinement_and_distributivity),
    ];
    let mut unexpected = Vec::new();
    let mut results = BTreeMap::new();
    for (id, title, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match (outcome, budget) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {elapsed:.2?}, limit {limit:?}"))
            }
            (o, _) => o,
        };
        let passed = outcome.is_ok();
        let detail = match &outcome {
            Ok(s) | Err(s) => s,
        };
        println!(
            "{} C{id} {title} ({elapsed:.2?}): {detail}",
            if passed { "PASS" } else { "FAIL" }
        );
        if passed == EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
        results.insert(id, passed);
    }
    let passed = results.values().filter(|p| **p).count();
    println!("{passed}/{} criteria pass", results.len());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected outcome for: {unexpected:?}");
        ExitCode::FAILURE
    }
}
