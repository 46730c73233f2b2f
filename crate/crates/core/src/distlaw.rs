//! The weak distributive law `δ : S P -> P S`, both through the `ψ`-based
//! characterization and through convex closure of the choice set, together
//! with finite-model checkers for its diagrams over Bool.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Display;
use std::sync::Arc;

use rand::Rng;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::convexset::ConvexSet;
use crate::error::{Error, Result};
use crate::finsupp::{mult, BasisElement, FinSupp, Key};
use crate::report::Report;
use crate::sampling;
use crate::semiring::{Bool, Semiring};

/// An element `Φ` of `S P X`: finitely many finite sets, each with a weight.
pub type WeightedFamily<S, K = BasisElement> = FinSupp<S, BTreeSet<K>>;

/// Largest intermediate result tolerated by the enumerations below.
pub const ENUMERATION_LIMIT: usize = 1 << 20;

/// Largest basis accepted by the Bool diagram checkers.
pub const MAX_CHECK_BASIS: usize = 3;

fn check_family_basis<S: Semiring, K: Key>(
    phi: &WeightedFamily<S, K>,
    basis: &BTreeSet<K>,
) -> Result<()> {
    for set in phi.support() {
        if let Some(x) = set.iter().find(|x| !basis.contains(x)) {
            return Err(Error::BasisMismatch(format!(
                "family member contains {x:?}, which is outside the basis"
            )));
        }
    }
    Ok(())
}

/// Minkowski sum of two finite sets of functions.
fn minkowski<S: Semiring, K: Key>(
    acc: &BTreeSet<FinSupp<S, K>>,
    parts: &BTreeSet<FinSupp<S, K>>,
) -> Result<BTreeSet<FinSupp<S, K>>> {
    let mut next = BTreeSet::new();
    for a in acc {
        for p in parts {
            next.insert(a.add(p));
            if next.len() > ENUMERATION_LIMIT {
                return Err(Error::resource(
                    "enumerated functions",
                    ENUMERATION_LIMIT as u64,
                ));
            }
        }
    }
    Ok(next)
}

/// `c(Φ) = { S(u)(Φ) | u(A) ∈ A for every A ∈ supp Φ }`.
///
/// Pushing `Φ` along a choice function `u` gives `Σ_A Φ(A)·Δ_{u(A)}`, so the
/// choices are folded in one set at a time with duplicates merged as they
/// appear.
pub fn choice_set<S: Semiring, K: Key>(phi: &WeightedFamily<S, K>) -> Result<BTreeSet<FinSupp<S, K>>> {
    let mut acc = BTreeSet::from([FinSupp::zero()]);
    for (set, w) in phi.entries() {
        if set.is_empty() {
            return Ok(BTreeSet::new());
        }
        let parts: BTreeSet<FinSupp<S, K>> = set
            .iter()
            .map(|x| FinSupp::from_entries([(x.clone(), w.clone())]))
            .collect();
        acc = minkowski(&acc, &parts)?;
    }
    Ok(acc)
}

/// `δ(Φ)` as the convex hull of the choice set; needs a semifield.
pub fn delta<S: Semiring, K: Key>(
    phi: &WeightedFamily<S, K>,
    basis: &Arc<BTreeSet<K>>,
) -> Result<ConvexSet<S, K>> {
    if !S::SEMIFIELD {
        return Err(Error::unsupported(format!(
            "the choice-set description of the law needs a semifield, {} is not one",
            S::KIND
        )));
    }
    check_family_basis(phi, basis)?;
    ConvexSet::hull(basis.clone(), choice_set(phi)?.into_iter().collect())
}

/// `δ(Φ)` by enumerating every `ψ` on the membership relation with
/// `Φ(A) = Σ_{x∈A} ψ(A, x)` and collecting `φ(x) = Σ_{A∋x} ψ(A, x)`.
///
/// Sets outside `supp Φ` force `ψ(A, ·) = 0` by positivity, so only members
/// of the support are enumerated. The search is finite over Bool and the
/// naturals and infinite over the rationals, which are rejected.
pub fn delta_enumerate<S: Semiring, K: Key>(
    phi: &WeightedFamily<S, K>,
    basis: &BTreeSet<K>,
) -> Result<BTreeSet<FinSupp<S, K>>> {
    check_family_basis(phi, basis)?;
    delta_enumerate_unchecked(phi)
}

pub(crate) fn delta_enumerate_unchecked<S: Semiring, K: Key>(
    phi: &WeightedFamily<S, K>,
) -> Result<BTreeSet<FinSupp<S, K>>> {
    if S::SEMIFIELD && !S::ENUMERABLE {
        return Err(Error::unsupported(format!(
            "{} admits infinitely many ψ",
            S::KIND
        )));
    }
    let mut acc = BTreeSet::from([FinSupp::zero()]);
    for (set, w) in phi.entries() {
        let elems: Vec<&K> = set.iter().collect();
        let splits = S::decompositions(w, elems.len())
            .ok_or_else(|| Error::unsupported("weight has infinitely many splits"))?;
        if splits.len() > ENUMERATION_LIMIT {
            return Err(Error::resource("weight splits", ENUMERATION_LIMIT as u64));
        }
        let parts: BTreeSet<FinSupp<S, K>> = splits
            .into_iter()
            .map(|split| FinSupp::from_entries(elems.iter().map(|x| (*x).clone()).zip(split)))
            .collect();
        if parts.is_empty() {
            return Ok(BTreeSet::new());
        }
        acc = minkowski(&acc, &parts)?;
    }
    Ok(acc)
}

impl<S: Semiring> Serialize for FinSupp<S, BTreeSet<BasisElement>> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        #[derive(Serialize)]
        struct Item<'a> {
            set: &'a BTreeSet<BasisElement>,
            weight: String,
        }
        let mut seq = s.serialize_seq(Some(self.len()))?;
        for (set, w) in self.entries() {
            seq.serialize_element(&Item {
                set,
                weight: w.to_string(),
            })?;
        }
        seq.end()
    }
}

impl<'de, S: Semiring> Deserialize<'de> for FinSupp<S, BTreeSet<BasisElement>> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Item {
            set: BTreeSet<BasisElement>,
            weight: serde_json::Value,
        }
        let items: Vec<Item> = Vec::deserialize(d)?;
        let mut entries = Vec::with_capacity(items.len());
        for it in items {
            let text = crate::finsupp::literal_text(&it.weight)
                .ok_or_else(|| de::Error::custom(format!("invalid weight {}", it.weight)))?;
            entries.push((it.set, text.parse::<S>().map_err(de::Error::custom)?));
        }
        Ok(FinSupp::from_entries(entries))
    }
}

// ---------------------------------------------------------------------------
// Finite-model checks over Bool

type X = u8;
type SX = FinSupp<Bool, X>;
type PX = BTreeSet<X>;
type SPX = FinSupp<Bool, PX>;
type PSX = BTreeSet<SX>;

fn indicator<K: Key>(items: impl IntoIterator<Item = K>) -> FinSupp<Bool, K> {
    FinSupp::from_entries(items.into_iter().map(|k| (k, Bool(true))))
}

/// Every subset of `items`, in mask order.
pub(crate) fn subsets<T: Clone + Ord>(items: &[T]) -> Vec<BTreeSet<T>> {
    (0u64..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

fn random_subset<T: Clone + Ord, R: Rng>(items: &[T], p: f64, rng: &mut R) -> BTreeSet<T> {
    items.iter().filter(|_| rng.gen_bool(p)).cloned().collect()
}

fn show<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn show_family(phi: &SPX) -> String {
    show(phi.support().map(|a| show(a.iter())))
}

struct DeltaMemo<K: Key> {
    table: HashMap<WeightedFamily<Bool, K>, BTreeSet<FinSupp<Bool, K>>>,
}

impl<K: Key> DeltaMemo<K> {
    fn new() -> Self {
        DeltaMemo {
            table: HashMap::new(),
        }
    }

    fn get(&mut self, phi: &WeightedFamily<Bool, K>) -> Result<BTreeSet<FinSupp<Bool, K>>> {
        if let Some(v) = self.table.get(phi) {
            return Ok(v.clone());
        }
        let v = delta_enumerate_unchecked(phi)?;
        self.table.insert(phi.clone(), v.clone());
        Ok(v)
    }
}

/// Verifies the diagrams of the weak distributive law over Bool on the basis
/// `{0, …, n-1}` with `δ` computed by [`delta_enumerate`]:
///
/// * the `µ^S` pentagon `δ ∘ µ^S P = P µ^S ∘ δ S ∘ S δ`;
/// * the `µ^P` pentagon `δ ∘ S µ^P = µ^P S ∘ P δ ∘ δ P`;
/// * the powerset-unit triangle `δ ∘ S η^P = η^P S`;
/// * naturality along every `f : m -> k` with `m, k <= n`;
/// * and that the semimodule-unit triangle `δ ∘ η^S P = P η^S` fails, which is
///   what makes the law weak. A counterexample needs `n >= 2`.
///
/// The pentagons are exhaustive for `n <= 2` and use `samples` random inputs
/// for `n = 3`; everything else is exhaustive.
pub fn check_weak_law(n: usize, samples: usize, seed: u64) -> Result<Report> {
    if n > MAX_CHECK_BASIS {
        return Err(Error::resource("basis size", MAX_CHECK_BASIS as u64));
    }
    let mut report = Report::new("weak-law", seed);
    let mut rng = sampling::rng(seed);
    let xs: Vec<X> = (0..n as X).collect();
    let px: Vec<PX> = subsets(&xs);
    let spx: Vec<SPX> = subsets(&px).into_iter().map(indicator).collect();

    let mut dx: HashMap<SPX, PSX> = HashMap::new();
    for phi in &spx {
        dx.insert(phi.clone(), delta_enumerate_unchecked(phi)?);
    }
    let exhaustive = n <= 2;

    // µ^S pentagon over Ξ ∈ S S P X.
    let ssp: Vec<FinSupp<Bool, SPX>> = if exhaustive {
        subsets(&spx).into_iter().map(indicator).collect()
    } else {
        (0..samples.max(1))
            .map(|_| {
                let k = rng.gen_range(0..=3);
                indicator((0..k).map(|_| indicator(random_subset(&px, 0.3, &mut rng))))
            })
            .collect()
    };
    let mut memo_sx: DeltaMemo<SX> = DeltaMemo::new();
    let mut bad = None;
    for xi in &ssp {
        let lhs = &dx[&mult(xi)];
        let s_delta: WeightedFamily<Bool, SX> = xi.map_total(|phi| dx[phi].clone());
        let rhs: PSX = memo_sx.get(&s_delta)?.iter().map(mult).collect();
        if *lhs != rhs {
            bad = Some(format!(
                "Ξ = {}",
                show(xi.support().map(show_family))
            ));
            break;
        }
    }
    report.check(
        format!("mu-S pentagon ({} inputs{})", ssp.len(), if exhaustive { "" } else { ", sampled" }),
        bad,
    );

    // µ^P pentagon over Θ ∈ S P P X.
    let ppx: Vec<BTreeSet<PX>> = subsets(&px);
    let spp: Vec<WeightedFamily<Bool, PX>> = if exhaustive {
        subsets(&ppx).into_iter().map(indicator).collect()
    } else {
        (0..samples.max(1))
            .map(|_| {
                let k = rng.gen_range(0..=3);
                indicator((0..k).map(|_| random_subset(&px, 0.3, &mut rng)))
            })
            .collect()
    };
    let mut memo_px: DeltaMemo<PX> = DeltaMemo::new();
    let mut bad = None;
    for theta in &spp {
        let flat: SPX = theta.map_total(|family| family.iter().flatten().copied().collect());
        let lhs = &dx[&flat];
        let mut rhs = PSX::new();
        for phi in memo_px.get(theta)? {
            rhs.extend(dx[&phi].iter().cloned());
        }
        if *lhs != rhs {
            bad = Some(format!(
                "Θ = {}",
                show(theta.support().map(|fam| show(fam.iter().map(|a| show(a.iter())))))
            ));
            break;
        }
    }
    report.check(
        format!("mu-P pentagon ({} inputs{})", spp.len(), if exhaustive { "" } else { ", sampled" }),
        bad,
    );

    // Powerset-unit triangle over φ ∈ S X.
    let mut bad = None;
    for a in &px {
        let phi: SX = indicator(a.iter().copied());
        let lifted: SPX = phi.map_total(|x| BTreeSet::from([*x]));
        if dx[&lifted] != BTreeSet::from([phi.clone()]) {
            bad = Some(format!("φ = {phi}"));
            break;
        }
    }
    report.check("P-unit triangle δ∘Sη^P = η^P", bad);

    // Naturality.
    let mut bad = None;
    let mut count = 0usize;
    'outer: for m in 0..=n {
        let dom: Vec<X> = (0..m as X).collect();
        let fams: Vec<SPX> = subsets(&subsets(&dom)).into_iter().map(indicator).collect();
        for k in 0..=n {
            let Some(total) = (k as u64).checked_pow(m as u32) else {
                continue;
            };
            for code in 0..total {
                let f = |x: &X| -> X {
                    ((code / (k as u64).pow(*x as u32)) % k as u64) as X
                };
                for phi in &fams {
                    count += 1;
                    let pushed: SPX = phi.map_total(|a| a.iter().map(f).collect());
                    let lhs = &dx[&pushed];
                    let rhs: PSX = dx[phi].iter().map(|psi| psi.map_total(f)).collect();
                    if *lhs != rhs {
                        let table: Vec<String> =
                            dom.iter().map(|x| format!("{x}↦{}", f(x))).collect();
                        bad = Some(format!("f = {}, Φ = {}", show(table), show_family(phi)));
                        break 'outer;
                    }
                }
            }
        }
    }
    report.check(format!("naturality ({count} squares)"), bad);

    // Semimodule-unit triangle must fail.
    if n >= 2 {
        let mut witness = None;
        for a in &px {
            let lhs = &dx[&FinSupp::unit(a.clone())];
            let rhs: PSX = a.iter().map(|x| FinSupp::unit(*x)).collect();
            if *lhs != rhs {
                witness = Some(format!(
                    "A = {}: δ(Δ_A) = {} but Pη^S(A) = {}",
                    show(a.iter()),
                    show(lhs.iter()),
                    show(rhs.iter())
                ));
                break;
            }
        }
        match witness {
            Some(w) => report.pass_with("S-unit triangle δ∘η^S = Pη^S fails", w),
            None => report.fail(
                "S-unit triangle δ∘η^S = Pη^S fails",
                "no counterexample found",
            ),
        }
    }
    Ok(report)
}

/// Compares `delta_enumerate(Φ)` with the saturation of `delta(Φ)` over
/// Bool: all families for `n <= 2`, `samples` random ones for `n = 3`.
pub fn check_thm2_equivalence(n: usize, samples: usize, seed: u64) -> Result<Report> {
    if n > MAX_CHECK_BASIS {
        return Err(Error::resource("basis size", MAX_CHECK_BASIS as u64));
    }
    let mut report = Report::new("thm2", seed);
    let xs: Vec<X> = (0..n as X).collect();
    let basis = Arc::new(xs.iter().copied().collect::<BTreeSet<X>>());
    let px: Vec<PX> = subsets(&xs);
    let families: Vec<SPX> = if n <= 2 {
        subsets(&px).into_iter().map(indicator).collect()
    } else {
        let mut rng = sampling::rng(seed);
        (0..samples.max(1))
            .map(|_| indicator(random_subset(&px, 0.5, &mut rng)))
            .collect()
    };
    let mut bad = None;
    for phi in &families {
        let via_psi = delta_enumerate(phi, &basis)?;
        let via_hull = delta(phi, &basis)?.saturate()?;
        if via_psi != via_hull {
            bad = Some(format!(
                "Φ = {}: ψ-enumeration {} vs hull {}",
                show_family(phi),
                show(via_psi.iter()),
                show(via_hull.iter())
            ));
            break;
        }
    }
    report.check(
        format!(
            "delta_enumerate = saturate(delta) on {} families{}",
            families.len(),
            if n <= 2 { "" } else { " (sampled)" }
        ),
        bad,
    );
    Ok(report)
}
