//! The composed monad `Cf` of finitely generated convex subsets of `S X`, its
//! Kleisli category and the checks for the monad laws, the order-enrichment
//! properties and the pentagon of its algebras.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Display};
use std::sync::Arc;

use rand::Rng;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::convexset::ConvexSet;
use crate::distlaw::{self, WeightedFamily};
use crate::error::{Error, Result};
use crate::finsupp::{BasisElement, FinSupp, Key};
use crate::lifting;
use crate::report::Report;
use crate::sampling;
use crate::semiring::{Bool, Semiring};

/// Default bound on the number of generator tuples one extension may visit.
pub const DEFAULT_TUPLE_CAP: u64 = 100_000;

/// Largest basis accepted by the law checkers.
pub const MAX_LAW_BASIS: usize = 3;

type Basis<K> = Arc<BTreeSet<K>>;

/// `Cf(f)(A) = {S(f)(Φ) | Φ ∈ A}`, computed on generators.
pub fn cf_map<S: Semiring, K: Key, K2: Key>(
    f: impl Fn(&K) -> Option<K2>,
    target: Basis<K2>,
    set: &ConvexSet<S, K>,
) -> Result<ConvexSet<S, K2>> {
    lifting::lifted_map(f, target, set)
}

/// `η(x) = {Δ_x}`.
pub fn cf_unit<S: Semiring, K: Key>(basis: Basis<K>, x: K) -> Result<ConvexSet<S, K>> {
    if !basis.contains(&x) {
        return Err(Error::BasisMismatch(format!("{x:?} is outside the basis")));
    }
    lifting::lifted_unit(basis, x)
}

/// `µ(𝒜) = ⋃_{Ω ∈ 𝒜} α(Ω)`: the union over the generators `Ω` of their
/// weighted Minkowski sums, then the hull.
pub fn cf_mult<S: Semiring, K: Key>(
    basis: &Basis<K>,
    outer: &ConvexSet<S, ConvexSet<S, K>>,
) -> Result<ConvexSet<S, K>> {
    for inner in outer.basis().iter() {
        if inner.basis() != basis {
            return Err(Error::BasisMismatch(
                "inner convex sets use a different basis".to_string(),
            ));
        }
    }
    let parts = outer
        .generators()
        .iter()
        .map(|omega| lifting::alpha_free(basis, omega))
        .collect::<Result<Vec<_>>>()?;
    ConvexSet::join_all(basis.clone(), &parts)
}

/// A map `X -> Cf(Y)`, total on its source basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KleisliMap<S, K = BasisElement> {
    source: Basis<K>,
    target: Basis<K>,
    table: BTreeMap<K, ConvexSet<S, K>>,
}

impl<S: Semiring, K: Key> KleisliMap<S, K> {
    /// Builds a map; every source element needs an entry over `target`.
    pub fn new(source: Basis<K>, target: Basis<K>, table: BTreeMap<K, ConvexSet<S, K>>) -> Result<Self> {
        if let Some(x) = source.iter().find(|x| !table.contains_key(x)) {
            return Err(Error::BasisMismatch(format!("no entry for {x:?}")));
        }
        if let Some(x) = table.keys().find(|x| !source.contains(x)) {
            return Err(Error::BasisMismatch(format!("{x:?} is not in the source basis")));
        }
        let mut canonical = BTreeMap::new();
        for (x, set) in table {
            if *set.basis() != target {
                return Err(Error::BasisMismatch(format!(
                    "entry for {x:?} is not over the target basis"
                )));
            }
            canonical.insert(x, set.canonicalize());
        }
        Ok(KleisliMap {
            source,
            target,
            table: canonical,
        })
    }

    pub fn from_fn(
        source: Basis<K>,
        target: Basis<K>,
        mut f: impl FnMut(&K) -> ConvexSet<S, K>,
    ) -> Result<Self> {
        let table = source.iter().map(|x| (x.clone(), f(x))).collect();
        Self::new(source, target, table)
    }

    /// The Kleisli identity `x ↦ {Δ_x}`.
    pub fn identity(basis: Basis<K>) -> Self {
        let table = basis
            .iter()
            .map(|x| {
                (
                    x.clone(),
                    lifting::lifted_unit(basis.clone(), x.clone()).expect("x is in the basis"),
                )
            })
            .collect();
        KleisliMap {
            source: basis.clone(),
            target: basis,
            table,
        }
    }

    pub fn source(&self) -> &Basis<K> {
        &self.source
    }

    pub fn target(&self) -> &Basis<K> {
        &self.target
    }

    pub fn get(&self, x: &K) -> Option<&ConvexSet<S, K>> {
        self.table.get(x)
    }

    pub fn table(&self) -> &BTreeMap<K, ConvexSet<S, K>> {
        &self.table
    }

    /// Pointwise equality of the denoted sets.
    pub fn equal(&self, other: &Self) -> Result<bool> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::BasisMismatch("maps have different bases".to_string()));
        }
        for (x, set) in &self.table {
            if !set.equal(&other.table[x])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The least map, sending everything to `∅`.
pub fn bottom<S: Semiring, K: Key>(source: Basis<K>, target: Basis<K>) -> KleisliMap<S, K> {
    let table = source
        .iter()
        .map(|x| (x.clone(), ConvexSet::empty(target.clone())))
        .collect();
    KleisliMap {
        source,
        target,
        table,
    }
}

/// Pointwise hull of the union.
pub fn join_maps<S: Semiring, K: Key>(f1: &KleisliMap<S, K>, f2: &KleisliMap<S, K>) -> Result<KleisliMap<S, K>> {
    if f1.source != f2.source || f1.target != f2.target {
        return Err(Error::BasisMismatch("maps have different bases".to_string()));
    }
    let table = f1
        .table
        .iter()
        .map(|(x, a)| Ok((x.clone(), a.join(&f2.table[x])?)))
        .collect::<Result<_>>()?;
    Ok(KleisliMap {
        source: f1.source.clone(),
        target: f1.target.clone(),
        table,
    })
}

/// `♯g(A) = ⋃_{φ ∈ A} { Σ_y φ(y)·ψ_y | ψ_y ∈ g(y) }` on generators, with the
/// default tuple cap.
pub fn kleisli_extend<S: Semiring, K: Key>(g: &KleisliMap<S, K>, set: &ConvexSet<S, K>) -> Result<ConvexSet<S, K>> {
    kleisli_extend_capped(g, set, DEFAULT_TUPLE_CAP)
}

/// [`kleisli_extend`] with an explicit bound on the generator tuples visited.
pub fn kleisli_extend_capped<S: Semiring, K: Key>(
    g: &KleisliMap<S, K>,
    set: &ConvexSet<S, K>,
    cap: u64,
) -> Result<ConvexSet<S, K>> {
    if set.basis() != &g.source {
        return Err(Error::BasisMismatch(
            "set is not over the map's source basis".to_string(),
        ));
    }
    let mut tuples: u64 = 0;
    for phi in set.generators() {
        let count = phi
            .support()
            .map(|y| g.table[y].generators().len() as u64)
            .try_fold(1u64, |acc, n| acc.checked_mul(n));
        tuples = count
            .and_then(|c| tuples.checked_add(c))
            .ok_or_else(|| Error::resource("generator tuples", cap))?;
        if tuples > cap {
            return Err(Error::resource("generator tuples", cap));
        }
    }
    let mut gens: Vec<FinSupp<S, K>> = Vec::new();
    for phi in set.generators() {
        let mut acc: BTreeSet<FinSupp<S, K>> = BTreeSet::from([FinSupp::zero()]);
        for (y, w) in phi.entries() {
            let choices = g.table[y].generators();
            let mut next = BTreeSet::new();
            for a in &acc {
                for psi in choices {
                    next.insert(a.add(&psi.scale(w)));
                }
            }
            acc = next;
        }
        gens.extend(acc);
    }
    ConvexSet::hull(g.target.clone(), gens)
}

/// `(g ∘ f)(x) = ♯g(f(x))`.
pub fn kleisli_compose<S: Semiring, K: Key>(g: &KleisliMap<S, K>, f: &KleisliMap<S, K>) -> Result<KleisliMap<S, K>> {
    if f.target != g.source {
        return Err(Error::BasisMismatch(
            "the first map's target is not the second map's source".to_string(),
        ));
    }
    let table = f
        .table
        .iter()
        .map(|(x, a)| Ok((x.clone(), kleisli_extend(g, a)?)))
        .collect::<Result<_>>()?;
    Ok(KleisliMap {
        source: f.source.clone(),
        target: g.target.clone(),
        table,
    })
}

impl<S: Display, K: Display> Display for KleisliMap<S, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, set)) in self.table.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{x} ↦ {set}")?;
        }
        f.write_str("]")
    }
}

impl<S: Semiring> Serialize for KleisliMap<S, BasisElement> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut map = s.serialize_map(Some(self.table.len()))?;
        for (x, set) in &self.table {
            map.serialize_entry(&x.to_string(), set)?;
        }
        map.end()
    }
}

impl<'de, S: Semiring> Deserialize<'de> for KleisliMap<S, BasisElement> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, ConvexSet<S, BasisElement>> = BTreeMap::deserialize(d)?;
        let source: Basis<BasisElement> =
            Arc::new(raw.keys().map(|k| BasisElement::name(k)).collect());
        let target = raw
            .values()
            .next()
            .map(|s| s.basis().clone())
            .unwrap_or_default();
        let table = raw
            .into_iter()
            .map(|(k, v)| (BasisElement::name(&k), v))
            .collect();
        KleisliMap::new(source, target, table).map_err(de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Enumeration and sampling

/// Every canonical convex set over `basis` with at most `max_gens`
/// generators, the empty set included. Needs an enumerable semiring.
pub fn enumerate_sets<S: Semiring, K: Key>(basis: &Basis<K>, max_gens: usize) -> Result<Vec<ConvexSet<S, K>>> {
    let values = S::elements()?;
    let mut points: Vec<FinSupp<S, K>> = vec![FinSupp::zero()];
    for k in basis.iter() {
        points = points
            .iter()
            .flat_map(|p| {
                values
                    .iter()
                    .map(move |v| p.add(&FinSupp::from_entries([(k.clone(), v.clone())])))
            })
            .collect();
    }
    let mut out: BTreeSet<ConvexSet<S, K>> = BTreeSet::new();
    let mut stack: Vec<(usize, Vec<FinSupp<S, K>>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        out.insert(ConvexSet::hull(basis.clone(), chosen.clone())?);
        if chosen.len() == max_gens {
            continue;
        }
        for i in start..points.len() {
            let mut next = chosen.clone();
            next.push(points[i].clone());
            stack.push((i + 1, next));
        }
    }
    Ok(out.into_iter().collect())
}

/// A random function on `basis`: each point in the support with probability
/// one half, with sampled (possibly zero) values.
pub fn random_finsupp<S: Semiring, K: Key, R: Rng>(basis: &Basis<K>, rng: &mut R) -> FinSupp<S, K> {
    FinSupp::from_entries(
        basis
            .iter()
            .filter_map(|k| rng.gen_bool(0.5).then(|| (k.clone(), S::sample(rng))))
            .collect::<Vec<_>>(),
    )
}

/// A random canonical set with between zero and `max_gens` generators.
pub fn random_convex_set<S: Semiring, K: Key, R: Rng>(
    basis: &Basis<K>,
    max_gens: usize,
    rng: &mut R,
) -> ConvexSet<S, K> {
    let k = rng.gen_range(0..=max_gens);
    let gens = (0..k).map(|_| random_finsupp(basis, rng)).collect();
    ConvexSet::hull(basis.clone(), gens).expect("samples lie in the basis")
}

pub fn random_map<S: Semiring, K: Key, R: Rng>(
    source: &Basis<K>,
    target: &Basis<K>,
    max_gens: usize,
    rng: &mut R,
) -> KleisliMap<S, K> {
    KleisliMap::from_fn(source.clone(), target.clone(), |_| {
        random_convex_set(target, max_gens, rng)
    })
    .expect("table is total")
}

fn index_basis(n: usize) -> Basis<BasisElement> {
    Arc::new((0..n as u64).map(BasisElement::Index).collect())
}

/// Every total map from `source` into the listed sets.
fn all_maps<S: Semiring, K: Key>(
    source: &Basis<K>,
    target: &Basis<K>,
    sets: &[ConvexSet<S, K>],
) -> Vec<KleisliMap<S, K>> {
    let xs: Vec<&K> = source.iter().collect();
    let mut out = Vec::new();
    let total = sets.len().pow(xs.len() as u32);
    for mut code in 0..total {
        let mut table = BTreeMap::new();
        for x in &xs {
            table.insert((*x).clone(), sets[code % sets.len()].clone());
            code /= sets.len();
        }
        out.push(KleisliMap::new(source.clone(), target.clone(), table).expect("table is total"));
    }
    out
}

/// Test inputs for the Kleisli checks: exhaustive small Bool maps, or
/// sampled ones.
struct Universe<S, K> {
    sets: Vec<ConvexSet<S, K>>,
    maps: Vec<KleisliMap<S, K>>,
    exhaustive: bool,
}

fn universe<S: Semiring>(n: usize, samples: usize, seed: u64) -> Universe<S, BasisElement> {
    let basis = index_basis(n);
    let mut rng = sampling::rng(seed);
    if S::ENUMERABLE && n <= 2 {
        let sets = enumerate_sets::<S, _>(&basis, 3).expect("enumerable instance");
        let maps = all_maps(&basis, &basis, &sets);
        Universe {
            sets,
            maps,
            exhaustive: true,
        }
    } else {
        let sets = (0..samples.max(1))
            .map(|_| random_convex_set::<S, _, _>(&basis, 3, &mut rng))
            .collect();
        let maps = (0..samples.max(1))
            .map(|_| random_map::<S, _, _>(&basis, &basis, 3, &mut rng))
            .collect();
        Universe {
            sets,
            maps,
            exhaustive: false,
        }
    }
}

/// Unit and associativity laws of Kleisli composition on the basis
/// `{0, …, n-1}`: exhaustive over Bool maps into sets with at most three
/// generators when `n <= 2`, otherwise `samples` random maps and sets.
pub fn check_monad_laws<S: Semiring>(n: usize, samples: usize, seed: u64) -> Result<Report> {
    if n > MAX_LAW_BASIS {
        return Err(Error::resource("basis size", MAX_LAW_BASIS as u64));
    }
    let basis = index_basis(n);
    let u = universe::<S>(n, samples, seed);
    let id = KleisliMap::identity(basis.clone());
    let mut report = Report::new("monad", seed);
    let tag = if u.exhaustive { "exhaustive" } else { "sampled" };

    let mut bad = None;
    for a in &u.sets {
        if !kleisli_extend(&id, a)?.equal(a)? {
            bad = Some(format!("A = {a}"));
            break;
        }
    }
    if bad.is_none() {
        for f in &u.maps {
            if !kleisli_compose(&id, f)?.equal(f)? {
                bad = Some(format!("f = {f}"));
                break;
            }
        }
    }
    report.check(format!("left unit η∘f = f ({tag}, {} maps)", u.maps.len()), bad);

    let mut bad = None;
    for f in &u.maps {
        if !kleisli_compose(f, &id)?.equal(f)? {
            bad = Some(format!("f = {f}"));
            break;
        }
        for x in basis.iter() {
            let unit = cf_unit(basis.clone(), x.clone())?;
            if !kleisli_extend(f, &unit)?.equal(f.get(x).expect("total"))? {
                bad = Some(format!("f = {f}, x = {x}"));
                break;
            }
        }
    }
    report.check(format!("right unit f∘η = f ({tag}, {} maps)", u.maps.len()), bad);

    // ♯h(♯g(A)) = ♯(h∘g)(A), i.e. (h∘g)∘f = h∘(g∘f) for every f.
    let mut bad = None;
    let mut count = 0usize;
    if u.exhaustive {
        let mut ext: HashMap<(usize, ConvexSet<S, BasisElement>), ConvexSet<S, BasisElement>> =
            HashMap::new();
        let mut extend = |i: usize, a: &ConvexSet<S, BasisElement>| -> Result<ConvexSet<S, BasisElement>> {
            if let Some(r) = ext.get(&(i, a.clone())) {
                return Ok(r.clone());
            }
            let r = kleisli_extend(&u.maps[i], a)?;
            ext.insert((i, a.clone()), r.clone());
            Ok(r)
        };
        'outer: for gi in 0..u.maps.len() {
            for hi in 0..u.maps.len() {
                let hg = kleisli_compose(&u.maps[hi], &u.maps[gi])?;
                for a in &u.sets {
                    count += 1;
                    let lhs = kleisli_extend(&hg, a)?;
                    let ga = extend(gi, a)?;
                    let rhs = extend(hi, &ga)?;
                    if !lhs.equal(&rhs)? {
                        bad = Some(format!("g = {}, h = {}, A = {a}", u.maps[gi], u.maps[hi]));
                        break 'outer;
                    }
                }
            }
        }
    } else {
        let mut rng = sampling::rng(seed ^ 0xA55);
        for _ in 0..samples.max(1) {
            count += 1;
            let f = &u.maps[rng.gen_range(0..u.maps.len())];
            let g = &u.maps[rng.gen_range(0..u.maps.len())];
            let h = &u.maps[rng.gen_range(0..u.maps.len())];
            let lhs = kleisli_compose(&kleisli_compose(h, g)?, f)?;
            let rhs = kleisli_compose(h, &kleisli_compose(g, f)?)?;
            if !lhs.equal(&rhs)? {
                bad = Some(format!("f = {f}, g = {g}, h = {h}"));
                break;
            }
        }
    }
    report.check(format!("associativity ({tag}, {count} instances)"), bad);
    Ok(report)
}

/// The order-enrichment properties of the Kleisli category on `{0, …, n-1}`:
/// left strictness `⊥ ∘ f = ⊥`, and distributivity of composition over
/// binary joins in both arguments, `(f1 ⊔ f2) ∘ g = (f1 ∘ g) ⊔ (f2 ∘ g)` and
/// `h ∘ (f1 ⊔ f2) = (h ∘ f1) ⊔ (h ∘ f2)`. Strictness is exhaustive over small
/// Bool maps; the join cases draw `samples` triples from the same maps.
pub fn check_kleisli_order<S: Semiring>(n: usize, samples: usize, seed: u64) -> Result<Report> {
    if n > MAX_LAW_BASIS {
        return Err(Error::resource("basis size", MAX_LAW_BASIS as u64));
    }
    let basis = index_basis(n);
    let u = universe::<S>(n, samples, seed);
    let bot = bottom::<S, _>(basis.clone(), basis.clone());
    let mut report = Report::new("kleisli", seed);
    let tag = if u.exhaustive { "exhaustive" } else { "sampled" };

    let mut bad = None;
    for f in &u.maps {
        let composed = kleisli_compose(&bot, f)?;
        if !composed.equal(&bot)? {
            bad = Some(format!("f = {f}, ⊥∘f = {composed}"));
            break;
        }
    }
    report.check(format!("left strictness ⊥∘f = ⊥ ({tag}, {} maps)", u.maps.len()), bad);

    let triples: Vec<(usize, usize, usize)> = {
        let mut rng = sampling::rng(seed ^ 0x101);
        let m = u.maps.len();
        (0..samples.max(1))
            .map(|_| (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m)))
            .collect()
    };

    let mut post = None;
    let mut pre = None;
    for &(i, j, k) in &triples {
        let (f1, f2, g) = (&u.maps[i], &u.maps[j], &u.maps[k]);
        let joined = join_maps(f1, f2)?;
        if post.is_none() {
            let lhs = kleisli_compose(&joined, g)?;
            let rhs = join_maps(&kleisli_compose(f1, g)?, &kleisli_compose(f2, g)?)?;
            if !lhs.equal(&rhs)? {
                post = Some(format!(
                    "f1 = {f1}, f2 = {f2}, g = {g}: (f1⊔f2)∘g = {lhs} but (f1∘g)⊔(f2∘g) = {rhs}"
                ));
            }
        }
        if pre.is_none() {
            let h = g;
            let lhs = kleisli_compose(h, &joined)?;
            let rhs = join_maps(&kleisli_compose(h, f1)?, &kleisli_compose(h, f2)?)?;
            if !lhs.equal(&rhs)? {
                pre = Some(format!(
                    "f1 = {f1}, f2 = {f2}, h = {h}: h∘(f1⊔f2) = {lhs} but (h∘f1)⊔(h∘f2) = {rhs}"
                ));
            }
        }
        if post.is_some() && pre.is_some() {
            break;
        }
    }
    report.check(
        format!("join distributivity (f1⊔f2)∘g (sampled, {} cases)", triples.len()),
        post,
    );
    report.check(
        format!("join distributivity h∘(f1⊔f2) (sampled, {} cases)", triples.len()),
        pre,
    );
    Ok(report)
}

/// Bounds for the pentagon enumeration on a two-element basis.
pub const PENTAGON_MAX_SUPPORT: usize = 2;
pub const PENTAGON_MAX_MEMBER: usize = 3;

/// The pentagon `b ∘ P a ∘ δ = a ∘ S b` for the free `Cf`-algebra over Bool on
/// `{0, …, n-1}`, where `a` is the weighted Minkowski sum and `b` the hull of
/// the union. Exhaustive over all of `S P (Cf Y)` for `n <= 1`; for `n = 2`
/// over every family with at most two members, each listing at most three
/// convex sets.
pub fn check_pentagon(n: usize, seed: u64) -> Result<Report> {
    if n > 2 {
        return Err(Error::resource("basis size", 2));
    }
    let basis = index_basis(n);
    let carrier = enumerate_sets::<Bool, _>(&basis, usize::MAX)?;
    let members: Vec<BTreeSet<ConvexSet<Bool, BasisElement>>> = if n <= 1 {
        distlaw::subsets(&carrier)
    } else {
        small_subsets(&carrier, PENTAGON_MAX_MEMBER)
    };
    let families: Vec<WeightedFamily<Bool, ConvexSet<Bool, BasisElement>>> = if n <= 1 {
        distlaw::subsets(&members)
            .into_iter()
            .map(|s| FinSupp::from_entries(s.into_iter().map(|a| (a, Bool(true)))))
            .collect()
    } else {
        small_subsets(&members, PENTAGON_MAX_SUPPORT)
            .into_iter()
            .map(|s| FinSupp::from_entries(s.into_iter().map(|a| (a, Bool(true)))))
            .collect()
    };

    let a = |omega: &FinSupp<Bool, ConvexSet<Bool, BasisElement>>| lifting::alpha_free(&basis, omega);
    let b = |sets: &BTreeSet<ConvexSet<Bool, BasisElement>>| ConvexSet::join_all(basis.clone(), sets);

    let mut bad = None;
    for phi in &families {
        let through_delta: Vec<ConvexSet<Bool, BasisElement>> = distlaw::delta_enumerate_unchecked(phi)?
            .iter()
            .map(&a)
            .collect::<Result<_>>()?;
        let lhs = ConvexSet::join_all(basis.clone(), &through_delta)?;
        let joined = phi.map_total(|s| b(s).expect("same basis"));
        let rhs = a(&joined)?;
        if !lhs.equal(&rhs)? {
            let shown: Vec<String> = phi
                .support()
                .map(|s| {
                    let inner: Vec<String> = s.iter().map(|c| c.to_string()).collect();
                    format!("{{{}}}", inner.join(", "))
                })
                .collect();
            bad = Some(format!("Φ = {{{}}}: {lhs} vs {rhs}", shown.join(", ")));
            break;
        }
    }
    let mut report = Report::new("pentagon", seed);
    report.check(
        format!(
            "pentagon b∘Pa∘δ = a∘Sb over {} families ({} carrier elements{})",
            families.len(),
            carrier.len(),
            if n <= 1 { "" } else { ", bounded" }
        ),
        bad,
    );
    Ok(report)
}

/// All subsets of `items` with at most `k` elements.
fn small_subsets<T: Clone + Ord>(items: &[T], k: usize) -> Vec<BTreeSet<T>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, Vec::new())];
    while let Some((start, chosen)) = stack.pop() {
        out.push(chosen.iter().map(|&i| items[i].clone()).collect());
        if chosen.len() == k {
            continue;
        }
        for i in start..items.len() {
            let mut next = chosen.clone();
            next.push(i);
            stack.push((i + 1, next));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexset::basis_of;
    use crate::semiring::QPlus;

    fn e(s: &str) -> BasisElement {
        BasisElement::name(s)
    }

    fn q(s: &str) -> QPlus {
        s.parse().unwrap()
    }

    fn fq(entries: &[(&str, &str)]) -> FinSupp<QPlus> {
        FinSupp::from_entries(entries.iter().map(|(k, v)| (e(k), q(v))))
    }

    fn interval(basis: &Basis<BasisElement>, lo: &str, hi: &str) -> ConvexSet<QPlus> {
        ConvexSet::hull(basis.clone(), vec![fq(&[("x", lo)]), fq(&[("x", hi)])]).unwrap()
    }

    #[test]
    fn functor_and_unit() {
        let xy = basis_of([e("x"), e("y")]);
        let w = basis_of([e("w")]);
        let a = ConvexSet::hull(xy.clone(), vec![fq(&[("x", "1")]), fq(&[("y", "3")])]).unwrap();
        let m = cf_map(|_| Some(e("w")), w.clone(), &a).unwrap();
        assert_eq!(
            m,
            ConvexSet::hull(w.clone(), vec![fq(&[("w", "1")]), fq(&[("w", "3")])]).unwrap()
        );
        assert!(m.contains(&fq(&[("w", "2")])));
        assert!(cf_map(|k| Some(k.clone()), xy.clone(), &a).unwrap().equal(&a).unwrap());
        let ux = cf_unit::<QPlus, _>(xy.clone(), e("x")).unwrap();
        let uy = cf_unit::<QPlus, _>(xy.clone(), e("y")).unwrap();
        assert!(!ux.equal(&uy).unwrap());
        assert_eq!(ux.generators(), &[fq(&[("x", "1")])]);
    }

    #[test]
    fn multiplication() {
        let x = basis_of([e("x")]);
        let a = interval(&x, "1", "2");
        let outer_basis = basis_of([a.clone()]);
        let dirac = ConvexSet::singleton(outer_basis.clone(), FinSupp::unit(a.clone())).unwrap();
        assert_eq!(cf_mult(&x, &dirac).unwrap(), a);
        let empty = ConvexSet::empty(outer_basis);
        assert!(cf_mult(&x, &empty).unwrap().is_empty());
    }

    #[test]
    fn extension_examples() {
        let x = basis_of([e("x")]);
        let u = basis_of([e("u")]);
        let g = KleisliMap::new(
            x.clone(),
            u.clone(),
            BTreeMap::from([(
                e("x"),
                ConvexSet::hull(u.clone(), vec![fq(&[("u", "1")]), fq(&[("u", "2")])]).unwrap(),
            )]),
        )
        .unwrap();
        let a = ConvexSet::singleton(x.clone(), fq(&[("x", "1")])).unwrap();
        assert_eq!(kleisli_extend(&g, &a).unwrap(), g.get(&e("x")).unwrap().clone());
        let id = KleisliMap::identity(x.clone());
        let b = interval(&x, "1", "4");
        assert!(kleisli_extend(&id, &b).unwrap().equal(&b).unwrap());
        assert!(matches!(
            kleisli_extend(&g, &ConvexSet::empty(u.clone())),
            Err(Error::BasisMismatch(_))
        ));
    }

    #[test]
    fn tuple_cap() {
        let xs = basis_of([e("a"), e("b"), e("c")]);
        let g = KleisliMap::from_fn(xs.clone(), xs.clone(), |_| {
            ConvexSet::hull(
                xs.clone(),
                vec![fq(&[("a", "1")]), fq(&[("b", "1")]), fq(&[("c", "1")])],
            )
            .unwrap()
        })
        .unwrap();
        let a = ConvexSet::singleton(xs.clone(), fq(&[("a", "1"), ("b", "1"), ("c", "1")])).unwrap();
        assert!(kleisli_extend_capped(&g, &a, 27).is_ok());
        assert!(matches!(
            kleisli_extend_capped(&g, &a, 26),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn joins_and_bottom() {
        let x = basis_of([e("x")]);
        let f = KleisliMap::from_fn(x.clone(), x.clone(), |_| interval(&x, "1", "2")).unwrap();
        let f2 = KleisliMap::from_fn(x.clone(), x.clone(), |_| interval(&x, "3", "5")).unwrap();
        let bot = bottom(x.clone(), x.clone());
        assert!(join_maps(&f, &bot).unwrap().equal(&f).unwrap());
        assert!(join_maps(&f, &f).unwrap().equal(&f).unwrap());
        let j = join_maps(&f, &f2).unwrap();
        assert_eq!(j.get(&e("x")).unwrap(), &interval(&x, "1", "5"));
    }

    #[test]
    fn left_strictness_needs_no_zero_vector() {
        // ⊥ ∘ f is ⊥ at x exactly when ε ∉ f(x).
        let x = basis_of([e("x")]);
        let bot = bottom::<QPlus, _>(x.clone(), x.clone());
        let f = KleisliMap::from_fn(x.clone(), x.clone(), |_| interval(&x, "1", "2")).unwrap();
        assert!(kleisli_compose(&bot, &f).unwrap().equal(&bot).unwrap());
        let zero = KleisliMap::from_fn(x.clone(), x.clone(), |_| lifting::zero_set(x.clone())).unwrap();
        let composed = kleisli_compose(&bot, &zero).unwrap();
        assert_eq!(composed.get(&e("x")).unwrap(), &lifting::zero_set(x.clone()));
    }

    #[test]
    fn cf_count_on_two_points() {
        let b = index_basis(2);
        assert_eq!(enumerate_sets::<Bool, _>(&b, 3).unwrap().len(), 14);
        assert_eq!(enumerate_sets::<Bool, _>(&b, usize::MAX).unwrap().len(), 14);
    }

    #[test]
    fn laws_small() {
        assert!(check_monad_laws::<Bool>(1, 1, 0).unwrap().passed());
        assert!(check_monad_laws::<QPlus>(2, 20, 0).unwrap().passed());
        assert!(check_pentagon(1, 0).unwrap().passed());
        assert!(matches!(
            check_monad_laws::<Bool>(4, 1, 0),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn map_json_round_trip() {
        let x = basis_of([e("x")]);
        let f = KleisliMap::from_fn(x.clone(), x.clone(), |_| interval(&x, "1", "2")).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        let back: KleisliMap<QPlus> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, f);
    }
}
