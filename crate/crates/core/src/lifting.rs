//! The weak lifting of the powerset monad to algebras of the free semimodule
//! monad: convex closure inside an algebra, the idempotent `e`, the structure
//! map `α_a` on convex subsets and the induced semimodule of convex sets.
//!
//! Two regimes coexist. Explicit finite carriers, where sets are listed
//! element by element, and the free carrier `S X`, where a [`ConvexSet`]'s
//! generators stand in for the set they span.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::convexset::ConvexSet;
use crate::distlaw::{self, WeightedFamily};
use crate::error::{Error, Result};
use crate::finsupp::{FinSupp, Key, SAlgebra};
use crate::semiring::{Bool, Semiring};

fn finite_weights<S: Semiring>(what: &str) -> Result<()> {
    if S::SEMIFIELD && !S::ENUMERABLE {
        Err(Error::unsupported(format!(
            "{what} ranges over infinitely many functions for {}; use convex sets over the free carrier",
            S::KIND
        )))
    } else {
        Ok(())
    }
}

/// `⟨A⟩_a = {a(φ) | supp φ ⊆ A, Σ φ(x) = 1}`, listed explicitly.
pub fn convclos_in_algebra<C: Key, S: Semiring>(
    a: &SAlgebra<C, S>,
    set: &BTreeSet<C>,
) -> Result<BTreeSet<C>> {
    finite_weights::<S>("convex closure")?;
    let elems: Vec<&C> = set.iter().collect();
    let weights = S::decompositions(&S::one(), elems.len())
        .ok_or_else(|| Error::unsupported("coefficient vectors are not finite"))?;
    weights
        .into_iter()
        .map(|w| {
            let phi = FinSupp::from_entries(elems.iter().map(|x| (*x).clone()).zip(w));
            crate::finsupp::eval_in_algebra(a, &phi)
        })
        .collect()
}

/// `e = P a ∘ δ ∘ η^S`, computed literally: the Dirac family at `A`, its
/// image under the `ψ`-enumerated law, then the image under `a`.
pub fn idempotent_e<C: Key, S: Semiring>(
    a: &SAlgebra<C, S>,
    set: &BTreeSet<C>,
) -> Result<BTreeSet<C>> {
    finite_weights::<S>("the idempotent")?;
    let dirac: WeightedFamily<S, C> = FinSupp::unit(set.clone());
    distlaw::delta_enumerate_unchecked(&dirac)?
        .iter()
        .map(|phi| crate::finsupp::eval_in_algebra(a, phi))
        .collect()
}

/// `α_a(Φ) = {a(φ) | φ ∈ c(Φ)}` for a family of convex subsets of the
/// carrier. Each member is checked for convexity when that is decidable.
pub fn alpha<C: Key, S: Semiring>(
    a: &SAlgebra<C, S>,
    phi: &WeightedFamily<S, C>,
) -> Result<BTreeSet<C>> {
    if finite_weights::<S>("").is_ok() {
        for set in phi.support() {
            if convclos_in_algebra(a, set)? != *set {
                return Err(Error::NonConvexInput(format!("{set:?}")));
            }
        }
    }
    distlaw::choice_set(phi)?
        .iter()
        .map(|psi| crate::finsupp::eval_in_algebra(a, psi))
        .collect()
}

/// `P̃(f)(A) = P f (A)` on an explicit carrier.
pub fn lifted_map_explicit<C: Key, D: Key>(f: impl Fn(&C) -> D, set: &BTreeSet<C>) -> BTreeSet<D> {
    set.iter().map(f).collect()
}

/// `µ(𝒜) = ⋃ 𝒜` on an explicit carrier.
pub fn lifted_mult_explicit<C: Key>(family: &BTreeSet<BTreeSet<C>>) -> BTreeSet<C> {
    family.iter().flatten().cloned().collect()
}

// ---------------------------------------------------------------------------
// The free carrier

/// `λ · C`: every generator scaled when `λ != 0`, and `{ε}` when `λ = 0`,
/// including for the empty set.
pub fn scale_set<S: Semiring, K: Key>(lambda: &S, set: &ConvexSet<S, K>) -> ConvexSet<S, K> {
    if lambda.is_zero() {
        return zero_set(set.basis().clone());
    }
    let gens = set.generators().iter().map(|g| g.scale(lambda)).collect();
    ConvexSet::new(set.basis().clone(), gens)
        .expect("scaling keeps supports inside the basis")
        .canonicalize()
}

/// `C1 + C2`: pairwise sums of generators.
pub fn add_set<S: Semiring, K: Key>(
    c1: &ConvexSet<S, K>,
    c2: &ConvexSet<S, K>,
) -> Result<ConvexSet<S, K>> {
    if c1.basis() != c2.basis() {
        return Err(Error::BasisMismatch(format!(
            "{:?} vs {:?}",
            c1.basis(),
            c2.basis()
        )));
    }
    let mut gens = Vec::with_capacity(c1.generators().len() * c2.generators().len());
    for g in c1.generators() {
        for h in c2.generators() {
            gens.push(g.add(h));
        }
    }
    Ok(ConvexSet::new(c1.basis().clone(), gens)?.canonicalize())
}

/// `{ε}`, the zero of the lifted semimodule.
pub fn zero_set<S: Semiring, K: Key>(basis: Arc<BTreeSet<K>>) -> ConvexSet<S, K> {
    ConvexSet::singleton(basis, FinSupp::zero()).expect("ε has empty support")
}

/// `α_µ(Ω) = Σ_A Ω(A) · A` for a family of convex subsets of `S X`.
pub fn alpha_free<S: Semiring, K: Key>(
    basis: &Arc<BTreeSet<K>>,
    omega: &FinSupp<S, ConvexSet<S, K>>,
) -> Result<ConvexSet<S, K>> {
    let mut acc = zero_set(basis.clone());
    for (set, w) in omega.entries() {
        acc = add_set(&acc, &scale_set(w, set))?;
    }
    Ok(acc)
}

/// `P̃(f)` on the free carrier: generators pushed along `S f`.
pub fn lifted_map<S: Semiring, K: Key, K2: Key>(
    f: impl Fn(&K) -> Option<K2>,
    target: Arc<BTreeSet<K2>>,
    set: &ConvexSet<S, K>,
) -> Result<ConvexSet<S, K2>> {
    set.map_generators(target, |g| g.map_along(&f))
}

/// `η(x) = {Δ_x}`.
pub fn lifted_unit<S: Semiring, K: Key>(basis: Arc<BTreeSet<K>>, x: K) -> Result<ConvexSet<S, K>> {
    ConvexSet::singleton(basis, FinSupp::unit(x))
}

/// `µ(𝒜) = ⋃ 𝒜` for a family of convex sets that is itself convex; the
/// union is then convex and canonicalization only prunes generators.
pub fn lifted_mult<'a, S: Semiring, K: Key>(
    basis: Arc<BTreeSet<K>>,
    family: impl IntoIterator<Item = &'a ConvexSet<S, K>>,
) -> Result<ConvexSet<S, K>> {
    ConvexSet::join_all(basis, family)
}

/// Every convex subset of a Bool algebra's carrier, by closing each subset.
pub fn convex_subsets<C: Key>(a: &SAlgebra<C, Bool>) -> Result<BTreeSet<BTreeSet<C>>> {
    let carrier: Vec<C> = a
        .carrier()
        .ok_or_else(|| Error::unsupported("needs an explicit carrier"))?
        .iter()
        .cloned()
        .collect();
    distlaw::subsets(&carrier)
        .iter()
        .map(|s| convclos_in_algebra(a, s))
        .collect()
}
