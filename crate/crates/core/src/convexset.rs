//! Finitely generated convex subsets of `S X`: hull membership, canonical
//! generator form, equality and explicit saturation.

pub mod simplex;

use std::collections::BTreeSet;
use std::fmt::{self, Display};
use std::sync::Arc;

use num::rational::BigRational;
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finsupp::{BasisElement, FinSupp, Key};
use crate::semiring::{Bool, QPlus, Semiring};

/// Largest generator count for which explicit saturation is attempted.
pub const SATURATE_LIMIT: usize = 20;

/// Whether `point` is a convex combination of `generators`: some `t >= 0`
/// with `Σ t_g = 1` and `Σ t_g · g = point`. Always false for no generators.
pub fn hull_membership<S: Semiring, K: Key>(
    point: &FinSupp<S, K>,
    generators: &[FinSupp<S, K>],
) -> bool {
    S::hull_contains(point, generators)
}

/// Bool membership: the generators below `point` must exist and join to it.
pub fn join_hull_contains<K: Key>(point: &FinSupp<Bool, K>, generators: &[FinSupp<Bool, K>]) -> bool {
    let mut joined: BTreeSet<&K> = BTreeSet::new();
    let mut any = false;
    for g in generators.iter().filter(|g| g.support_within(point)) {
        any = true;
        joined.extend(g.support());
    }
    any && joined.len() == point.len()
}

/// QPlus membership by exact phase-1 simplex.
pub fn simplex_hull_contains<K: Key>(
    point: &FinSupp<QPlus, K>,
    generators: &[FinSupp<QPlus, K>],
) -> bool {
    if generators.is_empty() {
        return false;
    }
    if generators.contains(point) {
        return true;
    }
    let mut rows: BTreeSet<&K> = point.support().collect();
    for g in generators {
        rows.extend(g.support());
    }
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|k| generators.iter().map(|g| g.get(k).as_ratio().clone()).collect())
        .collect();
    let mut b: Vec<BigRational> = rows.iter().map(|k| point.get(k).as_ratio().clone()).collect();
    a.push(vec![BigRational::from_integer(1.into()); generators.len()]);
    b.push(BigRational::from_integer(1.into()));
    simplex::feasible_point(&a, &b).is_some()
}

/// Membership when the only convex combinations are the generators
/// themselves, as over the naturals.
pub fn exact_hull_contains<S: Semiring, K: Key>(
    point: &FinSupp<S, K>,
    generators: &[FinSupp<S, K>],
) -> bool {
    generators.contains(point)
}

/// All convex combinations of `generators` over an enumerable semiring.
pub fn saturate_generators<S: Semiring, K: Key>(
    generators: &[FinSupp<S, K>],
) -> Result<BTreeSet<FinSupp<S, K>>> {
    if !S::ENUMERABLE {
        return Err(Error::unsupported(format!(
            "saturation needs an enumerable semiring, {} is not",
            S::KIND
        )));
    }
    let gens: Vec<&FinSupp<S, K>> = generators.iter().collect::<BTreeSet<_>>().into_iter().collect();
    if gens.len() > SATURATE_LIMIT {
        return Err(Error::resource("generators to saturate", SATURATE_LIMIT as u64));
    }
    let weights = S::decompositions(&S::one(), gens.len())
        .ok_or_else(|| Error::unsupported("coefficient vectors are not finite"))?;
    Ok(weights
        .into_iter()
        .map(|w| {
            FinSupp::sum(
                gens.iter()
                    .zip(&w)
                    .map(|(g, t)| g.scale(t))
                    .collect::<Vec<_>>()
                    .iter(),
            )
        })
        .collect())
}

/// Whether an explicit finite set equals its own convex closure.
pub fn is_convex_explicit<S: Semiring, K: Key>(set: &BTreeSet<FinSupp<S, K>>) -> Result<bool> {
    let gens: Vec<FinSupp<S, K>> = set.iter().cloned().collect();
    Ok(saturate_generators(&gens)? == *set)
}

/// A finitely generated convex subset of `S X` for a fixed finite basis `X`.
///
/// The empty generator list is the empty set, which differs from `{ε}`.
/// Derived equality is structural; use [`ConvexSet::equal`] to compare the
/// denoted sets, or compare canonical forms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConvexSet<S, K = BasisElement> {
    basis: Arc<BTreeSet<K>>,
    generators: Vec<FinSupp<S, K>>,
    canonical: bool,
}

impl<S: Semiring, K: Key> ConvexSet<S, K> {
    /// The empty convex set.
    pub fn empty(basis: Arc<BTreeSet<K>>) -> Self {
        ConvexSet {
            basis,
            generators: Vec::new(),
            canonical: true,
        }
    }

    /// Wraps generators without simplifying them.
    pub fn new(basis: Arc<BTreeSet<K>>, generators: Vec<FinSupp<S, K>>) -> Result<Self> {
        for g in &generators {
            if let Some(k) = g.support().find(|k| !basis.contains(k)) {
                return Err(Error::BasisMismatch(format!(
                    "generator uses {k:?}, which is outside the basis"
                )));
            }
        }
        Ok(ConvexSet {
            basis,
            generators,
            canonical: false,
        })
    }

    /// The canonical convex hull of `generators`.
    pub fn hull(basis: Arc<BTreeSet<K>>, generators: Vec<FinSupp<S, K>>) -> Result<Self> {
        Ok(Self::new(basis, generators)?.canonicalize())
    }

    /// `{φ}`.
    pub fn singleton(basis: Arc<BTreeSet<K>>, phi: FinSupp<S, K>) -> Result<Self> {
        Self::hull(basis, vec![phi])
    }

    pub(crate) fn from_canonical(basis: Arc<BTreeSet<K>>, generators: Vec<FinSupp<S, K>>) -> Self {
        ConvexSet {
            basis,
            generators,
            canonical: true,
        }
    }

    pub fn basis(&self) -> &Arc<BTreeSet<K>> {
        &self.basis
    }

    pub fn generators(&self) -> &[FinSupp<S, K>] {
        &self.generators
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, phi: &FinSupp<S, K>) -> bool {
        hull_membership(phi, &self.generators)
    }

    /// Sorts, removes duplicates, then drops each generator (in order) that
    /// lies in the hull of those still kept. The denoted set is unchanged.
    pub fn canonicalize(&self) -> Self {
        if self.canonical {
            return self.clone();
        }
        let mut gens: Vec<FinSupp<S, K>> = self.generators.clone();
        gens.sort();
        gens.dedup();
        let mut i = 0;
        while i < gens.len() {
            let candidate = gens.remove(i);
            if hull_membership(&candidate, &gens) {
                continue;
            }
            gens.insert(i, candidate);
            i += 1;
        }
        ConvexSet::from_canonical(self.basis.clone(), gens)
    }

    fn same_basis(&self, other: &Self) -> Result<()> {
        if self.basis == other.basis {
            Ok(())
        } else {
            Err(Error::BasisMismatch(format!(
                "{:?} vs {:?}",
                self.basis, other.basis
            )))
        }
    }

    /// Equality of the denoted sets, by mutual generator membership.
    pub fn equal(&self, other: &Self) -> Result<bool> {
        self.same_basis(other)?;
        Ok(self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g)))
    }

    /// Hull of the union.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.same_basis(other)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ok(ConvexSet::new(self.basis.clone(), gens)?.canonicalize())
    }

    /// Hull of the union of many sets over `basis`.
    pub fn join_all<'a, I>(basis: Arc<BTreeSet<K>>, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Self>,
    {
        let mut gens = Vec::new();
        for s in sets {
            if s.basis != basis {
                return Err(Error::BasisMismatch(format!("{:?} vs {:?}", s.basis, basis)));
            }
            gens.extend(s.generators.iter().cloned());
        }
        Ok(ConvexSet::new(basis, gens)?.canonicalize())
    }

    /// Every element of the set, for enumerable semirings.
    pub fn saturate(&self) -> Result<BTreeSet<FinSupp<S, K>>> {
        saturate_generators(&self.generators)
    }

    /// Applies `f` to every generator and re-canonicalizes over `basis`.
    pub fn map_generators<K2: Key>(
        &self,
        basis: Arc<BTreeSet<K2>>,
        f: impl Fn(&FinSupp<S, K>) -> Result<FinSupp<S, K2>>,
    ) -> Result<ConvexSet<S, K2>> {
        let gens = self.generators.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(ConvexSet::new(basis, gens)?.canonicalize())
    }
}

impl<S: Display, K: Display> Display for ConvexSet<S, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generators.is_empty() {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("}")
    }
}

impl<S: Semiring> Serialize for ConvexSet<S, BasisElement> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut st = s.serialize_struct("ConvexSet", 2)?;
        st.serialize_field("basis", &*self.basis)?;
        st.serialize_field("generators", &self.generators)?;
        st.end()
    }
}

impl<'de, S: Semiring> Deserialize<'de> for ConvexSet<S, BasisElement> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(bound = "S: Semiring")]
        struct Raw<S: Semiring> {
            basis: BTreeSet<BasisElement>,
            generators: Vec<FinSupp<S, BasisElement>>,
        }
        let raw = Raw::<S>::deserialize(d)?;
        ConvexSet::hull(Arc::new(raw.basis), raw.generators).map_err(de::Error::custom)
    }
}

/// Convenience for building a basis handle.
pub fn basis_of<K: Key, I: IntoIterator<Item = K>>(items: I) -> Arc<BTreeSet<K>> {
    Arc::new(items.into_iter().collect())
}
