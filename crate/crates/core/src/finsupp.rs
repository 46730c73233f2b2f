//! The free semimodule monad: finitely supported functions `X -> S`, the
//! functor action, Dirac unit and weighted flattening, plus Eilenberg-Moore
//! algebras for it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;
use std::sync::Arc;

use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::semiring::{Bool, Semiring};

/// Anything usable as a basis element: ordered, hashable, cheap to share.
pub trait Key: Clone + Ord + Hash + Debug + Send + Sync + 'static {}

impl<T: Clone + Ord + Hash + Debug + Send + Sync + 'static> Key for T {}

/// A named point of a basis set. Purely numeric identifiers order
/// numerically and before all names.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElement {
    Index(u64),
    Name(String),
}

impl BasisElement {
    pub fn name(s: &str) -> Self {
        s.parse().expect("basis element parsing is infallible")
    }
}

impl Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::Index(i) => write!(f, "{i}"),
            BasisElement::Name(s) => f.write_str(s),
        }
    }
}

impl FromStr for BasisElement {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
            if let Ok(i) = s.parse() {
                return Ok(BasisElement::Index(i));
            }
        }
        Ok(BasisElement::Name(s.to_string()))
    }
}

impl From<&str> for BasisElement {
    fn from(s: &str) -> Self {
        BasisElement::name(s)
    }
}

impl From<u64> for BasisElement {
    fn from(i: u64) -> Self {
        BasisElement::Index(i)
    }
}

impl Serialize for BasisElement {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BasisElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => Ok(BasisElement::name(&s)),
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(BasisElement::Index)
                .ok_or_else(|| de::Error::custom(format!("invalid basis element {n}"))),
            other => Err(de::Error::custom(format!("invalid basis element {other}"))),
        }
    }
}

/// Parses a comma-separated identifier list such as `x,y,z`.
pub fn parse_basis(text: &str) -> BTreeSet<BasisElement> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(BasisElement::name)
        .collect()
}

/// A finitely supported function `K -> S`, stored sorted by key with every
/// zero entry pruned, so derived equality is equality of functions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinSupp<S, K = BasisElement> {
    entries: Vec<(K, S)>,
}

impl<S: Semiring, K: Key> Default for FinSupp<S, K> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<S: Semiring, K: Key> FinSupp<S, K> {
    /// The zero vector `ε`.
    pub fn zero() -> Self {
        FinSupp {
            entries: Vec::new(),
        }
    }

    /// The Dirac function `Δ_x`.
    pub fn unit(x: K) -> Self {
        FinSupp {
            entries: vec![(x, S::one())],
        }
    }

    /// Builds a function from `(key, value)` pairs; repeated keys are summed.
    pub fn from_entries<I: IntoIterator<Item = (K, S)>>(entries: I) -> Self {
        let mut acc: BTreeMap<K, S> = BTreeMap::new();
        for (k, v) in entries {
            match acc.get_mut(&k) {
                Some(old) => *old = old.add(&v),
                None => {
                    acc.insert(k, v);
                }
            }
        }
        FinSupp {
            entries: acc.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn entries(&self) -> &[(K, S)] {
        &self.entries
    }

    pub fn get(&self, k: &K) -> S {
        match self.entries.binary_search_by(|(key, _)| key.cmp(k)) {
            Ok(i) => self.entries[i].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn support(&self) -> impl Iterator<Item = &K> + '_ {
        self.entries.iter().map(|(k, _)| k)
    }

    pub fn support_set(&self) -> BTreeSet<K> {
        self.support().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Σ_x φ(x)`.
    pub fn total(&self) -> S {
        self.entries
            .iter()
            .fold(S::zero(), |acc, (_, v)| acc.add(v))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            let (ka, va) = &self.entries[i];
            let (kb, vb) = &other.entries[j];
            match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    out.push((ka.clone(), va.clone()));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((kb.clone(), vb.clone()));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = va.add(vb);
                    if !v.is_zero() {
                        out.push((ka.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.entries[i..]);
        out.extend_from_slice(&other.entries[j..]);
        FinSupp { entries: out }
    }

    pub fn scale(&self, lambda: &S) -> Self {
        FinSupp {
            entries: self
                .entries
                .iter()
                .map(|(k, v)| (k.clone(), lambda.mul(v)))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }

    /// Sum of an iterator of functions.
    pub fn sum<'a, I: IntoIterator<Item = &'a Self>>(items: I) -> Self {
        items.into_iter().fold(Self::zero(), |acc, x| acc.add(x))
    }

    /// The functor action `S(f)`: the value at `y` is the sum of `φ` over the
    /// preimage of `y`. `f` only has to be defined on the support.
    pub fn map_along<K2: Key>(&self, f: impl Fn(&K) -> Option<K2>) -> Result<FinSupp<S, K2>> {
        let mut mapped = Vec::with_capacity(self.len());
        for (k, v) in &self.entries {
            let y = f(k).ok_or_else(|| Error::UnmappedBasisElement(format!("{k:?}")))?;
            mapped.push((y, v.clone()));
        }
        Ok(FinSupp::from_entries(mapped))
    }

    /// `S(f)` for a total function.
    pub fn map_total<K2: Key>(&self, f: impl Fn(&K) -> K2) -> FinSupp<S, K2> {
        FinSupp::from_entries(self.entries.iter().map(|(k, v)| (f(k), v.clone())))
    }

    /// Restriction to the keys satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(&K) -> bool) -> Self {
        FinSupp {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .cloned()
                .collect(),
        }
    }

    /// Whether every value is at most the corresponding value of `other`.
    /// Only meaningful over Bool, where it is support inclusion.
    pub fn support_within(&self, other: &Self) -> bool {
        self.support().all(|k| !other.get(k).is_zero())
    }
}

impl<S: Semiring, K: Key> FinSupp<S, FinSupp<S, K>> {
    /// Weighted flattening `µ(Ψ)(x) = Σ_φ Ψ(φ)·φ(x)`.
    pub fn flatten(&self) -> FinSupp<S, K> {
        mult(self)
    }
}

/// The monad multiplication of the free semimodule monad.
pub fn mult<S: Semiring, K: Key>(psi: &FinSupp<S, FinSupp<S, K>>) -> FinSupp<S, K> {
    FinSupp::from_entries(psi.entries.iter().flat_map(|(phi, w)| {
        phi.entries
            .iter()
            .map(move |(x, v)| (x.clone(), w.mul(v)))
    }))
}

/// The monad unit of the free semimodule monad.
pub fn unit<S: Semiring, K: Key>(x: K) -> FinSupp<S, K> {
    FinSupp::unit(x)
}

impl<S: Display, K: Display> Display for FinSupp<S, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("ε");
        }
        f.write_str("(")?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}↦{v}")?;
        }
        f.write_str(")")
    }
}

impl<S: Semiring> Serialize for FinSupp<S, BasisElement> {
    fn serialize<Ser: Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (k, v) in &self.entries {
            map.serialize_entry(&k.to_string(), &v.to_string())?;
        }
        map.end()
    }
}

/// Renders a JSON scalar as element-literal text.
pub(crate) fn literal_text(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        serde_json::Value::Bool(b) => Some(if *b { "1" } else { "0" }.to_string()),
        _ => None,
    }
}

impl<'de, S: Semiring> Deserialize<'de> for FinSupp<S, BasisElement> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, serde_json::Value> = BTreeMap::deserialize(d)?;
        let mut entries = Vec::with_capacity(raw.len());
        for (k, v) in raw {
            let text =
                literal_text(&v).ok_or_else(|| de::Error::custom(format!("invalid literal {v}")))?;
            let value: S = text.parse().map_err(de::Error::custom)?;
            entries.push((BasisElement::name(&k), value));
        }
        Ok(FinSupp::from_entries(entries))
    }
}

// ---------------------------------------------------------------------------
// Algebras

type Structure<C, S> = dyn Fn(&FinSupp<S, C>) -> C + Send + Sync;

/// An Eilenberg-Moore algebra `(X, a)` for the free semimodule monad.
///
/// The carrier is either an explicit finite set or unrestricted, the latter
/// being used for the free algebra `(S X, µ)`.
#[derive(Clone)]
pub struct SAlgebra<C, S> {
    carrier: Option<Arc<BTreeSet<C>>>,
    structure: Arc<Structure<C, S>>,
}

impl<C: Key, S: Semiring> Debug for SAlgebra<C, S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SAlgebra")
            .field("carrier", &self.carrier)
            .finish_non_exhaustive()
    }
}

impl<C: Key, S: Semiring> SAlgebra<C, S> {
    /// An algebra on an explicit finite carrier. The laws are not checked
    /// here; see [`SAlgebra::check_laws`].
    pub fn new<I, F>(carrier: I, structure: F) -> Self
    where
        I: IntoIterator<Item = C>,
        F: Fn(&FinSupp<S, C>) -> C + Send + Sync + 'static,
    {
        SAlgebra {
            carrier: Some(Arc::new(carrier.into_iter().collect())),
            structure: Arc::new(structure),
        }
    }

    pub fn carrier(&self) -> Option<&BTreeSet<C>> {
        self.carrier.as_deref()
    }

    pub fn contains(&self, x: &C) -> bool {
        self.carrier.as_ref().is_none_or(|c| c.contains(x))
    }

    /// Applies the structure map without the carrier check.
    pub fn apply(&self, phi: &FinSupp<S, C>) -> C {
        (self.structure)(phi)
    }

    /// `0ᵃ = a(ε)`.
    pub fn zero(&self) -> C {
        self.apply(&FinSupp::zero())
    }

    /// `x +ᵃ y = a(x ↦ 1, y ↦ 1)`.
    pub fn add(&self, x: &C, y: &C) -> C {
        self.apply(&FinSupp::from_entries([
            (x.clone(), S::one()),
            (y.clone(), S::one()),
        ]))
    }

    /// `λ ·ᵃ x = a(x ↦ λ)`.
    pub fn scale(&self, lambda: &S, x: &C) -> C {
        self.apply(&FinSupp::from_entries([(x.clone(), lambda.clone())]))
    }

    /// Verifies `a(Δ_x) = x` and `a ∘ S a = a ∘ µ` on the explicit carrier:
    /// exhaustively when the carrier has at most three elements, otherwise
    /// on `samples` random inputs. Returns the first failing input.
    pub fn check_laws(&self, samples: usize, seed: u64) -> Result<Option<String>> {
        let carrier = self
            .carrier
            .as_ref()
            .ok_or_else(|| Error::unsupported("law check needs an explicit carrier"))?;
        let elems: Vec<C> = carrier.iter().cloned().collect();
        for x in &elems {
            let y = self.apply(&FinSupp::unit(x.clone()));
            if &y != x {
                return Ok(Some(format!("a(Δ_{x:?}) = {y:?}")));
            }
        }
        let mut rng = crate::sampling::rng(seed);
        let firsts = finite_functions::<S, C>(&elems, samples, &mut rng)?;
        let seconds = finite_functions::<S, FinSupp<S, C>>(&firsts, samples, &mut rng)?;
        for psi in &seconds {
            let lhs = self.apply(&psi.map_total(|phi| self.apply(phi)));
            let rhs = self.apply(&mult(psi));
            if lhs != rhs {
                return Ok(Some(format!("associativity fails at {psi:?}")));
            }
        }
        Ok(None)
    }
}

/// All of `S(elems)` when it has at most 2^8 members and the semiring is
/// enumerable, otherwise `samples` random members (always including ε and
/// the Dirac functions).
fn finite_functions<S: Semiring, C: Key>(
    elems: &[C],
    samples: usize,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Result<Vec<FinSupp<S, C>>> {
    if S::ENUMERABLE {
        let values = S::elements()?;
        let k = values.len() as u64;
        let total = k.checked_pow(elems.len() as u32);
        if let Some(total) = total.filter(|&t| t <= 256) {
            return Ok((0..total)
                .map(|mut code| {
                    FinSupp::from_entries(elems.iter().map(|x| {
                        let v = values[(code % k) as usize].clone();
                        code /= k;
                        (x.clone(), v)
                    }))
                })
                .collect());
        }
    }
    let mut out = vec![FinSupp::zero()];
    out.extend(elems.iter().cloned().map(FinSupp::unit));
    for _ in 0..samples {
        out.push(FinSupp::from_entries(
            elems
                .iter()
                .filter_map(|x| {
                    rand::Rng::gen_bool(rng, 0.5).then(|| (x.clone(), S::sample(rng)))
                }),
        ));
    }
    Ok(out)
}

impl<S: Semiring, K: Key> SAlgebra<FinSupp<S, K>, S> {
    /// The free algebra `(S X, µ)` with an unrestricted carrier.
    pub fn free() -> Self {
        SAlgebra {
            carrier: None,
            structure: Arc::new(|psi: &FinSupp<S, FinSupp<S, K>>| mult(psi)),
        }
    }
}

impl<K: Key> SAlgebra<FinSupp<Bool, K>, Bool> {
    /// The free Bool algebra with its carrier `S X` (all finite subsets of
    /// `basis`) listed explicitly.
    pub fn free_enumerated(basis: &BTreeSet<K>) -> Self {
        let elems: Vec<K> = basis.iter().cloned().collect();
        let n = elems.len();
        let carrier = (0u64..1 << n).map(|mask| {
            FinSupp::from_entries(
                (0..n)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| (elems[i].clone(), Bool(true))),
            )
        });
        SAlgebra::new(carrier, |psi: &FinSupp<Bool, FinSupp<Bool, K>>| mult(psi))
    }
}

impl<C: Key> SAlgebra<C, Bool> {
    /// The Bool algebra of a join-semilattice: `a(φ)` is the join of the
    /// support of `φ`, and `bottom` for `ε`.
    pub fn join_algebra<F>(carrier: impl IntoIterator<Item = C>, bottom: C, join: F) -> Self
    where
        F: Fn(&C, &C) -> C + Send + Sync + 'static,
    {
        SAlgebra::new(carrier, move |phi: &FinSupp<Bool, C>| {
            phi.support()
                .fold(bottom.clone(), |acc, x| join(&acc, x))
        })
    }
}

/// `a(φ) = Σ φ(x) · x`, rejecting functions supported outside the carrier.
pub fn eval_in_algebra<C: Key, S: Semiring>(a: &SAlgebra<C, S>, phi: &FinSupp<S, C>) -> Result<C> {
    if let Some(x) = phi.support().find(|x| !a.contains(x)) {
        return Err(Error::ElementOutsideCarrier(format!("{x:?}")));
    }
    Ok(a.apply(phi))
}

/// The semimodule operations `(+ᵃ, 0ᵃ, λ·ᵃ)` induced by an algebra.
#[derive(Clone)]
pub struct SemimoduleOps<C, S> {
    algebra: SAlgebra<C, S>,
}

impl<C: Key, S: Semiring> SemimoduleOps<C, S> {
    pub fn add(&self, x: &C, y: &C) -> C {
        self.algebra.add(x, y)
    }

    pub fn zero(&self) -> C {
        self.algebra.zero()
    }

    pub fn scale(&self, lambda: &S, x: &C) -> C {
        self.algebra.scale(lambda, x)
    }
}

pub fn semimodule_from_algebra<C: Key, S: Semiring>(a: &SAlgebra<C, S>) -> SemimoduleOps<C, S> {
    SemimoduleOps { algebra: a.clone() }
}
