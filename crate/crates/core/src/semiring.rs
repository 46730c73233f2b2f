//! Exact semiring arithmetic for the three supported instances, plus checkers
//! for the semiring axioms and for the algebraic properties (positivity,
//! refinability, conditions (A)-(E)) that decide whether the weak distributive
//! law exists.
//!
//! Every instance is exact: booleans, nonnegative rationals backed by big
//! integers, and arbitrary-precision naturals.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::convexset;
use crate::error::{Error, Result};
use crate::finsupp::{FinSupp, Key};
use crate::sampling;

/// Which of the supported semirings a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SemiringKind {
    Bool,
    Rat,
    Nat,
}

impl Display for SemiringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemiringKind::Bool => "bool",
            SemiringKind::Rat => "rat",
            SemiringKind::Nat => "nat",
        })
    }
}

impl FromStr for SemiringKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bool" => Ok(SemiringKind::Bool),
            "rat" => Ok(SemiringKind::Rat),
            "nat" => Ok(SemiringKind::Nat),
            other => Err(Error::unsupported(format!("unknown semiring `{other}`"))),
        }
    }
}

/// A commutative semiring with exact, structurally comparable elements.
///
/// The capability constants mirror the flags of [`SemiringSpec`]: whether the
/// carrier can be listed, whether nonzero elements are invertible, and whether
/// `a + b = 0` forces `a = b = 0`.
pub trait Semiring:
    Clone + Eq + Ord + Hash + Debug + Display + FromStr<Err = Error> + Send + Sync + 'static
{
    const KIND: SemiringKind;
    const ENUMERABLE: bool;
    const SEMIFIELD: bool;
    const POSITIVE: bool = true;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    /// Multiplicative inverse. Fails with `DivisionByZero` on zero and with
    /// `Unsupported` on instances that are not semifields.
    fn inverse(&self) -> Result<Self>;

    /// The inverse when this particular element has one, on any instance.
    fn unit_inverse(&self) -> Option<Self> {
        self.inverse().ok()
    }

    /// Complete duplicate-free listing of the carrier.
    fn elements() -> Result<Vec<Self>>;

    /// Draws a pseudo-random element.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Some `x` with `self + x = target`, if one exists.
    fn difference(&self, target: &Self) -> Option<Self>;

    /// A refinement `(x, y, z, t)` of `a + b = c + d`, if this instance knows
    /// how to produce one.
    fn refine(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<(Self, Self, Self, Self)>;

    /// All vectors of length `parts` whose entries sum to `total`, or `None`
    /// when that set is infinite.
    fn decompositions(total: &Self, parts: usize) -> Option<Vec<Vec<Self>>>;

    /// Convex-combination membership of `point` in the hull of `generators`.
    fn hull_contains<K: Key>(point: &FinSupp<Self, K>, generators: &[FinSupp<Self, K>])
        -> bool;

    /// `1 + 1 + ... + 1` (`n` times).
    fn of_count(n: u64) -> Self {
        (0..n).fold(Self::zero(), |acc, _| acc.add(&Self::one()))
    }
}

/// Sum of an iterator of semiring elements.
pub fn sum<'a, S: Semiring, I: IntoIterator<Item = &'a S>>(items: I) -> S {
    items.into_iter().fold(S::zero(), |acc, x| acc.add(x))
}

/// Multiplicative inverse; see [`Semiring::inverse`].
pub fn inverse<S: Semiring>(a: &S) -> Result<S> {
    a.inverse()
}

/// Every element of an enumerable semiring; `Unsupported` otherwise.
pub fn enumerate<S: Semiring>() -> Result<Vec<S>> {
    S::elements()
}

/// Refinement of `a + b = c + d` in a positive semifield:
/// `x = ac/(c+d)`, `y = ad/(c+d)`, `z = bc/(c+d)`, `t = bd/(c+d)`, or all zeros
/// when `a + b = 0`.
pub fn refinement_witness<S: Semiring>(a: &S, b: &S, c: &S, d: &S) -> Result<(S, S, S, S)> {
    if !S::SEMIFIELD {
        return Err(Error::unsupported(format!(
            "refinement witness needs a semifield, {} is not one",
            S::KIND
        )));
    }
    let total = a.add(b);
    if total != c.add(d) {
        return Err(Error::PreconditionViolated(format!(
            "{a} + {b} != {c} + {d}"
        )));
    }
    if total.is_zero() {
        return Ok((S::zero(), S::zero(), S::zero(), S::zero()));
    }
    let inv = total.inverse()?;
    let x = a.mul(c).mul(&inv);
    let y = a.mul(d).mul(&inv);
    let z = b.mul(c).mul(&inv);
    let t = b.mul(d).mul(&inv);
    Ok((x, y, z, t))
}

// ---------------------------------------------------------------------------
// Bool

/// The two-element semiring `({0, 1}, ∨, ∧, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bool(pub bool);

impl Display for Bool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

impl FromStr for Bool {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "0" => Ok(Bool(false)),
            "1" => Ok(Bool(true)),
            other => Err(Error::InvalidLiteral(other.to_string())),
        }
    }
}

impl Semiring for Bool {
    const KIND: SemiringKind = SemiringKind::Bool;
    const ENUMERABLE: bool = true;
    const SEMIFIELD: bool = true;

    fn zero() -> Self {
        Bool(false)
    }

    fn one() -> Self {
        Bool(true)
    }

    fn add(&self, other: &Self) -> Self {
        Bool(self.0 || other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Bool(self.0 && other.0)
    }

    fn inverse(&self) -> Result<Self> {
        if self.0 {
            Ok(Bool(true))
        } else {
            Err(Error::DivisionByZero)
        }
    }

    fn elements() -> Result<Vec<Self>> {
        Ok(vec![Bool(false), Bool(true)])
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Bool(rng.gen())
    }

    fn difference(&self, target: &Self) -> Option<Self> {
        match (self.0, target.0) {
            (false, t) => Some(Bool(t)),
            (true, true) => Some(Bool(false)),
            (true, false) => None,
        }
    }

    fn refine(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<(Self, Self, Self, Self)> {
        refinement_witness(a, b, c, d).ok()
    }

    fn decompositions(total: &Self, parts: usize) -> Option<Vec<Vec<Self>>> {
        let mut out = Vec::new();
        if parts >= usize::BITS as usize - 1 {
            return None;
        }
        for mask in 0usize..(1usize << parts) {
            let v: Vec<Bool> = (0..parts).map(|i| Bool(mask >> i & 1 == 1)).collect();
            if Bool(mask != 0) == *total {
                out.push(v);
            }
        }
        Some(out)
    }

    fn hull_contains<K: Key>(
        point: &FinSupp<Self, K>,
        generators: &[FinSupp<Self, K>],
    ) -> bool {
        convexset::join_hull_contains(point, generators)
    }
}

// ---------------------------------------------------------------------------
// QPlus

/// A nonnegative rational number, kept in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPlus(BigRational);

impl QPlus {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(QPlus(BigRational::new(BigInt::from(numer), BigInt::from(denom))))
    }

    pub fn integer(n: u64) -> Self {
        QPlus(BigRational::from_integer(BigInt::from(n)))
    }

    /// Wraps a rational, rejecting negative values.
    pub fn from_ratio(r: BigRational) -> Result<Self> {
        if r.is_negative() {
            Err(Error::InvalidLiteral(r.to_string()))
        } else {
            Ok(QPlus(r))
        }
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn min(&self, other: &Self) -> Self {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }
}

impl Display for QPlus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn parse_digits(s: &str) -> Result<BigUint> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::InvalidLiteral(s.to_string()));
    }
    s.parse::<BigUint>()
        .map_err(|_| Error::InvalidLiteral(s.to_string()))
}

impl FromStr for QPlus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (parse_digits(n)?, parse_digits(d)?),
            None => (parse_digits(s)?, BigUint::one()),
        };
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QPlus(BigRational::new(BigInt::from(n), BigInt::from(d))))
    }
}

impl Semiring for QPlus {
    const KIND: SemiringKind = SemiringKind::Rat;
    const ENUMERABLE: bool = false;
    const SEMIFIELD: bool = true;

    fn zero() -> Self {
        QPlus(BigRational::zero())
    }

    fn one() -> Self {
        QPlus(BigRational::one())
    }

    fn add(&self, other: &Self) -> Self {
        QPlus(&self.0 + &other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        QPlus(&self.0 * &other.0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inverse(&self) -> Result<Self> {
        if self.0.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(QPlus(self.0.recip()))
        }
    }

    fn elements() -> Result<Vec<Self>> {
        Err(Error::unsupported("the nonnegative rationals cannot be enumerated"))
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let (n, d) = sampling::rational_parts(rng);
        QPlus(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn difference(&self, target: &Self) -> Option<Self> {
        let diff = &target.0 - &self.0;
        (!diff.is_negative()).then_some(QPlus(diff))
    }

    fn refine(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<(Self, Self, Self, Self)> {
        refinement_witness(a, b, c, d).ok()
    }

    fn decompositions(total: &Self, parts: usize) -> Option<Vec<Vec<Self>>> {
        match parts {
            0 if total.is_zero() => Some(vec![vec![]]),
            0 => Some(vec![]),
            1 => Some(vec![vec![total.clone()]]),
            _ if total.is_zero() => Some(vec![vec![QPlus::zero(); parts]]),
            _ => None,
        }
    }

    fn hull_contains<K: Key>(
        point: &FinSupp<Self, K>,
        generators: &[FinSupp<Self, K>],
    ) -> bool {
        convexset::simplex_hull_contains(point, generators)
    }
}

// ---------------------------------------------------------------------------
// Nat

/// A natural number of arbitrary size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Nat(pub BigUint);

impl Nat {
    pub fn new(n: u64) -> Self {
        Nat(BigUint::from(n))
    }
}

impl Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Nat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_digits(s.trim()).map(Nat)
    }
}

impl Semiring for Nat {
    const KIND: SemiringKind = SemiringKind::Nat;
    const ENUMERABLE: bool = false;
    const SEMIFIELD: bool = false;

    fn zero() -> Self {
        Nat(BigUint::zero())
    }

    fn one() -> Self {
        Nat(BigUint::one())
    }

    fn add(&self, other: &Self) -> Self {
        Nat(&self.0 + &other.0)
    }

    fn mul(&self, other: &Self) -> Self {
        Nat(&self.0 * &other.0)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn inverse(&self) -> Result<Self> {
        Err(Error::unsupported("the naturals are not a semifield"))
    }

    fn unit_inverse(&self) -> Option<Self> {
        self.0.is_one().then(Nat::one)
    }

    fn elements() -> Result<Vec<Self>> {
        Err(Error::unsupported("the naturals cannot be enumerated"))
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Nat::new(sampling::natural(rng))
    }

    fn difference(&self, target: &Self) -> Option<Self> {
        (target.0 >= self.0).then(|| Nat(&target.0 - &self.0))
    }

    fn refine(a: &Self, b: &Self, c: &Self, d: &Self) -> Option<(Self, Self, Self, Self)> {
        if a.add(b) != c.add(d) {
            return None;
        }
        // x = min(a, c); the rest is forced.
        let x = if a.0 <= c.0 { a.clone() } else { c.clone() };
        let y = x.difference(a)?;
        let z = x.difference(c)?;
        let t = z.difference(b)?;
        Some((x, y, z, t))
    }

    fn decompositions(total: &Self, parts: usize) -> Option<Vec<Vec<Self>>> {
        let n: u64 = u64::try_from(&total.0).ok()?;
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(parts);
        compositions(n, parts, &mut current, &mut out);
        Some(out)
    }

    fn hull_contains<K: Key>(
        point: &FinSupp<Self, K>,
        generators: &[FinSupp<Self, K>],
    ) -> bool {
        convexset::exact_hull_contains(point, generators)
    }
}

fn compositions(rest: u64, parts: usize, current: &mut Vec<Nat>, out: &mut Vec<Vec<Nat>>) {
    if parts == 0 {
        if rest == 0 {
            out.push(current.clone());
        }
        return;
    }
    if parts == 1 {
        current.push(Nat::new(rest));
        out.push(current.clone());
        current.pop();
        return;
    }
    for k in 0..=rest {
        current.push(Nat::new(k));
        compositions(rest - k, parts - 1, current, out);
        current.pop();
    }
}

// ---------------------------------------------------------------------------
// Specs and property checking

/// A semiring given by its operation table and capability flags.
///
/// Unlike the [`Semiring`] trait, a spec is plain data, so tests can build
/// deliberately broken instances and run the checkers against them.
#[derive(Clone)]
pub struct SemiringSpec<T> {
    pub name: String,
    pub add: fn(&T, &T) -> T,
    pub mul: fn(&T, &T) -> T,
    pub zero: T,
    pub one: T,
    pub enumerable: bool,
    pub semifield: bool,
    pub positive: bool,
    /// The full carrier, when `enumerable`.
    pub elements: Option<Vec<T>>,
    pub sample: fn(&mut ChaCha8Rng) -> T,
    pub inverse: fn(&T) -> Option<T>,
    pub refine: fn(&T, &T, &T, &T) -> Option<(T, T, T, T)>,
    pub difference: fn(&T, &T) -> Option<T>,
}

impl<S: Semiring> SemiringSpec<S> {
    pub fn of() -> Self {
        SemiringSpec {
            name: S::KIND.to_string(),
            add: |a, b| a.add(b),
            mul: |a, b| a.mul(b),
            zero: S::zero(),
            one: S::one(),
            enumerable: S::ENUMERABLE,
            semifield: S::SEMIFIELD,
            positive: S::POSITIVE,
            elements: S::elements().ok(),
            sample: |rng| S::sample(rng),
            inverse: |a| a.unit_inverse(),
            refine: S::refine,
            difference: S::difference,
        }
    }
}

impl<T> Debug for SemiringSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemiringSpec")
            .field("name", &self.name)
            .field("enumerable", &self.enumerable)
            .field("semifield", &self.semifield)
            .field("positive", &self.positive)
            .finish_non_exhaustive()
    }
}

/// One failed semiring axiom together with the offending elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation<T> {
    pub axiom: &'static str,
    pub witness: Vec<T>,
}

type AxiomCheck<T> = fn(&SemiringSpec<T>, &T, &T, &T) -> bool;

fn semiring_axioms<T: Clone + Eq>() -> Vec<(&'static str, AxiomCheck<T>)> {
    vec![
        ("additive associativity", |s, a, b, c| {
            (s.add)(&(s.add)(a, b), c) == (s.add)(a, &(s.add)(b, c))
        }),
        ("additive commutativity", |s, a, b, _| {
            (s.add)(a, b) == (s.add)(b, a)
        }),
        ("additive identity", |s, a, _, _| {
            (s.add)(a, &s.zero) == *a && (s.add)(&s.zero, a) == *a
        }),
        ("multiplicative associativity", |s, a, b, c| {
            (s.mul)(&(s.mul)(a, b), c) == (s.mul)(a, &(s.mul)(b, c))
        }),
        ("multiplicative identity", |s, a, _, _| {
            (s.mul)(a, &s.one) == *a && (s.mul)(&s.one, a) == *a
        }),
        ("left distributivity", |s, a, b, c| {
            (s.mul)(a, &(s.add)(b, c)) == (s.add)(&(s.mul)(a, b), &(s.mul)(a, c))
        }),
        ("right distributivity", |s, a, b, c| {
            (s.mul)(&(s.add)(a, b), c) == (s.add)(&(s.mul)(a, c), &(s.mul)(b, c))
        }),
        ("annihilation", |s, a, _, _| {
            (s.mul)(a, &s.zero) == s.zero && (s.mul)(&s.zero, a) == s.zero
        }),
    ]
}

fn triples<T: Clone>(spec: &SemiringSpec<T>, budget: usize, seed: u64) -> Vec<[T; 3]> {
    match &spec.elements {
        Some(els) => {
            let mut out = Vec::with_capacity(els.len().pow(3));
            for a in els {
                for b in els {
                    for c in els {
                        out.push([a.clone(), b.clone(), c.clone()]);
                    }
                }
            }
            out
        }
        None => {
            let mut rng = sampling::rng(seed);
            (0..budget.max(1))
                .map(|_| {
                    [
                        (spec.sample)(&mut rng),
                        (spec.sample)(&mut rng),
                        (spec.sample)(&mut rng),
                    ]
                })
                .collect()
        }
    }
}

/// Checks the semiring axioms: exhaustively when the carrier is listed,
/// otherwise on `budget` sampled triples. Reports the first violation of each
/// axiom.
pub fn check_axioms<T: Clone + Eq>(
    spec: &SemiringSpec<T>,
    budget: usize,
    seed: u64,
) -> Vec<AxiomViolation<T>> {
    let cases = triples(spec, budget, seed);
    let mut report = Vec::new();
    for (name, law) in semiring_axioms::<T>() {
        if let Some([a, b, c]) = cases.iter().find(|[a, b, c]| !law(spec, a, b, c)) {
            report.push(AxiomViolation {
                axiom: name,
                witness: vec![a.clone(), b.clone(), c.clone()],
            });
        }
    }
    report
}

/// The algebraic properties of a semiring relevant to the weak distributive law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Positive,
    Semifield,
    Refinable,
    A,
    B,
    C,
    D,
    E,
}

impl Property {
    pub const ALL: [Property; 8] = [
        Property::Positive,
        Property::Semifield,
        Property::Refinable,
        Property::A,
        Property::B,
        Property::C,
        Property::D,
        Property::E,
    ];

    pub fn statement(self) -> &'static str {
        match self {
            Property::Positive => "a + b = 0 implies a = 0 = b",
            Property::Semifield => "a != 0 implies a has a multiplicative inverse",
            Property::Refinable => "a + b = c + d implies a refinement x, y, z, t exists",
            Property::A => "a + b = 1 implies a = 0 or b = 0",
            Property::B => "a * b = 0 implies a = 0 or b = 0",
            Property::C => "a + c = b + c implies a = b",
            Property::D => "for all a, b some x has a + x = b or b + x = a",
            Property::E => "a + b = c * d implies a weighting t on {x + y = d} exists",
        }
    }
}

impl Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::Positive => "positive",
            Property::Semifield => "semifield",
            Property::Refinable => "refinable",
            Property::A => "A",
            Property::B => "B",
            Property::C => "C",
            Property::D => "D",
            Property::E => "E",
        })
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::unsupported(format!("unknown property `{s}`")))
    }
}

/// Outcome of a property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<T> {
    HoldsExhaustive,
    HoldsSampled { samples: usize },
    Fails { witness: Vec<T> },
}

impl<T> Verdict<T> {
    pub fn holds(&self) -> bool {
        !matches!(self, Verdict::Fails { .. })
    }
}

impl<T: Display> Display for Verdict<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::HoldsExhaustive => f.write_str("holds-exhaustive"),
            Verdict::HoldsSampled { samples } => write!(f, "holds-sampled ({samples} samples)"),
            Verdict::Fails { witness } => {
                let w: Vec<String> = witness.iter().map(|x| x.to_string()).collect();
                write!(f, "fails (witness {})", w.join(", "))
            }
        }
    }
}

/// Decides (exhaustively) or tests (by sampling) one property of a semiring.
///
/// Property E quantifies over functions on `{(x, y) | x + y = d}` and is only
/// decidable on enumerable instances.
pub fn check_property<T: Clone + Eq>(
    spec: &SemiringSpec<T>,
    prop: Property,
    budget: usize,
    seed: u64,
) -> Result<Verdict<T>> {
    let budget = budget.max(1);
    let mut rng = sampling::rng(seed);
    let add = spec.add;
    let mul = spec.mul;
    let zero = &spec.zero;
    let one = &spec.one;

    let exhaustive = spec.elements.clone();
    let done = |failure: Option<Vec<T>>, samples: usize| match (failure, &exhaustive) {
        (Some(witness), _) => Verdict::Fails { witness },
        (None, Some(_)) => Verdict::HoldsExhaustive,
        (None, None) => Verdict::HoldsSampled { samples },
    };

    // Pairs and triples over the carrier, or sampled ones.
    let pairs = |rng: &mut ChaCha8Rng| -> Vec<(T, T)> {
        match &exhaustive {
            Some(els) => els
                .iter()
                .flat_map(|a| els.iter().map(move |b| (a.clone(), b.clone())))
                .collect(),
            None => (0..budget)
                .map(|_| ((spec.sample)(rng), (spec.sample)(rng)))
                .collect(),
        }
    };

    let verdict = match prop {
        Property::Positive => {
            let cases = pairs(&mut rng);
            let n = cases.len();
            let bad = cases
                .into_iter()
                .find(|(a, b)| add(a, b) == *zero && !(a == zero && b == zero))
                .map(|(a, b)| vec![a, b]);
            done(bad, n)
        }
        Property::Semifield => {
            let mut candidates: Vec<T> = match &exhaustive {
                Some(els) => els.clone(),
                None => {
                    // Small multiples of one come first so that the failing
                    // witness on the naturals is the least one.
                    let two = add(one, one);
                    let three = add(&two, one);
                    let mut c = vec![one.clone(), two, three];
                    c.extend((0..budget).map(|_| (spec.sample)(&mut rng)));
                    c
                }
            };
            candidates.retain(|a| a != zero);
            let n = candidates.len();
            let bad = candidates
                .into_iter()
                .find(|a| match (spec.inverse)(a) {
                    Some(x) => !(mul(a, &x) == *one && mul(&x, a) == *one),
                    None => true,
                })
                .map(|a| vec![a]);
            done(bad, n)
        }
        Property::Refinable => {
            let quads: Vec<[T; 4]> = match &exhaustive {
                Some(els) => {
                    let mut q = Vec::new();
                    for a in els {
                        for b in els {
                            for c in els {
                                for d in els {
                                    if add(a, b) == add(c, d) {
                                        q.push([a.clone(), b.clone(), c.clone(), d.clone()]);
                                    }
                                }
                            }
                        }
                    }
                    q
                }
                None => {
                    let mut q = Vec::new();
                    let mut attempts = 0;
                    while q.len() < budget && attempts < budget * 20 {
                        attempts += 1;
                        let a = (spec.sample)(&mut rng);
                        let b = (spec.sample)(&mut rng);
                        let c = (spec.sample)(&mut rng);
                        if let Some(d) = (spec.difference)(&c, &add(&a, &b)) {
                            q.push([a, b, c, d]);
                        }
                    }
                    q
                }
            };
            let n = quads.len();
            let refined = |[a, b, c, d]: &[T; 4]| -> bool {
                let ok = |(x, y, z, t): &(T, T, T, T)| {
                    add(x, y) == *a && add(z, t) == *b && add(x, z) == *c && add(y, t) == *d
                };
                if let Some(w) = (spec.refine)(a, b, c, d) {
                    if ok(&w) {
                        return true;
                    }
                }
                match &exhaustive {
                    Some(els) => els.iter().any(|x| {
                        els.iter().any(|y| {
                            els.iter().any(|z| {
                                els.iter().any(|t| {
                                    ok(&(x.clone(), y.clone(), z.clone(), t.clone()))
                                })
                            })
                        })
                    }),
                    None => false,
                }
            };
            let bad = quads.iter().find(|q| !refined(q)).map(|q| q.to_vec());
            done(bad, n)
        }
        Property::A => {
            let mut cases = pairs(&mut rng);
            if exhaustive.is_none() {
                // Random pairs almost never sum to one; complete samples to one.
                for _ in 0..budget {
                    let a = (spec.sample)(&mut rng);
                    if let Some(b) = (spec.difference)(&a, one) {
                        cases.push((a, b));
                    }
                }
            }
            let n = cases.len();
            let bad = cases
                .into_iter()
                .find(|(a, b)| add(a, b) == *one && a != zero && b != zero)
                .map(|(a, b)| vec![a, b]);
            done(bad, n)
        }
        Property::B => {
            let cases = pairs(&mut rng);
            let n = cases.len();
            let bad = cases
                .into_iter()
                .find(|(a, b)| mul(a, b) == *zero && a != zero && b != zero)
                .map(|(a, b)| vec![a, b]);
            done(bad, n)
        }
        Property::C => {
            let cases: Vec<[T; 3]> = triples(spec, budget, seed ^ 0xC);
            let n = cases.len();
            let bad = cases
                .into_iter()
                .find(|[a, b, c]| add(a, c) == add(b, c) && a != b)
                .map(|t| t.to_vec());
            done(bad, n)
        }
        Property::D => {
            let cases = pairs(&mut rng);
            let n = cases.len();
            let reaches = |from: &T, to: &T| -> bool {
                match &exhaustive {
                    Some(els) => els.iter().any(|x| add(from, x) == *to),
                    None => (spec.difference)(from, to).is_some_and(|x| add(from, &x) == *to),
                }
            };
            let bad = cases
                .into_iter()
                .find(|(a, b)| !reaches(a, b) && !reaches(b, a))
                .map(|(a, b)| vec![a, b]);
            done(bad, n)
        }
        Property::E => {
            let els = exhaustive.clone().ok_or_else(|| {
                Error::unsupported(format!(
                    "property E quantifies over functions on an infinite set for `{}`",
                    spec.name
                ))
            })?;
            let mut bad = None;
            'outer: for a in &els {
                for b in &els {
                    for c in &els {
                        for d in &els {
                            if add(a, b) != mul(c, d) {
                                continue;
                            }
                            if !property_e_witness(spec, &els, a, b, c, d) {
                                bad = Some(vec![a.clone(), b.clone(), c.clone(), d.clone()]);
                                break 'outer;
                            }
                        }
                    }
                }
            }
            done(bad, 0)
        }
    };
    Ok(verdict)
}

/// Searches every `t : {(x, y) | x + y = d} -> S` for one satisfying the three
/// sums of property E.
fn property_e_witness<T: Clone + Eq>(
    spec: &SemiringSpec<T>,
    els: &[T],
    a: &T,
    b: &T,
    c: &T,
    d: &T,
) -> bool {
    let add = spec.add;
    let mul = spec.mul;
    let domain: Vec<(T, T)> = els
        .iter()
        .flat_map(|x| els.iter().map(move |y| (x.clone(), y.clone())))
        .filter(|(x, y)| add(x, y) == *d)
        .collect();
    let k = els.len();
    let total = k.checked_pow(domain.len() as u32).unwrap_or(usize::MAX);
    (0..total).any(|mut code| {
        let mut sx = spec.zero.clone();
        let mut sy = spec.zero.clone();
        let mut st = spec.zero.clone();
        for (x, y) in &domain {
            let t = &els[code % k];
            code /= k;
            sx = add(&sx, &mul(t, x));
            sy = add(&sy, &mul(t, y));
            st = add(&st, t);
        }
        sx == *a && sy == *b && st == *c
    })
}
