//! Terms over `⊥, ⊔, 0, +, λ·` and variables, their denotation as finitely
//! generated convex sets, the single-variable interval semantics and the
//! axiom suite.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Display};
use std::sync::Arc;

use rand::Rng;

use crate::convexset::ConvexSet;
use crate::error::{Error, Result};
use crate::finsupp::{BasisElement, FinSupp};
use crate::lifting;
use crate::monad_cf;
use crate::report::Report;
use crate::sampling;
use crate::semiring::{QPlus, Semiring};

pub use parse::parse;

/// Instantiations per axiom allowed in the exhaustive (enumerable) suite.
pub const AXIOM_INSTANCE_LIMIT: usize = 60_000;

/// Depth of the random subterms substituted into the axioms.
pub const AXIOM_SUBTERM_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term<S> {
    Bottom,
    Zero,
    Var(String),
    Scale(S, Box<Term<S>>),
    Add(Box<Term<S>>, Box<Term<S>>),
    Join(Box<Term<S>>, Box<Term<S>>),
}

impl<S: Semiring> Term<S> {
    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn scale(lambda: S, t: Term<S>) -> Self {
        Term::Scale(lambda, Box::new(t))
    }

    pub fn add(a: Term<S>, b: Term<S>) -> Self {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term<S>, b: Term<S>) -> Self {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Bottom | Term::Zero => {}
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Scale(_, t) => t.collect_vars(out),
            Term::Add(a, b) | Term::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Replaces every variable by the term `f` gives it.
    pub fn substitute(&self, f: &impl Fn(&str) -> Term<S>) -> Term<S> {
        match self {
            Term::Bottom => Term::Bottom,
            Term::Zero => Term::Zero,
            Term::Var(v) => f(v),
            Term::Scale(l, t) => Term::scale(l.clone(), t.substitute(f)),
            Term::Add(a, b) => Term::add(a.substitute(f), b.substitute(f)),
            Term::Join(a, b) => Term::join(a.substitute(f), b.substitute(f)),
        }
    }

    pub fn rename(&self, f: &impl Fn(&str) -> String) -> Term<S> {
        self.substitute(&|v| Term::Var(f(v)))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Bottom | Term::Zero | Term::Var(_) => 1,
            Term::Scale(_, t) => 1 + t.size(),
            Term::Add(a, b) | Term::Join(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Term::Join(..) => 0,
            Term::Add(..) => 1,
            Term::Scale(..) => 2,
            _ => 3,
        }
    }
}

impl<S: Semiring> std::str::FromStr for Term<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

fn write_at<S: Semiring>(f: &mut fmt::Formatter<'_>, t: &Term<S>, min: u8) -> fmt::Result {
    if t.level() < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

impl<S: Semiring> Display for Term<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Bottom => f.write_str("bot"),
            Term::Zero => f.write_str("0"),
            Term::Var(v) => f.write_str(v),
            Term::Scale(l, t) => {
                write!(f, "{l}*")?;
                write_at(f, t, 2)
            }
            Term::Add(a, b) => {
                write_at(f, a, 1)?;
                f.write_str(" + ")?;
                write_at(f, b, 2)
            }
            Term::Join(a, b) => {
                write_at(f, a, 0)?;
                f.write_str(" | ")?;
                write_at(f, b, 1)
            }
        }
    }
}

fn require_semifield<S: Semiring>() -> Result<()> {
    if S::SEMIFIELD {
        Ok(())
    } else {
        Err(Error::unsupported(format!(
            "term evaluation needs a semifield, {} is not one",
            S::KIND
        )))
    }
}

/// `⟦t⟧`, the convex set a term denotes over `basis`.
pub fn eval<S: Semiring>(t: &Term<S>, basis: &Arc<BTreeSet<BasisElement>>) -> Result<ConvexSet<S>> {
    eval_with(t, basis, &BTreeMap::new())
}

/// [`eval`] with some variables bound to given sets; the others denote
/// `{Δ_x}` and must lie in `basis`.
pub fn eval_with<S: Semiring>(
    t: &Term<S>,
    basis: &Arc<BTreeSet<BasisElement>>,
    env: &BTreeMap<String, ConvexSet<S>>,
) -> Result<ConvexSet<S>> {
    require_semifield::<S>()?;
    eval_rec(t, basis, env)
}

fn eval_rec<S: Semiring>(
    t: &Term<S>,
    basis: &Arc<BTreeSet<BasisElement>>,
    env: &BTreeMap<String, ConvexSet<S>>,
) -> Result<ConvexSet<S>> {
    match t {
        Term::Bottom => Ok(ConvexSet::empty(basis.clone())),
        Term::Zero => Ok(lifting::zero_set(basis.clone())),
        Term::Var(v) => {
            if let Some(set) = env.get(v) {
                return Ok(set.clone());
            }
            let x = BasisElement::name(v);
            if !basis.contains(&x) {
                return Err(Error::VariableNotInBasis(v.clone()));
            }
            monad_cf::cf_unit(basis.clone(), x)
        }
        Term::Scale(l, t) => Ok(lifting::scale_set(l, &eval_rec(t, basis, env)?)),
        Term::Add(a, b) => lifting::add_set(&eval_rec(a, basis, env)?, &eval_rec(b, basis, env)?),
        Term::Join(a, b) => eval_rec(a, basis, env)?.join(&eval_rec(b, basis, env)?),
    }
}

/// Equality of denotations, which decides provable equality of terms.
pub fn equal_terms<S: Semiring>(t1: &Term<S>, t2: &Term<S>, basis: &Arc<BTreeSet<BasisElement>>) -> Result<bool> {
    eval(t1, basis)?.equal(&eval(t2, basis)?)
}

// ---------------------------------------------------------------------------
// One variable

/// A finitely generated convex subset of `ℚ≥0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Interval {
    Empty,
    Closed(QPlus, QPlus),
}

impl Interval {
    /// The set `{(x↦lo), (x↦hi)}` generates over the single-point basis.
    pub fn to_set(&self, var: &str) -> ConvexSet<QPlus> {
        let x = BasisElement::name(var);
        let basis = Arc::new(BTreeSet::from([x.clone()]));
        match self {
            Interval::Empty => ConvexSet::empty(basis),
            Interval::Closed(lo, hi) => ConvexSet::hull(
                basis,
                vec![
                    FinSupp::from_entries([(x.clone(), lo.clone())]),
                    FinSupp::from_entries([(x, hi.clone())]),
                ],
            )
            .expect("support is the basis"),
        }
    }

    /// `⊥`, `a·x` or `(a·x) ⊔ (b·x)`.
    pub fn normal_form(&self, var: &str) -> Term<QPlus> {
        match self {
            Interval::Empty => Term::Bottom,
            Interval::Closed(lo, hi) if lo == hi => Term::scale(lo.clone(), Term::var(var)),
            Interval::Closed(lo, hi) => Term::join(
                Term::scale(lo.clone(), Term::var(var)),
                Term::scale(hi.clone(), Term::var(var)),
            ),
        }
    }
}

impl Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Interval::Empty => f.write_str("∅"),
            Interval::Closed(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

/// The interval a term in one variable denotes, computed directly on the
/// endpoints.
pub fn interval_eval(t: &Term<QPlus>) -> Result<Interval> {
    let vars = t.variables();
    if vars.len() > 1 {
        return Err(Error::PreconditionViolated(format!(
            "interval semantics takes one variable, got {}",
            vars.into_iter().collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(interval_rec(t))
}

fn interval_rec(t: &Term<QPlus>) -> Interval {
    use Interval::*;
    match t {
        Term::Var(_) => Closed(QPlus::one(), QPlus::one()),
        Term::Zero => Closed(QPlus::zero(), QPlus::zero()),
        Term::Bottom => Empty,
        Term::Scale(l, t) => match interval_rec(t) {
            _ if l.is_zero() => Closed(QPlus::zero(), QPlus::zero()),
            Closed(a, b) => Closed(l.mul(&a), l.mul(&b)),
            Empty => Empty,
        },
        Term::Add(p, q) => match (interval_rec(p), interval_rec(q)) {
            (Closed(a1, b1), Closed(a2, b2)) => Closed(a1.add(&a2), b1.add(&b2)),
            _ => Empty,
        },
        Term::Join(p, q) => match (interval_rec(p), interval_rec(q)) {
            (Closed(a1, b1), Closed(a2, b2)) => Closed(QPlus::min(&a1, &a2), QPlus::max(&b1, &b2)),
            (Closed(a, b), Empty) | (Empty, Closed(a, b)) => Closed(a, b),
            (Empty, Empty) => Empty,
        },
    }
}

/// The normal form `⊥`, `a·x` or `(a·x) ⊔ (b·x)` of a one-variable term.
pub fn interval_normal_form(t: &Term<QPlus>, var: &str) -> Result<Term<QPlus>> {
    Ok(interval_eval(t)?.normal_form(var))
}

// ---------------------------------------------------------------------------
// Random terms

/// A reproducible random term of depth at most `depth` over `vars`.
pub fn random_term<S: Semiring>(vars: &[String], depth: usize, seed: u64) -> Term<S> {
    random_term_with(vars, depth, &mut sampling::rng(seed))
}

pub fn random_term_with<S: Semiring, R: Rng>(vars: &[String], depth: usize, rng: &mut R) -> Term<S> {
    if depth == 0 || rng.gen_ratio(1, 5) {
        let leaves = 2 + vars.len().min(1) * 3;
        return match rng.gen_range(0..leaves) {
            0 => Term::Bottom,
            1 => Term::Zero,
            _ => Term::Var(vars[rng.gen_range(0..vars.len())].clone()),
        };
    }
    match rng.gen_range(0..3) {
        0 => Term::scale(S::sample(rng), random_term_with(vars, depth - 1, rng)),
        1 => Term::add(
            random_term_with(vars, depth - 1, rng),
            random_term_with(vars, depth - 1, rng),
        ),
        _ => Term::join(
            random_term_with(vars, depth - 1, rng),
            random_term_with(vars, depth - 1, rng),
        ),
    }
}

// ---------------------------------------------------------------------------
// Axioms

/// Which block of the axiom table an equation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomGroup {
    Semilattice,
    Semimodule,
    Distributivity,
}

impl Display for AxiomGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomGroup::Semilattice => "E_SL",
            AxiomGroup::Semimodule => "E_LSM",
            AxiomGroup::Distributivity => "E_D′",
        })
    }
}

type Sides<S> = fn(&[Term<S>; 3], &S, &S) -> (Term<S>, Term<S>);

/// An equation with up to three term variables and two scalars.
pub struct Axiom<S> {
    pub group: AxiomGroup,
    pub statement: &'static str,
    pub arity: usize,
    pub scalars: usize,
    pub nonzero: bool,
    sides: Sides<S>,
}

impl<S: Semiring> Axiom<S> {
    pub fn instantiate(&self, terms: &[Term<S>; 3], lambda: &S, mu: &S) -> (Term<S>, Term<S>) {
        (self.sides)(terms, lambda, mu)
    }
}

fn ax<S>(
    group: AxiomGroup,
    statement: &'static str,
    arity: usize,
    scalars: usize,
    sides: Sides<S>,
) -> Axiom<S> {
    Axiom {
        group,
        statement,
        arity,
        scalars,
        nonzero: false,
        sides,
    }
}

/// Every equation of `E_SL`, `E_LSM` (with `1·x = x`) and `E_D′`.
pub fn axioms<S: Semiring>() -> Vec<Axiom<S>> {
    use AxiomGroup::*;
    vec![
        ax(Semilattice, "(x ⊔ y) ⊔ z = x ⊔ (y ⊔ z)", 3, 0, |[x, y, z], _, _| {
            (
                Term::join(Term::join(x.clone(), y.clone()), z.clone()),
                Term::join(x.clone(), Term::join(y.clone(), z.clone())),
            )
        }),
        ax(Semilattice, "x ⊔ y = y ⊔ x", 2, 0, |[x, y, _], _, _| {
            (Term::join(x.clone(), y.clone()), Term::join(y.clone(), x.clone()))
        }),
        ax(Semilattice, "x ⊔ ⊥ = x", 1, 0, |[x, _, _], _, _| {
            (Term::join(x.clone(), Term::Bottom), x.clone())
        }),
        ax(Semilattice, "x ⊔ x = x", 1, 0, |[x, _, _], _, _| {
            (Term::join(x.clone(), x.clone()), x.clone())
        }),
        ax(Semimodule, "(x + y) + z = x + (y + z)", 3, 0, |[x, y, z], _, _| {
            (
                Term::add(Term::add(x.clone(), y.clone()), z.clone()),
                Term::add(x.clone(), Term::add(y.clone(), z.clone())),
            )
        }),
        ax(Semimodule, "x + y = y + x", 2, 0, |[x, y, _], _, _| {
            (Term::add(x.clone(), y.clone()), Term::add(y.clone(), x.clone()))
        }),
        ax(Semimodule, "x + 0 = x", 1, 0, |[x, _, _], _, _| {
            (Term::add(x.clone(), Term::Zero), x.clone())
        }),
        ax(Semimodule, "(λ + µ)·x = λ·x + µ·x", 1, 2, |[x, _, _], l, m| {
            (
                Term::scale(l.add(m), x.clone()),
                Term::add(Term::scale(l.clone(), x.clone()), Term::scale(m.clone(), x.clone())),
            )
        }),
        ax(Semimodule, "0·x = 0", 1, 0, |[x, _, _], _, _| {
            (Term::scale(S::zero(), x.clone()), Term::Zero)
        }),
        ax(Semimodule, "(λµ)·x = λ·(µ·x)", 1, 2, |[x, _, _], l, m| {
            (
                Term::scale(l.mul(m), x.clone()),
                Term::scale(l.clone(), Term::scale(m.clone(), x.clone())),
            )
        }),
        ax(Semimodule, "λ·(x + y) = λ·x + λ·y", 2, 1, |[x, y, _], l, _| {
            (
                Term::scale(l.clone(), Term::add(x.clone(), y.clone())),
                Term::add(Term::scale(l.clone(), x.clone()), Term::scale(l.clone(), y.clone())),
            )
        }),
        ax(Semimodule, "λ·0 = 0", 0, 1, |_, l, _| {
            (Term::scale(l.clone(), Term::Zero), Term::Zero)
        }),
        ax(Semimodule, "1·x = x", 1, 0, |[x, _, _], _, _| {
            (Term::scale(S::one(), x.clone()), x.clone())
        }),
        Axiom {
            nonzero: true,
            ..ax(Distributivity, "λ·⊥ = ⊥ for λ ≠ 0", 0, 1, |_, l, _| {
                (Term::scale(l.clone(), Term::Bottom), Term::Bottom)
            })
        },
        ax(Distributivity, "λ·(x ⊔ y) = (λ·x) ⊔ (λ·y)", 2, 1, |[x, y, _], l, _| {
            (
                Term::scale(l.clone(), Term::join(x.clone(), y.clone())),
                Term::join(Term::scale(l.clone(), x.clone()), Term::scale(l.clone(), y.clone())),
            )
        }),
        ax(Distributivity, "x + ⊥ = ⊥", 1, 0, |[x, _, _], _, _| {
            (Term::add(x.clone(), Term::Bottom), Term::Bottom)
        }),
        ax(Distributivity, "x + (y ⊔ z) = (x + y) ⊔ (x + z)", 3, 0, |[x, y, z], _, _| {
            (
                Term::add(x.clone(), Term::join(y.clone(), z.clone())),
                Term::join(Term::add(x.clone(), y.clone()), Term::add(x.clone(), z.clone())),
            )
        }),
    ]
}

const PLACEHOLDERS: [&str; 3] = ["x", "y", "z"];

fn scalar_text<S: Semiring>(axiom: &Axiom<S>, lambda: &S, mu: &S) -> String {
    match axiom.scalars {
        0 => String::new(),
        1 => format!(", λ = {lambda}"),
        _ => format!(", λ = {lambda}, µ = {mu}"),
    }
}

/// Checks every axiom on both sides. Over an enumerable semiring the
/// variables range over all convex sets on `basis` with a bounded number of
/// generators and the scalars over the whole carrier; otherwise each axiom
/// gets `samples` instantiations by random subterms and random scalars.
pub fn check_axiom_suite<S: Semiring>(
    basis: &Arc<BTreeSet<BasisElement>>,
    samples: usize,
    seed: u64,
) -> Result<Report> {
    require_semifield::<S>()?;
    let mut report = Report::new("axioms", seed);
    if S::ENUMERABLE {
        let (cap, sets) = bounded_sets::<S>(basis)?;
        let scalars = S::elements()?;
        for axiom in axioms::<S>() {
            let (count, bad) = exhaustive_axiom(&axiom, basis, &sets, &scalars)?;
            report.check(
                format!(
                    "{} {} (exhaustive, ≤{cap} generators, {count} instances)",
                    axiom.group, axiom.statement
                ),
                bad,
            );
        }
    } else {
        let vars: Vec<String> = basis.iter().map(|b| b.to_string()).collect();
        let mut rng = sampling::rng(seed);
        for axiom in axioms::<S>() {
            let mut bad = None;
            for _ in 0..samples {
                let terms: [Term<S>; 3] =
                    std::array::from_fn(|_| random_term_with(&vars, AXIOM_SUBTERM_DEPTH, &mut rng));
                let lambda = sample_scalar::<S, _>(axiom.nonzero, &mut rng);
                let mu = S::sample(&mut rng);
                let (lhs, rhs) = axiom.instantiate(&terms, &lambda, &mu);
                if !equal_terms(&lhs, &rhs, basis)? {
                    let shown: Vec<String> = PLACEHOLDERS
                        .iter()
                        .zip(&terms)
                        .take(axiom.arity)
                        .map(|(p, t)| format!("{p} := {t}"))
                        .collect();
                    bad = Some(format!(
                        "{}{}: {lhs} vs {rhs}",
                        shown.join(", "),
                        scalar_text(&axiom, &lambda, &mu)
                    ));
                    break;
                }
            }
            report.check(
                format!("{} {} ({samples} instances)", axiom.group, axiom.statement),
                bad,
            );
        }
    }
    Ok(report)
}

fn sample_scalar<S: Semiring, R: Rng>(nonzero: bool, rng: &mut R) -> S {
    loop {
        let s = S::sample(rng);
        if !(nonzero && s.is_zero()) {
            return s;
        }
    }
}

/// The largest generator cap (at most three) whose sets keep a
/// three-variable axiom under [`AXIOM_INSTANCE_LIMIT`].
fn bounded_sets<S: Semiring>(basis: &Arc<BTreeSet<BasisElement>>) -> Result<(usize, Vec<ConvexSet<S>>)> {
    for cap in (1..=3).rev() {
        if basis.len() + cap > 8 {
            continue;
        }
        let sets = monad_cf::enumerate_sets::<S, _>(basis, cap)?;
        if sets.len().pow(3) <= AXIOM_INSTANCE_LIMIT {
            return Ok((cap, sets));
        }
    }
    Err(Error::resource("axiom instances", AXIOM_INSTANCE_LIMIT as u64))
}

fn exhaustive_axiom<S: Semiring>(
    axiom: &Axiom<S>,
    basis: &Arc<BTreeSet<BasisElement>>,
    sets: &[ConvexSet<S>],
    scalars: &[S],
) -> Result<(usize, Option<String>)> {
    let terms: [Term<S>; 3] = PLACEHOLDERS.map(Term::var);
    let lambdas: Vec<&S> = scalars
        .iter()
        .filter(|s| !(axiom.nonzero && s.is_zero()))
        .collect();
    let mus: Vec<&S> = if axiom.scalars >= 2 { scalars.iter().collect() } else { vec![&scalars[0]] };
    let lambdas = if axiom.scalars >= 1 { lambdas } else { vec![&scalars[0]] };
    let mut count = 0;
    let total = sets.len().pow(axiom.arity as u32);
    for code in 0..total {
        let mut env = BTreeMap::new();
        let mut rest = code;
        for p in PLACEHOLDERS.iter().take(axiom.arity) {
            env.insert(p.to_string(), sets[rest % sets.len()].clone());
            rest /= sets.len();
        }
        for l in &lambdas {
            for m in &mus {
                count += 1;
                let (lhs, rhs) = axiom.instantiate(&terms, l, m);
                let a = eval_with(&lhs, basis, &env)?;
                let b = eval_with(&rhs, basis, &env)?;
                if !a.equal(&b)? {
                    let shown: Vec<String> = env.iter().map(|(k, v)| format!("{k} := {v}")).collect();
                    return Ok((
                        count,
                        Some(format!(
                            "{}{}: {a} vs {b}",
                            shown.join(", "),
                            scalar_text(axiom, l, m)
                        )),
                    ));
                }
            }
        }
    }
    Ok((count, None))
}
