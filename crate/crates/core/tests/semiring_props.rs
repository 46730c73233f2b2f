use convexalg::semiring::{self, Semiring};
use convexalg::{Bool, Nat, QPlus};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = QPlus> {
    (0u64..40, 1u64..12).prop_map(|(n, d)| QPlus::new(n, d).unwrap())
}

fn nat() -> impl Strategy<Value = Nat> {
    (0u64..1000).prop_map(Nat::new)
}

fn boolean() -> impl Strategy<Value = Bool> {
    any::<bool>().prop_map(Bool)
}

fn check_axioms<S: Semiring>(a: &S, b: &S, c: &S) -> Result<(), TestCaseError> {
    prop_assert_eq!(a.add(b), b.add(a));
    prop_assert_eq!(a.mul(b), b.mul(a));
    prop_assert_eq!(a.add(&b.add(c)), a.add(b).add(c));
    prop_assert_eq!(a.mul(&b.mul(c)), a.mul(b).mul(c));
    prop_assert_eq!(a.mul(&b.add(c)), a.mul(b).add(&a.mul(c)));
    prop_assert_eq!(a.add(&S::zero()), a.clone());
    prop_assert_eq!(a.mul(&S::one()), a.clone());
    prop_assert!(a.mul(&S::zero()).is_zero());
    // Positivity: a + b = 0 only when both are zero.
    prop_assert_eq!(a.add(b).is_zero(), a.is_zero() && b.is_zero());
    Ok(())
}

proptest! {
    #[test]
    fn rat_axioms(a in rat(), b in rat(), c in rat()) {
        check_axioms(&a, &b, &c)?;
    }

    #[test]
    fn nat_axioms(a in nat(), b in nat(), c in nat()) {
        check_axioms(&a, &b, &c)?;
    }

    #[test]
    fn bool_axioms(a in boolean(), b in boolean(), c in boolean()) {
        check_axioms(&a, &b, &c)?;
    }

    #[test]
    fn rat_inverse(a in rat()) {
        prop_assume!(!a.is_zero());
        let inv = semiring::inverse(&a).unwrap();
        prop_assert_eq!(a.mul(&inv), QPlus::one());
    }

    #[test]
    fn rat_difference(a in rat(), b in rat()) {
        let total = a.add(&b);
        prop_assert_eq!(a.difference(&total), Some(b));
    }

    #[test]
    fn nat_difference(a in nat(), b in nat()) {
        let total = a.add(&b);
        prop_assert_eq!(a.difference(&total), Some(b));
    }

    #[test]
    fn rat_refinement(a in rat(), b in rat(), k in 0u64..=10) {
        let total = a.add(&b);
        let c = total.mul(&QPlus::new(k, 10).unwrap());
        let d = c.difference(&total).unwrap();
        let (x, y, z, t) = semiring::refinement_witness(&a, &b, &c, &d).unwrap();
        prop_assert_eq!(x.add(&y), a);
        prop_assert_eq!(z.add(&t), b);
        prop_assert_eq!(x.add(&z), c);
        prop_assert_eq!(y.add(&t), d);
    }

    #[test]
    fn rat_literal_round_trip(a in rat()) {
        prop_assert_eq!(a.to_string().parse::<QPlus>().unwrap(), a);
    }
}

#[test]
fn bool_decompositions_of_one() {
    let parts = Bool::decompositions(&Bool(true), 2).unwrap();
    for p in &parts {
        assert_eq!(semiring::sum(p), Bool(true));
    }
    assert_eq!(parts.len(), 3);
}
