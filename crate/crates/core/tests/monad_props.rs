use std::collections::BTreeSet;
use std::sync::Arc;

use convexalg::convexset::basis_of;
use convexalg::monad_cf::{self, random_convex_set, random_map, KleisliMap};
use convexalg::sampling;
use convexalg::theory::{self, Term};
use convexalg::{BasisElement, Bool, ConvexSet, FinSupp, QPlus};
use proptest::prelude::*;

type Basis = Arc<BTreeSet<BasisElement>>;

fn names(n: &[&str]) -> Basis {
    basis_of(n.iter().map(|s| BasisElement::name(s)))
}

/// `♯g(A)` over Bool by brute force: every `φ` in the saturation of `A`,
/// every choice of `ψ_y` from the saturation of `g(y)`, joined over the
/// support of `φ`.
fn extend_oracle(g: &KleisliMap<Bool>, set: &ConvexSet<Bool>) -> BTreeSet<FinSupp<Bool>> {
    let mut out = BTreeSet::new();
    for phi in set.saturate().unwrap() {
        let mut partial: BTreeSet<FinSupp<Bool>> = [FinSupp::zero()].into();
        for y in phi.support() {
            let choices = g.get(y).unwrap().saturate().unwrap();
            partial = partial
                .iter()
                .flat_map(|p| choices.iter().map(move |c| p.add(c)))
                .collect();
        }
        out.extend(partial);
    }
    out
}

proptest! {
    #[test]
    fn bool_extension_matches_brute_force(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let b = names(&["x", "y"]);
        let g = random_map::<Bool, _, _>(&b, &b, 3, &mut rng);
        let set = random_convex_set(&b, 3, &mut rng);
        let got = monad_cf::kleisli_extend(&g, &set).unwrap().saturate().unwrap();
        prop_assert_eq!(got, extend_oracle(&g, &set));
    }

    #[test]
    fn unit_laws_hold(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let b = names(&["x", "y"]);
        let f = random_map::<QPlus, _, _>(&b, &b, 2, &mut rng);
        let id = KleisliMap::identity(b.clone());
        prop_assert!(monad_cf::kleisli_compose(&id, &f).unwrap().equal(&f).unwrap());
        prop_assert!(monad_cf::kleisli_compose(&f, &id).unwrap().equal(&f).unwrap());
    }

    #[test]
    fn joins_precompose(seed in any::<u64>()) {
        let mut rng = sampling::rng(seed);
        let b = names(&["x", "y"]);
        let h = random_map::<Bool, _, _>(&b, &b, 2, &mut rng);
        let f1 = random_map(&b, &b, 2, &mut rng);
        let f2 = random_map(&b, &b, 2, &mut rng);
        let lhs = monad_cf::kleisli_compose(&h, &monad_cf::join_maps(&f1, &f2).unwrap()).unwrap();
        let rhs = monad_cf::join_maps(
            &monad_cf::kleisli_compose(&h, &f1).unwrap(),
            &monad_cf::kleisli_compose(&h, &f2).unwrap(),
        )
        .unwrap();
        prop_assert!(lhs.equal(&rhs).unwrap());
    }

    /// Evaluation commutes with renaming variables: `⟦t[f]⟧ = Cf(f)(⟦t⟧)`.
    #[test]
    fn eval_is_natural(seed in any::<u64>(), collapse in any::<bool>()) {
        let vars: Vec<String> = vec!["x".into(), "y".into()];
        let t: Term<QPlus> = theory::random_term(&vars, 3, seed);
        let source = names(&["x", "y"]);
        let (target, rename): (Basis, fn(&str) -> String) = if collapse {
            (names(&["z"]), |_| "z".to_string())
        } else {
            (names(&["u", "v"]), |v| if v == "x" { "u".into() } else { "v".into() })
        };
        let renamed = t.rename(&rename);
        let lhs = theory::eval(&renamed, &target).unwrap();
        let rhs = monad_cf::cf_map(
            |k: &BasisElement| Some(BasisElement::name(&rename(&k.to_string()))),
            target.clone(),
            &theory::eval(&t, &source).unwrap(),
        )
        .unwrap();
        prop_assert!(lhs.equal(&rhs).unwrap(), "{} vs {}", lhs, rhs);
    }
}

#[test]
fn strictness_counterexample() {
    let b = names(&["x"]);
    let f = KleisliMap::from_fn(b.clone(), b.clone(), |_| {
        ConvexSet::singleton(b.clone(), FinSupp::<Bool>::zero()).unwrap()
    })
    .unwrap();
    let composed = monad_cf::kleisli_compose(&monad_cf::bottom(b.clone(), b.clone()), &f).unwrap();
    assert!(!composed.equal(&monad_cf::bottom(b.clone(), b)).unwrap());
}
