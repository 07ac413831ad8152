use proptest::prelude::*;

use kohnlab::engine::epsilon;
use kohnlab::groebner::local::{local_colength, LocalColength};
use kohnlab::groebner::{groebner, satisfies_buchberger_criterion};
use kohnlab::poly::{parse, Monomial};
use kohnlab::rational::rat;
use kohnlab::verifiers::corpus::staircase_count;
use kohnlab::{Ideal, MonomialOrder, Polynomial};

fn poly(n: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, n), -5i64..=5, 1i64..=3), 0..5).prop_map(
        move |terms| {
            Polynomial::from_terms(
                n,
                terms
                    .into_iter()
                    .map(|(e, a, b)| (Monomial::from_exponents(&e), rat(a, b))),
            )
        },
    )
}

/// Exponent boxes `(a_1..a_n)` with `n ∈ {2, 3}`.
fn exponents() -> impl Strategy<Value = Vec<u32>> {
    prop_oneof![prop::collection::vec(1u32..=5, 2), prop::collection::vec(1u32..=3, 3)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in poly(2), b in poly(2), c in poly(2)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn display_parses_back(a in poly(3)) {
        prop_assert_eq!(parse(&a.to_string(), 3).unwrap(), a);
    }

    #[test]
    fn product_rule(a in poly(2), b in poly(2), var in 0usize..2) {
        let lhs = (&a * &b).derivative(var).unwrap();
        let rhs = &(&a.derivative(var).unwrap() * &b) + &(&a * &b.derivative(var).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn groebner_basis_is_reduced_and_contains_generators(a in poly(2), b in poly(2), c in poly(2)) {
        let gens = vec![a, b, c];
        let gb = groebner(&Ideal::new(2, gens.clone()), &MonomialOrder::GrevLex).unwrap();
        prop_assert!(gb.is_reduced());
        prop_assert!(satisfies_buchberger_criterion(&gb));
        for g in &gens {
            prop_assert!(gb.contains(g));
        }
    }

    #[test]
    fn combinations_are_members(a in poly(2), b in poly(2), p in poly(2), q in poly(2)) {
        let ideal = Ideal::new(2, vec![a.clone(), b.clone()]);
        let f = &(&p * &a) + &(&q * &b);
        prop_assert!(ideal.contains(&f).unwrap());
    }

    #[test]
    fn monomial_colength_is_the_staircase(exps in exponents(), extra in prop::collection::vec(0u32..3, 3)) {
        let n = exps.len();
        let mut gens: Vec<Vec<u32>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { exps[i] } else { 0 }).collect())
            .collect();
        gens.push(extra[..n].to_vec());
        let polys: Vec<Polynomial> = gens
            .iter()
            .map(|e| Polynomial::from_terms(n, [(Monomial::from_exponents(e), rat(1, 1))]))
            .collect();
        let expected = staircase_count(n, &exps, &polys);
        match local_colength(&Ideal::new(n, polys), 4096).unwrap() {
            LocalColength::Finite(lp) => prop_assert_eq!(lp.colength(), expected),
            other => prop_assert!(false, "not finite: {:?}", other),
        }
    }

    /// `z_i^{a_i} + z_i·(later variables)` has colength `Π a_i` at the origin.
    #[test]
    fn triangular_colength_is_the_product(exps in exponents(), c in -3i64..=3) {
        let n = exps.len();
        let gens: Vec<Polynomial> = (0..n)
            .map(|i| {
                let mut terms = vec![(Monomial::var_pow(i, exps[i]), rat(1, 1))];
                if i + 1 < n && c != 0 {
                    let mut m = Monomial::var(i);
                    m.set_exponent(i + 1, 1);
                    terms.push((m, rat(c, 1)));
                }
                Polynomial::from_terms(n, terms)
            })
            .collect();
        let product: u64 = exps.iter().map(|&a| a as u64).product();
        match local_colength(&Ideal::new(n, gens), 4096).unwrap() {
            LocalColength::Finite(lp) => prop_assert_eq!(lp.colength(), product),
            other => prop_assert!(false, "not finite: {:?}", other),
        }
    }

    #[test]
    fn epsilon_rules_never_increase(num in 1i64..50, den in 1i64..50, other in 1i64..50, sigma in 1u32..6) {
        let eps = rat(num, den * 4);
        prop_assume!(epsilon::is_valid(&eps));
        prop_assert!(epsilon::differential(&eps) < eps);
        prop_assert!(epsilon::root(&eps, sigma) <= eps);
        let step = epsilon::chain_step(&eps, &rat(other, 60), sigma);
        prop_assert!(step <= eps && step > rat(0, 1));
        prop_assert!(epsilon::quarter() == rat(1, 4));
        prop_assert_eq!(epsilon::parse(&epsilon::show(&eps)), Some(eps));
    }
}
