use proptest::prelude::*;
use qkdv::exact::{Matrix, MultiPoly, SolveError, Vars};
use qkdv::lab::{evaluate_on, fit_shifted_symmetric, FitOutcome};
use qkdv::partitions::{partitions_up_to, Partition};
use qkdv::shifted::{monomial_basis_c0, QExpr};
use qkdv::{rat, RatMatrix, RatPoly, Rational};

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(a, b)| rat(a, b))
}

fn poly(vars: Vars) -> impl Strategy<Value = RatPoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, 3), small_rat()), 0..5).prop_map(move |terms| {
        let mut p = MultiPoly::zero(&vars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    })
}

fn three_polys() -> impl Strategy<Value = (RatPoly, RatPoly, RatPoly)> {
    let v = Vars::new(["x", "y", "z"]);
    (poly(v.clone()), poly(v.clone()), poly(v))
}

fn homogeneous_qexpr() -> impl Strategy<Value = (u32, QExpr)> {
    (2u32..=8).prop_flat_map(|w| {
        let basis = monomial_basis_c0(w);
        prop::collection::vec(small_rat(), basis.len()).prop_map(move |cs| {
            let mut e = QExpr::zero();
            for (m, c) in basis.iter().zip(cs) {
                e.add_term(m.clone(), c);
            }
            (w, e)
        })
    })
}

proptest! {
    #[test]
    fn polynomial_ring_axioms((a, b, c) in three_polys()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        let one = MultiPoly::one(a.vars());
        prop_assert_eq!(&a * &one, a.clone());
        let pt = [rat(1, 2), rat(-2, 3), rat(3, 1)];
        prop_assert_eq!((&a * &b).eval(&pt), a.eval(&pt) * b.eval(&pt));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_solve(n in 1usize..6, extra in 0usize..3, entries in prop::collection::vec(-4i64..=4, 40), x in prop::collection::vec(small_rat(), 6)) {
        let rows = n + extra;
        let a: RatMatrix = Matrix::from_fn(rows, n, |r, c| rat(entries[(r * n + c) % entries.len()] + (r == c) as i64, 1 + (r + c) as i64 % 2));
        let x = &x[..n];
        let b = a.mul_vec(x);
        match a.solve(&b) {
            Ok(y) => {
                prop_assert_eq!(a.rank(), n);
                prop_assert_eq!(&y[..], x);
            }
            Err(SolveError::RankDeficient { rank, .. }) => prop_assert!(rank < n && a.rank() == rank),
            Err(e) => prop_assert!(false, "unexpected {e:?}"),
        }
        if rows > n {
            // perturbing one right-hand side entry off the column space is detected
            let mut bad = b.clone();
            bad[rows - 1] += rat(1, 7);
            if a.rank() == n {
                let aug = Matrix::from_fn(rows, n + 1, |r, c| if c < n { a[(r, c)].clone() } else { bad[r].clone() });
                if aug.rank() > n {
                    let inconsistent = matches!(a.solve(&bad), Err(SolveError::Inconsistent { .. }));
                    prop_assert!(inconsistent);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn qexpr_json_round_trip((_, e) in homogeneous_qexpr()) {
        let s = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<QExpr>(&s).unwrap(), e);
    }

    #[test]
    fn fit_recovers_shifted_symmetric_functions((w, e) in homogeneous_qexpr()) {
        let parts: Vec<Partition> = partitions_up_to(10);
        let values = evaluate_on(&e, &parts);
        match fit_shifted_symmetric(&values, w).unwrap() {
            FitOutcome::Fit(f) => prop_assert_eq!(f, e),
            FitOutcome::Falsified { witness } => prop_assert!(false, "falsified at {witness}"),
        }
    }

    #[test]
    fn conjugation_is_an_involution(n in 0u32..14, i in 0usize..200) {
        let ps = qkdv::partitions::enumerate_partitions(n);
        let p = &ps[i % ps.len()];
        prop_assert_eq!(p.conjugate().conjugate(), p.clone());
        prop_assert_eq!(p.conjugate().size(), n);
    }
}
