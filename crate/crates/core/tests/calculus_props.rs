mod common;

use common::*;
use proptest::prelude::*;

use coupling_dirac::symexpr::{Coefficient, ScalarExpr};
use coupling_dirac::tensorcalc::{
    apply, courant_bracket, differential, exterior_derivative, interior, lie_bracket,
    lie_derivative, pairing_plus, poisson_bracket, schouten, CourantSection, DiffForm, Forms,
    Multivector, Vectors,
};

const DIM: usize = 4;

fn vf() -> impl Strategy<Value = Multivector> {
    graded::<Vectors>(DIM, 1, 2, 4)
}

fn mv(degree: usize) -> impl Strategy<Value = Multivector> {
    graded::<Vectors>(DIM, degree, 1, 3)
}

fn form(degree: usize) -> impl Strategy<Value = DiffForm> {
    graded::<Forms>(DIM, degree, 2, 4)
}

fn sign_pow(n: usize) -> i64 {
    if n.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Coordinate formula `(ℒ_X ω)_I = X^j ∂_j ω_I + Σ_k ω_{i₁…j…i_p} ∂_{i_k} X^j`.
fn lie_derivative_by_components(x: &Multivector, w: &DiffForm) -> DiffForm {
    let p = w.degree();
    let mut out = DiffForm::zero(DIM, p);
    for idx in subsets(DIM, p) {
        let mut c = apply(x, &w.get(&idx));
        for k in 0..p {
            for j in 0..DIM {
                let mut swapped = idx.clone();
                swapped[k] = j;
                c = c.add_ref(&w.get(&swapped).mul_ref(&x.get(&[j]).diff(idx[k])));
            }
        }
        out.add_entry(&idx, c);
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..n)
        .flat_map(|first| {
            subsets(n, k - 1)
                .into_iter()
                .filter(move |rest| rest.first().is_none_or(|&r| r > first))
                .map(move |mut rest| {
                    rest.insert(0, first);
                    rest
                })
        })
        .collect()
}

proptest! {
    #[test]
    fn d_squared_vanishes(f in poly(DIM, 3, 4), w1 in form(1), w2 in form(2)) {
        prop_assert!(exterior_derivative(&differential(DIM, &f)).is_zero());
        prop_assert!(exterior_derivative(&exterior_derivative(&w1)).is_zero());
        prop_assert!(exterior_derivative(&exterior_derivative(&w2)).is_zero());
    }

    #[test]
    fn d_is_a_graded_derivation(a in form(1), b in form(1)) {
        let lhs = exterior_derivative(&a.wedge(&b));
        let rhs = exterior_derivative(&a).wedge(&b).minus(&a.wedge(&exterior_derivative(&b)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn schouten_graded_antisymmetry(
        p in 1usize..=3, q in 1usize..=3, seed_a in mv(1), seed_b in mv(1),
        a2 in mv(2), b2 in mv(2), a3 in mv(3), b3 in mv(3),
    ) {
        let pick = |d: usize, one: &Multivector, two: &Multivector, three: &Multivector| match d {
            1 => one.clone(),
            2 => two.clone(),
            _ => three.clone(),
        };
        let a = pick(p, &seed_a, &a2, &a3);
        let b = pick(q, &seed_b, &b2, &b3);
        let lhs = schouten(&a, &b);
        let rhs = schouten(&b, &a).times(&ScalarExpr::int(-sign_pow((p - 1) * (q - 1))));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn schouten_extends_lie_bracket(x in vf(), y in vf(), f in poly(DIM, 2, 3)) {
        prop_assert_eq!(schouten(&x, &y), lie_bracket(&x, &y));
        let scalar = Multivector::scalar(DIM, f.clone());
        prop_assert_eq!(schouten(&x, &scalar).as_scalar(), apply(&x, &f));
    }

    #[test]
    fn cartan_formula_matches_components(x in vf(), w1 in form(1), w2 in form(2)) {
        prop_assert_eq!(lie_derivative(&x, &w1), lie_derivative_by_components(&x, &w1));
        prop_assert_eq!(lie_derivative(&x, &w2), lie_derivative_by_components(&x, &w2));
    }

    #[test]
    fn interior_commutator(x in vf(), y in vf(), w in form(2)) {
        // i_{[X,Y]} = [ℒ_X, i_Y]
        let lhs = interior(&lie_bracket(&x, &y), &w);
        let rhs = lie_derivative(&x, &interior(&y, &w)).minus(&interior(&y, &lie_derivative(&x, &w)));
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn schouten_graded_jacobi(a in mv(1), b in mv(2), c in mv(2)) {
        // [P,[Q,R]] = [[P,Q],R] + (−1)^{(p−1)(q−1)} [Q,[P,R]]
        for (p, q, r) in [(&a, &b, &c), (&b, &c, &a), (&b, &b, &c)] {
            let (dp, dq) = (p.degree(), q.degree());
            let lhs = schouten(p, &schouten(q, r));
            let rhs = schouten(&schouten(p, q), r)
                .plus(&schouten(q, &schouten(p, r)).times(&ScalarExpr::int(sign_pow((dp - 1) * (dq - 1)))));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn jacobiator_matches_schouten_square(v in graded::<Vectors>(DIM, 2, 1, 4)) {
        let vv = schouten(&v, &v);
        let x = |i: usize| ScalarExpr::var(i);
        for idx in subsets(DIM, 3) {
            let (i, j, k) = (idx[0], idx[1], idx[2]);
            let br = |f: &ScalarExpr, g: &ScalarExpr| poisson_bracket(&v, f, g);
            let jac = br(&x(i), &br(&x(j), &x(k)))
                .add_ref(&br(&x(j), &br(&x(k), &x(i))))
                .add_ref(&br(&x(k), &br(&x(i), &x(j))));
            prop_assert_eq!(vv.get(&idx), jac.mul_ref(&ScalarExpr::int(2)));
        }
    }

    #[test]
    fn courant_axioms(
        x1 in vf(), x2 in vf(), x3 in vf(),
        f1 in form(1), f2 in form(1), f3 in form(1),
    ) {
        let e1 = CourantSection::new(x1.clone(), f1).unwrap();
        let e2 = CourantSection::new(x2, f2).unwrap();
        let e3 = CourantSection::new(x3, f3).unwrap();
        // ρ(e₁)⟨e₂,e₃⟩ = ⟨[e₁,e₂],e₃⟩ + ⟨e₂,[e₁,e₃]⟩
        let lhs = apply(&x1, &pairing_plus(&e2, &e3));
        let rhs = pairing_plus(&courant_bracket(&e1, &e2), &e3)
            .add_ref(&pairing_plus(&e2, &courant_bracket(&e1, &e3)));
        prop_assert_eq!(lhs, rhs);
        // [e₁,[e₂,e₃]] = [[e₁,e₂],e₃] + [e₂,[e₁,e₃]]
        let l = courant_bracket(&e1, &courant_bracket(&e2, &e3));
        let r12 = courant_bracket(&courant_bracket(&e1, &e2), &e3);
        let r2 = courant_bracket(&e2, &courant_bracket(&e1, &e3));
        prop_assert_eq!(l.vf, r12.vf.plus(&r2.vf));
        prop_assert_eq!(l.form, r12.form.plus(&r2.form));
    }

    #[test]
    fn closed_graphs_are_isotropic_and_involutive(x in vf(), y in vf(), a in form(1)) {
        let b = exterior_derivative(&a);
        let graph = |v: &Multivector| CourantSection::new(v.clone(), interior(v, &b)).unwrap();
        let (ex, ey) = (graph(&x), graph(&y));
        prop_assert!(pairing_plus(&ex, &ey).is_zero());
        prop_assert_eq!(courant_bracket(&ex, &ey), graph(&lie_bracket(&x, &y)));
    }
}

#[test]
fn subsets_enumerate_increasing_tuples() {
    assert_eq!(subsets(4, 3).len(), 4);
    assert_eq!(subsets(4, 2).len(), 6);
    assert!(subsets(4, 2).iter().all(|s| s[0] < s[1]));
}

#[test]
fn coefficient_trait_is_used_consistently() {
    let one = <ScalarExpr as Coefficient>::from_int(1);
    assert_eq!(one, ScalarExpr::one());
}
