#![allow(dead_code)]

use proptest::prelude::*;

use coupling_dirac::symexpr::{Coordinate, Patch, ScalarExpr};
use coupling_dirac::tensorcalc::{Graded, Kind};

/// `(x, y, t)` with `t` an angle.
pub fn mixed_patch() -> Patch {
    Patch::new(vec![
        Coordinate::base("x"),
        Coordinate::fiber("y"),
        Coordinate::fiber_angle("t"),
    ])
    .unwrap()
}

pub fn polynomial_patch(dim: usize) -> Patch {
    Patch::new((0..dim).map(|i| Coordinate::base(format!("x{i}"))).collect()).unwrap()
}

fn term(poly_vars: usize, angles: Vec<usize>, max_exp: u32) -> impl Strategy<Value = ScalarExpr> {
    let trig = if angles.is_empty() {
        Just(None).boxed()
    } else {
        prop::option::of((prop::sample::select(angles), any::<bool>(), 1u32..=2)).boxed()
    };
    (
        (-4i64..=4).prop_filter("nonzero", |c| *c != 0),
        prop::collection::vec(0..=max_exp, poly_vars),
        trig,
    )
        .prop_map(|(c, exps, trig)| {
            let mut t = ScalarExpr::int(c);
            for (v, e) in exps.into_iter().enumerate() {
                t = t.mul_ref(&ScalarExpr::var(v).pow(e));
            }
            if let Some((a, sin, k)) = trig {
                let w = if sin { ScalarExpr::sin(a, k) } else { ScalarExpr::cos(a, k) };
                t = t.mul_ref(&w);
            }
            t
        })
}

/// Sums of up to `max_terms` terms; variables `0..poly_vars` appear
/// polynomially, the `angles` inside trig factors.
pub fn expr(
    poly_vars: usize,
    angles: Vec<usize>,
    max_exp: u32,
    max_terms: usize,
) -> impl Strategy<Value = ScalarExpr> {
    prop::collection::vec(term(poly_vars, angles, max_exp), 0..=max_terms)
        .prop_map(|ts| ts.iter().fold(ScalarExpr::zero(), |acc, t| acc.add_ref(t)))
}

/// Expression on [`mixed_patch`].
pub fn mixed_expr() -> impl Strategy<Value = ScalarExpr> {
    expr(2, vec![2], 2, 3)
}

pub fn poly(dim: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = ScalarExpr> {
    expr(dim, vec![], max_exp, max_terms)
}

/// Random graded table of the given degree on a polynomial patch.
pub fn graded<K: Kind>(
    dim: usize,
    degree: usize,
    max_exp: u32,
    max_entries: usize,
) -> impl Strategy<Value = Graded<K>> {
    prop::collection::vec(
        (prop::collection::vec(0..dim, degree), poly(dim, max_exp, 2)),
        0..=max_entries,
    )
    .prop_map(move |entries| Graded::from_entries(dim, degree, entries))
}

pub fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.5f64..1.5, dim)
}

pub fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}
