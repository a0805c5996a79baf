use super::*;
use crate::symexpr::Coordinate;
use crate::tensorcalc::{contract, evaluate};

fn fp(base: &[&str], fiber: &[&str]) -> Arc<FiberedPatch> {
    let coords = base
        .iter()
        .map(|n| Coordinate::base(*n))
        .chain(fiber.iter().map(|n| Coordinate::fiber(*n)))
        .collect();
    FiberedPatch::new(Patch::new(coords).unwrap()).unwrap()
}

fn e(f: &FiberedPatch, s: &str) -> ScalarExpr {
    f.patch().parse(s).unwrap()
}

fn field(f: &FiberedPatch, comps: &[(&str, &str)]) -> Multivector {
    let mut out = Multivector::zero(f.dim(), 1);
    for (n, c) in comps {
        out.add_entry(&[f.patch().index_of(n).unwrap()], e(f, c));
    }
    out
}

/// Γ^q_1 given as text on (x1, ...; q, p).
fn conn_q1(f: &FiberedPatch, text: &str) -> Connection {
    let mut c = Connection::flat(f);
    c.set(0, 0, e(f, text));
    c
}

#[test]
fn patch_needs_both_roles() {
    let p = Patch::new(vec![Coordinate::base("x")]).unwrap();
    assert_eq!(FiberedPatch::new(p), Err(FiberedError::MissingRole));
}

#[test]
fn flat_lift_is_the_coordinate_field() {
    let f = fp(&["x1"], &["q", "p"]);
    let conn = Connection::flat(&f);
    let h = horizontal_lift(&f, &conn, &field(&f, &[("x1", "1")])).unwrap();
    assert_eq!(h, field(&f, &[("x1", "1")]));
}

#[test]
fn lift_subtracts_the_connection() {
    let f = fp(&["x1"], &["q", "p"]);
    let conn = conn_q1(&f, "p");
    let h = horizontal_lift(&f, &conn, &field(&f, &[("x1", "1")])).unwrap();
    assert_eq!(h, field(&f, &[("x1", "1"), ("q", "-p")]));
    let scaled = horizontal_lift(&f, &conn, &field(&f, &[("x1", "x1")])).unwrap();
    assert_eq!(scaled, h.times(&e(&f, "x1")));
    assert_eq!(f.push_forward(&h), field(&f, &[("x1", "1")]));
}

#[test]
fn lift_rejects_fiber_components() {
    let f = fp(&["x1"], &["q", "p"]);
    let err = horizontal_lift(&f, &Connection::flat(&f), &field(&f, &[("q", "1")]));
    assert_eq!(err, Err(FiberedError::FiberComponent("q".into())));
}

#[test]
fn projection_kernel_and_fixed_points() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let conn = conn_q1(&f, "x2*p");
    let h = horizontal_lift(&f, &conn, &field(&f, &[("x1", "1"), ("x2", "q")])).unwrap();
    assert!(vertical_projection(&f, &conn, &h).is_zero());
    let v = field(&f, &[("p", "x1")]);
    assert_eq!(vertical_projection(&f, &conn, &v), v);
    let flat = Connection::flat(&f);
    assert_eq!(
        vertical_projection(&f, &flat, &field(&f, &[("x1", "1"), ("q", "1")])),
        field(&f, &[("q", "1")])
    );
}

#[test]
fn curvature_examples() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let d1 = field(&f, &[("x1", "1")]);
    let d2 = field(&f, &[("x2", "1")]);
    assert!(curvature(&f, &Connection::flat(&f), &d1, &d2).unwrap().is_zero());
    let conn = conn_q1(&f, "x2");
    let c = curvature(&f, &conn, &d1, &d2).unwrap();
    assert_eq!(c, field(&f, &[("q", "-1")]));
    assert_eq!(c, curvature_basis(&f, &conn, 0, 1));
    assert!(curvature(&f, &conn, &d1, &d1).unwrap().is_zero());
}

#[test]
fn d_gamma_examples() {
    let f = fp(&["x1"], &["q", "p"]);
    let flat = Connection::flat(&f);
    let mut g = BaseForm::zero(&f, 0);
    g.add_entry(&[], e(&f, "x1*p"));
    let dg = d_gamma(&f, &flat, &g);
    assert_eq!(dg.get(&[0]), e(&f, "p"));
    assert_eq!(dg.entries().count(), 1);

    let mut k = BaseForm::zero(&f, 0);
    k.add_entry(&[], ScalarExpr::int(7));
    assert!(d_gamma(&f, &conn_q1(&f, "p"), &k).is_zero());

    let mut q = BaseForm::zero(&f, 0);
    q.add_entry(&[], e(&f, "q"));
    let dq = d_gamma(&f, &conn_q1(&f, "p"), &q);
    assert_eq!(dq.get(&[0]), e(&f, "-p"));
}

#[test]
fn d_gamma_on_two_forms_needs_three_base_directions() {
    let f = fp(&["x1", "x2", "x3"], &["q", "p"]);
    let mut form = BaseForm::zero(&f, 2);
    form.add_entry(&[0, 1], e(&f, "x3*q"));
    let d = d_gamma(&f, &Connection::flat(&f), &form);
    assert_eq!(d.get(&[0, 1, 2]), e(&f, "q"));
}

#[test]
fn promote_round_trips_through_lifts() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let mut conn = conn_q1(&f, "x2*p + q");
    conn.set(1, 1, e(&f, "x1^2"));
    let mut form = BaseForm::zero(&f, 2);
    form.add_entry(&[0, 1], e(&f, "q*p - x1"));
    let fbar = promote(&f, &form);
    let h = conn.lift_basis(&f, 0).wedge(&conn.lift_basis(&f, 1));
    assert_eq!(contract(&h, &fbar).unwrap().as_scalar(), form.get(&[0, 1]));
    for u in 0..f.n_fiber() {
        let v = f.fiber_field(u);
        assert!(crate::tensorcalc::interior(&v, &fbar).is_zero());
    }
    assert!(promote(&f, &BaseForm::<ScalarExpr>::zero(&f, 2)).is_zero());
}

#[test]
fn annihilator_basis() {
    let f = fp(&["x1"], &["q", "p"]);
    let flat = ann_hor_basis::<ScalarExpr>(&f, &Connection::flat(&f));
    assert_eq!(flat.len(), 2);
    assert_eq!(flat[0], DiffForm::basis(3, &[1]));
    let conn = conn_q1(&f, "p");
    let eta = ann_hor_basis(&f, &conn);
    let mut want = DiffForm::basis(3, &[1]);
    want.add_entry(&[0], e(&f, "p"));
    assert_eq!(eta[0], want);
    assert!(evaluate(&eta[0], &conn.lift_basis(&f, 0)).is_zero());
}
