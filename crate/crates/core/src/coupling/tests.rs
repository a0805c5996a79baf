use std::collections::BTreeMap;
use std::sync::Arc;

use super::*;
use crate::fibered::{BaseForm, Connection, FiberedPatch};
use crate::symexpr::{Coordinate, Fraction, Patch, Rational, ScalarExpr};
use crate::tensorcalc::{sharp, CourantSection, DiffForm, Multivector};

type Entries<'a> = &'a [(&'a str, &'a str, &'a str)];

fn fp(base: &[&str], fiber: &[&str]) -> Arc<FiberedPatch> {
    let coords = base
        .iter()
        .map(|n| Coordinate::base(*n))
        .chain(fiber.iter().map(|n| Coordinate::fiber(*n)))
        .collect();
    FiberedPatch::new(Patch::new(coords).unwrap()).unwrap()
}

/// `v`: (fiber, fiber, coeff); `conn`: (fiber, base, coeff); `f`: (base, base, coeff).
fn data(f: &Arc<FiberedPatch>, v: Entries, conn: Entries, two: Entries) -> GeometricData {
    let p = f.patch();
    let idx = |n: &str| p.index_of(n).unwrap();
    let e = |s: &str| p.parse(s).unwrap();
    let mut bivector = Multivector::zero(f.dim(), 2);
    for (a, b, c) in v {
        bivector.add_entry(&[idx(a), idx(b)], e(c));
    }
    let mut connection = Connection::flat(f);
    for (u, a, c) in conn {
        let u = f.fiber_position(idx(u)).unwrap();
        let a = f.base_position(idx(a)).unwrap();
        connection.set(u, a, e(c));
    }
    let mut form = BaseForm::zero(f, 2);
    for (a, b, c) in two {
        let a = f.base_position(idx(a)).unwrap();
        let b = f.base_position(idx(b)).unwrap();
        form.add_entry(&[a, b], e(c));
    }
    GeometricData::new(f.clone(), bivector, connection, form).unwrap()
}

fn closure_failures(d: &GeometricData) -> Vec<String> {
    verify_closure(&build_dirac(d))
        .failing()
        .into_iter()
        .map(String::from)
        .collect()
}

#[test]
fn flat_data_passes_everything() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[], &[]);
    let r = check_integrability(&d);
    assert!(r.passed(), "{r}");
    assert_eq!(r.conditions.len(), 4);
    assert!(verify_closure(&build_dirac(&d)).passed());
}

#[test]
fn non_closed_two_form_fails_closedness_only() {
    let f = fp(&["x1", "x2", "x3"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[], &[("x1", "x2", "x3*q")]);
    let r = check_integrability(&d);
    assert_eq!(r.failing(), vec!["curvature_identity", "horizontally_closed"]);
    let closed = r.condition("horizontally_closed").unwrap();
    assert_eq!(closed.witnesses[0].indices, vec!["x1", "x2", "x3"]);
    assert_eq!(closed.witnesses[0].expression, "q");

    let f2 = fp(&["x1", "x2"], &["q", "p"]);
    let d2 = data(&f2, &[("q", "p", "1")], &[], &[("x1", "x2", "x1*q")]);
    let r2 = check_integrability(&d2);
    assert_eq!(r2.failing(), vec!["curvature_identity"]);
}

#[test]
fn generators_of_flat_data() {
    let f = fp(&["x1"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[], &[]);
    let l = build_dirac(&d);
    assert_eq!(l.generators().len(), 3);
    let g = &l.generators()[0];
    assert_eq!(g.kind, GeneratorKind::Horizontal(0));
    assert_eq!(g.section.vf, Multivector::basis(3, &[0]));
    assert!(g.section.form.is_zero());
    let eq = &l.generators()[1];
    assert_eq!(eq.section.form, DiffForm::basis(3, &[1]));
    assert_eq!(eq.section.vf, sharp(d.bivector(), &DiffForm::basis(3, &[1])));
}

#[test]
fn casimir_direction_gives_pure_form_generator() {
    let f = fp(&["x1"], &["q", "p", "z"]);
    let d = data(&f, &[("q", "p", "1")], &[], &[]);
    let l = build_dirac(&d);
    let ez = &l.generators()[3];
    assert!(ez.section.vf.is_zero());
    assert_eq!(ez.section.form, DiffForm::basis(4, &[3]));
}

#[test]
fn isotropy_examples() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let d = data(
        &f,
        &[("q", "p", "x1*q")],
        &[("q", "x1", "p^2"), ("p", "x2", "x1*q")],
        &[("x1", "x2", "q*p")],
    );
    assert!(verify_isotropy(&build_dirac(&d)).passed());

    let names = vec!["q".to_string(), "p".to_string()];
    let line = Generator::<ScalarExpr> {
        label: "e".into(),
        kind: GeneratorKind::Other,
        section: CourantSection::new(Multivector::basis(2, &[0]), DiffForm::basis(2, &[0])).unwrap(),
    };
    let r = verify_isotropy(&DiracPresentation::new(2, names.clone(), vec![line]));
    let iso = r.condition("isotropy").unwrap();
    assert!(!iso.passed());
    assert_eq!(iso.witnesses[0].expression, "1");

    let empty = verify_isotropy(&DiracPresentation::<ScalarExpr>::new(2, names, vec![]));
    assert!(empty.condition("isotropy").unwrap().passed());
    assert!(!empty.condition("maximal_rank").unwrap().passed());
}

#[test]
fn mutation_breaking_jacobi() {
    let f = fp(&["x1", "x2"], &["q", "p", "z"]);
    let d = data(&f, &[("q", "p", "1"), ("p", "z", "p")], &[], &[]);
    assert_eq!(check_integrability(&d).failing(), vec!["jacobi"]);
    assert_eq!(closure_failures(&d), vec!["jacobi"]);
}

#[test]
fn mutation_breaking_closedness() {
    let f = fp(&["x1", "x2", "x3"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[], &[("x1", "x2", "x3")]);
    assert_eq!(check_integrability(&d).failing(), vec!["horizontally_closed"]);
    assert_eq!(closure_failures(&d), vec!["horizontally_closed"]);
}

#[test]
fn mutation_breaking_curvature() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[("q", "x1", "x2")], &[]);
    assert_eq!(check_integrability(&d).failing(), vec!["curvature_identity"]);
    assert_eq!(closure_failures(&d), vec!["curvature_identity"]);
}

#[test]
fn mutation_breaking_transport() {
    let f = fp(&["x1"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[("q", "x1", "q")], &[]);
    assert_eq!(check_integrability(&d).failing(), vec!["poisson_connection"]);
    assert_eq!(closure_failures(&d), vec!["poisson_connection"]);
}

#[test]
fn extract_poisson_inverts_the_two_form() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[], &[("x1", "x2", "3")]);
    let pi = extract_poisson(&d).unwrap().bivector;
    let mut want = Multivector::<Fraction>::basis(4, &[2, 3]);
    want.add_entry(&[0, 1], Fraction::from(ScalarExpr::ratio(1, 3)));
    assert_eq!(pi, want);
    let flat = data(&f, &[("q", "p", "1")], &[], &[]);
    assert!(matches!(extract_poisson(&flat), Err(CouplingError::Degenerate { .. })));
}

#[test]
fn graph_of_extracted_bivector_is_the_dirac_structure() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[("q", "x1", "x2")], &[("x1", "x2", "p + 2")]);
    let ex = extract_poisson(&d).unwrap();
    assert_eq!(ex.pivot_denominators.len(), 1);
    for g in build_dirac(&d.to_fraction()).generators() {
        assert_eq!(sharp(&ex.bivector, &g.section.form), g.section.vf, "{}", g.label);
    }
}

#[test]
fn decompose_reads_blocks() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let mut pi = Multivector::<ScalarExpr>::basis(4, &[2, 3]);
    pi.add_entry(&[0, 1], ScalarExpr::one());
    let dec = decompose_coupling(&pi, &f).unwrap();
    let d = dec.data.to_ring().unwrap();
    assert_eq!(d.bivector(), &Multivector::basis(4, &[2, 3]));
    assert!(d.connection().is_flat());
    assert_eq!(d.two_form().get(&[0, 1]), ScalarExpr::one());
    let pi_again = extract_poisson(&dec.data).unwrap().bivector;
    assert_eq!(pi_again, pi.to_fraction());

    let vertical = Multivector::<ScalarExpr>::basis(4, &[2, 3]);
    assert!(matches!(
        decompose_coupling(&vertical, &f),
        Err(CouplingError::NotTransverse { .. })
    ));
}

#[test]
fn decompose_inverts_extract() {
    let f = fp(&["x1", "x2"], &["q", "p"]);
    let d = data(
        &f,
        &[("q", "p", "1")],
        &[("q", "x1", "x2*p"), ("p", "x2", "q")],
        &[("x1", "x2", "x1 - p")],
    );
    let pi = extract_poisson(&d).unwrap().bivector;
    let back = decompose_coupling(&pi, &f).unwrap().data;
    assert_eq!(back, d.to_fraction());
    assert_eq!(back.to_ring().unwrap(), d);
}

#[test]
fn equivalence_transform() {
    let f = fp(&["x1", "x2"], &["q", "p", "z"]);
    let d = data(&f, &[("q", "p", "1")], &[("z", "x1", "x1")], &[("x1", "x2", "z")]);
    assert!(check_integrability(&d).passed());
    let zero = BaseForm::zero(&f, 1);
    assert_eq!(equivalent_data(&d, &zero).unwrap(), d);
    let mut phi = BaseForm::zero(&f, 1);
    phi.add_entry(&[1], f.patch().parse("z").unwrap());
    let shifted = equivalent_data(&d, &phi).unwrap();
    // (∂_Γ z dx²)(∂₁, ∂₂) = hor(∂₁) z = −x1
    assert_eq!(shifted.two_form().get(&[0, 1]), f.patch().parse("z - x1").unwrap());
    assert_eq!(check_integrability(&shifted).verdict, check_integrability(&d).verdict);
    let mut bad = BaseForm::zero(&f, 1);
    bad.add_entry(&[0], f.patch().parse("q").unwrap());
    match equivalent_data(&d, &bad) {
        Err(CouplingError::NonCasimir { function, .. }) => assert_eq!(function, "q"),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn casimir_complex() {
    let f = fp(&["x1", "x2"], &["q", "p", "z"]);
    let d = data(&f, &[("q", "p", "1")], &[("z", "x1", "x1")], &[("x1", "x2", "z")]);
    assert!(check_integrability(&d).passed());
    let e = |s: &str| f.patch().parse(s).unwrap();
    let r = check_casimir_complex(&d, &[ScalarExpr::int(3), e("z"), e("z^2*x1")]).unwrap();
    assert!(r.passed(), "{r}");
    assert!(matches!(
        check_casimir_complex(&d, &[e("q")]),
        Err(CouplingError::NonCasimir { .. })
    ));
}

#[test]
fn characteristic_kernel_examples() {
    let f = fp(&["x1", "x2", "x3"], &["q", "p"]);
    let zero = data(&f, &[("q", "p", "1")], &[("q", "x3", "p")], &[]);
    assert_eq!(characteristic_kernel(&zero).len(), 3);
    let d = data(&f, &[("q", "p", "1")], &[("q", "x3", "p")], &[("x1", "x2", "1")]);
    let k = characteristic_kernel(&d);
    assert_eq!(k.len(), 1);
    assert_eq!(k[0], d.connection().lift_basis(&f, 2).to_fraction());
    let f2 = fp(&["x1", "x2"], &["q", "p"]);
    let nondeg = data(&f2, &[("q", "p", "1")], &[], &[("x1", "x2", "1")]);
    assert!(characteristic_kernel(&nondeg).is_empty());
}

#[test]
fn fiber_restriction() {
    let f = fp(&["x1"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "x1")], &[], &[]);
    let at = |v: i64| {
        let mut m = BTreeMap::new();
        m.insert("x1".to_string(), Rational::from_integer(v.into()));
        restrict_to_fiber(&d, &m).unwrap()
    };
    assert_eq!(at(2).bivector, Multivector::basis(2, &[0, 1]).scaled(&Rational::from_integer(2.into())));
    assert!(at(0).bivector.is_zero());
    assert!(at(2).jacobi_report().passed());
    assert!(matches!(
        restrict_to_fiber(&d, &BTreeMap::new()),
        Err(CouplingError::MissingBaseValue(_))
    ));
}

#[test]
fn data_rejects_base_components_in_bivector() {
    let f = fp(&["x1"], &["q", "p"]);
    let v = Multivector::<ScalarExpr>::basis(3, &[0, 1]);
    let err = GeometricData::new(f.clone(), v, Connection::flat(&f), BaseForm::zero(&f, 2));
    assert_eq!(err, Err(CouplingError::NonVertical("x1^q".into())));
}

#[test]
fn report_json_key_order() {
    let f = fp(&["x1"], &["q", "p"]);
    let d = data(&f, &[("q", "p", "1")], &[("q", "x1", "q")], &[]);
    let json = check_integrability(&d).to_json();
    let v = json.find("\"verdict\"").unwrap();
    let c = json.find("\"conditions\"").unwrap();
    let p = json.find("\"pivot_denominators\"").unwrap();
    assert!(v < c && c < p);
    assert!(json.contains("\"status\": \"fail\""));
}
