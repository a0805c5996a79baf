use crate::fibered::{curvature_basis, d_gamma};
use crate::symexpr::Coefficient;
use crate::tensorcalc::{differential, schouten, sharp, Graded, Kind};

use super::report::{CheckReport, ConditionReport, Witness};
use super::GeometricData;

pub(crate) fn witnesses_of<K: Kind, C: Coefficient>(
    prefix: &[String],
    table: &Graded<K, C>,
    label: impl Fn(usize) -> String,
    names: &[String],
) -> Vec<Witness> {
    table
        .entries()
        .map(|(idx, c)| Witness {
            indices: prefix.iter().cloned().chain(idx.iter().map(|&i| label(i))).collect(),
            expression: c.render(names),
        })
        .collect()
}

/// The four conditions, each checked on coordinate fields.
pub fn check_integrability<C: Coefficient>(data: &GeometricData<C>) -> CheckReport {
    let fp = data.patch();
    let names = fp.names();
    let coord = |i: usize| names[i].clone();
    let base = |a: usize| names[fp.base_index(a)].clone();
    let v = data.bivector();
    let conn = data.connection();

    let jacobi = witnesses_of(&[], &schouten(v, v), coord, &names);

    let mut transport = Vec::new();
    for a in 0..fp.n_base() {
        let lie = schouten(&conn.lift_basis(fp, a), v);
        transport.extend(witnesses_of(&[base(a)], &lie, coord, &names));
    }

    let mut curvature = Vec::new();
    for a in 0..fp.n_base() {
        for b in a + 1..fp.n_base() {
            let lhs = curvature_basis(fp, conn, a, b);
            let rhs = sharp(v, &differential(fp.dim(), &data.two_form().get(&[a, b])));
            curvature.extend(witnesses_of(&[base(a), base(b)], &lhs.minus(&rhs), coord, &names));
        }
    }

    let closed = d_gamma(fp, conn, data.two_form());
    let closedness = witnesses_of(&[], closed.table(), base, &names);

    CheckReport::new(vec![
        ConditionReport::from_witnesses("jacobi", jacobi),
        ConditionReport::from_witnesses("poisson_connection", transport),
        ConditionReport::from_witnesses("curvature_identity", curvature),
        ConditionReport::from_witnesses("horizontally_closed", closedness),
    ])
}
