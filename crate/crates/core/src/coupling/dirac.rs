use rayon::prelude::*;

use crate::fibered::{ann_hor_basis, promote};
use crate::linalg;
use crate::symexpr::{Coefficient, Fraction};
use crate::tensorcalc::{courant_bracket, interior, pairing_plus, sharp, CourantSection};

use super::report::{CheckReport, ConditionReport, Witness};
use super::GeometricData;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Built from the horizontal lift of the `a`-th base field.
    Horizontal(usize),
    /// Built from the `u`-th horizontal annihilator `η^u`.
    Vertical(usize),
    /// Supplied directly, with no generating structure.
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator<C: Coefficient> {
    pub label: String,
    pub kind: GeneratorKind,
    pub section: CourantSection<C>,
}

/// A frame of sections spanning a candidate Dirac structure.
#[derive(Clone, Debug, PartialEq)]
pub struct DiracPresentation<C: Coefficient> {
    dim: usize,
    names: Vec<String>,
    generators: Vec<Generator<C>>,
}

impl<C: Coefficient> DiracPresentation<C> {
    pub fn new(dim: usize, names: Vec<String>, generators: Vec<Generator<C>>) -> Self {
        Self {
            dim,
            names,
            generators,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generators(&self) -> &[Generator<C>] {
        &self.generators
    }
}

/// Horizontal generators `(hor ∂_a, −i_{hor ∂_a} F̄)` and vertical generators
/// `(V♯η^u, η^u)`. The minus sign on the horizontal form part is what makes
/// Courant closure match the curvature identity `Curv = V♯d𝔽` exactly.
pub fn build_dirac<C: Coefficient>(data: &GeometricData<C>) -> DiracPresentation<C> {
    let fp = data.patch();
    let names = fp.names();
    let conn = data.connection();
    let fbar = promote(fp, data.two_form());
    let mut generators = Vec::with_capacity(fp.dim());
    for a in 0..fp.n_base() {
        let h = conn.lift_basis(fp, a);
        let form = interior(&h, &fbar).negated();
        generators.push(Generator {
            label: format!("e_{}", names[fp.base_index(a)]),
            kind: GeneratorKind::Horizontal(a),
            section: CourantSection { vf: h, form },
        });
    }
    for (u, eta) in ann_hor_basis(fp, conn).into_iter().enumerate() {
        generators.push(Generator {
            label: format!("e_{}", names[fp.fiber_index(u)]),
            kind: GeneratorKind::Vertical(u),
            section: CourantSection {
                vf: sharp(data.bivector(), &eta),
                form: eta,
            },
        });
    }
    DiracPresentation::new(fp.dim(), names, generators)
}

/// Pairwise isotropy plus the rank count `rank = dim E`.
pub fn verify_isotropy<C: Coefficient>(l: &DiracPresentation<C>) -> CheckReport {
    let gens = &l.generators;
    let mut isotropy = Vec::new();
    for i in 0..gens.len() {
        for j in i..gens.len() {
            let p = pairing_plus(&gens[i].section, &gens[j].section);
            if !p.is_zero() {
                isotropy.push(Witness {
                    indices: vec![gens[i].label.clone(), gens[j].label.clone()],
                    expression: p.render(&l.names),
                });
            }
        }
    }
    let rows: Vec<Vec<Fraction>> = gens
        .iter()
        .map(|g| {
            let vf = (0..l.dim).map(|i| g.section.vf.get(&[i]).to_fraction());
            let form = (0..l.dim).map(|i| g.section.form.get(&[i]).to_fraction());
            vf.chain(form).collect()
        })
        .collect();
    let rank = if rows.is_empty() { 0 } else { linalg::rank(&rows) };
    let maximal = if rank == l.dim {
        Vec::new()
    } else {
        vec![Witness {
            indices: vec!["rank".into()],
            expression: format!("{rank} < {}", l.dim),
        }]
    };
    CheckReport::new(vec![
        ConditionReport::from_witnesses("isotropy", isotropy),
        ConditionReport::from_witnesses("maximal_rank", maximal),
    ])
}

/// Which integrability condition a triple `⟨[e_i, e_j], e_k⟩₊` encodes. The
/// Courant tensor is totally skew on an isotropic frame, so only the number
/// of horizontal generators in the triple matters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RelationClass {
    Curvature,
    Closedness,
    Jacobi,
    PoissonConnection,
    Unclassified,
}

impl RelationClass {
    /// In the order the integrability report lists them.
    pub const ALL: [RelationClass; 4] = [
        RelationClass::Jacobi,
        RelationClass::PoissonConnection,
        RelationClass::Curvature,
        RelationClass::Closedness,
    ];

    /// Named after the integrability condition it encodes.
    pub fn name(self) -> &'static str {
        match self {
            RelationClass::Curvature => "curvature_identity",
            RelationClass::Closedness => "horizontally_closed",
            RelationClass::Jacobi => "jacobi",
            RelationClass::PoissonConnection => "poisson_connection",
            RelationClass::Unclassified => "unclassified",
        }
    }
}

pub fn closure_class(kinds: [GeneratorKind; 3]) -> RelationClass {
    if kinds.contains(&GeneratorKind::Other) {
        return RelationClass::Unclassified;
    }
    let horizontal = kinds
        .iter()
        .filter(|k| matches!(k, GeneratorKind::Horizontal(_)))
        .count();
    match horizontal {
        3 => RelationClass::Closedness,
        2 => RelationClass::Curvature,
        1 => RelationClass::PoissonConnection,
        _ => RelationClass::Jacobi,
    }
}

/// Brackets every ordered generator pair and pairs the result with every
/// generator; failures are grouped by relation class.
pub fn verify_closure<C: Coefficient>(l: &DiracPresentation<C>) -> CheckReport {
    let gens = &l.generators;
    let n = gens.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let found: Vec<(RelationClass, (usize, usize, usize), String)> = pairs
        .par_iter()
        .flat_map_iter(|&(i, j)| {
            let br = courant_bracket(&gens[i].section, &gens[j].section);
            (0..n)
                .filter_map(|k| {
                    let p = pairing_plus(&br, &gens[k].section);
                    if p.is_zero() {
                        return None;
                    }
                    let class = closure_class([gens[i].kind, gens[j].kind, gens[k].kind]);
                    Some((class, (i, j, k), p.render(&l.names)))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut classes: Vec<RelationClass> = RelationClass::ALL.to_vec();
    if found.iter().any(|f| f.0 == RelationClass::Unclassified) {
        classes.push(RelationClass::Unclassified);
    }
    let conditions = classes
        .into_iter()
        .map(|class| {
            let mut hits: Vec<_> = found.iter().filter(|f| f.0 == class).collect();
            hits.sort_by_key(|f| f.1);
            let witnesses = hits
                .into_iter()
                .map(|(_, (i, j, k), e)| Witness {
                    indices: vec![
                        gens[*i].label.clone(),
                        gens[*j].label.clone(),
                        gens[*k].label.clone(),
                    ],
                    expression: e.clone(),
                })
                .collect();
            ConditionReport::from_witnesses(class.name(), witnesses)
        })
        .collect();
    CheckReport::new(conditions)
}
