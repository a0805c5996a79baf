//! Sources of integrable geometric data: abelian Yang–Mills–Higgs bundles,
//! Cartan connections from a potential, and their torus-averaged
//! (Cartan–Hannay–Berry) variant.

use std::sync::Arc;

use thiserror::Error;

use crate::coupling::{CouplingError, GeometricData};
use crate::fibered::{BaseForm, Connection, FiberedPatch};
use crate::linalg::determinant;
use crate::symexpr::ScalarExpr;
use crate::tensorcalc::{hamiltonian, poisson_bracket, schouten, Multivector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("gauge potential component {component} depends on fiber coordinate `{coordinate}`")]
    PotentialNotBase { component: usize, coordinate: String },
    #[error("momentum `{momentum}` depends on base coordinate `{coordinate}`")]
    MomentumNotFiber { momentum: String, coordinate: String },
    #[error("fiber bivector depends on base coordinate `{0}`")]
    BivectorNotFiber(String),
    #[error("the action generated by `{momentum}` does not preserve the fiber bivector: {witness}")]
    ActionNotPoisson { momentum: String, witness: String },
    #[error("momenta `{0}` and `{1}` do not Poisson-commute")]
    MomentaNotCommuting(String, String),
    #[error("expected {expected} potential components (one per base coordinate), found {found}")]
    PotentialLength { expected: usize, found: usize },
    #[error("expected {expected} momentum values (one per factor), found {found}")]
    MomentumValues { expected: usize, found: usize },
    #[error("`{0}` is not an angle coordinate of the fiber")]
    NotFiberAngle(String),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
}

/// One abelian factor (ℝ or S¹): a gauge potential `A_a(x)` and the
/// momentum `J(y)` whose Hamiltonian field generates the fiber action.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugeFactor {
    pub potential: Vec<ScalarExpr>,
    pub momentum: ScalarExpr,
}

/// Trivial associated bundle `B × F` of an abelian Hamiltonian fiber action.
#[derive(Clone, Debug, PartialEq)]
pub struct AbelianYMHSetup {
    patch: Arc<FiberedPatch>,
    fiber_bivector: Multivector,
    factors: Vec<GaugeFactor>,
}

fn first_var_outside(e: &ScalarExpr, allowed: &[usize]) -> Option<usize> {
    e.vars().into_iter().find(|v| !allowed.contains(v))
}

impl AbelianYMHSetup {
    pub fn new(
        patch: Arc<FiberedPatch>,
        fiber_bivector: Multivector,
        factors: Vec<GaugeFactor>,
    ) -> Result<Self, ConstructionError> {
        let names = patch.names();
        // validates degree, dimension and verticality
        GeometricData::new(
            patch.clone(),
            fiber_bivector.clone(),
            Connection::flat(&patch),
            BaseForm::zero(&patch, 2),
        )?;
        for (_, c) in fiber_bivector.entries() {
            if let Some(v) = first_var_outside(c, patch.fiber_indices()) {
                return Err(ConstructionError::BivectorNotFiber(names[v].clone()));
            }
        }
        for f in &factors {
            if f.potential.len() != patch.n_base() {
                return Err(ConstructionError::PotentialLength {
                    expected: patch.n_base(),
                    found: f.potential.len(),
                });
            }
            for (a, c) in f.potential.iter().enumerate() {
                if let Some(v) = first_var_outside(c, patch.base_indices()) {
                    return Err(ConstructionError::PotentialNotBase {
                        component: a,
                        coordinate: names[v].clone(),
                    });
                }
            }
            let momentum = f.momentum.render(&names);
            if let Some(v) = first_var_outside(&f.momentum, patch.fiber_indices()) {
                return Err(ConstructionError::MomentumNotFiber {
                    momentum,
                    coordinate: names[v].clone(),
                });
            }
            let generator = hamiltonian(&fiber_bivector, &f.momentum);
            let drift = schouten(&generator, &fiber_bivector);
            if !drift.is_zero() {
                return Err(ConstructionError::ActionNotPoisson {
                    momentum,
                    witness: drift.render(&names),
                });
            }
        }
        for (i, f) in factors.iter().enumerate() {
            for g in &factors[i + 1..] {
                if !poisson_bracket(&fiber_bivector, &f.momentum, &g.momentum).is_zero() {
                    return Err(ConstructionError::MomentaNotCommuting(
                        f.momentum.render(&names),
                        g.momentum.render(&names),
                    ));
                }
            }
        }
        Ok(Self {
            patch,
            fiber_bivector,
            factors,
        })
    }

    pub fn patch(&self) -> &Arc<FiberedPatch> {
        &self.patch
    }

    pub fn factors(&self) -> &[GaugeFactor] {
        &self.factors
    }

    pub fn fiber_bivector(&self) -> &Multivector {
        &self.fiber_bivector
    }

    /// `𝔽_{ab} = Σ_i J^i (∂_a A^i_b − ∂_b A^i_a)`.
    fn two_form(&self) -> BaseForm {
        let fp = &self.patch;
        let mut form = BaseForm::zero(fp, 2);
        for f in &self.factors {
            for a in 0..fp.n_base() {
                for b in a + 1..fp.n_base() {
                    let da = f.potential[b].diff(fp.base_index(a));
                    let db = f.potential[a].diff(fp.base_index(b));
                    form.add_entry(&[a, b], f.momentum.mul_ref(&da.sub_ref(&db)));
                }
            }
        }
        form
    }
}

/// `V = V_F`, `hor(∂_a) = ∂_a − Σ_i A^i_a X_{J^i}` and `𝔽 = Σ_i J^i dA^i`.
pub fn yang_mills_data(setup: &AbelianYMHSetup) -> Result<GeometricData, ConstructionError> {
    let fp = setup.patch();
    let mut conn: Connection = Connection::flat(fp);
    for f in &setup.factors {
        let generator = hamiltonian(&setup.fiber_bivector, &f.momentum);
        for u in 0..fp.n_fiber() {
            let xu = generator.get(&[fp.fiber_index(u)]);
            if xu.is_zero() {
                continue;
            }
            for a in 0..fp.n_base() {
                let g = conn.get(u, a).add_ref(&f.potential[a].mul_ref(&xu));
                conn.set(u, a, g);
            }
        }
    }
    Ok(GeometricData::new(
        fp.clone(),
        setup.fiber_bivector.clone(),
        conn,
        setup.two_form(),
    )?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FatReport {
    pub fat: bool,
    /// `det[𝔽_{ab}]`; zero when `fat` is false.
    pub determinant: ScalarExpr,
    /// An odd-dimensional base rules out nondegeneracy outright.
    pub parity_obstruction: bool,
}

/// Whether `det[Σ_i J^i dA^i]` is a nonzero ring element.
pub fn fat_check(setup: &AbelianYMHSetup) -> FatReport {
    fat_report(setup, &setup.two_form())
}

/// The same test with each momentum `J^i` replaced by the value `values[i]`.
pub fn fat_check_at(
    setup: &AbelianYMHSetup,
    values: &[ScalarExpr],
) -> Result<FatReport, ConstructionError> {
    if values.len() != setup.factors.len() {
        return Err(ConstructionError::MomentumValues {
            expected: setup.factors.len(),
            found: values.len(),
        });
    }
    let fp = setup.patch();
    let mut form = BaseForm::zero(fp, 2);
    for (f, mu) in setup.factors.iter().zip(values) {
        for a in 0..fp.n_base() {
            for b in a + 1..fp.n_base() {
                let da = f.potential[b].diff(fp.base_index(a));
                let db = f.potential[a].diff(fp.base_index(b));
                form.add_entry(&[a, b], mu.mul_ref(&da.sub_ref(&db)));
            }
        }
    }
    Ok(fat_report(setup, &form))
}

fn fat_report(setup: &AbelianYMHSetup, form: &BaseForm) -> FatReport {
    let n = setup.patch().n_base();
    if n % 2 == 1 {
        return FatReport {
            fat: false,
            determinant: ScalarExpr::zero(),
            parity_obstruction: true,
        };
    }
    let m: Vec<Vec<ScalarExpr>> = (0..n)
        .map(|a| (0..n).map(|b| form.get(&[a, b])).collect())
        .collect();
    let det = determinant(&m);
    FatReport {
        fat: !det.is_zero(),
        determinant: det,
        parity_obstruction: false,
    }
}

/// A vertical bivector and a potential `Φ = Σ_a Φ_a dx^a` with coefficients
/// on the total space.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanSetup {
    pub patch: Arc<FiberedPatch>,
    pub bivector: Multivector,
    pub potential: BaseForm,
}

impl CartanSetup {
    pub fn new(
        patch: Arc<FiberedPatch>,
        bivector: Multivector,
        potential: BaseForm,
    ) -> Result<Self, ConstructionError> {
        GeometricData::new(
            patch.clone(),
            bivector.clone(),
            Connection::flat(&patch),
            BaseForm::zero(&patch, 2),
        )?;
        if potential.degree() != 1 {
            return Err(CouplingError::Degree {
                what: "potential",
                expected: 1,
                found: potential.degree(),
            }
            .into());
        }
        Ok(Self {
            patch,
            bivector,
            potential,
        })
    }
}

fn potential_component(setup: &CartanSetup, a: usize) -> ScalarExpr {
    setup.potential.get(&[a])
}

/// `𝔽_{ab} = ∂_aΦ_b − ∂_bΦ_a − {Φ_a, Φ_b}` on coordinate fields.
fn cartan_two_form(setup: &CartanSetup, phi: &[ScalarExpr]) -> BaseForm {
    let fp = &setup.patch;
    let mut form = BaseForm::zero(fp, 2);
    for a in 0..fp.n_base() {
        for b in a + 1..fp.n_base() {
            let curl = phi[b]
                .diff(fp.base_index(a))
                .sub_ref(&phi[a].diff(fp.base_index(b)));
            let br = poisson_bracket(&setup.bivector, &phi[a], &phi[b]);
            form.add_entry(&[a, b], curl.sub_ref(&br));
        }
    }
    form
}

/// `Γ^u_a = (V♯dΦ_a)^u`, so `hor(∂_a) = ∂_a − X_{Φ_a}`.
fn cartan_connection(setup: &CartanSetup, phi: &[ScalarExpr]) -> Connection {
    let fp = &setup.patch;
    let mut conn: Connection = Connection::flat(fp);
    for (a, p) in phi.iter().enumerate() {
        let x = hamiltonian(&setup.bivector, p);
        for u in 0..fp.n_fiber() {
            conn.set(u, a, x.get(&[fp.fiber_index(u)]));
        }
    }
    conn
}

pub fn cartan_data(setup: &CartanSetup) -> Result<GeometricData, ConstructionError> {
    let fp = &setup.patch;
    let phi: Vec<ScalarExpr> = (0..fp.n_base()).map(|a| potential_component(setup, a)).collect();
    Ok(GeometricData::new(
        fp.clone(),
        setup.bivector.clone(),
        cartan_connection(setup, &phi),
        cartan_two_form(setup, &phi),
    )?)
}

/// Connection from the averaged potential `⟨Φ⟩`; 2-form `⟨𝔽₀⟩`, the average
/// of the Cartan 2-form built from the unaveraged potential.
pub fn chb_data(setup: &CartanSetup, angles: &[usize]) -> Result<GeometricData, ConstructionError> {
    let fp = &setup.patch;
    for &t in angles {
        let c = fp.patch().coord(t);
        if !c.angle || fp.fiber_position(t).is_none() {
            return Err(ConstructionError::NotFiberAngle(c.name.clone()));
        }
    }
    let average = |e: &ScalarExpr| angles.iter().fold(e.clone(), |acc, &t| acc.average_over(t));
    let phi: Vec<ScalarExpr> = (0..fp.n_base()).map(|a| potential_component(setup, a)).collect();
    let averaged: Vec<ScalarExpr> = phi.iter().map(average).collect();
    let raw = cartan_two_form(setup, &phi);
    let mut form = BaseForm::zero(fp, 2);
    for (idx, c) in raw.entries() {
        form.add_entry(idx, average(c));
    }
    Ok(GeometricData::new(
        fp.clone(),
        setup.bivector.clone(),
        cartan_connection(setup, &averaged),
        form,
    )?)
}
