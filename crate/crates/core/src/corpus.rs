//! Seeded generators of geometric data for randomized testing: integrable
//! families (Cartan, abelian Yang–Mills–Higgs, Casimir shifts), perturbed and
//! fully random data, the four single-condition mutations, and
//! nondegenerate fixtures.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constructions::{
    cartan_data, yang_mills_data, AbelianYMHSetup, CartanSetup, GaugeFactor,
};
use crate::coupling::{equivalent_data, GeometricData};
use crate::fibered::{BaseForm, Connection, FiberedPatch};
use crate::linalg::determinant;
use crate::symexpr::{Coordinate, Patch, ScalarExpr};
use crate::tensorcalc::Multivector;

/// Coefficient degree bound of the random corpus.
pub const MAX_DEGREE: u32 = 2;

#[derive(Clone, Debug)]
pub struct Sample {
    pub label: String,
    pub data: GeometricData,
}

/// A sample built to fail exactly one integrability condition.
#[derive(Clone, Debug)]
pub struct Mutation {
    pub sample: Sample,
    pub broken: &'static str,
}

const BASE_NAMES: [&str; 3] = ["x1", "x2", "x3"];
const FIBER_NAMES: [&str; 3] = ["q", "p", "z"];

pub fn fibered_patch(n_base: usize, n_fiber: usize) -> Arc<FiberedPatch> {
    let coords = BASE_NAMES[..n_base]
        .iter()
        .map(|n| Coordinate::base(*n))
        .chain(FIBER_NAMES[..n_fiber].iter().map(|n| Coordinate::fiber(*n)))
        .collect();
    FiberedPatch::new(Patch::new(coords).expect("distinct names")).expect("valid roles")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn monomial(rng: &mut impl Rng, vars: &[usize], max_degree: u32) -> ScalarExpr {
    let degree = rng.gen_range(0..=max_degree);
    (0..degree).fold(ScalarExpr::one(), |acc, _| match vars.choose(rng) {
        Some(&v) => acc.mul_ref(&ScalarExpr::var(v)),
        None => acc,
    })
}

/// Sparse polynomial with small integer coefficients in `vars`.
pub fn random_poly(rng: &mut impl Rng, vars: &[usize], max_degree: u32, max_terms: usize) -> ScalarExpr {
    let terms = rng.gen_range(0..=max_terms);
    (0..terms).fold(ScalarExpr::zero(), |acc, _| {
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        acc.add_ref(&monomial(rng, vars, max_degree).mul_ref(&ScalarExpr::int(c)))
    })
}

/// Poisson bivector on the fiber coordinates: `f ∂₁∧∂₂` on two-dimensional
/// fibers, the Jacobian structure `g · i_{dC}(∂₁∧∂₂∧∂₃)` on three.
pub fn random_fiber_poisson(rng: &mut impl Rng, fp: &FiberedPatch) -> Multivector {
    let ys = fp.fiber_indices().to_vec();
    let mut v = Multivector::zero(fp.dim(), 2);
    match ys.len() {
        0 | 1 => {}
        2 => {
            let mut f = random_poly(rng, &ys, 1, 2);
            if f.is_zero() {
                f = ScalarExpr::one();
            }
            v.add_entry(&[ys[0], ys[1]], f);
        }
        _ => {
            let casimir = random_poly(rng, &ys, 2, 3).add_ref(&ScalarExpr::var(ys[2]));
            let g = if rng.gen_bool(0.5) {
                ScalarExpr::one()
            } else {
                random_poly(rng, &ys, 1, 1).add_ref(&ScalarExpr::one())
            };
            // V^{ij} = g ε^{ijk} ∂_k C
            for (i, j, k) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                v.add_entry(&[ys[i], ys[j]], g.mul_ref(&casimir.diff(ys[k])));
            }
        }
    }
    v
}

fn max_degree(d: &GeometricData) -> u32 {
    let v = d.bivector().entries().map(|(_, c)| c.degree());
    let g = d.connection().coeffs().iter().flatten().map(ScalarExpr::degree);
    let f = d.two_form().entries().map(|(_, c)| c.degree());
    v.chain(g).chain(f).max().unwrap_or(0)
}

fn random_shape(rng: &mut impl Rng) -> Arc<FiberedPatch> {
    fibered_patch(rng.gen_range(1..=3), rng.gen_range(2..=3))
}

fn random_potential(rng: &mut impl Rng, fp: &FiberedPatch, vars: &[usize], terms: usize) -> BaseForm {
    let mut phi = BaseForm::zero(fp, 1);
    for a in 0..fp.n_base() {
        phi.add_entry(&[a], random_poly(rng, vars, 2, terms));
    }
    phi
}

pub fn random_cartan_setup(rng: &mut impl Rng, fp: &Arc<FiberedPatch>, terms: usize) -> CartanSetup {
    let v = random_fiber_poisson(rng, fp);
    let all: Vec<usize> = (0..fp.dim()).collect();
    let phi = random_potential(rng, fp, &all, terms);
    CartanSetup::new(fp.clone(), v, phi).expect("vertical bivector and 1-form")
}

pub fn random_ymh_setup(rng: &mut impl Rng, fp: &Arc<FiberedPatch>) -> AbelianYMHSetup {
    let v = random_fiber_poisson(rng, fp);
    let potential = fp
        .base_indices()
        .iter()
        .map(|_| random_poly(rng, fp.base_indices(), 2, 2))
        .collect();
    let momentum = random_poly(rng, fp.fiber_indices(), 2, 2);
    AbelianYMHSetup::new(fp.clone(), v, vec![GaugeFactor { potential, momentum }])
        .expect("fiber-only Poisson bivector is preserved by its Hamiltonian fields")
}

fn fully_random(rng: &mut impl Rng, fp: &Arc<FiberedPatch>) -> GeometricData {
    let all: Vec<usize> = (0..fp.dim()).collect();
    let ys = fp.fiber_indices();
    let mut v = Multivector::zero(fp.dim(), 2);
    for (i, &a) in ys.iter().enumerate() {
        for &b in &ys[i + 1..] {
            v.add_entry(&[a, b], random_poly(rng, &all, 2, 2));
        }
    }
    let mut conn = Connection::flat(fp);
    for u in 0..fp.n_fiber() {
        for a in 0..fp.n_base() {
            conn.set(u, a, random_poly(rng, &all, 2, 1));
        }
    }
    let mut f = BaseForm::zero(fp, 2);
    for a in 0..fp.n_base() {
        for b in a + 1..fp.n_base() {
            f.add_entry(&[a, b], random_poly(rng, &all, 2, 2));
        }
    }
    GeometricData::new(fp.clone(), v, conn, f).expect("well-formed by construction")
}

/// Integrable data with one coefficient of `V`, `Γ` or `𝔽` nudged.
fn perturbed(rng: &mut impl Rng, d: GeometricData) -> GeometricData {
    let fp = d.patch().clone();
    let all: Vec<usize> = (0..fp.dim()).collect();
    let mut nudge = random_poly(rng, &all, 1, 1);
    if nudge.is_zero() {
        nudge = ScalarExpr::var(*all.choose(rng).expect("nonempty patch"));
    }
    let ys = fp.fiber_indices().to_vec();
    let mut v = d.bivector().clone();
    let mut conn = d.connection().clone();
    let mut f = d.two_form().clone();
    match rng.gen_range(0..3) {
        0 => v.add_entry(&[ys[0], ys[1]], nudge),
        1 => {
            let (u, a) = (rng.gen_range(0..fp.n_fiber()), rng.gen_range(0..fp.n_base()));
            let g = conn.get(u, a).add_ref(&nudge);
            conn.set(u, a, g);
        }
        _ if fp.n_base() >= 2 => f.add_entry(&[0, 1], nudge),
        _ => v.add_entry(&[ys[0], ys[1]], nudge),
    }
    GeometricData::new(fp, v, conn, f).expect("perturbation keeps shapes")
}

/// Shifts Cartan data by `∂_Γ Φ` for a Casimir-valued `Φ` built from base
/// coordinates.
fn casimir_shift(rng: &mut impl Rng, d: GeometricData) -> GeometricData {
    let fp = d.patch().clone();
    let phi = random_potential(rng, &fp, fp.base_indices(), 1);
    equivalent_data(&d, &phi).expect("base functions are Casimirs of a vertical bivector")
}

fn generate(rng: &mut impl Rng, kind: usize) -> (&'static str, GeometricData) {
    let fp = random_shape(rng);
    match kind {
        0 => ("random", fully_random(rng, &fp)),
        1 => ("cartan", cartan_data(&random_cartan_setup(rng, &fp, 1)).expect("valid setup")),
        2 => ("yang_mills", yang_mills_data(&random_ymh_setup(rng, &fp)).expect("valid setup")),
        3 => {
            let d = cartan_data(&random_cartan_setup(rng, &fp, 1)).expect("valid setup");
            ("perturbed", perturbed(rng, d))
        }
        _ => {
            let d = cartan_data(&random_cartan_setup(rng, &fp, 1)).expect("valid setup");
            ("casimir_shift", casimir_shift(rng, d))
        }
    }
}

/// `count` samples cycling through the five families, each with every
/// coefficient of degree at most [`MAX_DEGREE`].
pub fn random_corpus(seed: u64, count: usize) -> Vec<Sample> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| loop {
            let (family, data) = generate(&mut rng, i % 5);
            if max_degree(&data) <= MAX_DEGREE {
                break Sample {
                    label: format!("{family}_{i}"),
                    data,
                };
            }
        })
        .collect()
}

fn with_entries(
    fp: &Arc<FiberedPatch>,
    v: &[(usize, usize, ScalarExpr)],
    conn: &[(usize, usize, ScalarExpr)],
    f: &[(usize, usize, ScalarExpr)],
) -> GeometricData {
    let mut bivector = Multivector::zero(fp.dim(), 2);
    for (i, j, c) in v {
        bivector.add_entry(&[fp.fiber_index(*i), fp.fiber_index(*j)], c.clone());
    }
    let mut connection = Connection::flat(fp);
    for (u, a, c) in conn {
        connection.set(*u, *a, c.clone());
    }
    let mut form = BaseForm::zero(fp, 2);
    for (a, b, c) in f {
        form.add_entry(&[*a, *b], c.clone());
    }
    GeometricData::new(fp.clone(), bivector, connection, form).expect("fixture is well-formed")
}

/// Flat data `(∂q∧∂p, 0, 0)` on `(x1, x2; q, p)`.
pub fn flat() -> GeometricData {
    let fp = fibered_patch(2, 2);
    with_entries(&fp, &[(0, 1, ScalarExpr::one())], &[], &[])
}

/// One mutation per integrability condition, starting from flat data.
pub fn mutations() -> Vec<Mutation> {
    let one = ScalarExpr::one;
    let x = ScalarExpr::var;
    let jacobi = {
        let fp = fibered_patch(2, 3);
        // ∂q∧∂p + p ∂p∧∂z
        with_entries(&fp, &[(0, 1, one()), (1, 2, x(fp.fiber_index(1)))], &[], &[])
    };
    let closedness = {
        let fp = fibered_patch(3, 2);
        with_entries(&fp, &[(0, 1, one())], &[], &[(0, 1, x(fp.base_index(2)))])
    };
    let curvature = {
        let fp = fibered_patch(2, 2);
        with_entries(&fp, &[(0, 1, one())], &[(0, 0, x(fp.base_index(1)))], &[])
    };
    let transport = {
        let fp = fibered_patch(1, 2);
        with_entries(&fp, &[(0, 1, one())], &[(0, 0, x(fp.fiber_index(0)))], &[])
    };
    [
        ("jacobi", jacobi),
        ("horizontally_closed", closedness),
        ("curvature_identity", curvature),
        ("poisson_connection", transport),
    ]
    .into_iter()
    .map(|(broken, data)| Mutation {
        sample: Sample {
            label: format!("mutation_{broken}"),
            data,
        },
        broken,
    })
    .collect()
}

/// The `J = p`, `A = (x2, 0)` bundle over `(x1, x2)` with fiber `(q, p)`.
pub fn ymh_fixture() -> AbelianYMHSetup {
    let fp = fibered_patch(2, 2);
    let v = Multivector::basis(fp.dim(), &[fp.fiber_index(0), fp.fiber_index(1)]);
    let factor = GaugeFactor {
        potential: vec![ScalarExpr::var(fp.base_index(1)), ScalarExpr::zero()],
        momentum: ScalarExpr::var(fp.fiber_index(1)),
    };
    AbelianYMHSetup::new(fp, v, vec![factor]).expect("fixture is valid")
}

pub fn random_cartan_setups(seed: u64, count: usize) -> Vec<CartanSetup> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let fp = random_shape(&mut rng);
            random_cartan_setup(&mut rng, &fp, 2)
        })
        .collect()
}

pub fn random_ymh_setups(seed: u64, count: usize) -> Vec<AbelianYMHSetup> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let fp = random_shape(&mut rng);
            random_ymh_setup(&mut rng, &fp)
        })
        .collect()
}

/// Potentials on `(x…; th, p, z)` with `V = ∂th∧∂p` whose oscillating part
/// does not involve `p`. In this class `⟨{P̃_a, P̃_b}⟩` vanishes, which is
/// what torus averaging needs to stay integrable.
pub fn random_chb_setups(seed: u64, count: usize) -> Vec<(CartanSetup, Vec<usize>)> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| {
            let n_base = rng.gen_range(1..=3);
            let n_fiber = rng.gen_range(2..=3);
            let coords: Vec<Coordinate> = BASE_NAMES[..n_base]
                .iter()
                .map(|n| Coordinate::base(*n))
                .chain([Coordinate::fiber_angle("th"), Coordinate::fiber("p")])
                .chain((n_fiber == 3).then(|| Coordinate::fiber("z")))
                .collect();
            let fp = FiberedPatch::new(Patch::new(coords).expect("distinct names"))
                .expect("valid roles");
            let (th, p) = (fp.fiber_index(0), fp.fiber_index(1));
            let v = Multivector::basis(fp.dim(), &[th, p]);
            let all: Vec<usize> = (0..fp.dim()).filter(|&i| i != th).collect();
            let slow: Vec<usize> = all.iter().copied().filter(|&i| i != p).collect();
            let mut phi = BaseForm::zero(&fp, 1);
            for a in 0..n_base {
                let mean = random_poly(&mut rng, &all, 2, 2);
                let k = rng.gen_range(1..=2);
                let wave = if rng.gen_bool(0.5) {
                    ScalarExpr::cos(th, k)
                } else {
                    ScalarExpr::sin(th, k)
                };
                let oscillating = random_poly(&mut rng, &slow, 1, 2).mul_ref(&wave);
                phi.add_entry(&[a], mean.add_ref(&oscillating));
            }
            let setup = CartanSetup::new(fp, v, phi).expect("vertical bivector and 1-form");
            (setup, vec![th])
        })
        .collect()
}

/// Data with invertible `𝔽` on a two-dimensional base.
pub fn nondegenerate(seed: u64, count: usize) -> Vec<GeometricData> {
    let mut rng = rng(seed);
    (0..count)
        .map(|_| loop {
            let fp = fibered_patch(2, rng.gen_range(2..=3));
            let all: Vec<usize> = (0..fp.dim()).collect();
            let v = random_fiber_poisson(&mut rng, &fp);
            let mut conn = Connection::flat(&fp);
            for u in 0..fp.n_fiber() {
                for a in 0..2 {
                    conn.set(u, a, random_poly(&mut rng, &all, 2, 1));
                }
            }
            let mut f = BaseForm::zero(&fp, 2);
            let c = random_poly(&mut rng, &all, 1, 2).add_ref(&ScalarExpr::int(rng.gen_range(1..=3)));
            f.add_entry(&[0, 1], c);
            let d = GeometricData::new(fp, v, conn, f).expect("well-formed by construction");
            if !determinant(&d.two_form_matrix()).is_zero() {
                break d;
            }
        })
        .collect()
}
