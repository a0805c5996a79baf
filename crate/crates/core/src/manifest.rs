//! JSON manifests: geometric data and construction inputs with expressions
//! as strings in the expression grammar.
//!
//! A manifest is canonical when its entries are ordered by coordinate
//! position, every index pair is increasing, no coefficient is zero, and every
//! expression is printed in canonical form. Canonical manifests survive
//! `parse → data → print` byte for byte.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{AbelianYMHSetup, CartanSetup, ConstructionError, GaugeFactor};
use crate::coupling::{CouplingError, GeometricData};
use crate::fibered::{BaseForm, Connection, FiberedError, FiberedPatch};
use crate::symexpr::{Coordinate, ExprError, ParseError, Patch, Rational, Role, ScalarExpr};
use crate::tensorcalc::Multivector;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("manifest is not valid JSON for this schema: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown coordinate `{name}` in {field}")]
    UnknownName { field: &'static str, name: String },
    #[error("`{name}` in {field} must be a {expected} coordinate")]
    WrongRole {
        field: &'static str,
        name: String,
        expected: &'static str,
    },
    #[error("repeated index `{name}` in {field}")]
    RepeatedIndex { field: &'static str, name: String },
    #[error("duplicate entry ({first}, {second}) in {field}")]
    DuplicatePair {
        field: &'static str,
        first: String,
        second: String,
    },
    #[error("cannot parse `{text}` in {field}: {source}")]
    Expression {
        field: &'static str,
        text: String,
        source: ParseError,
    },
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("{field} has {found} entries, expected {expected}")]
    Length {
        field: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("invalid fiber point `{0}`: expected `name=value, …` with rational values")]
    FiberPoint(String),
    #[error(transparent)]
    Coordinates(#[from] ExprError),
    #[error(transparent)]
    Fibered(#[from] FiberedError),
    #[error(transparent)]
    Data(#[from] CouplingError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RoleSpec {
    Base,
    Fiber,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoordinateSpec {
    pub name: String,
    pub role: RoleSpec,
    #[serde(default)]
    pub angle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BivectorEntry {
    pub indices: [String; 2],
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionEntry {
    pub fiber: String,
    pub base: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoFormEntry {
    pub bases: [String; 2],
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OneFormEntry {
    pub base: String,
    pub coeff: String,
}

/// Abelian gauge data: one potential component per base coordinate, in base
/// order, and the momentum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaugeSpec {
    #[serde(rename = "A")]
    pub potential: Vec<String>,
    #[serde(rename = "J")]
    pub momentum: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub coordinates: Vec<CoordinateSpec>,
    #[serde(default)]
    pub vertical_bivector: Vec<BivectorEntry>,
    #[serde(default)]
    pub connection: Vec<ConnectionEntry>,
    #[serde(default)]
    pub horizontal_2form: Vec<TwoFormEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub casimirs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub potential_1form: Option<Vec<OneFormEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ymh: Option<GaugeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles_averaged: Option<Vec<String>>,
    /// A full bivector on the total space, input to decomposition.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bivector: Option<Vec<BivectorEntry>>,
}

/// Resolves names against the patch and parses expressions.
struct Reader<'a> {
    fp: &'a FiberedPatch,
}

impl Reader<'_> {
    fn index(&self, field: &'static str, name: &str) -> Result<usize, ManifestError> {
        self.fp
            .patch()
            .index_of(name)
            .ok_or_else(|| ManifestError::UnknownName {
                field,
                name: name.to_string(),
            })
    }

    fn with_role(&self, field: &'static str, name: &str, role: Role) -> Result<usize, ManifestError> {
        let i = self.index(field, name)?;
        if self.fp.patch().coord(i).role != role {
            return Err(ManifestError::WrongRole {
                field,
                name: name.to_string(),
                expected: role.as_str(),
            });
        }
        Ok(i)
    }

    fn expr(&self, field: &'static str, text: &str) -> Result<ScalarExpr, ManifestError> {
        self.fp
            .patch()
            .parse(text)
            .map_err(|source| ManifestError::Expression {
                field,
                text: text.to_string(),
                source,
            })
    }

    /// Distinct, not previously seen (as an unordered pair) index pair.
    fn pair(
        &self,
        field: &'static str,
        names: &[String; 2],
        role: Option<Role>,
        seen: &mut BTreeSet<(usize, usize)>,
    ) -> Result<(usize, usize), ManifestError> {
        let get = |n: &str| match role {
            Some(r) => self.with_role(field, n, r),
            None => self.index(field, n),
        };
        let (i, j) = (get(&names[0])?, get(&names[1])?);
        if i == j {
            return Err(ManifestError::RepeatedIndex {
                field,
                name: names[0].clone(),
            });
        }
        if !seen.insert((i.min(j), i.max(j))) {
            return Err(ManifestError::DuplicatePair {
                field,
                first: names[0].clone(),
                second: names[1].clone(),
            });
        }
        Ok((i, j))
    }

    fn bivector(
        &self,
        field: &'static str,
        entries: &[BivectorEntry],
        role: Option<Role>,
    ) -> Result<Multivector, ManifestError> {
        let mut seen = BTreeSet::new();
        let mut v = Multivector::zero(self.fp.dim(), 2);
        for e in entries {
            let (i, j) = self.pair(field, &e.indices, role, &mut seen)?;
            v.add_entry(&[i, j], self.expr(field, &e.coeff)?);
        }
        Ok(v)
    }
}

fn render_bivector(v: &Multivector, names: &[String]) -> Vec<BivectorEntry> {
    v.entries()
        .map(|(idx, c)| BivectorEntry {
            indices: [names[idx[0]].clone(), names[idx[1]].clone()],
            coeff: c.render(names),
        })
        .collect()
}

impl Manifest {
    pub fn from_json(text: &str) -> Result<Self, ManifestError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Pretty-printed with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn patch(&self) -> Result<Arc<FiberedPatch>, ManifestError> {
        let coords = self
            .coordinates
            .iter()
            .map(|c| {
                let role = match c.role {
                    RoleSpec::Base => Role::Base,
                    RoleSpec::Fiber => Role::Fiber,
                };
                Coordinate::new(c.name.clone(), role, c.angle)
            })
            .collect();
        Ok(FiberedPatch::new(Patch::new(coords)?)?)
    }

    pub fn geometric_data(&self) -> Result<GeometricData, ManifestError> {
        let fp = self.patch()?;
        let r = Reader { fp: &fp };
        let v = r.bivector("vertical_bivector", &self.vertical_bivector, Some(Role::Fiber))?;
        let mut conn = Connection::flat(&fp);
        let mut seen = BTreeSet::new();
        for e in &self.connection {
            let u = r.with_role("connection", &e.fiber, Role::Fiber)?;
            let a = r.with_role("connection", &e.base, Role::Base)?;
            if !seen.insert((u, a)) {
                return Err(ManifestError::DuplicatePair {
                    field: "connection",
                    first: e.fiber.clone(),
                    second: e.base.clone(),
                });
            }
            let (u, a) = (fp.fiber_position(u).expect("fiber"), fp.base_position(a).expect("base"));
            conn.set(u, a, r.expr("connection", &e.coeff)?);
        }
        let mut form = BaseForm::zero(&fp, 2);
        let mut seen = BTreeSet::new();
        for e in &self.horizontal_2form {
            let (a, b) = r.pair("horizontal_2form", &e.bases, Some(Role::Base), &mut seen)?;
            let (a, b) = (fp.base_position(a).expect("base"), fp.base_position(b).expect("base"));
            form.add_entry(&[a, b], r.expr("horizontal_2form", &e.coeff)?);
        }
        Ok(GeometricData::new(fp.clone(), v, conn, form)?)
    }

    /// Canonical manifest of `data`, with no optional keys.
    pub fn from_data(data: &GeometricData) -> Self {
        let fp = data.patch();
        let names = fp.names();
        let coordinates = fp
            .patch()
            .coords()
            .iter()
            .map(|c| CoordinateSpec {
                name: c.name.clone(),
                role: match c.role {
                    Role::Base => RoleSpec::Base,
                    Role::Fiber => RoleSpec::Fiber,
                },
                angle: c.angle,
            })
            .collect();
        let mut connection = Vec::new();
        for u in 0..fp.n_fiber() {
            for a in 0..fp.n_base() {
                let c = data.connection().get(u, a);
                if !c.is_zero() {
                    connection.push(ConnectionEntry {
                        fiber: names[fp.fiber_index(u)].clone(),
                        base: names[fp.base_index(a)].clone(),
                        coeff: c.render(&names),
                    });
                }
            }
        }
        let horizontal_2form = data
            .two_form()
            .entries()
            .map(|(idx, c)| TwoFormEntry {
                bases: [
                    names[fp.base_index(idx[0])].clone(),
                    names[fp.base_index(idx[1])].clone(),
                ],
                coeff: c.render(&names),
            })
            .collect();
        Self {
            coordinates,
            vertical_bivector: render_bivector(data.bivector(), &names),
            connection,
            horizontal_2form,
            ..Self::default()
        }
    }

    /// Re-prints every key in canonical form.
    pub fn canonicalize(&self) -> Result<Self, ManifestError> {
        let data = self.geometric_data()?;
        let fp = data.patch();
        let names = fp.names();
        let r = Reader { fp };
        let mut out = Self::from_data(&data);
        out.casimirs = self
            .casimirs
            .as_ref()
            .map(|cs| {
                cs.iter()
                    .map(|c| Ok(r.expr("casimirs", c)?.render(&names)))
                    .collect::<Result<Vec<_>, ManifestError>>()
            })
            .transpose()?;
        out.potential_1form = match &self.potential_1form {
            None => None,
            Some(_) => {
                let phi = self.potential(fp)?;
                Some(
                    (0..fp.n_base())
                        .filter_map(|a| {
                            let c = phi.get(&[a]);
                            (!c.is_zero()).then(|| OneFormEntry {
                                base: names[fp.base_index(a)].clone(),
                                coeff: c.render(&names),
                            })
                        })
                        .collect(),
                )
            }
        };
        out.ymh = match &self.ymh {
            None => None,
            Some(g) => {
                let f = self.gauge_factor(fp, g)?;
                Some(GaugeSpec {
                    potential: f.potential.iter().map(|c| c.render(&names)).collect(),
                    momentum: f.momentum.render(&names),
                })
            }
        };
        out.angles_averaged = match &self.angles_averaged {
            None => None,
            Some(_) => Some(self.averaged_angles(fp)?.iter().map(|&i| names[i].clone()).collect()),
        };
        out.bivector = match &self.bivector {
            None => None,
            Some(_) => Some(render_bivector(&self.full_bivector()?.1, &names)),
        };
        Ok(out)
    }

    pub fn casimir_functions(&self) -> Result<Vec<ScalarExpr>, ManifestError> {
        let fp = self.patch()?;
        let r = Reader { fp: &fp };
        self.casimirs
            .iter()
            .flatten()
            .map(|c| r.expr("casimirs", c))
            .collect()
    }

    fn potential(&self, fp: &FiberedPatch) -> Result<BaseForm, ManifestError> {
        let entries = self
            .potential_1form
            .as_ref()
            .ok_or(ManifestError::MissingKey("potential_1form"))?;
        let r = Reader { fp };
        let mut phi = BaseForm::zero(fp, 1);
        let mut seen = BTreeSet::new();
        for e in entries {
            let a = r.with_role("potential_1form", &e.base, Role::Base)?;
            if !seen.insert(a) {
                return Err(ManifestError::DuplicatePair {
                    field: "potential_1form",
                    first: e.base.clone(),
                    second: e.base.clone(),
                });
            }
            let a = fp.base_position(a).expect("base");
            phi.add_entry(&[a], r.expr("potential_1form", &e.coeff)?);
        }
        Ok(phi)
    }

    fn gauge_factor(&self, fp: &FiberedPatch, g: &GaugeSpec) -> Result<GaugeFactor, ManifestError> {
        if g.potential.len() != fp.n_base() {
            return Err(ManifestError::Length {
                field: "ymh.A",
                expected: fp.n_base(),
                found: g.potential.len(),
            });
        }
        let r = Reader { fp };
        Ok(GaugeFactor {
            potential: g
                .potential
                .iter()
                .map(|c| r.expr("ymh.A", c))
                .collect::<Result<_, _>>()?,
            momentum: r.expr("ymh.J", &g.momentum)?,
        })
    }

    /// Vertical bivector plus the potential, for Cartan-type constructions.
    pub fn cartan_setup(&self) -> Result<CartanSetup, ManifestError> {
        let data = self.geometric_data()?;
        let phi = self.potential(data.patch())?;
        Ok(CartanSetup::new(data.patch().clone(), data.bivector().clone(), phi)?)
    }

    pub fn ymh_setup(&self) -> Result<AbelianYMHSetup, ManifestError> {
        let data = self.geometric_data()?;
        let g = self.ymh.as_ref().ok_or(ManifestError::MissingKey("ymh"))?;
        let factor = self.gauge_factor(data.patch(), g)?;
        Ok(AbelianYMHSetup::new(
            data.patch().clone(),
            data.bivector().clone(),
            vec![factor],
        )?)
    }

    /// The listed angles, or every fiber angle when the key is absent.
    pub fn averaged_angles(&self, fp: &FiberedPatch) -> Result<Vec<usize>, ManifestError> {
        let r = Reader { fp };
        match &self.angles_averaged {
            None => Ok(fp
                .fiber_indices()
                .iter()
                .copied()
                .filter(|&i| fp.patch().coord(i).angle)
                .collect()),
            Some(names) => names
                .iter()
                .map(|n| r.with_role("angles_averaged", n, Role::Fiber))
                .collect(),
        }
    }

    /// The `bivector` key on the manifest's patch.
    pub fn full_bivector(&self) -> Result<(Arc<FiberedPatch>, Multivector), ManifestError> {
        let fp = self.patch()?;
        let entries = self.bivector.as_ref().ok_or(ManifestError::MissingKey("bivector"))?;
        let v = Reader { fp: &fp }.bivector("bivector", entries, None)?;
        Ok((fp, v))
    }
}

/// Parses `"x1=1, x2=-3/2"` into base values.
pub fn parse_fiber_point(text: &str) -> Result<BTreeMap<String, Rational>, ManifestError> {
    let bad = || ManifestError::FiberPoint(text.to_string());
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (name, value) = item.split_once('=').ok_or_else(bad)?;
            let value: Rational = value.trim().parse().map_err(|_| bad())?;
            Ok((name.trim().to_string(), value))
        })
        .collect()
}
