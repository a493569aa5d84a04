//! Formal rings whose completion has several `d`-dimensional monomial
//! components. Lengths add over components, each counted with an integer
//! weight, so `G` and every mixed multiplicity are weighted sums.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filtration::{Filtration, FiltrationSpec};
use crate::monomial::MonomialIdeal;
use crate::multiplicity::{
    assemble, g_exact_truncated, length_sequence, limit_estimate, verified_truncations, Backend, LimitEstimate, Method,
    MixedMultiplicityReport,
};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawComponent", into = "RawComponent")]
pub struct Component {
    pub weight: u32,
    /// Images of the `r` filtrations on this component.
    pub filtrations: Vec<Filtration>,
}

#[derive(Serialize, Deserialize)]
struct RawComponent {
    weight: u32,
    filtrations: Vec<FiltrationSpec>,
}

impl TryFrom<RawComponent> for Component {
    type Error = Error;

    fn try_from(raw: RawComponent) -> Result<Self> {
        Ok(Component {
            weight: raw.weight,
            filtrations: raw
                .filtrations
                .into_iter()
                .map(Filtration::from_spec)
                .collect::<Result<_>>()?,
        })
    }
}

impl From<Component> for RawComponent {
    fn from(c: Component) -> Self {
        RawComponent {
            weight: c.weight,
            filtrations: c.filtrations.iter().map(|f| f.spec().clone()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct ComponentModel {
    components: Vec<Component>,
}

#[derive(Deserialize)]
struct RawModel {
    components: Vec<Component>,
}

impl TryFrom<RawModel> for ComponentModel {
    type Error = Error;

    fn try_from(raw: RawModel) -> Result<Self> {
        ComponentModel::new(raw.components)
    }
}

impl ComponentModel {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("a model needs at least one component".into()))?;
        let r = first.filtrations.len();
        let d = first
            .filtrations
            .first()
            .ok_or_else(|| Error::InvalidArgument("a component needs at least one filtration".into()))?
            .dim();
        for c in &components {
            if c.weight == 0 {
                return Err(Error::InvalidArgument("component weights must be at least 1".into()));
            }
            if c.filtrations.len() != r {
                return Err(Error::InvalidArgument(format!(
                    "every component needs {r} filtrations, got {}",
                    c.filtrations.len()
                )));
            }
            if let Some(f) = c.filtrations.iter().find(|f| f.dim() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: f.dim(),
                });
            }
        }
        Ok(Self { components })
    }

    /// One component of weight 1.
    pub fn single(filtrations: Vec<Filtration>) -> Result<Self> {
        Self::new(vec![Component { weight: 1, filtrations }])
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn r(&self) -> usize {
        self.components[0].filtrations.len()
    }

    pub fn dim(&self) -> usize {
        self.components[0].filtrations[0].dim()
    }

    /// Every weight multiplied by `k`.
    pub fn scale_weights(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("weight factor must be positive".into()));
        }
        let components = self
            .components
            .iter()
            .map(|c| {
                Ok(Component {
                    weight: c.weight.checked_mul(k).ok_or(Error::Overflow("component weight"))?,
                    filtrations: c.filtrations.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { components })
    }

    /// The two components concatenated.
    pub fn join(&self, other: &ComponentModel) -> Result<Self> {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Self::new(components)
    }
}

/// Two branches of a node in the plane, `d = 2`, weights 1. `I` restricts to
/// `m` on the first and to `(x) + m^n` on the second; `J` the other way round.
pub fn example1_model() -> ComponentModel {
    let m = MonomialIdeal::maximal(2);
    let x = MonomialIdeal::new(2, vec![vec![1, 0]]).expect("valid ideal");
    let adic = Filtration::adic(m.clone()).expect("m is primary");
    let mixed = Filtration::fixed_plus_adic(x, m).expect("m is primary");
    ComponentModel::new(vec![
        Component {
            weight: 1,
            filtrations: vec![adic.clone(), mixed.clone()],
        },
        Component {
            weight: 1,
            filtrations: vec![mixed, adic],
        },
    ])
    .expect("consistent model")
}

fn weighted_sum(parts: Vec<(u32, LimitEstimate)>) -> LimitEstimate {
    let exact = parts.iter().all(|(_, g)| g.is_exact());
    let mut primary = Rational::from_integer(0.into());
    let mut refined = primary.clone();
    let mut notes = Vec::new();
    for (w, g) in &parts {
        let w = rational::int(*w as i64);
        primary += &w * &g.primary;
        refined += &w * &g.refined;
        notes.push(g.error_note.clone());
    }
    LimitEstimate {
        method: if exact { Method::TruncationExact } else { Method::DirectSequence },
        primary,
        refined,
        tail: Vec::new(),
        error_note: notes.join(" | "),
    }
}

enum Prepared {
    Direct(Vec<u32>),
    Exact {
        level: u32,
        per_component: Vec<(Vec<Filtration>, Vec<crate::Period>)>,
    },
}

fn prepare(model: &ComponentModel, backend: &Backend) -> Result<Prepared> {
    Ok(match backend {
        Backend::Direct { ladder } => Prepared::Direct(ladder.clone()),
        Backend::TruncationExact { level, check_bound } => Prepared::Exact {
            level: *level,
            per_component: model
                .components
                .par_iter()
                .map(|c| verified_truncations(&c.filtrations, *level, *check_bound))
                .collect::<Result<_>>()?,
        },
    })
}

fn g_prepared(model: &ComponentModel, prep: &Prepared, n: &[u32]) -> Result<LimitEstimate> {
    if n.len() != model.r() {
        return Err(Error::InvalidArgument(format!("expected {} weights, got {}", model.r(), n.len())));
    }
    let parts = model
        .components
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let g = match prep {
                Prepared::Direct(ladder) => limit_estimate(&length_sequence(&c.filtrations, n, ladder)?)?,
                Prepared::Exact { level, per_component } => {
                    let (truncs, periods) = &per_component[k];
                    LimitEstimate::exact(
                        g_exact_truncated(truncs, periods, n)?,
                        format!("exact along the {level}-th truncation"),
                    )
                }
            };
            Ok((c.weight, g))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(weighted_sum(parts))
}

/// `G(n) = Σ_k w_k G_k(n)` over the components.
pub fn component_g(model: &ComponentModel, n: &[u32], backend: &Backend) -> Result<LimitEstimate> {
    g_prepared(model, &prepare(model, backend)?, n)
}

/// Mixed multiplicities of a component model.
pub fn component_mixed(model: &ComponentModel, backend: &Backend) -> Result<MixedMultiplicityReport> {
    let prep = prepare(model, backend)?;
    let periods = match &prep {
        Prepared::Direct(_) => Vec::new(),
        Prepared::Exact { per_component, .. } => per_component.iter().flat_map(|(_, p)| p.clone()).collect(),
    };
    assemble(model.r(), model.dim(), backend.clone(), periods, |n| g_prepared(model, &prep, n))
}
