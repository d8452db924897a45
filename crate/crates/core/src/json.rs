//! Serialized forms of the domain types.
//!
//! Conventions, used consistently by the CLI and FFI surfaces:
//! * exact rationals are strings `"num/den"` (bare integers accepted on
//!   input); JSON numbers are accepted for probabilities and switch the
//!   distribution onto the float-ingestion path (2^64 grid, parameter
//!   independence at 1e-9);
//! * sets are sorted arrays of indices;
//! * intuples are arrays of `[element, outcome]` pairs with outcomes
//!   displayed 1-based, so the displayed outcome "1" is index 0 internally;
//! * maps keyed by sets (context distributions, multideviation tables) are
//!   arrays of entries in deterministic order.

use crate::algebra::{format_rational, parse_rational, rational_from_f64, ElementSet, Intuple, ProductSet, Rational};
use crate::contexts::{
    BellInequality, EventSpace, IneqTerm, MultiContextDistribution, Observable, Observer,
    Reference,
};
use crate::error::{domain, Error, Result};
use crate::multidev::{DistVector, LatticeIntuple, MultidevTable};
use crate::pioneer::PioneerSpec;
use crate::tbic::TbicVerdict;
use serde::{Deserialize, Serialize};

fn bad_json<T>(msg: impl Into<String>) -> Result<T> {
    domain(msg)
}

/// `"num/den"` string or bare JSON number.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberLike {
    Exact(String),
    Float(f64),
}

impl NumberLike {
    pub fn to_rational(&self) -> Result<(Rational, bool)> {
        match self {
            NumberLike::Exact(s) => Ok((parse_rational(s)?, false)),
            NumberLike::Float(x) => Ok((rational_from_f64(*x)?, true)),
        }
    }
}

// ---------------------------------------------------------------- spaces

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObservableJson {
    pub id: u32,
    pub outcomes: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObserverJson {
    pub id: u32,
    pub observables: Vec<ObservableJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EventSpaceJson {
    pub observers: Vec<ObserverJson>,
}

pub fn space_to_json(space: &EventSpace) -> EventSpaceJson {
    EventSpaceJson {
        observers: space
            .observers()
            .iter()
            .map(|o| ObserverJson {
                id: o.id,
                observables: o
                    .observables
                    .iter()
                    .map(|x| ObservableJson { id: x.id, outcomes: x.outcomes })
                    .collect(),
            })
            .collect(),
    }
}

pub fn space_from_json(j: &EventSpaceJson) -> Result<EventSpace> {
    EventSpace::new(
        j.observers
            .iter()
            .map(|o| Observer {
                id: o.id,
                observables: o
                    .observables
                    .iter()
                    .map(|x| Observable { id: x.id, outcomes: x.outcomes })
                    .collect(),
            })
            .collect(),
    )
}

// --------------------------------------------------------- distributions

/// One context's entry: the chosen observable ids and the probability array
/// in encode order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContextEntryJson {
    pub observables: Vec<u32>,
    pub probabilities: Vec<NumberLike>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistributionJson {
    pub contexts: Vec<ContextEntryJson>,
}

pub fn distribution_to_json(d: &MultiContextDistribution) -> DistributionJson {
    let space = d.space();
    DistributionJson {
        contexts: (0..space.n_contexts())
            .map(|k| ContextEntryJson {
                observables: space.context(k).iter().map(|&o| space.observable_id(o)).collect(),
                probabilities: d
                    .context_dist(k)
                    .values()
                    .iter()
                    .map(|v| NumberLike::Exact(format_rational(v)))
                    .collect(),
            })
            .collect(),
    }
}

pub fn distribution_from_json(
    space: &EventSpace,
    j: &DistributionJson,
) -> Result<MultiContextDistribution> {
    if j.contexts.len() != space.n_contexts() {
        return bad_json(format!(
            "expected {} context entries, got {}",
            space.n_contexts(),
            j.contexts.len()
        ));
    }
    // resolve each entry to its context index
    let mut exact: Vec<Option<Vec<Rational>>> = vec![None; space.n_contexts()];
    let mut floats = false;
    for entry in &j.contexts {
        let mut rho = ElementSet::EMPTY;
        for id in &entry.observables {
            rho = rho.insert(space.observable_index(*id)?);
        }
        if rho.len() != space.n_observers() {
            return bad_json("each context must pick one observable per observer");
        }
        let k = space.first_context_containing(rho)?;
        if exact[k].is_some() {
            return bad_json("duplicate context entry");
        }
        let mut values = Vec::with_capacity(entry.probabilities.len());
        for p in &entry.probabilities {
            let (r, was_float) = p.to_rational()?;
            floats |= was_float;
            values.push(r);
        }
        exact[k] = Some(values);
    }
    let per_context: Vec<Vec<Rational>> =
        exact.into_iter().map(|v| v.expect("all contexts filled")).collect();
    if floats {
        let as_floats = per_context
            .iter()
            .map(|vs| vs.iter().map(crate::algebra::rational_to_f64).collect())
            .collect();
        MultiContextDistribution::from_floats(space.clone(), as_floats)
    } else {
        let dists = per_context
            .into_iter()
            .enumerate()
            .map(|(k, values)| {
                DistVector::probability(space.context_ps(&space.context(k)), values)
            })
            .collect::<Result<Vec<_>>>()?;
        MultiContextDistribution::new(space.clone(), dists)
    }
}

/// An ordinary function or distribution over a bare product set.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistVectorJson {
    pub sizes: Vec<u32>,
    pub values: Vec<NumberLike>,
}

pub fn dist_vector_to_json(f: &DistVector) -> DistVectorJson {
    DistVectorJson {
        sizes: f.product_set().sizes().to_vec(),
        values: f.values().iter().map(|v| NumberLike::Exact(format_rational(v))).collect(),
    }
}

pub fn dist_vector_from_json(j: &DistVectorJson, probability: bool) -> Result<DistVector> {
    let ps = ProductSet::new(j.sizes.clone())?;
    let mut values = Vec::with_capacity(j.values.len());
    for v in &j.values {
        values.push(v.to_rational()?.0);
    }
    if probability {
        DistVector::probability(ps, values)
    } else {
        DistVector::function(ps, values)
    }
}

// -------------------------------------------------------------- intuples

/// `[element, outcome]` pairs, outcomes 1-based.
pub type IntupleJson = Vec<(u32, u32)>;

pub fn intuple_to_json(space: &EventSpace, x: &Intuple) -> IntupleJson {
    x.pairs().map(|(o, out)| (space.observable_id(o), out + 1)).collect()
}

pub fn intuple_from_json(space: &EventSpace, j: &IntupleJson) -> Result<Intuple> {
    let mut pairs: Vec<(usize, u32)> = Vec::with_capacity(j.len());
    for (id, outcome) in j {
        let idx = space.observable_index(*id)?;
        if *outcome == 0 {
            return bad_json("outcomes are displayed 1-based; 0 is invalid");
        }
        pairs.push((idx, outcome - 1));
    }
    pairs.sort_by_key(|&(idx, _)| idx);
    let support = ElementSet::from_indices(pairs.iter().map(|&(i, _)| i));
    if support.len() != pairs.len() {
        return bad_json("duplicate element in intuple");
    }
    Ok(Intuple::new(support, pairs.into_iter().map(|(_, o)| o).collect()))
}

// ---------------------------------------------------------- inequalities

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceJson {
    /// Reference outcome: `[observable, outcome]` pairs, 1-based outcomes.
    Outcome(Vec<(u32, u32)>),
    /// Two-block coarse-graining: `[observable, [outcomes...]]` pairs.
    Lattice(Vec<(u32, Vec<u32>)>),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IneqTermJson {
    pub rho: Vec<u32>,
    pub reference: ReferenceJson,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BellInequalityJson {
    /// The space the inequality lives on; optional so hand-written files can
    /// rely on `--space` instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub space: Option<EventSpaceJson>,
    pub constant: String,
    pub terms: Vec<IneqTermJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omni_f: Option<Vec<String>>,
}

pub fn inequality_to_json(ineq: &BellInequality) -> BellInequalityJson {
    let space = ineq.space();
    BellInequalityJson {
        space: Some(space_to_json(space)),
        constant: format_rational(ineq.constant()),
        terms: ineq
            .terms()
            .iter()
            .map(|t| IneqTermJson {
                rho: t.rho.iter().map(|o| space.observable_id(o)).collect(),
                reference: match &t.reference {
                    Reference::Outcome(x) => ReferenceJson::Outcome(intuple_to_json(space, x)),
                    Reference::Lattice(a) => ReferenceJson::Lattice(
                        t.rho
                            .iter()
                            .zip(a.blocks())
                            .map(|(o, &mask)| {
                                let outcomes = (0..64u32)
                                    .filter(|b| mask & (1u64 << b) != 0)
                                    .map(|b| b + 1)
                                    .collect();
                                (space.observable_id(o), outcomes)
                            })
                            .collect(),
                    ),
                },
                coeff: format_rational(&t.coeff),
            })
            .collect(),
        omni_f: ineq
            .omni_f()
            .map(|f| f.values().iter().map(format_rational).collect()),
    }
}

pub fn inequality_from_json(
    j: &BellInequalityJson,
    fallback_space: Option<&EventSpace>,
) -> Result<BellInequality> {
    let space = match (&j.space, fallback_space) {
        (Some(sj), _) => space_from_json(sj)?,
        (None, Some(s)) => s.clone(),
        (None, None) => {
            return bad_json("inequality file has no space; pass one with --space")
        }
    };
    let omni = space.omni_ps();
    let mut terms = Vec::with_capacity(j.terms.len());
    for t in &j.terms {
        let mut rho = ElementSet::EMPTY;
        for id in &t.rho {
            rho = rho.insert(space.observable_index(*id)?);
        }
        let reference = match &t.reference {
            ReferenceJson::Outcome(pairs) => {
                let x = intuple_from_json(&space, pairs)?;
                if x.support() != rho {
                    return bad_json("reference support must equal rho");
                }
                Reference::Outcome(x)
            }
            ReferenceJson::Lattice(pairs) => {
                let mut blocks = vec![0u64; rho.len()];
                let slots: Vec<usize> = rho.indices();
                for (id, outcomes) in pairs {
                    let idx = space.observable_index(*id)?;
                    let slot = slots
                        .iter()
                        .position(|&o| o == idx)
                        .ok_or_else(|| Error::Domain("lattice element outside rho".into()))?;
                    for out in outcomes {
                        if *out == 0 {
                            return bad_json("outcomes are 1-based");
                        }
                        blocks[slot] |= 1u64 << (out - 1);
                    }
                }
                Reference::Lattice(LatticeIntuple::new(&omni, rho, blocks)?)
            }
        };
        terms.push(IneqTerm { rho, reference, coeff: parse_rational(&t.coeff)? });
    }
    let omni_f = match &j.omni_f {
        None => None,
        Some(vals) => {
            let values =
                vals.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
            Some(DistVector::function(omni, values)?)
        }
    };
    BellInequality::new(space, parse_rational(&j.constant)?, terms, omni_f)
}

// ------------------------------------------------------------- pioneers

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PioneerSpecJson {
    /// Observer partition: one array of observer indices per block.
    pub partition: Vec<Vec<u32>>,
    /// One profile family per block: arrays of observer-index subsets.
    pub family: Vec<Vec<Vec<u32>>>,
}

pub fn pioneer_to_json(spec: &PioneerSpec) -> PioneerSpecJson {
    PioneerSpecJson {
        partition: spec
            .partition()
            .iter()
            .map(|z| z.iter().map(|i| i as u32).collect())
            .collect(),
        family: spec
            .families()
            .iter()
            .map(|fam| {
                fam.iter().map(|m| m.iter().map(|i| i as u32).collect()).collect()
            })
            .collect(),
    }
}

pub fn pioneer_from_json(j: &PioneerSpecJson) -> Result<PioneerSpec> {
    let partition: Vec<ElementSet> = j
        .partition
        .iter()
        .map(|z| ElementSet::from_indices(z.iter().map(|&i| i as usize)))
        .collect();
    let families: Vec<Vec<ElementSet>> = j
        .family
        .iter()
        .map(|fam| {
            fam.iter()
                .map(|m| ElementSet::from_indices(m.iter().map(|&i| i as usize)))
                .collect()
        })
        .collect();
    PioneerSpec::new(partition, families)
}

// ---------------------------------------------------------------- gammas

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GammaJson {
    /// Omni-joint outcomes as intuples over all observables.
    pub members: Vec<IntupleJson>,
}

pub fn gamma_from_json(space: &EventSpace, j: &GammaJson) -> Result<Vec<usize>> {
    let omni = space.omni_ps();
    let mut out = Vec::with_capacity(j.members.len());
    for m in &j.members {
        let x = intuple_from_json(space, m)?;
        if x.support() != omni.universe() {
            return bad_json("Γ members must assign an outcome to every observable");
        }
        out.push(omni.encode(&x)?);
    }
    Ok(out)
}

pub fn gamma_to_json(space: &EventSpace, gamma: &[usize]) -> Result<GammaJson> {
    let omni = space.omni_ps();
    let members = gamma
        .iter()
        .map(|&idx| Ok(intuple_to_json(space, &omni.decode(omni.universe(), idx)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(GammaJson { members })
}

// --------------------------------------------------------------- tables

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TableOrderJson {
    pub sigma: Vec<u32>,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultidevTableJson {
    pub sizes: Vec<u32>,
    pub orders: Vec<TableOrderJson>,
}

pub fn table_to_json(t: &MultidevTable) -> MultidevTableJson {
    let ps = t.product_set();
    let orders = ps
        .universe()
        .subsets()
        .map(|sigma| TableOrderJson {
            sigma: sigma.iter().map(|i| i as u32).collect(),
            values: t.order(sigma).iter().map(format_rational).collect(),
        })
        .collect();
    MultidevTableJson { sizes: ps.sizes().to_vec(), orders }
}

pub fn table_from_json(j: &MultidevTableJson) -> Result<MultidevTable> {
    let ps = ProductSet::new(j.sizes.clone())?;
    let n_orders = 1usize << ps.len();
    if j.orders.len() != n_orders {
        return bad_json(format!("expected {n_orders} order entries"));
    }
    let mut tables: Vec<Option<Vec<Rational>>> = vec![None; n_orders];
    for o in &j.orders {
        let sigma = ElementSet::from_indices(o.sigma.iter().map(|&i| i as usize));
        ps.check_subset(sigma)?;
        let values =
            o.values.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>()?;
        if tables[sigma.mask() as usize].replace(values).is_some() {
            return bad_json("duplicate order entry");
        }
    }
    let tables = tables
        .into_iter()
        .map(|t| t.ok_or_else(|| Error::Domain("missing order entry".into())))
        .collect::<Result<Vec<_>>>()?;
    MultidevTable::from_parts(ps, tables)
}

// -------------------------------------------------------------- verdicts

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictJson {
    pub verdict: String,
    pub nullity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

pub fn verdict_to_json(v: &TbicVerdict) -> VerdictJson {
    match v {
        TbicVerdict::Tight { f, nullity } => VerdictJson {
            verdict: "tight".into(),
            nullity: *nullity,
            f: Some(f.values().iter().map(format_rational).collect()),
            witness: None,
        },
        TbicVerdict::NotMinimal { nullity, zero_at } => VerdictJson {
            verdict: "not_minimal".into(),
            nullity: *nullity,
            f: None,
            witness: zero_at.map(|i| format!("solution vanishes on Γ member {i}")),
        },
        TbicVerdict::NotPositive => VerdictJson {
            verdict: "not_positive".into(),
            nullity: 1,
            f: None,
            witness: Some("unique solution changes sign on Γ".into()),
        },
        TbicVerdict::NotDependent => VerdictJson {
            verdict: "not_dependent".into(),
            nullity: 0,
            f: None,
            witness: Some("only the zero function is supported on Γ".into()),
        },
    }
}
