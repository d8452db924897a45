//! Multiple-context event spaces and distributions.
//!
//! An event space is the triple (V, M_V, N_∪M): observers, a set of
//! observables per observer, and an outcome set per observable. A
//! multiple-context distribution carries one ordinary distribution per joint
//! measurement context. The comeasurable family Ψ collects the observable
//! sets with at most one observable per observer; the omni-joint product set
//! ΠN_∪M treats all observables, mutually exclusive or not, as jointly
//! measured.
//!
//! The projection of an omni-joint distribution μ onto a context p̃ fixes
//! each context multideviation from the corresponding omni one,
//!
//! ```text
//! Q^{p̃_σ}_{P_p̃}(x̃) = n_{∪M∖p̃} · Q^{p̃_σ}_μ(x̃)
//! ```
//!
//! and produces exactly the Bell mixture Σ_γ μ(γ̃) G^γ̃ — the projection
//! theorem. `bell_mixture` computes the left side by direct summation and
//! `project_omni` the right side through multideviations, so the two remain
//! independent routes to the same distribution.

use crate::algebra::{
    rat_recip, rational_from_f64, ElementSet, Intuple, ProductSet, Rational,
};
use crate::error::{domain, precondition, Error, Result};
use crate::multidev::{
    boolean_multidev, multidev_order, DistVector, LatticeIntuple, MultidevTable,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Observable {
    pub id: u32,
    pub outcomes: u32,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Observer {
    pub id: u32,
    pub observables: Vec<Observable>,
}

/// The event space (V, M_V, N_∪M).
///
/// Observables are indexed densely in declaration order (observer by
/// observer); every `ElementSet` in this module is a set of those dense
/// indices unless stated otherwise.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EventSpace {
    observers: Vec<Observer>,
    obs_owner: Vec<usize>,
    obs_sizes: Vec<u32>,
    obs_ids: Vec<u32>,
    obs_offset: Vec<usize>,
}

impl EventSpace {
    pub fn new(observers: Vec<Observer>) -> Result<Self> {
        if observers.is_empty() {
            return domain("event space needs at least one observer");
        }
        let mut obs_owner = Vec::new();
        let mut obs_sizes = Vec::new();
        let mut obs_ids = Vec::new();
        let mut obs_offset = Vec::new();
        let mut seen = std::collections::BTreeSet::new();
        for (pos, obs) in observers.iter().enumerate() {
            if obs.observables.is_empty() {
                return domain(format!("observer {} has no observables", obs.id));
            }
            obs_offset.push(obs_ids.len());
            for o in &obs.observables {
                if o.outcomes < 2 {
                    return domain(format!("observable {} has fewer than 2 outcomes", o.id));
                }
                if !seen.insert(o.id) {
                    return domain(format!("observable id {} is not globally unique", o.id));
                }
                obs_owner.push(pos);
                obs_sizes.push(o.outcomes);
                obs_ids.push(o.id);
            }
        }
        if obs_ids.len() > crate::algebra::MAX_ELEMENTS {
            return domain("more than 64 observables");
        }
        Ok(EventSpace { observers, obs_owner, obs_sizes, obs_ids, obs_offset })
    }

    /// The binary space 2_V: |V| observers, two binary observables each.
    /// Observable ids follow the usual display convention: observer i
    /// (0-based) owns p_i = 2i+1 and q_i = 2i+2.
    pub fn binary(observers: usize) -> Self {
        let observers = (0..observers)
            .map(|i| Observer {
                id: i as u32,
                observables: vec![
                    Observable { id: 2 * i as u32 + 1, outcomes: 2 },
                    Observable { id: 2 * i as u32 + 2, outcomes: 2 },
                ],
            })
            .collect();
        EventSpace::new(observers).expect("binary space is valid")
    }

    pub fn observers(&self) -> &[Observer] {
        &self.observers
    }

    pub fn n_observers(&self) -> usize {
        self.observers.len()
    }

    pub fn n_observables(&self) -> usize {
        self.obs_ids.len()
    }

    pub fn observable_ids(&self) -> &[u32] {
        &self.obs_ids
    }

    pub fn observable_id(&self, idx: usize) -> u32 {
        self.obs_ids[idx]
    }

    pub fn observable_index(&self, id: u32) -> Result<usize> {
        self.obs_ids
            .iter()
            .position(|&o| o == id)
            .ok_or_else(|| Error::Domain(format!("unknown observable id {id}")))
    }

    pub fn observable_size(&self, idx: usize) -> u32 {
        self.obs_sizes[idx]
    }

    pub fn owner_of(&self, idx: usize) -> usize {
        self.obs_owner[idx]
    }

    /// Dense index of observer `pos`'s `k`-th observable.
    pub fn observable_at(&self, pos: usize, k: usize) -> usize {
        self.obs_offset[pos] + k
    }

    pub fn all_binary(&self) -> bool {
        self.obs_sizes.iter().all(|&s| s == 2)
    }

    /// The omni-joint product set ΠN_∪M.
    pub fn omni_ps(&self) -> ProductSet {
        ProductSet::new(self.obs_sizes.clone()).expect("validated sizes")
    }

    pub fn n_contexts(&self) -> usize {
        self.observers.iter().map(|o| o.observables.len()).product()
    }

    /// Joint measurement context number `k`, in lexicographic order (first
    /// observer most significant). Returns one dense observable index per
    /// observer.
    pub fn context(&self, mut k: usize) -> Vec<usize> {
        let mut rev = Vec::with_capacity(self.observers.len());
        for (pos, obs) in self.observers.iter().enumerate().rev() {
            let m = obs.observables.len();
            rev.push(self.observable_at(pos, k % m));
            k /= m;
        }
        rev.reverse();
        rev
    }

    pub fn contexts(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.n_contexts()).map(|k| self.context(k))
    }

    /// The observables of context `ctx` as a set.
    pub fn context_set(&self, ctx: &[usize]) -> ElementSet {
        ElementSet::from_indices(ctx.iter().copied())
    }

    /// Product set of a context, indexed by observer position.
    pub fn context_ps(&self, ctx: &[usize]) -> ProductSet {
        ProductSet::new(ctx.iter().map(|&o| self.obs_sizes[o]).collect()).expect("sizes >= 2")
    }

    /// Index of the lexicographically-first context containing every
    /// observable of the comeasurable set ρ.
    pub fn first_context_containing(&self, rho: ElementSet) -> Result<usize> {
        let mut chosen = vec![0usize; self.observers.len()];
        let mut taken = vec![false; self.observers.len()];
        for o in rho.iter() {
            if o >= self.n_observables() {
                return domain(format!("observable index {o} outside the space"));
            }
            let owner = self.obs_owner[o];
            if taken[owner] {
                return domain(format!("{rho:?} holds two observables of one observer"));
            }
            taken[owner] = true;
            chosen[owner] = o - self.obs_offset[owner];
        }
        let mut idx = 0usize;
        for (pos, obs) in self.observers.iter().enumerate() {
            idx = idx * obs.observables.len() + chosen[pos];
        }
        Ok(idx)
    }

    /// Observer positions of the observables in ρ.
    pub fn observer_positions(&self, rho: ElementSet) -> ElementSet {
        ElementSet::from_indices(rho.iter().map(|o| self.obs_owner[o]))
    }

    /// The comeasurable family Ψ: all ρ ⊆ ∪M with at most one observable
    /// per observer, in ascending mask order.
    pub fn psi(&self) -> Vec<ElementSet> {
        let mut out = vec![ElementSet::EMPTY];
        for (pos, obs) in self.observers.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (1 + obs.observables.len()));
            for base in &out {
                next.push(*base);
                for k in 0..obs.observables.len() {
                    next.push(base.insert(self.observable_at(pos, k)));
                }
            }
            out = next;
        }
        out.sort();
        out
    }
}

/// A family of ordinary distributions, one per joint measurement context.
///
/// Each context's vector is stored independently even when contexts share
/// observables: parameter independence is a checked property, not a storage
/// assumption, so signalling inputs are representable and rejectable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiContextDistribution {
    space: EventSpace,
    dists: Vec<DistVector>,
    pi_tolerance: Rational,
}

impl MultiContextDistribution {
    pub fn new(space: EventSpace, dists: Vec<DistVector>) -> Result<Self> {
        if dists.len() != space.n_contexts() {
            return domain(format!(
                "expected {} context distributions, got {}",
                space.n_contexts(),
                dists.len()
            ));
        }
        for (k, d) in dists.iter().enumerate() {
            let expect = space.context_ps(&space.context(k));
            if d.product_set() != &expect {
                return domain(format!("context {k} distribution is over the wrong product set"));
            }
            if !d.is_probability() {
                return precondition(format!("context {k} vector is not a probability"));
            }
        }
        Ok(MultiContextDistribution { space, dists, pi_tolerance: Rational::zero() })
    }

    /// Ingests float statistics: each probability is clamped at zero,
    /// snapped to the 2^64 grid, and exactly renormalized; parameter
    /// independence is then checked at tolerance 1e-9 instead of exactly.
    pub fn from_floats(space: EventSpace, per_context: Vec<Vec<f64>>) -> Result<Self> {
        if per_context.len() != space.n_contexts() {
            return domain("one probability array per context required");
        }
        let mut dists = Vec::with_capacity(per_context.len());
        for (k, probs) in per_context.into_iter().enumerate() {
            let ps = space.context_ps(&space.context(k));
            let mut values = Vec::with_capacity(probs.len());
            for p in probs {
                values.push(rational_from_f64(p.max(0.0))?);
            }
            let total: Rational = values.iter().sum();
            if total.is_zero() {
                return precondition(format!("context {k} probabilities sum to zero"));
            }
            let values = values.into_iter().map(|v| v / &total).collect();
            dists.push(DistVector::probability(ps, values)?);
        }
        let mut out = MultiContextDistribution::new(space, dists)?;
        out.pi_tolerance = Rational::new(BigInt::one(), BigInt::from(1_000_000_000u64));
        Ok(out)
    }

    pub fn space(&self) -> &EventSpace {
        &self.space
    }

    pub fn context_dist(&self, k: usize) -> &DistVector {
        &self.dists[k]
    }

    pub fn dists(&self) -> &[DistVector] {
        &self.dists
    }

    pub fn pi_tolerance(&self) -> &Rational {
        &self.pi_tolerance
    }

    /// Multideviation table of one context's distribution.
    pub fn context_table(&self, k: usize) -> MultidevTable {
        crate::multidev::transform(&self.dists[k])
    }

    /// Parameter independence: any two contexts agreeing on a set of
    /// observables must induce identical marginals on that set (checked for
    /// every shared subset, within the distribution's tolerance).
    pub fn check_parameter_independence(&self) -> Option<PiViolation> {
        let n = self.space.n_contexts();
        for a in 0..n {
            let ctx_a = self.space.context(a);
            for b in (a + 1)..n {
                let ctx_b = self.space.context(b);
                let shared = ElementSet::from_indices(
                    (0..self.space.n_observers()).filter(|&i| ctx_a[i] == ctx_b[i]),
                );
                for sigma in shared.subsets() {
                    let ma = self.dists[a].marginal(sigma).expect("σ within context");
                    let mb = self.dists[b].marginal(sigma).expect("σ within context");
                    for (key, (va, vb)) in ma.iter().zip(&mb).enumerate() {
                        if (va - vb).abs() > self.pi_tolerance {
                            let ps = self.space.context_ps(&ctx_a);
                            return Some(PiViolation {
                                context_a: a,
                                context_b: b,
                                observers: sigma,
                                outcome: ps.decode(sigma, key).expect("key in range"),
                                lhs: va.clone(),
                                rhs: vb.clone(),
                            });
                        }
                    }
                }
            }
        }
        None
    }
}

/// Witness of a parameter-independence (no-signalling) failure.
#[derive(Clone, Debug)]
pub struct PiViolation {
    pub context_a: usize,
    pub context_b: usize,
    /// Observer positions of the shared observables.
    pub observers: ElementSet,
    pub outcome: Intuple,
    pub lhs: Rational,
    pub rhs: Rational,
}

/// The deterministic, parameter-independent distribution G^γ̃:
/// every context puts probability 1 on its restriction of γ̃.
pub fn deterministic_pi(space: &EventSpace, gamma: &Intuple) -> Result<MultiContextDistribution> {
    let omni = space.omni_ps();
    if gamma.support() != omni.universe() {
        return domain("γ̃ must assign an outcome to every observable");
    }
    let mut dists = Vec::with_capacity(space.n_contexts());
    for ctx in space.contexts() {
        let ps = space.context_ps(&ctx);
        let outcomes: Vec<u32> =
            ctx.iter().map(|&o| gamma.outcome_of(o).expect("full support")).collect();
        let at = Intuple::new(ps.universe(), outcomes);
        dists.push(DistVector::point_mass(ps, &at)?);
    }
    MultiContextDistribution::new(space.clone(), dists)
}

/// The Bell mixture Σ_γ̃ μ(γ̃) G^γ̃, computed by direct summation:
/// each context's distribution is the marginal of μ on that context.
pub fn bell_mixture(space: &EventSpace, mu: &DistVector) -> Result<MultiContextDistribution> {
    check_omni_probability(space, mu)?;
    let mut dists = Vec::with_capacity(space.n_contexts());
    for ctx in space.contexts() {
        let rho = space.context_set(&ctx);
        let values = mu.marginal(rho)?;
        dists.push(DistVector::probability(space.context_ps(&ctx), values)?);
    }
    MultiContextDistribution::new(space.clone(), dists)
}

/// The omni-joint projection: each context distribution is rebuilt from the
/// comeasurable multideviations of μ alone,
/// Q^{p̃_σ}_{P_p̃} = n_{∪M∖p̃} · Q^{p̃_σ}_μ, every other degree of freedom of
/// μ being ignored. Equals [`bell_mixture`] exactly.
pub fn project_omni(space: &EventSpace, mu: &DistVector) -> Result<MultiContextDistribution> {
    check_omni_probability(space, mu)?;
    let omni = space.omni_ps();
    let n_omni = omni.cardinality(omni.universe())?;
    let mut dists = Vec::with_capacity(space.n_contexts());
    for ctx in space.contexts() {
        let ps = space.context_ps(&ctx);
        let n_ctx = ps.cardinality(ps.universe())?;
        let scale = Rational::from_integer(BigInt::from(n_omni / n_ctx));
        let mut tables = Vec::with_capacity(1usize << ps.len());
        for mask in 0..(1u64 << ps.len()) {
            let sigma = ElementSet::from_mask(mask);
            let rho = ElementSet::from_indices(sigma.iter().map(|i| ctx[i]));
            let q = multidev_order(mu, rho)?;
            tables.push(q.into_iter().map(|v| v * &scale).collect());
        }
        let table = MultidevTable::from_parts(ps.clone(), tables)?;
        let f = crate::multidev::reconstruct(&table);
        dists.push(DistVector::probability(ps, f.values().to_vec())?);
    }
    MultiContextDistribution::new(space.clone(), dists)
}

fn check_omni_probability(space: &EventSpace, mu: &DistVector) -> Result<()> {
    if mu.product_set() != &space.omni_ps() {
        return domain("μ must live on the omni-joint product set of the space");
    }
    if !mu.is_probability() {
        return precondition("μ must be a probability distribution");
    }
    Ok(())
}

/// Outcome independence of an ordinary distribution: every multideviation
/// factorizes into its first-order parts,
/// n_B·Q^σ(x̃_σ) = Π_{i∈σ} (n_B·Q^{{i}}(x_i)).
pub fn check_outcome_independence(f: &DistVector) -> Result<bool> {
    if !f.is_probability() {
        return precondition("outcome independence is defined for probability distributions");
    }
    let ps = f.product_set();
    let n_b = Rational::from_integer(BigInt::from(ps.cardinality(ps.universe())?));
    let firsts: Vec<Vec<Rational>> = (0..ps.len())
        .map(|i| multidev_order(f, ElementSet::singleton(i)).expect("singleton order"))
        .collect();
    for sigma in ps.universe().subsets() {
        let q = multidev_order(f, sigma)?;
        for (key, x) in ps.intuples(sigma)?.enumerate() {
            let mut rhs = Rational::one();
            for (i, o) in x.pairs() {
                rhs *= &n_b * &firsts[i][o as usize];
            }
            if &n_b * &q[key] != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A term of a Bell inequality: one comeasurable set, a reference outcome
/// (or two-block coarse-graining), and an exact coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IneqTerm {
    pub rho: ElementSet,
    pub reference: Reference,
    pub coeff: Rational,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Reference {
    Outcome(Intuple),
    Lattice(LatticeIntuple),
}

/// A Bell inequality `constant + Σ coeff · Q ≥ 0` over the multideviations
/// (or Boolean multideviations) of observed statistics, optionally carrying
/// the omni-joint dependence function f it was generated from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BellInequality {
    space: EventSpace,
    constant: Rational,
    terms: Vec<IneqTerm>,
    omni_f: Option<DistVector>,
}

impl BellInequality {
    pub fn new(
        space: EventSpace,
        constant: Rational,
        terms: Vec<IneqTerm>,
        omni_f: Option<DistVector>,
    ) -> Result<Self> {
        for t in &terms {
            if t.rho.is_empty() {
                return domain("inequality terms must have nonempty ρ");
            }
            space.first_context_containing(t.rho)?;
            match &t.reference {
                Reference::Outcome(x) => {
                    if x.support() != t.rho {
                        return domain("reference support must equal ρ");
                    }
                    for (o, out) in x.pairs() {
                        if out >= space.observable_size(o) {
                            return domain("reference outcome out of range");
                        }
                    }
                }
                Reference::Lattice(a) => {
                    if a.support() != t.rho {
                        return domain("lattice reference support must equal ρ");
                    }
                }
            }
        }
        if let Some(f) = &omni_f {
            if f.product_set() != &space.omni_ps() {
                return domain("omni_f must live on the omni-joint product set");
            }
        }
        Ok(BellInequality { space, constant, terms, omni_f })
    }

    /// Builds the inequality Σ_γ f(γ̃)·μ(γ̃) ≥ 0 in coefficient form.
    ///
    /// The value against observed statistics is
    /// Σ_{ρ∈Ψ} n_{p̃∖ρ} Σ_{x̃_ρ} Q^ρ_f(x̃_ρ)·Q^ρ_{P_p̃}(x̃_ρ) with p̃ the
    /// first context containing ρ; the constant term is Q^∅_f. On all-binary
    /// spaces each ρ collapses onto the reference 1̃_ρ with coefficient
    /// 2^{|V|}·Q^ρ_f(1̃).
    pub fn from_omni_f(space: &EventSpace, f: DistVector) -> Result<Self> {
        let omni = space.omni_ps();
        if f.product_set() != &omni {
            return domain("f must live on the omni-joint product set");
        }
        let n_omni = omni.cardinality(omni.universe())?;
        let constant = f.total() * rat_recip(n_omni);
        let binary = space.all_binary();
        let mut terms = Vec::new();
        for rho in space.psi() {
            if rho.is_empty() {
                continue;
            }
            let ctx = space.context(space.first_context_containing(rho)?);
            let rho_ctx = space.context_set(&ctx);
            let n_out = omni.cardinality(rho_ctx.minus(rho))?;
            let q = multidev_order(&f, rho)?;
            if binary {
                let coeff = &q[0]
                    * Rational::from_integer(BigInt::from(n_out * (1u64 << rho.len())));
                if !coeff.is_zero() {
                    terms.push(IneqTerm {
                        rho,
                        reference: Reference::Outcome(Intuple::ones(rho)),
                        coeff,
                    });
                }
            } else {
                let scale = Rational::from_integer(BigInt::from(n_out));
                for (key, x) in omni.intuples(rho)?.enumerate() {
                    let coeff = &q[key] * &scale;
                    if !coeff.is_zero() {
                        terms.push(IneqTerm { rho, reference: Reference::Outcome(x), coeff });
                    }
                }
            }
        }
        BellInequality::new(space.clone(), constant, terms, Some(f))
    }

    pub fn space(&self) -> &EventSpace {
        &self.space
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn terms(&self) -> &[IneqTerm] {
        &self.terms
    }

    pub fn omni_f(&self) -> Option<&DistVector> {
        self.omni_f.as_ref()
    }

    pub fn with_omni_f(mut self, f: DistVector) -> Result<Self> {
        if f.product_set() != &self.space.omni_ps() {
            return domain("omni_f must live on the omni-joint product set");
        }
        self.omni_f = Some(f);
        Ok(self)
    }

    /// Evaluates the inequality against observed statistics. Nonnegative
    /// means satisfied. Refused when the statistics signal beyond the
    /// distribution's tolerance, since the coefficient form presumes
    /// parameter independence.
    pub fn evaluate(&self, d: &MultiContextDistribution) -> Result<Rational> {
        if d.space() != &self.space {
            return domain("distribution and inequality live on different spaces");
        }
        if let Some(w) = d.check_parameter_independence() {
            return precondition(format!(
                "parameter independence fails between contexts {} and {} on {:?}: {} vs {}",
                w.context_a, w.context_b, w.observers, w.lhs, w.rhs
            ));
        }
        let mut value = self.constant.clone();
        for t in &self.terms {
            let ctx_idx = self.space.first_context_containing(t.rho)?;
            let dist = d.context_dist(ctx_idx);
            let sigma = self.space.observer_positions(t.rho);
            let q = match &t.reference {
                Reference::Outcome(x) => {
                    // map the reference from observable indices to observer
                    // positions inside the context product set
                    let ctx_ref = Intuple::new(sigma, x.outcomes().to_vec());
                    let order = multidev_order(dist, sigma)?;
                    let key = dist.product_set().encode(&ctx_ref)?;
                    order[key].clone()
                }
                Reference::Lattice(a) => {
                    let ctx_alpha = LatticeIntuple::new(
                        dist.product_set(),
                        sigma,
                        a.blocks().to_vec(),
                    )?;
                    boolean_multidev(dist, sigma, &ctx_alpha)?
                }
            };
            value += &t.coeff * q;
        }
        Ok(value)
    }

    /// Value on the deterministic vertex G^γ̃, computed directly through
    /// seed-function kernels. Equal to `evaluate(deterministic_pi(γ̃))` but
    /// without materializing the distribution or re-checking parameter
    /// independence (the vertices satisfy it by construction).
    pub fn evaluate_on_vertex(&self, gamma: &Intuple) -> Result<Rational> {
        let omni = self.space.omni_ps();
        if gamma.support() != omni.universe() {
            return domain("vertex evaluation needs a full-support γ̃");
        }
        let mut value = self.constant.clone();
        for t in &self.terms {
            let ctx_idx = self.space.first_context_containing(t.rho)?;
            let ctx = self.space.context(ctx_idx);
            let ps = self.space.context_ps(&ctx);
            let sigma = self.space.observer_positions(t.rho);
            let gamma_sigma = Intuple::new(
                sigma,
                t.rho.iter().map(|o| gamma.outcome_of(o).expect("full support")).collect(),
            );
            let q = match &t.reference {
                Reference::Outcome(x) => {
                    let ctx_ref = Intuple::new(sigma, x.outcomes().to_vec());
                    crate::multidev::msf(&ps, sigma, &ctx_ref, &gamma_sigma)?
                }
                Reference::Lattice(a) => {
                    let mut sign = 1i64;
                    for (slot, o) in t.rho.iter().enumerate() {
                        let out = gamma.outcome_of(o).expect("full support");
                        if a.blocks()[slot] & (1u64 << out) == 0 {
                            sign = -sign;
                        }
                    }
                    Rational::new(BigInt::from(sign), BigInt::from(1u64 << ps.len()))
                }
            };
            value += &t.coeff * q;
        }
        Ok(value)
    }

    /// Canonical comparison form: on all-binary spaces every reference is
    /// folded onto 1̃_ρ (lattice blocks first rewritten as outcomes), then
    /// denominators are cleared and the common integer factor removed. Only
    /// positive scalings are applied, so the ≥ 0 direction is preserved.
    pub fn canonical_form(&self) -> CanonicalIneq {
        let binary = self.space.all_binary();
        let mut merged: std::collections::BTreeMap<(u64, CanonicalRef), Rational> =
            std::collections::BTreeMap::new();
        for t in &self.terms {
            let (reference, coeff) = if binary {
                let outcomes: Vec<u32> = match &t.reference {
                    Reference::Outcome(x) => x.outcomes().to_vec(),
                    // in a binary space a proper nonempty block is a singleton
                    Reference::Lattice(a) => {
                        a.blocks().iter().map(|&b| if b == 0b01 { 0 } else { 1 }).collect()
                    }
                };
                let flips = outcomes.iter().filter(|&&o| o != 0).count();
                let sign = if flips % 2 == 0 { 1 } else { -1 };
                (
                    CanonicalRef::Outcome(vec![0; t.rho.len()]),
                    &t.coeff * Rational::from_integer(BigInt::from(sign)),
                )
            } else {
                match &t.reference {
                    Reference::Outcome(x) => {
                        (CanonicalRef::Outcome(x.outcomes().to_vec()), t.coeff.clone())
                    }
                    Reference::Lattice(a) => {
                        // flip blocks so each contains outcome 0
                        let mut sign = 1i64;
                        let mut blocks = Vec::with_capacity(a.blocks().len());
                        for (slot, o) in t.rho.iter().enumerate() {
                            let size = self.space.observable_size(o);
                            let full =
                                if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
                            let b = a.blocks()[slot];
                            if b & 1 == 0 {
                                sign = -sign;
                                blocks.push(full & !b);
                            } else {
                                blocks.push(b);
                            }
                        }
                        (
                            CanonicalRef::Lattice(blocks),
                            &t.coeff * Rational::from_integer(BigInt::from(sign)),
                        )
                    }
                }
            };
            *merged.entry((t.rho.mask(), reference)).or_insert_with(Rational::zero) += coeff;
        }
        merged.retain(|_, c| !c.is_zero());

        // clear denominators, divide by the common factor
        let mut lcm = self.constant.denom().clone();
        for c in merged.values() {
            lcm = lcm.lcm(c.denom());
        }
        let lcm_rat = Rational::from_integer(lcm);
        let constant = (&self.constant * &lcm_rat).to_integer();
        let mut terms: Vec<(u64, CanonicalRef, BigInt)> = merged
            .into_iter()
            .map(|((m, r), c)| (m, r, (c * &lcm_rat).to_integer()))
            .collect();
        let mut g = constant.abs();
        for (_, _, c) in &terms {
            g = g.gcd(&c.abs());
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        let constant = constant / &g;
        for (_, _, c) in &mut terms {
            *c = &*c / &g;
        }
        CanonicalIneq { constant, terms }
    }
}

/// Scale-free integer form of an inequality, usable as a set/map key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonicalIneq {
    pub constant: BigInt,
    pub terms: Vec<(u64, CanonicalRef, BigInt)>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CanonicalRef {
    Outcome(Vec<u32>),
    Lattice(Vec<u64>),
}

/// Free-function form of [`BellInequality::evaluate`].
pub fn evaluate_inequality(
    ineq: &BellInequality,
    d: &MultiContextDistribution,
) -> Result<Rational> {
    ineq.evaluate(d)
}
