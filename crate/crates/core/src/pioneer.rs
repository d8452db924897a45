//! Pioneer sets: a combinatorial family of tight Bell inequalities for any
//! number of observers choosing between two binary observables.
//!
//! A pioneer set is a pair (Z, S_Z): a partition Z of the observers and,
//! for each block z, a profile family S_z ⊆ P(z) whose nonempty members
//! cover z and chain together through nonempty intersections (blocks of one
//! observer are unconstrained). Membership of the defining set 𝔛 is decided
//! per block by the odd-out transform,
//!
//! ```text
//! (σ, ρ) ∈ 𝔛  ⟺  ∀z ∈ Z: (σ∩z ∈ S_z*  ↔  |ρ∩z| odd)
//! ```
//!
//! where labels (σ, ρ) name omni-joint outcomes: observer i reads outcome 2
//! on p_i iff i ∈ σ⊖ρ and on q_i iff i ∈ ρ. The top-level case Z = {V}
//! yields the even/odd inequalities, which constrain only the full-order
//! multideviations of each context.

use crate::algebra::{rat, rat_int, ElementSet, Intuple, Rational};
use crate::contexts::{BellInequality, EventSpace, IneqTerm, Reference};
use crate::error::{domain, refused, Result};
use crate::multidev::{DistVector, LatticeIntuple};
use num_traits::Zero;
use std::collections::BTreeMap;

/// The odd-out transform S* = { σ ⊆ z : |S ∩ P(σ)| is odd }. An involution.
pub fn odd_out(s: &[ElementSet], z: ElementSet) -> Result<Vec<ElementSet>> {
    for m in s {
        if !m.is_subset_of(z) {
            return domain(format!("family member {m:?} is not a subset of the block {z:?}"));
        }
    }
    let mut out = Vec::new();
    for sigma in z.subsets() {
        let hits = s.iter().filter(|m| m.is_subset_of(sigma)).count();
        if hits % 2 == 1 {
            out.push(sigma);
        }
    }
    Ok(out)
}

/// The chaining condition on a profile family: for every pair i ≠ j in z
/// there is a sequence of members of S from one containing i to one
/// containing j in which consecutive members intersect. Vacuous for
/// |z| ≤ 1. Equivalently, for |z| ≥ 2: the nonempty members cover z and
/// form a single component under nonempty intersection; ∅ may be present
/// and only contributes to odd-out parity.
pub fn is_connected(s: &[ElementSet], z: ElementSet) -> bool {
    if z.len() <= 1 {
        return true;
    }
    let members: Vec<ElementSet> = s.iter().copied().filter(|m| !m.is_empty()).collect();
    let covered = members.iter().fold(ElementSet::EMPTY, |a, m| a.union(*m));
    if !z.is_subset_of(covered) {
        return false;
    }
    // single component under nonempty intersection
    let mut comp = vec![usize::MAX; members.len()];
    let mut stack = vec![0usize];
    comp[0] = 0;
    while let Some(k) = stack.pop() {
        for j in 0..members.len() {
            if comp[j] == usize::MAX && !members[k].intersect(members[j]).is_empty() {
                comp[j] = 0;
                stack.push(j);
            }
        }
    }
    comp.iter().all(|&c| c == 0)
}

/// A pioneer-set specification: the observer partition and one profile
/// family per block. Blocks are kept in ascending-minimum order and family
/// members sorted, so serialization and enumeration are deterministic.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PioneerSpec {
    partition: Vec<ElementSet>,
    families: Vec<Vec<ElementSet>>,
}

impl PioneerSpec {
    /// Validates the partition and the per-block chaining condition.
    pub fn new(partition: Vec<ElementSet>, families: Vec<Vec<ElementSet>>) -> Result<Self> {
        let spec = Self::new_unvalidated(partition, families)?;
        for (z, fam) in spec.partition.iter().zip(&spec.families) {
            if !is_connected(fam, *z) {
                return domain(format!("family for block {z:?} fails the chaining condition"));
            }
        }
        Ok(spec)
    }

    /// Builds the pair without the chaining check. Deliberately broken
    /// families built this way still define a membership set, which is what
    /// the tightness verifier and the connectivity walker are tested
    /// against.
    pub fn new_unvalidated(
        mut partition: Vec<ElementSet>,
        families: Vec<Vec<ElementSet>>,
    ) -> Result<Self> {
        if partition.is_empty() || partition.len() != families.len() {
            return domain("partition and family lists must be nonempty and aligned");
        }
        let mut union = ElementSet::EMPTY;
        for z in &partition {
            if z.is_empty() {
                return domain("partition blocks must be nonempty");
            }
            if !union.intersect(*z).is_empty() {
                return domain("partition blocks must be disjoint");
            }
            union = union.union(*z);
        }
        if union != ElementSet::full(union.len()) {
            return domain("partition must cover observers 0..|V| contiguously");
        }
        let mut families = families;
        for (z, fam) in partition.iter().zip(families.iter_mut()) {
            for m in fam.iter() {
                if !m.is_subset_of(*z) {
                    return domain(format!("family member {m:?} escapes its block {z:?}"));
                }
            }
            fam.sort();
            fam.dedup();
        }
        // sort blocks (with their families) by minimum element
        let mut order: Vec<usize> = (0..partition.len()).collect();
        order.sort_by_key(|&k| partition[k].mask().trailing_zeros());
        let partition_sorted: Vec<ElementSet> = order.iter().map(|&k| partition[k]).collect();
        let families_sorted: Vec<Vec<ElementSet>> =
            order.iter().map(|&k| families[k].clone()).collect();
        partition = partition_sorted;
        Ok(PioneerSpec { partition, families: families_sorted })
    }

    /// Top-level spec Z = {V} from a single profile family.
    pub fn top_level(observers: usize, family: Vec<ElementSet>) -> Result<Self> {
        PioneerSpec::new(vec![ElementSet::full(observers)], vec![family])
    }

    pub fn observers(&self) -> usize {
        self.partition.iter().map(|z| z.len()).sum()
    }

    pub fn partition(&self) -> &[ElementSet] {
        &self.partition
    }

    pub fn families(&self) -> &[Vec<ElementSet>] {
        &self.families
    }

    pub fn is_top_level(&self) -> bool {
        self.partition.len() == 1
    }

    pub fn is_valid(&self) -> bool {
        self.partition.iter().zip(&self.families).all(|(z, fam)| is_connected(fam, *z))
    }

    /// Odd-out transforms of every block family.
    pub fn star_families(&self) -> Vec<Vec<ElementSet>> {
        self.partition
            .iter()
            .zip(&self.families)
            .map(|(z, fam)| odd_out(fam, *z).expect("members within block"))
            .collect()
    }
}

/// The membership set 𝔛 of a pioneer spec, as (σ, ρ) labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GammaSet {
    observers: usize,
    members: Vec<(ElementSet, ElementSet)>,
}

impl GammaSet {
    pub fn observers(&self) -> usize {
        self.observers
    }

    pub fn members(&self) -> &[(ElementSet, ElementSet)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, sigma: ElementSet, rho: ElementSet) -> bool {
        self.members.binary_search(&(sigma, rho)).is_ok()
    }

    /// Encoded omni-joint indices of the members in the binary space 2_V.
    pub fn omni_indices(&self, space: &EventSpace) -> Result<Vec<usize>> {
        let omni = space.omni_ps();
        let mut out = Vec::with_capacity(self.members.len());
        for &(sigma, rho) in &self.members {
            out.push(omni.encode(&label_to_intuple(space, sigma, rho)?)?);
        }
        Ok(out)
    }

    /// The indicator function of the member set on the omni-joint space.
    pub fn indicator(&self, space: &EventSpace) -> Result<DistVector> {
        let omni = space.omni_ps();
        let n = omni.cardinality(omni.universe())? as usize;
        let mut values = vec![Rational::zero(); n];
        for idx in self.omni_indices(space)? {
            values[idx] = rat_int(1);
        }
        DistVector::function(omni, values)
    }
}

/// (σ, ρ) label to the omni-joint intuple of the binary space:
/// p_i reads 2 iff i ∈ σ⊖ρ, q_i reads 2 iff i ∈ ρ.
pub fn label_to_intuple(
    space: &EventSpace,
    sigma: ElementSet,
    rho: ElementSet,
) -> Result<Intuple> {
    let v = space.n_observers();
    if !space.all_binary() || space.n_observables() != 2 * v {
        return domain("labels require the binary space 2_V");
    }
    let p_twos = sigma.symm_diff(rho);
    let mut outcomes = vec![0u32; 2 * v];
    for i in 0..v {
        outcomes[space.observable_at(i, 0)] = p_twos.contains(i) as u32;
        outcomes[space.observable_at(i, 1)] = rho.contains(i) as u32;
    }
    Ok(Intuple::new(ElementSet::full(2 * v), outcomes))
}

/// Inverse of [`label_to_intuple`].
pub fn intuple_to_label(space: &EventSpace, gamma: &Intuple) -> Result<(ElementSet, ElementSet)> {
    let v = space.n_observers();
    if gamma.support() != ElementSet::full(2 * v) {
        return domain("expected a full-support omni intuple");
    }
    let mut p_twos = ElementSet::EMPTY;
    let mut rho = ElementSet::EMPTY;
    for i in 0..v {
        if gamma.outcome_of(space.observable_at(i, 0)).unwrap() == 1 {
            p_twos = p_twos.insert(i);
        }
        if gamma.outcome_of(space.observable_at(i, 1)).unwrap() == 1 {
            rho = rho.insert(i);
        }
    }
    Ok((p_twos.symm_diff(rho), rho))
}

/// Builds 𝔛 by per-block membership: (σ∩z, ρ∩z) ∈ 𝔛_z per block z.
pub fn gamma_set(spec: &PioneerSpec) -> GammaSet {
    let v = spec.observers();
    let stars = spec.star_families();
    let full = ElementSet::full(v);
    let mut members = Vec::new();
    for sigma in full.subsets() {
        for rho in full.subsets() {
            let inside = spec.partition.iter().zip(&stars).all(|(z, star)| {
                let mu = sigma.intersect(*z);
                let nu = rho.intersect(*z);
                let in_star = star.binary_search(&mu).is_ok();
                in_star == (nu.len() % 2 == 1)
            });
            if inside {
                members.push((sigma, rho));
            }
        }
    }
    GammaSet { observers: v, members }
}

/// Whether the discrete differential 𝔎(μ, i) is {i} (true) or ∅ (false):
/// exactly one of μ, μ⊖{i} lies in the block's odd-out family.
fn kappa(star: &[ElementSet], mu: ElementSet, i: usize) -> bool {
    let a = star.binary_search(&mu).is_ok();
    let b = star.binary_search(&mu.symm_diff(ElementSet::singleton(i))).is_ok();
    a != b
}

/// Walks the dependence equations over 𝔛: each single-observer step moves
/// (σ, ρ) to (σ⊖{i}, ρ⊖𝔎(σ∩z, i)), which stays inside 𝔛 and forces equal
/// f-values. Returns true iff the walk reaches every member from the first,
/// i.e. the dependence function is forced constant on 𝔛.
pub fn connectivity_verify(spec: &PioneerSpec) -> bool {
    let v = spec.observers();
    let gs = gamma_set(spec);
    if gs.is_empty() {
        return false;
    }
    let stars = spec.star_families();
    let block_of: Vec<usize> = (0..v)
        .map(|i| spec.partition.iter().position(|z| z.contains(i)).expect("partition covers V"))
        .collect();
    let index: BTreeMap<(ElementSet, ElementSet), usize> =
        gs.members().iter().copied().zip(0..).collect();
    let mut seen = vec![false; gs.len()];
    seen[0] = true;
    let mut stack = vec![gs.members()[0]];
    let mut reached = 1usize;
    while let Some((sigma, rho)) = stack.pop() {
        for i in 0..v {
            let b = block_of[i];
            let z = spec.partition[b];
            let mu = sigma.intersect(z);
            let step = ElementSet::singleton(i);
            let nu_step = if kappa(&stars[b], mu, i) { step } else { ElementSet::EMPTY };
            let next = (sigma.symm_diff(step), rho.symm_diff(nu_step));
            let k = *index.get(&next).expect("moves stay inside the member set");
            if !seen[k] {
                seen[k] = true;
                reached += 1;
                stack.push(next);
            }
        }
    }
    reached == gs.len()
}

/// The inequality of a pioneer spec from the closed-form coefficient
/// formula. The reference scale is the dependence function f = 1 on 𝔛:
/// the constant is Q^∅_f = 2^{−|Z|} and the coefficient on the
/// comeasurable set p̃_{σ∖ρ} q̃_ρ is 2^{|V|} times
///
/// ```text
/// (1/2^{|Z|}) Π_{z∈Z} ( δ_{z∩σ=∅} + δ_{z⊆σ}·(1/2^{|z|})·
///                       Σ_{μ⊆z} (−1)^{|μ∖ρ|} (−1)^{δ_{μ∈S_z*}} )
/// ```
///
/// so σ ranges over unions of blocks and the attached omni-joint function
/// is exactly the indicator of 𝔛.
pub fn coefficients(spec: &PioneerSpec) -> Result<BellInequality> {
    let v = spec.observers();
    let space = EventSpace::binary(v);
    let stars = spec.star_families();
    let blocks = spec.partition();
    let n_blocks = blocks.len();
    let constant = rat(1, 1 << n_blocks);
    let scale = rat_int(1i64 << v);

    let mut terms = Vec::new();
    // σ ranges over unions of blocks; every other σ has zero coefficient
    for choice in 0u64..(1u64 << n_blocks) {
        if choice == 0 {
            continue;
        }
        let sigma = (0..n_blocks)
            .filter(|&b| choice & (1 << b) != 0)
            .fold(ElementSet::EMPTY, |a, b| a.union(blocks[b]));
        for rho in sigma.subsets() {
            let mut qf = rat(1, 1 << n_blocks);
            for (b, z) in blocks.iter().enumerate() {
                if choice & (1 << b) == 0 {
                    continue;
                }
                let mut acc = 0i64;
                for mu in z.subsets() {
                    let mut sign = 1i64;
                    if mu.minus(rho).len() % 2 == 1 {
                        sign = -sign;
                    }
                    if stars[b].binary_search(&mu).is_ok() {
                        sign = -sign;
                    }
                    acc += sign;
                }
                qf *= rat(acc, 1 << z.len());
            }
            if qf.is_zero() {
                continue;
            }
            // observables: p_i for i ∈ σ∖ρ, q_i for i ∈ ρ
            let mut obs = ElementSet::EMPTY;
            for i in sigma.minus(rho).iter() {
                obs = obs.insert(space.observable_at(i, 0));
            }
            for i in rho.iter() {
                obs = obs.insert(space.observable_at(i, 1));
            }
            terms.push(IneqTerm {
                rho: obs,
                reference: Reference::Outcome(Intuple::ones(obs)),
                coeff: qf * &scale,
            });
        }
    }
    terms.sort_by_key(|t| t.rho.mask());
    let f = gamma_set(spec).indicator(&space)?;
    BellInequality::new(space, constant, terms, Some(f))
}

/// One of the particularly simple even/odd inequalities, indexed by
/// φ ⊆ V and m ∈ {0, 1}:
///
/// ```text
/// 1/2 + (−1)^m ( 2^{|V|−1} Q^{p̃_{V∖φ} q̃_φ} − Σ_{ρ⊆V} Q^{p̃_{V∖ρ} q̃_ρ} ) ≥ 0
/// ```
///
/// For |V| = 2 these are the eight CHSH inequalities.
pub fn simplest_inequality(observers: usize, phi: ElementSet, m: u8) -> Result<BellInequality> {
    if m > 1 {
        return domain("m must be 0 or 1");
    }
    let space = EventSpace::binary(observers);
    let full = ElementSet::full(observers);
    if !phi.is_subset_of(full) {
        return domain("φ must be a set of observers");
    }
    let sign = if m == 0 { 1 } else { -1 };
    let mut terms = Vec::new();
    for rho in full.subsets() {
        let mut obs = ElementSet::EMPTY;
        for i in full.minus(rho).iter() {
            obs = obs.insert(space.observable_at(i, 0));
        }
        for i in rho.iter() {
            obs = obs.insert(space.observable_at(i, 1));
        }
        let coeff = if rho == phi {
            rat_int(sign * ((1i64 << (observers - 1)) - 1))
        } else {
            rat_int(-sign)
        };
        terms.push(IneqTerm {
            rho: obs,
            reference: Reference::Outcome(Intuple::ones(obs)),
            coeff,
        });
    }
    terms.sort_by_key(|t| t.rho.mask());
    BellInequality::new(space, rat(1, 2), terms, None)
}

/// Pioneer-set counts for one observer number.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PioneerCounts {
    pub total: u64,
    pub top_level: u64,
}

const MAX_ENUMERATION_OBSERVERS: usize = 4;

/// All valid profile families over a block, in a fixed order (families are
/// encoded as bitmasks over the subset list of the block, ascending).
fn block_families(z: ElementSet) -> Vec<Vec<ElementSet>> {
    let subs: Vec<ElementSet> = z.subsets().collect();
    let mut out = Vec::new();
    for fam_mask in 0u64..(1u64 << subs.len()) {
        let fam: Vec<ElementSet> = subs
            .iter()
            .enumerate()
            .filter(|(k, _)| fam_mask & (1 << k) != 0)
            .map(|(_, &s)| s)
            .collect();
        if is_connected(&fam, z) {
            out.push(fam);
        }
    }
    out
}

fn connected_family_count(block_size: usize) -> u64 {
    block_families(ElementSet::full(block_size)).len() as u64
}

/// Set partitions of {0..n} in restricted-growth order: each element joins
/// an existing block or opens a new one, in index order.
fn set_partitions(n: usize) -> Vec<Vec<ElementSet>> {
    let mut out = Vec::new();
    let mut current: Vec<ElementSet> = Vec::new();
    fn rec(i: usize, n: usize, current: &mut Vec<ElementSet>, out: &mut Vec<Vec<ElementSet>>) {
        if i == n {
            out.push(current.clone());
            return;
        }
        for k in 0..current.len() {
            current[k] = current[k].insert(i);
            rec(i + 1, n, current, out);
            current[k] = current[k].remove(i);
        }
        current.push(ElementSet::singleton(i));
        rec(i + 1, n, current, out);
        current.pop();
    }
    rec(0, n, &mut current, &mut out);
    out
}

/// Counts pioneer sets: the total over all partitions and the top-level
/// (Z = {V}) count. Refused above |V| = 4; the |V| = 5 total is already
/// ~4.3·10⁹.
pub fn count_pioneers(observers: usize) -> Result<PioneerCounts> {
    if observers == 0 {
        return domain("need at least one observer");
    }
    if observers > MAX_ENUMERATION_OBSERVERS {
        return refused(format!(
            "pioneer counts for |V| = {observers} are beyond desk scale (|V| ≤ {MAX_ENUMERATION_OBSERVERS})"
        ));
    }
    let counts_by_size: Vec<u64> =
        (0..=observers).map(|s| if s == 0 { 0 } else { connected_family_count(s) }).collect();
    let mut total = 0u64;
    for partition in set_partitions(observers) {
        let mut prod = 1u64;
        for z in &partition {
            prod *= counts_by_size[z.len()];
        }
        total += prod;
    }
    Ok(PioneerCounts { total, top_level: counts_by_size[observers] })
}

/// Enumerates every pioneer spec for |V| observers, in deterministic order:
/// partitions in restricted-growth order, block families in encoded order,
/// combined odometer-style (last block fastest).
pub fn enumerate_pioneers(observers: usize, top_level_only: bool) -> Result<Vec<PioneerSpec>> {
    if observers == 0 {
        return domain("need at least one observer");
    }
    if observers > MAX_ENUMERATION_OBSERVERS {
        return refused(format!(
            "pioneer enumeration for |V| = {observers} is beyond desk scale (|V| ≤ {MAX_ENUMERATION_OBSERVERS})"
        ));
    }
    let mut out = Vec::new();
    for partition in set_partitions(observers) {
        if top_level_only && partition.len() != 1 {
            continue;
        }
        let options: Vec<Vec<Vec<ElementSet>>> =
            partition.iter().map(|&z| block_families(z)).collect();
        let mut idx = vec![0usize; partition.len()];
        'partition: loop {
            let families: Vec<Vec<ElementSet>> =
                idx.iter().enumerate().map(|(b, &k)| options[b][k].clone()).collect();
            out.push(
                PioneerSpec::new(partition.clone(), families)
                    .expect("enumerated families are valid"),
            );
            // odometer increment, last block fastest
            let mut b = partition.len();
            while b > 0 {
                b -= 1;
                idx[b] += 1;
                if idx[b] < options[b].len() {
                    continue 'partition;
                }
                idx[b] = 0;
            }
            break;
        }
    }
    Ok(out)
}

/// Lifts a binary-space inequality to an arbitrary event space.
///
/// For each observer a pair of distinct target observables (p_i, q_i) is
/// chosen, and for every chosen observable a two-block coarse-graining
/// α ⊂ N: target outcomes inside α play binary outcome 1, the rest play 2.
/// Coefficients carry over unchanged with lattice references; the lifted
/// dependence function is f*(γ̃) = f(χ(γ̃)).
pub fn lift(
    source: &BellInequality,
    target: &EventSpace,
    p_choice: &[u32],
    q_choice: &[u32],
    alpha: &BTreeMap<u32, u64>,
) -> Result<BellInequality> {
    let src_space = source.space();
    let v = src_space.n_observers();
    if !src_space.all_binary() || src_space.n_observables() != 2 * v {
        return domain("lift sources live on the binary space 2_V");
    }
    if target.n_observers() != v {
        return domain("target space must have the same number of observers");
    }
    if p_choice.len() != v || q_choice.len() != v {
        return domain("one (p_i, q_i) observable pair required per observer");
    }
    // resolve choices to dense indices and validate
    let mut p_idx = Vec::with_capacity(v);
    let mut q_idx = Vec::with_capacity(v);
    for i in 0..v {
        let p = target.observable_index(p_choice[i])?;
        let q = target.observable_index(q_choice[i])?;
        if target.owner_of(p) != i || target.owner_of(q) != i {
            return domain(format!("observables {} / {} do not belong to observer {i}", p_choice[i], q_choice[i]));
        }
        if p == q {
            return domain(format!("observer {i} needs two distinct observables (p_i ≠ q_i)"));
        }
        p_idx.push(p);
        q_idx.push(q);
    }
    let mut alpha_mask = vec![0u64; target.n_observables()];
    for (&o, &idx) in p_choice.iter().chain(q_choice.iter()).zip(p_idx.iter().chain(&q_idx)) {
        let size = target.observable_size(idx);
        let full = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
        let mask = *alpha.get(&o).ok_or_else(|| {
            crate::error::Error::Domain(format!("missing α block for observable {o}"))
        })?;
        if mask == 0 || mask & !full != 0 || mask == full {
            return domain(format!("α block for observable {o} must be nonempty and proper"));
        }
        alpha_mask[idx] = mask;
    }

    // source observable index -> target observable index
    let map_obs = |src: usize| -> usize {
        let owner = src_space.owner_of(src);
        if src == src_space.observable_at(owner, 0) {
            p_idx[owner]
        } else {
            q_idx[owner]
        }
    };

    let target_ps = target.omni_ps();
    let mut terms = Vec::with_capacity(source.terms().len());
    for t in source.terms() {
        let rho_t = ElementSet::from_indices(t.rho.iter().map(map_obs));
        // binary reference outcomes select α or its complement
        let outcomes: Vec<u32> = match &t.reference {
            Reference::Outcome(x) => x.outcomes().to_vec(),
            Reference::Lattice(a) => {
                a.blocks().iter().map(|&b| if b == 0b01 { 0 } else { 1 }).collect()
            }
        };
        let mut blocks = Vec::with_capacity(rho_t.len());
        for o in rho_t.iter() {
            let src_slot = t
                .rho
                .iter()
                .position(|s| map_obs(s) == o)
                .expect("observable came from the source term");
            let size = target.observable_size(o);
            let full = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
            let base = alpha_mask[o];
            blocks.push(if outcomes[src_slot] == 0 { base } else { full & !base });
        }
        terms.push(IneqTerm {
            rho: rho_t,
            reference: Reference::Lattice(LatticeIntuple::new(&target_ps, rho_t, blocks)?),
            coeff: t.coeff.clone(),
        });
    }

    let omni_f = match source.omni_f() {
        None => None,
        Some(f) => {
            let src_ps = src_space.omni_ps();
            let n = target_ps.cardinality(target_ps.universe())? as usize;
            let mut values = Vec::with_capacity(n);
            for gamma in target_ps.intuples(target_ps.universe())? {
                let mut src_outcomes = vec![0u32; 2 * v];
                for i in 0..v {
                    for (slot, &tgt) in [p_idx[i], q_idx[i]].iter().enumerate() {
                        let out = gamma.outcome_of(tgt).expect("full support");
                        let inside = alpha_mask[tgt] & (1u64 << out) != 0;
                        src_outcomes[src_space.observable_at(i, slot)] =
                            if inside { 0 } else { 1 };
                    }
                }
                let chi = Intuple::new(ElementSet::full(2 * v), src_outcomes);
                values.push(f.value(src_ps.encode(&chi)?).clone());
            }
            Some(DistVector::function(target_ps, values)?)
        }
    };

    BellInequality::new(target.clone(), source.constant().clone(), terms, omni_f)
}

/// Whether a ±1 assignment on the 2^|V| contexts (indexed by the set ρ of
/// observers measuring their second observable) can be generated by signing
/// each observable and multiplying the adjacent signs at each vertex:
/// v(ρ) = Π_i s_{i,[i∈ρ]}. Assignments that cannot correspond to even/odd
/// inequalities.
pub fn hypercube_realizability(assignment: &[i8], observers: usize) -> Result<bool> {
    if assignment.len() != 1usize << observers {
        return domain(format!(
            "need one ±1 per context: expected {}, got {}",
            1usize << observers,
            assignment.len()
        ));
    }
    if assignment.iter().any(|&v| v != 1 && v != -1) {
        return domain("assignment values must be ±1");
    }
    let base = assignment[0];
    // t_i = v({i})·v(∅); realizable iff v(ρ) = v(∅)·Π_{i∈ρ} t_i throughout
    let t: Vec<i8> = (0..observers).map(|i| assignment[1 << i] * base).collect();
    for rho in 0usize..(1 << observers) {
        let mut predicted = base;
        for (i, &ti) in t.iter().enumerate() {
            if rho & (1 << i) != 0 {
                predicted *= ti;
            }
        }
        if predicted != assignment[rho] {
            return Ok(false);
        }
    }
    Ok(true)
}
