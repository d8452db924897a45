//! Exact verification of tight Bell inequalities.
//!
//! A candidate set Γ of omni-joint outcomes defines a tight Bell inequality
//! iff a dependence function f supported exactly on Γ exists whose
//! multideviations vanish on every non-comeasurable order, f is positive on
//! Γ, and f is unique up to scale. The vanishing condition collapses into
//! one linear equation per observer, observable pair and omni outcome:
//!
//! ```text
//! n_p n_q f(γ̃) − n_q f^{p}(γ̃) − n_p f^{q}(γ̃) + f^{pq}(γ̃) = 0
//! ```
//!
//! with f^σ summing f over the outcomes of the observables in σ, the other
//! coordinates held at γ̃. Restricted to unknowns on Γ (f ≡ 0 elsewhere),
//! the verdict is read off the exact rational nullspace: dimension one, no
//! zero entry, single sign — tight; anything else names the failing clause.

use crate::algebra::{rat_int, ElementSet, Intuple, Rational};
use crate::contexts::{BellInequality, CanonicalIneq, EventSpace};
use crate::error::{domain, refused, Result};
use crate::multidev::DistVector;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Where a system row came from: the observer, its observable pair, and the
/// omni outcome instantiating the equation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RowTag {
    pub observer: usize,
    pub p: usize,
    pub q: usize,
    pub gamma: usize,
}

/// A sparse exact linear system over unknowns indexed by Γ members.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    columns: Vec<usize>,
    rows: Vec<(Vec<(usize, Rational)>, RowTag)>,
}

impl LinearSystem {
    pub fn n_unknowns(&self) -> usize {
        self.columns.len()
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Omni-joint indices of the unknowns, ascending.
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn row_tags(&self) -> impl Iterator<Item = &RowTag> {
        self.rows.iter().map(|(_, t)| t)
    }
}

/// Builds the dependence system for Γ (given as omni-joint indices): one row
/// per (observer, observable pair, omni outcome) instance, restricted to the
/// Γ columns; rows whose restriction vanishes identically are dropped.
pub fn build_system(space: &EventSpace, gamma: &[usize]) -> Result<LinearSystem> {
    if gamma.is_empty() {
        return domain("Γ must be nonempty");
    }
    let omni = space.omni_ps();
    let n_omni = omni.cardinality(omni.universe())? as usize;
    let mut columns: Vec<usize> = gamma.to_vec();
    columns.sort_unstable();
    columns.dedup();
    if let Some(&bad) = columns.iter().find(|&&i| i >= n_omni) {
        return domain(format!("Γ member {bad} outside the omni-joint space"));
    }
    let col_of: BTreeMap<usize, usize> =
        columns.iter().copied().enumerate().map(|(k, i)| (i, k)).collect();

    // strides for single-coordinate surgery on encoded indices
    let sizes: Vec<usize> = omni.sizes().iter().map(|&s| s as usize).collect();
    let mut strides = vec![1usize; sizes.len()];
    for i in (0..sizes.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * sizes[i + 1];
    }

    let mut rows = Vec::new();
    for i in 0..space.n_observers() {
        let m = space.observers()[i].observables.len();
        for a in 0..m {
            for b in (a + 1)..m {
                let p = space.observable_at(i, a);
                let q = space.observable_at(i, b);
                let n_p = sizes[p];
                let n_q = sizes[q];
                for g in 0..n_omni {
                    let gp = (g / strides[p]) % n_p;
                    let gq = (g / strides[q]) % n_q;
                    let base = g - gp * strides[p] - gq * strides[q];
                    let mut entries: Vec<(usize, Rational)> = Vec::new();
                    for u in 0..n_p {
                        let cu = if u == gp { n_p as i64 - 1 } else { -1 };
                        for w in 0..n_q {
                            let cw = if w == gq { n_q as i64 - 1 } else { -1 };
                            let idx = base + u * strides[p] + w * strides[q];
                            if let Some(&col) = col_of.get(&idx) {
                                entries.push((col, rat_int(cu * cw)));
                            }
                        }
                    }
                    if !entries.is_empty() {
                        entries.sort_by_key(|&(c, _)| c);
                        rows.push((entries, RowTag { observer: i, p, q, gamma: g }));
                    }
                }
            }
        }
    }
    Ok(LinearSystem { columns, rows })
}

/// Incremental reduced-row-echelon accumulator over sparse rational rows.
struct Rref {
    n_cols: usize,
    /// pivot column -> fully reduced row (sparse, pivot entry = 1)
    pivots: BTreeMap<usize, BTreeMap<usize, Rational>>,
}

impl Rref {
    fn new(n_cols: usize) -> Self {
        Rref { n_cols, pivots: BTreeMap::new() }
    }

    fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn insert(&mut self, row: Vec<(usize, Rational)>) {
        let mut work: BTreeMap<usize, Rational> = row.into_iter().collect();
        work.retain(|_, v| !v.is_zero());
        // eliminate every pivot column present anywhere in the row; the
        // subtraction only introduces free-column entries, so this ends
        while let Some(c) =
            work.keys().copied().find(|c| self.pivots.contains_key(c))
        {
            let factor = work.remove(&c).expect("column present");
            let pivot_row = &self.pivots[&c];
            for (col, v) in pivot_row {
                if *col == c {
                    continue;
                }
                let delta = &factor * v;
                let entry = work.entry(*col).or_insert_with(Rational::zero);
                *entry -= delta;
                if entry.is_zero() {
                    work.remove(col);
                }
            }
        }
        let Some((&lead, _)) = work.iter().next() else { return };
        // normalize and back-substitute into existing pivot rows
        let lead_val = work.get(&lead).expect("lead present").clone();
        for v in work.values_mut() {
            *v /= &lead_val;
        }
        for other in self.pivots.values_mut() {
            if let Some(coeff) = other.remove(&lead) {
                for (c, v) in &work {
                    if *c == lead {
                        continue;
                    }
                    let delta = &coeff * v;
                    let entry = other.entry(*c).or_insert_with(Rational::zero);
                    *entry -= delta;
                    if entry.is_zero() {
                        other.remove(c);
                    }
                }
            }
        }
        self.pivots.insert(lead, work);
    }

    /// Basis of the solution space, one vector per free column, in
    /// ascending free-column order.
    fn nullspace_basis(&self) -> Vec<Vec<Rational>> {
        let free: Vec<usize> =
            (0..self.n_cols).filter(|c| !self.pivots.contains_key(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.n_cols];
                v[f] = Rational::one();
                for (&p, row) in &self.pivots {
                    if let Some(c) = row.get(&f) {
                        v[p] = -c.clone();
                    }
                }
                v
            })
            .collect()
    }
}

/// Exact basis of the solution space of the system. Deterministic; invariant
/// under row permutation up to the (unique) reduced echelon form.
pub fn nullspace(sys: &LinearSystem) -> Vec<Vec<Rational>> {
    let mut rref = Rref::new(sys.columns.len());
    for (row, _) in &sys.rows {
        rref.insert(row.clone());
        if rref.rank() == sys.columns.len() {
            break;
        }
    }
    rref.nullspace_basis()
}

/// Exact rank of a dense rational matrix.
fn dense_rank(rows: impl IntoIterator<Item = Vec<Rational>>, n_cols: usize) -> usize {
    let mut rref = Rref::new(n_cols);
    for row in rows {
        let sparse: Vec<(usize, Rational)> =
            row.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect();
        rref.insert(sparse);
    }
    rref.rank()
}

/// Outcome of the tightness check.
#[derive(Clone, Debug)]
pub enum TbicVerdict {
    /// Γ defines a tight Bell inequality; `f` is the dependence function in
    /// canonical scaling (integer values, gcd 1, positive on Γ).
    Tight { f: DistVector, nullity: usize },
    /// The solution space is too large, or the unique solution vanishes
    /// somewhere on Γ: Γ is not a minimal dependent set.
    NotMinimal { nullity: usize, zero_at: Option<usize> },
    /// The unique solution changes sign on Γ.
    NotPositive,
    /// No nonzero dependence exists at all.
    NotDependent,
}

impl TbicVerdict {
    pub fn is_tight(&self) -> bool {
        matches!(self, TbicVerdict::Tight { .. })
    }

    pub fn nullity(&self) -> usize {
        match self {
            TbicVerdict::Tight { nullity, .. } => *nullity,
            TbicVerdict::NotMinimal { nullity, .. } => *nullity,
            TbicVerdict::NotPositive => 1,
            TbicVerdict::NotDependent => 0,
        }
    }
}

/// Decides whether Γ defines a tight Bell inequality: the dependence system
/// must have a one-dimensional solution space whose generator is nowhere
/// zero on Γ and of a single sign.
pub fn tbic_check(space: &EventSpace, gamma: &[usize]) -> Result<TbicVerdict> {
    let sys = build_system(space, gamma)?;
    let basis = nullspace(&sys);
    match basis.len() {
        0 => Ok(TbicVerdict::NotDependent),
        1 => {
            let gen = &basis[0];
            if let Some(k) = gen.iter().position(|v| v.is_zero()) {
                return Ok(TbicVerdict::NotMinimal {
                    nullity: 1,
                    zero_at: Some(sys.columns[k]),
                });
            }
            let pos = gen.iter().filter(|v| v.is_positive()).count();
            if pos != 0 && pos != gen.len() {
                return Ok(TbicVerdict::NotPositive);
            }
            // canonical scaling: integers, gcd 1, positive
            let mut lcm = BigInt::one();
            for v in gen {
                lcm = lcm.lcm(v.denom());
            }
            let ints: Vec<BigInt> =
                gen.iter().map(|v| (v * Rational::from_integer(lcm.clone())).to_integer()).collect();
            let mut g = BigInt::zero();
            for x in &ints {
                g = g.gcd(x);
            }
            if pos == 0 {
                g = -g;
            }
            let omni = space.omni_ps();
            let n = omni.cardinality(omni.universe())? as usize;
            let mut values = vec![Rational::zero(); n];
            for (k, x) in ints.iter().enumerate() {
                values[sys.columns[k]] = Rational::from_integer(x / &g);
            }
            let f = DistVector::function(omni, values)?;
            Ok(TbicVerdict::Tight { f, nullity: 1 })
        }
        nullity => Ok(TbicVerdict::NotMinimal { nullity, zero_at: None }),
    }
}

/// Independent re-check of the three dependence clauses for a claimed f:
/// support exactly Γ, multideviations vanishing on every non-comeasurable
/// order, positivity on Γ. Used to audit `Tight` verdicts.
pub fn verify_tbic_f(space: &EventSpace, f: &DistVector, gamma: &[usize]) -> Result<bool> {
    let omni = space.omni_ps();
    if f.product_set() != &omni {
        return domain("f must live on the omni-joint product set");
    }
    let members: std::collections::BTreeSet<usize> = gamma.iter().copied().collect();
    for (idx, v) in f.values().iter().enumerate() {
        let inside = members.contains(&idx);
        if inside && !v.is_positive() {
            return Ok(false);
        }
        if !inside && !v.is_zero() {
            return Ok(false);
        }
    }
    let psi: std::collections::BTreeSet<u64> =
        space.psi().into_iter().map(|s| s.mask()).collect();
    for rho in omni.universe().subsets() {
        if psi.contains(&rho.mask()) {
            continue;
        }
        let q = crate::multidev::multidev_order(f, rho)?;
        if q.iter().any(|v| !v.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coordinates of the deterministic vertex G^γ̃ in the Ψ-projected space:
/// one block per comeasurable ρ ≠ ∅ listing q^ρ(x̃_ρ, γ̃_ρ) over all x̃_ρ.
fn vertex_coordinates(space: &EventSpace, psi: &[ElementSet], gamma: &Intuple) -> Vec<Rational> {
    let omni = space.omni_ps();
    let mut coords = Vec::new();
    for &rho in psi {
        if rho.is_empty() {
            continue;
        }
        let g_rho = gamma.restrict(rho).expect("ρ within universe");
        for x in omni.intuples(rho).expect("valid ρ") {
            coords.push(crate::multidev::msf(&omni, rho, &x, &g_rho).expect("support matches"));
        }
    }
    coords
}

/// Affine dimension of the Bell polytope: the rank of vertex differences in
/// Ψ-projected coordinates.
pub fn bell_polytope_dimension(space: &EventSpace) -> Result<usize> {
    let omni = space.omni_ps();
    let psi = space.psi();
    let mut first: Option<Vec<Rational>> = None;
    let mut diffs = Vec::new();
    for gamma in omni.intuples(omni.universe())? {
        let c = vertex_coordinates(space, &psi, &gamma);
        match &first {
            None => first = Some(c),
            Some(f0) => {
                diffs.push(c.iter().zip(f0).map(|(a, b)| a - b).collect::<Vec<_>>());
            }
        }
    }
    let n_cols = first.map(|f| f.len()).unwrap_or(0);
    Ok(dense_rank(diffs, n_cols))
}

/// Whether the inequality supports a facet of the Bell polytope: every
/// deterministic vertex evaluates ≥ 0 and the saturating vertices have
/// affine rank exactly one below the polytope dimension.
pub fn facet_check(space: &EventSpace, ineq: &BellInequality) -> Result<bool> {
    if ineq.omni_f().is_none() {
        return domain("facet check requires the omni-joint dependence function");
    }
    let omni = space.omni_ps();
    let psi = space.psi();
    let mut saturating = Vec::new();
    for gamma in omni.intuples(omni.universe())? {
        let value = ineq.evaluate_on_vertex(&gamma)?;
        if value.is_negative() {
            return Ok(false);
        }
        if value.is_zero() {
            saturating.push(vertex_coordinates(space, &psi, &gamma));
        }
    }
    if saturating.len() < 2 {
        return Ok(false);
    }
    let dim = bell_polytope_dimension(space)?;
    let base = saturating[0].clone();
    let n_cols = base.len();
    let diffs = saturating[1..]
        .iter()
        .map(|c| c.iter().zip(&base).map(|(a, b)| a - b).collect::<Vec<_>>());
    Ok(dense_rank(diffs, n_cols) == dim - 1)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(Vec::<usize>::new(), 0usize)];
    while let Some((prefix, start)) = stack.pop() {
        if prefix.len() == k {
            out.push(prefix);
            continue;
        }
        let needed = k - prefix.len();
        for s in (start..=n.saturating_sub(needed)).rev() {
            let mut next = prefix.clone();
            next.push(s);
            stack.push((next, s + 1));
        }
    }
    out
}

/// Enumerates every facet of the 2×2×2 Bell polytope by exact hyperplane
/// search: each affinely independent 8-subset of the 16 vertices fixes a
/// unique hyperplane, kept when all vertices lie weakly on one side,
/// deduplicated by canonical form. Refused for anything but two observers
/// with two binary observables each.
pub fn brute_force_facets(space: &EventSpace) -> Result<Vec<BellInequality>> {
    if space.n_observers() != 2 || !space.all_binary() || space.n_observables() != 4 {
        return refused("the exhaustive hull search is limited to the 2x2x2 space");
    }
    let omni = space.omni_ps();
    let n_omni = omni.cardinality(omni.universe())? as usize;

    // reduced coordinates: Q^ρ(1̃) per comeasurable ρ ≠ ∅, read through the
    // first context containing ρ (all coordinates a binary vertex carries)
    let psi: Vec<ElementSet> =
        space.psi().into_iter().filter(|r| !r.is_empty()).collect();
    let verts: Vec<(Intuple, Vec<Rational>)> = omni
        .intuples(omni.universe())?
        .map(|gamma| {
            let coords = psi
                .iter()
                .map(|&rho| {
                    let ctx = space.context(space.first_context_containing(rho).unwrap());
                    let ps = space.context_ps(&ctx);
                    let sigma = space.observer_positions(rho);
                    let g = Intuple::new(
                        sigma,
                        rho.iter().map(|o| gamma.outcome_of(o).unwrap()).collect(),
                    );
                    crate::multidev::msf(&ps, sigma, &Intuple::ones(sigma), &g).unwrap()
                })
                .collect();
            (gamma, coords)
        })
        .collect();
    let dim = psi.len(); // 8

    let subsets = combinations(n_omni, dim);
    let found: Vec<(CanonicalIneq, BellInequality)> = subsets
        .par_iter()
        .filter_map(|subset| {
            // solve a·x = b through the chosen vertices: nullspace of [x | 1]
            let mut rref = Rref::new(dim + 1);
            for &k in subset {
                let mut row: Vec<(usize, Rational)> = verts[k]
                    .1
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect();
                row.push((dim, Rational::one()));
                rref.insert(row);
            }
            if rref.rank() != dim {
                return None; // affinely dependent subset
            }
            let basis = rref.nullspace_basis();
            let normal = &basis[0];
            let a = &normal[..dim];
            let b = -normal[dim].clone();
            // orient so all vertices sit on the nonnegative side
            let mut pos = false;
            let mut neg = false;
            let values: Vec<Rational> = verts
                .iter()
                .map(|(_, x)| {
                    let v: Rational =
                        a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<Rational>() - &b;
                    if v.is_positive() {
                        pos = true;
                    }
                    if v.is_negative() {
                        neg = true;
                    }
                    v
                })
                .collect();
            if pos && neg {
                return None;
            }
            let flip = if neg { rat_int(-1) } else { rat_int(1) };
            let constant = -&b * &flip;
            let terms: Vec<crate::contexts::IneqTerm> = psi
                .iter()
                .zip(a)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&rho, c)| crate::contexts::IneqTerm {
                    rho,
                    reference: crate::contexts::Reference::Outcome(Intuple::ones(rho)),
                    coeff: c * &flip,
                })
                .collect();
            let f_values: Vec<Rational> = values.iter().map(|v| v * &flip).collect();
            let f = DistVector::function(omni.clone(), f_values).ok()?;
            let ineq =
                BellInequality::new(space.clone(), constant, terms, Some(f)).ok()?;
            Some((ineq.canonical_form(), ineq))
        })
        .collect();

    let mut dedup: BTreeMap<CanonicalIneq, BellInequality> = BTreeMap::new();
    for (key, ineq) in found {
        dedup.entry(key).or_insert(ineq);
    }
    Ok(dedup.into_values().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::pioneer;

    #[test]
    fn binary_rows_match_the_simplified_form() {
        // in 2_V every row instantiated at label (σ,ρ) reads
        // f(σ,ρ) + f(σ,ρ⊖i) − f(σ⊖i,ρ) − f(σ⊖i,ρ⊖i) = 0
        let space = EventSpace::binary(2);
        let omni = space.omni_ps();
        let all: Vec<usize> = (0..16).collect();
        let sys = build_system(&space, &all).unwrap();
        for (entries, tag) in &sys.rows {
            let i = ElementSet::singleton(tag.observer);
            let (sigma, rho) = pioneer::intuple_to_label(
                &space,
                &omni.decode(omni.universe(), tag.gamma).unwrap(),
            )
            .unwrap();
            let expected = [
                (sigma, rho, rat(1, 1)),
                (sigma, rho.symm_diff(i), rat(1, 1)),
                (sigma.symm_diff(i), rho, rat(-1, 1)),
                (sigma.symm_diff(i), rho.symm_diff(i), rat(-1, 1)),
            ];
            assert_eq!(entries.len(), 4);
            for (s, r, coeff) in expected {
                let idx =
                    omni.encode(&pioneer::label_to_intuple(&space, s, r).unwrap()).unwrap();
                let col = sys.columns().iter().position(|&c| c == idx).unwrap();
                let entry = entries.iter().find(|(c, _)| *c == col).unwrap();
                assert_eq!(entry.1, coeff);
            }
        }
    }

    #[test]
    fn full_space_admits_the_constant_solution() {
        let space = EventSpace::binary(2);
        let all: Vec<usize> = (0..16).collect();
        let sys = build_system(&space, &all).unwrap();
        let basis = nullspace(&sys);
        // f = constant solves every row
        for (row, _) in &sys.rows {
            let total: Rational = row.iter().map(|(_, c)| c.clone()).sum();
            assert!(total.is_zero());
        }
        // the solution space is the whole comeasurable span: one dimension
        // per ρ ∈ Ψ and reference choice, Σ_{ρ∈Ψ} Π_{o∈ρ}(n_o − 1) = 9 here
        assert_eq!(basis.len(), 9);
        let verdict = tbic_check(&space, &all).unwrap();
        assert!(matches!(verdict, TbicVerdict::NotMinimal { nullity: 9, .. }));
        // the constant function lies in the span of the basis: residual of
        // all-ones against every row is zero (checked above), and rank
        // accounting confirms 16 − 9 = 7 independent constraints
        assert_eq!(sys.n_unknowns() - basis.len(), 7);
    }

    #[test]
    fn nullspace_degenerate_cases() {
        // identity-like system: rows pinning each unknown
        let sys = LinearSystem {
            columns: vec![0, 1],
            rows: vec![
                (vec![(0, rat(1, 1))], RowTag { observer: 0, p: 0, q: 1, gamma: 0 }),
                (vec![(1, rat(2, 1))], RowTag { observer: 0, p: 0, q: 1, gamma: 1 }),
            ],
        };
        assert!(nullspace(&sys).is_empty());
        // zero system over k unknowns has k basis vectors
        let sys = LinearSystem { columns: vec![0, 1, 2], rows: vec![] };
        let basis = nullspace(&sys);
        assert_eq!(basis.len(), 3);
    }

    #[test]
    fn nullspace_is_invariant_under_row_permutation() {
        let space = EventSpace::binary(2);
        let spec = pioneer::PioneerSpec::top_level(
            2,
            vec![ElementSet::full(2)],
        )
        .unwrap();
        let gamma = pioneer::gamma_set(&spec).omni_indices(&space).unwrap();
        let sys = build_system(&space, &gamma).unwrap();
        let forward = nullspace(&sys);
        let mut reversed = sys.clone();
        reversed.rows.reverse();
        assert_eq!(forward, nullspace(&reversed));
    }

    #[test]
    fn pioneer_gammas_are_tight_and_singletons_are_not() {
        let space = EventSpace::binary(2);
        for spec in pioneer::enumerate_pioneers(2, false).unwrap() {
            let gamma = pioneer::gamma_set(&spec).omni_indices(&space).unwrap();
            let verdict = tbic_check(&space, &gamma).unwrap();
            match &verdict {
                TbicVerdict::Tight { f, nullity } => {
                    assert_eq!(*nullity, 1);
                    // canonical generator is the indicator of Γ
                    for &idx in &gamma {
                        assert_eq!(*f.value(idx), rat(1, 1));
                    }
                    assert!(verify_tbic_f(&space, f, &gamma).unwrap());
                }
                other => panic!("pioneer spec {spec:?} judged {other:?}"),
            }
        }

        // a single outcome is an independent set: the system pins f to zero
        let verdict = tbic_check(&space, &[3]).unwrap();
        assert!(matches!(verdict, TbicVerdict::NotDependent));

        // a padded pioneer Γ is no longer minimal
        let spec = pioneer::PioneerSpec::top_level(2, vec![ElementSet::full(2)]).unwrap();
        let mut gamma = pioneer::gamma_set(&spec).omni_indices(&space).unwrap();
        let extra = (0..16).find(|i| !gamma.contains(i)).unwrap();
        gamma.push(extra);
        let verdict = tbic_check(&space, &gamma).unwrap();
        assert!(!verdict.is_tight(), "padded Γ judged tight");
    }

    #[test]
    fn positivity_fibers_are_tight() {
        // Γ = all omni outcomes extending one context outcome
        let space = EventSpace::binary(2);
        let omni = space.omni_ps();
        let ctx = space.context(0);
        let rho = space.context_set(&ctx);
        let mut gamma = Vec::new();
        for (idx, g) in omni.intuples(omni.universe()).unwrap().enumerate() {
            let hit = rho.iter().all(|o| g.outcome_of(o).unwrap() == 0);
            if hit {
                gamma.push(idx);
            }
        }
        assert_eq!(gamma.len(), 4);
        let verdict = tbic_check(&space, &gamma).unwrap();
        assert!(verdict.is_tight(), "positivity fiber judged {verdict:?}");
    }

    #[test]
    fn polytope_dimension_of_2x2x2_is_8() {
        let space = EventSpace::binary(2);
        assert_eq!(bell_polytope_dimension(&space).unwrap(), 8);
    }

    #[test]
    fn facet_check_accepts_chsh_and_positivity_rejects_slack() {
        let space = EventSpace::binary(2);
        // CHSH via the pioneer route
        let spec = pioneer::PioneerSpec::top_level(2, vec![ElementSet::full(2)]).unwrap();
        let chsh = pioneer::coefficients(&spec).unwrap();
        assert!(facet_check(&space, &chsh).unwrap());

        // positivity inequality: the fiber dependence function
        let omni = space.omni_ps();
        let ctx = space.context(0);
        let rho = space.context_set(&ctx);
        let values: Vec<Rational> = omni
            .intuples(omni.universe())
            .unwrap()
            .map(|g| {
                if rho.iter().all(|o| g.outcome_of(o).unwrap() == 0) {
                    rat(1, 1)
                } else {
                    rat(0, 1)
                }
            })
            .collect();
        let f = DistVector::function(omni.clone(), values).unwrap();
        let positivity = BellInequality::from_omni_f(&space, f).unwrap();
        assert!(facet_check(&space, &positivity).unwrap());

        // the sum of two facets is valid but slack
        let other = pioneer::coefficients(
            &pioneer::PioneerSpec::top_level(
                2,
                vec![
                    ElementSet::EMPTY,
                    ElementSet::singleton(0),
                    ElementSet::singleton(1),
                    ElementSet::full(2),
                ],
            )
            .unwrap(),
        )
        .unwrap();
        let f_sum: Vec<Rational> = chsh
            .omni_f()
            .unwrap()
            .values()
            .iter()
            .zip(other.omni_f().unwrap().values())
            .map(|(a, b)| a + b)
            .collect();
        let slack =
            BellInequality::from_omni_f(&space, DistVector::function(omni, f_sum).unwrap())
                .unwrap();
        assert!(!facet_check(&space, &slack).unwrap());

        // missing omni_f is a domain error
        let bare = pioneer::simplest_inequality(2, ElementSet::EMPTY, 1).unwrap();
        assert!(facet_check(&space, &bare).is_err());
    }

    #[test]
    fn census_is_refused_off_the_desk() {
        assert!(brute_force_facets(&EventSpace::binary(3)).is_err());
    }

    #[test]
    fn census_saturation_structure() {
        // the 24 facets split by saturating-vertex count: the 8 even/odd
        // facets each touch 8 of the 16 vertices, the 16 positivity facets
        // each touch the 12 vertices outside their fiber
        let space = EventSpace::binary(2);
        let omni = space.omni_ps();
        let facets = brute_force_facets(&space).unwrap();
        assert_eq!(facets.len(), 24);
        let mut by_count: BTreeMap<usize, usize> = BTreeMap::new();
        for facet in &facets {
            let saturating = omni
                .intuples(omni.universe())
                .unwrap()
                .filter(|g| facet.evaluate_on_vertex(g).unwrap().is_zero())
                .count();
            *by_count.entry(saturating).or_default() += 1;
            assert!(facet_check(&space, facet).unwrap());
        }
        assert_eq!(by_count, BTreeMap::from([(8, 8), (12, 16)]));
    }
}
