//! Multideviation seed functions and transforms.
//!
//! The seed function of order σ over a product set ΠA_B is
//!
//! ```text
//! q^σ(x̃_σ, ỹ_σ) = (1/n_B) · Π_{i∈σ} (n_i·[x_i = y_i] − 1)
//! ```
//!
//! Summed against a function f over the full space it isolates the
//! σ-multideviation Q^σ_f(x̃_σ), the portion of f that measures correlation
//! among exactly the elements of σ and is linearly independent of every
//! other order. The seed functions reproduce the Kronecker delta when summed
//! over σ, are symmetric in their intuple arguments, sum to zero in each
//! coordinate, and are orthogonal across orders; the transform therefore has
//! an exact inverse (`reconstruct`).
//!
//! Everything here is exact rational arithmetic. The quantum module converts
//! to floats at its own boundary.

use crate::algebra::{rat_recip, ElementSet, Intuple, ProductSet, Rational};
use crate::error::{domain, precondition, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A dense rational-valued function (or probability distribution) on a
/// product set, indexed by encoded full-support intuples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DistVector {
    ps: ProductSet,
    values: Vec<Rational>,
    probability: bool,
}

impl DistVector {
    /// An arbitrary function on the product set.
    pub fn function(ps: ProductSet, values: Vec<Rational>) -> Result<Self> {
        let n = ps.cardinality(ps.universe())? as usize;
        if values.len() != n {
            return domain(format!("expected {n} values, got {}", values.len()));
        }
        Ok(DistVector { ps, values, probability: false })
    }

    /// A probability distribution: entries nonnegative, summing to one.
    pub fn probability(ps: ProductSet, values: Vec<Rational>) -> Result<Self> {
        let f = DistVector::function(ps, values)?;
        if f.values.iter().any(|v| v.is_negative()) {
            return precondition("probability entries must be nonnegative");
        }
        let total: Rational = f.values.iter().sum();
        if !total.is_one() {
            return precondition(format!(
                "probability entries must sum to 1, got {total}"
            ));
        }
        Ok(DistVector { probability: true, ..f })
    }

    pub fn uniform(ps: ProductSet) -> Self {
        let n = ps.cardinality(ps.universe()).expect("valid universe") as usize;
        let w = rat_recip(n as u64);
        DistVector { ps, values: vec![w; n], probability: true }
    }

    /// The point mass δ_{x̃ = ỹ}.
    pub fn point_mass(ps: ProductSet, at: &Intuple) -> Result<Self> {
        if at.support() != ps.universe() {
            return domain("point mass requires a full-support intuple");
        }
        let n = ps.cardinality(ps.universe())? as usize;
        let idx = ps.encode(at)?;
        let mut values = vec![Rational::zero(); n];
        values[idx] = Rational::one();
        Ok(DistVector { ps, values, probability: true })
    }

    pub fn product_set(&self) -> &ProductSet {
        &self.ps
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> &Rational {
        &self.values[idx]
    }

    pub fn is_probability(&self) -> bool {
        self.probability
    }

    pub fn total(&self) -> Rational {
        self.values.iter().sum()
    }

    /// The generalized marginal P^σ(x̃_σ) = Σ_{B∖σ} f(x̃_B), indexed by the
    /// σ-encoding of this product set.
    pub fn marginal(&self, sigma: ElementSet) -> Result<Vec<Rational>> {
        let n_sigma = self.ps.cardinality(sigma)? as usize;
        let mut out = vec![Rational::zero(); n_sigma];
        let universe = self.ps.universe();
        for (idx, x) in self.ps.intuples(universe)?.enumerate() {
            let key = self.ps.encode(&x.restrict(sigma)?)?;
            out[key] += &self.values[idx];
        }
        Ok(out)
    }
}

/// Integer part Π_{i∈σ} (n_i·[x_i = y_i] − 1) of the seed function.
fn msf_kernel(ps: &ProductSet, x: &Intuple, y: &Intuple) -> i128 {
    let mut k: i128 = 1;
    for ((i, xo), (_, yo)) in x.pairs().zip(y.pairs()) {
        let n = ps.size_of(i) as i128;
        k *= if xo == yo { n - 1 } else { -1 };
    }
    k
}

/// The σ-order multideviation seed function q^σ(x̃_σ, ỹ_σ).
pub fn msf(ps: &ProductSet, sigma: ElementSet, x: &Intuple, y: &Intuple) -> Result<Rational> {
    ps.check_subset(sigma)?;
    if x.support() != sigma || y.support() != sigma {
        return domain("seed function arguments must both have support σ");
    }
    let n_b = ps.cardinality(ps.universe())?;
    Ok(Rational::new(BigInt::from(msf_kernel(ps, x, y)), BigInt::from(n_b)))
}

/// Multideviations of a single order σ, indexed by encoded x̃_σ.
///
/// Q^σ_f(x̃_σ) = Σ_{ỹ_B} f(ỹ) q^σ(x̃_σ, ỹ_σ); the sum collapses onto the
/// σ-marginal of f, which keeps the cost at n_B + n_σ² kernel products.
pub fn multidev_order(f: &DistVector, sigma: ElementSet) -> Result<Vec<Rational>> {
    let ps = f.product_set();
    let marg = f.marginal(sigma)?;
    let n_b = ps.cardinality(ps.universe())?;
    let inv_n_b = rat_recip(n_b);
    let args: Vec<Intuple> = ps.intuples(sigma)?.collect();
    let mut out = Vec::with_capacity(args.len());
    for x in &args {
        let mut acc = Rational::zero();
        for (y, m) in args.iter().zip(&marg) {
            if m.is_zero() {
                continue;
            }
            let k = msf_kernel(ps, x, y);
            if k != 0 {
                acc += m * Rational::from_integer(BigInt::from(k));
            }
        }
        out.push(acc * &inv_n_b);
    }
    Ok(out)
}

/// The complete multideviation table of a function: one dense array per
/// order σ ⊆ B, indexed by encoded x̃_σ.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultidevTable {
    ps: ProductSet,
    tables: Vec<Vec<Rational>>,
}

impl MultidevTable {
    pub fn product_set(&self) -> &ProductSet {
        &self.ps
    }

    pub fn from_parts(ps: ProductSet, tables: Vec<Vec<Rational>>) -> Result<Self> {
        let orders = 1usize << ps.len();
        if tables.len() != orders {
            return domain(format!("expected {orders} order tables, got {}", tables.len()));
        }
        for (mask, tab) in tables.iter().enumerate() {
            let n = ps.cardinality(ElementSet::from_mask(mask as u64))? as usize;
            if tab.len() != n {
                return domain(format!("order {mask:#x} table has wrong length"));
            }
        }
        Ok(MultidevTable { ps, tables })
    }

    pub fn order(&self, sigma: ElementSet) -> &[Rational] {
        &self.tables[sigma.mask() as usize]
    }

    pub fn q(&self, sigma: ElementSet, x: &Intuple) -> Result<&Rational> {
        let idx = self.ps.encode(x)?;
        Ok(&self.tables[sigma.mask() as usize][idx])
    }

    /// Q^∅, the single entry of the empty order.
    pub fn q_empty(&self) -> &Rational {
        &self.tables[0][0]
    }
}

/// The multideviation transform: f ↦ { Q^σ_f }_{σ ⊆ B}.
pub fn transform(f: &DistVector) -> MultidevTable {
    let ps = f.product_set().clone();
    let mut tables = Vec::with_capacity(1 << ps.len());
    for mask in 0..(1u64 << ps.len()) {
        let sigma = ElementSet::from_mask(mask);
        tables.push(multidev_order(f, sigma).expect("σ within universe"));
    }
    MultidevTable { ps, tables }
}

/// Completeness: f(x̃) = Σ_σ Q^σ(x̃_σ). Exact inverse of [`transform`].
pub fn reconstruct(t: &MultidevTable) -> DistVector {
    let ps = t.ps.clone();
    let universe = ps.universe();
    let n = ps.cardinality(universe).expect("valid universe") as usize;
    let mut values = vec![Rational::zero(); n];
    for (idx, x) in ps.intuples(universe).expect("valid universe").enumerate() {
        let mut acc = Rational::zero();
        for sigma in universe.subsets() {
            let key = ps.encode(&x.restrict(sigma).expect("σ ⊆ B")).expect("valid");
            acc += &t.tables[sigma.mask() as usize][key];
        }
        values[idx] = acc;
    }
    DistVector { ps, values, probability: false }
}

/// A probability-constraint violation: the reconstructed value at `at` is
/// negative.
#[derive(Clone, Debug)]
pub struct ConstraintViolation {
    pub at: Intuple,
    pub value: Rational,
}

/// Checks the inequality constraints Σ_σ Q^σ(x̃_σ) ≥ 0 for every x̃_B.
///
/// Requires Q^∅ = 1/n_B (the probability normalization); returns the first
/// violating joint outcome otherwise satisfied.
pub fn check_constraints(t: &MultidevTable) -> Result<Option<ConstraintViolation>> {
    let n_b = t.ps.cardinality(t.ps.universe())?;
    if *t.q_empty() != rat_recip(n_b) {
        return precondition(format!("Q^∅ must be 1/{n_b}, got {}", t.q_empty()));
    }
    let f = reconstruct(t);
    for (idx, v) in f.values().iter().enumerate() {
        if v.is_negative() {
            return Ok(Some(ConstraintViolation {
                at: t.ps.decode(t.ps.universe(), idx)?,
                value: v.clone(),
            }));
        }
    }
    Ok(None)
}

/// The single binary degree of freedom Q^σ ≡ Q^σ(1̃_σ).
///
/// In an all-binary space every Q^σ(x̃_σ) is (−1)^{|σ|−|x̃_σ ∩ 1̃_σ|} times
/// this value, so one entry per order carries all the information.
pub fn binary_q(t: &MultidevTable, sigma: ElementSet) -> Result<Rational> {
    if t.ps.sizes().iter().any(|&s| s != 2) {
        return domain("binary multideviations require an all-binary space");
    }
    t.ps.check_subset(sigma)?;
    Ok(t.tables[sigma.mask() as usize][0].clone())
}

/// A choice of one nonempty proper outcome subset α_i ⊂ A_i per supported
/// element, stored as bitmasks over outcome indices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeIntuple {
    support: ElementSet,
    blocks: Vec<u64>,
}

impl LatticeIntuple {
    pub fn new(ps: &ProductSet, support: ElementSet, blocks: Vec<u64>) -> Result<Self> {
        ps.check_subset(support)?;
        if blocks.len() != support.len() {
            return domain("one outcome subset per supported element required");
        }
        for (slot, i) in support.iter().enumerate() {
            let size = ps.size_of(i);
            let full = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
            let b = blocks[slot];
            if b == 0 || b & !full != 0 || b == full {
                return domain(format!(
                    "outcome subset for element {i} must be nonempty and proper"
                ));
            }
        }
        Ok(LatticeIntuple { support, blocks })
    }

    pub fn support(&self) -> ElementSet {
        self.support
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    pub fn block_of(&self, i: usize) -> Option<u64> {
        let pos = self.support.iter().position(|j| j == i)?;
        Some(self.blocks[pos])
    }

    pub fn contains_outcome(&self, slot: usize, outcome: u32) -> bool {
        self.blocks[slot] & (1u64 << outcome) != 0
    }

    pub fn restrict(&self, sigma: ElementSet) -> Result<LatticeIntuple> {
        if !sigma.is_subset_of(self.support) {
            return domain("restriction outside lattice intuple support");
        }
        let mut blocks = Vec::with_capacity(sigma.len());
        for (slot, i) in self.support.iter().enumerate() {
            if sigma.contains(i) {
                blocks.push(self.blocks[slot]);
            }
        }
        Ok(LatticeIntuple { support: sigma, blocks })
    }
}

/// The Boolean multideviation W^σ_f(α̃_σ): the space is viewed as binary
/// through the two-block coarse-graining x_i ∈ α_i vs x_i ∉ α_i,
///
/// ```text
/// W^σ_f(α̃) = Σ_ỹ f(ỹ) · (1/2^{|B|}) · Π_{i∈σ} (2·[y_i ∈ α_i] − 1)
/// ```
pub fn boolean_multidev(f: &DistVector, sigma: ElementSet, alpha: &LatticeIntuple) -> Result<Rational> {
    let ps = f.product_set();
    ps.check_subset(sigma)?;
    if alpha.support() != sigma {
        return domain("lattice intuple support must equal σ");
    }
    let slots: Vec<usize> = sigma.indices();
    let mut acc_rat = Rational::zero();
    for (idx, y) in ps.intuples(ps.universe())?.enumerate() {
        let v = f.value(idx);
        if v.is_zero() {
            continue;
        }
        let mut sign = 1i64;
        for (slot, &i) in slots.iter().enumerate() {
            let yo = y.outcome_of(i).expect("full support");
            if !alpha.contains_outcome(slot, yo) {
                sign = -sign;
            }
        }
        if sign > 0 {
            acc_rat += v;
        } else {
            acc_rat -= v;
        }
    }
    Ok(acc_rat * rat_recip(1u64 << ps.len()))
}

/// The multideviation vector q⃗^σ(x̃_σ): the full-space function
/// ỹ ↦ q^σ(x̃_σ, ỹ_σ), i.e. one column of the σ-order projector.
pub fn md_vector(ps: &ProductSet, sigma: ElementSet, x: &Intuple) -> Result<Vec<Rational>> {
    ps.check_subset(sigma)?;
    if x.support() != sigma {
        return domain("md_vector argument must have support σ");
    }
    let n_b = ps.cardinality(ps.universe())?;
    let inv = rat_recip(n_b);
    let mut out = Vec::with_capacity(n_b as usize);
    for y in ps.intuples(ps.universe())? {
        let k = msf_kernel(ps, x, &y.restrict(sigma)?);
        out.push(Rational::from_integer(BigInt::from(k)) * &inv);
    }
    Ok(out)
}

/// Projects f onto the subspace spanned by the orders in Ψ. The σ-order
/// projector applied to f is the function ỹ ↦ Q^σ_f(ỹ_σ); equivalently
/// (n_B/n_σ)·Σ_{x̃_σ} q⃗^σ(x̃_σ)·Q^σ_f(x̃_σ) — the q-columns of one order
/// form a frame with operator (n_σ/n_B)·P_σ, not a tight one.
pub fn project_to_psi(f: &DistVector, psi: &[ElementSet]) -> Result<Vec<Rational>> {
    let ps = f.product_set();
    let n = ps.cardinality(ps.universe())? as usize;
    let mut out = vec![Rational::zero(); n];
    for &sigma in psi {
        let q = multidev_order(f, sigma)?;
        for (idx, y) in ps.intuples(ps.universe())?.enumerate() {
            let key = ps.encode(&y.restrict(sigma)?)?;
            out[idx] += &q[key];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, rat_int};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn ps(sizes: &[u32]) -> ProductSet {
        ProductSet::new(sizes.to_vec()).unwrap()
    }

    /// Random rational probability distribution with small denominators.
    fn random_prob(ps: &ProductSet, rng: &mut StdRng) -> DistVector {
        let n = ps.cardinality(ps.universe()).unwrap() as usize;
        let weights: Vec<u64> = (0..n).map(|_| rng.random_range(0..=12u64)).collect();
        let mut total: u64 = weights.iter().sum();
        let mut weights = weights;
        if total == 0 {
            weights[0] = 1;
            total = 1;
        }
        let values = weights
            .into_iter()
            .map(|w| Rational::new(w.into(), total.into()))
            .collect();
        DistVector::probability(ps.clone(), values).unwrap()
    }

    /// Alternate seed-function form via the binomial expansion:
    /// q^σ(x̃,ỹ) = Σ_{μ⊆σ} (−1)^{|σ∖μ|} / n_{B∖μ} · Π_{i∈μ} [x_i = y_i].
    /// Kept test-only as an independent route against `msf`.
    fn msf_alternate(p: &ProductSet, sigma: ElementSet, x: &Intuple, y: &Intuple) -> Rational {
        let universe = p.universe();
        let mut acc = Rational::zero();
        for mu in sigma.subsets() {
            let all_match = mu
                .iter()
                .all(|i| x.outcome_of(i).unwrap() == y.outcome_of(i).unwrap());
            if !all_match {
                continue;
            }
            let n = p.cardinality(universe.minus(mu)).unwrap();
            let sign = if (sigma.len() - mu.len()) % 2 == 0 { 1 } else { -1 };
            acc += rat(sign, n as i64);
        }
        acc
    }

    #[test]
    fn msf_hand_values() {
        // two binary elements
        let p = ps(&[2, 2]);
        let s = ElementSet::EMPTY;
        let e = Intuple::empty();
        assert_eq!(msf(&p, s, &e, &e).unwrap(), rat(1, 4));

        let s = ElementSet::singleton(0);
        let x = Intuple::new(s, vec![0]);
        let y = Intuple::new(s, vec![0]);
        assert_eq!(msf(&p, s, &x, &y).unwrap(), rat(1, 4));
        let y = Intuple::new(s, vec![1]);
        assert_eq!(msf(&p, s, &x, &y).unwrap(), rat(-1, 4));

        // support mismatch
        assert!(msf(&p, ElementSet::singleton(1), &x, &y).is_err());
    }

    #[test]
    fn msf_matches_alternate_form() {
        // Resolves the footnote index-set question: with the complement taken
        // inside B the two forms agree exactly on every argument.
        for sizes in [vec![2, 2], vec![2, 3], vec![3, 2, 2], vec![2, 3, 4]] {
            let p = ps(&sizes);
            let u = p.universe();
            for sigma in u.subsets() {
                for x in p.intuples(sigma).unwrap() {
                    for y in p.intuples(sigma).unwrap() {
                        assert_eq!(
                            msf(&p, sigma, &x, &y).unwrap(),
                            msf_alternate(&p, sigma, &x, &y),
                            "sizes {sizes:?} σ {sigma:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn msf_symmetry_and_zero_sum() {
        let p = ps(&[2, 3, 2]);
        let u = p.universe();
        for sigma in u.subsets() {
            for x in p.intuples(sigma).unwrap() {
                for y in p.intuples(sigma).unwrap() {
                    assert_eq!(msf(&p, sigma, &x, &y).unwrap(), msf(&p, sigma, &y, &x).unwrap());
                }
                // Σ_{x_i} q^σ(x̃, ỹ) = 0 for each i ∈ σ
                for i in sigma.iter() {
                    for y in p.intuples(sigma).unwrap() {
                        let mut acc = Rational::zero();
                        for o in 0..p.size_of(i) {
                            let mut outcomes = x.outcomes().to_vec();
                            let slot = sigma.iter().position(|j| j == i).unwrap();
                            outcomes[slot] = o;
                            let xv = Intuple::new(sigma, outcomes);
                            acc += msf(&p, sigma, &xv, &y).unwrap();
                        }
                        assert!(acc.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn msf_completeness_reproduces_kronecker_delta() {
        let p = ps(&[2, 3]);
        let u = p.universe();
        for x in p.intuples(u).unwrap() {
            for y in p.intuples(u).unwrap() {
                let mut acc = Rational::zero();
                for sigma in u.subsets() {
                    acc += msf(&p, sigma, &x.restrict(sigma).unwrap(), &y.restrict(sigma).unwrap())
                        .unwrap();
                }
                let expect = if x == y { rat_int(1) } else { rat_int(0) };
                assert_eq!(acc, expect);
            }
        }
    }

    /// Orthogonality Σ_ỹ q^σ(x̃,ỹ) q^ρ(ỹ,z̃) = δ_{σ=ρ} q^σ(x̃,z̃), exhaustive
    /// over all σ, ρ for spaces up to n_B = 36.
    fn orthogonality_exhaustive(p: &ProductSet) {
        let u = p.universe();
        for sigma in u.subsets() {
            for rho in u.subsets() {
                for x in p.intuples(sigma).unwrap() {
                    for z in p.intuples(rho).unwrap() {
                        let mut acc = Rational::zero();
                        for y in p.intuples(u).unwrap() {
                            acc += msf(p, sigma, &x, &y.restrict(sigma).unwrap()).unwrap()
                                * msf(p, rho, &y.restrict(rho).unwrap(), &z).unwrap();
                        }
                        let expect = if sigma == rho {
                            msf(p, sigma, &x, &z).unwrap()
                        } else {
                            Rational::zero()
                        };
                        assert_eq!(acc, expect);
                    }
                }
            }
        }
    }

    #[test]
    fn msf_orthogonality() {
        orthogonality_exhaustive(&ps(&[2, 2]));
        orthogonality_exhaustive(&ps(&[2, 3, 3]));
        orthogonality_exhaustive(&ps(&[3, 3, 4]));
    }

    #[test]
    fn transform_of_uniform_and_point_mass() {
        let p = ps(&[2, 3]);
        let t = transform(&DistVector::uniform(p.clone()));
        assert_eq!(*t.q_empty(), rat(1, 6));
        for sigma in p.universe().subsets().skip(1) {
            assert!(t.order(sigma).iter().all(|v| v.is_zero()));
        }

        // point mass: Q^σ(x̃_σ) = q^σ(x̃_σ, ỹ_σ)
        let y = Intuple::new(p.universe(), vec![1, 2]);
        let t = transform(&DistVector::point_mass(p.clone(), &y).unwrap());
        for sigma in p.universe().subsets() {
            for x in p.intuples(sigma).unwrap() {
                assert_eq!(
                    t.q(sigma, &x).unwrap(),
                    &msf(&p, sigma, &x, &y.restrict(sigma).unwrap()).unwrap()
                );
            }
        }
    }

    #[test]
    fn transform_reconstruct_round_trip() {
        let mut rng = StdRng::seed_from_u64(7);
        for sizes in [vec![2, 2], vec![2, 3], vec![3, 3]] {
            let p = ps(&sizes);
            for _ in 0..50 {
                let f = random_prob(&p, &mut rng);
                let back = reconstruct(&transform(&f));
                assert_eq!(back.values(), f.values());
                // every probability distribution has Q^∅ = 1/n_B
                let n = p.cardinality(p.universe()).unwrap();
                assert_eq!(*transform(&f).q_empty(), rat_recip(n));
            }
        }
        // zero table -> zero function; Q^∅-only table -> uniform
        let p = ps(&[2, 2]);
        let orders = 1usize << p.len();
        let mut tables: Vec<Vec<Rational>> = (0..orders)
            .map(|m| {
                let n = p.cardinality(ElementSet::from_mask(m as u64)).unwrap() as usize;
                vec![Rational::zero(); n]
            })
            .collect();
        let zero = MultidevTable::from_parts(p.clone(), tables.clone()).unwrap();
        assert!(reconstruct(&zero).values().iter().all(|v| v.is_zero()));
        tables[0][0] = rat(1, 4);
        let only_empty = MultidevTable::from_parts(p.clone(), tables).unwrap();
        assert_eq!(reconstruct(&only_empty).values(), DistVector::uniform(p).values());
    }

    #[test]
    fn transform_is_linear() {
        let p = ps(&[2, 3]);
        let mut rng = StdRng::seed_from_u64(11);
        let f = random_prob(&p, &mut rng);
        let g = random_prob(&p, &mut rng);
        let (a, b) = (rat(3, 5), rat(-7, 2));
        let combo = DistVector::function(
            p.clone(),
            f.values()
                .iter()
                .zip(g.values())
                .map(|(x, y)| &a * x + &b * y)
                .collect(),
        )
        .unwrap();
        let tc = transform(&combo);
        let tf = transform(&f);
        let tg = transform(&g);
        for sigma in p.universe().subsets() {
            for (k, v) in tc.order(sigma).iter().enumerate() {
                assert_eq!(*v, &a * &tf.order(sigma)[k] + &b * &tg.order(sigma)[k]);
            }
        }
    }

    #[test]
    fn table_zero_sum_per_element() {
        let p = ps(&[2, 3, 2]);
        let mut rng = StdRng::seed_from_u64(13);
        let f = random_prob(&p, &mut rng);
        let t = transform(&f);
        for sigma in p.universe().subsets() {
            for i in sigma.iter() {
                // fix the other coordinates, sum over x_i
                let rest = sigma.remove(i);
                for fixed in p.intuples(rest).unwrap() {
                    let mut acc = Rational::zero();
                    for o in 0..p.size_of(i) {
                        let mut outcomes = Vec::new();
                        let mut oi = 0;
                        for j in sigma.iter() {
                            if j == i {
                                outcomes.push(o);
                            } else {
                                outcomes.push(fixed.outcomes()[oi]);
                                oi += 1;
                            }
                        }
                        acc += t.q(sigma, &Intuple::new(sigma, outcomes)).unwrap();
                    }
                    assert!(acc.is_zero());
                }
            }
        }
    }

    #[test]
    fn marginal_relations() {
        let p = ps(&[2, 3]);
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            let f = random_prob(&p, &mut rng);
            // σ = B -> f itself; σ = ∅ -> total
            assert_eq!(f.marginal(p.universe()).unwrap(), f.values());
            assert_eq!(f.marginal(ElementSet::EMPTY).unwrap(), vec![rat_int(1)]);
            // n_B·Q^{i}(x_i) = n_i·P^{i}(x_i) − 1
            let t = transform(&f);
            let n_b = rat_int(p.cardinality(p.universe()).unwrap() as i64);
            for i in 0..p.len() {
                let s = ElementSet::singleton(i);
                let m = f.marginal(s).unwrap();
                for (k, q) in t.order(s).iter().enumerate() {
                    let n_i = rat_int(p.size_of(i) as i64);
                    assert_eq!(&n_b * q, n_i * &m[k] - rat_int(1));
                }
            }
        }
    }

    #[test]
    fn constraint_check_accepts_probabilities_and_catches_violations() {
        let p = ps(&[2, 2]);
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..20 {
            let f = random_prob(&p, &mut rng);
            assert!(check_constraints(&transform(&f)).unwrap().is_none());
        }

        // binary 2-element table with Q^{01} > Q^∅ violates −Q^∅ ≤ Q^σ ≤ Q^∅
        let orders = 1usize << 2;
        let mut tables: Vec<Vec<Rational>> = (0..orders)
            .map(|m| {
                let n = p.cardinality(ElementSet::from_mask(m as u64)).unwrap() as usize;
                vec![Rational::zero(); n]
            })
            .collect();
        tables[0][0] = rat(1, 4);
        tables[3] = vec![rat(1, 2), rat(-1, 2), rat(-1, 2), rat(1, 2)];
        let t = MultidevTable::from_parts(p.clone(), tables).unwrap();
        let witness = check_constraints(&t).unwrap();
        assert!(witness.is_some());

        // wrong Q^∅ is a precondition error
        let mut tables: Vec<Vec<Rational>> = (0..orders)
            .map(|m| {
                let n = p.cardinality(ElementSet::from_mask(m as u64)).unwrap() as usize;
                vec![Rational::zero(); n]
            })
            .collect();
        tables[0][0] = rat(1, 3);
        let t = MultidevTable::from_parts(p, tables).unwrap();
        assert!(check_constraints(&t).is_err());
    }

    #[test]
    fn multidev_range_bounds() {
        // −n*_σ·Q^∅/(n_min−1) ≤ Q^σ(x̃_σ) ≤ n*_σ·Q^∅
        let mut rng = StdRng::seed_from_u64(23);
        for sizes in [vec![2, 3], vec![3, 3, 2], vec![2, 4]] {
            let p = ps(&sizes);
            for _ in 0..20 {
                let f = random_prob(&p, &mut rng);
                let t = transform(&f);
                let q0 = t.q_empty().clone();
                let n_min = rat_int(p.min_size() as i64);
                for sigma in p.universe().subsets() {
                    let n_star = rat_int(p.reduced_cardinality(sigma).unwrap() as i64);
                    let hi = &n_star * &q0;
                    let lo = -(&n_star * &q0) / (&n_min - rat_int(1));
                    for v in t.order(sigma) {
                        assert!(*v <= hi && *v >= lo);
                    }
                }
            }
        }
    }

    #[test]
    fn binary_q_consistency_and_even_interpretation() {
        let p = ps(&[2, 2, 2]);
        let mut rng = StdRng::seed_from_u64(29);
        for _ in 0..30 {
            let f = random_prob(&p, &mut rng);
            let t = transform(&f);
            for sigma in p.universe().subsets() {
                let q1 = binary_q(&t, sigma).unwrap();
                // Q^σ(x̃) = (−1)^{|σ|−|x̃∩1̃|} Q^σ(1̃) across the whole table
                for x in p.intuples(sigma).unwrap() {
                    let ones = x.outcomes().iter().filter(|&&o| o == 0).count();
                    let sign = if (sigma.len() - ones) % 2 == 0 { 1 } else { -1 };
                    assert_eq!(*t.q(sigma, &x).unwrap(), rat_int(sign) * &q1);
                }
                // Q^σ = (1/2^{|B|}) (2·Pr(even # of σ outcomes are 2) − 1)
                let mut even = Rational::zero();
                for (idx, x) in p.intuples(p.universe()).unwrap().enumerate() {
                    let twos = sigma.iter().filter(|&i| x.outcome_of(i).unwrap() == 1).count();
                    if twos % 2 == 0 {
                        even += f.value(idx);
                    }
                }
                let expect = rat(1, 8) * (rat_int(2) * even - rat_int(1));
                assert_eq!(q1, expect);
            }
            // uniform -> all zero beyond ∅
            let t = transform(&DistVector::uniform(p.clone()));
            for sigma in p.universe().subsets().skip(1) {
                assert!(binary_q(&t, sigma).unwrap().is_zero());
            }
        }
        // non-binary space refused
        let t = transform(&DistVector::uniform(ps(&[2, 3])));
        assert!(binary_q(&t, ElementSet::singleton(0)).is_err());
    }

    #[test]
    fn binary_q_maximized_pair() {
        // perfectly correlated pair: Q^{ij} maximized forces Q^{i} = Q^{j}
        let p = ps(&[2, 2]);
        let f = DistVector::probability(
            p.clone(),
            vec![rat(1, 2), rat_int(0), rat_int(0), rat(1, 2)],
        )
        .unwrap();
        let t = transform(&f);
        let qij = binary_q(&t, ElementSet::full(2)).unwrap();
        assert_eq!(qij, rat(1, 4)); // maximal: equals Q^∅
        assert_eq!(
            binary_q(&t, ElementSet::singleton(0)).unwrap(),
            binary_q(&t, ElementSet::singleton(1)).unwrap()
        );
        // anti-correlated: minimized, Q^{i} = −Q^{j}
        let g = DistVector::probability(
            p.clone(),
            vec![rat_int(0), rat(1, 3), rat(2, 3), rat_int(0)],
        )
        .unwrap();
        let t = transform(&g);
        assert_eq!(binary_q(&t, ElementSet::full(2)).unwrap(), rat(-1, 4));
        assert_eq!(
            binary_q(&t, ElementSet::singleton(0)).unwrap(),
            -binary_q(&t, ElementSet::singleton(1)).unwrap()
        );
    }

    #[test]
    fn footnote_substitutions_are_independent_directions() {
        // The two substitutions alter exactly one of Q^{{i}}, Q^{{i,j}}.
        // The first works over any outcome sets; the sign-flip one needs
        // binary sets for the per-argument sums to cancel.
        let mut rng = StdRng::seed_from_u64(31);
        let a = rat(1, 7);
        let si = ElementSet::singleton(0);
        let sij = ElementSet::full(2);

        // P(x_i, y_j) += a/n_j for all y_j, at x_i = outcome 0
        let p = ps(&[2, 3]);
        let f = random_prob(&p, &mut rng);
        let t0 = transform(&f);
        let mut v1 = f.values().to_vec();
        for (idx, x) in p.intuples(p.universe()).unwrap().enumerate() {
            if x.outcome_of(0).unwrap() == 0 {
                v1[idx] += &a / rat_int(p.size_of(1) as i64);
            }
        }
        let t1 = transform(&DistVector::function(p.clone(), v1).unwrap());
        assert_ne!(t1.order(si), t0.order(si));
        assert_eq!(t1.order(sij), t0.order(sij));

        // P(ỹ) += a·(−1)^{δ_{y_i=x_i}}·(−1)^{δ_{y_j=x_j}} at x̃ = (0,0)
        let p = ps(&[2, 2]);
        let f = random_prob(&p, &mut rng);
        let t0 = transform(&f);
        let mut v2 = f.values().to_vec();
        for (idx, y) in p.intuples(p.universe()).unwrap().enumerate() {
            let s1 = if y.outcome_of(0).unwrap() == 0 { -1 } else { 1 };
            let s2 = if y.outcome_of(1).unwrap() == 0 { -1 } else { 1 };
            v2[idx] += rat_int(s1 * s2) * &a;
        }
        let t2 = transform(&DistVector::function(p.clone(), v2).unwrap());
        assert_eq!(t2.order(si), t0.order(si));
        assert_ne!(t2.order(sij), t0.order(sij));
    }

    #[test]
    fn boolean_multidev_reduces_to_binary_and_satisfies_w_inequalities() {
        // binary space with α_i = {first outcome} reproduces binary_q
        let p = ps(&[2, 2]);
        let mut rng = StdRng::seed_from_u64(37);
        let f = random_prob(&p, &mut rng);
        let t = transform(&f);
        for sigma in p.universe().subsets() {
            let alpha = LatticeIntuple::new(&p, sigma, vec![1u64; sigma.len()]).unwrap();
            assert_eq!(
                boolean_multidev(&f, sigma, &alpha).unwrap(),
                binary_q(&t, sigma).unwrap()
            );
        }
        // σ = ∅ gives (1/2^{|B|})·Σf
        let alpha0 = LatticeIntuple::new(&p, ElementSet::EMPTY, vec![]).unwrap();
        assert_eq!(boolean_multidev(&f, ElementSet::EMPTY, &alpha0).unwrap(), rat(1, 4));

        // W-inequalities Σ_σ (−1)^{|σ∩ρ|} W^σ ≥ 0 on 3-outcome spaces,
        // brute-forced over all ρ ⊆ B
        let p = ps(&[3, 3]);
        for _ in 0..40 {
            let f = random_prob(&p, &mut rng);
            let blocks: Vec<u64> = (0..2).map(|_| [0b001u64, 0b011, 0b101][rng.random_range(0..3)]).collect();
            let alpha = LatticeIntuple::new(&p, p.universe(), blocks).unwrap();
            for rho in p.universe().subsets() {
                let mut acc = Rational::zero();
                for sigma in p.universe().subsets() {
                    let w = boolean_multidev(&f, sigma, &alpha.restrict(sigma).unwrap()).unwrap();
                    let sign = if sigma.intersect(rho).len() % 2 == 0 { 1 } else { -1 };
                    acc += rat_int(sign) * w;
                }
                assert!(!acc.is_negative(), "W-inequality failed at ρ = {rho:?}");
            }
        }

        // empty or full α_i is a domain error
        assert!(LatticeIntuple::new(&p, ElementSet::singleton(0), vec![0]).is_err());
        assert!(LatticeIntuple::new(&p, ElementSet::singleton(0), vec![0b111]).is_err());
    }

    #[test]
    fn md_vectors_decompose_basis_and_project() {
        let p = ps(&[2, 3]);
        let u = p.universe();
        let n = p.cardinality(u).unwrap() as usize;

        // Σ_σ q⃗^σ(x̃_σ) = ê_x̃
        for (idx, x) in p.intuples(u).unwrap().enumerate() {
            let mut acc = vec![Rational::zero(); n];
            for sigma in u.subsets() {
                let col = md_vector(&p, sigma, &x.restrict(sigma).unwrap()).unwrap();
                for (a, c) in acc.iter_mut().zip(col) {
                    *a += c;
                }
            }
            for (k, v) in acc.iter().enumerate() {
                assert_eq!(*v, if k == idx { rat_int(1) } else { rat_int(0) });
            }
        }

        // Σ_{x_i} q⃗^σ(x̃_σ) = 0 per element, and orthogonality of md-vectors
        for sigma in u.subsets() {
            for i in sigma.iter() {
                let rest = sigma.remove(i);
                for fixed in p.intuples(rest).unwrap() {
                    let mut acc = vec![Rational::zero(); n];
                    for o in 0..p.size_of(i) {
                        let mut outcomes = Vec::new();
                        let mut k = 0;
                        for j in sigma.iter() {
                            if j == i {
                                outcomes.push(o);
                            } else {
                                outcomes.push(fixed.outcomes()[k]);
                                k += 1;
                            }
                        }
                        let col = md_vector(&p, sigma, &Intuple::new(sigma, outcomes)).unwrap();
                        for (a, c) in acc.iter_mut().zip(col) {
                            *a += c;
                        }
                    }
                    assert!(acc.iter().all(|v| v.is_zero()));
                }
            }
            for mu in u.subsets() {
                for x in p.intuples(sigma).unwrap() {
                    for y in p.intuples(mu).unwrap() {
                        let qx = md_vector(&p, sigma, &x).unwrap();
                        let qy = md_vector(&p, mu, &y).unwrap();
                        let dot: Rational = qx.iter().zip(&qy).map(|(a, b)| a * b).sum();
                        let expect = if sigma == mu {
                            msf(&p, sigma, &x, &y).unwrap()
                        } else {
                            Rational::zero()
                        };
                        assert_eq!(dot, expect);
                    }
                }
            }
        }

        // Ψ = powerset projects onto f itself
        let mut rng = StdRng::seed_from_u64(41);
        let f = random_prob(&p, &mut rng);
        let psi: Vec<ElementSet> = u.subsets().collect();
        assert_eq!(project_to_psi(&f, &psi).unwrap(), f.values());

        // the q-column frame route agrees after the n_B/n_σ rescaling
        for sigma in u.subsets() {
            let q = multidev_order(&f, sigma).unwrap();
            let mut acc = vec![Rational::zero(); n];
            for (key, x) in p.intuples(sigma).unwrap().enumerate() {
                let col = md_vector(&p, sigma, &x).unwrap();
                for (a, c) in acc.iter_mut().zip(col) {
                    *a += c * &q[key];
                }
            }
            let scale = rat(
                p.cardinality(u).unwrap() as i64,
                p.cardinality(sigma).unwrap() as i64,
            );
            let direct = project_to_psi(&f, &[sigma]).unwrap();
            for (a, d) in acc.iter().zip(&direct) {
                assert_eq!(&(a * &scale), d);
            }
        }
    }

}
