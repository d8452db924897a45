//! Product sets and intuples.
//!
//! A product set is the Cartesian product of an indexed family of outcome
//! sets; its elements are intuples ("indexed tuples"), each selecting one
//! outcome per index of its support. Outcomes are stored 0-based and shown
//! 1-based at I/O boundaries, so the displayed label "1" is index 0.
//!
//! Encoding is mixed-radix with the lowest element index most significant:
//! for two binary elements the order is (1,1), (1,2), (2,1), (2,2).

use super::set::ElementSet;
use crate::error::{domain, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProductSet {
    sizes: Vec<u32>,
}

impl ProductSet {
    /// A product set with the given per-element outcome cardinalities.
    pub fn new(sizes: Vec<u32>) -> Result<Self> {
        if sizes.len() > super::set::MAX_ELEMENTS {
            return domain(format!("universe of {} elements exceeds 64", sizes.len()));
        }
        if let Some(bad) = sizes.iter().find(|&&s| s < 2) {
            return domain(format!("outcome set of size {bad} (every |A_i| must be >= 2)"));
        }
        Ok(ProductSet { sizes })
    }

    /// Binary product set over `n` elements.
    pub fn binary(n: usize) -> Self {
        ProductSet::new(vec![2; n]).expect("binary sizes are valid")
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn size_of(&self, i: usize) -> u32 {
        self.sizes[i]
    }

    pub fn universe(&self) -> ElementSet {
        ElementSet::full(self.sizes.len())
    }

    pub fn check_subset(&self, sigma: ElementSet) -> Result<()> {
        if sigma.is_subset_of(self.universe()) {
            Ok(())
        } else {
            domain(format!("{sigma:?} is not a subset of the {}-element universe", self.len()))
        }
    }

    /// n_σ = Π_{i∈σ} |A_i|, with n_∅ = 1.
    pub fn cardinality(&self, sigma: ElementSet) -> Result<u64> {
        self.check_subset(sigma)?;
        let mut n: u64 = 1;
        for i in sigma.iter() {
            n = n
                .checked_mul(self.sizes[i] as u64)
                .ok_or_else(|| crate::error::Error::Domain("cardinality overflows u64".into()))?;
        }
        Ok(n)
    }

    /// n*_σ = Π_{i∈σ} (|A_i| − 1).
    pub fn reduced_cardinality(&self, sigma: ElementSet) -> Result<u64> {
        self.check_subset(sigma)?;
        let mut n: u64 = 1;
        for i in sigma.iter() {
            n = n
                .checked_mul(self.sizes[i] as u64 - 1)
                .ok_or_else(|| crate::error::Error::Domain("cardinality overflows u64".into()))?;
        }
        Ok(n)
    }

    /// Size of the smallest outcome set.
    pub fn min_size(&self) -> u32 {
        self.sizes.iter().copied().min().unwrap_or(2)
    }

    /// Encodes an intuple into `0..n_σ` where σ is its support.
    pub fn encode(&self, x: &Intuple) -> Result<usize> {
        self.check_subset(x.support())?;
        let mut idx: usize = 0;
        for (i, &o) in x.support().iter().zip(x.outcomes()) {
            let size = self.sizes[i] as usize;
            if o as usize >= size {
                return domain(format!("outcome index {o} out of range for element {i}"));
            }
            idx = idx * size + o as usize;
        }
        Ok(idx)
    }

    /// Inverse of [`encode`](Self::encode) for support σ.
    pub fn decode(&self, sigma: ElementSet, mut index: usize) -> Result<Intuple> {
        let n = self.cardinality(sigma)? as usize;
        if index >= n {
            return domain(format!("index {index} out of range for n_σ = {n}"));
        }
        let elems = sigma.indices();
        let mut outcomes = vec![0u32; elems.len()];
        for (slot, &i) in elems.iter().enumerate().rev() {
            let size = self.sizes[i] as usize;
            outcomes[slot] = (index % size) as u32;
            index /= size;
        }
        Ok(Intuple::new(sigma, outcomes))
    }

    /// All intuples with support σ in encode order.
    pub fn intuples(&self, sigma: ElementSet) -> Result<impl Iterator<Item = Intuple> + '_> {
        let n = self.cardinality(sigma)? as usize;
        Ok((0..n).map(move |k| self.decode(sigma, k).expect("index in range")))
    }

    /// Restriction of the product set to a sub-universe, re-indexed densely.
    /// The element order is preserved (ascending index).
    pub fn restrict(&self, sigma: ElementSet) -> Result<ProductSet> {
        self.check_subset(sigma)?;
        ProductSet::new(sigma.iter().map(|i| self.sizes[i]).collect())
    }
}

/// One outcome per supported element, outcomes aligned with the ascending
/// element order of the support.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Intuple {
    support: ElementSet,
    outcomes: Vec<u32>,
}

impl Intuple {
    pub fn new(support: ElementSet, outcomes: Vec<u32>) -> Self {
        assert_eq!(support.len(), outcomes.len(), "support/outcome arity mismatch");
        Intuple { support, outcomes }
    }

    pub fn empty() -> Self {
        Intuple { support: ElementSet::EMPTY, outcomes: Vec::new() }
    }

    /// The all-first-outcome intuple 1̃_σ.
    pub fn ones(sigma: ElementSet) -> Self {
        Intuple { support: sigma, outcomes: vec![0; sigma.len()] }
    }

    pub fn support(&self) -> ElementSet {
        self.support
    }

    pub fn outcomes(&self) -> &[u32] {
        &self.outcomes
    }

    pub fn outcome_of(&self, i: usize) -> Option<u32> {
        let pos = self.support.iter().position(|j| j == i)?;
        Some(self.outcomes[pos])
    }

    /// x̃_σ for σ ⊆ support.
    pub fn restrict(&self, sigma: ElementSet) -> Result<Intuple> {
        if !sigma.is_subset_of(self.support) {
            return domain(format!("{sigma:?} is not a subset of the intuple support"));
        }
        let mut outcomes = Vec::with_capacity(sigma.len());
        for (pos, i) in self.support.iter().enumerate() {
            if sigma.contains(i) {
                outcomes.push(self.outcomes[pos]);
            }
        }
        Ok(Intuple::new(sigma, outcomes))
    }

    /// Pairs `(element, outcome)` in ascending element order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.support.iter().zip(self.outcomes.iter().copied())
    }
}
