//! Probability measures on a finite group and the operations on them that
//! do not involve matrices: convolution, integration, pushforward and the
//! support-power orbit that decides acyclicity.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{generated_subgroup, same_group, GroupHom, GroupRef, Subgroup};
use crate::matrix::Matrix;
use crate::scalar::{self, Scalar, FLOAT_ZERO_THRESHOLD};

/// A point of the simplex Δ_n, index-aligned with its group.
#[derive(Debug, Clone)]
pub struct ProbMeasure<S> {
    group: GroupRef,
    weights: Vec<S>,
}

impl<S: Scalar> PartialEq for ProbMeasure<S> {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && same_group(&self.group, &other.group)
    }
}

impl<S: Scalar> ProbMeasure<S> {
    /// Validates simplex membership: nonnegative weights with total mass 1
    /// (exactly, or within 1e-12 for floats).
    pub fn new(group: GroupRef, weights: Vec<S>) -> Result<Self> {
        if weights.len() != group.order() {
            return Err(Error::WrongLength { expected: group.order(), got: weights.len() });
        }
        if let Some(index) = weights.iter().position(|w| *w < S::zero()) {
            return Err(Error::NegativeWeight { index });
        }
        let total = scalar::sum(&weights);
        if !S::is_unit_mass(&total) {
            return Err(Error::MassNotOne { sum: total.to_string() });
        }
        Ok(ProbMeasure { group, weights })
    }

    pub fn dirac(group: &GroupRef, index: usize) -> Result<Self> {
        group.check_index(index)?;
        let mut weights = vec![S::zero(); group.order()];
        weights[index] = S::one();
        Ok(ProbMeasure { group: group.clone(), weights })
    }

    /// Uniform mass on a nonempty set of distinct indices.
    pub fn uniform_on(group: &GroupRef, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySupport);
        }
        let mass = S::one() / S::from_usize(indices.len());
        let mut weights = vec![S::zero(); group.order()];
        for &i in indices {
            group.check_index(i)?;
            weights[i] = mass.clone();
        }
        Self::new(group.clone(), weights)
    }

    pub fn uniform(group: &GroupRef) -> Self {
        let all: Vec<usize> = (0..group.order()).collect();
        Self::uniform_on(group, &all).expect("groups are nonempty")
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &S {
        &self.weights[i]
    }

    pub fn to_f64(&self) -> ProbMeasure<f64> {
        ProbMeasure { group: self.group.clone(), weights: scalar::to_float_vec(&self.weights) }
    }

    /// Indices with strictly positive weight.
    pub fn support(&self) -> Vec<usize> {
        self.support_with_threshold(FLOAT_ZERO_THRESHOLD)
    }

    /// Float mode treats weights at or below `threshold` as zero; exact mode
    /// ignores it.
    pub fn support_with_threshold(&self, threshold: f64) -> Vec<usize> {
        (0..self.weights.len()).filter(|&i| self.weights[i].is_positive_mass(threshold)).collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.support().len() == self.group.order()
    }

    fn check_same_group(&self, other: &GroupRef) -> Result<()> {
        if same_group(&self.group, other) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `(self * other)[k] = Σ_{g_i g_j = g_k} self[i]·other[j]`; `self`
    /// supplies the left factor of each product.
    pub fn convolve(&self, other: &ProbMeasure<S>) -> Result<ProbMeasure<S>> {
        self.check_same_group(&other.group)?;
        let g = &self.group;
        let mut out = vec![S::zero(); g.order()];
        for (i, a) in self.weights.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.weights.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = g.mul(i, j);
                out[k] = out[k].clone() + a.clone() * b.clone();
            }
        }
        Ok(ProbMeasure { group: g.clone(), weights: out })
    }

    /// Convex combination `alpha·self + (1 − alpha)·other`.
    pub fn mix(&self, other: &ProbMeasure<S>, alpha: &S) -> Result<ProbMeasure<S>> {
        self.check_same_group(&other.group)?;
        let beta = S::one() - alpha.clone();
        let weights = self
            .weights
            .iter()
            .zip(&other.weights)
            .map(|(a, b)| alpha.clone() * a.clone() + beta.clone() * b.clone())
            .collect();
        ProbMeasure::new(self.group.clone(), weights)
    }

    /// Σ_i |self_i − other_i|.
    pub fn l1_distance(&self, other: &ProbMeasure<S>) -> Result<S> {
        self.check_same_group(&other.group)?;
        Ok(self
            .weights
            .iter()
            .zip(&other.weights)
            .fold(S::zero(), |acc, (a, b)| acc + (a.clone() - b.clone()).abs_val()))
    }

    /// φ_♯μ: mass of each target element is the mass of its preimage.
    pub fn pushforward(&self, phi: &GroupHom) -> Result<ProbMeasure<S>> {
        self.check_same_group(phi.source())?;
        let mut out = vec![S::zero(); phi.target().order()];
        for (i, w) in self.weights.iter().enumerate() {
            let j = phi.apply(i);
            out[j] = out[j].clone() + w.clone();
        }
        Ok(ProbMeasure { group: phi.target().clone(), weights: out })
    }

    /// Sums of the weights over each index block.
    pub fn block_sums(&self, blocks: &[Vec<usize>]) -> Vec<S> {
        blocks
            .iter()
            .map(|b| b.iter().fold(S::zero(), |acc, &i| acc + self.weights[i].clone()))
            .collect()
    }

    /// Entrywise comparison within `tol` (exact mode: equality).
    pub fn approx_eq(&self, other: &ProbMeasure<S>, tol: f64) -> bool {
        same_group(&self.group, &other.group)
            && self.weights.iter().zip(&other.weights).all(|(a, b)| a.approx_eq(b, tol))
    }
}

/// A real function on the group, stored as its value vector f(G).
#[derive(Debug, Clone)]
pub struct TestFunction<S> {
    group: GroupRef,
    values: Vec<S>,
}

impl<S: Scalar> TestFunction<S> {
    pub fn new(group: GroupRef, values: Vec<S>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::WrongLength { expected: group.order(), got: values.len() });
        }
        Ok(TestFunction { group, values })
    }

    pub fn constant(group: &GroupRef, c: S) -> Self {
        TestFunction { group: group.clone(), values: vec![c; group.order()] }
    }

    pub fn indicator(group: &GroupRef, index: usize) -> Result<Self> {
        group.check_index(index)?;
        let mut values = vec![S::zero(); group.order()];
        values[index] = S::one();
        Ok(TestFunction { group: group.clone(), values })
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// f(G²): entry [i][j] is f(g_i·g_j).
    pub fn on_products(&self) -> Matrix<S> {
        let g = &self.group;
        Matrix::from_fn(g.order(), |i, j| self.values[g.mul(i, j)].clone())
    }
}

/// ⟨f(G), μ⟩.
pub fn integrate<S: Scalar>(f: &TestFunction<S>, m: &ProbMeasure<S>) -> Result<S> {
    m.check_same_group(&f.group)?;
    Ok(f.values
        .iter()
        .zip(&m.weights)
        .fold(S::zero(), |acc, (x, w)| acc + x.clone() * w.clone()))
}

/// The bilinear form ⟨a, f(G²)·b⟩ = Σ_{i,j} a_i b_j f(g_i g_j).
///
/// The left measure pairs with the row index of f(G²), so this equals
/// `integrate(f, a.convolve(b))`.
pub fn bilinear_pairing<S: Scalar>(
    f: &TestFunction<S>,
    a: &ProbMeasure<S>,
    b: &ProbMeasure<S>,
) -> Result<S> {
    a.check_same_group(&f.group)?;
    b.check_same_group(&f.group)?;
    let fg2 = f.on_products();
    let n = f.group.order();
    let mut acc = S::zero();
    for i in 0..n {
        if a.weights[i].is_zero() {
            continue;
        }
        let row = fg2.row(i);
        let inner = (0..n).fold(S::zero(), |s, j| s + row[j].clone() * b.weights[j].clone());
        acc = acc + a.weights[i].clone() * inner;
    }
    Ok(acc)
}

/// The sequence of support powers Z₊(ν)^m with its eventual cycle.
#[derive(Debug, Clone)]
pub struct SupportOrbit {
    support: Vec<usize>,
    /// `sets[m]` is Z₊(ν)^(m+1).
    pub sets: Vec<Vec<usize>>,
    /// Index into `sets` of the first set that lies on the cycle.
    pub pre_period: usize,
    pub period: usize,
    pub subgroup: Subgroup,
    pub acyclic: bool,
    /// Smallest N with Z₊(ν)^N = H, when acyclic.
    pub witness_n: Option<usize>,
}

impl SupportOrbit {
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn cycle_sets(&self) -> &[Vec<usize>] {
        &self.sets[self.pre_period..]
    }

    /// Z₊(ν)^m for any m ≥ 1, using periodicity past the recorded prefix.
    pub fn power_set(&self, m: usize) -> &[usize] {
        assert!(m >= 1, "support powers start at 1");
        let idx = m - 1;
        if idx < self.sets.len() {
            &self.sets[idx]
        } else {
            let t = self.pre_period;
            &self.sets[t + (idx - t) % self.period]
        }
    }

    /// The cycle sets indexed by phase: entry j is Z₊(ν)^m for every large
    /// m ≡ j (mod period).
    pub fn phase_sets(&self) -> Vec<Vec<usize>> {
        let first = self.pre_period + 1;
        (0..self.period)
            .map(|j| {
                let m = first + (j + self.period - first % self.period) % self.period;
                self.power_set(m).to_vec()
            })
            .collect()
    }

    /// Which cycle set Z₊(ν)^m falls on, for m past the pre-period.
    pub fn cycle_phase(&self, m: usize) -> usize {
        let idx = m - 1;
        debug_assert!(idx >= self.pre_period);
        (idx - self.pre_period) % self.period
    }
}

/// Default step cap for [`support_orbit`]: 2^|H|, at most 10^6.
pub fn default_max_steps(subgroup_order: usize) -> usize {
    if subgroup_order >= 20 {
        1_000_000
    } else {
        (1usize << subgroup_order).min(1_000_000)
    }
}

/// Iterates S_{m+1} = S_m · supp(ν) until a set repeats.
pub fn support_orbit<S: Scalar>(m: &ProbMeasure<S>, max_steps: Option<usize>) -> Result<SupportOrbit> {
    let support = m.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let g = m.group();
    let subgroup = generated_subgroup(g, &support)?;
    let max_steps = max_steps.unwrap_or_else(|| default_max_steps(subgroup.order()));

    let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut sets: Vec<Vec<usize>> = Vec::new();
    let mut current = support.clone();
    let pre_period = loop {
        if let Some(&first) = seen.get(&current) {
            break first;
        }
        if sets.len() >= max_steps {
            return Err(Error::MaxStepsExceeded { max_steps });
        }
        seen.insert(current.clone(), sets.len());
        let next = g.set_product(&current, &support);
        sets.push(std::mem::replace(&mut current, next));
    };
    let period = sets.len() - pre_period;
    let acyclic = period == 1 && sets[pre_period] == subgroup.members();
    let witness_n = if acyclic {
        sets.iter().position(|s| s == subgroup.members()).map(|i| i + 1)
    } else {
        None
    };
    Ok(SupportOrbit { support, sets, pre_period, period, subgroup, acyclic, witness_n })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Acyclicity {
    Acyclic { witness_n: usize },
    Cyclic { period: usize, cycle_sets: Vec<Vec<usize>> },
}

impl Acyclicity {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic { .. })
    }
}

pub fn is_acyclic<S: Scalar>(m: &ProbMeasure<S>) -> Result<Acyclicity> {
    let orbit = support_orbit(m, None)?;
    Ok(match orbit.witness_n {
        Some(witness_n) => Acyclicity::Acyclic { witness_n },
        None => Acyclicity::Cyclic { period: orbit.period, cycle_sets: orbit.cycle_sets().to_vec() },
    })
}
