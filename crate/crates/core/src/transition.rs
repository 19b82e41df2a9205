//! Matrix form of convolution.
//!
//! For a driving measure ν the transition matrix is A[i][j] = ν(g_i⁻¹·g_j).
//! Right multiplication of a row vector by A is convolution on the right by
//! ν, i.e. `μ·A = μ * ν`, and powers of A give convolution powers of ν.

use crate::error::{Error, Result};
use crate::group::{coset_decomposition, CosetDecomposition, Subgroup};
use crate::matrix::{Matrix, DEFAULT_SIZE_GUARD};
use crate::measure::{support_orbit, ProbMeasure};
use crate::scalar::Scalar;

/// Default tolerance for [`power_convergence`].
pub const DEFAULT_TOL: f64 = 1e-12;

/// Default multiplication budget for [`power_convergence`].
pub const DEFAULT_MAX_ITER: usize = 1 << 20;

#[derive(Debug, Clone)]
pub struct TransitionMatrix<S> {
    measure: ProbMeasure<S>,
    entries: Matrix<S>,
}

impl<S: Scalar> TransitionMatrix<S> {
    pub fn measure(&self) -> &ProbMeasure<S> {
        &self.measure
    }

    pub fn entries(&self) -> &Matrix<S> {
        &self.entries
    }

    /// μ·A as a measure.
    pub fn apply(&self, mu: &ProbMeasure<S>) -> Result<ProbMeasure<S>> {
        if !crate::group::same_group(mu.group(), self.measure.group()) {
            return Err(Error::GroupMismatch);
        }
        let w = self.entries.left_mul_vec(mu.weights());
        ProbMeasure::new(mu.group().clone(), w)
    }
}

pub fn transition_matrix<S: Scalar>(m: &ProbMeasure<S>) -> TransitionMatrix<S> {
    let g = m.group();
    let entries = Matrix::from_fn(g.order(), |i, j| m.weight(g.mul(g.inv(i), j)).clone());
    TransitionMatrix { measure: m.clone(), entries }
}

/// A^m by squaring, under the default exact size guard.
pub fn matrix_power<S: Scalar>(a: &TransitionMatrix<S>, m: u64) -> Result<Matrix<S>> {
    a.entries.pow_guarded(m, DEFAULT_SIZE_GUARD)
}

/// The limit B of A^m for acyclic ν: b_ij = 1/|H| when g_i⁻¹g_j ∈ H.
#[derive(Debug, Clone)]
pub struct LimitMatrix<S> {
    pub entries: Matrix<S>,
    pub subgroup: Subgroup,
    pub block_value: S,
}

pub fn limit_matrix_closed_form<S: Scalar>(m: &ProbMeasure<S>) -> Result<LimitMatrix<S>> {
    let orbit = support_orbit(m, None)?;
    if !orbit.acyclic {
        return Err(Error::NotAcyclic { period: orbit.period });
    }
    let h = orbit.subgroup;
    let g = m.group();
    let block_value = S::one() / S::from_usize(h.order());
    let entries = Matrix::from_fn(g.order(), |i, j| {
        if h.contains(g.mul(g.inv(i), j)) {
            block_value.clone()
        } else {
            S::zero()
        }
    });
    Ok(LimitMatrix { entries, subgroup: h, block_value })
}

#[derive(Debug, Clone)]
pub enum PowerOutcome {
    /// A^m settled; `matrix` is the stabilized power.
    Converged { matrix: Matrix<f64>, iterations: usize },
    /// The powers cycle with `period`; `phases[r]` is the limit of A^m along
    /// m ≡ r (mod period) for large m, up to a shift by the pre-period.
    Oscillating { period: usize, phases: Vec<Matrix<f64>>, iterations: usize },
}

impl PowerOutcome {
    pub fn iterations(&self) -> usize {
        match self {
            PowerOutcome::Converged { iterations, .. } | PowerOutcome::Oscillating { iterations, .. } => {
                *iterations
            }
        }
    }

    pub fn converged(&self) -> Option<&Matrix<f64>> {
        match self {
            PowerOutcome::Converged { matrix, .. } => Some(matrix),
            PowerOutcome::Oscillating { .. } => None,
        }
    }
}

/// Float power iteration.
///
/// The candidate period d comes from the support orbit of ν. The powers of
/// C = A^d are squared until two successive squares differ by less than
/// `tol` in the max-entry norm; the limit L is then classified by comparing
/// L·A with L. `max_iter` bounds the number of matrix multiplications.
pub fn power_convergence(a: &TransitionMatrix<f64>, tol: f64, max_iter: usize) -> Result<PowerOutcome> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let orbit = support_orbit(a.measure(), None)?;
    let period = orbit.period;
    let base = a.entries();
    let mut iterations = 0;
    let step = |iterations: &mut usize| -> Result<()> {
        if *iterations >= max_iter {
            return Err(Error::NoConvergence { max_iter });
        }
        *iterations += 1;
        Ok(())
    };

    let mut c = base.clone();
    for _ in 1..period {
        step(&mut iterations)?;
        c = c.mul(base);
    }
    let limit = loop {
        step(&mut iterations)?;
        let next = c.mul(&c);
        if next.max_abs_diff(&c) < tol {
            break next;
        }
        c = next;
    };

    step(&mut iterations)?;
    let shifted = limit.mul(base);
    if shifted.max_abs_diff(&limit) < tol {
        return Ok(PowerOutcome::Converged { matrix: limit, iterations });
    }
    let mut phases = vec![limit, shifted];
    while phases.len() < period {
        step(&mut iterations)?;
        let next = phases.last().unwrap().mul(base);
        phases.push(next);
    }
    step(&mut iterations)?;
    let wrapped = phases.last().unwrap().mul(base);
    if wrapped.max_abs_diff(&phases[0]) >= tol {
        return Err(Error::NoConvergence { max_iter });
    }
    Ok(PowerOutcome::Oscillating { period, phases, iterations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockViolation {
    /// Nonzero entry between different cosets (original indices).
    OffDiagonal { row: usize, col: usize },
    /// Diagonal block `block` differs from the block on H at (row, col)
    /// within the block.
    Diagonal { block: usize, row: usize, col: usize },
}

#[derive(Debug, Clone)]
pub struct BlockReport {
    pub decomposition: CosetDecomposition,
    pub violations: Vec<BlockViolation>,
}

impl BlockReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// ν(H⁻¹×H) over the sorted members of H.
pub fn restricted_block<S: Scalar>(m: &ProbMeasure<S>, h: &Subgroup) -> Matrix<S> {
    let g = m.group();
    let members = h.members();
    Matrix::from_fn(members.len(), |s, t| m.weight(g.mul(g.inv(members[s]), members[t])).clone())
}

/// Checks that, listed coset by coset, A is block diagonal with every
/// diagonal block equal to ν(H⁻¹×H).
pub fn verify_block_structure<S: Scalar>(m: &ProbMeasure<S>) -> Result<BlockReport> {
    let orbit = support_orbit(m, None)?;
    let g = m.group();
    let decomposition = coset_decomposition(g, &orbit.subgroup)?;
    let a = transition_matrix(m);
    let perm = decomposition.relabeling();
    let k = orbit.subgroup.order();
    let relabeled = a.entries().select(perm, perm);
    let block_h = restricted_block(m, &orbit.subgroup);
    let mut violations = Vec::new();
    for i in 0..g.order() {
        for j in 0..g.order() {
            let v = relabeled.get(i, j);
            if i / k != j / k {
                if !v.is_zero() {
                    violations.push(BlockViolation::OffDiagonal { row: perm[i], col: perm[j] });
                }
            } else if v != block_h.get(i % k, j % k) {
                violations.push(BlockViolation::Diagonal { block: i / k, row: i % k, col: j % k });
            }
        }
    }
    Ok(BlockReport { decomposition, violations })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primitivity {
    pub primitive: bool,
    /// Smallest e with every entry of the block's e-th power positive.
    pub exponent: Option<usize>,
    /// Wielandt bound (k − 1)² + 1 used as the search horizon.
    pub horizon: usize,
}

/// Boolean powering of the pattern of ν(H⁻¹×H) up to the Wielandt bound.
pub fn is_primitive_restricted<S: Scalar>(m: &ProbMeasure<S>) -> Result<Primitivity> {
    let support = m.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let h = crate::group::generated_subgroup(m.group(), &support)?;
    let k = h.order();
    let horizon = (k - 1) * (k - 1) + 1;
    let block = restricted_block(m, &h);
    let pattern = BitMatrix::from_fn(k, |s, t| block.get(s, t).is_positive_mass(crate::scalar::FLOAT_ZERO_THRESHOLD));
    let mut power = pattern.clone();
    for e in 1..=horizon {
        if power.is_full() {
            return Ok(Primitivity { primitive: true, exponent: Some(e), horizon });
        }
        power = power.mul(&pattern);
    }
    Ok(Primitivity { primitive: false, exponent: None, horizon })
}

#[derive(Clone)]
struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let words = n.div_ceil(64);
        let mut bits = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    bits[i * words + j / 64] |= 1 << (j % 64);
                }
            }
        }
        BitMatrix { n, words, bits }
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    fn get(&self, i: usize, j: usize) -> bool {
        self.row(i)[j / 64] >> (j % 64) & 1 == 1
    }

    fn mul(&self, other: &BitMatrix) -> BitMatrix {
        let mut bits = vec![0u64; self.bits.len()];
        for i in 0..self.n {
            let out = &mut bits[i * self.words..(i + 1) * self.words];
            for k in 0..self.n {
                if self.get(i, k) {
                    for (o, w) in out.iter_mut().zip(other.row(k)) {
                        *o |= w;
                    }
                }
            }
        }
        BitMatrix { n: self.n, words: self.words, bits }
    }

    fn is_full(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j)))
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;
    use crate::scalar::{rational, Rational};
    use crate::testutil::*;

    fn rows(m: &Matrix<Rational>) -> Vec<Vec<Rational>> {
        m.rows()
    }

    #[test]
    fn z3_transition_matrix() {
        let a = transition_matrix(&z3_nu());
        let expect = vec![
            vec![r(1, 3), r(1, 4), r(5, 12)],
            vec![r(5, 12), r(1, 3), r(1, 4)],
            vec![r(1, 4), r(5, 12), r(1, 3)],
        ];
        assert_eq!(rows(a.entries()), expect);
        assert!(a.entries().is_doubly_stochastic());
    }

    #[test]
    fn six_element_transition_pattern() {
        let g = Arc::new(z2z3_words(&SIX_MIXED_ORDER));
        let alpha = r(1, 4);
        let beta = r(3, 4);
        let a = transition_matrix(&six_nu(&g, alpha.clone()));
        // positions of (1 − α) in each row
        let off = [4, 3, 0, 5, 2, 1];
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j {
                    alpha.clone()
                } else if j == off[i] {
                    beta.clone()
                } else {
                    r(0, 1)
                };
                assert_eq!(a.entries().get(i, j), &expect, "({i},{j})");
            }
        }
    }

    #[test]
    fn dirac_identity_gives_identity_matrix() {
        let g = z3();
        let a = transition_matrix(&ProbMeasure::<Rational>::dirac(&g, 0).unwrap());
        assert_eq!(a.entries(), &Matrix::identity(3));
    }

    #[test]
    fn powers_match_convolution() {
        let nu = z3_nu();
        let a = transition_matrix(&nu);
        assert_eq!(matrix_power(&a, 0).unwrap(), Matrix::identity(3));
        assert_eq!(&matrix_power(&a, 1).unwrap(), a.entries());
        let a2 = matrix_power(&a, 2).unwrap();
        let nu2 = nu.convolve(&nu).unwrap();
        assert_eq!(&a2, transition_matrix(&nu2).entries());
        assert_eq!(a2.get(0, 0), &rational(23, 72));
    }

    #[test]
    fn float_power_iteration_on_z3() {
        let a = transition_matrix(&z3_nu().to_f64());
        let out = power_convergence(&a, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let m = out.converged().expect("converges");
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.get(i, j) - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn involution_oscillates() {
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let a = transition_matrix(&ProbMeasure::<f64>::dirac(&z2, 1).unwrap());
        match power_convergence(&a, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap() {
            PowerOutcome::Oscillating { period, phases, .. } => {
                assert_eq!(period, 2);
                assert_ne!(phases[0], phases[1]);
            }
            other => panic!("expected oscillation, got {other:?}"),
        }
        assert!(matches!(power_convergence(&a, DEFAULT_TOL, 1), Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn six_element_float_limit_matches_pattern() {
        let g = Arc::new(z2z3_words(&SIX_MIXED_ORDER));
        let nu = six_nu(&g, r(1, 2));
        let a = transition_matrix(&nu.to_f64());
        let out = power_convergence(&a, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
        let lim = limit_matrix_closed_form(&nu).unwrap();
        assert!(out.converged().unwrap().max_abs_diff(&lim.entries.to_f64()) < 1e-12);
        for i in 0..6 {
            for j in 0..6 {
                let expect = if (i + j) % 2 == 0 { r(1, 3) } else { r(0, 1) };
                assert_eq!(lim.entries.get(i, j), &expect);
            }
        }
        assert_eq!(lim.entries.mul(&lim.entries), lim.entries);
    }

    #[test]
    fn closed_form_limits() {
        let lim = limit_matrix_closed_form(&z3_nu()).unwrap();
        assert!(lim.entries.rows().iter().flatten().all(|x| *x == r(1, 3)));
        let g = z3();
        let lim = limit_matrix_closed_form(&ProbMeasure::<Rational>::dirac(&g, 0).unwrap()).unwrap();
        assert_eq!(lim.entries, Matrix::identity(3));
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        assert_eq!(
            limit_matrix_closed_form(&ProbMeasure::<Rational>::dirac(&z2, 1).unwrap()).unwrap_err(),
            Error::NotAcyclic { period: 2 }
        );
    }

    #[test]
    fn block_structure() {
        let g = Arc::new(z2z3_words(&SIX_MIXED_ORDER));
        let report = verify_block_structure(&six_nu(&g, r(1, 3))).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
        assert_eq!(report.decomposition.len(), 2);

        let report = verify_block_structure(&z3_nu()).unwrap();
        assert!(report.holds());
        assert_eq!(report.decomposition.len(), 1);

        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let nu = exact(&z4, &[(1, 3), (0, 1), (2, 3), (0, 1)]);
        let report = verify_block_structure(&nu).unwrap();
        assert!(report.holds());
        assert_eq!(report.decomposition.blocks(), [vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn primitivity() {
        let g = Arc::new(z2z3_words(&SIX_MIXED_ORDER));
        let p = is_primitive_restricted(&six_nu(&g, r(1, 2))).unwrap();
        assert!(p.primitive);
        assert_eq!(p.exponent, Some(2));

        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let p = is_primitive_restricted(&ProbMeasure::<Rational>::dirac(&z2, 1).unwrap()).unwrap();
        assert!(!p.primitive);
        assert_eq!(p.horizon, 2);

        let p = is_primitive_restricted(&ProbMeasure::<Rational>::uniform(&z3())).unwrap();
        assert_eq!(p.exponent, Some(1));
    }
}
