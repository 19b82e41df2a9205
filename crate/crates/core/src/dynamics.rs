//! The dynamical system T_ν(μ) = μ * ν on the simplex.
//!
//! T_ν acts by right convolution, i.e. by the row-vector product μ·A(ν).
//! [`apply_left`] gives the other orientation ν * μ for callers that need
//! it; none of the limit results below are stated for it.

use crate::error::{Error, Result};
use crate::group::{coset_decomposition, CosetDecomposition};
use crate::linalg;
use crate::measure::{support_orbit, ProbMeasure, SupportOrbit};
use crate::scalar::{Rational, Scalar};
use crate::transition::{
    limit_matrix_closed_form, power_convergence, transition_matrix, PowerOutcome, DEFAULT_MAX_ITER,
};

/// Tolerance for the float check of claimed accumulation points.
pub const ACCUMULATION_TOL: f64 = 1e-10;

/// Tolerance used by the squaring loop behind that check.
const VERIFY_POWER_TOL: f64 = 1e-13;

/// One step: μ ↦ μ * ν.
pub fn apply_t<S: Scalar>(nu: &ProbMeasure<S>, mu: &ProbMeasure<S>) -> Result<ProbMeasure<S>> {
    mu.convolve(nu)
}

/// The left action μ ↦ ν * μ.
pub fn apply_left<S: Scalar>(nu: &ProbMeasure<S>, mu: &ProbMeasure<S>) -> Result<ProbMeasure<S>> {
    nu.convolve(mu)
}

/// [μ, T(μ), …, T^steps(μ)].
pub fn orbit<S: Scalar>(nu: &ProbMeasure<S>, mu: &ProbMeasure<S>, steps: usize) -> Result<Vec<ProbMeasure<S>>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(mu.clone());
    for _ in 0..steps {
        let next = apply_t(nu, out.last().unwrap())?;
        out.push(next);
    }
    Ok(out)
}

fn acyclic_orbit<S: Scalar>(nu: &ProbMeasure<S>) -> Result<SupportOrbit> {
    let orbit = support_orbit(nu, None)?;
    if orbit.acyclic {
        Ok(orbit)
    } else {
        Err(Error::NotAcyclic { period: orbit.period })
    }
}

/// lim ν^n for acyclic ν: the uniform measure on H = ⟨supp ν⟩.
pub fn limit_of_powers<S: Scalar>(nu: &ProbMeasure<S>) -> Result<ProbMeasure<S>> {
    let orbit = acyclic_orbit(nu)?;
    ProbMeasure::uniform_on(nu.group(), orbit.subgroup.members())
}

/// Accumulation points of an orbit. `points[j]` is the limit along the
/// subsequence n ≡ j (mod period).
#[derive(Debug, Clone)]
pub struct OmegaLimitReport<S> {
    pub points: Vec<ProbMeasure<S>>,
    pub periodic: bool,
    pub period: usize,
    pub verified: bool,
}

/// Accumulation points of (ν^n). For a cyclic ν these are the uniform
/// measures on the phase-indexed cycle sets of the support orbit; each one
/// is checked against float power iteration along its subsequence.
pub fn accumulation_points<S: Scalar>(nu: &ProbMeasure<S>) -> Result<OmegaLimitReport<S>> {
    let orbit = support_orbit(nu, None)?;
    if orbit.acyclic {
        let point = ProbMeasure::uniform_on(nu.group(), orbit.subgroup.members())?;
        return Ok(OmegaLimitReport { points: vec![point], periodic: false, period: 1, verified: true });
    }
    let points = orbit
        .phase_sets()
        .iter()
        .map(|k| ProbMeasure::uniform_on(nu.group(), k))
        .collect::<Result<Vec<_>>>()?;
    verify_phases(nu, orbit.period, &points)?;
    Ok(OmegaLimitReport { points, periodic: true, period: orbit.period, verified: true })
}

/// With L = lim (A^d)^M, ν^(j + dM) = ν·A^(j−1)·(A^d)^M → ν·L·A^((j−1) mod d).
fn verify_phases<S: Scalar>(nu: &ProbMeasure<S>, d: usize, points: &[ProbMeasure<S>]) -> Result<()> {
    let float_nu = nu.to_f64();
    let a = transition_matrix(&float_nu);
    let phases = match power_convergence(&a, VERIFY_POWER_TOL, DEFAULT_MAX_ITER)? {
        PowerOutcome::Oscillating { phases, .. } => phases,
        PowerOutcome::Converged { matrix, .. } => vec![matrix],
    };
    for (j, point) in points.iter().enumerate() {
        let shift = (j + d - 1) % d;
        let predicted = phases[shift % phases.len()].left_mul_vec(float_nu.weights());
        let deviation = predicted
            .iter()
            .zip(point.weights())
            .map(|(p, q)| (p - q.to_f64()).abs())
            .fold(0.0, f64::max);
        if deviation > ACCUMULATION_TOL {
            return Err(Error::VerificationFailed { index: j, deviation });
        }
    }
    Ok(())
}

/// The ω-limit of μ under T_ν for acyclic ν: μ * λ_H = μ·B.
pub fn omega_limit<S: Scalar>(nu: &ProbMeasure<S>, mu: &ProbMeasure<S>) -> Result<OmegaLimitReport<S>> {
    if !crate::group::same_group(nu.group(), mu.group()) {
        return Err(Error::GroupMismatch);
    }
    let lambda = limit_of_powers(nu)?;
    let point = mu.convolve(&lambda)?;
    Ok(OmegaLimitReport { points: vec![point], periodic: false, period: 1, verified: true })
}

/// Solutions of μ * ν = μ in the simplex.
#[derive(Debug, Clone)]
pub struct FixedPointSet {
    /// Uniform measures on the left cosets of H, whose convex hull is the set.
    pub basis: Vec<ProbMeasure<Rational>>,
    /// Affine dimension, [G : H] − 1.
    pub dimension: usize,
    pub decomposition: CosetDecomposition,
}

/// Solves μ(A − I) = 0 by exact elimination and checks the solution space
/// against the coset-uniform measures.
pub fn fixed_points(nu: &ProbMeasure<Rational>) -> Result<FixedPointSet> {
    let g = nu.group();
    let n = g.order();
    let a = transition_matrix(nu);
    // (A − I)ᵀ xᵀ = 0
    let system: Vec<Vec<Rational>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| {
                    let v = a.entries().get(i, j).clone();
                    if i == j {
                        v - Rational::from_ratio(1, 1)
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let null_dim = linalg::row_reduce(&system, n).nullspace().len();

    let orbit = support_orbit(nu, None)?;
    let decomposition = coset_decomposition(g, &orbit.subgroup)?;
    let basis = decomposition
        .blocks()
        .iter()
        .map(|b| ProbMeasure::uniform_on(g, b))
        .collect::<Result<Vec<_>>>()?;
    if null_dim != basis.len() {
        return Err(Error::Inconsistent(format!(
            "null space has dimension {null_dim}, expected {}",
            basis.len()
        )));
    }
    for b in &basis {
        if &b.convolve(nu)? != b {
            return Err(Error::Inconsistent("coset-uniform measure is not fixed".into()));
        }
    }
    Ok(FixedPointSet { dimension: basis.len() - 1, basis, decomposition })
}

/// μ ∈ L_ω(μ), i.e. μ·B = μ.
pub fn is_recurrent<S: Scalar>(nu: &ProbMeasure<S>, mu: &ProbMeasure<S>) -> Result<bool> {
    let b = limit_matrix_closed_form(nu)?;
    if !crate::group::same_group(nu.group(), mu.group()) {
        return Err(Error::GroupMismatch);
    }
    let image = b.entries.left_mul_vec(mu.weights());
    Ok(image.iter().zip(mu.weights()).all(|(x, y)| x.approx_eq(y, 1e-12)))
}

/// The basin {μ : T_ν^n(μ) → η} as block-sum constraints over the left
/// cosets of H.
#[derive(Debug, Clone)]
pub struct BasinDescription<S> {
    pub target: ProbMeasure<S>,
    pub decomposition: CosetDecomposition,
    /// `required_sums[m]` is the mass μ must put on coset block m.
    pub required_sums: Vec<S>,
    /// n − l = n(k − 1)/k.
    pub dimension: usize,
    pub feasible: bool,
    /// A coset on which η is not constant, when infeasible.
    pub witness_block: Option<usize>,
}

impl<S: Scalar> BasinDescription<S> {
    pub fn contains(&self, mu: &ProbMeasure<S>) -> bool {
        self.feasible
            && crate::group::same_group(mu.group(), self.target.group())
            && mu
                .block_sums(self.decomposition.blocks())
                .iter()
                .zip(&self.required_sums)
                .all(|(a, b)| a.approx_eq(b, 1e-12))
    }
}

pub fn basin<S: Scalar>(nu: &ProbMeasure<S>, eta: &ProbMeasure<S>) -> Result<BasinDescription<S>> {
    if !crate::group::same_group(nu.group(), eta.group()) {
        return Err(Error::GroupMismatch);
    }
    let orbit = acyclic_orbit(nu)?;
    let g = nu.group();
    let decomposition = coset_decomposition(g, &orbit.subgroup)?;
    let n = g.order();
    let l = decomposition.len();
    let witness_block = decomposition.blocks().iter().position(|b| {
        let first = eta.weight(b[0]);
        b.iter().any(|&i| !eta.weight(i).approx_eq(first, 1e-12))
    });
    let required_sums = eta.block_sums(decomposition.blocks());
    let total = crate::scalar::sum(&required_sums);
    if !S::is_unit_mass(&total) {
        return Err(Error::Inconsistent(format!("block sums total {total}")));
    }
    Ok(BasinDescription {
        target: eta.clone(),
        decomposition,
        required_sums,
        dimension: n - l,
        feasible: witness_block.is_none(),
        witness_block,
    })
}

/// Rank of the block-indicator constraint system, by exact elimination.
pub fn basin_constraint_rank(decomposition: &CosetDecomposition, n: usize) -> usize {
    let rows: Vec<Vec<Rational>> = decomposition
        .blocks()
        .iter()
        .map(|b| {
            let mut row = vec![Rational::from_ratio(0, 1); n];
            for &i in b {
                row[i] = Rational::from_ratio(1, 1);
            }
            row
        })
        .collect();
    linalg::rank(&rows, n)
}

/// Equal mass on every left coset of H.
pub fn same_omega_limit<S: Scalar>(
    nu: &ProbMeasure<S>,
    mu1: &ProbMeasure<S>,
    mu2: &ProbMeasure<S>,
) -> Result<bool> {
    let g = nu.group();
    if !crate::group::same_group(g, mu1.group()) || !crate::group::same_group(g, mu2.group()) {
        return Err(Error::GroupMismatch);
    }
    let orbit = acyclic_orbit(nu)?;
    let decomposition = coset_decomposition(g, &orbit.subgroup)?;
    let a = mu1.block_sums(decomposition.blocks());
    let b = mu2.block_sums(decomposition.blocks());
    Ok(a.iter().zip(&b).all(|(x, y)| x.approx_eq(y, 1e-12)))
}

/// Spreads mass onto the zero-weight elements of H = ⟨supp ν⟩ so the
/// support becomes H.
///
/// With a the smallest positive weight and ε̄ = min(eps, a)/2, every
/// zero-weight element of H gains ε̄/(k − |supp|) and every positive one
/// loses ε̄/|supp|. The ℓ1 distance moved is 2ε̄ ≤ eps.
pub fn acyclic_perturbation<S: Scalar>(nu: &ProbMeasure<S>, eps: &S) -> Result<ProbMeasure<S>> {
    if *eps <= S::zero() {
        return Err(Error::NonPositiveEpsilon);
    }
    let support = nu.support();
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let h = crate::group::generated_subgroup(nu.group(), &support)?;
    if support.len() == h.order() {
        return Ok(nu.clone());
    }
    let a = support.iter().map(|&i| nu.weight(i).clone()).fold(S::one(), |m, w| if w < m { w } else { m });
    let smaller = if *eps < a { eps.clone() } else { a };
    let eps_bar = smaller / S::from_usize(2);
    let gain = eps_bar.clone() / S::from_usize(h.order() - support.len());
    let loss = eps_bar / S::from_usize(support.len());
    let mut weights = nu.weights().to_vec();
    for &i in h.members() {
        if support.binary_search(&i).is_ok() {
            weights[i] = weights[i].clone() - loss.clone();
        } else {
            weights[i] = gain.clone();
        }
    }
    let out = ProbMeasure::new(nu.group().clone(), weights)
        .map_err(|e| Error::Inconsistent(format!("perturbation left the simplex: {e}")))?;
    if out.support().len() != h.order() {
        return Err(Error::Inconsistent("perturbed support is not H".into()));
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GenericReport {
    /// Every weight strictly positive.
    pub in_open_set: bool,
    /// Named checks run when `in_open_set`; each must hold.
    pub checks: Vec<(&'static str, bool)>,
}

impl GenericReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

/// For full-support ν: H = G, acyclicity, a unique fixed point equal to the
/// uniform measure, and L_ω(δ_g) uniform for every g (which covers every μ
/// by linearity).
pub fn generic_check(nu: &ProbMeasure<Rational>) -> Result<GenericReport> {
    let g = nu.group();
    let n = g.order();
    if !nu.has_full_support() {
        return Ok(GenericReport { in_open_set: false, checks: Vec::new() });
    }
    let uniform = ProbMeasure::uniform(g);
    let orbit = support_orbit(nu, None)?;
    let mut checks = vec![
        ("subgroup_is_whole_group", orbit.subgroup.order() == n),
        ("acyclic", orbit.acyclic),
    ];
    let fixed = fixed_points(nu)?;
    checks.push(("unique_fixed_point_is_uniform", fixed.dimension == 0 && fixed.basis[0] == uniform));
    let mut omega_uniform = true;
    for i in 0..n {
        let d = ProbMeasure::dirac(g, i)?;
        let w = omega_limit(nu, &d)?;
        omega_uniform &= w.points[0] == uniform;
    }
    checks.push(("omega_limit_is_uniform", omega_uniform));
    Ok(GenericReport { in_open_set: true, checks })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::group::FiniteGroup;
    use crate::testutil::*;

    fn coset_six() -> Arc<FiniteGroup> {
        Arc::new(z2z3_words(&SIX_COSET_ORDER))
    }

    #[test]
    fn one_step() {
        let nu = z3_nu();
        let g = z3();
        let e = ProbMeasure::dirac(&g, 0).unwrap();
        assert_eq!(apply_t(&nu, &e).unwrap(), nu);
        let u = ProbMeasure::uniform(&g);
        assert_eq!(apply_t(&nu, &u).unwrap(), u);
        assert_eq!(apply_t(&nu, &e).unwrap().weights(), [r(1, 3), r(1, 4), r(5, 12)]);
    }

    #[test]
    fn left_and_right_actions_differ_on_s3() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let nu = ProbMeasure::<Rational>::dirac(&s3, 1).unwrap();
        let mu = ProbMeasure::<Rational>::dirac(&s3, 3).unwrap();
        assert_ne!(apply_t(&nu, &mu).unwrap(), apply_left(&nu, &mu).unwrap());
    }

    #[test]
    fn orbits() {
        let nu = z3_nu();
        assert_eq!(orbit(&nu, &nu, 0).unwrap(), vec![nu.clone()]);
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let flip = ProbMeasure::<Rational>::dirac(&z2, 1).unwrap();
        let e = ProbMeasure::<Rational>::dirac(&z2, 0).unwrap();
        let o = orbit(&flip, &e, 4).unwrap();
        assert_eq!(o, vec![e.clone(), flip.clone(), e.clone(), flip, e]);

        let f = nu.to_f64();
        let d0 = ProbMeasure::<f64>::dirac(f.group(), 0).unwrap();
        let last = orbit(&f, &d0, 64).unwrap().pop().unwrap();
        assert!(last.weights().iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-12));
    }

    #[test]
    fn limits_of_powers() {
        assert_eq!(limit_of_powers(&z3_nu()).unwrap(), ProbMeasure::uniform(&z3()));
        let g = coset_six();
        let lim = limit_of_powers(&six_nu(&g, r(1, 2))).unwrap();
        assert_eq!(lim.weights(), [r(1, 3), r(1, 3), r(1, 3), r(0, 1), r(0, 1), r(0, 1)]);
        let e = ProbMeasure::<Rational>::dirac(&g, 0).unwrap();
        assert_eq!(limit_of_powers(&e).unwrap(), e);
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        assert!(matches!(
            limit_of_powers(&ProbMeasure::<Rational>::dirac(&z2, 1).unwrap()),
            Err(Error::NotAcyclic { period: 2 })
        ));
    }

    #[test]
    fn periodic_accumulation_points() {
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let rep = accumulation_points(&ProbMeasure::<Rational>::dirac(&z2, 1).unwrap()).unwrap();
        assert_eq!(rep.period, 2);
        assert!(rep.periodic && rep.verified);
        assert_eq!(rep.points, vec![ProbMeasure::dirac(&z2, 0).unwrap(), ProbMeasure::dirac(&z2, 1).unwrap()]);

        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let nu = exact(&z4, &[(0, 1), (1, 2), (0, 1), (1, 2)]);
        let rep = accumulation_points(&nu).unwrap();
        assert_eq!(rep.period, 2);
        assert_eq!(rep.points[0].weights(), [r(1, 2), r(0, 1), r(1, 2), r(0, 1)]);
        assert_eq!(rep.points[1].weights(), [r(0, 1), r(1, 2), r(0, 1), r(1, 2)]);

        let rep = accumulation_points(&z3_nu()).unwrap();
        assert_eq!(rep.period, 1);
        assert_eq!(rep.points, vec![ProbMeasure::uniform(&z3())]);
    }

    #[test]
    fn accumulation_with_period_three() {
        // supp = {1, 4} on Z_6: Z^m = {m, m+3}, cycle of length 3 over cosets of {0, 3}
        let z6 = Arc::new(FiniteGroup::cyclic(6).unwrap());
        let nu = exact(&z6, &[(0, 1), (1, 3), (0, 1), (0, 1), (2, 3), (0, 1)]);
        let rep = accumulation_points(&nu).unwrap();
        assert_eq!(rep.period, 3);
        assert!(rep.verified);
        // ν^m along m ≡ 1 (mod 3) tends to uniform on {1, 4}
        assert_eq!(rep.points[1].weights(), [r(0, 1), r(1, 2), r(0, 1), r(0, 1), r(1, 2), r(0, 1)]);
        assert_eq!(rep.points[0].weights(), [r(1, 2), r(0, 1), r(0, 1), r(1, 2), r(0, 1), r(0, 1)]);
    }

    #[test]
    fn accumulation_after_a_pre_period() {
        // supp = {1, 3} on Z_8: Z^2 = {2, 4, 6} is not yet a coset of {0, 2, 4, 6}
        let z8 = Arc::new(FiniteGroup::cyclic(8).unwrap());
        let nu = exact(&z8, &[(0, 1), (1, 2), (0, 1), (1, 2), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let orbit = support_orbit(&nu, None).unwrap();
        assert!(orbit.pre_period > 0);
        let rep = accumulation_points(&nu).unwrap();
        assert_eq!(rep.period, 2);
        assert!(rep.verified);
        let odd = ProbMeasure::uniform_on(&z8, &[1, 3, 5, 7]).unwrap();
        let even = ProbMeasure::uniform_on(&z8, &[0, 2, 4, 6]).unwrap();
        assert_eq!(orbit.cycle_sets(), [vec![1, 3, 5, 7], vec![0, 2, 4, 6]]);
        assert_eq!(rep.points, vec![even, odd]);
    }

    #[test]
    fn omega_limits() {
        let g = coset_six();
        let nu = six_nu(&g, r(1, 2));
        let e = ProbMeasure::dirac(&g, 0).unwrap();
        assert_eq!(omega_limit(&nu, &e).unwrap().points[0], limit_of_powers(&nu).unwrap());
        let mu = exact(&g, &[(1, 4), (1, 2), (0, 1), (1, 8), (0, 1), (1, 8)]);
        let w = omega_limit(&nu, &mu).unwrap();
        assert_eq!(w.points[0].weights(), [r(1, 4), r(1, 4), r(1, 4), r(1, 12), r(1, 12), r(1, 12)]);

        let mu2 = ProbMeasure::dirac(&g, 4).unwrap();
        let half = r(1, 2);
        let lhs = omega_limit(&nu, &mu.mix(&mu2, &half).unwrap()).unwrap().points.remove(0);
        let rhs = w.points[0].mix(&omega_limit(&nu, &mu2).unwrap().points[0], &half).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn omega_limit_on_nonnormal_subgroup_matches_iteration() {
        // H = ⟨(12)⟩ is not normal in S_3; the limit uses left cosets μ·B
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let nu = exact(&s3, &[(1, 2), (1, 2), (0, 1), (0, 1), (0, 1), (0, 1)]);
        let mu = exact(&s3, &[(0, 1), (0, 1), (1, 3), (2, 3), (0, 1), (0, 1)]);
        let w = omega_limit(&nu, &mu).unwrap().points.remove(0);
        let last = orbit(&nu.to_f64(), &mu.to_f64(), 80).unwrap().pop().unwrap();
        assert!(last.approx_eq(&w.to_f64(), 1e-12), "{last:?} vs {w:?}");
    }

    #[test]
    fn fixed_point_sets() {
        let fp = fixed_points(&z3_nu()).unwrap();
        assert_eq!(fp.dimension, 0);
        assert_eq!(fp.basis, vec![ProbMeasure::uniform(&z3())]);

        let g = Arc::new(z2z3_words(&SIX_MIXED_ORDER));
        let fp = fixed_points(&six_nu(&g, r(1, 2))).unwrap();
        assert_eq!(fp.dimension, 1);
        let idx = |l: &str| g.index_of(l).unwrap();
        let h = ProbMeasure::uniform_on(&g, &[idx("e"), idx("b"), idx("b2")]).unwrap();
        let ah = ProbMeasure::uniform_on(&g, &[idx("a"), idx("ab"), idx("ab2")]).unwrap();
        assert_eq!(fp.basis, vec![h.clone(), ah.clone()]);
        let nu = six_nu(&g, r(1, 2));
        let mix = h.mix(&ah, &r(2, 7)).unwrap();
        assert_eq!(apply_t(&nu, &mix).unwrap(), mix);

        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let full = exact(&s3, &[(1, 12), (1, 6), (1, 4), (1, 6), (1, 6), (1, 6)]);
        let fp = fixed_points(&full).unwrap();
        assert_eq!(fp.basis, vec![ProbMeasure::uniform(&s3)]);
    }

    #[test]
    fn recurrence() {
        let nu = z3_nu();
        assert!(is_recurrent(&nu, &ProbMeasure::uniform(&z3())).unwrap());
        assert!(!is_recurrent(&nu, &ProbMeasure::dirac(&z3(), 0).unwrap()).unwrap());
        let g = coset_six();
        let eta = exact(&g, &[(1, 4), (1, 4), (1, 4), (1, 12), (1, 12), (1, 12)]);
        assert!(is_recurrent(&six_nu(&g, r(1, 2)), &eta).unwrap());
    }

    #[test]
    fn basins() {
        let g = coset_six();
        let nu = six_nu(&g, r(1, 2));
        let eta = exact(&g, &[(1, 4), (1, 4), (1, 4), (1, 12), (1, 12), (1, 12)]);
        let b = basin(&nu, &eta).unwrap();
        assert!(b.feasible);
        assert_eq!(b.decomposition.blocks(), [vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(b.required_sums, [r(3, 4), r(1, 4)]);
        assert_eq!(b.dimension, 4);
        assert_eq!(6 - basin_constraint_rank(&b.decomposition, 6), 4);
        let mu = exact(&g, &[(1, 4), (1, 2), (0, 1), (1, 8), (0, 1), (1, 8)]);
        assert!(b.contains(&mu));
        assert!(b.contains(&apply_t(&nu, &mu).unwrap()));
        assert!(!b.contains(&ProbMeasure::dirac(&g, 0).unwrap()));

        let bad = exact(&g, &[(1, 2), (1, 4), (1, 4), (0, 1), (0, 1), (0, 1)]);
        let b = basin(&nu, &bad).unwrap();
        assert!(!b.feasible);
        assert_eq!(b.witness_block, Some(0));

        let u = ProbMeasure::uniform(&z3());
        let b = basin(&z3_nu(), &u).unwrap();
        assert_eq!(b.dimension, 2);
        assert!(b.contains(&ProbMeasure::dirac(&z3(), 2).unwrap()));
    }

    #[test]
    fn same_limits() {
        let g = coset_six();
        let nu = six_nu(&g, r(1, 2));
        let d = |i| ProbMeasure::<Rational>::dirac(&g, i).unwrap();
        assert!(same_omega_limit(&nu, &d(0), &d(1)).unwrap());
        assert!(!same_omega_limit(&nu, &d(0), &d(3)).unwrap());
        let mu = exact(&g, &[(1, 4), (1, 2), (0, 1), (1, 8), (0, 1), (1, 8)]);
        assert!(same_omega_limit(&nu, &mu, &apply_t(&nu, &mu).unwrap()).unwrap());
    }

    #[test]
    fn perturbations() {
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let flip = ProbMeasure::<Rational>::dirac(&z2, 1).unwrap();
        let p = acyclic_perturbation(&flip, &r(1, 2)).unwrap();
        assert_eq!(p.weights(), [r(1, 4), r(3, 4)]);
        assert_eq!(p.l1_distance(&flip).unwrap(), r(1, 2));
        assert!(crate::measure::is_acyclic(&p).unwrap().is_acyclic());

        let nu = z3_nu();
        assert_eq!(acyclic_perturbation(&nu, &r(1, 100)).unwrap(), nu);

        let g = Arc::new(z2z3_words(&SIX_MIXED_ORDER));
        let nu = six_nu(&g, r(1, 2));
        let p = acyclic_perturbation(&nu, &r(1, 6)).unwrap();
        let idx = |l: &str| g.index_of(l).unwrap();
        assert_eq!(p.weight(idx("b2")), &r(1, 12));
        assert_eq!(p.weight(idx("e")), &r(11, 24));
        assert_eq!(p.weight(idx("b")), &r(11, 24));
        assert_eq!(p.weight(idx("a")), &r(0, 1));
        assert_eq!(p.l1_distance(&nu).unwrap(), r(1, 6));

        assert_eq!(acyclic_perturbation(&nu, &r(0, 1)).unwrap_err(), Error::NonPositiveEpsilon);
    }

    #[test]
    fn generic_behaviour() {
        let rep = generic_check(&z3_nu()).unwrap();
        assert!(rep.in_open_set && rep.all_hold(), "{rep:?}");
        let g = Arc::new(z2z3_words(&SIX_MIXED_ORDER));
        assert!(!generic_check(&six_nu(&g, r(1, 2))).unwrap().in_open_set);
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let rep = generic_check(&ProbMeasure::uniform(&s3)).unwrap();
        assert!(rep.in_open_set && rep.all_hold());
    }
}
