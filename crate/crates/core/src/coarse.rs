//! Coarse-graining channels.
//!
//! A partition groups fine basis states into coarse classes. The channel
//! `Lambda` sends `|s_i><s_j|` to
//!
//! * `|c_i><c_i|` when `i = j`,
//! * `0` when `i != j` lie in the same class,
//! * `a |c_i><c_j|` when `c_i < c_j` and `a* |c_i><c_j|` when `c_i > c_j`.
//!
//! Only the support of the Choi matrix (one row per fine state) can be
//! nonzero, so the positivity analysis runs on a `fine x fine` matrix.

use crate::dual::{
    embed_single_signal, extract_walker, walk, Chirality, Gauge, WalkerBoundary, WalkerState,
};
use crate::error::{GqcaError, Result};
use crate::linalg::{eigh, eigvalsh, min_eigenvalue, trace_norm, CMatrix};
use crate::num::{complex_gaussian, cone, creal, czero, from_usize, lit, tol, Real, C};
use crate::qca::{evolve, GateParams, MAX_SITES};
use rand::Rng;

/// Smallest Choi eigenvalue still treated as zero.
pub const PSD_TOLERANCE: f64 = 1e-10;

/// Assignment of fine basis states to coarse classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoarsePartition {
    assignment: Vec<usize>,
    sizes: Vec<usize>,
}

impl CoarsePartition {
    /// A partition with equal classes; `assignment[i]` is the class of fine
    /// state `i` and classes are numbered `0..L` without gaps.
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let p = Self::with_unequal_classes(assignment)?;
        if p.sizes.iter().any(|&s| s != p.sizes[0]) {
            return Err(GqcaError::Dimension(format!(
                "class sizes {:?} are not equal",
                p.sizes
            )));
        }
        Ok(p)
    }

    /// Like [`Self::new`] but accepts classes of different sizes.
    pub fn with_unequal_classes(assignment: Vec<usize>) -> Result<Self> {
        if assignment.is_empty() {
            return Err(GqcaError::Dimension("empty partition".into()));
        }
        let l = assignment.iter().max().unwrap() + 1;
        let mut sizes = vec![0; l];
        for &c in &assignment {
            sizes[c] += 1;
        }
        if let Some(c) = sizes.iter().position(|&s| s == 0) {
            return Err(GqcaError::Dimension(format!("class {c} is empty")));
        }
        Ok(Self { assignment, sizes })
    }

    /// `L` classes of `N` consecutive fine states.
    pub fn uniform(n: usize, l: usize) -> Result<Self> {
        if n == 0 || l == 0 {
            return Err(GqcaError::Dimension("N and L must be positive".into()));
        }
        Self::new((0..n * l).map(|i| i / n).collect())
    }

    /// One-wall sector on `n_cells` cells of `2N` sites: fine state `p` is
    /// the wall on edge `p`, grouped by cell and edge parity, so that the
    /// class of `psi+-_{i,j}` is `2i` / `2i + 1` for every offset `j`.
    pub fn signal_sector(supercell: usize, n_cells: usize) -> Result<Self> {
        if supercell == 0 || n_cells == 0 {
            return Err(GqcaError::Dimension(
                "supercell and cell count must be positive".into(),
            ));
        }
        let width = 2 * supercell;
        Self::new(
            (0..width * n_cells)
                .map(|p| 2 * (p / width) + p % 2)
                .collect(),
        )
    }

    pub fn fine_dim(&self) -> usize {
        self.assignment.len()
    }

    pub fn coarse_dim(&self) -> usize {
        self.sizes.len()
    }

    pub fn class_of(&self, fine: usize) -> usize {
        self.assignment[fine]
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// The common class size, if all classes have one.
    pub fn class_size(&self) -> Option<usize> {
        self.sizes
            .iter()
            .all(|&s| s == self.sizes[0])
            .then_some(self.sizes[0])
    }
}

/// Coefficient picked up by `|s_i><s_j|`.
fn coefficient<T: Real>(p: &CoarsePartition, a: C<T>, i: usize, j: usize) -> C<T> {
    let (ci, cj) = (p.class_of(i), p.class_of(j));
    if i == j {
        cone()
    } else if ci == cj {
        czero()
    } else if ci < cj {
        a
    } else {
        a.conj()
    }
}

/// Choi matrix of the channel, `fine * coarse` square, block `(i, j)` being
/// `Lambda(|i><j|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix<T: Real> {
    pub matrix: CMatrix<T>,
    pub fine_dim: usize,
    pub coarse_dim: usize,
}

impl<T: Real> ChoiMatrix<T> {
    /// Builds the Choi matrix for any `a`, without a positivity check.
    pub fn build(partition: &CoarsePartition, a: C<T>) -> Self {
        let (f, l) = (partition.fine_dim(), partition.coarse_dim());
        let mut m = CMatrix::zeros(f * l, f * l);
        for i in 0..f {
            for j in 0..f {
                let c = coefficient(partition, a, i, j);
                m[(i * l + partition.class_of(i), j * l + partition.class_of(j))] = c;
            }
        }
        Self {
            matrix: m,
            fine_dim: f,
            coarse_dim: l,
        }
    }

    /// Block `(i, j)`, an `L x L` matrix.
    pub fn block(&self, i: usize, j: usize) -> CMatrix<T> {
        let l = self.coarse_dim;
        CMatrix::from_fn(l, l, |r, c| self.matrix[(i * l + r, j * l + c)])
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        eigvalsh(&self.matrix)
    }

    pub fn min_eigenvalue(&self) -> Result<T> {
        min_eigenvalue(&self.matrix)
    }
}

/// `Lambda` with a fixed coherence coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct CoarseChannel<T: Real> {
    partition: CoarsePartition,
    a: C<T>,
}

impl<T: Real> CoarseChannel<T> {
    /// Fails with a CP violation when the Choi matrix has an eigenvalue
    /// below `-1e-10`.
    pub fn new(partition: CoarsePartition, a: C<T>) -> Result<Self> {
        let min = ChoiMatrix::build(&partition, a).min_eigenvalue()?;
        if min < -tol::<T>(PSD_TOLERANCE) {
            return Err(GqcaError::CpViolation(format!(
                "|a| = {:?} gives Choi eigenvalue {min:?}",
                a.norm()
            )));
        }
        Ok(Self { partition, a })
    }

    pub fn partition(&self) -> &CoarsePartition {
        &self.partition
    }

    pub fn a(&self) -> C<T> {
        self.a
    }

    pub fn choi_matrix(&self) -> ChoiMatrix<T> {
        ChoiMatrix::build(&self.partition, self.a)
    }

    /// Linear action on any fine-basis operator.
    pub fn apply_operator(&self, op: &CMatrix<T>) -> Result<CMatrix<T>> {
        let f = self.partition.fine_dim();
        if op.rows() != f || op.cols() != f {
            return Err(GqcaError::Dimension(format!(
                "operator is {}x{}, partition has {f} fine states",
                op.rows(),
                op.cols()
            )));
        }
        let l = self.partition.coarse_dim();
        let mut out = CMatrix::zeros(l, l);
        for i in 0..f {
            for j in 0..f {
                let x = op[(i, j)];
                if x == czero() {
                    continue;
                }
                let c = coefficient(&self.partition, self.a, i, j);
                out[(self.partition.class_of(i), self.partition.class_of(j))] += c * x;
            }
        }
        Ok(out)
    }

    pub fn apply_channel(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        Ok(DensityMatrix {
            matrix: self.apply_operator(&rho.matrix)?,
        })
    }

    /// Operators `K_k` (`L x fine`) with `Lambda(rho) = sum K rho K^dagger`.
    pub fn kraus_decomposition(&self) -> Result<Vec<CMatrix<T>>> {
        kraus_from_choi(&self.choi_matrix())
    }
}

/// Kraus operators from a positive Choi matrix: `K_k[c, i] = sqrt(l_k) v_k[(i, c)]`.
pub fn kraus_from_choi<T: Real>(choi: &ChoiMatrix<T>) -> Result<Vec<CMatrix<T>>> {
    let e = eigh(&choi.matrix)?;
    let (f, l) = (choi.fine_dim, choi.coarse_dim);
    if let Some(&min) = e.values.first() {
        if min < -tol::<T>(PSD_TOLERANCE) {
            return Err(GqcaError::CpViolation(format!("Choi eigenvalue {min:?}")));
        }
    }
    let cutoff = tol::<T>(1e-12);
    Ok(e.values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > cutoff)
        .map(|(k, &v)| {
            let s = creal(v.sqrt());
            CMatrix::from_fn(l, f, |c, i| s * e.vectors[(i * l + c, k)])
        })
        .collect())
}

/// Applies a Kraus set to an operator.
pub fn apply_kraus<T: Real>(kraus: &[CMatrix<T>], op: &CMatrix<T>) -> CMatrix<T> {
    let l = kraus.first().map_or(0, |k| k.rows());
    kraus.iter().fold(CMatrix::zeros(l, l), |acc, k| {
        &acc + &(&(k * op) * &k.adjoint())
    })
}

/// Largest coherence coefficient keeping the channel CP, along the positive
/// real axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaxCoherence<T> {
    /// Bisection on the smallest Choi eigenvalue.
    pub by_choi: T,
    /// Bisection on the `L x L` matrix with unit diagonal and off-diagonal
    /// entries `N a`; only defined for equal classes.
    pub by_reduced: Option<T>,
}

pub fn max_coherence<T: Real>(partition: &CoarsePartition) -> Result<MaxCoherence<T>> {
    if partition.coarse_dim() < 2 {
        return Err(GqcaError::Dimension(
            "coherences need at least two coarse states".into(),
        ));
    }
    let by_choi = bisect_psd(|a| ChoiMatrix::build(partition, creal(a)).min_eigenvalue())?;
    let by_reduced = match partition.class_size() {
        Some(n) => {
            let l = partition.coarse_dim();
            let nn = from_usize::<T>(n);
            Some(bisect_psd(|a| {
                let m = CMatrix::from_fn(l, l, |r, c| if r == c { cone() } else { creal(nn * a) });
                min_eigenvalue(&m)
            })?)
        }
        None => None,
    };
    Ok(MaxCoherence {
        by_choi,
        by_reduced,
    })
}

/// Largest `a` in `[0, 1]` with `min_eig(a) >= 0`, assuming the feasible set
/// is an interval containing 0. The Choi matrix keeps exact zero eigenvalues
/// for every `a`, so the comparison allows rounding noise below zero.
fn bisect_psd<T: Real>(mut min_eig: impl FnMut(T) -> Result<T>) -> Result<T> {
    let (mut lo, mut hi) = (T::zero(), T::one());
    let floor = -tol::<T>(1e-13);
    if min_eig(hi)? >= floor {
        return Ok(hi);
    }
    let stop = T::epsilon() * lit(4.0);
    while hi - lo > stop {
        let mid = (lo + hi) / lit(2.0);
        if min_eig(mid)? >= floor {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// A validated density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Hermitian to `1e-12`, eigenvalues `>= -1e-10`, trace `1 +- 1e-12`.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(GqcaError::Density("matrix is not square".into()));
        }
        let herm = matrix.hermiticity_error();
        if herm > tol(1e-12) {
            return Err(GqcaError::Density(format!(
                "not Hermitian (error {herm:?})"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol(1e-12) || tr.im.abs() > tol(1e-12) {
            return Err(GqcaError::Density(format!("trace {tr:?}")));
        }
        let min = min_eigenvalue(&matrix)?;
        if min < -tol::<T>(PSD_TOLERANCE) {
            return Err(GqcaError::Density(format!("eigenvalue {min:?}")));
        }
        Ok(Self { matrix })
    }

    /// `|v><v|` for a normalized vector.
    pub fn pure(v: &[C<T>]) -> Result<Self> {
        Self::new(CMatrix::outer(v, v))
    }

    /// Random full-rank state `G G^dagger / tr` from a complex Gaussian `G`.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let g = CMatrix::from_fn(dim, dim, |_, _| complex_gaussian(rng));
        let m = &g * &g.adjoint();
        let tr = m.trace();
        Self::new(m.scale(tr.inv()))
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> C<T> {
        self.matrix.trace()
    }

    /// `<v|rho|v>`
    pub fn fidelity_with_pure(&self, v: &[C<T>]) -> T {
        self.matrix.expectation(v).re
    }

    pub fn trace_distance(&self, other: &Self) -> Result<T> {
        Ok(trace_norm(&(&self.matrix - &other.matrix))? / lit(2.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RenormMode {
    /// Builds the first-order evolved state directly.
    AnalyticFirstOrder,
    /// Evolves the full automaton.
    FullNumeric,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenormReport<T> {
    pub mode: RenormMode,
    pub mass: T,
    pub eps: T,
    pub supercell: usize,
    pub coarse_steps: usize,
    pub fine_sites: usize,
    pub coarse_states: usize,
    /// `<Psi|Lambda(rho)|Psi>` for the coarse walker prediction `Psi`.
    pub fidelity: T,
    /// Half the trace norm of `Lambda(rho) - sigma`.
    pub trace_distance: T,
    /// Largest entrywise difference of `Lambda(rho)` and `sigma`.
    pub max_deviation: T,
    /// Mean coarse chirality coherence over `rho_{++} * N eps`.
    pub m_cg: T,
}

/// Grains a single right mover after `n N` fine steps (`2nN` half-layers)
/// and compares with a coarse walker of mass `m / N` and lattice length
/// `N eps` after `n` coarse steps.
///
/// The wall starts at the left edge of the middle cell of `2n + 1` cells of
/// `2N` sites. The channel uses `a = 1/N` on the one-wall sector partition.
/// In analytic mode `rho` is the first-order operator
/// `|R><R| - eps m sum_k (|L_k><R| + h.c.)` and `sigma` the matching coarse
/// first-order operator; in numeric mode both are exact pure states.
pub fn renormalization_experiment<T: Real>(
    mass: T,
    eps: T,
    supercell: usize,
    coarse_steps: usize,
    mode: RenormMode,
) -> Result<RenormReport<T>> {
    let (nn, n) = (supercell, coarse_steps);
    if nn == 0 || n == 0 {
        return Err(GqcaError::Parameter("N and n must be positive".into()));
    }
    if !(eps > T::zero()) {
        return Err(GqcaError::Parameter(format!("lattice length {eps:?}")));
    }
    if mode == RenormMode::AnalyticFirstOrder && (mass * eps).abs() > lit(0.1) {
        return Err(GqcaError::Parameter(format!(
            "first-order mode needs |m eps| <= 0.1, got {:?}",
            mass * eps
        )));
    }
    let n_cells = 2 * n + 1;
    let fine_sites = 2 * nn * n_cells;
    if mode == RenormMode::FullNumeric && fine_sites > MAX_SITES {
        return Err(GqcaError::Capacity(format!(
            "{fine_sites} sites exceed the {MAX_SITES}-site lattice limit"
        )));
    }
    let partition = CoarsePartition::signal_sector(nn, n_cells)?;
    let channel = CoarseChannel::new(partition, creal(T::one() / from_usize::<T>(nn)))?;
    let l = 2 * n_cells;
    let start = 2 * nn * n; // fine edge of the initial right mover
    let fine_end = start + 2 * n * nn;
    let coarse_end = 4 * n;
    let eps_cg = from_usize::<T>(nn) * eps;
    let m_cg_expected = mass / from_usize::<T>(nn);
    let unit = |dim: usize, k: usize| {
        let mut v = vec![czero::<T>(); dim];
        v[k] = cone();
        v
    };

    let (grained, sigma, psi) = match mode {
        RenormMode::AnalyticFirstOrder => {
            let coupling = creal(-eps * mass);
            let mut rho = CMatrix::outer(&unit(fine_sites, fine_end), &unit(fine_sites, fine_end));
            for k in 0..2 * n * nn {
                let p = start + 2 * k + 1 - 2 * n * nn;
                rho[(p, fine_end)] += coupling;
                rho[(fine_end, p)] += coupling;
            }
            let coarse_coupling = creal(-eps_cg * m_cg_expected);
            let mut sigma = CMatrix::outer(&unit(l, coarse_end), &unit(l, coarse_end));
            let mut psi = unit(l, coarse_end);
            for k in 0..2 * n {
                let c = 2 * k + 1;
                sigma[(c, coarse_end)] += coarse_coupling;
                sigma[(coarse_end, c)] += coarse_coupling;
                psi[c] = coarse_coupling;
            }
            (channel.apply_operator(&rho)?, sigma, psi)
        }
        RenormMode::FullNumeric => {
            let (state, bc) = embed_single_signal::<T>(n, 0, Chirality::Right, nn, n_cells)?;
            let params = GateParams::mass(T::zero(), mass, eps);
            let (out, _) = evolve(&state, n * nn, &params, bc, false)?;
            let (w, outside) = extract_walker(&out, bc, 2 * n * nn, Gauge::ZeroOne, eps)?;
            if outside > tol(1e-12) || (w.plus[0].norm() + w.minus[0].norm()) > T::zero() {
                return Err(GqcaError::Geometry("wall left the lattice interior".into()));
            }
            // walker position x is edge x - 1
            let fine: Vec<C<T>> = (1..=fine_sites).map(|x| w.plus[x] + w.minus[x]).collect();
            let rho = DensityMatrix::pure(&fine)?;
            let coarse_params = GateParams::mass(T::zero(), m_cg_expected, eps_cg);
            let w0 = WalkerState::localized(
                l,
                2 * n,
                Chirality::Right,
                Gauge::ZeroOne,
                eps_cg,
                WalkerBoundary::Reflecting,
            )?;
            let wc = walk(&w0, &coarse_params, 2 * n)?;
            let psi: Vec<C<T>> = (0..l).map(|c| wc.plus[c] + wc.minus[c]).collect();
            let sigma = CMatrix::outer(&psi, &psi);
            (channel.apply_channel(&rho)?.matrix, sigma, psi)
        }
    };

    let diff = &grained - &sigma;
    let rho_pp = grained[(coarse_end, coarse_end)].re;
    let coh: T = (0..2 * n)
        .map(|k| grained[(2 * k + 1, coarse_end)].norm())
        .sum::<T>()
        / from_usize::<T>(2 * n);
    Ok(RenormReport {
        mode,
        mass,
        eps,
        supercell: nn,
        coarse_steps: n,
        fine_sites,
        coarse_states: l,
        fidelity: grained.expectation(&psi).re / psi.iter().map(|z| z.norm_sqr()).sum::<T>(),
        trace_distance: trace_norm(&diff)? / lit(2.0),
        max_deviation: diff.max_abs(),
        m_cg: coh / (rho_pp * eps_cg),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_qubit() -> CoarsePartition {
        CoarsePartition::with_unequal_classes(vec![0, 1, 1, 1]).unwrap()
    }

    fn c(x: f64) -> C<f64> {
        Complex::new(x, 0.0)
    }

    #[test]
    fn unequal_partition_needs_opt_in() {
        assert!(CoarsePartition::new(vec![0, 1, 1, 1]).is_err());
        assert_eq!(two_qubit().class_size(), None);
    }

    #[test]
    fn two_qubit_choi_spectrum() {
        for a in [0.0, 0.2, 1.0 / 3f64.sqrt()] {
            let mut ev = ChoiMatrix::build(&two_qubit(), c(a)).eigenvalues().unwrap();
            ev.retain(|v| v.abs() > 1e-14);
            let mut expected = vec![1.0, 1.0, 1.0 + 3f64.sqrt() * a, 1.0 - 3f64.sqrt() * a];
            expected.retain(|v: &f64| v.abs() > 1e-14);
            expected.sort_by(f64::total_cmp);
            assert_eq!(ev.len(), expected.len());
            for (x, y) in ev.iter().zip(&expected) {
                assert_abs_diff_eq!(x, y, epsilon = 1e-12);
            }
        }
        let mc = max_coherence::<f64>(&two_qubit()).unwrap();
        assert_abs_diff_eq!(mc.by_choi, 1.0 / 3f64.sqrt(), epsilon = 1e-9);
        assert_eq!(mc.by_reduced, None);
    }

    #[test]
    fn zero_coherence_is_a_projection() {
        let p = CoarsePartition::uniform(2, 3).unwrap();
        let ev = ChoiMatrix::build(&p, c(0.0)).eigenvalues().unwrap();
        assert!(ev
            .iter()
            .all(|&v| v.abs() < 1e-15 || (v - 1.0).abs() < 1e-15));
        let ch = CoarseChannel::new(p, c(0.0)).unwrap();
        for k in ch.kraus_decomposition().unwrap() {
            // partial isometry: K K^dagger is a projector
            let kk = &k * &k.adjoint();
            assert!((&(&kk * &kk) - &kk).max_abs() < 1e-12);
        }
    }

    #[test]
    fn population_and_coherence_rules() {
        let p = CoarsePartition::uniform(2, 2).unwrap();
        let ch = CoarseChannel::new(p, c(0.5)).unwrap();
        let mut rho = CMatrix::zeros(4, 4);
        rho[(0, 0)] = c(1.0);
        let out = ch.apply_operator(&rho).unwrap();
        assert_eq!(out[(0, 0)], c(1.0));
        assert_eq!(
            out.max_abs_diff(&CMatrix::from_fn(2, 2, |r, q| if r == 0 && q == 0 {
                c(1.0)
            } else {
                c(0.0)
            })),
            0.0
        );
        let mut cross = CMatrix::zeros(4, 4);
        cross[(0, 2)] = Complex::new(0.3, 0.1);
        let out = ch.apply_operator(&cross).unwrap();
        assert_eq!(out[(0, 1)], Complex::new(0.15, 0.05));
        // within-class superposition keeps unit trace
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rho = DensityMatrix::pure(&[c(s), c(s), c(0.0), c(0.0)]).unwrap();
        let out = ch.apply_channel(&rho).unwrap();
        assert!((out.trace() - c(1.0)).norm() <= 1e-15);
        assert!((out.matrix()[(0, 0)] - c(1.0)).norm() <= 1e-15);
    }

    #[test]
    fn cp_violation_and_dimension_errors() {
        let p = CoarsePartition::uniform(3, 2).unwrap();
        assert!(matches!(
            CoarseChannel::new(p.clone(), c(0.34)),
            Err(GqcaError::CpViolation(_))
        ));
        let ch = CoarseChannel::new(p, c(1.0 / 3.0)).unwrap();
        assert!(ch.choi_matrix().min_eigenvalue().unwrap().abs() < 1e-10);
        assert!(matches!(
            ch.apply_operator(&CMatrix::zeros(5, 5)),
            Err(GqcaError::Dimension(_))
        ));
    }

    #[test]
    fn max_coherence_is_one_over_n() {
        for n in 1..=3 {
            for l in 2..=4 {
                let mc = max_coherence::<f64>(&CoarsePartition::uniform(n, l).unwrap()).unwrap();
                assert_abs_diff_eq!(mc.by_choi, 1.0 / n as f64, epsilon = 1e-9);
                assert_abs_diff_eq!(mc.by_reduced.unwrap(), 1.0 / n as f64, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn kraus_reproduces_the_channel_at_the_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = CoarsePartition::uniform(3, 3).unwrap();
        let ch = CoarseChannel::new(p, c(1.0 / 3.0)).unwrap();
        let ks = ch.kraus_decomposition().unwrap();
        let completeness = ks
            .iter()
            .fold(CMatrix::zeros(9, 9), |acc, k| &acc + &(&k.adjoint() * k));
        assert!(completeness.max_abs_diff(&CMatrix::identity(9)) < 1e-10);
        let rank = ch
            .choi_matrix()
            .eigenvalues()
            .unwrap()
            .iter()
            .filter(|&&v| v > 1e-12)
            .count();
        assert_eq!(ks.len(), rank);
        for _ in 0..50 {
            let rho = DensityMatrix::random(9, &mut rng).unwrap();
            let a = ch.apply_channel(&rho).unwrap();
            let b = apply_kraus(&ks, rho.matrix());
            assert!(a.matrix().max_abs_diff(&b) < 1e-10);
        }
    }

    #[test]
    fn nested_graining_composes() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let (n1, n2, l) = (2, 3, 2);
        let fine = CoarsePartition::uniform(n1, n2 * l).unwrap();
        let mid = CoarsePartition::uniform(n2, l).unwrap();
        let direct = CoarsePartition::uniform(n1 * n2, l).unwrap();
        let c1 = CoarseChannel::new(fine, c(1.0 / n1 as f64)).unwrap();
        let c2 = CoarseChannel::new(mid, c(1.0 / n2 as f64)).unwrap();
        let cd = CoarseChannel::new(direct, c(1.0 / (n1 * n2) as f64)).unwrap();
        let rho = DensityMatrix::random(n1 * n2 * l, &mut rng).unwrap();
        let two = c2.apply_channel(&c1.apply_channel(&rho).unwrap()).unwrap();
        let one = cd.apply_channel(&rho).unwrap();
        assert!(two.matrix().max_abs_diff(one.matrix()) < 1e-15);
    }

    #[test]
    fn signal_sector_partition_layout() {
        let p = CoarsePartition::signal_sector(3, 2).unwrap();
        assert_eq!(p.fine_dim(), 12);
        assert_eq!(p.coarse_dim(), 4);
        assert_eq!(p.class_size(), Some(3));
        assert_eq!(p.class_of(0), 0);
        assert_eq!(p.class_of(5), 1);
        assert_eq!(p.class_of(6), 2);
    }

    #[test]
    fn massless_renormalization_is_trivial() {
        for mode in [RenormMode::AnalyticFirstOrder, RenormMode::FullNumeric] {
            let r = renormalization_experiment(0.0f64, 0.05, 2, 2, mode).unwrap();
            assert_eq!(r.fidelity, 1.0);
            assert_eq!(r.m_cg, 0.0);
        }
    }

    #[test]
    fn analytic_mode_is_exact() {
        for m in [0.3, 1.0] {
            let r =
                renormalization_experiment(m, 0.01, 3, 2, RenormMode::AnalyticFirstOrder).unwrap();
            assert!(r.max_deviation < 1e-15, "{r:?}");
            assert_abs_diff_eq!(r.m_cg, m / 3.0, epsilon = 1e-12);
        }
        assert!(
            renormalization_experiment(2.0f64, 0.1, 2, 2, RenormMode::AnalyticFirstOrder).is_err()
        );
    }

    #[test]
    fn numeric_mode_converges_quadratically() {
        let a = renormalization_experiment(0.5f64, 0.02, 2, 2, RenormMode::FullNumeric).unwrap();
        let b = renormalization_experiment(0.5f64, 0.01, 2, 2, RenormMode::FullNumeric).unwrap();
        let ratio = a.trace_distance / b.trace_distance;
        assert!((3.0..=5.0).contains(&ratio), "{ratio}");
        assert_abs_diff_eq!(b.m_cg, 0.25, epsilon = 1e-2);
    }

    #[test]
    fn isolated_fine_coherence_fades_like_one_over_n() {
        let em = 0.02;
        let scaled: Vec<f64> = (1..=5)
            .map(|nn| {
                let p = CoarsePartition::signal_sector(nn, 2).unwrap();
                let ch = CoarseChannel::new(p.clone(), c(1.0 / nn as f64)).unwrap();
                let (right, left) = (2 * nn, 1);
                let mut op = CMatrix::zeros(p.fine_dim(), p.fine_dim());
                op[(right, right)] = c(1.0);
                op[(left, right)] = c(em);
                op[(right, left)] = c(em);
                let out = ch.apply_operator(&op).unwrap();
                out[(p.class_of(left), p.class_of(right))].norm() * nn as f64
            })
            .collect();
        for v in scaled {
            assert_abs_diff_eq!(v, em, epsilon = 1e-15);
        }
    }

    proptest! {
        #[test]
        fn channel_preserves_trace(n in 1usize..=5, l in 1usize..=5, seed in 0u64..100, frac in 0.0..=1.0f64) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = CoarsePartition::uniform(n, l).unwrap();
            let ch = CoarseChannel::new(p, c(frac / n as f64)).unwrap();
            let rho = DensityMatrix::random(n * l, &mut rng).unwrap();
            let out = ch.apply_channel(&rho).unwrap();
            prop_assert!((out.trace() - c(1.0)).norm() <= 1e-12);
        }

        #[test]
        fn cp_boundary(n in 1usize..=5, l in 2usize..=5) {
            let p = CoarsePartition::uniform(n, l).unwrap();
            let at = ChoiMatrix::build(&p, c(1.0 / n as f64)).min_eigenvalue().unwrap();
            let past = ChoiMatrix::build(&p, c(1.0 / n as f64 + 1e-3)).min_eigenvalue().unwrap();
            prop_assert!(at >= -1e-12);
            prop_assert!(past < 0.0);
        }

        #[test]
        fn cross_class_coherence_divided_by_n(n in 1usize..=5, l in 2usize..=4, i in 0usize..20, j in 0usize..20, re in -1.0..1.0f64, im in -1.0..1.0f64) {
            let p = CoarsePartition::uniform(n, l).unwrap();
            let (i, j) = (i % (n * l), j % (n * l));
            prop_assume!(p.class_of(i) < p.class_of(j));
            let ch = CoarseChannel::new(p.clone(), c(1.0 / n as f64)).unwrap();
            let mut op = CMatrix::zeros(n * l, n * l);
            op[(i, j)] = Complex::new(re, im);
            let out = ch.apply_operator(&op).unwrap();
            let z = out[(p.class_of(i), p.class_of(j))];
            prop_assert!((z * n as f64 - Complex::new(re, im)).norm() <= 1e-15);
        }
    }
}
