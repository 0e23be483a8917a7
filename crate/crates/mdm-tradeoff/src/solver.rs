//! Dominant-eigenpair extraction and trade-off sweeps.
//!
//! The optimal map for a mixing weight `p` is the top eigenvector of `R_p`,
//! rescaled so its squared norm equals the symmetric-subspace dimension
//! `D(N,d)` (the trace-preservation normalization). Evaluating the two
//! quadratic forms against `R_F` and `R_G` yields the fidelity pair `(F, G)`;
//! sweeping `p` over a grid traces the trade-off curve.
//!
//! Dense full diagonalization is used throughout: operator sides stay below
//! a few hundred, and the full spectrum is needed anyway for the qubit
//! spectrum-equivalence checks and for the gap diagnostics.

use crate::operators::{self, SymOperator};
use crate::sym_basis::{dimension, OccupationVector, SymBasis};
use crate::{analytic, Error, Result};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

/// Gap below which the top eigenvalue is treated as numerically degenerate.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Default eigensolver convergence threshold.
pub const DEFAULT_EIG_TOL: f64 = 1e-14;

const SIGN_PIVOT_TOL: f64 = 1e-12;

/// Amplitudes of the optimal map on `H_{+,N} ⊗ H_d`, normalized so the
/// squared norm equals `D(N,d)` and the amplitude on
/// (all-zeros occupation, letter 0) is nonnegative.
#[derive(Clone, Debug)]
pub struct ChoiVector {
    copies: usize,
    levels: usize,
    amplitudes: DVector<f64>,
}

impl ChoiVector {
    pub fn new(copies: usize, levels: usize, amplitudes: DVector<f64>) -> Self {
        Self {
            copies,
            levels,
            amplitudes,
        }
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn amplitudes(&self) -> &DVector<f64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, sym_index: usize, letter: usize) -> f64 {
        self.amplitudes[sym_index * self.levels + letter]
    }

    pub fn squared_norm(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// Superposition weight on the pure-estimation component: the amplitude
    /// at (all-zeros occupation, letter 0) divided by `sqrt(D(N,d))`.
    pub fn alpha(&self) -> f64 {
        let dim = dimension(self.copies, self.levels).expect("valid by construction") as f64;
        self.amplitudes[0] / dim.sqrt()
    }

    /// Complementary weight `sqrt(1 - alpha^2)`, clamped into `[0, 1]`.
    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha().powi(2)).clamp(0.0, 1.0).sqrt()
    }
}

/// Result of a dominant-eigenpair computation.
#[derive(Clone, Debug)]
pub struct MaxEigenpair {
    /// Largest eigenvalue.
    pub value: f64,
    /// Unit-norm eigenvector with the sign convention applied.
    pub vector: DVector<f64>,
    /// Distance to the second-largest eigenvalue.
    pub gap: f64,
}

fn symmetric_eigen_sorted(matrix: &DMatrix<f64>, tol: f64) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let dim = matrix.nrows();
    let cap = 100 * dim.max(10);
    let eig = nalgebra::linalg::SymmetricEigen::try_new(matrix.clone(), tol, cap)
        .ok_or(Error::EigenConvergence(cap))?;
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| {
        eig.eigenvalues[j]
            .partial_cmp(&eig.eigenvalues[i])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok((values, vectors))
}

fn apply_sign_convention(v: &mut DVector<f64>) {
    let pivot = if v[0].abs() > SIGN_PIVOT_TOL {
        0
    } else {
        (0..v.len())
            .find(|&i| v[i].abs() > SIGN_PIVOT_TOL)
            .unwrap_or(0)
    };
    if v[pivot] < 0.0 {
        *v *= -1.0;
    }
}

/// Dominant eigenvalue and eigenvector of a symmetric operator.
///
/// `tol` is the eigensolver convergence threshold; non-convergence within the
/// internal iteration cap is reported as an error.
pub fn max_eigenpair(op: &SymOperator, tol: f64) -> Result<MaxEigenpair> {
    let (values, vectors) = symmetric_eigen_sorted(op.matrix(), tol)?;
    let mut vector = DVector::from(vectors.column(0).into_owned());
    apply_sign_convention(&mut vector);
    let gap = if values.len() > 1 {
        values[0] - values[1]
    } else {
        f64::INFINITY
    };
    Ok(MaxEigenpair {
        value: values[0],
        vector,
        gap,
    })
}

/// Full spectrum of a symmetric operator, sorted descending.
pub fn spectrum(op: &SymOperator) -> Result<Vec<f64>> {
    Ok(symmetric_eigen_sorted(op.matrix(), DEFAULT_EIG_TOL)?.0)
}

/// Optimal map at one mixing weight, with solver diagnostics.
#[derive(Clone, Debug)]
pub struct SolvedPoint {
    pub chi: ChoiVector,
    pub lambda_max: f64,
    pub gap: f64,
    /// Set when the top eigenvalue was degenerate within [`DEGENERACY_GAP`]
    /// and the tie was broken by maximizing the `R_F` form over the span.
    pub degenerate: bool,
}

/// Solve for the optimal map at interior weight `p` given prebuilt operators.
///
/// Within a numerically degenerate top subspace the returned vector maximizes
/// `<chi|R_F|chi>` over the span, selecting the continuous limit of the curve.
pub fn optimal_map_from(rf: &SymOperator, rg: &SymOperator, p: f64) -> Result<SolvedPoint> {
    let rp = operators::build_rp_from(rf, rg, p)?;
    let (values, vectors) = symmetric_eigen_sorted(rp.matrix(), DEFAULT_EIG_TOL)?;
    let gap = if values.len() > 1 {
        values[0] - values[1]
    } else {
        f64::INFINITY
    };
    let degenerate = gap < DEGENERACY_GAP;
    let mut vector = if degenerate {
        let span: Vec<usize> = (0..values.len())
            .filter(|&i| values[0] - values[i] < DEGENERACY_GAP)
            .collect();
        let mut q = DMatrix::zeros(vectors.nrows(), span.len());
        for (col, &i) in span.iter().enumerate() {
            q.set_column(col, &vectors.column(i));
        }
        let restricted = q.transpose() * rf.matrix() * &q;
        let (_, inner) = symmetric_eigen_sorted(&restricted, DEFAULT_EIG_TOL)?;
        let w = inner.column(0);
        &q * w
    } else {
        vectors.column(0).into_owned()
    };
    apply_sign_convention(&mut vector);
    let scale = (dimension(rf.copies(), rf.levels())? as f64).sqrt();
    Ok(SolvedPoint {
        chi: ChoiVector::new(rf.copies(), rf.levels(), vector * scale),
        lambda_max: values[0],
        gap,
        degenerate,
    })
}

/// Optimal map at interior weight `p` (endpoints are served analytically by
/// [`endpoint_maps`] because `R_0` and `R_1` have degenerate top eigenvalues).
pub fn optimal_map(copies: usize, levels: usize, p: f64) -> Result<ChoiVector> {
    let rf = operators::build_rf(copies, levels)?;
    let rg = operators::build_rg_from_rf(&rf);
    Ok(optimal_map_from(&rf, &rg, p)?.chi)
}

/// Fidelity pair `(F, G)` of a map: the quadratic forms of the Choi vector
/// against `R_F` and `R_G`.
pub fn fidelities(chi: &ChoiVector, rf: &SymOperator, rg: &SymOperator) -> Result<(f64, f64)> {
    if chi.amplitudes.len() != rf.dim() || rf.dim() != rg.dim() {
        return Err(Error::DimensionMismatch(format!(
            "chi has {} amplitudes, R_F side {}, R_G side {}",
            chi.amplitudes.len(),
            rf.dim(),
            rg.dim()
        )));
    }
    let f = chi.amplitudes.dot(&(rf.matrix() * &chi.amplitudes));
    let g = chi.amplitudes.dot(&(rg.matrix() * &chi.amplitudes));
    Ok((f, g))
}

/// The two extreme maps, built analytically rather than by eigensolving.
///
/// The first realizes pure estimation, `F = G = (N+1)/(N+d)`; the second
/// leaves one copy intact, `F = 1`, `G = N/(N+d-1)`.
pub fn endpoint_maps(copies: usize, levels: usize) -> Result<(ChoiVector, ChoiVector)> {
    let basis = SymBasis::new(copies, levels)?;
    let estimation = analytic::qudit_ansatz_vector(
        &analytic::convert_params(copies, levels, 1.0, 0.0)?,
        &basis,
    )?;
    let alpha = (copies as f64 / (copies + levels - 1) as f64).sqrt();
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let identity = analytic::qudit_ansatz_vector(
        &analytic::convert_params(copies, levels, alpha, beta)?,
        &basis,
    )?;
    Ok((estimation, identity))
}

/// One point of the trade-off curve.
#[derive(Clone, Debug, Serialize)]
pub struct TradeoffPoint {
    pub p: f64,
    /// Mean output fidelity.
    #[serde(rename = "F")]
    pub output_fidelity: f64,
    /// Mean estimation fidelity.
    #[serde(rename = "G")]
    pub estimation_fidelity: f64,
    pub lambda_max: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gap: f64,
    pub degenerate: bool,
}

fn point_at(rf: &SymOperator, rg: &SymOperator, p: f64) -> Result<TradeoffPoint> {
    let solved = optimal_map_from(rf, rg, p)?;
    let (f, g) = fidelities(&solved.chi, rf, rg)?;
    Ok(TradeoffPoint {
        p,
        output_fidelity: f,
        estimation_fidelity: g,
        lambda_max: solved.lambda_max,
        alpha: solved.chi.alpha(),
        beta: solved.chi.beta(),
        gap: solved.gap,
        degenerate: solved.degenerate,
    })
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid);
    }
    for w in grid.windows(2) {
        if w[0] > w[1] {
            return Err(Error::InvalidGrid);
        }
    }
    if grid.iter().any(|&p| p <= 0.0 || p >= 1.0) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Sweep the trade-off curve over a sorted grid of interior weights, reusing
/// prebuilt operators. Points are independent and solved in parallel; the
/// output ordering follows the grid regardless of execution order.
pub fn sweep_with_operators(
    rf: &SymOperator,
    rg: &SymOperator,
    grid: &[f64],
) -> Result<Vec<TradeoffPoint>> {
    validate_grid(grid)?;
    grid.par_iter()
        .map(|&p| point_at(rf, rg, p))
        .collect::<Result<Vec<_>>>()
}

/// Sweep the trade-off curve for `copies` qudits of dimension `levels`.
pub fn tradeoff_sweep(copies: usize, levels: usize, grid: &[f64]) -> Result<Vec<TradeoffPoint>> {
    let rf = operators::build_rf(copies, levels)?;
    let rg = operators::build_rg_from_rf(&rf);
    sweep_with_operators(&rf, &rg, grid)
}

/// `n` uniform points on `[lo, hi]`, inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + i as f64 * step).collect()
}

/// Default sweep grid: 101 uniform points on `[0.005, 0.995]`, dense over the
/// curve while avoiding the degenerate endpoints.
pub fn default_p_grid() -> Vec<f64> {
    linspace(0.005, 0.995, 101)
}

/// Support flat-indices of the conjectured optimal family: the all-zeros
/// label with letter 0, plus each single-excitation label `(N-1, e_j)` paired
/// with letter `j`.
pub fn ansatz_support(basis: &SymBasis) -> Result<Vec<usize>> {
    let copies = basis.copies();
    let levels = basis.levels();
    if copies < 1 {
        return Err(Error::TooFewCopies {
            min: 1,
            got: copies,
        });
    }
    let mut zeros = vec![0usize; levels];
    zeros[0] = copies;
    let reference = OccupationVector::new(zeros);
    let reference_index = basis
        .index_of(&reference)
        .expect("reference label is in the basis");
    let mut support = vec![reference_index * levels];
    for j in 1..levels {
        let mut counts = vec![0usize; levels];
        counts[0] = copies - 1;
        counts[j] = 1;
        let occ = OccupationVector::new(counts);
        support.push(
            basis
                .index_of(&occ)
                .expect("single-excitation label is in the basis")
                * levels
                + j,
        );
    }
    Ok(support)
}
