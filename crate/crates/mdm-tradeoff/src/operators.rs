//! Dense operators on the product space `H_{+,N} ⊗ H_d`.
//!
//! The workhorse objects are the symmetric projector on `N+1` qudits written
//! in the occupation ⊗ letter product basis, its partial transposition over
//! the `N` input qudits (`R_F`), the estimation-side reduction (`R_G`), and
//! the mixture `R_p = p R_F + (1-p) R_G` whose dominant eigenvector encodes
//! the optimal map.
//!
//! Everything is stored dense; sizes stay at or below a few hundred for the
//! supported parameter range, so no sparsity is exploited. The flat index
//! convention is `sym_index * d + letter`, which makes the output-side trace
//! a contiguous block operation.

use crate::sym_basis::{branch, dimension, SymBasis};
use crate::{Error, Result};
use nalgebra::DMatrix;
use std::fmt::Write as _;

/// Side limit for dense construction of product-space operators.
pub const SIZE_LIMIT: usize = 2000;

/// Real symmetric operator on `H_{+,N} ⊗ H_d` with its attached basis.
#[derive(Clone, Debug)]
pub struct SymOperator {
    basis: SymBasis,
    matrix: DMatrix<f64>,
}

impl SymOperator {
    fn new(basis: SymBasis, matrix: DMatrix<f64>) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.len() * basis.levels());
        Self { basis, matrix }
    }

    pub fn copies(&self) -> usize {
        self.basis.copies()
    }

    pub fn levels(&self) -> usize {
        self.basis.levels()
    }

    /// Matrix side `D(N,d) * d`.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn basis(&self) -> &SymBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Flat index of the pair (symmetric-state index, letter).
    pub fn flat_index(&self, sym_index: usize, letter: usize) -> usize {
        sym_index * self.levels() + letter
    }

    pub fn entry(&self, row: (usize, usize), col: (usize, usize)) -> f64 {
        self.matrix[(self.flat_index(row.0, row.1), self.flat_index(col.0, col.1))]
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// New operator over the same basis with a replacement matrix of the
    /// same side. Useful for test hooks and synthetic operators.
    pub fn with_matrix(&self, matrix: DMatrix<f64>) -> SymOperator {
        assert_eq!(matrix.nrows(), self.dim());
        assert_eq!(matrix.ncols(), self.dim());
        SymOperator::new(self.basis.clone(), matrix)
    }

    /// Debug dump: header line `N d dim`, then the matrix row-major, one row
    /// per line. Not a stability contract.
    pub fn to_text_matrix(&self) -> String {
        let mut out = String::new();
        let dim = self.dim();
        let _ = writeln!(out, "{} {} {}", self.copies(), self.levels(), dim);
        for r in 0..dim {
            for c in 0..dim {
                if c > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{:.16e}", self.matrix[(r, c)]);
            }
            out.push('\n');
        }
        out
    }
}

fn guarded_basis(copies: usize, levels: usize) -> Result<SymBasis> {
    if copies < 1 {
        return Err(Error::TooFewCopies {
            min: 1,
            got: copies,
        });
    }
    let dim = dimension(copies, levels)? * levels;
    if dim > SIZE_LIMIT {
        return Err(Error::SizeLimit {
            dim,
            limit: SIZE_LIMIT,
        });
    }
    SymBasis::new(copies, levels)
}

/// Projector onto the symmetric subspace of `N+1` qudits, represented on
/// `H_{+,N} ⊗ H_d` through the branching decomposition: the entry
/// `((m,a),(n,b))` sums `c(S,a) c(S,b)` over all `(N+1)`-labels `S` with
/// `S - e_a = m` and `S - e_b = n`. Idempotent with trace `D(N+1, d)`.
pub fn build_projector(copies: usize, levels: usize) -> Result<SymOperator> {
    let basis = guarded_basis(copies, levels)?;
    let parent_basis = SymBasis::new(copies + 1, levels)?;
    let dim = basis.len() * levels;
    let mut matrix = DMatrix::zeros(dim, dim);
    for parent in parent_basis.states() {
        let terms = branch(parent)?;
        for t1 in &terms {
            let m = basis
                .index_of(&t1.child)
                .expect("branch child is an N-copy basis state");
            for t2 in &terms {
                let n = basis
                    .index_of(&t2.child)
                    .expect("branch child is an N-copy basis state");
                matrix[(m * levels + t1.letter, n * levels + t2.letter)] +=
                    t1.coefficient * t2.coefficient;
            }
        }
    }
    Ok(SymOperator::new(basis, matrix))
}

/// Transposition over the `N` input qudits, restricted to the symmetric
/// subspace. Occupation basis vectors have real amplitudes in the
/// computational basis, so the restriction acts as an index transposition on
/// the symmetric factor: entry `((m,a),(n,b))` of the result is entry
/// `((n,a),(m,b))` of the input.
pub fn partial_transpose_input(op: &SymOperator) -> SymOperator {
    let d = op.levels();
    let states = op.basis().len();
    let mut matrix = DMatrix::zeros(op.dim(), op.dim());
    for m in 0..states {
        for n in 0..states {
            for a in 0..d {
                for b in 0..d {
                    matrix[(m * d + a, n * d + b)] = op.matrix[(n * d + a, m * d + b)];
                }
            }
        }
    }
    SymOperator::new(op.basis.clone(), matrix)
}

/// `R_F`: the partially transposed symmetric projector, scaled to unit trace.
pub fn build_rf(copies: usize, levels: usize) -> Result<SymOperator> {
    let projector = build_projector(copies, levels)?;
    let scale = 1.0 / dimension(copies + 1, levels)? as f64;
    let mut rf = partial_transpose_input(&projector);
    rf.matrix *= scale;
    Ok(rf)
}

/// `R_G` derived from `R_F`: the letter-0 block of `R_F` on the symmetric
/// factor, tensored with the identity on the output qudit. Unit trace.
pub fn build_rg_from_rf(rf: &SymOperator) -> SymOperator {
    let d = rf.levels();
    let states = rf.basis().len();
    let mut matrix = DMatrix::zeros(rf.dim(), rf.dim());
    for m in 0..states {
        for n in 0..states {
            let block = rf.matrix[(m * d, n * d)];
            for a in 0..d {
                matrix[(m * d + a, n * d + a)] = block;
            }
        }
    }
    SymOperator::new(rf.basis.clone(), matrix)
}

pub fn build_rg(copies: usize, levels: usize) -> Result<SymOperator> {
    Ok(build_rg_from_rf(&build_rf(copies, levels)?))
}

/// `R_p = p R_F + (1-p) R_G` for a mixing weight `p` in `[0,1]`.
pub fn build_rp_from(rf: &SymOperator, rg: &SymOperator, p: f64) -> Result<SymOperator> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::WeightOutOfRange(p));
    }
    let matrix = rf.matrix() * p + rg.matrix() * (1.0 - p);
    Ok(SymOperator::new(rf.basis.clone(), matrix))
}

pub fn build_rp(copies: usize, levels: usize, p: f64) -> Result<SymOperator> {
    let rf = build_rf(copies, levels)?;
    let rg = build_rg_from_rf(&rf);
    build_rp_from(&rf, &rg, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver;
    use approx::assert_abs_diff_eq;

    fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
        (a - b).iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    #[test]
    fn projector_two_qubits() {
        // triplet projector of two qubits, written on H_{+,1} ⊗ H_2
        let pi = build_projector(1, 2).unwrap();
        assert_abs_diff_eq!(pi.trace(), 3.0, epsilon = 1e-12);
        // idempotent => rank equals trace
        let sq = pi.matrix() * pi.matrix();
        assert!(max_abs_diff(&sq, pi.matrix()) < 1e-12);
        // cross entry ((|0>,1),(|1>,0)) = 1/2
        assert_abs_diff_eq!(pi.entry((0, 1), (1, 0)), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn projector_trace_matches_dimension() {
        for (copies, levels) in [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3), (2, 4)] {
            let pi = build_projector(copies, levels).unwrap();
            let expected = dimension(copies + 1, levels).unwrap() as f64;
            assert_abs_diff_eq!(pi.trace(), expected, epsilon = 1e-10);
        }
        // N=2, d=3 explicitly: trace = D(3,3) = 10
        assert_abs_diff_eq!(
            build_projector(2, 3).unwrap().trace(),
            10.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn projector_is_idempotent() {
        for (copies, levels) in [(2, 2), (3, 2), (2, 3)] {
            let pi = build_projector(copies, levels).unwrap();
            let sq = pi.matrix() * pi.matrix();
            assert!(max_abs_diff(&sq, pi.matrix()) < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let pi = build_projector(2, 3).unwrap();
        let twice = partial_transpose_input(&partial_transpose_input(&pi));
        assert_eq!(twice.matrix(), pi.matrix());

        let id = SymOperator::new(SymBasis::new(2, 2).unwrap(), DMatrix::identity(6, 6));
        let t = partial_transpose_input(&id);
        assert_eq!(t.matrix(), id.matrix());
    }

    #[test]
    fn partial_transpose_of_triplet_projector_spectrum() {
        // full-space oracle gives eigenvalues {3/2, 1/2, 1/2, 1/2}
        let pt = partial_transpose_input(&build_projector(1, 2).unwrap());
        let mut eigs = solver::spectrum(&pt).unwrap();
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expected = [0.5, 0.5, 0.5, 1.5];
        for (e, x) in eigs.iter().zip(expected) {
            assert_abs_diff_eq!(*e, x, epsilon = 1e-12);
        }
    }

    #[test]
    fn rf_has_unit_trace_and_is_symmetric() {
        for (copies, levels) in [(1, 2), (2, 2), (4, 2), (1, 3), (2, 3), (2, 4), (3, 3)] {
            let rf = build_rf(copies, levels).unwrap();
            assert_abs_diff_eq!(rf.trace(), 1.0, epsilon = 1e-12);
            assert!(max_abs_diff(&rf.matrix().transpose(), rf.matrix()) < 1e-14);
        }
    }

    #[test]
    fn rf_single_qubit_pair_matches_scaled_transpose() {
        let pi = build_projector(1, 2).unwrap();
        let pt = partial_transpose_input(&pi);
        let rf = build_rf(1, 2).unwrap();
        let scaled = pt.matrix() / 3.0;
        assert!(max_abs_diff(rf.matrix(), &scaled) < 1e-15);
    }

    #[test]
    fn rf_two_qubit_diagonal_entry() {
        // <(|2,0>,0)| R_F |(|2,0>,0)> = (N-k+1)/((N+1)(N+2)) at k=0 = 3/12
        let rf = build_rf(2, 2).unwrap();
        assert_abs_diff_eq!(rf.entry((0, 0), (0, 0)), 0.25, epsilon = 1e-14);
    }

    #[test]
    fn rg_qubit_displays() {
        // N=1, d=2: diag(2,2,1,1)/6 in basis (|0>|0>, |0>|1>, |1>|0>, |1>|1>)
        let rg = build_rg(1, 2).unwrap();
        let expected = DMatrix::from_diagonal(&(nalgebra::dvector![2.0, 2.0, 1.0, 1.0] / 6.0));
        assert!(max_abs_diff(rg.matrix(), &expected) < 1e-14);

        // N=2, d=2: diagonal (N-k+1)/((N+1)(N+2)) ⊗ identity = (1/4, 1/6, 1/12) ⊗ I
        let rg = build_rg(2, 2).unwrap();
        for (k, want) in [(0usize, 0.25), (1, 1.0 / 6.0), (2, 1.0 / 12.0)] {
            for a in 0..2 {
                assert_abs_diff_eq!(rg.entry((k, a), (k, a)), want, epsilon = 1e-14);
            }
        }
        let diag = DMatrix::from_diagonal(&rg.matrix().diagonal());
        assert!(max_abs_diff(rg.matrix(), &diag) < 1e-14);
    }

    #[test]
    fn rg_has_unit_trace() {
        for (copies, levels) in [(1, 2), (3, 2), (1, 3), (2, 3), (2, 5), (3, 4)] {
            let rg = build_rg(copies, levels).unwrap();
            assert_abs_diff_eq!(rg.trace(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rp_endpoints_are_exact() {
        let rf = build_rf(2, 3).unwrap();
        let rg = build_rg_from_rf(&rf);
        let at_one = build_rp_from(&rf, &rg, 1.0).unwrap();
        assert_eq!(at_one.matrix(), rf.matrix());
        let at_zero = build_rp_from(&rf, &rg, 0.0).unwrap();
        assert_eq!(at_zero.matrix(), rg.matrix());
    }

    #[test]
    fn rp_rejects_bad_weight() {
        let rf = build_rf(1, 2).unwrap();
        let rg = build_rg_from_rf(&rf);
        assert!(matches!(
            build_rp_from(&rf, &rg, -0.1),
            Err(Error::WeightOutOfRange(_))
        ));
        assert!(matches!(
            build_rp_from(&rf, &rg, 1.5),
            Err(Error::WeightOutOfRange(_))
        ));
    }

    #[test]
    fn rp_half_single_qubit_top_eigenvalue() {
        // analytic block value mu_1/6 = (7 + sqrt(5))/24
        let rp = build_rp(1, 2, 0.5).unwrap();
        let top = solver::spectrum(&rp).unwrap()[0];
        assert_abs_diff_eq!(top, (7.0 + 5.0f64.sqrt()) / 24.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rp.trace(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn rp_trace_one_on_weight_grid() {
        let rf = build_rf(2, 3).unwrap();
        let rg = build_rg_from_rf(&rf);
        for i in 0..=100 {
            let p = i as f64 / 100.0;
            let rp = build_rp_from(&rf, &rg, p).unwrap();
            assert_abs_diff_eq!(rp.trace(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rf_rg_rp_are_positive_semidefinite() {
        for (copies, levels) in [(1, 2), (3, 2), (2, 3), (2, 4)] {
            let rf = build_rf(copies, levels).unwrap();
            let rg = build_rg_from_rf(&rf);
            for p in [0.0, 0.3, 0.7, 1.0] {
                let rp = build_rp_from(&rf, &rg, p).unwrap();
                let min = solver::spectrum(&rp).unwrap().last().copied().unwrap();
                assert!(min >= -1e-12, "min eigenvalue {min} at p={p}");
            }
        }
    }

    #[test]
    fn qubit_rf_block_sparsity() {
        // nonzero entries only inside the blocks {|N,k-1>|0>, |N,k>|1>} and
        // the two singletons |N,0>|1>, |N,N>|0>
        let copies = 4;
        let rf = build_rf(copies, 2).unwrap();
        let member_block = |m: usize, a: usize| -> Option<usize> {
            // |N,k> has occupation (N-k, k), i.e. sym index k in descending lex
            match a {
                0 => Some(m + 1), // |N,k-1>|0> belongs to block k = m+1
                _ => Some(m),     // |N,k>|1> belongs to block k = m
            }
        };
        for m in 0..=copies {
            for n in 0..=copies {
                for a in 0..2 {
                    for b in 0..2 {
                        let v = rf.entry((m, a), (n, b));
                        if v.abs() > 1e-14 {
                            assert_eq!(
                                member_block(m, a),
                                member_block(n, b),
                                "entry (({m},{a}),({n},{b})) = {v} crosses blocks"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn size_guard_rejects_large_operators() {
        // D(12,8)*8 far exceeds the dense limit
        assert!(matches!(
            build_projector(12, 8),
            Err(Error::SizeLimit { .. })
        ));
        assert!(matches!(
            build_projector(0, 2),
            Err(Error::TooFewCopies { .. })
        ));
    }

    #[test]
    fn text_dump_has_header_and_rows() {
        let rf = build_rf(1, 2).unwrap();
        let dump = rf.to_text_matrix();
        let mut lines = dump.lines();
        assert_eq!(lines.next().unwrap(), "1 2 4");
        assert_eq!(dump.lines().count(), 5);
        let first_row: Vec<f64> = dump
            .lines()
            .nth(1)
            .unwrap()
            .split(' ')
            .map(|t| t.parse().unwrap())
            .collect();
        assert_eq!(first_row.len(), 4);
        assert_abs_diff_eq!(first_row[0], 1.0 / 3.0, epsilon = 1e-15);
    }
}
