//! Brute-force full-tensor-space constructions used as oracles.
//!
//! Everything here works in the explicit `d^N` computational basis and never
//! touches the branching-based production path: the symmetric projector is
//! the permutation-group average, the partial transpose is an explicit index
//! reshuffle, and compression to the occupation basis goes through the
//! embedding isometry.

#![allow(dead_code)]

use mdm_tradeoff::sym_basis::{dimension, embed_full, SymBasis};
use nalgebra::{DMatrix, DVector};

/// Letters of the computational string `index`, first system most significant.
pub fn to_digits(index: usize, systems: usize, levels: usize) -> Vec<usize> {
    let mut digits = vec![0; systems];
    let mut rest = index;
    for k in (0..systems).rev() {
        digits[k] = rest % levels;
        rest /= levels;
    }
    digits
}

fn from_digits(digits: &[usize], levels: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * levels + x)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k.is_multiple_of(2) {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

/// The symmetrizer `(1/n!) sum_pi P_pi` on `n` qudits: the orthogonal
/// projector onto the symmetric subspace, built from explicit permutation
/// matrices.
pub fn full_symmetrizer(systems: usize, levels: usize) -> DMatrix<f64> {
    let dim = levels.pow(systems as u32);
    let perms = permutations(systems);
    let mut acc = DMatrix::zeros(dim, dim);
    for perm in &perms {
        for from in 0..dim {
            let digits = to_digits(from, systems, levels);
            let mut permuted = vec![0; systems];
            for (k, &digit) in digits.iter().enumerate() {
                permuted[perm[k]] = digit;
            }
            let to = from_digits(&permuted, levels);
            acc[(to, from)] += 1.0;
        }
    }
    acc / perms.len() as f64
}

/// Partial transposition over the leading block factor of an operator on
/// `(C^block) ⊗ (C^levels)`.
pub fn full_partial_transpose(x: &DMatrix<f64>, block: usize, levels: usize) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(x.nrows(), x.ncols());
    for i in 0..block {
        for j in 0..block {
            for a in 0..levels {
                for b in 0..levels {
                    out[(i * levels + a, j * levels + b)] = x[(j * levels + a, i * levels + b)];
                }
            }
        }
    }
    out
}

/// Embedding isometry from the occupation basis into the full tensor space:
/// column `m` is the explicit amplitude vector of basis state `m`.
pub fn embed_matrix(copies: usize, levels: usize) -> DMatrix<f64> {
    let basis = SymBasis::new(copies, levels).unwrap();
    let full = levels.pow(copies as u32);
    let mut e = DMatrix::zeros(full, basis.len());
    for (m, occ) in basis.states().iter().enumerate() {
        e.set_column(m, &embed_full(occ).unwrap());
    }
    e
}

/// Brute-force `R_F`: explicit symmetrizer on `N+1` systems, explicit partial
/// transpose over the first `N`, then compression through the embedding
/// isometry and division by `D(N+1,d)`.
pub fn oracle_rf(copies: usize, levels: usize) -> DMatrix<f64> {
    let projector = full_symmetrizer(copies + 1, levels);
    let block = levels.pow(copies as u32);
    let transposed = full_partial_transpose(&projector, block, levels);
    let isometry = embed_matrix(copies, levels).kronecker(&DMatrix::identity(levels, levels));
    let scale = dimension(copies + 1, levels).unwrap() as f64;
    isometry.transpose() * transposed * isometry / scale
}

/// Brute-force `R_G` from the brute-force `R_F` via the reference-letter
/// reduction.
pub fn oracle_rg(rf: &DMatrix<f64>, levels: usize) -> DMatrix<f64> {
    let states = rf.nrows() / levels;
    let mut out = DMatrix::zeros(rf.nrows(), rf.ncols());
    for m in 0..states {
        for n in 0..states {
            let value = rf[(m * levels, n * levels)];
            for a in 0..levels {
                out[(m * levels + a, n * levels + a)] = value;
            }
        }
    }
    out
}

/// Tensor a symmetric-subspace embedding with a single-qudit basis vector.
pub fn embed_with_letter(occ_vector: &DVector<f64>, letter: usize, levels: usize) -> DVector<f64> {
    let mut unit = DVector::zeros(levels);
    unit[letter] = 1.0;
    occ_vector.kronecker(&unit)
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}
