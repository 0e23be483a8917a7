//! Closed-form expressions: the qubit trade-off curve, its conjectured qudit
//! generalization, the qubit block spectra, and the parametric optimal maps.
//!
//! For qubits the mixture `R_p` is block diagonal with two singleton blocks
//! and `N` two-by-two blocks `M_k / ((N+1)(N+2))`; the largest eigenvalue
//! always lives in the `k = 1` block, whose eigenvector gives the optimal map
//! as a two-term superposition with weights `(alpha, beta)`. Eliminating the
//! weights from the fidelity pair yields
//!
//! ```text
//! sqrt(F - 1/(N+2)) = sqrt((N+1)/(N+2) - G) + sqrt(N (G - N/(N+2)))
//! ```
//!
//! and its conjectured qudit form with `d-1` replacing the unit factor under
//! the first square root. The qudit functions here are the closed forms under
//! numeric test, not a derivation.

use crate::solver::ChoiVector;
use crate::sym_basis::{dimension, SymBasis};
use crate::{Error, Result};
use nalgebra::{DVector, Matrix2};

/// Negative square-root arguments above this magnitude are domain errors;
/// below it they are rounding residue and clamp to zero.
const DOMAIN_SLACK: f64 = 1e-14;

const NORMALIZATION_TOL: f64 = 1e-12;

fn check_levels(levels: usize) -> Result<()> {
    if levels < 2 {
        return Err(Error::LevelsTooSmall(levels));
    }
    Ok(())
}

fn check_copies(copies: usize) -> Result<()> {
    if copies < 1 {
        return Err(Error::TooFewCopies {
            min: 1,
            got: copies,
        });
    }
    Ok(())
}

/// Optimal output fidelity `F` for qubits at estimation fidelity `G`:
/// `F = 1/(N+2) + (sqrt((N+1)/(N+2) - G) + sqrt(N (G - N/(N+2))))^2`.
pub fn qubit_tradeoff_f(copies: usize, g: f64) -> Result<f64> {
    check_copies(copies)?;
    let n = copies as f64;
    let lo = n / (n + 2.0);
    let hi = (n + 1.0) / (n + 2.0);
    let head = hi - g;
    let tail = g - lo;
    if head < -DOMAIN_SLACK || tail < -DOMAIN_SLACK {
        return Err(Error::FidelityDomain {
            g,
            lo,
            hi,
            copies,
            levels: 2,
        });
    }
    let root = head.max(0.0).sqrt() + (n * tail.max(0.0)).sqrt();
    Ok(1.0 / (n + 2.0) + root * root)
}

/// Conjectured optimal output fidelity `F` for qudits at estimation
/// fidelity `G`:
/// `F = 1/(N+d) + (sqrt((d-1)((N+1)/(N+d) - G)) + sqrt(N (G - N/(N+d))))^2`.
pub fn qudit_tradeoff_f(copies: usize, levels: usize, g: f64) -> Result<f64> {
    check_copies(copies)?;
    check_levels(levels)?;
    let n = copies as f64;
    let d = levels as f64;
    let lo = n / (n + d);
    let hi = (n + 1.0) / (n + d);
    let head = hi - g;
    let tail = g - lo;
    if head < -DOMAIN_SLACK || tail < -DOMAIN_SLACK {
        return Err(Error::FidelityDomain {
            g,
            lo,
            hi,
            copies,
            levels,
        });
    }
    let root = ((d - 1.0) * head.max(0.0)).sqrt() + (n * tail.max(0.0)).sqrt();
    Ok(1.0 / (n + d) + root * root)
}

/// One two-dimensional invariant block of the qubit mixture `R_p`, spanned by
/// `{|N,k-1>|0>, |N,k>|1>}`. `entries` holds the matrix `M_k`, i.e. the block
/// before division by `(N+1)(N+2)`.
#[derive(Clone, Debug)]
pub struct QubitBlock {
    pub copies: usize,
    pub k: usize,
    pub p: f64,
    pub entries: Matrix2<f64>,
}

/// Build the block `M_k` for `k` in `1..=N` and weight `p` in `[0,1]`.
pub fn qubit_block(copies: usize, k: usize, p: f64) -> Result<QubitBlock> {
    check_copies(copies)?;
    if k < 1 || k > copies {
        return Err(Error::BlockIndex { k, max: copies });
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::WeightOutOfRange(p));
    }
    let n = copies as f64;
    let kf = k as f64;
    let off = p * (kf * (n - kf + 1.0)).sqrt();
    let entries = Matrix2::new(n - kf + 2.0, off, off, n - kf + 1.0 + p * (2.0 * kf - n));
    Ok(QubitBlock {
        copies,
        k,
        p,
        entries,
    })
}

impl QubitBlock {
    /// Eigenvalue pair of `M_k`, larger first:
    /// `(2N+3-pN)/2 - k(1-p) ± sqrt((1+pN)^2 - 4pk(1-p))/2`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let n = self.copies as f64;
        let k = self.k as f64;
        let p = self.p;
        let base = (2.0 * n + 3.0 - p * n) / 2.0 - k * (1.0 - p);
        let disc = ((1.0 + p * n).powi(2) - 4.0 * p * k * (1.0 - p)).sqrt() / 2.0;
        (base + disc, base - disc)
    }

    /// Unit eigenvector for the larger eigenvalue, both components
    /// nonnegative, ordered as the block basis `{|N,k-1>|0>, |N,k>|1>}`.
    pub fn top_eigenvector(&self) -> (f64, f64) {
        let (mu1, _) = self.eigenvalues();
        // (mu1 - M[1][1], M[0][1]) avoids cancellation: mu1 >= both diagonal
        // entries and the first component stays order-one for all p.
        let u = mu1 - self.entries[(1, 1)];
        let v = self.entries[(0, 1)];
        let norm = u.hypot(v);
        (u / norm, v / norm)
    }
}

/// The two singleton eigenvalues of the qubit mixture:
/// `lambda^(0) = ((1-p)N + 1)/((N+1)(N+2))` on `|N,0>|1>` and
/// `lambda^(N+1) = 1/((N+1)(N+2))` on `|N,N>|0>`.
pub fn scalar_eigs(copies: usize, p: f64) -> (f64, f64) {
    let n = copies as f64;
    let denom = (n + 1.0) * (n + 2.0);
    (((1.0 - p) * n + 1.0) / denom, 1.0 / denom)
}

/// Parametrizations of the optimal-map family.
///
/// `(alpha, beta)` weight the occupation-basis form (normalized as
/// `alpha^2 + beta^2 = 1`); `(alpha_bar, beta_bar)` weight the superposition
/// of the pure-estimation map with the keep-one-copy map built on the
/// maximally entangled pair. For qubits the additional primed pair follows
/// the two-map superposition convention `alpha' = alpha - sqrt(N) beta`,
/// `beta' = sqrt(N+1) beta`.
#[derive(Clone, Debug)]
pub struct AnsatzParams {
    pub copies: usize,
    pub levels: usize,
    pub alpha: f64,
    pub beta: f64,
    pub alpha_bar: f64,
    pub beta_bar: f64,
    /// Qubit-only (`d = 2`) primed parametrization.
    pub alpha_prime: Option<f64>,
    pub beta_prime: Option<f64>,
}

/// Fill every parametrization from the occupation-basis weights
/// `(alpha, beta)`, `alpha^2 + beta^2 = 1`.
pub fn convert_params(copies: usize, levels: usize, alpha: f64, beta: f64) -> Result<AnsatzParams> {
    check_copies(copies)?;
    check_levels(levels)?;
    let norm = alpha * alpha + beta * beta;
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let n = copies as f64;
    let d = levels as f64;
    let alpha_bar = alpha - beta * (n / (d - 1.0)).sqrt();
    let beta_bar = beta * (d * n / (d - 1.0)).sqrt();
    let (alpha_prime, beta_prime) = if levels == 2 {
        (Some(alpha - n.sqrt() * beta), Some((n + 1.0).sqrt() * beta))
    } else {
        (None, None)
    };
    Ok(AnsatzParams {
        copies,
        levels,
        alpha,
        beta,
        alpha_bar,
        beta_bar,
        alpha_prime,
        beta_prime,
    })
}

/// Inverse conversion: recover `(alpha, beta)` from the superposition weights
/// `(alpha_bar, beta_bar)`. Checks the barred normalization identity
/// `alpha_bar^2 + 2 alpha_bar beta_bar / sqrt(d) + beta_bar^2 (N+d-1)/(Nd) = 1`.
pub fn params_from_bar(
    copies: usize,
    levels: usize,
    alpha_bar: f64,
    beta_bar: f64,
) -> Result<AnsatzParams> {
    check_copies(copies)?;
    check_levels(levels)?;
    let n = copies as f64;
    let d = levels as f64;
    let norm = alpha_bar * alpha_bar
        + 2.0 * alpha_bar * beta_bar / d.sqrt()
        + beta_bar * beta_bar * (n + d - 1.0) / (n * d);
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let alpha = alpha_bar + beta_bar / d.sqrt();
    let beta = beta_bar * ((d - 1.0) / (d * n)).sqrt();
    convert_params(copies, levels, alpha, beta)
}

/// Eigenvector weights of the dominant `k = 1` qubit block at weight `p`,
/// with all parametrizations filled. The printed closed forms stop at the
/// block matrix, so the `p -> (alpha, beta)` relation is realized as its
/// two-by-two eigenproblem.
pub fn qubit_optimal_params(copies: usize, p: f64) -> Result<AnsatzParams> {
    let block = qubit_block(copies, 1, p)?;
    let (alpha, beta) = block.top_eigenvector();
    convert_params(copies, 2, alpha, beta)
}

/// Optimal qubit fidelities at superposition weight `alpha`:
/// `F = ((sqrt(N) alpha + beta)^2 + 1)/(N+2)`, `G = (N + alpha^2)/(N+2)`.
pub fn qubit_parametric_fidelities(copies: usize, alpha: f64) -> Result<(f64, f64)> {
    check_copies(copies)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let n = copies as f64;
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let f = ((n.sqrt() * alpha + beta).powi(2) + 1.0) / (n + 2.0);
    let g = (n + alpha * alpha) / (n + 2.0);
    Ok((f, g))
}

/// Conjectured optimal qudit fidelities at superposition weight `alpha`:
/// `F = ((sqrt(N) alpha + sqrt(d-1) beta)^2 + 1)/(N+d)`,
/// `G = (N + alpha^2)/(N+d)`.
pub fn qudit_parametric_fidelities(copies: usize, levels: usize, alpha: f64) -> Result<(f64, f64)> {
    check_copies(copies)?;
    check_levels(levels)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let n = copies as f64;
    let d = levels as f64;
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let f = ((n.sqrt() * alpha + (d - 1.0).sqrt() * beta).powi(2) + 1.0) / (n + d);
    let g = (n + alpha * alpha) / (n + d);
    Ok((f, g))
}

/// Choi vector of the ansatz family: amplitude `sqrt(D) alpha` on the
/// all-zeros label with letter 0 and `sqrt(D) beta / sqrt(d-1)` on each
/// single-excitation label `(N_0 = N-1, N_j = 1)` with letter `j`.
pub fn qudit_ansatz_vector(params: &AnsatzParams, basis: &SymBasis) -> Result<ChoiVector> {
    if basis.copies() != params.copies || basis.levels() != params.levels {
        return Err(Error::DimensionMismatch(format!(
            "ansatz for {} copies / {} levels, basis for {} / {}",
            params.copies,
            params.levels,
            basis.copies(),
            basis.levels()
        )));
    }
    let norm = params.alpha * params.alpha + params.beta * params.beta;
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::NotNormalized(norm));
    }
    let levels = basis.levels();
    let dim = dimension(params.copies, levels)? as f64;
    let support = crate::solver::ansatz_support(basis)?;
    let mut amplitudes = DVector::zeros(basis.len() * levels);
    amplitudes[support[0]] = dim.sqrt() * params.alpha;
    let excited = dim.sqrt() * params.beta / ((levels - 1) as f64).sqrt();
    for &flat in &support[1..] {
        amplitudes[flat] = excited;
    }
    Ok(ChoiVector::new(params.copies, levels, amplitudes))
}

/// The recurring overlap values between neighboring symmetric states,
/// independent of which excited letter is involved.
#[derive(Clone, Copy, Debug)]
pub struct ScalarProducts {
    /// `<N_0=N-1, N_j=1| <0| . |N_0=N, N_j=1>` on `N+1` qudits.
    pub a: f64,
    /// `<N_0=N, N_j=1| . |0...0>|j>` on `N+1` qudits.
    pub b: f64,
    /// `<N_0=N-1, N_k=1| <j| . |N_0=N-1, N_k=1, N_j=1>` at `j = k`.
    pub c_diag: f64,
    /// Same overlap at `j != k`.
    pub c_offdiag: f64,
}

/// Overlap values `A = sqrt(N/(N+1))`, `B = 1/sqrt(N+1)`,
/// `C_jk = sqrt((1+delta_jk)/(N+1))`.
pub fn scalar_products(copies: usize, levels: usize) -> Result<ScalarProducts> {
    check_copies(copies)?;
    check_levels(levels)?;
    let n = copies as f64;
    Ok(ScalarProducts {
        a: (n / (n + 1.0)).sqrt(),
        b: 1.0 / (n + 1.0).sqrt(),
        c_diag: (2.0 / (n + 1.0)).sqrt(),
        c_offdiag: (1.0 / (n + 1.0)).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;

    #[test]
    fn qubit_curve_examples() {
        // F = 1 endpoint at G = N/(N+1)
        assert_abs_diff_eq!(qubit_tradeoff_f(1, 0.5).unwrap(), 1.0, epsilon = 1e-14);
        // pure estimation point F = G = (N+1)/(N+2)
        let g = 2.0 / 3.0;
        assert_abs_diff_eq!(qubit_tradeoff_f(1, g).unwrap(), g, epsilon = 1e-14);
        // interior evaluation, N = 3, G = 0.7
        assert_abs_diff_eq!(
            qubit_tradeoff_f(3, 0.7).unwrap(),
            0.946_410_161_513_775_4,
            epsilon = 1e-14
        );
    }

    #[test]
    fn qubit_curve_rejects_out_of_range() {
        assert!(matches!(
            qubit_tradeoff_f(1, 0.2),
            Err(Error::FidelityDomain { .. })
        ));
        assert!(matches!(
            qubit_tradeoff_f(1, 0.9),
            Err(Error::FidelityDomain { .. })
        ));
        // rounding residue just outside the interval is absorbed
        assert!(qubit_tradeoff_f(1, 2.0 / 3.0 + 5e-15).is_ok());
        assert!(qubit_tradeoff_f(1, 2.0 / 3.0 + 1e-10).is_err());
    }

    #[test]
    fn qudit_curve_reduces_to_qubit_curve() {
        for copies in 1..=6 {
            let n = copies as f64;
            for i in 0..=200 {
                let g = n / (n + 2.0) + (i as f64 / 200.0) / (n + 2.0);
                let a = qubit_tradeoff_f(copies, g).unwrap();
                let b = qudit_tradeoff_f(copies, 2, g).unwrap();
                assert!((a - b).abs() < 1e-15, "N={copies} G={g}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn qudit_curve_endpoints() {
        // N=2, d=3: estimation point F = G = 3/5, intact-copy point G = 1/2
        assert_abs_diff_eq!(qudit_tradeoff_f(2, 3, 0.6).unwrap(), 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(qudit_tradeoff_f(2, 3, 0.5).unwrap(), 1.0, epsilon = 1e-14);
        // N=1 single-copy curve passes through (1/d, 1)
        for d in 2..=6 {
            let g = 1.0 / d as f64;
            assert_abs_diff_eq!(qudit_tradeoff_f(1, d, g).unwrap(), 1.0, epsilon = 1e-13);
            let top = 2.0 / (1.0 + d as f64);
            assert_abs_diff_eq!(qudit_tradeoff_f(1, d, top).unwrap(), top, epsilon = 1e-13);
        }
    }

    #[test]
    fn curve_is_concave() {
        for (copies, levels) in [(1, 2), (4, 2), (2, 3), (3, 5)] {
            let n = copies as f64;
            let d = levels as f64;
            let lo = n / (n + d);
            let hi = (n + 1.0) / (n + d);
            let grid: Vec<f64> = (0..=400)
                .map(|i| lo + (hi - lo) * i as f64 / 400.0)
                .collect();
            let f: Vec<f64> = grid
                .iter()
                .map(|&g| qudit_tradeoff_f(copies, levels, g).unwrap())
                .collect();
            for w in f.windows(3) {
                let second = w[2] - 2.0 * w[1] + w[0];
                assert!(second <= 1e-12, "second difference {second}");
            }
        }
    }

    #[test]
    fn block_matrix_examples() {
        // p=0, k=1: diagonal (N+1, N)
        let block = qubit_block(4, 1, 0.0).unwrap();
        assert_eq!(block.entries, Matrix2::new(5.0, 0.0, 0.0, 4.0));
        assert_abs_diff_eq!(block.eigenvalues().0, 5.0, epsilon = 1e-14);

        // p=1: top eigenvalue N+2 for every k
        for copies in 1..=6 {
            for k in 1..=copies {
                let block = qubit_block(copies, k, 1.0).unwrap();
                assert_abs_diff_eq!(block.eigenvalues().0, copies as f64 + 2.0, epsilon = 1e-12);
            }
        }

        // N=1, k=1, p=1/2
        let block = qubit_block(1, 1, 0.5).unwrap();
        assert_abs_diff_eq!(
            block.eigenvalues().0,
            1.75 + 1.25f64.sqrt() / 2.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn block_eigenvalues_match_direct_diagonalization() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for copies in 1..=8usize {
            for _ in 0..20 {
                let p: f64 = rng.random_range(0.0..=1.0);
                for k in 1..=copies {
                    let block = qubit_block(copies, k, p).unwrap();
                    let eig = block.entries.symmetric_eigenvalues();
                    let mut direct = [eig[0], eig[1]];
                    direct.sort_by(|a, b| b.partial_cmp(a).unwrap());
                    let (mu1, mu2) = block.eigenvalues();
                    assert_abs_diff_eq!(direct[0], mu1, epsilon = 1e-12);
                    assert_abs_diff_eq!(direct[1], mu2, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn block_dominance() {
        // mu_1^(k) non-increasing in k; k=1 dominates both singleton values
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for copies in 1..=8usize {
            for _ in 0..20 {
                let p: f64 = rng.random_range(0.0..=1.0);
                let denom = (copies as f64 + 1.0) * (copies as f64 + 2.0);
                let tops: Vec<f64> = (1..=copies)
                    .map(|k| qubit_block(copies, k, p).unwrap().eigenvalues().0)
                    .collect();
                for w in tops.windows(2) {
                    assert!(w[1] <= w[0] + 1e-12);
                }
                let (lambda0, lambda_last) = scalar_eigs(copies, p);
                assert!(tops[0] / denom >= lambda0 - 1e-12);
                assert!(tops[0] / denom >= lambda_last - 1e-12);
            }
        }
    }

    #[test]
    fn block_rejects_bad_indices() {
        assert!(matches!(
            qubit_block(3, 0, 0.5),
            Err(Error::BlockIndex { .. })
        ));
        assert!(matches!(
            qubit_block(3, 4, 0.5),
            Err(Error::BlockIndex { .. })
        ));
    }

    #[test]
    fn scalar_eigs_examples() {
        let (a, b) = scalar_eigs(1, 0.0);
        assert_abs_diff_eq!(a, 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(b, 1.0 / 6.0, epsilon = 1e-15);
        for copies in 1..=6 {
            let (a, b) = scalar_eigs(copies, 1.0);
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let (a, _) = scalar_eigs(3, 0.25);
        assert_abs_diff_eq!(a, 0.1625, epsilon = 1e-15);
    }

    #[test]
    fn optimal_params_limits() {
        let params = qubit_optimal_params(3, 1e-12).unwrap();
        assert_abs_diff_eq!(params.alpha, 1.0, epsilon = 1e-9);
        let params = qubit_optimal_params(1, 1.0 - 1e-13).unwrap();
        assert_abs_diff_eq!(params.alpha, (0.5f64).sqrt(), epsilon = 1e-9);
        assert_abs_diff_eq!(params.beta, (0.5f64).sqrt(), epsilon = 1e-9);
        let (f, g) = qubit_parametric_fidelities(1, params.alpha).unwrap();
        assert_abs_diff_eq!(f, 1.0, epsilon = 1e-9);
        assert_abs_diff_eq!(g, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn optimal_params_lie_on_the_curve() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let copies = rng.random_range(1..=5usize);
            let p: f64 = rng.random_range(0.001..0.999);
            let params = qubit_optimal_params(copies, p).unwrap();
            let (f, g) = qubit_parametric_fidelities(copies, params.alpha).unwrap();
            assert_abs_diff_eq!(qubit_tradeoff_f(copies, g).unwrap(), f, epsilon = 1e-12);
        }
    }

    #[test]
    fn parametric_examples() {
        // alpha = 1 is the pure-estimation point
        for copies in 1..=4 {
            let n = copies as f64;
            let (f, g) = qubit_parametric_fidelities(copies, 1.0).unwrap();
            assert_abs_diff_eq!(f, (n + 1.0) / (n + 2.0), epsilon = 1e-14);
            assert_abs_diff_eq!(g, (n + 1.0) / (n + 2.0), epsilon = 1e-14);
            // alpha = sqrt(N/(N+1)) keeps one copy intact
            let (f, g) = qubit_parametric_fidelities(copies, (n / (n + 1.0)).sqrt()).unwrap();
            assert_abs_diff_eq!(f, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(g, n / (n + 1.0), epsilon = 1e-14);
        }
        // frozen interior value, N=2, alpha=0.9
        let (f, g) = qubit_parametric_fidelities(2, 0.9).unwrap();
        assert_abs_diff_eq!(g, 0.7025, epsilon = 1e-15);
        assert_abs_diff_eq!(f, 0.979_898_630_133_604, epsilon = 1e-14);
        assert_abs_diff_eq!(qubit_tradeoff_f(2, g).unwrap(), f, epsilon = 1e-13);
    }

    #[test]
    fn qudit_parametric_examples() {
        for (copies, levels) in [(1usize, 3usize), (2, 4), (3, 5)] {
            let n = copies as f64;
            let d = levels as f64;
            let (f, g) = qudit_parametric_fidelities(copies, levels, 1.0).unwrap();
            assert_abs_diff_eq!(f, (n + 1.0) / (n + d), epsilon = 1e-14);
            assert_abs_diff_eq!(g, (n + 1.0) / (n + d), epsilon = 1e-14);
            let alpha = (n / (n + d - 1.0)).sqrt();
            let (f, g) = qudit_parametric_fidelities(copies, levels, alpha).unwrap();
            assert_abs_diff_eq!(f, 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(g, n / (n + d - 1.0), epsilon = 1e-14);
        }
        // frozen interior value, N=2, d=4, alpha=0.8
        let (f, g) = qudit_parametric_fidelities(2, 4, 0.8).unwrap();
        assert_abs_diff_eq!(g, 0.44, epsilon = 1e-15);
        assert_abs_diff_eq!(f, 0.951_918_358_845_308_6, epsilon = 1e-14);
        assert_abs_diff_eq!(qudit_tradeoff_f(2, 4, g).unwrap(), f, epsilon = 1e-13);
    }

    #[test]
    fn parametric_points_lie_on_curves() {
        // qubit identity on a 200-point grid
        for copies in 1..=6 {
            for i in 0..=200 {
                let alpha = i as f64 / 200.0;
                let (f, g) = qubit_parametric_fidelities(copies, alpha).unwrap();
                assert!(
                    (qubit_tradeoff_f(copies, g).unwrap() - f).abs() < 1e-12,
                    "N={copies} alpha={alpha}"
                );
            }
        }
        // qudit identity
        for copies in 1..=4 {
            for levels in 2..=6 {
                for i in 0..=200 {
                    let alpha = i as f64 / 200.0;
                    let (f, g) = qudit_parametric_fidelities(copies, levels, alpha).unwrap();
                    assert!(
                        (qudit_tradeoff_f(copies, levels, g).unwrap() - f).abs() < 1e-12,
                        "N={copies} d={levels} alpha={alpha}"
                    );
                }
            }
        }
    }

    #[test]
    fn convert_params_examples() {
        let params = convert_params(3, 2, 1.0, 0.0).unwrap();
        assert_abs_diff_eq!(params.alpha_prime.unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(params.beta_prime.unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(params.alpha_bar, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(params.beta_bar, 0.0, epsilon = 1e-15);

        // keep-one-copy qubit map: alpha' = 0, beta' = 1
        for copies in 1..=5 {
            let n = copies as f64;
            let params =
                convert_params(copies, 2, (n / (n + 1.0)).sqrt(), (1.0 / (n + 1.0)).sqrt())
                    .unwrap();
            assert_abs_diff_eq!(params.alpha_prime.unwrap(), 0.0, epsilon = 1e-14);
            assert_abs_diff_eq!(params.beta_prime.unwrap(), 1.0, epsilon = 1e-14);
        }
        assert!(convert_params(2, 3, 0.9, 0.9).is_err());
    }

    #[test]
    fn convert_params_round_trip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(14);
        for _ in 0..50 {
            let copies = rng.random_range(1..=5usize);
            let levels = rng.random_range(2..=6usize);
            let alpha: f64 = rng.random_range(0.0..=1.0);
            let beta = (1.0 - alpha * alpha).sqrt();
            let params = convert_params(copies, levels, alpha, beta).unwrap();
            // barred normalization identity holds
            let n = copies as f64;
            let d = levels as f64;
            let norm = params.alpha_bar.powi(2)
                + 2.0 * params.alpha_bar * params.beta_bar / d.sqrt()
                + params.beta_bar.powi(2) * (n + d - 1.0) / (n * d);
            assert_abs_diff_eq!(norm, 1.0, epsilon = 1e-12);
            let back = params_from_bar(copies, levels, params.alpha_bar, params.beta_bar).unwrap();
            assert_abs_diff_eq!(back.alpha, alpha, epsilon = 1e-12);
            assert_abs_diff_eq!(back.beta, beta, epsilon = 1e-12);
        }
    }

    #[test]
    fn ansatz_vector_structure() {
        // alpha = 1: a single spike on the reference label
        let basis = SymBasis::new(2, 3).unwrap();
        let chi = qudit_ansatz_vector(&convert_params(2, 3, 1.0, 0.0).unwrap(), &basis).unwrap();
        assert_abs_diff_eq!(chi.amplitudes()[0], 6.0f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(chi.squared_norm(), 6.0, epsilon = 1e-12);

        // d = 2 reduces to the two-term qubit form
        let basis = SymBasis::new(2, 2).unwrap();
        let alpha = 0.6;
        let beta = 0.8;
        let chi = qudit_ansatz_vector(&convert_params(2, 2, alpha, beta).unwrap(), &basis).unwrap();
        let scale = 3.0f64.sqrt();
        assert_abs_diff_eq!(chi.amplitude(0, 0), scale * alpha, epsilon = 1e-14);
        assert_abs_diff_eq!(chi.amplitude(1, 1), scale * beta, epsilon = 1e-14);
        assert_abs_diff_eq!(chi.squared_norm(), scale * scale, epsilon = 1e-12);
    }

    #[test]
    fn scalar_product_values() {
        let sp = scalar_products(1, 3).unwrap();
        assert_abs_diff_eq!(sp.a, (0.5f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(sp.b, (0.5f64).sqrt(), epsilon = 1e-15);
        let sp = scalar_products(3, 4).unwrap();
        assert_abs_diff_eq!(sp.c_diag, (0.5f64).sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(sp.c_offdiag, 0.5, epsilon = 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn parametric_point_always_on_conjectured_curve(
            copies in 1usize..5,
            levels in 2usize..7,
            alpha in 0.0f64..=1.0,
        ) {
            let (f, g) = qudit_parametric_fidelities(copies, levels, alpha).unwrap();
            let on_curve = qudit_tradeoff_f(copies, levels, g).unwrap();
            prop_assert!((on_curve - f).abs() < 1e-12);
        }
    }
}
