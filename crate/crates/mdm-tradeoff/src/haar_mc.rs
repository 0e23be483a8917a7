//! Monte Carlo oracle over Haar-random pure states and unitaries.
//!
//! Exact operator construction goes through the symmetric-subspace algebra;
//! this module re-estimates the same quantities by direct sampling so the two
//! routes can be compared statistically. Estimated here: the group average
//! defining `R_F`, the fidelity pair of a given map, and the completeness
//! (trace-preservation) average that must collapse to the identity.
//!
//! Sampling is deterministic per seed (ChaCha8 keyed by the 64-bit seed) and
//! every estimate records its seed and sample count.

use crate::solver::ChoiVector;
use crate::sym_basis::{self, multinomial, SymBasis};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Deterministic generator for a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Scalar Monte Carlo estimate with its one-sigma standard error.
#[derive(Clone, Debug, serde::Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Matrix-valued Monte Carlo estimate; `stderr` is the largest per-entry
/// standard error.
#[derive(Clone, Debug)]
pub struct McMatrixEstimate {
    pub value: DMatrix<Complex64>,
    pub stderr: f64,
    pub samples: u64,
    pub seed: u64,
}

impl McMatrixEstimate {
    /// Frobenius distance to a real reference matrix.
    pub fn frobenius_distance(&self, reference: &DMatrix<f64>) -> f64 {
        self.value
            .iter()
            .zip(reference.iter())
            .map(|(est, re)| (est - Complex64::new(*re, 0.0)).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entrywise absolute deviation from a real reference matrix.
    pub fn max_deviation(&self, reference: &DMatrix<f64>) -> f64 {
        self.value
            .iter()
            .zip(reference.iter())
            .map(|(est, re)| (est - Complex64::new(*re, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// Haar-random pure state: a normalized vector of independent standard
/// complex Gaussians.
pub fn sample_haar_state(levels: usize, rng: &mut ChaCha8Rng) -> DVector<Complex64> {
    let mut v = DVector::from_fn(levels, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v /= Complex64::new(norm, 0.0);
    v
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the column
/// phases corrected by the phases of the triangular factor's diagonal.
/// Plain orthonormalization alone is not Haar; the phase fix makes the
/// distribution exactly invariant.
pub fn sample_haar_unitary(levels: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let g = DMatrix::from_fn(levels, levels, |_, _| {
        Complex64::new(
            rng.sample::<f64, _>(StandardNormal),
            rng.sample::<f64, _>(StandardNormal),
        )
    });
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..levels {
        let diag = r[(j, j)];
        let mag = diag.norm();
        let phase = if mag > 0.0 {
            diag / mag
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..levels {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Amplitudes `<{N_i}; N | psi^(⊗N)>` of a product state over the symmetric
/// basis: `sqrt(N!/prod N_i!) * prod psi_i^(N_i)`.
pub fn sym_amplitudes(basis: &SymBasis, psi: &DVector<Complex64>) -> DVector<Complex64> {
    let weights = multinomial_sqrts(basis);
    DVector::from_fn(basis.len(), |m, _| {
        let mut acc = Complex64::new(weights[m], 0.0);
        for (letter, &count) in basis.state(m).counts().iter().enumerate() {
            for _ in 0..count {
                acc *= psi[letter];
            }
        }
        acc
    })
}

fn multinomial_sqrts(basis: &SymBasis) -> Vec<f64> {
    basis
        .states()
        .iter()
        .map(|occ| (multinomial(occ).expect("small occupation") as f64).sqrt())
        .collect()
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(Error::NoSamples);
    }
    Ok(())
}

/// Estimate the group average `avg[(psi^(⊗N))^T ⊗ psi]` in the occupation ⊗
/// letter basis. Each sample is a rank-one projector of unit trace, so the
/// estimate has unit trace for every sample count and is Hermitian.
pub fn mc_rf(copies: usize, levels: usize, samples: u64, seed: u64) -> Result<McMatrixEstimate> {
    check_samples(samples)?;
    let basis = SymBasis::new(copies, levels)?;
    let dim = basis.len() * levels;
    let mut rng = rng_from_seed(seed);
    let mut sum = DMatrix::<Complex64>::zeros(dim, dim);
    let mut sumsq = DMatrix::<f64>::zeros(dim, dim);
    let weights = multinomial_sqrts(&basis);
    let mut vec = DVector::<Complex64>::zeros(dim);
    for _ in 0..samples {
        let psi = sample_haar_state(levels, &mut rng);
        let sym = DVector::from_fn(basis.len(), |m, _| {
            let mut acc = Complex64::new(weights[m], 0.0);
            for (letter, &count) in basis.state(m).counts().iter().enumerate() {
                for _ in 0..count {
                    acc *= psi[letter];
                }
            }
            acc
        });
        // transpose in this basis = conjugation of the symmetric amplitudes
        for m in 0..basis.len() {
            for a in 0..levels {
                vec[m * levels + a] = sym[m].conj() * psi[a];
            }
        }
        for c in 0..dim {
            let vc = vec[c].conj();
            for r in 0..dim {
                let term = vec[r] * vc;
                sum[(r, c)] += term;
                sumsq[(r, c)] += term.norm_sqr();
            }
        }
    }
    let s = samples as f64;
    let mean = sum / Complex64::new(s, 0.0);
    let mut stderr = 0.0f64;
    if samples > 1 {
        for r in 0..dim {
            for c in 0..dim {
                let var = (sumsq[(r, c)] / s - mean[(r, c)].norm_sqr()).max(0.0) * s / (s - 1.0);
                stderr = stderr.max((var / s).sqrt());
            }
        }
    }
    Ok(McMatrixEstimate {
        value: mean,
        stderr,
        samples,
        seed,
    })
}

fn scalar_estimate(sum: f64, sumsq: f64, samples: u64, seed: u64) -> McEstimate {
    let s = samples as f64;
    let mean = sum / s;
    let stderr = if samples > 1 {
        let var = (sumsq / s - mean * mean).max(0.0) * s / (s - 1.0);
        (var / s).sqrt()
    } else {
        0.0
    };
    McEstimate {
        value: mean,
        stderr,
        samples,
        seed,
    }
}

/// Unbiased estimates of the fidelity pair `(F, G)` of a map, from the
/// per-sample quadratic forms of the sampled `R_F` term and its
/// estimation-side reduction.
pub fn mc_fidelities(
    chi: &ChoiVector,
    samples: u64,
    seed: u64,
) -> Result<(McEstimate, McEstimate)> {
    check_samples(samples)?;
    let copies = chi.copies();
    let levels = chi.levels();
    let basis = SymBasis::new(copies, levels)?;
    if chi.amplitudes().len() != basis.len() * levels {
        return Err(Error::DimensionMismatch(format!(
            "chi has {} amplitudes, expected {}",
            chi.amplitudes().len(),
            basis.len() * levels
        )));
    }
    let mut rng = rng_from_seed(seed);
    let weights = multinomial_sqrts(&basis);
    let (mut f_sum, mut f_sumsq) = (0.0f64, 0.0f64);
    let (mut g_sum, mut g_sumsq) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let psi = sample_haar_state(levels, &mut rng);
        let sym = DVector::from_fn(basis.len(), |m, _| {
            let mut acc = Complex64::new(weights[m], 0.0);
            for (letter, &count) in basis.state(m).counts().iter().enumerate() {
                for _ in 0..count {
                    acc *= psi[letter];
                }
            }
            acc
        });
        // F term: |<chi| conj(sym) ⊗ psi>|^2
        let mut overlap = Complex64::new(0.0, 0.0);
        for m in 0..basis.len() {
            let sc = sym[m].conj();
            for a in 0..levels {
                overlap += chi.amplitude(m, a) * sc * psi[a];
            }
        }
        let f_term = overlap.norm_sqr();
        // G term: |psi_0|^2 * sum_a |sum_m chi[(m,a)] sym_m|^2
        let mut g_term = 0.0;
        for a in 0..levels {
            let mut letter_overlap = Complex64::new(0.0, 0.0);
            for m in 0..basis.len() {
                letter_overlap += chi.amplitude(m, a) * sym[m];
            }
            g_term += letter_overlap.norm_sqr();
        }
        g_term *= psi[0].norm_sqr();
        f_sum += f_term;
        f_sumsq += f_term * f_term;
        g_sum += g_term;
        g_sumsq += g_term * g_term;
    }
    Ok((
        scalar_estimate(f_sum, f_sumsq, samples, seed),
        scalar_estimate(g_sum, g_sumsq, samples, seed),
    ))
}

/// Estimate the completeness average
/// `avg_h[ conj(W(h)) Tr_out[chi] W(h)^T ]` over Haar unitaries `h`, where
/// `W(h)` is the symmetric-subspace representation of `h^(⊗N)`, and return
/// the largest entrywise deviation from the identity. Schur's lemma makes
/// the infinite-sample limit exactly the identity when `Tr chi = D(N,d)`.
pub fn mc_completeness(chi: &ChoiVector, samples: u64, seed: u64) -> Result<McEstimate> {
    check_samples(samples)?;
    let copies = chi.copies();
    let levels = chi.levels();
    let basis = SymBasis::new(copies, levels)?;
    let states = basis.len();
    if chi.amplitudes().len() != states * levels {
        return Err(Error::DimensionMismatch(format!(
            "chi has {} amplitudes, expected {}",
            chi.amplitudes().len(),
            states * levels
        )));
    }
    // reduced input-side operator T[m,n] = sum_a chi[(m,a)] chi[(n,a)]
    let mut reduced = DMatrix::<Complex64>::zeros(states, states);
    for m in 0..states {
        for n in 0..states {
            let mut acc = 0.0;
            for a in 0..levels {
                acc += chi.amplitude(m, a) * chi.amplitude(n, a);
            }
            reduced[(m, n)] = Complex64::new(acc, 0.0);
        }
    }
    // real embedding columns, oracle scale only
    let embed: Vec<DVector<f64>> = basis
        .states()
        .iter()
        .map(sym_basis::embed_full)
        .collect::<Result<_>>()?;
    let full_dim = embed[0].len();
    let mut rng = rng_from_seed(seed);
    let mut sum = DMatrix::<Complex64>::zeros(states, states);
    let mut sumsq = DMatrix::<f64>::zeros(states, states);
    let mut columns = DMatrix::<Complex64>::zeros(full_dim, states);
    for _ in 0..samples {
        let u = sample_haar_unitary(levels, &mut rng);
        // W[m,n] = <embed(m)| u^(⊗N) |embed(n)>
        for (n, e) in embed.iter().enumerate() {
            let mut col = DVector::from_fn(full_dim, |i, _| Complex64::new(e[i], 0.0));
            for factor in 0..copies {
                col = apply_factor(&u, &col, factor, copies, levels);
            }
            columns.set_column(n, &col);
        }
        let mut w = DMatrix::<Complex64>::zeros(states, states);
        for m in 0..states {
            for n in 0..states {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..full_dim {
                    acc += Complex64::new(embed[m][i], 0.0) * columns[(i, n)];
                }
                w[(m, n)] = acc;
            }
        }
        let w_conj = w.map(|z| z.conj());
        let term = &w_conj * &reduced * w_conj.adjoint();
        for r in 0..states {
            for c in 0..states {
                sum[(r, c)] += term[(r, c)];
                sumsq[(r, c)] += term[(r, c)].norm_sqr();
            }
        }
    }
    let s = samples as f64;
    let mean = sum / Complex64::new(s, 0.0);
    let mut deviation = 0.0f64;
    let mut stderr = 0.0f64;
    for r in 0..states {
        for c in 0..states {
            let target = if r == c { 1.0 } else { 0.0 };
            deviation = deviation.max((mean[(r, c)] - Complex64::new(target, 0.0)).norm());
            if samples > 1 {
                let var = (sumsq[(r, c)] / s - mean[(r, c)].norm_sqr()).max(0.0) * s / (s - 1.0);
                stderr = stderr.max((var / s).sqrt());
            }
        }
    }
    Ok(McEstimate {
        value: deviation,
        stderr,
        samples,
        seed,
    })
}

/// Apply a single-qudit unitary to one tensor factor of a `d^N` vector
/// (first factor = most significant digit).
fn apply_factor(
    u: &DMatrix<Complex64>,
    v: &DVector<Complex64>,
    factor: usize,
    copies: usize,
    levels: usize,
) -> DVector<Complex64> {
    let stride = levels.pow((copies - 1 - factor) as u32);
    let mut out = DVector::<Complex64>::zeros(v.len());
    let block = stride * levels;
    for base in (0..v.len()).step_by(block) {
        for offset in 0..stride {
            for row in 0..levels {
                let mut acc = Complex64::new(0.0, 0.0);
                for col in 0..levels {
                    acc += u[(row, col)] * v[base + offset + col * stride];
                }
                out[base + offset + row * stride] = acc;
            }
        }
    }
    out
}
