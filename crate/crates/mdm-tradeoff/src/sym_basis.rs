//! Occupation-number basis of the symmetric subspace of `N` qudits.
//!
//! A symmetric basis state is labeled by how many of the `N` qudits sit in
//! each of the `d` letter states. The module enumerates these labels in a
//! fixed order, exposes the index bijection, decomposes an `(N+1)`-copy
//! state into `N`-copy ⊗ single-qudit terms (branching), and embeds a label
//! as an explicit amplitude vector in the full `d^N` tensor space for
//! brute-force oracle checks.

use crate::{Error, Result};
use nalgebra::DVector;
use std::collections::HashMap;
use std::fmt;

/// Size guard for [`embed_full`]: the full tensor space `d^N` may not exceed this.
pub const EMBED_LIMIT: u128 = 1_000_000;

/// Counts `(N_0, ..., N_{d-1})` of qudits per letter state, labeling one
/// symmetric basis state of `N = sum(N_i)` qudits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OccupationVector {
    counts: Vec<usize>,
    total: usize,
}

impl OccupationVector {
    /// Build from per-letter counts; the total is their sum.
    pub fn new(counts: Vec<usize>) -> Self {
        let total = counts.iter().sum();
        Self { counts, total }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Number of copies `N`.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Local dimension `d`.
    pub fn levels(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, letter: usize) -> usize {
        self.counts[letter]
    }

    /// Label with one qudit removed from `letter`, or `None` if empty there.
    pub fn removing(&self, letter: usize) -> Option<Self> {
        if self.counts[letter] == 0 {
            return None;
        }
        let mut counts = self.counts.clone();
        counts[letter] -= 1;
        Some(Self {
            counts,
            total: self.total - 1,
        })
    }

    /// Label with one qudit added to `letter`.
    pub fn adding(&self, letter: usize) -> Self {
        let mut counts = self.counts.clone();
        counts[letter] += 1;
        Self {
            counts,
            total: self.total + 1,
        }
    }
}

impl fmt::Debug for OccupationVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ";{}>", self.total)
    }
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k {
        acc = acc.checked_mul(n - k + i)?;
        acc /= i; // exact: acc is a running binomial
    }
    Some(acc)
}

/// Dimension `D(N, d) = C(N+d-1, d-1)` of the symmetric subspace.
pub fn dimension(copies: usize, levels: usize) -> Result<usize> {
    if levels < 2 {
        return Err(Error::LevelsTooSmall(levels));
    }
    let n = (copies + levels - 1) as u128;
    let k = (levels - 1) as u128;
    let dim = binomial(n, k).ok_or(Error::DimensionOverflow { copies, levels })?;
    usize::try_from(dim).map_err(|_| Error::DimensionOverflow { copies, levels })
}

/// Multinomial coefficient `N! / prod(N_i!)`: the number of computational
/// strings carrying the letter multiset of `occ`. Exact integer arithmetic.
pub fn multinomial(occ: &OccupationVector) -> Result<u128> {
    let mut acc: u128 = 1;
    let mut remaining = occ.total() as u128;
    for &c in occ.counts() {
        let b = binomial(remaining, c as u128).ok_or(Error::DimensionOverflow {
            copies: occ.total(),
            levels: occ.levels(),
        })?;
        acc = acc.checked_mul(b).ok_or(Error::DimensionOverflow {
            copies: occ.total(),
            levels: occ.levels(),
        })?;
        remaining -= c as u128;
    }
    Ok(acc)
}

/// Ordered occupation-number basis of the symmetric subspace for `copies`
/// qudits with `levels` letters each.
///
/// States are sorted lexicographically descending on the counts, so the
/// all-zeros reference label `(N, 0, ..., 0)` always has index 0.
#[derive(Clone, Debug)]
pub struct SymBasis {
    copies: usize,
    levels: usize,
    states: Vec<OccupationVector>,
    index_of: HashMap<OccupationVector, usize>,
}

impl SymBasis {
    pub fn new(copies: usize, levels: usize) -> Result<Self> {
        let expected = dimension(copies, levels)?;
        let mut states = Vec::with_capacity(expected);
        let mut prefix = Vec::with_capacity(levels);
        enumerate_descending(copies, levels, &mut prefix, &mut states);
        debug_assert_eq!(states.len(), expected);
        let index_of = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            copies,
            levels,
            states,
            index_of,
        })
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    /// Number of basis states `D(N, d)`.
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[OccupationVector] {
        &self.states
    }

    pub fn state(&self, index: usize) -> &OccupationVector {
        &self.states[index]
    }

    pub fn index_of(&self, occ: &OccupationVector) -> Option<usize> {
        self.index_of.get(occ).copied()
    }
}

fn enumerate_descending(
    remaining: usize,
    slots: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<OccupationVector>,
) {
    if slots == 1 {
        let mut counts = prefix.clone();
        counts.push(remaining);
        out.push(OccupationVector::new(counts));
        return;
    }
    for c in (0..=remaining).rev() {
        prefix.push(c);
        enumerate_descending(remaining - c, slots - 1, prefix, out);
        prefix.pop();
    }
}

/// One term of a branching decomposition: `coefficient * |child> ⊗ |letter>`.
#[derive(Clone, Debug)]
pub struct BranchTerm {
    pub child: OccupationVector,
    pub letter: usize,
    pub coefficient: f64,
}

/// Decompose the symmetric state labeled by `parent` (on `N+1` qudits) over
/// symmetric states of `N` qudits tensored with one detached qudit.
///
/// The coefficient for detaching letter `j` is `sqrt(S_j / (N+1))`, the child
/// label `S - e_j`. Terms are returned in ascending letter order, one per
/// letter with a nonzero count; the squared coefficients sum to 1.
pub fn branch(parent: &OccupationVector) -> Result<Vec<BranchTerm>> {
    let total = parent.total();
    if total == 0 {
        return Err(Error::EmptyBranch);
    }
    let mut terms = Vec::new();
    for letter in 0..parent.levels() {
        if let Some(child) = parent.removing(letter) {
            let coefficient = (parent.count(letter) as f64 / total as f64).sqrt();
            terms.push(BranchTerm {
                child,
                letter,
                coefficient,
            });
        }
    }
    Ok(terms)
}

/// Explicit amplitudes of the symmetric state `occ` over the computational
/// basis of the full `d^N` tensor space (first qudit = most significant digit).
///
/// Every string whose letter multiset matches `occ` carries amplitude
/// `sqrt(prod(N_i!) / N!)`; all other strings carry zero. Oracle-scale only:
/// rejects `d^N` beyond [`EMBED_LIMIT`].
pub fn embed_full(occ: &OccupationVector) -> Result<DVector<f64>> {
    let copies = occ.total();
    let levels = occ.levels();
    if levels < 2 {
        return Err(Error::LevelsTooSmall(levels));
    }
    let full: u128 = (levels as u128)
        .checked_pow(copies as u32)
        .ok_or(Error::EmbedLimit {
            dim: u128::MAX,
            limit: EMBED_LIMIT,
        })?;
    if full > EMBED_LIMIT {
        return Err(Error::EmbedLimit {
            dim: full,
            limit: EMBED_LIMIT,
        });
    }
    let dim = full as usize;
    let amplitude = 1.0 / (multinomial(occ)? as f64).sqrt();
    let mut vec = DVector::zeros(dim);
    let mut counts = vec![0usize; levels];
    for (i, slot) in vec.iter_mut().enumerate() {
        counts.iter_mut().for_each(|c| *c = 0);
        let mut rest = i;
        for _ in 0..copies {
            counts[rest % levels] += 1;
            rest /= levels;
        }
        if counts == occ.counts() {
            *slot = amplitude;
        }
    }
    Ok(vec)
}
