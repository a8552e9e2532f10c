//! Sequence correlation: overlap vectors, mutually uncorrelated sets, the
//! doubling construction, size bounds, and exact pattern-avoidance counting.
//!
//! The correlation of X with Y has one bit per position of X: bit i is set
//! when the suffix of X starting at position i matches the prefix of Y of
//! the same length. A sequence whose autocorrelation is `10…0` has no
//! proper prefix that is also a suffix, which is what makes it usable as a
//! self-punctuating block address.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::seq::{DnaSeq, BASES};

/// Twelve mutually uncorrelated length-4 sequences; the seed set for the
/// doubling construction and a handy known-good fixture.
pub const DOUBLING_SEED_SET: [&str; 12] = [
    "ATGC", "ATAC", "GTAC", "GTGC", "ATTC", "GTTC", "AGGC", "AAAC", "GAAC", "GGGC", "ATTT", "GTTT",
];

/// Overlap vector of one sequence against another; same length as the left
/// operand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationVector {
    bits: Vec<bool>,
}

impl CorrelationVector {
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// True for `10…0`: leading bit set, everything else clear.
    pub fn is_trivial(&self) -> bool {
        self.bits[0] && !self.bits[1..].iter().any(|&b| b)
    }

    pub fn is_zero(&self) -> bool {
        !self.bits.iter().any(|&b| b)
    }
}

impl std::fmt::Display for CorrelationVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

/// Correlation of `x` against `y`. Bit i (0-based) compares the suffix of
/// `x` starting at i with the equally long prefix of `y`; the operands may
/// have different lengths. Errors on empty input.
pub fn correlate(x: &DnaSeq, y: &DnaSeq) -> Result<CorrelationVector> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::EmptySequence);
    }
    let bits = (0..x.len())
        .map(|i| {
            let overlap = (x.len() - i).min(y.len());
            x[i..i + overlap] == y[..overlap]
        })
        .collect();
    Ok(CorrelationVector { bits })
}

/// True iff the autocorrelation of `x` is `10…0`.
pub fn is_self_uncorrelated(x: &DnaSeq) -> bool {
    !x.is_empty() && correlate(x, x).expect("nonempty").is_trivial()
}

/// Strict mutual-uncorrelatedness: every member self-uncorrelated and every
/// ordered pair of distinct members has an all-zero cross-correlation.
/// Errors if the members do not share one length.
pub fn is_mutually_uncorrelated(set: &[DnaSeq]) -> Result<bool> {
    is_mutually_uncorrelated_relaxed(set, 1)
}

/// Relaxed form: correlation bits are only required to be zero where the
/// overlap length is at least `k`. With `k = 1` this is the strict check.
pub fn is_mutually_uncorrelated_relaxed(set: &[DnaSeq], k: usize) -> Result<bool> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = set[0].len();
    if set.iter().any(|s| s.len() != n) {
        return Err(Error::MixedLengths);
    }
    if n == 0 {
        return Err(Error::EmptySequence);
    }
    for x in set {
        let auto = correlate(x, x)?;
        for (i, &bit) in auto.bits().iter().enumerate().skip(1) {
            if bit && n - i >= k {
                return Ok(false);
            }
        }
    }
    for (ai, x) in set.iter().enumerate() {
        for (bi, y) in set.iter().enumerate() {
            if ai == bi {
                continue;
            }
            let cross = correlate(x, y)?;
            for (i, &bit) in cross.bits().iter().enumerate() {
                if bit && (n - i).min(n) >= k {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A validated set of equal-length, mutually uncorrelated sequences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UncorrelatedSet {
    members: Vec<DnaSeq>,
}

impl UncorrelatedSet {
    pub fn new(members: Vec<DnaSeq>) -> Result<Self> {
        if !is_mutually_uncorrelated(&members)? {
            return Err(Error::NotMutuallyUncorrelated {
                reason: "a member is self-correlated or a pair overlaps".into(),
            });
        }
        Ok(UncorrelatedSet { members })
    }

    pub fn members(&self) -> &[DnaSeq] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn word_len(&self) -> usize {
        self.members[0].len()
    }
}

/// Doubling construction: splits the members in given order into halves A
/// and B and returns every concatenation XY with X in A, Y in B. The output
/// has |S|²/4 members of twice the length and is mutually uncorrelated.
pub fn double_construction(set: &UncorrelatedSet) -> Result<UncorrelatedSet> {
    let m = set.len();
    if m < 2 || m % 2 != 0 {
        return Err(Error::OddSetSize { size: m });
    }
    let (a, b) = set.members().split_at(m / 2);
    let mut out = Vec::with_capacity(m * m / 4);
    for x in a {
        for y in b {
            let mut z = x.clone();
            for &base in y.bases() {
                z.push(base);
            }
            out.push(z);
        }
    }
    UncorrelatedSet::new(out)
}

/// Bounds on u(n), the largest possible mutually uncorrelated set of
/// length-n sequences: 4·3^⌊n/4⌋ ≤ u(n) ≤ 9·4^(n-2).
pub fn bounds_u(n: usize) -> Result<(BigUint, BigUint)> {
    if n < 2 {
        return Err(Error::UnsupportedLength {
            n,
            expected: "n >= 2",
        });
    }
    let lower = BigUint::from(4u32) * BigUint::from(3u32).pow((n / 4) as u32);
    let upper = BigUint::from(9u32) * BigUint::from(4u32).pow((n - 2) as u32);
    Ok((lower, upper))
}

/// Exact u(n) for toy lengths by exhaustive independent-set search over all
/// 4^n candidates, with an edge between every correlated pair. Returns the
/// maximum size together with a witness set attaining it.
pub fn max_uncorrelated_bruteforce(n: usize) -> Result<(usize, UncorrelatedSet)> {
    if !(2..=3).contains(&n) {
        return Err(Error::UnsupportedLength {
            n,
            expected: "2 <= n <= 3",
        });
    }
    let mut verts: Vec<DnaSeq> = Vec::new();
    for code in 0..4usize.pow(n as u32) {
        let mut c = code;
        let s: DnaSeq = (0..n)
            .map(|_| {
                let b = BASES[c % 4];
                c /= 4;
                b
            })
            .collect();
        if is_self_uncorrelated(&s) {
            verts.push(s);
        }
    }
    let m = verts.len();
    let mut adj = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let ij = !correlate(&verts[i], &verts[j]).expect("nonempty").is_zero();
                let ji = !correlate(&verts[j], &verts[i]).expect("nonempty").is_zero();
                if ij || ji {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
    }

    fn extend(
        adj: &[Vec<bool>],
        cand: &[usize],
        current: &mut Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if current.len() + cand.len() <= best.len() {
            return;
        }
        match cand.first() {
            None => {
                if current.len() > best.len() {
                    *best = current.clone();
                }
            }
            Some(&v) => {
                let compatible: Vec<usize> =
                    cand[1..].iter().copied().filter(|&u| !adj[v][u]).collect();
                current.push(v);
                extend(adj, &compatible, current, best);
                current.pop();
                extend(adj, &cand[1..], current, best);
            }
        }
    }

    let mut best = Vec::new();
    let all: Vec<usize> = (0..m).collect();
    extend(&adj, &all, &mut Vec::new(), &mut best);
    let witness: Vec<DnaSeq> = best.iter().map(|&i| verts[i].clone()).collect();
    let size = witness.len();
    Ok((size, UncorrelatedSet::new(witness)?))
}

/// Exact counts of strings avoiding a mutually uncorrelated pattern set.
///
/// With m patterns of length n, the counts satisfy f(N) = 4^N for N < n,
/// f(n) = 4^n − m, and f(N) = 4·f(N−1) − m·f(N−n) for N > n. The recurrence
/// is valid only because the patterns are mutually uncorrelated, which the
/// `UncorrelatedSet` type guarantees.
#[derive(Debug, Clone)]
pub struct AvoidanceCount {
    pub pattern_len: usize,
    pub pattern_count: usize,
    /// counts[N] = number of length-N strings avoiding every pattern
    pub counts: Vec<BigUint>,
}

impl AvoidanceCount {
    pub fn count(&self, len: usize) -> &BigUint {
        &self.counts[len]
    }
}

/// Computes f(0..=max_len) for the given pattern set by the linear
/// recurrence, in exact integer arithmetic.
pub fn count_avoiding(patterns: &UncorrelatedSet, max_len: usize) -> AvoidanceCount {
    let n = patterns.word_len();
    let m = patterns.len();
    let big_m = BigUint::from(m);
    let four = BigUint::from(4u32);
    let mut counts: Vec<BigUint> = Vec::with_capacity(max_len + 1);
    counts.push(BigUint::one());
    for len in 1..=max_len {
        let next = if len < n {
            four.pow(len as u32)
        } else {
            &four * &counts[len - 1] - &big_m * &counts[len - n]
        };
        counts.push(next);
    }
    AvoidanceCount {
        pattern_len: n,
        pattern_count: m,
        counts,
    }
}
