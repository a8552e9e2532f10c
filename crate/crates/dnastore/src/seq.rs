//! Alphabet primitives: sequences over {A, C, G, T}, reverse complement,
//! Hamming distance, GC statistics, and running-digital-sum machinery.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// One nucleotide. The derived ordering is the canonical A < C < G < T.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum Base {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
}

pub const BASES: [Base; 4] = [Base::A, Base::C, Base::G, Base::T];

impl Base {
    /// Watson-Crick pairing partner.
    pub fn complement(self) -> Self {
        match self {
            Base::A => Base::T,
            Base::T => Base::A,
            Base::C => Base::G,
            Base::G => Base::C,
        }
    }

    /// Case-insensitive parse.
    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'A' => Some(Base::A),
            'C' => Some(Base::C),
            'G' => Some(Base::G),
            'T' => Some(Base::T),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Base::A => 'A',
            Base::C => 'C',
            Base::G => 'G',
            Base::T => 'T',
        }
    }

    /// True for G or C.
    pub fn is_gc(self) -> bool {
        matches!(self, Base::G | Base::C)
    }
}

/// A DNA sequence. The empty sequence is legal.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DnaSeq(Vec<Base>);

impl DnaSeq {
    pub fn new(bases: Vec<Base>) -> Self {
        DnaSeq(bases)
    }

    /// Parses a sequence, accepting lower- or upper-case letters.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| Base::from_char(c).ok_or(Error::ParseBase(c)))
            .collect::<Result<Vec<_>>>()
            .map(DnaSeq)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bases(&self) -> &[Base] {
        &self.0
    }

    pub fn push(&mut self, b: Base) {
        self.0.push(b);
    }

    /// Opposite strand: reversed, with every base complemented. An involution.
    pub fn reverse_complement(&self) -> DnaSeq {
        DnaSeq(self.0.iter().rev().map(|b| b.complement()).collect())
    }

    /// Positions (0-based) where `needle` occurs as a substring.
    pub fn find_all(&self, needle: &[Base]) -> Vec<usize> {
        find_all(&self.0, needle)
    }
}

impl Deref for DnaSeq {
    type Target = [Base];

    fn deref(&self) -> &[Base] {
        &self.0
    }
}

impl From<&[Base]> for DnaSeq {
    fn from(bases: &[Base]) -> Self {
        DnaSeq(bases.to_vec())
    }
}

impl FromIterator<Base> for DnaSeq {
    fn from_iter<I: IntoIterator<Item = Base>>(iter: I) -> Self {
        DnaSeq(iter.into_iter().collect())
    }
}

impl fmt::Display for DnaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{}", b.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for DnaSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DnaSeq::parse(s)
    }
}

/// All substring occurrence positions of `needle` in `hay`.
pub fn find_all(hay: &[Base], needle: &[Base]) -> Vec<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return Vec::new();
    }
    (0..=hay.len() - needle.len())
        .filter(|&i| &hay[i..i + needle.len()] == needle)
        .collect()
}

/// Number of positions at which two equal-length sequences disagree.
pub fn hamming(a: &[Base], b: &[Base]) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// True when the distance is at least `limit`; bails out early once reached.
pub(crate) fn hamming_at_least(a: &[Base], b: &[Base], limit: usize) -> bool {
    debug_assert_eq!(a.len(), b.len());
    let mut d = 0;
    for (x, y) in a.iter().zip(b) {
        if x != y {
            d += 1;
            if d >= limit {
                return true;
            }
        }
    }
    d >= limit
}

/// Number of symbols in {G, C}.
pub fn gc_count(s: &[Base]) -> usize {
    s.iter().filter(|b| b.is_gc()).count()
}

/// Running digital sum of a sequence under the mapping {A,T} -> +1, {G,C} -> -1.
///
/// `values[0] = 0` and `values[i]` is the sum over the first `i` symbols;
/// `max_abs` is the largest absolute value reached anywhere in the profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RdsProfile {
    pub values: Vec<i32>,
    pub max_abs: u32,
}

pub fn rds_profile(s: &[Base]) -> RdsProfile {
    let mut values = Vec::with_capacity(s.len() + 1);
    values.push(0i32);
    let mut acc = 0i32;
    let mut max_abs = 0u32;
    for b in s {
        acc += if b.is_gc() { -1 } else { 1 };
        max_abs = max_abs.max(acc.unsigned_abs());
        values.push(acc);
    }
    RdsProfile { values, max_abs }
}

/// True iff every prefix sum of the ±1 mapping stays within ±`bound`.
pub fn brds_check(s: &[Base], bound: u32) -> bool {
    let mut acc = 0i32;
    for b in s {
        acc += if b.is_gc() { -1 } else { 1 };
        if acc.unsigned_abs() > bound {
            return false;
        }
    }
    true
}

/// Parameter record for a balanced code family: `n` codewords of length `n`,
/// `codewords` of them, minimum distance `min_distance`, digital-sum bound
/// `rds_bound`. Codeword generators for these families are not constructed;
/// the address module finds members by seeded search and filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrdsParams {
    pub n: usize,
    pub codewords: BigUint,
    pub min_distance: usize,
    pub rds_bound: u32,
}

impl BrdsParams {
    fn check_even(n: usize) -> Result<()> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::UnsupportedLength {
                n,
                expected: "positive even length",
            });
        }
        Ok(())
    }

    /// Best known family with distance 2 and sum bound 1: (n, 2^(n/2), 2; 1).
    pub fn distance2_bound1(n: usize) -> Result<Self> {
        Self::check_even(n)?;
        Ok(BrdsParams {
            n,
            codewords: BigUint::from(2u32).pow(n as u32 / 2),
            min_distance: 2,
            rds_bound: 1,
        })
    }

    /// Family with distance 1 and sum bound 2: (n, 3^(n/2), 1; 2).
    pub fn distance1_bound2(n: usize) -> Result<Self> {
        Self::check_even(n)?;
        Ok(BrdsParams {
            n,
            codewords: BigUint::from(3u32).pow(n as u32 / 2),
            min_distance: 1,
            rds_bound: 2,
        })
    }

    /// Best known family with distance 2 and sum bound 2: (n, 2·3^(n/2-1), 2; 2).
    pub fn distance2_bound2(n: usize) -> Result<Self> {
        Self::check_even(n)?;
        Ok(BrdsParams {
            n,
            codewords: BigUint::from(2u32) * BigUint::from(3u32).pow(n as u32 / 2 - 1),
            min_distance: 2,
            rds_bound: 2,
        })
    }

    /// Checks a concrete sequence against this record's constraints.
    pub fn admits(&self, s: &[Base]) -> bool {
        s.len() == self.n && brds_check(s, self.rds_bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> DnaSeq {
        DnaSeq::parse(s).unwrap()
    }

    #[test]
    fn reverse_complement_basics() {
        assert_eq!(seq("ACTG").reverse_complement(), seq("CAGT"));
        assert_eq!(seq("").reverse_complement(), seq(""));
    }

    #[test]
    fn reverse_complement_is_involution() {
        for s in ["A", "ACGT", "GGGCCCAAATTT", "ACTAACTGTGCGACTGATGC"] {
            let x = seq(s);
            assert_eq!(x.reverse_complement().reverse_complement(), x);
        }
    }

    #[test]
    fn parse_is_case_insensitive_output_uppercase() {
        assert_eq!(seq("acgt").to_string(), "ACGT");
        assert!(DnaSeq::parse("ACGU").is_err());
    }

    #[test]
    fn hamming_examples() {
        let x = seq("ACGTACGT");
        assert_eq!(hamming(&x, &x).unwrap(), 0);
        assert_eq!(hamming(&seq("ACGT"), &seq("TGCA")).unwrap(), 4);
        assert!(hamming(&seq("ACG"), &seq("ACGT")).is_err());
    }

    #[test]
    fn hamming_matches_brute_count() {
        // brute position-by-position comparison on pseudo-random pairs
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let len = (next() % 30 + 1) as usize;
            let a: DnaSeq = (0..len).map(|_| BASES[(next() % 4) as usize]).collect();
            let b: DnaSeq = (0..len).map(|_| BASES[(next() % 4) as usize]).collect();
            let mut brute = 0;
            for i in 0..len {
                if a[i] != b[i] {
                    brute += 1;
                }
            }
            assert_eq!(hamming(&a, &b).unwrap(), brute);
            assert!(hamming_at_least(&a, &b, brute));
            if brute > 0 {
                assert!(hamming_at_least(&a, &b, brute - 1));
            }
            assert!(!hamming_at_least(&a, &b, brute + 1));
        }
    }

    #[test]
    fn hamming_is_a_metric() {
        let mut state = 0xdeadbeefcafef00du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..100 {
            let len = (next() % 12 + 1) as usize;
            let mk = |next: &mut dyn FnMut() -> u64| -> DnaSeq {
                (0..len).map(|_| BASES[(next() % 4) as usize]).collect()
            };
            let a = mk(&mut next);
            let b = mk(&mut next);
            let c = mk(&mut next);
            let dab = hamming(&a, &b).unwrap();
            let dba = hamming(&b, &a).unwrap();
            let dac = hamming(&a, &c).unwrap();
            let dcb = hamming(&c, &b).unwrap();
            assert_eq!(dab, dba);
            assert_eq!(dab == 0, a == b);
            assert!(dab <= dac + dcb);
        }
    }

    #[test]
    fn gc_count_examples() {
        assert_eq!(gc_count(&seq("ACTAACTGTGCGACTGATGC")), 10);
        assert_eq!(gc_count(&seq("AAAA")), 0);
        assert_eq!(gc_count(&seq("GCGC")), 4);
    }

    #[test]
    fn rds_profile_examples() {
        let p = rds_profile(&seq("ATAT"));
        assert_eq!(p.values, vec![0, 1, 2, 3, 4]);
        assert_eq!(p.max_abs, 4);

        let p = rds_profile(&seq("AGAG"));
        assert_eq!(p.values, vec![0, 1, 0, 1, 0]);
        assert_eq!(p.max_abs, 1);
    }

    #[test]
    fn rds_profile_structure() {
        let s = seq("ACTAACTGTGCGACTGATGC");
        let p = rds_profile(&s);
        assert_eq!(p.values.len(), s.len() + 1);
        assert_eq!(p.values[0], 0);
        for w in p.values.windows(2) {
            assert_eq!((w[1] - w[0]).abs(), 1);
        }
        // final value = (#A + #T) - (#G + #C), and gc = (len - final)/2
        let fin = *p.values.last().unwrap();
        assert_eq!(
            fin,
            s.len() as i32 - 2 * gc_count(&s) as i32,
        );
        assert_eq!(gc_count(&s), ((s.len() as i32 - fin) / 2) as usize);
        // GC-balanced sequence ends at zero
        assert_eq!(fin, 0);
    }

    #[test]
    fn brds_check_examples() {
        assert!(brds_check(&seq("AGAG"), 1));
        assert!(!brds_check(&seq("AAAG"), 1));
        // monotone in the bound
        for s in ["AGAG", "AAAG", "ACTAACTGTGCGACTGATGC"] {
            let s = seq(s);
            for d in 1..6 {
                if brds_check(&s, d) {
                    assert!(brds_check(&s, d + 1));
                }
            }
        }
    }

    #[test]
    fn brds_small_scale_address_fixtures() {
        // the five proof-of-concept addresses with their recorded profiles
        let fixtures = [
            ("ACTAACTGTGCGACTGATGC", 3),
            ("ACACTATCGAGCTGACACGT", 3),
            ("AGTCAGCAGTAGTCAGTCAG", 1),
            ("ACTGAGCTGAGCGTATATCG", 3),
            ("ACTCAGCTACGACTCACATG", 1),
        ];
        for (s, max_abs) in fixtures {
            let s = seq(s);
            assert_eq!(rds_profile(&s).max_abs, max_abs, "{s}");
            assert!(brds_check(&s, 4));
            assert_eq!(gc_count(&s), 10);
        }
    }

    #[test]
    fn brds_family_parameters() {
        let a = BrdsParams::distance2_bound1(20).unwrap();
        assert_eq!(a.codewords, BigUint::from(1024u32));
        let b = BrdsParams::distance1_bound2(4).unwrap();
        assert_eq!(b.codewords, BigUint::from(9u32));
        let c = BrdsParams::distance2_bound2(4).unwrap();
        assert_eq!(c.codewords, BigUint::from(6u32));
        assert!(BrdsParams::distance2_bound1(5).is_err());
        assert!(a.admits(&seq("AGAGAGAGAGAGAGAGAGAG")));
        assert!(!a.admits(&seq("AAGAGAGAGAGAGAGAGAGG")));
    }

    #[test]
    fn find_all_positions() {
        let s = seq("AGCAGCAGC");
        assert_eq!(s.find_all(&seq("AGC")), vec![0, 3, 6]);
        assert_eq!(s.find_all(&seq("GCA")), vec![1, 4]);
        assert!(s.find_all(&seq("TTT")).is_empty());
        assert!(s.find_all(&[]).is_empty());
    }
}
