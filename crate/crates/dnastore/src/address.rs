//! Address design: seeded greedy search for sequences satisfying the four
//! selection constraints, plus the individual validators.
//!
//! C1: balanced composition — bounded running digital sum over every prefix
//!     and a GC fraction window (short prefixes exempt).
//! C2: large pairwise Hamming distance.
//! C3: mutual uncorrelatedness (optionally relaxed to long overlaps only).
//! C4: no hairpin stems — no substring whose reverse complement occurs at a
//!     non-overlapping position.

use std::fmt;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::correlation::{correlate, is_mutually_uncorrelated_relaxed};
use crate::error::{Error, Result};
use crate::psc::{PerturbConfig, PrefixCodec};
use crate::seq::{brds_check, hamming_at_least, Base, DnaSeq};

/// Tunables for the address constraints and the candidate search.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintConfig {
    /// address length
    pub n: usize,
    /// running-digital-sum bound for C1
    pub rds_bound: u32,
    /// minimum pairwise Hamming distance for C2
    pub min_distance: usize,
    /// prefixes shorter than this are exempt from the GC-fraction window
    pub prefix_window: usize,
    /// overlaps shorter than this are ignored by C3 (1 = strict)
    pub uncorrelation_threshold: usize,
    /// hairpin stem length probed by C4
    pub stem_len: usize,
    pub gc_low: f64,
    pub gc_high: f64,
    /// candidates examined before the search gives up
    pub candidate_budget: u64,
    /// draw candidates uniformly instead of the balanced-leaning stream
    pub uniform_sampling: bool,
}

impl ConstraintConfig {
    pub fn for_length(n: usize) -> Self {
        ConstraintConfig {
            n,
            rds_bound: 4,
            min_distance: n / 2,
            prefix_window: 4,
            uncorrelation_threshold: 1,
            stem_len: 6,
            gc_low: 0.4,
            gc_high: 0.6,
            candidate_budget: 10_000_000,
            uniform_sampling: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_distance > self.n
            || self.prefix_window > self.n
            || self.stem_len < 3
            || self.n == 0
            || self.uncorrelation_threshold == 0
            || !(0.0..=1.0).contains(&self.gc_low)
            || self.gc_low > self.gc_high
        {
            return Err(Error::InvalidConfig(format!("{self:?}")));
        }
        Ok(())
    }
}

impl Default for ConstraintConfig {
    fn default() -> Self {
        ConstraintConfig::for_length(20)
    }
}

/// C1: bounded running digital sum over the whole profile, and GC fraction
/// within the window for every prefix at least `prefix_window` long (the
/// whole sequence included).
pub fn validate_c1(s: &DnaSeq, cfg: &ConstraintConfig) -> Result<bool> {
    if s.len() != cfg.n {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: cfg.n,
        });
    }
    if !brds_check(s, cfg.rds_bound) {
        return Ok(false);
    }
    let mut gc = 0usize;
    for (i, b) in s.iter().enumerate() {
        if b.is_gc() {
            gc += 1;
        }
        let len = i + 1;
        if len >= cfg.prefix_window {
            let frac = gc as f64 / len as f64;
            if frac < cfg.gc_low || frac > cfg.gc_high {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// C2: all pairwise Hamming distances at least `min_distance`.
pub fn validate_c2(set: &[DnaSeq], cfg: &ConstraintConfig) -> Result<bool> {
    if set.iter().any(|s| s.len() != set[0].len()) {
        return Err(Error::MixedLengths);
    }
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            if !hamming_at_least(a, b, cfg.min_distance) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// C3: mutual uncorrelatedness under the configured overlap threshold.
pub fn validate_c3(set: &[DnaSeq], cfg: &ConstraintConfig) -> Result<bool> {
    is_mutually_uncorrelated_relaxed(set, cfg.uncorrelation_threshold)
}

/// C4 hairpin heuristic: reject when any stem of length `stem_len` has its
/// reverse complement at a non-overlapping position. Stands in for a folding
/// tool; swap in an external check through the same signature if needed.
pub fn validate_c4(s: &DnaSeq, cfg: &ConstraintConfig) -> bool {
    let h = cfg.stem_len;
    if s.len() < 2 * h {
        return true;
    }
    for i in 0..=s.len() - h {
        let stem: Vec<Base> = s[i..i + h].iter().rev().map(|b| b.complement()).collect();
        for j in crate::seq::find_all(s, &stem) {
            if j + h <= i || j >= i + h {
                return false;
            }
        }
    }
    true
}

/// Per-constraint rejection tallies from one search run. A candidate counts
/// against the first constraint it fails, in the order C1, C4, C2, C3.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RejectionStats {
    pub tried: u64,
    pub c1: u64,
    pub c2: u64,
    pub c3: u64,
    pub c4: u64,
    /// candidates whose prefix perturbation is not uniquely invertible
    pub perturbation: u64,
}

impl fmt::Display for RejectionStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "tried={} rejected: c1={} c2={} c3={} c4={} perturbation={}",
            self.tried, self.c1, self.c2, self.c3, self.c4, self.perturbation
        )
    }
}

/// Output of the greedy search: members in acceptance order, plus the
/// configuration and seed that reproduce them.
#[derive(Debug, Clone)]
pub struct AddressSet {
    pub members: Vec<DnaSeq>,
    pub config: ConstraintConfig,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub set: AddressSet,
    pub requested: usize,
    pub stats: RejectionStats,
}

impl SearchOutcome {
    pub fn achieved(&self) -> usize {
        self.set.members.len()
    }

    pub fn complete(&self) -> bool {
        self.achieved() == self.requested
    }
}

fn candidate(rng: &mut ChaCha8Rng, cfg: &ConstraintConfig) -> DnaSeq {
    let mut out = Vec::with_capacity(cfg.n);
    if cfg.uniform_sampling {
        for _ in 0..cfg.n {
            out.push(crate::seq::BASES[rng.random_range(0..4usize)]);
        }
        return DnaSeq::new(out);
    }
    // balanced-leaning stream: every two positions hold one {G,C} and one
    // {A,T} symbol, order coin-flipped per pair, so all prefixes stay close
    // to 50% GC
    while out.len() < cfg.n {
        let gc = if rng.random::<bool>() { Base::G } else { Base::C };
        let at = if rng.random::<bool>() { Base::A } else { Base::T };
        let (first, second) = if rng.random::<bool>() { (gc, at) } else { (at, gc) };
        out.push(first);
        if out.len() < cfg.n {
            out.push(second);
        }
    }
    DnaSeq::new(out)
}

fn cross_uncorrelated(a: &DnaSeq, b: &DnaSeq, k: usize) -> bool {
    let n = a.len();
    for (x, y) in [(a, b), (b, a)] {
        let c = correlate(x, y).expect("nonempty");
        for (i, &bit) in c.bits().iter().enumerate() {
            if bit && n - i >= k {
                return false;
            }
        }
    }
    true
}

fn self_uncorrelated_relaxed(s: &DnaSeq, k: usize) -> bool {
    let c = correlate(s, s).expect("nonempty");
    c.bits()[0]
        && c.bits()
            .iter()
            .enumerate()
            .skip(1)
            .all(|(i, &bit)| !bit || s.len() - i < k)
}

/// Greedy expurgation: draws candidates from the seeded stream and keeps
/// each one that passes C1 and C4 alone and C2, C3 against everything kept
/// so far. Candidates whose prefix perturbation is not uniquely invertible
/// (for example a periodic middle that rotation maps to itself) are also
/// dropped, so emitted addresses feed the block encoder directly.
/// Deterministic for a given (config, seed). Stops at `count` members or
/// when the candidate budget runs out; finding none is an error carrying
/// the rejection tallies.
pub fn greedy_search(count: usize, cfg: &ConstraintConfig, seed: u64) -> Result<SearchOutcome> {
    cfg.validate()?;
    if count == 0 {
        return Err(Error::InvalidConfig("count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted: Vec<DnaSeq> = Vec::new();
    let mut stats = RejectionStats::default();
    let k = cfg.uncorrelation_threshold;

    while accepted.len() < count && stats.tried < cfg.candidate_budget {
        stats.tried += 1;
        let cand = candidate(&mut rng, cfg);
        if !validate_c1(&cand, cfg)? {
            stats.c1 += 1;
            continue;
        }
        if !validate_c4(&cand, cfg) {
            stats.c4 += 1;
            continue;
        }
        if !accepted
            .iter()
            .all(|a| hamming_at_least(a, &cand, cfg.min_distance))
        {
            stats.c2 += 1;
            continue;
        }
        if !self_uncorrelated_relaxed(&cand, k)
            || !accepted.iter().all(|a| cross_uncorrelated(a, &cand, k))
            || accepted.contains(&cand)
        {
            stats.c3 += 1;
            continue;
        }
        let unique = PrefixCodec::new(cand.clone(), cfg.n)
            .map(|codec| codec.perturbation_unique(&PerturbConfig::default()))
            .unwrap_or(false);
        if !unique {
            stats.perturbation += 1;
            continue;
        }
        accepted.push(cand);
    }

    if accepted.is_empty() {
        return Err(Error::SearchExhausted {
            tried: stats.tried,
            accepted: 0,
            c1: stats.c1,
            c2: stats.c2,
            c3: stats.c3,
            c4: stats.c4,
        });
    }
    Ok(SearchOutcome {
        set: AddressSet {
            members: accepted,
            config: cfg.clone(),
            seed,
        },
        requested: count,
        stats,
    })
}

/// Deterministic pairing: members 2i and 2i+1 flank block i. The left
/// member of each pair is the one used for payload encoding.
pub fn pair_addresses(set: &AddressSet, blocks: usize) -> Result<Vec<(DnaSeq, DnaSeq)>> {
    if set.members.len() < 2 * blocks {
        return Err(Error::InsufficientAddresses {
            have: set.members.len(),
            need: 2 * blocks,
        });
    }
    Ok((0..blocks)
        .map(|i| (set.members[2 * i].clone(), set.members[2 * i + 1].clone()))
        .collect())
}

/// One address per line, uppercase.
pub fn write_addresses<W: Write>(mut w: W, addresses: &[DnaSeq]) -> Result<()> {
    for a in addresses {
        writeln!(w, "{a}")?;
    }
    Ok(())
}

pub fn read_addresses<R: BufRead>(r: R, path: &str) -> Result<Vec<DnaSeq>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        out.push(DnaSeq::parse(trimmed).map_err(|e| Error::FileFormat {
            path: path.to_string(),
            line: i + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Two tab-separated addresses per line; line order is block order.
pub fn write_pairs<W: Write>(mut w: W, pairs: &[(DnaSeq, DnaSeq)]) -> Result<()> {
    for (left, right) in pairs {
        writeln!(w, "{left}\t{right}")?;
    }
    Ok(())
}

pub fn read_pairs<R: BufRead>(r: R, path: &str) -> Result<Vec<(DnaSeq, DnaSeq)>> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let mut parts = trimmed.split('\t');
        let err = |msg: &str| Error::FileFormat {
            path: path.to_string(),
            line: i + 1,
            msg: msg.to_string(),
        };
        let left = parts.next().ok_or_else(|| err("missing left address"))?;
        let right = parts.next().ok_or_else(|| err("missing right address"))?;
        if parts.next().is_some() {
            return Err(err("expected exactly two addresses"));
        }
        out.push((
            DnaSeq::parse(left).map_err(|e| err(&e.to_string()))?,
            DnaSeq::parse(right).map_err(|e| err(&e.to_string()))?,
        ));
    }
    Ok(out)
}

/// Re-runs all four validators over a finished set.
pub fn validate_all(set: &AddressSet) -> Result<bool> {
    for m in &set.members {
        if !validate_c1(m, &set.config)? || !validate_c4(m, &set.config) {
            return Ok(false);
        }
    }
    Ok(validate_c2(&set.members, &set.config)? && validate_c3(&set.members, &set.config)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::gc_count;

    fn seq(s: &str) -> DnaSeq {
        DnaSeq::parse(s).unwrap()
    }

    const FIVE: [&str; 5] = [
        "ACTAACTGTGCGACTGATGC",
        "ACACTATCGAGCTGACACGT",
        "AGTCAGCAGTAGTCAGTCAG",
        "ACTGAGCTGAGCGTATATCG",
        "ACTCAGCTACGACTCACATG",
    ];

    #[test]
    fn c1_examples() {
        let cfg = ConstraintConfig::default();
        let alternating = seq("AGAGAGAGAGAGAGAGAGAG");
        let mut strict = cfg.clone();
        strict.rds_bound = 1;
        assert!(validate_c1(&alternating, &strict).unwrap());
        assert!(!validate_c1(&seq("AAAAAAAAAAAAAAAAAAAG"), &cfg).unwrap());
        assert!(validate_c1(&seq("ACG"), &cfg).is_err());
    }

    #[test]
    fn c1_small_scale_address_fixtures() {
        // recorded behavior of the proof-of-concept addresses under the
        // default config: all five satisfy the digital-sum bound and the
        // total GC window, but the first four have early prefixes outside
        // the GC window, so only the alternating one passes in full
        let cfg = ConstraintConfig::default();
        let expected = [false, false, true, false, true];
        for (s, want) in FIVE.iter().zip(expected) {
            let s = seq(s);
            assert!(brds_check(&s, cfg.rds_bound));
            assert_eq!(gc_count(&s), 10);
            assert_eq!(validate_c1(&s, &cfg).unwrap(), want, "{s}");
        }
    }

    #[test]
    fn c2_examples() {
        let cfg = ConstraintConfig::default();
        assert!(validate_c2(&[seq("ACTAACTGTGCGACTGATGC")], &cfg).unwrap());
        assert!(!validate_c2(
            &[seq("ACGTACGTACGTACGTACGT"), seq("ACGTACGTACGTACGTACGA")],
            &cfg
        )
        .unwrap());
        assert!(validate_c2(&[seq("ACGT"), seq("ACG")], &cfg).is_err());
    }

    #[test]
    fn c3_examples() {
        let cfg = ConstraintConfig::for_length(4);
        let base12: Vec<DnaSeq> = crate::correlation::DOUBLING_SEED_SET
            .iter()
            .map(|s| seq(s))
            .collect();
        assert!(validate_c3(&base12, &cfg).unwrap());
        let cfg7 = ConstraintConfig::for_length(7);
        assert!(!validate_c3(&[seq("CATCATC")], &cfg7).unwrap());
        assert!(!validate_c3(&[seq("ATGC"), seq("TGCA")], &cfg).unwrap());
    }

    #[test]
    fn c4_examples() {
        let cfg = ConstraintConfig::default();
        assert!(validate_c4(&seq("AAAAAAAAAAAAAAAAAAAA"), &cfg));
        assert!(!validate_c4(&seq("GCGCGCTTTTTTGCGCGCAA"), &cfg));
        // recorded: the five proof-of-concept addresses carry no stem of
        // length six, agreeing with the folding-tool report
        for s in FIVE {
            assert!(validate_c4(&seq(s), &cfg), "{s}");
        }
    }

    #[test]
    fn greedy_finds_and_validates() {
        let cfg = ConstraintConfig::default();
        let out = greedy_search(32, &cfg, 7).unwrap();
        assert!(out.complete());
        assert_eq!(out.set.members.len(), 32);
        assert!(validate_all(&out.set).unwrap());
    }

    #[test]
    fn greedy_is_deterministic() {
        let cfg = ConstraintConfig::default();
        let a = greedy_search(16, &cfg, 42).unwrap();
        let b = greedy_search(16, &cfg, 42).unwrap();
        assert_eq!(a.set.members, b.set.members);
        let c = greedy_search(16, &cfg, 43).unwrap();
        assert_ne!(a.set.members, c.set.members);
        assert!(validate_all(&c.set).unwrap());
    }

    #[test]
    fn greedy_reports_shortfall() {
        let mut cfg = ConstraintConfig::default();
        cfg.candidate_budget = 200;
        let out = greedy_search(1_000, &cfg, 3).unwrap();
        assert!(!out.complete());
        assert!(out.achieved() > 0);
        assert_eq!(out.stats.tried, 200);
    }

    #[test]
    fn greedy_exhaustion_is_an_error() {
        let mut cfg = ConstraintConfig::default();
        // impossible window: nothing will pass C1
        cfg.gc_low = 0.0;
        cfg.gc_high = 0.0;
        cfg.candidate_budget = 100;
        match greedy_search(4, &cfg, 1) {
            Err(Error::SearchExhausted { tried, c1, .. }) => {
                assert_eq!(tried, 100);
                assert_eq!(c1, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tightening_never_gains_members() {
        let mut base = ConstraintConfig::default();
        base.candidate_budget = 40_000;
        let run = |cfg: &ConstraintConfig| -> Vec<DnaSeq> {
            match greedy_search(24, cfg, 11) {
                Ok(out) => out.set.members,
                Err(Error::SearchExhausted { .. }) => Vec::new(),
                Err(e) => panic!("unexpected {e:?}"),
            }
        };
        let loose = run(&base);
        assert!(!loose.is_empty());
        let mut tighter = Vec::new();
        let mut d = base.clone();
        d.min_distance = 12;
        tighter.push(d);
        let mut r = base.clone();
        r.rds_bound = 2;
        tighter.push(r);
        let mut h = base.clone();
        h.stem_len = 4;
        tighter.push(h);
        let mut g = base.clone();
        // this window excludes every length-5 prefix the stream can emit,
        // so the tightened run comes back empty
        g.gc_low = 0.41;
        g.gc_high = 0.59;
        tighter.push(g);
        for cfg in tighter {
            let tight = run(&cfg);
            let loose_set: std::collections::HashSet<_> = loose.iter().collect();
            let tight_set: std::collections::HashSet<_> = tight.iter().collect();
            let strict_superset = tight_set.len() > loose_set.len()
                && loose_set.iter().all(|m| tight_set.contains(*m));
            assert!(!strict_superset, "tightening produced a strict superset");
        }
    }

    #[test]
    fn pairing() {
        let cfg = ConstraintConfig::default();
        let out = greedy_search(6, &cfg, 5).unwrap();
        let pairs = pair_addresses(&out.set, 3).unwrap();
        assert_eq!(pairs.len(), 3);
        let mut all: Vec<&DnaSeq> = pairs.iter().flat_map(|(l, r)| [l, r]).collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 6, "pairs must be disjoint");
        assert!(matches!(
            pair_addresses(&out.set, 4),
            Err(Error::InsufficientAddresses { have: 6, need: 8 })
        ));
    }

    #[test]
    fn uniform_stream_also_works() {
        let mut cfg = ConstraintConfig::default();
        cfg.uniform_sampling = true;
        let out = greedy_search(8, &cfg, 9).unwrap();
        assert!(out.complete());
        assert!(validate_all(&out.set).unwrap());
    }

    #[test]
    fn address_file_roundtrip() {
        let cfg = ConstraintConfig::default();
        let out = greedy_search(8, &cfg, 2).unwrap();
        let mut buf = Vec::new();
        write_addresses(&mut buf, &out.set.members).unwrap();
        let back = read_addresses(std::io::BufReader::new(&buf[..]), "mem").unwrap();
        assert_eq!(back, out.set.members);

        let pairs = pair_addresses(&out.set, 4).unwrap();
        let mut buf = Vec::new();
        write_pairs(&mut buf, &pairs).unwrap();
        let back = read_pairs(std::io::BufReader::new(&buf[..]), "mem").unwrap();
        assert_eq!(back, pairs);
    }
}
