//! Prefix-synchronized codec.
//!
//! A codec is built from a self-uncorrelated address P of length n. Bodies
//! of length l encode integers 0 <= x < G(l), where G satisfies
//!
//! ```text
//! G(l) = 3^l                               for 1 <= l < n
//! G(l) = sum_{i=1..n-1} |R_i| * G(l - i)   for l >= n,  G(0) = 1
//! ```
//!
//! with R_i the replacement set at position i: the three bases other than
//! the final address symbol, minus the address symbol at position i. A body
//! is a chain of segments, each a (possibly empty) proper prefix of P
//! followed by one replacement symbol, ending in a tail over the three-letter
//! digit alphabet. The address never occurs inside a body, so an address
//! followed by its body is self-punctuating.
//!
//! Two symbol orderings are fixed by the construction and must not drift:
//! replacement sets are ordered A < C < G < T, while the digit alphabet for
//! tails is ordered (A, T, C, G) with the excluded symbol removed. Tail
//! decodes like ATCT = 16 pin the digit order; the first branch symbol of
//! worked encodings pins the replacement order.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::seq::{Base, DnaSeq, BASES};

/// Rules for perturbing long address prefixes inside encoded bodies, so that
/// selection primers cannot hybridize to payload content. Prefix occurrences
/// strictly longer than `threshold` are rewritten in place: edges of length
/// `edge_len(m)` stay, the middle is cyclically left-rotated by `shift(mid)`.
#[derive(Debug, Clone, Copy)]
pub struct PerturbConfig {
    pub threshold: usize,
    pub edge_len: fn(usize) -> usize,
    pub shift: fn(usize) -> usize,
}

fn quarter_plus_one(m: usize) -> usize {
    m / 4 + 1
}

fn half(m: usize) -> usize {
    m / 2
}

impl Default for PerturbConfig {
    fn default() -> Self {
        PerturbConfig {
            threshold: 10,
            edge_len: quarter_plus_one,
            shift: half,
        }
    }
}

impl PerturbConfig {
    pub fn with_threshold(threshold: usize) -> Self {
        PerturbConfig {
            threshold,
            ..Default::default()
        }
    }

    /// A config is usable for address length n when the threshold leaves
    /// room for the edge rule at every perturbable length.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        if self.threshold < 4 {
            return Err(Error::InvalidConfig(format!(
                "perturbation threshold {} below minimum 4",
                self.threshold
            )));
        }
        for m in self.threshold + 1..=n {
            if 2 * (self.edge_len)(m) >= m {
                return Err(Error::InvalidConfig(format!(
                    "edge rule leaves no middle at prefix length {m}"
                )));
            }
        }
        Ok(())
    }
}

/// One substitution applied while decoding a damaged body.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Repair {
    pub offset: usize,
    pub original: Base,
    pub replacement: Base,
}

/// Codec for one address: replacement-set table plus the exact G table.
#[derive(Debug, Clone)]
pub struct PrefixCodec {
    address: DnaSeq,
    excluded: Base,
    digits: [Base; 3],
    digit_index: [u8; 4],
    replacements: Vec<Vec<Base>>,
    g: Vec<BigUint>,
}

fn divmod(a: &BigUint, b: &BigUint) -> (BigUint, BigUint) {
    (a / b, a % b)
}

impl PrefixCodec {
    /// Builds the codec, populating G up to `lmax`. The address must be
    /// self-uncorrelated and at least two symbols long.
    pub fn new(address: DnaSeq, lmax: usize) -> Result<Self> {
        let n = address.len();
        if n < 2 {
            return Err(Error::UnsupportedLength {
                n,
                expected: "address length >= 2",
            });
        }
        if !crate::correlation::is_self_uncorrelated(&address) {
            return Err(Error::NotSelfUncorrelated {
                seq: address.to_string(),
            });
        }
        let excluded = address[n - 1];

        // digit alphabet: (A, T, C, G) minus the excluded symbol
        let mut digits = [Base::A; 3];
        let mut k = 0;
        for b in [Base::A, Base::T, Base::C, Base::G] {
            if b != excluded {
                digits[k] = b;
                k += 1;
            }
        }
        let mut digit_index = [u8::MAX; 4];
        for (i, b) in digits.iter().enumerate() {
            digit_index[*b as usize] = i as u8;
        }

        // replacement sets in canonical order, one per position 1..n-1
        let replacements: Vec<Vec<Base>> = (0..n - 1)
            .map(|i| {
                BASES
                    .iter()
                    .copied()
                    .filter(|&b| b != excluded && b != address[i])
                    .collect()
            })
            .collect();

        let mut g: Vec<BigUint> = Vec::with_capacity(lmax + 1);
        g.push(BigUint::one());
        for l in 1..=lmax {
            let value = if l < n {
                BigUint::from(3u32).pow(l as u32)
            } else {
                let mut acc = BigUint::zero();
                for (i, r) in replacements.iter().enumerate() {
                    acc += BigUint::from(r.len()) * &g[l - (i + 1)];
                }
                acc
            };
            g.push(value);
        }

        Ok(PrefixCodec {
            address,
            excluded,
            digits,
            digit_index,
            replacements,
            g,
        })
    }

    pub fn address(&self) -> &DnaSeq {
        &self.address
    }

    pub fn excluded(&self) -> Base {
        self.excluded
    }

    pub fn digit_alphabet(&self) -> [Base; 3] {
        self.digits
    }

    pub fn lmax(&self) -> usize {
        self.g.len() - 1
    }

    fn n(&self) -> usize {
        self.address.len()
    }

    /// Number of encodable values for a body of length `l`.
    pub fn capacity(&self, l: usize) -> Result<&BigUint> {
        if l == 0 || l > self.lmax() {
            return Err(Error::BodyLengthOutOfRange {
                l,
                lmax: self.lmax(),
            });
        }
        Ok(&self.g[l])
    }

    /// Encodes `x` as a body of exactly `l` symbols avoiding the address.
    pub fn encode_body(&self, l: usize, x: &BigUint) -> Result<DnaSeq> {
        let cap = self.capacity(l)?;
        if x >= cap {
            return Err(Error::ValueOutOfRange {
                value: x.to_string(),
                capacity: cap.to_string(),
            });
        }
        let n = self.n();
        let mut out: Vec<Base> = Vec::with_capacity(l);
        let mut rem = l;
        let mut x = x.clone();
        while rem >= n {
            let mut t = 1usize;
            loop {
                let step = BigUint::from(self.replacements[t - 1].len()) * &self.g[rem - t];
                if x >= step {
                    x -= step;
                    t += 1;
                } else {
                    break;
                }
            }
            let (a, b) = divmod(&x, &self.g[rem - t]);
            out.extend_from_slice(&self.address[..t - 1]);
            let a: usize = usize::try_from(&a).expect("branch index fits usize");
            out.push(self.replacements[t - 1][a]);
            x = b;
            rem -= t;
        }
        // ternary tail, most significant digit first
        let base = BigUint::from(3u32);
        let tail_start = out.len();
        out.resize(l, Base::A);
        for slot in out[tail_start..].iter_mut().rev() {
            let (q, r) = divmod(&x, &base);
            let d: usize = usize::try_from(&r).expect("digit fits usize");
            *slot = self.digits[d];
            x = q;
        }
        debug_assert!(x.is_zero());
        Ok(DnaSeq::new(out))
    }

    /// Address followed by the encoded body; the address occurs exactly once.
    pub fn encode(&self, l: usize, x: &BigUint) -> Result<DnaSeq> {
        let body = self.encode_body(l, x)?;
        let mut out = self.address.bases().to_vec();
        out.extend_from_slice(&body);
        Ok(DnaSeq::new(out))
    }

    /// Longest m such that `s` starts with the first m address symbols.
    fn prefix_match_len(&self, s: &[Base]) -> usize {
        let p = self.address.bases();
        let cap = p.len().min(s.len());
        let mut m = 0;
        while m < cap && s[m] == p[m] {
            m += 1;
        }
        m
    }

    /// Structure-only validity check. Returns the offset of the first
    /// position where parsing becomes impossible.
    fn check_body_structure(&self, body: &[Base]) -> std::result::Result<(), usize> {
        let n = self.n();
        let mut pos = 0;
        while body.len() - pos >= n {
            let m = self.prefix_match_len(&body[pos..]);
            if m >= n - 1 {
                // address prefix runs through the whole branching window
                return Err(pos + n - 2);
            }
            if body[pos + m] == self.excluded {
                return Err(pos + m);
            }
            pos += m + 1;
        }
        for (i, &b) in body[pos..].iter().enumerate() {
            if b == self.excluded {
                return Err(pos + i);
            }
        }
        Ok(())
    }

    fn decode_slice(&self, body: &[Base]) -> Result<BigUint> {
        let n = self.n();
        let l = body.len();
        if l == 0 || l > self.lmax() {
            return Err(Error::BodyLengthOutOfRange {
                l,
                lmax: self.lmax(),
            });
        }
        let mut x = BigUint::zero();
        let mut pos = 0;
        while l - pos >= n {
            let rem = l - pos;
            let m = self.prefix_match_len(&body[pos..]);
            if m >= n - 1 {
                return Err(Error::MalformedCodeword {
                    offset: pos + n - 2,
                    reason: "address prefix runs through the whole branching window".into(),
                });
            }
            let sym = body[pos + m];
            let t = m + 1;
            let Some(s_idx) = self.replacements[t - 1].iter().position(|&b| b == sym) else {
                return Err(Error::MalformedCodeword {
                    offset: pos + m,
                    reason: "branch symbol equals the excluded base".into(),
                });
            };
            for i in 1..t {
                x += BigUint::from(self.replacements[i - 1].len()) * &self.g[rem - i];
            }
            x += BigUint::from(s_idx) * &self.g[rem - t];
            pos += t;
        }
        let mut tail = BigUint::zero();
        for (i, &b) in body[pos..].iter().enumerate() {
            let d = self.digit_index[b as usize];
            if d == u8::MAX {
                return Err(Error::MalformedCodeword {
                    offset: pos + i,
                    reason: "excluded base in tail".into(),
                });
            }
            tail = tail * 3u32 + d;
        }
        Ok(x + tail)
    }

    /// Decodes a body back to its integer. Inverse of `encode_body` on the
    /// full domain.
    pub fn decode_body(&self, body: &DnaSeq) -> Result<BigUint> {
        self.decode_slice(body.bases())
    }

    /// Decode with single-substitution repair. A clean parse returns the
    /// value with no repairs. Otherwise every single-symbol substitution is
    /// tried; decoding succeeds only when exactly one substitution yields a
    /// parseable body, and that substitution is reported.
    pub fn decode_body_with_repair(&self, body: &DnaSeq) -> Result<(BigUint, Vec<Repair>)> {
        self.decode_body_with_repair_filtered(body, |_| true)
    }

    /// Like `decode_body_with_repair`, but a decoded value must also satisfy
    /// `accept`. Callers that know the valid value range (for example a
    /// marker-bit prefix) use this to reject repairs that parse but decode
    /// out of range, which makes many more single corruptions uniquely
    /// repairable.
    pub fn decode_body_with_repair_filtered<F>(
        &self,
        body: &DnaSeq,
        accept: F,
    ) -> Result<(BigUint, Vec<Repair>)>
    where
        F: Fn(&BigUint) -> bool,
    {
        let first_offset = match self.check_body_structure(body) {
            Ok(()) => {
                let x = self.decode_body(body)?;
                if accept(&x) {
                    return Ok((x, Vec::new()));
                }
                body.len()
            }
            Err(offset) => offset,
        };

        let mut viable: Vec<(usize, Base, BigUint)> = Vec::new();
        let mut candidate = body.bases().to_vec();
        for j in 0..body.len() {
            let original = body[j];
            for &sigma in &BASES {
                if sigma == original {
                    continue;
                }
                candidate[j] = sigma;
                if self.check_body_structure(&candidate).is_ok() {
                    let x = self.decode_slice(&candidate)?;
                    if accept(&x) {
                        viable.push((j, sigma, x));
                    }
                }
            }
            candidate[j] = original;
        }

        if viable.len() == 1 {
            let (offset, replacement, x) = viable.pop().unwrap();
            Ok((
                x,
                vec![Repair {
                    offset,
                    original: body[offset],
                    replacement,
                }],
            ))
        } else {
            Err(Error::Unrepairable {
                offset: first_offset,
                candidates: viable.len(),
                list: viable.iter().map(|(j, b, _)| (*j, b.to_char())).collect(),
            })
        }
    }

    fn perturbed_prefix(&self, m: usize, cfg: &PerturbConfig) -> Option<Vec<Base>> {
        let e = (cfg.edge_len)(m);
        if 2 * e >= m {
            return None;
        }
        let p = self.address.bases();
        let mid = &p[e..m - e];
        let k = (cfg.shift)(mid.len()) % mid.len();
        let mut out = Vec::with_capacity(m);
        out.extend_from_slice(&p[..e]);
        out.extend_from_slice(&mid[k..]);
        out.extend_from_slice(&mid[..k]);
        out.extend_from_slice(&p[m - e..m]);
        Some(out)
    }

    /// Rewrites every maximal occurrence of an address prefix longer than
    /// the threshold: edges kept, middle cyclically shifted. Length is
    /// preserved; input without long prefixes comes back unchanged.
    pub fn perturb(&self, s: &DnaSeq, cfg: &PerturbConfig) -> DnaSeq {
        let mut out = s.bases().to_vec();
        let mut i = 0;
        while i < out.len() {
            let m = self.prefix_match_len(&out[i..]);
            if m > cfg.threshold {
                if let Some(rep) = self.perturbed_prefix(m, cfg) {
                    out[i..i + m].copy_from_slice(&rep);
                    i += m;
                    continue;
                }
            }
            i += 1;
        }
        DnaSeq::new(out)
    }

    /// Inverse of `perturb`: restores every perturbed prefix, longest match
    /// first, scanning left to right.
    pub fn unperturb(&self, s: &DnaSeq, cfg: &PerturbConfig) -> DnaSeq {
        let n = self.n();
        let patterns: Vec<(usize, Vec<Base>)> = (cfg.threshold + 1..=n)
            .rev()
            .filter_map(|m| self.perturbed_prefix(m, cfg).map(|p| (m, p)))
            .collect();
        let mut out = s.bases().to_vec();
        let mut i = 0;
        'scan: while i < out.len() {
            for (m, pat) in &patterns {
                if i + m <= out.len() && &out[i..i + m] == pat.as_slice() {
                    out[i..i + m].copy_from_slice(&self.address[..*m]);
                    i += m;
                    continue 'scan;
                }
            }
            i += 1;
        }
        DnaSeq::new(out)
    }

    /// True when every perturbable prefix maps to a string that cannot be
    /// confused with unperturbed content: the perturbed form differs from
    /// the prefix itself, contains no perturbable prefix occurrence, does
    /// not occur inside the address, and no two perturbed forms overlap as
    /// substrings or by prefix.
    pub fn perturbation_unique(&self, cfg: &PerturbConfig) -> bool {
        let n = self.n();
        if cfg.validate_for(n).is_err() {
            return false;
        }
        let forms: Vec<(usize, Vec<Base>)> = (cfg.threshold + 1..=n)
            .filter_map(|m| self.perturbed_prefix(m, cfg).map(|p| (m, p)))
            .collect();
        for (m, form) in &forms {
            if form.as_slice() == &self.address[..*m] {
                return false;
            }
            for j in 1..form.len() {
                if self.prefix_match_len(&form[j..]) > cfg.threshold {
                    return false;
                }
            }
            if self.prefix_match_len(form) > cfg.threshold {
                return false;
            }
            if !crate::seq::find_all(self.address.bases(), form).is_empty() {
                return false;
            }
        }
        // forms must not be prefixes of one another, or the longest-first
        // restoration scan could pick the wrong length; interior overlap is
        // harmless because restoration jumps past each restored span
        for (ma, fa) in &forms {
            for (mb, fb) in &forms {
                if ma != mb && fa.len() < fb.len() && fb[..fa.len()] == *fa.as_slice() {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn seq(s: &str) -> DnaSeq {
        DnaSeq::parse(s).unwrap()
    }

    fn codec(address: &str, lmax: usize) -> PrefixCodec {
        PrefixCodec::new(seq(address), lmax).unwrap()
    }

    #[test]
    fn g_table_golden() {
        let c = codec("AGCTG", 8);
        let got: Vec<u64> = (1..=7)
            .map(|l| u64::try_from(c.capacity(l).unwrap()).unwrap())
            .collect();
        assert_eq!(got, vec![3, 9, 27, 81, 267, 849, 2715]);
        assert_eq!(u64::try_from(c.capacity(8).unwrap()).unwrap(), 8673);
    }

    #[test]
    fn g_table_is_three_powers_below_address_length() {
        for address in ["AGCTG", "ATGC", "CTCTTCCAGCGAATCATTAA"] {
            let c = codec(address, address.len() + 3);
            for l in 1..address.len() {
                assert_eq!(*c.capacity(l).unwrap(), BigUint::from(3u32).pow(l as u32));
            }
        }
    }

    #[test]
    fn capacity_strictly_increasing() {
        for address in ["AGCTG", "CTCTTCCAGCGAATCATTAA"] {
            let c = codec(address, 40);
            for l in 1..40 {
                assert!(c.capacity(l).unwrap() < c.capacity(l + 1).unwrap());
            }
        }
    }

    #[test]
    fn rejects_bad_addresses() {
        assert!(matches!(
            PrefixCodec::new(seq("CATCATC"), 8),
            Err(Error::NotSelfUncorrelated { .. })
        ));
        assert!(PrefixCodec::new(seq("A"), 8).is_err());
        assert!(codec("AGCTG", 8).capacity(9).is_err());
        assert!(codec("AGCTG", 8).capacity(0).is_err());
    }

    #[test]
    fn encode_golden() {
        let c = codec("AGCTG", 8);
        let body = c.encode_body(8, &BigUint::from(550u32)).unwrap();
        assert_eq!(body.to_string(), "CCAAATCT");
        let full = c.encode(8, &BigUint::from(550u32)).unwrap();
        assert_eq!(full.to_string(), "AGCTGCCAAATCT");
        assert_eq!(
            c.encode_body(4, &BigUint::from(16u32)).unwrap().to_string(),
            "ATCT"
        );
        // x equal to the capacity is out of range
        assert!(matches!(
            c.encode_body(8, &BigUint::from(8673u32)),
            Err(Error::ValueOutOfRange { .. })
        ));
    }

    #[test]
    fn decode_golden() {
        let c = codec("AGCTG", 8);
        assert_eq!(
            c.decode_body(&seq("CCAAATCT")).unwrap(),
            BigUint::from(550u32)
        );
        assert_eq!(c.decode_body(&seq("ATCT")).unwrap(), BigUint::from(16u32));
    }

    #[test]
    fn exhaustive_small_roundtrip() {
        let c = codec("AGCTG", 6);
        let p = seq("AGCTG");
        for l in 1..=6 {
            let cap = u64::try_from(c.capacity(l).unwrap()).unwrap();
            let mut seen = HashSet::new();
            for x in 0..cap {
                let x = BigUint::from(x);
                let body = c.encode_body(l, &x).unwrap();
                assert_eq!(body.len(), l);
                assert!(body.find_all(&p).is_empty(), "{body} contains the address");
                assert!(seen.insert(body.to_string()));
                assert_eq!(c.decode_body(&body).unwrap(), x);
                // single occurrence of the address in the full codeword
                let full = c.encode(l, &x).unwrap();
                assert_eq!(full.find_all(&p), vec![0]);
            }
            assert_eq!(seen.len() as u64, cap);
        }
    }

    #[test]
    fn malformed_bodies_report_offsets() {
        let c = codec("AGCTG", 8);
        // G in the tail
        let err = c.decode_body(&seq("CCAAATCG")).unwrap_err();
        match err {
            Error::MalformedCodeword { offset, .. } => assert_eq!(offset, 7),
            other => panic!("unexpected {other:?}"),
        }
        // full prefix match through the branching window: AGCT = P^4
        let err = c.decode_body(&seq("AGCTTTTT")).unwrap_err();
        match err {
            Error::MalformedCodeword { offset, .. } => assert_eq!(offset, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn perturb_golden_example() {
        let c = codec("ACTAACTGTGCGACTGATGC", 20);
        let cfg = PerturbConfig::default();
        let input = seq("ACTAACTGTGCGACTG");
        let out = c.perturb(&input, &cfg);
        assert_eq!(out.to_string(), "ACTAATGCCTGGACTG");
        assert_eq!(c.unperturb(&out, &cfg), input);
    }

    #[test]
    fn perturb_untouched_without_long_prefix() {
        let c = codec("ACTAACTGTGCGACTGATGC", 20);
        let cfg = PerturbConfig::default();
        let s = seq("TTTTGGGGCCCCAAAATTTT");
        assert_eq!(c.perturb(&s, &cfg), s);
    }

    #[test]
    fn perturb_only_touches_prefix_interiors() {
        let c = codec("ACTAACTGTGCGACTGATGC", 20);
        let cfg = PerturbConfig::default();
        // prefix of length 14 embedded in unrelated context
        let mut s = seq("TTGG").bases().to_vec();
        s.extend_from_slice(&c.address()[..14]);
        s.extend_from_slice(seq("GGTT").bases());
        let s = DnaSeq::new(s);
        let out = c.perturb(&s, &cfg);
        assert_eq!(out.len(), s.len());
        assert_eq!(&out[..4], &s[..4]);
        assert_eq!(&out[18..], &s[18..]);
        let e = (cfg.edge_len)(14);
        assert_eq!(&out[4..4 + e], &s[4..4 + e]);
        assert_eq!(c.unperturb(&out, &cfg), s);
    }

    #[test]
    fn perturbation_unique_for_experiment_address() {
        let c = codec("ACTAACTGTGCGACTGATGC", 20);
        assert!(c.perturbation_unique(&PerturbConfig::default()));
    }

    #[test]
    fn perturbation_degenerate_address_rejected() {
        // uniform middle: the rotation is the identity, so the perturbed
        // form equals the prefix itself
        let c = codec("ACCCCCCCCCCG", 12);
        assert!(!c.perturbation_unique(&PerturbConfig::default()));
    }

    #[test]
    fn perturbation_vacuous_when_threshold_exceeds_length() {
        let c = codec("AGCTG", 8);
        let cfg = PerturbConfig::with_threshold(10);
        assert!(c.perturbation_unique(&cfg));
        let s = c.encode_body(8, &BigUint::from(550u32)).unwrap();
        assert_eq!(c.perturb(&s, &cfg), s);
    }

    #[test]
    fn repair_clean_input_passes_through() {
        let c = codec("AGCTG", 8);
        let (x, repairs) = c.decode_body_with_repair(&seq("CCAAATCT")).unwrap();
        assert_eq!(x, BigUint::from(550u32));
        assert!(repairs.is_empty());
    }

    #[test]
    fn repair_at_toy_scale_refuses_to_guess() {
        // At this address length the code is dense enough that every
        // parse-breaking single corruption has several valid single-symbol
        // completions, so the decoder must report the candidates rather
        // than pick one.
        let c = codec("AGCTG", 8);
        let original = seq("CCAAATCT");
        let mut saw_breaking = 0;
        for j in 0..original.len() {
            for &sigma in &BASES {
                if sigma == original[j] {
                    continue;
                }
                let mut corrupted = original.bases().to_vec();
                corrupted[j] = sigma;
                let corrupted = DnaSeq::new(corrupted);
                match c.decode_body_with_repair(&corrupted) {
                    Ok((x, repairs)) => {
                        // corruption landed on another valid codeword
                        assert!(repairs.is_empty());
                        assert_eq!(c.encode_body(8, &x).unwrap(), corrupted);
                    }
                    Err(Error::Unrepairable { candidates, .. }) => {
                        saw_breaking += 1;
                        assert!(candidates >= 2, "ambiguity must always be reported");
                    }
                    Err(other) => panic!("unexpected {other:?}"),
                }
            }
        }
        assert!(saw_breaking > 0);
    }

    #[test]
    fn filtered_repair_recovers_unique_candidates() {
        // With a value filter (as the block layer applies via marker bits)
        // many corruptions become uniquely repairable.
        let c = codec("CTCTTCCAGCGAATCATTAA", 80);
        let lo = BigUint::from(3u8) << 72u32;
        let hi = BigUint::one() << 74u32;
        let x = (BigUint::from(3u8) << 72u32) + BigUint::from(0x1234_5678_9abc_def0u64);
        let body = c.encode_body(80, &x).unwrap();
        let accept = |v: &BigUint| *v >= lo && *v < hi;

        let mut recovered = 0;
        for j in 0..body.len() {
            for &sigma in &BASES {
                if sigma == body[j] {
                    continue;
                }
                let mut corrupted = body.bases().to_vec();
                corrupted[j] = sigma;
                let corrupted = DnaSeq::new(corrupted);
                if let Ok((got, repairs)) = c.decode_body_with_repair_filtered(&corrupted, accept) {
                    if !repairs.is_empty() {
                        assert_eq!(got, x, "a unique filtered repair must restore the original");
                        assert_eq!(repairs[0].offset, j);
                        assert_eq!(repairs[0].replacement, body[j]);
                        recovered += 1;
                    }
                }
            }
        }
        assert!(recovered > 0, "expected some uniquely repairable corruptions");
    }

    #[test]
    fn long_roundtrip_with_perturbation() {
        let c = codec("CTCTTCCAGCGAATCATTAA", 80);
        let cfg = PerturbConfig::default();
        let mut x = BigUint::from(3u8) << 72u32;
        for step in 0..200u64 {
            x += BigUint::from(step * 7919 + 13);
            let body = c.encode_body(80, &x).unwrap();
            let perturbed = c.perturb(&body, &cfg);
            assert_eq!(perturbed.len(), 80);
            let restored = c.unperturb(&perturbed, &cfg);
            assert_eq!(restored, body);
            assert_eq!(c.decode_body(&restored).unwrap(), x);
        }
    }
}
