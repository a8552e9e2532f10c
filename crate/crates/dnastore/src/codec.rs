//! Word-level compaction and block assembly.
//!
//! Text is split on whitespace into words; distinct words get fixed-width
//! integer codes starting at 2^(width-1), so every code has its top bit set
//! and no code is a tiny integer. Six consecutive word codes plus a leading
//! marker form one group integer, each group becomes one fixed-length
//! sub-block through the prefix-synchronized codec of the block's left
//! address, and twelve sub-blocks flanked by the address pair form one
//! block of 2·20 + 12·80 = 1000 symbols.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::psc::{PerturbConfig, PrefixCodec, Repair};
use crate::seq::DnaSeq;

pub const DICT_HEADER: &str = "DNASTORE-DICT v1";
pub const MANIFEST_HEADER: &str = "DNASTORE-MANIFEST v1";

/// Grams per nucleotide: roughly 650 daltons.
const GRAMS_PER_NT: f64 = 650.0 * 1.67e-24;

/// Splits on whitespace runs. Punctuation stays attached, so "word" and
/// "word." are distinct.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split_whitespace().collect()
}

/// Whitespace-normalized form: words joined by single spaces.
pub fn normalize(text: &str) -> String {
    tokenize(text).join(" ")
}

/// Bijection between words and fixed-width integer codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dictionary {
    words: Vec<String>,
    index: HashMap<String, u32>,
    width: u32,
}

impl Dictionary {
    pub const DEFAULT_WIDTH: u32 = 12;

    /// Builds from text in first-occurrence order.
    pub fn build(text: &str, width: u32) -> Result<Self> {
        let mut dict = Dictionary::empty(width)?;
        let tokens = tokenize(text);
        if tokens.is_empty() {
            return Err(Error::EmptyText);
        }
        for tok in tokens {
            if !dict.index.contains_key(tok) {
                dict.add(tok)?;
            }
        }
        Ok(dict)
    }

    pub fn empty(width: u32) -> Result<Self> {
        if !(2..=32).contains(&width) {
            return Err(Error::InvalidConfig(format!("word width {width}")));
        }
        Ok(Dictionary {
            words: Vec::new(),
            index: HashMap::new(),
            width,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// First assigned code; the top bit of every code is set.
    pub fn index_offset(&self) -> u32 {
        1 << (self.width - 1)
    }

    /// Reserved code marking padding slots.
    pub fn pad_index(&self) -> u32 {
        (1u32 << self.width).wrapping_sub(1)
    }

    /// Distinct words this width can hold (the pad code stays reserved).
    pub fn capacity(&self) -> usize {
        (self.pad_index() - self.index_offset()) as usize
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn lookup(&self, word: &str) -> Option<u32> {
        self.index.get(word).copied()
    }

    pub fn word(&self, code: u32) -> Option<&str> {
        let offset = self.index_offset();
        if code < offset {
            return None;
        }
        self.words.get((code - offset) as usize).map(|s| s.as_str())
    }

    /// Appends a new word, returning its code.
    pub fn add(&mut self, word: &str) -> Result<u32> {
        if let Some(code) = self.lookup(word) {
            return Ok(code);
        }
        if self.words.len() >= self.capacity() {
            return Err(Error::DictionaryFull {
                distinct: self.words.len() + 1,
                capacity: self.capacity(),
                width: self.width,
            });
        }
        let code = self.index_offset() + self.words.len() as u32;
        self.words.push(word.to_string());
        self.index.insert(word.to_string(), code);
        Ok(code)
    }

    /// Lines of "code<TAB>word" after a version header.
    pub fn save<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{DICT_HEADER}")?;
        let offset = self.index_offset();
        for (i, word) in self.words.iter().enumerate() {
            writeln!(w, "{}\t{}", offset + i as u32, word)?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(r: R, path: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::FileFormat {
            path: path.to_string(),
            line,
            msg,
        };
        let mut lines = r.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h == DICT_HEADER => {}
            Some((_, Ok(h))) => return Err(err(1, format!("bad header {h:?}"))),
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(err(1, "empty file".into())),
        }
        let mut entries: Vec<(u32, String)> = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (code, word) = line
                .split_once('\t')
                .ok_or_else(|| err(i + 1, "expected code<TAB>word".into()))?;
            let code: u32 = code
                .parse()
                .map_err(|_| err(i + 1, format!("bad code {code:?}")))?;
            entries.push((code, word.to_string()));
        }
        if entries.is_empty() {
            return Dictionary::empty(Self::DEFAULT_WIDTH);
        }
        let first = entries[0].0;
        if !first.is_power_of_two() {
            return Err(err(2, format!("first code {first} is not an offset")));
        }
        let width = first.trailing_zeros() + 1;
        let mut dict = Dictionary::empty(width)?;
        for (k, (code, word)) in entries.into_iter().enumerate() {
            if code != dict.index_offset() + k as u32 {
                return Err(err(k + 2, format!("code {code} out of order")));
            }
            if dict.lookup(&word).is_some() {
                return Err(err(k + 2, format!("duplicate word {word:?}")));
            }
            dict.add(&word)?;
        }
        Ok(dict)
    }
}

/// Geometry of one block. The defaults give the 1000-symbol layout:
/// 20-symbol addresses flanking 12 sub-blocks of 80 symbols, six words of
/// 12 bits per sub-block behind a two-bit "11" marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub addr_len: usize,
    pub sub_blocks: usize,
    pub sub_len: usize,
    pub words_per_group: usize,
    pub word_width: u32,
    pub marker: String,
}

impl Default for BlockLayout {
    fn default() -> Self {
        BlockLayout {
            addr_len: 20,
            sub_blocks: 12,
            sub_len: 80,
            words_per_group: 6,
            word_width: Dictionary::DEFAULT_WIDTH,
            marker: "11".into(),
        }
    }
}

impl BlockLayout {
    pub fn validate(&self) -> Result<()> {
        if self.marker.is_empty() || !self.marker.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidConfig(format!("marker {:?}", self.marker)));
        }
        if self.addr_len < 2
            || self.sub_blocks == 0
            || self.sub_len == 0
            || self.words_per_group == 0
            || !(2..=32).contains(&self.word_width)
        {
            return Err(Error::InvalidConfig(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn payload_len(&self) -> usize {
        self.sub_blocks * self.sub_len
    }

    pub fn block_len(&self) -> usize {
        2 * self.addr_len + self.payload_len()
    }

    pub fn words_per_block(&self) -> usize {
        self.sub_blocks * self.words_per_group
    }

    pub fn group_bits(&self) -> usize {
        self.marker.len() + self.words_per_group * self.word_width as usize
    }

    pub fn marker_value(&self) -> u32 {
        self.marker
            .chars()
            .fold(0, |acc, c| (acc << 1) | (c == '1') as u32)
    }

    /// Every group integer must fit the sub-block capacity of the codec.
    pub fn check_capacity(&self, codec: &PrefixCodec) -> Result<()> {
        let need = BigUint::one() << self.group_bits();
        if need > *codec.capacity(self.sub_len)? {
            return Err(Error::CapacityExceeded {
                bits: self.group_bits(),
            });
        }
        Ok(())
    }
}

/// Packs marker and word codes into one integer, marker in the most
/// significant bits.
pub fn group_to_integer(codes: &[u32], layout: &BlockLayout) -> Result<BigUint> {
    if codes.len() != layout.words_per_group {
        return Err(Error::WrongGroupSize {
            got: codes.len(),
            want: layout.words_per_group,
        });
    }
    let mut x = BigUint::from(layout.marker_value());
    for &code in codes {
        if u64::from(code) >= 1u64 << layout.word_width {
            return Err(Error::IndexOutOfRange { index: code });
        }
        x = (x << layout.word_width) | BigUint::from(code);
    }
    Ok(x)
}

/// Inverse of `group_to_integer`; checks the marker bits.
pub fn integer_to_group(x: &BigUint, layout: &BlockLayout) -> Result<Vec<u32>> {
    let mut rest = x.clone();
    let mask = (BigUint::one() << layout.word_width) - BigUint::one();
    let mut codes = vec![0u32; layout.words_per_group];
    for slot in codes.iter_mut().rev() {
        let low = &rest & &mask;
        *slot = u32::try_from(&low).expect("masked to width");
        rest >>= layout.word_width;
    }
    let marker = BigUint::from(layout.marker_value());
    if rest != marker {
        return Err(Error::MarkerMismatch {
            block: String::new(),
            sub_block: 0,
            got: rest.to_string(),
            want: marker.to_string(),
        });
    }
    Ok(codes)
}

/// One assembled block: left address, payload, right address.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedBlock {
    pub index: usize,
    pub left: DnaSeq,
    pub right: DnaSeq,
    pub payload: DnaSeq,
}

impl EncodedBlock {
    pub fn sequence(&self) -> DnaSeq {
        let mut out = self.left.bases().to_vec();
        out.extend_from_slice(&self.payload);
        out.extend_from_slice(&self.right);
        DnaSeq::new(out)
    }
}

/// Layout plus the address pair of every block, in block order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub layout: BlockLayout,
    pub pairs: Vec<(DnaSeq, DnaSeq)>,
}

impl Manifest {
    pub fn save<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{MANIFEST_HEADER}")?;
        writeln!(
            w,
            "layout addr_len={} sub_blocks={} sub_len={} words_per_group={} word_width={} marker={}",
            self.layout.addr_len,
            self.layout.sub_blocks,
            self.layout.sub_len,
            self.layout.words_per_group,
            self.layout.word_width,
            self.layout.marker,
        )?;
        for (i, (left, right)) in self.pairs.iter().enumerate() {
            writeln!(w, "block {i} left={left} right={right}")?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(r: R, path: &str) -> Result<Self> {
        let err = |line: usize, msg: String| Error::FileFormat {
            path: path.to_string(),
            line,
            msg,
        };
        let mut lines = r.lines().enumerate();
        match lines.next() {
            Some((_, Ok(h))) if h == MANIFEST_HEADER => {}
            Some((_, Ok(h))) => return Err(err(1, format!("bad header {h:?}"))),
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(err(1, "empty file".into())),
        }
        let (lno, layout_line) = match lines.next() {
            Some((i, Ok(l))) => (i + 1, l),
            Some((_, Err(e))) => return Err(e.into()),
            None => return Err(err(2, "missing layout line".into())),
        };
        let mut fields: HashMap<&str, &str> = HashMap::new();
        let mut parts = layout_line.split_whitespace();
        if parts.next() != Some("layout") {
            return Err(err(lno, "expected layout line".into()));
        }
        for part in parts {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| err(lno, format!("bad layout field {part:?}")))?;
            fields.insert(k, v);
        }
        let get = |k: &str| -> Result<&str> {
            fields
                .get(k)
                .copied()
                .ok_or_else(|| err(lno, format!("missing layout field {k}")))
        };
        let num = |k: &str| -> Result<usize> {
            get(k)?
                .parse()
                .map_err(|_| err(lno, format!("bad layout field {k}")))
        };
        let layout = BlockLayout {
            addr_len: num("addr_len")?,
            sub_blocks: num("sub_blocks")?,
            sub_len: num("sub_len")?,
            words_per_group: num("words_per_group")?,
            word_width: num("word_width")? as u32,
            marker: get("marker")?.to_string(),
        };
        layout.validate()?;
        let mut pairs = Vec::new();
        for (i, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            if parts.next() != Some("block") {
                return Err(err(i + 1, "expected block line".into()));
            }
            let idx: usize = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(i + 1, "bad block index".into()))?;
            if idx != pairs.len() {
                return Err(err(i + 1, format!("block {idx} out of order")));
            }
            let mut left = None;
            let mut right = None;
            for part in parts {
                match part.split_once('=') {
                    Some(("left", v)) => left = Some(v),
                    Some(("right", v)) => right = Some(v),
                    _ => return Err(err(i + 1, format!("bad field {part:?}"))),
                }
            }
            let left = left.ok_or_else(|| err(i + 1, "missing left".into()))?;
            let right = right.ok_or_else(|| err(i + 1, "missing right".into()))?;
            pairs.push((
                DnaSeq::parse(left).map_err(|e| err(i + 1, e.to_string()))?,
                DnaSeq::parse(right).map_err(|e| err(i + 1, e.to_string()))?,
            ));
        }
        Ok(Manifest { layout, pairs })
    }
}

pub struct EncodeOutput {
    pub blocks: Vec<EncodedBlock>,
    pub dictionary: Dictionary,
    pub manifest: Manifest,
}

/// Builds the per-address codec with all block-level checks applied.
fn block_codec(left: &DnaSeq, layout: &BlockLayout, perturb: &PerturbConfig) -> Result<PrefixCodec> {
    if left.len() != layout.addr_len {
        return Err(Error::LengthMismatch {
            left: left.len(),
            right: layout.addr_len,
        });
    }
    let codec = PrefixCodec::new(left.clone(), layout.sub_len)?;
    layout.check_capacity(&codec)?;
    if !codec.perturbation_unique(perturb) {
        return Err(Error::PerturbationAmbiguous {
            address: left.to_string(),
        });
    }
    Ok(codec)
}

/// Encodes text into blocks. Words are padded up to a whole number of
/// blocks with the reserved pad code. A pair whose left address shows up
/// anywhere unexpected in the assembled block (for instance across a
/// sub-block boundary) is dropped and the next pair is tried.
pub fn encode_text(
    text: &str,
    layout: &BlockLayout,
    pairs: &[(DnaSeq, DnaSeq)],
) -> Result<EncodeOutput> {
    layout.validate()?;
    let perturb = PerturbConfig::default();
    let dictionary = Dictionary::build(text, layout.word_width)?;
    let mut codes: Vec<u32> = tokenize(text)
        .iter()
        .map(|w| dictionary.lookup(w).expect("dictionary covers the text"))
        .collect();
    let wpb = layout.words_per_block();
    let block_count = codes.len().div_ceil(wpb);
    codes.resize(block_count * wpb, dictionary.pad_index());

    let mut blocks = Vec::with_capacity(block_count);
    let mut used_pairs = Vec::with_capacity(block_count);
    let mut pair_iter = pairs.iter();
    for index in 0..block_count {
        let word_codes = &codes[index * wpb..(index + 1) * wpb];
        let mut last_collision: Option<(usize, usize)> = None;
        let placed = loop {
            let Some((left, right)) = pair_iter.next() else {
                return Err(match last_collision {
                    Some((block, offset)) => Error::AddressCollision { block, offset },
                    None => Error::InsufficientAddresses {
                        have: pairs.len(),
                        need: pairs.len() + (block_count - index),
                    },
                });
            };
            let codec = match block_codec(left, layout, &perturb) {
                Ok(c) => c,
                Err(Error::PerturbationAmbiguous { .. }) => continue,
                Err(e) => return Err(e),
            };
            let mut payload = Vec::with_capacity(layout.payload_len());
            for g in 0..layout.sub_blocks {
                let group =
                    &word_codes[g * layout.words_per_group..(g + 1) * layout.words_per_group];
                let x = group_to_integer(group, layout)?;
                let body = codec.encode_body(layout.sub_len, &x)?;
                payload.extend_from_slice(&codec.perturb(&body, &perturb));
            }
            let block = EncodedBlock {
                index,
                left: left.clone(),
                right: right.clone(),
                payload: DnaSeq::new(payload),
            };
            let sequence = block.sequence();
            let hits = sequence.find_all(left);
            if hits != vec![0] {
                let stray = hits.into_iter().find(|&p| p != 0).unwrap_or(0);
                last_collision = Some((index, stray));
                continue;
            }
            break block;
        };
        used_pairs.push((placed.left.clone(), placed.right.clone()));
        blocks.push(placed);
    }

    Ok(EncodeOutput {
        blocks,
        dictionary,
        manifest: Manifest {
            layout: layout.clone(),
            pairs: used_pairs,
        },
    })
}

/// One repaired substitution, with its block coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRepair {
    pub block: String,
    pub block_index: usize,
    pub sub_block: usize,
    pub repair: Repair,
}

pub struct DecodedText {
    pub text: String,
    pub repairs: Vec<BlockRepair>,
}

/// Decodes labelled block sequences back into text. Blocks may arrive in
/// any order; each is matched to its manifest row by its flanking
/// addresses. With `repair` set, sub-blocks that fail to parse are decoded
/// through the single-substitution repair path, constrained to group
/// integers with valid marker bits and word codes.
pub fn decode_blocks(
    blocks: &[(String, DnaSeq)],
    dictionary: &Dictionary,
    manifest: &Manifest,
    repair: bool,
) -> Result<DecodedText> {
    let layout = &manifest.layout;
    layout.validate()?;
    let perturb = PerturbConfig::default();
    let mut slots: Vec<Option<Vec<u32>>> = vec![None; manifest.pairs.len()];
    let mut repairs = Vec::new();

    for (id, sequence) in blocks {
        if sequence.len() != layout.block_len() {
            return Err(Error::BlockLength {
                block: id.clone(),
                len: sequence.len(),
                want: layout.block_len(),
            });
        }
        let left = &sequence[..layout.addr_len];
        let right = &sequence[sequence.len() - layout.addr_len..];
        let Some(block_index) = manifest
            .pairs
            .iter()
            .position(|(l, r)| l.bases() == left && r.bases() == right)
        else {
            return Err(Error::UnknownAddress { block: id.clone() });
        };
        let codec = PrefixCodec::new(DnaSeq::from(left), layout.sub_len)?;
        let marker = BigUint::from(layout.marker_value());
        let value_shift = layout.words_per_group * layout.word_width as usize;
        let accept = |x: &BigUint| {
            if x >> value_shift != marker {
                return false;
            }
            match integer_to_group(x, layout) {
                Ok(codes) => codes.iter().all(|&c| {
                    c == dictionary.pad_index() || dictionary.word(c).is_some()
                }),
                Err(_) => false,
            }
        };
        let mut codes = Vec::with_capacity(layout.words_per_block());
        for g in 0..layout.sub_blocks {
            let start = layout.addr_len + g * layout.sub_len;
            let sub = DnaSeq::from(&sequence[start..start + layout.sub_len]);
            let body = codec.unperturb(&sub, &perturb);
            let wrap = |e: Error| Error::DecodeFailed {
                block: id.clone(),
                sub_block: g,
                source: Box::new(e),
            };
            let x = if repair {
                let (x, subs) = codec
                    .decode_body_with_repair_filtered(&body, accept)
                    .map_err(wrap)?;
                for r in subs {
                    repairs.push(BlockRepair {
                        block: id.clone(),
                        block_index,
                        sub_block: g,
                        repair: r,
                    });
                }
                x
            } else {
                codec.decode_body(&body).map_err(wrap)?
            };
            let group = integer_to_group(&x, layout).map_err(|e| match e {
                Error::MarkerMismatch { got, want, .. } => Error::MarkerMismatch {
                    block: id.clone(),
                    sub_block: g,
                    got,
                    want,
                },
                other => other,
            })?;
            codes.extend(group);
        }
        slots[block_index] = Some(codes);
    }

    let mut words: Vec<&str> = Vec::new();
    for (index, slot) in slots.iter().enumerate() {
        let Some(codes) = slot else {
            return Err(Error::MissingBlock { index });
        };
        for &code in codes {
            if code == dictionary.pad_index() {
                continue;
            }
            let word = dictionary
                .word(code)
                .ok_or(Error::IndexOutOfRange { index: code })?;
            words.push(word);
        }
    }
    Ok(DecodedText {
        text: words.join(" "),
        repairs,
    })
}

/// Bytes per gram at roughly 650 daltons per nucleotide.
pub fn density(bytes: u64, nucleotides: u64) -> f64 {
    if bytes == 0 {
        return 0.0;
    }
    assert!(nucleotides > 0, "density needs at least one nucleotide");
    bytes as f64 / (nucleotides as f64 * GRAMS_PER_NT)
}

/// Planning report: geometry of the encoding next to a plain fixed-width
/// character baseline using the same block budget.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanReport {
    pub words: usize,
    pub distinct_words: usize,
    pub chars: usize,
    pub blocks: usize,
    pub nucleotides: u64,
    pub density_bytes_per_gram: f64,
    pub ascii_baseline_blocks: usize,
}

pub fn plan(text: &str, layout: &BlockLayout) -> PlanReport {
    let tokens = tokenize(text);
    let words = tokens.len();
    let distinct_words = tokens.iter().collect::<std::collections::HashSet<_>>().len();
    let chars = if words == 0 {
        0
    } else {
        tokens.iter().map(|t| t.len()).sum::<usize>() + words - 1
    };
    let blocks = words.div_ceil(layout.words_per_block());
    let nucleotides = (blocks * layout.block_len()) as u64;
    let density_bytes_per_gram = if nucleotides == 0 {
        0.0
    } else {
        density(chars as u64, nucleotides)
    };
    // seven-bit characters into the same payload area, two bits per symbol
    let ascii_baseline_blocks = (7 * chars).div_ceil(2 * layout.payload_len());
    PlanReport {
        words,
        distinct_words,
        chars,
        blocks,
        nucleotides,
        density_bytes_per_gram,
        ascii_baseline_blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::address::{greedy_search, pair_addresses, ConstraintConfig};

    fn default_pairs(n: usize, seed: u64) -> Vec<(DnaSeq, DnaSeq)> {
        let out = greedy_search(2 * n, &ConstraintConfig::default(), seed).unwrap();
        assert!(out.complete());
        pair_addresses(&out.set, n).unwrap()
    }

    #[test]
    fn dictionary_basics() {
        let d = Dictionary::build("a b a", 12).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.lookup("a"), Some(2048));
        assert_eq!(d.lookup("b"), Some(2049));
        assert_eq!(d.word(2049), Some("b"));
        assert_eq!(d.pad_index(), 4095);
        assert!(Dictionary::build("  \n ", 12).is_err());
        // punctuation-attached tokens stay distinct
        let d = Dictionary::build("university university.", 12).unwrap();
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn dictionary_overflow() {
        let text: Vec<String> = (0..4).map(|i| format!("w{i}")).collect();
        let text = text.join(" ");
        assert!(matches!(
            Dictionary::build(&text, 2),
            Err(Error::DictionaryFull { width: 2, .. })
        ));
        // width 3: offset 4, pad 7, capacity 3
        let d = Dictionary::build("x y z", 3).unwrap();
        assert_eq!(d.capacity(), 3);
        assert!(Dictionary::build(&text, 3).is_err());
    }

    #[test]
    fn dictionary_file_roundtrip() {
        let d = Dictionary::build("to be or not to be", 12).unwrap();
        let mut buf = Vec::new();
        d.save(&mut buf).unwrap();
        let back = Dictionary::load(std::io::BufReader::new(&buf[..]), "mem").unwrap();
        assert_eq!(back, d);
        assert!(String::from_utf8_lossy(&buf).starts_with(DICT_HEADER));
    }

    #[test]
    fn group_packing() {
        let layout = BlockLayout::default();
        let codes = [2048u32; 6];
        let x = group_to_integer(&codes, &layout).unwrap();
        // marker 11 on top of six codes with only their top bit set
        let mut expected = BigUint::from(3u8);
        for _ in 0..6 {
            expected = (expected << 12) | BigUint::from(2048u32);
        }
        assert_eq!(x, expected);
        assert!(x >= BigUint::from(3u8) << 72u32);
        assert_eq!(integer_to_group(&x, &layout).unwrap(), codes);
        assert!(matches!(
            group_to_integer(&codes[..5], &layout),
            Err(Error::WrongGroupSize { got: 5, want: 6 })
        ));
    }

    #[test]
    fn group_roundtrip_random() {
        let layout = BlockLayout::default();
        let mut state = 0x853c49e6748fea9bu64;
        for _ in 0..2_000 {
            let mut codes = [0u32; 6];
            for c in codes.iter_mut() {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                *c = (state >> 33) as u32 & 0xfff;
            }
            let x = group_to_integer(&codes, &layout).unwrap();
            assert_eq!(integer_to_group(&x, &layout).unwrap(), codes);
        }
    }

    #[test]
    fn marker_is_checked() {
        let layout = BlockLayout::default();
        let x = BigUint::from(2u8) << 72u32; // marker bits 10
        assert!(matches!(
            integer_to_group(&x, &layout),
            Err(Error::MarkerMismatch { .. })
        ));
    }

    #[test]
    fn encode_decode_roundtrip_small() {
        let layout = BlockLayout::default();
        let pairs = default_pairs(2, 21);
        let text = "the quick brown fox jumps over the lazy dog";
        let out = encode_text(text, &layout, &pairs).unwrap();
        assert_eq!(out.blocks.len(), 1);
        let seqs: Vec<(String, DnaSeq)> = out
            .blocks
            .iter()
            .map(|b| (format!("block-{:03}", b.index), b.sequence()))
            .collect();
        assert_eq!(seqs[0].1.len(), 1000);
        let decoded = decode_blocks(&seqs, &out.dictionary, &out.manifest, false).unwrap();
        assert_eq!(decoded.text, normalize(text));
        assert!(decoded.repairs.is_empty());
    }

    #[test]
    fn single_word_text_pads_out() {
        let layout = BlockLayout::default();
        let pairs = default_pairs(2, 33);
        let out = encode_text("hello", &layout, &pairs).unwrap();
        assert_eq!(out.blocks.len(), 1);
        assert_eq!(out.dictionary.len(), 1);
        let seqs = vec![("b".to_string(), out.blocks[0].sequence())];
        let decoded = decode_blocks(&seqs, &out.dictionary, &out.manifest, false).unwrap();
        assert_eq!(decoded.text, "hello");
    }

    #[test]
    fn blocks_avoid_left_address() {
        let layout = BlockLayout::default();
        let pairs = default_pairs(3, 44);
        let words: Vec<String> = (0..144).map(|i| format!("w{i}")).collect();
        let text = words.join(" ");
        let out = encode_text(&text, &layout, &pairs).unwrap();
        assert_eq!(out.blocks.len(), 2);
        for b in &out.blocks {
            let seq = b.sequence();
            assert_eq!(seq.len(), 1000);
            assert_eq!(seq.find_all(&b.left), vec![0], "stray left address");
        }
    }

    #[test]
    fn decode_rejects_damage() {
        let layout = BlockLayout::default();
        let pairs = default_pairs(2, 55);
        let out = encode_text("alpha beta gamma", &layout, &pairs).unwrap();
        let block = out.blocks[0].sequence();

        // truncated
        let truncated = DnaSeq::from(&block[..999]);
        let r = decode_blocks(
            &[("b".into(), truncated)],
            &out.dictionary,
            &out.manifest,
            false,
        );
        assert!(matches!(r, Err(Error::BlockLength { len: 999, .. })));

        // unknown flanks
        let mut wrong = block.bases().to_vec();
        for b in wrong.iter_mut().take(20) {
            *b = b.complement();
        }
        let r = decode_blocks(
            &[("b".into(), DnaSeq::new(wrong))],
            &out.dictionary,
            &out.manifest,
            false,
        );
        assert!(matches!(r, Err(Error::UnknownAddress { .. })));

        // missing block
        let r = decode_blocks(&[], &out.dictionary, &out.manifest, false);
        assert!(matches!(r, Err(Error::MissingBlock { index: 0 })));
    }

    #[test]
    fn density_examples() {
        let d = density(17_000, 32_000);
        assert!((4.8e20..=5.0e20).contains(&d), "{d}");
        assert_eq!(density(0, 5), 0.0);
        let ratio = density(34_000, 32_000) / d;
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn plan_empty_text() {
        let layout = BlockLayout::default();
        let p = plan("", &layout);
        assert_eq!(p.words, 0);
        assert_eq!(p.blocks, 0);
        assert_eq!(p.nucleotides, 0);
        assert_eq!(p.density_bytes_per_gram, 0.0);
    }

    #[test]
    fn plan_counts() {
        let layout = BlockLayout::default();
        let p = plan("one two two three.", &layout);
        assert_eq!(p.words, 4);
        assert_eq!(p.distinct_words, 3);
        assert_eq!(p.chars, 18);
        assert_eq!(p.blocks, 1);
        assert_eq!(p.nucleotides, 1000);
    }
}
