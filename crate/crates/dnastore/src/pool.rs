//! In-silico pool of addressed blocks: primer selection, fragment-based
//! rewriting, overlap-extension assembly, and word-level edits.
//!
//! Selection models anchored PCR: the forward primer must match the block's
//! 5' prefix and the reverse primer the reverse complement of its 3'
//! suffix, each within a small Hamming tolerance. Specificity comes from
//! the address distance, not from any kinetic model. Pools are immutable;
//! every rewrite returns a new pool.

use std::collections::HashSet;
use std::io::{BufRead, Write};

use crate::codec::{group_to_integer, BlockLayout, Dictionary, EncodedBlock};
use crate::error::{Error, Result};
use crate::psc::{PerturbConfig, PrefixCodec};
use crate::seq::{hamming, DnaSeq};

pub const POOL_HEADER: &str = ";DNASTORE-POOL v1";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// A selection primer; at least ten symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Primer {
    pub sequence: DnaSeq,
    pub direction: Direction,
}

impl Primer {
    pub fn new(sequence: DnaSeq, direction: Direction) -> Result<Self> {
        if sequence.len() < 10 {
            return Err(Error::PrimerTooShort {
                len: sequence.len(),
            });
        }
        Ok(Primer {
            sequence,
            direction,
        })
    }

    pub fn forward(sequence: DnaSeq) -> Result<Self> {
        Primer::new(sequence, Direction::Forward)
    }

    pub fn reverse(sequence: DnaSeq) -> Result<Self> {
        Primer::new(sequence, Direction::Reverse)
    }

    /// Builds the reverse primer that anneals to the given 3'-end site
    /// written in sense orientation (primer tables often list the site
    /// rather than the primer itself).
    pub fn reverse_from_site(site: &DnaSeq) -> Result<Self> {
        Primer::new(site.reverse_complement(), Direction::Reverse)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FragmentRole {
    Upstream,
    Middle,
    Downstream,
}

/// A synthesized piece used for rewriting or assembly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fragment {
    pub sequence: DnaSeq,
    pub role: FragmentRole,
}

impl Fragment {
    pub fn new(sequence: DnaSeq, role: FragmentRole) -> Result<Self> {
        if sequence.is_empty() {
            return Err(Error::EmptySequence);
        }
        Ok(Fragment { sequence, role })
    }
}

/// One stored block. `copies` models amplification; it defaults to 1 and
/// is written to disk only when it differs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolRecord {
    pub id: String,
    pub sequence: DnaSeq,
    pub left: DnaSeq,
    pub right: DnaSeq,
    pub copies: u32,
}

impl PoolRecord {
    pub fn new(id: String, sequence: DnaSeq, left: DnaSeq, right: DnaSeq) -> Result<Self> {
        let record = PoolRecord {
            id,
            sequence,
            left,
            right,
            copies: 1,
        };
        record.validate()?;
        Ok(record)
    }

    fn validate(&self) -> Result<()> {
        if self.id.is_empty() || self.id.contains(char::is_whitespace) || self.id.contains('>') {
            return Err(Error::InvalidConfig(format!("block id {:?}", self.id)));
        }
        let n = self.sequence.len();
        if n < self.left.len() + self.right.len()
            || self.sequence[..self.left.len()] != *self.left.bases()
            || self.sequence[n - self.right.len()..] != *self.right.bases()
        {
            return Err(Error::AddressDamaged {
                id: self.id.clone(),
            });
        }
        Ok(())
    }
}

/// An ordered collection of uniquely named blocks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Pool {
    records: Vec<PoolRecord>,
}

impl Pool {
    pub fn new(records: Vec<PoolRecord>) -> Result<Self> {
        let mut seen = HashSet::new();
        for r in &records {
            r.validate()?;
            if !seen.insert(r.id.as_str()) {
                return Err(Error::DuplicateId { id: r.id.clone() });
            }
        }
        Ok(Pool { records })
    }

    pub fn from_blocks(blocks: &[EncodedBlock]) -> Result<Self> {
        Pool::new(
            blocks
                .iter()
                .map(|b| {
                    PoolRecord::new(
                        format!("block-{:03}", b.index),
                        b.sequence(),
                        b.left.clone(),
                        b.right.clone(),
                    )
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn records(&self) -> &[PoolRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&PoolRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    fn get_required(&self, id: &str) -> Result<&PoolRecord> {
        self.get(id).ok_or_else(|| Error::UnknownBlockId {
            id: id.to_string(),
        })
    }

    /// Anchored primer selection. Returns ids of blocks whose prefix is
    /// within `tolerance` of the forward primer and whose suffix, reverse
    /// complemented, is within `tolerance` of the reverse primer. An empty
    /// result is a valid outcome.
    pub fn select(&self, fwd: &Primer, rev: &Primer, tolerance: u32) -> Result<Vec<&str>> {
        if tolerance > 3 {
            return Err(Error::ToleranceTooLarge { tolerance });
        }
        if fwd.direction != Direction::Forward || rev.direction != Direction::Reverse {
            return Err(Error::WrongPrimerDirection);
        }
        let mut out = Vec::new();
        for r in &self.records {
            let n = r.sequence.len();
            if fwd.sequence.len() > n || rev.sequence.len() > n {
                continue;
            }
            let d_fwd = hamming(&fwd.sequence, &r.sequence[..fwd.sequence.len()])?;
            if d_fwd > tolerance as usize {
                continue;
            }
            let suffix = DnaSeq::from(&r.sequence[n - rev.sequence.len()..]);
            let d_rev = hamming(&rev.sequence, &suffix.reverse_complement())?;
            if d_rev <= tolerance as usize {
                out.push(r.id.as_str());
            }
        }
        Ok(out)
    }

    /// The primer pair that selects exactly this record.
    pub fn primers_for(record: &PoolRecord) -> Result<(Primer, Primer)> {
        Ok((
            Primer::forward(record.left.clone())?,
            Primer::reverse_from_site(&record.right)?,
        ))
    }

    /// Bumps the copy count of the named blocks.
    pub fn amplify(&self, ids: &[&str]) -> Result<Pool> {
        for id in ids {
            self.get_required(id)?;
        }
        let mut records = self.records.clone();
        for r in &mut records {
            if ids.contains(&r.id.as_str()) {
                r.copies = r.copies.saturating_add(1);
            }
        }
        Ok(Pool { records })
    }

    /// Splices a replacement fragment into one block. The fragment's first
    /// and last `min_homology` symbols must each occur exactly once in the
    /// block; the span from the head anchor through the tail anchor is
    /// replaced by the whole fragment. Other blocks are untouched.
    pub fn gblock_rewrite(
        &self,
        id: &str,
        replacement: &Fragment,
        min_homology: usize,
    ) -> Result<Pool> {
        let target = self.get_required(id)?;
        let frag = &replacement.sequence;
        if frag.len() < min_homology {
            return Err(Error::FragmentTooShort {
                len: frag.len(),
                min: min_homology,
            });
        }
        let head = &frag[..min_homology];
        let tail = &frag[frag.len() - min_homology..];
        let head_hits = target.sequence.find_all(head);
        let tail_hits = target.sequence.find_all(tail);
        let head_at = match head_hits.as_slice() {
            [] => return Err(Error::AnchorNotFound { which: "head" }),
            [at] => *at,
            hits => {
                return Err(Error::AnchorAmbiguous {
                    which: "head",
                    count: hits.len(),
                })
            }
        };
        let tail_at = match tail_hits.as_slice() {
            [] => return Err(Error::AnchorNotFound { which: "tail" }),
            [at] => *at,
            hits => {
                return Err(Error::AnchorAmbiguous {
                    which: "tail",
                    count: hits.len(),
                })
            }
        };
        if tail_at < head_at {
            return Err(Error::AnchorOrder {
                head: head_at,
                tail: tail_at,
            });
        }
        let mut rewritten = target.sequence[..head_at].to_vec();
        rewritten.extend_from_slice(frag);
        rewritten.extend_from_slice(&target.sequence[tail_at + min_homology..]);
        let mut record = target.clone();
        record.sequence = DnaSeq::new(rewritten);
        record.validate()?;
        self.replace(id, record)
    }

    /// Re-encodes one six-word group in place. Only the addressed sub-block
    /// changes; every other block stays bit-identical. Words missing from
    /// the dictionary are added when the width permits.
    pub fn edit_words(
        &self,
        id: &str,
        group_index: usize,
        new_words: &[&str],
        dictionary: &mut Dictionary,
        layout: &BlockLayout,
    ) -> Result<Pool> {
        let target = self.get_required(id)?;
        layout.validate()?;
        if new_words.len() != layout.words_per_group {
            return Err(Error::WrongGroupSize {
                got: new_words.len(),
                want: layout.words_per_group,
            });
        }
        if group_index >= layout.sub_blocks {
            return Err(Error::IndexOutOfRange {
                index: group_index as u32,
            });
        }
        if target.sequence.len() != layout.block_len() {
            return Err(Error::BlockLength {
                block: id.to_string(),
                len: target.sequence.len(),
                want: layout.block_len(),
            });
        }
        let perturb = PerturbConfig::default();
        let codec = PrefixCodec::new(target.left.clone(), layout.sub_len)?;
        layout.check_capacity(&codec)?;

        // the block must decode cleanly before editing
        for g in 0..layout.sub_blocks {
            let start = layout.addr_len + g * layout.sub_len;
            let body = codec.unperturb(
                &DnaSeq::from(&target.sequence[start..start + layout.sub_len]),
                &perturb,
            );
            codec.decode_body(&body).map_err(|e| Error::DecodeFailed {
                block: id.to_string(),
                sub_block: g,
                source: Box::new(e),
            })?;
        }

        // stage dictionary additions so a failure never half-updates it
        let missing: Vec<&str> = {
            let mut seen = HashSet::new();
            new_words
                .iter()
                .copied()
                .filter(|w| dictionary.lookup(w).is_none() && seen.insert(*w))
                .collect()
        };
        if dictionary.len() + missing.len() > dictionary.capacity() {
            return Err(Error::DictionaryFull {
                distinct: dictionary.len() + missing.len(),
                capacity: dictionary.capacity(),
                width: dictionary.width(),
            });
        }
        for w in missing {
            dictionary.add(w)?;
        }
        let codes: Vec<u32> = new_words
            .iter()
            .map(|w| dictionary.lookup(w).expect("just added"))
            .collect();

        let x = group_to_integer(&codes, layout)?;
        let body = codec.encode_body(layout.sub_len, &x)?;
        let sub = codec.perturb(&body, &perturb);

        let mut sequence = target.sequence.bases().to_vec();
        let start = layout.addr_len + group_index * layout.sub_len;
        sequence[start..start + layout.sub_len].copy_from_slice(&sub);
        let sequence = DnaSeq::new(sequence);
        let hits = sequence.find_all(&target.left);
        if hits != vec![0] {
            let stray = hits.into_iter().find(|&p| p != 0).unwrap_or(0);
            return Err(Error::AddressCollision {
                block: group_index,
                offset: stray,
            });
        }
        let mut record = target.clone();
        record.sequence = sequence;
        self.replace(id, record)
    }

    fn replace(&self, id: &str, record: PoolRecord) -> Result<Pool> {
        let records = self
            .records
            .iter()
            .map(|r| if r.id == id { record.clone() } else { r.clone() })
            .collect();
        Ok(Pool { records })
    }

    /// FASTA-like text format: a comment header, then one ">id left=..
    /// right=.." line and one sequence line per block.
    pub fn save<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{POOL_HEADER}")?;
        for r in &self.records {
            write!(w, ">{} left={} right={}", r.id, r.left, r.right)?;
            if r.copies != 1 {
                write!(w, " copies={}", r.copies)?;
            }
            writeln!(w)?;
            writeln!(w, "{}", r.sequence)?;
        }
        Ok(())
    }

    pub fn load<R: BufRead>(r: R, path: &str) -> Result<Pool> {
        let err = |line: usize, msg: String| Error::FileFormat {
            path: path.to_string(),
            line,
            msg,
        };
        let mut lines = Vec::new();
        for l in r.lines() {
            lines.push(l?);
        }
        if lines.first().map(String::as_str) != Some(POOL_HEADER) {
            return Err(err(1, format!("expected header {POOL_HEADER:?}")));
        }
        let mut records = Vec::new();
        let mut seen: HashSet<String> = HashSet::new();
        let mut i = 1;
        while i < lines.len() {
            let line = lines[i].trim_end();
            if line.is_empty() {
                i += 1;
                continue;
            }
            let Some(header) = line.strip_prefix('>') else {
                return Err(err(i + 1, "expected a '>' record line".into()));
            };
            let mut parts = header.split_whitespace();
            let id = parts
                .next()
                .ok_or_else(|| err(i + 1, "missing block id".into()))?
                .to_string();
            let mut left = None;
            let mut right = None;
            let mut copies = 1u32;
            for part in parts {
                match part.split_once('=') {
                    Some(("left", v)) => left = Some(v.to_string()),
                    Some(("right", v)) => right = Some(v.to_string()),
                    Some(("copies", v)) => {
                        copies = v
                            .parse()
                            .map_err(|_| err(i + 1, format!("bad copies {v:?}")))?
                    }
                    _ => return Err(err(i + 1, format!("bad field {part:?}"))),
                }
            }
            let left = left.ok_or_else(|| err(i + 1, "missing left=".into()))?;
            let right = right.ok_or_else(|| err(i + 1, "missing right=".into()))?;
            if !seen.insert(id.clone()) {
                return Err(err(i + 1, format!("duplicate id {id:?}")));
            }
            let seq_line = lines
                .get(i + 1)
                .ok_or_else(|| err(i + 2, "missing sequence line".into()))?;
            let mut record = PoolRecord::new(
                id,
                DnaSeq::parse(seq_line.trim()).map_err(|e| err(i + 2, e.to_string()))?,
                DnaSeq::parse(&left).map_err(|e| err(i + 1, e.to_string()))?,
                DnaSeq::parse(&right).map_err(|e| err(i + 1, e.to_string()))?,
            )
            .map_err(|e| err(i + 1, e.to_string()))?;
            record.copies = copies;
            records.push(record);
            i += 2;
        }
        Ok(Pool { records })
    }
}

/// Overlap-extension assembly: consecutive fragments must share exactly one
/// suffix/prefix overlap of at least `min_overlap` symbols; each overlap is
/// kept once in the result.
pub fn oe_pcr_assemble(fragments: &[Fragment], min_overlap: usize) -> Result<DnaSeq> {
    if fragments.len() < 2 {
        return Err(Error::TooFewFragments {
            got: fragments.len(),
        });
    }
    let mut acc = fragments[0].sequence.bases().to_vec();
    for (junction, frag) in fragments[1..].iter().enumerate() {
        let next = frag.sequence.bases();
        let max_l = acc.len().min(next.len());
        let matches: Vec<usize> = (min_overlap..=max_l)
            .filter(|&l| acc[acc.len() - l..] == next[..l])
            .collect();
        match matches.as_slice() {
            [] => {
                return Err(Error::NoOverlap {
                    junction,
                    min: min_overlap,
                })
            }
            [l] => acc.extend_from_slice(&next[*l..]),
            ls => {
                return Err(Error::AmbiguousOverlap {
                    junction,
                    lengths: ls.to_vec(),
                })
            }
        }
    }
    Ok(DnaSeq::new(acc))
}
