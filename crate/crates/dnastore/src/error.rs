//! Error types shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid base character {0:?}")]
    ParseBase(char),

    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty sequence not allowed here")]
    EmptySequence,

    #[error("set members must all have the same length")]
    MixedLengths,

    #[error("set must be nonempty")]
    EmptySet,

    #[error("set is not mutually uncorrelated: {reason}")]
    NotMutuallyUncorrelated { reason: String },

    #[error("set size {size} is odd; the doubling construction needs an even split")]
    OddSetSize { size: usize },

    #[error("length {n} unsupported here (expected {expected})")]
    UnsupportedLength { n: usize, expected: &'static str },

    #[error("sequence {seq} is not self-uncorrelated")]
    NotSelfUncorrelated { seq: String },

    #[error("value {value} out of range: capacity for this length is {capacity}")]
    ValueOutOfRange { value: String, capacity: String },

    #[error("body length {l} out of range (table built up to {lmax})")]
    BodyLengthOutOfRange { l: usize, lmax: usize },

    #[error("malformed codeword at offset {offset}: {reason}")]
    MalformedCodeword { offset: usize, reason: String },

    #[error("unrepairable codeword (first failure at offset {offset}): {candidates} viable single-symbol repairs {list:?}")]
    Unrepairable {
        offset: usize,
        candidates: usize,
        list: Vec<(usize, char)>,
    },

    #[error("address search exhausted after {tried} candidates (accepted {accepted}, rejected c1={c1} c2={c2} c3={c3} c4={c4})")]
    SearchExhausted {
        tried: u64,
        accepted: usize,
        c1: u64,
        c2: u64,
        c3: u64,
        c4: u64,
    },

    #[error("need {need} addresses, only {have} available")]
    InsufficientAddresses { have: usize, need: usize },

    #[error("dictionary full: {distinct} distinct words exceed capacity {capacity} at width {width}; use a larger width")]
    DictionaryFull {
        distinct: usize,
        capacity: usize,
        width: u32,
    },

    #[error("text contains no words")]
    EmptyText,

    #[error("group has {got} words, layout expects {want}")]
    WrongGroupSize { got: usize, want: usize },

    #[error("word index {index} outside dictionary range")]
    IndexOutOfRange { index: u32 },

    #[error("word {word:?} not in dictionary")]
    UnknownWord { word: String },

    #[error("layout needs {bits} bits per group but codeword capacity for the sub-block length is smaller")]
    CapacityExceeded { bits: usize },

    #[error("address occurs inside block {block} at offset {offset}")]
    AddressCollision { block: usize, offset: usize },

    #[error("block {block}: expected length {want}, got {len}")]
    BlockLength {
        block: String,
        len: usize,
        want: usize,
    },

    #[error("block {block}: flanking addresses do not match any known pair")]
    UnknownAddress { block: String },

    #[error("block {block} sub-block {sub_block}: {source}")]
    DecodeFailed {
        block: String,
        sub_block: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("block {block} sub-block {sub_block}: word marker bits {got} do not match {want}")]
    MarkerMismatch {
        block: String,
        sub_block: usize,
        got: String,
        want: String,
    },

    #[error("no block carries the addresses for text position {index}")]
    MissingBlock { index: usize },

    #[error("address {address} fails perturbation uniqueness check")]
    PerturbationAmbiguous { address: String },

    #[error("no block with id {id:?}")]
    UnknownBlockId { id: String },

    #[error("duplicate block id {id:?}")]
    DuplicateId { id: String },

    #[error("{path} line {line}: {msg}")]
    FileFormat {
        path: String,
        line: usize,
        msg: String,
    },

    #[error("fragment {which} anchor not found in target block")]
    AnchorNotFound { which: &'static str },

    #[error("fragment {which} anchor occurs {count} times in target block; must be unique")]
    AnchorAmbiguous { which: &'static str, count: usize },

    #[error("fragment too short: {len} < homology length {min}")]
    FragmentTooShort { len: usize, min: usize },

    #[error("fragment tail anchor (at {tail}) lies before its head anchor (at {head})")]
    AnchorOrder { head: usize, tail: usize },

    #[error("assembly needs at least two fragments, got {got}")]
    TooFewFragments { got: usize },

    #[error("rewrite damaged the flanking addresses of block {id:?}")]
    AddressDamaged { id: String },

    #[error("junction {junction}: no exact overlap of at least {min} symbols")]
    NoOverlap { junction: usize, min: usize },

    #[error("junction {junction}: ambiguous overlaps of lengths {lengths:?}")]
    AmbiguousOverlap {
        junction: usize,
        lengths: Vec<usize>,
    },

    #[error("selection tolerance {tolerance} too large (max 3)")]
    ToleranceTooLarge { tolerance: u32 },

    #[error("primer length {len} below minimum 10")]
    PrimerTooShort { len: usize },

    #[error("primer has the wrong direction for this role")]
    WrongPrimerDirection,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
