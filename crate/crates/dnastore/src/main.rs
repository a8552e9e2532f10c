//! Command-line surface. Every run with identical flags and inputs produces
//! byte-identical primary outputs.
//!
//! Exit codes: 0 success, 1 error, 2 partial address generation, 3 empty
//! selection.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dnastore::address::{
    greedy_search, pair_addresses, read_pairs, write_addresses, write_pairs, ConstraintConfig,
};
use dnastore::codec::{
    decode_blocks, density, encode_text, plan, BlockLayout, Dictionary, Manifest,
};
use dnastore::correlation::{
    bounds_u, count_avoiding, max_uncorrelated_bruteforce, UncorrelatedSet,
};
use dnastore::error::{Error, Result};
use dnastore::pool::{Fragment, FragmentRole, Pool, Primer};
use dnastore::seq::DnaSeq;

#[derive(Parser)]
#[command(
    name = "dnastore",
    version,
    about = "Rewritable, random-access DNA storage toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate address sequences satisfying the selection constraints
    Addrgen(AddrgenArgs),
    /// Encode a text file into a pool of addressed blocks
    Encode(EncodeArgs),
    /// Decode a pool back to text
    Decode(DecodeArgs),
    /// Select blocks by primer pair
    Select(SelectArgs),
    /// Rewrite one block, by words or by fragment splice
    Rewrite(RewriteArgs),
    /// Count pattern-avoiding strings or maximal uncorrelated sets
    Count(CountArgs),
    /// Report encoding geometry and storage density
    Stats(StatsArgs),
}

#[derive(Args)]
struct AddrgenArgs {
    /// address length
    #[arg(long, default_value_t = 20)]
    n: usize,
    /// number of addresses requested
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// write addresses here (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// also write disjoint address pairs, two per line
    #[arg(long)]
    pairs_out: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    rds_bound: u32,
    /// minimum pairwise Hamming distance (default n/2)
    #[arg(long)]
    min_distance: Option<usize>,
    #[arg(long, default_value_t = 0.4)]
    gc_low: f64,
    #[arg(long, default_value_t = 0.6)]
    gc_high: f64,
    #[arg(long, default_value_t = 6)]
    stem_len: usize,
    /// ignore overlaps shorter than this in the uncorrelatedness check
    #[arg(long, default_value_t = 1)]
    uncorrelation_threshold: usize,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    /// sample candidates uniformly instead of the balanced stream
    #[arg(long)]
    uniform: bool,
    /// line-delimited key=value report
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct LayoutArgs {
    #[arg(long, default_value_t = 12)]
    sub_blocks: usize,
    #[arg(long, default_value_t = 80)]
    sub_len: usize,
    #[arg(long, default_value_t = 6)]
    words_per_group: usize,
    /// bits per word code
    #[arg(long, default_value_t = 12)]
    width: u32,
    #[arg(long, default_value = "11")]
    marker: String,
}

impl LayoutArgs {
    fn layout(&self, addr_len: usize) -> Result<BlockLayout> {
        let layout = BlockLayout {
            addr_len,
            sub_blocks: self.sub_blocks,
            sub_len: self.sub_len,
            words_per_group: self.words_per_group,
            word_width: self.width,
            marker: self.marker.clone(),
        };
        layout.validate()?;
        Ok(layout)
    }
}

#[derive(Args)]
struct EncodeArgs {
    /// input text file
    #[arg(long)]
    text: PathBuf,
    /// address pair file, one tab-separated pair per line
    #[arg(long)]
    pairs: PathBuf,
    #[arg(long)]
    out_pool: PathBuf,
    #[arg(long)]
    out_dict: PathBuf,
    #[arg(long)]
    out_manifest: PathBuf,
    #[command(flatten)]
    layout: LayoutArgs,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(long)]
    pool: PathBuf,
    #[arg(long)]
    dict: PathBuf,
    #[arg(long)]
    manifest: PathBuf,
    /// attempt single-substitution repair of damaged sub-blocks,
    /// logging every applied repair to standard error
    #[arg(long)]
    repair: bool,
}

#[derive(Args)]
struct SelectArgs {
    #[arg(long)]
    pool: PathBuf,
    /// forward primer (matches the block's 5' prefix)
    #[arg(long)]
    fwd: String,
    /// reverse primer sequence
    #[arg(long, conflicts_with = "rev_site")]
    rev: Option<String>,
    /// 3'-end site in sense orientation (a right address); the reverse
    /// primer is its reverse complement
    #[arg(long)]
    rev_site: Option<String>,
    #[arg(long, default_value_t = 0)]
    tolerance: u32,
    /// write matching records here (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RewriteArgs {
    #[arg(long)]
    pool: PathBuf,
    /// id of the block to rewrite
    #[arg(long)]
    block: String,
    #[arg(long)]
    out_pool: PathBuf,

    /// sub-block index for a word rewrite
    #[arg(long)]
    group: Option<usize>,
    /// comma-separated replacement words, one group's worth
    #[arg(long, requires = "group", requires = "dict", requires = "manifest")]
    words: Option<String>,
    #[arg(long)]
    dict: Option<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// where to write the dictionary if the rewrite adds words
    #[arg(long)]
    out_dict: Option<PathBuf>,

    /// replacement fragment as a sequence literal
    #[arg(long, conflicts_with = "words")]
    fragment: Option<String>,
    /// replacement fragment from a file (one sequence)
    #[arg(long, conflicts_with_all = ["words", "fragment"])]
    fragment_file: Option<PathBuf>,
    #[arg(long, default_value_t = 30)]
    min_homology: usize,
}

#[derive(Args)]
struct CountArgs {
    /// pattern(s) to avoid; repeat the flag for a set
    #[arg(long = "pattern")]
    patterns: Vec<String>,
    /// table rows 0..=N
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    /// instead: exact largest mutually uncorrelated set for this length
    #[arg(long, conflicts_with = "patterns")]
    maxset_n: Option<usize>,
    #[arg(long)]
    machine: bool,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long, conflicts_with = "pool")]
    text: Option<PathBuf>,
    #[arg(long)]
    pool: Option<PathBuf>,
    #[command(flatten)]
    layout: LayoutArgs,
    #[arg(long)]
    machine: bool,
}

fn read_to_string(path: &Path) -> Result<String> {
    let mut s = String::new();
    File::open(path)
        .map_err(|e| annotate_io(e, path))?
        .read_to_string(&mut s)
        .map_err(|e| annotate_io(e, path))?;
    Ok(s)
}

fn annotate_io(e: std::io::Error, path: &Path) -> Error {
    Error::Io(std::io::Error::new(
        e.kind(),
        format!("{}: {e}", path.display()),
    ))
}

fn create(path: &Path) -> Result<File> {
    File::create(path).map_err(|e| annotate_io(e, path))
}

fn load_pool(path: &Path) -> Result<Pool> {
    let f = File::open(path).map_err(|e| annotate_io(e, path))?;
    Pool::load(BufReader::new(f), &path.display().to_string())
}

fn load_dict(path: &Path) -> Result<Dictionary> {
    let f = File::open(path).map_err(|e| annotate_io(e, path))?;
    Dictionary::load(BufReader::new(f), &path.display().to_string())
}

fn load_manifest(path: &Path) -> Result<Manifest> {
    let f = File::open(path).map_err(|e| annotate_io(e, path))?;
    Manifest::load(BufReader::new(f), &path.display().to_string())
}

fn cmd_addrgen(args: AddrgenArgs) -> Result<u8> {
    let mut cfg = ConstraintConfig::for_length(args.n);
    cfg.rds_bound = args.rds_bound;
    cfg.min_distance = args.min_distance.unwrap_or(args.n / 2);
    cfg.gc_low = args.gc_low;
    cfg.gc_high = args.gc_high;
    cfg.stem_len = args.stem_len;
    cfg.uncorrelation_threshold = args.uncorrelation_threshold;
    cfg.candidate_budget = args.budget;
    cfg.uniform_sampling = args.uniform;

    let outcome = greedy_search(args.count, &cfg, args.seed)?;
    match &args.out {
        Some(path) => write_addresses(create(path)?, &outcome.set.members)?,
        None => write_addresses(std::io::stdout().lock(), &outcome.set.members)?,
    }
    if let Some(path) = &args.pairs_out {
        let pairs = pair_addresses(&outcome.set, outcome.achieved() / 2)?;
        write_pairs(create(path)?, &pairs)?;
    }

    let s = &outcome.stats;
    if args.machine {
        println!("requested={}", outcome.requested);
        println!("achieved={}", outcome.achieved());
        println!("seed={}", args.seed);
        println!("tried={}", s.tried);
        println!("rejected_c1={}", s.c1);
        println!("rejected_c2={}", s.c2);
        println!("rejected_c3={}", s.c3);
        println!("rejected_c4={}", s.c4);
        println!("rejected_perturbation={}", s.perturbation);
    } else if args.out.is_some() {
        println!(
            "addresses    {:>12}  (requested {})",
            outcome.achieved(),
            outcome.requested
        );
        println!("candidates   {:>12}", s.tried);
        println!("rejected c1  {:>12}", s.c1);
        println!("rejected c2  {:>12}", s.c2);
        println!("rejected c3  {:>12}", s.c3);
        println!("rejected c4  {:>12}", s.c4);
        println!("rej. perturb {:>12}", s.perturbation);
    } else {
        // addresses went to stdout; keep the report out of the data stream
        eprintln!(
            "achieved {} of {} ({s})",
            outcome.achieved(),
            outcome.requested
        );
    }
    Ok(if outcome.complete() { 0 } else { 2 })
}

fn cmd_encode(args: EncodeArgs) -> Result<u8> {
    let text = read_to_string(&args.text)?;
    let pairs = {
        let f = File::open(&args.pairs).map_err(|e| annotate_io(e, &args.pairs))?;
        read_pairs(BufReader::new(f), &args.pairs.display().to_string())?
    };
    if pairs.is_empty() {
        return Err(Error::InsufficientAddresses { have: 0, need: 1 });
    }
    let layout = args.layout.layout(pairs[0].0.len())?;
    let out = encode_text(&text, &layout, &pairs)?;
    let pool = Pool::from_blocks(&out.blocks)?;
    pool.save(create(&args.out_pool)?)?;
    out.dictionary.save(create(&args.out_dict)?)?;
    out.manifest.save(create(&args.out_manifest)?)?;
    eprintln!(
        "encoded {} words into {} blocks of {} symbols",
        dnastore::codec::tokenize(&text).len(),
        out.blocks.len(),
        layout.block_len()
    );
    Ok(0)
}

fn cmd_decode(args: DecodeArgs) -> Result<u8> {
    let pool = load_pool(&args.pool)?;
    let dict = load_dict(&args.dict)?;
    let manifest = load_manifest(&args.manifest)?;
    let labelled: Vec<(String, DnaSeq)> = pool
        .records()
        .iter()
        .map(|r| (r.id.clone(), r.sequence.clone()))
        .collect();
    let decoded = decode_blocks(&labelled, &dict, &manifest, args.repair)?;
    for r in &decoded.repairs {
        eprintln!(
            "repair block={} sub_block={} offset={} {}->{}",
            r.block,
            r.sub_block,
            r.repair.offset,
            r.repair.original.to_char(),
            r.repair.replacement.to_char()
        );
    }
    println!("{}", decoded.text);
    Ok(0)
}

fn cmd_select(args: SelectArgs) -> Result<u8> {
    let pool = load_pool(&args.pool)?;
    let fwd = Primer::forward(DnaSeq::parse(&args.fwd)?)?;
    let rev = match (&args.rev, &args.rev_site) {
        (Some(seq), None) => Primer::reverse(DnaSeq::parse(seq)?)?,
        (None, Some(site)) => Primer::reverse_from_site(&DnaSeq::parse(site)?)?,
        _ => {
            return Err(Error::InvalidConfig(
                "exactly one of --rev / --rev-site is required".into(),
            ))
        }
    };
    let ids = pool.select(&fwd, &rev, args.tolerance)?;
    let selected = Pool::new(
        pool.records()
            .iter()
            .filter(|r| ids.contains(&r.id.as_str()))
            .cloned()
            .collect(),
    )?;
    match &args.out {
        Some(path) => selected.save(create(path)?)?,
        None => selected.save(std::io::stdout().lock())?,
    }
    Ok(if ids.is_empty() { 3 } else { 0 })
}

fn cmd_rewrite(args: RewriteArgs) -> Result<u8> {
    let pool = load_pool(&args.pool)?;

    let rewritten = if let Some(words) = &args.words {
        let group = args.group.expect("clap enforces --group");
        let dict_path = args.dict.as_ref().expect("clap enforces --dict");
        let manifest = load_manifest(args.manifest.as_ref().expect("clap enforces --manifest"))?;
        let mut dict = load_dict(dict_path)?;
        let before = dict.len();
        let words: Vec<&str> = words.split(',').collect();
        let new_pool = pool.edit_words(&args.block, group, &words, &mut dict, &manifest.layout)?;
        if dict.len() != before {
            let out_dict = args.out_dict.as_ref().ok_or_else(|| {
                Error::InvalidConfig(
                    "the rewrite adds new words; pass --out-dict for the updated dictionary"
                        .into(),
                )
            })?;
            dict.save(create(out_dict)?)?;
        } else if let Some(out_dict) = &args.out_dict {
            dict.save(create(out_dict)?)?;
        }
        new_pool
    } else {
        let sequence = match (&args.fragment, &args.fragment_file) {
            (Some(s), None) => DnaSeq::parse(s)?,
            (None, Some(path)) => DnaSeq::parse(read_to_string(path)?.trim())?,
            _ => {
                return Err(Error::InvalidConfig(
                    "pass either --words or --fragment/--fragment-file".into(),
                ))
            }
        };
        let fragment = Fragment::new(sequence, FragmentRole::Middle)?;
        pool.gblock_rewrite(&args.block, &fragment, args.min_homology)?
    };
    rewritten.save(create(&args.out_pool)?)?;
    Ok(0)
}

fn cmd_count(args: CountArgs) -> Result<u8> {
    if let Some(n) = args.maxset_n {
        let (size, witness) = max_uncorrelated_bruteforce(n)?;
        let (lo, hi) = bounds_u(n)?;
        if args.machine {
            println!("n={n}");
            println!("u={size}");
            println!("lower={lo}");
            println!("upper={hi}");
            for w in witness.members() {
                println!("member={w}");
            }
        } else {
            println!("largest mutually uncorrelated set for length {n}: {size}");
            println!("bounds: {lo} <= u({n}) <= {hi}");
            let members: Vec<String> = witness.members().iter().map(|m| m.to_string()).collect();
            println!("witness: {}", members.join(" "));
        }
        return Ok(0);
    }
    if args.patterns.is_empty() {
        return Err(Error::InvalidConfig(
            "pass --pattern at least once, or --maxset-n".into(),
        ));
    }
    let members = args
        .patterns
        .iter()
        .map(|p| DnaSeq::parse(p))
        .collect::<Result<Vec<_>>>()?;
    let set = UncorrelatedSet::new(members)?;
    let table = count_avoiding(&set, args.max_n);
    if args.machine {
        for (n, f) in table.counts.iter().enumerate() {
            println!("f.{n}={f}");
        }
    } else {
        println!(
            "strings avoiding {{{}}} (m={}, pattern length {})",
            args.patterns.join(", "),
            table.pattern_count,
            table.pattern_len
        );
        let width = table
            .counts
            .last()
            .map(|c| c.to_string().len())
            .unwrap_or(1);
        for (n, f) in table.counts.iter().enumerate() {
            println!("{n:>4}  {f:>width$}");
        }
    }
    Ok(0)
}

fn cmd_stats(args: StatsArgs) -> Result<u8> {
    if let Some(path) = &args.text {
        let text = read_to_string(path)?;
        let layout = args.layout.layout(20)?;
        let p = plan(&text, &layout);
        if args.machine {
            println!("words={}", p.words);
            println!("distinct_words={}", p.distinct_words);
            println!("chars={}", p.chars);
            println!("blocks={}", p.blocks);
            println!("nucleotides={}", p.nucleotides);
            println!("density_bytes_per_gram={:e}", p.density_bytes_per_gram);
            println!("ascii_baseline_blocks={}", p.ascii_baseline_blocks);
        } else {
            println!("words                {:>12}", p.words);
            println!("distinct words       {:>12}", p.distinct_words);
            println!("characters           {:>12}", p.chars);
            println!("blocks               {:>12}", p.blocks);
            println!("nucleotides          {:>12}", p.nucleotides);
            println!("density (B/g)        {:>12.3e}", p.density_bytes_per_gram);
            println!(
                "fixed-width baseline {:>12} blocks",
                p.ascii_baseline_blocks
            );
        }
        return Ok(0);
    }
    if let Some(path) = &args.pool {
        let pool = load_pool(path)?;
        let nucleotides: u64 = pool
            .records()
            .iter()
            .map(|r| r.sequence.len() as u64)
            .sum();
        // two bits per payload symbol is the raw information ceiling
        let payload: u64 = pool
            .records()
            .iter()
            .map(|r| (r.sequence.len() - r.left.len() - r.right.len()) as u64)
            .sum();
        let raw_bytes = payload / 4;
        if args.machine {
            println!("blocks={}", pool.len());
            println!("nucleotides={nucleotides}");
            println!("payload_nucleotides={payload}");
            if nucleotides > 0 {
                println!(
                    "raw_density_bytes_per_gram={:e}",
                    density(raw_bytes, nucleotides)
                );
            } else {
                println!("raw_density_bytes_per_gram=0");
            }
        } else {
            println!("blocks               {:>12}", pool.len());
            println!("nucleotides          {:>12}", nucleotides);
            println!("payload nucleotides  {:>12}", payload);
            if nucleotides > 0 {
                println!(
                    "raw density (B/g)    {:>12.3e}",
                    density(raw_bytes, nucleotides)
                );
            }
        }
        return Ok(0);
    }
    Err(Error::InvalidConfig("pass --text or --pool".into()))
}

fn run() -> Result<u8> {
    match Cli::parse().command {
        Command::Addrgen(a) => cmd_addrgen(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Select(a) => cmd_select(a),
        Command::Rewrite(a) => cmd_rewrite(a),
        Command::Count(a) => cmd_count(a),
        Command::Stats(a) => cmd_stats(a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
