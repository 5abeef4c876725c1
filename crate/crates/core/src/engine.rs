//! The search: necklaces are enumerated segment by segment while eigenvalue
//! residues are updated incrementally; segments come from a sorted random
//! sample of necklaces and run on independent workers.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::error::{Error, Result};
use crate::modfield::{inverse_two_power, AnyContext, EigenState, FieldContext, PrimeField};
use crate::spectral::{Alphabet, CirculantSpec};
use crate::words::{self, next_necklace_unchecked, Word};

/// Necklaces from `start` (inclusive) to `end` (exclusive), or through
/// `1...1` when `end` is None. `start == end` is an empty segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: Word,
    pub end: Option<Word>,
}

impl Segment {
    pub fn full(n: usize) -> Result<Self> {
        Ok(Segment {
            start: Word::zeros(n)?,
            end: None,
        })
    }

    pub fn contains(&self, w: &Word) -> bool {
        *w >= self.start && self.end.is_none_or(|e| *w < e)
    }
}

/// Sample size used when neither a size nor a tolerance is configured.
pub fn default_sample_size(workers: usize) -> usize {
    4000 * workers
}

/// `T ≈ 2 P ln P / ε^2`, never below `P`.
pub fn sample_size_for_tolerance(workers: usize, tolerance: f64) -> usize {
    let p = workers as f64;
    let t = (2.0 * p * p.ln() / (tolerance * tolerance)).ceil();
    (t as usize).max(workers)
}

/// Expected maximum relative overload `sqrt(2 P ln P / T)` of the slowest segment.
pub fn expected_max_deviation(workers: usize, sample_size: usize) -> f64 {
    let p = workers as f64;
    (2.0 * p * p.ln() / sample_size as f64).sqrt()
}

/// Splits the necklaces of length `n` into `workers` consecutive segments at
/// quantiles of `sample_size` uniformly drawn necklaces.
///
/// The first segment always starts at `0...0` and the last always runs
/// through `1...1`. Coinciding boundaries leave empty segments, so exactly
/// `workers` segments come back and together they cover every necklace once.
pub fn sample_partition<R: rand::Rng + ?Sized>(
    n: usize,
    workers: usize,
    sample_size: usize,
    rng: &mut R,
) -> Result<Vec<Segment>> {
    if workers < 1 || sample_size < workers {
        return Err(Error::BadPartition {
            workers,
            sample_size,
        });
    }
    if workers == 1 {
        return Ok(vec![Segment::full(n)?]);
    }
    if n < 2 {
        // only 0 and 1; the middle workers get empty segments
        let (zero, one) = (Word::zeros(n)?, Word::ones(n)?);
        let mut out = vec![Segment {
            start: zero,
            end: Some(one),
        }];
        out.extend((2..workers).map(|_| Segment {
            start: one,
            end: Some(one),
        }));
        out.push(Segment {
            start: one,
            end: None,
        });
        return Ok(out);
    }
    let mut sample: Vec<Word> = (0..sample_size)
        .map(|_| words::random_necklace(n, rng))
        .collect();
    sample.sort_unstable();
    let mut starts = Vec::with_capacity(workers);
    starts.push(Word::zeros(n)?);
    for q in 1..workers {
        let b = sample[q * sample_size / workers];
        let prev = *starts.last().expect("nonempty");
        starts.push(b.max(prev));
    }
    Ok((0..workers)
        .map(|q| Segment {
            start: starts[q],
            end: starts.get(q + 1).copied(),
        })
        .collect())
}

/// Number of necklaces in each segment, by enumeration.
pub fn segment_sizes(n: usize, segments: &[Segment]) -> Result<Vec<u64>> {
    let mut sizes = vec![0u64; segments.len()];
    let mut idx = 0;
    for w in words::Necklaces::all(n)? {
        while idx < segments.len() && !segments[idx].contains(&w) {
            idx += 1;
        }
        if idx == segments.len() {
            return Err(Error::Inconsistency(format!("necklace {w} not covered")));
        }
        sizes[idx] += 1;
    }
    Ok(sizes)
}

/// Largest `S_q / μ - 1` over the segments, with `μ = K(n) / P`.
pub fn max_relative_deviation(sizes: &[u64]) -> f64 {
    let total: u64 = sizes.iter().sum();
    let mean = total as f64 / sizes.len() as f64;
    sizes
        .iter()
        .map(|&s| s as f64 / mean - 1.0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Best determinant found in one segment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialResult {
    pub n: usize,
    pub alphabet: Alphabet,
    pub segment: Segment,
    /// Unscaled maximum `|det|` (zero for an empty segment).
    pub max_abs_det: BigUint,
    /// First achiever in enumeration order; None for an empty segment.
    pub lex_least_word: Option<Word>,
    pub candidates_examined: u64,
    /// Every achiever, in increasing order, when requested.
    pub maximizers: Vec<Word>,
}

/// Outcome of a complete search; one row of a result table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub n: usize,
    pub alphabet: Alphabet,
    pub max_abs_det: BigUint,
    pub lex_least_word: Word,
    pub upper_bound: BigUint,
    pub ratio: String,
    pub candidates_examined: u64,
    pub prime_used: Option<BigUint>,
    pub maximizers: Vec<Word>,
}

impl SearchResult {
    /// `max_abs_det / 2^(n-1)` for `±1` results.
    pub fn scaled(&self) -> Option<BigUint> {
        match self.alphabet {
            Alphabet::Binary01 => None,
            Alphabet::BinaryPM1 => Some(&self.max_abs_det >> (self.n - 1)),
        }
    }
}

/// Upper bound on `|det|` for the alphabet.
pub fn upper_bound(n: usize, alphabet: Alphabet) -> BigUint {
    match alphabet {
        Alphabet::Binary01 => bounds::u01_bound(n),
        Alphabet::BinaryPM1 => bounds::upm1_bound(n),
    }
}

/// Bound on the value the search lifts: `|det|` for `{0,1}`, `|det| / 2^(n-1)`
/// for `±1`.
pub fn lift_bound(n: usize, alphabet: Alphabet) -> BigUint {
    match alphabet {
        Alphabet::Binary01 => bounds::u01_bound(n),
        Alphabet::BinaryPM1 => bounds::hbe_floor_scaled(n, n - 1),
    }
}

/// Field context the search uses for `(n, alphabet)`.
pub fn search_context(n: usize, alphabet: Alphabet, seed: u64) -> Result<AnyContext> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x726f_6f74);
    AnyContext::for_bound(n, &lift_bound(n, alphabet), &mut rng)
}

/// Enumerates one segment with incremental eigenvalue updates.
pub fn search_segment(
    segment: &Segment,
    alphabet: Alphabet,
    ctx: &AnyContext,
    keep_all: bool,
) -> Result<PartialResult> {
    match ctx {
        AnyContext::Word(c) => scan(segment, alphabet, c, keep_all),
        AnyContext::Big(c) => scan(segment, alphabet, c, keep_all),
    }
}

const FRESH_CHECK_INTERVAL: u64 = 1 << 10;

fn scan<F: PrimeField>(
    segment: &Segment,
    alphabet: Alphabet,
    ctx: &FieldContext<F>,
    keep_all: bool,
) -> Result<PartialResult> {
    let n = ctx.order();
    if segment.start.len() != n {
        return Err(Error::BadLength(segment.start.len()));
    }
    if !words::is_necklace(&segment.start) {
        return Err(Error::NotNecklace(segment.start.to_string()));
    }
    let field = ctx.field();
    let scale = match alphabet {
        Alphabet::Binary01 => None,
        Alphabet::BinaryPM1 => Some(inverse_two_power(field, n)),
    };
    let mut state = EigenState::init(&CirculantSpec::new(alphabet, segment.start), ctx)?;
    let mut best: Option<F::Abs> = None;
    let mut best_word = None;
    let mut maximizers = Vec::new();
    let mut count = 0u64;
    let mut w = segment.start;
    loop {
        if segment.end.is_some_and(|e| w >= e) {
            break;
        }
        count += 1;
        let r = state.det_residue();
        let r = match &scale {
            Some(s) => field.mul(&r, s),
            None => r,
        };
        let a = field.centered_abs(&r);
        if a > *ctx.bound_abs() {
            return Err(Error::LiftOutOfRange {
                value: field.abs_to_biguint(&a).to_string(),
                bound: ctx.bound().to_string(),
            });
        }
        match &best {
            Some(b) if a < *b => {}
            Some(b) if a == *b => {
                if keep_all {
                    maximizers.push(w);
                }
            }
            _ => {
                best = Some(a);
                best_word = Some(w);
                if keep_all {
                    maximizers.clear();
                    maximizers.push(w);
                }
            }
        }
        if cfg!(debug_assertions) && count % FRESH_CHECK_INTERVAL == 0 {
            debug_assert!(state.matches_fresh(), "incremental state drifted at {w}");
        }
        match next_necklace_unchecked(&w) {
            None => break,
            Some((next, from)) => {
                state.advance(&next, from);
                w = next;
            }
        }
    }
    let mut max_abs_det = best.map(|b| field.abs_to_biguint(&b)).unwrap_or_default();
    if alphabet == Alphabet::BinaryPM1 {
        max_abs_det <<= n - 1;
    }
    Ok(PartialResult {
        n,
        alphabet,
        segment: *segment,
        max_abs_det,
        lex_least_word: best_word,
        candidates_examined: count,
        maximizers,
    })
}

/// Combines segment results: largest maximum wins, ties go to the
/// lexicographically least word, and the candidate total must equal `K(n)`.
pub fn merge_results(parts: &[PartialResult], prime_used: Option<BigUint>) -> Result<SearchResult> {
    let first = parts
        .first()
        .ok_or_else(|| Error::IncompatibleResults("no parts".into()))?;
    let (n, alphabet) = (first.n, first.alphabet);
    if let Some(p) = parts.iter().find(|p| p.n != n || p.alphabet != alphabet) {
        return Err(Error::IncompatibleResults(format!(
            "order/alphabet {}/{} vs {}/{}",
            p.n, p.alphabet, n, alphabet
        )));
    }
    let examined: u64 = parts.iter().map(|p| p.candidates_examined).sum();
    let expected = words::necklace_count(n);
    if BigUint::from(examined) != expected {
        return Err(Error::CandidateMismatch {
            examined: examined.to_string(),
            expected: expected.to_string(),
        });
    }
    let max = parts
        .iter()
        .filter(|p| p.lex_least_word.is_some())
        .map(|p| &p.max_abs_det)
        .max()
        .cloned()
        .unwrap_or_default();
    let winners: Vec<&PartialResult> = parts
        .iter()
        .filter(|p| p.lex_least_word.is_some() && p.max_abs_det == max)
        .collect();
    let word = winners
        .iter()
        .filter_map(|p| p.lex_least_word)
        .min()
        .ok_or_else(|| Error::IncompatibleResults("no candidates examined".into()))?;
    let mut maximizers: Vec<Word> = winners
        .iter()
        .flat_map(|p| p.maximizers.iter().copied())
        .collect();
    maximizers.sort_unstable();
    maximizers.dedup();
    let upper_bound = upper_bound(n, alphabet);
    Ok(SearchResult {
        n,
        alphabet,
        ratio: bounds::ratio_4dp(&max, &upper_bound),
        max_abs_det: max,
        lex_least_word: word,
        upper_bound,
        candidates_examined: examined,
        prime_used,
        maximizers,
    })
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub workers: usize,
    /// Overrides the default `4000 P`.
    pub sample_size: Option<usize>,
    /// When set (and no explicit sample size), `T = 2 P ln P / ε^2`.
    pub tolerance: Option<f64>,
    pub seed: u64,
    /// Retain every maximizing necklace, not only the least.
    pub keep_all_maximizers: bool,
    pub checkpoint: Option<PathBuf>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            workers: 1,
            sample_size: None,
            tolerance: None,
            seed: 1,
            keep_all_maximizers: false,
            checkpoint: None,
        }
    }
}

impl SearchConfig {
    pub fn with_workers(workers: usize) -> Self {
        SearchConfig {
            workers,
            ..Default::default()
        }
    }

    pub fn effective_sample_size(&self) -> usize {
        match (self.sample_size, self.tolerance) {
            (Some(t), _) => t,
            (None, Some(eps)) if self.workers > 1 => sample_size_for_tolerance(self.workers, eps),
            _ => default_sample_size(self.workers),
        }
    }
}

/// One completed segment, as stored in a checkpoint file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub n: usize,
    pub alphabet: Alphabet,
    pub segment_start: String,
    pub segment_end: Option<String>,
    pub partial_max: String,
    pub lex_least_decimal: Option<String>,
    pub candidates: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub maximizers: Vec<String>,
}

impl CheckpointRecord {
    pub fn from_partial(p: &PartialResult) -> Self {
        CheckpointRecord {
            n: p.n,
            alphabet: p.alphabet,
            segment_start: p.segment.start.bits().to_string(),
            segment_end: p.segment.end.map(|e| e.bits().to_string()),
            partial_max: p.max_abs_det.to_string(),
            lex_least_decimal: p.lex_least_word.map(|w| w.bits().to_string()),
            candidates: p.candidates_examined.to_string(),
            maximizers: p.maximizers.iter().map(|w| w.bits().to_string()).collect(),
        }
    }

    pub fn to_partial(&self) -> Result<PartialResult> {
        let bad = |what: &str| Error::Checkpoint(format!("malformed {what}"));
        let word = |s: &str| -> Result<Word> {
            let v: u64 = s.parse().map_err(|_| bad("word decimal"))?;
            words::decimal_to_word(v, self.n)
        };
        Ok(PartialResult {
            n: self.n,
            alphabet: self.alphabet,
            segment: Segment {
                start: word(&self.segment_start)?,
                end: self.segment_end.as_deref().map(word).transpose()?,
            },
            max_abs_det: self.partial_max.parse().map_err(|_| bad("partial max"))?,
            lex_least_word: self.lex_least_decimal.as_deref().map(word).transpose()?,
            candidates_examined: self.candidates.parse().map_err(|_| bad("candidates"))?,
            maximizers: self
                .maximizers
                .iter()
                .map(|s| word(s))
                .collect::<Result<_>>()?,
        })
    }
}

/// Reads every record of a checkpoint file; a missing file is empty.
pub fn read_checkpoint(path: &Path) -> Result<Vec<CheckpointRecord>> {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(Error::Checkpoint(e.to_string())),
    };
    let mut out = Vec::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::Checkpoint(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Checkpoint(e.to_string()))?);
    }
    Ok(out)
}

pub fn append_checkpoint(path: &Path, record: &CheckpointRecord) -> Result<()> {
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::Checkpoint(e.to_string()))?;
    let line = serde_json::to_string(record).map_err(|e| Error::Checkpoint(e.to_string()))?;
    writeln!(file, "{line}").map_err(|e| Error::Checkpoint(e.to_string()))
}

/// Full search for the maximal `|det|` over circulants of order `n`.
pub fn search(n: usize, alphabet: Alphabet, config: &SearchConfig) -> Result<SearchResult> {
    if n == 0 || n > words::MAX_LEN {
        return Err(Error::BadLength(n));
    }
    let workers = config.workers;
    let sample_size = config.effective_sample_size();
    let ctx = search_context(n, alphabet, config.seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let segments = sample_partition(n, workers, sample_size, &mut rng)?;

    let done: Vec<PartialResult> = match &config.checkpoint {
        Some(path) => read_checkpoint(path)?
            .iter()
            .filter(|r| r.n == n && r.alphabet == alphabet)
            .map(CheckpointRecord::to_partial)
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|p| {
                segments.contains(&p.segment)
                    && (!config.keep_all_maximizers
                        || p.candidates_examined == 0
                        || !p.maximizers.is_empty())
            })
            .collect(),
        None => Vec::new(),
    };
    let todo: Vec<Segment> = segments
        .iter()
        .filter(|s| !done.iter().any(|p| p.segment == **s))
        .copied()
        .collect();

    let mut parts = done;
    let record = |p: &PartialResult| -> Result<()> {
        if let Some(path) = &config.checkpoint {
            append_checkpoint(path, &CheckpointRecord::from_partial(p))?;
        }
        Ok(())
    };
    if todo.len() <= 1 {
        for seg in &todo {
            let p = search_segment(seg, alphabet, &ctx, config.keep_all_maximizers)?;
            record(&p)?;
            parts.push(p);
        }
    } else {
        let (tx, rx) = mpsc::channel();
        let ctx_ref = &ctx;
        let keep_all = config.keep_all_maximizers;
        std::thread::scope(|scope| -> Result<()> {
            for seg in todo {
                let tx = tx.clone();
                scope.spawn(move || {
                    let _ = tx.send(search_segment(&seg, alphabet, ctx_ref, keep_all));
                });
            }
            drop(tx);
            for result in rx {
                let p = result?;
                record(&p)?;
                parts.push(p);
            }
            Ok(())
        })?;
    }
    parts.sort_by_key(|p| p.segment.start);
    merge_results(&parts, Some(ctx.modulus().clone()))
}

/// Rough single-worker cost in candidate-symbol operations, for budgeting.
pub fn estimated_work(n: usize) -> f64 {
    words::necklace_count(n).to_f64().unwrap_or(f64::INFINITY) * n as f64
}

/// True when the maximum is consistent with the `2^(n-1)` divisibility of
/// `±1` determinants.
pub fn pm1_divisible(result: &SearchResult) -> bool {
    result.alphabet != Alphabet::BinaryPM1
        || (&result.max_abs_det % (BigUint::from(1u32) << (result.n - 1))).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_worker_partition() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let segs = sample_partition(9, 1, 17, &mut rng).unwrap();
        assert_eq!(segs, [Segment::full(9).unwrap()]);
        assert!(sample_partition(9, 0, 10, &mut rng).is_err());
        assert!(sample_partition(9, 4, 3, &mut rng).is_err());
    }

    #[test]
    fn partition_covers_everything_once() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for (n, p, t) in [
            (10, 4, 100),
            (12, 7, 7),
            (5, 6, 6),
            (2, 3, 3),
            (1, 3, 3),
            (14, 16, 64_000),
        ] {
            let segs = sample_partition(n, p, t, &mut rng).unwrap();
            assert_eq!(segs.len(), p);
            assert_eq!(segs[0].start, Word::zeros(n).unwrap());
            assert_eq!(segs[p - 1].end, None);
            for pair in segs.windows(2) {
                assert_eq!(pair[0].end, Some(pair[1].start));
            }
            let sizes = segment_sizes(n, &segs).unwrap();
            assert_eq!(
                BigUint::from(sizes.iter().sum::<u64>()),
                words::necklace_count(n)
            );
        }
    }

    #[test]
    fn default_sample_size_is_4000_per_worker() {
        assert_eq!(
            SearchConfig::with_workers(16).effective_sample_size(),
            64_000
        );
        let cfg = SearchConfig {
            workers: 16,
            tolerance: Some(0.05),
            ..Default::default()
        };
        assert_eq!(cfg.effective_sample_size(), 35_490);
    }

    #[test]
    fn small_searches() {
        let r = search(7, Alphabet::Binary01, &SearchConfig::default()).unwrap();
        assert_eq!(r.max_abs_det, BigUint::from(32u32));
        assert_eq!(r.lex_least_word.bits(), 23);
        assert_eq!(r.candidates_examined, 20);

        let r = search(11, Alphabet::Binary01, &SearchConfig::with_workers(3)).unwrap();
        assert_eq!(r.max_abs_det, BigUint::from(1458u32));
        assert_eq!(r.ratio, "1.0000");
        assert_eq!(r.lex_least_word.bits(), 183);

        let r = search(13, Alphabet::BinaryPM1, &SearchConfig::with_workers(2)).unwrap();
        assert_eq!(r.scaled(), Some(BigUint::from(3645u32)));
        assert_eq!(r.lex_least_word.bits(), 83);
        assert!(pm1_divisible(&r));

        let r = search(9, Alphabet::Binary01, &SearchConfig::with_workers(4)).unwrap();
        assert_eq!(r.max_abs_det, BigUint::from(95u32));
        assert_eq!(r.lex_least_word.to_string(), "000101111");
        assert_eq!(r.ratio, "0.6597");
    }

    #[test]
    fn order_one_and_two() {
        for workers in [1, 2, 3] {
            let cfg = SearchConfig::with_workers(workers);
            let r = search(1, Alphabet::Binary01, &cfg).unwrap();
            assert_eq!(r.max_abs_det, BigUint::from(1u32));
            assert_eq!(r.lex_least_word.to_string(), "1");
            let r = search(1, Alphabet::BinaryPM1, &cfg).unwrap();
            assert_eq!(r.scaled(), Some(BigUint::from(1u32)));
            assert_eq!(r.lex_least_word.bits(), 0);
            let r = search(2, Alphabet::BinaryPM1, &cfg).unwrap();
            assert!(r.max_abs_det.is_zero());
            assert_eq!(r.ratio, "0.0000");
            assert_eq!(r.lex_least_word.bits(), 0);
        }
    }

    fn partial(word: &str, max: u32, count: u64) -> PartialResult {
        let w: Word = word.parse().unwrap();
        PartialResult {
            n: w.len(),
            alphabet: Alphabet::Binary01,
            segment: Segment::full(w.len()).unwrap(),
            max_abs_det: BigUint::from(max),
            lex_least_word: Some(w),
            candidates_examined: count,
            maximizers: vec![w],
        }
    }

    #[test]
    fn merge_rules() {
        let one = partial("0010111", 32, 20);
        let merged = merge_results(std::slice::from_ref(&one), None).unwrap();
        assert_eq!(merged.lex_least_word, one.lex_least_word.unwrap());
        assert_eq!(merged.max_abs_det, one.max_abs_det);

        let a = partial("0010111", 32, 12);
        let b = partial("0001011", 32, 8);
        let merged = merge_results(&[a.clone(), b], None).unwrap();
        assert_eq!(merged.lex_least_word.to_string(), "0001011");
        assert_eq!(merged.maximizers.len(), 2);

        let short = partial("0001011", 32, 7);
        assert!(matches!(
            merge_results(&[a, short], None),
            Err(Error::CandidateMismatch { .. })
        ));
        assert!(merge_results(&[], None).is_err());
    }

    #[test]
    fn checkpoint_round_trip_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.jsonl");
        let cfg = SearchConfig {
            workers: 3,
            checkpoint: Some(path.clone()),
            ..Default::default()
        };
        let first = search(12, Alphabet::BinaryPM1, &cfg).unwrap();
        let records = read_checkpoint(&path).unwrap();
        assert_eq!(records.len(), 3);
        for r in &records {
            assert_eq!(CheckpointRecord::from_partial(&r.to_partial().unwrap()), *r);
        }
        // a resumed run reuses every segment and appends nothing
        let again = search(12, Alphabet::BinaryPM1, &cfg).unwrap();
        assert_eq!(first, again);
        assert_eq!(read_checkpoint(&path).unwrap().len(), 3);
    }

    #[test]
    fn keep_all_maximizers() {
        let cfg = SearchConfig {
            keep_all_maximizers: true,
            workers: 2,
            ..Default::default()
        };
        let r = search(9, Alphabet::Binary01, &cfg).unwrap();
        assert!(r.maximizers.contains(&r.lex_least_word));
        assert!(r.maximizers.contains(&"000111101".parse().unwrap()));
        for w in &r.maximizers {
            let d = crate::oracle::spec_det(&CirculantSpec::new(Alphabet::Binary01, *w));
            assert_eq!(d.magnitude(), &r.max_abs_det);
        }
    }
}
