//! Published maximal determinants (orders up to 53 over `{0,1}`, up to 52 over
//! `±1`) and the harness that checks the engine against them.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::bounds;
use crate::engine::{self, SearchConfig, SearchResult};
use crate::error::{Error, Result};
use crate::modfield::AnyContext;
use crate::oracle;
use crate::spectral::{Alphabet, CirculantSpec};
use crate::words::{self, Word};

const TABLES: &str = include_str!("../data/tables.csv");

/// Orders above this only get single-word checks from the Bareiss oracle.
const ORACLE_SPOT_CHECK_MAX: usize = 14;

/// Conservative single-worker cost of one candidate-symbol step, for budgets.
pub const SECONDS_PER_STEP: f64 = 3e-8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub alphabet: Alphabet,
    pub n: usize,
    /// Raw maximum for `{0,1}`; divided by `2^(n-1)` for `±1`.
    pub value: BigUint,
    pub ratio: String,
    pub decimal: u64,
}

impl TableRow {
    pub fn word(&self) -> Word {
        words::decimal_to_word(self.decimal, self.n).expect("validated on load")
    }

    /// The maximum `|det|` itself.
    pub fn max_abs_det(&self) -> BigUint {
        match self.alphabet {
            Alphabet::Binary01 => self.value.clone(),
            Alphabet::BinaryPM1 => &self.value << (self.n - 1),
        }
    }
}

/// Parses the `alphabet,n,value,ratio,decimal` resource and checks its
/// trailing `# sha256 <hex>` line against the data lines.
pub fn parse_tables(text: &str) -> Result<Vec<TableRow>> {
    let mut hasher = Sha256::new();
    let mut expected = None;
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if let Some(rest) = line.strip_prefix("# sha256 ") {
            expected = Some(rest.trim().to_owned());
            continue;
        }
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        hasher.update(line.as_bytes());
        hasher.update(b"\n");
        let bad = |what: &str| Error::Table(format!("line {}: {what}", lineno + 1));
        let fields: Vec<&str> = line.split(',').collect();
        let [alphabet, n, value, ratio, decimal] = fields[..] else {
            return Err(bad("expected 5 fields"));
        };
        let n: usize = n.parse().map_err(|_| bad("bad order"))?;
        let row = TableRow {
            alphabet: alphabet.parse()?,
            n,
            value: value.parse().map_err(|_| bad("bad value"))?,
            ratio: ratio.to_owned(),
            decimal: decimal.parse().map_err(|_| bad("bad decimal"))?,
        };
        words::decimal_to_word(row.decimal, n)?;
        rows.push(row);
    }
    let digest: String = hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    match expected {
        Some(e) if e == digest => Ok(rows),
        Some(e) => Err(Error::Table(format!(
            "checksum mismatch: file says {e}, data hashes to {digest}"
        ))),
        None => Err(Error::Table("missing checksum line".into())),
    }
}

pub fn tables() -> &'static [TableRow] {
    static ROWS: OnceLock<Vec<TableRow>> = OnceLock::new();
    ROWS.get_or_init(|| parse_tables(TABLES).expect("embedded tables are valid"))
}

pub fn table_lookup(n: usize, alphabet: Alphabet) -> Option<&'static TableRow> {
    tables().iter().find(|r| r.n == n && r.alphabet == alphabet)
}

pub fn table_range(alphabet: Alphabet) -> std::ops::RangeInclusive<usize> {
    match alphabet {
        Alphabet::Binary01 => 1..=53,
        Alphabet::BinaryPM1 => 1..=52,
    }
}

/// Bound the table's ratio column is relative to, on the table's scale.
pub fn table_bound(n: usize, alphabet: Alphabet) -> BigUint {
    engine::lift_bound(n, alphabet)
}

/// `|det|` of the row's word through the modular pipeline, on the table's
/// scale (divided by `2^(n-1)` for `±1`).
pub fn modular_value(row: &TableRow) -> Result<BigUint> {
    let mut rng = ChaCha8Rng::seed_from_u64(row.n as u64);
    let bound = table_bound(row.n, row.alphabet);
    let ctx = AnyContext::for_bound(row.n, &bound, &mut rng)?;
    let det = match row.alphabet {
        Alphabet::Binary01 => ctx.determinant(&CirculantSpec::new(row.alphabet, row.word()))?,
        Alphabet::BinaryPM1 => ctx.scaled_pm1_determinant(&row.word())?,
    };
    Ok(det.magnitude().clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordCheck {
    pub computed: BigUint,
    pub value_matches: bool,
    pub ratio_matches: bool,
    /// Bareiss on the explicit matrix, for small orders.
    pub oracle_matches: Option<bool>,
}

impl WordCheck {
    pub fn pass(&self) -> bool {
        self.value_matches && self.ratio_matches && self.oracle_matches != Some(false)
    }
}

/// Re-evaluates the row's word and its ratio without any search.
pub fn check_word(row: &TableRow) -> Result<WordCheck> {
    let computed = modular_value(row)?;
    let ratio = bounds::ratio_4dp(&row.value, &table_bound(row.n, row.alphabet));
    let oracle_matches = (row.n <= ORACLE_SPOT_CHECK_MAX).then(|| {
        let d = oracle::spec_det(&CirculantSpec::new(row.alphabet, row.word()));
        *d.magnitude() == row.max_abs_det()
    });
    Ok(WordCheck {
        value_matches: computed == row.value,
        ratio_matches: ratio == row.ratio,
        computed,
        oracle_matches,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    FullSearch,
    WordOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowOutcome {
    pub n: usize,
    pub alphabet: Alphabet,
    pub mode: CheckMode,
    pub expected: TableRow,
    pub word: WordCheck,
    pub search: Option<SearchResult>,
    pub mismatches: Vec<String>,
}

impl RowOutcome {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty()
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyConfig {
    pub search: SearchConfig,
    /// Rows whose estimated search time exceeds this get word checks only.
    pub budget_seconds: Option<f64>,
    pub words_only: bool,
    /// Rows to check against instead of the embedded tables.
    pub table: Option<Vec<TableRow>>,
}

pub fn estimated_seconds(n: usize, workers: usize) -> f64 {
    engine::estimated_work(n) * SECONDS_PER_STEP / workers.max(1) as f64
}

/// Compares one search result with its table row.
pub fn compare(result: &SearchResult, row: &TableRow) -> Vec<String> {
    let mut out = Vec::new();
    let value = match result.alphabet {
        Alphabet::Binary01 => result.max_abs_det.clone(),
        Alphabet::BinaryPM1 => {
            if !engine::pm1_divisible(result) {
                out.push(format!(
                    "max {} is not divisible by 2^{}",
                    result.max_abs_det,
                    result.n - 1
                ));
            }
            result.scaled().unwrap_or_else(BigUint::zero)
        }
    };
    if value != row.value {
        out.push(format!("max: got {value}, table {}", row.value));
    }
    if result.ratio != row.ratio {
        out.push(format!("ratio: got {}, table {}", result.ratio, row.ratio));
    }
    let decimal = words::word_to_decimal(&result.lex_least_word);
    if decimal != row.decimal {
        out.push(format!(
            "lex-least decimal: got {decimal}, table {}",
            row.decimal
        ));
    }
    out
}

pub fn verify_row(n: usize, alphabet: Alphabet, config: &VerifyConfig) -> Result<RowOutcome> {
    let rows: &[TableRow] = match &config.table {
        Some(t) => t,
        None => tables(),
    };
    let row = rows
        .iter()
        .find(|r| r.n == n && r.alphabet == alphabet)
        .ok_or_else(|| Error::Table(format!("no {alphabet} row for n = {n}")))?
        .clone();
    let word = check_word(&row)?;
    let mut mismatches = Vec::new();
    if !word.value_matches {
        mismatches.push(format!(
            "word value: got {}, table {}",
            word.computed, row.value
        ));
    }
    if !word.ratio_matches {
        mismatches.push(format!(
            "ratio column {} does not follow from the bound",
            row.ratio
        ));
    }
    if word.oracle_matches == Some(false) {
        mismatches.push("Bareiss determinant of the word disagrees".into());
    }
    let over_budget = config
        .budget_seconds
        .is_some_and(|b| estimated_seconds(n, config.search.workers) > b);
    let (mode, search) = if config.words_only || over_budget {
        (CheckMode::WordOnly, None)
    } else {
        let r = engine::search(n, alphabet, &config.search)?;
        mismatches.extend(compare(&r, &row));
        (CheckMode::FullSearch, Some(r))
    };
    Ok(RowOutcome {
        n,
        alphabet,
        mode,
        expected: row,
        word,
        search,
        mismatches,
    })
}

/// Checks orders `lo..=hi` against the tables.
pub fn verify_range(
    lo: usize,
    hi: usize,
    alphabet: Alphabet,
    config: &VerifyConfig,
) -> Result<Vec<RowOutcome>> {
    let range = table_range(alphabet);
    if lo < *range.start() || hi > *range.end() || lo > hi {
        return Err(Error::Table(format!(
            "orders {lo}..={hi} are outside the {alphabet} table ({}..={})",
            range.start(),
            range.end()
        )));
    }
    (lo..=hi).map(|n| verify_row(n, alphabet, config)).collect()
}

/// Splits `value` over `primes`, returning exponents and the unfactored rest.
pub fn factor_over(value: &BigUint, primes: &[u32]) -> (Vec<(u32, u32)>, BigUint) {
    let mut rest = value.clone();
    let mut out = Vec::new();
    for &p in primes {
        let mut e = 0;
        while !rest.is_zero() && (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    (out, rest)
}

/// Ratio as a float, for display only.
pub fn ratio_f64(row: &TableRow) -> f64 {
    let b = table_bound(row.n, row.alphabet);
    row.value.to_f64().unwrap_or(0.0) / b.to_f64().unwrap_or(f64::INFINITY)
}
