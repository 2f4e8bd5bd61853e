//! Label fixtures transcribed from published tables, plus the errata that
//! override rows with transcription slips.
//!
//! Fixture rows are TSV: `n  R  S  label  source`. Errata rows are TSV:
//! `n  R  S  label  source  corrected_R  corrected_S  witness  reason`, where
//! `witness` is `theta:m:t` or `unit:x`. `#` starts a comment line.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::adam::unit_permutation;
use crate::circulant::{parse_jump_list, ConnectionSet};
use crate::classify::{classify_pair, PairClassification};
use crate::error::{Error, Result};
use crate::modring::{reflexive_reduce, Modulus};
use crate::oracle::verify_permutation;
use crate::theta::ThetaParams;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    T1,
    T2,
}

impl Label {
    pub fn matches(self, c: &PairClassification) -> bool {
        matches!(
            (self, c),
            (Label::T1, PairClassification::Type1 { .. })
                | (Label::T2, PairClassification::Type2 { .. })
        )
    }
}

impl std::str::FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T1" => Ok(Label::T1),
            "T2" => Ok(Label::T2),
            other => Err(Error::Parse(format!(
                "label must be T1 or T2, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::T1 => "T1",
            Label::T2 => "T2",
        })
    }
}

/// One transcribed row. Jump lists are kept verbatim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixturePair {
    pub line: usize,
    pub n: u64,
    pub r: Vec<i64>,
    pub s: Vec<i64>,
    pub label: Label,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Witness {
    Theta { m: u64, t: u64 },
    Unit { x: u64 },
}

impl Witness {
    pub fn permutation(&self, n: Modulus) -> Result<Vec<usize>> {
        match *self {
            Witness::Theta { m, t } => Ok(ThetaParams::new(n, m, t)?.permutation()),
            Witness::Unit { x } => {
                if !n.is_unit(x) {
                    return Err(Error::NotAUnit { x, n: n.get() });
                }
                Ok(unit_permutation(n.get(), x))
            }
        }
    }
}

impl std::str::FromStr for Witness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |v: &str| {
            v.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad witness {s:?}")))
        };
        match parts.as_slice() {
            ["theta", m, t] => Ok(Witness::Theta {
                m: num(m)?,
                t: num(t)?,
            }),
            ["unit", x] => Ok(Witness::Unit { x: num(x)? }),
            _ => Err(Error::Parse(format!(
                "witness must be theta:m:t or unit:x, got {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Erratum {
    pub line: usize,
    pub row: FixturePair,
    pub corrected_r: Vec<i64>,
    pub corrected_s: Vec<i64>,
    pub witness: Witness,
    pub reason: String,
}

impl Erratum {
    fn applies_to(&self, row: &FixturePair) -> bool {
        self.row.n == row.n
            && self.row.r == row.r
            && self.row.s == row.s
            && self.row.source == row.source
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
}

fn parse_row(line: usize, cols: &[&str]) -> Result<FixturePair> {
    let n = cols[0]
        .trim()
        .parse::<u64>()
        .map_err(|_| Error::Parse(format!("bad order {:?}", cols[0])))?;
    Ok(FixturePair {
        line,
        n,
        r: parse_jump_list(cols[1])?,
        s: parse_jump_list(cols[2])?,
        label: cols[3].trim().parse()?,
        source: cols[4].trim().to_string(),
    })
}

fn collect_errors<T>(path: &str, results: Vec<(usize, Result<T>)>) -> Result<Vec<T>> {
    let mut ok = Vec::new();
    let mut errors = Vec::new();
    for (line, r) in results {
        match r {
            Ok(v) => ok.push(v),
            Err(e) => errors.push(format!("line {line}: {e}")),
        }
    }
    if errors.is_empty() {
        Ok(ok)
    } else {
        Err(Error::Fixture {
            path: path.to_string(),
            count: errors.len(),
            details: errors.join("; "),
        })
    }
}

pub fn parse_fixtures(path: &str, text: &str) -> Result<Vec<FixturePair>> {
    let results = data_lines(text)
        .map(|(line, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            let r = if cols.len() != 5 {
                Err(Error::Parse(format!(
                    "expected 5 tab-separated columns, found {}",
                    cols.len()
                )))
            } else {
                parse_row(line, &cols)
            };
            (line, r)
        })
        .collect();
    collect_errors(path, results)
}

pub fn parse_errata(path: &str, text: &str) -> Result<Vec<Erratum>> {
    let results = data_lines(text)
        .map(|(line, l)| {
            let cols: Vec<&str> = l.split('\t').collect();
            let r = if cols.len() != 9 {
                Err(Error::Parse(format!(
                    "expected 9 tab-separated columns, found {}",
                    cols.len()
                )))
            } else {
                (|| {
                    Ok(Erratum {
                        line,
                        row: parse_row(line, &cols[..5])?,
                        corrected_r: parse_jump_list(cols[5])?,
                        corrected_s: parse_jump_list(cols[6])?,
                        witness: cols[7].trim().parse()?,
                        reason: cols[8].trim().to_string(),
                    })
                })()
            };
            (line, r)
        })
        .collect();
    collect_errors(path, results)
}

pub fn load_fixtures(path: &Path) -> Result<Vec<FixturePair>> {
    parse_fixtures(&path.display().to_string(), &std::fs::read_to_string(path)?)
}

pub fn load_errata(path: &Path) -> Result<Vec<Erratum>> {
    parse_errata(&path.display().to_string(), &std::fs::read_to_string(path)?)
}

/// A jump list that survives reduction without collisions or self-loops.
fn strict_set(n: Modulus, values: &[i64]) -> std::result::Result<ConnectionSet, String> {
    let reduced = reflexive_reduce(n, values.iter().copied());
    if reduced.len() != values.len() {
        return Err(format!(
            "{} reduces to {} distinct jumps",
            JumpListI(values),
            reduced.len()
        ));
    }
    ConnectionSet::new(n, reduced).map_err(|e| e.to_string())
}

struct JumpListI<'a>(&'a [i64]);

impl fmt::Display for JumpListI<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        f.write_str(&v.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RowOutcome {
    Match,
    /// The row was replaced by a verified erratum.
    Overridden {
        erratum_line: usize,
    },
    Mismatch {
        found: String,
    },
    Invalid {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowResult {
    pub row: FixturePair,
    pub classification: Option<PairClassification>,
    pub outcome: RowOutcome,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureReport {
    pub rows: Vec<RowResult>,
    /// Errata that matched a row but failed their own verification.
    pub errata_failures: Vec<String>,
    pub warnings: Vec<String>,
}

impl FixtureReport {
    pub fn matched(&self) -> usize {
        self.count(|o| matches!(o, RowOutcome::Match))
    }

    pub fn overridden(&self) -> usize {
        self.count(|o| matches!(o, RowOutcome::Overridden { .. }))
    }

    pub fn mismatches(&self) -> usize {
        self.count(|o| matches!(o, RowOutcome::Mismatch { .. } | RowOutcome::Invalid { .. }))
    }

    pub fn label_count(&self, label: Label) -> usize {
        self.rows.iter().filter(|r| r.row.label == label).count()
    }

    pub fn is_clean(&self) -> bool {
        self.mismatches() == 0 && self.errata_failures.is_empty()
    }

    fn count(&self, f: impl Fn(&RowOutcome) -> bool) -> usize {
        self.rows.iter().filter(|r| f(&r.outcome)).count()
    }
}

/// Checks an erratum on its own terms: the corrected pair is valid, the
/// witness permutation maps one edge set onto the other, and the corrected
/// pair classifies with the row's label.
pub fn check_erratum(e: &Erratum) -> std::result::Result<PairClassification, String> {
    let n = Modulus::new(e.row.n).map_err(|err| err.to_string())?;
    let r = strict_set(n, &e.corrected_r)?;
    let s = strict_set(n, &e.corrected_s)?;
    if e.reason.is_empty() {
        return Err("erratum carries no reason".into());
    }
    let perm = e.witness.permutation(n).map_err(|err| err.to_string())?;
    if !verify_permutation(&r.realize(), &s.realize(), &perm) {
        return Err(format!("witness {:?} does not map {r} onto {s}", e.witness));
    }
    let c = classify_pair(&r, &s).map_err(|err| err.to_string())?;
    if !e.row.label.matches(&c) {
        return Err(format!(
            "corrected pair classifies as {c}, label says {}",
            e.row.label
        ));
    }
    Ok(c)
}

/// Re-classifies every row, applying errata where a row matches one exactly.
pub fn verify_fixtures(rows: &[FixturePair], errata: &[Erratum]) -> FixtureReport {
    let mut report = FixtureReport::default();
    if rows.is_empty() {
        report.warnings.push("fixture file has no rows".into());
    }
    for row in rows {
        if let Some(e) = errata.iter().find(|e| e.applies_to(row)) {
            let (classification, outcome) = match check_erratum(e) {
                Ok(c) => (
                    Some(c),
                    RowOutcome::Overridden {
                        erratum_line: e.line,
                    },
                ),
                Err(msg) => {
                    report
                        .errata_failures
                        .push(format!("errata line {}: {msg}", e.line));
                    (None, RowOutcome::Invalid { reason: msg })
                }
            };
            report.rows.push(RowResult {
                row: row.clone(),
                classification,
                outcome,
            });
            continue;
        }
        report.rows.push(check_row(row));
    }
    report
}

fn check_row(row: &FixturePair) -> RowResult {
    let invalid = |reason: String| RowResult {
        row: row.clone(),
        classification: None,
        outcome: RowOutcome::Invalid { reason },
    };
    let n = match Modulus::new(row.n) {
        Ok(n) => n,
        Err(e) => return invalid(e.to_string()),
    };
    let (r, s) = match (strict_set(n, &row.r), strict_set(n, &row.s)) {
        (Ok(r), Ok(s)) => (r, s),
        (Err(e), _) | (_, Err(e)) => return invalid(e),
    };
    if r.len() != s.len() {
        return invalid(format!("size mismatch: {} vs {}", r.len(), s.len()));
    }
    match classify_pair(&r, &s) {
        Ok(c) if row.label.matches(&c) => RowResult {
            row: row.clone(),
            classification: Some(c),
            outcome: RowOutcome::Match,
        },
        Ok(c) => RowResult {
            row: row.clone(),
            classification: Some(c),
            outcome: RowOutcome::Mismatch {
                found: c.to_string(),
            },
        },
        Err(e) => invalid(e.to_string()),
    }
}

impl fmt::Display for RowResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {} [{}] C_{}({}) vs C_{}({}) expected {}: ",
            self.row.line,
            self.row.source,
            self.row.n,
            JumpListI(&self.row.r),
            self.row.n,
            JumpListI(&self.row.s),
            self.row.label
        )?;
        match &self.outcome {
            RowOutcome::Match => f.write_str("ok"),
            RowOutcome::Overridden { erratum_line } => {
                write!(f, "overridden by errata line {erratum_line}")
            }
            RowOutcome::Mismatch { found } => write!(f, "MISMATCH found {found}"),
            RowOutcome::Invalid { reason } => write!(f, "INVALID {reason}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# comment\n\
        32\t1,2,15\t2,7,9\tT2\tsample 1\n\
        32\t1,4,15\t4,7,9\tT1\tsample 2\n\
        \n\
        32\t3,8,10,12,13,14,16\t7,8,10,11,12,14,16\tT2\tsample 3\n";

    const ERRATA: &str = "32\t3,8,10,12,13,14,16\t7,8,10,11,12,14,16\tT2\tsample 3\t3,8,10,12,13,14,16\t5,8,10,11,12,14,16\ttheta:2:4\tmistyped jump\n";

    #[test]
    fn parse_and_verify() {
        let rows = parse_fixtures("sample", SAMPLE).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[2].line, 5);
        let without = verify_fixtures(&rows, &[]);
        assert_eq!(without.matched(), 2);
        assert_eq!(without.mismatches(), 1);
        assert!(!without.is_clean());

        let errata = parse_errata("errata", ERRATA).unwrap();
        let with = verify_fixtures(&rows, &errata);
        assert!(with.is_clean());
        assert_eq!(with.overridden(), 1);
        assert_eq!(with.label_count(Label::T2), 2);
    }

    #[test]
    fn wrong_label_is_a_mismatch() {
        let rows = parse_fixtures("x", "32\t1,4,15\t4,7,9\tT2\tbad\n").unwrap();
        let report = verify_fixtures(&rows, &[]);
        assert!(matches!(
            report.rows[0].outcome,
            RowOutcome::Mismatch { .. }
        ));
    }

    #[test]
    fn duplicate_jumps_are_invalid() {
        let rows = parse_fixtures("x", "32\t1,31,2\t2,7,9\tT2\tdup\n").unwrap();
        let report = verify_fixtures(&rows, &[]);
        assert!(matches!(report.rows[0].outcome, RowOutcome::Invalid { .. }));
    }

    #[test]
    fn bad_erratum_witness_fails() {
        let rows = parse_fixtures("sample", SAMPLE).unwrap();
        let bad = ERRATA.replace("theta:2:4", "theta:2:3");
        let errata = parse_errata("errata", &bad).unwrap();
        let report = verify_fixtures(&rows, &errata);
        assert_eq!(report.errata_failures.len(), 1);
        assert!(!report.is_clean());
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_fixtures("f.tsv", "32\t1,2\t3\tT2\n# ok\n32\t1,2,15\t2,7,9\tT3\tx\n")
            .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
        assert!(msg.contains("2 malformed"), "{msg}");
    }

    #[test]
    fn empty_file_warns() {
        let report = verify_fixtures(&parse_fixtures("e", "# nothing\n").unwrap(), &[]);
        assert!(report.is_clean());
        assert_eq!(report.warnings.len(), 1);
    }

    #[test]
    fn witness_syntax() {
        assert_eq!(
            "theta:2:4".parse::<Witness>().unwrap(),
            Witness::Theta { m: 2, t: 4 }
        );
        assert_eq!("unit:7".parse::<Witness>().unwrap(), Witness::Unit { x: 7 });
        assert!("theta:2".parse::<Witness>().is_err());
    }
}
