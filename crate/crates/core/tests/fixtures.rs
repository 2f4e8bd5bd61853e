use std::collections::BTreeSet;

use circulant_core::fixtures::{check_erratum, verify_fixtures, FixturePair, Label, RowOutcome};
use circulant_core::{enumerate, EnumerationOptions, EnumerationScope, PairClassification};

mod common;
use common::{errata, fixture, md, raw};

/// Unordered T2 pairs from a fixture, with errata corrections applied.
fn corrected_t2_pairs(rows: &[FixturePair]) -> BTreeSet<(Vec<u64>, Vec<u64>)> {
    let errata = errata();
    rows.iter()
        .filter(|r| r.label == Label::T2)
        .map(|row| {
            let (r, s) = match errata
                .iter()
                .find(|e| e.row.source == row.source && e.row.r == row.r)
            {
                Some(e) => (e.corrected_r.clone(), e.corrected_s.clone()),
                None => (row.r.clone(), row.s.clone()),
            };
            let a = raw(row.n, &r).jumps().to_vec();
            let b = raw(row.n, &s).jumps().to_vec();
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

#[test]
fn every_erratum_verifies() {
    let errata = errata();
    assert_eq!(errata.len(), 9);
    for e in &errata {
        let c = check_erratum(e).unwrap_or_else(|msg| panic!("errata line {}: {msg}", e.line));
        assert!(matches!(
            c,
            PairClassification::Type2 {
                m: 2,
                witness_t: 4,
                ..
            }
        ));
    }
}

#[test]
fn every_erratum_targets_a_real_mismatch() {
    let mut rows = fixture("tables_a.tsv");
    rows.extend(fixture("tables_b.tsv"));
    rows.extend(fixture("pairs_32.tsv"));
    let raw_report = verify_fixtures(&rows, &[]);
    let failing: Vec<&FixturePair> = raw_report
        .rows
        .iter()
        .filter(|r| !matches!(r.outcome, RowOutcome::Match))
        .map(|r| &r.row)
        .collect();
    let errata = errata();
    assert_eq!(failing.len(), errata.len());
    for row in failing {
        assert!(
            errata.iter().any(|e| e.row
                == FixturePair {
                    line: e.row.line,
                    ..row.clone()
                }),
            "{row:?}"
        );
    }
}

#[test]
fn problem_fixtures_match_without_errata() {
    for name in ["problem_3_5.tsv", "problem_3_6.tsv"] {
        let report = verify_fixtures(&fixture(name), &[]);
        assert!(report.is_clean(), "{name}");
        assert_eq!(report.overridden(), 0);
    }
}

#[test]
fn table_t2_rows_equal_the_closure_pairs() {
    let mut rows = fixture("tables_a.tsv");
    rows.extend(fixture("tables_b.tsv"));
    let from_tables = corrected_t2_pairs(&rows);
    let from_listing = corrected_t2_pairs(&fixture("pairs_32.tsv"));
    assert_eq!(from_tables.len(), 384);
    assert_eq!(from_tables, from_listing);

    let report = enumerate(md(32), 2, &EnumerationOptions::default()).unwrap();
    let enumerated: BTreeSet<_> = report
        .pairs
        .iter()
        .map(|p| (p.r.clone(), p.s.clone()))
        .collect();
    assert_eq!(enumerated, from_tables);
}

#[test]
fn closure_is_a_subset_of_the_exhaustive_scan() {
    let closure = enumerate(md(24), 2, &EnumerationOptions::default()).unwrap();
    let all = enumerate(
        md(24),
        2,
        &EnumerationOptions {
            scope: EnumerationScope::Exhaustive,
            ..Default::default()
        },
    )
    .unwrap();
    assert_eq!(all.pair_count, closure.scan_stats.exhaustive_pair_count);
    assert!(closure.pairs.iter().all(|p| all.pairs.contains(p)));
}
