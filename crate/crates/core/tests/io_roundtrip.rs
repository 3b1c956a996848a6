use std::path::Path;

use ordinal_ineq::io::{load_counts, load_microdata, write_counts};
use ordinal_ineq::{CountData, Error, ProbabilityVector};
use proptest::prelude::*;

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

proptest! {
    #[test]
    fn counts_round_trip(counts in prop::collection::vec(0u64..1_000_000, 2..12), labelled in any::<bool>()) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let data = CountData::new(counts).unwrap();
        let labels: Vec<String> = (1..=data.k()).map(|k| format!("level {k}")).collect();
        write_counts(&path, &data, labelled.then_some(labels.as_slice())).unwrap();
        let back = load_counts(&path).unwrap();
        prop_assert_eq!(&back.data, &data);
        let want: Vec<String> = if labelled { labels } else { (1..=data.k()).map(|k| k.to_string()).collect() };
        prop_assert_eq!(back.labels, want);
    }
}

#[test]
fn shipped_counts_match_published_shares() {
    let want = [0.7017, 0.7000, 0.6543, 0.5909];
    for (year, h) in ["2001", "2006", "2014", "2017"].iter().zip(want) {
        let loaded = load_counts(data(&format!("indigenous_{year}.csv"))).unwrap();
        assert_eq!(loaded.data.k(), 7);
        assert_eq!(loaded.labels.len(), 7);
        let w: Vec<f64> = loaded.data.counts().iter().map(|&c| c as f64).collect();
        let p = ProbabilityVector::from_weights(w).unwrap();
        assert!((p.probs()[0] + p.probs()[1] - h).abs() < 5e-4, "{year}");
    }
}

#[test]
fn shipped_microdata_has_two_groups() {
    let m = load_microdata(data("microdata_2017.csv")).unwrap();
    let names: Vec<&str> = m.datasets.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["ind", "nonind"]);
    assert_eq!(m.get("ind").unwrap().len(), 150);
    assert_eq!(m.get("nonind").unwrap().len(), 400);
    assert_eq!(m.get("ind").unwrap().k(), 7);
}

#[test]
fn parse_errors_name_path_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("gap.csv", "category,count\n1,3\n3,1\n", 3),
        ("dup.csv", "category,count\n1,3\n1,1\n", 3),
        ("frac.csv", "category,count\n1,3\n2,1.5\n", 3),
        ("header.csv", "cat,n\n1,3\n", 1),
    ];
    for (name, text, line) in cases {
        let p = dir.path().join(name);
        std::fs::write(&p, text).unwrap();
        let err = load_counts(&p).unwrap_err();
        assert!(matches!(err.root(), Error::Parse { .. }), "{name}: {err}");
        let msg = err.to_string();
        assert!(msg.contains(&format!("{name}:{line}")), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }
    let p = dir.path().join("zero.csv");
    std::fs::write(&p, "unit_id,category,weight\n1,1,1\n2,2,0\n").unwrap();
    let msg = load_microdata(&p).unwrap_err().to_string();
    assert!(msg.contains("zero.csv:3"), "{msg}");
}

#[test]
fn missing_file_is_io_error() {
    let err = load_counts("/nonexistent/counts.csv").unwrap_err();
    assert_eq!(err.exit_code(), 1);
}
