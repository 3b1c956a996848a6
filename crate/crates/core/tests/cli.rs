use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ordinal-ineq");

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn run_in(out: &Path, verb: &str, extra: &[&str]) -> Output {
    let mut args = vec![verb, "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn read_csv(path: &Path) -> Vec<(f64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn every_verb_on_shipped_config() {
    let cfg = data("indigenous_synthetic.json");
    let cfg = cfg.to_str().unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let expected: [(&str, &[&str]); 6] = [
        (
            "estimate",
            &["proportions.txt", "proportions.json", "draws_ind2001.csv"],
        ),
        ("indices", &["indices.txt", "indices.json"]),
        ("dominance", &["dominance.txt", "dominance.json"]),
        (
            "curves",
            &["gl_ind2017.csv", "probcurve_gld_ind2001_over_ind2017.csv"],
        ),
        (
            "density",
            &["density_H_ind2001.csv", "density_CF0.9_ind2017.csv"],
        ),
        ("report", &["report.txt", "report.json", "figure_gl.svg"]),
    ];
    for (verb, files) in expected {
        let out = tmp.path().join(verb);
        let o = run_in(&out, verb, &["--config", cfg, "--draws", "200", "--render"]);
        assert_eq!(
            code(&o),
            0,
            "{verb}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        for f in files {
            assert!(out.join(f).is_file(), "{verb} missing {f}");
        }
    }
    let draws = std::fs::read_to_string(tmp.path().join("estimate/draws_ind2001.csv")).unwrap();
    assert_eq!(draws.lines().count(), 201);
    assert!(draws.starts_with("p1,p2,p3,p4,p5,p6,p7\n"));
}

#[test]
fn report_is_complete() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(
        tmp.path(),
        "report",
        &[
            "--config",
            data("indigenous_synthetic.json").to_str().unwrap(),
            "--draws",
            "300",
        ],
    );
    assert_eq!(code(&o), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("report.json")).unwrap())
            .unwrap();
    let comparisons = v["comparisons"].as_array().unwrap();
    assert_eq!(comparisons.len(), 6);
    for c in comparisons {
        let reports = c["reports"].as_array().unwrap();
        assert_eq!(reports.len(), 3);
        for r in reports {
            let s = r["prob_x"].as_f64().unwrap()
                + r["prob_y"].as_f64().unwrap()
                + r["prob_none"].as_f64().unwrap();
            assert_eq!(s, 1.0);
        }
    }
    for a in v["artifacts"].as_array().unwrap() {
        assert!(tmp.path().join(a.as_str().unwrap()).is_file());
    }
    assert_eq!(v["metadata"]["draws"], 300);
    assert!(v["metadata"]["generated_at"].is_u64());
}

#[test]
fn shipped_h_near_published() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(
        tmp.path(),
        "indices",
        &[
            "--config",
            data("indigenous_synthetic.json").to_str().unwrap(),
            "--draws",
            "2000",
        ],
    );
    assert_eq!(code(&o), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("indices.json")).unwrap())
            .unwrap();
    for (g, want) in v["groups"]
        .as_array()
        .unwrap()
        .iter()
        .zip([0.7017, 0.7000, 0.6543, 0.5909])
    {
        assert_eq!(g["indices"][0]["index"], "H");
        let mean = g["indices"][0]["summary"]["mean"].as_f64().unwrap();
        assert!((mean - want).abs() < 0.02, "{mean} vs {want}");
    }
}

#[test]
fn gl_files_reproduce_ordering() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(
        tmp.path(),
        "curves",
        &[
            "--config",
            data("indigenous_synthetic.json").to_str().unwrap(),
            "--draws",
            "200",
        ],
    );
    assert_eq!(code(&o), 0);
    let a = read_csv(&tmp.path().join("gl_ind2001.csv"));
    let b = read_csv(&tmp.path().join("gl_ind2017.csv"));
    assert_eq!(a.len(), 101);
    assert!(a.iter().zip(&b).all(|(p, q)| p.0 == q.0 && p.1 >= q.1));
    assert!(a.iter().zip(&b).any(|(p, q)| p.1 > q.1));
    for (dir, over) in [("fsd", 6), ("gld", 99)] {
        let c = read_csv(
            &tmp.path()
                .join(format!("probcurve_{dir}_ind2001_over_ind2017.csv")),
        );
        assert_eq!(c.len(), over);
        assert!(c.windows(2).all(|w| w[1].1 <= w[0].1));
    }
}

#[test]
fn degenerate_gl_file_is_diagonal() {
    let tmp = tempfile::tempdir().unwrap();
    write(
        tmp.path(),
        "micro.csv",
        "unit_id,category,weight\n1,2,1.5\n2,2,0.7\n3,2,2.0\n",
    );
    // K fixed at 3 through the config so category 2 is interior
    let cfg = write(
        tmp.path(),
        "cfg.json",
        r#"{"groups":[{"name":"d","microdata_file":"micro.csv","categories":3}],"draws":50}"#,
    );
    let out = tmp.path().join("out");
    let o = run_in(&out, "curves", &["--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for (u, v) in read_csv(&out.join("gl_d.csv")) {
        assert!((u - v).abs() < 1e-12, "{u} {v}");
    }
}

#[test]
fn density_files_integrate_to_one() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_in(
        tmp.path(),
        "density",
        &[
            "--config",
            data("microdata_synthetic.json").to_str().unwrap(),
            "--draws",
            "1000",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut n = 0;
    for entry in std::fs::read_dir(tmp.path()).unwrap() {
        let path = entry.unwrap().path();
        if !path
            .file_name()
            .unwrap()
            .to_str()
            .unwrap()
            .starts_with("density_")
        {
            continue;
        }
        let pts = read_csv(&path);
        assert_eq!(pts.len(), 512);
        let area: f64 = pts
            .windows(2)
            .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
            .sum();
        assert!((area - 1.0).abs() < 0.01, "{}: {area}", path.display());
        n += 1;
    }
    assert_eq!(n, 8);
}

#[test]
fn counts_flag_compares_every_pair() {
    let tmp = tempfile::tempdir().unwrap();
    let a = write(tmp.path(), "a.csv", "category,count\n1,3\n2,1\n");
    let b = write(tmp.path(), "b.csv", "category,count\n1,1\n2,3\n");
    let o = run_in(
        &tmp.path().join("out"),
        "dominance",
        &[
            "--counts",
            a.to_str().unwrap(),
            "--counts",
            b.to_str().unwrap(),
            "--draws",
            "10000",
        ],
    );
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("out/dominance.json")).unwrap(),
    )
    .unwrap();
    let c = &v["comparisons"][0];
    assert_eq!((c["x"].as_str(), c["y"].as_str()), (Some("a"), Some("b")));
    // b puts more mass in the higher category
    let fsd = &c["reports"][0];
    assert_eq!(fsd["criterion"], "fsd");
    assert!(fsd["prob_y"].as_f64().unwrap() > 0.85);
    assert!(String::from_utf8_lossy(&o.stdout).contains("Pr(No Dominance)"));
}

#[test]
fn labels_do_not_change_results() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::create_dir_all(tmp.path().join("plain")).unwrap();
    std::fs::create_dir_all(tmp.path().join("labelled")).unwrap();
    let plain = write(
        &tmp.path().join("plain"),
        "g.csv",
        "category,count\n1,5\n2,9\n3,2\n",
    );
    let labelled = write(
        &tmp.path().join("labelled"),
        "g.csv",
        "category,count,label\n3,2,High\n1,5,Low\n2,9,Mid\n",
    );
    let mut outs = Vec::new();
    for (i, f) in [plain, labelled].iter().enumerate() {
        let out = tmp.path().join(format!("out{i}"));
        assert_eq!(
            code(&run_in(
                &out,
                "indices",
                &["--counts", f.to_str().unwrap(), "--draws", "500"]
            )),
            0
        );
        outs.push(std::fs::read(out.join("indices.json")).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
}

#[test]
fn seed_override_changes_draws_and_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let f = write(tmp.path(), "g.csv", "category,count\n1,5\n2,9\n3,2\n");
    let read = |seed: &str, dir: &str| {
        let out = tmp.path().join(dir);
        let args = [
            "--counts",
            f.to_str().unwrap(),
            "--draws",
            "20",
            "--seed",
            seed,
        ];
        assert_eq!(code(&run_in(&out, "estimate", &args)), 0);
        std::fs::read(out.join("draws_g.csv")).unwrap()
    };
    assert_eq!(read("1", "a"), read("1", "b"));
    assert_ne!(read("1", "c"), read("2", "d"));
}

#[test]
fn exit_code_two_for_config_and_parse_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let out = out.to_str().unwrap();

    let o = run(&["report", "--out", out]);
    assert_eq!(code(&o), 2);

    let unknown = write(tmp.path(), "unknown.json", r#"{"groups":[],"bogus":1}"#);
    assert_eq!(
        code(&run(&[
            "report",
            "--out",
            out,
            "--config",
            unknown.to_str().unwrap()
        ])),
        2
    );

    let bad_ref = write(
        tmp.path(),
        "badref.json",
        r#"{"groups":[{"name":"a","counts":[1,2]}],"comparisons":[{"x":"a","y":"zz"}]}"#,
    );
    assert_eq!(
        code(&run(&[
            "report",
            "--out",
            out,
            "--config",
            bad_ref.to_str().unwrap()
        ])),
        2
    );

    let negative = write(tmp.path(), "neg.csv", "category,count\n1,3\n2,-1\n");
    let o = run(&[
        "estimate",
        "--out",
        out,
        "--counts",
        negative.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("neg.csv:3"), "{err}");

    assert_eq!(code(&run(&["frobnicate"])), 2);
    let cfg = data("indigenous_synthetic.json");
    assert_eq!(
        code(&run(&[
            "report",
            "--out",
            out,
            "--config",
            cfg.to_str().unwrap(),
            "--draws",
            "1"
        ])),
        2
    );
}

#[test]
fn exit_code_three_for_mismatched_categories() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write(
        tmp.path(),
        "cfg.json",
        r#"{"groups":[{"name":"a","counts":[3,1]},{"name":"b","counts":[1,2,3]}],
            "draws":100,"comparisons":[{"x":"a","y":"b"}]}"#,
    );
    let o = run_in(
        &tmp.path().join("out"),
        "dominance",
        &["--config", cfg.to_str().unwrap()],
    );
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains('a') && err.contains('b'), "{err}");
}

#[test]
fn exit_code_one_for_unwritable_output() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = write(tmp.path(), "file", "");
    let f = write(tmp.path(), "g.csv", "category,count\n1,5\n2,9\n");
    let o = run(&[
        "estimate",
        "--out",
        blocker.join("sub").to_str().unwrap(),
        "--counts",
        f.to_str().unwrap(),
        "--draws",
        "10",
    ]);
    assert_eq!(code(&o), 1);
}
