use std::ffi::CStr;
use std::path::Path;
use std::ptr;

use ordinal_ineq_ffi::*;

fn probvec(p: &[f64]) -> *mut OiProbVec {
    let mut v = ptr::null_mut();
    assert_eq!(
        unsafe { oi_probvec_new(p.as_ptr(), p.len(), &mut v) },
        OiStatus::Ok
    );
    v
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(oi_last_error_message()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(oi_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn scalar_measures() {
    let v = probvec(&[0.5, 0.5]);
    let mut x = 0.0;
    unsafe {
        assert_eq!(oi_probvec_len(v), 2);
        assert_eq!(oi_headcount(v, &mut x), OiStatus::Ok);
        assert_eq!(x, 1.0);
        assert_eq!(oi_j_index(v, &mut x), OiStatus::Ok);
        assert!((x - 0.375).abs() < 1e-15);
        assert_eq!(oi_cf_index(v, 0.0, &mut x), OiStatus::Ok);
        assert!((x - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(oi_gl_eval(v, 0.25, &mut x), OiStatus::Ok);
        assert_eq!(x, 0.125);
        oi_probvec_free(v);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut v = ptr::null_mut();
    let bad = [0.6, 0.6];
    unsafe {
        assert_eq!(
            oi_probvec_new(bad.as_ptr(), 2, &mut v),
            OiStatus::InvalidProbabilities
        );
        assert!(v.is_null());
        assert!(!last_error().is_empty());

        let ok = probvec(&[0.2, 0.8]);
        let mut x = 0.0;
        assert_eq!(oi_cf_index(ok, 1.5, &mut x), OiStatus::Domain);
        assert_eq!(oi_gl_eval(ok, 1.5, &mut x), OiStatus::Domain);
        assert_eq!(oi_j_index(ptr::null(), &mut x), OiStatus::NullPointer);
        assert!(last_error().contains("null"));
        assert_eq!(oi_j_index(ok, ptr::null_mut()), OiStatus::NullPointer);

        let three = probvec(&[0.2, 0.3, 0.5]);
        let mut o = OiOutcome::Neither;
        assert_eq!(
            oi_fsd_compare(ok, three, &mut o),
            OiStatus::DimensionMismatch
        );
        assert_eq!(oi_gld_compare(ok, ok, 0.0, &mut o), OiStatus::Domain);

        oi_probvec_free(ok);
        oi_probvec_free(three);
        oi_probvec_free(ptr::null_mut());
    }
}

#[test]
fn weights_normalize() {
    let w = [2.0, 6.0];
    let mut v = ptr::null_mut();
    let mut h = 0.0;
    unsafe {
        assert_eq!(oi_probvec_from_weights(w.as_ptr(), 2, &mut v), OiStatus::Ok);
        assert_eq!(oi_gl_eval(v, 1.0, &mut h), OiStatus::Ok);
        assert!((h - (0.25 * 0.25 + 0.75)).abs() < 1e-15);
        oi_probvec_free(v);
    }
}

#[test]
fn pairwise_comparisons() {
    let x = probvec(&[0.2, 0.3, 0.5]);
    let y = probvec(&[0.4, 0.3, 0.3]);
    let mut o = OiOutcome::Neither;
    unsafe {
        assert_eq!(oi_fsd_compare(x, y, &mut o), OiStatus::Ok);
        assert_eq!(o, OiOutcome::XDominates);
        assert_eq!(oi_fsd_compare(y, x, &mut o), OiStatus::Ok);
        assert_eq!(o, OiOutcome::YDominates);
        assert_eq!(oi_restricted_fsd_compare(x, y, &mut o), OiStatus::Ok);
        assert_eq!(o, OiOutcome::XDominates);
        assert_eq!(oi_gld_compare(x, x, 0.01, &mut o), OiStatus::Ok);
        assert_eq!(o, OiOutcome::Neither);
        oi_probvec_free(x);
        oi_probvec_free(y);
    }
}

#[test]
fn draws_and_probabilities() {
    let cx = [1u64, 7];
    let cy = [7u64, 1];
    let (mut x, mut y) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(
            oi_conjugate_draws(cx.as_ptr(), 2, ptr::null(), 20_000, 1, &mut x),
            OiStatus::Ok
        );
        assert_eq!(
            oi_conjugate_draws(cy.as_ptr(), 2, ptr::null(), 20_000, 2, &mut y),
            OiStatus::Ok
        );
        assert_eq!(oi_draws_count(x), 20_000);
        assert_eq!(oi_draws_categories(x), 2);

        let mut row = [0.0; 2];
        assert_eq!(oi_draws_row(x, 5, row.as_mut_ptr(), 2), OiStatus::Ok);
        assert!((row[0] + row[1] - 1.0).abs() < 1e-12);
        assert_eq!(
            oi_draws_row(x, 20_000, row.as_mut_ptr(), 2),
            OiStatus::InvalidDimension
        );
        assert_eq!(
            oi_draws_row(x, 0, row.as_mut_ptr(), 3),
            OiStatus::DimensionMismatch
        );

        let mut probs = [0.0; 3];
        assert_eq!(
            oi_dominance_probabilities(x, y, OiCriterion::Fsd, 0.01, probs.as_mut_ptr()),
            OiStatus::Ok
        );
        assert_eq!(probs.iter().sum::<f64>(), 1.0);
        // Pr[Beta(2,8) < Beta(8,2)]
        assert!((probs[0] - 0.998_313).abs() < 0.005);

        let mut s = OiSummary::default();
        assert_eq!(
            oi_index_summary(x, OiIndex::CowellFlachaire, 0.5, &mut s),
            OiStatus::Ok
        );
        assert!(s.q025 <= s.median && s.median <= s.q975 && s.sd > 0.0);
        assert_eq!(
            oi_index_summary(x, OiIndex::CowellFlachaire, 2.0, &mut s),
            OiStatus::Config
        );

        oi_draws_free(x);
        oi_draws_free(y);
    }
}

#[test]
fn bootstrap_draws() {
    let cats = [1u32, 2, 2, 3];
    let w = [1.0, 1.0, 2.0, 0.5];
    let mut d = ptr::null_mut();
    unsafe {
        assert_eq!(
            oi_weighted_bootstrap_draws(cats.as_ptr(), w.as_ptr(), 4, 3, 100, 9, &mut d),
            OiStatus::Ok
        );
        let mut s = OiSummary::default();
        assert_eq!(
            oi_index_summary(d, OiIndex::Headcount, 0.0, &mut s),
            OiStatus::Ok
        );
        assert!(s.mean > 0.0 && s.mean < 1.0);
        oi_draws_free(d);

        let zero = [1.0, 0.0, 1.0, 1.0];
        assert_eq!(
            oi_weighted_bootstrap_draws(cats.as_ptr(), zero.as_ptr(), 4, 3, 100, 9, &mut d),
            OiStatus::Domain
        );
        let bad_cat = [1u32, 2, 4, 3];
        assert_ne!(
            oi_weighted_bootstrap_draws(bad_cat.as_ptr(), w.as_ptr(), 4, 3, 100, 9, &mut d),
            OiStatus::Ok
        );
    }
}

#[test]
fn draws_are_seed_deterministic() {
    let c = [3u64, 1, 4];
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    let (mut ra, mut rb) = ([0.0; 3], [0.0; 3]);
    unsafe {
        oi_conjugate_draws(c.as_ptr(), 3, ptr::null(), 50, 77, &mut a);
        oi_conjugate_draws(c.as_ptr(), 3, ptr::null(), 50, 77, &mut b);
        for i in 0..50 {
            oi_draws_row(a, i, ra.as_mut_ptr(), 3);
            oi_draws_row(b, i, rb.as_mut_ptr(), 3);
            assert_eq!(ra, rb);
        }
        oi_draws_free(a);
        oi_draws_free(b);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("include/ordinal_ineq.h"),
    )
    .expect("header generated by build script");
    for name in [
        "oi_version",
        "oi_last_error_message",
        "oi_probvec_new",
        "oi_probvec_from_weights",
        "oi_probvec_free",
        "oi_headcount",
        "oi_j_index",
        "oi_cf_index",
        "oi_gl_eval",
        "oi_fsd_compare",
        "oi_restricted_fsd_compare",
        "oi_gld_compare",
        "oi_conjugate_draws",
        "oi_weighted_bootstrap_draws",
        "oi_draws_free",
        "oi_draws_row",
        "oi_dominance_probabilities",
        "oi_index_summary",
        "typedef struct OiProbVec OiProbVec;",
        "typedef struct OiDraws OiDraws;",
        "OI_STATUS_OK = 0",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

#[test]
fn header_compiles_as_c() {
    let Ok(cc) = std::process::Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(cc.status.success());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile_dir();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"ordinal_ineq.h\"\n\
         int main(void) {\n\
           OiProbVec *v = 0; double p[2] = {0.5, 0.5}; double h;\n\
           if (oi_probvec_new(p, 2, &v) != OI_STATUS_OK) return 1;\n\
           oi_headcount(v, &h); oi_probvec_free(v); return h == 1.0 ? 0 : 1;\n\
         }\n",
    )
    .unwrap();
    let o = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = Path::new(env!("CARGO_TARGET_TMPDIR")).join("ffi_header");
    std::fs::create_dir_all(&d).unwrap();
    d
}
