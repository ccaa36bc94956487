use std::path::Path;
use std::process::{Command, Output};

use serde::de::DeserializeOwned;
use vrmat_core::acceptance::Criterion;
use vrmat_core::admissible::AdmissibleReport;
use vrmat_core::analysis::{DetectionReport, FitReport, Verdict};
use vrmat_core::kernel::decimal;
use vrmat_core::lab::{ConjectureReport, MinpolyReport};
use vrmat_core::ladder::{
    mnt, transfer_polys, IdentityReport, MntComparison, MntVariant, TransferSeq,
};
use vrmat_core::ltmatrix::lt_from_json;
use vrmat_core::vrm::{build_vrm, pascal};
use vrmat_core::{Integer, LtMatrix, Poly, Seq, VrmSpec};

fn vrmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vrmat"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json<T: DeserializeOwned>(args: &[&str]) -> (T, i32) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = vrmat(&full);
    let value = serde_json::from_str(&stdout(&o))
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&o)));
    (value, code(&o))
}

fn write_matrix(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let path = path.to_str().unwrap().to_string();
    let mut full = args.to_vec();
    full.extend(["--out", &path]);
    let o = vrmat(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn m(rows: &[&[i64]]) -> LtMatrix {
    LtMatrix::from_i64_rows(rows)
}

#[test]
fn build_pretty_and_exit_codes() {
    let o = vrmat(&["build", "--seq", "geom:2", "--order", "4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        " 1  0  0  0\n 2  1  0  0\n 4  4  1  0\n 8 12  6  1\n"
    );
    assert!(!stdout(&o).contains('\x1b'));

    let o = vrmat(&["build", "--seq", "geom:2", "--order", "3"]);
    assert_eq!(stdout(&o), "1 0 0\n2 1 0\n4 4 1\n");

    let o = vrmat(&["build", "--seq", "geom"]);
    assert_eq!(code(&o), 2);
    let o = vrmat(&["build", "--seq", "geom", "--order", "3"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte 4"));
    assert_eq!(code(&vrmat(&["build", "--seq", "ones", "--order", "0"])), 2);
    assert_eq!(code(&vrmat(&["build", "--order", "3"])), 2);
    assert_eq!(code(&vrmat(&["frobnicate"])), 2);
    // strict mode needs λ_0 = 1
    assert_eq!(
        code(&vrmat(&["build", "--seq", "const:2", "--order", "3"])),
        3
    );
    assert_eq!(
        code(&vrmat(&["inverse", "--seq", "const:2", "--order", "3"])),
        3
    );
    assert_eq!(
        code(&vrmat(&[
            "minpoly", "--seq", "ones", "--order", "3", "--p", "4"
        ])),
        3
    );
    assert_eq!(code(&vrmat(&["--help"])), 0);
}

#[test]
fn help_explains_order() {
    let o = vrmat(&["--help"]);
    assert!(stdout(&o).contains("n = N - 1"));
    let o = vrmat(&["build", "--help"]);
    assert!(stdout(&o).contains("Number of rows (n + 1)"));
}

#[test]
fn csv_output() {
    let o = vrmat(&["build", "--seq", "ones", "--order", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "1\n1,1\n1,2,1\n");
}

#[test]
fn general_first_column() {
    let (a, _) = json::<LtMatrix>(&[
        "build",
        "--seq",
        "ones",
        "--order",
        "3",
        "--first-col",
        "2,-1,5",
    ]);
    let spec = VrmSpec::general(Seq::Ones, vec![2.into(), (-1).into(), 5.into()]);
    assert_eq!(a, build_vrm(&spec, 2).unwrap());
    assert_eq!(
        code(&vrmat(&[
            "build",
            "--seq",
            "ones",
            "--order",
            "3",
            "--first-col",
            "1,2"
        ])),
        3
    );
}

#[test]
fn pipeline_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_matrix(
        dir.path(),
        "pascal.json",
        &["build", "--kind", "pascal", "--order", "4"],
    );
    let text = std::fs::read_to_string(&p).unwrap();
    assert_eq!(lt_from_json(&text).unwrap(), pascal(3));

    let (report, c) = json::<DetectionReport>(&["detect", "--in", &p, "--mode", "strict"]);
    assert_eq!(c, 0);
    assert!(report.passed());
    assert!(report.lambda_matches(&Seq::list_i64(&[1, 1, 1, 1])));
    assert_eq!(report.lambda.len(), 4);
    let o = vrmat(&["detect", "--in", &p, "--mode", "strict"]);
    assert!(stdout(&o).contains("lambda: (1, 1, 1, 1)"));

    let sq = write_matrix(dir.path(), "sq.json", &["power", "--in", &p, "--m", "2"]);
    let (report, _) = json::<DetectionReport>(&["detect", "--in", &sq, "--mode", "strict"]);
    assert!(report.lambda_matches(&Seq::Geom(2.into())));
    let (fit, c) = json::<FitReport>(&["fit", "--in", &sq]);
    assert_eq!(c, 0);
    assert!(fit.fits(&1.into(), &2.into()));

    let (inv, _) = json::<LtMatrix>(&["inverse", "--in", &p]);
    assert_eq!(inv, m(&[&[1], &[-1, 1], &[1, -2, 1], &[-1, 3, -3, 1]]));
}

#[test]
fn detection_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_matrix(
        dir.path(),
        "a.json",
        &[
            "admissible",
            "build",
            "--seq",
            "list:1,2,2,2",
            "--order",
            "5",
        ],
    );
    let (report, c) = json::<DetectionReport>(&["detect", "--in", &a]);
    assert_eq!(c, 1);
    let f = report.first_failure.unwrap();
    assert_eq!((f.n, f.k), (2, 1));
    let (report, c) = json::<DetectionReport>(&["detect", "--in", &a, "--mode", "general"]);
    assert_eq!(c, 0);
    assert!(report.lambda_matches(&Seq::list_i64(&[1, 2, 5, 14])));
    let (report, c) = json::<DetectionReport>(&[
        "detect",
        "--in",
        &a,
        "--mode",
        "verify",
        "--seq",
        "list:1,2,5,14",
    ]);
    assert_eq!(c, 0);
    assert_eq!(report.verdict, Verdict::Pass);
    assert_eq!(code(&vrmat(&["detect", "--in", &a, "--mode", "verify"])), 2);

    let missing = dir.path().join("missing.json");
    assert_eq!(
        code(&vrmat(&["detect", "--in", missing.to_str().unwrap()])),
        3
    );
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"order":2,"rows":[["1"],["1"]]}"#).unwrap();
    let o = vrmat(&["detect", "--in", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("rows[1]"));
}

#[test]
fn admissible_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_matrix(
        dir.path(),
        "a.json",
        &["admissible", "build", "--seq", "ones", "--order", "5"],
    );
    let (report, c) = json::<AdmissibleReport>(&["admissible", "check", "--in", &a]);
    assert_eq!(c, 0);
    assert!(report.pass);

    let o = vrmat(&["admissible", "extract", "--in", &a, "--format", "json"]);
    let text = stdout(&o);
    let mut de = serde_json::Deserializer::from_str(&text);
    let s: Vec<Integer> = decimal::vec::deserialize(&mut de).unwrap();
    assert_eq!(s, Seq::Ones.terms(4).unwrap());

    let p = write_matrix(
        dir.path(),
        "p.json",
        &["build", "--kind", "pascal", "--order", "4"],
    );
    let (report, c) = json::<AdmissibleReport>(&["admissible", "check", "--in", &p]);
    assert_eq!(c, 1);
    assert!(!report.pass);
}

#[test]
fn factor_and_toeplitz() {
    let (factors, _) = json::<Vec<LtMatrix>>(&["factor", "--seq", "geom:2", "--order", "4"]);
    assert_eq!(factors.len(), 3);
    let product = factors.iter().fold(LtMatrix::identity(4), |acc, f| {
        vrmat_core::ltmatrix::lt_mul(&acc, f).unwrap()
    });
    assert_eq!(product, m(&[&[1], &[2, 1], &[4, 4, 1], &[8, 12, 6, 1]]));

    let (step, _) =
        json::<Vec<LtMatrix>>(&["factor", "--seq", "const:2", "--order", "3", "--step"]);
    assert_eq!(step[0], m(&[&[2], &[2, 2], &[2, 2, 2]]));

    let (t, _) = json::<LtMatrix>(&["toeplitz", "--seq", "nat", "--order", "3"]);
    assert_eq!(t, m(&[&[1], &[2, 1], &[3, 2, 1]]));
    let (t, _) = json::<LtMatrix>(&["toeplitz", "--seq", "nat", "--order", "3", "--k", "1"]);
    assert_eq!(t, m(&[&[1], &[0, 1], &[0, 2, 1]]));
    assert_eq!(
        code(&vrmat(&[
            "toeplitz", "--seq", "nat", "--order", "3", "--k", "3"
        ])),
        3
    );
}

#[test]
fn ladder_subcommands() {
    let (polys, _) = json::<TransferSeq>(&["ladder", "polys", "--order", "6"]);
    assert_eq!(polys, transfer_polys(5));
    assert_eq!(polys.get(5), &Poly::from_i64s(&[1, 15, 35, 28, 9, 1]));
    let (tri, _) = json::<LtMatrix>(&["ladder", "mnt", "--order", "4"]);
    assert_eq!(tri, mnt(3));
    let (tri, _) = json::<LtMatrix>(&["ladder", "mnt2", "--order", "3"]);
    assert_eq!(tri, m(&[&[0], &[1, 0], &[2, 1, 0]]));
    let (cmp, c) = json::<MntComparison>(&["ladder", "compare", "--order", "6"]);
    assert_eq!(c, 0);
    assert!(cmp.variant(MntVariant::TwoK).matches);
    assert!(!cmp.variant(MntVariant::TwoKPlusOne).matches);
    let (ids, c) = json::<Vec<IdentityReport>>(&["ladder", "identities", "--max", "12"]);
    assert_eq!(c, 0);
    assert!(ids.iter().all(|r| r.pass && r.cells_checked == 78));
}

#[test]
fn conjecture_subcommands() {
    let (r, c) = json::<ConjectureReport>(&[
        "conjecture",
        "1",
        "--alpha",
        "1",
        "--seq",
        "const:3",
        "--order",
        "6",
    ]);
    assert_eq!(c, 0);
    assert!(r.instances[0]
        .detection
        .lambda_matches(&Seq::Geom(3.into())));
    let (r, _) = json::<ConjectureReport>(&["conjecture", "2", "--order", "6"]);
    assert!(r.instance("(b)").unwrap().detection.passed());
    assert!(!r.instance("(a)").unwrap().detection.passed());
    assert_eq!(code(&vrmat(&["conjecture", "2", "--order", "4"])), 2);
    assert_eq!(
        code(&vrmat(&[
            "conjecture",
            "1",
            "--alpha",
            "1",
            "--seq",
            "ones",
            "--order",
            "3"
        ])),
        2
    );
}

#[test]
fn minpoly_subcommand() {
    let (r, c) = json::<MinpolyReport>(&["minpoly", "--seq", "ones", "--order", "5", "--p", "5"]);
    assert_eq!(c, 0);
    assert_eq!(r.poly, Poly::from_i64s(&[4, 0, 0, 0, 0, 1]));
    assert!(r.check.passed());
}

#[test]
fn corrupted_selftest_names_the_criterion() {
    for id in [1usize, 7, 11] {
        let o = vrmat(&["selftest", "--corrupt", &id.to_string(), "--format", "json"]);
        assert_eq!(code(&o), 1);
        let criteria: Vec<Criterion> = serde_json::from_str(&stdout(&o)).unwrap();
        assert!(!criteria[id - 1].passed);
        let stderr = String::from_utf8_lossy(&o.stderr).to_string();
        assert!(
            stderr.contains(&format!("criterion {id} ({})", criteria[id - 1].name)),
            "{stderr}"
        );
    }
    assert_eq!(code(&vrmat(&["selftest", "--corrupt", "0"])), 2);
}

#[test]
fn selftest_passes() {
    let o = vrmat(&["selftest"]);
    print!("{}", stdout(&o));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}
