use std::io::IsTerminal;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use vrmat_core::acceptance::Criterion;
use vrmat_core::admissible::AdmissibleReport;
use vrmat_core::analysis::{CellFailure, DetectionReport, FitReport};
use vrmat_core::kernel::rational_to_string;
use vrmat_core::lab::{ConjectureReport, ConjectureVerdict, MinpolyReport};
use vrmat_core::ladder::{IdentityReport, MntComparison, TransferSeq};
use vrmat_core::ltmatrix::{lt_to_csv, to_json_value};
use vrmat_core::{Integer, LtMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Pretty,
    Json,
    Csv,
}

/// One command result in all three formats, plus whether its check held.
pub struct Rendered {
    pub pretty: String,
    pub json: Value,
    pub csv: String,
    pub ok: bool,
}

impl Rendered {
    pub fn text(&self, format: Format) -> String {
        match format {
            Format::Pretty => self.pretty.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("values serialize");
                s.push('\n');
                s
            }
            Format::Csv => self.csv.clone(),
        }
    }
}

#[derive(Clone, Copy)]
pub struct Style {
    color: bool,
}

impl Style {
    /// Color only for pretty output to a terminal, and never with `NO_COLOR` set.
    pub fn detect(format: Format, to_file: bool) -> Self {
        let no_color = std::env::var_os("NO_COLOR").is_some_and(|v| !v.is_empty());
        Style {
            color: format == Format::Pretty
                && !to_file
                && !no_color
                && std::io::stdout().is_terminal(),
        }
    }

    pub fn status(self, word: &str, ok: bool) -> String {
        if self.color {
            let code = if ok { 32 } else { 31 };
            format!("\x1b[{code}m{word}\x1b[0m")
        } else {
            word.to_string()
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn key_value_csv(pairs: &[(&str, String)]) -> String {
    let mut out = String::from("key,value\n");
    for (k, v) in pairs {
        out.push_str(&format!("{},{}\n", csv_field(k), csv_field(v)));
    }
    out
}

fn failure_text(f: &Option<CellFailure>) -> String {
    f.as_ref().map_or("none".into(), |f| f.to_string())
}

pub fn matrix(a: &LtMatrix) -> Rendered {
    Rendered {
        pretty: a.to_string(),
        json: to_json_value(a),
        csv: lt_to_csv(a),
        ok: true,
    }
}

pub fn matrices(labels: &[String], mats: &[LtMatrix]) -> Rendered {
    let mut pretty = String::new();
    let mut csv = String::new();
    for (label, a) in labels.iter().zip(mats) {
        pretty.push_str(&format!("{label}:\n{a}\n"));
        csv.push_str(&format!("# {label}\n{}", lt_to_csv(a)));
    }
    Rendered {
        pretty,
        json: Value::Array(mats.iter().map(to_json_value).collect()),
        csv,
        ok: true,
    }
}

pub fn integers(values: &[Integer]) -> Rendered {
    let strings: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    Rendered {
        pretty: format!("{}\n", strings.join(", ")),
        json: Value::Array(strings.iter().cloned().map(Value::String).collect()),
        csv: format!("{}\n", strings.join(",")),
        ok: true,
    }
}

pub fn detection(r: &DetectionReport, style: Style) -> Rendered {
    let lambda: Vec<String> = r.lambda.iter().map(rational_to_string).collect();
    let pairs = [
        ("verdict", r.verdict.to_string()),
        ("mode", r.mode.to_string()),
        ("lambda", lambda.join(" ")),
        ("first_failure", failure_text(&r.first_failure)),
    ];
    Rendered {
        pretty: format!(
            "verdict: {}\nmode: {}\nlambda: ({})\nfirst failure: {}\n",
            style.status(&r.verdict.to_string(), r.passed()),
            r.mode,
            lambda.join(", "),
            failure_text(&r.first_failure)
        ),
        json: to_value(r),
        csv: key_value_csv(&pairs),
        ok: r.verdict != vrmat_core::analysis::Verdict::Fail,
    }
}

pub fn fit(r: &FitReport, style: Style) -> Rendered {
    let opt = |x: &Option<vrmat_core::Rational>| x.as_ref().map_or("-".into(), rational_to_string);
    let pairs = [
        ("verdict", r.verdict.to_string()),
        ("alpha", opt(&r.alpha)),
        ("beta", opt(&r.beta)),
        ("first_failure", failure_text(&r.first_failure)),
    ];
    Rendered {
        pretty: format!(
            "verdict: {}\nalpha: {}\nbeta: {}\nfirst failure: {}\n",
            style.status(
                &r.verdict.to_string(),
                r.verdict == vrmat_core::analysis::Verdict::Pass
            ),
            opt(&r.alpha),
            opt(&r.beta),
            failure_text(&r.first_failure)
        ),
        json: to_value(r),
        csv: key_value_csv(&pairs),
        ok: r.verdict != vrmat_core::analysis::Verdict::Fail,
    }
}

pub fn admissible(r: &AdmissibleReport, style: Style) -> Rendered {
    let diag = r
        .diagonal_failure
        .map_or("none".into(), |i| format!("row {i}"));
    let inner = r.inner_product_failure.as_ref().map_or("none".into(), |f| {
        format!(
            "r_{} . r_{} = {}, expected {}",
            f.m, f.n, f.actual, f.expected
        )
    });
    let verdict = if r.pass { "pass" } else { "fail" };
    Rendered {
        pretty: format!(
            "admissible: {}\ndiagonal failure: {diag}\ninner product failure: {inner}\n",
            style.status(verdict, r.pass)
        ),
        json: to_value(r),
        csv: key_value_csv(&[
            ("pass", r.pass.to_string()),
            ("diagonal_failure", diag.clone()),
            ("inner_product_failure", inner.clone()),
        ]),
        ok: r.pass,
    }
}

pub fn transfer(t: &TransferSeq) -> Rendered {
    let mut pretty = String::new();
    let mut csv = String::new();
    for (k, p) in t.polys.iter().enumerate() {
        pretty.push_str(&format!("T_{k} = {p}\n"));
        let coeffs: Vec<String> = p.coeffs().iter().map(|c| c.to_string()).collect();
        csv.push_str(&format!("{}\n", coeffs.join(",")));
    }
    Rendered {
        pretty,
        json: to_value(t),
        csv,
        ok: true,
    }
}

pub fn comparison(c: &MntComparison, style: Style) -> Rendered {
    let mut pretty = format!("n = {}\n", c.n);
    let mut csv = String::from("variant,matches,mismatches,first_n,first_k,triangle,formula\n");
    for v in &c.variants {
        let first = v.first_mismatch.as_ref().map_or("none".into(), |m| {
            format!(
                "({}, {}): triangle {}, formula {}",
                m.n, m.k, m.triangle, m.formula
            )
        });
        pretty.push_str(&format!(
            "C(i+j,{}): {} ({} mismatches, first {first})\n",
            if v.variant == vrmat_core::ladder::MntVariant::TwoK {
                "2j"
            } else {
                "2j+1"
            },
            style.status(if v.matches { "match" } else { "mismatch" }, v.matches),
            v.mismatch_count
        ));
        let cells = match &v.first_mismatch {
            Some(m) => format!("{},{},{},{}", m.n, m.k, m.triangle, m.formula),
            None => ",,,".into(),
        };
        csv.push_str(&format!(
            "{},{},{},{cells}\n",
            v.variant, v.matches, v.mismatch_count
        ));
    }
    Rendered {
        pretty,
        json: to_value(c),
        csv,
        ok: true,
    }
}

pub fn identities(reports: &[IdentityReport], style: Style) -> Rendered {
    let mut pretty = String::new();
    let mut csv = String::from("identity,max_n,cells_checked,pass,first_failure\n");
    for r in reports {
        let failure = r.first_failure.as_ref().map_or("none".into(), |f| {
            format!("(n={}, k={}): {} vs {}", f.n, f.k, f.lhs, f.rhs)
        });
        pretty.push_str(&format!(
            "{}: {} ({} cells, 1 <= k <= n <= {}, failure: {failure})\n",
            r.identity,
            style.status(if r.pass { "pass" } else { "fail" }, r.pass),
            r.cells_checked,
            r.max_n
        ));
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            csv_field(&r.identity),
            r.max_n,
            r.cells_checked,
            r.pass,
            csv_field(&failure)
        ));
    }
    Rendered {
        pretty,
        json: to_value(&reports),
        csv,
        ok: reports.iter().all(|r| r.pass),
    }
}

pub fn conjecture(r: &ConjectureReport, style: Style) -> Rendered {
    let overall = match &r.overall {
        ConjectureVerdict::Supported => style.status("supported", true),
        ConjectureVerdict::Refuted { counterexample } => {
            format!("{} ({counterexample})", style.status("refuted", false))
        }
        ConjectureVerdict::Mixed { counterexample } => {
            format!("{} ({counterexample})", style.status("mixed", false))
        }
    };
    let mut pretty = format!("conjecture {}: {overall}\n", r.conjecture);
    let mut csv =
        String::from("instance,mode,verdict,lambda,first_failure,candidate,candidate_matches\n");
    for inst in &r.instances {
        let d = &inst.detection;
        let lambda: Vec<String> = d.lambda.iter().map(rational_to_string).collect();
        pretty.push_str(&format!(
            "\n{}\n  {} detection: {}, lambda ({}), failure {}\n",
            inst.label,
            d.mode,
            style.status(&d.verdict.to_string(), d.passed()),
            lambda.join(", "),
            failure_text(&d.first_failure)
        ));
        if let Some(s) = &inst.strict_detection {
            pretty.push_str(&format!(
                "  strict detection: {}, failure {}\n",
                style.status(&s.verdict.to_string(), s.passed()),
                failure_text(&s.first_failure)
            ));
        }
        for c in &inst.candidates {
            pretty.push_str(&format!(
                "  candidate {}: {}\n",
                c.name,
                if c.matches { "matches" } else { "no match" }
            ));
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_field(&inst.label),
                d.mode,
                d.verdict,
                lambda.join(" "),
                csv_field(&failure_text(&d.first_failure)),
                csv_field(&c.name),
                c.matches
            ));
        }
    }
    Rendered {
        pretty,
        json: to_value(r),
        csv,
        ok: true,
    }
}

pub fn minpoly(r: &MinpolyReport, style: Style) -> Rendered {
    let c = &r.check;
    let yes = |b: bool| if b { "yes" } else { "no" };
    let coeffs: Vec<String> = r.poly.coeffs().iter().map(|c| c.to_string()).collect();
    Rendered {
        pretty: format!(
            "g(x) = {} (mod {})\nre-verification: {}\n  g(A) = 0: {}\n  I..A^(d-1) independent: {}\n  divides charpoly: {}\n",
            r.poly,
            r.p,
            style.status(if c.passed() { "pass" } else { "fail" }, c.passed()),
            yes(c.annihilates),
            yes(c.lower_powers_independent),
            yes(c.divides_charpoly)
        ),
        json: to_value(r),
        csv: key_value_csv(&[
            ("p", r.p.to_string()),
            ("coefficients", coeffs.join(" ")),
            ("annihilates", c.annihilates.to_string()),
            ("lower_powers_independent", c.lower_powers_independent.to_string()),
            ("divides_charpoly", c.divides_charpoly.to_string()),
        ]),
        ok: c.passed(),
    }
}

pub fn selftest(criteria: &[Criterion], style: Style) -> Rendered {
    let mut pretty = String::new();
    let mut csv = String::from("id,name,passed,detail\n");
    for c in criteria {
        let line = c.to_string();
        let status = if c.passed { "PASS" } else { "FAIL" };
        pretty.push_str(&line.replacen(status, &style.status(status, c.passed), 1));
        pretty.push('\n');
        csv.push_str(&format!(
            "{},{},{},{}\n",
            c.id,
            csv_field(&c.name),
            c.passed,
            csv_field(&c.detail)
        ));
    }
    let passed = criteria.iter().filter(|c| c.passed).count();
    pretty.push_str(&format!("{passed}/{} criteria passed\n", criteria.len()));
    Rendered {
        pretty,
        json: to_value(&criteria),
        csv,
        ok: passed == criteria.len(),
    }
}
