//! Structure detection and recurrence fitting on lower-triangular matrices.
//!
//! Detection runs the hockey-stick recurrence backwards: given a triangle,
//! recover the weights `Λ` (from column 0 in strict mode, or by solving the
//! column-1 equations in general mode) and then check every remaining cell.
//! Inference works over the rationals; a non-integer `Λ` is reported rather
//! than rejected.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernel::{decimal, ipow, rational_to_string, to_rational, Integer, Rational};
use crate::ltmatrix::{lt_mul, lt_pow, LtMatrix};
use crate::sequences::{geom_sum, Seq};
use crate::vrm::{build_vrm, pascal_func, VrmSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Underdetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Underdetermined => "underdetermined",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    General,
    Verify,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::General => "general",
            Mode::Verify => "verify",
        })
    }
}

/// A cell where the checked recurrence does not hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFailure {
    pub n: usize,
    pub k: usize,
    #[serde(with = "decimal::rational")]
    pub expected: Rational,
    #[serde(with = "decimal")]
    pub actual: Integer,
}

impl fmt::Display for CellFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}): expected {}, found {}",
            self.n,
            self.k,
            rational_to_string(&self.expected),
            self.actual
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DetectionReport {
    pub verdict: Verdict,
    #[serde(with = "decimal::rational_vec")]
    pub lambda: Vec<Rational>,
    pub first_failure: Option<CellFailure>,
    pub mode: Mode,
}

impl DetectionReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// True when every inferred weight is an integer.
    pub fn integral(&self) -> bool {
        self.lambda.iter().all(Rational::is_integer)
    }

    pub fn lambda_integers(&self) -> Option<Vec<Integer>> {
        self.lambda
            .iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect()
    }

    /// Whether the inferred weights are a prefix-equal copy of `seq`.
    pub fn lambda_matches(&self, seq: &Seq) -> bool {
        match seq.terms(self.lambda.len()) {
            Ok(terms) => terms
                .iter()
                .map(to_rational)
                .eq(self.lambda.iter().cloned()),
            Err(_) => false,
        }
    }
}

/// Expected value of cell `(i, k)`, `k >= 1`, under the recurrence. `None` if
/// it depends on a weight that is not known.
fn recurrence_value(a: &LtMatrix, lambda: &[Rational], i: usize, k: usize) -> Option<Rational> {
    let mut acc = Rational::zero();
    for l in k - 1..i {
        let entry = a.at(l, k - 1);
        if entry.is_zero() {
            continue;
        }
        let w = lambda.get(i - 1 - l)?;
        acc += w * to_rational(entry);
    }
    Some(acc)
}

fn check_cell(a: &LtMatrix, lambda: &[Rational], i: usize, k: usize) -> Option<CellFailure> {
    let expected = recurrence_value(a, lambda, i, k)?;
    let actual = a.at(i, k);
    (expected != to_rational(actual)).then(|| CellFailure {
        n: i,
        k,
        expected,
        actual: actual.clone(),
    })
}

/// First row-major cell with `k >= 1` violating the recurrence.
fn first_violation(a: &LtMatrix, lambda: &[Rational]) -> Option<CellFailure> {
    (1..a.order())
        .flat_map(|i| (1..=i).map(move |k| (i, k)))
        .find_map(|(i, k)| check_cell(a, lambda, i, k))
}

pub fn infer_lambda(a: &LtMatrix, mode: Mode) -> DetectionReport {
    match mode {
        Mode::Strict => infer_strict(a),
        Mode::General | Mode::Verify => infer_general(a),
    }
}

fn infer_strict(a: &LtMatrix) -> DetectionReport {
    let lambda: Vec<Rational> = a.first_column().iter().map(to_rational).collect();
    let first_failure = if !a.at(0, 0).is_one() {
        Some(CellFailure {
            n: 0,
            k: 0,
            expected: Rational::one(),
            actual: a.at(0, 0).clone(),
        })
    } else {
        first_violation(a, &lambda)
    };
    DetectionReport {
        verdict: if first_failure.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        lambda,
        first_failure,
        mode: Mode::Strict,
    }
}

fn infer_general(a: &LtMatrix) -> DetectionReport {
    let n = a.order() - 1;
    let column = a.first_column();
    // first nonzero entry of column 0 pivots the column-1 system
    let pivot = column.iter().position(|x| !x.is_zero());
    let mut lambda: Vec<Rational> = Vec::new();
    if let Some(z) = pivot {
        let lead = to_rational(&column[z]);
        for i in z + 1..=n {
            let partial: Rational = (z + 1..i)
                .map(|l| &lambda[i - 1 - l] * to_rational(&column[l]))
                .sum();
            lambda.push((to_rational(a.at(i, 1)) - partial) / &lead);
        }
    }
    let first_failure = first_violation(a, &lambda);
    let verdict = if first_failure.is_some() {
        Verdict::Fail
    } else if n == 0 || lambda.len() < n {
        Verdict::Underdetermined
    } else {
        Verdict::Pass
    };
    DetectionReport {
        verdict,
        lambda,
        first_failure,
        mode: Mode::General,
    }
}

/// Checks the recurrence everywhere with supplied weights. With
/// `first_col_is_lambda`, column 0 must also equal `λ_0..λ_n`.
pub fn verify_lambda(
    a: &LtMatrix,
    weights: &Seq,
    first_col_is_lambda: bool,
) -> Result<DetectionReport> {
    let n = a.order() - 1;
    let len = if first_col_is_lambda { n + 1 } else { n };
    let lambda: Vec<Rational> = weights.terms(len)?.iter().map(to_rational).collect();
    let mut first_failure = None;
    'rows: for i in 0..=n {
        for k in 0..=i {
            let failure = if k == 0 {
                if first_col_is_lambda && to_rational(a.at(i, 0)) != lambda[i] {
                    Some(CellFailure {
                        n: i,
                        k: 0,
                        expected: lambda[i].clone(),
                        actual: a.at(i, 0).clone(),
                    })
                } else {
                    None
                }
            } else {
                check_cell(a, &lambda, i, k)
            };
            if failure.is_some() {
                first_failure = failure;
                break 'rows;
            }
        }
    }
    Ok(DetectionReport {
        verdict: if first_failure.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        lambda,
        first_failure,
        mode: Mode::Verify,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitReport {
    pub verdict: Verdict,
    #[serde(with = "decimal::rational_opt")]
    pub alpha: Option<Rational>,
    #[serde(with = "decimal::rational_opt")]
    pub beta: Option<Rational>,
    pub first_failure: Option<CellFailure>,
}

impl FitReport {
    pub fn integral(&self) -> bool {
        self.alpha
            .iter()
            .chain(&self.beta)
            .all(Rational::is_integer)
    }

    /// Whether the fit is determined and equals `(alpha, beta)`.
    pub fn fits(&self, alpha: &Integer, beta: &Integer) -> bool {
        self.verdict == Verdict::Pass
            && self.alpha.as_ref() == Some(&to_rational(alpha))
            && self.beta.as_ref() == Some(&to_rational(beta))
    }
}

/// First row-major interior cell violating `a_{i,k} = α a_{i-1,k-1} + β a_{i-1,k}`.
pub fn check_two_term(a: &LtMatrix, alpha: &Rational, beta: &Rational) -> Option<CellFailure> {
    for i in 1..a.order() {
        for k in 1..=i {
            let up = a.get(i - 1, k).unwrap_or_default();
            let expected = alpha * to_rational(a.at(i - 1, k - 1)) + beta * to_rational(&up);
            if expected != to_rational(a.at(i, k)) {
                return Some(CellFailure {
                    n: i,
                    k,
                    expected,
                    actual: a.at(i, k).clone(),
                });
            }
        }
    }
    None
}

/// Fits `a_{n,k} = α a_{n-1,k-1} + β a_{n-1,k}`: `α` from cell (1,1), `β` from
/// cell (2,1), then checks every interior cell.
pub fn fit_pascal_recurrence(a: &LtMatrix) -> FitReport {
    let underdetermined = |alpha| FitReport {
        verdict: Verdict::Underdetermined,
        alpha,
        beta: None,
        first_failure: None,
    };
    if a.order() < 2 || a.at(0, 0).is_zero() {
        return underdetermined(None);
    }
    let alpha = to_rational(a.at(1, 1)) / to_rational(a.at(0, 0));
    if a.order() < 3 || a.at(1, 1).is_zero() {
        return underdetermined(Some(alpha));
    }
    let beta =
        (to_rational(a.at(2, 1)) - &alpha * to_rational(a.at(1, 0))) / to_rational(a.at(1, 1));
    let first_failure = check_two_term(a, &alpha, &beta);
    FitReport {
        verdict: if first_failure.is_some() {
            Verdict::Fail
        } else {
            Verdict::Pass
        },
        alpha: Some(alpha),
        beta: Some(beta),
        first_failure,
    }
}

/// Triangle with unit column 0 and `a_{n,k} = α a_{n-1,k-1} + β a_{n-1,k}`.
pub fn two_term_triangle(alpha: &Integer, beta: &Integer, n: usize) -> LtMatrix {
    let mut a = LtMatrix::from_fn(n + 1, |_, j| {
        if j == 0 {
            Integer::one()
        } else {
            Integer::zero()
        }
    });
    for i in 1..=n {
        for k in 1..=i {
            let up = a.get(i - 1, k).unwrap_or_default();
            *a.at_mut(i, k) = alpha * a.at(i - 1, k - 1) + beta * up;
        }
    }
    a
}

/// Builds `A(α, β)` and `B(α', β')`, forms `C = AB`, and checks that `C`
/// satisfies the two-term recurrence with `(αα', β + αβ')` and that column 0
/// of `C` holds the row sums of `A`.
pub fn lemma_product_check(
    alpha: &Integer,
    beta: &Integer,
    alpha2: &Integer,
    beta2: &Integer,
    n: usize,
) -> bool {
    let a = two_term_triangle(alpha, beta, n);
    let b = two_term_triangle(alpha2, beta2, n);
    let c = lt_mul(&a, &b).expect("same order");
    let alpha3 = alpha * alpha2;
    let beta3 = beta + alpha * beta2;

    let recurrence_ok = check_two_term(&c, &to_rational(&alpha3), &to_rational(&beta3)).is_none();
    let fit = fit_pascal_recurrence(&c);
    let fit_ok = match fit.verdict {
        Verdict::Underdetermined => true,
        _ => fit.fits(&alpha3, &beta3),
    };
    let sums_ok = (0..=n).all(|i| c.at(i, 0) == &a.row(i).iter().sum::<Integer>());
    recurrence_ok && fit_ok && sums_ok
}

/// First column of `V_n^m` and the general-mode detection report on `V_n^m`.
pub fn power_sequence(spec: &VrmSpec, n: usize, m: u64) -> Result<(Vec<Integer>, DetectionReport)> {
    let power = lt_pow(&build_vrm(spec, n)?, m);
    let report = infer_lambda(&power, Mode::General);
    Ok((power.first_column(), report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Case1Report {
    #[serde(with = "decimal")]
    pub lambda: Integer,
    pub n: usize,
    pub m: u64,
    /// `1 + λ + … + λ^{m-1}`
    #[serde(with = "decimal")]
    pub mu: Integer,
    #[serde(with = "decimal::vec")]
    pub first_column: Vec<Integer>,
    /// First column equals `λ^m μ^j`.
    pub first_column_ok: bool,
    pub fit: FitReport,
    /// The power satisfies the two-term recurrence with `(λ^m, μ)`.
    pub fit_ok: bool,
    /// Whether the row-dependent coefficient `μ^i` also fits; recorded only.
    pub literal_variant_holds: bool,
    pub literal_variant_failure: Option<CellFailure>,
}

impl Case1Report {
    pub fn passed(&self) -> bool {
        self.first_column_ok && self.fit_ok
    }
}

/// Powers of the constant-weight matrix whose column 0 is all `λ`.
pub fn case1_check(lambda: &Integer, n: usize, m: u64) -> Case1Report {
    let spec = VrmSpec::general(Seq::Const(lambda.clone()), vec![lambda.clone(); n + 1]);
    let power = lt_pow(&build_vrm(&spec, n).expect("column has n+1 entries"), m);
    let mu = geom_sum(lambda, m);
    let lead = ipow(lambda, m);

    let first_column = power.first_column();
    let first_column_ok = first_column
        .iter()
        .enumerate()
        .all(|(j, c)| c == &(&lead * ipow(&mu, j as u64)));

    let fit = fit_pascal_recurrence(&power);
    let fit_ok = check_two_term(&power, &to_rational(&lead), &to_rational(&mu)).is_none()
        && (fit.verdict == Verdict::Underdetermined || fit.fits(&lead, &mu));

    let mut literal_variant_failure = None;
    'rows: for i in 1..=n {
        let coeff = ipow(&mu, i as u64);
        for k in 1..=i {
            let up = power.get(i - 1, k).unwrap_or_default();
            let expected = &lead * power.at(i - 1, k - 1) + &coeff * up;
            if &expected != power.at(i, k) {
                literal_variant_failure = Some(CellFailure {
                    n: i,
                    k,
                    expected: to_rational(&expected),
                    actual: power.at(i, k).clone(),
                });
                break 'rows;
            }
        }
    }

    Case1Report {
        lambda: lambda.clone(),
        n,
        m,
        mu,
        first_column,
        first_column_ok,
        fit,
        fit_ok,
        literal_variant_holds: literal_variant_failure.is_none(),
        literal_variant_failure,
    }
}

/// `V_n[geom:λ]^m = P_n[mλ]`, and strict detection on the power recovers
/// `Λ = {(mλ)^j}`.
pub fn case2_check(lambda: &Integer, n: usize, m: u64) -> bool {
    let v = build_vrm(&VrmSpec::strict(Seq::Geom(lambda.clone())), n).expect("λ_0 = 1");
    let power = lt_pow(&v, m);
    let ratio = lambda * Integer::from(m);
    if power != pascal_func(n, &ratio) {
        return false;
    }
    let report = infer_lambda(&power, Mode::Strict);
    report.passed() && report.lambda_matches(&Seq::Geom(ratio))
}
