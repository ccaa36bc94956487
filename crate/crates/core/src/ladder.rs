//! Ladder-network transfer polynomials and their coefficient triangles.
//!
//! The node signals of a uniform ladder satisfy
//! `a_{k+1} = (2 + x) a_k - a_{k-1}` with `a_1 = (1 + x) a_0`; normalizing
//! `a_0 = 1` makes `T_k = a_k` a degree-`k` polynomial in `x`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::{infer_lambda, verify_lambda, DetectionReport, Mode};
use crate::kernel::{binom, binom_signed, decimal, Integer, Poly};
use crate::ltmatrix::LtMatrix;
use crate::sequences::Seq;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TransferSeq {
    pub polys: Vec<Poly>,
}

impl TransferSeq {
    pub fn get(&self, k: usize) -> &Poly {
        &self.polys[k]
    }
}

/// `T_0 ..= T_n`.
pub fn transfer_polys(n: usize) -> TransferSeq {
    let two_plus_x = Poly::from_i64s(&[2, 1]);
    let mut polys = vec![Poly::one()];
    if n >= 1 {
        polys.push(Poly::from_i64s(&[1, 1]));
    }
    for k in 1..n {
        let next = &(&two_plus_x * &polys[k]) - &polys[k - 1];
        polys.push(next);
    }
    TransferSeq { polys }
}

/// Coefficient triangle of `T_0 ..= T_n`: row `i` is `T_i`.
pub fn mnt(n: usize) -> LtMatrix {
    let t = transfer_polys(n);
    LtMatrix::from_fn(n + 1, |i, j| t.get(i).coeff(j))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MntVariant {
    /// `C(i + j, 2j)`
    #[serde(rename = "2k")]
    TwoK,
    /// `C(i + j, 2j + 1)`
    #[serde(rename = "2k+1")]
    TwoKPlusOne,
}

impl fmt::Display for MntVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MntVariant::TwoK => "2k",
            MntVariant::TwoKPlusOne => "2k+1",
        })
    }
}

pub fn mnt_formula(n: usize, variant: MntVariant) -> LtMatrix {
    LtMatrix::from_fn(n + 1, |i, j| {
        let bottom = match variant {
            MntVariant::TwoK => 2 * j,
            MntVariant::TwoKPlusOne => 2 * j + 1,
        };
        binom((i + j) as u64, bottom as i64)
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub n: usize,
    pub k: usize,
    #[serde(with = "decimal")]
    pub triangle: Integer,
    #[serde(with = "decimal")]
    pub formula: Integer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantComparison {
    pub variant: MntVariant,
    pub matches: bool,
    pub first_mismatch: Option<Mismatch>,
    pub mismatch_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MntComparison {
    pub n: usize,
    pub variants: Vec<VariantComparison>,
}

impl MntComparison {
    pub fn variant(&self, v: MntVariant) -> &VariantComparison {
        self.variants
            .iter()
            .find(|c| c.variant == v)
            .expect("both variants compared")
    }
}

/// Compares the recurrence-derived triangle with both closed forms.
pub fn compare_mnt(n: usize) -> MntComparison {
    let triangle = mnt(n);
    let variants = [MntVariant::TwoK, MntVariant::TwoKPlusOne]
        .into_iter()
        .map(|variant| {
            let formula = mnt_formula(n, variant);
            let mismatches: Vec<Mismatch> = triangle
                .cells()
                .filter(|&(i, j, v)| v != formula.at(i, j))
                .map(|(i, j, v)| Mismatch {
                    n: i,
                    k: j,
                    triangle: v.clone(),
                    formula: formula.at(i, j).clone(),
                })
                .collect();
            VariantComparison {
                variant,
                matches: mismatches.is_empty(),
                mismatch_count: mismatches.len(),
                first_mismatch: mismatches.into_iter().next(),
            }
        })
        .collect();
    MntComparison { n, variants }
}

/// Entry `(i, j) = C(i + 2j, 3j + 1)`, including the zero at `(0, 0)`.
pub fn mnt2(n: usize) -> LtMatrix {
    LtMatrix::from_fn(n + 1, |i, j| binom((i + 2 * j) as u64, (3 * j + 1) as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    pub max_n: usize,
    pub cells_checked: usize,
    pub pass: bool,
    pub first_failure: Option<IdentityFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub n: usize,
    pub k: usize,
    #[serde(with = "decimal")]
    pub lhs: Integer,
    #[serde(with = "decimal")]
    pub rhs: Integer,
}

fn sweep(
    name: &str,
    max_n: usize,
    lhs: impl Fn(i64, i64) -> Integer,
    term: impl Fn(i64, i64, i64) -> Integer,
) -> IdentityReport {
    let mut cells_checked = 0;
    for n in 1..=max_n as i64 {
        for k in 1..=n {
            cells_checked += 1;
            let left = lhs(n, k);
            let right: Integer = (k - 1..n).map(|l| term(n, k, l)).sum();
            if left != right {
                return IdentityReport {
                    identity: name.into(),
                    max_n,
                    cells_checked,
                    pass: false,
                    first_failure: Some(IdentityFailure {
                        n: n as usize,
                        k: k as usize,
                        lhs: left,
                        rhs: right,
                    }),
                };
            }
        }
    }
    IdentityReport {
        identity: name.into(),
        max_n,
        cells_checked,
        pass: true,
        first_failure: None,
    }
}

/// `C(n+k, 2k+1) = Σ_{l=k-1}^{n-1} C(n-l, 1) C(l+k-1, 2k-1)` for `1 ≤ k ≤ n ≤ max_n`.
pub fn identity13_check(max_n: usize) -> IdentityReport {
    sweep(
        "C(n+k,2k+1) = sum C(n-l,1) C(l+k-1,2k-1)",
        max_n,
        |n, k| binom_signed(n + k, 2 * k + 1),
        |n, k, l| binom_signed(n - l, 1) * binom_signed(l + k - 1, 2 * k - 1),
    )
}

/// `C(n+2k, 3k+1) = Σ_{l=k-1}^{n-1} C(n-l+1, 2) C(l+2k-2, 3k-2)` for `1 ≤ k ≤ n ≤ max_n`.
pub fn identity15_check(max_n: usize) -> IdentityReport {
    sweep(
        "C(n+2k,3k+1) = sum C(n-l+1,2) C(l+2k-2,3k-2)",
        max_n,
        |n, k| binom_signed(n + 2 * k, 3 * k + 1),
        |n, k, l| binom_signed(n - l + 1, 2) * binom_signed(l + 2 * k - 2, 3 * k - 2),
    )
}

/// General-mode detection on `mnt(n)`; expected to recover `λ_j = j + 1`.
pub fn mnt_lambda_check(n: usize) -> DetectionReport {
    infer_lambda(&mnt(n), Mode::General)
}

/// `mnt2(n)` checked against `λ_j = C(j+2, 2)`. Inference is underdetermined
/// there because the corner entry is zero.
pub fn mnt2_lambda_check(n: usize) -> DetectionReport {
    verify_lambda(&mnt2(n), &Seq::Binom(2), false).expect("binom family is unbounded")
}

/// `T_n(1)` for each row, i.e. the row sums of `mnt(n)`.
pub fn row_sums(a: &LtMatrix) -> Vec<Integer> {
    a.rows().iter().map(|r| r.iter().sum()).collect()
}
