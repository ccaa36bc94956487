//! Admissible matrices: unit lower-triangular, with row inner products
//! `r_m · r_n = a_{m+n,0}`. They are determined by the sequence `s` of
//! subdiagonal increments, via
//! `a_{n,k} = a_{n-1,k-1} + s_k a_{n-1,k} + a_{n-1,k+1}`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernel::{decimal, Integer};
use crate::ltmatrix::LtMatrix;
use crate::sequences::Seq;

/// Builds the order `n + 1` admissible matrix of `s`. Row 0 is `(1)`;
/// neighbours outside the triangle count as zero.
pub fn build_admissible(s: &Seq, n: usize) -> Result<LtMatrix> {
    let steps = s.terms(n)?;
    let mut a = LtMatrix::identity(n + 1);
    for i in 1..=n {
        for k in 0..=i {
            let mut v = Integer::zero();
            if k >= 1 {
                v += a.at(i - 1, k - 1);
            }
            if let Some(s) = steps.get(k).filter(|_| k < i) {
                v += s * a.at(i - 1, k);
            }
            if k + 1 < i {
                v += a.at(i - 1, k + 1);
            }
            *a.at_mut(i, k) = v;
        }
    }
    Ok(a)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InnerProductFailure {
    pub m: usize,
    pub n: usize,
    #[serde(with = "decimal")]
    pub expected: Integer,
    #[serde(with = "decimal")]
    pub actual: Integer,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleReport {
    pub pass: bool,
    /// First row whose diagonal entry is not 1.
    pub diagonal_failure: Option<usize>,
    pub inner_product_failure: Option<InnerProductFailure>,
}

/// Checks the unit diagonal and `r_m · r_n = a_{m+n,0}` for all
/// `m ≤ n`, `m + n ≤ order - 1`.
pub fn check_admissible(a: &LtMatrix) -> AdmissibleReport {
    let diagonal_failure = (0..a.order()).find(|&i| !a.at(i, i).is_one());
    let top = a.order() - 1;
    let mut inner_product_failure = None;
    'outer: for m in 0..=top / 2 {
        for n in m..=top - m {
            // row m is the shorter one; entries past it are zero
            let dot: Integer = a.row(m).iter().zip(a.row(n)).map(|(x, y)| x * y).sum();
            let expected = a.at(m + n, 0);
            if &dot != expected {
                inner_product_failure = Some(InnerProductFailure {
                    m,
                    n,
                    expected: expected.clone(),
                    actual: dot,
                });
                break 'outer;
            }
        }
    }
    AdmissibleReport {
        pass: diagonal_failure.is_none() && inner_product_failure.is_none(),
        diagonal_failure,
        inner_product_failure,
    }
}

/// `s_0 = a_{1,0}`, `s_k = a_{k+1,k} - a_{k,k-1}`; returns `order - 1` terms.
pub fn sequence_from_admissible(a: &LtMatrix) -> Vec<Integer> {
    (0..a.order().saturating_sub(1))
        .map(|k| {
            let b = a.at(k + 1, k);
            if k == 0 {
                b.clone()
            } else {
                b - a.at(k, k - 1)
            }
        })
        .collect()
}

/// `a_{k+1,k} = s_0 + … + s_k` for every `k ≤ n - 1`.
pub fn subdiagonal_check(s: &Seq, n: usize) -> Result<bool> {
    let a = build_admissible(s, n)?;
    let mut partial = Integer::zero();
    for k in 0..n {
        partial += s.term(k)?;
        if a.at(k + 1, k) != &partial {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{infer_lambda, Mode};
    use crate::vrm::pascal;

    fn m(rows: &[&[i64]]) -> LtMatrix {
        LtMatrix::from_i64_rows(rows)
    }

    fn ints(xs: &[i64]) -> Vec<Integer> {
        xs.iter().map(|&x| x.into()).collect()
    }

    fn first_displayed_matrix() -> LtMatrix {
        m(&[&[1], &[1, 1], &[2, 2, 1], &[4, 5, 3, 1], &[9, 12, 9, 4, 1]])
    }

    fn second_displayed_matrix() -> LtMatrix {
        m(&[
            &[1],
            &[1, 1],
            &[2, 3, 1],
            &[5, 9, 5, 1],
            &[14, 28, 20, 7, 1],
        ])
    }

    #[test]
    fn builds_displayed_matrices() {
        assert_eq!(
            build_admissible(&Seq::Ones, 4).unwrap(),
            first_displayed_matrix()
        );
        assert_eq!(
            build_admissible(&Seq::list_i64(&[1, 2, 2, 2, 2]), 4).unwrap(),
            second_displayed_matrix()
        );
        assert_eq!(
            build_admissible(&Seq::Const(0.into()), 2).unwrap(),
            m(&[&[1], &[0, 1], &[1, 0, 1]])
        );
        assert_eq!(
            build_admissible(&Seq::Ones, 0).unwrap(),
            LtMatrix::identity(1)
        );
    }

    #[test]
    fn admissibility_checks() {
        let report = check_admissible(&first_displayed_matrix());
        assert!(report.pass);
        let r2: Integer = first_displayed_matrix().row(2).iter().map(|x| x * x).sum();
        assert_eq!(r2, 9.into());

        let report = check_admissible(&pascal(4));
        let f = report.inner_product_failure.unwrap();
        assert_eq!((f.m, f.n), (1, 1));
        assert_eq!((f.actual, f.expected), (2.into(), 1.into()));

        let report = check_admissible(&LtMatrix::identity(3));
        let f = report.inner_product_failure.unwrap();
        assert_eq!((f.m, f.n), (1, 1));
        assert!(check_admissible(&LtMatrix::identity(1)).pass);

        let report = check_admissible(&m(&[&[1], &[1, 2]]));
        assert_eq!(report.diagonal_failure, Some(1));
    }

    #[test]
    fn sequence_extraction() {
        assert_eq!(
            sequence_from_admissible(&first_displayed_matrix()),
            ints(&[1, 1, 1, 1])
        );
        assert_eq!(
            sequence_from_admissible(&second_displayed_matrix()),
            ints(&[1, 2, 2, 2])
        );
        let s = Seq::list_i64(&[3, 1, 4, 1]);
        assert_eq!(
            sequence_from_admissible(&build_admissible(&s, 4).unwrap()),
            ints(&[3, 1, 4, 1])
        );
    }

    #[test]
    fn subdiagonal_partial_sums() {
        assert!(subdiagonal_check(&Seq::Ones, 4).unwrap());
        assert!(subdiagonal_check(&Seq::list_i64(&[1, 2, 2, 2]), 4).unwrap());
        assert!(subdiagonal_check(&Seq::Const(0.into()), 3).unwrap());
        assert_eq!(
            build_admissible(&Seq::Const(0.into()), 3).unwrap().at(3, 2),
            &Integer::zero()
        );
    }

    #[test]
    fn every_family_is_admissible() {
        let fams = [
            Seq::Ones,
            Seq::Const(0.into()),
            Seq::Const((-2).into()),
            Seq::Geom(2.into()),
            Seq::nat(),
            Seq::Binom(3),
            Seq::Catalan,
        ];
        for s in fams {
            for n in 0..=10 {
                let a = build_admissible(&s, n).unwrap();
                assert!(check_admissible(&a).pass, "{s} n={n}");
                assert!(subdiagonal_check(&s, n).unwrap());
                assert_eq!(sequence_from_admissible(&a), s.terms(n).unwrap());
            }
        }
    }

    #[test]
    fn displayed_matrices_are_vertically_recurrent() {
        let report = infer_lambda(&first_displayed_matrix(), Mode::Strict);
        assert!(report.passed());
        assert!(report.lambda_matches(&Seq::list_i64(&[1, 1, 2, 4, 9])));
        // the second one recurs with the shifted Catalan numbers, not its first column
        let report = infer_lambda(&second_displayed_matrix(), Mode::Strict);
        let f = report.first_failure.unwrap();
        assert_eq!((f.n, f.k, f.actual), (2, 1, 3.into()));
        let report = infer_lambda(&second_displayed_matrix(), Mode::General);
        assert!(report.passed());
        assert!(report.lambda_matches(&Seq::list_i64(&[1, 2, 5, 14])));
    }
}
