//! Vertically-recurrent matrices and their Toeplitz factorization.
//!
//! `V_n[Λ]` is the `(n+1) × (n+1)` lower-triangular matrix whose entries
//! satisfy the generalized hockey-stick recurrence
//!
//! ```text
//! a_{i,k} = Σ_{l=k-1}^{i-1} λ_{i-1-l} · a_{l,k-1}      (i ≥ k ≥ 1)
//! ```
//!
//! Column 0 is either `Λ` itself (strict, which needs `λ_0 = 1`) or an
//! arbitrary supplied column (general).
//!
//! Unrolling `V_n = T_n · ([1] ⊕ V_{n-1})` gives
//! `V_n = T̄_0 · T̄_1 ⋯ T̄_{n-1} · T̄_n` where `T̄_k = I_k ⊕ T_{n-k}`; the last
//! factor is `I_n ⊕ [λ_0]`, the identity in the strict case.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{binom, ipow, Integer};
use crate::ltmatrix::{direct_sum_1, direct_sum_identity, lt_identity, lt_mul, LtMatrix};
use crate::sequences::{conv_inverse_terms, Seq};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FirstColumn {
    /// Column 0 is `Λ`; requires `λ_0 = 1`.
    Strict,
    /// Column 0 is given explicitly and must have length `n + 1`.
    General(Vec<Integer>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VrmSpec {
    pub weights: Seq,
    pub first_col: FirstColumn,
}

impl VrmSpec {
    pub fn strict(weights: Seq) -> Self {
        VrmSpec {
            weights,
            first_col: FirstColumn::Strict,
        }
    }

    pub fn general(weights: Seq, column: Vec<Integer>) -> Self {
        VrmSpec {
            weights,
            first_col: FirstColumn::General(column),
        }
    }

    /// General spec whose first column is `λ_0..λ_n`, without the `λ_0 = 1`
    /// requirement. Coincides with [`VrmSpec::strict`] when `λ_0 = 1`.
    pub fn weights_as_column(weights: Seq, n: usize) -> Result<Self> {
        let column = weights.terms(n + 1)?;
        Ok(VrmSpec::general(weights, column))
    }

    fn column(&self, n: usize) -> Result<Vec<Integer>> {
        match &self.first_col {
            FirstColumn::Strict => {
                let column = self.weights.terms(n + 1)?;
                if !column[0].is_one() {
                    return Err(Error::StrictLeadingTerm(column[0].to_string()));
                }
                Ok(column)
            }
            FirstColumn::General(column) => {
                if column.len() != n + 1 {
                    return Err(Error::Shape(format!(
                        "general first column has {} entries, order is {}",
                        column.len(),
                        n + 1
                    )));
                }
                Ok(column.clone())
            }
        }
    }
}

/// Builds `V_n` column by column from the recurrence.
pub fn build_vrm(spec: &VrmSpec, n: usize) -> Result<LtMatrix> {
    let column = spec.column(n)?;
    let lambda = spec.weights.terms(n)?;
    Ok(fill_recurrence(column, &lambda))
}

/// Fills columns `1..` of a matrix with the given column 0; `lambda` must
/// hold at least `column.len() - 1` terms.
pub(crate) fn fill_recurrence(column: Vec<Integer>, lambda: &[Integer]) -> LtMatrix {
    let order = column.len();
    let mut a = LtMatrix::from_fn(order, |i, j| {
        if j == 0 {
            column[i].clone()
        } else {
            Integer::zero()
        }
    });
    for k in 1..order {
        for i in k..order {
            let v: Integer = (k - 1..i)
                .map(|l| &lambda[i - 1 - l] * a.at(l, k - 1))
                .sum();
            *a.at_mut(i, k) = v;
        }
    }
    a
}

/// `T_n[Λ]`, entry `(i, j) = λ_{i-j}`.
pub fn toeplitz(weights: &Seq, n: usize) -> Result<LtMatrix> {
    let lambda = weights.terms(n + 1)?;
    Ok(toeplitz_from_terms(&lambda))
}

fn toeplitz_from_terms(lambda: &[Integer]) -> LtMatrix {
    LtMatrix::from_fn(lambda.len(), |i, j| lambda[i - j].clone())
}

/// `T̄_k[Λ] = I_k ⊕ T_{n-k}[Λ]`, of order `n + 1`.
pub fn toeplitz_block(weights: &Seq, n: usize, k: usize) -> Result<LtMatrix> {
    if k > n {
        return Err(Error::OutOfRange(format!(
            "block index {k} exceeds n = {n}"
        )));
    }
    Ok(direct_sum_identity(k, &toeplitz(weights, n - k)?))
}

/// `(T_n, [1] ⊕ V_{n-1})` for a strict spec; the product is checked against `V_n`.
pub fn decompose_step(weights: &Seq, n: usize) -> Result<(LtMatrix, LtMatrix)> {
    decompose_step_with(&VrmSpec::strict(weights.clone()), n)
}

/// Same as [`decompose_step`] for a spec whose first column is `Λ` but
/// possibly `λ_0 ≠ 1` (the constant-sequence reading).
pub fn decompose_step_with(spec: &VrmSpec, n: usize) -> Result<(LtMatrix, LtMatrix)> {
    if n == 0 {
        return Err(Error::OutOfRange("decomposition needs n ≥ 1".into()));
    }
    let column = spec.column(n)?;
    if column != spec.weights.terms(n + 1)? {
        return Err(Error::FactorMismatch(
            "first column differs from the weights; T_n·([1]⊕V_{n-1}) cannot reproduce it".into(),
        ));
    }
    let v = build_vrm(spec, n)?;
    let smaller = match &spec.first_col {
        FirstColumn::Strict => VrmSpec::strict(spec.weights.clone()),
        FirstColumn::General(col) => VrmSpec::general(spec.weights.clone(), col[..n].to_vec()),
    };
    let t = toeplitz(&spec.weights, n)?;
    let shifted = direct_sum_1(&build_vrm(&smaller, n - 1)?);
    if lt_mul(&t, &shifted)? != v {
        return Err(Error::FactorMismatch(format!(
            "T_{n}·([1]⊕V_{}) ≠ V_{n}",
            n - 1
        )));
    }
    Ok((t, shifted))
}

/// Factors `T̄_0, …, T̄_{n-1}` whose left-to-right product is `V_n`.
pub fn decompose_chain(weights: &Seq, n: usize) -> Result<Vec<LtMatrix>> {
    let lead = weights.term(0)?;
    if !lead.is_one() {
        return Err(Error::StrictLeadingTerm(lead.to_string()));
    }
    (0..n).map(|k| toeplitz_block(weights, n, k)).collect()
}

/// Left-to-right product; the empty product is `[1]` unless an order is given.
pub fn chain_product(factors: &[LtMatrix], order: usize) -> Result<LtMatrix> {
    factors
        .iter()
        .try_fold(lt_identity(order), |acc, f| lt_mul(&acc, f))
}

/// `V_n^{-1} = T̄_n^{-1} ⋯ T̄_1^{-1} T̄_0^{-1}`, with each block inverse built
/// from the convolution inverse of `Λ`. Column 0 of `V_n` is taken to be `Λ`,
/// which needs `λ_0 = ±1`.
pub fn vrm_inverse(weights: &Seq, n: usize) -> Result<LtMatrix> {
    let lambda = weights.terms(n + 1)?;
    let mu = conv_inverse_terms(&lambda)?;
    let blocks_inv: Vec<LtMatrix> = (0..=n)
        .map(|k| direct_sum_identity(k, &toeplitz_from_terms(&mu[..=n - k])))
        .collect();
    let inv = chain_product(&blocks_inv.into_iter().rev().collect::<Vec<_>>(), n + 1)?;

    let v = fill_recurrence(lambda.clone(), &lambda);
    if !lt_mul(&v, &inv)?.is_identity() {
        return Err(Error::FactorMismatch("V·V⁻¹ ≠ I".into()));
    }
    Ok(inv)
}

/// Pascal matrix `P_n`, entries `C(i, j)`.
pub fn pascal(n: usize) -> LtMatrix {
    LtMatrix::from_fn(n + 1, |i, j| binom(i as u64, j as i64))
}

/// Pascal functional matrix `P_n[x]`, entries `C(i, j) x^{i-j}`.
pub fn pascal_func(n: usize, x: &Integer) -> LtMatrix {
    LtMatrix::from_fn(n + 1, |i, j| {
        binom(i as u64, j as i64) * ipow(x, (i - j) as u64)
    })
}

/// Pascal 1-eliminated functional matrix `P_{n,1}[x]`, entries `C(i+1, j+1) x^{i-j}`.
pub fn pascal_kelim(n: usize, x: &Integer) -> LtMatrix {
    LtMatrix::from_fn(n + 1, |i, j| {
        binom(i as u64 + 1, j as i64 + 1) * ipow(x, (i - j) as u64)
    })
}

/// `S_n[x]`, entries `x^{i-j}`.
pub fn s_matrix(n: usize, x: &Integer) -> LtMatrix {
    LtMatrix::from_fn(n + 1, |i, j| ipow(x, (i - j) as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltmatrix::lt_pow;

    fn m(rows: &[&[i64]]) -> LtMatrix {
        LtMatrix::from_i64_rows(rows)
    }

    fn ints(xs: &[i64]) -> Vec<Integer> {
        xs.iter().map(|&x| x.into()).collect()
    }

    fn families() -> Vec<Seq> {
        vec![
            Seq::Ones,
            Seq::Geom(2.into()),
            Seq::Geom(3.into()),
            Seq::Geom((-2).into()),
            Seq::nat(),
            Seq::Binom(2),
            Seq::Catalan,
        ]
    }

    #[test]
    fn builds_displayed_examples() {
        let p3 = m(&[&[1], &[1, 1], &[1, 2, 1], &[1, 3, 3, 1]]);
        let e23 = m(&[&[1], &[2, 1], &[4, 4, 1], &[8, 12, 6, 1]]);
        assert_eq!(build_vrm(&VrmSpec::strict(Seq::Ones), 3).unwrap(), p3);
        assert_eq!(
            build_vrm(&VrmSpec::strict(Seq::Geom(2.into())), 3).unwrap(),
            e23
        );
        assert_eq!(pascal(3), p3);
        assert_eq!(pascal_func(3, &2.into()), e23);
    }

    #[test]
    fn general_first_column() {
        let spec = VrmSpec::general(Seq::nat(), ints(&[0, 1, 2, 3]));
        let v = build_vrm(&spec, 3).unwrap();
        assert_eq!(v.column(1), ints(&[0, 1, 4]));
        assert!(matches!(
            build_vrm(&VrmSpec::general(Seq::nat(), ints(&[1, 1])), 3),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            build_vrm(&VrmSpec::strict(Seq::Const(2.into())), 2),
            Err(Error::StrictLeadingTerm(_))
        ));
        let list = VrmSpec::strict(Seq::list_i64(&[1, 1, 2]));
        assert!(build_vrm(&list, 2).is_ok());
        assert!(matches!(
            build_vrm(&list, 3),
            Err(Error::SequenceExhausted { .. })
        ));
    }

    #[test]
    fn toeplitz_shapes() {
        assert_eq!(
            toeplitz(&Seq::Geom(2.into()), 3).unwrap(),
            m(&[&[1], &[2, 1], &[4, 2, 1], &[8, 4, 2, 1]])
        );
        assert_eq!(
            toeplitz(&Seq::Ones, 2).unwrap(),
            m(&[&[1], &[1, 1], &[1, 1, 1]])
        );
        assert_eq!(
            toeplitz(&Seq::list_i64(&[1, 0, 0, 0]), 3).unwrap(),
            lt_identity(4)
        );
        for s in families() {
            assert_eq!(toeplitz_block(&s, 4, 4).unwrap(), lt_identity(5));
            assert_eq!(toeplitz_block(&s, 4, 0).unwrap(), toeplitz(&s, 4).unwrap());
        }
        assert_eq!(
            toeplitz_block(&Seq::Geom(2.into()), 2, 1).unwrap(),
            m(&[&[1], &[0, 1], &[0, 2, 1]])
        );
        assert!(toeplitz_block(&Seq::Ones, 2, 3).is_err());
    }

    #[test]
    fn decomposition_examples() {
        let (t, s) = decompose_step(&Seq::Geom(2.into()), 3).unwrap();
        assert_eq!(lt_mul(&t, &s).unwrap(), pascal_func(3, &2.into()));

        let (t, s) = decompose_step(&Seq::Ones, 1).unwrap();
        assert_eq!(t, m(&[&[1], &[1, 1]]));
        assert_eq!(s, lt_identity(2));

        let (t, s) = decompose_step(&Seq::nat(), 2).unwrap();
        assert_eq!(t, m(&[&[1], &[2, 1], &[3, 2, 1]]));
        assert_eq!(
            lt_mul(&t, &s).unwrap(),
            build_vrm(&VrmSpec::strict(Seq::nat()), 2).unwrap()
        );

        assert!(decompose_step(&Seq::Const(2.into()), 2).is_err());
        let spec = VrmSpec::weights_as_column(Seq::Const(2.into()), 4).unwrap();
        assert!(decompose_step_with(&spec, 4).is_ok());
        let off = VrmSpec::general(Seq::Ones, ints(&[0, 1, 2]));
        assert!(matches!(
            decompose_step_with(&off, 2),
            Err(Error::FactorMismatch(_))
        ));
    }

    #[test]
    fn chain_examples() {
        let f = decompose_chain(&Seq::Geom(2.into()), 2).unwrap();
        assert_eq!(f[0], m(&[&[1], &[2, 1], &[4, 2, 1]]));
        assert_eq!(f[1], m(&[&[1], &[0, 1], &[0, 2, 1]]));
        assert_eq!(
            chain_product(&f, 3).unwrap(),
            m(&[&[1], &[2, 1], &[4, 4, 1]])
        );

        let empty = decompose_chain(&Seq::Catalan, 0).unwrap();
        assert!(empty.is_empty());
        assert_eq!(chain_product(&empty, 1).unwrap(), lt_identity(1));

        let f = decompose_chain(&Seq::Ones, 3).unwrap();
        assert_eq!(chain_product(&f, 4).unwrap(), pascal(3));
    }

    #[test]
    fn chain_and_inverse_hold_for_families() {
        for s in families() {
            for n in 0..=12 {
                let v = build_vrm(&VrmSpec::strict(s.clone()), n).unwrap();
                let chain = decompose_chain(&s, n).unwrap();
                assert_eq!(chain_product(&chain, n + 1).unwrap(), v, "{s} n={n}");
                let inv = vrm_inverse(&s, n).unwrap();
                assert!(lt_mul(&v, &inv).unwrap().is_identity(), "{s} n={n}");
            }
        }
    }

    #[test]
    fn inverse_examples() {
        let alt = m(&[&[1], &[-1, 1], &[1, -2, 1], &[-1, 3, -3, 1]]);
        assert_eq!(vrm_inverse(&Seq::Ones, 3).unwrap(), alt);
        assert_eq!(vrm_inverse(&Seq::Ones, 0).unwrap(), lt_identity(1));
        assert!(matches!(
            vrm_inverse(&Seq::Const(3.into()), 2),
            Err(Error::NotInvertibleSequence(_))
        ));
        // λ_0 = -1: V has column Λ and diagonal (-1)^{i}
        let neg = Seq::list_i64(&[-1, 2, 0, 5, 1]);
        let inv = vrm_inverse(&neg, 4).unwrap();
        let v = build_vrm(&VrmSpec::weights_as_column(neg, 4).unwrap(), 4).unwrap();
        assert!(lt_mul(&v, &inv).unwrap().is_identity());
    }

    #[test]
    fn pascal_family_identities() {
        assert_eq!(s_matrix(2, &1.into()), m(&[&[1], &[1, 1], &[1, 1, 1]]));
        for x in -3i64..=3 {
            for n in 0..=10 {
                let x = Integer::from(x);
                let rhs = lt_mul(&pascal_kelim(n, &x), &pascal_func(n, &-&x)).unwrap();
                assert_eq!(s_matrix(n, &x), rhs, "x={x} n={n}");
            }
        }
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let (x, y) = (Integer::from(x), Integer::from(y));
                let lhs = lt_mul(&pascal_func(10, &x), &pascal_func(10, &y)).unwrap();
                assert_eq!(lhs, pascal_func(10, &(&x + &y)));
            }
        }
        assert_eq!(lt_pow(&pascal(5), 3), pascal_func(5, &3.into()));
    }

    #[test]
    fn hockey_stick() {
        let p = pascal(20);
        for n in 1..=20usize {
            for k in 1..=n {
                let sum: Integer = (k - 1..n).map(|l| binom(l as u64, k as i64 - 1)).sum();
                assert_eq!(p.at(n, k), &sum);
            }
        }
    }
}
