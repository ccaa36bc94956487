//! Dense lower-triangular matrices over the integers.
//!
//! Storage is ragged: row `i` holds entries `(i, 0) ..= (i, i)`. Entries above
//! the diagonal are zero and never stored.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{mod_p, mul_mod, Integer};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LtMatrix {
    rows: Vec<Vec<Integer>>,
}

impl LtMatrix {
    pub fn new(rows: Vec<Vec<Integer>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Shape("order must be positive".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != i + 1 {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {}",
                    row.len(),
                    i + 1
                )));
            }
        }
        Ok(LtMatrix { rows })
    }

    /// Convenience constructor for literals; panics on a bad shape.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        LtMatrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Integer::from(x)).collect())
                .collect(),
        )
        .expect("ragged lower-triangular literal")
    }

    /// Builds an `order × order` matrix from `f(i, j)` for `i >= j`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> Integer) -> Self {
        assert!(order > 0, "order must be positive");
        LtMatrix {
            rows: (0..order)
                .map(|i| (0..=i).map(|j| f(i, j)).collect())
                .collect(),
        }
    }

    pub fn try_from_fn(
        order: usize,
        mut f: impl FnMut(usize, usize) -> Result<Integer>,
    ) -> Result<Self> {
        let mut rows = Vec::with_capacity(order);
        for i in 0..order {
            rows.push((0..=i).map(|j| f(i, j)).collect::<Result<Vec<_>>>()?);
        }
        LtMatrix::new(rows)
    }

    pub fn identity(order: usize) -> Self {
        LtMatrix::from_fn(order, |i, j| {
            if i == j {
                Integer::one()
            } else {
                Integer::zero()
            }
        })
    }

    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Integer>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Integer] {
        &self.rows[i]
    }

    /// Entry `(i, j)`; `None` only when `i` is out of range. Above-diagonal
    /// entries read as zero.
    pub fn get(&self, i: usize, j: usize) -> Option<Integer> {
        let row = self.rows.get(i)?;
        Some(row.get(j).cloned().unwrap_or_default())
    }

    /// Entry `(i, j)` for in-range `i >= j`.
    pub fn at(&self, i: usize, j: usize) -> &Integer {
        &self.rows[i][j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Integer {
        &mut self.rows[i][j]
    }

    pub fn first_column(&self) -> Vec<Integer> {
        self.rows.iter().map(|r| r[0].clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Integer> {
        self.rows.iter().skip(j).map(|r| r[j].clone()).collect()
    }

    pub fn diagonal(&self) -> Vec<Integer> {
        self.rows
            .iter()
            .enumerate()
            .map(|(i, r)| r[i].clone())
            .collect()
    }

    /// Leading `order × order` block.
    pub fn leading(&self, order: usize) -> LtMatrix {
        assert!(order > 0 && order <= self.order());
        LtMatrix {
            rows: self.rows[..order].to_vec(),
        }
    }

    /// Row-major iteration over stored cells as `(i, j, value)`.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, &Integer)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, v)| (i, j, v)))
    }

    pub fn is_identity(&self) -> bool {
        self.cells()
            .all(|(i, j, v)| if i == j { v.is_one() } else { v.is_zero() })
    }

    pub fn max_bits(&self) -> u64 {
        self.cells().map(|(_, _, v)| v.bits()).max().unwrap_or(0)
    }
}

pub fn lt_new(rows: Vec<Vec<Integer>>) -> Result<LtMatrix> {
    LtMatrix::new(rows)
}

pub fn lt_identity(order: usize) -> LtMatrix {
    LtMatrix::identity(order)
}

pub fn first_column(a: &LtMatrix) -> Vec<Integer> {
    a.first_column()
}

pub fn lt_eq(a: &LtMatrix, b: &LtMatrix) -> bool {
    a == b
}

pub fn lt_mul(a: &LtMatrix, b: &LtMatrix) -> Result<LtMatrix> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    Ok(LtMatrix::from_fn(a.order(), |i, j| {
        (j..=i).map(|l| &a.rows[i][l] * &b.rows[l][j]).sum()
    }))
}

/// `A^m` by repeated squaring; `A^0` is the identity.
pub fn lt_pow(a: &LtMatrix, m: u64) -> LtMatrix {
    let mut result = LtMatrix::identity(a.order());
    let mut base = a.clone();
    let mut m = m;
    while m > 0 {
        if m & 1 == 1 {
            result = lt_mul(&result, &base).expect("same order");
        }
        m >>= 1;
        if m > 0 {
            base = lt_mul(&base, &base).expect("same order");
        }
    }
    result
}

/// `[1] ⊕ A`.
pub fn direct_sum_1(a: &LtMatrix) -> LtMatrix {
    LtMatrix::from_fn(a.order() + 1, |i, j| match (i, j) {
        (0, 0) => Integer::one(),
        (_, 0) => Integer::zero(),
        _ => a.rows[i - 1][j - 1].clone(),
    })
}

/// `I_k ⊕ A`.
pub fn direct_sum_identity(k: usize, a: &LtMatrix) -> LtMatrix {
    LtMatrix::from_fn(k + a.order(), |i, j| {
        if i < k {
            if i == j {
                Integer::one()
            } else {
                Integer::zero()
            }
        } else if j < k {
            Integer::zero()
        } else {
            a.rows[i - k][j - k].clone()
        }
    })
}

/// Exact inverse by forward substitution. Every diagonal entry must be ±1.
pub fn lt_inverse(a: &LtMatrix) -> Result<LtMatrix> {
    for (i, d) in a.diagonal().iter().enumerate() {
        if !d.abs().is_one() {
            return Err(Error::NoIntegerInverse {
                index: i,
                entry: d.to_string(),
            });
        }
    }
    let n = a.order();
    let mut inv = LtMatrix::identity(n);
    // column by column: sum_{l=j}^{i} a_{i,l} x_{l,j} = [i = j]
    for j in 0..n {
        for i in j..n {
            let rhs: Integer = if i == j {
                Integer::one()
            } else {
                Integer::zero()
            };
            let acc: Integer = (j..i).map(|l| &a.rows[i][l] * &inv.rows[l][j]).sum();
            // dividing by ±1 is multiplying by it
            inv.rows[i][j] = (rhs - acc) * &a.rows[i][i];
        }
    }
    Ok(inv)
}

/// Entry-wise reduction into `[0, p)`.
pub fn lt_mod(a: &LtMatrix, p: u64) -> Vec<Vec<u64>> {
    a.rows
        .iter()
        .map(|r| r.iter().map(|x| mod_p(x, p)).collect())
        .collect()
}

/// Product of two ragged residue matrices over `F_p`.
pub fn lt_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    (0..a.len())
        .map(|i| {
            (0..=i)
                .map(|j| (j..=i).fold(0u64, |acc, l| (acc + mul_mod(a[i][l], b[l][j], p)) % p))
                .collect()
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixJson {
    order: usize,
    rows: Vec<Vec<String>>,
}

pub fn lt_to_json(a: &LtMatrix) -> String {
    serde_json::to_string(&to_json_value(a)).expect("matrix serializes")
}

pub fn to_json_value(a: &LtMatrix) -> serde_json::Value {
    serde_json::to_value(MatrixJson {
        order: a.order(),
        rows: a
            .rows
            .iter()
            .map(|r| r.iter().map(Integer::to_string).collect())
            .collect(),
    })
    .expect("matrix serializes")
}

pub fn lt_from_json(text: &str) -> Result<LtMatrix> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: MatrixJson = serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    from_raw(raw)
}

pub fn from_json_value(value: &serde_json::Value) -> Result<LtMatrix> {
    let raw: MatrixJson = serde_path_to_error::deserialize(value).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    from_raw(raw)
}

fn from_raw(raw: MatrixJson) -> Result<LtMatrix> {
    let schema = |path: String, message: String| Error::Schema { path, message };
    if raw.order == 0 {
        return Err(schema("order".into(), "order must be positive".into()));
    }
    if raw.rows.len() != raw.order {
        return Err(schema(
            "rows".into(),
            format!("expected {} rows, found {}", raw.order, raw.rows.len()),
        ));
    }
    let mut rows = Vec::with_capacity(raw.order);
    for (i, row) in raw.rows.iter().enumerate() {
        if row.len() != i + 1 {
            return Err(schema(
                format!("rows[{i}]"),
                format!("expected {} entries, found {}", i + 1, row.len()),
            ));
        }
        let parsed = row
            .iter()
            .enumerate()
            .map(|(j, s)| {
                s.parse::<Integer>().map_err(|_| {
                    schema(
                        format!("rows[{i}][{j}]"),
                        format!("not a decimal integer: {s:?}"),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(parsed);
    }
    LtMatrix::new(rows)
}

pub fn lt_to_csv(a: &LtMatrix) -> String {
    let mut out = String::new();
    for row in &a.rows {
        let line: Vec<String> = row.iter().map(Integer::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

impl Serialize for LtMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        to_json_value(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for LtMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        from_raw(raw).map_err(serde::de::Error::custom)
    }
}

/// Right-aligned table, zeros shown above the diagonal.
impl fmt::Display for LtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .cells()
            .map(|(_, _, v)| v.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.order() {
            let cells: Vec<String> = (0..self.order())
                .map(|j| {
                    let v = self.get(i, j).unwrap_or_default();
                    format!("{v:>width$}")
                })
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pascal3() -> LtMatrix {
        LtMatrix::from_i64_rows(&[&[1], &[1, 1], &[1, 2, 1], &[1, 3, 3, 1]])
    }

    fn example23() -> LtMatrix {
        LtMatrix::from_i64_rows(&[&[1], &[2, 1], &[4, 4, 1], &[8, 12, 6, 1]])
    }

    /// Textbook square-matrix product with explicit zeros.
    fn naive_mul(a: &LtMatrix, b: &LtMatrix) -> LtMatrix {
        let n = a.order();
        LtMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|l| a.get(i, l).unwrap() * b.get(l, j).unwrap())
                .sum()
        })
    }

    #[test]
    fn constructors() {
        assert_eq!(lt_identity(2), LtMatrix::from_i64_rows(&[&[1], &[0, 1]]));
        assert_eq!(
            first_column(&example23()),
            vec![1.into(), 2.into(), 4.into(), 8.into()]
        );
        assert!(lt_eq(&pascal3(), &pascal3()));
        assert!(lt_new(vec![vec![1.into()], vec![1.into()]]).is_err());
        assert!(lt_new(vec![]).is_err());
        assert_eq!(pascal3().get(0, 3), Some(Integer::zero()));
        assert_eq!(pascal3().get(4, 0), None);
    }

    #[test]
    fn products() {
        assert_eq!(lt_mul(&pascal3(), &lt_identity(4)).unwrap(), pascal3());
        let t3 = LtMatrix::from_i64_rows(&[&[1], &[2, 1], &[4, 2, 1], &[8, 4, 2, 1]]);
        let shifted = LtMatrix::from_i64_rows(&[&[1], &[0, 1], &[0, 2, 1], &[0, 4, 4, 1]]);
        assert_eq!(lt_mul(&t3, &shifted).unwrap(), example23());
        assert!(matches!(
            lt_mul(&pascal3(), &lt_identity(3)),
            Err(Error::OrderMismatch { left: 4, right: 3 })
        ));
    }

    #[test]
    fn powers() {
        assert_eq!(lt_pow(&pascal3(), 0), lt_identity(4));
        assert_eq!(lt_pow(&pascal3(), 2), example23());
    }

    #[test]
    fn direct_sums() {
        assert_eq!(direct_sum_1(&lt_identity(1)), lt_identity(2));
        let v2 = example23().leading(3);
        assert_eq!(
            direct_sum_1(&v2),
            LtMatrix::from_i64_rows(&[&[1], &[0, 1], &[0, 2, 1], &[0, 4, 4, 1]])
        );
        let first = direct_sum_1(&example23()).first_column();
        assert!(first[0].is_one() && first[1..].iter().all(Zero::is_zero));
        assert_eq!(direct_sum_identity(1, &v2), direct_sum_1(&v2));
        assert_eq!(direct_sum_identity(3, &lt_identity(1)), lt_identity(4));
    }

    #[test]
    fn inverses() {
        let a = LtMatrix::from_i64_rows(&[&[1], &[1, 1]]);
        assert_eq!(
            lt_inverse(&a).unwrap(),
            LtMatrix::from_i64_rows(&[&[1], &[-1, 1]])
        );
        let alt = LtMatrix::from_i64_rows(&[&[1], &[-1, 1], &[1, -2, 1], &[-1, 3, -3, 1]]);
        assert_eq!(lt_inverse(&pascal3()).unwrap(), alt);
        assert!(lt_mul(&pascal3(), &alt).unwrap().is_identity());
        assert_eq!(lt_inverse(&lt_identity(5)).unwrap(), lt_identity(5));
        let signed = LtMatrix::from_i64_rows(&[&[-1], &[3, 1], &[2, 5, -1]]);
        assert!(lt_mul(&signed, &lt_inverse(&signed).unwrap())
            .unwrap()
            .is_identity());
        assert!(matches!(
            lt_inverse(&LtMatrix::from_i64_rows(&[&[1], &[0, 2]])),
            Err(Error::NoIntegerInverse { index: 1, .. })
        ));
    }

    #[test]
    fn serialization() {
        let json = lt_to_json(&pascal3());
        assert_eq!(
            json,
            r#"{"order":4,"rows":[["1"],["1","1"],["1","2","1"],["1","3","3","1"]]}"#
        );
        assert_eq!(lt_from_json(&json).unwrap(), pascal3());
        assert_eq!(lt_to_csv(&lt_identity(2)), "1\n0,1\n");

        match lt_from_json(r#"{"order":2,"rows":[["1"],["1"]]}"#) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "rows[1]"),
            other => panic!("{other:?}"),
        }
        match lt_from_json(r#"{"order":2,"rows":[["1"],["1",2]]}"#) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "rows[1][1]"),
            other => panic!("{other:?}"),
        }
        match lt_from_json(r#"{"order":1,"rows":[["x"]]}"#) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "rows[0][0]"),
            other => panic!("{other:?}"),
        }
        assert!(lt_from_json(r#"{"order":3,"rows":[["1"]]}"#).is_err());
    }

    #[test]
    fn modular_product() {
        let p = 5;
        let a = lt_mod(&example23(), p);
        let b = lt_mod(&pascal3(), p);
        let expected = lt_mod(&lt_mul(&example23(), &pascal3()).unwrap(), p);
        assert_eq!(lt_mul_mod(&a, &b, p), expected);
    }

    fn lt_strategy(max_order: usize, bound: i64) -> impl Strategy<Value = LtMatrix> {
        (1..=max_order).prop_flat_map(move |order| {
            proptest::collection::vec(-bound..=bound, order * (order + 1) / 2).prop_map(
                move |flat| {
                    let mut it = flat.into_iter();
                    LtMatrix::from_fn(order, |_, _| Integer::from(it.next().unwrap()))
                },
            )
        })
    }

    fn same_order_triple() -> impl Strategy<Value = (LtMatrix, LtMatrix, LtMatrix)> {
        (1usize..=6).prop_flat_map(|order| {
            let one = move || {
                proptest::collection::vec(-20i64..=20, order * (order + 1) / 2).prop_map(
                    move |flat| {
                        let mut it = flat.into_iter();
                        LtMatrix::from_fn(order, |_, _| Integer::from(it.next().unwrap()))
                    },
                )
            };
            (one(), one(), one())
        })
    }

    fn unit_lower(max_order: usize) -> impl Strategy<Value = LtMatrix> {
        (
            lt_strategy(max_order, 50),
            proptest::collection::vec(any::<bool>(), max_order),
        )
            .prop_map(|(mut a, signs)| {
                for (i, &positive) in signs.iter().enumerate().take(a.order()) {
                    *a.at_mut(i, i) = if positive { 1.into() } else { (-1).into() };
                }
                a
            })
    }

    proptest! {
        #[test]
        fn mul_agrees_with_naive_and_stays_triangular((a, b, _) in same_order_triple()) {
            prop_assert_eq!(lt_mul(&a, &b).unwrap(), naive_mul(&a, &b));
        }

        #[test]
        fn associativity((a, b, c) in same_order_triple()) {
            let left = lt_mul(&lt_mul(&a, &b).unwrap(), &c).unwrap();
            let right = lt_mul(&a, &lt_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn power_law(a in lt_strategy(6, 5), m in 0u64..=4, k in 0u64..=4) {
            prop_assert_eq!(lt_pow(&a, m + k), lt_mul(&lt_pow(&a, m), &lt_pow(&a, k)).unwrap());
        }

        #[test]
        fn cube_is_triple_product(a in lt_strategy(6, 9)) {
            let naive = lt_mul(&lt_mul(&a, &a).unwrap(), &a).unwrap();
            prop_assert_eq!(lt_pow(&a, 3), naive);
        }

        #[test]
        fn inverse_is_involution(a in unit_lower(7)) {
            let inv = lt_inverse(&a).unwrap();
            prop_assert!(lt_mul(&a, &inv).unwrap().is_identity());
            prop_assert_eq!(lt_inverse(&inv).unwrap(), a);
        }

        #[test]
        fn json_round_trip(order in 1usize..8, seed in proptest::collection::vec(any::<u64>(), 36)) {
            // entries up to ~10^40 and signed
            let big = Integer::from(10u32).pow(40u32);
            let a = LtMatrix::from_fn(order, |i, j| {
                let s = Integer::from(seed[(i * (i + 1) / 2 + j) % seed.len()]);
                let v = (&s * &s * &s) % &big;
                if (i + j) % 2 == 0 { v } else { -v }
            });
            prop_assert_eq!(lt_from_json(&lt_to_json(&a)).unwrap(), a);
        }
    }
}
