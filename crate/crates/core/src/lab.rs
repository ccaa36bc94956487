//! Exploration tools: conjecture probes and minimal polynomials over `F_p`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::admissible::build_admissible;
use crate::analysis::{infer_lambda, DetectionReport, Mode};
use crate::error::{Error, Result};
use crate::kernel::{binom, decimal, ipow, modp_inverse, mul_mod, require_prime, Integer, Poly};
use crate::ltmatrix::{lt_mod, lt_mul_mod, LtMatrix};
use crate::sequences::Seq;
use crate::vrm::pascal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateFit {
    pub name: String,
    #[serde(with = "decimal::vec")]
    pub lambda: Vec<Integer>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceReport {
    pub label: String,
    pub detection: DetectionReport,
    /// Strict-mode detection on the same matrix, when it is informative.
    pub strict_detection: Option<DetectionReport>,
    pub candidates: Vec<CandidateFit>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ConjectureVerdict {
    Supported,
    Refuted { counterexample: String },
    Mixed { counterexample: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub conjecture: u8,
    pub grid: Vec<String>,
    pub instances: Vec<InstanceReport>,
    pub overall: ConjectureVerdict,
}

impl ConjectureReport {
    fn from_instances(conjecture: u8, grid: Vec<String>, instances: Vec<InstanceReport>) -> Self {
        let failing: Vec<&InstanceReport> =
            instances.iter().filter(|i| !i.detection.passed()).collect();
        let overall = match failing.first() {
            None => ConjectureVerdict::Supported,
            Some(first) => {
                let counterexample = match &first.detection.first_failure {
                    Some(cell) => format!("{} at {}", first.label, cell),
                    None => format!("{} ({})", first.label, first.detection.verdict),
                };
                if failing.len() == instances.len() {
                    ConjectureVerdict::Refuted { counterexample }
                } else {
                    ConjectureVerdict::Mixed { counterexample }
                }
            }
        };
        ConjectureReport {
            conjecture,
            grid,
            instances,
            overall,
        }
    }

    pub fn instance(&self, label_prefix: &str) -> Option<&InstanceReport> {
        self.instances
            .iter()
            .find(|i| i.label.starts_with(label_prefix))
    }
}

/// Triangle with unit column 0 and `a_{i,k} = α a_{i-1,k-1} + α_{i-1} a_{i-1,k}`.
pub fn row_weighted_triangle(alpha: &Integer, alpha_seq: &Seq, n: usize) -> Result<LtMatrix> {
    let weights = alpha_seq.terms(n)?;
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
            *a.at_mut(i, k) = alpha * a.at(i - 1, k - 1) + &weights[i - 1] * up;
        }
    }
    Ok(a)
}

fn product(xs: &[Integer]) -> Integer {
    xs.iter().fold(Integer::one(), |acc, x| acc * x)
}

fn conjecture1_instance(alpha: &Integer, alpha_seq: &Seq, n: usize) -> Result<InstanceReport> {
    let a = row_weighted_triangle(alpha, alpha_seq, n)?;
    let detection = infer_lambda(&a, Mode::General);
    let len = detection.lambda.len();
    let inferred = detection.lambda_integers();

    let mut candidates = Vec::new();
    let mut push = |name: &str, lambda: Vec<Integer>| {
        let matches = inferred.as_ref() == Some(&lambda);
        candidates.push(CandidateFit {
            name: name.into(),
            lambda,
            matches,
        });
    };
    let w = alpha_seq.terms(n)?;
    push(
        "prod_{j=1}^{i} alpha_j",
        (0..len).map(|i| product(&w[1..=i])).collect(),
    );
    push(
        "prod_{j=0}^{i-1} alpha_j",
        (0..len).map(|i| product(&w[..i])).collect(),
    );
    push("alpha^i", (0..len).map(|i| ipow(alpha, i as u64)).collect());
    // the order-dependent reading needs α_n as well
    if let Ok(wide) = alpha_seq.terms(n + 1) {
        push(
            "lambda_0=1, prod_{j=i}^{n} alpha_j",
            (0..len)
                .map(|i| {
                    if i == 0 {
                        Integer::one()
                    } else {
                        product(&wide[i..=n])
                    }
                })
                .collect(),
        );
    }

    Ok(InstanceReport {
        label: format!("alpha={alpha}, alpha_seq={alpha_seq}, n={n}"),
        detection,
        strict_detection: None,
        candidates,
    })
}

/// Builds the row-weighted triangle, infers its weights in general mode and
/// compares them with several product formulas.
pub fn conjecture1_explore(alpha: &Integer, alpha_seq: &Seq, n: usize) -> Result<ConjectureReport> {
    conjecture1_grid(
        std::slice::from_ref(alpha),
        std::slice::from_ref(alpha_seq),
        n,
    )
}

pub fn conjecture1_grid(alphas: &[Integer], seqs: &[Seq], n: usize) -> Result<ConjectureReport> {
    if n < 3 {
        return Err(Error::OutOfRange(format!(
            "conjecture 1 needs n ≥ 3, got {n}"
        )));
    }
    let mut instances = Vec::new();
    let mut grid = Vec::new();
    for alpha in alphas {
        for s in seqs {
            grid.push(format!("alpha={alpha}, alpha_seq={s}, n={n}"));
            instances.push(conjecture1_instance(alpha, s, n)?);
        }
    }
    Ok(ConjectureReport::from_instances(1, grid, instances))
}

/// Ballot numbers `C(i+j, j)(i-j+1)/(i+1)` as a lower triangle.
pub fn ballot_triangle(n: usize) -> LtMatrix {
    LtMatrix::from_fn(n + 1, |i, j| {
        binom((i + j) as u64, j as i64) * (i - j + 1) / (i + 1)
    })
}

/// Admissible matrix of `s = (1, 2, 2, …)`, whose first column is Catalan.
pub fn catalan_admissible(n: usize) -> LtMatrix {
    let s: Vec<Integer> = (0..n.max(1))
        .map(|k| Integer::from(if k == 0 { 1 } else { 2 }))
        .collect();
    build_admissible(&Seq::List(s), n).expect("list covers n terms")
}

/// Two readings of "the Catalan array", both probed in general mode.
pub fn conjecture2_explore(n: usize) -> Result<ConjectureReport> {
    if n < 4 {
        return Err(Error::OutOfRange(format!(
            "conjecture 2 needs n ≥ 4, got {n}"
        )));
    }
    let ballot = ballot_triangle(n);
    let admissible = catalan_admissible(n);

    let catalan_shifted: Vec<Integer> = (1..=n as u64).map(crate::kernel::catalan).collect();
    let catalan_fit = |report: &DetectionReport| CandidateFit {
        name: "lambda_i = Catalan(i+1)".into(),
        matches: report.lambda_integers().as_ref() == Some(&catalan_shifted),
        lambda: catalan_shifted.clone(),
    };

    let a_detection = infer_lambda(&ballot, Mode::General);
    let b_detection = infer_lambda(&admissible, Mode::General);
    let instances = vec![
        InstanceReport {
            label: format!("(a) ballot triangle, n={n}"),
            candidates: vec![catalan_fit(&a_detection)],
            strict_detection: Some(infer_lambda(&ballot, Mode::Strict)),
            detection: a_detection,
        },
        InstanceReport {
            label: format!("(b) admissible s=(1,2,2,...), n={n}"),
            candidates: vec![catalan_fit(&b_detection)],
            strict_detection: Some(infer_lambda(&admissible, Mode::Strict)),
            detection: b_detection,
        },
    ];
    let grid = instances.iter().map(|i| i.label.clone()).collect();
    Ok(ConjectureReport::from_instances(2, grid, instances))
}

/// Ragged residue matrix flattened row-major.
fn flatten(rows: &[Vec<u64>]) -> Vec<u64> {
    rows.iter().flatten().copied().collect()
}

fn identity_mod(order: usize) -> Vec<Vec<u64>> {
    (0..order)
        .map(|i| (0..=i).map(|j| u64::from(i == j)).collect())
        .collect()
}

/// Monic minimal polynomial of `A` over `F_p`, from the first linear
/// dependency among `I, A, A², …`. Coefficients are residues in `[0, p)`.
pub fn minpoly_mod_p(a: &LtMatrix, p: u64) -> Result<Poly> {
    require_prime(p)?;
    let base = lt_mod(a, p);
    let order = a.order();

    // basis rows: (vector with pivot entry 1, pivot index, combination over powers)
    let mut basis: Vec<(Vec<u64>, usize, Vec<u64>)> = Vec::new();
    let mut power = identity_mod(order);
    for d in 0..=order {
        let mut v = flatten(&power);
        let mut comb = vec![0u64; d + 1];
        comb[d] = 1;
        for (b, pivot, bcomb) in &basis {
            let f = v[*pivot];
            if f == 0 {
                continue;
            }
            let neg = p - f;
            for (x, y) in v.iter_mut().zip(b) {
                *x = (*x + mul_mod(neg, *y, p)) % p;
            }
            for (x, y) in comb.iter_mut().zip(bcomb) {
                *x = (*x + mul_mod(neg, *y, p)) % p;
            }
        }
        match v.iter().position(|&x| x != 0) {
            None => {
                return Ok(Poly::new(comb.into_iter().map(Integer::from).collect()));
            }
            Some(pivot) => {
                let inv = modp_inverse(v[pivot], p)?;
                for x in v.iter_mut() {
                    *x = mul_mod(*x, inv, p);
                }
                for x in comb.iter_mut() {
                    *x = mul_mod(*x, inv, p);
                }
                basis.push((v, pivot, comb));
            }
        }
        power = lt_mul_mod(&power, &base, p);
    }
    unreachable!("Cayley-Hamilton bounds the degree by the order")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinpolyReport {
    pub p: u64,
    pub poly: Poly,
    pub check: MinpolyCheck,
}

/// Minimal polynomial together with its independent re-verification.
pub fn minpoly_report(a: &LtMatrix, p: u64) -> Result<MinpolyReport> {
    let poly = minpoly_mod_p(a, p)?;
    let check = verify_minpoly(a, p, &poly)?;
    Ok(MinpolyReport { p, poly, check })
}

/// `g(A) mod p` by Horner's rule.
pub fn eval_poly_mod(g: &Poly, a: &LtMatrix, p: u64) -> Vec<Vec<u64>> {
    let base = lt_mod(a, p);
    let order = a.order();
    let mut acc: Vec<Vec<u64>> = (0..order).map(|i| vec![0; i + 1]).collect();
    for c in g.coeffs().iter().rev() {
        acc = lt_mul_mod(&acc, &base, p);
        let c = crate::kernel::mod_p(c, p);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = (row[i] + c) % p;
        }
    }
    acc
}

/// Rank over `F_p` of a list of vectors, by plain Gaussian elimination.
pub fn rank_mod_p(vectors: &[Vec<u64>], p: u64) -> usize {
    let mut rows: Vec<Vec<u64>> = vectors.to_vec();
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = modp_inverse(rows[rank][col], p).expect("nonzero pivot");
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| mul_mod(x, inv, p)).collect();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = p - row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + mul_mod(f, *y, p)) % p;
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinpolyCheck {
    pub annihilates: bool,
    pub lower_powers_independent: bool,
    pub divides_charpoly: bool,
}

impl MinpolyCheck {
    pub fn passed(&self) -> bool {
        self.annihilates && self.lower_powers_independent && self.divides_charpoly
    }
}

/// Re-verifies a claimed minimal polynomial without reusing the dependency
/// search: `g(A) ≡ 0`, `I..A^{d-1}` independent, and `g | Π (x - a_ii)`.
pub fn verify_minpoly(a: &LtMatrix, p: u64, g: &Poly) -> Result<MinpolyCheck> {
    require_prime(p)?;
    let annihilates = flatten(&eval_poly_mod(g, a, p)).iter().all(|&x| x == 0);

    let degree = g.degree().unwrap_or(0);
    let base = lt_mod(a, p);
    let mut power = identity_mod(a.order());
    let mut powers = Vec::with_capacity(degree);
    for _ in 0..degree {
        powers.push(flatten(&power));
        power = lt_mul_mod(&power, &base, p);
    }
    let lower_powers_independent = rank_mod_p(&powers, p) == degree;

    let charpoly = a.diagonal().iter().fold(vec![1u64], |acc, d| {
        // multiply by (x - d)
        let d = crate::kernel::mod_p(d, p);
        let mut next = vec![0u64; acc.len() + 1];
        for (k, c) in acc.iter().enumerate() {
            next[k + 1] = (next[k + 1] + c) % p;
            next[k] = (next[k] + mul_mod(*c, p - d % p, p)) % p;
        }
        next
    });
    let divisor: Vec<u64> = g
        .coeffs()
        .iter()
        .map(|c| crate::kernel::mod_p(c, p))
        .collect();
    let divides_charpoly = poly_rem_mod(&charpoly, &divisor, p)?
        .iter()
        .all(|&x| x == 0);

    Ok(MinpolyCheck {
        annihilates,
        lower_powers_independent,
        divides_charpoly,
    })
}

/// Remainder of `num` by `den` over `F_p`, ascending coefficients.
pub fn poly_rem_mod(num: &[u64], den: &[u64], p: u64) -> Result<Vec<u64>> {
    let mut den = den.to_vec();
    while den.last() == Some(&0) {
        den.pop();
    }
    let Some(&lead) = den.last() else {
        return Err(Error::OutOfRange("division by the zero polynomial".into()));
    };
    let inv = modp_inverse(lead, p)?;
    let mut rem = num.to_vec();
    while rem.len() >= den.len() {
        let top = *rem.last().expect("nonempty");
        if top != 0 {
            let f = mul_mod(top, inv, p);
            let shift = rem.len() - den.len();
            for (k, d) in den.iter().enumerate() {
                rem[shift + k] = (rem[shift + k] + mul_mod(p - f, *d, p)) % p;
            }
        }
        rem.pop();
    }
    Ok(rem)
}

/// `P_n^p ≡ I (mod p)`.
pub fn pascal_order_mod_p_check(n: usize, p: u64) -> Result<bool> {
    require_prime(p)?;
    let base = lt_mod(&pascal(n), p);
    let mut result = identity_mod(n + 1);
    let mut sq = base;
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            result = lt_mul_mod(&result, &sq, p);
        }
        e >>= 1;
        if e > 0 {
            sq = lt_mul_mod(&sq, &sq, p);
        }
    }
    Ok(result == identity_mod(n + 1))
}
