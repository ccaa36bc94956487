//! Associated sequences `Λ = {λ_n}` and their text form.
//!
//! Grammar (no whitespace):
//!
//! ```text
//! spec := "ones" | "nat" | "catalan" | "const:" INT | "geom:" INT
//!       | "binom:" INT | "list:" INT ("," INT)*
//! INT  := ["-"] DIGIT+
//! ```
//!
//! `nat` is shorthand for `binom:1`, i.e. `λ_n = n + 1`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernel::{binom_signed, catalan, ipow, Integer};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Seq {
    /// `λ_n = 1`
    Ones,
    /// `λ_n = c`
    Const(Integer),
    /// `λ_n = r^n`
    Geom(Integer),
    /// `λ_n = C(n + c, c)`
    Binom(i64),
    /// Catalan numbers.
    Catalan,
    /// Finite explicit list; reading past the end is an error.
    List(Vec<Integer>),
}

impl Seq {
    pub fn nat() -> Self {
        Seq::Binom(1)
    }

    pub fn list_i64(values: &[i64]) -> Self {
        Seq::List(values.iter().map(|&v| Integer::from(v)).collect())
    }

    pub fn term(&self, n: usize) -> Result<Integer> {
        Ok(match self {
            Seq::Ones => Integer::one(),
            Seq::Const(c) => c.clone(),
            Seq::Geom(r) => ipow(r, n as u64),
            Seq::Binom(c) => binom_signed(n as i64 + c, *c),
            Seq::Catalan => catalan(n as u64),
            Seq::List(values) => values.get(n).cloned().ok_or(Error::SequenceExhausted {
                index: n,
                len: values.len(),
            })?,
        })
    }

    /// `λ_0 .. λ_{len-1}`.
    pub fn terms(&self, len: usize) -> Result<Vec<Integer>> {
        (0..len).map(|n| self.term(n)).collect()
    }

    /// Number of available terms, `None` when unbounded.
    pub fn len_hint(&self) -> Option<usize> {
        match self {
            Seq::List(values) => Some(values.len()),
            _ => None,
        }
    }
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seq::Ones => write!(f, "ones"),
            Seq::Const(c) => write!(f, "const:{c}"),
            Seq::Geom(r) => write!(f, "geom:{r}"),
            Seq::Binom(c) => write!(f, "binom:{c}"),
            Seq::Catalan => write!(f, "catalan"),
            Seq::List(values) => {
                write!(f, "list:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

pub fn parse_seqspec(text: &str) -> Result<Seq> {
    Parser { text, pos: 0 }.spec()
}

impl FromStr for Seq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_seqspec(s)
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset,
            message: message.into(),
        })
    }

    fn spec(mut self) -> Result<Seq> {
        let (head, rest) = match self.text.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (self.text, None),
        };
        let seq = match (head, rest) {
            ("ones", None) => Seq::Ones,
            ("nat", None) => Seq::nat(),
            ("catalan", None) => Seq::Catalan,
            ("ones" | "nat" | "catalan", Some(_)) => {
                return self.err(head.len(), format!("`{head}` takes no argument"))
            }
            ("const" | "geom" | "binom" | "list", None) => {
                return self.err(head.len(), format!("`{head}` requires `:` and an argument"))
            }
            ("const" | "geom" | "binom", Some(_)) => {
                self.pos = head.len() + 1;
                let value = self.int()?;
                if self.pos < self.text.len() {
                    return self.err(self.pos, format!("`{head}` takes exactly one integer"));
                }
                match head {
                    "const" => Seq::Const(value),
                    "geom" => Seq::Geom(value),
                    _ => match i64::try_from(&value) {
                        Ok(c) => Seq::Binom(c),
                        Err(_) => return self.err(head.len() + 1, "binom parameter out of range"),
                    },
                }
            }
            ("list", Some(_)) => {
                self.pos = head.len() + 1;
                let mut values = vec![self.int()?];
                while self.pos < self.text.len() {
                    if self.text.as_bytes()[self.pos] != b',' {
                        return self.err(self.pos, "expected `,`");
                    }
                    self.pos += 1;
                    values.push(self.int()?);
                }
                Seq::List(values)
            }
            _ => return self.err(0, format!("unknown sequence family `{head}`")),
        };
        Ok(seq)
    }

    fn int(&mut self) -> Result<Integer> {
        let bytes = self.text.as_bytes();
        let start = self.pos;
        if bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return self.err(self.pos, "expected digit");
        }
        Ok(self.text[start..self.pos]
            .parse()
            .expect("validated decimal literal"))
    }
}

/// Convolution inverse `μ` with `Σ_j λ_j μ_{n-j} = [n = 0]` for `n < len`.
pub fn conv_inverse(s: &Seq, len: usize) -> Result<Vec<Integer>> {
    let lambda = s.terms(len)?;
    conv_inverse_terms(&lambda)
}

pub fn conv_inverse_terms(lambda: &[Integer]) -> Result<Vec<Integer>> {
    let Some(lead) = lambda.first() else {
        return Ok(Vec::new());
    };
    // λ_0 ∈ {±1} is its own inverse
    if !(lead.is_one() || (-lead).is_one()) {
        return Err(Error::NotInvertibleSequence(lead.to_string()));
    }
    let mut mu: Vec<Integer> = Vec::with_capacity(lambda.len());
    mu.push(lead.clone());
    for n in 1..lambda.len() {
        let acc: Integer = (1..=n).map(|j| &lambda[j] * &mu[n - j]).sum();
        mu.push(-(lead * acc));
    }
    Ok(mu)
}

/// `1 + λ + … + λ^{m-1}`, the division-free form of `(λ^m - 1)/(λ - 1)`.
pub fn geom_sum(lambda: &Integer, m: u64) -> Integer {
    let mut acc = Integer::zero();
    let mut power = Integer::one();
    for _ in 0..m {
        acc += &power;
        power *= lambda;
    }
    acc
}
