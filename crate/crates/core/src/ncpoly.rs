//! Noncommutative polynomials `P(X_1, …, X_d) = Σ_w α_w X_{w_1}⋯X_{w_l}`,
//! their coefficient-modulus companion `|P|`, and evaluation on matrix tuples.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::MatrixRng;
use crate::linalg::ComplexMatrix;

pub const MAX_ARITY: usize = 8;
/// Caps for [`random_poly`].
pub const MAX_RANDOM_DEGREE: usize = 4;
pub const MAX_RANDOM_TERMS: usize = 20;

/// A monomial as 0-based variable indices; empty for the constant term.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn constant() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<&[u8]> for Word {
    fn from(v: &[u8]) -> Self {
        Self(v.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NcPolynomial {
    arity: usize,
    terms: BTreeMap<Word, Complex64>,
}

impl NcPolynomial {
    pub fn new(arity: usize) -> Result<Self> {
        if arity > MAX_ARITY {
            return Err(Error::InvalidParameter(format!("arity {arity} exceeds {MAX_ARITY}")));
        }
        Ok(Self {
            arity,
            terms: BTreeMap::new(),
        })
    }

    /// `X_{i}` as a polynomial of the given arity (0-based `i`).
    pub fn variable(arity: usize, i: usize) -> Result<Self> {
        let mut p = Self::new(arity)?;
        p.add_term(Word(vec![i as u8]), Complex64::new(1.0, 0.0))?;
        Ok(p)
    }

    /// Adds `coeff · word`, merging with an existing term and pruning zeros.
    pub fn add_term(&mut self, word: Word, coeff: Complex64) -> Result<()> {
        if let Some(&bad) = word.0.iter().find(|&&i| i as usize >= self.arity) {
            return Err(Error::InvalidParameter(format!(
                "variable x{} outside arity {}",
                bad as usize + 1,
                self.arity
            )));
        }
        if !(coeff.re.is_finite() && coeff.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        let entry = self.terms.entry(word).or_insert(Complex64::new(0.0, 0.0));
        *entry += coeff;
        self.terms.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn constant_term(&self) -> Complex64 {
        self.terms.get(&Word::constant()).copied().unwrap_or_default()
    }

    pub fn without_constant(&self) -> Self {
        let mut p = self.clone();
        p.terms.remove(&Word::constant());
        p
    }

    /// `|P|`: every coefficient replaced by its modulus.
    pub fn abs_poly(&self) -> Self {
        Self {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), Complex64::new(c.norm(), 0.0)))
                .collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::Arity {
                expected: self.arity,
                actual: other.arity,
            });
        }
        let mut p = self.clone();
        for (w, c) in &other.terms {
            p.add_term(w.clone(), *c)?;
        }
        Ok(p)
    }

    /// `Σ α_w X_{w_1}⋯X_{w_l}` with the constant term contributing `α·I_n`.
    ///
    /// Products are shared through a prefix cache: the terms are visited in
    /// lexicographic order, so each word reuses the product of its prefix.
    pub fn evaluate(&self, xs: &[ComplexMatrix], n: usize) -> Result<ComplexMatrix> {
        if xs.len() != self.arity {
            return Err(Error::Arity {
                expected: self.arity,
                actual: xs.len(),
            });
        }
        if let Some(x) = xs.iter().find(|x| x.n() != n) {
            return Err(Error::DimensionMismatch {
                left: n,
                right: x.n(),
            });
        }
        let mut out = ComplexMatrix::zeros(n);
        let mut cache: HashMap<&[u8], ComplexMatrix> = HashMap::new();
        for (word, &coeff) in &self.terms {
            if word.is_empty() {
                out.axpy(coeff, &ComplexMatrix::identity(n));
                continue;
            }
            let letters = word.0.as_slice();
            for l in 1..=letters.len() {
                if cache.contains_key(&letters[..l]) {
                    continue;
                }
                let next = &xs[letters[l - 1] as usize];
                let product = if l == 1 {
                    next.clone()
                } else {
                    cache[&letters[..l - 1]].matmul(next)
                };
                cache.insert(&letters[..l], product);
            }
            out.axpy(coeff, &cache[letters]);
        }
        Ok(out)
    }

    /// Parses `"2*x1*x2 - 3*x2 + 1"`; real coefficients, variables `x1..xd`,
    /// powers `x1^2`. The arity is the largest index used unless given.
    pub fn parse(text: &str, arity: Option<usize>) -> Result<Self> {
        let mut terms: Vec<(Word, f64)> = Vec::new();
        let mut max_var = 0usize;
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let mut sign = 1.0;
            if let Some(r) = rest.strip_prefix('+') {
                rest = r;
            } else if let Some(r) = rest.strip_prefix('-') {
                sign = -1.0;
                rest = r;
            } else if !terms.is_empty() {
                return Err(Error::Parse(format!("expected + or - before {rest:?}")));
            }
            let end = rest[1.min(rest.len())..]
                .find(['+', '-'])
                .map_or(rest.len(), |i| i + 1);
            // keep exponents like 1e-3 inside the term
            let end = extend_over_exponent(rest, end);
            let (term, tail) = rest.split_at(end);
            rest = tail;
            let mut coeff = sign;
            let mut word = Vec::new();
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {term:?}")));
                }
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, p)) => (i, p.parse::<usize>().map_err(|_| Error::Parse(format!("bad power in {factor:?}")))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| Error::Parse(format!("bad variable {factor:?}")))?;
                    if idx == 0 || idx > MAX_ARITY {
                        return Err(Error::Parse(format!("variable {factor:?} outside x1..x{MAX_ARITY}")));
                    }
                    max_var = max_var.max(idx);
                    word.extend(std::iter::repeat((idx - 1) as u8).take(pow));
                } else {
                    let c: f64 = factor.parse().map_err(|_| Error::Parse(format!("bad coefficient {factor:?}")))?;
                    coeff *= c;
                }
            }
            terms.push((Word(word), coeff));
        }
        let arity = match arity {
            Some(a) if a < max_var => {
                return Err(Error::Arity {
                    expected: a,
                    actual: max_var,
                })
            }
            Some(a) => a,
            None => max_var,
        };
        let mut p = Self::new(arity)?;
        for (w, c) in terms {
            p.add_term(w, Complex64::new(c, 0.0))?;
        }
        Ok(p)
    }
}

fn extend_over_exponent(s: &str, mut end: usize) -> usize {
    let bytes = s.as_bytes();
    while end < bytes.len() && end > 0 && matches!(bytes[end - 1], b'e' | b'E') {
        let before = &s[..end - 1];
        let numeric = before.chars().last().is_some_and(|c| c.is_ascii_digit() || c == '.');
        if !numeric {
            break;
        }
        end = s[end + 1..].find(['+', '-']).map_or(s.len(), |i| i + end + 1);
    }
    end
}

impl fmt::Display for NcPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (word, c)) in self.terms.iter().enumerate() {
            let real = c.im == 0.0;
            if real {
                let mag = c.re.abs();
                match (i, c.re < 0.0) {
                    (0, true) => write!(f, "-")?,
                    (0, false) => {}
                    (_, true) => write!(f, " - ")?,
                    (_, false) => write!(f, " + ")?,
                }
                if word.is_empty() || mag != 1.0 {
                    write!(f, "{mag}")?;
                    if !word.is_empty() {
                        write!(f, "*")?;
                    }
                }
            } else {
                if i > 0 {
                    write!(f, " + ")?;
                }
                write!(f, "({}{:+}i)", c.re, c.im)?;
                if !word.is_empty() {
                    write!(f, "*")?;
                }
            }
            for (k, &v) in word.0.iter().enumerate() {
                if k > 0 {
                    write!(f, "*")?;
                }
                write!(f, "x{}", v as usize + 1)?;
            }
        }
        Ok(())
    }
}

/// Random polynomial with complex coefficients `|α| ≤ 1` and words of mixed
/// lengths `0..=max_degree`; repeated words merge, so the result may have
/// fewer than `terms` terms.
pub fn random_poly(d: usize, max_degree: usize, terms: usize, seed: u64) -> Result<NcPolynomial> {
    if d == 0 || max_degree == 0 || terms == 0 {
        return Err(Error::InvalidParameter("random_poly parameters must be positive".into()));
    }
    if max_degree > MAX_RANDOM_DEGREE || terms > MAX_RANDOM_TERMS {
        return Err(Error::InvalidParameter(format!(
            "random_poly caps: degree <= {MAX_RANDOM_DEGREE}, terms <= {MAX_RANDOM_TERMS}"
        )));
    }
    let mut rng = MatrixRng::new(seed);
    let mut p = NcPolynomial::new(d)?;
    for _ in 0..terms {
        let len = rng.index(max_degree + 1);
        let word: Vec<u8> = (0..len).map(|_| rng.index(d) as u8).collect();
        let modulus = 1.0 - rng.uniform();
        let phase = std::f64::consts::TAU * rng.uniform();
        p.add_term(Word(word), Complex64::from_polar(modulus, phase))?;
    }
    Ok(p)
}
