//! Bivariate polynomials in `(mu, t)` with exact rational coefficients, and
//! exact interpolation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::solve_rational;
use crate::serde_util::{big_to_string, parse_big};

/// Exponent pair `(e_mu, e_t)`.
pub type Exponents = (u32, u32);

#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<Exponents, BigRational>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut p = Self::zero();
        p.add_term((0, 0), c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Exponents, BigRational)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponents, c: BigRational) {
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: Exponents) -> BigRational {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    pub fn eval(&self, mu: &BigInt, t: &BigInt) -> BigRational {
        let mu = BigRational::from_integer(mu.clone());
        let t = BigRational::from_integer(t.clone());
        self.terms.iter().fold(BigRational::zero(), |acc, (&(a, b), c)| {
            acc + c * Pow::pow(&mu, a) * Pow::pow(&t, b)
        })
    }

    pub fn eval_i64(&self, mu: i64, t: i64) -> BigRational {
        self.eval(&BigInt::from(mu), &BigInt::from(t))
    }

    /// Rows `[numerator, denominator, e_mu, e_t]` as decimal strings / integers.
    pub fn to_rows(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(&(a, b), c)| PolyTerm(big_to_string(c.numer()), big_to_string(c.denom()), a, b))
            .collect()
    }

    pub fn from_rows(rows: &[PolyTerm]) -> Result<Self> {
        let mut p = Self::zero();
        for PolyTerm(n, d, a, b) in rows {
            let n = parse_big(n).map_err(Error::InvalidInput)?;
            let d = parse_big(d).map_err(Error::InvalidInput)?;
            if d.is_zero() {
                return Err(Error::InvalidInput("zero denominator".into()));
            }
            p.add_term((*a, *b), BigRational::new(n, d));
        }
        Ok(p)
    }
}

/// One serialized term: numerator, denominator, `e_mu`, `e_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTerm(pub String, pub String, pub u32, pub u32);

impl Serialize for BivariatePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BivariatePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<PolyTerm>::deserialize(d)?;
        BivariatePoly::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BivariatePoly({self})")
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest degree first.
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mut factors = Vec::new();
            if !mag.is_one() || (a == 0 && b == 0) {
                factors.push(mag.to_string());
            }
            for (name, e) in [("mu", a), ("t", b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Monomials of total degree `<= degree`, graded, with powers of `t` before
/// powers of `mu` inside a degree.
pub fn monomials_up_to(degree: u32) -> Vec<Exponents> {
    let mut out = Vec::new();
    for d in 0..=degree {
        for a in 0..=d {
            out.push((a, d - a));
        }
    }
    out
}

/// Monomials `t^k` for `k <= degree`.
pub fn t_monomials_up_to(degree: u32) -> Vec<Exponents> {
    (0..=degree).map(|k| (0, k)).collect()
}

/// A sample `(mu, t) -> value` used for interpolation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub mu: BigInt,
    pub t: BigInt,
    pub value: BigInt,
}

impl Sample {
    pub fn new(mu: i64, t: i64, value: impl Into<BigInt>) -> Self {
        Sample {
            mu: BigInt::from(mu),
            t: BigInt::from(t),
            value: value.into(),
        }
    }
}

/// How a rank-deficient interpolation system is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Underdetermined {
    Reject,
    /// Free coefficients are set to zero; earlier monomials are preferred.
    Canonical,
}

/// Exact polynomial through all samples using the given monomial basis.
pub fn interpolate(
    samples: &[Sample],
    monomials: &[Exponents],
    mode: Underdetermined,
) -> Result<BivariatePoly> {
    let matrix: Vec<Vec<BigRational>> = samples
        .iter()
        .map(|s| {
            let mu = BigRational::from_integer(s.mu.clone());
            let t = BigRational::from_integer(s.t.clone());
            monomials
                .iter()
                .map(|&(a, b)| Pow::pow(&mu, a) * Pow::pow(&t, b))
                .collect()
        })
        .collect();
    let rhs: Vec<BigRational> = samples
        .iter()
        .map(|s| BigRational::from_integer(s.value.clone()))
        .collect();
    let sol = solve_rational(&matrix, &rhs);
    let degree = monomials.iter().map(|(a, b)| a + b).max().unwrap_or(0);
    let Some(coeffs) = sol.solution.clone() else {
        return Err(Error::InconsistentInterpolation { degree });
    };
    if mode == Underdetermined::Reject && sol.rank < monomials.len() {
        return Err(Error::SingularInterpolation {
            points: samples.len(),
            monomials: monomials.len(),
            rank: sol.rank,
        });
    }
    Ok(BivariatePoly::from_terms(
        monomials.iter().copied().zip(coeffs),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn interpolates_quadratic_exactly() {
        // (mu^2 + 3 mu t) / 2 + 1
        let f = |mu: i64, t: i64| (mu * mu + 3 * mu * t) / 2 + 1;
        let samples: Vec<Sample> = [(0, 0), (2, 0), (4, 0), (0, 2), (2, 2), (0, 4), (6, 2)]
            .iter()
            .map(|&(m, t)| Sample::new(m, t, f(m, t)))
            .collect();
        let p = interpolate(&samples, &monomials_up_to(2), Underdetermined::Reject).unwrap();
        assert_eq!(p.coefficient((2, 0)), q(1, 2));
        assert_eq!(p.coefficient((1, 1)), q(3, 2));
        assert_eq!(p.coefficient((0, 0)), q(1, 1));
        assert_eq!(p.total_degree(), 2);
    }

    #[test]
    fn collinear_points_are_singular_unless_canonical() {
        let samples: Vec<Sample> = (1..6).map(|t| Sample::new(3 * t, t, 3 * t + 1)).collect();
        let err = interpolate(&samples, &monomials_up_to(1), Underdetermined::Reject);
        assert!(matches!(err, Err(Error::SingularInterpolation { .. })));
        let p = interpolate(&samples, &monomials_up_to(1), Underdetermined::Canonical).unwrap();
        assert_eq!(p.to_string(), "3*t + 1");
    }

    #[test]
    fn inconsistent_samples_are_reported() {
        let samples = vec![Sample::new(0, 0, 0), Sample::new(0, 0, 1)];
        assert!(matches!(
            interpolate(&samples, &monomials_up_to(1), Underdetermined::Canonical),
            Err(Error::InconsistentInterpolation { .. })
        ));
    }

    #[test]
    fn json_rows() {
        let p = BivariatePoly::from_terms([((0, 1), q(1, 1)), ((0, 0), q(-1, 2))]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"[["-1","2",0,0],["1","1",0,1]]"#);
        let back: BivariatePoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
