//! Univariate polynomials in `q` and the q-analogs built from them.
//!
//! Every Poincaré polynomial in this crate is stored in the variable `q`
//! standing for `√q` squared: a coefficient at index `d` counts cells (or
//! cohomology classes) of complex dimension `d`, i.e. real degree `2d`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::scalar::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum QSeriesError {
    #[error("[n]_q needs n >= 1, got {0}")]
    NonPositiveInt(u32),
    #[error("q-binomial [{n} choose {k}] needs k <= n")]
    BinomialOutOfRange { n: u32, k: u32 },
}

/// Dense polynomial in `q`, coefficients in ascending degree.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QPolynomial<C> {
    coeffs: Vec<C>,
}

impl<C: Coefficient> QPolynomial<C> {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPolynomial { coeffs: vec![C::one()] }
    }

    /// `c * q^degree`.
    pub fn monomial(c: C, degree: usize) -> Self {
        let mut coeffs = vec![C::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<C>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of `q^d`, zero past the degree.
    pub fn coeff(&self, d: usize) -> C {
        self.coeffs.get(d).cloned().unwrap_or_else(C::zero)
    }

    /// Exact evaluation by Horner's scheme.
    pub fn eval(&self, q: &C) -> C {
        self.coeffs.iter().rev().fold(C::zero(), |acc, c| acc * q.clone() + c.clone())
    }

    pub fn coefficient_sum(&self) -> C {
        self.coeffs.iter().cloned().fold(C::zero(), |a, c| a + c)
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![C::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPolynomial { coeffs }
    }

    /// `c_d == c_{deg-d}` for every `d`.
    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    pub fn product<I: IntoIterator<Item = Self>>(factors: I) -> Self {
        factors.into_iter().fold(Self::one(), |acc, f| acc * f)
    }
}

impl<C: Coefficient + PartialOrd> QPolynomial<C> {
    /// Weakly increasing then weakly decreasing.
    pub fn is_unimodal(&self) -> bool {
        let c = &self.coeffs;
        let mut k = 0;
        while k + 1 < c.len() && c[k] <= c[k + 1] {
            k += 1;
        }
        while k + 1 < c.len() && c[k] >= c[k + 1] {
            k += 1;
        }
        k + 1 >= c.len()
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= C::zero())
    }
}

impl<C: Coefficient> Default for QPolynomial<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Add for &QPolynomial<C> {
    type Output = QPolynomial<C>;

    fn add(self, rhs: Self) -> QPolynomial<C> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|d| self.coeff(d) + rhs.coeff(d)).collect();
        QPolynomial::from_coeffs(coeffs)
    }
}

impl<C: Coefficient> Sub for &QPolynomial<C> {
    type Output = QPolynomial<C>;

    fn sub(self, rhs: Self) -> QPolynomial<C> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|d| self.coeff(d) - rhs.coeff(d)).collect();
        QPolynomial::from_coeffs(coeffs)
    }
}

impl<C: Coefficient> Mul for &QPolynomial<C> {
    type Output = QPolynomial<C>;

    fn mul(self, rhs: Self) -> QPolynomial<C> {
        if self.is_zero() || rhs.is_zero() {
            return QPolynomial::zero();
        }
        let mut coeffs = vec![C::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.coeffs.iter().enumerate() {
                coeffs[a + b] = coeffs[a + b].clone() + x.clone() * y.clone();
            }
        }
        QPolynomial::from_coeffs(coeffs)
    }
}

impl<C: Coefficient> Neg for &QPolynomial<C> {
    type Output = QPolynomial<C>;

    fn neg(self) -> QPolynomial<C> {
        QPolynomial { coeffs: self.coeffs.iter().cloned().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr for QPolynomial<C> {
            type Output = QPolynomial<C>;

            fn $m(self, rhs: Self) -> QPolynomial<C> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coefficient> Neg for QPolynomial<C> {
    type Output = QPolynomial<C>;

    fn neg(self) -> QPolynomial<C> {
        -&self
    }
}

impl<C: Coefficient> std::iter::Sum for QPolynomial<C> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for QPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let unit = c.is_one();
            match (d, unit) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "({c})q")?,
                (_, true) => write!(f, "q^{d}")?,
                (_, false) => write!(f, "({c})q^{d}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient + fmt::Display> fmt::Debug for QPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPolynomial({self})")
    }
}

// JSON form: array of decimal strings, ascending degree.
impl<C: Coefficient + fmt::Display> Serialize for QPolynomial<C> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&c.to_string())?;
        }
        seq.end()
    }
}

impl<'de, C> Deserialize<'de> for QPolynomial<C>
where
    C: Coefficient + FromStr,
{
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CoeffVisitor<C>(std::marker::PhantomData<C>);

        impl<'de, C: Coefficient + FromStr> Visitor<'de> for CoeffVisitor<C> {
            type Value = QPolynomial<C>;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an array of decimal coefficient strings")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut coeffs = Vec::new();
                while let Some(s) = seq.next_element::<String>()? {
                    let c = s.parse::<C>().map_err(|_| de::Error::custom(format!("bad coefficient {s:?}")))?;
                    coeffs.push(c);
                }
                Ok(QPolynomial::from_coeffs(coeffs))
            }
        }

        deserializer.deserialize_seq(CoeffVisitor(std::marker::PhantomData))
    }
}

/// `[n]_q = 1 + q + ... + q^(n-1)`, the Poincaré polynomial of `P^(n-1)`.
pub fn q_int<C: Coefficient>(n: u32) -> Result<QPolynomial<C>, QSeriesError> {
    if n == 0 {
        return Err(QSeriesError::NonPositiveInt(n));
    }
    Ok(QPolynomial::from_coeffs(vec![C::one(); n as usize]))
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`, with `[0]_q! = 1`.
pub fn q_factorial<C: Coefficient>(n: u32) -> QPolynomial<C> {
    QPolynomial::product((1..=n).map(|k| q_int(k).expect("k >= 1")))
}

/// Gaussian binomial `[n choose k]_q`, by the recurrence
/// `[n,k] = [n-1,k-1] + q^k [n-1,k]` on a single Pascal row.
pub fn q_binomial<C: Coefficient>(n: u32, k: u32) -> Result<QPolynomial<C>, QSeriesError> {
    if k > n {
        return Err(QSeriesError::BinomialOutOfRange { n, k });
    }
    let k = k.min(n - k) as usize;
    // row[t] holds [m choose t]_q for the current m
    let mut row: Vec<QPolynomial<C>> = vec![QPolynomial::one()];
    for m in 1..=n as usize {
        let top = m.min(k);
        let mut next = Vec::with_capacity(top + 1);
        for t in 0..=top {
            let left = if t >= 1 { row[t - 1].clone() } else { QPolynomial::zero() };
            let right = if t < row.len() && t < m { row[t].shift(t) } else { QPolynomial::zero() };
            next.push(&left + &right);
        }
        row = next;
    }
    Ok(row.swap_remove(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QPoly;
    use num_bigint::BigInt;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    #[test]
    fn add_examples() {
        assert_eq!(&p(&[1, 1]) + &p(&[0, 1, 1]), p(&[1, 2, 1]));
        assert_eq!(&p(&[3, 0, 2]) + &QPoly::zero(), p(&[3, 0, 2]));
        let cancelled = &p(&[1]) + &p(&[-1]);
        assert!(cancelled.is_zero());
        assert!(cancelled.coeffs().is_empty());
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&p(&[1, 1]) * &p(&[1, 1]), p(&[1, 2, 1]));
        assert_eq!(&p(&[4, 0, -1]) * &QPoly::one(), p(&[4, 0, -1]));
        assert_eq!(&p(&[1, 1]) * &p(&[1, 1, 1]), p(&[1, 2, 2, 1]));
    }

    #[test]
    fn q_int_examples() {
        assert_eq!(q_int::<BigInt>(1).unwrap(), p(&[1]));
        assert_eq!(q_int::<BigInt>(3).unwrap(), p(&[1, 1, 1]));
        assert_eq!(q_int::<BigInt>(5).unwrap(), p(&[1, 1, 1, 1, 1]));
        assert_eq!(q_int::<BigInt>(0), Err(QSeriesError::NonPositiveInt(0)));
    }

    #[test]
    fn q_factorial_examples() {
        assert_eq!(q_factorial::<BigInt>(0), QPoly::one());
        assert_eq!(q_factorial::<BigInt>(3), p(&[1, 2, 2, 1]));
        let f4 = q_factorial::<BigInt>(4);
        assert_eq!(f4.degree(), Some(6));
        assert_eq!(f4.coefficient_sum(), BigInt::from(24));
    }

    #[test]
    fn q_binomial_examples() {
        for n in 0..6 {
            assert_eq!(q_binomial::<BigInt>(n, 0).unwrap(), QPoly::one());
        }
        assert_eq!(q_binomial::<BigInt>(4, 2).unwrap(), p(&[1, 1, 2, 1, 1]));
        assert!(q_binomial::<BigInt>(3, 4).is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[1, 1, 1]).eval(&BigInt::from(1)), BigInt::from(3));
        let x = &(&q_factorial::<BigInt>(3) * &q_int(2).unwrap()) * &q_int(2).unwrap();
        assert_eq!(x.eval(&BigInt::from(2)), BigInt::from(189));
        assert_eq!(QPoly::zero().eval(&BigInt::from(5)), BigInt::from(0));
    }

    #[test]
    fn generic_over_machine_integers() {
        let b: QPolynomial<i64> = q_binomial(6, 3).unwrap();
        assert_eq!(b.coefficient_sum(), 20);
        assert_eq!(b.eval(&2), 1395);
    }

    #[test]
    fn json_is_array_of_decimal_strings() {
        let s = serde_json::to_string(&p(&[1, 2, 1])).unwrap();
        assert_eq!(s, r#"["1","2","1"]"#);
        let back: QPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p(&[1, 2, 1]));
        let big: QPoly = serde_json::from_str(r#"["123456789012345678901234567890","0"]"#).unwrap();
        assert_eq!(big.degree(), Some(0));
        assert!(serde_json::from_str::<QPoly>(r#"["x"]"#).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 2, 0, 1]).to_string(), "1 + (2)q + q^3");
        assert_eq!(QPoly::zero().to_string(), "0");
    }

    #[test]
    fn unimodality_check() {
        assert!(p(&[1, 2, 2, 1]).is_unimodal());
        assert!(!p(&[1, 0, 1]).is_unimodal());
    }
}
