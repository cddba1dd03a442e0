//! Sparse polynomials in `x_1..x_n`.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Coefficient;

/// Exponent vector of length `n`.
pub type Monomial = Vec<u32>;

pub fn monomial_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// All monomials of total degree `d` in `n` variables, in lex order
/// ascending (`x_n^d` first, `x_1^d` last).
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(prefix: &mut Monomial, left: u32, slots: usize, out: &mut Vec<Monomial>) {
        if slots == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in 0..=left {
            prefix.push(e);
            rec(prefix, left - e, slots - 1, out);
            prefix.pop();
        }
    }
    if n == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), d, n, &mut out);
    out
}

/// Map from exponent vectors to nonzero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct MultivariatePolynomial<C> {
    nvars: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> MultivariatePolynomial<C> {
    pub fn zero(nvars: usize) -> Self {
        MultivariatePolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        let mut p = Self::zero(nvars);
        p.terms.insert(vec![0; nvars], C::one());
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(nvars: usize, terms: I) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &[u32]) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: C) {
        assert_eq!(m.len(), self.nvars, "exponent vector length");
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Common degree of all terms; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|m| monomial_degree(m));
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    pub fn mul_monomial(&self, m: &[u32]) -> Self {
        let terms =
            self.terms.iter().map(|(k, c)| (k.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone())).collect();
        MultivariatePolynomial { nvars: self.nvars, terms }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let m = a.iter().zip(b).map(|(u, v)| u + v).collect();
                out.add_term(m, x.clone() * y.clone());
            }
        }
        out
    }
}

impl<C: Coefficient + fmt::Display> fmt::Display for MultivariatePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let vars: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(k, &e)| if e == 1 { format!("x{}", k + 1) } else { format!("x{}^{e}", k + 1) })
                .collect();
            match (c.is_one(), vars.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (true, false) => f.write_str(&vars.join("*"))?,
                (false, false) => write!(f, "({c})*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

impl<C: Coefficient + fmt::Display> fmt::Debug for MultivariatePolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultivariatePolynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        // C(d + n - 1, n - 1)
        assert_eq!(monomials_of_degree(3, 2).len(), 6);
        assert_eq!(monomials_of_degree(5, 10).len(), 1001);
        assert_eq!(monomials_of_degree(1, 4), vec![vec![4]]);
        let ms = monomials_of_degree(3, 3);
        assert!(ms.windows(2).all(|w| w[0] < w[1]));
        assert!(ms.iter().all(|m| monomial_degree(m) == 3));
    }

    #[test]
    fn arithmetic() {
        type P = MultivariatePolynomial<i64>;
        let x1 = P::from_terms(2, [(vec![1, 0], 1)]);
        let x2 = P::from_terms(2, [(vec![0, 1], 1)]);
        let s = x1.add(&x2);
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(&[1, 1]), 2);
        assert_eq!(sq.homogeneous_degree(), Some(2));
        let diff = s.add(&P::from_terms(2, [(vec![0, 1], -1)]));
        assert_eq!(diff, x1);
        assert_eq!(s.add(&P::one(2)).homogeneous_degree(), None);
        assert_eq!(x1.mul_monomial(&[0, 2]).coeff(&[1, 2]), 1);
    }
}
