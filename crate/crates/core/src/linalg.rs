//! Exact elimination: fraction-free rank over an integral domain, and an
//! incrementally maintained reduced row-echelon basis over a field.

use crate::scalar::{ExactDomain, Field};

/// Rank by Bareiss fraction-free elimination.
///
/// Every division is exact, so integer entries stay integers and the
/// intermediate values are minors of the input.
pub fn bareiss_rank<R: ExactDomain>(mut rows: Vec<Vec<R>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = R::one();
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let (head, tail) = rows.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for c in col..ncols {
                let v = pivot.clone() * row[c].clone() - factor.clone() * pivot_row[c].clone();
                row[c] = v / prev.clone();
            }
        }
        prev = pivot;
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Reduced row-echelon basis of a growing subspace of `F^ncols`.
///
/// Each row's pivot is its first nonzero column, normalised to one, and
/// every pivot column is zero in all other rows.
#[derive(Debug, Clone)]
pub struct ReducedEchelon<F> {
    ncols: usize,
    rows: Vec<Vec<F>>,
    pivot_row: Vec<Option<usize>>,
}

impl<F: Field> ReducedEchelon<F> {
    pub fn new(ncols: usize) -> Self {
        ReducedEchelon { ncols, rows: Vec::new(), pivot_row: vec![None; ncols] }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// The normalised row whose pivot is `col`.
    pub fn row_for_pivot(&self, col: usize) -> Option<&[F]> {
        self.pivot_row[col].map(|r| self.rows[r].as_slice())
    }

    /// Remainder of `v` modulo the span; zero on every pivot column.
    pub fn reduce(&self, mut v: Vec<F>) -> Vec<F> {
        debug_assert_eq!(v.len(), self.ncols);
        for col in 0..self.ncols {
            if v[col].is_zero() {
                continue;
            }
            if let Some(r) = self.pivot_row[col] {
                let f = v[col].clone();
                for (x, y) in v.iter_mut().zip(&self.rows[r]).skip(col) {
                    if !y.is_zero() {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
        }
        v
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<F>) -> bool {
        let mut v = self.reduce(v);
        let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = F::one() / v[lead].clone();
        for x in v.iter_mut().skip(lead) {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        for row in &mut self.rows {
            let f = row[lead].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&v).skip(lead) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push(v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn rat(row: &[i64]) -> Vec<BigRational> {
        row.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn bareiss_small() {
        assert_eq!(bareiss_rank(big(&[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(bareiss_rank(big(&[vec![0, 1, 2], vec![1, 0, 3], vec![1, 1, 5]])), 2);
        assert_eq!(bareiss_rank(big(&[vec![2, 0], vec![0, 3], vec![1, 1]])), 2);
        assert_eq!(bareiss_rank::<BigInt>(vec![]), 0);
        assert_eq!(bareiss_rank(vec![vec![0i128; 3]; 2]), 0);
    }

    #[test]
    fn echelon_small() {
        let mut e = ReducedEchelon::<BigRational>::new(3);
        assert!(e.insert(rat(&[0, 2, 4])));
        assert!(e.insert(rat(&[3, 1, 1])));
        assert!(!e.insert(rat(&[6, 4, 6])));
        assert_eq!(e.rank(), 2);
        assert!(e.is_pivot(0) && e.is_pivot(1) && !e.is_pivot(2));
        let r = e.reduce(rat(&[0, 0, 1]));
        assert_eq!(r, rat(&[0, 0, 1]));
        // row for pivot 0 is (1, 0, -1/3)
        let row0 = e.row_for_pivot(0).unwrap();
        assert_eq!(row0[2], BigRational::new(BigInt::from(-1), BigInt::from(3)));
    }

    proptest! {
        #[test]
        fn bareiss_agrees_with_field_elimination(
            rows in prop::collection::vec(prop::collection::vec(-3i64..4, 5), 0..7)
        ) {
            let mut e = ReducedEchelon::<BigRational>::new(5);
            for r in &rows {
                e.insert(rat(r));
            }
            prop_assert_eq!(bareiss_rank(big(&rows)), e.rank());
            let small: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
            prop_assert_eq!(bareiss_rank(small), e.rank());
        }
    }
}
