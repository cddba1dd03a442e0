//! The nilpotent operator `x`, containment checks for permutation flags,
//! and brute-force point counts of `K^{i,j}` over a prime field.
//!
//! On the basis `e_1..e_{n-1+s}` the operator is `x e_m = e_{m-(n-1)}` for
//! `n <= m <= 2n-2` and zero otherwise, so `im(x) = span{e_1..e_{n-1}}`
//! and `x^2 = 0`. In Hessenberg terms `K^i` is cut out by
//! `x V_{i-1} = 0` and `x V_n ⊆ V_{i-1}`; no Hessenberg machinery is
//! needed here beyond these two conditions.

use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::components::PairIndex;
use crate::error::{Error, Result};
use crate::shapes::{GlobalParams, PartialPermutation};

/// Cap on candidate lines examined by [`count_points_fp`].
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NilpotentModel {
    params: GlobalParams,
}

impl NilpotentModel {
    pub fn new(params: GlobalParams) -> Self {
        NilpotentModel { params }
    }

    pub fn params(&self) -> GlobalParams {
        self.params
    }

    pub fn dim(&self) -> u32 {
        self.params.ambient_dim()
    }

    /// `x e_index`, with `None` for zero.
    pub fn apply_x(&self, index: u32) -> Result<Option<u32>> {
        let dim = self.dim();
        if index == 0 || index > dim {
            return Err(Error::BasisIndexOutOfRange { index, dim });
        }
        let n = self.params.n();
        Ok((n..=2 * n - 2).contains(&index).then(|| index - (n - 1)))
    }

    pub fn in_image(&self, index: u32) -> bool {
        (1..self.params.n()).contains(&index)
    }
}

/// Index-set flag `V_k = span{e_{w_1}..e_{w_k}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexFlag<'a> {
    w: &'a PartialPermutation,
}

impl<'a> IndexFlag<'a> {
    pub fn new(w: &'a PartialPermutation) -> Self {
        IndexFlag { w }
    }

    pub fn subspace(&self, k: usize) -> &'a [u32] {
        &self.w.as_slice()[..k]
    }
}

/// Whether the permutation flag of `w` satisfies
/// `V_{j-1} ⊆ im(x) ⊆ V_n ⊆ x^{-1} V_{i-1}`.
pub fn flag_membership(w: &PartialPermutation, pair: PairIndex, model: &NilpotentModel) -> Result<bool> {
    if pair.params() != model.params {
        return Err(Error::MismatchedParams);
    }
    let n = model.params.n() as usize;
    if w.len() != n {
        return Err(Error::InvalidFilling(format!("word {w} has length {}, expected {n}", w.len())));
    }
    let flag = IndexFlag::new(w);
    let (i, j) = (pair.i() as usize, pair.j() as usize);

    if !flag.subspace(j - 1).iter().all(|&e| model.in_image(e)) {
        return Ok(false);
    }
    let top = flag.subspace(n);
    if !(1..model.params.n()).all(|e| top.contains(&e)) {
        return Ok(false);
    }
    let bottom = flag.subspace(i - 1);
    for &e in top {
        if let Some(image) = model.apply_x(e)? {
            if !bottom.contains(&image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Subspace of `F_p^N` kept in reduced row-echelon form.
#[derive(Debug, Clone)]
struct EchelonSpace {
    p: u64,
    rows: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

impl EchelonSpace {
    fn new(p: u64) -> Self {
        EchelonSpace { p, rows: Vec::new(), pivots: Vec::new() }
    }

    fn contains(&self, v: &[u64]) -> bool {
        let mut u = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = u[c];
            if f != 0 {
                for (x, &r) in u.iter_mut().zip(row) {
                    *x = (*x + (self.p - f) * r) % self.p;
                }
            }
        }
        u.iter().all(|&x| x == 0)
    }

    /// Adds `v`, which must be zero on every pivot and have leading entry 1.
    fn extended(&self, v: &[u64]) -> Self {
        let lead = v.iter().position(|&x| x != 0).expect("nonzero vector");
        let mut next = self.clone();
        for row in &mut next.rows {
            let f = row[lead];
            if f != 0 {
                for (x, &y) in row.iter_mut().zip(v) {
                    *x = (*x + (self.p - f) * y) % self.p;
                }
            }
        }
        next.rows.push(v.to_vec());
        next.pivots.push(lead);
        next
    }
}

/// Normalised vectors supported on `free` coordinates with leading entry
/// 1: one representative per line of the quotient by the current space.
fn quotient_lines(p: u64, dim: usize, free: &[usize]) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (k, &lead) in free.iter().enumerate() {
        let tail = &free[k + 1..];
        let total = p.pow(tail.len() as u32);
        for code in 0..total {
            let mut v = vec![0; dim];
            v[lead] = 1;
            let mut c = code;
            for &t in tail {
                v[t] = c % p;
                c /= p;
            }
            out.push(v);
        }
    }
    out
}

struct PointCounter {
    p: u64,
    n: usize,
    dim: usize,
    i: usize,
    j: usize,
    budget: u64,
    spent: AtomicU64,
}

impl PointCounter {
    fn apply_x(&self, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0; self.dim];
        for a in 0..self.n - 1 {
            out[a] = v[a + self.n - 1];
        }
        out
    }

    fn charge(&self, lines: usize) -> Result<()> {
        let spent = self.spent.fetch_add(lines as u64, Ordering::Relaxed) + lines as u64;
        if spent > self.budget {
            Err(Error::BudgetExceeded { cap: self.budget })
        } else {
            Ok(())
        }
    }

    fn candidates(&self, space: &EchelonSpace, step: usize) -> Vec<Vec<u64>> {
        // V_{j-1} ⊆ im(x): the first j-1 vectors stay in e_1..e_{n-1}
        let support = if step < self.j { self.n - 1 } else { self.dim };
        let free: Vec<usize> = (0..support).filter(|c| !space.pivots.contains(c)).collect();
        quotient_lines(self.p, self.dim, &free)
    }

    /// Whether adding `v` as the `step`-th vector keeps `x V_n ⊆ V_{i-1}`
    /// reachable, given the current prefix.
    fn admissible(&self, step: usize, v: &[u64], bottom: Option<&EchelonSpace>) -> bool {
        match bottom {
            Some(b) if step >= self.i => b.contains(&self.apply_x(v)),
            _ => true,
        }
    }

    fn finish(&self, space: &EchelonSpace) -> bool {
        (0..self.n - 1).all(|c| {
            let mut e = vec![0; self.dim];
            e[c] = 1;
            space.contains(&e)
        })
    }

    /// Chains extending `space = V_{step-1}`.
    fn count_from(&self, space: &EchelonSpace, step: usize, bottom: Option<&EchelonSpace>) -> Result<u64> {
        let cands = self.candidates(space, step);
        self.charge(cands.len())?;
        let mut total = 0u64;
        for v in cands {
            if !self.admissible(step, &v, bottom) {
                continue;
            }
            let next = space.extended(&v);
            if step == self.n {
                total += u64::from(self.finish(&next));
            } else {
                let bottom = if step == self.i - 1 { Some(&next) } else { bottom };
                total += self.count_from(&next, step + 1, bottom)?;
            }
        }
        Ok(total)
    }

    fn run(&self) -> Result<u64> {
        let root = EchelonSpace::new(self.p);
        // V_0 = 0 is the bottom when i = 1
        let empty_bottom = (self.i == 1).then(|| root.clone());
        let cands = self.candidates(&root, 1);
        self.charge(cands.len())?;
        cands
            .par_iter()
            .map(|v| {
                if !self.admissible(1, v, empty_bottom.as_ref()) {
                    return Ok(0);
                }
                let next = root.extended(v);
                let bottom = if self.i == 2 { Some(&next) } else { empty_bottom.as_ref() };
                self.count_from(&next, 2, bottom)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }
}

/// Number of chains `V_1 ⊂ ... ⊂ V_n` in `F_p^{n-1+s}` with
/// `dim V_k = k` and `V_{j-1} ⊆ im(x) ⊆ V_n ⊆ x^{-1} V_{i-1}`.
///
/// The last part of the flag is forced, so this is the number of
/// `F_p`-points of `K^{i,j}`.
pub fn count_points_fp(pair: PairIndex, model: &NilpotentModel, p: u32, budget: u64) -> Result<BigInt> {
    if pair.params() != model.params {
        return Err(Error::MismatchedParams);
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let counter = PointCounter {
        p: u64::from(p),
        n: model.params.n() as usize,
        dim: model.dim() as usize,
        i: pair.i() as usize,
        j: pair.j() as usize,
        budget,
        spent: AtomicU64::new(0),
    };
    counter.run().map(BigInt::from)
}
