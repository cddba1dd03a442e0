//! The presentation `H^*(K^i) = Z[x_1..x_n] / I_n^i` for `s = n - 1`.
//!
//! `I_n^i` is generated by `e_2..e_n` in all variables, `h_d(x_1..x_{i-1})`
//! for `d >= n + 1 - i` and `h_d(x_i..x_n)` for `d >= i - 1`. Only finitely
//! many `h_d` matter below the truncation degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{bareiss_rank, ReducedEchelon};
use crate::multipoly::{monomials_of_degree, Monomial};
use crate::qseries::QPolynomial;
use crate::scalar::Field;
use crate::{MultiPoly, Rational};

fn check_vars(vars: &[usize], n: usize) -> Result<Vec<usize>> {
    let set: BTreeSet<usize> = vars.iter().copied().collect();
    if let Some(&bad) = set.iter().find(|&&v| v == 0 || v > n) {
        return Err(Error::InvalidVariable { index: bad, nvars: n });
    }
    Ok(set.into_iter().collect())
}

fn monomial_of(vars: &[usize], n: usize) -> Monomial {
    let mut m = vec![0; n];
    for &v in vars {
        m[v - 1] += 1;
    }
    m
}

/// `e_d` in the variables `x_v`, `v` in `vars` (1-based), inside `n` variables.
pub fn elementary_symmetric(d: u32, vars: &[usize], n: usize) -> Result<MultiPoly> {
    let vars = check_vars(vars, n)?;
    let terms = vars.iter().copied().combinations(d as usize).map(|c| (monomial_of(&c, n), BigInt::one()));
    Ok(MultiPoly::from_terms(n, terms))
}

/// `h_d` in the variables `x_v`, `v` in `vars` (1-based), inside `n` variables.
pub fn complete_homogeneous(d: u32, vars: &[usize], n: usize) -> Result<MultiPoly> {
    let vars = check_vars(vars, n)?;
    if d == 0 {
        return Ok(MultiPoly::one(n));
    }
    let terms =
        vars.iter().copied().combinations_with_replacement(d as usize).map(|c| (monomial_of(&c, n), BigInt::one()));
    Ok(MultiPoly::from_terms(n, terms))
}

/// Top cohomological degree (complex dimension) of every `K^i` at `s = n-1`.
pub fn top_degree(n: u32) -> u32 {
    (n - 1) * (n - 2) / 2 + n - 2
}

fn var_list(vars: &[usize]) -> String {
    match vars {
        [a] => format!("x{a}"),
        [a, .., b] if vars.len() > 2 => format!("x{a}..x{b}"),
        _ => vars.iter().map(|v| format!("x{v}")).join(","),
    }
}

/// One homogeneous generator of the ideal.
#[derive(Clone, PartialEq, Eq)]
pub struct Generator {
    label: String,
    degree: u32,
    poly: MultiPoly,
}

impl Generator {
    pub fn new(label: impl Into<String>, degree: u32, poly: MultiPoly) -> Result<Self> {
        let label = label.into();
        if !poly.is_zero() && poly.homogeneous_degree() != Some(degree) {
            return Err(Error::NotHomogeneous { label, degree });
        }
        Ok(Generator { label, degree, poly })
    }

    fn elementary(d: u32, vars: &[usize], n: usize) -> Result<Self> {
        Self::new(format!("e_{d}({})", var_list(vars)), d, elementary_symmetric(d, vars, n)?)
    }

    fn complete(d: u32, vars: &[usize], n: usize) -> Result<Self> {
        Self::new(format!("h_{d}({})", var_list(vars)), d, complete_homogeneous(d, vars, n)?)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label, self.poly)
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            label: &'a str,
            degree: u32,
            terms: usize,
        }
        Repr { label: &self.label, degree: self.degree, terms: self.poly.len() }.serialize(serializer)
    }
}

/// Generators of `I_n^i` up to a truncation degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdealSpec {
    n: u32,
    i: Option<u32>,
    truncation: u32,
    generators: Vec<Generator>,
}

/// `I_n^i` truncated one degree past the top degree.
pub fn build_ideal(n: u32, i: u32) -> Result<IdealSpec> {
    if n < 2 {
        return Err(Error::InvalidParams { n, s: n.saturating_sub(1) });
    }
    build_ideal_truncated(n, i, top_degree(n) + 1)
}

/// `I_n^i` keeping every generator of degree at most `truncation`.
pub fn build_ideal_truncated(n: u32, i: u32, truncation: u32) -> Result<IdealSpec> {
    if n < 2 {
        return Err(Error::InvalidParams { n, s: n.saturating_sub(1) });
    }
    if !(2..=n).contains(&i) {
        return Err(Error::InvalidComponent { i, n, s: n - 1 });
    }
    let nv = n as usize;
    let all: Vec<usize> = (1..=nv).collect();
    let (low, high) = all.split_at(i as usize - 1);
    let mut generators = Vec::new();
    for d in 2..=n.min(truncation) {
        generators.push(Generator::elementary(d, &all, nv)?);
    }
    for d in (n + 1 - i)..=truncation {
        generators.push(Generator::complete(d, low, nv)?);
    }
    for d in (i - 1)..=truncation {
        generators.push(Generator::complete(d, high, nv)?);
    }
    Ok(IdealSpec { n, i: Some(i), truncation, generators })
}

impl IdealSpec {
    /// Ideal in `n` variables with no generators yet.
    pub fn empty(n: u32, truncation: u32) -> Self {
        IdealSpec { n, i: None, truncation, generators: Vec::new() }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Component index, `None` for an ideal not built by [`build_ideal`].
    pub fn i(&self) -> Option<u32> {
        self.i
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// Adds a generator; those above the truncation degree are kept but
    /// never affect the Hilbert vector.
    pub fn with_generator(mut self, g: Generator) -> Result<Self> {
        if g.poly.nvars() != self.n as usize {
            return Err(Error::MismatchedParams);
        }
        self.generators.push(g);
        Ok(self)
    }

    fn generators_of_degree(&self, d: u32) -> impl Iterator<Item = &MultiPoly> {
        self.generators.iter().filter(move |g| g.degree == d).map(|g| &g.poly)
    }
}

/// Graded dimensions `dim_0..dim_D` of the quotient ring.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HilbertVector(Vec<BigInt>);

impl HilbertVector {
    pub fn new(dims: Vec<BigInt>) -> Self {
        HilbertVector(dims)
    }

    pub fn dims(&self) -> &[BigInt] {
        &self.0
    }

    pub fn get(&self, d: usize) -> BigInt {
        self.0.get(d).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> BigInt {
        self.0.iter().sum()
    }

    /// `dim_d == dim_{top-d}` for `0 <= d <= top`.
    pub fn is_symmetric_about(&self, top: usize) -> bool {
        (0..=top).all(|d| self.get(d) == self.get(top - d))
    }

    /// All entries past `top` are zero.
    pub fn vanishes_above(&self, top: usize) -> bool {
        self.0.iter().skip(top + 1).all(Zero::is_zero)
    }

    /// Equal to the coefficients of `p`, padding with zeros.
    pub fn matches(&self, p: &QPolynomial<BigInt>) -> bool {
        let len = self.0.len().max(p.coeffs().len());
        (0..len).all(|d| self.get(d) == p.coeff(d))
    }

    pub fn to_qpoly(&self) -> QPolynomial<BigInt> {
        QPolynomial::from_coeffs(self.0.clone())
    }
}

impl fmt::Display for HilbertVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.iter().join(", "))
    }
}

impl Serialize for HilbertVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter().map(ToString::to_string))
    }
}

impl<'de> Deserialize<'de> for HilbertVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(deserializer)?;
        raw.iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<_, _>>()
            .map(HilbertVector)
    }
}

/// Hilbert vector over the rationals.
pub fn hilbert_series(spec: &IdealSpec) -> HilbertVector {
    hilbert_series_over::<Rational>(spec)
}

type Sparse<F> = BTreeMap<usize, F>;
type NormalForms<F> = HashMap<Monomial, Vec<(Monomial, F)>>;

fn divide(m: &[u32], k: usize) -> Monomial {
    let mut out = m.to_vec();
    out[k] -= 1;
    out
}

fn times(m: &[u32], k: usize) -> Monomial {
    let mut out = m.to_vec();
    out[k] += 1;
    out
}

fn axpy<F: Field>(acc: &mut Sparse<F>, c: &F, v: &Sparse<F>) {
    for (&j, x) in v {
        let e = acc.entry(j).or_insert_with(F::zero);
        *e = e.clone() + c.clone() * x.clone();
        if e.is_zero() {
            acc.remove(&j);
        }
    }
}

fn dense<F: Field>(v: &Sparse<F>, len: usize) -> Vec<F> {
    let mut out = vec![F::zero(); len];
    for (&j, x) in v {
        out[j] = x.clone();
    }
    out
}

/// `x_k * NF(m)` pushed through the reduction map of the current degree.
fn lift<F: Field>(rho: &HashMap<Monomial, Sparse<F>>, nf: &[(Monomial, F)], k: usize) -> Sparse<F> {
    let mut acc = Sparse::new();
    for (s, c) in nf {
        axpy(&mut acc, c, &rho[&times(s, k)]);
    }
    acc
}

/// One degree of the elimination.
///
/// `prev` maps every non-standard monomial of degree `d - 1` to its normal
/// form (a combination of smaller standard monomials). Monomials of degree
/// `d` that are `x_k` times a non-standard one are rewritten through that
/// normal form; the rest are candidate columns, and the remaining
/// relations come from different rewrites of one monomial and from the
/// degree-`d` generators.
fn degree_step<'a, F: Field + From<BigInt>>(
    n: usize,
    d: u32,
    prev: &NormalForms<F>,
    gens: impl Iterator<Item = &'a MultiPoly>,
) -> (usize, NormalForms<F>) {
    let monos = monomials_of_degree(n, d);
    let divisors: Vec<Vec<usize>> =
        monos.iter().map(|m| (0..n).filter(|&k| m[k] > 0 && prev.contains_key(&divide(m, k))).collect()).collect();
    // columns in descending lex order, so a pivot is the leading monomial
    let free: Vec<&Monomial> =
        monos.iter().zip(&divisors).filter(|(_, ks)| ks.is_empty()).map(|(m, _)| m).rev().collect();
    let col: HashMap<&Monomial, usize> = free.iter().enumerate().map(|(c, &m)| (m, c)).collect();

    // ascending order: every term of a rewrite is smaller than the monomial
    let mut rho: HashMap<Monomial, Sparse<F>> = HashMap::with_capacity(monos.len());
    for (m, ks) in monos.iter().zip(&divisors) {
        let v = match ks.first() {
            None => Sparse::from([(col[m], F::one())]),
            Some(&k) => lift(&rho, &prev[&divide(m, k)], k),
        };
        rho.insert(m.clone(), v);
    }

    let width = free.len();
    let mut ech = ReducedEchelon::<F>::new(width);
    for g in gens {
        if ech.rank() == width {
            break;
        }
        let mut v = Sparse::new();
        for (m, c) in g.terms() {
            axpy(&mut v, &F::from(c.clone()), &rho[m]);
        }
        ech.insert(dense(&v, width));
    }
    'relations: for (m, ks) in monos.iter().zip(&divisors) {
        for &k in ks.iter().skip(1) {
            if ech.rank() == width {
                break 'relations;
            }
            let mut v = rho[m].clone();
            axpy(&mut v, &-F::one(), &lift(&rho, &prev[&divide(m, k)], k));
            if !v.is_empty() {
                ech.insert(dense(&v, width));
            }
        }
    }

    let support = |v: Vec<F>| -> Vec<(Monomial, F)> {
        v.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(j, x)| (free[j].clone(), x)).collect()
    };
    let mut next = NormalForms::with_capacity(monos.len());
    for (m, ks) in monos.iter().zip(&divisors) {
        if ks.is_empty() {
            let c = col[m];
            if let Some(row) = ech.row_for_pivot(c) {
                let mut tail: Vec<F> = row.iter().map(|x| -x.clone()).collect();
                tail[c] = F::zero();
                next.insert(m.clone(), support(tail));
            }
        } else {
            next.insert(m.clone(), support(ech.reduce(dense(&rho[m], width))));
        }
    }
    (width - ech.rank(), next)
}

/// Hilbert vector over any exact field containing the integers.
///
/// Works degree by degree with `I_d = sum_k x_k I_{d-1} + span(gens_d)`,
/// carrying normal forms of the non-standard monomials, so each degree
/// eliminates only on the monomials that are not already reducible.
pub fn hilbert_series_over<F: Field + From<BigInt>>(spec: &IdealSpec) -> HilbertVector {
    let n = spec.n as usize;
    let mut dims: Vec<usize> = Vec::with_capacity(spec.truncation as usize + 1);
    let mut nf = NormalForms::<F>::new();
    for d in 0..=spec.truncation {
        if dims.last() == Some(&0) {
            dims.push(0);
            continue;
        }
        let (dim, next) = degree_step(n, d, &nf, spec.generators_of_degree(d));
        dims.push(dim);
        nf = next;
    }
    HilbertVector(dims.into_iter().map(BigInt::from).collect())
}

/// Direct definition: per degree, the monomial count minus the rank of all
/// monomial multiples of generators. Fraction-free over the integers;
/// practical up to `n = 4`.
pub fn hilbert_series_macaulay(spec: &IdealSpec) -> HilbertVector {
    let n = spec.n as usize;
    let dims: Vec<BigInt> = (0..=spec.truncation)
        .into_par_iter()
        .map(|d| {
            let monos = monomials_of_degree(n, d);
            let col: HashMap<&Monomial, usize> = monos.iter().enumerate().map(|(c, m)| (m, c)).collect();
            let mut rows = Vec::new();
            for g in spec.generators.iter().filter(|g| g.degree <= d && !g.poly.is_zero()) {
                for m in monomials_of_degree(n, d - g.degree) {
                    let mut row = vec![BigInt::zero(); monos.len()];
                    for (t, c) in g.poly.mul_monomial(&m).terms() {
                        row[col[t]] = c.clone();
                    }
                    rows.push(row);
                }
            }
            BigInt::from(monos.len() - bareiss_rank(rows))
        })
        .collect();
    HilbertVector(dims)
}

/// Ordered list of disjoint nonempty blocks covering `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct OrderedSetPartition(Vec<Vec<u32>>);

impl OrderedSetPartition {
    pub fn new(blocks: Vec<Vec<u32>>, n: u32) -> Result<Self> {
        let mut seen = vec![false; n as usize + 1];
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::EmptyInput("ordered set partition block"));
            }
            for &x in b {
                if x == 0 || x > n || seen[x as usize] {
                    return Err(Error::BasisIndexOutOfRange { index: x, dim: n });
                }
                seen[x as usize] = true;
            }
        }
        if seen.iter().skip(1).any(|s| !s) {
            return Err(Error::EmptyInput("ordered set partition cover"));
        }
        Ok(OrderedSetPartition(blocks.into_iter().map(|b| b.into_iter().sorted().collect()).collect()))
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Position of the block containing `x`.
    pub fn block_of(&self, x: u32) -> Option<usize> {
        self.0.iter().position(|b| b.contains(&x))
    }
}

impl fmt::Display for OrderedSetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = self.0.iter().map(|b| b.iter().join(""));
        write!(f, "{}", parts.format(" | "))
    }
}

/// Assigns `1..=n` to `k` ordered blocks, skipping assignments that put
/// two elements of the same class together. `class(x) == None` means free.
fn assign_blocks(n: u32, k: usize, class: &dyn Fn(u32) -> Option<u8>, visit: &mut dyn FnMut(&[Vec<u32>])) {
    fn rec(
        x: u32,
        n: u32,
        blocks: &mut Vec<Vec<u32>>,
        empty: usize,
        class: &dyn Fn(u32) -> Option<u8>,
        visit: &mut dyn FnMut(&[Vec<u32>]),
    ) {
        if x > n {
            if empty == 0 {
                visit(blocks);
            }
            return;
        }
        if ((n - x + 1) as usize) < empty {
            return;
        }
        let cx = class(x);
        for b in 0..blocks.len() {
            if cx.is_some() && blocks[b].iter().any(|&y| class(y) == cx) {
                continue;
            }
            let was_empty = blocks[b].is_empty();
            blocks[b].push(x);
            rec(x + 1, n, blocks, empty - usize::from(was_empty), class, visit);
            blocks[b].pop();
        }
    }
    let mut blocks = vec![Vec::new(); k];
    rec(1, n, &mut blocks, k, class, visit);
}

/// All ordered set partitions of `1..=n` into `k` blocks.
pub fn ordered_set_partitions(n: u32, k: u32) -> Vec<OrderedSetPartition> {
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(OrderedSetPartition(Vec::new()));
        }
        return out;
    }
    assign_blocks(n, k as usize, &|_| None, &mut |b| out.push(OrderedSetPartition(b.to_vec())));
    out
}

/// Ordered set partitions of `1..=n` into `n - 1` blocks that separate
/// `1..i-1` and separate `i..n`.
pub fn separating_partitions(n: u32, i: u32) -> Result<Vec<OrderedSetPartition>> {
    check_component(n, i)?;
    let mut out = Vec::new();
    assign_blocks(n, n as usize - 1, &|x| Some(u8::from(x >= i)), &mut |b| out.push(OrderedSetPartition(b.to_vec())));
    Ok(out)
}

fn check_component(n: u32, i: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams { n, s: n.saturating_sub(1) });
    }
    if !(2..=n).contains(&i) {
        return Err(Error::InvalidComponent { i, n, s: n - 1 });
    }
    Ok(())
}

/// Number of separating ordered set partitions, by enumeration.
pub fn osp_count(n: u32, i: u32) -> Result<BigInt> {
    check_component(n, i)?;
    let mut count = 0u64;
    assign_blocks(n, n as usize - 1, &|x| Some(u8::from(x >= i)), &mut |_| count += 1);
    Ok(BigInt::from(count))
}

/// `(i - 1)(n - i + 1)(n - 1)!`.
pub fn osp_formula(n: u32, i: u32) -> Result<BigInt> {
    check_component(n, i)?;
    let fact: BigInt = (1..n).map(BigInt::from).product();
    Ok(BigInt::from(i - 1) * BigInt::from(n - i + 1) * fact)
}
