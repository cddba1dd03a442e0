//! Intersections of components, their inclusion poset, and Poincaré
//! polynomials: per intersection from the bundle structure, and for unions
//! from Dyck-path cells with an inclusion–exclusion cross-check.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::ser::{SerializeTuple, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qseries::{q_binomial, q_factorial, q_int};
use crate::shapes::GlobalParams;
use crate::QPoly;

/// Largest input accepted by [`poincare_union_oracle`] (`2^20` subsets).
pub const ORACLE_MAX_PAIRS: usize = 20;

/// `K^{i,j} = K^i ∩ K^j`; `i == j` is the component `K^i` itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIndex {
    params: GlobalParams,
    i: u32,
    j: u32,
}

impl PairIndex {
    pub fn new(params: GlobalParams, i: u32, j: u32) -> Result<Self> {
        if i > j || params.check_component(i).is_err() || params.check_component(j).is_err() {
            return Err(Error::InvalidPair { i, j, n: params.n(), s: params.s() });
        }
        Ok(PairIndex { params, i, j })
    }

    pub fn component(params: GlobalParams, i: u32) -> Result<Self> {
        Self::new(params, i, i)
    }

    /// All valid pairs, ordered by `(i, j)`.
    pub fn all(params: GlobalParams) -> Vec<PairIndex> {
        params.components().flat_map(|i| (i..=params.n()).map(move |j| PairIndex { params, i, j })).collect()
    }

    pub fn params(&self) -> GlobalParams {
        self.params
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    /// The pairs directly below in the inclusion order:
    /// `K^{i-1,j}` and `K^{i,j+1}`.
    pub fn lower_covers(&self) -> Vec<PairIndex> {
        let mut out = Vec::new();
        if self.i > self.params.min_component() {
            out.push(PairIndex { i: self.i - 1, ..*self });
        }
        if self.j < self.params.n() {
            out.push(PairIndex { j: self.j + 1, ..*self });
        }
        out
    }

    pub fn upper_covers(&self) -> Vec<PairIndex> {
        let mut out = Vec::new();
        if self.i < self.j {
            out.push(PairIndex { i: self.i + 1, ..*self });
            out.push(PairIndex { j: self.j - 1, ..*self });
        }
        out
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K^({},{})", self.i, self.j)
    }
}

impl Serialize for PairIndex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(2)?;
        t.serialize_element(&self.i)?;
        t.serialize_element(&self.j)?;
        t.end()
    }
}

fn common_params(pairs: &[PairIndex], what: &'static str) -> Result<GlobalParams> {
    let first = pairs.first().ok_or(Error::EmptyInput(what))?;
    if pairs.iter().any(|p| p.params != first.params) {
        return Err(Error::MismatchedParams);
    }
    Ok(first.params)
}

/// `K^{a} ∩ K^{b} ∩ ... = K^{min i, max j}`.
pub fn intersect(pairs: &[PairIndex]) -> Result<PairIndex> {
    let params = common_params(pairs, "intersect")?;
    let i = pairs.iter().map(|p| p.i).min().expect("nonempty");
    let j = pairs.iter().map(|p| p.j).max().expect("nonempty");
    Ok(PairIndex { params, i, j })
}

/// Whether `K^a ⊆ K^b`, i.e. `a.i <= b.i` and `a.j >= b.j`.
///
/// This is the reverse of the root-poset order: `K^{2,n}` (or `K^{1,n}`)
/// is the smallest intersection and the top root.
pub fn poset_leq(a: PairIndex, b: PairIndex) -> bool {
    a.params == b.params && a.i <= b.i && a.j >= b.j
}

fn binom(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::one(), |acc, t| acc * (n - t) / (t + 1))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, t| acc * t)
}

/// One stage of an iterated Grassmannian bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Fiber {
    /// `Gr(k, m)`.
    Grassmannian { k: u32, m: u32 },
    /// `Fl(1^m)`.
    CompleteFlag { m: u32 },
    /// `P^d`.
    Projective { d: u32 },
}

impl Fiber {
    pub fn dimension(&self) -> u32 {
        match *self {
            Fiber::Grassmannian { k, m } => k * (m - k),
            Fiber::CompleteFlag { m } => m * m.saturating_sub(1) / 2,
            Fiber::Projective { d } => d,
        }
    }

    pub fn poincare(&self) -> QPoly {
        match *self {
            Fiber::Grassmannian { k, m } => q_binomial(m, k).expect("k <= m"),
            Fiber::CompleteFlag { m } => q_factorial(m),
            Fiber::Projective { d } => q_int(d + 1).expect("d + 1 >= 1"),
        }
    }

    /// Number of Schubert cells, counted directly.
    pub fn cell_count(&self) -> BigInt {
        match *self {
            Fiber::Grassmannian { k, m } => binom(m, k),
            Fiber::CompleteFlag { m } => factorial(m),
            Fiber::Projective { d } => BigInt::from(d + 1),
        }
    }
}

impl fmt::Display for Fiber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fiber::Grassmannian { k, m } => write!(f, "Gr({k},{m})"),
            Fiber::CompleteFlag { m } => write!(f, "Fl(1^{m})"),
            Fiber::Projective { d } => write!(f, "P^{d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BundleType(pub Vec<Fiber>);

impl BundleType {
    pub fn dimension(&self) -> u32 {
        self.0.iter().map(Fiber::dimension).sum()
    }

    pub fn poincare(&self) -> QPoly {
        QPoly::product(self.0.iter().map(Fiber::poincare))
    }

    pub fn cell_count(&self) -> BigInt {
        self.0.iter().map(Fiber::cell_count).product()
    }
}

impl fmt::Display for BundleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(", "))
    }
}

/// `Gr(j-1, n-1), Fl(1^{j-1}), P^{s+i-n-1}, Fl(1^{n-j+1})`: choose
/// `V_{j-1} ⊆ im(x)`, a flag inside it, the line `V_n / im(x)` inside
/// `x^{-1}V_{i-1} / im(x)`, and a flag in `V_n / V_{j-1}`.
pub fn bundle_type(pair: PairIndex) -> BundleType {
    let (n, s) = (pair.params.n(), pair.params.s());
    let (i, j) = (pair.i, pair.j);
    BundleType(vec![
        Fiber::Grassmannian { k: j - 1, m: n - 1 },
        Fiber::CompleteFlag { m: j - 1 },
        Fiber::Projective { d: s + i - n - 1 },
        Fiber::CompleteFlag { m: n - j + 1 },
    ])
}

/// `C(n-1, 2) + s - 1 - (j - i)`, the sum of the fiber dimensions.
pub fn dimension(pair: PairIndex) -> u32 {
    let (n, s) = (pair.params.n(), pair.params.s());
    (n - 1) * (n - 2) / 2 + s - 1 - (pair.j - pair.i)
}

pub fn poincare_pair(pair: PairIndex) -> QPoly {
    bundle_type(pair).poincare()
}

/// Cells `(i, j)` of the grid lying above a Dyck path; column `i` runs
/// over `2..=n` and row `j` over `1..=n` counted from the bottom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckCellSet {
    n: u32,
    cells: BTreeSet<(u32, u32)>,
}

impl DyckCellSet {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.cells.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: (u32, u32)) -> bool {
        self.cells.contains(&cell)
    }

    /// Cells strictly to the left.
    pub fn arm(&self, (i, _): (u32, u32)) -> u32 {
        i - 2
    }

    /// Cells strictly above.
    pub fn leg(&self, (_, j): (u32, u32)) -> u32 {
        self.n - j
    }

    pub fn is_up_left_closed(&self) -> bool {
        self.cells.iter().all(|&(i, j)| (2..=i).all(|a| (j..=self.n).all(|b| self.cells.contains(&(a, b)))))
    }

    /// `Σ_{c in D} q^{arm(c) + leg(c)}`.
    pub fn weight(&self) -> QPoly {
        let mut coeffs = Vec::<BigInt>::new();
        for &c in &self.cells {
            let d = (self.arm(c) + self.leg(c)) as usize;
            if coeffs.len() <= d {
                coeffs.resize(d + 1, BigInt::from(0));
            }
            coeffs[d] += 1;
        }
        QPoly::from_coeffs(coeffs)
    }
}

impl Serialize for DyckCellSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.cells.iter().map(|&(i, j)| [i, j]))
    }
}

fn require_minimal(params: GlobalParams, what: &'static str) -> Result<()> {
    if params.is_minimal() {
        Ok(())
    } else {
        Err(Error::RequiresMinimalS(what))
    }
}

/// Cells weakly above and to the left of some `(i, j)` in `pairs`.
pub fn dyck_from_pairs(pairs: &[PairIndex]) -> Result<DyckCellSet> {
    let params = common_params(pairs, "dyck_from_pairs")?;
    require_minimal(params, "the Dyck-path construction")?;
    let n = params.n();
    let mut cells = BTreeSet::new();
    for p in pairs {
        for a in 2..=p.i {
            for b in p.j..=n {
                cells.insert((a, b));
            }
        }
    }
    Ok(DyckCellSet { n, cells })
}

/// `[n-1]_q! Σ_{c in D} q^{arm(c) + leg(c)}` for the union of the `K^{i,j}`.
pub fn poincare_union(pairs: &[PairIndex]) -> Result<QPoly> {
    let dyck = dyck_from_pairs(pairs)?;
    Ok(&q_factorial(dyck.n - 1) * &dyck.weight())
}

/// Inclusion–exclusion over all nonempty subsets of `pairs`, each
/// intersection evaluated by [`poincare_pair`].
///
/// Additivity holds because every `K^{i,j}` is a union of cells of one
/// common affine paving; this is checked, not derived.
pub fn poincare_union_oracle(pairs: &[PairIndex]) -> Result<QPoly> {
    let params = common_params(pairs, "poincare_union_oracle")?;
    require_minimal(params, "the union formula")?;
    if pairs.len() > ORACLE_MAX_PAIRS {
        return Err(Error::TooManyPairs { got: pairs.len(), cap: ORACLE_MAX_PAIRS });
    }
    // signed number of subsets whose intersection is a given pair
    let mut weight: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    let m = pairs.len();
    for mask in 1u32..(1 << m) {
        let (mut i, mut j) = (u32::MAX, 0);
        for (k, p) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                i = i.min(p.i);
                j = j.max(p.j);
            }
        }
        let sign = if mask.count_ones() % 2 == 1 { 1 } else { -1 };
        *weight.entry((i, j)).or_default() += sign;
    }
    Ok(weight
        .into_iter()
        .filter(|&(_, w)| w != 0)
        .map(|((i, j), w)| {
            let p = poincare_pair(PairIndex { params, i, j });
            &p * &QPoly::from_coeffs(vec![BigInt::from(w)])
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> QPoly {
        QPoly::from_coeffs(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    fn pair(n: u32, s: u32, i: u32, j: u32) -> PairIndex {
        PairIndex::new(GlobalParams::new(n, s).unwrap(), i, j).unwrap()
    }

    fn qi(n: u32) -> QPoly {
        q_int(n).unwrap()
    }

    #[test]
    fn pair_validation() {
        let p = GlobalParams::new(4, 3).unwrap();
        assert!(PairIndex::new(p, 1, 2).is_err());
        assert!(PairIndex::new(p, 3, 2).is_err());
        assert!(PairIndex::new(p, 2, 5).is_err());
        assert!(PairIndex::new(GlobalParams::new(4, 4).unwrap(), 1, 4).is_ok());
        assert_eq!(PairIndex::all(p).len(), 6);
        assert_eq!(PairIndex::all(GlobalParams::new(4, 5).unwrap()).len(), 10);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(intersect(&[pair(5, 4, 2, 2), pair(5, 4, 4, 4)]).unwrap(), pair(5, 4, 2, 4));
        assert_eq!(intersect(&[pair(5, 4, 3, 3)]).unwrap(), pair(5, 4, 3, 3));
        assert_eq!(intersect(&[pair(5, 4, 2, 3), pair(5, 4, 3, 4)]).unwrap(), pair(5, 4, 2, 4));
        assert_eq!(intersect(&[]), Err(Error::EmptyInput("intersect")));
        assert_eq!(intersect(&[pair(5, 4, 2, 3), pair(5, 5, 3, 4)]), Err(Error::MismatchedParams));
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(pair(4, 3, 3, 3)), 5);
        assert_eq!(dimension(pair(4, 3, 2, 4)), 3);
        assert_eq!(dimension(pair(5, 4, 2, 2)), 9);
    }

    #[test]
    fn bundle_type_examples() {
        use Fiber::*;
        assert_eq!(
            bundle_type(pair(4, 3, 3, 3)).0,
            vec![Grassmannian { k: 2, m: 3 }, CompleteFlag { m: 2 }, Projective { d: 1 }, CompleteFlag { m: 2 }]
        );
        assert_eq!(
            bundle_type(pair(5, 4, 2, 4)).0,
            vec![Grassmannian { k: 3, m: 4 }, CompleteFlag { m: 3 }, Projective { d: 0 }, CompleteFlag { m: 2 }]
        );
        assert_eq!(bundle_type(pair(4, 3, 3, 3)).dimension(), 5);
        assert_eq!(bundle_type(pair(4, 3, 3, 3)).to_string(), "Gr(2,3), Fl(1^2), P^1, Fl(1^2)");
    }

    #[test]
    fn poincare_pair_examples() {
        assert_eq!(poincare_pair(pair(4, 3, 3, 3)), QPoly::product([q_factorial(3), qi(2), qi(2)]));
        assert_eq!(poincare_pair(pair(5, 4, 2, 3)), QPoly::product([q_factorial(4), qi(1), qi(3)]));
        assert_eq!(poincare_pair(pair(3, 2, 2, 3)), poly(&[1, 1]));
    }

    #[test]
    fn closed_form_when_s_is_minimal() {
        for n in 2..9 {
            for p in PairIndex::all(GlobalParams::minimal(n).unwrap()) {
                let expected = QPoly::product([q_factorial(n - 1), qi(p.i - 1), qi(n - p.j + 1)]);
                assert_eq!(poincare_pair(p), expected);
            }
        }
    }

    #[test]
    fn degree_dimension_and_cells() {
        for n in 2..9 {
            for s in n - 1..n + 3 {
                for p in PairIndex::all(GlobalParams::new(n, s).unwrap()) {
                    let poly = poincare_pair(p);
                    let bt = bundle_type(p);
                    assert_eq!(poly.degree(), Some(dimension(p) as usize));
                    assert_eq!(bt.dimension(), dimension(p));
                    assert!(poly.has_nonnegative_coeffs());
                    assert_eq!(poly.eval(&BigInt::one()), bt.cell_count());
                }
            }
        }
    }

    #[test]
    fn dyck_examples() {
        let d = dyck_from_pairs(&[pair(5, 4, 2, 3), pair(5, 4, 4, 4)]).unwrap();
        let cells: Vec<_> = d.cells().collect();
        assert_eq!(cells, vec![(2, 3), (2, 4), (2, 5), (3, 4), (3, 5), (4, 4), (4, 5)]);
        assert_eq!(d.weight(), poly(&[1, 2, 3, 1]));
        assert!(d.is_up_left_closed());

        let d = dyck_from_pairs(&[pair(5, 4, 2, 5)]).unwrap();
        assert_eq!(d.cells().collect::<Vec<_>>(), vec![(2, 5)]);
        let d = dyck_from_pairs(&[pair(4, 3, 2, 3)]).unwrap();
        assert_eq!(d.cells().collect::<Vec<_>>(), vec![(2, 3), (2, 4)]);
        assert_eq!(dyck_from_pairs(&[pair(4, 4, 2, 3)]), Err(Error::RequiresMinimalS("the Dyck-path construction")));
    }

    #[test]
    fn union_example() {
        let pairs = [pair(5, 4, 2, 3), pair(5, 4, 4, 4)];
        let expected = poly(&[1, 5, 14, 26, 35, 36, 28, 16, 6, 1]);
        assert_eq!(poincare_union(&pairs).unwrap(), expected);
        assert_eq!(poincare_union_oracle(&pairs).unwrap(), expected);
        assert!(poincare_union(&[pair(4, 4, 1, 1)]).is_err());
    }

    #[test]
    fn union_of_singleton_is_pair() {
        for n in 2..8 {
            for p in PairIndex::all(GlobalParams::minimal(n).unwrap()) {
                assert_eq!(poincare_union(&[p]).unwrap(), poincare_pair(p));
                assert_eq!(poincare_union_oracle(&[p]).unwrap(), poincare_pair(p));
            }
        }
    }

    #[test]
    fn whole_space_two_ways() {
        let comps: Vec<_> = (2..=4).map(|i| pair(4, 3, i, i)).collect();
        assert_eq!(poincare_union(&comps).unwrap(), poincare_union_oracle(&comps).unwrap());
    }

    #[test]
    fn oracle_cap() {
        let p = pair(6, 5, 3, 3);
        let many = vec![p; ORACLE_MAX_PAIRS + 1];
        assert_eq!(poincare_union_oracle(&many), Err(Error::TooManyPairs { got: 21, cap: 20 }));
    }

    #[test]
    fn poset_examples() {
        assert!(poset_leq(pair(4, 3, 2, 4), pair(4, 3, 3, 3)));
        assert!(poset_leq(pair(4, 3, 3, 3), pair(4, 3, 3, 3)));
        assert!(!poset_leq(pair(4, 3, 2, 3), pair(4, 3, 3, 4)));
        assert!(!poset_leq(pair(4, 3, 3, 4), pair(4, 3, 2, 3)));
    }

    #[test]
    fn covers_are_the_poset_covers() {
        for n in 2..7 {
            for s in [n - 1, n + 1] {
                let all = PairIndex::all(GlobalParams::new(n, s).unwrap());
                for &a in &all {
                    let below: Vec<_> = all
                        .iter()
                        .copied()
                        .filter(|&b| b != a && poset_leq(b, a))
                        .filter(|&b| !all.iter().any(|&c| c != a && c != b && poset_leq(b, c) && poset_leq(c, a)))
                        .collect();
                    let mut covers = a.lower_covers();
                    covers.sort();
                    assert_eq!(covers, below);
                    for b in a.upper_covers() {
                        assert!(b.lower_covers().contains(&a));
                    }
                }
            }
        }
    }

    #[test]
    fn inclusion_lowers_dimension() {
        for n in 2..8 {
            let all = PairIndex::all(GlobalParams::minimal(n).unwrap());
            for &a in &all {
                for &b in &all {
                    if poset_leq(a, b) {
                        assert!(dimension(a) <= dimension(b));
                    }
                }
            }
        }
    }

    #[test]
    fn json_shapes() {
        assert_eq!(serde_json::to_string(&pair(4, 3, 2, 3)).unwrap(), "[2,3]");
        let d = dyck_from_pairs(&[pair(4, 3, 2, 3)]).unwrap();
        assert_eq!(serde_json::to_string(&d).unwrap(), "[[2,3],[2,4]]");
        let bt = bundle_type(pair(4, 3, 3, 3));
        assert_eq!(serde_json::to_string(&bt.0[0]).unwrap(), r#"{"kind":"grassmannian","k":2,"m":3}"#);
    }
}
