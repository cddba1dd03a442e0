//! Tableaux indexing the components, row-increasing partial fillings
//! indexing permutation flags, and the partial permutations they encode.
//!
//! All coordinates live in one diagram, drawn top to bottom:
//!
//! ```text
//!            e_{n-1+s}      <- s-n+1 single-width rows (second column only)
//!            ...
//!            e_{2n-1}
//! e_{n-1}    e_{2n-2}       <- n-1 rows of width two
//! ...        ...
//! e_1        e_n
//! ```
//!
//! The nilpotent `x` sends each vector to the cell on its left, or to zero.
//! Row 0 is the top row; a tableau's top-right entry sits in the topmost
//! second-column cell, which is always `e_{n-1+s}`.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `(n, s)` for the fiber with `lambda = (1^{n-1})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GlobalParams {
    n: u32,
    s: u32,
}

impl GlobalParams {
    pub fn new(n: u32, s: u32) -> Result<Self> {
        if n < 2 || s + 1 < n {
            return Err(Error::InvalidParams { n, s });
        }
        Ok(GlobalParams { n, s })
    }

    /// The `s = n - 1` case.
    pub fn minimal(n: u32) -> Result<Self> {
        Self::new(n, n.saturating_sub(1))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn is_minimal(&self) -> bool {
        self.s + 1 == self.n
    }

    /// Dimension `n - 1 + s` of the ambient space.
    pub fn ambient_dim(&self) -> u32 {
        self.n - 1 + self.s
    }

    /// Number of single-width rows on top of the diagram.
    pub fn single_rows(&self) -> usize {
        (self.s + 1 - self.n) as usize
    }

    pub fn rows(&self) -> usize {
        self.single_rows() + self.n as usize - 1
    }

    /// Smallest admissible component index: 2 when `s = n-1`, else 1.
    pub fn min_component(&self) -> u32 {
        if self.is_minimal() {
            2
        } else {
            1
        }
    }

    pub fn components(&self) -> std::ops::RangeInclusive<u32> {
        self.min_component()..=self.n
    }

    pub fn check_component(&self, i: u32) -> Result<()> {
        if self.components().contains(&i) {
            Ok(())
        } else {
            Err(Error::InvalidComponent { i, n: self.n, s: self.s })
        }
    }

    pub fn cell_exists(&self, cell: Cell) -> bool {
        match cell.col {
            0 => cell.row >= self.single_rows() && cell.row < self.rows(),
            1 => cell.row < self.rows(),
            _ => false,
        }
    }

    /// Basis index of the vector sitting in `cell`.
    pub fn basis_index(&self, cell: Cell) -> u32 {
        debug_assert!(self.cell_exists(cell));
        let t = self.single_rows();
        if cell.row < t {
            return self.ambient_dim() - cell.row as u32;
        }
        let r = (cell.row - t) as u32;
        match cell.col {
            0 => self.n - 1 - r,
            _ => 2 * self.n - 2 - r,
        }
    }

    pub fn cell_of_basis(&self, index: u32) -> Result<Cell> {
        let (n, dim) = (self.n, self.ambient_dim());
        if index == 0 || index > dim {
            return Err(Error::BasisIndexOutOfRange { index, dim });
        }
        let t = self.single_rows();
        let cell = if index < n {
            Cell { row: t + (n - 1 - index) as usize, col: 0 }
        } else if index <= 2 * n - 2 {
            Cell { row: t + (2 * n - 2 - index) as usize, col: 1 }
        } else {
            Cell { row: (dim - index) as usize, col: 1 }
        };
        Ok(cell)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

/// Word `w_1 ... w_n` of distinct basis indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PartialPermutation(Vec<u32>);

impl PartialPermutation {
    pub fn new(w: Vec<u32>) -> Self {
        PartialPermutation(w)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for PartialPermutation {
    /// Digits run together when every letter is a single digit (`3216`),
    /// otherwise letters are comma separated.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&x| x < 10) {
            for x in &self.0 {
                write!(f, "{x}")?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.0.iter().join(","))
        }
    }
}

/// Standard tableau of shape `(2,1^{n-2})/(1^{s-n+1})`: a column holding
/// every label except `top_right`, plus the top-right cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ComponentTableau {
    params: GlobalParams,
    top_right: u32,
}

impl ComponentTableau {
    pub fn new(params: GlobalParams, top_right: u32) -> Result<Self> {
        params.check_component(top_right)?;
        Ok(ComponentTableau { params, top_right })
    }

    pub fn params(&self) -> GlobalParams {
        self.params
    }

    pub fn top_right(&self) -> u32 {
        self.top_right
    }

    /// First-column entries, top to bottom.
    pub fn column(&self) -> Vec<u32> {
        (1..=self.params.n).filter(|&l| l != self.top_right).collect()
    }

    /// Rows as drawn: the first row is `[column[0], i]` for a straight
    /// shape and `[null, i]` for a skew one.
    pub fn rows(&self) -> Vec<[Option<u32>; 2]> {
        let col = self.column();
        if self.params.is_minimal() {
            col.iter().enumerate().map(|(r, &a)| [Some(a), (r == 0).then_some(self.top_right)]).collect()
        } else {
            std::iter::once([None, Some(self.top_right)]).chain(col.iter().map(|&a| [Some(a), None])).collect()
        }
    }

    /// The Schubert cell word
    /// `[n-1, n-2, ..., n-i+1, n+s-1, n-i, ..., 1]`.
    pub fn partial_permutation(&self) -> PartialPermutation {
        let (n, s, i) = (self.params.n, self.params.s, self.top_right);
        let mut w: Vec<u32> = (n - i + 1..n).rev().collect();
        w.push(n + s - 1);
        w.extend((1..=n - i).rev());
        PartialPermutation(w)
    }

    /// The same labels placed in the filling diagram: the column goes down
    /// the first column and `i` into the topmost second-column cell.
    pub fn to_filling(&self) -> Filling {
        let t = self.params.single_rows();
        let mut cells = vec![Cell { row: 0, col: 1 }; self.params.n as usize];
        for (r, a) in self.column().into_iter().enumerate() {
            cells[a as usize - 1] = Cell { row: t + r, col: 0 };
        }
        Filling::from_cells(self.params, cells).expect("tableau filling is valid")
    }
}

pub fn enumerate_components(params: GlobalParams) -> Vec<ComponentTableau> {
    params.components().map(|i| ComponentTableau { params, top_right: i }).collect()
}

pub fn tableau_to_partial_permutation(t: &ComponentTableau) -> PartialPermutation {
    t.partial_permutation()
}

/// Row-increasing partial labelling of the diagram with `1..=n`: the whole
/// first column is labelled, plus one second-column cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filling {
    params: GlobalParams,
    /// `cell_of[l-1]` is the cell labelled `l`.
    cell_of: Vec<Cell>,
    /// `label_at[row][col]`.
    label_at: Vec<[Option<u32>; 2]>,
}

impl Filling {
    pub fn from_cells(params: GlobalParams, cell_of: Vec<Cell>) -> Result<Self> {
        let n = params.n as usize;
        if cell_of.len() != n {
            return Err(Error::InvalidFilling(format!("{} labels for n={n}", cell_of.len())));
        }
        let mut label_at = vec![[None; 2]; params.rows()];
        for (k, &cell) in cell_of.iter().enumerate() {
            if !params.cell_exists(cell) {
                return Err(Error::InvalidFilling(format!("no cell at {cell:?}")));
            }
            let slot = &mut label_at[cell.row][cell.col];
            if slot.is_some() {
                return Err(Error::InvalidFilling(format!("cell {cell:?} labelled twice")));
            }
            *slot = Some(k as u32 + 1);
        }
        let t = params.single_rows();
        for (row, [left, right]) in label_at.iter().enumerate() {
            if row >= t && left.is_none() {
                return Err(Error::InvalidFilling(format!("first-column cell in row {row} is empty")));
            }
            if let (Some(a), Some(b)) = (left, right) {
                if a > b {
                    return Err(Error::InvalidFilling(format!("row {row} decreases")));
                }
            }
        }
        Ok(Filling { params, cell_of, label_at })
    }

    /// From the diagram rows, top to bottom, `None` for an empty cell.
    pub fn from_rows(params: GlobalParams, rows: &[[Option<u32>; 2]]) -> Result<Self> {
        let n = params.n;
        if rows.len() != params.rows() {
            return Err(Error::InvalidFilling(format!("{} rows, expected {}", rows.len(), params.rows())));
        }
        let mut cell_of = vec![None; n as usize];
        for (row, r) in rows.iter().enumerate() {
            for (col, label) in r.iter().enumerate() {
                let Some(l) = *label else { continue };
                if l == 0 || l > n {
                    return Err(Error::InvalidFilling(format!("label {l} outside 1..={n}")));
                }
                if cell_of[l as usize - 1].replace(Cell { row, col }).is_some() {
                    return Err(Error::InvalidFilling(format!("label {l} used twice")));
                }
            }
        }
        let cells = cell_of
            .into_iter()
            .enumerate()
            .map(|(k, c)| c.ok_or_else(|| Error::InvalidFilling(format!("label {} missing", k + 1))))
            .collect::<Result<Vec<_>>>()?;
        Self::from_cells(params, cells)
    }

    pub fn from_partial_permutation(params: GlobalParams, w: &PartialPermutation) -> Result<Self> {
        let cells = w.as_slice().iter().map(|&x| params.cell_of_basis(x)).collect::<Result<Vec<_>>>()?;
        Self::from_cells(params, cells)
    }

    pub fn params(&self) -> GlobalParams {
        self.params
    }

    pub fn cell_of(&self, label: u32) -> Cell {
        self.cell_of[label as usize - 1]
    }

    pub fn label_at(&self, cell: Cell) -> Option<u32> {
        self.label_at.get(cell.row).and_then(|r| r[cell.col])
    }

    pub fn rows(&self) -> &[[Option<u32>; 2]] {
        &self.label_at
    }

    /// The unique second-column label `b` and the label to its left, if any.
    pub fn second_column(&self) -> (u32, Option<u32>) {
        let (row, b) = self
            .label_at
            .iter()
            .enumerate()
            .find_map(|(r, cells)| cells[1].map(|b| (r, b)))
            .expect("a valid filling has exactly one second-column label");
        (b, self.label_at[row][0])
    }

    pub fn partial_permutation(&self) -> PartialPermutation {
        PartialPermutation(self.cell_of.iter().map(|&c| self.params.basis_index(c)).collect())
    }
}

pub fn filling_to_partial_permutation(f: &Filling) -> PartialPermutation {
    f.partial_permutation()
}

/// Every filling, ordered lexicographically by partial permutation.
pub fn enumerate_fillings(params: GlobalParams) -> Vec<Filling> {
    let n = params.n;
    let t = params.single_rows();
    let left_cells: Vec<Cell> = (t..params.rows()).map(|row| Cell { row, col: 0 }).collect();
    let mut out = Vec::new();

    let mut place = |fixed: &[(u32, Cell)], free_cells: &[Cell]| {
        let free_labels: Vec<u32> = (1..=n).filter(|l| fixed.iter().all(|(x, _)| x != l)).collect();
        for perm in free_cells.iter().permutations(free_cells.len()) {
            let mut cells = vec![Cell { row: 0, col: 0 }; n as usize];
            for &(l, c) in fixed {
                cells[l as usize - 1] = c;
            }
            for (&l, &&c) in free_labels.iter().zip(perm.iter()) {
                cells[l as usize - 1] = c;
            }
            out.push(Filling::from_cells(params, cells).expect("constructed filling is valid"));
        }
    };

    for b in 1..=n {
        for row in 0..t {
            place(&[(b, Cell { row, col: 1 })], &left_cells);
        }
        for (k, &left) in left_cells.iter().enumerate() {
            let right = Cell { row: left.row, col: 1 };
            let others: Vec<Cell> = left_cells.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &c)| c).collect();
            for a in 1..b {
                place(&[(a, left), (b, right)], &others);
            }
        }
    }

    out.sort_by_cached_key(|f| f.partial_permutation());
    out
}

/// Whether the permutation flag of `f` lies in the component `K^i`: the
/// doubled row holds `a < i <= b`, or the lone second-column label `b` has
/// no left neighbour and `i <= b`.
pub fn classify_filling(f: &Filling, i: u32) -> Result<bool> {
    f.params.check_component(i)?;
    let (b, left) = f.second_column();
    Ok(match left {
        Some(a) => a < i && i <= b,
        None => i <= b,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FillingRecord {
    pub rows: Vec<[Option<u32>; 2]>,
    pub word: PartialPermutation,
}

impl From<&Filling> for FillingRecord {
    fn from(f: &Filling) -> Self {
        FillingRecord { rows: f.label_at.clone(), word: f.partial_permutation() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, s: u32) -> GlobalParams {
        GlobalParams::new(n, s).unwrap()
    }

    fn filling(p: GlobalParams, rows: &[[Option<u32>; 2]]) -> Filling {
        Filling::from_rows(p, rows).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(GlobalParams::new(1, 3).is_err());
        assert!(GlobalParams::new(4, 2).is_err());
        let p = params(4, 3);
        assert_eq!(p.ambient_dim(), 6);
        assert_eq!(p.single_rows(), 0);
        assert_eq!(params(3, 3).single_rows(), 1);
    }

    #[test]
    fn basis_layout_round_trips() {
        for n in 2..7 {
            for s in n - 1..n + 3 {
                let p = params(n, s);
                for idx in 1..=p.ambient_dim() {
                    let c = p.cell_of_basis(idx).unwrap();
                    assert!(p.cell_exists(c));
                    assert_eq!(p.basis_index(c), idx);
                }
                assert!(p.cell_of_basis(0).is_err());
                assert!(p.cell_of_basis(p.ambient_dim() + 1).is_err());
                assert_eq!(p.basis_index(Cell { row: 0, col: 1 }), p.ambient_dim());
            }
        }
    }

    #[test]
    fn components_examples() {
        let tops = |n, s| enumerate_components(params(n, s)).iter().map(|t| t.top_right()).collect::<Vec<_>>();
        assert_eq!(tops(4, 3), vec![2, 3, 4]);
        assert_eq!(tops(3, 3), vec![1, 2, 3]);
        assert_eq!(tops(2, 1), vec![2]);
        assert!(ComponentTableau::new(params(4, 3), 1).is_err());
    }

    #[test]
    fn tableau_rows() {
        let t = ComponentTableau::new(params(4, 3), 3).unwrap();
        assert_eq!(t.rows(), vec![[Some(1), Some(3)], [Some(2), None], [Some(4), None]]);
        let t = ComponentTableau::new(params(3, 3), 2).unwrap();
        assert_eq!(t.rows(), vec![[None, Some(2)], [Some(1), None], [Some(3), None]]);
    }

    #[test]
    fn tableau_words() {
        let p = params(4, 3);
        let w = |i| ComponentTableau::new(p, i).unwrap().partial_permutation().to_string();
        assert_eq!(w(4), "3216");
        assert_eq!(w(3), "3261");
        assert_eq!(w(2), "3621");
    }

    #[test]
    fn tableau_word_matches_its_filling() {
        for n in 2..8 {
            for s in n - 1..n + 3 {
                for t in enumerate_components(params(n, s)) {
                    assert_eq!(t.to_filling().partial_permutation(), t.partial_permutation());
                }
            }
        }
    }

    #[test]
    fn filling_counts() {
        assert_eq!(enumerate_fillings(params(4, 3)).len(), 36);
        assert_eq!(enumerate_fillings(params(3, 3)).len(), 12);
        // one row of width two and nowhere else to put the second label
        assert_eq!(enumerate_fillings(params(2, 1)).len(), 1);
    }

    #[test]
    fn filling_words_examples() {
        let p = params(3, 3);
        let f = filling(p, &[[None, None], [Some(1), Some(2)], [Some(3), None]]);
        assert_eq!(f.partial_permutation().to_string(), "241");

        let p = params(4, 3);
        let f = filling(p, &[[Some(1), Some(4)], [Some(2), None], [Some(3), None]]);
        assert_eq!(f.partial_permutation().to_string(), "3216");
        let f = filling(p, &[[Some(1), Some(4)], [Some(3), None], [Some(2), None]]);
        assert_eq!(f.partial_permutation().to_string(), "3126");
    }

    #[test]
    fn from_rows_rejects_bad_labels() {
        let p = params(3, 2);
        assert!(Filling::from_rows(p, &[[Some(1), Some(2)], [Some(2), None]]).is_err());
        assert!(Filling::from_rows(p, &[[Some(1), Some(4)], [Some(2), None]]).is_err());
        assert!(Filling::from_rows(p, &[[Some(1), Some(3)]]).is_err());
    }

    #[test]
    fn invalid_fillings_rejected() {
        let p = params(4, 3);
        let c = |row, col| Cell { row, col };
        // decreasing row
        assert!(Filling::from_cells(p, vec![c(1, 0), c(0, 1), c(2, 0), c(0, 0)]).is_err());
        // empty first-column cell
        assert!(Filling::from_cells(p, vec![c(0, 0), c(0, 1), c(1, 0), c(1, 1)]).is_err());
        // single-width rows have no left cell
        let q = params(3, 3);
        assert!(Filling::from_cells(q, vec![c(0, 0), c(1, 0), c(2, 0)]).is_err());
    }

    #[test]
    fn classification_examples() {
        let p = params(4, 3);
        let fs = enumerate_fillings(p);
        assert_eq!(fs.iter().filter(|f| classify_filling(f, 3).unwrap()).count(), 24);
        let q = params(3, 3);
        let gs = enumerate_fillings(q);
        assert_eq!(gs.iter().filter(|f| classify_filling(f, 2).unwrap()).count(), 8);

        let f = filling(p, &[[Some(1), Some(4)], [Some(2), None], [Some(3), None]]);
        assert!(classify_filling(&f, 2).unwrap());
        assert!(classify_filling(&f, 1).is_err());
    }

    #[test]
    fn words_invert() {
        for n in 2..7 {
            for s in n - 1..n + 3 {
                let p = params(n, s);
                let fs = enumerate_fillings(p);
                let mut words: Vec<_> = fs.iter().map(|f| f.partial_permutation()).collect();
                for (f, w) in fs.iter().zip(&words) {
                    assert_eq!(&Filling::from_partial_permutation(p, w).unwrap(), f);
                }
                words.dedup();
                assert_eq!(words.len(), fs.len());
            }
        }
    }

    #[test]
    fn record_json_uses_null_for_empty() {
        let p = params(3, 3);
        let f = filling(p, &[[None, Some(3)], [Some(1), None], [Some(2), None]]);
        let json = serde_json::to_string(&FillingRecord::from(&f)).unwrap();
        assert_eq!(json, r#"{"rows":[[null,3],[1,null],[2,null]],"word":[2,1,5]}"#);
    }
}
