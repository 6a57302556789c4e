//! Exact set-level oracle for equicomplementary realizations.
//!
//! Each coordinate axis is modelled by the finite set `{0,1}^k` of atoms
//! (one fair bit per complement class): the letter `(c, p)` realizes to the
//! half `{x : x_c = p}`, so independent classes intersect in exactly half of
//! each other, which is the only structural property the measure identities
//! use. A d-dimensional box then becomes a product of per-coordinate atom
//! sets, and a polybox becomes a set of cells in `({0,1}^k)^d`, stored as a
//! bit vector. Unions, differences, containment, equivalence and
//! q-equivalence are all exact bit-set questions.

use crate::code::PolyboxCode;
use crate::error::{Error, Result};
use crate::word::Word;

/// Hard cap on `k*d`; keeps a single `CellSet` at or below 2 MB.
pub const GRID_CAP: usize = 24;

/// An exact subset of the `2^{kd}` realization grid cells.
///
/// Cell indices are coordinate-major with coordinate 1 most significant:
/// `index = Σ_i atom_i · 2^{k(d-1-i)}`, where `atom_i ∈ {0,1}^k` is read as
/// a k-bit integer whose bit `c` is the class-`c` coin of that axis point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSet {
    k: usize,
    d: usize,
    bits: Vec<u64>,
}

impl CellSet {
    /// Empty cell set over a `k`-class, dimension-`d` grid.
    pub fn empty(k: usize, d: usize) -> Result<CellSet> {
        if k == 0 || d == 0 {
            return Err(Error::InvalidInput("grid needs k >= 1 and d >= 1".into()));
        }
        let kd = k * d;
        if kd > GRID_CAP {
            return Err(Error::GridCapExceeded { kd, cap: GRID_CAP });
        }
        let words = (1usize << kd).div_ceil(64);
        Ok(CellSet { k, d, bits: vec![0; words] })
    }

    pub fn classes(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Total number of grid cells, `2^{kd}`.
    pub fn grid_size(&self) -> usize {
        1usize << (self.k * self.d)
    }

    #[inline]
    fn shift(&self, coord: usize) -> usize {
        self.k * (self.d - 1 - coord)
    }

    #[inline]
    pub fn contains_cell(&self, index: usize) -> bool {
        self.bits[index >> 6] >> (index & 63) & 1 == 1
    }

    #[inline]
    fn set_cell(&mut self, index: usize) {
        self.bits[index >> 6] |= 1 << (index & 63);
    }

    /// Number of occupied cells.
    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty_set(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    fn check_same_grid(&self, other: &CellSet) -> Result<()> {
        if self.k != other.k || self.d != other.d {
            return Err(Error::InvalidInput(format!(
                "grid mismatch: ({},{}) vs ({},{})",
                self.k, self.d, other.k, other.d
            )));
        }
        Ok(())
    }

    pub fn union(&self, other: &CellSet) -> Result<CellSet> {
        self.check_same_grid(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a | b).collect();
        Ok(CellSet { k: self.k, d: self.d, bits })
    }

    pub fn intersection(&self, other: &CellSet) -> Result<CellSet> {
        self.check_same_grid(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & b).collect();
        Ok(CellSet { k: self.k, d: self.d, bits })
    }

    pub fn difference(&self, other: &CellSet) -> Result<CellSet> {
        self.check_same_grid(other)?;
        let bits = self.bits.iter().zip(&other.bits).map(|(a, b)| a & !b).collect();
        Ok(CellSet { k: self.k, d: self.d, bits })
    }

    pub fn is_subset_of(&self, other: &CellSet) -> Result<bool> {
        self.check_same_grid(other)?;
        Ok(self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0))
    }

    /// Atoms of the axis set `Es` for a letter: the `2^{k-1}` points of
    /// `{0,1}^k` whose class-`c` bit equals the letter's polarity.
    fn letter_atoms(k: usize, letter: crate::alphabet::Letter) -> Vec<usize> {
        let c = letter.class();
        let p = letter.polarity() as usize;
        (0..1usize << k).filter(|atom| (atom >> c) & 1 == p).collect()
    }

    /// Mark all `2^{(k-1)d}` cells of the box of `v`.
    fn fill_word(&mut self, v: &Word) -> Result<()> {
        if v.dim() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, got: v.dim() });
        }
        if v.classes_used() > self.k {
            return Err(Error::InvalidInput(format!(
                "word uses {} classes, grid has {}",
                v.classes_used(),
                self.k
            )));
        }
        let atoms: Vec<Vec<usize>> =
            (0..self.d).map(|i| Self::letter_atoms(self.k, v.letter(i))).collect();
        // Depth-first product over per-coordinate atom lists.
        let mut stack = vec![0usize; self.d + 1];
        let mut choice = vec![0usize; self.d];
        let mut depth = 0;
        loop {
            if depth == self.d {
                self.set_cell(stack[depth]);
                depth -= 1;
                choice[depth] += 1;
                continue;
            }
            if choice[depth] == atoms[depth].len() {
                if depth == 0 {
                    break;
                }
                choice[depth] = 0;
                depth -= 1;
                choice[depth] += 1;
                continue;
            }
            stack[depth + 1] = stack[depth] | (atoms[depth][choice[depth]] << self.shift(depth));
            depth += 1;
        }
        Ok(())
    }
}

/// Realize a single word's box on a `k`-class grid.
pub fn realize_word(v: &Word, k: usize) -> Result<CellSet> {
    let mut cells = CellSet::empty(k, v.dim())?;
    cells.fill_word(v)?;
    Ok(cells)
}

/// Realize the union of a code's boxes on a `k`-class grid.
pub fn realize(code: &PolyboxCode, k: usize) -> Result<CellSet> {
    let mut cells = CellSet::empty(k, code.dim())?;
    for v in code.words() {
        cells.fill_word(v)?;
    }
    Ok(cells)
}

/// Smallest class count that covers every input code.
pub fn joint_classes(codes: &[&PolyboxCode]) -> usize {
    codes.iter().map(|c| c.classes_used()).max().unwrap_or(1)
}

/// `⋃E(V) = ⋃E(W)` on the grid.
pub fn equivalent_grid(v: &PolyboxCode, w: &PolyboxCode) -> Result<bool> {
    let k = joint_classes(&[v, w]);
    Ok(realize(v, k)? == realize(w, k)?)
}

/// `⋃E(V) ⊆ ⋃E(W)` on the grid.
pub fn subset_grid(v: &PolyboxCode, w: &PolyboxCode) -> Result<bool> {
    let k = joint_classes(&[v, w]);
    realize(v, k)?.is_subset_of(&realize(w, k)?)
}

/// q-equivalence: the unions agree inside the box of `q`.
pub fn q_equivalent(k_code: &PolyboxCode, m_code: &PolyboxCode, q: &Word) -> Result<bool> {
    let k = joint_classes(&[k_code, m_code]).max(q.classes_used());
    let q_cells = realize_word(q, k)?;
    let a = realize(k_code, k)?.intersection(&q_cells)?;
    let b = realize(m_code, k)?.intersection(&q_cells)?;
    Ok(a == b)
}

/// True iff all cells of the box of `v` lie in `cells`.
pub fn box_within(v: &Word, cells: &CellSet) -> Result<bool> {
    let boxed = realize_word(v, cells.classes())?;
    boxed.is_subset_of(cells)
}

/// True iff `cells` is an i-cylinder: every axis-`i` line (all `2^k` atoms
/// at coordinate `i`, other coordinates fixed) is fully inside or fully
/// outside the set.
pub fn is_i_cylinder(cells: &CellSet, i: usize) -> Result<bool> {
    if i >= cells.dim() {
        return Err(Error::IndexOutOfRange { index: i, dim: cells.dim() });
    }
    let k = cells.classes();
    let shift = k * (cells.dim() - 1 - i);
    let digit_mask = ((1usize << k) - 1) << shift;
    for index in 0..cells.grid_size() {
        if index & digit_mask != 0 {
            continue; // visit each line once, at digit 0
        }
        let first = cells.contains_cell(index);
        for atom in 1..1usize << k {
            if cells.contains_cell(index | (atom << shift)) != first {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One complement-class group of a code at a coordinate.
#[derive(Debug, Clone)]
pub struct CylinderGroup {
    /// Complement class shared by the group's letters at the coordinate.
    pub class: usize,
    /// The subcode `V^{i,l} ∪ V^{i,l'}`.
    pub code: PolyboxCode,
    /// Whether the group's realization union is an i-cylinder.
    pub is_cylinder: bool,
}

/// Partition the code by complement class at coordinate `i` and report, for
/// each group `V^{i,l} ∪ V^{i,l'}` and for the whole code, whether the
/// realized union is an i-cylinder.
pub fn cylinder_groups(code: &PolyboxCode, i: usize) -> Result<(Vec<CylinderGroup>, bool)> {
    if i >= code.dim() {
        return Err(Error::IndexOutOfRange { index: i, dim: code.dim() });
    }
    let k = code.classes_used();
    let mut groups = Vec::new();
    for class in 0..k {
        let words: Vec<Word> = code
            .words()
            .iter()
            .filter(|w| w.letter(i).class() == class)
            .copied()
            .collect();
        if words.is_empty() {
            continue;
        }
        let group = PolyboxCode::new(words)?;
        let cells = realize(&group, k)?;
        groups.push(CylinderGroup { class, code: group, is_cylinder: is_i_cylinder(&cells, i)? });
    }
    let whole = is_i_cylinder(&realize(code, k)?, i)?;
    Ok((groups, whole))
}
