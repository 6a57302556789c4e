//! Rational 2-periodic cube tilings of the d-torus.
//!
//! A partition code realizes as a tiling by unit cubes with period 2 in
//! every axis: each coordinate maps letter `(c,0)` to `[o,o+1)+2ℤ` and
//! `(c,1)` to `[o+1,o+2)+2ℤ` for a class offset `o ∈ [0,1)`. Validation is
//! an exact cover count over the `(2D)^d` grid cells of the common
//! denominator `D`; all arithmetic is exact rational.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::alphabet::Letter;
use crate::code::PolyboxCode;
use crate::error::{Error, Result};

type Q = Ratio<i64>;

/// Largest allowed common denominator of the translation coordinates.
pub const DENOMINATOR_CAP: u64 = 60;

/// Per-coordinate, per-class interval offsets in `[0,1)`; offsets must be
/// distinct across classes at each coordinate (equal offsets would make
/// letters of different classes carry the same interval).
#[derive(Debug, Clone)]
pub struct IntervalMap {
    offsets: Vec<Vec<Q>>,
}

impl IntervalMap {
    /// The same class offsets at every coordinate.
    pub fn uniform(d: usize, class_offsets: &[Q]) -> Result<IntervalMap> {
        IntervalMap::new(vec![class_offsets.to_vec(); d])
    }

    pub fn new(offsets: Vec<Vec<Q>>) -> Result<IntervalMap> {
        for per_coord in &offsets {
            for (c, o) in per_coord.iter().enumerate() {
                if o.is_negative() || *o >= Q::one() {
                    return Err(Error::InvalidInput(format!(
                        "offset {o} outside [0,1)"
                    )));
                }
                if per_coord[..c].contains(o) {
                    return Err(Error::InvalidInput(format!(
                        "duplicate offset {o} within a coordinate"
                    )));
                }
            }
        }
        Ok(IntervalMap { offsets })
    }

    pub fn offset(&self, coord: usize, class: usize) -> Q {
        self.offsets[coord][class]
    }

    /// Left endpoint of the interval of `letter` at `coord`, in `[0,2)`.
    pub fn left_endpoint(&self, coord: usize, letter: Letter) -> Q {
        self.offset(coord, letter.class())
            + Q::from_integer(letter.polarity() as i64)
    }
}

/// A 2-periodic unit-cube tiling given by its translation vectors in
/// `[0,2)^d`; a full tiling has `2^d` of them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicTiling {
    dim: usize,
    translations: Vec<Vec<Q>>,
}

impl PeriodicTiling {
    pub fn new(dim: usize, mut translations: Vec<Vec<Q>>) -> Result<PeriodicTiling> {
        for t in &translations {
            if t.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: t.len(),
                });
            }
            for c in t {
                if c.is_negative() || *c >= Q::from_integer(2) {
                    return Err(Error::InvalidInput(format!(
                        "translation coordinate {c} outside [0,2)"
                    )));
                }
            }
        }
        translations.sort();
        translations.dedup();
        let tiling = PeriodicTiling { dim, translations };
        tiling.denominator()?;
        Ok(tiling)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn translations(&self) -> &[Vec<Q>] {
        &self.translations
    }

    /// Least common denominator of all coordinates, capped.
    pub fn denominator(&self) -> Result<u64> {
        let mut den: i64 = 1;
        for t in &self.translations {
            for c in t {
                den = den.lcm(c.denom());
            }
        }
        if den as u64 > DENOMINATOR_CAP {
            return Err(Error::DenominatorCapExceeded {
                denominator: den as u64,
                cap: DENOMINATOR_CAP,
            });
        }
        Ok(den as u64)
    }
}

/// Realize a partition code as a tiling: one translation per word, with
/// `t_i` the left endpoint of the word's interval at coordinate `i`. The
/// result is validated before it is returned.
pub fn realize_tiling(
    code: &PolyboxCode,
    map: &IntervalMap,
) -> Result<PeriodicTiling> {
    let d = code.dim();
    if code.len() != 1 << d {
        return Err(Error::InvalidInput(format!(
            "partition codes of dimension {d} have {} words, got {}",
            1 << d,
            code.len()
        )));
    }
    let translations: Vec<Vec<Q>> = code
        .words()
        .iter()
        .map(|w| (0..d).map(|i| map.left_endpoint(i, w.letter(i))).collect())
        .collect();
    let tiling = PeriodicTiling::new(d, translations)?;
    if !validate_tiling(&tiling)? {
        return Err(Error::InvalidInput(
            "realization is not a tiling (interval map collides)".into(),
        ));
    }
    Ok(tiling)
}

/// Exact tiling check: every cell of the `(2D)^d` torus grid is covered by
/// exactly one cube.
pub fn validate_tiling(tiling: &PeriodicTiling) -> Result<bool> {
    let d = tiling.dim();
    let den = tiling.denominator()? as i64;
    let side = 2 * den; // cells per axis
    let total = (side as usize).checked_pow(d as u32).ok_or(
        Error::InvalidInput("torus grid too large".into()),
    )?;
    let mut counts = vec![0u8; total];
    for t in tiling.translations() {
        // The cube [t, t+1) covers `den` consecutive cells per axis,
        // starting at cell t_i·D (integral since D is the common
        // denominator), wrapping mod 2D.
        let starts: Vec<i64> = t
            .iter()
            .map(|c| (c * Q::from_integer(den)).to_integer())
            .collect();
        let mut offsets = vec![0i64; d];
        loop {
            let mut index = 0usize;
            for i in 0..d {
                index = index * side as usize
                    + ((starts[i] + offsets[i]) % side) as usize;
            }
            counts[index] = counts[index].saturating_add(1);
            let mut carry = d;
            while carry > 0 {
                offsets[carry - 1] += 1;
                if offsets[carry - 1] < den {
                    break;
                }
                offsets[carry - 1] = 0;
                carry -= 1;
            }
            if carry == 0 {
                break;
            }
        }
    }
    Ok(counts.iter().all(|&c| c == 1))
}

/// All twin pairs among the translates: equal in every coordinate but one,
/// where they differ by exactly 1 (the cubes share a full facet and their
/// union is a box). Pairs are reported as index pairs into
/// `translations()`.
pub fn tiling_twin_pairs(tiling: &PeriodicTiling) -> Vec<(usize, usize)> {
    let ts = tiling.translations();
    let mut pairs = Vec::new();
    for i in 0..ts.len() {
        for j in i + 1..ts.len() {
            let mut off = 0usize;
            let mut twin = true;
            for (a, b) in ts[i].iter().zip(&ts[j]) {
                if a == b {
                    continue;
                }
                // On the period-2 torus, facing at distance 1 means an
                // exact coordinate difference of 1.
                if (a - b).abs() == Q::one() && off == 0 {
                    off = 1;
                } else {
                    twin = false;
                    break;
                }
            }
            if twin && off == 1 {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

/// For a fixed axis, the number of distinct left endpoints `t_i ≤ x_i`
/// among the cubes of the 2-periodized tiling that meet the closed cube
/// `[0,1]^d + x`.
///
/// Each translate has exactly one period copy with every coordinate in the
/// window `(x_j−1, x_j+1]`, and that copy meets the closed cube; so the
/// count is the number of distinct values of `(t_i − x_i) mod 2`
/// normalized into `(−1,1]` that are ≤ 0. It depends on `x_i` only.
fn axis_count(tiling: &PeriodicTiling, i: usize, x_i: Q) -> usize {
    let two = Q::from_integer(2);
    let mut lefts: Vec<Q> = tiling
        .translations()
        .iter()
        .map(|t| {
            let mut delta = (t[i] - x_i) % two;
            if delta > Q::one() {
                delta -= two;
            }
            if delta <= -Q::one() {
                delta += two;
            }
            delta
        })
        .filter(|delta| *delta <= Q::zero())
        .collect();
    lefts.sort();
    lefts.dedup();
    lefts.len()
}

/// Exact `(r⁻, r⁺)` statistics: the min/max over all `x` of the max over
/// axes of the count above. Since the count depends on `x` one axis at a
/// time, the extrema decompose per axis; each axis is sampled at the grid
/// points and half-cell midpoints of the `lcm(D, sample_denominator)`
/// grid, which refines every breakpoint of the piecewise-constant count —
/// so the sampled extrema are exact whenever `sample_denominator`'s lcm
/// with `D` is a multiple of `D`, which it is by construction.
pub fn tiling_r_stats(
    tiling: &PeriodicTiling,
    sample_denominator: u64,
) -> Result<(usize, usize)> {
    let den = tiling.denominator()?;
    let m = (den.lcm(&sample_denominator.max(1))) as i64;
    let mut r_minus = 0usize; // max over axes of the per-axis minimum
    let mut r_plus = 0usize;
    for i in 0..tiling.dim() {
        let mut lo = usize::MAX;
        let mut hi = 0usize;
        // Sample x_i = j / (2m): both cell boundaries (even j) and
        // midpoints (odd j) of the 1/m grid over one period [0,2).
        for j in 0..4 * m {
            let count = axis_count(tiling, i, Q::new(j, 2 * m));
            lo = lo.min(count);
            hi = hi.max(count);
        }
        r_minus = r_minus.max(lo);
        r_plus = r_plus.max(hi);
    }
    Ok((r_minus, r_plus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{parse_word, Alphabet};

    fn q(n: i64, d: i64) -> Q {
        Q::new(n, d)
    }

    fn code(words: &[&str], k: usize) -> PolyboxCode {
        let ab = Alphabet::with_classes(k);
        PolyboxCode::new(words.iter().map(|t| parse_word(t, &ab).unwrap()))
            .unwrap()
    }

    fn unit_grid_d2() -> PeriodicTiling {
        let grid = code(&["aa", "aa'", "a'a", "a'a'"], 1);
        realize_tiling(&grid, &IntervalMap::uniform(2, &[q(0, 1)]).unwrap())
            .unwrap()
    }

    /// Two columns of unit squares, the second shifted up by 1/2.
    fn shifted_columns() -> PeriodicTiling {
        PeriodicTiling::new(
            2,
            vec![
                vec![q(0, 1), q(0, 1)],
                vec![q(0, 1), q(1, 1)],
                vec![q(1, 1), q(1, 2)],
                vec![q(1, 1), q(3, 2)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn unit_grid_is_a_tiling_with_all_twin_pairs() {
        let tiling = unit_grid_d2();
        assert!(validate_tiling(&tiling).unwrap());
        // Every axis-neighbor pair of the four squares is a twin pair.
        assert_eq!(tiling_twin_pairs(&tiling).len(), 4);
        assert_eq!(tiling_r_stats(&tiling, 2).unwrap(), (1, 1));
    }

    #[test]
    fn removing_a_cube_fails_validation() {
        let mut translations = unit_grid_d2().translations().to_vec();
        translations.pop();
        let partial = PeriodicTiling::new(2, translations).unwrap();
        assert!(!validate_tiling(&partial).unwrap());
    }

    #[test]
    fn shifted_columns_tile_with_r_plus_2() {
        let tiling = shifted_columns();
        assert!(validate_tiling(&tiling).unwrap());
        // Twin pairs only within each column.
        assert_eq!(tiling_twin_pairs(&tiling).len(), 2);
        // Both columns contribute a distinct left endpoint along axis 2 at
        // every x, so the axis-2 count is constantly 2.
        assert_eq!(tiling_r_stats(&tiling, 2).unwrap(), (2, 2));
    }

    #[test]
    fn two_class_d2_realization_with_fractional_offset() {
        // A 2-class partition code; class b shifted by 1/3.
        let partition = code(&["aa", "a'a", "ba'", "b'a'"], 2);
        let map = IntervalMap::uniform(2, &[q(0, 1), q(1, 3)]).unwrap();
        let tiling = realize_tiling(&partition, &map).unwrap();
        assert!(validate_tiling(&tiling).unwrap());
        assert_eq!(tiling.denominator().unwrap(), 3);
    }

    #[test]
    fn twin_pair_detection_matches_the_code() {
        // The code {aa,a'a,ba',b'a'} has twin pairs (aa,a'a) and (ba',b'a');
        // its realization must show exactly those two.
        let partition = code(&["aa", "a'a", "ba'", "b'a'"], 2);
        let map = IntervalMap::uniform(2, &[q(0, 1), q(1, 3)]).unwrap();
        let tiling = realize_tiling(&partition, &map).unwrap();
        assert_eq!(tiling_twin_pairs(&tiling).len(), 2);
    }

    #[test]
    fn duplicate_offsets_are_rejected() {
        assert!(IntervalMap::uniform(2, &[q(1, 2), q(1, 2)]).is_err());
    }

    #[test]
    fn denominator_cap_is_enforced() {
        let err = PeriodicTiling::new(1, vec![vec![q(1, 61)], vec![q(62, 61)]]);
        assert!(matches!(err, Err(Error::DenominatorCapExceeded { .. })));
    }

    #[test]
    fn non_partition_code_is_rejected() {
        let map = IntervalMap::uniform(2, &[q(0, 1)]).unwrap();
        assert!(realize_tiling(&code(&["aa", "a'a'"], 1), &map).is_err());
    }
}
