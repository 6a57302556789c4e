//! Rigidity verdicts and alternative-suit search.
//!
//! A code `V` is rigid when no different code over the same alphabet has
//! the same realization union. The search enumerates every suit of the
//! union by exact-cover backtracking over the boxes enclosed in it:
//! repeatedly pick the first uncovered cell and branch over the candidate
//! boxes covering it that stay pairwise dichotomous with the partial suit.

use rayon::prelude::*;

use crate::code::{dichotomous, has_twin_pair, PolyboxCode};
use crate::enumeration::all_words;
use crate::error::{Budget, BudgetMeter, Error, Result};
use crate::grid::{box_within, realize, realize_word, CellSet};
use crate::word::Word;

/// All words whose boxes lie inside the cell set, over a `k`-class
/// alphabet, sorted.
pub fn enclosed_boxes(cells: &CellSet, k: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    for v in all_words(cells.dim(), k) {
        if box_within(&v, cells)? {
            out.push(v);
        }
    }
    Ok(out)
}

/// Outcome of a suit search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Rigid,
    NotRigid,
    /// The budget ran out before the search completed.
    Inconclusive,
}

/// Filters and limits for [`find_equivalent_codes`].
#[derive(Debug, Clone)]
pub struct SuitSearchOpts {
    pub classes: usize,
    /// Keep only witnesses sharing no word with the input code.
    pub disjoint: bool,
    /// Keep only twin-pair-free witnesses.
    pub twin_pair_free: bool,
    /// Stop after this many witnesses (`None`: collect all).
    pub limit: Option<usize>,
    pub budget: Budget,
}

impl SuitSearchOpts {
    pub fn new(classes: usize) -> SuitSearchOpts {
        SuitSearchOpts {
            classes,
            disjoint: false,
            twin_pair_free: false,
            limit: None,
            budget: Budget::UNLIMITED,
        }
    }
}

/// Result of a suit search: verdict, alternative codes found, and stats.
#[derive(Debug, Clone)]
pub struct SuitSearchResult {
    pub verdict: Verdict,
    pub witnesses: Vec<PolyboxCode>,
    pub nodes: u64,
}

/// All codes `W ≠ V` with the same realization union as `V`, subject to
/// the filters. A completed search with no witnesses is a rigidity proof
/// relative to the declared alphabet.
pub fn find_equivalent_codes(
    v: &PolyboxCode,
    opts: &SuitSearchOpts,
) -> Result<SuitSearchResult> {
    let k = opts.classes;
    let union = realize(v, k)?;
    let candidates = enclosed_boxes(&union, k)?;
    let cells: Vec<CellSet> = candidates
        .iter()
        .map(|w| realize_word(w, k))
        .collect::<Result<_>>()?;
    let mut search = SuitSearch {
        v,
        candidates: &candidates,
        cells: &cells,
        union: &union,
        opts,
        witnesses: Vec::new(),
        meter: opts.budget.start(),
        nodes: 0,
    };
    let exhausted = {
        let mut chosen: Vec<usize> = Vec::new();
        let compatible: Vec<bool> = vec![true; candidates.len()];
        let covered = CellSet::empty(k, v.dim())?;
        search.extend(&mut chosen, compatible, covered).is_err()
    };
    let witnesses = search.witnesses;
    let nodes = search.nodes;
    let hit_limit = opts.limit.is_some_and(|l| witnesses.len() >= l);
    let verdict = if !witnesses.is_empty() {
        Verdict::NotRigid
    } else if exhausted && !hit_limit {
        Verdict::Inconclusive
    } else {
        Verdict::Rigid
    };
    // Equal-volume boxes: any suit of the union has |union|/2^{(k-1)d}
    // boxes; spot-check the witnesses.
    for w in &witnesses {
        debug_assert_eq!(
            w.len() * (1usize << ((k - 1) * v.dim())),
            union.count()
        );
    }
    Ok(SuitSearchResult { verdict, witnesses, nodes })
}

struct SuitSearch<'a> {
    v: &'a PolyboxCode,
    candidates: &'a [Word],
    cells: &'a [CellSet],
    union: &'a CellSet,
    opts: &'a SuitSearchOpts,
    witnesses: Vec<PolyboxCode>,
    meter: BudgetMeter,
    nodes: u64,
}

enum Stop {
    Budget,
    Limit,
}

impl SuitSearch<'_> {
    fn extend(
        &mut self,
        chosen: &mut Vec<usize>,
        compatible: Vec<bool>,
        covered: CellSet,
    ) -> std::result::Result<(), Stop> {
        self.nodes += 1;
        if self.meter.tick().is_err() {
            return Err(Stop::Budget);
        }
        let first_uncovered = (0..self.union.grid_size()).find(|&c| {
            self.union.contains_cell(c) && !covered.contains_cell(c)
        });
        let Some(cell) = first_uncovered else {
            let words: Vec<Word> =
                chosen.iter().map(|&i| self.candidates[i]).collect();
            let code =
                PolyboxCode::new(words).expect("suits are codes by dichotomy");
            if self.accept(&code) {
                self.witnesses.push(code);
                if self.opts.limit.is_some_and(|l| self.witnesses.len() >= l) {
                    return Err(Stop::Limit);
                }
            }
            return Ok(());
        };
        for i in 0..self.candidates.len() {
            if !compatible[i] || !self.cells[i].contains_cell(cell) {
                continue;
            }
            // Branch on boxes covering the first uncovered cell. Every box
            // of a suit is dichotomous with the chosen ones, hence
            // disjoint from the covered region — no overlap check needed.
            let mut narrowed = compatible.clone();
            for (j, slot) in narrowed.iter_mut().enumerate() {
                *slot = *slot
                    && (j == i
                        || dichotomous(&self.candidates[i], &self.candidates[j]));
            }
            narrowed[i] = false;
            let next_covered = covered
                .union(&self.cells[i])
                .expect("same grid dimensions");
            chosen.push(i);
            let r = self.extend(chosen, narrowed, next_covered);
            chosen.pop();
            r?;
        }
        Ok(())
    }

    fn accept(&self, code: &PolyboxCode) -> bool {
        if code == self.v {
            return false;
        }
        if self.opts.twin_pair_free && has_twin_pair(code) {
            return false;
        }
        if self.opts.disjoint
            && code.words().iter().any(|w| self.v.contains(w))
        {
            return false;
        }
        true
    }
}

/// Whether no other code over a `k`-class alphabet has the same
/// realization union.
pub fn is_rigid(v: &PolyboxCode, k: usize, budget: Budget) -> Result<bool> {
    let opts = SuitSearchOpts {
        limit: Some(1),
        budget,
        ..SuitSearchOpts::new(k)
    };
    let result = find_equivalent_codes(v, &opts)?;
    match result.verdict {
        Verdict::Rigid => Ok(true),
        Verdict::NotRigid => Ok(false),
        Verdict::Inconclusive => Err(Error::BudgetExceeded { nodes: result.nodes }),
    }
}

/// Rigidity verdicts for many codes in parallel.
pub fn verdicts(
    codes: &[PolyboxCode],
    k: usize,
    budget: Budget,
) -> Result<Vec<bool>> {
    codes.par_iter().map(|c| is_rigid(c, k, budget)).collect()
}
