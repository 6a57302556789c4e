//! Generalized Keller graphs and exact clique search.
//!
//! The Keller graph on the words of dimension `d` joins two words when they
//! are dichotomous but do not form a twin pair; its cliques are exactly the
//! twin-pair-free polybox codes, and a clique of `2^d` words is a partition
//! code. The solver is a branch-and-bound with a greedy-coloring bound.

use crate::code::{dichotomous, is_twin_pair, PolyboxCode};
use crate::enumeration::all_words;
use crate::error::{Budget, Result};
use crate::word::Word;

/// A generalized Keller graph, with adjacency kept as bitsets over the
/// `(2k)^d` vertices.
pub struct KellerGraph {
    alphabet_classes: usize,
    dim: usize,
    vertices: Vec<Word>,
    /// Adjacency rows, each `blocks` u64 words long.
    adjacency: Vec<u64>,
    blocks: usize,
}

impl KellerGraph {
    /// Build the graph on all words of dimension `d` over `k` classes;
    /// `u ~ v` iff they are dichotomous and not a twin pair. With
    /// `allow_twin_pairs`, twin pairs stay adjacent (adjacency is plain
    /// dichotomy), which turns `2^d`-cliques into arbitrary partition
    /// codes.
    pub fn new(k: usize, d: usize, allow_twin_pairs: bool) -> KellerGraph {
        let vertices = all_words(d, k);
        let n = vertices.len();
        let blocks = n.div_ceil(64);
        let mut adjacency = vec![0u64; n * blocks];
        for i in 0..n {
            for j in i + 1..n {
                let adj = dichotomous(&vertices[i], &vertices[j])
                    && (allow_twin_pairs
                        || !is_twin_pair(&vertices[i], &vertices[j]));
                if adj {
                    adjacency[i * blocks + j / 64] |= 1 << (j % 64);
                    adjacency[j * blocks + i / 64] |= 1 << (i % 64);
                }
            }
        }
        KellerGraph { alphabet_classes: k, dim: d, vertices, adjacency, blocks }
    }

    pub fn alphabet_classes(&self) -> usize {
        self.alphabet_classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Word] {
        &self.vertices
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.blocks + j / 64] >> (j % 64) & 1 == 1
    }
}

/// Result of a clique search: the best clique found, and whether the
/// search ran to completion (making the clique maximum, or the absence
/// verdict certified).
#[derive(Debug, Clone)]
pub struct CliqueWitness {
    pub clique: PolyboxCode,
    /// True when branch and bound completed within budget.
    pub certified: bool,
    pub nodes: u64,
}

struct CliqueSearch<'a> {
    graph: &'a KellerGraph,
    best: Vec<usize>,
    /// Stop as soon as a clique of this size is found (0: never).
    stop_at: usize,
    nodes: u64,
    meter: crate::error::BudgetMeter,
    exhausted: bool,
}

impl CliqueSearch<'_> {
    /// Tomita-style expansion: greedy-color the candidates, then branch in
    /// descending color order, pruning when even the color count cannot
    /// beat the incumbent.
    fn expand(&mut self, current: &mut Vec<usize>, candidates: &[usize]) {
        if self.done() {
            return;
        }
        self.nodes += 1;
        if self.meter.tick().is_err() {
            self.exhausted = true;
            return;
        }
        if candidates.is_empty() {
            if current.len() > self.best.len() {
                self.best = current.clone();
            }
            return;
        }
        // Greedy coloring: color[i] is the 1-based color of candidates[i];
        // candidates are reordered color by color, so color is
        // non-decreasing and bounds the clique size within the suffix.
        let mut ordered: Vec<usize> = Vec::with_capacity(candidates.len());
        let mut colors: Vec<usize> = Vec::with_capacity(candidates.len());
        let mut uncolored: Vec<usize> = candidates.to_vec();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut rest = Vec::new();
            let mut class: Vec<usize> = Vec::new();
            for &v in &uncolored {
                if class.iter().all(|&w| !self.graph.adjacent(v, w)) {
                    class.push(v);
                } else {
                    rest.push(v);
                }
            }
            for v in class {
                ordered.push(v);
                colors.push(color);
            }
            uncolored = rest;
        }
        for i in (0..ordered.len()).rev() {
            if current.len() + colors[i] <= self.best.len() {
                return;
            }
            let v = ordered[i];
            current.push(v);
            let narrowed: Vec<usize> = ordered[..i]
                .iter()
                .copied()
                .filter(|&w| self.graph.adjacent(v, w))
                .collect();
            self.expand(current, &narrowed);
            current.pop();
            if self.done() {
                return;
            }
        }
    }

    fn done(&self) -> bool {
        self.exhausted
            || (self.stop_at > 0 && self.best.len() >= self.stop_at)
    }
}

fn run_search(
    graph: &KellerGraph,
    seed: Vec<usize>,
    candidates: Vec<usize>,
    stop_at: usize,
    budget: Budget,
) -> CliqueWitness {
    let mut search = CliqueSearch {
        graph,
        best: seed.clone(),
        stop_at,
        nodes: 0,
        meter: budget.start(),
        exhausted: false,
    };
    let mut current = seed;
    search.expand(&mut current, &candidates);
    if search.best.is_empty() {
        // Any single vertex is a clique; never report an empty one.
        search.best.push(0);
    }
    let words: Vec<Word> =
        search.best.iter().map(|&i| graph.vertices[i]).collect();
    CliqueWitness {
        clique: PolyboxCode::new(words).expect("cliques are codes"),
        certified: !search.exhausted,
        nodes: search.nodes,
    }
}

/// Maximum clique of the Keller graph: the largest twin-pair-free code.
/// When the budget runs out the best clique found so far is returned with
/// `certified: false`.
pub fn max_clique(k: usize, d: usize, budget: Budget) -> Result<CliqueWitness> {
    let graph = KellerGraph::new(k, d, false);
    let all: Vec<usize> = (0..graph.vertices.len()).collect();
    Ok(run_search(&graph, Vec::new(), all, 0, budget))
}

/// A clique of size at least `target` whose words at coordinate `i` hit
/// every listed class — or `None` when a completed search certifies that
/// no such clique exists. An uncertified absence (budget ran out) is an
/// error.
pub fn clique_with_column_classes(
    k: usize,
    d: usize,
    i: usize,
    classes: &[usize],
    target: usize,
    budget: Budget,
) -> Result<Option<CliqueWitness>> {
    let graph = KellerGraph::new(k, d, false);
    let n = graph.vertices.len();
    // Force one word per required class up front, then extend within the
    // common neighborhood; every qualifying clique contains such a
    // transversal, so trying all pairwise-adjacent transversals is
    // complete.
    let per_class: Vec<Vec<usize>> = classes
        .iter()
        .map(|&c| {
            (0..n)
                .filter(|&v| graph.vertices[v].letter(i).class() == c)
                .collect()
        })
        .collect();
    let mut exhausted = false;
    let mut total_nodes = 0u64;
    let mut choice: Vec<usize> = Vec::new();
    let mut found: Option<CliqueWitness> = None;
    transversals(&graph, &per_class, &mut choice, &mut |seed| {
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| seed.iter().all(|&s| graph.adjacent(s, v)))
            .collect();
        let witness =
            run_search(&graph, seed.to_vec(), candidates, target, budget);
        total_nodes += witness.nodes;
        if !witness.certified {
            exhausted = true;
        }
        if witness.clique.len() >= target && found.is_none() {
            found = Some(witness);
        }
        found.is_some()
    });
    if found.is_none() && exhausted {
        // Absence without a completed search is not a verdict.
        return Err(crate::error::Error::BudgetExceeded { nodes: total_nodes });
    }
    Ok(found)
}

/// Visit every pairwise-adjacent transversal (one vertex per class list);
/// stop early when the callback returns true.
fn transversals(
    graph: &KellerGraph,
    per_class: &[Vec<usize>],
    choice: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if choice.len() == per_class.len() {
        return visit(choice);
    }
    for &v in &per_class[choice.len()] {
        if choice.iter().all(|&w| w == v || graph.adjacent(v, w)) {
            choice.push(v);
            let stop = transversals(graph, per_class, choice, visit);
            choice.pop();
            if stop {
                return true;
            }
        }
    }
    false
}

/// Search for a partition code: a clique of `2^d` words, with or without
/// twin pairs. Returns `None` when a completed search certifies absence.
pub fn partition_code_search(
    k: usize,
    d: usize,
    twin_pair_free: bool,
    budget: Budget,
) -> Result<Option<PolyboxCode>> {
    let graph = KellerGraph::new(k, d, !twin_pair_free);
    let all: Vec<usize> = (0..graph.vertices.len()).collect();
    let target = 1usize << d;
    let witness = run_search(&graph, Vec::new(), all, target, budget);
    if witness.clique.len() >= target {
        return Ok(Some(witness.clique));
    }
    if !witness.certified {
        // Absence without a completed search is not a verdict.
        return Err(crate::error::Error::BudgetExceeded { nodes: witness.nodes });
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::has_twin_pair;

    #[test]
    fn one_class_d2_max_clique_is_2() {
        let w = max_clique(1, 2, Budget::UNLIMITED).unwrap();
        assert!(w.certified);
        assert_eq!(w.clique.len(), 2);
    }

    #[test]
    fn two_class_d3_max_clique_is_5() {
        let w = max_clique(2, 3, Budget::UNLIMITED).unwrap();
        assert!(w.certified);
        assert_eq!(w.clique.len(), 5);
        assert!(!has_twin_pair(&w.clique));
        // Cross-check by brute force over all 5-subsets being too slow is
        // avoided: instead verify no 6-clique exists by the certificate.
    }

    #[test]
    fn budget_exhaustion_is_uncertified() {
        let w = max_clique(2, 3, Budget::nodes(2)).unwrap();
        assert!(!w.certified);
    }

    #[test]
    fn column_classes_at_d2() {
        // Two required classes at coordinate 1, d=2: {aa, a'b} works.
        let w = clique_with_column_classes(4, 2, 1, &[0, 1], 2, Budget::UNLIMITED)
            .unwrap()
            .expect("witness exists");
        assert!(w.clique.len() >= 2);
        for c in 0..2 {
            assert!(w.clique.words().iter().any(|v| v.letter(1).class() == c));
        }
        // Three or more distinct classes at one coordinate force all
        // dichotomies through the other coordinate, whose letters must
        // then be pairwise complementary — impossible for three words.
        let absent =
            clique_with_column_classes(4, 2, 1, &[0, 1, 2], 3, Budget::UNLIMITED)
                .unwrap();
        assert!(absent.is_none());
    }

    #[test]
    fn no_partition_code_at_d3_without_twin_pairs() {
        // Max twin-pair-free clique is 5 < 8.
        let absent =
            clique_with_column_classes(2, 3, 0, &[0], 8, Budget::UNLIMITED)
                .unwrap();
        assert!(absent.is_none());
        let none = partition_code_search(2, 3, true, Budget::UNLIMITED).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn partition_code_with_twin_pairs_at_d2() {
        let code = partition_code_search(1, 2, false, Budget::UNLIMITED)
            .unwrap()
            .expect("the binary grid is a partition code");
        assert_eq!(code.len(), 4);
    }
}
