//! Polybox codes and the pointwise predicates and statistics defined on them:
//! dichotomy, twin pairs, the weight function `g`, the cover criterion,
//! slices, distributions, exact measure differences, and siblings graphs.

use crate::alphabet::Letter;
use crate::error::{Error, Result};
use crate::word::Word;
use num_rational::Ratio;

/// True iff some coordinate carries complementary letters.
pub fn dichotomous(u: &Word, v: &Word) -> bool {
    debug_assert_eq!(u.dim(), v.dim());
    u.letters().iter().zip(v.letters()).any(|(&a, &b)| a.is_complement_of(b))
}

/// True iff `u`, `v` form a twin pair: exactly one coordinate carries
/// complementary letters and all other coordinates carry equal letters.
pub fn is_twin_pair(u: &Word, v: &Word) -> bool {
    debug_assert_eq!(u.dim(), v.dim());
    let mut complement_coords = 0;
    for (&a, &b) in u.letters().iter().zip(v.letters()) {
        if a == b {
            continue;
        } else if a.is_complement_of(b) {
            complement_coords += 1;
            if complement_coords > 1 {
                return false;
            }
        } else {
            return false;
        }
    }
    complement_coords == 1
}

/// The weight `g(v, w) = prod_i (2[v_i = w_i] + [w_i not in {v_i, v_i'}])`.
///
/// Equals `2^d * |cells(v) ∩ cells(w)| / |cells(w)|` on the realization grid,
/// so `g(v, w) = 0` iff the words are dichotomous.
pub fn g_weight(v: &Word, w: &Word) -> u64 {
    debug_assert_eq!(v.dim(), w.dim());
    let mut product: u64 = 1;
    for (&a, &b) in v.letters().iter().zip(w.letters()) {
        if a == b {
            product <<= 1;
        } else if a.is_complement_of(b) {
            return 0;
        }
        // Different classes contribute a factor of 1.
    }
    product
}

/// A set of pairwise dichotomous words, stored sorted and duplicate-free so
/// that equal codes serialize identically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolyboxCode {
    words: Vec<Word>,
}

impl PolyboxCode {
    /// Validating constructor: sorts, rejects duplicates, mixed dimensions,
    /// and non-dichotomous pairs.
    pub fn new(words: impl IntoIterator<Item = Word>) -> Result<PolyboxCode> {
        let mut words: Vec<Word> = words.into_iter().collect();
        if words.is_empty() {
            return Err(Error::InvalidInput("a code needs at least one word".into()));
        }
        let d = words[0].dim();
        for w in &words {
            if w.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, got: w.dim() });
            }
        }
        words.sort();
        for pair in words.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateWord(format!("{:?}", pair[0])));
            }
        }
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                if !dichotomous(&words[i], &words[j]) {
                    return Err(Error::NotDichotomous(format!(
                        "{:?} / {:?}",
                        words[i], words[j]
                    )));
                }
            }
        }
        Ok(PolyboxCode { words })
    }

    /// Construct without the pairwise scan. The caller must guarantee the
    /// words are sorted, duplicate-free, of equal dimension, and pairwise
    /// dichotomous; search paths that maintain these invariants incrementally
    /// use this to avoid an O(n^2) re-check per emitted cover.
    pub(crate) fn from_sorted_unchecked(words: Vec<Word>) -> PolyboxCode {
        debug_assert!(words.windows(2).all(|p| p[0] < p[1]));
        debug_assert!(is_polybox_code(&words));
        PolyboxCode { words }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the constructor rejects empty codes
    }

    pub fn dim(&self) -> usize {
        self.words[0].dim()
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Largest class index used by any word, plus one.
    pub fn classes_used(&self) -> usize {
        self.words.iter().map(|w| w.classes_used()).max().unwrap()
    }

    /// The slice `V^{i,l}`: words whose letter at coordinate `i` is `l`.
    /// Subsets of codes are codes, so this returns a code (or `None` when
    /// the slice is empty).
    pub fn slice(&self, i: usize, l: Letter) -> Result<Option<PolyboxCode>> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
        }
        let words: Vec<Word> =
            self.words.iter().filter(|w| w.letter(i) == l).copied().collect();
        if words.is_empty() {
            return Ok(None);
        }
        Ok(Some(PolyboxCode { words }))
    }

    /// The deletion `V_{i^c}`: every word with coordinate `i` skipped. The
    /// result may contain duplicates or non-dichotomous pairs, so it is a raw
    /// multiset with an is-code flag.
    pub fn delete_coord(&self, i: usize) -> Result<WordMultiset> {
        let words: Result<Vec<Word>> =
            self.words.iter().map(|w| w.delete_coord(i)).collect();
        Ok(WordMultiset::new(words?))
    }

    /// The restriction `V_A` to the 0-based coordinates `coords`.
    pub fn restrict(&self, coords: &[usize]) -> Result<WordMultiset> {
        let words: Result<Vec<Word>> =
            self.words.iter().map(|w| w.restrict(coords)).collect();
        Ok(WordMultiset::new(words?))
    }

    /// The distribution `D_i(V)`: per complement class `c`, the pair
    /// `(|V^{i,c}|, |V^{i,c'}|)`. `k` fixes how many classes to report.
    pub fn distribution(&self, i: usize, k: usize) -> Result<Distribution> {
        if i >= self.dim() {
            return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
        }
        let mut pairs = vec![(0usize, 0usize); k.max(self.classes_used())];
        for w in &self.words {
            let s = w.letter(i);
            if s.polarity() == 0 {
                pairs[s.class()].0 += 1;
            } else {
                pairs[s.class()].1 += 1;
            }
        }
        Ok(Distribution { coord: i, pairs })
    }

    /// True iff some coordinate carries one constant letter across the code
    /// (the code is of the form `V = V^{i,l}`).
    pub fn is_flat(&self) -> bool {
        (0..self.dim()).any(|i| {
            let first = self.words[0].letter(i);
            self.words.iter().all(|w| w.letter(i) == first)
        })
    }
}

/// Pairwise dichotomy over a plain word slice.
pub fn is_polybox_code(words: &[Word]) -> bool {
    words.iter().enumerate().all(|(i, u)| {
        words[i + 1..].iter().all(|v| u != v && dichotomous(u, v))
    })
}

/// First twin pair in canonical order, if any.
pub fn find_twin_pair(words: &[Word]) -> Option<(Word, Word)> {
    let mut sorted: Vec<&Word> = words.iter().collect();
    sorted.sort();
    for (i, u) in sorted.iter().enumerate() {
        for v in &sorted[i + 1..] {
            if is_twin_pair(u, v) {
                return Some((**u, **v));
            }
        }
    }
    None
}

/// True iff the code contains a twin pair.
pub fn has_twin_pair(code: &PolyboxCode) -> bool {
    find_twin_pair(code.words()).is_some()
}

/// The cover criterion: `w ⊑ V` iff `Σ_{v∈V} g(v, w) = 2^d`. The sum never
/// exceeds `2^d` when `V` is a polybox code (its boxes are disjoint).
pub fn covers(w: &Word, code: &PolyboxCode) -> Result<bool> {
    if w.dim() != code.dim() {
        return Err(Error::DimensionMismatch { expected: code.dim(), got: w.dim() });
    }
    let sum: u64 = code.words().iter().map(|v| g_weight(v, w)).sum();
    let full = 1u64 << w.dim();
    debug_assert!(sum <= full, "g-sum exceeds 2^d; V is not a code");
    Ok(sum == full)
}

/// `W ⊑ V`: every word of `W` is covered by `V`.
pub fn code_covers(target: &PolyboxCode, by: &PolyboxCode) -> Result<bool> {
    for w in target.words() {
        if !covers(w, by)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equivalence: mutual cover, i.e. equal realization unions.
pub fn equivalent(v: &PolyboxCode, w: &PolyboxCode) -> Result<bool> {
    Ok(code_covers(v, w)? && code_covers(w, v)?)
}

/// The exact measure `m(V ∖ W) = |V| − Σ_{v∈V, w∈W} g(v, w) / 2^d` of the
/// part of `V`'s boxes not covered by `W`, in single-box units. Exact
/// rational with denominator dividing `2^d`.
pub fn measure_difference(v: &PolyboxCode, w: &PolyboxCode) -> Result<Ratio<i64>> {
    if v.dim() != w.dim() {
        return Err(Error::DimensionMismatch { expected: v.dim(), got: w.dim() });
    }
    let mut sum: i64 = 0;
    for a in v.words() {
        for b in w.words() {
            sum += g_weight(a, b) as i64;
        }
    }
    let full = 1i64 << v.dim();
    Ok(Ratio::new(v.len() as i64 * full - sum, full))
}

/// A raw word multiset, as produced by deletions and restrictions, which are
/// allowed to repeat words and break dichotomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordMultiset {
    words: Vec<Word>,
    is_code: bool,
}

impl WordMultiset {
    pub fn new(mut words: Vec<Word>) -> WordMultiset {
        words.sort();
        let is_code = is_polybox_code(&words);
        WordMultiset { words, is_code }
    }

    /// Sorted words, duplicates kept.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// True iff the multiset happens to be duplicate-free and pairwise
    /// dichotomous.
    pub fn is_code(&self) -> bool {
        self.is_code
    }

    /// Upgrade to a validated code.
    pub fn into_code(self) -> Result<PolyboxCode> {
        PolyboxCode::new(self.words)
    }
}

/// The distribution `D_i(V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    /// 0-based coordinate the distribution describes.
    pub coord: usize,
    /// `pairs[c] = (|V^{i,c}|, |V^{i,c'}|)` for each complement class `c`.
    pub pairs: Vec<(usize, usize)>,
}

impl Distribution {
    /// Total of all entries; equals `|V|` (every word has exactly one letter
    /// at each coordinate).
    pub fn total(&self) -> usize {
        self.pairs.iter().map(|&(n, m)| n + m).sum()
    }
}

/// An edge of a siblings graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiblingEdge {
    /// Indices into the owning graph's vertex list, `u < v`.
    pub u: usize,
    pub v: usize,
    /// Colors: coordinates `i` (0-based) such that the endpoints are
    /// i-siblings — deleting coordinate `i` leaves a twin pair.
    pub colors: Vec<usize>,
    /// Coordinates where the edge is "of the reference-complement type": one
    /// endpoint carries the complement of the reference word's letter and
    /// the other a letter from a different class. Empty when no reference
    /// word was supplied.
    pub reference_colors: Vec<usize>,
}

/// The graph of siblings on a code: vertices are the code's words, and an
/// edge colored `i` joins every pair that are i-siblings.
#[derive(Debug, Clone)]
pub struct SiblingsGraph {
    pub vertices: Vec<Word>,
    pub edges: Vec<SiblingEdge>,
}

/// True iff `u`, `v` are i-siblings: `v_i` is in a different class than
/// `u_i`, and deleting coordinate `i` leaves a twin pair.
pub fn are_i_siblings(u: &Word, v: &Word, i: usize) -> bool {
    if u.letter(i).same_class(v.letter(i)) {
        return false;
    }
    let (Ok(ud), Ok(vd)) = (u.delete_coord(i), v.delete_coord(i)) else {
        return false;
    };
    is_twin_pair(&ud, &vd)
}

/// Build the siblings graph of a code; when `reference` is supplied, each
/// edge also records its reference-complement type colors.
pub fn siblings_graph(code: &PolyboxCode, reference: Option<&Word>) -> Result<SiblingsGraph> {
    if let Some(w) = reference {
        if w.dim() != code.dim() {
            return Err(Error::DimensionMismatch { expected: code.dim(), got: w.dim() });
        }
    }
    let vertices = code.words().to_vec();
    let mut edges = Vec::new();
    for u in 0..vertices.len() {
        for v in u + 1..vertices.len() {
            let colors: Vec<usize> = (0..code.dim())
                .filter(|&i| are_i_siblings(&vertices[u], &vertices[v], i))
                .collect();
            if colors.is_empty() {
                continue;
            }
            let reference_colors = match reference {
                Some(w) => (0..code.dim())
                    .filter(|&i| {
                        let prime = w.letter(i).complement();
                        let (a, b) = (vertices[u].letter(i), vertices[v].letter(i));
                        (a == prime && !b.same_class(prime))
                            || (b == prime && !a.same_class(prime))
                    })
                    .collect(),
                None => Vec::new(),
            };
            edges.push(SiblingEdge { u, v, colors, reference_colors });
        }
    }
    Ok(SiblingsGraph { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::word::parse_word;

    fn ab() -> Alphabet {
        Alphabet::with_classes(2)
    }

    fn w(text: &str) -> Word {
        parse_word(text, &ab()).unwrap()
    }

    fn code(words: &[&str]) -> PolyboxCode {
        PolyboxCode::new(words.iter().map(|t| w(t))).unwrap()
    }

    /// The five-word rigid cover of bbb used throughout the test suite.
    pub(crate) fn example_five_word_code() -> PolyboxCode {
        code(&["aaa", "a'a'a'", "baa'", "a'ba", "aa'b"])
    }

    #[test]
    fn dichotomy_basics() {
        assert!(dichotomous(&w("aaa"), &w("a'a'a'")));
        assert!(!dichotomous(&w("aaa"), &w("baa")));
        assert!(dichotomous(&w("bba"), &w("baa'")));
    }

    #[test]
    fn twin_pair_basics() {
        assert!(is_twin_pair(&w("aaa"), &w("a'aa")));
        assert!(!is_twin_pair(&w("aaa"), &w("a'a'a")));
        assert!(!is_twin_pair(&w("abb"), &w("a'a'a'")));
        assert!(is_twin_pair(&w("aaa"), &w("aaa'")));
    }

    #[test]
    fn twin_pair_implies_dichotomous() {
        let words = ["aaa", "a'aa", "aba", "bb'a", "a'b'b"];
        for u in words.iter().map(|t| w(t)) {
            for v in words.iter().map(|t| w(t)) {
                if is_twin_pair(&u, &v) {
                    assert!(dichotomous(&u, &v));
                }
                assert_eq!(dichotomous(&u, &v), dichotomous(&v, &u));
            }
        }
    }

    #[test]
    fn code_construction() {
        let v = example_five_word_code();
        assert_eq!(v.len(), 5);
        assert!(!has_twin_pair(&v));
        assert!(PolyboxCode::new([w("aaa"), w("baa")]).is_err());
        assert!(PolyboxCode::new([w("aaa"), w("aaa")]).is_err());
        let twins = PolyboxCode::new([w("aaa"), w("a'aa")]).unwrap();
        assert!(has_twin_pair(&twins));
        assert_eq!(find_twin_pair(twins.words()), Some((w("aaa"), w("a'aa"))));
    }

    #[test]
    fn g_weight_values() {
        assert_eq!(g_weight(&w("bbbbb"), &w("bbbbb")), 32);
        assert_eq!(g_weight(&w("baa'bb"), &w("bbbbb")), 8);
        assert_eq!(g_weight(&w("aab"), &w("aa'b")), 0);
        // g vanishes exactly on dichotomous pairs.
        for u in ["aa", "ab", "a'b'", "ba"].map(|t| w(t)) {
            for v in ["aa", "a'a", "bb", "ab'"].map(|t| w(t)) {
                assert_eq!(g_weight(&u, &v) == 0, dichotomous(&u, &v));
            }
        }
    }

    #[test]
    fn cover_of_bbb_by_example_code() {
        let v = example_five_word_code();
        let q = w("bbb");
        let weights: Vec<u64> = v.words().iter().map(|x| g_weight(x, &q)).collect();
        assert_eq!(weights.iter().sum::<u64>(), 8);
        assert!(covers(&q, &v).unwrap());
        assert!(!covers(&q, &code(&["aaa"])).unwrap());
    }

    #[test]
    fn equivalence_of_twin_pair_and_its_replacement() {
        let v = code(&["aaa", "a'aa"]);
        let replacement = code(&["baa", "b'aa"]);
        assert!(equivalent(&v, &replacement).unwrap());
        assert!(equivalent(&v, &v).unwrap());
        assert!(!equivalent(&v, &code(&["aaa", "a'ab"])).unwrap());
    }

    #[test]
    fn slices_and_distribution() {
        let v = code(&["bba", "baa'", "b'ab", "b'a'a"]);
        let slice = v.slice(0, Letter::new(1, 0)).unwrap().unwrap();
        assert_eq!(slice, code(&["bba", "baa'"]));
        assert_eq!(v.distribution(0, 2).unwrap().pairs, vec![(0, 0), (2, 2)]);
        assert_eq!(v.distribution(1, 2).unwrap().pairs, vec![(2, 1), (1, 0)]);
        assert_eq!(v.distribution(2, 2).unwrap().pairs, vec![(2, 1), (1, 0)]);
        assert_eq!(code(&["aaa"]).distribution(2, 2).unwrap().pairs, vec![(1, 0), (0, 0)]);
        // Distribution entries always total |V|.
        for i in 0..3 {
            assert_eq!(v.distribution(i, 2).unwrap().total(), v.len());
        }
    }

    #[test]
    fn deletions_are_raw_multisets() {
        let v = code(&["aaa"]);
        let deleted = v.delete_coord(0).unwrap();
        assert_eq!(deleted.words(), &[w("aa")]);
        assert!(deleted.is_code());

        // Deleting the separating coordinate of a twin pair leaves duplicates.
        let twins = code(&["aaa", "a'aa"]);
        let collapsed = twins.delete_coord(0).unwrap();
        assert_eq!(collapsed.words(), &[w("aa"), w("aa")]);
        assert!(!collapsed.is_code());
    }

    #[test]
    fn measure_difference_values() {
        // Slices of the example code at coordinate 3, deleted: 3/4 for both
        // polarities of class a.
        let v = example_five_word_code();
        let a = Letter::new(0, 0);
        for l in [a, a.complement()] {
            let x = v.slice(2, l).unwrap().unwrap().delete_coord(2).unwrap().into_code().unwrap();
            let y = v
                .slice(2, l.complement())
                .unwrap()
                .unwrap()
                .delete_coord(2)
                .unwrap()
                .into_code()
                .unwrap();
            assert_eq!(measure_difference(&x, &y).unwrap(), Ratio::new(3, 4));
        }
        assert_eq!(measure_difference(&v, &v).unwrap(), Ratio::new(0, 1));
        assert_eq!(
            measure_difference(&code(&["aa"]), &code(&["ba"])).unwrap(),
            Ratio::new(1, 2)
        );
    }

    #[test]
    fn siblings_graph_edges() {
        let g = siblings_graph(&code(&["aaa", "a'ba"]), None).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].colors, vec![1]);

        let g = siblings_graph(&code(&["aaa", "a'a'a'"]), None).unwrap();
        assert!(g.edges.is_empty());

        let g = siblings_graph(&code(&["baa", "aa'a"]), None).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].colors, vec![0]);
    }

    #[test]
    fn siblings_reference_colors() {
        // With reference bbb, an edge where one endpoint has b' and the
        // other an a-class letter at the same coordinate gets flagged there.
        let v = code(&["b'aa", "aa'a"]);
        let g = siblings_graph(&v, Some(&w("bbb"))).unwrap();
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].colors, vec![0]);
        assert_eq!(g.edges[0].reference_colors, vec![0]);
        // Same code without a reference word carries no flags.
        let g = siblings_graph(&v, None).unwrap();
        assert!(g.edges[0].reference_colors.is_empty());
    }

    #[test]
    fn flatness() {
        assert!(code(&["aaa"]).is_flat());
        assert!(code(&["aab", "aa'a"]).is_flat());
        assert!(!example_five_word_code().is_flat());
    }
}
