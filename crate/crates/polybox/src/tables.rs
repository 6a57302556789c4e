//! Embedded golden data: the known twin-pair-free covers of `bbbbb` with
//! five and six words, the seventeen classified pairs of disjoint
//! twin-pair-free `bbb`-equivalent codes, a known rigid five-word code,
//! and the unique slice-pair fixture used by the slice-identity test.
//!
//! Everything here is input data for verification commands; regeneration
//! from scratch lives in [`crate::enumeration`].

use crate::alphabet::Alphabet;
use crate::code::PolyboxCode;
use crate::error::Result;
use crate::word::{parse_word, Word};

/// The two-class alphabet `{a, a', b, b'}` used by all embedded tables.
pub fn table_alphabet() -> Alphabet {
    Alphabet::with_classes(2)
}

fn code(words: &[&str]) -> PolyboxCode {
    let ab = table_alphabet();
    PolyboxCode::new(
        words
            .iter()
            .map(|t| parse_word(t, &ab).expect("embedded data parses")),
    )
    .expect("embedded data is a code")
}

/// The unique (up to isomorphism) five-word twin-pair-free cover of
/// `bbbbb`, all words meeting its box.
pub fn five_word_cover() -> PolyboxCode {
    code(&["aaabb", "a'a'a'bb", "baa'bb", "a'babb", "aa'bbb"])
}

/// The unique (up to isomorphism) six-word twin-pair-free cover of
/// `bbbbb`, all words meeting its box.
pub fn six_word_cover() -> PolyboxCode {
    code(&["aaaab", "a'a'a'ab", "baa'ab", "a'baab", "aa'bab", "bbba'b"])
}

/// A rigid five-word code covering `bbb` (it is also the K-side of the
/// last two rows of [`equivalent_pair_table`]).
pub fn rigid_example_code() -> PolyboxCode {
    code(&["aaa", "a'a'a'", "baa'", "a'ba", "aa'b"])
}

/// The classified pairs `(K, M)` of disjoint twin-pair-free codes that
/// cover the same part of `bbb`'s box: every such pair is isomorphic,
/// under maps fixing `bbb` and applied to both sides in order, to exactly
/// one row. One class appears in both orientations (the rows pairing the
/// five-word rigid code with `{bbb}` and with its mirror); the rows are
/// kept verbatim.
pub fn equivalent_pair_table() -> Vec<(PolyboxCode, PolyboxCode)> {
    [
        (vec!["aab", "aa'a"], vec!["aba", "aaa'"]),
        (vec!["bab", "ba'a"], vec!["bba", "baa'"]),
        (vec!["abb", "a'a'a'"], vec!["ba'a'", "aba", "aaa'"]),
        (vec!["aab", "ba'a'"], vec!["aba'", "aaa", "a'a'a'"]),
        (vec!["bab", "ba'a"], vec!["aab", "aa'a", "a'ba", "a'aa'"]),
        (vec!["aba'", "a'a'a'", "bba"], vec!["aab", "a'aa", "ba'b"]),
        (vec!["aba'", "a'a'a'", "bba"], vec!["abb", "a'aa", "a'a'b"]),
        (vec!["aba'", "a'a'a'", "bba"], vec!["aaa'", "baa", "ba'b"]),
        (vec!["aab", "a'ba'", "ba'a"], vec!["aba", "a'a'b", "baa'"]),
        (vec!["aba", "a'aa'", "ba'a'"], vec!["aaa", "aa'b", "a'ba'"]),
        (
            vec!["aaa'", "aba", "a'aa", "a'ba'"],
            vec!["aa'a", "a'a'a'", "bab"],
        ),
        (
            vec!["aaa", "aba'", "a'ab", "ba'a"],
            vec!["aa'a'", "baa'", "bba"],
        ),
        (
            vec!["aba'", "a'aa'", "a'a'a", "baa"],
            vec!["aaa", "aa'a'", "a'ba", "baa'"],
        ),
        (
            vec!["aab", "aa'a", "a'aa'", "a'ba"],
            vec!["aaa'", "aba", "a'ab", "a'a'a"],
        ),
        (
            vec!["aaa", "aba'", "a'a'a'", "a'ba"],
            vec!["aab", "aa'a'", "a'aa", "a'a'b"],
        ),
        (
            vec!["aaa", "a'a'a'", "baa'", "a'ba", "aa'b"],
            vec!["bbb"],
        ),
        (
            vec!["aaa", "a'a'a'", "baa'", "a'ba", "aa'b"],
            vec!["a'a'a", "aaa'", "ba'a'", "aba", "a'ab"],
        ),
    ]
    .iter()
    .map(|(k, m)| (code(k), code(m)))
    .collect()
}

/// The word whose box the table pairs agree on.
pub fn equivalent_pair_target() -> Word {
    parse_word("bbb", &table_alphabet()).expect("embedded data parses")
}

/// The unique (up to isomorphism) pair of five-word twin-pair-free slices
/// `(W^a, W^a')` of a d=6 code, together with the one-word slices
/// `(V^a, V^a')`, satisfying the slice set identity
/// `⋃E(V^a)∖⋃E(V^a') = ⋃E(W^a)∖⋃E(W^a')` after dropping the sliced
/// coordinate. Returned in full dimension 6; the identity holds on the
/// coordinate-0-deleted codes.
pub struct SlicePairFixture {
    pub w_a: PolyboxCode,
    pub w_a_prime: PolyboxCode,
    pub v_a: PolyboxCode,
    pub v_a_prime: PolyboxCode,
}

pub fn slice_pair_fixture() -> SlicePairFixture {
    SlicePairFixture {
        w_a: code(&["aaaabb", "aa'a'a'bb", "abaa'bb", "aa'babb", "aaa'bbb"]),
        w_a_prime: code(&[
            "a'ab'abb",
            "a'bbb'bb",
            "a'bb'a'bb",
            "a'b'a'a'bb",
            "a'b'babb",
        ]),
        v_a: code(&["abbbbb"]),
        v_a_prime: code(&["a'aa'b'bb"]),
    }
}

/// Delete a coordinate from every word of a code (slices used by the
/// fixture are codes again).
pub fn delete_coord(code: &PolyboxCode, i: usize) -> Result<PolyboxCode> {
    PolyboxCode::new(
        code.words()
            .iter()
            .map(|w| w.delete_coord(i))
            .collect::<Result<Vec<_>>>()?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{covers, has_twin_pair};
    use crate::grid::{q_equivalent, realize};

    #[test]
    fn embedded_covers_cover_bbbbb() {
        let ab = table_alphabet();
        let u = parse_word("bbbbb", &ab).unwrap();
        for cover in [five_word_cover(), six_word_cover()] {
            assert!(covers(&u, &cover).unwrap());
            assert!(!has_twin_pair(&cover));
        }
    }

    #[test]
    fn table_pairs_are_equivalent_on_the_target_box() {
        let q = equivalent_pair_target();
        for (k_side, m_side) in equivalent_pair_table() {
            assert!(q_equivalent(&k_side, &m_side, &q).unwrap());
            assert!(!has_twin_pair(&k_side));
            assert!(!has_twin_pair(&m_side));
            // Disjoint codes.
            for w in m_side.words() {
                assert!(!k_side.contains(w));
            }
        }
    }

    #[test]
    fn slice_fixture_satisfies_the_set_identity() {
        let f = slice_pair_fixture();
        let wa = delete_coord(&f.w_a, 0).unwrap();
        let wap = delete_coord(&f.w_a_prime, 0).unwrap();
        let va = delete_coord(&f.v_a, 0).unwrap();
        let vap = delete_coord(&f.v_a_prime, 0).unwrap();
        let r = |c: &PolyboxCode| realize(c, 2).unwrap();
        assert_eq!(
            r(&va).difference(&r(&vap)).unwrap(),
            r(&wa).difference(&r(&wap)).unwrap()
        );
        assert_eq!(
            r(&vap).difference(&r(&va)).unwrap(),
            r(&wap).difference(&r(&wa)).unwrap()
        );
    }

    #[test]
    fn slice_fixture_words_are_not_cross_covered() {
        let f = slice_pair_fixture();
        for v in f.w_a_prime.words() {
            assert!(!covers(v, &f.w_a).unwrap());
        }
        for v in f.w_a.words() {
            assert!(!covers(v, &f.w_a_prime).unwrap());
        }
    }

    #[test]
    fn rigid_example_is_the_last_rows_k_side() {
        let table = equivalent_pair_table();
        assert_eq!(table[15].0, rigid_example_code());
        assert_eq!(table[16].0, rigid_example_code());
    }
}
