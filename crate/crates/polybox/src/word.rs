//! Words: fixed-length sequences of letters.

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use std::cmp::Ordering;

/// Maximum supported dimension. Desk-scale computations use `d <= 7`; the
/// slack lets tests exercise slightly larger words.
pub const MAX_DIM: usize = 12;

/// A length-`d` sequence of letters. Stored inline so words are `Copy` and
/// cheap to hash, which matters at census scale (millions of words).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    letters: [Letter; MAX_DIM],
}

impl Word {
    pub fn new(letters: &[Letter]) -> Word {
        assert!(
            !letters.is_empty() && letters.len() <= MAX_DIM,
            "word dimension must be in 1..={MAX_DIM}"
        );
        let mut buf = [Letter(0); MAX_DIM];
        buf[..letters.len()].copy_from_slice(letters);
        Word { len: letters.len() as u8, letters: buf }
    }

    /// Dimension `d` of the word.
    #[inline]
    pub fn dim(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn letters(&self) -> &[Letter] {
        &self.letters[..self.len as usize]
    }

    /// Letter at coordinate `i` (0-based).
    #[inline]
    pub fn letter(&self, i: usize) -> Letter {
        debug_assert!(i < self.dim());
        self.letters[i]
    }

    /// Replace the letter at coordinate `i`, returning a new word.
    pub fn with_letter(&self, i: usize, letter: Letter) -> Word {
        let mut w = *self;
        w.letters[i] = letter;
        w
    }

    /// The word `v_{i^c}` obtained by deleting coordinate `i` (0-based).
    pub fn delete_coord(&self, i: usize) -> Result<Word> {
        let d = self.dim();
        if i >= d {
            return Err(Error::IndexOutOfRange { index: i, dim: d });
        }
        if d == 1 {
            return Err(Error::InvalidInput("cannot delete the only coordinate".into()));
        }
        let mut letters = [Letter(0); MAX_DIM];
        let mut n = 0;
        for (j, &s) in self.letters().iter().enumerate() {
            if j != i {
                letters[n] = s;
                n += 1;
            }
        }
        Ok(Word { len: n as u8, letters })
    }

    /// The restriction `v_A` to the coordinates in `coords` (0-based, kept in
    /// the given order).
    pub fn restrict(&self, coords: &[usize]) -> Result<Word> {
        if coords.is_empty() {
            return Err(Error::InvalidInput("restriction needs at least one coordinate".into()));
        }
        let mut letters = [Letter(0); MAX_DIM];
        for (n, &i) in coords.iter().enumerate() {
            if i >= self.dim() {
                return Err(Error::IndexOutOfRange { index: i, dim: self.dim() });
            }
            letters[n] = self.letters[i];
        }
        Ok(Word { len: coords.len() as u8, letters })
    }

    /// Largest class index used by the word plus one (classes are 0-based).
    pub fn classes_used(&self) -> usize {
        self.letters().iter().map(|s| s.class() + 1).max().unwrap_or(0)
    }

    /// Render in apostrophe notation with respect to `alphabet`.
    pub fn format(&self, alphabet: &Alphabet) -> String {
        self.letters().iter().map(|&s| alphabet.format_letter(s)).collect()
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    /// Lexicographic over letters (class index, then polarity), shorter first.
    fn cmp(&self, other: &Word) -> Ordering {
        self.letters().cmp(other.letters())
    }
}

/// Parse a word in apostrophe notation (e.g. `"aa'b"`). Class names are
/// matched greedily, longest first, each optionally followed by `'` or `′`.
pub fn parse_word(text: &str, alphabet: &Alphabet) -> Result<Word> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::InvalidInput("empty word".into()));
    }
    // Longest-first matching keeps multi-character class names unambiguous.
    let mut names: Vec<(usize, &str)> = alphabet
        .class_names()
        .iter()
        .enumerate()
        .map(|(i, n)| (i, n.as_str()))
        .collect();
    names.sort_by_key(|(_, n)| std::cmp::Reverse(n.len()));

    let mut rest = text;
    let mut letters = Vec::new();
    while !rest.is_empty() {
        let Some(&(class, name)) = names.iter().find(|(_, n)| rest.starts_with(n)) else {
            return Err(Error::UnknownClass(rest.chars().take(8).collect()));
        };
        rest = &rest[name.len()..];
        let polarity = if let Some(r) = rest.strip_prefix('\'') {
            rest = r;
            1
        } else if let Some(r) = rest.strip_prefix('′') {
            rest = r;
            1
        } else {
            0
        };
        if letters.len() == MAX_DIM {
            return Err(Error::InvalidInput(format!("word longer than {MAX_DIM} letters")));
        }
        letters.push(Letter::new(class, polarity));
    }
    Ok(Word::new(&letters))
}

/// Parse a word and check that it has the expected dimension.
pub fn parse_word_dim(text: &str, alphabet: &Alphabet, d: usize) -> Result<Word> {
    let w = parse_word(text, alphabet)?;
    if w.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, got: w.dim() });
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::with_classes(2)
    }

    #[test]
    fn parse_and_format_round_trip() {
        let alphabet = ab();
        for text in ["aa'b", "bbb", "a'b'ab", "b"] {
            let w = parse_word(text, &alphabet).unwrap();
            assert_eq!(w.format(&alphabet), text);
            assert_eq!(parse_word(&w.format(&alphabet), &alphabet).unwrap(), w);
        }
    }

    #[test]
    fn parse_unicode_prime() {
        let alphabet = ab();
        assert_eq!(
            parse_word("a′b", &alphabet).unwrap(),
            parse_word("a'b", &alphabet).unwrap()
        );
    }

    #[test]
    fn parse_six_letter_word() {
        // A 6-letter word in apostrophe notation parses coordinatewise.
        let alphabet = ab();
        let w = parse_word("ba'aab'a", &alphabet).unwrap();
        assert_eq!(w.dim(), 6);
        assert_eq!(w.letter(0), Letter::new(1, 0));
        assert_eq!(w.letter(1), Letter::new(0, 1));
        assert_eq!(w.letter(4), Letter::new(1, 1));
    }

    #[test]
    fn parse_rejects_garbage() {
        let alphabet = ab();
        assert!(parse_word("", &alphabet).is_err());
        assert!(parse_word("ax", &alphabet).is_err());
        assert!(parse_word_dim("aa", &alphabet, 3).is_err());
    }

    #[test]
    fn greedy_longest_name_match() {
        let alphabet = Alphabet::new(["x", "xy"]).unwrap();
        let w = parse_word("xy'x", &alphabet).unwrap();
        assert_eq!(w.dim(), 2);
        assert_eq!(w.letter(0), Letter::new(1, 1));
        assert_eq!(w.letter(1), Letter::new(0, 0));
    }

    #[test]
    fn delete_and_restrict() {
        let alphabet = ab();
        let w = parse_word("ab'a", &alphabet).unwrap();
        assert_eq!(w.delete_coord(1).unwrap(), parse_word("aa", &alphabet).unwrap());
        assert_eq!(w.restrict(&[2, 0]).unwrap(), parse_word("aa", &alphabet).unwrap());
        assert!(w.delete_coord(3).is_err());
    }

    #[test]
    fn ordering_is_lexicographic() {
        let alphabet = ab();
        let mut words: Vec<Word> = ["ba", "aa'", "aa", "a'a"]
            .iter()
            .map(|t| parse_word(t, &alphabet).unwrap())
            .collect();
        words.sort();
        let sorted: Vec<String> = words.iter().map(|w| w.format(&alphabet)).collect();
        assert_eq!(sorted, ["aa", "aa'", "a'a", "ba"]);
    }
}
