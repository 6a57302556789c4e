//! Alphabets with fixed-point-free involutive complementation.
//!
//! An alphabet consists of `k` complement classes; each class contributes two
//! letters of opposite polarity, written `a` and `a'`. Complementation flips
//! the polarity and is therefore an involution without fixed points.

use crate::error::{Error, Result};
use std::fmt;

/// A single letter, encoded as `2*class + polarity`.
///
/// The encoding makes complementation a single XOR and keeps words compact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(pub u8);

impl Letter {
    pub fn new(class: usize, polarity: u8) -> Letter {
        debug_assert!(polarity < 2);
        Letter((class as u8) << 1 | polarity)
    }

    /// Complement class index in `[k]`.
    #[inline]
    pub fn class(self) -> usize {
        (self.0 >> 1) as usize
    }

    /// Polarity: 0 for the plain letter, 1 for the primed letter.
    #[inline]
    pub fn polarity(self) -> u8 {
        self.0 & 1
    }

    /// The complementary letter `s'` (`s'' = s`, `s' != s`).
    #[inline]
    pub fn complement(self) -> Letter {
        Letter(self.0 ^ 1)
    }

    /// True iff `self` and `other` are complementary letters.
    #[inline]
    pub fn is_complement_of(self, other: Letter) -> bool {
        self.0 ^ 1 == other.0
    }

    /// True iff the letters share a complement class.
    #[inline]
    pub fn same_class(self, other: Letter) -> bool {
        self.0 >> 1 == other.0 >> 1
    }
}

/// A finite alphabet `S` of `2k` letters grouped into `k` complement classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    class_names: Vec<String>,
}

impl Alphabet {
    /// Build an alphabet from ordered class names, e.g. `["a", "b"]` for
    /// `S = {a, a', b, b'}`.
    pub fn new<S: Into<String>>(class_names: impl IntoIterator<Item = S>) -> Result<Alphabet> {
        let class_names: Vec<String> = class_names.into_iter().map(Into::into).collect();
        if class_names.is_empty() {
            return Err(Error::InvalidInput("alphabet needs at least one class".into()));
        }
        for (i, name) in class_names.iter().enumerate() {
            if name.is_empty() || name.contains('\'') || name.contains('′') {
                return Err(Error::InvalidInput(format!("bad class name {name:?}")));
            }
            if name.chars().any(|c| c.is_whitespace() || c == '#' || c == ';') {
                return Err(Error::InvalidInput(format!("bad class name {name:?}")));
            }
            if class_names[..i].contains(name) {
                return Err(Error::InvalidInput(format!("duplicate class name {name:?}")));
            }
        }
        Ok(Alphabet { class_names })
    }

    /// Convenience: the first `k` single-letter names `a, b, c, ...`.
    pub fn with_classes(k: usize) -> Alphabet {
        assert!(k >= 1 && k <= 26);
        let names = (0..k).map(|i| ((b'a' + i as u8) as char).to_string());
        Alphabet::new(names).expect("generated names are valid")
    }

    /// Number of complement classes `k`; `|S| = 2k`.
    pub fn classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn class_name(&self, class: usize) -> &str {
        &self.class_names[class]
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|n| n == name)
    }

    /// All `2k` letters in canonical order `a, a', b, b', ...`.
    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..2 * self.classes() as u8).map(Letter)
    }

    /// True iff the letter's class exists in this alphabet.
    pub fn contains(&self, letter: Letter) -> bool {
        letter.class() < self.classes()
    }

    /// Render a letter in apostrophe notation, e.g. `a'`.
    pub fn format_letter(&self, letter: Letter) -> String {
        let name = &self.class_names[letter.class()];
        if letter.polarity() == 1 {
            format!("{name}'")
        } else {
            name.clone()
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.class_names.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_fixed_point_free_involution() {
        let alphabet = Alphabet::with_classes(3);
        for s in alphabet.letters() {
            assert_eq!(s.complement().complement(), s);
            assert_ne!(s.complement(), s);
            assert!(s.same_class(s.complement()));
        }
    }

    #[test]
    fn letter_encoding_round_trips() {
        for class in 0..4 {
            for polarity in 0..2 {
                let s = Letter::new(class, polarity);
                assert_eq!(s.class(), class);
                assert_eq!(s.polarity(), polarity);
            }
        }
    }

    #[test]
    fn rejects_bad_class_names() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a'"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }
}
