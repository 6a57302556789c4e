//! Exact combinatorics of polybox codes.
//!
//! A polybox code is a set of pairwise *dichotomous* words over an alphabet
//! with fixed-point-free involutive complementation: for every pair of words
//! some coordinate carries complementary letters. Codes encode suits of
//! pairwise dichotomous boxes; twin-pair-free codes are exactly the cliques
//! of generalized Keller graphs, and partition codes (codes with `2^d`
//! words) realize as 2-periodic cube tilings of the d-torus.
//!
//! The crate provides:
//! - [`code`]: words, codes, the weight function `g`, the cover criterion,
//!   slices, distributions, exact measure differences, siblings graphs;
//! - [`grid`]: the exact set-level oracle over the equicomplementary
//!   realization grid (bit sets over `({0,1}^k)^d` cells);
//! - [`iso`]: the symmetry group (coordinate permutations composed with
//!   per-coordinate complement-respecting letter bijections), canonical
//!   forms and orbit expansion;
//! - [`enumeration`]: the cover-search procedures (single-word covers via
//!   seeded frequency-profile search, code covers via incremental merging),
//!   q-equivalent pair enumeration, and distribution admissibility filters;
//! - [`census`]: cover censuses and the two-level cover-closure pipeline;
//! - [`keller`]: Keller-graph clique search (branch and bound);
//! - [`rigidity`]: alternative-suit search and rigidity verdicts;
//! - [`tiling`]: rational 2-periodic torus tilings realized from partition
//!   codes, validation, twin-pair detection, and r-statistics;
//! - [`fileio`]: the plain-text code/tiling file formats.
//!
//! All arithmetic is exact (integers and rationals); no floats anywhere.

pub mod alphabet;
pub mod census;
pub mod code;
pub mod enumeration;
pub mod error;
pub mod fileio;
pub mod grid;
pub mod iso;
pub mod keller;
pub mod rigidity;
pub mod tables;
pub mod tiling;
pub mod word;

pub use alphabet::{Alphabet, Letter};
pub use code::PolyboxCode;
pub use error::{Budget, Error, Result};
pub use word::{parse_word, Word};
