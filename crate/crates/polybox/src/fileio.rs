//! Plain-text file formats: codes, cover families, and tilings.
//!
//! Code files are UTF-8 text with an `alphabet: a b …` header line, one
//! word per line in apostrophe notation (`aa'b`), and `#` comment lines.
//! Cover-family files add a target/constraint header and one cover per
//! line as `{word;word;…}`. Tiling files carry one translation vector per
//! line as reduced fractions.

use num_rational::Ratio;

use crate::alphabet::Alphabet;
use crate::code::PolyboxCode;
use crate::enumeration::{CoverConstraints, CoverFamily, CoverTarget};
use crate::error::{Error, Result};
use crate::tiling::PeriodicTiling;
use crate::word::{parse_word, parse_word_dim, Word};

/// Lines of `text` with comments and blanks stripped.
fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(|l| l.trim())
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_alphabet_header(line: &str) -> Result<Alphabet> {
    let names = line
        .strip_prefix("alphabet:")
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "expected an `alphabet:` header, got {line:?}"
            ))
        })?
        .split_whitespace()
        .collect::<Vec<_>>();
    Alphabet::new(names)
}

/// Serialize a code: alphabet header, one word per line.
pub fn write_code(code: &PolyboxCode, alphabet: &Alphabet) -> String {
    let mut out = format!("alphabet: {}\n", alphabet.class_names().join(" "));
    for w in code.words() {
        out.push_str(&w.format(alphabet));
        out.push('\n');
    }
    out
}

/// Parse a code file; returns the code and its declared alphabet.
pub fn read_code(text: &str) -> Result<(PolyboxCode, Alphabet)> {
    let mut lines = content_lines(text);
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty code file".into()))?;
    let alphabet = parse_alphabet_header(header)?;
    let mut words: Vec<Word> = Vec::new();
    for line in lines {
        let w = match words.first() {
            Some(first) => parse_word_dim(line, &alphabet, first.dim())?,
            None => parse_word(line, &alphabet)?,
        };
        words.push(w);
    }
    Ok((PolyboxCode::new(words)?, alphabet))
}

fn format_cover(cover: &PolyboxCode, alphabet: &Alphabet) -> String {
    let words: Vec<String> =
        cover.words().iter().map(|w| w.format(alphabet)).collect();
    format!("{{{}}}", words.join(";"))
}

fn parse_cover(line: &str, alphabet: &Alphabet) -> Result<PolyboxCode> {
    let inner = line
        .strip_prefix('{')
        .and_then(|l| l.strip_suffix('}'))
        .ok_or_else(|| {
            Error::InvalidInput(format!("covers are written {{w;w;…}}: {line:?}"))
        })?;
    PolyboxCode::new(
        inner
            .split(';')
            .map(|t| parse_word(t.trim(), alphabet))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// Serialize a cover family: alphabet and target headers, member count,
/// one cover per line.
pub fn write_cover_family(
    family: &CoverFamily,
    alphabet: &Alphabet,
) -> String {
    let mut out = format!("alphabet: {}\n", alphabet.class_names().join(" "));
    match &family.target {
        CoverTarget::Word(w) => {
            out.push_str(&format!("target-word: {}\n", w.format(alphabet)));
        }
        CoverTarget::Code(c) => {
            out.push_str(&format!("target-code: {}\n", format_cover(c, alphabet)));
        }
    }
    let c = &family.constraints;
    out.push_str(&format!(
        "twin-pair-free: {}\nall-intersecting: {}\n",
        c.twin_pair_free, c.all_intersecting
    ));
    if let Some(size) = c.size {
        out.push_str(&format!("size: {size}\n"));
    }
    if let Some(max) = c.max_words {
        out.push_str(&format!("max-words: {max}\n"));
    }
    out.push_str(&format!("covers: {}\n", family.members.len()));
    for m in &family.members {
        out.push_str(&format_cover(m, alphabet));
        out.push('\n');
    }
    out
}

/// Parse a cover-family file; returns the family and its alphabet. The
/// recorded member count must match the body.
pub fn read_cover_family(text: &str) -> Result<(CoverFamily, Alphabet)> {
    let mut lines = content_lines(text).peekable();
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidInput("empty cover family file".into()))?;
    let alphabet = parse_alphabet_header(header)?;
    let mut target: Option<CoverTarget> = None;
    let mut constraints = CoverConstraints::default();
    let mut declared: Option<usize> = None;
    let mut members: Vec<PolyboxCode> = Vec::new();
    for line in lines {
        if let Some(rest) = line.strip_prefix("target-word:") {
            target = Some(CoverTarget::Word(parse_word(rest.trim(), &alphabet)?));
        } else if let Some(rest) = line.strip_prefix("target-code:") {
            target = Some(CoverTarget::Code(parse_cover(rest.trim(), &alphabet)?));
        } else if let Some(rest) = line.strip_prefix("twin-pair-free:") {
            constraints.twin_pair_free = parse_bool(rest)?;
        } else if let Some(rest) = line.strip_prefix("all-intersecting:") {
            constraints.all_intersecting = parse_bool(rest)?;
        } else if let Some(rest) = line.strip_prefix("size:") {
            constraints.size = Some(parse_count(rest)?);
        } else if let Some(rest) = line.strip_prefix("max-words:") {
            constraints.max_words = Some(parse_count(rest)?);
        } else if let Some(rest) = line.strip_prefix("covers:") {
            declared = Some(parse_count(rest)?);
        } else {
            members.push(parse_cover(line, &alphabet)?);
        }
    }
    let target = target
        .ok_or_else(|| Error::InvalidInput("missing target header".into()))?;
    if let Some(n) = declared {
        if n != members.len() {
            return Err(Error::InvalidInput(format!(
                "header declares {n} covers, file has {}",
                members.len()
            )));
        }
    }
    Ok((CoverFamily { target, members, constraints }, alphabet))
}

fn parse_bool(text: &str) -> Result<bool> {
    match text.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(Error::InvalidInput(format!("expected a bool: {other:?}"))),
    }
}

fn parse_count(text: &str) -> Result<usize> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("expected a count: {text:?}")))
}

/// Serialize a tiling: one translation vector per line, coordinates as
/// reduced fractions separated by spaces.
pub fn write_tiling(tiling: &PeriodicTiling) -> String {
    let mut out = String::new();
    for t in tiling.translations() {
        let coords: Vec<String> = t.iter().map(|c| c.to_string()).collect();
        out.push_str(&coords.join(" "));
        out.push('\n');
    }
    out
}

/// Parse a tiling file.
pub fn read_tiling(text: &str) -> Result<PeriodicTiling> {
    let mut translations: Vec<Vec<Ratio<i64>>> = Vec::new();
    for line in content_lines(text) {
        let coords = line
            .split_whitespace()
            .map(parse_fraction)
            .collect::<Result<Vec<_>>>()?;
        translations.push(coords);
    }
    let dim = translations
        .first()
        .map(|t| t.len())
        .ok_or_else(|| Error::InvalidInput("empty tiling file".into()))?;
    PeriodicTiling::new(dim, translations)
}

fn parse_fraction(text: &str) -> Result<Ratio<i64>> {
    let bad = || Error::InvalidInput(format!("expected a fraction: {text:?}"));
    match text.split_once('/') {
        Some((num, den)) => {
            let n: i64 = num.trim().parse().map_err(|_| bad())?;
            let d: i64 = den.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Ratio::new(n, d))
        }
        None => {
            let n: i64 = text.trim().parse().map_err(|_| bad())?;
            Ok(Ratio::from_integer(n))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{cover_word, CoverWordOpts};
    use crate::tiling::IntervalMap;

    fn q(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn code_roundtrip() {
        let text = "# a comment\nalphabet: a b\n\naab\naa'a\n";
        let (code, ab) = read_code(text).unwrap();
        assert_eq!(code.len(), 2);
        let written = write_code(&code, &ab);
        let (again, _) = read_code(&written).unwrap();
        assert_eq!(code, again);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(read_code("alphabet: a\naa\na\n").is_err());
    }

    #[test]
    fn cover_family_roundtrip() {
        let ab = Alphabet::with_classes(2);
        let u = parse_word("bbb", &ab).unwrap();
        let family = cover_word(&u, 5, &CoverWordOpts::new(2)).unwrap();
        let text = write_cover_family(&family, &ab);
        let (again, _) = read_cover_family(&text).unwrap();
        assert_eq!(family.members, again.members);
        assert_eq!(
            family.constraints.twin_pair_free,
            again.constraints.twin_pair_free
        );
    }

    #[test]
    fn cover_count_mismatch_is_rejected() {
        let text = "alphabet: a b\ntarget-word: bbb\ncovers: 2\n{aab;aa'a}\n";
        assert!(read_cover_family(text).is_err());
    }

    #[test]
    fn tiling_roundtrip() {
        let ab = Alphabet::with_classes(1);
        let grid = PolyboxCode::new(
            ["aa", "aa'", "a'a", "a'a'"]
                .iter()
                .map(|t| parse_word(t, &ab).unwrap()),
        )
        .unwrap();
        let tiling = crate::tiling::realize_tiling(
            &grid,
            &IntervalMap::uniform(2, &[q(0, 1)]).unwrap(),
        )
        .unwrap();
        let text = write_tiling(&tiling);
        assert_eq!(read_tiling(&text).unwrap(), tiling);
    }

    #[test]
    fn fractions_parse_reduced_and_integral() {
        assert_eq!(parse_fraction("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_fraction("1").unwrap(), q(1, 1));
        assert!(parse_fraction("1/0").is_err());
    }
}
