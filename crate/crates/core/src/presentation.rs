//! Finite group presentations over the alphabet `a`–`z`.
//!
//! A generator is a single lowercase letter; its uppercase form denotes the
//! inverse. Presentation text has the shape
//!
//! ```text
//! # optional comment lines
//! a b ; abAB, bb
//! ```
//!
//! Words are stored freely reduced and relators additionally cyclically
//! reduced, so the total relator length `L` is always measured on reduced
//! relators.

use std::fmt;

use thiserror::Error;

/// Largest number of generators the single-letter alphabet can name.
pub const MAX_GENERATORS: usize = 26;

/// A generator or its inverse. Stored as `±(index + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        let v = generator as i32 + 1;
        Letter(if inverse { -v } else { v })
    }

    pub fn generator(self) -> usize {
        (self.0.unsigned_abs() - 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Self {
        Letter(-self.0)
    }

    /// The raw signed index (`+i` generator, `-i` inverse, 1-based).
    pub fn signed(self) -> i32 {
        self.0
    }
}

/// A freely reduced word in the generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn generator(index: usize) -> Self {
        Word { letters: vec![Letter::new(index, false)] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn concat(&self, other: &Word) -> Self {
        Word::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn pow(&self, n: usize) -> Self {
        Word::from_letters(std::iter::repeat_n(self.letters.iter().copied(), n).flatten())
    }

    /// Strips matching inverse pairs from the two ends.
    pub fn cyclically_reduced(&self) -> Self {
        let mut lo = 0;
        let mut hi = self.letters.len();
        while hi - lo >= 2 && self.letters[lo] == self.letters[hi - 1].inverse() {
            lo += 1;
            hi -= 1;
        }
        Word { letters: self.letters[lo..hi].to_vec() }
    }

    /// Largest generator index used, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.generator()).max()
    }

    /// Exponent sum of each of the first `generators` generators.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut sums = vec![0i64; generators];
        for l in &self.letters {
            sums[l.generator()] += if l.is_inverse() { -1 } else { 1 };
        }
        sums
    }

    /// Replaces every generator `i` by `images[i]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        Word::from_letters(self.letters.iter().flat_map(|l| {
            let img = &images[l.generator()];
            let letters: Vec<Letter> = if l.is_inverse() { img.inverse().letters } else { img.letters.clone() };
            letters
        }))
    }
}

/// Returns the freely reduced form of `w`.
pub fn free_reduce(w: &[Letter]) -> Word {
    Word::from_letters(w.iter().copied())
}

/// Reverses `w` and inverts every letter.
pub fn word_inverse(w: &Word) -> Word {
    w.inverse()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("duplicate generator '{name}' at byte {pos}")]
    DuplicateGenerator { name: char, pos: usize },
    #[error("letter '{letter}' at byte {pos} is not a declared generator")]
    UnknownLetter { letter: char, pos: usize },
    #[error("a presentation needs at least one generator")]
    NoGenerators,
    #[error("at most {MAX_GENERATORS} generators are supported")]
    TooManyGenerators,
    #[error("generator index {0} out of range")]
    GeneratorOutOfRange(usize),
}

/// A finite presentation with normalized relators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<char>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Builds a presentation from generator names and relator words.
    ///
    /// Relators are cyclically reduced; those that reduce to the identity are
    /// dropped.
    pub fn new(generators: Vec<char>, relators: Vec<Word>) -> Result<Self, PresentationError> {
        if generators.is_empty() {
            return Err(PresentationError::NoGenerators);
        }
        if generators.len() > MAX_GENERATORS {
            return Err(PresentationError::TooManyGenerators);
        }
        for (i, &g) in generators.iter().enumerate() {
            if !g.is_ascii_lowercase() {
                return Err(PresentationError::Syntax {
                    pos: i,
                    message: format!("generator '{g}' is not a lowercase ASCII letter"),
                });
            }
            if generators[..i].contains(&g) {
                return Err(PresentationError::DuplicateGenerator { name: g, pos: i });
            }
        }
        let mut out = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(m) = r.max_generator() {
                if m >= generators.len() {
                    return Err(PresentationError::GeneratorOutOfRange(m));
                }
            }
            let r = r.cyclically_reduced();
            if !r.is_empty() {
                out.push(r);
            }
        }
        Ok(Presentation { generators, relators: out })
    }

    /// Free group on the first `k` letters of the alphabet.
    pub fn free(k: usize) -> Result<Self, PresentationError> {
        Self::new(default_names(k)?, Vec::new())
    }

    pub fn generators(&self) -> &[char] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// Number of generators, written d(G) downstream.
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Total length of the (reduced) relators.
    pub fn relator_length_sum(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn deficiency(&self) -> i64 {
        self.generators.len() as i64 - self.relators.len() as i64
    }

    pub fn generator_index(&self, name: char) -> Option<usize> {
        self.generators.iter().position(|&g| g == name)
    }

    /// Parses a word over this presentation's alphabet. `1` or an empty
    /// string denotes the identity.
    pub fn parse_word(&self, text: &str) -> Result<Word, PresentationError> {
        parse_word_at(&self.generators, text.trim(), 0)
    }

    pub fn format_word(&self, w: &Word) -> String {
        format_word_with(&self.generators, w)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|c| c.to_string()).collect();
        write!(f, "{} ;", gens.join(" "))?;
        if !self.relators.is_empty() {
            let rels: Vec<String> = self.relators.iter().map(|r| self.format_word(r)).collect();
            write!(f, " {}", rels.join(", "))?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Presentation {
    type Err = PresentationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_presentation(s)
    }
}

/// `a`, `b`, `c`, ... for `k` generators.
pub fn default_names(k: usize) -> Result<Vec<char>, PresentationError> {
    if k > MAX_GENERATORS {
        return Err(PresentationError::TooManyGenerators);
    }
    Ok((0..k).map(|i| (b'a' + i as u8) as char).collect())
}

pub fn format_word_with(names: &[char], w: &Word) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.letters()
        .iter()
        .map(|l| {
            let c = names[l.generator()];
            if l.is_inverse() {
                c.to_ascii_uppercase()
            } else {
                c
            }
        })
        .collect()
}

fn parse_word_at(names: &[char], text: &str, offset: usize) -> Result<Word, PresentationError> {
    if text.is_empty() || text == "1" {
        return Ok(Word::identity());
    }
    let mut letters = Vec::with_capacity(text.len());
    for (i, ch) in text.char_indices() {
        let pos = offset + i;
        if !ch.is_ascii_alphabetic() {
            return Err(PresentationError::Syntax { pos, message: format!("unexpected character '{ch}' in word") });
        }
        let lower = ch.to_ascii_lowercase();
        let gen = names.iter().position(|&g| g == lower).ok_or(PresentationError::UnknownLetter { letter: ch, pos })?;
        letters.push(Letter::new(gen, ch.is_ascii_uppercase()));
    }
    Ok(Word::from_letters(letters))
}

/// Parses `<generators> ; <relators>` text. Lines whose first non-blank
/// character is `#` are comments.
pub fn parse_presentation(text: &str) -> Result<Presentation, PresentationError> {
    // Blank out comment lines so byte positions still refer to the input.
    let mut body = String::with_capacity(text.len());
    for line in text.split_inclusive('\n') {
        if line.trim_start().starts_with('#') {
            body.extend(line.chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
        } else {
            body.push_str(line);
        }
    }

    let semi = body.find(';').ok_or(PresentationError::Syntax {
        pos: body.len(),
        message: "expected ';' separating generators from relators".into(),
    })?;
    if let Some(extra) = body[semi + 1..].find(';') {
        return Err(PresentationError::Syntax { pos: semi + 1 + extra, message: "more than one ';'".into() });
    }

    let mut generators = Vec::new();
    let head = &body[..semi];
    let mut i = 0;
    for tok in head.split_whitespace() {
        let pos = head[i..].find(tok).map(|p| p + i).unwrap_or(i);
        i = pos + tok.len();
        let mut chars = tok.chars();
        let c = chars.next().unwrap_or(' ');
        if chars.next().is_some() || !c.is_ascii_lowercase() {
            return Err(PresentationError::Syntax {
                pos,
                message: format!("generator '{tok}' must be a single lowercase letter"),
            });
        }
        if generators.contains(&c) {
            return Err(PresentationError::DuplicateGenerator { name: c, pos });
        }
        generators.push(c);
    }
    if generators.is_empty() {
        return Err(PresentationError::NoGenerators);
    }
    if generators.len() > MAX_GENERATORS {
        return Err(PresentationError::TooManyGenerators);
    }

    let tail_start = semi + 1;
    let tail = &body[tail_start..];
    let mut relators = Vec::new();
    if !tail.trim().is_empty() {
        let mut start = 0;
        for piece in tail.split(',') {
            let offset = tail_start + start;
            start += piece.len() + 1;
            let trimmed = piece.trim();
            if trimmed.is_empty() {
                return Err(PresentationError::Syntax { pos: offset, message: "empty relator".into() });
            }
            let lead = piece.len() - piece.trim_start().len();
            relators.push(parse_word_at(&generators, trimmed, offset + lead)?);
        }
    }
    Presentation::new(generators, relators)
}
