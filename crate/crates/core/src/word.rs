//! Words over Z_q with two extra markers: `*` for an erased symbol and
//! `?` for a coordinate a majority vote could not settle.
//!
//! Symbols are stored as integer codes with Plain(v) = v, Erased = q
//! and Unknown = q+1. Keeping the markers inside the integer range
//! makes the erasure semantics literal: a space with erasures is the
//! (q+1)-ary Hamming space, and the extended distance below is plain
//! code inequality, coordinate by coordinate.
//!
//! Erased coordinates count as nonzero: they belong to the support and
//! add one to the weight. Unknown participates in nothing; operations
//! other than completion and display reject it.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// One symbol of the extended alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Plain(u32),
    Erased,
    Unknown,
}

/// A word over Z_q, possibly carrying erased or unknown markers.
///
/// Length 0 is allowed (deletion balls bottom out there); code
/// construction rejects it separately. Ordering is by alphabet, then
/// lexicographically by symbol code, so sorting a ball is stable and
/// puts markers after all plain symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    q: u32,
    codes: Vec<u32>,
}

impl Word {
    /// Builds a word from raw symbol codes; each code must be at most
    /// q+1 (q encodes `*`, q+1 encodes `?`).
    pub fn from_codes(q: u32, codes: Vec<u32>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter {
                reason: format!("alphabet size q={q} below 2"),
            });
        }
        for &c in &codes {
            if c > q + 1 {
                return Err(Error::SymbolOutOfRange { value: c, q });
            }
        }
        Ok(Word { q, codes })
    }

    /// Builds a fully plain word; every value must be below q.
    pub fn from_plain(q: u32, values: &[u32]) -> Result<Self> {
        for &v in values {
            if v >= q {
                return Err(Error::SymbolOutOfRange { value: v, q });
            }
        }
        Word::from_codes(q, values.to_vec())
    }

    /// The all-zero word of length n.
    pub fn zero(q: u32, n: usize) -> Self {
        Word::from_codes(q, vec![0; n]).expect("q >= 2 checked by caller")
    }

    /// Internal constructor for enumeration hot paths; the caller
    /// guarantees codes are in range.
    pub(crate) fn from_codes_unchecked(q: u32, codes: Vec<u32>) -> Self {
        debug_assert!(codes.iter().all(|&c| c <= q + 1));
        Word { q, codes }
    }

    /// Parses the textual syntax: for q <= 10 symbols are single
    /// digits written back to back, for q > 10 they are space-separated
    /// decimal integers; `*` is an erasure and `?` an unknown either
    /// way. Empty (or all-whitespace) text is the length-0 word.
    pub fn parse(q: u32, text: &str) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter {
                reason: format!("alphabet size q={q} below 2"),
            });
        }
        let body = text.trim();
        let mut codes = Vec::new();
        if q <= 10 {
            for ch in body.chars() {
                let code = match ch {
                    '*' => q,
                    '?' => q + 1,
                    d if d.is_ascii_digit() => {
                        let v = d as u32 - '0' as u32;
                        if v >= q {
                            return Err(Error::ParseWord {
                                text: text.to_string(),
                                reason: format!("digit {v} outside alphabet of size {q}"),
                            });
                        }
                        v
                    }
                    other => {
                        return Err(Error::ParseWord {
                            text: text.to_string(),
                            reason: format!("unexpected character {other:?}"),
                        })
                    }
                };
                codes.push(code);
            }
        } else {
            for token in body.split_whitespace() {
                let code = match token {
                    "*" => q,
                    "?" => q + 1,
                    digits => {
                        let v: u32 = digits.parse().map_err(|_| Error::ParseWord {
                            text: text.to_string(),
                            reason: format!("unexpected token {token:?}"),
                        })?;
                        if v >= q {
                            return Err(Error::ParseWord {
                                text: text.to_string(),
                                reason: format!("symbol {v} outside alphabet of size {q}"),
                            });
                        }
                        v
                    }
                };
                codes.push(code);
            }
        }
        Ok(Word { q, codes })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    /// Raw symbol codes (plain value, or q for `*`, q+1 for `?`).
    pub fn codes(&self) -> &[u32] {
        &self.codes
    }

    pub fn symbol(&self, i: usize) -> Symbol {
        let c = self.codes[i];
        if c < self.q {
            Symbol::Plain(c)
        } else if c == self.q {
            Symbol::Erased
        } else {
            Symbol::Unknown
        }
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.len()).map(move |i| self.symbol(i))
    }

    pub fn is_erased(&self, i: usize) -> bool {
        self.codes[i] == self.q
    }

    pub fn is_unknown(&self, i: usize) -> bool {
        self.codes[i] == self.q + 1
    }

    pub fn has_erased(&self) -> bool {
        self.codes.contains(&self.q)
    }

    pub fn has_unknown(&self) -> bool {
        self.codes.iter().any(|&c| c == self.q + 1)
    }

    /// True when every symbol is a plain alphabet value.
    pub fn is_plain(&self) -> bool {
        self.codes.iter().all(|&c| c < self.q)
    }

    pub fn erased_count(&self) -> usize {
        self.codes.iter().filter(|&&c| c == self.q).count()
    }

    /// Symbol-wise equality that treats the markers abstractly, so
    /// words over different alphabets can be compared (the erasure
    /// marker's integer code differs with q).
    pub fn same_symbols(&self, other: &Word) -> bool {
        self.len() == other.len() && (0..self.len()).all(|i| self.symbol(i) == other.symbol(i))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for s in self.symbols() {
                match s {
                    Symbol::Plain(v) => write!(f, "{v}")?,
                    Symbol::Erased => write!(f, "*")?,
                    Symbol::Unknown => write!(f, "?")?,
                }
            }
        } else {
            for (i, s) in self.symbols().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                match s {
                    Symbol::Plain(v) => write!(f, "{v}")?,
                    Symbol::Erased => write!(f, "*")?,
                    Symbol::Unknown => write!(f, "?")?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(q={}, \"{}\")", self.q, self)
    }
}

/// Support data of a word. Coordinates are 1-based, as in every
/// externally visible report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportView {
    pub support: BTreeSet<usize>,
    pub vsupport: BTreeSet<(usize, Symbol)>,
    pub weight: usize,
}

/// Support, value support, and weight of a word. Erased coordinates
/// count as nonzero; words with unknown markers are rejected.
pub fn support_view(w: &Word) -> Result<SupportView> {
    if w.has_unknown() {
        return Err(Error::UnknownSymbol {
            context: "support computation",
        });
    }
    let mut support = BTreeSet::new();
    let mut vsupport = BTreeSet::new();
    for i in 0..w.len() {
        match w.symbol(i) {
            Symbol::Plain(0) => {}
            s => {
                support.insert(i + 1);
                vsupport.insert((i + 1, s));
            }
        }
    }
    let weight = support.len();
    Ok(SupportView {
        support,
        vsupport,
        weight,
    })
}

fn check_pair(x: &Word, y: &Word, context: &'static str) -> Result<()> {
    if x.q != y.q {
        return Err(Error::AlphabetMismatch {
            left: x.q,
            right: y.q,
        });
    }
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.has_unknown() || y.has_unknown() {
        return Err(Error::UnknownSymbol { context });
    }
    Ok(())
}

/// Hamming distance on the extended alphabet: the number of
/// coordinates whose symbols differ. An erasure differs from every
/// plain symbol and from nothing but itself.
pub fn hamming_distance(x: &Word, y: &Word) -> Result<usize> {
    check_pair(x, y, "Hamming distance")?;
    Ok(dist_codes(&x.codes, &y.codes))
}

/// The erasure-blind distance: coordinates where both symbols are
/// plain and differ. Equals the Hamming distance minus the coordinates
/// where exactly one side is erased.
pub fn erasure_aware_distance(x: &Word, y: &Word) -> Result<usize> {
    check_pair(x, y, "erasure-aware distance")?;
    let q = x.q;
    Ok(x.codes
        .iter()
        .zip(&y.codes)
        .filter(|&(&a, &b)| a != b && a != q && b != q)
        .count())
}

/// True when x can be obtained from y by deleting symbols. Both words
/// must be plain.
pub fn is_subsequence(x: &Word, y: &Word) -> Result<bool> {
    if x.q != y.q {
        return Err(Error::AlphabetMismatch {
            left: x.q,
            right: y.q,
        });
    }
    if !x.is_plain() || !y.is_plain() {
        return Err(Error::ErasedSymbol {
            context: "subsequence test",
        });
    }
    Ok(is_subsequence_codes(&x.codes, &y.codes))
}

/// Unchecked distance on raw code slices; enumeration hot path.
pub(crate) fn dist_codes(a: &[u32], b: &[u32]) -> usize {
    a.iter().zip(b).filter(|&(x, y)| x != y).count()
}

/// Unchecked subsequence test on raw code slices.
pub(crate) fn is_subsequence_codes(x: &[u32], y: &[u32]) -> bool {
    let mut it = y.iter();
    x.iter().all(|s| it.any(|t| t == s))
}
