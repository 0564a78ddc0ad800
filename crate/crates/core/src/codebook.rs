//! Codes over Z_q^n: storage, minimum distance, the bounded-radius
//! list decoder, and the two families used to stress reconstruction
//! from the worst side.

use crate::balls::{self, BallSpec};
use crate::channels::{ErrorModel, OutputBatch, SamplingRegime};
use crate::error::{Error, Result};
use crate::word::{self, Word};
use crate::Caps;

/// A nonempty set of plain words sharing one length and alphabet.
/// Minimum distance is computed once at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    q: u32,
    n: usize,
    words: Vec<Word>,
    min_distance: Option<u64>,
}

impl Code {
    pub fn new(q: u32, n: usize, mut words: Vec<Word>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter {
                reason: format!("alphabet size {q} below 2"),
            });
        }
        if words.is_empty() {
            return Err(Error::InvalidParameter {
                reason: "a code needs at least one word".to_string(),
            });
        }
        for w in &words {
            if w.q() != q {
                return Err(Error::AlphabetMismatch {
                    left: q,
                    right: w.q(),
                });
            }
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: w.len(),
                });
            }
            if !w.is_plain() {
                return Err(Error::ErasedSymbol {
                    context: "codeword",
                });
            }
        }
        words.sort();
        words.dedup();
        let mut min_distance: Option<u64> = None;
        for (i, a) in words.iter().enumerate() {
            for b in &words[i + 1..] {
                let d = word::hamming_distance(a, b)? as u64;
                min_distance = Some(min_distance.map_or(d, |m| m.min(d)));
            }
        }
        Ok(Code {
            q,
            n,
            words,
            min_distance,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// None for a singleton code, whose distance is undefined.
    pub fn min_distance(&self) -> Option<u64> {
        self.min_distance
    }

    /// Largest e with 2e+1 within the minimum distance.
    pub fn correction_radius(&self) -> Option<u64> {
        self.min_distance.map(|d| (d - 1) / 2)
    }

    /// A singleton code corrects any number of errors.
    pub fn is_error_correcting(&self, e: u64) -> bool {
        match self.min_distance {
            None => true,
            Some(d) => d > 2 * e,
        }
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }
}

/// All codewords within the given Hamming radius of u, capped at
/// m_cap; more than m_cap hits means the code breaks its declared
/// list-size promise.
pub fn code_decoder(code: &Code, u: &Word, radius: u64, m_cap: u64) -> Result<Vec<Word>> {
    if u.q() != code.q() {
        return Err(Error::AlphabetMismatch {
            left: code.q(),
            right: u.q(),
        });
    }
    if u.len() != code.n() {
        return Err(Error::LengthMismatch {
            left: code.n(),
            right: u.len(),
        });
    }
    let mut hits = Vec::new();
    for c in code.words() {
        if word::hamming_distance(c, u)? as u64 <= radius {
            hits.push(c.clone());
            if hits.len() as u64 > m_cap {
                return Err(Error::DecodeFailed {
                    reason: format!("more than {m_cap} codewords within radius {radius} of {u}"),
                });
            }
        }
    }
    Ok(hits)
}

/// The binary-support code with floor(n / (e+1)) words, each a run of
/// e+1 ones in its own block. Disjoint supports make the distance
/// 2e+2 whenever two words exist.
pub fn constant_weight_code(n: u64, e: u64, q: u32) -> Result<Code> {
    if n < e + 1 {
        return Err(Error::InvalidParameter {
            reason: format!("need n of at least {} for weight {}", e + 1, e + 1),
        });
    }
    let n = n as usize;
    let run = (e + 1) as usize;
    let words: Vec<Word> = (0..n / run)
        .map(|j| {
            let mut codes = vec![0u32; n];
            for c in codes.iter_mut().skip(j * run).take(run) {
                *c = 1;
            }
            Word::from_codes(q, codes).expect("binary codes fit any alphabet")
        })
        .collect();
    Code::new(q, n, words)
}

/// An e-error-correcting code together with a batch of t = e + ell
/// substitution outputs consistent with all ell(q-1) + 1 codewords at
/// once. Reconstruction lists cannot be shorter than that.
pub fn adversarial_code(e: u64, ell: u64, q: u32, caps: &Caps) -> Result<(Code, OutputBatch)> {
    if q < 2 || e < 1 || ell < 1 {
        return Err(Error::InvalidParameter {
            reason: format!("degenerate construction parameters e={e} ell={ell} q={q}"),
        });
    }
    let t = e + ell;
    let n = e * (q as u64 - 1) * ell + t;
    let n_usize = n as usize;

    let mut words = Vec::new();
    for i in 1..=(q as u64 - 1) * ell {
        let h = (i - 1) / (q as u64 - 1);
        let p = i - h * (q as u64 - 1);
        let mut codes = vec![0u32; n_usize];
        codes[h as usize] = p as u32;
        let run_start = ((i - 1) * e + ell + 1) as usize;
        let run_end = (i * e + ell) as usize;
        for c in codes.iter_mut().take(run_end).skip(run_start - 1) {
            *c = 1;
        }
        words.push(Word::from_codes(q, codes).expect("values below q"));
    }
    let mut last = vec![0u32; n_usize];
    let tail_start = (e * (q as u64 - 1) * ell + ell + 1) as usize;
    for c in last.iter_mut().take(n_usize).skip(tail_start - 1) {
        *c = 1;
    }
    words.push(Word::from_codes(q, last).expect("values below q"));
    let code = Code::new(q, n_usize, words)?;

    // Everything of weight below ell, plus one word of weight ell.
    let zero = Word::zero(q, n_usize);
    let spec = BallSpec::new(zero, ErrorModel::Substitution { t: ell - 1 })?;
    let mut outputs = balls::enumerate_ball(&spec, caps)?;
    let mut heavy = vec![0u32; n_usize];
    for c in heavy.iter_mut().take(ell as usize) {
        *c = 1;
    }
    outputs.push(Word::from_codes(q, heavy).expect("values below q"));
    outputs.sort();
    let batch = OutputBatch::new(
        q,
        n_usize,
        ErrorModel::Substitution { t },
        false,
        outputs,
        SamplingRegime::Constructed,
    )?;
    Ok((code, batch))
}

/// Plain-text code format: a "q n" header line, then one word per
/// line.
pub fn parse_code(text: &str) -> Result<Code> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(Error::ParseInput {
        reason: "empty code file".to_string(),
    })?;
    let mut parts = header.split_whitespace();
    let q: u32 = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(Error::ParseInput {
            reason: format!("bad code header {header:?}, expected \"q n\""),
        })?;
    let n: usize = parts
        .next()
        .and_then(|s| s.parse().ok())
        .ok_or(Error::ParseInput {
            reason: format!("bad code header {header:?}, expected \"q n\""),
        })?;
    if parts.next().is_some() {
        return Err(Error::ParseInput {
            reason: format!("trailing tokens in code header {header:?}"),
        });
    }
    let words = lines
        .map(|line| Word::parse(q, line))
        .collect::<Result<Vec<_>>>()?;
    Code::new(q, n, words)
}

pub fn code_to_string(code: &Code) -> String {
    let mut out = format!("{} {}\n", code.q(), code.n());
    for w in code.words() {
        out.push_str(&w.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::hamming_distance;

    fn w(q: u32, text: &str) -> Word {
        Word::parse(q, text).unwrap()
    }

    fn shown(words: &[Word]) -> Vec<String> {
        words.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn min_distance_and_radius() {
        let c = Code::new(2, 3, vec![w(2, "000"), w(2, "111")]).unwrap();
        assert_eq!(c.min_distance(), Some(3));
        assert_eq!(c.correction_radius(), Some(1));
        assert!(c.is_error_correcting(1));
        assert!(!c.is_error_correcting(2));
    }

    #[test]
    fn singleton_distance_is_undefined() {
        let c = Code::new(4, 2, vec![w(4, "31")]).unwrap();
        assert_eq!(c.min_distance(), None);
        assert!(c.is_error_correcting(7));
    }

    #[test]
    fn duplicate_words_collapse() {
        let c = Code::new(2, 2, vec![w(2, "01"), w(2, "01"), w(2, "10")]).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn constant_weight_examples() {
        let c = constant_weight_code(7, 2, 2).unwrap();
        assert_eq!(shown(c.words()), ["0001110", "1110000"]);
        assert_eq!(c.min_distance(), Some(6));

        let single = constant_weight_code(3, 2, 5).unwrap();
        assert_eq!(shown(single.words()), ["111"]);

        let three = constant_weight_code(6, 1, 2).unwrap();
        assert_eq!(shown(three.words()), ["000011", "001100", "110000"]);
        assert_eq!(three.min_distance(), Some(4));
    }

    #[test]
    fn constant_weight_is_error_correcting() {
        for e in 0..=2u64 {
            for n in (2 * (e + 1))..=8 {
                for q in 2..=3u32 {
                    let c = constant_weight_code(n, e, q).unwrap();
                    assert_eq!(c.len() as u64, n / (e + 1));
                    assert_eq!(c.min_distance(), Some(2 * e + 2));
                }
            }
        }
    }

    #[test]
    fn adversarial_code_worked_example() {
        let (code, batch) = adversarial_code(2, 2, 3, &Caps::default()).unwrap();
        assert_eq!(
            shown(code.words()),
            [
                "000000000011",
                "010000110000",
                "020000001100",
                "101100000000",
                "200011000000",
            ]
        );
        assert_eq!(code.min_distance(), Some(5));
        assert_eq!(batch.outputs.len(), 26);
        assert!(batch.outputs.contains(&w(3, "110000000000")));
        for c in code.words() {
            for y in &batch.outputs {
                assert!(hamming_distance(c, y).unwrap() <= 4);
            }
        }
    }

    #[test]
    fn adversarial_family_invariants() {
        let caps = Caps::default();
        for e in 1..=2u64 {
            for ell in 1..=2u64 {
                for q in 2..=4u32 {
                    let (code, batch) = adversarial_code(e, ell, q, &caps).unwrap();
                    let t = e + ell;
                    assert_eq!(code.len() as u64, (q as u64 - 1) * ell + 1);
                    assert!(code.is_error_correcting(e), "e={e} ell={ell} q={q}");
                    assert_eq!(
                        batch.outputs.len() as u64,
                        crate::bounds::ball_volume(code.n() as u64, q, ell - 1)
                            .try_into()
                            .map(|v: u64| v + 1)
                            .unwrap()
                    );
                    for c in code.words() {
                        for y in &batch.outputs {
                            assert!(hamming_distance(c, y).unwrap() as u64 <= t);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bounded_list_decoding() {
        let c = Code::new(2, 3, vec![w(2, "000"), w(2, "111")]).unwrap();
        assert_eq!(
            shown(&code_decoder(&c, &w(2, "100"), 1, 1).unwrap()),
            ["000"]
        );
        assert_eq!(
            shown(&code_decoder(&c, &w(2, "100"), 2, 2).unwrap()),
            ["000", "111"]
        );
        assert!(matches!(
            code_decoder(&c, &w(2, "100"), 2, 1),
            Err(Error::DecodeFailed { .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let (code, _) = adversarial_code(1, 2, 3, &Caps::default()).unwrap();
        let text = code_to_string(&code);
        assert_eq!(parse_code(&text).unwrap(), code);
        assert!(parse_code("").is_err());
        assert!(parse_code("2\n01\n").is_err());
        assert!(parse_code("2 3\n01\n").is_err());
    }

    #[test]
    fn membership_is_exact() {
        let c = constant_weight_code(6, 1, 3).unwrap();
        assert!(c.contains(&w(3, "110000")));
        assert!(!c.contains(&w(3, "110001")));
    }
}
