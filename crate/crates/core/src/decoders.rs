//! Decoders that beat brute-force reconstruction: coordinatewise
//! majority with threshold-driven Unknowns, the two majority-plus-code
//! algorithms built on it, erasure resolution, and the two-output
//! insertion decoder.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::balls::{within_ball, CodeRef};
use crate::bounds::{self, power, ReconParams, Thresholds};
use crate::channels::{ErrorModel, OutputBatch};
use crate::codebook::{code_decoder, Code};
use crate::error::{Error, Result};
use crate::word::Word;
use crate::Caps;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    Unique,
    List,
    Failure(String),
}

/// What a decoder (or the brute-force list) concluded. Candidates are
/// sorted; Unique means exactly one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub candidates: Vec<Word>,
    pub status: DecodeStatus,
}

impl DecodeOutcome {
    pub(crate) fn from_candidates(mut candidates: Vec<Word>) -> Self {
        candidates.sort();
        candidates.dedup();
        let status = match candidates.len() {
            0 => DecodeStatus::Failure("no candidate is consistent with every output".to_string()),
            1 => DecodeStatus::Unique,
            _ => DecodeStatus::List,
        };
        DecodeOutcome { candidates, status }
    }

    pub fn is_unique(&self) -> bool {
        self.status == DecodeStatus::Unique
    }

    /// The decoded word, when there is exactly one.
    pub fn unique(&self) -> Option<&Word> {
        if self.is_unique() {
            self.candidates.first()
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        let status = match &self.status {
            DecodeStatus::Unique => json!("unique"),
            DecodeStatus::List => json!("list"),
            DecodeStatus::Failure(reason) => json!({ "failure": reason }),
        };
        json!({
            "status": status,
            "candidates": self.candidates.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Coordinatewise tallies against a threshold: a symbol is pinned only
/// when its tally strictly beats tau, otherwise the coordinate is
/// Unknown.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MajorityState {
    /// tallies[i][v]: how many outputs carry value v at coordinate i.
    pub tallies: Vec<Vec<u64>>,
    /// The majority word, with Unknown at unsettled coordinates.
    pub word: Word,
    /// 0-based coordinates left Unknown.
    pub unknown: BTreeSet<usize>,
}

pub fn majority_word(batch: &OutputBatch, tau: &BigRational) -> Result<MajorityState> {
    let n = batch.n;
    let q = batch.q;
    let count = batch.outputs.len() as u64;
    if count == 0 {
        return Err(Error::InvalidParameter {
            reason: "majority vote over zero outputs".to_string(),
        });
    }
    // Strictly beating tau >= N/2 is what makes two winners impossible.
    if tau * BigRational::from(BigInt::from(2)) < BigRational::from(BigInt::from(count)) {
        return Err(Error::InvalidParameter {
            reason: format!("threshold tau={tau} below half the output count {count}"),
        });
    }
    for y in &batch.outputs {
        if y.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: y.len(),
            });
        }
        if !y.is_plain() {
            return Err(Error::ErasedSymbol {
                context: "majority vote input",
            });
        }
    }
    let mut tallies = vec![vec![0u64; q as usize]; n];
    for y in &batch.outputs {
        for (i, &c) in y.codes().iter().enumerate() {
            tallies[i][c as usize] += 1;
        }
    }
    let mut codes = Vec::with_capacity(n);
    let mut unknown = BTreeSet::new();
    for (i, row) in tallies.iter().enumerate() {
        let mut winner: Option<u32> = None;
        for (v, &m) in row.iter().enumerate() {
            if BigRational::from(BigInt::from(m)) > *tau {
                if let Some(prev) = winner {
                    return Err(Error::Internal {
                        check: "majority tie impossibility",
                        detail: format!(
                            "coordinate {i}: values {prev} and {v} both beat tau={tau}"
                        ),
                    });
                }
                winner = Some(v as u32);
            }
        }
        match winner {
            Some(v) => codes.push(v),
            None => {
                unknown.insert(i);
                codes.push(q + 1);
            }
        }
    }
    Ok(MajorityState {
        tallies,
        word: Word::from_codes(q, codes)?,
        unknown,
    })
}

/// One run of a majority-based decoder: the majority stage, the
/// thresholds it used, and the final outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct MajorityDecodeRun {
    pub outcome: DecodeOutcome,
    pub majority: MajorityState,
    pub thresholds: Thresholds,
}

/// Completions of a word over its Unknown coordinates, in
/// lexicographic order of the filled values.
struct Completions {
    codes: Vec<u32>,
    slots: Vec<usize>,
    q: u32,
    done: bool,
}

impl Completions {
    fn new(word: &Word) -> Self {
        let slots: Vec<usize> = (0..word.len()).filter(|&i| word.is_unknown(i)).collect();
        let mut codes = word.codes().to_vec();
        for &i in &slots {
            codes[i] = 0;
        }
        Completions {
            codes,
            slots,
            q: word.q(),
            done: false,
        }
    }
}

impl Iterator for Completions {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.done {
            return None;
        }
        let word = Word::from_codes_unchecked(self.q, self.codes.clone());
        let mut pos = self.slots.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            let slot = self.slots[pos];
            if self.codes[slot] + 1 < self.q {
                self.codes[slot] += 1;
                break;
            }
            self.codes[slot] = 0;
        }
        Some(word)
    }
}

fn check_majority_batch(
    batch: &OutputBatch,
    code: &Code,
    p: &ReconParams,
    required: &BigUint,
) -> Result<()> {
    if batch.q != p.q {
        return Err(Error::AlphabetMismatch {
            left: p.q,
            right: batch.q,
        });
    }
    if batch.n as u64 != p.n {
        return Err(Error::LengthMismatch {
            left: p.n as usize,
            right: batch.n,
        });
    }
    if batch.model != (ErrorModel::Substitution { t: p.t() }) {
        return Err(Error::InvalidParameter {
            reason: format!(
                "majority decoding expects a substitution batch with t={}, got {} {:?}",
                p.t(),
                batch.model.kind_name(),
                batch.model.budgets()
            ),
        });
    }
    if batch.multiset {
        return Err(Error::InvalidParameter {
            reason: "majority decoding needs set semantics".to_string(),
        });
    }
    if BigUint::from(batch.outputs.len()) != *required {
        return Err(Error::InvalidParameter {
            reason: format!(
                "majority decoding needs exactly {required} outputs, got {}",
                batch.outputs.len()
            ),
        });
    }
    if code.q() != p.q || code.n() as u64 != p.n {
        return Err(Error::InvalidParameter {
            reason: "code and parameters disagree on (n, q)".to_string(),
        });
    }
    if !code.is_error_correcting(p.e) {
        return Err(Error::InvalidParameter {
            reason: format!(
                "code of minimum distance {:?} is not {}-error-correcting",
                code.min_distance(),
                p.e
            ),
        });
    }
    Ok(())
}

fn check_completion_cap(q: u32, unknowns: usize, bound: String, caps: &Caps) -> Result<()> {
    let completions = power(q as u64, unknowns as u64);
    if completions > BigUint::from(caps.completions) {
        return Err(Error::CapExceeded {
            what: "majority completions (the Unknown count stays below its regime bound only for large n)",
            needed: format!("{completions} completions, {unknowns} Unknowns against {bound}"),
            cap: caps.completions,
        });
    }
    Ok(())
}

/// Unique decoding from exactly N_{t,e} distinct substitution outputs,
/// q >= 3: majority vote, then completion search through the
/// e-bounded code decoder, returning the first codeword whose ball
/// covers every output.
pub fn algorithm1_decode(
    batch: &OutputBatch,
    code: &Code,
    p: &ReconParams,
    caps: &Caps,
) -> Result<MajorityDecodeRun> {
    if p.q < 3 {
        return Err(Error::InvalidParameter {
            reason: format!("unique majority decoding needs q >= 3, got q={}", p.q),
        });
    }
    if p.e < 1 {
        return Err(Error::InvalidParameter {
            reason: "unique majority decoding needs e >= 1".to_string(),
        });
    }
    let thresholds = bounds::majority_thresholds(p)?;
    check_majority_batch(batch, code, p, &thresholds.channels)?;
    let majority = majority_word(batch, &thresholds.tau)?;
    check_completion_cap(
        p.q,
        majority.unknown.len(),
        format!("t(e+2) = {}", p.t() * (p.e + 2)),
        caps,
    )?;
    let model = batch.model;
    for u in Completions::new(&majority.word) {
        for candidate in code_decoder(code, &u, p.e, 1)? {
            let mut covers = true;
            for y in &batch.outputs {
                if !within_ball(&candidate, y, &model)? {
                    covers = false;
                    break;
                }
            }
            if covers {
                return Ok(MajorityDecodeRun {
                    outcome: DecodeOutcome::from_candidates(vec![candidate]),
                    majority,
                    thresholds,
                });
            }
        }
    }
    Err(Error::DecodeFailed {
        reason: "no completion decodes to a codeword covering every output".to_string(),
    })
}

/// Binary list decoding from exactly N_{t,e,a} distinct outputs:
/// majority against the offset threshold, then every completion is
/// list-decoded to radius e+a and the covering codewords are
/// collected.
pub fn algorithm2_list_decode(
    batch: &OutputBatch,
    code: &Code,
    p: &ReconParams,
    caps: &Caps,
) -> Result<MajorityDecodeRun> {
    if p.q != 2 {
        return Err(Error::InvalidParameter {
            reason: format!("list majority decoding is binary, got q={}", p.q),
        });
    }
    if p.e < 1 {
        return Err(Error::InvalidParameter {
            reason: "list majority decoding needs e >= 1".to_string(),
        });
    }
    let thresholds = bounds::list_thresholds(p)?;
    check_majority_batch(batch, code, p, &thresholds.channels)?;
    let majority = majority_word(batch, &thresholds.tau)?;
    let eps = &p.eps;
    check_completion_cap(
        p.q,
        majority.unknown.len(),
        format!(
            "t(e+a+1)(1+eps)/eps = {}",
            BigRational::from(BigInt::from(p.t() * (p.e + p.a + 1)))
                * (BigRational::from(BigInt::from(1)) + eps)
                / eps
        ),
        caps,
    )?;
    let model = batch.model;
    let mut found = BTreeSet::new();
    for u in Completions::new(&majority.word) {
        for candidate in code_decoder(code, &u, p.e + p.a, p.list_ball_cap)? {
            if found.contains(&candidate) {
                continue;
            }
            let mut covers = true;
            for y in &batch.outputs {
                if !within_ball(&candidate, y, &model)? {
                    covers = false;
                    break;
                }
            }
            if covers {
                found.insert(candidate);
            }
        }
    }
    Ok(MajorityDecodeRun {
        outcome: DecodeOutcome::from_candidates(found.into_iter().collect()),
        majority,
        thresholds,
    })
}

/// Reconstruction from erasure outputs by merging the seen symbols.
/// Coordinates seen nowhere stay free: over the full space they range
/// over the alphabet, against a code they just drop out of the filter.
pub fn erasure_resolve(
    batch: &OutputBatch,
    code: CodeRef<'_>,
    caps: &Caps,
) -> Result<DecodeOutcome> {
    let t_e = match batch.model {
        ErrorModel::Erasure { t_e } => t_e,
        _ => {
            return Err(Error::InvalidParameter {
                reason: format!("erasure resolution got a {} batch", batch.model.kind_name()),
            })
        }
    };
    if batch.outputs.is_empty() {
        return Err(Error::InvalidParameter {
            reason: "erasure resolution needs at least one output".to_string(),
        });
    }
    let n = batch.n;
    let q = batch.q;
    let mut pinned: Vec<Option<u32>> = vec![None; n];
    for y in &batch.outputs {
        if y.len() != n {
            return Err(Error::LengthMismatch {
                left: n,
                right: y.len(),
            });
        }
        if y.erased_count() as u64 > t_e {
            return Err(Error::InvalidParameter {
                reason: format!("output {y} erases more than {t_e} coordinates"),
            });
        }
        for (i, &c) in y.codes().iter().enumerate() {
            if c >= q {
                continue;
            }
            match pinned[i] {
                None => pinned[i] = Some(c),
                Some(prev) if prev != c => {
                    return Err(Error::ConflictingSymbols { coordinate: i + 1 })
                }
                Some(_) => {}
            }
        }
    }
    match code {
        CodeRef::Explicit(c) => {
            if c.q() != q || c.n() != n {
                return Err(Error::InvalidParameter {
                    reason: "code and batch disagree on (n, q)".to_string(),
                });
            }
            let candidates: Vec<Word> = c
                .words()
                .iter()
                .filter(|w| {
                    w.codes()
                        .iter()
                        .zip(&pinned)
                        .all(|(&c, p)| p.is_none_or(|v| v == c))
                })
                .cloned()
                .collect();
            Ok(DecodeOutcome::from_candidates(candidates))
        }
        CodeRef::FullSpace => {
            let free: Vec<usize> = (0..n).filter(|&i| pinned[i].is_none()).collect();
            let volume = power(q as u64, free.len() as u64);
            if volume > BigUint::from(caps.completions) {
                return Err(Error::CapExceeded {
                    what: "erasure completions",
                    needed: volume.to_string(),
                    cap: caps.completions,
                });
            }
            let codes: Vec<u32> = pinned.iter().map(|p| p.unwrap_or(q + 1)).collect();
            let seed = Word::from_codes(q, codes)?;
            Ok(DecodeOutcome::from_candidates(
                Completions::new(&seed).collect(),
            ))
        }
    }
}

/// Exact recovery from two insertion outputs when they collide right:
/// dropping from the second output every symbol value the first never
/// carries leaves exactly the transmitted word, provided n symbols
/// survive.
pub fn insertion_pair_decode(y1: &Word, y2: &Word, n: usize) -> Result<DecodeOutcome> {
    if y1.q() != y2.q() {
        return Err(Error::AlphabetMismatch {
            left: y1.q(),
            right: y2.q(),
        });
    }
    if !y1.is_plain() || !y2.is_plain() {
        return Err(Error::ErasedSymbol {
            context: "insertion pair decoding",
        });
    }
    if y1.len() < n || y2.len() < n {
        return Err(Error::LengthMismatch {
            left: n,
            right: y1.len().min(y2.len()),
        });
    }
    let alphabet_of_first: BTreeSet<u32> = y1.codes().iter().copied().collect();
    let survivors: Vec<u32> = y2
        .codes()
        .iter()
        .copied()
        .filter(|c| alphabet_of_first.contains(c))
        .collect();
    if survivors.len() == n {
        Ok(DecodeOutcome::from_candidates(vec![
            Word::from_codes_unchecked(y2.q(), survivors),
        ]))
    } else {
        Ok(DecodeOutcome {
            candidates: Vec::new(),
            status: DecodeStatus::Failure(format!(
                "{} symbols of the second output survive, need {n}",
                survivors.len()
            )),
        })
    }
}
