//! Probabilistic and adversarial channels: N reads of one transmitted
//! word under a shared error model.
//!
//! Sampling is exact. Coordinate models (substitution, erasure, both)
//! draw a uniform pattern index and unrank it, so they are uniform
//! over the ball at any alphabet size without materializing anything.
//! Deletion and insertion balls have no product structure; they are
//! enumerated and index-sampled while they fit the cap, and above the
//! cap the sampler falls back to uniform error patterns, which for
//! those models is not uniform over words. The batch records which
//! regime produced it.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::balls::{self, BallSpec};
use crate::bounds::{ball_volume, binomial, power};
use crate::error::{Error, Result};
use crate::word::Word;
use crate::Caps;

/// Retries per output slot before set-mode sampling gives up.
const SET_RETRY_CAP: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorModel {
    Substitution { t: u64 },
    Erasure { t_e: u64 },
    ErasureSubstitution { t_e: u64, t_s: u64 },
    Deletion { t_d: u64 },
    Insertion { t_i: u64 },
}

impl ErrorModel {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ErrorModel::Substitution { .. } => "substitution",
            ErrorModel::Erasure { .. } => "erasure",
            ErrorModel::ErasureSubstitution { .. } => "erasure-substitution",
            ErrorModel::Deletion { .. } => "deletion",
            ErrorModel::Insertion { .. } => "insertion",
        }
    }

    pub fn budgets(&self) -> Vec<u64> {
        match *self {
            ErrorModel::Substitution { t } => vec![t],
            ErrorModel::Erasure { t_e } => vec![t_e],
            ErrorModel::ErasureSubstitution { t_e, t_s } => vec![t_e, t_s],
            ErrorModel::Deletion { t_d } => vec![t_d],
            ErrorModel::Insertion { t_i } => vec![t_i],
        }
    }

    pub fn from_parts(kind: &str, budgets: &[u64]) -> Result<ErrorModel> {
        let arity_error = || Error::InvalidParameter {
            reason: format!("model {kind} given {} budgets", budgets.len()),
        };
        match kind {
            "substitution" => match budgets {
                [t] => Ok(ErrorModel::Substitution { t: *t }),
                _ => Err(arity_error()),
            },
            "erasure" => match budgets {
                [t_e] => Ok(ErrorModel::Erasure { t_e: *t_e }),
                _ => Err(arity_error()),
            },
            "erasure-substitution" => match budgets {
                [t_e, t_s] => Ok(ErrorModel::ErasureSubstitution {
                    t_e: *t_e,
                    t_s: *t_s,
                }),
                _ => Err(arity_error()),
            },
            "deletion" => match budgets {
                [t_d] => Ok(ErrorModel::Deletion { t_d: *t_d }),
                _ => Err(arity_error()),
            },
            "insertion" => match budgets {
                [t_i] => Ok(ErrorModel::Insertion { t_i: *t_i }),
                _ => Err(arity_error()),
            },
            other => Err(Error::InvalidParameter {
                reason: format!("unknown error model {other:?}"),
            }),
        }
    }

    /// Admissible output lengths for a length-n input.
    pub fn output_length_range(&self, n: usize) -> (usize, usize) {
        match *self {
            ErrorModel::Deletion { t_d } => (n.saturating_sub(t_d as usize), n),
            ErrorModel::Insertion { t_i } => (n, n + t_i as usize),
            _ => (n, n),
        }
    }

    /// Whether outputs may carry erasure markers.
    fn allows_erasures(&self) -> bool {
        matches!(
            self,
            ErrorModel::Erasure { .. } | ErrorModel::ErasureSubstitution { .. }
        )
    }

    pub fn to_json(&self) -> Value {
        json!({ "kind": self.kind_name(), "budgets": self.budgets() })
    }

    pub fn from_json(v: &Value) -> Result<ErrorModel> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or(Error::ParseInput {
                reason: "model.kind missing".to_string(),
            })?;
        let budgets: Vec<u64> = v
            .get("budgets")
            .and_then(Value::as_array)
            .ok_or(Error::ParseInput {
                reason: "model.budgets missing".to_string(),
            })?
            .iter()
            .map(|b| {
                b.as_u64().ok_or(Error::ParseInput {
                    reason: "model budget is not an unsigned integer".to_string(),
                })
            })
            .collect::<Result<_>>()?;
        ErrorModel::from_parts(kind, &budgets)
    }
}

/// How a batch's outputs came to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingRegime {
    /// Independent draws, uniform over the error ball.
    UniformWords,
    /// Independent draws, uniform over error patterns; for deletion
    /// and insertion this is not uniform over words.
    UniformPatterns,
    /// Built deterministically, not sampled.
    Constructed,
}

impl SamplingRegime {
    pub fn name(&self) -> &'static str {
        match self {
            SamplingRegime::UniformWords => "uniform-words",
            SamplingRegime::UniformPatterns => "uniform-patterns",
            SamplingRegime::Constructed => "constructed",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "uniform-words" => Ok(SamplingRegime::UniformWords),
            "uniform-patterns" => Ok(SamplingRegime::UniformPatterns),
            "constructed" => Ok(SamplingRegime::Constructed),
            other => Err(Error::ParseInput {
                reason: format!("unknown sampling regime {other:?}"),
            }),
        }
    }
}

/// N channel outputs of one (unrecorded) transmitted word.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputBatch {
    pub q: u32,
    pub n: usize,
    pub model: ErrorModel,
    pub multiset: bool,
    pub outputs: Vec<Word>,
    pub regime: SamplingRegime,
}

impl OutputBatch {
    pub fn new(
        q: u32,
        n: usize,
        model: ErrorModel,
        multiset: bool,
        outputs: Vec<Word>,
        regime: SamplingRegime,
    ) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidParameter {
                reason: format!("alphabet size {q} below 2"),
            });
        }
        let (lo, hi) = model.output_length_range(n);
        for y in &outputs {
            if y.q() != q {
                return Err(Error::AlphabetMismatch {
                    left: q,
                    right: y.q(),
                });
            }
            if y.len() < lo || y.len() > hi {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: y.len(),
                });
            }
            if y.has_unknown() {
                return Err(Error::UnknownSymbol {
                    context: "channel output",
                });
            }
            if !model.allows_erasures() && !y.is_plain() {
                return Err(Error::ErasedSymbol {
                    context: "output of an erasure-free model",
                });
            }
            let erasure_budget = match model {
                ErrorModel::Erasure { t_e } => Some(t_e),
                ErrorModel::ErasureSubstitution { t_e, .. } => Some(t_e),
                _ => None,
            };
            if let Some(t_e) = erasure_budget {
                if y.erased_count() as u64 > t_e {
                    return Err(Error::InvalidParameter {
                        reason: format!("output {y} erases more than {t_e} coordinates"),
                    });
                }
            }
        }
        if !multiset {
            let mut seen = BTreeSet::new();
            for y in &outputs {
                if !seen.insert(y.clone()) {
                    return Err(Error::InvalidParameter {
                        reason: format!("duplicate output {y} in a set-semantics batch"),
                    });
                }
            }
        }
        Ok(OutputBatch {
            q,
            n,
            model,
            multiset,
            outputs,
            regime,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "q": self.q,
            "n": self.n,
            "model": self.model.to_json(),
            "multiset": self.multiset,
            "regime": self.regime.name(),
            "outputs": self.outputs.iter().map(|y| y.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field_u64 = |name: &str| {
            v.get(name)
                .and_then(Value::as_u64)
                .ok_or(Error::ParseInput {
                    reason: format!("batch field {name} missing or not an integer"),
                })
        };
        let q = u32::try_from(field_u64("q")?).map_err(|_| Error::ParseInput {
            reason: "alphabet size does not fit u32".to_string(),
        })?;
        let n = field_u64("n")? as usize;
        let model = ErrorModel::from_json(v.get("model").ok_or(Error::ParseInput {
            reason: "batch field model missing".to_string(),
        })?)?;
        let multiset = v.get("multiset").and_then(Value::as_bool).unwrap_or(false);
        let regime = match v.get("regime").and_then(Value::as_str) {
            Some(name) => SamplingRegime::from_name(name)?,
            None => SamplingRegime::UniformWords,
        };
        let outputs = v
            .get("outputs")
            .and_then(Value::as_array)
            .ok_or(Error::ParseInput {
                reason: "batch field outputs missing".to_string(),
            })?
            .iter()
            .map(|s| {
                let text = s.as_str().ok_or(Error::ParseInput {
                    reason: "output is not a string".to_string(),
                })?;
                Word::parse(q, text)
            })
            .collect::<Result<Vec<_>>>()?;
        OutputBatch::new(q, n, model, multiset, outputs, regime)
    }

    pub fn to_json_string(&self) -> String {
        self.to_json().to_string()
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::ParseInput {
            reason: format!("batch is not valid JSON: {e}"),
        })?;
        Self::from_json(&v)
    }
}

/// The per-trial generator: one fixed seed, one stream per trial, so
/// trial i is reproducible regardless of how trials are scheduled.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform draw from [0, bound) by rejection on the top bit block.
pub fn uniform_biguint(rng: &mut impl RngCore, bound: &BigUint) -> BigUint {
    debug_assert!(*bound > BigUint::ZERO);
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let top_mask: u8 = if bits.is_multiple_of(8) {
        0xff
    } else {
        (1u8 << (bits % 8)) - 1
    };
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        buf[0] &= top_mask;
        let value = BigUint::from_bytes_be(&buf);
        if value < *bound {
            return value;
        }
    }
}

enum Sampler {
    Enumerated { ball: Vec<Word> },
    Coordinate { t_e: u64, t_s: u64, volume: BigUint },
    DeletionPatterns { total: BigUint },
    InsertionPatterns { total: BigUint },
}

impl Sampler {
    fn build(spec: &BallSpec, caps: &Caps) -> Result<Sampler> {
        let n = spec.center().len() as u64;
        let q = spec.center().q();
        match *spec.model() {
            ErrorModel::Substitution { t } => Ok(Sampler::Coordinate {
                t_e: 0,
                t_s: t,
                volume: ball_volume(n, q, t),
            }),
            ErrorModel::Erasure { t_e } => Ok(Sampler::Coordinate {
                t_e,
                t_s: 0,
                volume: crate::bounds::mixed_volume(n, q, t_e, 0),
            }),
            ErrorModel::ErasureSubstitution { t_e, t_s } => Ok(Sampler::Coordinate {
                t_e,
                t_s,
                volume: crate::bounds::mixed_volume(n, q, t_e, t_s),
            }),
            ErrorModel::Deletion { t_d } => match balls::enumerate_ball(spec, caps) {
                Ok(ball) => Ok(Sampler::Enumerated { ball }),
                Err(Error::CapExceeded { .. }) => {
                    let mut total = BigUint::ZERO;
                    for k in 0..=t_d {
                        total += binomial(n as i64, k as i64);
                    }
                    Ok(Sampler::DeletionPatterns { total })
                }
                Err(e) => Err(e),
            },
            ErrorModel::Insertion { t_i } => match balls::enumerate_ball(spec, caps) {
                Ok(ball) => Ok(Sampler::Enumerated { ball }),
                Err(Error::CapExceeded { .. }) => {
                    let mut total = BigUint::ZERO;
                    for k in 0..=t_i {
                        total += binomial((n + k) as i64, k as i64) * power(q as u64, k);
                    }
                    Ok(Sampler::InsertionPatterns { total })
                }
                Err(e) => Err(e),
            },
        }
    }

    fn regime(&self) -> SamplingRegime {
        match self {
            Sampler::Enumerated { .. } | Sampler::Coordinate { .. } => SamplingRegime::UniformWords,
            _ => SamplingRegime::UniformPatterns,
        }
    }

    /// Exact ball volume where known; pattern samplers do not know it.
    fn volume(&self) -> Option<BigUint> {
        match self {
            Sampler::Enumerated { ball } => Some(BigUint::from(ball.len())),
            Sampler::Coordinate { volume, .. } => Some(volume.clone()),
            _ => None,
        }
    }

    fn draw(&self, center: &Word, rng: &mut impl RngCore) -> Word {
        match self {
            Sampler::Enumerated { ball } => {
                let idx = uniform_biguint(rng, &BigUint::from(ball.len()))
                    .to_usize()
                    .expect("index below ball length");
                ball[idx].clone()
            }
            Sampler::Coordinate { t_e, t_s, volume } => {
                let r = uniform_biguint(rng, volume);
                unrank_coordinate(center, *t_e, *t_s, r)
            }
            Sampler::DeletionPatterns { total } => {
                let r = uniform_biguint(rng, total);
                unrank_deletion(center, r)
            }
            Sampler::InsertionPatterns { total } => {
                let r = uniform_biguint(rng, total);
                unrank_insertion(center, r)
            }
        }
    }
}

/// Lexicographic unranking of a k-subset of {0, ..., n-1}.
fn unrank_subset(n: usize, k: usize, mut rank: BigUint) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut left = k;
    let mut p = 0usize;
    while left > 0 {
        let block = binomial(n as i64 - p as i64 - 1, left as i64 - 1);
        if rank < block {
            out.push(p);
            left -= 1;
        } else {
            rank -= block;
        }
        p += 1;
    }
    out
}

/// Base-`base` digits of `rank`, most significant first.
fn unrank_digits(mut rank: BigUint, base: u32, len: usize) -> Vec<u32> {
    let mut digits = vec![0u32; len];
    if base <= 1 {
        return digits;
    }
    let b = BigUint::from(base);
    for d in digits.iter_mut().rev() {
        *d = (&rank % &b).to_u32().expect("digit below base");
        rank /= &b;
    }
    digits
}

/// Bijection from [0, V_q(n, t_e, t_s)) onto the erasure-substitution
/// ball, blocked by erasure count, then erased subset, then
/// substitution count, subset, and values.
fn unrank_coordinate(center: &Word, t_e: u64, t_s: u64, mut r: BigUint) -> Word {
    let n = center.len();
    let q = center.q();
    let mut i = 0u64;
    let vol_sub = loop {
        debug_assert!(i <= t_e);
        let vol = ball_volume(n as u64 - i, q, t_s);
        let block = binomial(n as i64, i as i64) * &vol;
        if r < block {
            break vol;
        }
        r -= block;
        i += 1;
    };
    let erank = &r / &vol_sub;
    let mut rest = &r % &vol_sub;
    let erased = unrank_subset(n, i as usize, erank);

    let m = n - i as usize;
    let mut j = 0u64;
    loop {
        debug_assert!(j <= t_s);
        let block = binomial(m as i64, j as i64) * power(q as u64 - 1, j);
        if rest < block {
            break;
        }
        rest -= block;
        j += 1;
    }
    let pw = power(q as u64 - 1, j);
    let srank = &rest / &pw;
    let vrank = &rest % &pw;
    let sub_rel = unrank_subset(m, j as usize, srank);
    let digits = unrank_digits(vrank, q - 1, j as usize);

    let mut codes = center.codes().to_vec();
    let mut erased_mask = vec![false; n];
    for &p in &erased {
        codes[p] = q;
        erased_mask[p] = true;
    }
    let remaining: Vec<usize> = (0..n).filter(|&p| !erased_mask[p]).collect();
    for (rel, digit) in sub_rel.iter().zip(digits) {
        let p = remaining[*rel];
        let orig = center.codes()[p];
        codes[p] = if digit < orig { digit } else { digit + 1 };
    }
    Word::from_codes_unchecked(q, codes)
}

/// Uniform deletion pattern: a position subset of size at most t_d.
fn unrank_deletion(center: &Word, mut r: BigUint) -> Word {
    let n = center.len();
    let mut k = 0usize;
    loop {
        let block = binomial(n as i64, k as i64);
        if r < block {
            break;
        }
        r -= block;
        k += 1;
    }
    let dropped = unrank_subset(n, k, r);
    let mut mask = vec![true; n];
    for &p in &dropped {
        mask[p] = false;
    }
    let codes: Vec<u32> = (0..n)
        .filter(|&p| mask[p])
        .map(|p| center.codes()[p])
        .collect();
    Word::from_codes_unchecked(center.q(), codes)
}

/// Uniform insertion pattern: inserted positions in the final word
/// plus their symbols.
fn unrank_insertion(center: &Word, mut r: BigUint) -> Word {
    let n = center.len();
    let q = center.q();
    let mut k = 0usize;
    loop {
        let block = binomial((n + k) as i64, k as i64) * power(q as u64, k as u64);
        if r < block {
            break;
        }
        r -= block;
        k += 1;
    }
    let pw = power(q as u64, k as u64);
    let srank = &r / &pw;
    let vrank = &r % &pw;
    let positions = unrank_subset(n + k, k, srank);
    let values = unrank_digits(vrank, q, k);
    let mut codes = Vec::with_capacity(n + k);
    let mut next_insert = 0usize;
    let mut next_center = 0usize;
    for p in 0..n + k {
        if next_insert < k && positions[next_insert] == p {
            codes.push(values[next_insert]);
            next_insert += 1;
        } else {
            codes.push(center.codes()[next_center]);
            next_center += 1;
        }
    }
    Word::from_codes_unchecked(q, codes)
}

/// A channel primed for one center word: the ball survey happens once,
/// after which batches are cheap. The experiment loops draw thousands
/// of batches from one sampler.
pub struct ChannelSampler {
    center: Word,
    model: ErrorModel,
    inner: Sampler,
}

impl ChannelSampler {
    pub fn new(x: &Word, model: &ErrorModel, caps: &Caps) -> Result<Self> {
        let spec = BallSpec::new(x.clone(), *model)?;
        let inner = Sampler::build(&spec, caps)?;
        Ok(ChannelSampler {
            center: x.clone(),
            model: *model,
            inner,
        })
    }

    pub fn regime(&self) -> SamplingRegime {
        self.inner.regime()
    }

    /// Exact ball volume where known; pattern regimes do not know it.
    pub fn volume(&self) -> Option<BigUint> {
        self.inner.volume()
    }

    /// N independent reads of the center. Set semantics rejects
    /// repeats, so it needs N within the ball volume; pattern samplers
    /// cannot check that up front and instead give up after enough
    /// stalled retries.
    pub fn sample_batch(
        &self,
        n_outputs: u64,
        multiset: bool,
        rng: &mut impl RngCore,
    ) -> Result<OutputBatch> {
        if n_outputs == 0 {
            return Err(Error::InvalidParameter {
                reason: "a batch needs at least one output".to_string(),
            });
        }
        if !multiset {
            if let Some(volume) = self.volume() {
                if BigUint::from(n_outputs) > volume {
                    return Err(Error::NotEnoughWords {
                        volume: volume.to_string(),
                        requested: n_outputs,
                    });
                }
            }
        }
        let mut outputs = Vec::with_capacity(n_outputs as usize);
        let mut seen = BTreeSet::new();
        for _ in 0..n_outputs {
            let mut retries = 0u64;
            let word = loop {
                let w = self.inner.draw(&self.center, rng);
                if multiset || seen.insert(w.clone()) {
                    break w;
                }
                retries += 1;
                if retries >= SET_RETRY_CAP {
                    return Err(Error::SamplingStalled { retries });
                }
            };
            outputs.push(word);
        }
        OutputBatch::new(
            self.center.q(),
            self.center.len(),
            self.model,
            multiset,
            outputs,
            self.regime(),
        )
    }
}

pub fn transmit(
    x: &Word,
    model: &ErrorModel,
    n_outputs: u64,
    multiset: bool,
    seed: u64,
    caps: &Caps,
) -> Result<OutputBatch> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    transmit_with_rng(x, model, n_outputs, multiset, &mut rng, caps)
}

pub fn transmit_with_rng(
    x: &Word,
    model: &ErrorModel,
    n_outputs: u64,
    multiset: bool,
    rng: &mut impl RngCore,
    caps: &Caps,
) -> Result<OutputBatch> {
    ChannelSampler::new(x, model, caps)?.sample_batch(n_outputs, multiset, rng)
}

/// Every N-subset of the error ball around x, as set-semantics
/// batches, in lexicographic ball order. The worst case over these is
/// the adversarial channel.
pub fn adversarial_batches(
    x: &Word,
    model: &ErrorModel,
    n_outputs: u64,
    caps: &Caps,
) -> Result<AdversarialBatches> {
    let spec = BallSpec::new(x.clone(), *model)?;
    let ball = balls::enumerate_ball(&spec, caps)?;
    let volume = BigUint::from(ball.len());
    if n_outputs == 0 || BigUint::from(n_outputs) > volume {
        return Err(Error::NotEnoughWords {
            volume: volume.to_string(),
            requested: n_outputs,
        });
    }
    let count = binomial(ball.len() as i64, n_outputs as i64);
    if count > BigUint::from(caps.batches) {
        return Err(Error::CapExceeded {
            what: "adversarial batch count",
            needed: count.to_string(),
            cap: caps.batches,
        });
    }
    Ok(AdversarialBatches {
        q: x.q(),
        n: x.len(),
        model: *model,
        ball,
        indices: (0..n_outputs as usize).collect(),
        done: false,
    })
}

pub struct AdversarialBatches {
    q: u32,
    n: usize,
    model: ErrorModel,
    ball: Vec<Word>,
    indices: Vec<usize>,
    done: bool,
}

impl Iterator for AdversarialBatches {
    type Item = OutputBatch;

    fn next(&mut self) -> Option<OutputBatch> {
        if self.done {
            return None;
        }
        let outputs: Vec<Word> = self.indices.iter().map(|&i| self.ball[i].clone()).collect();
        let batch = OutputBatch {
            q: self.q,
            n: self.n,
            model: self.model,
            multiset: false,
            outputs,
            regime: SamplingRegime::Constructed,
        };
        // Advance the combination odometer.
        let k = self.indices.len();
        let v = self.ball.len();
        let mut pos = k;
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            if self.indices[pos] < v - (k - pos) {
                self.indices[pos] += 1;
                for later in pos + 1..k {
                    self.indices[later] = self.indices[later - 1] + 1;
                }
                break;
            }
        }
        Some(batch)
    }
}
