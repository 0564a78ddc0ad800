//! Error-ball enumeration, membership tests, ball intersections, and
//! the brute-force reconstruction list.
//!
//! Coordinate balls (substitution, erasure, both) are generated
//! directly from their defining patterns, so no deduplication is
//! needed; deletion and insertion balls are sets of distinct words and
//! are deduplicated. Membership questions go through `within_ball`,
//! which never materializes anything; the large-alphabet experiments
//! depend on that.

use std::collections::BTreeSet;

use num_bigint::BigUint;

use crate::bounds::{binomial, mixed_volume, power};
use crate::channels::{ErrorModel, OutputBatch};
use crate::codebook::Code;
use crate::decoders::DecodeOutcome;
use crate::error::{Error, Result};
use crate::word::{self, Word};
use crate::Caps;

/// An error ball: a center word plus the error model whose reachable
/// set it is.
#[derive(Clone, Debug, PartialEq)]
pub struct BallSpec {
    center: Word,
    model: ErrorModel,
}

impl BallSpec {
    pub fn new(center: Word, model: ErrorModel) -> Result<Self> {
        if !center.is_plain() {
            return Err(if center.has_unknown() {
                Error::UnknownSymbol {
                    context: "ball center",
                }
            } else {
                Error::ErasedSymbol {
                    context: "ball center",
                }
            });
        }
        if let ErrorModel::Deletion { t_d } = model {
            if t_d > center.len() as u64 {
                return Err(Error::InvalidParameter {
                    reason: format!("deletion budget {t_d} exceeds word length {}", center.len()),
                });
            }
        }
        Ok(BallSpec { center, model })
    }

    pub fn center(&self) -> &Word {
        &self.center
    }

    pub fn model(&self) -> &ErrorModel {
        &self.model
    }
}

/// Enumerates the ball as a sorted, duplicate-free word list.
pub fn enumerate_ball(spec: &BallSpec, caps: &Caps) -> Result<Vec<Word>> {
    let center = &spec.center;
    let n = center.len();
    let q = center.q();
    let mut words = match spec.model {
        ErrorModel::Substitution { t } => {
            check_coordinate_cap(n, q, 0, t, caps)?;
            coordinate_ball(center, 0, t)
        }
        ErrorModel::Erasure { t_e } => {
            check_coordinate_cap(n, q, t_e, 0, caps)?;
            coordinate_ball(center, t_e, 0)
        }
        ErrorModel::ErasureSubstitution { t_e, t_s } => {
            check_coordinate_cap(n, q, t_e, t_s, caps)?;
            coordinate_ball(center, t_e, t_s)
        }
        ErrorModel::Deletion { t_d } => deletion_ball(center, t_d, caps)?,
        ErrorModel::Insertion { t_i } => {
            let mut out = Vec::new();
            for k in 0..=t_i {
                supersequences(center, n + k as usize, caps, &mut out)?;
            }
            out
        }
    };
    words.sort();
    debug_assert!(words.windows(2).all(|w| w[0] != w[1]));
    Ok(words)
}

fn check_coordinate_cap(n: usize, q: u32, t_e: u64, t_s: u64, caps: &Caps) -> Result<()> {
    let volume = mixed_volume(n as u64, q, t_e, t_s);
    if volume > BigUint::from(caps.ball) {
        return Err(Error::CapExceeded {
            what: "ball volume",
            needed: volume.to_string(),
            cap: caps.ball,
        });
    }
    Ok(())
}

/// Words reachable from a plain center by at most t_e erasures and t_s
/// substitutions, one per (positions, values) pattern. The background
/// position order makes every pattern appear exactly once.
fn coordinate_ball(center: &Word, t_e: u64, t_s: u64) -> Vec<Word> {
    fn rec(
        center: &[u32],
        q: u32,
        scratch: &mut Vec<u32>,
        start: usize,
        e_left: u64,
        s_left: u64,
        out: &mut Vec<Word>,
    ) {
        out.push(Word::from_codes_unchecked(q, scratch.clone()));
        for i in start..center.len() {
            if e_left > 0 {
                scratch[i] = q;
                rec(center, q, scratch, i + 1, e_left - 1, s_left, out);
            }
            if s_left > 0 {
                for v in 0..q {
                    if v != center[i] {
                        scratch[i] = v;
                        rec(center, q, scratch, i + 1, e_left, s_left - 1, out);
                    }
                }
            }
            scratch[i] = center[i];
        }
    }
    let mut out = Vec::new();
    let mut scratch = center.codes().to_vec();
    rec(
        center.codes(),
        center.q(),
        &mut scratch,
        0,
        t_e,
        t_s,
        &mut out,
    );
    out
}

fn deletion_ball(center: &Word, t_d: u64, caps: &Caps) -> Result<Vec<Word>> {
    let n = center.len();
    // Enumeration visits one pattern per position subset; bound the
    // work, not just the (smaller) set of distinct results.
    let mut patterns = BigUint::ZERO;
    for k in 0..=t_d {
        patterns += binomial(n as i64, k as i64);
    }
    if patterns > BigUint::from(caps.ball) {
        return Err(Error::CapExceeded {
            what: "deletion patterns",
            needed: patterns.to_string(),
            cap: caps.ball,
        });
    }
    let mut set = BTreeSet::new();
    let mut keep: Vec<bool> = vec![true; n];
    fn rec(center: &Word, keep: &mut Vec<bool>, start: usize, left: u64, set: &mut BTreeSet<Word>) {
        let codes: Vec<u32> = (0..center.len())
            .filter(|&i| keep[i])
            .map(|i| center.codes()[i])
            .collect();
        set.insert(Word::from_codes_unchecked(center.q(), codes));
        if left == 0 {
            return;
        }
        for i in start..center.len() {
            keep[i] = false;
            rec(center, keep, i + 1, left - 1, set);
            keep[i] = true;
        }
    }
    rec(center, &mut keep, 0, t_d, &mut set);
    Ok(set.into_iter().collect())
}

/// Appends every length-`target` supersequence of `center`, each
/// exactly once: a word is built symbol by symbol while greedily
/// matching the center, and it is a supersequence iff the greedy match
/// completes.
fn supersequences(center: &Word, target: usize, caps: &Caps, out: &mut Vec<Word>) -> Result<()> {
    let x = center.codes();
    let q = center.q();
    let n = x.len();
    let budget = target - n;

    fn rec(
        x: &[u32],
        q: u32,
        budget: usize,
        buf: &mut Vec<u32>,
        matched: usize,
        cap: u64,
        out: &mut Vec<Word>,
    ) -> Result<()> {
        if buf.len() - matched == budget {
            // Insertions exhausted: the rest must copy the center.
            let len = buf.len();
            buf.extend_from_slice(&x[matched..]);
            if out.len() as u64 >= cap {
                return Err(Error::CapExceeded {
                    what: "insertion ball volume",
                    needed: format!("more than {cap}"),
                    cap,
                });
            }
            out.push(Word::from_codes_unchecked(q, buf.clone()));
            buf.truncate(len);
            return Ok(());
        }
        for s in 0..q {
            buf.push(s);
            let m = if matched < x.len() && s == x[matched] {
                matched + 1
            } else {
                matched
            };
            rec(x, q, budget, buf, m, cap, out)?;
            buf.pop();
        }
        Ok(())
    }

    let mut buf = Vec::with_capacity(target);
    rec(x, q, budget, &mut buf, 0, caps.ball, out)
}

/// Whether `y` is reachable from `center` under the model, by direct
/// structural tests; nothing is enumerated.
pub fn within_ball(center: &Word, y: &Word, model: &ErrorModel) -> Result<bool> {
    if center.q() != y.q() {
        return Err(Error::AlphabetMismatch {
            left: center.q(),
            right: y.q(),
        });
    }
    if center.has_unknown() || y.has_unknown() {
        return Err(Error::UnknownSymbol {
            context: "ball membership",
        });
    }
    if !center.is_plain() {
        return Err(Error::ErasedSymbol {
            context: "ball center",
        });
    }
    let n = center.len();
    match *model {
        ErrorModel::Substitution { t } => {
            if !y.is_plain() {
                return Ok(false);
            }
            Ok(word::hamming_distance(center, y)? <= t as usize)
        }
        ErrorModel::Erasure { t_e } => {
            if y.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: y.len(),
                });
            }
            if y.erased_count() as u64 > t_e {
                return Ok(false);
            }
            Ok(word::erasure_aware_distance(center, y)? == 0)
        }
        ErrorModel::ErasureSubstitution { t_e, t_s } => {
            if y.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: y.len(),
                });
            }
            Ok(y.erased_count() as u64 <= t_e
                && word::erasure_aware_distance(center, y)? <= t_s as usize)
        }
        ErrorModel::Deletion { t_d } => {
            if !y.is_plain() || y.len() > n || n - y.len() > t_d as usize {
                return Ok(false);
            }
            word::is_subsequence(y, center)
        }
        ErrorModel::Insertion { t_i } => {
            if !y.is_plain() || y.len() < n || y.len() - n > t_i as usize {
                return Ok(false);
            }
            word::is_subsequence(center, y)
        }
    }
}

/// Exact size of the intersection of same-model balls: the first ball
/// is enumerated (balls of one model share their volume, or nearly so)
/// and the rest are applied as membership filters.
pub fn intersection_size(specs: &[BallSpec], caps: &Caps) -> Result<BigUint> {
    let first = specs.first().ok_or(Error::InvalidParameter {
        reason: "intersection of zero balls".to_string(),
    })?;
    for spec in &specs[1..] {
        if spec.model != first.model {
            return Err(Error::InvalidParameter {
                reason: "intersected balls must share model and budgets".to_string(),
            });
        }
        if spec.center.q() != first.center.q() {
            return Err(Error::AlphabetMismatch {
                left: first.center.q(),
                right: spec.center.q(),
            });
        }
    }
    let base = enumerate_ball(first, caps)?;
    let mut count: u64 = 0;
    'words: for w in &base {
        for spec in &specs[1..] {
            if !within_ball(&spec.center, w, &spec.model)? {
                continue 'words;
            }
        }
        count += 1;
    }
    Ok(BigUint::from(count))
}

/// The candidate space a reconstruction runs against.
#[derive(Clone, Copy, Debug)]
pub enum CodeRef<'a> {
    /// Every word of Z_q^n is admissible.
    FullSpace,
    /// Only the given code's words are admissible.
    Explicit(&'a Code),
}

/// T(Y): every admissible word that can reach all outputs within the
/// model's budget. Brute force; the oracle the decoders are judged
/// against.
pub fn reconstruction_list(
    batch: &OutputBatch,
    code: CodeRef<'_>,
    caps: &Caps,
) -> Result<DecodeOutcome> {
    let model = &batch.model;
    let n = batch.n;
    let q = batch.q;
    if batch.outputs.is_empty() {
        return Err(Error::InvalidParameter {
            reason: "reconstruction needs at least one output".to_string(),
        });
    }
    let (lo, hi) = model.output_length_range(n);
    for y in &batch.outputs {
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
    }

    let pool: Vec<Word> = match code {
        CodeRef::Explicit(c) => {
            if c.q() != q {
                return Err(Error::AlphabetMismatch {
                    left: q,
                    right: c.q(),
                });
            }
            if c.n() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: c.n(),
                });
            }
            c.words().to_vec()
        }
        CodeRef::FullSpace => full_space_pool(batch, caps)?,
    };

    let mut candidates = Vec::new();
    'pool: for cand in pool {
        for y in &batch.outputs {
            if !within_ball(&cand, y, model)? {
                continue 'pool;
            }
        }
        candidates.push(cand);
    }
    Ok(DecodeOutcome::from_candidates(candidates))
}

/// A superset of T(Y) over the full space, derived from one output:
/// every candidate within budget of all outputs is in particular
/// within reach of the pivot output.
fn full_space_pool(batch: &OutputBatch, caps: &Caps) -> Result<Vec<Word>> {
    let n = batch.n;
    let q = batch.q;
    match batch.model {
        ErrorModel::Substitution { t } => {
            check_coordinate_cap(n, q, 0, t, caps)?;
            Ok(coordinate_ball(&batch.outputs[0], 0, t))
        }
        ErrorModel::Erasure { .. } => {
            // The least-erased output pins every plain coordinate.
            let pivot = batch
                .outputs
                .iter()
                .min_by_key(|y| y.erased_count())
                .expect("outputs nonempty");
            let free: Vec<usize> = (0..n).filter(|&i| pivot.is_erased(i)).collect();
            let volume = power(q as u64, free.len() as u64);
            if volume > BigUint::from(caps.ball) {
                return Err(Error::CapExceeded {
                    what: "erasure completions",
                    needed: volume.to_string(),
                    cap: caps.ball,
                });
            }
            let mut out = Vec::new();
            let mut scratch = pivot.codes().to_vec();
            fn rec(
                q: u32,
                free: &[usize],
                scratch: &mut Vec<u32>,
                depth: usize,
                out: &mut Vec<Word>,
            ) {
                if depth == free.len() {
                    out.push(Word::from_codes_unchecked(q, scratch.clone()));
                    return;
                }
                for v in 0..q {
                    scratch[free[depth]] = v;
                    rec(q, free, scratch, depth + 1, out);
                }
            }
            rec(q, &free, &mut scratch, 0, &mut out);
            Ok(out)
        }
        ErrorModel::ErasureSubstitution { t_e, t_s } => {
            // Filling the pivot's erasures with zeros costs at most
            // one substitution each, so B_{t_e+t_s} around the filled
            // word covers every candidate.
            let filled: Vec<u32> = batch.outputs[0]
                .codes()
                .iter()
                .map(|&c| if c >= q { 0 } else { c })
                .collect();
            check_coordinate_cap(n, q, 0, t_e + t_s, caps)?;
            Ok(coordinate_ball(
                &Word::from_codes_unchecked(q, filled),
                0,
                t_e + t_s,
            ))
        }
        ErrorModel::Deletion { .. } => {
            let pivot = batch
                .outputs
                .iter()
                .min_by_key(|y| y.len())
                .expect("outputs nonempty");
            let mut out = Vec::new();
            supersequences(pivot, n, caps, &mut out)?;
            Ok(out)
        }
        ErrorModel::Insertion { .. } => {
            let pivot = batch
                .outputs
                .iter()
                .min_by_key(|y| y.len())
                .expect("outputs nonempty");
            let k = pivot.len() - n;
            let mut set = BTreeSet::new();
            let mut keep = vec![true; pivot.len()];
            fn rec(
                pivot: &Word,
                keep: &mut Vec<bool>,
                start: usize,
                left: usize,
                set: &mut BTreeSet<Word>,
            ) {
                if left == 0 {
                    let codes: Vec<u32> = (0..pivot.len())
                        .filter(|&i| keep[i])
                        .map(|i| pivot.codes()[i])
                        .collect();
                    set.insert(Word::from_codes_unchecked(pivot.q(), codes));
                    return;
                }
                // Enough positions must remain to drop `left` more.
                for i in start..=(pivot.len() - left) {
                    keep[i] = false;
                    rec(pivot, keep, i + 1, left - 1, set);
                    keep[i] = true;
                }
            }
            rec(pivot, &mut keep, 0, k, &mut set);
            Ok(set.into_iter().collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::SamplingRegime;

    fn w(q: u32, text: &str) -> Word {
        Word::parse(q, text).unwrap()
    }

    fn ball(q: u32, center: &str, model: ErrorModel) -> Vec<Word> {
        let spec = BallSpec::new(w(q, center), model).unwrap();
        enumerate_ball(&spec, &Caps::default()).unwrap()
    }

    fn shown(words: &[Word]) -> Vec<String> {
        words.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn substitution_ball_radius_one() {
        let b = ball(2, "000", ErrorModel::Substitution { t: 1 });
        assert_eq!(shown(&b), ["000", "001", "010", "100"]);
    }

    #[test]
    fn deletion_ball_radius_one() {
        let b = ball(5, "014", ErrorModel::Deletion { t_d: 1 });
        assert_eq!(shown(&b), ["01", "014", "04", "14"]);
    }

    #[test]
    fn deletion_ball_deduplicates() {
        let b = ball(2, "00", ErrorModel::Deletion { t_d: 1 });
        assert_eq!(shown(&b), ["0", "00"]);
        let b2 = ball(2, "0000", ErrorModel::Deletion { t_d: 3 });
        assert_eq!(shown(&b2), ["0", "00", "000", "0000"]);
    }

    #[test]
    fn erasure_ball_examples() {
        let b = ball(5, "014", ErrorModel::Erasure { t_e: 1 });
        assert_eq!(shown(&b), ["014", "01*", "0*4", "*14"]);
    }

    #[test]
    fn erasure_ball_volume_is_alphabet_free() {
        for q in [2, 3, 7] {
            for t in 0..=3u64 {
                let b = ball(q, "000", ErrorModel::Erasure { t_e: t });
                assert_eq!(BigUint::from(b.len()), crate::bounds::ball_volume(3, 2, t));
            }
        }
    }

    #[test]
    fn coordinate_ball_sizes_match_formulas() {
        for q in 2..=4u32 {
            for n in 0..=3usize {
                let center = Word::zero(q, n);
                for t_e in 0..=2u64 {
                    for t_s in 0..=2u64 {
                        let spec = BallSpec::new(
                            center.clone(),
                            ErrorModel::ErasureSubstitution { t_e, t_s },
                        )
                        .unwrap();
                        let b = enumerate_ball(&spec, &Caps::default()).unwrap();
                        assert_eq!(
                            BigUint::from(b.len()),
                            mixed_volume(n as u64, q, t_e, t_s),
                            "q={q} n={n} t_e={t_e} t_s={t_s}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn substitution_ball_is_center_invariant() {
        let caps = Caps::default();
        for q in 2..=3u32 {
            let reference = ball(q, "000", ErrorModel::Substitution { t: 2 }).len();
            for k in 0..q.pow(3) {
                let codes = vec![k % q, (k / q) % q, (k / q / q) % q];
                let spec = BallSpec::new(
                    Word::from_codes(q, codes).unwrap(),
                    ErrorModel::Substitution { t: 2 },
                )
                .unwrap();
                assert_eq!(enumerate_ball(&spec, &caps).unwrap().len(), reference);
            }
        }
    }

    #[test]
    fn insertion_ball_holds_every_one_step_supersequence() {
        let b = ball(5, "014", ErrorModel::Insertion { t_i: 1 });
        assert!(b.contains(&w(5, "0104")));
        assert!(b.contains(&w(5, "3014")));
        assert!(b.contains(&w(5, "014")));
        // 1 + sum_{j<=1} C(4,j) (q-1)^j distinct supersequences.
        assert_eq!(b.len(), 18);
    }

    #[test]
    fn insertion_ball_counts_distinct_words_only() {
        // Inserting 0 anywhere in 00 gives the single word 000.
        let b = ball(2, "00", ErrorModel::Insertion { t_i: 1 });
        assert_eq!(shown(&b), ["00", "000", "001", "010", "100"]);
    }

    #[test]
    fn ball_matches_membership_test() {
        let caps = Caps::default();
        let models = [
            ErrorModel::Substitution { t: 1 },
            ErrorModel::Erasure { t_e: 2 },
            ErrorModel::ErasureSubstitution { t_e: 1, t_s: 1 },
            ErrorModel::Deletion { t_d: 2 },
            ErrorModel::Insertion { t_i: 1 },
        ];
        let center = w(3, "012");
        for model in models {
            let spec = BallSpec::new(center.clone(), model).unwrap();
            let b = enumerate_ball(&spec, &caps).unwrap();
            for y in &b {
                assert!(within_ball(&center, y, &model).unwrap(), "{model:?} {y}");
            }
            // A word outside the ball must fail the test too.
            let outside = w(3, "222");
            assert!(!within_ball(&center, &outside, &model).unwrap());
            // Coordinate models reject a length mismatch outright;
            // the variable-length models treat it as a miss.
            let long = w(3, "2222222");
            match model {
                ErrorModel::Deletion { .. } | ErrorModel::Insertion { .. } => {
                    assert!(!within_ball(&center, &long, &model).unwrap());
                }
                _ => {
                    assert!(matches!(
                        within_ball(&center, &long, &model),
                        Err(Error::LengthMismatch { .. })
                    ));
                }
            }
        }
    }

    #[test]
    fn erase_then_substitute_reaches_the_same_set() {
        // Alternative order: substitute on the already-erased word,
        // allowing substitutions only on plain coordinates.
        let center = w(3, "0120");
        let (t_e, t_s) = (1u64, 1u64);
        let direct: BTreeSet<Word> = coordinate_ball(&center, t_e, t_s).into_iter().collect();
        let mut other = BTreeSet::new();
        let spec = BallSpec::new(center.clone(), ErrorModel::Erasure { t_e }).unwrap();
        for erased in enumerate_ball(&spec, &Caps::default()).unwrap() {
            // Substitute within plain coordinates of the erased word.
            let n = erased.len();
            let q = erased.q();
            let mut scratch = erased.codes().to_vec();
            fn rec(
                base: &[u32],
                q: u32,
                scratch: &mut Vec<u32>,
                start: usize,
                left: u64,
                out: &mut BTreeSet<Word>,
            ) {
                out.insert(Word::from_codes_unchecked(q, scratch.clone()));
                if left == 0 {
                    return;
                }
                for i in start..base.len() {
                    if base[i] >= q {
                        continue;
                    }
                    for v in 0..q {
                        if v != base[i] {
                            scratch[i] = v;
                            rec(base, q, scratch, i + 1, left - 1, out);
                        }
                    }
                    scratch[i] = base[i];
                }
            }
            rec(erased.codes(), q, &mut scratch, 0, t_s, &mut other);
            let _ = n;
        }
        assert_eq!(direct, other);
    }

    #[test]
    fn intersection_examples() {
        let caps = Caps::default();
        let sub = |t| ErrorModel::Substitution { t };
        let pair = |a: &str, b: &str, q: u32, t: u64| {
            let s1 = BallSpec::new(w(q, a), sub(t)).unwrap();
            let s2 = BallSpec::new(w(q, b), sub(t)).unwrap();
            intersection_size(&[s1, s2], &caps).unwrap()
        };
        assert_eq!(pair("00", "00", 2, 1), BigUint::from(3u32));
        assert_eq!(pair("000", "110", 2, 1), BigUint::from(2u32));
        assert_eq!(pair("00", "01", 3, 1), BigUint::from(3u32));
    }

    #[test]
    fn intersection_rejects_mixed_models() {
        let caps = Caps::default();
        let s1 = BallSpec::new(w(2, "00"), ErrorModel::Substitution { t: 1 }).unwrap();
        let s2 = BallSpec::new(w(2, "00"), ErrorModel::Erasure { t_e: 1 }).unwrap();
        assert!(intersection_size(&[s1, s2], &caps).is_err());
    }

    fn batch(q: u32, n: usize, model: ErrorModel, outputs: &[&str]) -> OutputBatch {
        OutputBatch::new(
            q,
            n,
            model,
            false,
            outputs.iter().map(|s| w(q, s)).collect(),
            SamplingRegime::Constructed,
        )
        .unwrap()
    }

    #[test]
    fn worked_reconstruction_example() {
        let caps = Caps::default();
        let two = batch(2, 3, ErrorModel::Substitution { t: 1 }, &["100", "010"]);
        let out = reconstruction_list(&two, CodeRef::FullSpace, &caps).unwrap();
        assert_eq!(shown(&out.candidates), ["000", "110"]);
        let three = batch(
            2,
            3,
            ErrorModel::Substitution { t: 1 },
            &["100", "010", "001"],
        );
        let out3 = reconstruction_list(&three, CodeRef::FullSpace, &caps).unwrap();
        assert_eq!(shown(&out3.candidates), ["000"]);
    }

    #[test]
    fn zero_budget_reconstruction_is_the_output_itself() {
        let caps = Caps::default();
        let b = batch(3, 2, ErrorModel::Substitution { t: 0 }, &["21"]);
        let out = reconstruction_list(&b, CodeRef::FullSpace, &caps).unwrap();
        assert_eq!(shown(&out.candidates), ["21"]);
    }

    #[test]
    fn deletion_reconstruction_recovers_center() {
        let caps = Caps::default();
        let b = batch(5, 3, ErrorModel::Deletion { t_d: 1 }, &["14", "04"]);
        let out = reconstruction_list(&b, CodeRef::FullSpace, &caps).unwrap();
        assert!(out.candidates.contains(&w(5, "014")));
        for c in &out.candidates {
            for y in &b.outputs {
                assert!(within_ball(c, y, &b.model).unwrap());
            }
        }
    }

    #[test]
    fn insertion_reconstruction_recovers_center() {
        let caps = Caps::default();
        let b = batch(5, 3, ErrorModel::Insertion { t_i: 1 }, &["0104", "3014"]);
        let out = reconstruction_list(&b, CodeRef::FullSpace, &caps).unwrap();
        assert_eq!(shown(&out.candidates), ["014"]);
    }

    #[test]
    fn erasure_reconstruction_completes_unseen_coordinates() {
        let caps = Caps::default();
        let b = batch(3, 3, ErrorModel::Erasure { t_e: 2 }, &["**2"]);
        let out = reconstruction_list(&b, CodeRef::FullSpace, &caps).unwrap();
        assert_eq!(out.candidates.len(), 9);
        let b2 = batch(5, 3, ErrorModel::Erasure { t_e: 1 }, &["*14", "0*4"]);
        let out2 = reconstruction_list(&b2, CodeRef::FullSpace, &caps).unwrap();
        assert_eq!(shown(&out2.candidates), ["014"]);
    }

    #[test]
    fn explicit_code_restricts_candidates() {
        let caps = Caps::default();
        let code = Code::new(2, 3, vec![w(2, "000"), w(2, "111")]).unwrap();
        let b = batch(2, 3, ErrorModel::Substitution { t: 1 }, &["100"]);
        let out = reconstruction_list(&b, CodeRef::Explicit(&code), &caps).unwrap();
        assert_eq!(shown(&out.candidates), ["000"]);
    }

    #[test]
    fn ball_cap_is_enforced() {
        let caps = Caps {
            ball: 10,
            ..Caps::default()
        };
        let spec = BallSpec::new(Word::zero(4, 6), ErrorModel::Substitution { t: 3 }).unwrap();
        assert!(matches!(
            enumerate_ball(&spec, &caps),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn ball_spec_validation() {
        assert!(BallSpec::new(w(3, "0*1"), ErrorModel::Substitution { t: 1 }).is_err());
        assert!(BallSpec::new(w(3, "001"), ErrorModel::Deletion { t_d: 4 }).is_err());
    }
}
