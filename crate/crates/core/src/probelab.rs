//! Probability experiments over the random channels: exact and
//! Monte Carlo unique-recovery rates, the closed-form small cases, the
//! large-alphabet insertion sweep, and the alphabet-invariance check
//! for deletions and erasures.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::balls::{self, BallSpec, CodeRef};
use crate::bounds::{binomial, power};
use crate::channels::{self, trial_rng, ChannelSampler, ErrorModel};
use crate::decoders::{self, DecodeStatus};
use crate::error::{Error, Result};
use crate::exec::{self, ExecMode};
use crate::word::Word;
use crate::Caps;

/// A recovery-probability figure. Exact results carry the rational
/// and a zero interval; sampled results carry the 95% normal
/// half-width.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub ci95_halfwidth: f64,
    pub exact: Option<BigRational>,
}

impl ProbEstimate {
    fn from_exact(value: BigRational) -> Self {
        ProbEstimate {
            p_hat: value.to_f64().expect("probability fits f64"),
            trials: 0,
            ci95_halfwidth: 0.0,
            exact: Some(value),
        }
    }

    fn from_counts(successes: u64, trials: u64) -> Self {
        let p = successes as f64 / trials as f64;
        ProbEstimate {
            p_hat: p,
            trials,
            ci95_halfwidth: 1.96 * (p * (1.0 - p) / trials as f64).sqrt(),
            exact: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimateMode {
    /// Weighted sweep over every distinct output set; needs
    /// volume^N within the batch cap.
    Exact,
    /// Seeded sampling, one RNG stream per trial.
    MonteCarlo,
}

/// Number of surjections from n_outputs labeled draws onto k named
/// words.
fn surjections(n_outputs: u64, k: u64) -> BigUint {
    let mut acc = BigInt::ZERO;
    for j in 0..=k {
        let term =
            BigInt::from(binomial(k as i64, j as i64)) * BigInt::from(power(k - j, n_outputs));
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc.to_biguint().expect("surjection count is nonnegative")
}

/// P(T(Y) = {x}) after N independent uniform reads of x.
///
/// Exact mode groups the V^N equally likely output tuples by their
/// distinct-word support D and weighs each support by the number of
/// tuples realizing it, which is the surjection count; recovery
/// depends on the tuple only through D.
#[allow(clippy::too_many_arguments)]
pub fn unique_recovery_prob(
    x: &Word,
    model: &ErrorModel,
    n_outputs: u64,
    trials: u64,
    seed: u64,
    mode: EstimateMode,
    code: CodeRef<'_>,
    caps: &Caps,
    exec_mode: ExecMode,
) -> Result<ProbEstimate> {
    if n_outputs == 0 {
        return Err(Error::InvalidParameter {
            reason: "recovery needs at least one output".to_string(),
        });
    }
    match mode {
        EstimateMode::Exact => {
            let spec = BallSpec::new(x.clone(), *model)?;
            let ball = balls::enumerate_ball(&spec, caps)?;
            let volume = ball.len() as u64;
            let tuples = power(volume, n_outputs);
            if tuples > BigUint::from(caps.batches) {
                return Err(Error::CapExceeded {
                    what: "exact recovery tuple count",
                    needed: tuples.to_string(),
                    cap: caps.batches,
                });
            }
            let mut favorable = BigUint::ZERO;
            let mut accounted = BigUint::ZERO;
            for k in 1..=n_outputs.min(volume) {
                let weight = surjections(n_outputs, k);
                accounted += binomial(volume as i64, k as i64) * &weight;
                for batch in channels::adversarial_batches(x, model, k, caps)? {
                    let out = balls::reconstruction_list(&batch, code, caps)?;
                    if out.candidates.len() == 1 && out.candidates[0] == *x {
                        favorable += &weight;
                    }
                }
            }
            if accounted != tuples {
                return Err(Error::Internal {
                    check: "surjection weights partition the tuple space",
                    detail: format!("weights sum to {accounted}, tuple count is {tuples}"),
                });
            }
            let exact = BigRational::new(BigInt::from(favorable), BigInt::from(tuples));
            Ok(ProbEstimate::from_exact(exact))
        }
        EstimateMode::MonteCarlo => {
            if trials == 0 {
                return Err(Error::InvalidParameter {
                    reason: "Monte Carlo needs at least one trial".to_string(),
                });
            }
            let sampler = ChannelSampler::new(x, model, caps)?;
            let outcomes = exec::map_indices(exec_mode, trials as usize, |i| {
                let mut rng = trial_rng(seed, i as u64);
                let batch = sampler.sample_batch(n_outputs, true, &mut rng)?;
                let out = balls::reconstruction_list(&batch, code, caps)?;
                Ok(out.candidates.len() == 1 && out.candidates[0] == *x)
            });
            let mut successes = 0u64;
            for outcome in outcomes {
                let hit: bool = outcome?;
                successes += u64::from(hit);
            }
            Ok(ProbEstimate::from_counts(successes, trials))
        }
    }
}

/// The single-substitution two-read case in closed form:
/// 6 (q-1)^3 / (2q-1)^3, increasing toward 3/4.
pub fn worked_example_p_prime(q: u32) -> Result<BigRational> {
    if q < 2 {
        return Err(Error::InvalidParameter {
            reason: format!("alphabet size {q} below 2"),
        });
    }
    let numer = BigInt::from(6) * BigInt::from(q - 1).pow(3);
    let denom = BigInt::from(2 * q as u64 - 1).pow(3);
    Ok(BigRational::new(numer, denom))
}

/// P(every one of N weight-t substitution patterns touches the first
/// coordinate) = (C(n-1, t-1) / C(n, t))^N; any such batch leaves the
/// coordinate unrecoverable.
pub fn substitution_pin_prob(n: u64, t: u64, n_outputs: u64) -> Result<BigRational> {
    if t < 1 || t > n {
        return Err(Error::InvalidParameter {
            reason: format!("need 1 <= t <= n, got t={t} n={n}"),
        });
    }
    if n_outputs == 0 {
        return Err(Error::InvalidParameter {
            reason: "pin probability needs at least one output".to_string(),
        });
    }
    let hit = BigInt::from(binomial(n as i64 - 1, t as i64 - 1));
    let all = BigInt::from(binomial(n as i64, t as i64));
    let exp = u32::try_from(n_outputs).map_err(|_| Error::InvalidParameter {
        reason: format!("output count {n_outputs} too large to exponentiate"),
    })?;
    Ok(BigRational::new(hit.pow(exp), all.pow(exp)))
}

/// One alphabet size of the insertion sweep.
#[derive(Clone, Debug)]
pub struct QsweepPoint {
    pub q: u32,
    /// P(T(Y) is the singleton {x}).
    pub unique: ProbEstimate,
    /// First two outputs alone pin x via the symbol filter.
    pub pair: ProbEstimate,
    /// Unique-but-wrong pair decodes; provably zero.
    pub pair_wrong: u64,
    /// (1 - (n + 2t - 1)/q)^t, the per-q guarantee on the pair rate.
    pub lower_bound: BigRational,
}

/// Unique-recovery and pair-decode rates for t insertions at growing
/// alphabet sizes, with x the word 0 1 ... n-1. Both rates approach 1
/// as q grows.
#[allow(clippy::too_many_arguments)]
pub fn insertion_qsweep(
    n: u64,
    t: u64,
    n_outputs: u64,
    q_list: &[u32],
    trials: u64,
    seed: u64,
    caps: &Caps,
    exec_mode: ExecMode,
) -> Result<Vec<QsweepPoint>> {
    if n_outputs < 2 {
        return Err(Error::InvalidParameter {
            reason: "the pair decoder needs at least two outputs".to_string(),
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter {
            reason: "the sweep needs at least one trial".to_string(),
        });
    }
    let mut points = Vec::with_capacity(q_list.len());
    for &q in q_list {
        if (q as u64) < n {
            return Err(Error::InvalidParameter {
                reason: format!("sweep word needs q >= n, got q={q} n={n}"),
            });
        }
        let x = Word::from_codes(q, (0..n as u32).collect())?;
        let model = ErrorModel::Insertion { t_i: t };
        let sampler = ChannelSampler::new(&x, &model, caps)?;
        let outcomes = exec::map_indices(exec_mode, trials as usize, |i| {
            let mut rng = trial_rng(seed, i as u64);
            let batch = sampler.sample_batch(n_outputs, true, &mut rng)?;
            let unique = {
                let out = balls::reconstruction_list(&batch, CodeRef::FullSpace, caps)?;
                out.candidates.len() == 1 && out.candidates[0] == x
            };
            let pair =
                decoders::insertion_pair_decode(&batch.outputs[0], &batch.outputs[1], n as usize)?;
            let (pair_ok, pair_wrong) = match pair.status {
                DecodeStatus::Unique => {
                    if pair.candidates[0] == x {
                        (true, false)
                    } else {
                        (false, true)
                    }
                }
                _ => (false, false),
            };
            Ok((unique, pair_ok, pair_wrong))
        });
        let mut unique_hits = 0u64;
        let mut pair_hits = 0u64;
        let mut pair_wrong = 0u64;
        for outcome in outcomes {
            let (u, p, w) = outcome?;
            unique_hits += u64::from(u);
            pair_hits += u64::from(p);
            pair_wrong += u64::from(w);
        }
        let margin = BigInt::from(q as i64) - BigInt::from((n + 2 * t - 1) as i64);
        let lower_bound = if margin.is_positive() {
            BigRational::new(margin, BigInt::from(q)).pow(t as i32)
        } else {
            BigRational::zero()
        };
        points.push(QsweepPoint {
            q,
            unique: ProbEstimate::from_counts(unique_hits, trials),
            pair: ProbEstimate::from_counts(pair_hits, trials),
            pair_wrong,
            lower_bound,
        });
    }
    Ok(points)
}

/// The alphabet-invariance report: deletion and erasure behavior
/// depends only on which coordinates of x share symbols, so growing q
/// changes nothing.
#[derive(Clone, Debug)]
pub struct QInvarianceReport {
    /// The two balls match word for word under the symbol view.
    pub balls_identical: bool,
    /// Every seeded trial succeeded or failed identically at both
    /// alphabet sizes.
    pub agreement: bool,
    pub base: ProbEstimate,
    pub lifted: ProbEstimate,
}

/// Runs the same seeded unique-recovery trials over q = x.q() and over
/// q_prime, comparing balls and per-trial outcomes exactly.
#[allow(clippy::too_many_arguments)]
pub fn deletion_q_invariance(
    x: &Word,
    q_prime: u32,
    model: &ErrorModel,
    n_outputs: u64,
    trials: u64,
    seed: u64,
    caps: &Caps,
    exec_mode: ExecMode,
) -> Result<QInvarianceReport> {
    match model {
        ErrorModel::Deletion { .. } | ErrorModel::Erasure { .. } => {}
        other => {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "alphabet invariance covers deletion and erasure, got {}",
                    other.kind_name()
                ),
            })
        }
    }
    if q_prime <= x.q() {
        return Err(Error::InvalidParameter {
            reason: format!("need q' above q={}, got q'={}", x.q(), q_prime),
        });
    }
    if trials == 0 {
        return Err(Error::InvalidParameter {
            reason: "the comparison needs at least one trial".to_string(),
        });
    }
    let lifted = Word::from_codes(q_prime, x.codes().to_vec())?;

    let base_ball = balls::enumerate_ball(&BallSpec::new(x.clone(), *model)?, caps)?;
    let lifted_ball = balls::enumerate_ball(&BallSpec::new(lifted.clone(), *model)?, caps)?;
    let balls_identical = base_ball.len() == lifted_ball.len()
        && base_ball
            .iter()
            .zip(&lifted_ball)
            .all(|(a, b)| a.same_symbols(b));

    let run = |center: &Word| -> Result<Vec<bool>> {
        let sampler = ChannelSampler::new(center, model, caps)?;
        let outcomes = exec::map_indices(exec_mode, trials as usize, |i| {
            let mut rng = trial_rng(seed, i as u64);
            let batch = sampler.sample_batch(n_outputs, true, &mut rng)?;
            let out = balls::reconstruction_list(&batch, CodeRef::FullSpace, caps)?;
            Ok(out.candidates.len() == 1 && out.candidates[0] == *center)
        });
        outcomes.into_iter().collect()
    };
    let base_hits = run(x)?;
    let lifted_hits = run(&lifted)?;
    let agreement = base_hits == lifted_hits;
    let count = |hits: &[bool]| hits.iter().filter(|&&h| h).count() as u64;
    Ok(QInvarianceReport {
        balls_identical,
        agreement,
        base: ProbEstimate::from_counts(count(&base_hits), trials),
        lifted: ProbEstimate::from_counts(count(&lifted_hits), trials),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(q: u32, text: &str) -> Word {
        Word::parse(q, text).unwrap()
    }

    fn rational(num: i64, den: i64) -> BigRational {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn exact_recovery(q: u32, n: usize, t: u64, n_outputs: u64) -> BigRational {
        let x = Word::zero(q, n);
        unique_recovery_prob(
            &x,
            &ErrorModel::Substitution { t },
            n_outputs,
            0,
            0,
            EstimateMode::Exact,
            CodeRef::FullSpace,
            &Caps::default(),
            ExecMode::Sequential,
        )
        .unwrap()
        .exact
        .unwrap()
    }

    #[test]
    fn exact_two_read_single_error_cases() {
        assert_eq!(exact_recovery(2, 2, 1, 3), rational(2, 9));
        assert_eq!(exact_recovery(3, 2, 1, 3), rational(48, 125));
    }

    #[test]
    fn closed_form_matches_the_exact_sweep() {
        for q in 2..=3u32 {
            // Two informative reads out of three; N = 3 because the
            // tuple count conditions on nothing.
            assert_eq!(
                worked_example_p_prime(q).unwrap(),
                exact_recovery(q, 2, 1, 3)
            );
        }
    }

    #[test]
    fn closed_form_climbs_toward_three_quarters() {
        let limit = rational(3, 4);
        let mut last = BigRational::zero();
        for q in [2u32, 3, 5, 17, 1000] {
            let p = worked_example_p_prime(q).unwrap();
            assert!(p > last && p < limit);
            last = p;
        }
        assert!(worked_example_p_prime(1_000_000).unwrap() > rational(74, 100));
    }

    #[test]
    fn monte_carlo_tracks_the_exact_value() {
        let x = Word::zero(2, 2);
        let est = unique_recovery_prob(
            &x,
            &ErrorModel::Substitution { t: 1 },
            3,
            20_000,
            5,
            EstimateMode::MonteCarlo,
            CodeRef::FullSpace,
            &Caps::default(),
            ExecMode::Parallel,
        )
        .unwrap();
        let exact = rational(2, 9).to_f64().unwrap();
        assert!(
            (est.p_hat - exact).abs() < 4.0 * est.ci95_halfwidth,
            "p_hat {} vs exact {exact}",
            est.p_hat
        );
    }

    #[test]
    fn trial_outcomes_ignore_the_worker_count() {
        let x = w(3, "0120");
        let run = |mode| {
            unique_recovery_prob(
                &x,
                &ErrorModel::Deletion { t_d: 1 },
                2,
                500,
                9,
                EstimateMode::MonteCarlo,
                CodeRef::FullSpace,
                &Caps::default(),
                mode,
            )
            .unwrap()
        };
        assert_eq!(run(ExecMode::Sequential), run(ExecMode::Parallel));
    }

    #[test]
    fn pin_probability_examples() {
        assert_eq!(substitution_pin_prob(2, 1, 1).unwrap(), rational(1, 2));
        assert_eq!(substitution_pin_prob(2, 1, 3).unwrap(), rational(1, 8));
        assert_eq!(substitution_pin_prob(4, 2, 2).unwrap(), rational(1, 4));
        assert_eq!(substitution_pin_prob(3, 3, 5).unwrap(), rational(1, 1));
        assert!(substitution_pin_prob(3, 4, 1).is_err());
    }

    #[test]
    fn small_insertion_sweep_behaves() {
        let points = insertion_qsweep(
            3,
            1,
            4,
            &[8, 32],
            400,
            13,
            &Caps::default(),
            ExecMode::Parallel,
        )
        .unwrap();
        assert_eq!(points.len(), 2);
        for p in &points {
            assert_eq!(p.pair_wrong, 0);
            let floor = p.lower_bound.to_f64().unwrap();
            assert!(
                p.pair.p_hat >= floor - 3.0 * p.pair.ci95_halfwidth,
                "q={}: pair {} under floor {floor}",
                p.q,
                p.pair.p_hat
            );
        }
        assert!(points[1].unique.p_hat >= points[0].unique.p_hat - 0.1);
    }

    #[test]
    fn deletion_reads_are_alphabet_invariant() {
        let x = w(3, "012");
        let report = deletion_q_invariance(
            &x,
            7,
            &ErrorModel::Deletion { t_d: 1 },
            2,
            300,
            21,
            &Caps::default(),
            ExecMode::Parallel,
        )
        .unwrap();
        assert!(report.balls_identical);
        assert!(report.agreement);
        assert_eq!(report.base.p_hat, report.lifted.p_hat);
    }

    #[test]
    fn erasure_reads_are_alphabet_invariant() {
        let x = w(4, "0123");
        let report = deletion_q_invariance(
            &x,
            9,
            &ErrorModel::Erasure { t_e: 2 },
            3,
            300,
            22,
            &Caps::default(),
            ExecMode::Sequential,
        )
        .unwrap();
        assert!(report.balls_identical);
        assert!(report.agreement);
    }

    #[test]
    fn surjection_weights_are_checked_internally() {
        // k = 2, N = 3: 2^3 - 2 ordered onto both words.
        assert_eq!(surjections(3, 2), BigUint::from(6u32));
        assert_eq!(surjections(3, 3), BigUint::from(6u32));
        assert_eq!(surjections(2, 3), BigUint::ZERO);
    }
}
