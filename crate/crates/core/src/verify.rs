//! Named verification suites. Each suite recomputes one family of
//! claims from scratch, by pair enumeration, clique search, or seeded
//! decoding trials, and reports one line per check so a failure points
//! at the exact claim that broke.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use crate::balls::{enumerate_ball, reconstruction_list, within_ball, BallSpec, CodeRef};
use crate::bounds::binary_list_caps;
use crate::bounds::{
    channels_unique, constant_list_bounds, era_sub_channels, erasure_list_size, list_thresholds,
    majority_thresholds, ReconParams, SpaceKind,
};
use crate::channels::{
    transmit_with_rng, trial_rng, uniform_biguint, ErrorModel, OutputBatch, SamplingRegime,
};
use crate::codebook::{adversarial_code, constant_weight_code, Code};
use crate::decoders::{algorithm1_decode, algorithm2_list_decode, erasure_resolve, DecodeStatus};
use crate::error::{Error, Result};
use crate::exec::{map_indices, ExecMode};
use crate::probelab::{
    deletion_q_invariance, substitution_pin_prob, unique_recovery_prob, worked_example_p_prime,
    EstimateMode,
};
use crate::word::{dist_codes, Word};
use crate::Caps;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub label: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "passed": self.passed(),
            "checks": self
                .checks
                .iter()
                .map(|c| json!({ "label": c.label, "pass": c.pass, "detail": c.detail }))
                .collect::<Vec<_>>(),
        })
    }
}

/// Grid and trial knobs shared by every suite. The defaults finish in
/// seconds; enlarging max_n or max_q deepens the enumeration grids.
#[derive(Clone, Debug)]
pub struct SuiteOpts {
    pub max_n: u64,
    pub max_q: u32,
    pub trials: u64,
    pub seed: u64,
    pub exec: ExecMode,
    pub caps: Caps,
}

impl Default for SuiteOpts {
    fn default() -> Self {
        SuiteOpts {
            max_n: 4,
            max_q: 3,
            trials: 200,
            seed: 0,
            exec: ExecMode::default(),
            caps: Caps::default(),
        }
    }
}

pub fn suite_names() -> &'static [&'static str] {
    &[
        "bounds-oracle",
        "monotonicity",
        "erasure-list",
        "era-sub-exact",
        "constructions",
        "algorithm1",
        "algorithm2",
        "prob-exact",
        "q-invariance",
    ]
}

pub fn run_suite(name: &str, opts: &SuiteOpts) -> Result<SuiteReport> {
    let checks = match name {
        "bounds-oracle" => bounds_oracle(opts)?,
        "monotonicity" => monotonicity(opts)?,
        "erasure-list" => erasure_list(opts)?,
        "era-sub-exact" => era_sub_exact(opts)?,
        "constructions" => constructions(opts)?,
        "algorithm1" => algorithm1(opts)?,
        "algorithm2" => algorithm2(opts)?,
        "prob-exact" => prob_exact(opts)?,
        "q-invariance" => q_invariance(opts)?,
        other => {
            return Err(Error::InvalidParameter {
                reason: format!(
                    "unknown suite {other}; expected one of {}",
                    suite_names().join(", ")
                ),
            })
        }
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        checks,
    })
}

pub fn run_all(opts: &SuiteOpts) -> Result<Vec<SuiteReport>> {
    suite_names()
        .iter()
        .map(|name| run_suite(name, opts))
        .collect()
}

fn check(label: impl Into<String>, pass: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        label: label.into(),
        pass,
        detail: detail.into(),
    }
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// All of Z_q^n in lexicographic order. Callers keep q^n tiny.
fn full_space(q: u32, n: usize) -> Vec<Word> {
    let count = (q as u64).pow(n as u32);
    debug_assert!(count <= 1 << 16, "full-space sweep too large");
    let mut words = Vec::with_capacity(count as usize);
    for idx in 0..count {
        let mut codes = vec![0u32; n];
        let mut r = idx;
        for slot in codes.iter_mut().rev() {
            *slot = (r % q as u64) as u32;
            r /= q as u64;
        }
        words.push(Word::from_codes(q, codes).expect("codes below q"));
    }
    words
}

/// For every ordered pair (x, x') collects how many words B(x) and
/// B(x') share, bucketed by d(x, x'). The d = 0 diagonal is included
/// so the monotone chain starts at the full ball volume.
fn pairwise_profile(
    q: u32,
    n: usize,
    model: ErrorModel,
    opts: &SuiteOpts,
) -> Result<BTreeMap<usize, BTreeSet<u64>>> {
    let words = full_space(q, n);
    let rows: Vec<Result<Vec<(usize, u64)>>> = map_indices(opts.exec, words.len(), |i| {
        let spec = BallSpec::new(words[i].clone(), model)?;
        let ball = enumerate_ball(&spec, &opts.caps)?;
        let mut row = Vec::with_capacity(words.len());
        for other in &words {
            let d = dist_codes(words[i].codes(), other.codes());
            let mut count = 0u64;
            for z in &ball {
                if within_ball(other, z, &model)? {
                    count += 1;
                }
            }
            row.push((d, count));
        }
        Ok(row)
    });
    let mut profile: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
    for row in rows {
        for (d, count) in row? {
            profile.entry(d).or_default().insert(count);
        }
    }
    Ok(profile)
}

fn intersection_count(x1: &Word, x2: &Word, t: u64, caps: &Caps) -> Result<u64> {
    let model = ErrorModel::Substitution { t };
    let ball = enumerate_ball(&BallSpec::new(x1.clone(), model)?, caps)?;
    let mut count = 0u64;
    for z in &ball {
        if within_ball(x2, z, &model)? {
            count += 1;
        }
    }
    Ok(count)
}

/// Closed-form channel counts against exhaustive pair enumeration.
/// The e = 0 grid takes the max over every distinct pair; the e = 1
/// spot check takes pairs at distance 2e+1 = 3, the minimum distance
/// of a 1-error-correcting code, where the monotonicity suite puts
/// the maximum.
fn bounds_oracle(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    for q in 2..=opts.max_q {
        for n in 2..=opts.max_n {
            if (q as u64).pow(n as u32) > 4096 {
                continue;
            }
            for t in 1..=2u64.min(n) {
                let profile =
                    pairwise_profile(q, n as usize, ErrorModel::Substitution { t }, opts)?;
                let oracle = profile
                    .iter()
                    .filter(|(d, _)| **d >= 1)
                    .flat_map(|(_, counts)| counts.iter().copied())
                    .max()
                    .expect("grid has at least two words")
                    + 1;
                let formula = channels_unique(&ReconParams::new(n, q, 0, t)?)?;
                checks.push(check(
                    format!("channel count q={q} n={n} t={t} e=0"),
                    formula == BigUint::from(oracle),
                    format!("closed form {formula}, pair enumeration {oracle}"),
                ));
            }
        }
    }

    // Pairs at distance 3 over q = 3, n = 15; the intersection size is
    // a class function of the distance, so three differently shaped
    // pairs must agree before the +1 comparison means anything.
    let pairs = [
        (Word::zero(3, 15), Word::parse(3, "111000000000000")?),
        (Word::zero(3, 15), Word::parse(3, "002000010000200")?),
        (
            Word::parse(3, "012012012012012")?,
            Word::parse(3, "212010012002012")?,
        ),
    ];
    let mut counts = Vec::new();
    for (x1, x2) in &pairs {
        debug_assert_eq!(dist_codes(x1.codes(), x2.codes()), 3);
        counts.push(intersection_count(x1, x2, 2, &opts.caps)?);
    }
    let constant = counts.iter().all(|c| *c == counts[0]);
    let formula = channels_unique(&ReconParams::new(15, 3, 1, 1)?)?;
    checks.push(check(
        "channel count q=3 n=15 t=2 e=1 at the code distance",
        constant && formula == BigUint::from(counts[0] + 1),
        format!(
            "closed form {formula}, distance-3 intersections {counts:?} (max list {} + 1)",
            counts[0]
        ),
    ));
    Ok(checks)
}

/// Intersection sizes depend on the centers only through their
/// distance, and shrink as the distance grows.
fn monotonicity(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let mut cells: Vec<(u32, u64, ErrorModel)> = Vec::new();
    for q in 2..=opts.max_q {
        for n in 2..=opts.max_n.min(4) {
            for t in 1..=2u64.min(n) {
                cells.push((q, n, ErrorModel::Substitution { t }));
            }
            for (t_e, t_s) in [(1u64, 1u64), (2, 1), (1, 2), (2, 2)] {
                if t_e + t_s <= n {
                    cells.push((q, n, ErrorModel::ErasureSubstitution { t_e, t_s }));
                }
            }
        }
    }
    let mut checks = Vec::new();
    for (q, n, model) in cells {
        let profile = pairwise_profile(q, n as usize, model, opts)?;
        let constant = profile.values().all(|counts| counts.len() == 1);
        let sizes: Vec<u64> = profile
            .values()
            .map(|counts| *counts.iter().max().expect("bucket is nonempty"))
            .collect();
        let monotone = sizes.windows(2).all(|w| w[0] >= w[1]);
        let shape: Vec<String> = profile
            .iter()
            .map(|(d, counts)| {
                let list: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
                format!("d={d}:{}", list.join("/"))
            })
            .collect();
        checks.push(check(
            format!(
                "intersections constant per distance and non-increasing, q={q} n={n} {} {:?}",
                model.kind_name(),
                model.budgets()
            ),
            constant && monotone,
            shape.join(", "),
        ));
    }
    Ok(checks)
}

/// Maximal cliques of the distance->=d graph that contain the zero
/// word, as bitmasks over verts. Every code containing zero extends
/// to one of these.
fn maximal_cliques(adj: &[u32]) -> Vec<u32> {
    fn bk(r: u32, mut p: u32, mut x: u32, adj: &[u32], out: &mut Vec<u32>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let pool = p | x;
        let pivot = (0..adj.len())
            .filter(|&u| pool >> u & 1 == 1)
            .max_by_key(|&u| (p & adj[u]).count_ones())
            .expect("pool is nonempty");
        let mut cand = p & !adj[pivot];
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let bit = 1u32 << v;
            bk(r | bit, p & adj[v], x & adj[v], adj, out);
            p &= !bit;
            x |= bit;
            cand &= !bit;
        }
    }
    let mut out = Vec::new();
    if adj.is_empty() {
        return out;
    }
    bk(0, (1u32 << adj.len()) - 1, 0, adj, &mut out);
    out
}

/// Erasure list sizes over q = 3, n = 3, t = 2: every N in [1, V_2(3,2)]
/// against every N-subset of the erasure ball, full space and
/// minimum-distance codes both.
fn erasure_list(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let q = 3u32;
    let n = 3usize;
    let t = 2u64;
    let model = ErrorModel::Erasure { t_e: t };
    let mut checks = Vec::new();
    let mut sound = true;

    let mut resolve = |outputs: Vec<Word>, code: CodeRef<'_>, x: &Word| -> Result<usize> {
        let batch = OutputBatch::new(q, n, model, false, outputs, SamplingRegime::Constructed)?;
        let outcome = erasure_resolve(&batch, code, &opts.caps)?;
        sound &= outcome.candidates.contains(x);
        Ok(outcome.candidates.len())
    };

    // Full space: the adversary may pick any transmitted word, so the
    // sweep ranges over every center.
    let mut max_full = [0u64; 8];
    for x in full_space(q, n) {
        let ball = enumerate_ball(&BallSpec::new(x.clone(), model)?, &opts.caps)?;
        debug_assert_eq!(ball.len(), 7);
        for mask in 1u32..1 << ball.len() {
            let outputs: Vec<Word> = (0..ball.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| ball[i].clone())
                .collect();
            let size = resolve(outputs, CodeRef::FullSpace, &x)? as u64;
            let slot = &mut max_full[mask.count_ones() as usize];
            *slot = (*slot).max(size);
        }
    }
    for n_outputs in 1..=7u64 {
        let bound = erasure_list_size(
            n as u64,
            q,
            t,
            &BigUint::from(n_outputs),
            SpaceKind::FullSpace,
            &opts.caps,
        )?;
        checks.push(check(
            format!("full-space erasure list, N={n_outputs}"),
            BigUint::from(max_full[n_outputs as usize]) == bound.list_size,
            format!(
                "bracket a={}, bound {}, worst subset {}",
                bound.a, bound.list_size, max_full[n_outputs as usize]
            ),
        ));
    }

    // Codes of minimum distance d. Translation maps any center onto
    // zero without changing distances, so the sweep pins x = 0 and
    // ranges over the maximal distance->=d cliques through it.
    let zero = Word::zero(q, n);
    let ball = enumerate_ball(&BallSpec::new(zero.clone(), model)?, &opts.caps)?;
    for d in [2u64, 3] {
        let verts: Vec<Word> = full_space(q, n)
            .into_iter()
            .filter(|w| dist_codes(w.codes(), zero.codes()) as u64 >= d)
            .collect();
        let adj: Vec<u32> = (0..verts.len())
            .map(|i| {
                let mut mask = 0u32;
                for (j, other) in verts.iter().enumerate() {
                    if i != j && dist_codes(verts[i].codes(), other.codes()) as u64 >= d {
                        mask |= 1 << j;
                    }
                }
                mask
            })
            .collect();
        let cliques = maximal_cliques(&adj);
        let mut max_list = [0u64; 8];
        let mut codes_ok = true;
        for clique in &cliques {
            let mut words = vec![zero.clone()];
            for (i, w) in verts.iter().enumerate() {
                if clique >> i & 1 == 1 {
                    words.push(w.clone());
                }
            }
            let code = Code::new(q, n, words)?;
            codes_ok &= code.min_distance().is_none_or(|m| m >= d);
            for mask in 1u32..1 << ball.len() {
                let outputs: Vec<Word> = (0..ball.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| ball[i].clone())
                    .collect();
                let size = resolve(outputs, CodeRef::Explicit(&code), &zero)? as u64;
                let slot = &mut max_list[mask.count_ones() as usize];
                *slot = (*slot).max(size);
            }
        }
        for n_outputs in 1..=7u64 {
            let bound = erasure_list_size(
                n as u64,
                q,
                t,
                &BigUint::from(n_outputs),
                SpaceKind::MinDist(d),
                &opts.caps,
            )?;
            checks.push(check(
                format!("min-distance-{d} erasure list, N={n_outputs}"),
                codes_ok && BigUint::from(max_list[n_outputs as usize]) == bound.list_size,
                format!(
                    "bracket a={}, bound {}, worst of {} cliques {}",
                    bound.a,
                    bound.list_size,
                    cliques.len(),
                    max_list[n_outputs as usize]
                ),
            ));
        }
    }

    checks.push(check(
        "resolved lists always contain the transmitted word",
        sound,
        "every subset of every ball, both space kinds",
    ));
    Ok(checks)
}

/// The erasure-plus-substitution channel count against enumeration
/// over every pair at every distance, one class at a time.
fn era_sub_exact(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    for q in 2..=opts.max_q.min(3) {
        for n in 2..=opts.max_n.min(4) {
            for (t_e, t_s) in [(1u64, 1u64), (1, 2), (2, 1)] {
                if t_e + t_s > n {
                    continue;
                }
                let model = ErrorModel::ErasureSubstitution { t_e, t_s };
                let profile = pairwise_profile(q, n as usize, model, opts)?;
                let mut pass = true;
                let mut parts = Vec::new();
                for (&d, counts) in profile.iter().filter(|(d, _)| **d >= 1) {
                    let constant = counts.len() == 1;
                    let worst = *counts.iter().max().expect("bucket is nonempty");
                    let formula = era_sub_channels(n, q, t_e, t_s, d as u64)?;
                    let agrees = formula == BigUint::from(worst + 1);
                    pass &= constant && agrees;
                    parts.push(format!(
                        "d={d}: formula {formula}, enumeration {}{}",
                        worst + 1,
                        if constant {
                            ""
                        } else {
                            " (class not constant)"
                        }
                    ));
                }
                checks.push(check(
                    format!("erasure+substitution channel count q={q} n={n} t_e={t_e} t_s={t_s}"),
                    pass,
                    parts.join("; "),
                ));
            }
        }
    }
    Ok(checks)
}

/// Largest pairwise-distance->=d subset of the given words.
fn max_clique_min_dist(verts: &[Word], d: u64) -> u64 {
    fn extend(verts: &[Word], cand: &[usize], size: u64, d: u64, best: &mut u64) {
        for (pos, &i) in cand.iter().enumerate() {
            if size + (cand.len() - pos) as u64 <= *best {
                return;
            }
            let next: Vec<usize> = cand[pos + 1..]
                .iter()
                .copied()
                .filter(|&j| dist_codes(verts[i].codes(), verts[j].codes()) as u64 >= d)
                .collect();
            if size + 1 > *best {
                *best = size + 1;
            }
            extend(verts, &next, size + 1, d, best);
        }
    }
    let all: Vec<usize> = (0..verts.len()).collect();
    let mut best = 0;
    extend(verts, &all, 0, d, &mut best);
    best
}

/// The two code constructions, their worked examples, and the two-read
/// list cap for single-substitution reconstruction.
fn constructions(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    let cw = constant_weight_code(7, 2, 2)?;
    checks.push(check(
        "constant-weight example n=7 e=2",
        cw.words() == [Word::parse(2, "0001110")?, Word::parse(2, "1110000")?]
            && cw.min_distance() == Some(6),
        format!("{} words, distance {:?}", cw.len(), cw.min_distance()),
    ));

    let mut cw_grid_ok = true;
    let mut cw_cells = 0u64;
    for e in 0..=2u64 {
        for n in (e + 1)..=8 {
            for q in [2u32, 3] {
                let code = constant_weight_code(n, e, q)?;
                cw_cells += 1;
                cw_grid_ok &= code.len() as u64 == n / (e + 1);
                cw_grid_ok &= code.is_error_correcting(e);
                if code.len() >= 2 {
                    cw_grid_ok &= code.min_distance() == Some(2 * e + 2);
                }
            }
        }
    }
    checks.push(check(
        "constant-weight grid e<=2 n<=8",
        cw_grid_ok,
        format!("{cw_cells} cells: floor(n/(e+1)) words at distance 2e+2"),
    ));

    let (adv, batch) = adversarial_code(2, 2, 3, &opts.caps)?;
    let expected: Result<Vec<Word>> = [
        "000000000011",
        "010000110000",
        "020000001100",
        "101100000000",
        "200011000000",
    ]
    .iter()
    .map(|s| Word::parse(3, s))
    .collect();
    checks.push(check(
        "adversarial example e=2 ell=2 q=3",
        adv.words() == expected?
            && adv.min_distance() == Some(5)
            && batch.outputs.len() == 26
            && batch.outputs.contains(&Word::parse(3, "110000000000")?),
        format!(
            "{} codewords at distance {:?}, {} outputs",
            adv.len(),
            adv.min_distance(),
            batch.outputs.len()
        ),
    ));

    let mut adv_ok = true;
    let mut adv_parts = Vec::new();
    for e in [1u64, 2] {
        for ell in [1u64, 2] {
            for q in [2u32, 3, 4] {
                let (code, batch) = adversarial_code(e, ell, q, &opts.caps)?;
                let t = e + ell;
                let mut covered = true;
                for y in &batch.outputs {
                    for c in code.words() {
                        covered &= dist_codes(c.codes(), y.codes()) as u64 <= t;
                    }
                }
                let listed = reconstruction_list(&batch, CodeRef::Explicit(&code), &opts.caps)?;
                let mut cell_ok = code.len() as u64 == (q as u64 - 1) * ell + 1
                    && code.is_error_correcting(e)
                    && covered
                    && listed.candidates == code.words();
                if q >= 3 {
                    let p = ReconParams::new(code.n() as u64, q, e, ell)?;
                    let bounds = constant_list_bounds(&p)?;
                    cell_ok &= bounds.threshold == BigUint::from(batch.outputs.len())
                        && bounds.list_cap == BigUint::from(code.len());
                }
                adv_ok &= cell_ok;
                if !cell_ok {
                    adv_parts.push(format!("e={e} ell={ell} q={q} failed"));
                }
            }
        }
    }
    checks.push(check(
        "adversarial grid e,ell in {1,2}, q in {2,3,4}",
        adv_ok,
        if adv_parts.is_empty() {
            "every batch keeps the whole code consistent at the threshold count".to_string()
        } else {
            adv_parts.join("; ")
        },
    ));

    // Two distinct reads of a single-substitution channel leave at
    // most q consistent codewords in any e-error-correcting code.
    // Translation moves any read pair onto (0, y2 - y1), so y1 stays
    // pinned at zero.
    for q in [3u32, 4] {
        let mut pass = true;
        let mut parts = Vec::new();
        for n in 2..=opts.max_n.min(4) as usize {
            let y1 = Word::zero(q, n);
            for e in 0..=2u64.min((n as u64 - 1) / 2) {
                let t = e + 1;
                let ball = enumerate_ball(
                    &BallSpec::new(y1.clone(), ErrorModel::Substitution { t })?,
                    &opts.caps,
                )?;
                let mut worst = 0u64;
                for y2 in full_space(q, n) {
                    if y2 == y1 {
                        continue;
                    }
                    let verts: Vec<Word> = ball
                        .iter()
                        .filter(|z| dist_codes(z.codes(), y2.codes()) as u64 <= t)
                        .cloned()
                        .collect();
                    worst = worst.max(max_clique_min_dist(&verts, 2 * e + 1));
                }
                pass &= worst <= q as u64;
                if e == 0 {
                    pass &= worst == q as u64;
                }
                parts.push(format!("n={n} e={e}: {worst}"));
            }
        }
        checks.push(check(
            format!("two reads leave at most q={q} codewords"),
            pass,
            parts.join(", "),
        ));
    }
    Ok(checks)
}

/// Plain coordinates of the majority word that disagree with x.
fn known_errors(majority: &Word, x: &Word) -> usize {
    let q = x.q();
    majority
        .codes()
        .iter()
        .zip(x.codes())
        .filter(|(m, c)| **m < q && m != c)
        .count()
}

fn tally<const K: usize>(rows: Vec<Result<[bool; K]>>) -> ([u64; K], Option<String>) {
    let mut counts = [0u64; K];
    let mut err = None;
    for row in rows {
        match row {
            Ok(flags) => {
                for (slot, flag) in counts.iter_mut().zip(flags) {
                    *slot += flag as u64;
                }
            }
            Err(e) => {
                if err.is_none() {
                    err = Some(e.to_string());
                }
            }
        }
    }
    (counts, err)
}

/// Seeded unique-decoding trials at q = 3, n = 15, e = 1: the decoder,
/// the majority stage, and the brute-force list all line up at the
/// exact channel count.
fn algorithm1(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let p = ReconParams::new(15, 3, 1, 1)?;
    let thresholds = majority_thresholds(&p)?;
    let mut checks = vec![check(
        "channel count q=3 n=15 t=2 e=1",
        thresholds.channels == BigUint::from(13u32),
        format!("N = {}", thresholds.channels),
    )];
    let n_channels = thresholds.channels.to_u64().expect("small channel count");
    let code = Code::new(
        3,
        15,
        vec![Word::zero(3, 15), Word::parse(3, "111000000000000")?],
    )?;
    let model = ErrorModel::Substitution { t: p.t() };
    let trials = opts.trials.max(1) as usize;
    let rows: Vec<Result<[bool; 4]>> = map_indices(opts.exec, trials, |i| {
        let mut rng = trial_rng(opts.seed, i as u64);
        let pick = uniform_biguint(&mut rng, &BigUint::from(code.len() as u64))
            .to_usize()
            .expect("index fits");
        let x = &code.words()[pick];
        let batch = transmit_with_rng(x, &model, n_channels, false, &mut rng, &opts.caps)?;
        let run = algorithm1_decode(&batch, &code, &p, &opts.caps)?;
        let brute = reconstruction_list(&batch, CodeRef::Explicit(&code), &opts.caps)?;
        Ok([
            run.outcome.unique() == Some(x),
            known_errors(&run.majority.word, x) as u64 <= p.e,
            brute.candidates == [x.clone()],
            run.outcome.candidates == brute.candidates,
        ])
    });
    let (counts, err) = tally(rows);
    checks.push(check(
        "trials ran to completion",
        err.is_none(),
        err.unwrap_or_else(|| format!("{trials} seeded trials")),
    ));
    let names = [
        "decoder returns the transmitted word",
        "majority word errs on at most e known coordinates",
        "N distinct channels leave a single consistent codeword",
        "decoder list matches brute-force reconstruction",
    ];
    for (name, count) in names.iter().zip(counts) {
        checks.push(check(
            *name,
            count == trials as u64,
            format!("{count}/{trials} trials"),
        ));
    }
    Ok(checks)
}

/// Seeded binary list-decoding trials at n = 12, e = 1, ell = 2, both
/// erasure offsets.
fn algorithm2(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let code = Code::new(
        2,
        12,
        vec![
            Word::zero(2, 12),
            Word::parse(2, "111000000000")?,
            Word::parse(2, "000000111111")?,
        ],
    )?;
    let mut checks = Vec::new();
    for (a, ball_cap, expect_n) in [(0u64, 1u64, 23u64), (1, 2, 3)] {
        let p = ReconParams::new(12, 2, 1, 2)?
            .with_list_offset(a)?
            .with_eps(BigRational::one())?
            .with_list_ball_cap(ball_cap)?;
        let thresholds = list_thresholds(&p)?;
        checks.push(check(
            format!("channel count at offset a={a}"),
            thresholds.channels == BigUint::from(expect_n),
            format!("N = {}", thresholds.channels),
        ));
        let n_channels = thresholds.channels.to_u64().expect("small channel count");
        let cap_simple = binary_list_caps(&p)?
            .cap_simple
            .to_u64()
            .expect("small list cap");
        let model = ErrorModel::Substitution { t: p.t() };
        let trials = opts.trials.max(1) as usize;
        let rows: Vec<Result<[bool; 4]>> = map_indices(opts.exec, trials, |i| {
            let mut rng = trial_rng(opts.seed.wrapping_add(a), i as u64);
            let pick = uniform_biguint(&mut rng, &BigUint::from(code.len() as u64))
                .to_usize()
                .expect("index fits");
            let x = &code.words()[pick];
            let batch = transmit_with_rng(x, &model, n_channels, false, &mut rng, &opts.caps)?;
            let run = algorithm2_list_decode(&batch, &code, &p, &opts.caps)?;
            let brute = reconstruction_list(&batch, CodeRef::Explicit(&code), &opts.caps)?;
            let subset = run
                .outcome
                .candidates
                .iter()
                .all(|c| brute.candidates.contains(c));
            Ok([
                run.outcome.candidates.contains(x),
                subset,
                run.outcome.candidates.len() as u64 <= cap_simple,
                known_errors(&run.majority.word, x) as u64 <= p.e + p.a,
            ])
        });
        let (counts, err) = tally(rows);
        checks.push(check(
            format!("trials ran to completion, a={a}"),
            err.is_none(),
            err.unwrap_or_else(|| format!("{trials} seeded trials")),
        ));
        let names = [
            "list contains the transmitted word",
            "list stays within the consistent set",
            "list size within 2^(ell-a) M",
            "majority word errs on at most e+a known coordinates",
        ];
        for (name, count) in names.iter().zip(counts) {
            checks.push(check(
                format!("{name}, a={a}"),
                count == trials as u64,
                format!("{count}/{trials} trials"),
            ));
        }
    }
    Ok(checks)
}

/// Exact recovery probabilities: the closed two-read form, the
/// weighted exact sweep, a seeded Monte Carlo run, and batches built
/// to defeat recovery.
fn prob_exact(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let model = ErrorModel::Substitution { t: 1 };

    let mut sweep_ok = true;
    let mut parts = Vec::new();
    let q_top = opts.max_q.clamp(3, 9);
    for q in 2..=q_top {
        let closed = worked_example_p_prime(q)?;
        let est = unique_recovery_prob(
            &Word::zero(q, 2),
            &model,
            3,
            0,
            opts.seed,
            EstimateMode::Exact,
            CodeRef::FullSpace,
            &opts.caps,
            opts.exec,
        )?;
        let exact = est.exact.clone().expect("exact mode fills the rational");
        sweep_ok &= closed == exact;
        parts.push(format!("q={q}: {closed}"));
    }
    checks.push(check(
        "closed two-read form matches the exact sweep",
        sweep_ok,
        parts.join(", "),
    ));
    checks.push(check(
        "worked values 2/9 and 48/125",
        worked_example_p_prime(2)? == rational(2, 9)
            && worked_example_p_prime(3)? == rational(48, 125),
        "q=2 and q=3 pinned",
    ));
    checks.push(check(
        "exact tuple weighting partitions the tuple space",
        sweep_ok,
        "the sweep recomputes the partition identity at every q",
    ));

    let exact = rational(2, 9).to_f64().expect("fits f64");
    let mc = unique_recovery_prob(
        &Word::zero(2, 2),
        &model,
        3,
        opts.trials.max(50),
        opts.seed,
        EstimateMode::MonteCarlo,
        CodeRef::FullSpace,
        &opts.caps,
        opts.exec,
    )?;
    checks.push(check(
        "Monte Carlo tracks the exact value",
        (mc.p_hat - exact).abs() <= 4.0 * mc.ci95_halfwidth,
        format!(
            "p_hat {:.4} vs 2/9, half-width {:.4} over {} trials",
            mc.p_hat, mc.ci95_halfwidth, mc.trials
        ),
    ));

    checks.push(check(
        "pinned-coordinate probability examples",
        substitution_pin_prob(4, 2, 1)? == rational(1, 2)
            && substitution_pin_prob(4, 2, 2)? == rational(1, 4)
            && substitution_pin_prob(4, 2, 3)? == rational(1, 8)
            && substitution_pin_prob(3, 3, 5)? == rational(1, 1),
        "(C(n-1,t-1)/C(n,t))^N at n=4 t=2 and the t=n degenerate case",
    ));

    // Batches whose every output errs at the same coordinate never
    // recover it; the list then holds at least q words.
    let mut stuck_ok = true;
    let mut stuck_parts = Vec::new();
    for (q, t, values) in [(2u32, 1u64, vec![1u32]), (3, 2, vec![1, 2])] {
        let outputs: Vec<Word> = values
            .iter()
            .map(|&v| {
                let mut codes = vec![0u32; 3];
                codes[0] = v;
                Word::from_codes(q, codes).expect("codes below q")
            })
            .collect();
        let batch = OutputBatch::new(
            q,
            3,
            ErrorModel::Substitution { t },
            false,
            outputs,
            SamplingRegime::Constructed,
        )?;
        let outcome = reconstruction_list(&batch, CodeRef::FullSpace, &opts.caps)?;
        stuck_ok &=
            outcome.candidates.len() as u64 >= q as u64 && outcome.status != DecodeStatus::Unique;
        stuck_parts.push(format!("q={q}: list {}", outcome.candidates.len()));
    }
    checks.push(check(
        "same-coordinate errors block unique recovery",
        stuck_ok,
        stuck_parts.join(", "),
    ));
    Ok(checks)
}

/// Deletion and erasure recovery do not depend on the alphabet size:
/// the seeded trials agree outcome for outcome after lifting q.
fn q_invariance(opts: &SuiteOpts) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    for n in [2usize, 3] {
        let q = n as u32 + 1;
        let x = Word::from_codes(q, (0..n as u32).collect())?;
        for kind in ["deletion", "erasure"] {
            let mut pass = true;
            let mut parts = Vec::new();
            for q_prime in [q + 2, 2 * q] {
                for t in 1..=2u64.min(n as u64) {
                    let model = match kind {
                        "deletion" => ErrorModel::Deletion { t_d: t },
                        _ => ErrorModel::Erasure { t_e: t },
                    };
                    let report = deletion_q_invariance(
                        &x,
                        q_prime,
                        &model,
                        2,
                        opts.trials.max(1),
                        opts.seed,
                        &opts.caps,
                        opts.exec,
                    )?;
                    pass &= report.balls_identical && report.agreement;
                    parts.push(format!(
                        "q'={q_prime} t={t}: balls {}, trials {}",
                        if report.balls_identical {
                            "match"
                        } else {
                            "differ"
                        },
                        if report.agreement { "agree" } else { "split" },
                    ));
                }
            }
            checks.push(check(
                format!("{kind} recovery ignores the alphabet, n={n}"),
                pass,
                parts.join("; "),
            ));
        }
    }
    Ok(checks)
}
