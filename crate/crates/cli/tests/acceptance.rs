//! End-to-end acceptance checks. Each test prints one pass/fail line
//! and pins its own wall-clock budget next to the workload.

use std::process::Command;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;

use reconlab_core::balls::{reconstruction_list, CodeRef};
use reconlab_core::channels::{ErrorModel, OutputBatch, SamplingRegime};
use reconlab_core::exec::ExecMode;
use reconlab_core::probelab::insertion_qsweep;
use reconlab_core::verify::{run_suite, SuiteOpts};
use reconlab_core::word::Word;
use reconlab_core::Caps;

fn check(label: &str, budget: Duration, run: impl FnOnce() -> Result<(), String>) {
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let verdict = match (&outcome, elapsed <= budget) {
        (Ok(()), true) => "pass".to_string(),
        (Ok(()), false) => "FAIL (over budget)".to_string(),
        (Err(reason), _) => format!("FAIL ({reason})"),
    };
    println!("acceptance {label}: {verdict} [{elapsed:.2?} of {budget:?}]");
    if let Err(reason) = outcome {
        panic!("{label}: {reason}");
    }
    assert!(
        elapsed <= budget,
        "{label}: took {elapsed:?}, budget {budget:?}"
    );
}

fn suite_opts(max_n: u64, max_q: u32, trials: u64) -> SuiteOpts {
    SuiteOpts {
        max_n,
        max_q,
        trials,
        seed: 0,
        exec: ExecMode::Parallel,
        caps: Caps::default(),
    }
}

fn suite_check(label: &str, suite: &str, opts: SuiteOpts, budget: Duration) {
    check(label, budget, || {
        let report = run_suite(suite, &opts).map_err(|err| err.to_string())?;
        if report.passed() {
            Ok(())
        } else {
            let failing: Vec<String> = report
                .checks
                .iter()
                .filter(|c| !c.pass)
                .map(|c| format!("{}: {}", c.label, c.detail))
                .collect();
            Err(failing.join("; "))
        }
    });
}

fn w(text: &str) -> Word {
    Word::parse(2, text).expect("binary digits")
}

#[test]
fn a01_two_read_worked_example() {
    check("01 two-read worked example", Duration::from_secs(1), || {
        let caps = Caps::default();
        let model = ErrorModel::Substitution { t: 1 };
        let two = OutputBatch::new(
            2,
            3,
            model,
            false,
            vec![w("100"), w("010")],
            SamplingRegime::Constructed,
        )
        .map_err(|err| err.to_string())?;
        let listed =
            reconstruction_list(&two, CodeRef::FullSpace, &caps).map_err(|err| err.to_string())?;
        if listed.candidates != vec![w("000"), w("110")] {
            return Err(format!("two reads gave {:?}", listed.candidates));
        }
        let three = OutputBatch::new(
            2,
            3,
            model,
            false,
            vec![w("100"), w("010"), w("001")],
            SamplingRegime::Constructed,
        )
        .map_err(|err| err.to_string())?;
        let pinned = reconstruction_list(&three, CodeRef::FullSpace, &caps)
            .map_err(|err| err.to_string())?;
        if pinned.unique() != Some(&w("000")) {
            return Err(format!("three reads gave {:?}", pinned.candidates));
        }
        Ok(())
    });
}

#[test]
fn a02_channel_count_oracle() {
    suite_check(
        "02 channel-count oracle",
        "bounds-oracle",
        suite_opts(5, 4, 0),
        Duration::from_secs(60),
    );
}

#[test]
fn a03_erasure_list_brackets() {
    suite_check(
        "03 erasure list brackets",
        "erasure-list",
        suite_opts(3, 3, 0),
        Duration::from_secs(120),
    );
}

#[test]
fn a04_intersection_monotonicity() {
    suite_check(
        "04 intersection monotonicity",
        "monotonicity",
        suite_opts(4, 4, 0),
        Duration::from_secs(120),
    );
}

#[test]
fn a05_erasure_substitution_count() {
    suite_check(
        "05 erasure-substitution count",
        "era-sub-exact",
        suite_opts(4, 3, 0),
        Duration::from_secs(60),
    );
}

#[test]
fn a06_code_constructions() {
    suite_check(
        "06 code constructions",
        "constructions",
        suite_opts(4, 4, 0),
        Duration::from_secs(120),
    );
}

#[test]
fn a07_unique_majority_decoding() {
    suite_check(
        "07 unique majority decoding",
        "algorithm1",
        suite_opts(4, 3, 1000),
        Duration::from_secs(120),
    );
}

#[test]
fn a08_binary_list_decoding() {
    suite_check(
        "08 binary list decoding",
        "algorithm2",
        suite_opts(4, 3, 1000),
        Duration::from_secs(120),
    );
}

#[test]
fn a09_exact_recovery_probabilities() {
    suite_check(
        "09 exact recovery probabilities",
        "prob-exact",
        suite_opts(2, 3, 100_000),
        Duration::from_secs(60),
    );
}

#[test]
fn a10_insertion_alphabet_sweep() {
    check(
        "10 insertion alphabet sweep",
        Duration::from_secs(300),
        || {
            let points = insertion_qsweep(
                4,
                2,
                2,
                &[8, 16, 32, 64, 128, 256],
                10_000,
                2026,
                &Caps::default(),
                ExecMode::Parallel,
            )
            .map_err(|err| err.to_string())?;
            for point in &points {
                let bound = point
                    .lower_bound
                    .to_f64()
                    .ok_or("lower bound fits an f64")?;
                for (name, est) in [("unique", &point.unique), ("pair", &point.pair)] {
                    let sigma = est.ci95_halfwidth / 1.96;
                    if est.p_hat < bound - 3.0 * sigma {
                        return Err(format!(
                            "q={}: {name} rate {} under bound {bound} - 3 sigma",
                            point.q, est.p_hat
                        ));
                    }
                }
                if point.pair_wrong != 0 {
                    return Err(format!(
                        "q={}: {} wrong unique pair decodes",
                        point.q, point.pair_wrong
                    ));
                }
            }
            let last = points.last().ok_or("sweep returned points")?;
            if last.unique.p_hat <= 0.9 || last.pair.p_hat <= 0.9 {
                return Err(format!(
                    "q=256 rates unique={} pair={} not above 0.9",
                    last.unique.p_hat, last.pair.p_hat
                ));
            }
            Ok(())
        },
    );
}

#[test]
fn a11_alphabet_invariance() {
    suite_check(
        "11 alphabet invariance",
        "q-invariance",
        suite_opts(3, 3, 500),
        Duration::from_secs(60),
    );
}

#[test]
fn a12_cli_byte_determinism() {
    check("12 CLI byte determinism", Duration::from_secs(120), || {
        let bin = env!("CARGO_BIN_EXE_reconlab");
        let invocations: &[&[&str]] = &[
            &["bounds", "--n", "3", "--q", "2", "--e", "0", "--t", "1"],
            &[
                "ball",
                "--q",
                "5",
                "--center",
                "014",
                "--model",
                "insertion",
                "--budgets",
                "1",
            ],
            &[
                "simulate",
                "--q",
                "3",
                "--x",
                "012",
                "--model",
                "erasure",
                "--budgets",
                "1",
                "--n-outputs",
                "3",
                "--seed",
                "7",
            ],
            &[
                "code",
                "make-adversarial",
                "--e",
                "2",
                "--ell",
                "2",
                "--q",
                "3",
            ],
            &[
                "verify",
                "--suite",
                "prob-exact",
                "--trials",
                "200",
                "--seed",
                "5",
            ],
            &[
                "experiment",
                "pprime",
                "--q-list",
                "2,3,4",
                "--trials",
                "400",
                "--seed",
                "9",
            ],
            &[
                "experiment",
                "insertion-sweep",
                "--q-list",
                "8,32",
                "--trials",
                "400",
                "--seed",
                "9",
                "--format",
                "csv",
            ],
            &[
                "experiment",
                "recovery",
                "--q",
                "3",
                "--x",
                "012",
                "--model",
                "substitution",
                "--budgets",
                "1",
                "--n-outputs",
                "3",
                "--trials",
                "500",
                "--seed",
                "1",
                "--format",
                "text",
            ],
        ];
        for args in invocations {
            let run = |_: usize| {
                Command::new(bin)
                    .args(*args)
                    .env_remove("RECONLAB_CAP")
                    .output()
                    .map_err(|err| format!("{args:?}: {err}"))
            };
            let first = run(0)?;
            let second = run(1)?;
            if !first.status.success() {
                return Err(format!(
                    "{args:?} exited {:?}: {}",
                    first.status.code(),
                    String::from_utf8_lossy(&first.stderr)
                ));
            }
            if first.stdout != second.stdout
                || first.stderr != second.stderr
                || first.status.code() != second.status.code()
            {
                return Err(format!("{args:?} differs between identical runs"));
            }
        }
        Ok(())
    });
}
