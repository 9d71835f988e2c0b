//! End-to-end acceptance run. Prints one `PASS`/`FAIL` line per criterion and
//! exits non-zero if any criterion fails.
//!
//! Reference counts are the published tables for the full tree, for the tree
//! trimmed with `d = 3, G = 100`, and for the tree trimmed with `d = 4`,
//! special trimming and `G = 120`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use sgforest_core::oracle::{
    assert_equivalence, enumerate_gapsets, structural_discrepancies, trim_soundness,
};
use sgforest_core::TrimPolicy;

const N: [u64; 46] = [
    1, 1, 2, 4, 7, 12, 23, 39, 67, 118, 204, 343, 592, 1001, 1693, 2857, 4806, 8045, 13467, 22464,
    37396, 62194, 103246, 170963, 282828, 467224, 770832, 1270267, 2091030, 3437839, 5646773,
    9266788, 15195070, 24896206, 40761087, 66687201, 109032500, 178158289, 290939807, 474851445,
    774614284, 1262992840, 2058356522, 3353191846, 5460401576, 8888486816,
];

const T: [u64; 51] = [
    1, 1, 1, 1, 2, 3, 4, 6, 9, 13, 19, 28, 41, 60, 88, 129, 189, 277, 406, 595, 872, 1278, 1870,
    2741, 4019, 5888, 8622, 12634, 18513, 27128, 39749, 58192, 85285, 124928, 183029, 268072,
    392646, 575237, 842632, 1234294, 1808003, 2648088, 3878863, 5681044, 8320312, 12184995,
    17844810, 26134470, 38275824, 56052677, 82079784,
];

const T_SPECIAL: [u64; 56] = [
    1, 1, 1, 1, 1, 2, 3, 4, 5, 7, 10, 14, 19, 26, 36, 49, 67, 93, 128, 177, 245, 340, 455, 624,
    863, 1194, 1647, 2286, 3180, 4234, 5823, 8035, 11135, 15341, 21369, 29722, 39491, 54511, 74910,
    104183, 143431, 200122, 278371, 369269, 510693, 699711, 975178, 1342072, 1876236, 2608650,
    3458914, 4794003, 6551846, 9147280, 12582317, 17614571,
];

const FIVE_MINUTES: Duration = Duration::from_secs(300);

const T_ARGS: &[&str] = &[
    "wilf",
    "--max-genus",
    "50",
    "--trim-denominator",
    "3",
    "--bound-genus",
    "100",
];

struct Run {
    code: Option<i32>,
    stdout: Vec<u8>,
    stderr: String,
    elapsed: Duration,
}

fn sgforest(args: &[&str], dir: &Path) -> Run {
    let start = Instant::now();
    let o = Command::new(env!("CARGO_BIN_EXE_sgforest"))
        .args(args)
        .current_dir(dir)
        .env_remove("SGFOREST_WORKERS")
        .output()
        .expect("the sgforest binary runs");
    Run {
        code: o.status.code(),
        stdout: o.stdout,
        stderr: String::from_utf8_lossy(&o.stderr).into_owned(),
        elapsed: start.elapsed(),
    }
}

fn with(base: &[&str], extra: &[&str]) -> Vec<String> {
    base.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run_owned(args: &[String], dir: &Path) -> Run {
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    sgforest(&refs, dir)
}

fn parse_counts(out: &[u8]) -> Result<Vec<u64>, String> {
    let text = std::str::from_utf8(out).map_err(|e| e.to_string())?;
    text.lines()
        .skip(1)
        .map(|l| {
            l.split_once(',')
                .and_then(|(_, n)| n.parse().ok())
                .ok_or_else(|| format!("bad row {l:?}"))
        })
        .collect()
}

/// Compares a finished run against a table prefix and a time limit.
fn check_counts(run: &Run, expected: &[u64], limit: Duration) -> Result<String, String> {
    if run.code != Some(0) {
        return Err(format!("exit status {:?}: {}", run.code, run.stderr.trim()));
    }
    let got = parse_counts(&run.stdout)?;
    if got != expected {
        let g = got
            .iter()
            .zip(expected)
            .position(|(a, b)| a != b)
            .unwrap_or(got.len().min(expected.len()));
        return Err(format!(
            "first difference at g={g}: got {:?}, expected {:?}",
            got.get(g),
            expected.get(g)
        ));
    }
    let last = expected.len() - 1;
    let msg = format!(
        "g <= {last} exact, ends {}, {:.1?}",
        expected[last], run.elapsed
    );
    if run.elapsed > limit {
        return Err(format!("{msg} exceeds {limit:?}"));
    }
    Ok(msg)
}

struct Suite {
    failures: usize,
}

impl Suite {
    fn report(&mut self, id: u32, name: &str, outcome: Result<String, String>) {
        match outcome {
            Ok(detail) => println!("PASS  {id:>2}  {name}: {detail}"),
            Err(detail) => {
                self.failures += 1;
                println!("FAIL  {id:>2}  {name}: {detail}");
            }
        }
    }
}

fn ratio_at(csv: &[u8], g: usize) -> Result<f64, String> {
    let text = std::str::from_utf8(csv).map_err(|e| e.to_string())?;
    let line = text.lines().nth(g + 1).ok_or("missing row")?;
    let ratio = line.rsplit(',').next().ok_or("missing ratio")?;
    ratio.parse().map_err(|_| format!("bad ratio in {line:?}"))
}

fn discrepancy_summary(
    found: Vec<sgforest_core::oracle::Discrepancy>,
    ok: String,
) -> Result<String, String> {
    match found.first() {
        None => Ok(ok),
        Some(d) => Err(format!("{} discrepancies, first {d}", found.len())),
    }
}

fn main() -> ExitCode {
    let work = tempfile::tempdir().expect("temporary directory");
    let dir = work.path();
    let mut suite = Suite { failures: 0 };

    // 1. Full tree to genus 26 on one worker.
    let n26 = sgforest(&["count", "--max-genus", "26", "--workers", "1"], dir);
    suite.report(
        1,
        "n_g to 26, 1 worker",
        check_counts(&n26, &N[..=26], Duration::from_secs(10)),
    );

    // 2. Full tree to genus 35.
    let n35 = sgforest(&["count", "--max-genus", "35", "--workers", "8"], dir);
    suite.report(
        2,
        "n_g to 35, 8 workers",
        check_counts(&n35, &N[..=35], FIVE_MINUTES),
    );

    // 3. Trimmed tree, d = 3, G = 100, to genus 50.
    let t50 = run_owned(&with(T_ARGS, &["--workers", "8"]), dir);
    suite.report(
        3,
        "t_g to 50 (d=3, G=100)",
        check_counts(&t50, &T, FIVE_MINUTES),
    );

    // 4. Special trimmed tree, d = 4, G = 120, to genus 55.
    let special = sgforest(
        &[
            "wilf",
            "--max-genus",
            "55",
            "--trim-denominator",
            "4",
            "--special-trim",
            "--bound-genus",
            "120",
            "--workers",
            "8",
        ],
        dir,
    );
    suite.report(
        4,
        "t'_g to 55 (d=4, special, G=120)",
        check_counts(&special, &T_SPECIAL, FIVE_MINUTES),
    );

    // 5. Growth ratio from the output of criterion 3.
    let outcome = (|| {
        let table = dir.join("t50.csv");
        fs::write(&table, &t50.stdout).map_err(|e| e.to_string())?;
        let run = sgforest(&["ratios", "--input", table.to_str().unwrap()], dir);
        if run.code != Some(0) {
            return Err(run.stderr);
        }
        let r = ratio_at(&run.stdout, 50)?;
        if (r - 1.4643).abs() <= 1e-4 {
            Ok(format!("t_50/t_49 = {r:.6}"))
        } else {
            Err(format!("t_50/t_49 = {r:.6}, expected 1.4643 +- 0.0001"))
        }
    })();
    suite.report(5, "growth ratio", outcome);

    // 6. Oracle equivalence.
    let outcome = (|| {
        let n10 = enumerate_gapsets(10).map_err(|e| e.to_string())?[&10].len();
        if n10 != 204 {
            return Err(format!("gap-set search finds {n10} semigroups of genus 10"));
        }
        discrepancy_summary(
            assert_equivalence(22),
            "gap sets agree for g <= 12, every state to g = 22 equals its recomputation".into(),
        )
    })();
    suite.report(6, "oracle equivalence", outcome);

    // 7. Structural properties.
    suite.report(
        7,
        "structural properties to 16",
        discrepancy_summary(
            structural_discrepancies(16),
            "all child relations hold".into(),
        ),
    );

    // 8. Trim soundness.
    let policies = [
        TrimPolicy::with_denominator(100, 3).unwrap(),
        TrimPolicy::with_denominator(22, 3).unwrap(),
        TrimPolicy::with_denominator(120, 4).unwrap().special(),
        TrimPolicy::with_denominator(22, 4)
            .unwrap()
            .special()
            .left_size(),
        TrimPolicy::none(22).left_size(),
    ];
    let found: Vec<_> = policies
        .iter()
        .flat_map(|p| trim_soundness(p, 22))
        .collect();
    suite.report(
        8,
        "trim soundness to 22",
        discrepancy_summary(
            found,
            format!("{} policies checked exhaustively", policies.len()),
        ),
    );

    // 9. Worker count and frontier genus do not change the output.
    let outcome = (|| {
        let n_args = ["count", "--max-genus", "26"];
        let mut runs = 0;
        for workers in ["1", "2", "8"] {
            for g0 in ["10", "22"] {
                let extra = ["--workers", workers, "--frontier-genus", g0];
                for (base, reference) in [(&n_args[..], &n26), (T_ARGS, &t50)] {
                    let run = run_owned(&with(base, &extra), dir);
                    if run.stdout != reference.stdout || run.code != reference.code {
                        return Err(format!(
                            "{} with workers {workers}, frontier {g0} differs",
                            base.join(" ")
                        ));
                    }
                    runs += 1;
                }
            }
        }
        Ok(format!("{runs} reruns byte-identical"))
    })();
    suite.report(9, "parallel determinism", outcome);

    // 10. Interrupt mid-frontier, resume, compare with an uninterrupted run.
    let outcome = (|| {
        let base = ["count", "--max-genus", "20", "--frontier-genus", "10"];
        let full = sgforest(&base, dir);
        let ck: PathBuf = dir.join("g20.ckpt");
        let ck_arg = ck.to_str().unwrap();
        let stop = sgforest(
            &[
                &base[..],
                &["--checkpoint", ck_arg, "--stop-after-tasks", "100"],
            ]
            .concat(),
            dir,
        );
        if stop.code != Some(0) || !stop.stdout.is_empty() {
            return Err(format!("interrupted run: {:?} {}", stop.code, stop.stderr));
        }
        let pending = fs::read_to_string(&ck)
            .map_err(|e| e.to_string())?
            .lines()
            .count()
            - 4;
        let resumed = sgforest(
            &[&base[..], &["--resume", ck_arg, "--workers", "3"]].concat(),
            dir,
        );
        if resumed.code != Some(0) || resumed.stdout != full.stdout {
            return Err(format!(
                "resumed run differs: {:?} {}",
                resumed.code, resumed.stderr
            ));
        }
        Ok(format!(
            "stopped with {pending} of {} subtrees pending, resumed output identical",
            N[10]
        ))
    })();
    suite.report(10, "checkpoint fidelity at G=20", outcome);

    if suite.failures == 0 {
        println!("all acceptance criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{} acceptance criteria failed", suite.failures);
        ExitCode::FAILURE
    }
}
