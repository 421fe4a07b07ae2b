//! End-to-end acceptance checks, one printed PASS/FAIL line per criterion.
//!
//! Library-level criteria compare against oracles computed here; the
//! experiment criteria drive the `polyuct` binary and parse its output.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use polyuct::bandit::{RewardProcess, TransitionTable};
use polyuct::constants::{beta_prime, lemma_beta_t, root_exponents, LayerConstants, ProblemShape};
use polyuct::env::{ChainMdp, ChainMove};
use polyuct::harness::derive_seed;
use polyuct::mab_sim::{hoeffding_tail_grid, MabInstance, UcbSimulator};
use polyuct::mcts::{search, SearchConfig};
use polyuct::policy::{exploration_bonus, ExplorationParams};

const FORMULA_TOL: f64 = 1e-12;
const BONUS_TOL: f64 = 1e-12;
const FUZZ_RUNS: u64 = 1000;
const LEMMA_TRIALS: u64 = 10_000;
const THEOREM_TRIALS: u64 = 2000;
const CHAIN_SIMULATIONS: u64 = 100_000;
const CHAIN_SEEDS: u64 = 100;
const CHAIN_VALUE_TOL: f64 = 0.05;
const CHAIN_SUCCESS_RATE: f64 = 0.95;
const CHAIN_V_STAR: f64 = 0.970299;
const RETURN_SEEDS: u64 = 50;
const RETURN_LOW_BAND: (f64, f64) = (0.02, 0.18);
const RETURN_HIGH_BAND: (f64, f64) = (0.15, 0.45);
const REGRET_SEEDS: u64 = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_polyuct")
}

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polyuct-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

/// Runs the binary and returns (exit success, file contents of `out`).
fn run_cli(args: &[&str], out: &Path) -> (bool, String) {
    let status = Command::new(bin())
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .expect("binary runs");
    let text = std::fs::read_to_string(out).unwrap_or_default();
    (status.success(), text)
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap_or("").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header
        .iter()
        .position(|h| h == name)
        .unwrap_or_else(|| panic!("missing column {name}"))
}

fn slack(freq: f64, trials: u64) -> f64 {
    3.0 * (freq * (1.0 - freq) / trials as f64).sqrt()
}

fn criterion_1() -> Outcome {
    let layer = LayerConstants::new(2.0, 16.0, 0.5).unwrap();
    let (eta_dd, xi_dd) = root_exponents(&layer, 4.0);
    let bp = beta_prime(
        &LayerConstants::new(2.0, 1.0, 0.5).unwrap(),
        &ProblemShape::new(1.0, vec![1], 1.0).unwrap(),
    )
    .unwrap();
    // Closed forms: 4 / (16 * 1/2) and 4 - 1; 2 * 2^3 * 1 * 1^2.
    let pass = (eta_dd - 0.5).abs() <= FORMULA_TOL && (xi_dd - 3.0).abs() <= FORMULA_TOL && bp == 16.0;
    outcome(pass, format!("eta''={eta_dd} xi''={xi_dd} beta'={bp}"))
}

fn criterion_2() -> Outcome {
    let p = ExplorationParams::practical();
    let grid: [(u64, u64); 20] = [
        (1, 1),
        (2, 1),
        (4, 2),
        (9, 3),
        (16, 4),
        (25, 7),
        (100, 10),
        (123, 45),
        (1000, 1),
        (1024, 32),
        (4096, 100),
        (10_000, 9999),
        (65_536, 256),
        (100_000, 3),
        (1 << 20, 1 << 10),
        (999_999, 12_345),
        (1 << 30, 7),
        (1 << 40, 1 << 20),
        (3, 2),
        (7, 5),
    ];
    let mut worst = 0.0f64;
    for &(t, s) in &grid {
        let oracle = 2.0 * ((t as f64).sqrt() / s as f64).sqrt();
        let got = exploration_bonus(t, s, &p);
        worst = worst.max((got - oracle).abs() / oracle.max(1.0));
    }
    let infinite = [1u64, 2, 1000, u64::MAX]
        .iter()
        .all(|&t| exploration_bonus(t, 0, &p) == f64::INFINITY);
    outcome(
        worst <= BONUS_TOL && infinite,
        format!("max error {worst:e} over 20 points, B(t,0)=inf: {infinite}"),
    )
}

fn random_process(rng: &mut ChaCha8Rng, dyadic: bool) -> RewardProcess {
    let d = |rng: &mut ChaCha8Rng| rng.gen_range(0..=1024) as f64 / 1024.0;
    if dyadic {
        match rng.gen_range(0..2) {
            0 => RewardProcess::constant(d(rng)),
            _ => {
                let (a, b) = (d(rng), d(rng));
                RewardProcess::bernoulli(rng.gen(), a.min(b), a.max(b))
            }
        }
    } else {
        match rng.gen_range(0..4) {
            0 => RewardProcess::constant(rng.gen()),
            1 => RewardProcess::bernoulli(rng.gen(), 0.0, rng.gen()),
            2 => {
                let lo: f64 = rng.gen();
                RewardProcess::Uniform {
                    lo,
                    hi: lo + (1.0 - lo) * rng.gen::<f64>(),
                }
            }
            _ => RewardProcess::Drift {
                limit: rng.gen(),
                decay: rng.gen_range(0.0..0.99),
            },
        }
    }
}

fn random_instance(rng: &mut ChaCha8Rng, dyadic: bool) -> MabInstance {
    let arms = rng.gen_range(1..=4);
    let mut rows = Vec::new();
    let mut leaves = Vec::new();
    for _ in 0..arms {
        let k = rng.gen_range(1..=3);
        let weights: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = weights.iter().sum();
        rows.push(weights.iter().map(|w| w / total).collect::<Vec<f64>>());
        leaves.push((0..k).map(|_| random_process(rng, dyadic)).collect());
    }
    MabInstance::new(1.0, TransitionTable::new(rows).unwrap(), leaves).unwrap()
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let params = ExplorationParams::practical();
    for run in 0..FUZZ_RUNS {
        let dyadic = run % 2 == 0;
        let inst = random_instance(&mut rng, dyadic);
        let n = rng.gen_range(1..=2000u64);
        let mut sim = UcbSimulator::new(&inst, params, derive_seed(3, run)).with_log(n as usize);
        sim.run_until(n);
        let trace = sim.trace();
        if let Err(e) = trace.verify_counts() {
            return outcome(false, format!("run {run}: {e}"));
        }
        // Counts rebuilt from the selection log.
        let mut arm_counts = vec![0u64; inst.arms()];
        let mut leaf_counts: Vec<Vec<u64>> = inst.transitions().branching().iter().map(|&k| vec![0; k]).collect();
        for s in trace.selections() {
            arm_counts[s.arm] += 1;
            leaf_counts[s.arm][s.successor] += 1;
        }
        let leaf_pulls: Vec<Vec<u64>> = trace
            .leaf_stats()
            .iter()
            .map(|row| row.iter().map(|l| l.pulls()).collect())
            .collect();
        if arm_counts.iter().sum::<u64>() != n || arm_counts != trace.arm_pulls() || leaf_counts != leaf_pulls {
            return outcome(false, format!("run {run}: counts disagree with the selection log"));
        }
        // Multiples of 1/1024 sum exactly in integers.
        if dyadic {
            let scaled = |x: f64| {
                let y = x * 1024.0;
                (y.fract() == 0.0).then_some(y as i64)
            };
            let leaves: Option<Vec<i64>> = trace
                .leaf_stats()
                .iter()
                .flatten()
                .map(|l| scaled(l.reward_sum()))
                .collect();
            let direct = scaled(trace.total_reward().value());
            match (leaves, direct) {
                (Some(v), Some(d)) if v.iter().sum::<i64>() == d => {}
                _ => return outcome(false, format!("run {run}: sum form differs from the running total")),
            }
        }
        let mean_form: f64 = trace
            .leaf_stats()
            .iter()
            .flatten()
            .filter_map(|l| l.mean().map(|m| m * l.pulls() as f64))
            .sum();
        if (mean_form - trace.total_reward().value()).abs() > 1e-9 * n as f64 {
            return outcome(false, format!("run {run}: sum of pulls x mean drifts from the total"));
        }
    }
    outcome(
        true,
        format!("{FUZZ_RUNS} fuzzed runs, counts and sum-form totals exact"),
    )
}

/// Exact `P(X − np ≥ c)` and `P(X − np ≤ −c)` for `X ~ Binomial(n, p)`.
fn binomial_tails(n: u64, p: f64, c: f64) -> (f64, f64) {
    let mut pmf = (1.0 - p).powi(n as i32);
    let mean = n as f64 * p;
    let (mut upper, mut lower) = (0.0, 0.0);
    for k in 0..=n {
        let d = k as f64 - mean;
        if d >= c {
            upper += pmf;
        }
        if d <= -c {
            lower += pmf;
        }
        pmf *= (n - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
    }
    (upper, lower)
}

fn criterion_4() -> Outcome {
    let (p, n, eta, xi) = (1.0 / 3.0, 400u64, 0.5, 2.0);
    let zs = [1.0, 2.0, 4.0];
    let rows = hoeffding_tail_grid(p, n, &zs, eta, xi, LEMMA_TRIALS, 4).unwrap();
    let beta_t = lemma_beta_t(xi);
    let mut pass = true;
    let mut parts = Vec::new();
    for (row, &z) in rows.iter().zip(&zs) {
        let bound = (beta_t / z.powf(xi)).min(1.0);
        let (eu, el) = binomial_tails(n, p, (n as f64).powf(eta) * z);
        let within = row.upper_freq <= bound + slack(row.upper_freq, LEMMA_TRIALS)
            && row.lower_freq <= bound + slack(row.lower_freq, LEMMA_TRIALS);
        let agrees = (row.upper_freq - eu).abs() <= slack(eu, LEMMA_TRIALS) + 1.0 / LEMMA_TRIALS as f64
            && (row.lower_freq - el).abs() <= slack(el, LEMMA_TRIALS) + 1.0 / LEMMA_TRIALS as f64;
        pass &= within && agrees;
        parts.push(format!(
            "z={z}: freq {}/{} exact {eu:.4}/{el:.4} bound {bound:.4}",
            row.upper_freq, row.lower_freq
        ));
    }
    outcome(pass, parts.join("; "))
}

fn criterion_5(dir: &Path) -> Outcome {
    let out = dir.join("concentration.csv");
    let trials = THEOREM_TRIALS.to_string();
    let (ok, text) = run_cli(&["concentration", "--seed", "5", "--trials", &trials], &out);
    let (header, rows) = parse_csv(&text);
    if rows.is_empty() {
        return outcome(false, "no output".into());
    }
    let (kind, n_col, up, lo, bound, vac) = (
        column(&header, "kind"),
        column(&header, "n"),
        column(&header, "upper_freq"),
        column(&header, "lower_freq"),
        column(&header, "bound"),
        column(&header, "vacuous"),
    );
    let theorem: Vec<&Vec<String>> = rows.iter().filter(|r| r[kind] == "theorem").collect();
    let f = |s: &str| s.parse::<f64>().unwrap();
    let mut informative = 0;
    let mut violations = 0;
    let mut monotone = true;
    for (i, r) in theorem.iter().enumerate() {
        if r[vac] == "false" {
            informative += 1;
            let b = f(&r[bound]);
            let trials = THEOREM_TRIALS;
            if f(&r[up]) > b + slack(f(&r[up]), trials) || f(&r[lo]) > b + slack(f(&r[lo]), trials) {
                violations += 1;
            }
        }
        if i > 0 && theorem[i - 1][n_col] == r[n_col] {
            let prev = theorem[i - 1];
            monotone &= f(&r[up]) <= f(&prev[up]) && f(&r[lo]) <= f(&prev[lo]);
        }
    }
    outcome(
        ok && informative > 0 && violations == 0 && monotone,
        format!("{informative} non-vacuous cells, {violations} violations, monotone in z: {monotone}"),
    )
}

fn criterion_6() -> Outcome {
    let chain = ChainMdp::new(5, 0.99);
    // The goal sits four steps away, so the search horizon is four.
    let config = SearchConfig::new(CHAIN_SIMULATIONS, 4);
    let mut good = 0;
    let mut worst = 0.0f64;
    for k in 0..CHAIN_SEEDS {
        let r = search(&chain, 0, &config, derive_seed(6, k)).unwrap();
        let err = (r.value - CHAIN_V_STAR).abs();
        worst = worst.max(err);
        if r.action == ChainMove::Right && err <= CHAIN_VALUE_TOL {
            good += 1;
        }
    }
    let rate = good as f64 / CHAIN_SEEDS as f64;
    outcome(
        rate >= CHAIN_SUCCESS_RATE,
        format!("{good}/{CHAIN_SEEDS} seeds optimal and within {CHAIN_VALUE_TOL}, worst error {worst:.4}"),
    )
}

fn criterion_7(dir: &Path) -> Outcome {
    let out = dir.join("return.csv");
    let trials = RETURN_SEEDS.to_string();
    let (ok, text) = run_cli(
        &[
            "return-curve",
            "--seed",
            "7",
            "--trials",
            &trials,
            "--n-grid",
            "1024,4096,16384",
        ],
        &out,
    );
    let (header, rows) = parse_csv(&text);
    if rows.len() != 3 {
        return outcome(false, format!("expected 3 rows, got {}", rows.len()));
    }
    let m = column(&header, "mean_return");
    let means: Vec<f64> = rows.iter().map(|r| r[m].parse().unwrap()).collect();
    let increasing = means.windows(2).all(|w| w[1] > w[0]);
    let low = means[0] >= RETURN_LOW_BAND.0 && means[0] <= RETURN_LOW_BAND.1;
    let high = means[2] >= RETURN_HIGH_BAND.0 && means[2] <= RETURN_HIGH_BAND.1;
    outcome(
        ok && increasing && low && high,
        format!("means {:.4} {:.4} {:.4}", means[0], means[1], means[2]),
    )
}

fn criterion_8(dir: &Path) -> Outcome {
    let fixture = dir.join("oracle.json");
    let (ok_oracle, _) = run_cli(&["oracle"], &fixture);
    let out = dir.join("regret.csv");
    let trials = REGRET_SEEDS.to_string();
    let fixture_arg = fixture.to_string_lossy().to_string();
    let (ok, text) = run_cli(
        &[
            "regret-curve",
            "--seed",
            "8",
            "--trials",
            &trials,
            "--fixture",
            &fixture_arg,
            "--n-grid",
            "1024,4096,16384,65536",
        ],
        &out,
    );
    let (header, rows) = parse_csv(&text);
    if rows.len() != 4 {
        return outcome(false, format!("expected 4 rows, got {}", rows.len()));
    }
    let (m, s) = (column(&header, "mean_regret"), column(&header, "std"));
    let means: Vec<f64> = rows.iter().map(|r| r[m].parse().unwrap()).collect();
    let stds: Vec<f64> = rows.iter().map(|r| r[s].parse().unwrap()).collect();
    let pass = ok_oracle && ok && means[3] <= means[0] && stds[3] < stds[0];
    outcome(
        pass,
        format!(
            "regret {:.4} -> {:.4}, std {:.4} -> {:.4}",
            means[0], means[3], stds[0], stds[3]
        ),
    )
}

fn criterion_9(dir: &Path) -> Outcome {
    let config = dir.join("small.json");
    std::fs::write(&config, r#"{"seed": 9, "trials": 4, "n_grid": [64, 128]}"#).unwrap();
    let config_arg = config.to_string_lossy().to_string();
    let fixture = dir.join("det-oracle.json");
    let fixture_arg = fixture.to_string_lossy().to_string();
    let _ = run_cli(&["oracle"], &fixture);
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("return-curve", vec!["return-curve", "--config", &config_arg]),
        (
            "regret-curve",
            vec!["regret-curve", "--config", &config_arg, "--fixture", &fixture_arg],
        ),
        ("constants", vec!["constants", "--alpha", "4"]),
        (
            "concentration",
            vec![
                "concentration",
                "--seed",
                "9",
                "--trials",
                "50",
                "--hoeffding-trials",
                "200",
            ],
        ),
        ("oracle", vec!["oracle", "--env", "chain"]),
    ];
    let mut differing = Vec::new();
    for (name, args) in &commands {
        let a = dir.join(format!("{name}-a"));
        let b = dir.join(format!("{name}-b"));
        let (ok_a, ta) = run_cli(args, &a);
        let (ok_b, tb) = run_cli(args, &b);
        if !ok_a || !ok_b || ta.is_empty() || std::fs::read(&a).ok() != std::fs::read(&b).ok() || ta != tb {
            differing.push(*name);
        }
    }
    outcome(
        differing.is_empty(),
        if differing.is_empty() {
            format!("{} subcommands byte-identical on re-run", commands.len())
        } else {
            format!("differing or failing: {differing:?}")
        },
    )
}

type Check = Box<dyn Fn() -> Outcome>;

fn main() {
    let dir = scratch();
    let criteria: Vec<(&str, Check)> = vec![
        ("constant formulas", Box::new(criterion_1)),
        ("bonus formula", Box::new(criterion_2)),
        ("counting invariants", Box::new(criterion_3)),
        ("successor-count lemma", Box::new(criterion_4)),
        (
            "root concentration",
            Box::new({
                let d = dir.clone();
                move || criterion_5(&d)
            }),
        ),
        ("chain oracle equivalence", Box::new(criterion_6)),
        (
            "FrozenLake return trend",
            Box::new({
                let d = dir.clone();
                move || criterion_7(&d)
            }),
        ),
        (
            "state-14 regret trend",
            Box::new({
                let d = dir.clone();
                move || criterion_8(&d)
            }),
        ),
        (
            "CLI determinism",
            Box::new({
                let d = dir.clone();
                move || criterion_9(&d)
            }),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "criterion {} [{name}]: {} ({}; {:.1}s)",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    let _ = std::fs::remove_dir_all(&dir);
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
