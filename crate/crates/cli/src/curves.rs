//! Return and regret curves over a grid of simulation counts.

use std::path::PathBuf;

use polyuct::harness::{derive_seed, map_trials, Summary};
use polyuct::mcts::{run_episode, search, SearchConfig};
use polyuct::policy::ExplorationParams;

use crate::config::{check_n_grid, check_trials, pick, powers_of_two, AlphaChoice, FileConfig};
use crate::envs::Env;
use crate::oracle::Fixture;
use crate::{csv_line, fmt_f64, with_env, CliError, Common, EnvArgs, Report, SearchArgs, DEFAULT_SEED};

pub const RETURN_HEADER: &str = "n,trials,mean_return,std,stderr";
pub const REGRET_HEADER: &str = "n,trials,state,action,mu_star,mean_regret,std,stderr";
pub const DEFAULT_RETURN_TRIALS: u64 = 300;
pub const DEFAULT_REGRET_TRIALS: u64 = 10;
pub const DEFAULT_FIXTURE: &str = "oracle.json";

fn exploration_params(args: &SearchArgs, file: &FileConfig) -> Result<ExplorationParams, CliError> {
    let practical = ExplorationParams::practical();
    let alpha = match (args.alpha, file.alpha) {
        (Some(a), _) => a,
        (None, Some(AlphaChoice::Value(a))) => a,
        (None, Some(AlphaChoice::Auto)) => {
            return Err(CliError::Config(
                "alpha = auto is only meaningful for `constants`".into(),
            ))
        }
        (None, None) => practical.alpha,
    };
    Ok(ExplorationParams::new(
        alpha,
        pick(args.beta, file.beta, practical.beta),
        pick(args.xi, file.xi, practical.xi),
        pick(args.eta, file.eta, practical.eta),
    ))
}

struct Resolved {
    env: Env,
    grid: Vec<u64>,
    trials: u64,
    seed: u64,
    base: SearchConfig,
}

fn resolve(
    common: &Common,
    env_args: &EnvArgs,
    search_args: &SearchArgs,
    file: &FileConfig,
    default_grid: Vec<u64>,
    default_trials: u64,
) -> Result<Resolved, CliError> {
    let env = Env::from_args(env_args, file)?;
    let grid = pick(search_args.n_grid.clone(), file.n_grid.clone(), default_grid);
    check_n_grid(&grid)?;
    let trials = pick(common.trials, file.trials, default_trials);
    check_trials(trials)?;
    let max_depth = pick(search_args.max_depth, file.max_depth, env.default_horizon());
    let base = SearchConfig::new(1, max_depth).with_params(exploration_params(search_args, file)?);
    base.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(Resolved {
        env,
        grid,
        trials,
        seed: pick(common.seed, file.seed, DEFAULT_SEED),
        base,
    })
}

/// Mean discounted return of `trials` episodes per grid point.
pub fn return_curve(
    common: &Common,
    env_args: &EnvArgs,
    search_args: &SearchArgs,
    file: &FileConfig,
) -> Result<Report, CliError> {
    let r = resolve(
        common,
        env_args,
        search_args,
        file,
        powers_of_two(10, 14),
        DEFAULT_RETURN_TRIALS,
    )?;
    let mut text = format!("{RETURN_HEADER}\n");
    for &n in &r.grid {
        let config = SearchConfig {
            simulations: n,
            ..r.base
        };
        let outcomes =
            with_env!(&r.env, m => map_trials(r.trials, derive_seed(r.seed, n), |s| run_episode(m, &config, s)));
        let returns = outcomes
            .into_iter()
            .map(|o| o.map(|e| e.discounted_return))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| CliError::Run(e.to_string()))?;
        let s = Summary::of(&returns);
        text.push_str(&csv_line(&[
            n.to_string(),
            r.trials.to_string(),
            fmt_f64(s.mean),
            fmt_f64(s.std),
            fmt_f64(s.stderr),
        ]));
    }
    Ok(Report::ok(text))
}

/// Regret `μ_{i*} − X̄_{i*,n}` of fresh searches from one state.
pub fn regret_curve(
    common: &Common,
    env_args: &EnvArgs,
    search_args: &SearchArgs,
    fixture: Option<PathBuf>,
    state: Option<usize>,
    file: &FileConfig,
) -> Result<Report, CliError> {
    let r = resolve(
        common,
        env_args,
        search_args,
        file,
        powers_of_two(10, 20),
        DEFAULT_REGRET_TRIALS,
    )?;
    let fixture_path = fixture
        .or_else(|| file.fixture.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_FIXTURE));
    let fixture = Fixture::load(&fixture_path)?;
    if fixture.env != r.env.descriptor() {
        return Err(CliError::Config(format!(
            "fixture {} was computed for {:?}, not {:?}",
            fixture_path.display(),
            fixture.env,
            r.env.descriptor()
        )));
    }
    let state = pick(state, file.state, r.env.default_regret_state());
    if state >= r.env.state_count() {
        return Err(CliError::Config(format!("state {state} is out of range")));
    }
    let values = fixture
        .states
        .get(&state)
        .ok_or_else(|| CliError::Config(format!("fixture has no entry for state {state}")))?;
    let best = values
        .best_action
        .ok_or_else(|| CliError::Config(format!("state {state} is terminal")))?;
    let mu_star = values.q[best];

    let mut text = format!("{REGRET_HEADER}\n");
    for &n in &r.grid {
        let config = SearchConfig {
            simulations: n,
            ..r.base
        };
        let regrets = with_env!(&r.env, m => map_trials(r.trials, derive_seed(r.seed, n), |s| {
            search(m, state, &config, s).map(|res| mu_star - res.root_stats[best].mean().unwrap_or(0.0))
        }))
        .into_iter()
        .collect::<Result<Vec<f64>, _>>()
        .map_err(|e| CliError::Run(e.to_string()))?;
        let s = Summary::of(&regrets);
        text.push_str(&csv_line(&[
            n.to_string(),
            r.trials.to_string(),
            state.to_string(),
            values.actions[best].clone(),
            fmt_f64(mu_star),
            fmt_f64(s.mean),
            fmt_f64(s.std),
            fmt_f64(s.stderr),
        ]));
    }
    Ok(Report::ok(text))
}
