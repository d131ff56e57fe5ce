//! game, sweep, xor and repro.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use shallow_core::classical::{
    affine_optimum, best_affine_strategy, check_constrained_bound, constrained_game_max, exact_local_success,
    hill_climb, Exact, GameConstraints, LocalProblem, ParityGroup,
};
use shallow_core::f2lin::F2Vector;
use shallow_core::formats::Strategy;
use shallow_core::problems::PbpInput;
use shallow_core::qsim::statevector_pbp;
use shallow_core::report::{format_float, format_ratio};
use shallow_core::repro::{constrained_configurations, run_criterion, CRITERIA, DEFAULT_SEED};
use shallow_core::seeding::task_rng;
use shallow_core::xorlab::{
    all_subset_biases, collect_win_indicators, nonzero_characters, vazirani_checks, write_bias_csv,
    write_character_csv, z3_character_bias, z3_distance_bound, ParallelGame, Player,
};

use crate::output::{read, sink};
use crate::{Common, Format, Outcome};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameMode {
    /// Best affine strategy by exhaustive search over all 2^{n+1}.
    AffineExhaustive,
    /// Closed-form affine optimum.
    AffineOptimum,
    /// Best affine strategy under --fixed and --group constraints.
    Constrained,
    /// Exact value of the local strategy in --strategy.
    Local,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum GameProblem {
    Halving,
    Bending,
}

impl From<GameProblem> for LocalProblem {
    fn from(p: GameProblem) -> Self {
        match p {
            GameProblem::Halving => LocalProblem::ParityHalving,
            GameProblem::Bending => LocalProblem::ParityBending,
        }
    }
}

#[derive(Args, Debug)]
pub struct GameArgs {
    #[arg(long, value_enum)]
    mode: GameMode,
    /// Number of players.
    #[arg(short, long)]
    n: Option<usize>,
    /// A fixed input, `player=bit`; repeatable.
    #[arg(long, value_parser = parse_fixed)]
    fixed: Vec<(usize, bool)>,
    /// A parity group, `i,j,...=parity`; repeatable.
    #[arg(long, value_parser = parse_group)]
    group: Vec<ParityGroup>,
    /// Local strategy JSON.
    #[arg(long)]
    strategy: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "halving")]
    problem: GameProblem,
}

fn parse_bit(s: &str) -> std::result::Result<bool, String> {
    match s.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("{other:?} is not 0 or 1")),
    }
}

fn parse_fixed(s: &str) -> std::result::Result<(usize, bool), String> {
    let (i, b) = s.split_once('=').ok_or("expected player=bit")?;
    Ok((i.trim().parse().map_err(|_| format!("bad player {i:?}"))?, parse_bit(b)?))
}

fn parse_group(s: &str) -> std::result::Result<ParityGroup, String> {
    let (members, parity) = s.split_once('=').ok_or("expected i,j,...=parity")?;
    let members = members
        .split(',')
        .map(|m| m.trim().parse().map_err(|_| format!("bad player {m:?}")))
        .collect::<std::result::Result<_, _>>()?;
    Ok(ParityGroup {
        members,
        parity: parse_bit(parity)?,
    })
}

fn decimal(v: &Exact) -> String {
    format_float(*v.numer() as f64 / *v.denom() as f64)
}

/// Writes `header` and `row` as CSV, or as one JSON object.
fn emit(common: &Common, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut out = sink(common.out.as_deref())?;
    match common.format_or(Format::Csv) {
        Format::Csv => {
            writeln!(out, "{}", header.join(","))?;
            for r in rows {
                writeln!(out, "{}", r.join(","))?;
            }
        }
        Format::Json => {
            let objects: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| {
                    header
                        .iter()
                        .zip(r)
                        .map(|(h, v)| (h.to_string(), serde_json::Value::String(v.clone())))
                        .collect()
                })
                .collect();
            let value = if objects.len() == 1 {
                serde_json::Value::Object(objects[0].clone())
            } else {
                serde_json::Value::Array(objects.into_iter().map(serde_json::Value::Object).collect())
            };
            writeln!(out, "{value}")?;
        }
    }
    Ok(())
}

pub fn game(common: &Common, args: GameArgs) -> Result<Outcome> {
    let n_flag = || args.n.context("this mode needs -n");
    match args.mode {
        GameMode::AffineExhaustive => {
            let n = n_flag()?;
            let (s, v) = best_affine_strategy(n)?;
            emit(
                common,
                &["n", "value", "decimal", "a", "b"],
                &[vec![n.to_string(), format_ratio(&v), decimal(&v), u8::from(s.a).to_string(), s.b.to_hex()]],
            )?;
        }
        GameMode::AffineOptimum => {
            let n = n_flag()?;
            let v = affine_optimum(n);
            emit(common, &["n", "value", "decimal"], &[vec![n.to_string(), format_ratio(&v), decimal(&v)]])?;
        }
        GameMode::Constrained => {
            let n = n_flag()?;
            let fixed: BTreeMap<usize, bool> = args.fixed.iter().copied().collect();
            if fixed.len() != args.fixed.len() {
                bail!("a player is fixed twice");
            }
            let c = GameConstraints::new(n, fixed, args.group.clone())?;
            let (s, v) = constrained_game_max(n, &c)?;
            let check = check_constrained_bound(v, n, c.fixed_count(), c.group_count(), 0);
            emit(
                common,
                &["n", "d1", "d2", "value", "decimal", "bound_holds", "slack_log2", "a", "b"],
                &[vec![
                    n.to_string(),
                    c.fixed_count().to_string(),
                    c.group_count().to_string(),
                    format_ratio(&v),
                    decimal(&v),
                    check.holds.to_string(),
                    format_float(check.slack_log2),
                    u8::from(s.a).to_string(),
                    s.b.to_hex(),
                ]],
            )?;
        }
        GameMode::Local => {
            let path = args.strategy.as_ref().context("local mode needs --strategy")?;
            let Strategy::Local(s) = Strategy::from_json(&read(path)?)? else {
                bail!("--strategy is not a local strategy");
            };
            let v = exact_local_success(&s, args.problem.into())?;
            emit(
                common,
                &["n", "m", "locality", "value", "decimal"],
                &[vec![
                    s.inputs().to_string(),
                    s.outputs().to_string(),
                    s.locality().to_string(),
                    format_ratio(&v),
                    decimal(&v),
                ]],
            )?;
        }
    }
    Ok(Outcome::Done)
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepGrid {
    /// Affine optimum for every n in range, exhaustive and closed form.
    Affine,
    /// Constrained-game maxima over the fixed/group configuration grid.
    Constrained,
    /// Statevector PBP success for each weight residue.
    Pbp,
    /// Hill-climbed local strategies (heuristic lower bounds only).
    LocalSearch,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    grid: SweepGrid,
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Locality for the local search.
    #[arg(long, default_value_t = 2)]
    locality: usize,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, value_enum, default_value = "halving")]
    problem: GameProblem,
}

fn bit_string(bits: impl Iterator<Item = bool>) -> String {
    bits.map(|b| if b { '1' } else { '0' }).collect()
}

pub fn sweep(common: &Common, args: SweepArgs) -> Result<Outcome> {
    if args.n_min > args.n_max {
        bail!("--n-min exceeds --n-max");
    }
    let range = args.n_min..=args.n_max;
    match args.grid {
        SweepGrid::Affine => {
            let mut rows = Vec::new();
            for n in range {
                let (_, v) = best_affine_strategy(n)?;
                rows.push(vec![n.to_string(), format_ratio(&v), decimal(&v), format_ratio(&affine_optimum(n))]);
            }
            emit(common, &["n", "value", "decimal", "closed_form"], &rows)?;
        }
        SweepGrid::Constrained => {
            let mut rows = Vec::new();
            for (n, d1, d2, c) in constrained_configurations() {
                if !range.contains(&n) {
                    continue;
                }
                let (_, v) = constrained_game_max(n, &c)?;
                let check = check_constrained_bound(v, n, d1, d2, 0);
                rows.push(vec![
                    n.to_string(),
                    d1.to_string(),
                    d2.to_string(),
                    bit_string(c.fixed().values().copied()),
                    bit_string(c.groups().iter().map(|g| g.parity)),
                    format_ratio(&v),
                    decimal(&v),
                    check.holds.to_string(),
                    format_float(check.slack_log2),
                ]);
            }
            emit(
                common,
                &["n", "d1", "d2", "fixed", "parities", "value", "decimal", "bound_holds", "slack_log2"],
                &rows,
            )?;
        }
        SweepGrid::Pbp => {
            let mut rows = Vec::new();
            for n in range {
                for residue in 0..3usize.min(n + 1) {
                    let x = F2Vector::from_bits((0..n).map(|i| i < residue));
                    let p = statevector_pbp(&PbpInput::Bits(x))?;
                    rows.push(vec![n.to_string(), residue.to_string(), format_float(p)]);
                }
            }
            emit(common, &["n", "weight_mod3", "success"], &rows)?;
        }
        SweepGrid::LocalSearch => {
            let seed = common.seed()?;
            let mut rows = Vec::new();
            for (i, n) in range.enumerate() {
                let mut rng = task_rng(seed, i as u64);
                let (_, v) =
                    hill_climb(n, n, args.locality.min(n), args.problem.into(), args.restarts, args.steps, &mut rng)?;
                rows.push(vec![
                    n.to_string(),
                    args.locality.min(n).to_string(),
                    format_ratio(&v),
                    decimal(&v),
                    format_ratio(&affine_optimum(n)),
                ]);
            }
            emit(common, &["n", "locality", "best_found", "decimal", "affine_optimum"], &rows)?;
        }
    }
    Ok(Outcome::Done)
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum XorGame {
    Halving,
    Bending,
    Mod3,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum XorPlayer {
    Quantum,
    /// Best affine strategy in every copy (halving only).
    Affine,
    /// The local strategy in --strategy in every copy.
    Local,
    Zero,
}

#[derive(Args, Debug)]
pub struct XorArgs {
    #[arg(long, value_enum)]
    game: XorGame,
    /// Number of parallel copies.
    #[arg(short, long)]
    k: usize,
    /// Inputs per copy.
    #[arg(short, long)]
    n: usize,
    #[arg(long, value_enum)]
    player: XorPlayer,
    #[arg(long)]
    strategy: Option<PathBuf>,
}

pub fn xor(common: &Common, args: XorArgs) -> Result<Outcome> {
    let seed = common.seed()?;
    let samples = common.samples_or(100_000)?;
    let (k, n) = (args.k, args.n);
    let game = match args.game {
        XorGame::Halving => ParallelGame::ParityHalving { k, n },
        XorGame::Bending => ParallelGame::ParityBending { k, n },
        XorGame::Mod3 => ParallelGame::Mod3 { k, n },
    };
    let player = match args.player {
        XorPlayer::Quantum => Player::Quantum,
        XorPlayer::Zero => Player::Zero,
        XorPlayer::Affine => Player::Affine(vec![best_affine_strategy(n)?.0; k]),
        XorPlayer::Local => {
            let path = args.strategy.as_ref().context("--player local needs --strategy")?;
            let Strategy::Local(s) = Strategy::from_json(&read(path)?)? else {
                bail!("--strategy is not a local strategy");
            };
            Player::Local(vec![s; k])
        }
    };
    let s = collect_win_indicators(&game, &player, samples, &mut task_rng(seed, 0))?;
    let out = sink(common.out.as_deref())?;
    if args.game == XorGame::Mod3 {
        let rows = nonzero_characters(k)
            .into_iter()
            .map(|a| Ok((a.clone(), z3_character_bias(&s, &a)?)))
            .collect::<Result<Vec<_>>>()?;
        write_character_csv(out, &rows)?;
        let eps = rows.iter().map(|(_, c)| c.mean.norm()).fold(0.0, f64::max);
        eprintln!(
            "samples {samples}; max |character| {}; distance bound {}",
            format_float(eps),
            format_float(z3_distance_bound(eps, k))
        );
    } else {
        let biases = all_subset_biases(&s)?;
        write_bias_csv(out, &biases)?;
        let r = vazirani_checks(&s, &biases)?;
        eprintln!(
            "samples {samples}; epsilon {}; Pr[all win] {} +- {}; bound 2^-k + epsilon = {}",
            format_float(r.epsilon),
            format_float(r.empirical_all_win),
            format_float(r.all_win_stderr),
            format_float(r.all_win_bound)
        );
    }
    Ok(Outcome::Done)
}

#[derive(Args, Debug)]
pub struct ReproArgs {
    /// Run only these criteria (1-12).
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
}

pub fn repro(common: &Common, args: ReproArgs) -> Result<Outcome> {
    let seed = common.seed.unwrap_or(DEFAULT_SEED);
    let ids: Vec<u8> = if args.only.is_empty() {
        CRITERIA.iter().map(|(id, _)| *id).collect()
    } else {
        args.only.clone()
    };
    let mut out = sink(common.out.as_deref())?;
    let mut all = true;
    let csv = common.format == Some(Format::Csv);
    if csv {
        writeln!(out, "id,name,passed,seconds,detail")?;
    }
    for id in ids {
        let o = run_criterion(id, seed)?;
        all &= o.passed;
        if csv {
            writeln!(
                out,
                "{},{},{},{},\"{}\"",
                o.id,
                o.name,
                o.passed,
                format_float(o.elapsed.as_secs_f64()),
                o.detail.replace('"', "'")
            )?;
        } else {
            writeln!(out, "{o}")?;
        }
        out.flush()?;
    }
    Ok(if all { Outcome::Done } else { Outcome::Rejected })
}
