//! gen, solve, verify and reduce.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};

use shallow_core::classical::{best_affine_strategy, self_reduce_mod3};
use shallow_core::f2lin::{F2Matrix, F2Vector, Z4Vector};
use shallow_core::formats::{embedding_from_json, embedding_to_json, verify as check, Instance, Solution, Strategy};
use shallow_core::graphs::{grid_spanning_tree, Graph};
use shallow_core::problems::{
    gen_even_parity_input, gen_trit_input, half_weight_parity, HlfInstance, PbpInput, PhpInstance, RphpInstance,
    WinFraction,
};
use shallow_core::qsim::{sample_pbp, sample_php_cat, sample_rphp};
use shallow_core::reductions::{
    direct_sum_hlf, hlf_solution_to_rphp, rphp_to_hlf, rphp_to_hlf_on_grid, solve_hlf_reference, HlfEmbedding,
};
use shallow_core::seeding::{task_rng, TaskRng};
use shallow_core::xorlab::parity_to_mod3;

use crate::output::{read, sink};
use crate::{Common, Format, Outcome};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Problem {
    Php,
    Rphp,
    Hlf,
    Pbp,
    Parallel,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputAlphabet {
    Binary,
    Ternary,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    /// Input size (PHP, HLF, PBP).
    #[arg(short, long)]
    n: Option<usize>,
    /// PHP output count; defaults to n.
    #[arg(short, long)]
    m: Option<usize>,
    /// Grid width for RPHP on the grid spanning tree.
    #[arg(long)]
    width: Option<usize>,
    /// Grid height; defaults to the width.
    #[arg(long)]
    height: Option<usize>,
    /// RPHP on an explicit graph (JSON `{"vertices": N, "edges": [[u, v], ...]}`).
    #[arg(long, conflicts_with_all = ["width", "height"])]
    graph: Option<PathBuf>,
    /// PBP input alphabet.
    #[arg(long, value_enum, default_value = "ternary")]
    alphabet: InputAlphabet,
    /// Problem of each parallel copy.
    #[arg(long, value_enum)]
    copy: Option<Problem>,
    /// Number of parallel copies.
    #[arg(short, long)]
    k: Option<usize>,
    /// Required fraction of solved copies, as p/q.
    #[arg(long)]
    win_fraction: Option<WinFraction>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    /// Exact samples from the shallow quantum circuits.
    Quantum,
    /// Polynomial-time classical solver with full input access.
    Reference,
    /// Affine non-communicating strategy (PHP with m = n).
    Affine,
    /// Local lookup-table strategy given by --strategy.
    Local,
    /// Random self-reduction wrapped around the quantum PBP answer.
    SelfReducedMod3,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum)]
    solver: Solver,
    /// Strategy JSON for the affine and local solvers; affine defaults to
    /// the best affine strategy.
    #[arg(long)]
    strategy: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Args, Debug)]
pub struct ReduceArgs {
    /// RPHP instance to reduce, or HLF instances with --direct-sum.
    #[arg(long, num_args = 1..)]
    instance: Vec<PathBuf>,
    /// Grid dimensions of the RPHP graph; adds 2D coordinates.
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    /// Where the embedding JSON goes (reduce) or comes from (--lift).
    /// Without it, reduce prints the embedding as a second line.
    #[arg(long)]
    embedding: Option<PathBuf>,
    /// Sum the given HLF instances block-diagonally.
    #[arg(long)]
    direct_sum: bool,
    /// Map the HLF solution in --solution back to an RPHP solution.
    #[arg(long, requires_all = ["embedding", "solution"])]
    lift: bool,
    #[arg(long)]
    solution: Option<PathBuf>,
}

fn need(v: Option<usize>, flag: &str, problem: &str) -> Result<usize> {
    v.with_context(|| format!("{problem} needs {flag}"))
}

fn gen_one(args: &GenArgs, problem: Problem, rng: &mut TaskRng) -> Result<Instance> {
    Ok(match problem {
        Problem::Php => {
            let n = need(args.n, "-n", "php")?;
            Instance::Php(PhpInstance::new(gen_even_parity_input(n, rng)?, args.m.unwrap_or(n))?)
        }
        Problem::Rphp => {
            let graph = match &args.graph {
                Some(p) => serde_json::from_str::<Graph>(&read(p)?).context("malformed graph JSON")?,
                None => {
                    let w = need(args.width, "--width", "rphp")?;
                    grid_spanning_tree(w, args.height.unwrap_or(w))?
                }
            };
            let x = gen_even_parity_input(graph.vertex_count(), rng)?;
            Instance::Rphp(RphpInstance::new(graph, x)?)
        }
        Problem::Hlf => Instance::Hlf(HlfInstance::random(need(args.n, "-n", "hlf")?, rng)),
        Problem::Pbp => {
            let n = need(args.n, "-n", "pbp")?;
            Instance::Pbp(match args.alphabet {
                InputAlphabet::Binary => PbpInput::Bits(F2Vector::random(n, rng)),
                InputAlphabet::Ternary => PbpInput::Trits(gen_trit_input(n, rng)),
            })
        }
        Problem::Parallel => bail!("parallel copies cannot themselves be parallel"),
    })
}

pub fn gen(common: &Common, args: GenArgs) -> Result<Outcome> {
    let seed = common.seed()?;
    let inst = if args.problem == Problem::Parallel {
        let copy = args.copy.context("parallel needs --copy")?;
        let k = need(args.k, "-k", "parallel")?;
        let fraction = args.win_fraction.unwrap_or(match (copy, args.alphabet) {
            (Problem::Pbp, InputAlphabet::Binary) => WinFraction::PARALLEL_PBP,
            (Problem::Pbp, InputAlphabet::Ternary) => WinFraction::PARALLEL_MOD3,
            _ => WinFraction::ALL,
        });
        let copies = (0..k)
            .map(|i| gen_one(&args, copy, &mut task_rng(seed, i as u64)))
            .collect::<Result<Vec<_>>>()?;
        Instance::parallel(copies, fraction)?
    } else {
        if args.win_fraction.is_some() || args.k.is_some() || args.copy.is_some() {
            bail!("-k, --copy and --win-fraction only apply to parallel instances");
        }
        gen_one(&args, args.problem, &mut task_rng(seed, 0))?
    };
    let mut out = sink(common.out.as_deref())?;
    writeln!(out, "{}", inst.to_json())?;
    Ok(Outcome::Done)
}

/// What a solver may consult besides the instance.
struct SolverContext {
    solver: Solver,
    strategy: Option<Strategy>,
}

fn solve_one(ctx: &SolverContext, inst: &Instance, rng: &mut TaskRng, inner: &mut TaskRng) -> Result<Solution> {
    let sol = match (ctx.solver, inst) {
        (_, Instance::Parallel(p)) => Solution::Parallel {
            outputs: p
                .instances()
                .iter()
                .map(|copy| solve_one(ctx, copy, rng, inner))
                .collect::<Result<_>>()?,
        },
        (Solver::Quantum, Instance::Php(p)) => {
            let sol = Solution::Php {
                y: sample_php_cat(p.x(), p.m(), rng)?,
            };
            assert!(check(inst, &sol)?, "quantum PHP sample failed verification");
            sol
        }
        (Solver::Quantum, Instance::Rphp(r)) => {
            let s = sample_rphp(r.graph(), r.x(), rng)?;
            let sol = Solution::Rphp {
                y: s.y,
                d: s.d.expect("relaxed samples carry d"),
            };
            assert!(check(inst, &sol)?, "quantum RPHP sample failed verification");
            sol
        }
        (Solver::Quantum, Instance::Pbp(x)) => Solution::Pbp { y: sample_pbp(x, rng)? },
        (Solver::Quantum, Instance::Hlf(_)) => {
            bail!("no quantum sampler for general HLF instances; use --solver reference")
        }
        (Solver::Reference, Instance::Hlf(h)) => Solution::Hlf {
            p: solve_hlf_reference(h)?,
        },
        (Solver::Reference, Instance::Rphp(r)) => {
            let (h, emb) = rphp_to_hlf(r);
            let (y, d) = hlf_solution_to_rphp(&solve_hlf_reference(&h)?, &emb)?;
            Solution::Rphp { y, d }
        }
        (Solver::Reference, Instance::Php(p)) => {
            let mut y = F2Vector::zeros(p.m());
            y.set(0, half_weight_parity(p.x()));
            Solution::Php { y }
        }
        (Solver::Affine, Instance::Php(p)) => {
            if p.m() != p.n() {
                bail!("affine strategies answer PHP with m = n, got m = {}", p.m());
            }
            let s = match &ctx.strategy {
                Some(Strategy::Affine(s)) => s.clone(),
                Some(_) => bail!("--strategy is not an affine strategy"),
                None => best_affine_strategy(p.n())?.0,
            };
            if s.n() != p.n() {
                bail!("strategy has {} players, instance has {}", s.n(), p.n());
            }
            Solution::Php { y: s.outputs(p.x()) }
        }
        (Solver::Local, Instance::Php(_) | Instance::Pbp(PbpInput::Bits(_))) => {
            let Some(Strategy::Local(s)) = &ctx.strategy else {
                bail!("the local solver needs a local --strategy");
            };
            match inst {
                Instance::Php(p) => Solution::Php { y: s.evaluate(p.x())? },
                Instance::Pbp(PbpInput::Bits(x)) => Solution::Pbp { y: s.evaluate(x)? },
                _ => unreachable!(),
            }
        }
        (Solver::SelfReducedMod3, Instance::Pbp(x)) => {
            let trits = match x {
                PbpInput::Trits(t) => t.clone(),
                PbpInput::Bits(b) => shallow_core::problems::TritVector::from_bits(b),
            };
            let value = self_reduce_mod3(
                |y| {
                    let bits = sample_pbp(y, inner).expect("trit input");
                    parity_to_mod3(&bits, inner)
                },
                &trits,
                rng,
            );
            Solution::Mod3 { value }
        }
        (solver, _) => bail!(
            "solver {} does not handle {} instances",
            solver.to_possible_value().expect("named").get_name(),
            inst.kind()
        ),
    };
    Ok(sol)
}

pub fn solve(common: &Common, args: SolveArgs) -> Result<Outcome> {
    let inst = Instance::from_json(&read(&args.instance)?)?;
    let strategy = args.strategy.as_ref().map(|p| -> Result<Strategy> { Ok(Strategy::from_json(&read(p)?)?) }).transpose()?;
    let ctx = SolverContext {
        solver: args.solver,
        strategy,
    };
    let deterministic = matches!(args.solver, Solver::Reference | Solver::Affine | Solver::Local);
    let seed = if deterministic { common.seed.unwrap_or(0) } else { common.seed()? };
    let samples = common.samples_or(1)?;
    let stream = samples > 1 && common.format != Some(Format::Json);
    let mut out = sink(common.out.as_deref())?;
    for i in 0..samples as u64 {
        let mut rng = task_rng(seed, 2 * i);
        let mut inner = task_rng(seed, 2 * i + 1);
        let sol = solve_one(&ctx, &inst, &mut rng, &mut inner)?;
        if stream {
            writeln!(out, "{}", sol.record())?;
        } else {
            writeln!(out, "{}", sol.to_json())?;
        }
    }
    Ok(Outcome::Done)
}

pub fn verify(common: &Common, args: VerifyArgs) -> Result<Outcome> {
    let inst = Instance::from_json(&read(&args.instance)?)?;
    let sol = Solution::from_json(read(&args.solution)?.trim(), &inst)?;
    let ok = check(&inst, &sol)?;
    let mut out = sink(common.out.as_deref())?;
    writeln!(out, "{}", if ok { "PASS" } else { "FAIL" })?;
    Ok(if ok { Outcome::Done } else { Outcome::Rejected })
}

fn read_instance(p: &Path) -> Result<Instance> {
    Instance::from_json(&read(p)?).with_context(|| format!("in {}", p.display()))
}

pub fn reduce(common: &Common, args: ReduceArgs) -> Result<Outcome> {
    let mut out = sink(common.out.as_deref())?;
    if args.lift {
        let emb = embedding_from_json(&read(args.embedding.as_ref().expect("required"))?)?;
        let n = emb.dimension();
        let shape = Instance::Hlf(HlfInstance::new(F2Matrix::zeros(n, n), Z4Vector::zeros(n))?);
        let sol = Solution::from_json(read(args.solution.as_ref().expect("required"))?.trim(), &shape)?;
        let Solution::Hlf { p } = sol else { unreachable!() };
        let (y, d) = hlf_solution_to_rphp(&p, &emb)?;
        writeln!(out, "{}", Solution::Rphp { y, d }.to_json())?;
        return Ok(Outcome::Done);
    }
    if args.direct_sum {
        let parts = args
            .instance
            .iter()
            .map(|p| match read_instance(p)? {
                Instance::Hlf(h) => Ok(h),
                other => bail!("{} is a {} instance, not hlf", p.display(), other.kind()),
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.is_empty() {
            bail!("--direct-sum needs at least one --instance");
        }
        writeln!(out, "{}", Instance::Hlf(direct_sum_hlf(&parts)).to_json())?;
        return Ok(Outcome::Done);
    }
    let [path] = args.instance.as_slice() else {
        bail!("reduce takes one RPHP --instance");
    };
    let Instance::Rphp(r) = read_instance(path)? else {
        bail!("reduce expects an rphp instance");
    };
    let (hlf, emb): (HlfInstance, HlfEmbedding) = match (args.width, args.height) {
        (Some(w), h) => rphp_to_hlf_on_grid(&r, w, h.unwrap_or(w))?,
        (None, None) => rphp_to_hlf(&r),
        (None, Some(_)) => bail!("--height needs --width"),
    };
    writeln!(out, "{}", Instance::Hlf(hlf).to_json())?;
    match &args.embedding {
        Some(p) => {
            let mut e = sink(Some(p))?;
            writeln!(e, "{}", embedding_to_json(&emb))?;
        }
        None => writeln!(out, "{}", embedding_to_json(&emb))?,
    }
    Ok(Outcome::Done)
}
