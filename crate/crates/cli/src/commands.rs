use clap::{Args, Parser, Subcommand};
use num_rational::BigRational;
use robust_orbits::exactlinalg::linalg::solve;
use robust_orbits::exactlinalg::matrix::{to_rat, IntMatrix};
use robust_orbits::exactlinalg::numeric::pow2;
use robust_orbits::kempfness::{kn_minimize, kn_orbit_equal, small_hessian_family, KnProblem};
use robust_orbits::lattices::{
    babai_nearest_plane, cvp_exact_with_guard, lll_reduce, max_enum_dim, sldp, with_max_enum_dim, Backend,
    CvpInstance, CvpSolution, DistanceEstimate, SldpInstance, SldpWitness,
};
use robust_orbits::lifting::{cvp_to_sldp, lift_lattice, CvpReduction, ReductionPolicy};
use robust_orbits::logspace::{linear_form_in_logs, Group};
use robust_orbits::rop::{
    cvp_to_rop_pipeline, reduce_sldp_to_rop, rop_witness_t, solve_rop, Metric, RopInstance, RopTarget, SepBound,
    Setting,
};
use robust_orbits::torus::{orbit_equal_k, orbit_equal_t};
use serde::Serialize;
use serde_json::Value;

use crate::input::{action, field, gaussian_vec, int_vec, load, quotient_point, rat_vec, rational_flag};
use crate::{verify, CliError};

/// Exact orbit-distance and lattice tools for diagonal torus actions.
#[derive(Debug, Parser)]
#[command(name = "robust-orbits", version)]
pub struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Args)]
struct Opts {
    /// Working precision: certified outputs are accurate to 2^-bits.
    #[arg(long, global = true, default_value_t = 128)]
    bits: u64,
    /// Separation bound for the log and Euclidean settings, e.g. 1/1000.
    #[arg(long = "sep-eps", global = true, value_name = "P/Q")]
    sep_eps: Option<String>,
    /// SLDP backend: exact, h or lll.
    #[arg(long, global = true, default_value = "exact")]
    backend: String,
    /// Largest lattice rank the exact enumeration accepts.
    #[arg(long = "max-enum-dim", global = true, value_name = "DIM")]
    max_enum_dim: Option<usize>,
}

/// Positional input: a path, `-` for stdin, or inline JSON.
#[derive(Debug, Args)]
struct InputArg {
    #[arg(value_name = "INPUT")]
    input: String,
}

#[derive(Debug, Args)]
struct SettingArgs {
    /// T (complex torus) or K (compact torus).
    #[arg(long, default_value = "T")]
    group: String,
    /// delta, log or euclid.
    #[arg(long, default_value = "delta")]
    metric: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide equality of T- and K-orbits: {"M", "v", "w"}.
    OrbitEq(InputArg),
    /// Approximate orbit distance: {"M", "p", "q"} for delta, {"M", "v", "w"} otherwise.
    OrbitDist {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        setting: SettingArgs,
        /// Also return a group element realising the estimate (T, log only).
        #[arg(long)]
        witness: bool,
    },
    /// Distance from t + U to Z^n: {"t", "U"}.
    Sldp(InputArg),
    /// Closest vector of the lattice G Z^m to t: {"G", "t"}.
    Cvp(InputArg),
    /// Lift the lattice G Z^m to an orthogonal frame: {"G"}.
    Lift(InputArg),
    /// Polynomial-time reductions between the problems.
    Reduce {
        #[command(subcommand)]
        op: ReduceOp,
    },
    /// Kempf-Ness function tools.
    KempfNess {
        #[command(subcommand)]
        op: KempfNessOp,
    },
    /// Linear form in logarithms sum e_j Log v_j: {"v", "e"}.
    AbcLambda(InputArg),
    /// Run the acceptance suite.
    Verify {
        /// Run only these criteria (1 to 11).
        #[arg(long)]
        only: Vec<u8>,
    },
}

#[derive(Debug, Subcommand)]
enum ReduceOp {
    /// {"G", "t"} to an SLDP instance with the scale s_total.
    CvpToSldp(InputArg),
    /// {"t", "U"} to an orbit-distance instance with its back map.
    SldpToRop {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        setting: SettingArgs,
    },
    /// {"G", "t"} through SLDP to an orbit-distance instance.
    CvpToRop {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        setting: SettingArgs,
    },
}

#[derive(Debug, Subcommand)]
enum KempfNessOp {
    /// Minimise f(x) = log sum q_i exp(w_i . x): {"M", "v"} or {"M", "q"}.
    Solve(InputArg),
    /// Decide orbit-closure equality through the critical points: {"M", "v", "w"}.
    OrbitEq(InputArg),
    /// Report on the family with an exponentially flat minimum.
    #[command(alias = "example63")]
    SmallHessian {
        #[arg(short = 'N', long = "N")]
        n: u64,
    },
}

#[derive(Serialize)]
struct OrbitEq {
    #[serde(rename = "T_equal")]
    t_equal: bool,
    #[serde(rename = "K_equal")]
    k_equal: bool,
}

#[derive(Serialize)]
struct SldpOutput {
    #[serde(flatten)]
    estimate: DistanceEstimate,
    witness: SldpWitness,
}

#[derive(Serialize)]
struct CvpOutput {
    #[serde(flatten)]
    solution: CvpSolution,
    exact: bool,
}

#[derive(Serialize)]
struct CvpToSldpOutput {
    #[serde(with = "robust_orbits::exactlinalg::json::int")]
    s_total: num_bigint::BigInt,
    instance: SldpInstance,
}

impl Opts {
    fn backend(&self) -> Result<Backend, CliError> {
        self.backend.parse().map_err(|e| CliError::Usage(format!("--backend: {e}")))
    }

    fn sep(&self) -> Result<Option<SepBound>, CliError> {
        self.sep_eps
            .as_deref()
            .map(|s| Ok(SepBound::new(rational_flag("sep-eps", s)?)?))
            .transpose()
    }

    fn eps(&self) -> Result<BigRational, CliError> {
        if self.bits == 0 {
            return Err(CliError::Usage("--bits must be positive".into()));
        }
        Ok(pow2(-(self.bits as i64)))
    }
}

impl SettingArgs {
    fn parse(&self) -> Result<Setting, CliError> {
        let group: Group = self.group.parse().map_err(|e| CliError::Usage(format!("--group: {e}")))?;
        let metric: Metric = self.metric.parse().map_err(|e| CliError::Usage(format!("--metric: {e}")))?;
        Ok(Setting::new(group, metric)?)
    }
}

fn json<T: Serialize>(x: &T) -> Result<(i32, Value), CliError> {
    Ok((0, serde_json::to_value(x)?))
}

pub fn execute(cli: &Cli) -> Result<(i32, Value), CliError> {
    match cli.opts.max_enum_dim {
        Some(d) => with_max_enum_dim(d, || dispatch(cli)),
        None => dispatch(cli),
    }
}

fn dispatch(cli: &Cli) -> Result<(i32, Value), CliError> {
    let opts = &cli.opts;
    match &cli.cmd {
        Command::OrbitEq(a) => {
            let obj = load(&a.input)?;
            let act = action(&obj)?;
            let (v, w) = (gaussian_vec(&obj, "v")?, gaussian_vec(&obj, "w")?);
            json(&OrbitEq {
                t_equal: orbit_equal_t(&act, &v, &w)?,
                k_equal: orbit_equal_k(&act, &v, &w)?,
            })
        }
        Command::OrbitDist { input, setting, witness } => orbit_dist(opts, input, setting, *witness),
        Command::Sldp(a) => {
            let inst: SldpInstance = serde_json::from_value(load(&a.input)?)?;
            let (estimate, witness) = sldp(&inst, opts.backend()?, max_enum_dim())?;
            json(&SldpOutput { estimate, witness })
        }
        Command::Cvp(a) => cvp(opts, &a.input),
        Command::Lift(a) => {
            let g: IntMatrix = field(&load(&a.input)?, "G")?;
            json(&lift_lattice(&g)?)
        }
        Command::Reduce { op } => reduce(op),
        Command::KempfNess { op } => kempf_ness(opts, op),
        Command::AbcLambda(a) => {
            let obj = load(&a.input)?;
            let v = gaussian_vec(&obj, "v")?;
            let e = int_vec(&obj, "e")?;
            json(&linear_form_in_logs(&v, &e, &opts.eps()?)?)
        }
        Command::Verify { only } => {
            let reports = verify::run_selected(only);
            let code = if reports.iter().all(|r| r.passed) { 0 } else { 1 };
            Ok((code, serde_json::to_value(&reports)?))
        }
    }
}

fn orbit_dist(opts: &Opts, input: &InputArg, setting: &SettingArgs, witness: bool) -> Result<(i32, Value), CliError> {
    let setting = setting.parse()?;
    let obj = load(&input.input)?;
    let act = action(&obj)?;
    let target = if setting.metric == Metric::Delta {
        if obj.get("p").is_none() {
            return Err(CliError::Usage(
                "the delta metric takes exact log points \"p\" and \"q\" ({\"rho\": [...], \"theta\": [...]})".into(),
            ));
        }
        RopTarget::Points {
            p: quotient_point(&obj, "p")?,
            q: quotient_point(&obj, "q")?,
        }
    } else {
        RopTarget::Vectors {
            v: gaussian_vec(&obj, "v")?,
            w: gaussian_vec(&obj, "w")?,
        }
    };
    let sep = opts.sep()?;
    if witness {
        if setting != Setting::new(Group::T, Metric::Log)? {
            return Err(CliError::Usage("--witness needs --group T --metric log".into()));
        }
        let RopTarget::Vectors { v, w } = &target else { unreachable!("log metric takes vectors") };
        let sep = sep.unwrap_or_else(|| SepBound::default_for(&act, v, w));
        return json(&rop_witness_t(&act, v, w, &sep, opts.backend()?)?);
    }
    let inst = RopInstance {
        action: act,
        setting,
        target,
        sep,
    };
    json(&solve_rop(&inst, opts.backend()?)?)
}

fn cvp(opts: &Opts, input: &str) -> Result<(i32, Value), CliError> {
    let inst: CvpInstance = serde_json::from_value(load(input)?)?;
    match opts.backend()? {
        Backend::Exact => json(&CvpOutput {
            solution: cvp_exact_with_guard(&inst, max_enum_dim())?,
            exact: true,
        }),
        Backend::Lll => {
            let g = to_rat(&inst.g);
            let point = babai_nearest_plane(&lll_reduce(&g)?, &inst.t)?;
            let coeffs = solve(&g, &point)?.into_iter().map(|c| c.to_integer()).collect();
            let dist_sq = inst.t.iter().zip(&point).map(|(a, b)| (a - b) * (a - b)).sum();
            json(&CvpOutput {
                solution: CvpSolution { point, coeffs, dist_sq },
                exact: false,
            })
        }
        Backend::HBased => Err(CliError::Usage("cvp supports the exact and lll backends".into())),
    }
}

fn reduce(op: &ReduceOp) -> Result<(i32, Value), CliError> {
    match op {
        ReduceOp::CvpToSldp(a) => {
            let inst: CvpInstance = serde_json::from_value(load(&a.input)?)?;
            match cvp_to_sldp(&inst, ReductionPolicy::default())? {
                CvpReduction::Reduced { s_total, instance, .. } => json(&CvpToSldpOutput { s_total, instance }),
                CvpReduction::Exact(_) => unreachable!("the default policy always reduces"),
            }
        }
        ReduceOp::SldpToRop { input, setting } => {
            let inst: SldpInstance = serde_json::from_value(load(&input.input)?)?;
            json(&reduce_sldp_to_rop(&inst, setting.parse()?)?)
        }
        ReduceOp::CvpToRop { input, setting } => {
            let inst: CvpInstance = serde_json::from_value(load(&input.input)?)?;
            json(&cvp_to_rop_pipeline(&inst, setting.parse()?)?)
        }
    }
}

fn kempf_ness(opts: &Opts, op: &KempfNessOp) -> Result<(i32, Value), CliError> {
    match op {
        KempfNessOp::Solve(a) => {
            let obj = load(&a.input)?;
            let act = action(&obj)?;
            let problem = if obj.get("q").is_some() {
                KnProblem::new(act, rat_vec(&obj, "q")?)?
            } else {
                KnProblem::from_vector(act, &gaussian_vec(&obj, "v")?)?
            };
            json(&kn_minimize(&problem, &opts.eps()?)?)
        }
        KempfNessOp::OrbitEq(a) => {
            let obj = load(&a.input)?;
            let act = action(&obj)?;
            let (v, w) = (gaussian_vec(&obj, "v")?, gaussian_vec(&obj, "w")?);
            let sep = opts.sep()?.unwrap_or_else(|| SepBound::default_for(&act, &v, &w));
            let mut out = kn_orbit_equal(&act, &v, &w, &sep, opts.backend()?)?;
            out.warnings.extend(sep.warning());
            json(&out)
        }
        KempfNessOp::SmallHessian { n } => json(&small_hessian_family(*n)?),
    }
}
