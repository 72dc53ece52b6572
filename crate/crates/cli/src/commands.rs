use crate::config::{parse_b, parse_b_list, parse_num, ConfigFile};
use crate::error::{CliError, CliResult};
use crate::record::{read_csv, write_csv, SweepRecord};
use clap::{Args, Parser, Subcommand};
use magpol_core::certificate::{certify_p0, conditional_full_bound, default_cutoff_k, default_params, LowerBoundCertificate};
use magpol_core::coulomb::decompose;
use magpol_core::oned::{closed_form_energy, distance_to_orbit, sech_profile, solve_numeric, OneDProblem};
use magpol_core::pekar::{fit_asymptotics, pekar_minimize, sweep, trial_energy, trial_state, GridPolicy, PhysParams};
use magpol_core::Grid1D;
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const THREADS_ENV: &str = "MAGPOL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "magpol", version, about = "Magnetopolaron energies, decompositions and lower-bound certificates")]
pub struct Cli {
    /// Plain-text `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps (overrides MAGPOL_THREADS).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Effective 1D problem: closed form against the numerical minimizer.
    Oned(OnedArgs),
    /// Minimize the product-ansatz Pekar functional.
    Minimize(StateArgs),
    /// Energy of the sech trial state.
    Trial(StateArgs),
    /// Minimize over a list of B values and write CSV.
    Sweep(SweepArgs),
    /// Fit E - B = -c2 X² + c3 X ln X + c4 X to a sweep CSV.
    Fit(FitArgs),
    /// Coulomb decomposition ledger for the minimizer.
    Decompose(StateArgs),
    /// Lower-bound certificate with its constants ledger.
    Certify(CertifyArgs),
    /// Run the invariant suite.
    Verify,
}

#[derive(Debug, Args)]
pub struct OnedArgs {
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "T")]
    pub half_width: Option<f64>,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Field strength; `eN` means e^N.
    #[arg(long = "B", value_parser = parse_b)]
    pub b: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Base half-width before scaling by α ln B / 4.
    #[arg(long = "T")]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct BList(pub Vec<f64>);

fn parse_b_values(s: &str) -> Result<BList, String> {
    parse_b_list(s).map(BList)
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated B values, e.g. `e10,e12,e14`.
    #[arg(long = "B", value_parser = parse_b_values)]
    pub b: Option<BList>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "T")]
    pub half_width: Option<f64>,
    /// Also fill `cert_bound` with the certified lower bound.
    #[arg(long)]
    pub certify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long = "B", value_parser = parse_b)]
    pub b: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "K")]
    pub k: Option<f64>,
    #[arg(long = "K3")]
    pub k3: Option<f64>,
    #[arg(long = "Kperp")]
    pub kperp: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "L")]
    pub l: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<u64>,
    /// Constant for the conditional full-operator bound.
    #[arg(long = "C_M")]
    pub c_m: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "T")]
    pub half_width: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes()).map_err(io_err(Path::new("stdout")))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, path: Option<&Path>, value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => emit(out, &text),
    }
}

fn configure_threads(flag: Option<usize>) -> CliResult<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => std::env::var(THREADS_ENV)
            .ok()
            .map(|s| parse_num::<usize>(&s).map_err(|e| CliError::Config(format!("{THREADS_ENV}: {e}"))))
            .transpose()?,
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::Config("thread count must be >= 1".into()));
        }
        // A second build in the same process fails harmlessly; the first pool stays.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    let cfg = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let threads = cfg.pick(cli.threads, "threads", parse_num::<usize>)?;
    configure_threads(threads)?;
    match cli.command {
        Command::Oned(a) => cmd_oned(&cfg, a, out),
        Command::Minimize(a) => cmd_minimize(&cfg, a, out),
        Command::Trial(a) => cmd_trial(&cfg, a, out),
        Command::Sweep(a) => cmd_sweep(&cfg, a),
        Command::Fit(a) => cmd_fit(&cfg, a, out),
        Command::Decompose(a) => cmd_decompose(&cfg, a, out),
        Command::Certify(a) => cmd_certify(&cfg, a, out),
        Command::Verify => crate::verify::cmd_verify(out),
    }
}

fn grid(cfg: &ConfigFile, n: Option<usize>, t: Option<f64>, n0: usize, t0: f64) -> CliResult<Grid1D> {
    let n = cfg.pick(n, "n", parse_num)?.unwrap_or(n0);
    let t = cfg.pick(t, "T", parse_num)?.unwrap_or(t0);
    Ok(Grid1D::new(n, t)?)
}

fn policy(cfg: &ConfigFile, n: Option<usize>, t: Option<f64>) -> CliResult<GridPolicy> {
    let d = GridPolicy::default();
    Ok(GridPolicy {
        n: cfg.pick(n, "n", parse_num)?.unwrap_or(d.n),
        base_half_width: cfg.pick(t, "T", parse_num)?.unwrap_or(d.base_half_width),
    })
}

fn cmd_oned(cfg: &ConfigFile, a: OnedArgs, out: &mut dyn Write) -> CliResult<()> {
    let mass = cfg.pick(a.a, "a", parse_num)?.unwrap_or(1.0);
    let coupling = cfg.pick(a.b, "b", parse_num)?.unwrap_or(1.0);
    let tol = cfg.pick(a.tol, "tol", parse_num)?.unwrap_or(1e-8);
    let g = grid(cfg, a.n, a.half_width, 4096, 40.0)?;
    let p = OneDProblem::new(mass, coupling)?;
    let exact = closed_form_energy(&p) + 0.0;
    let s = solve_numeric(&p, &g, tol)?;
    let mut text = format!(
        "a = {mass}\nb = {coupling}\nclosed_form_energy = {exact:.12e}\nnumeric_energy = {:.12e}\niterations = {}\ngradient_residual = {:.3e}\n",
        s.energy, s.iterations, s.gradient_residual
    );
    if s.degenerate {
        text.push_str("degenerate = true\n");
        emit(out, &text)?;
        return Ok(());
    }
    let dist = distance_to_orbit(&s.minimizer, |t| sech_profile(mass, coupling, t));
    text.push_str(&format!("orbit_distance = {dist:.3e}\n"));
    emit(out, &text)?;
    let err = (s.energy - exact).abs();
    if err > 10.0 * tol * exact.abs().max(1.0) {
        return Err(CliError::Invariant(format!("energy differs from closed form by {err:.3e}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct MinimizeReport {
    #[serde(rename = "B")]
    b: f64,
    alpha: f64,
    half_width: f64,
    n: usize,
    minimum: magpol_core::pekar::EnergyBreakdown,
    trial: magpol_core::pekar::EnergyBreakdown,
    iterations: usize,
    residual: f64,
}

fn state_params(cfg: &ConfigFile, b: Option<f64>, alpha: Option<f64>) -> CliResult<PhysParams> {
    let b = cfg.require(b, "B", parse_b)?;
    let alpha = cfg.pick(alpha, "alpha", parse_num)?.unwrap_or(1.0);
    Ok(PhysParams::new(b, alpha)?)
}

fn cmd_minimize(cfg: &ConfigFile, a: StateArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = state_params(cfg, a.b, a.alpha)?;
    let tol = cfg.pick(a.tol, "tol", parse_num)?.unwrap_or(1e-10);
    let g = policy(cfg, a.n, a.half_width)?.grid(&p)?;
    let (sol, minimum) = pekar_minimize(&p, &g, tol)?;
    let trial = trial_energy(p.b(), p.alpha(), &g)?;
    let report = MinimizeReport {
        b: p.b(),
        alpha: p.alpha(),
        half_width: g.half_width(),
        n: g.n(),
        minimum,
        trial,
        iterations: sol.iterations,
        residual: sol.gradient_residual,
    };
    emit_json(out, cfg.pick(a.out, "out", |s| Ok(PathBuf::from(s)))?.as_deref(), &report)
}

fn cmd_trial(cfg: &ConfigFile, a: StateArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = state_params(cfg, a.b, a.alpha)?;
    let g = policy(cfg, a.n, a.half_width)?.grid(&p)?;
    let e = trial_energy(p.b(), p.alpha(), &g)?;
    emit_json(out, cfg.pick(a.out, "out", |s| Ok(PathBuf::from(s)))?.as_deref(), &e)
}

fn cmd_sweep(cfg: &ConfigFile, a: SweepArgs) -> CliResult<()> {
    let mut bs = cfg.require(a.b.map(|l| l.0), "B", parse_b_list)?;
    bs.sort_by(f64::total_cmp);
    bs.dedup();
    let alpha = cfg.pick(a.alpha, "alpha", parse_num)?.unwrap_or(1.0);
    let tol = cfg.pick(a.tol, "tol", parse_num)?.unwrap_or(1e-10);
    let policy = policy(cfg, a.n, a.half_width)?;
    let certify = a.certify || cfg.pick(None, "certify", parse_num::<bool>)?.unwrap_or(false);
    let path = cfg.require(a.out, "out", |s| Ok(PathBuf::from(s)))?;
    let points = sweep(&bs, alpha, &policy, tol)?;
    let bounds: Vec<Option<f64>> = if certify {
        bs.par_iter()
            .map(|&b| {
                let c = certify_p0(b, alpha, default_cutoff_k(b), None, &Grid1D::new(4096, 40.0)?, 1e-9)?;
                Ok(c.validity.valid.then_some(c.p0_bound))
            })
            .collect::<Result<_, magpol_core::Error>>()?
    } else {
        vec![None; bs.len()]
    };
    let rows: Vec<SweepRecord> = points
        .iter()
        .zip(bounds)
        .map(|(p, cert_bound)| SweepRecord {
            b: p.b,
            alpha: p.alpha,
            e_total: p.minimum.total,
            e_kin3: p.minimum.longitudinal_kinetic,
            e_coulomb: p.minimum.coulomb,
            trial_e: p.trial.total,
            cert_bound,
            iters: p.iterations,
            residual: p.residual,
        })
        .collect();
    let file = std::fs::File::create(&path).map_err(io_err(&path))?;
    write_csv(std::io::BufWriter::new(file), &rows)
}

fn cmd_fit(cfg: &ConfigFile, a: FitArgs, out: &mut dyn Write) -> CliResult<()> {
    let path = cfg.require(a.input, "in", |s| Ok(PathBuf::from(s)))?;
    let file = std::fs::File::open(&path).map_err(io_err(&path))?;
    let rows = read_csv(file)?;
    let data: Vec<(f64, f64)> = rows.iter().map(|r| (r.b, r.binding())).collect();
    let fit = fit_asymptotics(&data)?;
    emit(
        out,
        &format!(
            "c2 = {:.10e}\nc3 = {:.10e}\nc4 = {:.10e}\nresidual_rms = {:.3e}\ncondition_number = {:.3e}\npoints = {}\n",
            fit.c2,
            fit.c3,
            fit.c4,
            fit.residual_rms,
            fit.condition_number,
            data.len()
        ),
    )
}

#[derive(Serialize)]
struct DecomposeReport {
    #[serde(rename = "B")]
    b: f64,
    alpha: f64,
    state: &'static str,
    ledger: magpol_core::coulomb::DecompositionLedger,
    closure_defect: f64,
    r1_within_bound: bool,
}

fn cmd_decompose(cfg: &ConfigFile, a: StateArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = state_params(cfg, a.b, a.alpha)?;
    let tol = cfg.pick(a.tol, "tol", parse_num)?.unwrap_or(1e-10);
    let g = policy(cfg, a.n, a.half_width)?.grid(&p)?;
    let (f, state) = if p.alpha() > 0.0 {
        (pekar_minimize(&p, &g, tol)?.0.minimizer, "minimizer")
    } else {
        (trial_state(p.b(), 0.0, &g)?.f().clone(), "trial")
    };
    let ledger = decompose(&f, p.b())?;
    let report = DecomposeReport {
        b: p.b(),
        alpha: p.alpha(),
        state,
        ledger,
        closure_defect: ledger.closure_defect(),
        r1_within_bound: ledger.r1_within_bound(),
    };
    emit_json(out, cfg.pick(a.out, "out", |s| Ok(PathBuf::from(s)))?.as_deref(), &report)?;
    if report.closure_defect > ledger.quadrature_error_estimate || !report.r1_within_bound {
        return Err(CliError::Invariant("decomposition ledger does not close within its bounds".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct CertificateReport {
    #[serde(flatten)]
    certificate: LowerBoundCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditional_full_bound: Option<f64>,
}

fn cmd_certify(cfg: &ConfigFile, a: CertifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let b = cfg.require(a.b, "B", parse_b)?;
    let alpha = cfg.pick(a.alpha, "alpha", parse_num)?.unwrap_or(1.0);
    let k = cfg.pick(a.k, "K", parse_num)?.unwrap_or_else(|| default_cutoff_k(b));
    let tol = cfg.pick(a.tol, "tol", parse_num)?.unwrap_or(1e-9);
    let g = grid(cfg, a.n, a.half_width, 4096, 40.0)?;
    let mut params = default_params(b, alpha, k)?;
    let mut overridden = false;
    for (flag, key, slot) in [
        (a.k3, "K3", &mut params.k3),
        (a.kperp, "Kperp", &mut params.kperp),
        (a.gamma, "gamma", &mut params.gamma),
        (a.l, "L", &mut params.l),
    ] {
        if let Some(v) = cfg.pick(flag, key, parse_num)? {
            *slot = v;
            overridden = true;
        }
    }
    if let Some(m) = cfg.pick(a.m, "M", parse_num)? {
        params.m = m;
        overridden = true;
    }
    let cert = certify_p0(b, alpha, k, overridden.then_some(params), &g, tol)?;
    let conditional = match cfg.pick(a.c_m, "C_M", parse_num)? {
        Some(c) if cert.validity.valid => Some(conditional_full_bound(&cert, c)?),
        _ => None,
    };
    let valid = cert.validity.valid;
    let report = CertificateReport { certificate: cert, conditional_full_bound: conditional };
    emit_json(out, cfg.pick(a.out, "out", |s| Ok(PathBuf::from(s)))?.as_deref(), &report)?;
    if !valid {
        return Err(CliError::Invalid("certificate parameters are outside the valid range".into()));
    }
    Ok(())
}
