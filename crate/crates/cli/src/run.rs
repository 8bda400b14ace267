//! Command dispatch and output assembly.

use std::fmt::Write as _;

use log::info;
use rayon::prelude::*;

use qdgate_core::basis::COMPUTATIONAL;
use qdgate_core::drive::{max_detuning_rate, spectrum_sweep, DriveModel, PhysicalParams, PulseSchedule, DEFAULT_DT_PS};
use qdgate_core::estimates::{lz_probability, min_adiabatic_gap, LZInput};
use qdgate_core::foerster::{ForsterCouplings, TABLE};
use qdgate_core::luttinger::{exact_mixing_epsilon, heavy_light_splitting, mixing_epsilon, LuttingerParams, TrapFrequencies};
use qdgate_core::optimize::{optimize_pulse, GateEvaluator, OptimizerConfig, PARAMETER_NAMES};
use qdgate_core::propagator::{gate_summary, scan_point, survival_run, GateRecord, GateSummary, SurvivalRun};
use qdgate_core::Result as CoreResult;

use crate::config::{Command, Config};
use crate::error::CliError;

/// Twelve significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// What a run produced: the data file body and lines meant for the terminal.
#[derive(Debug, Default)]
pub struct Output {
    pub header: String,
    pub body: String,
    pub summary: String,
}

pub fn run(command: Command, cfg: &mut Config) -> Result<Output, CliError> {
    let mut out = Output::default();
    match command {
        Command::Mixing => mixing(cfg, &mut out)?,
        Command::Table => table(cfg, &mut out)?,
        Command::Spectrum => spectrum(cfg, &mut out)?,
        Command::Gate => gate(cfg, &mut out)?,
        Command::Populations => populations(cfg, &mut out)?,
        Command::Optimize => optimize(cfg, &mut out)?,
        Command::Lz => lz(cfg, &mut out)?,
    }
    out.header = header(command, cfg);
    Ok(out)
}

fn header(command: Command, cfg: &Config) -> String {
    let mut h = format!("# qdgate {command}\n");
    for (k, v) in cfg.resolved() {
        let _ = writeln!(h, "# {k} = {v}");
    }
    h
}

fn luttinger(cfg: &mut Config) -> Result<(LuttingerParams, TrapFrequencies), CliError> {
    let l = LuttingerParams::new(
        cfg.require("luttinger.gamma1")?,
        cfg.require("luttinger.gamma2")?,
        cfg.require("luttinger.gamma3")?,
    )?;
    let w = TrapFrequencies::new(
        cfg.require("trap.omega_x_mev")?,
        cfg.require("trap.omega_y_mev")?,
        cfg.require("trap.omega_z_mev")?,
    )?;
    Ok((l, w))
}

fn couplings(cfg: &mut Config) -> Result<ForsterCouplings, CliError> {
    let m_hh_hh = cfg.require("physics.m_hh_hh_mev")?;
    let m_lh_hh = cfg.require("physics.m_lh_hh_mev")?;
    let mut c = ForsterCouplings::consistent(m_hh_hh, m_lh_hh);
    c.m_lh_lh = cfg.optional("physics.m_lh_lh_mev", c.m_lh_lh)?;
    Ok(c)
}

pub fn physical(cfg: &mut Config) -> Result<PhysicalParams, CliError> {
    let delta = cfg.require("physics.delta_mev")?;
    let eps = cfg.require("physics.eps")?;
    let couplings = couplings(cfg)?;
    let vxx = cfg.require("physics.vxx_mev")?;
    let mut p = PhysicalParams::new(delta, eps, couplings, vxx);
    p.eps_tilde = cfg.optional("physics.eps_tilde", eps)?;
    p.offset_a = cfg.optional("physics.offset_a_mev", 0.0)?;
    p.offset_b = cfg.optional("physics.offset_b_mev", 0.0)?;
    p.validate()?;
    Ok(p)
}

pub fn pulse(cfg: &mut Config) -> Result<PulseSchedule, CliError> {
    let s = PulseSchedule::new(
        cfg.require("pulse.omega0_mev")?,
        cfg.require("pulse.tau_omega_ps")?,
        cfg.require("pulse.delta0_mev")?,
        cfg.require("pulse.tau_delta_ps")?,
    );
    let s = s
        .with_window(cfg.optional("pulse.t_start_ps", s.t_start)?, cfg.optional("pulse.t_end_ps", s.t_end)?)
        .with_dt(cfg.optional("pulse.dt_ps", DEFAULT_DT_PS)?);
    s.validate()?;
    Ok(s)
}

fn stride(cfg: &mut Config) -> Result<usize, CliError> {
    let n: usize = cfg.optional("output.stride", 10)?;
    if n == 0 {
        return Err(CliError::Config("key `output.stride`: must be at least 1".into()));
    }
    Ok(n)
}

/// Indices `0, n, 2n, …` plus the last one.
fn sampled(len: usize, stride: usize) -> impl Iterator<Item = usize> {
    (0..len).filter(move |&k| k % stride == 0 || k + 1 == len)
}

fn mixing(cfg: &mut Config, out: &mut Output) -> Result<(), CliError> {
    let (l, w) = luttinger(cfg)?;
    let eps = mixing_epsilon(&l, &w)?;
    let exact = exact_mixing_epsilon(&l, &w)?;
    let split = heavy_light_splitting(&l, &w);
    out.body = format!(
        "eps = {}\neps_exact = {}\nheavy_light_splitting_mev = {}\n",
        num(eps),
        num(exact),
        num(split)
    );
    out.summary = out.body.clone();
    Ok(())
}

fn half(j2: i8) -> String {
    format!("{}", f64::from(j2) / 2.0)
}

fn table(cfg: &mut Config, out: &mut Output) -> Result<(), CliError> {
    let c = couplings(cfg)?;
    out.body.push_str("jzh1,jze1,jzh2,jze2,element_symbolic,element_value_meV\n");
    for e in &TABLE {
        let _ = writeln!(
            out.body,
            "{},{},{},{},{},{}",
            half(e.state1.jz_hole2),
            half(e.state1.jz_electron2),
            half(e.state2.jz_hole2),
            half(e.state2.jz_electron2),
            e.symbolic,
            num(e.value(&c))
        );
    }
    Ok(())
}

fn spectrum(cfg: &mut Config, out: &mut Output) -> Result<(), CliError> {
    let p = physical(cfg)?;
    let omega: f64 = cfg.require("spectrum.omega_mev")?;
    let lo: f64 = cfg.require("spectrum.ratio_min")?;
    let hi: f64 = cfg.require("spectrum.ratio_max")?;
    let points: usize = cfg.require("spectrum.points")?;
    if points == 0 {
        return Err(CliError::Config("key `spectrum.points`: must be at least 1".into()));
    }
    if !(omega.is_finite() && omega > 0.0) {
        return Err(CliError::Config("key `spectrum.omega_mev`: must be positive".into()));
    }
    let grid: Vec<f64> = (0..points)
        .map(|k| if points == 1 { lo } else { lo + (hi - lo) * k as f64 / (points - 1) as f64 })
        .collect();
    let rows = grid
        .par_iter()
        .map(|&r| spectrum_sweep(&p, omega, &[r]).map(|v| v[0]))
        .collect::<CoreResult<Vec<_>>>()?;
    out.body.push_str("ratio");
    for k in 1..=16 {
        let _ = write!(out.body, ",e{k:02}");
    }
    out.body.push('\n');
    for row in rows {
        out.body.push_str(&num(row.ratio));
        for e in row.eigenvalues {
            out.body.push(',');
            out.body.push_str(&num(e));
        }
        out.body.push('\n');
    }
    Ok(())
}

/// The four survival runs, one per computational state, in parallel.
fn four_runs(p: &PhysicalParams, s: &PulseSchedule) -> Result<[SurvivalRun; 4], CliError> {
    let model = DriveModel::new(p)?;
    model.check_step(s)?;
    let runs = COMPUTATIONAL
        .par_iter()
        .map(|&n| survival_run(&model, s, n, true))
        .collect::<CoreResult<Vec<_>>>()?;
    Ok(runs.try_into().expect("four computational states"))
}

fn gate(cfg: &mut Config, out: &mut Output) -> Result<(), CliError> {
    let p = physical(cfg)?;
    let s = pulse(cfg)?;
    let stride = stride(cfg)?;
    info!("gate: {} steps per state", s.steps());
    let rec = GateRecord::from_runs(four_runs(&p, &s)?)?;
    out.body.push_str("t_ps,theta_rad,phi00,phi01,phi10,phi11\n");
    for k in sampled(rec.times.len(), stride) {
        let _ = writeln!(
            out.body,
            "{},{},{},{},{},{}",
            num(rec.times[k]),
            num(rec.theta_series[k]),
            num(rec.phases[0][k]),
            num(rec.phases[1][k]),
            num(rec.phases[2][k]),
            num(rec.phases[3][k])
        );
    }
    out.summary = gate_lines(&rec.summary);
    Ok(())
}

fn gate_lines(g: &GateSummary) -> String {
    format!(
        "theta_final = {}\ntheta_error = {}\nleakage_00 = {}\nleakage_01 = {}\nleakage_10 = {}\nleakage_11 = {}\n",
        num(g.theta()),
        num(g.theta_error()),
        num(g.leakage[0]),
        num(g.leakage[1]),
        num(g.leakage[2]),
        num(g.leakage[3])
    )
}

fn populations(cfg: &mut Config, out: &mut Output) -> Result<(), CliError> {
    let p = physical(cfg)?;
    let s = pulse(cfg)?;
    let stride = stride(cfg)?;
    let runs = four_runs(&p, &s)?;
    let surv: Vec<Vec<f64>> = runs.iter().map(|r| r.survival()).collect();
    out.body.push_str("t_ps,p00,p01,p10,p11\n");
    for k in sampled(runs[0].times.len(), stride) {
        let _ = writeln!(
            out.body,
            "{},{},{},{},{}",
            num(runs[0].times[k]),
            num(surv[0][k]),
            num(surv[1][k]),
            num(surv[2][k]),
            num(surv[3][k])
        );
    }
    Ok(())
}

/// Evaluates a batch of schedules on the rayon pool; results keep input
/// order.
pub struct RayonEvaluator;

impl GateEvaluator for RayonEvaluator {
    fn evaluate(&self, p: &PhysicalParams, batch: &[PulseSchedule]) -> Vec<CoreResult<GateSummary>> {
        batch.par_iter().map(|s| gate_summary(p, s)).collect()
    }
}

fn optimizer_config(cfg: &mut Config) -> Result<OptimizerConfig, CliError> {
    let d = OptimizerConfig::default();
    let free_list: String = cfg.optional("optimizer.free", PARAMETER_NAMES.join(","))?;
    let mut free = [false; 4];
    for name in free_list.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        let i = PARAMETER_NAMES.iter().position(|p| *p == name).ok_or_else(|| {
            CliError::Config(format!(
                "key `optimizer.free`: unknown parameter `{name}` (expected {})",
                PARAMETER_NAMES.join(", ")
            ))
        })?;
        free[i] = true;
    }
    let c = OptimizerConfig {
        w_theta: cfg.optional("optimizer.w_theta", d.w_theta)?,
        w_leak: cfg.optional("optimizer.w_leak", d.w_leak)?,
        simplex_scale: cfg.optional("optimizer.simplex_scale", d.simplex_scale)?,
        max_evals: cfg.optional("optimizer.max_evals", d.max_evals)?,
        tolerance: cfg.optional("optimizer.tolerance", d.tolerance)?,
        free,
    };
    c.validate()?;
    Ok(c)
}

fn optimize(cfg: &mut Config, out: &mut Output) -> Result<(), CliError> {
    let p = physical(cfg)?;
    let s0 = pulse(cfg)?;
    let oc = optimizer_config(cfg)?;
    let r = optimize_pulse(&p, &s0, &oc, &RayonEvaluator)?;
    let s = r.schedule;
    let mut b = String::new();
    let _ = writeln!(b, "converged = {}", r.converged);
    let _ = writeln!(b, "evaluations = {}", r.evaluations);
    let _ = writeln!(b, "objective = {}", num(r.objective));
    for (k, v) in [
        ("pulse.omega0_mev", s.omega0),
        ("pulse.tau_omega_ps", s.tau_omega),
        ("pulse.delta0_mev", s.delta0),
        ("pulse.tau_delta_ps", s.tau_delta),
        ("pulse.t_start_ps", s.t_start),
        ("pulse.t_end_ps", s.t_end),
        ("pulse.dt_ps", s.dt),
    ] {
        let _ = writeln!(b, "{k} = {}", num(v));
    }
    match &r.summary {
        Some(g) => b.push_str(&gate_lines(g)),
        None => b.push_str("# gate simulation failed at the returned schedule\n"),
    }
    out.body = b;
    out.summary = format!(
        "converged = {}\nevaluations = {}\nobjective = {}\n",
        r.converged,
        r.evaluations,
        num(r.objective)
    );
    Ok(())
}

fn lz(cfg: &mut Config, out: &mut Output) -> Result<(), CliError> {
    let simulate: bool = cfg.optional("lz.simulate", false)?;
    let have_gap = cfg.raw("lz.omega_gap_mev").is_some();
    let have_rate = cfg.raw("lz.delta_dot_mev_per_ps").is_some();
    let model_inputs = if simulate || !have_gap || !have_rate {
        Some((physical(cfg)?, pulse(cfg)?))
    } else {
        None
    };
    let omega_gap = match &model_inputs {
        Some((p, s)) if !have_gap => {
            let g = min_adiabatic_gap(p, s)?;
            cfg.note("lz.omega_gap_mev", format!("{g} (minimum adiabatic gap)"));
            g
        }
        _ => cfg.require("lz.omega_gap_mev")?,
    };
    let delta_dot = match &model_inputs {
        Some((_, s)) if !have_rate => {
            let r = max_detuning_rate(s);
            cfg.note("lz.delta_dot_mev_per_ps", format!("{r} (peak |dΔ/dt|)"));
            r
        }
        _ => cfg.require("lz.delta_dot_mev_per_ps")?,
    };
    let prob = lz_probability(&LZInput { omega_gap, delta_dot })?;
    let mut b = format!(
        "omega_gap_mev = {}\ndelta_dot_mev_per_ps = {}\nlz_probability = {}\n",
        num(omega_gap),
        num(delta_dot),
        num(prob)
    );
    if simulate {
        let (p, s) = model_inputs.expect("model inputs are read when simulating");
        let sim = scan_point(&p, &s, 1.0)?;
        let _ = writeln!(b, "simulated_leakage = {}", num(sim.max_leakage));
        for (label, v) in ["00", "01", "10", "11"].iter().zip(sim.leakage) {
            let _ = writeln!(b, "leakage_{label} = {}", num(v));
        }
    }
    out.body = b;
    out.summary = out.body.clone();
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_has_twelve_significant_digits() {
        assert_eq!(num(0.1), "1.00000000000e-1");
        assert_eq!(num(-12.5), "-1.25000000000e1");
        assert_eq!(num(0.0), "0.00000000000e0");
    }

    #[test]
    fn sampling_keeps_first_and_last() {
        assert_eq!(sampled(7, 3).collect::<Vec<_>>(), [0, 3, 6]);
        assert_eq!(sampled(8, 3).collect::<Vec<_>>(), [0, 3, 6, 7]);
        assert_eq!(sampled(3, 1).collect::<Vec<_>>(), [0, 1, 2]);
    }

    #[test]
    fn free_list_is_validated() {
        let mut c = Config::parse("optimizer.free = omega0_mev, tau_delta_ps").unwrap();
        assert_eq!(optimizer_config(&mut c).unwrap().free, [true, false, false, true]);
        let mut c = Config::parse("optimizer.free = omega").unwrap();
        let e = optimizer_config(&mut c).unwrap_err();
        assert!(e.to_string().contains("optimizer.free"));
    }
}
