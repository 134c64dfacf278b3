//! Named experiments behind `gqca run`.
//!
//! Configuration is a flat `key = value` file (`#` starts a comment) plus
//! `--key=value` flags; flags win. Each experiment reads only the keys it
//! knows and rejects the rest.

use crate::coarse::{
    max_coherence, renormalization_experiment, ChoiMatrix, CoarsePartition, RenormMode,
};
use crate::dirac::{convergence_study, gaussian_profile};
use crate::dual::{embed_single_signal, extract_walker, walker_step, Chirality, Gauge};
use crate::error::{GqcaError, Result};
use crate::gauge::{crossing_phase_check, verify_color_blindness, wall_pair_phase_check};
use crate::qca::{
    evolve, evolve_async, evolve_layers, BasisConfig, BoundaryCondition, Capacity, GateParams,
    PureState, UpdateSchedule, MAX_SITES,
};
use crate::record::SpacetimeRecord;
use crate::render::{render_ppm, render_text, Overlay, Style};
use crate::stokes::{exhaustive_stokes_check, invisible_pair_demo, ProbeLattice};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

/// Experiment name plus its key/value settings.
#[derive(Debug, Default)]
pub struct ExperimentConfig {
    pub name: String,
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

impl ExperimentConfig {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    /// Parses `key = value` lines; blank lines and `#` comments are skipped.
    pub fn parse_file_contents(&mut self, text: &str) -> Result<()> {
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                GqcaError::Config(format!(
                    "line {}: expected `key = value`, got `{raw}`",
                    k + 1
                ))
            })?;
            self.set(key.trim(), value.trim());
        }
        Ok(())
    }

    pub fn load_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GqcaError::Config(format!("cannot read {}: {e}", path.display())))?;
        self.parse_file_contents(&text)
    }

    /// Applies `--key=value` (or bare `key=value`) overrides.
    pub fn apply_flags<S: AsRef<str>>(&mut self, flags: &[S]) -> Result<()> {
        for f in flags {
            let f = f.as_ref();
            let body = f.strip_prefix("--").unwrap_or(f);
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| GqcaError::Config(format!("expected --key=value, got `{f}`")))?;
            self.set(key, value);
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.values.insert(key.to_string(), value.to_string());
    }

    fn raw(&self, key: &str) -> Option<&str> {
        self.used.borrow_mut().insert(key.to_string());
        self.values.get(key).map(String::as_str)
    }

    fn parsed<V: std::str::FromStr>(&self, key: &str, default: V) -> Result<V> {
        match self.raw(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| GqcaError::Config(format!("`{key}` has invalid value `{v}`"))),
        }
    }

    pub fn usize(&self, key: &str, default: usize) -> Result<usize> {
        self.parsed(key, default)
    }

    pub fn u64(&self, key: &str, default: u64) -> Result<u64> {
        self.parsed(key, default)
    }

    pub fn f64(&self, key: &str, default: f64) -> Result<f64> {
        self.parsed(key, default)
    }

    pub fn string(&self, key: &str, default: &str) -> String {
        self.raw(key).unwrap_or(default).to_string()
    }

    pub fn optional(&self, key: &str) -> Option<String> {
        self.raw(key).map(str::to_string)
    }

    pub fn bc(&self, default: BoundaryCondition) -> Result<BoundaryCondition> {
        match self.raw("bc") {
            None => Ok(default),
            Some(v) => v.parse(),
        }
    }

    /// Site count, checked against the lattice limit.
    pub fn sites(&self, key: &str, default: usize) -> Result<usize> {
        let n = self.usize(key, default)?;
        if n > MAX_SITES {
            return Err(GqcaError::Capacity(format!(
                "{n} sites exceed the {MAX_SITES}-site limit"
            )));
        }
        Ok(n)
    }

    /// Fails on keys no experiment step asked for.
    pub fn finish(&self) -> Result<()> {
        let used = self.used.borrow();
        let unknown: Vec<&String> = self.values.keys().filter(|k| !used.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(GqcaError::Config(format!(
                "unknown keys for `{}`: {}",
                self.name,
                unknown
                    .iter()
                    .map(|s| s.as_str())
                    .collect::<Vec<_>>()
                    .join(", ")
            )))
        }
    }
}

type Runner = fn(&ExperimentConfig, &mut dyn Write) -> Result<()>;

/// `(name, description, runner)` for every experiment.
pub const EXPERIMENTS: &[(&str, &str, Runner)] = &[
    (
        "domain-walls",
        "classical wall motion as a spacetime diagram",
        domain_walls,
    ),
    (
        "choi-eigenvalues",
        "two-qubit channel spectrum 1, 1, 1 +- sqrt(3)|a| and its CP bound",
        choi_eigenvalues,
    ),
    (
        "choi-sweep",
        "CSV of the smallest Choi eigenvalue over N, L, a; a_max = 1/N by two routes",
        choi_sweep,
    ),
    (
        "mass-renorm",
        "coarse-grained walker carries mass m/N",
        mass_renorm,
    ),
    (
        "color-blindness",
        "flip symmetry of signal statistics and the crossing condition",
        color_blindness,
    ),
    (
        "stokes",
        "exhaustive path parity check on one- and two-wall records",
        stokes,
    ),
    (
        "sector-equivalence",
        "one-wall automaton sector equals the walker",
        sector_equivalence,
    ),
    (
        "schedule-independence",
        "random causal schedules reproduce brickwork evolution",
        schedule_independence,
    ),
    (
        "dirac-limit",
        "walker converges to the Dirac equation (CSV)",
        dirac_limit,
    ),
    (
        "invisible-pair",
        "an even pair of parallel walls hides between probes",
        invisible_pair,
    ),
];

pub fn list_experiments() -> Vec<(&'static str, &'static str)> {
    EXPERIMENTS.iter().map(|(n, d, _)| (*n, *d)).collect()
}

/// Runs the named experiment, writing its report to `out`. A failed claim
/// is returned as [`GqcaError::ClaimFailed`] after the report is written.
pub fn run_experiment(config: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let runner = EXPERIMENTS
        .iter()
        .find(|(n, _, _)| *n == config.name)
        .map(|(_, _, r)| *r)
        .ok_or_else(|| GqcaError::UnknownExperiment(config.name.clone()))?;
    runner(config, out)
}

fn verdict(out: &mut dyn Write, name: &str, ok: bool, detail: &str) -> Result<bool> {
    writeln!(out, "{} {name}: {detail}", if ok { "PASS" } else { "FAIL" })?;
    Ok(ok)
}

fn conclude(all: &[bool], what: &str) -> Result<()> {
    if all.iter().all(|&b| b) {
        Ok(())
    } else {
        Err(GqcaError::ClaimFailed(what.to_string()))
    }
}

/// Writes `text` to the `out` key's path, or to `sink` when unset.
fn emit(cfg: &ExperimentConfig, key: &str, bytes: &[u8], sink: &mut dyn Write) -> Result<()> {
    match cfg.optional(key) {
        Some(p) => {
            std::fs::write(PathBuf::from(&p), bytes)?;
            writeln!(sink, "wrote {p}")?;
        }
        None => sink.write_all(bytes)?,
    }
    Ok(())
}

fn gate_from(cfg: &ExperimentConfig, m: f64, eps: f64, phi: f64) -> Result<GateParams<f64>> {
    let p = GateParams::mass(cfg.f64("phi", phi)?, cfg.f64("m", m)?, cfg.f64("eps", eps)?);
    crate::qca::build_local_gate(&p).map_err(|e| GqcaError::Config(e.to_string()))?;
    Ok(p)
}

pub fn parse_style(s: &str) -> Result<Style> {
    match s {
        "text" => Ok(Style::Text),
        "ppm" => Ok(Style::Ppm),
        other => Err(GqcaError::Config(format!(
            "style `{other}` is neither text nor ppm"
        ))),
    }
}

/// `none`, `signals`, or a `+`-joined mix of `signals` and `probes`.
pub fn parse_overlay(s: &str, probe_spacing: usize) -> Result<Overlay> {
    let mut o = Overlay::none();
    for part in s.split('+').filter(|p| !p.is_empty() && *p != "none") {
        match part {
            "signals" => o.signals = true,
            "probes" => o.probes = Some(ProbeLattice::new(probe_spacing, 1, 1)?),
            other => return Err(GqcaError::Config(format!("unknown overlay `{other}`"))),
        }
    }
    Ok(o)
}

/// Classical record of a run from `initial`.
pub fn record_run(
    initial: BasisConfig,
    steps: usize,
    params: &GateParams<f64>,
    bc: BoundaryCondition,
) -> Result<SpacetimeRecord> {
    let (_, rec) = evolve(&PureState::basis(initial), steps, params, bc, true)?;
    match rec {
        Some(crate::record::Record::Classical(r)) => Ok(r),
        _ => Err(GqcaError::Unsupported(
            "the trajectory left the basis states; diagrams need m = 0".into(),
        )),
    }
}

fn domain_walls(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let initial: BasisConfig = cfg
        .string("initial", "00000111111000000011110000000000")
        .parse()
        .map_err(|e: GqcaError| GqcaError::Config(e.to_string()))?;
    let steps = cfg.usize("steps", 16)?;
    let bc = cfg.bc(BoundaryCondition::Periodic)?;
    let params = gate_from(cfg, 0.0, 0.1, 0.0)?;
    let style = parse_style(&cfg.string("style", "text"))?;
    let overlay = parse_overlay(
        &cfg.string("overlay", "signals"),
        cfg.usize("probe_spacing", 3)?,
    )?;
    let rec = record_run(initial, steps, &params, bc)?;
    let bytes = match style {
        Style::Text => render_text(&rec, &overlay).into_bytes(),
        Style::Ppm => render_ppm(&rec, &overlay),
    };
    cfg.finish()?;
    emit(cfg, "out", &bytes, out)
}

fn choi_eigenvalues(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    cfg.finish()?;
    let p = CoarsePartition::with_unequal_classes(vec![0, 1, 1, 1])?;
    let s3 = 3f64.sqrt();
    let mut ok = Vec::new();
    for a in [0.0, 0.2, 1.0 / s3] {
        let mut ev = ChoiMatrix::build(&p, Complex::new(a, 0.0)).eigenvalues()?;
        ev.retain(|v| v.abs() > 1e-12);
        let mut want = vec![1.0, 1.0, 1.0 + s3 * a, 1.0 - s3 * a];
        want.retain(|v| v.abs() > 1e-12);
        want.sort_by(f64::total_cmp);
        let err = if ev.len() == want.len() {
            ev.iter()
                .zip(&want)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        let shown: Vec<String> = ev.iter().map(|v| format!("{v:.15}")).collect();
        ok.push(verdict(
            out,
            &format!("a = {a:.12}"),
            err <= 1e-12,
            &format!(
                "nonzero eigenvalues [{}], max error {err:.2e}",
                shown.join(", ")
            ),
        )?);
    }
    let a_max = max_coherence::<f64>(&p)?.by_choi;
    ok.push(verdict(
        out,
        "CP bound",
        (a_max - 1.0 / s3).abs() <= 1e-9,
        &format!(
            "smallest eigenvalue crosses zero at |a| = {a_max:.12} (1/sqrt 3 = {:.12})",
            1.0 / s3
        ),
    )?);
    conclude(&ok, "two-qubit Choi spectrum")
}

fn choi_sweep(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let n_max = cfg.usize("n_max", 5)?;
    let l_max = cfg.usize("l_max", 5)?;
    let points = cfg.usize("a_points", 21)?.max(2);
    let mut csv = String::from("N,L,a,min_eigenvalue\n");
    let mut ok = Vec::new();
    let mut summary = Vec::new();
    for n in 1..=n_max {
        for l in 2..=l_max {
            let p = CoarsePartition::uniform(n, l)?;
            for k in 0..points {
                let a = k as f64 / (points - 1) as f64;
                let min = ChoiMatrix::build(&p, Complex::new(a, 0.0)).min_eigenvalue()?;
                csv.push_str(&format!("{n},{l},{a},{min:e}\n"));
            }
            let mc = max_coherence::<f64>(&p)?;
            let red = mc.by_reduced.unwrap_or(f64::NAN);
            let good = (mc.by_choi - 1.0 / n as f64).abs() <= 1e-9
                && (red - 1.0 / n as f64).abs() <= 1e-9
                && (mc.by_choi - red).abs() <= 1e-9;
            ok.push(good);
            summary.push(format!(
                "{} N={n} L={l}: a_max {:.12} (Choi) {:.12} (reduced)",
                if good { "PASS" } else { "FAIL" },
                mc.by_choi,
                red
            ));
        }
    }
    cfg.finish()?;
    emit(cfg, "out", csv.as_bytes(), out)?;
    for s in summary {
        writeln!(out, "{s}")?;
    }
    conclude(&ok, "a_max = 1/N")
}

fn mass_renorm(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let nn = cfg.usize("N", 2)?;
    let n = cfg.usize("n", 2)?;
    let m = cfg.f64("m", 0.5)?;
    let eps = cfg.f64("eps", 0.01)?;
    let numeric_eps = cfg.f64("numeric_eps", 0.02)?;
    cfg.finish()?;
    let mut ok = Vec::new();
    let a = renormalization_experiment(m, eps, nn, n, RenormMode::AnalyticFirstOrder)?;
    writeln!(
        out,
        "analytic: m_cg = {:.12}, m_cg/m = {:.12}, max |Lambda(rho) - sigma| = {:.2e}",
        a.m_cg,
        a.m_cg / m,
        a.max_deviation
    )?;
    ok.push(verdict(
        out,
        "analytic exact",
        a.max_deviation <= 1e-14,
        &format!("deviation {:.2e}", a.max_deviation),
    )?);
    if m != 0.0 {
        ok.push(verdict(
            out,
            "m_cg/m = 1/N",
            (a.m_cg / m - 1.0 / nn as f64).abs() <= 1e-3,
            &format!("{:.12} vs {:.12}", a.m_cg / m, 1.0 / nn as f64),
        )?);
    }
    let r1 = renormalization_experiment(m, numeric_eps, nn, n, RenormMode::FullNumeric)?;
    let r2 = renormalization_experiment(m, numeric_eps / 2.0, nn, n, RenormMode::FullNumeric)?;
    writeln!(out, "eps,fine_sites,fidelity,trace_distance,m_cg")?;
    for r in [&r1, &r2] {
        writeln!(
            out,
            "{},{},{:.15},{:e},{:.12}",
            r.eps, r.fine_sites, r.fidelity, r.trace_distance, r.m_cg
        )?;
    }
    if m != 0.0 {
        let ratio = r1.trace_distance / r2.trace_distance;
        ok.push(verdict(
            out,
            "numeric second order",
            (3.0..=5.0).contains(&ratio),
            &format!("trace distance ratio {ratio:.4} for eps halving"),
        )?);
    }
    conclude(&ok, "mass renormalization")
}

fn random_basis(rng: &mut ChaCha8Rng, n: usize) -> Result<PureState<f64>> {
    Ok(PureState::basis(BasisConfig::new(
        n,
        rng.random_range(0..1u64 << n),
    )?))
}

/// Two-wall states on a ten-site ring whose walls meet within ten steps.
pub fn crossing_states() -> Vec<BasisConfig> {
    ["0000111000", "0001100000", "0000010000", "0011110000"]
        .iter()
        .map(|s| s.parse().expect("valid literal"))
        .collect()
}

fn color_blindness(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let trials = cfg.usize("trials", 100)?;
    let steps = cfg.usize("steps", 10)?;
    let seed = cfg.u64("seed", 1)?;
    cfg.finish()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let n = 2 * rng.random_range(2..=5usize);
        let st = random_basis(&mut rng, n)?;
        let p = GateParams::mass(
            rng.random_range(0.0..std::f64::consts::TAU),
            rng.random_range(-3.0..3.0),
            rng.random_range(0.01..=0.3),
        );
        worst = worst.max(
            verify_color_blindness(&st, steps, &p, BoundaryCondition::Periodic)?.signal_deviation,
        );
    }
    let mut ok = vec![verdict(
        out,
        "mass-form gates",
        worst <= 1e-12,
        &format!("{trials} random basis states, max deviation {worst:.2e}"),
    )?];

    let (mut crossing_agree, mut pair_agree) = (0, 0);
    for k in 0..trials {
        let (alpha, beta, phi) = sample_general_angles(&mut rng, k % 2 == 0);
        let p = GateParams::general(
            alpha,
            beta,
            rng.random_range(0.2..0.8),
            phi,
            if rng.random() { 1 } else { -1 },
        );
        let mut dev: f64 = 0.0;
        for c in crossing_states() {
            dev = dev.max(
                verify_color_blindness(
                    &PureState::basis(c),
                    steps,
                    &p,
                    BoundaryCondition::Periodic,
                )?
                .signal_deviation,
            );
        }
        let passed = dev <= 1e-12;
        crossing_agree +=
            usize::from(passed == crossing_phase_check(alpha, beta, phi).is_invariant);
        pair_agree += usize::from(passed == wall_pair_phase_check(alpha, phi).is_invariant);
    }
    writeln!(
        out,
        "general gates agreeing with 2(alpha + beta - phi) = 0: {crossing_agree}/{trials}"
    )?;
    writeln!(
        out,
        "general gates agreeing with 2(2 alpha - phi) = 0:      {pair_agree}/{trials}"
    )?;
    ok.push(verdict(
        out,
        "crossing condition",
        crossing_agree == trials,
        &format!("{crossing_agree}/{trials} gates classified correctly"),
    )?);
    conclude(&ok, "color blindness")
}

/// Half the draws satisfy `2(alpha + beta - phi) = 0` (`alpha = phi - beta`
/// or that plus `pi`), the rest are uniform.
pub fn sample_general_angles<R: Rng>(rng: &mut R, constrained: bool) -> (f64, f64, f64) {
    use std::f64::consts::{PI, TAU};
    let beta = rng.random_range(0.0..TAU);
    let phi = rng.random_range(0.0..TAU);
    let alpha = if constrained {
        phi - beta + if rng.random() { PI } else { 0.0 }
    } else {
        rng.random_range(0.0..TAU)
    };
    (alpha, beta, phi)
}

fn stokes(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let n_max = cfg.sites("n_max", 12)?;
    let hops = cfg.usize("hops", 10)?;
    let steps = cfg.usize("steps", 2)?;
    cfg.finish()?;
    let params = GateParams::classical();
    let mut records = 0u64;
    let mut total = crate::stokes::ExhaustiveReport::default();
    for (cfg0, bc) in wall_configurations(n_max) {
        let rec = record_run(cfg0, steps, &params, bc)?;
        let r = exhaustive_stokes_check(&rec, hops);
        total.paths_checked += r.paths_checked;
        total.loops_checked += r.loops_checked;
        total.violations += r.violations;
        records += 1;
    }
    let ok = verdict(
        out,
        "stokes",
        total.violations == 0,
        &format!(
            "{records} records, {} paths, {} loops, {} violations",
            total.paths_checked, total.loops_checked, total.violations
        ),
    )?;
    conclude(&[ok], "stokes law")
}

/// Every basis configuration with one or two walls, `3 <= n <= n_max`, under
/// all four fixed boundary conditions and (even `n >= 4`) the ring.
pub fn wall_configurations(n_max: usize) -> Vec<(BasisConfig, BoundaryCondition)> {
    let mut out = Vec::new();
    for n in 3..=n_max {
        let mut bcs: Vec<BoundaryCondition> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(left, right)| BoundaryCondition::Fixed { left, right })
            .collect();
        if n % 2 == 0 && n >= 4 {
            bcs.push(BoundaryCondition::Periodic);
        }
        for bc in bcs {
            for bits in 0..1u64 << n {
                let c = BasisConfig::new(n, bits).expect("fits");
                if (1..=2).contains(&c.wall_count(bc)) {
                    out.push((c, bc));
                }
            }
        }
    }
    out
}

fn sector_equivalence(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let max_n = cfg.usize("N_max", 4)?;
    let max_cells = cfg.usize("cells_max", 4)?;
    let half_steps = cfg.usize("half_steps", 10)?;
    let seed = cfg.u64("seed", 2)?;
    cfg.finish()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst, mut cases): (f64, usize) = (0.0, 0);
    for nn in 1..=max_n {
        for cells in 1..=max_cells {
            if 2 * nn * cells < 3 {
                continue;
            }
            let eps = rng.random_range(0.01..0.3);
            let m = rng.random_range(-0.3..0.3) / eps;
            let p = GateParams::mass(rng.random_range(0.0..std::f64::consts::TAU), m, eps);
            for i in 0..cells {
                for j in 0..nn {
                    for chir in [Chirality::Right, Chirality::Left] {
                        worst = worst.max(sector_deviation(i, j, chir, nn, cells, half_steps, &p)?);
                        cases += 1;
                    }
                }
            }
        }
    }
    let ok = verdict(
        out,
        "sector equivalence",
        worst <= 1e-12,
        &format!("{cases} embeddings, max deviation {worst:.2e}"),
    )?;
    conclude(&[ok], "sector equivalence")
}

/// Largest walker/automaton amplitude difference over `half_steps`.
pub fn sector_deviation(
    cell: usize,
    offset: usize,
    chirality: Chirality,
    supercell: usize,
    n_cells: usize,
    half_steps: usize,
    params: &GateParams<f64>,
) -> Result<f64> {
    let eps = match params {
        GateParams::Mass { eps, .. } => *eps,
        GateParams::General { .. } => 1.0,
    };
    let (mut q, bc) = embed_single_signal::<f64>(cell, offset, chirality, supercell, n_cells)?;
    let (mut w, _) = extract_walker(&q, bc, 0, Gauge::ZeroOne, eps)?;
    let mut worst: f64 = 0.0;
    for l in 0..half_steps {
        q = evolve_layers(&q, l, 1, params, bc)?;
        w = walker_step(&w, params)?;
        let (wq, outside) = extract_walker(&q, bc, l + 1, Gauge::ZeroOne, eps)?;
        worst = worst.max(wq.distance(&w)).max(outside);
    }
    Ok(worst)
}

fn schedule_independence(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let n = cfg.sites("n", 10)?;
    let steps = cfg.usize("steps", 4)?;
    let schedules = cfg.usize("schedules", 50)?;
    let seed = cfg.u64("seed", 3)?;
    let bc = cfg.bc(BoundaryCondition::Periodic)?;
    cfg.finish()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..schedules {
        let st = PureState::random(n, &mut rng, Capacity::from_env())?;
        let p = GateParams::mass(
            rng.random_range(0.0..std::f64::consts::TAU),
            rng.random_range(-3.0..3.0),
            rng.random_range(0.01..1.0),
        );
        let sched = UpdateSchedule::random(n, 2 * steps, bc, &mut rng)?;
        let a = evolve_async(&st, &sched, &p, bc)?;
        let b = evolve(&st, steps, &p, bc, false)?.0;
        worst = worst.max(a.distance(&b));
    }
    let ok = verdict(
        out,
        "schedule independence",
        worst <= 1e-12,
        &format!("{schedules} schedules, max distance {worst:.2e}"),
    )?;
    conclude(&[ok], "schedule independence")
}

fn dirac_limit(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let m = cfg.f64("m", 1.0)?;
    let t = cfg.f64("t", 1.0)?;
    let sigma = cfg.f64("sigma", 1.0)?;
    let length = cfg.f64("box", 40.0)?;
    let phi = cfg.f64("phi", 0.0)?;
    let eps_list: Vec<f64> = cfg
        .string("eps_list", "0.1,0.05,0.025")
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| GqcaError::Config(format!("bad eps `{s}`")))
        })
        .collect::<Result<_>>()?;
    let profile = || gaussian_profile(sigma, 0.0, Complex::new(0.5, 0.0));
    let massive = convergence_study(profile(), length, m, phi, t, &eps_list)?;
    let massless = convergence_study(profile(), length, 0.0, phi, t, &eps_list)?;
    let mut csv = String::from("m,eps,grid_points,half_steps,error\n");
    for (mass, rows) in [(m, &massive), (0.0, &massless)] {
        for r in rows {
            csv.push_str(&format!(
                "{mass},{},{},{},{:e}\n",
                r.eps, r.grid_points, r.half_steps, r.error
            ));
        }
    }
    let out_key = cfg.optional("out");
    cfg.finish()?;
    match out_key {
        Some(p) => {
            std::fs::write(&p, csv.as_bytes())?;
            writeln!(out, "wrote {p}")?;
        }
        None => out.write_all(csv.as_bytes())?,
    }
    let ratios: Vec<f64> = massive
        .windows(2)
        .map(|w| w[0].error / w[1].error)
        .collect();
    let ok1 = verdict(
        out,
        "massive convergence",
        ratios.iter().all(|&r| r >= 1.5),
        &format!(
            "halving ratios {:?}",
            ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>()
        ),
    )?;
    let worst0 = massless.iter().map(|r| r.error).fold(0.0, f64::max);
    let ok2 = verdict(
        out,
        "massless transport",
        worst0 <= 1e-12,
        &format!("max error {worst0:.2e}"),
    )?;
    conclude(&[ok1, ok2], "Dirac limit")
}

fn invisible_pair(cfg: &ExperimentConfig, out: &mut dyn Write) -> Result<()> {
    let d = cfg.usize("d", 2)?;
    let nn = cfg.usize("N", 3)?;
    let n = cfg.sites("n", 24)?;
    let show = cfg.string("show", "no") == "yes";
    cfg.finish()?;
    let rep = invisible_pair_demo(n, d, nn)?;
    writeln!(out, "vacuum probes: {}", bits(&rep.vacuum_probe_values))?;
    writeln!(out, "pair probes:   {}", bits(&rep.pair_probe_values))?;
    writeln!(
        out,
        "fine vertices differing: {}",
        rep.differing_vertices.len()
    )?;
    if show {
        let overlay = Overlay {
            signals: true,
            probes: Some(rep.probes),
            path: None,
        };
        out.write_all(render_text(&rep.pair, &overlay).as_bytes())?;
    }
    let claim = if rep.resolvable {
        writeln!(
            out,
            "d >= N: the pair is resolvable and is seen: {}",
            !rep.probes_identical
        )?;
        true
    } else {
        verdict(
            out,
            "invisible pair",
            rep.probes_identical && rep.differences_in_strip,
            "probe sequences byte-identical",
        )?
    };
    let control = verdict(
        out,
        "single-wall control",
        rep.single_wall_detected,
        "probes read both values",
    )?;
    conclude(&[claim, control], "invisible pair")
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| char::from(b'0' + b)).collect()
}
