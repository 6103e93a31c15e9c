//! Classical RK4 on the method-of-lines systems of both formulations, and a
//! cost/accuracy/stability benchmark comparing them.
//!
//! Beam: `u̇ = v`, `v̇ = -(b/a)² u''''` on `2N` real unknowns.
//! Schrödinger: `ψ̇ = i(b/a) ψ''` on `N` complex unknowns.
//! Spatial derivatives are spectral in both; each right-hand side costs one
//! forward and one inverse FFT of length `N`.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::duality::{strain_velocity, wavefunction_from_state};
use crate::error::{Error, Result};
use crate::fields::{relative_max_error, relative_max_error_real, ComplexField, Field, Grid, PhysParams, RealField};
use crate::propagators::{propagate_beam, propagate_schrodinger, BeamState};
use crate::scenarios::{random_band_limited, random_spectrum, single_mode};

/// Growth of the monitored norm over its initial value that counts as blow-up.
pub const BLOW_UP_FACTOR: f64 = 10.0;

/// Steps between blow-up checks; the final state is always checked.
pub const MONITOR_INTERVAL: usize = 8;

/// Schema tag of serialized benchmark reports.
pub const BENCH_SCHEMA: &str = "beamwave.bench/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    BeamFirstOrderSystem,
    Schrodinger,
}

impl Formulation {
    pub const ALL: [Formulation; 2] = [Formulation::BeamFirstOrderSystem, Formulation::Schrodinger];

    pub fn name(self) -> &'static str {
        match self {
            Formulation::BeamFirstOrderSystem => "beam_first_order_system",
            Formulation::Schrodinger => "schrodinger",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub formulation: Formulation,
    pub dt: f64,
    pub t_final: f64,
    pub params: PhysParams,
}

impl IntegratorConfig {
    pub fn new(formulation: Formulation, dt: f64, t_final: f64, params: PhysParams) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter { name: "dt", reason: format!("must be positive, got {dt}") });
        }
        if !(t_final.is_finite() && t_final >= 0.0) {
            return Err(Error::InvalidParameter { name: "T", reason: format!("must be non-negative, got {t_final}") });
        }
        Ok(Self { formulation, dt, t_final, params })
    }
}

/// State advanced by the integrator.
#[derive(Debug, Clone, PartialEq)]
pub enum SteppedState {
    Beam(BeamState<RealField>),
    Wave(ComplexField),
}

impl SteppedState {
    pub fn formulation(&self) -> Formulation {
        match self {
            SteppedState::Beam(_) => Formulation::BeamFirstOrderSystem,
            SteppedState::Wave(_) => Formulation::Schrodinger,
        }
    }

    pub fn grid(&self) -> &Grid {
        match self {
            SteppedState::Beam(s) => s.grid(),
            SteppedState::Wave(psi) => psi.grid(),
        }
    }

    fn to_flat(&self) -> Vec<f64> {
        match self {
            SteppedState::Beam(s) => s.u.values().iter().chain(s.v.values()).copied().collect(),
            SteppedState::Wave(psi) => psi.values().iter().flat_map(|c| [c.re, c.im]).collect(),
        }
    }

    fn from_flat(formulation: Formulation, grid: &Grid, y: &[f64]) -> Result<Self> {
        let n = grid.len();
        Ok(match formulation {
            Formulation::BeamFirstOrderSystem => SteppedState::Beam(BeamState::new(
                RealField::new(grid, y[..n].to_vec())?,
                RealField::new(grid, y[n..].to_vec())?,
            )?),
            Formulation::Schrodinger => SteppedState::Wave(ComplexField::new(
                grid,
                y.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])).collect(),
            )?),
        })
    }

    /// The exact propagator applied to this state.
    pub fn exact(&self, t: f64, p: &PhysParams) -> Self {
        match self {
            SteppedState::Beam(s) => SteppedState::Beam(propagate_beam(s, t, p)),
            SteppedState::Wave(psi) => SteppedState::Wave(propagate_schrodinger(psi, t, p)),
        }
    }

    /// Relative max-norm distance to `reference`, worst over components.
    pub fn relative_error(&self, reference: &Self) -> Result<f64> {
        match (self, reference) {
            (SteppedState::Beam(a), SteppedState::Beam(b)) => {
                Ok(relative_max_error_real(&a.u, &b.u)?.max(relative_max_error_real(&a.v, &b.v)?))
            }
            (SteppedState::Wave(a), SteppedState::Wave(b)) => relative_max_error(a, b),
            _ => Err(Error::InvalidParameter { name: "reference", reason: "formulations differ".into() }),
        }
    }
}

/// Work done by one integration.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WorkCounts {
    pub steps: usize,
    pub rhs_evaluations: usize,
    pub fft_calls: usize,
    /// Real floating-point operations outside the FFTs.
    pub pointwise_flops: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integration {
    pub state: SteppedState,
    pub work: WorkCounts,
}

/// A semi-discrete system `ẏ = f(y)` on a flat real vector.
trait MolSystem {
    fn rhs(&mut self, y: &[f64], dy: &mut [f64]);
    /// Norm conserved by the exact dynamics, `‖(bγ, av)‖₂` or `‖ψ‖₂`.
    fn monitor(&mut self, y: &[f64]) -> f64;
    fn fft_calls(&self) -> usize;
    fn rhs_flops(&self) -> u64;
}

struct BeamSystem {
    grid: Grid,
    params: PhysParams,
    symbol: Vec<f64>,
    buf: Vec<Complex64>,
    ffts: usize,
}

impl BeamSystem {
    fn new(grid: &Grid, p: &PhysParams) -> Self {
        let c = p.ratio() * p.ratio();
        let symbol = grid.wavenumbers().iter().map(|k| -c * k.powi(4)).collect();
        Self { grid: grid.clone(), params: *p, symbol, buf: vec![Complex64::new(0.0, 0.0); grid.len()], ffts: 0 }
    }
}

impl MolSystem for BeamSystem {
    fn monitor(&mut self, y: &[f64]) -> f64 {
        let n = self.grid.len();
        let (u, v) = y.split_at(n);
        for (b, &x) in self.buf.iter_mut().zip(u) {
            *b = Complex64::new(x, 0.0);
        }
        self.grid.forward_in_place(&mut self.buf);
        for (slot, b) in self.buf.iter_mut().enumerate() {
            let k = self.grid.wavenumber(slot);
            *b *= -self.params.b() * k * k;
        }
        self.grid.inverse_in_place(&mut self.buf);
        let a = self.params.a();
        let sum: f64 = self.buf.iter().zip(v).map(|(g, &w)| g.re * g.re + a * a * w * w).sum();
        sum.sqrt()
    }

    fn rhs(&mut self, y: &[f64], dy: &mut [f64]) {
        let n = self.grid.len();
        let (u, v) = y.split_at(n);
        let (du, dv) = dy.split_at_mut(n);
        du.copy_from_slice(v);
        for (b, &x) in self.buf.iter_mut().zip(u) {
            *b = Complex64::new(x, 0.0);
        }
        self.grid.forward_in_place(&mut self.buf);
        for (b, &s) in self.buf.iter_mut().zip(&self.symbol) {
            *b *= s;
        }
        self.grid.inverse_in_place(&mut self.buf);
        for (d, b) in dv.iter_mut().zip(&self.buf) {
            *d = b.re;
        }
        self.ffts += 2;
    }

    fn fft_calls(&self) -> usize {
        self.ffts
    }

    fn rhs_flops(&self) -> u64 {
        // 1/N scaling and symbol product, two real multiplies per complex entry each
        4 * self.grid.len() as u64
    }
}

struct WaveSystem {
    grid: Grid,
    frequency: Vec<f64>,
    buf: Vec<Complex64>,
    ffts: usize,
}

impl WaveSystem {
    fn new(grid: &Grid, p: &PhysParams) -> Self {
        let frequency = grid.wavenumbers().iter().map(|k| p.ratio() * k * k).collect();
        Self { grid: grid.clone(), frequency, buf: vec![Complex64::new(0.0, 0.0); grid.len()], ffts: 0 }
    }
}

impl MolSystem for WaveSystem {
    fn monitor(&mut self, y: &[f64]) -> f64 {
        l2(y)
    }

    fn rhs(&mut self, y: &[f64], dy: &mut [f64]) {
        for (b, c) in self.buf.iter_mut().zip(y.chunks_exact(2)) {
            *b = Complex64::new(c[0], c[1]);
        }
        self.grid.forward_in_place(&mut self.buf);
        // i(b/a)(ik)² = -iΩ_k
        for (b, &w) in self.buf.iter_mut().zip(&self.frequency) {
            *b = Complex64::new(w * b.im, -w * b.re);
        }
        self.grid.inverse_in_place(&mut self.buf);
        for (d, b) in dy.chunks_exact_mut(2).zip(&self.buf) {
            d[0] = b.re;
            d[1] = b.im;
        }
        self.ffts += 2;
    }

    fn fft_calls(&self) -> usize {
        self.ffts
    }

    fn rhs_flops(&self) -> u64 {
        4 * self.grid.len() as u64
    }
}

fn l2(y: &[f64]) -> f64 {
    y.iter().map(|x| x * x).sum::<f64>().sqrt()
}

struct Rk4Buffers {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

impl Rk4Buffers {
    fn new(m: usize) -> Self {
        Self { k1: vec![0.0; m], k2: vec![0.0; m], k3: vec![0.0; m], k4: vec![0.0; m], stage: vec![0.0; m] }
    }
}

/// One classical RK4 step. Returns the pointwise flops spent outside the
/// right-hand sides.
fn rk4_step(sys: &mut dyn MolSystem, y: &mut [f64], h: f64, b: &mut Rk4Buffers) -> u64 {
    let m = y.len();
    sys.rhs(y, &mut b.k1);
    for i in 0..m {
        b.stage[i] = y[i] + 0.5 * h * b.k1[i];
    }
    sys.rhs(&b.stage, &mut b.k2);
    for i in 0..m {
        b.stage[i] = y[i] + 0.5 * h * b.k2[i];
    }
    sys.rhs(&b.stage, &mut b.k3);
    for i in 0..m {
        b.stage[i] = y[i] + h * b.k3[i];
    }
    sys.rhs(&b.stage, &mut b.k4);
    let w = h / 6.0;
    for i in 0..m {
        y[i] += w * (b.k1[i] + 2.0 * (b.k2[i] + b.k3[i]) + b.k4[i]);
    }
    // three stage updates at 2 flops, final combination at 6 flops
    12 * m as u64
}

/// Advances `initial` to `cfg.t_final` with step `cfg.dt`, finishing with one
/// exact partial step when `T` is not a multiple of `dt`.
///
/// Every [`MONITOR_INTERVAL`] steps the conserved norm (`‖(bγ, av)‖₂` for the
/// beam, `‖ψ‖₂` for the wave function) is compared with its initial value;
/// growth beyond [`BLOW_UP_FACTOR`] fails with [`Error::BlowUp`]. Monitoring
/// is not included in the work counts.
pub fn rk4_integrate(cfg: &IntegratorConfig, initial: &SteppedState) -> Result<Integration> {
    if initial.formulation() != cfg.formulation {
        return Err(Error::InvalidParameter {
            name: "formulation",
            reason: format!("config is {} but data is {}", cfg.formulation.name(), initial.formulation().name()),
        });
    }
    let grid = initial.grid().clone();
    let mut sys: Box<dyn MolSystem> = match cfg.formulation {
        Formulation::BeamFirstOrderSystem => Box::new(BeamSystem::new(&grid, &cfg.params)),
        Formulation::Schrodinger => Box::new(WaveSystem::new(&grid, &cfg.params)),
    };
    let mut y = initial.to_flat();
    let mut bufs = Rk4Buffers::new(y.len());
    let norm0 = sys.monitor(&y);

    let full_steps = (cfg.t_final / cfg.dt).floor() as usize;
    let remainder = cfg.t_final - full_steps as f64 * cfg.dt;
    let mut steps: Vec<f64> = vec![cfg.dt; full_steps];
    if remainder > 1e-12 * cfg.dt {
        steps.push(remainder);
    }

    let mut work = WorkCounts::default();
    let mut time = 0.0;
    let total = steps.len();
    for (i, h) in steps.into_iter().enumerate() {
        work.pointwise_flops += rk4_step(sys.as_mut(), &mut y, h, &mut bufs) + 4 * sys.rhs_flops();
        work.steps += 1;
        work.rhs_evaluations += 4;
        time += h;
        if (i + 1) % MONITOR_INTERVAL != 0 && i + 1 != total {
            continue;
        }
        let norm = sys.monitor(&y);
        if !norm.is_finite() || norm > BLOW_UP_FACTOR * norm0 {
            let growth = if norm0 > 0.0 { norm / norm0 } else { f64::INFINITY };
            return Err(Error::BlowUp { time, growth });
        }
    }
    work.fft_calls = sys.fft_calls();
    if y.iter().any(|x| !x.is_finite()) {
        return Err(Error::BlowUp { time, growth: f64::INFINITY });
    }
    Ok(Integration { state: SteppedState::from_flat(cfg.formulation, &grid, &y)?, work })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points");
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Fixed real field exciting every mode, the Nyquist mode included.
pub fn probe_state(grid: &Grid) -> BeamState<RealField> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut coeffs = random_spectrum(&mut rng, grid, 1.0);
    let nyquist: f64 = StandardNormal.sample(&mut rng);
    coeffs[grid.nyquist_slot()] = Complex64::new(nyquist, 0.0);
    let u = RealField::from_spectrum(grid, &coeffs).expect("Hermitian probe spectrum");
    BeamState { u, v: RealField::zeros(grid) }
}

/// Initial data of one formulation corresponding to a real beam state.
pub fn stepped_initial(formulation: Formulation, beam: &BeamState<RealField>, p: &PhysParams) -> SteppedState {
    match formulation {
        Formulation::BeamFirstOrderSystem => SteppedState::Beam(beam.clone()),
        Formulation::Schrodinger => SteppedState::Wave(wavefunction_from_state(&strain_velocity(beam), p)),
    }
}

/// Empirical largest stable step: the probe state is advanced for
/// `probe_steps` steps and a step counts as stable when no blow-up occurs.
/// The bracket is bisected until `hi/lo ≤ 1 + rel_accuracy`; the geometric
/// midpoint is returned.
pub fn stability_threshold(
    formulation: Formulation,
    grid: &Grid,
    p: &PhysParams,
    probe_steps: usize,
    rel_accuracy: f64,
) -> Result<f64> {
    if probe_steps == 0 || !(rel_accuracy > 0.0) {
        return Err(Error::InvalidParameter {
            name: "probe",
            reason: "need probe_steps > 0 and rel_accuracy > 0".into(),
        });
    }
    let initial = stepped_initial(formulation, &probe_state(grid), p);
    let stable = |dt: f64| -> Result<bool> {
        let cfg = IntegratorConfig::new(formulation, dt, probe_steps as f64 * dt, *p)?;
        match rk4_integrate(&cfg, &initial) {
            Ok(_) => Ok(true),
            Err(Error::BlowUp { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    };
    let omega_max = p.ratio() * grid.max_wavenumber().powi(2);
    let mut lo = 1.0 / omega_max;
    let mut tries = 0;
    while !stable(lo)? {
        lo *= 0.5;
        tries += 1;
        if tries > 60 {
            return Err(Error::InvalidParameter { name: "probe", reason: "no stable step found".into() });
        }
    }
    let mut hi = 2.0 * lo;
    while stable(hi)? {
        lo = hi;
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::InvalidParameter { name: "probe", reason: "no unstable step found".into() });
        }
    }
    while hi / lo > 1.0 + rel_accuracy {
        let mid = (lo * hi).sqrt();
        if stable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Initial data family for the benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BenchScenario {
    Random { seed: u64, kmax_fraction: f64 },
    SingleMode { mode: i64, amplitude: f64 },
    Zero,
}

impl BenchScenario {
    pub fn beam_state(&self, grid: &Grid) -> Result<BeamState<RealField>> {
        match *self {
            BenchScenario::Random { seed, kmax_fraction } => random_band_limited(seed, kmax_fraction, grid, false),
            BenchScenario::SingleMode { mode, amplitude } => single_mode(grid, mode, amplitude),
            BenchScenario::Zero => Ok(BeamState::zeros(grid)),
        }
    }
}

/// How the benchmark picks its step and horizon.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DtPolicy {
    /// Runs use `safety · min(dt*_beam, dt*_schrodinger)`.
    pub safety: f64,
    pub t_final: f64,
    pub probe_steps: usize,
    pub rel_accuracy: f64,
}

impl Default for DtPolicy {
    fn default() -> Self {
        Self { safety: 0.5, t_final: 0.01, probe_steps: 2000, rel_accuracy: 0.05 }
    }
}

/// Per-step cost of one formulation at one grid size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperationCounts {
    pub real_unknowns: usize,
    pub fft_length: usize,
    pub fft_calls_per_step: f64,
    /// `5 N log2 N` per complex FFT.
    pub fft_flops_per_step: f64,
    pub pointwise_flops_per_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub formulation: Formulation,
    pub n: usize,
    pub dt: f64,
    pub t_final: f64,
    pub steps: usize,
    pub wall_ms: f64,
    /// Relative max-norm error against the exact propagator; `None` after blow-up.
    pub error: Option<f64>,
    pub stable: bool,
    pub blow_up_time: Option<f64>,
    pub ops: OperationCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityPoint {
    pub formulation: Formulation,
    pub n: usize,
    pub dt_star: f64,
    /// Largest modal frequency `(b/a)(πN/L)²`, for reference.
    pub omega_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub formulation: Formulation,
    /// Slope of `ln dt*` against `ln N`.
    pub exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    pub n: usize,
    pub dt: f64,
    /// Relative max-norm distance between the mapped beam result and the
    /// Schrödinger result; `None` when either run blew up.
    pub max_deviation: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema: String,
    pub params: PhysParams,
    pub length: f64,
    pub scenario: BenchScenario,
    pub policy: DtPolicy,
    pub runs: Vec<BenchRun>,
    pub stability: Vec<StabilityPoint>,
    pub exponents: Vec<ExponentFit>,
    pub correspondence: Vec<Correspondence>,
}

fn timed_run(
    formulation: Formulation,
    beam: &BeamState<RealField>,
    dt: f64,
    policy: &DtPolicy,
    p: &PhysParams,
) -> Result<(BenchRun, Option<SteppedState>)> {
    let grid = beam.grid();
    let n = grid.len();
    let initial = stepped_initial(formulation, beam, p);
    let cfg = IntegratorConfig::new(formulation, dt, policy.t_final, *p)?;
    let start = Instant::now();
    let outcome = rk4_integrate(&cfg, &initial);
    let wall_ms = (start.elapsed().as_secs_f64() * 1e3).max(f64::MIN_POSITIVE);
    let fft_flops = 5.0 * n as f64 * (n as f64).log2();
    let (error, stable, blow_up_time, work, state) = match outcome {
        Ok(done) => {
            let exact = initial.exact(policy.t_final, p);
            let err = done.state.relative_error(&exact)?;
            (Some(err), true, None, done.work, Some(done.state))
        }
        Err(Error::BlowUp { time, .. }) => (None, false, Some(time), WorkCounts::default(), None),
        Err(e) => return Err(e),
    };
    let per_step = |x: f64| if work.steps > 0 { x / work.steps as f64 } else { 0.0 };
    let ops = OperationCounts {
        real_unknowns: 2 * n,
        fft_length: n,
        fft_calls_per_step: per_step(work.fft_calls as f64),
        fft_flops_per_step: per_step(work.fft_calls as f64 * fft_flops),
        pointwise_flops_per_step: per_step(work.pointwise_flops as f64),
    };
    let run = BenchRun {
        formulation,
        n,
        dt,
        t_final: policy.t_final,
        steps: work.steps,
        wall_ms,
        error,
        stable,
        blow_up_time,
        ops,
    };
    Ok((run, state))
}

/// Runs both formulations on every grid size. Timed runs execute one at a
/// time; blow-ups are recorded in the report, not raised.
pub fn benchmark(
    scenario: &BenchScenario,
    length: f64,
    grid_sizes: &[usize],
    policy: &DtPolicy,
    p: &PhysParams,
) -> Result<BenchReport> {
    if grid_sizes.is_empty() {
        return Err(Error::InvalidParameter { name: "grid_sizes", reason: "at least one N is required".into() });
    }
    if !(policy.safety > 0.0 && policy.t_final.is_finite() && policy.t_final >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "policy",
            reason: "safety must be positive, T non-negative".into(),
        });
    }
    let mut report = BenchReport {
        schema: BENCH_SCHEMA.to_string(),
        params: *p,
        length,
        scenario: *scenario,
        policy: *policy,
        runs: Vec::new(),
        stability: Vec::new(),
        exponents: Vec::new(),
        correspondence: Vec::new(),
    };
    for &n in grid_sizes {
        let grid = Grid::new(length, n)?;
        let omega_max = p.ratio() * grid.max_wavenumber().powi(2);
        let mut dt_min = f64::INFINITY;
        for formulation in Formulation::ALL {
            let dt_star = stability_threshold(formulation, &grid, p, policy.probe_steps, policy.rel_accuracy)?;
            dt_min = dt_min.min(dt_star);
            report.stability.push(StabilityPoint { formulation, n, dt_star, omega_max });
        }
        let dt = policy.safety * dt_min;
        let beam = scenario.beam_state(&grid)?;
        let (beam_run, beam_final) = timed_run(Formulation::BeamFirstOrderSystem, &beam, dt, policy, p)?;
        let (wave_run, wave_final) = timed_run(Formulation::Schrodinger, &beam, dt, policy, p)?;
        let max_deviation = match (beam_final, wave_final) {
            (Some(SteppedState::Beam(b)), Some(SteppedState::Wave(psi))) => {
                let mapped = wavefunction_from_state(&strain_velocity(&b), p);
                Some(relative_max_error(&mapped, &psi)?)
            }
            _ => None,
        };
        report.runs.push(beam_run);
        report.runs.push(wave_run);
        report.correspondence.push(Correspondence { n, dt, max_deviation });
    }
    if grid_sizes.len() >= 2 {
        for formulation in Formulation::ALL {
            let points: Vec<&StabilityPoint> =
                report.stability.iter().filter(|s| s.formulation == formulation).collect();
            let ns: Vec<f64> = points.iter().map(|s| s.n as f64).collect();
            let dts: Vec<f64> = points.iter().map(|s| s.dt_star).collect();
            report.exponents.push(ExponentFit { formulation, exponent: fit_loglog_slope(&ns, &dts) });
        }
    }
    Ok(report)
}
