//! One function per subcommand. Each returns a table whose rows are ordered by
//! scenario and state regardless of how the work was scheduled.

use crate::error::CliError;
use crate::scenario::Loaded;
use crate::table::{num, opt, Table};
use clap::ValueEnum;
use occlusion_core::geometry::point_segment;
use occlusion_core::corner::{BarrierTrajectory, PiecewiseControl, PolarState};
use occlusion_core::{
    barrier_membership, barrier_mimic_simulate, boundary_limit_value, boundary_profile, build_setup,
    classify_boundary, corner_bounds, discrete_value, extract_front, s_corner, s_of_t, solve_sweep,
    t0_corner, value_bounds_kconst, value_bounds_smooth, value_by_representation, value_corner, write_field,
    CornerBound, Error, FrontSlice, GameState, Obstacle, ProfileFamily, ProfileRegime, Side, Speeds,
    SweepField,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

fn flags(list: &[String]) -> String {
    list.join(";")
}

fn err_flag(e: impl std::fmt::Display) -> String {
    format!("error:{e}")
}

pub fn classify(scenarios: &[Loaded]) -> Table {
    let mut t = Table::new(&[
        "scenario", "state", "classification", "margin", "gap", "d_e", "d_p", "tangency_x", "tangency_y", "flags",
    ]);
    for sc in scenarios {
        let p = &sc.spec.params;
        let rows: Vec<Vec<String>> = sc
            .states
            .par_iter()
            .map(|(id, st)| match classify_boundary(st, &sc.obstacle, &sc.speeds, p.boundary_tol, p.interface_tol) {
                Ok(c) => vec![
                    sc.id().into(),
                    id.clone(),
                    c.label.as_str().into(),
                    num(c.margin),
                    num(c.gap),
                    num(c.d_e),
                    num(c.d_p),
                    num(c.tangency.x),
                    num(c.tangency.y),
                    String::new(),
                ],
                Err(e) => {
                    let mut r = vec![sc.id().into(), id.clone(), "undetermined".into()];
                    r.extend(std::iter::repeat_n(String::new(), 6));
                    r.push(err_flag(e));
                    r
                }
            })
            .collect();
        t.rows.extend(rows);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Rep,
    Bounds,
    Corner,
    Oracle,
    Sweep,
    All,
}

const VALUE_HEADER: [&str; 22] = [
    "scenario",
    "state",
    "classification",
    "s0",
    "d_e",
    "d_p",
    "d_star",
    "d_star_kappa",
    "c_star",
    "c_ep",
    "t0",
    "t0_bar",
    "v_rep",
    "lower",
    "upper",
    "oracle",
    "sweep",
    "rel_oracle",
    "rel_sweep",
    "sandwich_violations",
    "barrier",
    "flags",
];

#[derive(Default)]
struct ValueRow {
    classification: String,
    s0: Option<f64>,
    d_e: Option<f64>,
    d_p: Option<f64>,
    d_star: Option<f64>,
    d_star_kappa: Option<f64>,
    c_star: Option<f64>,
    c_ep: Option<f64>,
    t0: Option<f64>,
    t0_bar: Option<f64>,
    v_rep: Option<f64>,
    /// The representation was evaluated (a missing value then means "at least t0").
    rep_done: bool,
    lower: Option<f64>,
    upper: Option<f64>,
    upper_valid: bool,
    oracle: Option<f64>,
    sweep: Option<f64>,
    barrier: Option<bool>,
    flags: Vec<String>,
}

impl ValueRow {
    fn violations(&self) -> Option<usize> {
        if !self.rep_done || (self.lower.is_none() && self.upper.is_none()) {
            return None;
        }
        let v = self.v_rep.unwrap_or(f64::INFINITY);
        let low = self.lower.is_some_and(|l| l > v + 1e-9) as usize;
        let up = (self.upper_valid && self.upper.is_some_and(|u| v > u + 1e-9)) as usize;
        Some(low + up)
    }

    fn cells(&self, scenario: &str, state: &str, dt: f64) -> Vec<String> {
        let rel = |other: Option<f64>, floor: f64| match (self.v_rep, other) {
            (Some(v), Some(o)) => num((v - o).abs() / v.max(floor).max(f64::MIN_POSITIVE)),
            _ => String::new(),
        };
        vec![
            scenario.into(),
            state.into(),
            self.classification.clone(),
            opt(self.s0),
            opt(self.d_e),
            opt(self.d_p),
            opt(self.d_star),
            opt(self.d_star_kappa),
            opt(self.c_star),
            opt(self.c_ep),
            opt(self.t0),
            opt(self.t0_bar),
            opt(self.v_rep),
            opt(self.lower),
            opt(self.upper),
            opt(self.oracle),
            opt(self.sweep),
            rel(self.oracle, dt),
            rel(self.sweep, 0.0),
            self.violations().map(|v| v.to_string()).unwrap_or_default(),
            self.barrier.map(|b| b.to_string()).unwrap_or_default(),
            flags(&self.flags),
        ]
    }
}

fn is_smooth(obs: &Obstacle) -> bool {
    !matches!(obs, Obstacle::Polygon { .. })
}

fn smooth_part(sc: &Loaded, st: &GameState, method: Method, row: &mut ValueRow) {
    let setup = match build_setup(st, &sc.obstacle, &sc.speeds) {
        Ok(s) => s,
        Err(e) => return row.flags.push(err_flag(e)),
    };
    row.s0 = Some(setup.s0);
    row.d_e = Some(setup.d_e);
    row.d_p = Some(setup.d_p);
    row.d_star = Some(setup.d_star());
    row.d_star_kappa = Some(setup.d_star_kappa());
    row.c_star = Some(setup.c_star());
    row.c_ep = Some(setup.c_ep());
    row.t0 = Some(setup.t0);
    row.t0_bar = Some(setup.t0_bar);
    if matches!(method, Method::Rep | Method::All) {
        match value_by_representation(&setup) {
            Ok(v) => {
                row.rep_done = true;
                row.v_rep = v;
                if v.is_none() {
                    row.flags.push("value>=t0".into());
                }
            }
            Err(e) => row.flags.push(err_flag(e)),
        }
    }
    if matches!(method, Method::Bounds | Method::All) {
        let p = &sc.spec.params;
        match value_bounds_kconst(&setup, p.delta) {
            Ok(b) => {
                row.lower = Some(b.lower);
                row.upper = Some(b.upper);
                row.upper_valid = b.upper_valid;
                if b.upper_valid {
                    row.flags.push("upper_valid".into());
                }
            }
            Err(e) => row.flags.push(err_flag(e)),
        }
        if p.eps > 0.0 {
            if let Ok(b) = value_bounds_smooth(&setup, p.delta, p.eps) {
                if b.hypothesis_ok {
                    row.flags.push("curvature_hypothesis".into());
                }
            }
        }
        if method == Method::Bounds {
            // The violation count needs the value itself.
            if let Ok(v) = value_by_representation(&setup) {
                row.rep_done = true;
                row.v_rep = v;
            }
        }
    }
}

fn polar_for(sc: &Loaded, st: &GameState) -> Result<PolarState, String> {
    let spec = sc.corner_for(st).ok_or_else(|| "no corner applies to this state".to_string())?;
    occlusion_core::corner::to_polar(st, &spec).map_err(|e| e.to_string())
}

fn corner_part(sc: &Loaded, st: &GameState, method: Method, row: &mut ValueRow) {
    let ps = match polar_for(sc, st) {
        Ok(p) => p,
        Err(e) => return row.flags.push(err_flag(e)),
    };
    let sp = &sc.speeds;
    let obs = sc.obstacle.as_polygon().map(|_| &sc.obstacle);
    let t0 = match t0_corner(&ps, sp, obs) {
        Ok(t) => t,
        Err(e) => return row.flags.push(err_flag(e)),
    };
    row.s0 = Some(PI - ps.gap());
    row.d_e = Some(ps.d_e);
    row.d_p = Some(ps.d_p);
    row.d_star = Some((sp.pursuer / ps.d_p - sp.evader / ps.d_e).max(0.0));
    row.t0 = Some(t0);
    row.barrier = Some(barrier_membership(&ps, sp, 1e-9));
    if matches!(method, Method::Rep | Method::Corner | Method::All | Method::Bounds) {
        match value_corner(&ps, sp, t0) {
            Ok(v) => {
                row.rep_done = true;
                row.v_rep = v;
                if v.is_none() {
                    row.flags.push("value>=t0".into());
                }
            }
            Err(e) => row.flags.push(err_flag(e)),
        }
    }
    if matches!(method, Method::Bounds | Method::Corner | Method::All) {
        match corner_bounds(&ps, sp, t0) {
            CornerBound::Upper(b) => {
                row.upper = Some(b);
                row.upper_valid = true;
                row.flags.push("upper_valid".into());
            }
            CornerBound::AtLeastHorizon => {
                row.lower = Some(t0);
                row.flags.push("lower_is_t0".into());
            }
            CornerBound::NotApplicable => row.flags.push("bound_not_applicable".into()),
        }
    }
}

fn value_row(sc: &Loaded, st: &GameState, method: Method, field: Option<&SweepField>) -> ValueRow {
    let p = &sc.spec.params;
    let classification = match classify_boundary(st, &sc.obstacle, &sc.speeds, p.boundary_tol, p.interface_tol) {
        Ok(c) => c.label.as_str().into(),
        Err(_) => "undetermined".into(),
    };
    let mut row = ValueRow { classification, ..ValueRow::default() };
    let wants_analysis = !matches!(method, Method::Oracle | Method::Sweep);
    if wants_analysis || method == Method::All {
        if method == Method::Corner || !is_smooth(&sc.obstacle) {
            corner_part(sc, st, method, &mut row);
        } else {
            smooth_part(sc, st, method, &mut row);
        }
    }
    if matches!(method, Method::Oracle | Method::All) {
        match discrete_value(st, &sc.obstacle, &sc.speeds, &p.oracle.config()) {
            Ok(v) => {
                row.oracle = v;
                if v.is_none() {
                    row.flags.push("oracle>=horizon".into());
                }
            }
            Err(e) => row.flags.push(err_flag(e)),
        }
    }
    if let Some(f) = field {
        row.sweep = f.sample(st);
    }
    row
}

/// Value table. Returns the invariant violations found alongside the table.
pub fn value(scenarios: &[Loaded], method: Method) -> Result<(Table, Vec<String>), CliError> {
    let mut t = Table::new(&VALUE_HEADER);
    let mut problems = Vec::new();
    for sc in scenarios {
        let field = if matches!(method, Method::Sweep | Method::All) && !sc.states.is_empty() {
            let cfg = sc.sweep_config(None, None)?;
            let f = solve_sweep(&sc.obstacle, &sc.speeds, &cfg)?;
            if !f.converged {
                problems.push(format!("{}: sweep stopped after {} cycles", sc.id(), f.cycles));
            }
            Some(f)
        } else {
            None
        };
        let rows: Vec<(String, ValueRow)> = sc
            .states
            .par_iter()
            .map(|(id, st)| (id.clone(), value_row(sc, st, method, field.as_ref())))
            .collect();
        for (id, r) in rows {
            if r.violations().unwrap_or(0) > 0 {
                problems.push(format!("{}/{id}: value outside its proven bounds", sc.id()));
            }
            t.rows.push(r.cells(sc.id(), &id, sc.spec.params.oracle.dt));
        }
    }
    Ok((t, problems))
}

pub fn scurve(scenarios: &[Loaded], samples: usize) -> Result<Table, CliError> {
    if samples < 2 {
        return Err(CliError::Usage("--t-samples must be at least 2".into()));
    }
    let mut t = Table::new(&["scenario", "state", "kind", "t", "s", "flags"]);
    for sc in scenarios {
        let rows: Vec<Vec<Vec<String>>> = sc
            .states
            .par_iter()
            .map(|(id, st)| {
                let base = |kind: &str| vec![sc.id().to_string(), id.clone(), kind.to_string()];
                let fail = |kind: &str, e: String| {
                    let mut r = base(kind);
                    r.extend([String::new(), String::new(), err_flag(e)]);
                    vec![r]
                };
                let curve = |kind: &str, t0: f64, f: &dyn Fn(f64) -> Option<f64>| {
                    (0..samples)
                        .map(|k| {
                            let tk = t0 * k as f64 / (samples - 1) as f64;
                            let mut r = base(kind);
                            r.extend([num(tk), opt(f(tk)), String::new()]);
                            r
                        })
                        .collect::<Vec<_>>()
                };
                if is_smooth(&sc.obstacle) {
                    match build_setup(st, &sc.obstacle, &sc.speeds) {
                        Ok(s) => curve("smooth", s.t0, &|tk| s_of_t(&s, tk).ok()),
                        Err(e) => fail("smooth", e.to_string()),
                    }
                } else {
                    let ps = match polar_for(sc, st) {
                        Ok(p) => p,
                        Err(e) => return fail("corner", e),
                    };
                    match t0_corner(&ps, &sc.speeds, Some(&sc.obstacle)) {
                        Ok(t0) => curve("corner", t0, &|tk| s_corner(tk, &ps, &sc.speeds).ok()),
                        Err(e) => fail("corner", e.to_string()),
                    }
                }
            })
            .collect();
        t.rows.extend(rows.into_iter().flatten());
    }
    Ok(t)
}

/// `lo:hi:n` (linear) or `lo:hi:n:log`, or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("bad grid {spec:?}; use lo:hi:n[:log] or a comma list"));
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let n: usize = parts[2].parse().map_err(|_| bad())?;
        let log = match parts.get(3) {
            None => false,
            Some(&"log") => true,
            _ => return Err(bad()),
        };
        if n < 1 || (log && !(lo > 0.0 && hi > 0.0)) {
            return Err(bad());
        }
        let u = |k: usize| if n == 1 { 0.0 } else { k as f64 / (n - 1) as f64 };
        Ok((0..n)
            .map(|k| if log { lo * (hi / lo).powf(u(k)) } else { lo + (hi - lo) * u(k) })
            .collect())
    } else {
        spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
    }
}

const PROFILE_HEADER: [&str; 8] = ["scenario", "state", "d_star", "v", "lower", "upper", "regime", "flags"];

fn smooth_profile(sc: &Loaded, st: &GameState, grid: &[f64]) -> Vec<[String; 6]> {
    let p = &sc.spec.params;
    let c = match classify_boundary(st, &sc.obstacle, &sc.speeds, f64::INFINITY, p.interface_tol) {
        Ok(c) => c,
        Err(e) => return grid.iter().map(|&d| [num(d), String::new(), String::new(), String::new(), String::new(), err_flag(&e)]).collect(),
    };
    // Tangent configuration through the state's closest obstacle point: the
    // line of sight is slid onto the obstacle keeping both distances.
    let x = c.tangency;
    let mut u = st.pursuer - st.evader;
    if c.gap > 0.0 {
        let (_, w) = point_segment(x, st.evader, st.pursuer);
        let n = (st.evader + u * w - x).normalized();
        u = u - n * u.dot(n);
    }
    let u = u.normalized();
    let base = GameState::new(x - u * c.d_e, x + u * c.d_p);
    let ge = sc.speeds.evader;
    grid.iter()
        .map(|&ds| {
            let blank = || String::new();
            let gp = c.d_p * (ge / c.d_e + ds);
            let sp = match Speeds::new(ge, gp) {
                Ok(s) => s,
                Err(e) => return [num(ds), blank(), blank(), blank(), blank(), err_flag(e)],
            };
            if ds <= 0.0 {
                return [num(ds), num(0.0), blank(), blank(), "usable".into(), String::new()];
            }
            let setup = match build_setup(&base, &sc.obstacle, &sp) {
                Ok(s) => s,
                Err(e) => return [num(ds), blank(), blank(), blank(), blank(), err_flag(e)],
            };
            let v = boundary_limit_value(&setup).ok().flatten();
            let fam = ProfileFamily {
                d_e: setup.d_e,
                d_p: setup.d_p,
                speeds: sp,
                kappa0: setup.kappa0(),
                kappa_top: setup.kappa0() + setup.half_length() * setup.lipschitz(),
                t0_bar: setup.t0_bar,
                d_star: setup.d_star(),
            };
            let vflag = if v.is_none() { "value>=t0".to_string() } else { String::new() };
            match boundary_profile(&fam) {
                Ok(s) => {
                    let regime = match s.regime {
                        ProfileRegime::Sharp => "sharp",
                        ProfileRegime::Bracketed => "bracketed",
                    };
                    [num(ds), opt(v), num(s.slope_low * fam.d_star), num(s.slope_high * fam.d_star), regime.into(), vflag]
                }
                Err(_) => [num(ds), opt(v), blank(), blank(), "out_of_range".into(), vflag],
            }
        })
        .collect()
}

fn corner_profile(sc: &Loaded, st: &GameState, grid: &[f64]) -> Vec<[String; 6]> {
    let sp = &sc.speeds;
    let blank = String::new;
    let ps = match polar_for(sc, st) {
        Ok(p) => p,
        Err(e) => return grid.iter().map(|&d| [num(d), blank(), blank(), blank(), blank(), err_flag(&e)]).collect(),
    };
    grid.iter()
        .map(|&ds| {
            // Move the evader along its ray so that speed_P / d_P - speed_E / d_E = ds.
            let denom = sp.pursuer / ps.d_p - ds;
            if !(denom > 0.0) {
                return [num(ds), blank(), blank(), blank(), blank(), err_flag("no evader radius for this d*")];
            }
            let q = PolarState { d_e: sp.evader / denom, ..ps };
            let t0 = match t0_corner(&q, sp, Some(&sc.obstacle)) {
                Ok(t) => t,
                Err(e) => return [num(ds), blank(), blank(), blank(), blank(), err_flag(e)],
            };
            let v = value_corner(&q, sp, t0).ok().flatten();
            let (lower, upper, regime) = match corner_bounds(&q, sp, t0) {
                CornerBound::Upper(b) => (blank(), num(b), "usable"),
                CornerBound::AtLeastHorizon => (num(t0), blank(), if ds == 0.0 { "barrier" } else { "non_usable" }),
                CornerBound::NotApplicable => (blank(), blank(), "usable"),
            };
            let vflag = if v.is_none() { "value>=t0".to_string() } else { String::new() };
            [num(ds), opt(v), lower, upper, regime.into(), vflag]
        })
        .collect()
}

pub fn profile(scenarios: &[Loaded], grid_spec: &str) -> Result<Table, CliError> {
    let grid = parse_grid(grid_spec)?;
    let mut t = Table::new(&PROFILE_HEADER);
    for sc in scenarios {
        let rows: Vec<(String, Vec<[String; 6]>)> = sc
            .states
            .par_iter()
            .map(|(id, st)| {
                let r = if is_smooth(&sc.obstacle) { smooth_profile(sc, st, &grid) } else { corner_profile(sc, st, &grid) };
                (id.clone(), r)
            })
            .collect();
        for (id, rs) in rows {
            for r in rs {
                let mut row = vec![sc.id().to_string(), id.clone()];
                row.extend(r);
                t.rows.push(row);
            }
        }
    }
    Ok(t)
}

/// Control of the non-defending player in the barrier simulation.
#[derive(Debug, Clone)]
pub enum Opponent {
    Constant(f64, f64),
    /// Piecewise-constant random controls with this many pieces.
    Random(usize),
}

impl std::str::FromStr for Opponent {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("bad opponent {s:?}; use radial, angular, const:R,A or random:K");
        match s {
            "radial" => return Ok(Opponent::Constant(1.0, 0.0)),
            "angular" => return Ok(Opponent::Constant(0.0, 1.0)),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("const:") {
            let (r, a) = rest.split_once(',').ok_or_else(bad)?;
            let (r, a): (f64, f64) = (r.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?);
            if r.hypot(a) > 1.0 + 1e-12 {
                return Err("opponent control must have norm at most 1".into());
            }
            return Ok(Opponent::Constant(r, a));
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let k: usize = rest.parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            return Ok(Opponent::Random(k));
        }
        Err(bad())
    }
}

impl Opponent {
    fn control(&self, horizon: f64, seed: u64) -> PiecewiseControl {
        match *self {
            Opponent::Constant(r, a) => PiecewiseControl { horizon, pieces: vec![(r, a)] },
            Opponent::Random(k) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let pieces = (0..k)
                    .map(|_| {
                        let phi = rng.gen_range(0.0..2.0 * PI);
                        let rad = rng.gen_range(0.0f64..1.0).sqrt();
                        (rad * phi.cos(), rad * phi.sin())
                    })
                    .collect();
                PiecewiseControl { horizon, pieces }
            }
        }
    }
}

pub struct BarrierSummary {
    pub scenario: String,
    pub state: String,
    pub max_drift: f64,
    pub dt: f64,
    pub occluded_at: Option<f64>,
    pub on_barrier: bool,
}

pub fn barrier(
    scenarios: &[Loaded],
    dt: Option<f64>,
    horizon: f64,
    opponent: &Opponent,
    defender: Side,
) -> Result<(Table, Vec<BarrierSummary>), CliError> {
    let mut t = Table::new(&["scenario", "state", "t", "d_e", "d_p", "theta_e", "theta_p", "drift"]);
    let mut summaries = Vec::new();
    for sc in scenarios {
        let runs: Vec<Result<(String, f64, bool, BarrierTrajectory), CliError>> = sc
            .states
            .par_iter()
            .enumerate()
            .map(|(k, (id, st))| {
                let ps = polar_for(sc, st).map_err(|e| CliError::Schema(format!("{}/{id}: {e}", sc.id())))?;
                let sp = &sc.speeds;
                let step = dt.unwrap_or(1e-3 * ps.d_e.min(ps.d_p) / sp.evader.max(sp.pursuer));
                let ctl = opponent.control(horizon, sc.spec.seed.wrapping_add(k as u64));
                let tr = barrier_mimic_simulate(&ps, sp, &ctl, defender, step, horizon)?;
                Ok((id.clone(), step, barrier_membership(&ps, sp, 1e-9), tr))
            })
            .collect();
        for run in runs {
            let (id, step, on_barrier, tr) = run?;
            for s in &tr.samples {
                t.rows.push(vec![
                    sc.id().into(),
                    id.clone(),
                    num(s.t),
                    num(s.d_e),
                    num(s.d_p),
                    num(s.theta_e),
                    num(s.theta_p),
                    num(s.drift),
                ]);
            }
            summaries.push(BarrierSummary {
                scenario: sc.id().into(),
                state: id,
                max_drift: tr.max_drift,
                dt: step,
                occluded_at: tr.occluded_at,
                on_barrier,
            });
        }
    }
    Ok((t, summaries))
}

pub struct SweepReport {
    pub scenario: String,
    pub cells: usize,
    pub converged: bool,
    pub cycles: usize,
    pub last_change: f64,
    pub nested: bool,
    pub dump: Option<PathBuf>,
}

fn dump_path(out: &Path, id: &str, many: bool) -> PathBuf {
    if !many {
        return out.to_path_buf();
    }
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("field");
    let name = match out.extension().and_then(|s| s.to_str()) {
        Some(ext) => format!("{stem}.{id}.{ext}"),
        None => format!("{stem}.{id}"),
    };
    out.with_file_name(name)
}

pub fn sweep(
    scenarios: &[Loaded],
    n: Option<usize>,
    tol: Option<f64>,
    out: Option<&Path>,
) -> Result<(Table, Vec<SweepReport>), CliError> {
    let mut t = Table::new(&["scenario", "state", "sweep", "v_rep", "rel", "cell_kind", "flags"]);
    let mut reports = Vec::new();
    for sc in scenarios {
        let cfg = sc.sweep_config(n, tol)?;
        let f = solve_sweep(&sc.obstacle, &sc.speeds, &cfg)?;
        let levels: Vec<f64> = (0..=20).map(|k| f.value_cap * k as f64 / 20.0).collect();
        let fronts: Vec<FrontSlice> = levels.iter().map(|&l| extract_front(&f, l)).collect();
        let nested = fronts.windows(2).all(|w| w[0].contains(&w[1]));
        let dump = match out {
            Some(o) => {
                let p = dump_path(o, sc.id(), scenarios.len() > 1);
                let file = std::io::BufWriter::new(std::fs::File::create(&p)?);
                write_field(&f, file)?;
                Some(p)
            }
            None => None,
        };
        let rows: Vec<Vec<String>> = sc
            .states
            .par_iter()
            .map(|(id, st)| {
                let v = f.sample(st);
                let mut fl = Vec::new();
                let rep = if is_smooth(&sc.obstacle) {
                    build_setup(st, &sc.obstacle, &sc.speeds).and_then(|s| value_by_representation(&s))
                } else {
                    polar_for(sc, st)
                        .map_err(Error::Precondition)
                        .and_then(|ps| {
                            let t0 = t0_corner(&ps, &sc.speeds, Some(&sc.obstacle))?;
                            value_corner(&ps, &sc.speeds, t0)
                        })
                };
                let rep = match rep {
                    Ok(r) => r,
                    Err(e) => {
                        fl.push(err_flag(e));
                        None
                    }
                };
                let rel = match (v, rep) {
                    (Some(a), Some(b)) if b > 0.0 => num((a - b).abs() / b),
                    _ => String::new(),
                };
                let kind = nearest_kind(&f, st);
                vec![sc.id().into(), id.clone(), opt(v), opt(rep), rel, kind, flags(&fl)]
            })
            .collect();
        t.rows.extend(rows);
        reports.push(SweepReport {
            scenario: sc.id().into(),
            cells: f.grid.len(),
            converged: f.converged,
            cycles: f.cycles,
            last_change: f.last_change,
            nested,
            dump,
        });
    }
    Ok((t, reports))
}

fn nearest_kind(f: &SweepField, st: &GameState) -> String {
    let g = &f.grid;
    let x = [st.evader.x, st.evader.y, st.pursuer.x, st.pursuer.y];
    let mut c = [0usize; 4];
    for a in 0..4 {
        if g.n[a] > 1 {
            let u = ((x[a] - g.lo[a]) / g.h(a)).round();
            if u < 0.0 || u > (g.n[a] - 1) as f64 {
                return "outside".into();
            }
            c[a] = u as usize;
        }
    }
    format!("{:?}", f.kinds[g.index(c)]).to_lowercase()
}
