//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on failure.

use occlusion_core::corner::PiecewiseControl;
use occlusion_core::smooth::distance_along_optimal;
use occlusion_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

type Outcome = (bool, String);

fn unit_circle() -> Obstacle {
    Obstacle::circle(Vec2::ZERO, 1.0).unwrap()
}

/// Euler relation and finite-difference gradient of the Hamiltonian.
fn hamiltonian_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut euler, mut fd) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let sp = Speeds::new(rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0)).unwrap();
        let mut v = || Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (pe, pp) = (v(), v());
        let (ge, gp) = hamiltonian_grad(pe, pp, &sp).unwrap();
        euler = euler.max((ge.dot(pe) + gp.dot(pp) - hamiltonian_iso(pe, pp, &sp)).abs());
        let h = 1e-6;
        let axes = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        for (k, ax) in axes.iter().enumerate() {
            let de = (hamiltonian_iso(pe + *ax * h, pp, &sp) - hamiltonian_iso(pe - *ax * h, pp, &sp)) / (2.0 * h);
            let dp = (hamiltonian_iso(pe, pp + *ax * h, &sp) - hamiltonian_iso(pe, pp - *ax * h, &sp)) / (2.0 * h);
            let (ae, ap) = if k == 0 { (ge.x, gp.x) } else { (ge.y, gp.y) };
            fd = fd.max((de - ae).abs()).max((dp - ap).abs());
        }
    }
    (euler <= 1e-12 && fd <= 1e-6, format!("euler {euler:.1e}, finite difference {fd:.1e}"))
}

/// Tangent pair on the unit circle: evader tangent at the top, pursuer tangent
/// `shift` radians further counter-clockwise, so the horizon gap is `shift`.
fn tangent_pair(d_e: f64, d_p: f64, shift: f64) -> GameState {
    let a_p = FRAC_PI_2 + shift;
    let e = Vec2::new(-d_e, 1.0);
    let x = Vec2::from_angle(a_p);
    GameState::new(e, x - x.perp() * d_p)
}

/// Constant-curvature value bounds around the representation value.
fn smooth_sandwich() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let obs = unit_circle();
    let (mut tried, mut checked, mut with_upper, mut violations) = (0, 0, 0, 0);
    while with_upper < 100 && tried < 20_000 {
        tried += 1;
        let (d_e, d_p) = (rng.gen_range(1.2..6.0), rng.gen_range(1.2..6.0));
        let sp = Speeds::new(rng.gen_range(0.3..2.0), rng.gen_range(0.3..2.0)).unwrap();
        let shift = 10f64.powf(rng.gen_range(-7.0..-2.0));
        let st = tangent_pair(d_e, d_p, shift);
        let Ok(setup) = build_setup(&st, &obs, &sp) else { continue };
        let Ok(v) = value_by_representation(&setup) else { continue };
        let b = value_bounds_kconst(&setup, 0.5).unwrap();
        let v = v.unwrap_or(f64::INFINITY);
        checked += 1;
        if b.lower > v + 1e-9 {
            violations += 1;
        }
        if b.upper_valid {
            with_upper += 1;
            if v > b.upper + 1e-9 {
                violations += 1;
            }
        }
    }
    (
        with_upper >= 100 && violations == 0,
        format!("{checked} scenarios, {with_upper} with a valid upper bound, {violations} violations"),
    )
}

/// Slope of the boundary limit value against `d*` on the non-usable side.
fn boundary_profile_slope() -> Outcome {
    let obs = unit_circle();
    let (d_e, d_p, ge) = (2.0, 2.0, 1.0);
    let grid: Vec<f64> = (0..9).map(|k| 10f64.powf(-4.0 + 2.0 * k as f64 / 8.0)).collect();
    let (mut sxy, mut sxx) = (0.0, 0.0);
    let mut worst = 0.0f64;
    for &ds in &grid {
        let sp = Speeds::new(ge, d_p * (ge / d_e + ds)).unwrap();
        let st = GameState::new(Vec2::new(-d_e, 1.0), Vec2::new(d_p, 1.0));
        let setup = match build_setup(&st, &obs, &sp) {
            Ok(s) => s,
            Err(e) => return (false, format!("setup failed at d* = {ds}: {e}")),
        };
        if setup.kappa0().powi(2) * setup.c_star() < 1.0 {
            return (false, "curvature condition fails".into());
        }
        let Ok(Some(v)) = boundary_limit_value(&setup) else {
            return (false, format!("no limit value at d* = {ds}"));
        };
        worst = worst.max((v / (ds * setup.kappa0() * setup.c_star()) - 1.0).abs());
        sxy += ds * v;
        sxx += ds * ds;
    }
    let sp0 = Speeds::new(ge, d_p * ge / d_e).unwrap();
    let want = c_star_of(d_e, d_p, &sp0);
    let slope = sxy / sxx;
    let rel = (slope / want - 1.0).abs();
    (rel <= 0.05, format!("fitted slope {slope:.5}, kappa0 C* {want:.5}, rel {rel:.2e}, pointwise worst {worst:.2e}"))
}

fn c_star_of(d_e: f64, d_p: f64, sp: &Speeds) -> f64 {
    let (e3, p3) = (d_e.powi(3), d_p.powi(3));
    2.0 * p3 * e3 / (e3 * sp.pursuer.powi(2) + p3 * sp.evader.powi(2))
}

fn corner_spec() -> CornerSpec {
    CornerSpec::new(Vec2::ZERO, -PI / 4.0, PI / 4.0, 3.0).unwrap()
}

/// Corner value root, its bound and the discrete oracle on a triangle.
fn corner_closed_form() -> Outcome {
    let sp = Speeds::new(1.0, 1.0).unwrap();
    let st = GameState::new(Vec2::new(0.0, 1.0), Vec2::polar(2.0, -FRAC_PI_2 + 0.1));
    let tri = Obstacle::polygon(vec![Vec2::new(0.0, 0.0), Vec2::new(-3.0, 3.0), Vec2::new(-3.0, -3.0)]).unwrap();
    let ps = to_polar(&st, &corner_spec()).unwrap();
    let t0 = t0_corner(&ps, &sp, Some(&tri)).unwrap();
    let Ok(Some(v)) = value_corner(&ps, &sp, t0) else { return (false, "no corner root".into()) };
    let s_at_v = s_corner(v, &ps, &sp).unwrap();
    let root_ok = (s_at_v - PI).abs() < 1e-9 && (v - 0.19770).abs() < 1e-5;
    let bound = match corner_bounds(&ps, &sp, t0) {
        CornerBound::Upper(b) => b,
        _ => return (false, "upper bound not applicable".into()),
    };
    let cfg = DiscreteGameConfig::default();
    let oracle = match discrete_value(&st, &tri, &sp, &cfg) {
        Ok(Some(o)) => o,
        other => return (false, format!("oracle returned {other:?}")),
    };
    let rel = (oracle - v).abs() / v;
    (
        root_ok && v <= bound && t0 >= 0.3 && rel <= 0.10,
        format!("root {v:.6} (t0 {t0:.3}), bound {bound:.3}, oracle {oracle:.4} (rel {rel:.3})"),
    )
}

/// Value across the barrier at a fixed gap just short of pi.
fn jump_dichotomy() -> Outcome {
    let sp = Speeds::new(1.0, 1.0).unwrap();
    let (d_p, gap, step) = (2.0, PI - 1e-3, 0.01);
    let mut last_some = None;
    let mut first_none = None;
    let mut ok = true;
    for k in 0..=40 {
        let d_e = 1.8 + step * k as f64;
        let st = GameState::new(Vec2::polar(d_e, FRAC_PI_2), Vec2::polar(d_p, FRAC_PI_2 - gap));
        let ps = to_polar(&st, &corner_spec()).unwrap();
        let t0 = t0_corner(&ps, &sp, None).unwrap();
        let v = value_corner(&ps, &sp, t0).unwrap();
        match (v, corner_bounds(&ps, &sp, t0)) {
            (Some(v), CornerBound::Upper(b)) => {
                ok &= v <= 2.0 * b && first_none.is_none();
                last_some = Some(d_e);
            }
            (None, _) => {
                first_none.get_or_insert(d_e);
            }
            (Some(_), _) => ok = false,
        }
    }
    let (Some(a), Some(b)) = (last_some, first_none) else { return (false, "no transition".into()) };
    let defect = |d_e: f64| (sp.evader * d_p - sp.pursuer * d_e).abs();
    let sharp = defect(a).min(defect(b)) <= step + 1e-12 && (b - a - step).abs() < 1e-9;
    (ok && sharp, format!("value up to d_E = {a:.2}, none from d_E = {b:.2}"))
}

/// Radial mimicry keeps the barrier invariant up to one Euler step.
fn barrier_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let sp = Speeds::new(1.0, 1.0).unwrap();
    let st = GameState::new(Vec2::polar(1.0, FRAC_PI_2), Vec2::polar(1.0, FRAC_PI_2 - (PI - 0.5)));
    let ps = to_polar(&st, &corner_spec()).unwrap();
    let (horizon, dt) = (0.1, 1e-3);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut cmax = 0.0f64;
    for k in 0..20 {
        let pieces: Vec<(f64, f64)> = (0..10)
            .map(|_| {
                let r: f64 = rng.gen_range(0.2..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                let a = rng.gen_range(-1.0..1.0) * (1.0 - r * r).sqrt();
                (r, a)
            })
            .collect();
        let ctl = PiecewiseControl { horizon, pieces };
        let side = if k % 2 == 0 { Side::Evader } else { Side::Pursuer };
        let run = |dt: f64| barrier_mimic_simulate(&ps, &sp, &ctl, side, dt, horizon).map(|t| t.max_drift);
        match (run(dt), run(0.5 * dt)) {
            (Ok(a), Ok(b)) if b > 0.0 => {
                lo = lo.min(a / b);
                hi = hi.max(a / b);
                cmax = cmax.max(a / dt);
            }
            other => return (false, format!("control {k}: {other:?}")),
        }
    }
    (lo >= 1.7 && hi <= 2.3, format!("drift ratio in [{lo:.3}, {hi:.3}], C <= {cmax:.3}"))
}

/// Distance and horizon envelopes along optimal straight trajectories.
fn distance_envelopes() -> Outcome {
    let obs = unit_circle();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut dist_ok, mut sign_ok, mut coef_err, mut c3) = (true, true, 0.0f64, 0.0f64);
    let mut fitted_c = 0.0f64;
    for _ in 0..20 {
        let sp = Speeds::new(rng.gen_range(0.5..2.0), rng.gen_range(0.5..2.0)).unwrap();
        let st = tangent_pair(rng.gen_range(1.5..4.0), rng.gen_range(1.5..4.0), rng.gen_range(0.01..0.2));
        let setup = build_setup(&st, &obs, &sp).unwrap();
        for side in [Side::Evader, Side::Pursuer] {
            let (g, d0, k0, sign, s_start) = match side {
                Side::Evader => (sp.evader, setup.d_e, setup.kappa_e, -1.0, setup.s_e),
                Side::Pursuer => (sp.pursuer, setup.d_p, setup.kappa_p, 1.0, setup.s_p),
            };
            let c_env = 2.0 * g * g;
            for frac in [0.05, 0.1, 0.2, 0.4] {
                let t = frac * setup.t0_bar;
                let taus: Vec<f64> = (1..=10).map(|k| t * k as f64 / 10.0).collect();
                let d = distance_along_optimal(&setup, side, t, &taus).unwrap();
                for (tau, dk) in taus.iter().zip(&d) {
                    let lin = d0 * d0 + sign * 2.0 * g / k0 * tau;
                    let resid = dk * dk - lin;
                    fitted_c = fitted_c.max(resid.abs() / (c_env * t * tau));
                    dist_ok &= resid.abs() <= c_env * t * tau * (1.0 + 1e-6) + 1e-12;
                }
            }
            // Horizon parameter: linear term plus a second-order term of opposite signs.
            let lin = g / (k0 * d0);
            let quad = -sign * g * g / (2.0 * k0 * k0 * d0.powi(3));
            let mut est = Vec::new();
            for t in [1e-3, 2e-3, 4e-3].map(|f| f * setup.t0_bar) {
                let (s, _) = max_horizon_param(&setup, side, t).unwrap();
                let r = s - s_start - lin * t;
                est.push((t, r / (t * t)));
                c3 = c3.max((r - quad * t * t).abs() / t.powi(3));
            }
            let q = est[0].1;
            sign_ok &= q.signum() == quad.signum();
            coef_err = coef_err.max((q / quad - 1.0).abs());
        }
    }
    (
        dist_ok && sign_ok && coef_err <= 0.01,
        format!(
            "distance residual at most {fitted_c:.3} of 2 gamma^2 t tau, second-order coefficients within {coef_err:.1e} (E positive, P negative), cubic constant {c3:.3}"
        ),
    )
}

/// Sweep solver: static reduction, 4D comparison near the usable part, nesting.
fn sweep_cross_check() -> Outcome {
    let obs = unit_circle();
    // Static pursuer at (2,0).
    let sp = Speeds::new(1.0, 0.0).unwrap();
    let grid = Grid4::new([-4.5, 2.5, 2.0, 0.0], [-1.5, 5.5, 2.0, 0.0], [33, 33, 1, 1]).unwrap();
    let f = solve_sweep(&obs, &sp, &SweepConfig::new(grid)).unwrap();
    let want = 2.0 * 3f64.sqrt() - 2.5;
    let got = f.sample(&GameState::new(Vec2::new(-3.0, 4.0), Vec2::new(2.0, 0.0))).unwrap_or(f64::NAN);
    let static_rel = (got - want).abs() / want;

    // Full 4D grid, 17 points per axis over a box 6R wide.
    let sp = Speeds::new(1.0, 0.5).unwrap();
    let grid = Grid4::around(&obs, 17).unwrap();
    let f = solve_sweep(&obs, &sp, &SweepConfig::new(grid)).unwrap();
    let g = f.grid;
    let h = g.h(0);
    let interior = |c: [usize; 4]| c.iter().all(|&i| i > 0 && i + 1 < 17);
    let mut seen: Vec<f64> = Vec::new();
    let mut worst = 0.0f64;
    for idx in 0..g.len() {
        if seen.len() == 25 {
            break;
        }
        if f.kinds[idx] != CellKind::Free
            || !interior(g.coords(idx))
            || !g.neighbours(idx).any(|j| f.kinds[j] == CellKind::Interface)
        {
            continue;
        }
        let st = g.state(idx);
        let Ok(c) = classify_boundary(&st, &obs, &sp, f64::INFINITY, 0.0) else { continue };
        if c.margin <= 0.0 {
            continue;
        }
        let Ok(setup) = build_setup(&st, &obs, &sp) else { continue };
        let Ok(Some(vr)) = value_by_representation(&setup) else { continue };
        // Resolvable on the grid: at least one cell of evader travel.
        if vr < h / sp.evader || seen.iter().any(|s| (s - vr).abs() < 1e-9) {
            continue;
        }
        seen.push(vr);
        worst = worst.max((f.values[idx] - vr).abs() / vr);
    }

    let levels: Vec<f64> = (0..=40).map(|k| f.value_cap * k as f64 / 40.0).collect();
    let fronts: Vec<FrontSlice> = levels.iter().map(|&t| extract_front(&f, t)).collect();
    let nested = fronts.windows(2).all(|w| w[0].contains(&w[1]));

    (
        static_rel <= 0.05 && seen.len() == 25 && worst <= 0.15 && nested && f.converged,
        format!(
            "static {got:.5} vs {want:.5} (rel {static_rel:.1e}); 4D worst rel {worst:.3} on {} states; nesting {nested}",
            seen.len()
        ),
    )
}

/// Hamiltonian sign at the target normal against the distance-ratio test.
fn classification_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let square = Obstacle::polygon(vec![
        Vec2::new(-1.0, -1.0),
        Vec2::new(1.0, -1.0),
        Vec2::new(1.0, 1.0),
        Vec2::new(-1.0, 1.0),
    ])
    .unwrap();
    let circle = unit_circle();
    let mut disagreements = 0;
    for k in 0..1000 {
        let sp = Speeds::new(rng.gen_range(0.1..3.0), rng.gen_range(0.1..3.0)).unwrap();
        let (d_e, d_p) = (rng.gen_range(0.2..5.0), rng.gen_range(0.2..5.0));
        let (obs, x, tan) = if k % 2 == 0 {
            let x = Vec2::from_angle(rng.gen_range(0.0..2.0 * PI));
            (&circle, x, x.perp())
        } else {
            // Supporting line through the vertex (1,1).
            (&square, Vec2::new(1.0, 1.0), Vec2::from_angle(rng.gen_range(-1.5..-0.07)))
        };
        let st = GameState::new(x + tan * d_e, x - tan * d_p);
        let (ne, np) = target_normal(&st, x);
        let h = hamiltonian_iso(ne, np, &sp);
        let ratio = sp.evader / d_e - sp.pursuer / d_p;
        let label = classify_boundary(&st, obs, &sp, 1e-9, 1e-12).map(|c| c.label);
        let expected = if ratio > 0.0 { Classification::Usable } else { Classification::NonUsable };
        if h.signum() != ratio.signum() || label.ok() != Some(expected) {
            disagreements += 1;
        }
    }
    (disagreements == 0, format!("{disagreements} disagreements in 1000"))
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 9] = [
        ("hamiltonian identities", hamiltonian_identities, Duration::from_secs(1)),
        ("smooth value sandwich", smooth_sandwich, Duration::from_secs(30)),
        ("sharp boundary profile", boundary_profile_slope, Duration::from_secs(30)),
        ("corner closed form and oracle", corner_closed_form, Duration::from_secs(120)),
        ("jump dichotomy at the barrier", jump_dichotomy, Duration::from_secs(60)),
        ("barrier conservation", barrier_conservation, Duration::from_secs(60)),
        ("distance and horizon envelopes", distance_envelopes, Duration::from_secs(30)),
        ("sweep cross-check", sweep_cross_check, Duration::from_secs(300)),
        ("classification consistency", classification_consistency, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        let el = start.elapsed();
        let ok = ok && el <= *budget;
        if !ok {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {detail} [{:.2}s of {}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            el.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
