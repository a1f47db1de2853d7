//! Lax-Friedrichs fast sweeping for the stationary equation
//! `speed_E |grad_E V| - speed_P |grad_P V| = 1` on a uniform 4D grid over
//! `(E_x, E_y, P_x, P_y)`.
//!
//! Cells whose line of sight is blocked are target cells and are not updated.
//! Target cells next to a usable boundary state hold `V = 0`; the free cells
//! next to them are initialised with the linearised time to close the gap,
//! `clearance / H(target normal)`, and held fixed. Other excluded neighbours
//! (obstacle, non-usable target, outside the box) enter the stencil as
//! copies of the centre value.

use crate::error::{Error, Result};
use crate::game::{classify_boundary, hamiltonian_iso, target_normal, GameState, Speeds};
use crate::geometry::{segment_blocked, Obstacle, Vec2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid4 {
    pub lo: [f64; 4],
    pub hi: [f64; 4],
    pub n: [usize; 4],
}

impl Grid4 {
    pub fn new(lo: [f64; 4], hi: [f64; 4], n: [usize; 4]) -> Result<Self> {
        for i in 0..4 {
            if n[i] == 0 || (n[i] > 1 && !(hi[i] > lo[i])) || !lo[i].is_finite() || !hi[i].is_finite() {
                return Err(Error::InvalidInput(format!("bad grid axis {i}")));
            }
        }
        Ok(Grid4 { lo, hi, n })
    }

    /// Box of width `6 R` on every axis around the obstacle, `R` half its diameter.
    pub fn around(obs: &Obstacle, n: usize) -> Result<Self> {
        let r = 0.5 * obs.diameter();
        let c = match obs {
            Obstacle::Circle(c) => c.center,
            Obstacle::Polygon { vertices } => centroid(vertices.vertices()),
            Obstacle::Arc(a) => centroid(a.hull().vertices()),
        };
        let lo = [c.x - 3.0 * r, c.y - 3.0 * r, c.x - 3.0 * r, c.y - 3.0 * r];
        let hi = [c.x + 3.0 * r, c.y + 3.0 * r, c.x + 3.0 * r, c.y + 3.0 * r];
        Grid4::new(lo, hi, [n; 4])
    }

    pub fn h(&self, axis: usize) -> f64 {
        if self.n[axis] > 1 {
            (self.hi[axis] - self.lo[axis]) / (self.n[axis] - 1) as f64
        } else {
            0.0
        }
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.n[axis + 1..].iter().product()
    }

    pub fn coords(&self, mut idx: usize) -> [usize; 4] {
        let mut c = [0; 4];
        for axis in (0..4).rev() {
            c[axis] = idx % self.n[axis];
            idx /= self.n[axis];
        }
        c
    }

    pub fn index(&self, c: [usize; 4]) -> usize {
        ((c[0] * self.n[1] + c[1]) * self.n[2] + c[2]) * self.n[3] + c[3]
    }

    pub fn coordinate(&self, axis: usize, i: usize) -> f64 {
        self.lo[axis] + i as f64 * self.h(axis)
    }

    pub fn state(&self, idx: usize) -> GameState {
        let c = self.coords(idx);
        let x = |a: usize| self.coordinate(a, c[a]);
        GameState::new(Vec2::new(x(0), x(1)), Vec2::new(x(2), x(3)))
    }

    /// Indices of the axis neighbours of a cell.
    pub fn neighbours(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        let c = self.coords(idx);
        (0..4).flat_map(move |axis| {
            let s = self.stride(axis);
            let down = (c[axis] > 0).then(|| idx - s);
            let up = (c[axis] + 1 < self.n[axis]).then(|| idx + s);
            down.into_iter().chain(up)
        })
    }
}

fn centroid(v: &[Vec2]) -> Vec2 {
    v.iter().fold(Vec2::ZERO, |a, b| a + *b) / v.len() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CellKind {
    Free,
    /// Free cell next to the usable boundary, held at its linearised value.
    Interface,
    /// Target cell on the usable boundary, `V = 0`.
    TargetUsable,
    /// Any other target cell.
    Target,
    /// A player is inside the obstacle.
    Obstacle,
}

impl CellKind {
    /// Cells whose value takes part in neighbouring stencils.
    pub fn carries_value(self) -> bool {
        matches!(self, CellKind::Free | CellKind::Interface | CellKind::TargetUsable)
    }

    /// Cells of the playing region (line of sight open).
    pub fn is_free(self) -> bool {
        matches!(self, CellKind::Free | CellKind::Interface)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub grid: Grid4,
    /// Stop once a full cycle of the 16 orderings changes no value by more than this.
    pub tol: f64,
    pub max_cycles: usize,
    /// Values are capped here; cells at the cap are never captured on the grid.
    pub value_cap: f64,
    pub interface_tol: f64,
}

impl SweepConfig {
    pub fn new(grid: Grid4) -> Self {
        SweepConfig { grid, tol: 1e-9, max_cycles: 400, value_cap: 10.0, interface_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepField {
    pub grid: Grid4,
    pub values: Vec<f64>,
    pub kinds: Vec<CellKind>,
    pub converged: bool,
    pub cycles: usize,
    pub last_change: f64,
    pub value_cap: f64,
}

impl SweepField {
    /// Multilinear interpolation over the corners that carry a value.
    pub fn sample(&self, state: &GameState) -> Option<f64> {
        let g = &self.grid;
        let x = [state.evader.x, state.evader.y, state.pursuer.x, state.pursuer.y];
        let mut base = [0usize; 4];
        let mut frac = [0.0f64; 4];
        for a in 0..4 {
            if g.n[a] == 1 {
                continue;
            }
            let u = (x[a] - g.lo[a]) / g.h(a);
            if !(u >= -1e-9 && u <= (g.n[a] - 1) as f64 + 1e-9) {
                return None;
            }
            let i = (u.floor().max(0.0) as usize).min(g.n[a] - 2);
            base[a] = i;
            frac[a] = (u - i as f64).clamp(0.0, 1.0);
        }
        let (mut acc, mut wsum) = (0.0, 0.0);
        for corner in 0..16usize {
            let mut c = base;
            let mut w = 1.0;
            let mut skip = false;
            for a in 0..4 {
                let bit = (corner >> a) & 1;
                if g.n[a] == 1 {
                    if bit == 1 {
                        skip = true;
                    }
                    continue;
                }
                c[a] += bit;
                w *= if bit == 1 { frac[a] } else { 1.0 - frac[a] };
            }
            if skip || w == 0.0 {
                continue;
            }
            let idx = g.index(c);
            if self.kinds[idx].carries_value() {
                acc += w * self.values[idx];
                wsum += w;
            }
        }
        (wsum > 0.0).then(|| acc / wsum)
    }
}

/// Solves the stationary equation; see the module docs for the boundary treatment.
pub fn solve_sweep(obs: &Obstacle, sp: &Speeds, cfg: &SweepConfig) -> Result<SweepField> {
    sp.validate()?;
    let g = cfg.grid;
    let n = g.len();
    let cap = cfg.value_cap;
    let mut kinds: Vec<CellKind> = (0..n)
        .into_par_iter()
        .map(|idx| {
            let st = g.state(idx);
            if st.validate(obs).is_err() {
                CellKind::Obstacle
            } else if segment_blocked(st.evader, st.pursuer, obs).unwrap_or(true) {
                CellKind::Target
            } else {
                CellKind::Free
            }
        })
        .collect();

    // Linearised closing time of free cells touching the target set (None if not usable).
    let closing: Vec<Option<f64>> = (0..n)
        .into_par_iter()
        .map(|idx| {
            if kinds[idx] != CellKind::Free || !g.neighbours(idx).any(|j| kinds[j] == CellKind::Target) {
                return None;
            }
            let st = g.state(idx);
            let c = classify_boundary(&st, obs, sp, f64::INFINITY, cfg.interface_tol).ok()?;
            let scale = (sp.evader / c.d_e).max(sp.pursuer / c.d_p);
            if c.margin < -cfg.interface_tol * scale {
                return None;
            }
            let (ne, np) = target_normal(&st, c.tangency);
            let h = hamiltonian_iso(ne, np, sp);
            Some(if h > 0.0 { (c.gap.max(0.0) / h).min(cap) } else { cap })
        })
        .collect();

    for idx in 0..n {
        if kinds[idx] == CellKind::Target && g.neighbours(idx).any(|j| closing[j].is_some()) {
            kinds[idx] = CellKind::TargetUsable;
        }
    }
    let mut values = vec![cap; n];
    for idx in 0..n {
        match kinds[idx] {
            CellKind::TargetUsable | CellKind::Target | CellKind::Obstacle => values[idx] = 0.0,
            CellKind::Free => {
                if let Some(v) = closing[idx] {
                    if g.neighbours(idx).any(|j| kinds[j] == CellKind::TargetUsable) && v < cap {
                        kinds[idx] = CellKind::Interface;
                        values[idx] = v;
                    }
                }
            }
            CellKind::Interface => {}
        }
    }

    let sigma = [sp.evader, sp.evader, sp.pursuer, sp.pursuer];
    let h: [f64; 4] = std::array::from_fn(|a| g.h(a));
    let strides: [usize; 4] = std::array::from_fn(|a| g.stride(a));
    let mut converged = false;
    let mut cycles = 0;
    let mut last_change = f64::INFINITY;
    while cycles < cfg.max_cycles {
        cycles += 1;
        let mut change: f64 = 0.0;
        for ordering in 0..16u32 {
            let range = |a: usize| -> Vec<usize> {
                let r: Vec<usize> = (0..g.n[a]).collect();
                if (ordering >> a) & 1 == 1 {
                    r.into_iter().rev().collect()
                } else {
                    r
                }
            };
            let (r0, r1, r2, r3) = (range(0), range(1), range(2), range(3));
            for &i0 in &r0 {
                for &i1 in &r1 {
                    for &i2 in &r2 {
                        for &i3 in &r3 {
                            let c = [i0, i1, i2, i3];
                            let idx = g.index(c);
                            if kinds[idx] != CellKind::Free {
                                continue;
                            }
                            let vc = values[idx];
                            let mut num = 1.0;
                            let mut den = 0.0;
                            let mut p = [0.0f64; 4];
                            for a in 0..4 {
                                if g.n[a] == 1 || sigma[a] == 0.0 {
                                    continue;
                                }
                                let pick = |j: usize| if kinds[j].carries_value() { values[j] } else { vc };
                                let vm = if c[a] > 0 { pick(idx - strides[a]) } else { vc };
                                let vp = if c[a] + 1 < g.n[a] { pick(idx + strides[a]) } else { vc };
                                p[a] = (vp - vm) / (2.0 * h[a]);
                                num += sigma[a] * (vp + vm) / (2.0 * h[a]);
                                den += sigma[a] / h[a];
                            }
                            if den == 0.0 {
                                continue;
                            }
                            let ham = sp.evader * p[0].hypot(p[1]) - sp.pursuer * p[2].hypot(p[3]);
                            let new = ((num - ham) / den).clamp(0.0, cap);
                            change = change.max((new - vc).abs());
                            values[idx] = new;
                        }
                    }
                }
            }
        }
        last_change = change;
        if change < cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(SweepField { grid: g, values, kinds, converged, cycles, last_change, value_cap: cap })
}

const MAGIC: &[u8; 4] = b"OCCF";
const VERSION: u32 = 1;

/// Binary dump: magic, version, four axis sizes (u64), lower bounds, upper
/// bounds and spacings (f64 each), then the values in row-major order with
/// the last pursuer axis fastest. Everything little-endian.
pub fn write_field<W: Write>(field: &SweepField, mut w: W) -> std::io::Result<()> {
    let g = &field.grid;
    w.write_all(MAGIC)?;
    w.write_all(&VERSION.to_le_bytes())?;
    for a in 0..4 {
        w.write_all(&(g.n[a] as u64).to_le_bytes())?;
    }
    for arr in [g.lo, g.hi, std::array::from_fn(|a| g.h(a))] {
        for x in arr {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    for v in &field.values {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

/// Reads a dump written by [`write_field`].
pub fn read_field<R: Read>(mut r: R) -> std::io::Result<(Grid4, Vec<f64>)> {
    let bad = |m: &str| std::io::Error::new(std::io::ErrorKind::InvalidData, m.to_string());
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(bad("not a field dump"));
    }
    let mut b4 = [0u8; 4];
    r.read_exact(&mut b4)?;
    if u32::from_le_bytes(b4) != VERSION {
        return Err(bad("unsupported dump version"));
    }
    let mut b8 = [0u8; 8];
    let mut n = [0usize; 4];
    for x in n.iter_mut() {
        r.read_exact(&mut b8)?;
        *x = u64::from_le_bytes(b8) as usize;
    }
    let mut read_f = |r: &mut R| -> std::io::Result<f64> {
        r.read_exact(&mut b8)?;
        Ok(f64::from_le_bytes(b8))
    };
    let mut lo = [0.0; 4];
    let mut hi = [0.0; 4];
    let mut h = [0.0; 4];
    for x in lo.iter_mut() {
        *x = read_f(&mut r)?;
    }
    for x in hi.iter_mut() {
        *x = read_f(&mut r)?;
    }
    for x in h.iter_mut() {
        *x = read_f(&mut r)?;
    }
    let grid = Grid4::new(lo, hi, n).map_err(|e| bad(&e.to_string()))?;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.len() {
        values.push(read_f(&mut r)?);
    }
    Ok((grid, values))
}
