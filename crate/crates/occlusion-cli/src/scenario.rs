//! Scenario files: UTF-8 JSON carrying a `schema` tag, one obstacle, speeds,
//! initial states and analysis parameters. A file holds one scenario or an
//! array of them.

use crate::error::CliError;
use occlusion_core::{
    ConvexArc, CornerSpec, DiscreteGameConfig, GameState, Grid4, Obstacle, Speeds, SweepConfig, Vec2,
};
use serde::Deserialize;
use std::path::Path;

pub const SCHEMA: &str = "occlusion-scenario/1";

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: String,
    pub id: String,
    pub obstacle: ObstacleSpec,
    pub speeds: SpeedSpec,
    #[serde(default)]
    pub states: Vec<StateSpec>,
    #[serde(default)]
    pub corner: Option<CornerSelect>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObstacleSpec {
    Circle { center: Vec2, radius: f64 },
    Polygon { vertices: Vec<Vec2> },
    /// Full arc table, as written by the library.
    Arc(ConvexArc),
    /// Curvature samples spaced uniformly over `[-half_length, half_length]`,
    /// interpolated linearly and integrated from the anchor at `s = 0`.
    ArcProfile {
        curvature: Vec<f64>,
        half_length: f64,
        anchor: Vec2,
        tangent_angle: f64,
        #[serde(default = "default_cells")]
        cells: usize,
    },
}

fn default_cells() -> usize {
    4096
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeedSpec {
    pub evader: f64,
    pub pursuer: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub id: String,
    pub evader: Vec2,
    pub pursuer: Vec2,
}

/// Corner used by the corner analysis: a polygon vertex or an explicit wedge.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum CornerSelect {
    Vertex { vertex: usize, radius: f64 },
    Wedge(CornerSpec),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    pub delta: f64,
    pub eps: f64,
    pub boundary_tol: f64,
    pub interface_tol: f64,
    pub oracle: OracleParams,
    pub sweep: SweepParams,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            delta: 0.5,
            eps: 0.0,
            boundary_tol: 1e-9,
            interface_tol: 1e-9,
            oracle: OracleParams::default(),
            sweep: SweepParams::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleParams {
    pub dt: f64,
    pub depth: usize,
    pub n_dirs_e: usize,
    pub n_dirs_p: usize,
    pub stages: usize,
}

impl Default for OracleParams {
    fn default() -> Self {
        let d = DiscreteGameConfig::default();
        OracleParams { dt: d.dt, depth: d.depth, n_dirs_e: d.n_dirs_e, n_dirs_p: d.n_dirs_p, stages: d.stages }
    }
}

impl OracleParams {
    pub fn config(&self) -> DiscreteGameConfig {
        DiscreteGameConfig {
            dt: self.dt,
            depth: self.depth,
            n_dirs_e: self.n_dirs_e,
            n_dirs_p: self.n_dirs_p,
            stages: self.stages,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepParams {
    /// Points per axis; axes with one point are held fixed at `lo`.
    pub n: [usize; 4],
    pub lo: Option<[f64; 4]>,
    pub hi: Option<[f64; 4]>,
    pub tol: f64,
    pub max_cycles: usize,
    pub value_cap: f64,
}

impl Default for SweepParams {
    fn default() -> Self {
        let c = SweepConfig::new(Grid4::new([0.0; 4], [1.0; 4], [2; 4]).unwrap());
        SweepParams { n: [17; 4], lo: None, hi: None, tol: c.tol, max_cycles: c.max_cycles, value_cap: c.value_cap }
    }
}

/// A scenario with its obstacle built and inputs validated.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub spec: Scenario,
    pub obstacle: Obstacle,
    pub speeds: Speeds,
    pub states: Vec<(String, GameState)>,
}

impl Loaded {
    pub fn id(&self) -> &str {
        &self.spec.id
    }

    /// Corner wedge for the corner analysis of a state, if the obstacle has one.
    pub fn corner_for(&self, state: &GameState) -> Option<CornerSpec> {
        let poly = self.obstacle.as_polygon();
        match (&self.spec.corner, poly) {
            (Some(CornerSelect::Wedge(w)), _) => Some(*w),
            (Some(CornerSelect::Vertex { vertex, radius }), Some(p)) => {
                CornerSpec::from_polygon(p, *vertex, *radius).ok()
            }
            (None, Some(p)) => (0..p.len()).find_map(|i| {
                let spec = CornerSpec::from_polygon(p, i, self.obstacle.diameter()).ok()?;
                occlusion_core::corner::to_polar_checked(state, &spec, &self.obstacle).ok().map(|_| spec)
            }),
            _ => None,
        }
    }

    pub fn sweep_config(&self, n_override: Option<usize>, tol_override: Option<f64>) -> Result<SweepConfig, CliError> {
        let p = &self.spec.params.sweep;
        let mut n = p.n;
        if let Some(k) = n_override {
            for x in n.iter_mut().filter(|x| **x > 1) {
                *x = k;
            }
        }
        let grid = match (p.lo, p.hi) {
            (Some(lo), Some(hi)) => Grid4::new(lo, hi, n),
            (None, None) => {
                let g = Grid4::around(&self.obstacle, 2)?;
                Grid4::new(g.lo, g.hi, n)
            }
            _ => return Err(CliError::Schema(format!("{}: sweep needs both lo and hi", self.spec.id))),
        }
        .map_err(|e| CliError::Schema(format!("{}: {e}", self.spec.id)))?;
        let mut cfg = SweepConfig::new(grid);
        cfg.tol = tol_override.unwrap_or(p.tol);
        cfg.max_cycles = p.max_cycles;
        cfg.value_cap = p.value_cap;
        cfg.interface_tol = self.spec.params.interface_tol;
        Ok(cfg)
    }
}

fn build_obstacle(spec: &ObstacleSpec) -> occlusion_core::Result<Obstacle> {
    match spec {
        ObstacleSpec::Circle { center, radius } => Obstacle::circle(*center, *radius),
        ObstacleSpec::Polygon { vertices } => Obstacle::polygon(vertices.clone()),
        ObstacleSpec::Arc(a) => Ok(Obstacle::Arc(a.clone())),
        ObstacleSpec::ArcProfile { curvature, half_length, anchor, tangent_angle, cells } => {
            if curvature.len() < 2 {
                return Err(occlusion_core::Error::InvalidObstacle("need at least two curvature samples".into()));
            }
            let k = curvature.clone();
            let l = *half_length;
            let profile = move |s: f64| {
                let u = ((s + l) / (2.0 * l) * (k.len() - 1) as f64).clamp(0.0, (k.len() - 1) as f64);
                let i = (u.floor() as usize).min(k.len() - 2);
                let f = u - i as f64;
                k[i] * (1.0 - f) + k[i + 1] * f
            };
            ConvexArc::from_curvature(profile, l, *cells, *anchor, *tangent_angle).map(Obstacle::Arc)
        }
    }
}

impl Scenario {
    pub fn load(self) -> Result<Loaded, CliError> {
        let ctx = |e: occlusion_core::Error| CliError::Schema(format!("{}: {e}", self.id));
        if self.schema != SCHEMA {
            return Err(CliError::Schema(format!("{}: unsupported schema {:?}, expected {SCHEMA:?}", self.id, self.schema)));
        }
        let obstacle = build_obstacle(&self.obstacle).map_err(ctx)?;
        let speeds = Speeds::new(self.speeds.evader, self.speeds.pursuer).map_err(ctx)?;
        let mut states = Vec::with_capacity(self.states.len());
        for s in &self.states {
            let st = GameState::new(s.evader, s.pursuer);
            st.validate(&obstacle)
                .map_err(|e| CliError::Schema(format!("{}/{}: {e}", self.id, s.id)))?;
            states.push((s.id.clone(), st));
        }
        Ok(Loaded { spec: self, obstacle, speeds, states })
    }
}

/// Reads scenario files in order; parse errors carry the file, line and column.
pub fn read_files(paths: &[impl AsRef<Path>]) -> Result<Vec<Loaded>, CliError> {
    let mut out = Vec::new();
    for path in paths {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        out.extend(parse(&text).map_err(|e| match e {
            CliError::Schema(m) => CliError::Schema(format!("{}: {m}", path.display())),
            other => other,
        })?);
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<Vec<Loaded>, CliError> {
    let schema = |e: serde_json::Error| CliError::Schema(e.to_string());
    let items: Vec<Scenario> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(schema)?
    } else {
        vec![serde_json::from_str(text).map_err(schema)?]
    };
    items.into_iter().map(Scenario::load).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE: &str = r#"{"schema":"occlusion-scenario/1","id":"c","obstacle":{"type":"circle","center":[0,0],"radius":1},
        "speeds":{"evader":1,"pursuer":0.5},"states":[{"id":"s","evader":[-2,1.1],"pursuer":[2,1.1]}]}"#;

    #[test]
    fn single_and_array_forms() {
        assert_eq!(parse(CIRCLE).unwrap().len(), 1);
        let arr = format!("[{CIRCLE},{}]", CIRCLE.replace("\"id\":\"c\"", "\"id\":\"d\""));
        let all = parse(&arr).unwrap();
        assert_eq!(all.iter().map(|l| l.id()).collect::<Vec<_>>(), ["c", "d"]);
        assert_eq!(all[0].spec.params.delta, 0.5);
    }

    #[test]
    fn unknown_fields_and_players_inside_fail() {
        let extra = CIRCLE.replace("\"states\"", "\"colour\":1,\"states\"");
        assert!(matches!(parse(&extra), Err(CliError::Schema(_))));
        let inside = CIRCLE.replace("[-2,1.1]", "[0,0.5]");
        assert!(matches!(parse(&inside), Err(CliError::Schema(_))));
    }

    #[test]
    fn arc_profile_builds() {
        let text = r#"{"schema":"occlusion-scenario/1","id":"a","speeds":{"evader":1,"pursuer":1},
            "obstacle":{"type":"arc_profile","curvature":[1.0,1.2,1.0],"half_length":1.0,"anchor":[0,1],"tangent_angle":0.0,"cells":512}}"#;
        let l = parse(text).unwrap();
        assert!(matches!(l[0].obstacle, Obstacle::Arc(_)));
    }

    #[test]
    fn corner_is_detected_per_state() {
        let text = r#"{"schema":"occlusion-scenario/1","id":"t","speeds":{"evader":1,"pursuer":1},
            "obstacle":{"type":"polygon","vertices":[[0,0],[-3,3],[-3,-3]]},
            "states":[{"id":"s","evader":[0,1],"pursuer":[0.2,-2]}]}"#;
        let l = &parse(text).unwrap()[0];
        let spec = l.corner_for(&l.states[0].1).unwrap();
        assert!(spec.corner.norm() < 1e-12);
    }

    #[test]
    fn sweep_override_keeps_fixed_axes() {
        let mut l = parse(CIRCLE).unwrap().remove(0);
        l.spec.params.sweep.n = [9, 9, 1, 1];
        let cfg = l.sweep_config(Some(5), None).unwrap();
        assert_eq!(cfg.grid.n, [5, 5, 1, 1]);
    }
}
