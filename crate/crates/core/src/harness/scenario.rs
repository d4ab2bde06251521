//! Declarative scenario files and the built-in presets.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::birkhoff_rott::{stable_dt, InterfaceState, SimConfig};
use crate::error::{Result, SheetError};
use crate::geometry::{geometry, read_curve, Curve};
use crate::splash::MarkerRegion;
use crate::vec2::Vec2;

/// One Fourier mode `cos·cos(kx) + sin·sin(kx)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mode {
    pub k: usize,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

fn modes_at(modes: &[Mode], x: f64) -> f64 {
    modes
        .iter()
        .map(|m| m.cos * (m.k as f64 * x).cos() + m.sin * (m.k as f64 * x).sin())
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CurveSpec {
    /// η = (x, 0), period 2π.
    Flat { n: usize },
    /// η = (x, Σ modes), period 2π.
    Graph { n: usize, modes: Vec<Mode> },
    /// Counterclockwise circle about the origin.
    Circle { n: usize, radius: f64 },
    /// (2 cos x, sin x (gap/2 + waist cos² x)), counterclockwise.
    Dumbbell { n: usize, gap: f64, waist: f64 },
    /// Curve text file; a fourth column, if present, can seed the strength.
    File { path: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StrengthSpec {
    Zero,
    Constant { value: f64 },
    /// `s(x) = mean + Σ modes`.
    Modes {
        #[serde(default)]
        mean: f64,
        modes: Vec<Mode>,
    },
    /// `s = ∇_T μ` with potential `μ(α) = amplitude · sin^power α`; zero circulation.
    SinePotential { amplitude: f64, power: u32 },
    /// Fourth column of the curve file.
    FromFile,
}

/// Diagnostics evaluated during a run; each enabled one contributes a check.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Diagnostics {
    /// Energy + σ·length relative drift below `energy_tolerance`.
    pub energy: bool,
    pub energy_tolerance: Option<f64>,
    /// max|δu·τ − s| and max|δu·n| at every step.
    pub jump: bool,
    /// Frequency of the standing wave in this η₂ mode against `√(σk³/2)`.
    pub dispersion_mode: Option<usize>,
    /// max|η₂(t) − η₂(0)| below 1e-10.
    pub equilibrium: bool,
    /// Chord-arc minimum per frame.
    pub contact: bool,
    /// `sup|∇u⁻| · min|η'|` stays within 10× its initial value.
    pub metric: bool,
    /// Separation lower bound on each tracked pair after a kernel stop.
    pub separation: bool,
    /// Velocity-jump matrix of each tracked pair, per frame.
    pub matrix: bool,
    /// Largest `X = ∇_T s` per frame (recorded, not checked).
    pub vorticity_derivative: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkerSpec {
    pub centre: [f64; 2],
    pub side: f64,
    pub per_side: usize,
}

impl MarkerSpec {
    pub fn region(&self) -> MarkerRegion {
        MarkerRegion::square(Vec2::new(self.centre[0], self.centre[1]), self.side, self.per_side)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub curve: CurveSpec,
    pub strength: StrengthSpec,
    pub config: SimConfig,
    #[serde(default)]
    pub diagnostics: Diagnostics,
    /// Label index pairs `[x0, x1]` tracked through the run.
    #[serde(default)]
    pub pairs: Vec<[usize; 2]>,
    #[serde(default)]
    pub markers: Vec<MarkerSpec>,
    /// Output frames between curve snapshots; 0 keeps only the first and last.
    #[serde(default = "default_snapshots")]
    pub snapshot_every: usize,
}

fn default_snapshots() -> usize {
    10
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Scenario = toml::from_str(text).map_err(|e| SheetError::Parse(e.to_string()))?;
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Builds the initial state and checks labels, markers and the config.
    pub fn initial_state(&self) -> Result<InterfaceState> {
        self.config.validate()?;
        let (curve, extra) = match &self.curve {
            CurveSpec::Flat { n } => (Curve::flat(*n)?, Vec::new()),
            CurveSpec::Graph { n, modes } => (
                Curve::from_fn(*n, 2.0 * PI, |x| Vec2::new(x, modes_at(modes, x)))?,
                Vec::new(),
            ),
            CurveSpec::Circle { n, radius } => (Curve::circle(*n, *radius)?, Vec::new()),
            CurveSpec::Dumbbell { n, gap, waist } => (Curve::dumbbell(*n, *gap, *waist)?, Vec::new()),
            CurveSpec::File { path } => read_curve(&std::fs::read_to_string(path)?)?,
        };
        let labels = curve.grid().labels();
        let strength = match &self.strength {
            StrengthSpec::Zero => vec![0.0; labels.len()],
            StrengthSpec::Constant { value } => vec![*value; labels.len()],
            StrengthSpec::Modes { mean, modes } => {
                labels.iter().map(|&x| mean + modes_at(modes, x)).collect()
            }
            StrengthSpec::SinePotential { amplitude, power } => {
                let mu: Vec<f64> = labels
                    .iter()
                    .map(|a| amplitude * a.sin().powi(*power as i32))
                    .collect();
                geometry(&curve)?.tangential_derivative(&mu)
            }
            StrengthSpec::FromFile => extra.into_iter().next().ok_or_else(|| {
                SheetError::InvalidInput("strength from-file needs a fourth column".into())
            })?,
        };
        let n = curve.n_points();
        if let Some(p) = self.pairs.iter().find(|p| p[0] >= n || p[1] >= n || p[0] == p[1]) {
            return Err(SheetError::InvalidInput(format!(
                "pair {p:?} must be two distinct labels below N={n}"
            )));
        }
        let state = InterfaceState::new(curve, strength, 0.0)?;
        for m in &self.markers {
            if !(m.side > 0.0) || m.per_side == 0 {
                return Err(SheetError::InvalidInput("marker side and per_side must be positive".into()));
            }
            m.region().check_inside(&state)?;
        }
        Ok(state)
    }
}

/// Names of the built-in presets.
pub const PRESETS: [&str; 3] = ["flat-equilibrium", "capillary-k2", "near-approach"];

pub fn preset(name: &str) -> Result<Scenario> {
    let scenario = match name {
        "flat-equilibrium" => {
            let curve = Curve::flat(64)?;
            let dt = stable_dt(&curve, 1.0);
            Scenario {
                name: name.into(),
                curve: CurveSpec::Flat { n: 64 },
                strength: StrengthSpec::Zero,
                config: SimConfig::new(dt, 100.0 * dt),
                diagnostics: Diagnostics {
                    equilibrium: true,
                    jump: true,
                    energy: true,
                    ..Default::default()
                },
                pairs: Vec::new(),
                markers: Vec::new(),
                snapshot_every: 0,
            }
        }
        "capillary-k2" => Scenario {
            name: name.into(),
            curve: CurveSpec::Graph {
                n: 128,
                modes: vec![Mode { k: 2, cos: 0.01, sin: 0.0 }],
            },
            strength: StrengthSpec::Zero,
            // One period of the k = 2 capillary wave, 2π/ω = π.
            config: SimConfig::new(PI / 2000.0, PI),
            diagnostics: Diagnostics {
                energy: true,
                jump: true,
                dispersion_mode: Some(2),
                contact: true,
                vorticity_derivative: true,
                ..Default::default()
            },
            pairs: Vec::new(),
            markers: vec![MarkerSpec { centre: [PI, 0.6], side: 0.2, per_side: 16 }],
            snapshot_every: 20,
        },
        "near-approach" => {
            let (n, gap, waist) = (256, 0.05, 1.0);
            let curve = Curve::dumbbell(n, gap, waist)?;
            let dt = stable_dt(&curve, 1.0);
            Scenario {
                name: name.into(),
                curve: CurveSpec::Dumbbell { n, gap, waist },
                strength: StrengthSpec::SinePotential { amplitude: 1.0, power: 8 },
                config: SimConfig::new(dt, 5.0),
                diagnostics: Diagnostics {
                    jump: true,
                    contact: true,
                    metric: true,
                    separation: true,
                    matrix: true,
                    vorticity_derivative: true,
                    ..Default::default()
                },
                pairs: vec![[n / 4, 3 * n / 4]],
                markers: Vec::new(),
                snapshot_every: 5,
            }
        }
        _ => {
            return Err(SheetError::InvalidInput(format!(
                "unknown preset {name}; known: {}",
                PRESETS.join(", ")
            )))
        }
    };
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip_and_build() {
        for name in PRESETS {
            let s = preset(name).unwrap();
            let text = s.to_toml();
            let back = Scenario::from_toml(&text).unwrap();
            assert_eq!(back, s);
            assert_eq!(back.to_toml(), text);
            s.initial_state().unwrap();
        }
    }

    #[test]
    fn bad_pairs_and_fields_are_rejected() {
        let mut s = preset("near-approach").unwrap();
        s.pairs = vec![[3, 400]];
        assert!(matches!(s.initial_state(), Err(SheetError::InvalidInput(_))));
        let text = preset("flat-equilibrium").unwrap().to_toml().replace("[config]", "[config]\nbogus = 1");
        assert!(matches!(Scenario::from_toml(&text), Err(SheetError::Parse(_))));
    }
}
