//! Sweep specifications: figure defaults, the TOML config file and flag overrides.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;
use clonelab::correlations::DiscordOptions;
use serde::{Deserialize, Serialize};

use crate::angle::parse_angle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Custom,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
            Figure::Custom => "custom",
        }
    }

    /// `None` for custom sweeps, which must name their measure.
    pub fn measure(self) -> Option<Measure> {
        match self {
            Figure::Fig1 | Figure::Fig2 => Some(Measure::Concurrence),
            Figure::Fig3 | Figure::Fig4 => Some(Measure::Discord),
            Figure::Fig5 | Figure::Fig6 => Some(Measure::Tangle),
            Figure::Custom => None,
        }
    }

    pub fn axis(self) -> Axis {
        match self {
            Figure::Fig2 | Figure::Fig4 | Figure::Fig6 => Axis::Overlap,
            _ => Axis::B,
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Concurrence,
    Discord,
    Tangle,
}

/// What a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// `B` across the feasible range at fixed `(θ, γ)`, fidelity `f_p`.
    B,
    /// The overlap `s` at fixed `γ` with `B` at its optimum, fidelity `f_opt`.
    Overlap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub figure: Figure,
    pub measure: Measure,
    pub axis: Axis,
    /// Used by `B` sweeps only.
    pub thetas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub b_points: usize,
    /// Overlap sweeps use `s = k / s_points` for `k = 1..=s_points`.
    pub s_points: usize,
    pub discord: DiscordOptions,
}

impl SweepSpec {
    pub fn for_figure(figure: Figure) -> Result<Self, String> {
        let measure = figure
            .measure()
            .ok_or("a custom sweep needs a measure (set `measure` or --measure)")?;
        Ok(Self::defaults(figure, measure, figure.axis()))
    }

    fn defaults(figure: Figure, measure: Measure, axis: Axis) -> Self {
        let gammas = match axis {
            Axis::B => vec![1.0, 0.9, 0.8],
            Axis::Overlap => vec![0.7, 0.8, 0.9, 1.0],
        };
        Self {
            figure,
            measure,
            axis,
            thetas: vec![0.0, PI / 20.0, PI / 10.0, FRAC_PI_4],
            gammas,
            b_points: 2001,
            s_points: 501,
            discord: DiscordOptions::default(),
        }
    }

    /// Flags over config file over figure defaults.
    pub fn resolve(config: &SweepConfig, flags: &SweepConfig) -> Result<Self, String> {
        let figure = flags
            .figure
            .or(config.figure)
            .ok_or("no figure given (use --figure or set `figure` in the config)")?;
        let measure = flags
            .measure
            .or(config.measure)
            .or(figure.measure())
            .ok_or("a custom sweep needs a measure (set `measure` or --measure)")?;
        let axis = flags.axis.or(config.axis).unwrap_or(figure.axis());
        let mut spec = Self::defaults(figure, measure, axis);
        for layer in [config, flags] {
            layer.apply(&mut spec);
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.b_points < 2 || self.s_points < 2 {
            return Err(format!(
                "grid densities must be at least 2 (b_points = {}, s_points = {})",
                self.b_points, self.s_points
            ));
        }
        if let Some(t) = self.thetas.iter().find(|t| !(0.0..=FRAC_PI_4).contains(*t)) {
            return Err(format!("θ = {t} lies outside [0, π/4]"));
        }
        if let Some(g) = self.gammas.iter().find(|g| !(0.0..=1.0).contains(*g)) {
            return Err(format!("γ = {g} lies outside [0, 1]"));
        }
        if self.gammas.is_empty() || (self.axis == Axis::B && self.thetas.is_empty()) {
            return Err("empty θ or γ list".into());
        }
        self.discord.validate().map_err(|e| e.to_string())
    }
}

/// A layer of optional settings; both the TOML config file and the command-line flags
/// produce one.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub figure: Option<Figure>,
    pub measure: Option<Measure>,
    pub axis: Option<Axis>,
    pub thetas: Option<Vec<Angle>>,
    pub gammas: Option<Vec<f64>>,
    pub b_points: Option<usize>,
    pub s_points: Option<usize>,
    pub discord_grid: Option<usize>,
    pub discord_tolerance: Option<f64>,
    pub discord_max_iterations: Option<usize>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }

    fn apply(&self, spec: &mut SweepSpec) {
        if let Some(thetas) = &self.thetas {
            spec.thetas = thetas.iter().map(|a| a.0).collect();
        }
        if let Some(gammas) = &self.gammas {
            spec.gammas = gammas.clone();
        }
        if let Some(n) = self.b_points {
            spec.b_points = n;
        }
        if let Some(n) = self.s_points {
            spec.s_points = n;
        }
        if let Some(n) = self.discord_grid {
            spec.discord.grid = n;
        }
        if let Some(t) = self.discord_tolerance {
            spec.discord.tolerance = t;
        }
        if let Some(n) = self.discord_max_iterations {
            spec.discord.max_iterations = n;
        }
    }
}

/// An angle given either as a number or as text like `"pi/20"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(pub f64);

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_angle(s).map(Angle)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(x) => Ok(Angle(x)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}
