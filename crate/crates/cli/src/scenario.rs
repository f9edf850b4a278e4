//! Scenario files and the figure presets.

use serde::{Deserialize, Serialize};

use clickstat::detectors::{DetectorConfig, DetectorModel};
use clickstat::multimode::MAX_MODES;
use clickstat::states::Parity;
use clickstat::witnesses::MatrixKind;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub states: Vec<StateChoice>,
    pub detector: DetectorChoice,
    #[serde(default)]
    pub sets: SetSelection,
    pub criteria: Vec<Criterion>,
    /// Multimode ratio cases evaluated by the `ratio` and `count-ratio` criteria.
    #[serde(default)]
    pub ratio_cases: Vec<CaseName>,
    pub sweep: Sweep,
    #[serde(default)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateKind {
    Coherent,
    Cat,
    Fock,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityName {
    Even,
    Odd,
}

impl From<ParityName> for Parity {
    fn from(p: ParityName) -> Parity {
        match p {
            ParityName::Even => Parity::Even,
            ParityName::Odd => Parity::Odd,
        }
    }
}

/// The swept intensity `‖α‖²` is spread evenly over `modes`. Fock states
/// ignore it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateChoice {
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parity: Option<ParityName>,
    #[serde(default = "one")]
    pub modes: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

fn one() -> usize {
    1
}

impl StateChoice {
    pub fn cat(parity: ParityName, modes: usize) -> Self {
        StateChoice {
            kind: StateKind::Cat,
            parity: Some(parity),
            modes,
            n: None,
        }
    }

    pub fn id(&self) -> String {
        let base = match (self.kind, self.parity) {
            (StateKind::Coherent, _) => "coherent".to_string(),
            (StateKind::Cat, Some(ParityName::Even)) => "cat-even".to_string(),
            (StateKind::Cat, _) => "cat-odd".to_string(),
            (StateKind::Fock, _) => format!("fock{}", self.n.unwrap_or(0)),
        };
        if self.modes > 1 {
            format!("{base}-m{}", self.modes)
        } else {
            base
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.modes == 0 || self.modes > MAX_MODES {
            return Err(CliError::Validation(format!(
                "modes must be in 1..={MAX_MODES}, got {}",
                self.modes
            )));
        }
        match self.kind {
            StateKind::Cat if self.parity.is_none() => {
                Err(CliError::Validation("cat states need a parity".into()))
            }
            StateKind::Fock if self.n.is_none() => {
                Err(CliError::Validation("Fock states need a photon number n".into()))
            }
            StateKind::Fock if self.modes != 1 => {
                Err(CliError::Validation("Fock states are single-mode".into()))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelName {
    Photoelectric,
    Onoff,
    Pnr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorChoice {
    pub model: ModelName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<u32>,
    pub eta: f64,
    #[serde(default)]
    pub dark: f64,
}

impl ModelName {
    pub fn name(self) -> &'static str {
        match self {
            ModelName::Photoelectric => "photoelectric",
            ModelName::Onoff => "onoff",
            ModelName::Pnr => "pnr",
        }
    }
}

impl DetectorChoice {
    pub fn config(&self) -> Result<DetectorConfig, CliError> {
        let bins = || {
            self.bins
                .ok_or_else(|| CliError::Validation(format!("{} detector needs bins", self.model.name())))
        };
        let cfg = match self.model {
            ModelName::Photoelectric => DetectorConfig::photoelectric(self.eta),
            ModelName::Onoff => DetectorConfig::on_off(bins()?, self.eta),
            ModelName::Pnr => {
                let levels = self
                    .levels
                    .ok_or_else(|| CliError::Validation("pnr detector needs levels".into()))?;
                DetectorConfig::pnr(bins()?, levels, self.eta)
            }
        }
        .with_dark(self.dark);
        cfg.validate().map_err(CliError::from)?;
        Ok(cfg)
    }
}

/// A preset name or an explicit list of sets, each a list of elements such
/// as `"3/2"` or `"1/2,0,3/2"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetSelection {
    Preset(SetPreset),
    Explicit(Vec<Vec<String>>),
}

impl Default for SetSelection {
    fn default() -> Self {
        SetSelection::Preset(SetPreset::All)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SetPreset {
    Integer,
    Half,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Criterion {
    /// Minimal eigenvalue of the count matrix.
    Counts,
    /// Minimal eigenvalue of the moment matrix.
    Moments,
    CountsDet,
    MomentsDet,
    /// Minimal eigenvalue of the normalized `[g^(k+l)]` matrix.
    GMatrix,
    KlyshkoInteger,
    KlyshkoHalf,
    QB,
    Skewness,
    Ratio,
    CountRatio,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Counts => "counts",
            Criterion::Moments => "moments",
            Criterion::CountsDet => "counts-det",
            Criterion::MomentsDet => "moments-det",
            Criterion::GMatrix => "g-matrix",
            Criterion::KlyshkoInteger => "klyshko-integer",
            Criterion::KlyshkoHalf => "klyshko-half",
            Criterion::QB => "q-b",
            Criterion::Skewness => "skewness",
            Criterion::Ratio => "ratio",
            Criterion::CountRatio => "count-ratio",
        }
    }

    /// Matrix kind for set-based criteria; `None` for scalar ones.
    pub fn matrix_kind(self) -> Option<MatrixKind> {
        match self {
            Criterion::Counts | Criterion::CountsDet => Some(MatrixKind::Counts),
            Criterion::Moments | Criterion::MomentsDet | Criterion::GMatrix => Some(MatrixKind::Moments),
            _ => None,
        }
    }

    pub fn parse(s: &str) -> Result<Criterion, CliError> {
        serde_json::from_value(serde_json::Value::String(s.to_string()))
            .map_err(|_| CliError::Validation(format!("unknown criterion {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseName {
    I,
    Ii,
    Iii,
    Iv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    #[serde(default = "log_grid")]
    pub grid: GridKind,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

fn log_grid() -> GridKind {
    GridKind::Log
}

impl Sweep {
    pub fn single(at: f64) -> Sweep {
        Sweep {
            grid: GridKind::Linear,
            start: at,
            stop: at,
            points: 1,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                match self.grid {
                    GridKind::Linear => self.start + t * (self.stop - self.start),
                    GridKind::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + t * (b - a))
                    }
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.points == 0 {
            return Err(CliError::Validation("sweep needs at least one point".into()));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) || self.start < 0.0 || self.stop < 0.0 {
            return Err(CliError::Validation("sweep bounds must be finite and non-negative".into()));
        }
        if self.grid == GridKind::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(CliError::Validation("log grid needs positive bounds".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    /// Output directory; overridden by `CLICKSTAT_OUT_DIR`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub format: Format,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, CliError> {
        let s: Scenario =
            serde_json::from_str(text).map_err(|e| CliError::Validation(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
            return Err(CliError::Validation(format!(
                "scenario name {:?} must be non-empty ASCII letters, digits, '-' or '_'",
                self.name
            )));
        }
        if self.states.is_empty() {
            return Err(CliError::Validation("scenario lists no states".into()));
        }
        if self.criteria.is_empty() {
            return Err(CliError::Validation("scenario lists no criteria".into()));
        }
        for s in &self.states {
            s.validate()?;
        }
        let cfg = self.detector.config()?;
        self.sweep.validate()?;
        let multimode = self.states.iter().any(|s| s.modes > 1);
        for c in &self.criteria {
            let ok = match c {
                Criterion::Counts | Criterion::Moments | Criterion::CountsDet | Criterion::MomentsDet => true,
                Criterion::GMatrix
                | Criterion::KlyshkoInteger
                | Criterion::KlyshkoHalf
                | Criterion::QB
                | Criterion::Skewness => matches!(cfg.model, DetectorModel::OnOff { .. }) && !multimode,
                Criterion::Ratio | Criterion::CountRatio => cfg.model == DetectorModel::Photoelectric,
            };
            if !ok {
                return Err(CliError::Validation(format!(
                    "criterion {} does not apply to {} detection{}",
                    c.name(),
                    cfg.model,
                    if multimode { " of multimode states" } else { "" }
                )));
            }
            if multimode && cfg.model != DetectorModel::Photoelectric {
                return Err(CliError::Validation(
                    "multimode states are evaluated with photoelectric detection only".into(),
                ));
            }
        }
        if self.criteria.iter().any(|c| matches!(c, Criterion::Ratio | Criterion::CountRatio))
            && self.ratio_cases.is_empty()
        {
            return Err(CliError::Validation("ratio criteria need ratio_cases".into()));
        }
        // explicit sets must be admissible before anything is evaluated
        for s in &self.states {
            for c in &self.criteria {
                if let Some(kind) = c.matrix_kind() {
                    crate::run::resolve_sets(&self.sets, cfg.model, kind, s.modes)?;
                }
            }
        }
        Ok(())
    }
}

fn figure_sweep() -> Sweep {
    Sweep {
        grid: GridKind::Log,
        start: 1e-2,
        stop: 1e1,
        points: 200,
    }
}

fn both_cats(modes: usize) -> Vec<StateChoice> {
    vec![
        StateChoice::cat(ParityName::Even, modes),
        StateChoice::cat(ParityName::Odd, modes),
    ]
}

pub const PRESET_NAMES: [&str; 5] = ["fig1", "fig3", "fig4", "fig5", "fig6"];

/// Frozen scenarios reproducing the data behind each figure.
pub fn preset(name: &str) -> Option<Scenario> {
    let half_eta = |model, bins, levels| DetectorChoice {
        model,
        bins,
        levels,
        eta: 0.5,
        dark: 0.0,
    };
    let base = |name: &str, detector, sets, criteria: Vec<Criterion>| Scenario {
        name: name.to_string(),
        states: both_cats(1),
        detector,
        sets,
        criteria,
        ratio_cases: Vec::new(),
        sweep: figure_sweep(),
        output: Output::default(),
    };
    let s = match name {
        "fig1" => base(
            "fig1",
            half_eta(ModelName::Photoelectric, None, None),
            SetSelection::Explicit(vec![
                vec!["1".into(), "2".into()],
                vec!["1/2".into(), "3/2".into()],
            ]),
            vec![
                Criterion::CountsDet,
                Criterion::MomentsDet,
                Criterion::Counts,
                Criterion::Moments,
            ],
        ),
        "fig3" => base(
            "fig3",
            half_eta(ModelName::Onoff, Some(5), None),
            SetSelection::Preset(SetPreset::All),
            vec![Criterion::Counts],
        ),
        "fig4" => base(
            "fig4",
            half_eta(ModelName::Onoff, Some(5), None),
            SetSelection::Preset(SetPreset::All),
            vec![Criterion::Moments],
        ),
        "fig5" => base(
            "fig5",
            half_eta(ModelName::Pnr, Some(4), Some(2)),
            SetSelection::Preset(SetPreset::All),
            vec![Criterion::Counts],
        ),
        "fig6" => {
            let mut s = base(
                "fig6",
                DetectorChoice {
                    model: ModelName::Photoelectric,
                    bins: None,
                    levels: None,
                    eta: 1.0,
                    dark: 0.0,
                },
                SetSelection::Preset(SetPreset::All),
                vec![Criterion::Ratio],
            );
            s.states = [1, 2, 3, 5].iter().flat_map(|&m| both_cats(m)).collect();
            s.ratio_cases = vec![CaseName::Ii, CaseName::Iii];
            s
        }
        _ => return None,
    };
    Some(s)
}
