//! Sweep configuration: a flat TOML table, overridable with `--set key=value`.

use serde::Deserialize;

use hybridcorr_core::digitalize::FailPolicy;
use hybridcorr_core::protocols::{InputAverage, RspMode};
use hybridcorr_core::Tolerances;

/// A scalar or a list in the config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Grid<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> Grid<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            Grid::One(x) => vec![x.clone()],
            Grid::Many(v) => v.clone(),
        }
    }
}

/// `"auto"` or explicit values.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum AutoGrid {
    Auto(Auto),
    Values(Grid<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Auto {
    Auto,
}

impl AutoGrid {
    /// `[None]` for auto.
    pub fn values(&self) -> Vec<Option<usize>> {
        match self {
            AutoGrid::Auto(_) => vec![None],
            AutoGrid::Values(g) => g.values().into_iter().map(Some).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeName {
    Unitary,
    Digitalizing,
}

impl From<ModeName> for RspMode {
    fn from(m: ModeName) -> Self {
        match m {
            ModeName::Unitary => RspMode::UnitaryCorrection,
            ModeName::Digitalizing => RspMode::DigitalizingCorrection,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyName {
    Track,
    Renormalize,
}

impl From<PolicyName> for FailPolicy {
    fn from(p: PolicyName) -> Self {
        match p {
            PolicyName::Track => FailPolicy::TrackFailFlag,
            PolicyName::Renormalize => FailPolicy::RenormalizeSuccess,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AverageName {
    Icosahedron,
    Montecarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub p: Grid<f64>,
    pub r_abs: Grid<f64>,
    pub r_arg: Grid<f64>,
    pub beta_re: Grid<f64>,
    pub beta_im: Grid<f64>,
    pub nbar: Grid<f64>,
    pub dim: AutoGrid,
    pub kraus_cutoff: AutoGrid,

    pub mode: ModeName,
    pub phi: f64,
    pub phase_points: usize,
    pub fail_policy: PolicyName,
    pub input_theta: f64,
    pub input_phi: f64,
    pub teleport_average: AverageName,
    pub mc_samples: usize,
    pub dz_numeric: bool,
    pub figure_points: usize,

    pub tol_trace: f64,
    pub tol_psd: f64,
    pub tol_hermitian: f64,

    pub wall_time: bool,
    pub format: Format,
    pub out: Option<String>,
    pub jobs: Option<usize>,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let tol = Tolerances::default();
        Self {
            p: Grid::One(0.5),
            r_abs: Grid::One(0.5),
            r_arg: Grid::One(0.0),
            beta_re: Grid::One(4.0),
            beta_im: Grid::One(0.0),
            nbar: Grid::One(0.0),
            dim: AutoGrid::Auto(Auto::Auto),
            kraus_cutoff: AutoGrid::Auto(Auto::Auto),
            mode: ModeName::Unitary,
            phi: 0.0,
            phase_points: 64,
            fail_policy: PolicyName::Track,
            input_theta: std::f64::consts::FRAC_PI_2,
            input_phi: 0.0,
            teleport_average: AverageName::Icosahedron,
            mc_samples: 2000,
            dz_numeric: false,
            figure_points: 21,
            tol_trace: tol.trace,
            tol_psd: tol.psd,
            tol_hermitian: tol.hermitian,
            wall_time: false,
            format: Format::Csv,
            out: None,
            jobs: None,
            seed: 0,
        }
    }
}

impl SweepConfig {
    /// Parse `text`, apply `key=value` overrides (values in TOML syntax; bare
    /// words are taken as strings), then validate.
    pub fn load(text: &str, overrides: &[String]) -> Result<Self, String> {
        let mut table: toml::Table = text.parse().map_err(|e| format!("config: {e}"))?;
        for item in overrides {
            let (key, raw) = item
                .split_once('=')
                .ok_or_else(|| format!("--set expects key=value, got '{item}'"))?;
            let key = key.trim();
            let raw = raw.trim();
            let value = match format!("v = {raw}").parse::<toml::Table>() {
                Ok(mut t) => t.remove("v").expect("parsed key"),
                Err(_) => toml::Value::String(raw.to_string()),
            };
            table.insert(key.to_string(), value);
        }
        let cfg: SweepConfig = toml::Value::Table(table)
            .try_into()
            .map_err(|e| format!("config: {e}"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        let grids = [
            ("p", self.p.values()),
            ("r_abs", self.r_abs.values()),
            ("r_arg", self.r_arg.values()),
            ("beta_re", self.beta_re.values()),
            ("beta_im", self.beta_im.values()),
            ("nbar", self.nbar.values()),
        ];
        for (name, g) in &grids {
            if g.is_empty() {
                return Err(format!("grid '{name}' is empty"));
            }
            if g.iter().any(|x| !x.is_finite()) {
                return Err(format!("grid '{name}' has non-finite values"));
            }
        }
        if let AutoGrid::Values(g) = &self.dim {
            let v = g.values();
            if v.is_empty() || v.iter().any(|&d| d < 2) {
                return Err("dim must be 'auto' or non-empty with values >= 2".into());
            }
        }
        if let AutoGrid::Values(g) = &self.kraus_cutoff {
            if g.values().is_empty() {
                return Err("kraus_cutoff grid is empty".into());
            }
        }
        if self.nbar.values().iter().any(|&n| n < 0.0) {
            return Err("nbar must be non-negative".into());
        }
        if self.phase_points == 0 || self.figure_points < 2 || self.mc_samples == 0 {
            return Err("phase_points, mc_samples must be positive and figure_points at least 2".into());
        }
        if self.jobs == Some(0) {
            return Err("jobs must be positive".into());
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            trace: self.tol_trace,
            psd: self.tol_psd,
            hermitian: self.tol_hermitian,
        }
    }

    pub fn input_average(&self) -> InputAverage {
        match self.teleport_average {
            AverageName::Icosahedron => InputAverage::Icosahedron,
            AverageName::Montecarlo => InputAverage::MonteCarlo {
                samples: self.mc_samples,
                seed: self.seed,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let cfg = SweepConfig::load("r_abs = [0.1, 0.2]\nnbar = 1.0\n", &["mode=digitalizing".into(), "dim=[40, 60]".into()])
            .unwrap();
        assert_eq!(cfg.r_abs.values(), vec![0.1, 0.2]);
        assert_eq!(cfg.nbar.values(), vec![1.0]);
        assert_eq!(cfg.mode, ModeName::Digitalizing);
        assert_eq!(cfg.dim.values(), vec![Some(40), Some(60)]);
        assert_eq!(cfg.kraus_cutoff.values(), vec![None]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SweepConfig::load("r_abs = []", &[]).is_err());
        assert!(SweepConfig::load("unknown = 1", &[]).is_err());
        assert!(SweepConfig::load("", &["noequals".into()]).is_err());
        assert!(SweepConfig::load("", &["dim=1".into()]).is_err());
        assert!(SweepConfig::load("", &["mode=sideways".into()]).is_err());
    }
}
