use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fock::{Mode, OscillatorParams};
use crate::gaussian::{thermal_state, GaussianState};
use crate::open_dynamics::ThermalBath;
use crate::quadrature::ConvergencePolicy;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Fig1,
    Fig3,
    Eigen,
    Fidelity,
    Coherence,
    Negativity,
}

impl Experiment {
    pub fn is_query(self) -> bool {
        !matches!(self, Experiment::Fig1 | Experiment::Fig3)
    }

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Fig1 => "fig1",
            Experiment::Fig3 => "fig3",
            Experiment::Eigen => "eigen",
            Experiment::Fidelity => "fidelity",
            Experiment::Coherence => "coherence",
            Experiment::Negativity => "negativity",
        }
    }
}

impl FromStr for Experiment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fig1" => Experiment::Fig1,
            "fig3" => Experiment::Fig3,
            "eigen" => Experiment::Eigen,
            "fidelity" => Experiment::Fidelity,
            "coherence" => Experiment::Coherence,
            "negativity" => Experiment::Negativity,
            _ => return Err(Error::Config(format!("unknown experiment '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Unit of the fig3 time axis: `Γt` or `ωt`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TimeUnit {
    Decay,
    Omega,
}

impl FromStr for TimeUnit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "decay" => Ok(TimeUnit::Decay),
            "omega" => Ok(TimeUnit::Omega),
            _ => Err(Error::Config(format!("unknown time unit '{s}' (expected decay or omega)"))),
        }
    }
}

impl fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeUnit::Decay => "decay",
            TimeUnit::Omega => "omega",
        })
    }
}

/// Single-mode Gaussian state written as `vacuum`, `thermal(n)`,
/// `coherent(q,p)` or `displaced_thermal(q,p,variance)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateSpec {
    Vacuum,
    Thermal(f64),
    Coherent(f64, f64),
    DisplacedThermal(f64, f64, f64),
}

impl StateSpec {
    pub fn build(&self) -> Result<GaussianState> {
        match *self {
            StateSpec::Vacuum => GaussianState::vacuum(1),
            StateSpec::Thermal(n) => thermal_state(n),
            StateSpec::Coherent(q, p) => GaussianState::coherent(q, p),
            StateSpec::DisplacedThermal(q, p, v) => GaussianState::displaced_thermal(q, p, v),
        }
    }
}

impl FromStr for StateSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "vacuum" {
            return Ok(StateSpec::Vacuum);
        }
        let bad = || Error::Config(format!("cannot parse state '{s}'"));
        let open = s.find('(').ok_or_else(bad)?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(bad)?;
        let args = inner.split(',').map(parse_real).collect::<Result<Vec<_>>>()?;
        match (&s[..open], args.as_slice()) {
            ("thermal", [n]) => Ok(StateSpec::Thermal(*n)),
            ("coherent", [q, p]) => Ok(StateSpec::Coherent(*q, *p)),
            ("displaced_thermal", [q, p, v]) => Ok(StateSpec::DisplacedThermal(*q, *p, *v)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Vacuum => write!(f, "vacuum"),
            StateSpec::Thermal(n) => write!(f, "thermal({n})"),
            StateSpec::Coherent(q, p) => write!(f, "coherent({q},{p})"),
            StateSpec::DisplacedThermal(q, p, v) => write!(f, "displaced_thermal({q},{p},{v})"),
        }
    }
}

/// Everything a run needs. Read from a flat `key = value` file with dotted
/// keys; `#` starts a comment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,

    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub gamma: f64,
    pub decay_rate: f64,
    pub bath_photons: f64,
    pub k: u32,
    pub l: u32,
    pub initial_means: [f64; 4],
    /// Per-mode initial covariance `v·I` (vacuum units).
    pub initial_variance: f64,

    pub theta_step: f64,
    pub theta_max: f64,
    pub grid_points: usize,
    pub max_grid_points: usize,
    /// 0 picks the state's default.
    pub hermite_nodes: usize,
    pub tolerance: f64,
    pub refine_depth: u32,
    pub time_max: f64,
    pub time_step: f64,
    pub time_unit: TimeUnit,
    pub max_step: f64,
    pub threads: usize,

    pub inset: bool,

    pub state: StateSpec,
    pub reference: StateSpec,
    pub theta: f64,
    pub mode: u32,

    pub out: Option<PathBuf>,
    pub format: Format,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            experiment: Experiment::Fig1,
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            gamma: 0.1,
            decay_rate: 0.05,
            bath_photons: 4.0,
            k: 1,
            l: 0,
            initial_means: [1.0; 4],
            initial_variance: 4.0,
            theta_step: PI / 200.0,
            theta_max: PI,
            grid_points: 129,
            max_grid_points: 1025,
            hermite_nodes: 0,
            tolerance: 1e-6,
            refine_depth: 6,
            time_max: 6.0,
            time_step: 0.005,
            time_unit: TimeUnit::Decay,
            max_step: 0.01,
            threads: 0,
            inset: false,
            state: StateSpec::Vacuum,
            reference: StateSpec::Thermal(4.0),
            theta: 0.0,
            mode: 1,
            out: None,
            format: Format::Csv,
        }
    }
}

pub const KEYS: &[&str] = &[
    "experiment",
    "physics.hbar",
    "physics.mass",
    "physics.omega",
    "physics.gamma",
    "physics.decay_rate",
    "physics.bath_photons",
    "physics.k",
    "physics.l",
    "physics.initial_means",
    "physics.initial_variance",
    "numeric.theta_step",
    "numeric.theta_max",
    "numeric.grid_points",
    "numeric.max_grid_points",
    "numeric.hermite_nodes",
    "numeric.tolerance",
    "numeric.refine_depth",
    "numeric.time_max",
    "numeric.time_step",
    "numeric.time_unit",
    "numeric.max_step",
    "numeric.threads",
    "fig3.inset",
    "query.state",
    "query.reference",
    "query.theta",
    "query.mode",
    "output.path",
    "output.format",
];

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Defaults overlaid with the assignments in `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            cfg.apply_assignment(line).map_err(|e| match e {
                Error::Config(msg) => Error::Config(format!("line {}: {msg}", lineno + 1)),
                other => other,
            })?;
        }
        Ok(cfg)
    }

    /// Applies one `key=value` string, as given to `--set`.
    pub fn apply_assignment(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key = value, got '{assignment}'")))?;
        self.set(key.trim(), value.trim())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let wrap = |e: Error| match e {
            Error::Config(msg) => Error::Config(format!("{key}: {msg}")),
            other => other,
        };
        match key {
            "experiment" => self.experiment = value.parse()?,
            "physics.hbar" => self.hbar = parse_real(value).map_err(wrap)?,
            "physics.mass" => self.mass = parse_real(value).map_err(wrap)?,
            "physics.omega" => self.omega = parse_real(value).map_err(wrap)?,
            "physics.gamma" => self.gamma = parse_real(value).map_err(wrap)?,
            "physics.decay_rate" => self.decay_rate = parse_real(value).map_err(wrap)?,
            "physics.bath_photons" => self.bath_photons = parse_real(value).map_err(wrap)?,
            "physics.k" => self.k = parse_int(value).map_err(wrap)?,
            "physics.l" => self.l = parse_int(value).map_err(wrap)?,
            "physics.initial_means" => {
                let v = value.split(',').map(parse_real).collect::<Result<Vec<_>>>().map_err(wrap)?;
                self.initial_means = v
                    .try_into()
                    .map_err(|_| Error::Config(format!("{key}: expected four comma-separated numbers")))?;
            }
            "physics.initial_variance" => self.initial_variance = parse_real(value).map_err(wrap)?,
            "numeric.theta_step" => self.theta_step = parse_real(value).map_err(wrap)?,
            "numeric.theta_max" => self.theta_max = parse_real(value).map_err(wrap)?,
            "numeric.grid_points" => self.grid_points = parse_int(value).map_err(wrap)?,
            "numeric.max_grid_points" => self.max_grid_points = parse_int(value).map_err(wrap)?,
            "numeric.hermite_nodes" => self.hermite_nodes = parse_int(value).map_err(wrap)?,
            "numeric.tolerance" => self.tolerance = parse_real(value).map_err(wrap)?,
            "numeric.refine_depth" => self.refine_depth = parse_int(value).map_err(wrap)?,
            "numeric.time_max" => self.time_max = parse_real(value).map_err(wrap)?,
            "numeric.time_step" => self.time_step = parse_real(value).map_err(wrap)?,
            "numeric.time_unit" => self.time_unit = value.parse()?,
            "numeric.max_step" => self.max_step = parse_real(value).map_err(wrap)?,
            "numeric.threads" => self.threads = parse_int(value).map_err(wrap)?,
            "fig3.inset" => {
                self.inset = value
                    .parse()
                    .map_err(|_| Error::Config(format!("{key}: expected true or false, got '{value}'")))?
            }
            "query.state" => self.state = value.parse()?,
            "query.reference" => self.reference = value.parse()?,
            "query.theta" => self.theta = parse_real(value).map_err(wrap)?,
            "query.mode" => self.mode = parse_int(value).map_err(wrap)?,
            "output.path" => self.out = (!value.is_empty()).then(|| PathBuf::from(value)),
            "output.format" => self.format = value.parse()?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Resolved `(key, value)` pairs in a stable order; feeding them back
    /// through [`ExperimentConfig::parse`] reproduces `self`.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let m = self.initial_means;
        let values = [
            self.experiment.name().to_string(),
            self.hbar.to_string(),
            self.mass.to_string(),
            self.omega.to_string(),
            self.gamma.to_string(),
            self.decay_rate.to_string(),
            self.bath_photons.to_string(),
            self.k.to_string(),
            self.l.to_string(),
            format!("{},{},{},{}", m[0], m[1], m[2], m[3]),
            self.initial_variance.to_string(),
            self.theta_step.to_string(),
            self.theta_max.to_string(),
            self.grid_points.to_string(),
            self.max_grid_points.to_string(),
            self.hermite_nodes.to_string(),
            self.tolerance.to_string(),
            self.refine_depth.to_string(),
            self.time_max.to_string(),
            self.time_step.to_string(),
            self.time_unit.to_string(),
            self.max_step.to_string(),
            self.threads.to_string(),
            self.inset.to_string(),
            self.state.to_string(),
            self.reference.to_string(),
            self.theta.to_string(),
            self.mode.to_string(),
            self.out.as_ref().map(|p| p.display().to_string()).unwrap_or_default(),
            self.format.to_string(),
        ];
        KEYS.iter().copied().zip(values).collect()
    }

    pub fn dump(&self) -> String {
        self.entries().into_iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn params(&self) -> Result<OscillatorParams> {
        OscillatorParams::new(self.mass, self.omega, self.hbar, self.gamma).map_err(to_config)
    }

    pub fn bath(&self) -> Result<ThermalBath> {
        ThermalBath::new(self.decay_rate, self.bath_photons).map_err(to_config)
    }

    pub fn policy(&self) -> ConvergencePolicy {
        ConvergencePolicy {
            tolerance: self.tolerance,
            max_points: self.max_grid_points,
            refine_depth: self.refine_depth,
            ..ConvergencePolicy::default()
        }
    }

    pub fn query_mode(&self) -> Result<Mode> {
        Mode::try_from(self.mode).map_err(to_config)
    }

    /// Checks everything the selected experiment will use.
    pub fn validate(&self) -> Result<()> {
        self.params()?;
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("numeric.tolerance", self.tolerance)?;
        if self.grid_points < 3 || self.grid_points % 2 == 0 {
            return Err(Error::Config(format!("numeric.grid_points must be odd and >= 3, got {}", self.grid_points)));
        }
        if self.max_grid_points < self.grid_points {
            return Err(Error::Config("numeric.max_grid_points is below numeric.grid_points".into()));
        }
        if self.hermite_nodes > 128 {
            return Err(Error::Config(format!("numeric.hermite_nodes must be <= 128, got {}", self.hermite_nodes)));
        }
        match self.experiment {
            Experiment::Fig1 => {
                positive("numeric.theta_step", self.theta_step)?;
                if !(self.theta_max >= 0.0 && self.theta_max.is_finite()) {
                    return Err(Error::Config("numeric.theta_max must be >= 0".into()));
                }
                if self.gamma == 0.0 {
                    return Err(Error::Config("fig1 sweeps θ = γt and needs physics.gamma != 0".into()));
                }
            }
            Experiment::Fig3 => {
                self.bath()?;
                positive("numeric.time_step", self.time_step)?;
                positive("numeric.max_step", self.max_step)?;
                positive("physics.initial_variance", self.initial_variance)?;
                if !(self.time_max >= 0.0 && self.time_max.is_finite()) {
                    return Err(Error::Config("numeric.time_max must be >= 0".into()));
                }
                if self.time_unit == TimeUnit::Decay && self.decay_rate == 0.0 {
                    return Err(Error::Config("time unit 'decay' needs physics.decay_rate > 0".into()));
                }
                if self.initial_means.iter().any(|x| !x.is_finite()) {
                    return Err(Error::Config("physics.initial_means must be finite".into()));
                }
            }
            Experiment::Eigen => {}
            Experiment::Fidelity => {
                self.state.build().map_err(to_config)?;
                self.reference.build().map_err(to_config)?;
            }
            Experiment::Coherence => {
                self.state.build().map_err(to_config)?;
            }
            Experiment::Negativity => {
                self.query_mode()?;
                if !self.theta.is_finite() {
                    return Err(Error::Config("query.theta must be finite".into()));
                }
            }
        }
        Ok(())
    }
}

fn to_config(e: Error) -> Error {
    match e {
        Error::InvalidInput(msg) => Error::Config(msg),
        other => other,
    }
}

/// A real number, `pi`, or `pi/x` / `x*pi`.
fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Config(format!("'{s}' is not a number"));
    let v = if let Some(den) = s.strip_prefix("pi/") {
        PI / den.trim().parse::<f64>().map_err(|_| bad())?
    } else if let Some(fac) = s.strip_suffix("*pi") {
        fac.trim().parse::<f64>().map_err(|_| bad())? * PI
    } else if s == "pi" {
        PI
    } else {
        s.parse::<f64>().map_err(|_| bad())?
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

fn parse_int<T: FromStr>(s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Config(format!("'{s}' is not a nonnegative integer")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dump_round_trips() {
        let mut cfg = ExperimentConfig::default();
        cfg.set("physics.gamma", "0.37").unwrap();
        cfg.set("query.state", "displaced_thermal(1,-2.5,3)").unwrap();
        cfg.set("output.path", "out/x.csv").unwrap();
        let back = ExperimentConfig::parse(&cfg.dump()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(ExperimentConfig::parse(&ExperimentConfig::default().dump()).unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn parse_rules() {
        let cfg = ExperimentConfig::parse("# sweep\nexperiment = fig3\nnumeric.theta_step = pi/100  # finer\n\n").unwrap();
        assert_eq!(cfg.experiment, Experiment::Fig3);
        assert_eq!(cfg.theta_step, PI / 100.0);
        assert!(matches!(ExperimentConfig::parse("physics.spin = 1"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("physics.gamma"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("physics.k = -1"), Err(Error::Config(_))));
        assert!(matches!(ExperimentConfig::parse("physics.initial_means = 1,2"), Err(Error::Config(_))));
        assert!(ExperimentConfig::parse("physics.mass = nan").is_err());
    }

    #[test]
    fn state_specs() {
        for s in ["vacuum", "thermal(4)", "coherent(2,0)", "displaced_thermal(1,1,4)"] {
            assert_eq!(s.parse::<StateSpec>().unwrap().to_string(), s);
        }
        assert!("squeezed(1)".parse::<StateSpec>().is_err());
        assert!("thermal(1,2)".parse::<StateSpec>().is_err());
    }

    #[test]
    fn validation() {
        let mut cfg = ExperimentConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.gamma = 0.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.experiment = Experiment::Fig3;
        assert!(cfg.validate().is_ok());
        cfg.decay_rate = 0.0;
        assert!(cfg.validate().is_err());
        cfg.time_unit = TimeUnit::Omega;
        assert!(cfg.validate().is_ok());
        cfg.mass = -1.0;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = ExperimentConfig { experiment: Experiment::Coherence, ..Default::default() };
        cfg.state = StateSpec::DisplacedThermal(0.0, 0.0, 0.5);
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }
}
