//! Flat `key = value unit` run configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use shglink_core::link::{LinkConfig, ShgRadius};
use shglink_core::power::DiffractionModel;
use thiserror::Error;

use crate::units::{format_quantity, parse_list, parse_quantity, Dimension, UnitError};

/// The shipped default parameter set.
pub const DEFAULTS: &str = include_str!("../defaults.conf");

/// Environment variable naming a directory that holds `shglink.conf`.
pub const CONFIG_DIR_ENV: &str = "SHGLINK_CONFIG_DIR";
pub const CONFIG_FILE_NAME: &str = "shglink.conf";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given more than once")]
    Duplicate { line: usize, key: String },
    #[error("{origin}: key `{key}`: {source}")]
    Value {
        origin: String,
        key: String,
        #[source]
        source: UnitError,
    },
    #[error("invalid configuration: {0}")]
    Invalid(#[from] shglink_core::Error),
    #[error("invalid configuration: {0}")]
    Constraint(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Physics parameters. Its diffraction model mirrors `diffraction` and
    /// `gamma_diff` below.
    pub link: LinkConfig,
    pub diffraction: DiffractionKind,
    /// Fixed factor used when `diffraction` is `Constant`.
    pub gamma_diff: f64,
    /// Pump power for single-point runs and `d` sweeps, W.
    pub p_in: f64,
    /// Transmission distance for single-point runs, profiles and `P_in` sweeps, m.
    pub d: f64,
    pub profile_samples: usize,
    pub fig_d_start: f64,
    pub fig_d_stop: f64,
    pub fig_d_count: usize,
    pub fig7_distances: Vec<f64>,
    pub fig7_p_in_stop: f64,
    pub fig7_p_in_count: usize,
    pub fig8_powers: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffractionKind {
    ClipFundamental,
    ClipMultimode,
    Constant,
}

impl DiffractionKind {
    fn name(self) -> &'static str {
        match self {
            DiffractionKind::ClipFundamental => "clip_fundamental",
            DiffractionKind::ClipMultimode => "clip_multimode",
            DiffractionKind::Constant => "constant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Scalar(Dimension),
    List(Dimension),
    Count,
    Diffraction,
    ShgRadius,
}

/// Every accepted key, in serialization order.
const KEYS: &[(&str, Kind)] = &[
    ("f", Kind::Scalar(Dimension::Length)),
    ("l", Kind::Scalar(Dimension::Length)),
    ("a_lens", Kind::Scalar(Dimension::Length)),
    ("lambda", Kind::Scalar(Dimension::Length)),
    ("sigma_s", Kind::Scalar(Dimension::Area)),
    ("tau_f", Kind::Scalar(Dimension::Time)),
    ("a_g", Kind::Scalar(Dimension::Length)),
    ("l_g", Kind::Scalar(Dimension::Length)),
    ("eta_c", Kind::Scalar(Dimension::Fraction)),
    ("gamma_rr1", Kind::Scalar(Dimension::Fraction)),
    ("gamma_g", Kind::Scalar(Dimension::Fraction)),
    ("gamma_rr2", Kind::Scalar(Dimension::Fraction)),
    ("alpha_air", Kind::Scalar(Dimension::PerLength)),
    ("diffraction", Kind::Diffraction),
    ("gamma_diff", Kind::Scalar(Dimension::Fraction)),
    ("d_eff", Kind::Scalar(Dimension::MeterPerVolt)),
    ("n0", Kind::Scalar(Dimension::Dimensionless)),
    ("l_s", Kind::Scalar(Dimension::Length)),
    ("shg_radius", Kind::ShgRadius),
    ("small_signal_bound", Kind::Scalar(Dimension::Dimensionless)),
    ("gamma_dev", Kind::Scalar(Dimension::Fraction)),
    ("gamma_g_eom", Kind::Scalar(Dimension::Fraction)),
    ("gamma_det", Kind::Scalar(Dimension::Fraction)),
    ("responsivity", Kind::Scalar(Dimension::AmperePerWatt)),
    ("i_bk", Kind::Scalar(Dimension::Current)),
    ("bandwidth", Kind::Scalar(Dimension::Frequency)),
    ("temperature", Kind::Scalar(Dimension::Temperature)),
    ("r_load", Kind::Scalar(Dimension::Resistance)),
    ("modulation_index", Kind::Scalar(Dimension::Fraction)),
    ("p_in", Kind::Scalar(Dimension::Power)),
    ("d", Kind::Scalar(Dimension::Length)),
    ("profile_samples", Kind::Count),
    ("fig_d_start", Kind::Scalar(Dimension::Length)),
    ("fig_d_stop", Kind::Scalar(Dimension::Length)),
    ("fig_d_count", Kind::Count),
    ("fig7_distances", Kind::List(Dimension::Length)),
    ("fig7_p_in_stop", Kind::Scalar(Dimension::Power)),
    ("fig7_p_in_count", Kind::Count),
    ("fig8_powers", Kind::List(Dimension::Power)),
];

fn kind_of(key: &str) -> Option<Kind> {
    KEYS.iter().find(|(k, _)| *k == key).map(|&(_, kind)| kind)
}

impl RunConfig {
    /// Configuration built from the embedded defaults.
    pub fn defaults() -> Self {
        let mut cfg = RunConfig::blank();
        cfg.apply_text(DEFAULTS, "defaults").expect("embedded defaults parse");
        cfg.validate().expect("embedded defaults are valid");
        cfg
    }

    fn blank() -> Self {
        RunConfig {
            link: LinkConfig::default(),
            diffraction: DiffractionKind::ClipFundamental,
            gamma_diff: 1.0,
            p_in: 0.0,
            d: 0.0,
            profile_samples: 0,
            fig_d_start: 0.0,
            fig_d_stop: 0.0,
            fig_d_count: 0,
            fig7_distances: Vec::new(),
            fig7_p_in_stop: 0.0,
            fig7_p_in_count: 0,
            fig8_powers: Vec::new(),
        }
    }

    /// Defaults overlaid with the keys present in `text`, then validated.
    pub fn from_text(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::defaults();
        cfg.apply_text(text, origin)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies `key = value` lines without validating the result.
    pub fn apply_text(&mut self, text: &str, origin: &str) -> Result<(), ConfigError> {
        let mut seen: Vec<&str> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            })?;
            let key = key.trim();
            if kind_of(key).is_none() {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
            if seen.contains(&key) {
                return Err(ConfigError::Duplicate {
                    line,
                    key: key.to_string(),
                });
            }
            seen.push(key);
            self.set(key, value.trim(), &format!("{origin}:{line}"))?;
        }
        Ok(())
    }

    /// Sets one key from its textual value. Does not validate.
    pub fn set(&mut self, key: &str, value: &str, origin: &str) -> Result<(), ConfigError> {
        let kind = kind_of(key).ok_or_else(|| ConfigError::UnknownKey {
            line: 0,
            key: key.to_string(),
        })?;
        let wrap = |source: UnitError| ConfigError::Value {
            origin: origin.to_string(),
            key: key.to_string(),
            source,
        };
        match kind {
            Kind::Scalar(dim) => {
                let v = parse_quantity(value, dim, false).map_err(wrap)?;
                *self.scalar_mut(key) = v;
            }
            Kind::List(dim) => {
                let v = parse_list(value, dim).map_err(wrap)?;
                match key {
                    "fig7_distances" => self.fig7_distances = v,
                    _ => self.fig8_powers = v,
                }
            }
            Kind::Count => {
                let n: usize = value
                    .parse()
                    .map_err(|_| wrap(UnitError(format!("expected a non-negative integer, found `{value}`"))))?;
                match key {
                    "profile_samples" => self.profile_samples = n,
                    "fig_d_count" => self.fig_d_count = n,
                    _ => self.fig7_p_in_count = n,
                }
            }
            Kind::Diffraction => {
                self.diffraction = match value {
                    "clip_fundamental" => DiffractionKind::ClipFundamental,
                    "clip_multimode" => DiffractionKind::ClipMultimode,
                    "constant" => DiffractionKind::Constant,
                    other => {
                        return Err(wrap(UnitError(format!(
                            "`{other}` is not one of clip_fundamental, clip_multimode, constant"
                        ))))
                    }
                };
            }
            Kind::ShgRadius => {
                self.link.shg_radius = match value {
                    "multimode" => ShgRadius::Multimode,
                    "fundamental" => ShgRadius::Fundamental,
                    other => {
                        return Err(wrap(UnitError(format!(
                            "`{other}` is not one of multimode, fundamental"
                        ))))
                    }
                };
            }
        }
        self.sync_diffraction();
        Ok(())
    }

    fn sync_diffraction(&mut self) {
        self.link.losses.diffraction = match self.diffraction {
            DiffractionKind::ClipFundamental => DiffractionModel::ClipFundamental,
            DiffractionKind::ClipMultimode => DiffractionModel::ClipMultimode,
            DiffractionKind::Constant => DiffractionModel::Constant(self.gamma_diff),
        };
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: 0,
            message: format!("override `{assignment}` is not of the form key=value"),
        })?;
        self.set(key.trim(), value.trim(), "--set")
    }
}


macro_rules! scalar_keys {
    ($($key:literal => $($field:ident).+,)*) => {
        impl RunConfig {
            fn scalar_mut(&mut self, key: &str) -> &mut f64 {
                match key {
                    $($key => &mut self.$($field).+,)*
                    _ => unreachable!("`{key}` is not a scalar key"),
                }
            }

            fn scalar(&self, key: &str) -> f64 {
                match key {
                    $($key => self.$($field).+,)*
                    _ => unreachable!("`{key}` is not a scalar key"),
                }
            }
        }
    };
}

scalar_keys! {
    "f" => link.f,
    "l" => link.l,
    "a_lens" => link.a_lens,
    "lambda" => link.wavelength,
    "sigma_s" => link.gain.sigma_s,
    "tau_f" => link.gain.tau_f,
    "a_g" => link.gain.a_g,
    "l_g" => link.gain.l_g,
    "eta_c" => link.gain.eta_c,
    "gamma_rr1" => link.losses.gamma_rr1,
    "gamma_g" => link.losses.gamma_g,
    "gamma_rr2" => link.losses.gamma_rr2,
    "alpha_air" => link.losses.alpha_air,
    "gamma_diff" => gamma_diff,
    "d_eff" => link.crystal.d_eff,
    "n0" => link.crystal.n0,
    "l_s" => link.crystal.l_s,
    "small_signal_bound" => link.small_signal_bound,
    "gamma_dev" => link.chain.gamma_dev,
    "gamma_g_eom" => link.chain.gamma_g_eom,
    "gamma_det" => link.chain.gamma_det,
    "responsivity" => link.chain.responsivity,
    "i_bk" => link.chain.i_bk,
    "bandwidth" => link.chain.bandwidth,
    "temperature" => link.chain.temperature,
    "r_load" => link.chain.r_load,
    "modulation_index" => link.chain.modulation_index,
    "p_in" => p_in,
    "d" => d,
    "fig_d_start" => fig_d_start,
    "fig_d_stop" => fig_d_stop,
    "fig7_p_in_stop" => fig7_p_in_stop,
}

impl RunConfig {
    /// Checks every physics precondition and grid invariant.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.link.validate()?;
        if !(self.gamma_diff > 0.0 && self.gamma_diff <= 1.0) {
            return Err(ConfigError::Constraint("gamma_diff must lie in (0, 1]".into()));
        }
        self.link.geometry(self.d)?;
        let constraint = |ok: bool, msg: &str| {
            if ok {
                Ok(())
            } else {
                Err(ConfigError::Constraint(msg.to_string()))
            }
        };
        constraint(self.p_in >= 0.0, "p_in must be non-negative")?;
        constraint(self.profile_samples >= 2, "profile_samples must be at least 2")?;
        constraint(
            self.fig_d_start >= 0.0 && self.fig_d_start < self.fig_d_stop,
            "fig_d_start must be non-negative and below fig_d_stop",
        )?;
        constraint(self.fig_d_count >= 2, "fig_d_count must be at least 2")?;
        constraint(self.fig7_p_in_stop > 0.0, "fig7_p_in_stop must be positive")?;
        constraint(self.fig7_p_in_count >= 2, "fig7_p_in_count must be at least 2")?;
        constraint(
            !self.fig7_distances.is_empty() && self.fig7_distances.iter().all(|&d| d >= 0.0),
            "fig7_distances must be a non-empty list of non-negative lengths",
        )?;
        constraint(
            !self.fig8_powers.is_empty() && self.fig8_powers.iter().all(|&p| p >= 0.0),
            "fig8_powers must be a non-empty list of non-negative powers",
        )?;
        Ok(())
    }

    /// Renders every key in SI units. Loading the output yields an equal config.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for &(key, kind) in KEYS {
            let value = match kind {
                Kind::Scalar(dim) => format_quantity(self.scalar(key), dim),
                Kind::List(dim) => {
                    let list = if key == "fig7_distances" { &self.fig7_distances } else { &self.fig8_powers };
                    let items: Vec<String> = list.iter().map(|v| format_quantity(*v, dim)).collect();
                    items.join(", ")
                }
                Kind::Count => match key {
                    "profile_samples" => self.profile_samples.to_string(),
                    "fig_d_count" => self.fig_d_count.to_string(),
                    _ => self.fig7_p_in_count.to_string(),
                },
                Kind::Diffraction => self.diffraction.name().to_string(),
                Kind::ShgRadius => match self.link.shg_radius {
                    ShgRadius::Multimode => "multimode".to_string(),
                    ShgRadius::Fundamental => "fundamental".to_string(),
                },
            };
            let _ = writeln!(out, "{key} = {value}");
        }
        out
    }
}

/// Loads a configuration file over the defaults. With no path, the file in
/// `$SHGLINK_CONFIG_DIR` is used when present, otherwise the defaults alone.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig, ConfigError> {
    let resolved = match path {
        Some(p) if !p.as_os_str().is_empty() => Some(p.to_path_buf()),
        _ => std::env::var_os(CONFIG_DIR_ENV)
            .map(|dir| PathBuf::from(dir).join(CONFIG_FILE_NAME))
            .filter(|p| p.is_file()),
    };
    match resolved {
        None => Ok(RunConfig::defaults()),
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|source| ConfigError::Io {
                path: p.clone(),
                source,
            })?;
            RunConfig::from_text(&text, &p.display().to_string())
        }
    }
}
