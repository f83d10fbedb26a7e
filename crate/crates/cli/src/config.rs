//! Configuration assembly: command-line flags layered over an optional
//! config file (key=value lines or a JSON object), over defaults.
//!
//! Flags win over file values; file values win over defaults. Parse
//! errors carry the file name, line and field.

use dicentra::bifurcation::{Family, Subtype};
use dicentra::geometry::{ProblemParams, Sign};
use dicentra::invariants::{InvariantPair, PlanarInvariants};
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Key/value store read from a config file.
#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
    source: String,
}

const KNOWN_KEYS: &[&str] = &[
    "radius",
    "theta_f",
    "gamma",
    "gamma1",
    "gamma2",
    "h",
    "g",
    "omega",
    "gsep",
    "su0",
    "sv0",
    "sign_u",
    "sign_v",
    "sign_y",
    "zeta_min",
    "zeta_max",
    "samples",
    "format",
    "output",
    "zone",
    "ratio_p",
    "ratio_q",
    "family",
    "subtype",
    "bracket_lo",
    "bracket_hi",
    "tol",
    "h_min",
    "h_max",
    "g_min",
    "g_max",
    "nx",
    "ny",
];

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let name = path.display().to_string();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("{name}: cannot read config: {e}")))?;
        let mut values = BTreeMap::new();
        if text.trim_start().starts_with('{') {
            // JSON object of scalars.
            let map: serde_json::Map<String, serde_json::Value> = serde_json::from_str(&text)
                .map_err(|e| ConfigError(format!("{name}: invalid JSON: {e}")))?;
            for (key, value) in map {
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    return err(format!("{name}: unknown key '{key}'"));
                }
                let rendered = match value {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Number(n) => n.to_string(),
                    serde_json::Value::Bool(b) => b.to_string(),
                    other => {
                        return err(format!("{name}: key '{key}' has unsupported value {other}"))
                    }
                };
                values.insert(key, rendered);
            }
        } else {
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return err(format!(
                        "{name}:{}: expected key=value, got '{line}'",
                        lineno + 1
                    ));
                };
                let key = key.trim().to_string();
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    return err(format!("{name}:{}: unknown key '{key}'", lineno + 1));
                }
                values.insert(key, value.trim().to_string());
            }
        }
        Ok(Self {
            values,
            source: name,
        })
    }

    fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<f64>().map(Some).map_err(|_| {
                ConfigError(format!(
                    "{}: invalid number for '{key}': '{v}'",
                    self.source
                ))
            }),
        }
    }

    fn get_usize(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<usize>().map(Some).map_err(|_| {
                ConfigError(format!(
                    "{}: invalid integer for '{key}': '{v}'",
                    self.source
                ))
            }),
        }
    }

    fn get_u32(&self, key: &str) -> Result<Option<u32>, ConfigError> {
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse::<u32>().map(Some).map_err(|_| {
                ConfigError(format!(
                    "{}: invalid integer for '{key}': '{v}'",
                    self.source
                ))
            }),
        }
    }

    fn get_str(&self, key: &str) -> Option<String> {
        self.values.get(key).cloned()
    }
}

pub fn parse_sign(text: &str) -> Result<Sign, ConfigError> {
    match text.trim() {
        "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
        "-" | "-1" | "minus" => Ok(Sign::Minus),
        other => err(format!("invalid sign '{other}' (use +1 or -1)")),
    }
}

pub fn parse_family(text: &str) -> Result<Family, ConfigError> {
    Family::parse(text).ok_or_else(|| {
        ConfigError(format!(
            "invalid family '{text}' (use t_p, t_l, t_s, t_s', t_ds or t_mp)"
        ))
    })
}

pub fn parse_subtype(text: &str) -> Result<Subtype, ConfigError> {
    match text.trim() {
        "none" | "-" => Ok(Subtype::None),
        "1" | "type1" => Ok(Subtype::Type1),
        "2" | "type2" => Ok(Subtype::Type2),
        "zone1" => Ok(Subtype::Zone1),
        "zone2" => Ok(Subtype::Zone2),
        other => err(format!(
            "invalid subtype '{other}' (use 1, 2, zone1, zone2 or none)"
        )),
    }
}

/// Layered lookup: flag value, else file value, else default.
pub struct Layered<'a> {
    pub file: &'a FileConfig,
}

impl Layered<'_> {
    pub fn f64(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(flag.or(self.file.get_f64(key)?).unwrap_or(default))
    }

    pub fn f64_opt(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, ConfigError> {
        Ok(flag.or(self.file.get_f64(key)?))
    }

    pub fn usize(
        &self,
        flag: Option<usize>,
        key: &str,
        default: usize,
    ) -> Result<usize, ConfigError> {
        Ok(flag.or(self.file.get_usize(key)?).unwrap_or(default))
    }

    pub fn u32_opt(&self, flag: Option<u32>, key: &str) -> Result<Option<u32>, ConfigError> {
        Ok(flag.or(self.file.get_u32(key)?))
    }

    pub fn string(&self, flag: Option<String>, key: &str, default: &str) -> String {
        flag.or_else(|| self.file.get_str(key))
            .unwrap_or_else(|| default.to_string())
    }

    pub fn string_opt(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.file.get_str(key))
    }
}

/// Problem parameters from the layered sources. `gamma1`/`gamma2` take
/// precedence over the single relative strength `gamma`.
pub fn resolve_params(
    layer: &Layered,
    radius: Option<f64>,
    theta_f: Option<f64>,
    gamma: Option<f64>,
    gamma1: Option<f64>,
    gamma2: Option<f64>,
) -> Result<ProblemParams, ConfigError> {
    let radius = layer.f64(radius, "radius", 1.0)?;
    let theta_f = layer.f64(theta_f, "theta_f", std::f64::consts::FRAC_PI_6)?;
    let gamma1 = layer.f64_opt(gamma1, "gamma1")?;
    let gamma2 = layer.f64_opt(gamma2, "gamma2")?;
    let result = match (gamma1, gamma2) {
        (Some(g1), Some(g2)) => ProblemParams::new(radius, theta_f, g1, g2),
        (None, None) => {
            let gamma = layer.f64(gamma, "gamma", 1.0 / 3.0)?;
            ProblemParams::from_gamma(radius, theta_f, gamma)
        }
        _ => return err("gamma1 and gamma2 must be given together"),
    };
    result.map_err(|e| ConfigError(e.to_string()))
}

/// Invariants from exactly one chart: the scaled chart (h, g) used by
/// the diagram figures, or the raw spherical pair (omega, gsep).
pub fn resolve_invariants(
    layer: &Layered,
    params: &ProblemParams,
    h: Option<f64>,
    g: Option<f64>,
    omega: Option<f64>,
    gsep: Option<f64>,
) -> Result<InvariantPair, ConfigError> {
    let h = layer.f64_opt(h, "h")?;
    let g = layer.f64_opt(g, "g")?;
    let omega = layer.f64_opt(omega, "omega")?;
    let gsep = layer.f64_opt(gsep, "gsep")?;
    match (h, g, omega, gsep) {
        (Some(h), Some(g), None, None) => Ok(InvariantPair::from_planar(
            PlanarInvariants { h, g },
            params,
        )),
        (None, None, Some(omega), Some(gsep)) => Ok(InvariantPair::from_omega_g(omega, gsep)),
        (None, None, None, None) => {
            err("invariants missing: give --h/--g (scaled chart) or --omega/--gsep (raw)")
        }
        _ => err("give exactly one invariant chart: --h with --g, or --omega with --gsep"),
    }
}

/// Default tolerance, overridable by the DICENTRA_TOL environment
/// variable and the --tol flag (flag wins).
pub fn resolve_tol(layer: &Layered, flag: Option<f64>, default: f64) -> Result<f64, ConfigError> {
    if let Some(t) = layer.f64_opt(flag, "tol")? {
        return Ok(t);
    }
    match std::env::var("DICENTRA_TOL") {
        Ok(text) => text
            .parse::<f64>()
            .map_err(|_| ConfigError(format!("DICENTRA_TOL is not a number: '{text}'"))),
        Err(_) => Ok(default),
    }
}
