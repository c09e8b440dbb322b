//! Flat `section.key = value` run configuration.
//!
//! Lines starting with `#` and blank lines are ignored. Every key is listed
//! in [`KEYS`]; unknown or repeated keys are rejected. Environment variables
//! named `QGLIMIT_<SECTION>_<KEY>` (upper case, `.` replaced by `_`) override
//! the file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::harness::{ProfileKind, ProfileSpec, SweepConfig};
use crate::limit::LimitParams;
use crate::primitive::PrimParams;
use crate::spectral::{GridSpec, Window};

pub const ENV_PREFIX: &str = "QGLIMIT_";

/// A configuration key with its default, `None` for required keys.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub default: Option<&'static str>,
    pub doc: &'static str,
}

const fn req(key: &'static str, doc: &'static str) -> KeySpec {
    KeySpec {
        key,
        default: None,
        doc,
    }
}

const fn opt(key: &'static str, default: &'static str, doc: &'static str) -> KeySpec {
    KeySpec {
        key,
        default: Some(default),
        doc,
    }
}

/// Every accepted key. An empty default means "derived from other keys".
pub const KEYS: &[KeySpec] = &[
    req("grid.L", "horizontal period"),
    req("grid.nh", "horizontal samples per direction (even)"),
    req("grid.nv", "vertical samples on [0, 1] including both walls"),
    req("prim.epsilon", "Mach = Rossby number of primitive-run and rage"),
    req("prim.gamma", "adiabatic exponent, > 3/2"),
    req("prim.mu", "viscosity"),
    req("prim.rho_bar", "background density"),
    opt("prim.pressure_coeff", "1", "kappa in p = kappa rho^gamma"),
    req("prim.dt", "primitive time step"),
    req("prim.T", "primitive horizon"),
    opt(
        "prim.resolution",
        "",
        "horizontal samples of primitive runs (default grid.nh)",
    ),
    opt(
        "prim.output_every",
        "10",
        "steps between primitive samples and snapshots",
    ),
    req("limit.dt", "limit time step"),
    req("limit.T", "limit horizon"),
    req("limit.output_every", "steps between limit samples and snapshots"),
    opt("limit.mu", "", "limit viscosity (default prim.mu)"),
    opt(
        "limit.rho_bar",
        "",
        "limit background density (default prim.rho_bar)",
    ),
    opt(
        "limit.p_prime",
        "",
        "p'(rho_bar) of the limit (default from the pressure law)",
    ),
    req("sweep.epsilons", "comma-separated, strictly decreasing"),
    req("sweep.dt", "time step shared by all sweep runs"),
    req("sweep.T", "sweep horizon"),
    opt("sweep.sample_every", "1", "steps between measurements"),
    opt(
        "sweep.profile",
        "localized",
        "localized, plane, balanced, random or zero",
    ),
    opt("sweep.mode", "8", "carrier mode number (largest mode for random)"),
    opt("sweep.amplitude", "1", "profile amplitude"),
    opt("sweep.width", "0.0625", "envelope width as a fraction of grid.L"),
    opt("sweep.seed", "0", "seed of random profiles"),
    opt(
        "sweep.rage_cutoff",
        "",
        "frequency bound of the RAGE projection (default none)",
    ),
    opt("output.dir", "out", "artifact directory"),
];

fn spec_of(key: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.key == key)
}

/// Environment variable overriding `key`.
pub fn env_name(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.to_uppercase().replace('.', "_"))
}

/// Key-value pairs as written, before typing.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub entries: BTreeMap<String, String>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if spec_of(k).is_none() {
                return Err(Error::Config(format!("line {}: unknown key '{k}'", n + 1)));
            }
            if entries.insert(k.to_string(), v.to_string()).is_some() {
                return Err(Error::Config(format!("line {}: key '{k}' given twice", n + 1)));
            }
        }
        Ok(Self { entries })
    }

    /// Apply `QGLIMIT_*` overrides from `vars`.
    pub fn with_env(mut self, vars: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let names: BTreeMap<String, &str> = KEYS.iter().map(|k| (env_name(k.key), k.key)).collect();
        for (name, value) in vars {
            if !name.starts_with(ENV_PREFIX) {
                continue;
            }
            let key = names
                .get(&name)
                .ok_or_else(|| Error::Config(format!("unknown override variable {name}")))?;
            self.entries.insert(key.to_string(), value.trim().to_string());
        }
        Ok(self)
    }

    pub fn missing_required(&self) -> Vec<&'static str> {
        KEYS.iter()
            .filter(|k| k.default.is_none() && !self.entries.contains_key(k.key))
            .map(|k| k.key)
            .collect()
    }

    /// Sorted `key = value` lines of every key, defaults filled in. Equal
    /// effective configurations render identically.
    pub fn canonical(&self) -> String {
        let mut out = String::new();
        for k in KEYS {
            let v = self
                .entries
                .get(k.key)
                .map(String::as_str)
                .or(k.default)
                .unwrap_or("");
            out.push_str(&format!("{} = {v}\n", k.key));
        }
        out
    }

    fn text(&self, key: &str) -> Option<&str> {
        let v = self
            .entries
            .get(key)
            .map(String::as_str)
            .or(spec_of(key).and_then(|k| k.default));
        v.filter(|s| !s.is_empty())
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.text(key)
            .map(|s| {
                s.parse::<T>()
                    .map_err(|_| Error::Config(format!("{key}: cannot parse '{s}'")))
            })
            .transpose()
    }

    fn need<T: std::str::FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::Config(format!("missing required key {key}")))
    }
}

/// Settings of `primitive-run` and `rage`.
#[derive(Debug, Clone)]
pub struct PrimSection {
    pub params: PrimParams,
    pub dt: f64,
    pub t_final: f64,
    pub grid: GridSpec,
    pub output_every: usize,
}

/// Settings of `limit-run`.
#[derive(Debug, Clone)]
pub struct LimitSection {
    pub params: LimitParams,
    pub dt: f64,
    pub t_final: f64,
    pub output_every: usize,
}

/// Settings of `sweep`. The primitive parameters other than `epsilon` come
/// from the `prim` section.
#[derive(Debug, Clone)]
pub struct SweepSection {
    pub epsilons: Vec<f64>,
    pub dt: f64,
    pub t_final: f64,
    pub sample_every: usize,
    pub profile: ProfileSpec,
    pub rage_cutoff: Option<f64>,
}

/// Typed, validated configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub prim: PrimSection,
    pub limit: LimitSection,
    pub sweep: SweepSection,
    pub output_dir: PathBuf,
    /// Effective key-value text, hashed into manifests.
    pub canonical: String,
}

/// Number of steps of size `dt` in `t`, rejecting horizons that are not a
/// whole number of steps.
pub fn whole_steps(name: &str, dt: f64, t: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite() && t > 0.0 && t.is_finite()) {
        return Err(Error::Config(format!(
            "{name}: dt and T must be positive, got {dt}, {t}"
        )));
    }
    let n = (t / dt).round();
    if n < 1.0 || (n * dt - t).abs() > 1e-9 * t {
        return Err(Error::Config(format!(
            "{name}: T = {t} is not a whole number of steps of {dt}"
        )));
    }
    Ok(n as usize)
}

fn positive_count(name: &str, n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::Config(format!("{name} must be at least 1")));
    }
    Ok(n)
}

impl RunConfig {
    /// Type and validate; reports every missing required key at once.
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let missing = raw.missing_required();
        if !missing.is_empty() {
            return Err(Error::Config(format!(
                "missing required keys: {}",
                missing.join(", ")
            )));
        }
        let grid = GridSpec::new(raw.need("grid.L")?, raw.need("grid.nh")?, raw.need("grid.nv")?)?;
        let params = PrimParams {
            epsilon: raw.need("prim.epsilon")?,
            mu: raw.need("prim.mu")?,
            gamma: raw.need("prim.gamma")?,
            rho_bar: raw.need("prim.rho_bar")?,
            pressure_coeff: raw.need("prim.pressure_coeff")?,
        };
        params.validate()?;
        let resolution = raw.get("prim.resolution")?.unwrap_or(grid.nh);
        let prim = PrimSection {
            params,
            dt: raw.need("prim.dt")?,
            t_final: raw.need("prim.T")?,
            grid: GridSpec::new(grid.l, resolution, grid.nv)?,
            output_every: positive_count("prim.output_every", raw.need("prim.output_every")?)?,
        };
        whole_steps("prim", prim.dt, prim.t_final)?;
        let limit = LimitSection {
            params: LimitParams::new(
                raw.get("limit.mu")?.unwrap_or(params.mu),
                raw.get("limit.rho_bar")?.unwrap_or(params.rho_bar),
                raw.get("limit.p_prime")?.unwrap_or(params.p_prime()),
            )?,
            dt: raw.need("limit.dt")?,
            t_final: raw.need("limit.T")?,
            output_every: positive_count("limit.output_every", raw.need("limit.output_every")?)?,
        };
        whole_steps("limit", limit.dt, limit.t_final)?;
        let epsilons = raw
            .need::<String>("sweep.epsilons")?
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("sweep.epsilons: cannot parse '{}'", s.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        let profile = ProfileSpec {
            kind: ProfileKind::parse(&raw.need::<String>("sweep.profile")?)?,
            mode: raw.need("sweep.mode")?,
            amplitude: raw.need("sweep.amplitude")?,
            width: raw.need("sweep.width")?,
            seed: raw.need("sweep.seed")?,
        };
        let sweep = SweepSection {
            epsilons,
            dt: raw.need("sweep.dt")?,
            t_final: raw.need("sweep.T")?,
            sample_every: positive_count("sweep.sample_every", raw.need("sweep.sample_every")?)?,
            profile,
            rage_cutoff: raw.get("sweep.rage_cutoff")?,
        };
        whole_steps("sweep", sweep.dt, sweep.t_final)?;
        Ok(Self {
            grid,
            prim,
            limit,
            sweep,
            output_dir: PathBuf::from(raw.need::<String>("output.dir")?),
            canonical: raw.canonical(),
        })
    }

    /// Read `path`, apply the process environment, type and validate.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let raw = RawConfig::parse(&text)?.with_env(std::env::vars())?;
        Self::from_raw(&raw)
    }

    /// Override the profile seed (the `--seed` flag).
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.sweep.profile.seed = seed;
        self.canonical.push_str(&format!("# seed override = {seed}\n"));
        self
    }

    /// Sweep configuration with profiles built and all sweep preconditions
    /// checked.
    pub fn sweep_config(&self, jobs: usize) -> Result<SweepConfig> {
        let lp = LimitParams::new(
            self.prim.params.mu,
            self.prim.params.rho_bar,
            self.prim.params.p_prime(),
        )?;
        let cfg = SweepConfig {
            grid: self.grid,
            epsilons: self.sweep.epsilons.clone(),
            prim: self.prim.params,
            dt: self.sweep.dt,
            t_final: self.sweep.t_final,
            sample_every: self.sweep.sample_every,
            window: Window::central_quarter(&self.grid.horizontal()),
            rage_cutoff: self.sweep.rage_cutoff,
            profiles: self.sweep.profile.build(self.grid, &lp)?,
            jobs,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
grid.L = 50.26548245743669
grid.nh = 16
grid.nv = 4
prim.epsilon = 0.1
prim.gamma = 2
prim.mu = 0.05
prim.rho_bar = 1
prim.pressure_coeff = 0.5
prim.dt = 0.01
prim.T = 0.1
limit.dt = 0.01
limit.T = 0.1
limit.output_every = 5
sweep.epsilons = 0.4, 0.2
sweep.dt = 0.01
sweep.T = 0.1
";

    #[test]
    fn empty_config_lists_every_required_key() {
        let raw = RawConfig::parse("# nothing\n\n").unwrap();
        let err = RunConfig::from_raw(&raw).unwrap_err().to_string();
        for k in KEYS.iter().filter(|k| k.default.is_none()) {
            assert!(err.contains(k.key), "{} not listed in {err}", k.key);
        }
    }

    #[test]
    fn unknown_and_repeated_keys_are_rejected() {
        assert!(RawConfig::parse("grid.nz = 3").is_err());
        assert!(RawConfig::parse("grid.nh = 8\ngrid.nh = 8").is_err());
        assert!(RawConfig::parse("grid.nh 8").is_err());
    }

    #[test]
    fn minimal_config_types_with_defaults() {
        let cfg = RunConfig::from_raw(&RawConfig::parse(MINIMAL).unwrap()).unwrap();
        assert_eq!(cfg.sweep.epsilons, vec![0.4, 0.2]);
        assert_eq!(cfg.sweep.profile, ProfileSpec::default());
        assert_eq!(cfg.prim.grid, cfg.grid);
        assert_eq!(cfg.limit.params.p_prime, 1.0);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
        cfg.sweep_config(1).unwrap();
    }

    #[test]
    fn environment_overrides_the_file() {
        let raw = RawConfig::parse(MINIMAL)
            .unwrap()
            .with_env([
                ("QGLIMIT_SWEEP_T".to_string(), "0.2".to_string()),
                ("PATH".to_string(), "/bin".to_string()),
            ])
            .unwrap();
        assert_eq!(RunConfig::from_raw(&raw).unwrap().sweep.t_final, 0.2);
        let bad = RawConfig::parse(MINIMAL)
            .unwrap()
            .with_env([("QGLIMIT_SWEEP_Q".to_string(), "1".to_string())]);
        assert!(bad.is_err());
    }

    #[test]
    fn physical_preconditions_are_checked_before_runs() {
        let text = MINIMAL.replace("prim.gamma = 2", "prim.gamma = 1.2");
        assert!(RunConfig::from_raw(&RawConfig::parse(&text).unwrap()).is_err());
        let text = MINIMAL.replace("sweep.T = 0.1", "sweep.T = 0.105");
        assert!(RunConfig::from_raw(&RawConfig::parse(&text).unwrap()).is_err());
        let text = MINIMAL.replace("prim.pressure_coeff = 0.5", "prim.pressure_coeff = 1");
        let cfg = RunConfig::from_raw(&RawConfig::parse(&text).unwrap()).unwrap();
        assert!(cfg.sweep_config(1).is_err());
    }

    #[test]
    fn canonical_text_ignores_layout() {
        let a = RawConfig::parse(MINIMAL).unwrap();
        let shuffled: String = MINIMAL.lines().rev().map(|l| format!("  {l}  \n# c\n")).collect();
        let b = RawConfig::parse(&shuffled).unwrap();
        assert_eq!(a.canonical(), b.canonical());
    }
}
