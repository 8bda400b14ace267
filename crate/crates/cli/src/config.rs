//! Flat `key = value` run configuration.
//!
//! One assignment per line; `#` starts a comment. Keys are dotted
//! (`pulse.omega0_mev`) and must appear in [`KEYS`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::CliError;

/// Every accepted key, with a one-line description used by `--list-keys`.
pub const KEYS: &[(&str, &str)] = &[
    ("command", "mixing | table | spectrum | gate | populations | optimize | lz"),
    ("output_path", "output file; standard output when absent"),
    ("output.stride", "write every n-th time step (gate, populations); default 10"),
    ("luttinger.gamma1", "Luttinger parameter γ1"),
    ("luttinger.gamma2", "Luttinger parameter γ2"),
    ("luttinger.gamma3", "Luttinger parameter γ3"),
    ("trap.omega_x_mev", "confinement energy ħω_x (meV)"),
    ("trap.omega_y_mev", "confinement energy ħω_y (meV)"),
    ("trap.omega_z_mev", "confinement energy ħω_z (meV)"),
    ("physics.delta_mev", "Zeeman splitting δ (meV)"),
    ("physics.eps", "hole mixing ε"),
    ("physics.eps_tilde", "mixing in the light coupling; default ε"),
    ("physics.m_hh_hh_mev", "Förster coupling M_hh,hh (meV)"),
    ("physics.m_lh_hh_mev", "Förster coupling M_lh,hh (meV)"),
    ("physics.m_lh_lh_mev", "Förster coupling M_lh,lh (meV); default M_lh,hh²/M_hh,hh"),
    ("physics.vxx_mev", "biexcitonic shift V_XX (meV)"),
    ("physics.offset_a_mev", "static trion detuning offset of dot a (meV); default 0"),
    ("physics.offset_b_mev", "static trion detuning offset of dot b (meV); default 0"),
    ("pulse.omega0_mev", "peak Rabi energy Ω0 (meV)"),
    ("pulse.tau_omega_ps", "Rabi envelope width τ_Ω (ps)"),
    ("pulse.delta0_mev", "detuning depth Δ0 (meV)"),
    ("pulse.tau_delta_ps", "detuning width τ_Δ (ps)"),
    ("pulse.t_start_ps", "window start (ps); default −4·max τ"),
    ("pulse.t_end_ps", "window end (ps); default +4·max τ"),
    ("pulse.dt_ps", "RK4 step (ps); default 0.001"),
    ("spectrum.omega_mev", "fixed Ω for the spectrum (meV)"),
    ("spectrum.ratio_min", "first Δ/Ω on the grid"),
    ("spectrum.ratio_max", "last Δ/Ω on the grid"),
    ("spectrum.points", "number of grid points, at least 1"),
    ("optimizer.w_theta", "weight of |θ−π|²; default 1"),
    ("optimizer.w_leak", "weight of the largest leakage; default 0.01"),
    ("optimizer.simplex_scale", "initial simplex step as a fraction; default 0.05"),
    ("optimizer.max_evals", "objective evaluation budget; default 200"),
    ("optimizer.tolerance", "objective value counted as converged; default 1e-4"),
    ("optimizer.free", "comma-separated searched parameters; default all four"),
    ("lz.omega_gap_mev", "gap for the Landau-Zener formula; default from the pulse path"),
    ("lz.delta_dot_mev_per_ps", "sweep rate; default peak |dΔ/dt| of the pulse"),
    ("lz.simulate", "true to compare against the simulated leakage; default false"),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Mixing,
    Table,
    Spectrum,
    Gate,
    Populations,
    Optimize,
    Lz,
}

impl Command {
    pub const NAMES: [&'static str; 7] = ["mixing", "table", "spectrum", "gate", "populations", "optimize", "lz"];

    pub fn name(self) -> &'static str {
        match self {
            Command::Mixing => "mixing",
            Command::Table => "table",
            Command::Spectrum => "spectrum",
            Command::Gate => "gate",
            Command::Populations => "populations",
            Command::Optimize => "optimize",
            Command::Lz => "lz",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "mixing" => Command::Mixing,
            "table" => Command::Table,
            "spectrum" => Command::Spectrum,
            "gate" => Command::Gate,
            "populations" => Command::Populations,
            "optimize" => Command::Optimize,
            "lz" => Command::Lz,
            _ => return Err(format!("unknown command `{s}` (expected one of {})", Command::NAMES.join(", "))),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
struct Entry {
    value: String,
    line: usize,
}

/// Parsed configuration. Typed getters record every value they resolve, so
/// the output header can echo exactly what a run used.
#[derive(Clone, Debug, Default)]
pub struct Config {
    entries: BTreeMap<String, Entry>,
    resolved: BTreeMap<&'static str, String>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, CliError> {
        let mut entries: BTreeMap<String, Entry> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(CliError::Config(format!("line {line}: expected `key = value`, found `{content}`")));
            };
            let key = key.trim();
            let value = value.trim();
            if !KEYS.iter().any(|(k, _)| *k == key) {
                return Err(CliError::Config(format!("line {line}: unknown key `{key}`")));
            }
            if value.is_empty() {
                return Err(CliError::Config(format!("line {line}: key `{key}` has no value")));
            }
            if let Some(prev) = entries.get::<str>(key) {
                return Err(CliError::Config(format!(
                    "line {line}: key `{key}` already set on line {}",
                    prev.line
                )));
            }
            entries.insert(key.to_string(), Entry { value: value.to_string(), line });
        }
        Ok(Config { entries, resolved: BTreeMap::new() })
    }

    /// Sets a key as if it appeared in the file, replacing any earlier value.
    pub fn set(&mut self, key: &'static str, value: &str) {
        self.entries.insert(key.to_string(), Entry { value: value.to_string(), line: 0 });
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    fn parse_value<T: FromStr>(&self, key: &'static str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        match self.entries.get(key) {
            None => Ok(None),
            Some(e) => e.value.parse().map(Some).map_err(|err| {
                CliError::Config(format!("key `{key}`: cannot parse `{}`: {err}", e.value))
            }),
        }
    }

    /// Value of a key the current command cannot run without.
    pub fn require<T: FromStr + fmt::Display>(&mut self, key: &'static str) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        let v: T = self
            .parse_value(key)?
            .ok_or_else(|| CliError::Config(format!("missing required key `{key}`")))?;
        self.resolved.insert(key, v.to_string());
        Ok(v)
    }

    pub fn optional<T: FromStr + fmt::Display>(&mut self, key: &'static str, default: T) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        let v = self.parse_value(key)?.unwrap_or(default);
        self.resolved.insert(key, v.to_string());
        Ok(v)
    }

    /// Records a derived value under `key` without reading the file.
    pub fn note(&mut self, key: &'static str, value: impl fmt::Display) {
        self.resolved.insert(key, value.to_string());
    }

    /// `(key, value)` pairs resolved so far, sorted by key.
    pub fn resolved(&self) -> impl Iterator<Item = (&str, &str)> {
        self.resolved.iter().map(|(k, v)| (*k, v.as_str()))
    }
}
