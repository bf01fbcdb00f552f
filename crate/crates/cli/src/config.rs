//! Flat `key = value` configuration files.
//!
//! Grid keys (`j`, `m0`, `k`, `l`, `eta`, `beta`, `sinh2beta`, `phi`, `quantity`)
//! may repeat; each occurrence appends. A grid value is a comma-separated list
//! whose items are numbers or `start:stop:step` ranges with `stop` inclusive.

use std::path::PathBuf;

use su_interferometry::state::Group;
use su_interferometry::verify::ToleranceOverrides;
use su_interferometry::HalfInt;

use crate::error::{CliError, CliResult};
use crate::figures::Preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    G,
    DeltaPhiSq,
    NBar,
    E,
}

impl Quantity {
    pub fn column(self) -> &'static str {
        match self {
            Quantity::G => "G",
            Quantity::DeltaPhiSq => "delta_phi_sq",
            Quantity::NBar => "n_bar",
            Quantity::E => "E",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "G" | "g" => Some(Quantity::G),
            "delta_phi_sq" | "dphi2" => Some(Quantity::DeltaPhiSq),
            "n_bar" | "N" | "nbar" => Some(Quantity::NBar),
            "E" | "exponent" => Some(Quantity::E),
            _ => None,
        }
    }
}

pub const DEFAULT_QUANTITIES: [Quantity; 3] = [Quantity::G, Quantity::DeltaPhiSq, Quantity::NBar];

/// Everything a config file can set. Grids are kept in file order.
#[derive(Debug, Clone, Default)]
pub struct SweepConfig {
    pub group: Option<Group>,
    pub preset: Option<Preset>,
    pub out: Option<PathBuf>,
    pub quantities: Vec<Quantity>,
    pub j: Vec<HalfInt>,
    pub m0: Vec<HalfInt>,
    pub k: Vec<HalfInt>,
    pub l: Vec<usize>,
    pub eta: Vec<f64>,
    pub beta: Vec<f64>,
    pub sinh2beta: Vec<f64>,
    pub phi: Vec<f64>,
    pub tolerances: ToleranceOverrides,
    /// `(key, value)` pairs exactly as written, for the manifest.
    pub echo: Vec<(String, String)>,
}

const GRID_KEYS: &[&str] = &["j", "m0", "k", "l", "eta", "beta", "sinh2beta", "phi", "quantity"];
const SCALAR_KEYS: &[&str] = &["group", "preset", "out", "tolerance"];

pub fn parse_group(s: &str) -> Option<Group> {
    let norm: String = s.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    match norm.as_str() {
        "su2" | "su(2)" => Some(Group::Su2),
        "su11" | "su(1,1)" => Some(Group::Su11),
        _ => None,
    }
}

/// Parses a positive, finite tolerance.
pub fn parse_tolerance(s: &str) -> Result<f64, String> {
    let t: f64 = s.trim().parse().map_err(|_| format!("cannot parse tolerance `{}`", s.trim()))?;
    if !(t.is_finite() && t > 0.0) {
        return Err(format!("tolerance must be positive, got {t}"));
    }
    Ok(t)
}

/// Rounds to 12 significant digits so `0.1:0.9:0.1` yields `0.3`, not `0.30000000000000004`.
fn snap(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn expand_item(item: &str) -> Result<Vec<f64>, String> {
    let num = |s: &str| -> Result<f64, String> {
        let s = s.trim();
        let x: f64 = if let Some((a, b)) = s.split_once('/') {
            let a: f64 = a.trim().parse().map_err(|_| format!("cannot parse `{s}`"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("cannot parse `{s}`"))?;
            a / b
        } else {
            s.parse().map_err(|_| format!("cannot parse `{s}`"))?
        };
        if x.is_finite() {
            Ok(x)
        } else {
            Err(format!("`{s}` is not finite"))
        }
    };
    let parts: Vec<&str> = item.split(':').collect();
    match parts.as_slice() {
        [x] => Ok(vec![num(x)?]),
        [a, b, step] => {
            let (a, b, step) = (num(a)?, num(b)?, num(step)?);
            if step <= 0.0 {
                return Err(format!("range step must be positive in `{item}`"));
            }
            if b < a {
                return Err(format!("range `{item}` ends before it starts"));
            }
            let span = (b - a) / step;
            let n = (span + 1e-9).floor() as usize;
            if n > 1_000_000 {
                return Err(format!("range `{item}` has more than a million points"));
            }
            Ok((0..=n).map(|i| snap(a + i as f64 * step)).collect())
        }
        _ => Err(format!("expected a number or start:stop:step, got `{item}`")),
    }
}

/// Expands a comma-separated grid value.
pub fn parse_grid(value: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for item in value.split(',') {
        if item.trim().is_empty() {
            return Err("empty grid item".into());
        }
        out.extend(expand_item(item.trim())?);
    }
    Ok(out)
}

fn half_ints(field: &str, xs: Vec<f64>) -> Result<Vec<HalfInt>, String> {
    xs.into_iter()
        .map(|x| HalfInt::from_f64(x).map_err(|_| format!("{field} = {x} is not a multiple of 1/2")))
        .collect()
}

fn naturals(field: &str, xs: Vec<f64>) -> Result<Vec<usize>, String> {
    xs.into_iter()
        .map(|x| {
            if x >= 0.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(format!("{field} = {x} is not a non-negative integer"))
            }
        })
        .collect()
}

impl SweepConfig {
    pub fn parse(text: &str, path: &str) -> CliResult<Self> {
        let mut cfg = SweepConfig::default();
        let mut seen: Vec<String> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| CliError::Parse {
                path: path.to_string(),
                line,
                message,
            };
            let content = raw.split_once('#').map_or(raw, |(a, _)| a).trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(err(format!("`{key}` has no value")));
            }
            let per_check = key.strip_prefix("tolerance.");
            if !GRID_KEYS.contains(&key) && !SCALAR_KEYS.contains(&key) && per_check.is_none() {
                return Err(err(format!("unknown key `{key}`")));
            }
            if !GRID_KEYS.contains(&key) {
                if seen.iter().any(|s| s == key) {
                    return Err(err(format!("`{key}` is set twice")));
                }
                seen.push(key.to_string());
            }
            cfg.echo.push((key.to_string(), value.to_string()));
            if let Some(id) = per_check {
                if !su_interferometry::verify::check_ids().any(|c| c == id) {
                    return Err(err(format!("unknown check `{id}`")));
                }
                cfg.tolerances.per_check.insert(id.to_string(), parse_tolerance(value).map_err(err)?);
                continue;
            }
            match key {
                "group" => cfg.group = Some(parse_group(value).ok_or_else(|| err(format!("unknown group `{value}`, expected SU2 or SU11")))?),
                "preset" => cfg.preset = Some(value.parse().map_err(err)?),
                "out" => cfg.out = Some(PathBuf::from(value)),
                "tolerance" => cfg.tolerances.global = Some(parse_tolerance(value).map_err(err)?),
                "quantity" => {
                    for q in value.split(',') {
                        let q = Quantity::parse(q.trim()).ok_or_else(|| err(format!("unknown quantity `{}`", q.trim())))?;
                        if !cfg.quantities.contains(&q) {
                            cfg.quantities.push(q);
                        }
                    }
                }
                _ => {
                    let xs = parse_grid(value).map_err(|m| err(format!("{key}: {m}")))?;
                    match key {
                        "j" => cfg.j.extend(half_ints(key, xs).map_err(err)?),
                        "m0" => cfg.m0.extend(half_ints(key, xs).map_err(err)?),
                        "k" => cfg.k.extend(half_ints(key, xs).map_err(err)?),
                        "l" => cfg.l.extend(naturals(key, xs).map_err(err)?),
                        "eta" => cfg.eta.extend(xs),
                        "beta" => cfg.beta.extend(xs),
                        "sinh2beta" => cfg.sinh2beta.extend(xs),
                        "phi" => cfg.phi.extend(xs),
                        _ => unreachable!("grid keys are listed above"),
                    }
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn quantities(&self) -> Vec<Quantity> {
        if self.quantities.is_empty() {
            DEFAULT_QUANTITIES.to_vec()
        } else {
            self.quantities.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_are_inclusive_and_snapped() {
        assert_eq!(parse_grid("0.1:0.5:0.1").unwrap(), vec![0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(parse_grid("1, 3:5:1").unwrap(), vec![1.0, 3.0, 4.0, 5.0]);
        assert_eq!(parse_grid("1/2").unwrap(), vec![0.5]);
        assert!(parse_grid("1:0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("1,,2").is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = SweepConfig::parse("group = SU2\n\nj = 1:x:1\n", "c.cfg").unwrap_err();
        assert!(e.to_string().starts_with("c.cfg:3:"), "{e}");
        let e = SweepConfig::parse("# note\nwhat = 1\n", "c.cfg").unwrap_err();
        assert!(e.to_string().starts_with("c.cfg:2:"), "{e}");
        let e = SweepConfig::parse("group = SU2\ngroup = SU11\n", "c.cfg").unwrap_err();
        assert!(e.to_string().contains(":2:"), "{e}");
        assert!(SweepConfig::parse("tolerance = -1\n", "c").is_err());
        assert!(SweepConfig::parse("tolerance.nope = 1\n", "c").is_err());
    }

    #[test]
    fn grid_keys_append() {
        let c = SweepConfig::parse("group = su(1,1)\nl = 0:2:1\nl = 5\nk = 1/2\nquantity = G, E\n", "c").unwrap();
        assert_eq!(c.group, Some(Group::Su11));
        assert_eq!(c.l, vec![0, 1, 2, 5]);
        assert_eq!(c.k, vec![HalfInt::HALF]);
        assert_eq!(c.quantities, vec![Quantity::G, Quantity::E]);
        assert_eq!(c.echo.len(), 5);
    }

    #[test]
    fn empty_config_is_all_defaults() {
        let c = SweepConfig::parse("", "c").unwrap();
        assert!(c.group.is_none() && c.tolerances == ToleranceOverrides::default());
        assert_eq!(c.quantities(), DEFAULT_QUANTITIES.to_vec());
    }
}
