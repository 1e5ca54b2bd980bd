//! Flag parsing helpers and `--config` merging.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;
use torusrot::geom::{LatticeVec, Sigma, Vec2};
use torusrot::regions::{OmegaVariant, Window};
use torusrot::rotation::MeasureSampler;

/// Overlay the explicitly given flags of `args` on the JSON object in `config`.
///
/// Keys in the config file use the long flag names with `-` or `_`.
pub fn merge<T: Serialize + DeserializeOwned>(args: &T, config: Option<&Path>) -> Result<T> {
    let Some(path) = config else {
        return Ok(serde_json::from_value(serde_json::to_value(args)?)?);
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let Value::Object(file) = serde_json::from_str::<Value>(&text).context("config is not valid JSON")? else {
        bail!("config must be a JSON object");
    };
    let Value::Object(mut merged) = serde_json::to_value(args)? else { unreachable!() };
    for (key, value) in file {
        let key = key.replace('-', "_");
        match merged.get(&key) {
            None => bail!("unknown config key {key:?}"),
            Some(Value::Null) => {
                merged.insert(key, value);
            }
            Some(_) => {}
        }
    }
    serde_json::from_value(Value::Object(merged)).context("config value has the wrong type")
}

fn numbers(text: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .with_context(|| format!("{what} must be {count} comma-separated numbers, got {text:?}"))?;
    if parts.len() != count || parts.iter().any(|p| !p.is_finite()) {
        bail!("{what} must be {count} comma-separated finite numbers, got {text:?}");
    }
    Ok(parts)
}

pub fn point(text: &str, what: &str) -> Result<Vec2> {
    let p = numbers(text, 2, what)?;
    Ok(Vec2::new(p[0], p[1]))
}

fn integer(x: f64, what: &str) -> Result<i64> {
    if x.fract() != 0.0 || x.abs() > 1e12 {
        bail!("{what} must be integral, got {x}");
    }
    Ok(x as i64)
}

pub fn lattice(text: &str, what: &str) -> Result<LatticeVec> {
    let p = numbers(text, 2, what)?;
    Ok(LatticeVec::new(integer(p[0], what)?, integer(p[1], what)?))
}

/// `k` for `[-k, k]²` or `x0,x1,y0,y1`.
pub fn window(text: &str) -> Result<Window> {
    let w = if text.contains(',') {
        let p = numbers(text, 4, "window")?;
        Window::new(integer(p[0], "window")?, integer(p[1], "window")?, integer(p[2], "window")?, integer(p[3], "window")?)
    } else {
        let k = text.trim().parse::<f64>().with_context(|| format!("bad window {text:?}"))?;
        Window::square(integer(k, "window")?)
    };
    Ok(w?)
}

pub fn variant(text: &str) -> Result<OmegaVariant> {
    match text.to_ascii_lowercase().as_str() {
        "omega" => Ok(OmegaVariant::Omega),
        "b" => Ok(OmegaVariant::B),
        _ => bail!("variant must be omega or b, got {text:?}"),
    }
}

/// `lattice`, `nonzero`, `offline:a,b` or `finite:a,b;c,d;...`.
pub fn sigma(text: &str) -> Result<Sigma> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "lattice" => Ok(Sigma::Lattice),
        "nonzero" => Ok(Sigma::NonZero),
        "offline" => {
            let d = lattice(rest, "sigma line")?;
            if d.is_zero() {
                bail!("sigma line direction must be nonzero");
            }
            Ok(Sigma::NonZeroOffLine(d))
        }
        "finite" => Ok(Sigma::Finite(rest.split(';').map(|p| lattice(p, "sigma member")).collect::<Result<_>>()?)),
        _ => bail!("unknown sigma {text:?}"),
    }
}

/// `grid`, `random` (seeded by `seed`), `orbit:x,y` or `point:x,y`.
pub fn sampler(text: &str, seed: u64) -> Result<MeasureSampler> {
    let (kind, rest) = text.split_once(':').unwrap_or((text, ""));
    match kind {
        "grid" => Ok(MeasureSampler::LebesgueGrid),
        "random" => Ok(MeasureSampler::LebesgueRandom { seed }),
        "orbit" => Ok(MeasureSampler::OrbitBirkhoff { base: point(rest, "orbit base")? }),
        "point" => Ok(MeasureSampler::PointMass { point: point(rest, "point mass")? }),
        _ => bail!("unknown sampler {text:?}"),
    }
}
