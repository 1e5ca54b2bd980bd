use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Textual map descriptor `family:key=val,key=val`.
///
/// Values may also be given positionally (`rigid:0.25,0`), in which case they
/// bind to the family's keys in declaration order. Several descriptors joined
/// by `;` describe the composition applied left to right.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct MapSpec {
    pub parts: Vec<SpecPart>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpecPart {
    pub family: String,
    pub params: Vec<(String, f64)>,
}

/// Keys accepted by each family, in positional order.
pub(crate) fn family_keys(family: &str) -> Option<&'static [&'static str]> {
    Some(match family {
        "rigid" => &["ax", "ay"],
        "shear" => &["c"],
        "twoshear" => &["a", "b"],
        "fayad" => &["slope", "amp", "steps"],
        "diskrot" => &["cx", "cy", "r", "theta"],
        _ => return None,
    })
}

impl SpecPart {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == key).map(|(_, v)| *v)
    }

    fn parse(text: &str) -> Result<SpecPart> {
        let text = text.trim();
        let (family, rest) = match text.split_once(':') {
            Some((f, r)) => (f.trim(), r.trim()),
            None => (text, ""),
        };
        let family = family.to_ascii_lowercase();
        let keys = family_keys(&family).ok_or_else(|| invalid(format!("unknown map family '{family}'")))?;
        let mut params: Vec<(String, f64)> = Vec::new();
        if !rest.is_empty() {
            for (pos, item) in rest.split(',').enumerate() {
                let item = item.trim();
                let (key, value) = match item.split_once('=') {
                    Some((k, v)) => (k.trim().to_ascii_lowercase(), v.trim()),
                    None => {
                        let key = keys
                            .get(pos)
                            .ok_or_else(|| invalid(format!("too many positional values for '{family}'")))?;
                        (key.to_string(), item)
                    }
                };
                if !keys.contains(&key.as_str()) {
                    return Err(invalid(format!("unknown key '{key}' for family '{family}'")));
                }
                if params.iter().any(|(k, _)| *k == key) {
                    return Err(invalid(format!("duplicate key '{key}'")));
                }
                let value: f64 = value
                    .parse()
                    .map_err(|_| invalid(format!("cannot parse value '{value}' for key '{key}'")))?;
                if !value.is_finite() {
                    return Err(invalid(format!("non-finite value for key '{key}'")));
                }
                params.push((key, value));
            }
        }
        Ok(SpecPart { family, params })
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(SpecPart::parse)
            .collect::<Result<Vec<_>>>()?;
        if parts.is_empty() {
            return Err(invalid("empty map spec"));
        }
        Ok(MapSpec { parts })
    }
}

impl TryFrom<String> for MapSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<MapSpec> for String {
    fn from(m: MapSpec) -> String {
        m.to_string()
    }
}

impl fmt::Display for SpecPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.family)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { ':' } else { ',' })?;
        }
        Ok(())
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}
