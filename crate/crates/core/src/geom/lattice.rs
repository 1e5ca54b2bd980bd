use serde::{Deserialize, Serialize};

use super::{LatticeVec, Vec2};
use crate::error::{invalid, Result};

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) || ![x0, x1, y0, y1].iter().all(|c| c.is_finite()) {
            return Err(invalid(format!("bad rectangle [{x0}, {x1}] x [{y0}, {y1}]")));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    pub fn square(half: f64) -> Result<Self> {
        Rect::new(-half, half, -half, half)
    }

    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

/// A subset of Z² used as an exclusion set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Sigma {
    /// All of Z².
    Lattice,
    /// Z² without the origin.
    NonZero,
    /// Z² without the line through the origin spanned by the given vector.
    NonZeroOffLine(LatticeVec),
    /// An explicit finite set.
    Finite(Vec<LatticeVec>),
}

impl Sigma {
    pub fn contains(&self, v: LatticeVec) -> bool {
        match self {
            Sigma::Lattice => true,
            Sigma::NonZero => !v.is_zero(),
            Sigma::NonZeroOffLine(d) => !d.is_parallel(v) && !v.is_zero(),
            Sigma::Finite(set) => set.contains(&v),
        }
    }

    /// Members with sup-norm at most `max`, ordered by sup-norm then lexicographically.
    pub fn members_in_box(&self, max: i64) -> Vec<LatticeVec> {
        let mut out: Vec<LatticeVec> = match self {
            Sigma::Finite(set) => set.iter().copied().filter(|v| v.sup_norm() <= max).collect(),
            _ => (-max..=max)
                .flat_map(|a| (-max..=max).map(move |b| LatticeVec::new(a, b)))
                .filter(|v| self.contains(*v))
                .collect(),
        };
        out.sort_by_key(|v| (v.sup_norm(), v.a, v.b));
        out.dedup();
        out
    }
}

/// Sampled r-density: every open ball of radius `r` centred at a sample point
/// of `window` must contain an element of `sigma`.
///
/// Centres lie on a grid of pitch `min(r, 1) / 8`.
pub fn is_r_dense(sigma: &Sigma, r: f64, window: &Rect) -> Result<bool> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let pitch = r.min(1.0) / 8.0;
    let nx = (window.width() / pitch).ceil() as usize;
    let ny = (window.height() / pitch).ceil() as usize;
    let reach = r.ceil() as i64;
    for j in 0..=ny {
        let y = (window.y0 + j as f64 * pitch).min(window.y1);
        for i in 0..=nx {
            let x = (window.x0 + i as f64 * pitch).min(window.x1);
            let c = Vec2::new(x, y);
            let hit = match sigma {
                Sigma::Finite(set) => set.iter().any(|v| v.to_vec2().dist(c) < r),
                _ => {
                    let (ca, cb) = (x.round() as i64, y.round() as i64);
                    (ca - reach..=ca + reach).any(|a| {
                        (cb - reach..=cb + reach).any(|b| {
                            let v = LatticeVec::new(a, b);
                            sigma.contains(v) && v.to_vec2().dist(c) < r
                        })
                    })
                }
            };
            if !hit {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
