//! Concrete lift families and their evaluation.

mod spec;

use std::f64::consts::{PI, TAU};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use spec::{MapSpec, SpecPart};

use crate::error::{invalid, Result};
use crate::geom::Vec2;

/// Golden ratio, the default slope of the stopped flow.
pub const GOLDEN: f64 = 1.618_033_988_749_895;

/// Default RK4 step count of the stopped flow.
pub const DEFAULT_STEPS: u32 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `z -> z + alpha`.
    Rigid { alpha: Vec2 },
    /// `(x, y) -> (x + c sin 2πx, y)`.
    Shear { c: f64 },
    /// `(x, y) -> (x + a sin 2πy, y)` followed by `(x, y) -> (x, y + b sin 2πx)`.
    TwoShear { a: f64, b: f64 },
    /// Time-one map of `phi(z) (1, slope)` with `phi = amp (sin²πx + sin²πy)`.
    Fayad { slope: f64, amp: f64, steps: u32 },
    /// Rotation by `theta bump(|z - c| / r)` inside each lifted disk `B_r(c + k)`.
    DiskRot { center: Vec2, r: f64, theta: f64 },
    /// Composition, first element applied first.
    Composite(Vec<TorusLift>),
}

/// An equivariant self-map of the plane, `f(z + v) = f(z) + v` for integer `v`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusLift {
    family: Family,
}

fn bump(s: f64) -> f64 {
    if s >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

impl TorusLift {
    pub fn rigid(alpha: Vec2) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(invalid("rigid translation must be finite"));
        }
        Ok(TorusLift { family: Family::Rigid { alpha } })
    }

    pub fn shear(c: f64) -> Result<Self> {
        if !(c.abs() < 1.0 / TAU) {
            return Err(invalid(format!("shear amplitude |c| must be below 1/(2π), got {c}")));
        }
        Ok(TorusLift { family: Family::Shear { c } })
    }

    pub fn twoshear(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(invalid("two-shear amplitudes must be finite"));
        }
        Ok(TorusLift { family: Family::TwoShear { a, b } })
    }

    pub fn fayad(slope: f64, amp: f64, steps: u32) -> Result<Self> {
        if !slope.is_finite() {
            return Err(invalid("slope must be finite"));
        }
        if !(amp > 0.0 && amp.is_finite()) {
            return Err(invalid(format!("amplitude must be positive, got {amp}")));
        }
        if steps == 0 {
            return Err(invalid("step count must be positive"));
        }
        Ok(TorusLift { family: Family::Fayad { slope, amp, steps } })
    }

    pub fn diskrot(center: Vec2, r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0 && r < 0.5) {
            return Err(invalid(format!("disk radius must lie in (0, 1/2), got {r}")));
        }
        if !(center.is_finite() && theta.is_finite()) {
            return Err(invalid("disk centre and angle must be finite"));
        }
        Ok(TorusLift { family: Family::DiskRot { center, r, theta } })
    }

    pub fn composite(parts: Vec<TorusLift>) -> Result<Self> {
        if parts.is_empty() {
            return Err(invalid("empty composition"));
        }
        Ok(TorusLift { family: Family::Composite(parts) })
    }

    /// `T_w ∘ self`, the lift changed by an integer translation.
    pub fn then_translate(&self, w: Vec2) -> Result<Self> {
        TorusLift::composite(vec![self.clone(), TorusLift::rigid(w)?])
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Rigid { .. } => "rigid",
            Family::Shear { .. } => "shear",
            Family::TwoShear { .. } => "twoshear",
            Family::Fayad { .. } => "fayad",
            Family::DiskRot { .. } => "diskrot",
            Family::Composite(_) => "composite",
        }
    }

    /// Whether the family preserves Lebesgue measure.
    pub fn is_area_preserving(&self) -> bool {
        match &self.family {
            Family::Rigid { .. } | Family::TwoShear { .. } | Family::DiskRot { .. } => true,
            Family::Shear { c } => *c == 0.0,
            Family::Fayad { .. } => false,
            Family::Composite(parts) => parts.iter().all(|p| p.is_area_preserving()),
        }
    }

    /// Whether evaluation is closed form (as opposed to numerical integration).
    pub fn is_closed_form(&self) -> bool {
        match &self.family {
            Family::Fayad { .. } => false,
            Family::Composite(parts) => parts.iter().all(|p| p.is_closed_form()),
            _ => true,
        }
    }

    pub fn apply(&self, z: Vec2) -> Vec2 {
        match &self.family {
            Family::Composite(parts) => parts.iter().fold(z, |w, p| p.apply(w)),
            _ => z + self.displacement(z),
        }
    }

    /// The displacement `f(z) - z`, evaluated without forming `f(z)` first.
    ///
    /// This is a periodic function of `z`.
    pub fn displacement(&self, z: Vec2) -> Vec2 {
        match &self.family {
            Family::Rigid { alpha } => *alpha,
            Family::Shear { c } => Vec2::new(c * (TAU * z.x).sin(), 0.0),
            Family::TwoShear { a, b } => {
                let dx = a * (TAU * z.y).sin();
                Vec2::new(dx, b * (TAU * (z.x + dx)).sin())
            }
            Family::Fayad { slope, amp, steps } => rk4_flow(z, *slope, *amp, *steps, 1.0) - z,
            Family::DiskRot { center, r, theta } => disk_displacement(z, *center, *r, *theta),
            Family::Composite(_) => self.apply(z) - z,
        }
    }

    pub fn inverse_apply(&self, z: Vec2) -> Vec2 {
        match &self.family {
            Family::Rigid { alpha } => z - *alpha,
            Family::Shear { c } => Vec2::new(invert_sine_shift(z.x, *c), z.y),
            Family::TwoShear { a, b } => {
                let y = z.y - b * (TAU * z.x).sin();
                Vec2::new(z.x - a * (TAU * y).sin(), y)
            }
            Family::Fayad { slope, amp, steps } => fayad_inverse(z, *slope, *amp, *steps),
            Family::DiskRot { center, r, theta } => disk_rotate(z, *center, *r, -*theta),
            Family::Composite(parts) => parts.iter().rev().fold(z, |w, p| p.inverse_apply(w)),
        }
    }

    /// `f^n(z)`, using the inverse for negative `n`.
    pub fn iterate(&self, z: Vec2, n: i64) -> Vec2 {
        let mut w = z;
        if n >= 0 {
            for _ in 0..n {
                w = self.apply(w);
            }
        } else {
            for _ in 0..(-n) {
                w = self.inverse_apply(w);
            }
        }
        w
    }
}

impl fmt::Display for TorusLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Rigid { alpha } => write!(f, "rigid:ax={},ay={}", alpha.x, alpha.y),
            Family::Shear { c } => write!(f, "shear:c={c}"),
            Family::TwoShear { a, b } => write!(f, "twoshear:a={a},b={b}"),
            Family::Fayad { slope, amp, steps } => write!(f, "fayad:slope={slope},amp={amp},steps={steps}"),
            Family::DiskRot { center, r, theta } => {
                write!(f, "diskrot:cx={},cy={},r={r},theta={theta}", center.x, center.y)
            }
            Family::Composite(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
        }
    }
}

/// Solve `x + c sin 2πx = target` by Newton's method (`|c| < 1/(2π)`).
fn invert_sine_shift(target: f64, c: f64) -> f64 {
    let mut x = target;
    for _ in 0..100 {
        let g = x + c * (TAU * x).sin() - target;
        let dg = 1.0 + TAU * c * (TAU * x).cos();
        let step = g / dg;
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

fn fayad_field(z: Vec2, slope: f64, amp: f64) -> Vec2 {
    let sx = (PI * z.x).sin();
    let sy = (PI * z.y).sin();
    let phi = amp * (sx * sx + sy * sy);
    Vec2::new(phi, phi * slope)
}

/// Classical RK4 over total time `t` with `steps` equal steps.
fn rk4_flow(z: Vec2, slope: f64, amp: f64, steps: u32, t: f64) -> Vec2 {
    let h = t / steps as f64;
    let mut w = z;
    for _ in 0..steps {
        let k1 = fayad_field(w, slope, amp);
        let k2 = fayad_field(w + k1 * (0.5 * h), slope, amp);
        let k3 = fayad_field(w + k2 * (0.5 * h), slope, amp);
        let k4 = fayad_field(w + k3 * h, slope, amp);
        w += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    }
    w
}

/// Exact inverse of the discrete forward map: backward integration as a first
/// guess, then Newton iterations with a finite-difference Jacobian.
fn fayad_inverse(target: Vec2, slope: f64, amp: f64, steps: u32) -> Vec2 {
    let forward = |z: Vec2| rk4_flow(z, slope, amp, steps, 1.0);
    let mut z = rk4_flow(target, slope, amp, steps, -1.0);
    let eps = 1e-7;
    for _ in 0..8 {
        let r = forward(z) - target;
        if r.norm() <= 1e-15 {
            break;
        }
        let jx = (forward(z + Vec2::new(eps, 0.0)) - forward(z - Vec2::new(eps, 0.0))) / (2.0 * eps);
        let jy = (forward(z + Vec2::new(0.0, eps)) - forward(z - Vec2::new(0.0, eps))) / (2.0 * eps);
        let det = jx.x * jy.y - jy.x * jx.y;
        if det.abs() < 1e-300 {
            break;
        }
        let dx = (r.x * jy.y - jy.x * r.y) / det;
        let dy = (jx.x * r.y - r.x * jx.y) / det;
        z -= Vec2::new(dx, dy);
    }
    z
}

fn disk_displacement(z: Vec2, center: Vec2, r: f64, theta: f64) -> Vec2 {
    let rel = z - center;
    let w = rel - Vec2::new(rel.x.round(), rel.y.round());
    let s = w.norm() / r;
    if s >= 1.0 {
        return Vec2::ZERO;
    }
    w.rotate(theta * bump(s)) - w
}

fn disk_rotate(z: Vec2, center: Vec2, r: f64, theta: f64) -> Vec2 {
    z + disk_displacement(z, center, r, theta)
}

/// Build a lift from a parsed descriptor, filling in family defaults.
pub fn make_map(spec: &MapSpec) -> Result<TorusLift> {
    let mut lifts = spec.parts.iter().map(make_part).collect::<Result<Vec<_>>>()?;
    if lifts.len() == 1 {
        Ok(lifts.pop().unwrap())
    } else {
        TorusLift::composite(lifts)
    }
}

fn make_part(p: &SpecPart) -> Result<TorusLift> {
    let get = |k: &str, default: f64| p.get(k).unwrap_or(default);
    match p.family.as_str() {
        "rigid" => TorusLift::rigid(Vec2::new(get("ax", 0.0), get("ay", 0.0))),
        "shear" => TorusLift::shear(get("c", 0.1)),
        "twoshear" => TorusLift::twoshear(get("a", 0.3), get("b", 0.3)),
        "fayad" => {
            let steps = get("steps", DEFAULT_STEPS as f64);
            if steps.fract() != 0.0 || !(1.0..=1e6).contains(&steps) {
                return Err(invalid(format!("steps must be a positive integer, got {steps}")));
            }
            TorusLift::fayad(get("slope", GOLDEN), get("amp", 1.0), steps as u32)
        }
        "diskrot" => TorusLift::diskrot(
            Vec2::new(get("cx", 0.5), get("cy", 0.5)),
            get("r", 0.25),
            get("theta", 1.0),
        ),
        other => Err(invalid(format!("unknown map family '{other}'"))),
    }
}

/// Parse and build in one step.
pub fn parse_map(text: &str) -> Result<TorusLift> {
    make_map(&text.parse()?)
}

/// `f^n(z) - z`.
pub fn iterate_displacement(lift: &TorusLift, z: Vec2, n: i64) -> Vec2 {
    lift.iterate(z, n) - z
}

/// Largest `|f(z + v) - f(z) - v|` over random `z` in the unit square and
/// `v` in `{(1,0), (0,1), (2,-3)}`.
pub fn equivariance_error(lift: &TorusLift, samples: usize, seed: u64) -> Result<f64> {
    if samples == 0 {
        return Err(invalid("at least one sample is required"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shifts = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(2.0, -3.0)];
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let z = Vec2::new(rng.random::<f64>(), rng.random::<f64>());
        // f(z + v) - f(z) - v equals the difference of displacements.
        let dz = lift.displacement(z);
        for v in shifts {
            worst = worst.max((lift.displacement(z + v) - dz).norm());
        }
    }
    Ok(worst)
}

/// The parameter presets exercised by the test-suite and the CLI examples.
pub fn presets() -> Vec<TorusLift> {
    [
        "rigid:ax=0.25,ay=0",
        "rigid:ax=0.6180339887498949,ay=0.4142135623730951",
        "shear:c=0.1",
        "twoshear:a=0.05,b=0.05",
        "twoshear:a=0.3,b=0.3",
        "fayad:slope=1.618033988749895,amp=1,steps=64",
        "diskrot:cx=0.5,cy=0.5,r=0.25,theta=1",
        "diskrot:cx=0,cy=0,r=0.4,theta=3",
    ]
    .iter()
    .map(|s| parse_map(s).expect("preset is valid"))
    .collect()
}
