use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

/// A point or vector of the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Vec2::new(c, s)
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3d cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    /// Rotation by a quarter turn counterclockwise: `(a, b) -> (-b, a)`.
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Rotate counterclockwise by `theta` radians.
    #[inline]
    pub fn rotate(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Componentwise fractional part, in `[0, 1)`.
    #[inline]
    pub fn fract_unit(self) -> Vec2 {
        Vec2::new(self.x - self.x.floor(), self.y - self.y.floor())
    }

    /// Distance between the projections of `self` and `other` on the flat torus.
    pub fn torus_dist(self, other: Vec2) -> f64 {
        let d = self - other;
        let wrap = |t: f64| {
            let r = t - t.round();
            r.abs()
        };
        wrap(d.x).hypot(wrap(d.y))
    }

    pub fn to_array(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    #[inline]
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl From<LatticeVec> for Vec2 {
    fn from(v: LatticeVec) -> Vec2 {
        Vec2::new(v.a as f64, v.b as f64)
    }
}

/// An element of the integer lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct LatticeVec {
    pub a: i64,
    pub b: i64,
}

impl LatticeVec {
    pub const fn new(a: i64, b: i64) -> Self {
        LatticeVec { a, b }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// `max(|a|, |b|)`.
    pub fn sup_norm(self) -> i64 {
        self.a.abs().max(self.b.abs())
    }

    pub fn gcd(self) -> i64 {
        gcd(self.a.abs(), self.b.abs())
    }

    /// Nonzero and not an integer multiple (other than ±1) of another lattice vector.
    pub fn is_primitive(self) -> bool {
        !self.is_zero() && self.gcd() == 1
    }

    /// The primitive vector on the same ray.
    pub fn primitive(self) -> LatticeVec {
        let g = self.gcd();
        if g == 0 {
            self
        } else {
            LatticeVec::new(self.a / g, self.b / g)
        }
    }

    /// Representative of `{v, -v}` with `a > 0`, or `a == 0` and `b > 0`.
    pub fn canonical_sign(self) -> LatticeVec {
        if self.a < 0 || (self.a == 0 && self.b < 0) {
            -self
        } else {
            self
        }
    }

    pub fn is_parallel(self, other: LatticeVec) -> bool {
        self.a * other.b - self.b * other.a == 0
    }

    pub fn dot(self, other: LatticeVec) -> i64 {
        self.a * other.a + self.b * other.b
    }

    pub fn to_vec2(self) -> Vec2 {
        self.into()
    }

    /// All primitive vectors with `sup_norm <= max`, one per sign pair,
    /// ordered by sup-norm then lexicographically.
    pub fn primitive_directions(max: i64) -> Vec<LatticeVec> {
        let mut out = Vec::new();
        for a in 0..=max {
            for b in -max..=max {
                let v = LatticeVec::new(a, b);
                if v.is_primitive() && v.canonical_sign() == v {
                    out.push(v);
                }
            }
        }
        out.sort_by_key(|v| (v.sup_norm(), *v));
        out
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl Add for LatticeVec {
    type Output = LatticeVec;
    fn add(self, o: LatticeVec) -> LatticeVec {
        LatticeVec::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for LatticeVec {
    type Output = LatticeVec;
    fn sub(self, o: LatticeVec) -> LatticeVec {
        LatticeVec::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for LatticeVec {
    type Output = LatticeVec;
    fn neg(self) -> LatticeVec {
        LatticeVec::new(-self.a, -self.b)
    }
}

impl Mul<i64> for LatticeVec {
    type Output = LatticeVec;
    fn mul(self, k: i64) -> LatticeVec {
        LatticeVec::new(self.a * k, self.b * k)
    }
}

pub(crate) fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.abs()
}
