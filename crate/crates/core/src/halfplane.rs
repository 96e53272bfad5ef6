//! The upper half-plane with the curvature −4 hyperbolic metric
//! `|dz| / (2 Im z)`. With this normalization hyperbolic distance is the
//! Teichmüller distance of the torus.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point with strictly positive imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    re: f64,
    im: f64,
}

impl HPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::NotInHalfPlane { re, im });
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// Caller guarantees `im > 0`; used where positivity holds by construction.
    pub(crate) fn raw(re: f64, im: f64) -> Self {
        debug_assert!(im > 0.0, "raw HPoint with im = {im}");
        Self { re, im }
    }

    pub fn i() -> Self {
        Self { re: 0.0, im: 1.0 }
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// A tangent vector `v` at `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HTangent {
    pub base: HPoint,
    pub v: Complex64,
}

impl HTangent {
    pub fn new(base: HPoint, v: Complex64) -> Self {
        Self { base, v }
    }
}

/// A point of ∂ℍ = ℝ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    Real(f64),
    Infinity,
}

/// τ ↦ (aτ + b)/(cτ + d), stored with ad − bc = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moebius {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl Moebius {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(Error::BadDeterminant { det });
        }
        let s = det.sqrt();
        Ok(Self { a: a / s, b: b / s, c: c / s, d: d / s })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn inverse(&self) -> Self {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Moebius) -> Self {
        let m = Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        };
        // Renormalize against drift.
        Self::new(m.a, m.b, m.c, m.d).unwrap_or(m)
    }

    pub fn apply(&self, p: HPoint) -> HPoint {
        let z = p.z();
        let den = self.c * z + self.d;
        let w = (self.a * z + self.b) / den;
        // Im(w) = Im(z)/|cz + d|² for a unit-determinant map; stays positive.
        HPoint::raw(w.re, p.im / den.norm_sqr())
    }

    pub fn apply_boundary(&self, x: Boundary) -> Boundary {
        match x {
            Boundary::Infinity if self.c == 0.0 => Boundary::Infinity,
            Boundary::Infinity => Boundary::Real(self.a / self.c),
            Boundary::Real(x) => {
                let den = self.c * x + self.d;
                if den == 0.0 {
                    Boundary::Infinity
                } else {
                    Boundary::Real((self.a * x + self.b) / den)
                }
            }
        }
    }

    /// Complex derivative at `p`, i.e. how the map pushes tangent vectors forward.
    pub fn derivative(&self, p: HPoint) -> Complex64 {
        let den = self.c * p.z() + self.d;
        1.0 / (den * den)
    }
}

/// `|v| / (2 Im base)`.
pub fn hyp_norm(t: &HTangent) -> f64 {
    t.v.norm() / (2.0 * t.base.im)
}

/// Curvature −4 distance: half the usual Poincaré distance.
pub fn hyp_dist(p: HPoint, q: HPoint) -> f64 {
    let chord = (p.z() - q.z()).norm();
    (chord / (2.0 * (p.im * q.im).sqrt())).asinh()
}

/// A C¹ path in ℍ with an analytic velocity.
pub trait Curve {
    /// Parameter interval.
    fn domain(&self) -> (f64, f64);
    fn point(&self, s: f64) -> HPoint;
    fn velocity(&self, s: f64) -> Complex64;

    /// Parameters where the curve may fail to be C²; quadrature splits there.
    fn breakpoints(&self) -> Vec<f64> {
        let (a, b) = self.domain();
        vec![a, b]
    }
}

impl<C: Curve + ?Sized> Curve for &C {
    fn domain(&self) -> (f64, f64) {
        (**self).domain()
    }
    fn point(&self, s: f64) -> HPoint {
        (**self).point(s)
    }
    fn velocity(&self, s: f64) -> Complex64 {
        (**self).velocity(s)
    }
    fn breakpoints(&self) -> Vec<f64> {
        (**self).breakpoints()
    }
}

/// Unit-speed geodesic through a base point, written as
/// `s ↦ x0 + y0 · R_θ(i e^{2s})` where `R_θ` is the rotation about `i`
/// by angle 2θ. θ = 0 goes straight up.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Frame {
    x0: f64,
    y0: f64,
    cos: f64,
    sin: f64,
}

impl Frame {
    fn new(base: HPoint, theta: f64) -> Self {
        Self { x0: base.re, y0: base.im, cos: theta.cos(), sin: theta.sin() }
    }

    fn point(&self, s: f64) -> HPoint {
        let (c, sn) = (self.cos, self.sin);
        // R(iy) = [sc(1 − y²) + iy] / (c² + y² s²); use u = 1/y when y > 1.
        let (re, im) = if s > 0.0 && sn != 0.0 {
            let u = (-2.0 * s).exp();
            let den = u * u * c * c + sn * sn;
            (sn * c * (u * u - 1.0) / den, u / den)
        } else {
            let y = (2.0 * s).exp();
            let den = c * c + y * y * sn * sn;
            (sn * c * (1.0 - y * y) / den, y / den)
        };
        HPoint::raw(self.x0 + self.y0 * re, self.y0 * im)
    }

    fn velocity(&self, s: f64) -> Complex64 {
        let (c, sn) = (self.cos, self.sin);
        let two_i = Complex64::new(0.0, 2.0);
        // d/ds R(i e^{2s}) = 2i y / (c − i y s)²
        let v = if s > 0.0 {
            let u = (-2.0 * s).exp();
            let w = Complex64::new(u * c, -sn);
            two_i * u / (w * w)
        } else {
            let y = (2.0 * s).exp();
            let w = Complex64::new(c, -y * sn);
            two_i * y / (w * w)
        };
        v * self.y0
    }

    fn endpoint(&self) -> Boundary {
        if self.sin == 0.0 {
            Boundary::Infinity
        } else {
            Boundary::Real(self.x0 - self.y0 * self.cos / self.sin)
        }
    }
}

/// Unit-speed geodesic segment from `p` to `q`, parameter `s ∈ [0, d(p, q)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    frame: Frame,
    length: f64,
    start: HPoint,
    end: HPoint,
}

impl Geodesic {
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn start(&self) -> HPoint {
        self.start
    }

    pub fn end(&self) -> HPoint {
        self.end
    }

    /// Forward endpoint at infinity of the complete geodesic.
    pub fn forward_endpoint(&self) -> Boundary {
        self.frame.endpoint()
    }

    /// Evenly spaced points including both ends.
    pub fn sample(&self, n: usize) -> Vec<(f64, HPoint)> {
        let n = n.max(2);
        (0..n)
            .map(|k| {
                let s = self.length * k as f64 / (n - 1) as f64;
                (s, self.point(s))
            })
            .collect()
    }
}

impl Curve for Geodesic {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.length)
    }

    fn point(&self, s: f64) -> HPoint {
        self.frame.point(s)
    }

    fn velocity(&self, s: f64) -> Complex64 {
        self.frame.velocity(s)
    }
}

pub fn geodesic(p: HPoint, q: HPoint) -> Result<Geodesic> {
    if p == q {
        return Err(Error::DegeneratePath);
    }
    // Normalize p to i, then read the direction of q in the disc model.
    let qn = (q.z() - p.re) / p.im;
    let i = Complex64::i();
    let w = (qn - i) / (qn + i);
    let theta = 0.5 * w.arg();
    Ok(Geodesic { frame: Frame::new(p, theta), length: hyp_dist(p, q), start: p, end: q })
}

/// Unit-speed geodesic ray from a point toward a boundary point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicRay {
    frame: Frame,
    target: Boundary,
}

impl GeodesicRay {
    pub fn at(&self, t: f64) -> HPoint {
        self.frame.point(t)
    }

    pub fn velocity(&self, t: f64) -> Complex64 {
        self.frame.velocity(t)
    }

    pub fn target(&self) -> Boundary {
        self.target
    }

    /// The segment `[0, t_end]` as a curve.
    pub fn truncate(&self, t_end: f64) -> RaySegment {
        RaySegment { ray: *self, t_end }
    }
}

pub fn geodesic_ray(p: HPoint, x: Boundary) -> GeodesicRay {
    let theta = match x {
        Boundary::Infinity => 0.0,
        Boundary::Real(x) => {
            let xn = (x - p.re) / p.im;
            1f64.atan2(-xn)
        }
    };
    GeodesicRay { frame: Frame::new(p, theta), target: x }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySegment {
    ray: GeodesicRay,
    t_end: f64,
}

impl Curve for RaySegment {
    fn domain(&self) -> (f64, f64) {
        (0.0, self.t_end)
    }
    fn point(&self, s: f64) -> HPoint {
        self.ray.at(s)
    }
    fn velocity(&self, s: f64) -> Complex64 {
        self.ray.velocity(s)
    }
}

pub fn mobius_apply(m: &Moebius, p: HPoint) -> HPoint {
    m.apply(p)
}
