//! The asymmetric weak metric on ℍ, its interpolating family, the
//! Teichmüller–Randers Finsler norm, and path-length machinery.
//!
//! Argument order matters throughout: `delta(a, b)` measures from `a` to `b`.
//! Descending the imaginary axis costs nothing at full weight.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfplane::{geodesic, hyp_dist, hyp_norm, Curve, Geodesic, HPoint, HTangent};
use crate::quadrature::GaussLegendre;
use crate::sampling;
use crate::tolerances::Tolerances;

/// Weight `t ∈ [0, 1]` of the exact 1-form `(1/2) d log Im ζ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct WeightParam(f64);

impl WeightParam {
    pub const ZERO: Self = Self(0.0);
    pub const HALF: Self = Self(0.5);
    pub const ONE: Self = Self(1.0);

    pub fn new(t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(Self(t))
        } else {
            Err(Error::BadWeight(t))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `sup_{x∈ℝ} |ζ₂ − x| / |ζ₁ − x|`, by a grid over `x = tan θ` followed by
/// golden-section refinement around the best grid point.
pub fn big_m(z1: HPoint, z2: HPoint, tol: &Tolerances) -> f64 {
    if z1 == z2 {
        return 1.0;
    }
    let ratio = |theta: f64| -> f64 {
        if theta <= -FRAC_PI_2 || theta >= FRAC_PI_2 {
            return 1.0;
        }
        let x = theta.tan();
        (z2.z() - x).norm() / (z1.z() - x).norm()
    };
    let n = tol.sup_grid.max(3);
    let step = std::f64::consts::PI / (n - 1) as f64;
    let grid = |k: usize| -FRAC_PI_2 + step * k as f64;
    let (best_k, best) = (0..n)
        .map(|k| (k, ratio(grid(k))))
        .fold((0, f64::NEG_INFINITY), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
    let lo = grid(best_k.saturating_sub(1));
    let hi = grid((best_k + 1).min(n - 1));
    let (_, refined) = golden_max(ratio, lo, hi, tol.sup_refine_tol);
    // The peak can hide in a cell touching ±∞ while the grid sees only values
    // below 1 there.
    let (_, left) = golden_max(ratio, grid(0), grid(1), tol.sup_refine_tol);
    let (_, right) = golden_max(ratio, grid(n - 2), grid(n - 1), tol.sup_refine_tol);
    best.max(refined).max(left).max(right)
}

/// Golden-section search for a maximum of a unimodal function on [a, b].
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// `log((|ζ₂ − ζ̄₁| + |ζ₂ − ζ₁|) / |ζ₁ − ζ̄₁|)`.
pub fn delta_closed(z1: HPoint, z2: HPoint) -> f64 {
    let a = (z2.z() - z1.z().conj()).norm();
    let b = (z2.z() - z1.z()).norm();
    ((a + b) / (2.0 * z1.im())).ln()
}

/// `d(ζ₁, ζ₂) + (t/2) log(Im ζ₂ / Im ζ₁)`.
pub fn delta_t(z1: HPoint, z2: HPoint, t: WeightParam) -> f64 {
    hyp_dist(z1, z2) + 0.5 * t.0 * (z2.im() / z1.im()).ln()
}

/// `|v| / (2 Im ζ) + (t/2) Im v / Im ζ`.
pub fn finsler_norm(v: &HTangent, t: WeightParam) -> f64 {
    hyp_norm(v) + 0.5 * t.0 * v.v.im / v.base.im()
}

/// Sampled path: parameters, points, and velocities. Velocities come from an
/// analytic oracle when built from a [`Curve`], or from finite differences
/// when built from bare points. Evaluates between knots by cubic Hermite
/// interpolation, so it is itself a C¹ curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    params: Vec<f64>,
    points: Vec<HPoint>,
    velocities: Vec<Complex64>,
}

impl PathSample {
    pub fn from_curve<C: Curve>(curve: &C, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewSamples(n));
        }
        let (a, b) = curve.domain();
        let params: Vec<f64> =
            (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect();
        let points = params.iter().map(|&s| curve.point(s)).collect();
        let velocities = params.iter().map(|&s| curve.velocity(s)).collect();
        let path = Self { params, points, velocities };
        path.check_params()?;
        Ok(path)
    }

    /// Velocities by second-order finite differences on a possibly uneven grid.
    pub fn from_points(params: Vec<f64>, points: Vec<HPoint>) -> Result<Self> {
        let n = points.len();
        if n < 2 {
            return Err(Error::TooFewSamples(n));
        }
        if params.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: params.len() });
        }
        let z: Vec<Complex64> = points.iter().map(HPoint::z).collect();
        let mut velocities = vec![Complex64::new(0.0, 0.0); n];
        if n == 2 {
            let v = (z[1] - z[0]) / (params[1] - params[0]);
            velocities = vec![v, v];
        } else {
            for k in 0..n {
                let (i0, i1, i2) = match k {
                    0 => (0, 1, 2),
                    k if k == n - 1 => (n - 3, n - 2, n - 1),
                    k => (k - 1, k, k + 1),
                };
                velocities[k] = lagrange_derivative(
                    [params[i0], params[i1], params[i2]],
                    [z[i0], z[i1], z[i2]],
                    params[k],
                );
            }
        }
        let path = Self { params, points, velocities };
        path.check_params()?;
        Ok(path)
    }

    fn check_params(&self) -> Result<()> {
        if self.params.windows(2).all(|w| w[1] > w[0]) {
            Ok(())
        } else {
            Err(Error::NonMonotoneParameters)
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[HPoint] {
        &self.points
    }

    pub fn velocities(&self) -> &[Complex64] {
        &self.velocities
    }

    fn interval(&self, s: f64) -> usize {
        let k = self.params.partition_point(|&p| p <= s);
        k.clamp(1, self.params.len() - 1) - 1
    }

    fn hermite(&self, s: f64) -> (Complex64, Complex64) {
        let k = self.interval(s);
        let (s0, s1) = (self.params[k], self.params[k + 1]);
        let h = s1 - s0;
        let u = (s - s0) / h;
        let (p0, p1) = (self.points[k].z(), self.points[k + 1].z());
        let (m0, m1) = (self.velocities[k] * h, self.velocities[k + 1] * h);
        let (u2, u3) = (u * u, u * u * u);
        let pos = p0 * (2.0 * u3 - 3.0 * u2 + 1.0)
            + m0 * (u3 - 2.0 * u2 + u)
            + p1 * (-2.0 * u3 + 3.0 * u2)
            + m1 * (u3 - u2);
        let der = p0 * (6.0 * u2 - 6.0 * u)
            + m0 * (3.0 * u2 - 4.0 * u + 1.0)
            + p1 * (-6.0 * u2 + 6.0 * u)
            + m1 * (3.0 * u2 - 2.0 * u);
        (pos, der / h)
    }
}

fn lagrange_derivative(s: [f64; 3], z: [Complex64; 3], at: f64) -> Complex64 {
    let mut out = Complex64::new(0.0, 0.0);
    for j in 0..3 {
        let mut denom = 1.0;
        let mut numer = 0.0;
        for m in 0..3 {
            if m != j {
                denom *= s[j] - s[m];
            }
        }
        for m in 0..3 {
            if m == j {
                continue;
            }
            let mut term = 1.0;
            for (l, &sl) in s.iter().enumerate() {
                if l != j && l != m {
                    term *= at - sl;
                }
            }
            numer += term;
        }
        out += z[j] * (numer / denom);
    }
    out
}

impl Curve for PathSample {
    fn domain(&self) -> (f64, f64) {
        (self.params[0], *self.params.last().expect("non-empty"))
    }

    fn point(&self, s: f64) -> HPoint {
        let (z, _) = self.hermite(s);
        HPoint::new(z.re, z.im).unwrap_or_else(|_| HPoint::raw(z.re, f64::MIN_POSITIVE))
    }

    fn velocity(&self, s: f64) -> Complex64 {
        self.hermite(s).1
    }

    fn breakpoints(&self) -> Vec<f64> {
        self.params.clone()
    }
}

/// `∫ finsler_norm(γ, γ')` by composite Gauss–Legendre. Pieces between
/// breakpoints are integrated separately.
pub fn path_length<C: Curve + ?Sized>(curve: &C, t: WeightParam, tol: &Tolerances) -> f64 {
    let rule = GaussLegendre::new(tol.quad_nodes);
    let knots = curve.breakpoints();
    let pieces = knots.len().saturating_sub(1).max(1);
    let panels = tol.quad_panels.div_ceil(pieces).max(1);
    knots
        .windows(2)
        .map(|w| {
            rule.integrate(w[0], w[1], panels, |s| {
                finsler_norm(&HTangent::new(curve.point(s), curve.velocity(s)), t)
            })
        })
        .sum()
}

/// A geodesic segment with smooth bumps added, endpoints fixed:
/// `x(s) + y(s) Σ aₖ sin(kπσ) + i y(s) exp(Σ bₖ sin(kπσ))`, σ = s/L.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbedGeodesic {
    base: Geodesic,
    /// `(aₖ, bₖ)` for k = 1, 2, ...
    harmonics: Vec<(f64, f64)>,
}

impl PerturbedGeodesic {
    pub fn new(base: Geodesic, harmonics: Vec<(f64, f64)>) -> Self {
        Self { base, harmonics }
    }

    /// Random harmonics up to order 3 with the given overall amplitude.
    pub fn random<R: Rng + ?Sized>(base: Geodesic, amplitude: f64, rng: &mut R) -> Self {
        let harmonics = (0..3)
            .map(|_| (amplitude * rng.gen_range(-1.0..1.0), amplitude * rng.gen_range(-1.0..1.0)))
            .collect();
        Self { base, harmonics }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            base: self.base,
            harmonics: self.harmonics.iter().map(|&(a, b)| (a * factor, b * factor)).collect(),
        }
    }

    fn sums(&self, s: f64) -> (f64, f64, f64, f64) {
        let l = self.base.length();
        let sigma = s / l;
        let (mut a, mut da, mut b, mut db) = (0.0, 0.0, 0.0, 0.0);
        for (k, &(ak, bk)) in self.harmonics.iter().enumerate() {
            let w = (k + 1) as f64 * std::f64::consts::PI;
            let (sn, cs) = (w * sigma).sin_cos();
            a += ak * sn;
            da += ak * w * cs / l;
            b += bk * sn;
            db += bk * w * cs / l;
        }
        (a, da, b, db)
    }
}

impl Curve for PerturbedGeodesic {
    fn domain(&self) -> (f64, f64) {
        self.base.domain()
    }

    fn point(&self, s: f64) -> HPoint {
        let p = self.base.point(s);
        let (a, _, b, _) = self.sums(s);
        HPoint::raw(p.re() + p.im() * a, p.im() * b.exp())
    }

    fn velocity(&self, s: f64) -> Complex64 {
        let p = self.base.point(s);
        let v = self.base.velocity(s);
        let (a, da, b, db) = self.sums(s);
        let e = b.exp();
        Complex64::new(v.re + v.im * a + p.im() * da, v.im * e + p.im() * e * db)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimalityReport {
    /// `path_length − delta_t` for the unperturbed geodesic.
    pub baseline_margin: f64,
    pub margins: Vec<f64>,
    pub min_margin: f64,
}

/// Compares the δ_t-length of randomly bumped geodesics against δ_t itself.
pub fn geodesic_minimality_probe(
    z1: HPoint,
    z2: HPoint,
    t: WeightParam,
    perturbations: usize,
    amplitude: f64,
    seed: u64,
    tol: &Tolerances,
) -> Result<MinimalityReport> {
    let g = geodesic(z1, z2)?;
    let target = delta_t(z1, z2, t);
    let baseline_margin = path_length(&g, t, tol) - target;
    let mut rng = sampling::rng(seed, 0x6d69_6e69);
    let margins: Vec<f64> = (0..perturbations)
        .map(|_| path_length(&PerturbedGeodesic::random(g, amplitude, &mut rng), t, tol) - target)
        .collect();
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(MinimalityReport { baseline_margin, margins, min_margin })
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetrizationReport {
    pub cases: usize,
    pub max_deviation: f64,
}

/// `(δ_t(x, y) + δ_t(y, x)) / 2` against `d(x, y)` on random pairs.
pub fn symmetrization_check(samples: usize, t: WeightParam, seed: u64) -> SymmetrizationReport {
    let mut rng = sampling::rng(seed, 0x7379_6d6d);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..samples {
        let x = sampling::point(&mut rng);
        let y = sampling::point(&mut rng);
        let sym = 0.5 * (delta_t(x, y, t) + delta_t(y, x, t));
        max_deviation = max_deviation.max((sym - hyp_dist(x, y)).abs());
    }
    SymmetrizationReport { cases: samples, max_deviation }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub cases: usize,
    /// max |δ(x, x)|
    pub diagonal: f64,
    /// max of −δ(x, y), clamped at 0
    pub negativity: f64,
    /// max of δ(x, z) − δ(x, y) − δ(y, z), clamped at 0
    pub triangle_excess: f64,
    /// triples with a violation beyond 1e-12
    pub violations: usize,
}

impl AxiomReport {
    pub fn max_violation(&self) -> f64 {
        self.diagonal.max(self.negativity).max(self.triangle_excess)
    }
}

/// Weak-metric axioms of δ_t on random triples.
pub fn weak_axioms_check(samples: usize, t: WeightParam, seed: u64) -> AxiomReport {
    let mut rng = sampling::rng(seed, 0x6178_696f);
    let mut report =
        AxiomReport { cases: samples, diagonal: 0.0, negativity: 0.0, triangle_excess: 0.0, violations: 0 };
    for _ in 0..samples {
        let x = sampling::point(&mut rng);
        let y = sampling::point(&mut rng);
        let z = sampling::point(&mut rng);
        let diag = delta_t(x, x, t).abs();
        let neg = [delta_t(x, y, t), delta_t(y, z, t), delta_t(x, z, t)]
            .iter()
            .fold(0f64, |m, &d| m.max(-d));
        // Scale-aware slack: values near large distances lose a few ulps.
        let lhs = delta_t(x, z, t);
        let rhs = delta_t(x, y, t) + delta_t(y, z, t);
        let excess = (lhs - rhs).max(0.0);
        report.diagonal = report.diagonal.max(diag);
        report.negativity = report.negativity.max(neg);
        report.triangle_excess = report.triangle_excess.max(excess);
        if diag > 0.0 || neg > 1e-12 || excess > 1e-12 {
            report.violations += 1;
        }
    }
    report
}
