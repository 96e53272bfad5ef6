//! Teichmüller space of the torus: measured foliations as real pairs,
//! intersection numbers, extremal length, the 1-form −½ d log Ext(F), the disc
//! chart that turns Ext(F) into 1/Im, and the behaviour of δ^ω along rays.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfplane::{geodesic_ray, hyp_dist, Boundary, GeodesicRay, HPoint, Moebius};
use crate::sampling;
use crate::weakmetric::{delta_t, WeightParam};

/// A measured foliation on the torus: a nonzero pair (a, b) up to sign,
/// stored with its first nonzero coordinate positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FoliationVec {
    a: f64,
    b: f64,
}

impl FoliationVec {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() || (a == 0.0 && b == 0.0) {
            return Err(Error::ZeroFoliation);
        }
        let flip = a < 0.0 || (a == 0.0 && b < 0.0);
        Ok(if flip { Self { a: -a, b: -b } } else { Self { a, b } })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// (1, 0): its extremal length is 1/Im τ.
    pub fn horizontal() -> Self {
        Self { a: 1.0, b: 0.0 }
    }

    /// The perpendicular pair (−b, a); always transverse to `self`.
    pub fn perpendicular(&self) -> Self {
        Self::new(-self.b, self.a).expect("nonzero")
    }
}

/// |a_F b_G − b_F a_G|.
pub fn intersection(f: &FoliationVec, g: &FoliationVec) -> f64 {
    (f.a * g.b - f.b * g.a).abs()
}

/// |a + bτ|² / Im τ.
pub fn extremal_length(tau: HPoint, f: &FoliationVec) -> f64 {
    (f.a + f.b * tau.z()).norm_sqr() / tau.im()
}

/// −a/b, or ∞ when b = 0. Extremal length of F tends to 0 exactly along rays
/// heading here.
pub fn boundary_point(f: &FoliationVec) -> Boundary {
    if f.b == 0.0 {
        Boundary::Infinity
    } else {
        Boundary::Real(-f.a / f.b)
    }
}

/// Differential of Ext(F) at τ applied to v.
pub fn ext_differential(tau: HPoint, v: Complex64, f: &FoliationVec) -> f64 {
    let log_diff = 2.0 * (f.b * v / (f.a + f.b * tau.z())).re - v.im / tau.im();
    extremal_length(tau, f) * log_diff
}

/// ω(v) = −½ d log Ext(F)[v] = −Re(b v / (a + bτ)) + Im v / (2 Im τ).
pub fn omega_form(tau: HPoint, v: Complex64, f: &FoliationVec) -> f64 {
    -(f.b * v / (f.a + f.b * tau.z())).re + 0.5 * v.im / tau.im()
}

/// d(τ₁, τ₂) + (t/2)(log Ext_{τ₁}(F) − log Ext_{τ₂}(F)).
pub fn delta_omega(tau1: HPoint, tau2: HPoint, f: &FoliationVec, t: WeightParam) -> f64 {
    let form = (extremal_length(tau1, f) / extremal_length(tau2, f)).ln();
    hyp_dist(tau1, tau2) + 0.5 * t.value() * form
}

/// λ = (pτ + r)/(bτ + a) with (p, r) = (a, −b)/(a² + b²), so that
/// Ext_τ(F) · Im λ = 1.
pub fn disc_chart(f: &FoliationVec) -> Moebius {
    let n = f.a * f.a + f.b * f.b;
    Moebius::new(f.a / n, -f.b / n, f.b, f.a).expect("determinant is 1 by construction")
}

#[derive(Debug, Clone, Serialize)]
pub struct IsometryReport {
    pub cases: usize,
    pub max_deviation: f64,
}

/// δ^ω against δ_t pulled back through the disc chart, on random pairs.
pub fn isometry_check(f: &FoliationVec, t: WeightParam, pairs: usize, seed: u64) -> IsometryReport {
    let chart = disc_chart(f);
    let mut rng = sampling::rng(seed, 0x6973_6f6d);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..pairs {
        let x = sampling::point(&mut rng);
        let y = sampling::point(&mut rng);
        let lhs = delta_omega(x, y, f, t);
        let rhs = delta_t(chart.apply(x), chart.apply(y), t);
        max_deviation = max_deviation.max((lhs - rhs).abs());
    }
    IsometryReport { cases: pairs, max_deviation }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Bounded,
    Divergent,
    /// Neither test fired; the grid is too short to tell.
    Inconclusive,
}

/// Slope of the least-squares line through the last quarter of δ^ω above
/// which a ray counts as divergent.
pub const DIVERGENT_SLOPE: f64 = 0.05;
/// Oscillation of δ^ω over the last half below which a ray counts as bounded.
pub const BOUNDED_OSCILLATION: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct RayReport {
    pub t_grid: Vec<f64>,
    pub delta_values: Vec<f64>,
    pub decay_values: Vec<f64>,
    pub im_values: Vec<f64>,
    pub verdict: Verdict,
    /// e^{−δ^ω} at the last sample times Ext_x(F)^{1/2}.
    pub limit_estimate: f64,
    /// i(G, F) / Ext_x(G)^{1/2}.
    pub walsh_value: f64,
    /// Largest increase between consecutive decay values (0 when monotone).
    pub max_decay_increase: f64,
    pub intersection: f64,
}

impl RayReport {
    pub fn limit_rel_error(&self) -> f64 {
        if self.walsh_value == 0.0 {
            self.limit_estimate.abs()
        } else {
            (self.limit_estimate - self.walsh_value).abs() / self.walsh_value
        }
    }
}

/// The ray from `x` toward the boundary point of `g`, sampled on
/// `samples` evenly spaced times in [0, t_max], with δ^ω taken at full weight.
pub fn ray_profile(
    x: HPoint,
    g: &FoliationVec,
    f: &FoliationVec,
    t_max: f64,
    samples: usize,
) -> Result<RayReport> {
    if samples < 2 {
        return Err(Error::TooFewSamples(samples));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    let ray = geodesic_ray(x, boundary_point(g));
    let t_grid: Vec<f64> = (0..samples).map(|k| t_max * k as f64 / (samples - 1) as f64).collect();
    let points: Vec<HPoint> = t_grid.iter().map(|&t| ray.at(t)).collect();
    let delta_values: Vec<f64> = points.iter().map(|&p| delta_omega(x, p, f, WeightParam::ONE)).collect();
    let decay_values: Vec<f64> = delta_values.iter().map(|d| (-d).exp()).collect();
    let im_values = points.iter().map(HPoint::im).collect();
    let max_decay_increase =
        decay_values.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let limit_estimate = decay_values[samples - 1] * extremal_length(x, f).sqrt();
    let walsh_value = intersection(g, f) / extremal_length(x, g).sqrt();
    Ok(RayReport {
        verdict: classify(&t_grid, &delta_values),
        t_grid,
        delta_values,
        decay_values,
        im_values,
        limit_estimate,
        walsh_value,
        max_decay_increase,
        intersection: intersection(g, f),
    })
}

fn classify(t: &[f64], delta: &[f64]) -> Verdict {
    let n = t.len();
    let tail = (n / 4).max(2).min(n);
    let slope = ls_slope(&t[n - tail..], &delta[n - tail..]);
    if slope > DIVERGENT_SLOPE {
        return Verdict::Divergent;
    }
    let half = &delta[n / 2..];
    let hi = half.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = half.iter().copied().fold(f64::INFINITY, f64::min);
    if hi - lo < BOUNDED_OSCILLATION {
        Verdict::Bounded
    } else {
        Verdict::Inconclusive
    }
}

fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GardinerReport {
    pub analytic: f64,
    /// (step, finite-difference value)
    pub finite_differences: Vec<(f64, f64)>,
    pub min_abs_error: f64,
    /// Relative to |analytic|, or to the natural scale Ext·|v|/Im τ when the
    /// derivative itself vanishes.
    pub min_rel_error: f64,
}

/// Analytic dExt(F)[v] against central differences. Steps are relative:
/// the displacement is `h · Im τ / |v|`.
pub fn gardiner_check(tau: HPoint, f: &FoliationVec, v: Complex64, steps: &[f64]) -> Result<GardinerReport> {
    if v.norm() == 0.0 {
        return Err(Error::InvalidArgument("direction must be nonzero".into()));
    }
    let analytic = ext_differential(tau, v, f);
    let scale = extremal_length(tau, f) * v.norm() / tau.im();
    let denom = if analytic.abs() > 1e-12 * scale { analytic.abs() } else { scale };
    let mut finite_differences = Vec::with_capacity(steps.len());
    let (mut min_abs, mut min_rel) = (f64::INFINITY, f64::INFINITY);
    for &h in steps {
        let hs = h * tau.im() / v.norm();
        let plus = HPoint::from_complex(tau.z() + v * hs)?;
        let minus = HPoint::from_complex(tau.z() - v * hs)?;
        let fd = (extremal_length(plus, f) - extremal_length(minus, f)) / (2.0 * hs);
        let err = (fd - analytic).abs();
        min_abs = min_abs.min(err);
        min_rel = min_rel.min(err / denom);
        finite_differences.push((h, fd));
    }
    Ok(GardinerReport { analytic, finite_differences, min_abs_error: min_abs, min_rel_error: min_rel })
}

/// d/dt log Ext_{r(t)}(F) by central differences, where r is the unit ray
/// from `x` toward the boundary point of F. The exact value is −2.
pub fn shrink_rate(x: HPoint, f: &FoliationVec, t: f64, h: f64) -> f64 {
    let ray = geodesic_ray(x, boundary_point(f));
    let le = |s: f64| extremal_length(ray.at(s), f).ln();
    (le(t + h) - le(t - h)) / (2.0 * h)
}

#[derive(Debug, Clone, Serialize)]
pub struct IncompletenessWitness {
    /// Foliation whose ray carries the sequence; transverse to F.
    pub g: FoliationVec,
    pub target: Boundary,
    pub times: Vec<f64>,
    pub points: Vec<HPoint>,
    /// sup_{m>0} δ^ω(x_n, x_{n+m}) over the emitted sequence.
    pub tails: Vec<f64>,
    /// L − δ^ω(x, x_n) with L = −log(E(F) / Ext_x(F)^{1/2}).
    pub tail_bounds: Vec<f64>,
    /// max over n of tails[n] − tail_bounds[n] (≤ 0 up to rounding).
    pub bound_excess: f64,
}

/// A forward-Cauchy sequence for δ^ω that leaves every compact set.
///
/// Goes straight down toward Re x when that ray has i(F, G) ≠ 0; otherwise
/// follows the ray toward Re x + Im x, on which Im decreases from the start.
pub fn incompleteness_witness(x: HPoint, f: &FoliationVec, count: usize) -> Result<IncompletenessWitness> {
    if count < 2 {
        return Err(Error::TooFewSamples(count));
    }
    let down = FoliationVec::new(-x.re(), 1.0)?;
    let g = if intersection(f, &down) > 1e-9 * (f.a.hypot(f.b)) * (1.0 + x.re().abs()) {
        down
    } else {
        FoliationVec::new(-(x.re() + x.im()), 1.0)?
    };
    let ray: GeodesicRay = geodesic_ray(x, boundary_point(&g));
    let times: Vec<f64> = (0..count).map(|n| n as f64).collect();
    let points: Vec<HPoint> = times.iter().map(|&t| ray.at(t)).collect();
    let walsh = intersection(&g, f) / extremal_length(x, &g).sqrt();
    let sup = -(walsh / extremal_length(x, f).sqrt()).ln();
    let mut tails = Vec::with_capacity(count);
    let mut tail_bounds = Vec::with_capacity(count);
    for n in 0..count {
        let tail = points[n + 1..]
            .iter()
            .map(|&p| delta_omega(points[n], p, f, WeightParam::ONE))
            .fold(0.0, f64::max);
        tails.push(tail);
        tail_bounds.push(sup - delta_omega(x, points[n], f, WeightParam::ONE));
    }
    let bound_excess = tails
        .iter()
        .zip(&tail_bounds)
        .map(|(t, b)| t - b)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(IncompletenessWitness { g, target: ray.target(), times, points, tails, tail_bounds, bound_excess })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn pt(re: f64, im: f64) -> HPoint {
        HPoint::new(re, im).unwrap()
    }

    fn fol(a: f64, b: f64) -> FoliationVec {
        FoliationVec::new(a, b).unwrap()
    }

    #[test]
    fn canonical_sign() {
        assert_eq!(fol(-1.0, 2.0), fol(1.0, -2.0));
        assert_eq!(fol(0.0, -3.0).b(), 3.0);
        assert_eq!(FoliationVec::new(0.0, 0.0), Err(Error::ZeroFoliation));
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(intersection(&fol(1.0, 0.0), &fol(0.0, 1.0)), 1.0);
        assert_eq!(intersection(&fol(1.0, 2.0), &fol(2.0, 4.0)), 0.0);
        assert_eq!(intersection(&fol(1.0, 2.0), &fol(3.0, 4.0)), 2.0);
    }

    #[test]
    fn extremal_length_examples() {
        assert_eq!(extremal_length(pt(0.0, 1.0), &fol(1.0, 0.0)), 1.0);
        assert_abs_diff_eq!(extremal_length(pt(0.0, 2.0), &fol(0.0, 1.0)), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(extremal_length(pt(0.0, 1.0), &fol(1.0, 1.0)), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn boundary_points() {
        assert_eq!(boundary_point(&fol(1.0, 0.0)), Boundary::Infinity);
        assert_eq!(boundary_point(&fol(0.0, 1.0)), Boundary::Real(0.0));
        assert_eq!(boundary_point(&fol(1.0, 1.0)), Boundary::Real(-1.0));
        let f = fol(1.0, 1.0);
        let ray = geodesic_ray(HPoint::i(), Boundary::Real(-1.0));
        assert!(extremal_length(ray.at(15.0), &f) < 1e-12);
        // and it blows up toward any other boundary point
        let other = geodesic_ray(HPoint::i(), Boundary::Real(2.0));
        assert!(extremal_length(other.at(15.0), &f) > 1e10);
    }

    #[test]
    fn omega_examples() {
        let i = Complex64::i();
        assert_abs_diff_eq!(omega_form(HPoint::i(), i, &FoliationVec::horizontal()), 0.5);
        assert_eq!(omega_form(pt(0.3, 2.0), Complex64::new(1.7, 0.0), &FoliationVec::horizontal()), 0.0);
        // unit vector along the F-shrinking ray
        let f = fol(1.0, 2.0);
        let x = pt(0.4, 0.7);
        let ray = geodesic_ray(x, boundary_point(&f));
        assert_abs_diff_eq!(omega_form(x, ray.velocity(0.0), &f), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn omega_matches_finite_differences() {
        let mut rng = sampling::rng(11, 11);
        for _ in 0..200 {
            let tau = sampling::point(&mut rng);
            let f = sampling::foliation(&mut rng);
            let v = Complex64::new(0.6, -0.8) * tau.im();
            let h = 1e-5;
            let le = |p: Complex64| -0.5 * extremal_length(HPoint::from_complex(p).unwrap(), &f).ln();
            let fd = (le(tau.z() + v * h) - le(tau.z() - v * h)) / (2.0 * h);
            assert_abs_diff_eq!(omega_form(tau, v, &f), fd, epsilon = 1e-7);
        }
    }

    #[test]
    fn delta_omega_examples() {
        let h = FoliationVec::horizontal();
        for s in [0.1f64, 1.0, 5.0] {
            let d = delta_omega(HPoint::i(), pt(0.0, (-2.0 * s).exp()), &h, WeightParam::ONE);
            assert_abs_diff_eq!(d, 0.0, epsilon = 1e-14);
        }
        let p = pt(0.2, 0.3);
        assert_eq!(delta_omega(p, p, &fol(1.0, 3.0), WeightParam::HALF), 0.0);
        let mut rng = sampling::rng(2, 2);
        for _ in 0..10_000 {
            let (x, y) = (sampling::point(&mut rng), sampling::point(&mut rng));
            for t in [WeightParam::ZERO, WeightParam::HALF, WeightParam::ONE] {
                assert_abs_diff_eq!(delta_omega(x, y, &h, t), delta_t(x, y, t), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn chart_examples() {
        assert_eq!(disc_chart(&FoliationVec::horizontal()), Moebius::identity());
        let m = disc_chart(&fol(0.0, 1.0));
        let q = m.apply(pt(2.0, 0.5));
        let expected = -1.0 / Complex64::new(2.0, 0.5);
        assert_abs_diff_eq!(q.re(), expected.re, epsilon = 1e-15);
        assert_abs_diff_eq!(q.im(), expected.im, epsilon = 1e-15);
        assert_abs_diff_eq!(extremal_length(HPoint::i(), &fol(0.0, 1.0)), 1.0);
    }

    #[test]
    fn isometry_examples() {
        for t in [WeightParam::ZERO, WeightParam::HALF, WeightParam::ONE] {
            assert!(isometry_check(&FoliationVec::horizontal(), t, 500, 0).max_deviation <= 1e-12);
        }
        assert!(isometry_check(&fol(1.0, 1.0), WeightParam::ONE, 1000, 0).max_deviation <= 1e-9);
        assert!(isometry_check(&fol(-0.3, 1.7), WeightParam::ZERO, 1000, 1).max_deviation <= 1e-9);
    }

    #[test]
    fn ray_profile_hand_cases() {
        let r = ray_profile(HPoint::i(), &fol(0.0, 1.0), &fol(1.0, 0.0), 20.0, 201).unwrap();
        assert!(r.delta_values.iter().all(|d| d.abs() < 1e-12));
        assert_abs_diff_eq!(r.limit_estimate, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.walsh_value, 1.0, epsilon = 1e-15);
        assert_eq!(r.verdict, Verdict::Bounded);

        let r = ray_profile(HPoint::i(), &fol(1.0, 0.0), &fol(1.0, 0.0), 20.0, 201).unwrap();
        for (t, d) in r.t_grid.iter().zip(&r.delta_values) {
            assert_abs_diff_eq!(*d, 2.0 * t, epsilon = 1e-9);
        }
        assert_eq!(r.verdict, Verdict::Divergent);
        assert_eq!(r.walsh_value, 0.0);

        assert_eq!(
            ray_profile(HPoint::i(), &fol(1.0, 0.0), &fol(1.0, 0.0), 20.0, 1).unwrap_err(),
            Error::TooFewSamples(1)
        );
    }

    #[test]
    fn gardiner_hand_cases() {
        let h = [1e-3, 1e-4, 1e-5, 1e-6];
        let r = gardiner_check(HPoint::i(), &FoliationVec::horizontal(), Complex64::i(), &h).unwrap();
        assert_abs_diff_eq!(r.analytic, -1.0, epsilon = 1e-15);
        assert!(r.min_rel_error < 1e-6);
        let r = gardiner_check(pt(0.5, 2.0), &FoliationVec::horizontal(), Complex64::new(1.0, 0.0), &h).unwrap();
        assert_abs_diff_eq!(r.analytic, 0.0, epsilon = 1e-9);
        assert!(r.min_abs_error < 1e-9);
        assert!(gardiner_check(HPoint::i(), &FoliationVec::horizontal(), Complex64::new(0.0, 0.0), &h).is_err());
    }

    #[test]
    fn shrink_rate_is_minus_two() {
        let mut rng = sampling::rng(4, 4);
        for _ in 0..100 {
            let x = sampling::point(&mut rng);
            let f = sampling::foliation(&mut rng);
            for t in [0.0, 1.0, 5.0] {
                assert_abs_diff_eq!(shrink_rate(x, &f, t, 1e-4), -2.0, epsilon = 1e-7);
            }
        }
    }

    #[test]
    fn vertical_descent_is_free() {
        let w = incompleteness_witness(HPoint::i(), &FoliationVec::horizontal(), 12).unwrap();
        assert_eq!(w.target, Boundary::Real(0.0));
        for (n, p) in w.points.iter().enumerate() {
            assert_abs_diff_eq!(p.im(), (-2.0 * n as f64).exp(), epsilon = 1e-15);
        }
        assert!(w.tails.iter().all(|&t| t.abs() < 1e-12));
        assert!(w.points.windows(2).all(|p| p[1].im() < p[0].im()));
    }

    #[test]
    fn witness_falls_back_when_descent_is_parallel() {
        // F = (0,1) shrinks toward 0 = Re i, so straight down is not transverse.
        let f = fol(0.0, 1.0);
        let w = incompleteness_witness(HPoint::i(), &f, 25).unwrap();
        assert!(intersection(&w.g, &f) > 0.5);
        assert!(w.points.windows(2).all(|p| p[1].im() < p[0].im()));
        assert!(w.points.last().unwrap().im() < 1e-15);
        assert!(w.bound_excess <= 1e-9);
        assert!(*w.tails.last().unwrap() <= 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn intersection_symmetric(a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0) {
            prop_assume!(a.hypot(b) > 1e-3 && c.hypot(d) > 1e-3);
            let (f, g) = (fol(a, b), fol(c, d));
            prop_assert_eq!(intersection(&f, &g), intersection(&g, &f));
            prop_assert_eq!(intersection(&f, &fol(2.0 * a, 2.0 * b)), 0.0);
        }

        #[test]
        fn chart_straightens_extremal_length(
            a in -3.0f64..3.0, b in -3.0f64..3.0, x in -3.0f64..3.0, y in 0.05f64..5.0,
        ) {
            prop_assume!(a.hypot(b) > 0.1);
            let f = fol(a, b);
            let tau = pt(x, y);
            let prod = extremal_length(tau, &f) * disc_chart(&f).apply(tau).im();
            prop_assert!((prod - 1.0).abs() <= 1e-12);
            prop_assert!((extremal_length(tau, &FoliationVec::horizontal()) * y - 1.0).abs() <= 1e-15);
        }

        #[test]
        fn symmetrized_delta_omega_is_teichmuller(
            a in -3.0f64..3.0, b in -3.0f64..3.0,
            x1 in -3.0f64..3.0, y1 in 0.05f64..5.0, x2 in -3.0f64..3.0, y2 in 0.05f64..5.0,
        ) {
            prop_assume!(a.hypot(b) > 0.1);
            let f = fol(a, b);
            let (p, q) = (pt(x1, y1), pt(x2, y2));
            let s = delta_omega(p, q, &f, WeightParam::ONE) + delta_omega(q, p, &f, WeightParam::ONE);
            prop_assert!((s - 2.0 * hyp_dist(p, q)).abs() <= 1e-12);
            prop_assert!(delta_omega(p, q, &f, WeightParam::ONE) >= -1e-12);
        }

        #[test]
        fn transverse_rays_are_bounded(seed in 0u64..1000) {
            let mut rng = sampling::rng(seed, 99);
            let x = sampling::point(&mut rng);
            let (f, g) = sampling::transverse_pair(&mut rng);
            let r = ray_profile(x, &g, &f, 20.0, 401).unwrap();
            prop_assert_eq!(r.verdict, Verdict::Bounded);
            prop_assert!(r.max_decay_increase <= 1e-9);
            prop_assert!(r.limit_rel_error() <= 0.02);
        }
    }
}
