//! Property suites over every module, bundled into serializable reports.
//!
//! Each check records how many cases it ran, the worst violation seen, and
//! the tolerance it is held to. All randomness derives from the suite seed.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfplane::{geodesic, geodesic_ray, hyp_dist, hyp_norm, Boundary, Curve, HPoint, HTangent, Moebius};
use crate::modelspace::{ModelBeltrami, ModelQD, ModelSpace};
use crate::quadrature::GaussLegendre;
use crate::randers::{self, RandersForm, SearchOutcome};
use crate::sampling;
use crate::tolerances::Tolerances;
use crate::torus::{self, FoliationVec, Verdict};
use crate::weakmetric::{self, PerturbedGeodesic, WeightParam};

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Halfplane,
    Weakmetric,
    Torus,
    Modelspace,
    Randers,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Halfplane, Suite::Weakmetric, Suite::Torus, Suite::Modelspace, Suite::Randers];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Halfplane => "halfplane",
            Suite::Weakmetric => "weakmetric",
            Suite::Torus => "torus",
            Suite::Modelspace => "modelspace",
            Suite::Randers => "randers",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `all` or a single suite.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection(pub Vec<Suite>);

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(Selection(Suite::ALL.to_vec()));
        }
        Suite::ALL
            .iter()
            .find(|x| x.name() == s)
            .map(|&x| Selection(vec![x]))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// The claim under test, in words.
    pub anchor: String,
    pub cases: usize,
    pub max_violation: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str, anchor: &str, cases: usize, max_violation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            anchor: anchor.into(),
            cases,
            max_violation,
            tolerance,
            passed: max_violation <= tolerance,
            note: None,
        }
    }

    /// A pass/fail check: the violation is the number of failing cases.
    fn count(name: &str, anchor: &str, cases: usize, failures: usize) -> Self {
        Self::new(name, anchor, cases, failures as f64, 0.0)
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub seed: u64,
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn suite(&self, s: Suite) -> Option<&SuiteReport> {
        self.suites.iter().find(|r| r.suite == s)
    }

    pub fn failures(&self) -> impl Iterator<Item = (Suite, &Check)> {
        self.suites.iter().flat_map(|r| r.checks.iter().filter(|c| !c.passed).map(move |c| (r.suite, c)))
    }
}

pub fn run(selection: &Selection, seed: u64, tol: &Tolerances) -> Result<VerifyReport> {
    tol.validate()?;
    let suites = selection.0.iter().map(|&s| run_suite(s, seed, tol)).collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { schema: SCHEMA, seed, passed: suites.iter().all(|s| s.passed), suites })
}

pub fn run_suite(suite: Suite, seed: u64, tol: &Tolerances) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Halfplane => halfplane_suite(seed, tol)?,
        Suite::Weakmetric => weakmetric_suite(seed, tol)?,
        Suite::Torus => torus_suite(seed, tol)?,
        Suite::Modelspace => modelspace_suite(seed, tol)?,
        Suite::Randers => randers_suite(seed, tol)?,
    };
    Ok(SuiteReport { suite, seed, passed: checks.iter().all(|c| c.passed), checks })
}

fn max_of(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn random_moebius<R: Rng>(rng: &mut R) -> Moebius {
    loop {
        let (a, b, c) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let a: f64 = a;
        if a.abs() > 0.2 {
            // ad − bc = 1
            if let Ok(m) = Moebius::new(a, b, c, (1.0 + b * c) / a) {
                return m;
            }
        }
    }
}

// ---------------------------------------------------------------- halfplane

pub fn halfplane_suite(seed: u64, _tol: &Tolerances) -> Result<Vec<Check>> {
    let mut rng = sampling::rng(seed, 0x6870);
    let n = 1000;
    let (mut endpoint, mut speed, mut invariance, mut triangle, mut ray_speed) = (0f64, 0f64, 0f64, 0f64, 0f64);
    for _ in 0..n {
        let p = sampling::point(&mut rng);
        let q = sampling::point(&mut rng);
        let r = sampling::point(&mut rng);
        let g = geodesic(p, q)?;
        endpoint = endpoint.max(hyp_dist(g.end(), q)).max(hyp_dist(g.start(), p));
        let s = rng.gen_range(0.0..=g.length());
        speed = speed.max((hyp_norm(&HTangent::new(g.point(s), g.velocity(s))) - 1.0).abs());
        let m = random_moebius(&mut rng);
        let d = hyp_dist(p, q);
        invariance = invariance.max((hyp_dist(m.apply(p), m.apply(q)) - d).abs() / (1.0 + d));
        triangle = triangle.max(d - hyp_dist(p, r) - hyp_dist(r, q));
        let target = if rng.gen_bool(0.2) { Boundary::Infinity } else { Boundary::Real(rng.gen_range(-3.0..3.0)) };
        let ray = geodesic_ray(p, target);
        let t = rng.gen_range(0.0..10.0);
        ray_speed = ray_speed.max((hyp_norm(&HTangent::new(ray.at(t), ray.velocity(t))) - 1.0).abs());
    }
    let mut dilatation = 0f64;
    for _ in 0..n {
        let y1: f64 = rng.gen_range(0.05..20.0);
        let y2: f64 = rng.gen_range(0.05..20.0);
        let x = rng.gen_range(-3.0..3.0);
        let d = hyp_dist(HPoint::new(x, y1)?, HPoint::new(x, y2)?);
        dilatation = dilatation.max((d - 0.5 * (y2 / y1).ln().abs()).abs());
    }
    Ok(vec![
        Check::new("geodesic_endpoints", "geodesic segments join their endpoints", n, endpoint, 1e-10),
        Check::new("geodesic_unit_speed", "geodesics are parametrized by arc length", n, speed, 1e-12),
        Check::new("moebius_invariance", "SL(2,R) acts by isometries of the distance", n, invariance, 1e-12),
        Check::new("distance_triangle", "the Teichmüller distance is a metric", n, triangle, 1e-12),
        Check::new("ray_unit_speed", "geodesic rays are parametrized by arc length", n, ray_speed, 1e-12),
        Check::new(
            "teichmuller_distance_dilatation",
            "Teichmüller distance is half the log of the least dilatation",
            n,
            dilatation,
            1e-12,
        ),
    ])
}

// --------------------------------------------------------------- weakmetric

/// `∫ ω(γ')` for ω = −½ d log Ext(F), by composite Gauss–Legendre.
fn omega_integral<C: Curve>(curve: &C, f: &FoliationVec, tol: &Tolerances) -> f64 {
    let rule = GaussLegendre::new(tol.quad_nodes);
    let (a, b) = curve.domain();
    rule.integrate(a, b, tol.quad_panels, |s| torus::omega_form(curve.point(s), curve.velocity(s), f))
}

pub fn weakmetric_suite(seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();

    let mut rng = sampling::rng(seed, 0x0073_7570);
    let n = 10_000;
    let mut sup_dev = 0f64;
    for _ in 0..n {
        let z1 = sampling::point(&mut rng);
        let z2 = sampling::point(&mut rng);
        sup_dev = sup_dev.max((weakmetric::big_m(z1, z2, tol).ln() - weakmetric::delta_closed(z1, z2)).abs());
    }
    checks.push(Check::new(
        "sup_form_vs_closed_form",
        "the weak distance is the log of a supremum and has an explicit closed form",
        n,
        sup_dev,
        1e-7,
    ));

    for (k, t) in [WeightParam::ZERO, WeightParam::HALF, WeightParam::ONE].into_iter().enumerate() {
        let r = weakmetric::weak_axioms_check(n, t, seed.wrapping_add(k as u64));
        checks.push(
            Check::new(
                &format!("weak_axioms_t{}", t.value()),
                "delta_t is a weak metric: zero on the diagonal, nonnegative, triangle inequality",
                r.cases,
                r.max_violation(),
                1e-12,
            )
            .note(format!("{} violating triples", r.violations)),
        );
    }

    let mut rng = sampling::rng(seed, 0x6e73_6570);
    let (mut zero_dev, mut pos_dev) = (0f64, 0f64);
    for _ in 0..n {
        let a: f64 = (rng.gen_range(0.05f64.ln()..20f64.ln())).exp();
        let b: f64 = (rng.gen_range(0.05f64.ln()..20f64.ln())).exp();
        let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
        zero_dev = zero_dev.max(weakmetric::delta_t(HPoint::new(0.0, hi)?, HPoint::new(0.0, lo)?, WeightParam::ONE).abs());
        if hi > lo {
            let d = weakmetric::delta_t(HPoint::new(0.0, lo)?, HPoint::new(0.0, hi)?, WeightParam::ONE);
            pos_dev = pos_dev.max((d - (hi / lo).ln()).abs());
        }
    }
    checks.push(
        Check::new(
            "non_separation",
            "at full weight the weak distance does not separate points on a vertical line",
            n,
            zero_dev.max(pos_dev),
            1e-12,
        )
        .note(
            "delta(y1 i, y2 i) = 0 exactly when y1 >= y2 and log(y2/y1) otherwise; \
             this follows the closed and sup forms, which reverse the inequality stated in prose",
        ),
    );

    let r = weakmetric::symmetrization_check(n, WeightParam::ONE, seed);
    checks.push(Check::new(
        "symmetrization_delta_t",
        "the symmetrization of the weak distance is the hyperbolic distance",
        r.cases,
        r.max_deviation,
        1e-12,
    ));

    let mut rng = sampling::rng(seed, 0x6578_6163);
    let paths = 100;
    let mut exact_dev = 0f64;
    let horizontal = FoliationVec::horizontal();
    for _ in 0..paths {
        let p = sampling::point(&mut rng);
        let q = sampling::point(&mut rng);
        let amp = rng.gen_range(0.05..0.5);
        let path = PerturbedGeodesic::random(geodesic(p, q)?, amp, &mut rng);
        let hyp = weakmetric::path_length(&path, WeightParam::ZERO, tol);
        for t in [WeightParam::HALF, WeightParam::ONE] {
            let excess = weakmetric::path_length(&path, t, tol) - hyp;
            let endpoint = 0.5 * t.value() * (q.im() / p.im()).ln();
            exact_dev = exact_dev.max((excess - endpoint).abs());
        }
        let w = omega_integral(&path, &horizontal, tol);
        exact_dev = exact_dev.max((w - 0.5 * (q.im() / p.im()).ln()).abs());
    }
    checks.push(Check::new(
        "exact_form_identity",
        "for an exact form the weak length minus the hyperbolic length depends only on endpoints",
        paths,
        exact_dev,
        1e-9,
    ));

    let mut rng = sampling::rng(seed, 0x6d69_6e70);
    let (pairs, per) = (8usize, 6usize);
    let (mut baseline, mut nonpositive, mut min_margin) = (0f64, 0usize, f64::INFINITY);
    for j in 0..pairs {
        let p = sampling::point(&mut rng);
        let q = sampling::point(&mut rng);
        for t in [WeightParam::ZERO, WeightParam::HALF, WeightParam::ONE] {
            let r = weakmetric::geodesic_minimality_probe(p, q, t, per, 0.2, seed.wrapping_add(j as u64), tol)?;
            baseline = baseline.max(r.baseline_margin.abs());
            nonpositive += r.margins.iter().filter(|&&m| m <= 0.0).count();
            min_margin = min_margin.min(r.min_margin);
        }
    }
    checks.push(Check::new(
        "geodesic_attains_delta_t",
        "hyperbolic geodesics realize the weak distance",
        pairs * 3,
        baseline,
        1e-9,
    ));
    checks.push(
        Check::count(
            "geodesic_uniqueness_probe",
            "hyperbolic geodesics are the unique weak geodesics",
            pairs * 3 * per,
            nonpositive,
        )
        .note(format!("smallest perturbation margin {min_margin:.3e}")),
    );

    let mut rng = sampling::rng(seed, 0x7261_7973);
    let rays = 20;
    let mut drift = 0f64;
    for _ in 0..rays {
        let x = sampling::point(&mut rng);
        let ray = geodesic_ray(x, Boundary::Real(rng.gen_range(-3.0..3.0)));
        let at = |t: f64| weakmetric::delta_t(x, ray.at(t), WeightParam::ONE);
        let limit = at(30.0);
        drift = drift.max((at(15.0) - limit).abs()).max((at(22.5) - limit).abs());
    }
    checks.push(Check::new(
        "bounded_rays_to_real_axis",
        "geodesic rays tending to a real point have bounded weak length",
        rays,
        drift,
        1e-9,
    ));
    Ok(checks)
}

// -------------------------------------------------------------------- torus

pub fn torus_suite(seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = sampling::rng(seed, 0x746f_7275);
    let foliations: Vec<FoliationVec> = (0..10).map(|_| sampling::foliation(&mut rng)).collect();

    let n = 10_000;
    let mut sym = 0f64;
    for f in &foliations {
        for _ in 0..n / foliations.len() {
            let x = sampling::point(&mut rng);
            let y = sampling::point(&mut rng);
            let s = 0.5
                * (torus::delta_omega(x, y, f, WeightParam::ONE) + torus::delta_omega(y, x, f, WeightParam::ONE));
            sym = sym.max((s - hyp_dist(x, y)).abs());
        }
    }
    checks.push(Check::new(
        "symmetrization_delta_omega",
        "the symmetrization of the torus weak metric is the Teichmüller distance",
        n,
        sym,
        1e-12,
    ));

    let mut iso = 0f64;
    let mut iso_cases = 0;
    for (k, f) in foliations.iter().enumerate() {
        for t in [WeightParam::ZERO, WeightParam::HALF, WeightParam::ONE] {
            let r = torus::isometry_check(f, t, 1000, seed.wrapping_add(k as u64));
            iso = iso.max(r.max_deviation);
            iso_cases += r.cases;
        }
    }
    checks.push(Check::new(
        "disc_isometry",
        "the Teichmüller disc with its induced weak metric is isometric to the weighted half-plane",
        iso_cases,
        iso,
        1e-9,
    ));

    let mut chart = 0f64;
    let mut unit = 0f64;
    for f in &foliations {
        let m = torus::disc_chart(f);
        let inv = m.inverse();
        for _ in 0..100 {
            let tau = sampling::point(&mut rng);
            chart = chart.max((torus::extremal_length(tau, f) * m.apply(tau).im() - 1.0).abs());
            // Push 2i·Im λ ∂/∂λ forward to τ.
            let lambda = sampling::point(&mut rng);
            let at = inv.apply(lambda);
            let v = inv.derivative(lambda) * Complex64::new(0.0, 2.0 * lambda.im());
            let tangent = HTangent::new(at, v);
            unit = unit
                .max((hyp_norm(&tangent) - 1.0).abs())
                .max((torus::omega_form(at, v, f) - 1.0).abs());
        }
    }
    checks.push(Check::new(
        "disc_extremal_length",
        "extremal length of F along its Teichmüller disc is Ext_x(F) divided by Im of the disc parameter",
        foliations.len() * 100,
        chart,
        1e-12,
    ));
    checks.push(Check::new(
        "disc_unit_vector",
        "the vertical unit vector of the disc is the unit direction that shrinks F fastest",
        foliations.len() * 100,
        unit,
        1e-9,
    ));

    let rays = 50;
    let (mut bad_verdicts, mut decay, mut walsh) = (0usize, 0f64, 0f64);
    let mut rng = sampling::rng(seed, 0x7261_7930);
    for _ in 0..rays {
        let x = sampling::point(&mut rng);
        let (f, g) = sampling::transverse_pair(&mut rng);
        let r = torus::ray_profile(x, &g, &f, 20.0, 401)?;
        bad_verdicts += usize::from(r.verdict != Verdict::Bounded);
        decay = decay.max(r.max_decay_increase);
        walsh = walsh.max(r.limit_rel_error());
    }
    checks.push(Check::count(
        "transverse_rays_bounded",
        "a Teichmüller ray transverse to F has bounded weak length",
        rays,
        bad_verdicts,
    ));
    checks.push(Check::new(
        "decay_non_increasing",
        "exp(-delta_omega) along a ray is non-increasing",
        rays,
        decay,
        1e-9,
    ));
    checks.push(Check::new(
        "walsh_limit",
        "the limit of the decay function is i(G,F)/sqrt(Ext_x(G))",
        rays,
        walsh,
        0.02,
    ));

    let (mut parallel, mut parallel_verdicts) = (0f64, 0usize);
    let linear = |r: &torus::RayReport| max_of(r.t_grid.iter().zip(&r.delta_values).map(|(t, d)| (d - 2.0 * t).abs()));
    for f in &foliations {
        let x = sampling::point(&mut rng);
        let r = torus::ray_profile(x, f, f, 20.0, 401)?;
        parallel_verdicts += usize::from(r.verdict != Verdict::Divergent);
        parallel = parallel.max(linear(&torus::ray_profile(x, f, f, 5.0, 101)?));
        let h = FoliationVec::horizontal();
        parallel = parallel.max(linear(&torus::ray_profile(x, &h, &h, 20.0, 401)?));
    }
    checks.push(
        Check::new(
            "parallel_ray_linear",
            "along the ray that shrinks F the weak distance grows at rate two",
            2 * foliations.len(),
            parallel,
            1e-9,
        )
        .note(
            "t in [0, 20] for F = (1,0); t in [0, 5] for F with a real boundary point, \
             past which the ray point is too close to -a/b for a + b tau to be resolved in double precision",
        ),
    );
    checks.push(Check::count(
        "parallel_rays_divergent",
        "a ray with i(F,G) = 0 has unbounded weak length",
        foliations.len(),
        parallel_verdicts,
    ));

    let cases = 100;
    let (mut gardiner, mut omega_fd, mut kerckhoff) = (0f64, 0f64, 0f64);
    for _ in 0..cases {
        let tau = sampling::point(&mut rng);
        let f = sampling::foliation(&mut rng);
        let v = Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)) * tau.im();
        gardiner = gardiner.max(torus::gardiner_check(tau, &f, v, &tol.fd_steps)?.min_rel_error);
        let h = 1e-5 * tau.im();
        let le = |z: Complex64| -> Result<f64> { Ok(torus::extremal_length(HPoint::from_complex(z)?, &f).ln()) };
        let fd = -0.5 * (le(tau.z() + v * h)? - le(tau.z() - v * h)?) / (2.0 * h);
        omega_fd = omega_fd.max((fd - torus::omega_form(tau, v, &f)).abs());
        let t = rng.gen_range(0.5..5.0);
        kerckhoff = kerckhoff.max((torus::shrink_rate(tau, &f, t, 1e-3) + 2.0).abs());
    }
    checks.push(Check::new(
        "gardiner_formula",
        "the first variation of extremal length is given by pairing with the Hubbard–Masur differential",
        cases,
        gardiner,
        1e-6,
    ));
    checks.push(Check::new(
        "omega_is_log_ext_differential",
        "omega is minus one half the differential of log Ext(F)",
        cases,
        omega_fd,
        1e-7,
    ));
    checks.push(Check::new(
        "kerckhoff_rate",
        "log Ext(F) decreases at rate two along the unit ray that shrinks F",
        cases,
        kerckhoff,
        1e-7,
    ));

    let mut normalization = 0f64;
    for _ in 0..cases {
        let tau = sampling::point(&mut rng);
        normalization =
            normalization.max((torus::extremal_length(tau, &FoliationVec::horizontal()) * tau.im() - 1.0).abs());
    }
    checks.push(Check::new(
        "extremal_length_normalization",
        "the extremal length of the a-curve is 1/Im",
        cases,
        normalization,
        1e-14,
    ));

    let mut path_dev = 0f64;
    for f in &foliations {
        for _ in 0..10 {
            let p = sampling::point(&mut rng);
            let q = sampling::point(&mut rng);
            let path = PerturbedGeodesic::random(geodesic(p, q)?, rng.gen_range(0.05..0.5), &mut rng);
            let w = omega_integral(&path, f, tol);
            let exact = 0.5 * (torus::extremal_length(p, f).ln() - torus::extremal_length(q, f).ln());
            path_dev = path_dev.max((w - exact).abs());
        }
    }
    checks.push(Check::new(
        "omega_exact_on_paths",
        "the integral of omega along a path depends only on its endpoints",
        foliations.len() * 10,
        path_dev,
        1e-9,
    ));

    let (mut excess, mut escape) = (0f64, 0f64);
    for f in &foliations {
        let x = sampling::point(&mut rng);
        let w = torus::incompleteness_witness(x, f, 40)?;
        excess = excess.max(w.bound_excess.max(0.0));
        let last = *w.points.last().expect("count >= 2");
        escape = escape.max((hyp_dist(x, last) - 39.0).abs());
    }
    checks.push(Check::new(
        "disc_incomplete",
        "a forward-Cauchy sequence leaves every compact set of the disc",
        foliations.len(),
        excess.max(escape),
        1e-9,
    ));
    Ok(checks)
}

// --------------------------------------------------------------- modelspace

fn random_beltrami<R: Rng>(cells: usize, rng: &mut R) -> ModelBeltrami {
    ModelBeltrami::new(
        (0..cells).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
    )
}

fn random_qd<R: Rng>(k: usize, radius: f64, rng: &mut R) -> ModelQD {
    ModelQD::new((0..k).map(|_| Complex64::new(rng.gen_range(-radius..radius), rng.gen_range(-radius..radius))).collect())
}

/// `(1, w)` with small w; never vanishes on the default k = 2 span.
fn safe_qd<R: Rng>(k: usize, rng: &mut R) -> ModelQD {
    let mut q = random_qd(k, 0.28, rng);
    q.coeffs[0] = Complex64::new(1.0, 0.0);
    q
}

pub fn modelspace_suite(seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = sampling::rng(seed, 0x6d6f_6465);
    let spaces = [ModelSpace::default_with(1), ModelSpace::default_with(2)];

    let (mut brute, mut holder, mut shaped) = (0f64, 0f64, 0f64);
    let mut cases = 0;
    for (j, s) in spaces.iter().enumerate() {
        let mu = random_beltrami(s.cells(), &mut rng);
        let d = s.teich_dual_norm(&mu, tol)?.value;
        let bf = s.brute_force_dual(&mu, 20_000, seed.wrapping_add(j as u64))?;
        brute = brute.max((d - bf).abs() / d);
        for _ in 0..3 {
            let mu = random_beltrami(s.cells(), &mut rng);
            holder = holder.max(s.teich_dual_norm(&mu, tol)?.value - mu.linf_norm());
            let c = rng.gen_range(0.1..2.0);
            let phi = safe_qd(s.dim(), &mut rng);
            let teich = s.teichmuller_beltrami(&phi, c, tol.zero_floor)?;
            shaped = shaped.max((s.teich_dual_norm(&teich, tol)?.value - c).abs());
            cases += 1;
        }
    }
    checks.push(Check::new(
        "dual_norm_vs_brute_force",
        "the infinitesimal Teichmüller metric is the dual of the L1 norm on quadratic differentials",
        spaces.len(),
        brute,
        1e-5,
    ));
    checks.push(Check::new("dual_norm_holder", "the dual norm is bounded by the sup norm", cases, holder.max(0.0), 1e-12));
    checks.push(Check::new(
        "teichmuller_shaped_norm",
        "c conj(q)/|q| has dual norm exactly c",
        cases,
        shaped,
        1e-9,
    ));

    let mut kernel = 0f64;
    for s in &spaces {
        for j in 0..3 {
            let nu = s.kernel_element(seed.wrapping_add(j))?;
            kernel = kernel.max(s.kernel_residual(&nu)? / nu.linf_norm()).max(s.teich_dual_norm(&nu, tol)?.value);
        }
    }
    checks.push(Check::new(
        "kernel_is_null",
        "Beltrami differentials annihilating every quadratic differential have zero norm",
        spaces.len() * 3,
        kernel,
        1e-12,
    ));

    let (mut rel, mut zero) = (0f64, 0f64);
    let mut n = 0;
    for s in &spaces {
        for beta in [0.5, 1.3] {
            let v0 = safe_qd(s.dim(), &mut rng);
            let v = random_beltrami(s.cells(), &mut rng);
            rel = rel.max(s.derivative_check(&v0, beta, &v, tol)?.min_rel_error);
            let alpha = v0.scale(Complex64::new(1.0 / s.l1_norm(&v0)?, 0.0));
            let along = s.teichmuller_beltrami(&alpha, 1.0, tol.zero_floor)?;
            rel = rel.max(s.derivative_check(&v0, beta, &along, tol)?.min_rel_error);
            let nu = s.kernel_element(seed.wrapping_add(n))?;
            zero = zero.max(s.derivative_check(&v0, beta, &nu, tol)?.min_abs_error);
            n += 1;
        }
    }
    checks.push(Check::new(
        "derivative_lemma",
        "the derivative of the Teichmüller norm at c conj(a)/|a| in direction v is Re<v, a>",
        2 * n as usize,
        rel,
        1e-4,
    ));
    checks.push(Check::new(
        "derivative_lemma_kernel",
        "the derivative of the Teichmüller norm vanishes in kernel directions",
        n as usize,
        zero,
        1e-6,
    ));
    Ok(checks)
}

// ------------------------------------------------------------------ randers

pub fn randers_suite(seed: u64, tol: &Tolerances) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let mut rng = sampling::rng(seed, 0x7261_6e64);
    let s1 = ModelSpace::default_with(1);
    let s2 = ModelSpace::default_with(2);

    // β: inequality, kernel invariance, extremality predicates.
    let phi0 = random_qd(2, 0.6, &mut rng);
    let mut instances: Vec<(&str, ModelBeltrami)> = Vec::new();
    for c in [0.3, 1.0, 2.0] {
        instances.push(("teichmuller", s2.teichmuller_beltrami(&safe_qd(2, &mut rng), c, tol.zero_floor)?));
    }
    for j in 0..2 {
        instances.push(("kernel", s2.kernel_element(seed.wrapping_add(100 + j))?));
    }
    let base = s2.teichmuller_beltrami(&safe_qd(2, &mut rng), 1.0, tol.zero_floor)?;
    instances.push(("scaled", base.scale(0.25)));
    instances.push(("scaled", base.scale(4.0)));
    instances.push(("teichmuller_plus_kernel", base.axpy(0.3, &s2.kernel_element(seed.wrapping_add(7))?)));
    instances.push(("generic", random_beltrami(s2.cells(), &mut rng)));

    let (mut ineq, mut disagree, mut b_contradicts) = (0f64, 0usize, 0usize);
    let mut labels = Vec::new();
    for (j, (label, mu)) in instances.iter().enumerate() {
        let r = randers::extremality_equivalence_check(&s2, mu, &phi0, 4, seed.wrapping_add(j as u64), tol)?;
        ineq = ineq.max(r.beta - r.beta_bound);
        disagree += usize::from(!r.predicates_agree());
        if r.hamilton_condition && r.teichmuller_extremal == SearchOutcome::Contradicted {
            b_contradicts += 1;
        }
        labels.push(format!("{label}:{}", if r.hamilton_condition { "extremal" } else { "not extremal" }));
    }
    checks.push(Check::new(
        "beta_upper_bound",
        "beta(mu, phi0) is at most ||mu||_inf + Re<mu, phi0>",
        instances.len(),
        ineq.max(0.0),
        1e-9,
    ));
    checks.push(
        Check::count(
            "extremality_a_iff_c",
            "phi0-extremality of beta is equivalent to the Hamilton condition",
            instances.len(),
            disagree,
        )
        .note(labels.join(", ")),
    );
    checks.push(
        Check::count(
            "extremality_b_not_contradicted",
            "Hamilton-extremal Beltrami differentials admit no better kernel competitor",
            instances.len(),
            b_contradicts,
        )
        .note("search-based: a pass means not contradicted"),
    );

    let mu = &instances[0].1;
    let r = randers::beta_invariance_check(&s2, mu, &phi0, 20, 1.0, seed, tol)?;
    checks.push(Check::new(
        "beta_kernel_invariance",
        "beta is constant on cosets of the kernel",
        r.trials,
        r.max_deviation,
        1e-7,
    ));
    let r = randers::beta_invariance_check(&s2, mu, &phi0, 5, 10.0, seed.wrapping_add(1), tol)?;
    checks.push(Check::new(
        "beta_kernel_invariance_large",
        "beta is constant on cosets of the kernel",
        r.trials,
        r.max_deviation,
        1e-6,
    ));

    let mu = random_beltrami(s2.cells(), &mut rng);
    let b = randers::beta(&s2, &mu, &phi0, tol)?;
    let bf = randers::beta_brute_force(&s2, &mu, &phi0, 10_000, seed)?;
    checks.push(Check::new(
        "beta_vs_brute_force",
        "beta is a supremum of |<mu, phi>| over unit quadratic differentials, shifted by Re<mu, phi0>",
        1,
        (b - bf).abs() / b.abs().max(1e-3),
        1e-5,
    ));

    // Randers norm.
    let q = ModelQD::basis(1, 0, Complex64::new(1.0, 0.0));
    let mut analytic = 0f64;
    for sv in [0.1, 0.5, 0.9] {
        let form = RandersForm::new(&s1, q.scale(Complex64::new(sv, 0.0)))?;
        let mu = s1.teichmuller_beltrami(&q, 1.0, tol.zero_floor)?;
        analytic = analytic
            .max((randers::randers_norm(&s1, &mu, &form, tol)? - (1.0 + sv)).abs())
            .max((randers::randers_norm(&s1, &mu.scale(-1.0), &form, tol)? - (1.0 - sv)).abs());
    }
    checks.push(Check::new(
        "randers_norm_one_dim",
        "the Randers norm is the Teichmüller norm plus the 1-form",
        3,
        analytic,
        1e-12,
    ));

    let psi = random_qd(2, 1.0, &mut rng);
    let psi = psi.scale(Complex64::new(1.0 / s2.l1_norm(&psi)?, 0.0));
    let unit_form = RandersForm::new(&s2, psi.clone())?;
    let null = s2.teichmuller_beltrami(&psi, -1.0, tol.zero_floor)?;
    checks.push(
        Check::new(
            "unit_form_degenerate",
            "with a unit 1-form the Randers norm vanishes on a nonzero direction",
            1,
            randers::randers_norm(&s2, &null, &unit_form, tol)?.abs(),
            1e-8,
        )
        .note("mu = -conj(psi)/|psi|"),
    );

    // Cometric.
    let mut exact = 0f64;
    for sv in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let form = RandersForm::new(&s1, q.scale(Complex64::new(sv, 0.0)))?;
        exact = exact.max((randers::cometric(&s1, &q, &form, tol)?.g_omega - 1.0 / (1.0 + sv)).abs());
    }
    checks.push(Check::new(
        "cometric_one_dim",
        "in one dimension the cometric of q against psi = s q is 1/(1+s)",
        5,
        exact,
        1e-10,
    ));

    let s4 = ModelSpace::default_with(4);
    let (mut residual, mut zero_form, mut stability, mut half_line) = (0f64, 0f64, 0f64, 0usize);
    let mut cases = 0;
    for s in [&s1, &s2, &s4] {
        for _ in 0..4 {
            let psi = random_qd(s.dim(), 1.0, &mut rng);
            let target = rng.gen_range(0.05..0.95);
            let psi = psi.scale(Complex64::new(target / s.l1_norm(&psi)?, 0.0));
            let form = RandersForm::new(s, psi)?;
            let phi = random_qd(s.dim(), 1.0, &mut rng);
            let g = randers::cometric(s, &phi, &form, tol)?;
            residual = residual.max(g.boundary_residual);
            let alt = randers::cometric_in_bracket(s, &phi, &form, 0.5 * g.g_omega, 4.0 * g.g_omega, tol)?;
            stability = stability.max((alt.g_omega - g.g_omega).abs() / g.g_omega);
            half_line += usize::from(!randers::feasible_set_is_half_line(s, &phi, &form, 4.0 * g.g_omega, 400)?);
            let g0 = randers::cometric(s, &phi, &RandersForm::zero(s), tol)?.g_omega;
            zero_form = zero_form.max((g0 - s.l1_norm(&phi)?).abs() / g0);
            cases += 1;
        }
    }
    checks.push(Check::new(
        "cometric_boundary_residual",
        "the cometric G solves ||phi/G - psi||_1 = 1",
        cases,
        residual,
        1e-9,
    ));
    checks.push(Check::new(
        "cometric_bracket_stability",
        "the cometric is the unique root of its defining equation",
        cases,
        stability,
        1e-10,
    ));
    checks.push(Check::count(
        "cometric_feasible_half_line",
        "the feasible set of the cometric infimum is a right half-line",
        cases,
        half_line,
    ));
    checks.push(Check::new(
        "cometric_zero_form",
        "with a zero 1-form the cometric is the L1 norm",
        cases,
        zero_form,
        1e-10,
    ));

    let mut dual = 0f64;
    let mut dual_cases = 0;
    let form1 = RandersForm::new(&s1, q.scale(Complex64::new(0.5, 0.0)))?;
    dual = dual.max(randers::cometric_dual_check(&s1, &q, &form1, 2000, seed, tol)?.rel_err);
    dual_cases += 1;
    for j in 0..2u64 {
        let psi = random_qd(2, 1.0, &mut rng);
        let psi = psi.scale(Complex64::new(rng.gen_range(0.1..0.7) / s2.l1_norm(&psi)?, 0.0));
        let form = RandersForm::new(&s2, psi)?;
        let phi = random_qd(2, 1.0, &mut rng);
        dual = dual.max(randers::cometric_dual_check(&s2, &phi, &form, 4000, seed.wrapping_add(j), tol)?.rel_err);
        dual_cases += 1;
    }
    let phi = random_qd(2, 1.0, &mut rng);
    dual = dual.max(randers::cometric_dual_check(&s2, &phi, &RandersForm::zero(&s2), 4000, seed, tol)?.rel_err);
    dual_cases += 1;
    checks.push(Check::new(
        "cometric_is_dual",
        "the cometric is the dual norm of the Randers norm",
        dual_cases,
        dual,
        1e-5,
    ));

    let mut accepted = 0;
    for norm in [1.0 + 1e-9, 1.2, 3.0] {
        let psi = q.scale(Complex64::new(norm / s1.l1_norm(&q)?, 0.0));
        let form = RandersForm::new(&s1, psi)?;
        if !matches!(randers::cometric(&s1, &q, &form, tol), Err(Error::CometricUndefined(_))) {
            accepted += 1;
        }
    }
    checks.push(Check::count(
        "cometric_rejects_unit_forms",
        "the cometric is only defined for 1-forms of norm below one",
        3,
        accepted,
    ));
    Ok(checks)
}
