//! Randers deformation of the Teichmüller norm on the model space: the
//! functional β, the extremality predicates, and the cometric G_ω.
//!
//! A 1-form is represented by ψ in the span through `ω(μ) = Re⟨μ, ψ⟩`, so
//! its Teichmüller co-norm is `‖ψ‖₁`.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modelspace::{sphere_search, DualNorm, ModelBeltrami, ModelQD, ModelSpace};
use crate::sampling;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RandersForm {
    psi: ModelQD,
    psi_norm: f64,
}

impl RandersForm {
    pub fn new(space: &ModelSpace, psi: ModelQD) -> Result<Self> {
        let psi_norm = space.l1_norm(&psi)?;
        Ok(Self { psi, psi_norm })
    }

    pub fn zero(space: &ModelSpace) -> Self {
        Self { psi: ModelQD::new(vec![Complex64::new(0.0, 0.0); space.dim()]), psi_norm: 0.0 }
    }

    pub fn psi(&self) -> &ModelQD {
        &self.psi
    }

    /// ‖ψ‖₁, the co-norm of ω.
    pub fn norm(&self) -> f64 {
        self.psi_norm
    }

    fn require_subunit(&self) -> Result<()> {
        if self.psi_norm < 1.0 {
            Ok(())
        } else {
            Err(Error::CometricUndefined(self.psi_norm))
        }
    }
}

/// `κ(μ) + Re⟨μ, ψ⟩`.
pub fn randers_norm(space: &ModelSpace, mu: &ModelBeltrami, form: &RandersForm, tol: &Tolerances) -> Result<f64> {
    Ok(space.teich_dual_norm(mu, tol)?.value + space.pairing(mu, &form.psi)?.re)
}

/// `sup { |⟨μ, φ⟩| : ‖φ‖₁ ≤ 1 }`.
///
/// The span is closed under multiplication by phases, so the modulus sup is
/// the sup over phases of the real-part sup, which is the Teichmüller norm.
pub fn hamilton_value(space: &ModelSpace, mu: &ModelBeltrami, tol: &Tolerances) -> Result<DualNorm> {
    space.teich_dual_norm(mu, tol)
}

/// `β(μ, φ₀) = sup { |⟨μ, φ⟩| + Re⟨μ, φ₀⟩ : ‖φ‖₁ = 1 }`.
pub fn beta(space: &ModelSpace, mu: &ModelBeltrami, phi0: &ModelQD, tol: &Tolerances) -> Result<f64> {
    Ok(hamilton_value(space, mu, tol)?.value + space.pairing(mu, phi0)?.re)
}

/// β by random search over the unit sphere of coefficients, evaluating the
/// modulus objective directly. Independent of the Newton solver.
pub fn beta_brute_force(
    space: &ModelSpace,
    mu: &ModelBeltrami,
    phi0: &ModelQD,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let shift = space.pairing(mu, phi0)?.re;
    let k = space.dim();
    let objective = |x: &[f64]| -> f64 {
        let phi = ModelQD::new(x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect());
        let n = space.l1_norm(&phi).unwrap_or(0.0);
        if n == 0.0 {
            return f64::NEG_INFINITY;
        }
        space.pairing(mu, &phi).map(|p| p.norm() / n).unwrap_or(f64::NEG_INFINITY)
    };
    Ok(sphere_search(2 * k, samples, seed, objective) + shift)
}

/// ‖β(μ, φ₀) upper bound: `‖μ‖∞ + Re⟨μ, φ₀⟩`.
pub fn beta_upper_bound(space: &ModelSpace, mu: &ModelBeltrami, phi0: &ModelQD) -> Result<f64> {
    Ok(mu.linf_norm() + space.pairing(mu, phi0)?.re)
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub trials: usize,
    pub base: f64,
    pub max_deviation: f64,
}

/// β(μ + ν, φ₀) against β(μ, φ₀) for seeded kernel elements ν rescaled to
/// `amplitude · ‖μ‖∞` in sup norm.
pub fn beta_invariance_check(
    space: &ModelSpace,
    mu: &ModelBeltrami,
    phi0: &ModelQD,
    trials: usize,
    amplitude: f64,
    seed: u64,
    tol: &Tolerances,
) -> Result<InvarianceReport> {
    let base = beta(space, mu, phi0, tol)?;
    let target = amplitude * mu.linf_norm().max(f64::MIN_POSITIVE);
    let mut max_deviation: f64 = 0.0;
    for trial in 0..trials {
        let nu = space.kernel_element(seed.wrapping_add(trial as u64))?;
        let nu = nu.scale(target / nu.linf_norm());
        let moved = beta(space, &mu.axpy(1.0, &nu), phi0, tol)?;
        max_deviation = max_deviation.max((moved - base).abs());
    }
    Ok(InvarianceReport { trials, base, max_deviation })
}

/// Outcome of a search that can refute but never confirm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    NotContradicted,
    Contradicted,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtremalityReport {
    pub linf: f64,
    pub hamilton: f64,
    pub beta: f64,
    pub beta_bound: f64,
    /// β(μ, φ₀) = ‖μ‖∞ + Re⟨μ, φ₀⟩
    pub phi0_extremal: bool,
    /// sup |⟨μ, φ⟩| = ‖μ‖∞
    pub hamilton_condition: bool,
    /// No kernel element found that lowers ‖μ − ν‖∞.
    pub teichmuller_extremal: SearchOutcome,
    /// min ‖μ − ν‖∞ seen in the search
    pub best_competitor: f64,
}

impl ExtremalityReport {
    pub fn predicates_agree(&self) -> bool {
        self.phi0_extremal == self.hamilton_condition
    }
}

pub const EXTREMALITY_TOL: f64 = 1e-6;

/// Evaluates the three extremality predicates. The third is a search over the
/// kernel part of μ and seeded kernel elements at several scales.
pub fn extremality_equivalence_check(
    space: &ModelSpace,
    mu: &ModelBeltrami,
    phi0: &ModelQD,
    search: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<ExtremalityReport> {
    let linf = mu.linf_norm();
    let hamilton = hamilton_value(space, mu, tol)?.value;
    let shift = space.pairing(mu, phi0)?.re;
    let beta = hamilton + shift;
    let beta_bound = linf + shift;
    let phi0_extremal = (beta_bound - beta).abs() <= EXTREMALITY_TOL;
    let hamilton_condition = (linf - hamilton).abs() <= EXTREMALITY_TOL;

    let mut candidates = vec![space.kernel_part(mu)];
    for j in 0..search {
        candidates.push(space.kernel_element(seed.wrapping_add(j as u64))?);
    }
    let scales = [1.0, 0.5, 0.1, 0.01, -0.01, -0.1, -0.5, -1.0];
    let mut best_competitor = linf;
    for nu in &candidates {
        for s in scales {
            let trial = mu.axpy(-s, nu).linf_norm();
            best_competitor = best_competitor.min(trial);
        }
    }
    let teichmuller_extremal = if best_competitor >= linf - EXTREMALITY_TOL {
        SearchOutcome::NotContradicted
    } else {
        SearchOutcome::Contradicted
    };
    Ok(ExtremalityReport {
        linf,
        hamilton,
        beta,
        beta_bound,
        phi0_extremal,
        hamilton_condition,
        teichmuller_extremal,
        best_competitor,
    })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct CometricValue {
    pub g_omega: f64,
    /// |‖φ/G − ψ‖₁ − 1|, zero for φ = 0 by convention
    pub boundary_residual: f64,
}

/// `G_ω(φ) = inf { t > 0 : ‖φ/t − ψ‖₁ ≤ 1 }` by bisection.
///
/// With s = 1/t, `‖sφ − ψ‖₁` is convex, below 1 at s = 0 and unbounded, so the
/// feasible set is a right half-line `[G, ∞)` and
/// `[‖φ‖₁/(1 + ‖ψ‖₁), ‖φ‖₁/(1 − ‖ψ‖₁)]` brackets G.
pub fn cometric(space: &ModelSpace, phi: &ModelQD, form: &RandersForm, tol: &Tolerances) -> Result<CometricValue> {
    form.require_subunit()?;
    let n = space.l1_norm(phi)?;
    if n == 0.0 {
        return Ok(CometricValue { g_omega: 0.0, boundary_residual: 0.0 });
    }
    let lo = n / (1.0 + form.psi_norm);
    let hi = n / (1.0 - form.psi_norm);
    bisect(space, phi, form, lo, hi, tol)
}

/// Same root, from a caller-chosen bracket (which must contain it).
pub fn cometric_in_bracket(
    space: &ModelSpace,
    phi: &ModelQD,
    form: &RandersForm,
    lo: f64,
    hi: f64,
    tol: &Tolerances,
) -> Result<CometricValue> {
    form.require_subunit()?;
    let excess = |t: f64| -> Result<f64> { Ok(boundary_norm(space, phi, form, t)? - 1.0) };
    if !(lo > 0.0 && hi > lo) || excess(lo)? < 0.0 || excess(hi)? > 0.0 {
        return Err(Error::InvalidArgument(format!("[{lo}, {hi}] does not bracket the cometric")));
    }
    bisect(space, phi, form, lo, hi, tol)
}

fn bisect(
    space: &ModelSpace,
    phi: &ModelQD,
    form: &RandersForm,
    mut lo: f64,
    mut hi: f64,
    tol: &Tolerances,
) -> Result<CometricValue> {
    let excess = |t: f64| -> Result<f64> { Ok(boundary_norm(space, phi, form, t)? - 1.0) };
    while hi - lo > tol.bisect_rel_tol * lo {
        let mid = 0.5 * (lo + hi);
        if excess(mid)? <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let g_omega = 0.5 * (lo + hi);
    Ok(CometricValue { g_omega, boundary_residual: excess(g_omega)?.abs() })
}

/// `‖φ/t − ψ‖₁`.
pub fn boundary_norm(space: &ModelSpace, phi: &ModelQD, form: &RandersForm, t: f64) -> Result<f64> {
    let shifted = phi.scale(Complex64::new(1.0 / t, 0.0)).add(&form.psi.scale(Complex64::new(-1.0, 0.0)));
    space.l1_norm(&shifted)
}

/// Checks on a scan of t that the feasible set `{‖φ/t − ψ‖₁ ≤ 1}` is a right
/// half-line: once feasible, every larger t stays feasible.
pub fn feasible_set_is_half_line(
    space: &ModelSpace,
    phi: &ModelQD,
    form: &RandersForm,
    t_max: f64,
    points: usize,
) -> Result<bool> {
    let mut seen_feasible = false;
    for j in 1..=points {
        let t = t_max * j as f64 / points as f64;
        let feasible = boundary_norm(space, phi, form, t)? <= 1.0;
        if seen_feasible && !feasible {
            return Ok(false);
        }
        seen_feasible |= feasible;
    }
    Ok(true)
}

#[derive(Debug, Clone, Serialize)]
pub struct CometricDualReport {
    pub g_omega: f64,
    pub dual_estimate: f64,
    pub rel_err: f64,
}

/// Estimates `sup Re⟨μ, φ⟩ / κ^ω(μ)` by sampling.
///
/// Teichmüller-shaped `μ = conj(α)/|α|` have κ(μ) = 1 exactly (Hölder's
/// equality case), so their ratio is `Re⟨μ, φ⟩ / (1 + Re⟨μ, ψ⟩)` with no
/// solver involved; the best direction α is then refined by pattern search.
/// A handful of unstructured random μ, normed with the solver, are mixed in.
pub fn cometric_dual_check(
    space: &ModelSpace,
    phi: &ModelQD,
    form: &RandersForm,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<CometricDualReport> {
    let g_omega = cometric(space, phi, form, tol)?.g_omega;
    let floor = tol.zero_floor;
    let teich_ratio = |x: &[f64]| -> f64 {
        let alpha = ModelQD::new(x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect());
        let Ok(mu) = space.teichmuller_beltrami(&alpha, 1.0, floor) else {
            return f64::NEG_INFINITY;
        };
        if mu.linf_norm() == 0.0 {
            return f64::NEG_INFINITY;
        }
        let num = space.pairing(&mu, phi).map(|p| p.re).unwrap_or(f64::NEG_INFINITY);
        let den = 1.0 + space.pairing(&mu, &form.psi).map(|p| p.re).unwrap_or(0.0);
        num / den
    };
    let mut estimate = sphere_search(2 * space.dim(), samples, seed, teich_ratio);

    let mut rng = sampling::rng(seed, 0x636f_6d65);
    for _ in 0..4 {
        let mu = ModelBeltrami::new(
            (0..space.cells()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        );
        let den = randers_norm(space, &mu, form, tol)?;
        if den > 0.0 {
            estimate = estimate.max(space.pairing(&mu, phi)?.re / den);
        }
    }
    let rel_err = if g_omega > 0.0 { (estimate - g_omega).abs() / g_omega } else { estimate.abs() };
    Ok(CometricDualReport { g_omega, dual_estimate: estimate, rel_err })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn one_dim() -> (ModelSpace, ModelQD) {
        let s = ModelSpace::default_with(1);
        let q = ModelQD::basis(1, 0, c(1.0, 0.0));
        (s, q)
    }

    #[test]
    fn randers_norm_one_dim() {
        let (s, q) = one_dim();
        let mu = s.teichmuller_beltrami(&q, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(
            randers_norm(&s, &mu, &RandersForm::zero(&s), &tol()).unwrap(),
            s.teich_dual_norm(&mu, &tol()).unwrap().value
        );
        let sv = 0.4;
        let form = RandersForm::new(&s, q.scale(c(sv, 0.0))).unwrap();
        assert_abs_diff_eq!(randers_norm(&s, &mu, &form, &tol()).unwrap(), 1.0 + sv, epsilon = 1e-12);
        assert_abs_diff_eq!(randers_norm(&s, &mu.scale(-1.0), &form, &tol()).unwrap(), 1.0 - sv, epsilon = 1e-12);
    }

    #[test]
    fn unit_form_has_null_direction() {
        let s = ModelSpace::default_with(2);
        let psi = ModelQD::new(vec![c(0.6, 0.2), c(0.1, -0.3)]);
        let psi = psi.scale(c(1.0 / s.l1_norm(&psi).unwrap(), 0.0));
        let form = RandersForm::new(&s, psi.clone()).unwrap();
        let mu = s.teichmuller_beltrami(&psi, -1.0, 1e-12).unwrap();
        assert!(mu.linf_norm() > 0.0);
        assert!(randers_norm(&s, &mu, &form, &tol()).unwrap().abs() <= 1e-8);
        let over = RandersForm::new(&s, psi.scale(c(1.0 + 1e-9, 0.0))).unwrap();
        assert!(matches!(cometric(&s, &psi, &over, &tol()), Err(Error::CometricUndefined(_))));
    }

    #[test]
    fn beta_examples() {
        let (s, q) = one_dim();
        for (cv, w) in [(1.0, c(0.5, 0.2)), (0.3, c(-0.4, 1.0))] {
            let mu = s.teichmuller_beltrami(&q, cv, 1e-12).unwrap();
            let b = beta(&s, &mu, &q.scale(w), &tol()).unwrap();
            assert_abs_diff_eq!(b, cv + cv * w.re, epsilon = 1e-12);
            assert_abs_diff_eq!(b, beta_upper_bound(&s, &mu, &q.scale(w)).unwrap(), epsilon = 1e-12);
        }
        let s2 = ModelSpace::default_with(2);
        let nu = s2.kernel_element(1).unwrap();
        let phi0 = ModelQD::new(vec![c(0.2, 0.1), c(-0.5, 0.3)]);
        assert_abs_diff_eq!(beta(&s2, &nu, &phi0, &tol()).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn beta_matches_brute_force() {
        let s = ModelSpace::default_with(2);
        let mut rng = sampling::rng(6, 6);
        let mu = ModelBeltrami::new((0..4096).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect());
        let phi0 = ModelQD::new(vec![c(0.2, 0.1), c(-0.5, 0.3)]);
        let b = beta(&s, &mu, &phi0, &tol()).unwrap();
        let bf = beta_brute_force(&s, &mu, &phi0, 20_000, 0).unwrap();
        assert!((b - bf).abs() <= 1e-5 * b.abs().max(1e-3), "{b} vs {bf}");
        assert!(b <= beta_upper_bound(&s, &mu, &phi0).unwrap() + 1e-9);
    }

    #[test]
    fn beta_ignores_kernel() {
        let s = ModelSpace::default_with(2);
        let mu = s.teichmuller_beltrami(&ModelQD::new(vec![c(1.0, 0.0), c(0.2, 0.4)]), 1.0, 1e-12).unwrap();
        let phi0 = ModelQD::new(vec![c(0.3, 0.0), c(0.0, 0.2)]);
        let r = beta_invariance_check(&s, &mu, &phi0, 0, 1.0, 0, &tol()).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        let r = beta_invariance_check(&s, &mu, &phi0, 5, 1.0, 0, &tol()).unwrap();
        assert!(r.max_deviation <= 1e-7, "{r:?}");
        let r = beta_invariance_check(&s, &mu, &phi0, 3, 10.0, 7, &tol()).unwrap();
        assert!(r.max_deviation <= 1e-6, "{r:?}");
    }

    #[test]
    fn extremality_cases() {
        let s = ModelSpace::default_with(2);
        let q = ModelQD::new(vec![c(1.0, 0.0), c(0.3, -0.2)]);
        let phi0 = ModelQD::new(vec![c(0.1, 0.2), c(0.4, 0.0)]);
        for cv in [1.0, 0.3] {
            let mu = s.teichmuller_beltrami(&q, cv, 1e-12).unwrap();
            let r = extremality_equivalence_check(&s, &mu, &phi0, 4, 0, &tol()).unwrap();
            assert!(r.phi0_extremal && r.hamilton_condition, "{r:?}");
            assert_eq!(r.teichmuller_extremal, SearchOutcome::NotContradicted);
        }
        let nu = s.kernel_element(2).unwrap();
        let r = extremality_equivalence_check(&s, &nu, &phi0, 4, 0, &tol()).unwrap();
        assert!(!r.phi0_extremal && !r.hamilton_condition);
        assert_eq!(r.teichmuller_extremal, SearchOutcome::Contradicted);
        assert!(r.hamilton < r.linf);
    }

    #[test]
    fn generic_beltrami_misses_hamilton() {
        let s = ModelSpace::default_with(2);
        let mut rng = sampling::rng(8, 8);
        let mu = ModelBeltrami::new((0..4096).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect());
        let h = hamilton_value(&s, &mu, &tol()).unwrap().value;
        assert!(h < mu.linf_norm() - 0.1);
    }

    #[test]
    fn cometric_examples() {
        let (s, q) = one_dim();
        let phi = q.scale(c(2.5, -1.0));
        let g = cometric(&s, &phi, &RandersForm::zero(&s), &tol()).unwrap();
        assert!((g.g_omega - s.l1_norm(&phi).unwrap()).abs() <= 1e-10 * g.g_omega);
        assert_eq!(cometric(&s, &ModelQD::new(vec![c(0.0, 0.0)]), &RandersForm::zero(&s), &tol()).unwrap().g_omega, 0.0);
        for sv in [0.1, 0.5, 0.9] {
            let form = RandersForm::new(&s, q.scale(c(sv, 0.0))).unwrap();
            let g = cometric(&s, &q, &form, &tol()).unwrap();
            assert_abs_diff_eq!(g.g_omega, 1.0 / (1.0 + sv), epsilon = 1e-10);
            assert!(g.boundary_residual <= 1e-9);
        }
        let form = RandersForm::new(&s, q.scale(c(1.2, 0.0))).unwrap();
        assert_eq!(cometric(&s, &q, &form, &tol()).unwrap_err(), Error::CometricUndefined(form.norm()));
    }

    #[test]
    fn cometric_is_bracket_stable_and_half_line() {
        let s = ModelSpace::default_with(2);
        let psi = ModelQD::new(vec![c(0.3, 0.1), c(-0.1, 0.2)]);
        let form = RandersForm::new(&s, psi).unwrap();
        assert!(form.norm() < 1.0);
        let phi = ModelQD::new(vec![c(0.7, -0.4), c(0.5, 0.5)]);
        let a = cometric(&s, &phi, &form, &tol()).unwrap();
        let b = cometric_in_bracket(&s, &phi, &form, 0.5 * a.g_omega, 3.0 * a.g_omega, &tol()).unwrap();
        assert!((a.g_omega - b.g_omega).abs() <= 1e-10 * a.g_omega);
        assert!(feasible_set_is_half_line(&s, &phi, &form, 5.0 * a.g_omega, 500).unwrap());
        assert!(cometric_in_bracket(&s, &phi, &form, 2.0 * a.g_omega, 3.0 * a.g_omega, &tol()).is_err());
    }

    #[test]
    fn dual_check_one_dim() {
        let (s, q) = one_dim();
        let form = RandersForm::new(&s, q.scale(c(0.5, 0.0))).unwrap();
        let r = cometric_dual_check(&s, &q, &form, 2000, 0, &tol()).unwrap();
        assert_abs_diff_eq!(r.dual_estimate, 2.0 / 3.0, epsilon = 1e-6);
        let phi = q.scale(c(0.3, 0.8));
        let r = cometric_dual_check(&s, &phi, &RandersForm::zero(&s), 2000, 0, &tol()).unwrap();
        assert!((r.dual_estimate - s.l1_norm(&phi).unwrap()).abs() <= 1e-5 * r.dual_estimate);
    }
}
