//! A finite-dimensional stand-in for the infinitesimal theory at a point of
//! Teichmüller space.
//!
//! The "surface" is a grid on the unit square with midpoint weights.
//! Quadratic differentials are the complex span of `k` fixed grid functions,
//! normed by L¹; Beltrami differentials are arbitrary grid functions, normed
//! by L∞. The pairing is `∫ μ φ`, and the Teichmüller norm of μ is the dual
//! norm `sup { Re ∫ μ φ : ‖φ‖₁ = 1 }` over the span.
//!
//! Nothing here is holomorphic. Every identity checked against this model is
//! one that holds in any normed pairing of this shape.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling;
use crate::tolerances::Tolerances;

/// Coefficients over the basis of a [`ModelSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModelQD {
    pub coeffs: Vec<Complex64>,
}

impl ModelQD {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// `scale` times the j-th basis function.
    pub fn basis(k: usize, j: usize, scale: Complex64) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k];
        coeffs[j] = scale;
        Self { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &ModelQD) -> Self {
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }
}

/// One complex value per grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ModelBeltrami {
    pub values: Vec<Complex64>,
}

impl ModelBeltrami {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn zeros(n: usize) -> Self {
        Self { values: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn linf_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { values: self.values.iter().map(|v| v * s).collect() }
    }

    /// `self + s · other`
    pub fn axpy(&self, s: f64, other: &ModelBeltrami) -> Self {
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + b * s).collect() }
    }
}

pub fn linf_norm(mu: &ModelBeltrami) -> f64 {
    mu.linf_norm()
}

/// One factor of a basis function.
#[derive(Debug, Clone, PartialEq)]
enum Factor {
    Const(f64),
    /// c0 + cx·x + cy·y + cxy·x·y
    Poly([f64; 4]),
    /// exp(2πi (kx·x + ky·y))
    Phase(f64, f64),
}

/// A basis function given symbolically as a `*`-separated product of
/// `poly(c0[,cx[,cy[,cxy]]])`, `phase(kx,ky)`, and real constants, e.g.
/// `poly(1,0.5)*phase(1,1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    text: String,
    factors: Vec<Factor>,
}

impl BasisSpec {
    pub fn eval(&self, x: f64, y: f64) -> Complex64 {
        self.factors.iter().fold(Complex64::new(1.0, 0.0), |acc, f| {
            acc * match *f {
                Factor::Const(c) => Complex64::new(c, 0.0),
                Factor::Poly([c0, cx, cy, cxy]) => Complex64::new(c0 + cx * x + cy * y + cxy * x * y, 0.0),
                Factor::Phase(kx, ky) => Complex64::from_polar(1.0, 2.0 * PI * (kx * x + ky * y)),
            }
        })
    }
}

impl fmt::Display for BasisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

impl FromStr for BasisSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = |why: &str| Error::Parse(format!("basis spec {s:?}: {why}"));
        if text.is_empty() {
            return Err(bad("empty"));
        }
        let mut factors = Vec::new();
        for part in text.split('*') {
            if let Ok(c) = part.parse::<f64>() {
                if !c.is_finite() {
                    return Err(bad("non-finite constant"));
                }
                factors.push(Factor::Const(c));
                continue;
            }
            let (name, args) = part
                .strip_suffix(')')
                .and_then(|p| p.split_once('('))
                .ok_or_else(|| bad("expected name(args)"))?;
            let nums: Vec<f64> = args
                .split(',')
                .map(|a| a.parse::<f64>().ok().filter(|v| v.is_finite()))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("bad number"))?;
            match name {
                "poly" if (1..=4).contains(&nums.len()) => {
                    let mut c = [0.0; 4];
                    c[..nums.len()].copy_from_slice(&nums);
                    factors.push(Factor::Poly(c));
                }
                "phase" if nums.len() == 2 => factors.push(Factor::Phase(nums[0], nums[1])),
                _ => return Err(bad("unknown factor or wrong arity")),
            }
        }
        Ok(Self { text, factors })
    }
}

/// Symbolic description of a model space, as read from JSON:
/// `{"grid": {"nx": 64, "ny": 64}, "basis": ["1", ...], "seed": 0}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceDescription {
    pub grid: GridSize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSize {
    pub nx: usize,
    pub ny: usize,
}

/// Default bases: each function is nonvanishing on the unit square.
pub const DEFAULT_BASIS: [&str; 4] =
    ["1", "poly(1,0.5)*phase(1,1)", "poly(1,0,0.5)*phase(-1,2)", "poly(2,-1,0,0.5)*phase(2,-1)"];

impl SpaceDescription {
    /// 64×64 grid with the first `k` default basis functions.
    pub fn default_with(k: usize) -> Self {
        Self {
            grid: GridSize { nx: 64, ny: 64 },
            basis: DEFAULT_BASIS[..k.clamp(1, DEFAULT_BASIS.len())].iter().map(|s| s.to_string()).collect(),
            seed: 0,
        }
    }
}

/// Above this the Gram matrix is treated as singular.
pub const MAX_GRAM_CONDITION: f64 = 1e12;

#[derive(Debug, Clone)]
pub struct ModelSpace {
    weights: Vec<f64>,
    /// `basis[j][n]` is the j-th basis function on cell n.
    basis: Vec<Vec<Complex64>>,
    basis_l1: Vec<f64>,
    gram_condition: f64,
    labels: Vec<String>,
}

impl ModelSpace {
    /// Arbitrary positive weights and basis values.
    pub fn from_values(weights: Vec<f64>, basis: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = weights.len();
        if basis.is_empty() {
            return Err(Error::InvalidArgument("basis must be nonempty".into()));
        }
        if n == 0 || weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument("weights must be positive".into()));
        }
        for b in &basis {
            if b.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: b.len() });
            }
        }
        let k = basis.len();
        let gram = DMatrix::from_fn(k, k, |i, j| {
            basis[i].iter().zip(&basis[j]).zip(&weights).map(|((a, b), w)| a.conj() * b * *w).sum::<Complex64>()
        });
        let sv = gram.singular_values();
        let (smax, smin) = (sv.max(), sv.min());
        let gram_condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(gram_condition < MAX_GRAM_CONDITION) {
            return Err(Error::DegenerateBasis(gram_condition));
        }
        let basis_l1 =
            basis.iter().map(|b| b.iter().zip(&weights).map(|(v, w)| w * v.norm()).sum()).collect();
        let labels = (0..k).map(|j| format!("b{j}")).collect();
        Ok(Self { weights, basis, basis_l1, gram_condition, labels })
    }

    /// Midpoint grid on the unit square with symbolic basis functions.
    pub fn from_description(desc: &SpaceDescription) -> Result<Self> {
        let GridSize { nx, ny } = desc.grid;
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidArgument("grid must be nonempty".into()));
        }
        let specs: Vec<BasisSpec> = desc.basis.iter().map(|s| s.parse()).collect::<Result<_>>()?;
        let cell = 1.0 / (nx * ny) as f64;
        let centers: Vec<(f64, f64)> = (0..ny)
            .flat_map(|j| (0..nx).map(move |i| ((i as f64 + 0.5) / nx as f64, (j as f64 + 0.5) / ny as f64)))
            .collect();
        let basis = specs.iter().map(|s| centers.iter().map(|&(x, y)| s.eval(x, y)).collect()).collect();
        let mut space = Self::from_values(vec![cell; nx * ny], basis)?;
        space.labels = specs.iter().map(ToString::to_string).collect();
        Ok(space)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let desc: SpaceDescription =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("model space: {e}")))?;
        Self::from_description(&desc)
    }

    /// 64×64 grid, first `k` default basis functions.
    pub fn default_with(k: usize) -> Self {
        Self::from_description(&SpaceDescription::default_with(k)).expect("default basis is valid")
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn cells(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn gram_condition(&self) -> f64 {
        self.gram_condition
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// L¹ norm of the j-th basis function.
    pub fn basis_l1(&self, j: usize) -> f64 {
        self.basis_l1[j]
    }

    fn check_qd(&self, phi: &ModelQD) -> Result<()> {
        if phi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: phi.dim() });
        }
        Ok(())
    }

    fn check_beltrami(&self, mu: &ModelBeltrami) -> Result<()> {
        if mu.values.len() != self.cells() {
            return Err(Error::DimensionMismatch { expected: self.cells(), got: mu.values.len() });
        }
        Ok(())
    }

    /// Pointwise values of φ.
    pub fn values(&self, phi: &ModelQD) -> Result<Vec<Complex64>> {
        self.check_qd(phi)?;
        Ok(self.values_unchecked(&phi.coeffs))
    }

    fn values_unchecked(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.cells()];
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.norm() == 0.0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(b) {
                *o += c * v;
            }
        }
        out
    }

    /// `Σ w |φ|`.
    pub fn l1_norm(&self, phi: &ModelQD) -> Result<f64> {
        self.check_qd(phi)?;
        Ok(self.l1_unchecked(&phi.coeffs))
    }

    fn l1_unchecked(&self, coeffs: &[Complex64]) -> f64 {
        self.values_unchecked(coeffs).iter().zip(&self.weights).map(|(v, w)| w * v.norm()).sum()
    }

    /// `Σ w μ φ` (complex bilinear, no conjugation).
    pub fn pairing(&self, mu: &ModelBeltrami, phi: &ModelQD) -> Result<Complex64> {
        self.check_beltrami(mu)?;
        self.check_qd(phi)?;
        Ok(self.functional(mu).iter().zip(&phi.coeffs).map(|(m, c)| m * c).sum())
    }

    /// `m_j = ⟨μ, b_j⟩`: μ as a linear functional on the span.
    fn functional(&self, mu: &ModelBeltrami) -> Vec<Complex64> {
        self.basis
            .iter()
            .map(|b| b.iter().zip(&mu.values).zip(&self.weights).map(|((bv, m), w)| bv * m * *w).sum())
            .collect()
    }

    /// `c · conj(φ)/|φ|`, set to 0 on cells where |φ| < floor · max|φ|.
    pub fn teichmuller_beltrami(&self, phi: &ModelQD, c: f64, floor: f64) -> Result<ModelBeltrami> {
        let vals = self.values(phi)?;
        let max = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(ModelBeltrami {
            values: vals
                .iter()
                .map(|v| {
                    let r = v.norm();
                    if r <= floor * max || r == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        v.conj() * (c / r)
                    }
                })
                .collect(),
        })
    }

    /// The Teichmüller norm of μ: `sup { Re⟨μ, φ⟩ : ‖φ‖₁ = 1 }` over the span.
    pub fn teich_dual_norm(&self, mu: &ModelBeltrami, tol: &Tolerances) -> Result<DualNorm> {
        self.check_beltrami(mu)?;
        Ok(self.dual_of_functional(&self.functional(mu), tol))
    }

    fn dual_of_functional(&self, m: &[Complex64], tol: &Tolerances) -> DualNorm {
        let k = self.dim();
        let scale = m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if scale == 0.0 {
            let unit = ModelQD::basis(k, 0, Complex64::new(1.0 / self.basis_l1[0], 0.0));
            return DualNorm { value: 0.0, maximizer: unit };
        }
        if k == 1 {
            // |m| / ‖b‖₁, attained at conj(m)/|m| · b/‖b‖₁.
            let b1 = self.basis_l1[0];
            let c = m[0].conj() / (m[0].norm() * b1);
            return DualNorm { value: m[0].norm() / b1, maximizer: ModelQD::new(vec![c]) };
        }
        // Work with the unit functional; the value scales back linearly.
        let g: Vec<f64> = m.iter().flat_map(|c| [c.re / scale, -c.im / scale]).collect();
        let solver = DualSolver { space: self, g: &g, floor: tol.zero_floor };
        let mut rng = ChaCha8Rng::seed_from_u64(0x6475_616c);
        let mut best: Option<(f64, Vec<f64>)> = None;
        for start in 0..tol.dual_starts.max(1) {
            let x0: Vec<f64> = if start == 0 {
                g.clone()
            } else {
                (0..2 * k).map(|_| rng.gen_range(-1.0..1.0)).collect()
            };
            let x = solver.maximize(x0, tol.dual_tol);
            let value = solver.ratio(&x);
            if best.as_ref().is_none_or(|(v, _)| value > *v) {
                best = Some((value, x));
            }
        }
        let (value, x) = best.expect("at least one start");
        let n = solver.norm(&x);
        let maximizer = ModelQD::new(to_complex(&x).iter().map(|c| c / n).collect());
        DualNorm { value: value * scale, maximizer }
    }

    /// Value of `sup Re⟨μ, φ⟩ / ‖φ‖₁` by random directions on the coefficient
    /// sphere followed by a shrinking pattern search. Shares nothing with the
    /// Newton solver behind [`Self::teich_dual_norm`]; used as its cross-check.
    pub fn brute_force_dual(&self, mu: &ModelBeltrami, samples: usize, seed: u64) -> Result<f64> {
        self.check_beltrami(mu)?;
        let m = self.functional(mu);
        let objective = |x: &[f64]| -> f64 {
            let c = to_complex(x);
            let n = self.l1_unchecked(&c);
            if n == 0.0 {
                return f64::NEG_INFINITY;
            }
            c.iter().zip(&m).map(|(c, m)| (c * m).re).sum::<f64>() / n
        };
        Ok(sphere_search(2 * self.dim(), samples, seed, objective))
    }

    /// A nonzero ν with `⟨ν, b_j⟩ = 0` for every basis function: a seeded random
    /// grid function with its pairing components projected out.
    pub fn kernel_element(&self, seed: u64) -> Result<ModelBeltrami> {
        if self.cells() <= self.dim() {
            return Err(Error::GridTooSmall { cells: self.cells(), dim: self.dim() });
        }
        let mut rng = sampling::rng(seed, 0x6b65_726e);
        let r = ModelBeltrami::new(
            (0..self.cells()).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect(),
        );
        Ok(self.kernel_part(&r))
    }

    /// Orthogonal projection (in the plain Hermitian inner product on grid
    /// values) onto the subspace annihilating the span.
    pub fn kernel_part(&self, mu: &ModelBeltrami) -> ModelBeltrami {
        let n = self.cells();
        let k = self.dim();
        // Constraint j reads ⟨conj(w b_j), ν⟩_H = 0.
        let a = DMatrix::from_fn(n, k, |r, c| (self.basis[c][r] * self.weights[r]).conj());
        let q = a.qr().q();
        let mut v = DVector::from_column_slice(&mu.values);
        // Two passes keep the residual at rounding level.
        for _ in 0..2 {
            let coef = q.adjoint() * &v;
            v -= &q * coef;
        }
        ModelBeltrami::new(v.iter().copied().collect())
    }

    /// Largest |⟨ν, b_j⟩| over the basis.
    pub fn kernel_residual(&self, nu: &ModelBeltrami) -> Result<f64> {
        self.check_beltrami(nu)?;
        Ok(self.functional(nu).iter().map(|c| c.norm()).fold(0.0, f64::max))
    }

    /// Finite differences of the Teichmüller norm at `β·conj(α₀)/|α₀|`,
    /// `α₀ = v0/‖v0‖₁`, in direction `v`, against `Re⟨v, α₀⟩`.
    pub fn derivative_check(
        &self,
        v0: &ModelQD,
        beta: f64,
        v: &ModelBeltrami,
        tol: &Tolerances,
    ) -> Result<DerivativeReport> {
        self.check_beltrami(v)?;
        if !(beta > 0.0) {
            return Err(Error::InvalidArgument(format!("beta must be positive, got {beta}")));
        }
        let n0 = self.l1_norm(v0)?;
        if n0 == 0.0 {
            return Err(Error::VanishingDifferential);
        }
        let alpha0 = v0.scale(Complex64::new(1.0 / n0, 0.0));
        let vals = self.values(&alpha0)?;
        let max = vals.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if vals.iter().any(|z| z.norm() <= tol.zero_floor * max) {
            return Err(Error::VanishingDifferential);
        }
        let mu0 = self.teichmuller_beltrami(&alpha0, beta, tol.zero_floor)?;
        let expected = self.pairing(v, &alpha0)?.re;
        let vnorm = v.linf_norm();
        let mut finite_differences = Vec::new();
        let (mut min_abs, mut min_rel) = (f64::INFINITY, f64::INFINITY);
        for &h in &tol.fd_steps {
            // Relative step: displacement h·β in sup norm.
            let hs = if vnorm > 0.0 { h * beta / vnorm } else { h };
            let plus = self.teich_dual_norm(&mu0.axpy(hs, v), tol)?.value;
            let minus = self.teich_dual_norm(&mu0.axpy(-hs, v), tol)?.value;
            let fd = (plus - minus) / (2.0 * hs);
            let err = (fd - expected).abs();
            min_abs = min_abs.min(err);
            if expected.abs() > 0.0 {
                min_rel = min_rel.min(err / expected.abs());
            }
            finite_differences.push((h, fd));
        }
        Ok(DerivativeReport { expected, finite_differences, min_abs_error: min_abs, min_rel_error: min_rel })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DualNorm {
    pub value: f64,
    /// Unit-L¹ element attaining the value.
    pub maximizer: ModelQD,
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivativeReport {
    /// `Re⟨v, α₀⟩`
    pub expected: f64,
    /// (relative step, central difference)
    pub finite_differences: Vec<(f64, f64)>,
    pub min_abs_error: f64,
    /// infinite when `expected` is exactly zero
    pub min_rel_error: f64,
}

fn to_complex(x: &[f64]) -> Vec<Complex64> {
    x.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect()
}

/// Maximizes `gᵀx − ½ N(x)²` over real coefficient vectors. The objective is
/// concave, and at its maximizer `N(x)` equals the dual norm of g.
struct DualSolver<'a> {
    space: &'a ModelSpace,
    g: &'a [f64],
    floor: f64,
}

impl DualSolver<'_> {
    fn norm(&self, x: &[f64]) -> f64 {
        self.space.l1_unchecked(&to_complex(x))
    }

    fn ratio(&self, x: &[f64]) -> f64 {
        let n = self.norm(x);
        if n == 0.0 {
            return f64::NEG_INFINITY;
        }
        x.iter().zip(self.g).map(|(a, b)| a * b).sum::<f64>() / n
    }

    fn objective(&self, x: &[f64]) -> f64 {
        let n = self.norm(x);
        x.iter().zip(self.g).map(|(a, b)| a * b).sum::<f64>() - 0.5 * n * n
    }

    /// N, ∇N, and ∇²N at x.
    fn derivatives(&self, x: &[f64]) -> (f64, DVector<f64>, DMatrix<f64>) {
        let d = x.len();
        let k = d / 2;
        let coeffs = to_complex(x);
        let vals = self.space.values_unchecked(&coeffs);
        let max = vals.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let cap = (self.floor * max).max(1e-8 * max);
        let mut n = 0.0;
        let mut grad = DVector::zeros(d);
        let mut hess = DMatrix::zeros(d, d);
        let mut row0 = vec![0.0; d];
        let mut row1 = vec![0.0; d];
        for (cell, (phi, w)) in vals.iter().zip(&self.space.weights).enumerate() {
            let r = phi.norm();
            n += w * r;
            if r <= self.floor * max || r == 0.0 {
                continue;
            }
            for j in 0..k {
                let b = self.space.basis[j][cell];
                row0[2 * j] = b.re;
                row0[2 * j + 1] = -b.im;
                row1[2 * j] = b.im;
                row1[2 * j + 1] = b.re;
            }
            let (u0, u1) = (phi.re / r, phi.im / r);
            // I − uuᵀ = ppᵀ with p = (−u1, u0); curvature 1/|φ|, capped near zeros.
            let curv = w / r.max(cap);
            for a in 0..d {
                grad[a] += w * (row0[a] * u0 + row1[a] * u1);
                let pa = -u1 * row0[a] + u0 * row1[a];
                for b in 0..=a {
                    let pb = -u1 * row0[b] + u0 * row1[b];
                    hess[(a, b)] += curv * pa * pb;
                }
            }
        }
        for a in 0..d {
            for b in 0..a {
                hess[(b, a)] = hess[(a, b)];
            }
        }
        (n, grad, hess)
    }

    fn maximize(&self, mut x: Vec<f64>, tol: f64) -> Vec<f64> {
        let d = x.len();
        let g = DVector::from_column_slice(self.g);
        let mut f = self.objective(&x);
        for _ in 0..200 {
            let (n, gn, hn) = self.derivatives(&x);
            let grad = &g - &gn * n;
            if grad.norm() <= tol {
                break;
            }
            // Negated Hessian of the objective: ∇N∇Nᵀ + N∇²N (positive semidefinite).
            let mut h = &gn * gn.transpose() + hn * n;
            let ridge = 1e-14 * (1.0 + h.diagonal().amax());
            for a in 0..d {
                h[(a, a)] += ridge;
            }
            let step = h.cholesky().map(|c| c.solve(&grad)).unwrap_or_else(|| grad.clone());
            let slope = grad.dot(&step);
            // Newton decrement: predicted gain is slope/2.
            if slope <= 1e-26 * (1.0 + f.abs()) {
                break;
            }
            let mut alpha = 1.0;
            let mut accepted = false;
            while alpha > 1e-12 {
                let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + alpha * s).collect();
                let ft = self.objective(&trial);
                if ft >= f + 1e-4 * alpha * slope && ft > f {
                    x = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        x
    }
}

/// Maximizes a scale-invariant objective on the sphere in ℝ^d: uniform random
/// directions, then coordinate pattern search around the best one with a
/// shrinking radius.
pub(crate) fn sphere_search<F: Fn(&[f64]) -> f64>(d: usize, samples: usize, seed: u64, objective: F) -> f64 {
    let mut rng = sampling::rng(seed, 0x6272_7574);
    let mut best_x = vec![0.0; d];
    best_x[0] = 1.0;
    let mut best = objective(&best_x);
    for _ in 0..samples {
        let x: Vec<f64> = (0..d).map(|_| gaussian(&mut rng)).collect();
        let v = objective(&x);
        if v > best {
            best = v;
            best_x = x;
        }
    }
    let norm = best_x.iter().map(|a| a * a).sum::<f64>().sqrt();
    best_x.iter_mut().for_each(|a| *a /= norm);
    let mut radius = 0.1;
    while radius > 1e-9 {
        let mut improved = false;
        for a in 0..d {
            for sign in [1.0, -1.0] {
                let mut trial = best_x.clone();
                trial[a] += sign * radius;
                let v = objective(&trial);
                if v > best {
                    best = v;
                    best_x = trial;
                    improved = true;
                }
            }
        }
        if !improved {
            radius *= 0.5;
        }
    }
    best
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    // Box–Muller
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}
