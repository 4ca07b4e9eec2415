//! The regularized-integral engine.
//!
//! A slowly increasing invariant function phi has a regularizing kernel
//! `a(t, phi) = int_0^1 phi(x + it) dx` whose large-t asymptotic is a finite
//! exponent sum `f(t) = sum_i (c_i / n_i!) t^(1/2 + alpha_i) log^(n_i) t`.
//! With `h_T` the incomplete Mellin transform of `f` and
//! `R(s, phi) = int_0^inf (a - f) t^(s - 1/2) dt/t`,
//! `R*(s) = L(1+2s) R(s)` satisfies, for every truncation height T,
//!
//! ```text
//! R*(s) + L(1+2s) h_T(s) + L(1-2s) h_T(-s)
//!   = <phi, trunc_T E*(s)> + L(1+2s) I+(s) + L(1-2s) I-(s)
//! ```
//!
//! with `I±(s) = int_T^inf (a - f) t^(±s - 1/2) dt/t`. The engine evaluates
//! the right-hand side pointwise in s (the truncated pairing by quadrature
//! over the fundamental domain, the tails by Gauss-Legendre, `h_T` in closed
//! form), recovers `R*` jets by Cauchy contours over those point values, and
//! from the jet at s = 1/2 the regularized integral
//!
//! ```text
//! reg-int(phi) = (Res_{s=1/2} R(s, phi) + sum_i c_i [alpha_i = -1/2, n_i = 0])
//!                / lambda^(-1)(0).
//! ```

use std::collections::HashMap;
use std::rc::Rc;

use num_complex::Complex64;

use crate::eisenstein::{delta_square_y12, EisSpec, Evaluator, Point};
use crate::error::{Error, Result};
use crate::jet::{Jet, ONE, ZERO};
use crate::scalars::{lambda_jet, lambda_jet_at, m_scalar, m_scalar_jet};
use crate::special::lambda_complete;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

const ALPHA_HALF: Complex64 = Complex64::new(-0.5, 0.0);

/// One asymptotic term `(c / n!) t^(1/2 + alpha) log^n t`.
#[derive(Clone, Copy, Debug)]
pub struct ProfileTerm {
    pub c: Complex64,
    pub alpha: Complex64,
    pub n: u32,
}

/// Declared asymptotic of a regularizing kernel; an empty list means rapid
/// decay.
#[derive(Clone, Debug, Default)]
pub struct ExponentProfile {
    terms: Vec<ProfileTerm>,
}

impl ExponentProfile {
    pub fn empty() -> Self {
        ExponentProfile { terms: Vec::new() }
    }

    /// Merge terms with identical (alpha, n); drop exact zeros.
    pub fn new(terms: Vec<ProfileTerm>) -> Self {
        let mut merged: Vec<ProfileTerm> = Vec::new();
        for t in terms {
            if let Some(existing) = merged
                .iter_mut()
                .find(|e| e.n == t.n && e.alpha == t.alpha)
            {
                existing.c += t.c;
            } else {
                merged.push(t);
            }
        }
        merged.retain(|t| t.c.norm() > 0.0);
        ExponentProfile { terms: merged }
    }

    pub fn terms(&self) -> &[ProfileTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// f(t) = sum (c/n!) t^(1/2+alpha) log^n t.
    pub fn f_value(&self, t: f64) -> Complex64 {
        let lt = t.ln();
        let mut acc = ZERO;
        for term in &self.terms {
            let mut fact = 1.0;
            for k in 1..=term.n {
                fact *= k as f64;
            }
            acc += term.c / fact
                * ((term.alpha + 0.5) * lt).exp()
                * lt.powi(term.n as i32);
        }
        acc
    }

    /// Degenerate part of the regularized integral: the exact-equality test
    /// `alpha = -1/2, n = 0` on the declared data (tolerance-free, the
    /// profile being analytic input).
    pub fn degenerate_sum(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.n == 0 && t.alpha == ALPHA_HALF)
            .map(|t| t.c)
            .sum()
    }

    pub fn max_re_alpha(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.alpha.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Poles that R*(s, phi) may acquire: s = ±1/2 and s = ±alpha_i.
    pub fn r_star_poles(&self) -> Vec<Complex64> {
        let mut poles = vec![c64(0.5), c64(-0.5)];
        for t in &self.terms {
            poles.push(t.alpha);
            poles.push(-t.alpha);
        }
        poles
    }
}

/// A sampleable invariant function on the upper half-plane together with its
/// declared exponent profile.
#[derive(Clone)]
pub struct AutomorphicFn {
    pub name: String,
    sampler: Rc<dyn Fn(Point) -> Result<Complex64>>,
    pub profile: ExponentProfile,
}

impl AutomorphicFn {
    /// The sampler is spot-checked for invariance under z -> z + 1.
    pub fn new(
        name: impl Into<String>,
        sampler: Rc<dyn Fn(Point) -> Result<Complex64>>,
        profile: ExponentProfile,
    ) -> Result<Self> {
        for &(x, y) in &[(0.137, 1.21), (-0.4, 0.83)] {
            let a = sampler(Point::new(x, y)?)?;
            let b = sampler(Point::new(x + 1.0, y)?)?;
            if (a - b).norm() > 1e-8 * (1.0 + a.norm()) {
                return Err(Error::InvalidInput(format!(
                    "sampler is not 1-periodic in x: {a} vs {b}"
                )));
            }
        }
        Ok(AutomorphicFn {
            name: name.into(),
            sampler,
            profile,
        })
    }

    pub fn sample(&self, z: Point) -> Result<Complex64> {
        (self.sampler)(z)
    }

    /// Pointwise linear combination a*f + b*g with the merged profile.
    pub fn combine(a: Complex64, f: &AutomorphicFn, b: Complex64, g: &AutomorphicFn) -> Result<Self> {
        let (fs, gs) = (f.sampler.clone(), g.sampler.clone());
        let mut terms: Vec<ProfileTerm> = f
            .profile
            .terms()
            .iter()
            .map(|t| ProfileTerm { c: a * t.c, ..*t })
            .collect();
        terms.extend(g.profile.terms().iter().map(|t| ProfileTerm { c: b * t.c, ..*t }));
        AutomorphicFn::new(
            format!("{}*{} + {}*{}", a, f.name, b, g.name),
            Rc::new(move |z| Ok(a * fs(z)? + b * gs(z)?)),
            ExponentProfile::new(terms),
        )
    }
}

/// Quadrature parameters of the engine.
#[derive(Clone, Copy, Debug)]
pub struct QuadratureSpec {
    /// Base number of x-samples of the periodic trapezoid (raised near t -> 0).
    pub x_points: usize,
    /// Gauss-Legendre nodes for each unit-length t-panel of the tail integrals.
    pub t_points: usize,
    pub t_min: f64,
    pub t_max: f64,
    /// Length (in units of height) of the decaying tail window.
    pub tail_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            x_points: 64,
            t_points: 16,
            t_min: 0.5,
            t_max: 12.0,
            tail_order: 8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min < 1.0 && 1.0 < self.t_max) {
            return Err(Error::InvalidConfig(format!(
                "need t_min < 1 < t_max, got ({}, {})",
                self.t_min, self.t_max
            )));
        }
        Ok(())
    }
}

/// Regularizing kernel `a(t, phi) = int_0^1 phi(x + it) dx` by the periodic
/// trapezoid rule, with the sample count raised at small heights so that the
/// aliasing error stays at the Fourier tail of phi.
pub fn kernel_a(phi: &AutomorphicFn, t: f64, quad: &QuadratureSpec) -> Result<Complex64> {
    let n = quad.x_points.max((40.0 / t).ceil() as usize);
    let mut acc = ZERO;
    for j in 0..n {
        let x = j as f64 / n as f64;
        acc += phi.sample(Point::new(x, t)?)?;
    }
    Ok(acc / n as f64)
}

/// Closed form
/// `h_T(s) = sum_i c_i sum_{m=0}^{n_i} ((-1)^(n_i - m) / m!) T^(s+alpha_i) log^m T / (s+alpha_i)^(n_i-m+1)`.
pub fn h_t_point(profile: &ExponentProfile, s: Complex64, t: f64) -> Result<Complex64> {
    let lt = t.ln();
    let mut acc = ZERO;
    for term in profile.terms() {
        let w = s + term.alpha;
        if w.norm() < 1e-9 {
            return Err(Error::NearPole {
                pole: -term.alpha,
                dist: w.norm(),
            });
        }
        let t_pow = (w * lt).exp();
        let mut fact_m = 1.0;
        for m in 0..=term.n {
            if m > 0 {
                fact_m *= m as f64;
            }
            let sign = if (term.n - m) % 2 == 0 { 1.0 } else { -1.0 };
            acc += term.c * sign / fact_m * t_pow * lt.powi(m as i32)
                / w.powi((term.n - m + 1) as i32);
        }
    }
    Ok(acc)
}

/// Jet of h_T at `s0`; anchors at the poles `s0 = -alpha_i` are admissible
/// (the factor (s + alpha_i) becomes an exact monomial there).
pub fn h_t_jet(profile: &ExponentProfile, s0: Complex64, k_max: i32, t: f64) -> Jet {
    let lt = t.ln();
    let mut deepest = -1i32;
    for term in profile.terms() {
        deepest = deepest.min(-(term.n as i32 + 1));
    }
    let mut acc = Jet::new(s0, deepest, vec![ZERO; (k_max - deepest + 1) as usize]);
    for term in profile.terms() {
        let w0 = s0 + term.alpha;
        let order = k_max + term.n as i32 + 1;
        let t_pow = Jet::exponential(s0, (w0 * lt).exp(), c64(lt), order);
        // (s + alpha)^{-1} as a jet at s0
        let inv = if w0.norm() < 1e-9 {
            Jet::monomial(s0, ONE, -1)
        } else {
            let coeffs = (0..=order)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign * w0.powi(-(j + 1))
                })
                .collect();
            Jet::new(s0, 0, coeffs)
        };
        let mut fact_m = 1.0;
        for m in 0..=term.n {
            if m > 0 {
                fact_m *= m as f64;
            }
            let sign = if (term.n - m) % 2 == 0 { 1.0 } else { -1.0 };
            let mut piece = t_pow.scale(term.c * sign / fact_m * lt.powi(m as i32));
            for _ in 0..(term.n - m + 1) {
                piece = piece.mul(&inv);
            }
            acc = acc.add(&piece.truncate(k_max));
        }
    }
    acc
}

const GL16_NODES: [f64; 8] = [
    0.095_012_509_837_637_44,
    0.281_603_550_779_258_9,
    0.458_016_777_657_227_4,
    0.617_876_244_402_643_7,
    0.755_404_408_355_003_0,
    0.865_631_202_387_831_7,
    0.944_575_023_073_232_6,
    0.989_400_934_991_649_9,
];
const GL16_WEIGHTS: [f64; 8] = [
    0.189_450_610_455_068_5,
    0.182_603_415_044_923_6,
    0.169_156_519_395_002_5,
    0.149_595_988_816_576_73,
    0.124_628_971_255_533_87,
    0.095_158_511_682_492_79,
    0.062_253_523_938_647_89,
    0.027_152_459_411_754_095,
];

fn gl_nodes(a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(panels * 16);
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let half = 0.5 * width;
        for i in 0..8 {
            for sign in [-1.0, 1.0] {
                out.push((mid + sign * half * GL16_NODES[i], half * GL16_WEIGHTS[i]));
            }
        }
    }
    out
}

/// Result of a regularized integral, with the two parts of Definition-style
/// bookkeeping reported separately.
#[derive(Clone, Copy, Debug)]
pub struct RegIntegral {
    pub principal: Complex64,
    pub degenerate: Complex64,
    pub value: Complex64,
}

/// Fundamental-identity verification data.
#[derive(Clone, Debug)]
pub struct FundIdReport {
    /// (s, T, |LHS - RHS|) for each grid pair.
    pub residuals: Vec<(Complex64, f64, f64)>,
    /// max over s of the spread of R*(s) across the T list.
    pub t_independence: f64,
    /// max |R*(s) - R*(-s)| over the grid.
    pub functional_equation: f64,
    pub max_residual: f64,
}

/// Cached data for one (phi, T) pair: the fundamental-domain grid with phi
/// pre-sampled, and the kernel residual a - f on the tail t-grid.
pub struct RStarCtx<'a> {
    phi: &'a AutomorphicFn,
    t_trunc: f64,
    nodes: Vec<(Point, f64, bool)>,
    phi_vals: Vec<Complex64>,
    kernel_ts: Vec<(f64, f64)>,
    kernel_residual: Vec<Complex64>,
}

/// The engine: quadrature configuration plus the lambda residue.
pub struct Engine {
    quad: QuadratureSpec,
    lambda0: Jet,
}

impl Engine {
    pub fn new(quad: QuadratureSpec) -> Result<Self> {
        quad.validate()?;
        Ok(Engine {
            quad,
            lambda0: lambda_jet(3)?,
        })
    }

    pub fn with_defaults() -> Result<Self> {
        Engine::new(QuadratureSpec::default())
    }

    pub fn quad(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn lambda_residue(&self) -> f64 {
        self.lambda0.residue().re
    }

    /// Fundamental-domain nodes (point, weight of dx dy/y^2, in_tail) for the
    /// truncated pairing at height T; the tail flag marks y > T where the
    /// integrand switches to phi * (E* - E*_N).
    fn build_grid(&self, t_trunc: f64) -> Vec<(Point, f64, bool)> {
        let mut nodes = Vec::new();
        let x_n = self.quad.x_points;
        // region A: sqrt(3)/2 <= y <= 1, x in ±[sqrt(1-y^2), 1/2].
        // Parametrized by u = sqrt(1 - y^2) (dy = -(u/y) du), which removes
        // the square-root boundary singularity of the y-outer form.
        for (u, wu) in gl_nodes(0.0, 0.5, 3) {
            let y = (1.0 - u * u).sqrt();
            for (x, wx) in gl_nodes(u, 0.5, 2) {
                for sign in [-1.0, 1.0] {
                    nodes.push((
                        Point { x: sign * x, y },
                        wx * wu * u / (y * y * y),
                        false,
                    ));
                }
            }
        }
        // region B: 1 <= y <= T, full strip; periodic trapezoid in x
        let panels_b = ((t_trunc - 1.0) * 2.0).ceil().max(1.0) as usize;
        for (y, wy) in gl_nodes(1.0, t_trunc, panels_b) {
            for j in 0..x_n {
                let x = -0.5 + j as f64 / x_n as f64;
                nodes.push((Point { x, y }, wy / (x_n as f64 * y * y), false));
            }
        }
        // region C: T <= y <= T + tail, integrand phi * (E* - E*_N)
        let tail = self.quad.tail_order as f64;
        for (y, wy) in gl_nodes(t_trunc, t_trunc + tail, self.quad.tail_order) {
            for j in 0..x_n {
                let x = -0.5 + j as f64 / x_n as f64;
                nodes.push((Point { x, y }, wy / (x_n as f64 * y * y), true));
            }
        }
        nodes
    }

    /// Build the per-(phi, T) cache. Checks the declared profile against the
    /// computed kernel at t = T.
    pub fn ctx<'a>(&self, phi: &'a AutomorphicFn, t_trunc: f64) -> Result<RStarCtx<'a>> {
        let nodes = self.build_grid(t_trunc);
        let mut phi_vals = Vec::with_capacity(nodes.len());
        for (z, _, _) in &nodes {
            phi_vals.push(phi.sample(*z)?);
        }
        let tail = self.quad.tail_order as f64;
        let panels = (self.quad.tail_order * self.quad.t_points / 16).max(4);
        let kernel_ts = gl_nodes(t_trunc, t_trunc + tail, panels);
        let mut kernel_residual = Vec::with_capacity(kernel_ts.len());
        for (t, _) in &kernel_ts {
            let a = kernel_a(phi, *t, &self.quad)?;
            kernel_residual.push(a - phi.profile.f_value(*t));
        }
        // profile check at t = T itself
        let a_at_t = kernel_a(phi, t_trunc, &self.quad)?;
        let defect = (a_at_t - phi.profile.f_value(t_trunc)).norm();
        let scale = phi.profile.f_value(t_trunc).norm().max(1.0);
        if defect > 1e-6 * scale {
            return Err(Error::ProfileMismatch {
                t: t_trunc,
                defect,
            });
        }
        Ok(RStarCtx {
            phi,
            t_trunc,
            nodes,
            phi_vals,
            kernel_ts,
            kernel_residual,
        })
    }

    /// Truncated pairing `int_D phi * trunc_T E*(s)`.
    pub fn pairing(&self, ctx: &RStarCtx, s: Complex64) -> Result<Complex64> {
        let ev = Evaluator::new(EisSpec::star(s))?;
        let mut acc = ZERO;
        let mut ct_cache: HashMap<u64, Complex64> = HashMap::new();
        for ((z, w, in_tail), pv) in ctx.nodes.iter().zip(&ctx.phi_vals) {
            let star = ev.eval_jet(*z)?.value();
            let val = if *in_tail {
                let ct = match ct_cache.get(&z.y.to_bits()) {
                    Some(v) => *v,
                    None => {
                        let v = ev.constant_term_jet(z.y)?.value();
                        ct_cache.insert(z.y.to_bits(), v);
                        v
                    }
                };
                star - ct
            } else {
                star
            };
            acc += val * pv * *w;
        }
        Ok(acc)
    }

    fn tail_integrals(&self, ctx: &RStarCtx, s: Complex64) -> (Complex64, Complex64) {
        let mut i_plus = ZERO;
        let mut i_minus = ZERO;
        for ((t, w), r) in ctx.kernel_ts.iter().zip(&ctx.kernel_residual) {
            let lt = t.ln();
            i_plus += r * ((s - 0.5) * lt).exp() * (*w / t);
            i_minus += r * ((-s - 0.5) * lt).exp() * (*w / t);
        }
        (i_plus, i_minus)
    }

    /// Pointwise R*(s, phi) through the fundamental identity at the context's
    /// truncation height.
    pub fn r_star_point(&self, ctx: &RStarCtx, s: Complex64) -> Result<Complex64> {
        let pairing = self.pairing(ctx, s)?;
        let (i_plus, i_minus) = self.tail_integrals(ctx, s);
        let lam_plus = lambda_complete(ONE + 2.0 * s)?;
        let lam_minus = lambda_complete(ONE - 2.0 * s)?;
        let h_plus = h_t_point(&ctx.phi.profile, s, ctx.t_trunc)?;
        let h_minus = h_t_point(&ctx.phi.profile, -s, ctx.t_trunc)?;
        Ok(pairing + lam_plus * (i_plus - h_plus) + lam_minus * (i_minus - h_minus))
    }

    /// The two sides of the fundamental identity assembled independently:
    /// LHS from an R* value transported from a *different* truncation height,
    /// RHS from the truncated pairing and tails at this one.
    pub fn identity_sides(
        &self,
        ctx: &RStarCtx,
        r_star: Complex64,
        s: Complex64,
    ) -> Result<(Complex64, Complex64)> {
        let lam_plus = lambda_complete(ONE + 2.0 * s)?;
        let lam_minus = lambda_complete(ONE - 2.0 * s)?;
        let lhs = r_star
            + lam_plus * h_t_point(&ctx.phi.profile, s, ctx.t_trunc)?
            + lam_minus * h_t_point(&ctx.phi.profile, -s, ctx.t_trunc)?;
        let pairing = self.pairing(ctx, s)?;
        let (i_plus, i_minus) = self.tail_integrals(ctx, s);
        let rhs = pairing + lam_plus * i_plus + lam_minus * i_minus;
        Ok((lhs, rhs))
    }

    /// Contour radius that keeps clear of the R*-poles declared by the profile.
    fn safe_radius(&self, phi: &AutomorphicFn, s0: Complex64) -> f64 {
        let mut r = 0.15f64;
        for p in phi.profile.r_star_poles() {
            let d = (p - s0).norm();
            if d > 1e-9 {
                r = r.min(d / 2.0);
            }
        }
        r
    }

    /// Jet of R*(s, phi) at `s0` by a Cauchy contour over pointwise values.
    pub fn r_star_jet(
        &self,
        phi: &AutomorphicFn,
        s0: Complex64,
        k_min: i32,
        k_max: i32,
        t_trunc: f64,
    ) -> Result<Jet> {
        let ctx = self.ctx(phi, t_trunc)?;
        let radius = self.safe_radius(phi, s0);
        Jet::from_fn(
            |s| self.r_star_point(&ctx, s),
            s0,
            k_min,
            k_max,
            radius,
            32,
        )
    }

    /// The regularized integral: principal part Res_{s=1/2} R / lambda^(-1)(0)
    /// plus the degenerate part from the declared profile.
    pub fn reg_integral(&self, phi: &AutomorphicFn) -> Result<RegIntegral> {
        self.reg_integral_at(phi, 3.0)
    }

    pub fn reg_integral_at(&self, phi: &AutomorphicFn, t_trunc: f64) -> Result<RegIntegral> {
        let r_star = self.r_star_jet(phi, c64(0.5), -4, 0, t_trunc)?;
        // R = R* / L(1+2s): jet of L(1+2s) at s0 = 1/2 (regular, = L(2+2h)).
        let lam = lambda_jet_shifted_plus(c64(0.5), 5)?;
        let r_jet = r_star.div(&lam)?;
        let rho = self.lambda0.residue();
        let principal = r_jet.residue() / rho;
        let degenerate = phi.profile.degenerate_sum() / rho;
        Ok(RegIntegral {
            principal,
            degenerate,
            value: principal + degenerate,
        })
    }

    /// Verify the fundamental identity over an (s, T) grid; R* is transported
    /// across truncation heights, so the two sides are genuinely independent.
    pub fn verify_fundamental_identity(
        &self,
        phi: &AutomorphicFn,
        s_grid: &[Complex64],
        t_list: &[f64],
    ) -> Result<FundIdReport> {
        let mut ctxs = Vec::new();
        for &t in t_list {
            ctxs.push(self.ctx(phi, t)?);
        }
        let mut residuals = Vec::new();
        let mut t_indep = 0.0f64;
        let mut max_residual = 0.0f64;
        for &s in s_grid {
            let r_stars: Vec<Complex64> = ctxs
                .iter()
                .map(|ctx| self.r_star_point(ctx, s))
                .collect::<Result<_>>()?;
            for (i, &r) in r_stars.iter().enumerate() {
                for &r2 in r_stars.iter().skip(i + 1) {
                    t_indep = t_indep.max((r - r2).norm());
                }
            }
            // cross-T: R* from the first height, identity checked at the others
            for (i, ctx) in ctxs.iter().enumerate() {
                let r_from_other = r_stars[(i + 1) % r_stars.len()];
                let (lhs, rhs) = self.identity_sides(ctx, r_from_other, s)?;
                let resid = (lhs - rhs).norm();
                residuals.push((s, ctx.t_trunc, resid));
                max_residual = max_residual.max(resid);
            }
        }
        // functional equation R*(s) = R*(-s) at the first height
        let mut func_eq = 0.0f64;
        for &s in s_grid {
            let a = self.r_star_point(&ctxs[0], s)?;
            let b = self.r_star_point(&ctxs[0], -s)?;
            func_eq = func_eq.max((a - b).norm());
        }
        Ok(FundIdReport {
            residuals,
            t_independence: t_indep,
            functional_equation: func_eq,
            max_residual,
        })
    }

    /// Direct Mellin transform of a - f over the whole half-line: the
    /// unfolding oracle, valid for Re s large (absolute convergence).
    pub fn unfold_r(&self, phi: &AutomorphicFn, s: Complex64) -> Result<Complex64> {
        let t_lo = 0.04f64;
        let t_hi = self.quad.t_max.max(10.0) + 2.0;
        // integrate in u = ln t
        let mut acc = ZERO;
        for (u, w) in gl_nodes(t_lo.ln(), t_hi.ln(), 40) {
            let t = u.exp();
            let r = kernel_a(phi, t, &self.quad)? - phi.profile.f_value(t);
            acc += r * ((s - 0.5) * u).exp() * w;
        }
        Ok(acc)
    }
}

/// Jet at s0 of L(1 + 2s), regular wherever 1 + 2 s0 is away from {0, 1}.
fn lambda_jet_shifted_plus(s0: Complex64, k_max: i32) -> Result<Jet> {
    use crate::special::lambda_complete_jet;
    let u0 = ONE + 2.0 * s0;
    let mut radius = 0.05f64;
    for p in [ZERO, ONE] {
        let d = (u0 - p).norm();
        if d > 1e-12 {
            radius = radius.min(d / 2.5);
        }
    }
    Ok(lambda_complete_jet(u0, k_max, radius)?.compose_scale(c64(2.0), s0))
}

// ---------------------------------------------------------------------------
// Built-in test functions
// ---------------------------------------------------------------------------

/// The constant function 1; kernel a(t, 1) = 1, profile {(1, -1/2, 0)}.
pub fn phi_one() -> Result<AutomorphicFn> {
    AutomorphicFn::new(
        "one",
        Rc::new(|_| Ok(ONE)),
        ExponentProfile::new(vec![ProfileTerm {
            c: ONE,
            alpha: ALPHA_HALF,
            n: 0,
        }]),
    )
}

/// Plain Eisenstein series E(s0) with its two-exponent profile.
pub fn phi_eis(s0: Complex64) -> Result<AutomorphicFn> {
    let ev = Evaluator::new(EisSpec::plain(s0))?;
    let m = m_scalar(s0)?;
    AutomorphicFn::new(
        format!("E({s0})"),
        Rc::new(move |z| ev.eval(z)),
        ExponentProfile::new(vec![
            ProfileTerm { c: ONE, alpha: s0, n: 0 },
            ProfileTerm { c: m, alpha: -s0, n: 0 },
        ]),
    )
}

/// Product E(s1) E(s2) of two plain series; profile from the product of the
/// constant terms.
pub fn phi_eis_product(s1: Complex64, s2: Complex64) -> Result<AutomorphicFn> {
    let e1 = Evaluator::new(EisSpec::plain(s1))?;
    let e2 = Evaluator::new(EisSpec::plain(s2))?;
    let (m1, m2) = (m_scalar(s1)?, m_scalar(s2)?);
    let half = c64(0.5);
    AutomorphicFn::new(
        format!("E({s1})E({s2})"),
        Rc::new(move |z| Ok(e1.eval(z)? * e2.eval(z)?)),
        ExponentProfile::new(vec![
            ProfileTerm { c: ONE, alpha: half + s1 + s2, n: 0 },
            ProfileTerm { c: m2, alpha: half + s1 - s2, n: 0 },
            ProfileTerm { c: m1, alpha: half - s1 + s2, n: 0 },
            ProfileTerm { c: m1 * m2, alpha: half - s1 - s2, n: 0 },
        ]),
    )
}

/// The cusp-form square |Delta|^2 y^12 (rapid decay, empty profile).
pub fn phi_cusp_delta() -> Result<AutomorphicFn> {
    AutomorphicFn::new(
        "|Delta|^2 y^12",
        Rc::new(|z| Ok(c64(delta_square_y12(z)))),
        ExponentProfile::empty(),
    )
}

/// Regularizing Eisenstein series E_reg(1/2 + s) = E(1/2+s) - m(1/2+s); at
/// s = 0 the profile picks up the log term t - lambda^(-1)(0) log t.
pub fn phi_ereg(s: Complex64) -> Result<AutomorphicFn> {
    let s0 = c64(0.5) + s;
    let ev = Evaluator::new(EisSpec::regularized(s0))?;
    let profile = if s.norm() < 1e-12 {
        let rho = lambda_jet(0)?.residue();
        ExponentProfile::new(vec![
            ProfileTerm { c: ONE, alpha: c64(0.5), n: 0 },
            ProfileTerm { c: -rho, alpha: ALPHA_HALF, n: 1 },
        ])
    } else {
        let lam_s = lambda_jet_at(s, 0)?.value();
        ExponentProfile::new(vec![
            ProfileTerm { c: ONE, alpha: c64(0.5) + s, n: 0 },
            ProfileTerm { c: lam_s, alpha: -(c64(0.5) + s), n: 0 },
            ProfileTerm { c: -lam_s, alpha: ALPHA_HALF, n: 0 },
        ])
    };
    AutomorphicFn::new(format!("E_reg(1/2+{s})"), Rc::new(move |z| ev.eval(z)), profile)
}

/// (E'(0))^2, the square of the s-derivative at the center; profile
/// {(8, 1/2, 2), (4 m1, 1/2, 1), (m1^2, 1/2, 0)} with m1 = m'(0).
pub fn phi_eprime_sq() -> Result<AutomorphicFn> {
    let ev = Evaluator::new(EisSpec::plain(ZERO).with_deriv(1))?;
    let m1 = m_scalar_jet(ZERO, 1)?.df(1);
    let half = c64(0.5);
    AutomorphicFn::new(
        "E'(0)^2",
        Rc::new(move |z| {
            let v = ev.eval(z)?;
            Ok(v * v)
        }),
        ExponentProfile::new(vec![
            ProfileTerm { c: c64(8.0), alpha: half, n: 2 },
            ProfileTerm { c: 4.0 * m1, alpha: half, n: 1 },
            ProfileTerm { c: m1 * m1, alpha: half, n: 0 },
        ]),
    )
}

/// E(s) * E'(0) for the vanishing checks; profile from
/// E_N(s) * (E'(0))_N = (t^(1/2+s) + m(s) t^(1/2-s)) * t^(1/2) (2 log t + m1).
pub fn phi_eis_times_eprime(s: Complex64) -> Result<AutomorphicFn> {
    let e = Evaluator::new(EisSpec::plain(s))?;
    let ep = Evaluator::new(EisSpec::plain(ZERO).with_deriv(1))?;
    let m_s = m_scalar(s)?;
    let m1 = m_scalar_jet(ZERO, 1)?.df(1);
    let half = c64(0.5);
    AutomorphicFn::new(
        format!("E({s})E'(0)"),
        Rc::new(move |z| Ok(e.eval(z)? * ep.eval(z)?)),
        ExponentProfile::new(vec![
            ProfileTerm { c: c64(2.0), alpha: half + s, n: 1 },
            ProfileTerm { c: m1, alpha: half + s, n: 0 },
            ProfileTerm { c: 2.0 * m_s, alpha: half - s, n: 1 },
            ProfileTerm { c: m_s * m1, alpha: half - s, n: 0 },
        ]),
    )
}

/// E_reg(1/2 + s) * E_reg(1/2) for the singular-pair vanishing check.
pub fn phi_ereg_pair(s: Complex64) -> Result<AutomorphicFn> {
    if s.norm() < 1e-9 {
        return Err(Error::InvalidInput(
            "the pair at s = 0 needs distinct parameters".into(),
        ));
    }
    let a = Evaluator::new(EisSpec::regularized(c64(0.5) + s))?;
    let b = Evaluator::new(EisSpec::regularized(c64(0.5)))?;
    let rho = lambda_jet(0)?.residue();
    let lam_s = lambda_jet_at(s, 0)?.value();
    let half = c64(0.5);
    let three_half = c64(1.5);
    AutomorphicFn::new(
        format!("E_reg(1/2+{s})E_reg(1/2)"),
        Rc::new(move |z| Ok(a.eval(z)? * b.eval(z)?)),
        // (t^(1+s) + lam(s)(t^(-s) - 1)) * (t - rho log t)
        ExponentProfile::new(vec![
            ProfileTerm { c: ONE, alpha: three_half + s, n: 0 },
            ProfileTerm { c: -rho, alpha: half + s, n: 1 },
            ProfileTerm { c: lam_s, alpha: half - s, n: 0 },
            ProfileTerm { c: -rho * lam_s, alpha: -half - s, n: 1 },
            ProfileTerm { c: -lam_s, alpha: half, n: 0 },
            ProfileTerm { c: rho * lam_s, alpha: ALPHA_HALF, n: 1 },
        ]),
    )
}

/// Named built-ins for the CLI.
pub fn phi_by_name(name: &str) -> Result<AutomorphicFn> {
    match name {
        "one" => phi_one(),
        "eisprod" => phi_eis_product(c64(0.3), Complex64::new(0.0, 0.17)),
        "cusp" => phi_cusp_delta(),
        "ereg" => phi_ereg(ZERO),
        "eprime2" => phi_eprime_sq(),
        other => Err(Error::InvalidInput(format!(
            "unknown phi '{other}' (expected one|eisprod|cusp|ereg|eprime2)"
        ))),
    }
}

// ---------------------------------------------------------------------------
// L2-residue subtraction
// ---------------------------------------------------------------------------

/// One factor of a declared product of plain Eisenstein series.
#[derive(Clone, Copy, Debug)]
pub struct EisFactor {
    pub s0: Complex64,
    pub deriv: usize,
}

/// Result of the residue subtraction: phi - E(phi) with its remaining
/// profile, plus the spectral data of the subtracted part.
pub struct L2Residue {
    pub reduced: AutomorphicFn,
    /// (alpha, deriv order, coefficient) of each subtracted term.
    pub subtracted: Vec<(Complex64, u32, Complex64)>,
}

/// Compute phi - E(phi) for a product of plain Eisenstein series (or a cusp
/// form / constant, where the subtraction is empty). The subtracted part
/// collects one derivative-of-Eisenstein term per exponent with Re alpha > 0;
/// exponents on the boundary Re alpha = 1/2 with alpha != 1/2 are rejected.
pub fn l2_residue(factors: &[EisFactor]) -> Result<L2Residue> {
    // raw constant-term profile of the product: entries (r, alpha, n) meaning
    // r * t^(1/2 + alpha) log^n t
    let mut raw: Vec<(Complex64, Complex64, u32)> = vec![(ONE, ALPHA_HALF, 0)];
    // start from the multiplicative unit t^0 = t^(1/2 + (-1/2))
    for f in factors {
        let mut next: Vec<(Complex64, Complex64, u32)> = Vec::new();
        let m_jet = m_scalar_jet(f.s0, f.deriv as i32)?;
        for &(r, alpha, n) in &raw {
            // factor CT: d^deriv/ds^deriv [y^(1/2+s) + m(s) y^(1/2-s)] at s0
            // plus side: y^(1/2+s0) log^deriv y
            next.push((r, alpha + f.s0 + c64(0.5), n + f.deriv as u32));
            // minus side: sum_k binom(deriv,k) m^(deriv-k)(s0) (-1)^k y^(1/2-s0) log^k y
            let mut binom = 1.0f64;
            for k in 0..=f.deriv {
                if k > 0 {
                    binom *= (f.deriv - k + 1) as f64 / k as f64;
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let coeff = m_jet.df((f.deriv - k) as i32) * binom * sign;
                next.push((r * coeff, alpha - f.s0 + c64(0.5), n + k as u32));
            }
        }
        raw = next;
    }
    // group the Re alpha > 0 exponents
    let mut subtracted: Vec<(Complex64, u32, Complex64)> = Vec::new();
    for &(r, alpha, n) in &raw {
        if alpha.re > 1e-12 {
            if (alpha.re - 0.5).abs() < 1e-12 && alpha.im.abs() > 1e-12 {
                return Err(Error::ExponentOnCriticalBoundary);
            }
            subtracted.push((alpha, n, r));
        }
    }
    // assemble the sampler phi - sum b_n d^n E^(sharp)(alpha) and the
    // remaining profile
    let mut evs: Vec<(Evaluator, Complex64)> = Vec::new();
    let mut remaining: Vec<ProfileTerm> = raw
        .iter()
        .filter(|(_, alpha, _)| alpha.re <= 1e-12)
        .map(|&(r, alpha, n)| ProfileTerm {
            c: r * factorial_f(n),
            alpha,
            n,
        })
        .collect();
    for &(alpha, n, b) in &subtracted {
        let at_half = (alpha - c64(0.5)).norm() < 1e-12;
        let spec = if at_half {
            EisSpec::regularized(alpha).with_deriv(n as usize)
        } else {
            EisSpec::plain(alpha).with_deriv(n as usize)
        };
        evs.push((Evaluator::new(spec)?, b));
        // remaining profile gains the minus-side constant term of the
        // subtracted Eisenstein term (the plus side cancels by construction)
        if at_half {
            // d^n (E - m)(1/2): minus side is
            // n! sum_{j>=1} lambda_(n-j) (-1)^j log^j y / j!, lambda_k the
            // Taylor/Laurent coefficients of lambda at 0 (k >= -1)
            let lam = lambda_jet(n as i32 + 1)?;
            for j in 1..=(n + 1) {
                let coeff = lam.coeff(n as i32 - j as i32)
                    * (if j % 2 == 0 { 1.0 } else { -1.0 })
                    * factorial_f(n)
                    / factorial_f(j);
                remaining.push(ProfileTerm {
                    c: -b * coeff * factorial_f(j),
                    alpha: ALPHA_HALF,
                    n: j,
                });
            }
        } else {
            let m_jet = m_scalar_jet(alpha, n as i32)?;
            let mut binom = 1.0f64;
            for k in 0..=n {
                if k > 0 {
                    binom *= (n - k + 1) as f64 / k as f64;
                }
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let coeff = m_jet.df((n - k) as i32) * binom * sign;
                remaining.push(ProfileTerm {
                    c: -b * coeff * factorial_f(k),
                    alpha: -alpha,
                    n: k,
                });
            }
        }
    }
    // build the reduced sampler
    let f_evs: Vec<(Evaluator, Complex64)> = evs;
    let factor_evs: Vec<Evaluator> = factors
        .iter()
        .map(|f| Evaluator::new(EisSpec::plain(f.s0).with_deriv(f.deriv)))
        .collect::<Result<_>>()?;
    let reduced = AutomorphicFn::new(
        "phi - E(phi)",
        Rc::new(move |z| {
            let mut prod = ONE;
            for ev in &factor_evs {
                prod *= ev.eval(z)?;
            }
            for (ev, b) in &f_evs {
                prod -= b * ev.eval(z)?;
            }
            Ok(prod)
        }),
        ExponentProfile::new(remaining),
    )?;
    Ok(L2Residue {
        reduced,
        subtracted,
    })
}

fn factorial_f(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Plain integral of an L1 function over the fundamental domain, with the
/// cusp strip handled through the kernel: int_D phi = int_{D, y<=Y} phi dmu +
/// int_Y^inf a(t, phi) dt/t^2, the far tail of the kernel integral taken in
/// closed form from the declared profile.
pub fn integrate_l1(
    phi: &AutomorphicFn,
    quad: &QuadratureSpec,
    y_cut: f64,
) -> Result<Complex64> {
    if phi.profile.max_re_alpha() >= 0.5 - 1e-12 && !phi.profile.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{} is not integrable (max Re alpha = {})",
            phi.name,
            phi.profile.max_re_alpha()
        )));
    }
    let mut acc = ZERO;
    for (u, wu) in gl_nodes(0.0, 0.5, 3) {
        let y = (1.0 - u * u).sqrt();
        for (x, wx) in gl_nodes(u, 0.5, 2) {
            for sign in [-1.0, 1.0] {
                acc += phi.sample(Point { x: sign * x, y })? * (wx * wu * u / (y * y * y));
            }
        }
    }
    let x_n = quad.x_points;
    let panels = ((y_cut - 1.0) * 2.0).ceil().max(1.0) as usize;
    for (y, wy) in gl_nodes(1.0, y_cut, panels) {
        for j in 0..x_n {
            let x = -0.5 + j as f64 / x_n as f64;
            acc += phi.sample(Point { x, y })? * (wy / (x_n as f64 * y * y));
        }
    }
    // strip above the cut: int_Y^{Y+L} (a - f) dt/t^2 numerically + closed
    // form for f
    for (t, w) in gl_nodes(y_cut, y_cut + 10.0, 10) {
        let r = kernel_a(phi, t, quad)? - phi.profile.f_value(t);
        acc += r * (w / (t * t));
    }
    for term in phi.profile.terms() {
        // int_Y^inf (c/n!) t^(1/2+alpha) log^n t dt/t^2
        acc += term.c / factorial_f(term.n)
            * log_power_tail(term.alpha - c64(1.5), term.n, y_cut);
    }
    Ok(acc)
}

/// int_Y^inf t^beta log^n t dt for Re beta < -1, by parts.
fn log_power_tail(beta: Complex64, n: u32, y: f64) -> Complex64 {
    let ly = y.ln();
    let lead = -((beta + 1.0) * ly).exp() / (beta + 1.0);
    if n == 0 {
        lead
    } else {
        lead * ly.powi(n as i32)
            - (n as f64) / (beta + 1.0) * log_power_tail(beta, n - 1, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kernel_of_constant_is_one() {
        let quad = QuadratureSpec::default();
        let one = phi_one().unwrap();
        for &t in &[0.3, 1.0, 7.5] {
            let a = kernel_a(&one, t, &quad).unwrap();
            assert!((a - ONE).norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_of_eisenstein_is_its_constant_term() {
        let quad = QuadratureSpec::default();
        let phi = phi_eis(c64(0.3)).unwrap();
        for &t in &[2.0, 5.0] {
            let a = kernel_a(&phi, t, &quad).unwrap();
            let f = phi.profile.f_value(t);
            assert!((a - f).norm() < 1e-8, "t={t}: {a} vs {f}");
        }
    }

    #[test]
    fn kernel_of_cusp_square_decays_like_leading_term() {
        let quad = QuadratureSpec::default();
        let phi = phi_cusp_delta().unwrap();
        for &t in &[2.0, 3.0] {
            let a = kernel_a(&phi, t, &quad).unwrap().re;
            let leading = t.powi(12) * (-4.0 * PI * t).exp();
            assert!((a / leading - 1.0).abs() < 1e-6, "t={t}");
        }
    }

    #[test]
    fn h_t_single_term_closed_form() {
        // profile {(1, 0, 0)}: h_T(s) = T^s / s
        let p = ExponentProfile::new(vec![ProfileTerm { c: ONE, alpha: ZERO, n: 0 }]);
        let s = c64(0.7);
        let t = 3.0;
        let h = h_t_point(&p, s, t).unwrap();
        assert!((h - c64(t.powf(0.7) / 0.7)).norm() < 1e-14);
    }

    #[test]
    fn h_t_residue_is_the_degenerate_coefficient() {
        // profile {(c, -1/2, 0)}: Res_{s=1/2} h_T = c, independent of T
        let c_val = Complex64::new(1.7, -0.4);
        let p = ExponentProfile::new(vec![ProfileTerm { c: c_val, alpha: ALPHA_HALF, n: 0 }]);
        for &t in &[2.0, 8.0] {
            let jet = h_t_jet(&p, c64(0.5), 0, t);
            assert!((jet.residue() - c_val).norm() < 1e-12, "T={t}");
        }
        assert_eq!(p.degenerate_sum(), c_val);
    }

    #[test]
    fn h_t_with_log_against_direct_quadrature() {
        // profile {(2, 0.1, 1)}: h_T(s) = int_0^T f(t) t^(s-1/2) dt/t with
        // f(t) = (2/1!) t^(0.6) log t
        let p = ExponentProfile::new(vec![ProfileTerm { c: c64(2.0), alpha: c64(0.1), n: 1 }]);
        let s = c64(0.3);
        let t_cut = 5.0;
        let h = h_t_point(&p, s, t_cut).unwrap();
        let mut acc = ZERO;
        for (u, w) in gl_nodes(-80.0, t_cut.ln(), 140) {
            let t = u.exp();
            acc += p.f_value(t) * ((s - 0.5) * u).exp() * w;
        }
        assert!((h - acc).norm() < 1e-9, "{h} vs {acc}");
    }

    #[test]
    fn h_t_jet_matches_point_values_nearby() {
        let p = ExponentProfile::new(vec![
            ProfileTerm { c: c64(1.0), alpha: c64(0.2), n: 1 },
            ProfileTerm { c: c64(-0.3), alpha: ALPHA_HALF, n: 0 },
        ]);
        let s0 = c64(0.9);
        let jet = h_t_jet(&p, s0, 8, 4.0);
        for &h in &[0.02, 0.01] {
            let exact = h_t_point(&p, s0 + c64(h), 4.0).unwrap();
            assert!(
                (jet.eval(c64(h)) - exact).norm() < 1e-8,
                "h={h}: {} vs {exact}",
                jet.eval(c64(h))
            );
        }
    }

    #[test]
    fn profile_mismatch_is_detected() {
        let quad = QuadratureSpec::default();
        let engine = Engine::new(quad).unwrap();
        // declare a wrong profile for the constant function
        let bad = AutomorphicFn::new(
            "bad",
            Rc::new(|_| Ok(ONE)),
            ExponentProfile::new(vec![ProfileTerm { c: c64(2.0), alpha: ALPHA_HALF, n: 0 }]),
        )
        .unwrap();
        assert!(matches!(
            engine.ctx(&bad, 2.0),
            Err(Error::ProfileMismatch { .. })
        ));
    }

    #[test]
    fn reg_integral_of_one_is_the_volume() {
        let engine = Engine::with_defaults().unwrap();
        let one = phi_one().unwrap();
        let reg = engine.reg_integral(&one).unwrap();
        assert!(
            (reg.value.re - PI / 3.0).abs() < 1e-6,
            "volume via reg integral: {} vs {}",
            reg.value.re,
            PI / 3.0
        );
        assert!((reg.degenerate - c64(PI / 3.0)).norm() < 1e-9);
        assert!(reg.principal.norm() < 1e-6, "principal {}", reg.principal);
    }

    #[test]
    fn reg_integral_linearity() {
        let engine = Engine::with_defaults().unwrap();
        let one = phi_one().unwrap();
        let cusp = phi_cusp_delta().unwrap();
        let a = Complex64::new(2.0, 1.0);
        let b = c64(-0.7);
        let combo = AutomorphicFn::combine(a, &one, b, &cusp).unwrap();
        let lhs = engine.reg_integral(&combo).unwrap().value;
        let rhs = a * engine.reg_integral(&one).unwrap().value
            + b * engine.reg_integral(&cusp).unwrap().value;
        assert!((lhs - rhs).norm() < 1e-8, "{lhs} vs {rhs}");
    }

    #[test]
    fn integrable_test_functions_have_small_exponents() {
        let cusp = phi_cusp_delta().unwrap();
        assert!(cusp.profile.is_empty());
        let one = phi_one().unwrap();
        assert!(one.profile.max_re_alpha() < 0.5);
    }
}
