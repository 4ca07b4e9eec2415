//! The spherical real-analytic Eisenstein series for the modular group in the
//! spectral normalization (center of symmetry s = 0, classical weight
//! w = s + 1/2), evaluated through its Fourier expansion with all
//! s-dependence carried by jets:
//!
//! ```text
//! E*(s, z) = L(1+2s) y^(1/2+s) + L(1-2s) y^(1/2-s)
//!            + 4 sqrt(y) sum_{n>=1} eta_s(n) K_s(2 pi n y) cos(2 pi n x)
//! ```
//!
//! where `L` is the completed zeta, `eta_s(n) = sum_{ad=n} (a/d)^s`, and
//! `E = E*/L(1+2s)`. The constant term is `y^(1/2+s) + m(s) y^(1/2-s)` with
//! `m(s) = L(1-2s)/L(1+2s)`, and the regularized variant subtracts the full
//! intertwining constant: `E_reg(s) = E(s) - m(s)`, finite at s = 1/2.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{Jet, ONE, ZERO};
use crate::scalars::m_scalar_jet;
use crate::special::lambda_complete_jet;
use crate::special::bessel_k_jet;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A point x + iy of the upper half-plane; the height function is y.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(y > 0.0) || !x.is_finite() {
            return Err(Error::InvalidInput(format!(
                "point must lie in the upper half-plane, got {x} + {y}i"
            )));
        }
        Ok(Point { x, y })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    /// E(s, z)
    Plain,
    /// E*(s, z) = Lambda(1+2s) E(s, z)
    Star,
    /// E_reg(s, z) = E(s, z) - m(s); finite at the spherical pole s = 1/2.
    Regularized,
}

#[derive(Clone, Copy, Debug)]
pub struct EisSpec {
    /// Spectral parameter (classical weight minus 1/2).
    pub s0: Complex64,
    /// Order of the s-derivative to evaluate.
    pub deriv: usize,
    pub variant: Variant,
    /// Number of Fourier terms; 0 selects ceil(10/y) + 20 adaptively.
    pub fourier_terms: usize,
}

impl EisSpec {
    pub fn plain(s0: Complex64) -> Self {
        EisSpec {
            s0,
            deriv: 0,
            variant: Variant::Plain,
            fourier_terms: 0,
        }
    }

    pub fn star(s0: Complex64) -> Self {
        EisSpec {
            variant: Variant::Star,
            ..EisSpec::plain(s0)
        }
    }

    pub fn regularized(s0: Complex64) -> Self {
        EisSpec {
            variant: Variant::Regularized,
            ..EisSpec::plain(s0)
        }
    }

    pub fn with_deriv(mut self, deriv: usize) -> Self {
        self.deriv = deriv;
        self
    }
}

/// Reduce z to the standard fundamental domain |x| <= 1/2, |z| >= 1 and
/// return the unimodular matrix g with g.z = z'. Boundary ties go to
/// x' = -1/2 and to the x <= 0 half of the unit arc.
pub fn reduce(z: Point) -> (Point, [[i64; 2]; 2]) {
    let (mut x, mut y) = (z.x, z.y);
    let mut m = [[1i64, 0], [0, 1]];
    loop {
        let n = x.round();
        if n != 0.0 {
            x -= n;
            let ni = n as i64;
            m[0][0] -= ni * m[1][0];
            m[0][1] -= ni * m[1][1];
        }
        let r2 = x * x + y * y;
        if r2 < 1.0 - 1e-15 || (r2 <= 1.0 + 1e-15 && x > 1e-15) {
            let (nx, ny) = (-x / r2, y / r2);
            x = nx;
            y = ny;
            m = [[-m[1][0], -m[1][1]], [m[0][0], m[0][1]]];
        } else {
            break;
        }
    }
    if x >= 0.5 - 1e-15 {
        x -= 1.0;
        m[0][0] -= m[1][0];
        m[0][1] -= m[1][1];
    }
    (Point { x, y }, m)
}

/// Apply a unimodular matrix to a point (Moebius action).
pub fn apply(m: [[i64; 2]; 2], z: Point) -> Point {
    let (a, b, c, d) = (
        m[0][0] as f64,
        m[0][1] as f64,
        m[1][0] as f64,
        m[1][1] as f64,
    );
    let den = (c * z.x + d) * (c * z.x + d) + c * c * z.y * z.y;
    Point {
        x: ((a * z.x + b) * (c * z.x + d) + a * c * z.y * z.y) / den,
        y: z.y / den,
    }
}

fn divisors(n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out
}

/// Evaluator with the spectral parameter frozen; all Fourier data are jets in
/// s at `spec.s0`, so derivatives and pole cancellations come for free.
pub struct Evaluator {
    spec: EisSpec,
    k_hi: i32,
    lam_plus: Jet,
    lam_minus: Jet,
    m_jet: Option<Jet>,
    bessel_cache: RefCell<HashMap<(u64, u32), Jet>>,
    eta_cache: RefCell<HashMap<u32, Jet>>,
}

impl Evaluator {
    pub fn new(spec: EisSpec) -> Result<Self> {
        let k_hi = spec.deriv as i32 + 2;
        let s0 = spec.s0;
        // L(1+2s) around s0: jet of L at 1+2s0 composed with u = 1 + 2(s-s0).
        let up0 = ONE + 2.0 * s0;
        let um0 = ONE - 2.0 * s0;
        let r_plus = contour_radius_for(up0);
        let r_minus = contour_radius_for(um0);
        let lam_plus = lambda_complete_jet(up0, k_hi, r_plus)?.compose_scale(c64(2.0), s0);
        let lam_minus = lambda_complete_jet(um0, k_hi, r_minus)?.compose_scale(c64(-2.0), s0);
        let m_jet = match spec.variant {
            Variant::Regularized => Some(m_scalar_jet(s0, k_hi)?),
            _ => None,
        };
        Ok(Evaluator {
            spec,
            k_hi,
            lam_plus,
            lam_minus,
            m_jet,
            bessel_cache: RefCell::new(HashMap::new()),
            eta_cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn spec(&self) -> &EisSpec {
        &self.spec
    }

    fn fourier_terms(&self, y: f64) -> usize {
        if self.spec.fourier_terms > 0 {
            self.spec.fourier_terms
        } else {
            (10.0 / y).ceil() as usize + 20
        }
    }

    fn eta_jet(&self, n: u32) -> Jet {
        if let Some(j) = self.eta_cache.borrow().get(&n) {
            return j.clone();
        }
        let s0 = self.spec.s0;
        let mut coeffs = vec![ZERO; (self.k_hi + 1) as usize];
        for d in divisors(n) {
            let a = n / d;
            let r = a as f64 / d as f64;
            let lr = r.ln();
            let mut term = (s0 * lr).exp();
            for (k, c) in coeffs.iter_mut().enumerate() {
                *c += term;
                term *= lr / (k as f64 + 1.0);
            }
        }
        let j = Jet::new(s0, 0, coeffs);
        self.eta_cache.borrow_mut().insert(n, j.clone());
        j
    }

    fn bessel_jet(&self, n: u32, y: f64) -> Result<Jet> {
        let key = (y.to_bits(), n);
        if let Some(j) = self.bessel_cache.borrow().get(&key) {
            return Ok(j.clone());
        }
        let j = bessel_k_jet(self.spec.s0, 2.0 * PI * n as f64 * y, self.k_hi)?;
        self.bessel_cache.borrow_mut().insert(key, j.clone());
        Ok(j)
    }

    /// Jet in s of E*(s, z) at a point of the fundamental domain.
    fn star_jet_reduced(&self, z: Point) -> Result<Jet> {
        let (x, y) = (z.x, z.y);
        let s0 = self.spec.s0;
        let ly = y.ln();
        let plus = self
            .lam_plus
            .mul(&Jet::exponential(s0, ((s0 + 0.5) * ly).exp(), c64(ly), self.k_hi));
        let minus = self
            .lam_minus
            .mul(&Jet::exponential(s0, ((-s0 + 0.5) * ly).exp(), c64(-ly), self.k_hi));
        let mut acc = plus.add(&minus);
        let m_terms = self.fourier_terms(y);
        let root_y = y.sqrt();
        for n in 1..=m_terms as u32 {
            if 2.0 * PI * n as f64 * y > 705.0 {
                break;
            }
            let kj = self.bessel_jet(n, y)?;
            let eta = self.eta_jet(n);
            let cosx = (2.0 * PI * n as f64 * x).cos();
            acc = acc.add(&eta.mul(&kj).scale(c64(4.0 * root_y * cosx)));
        }
        Ok(acc)
    }

    /// Jet in s of the requested variant at an arbitrary point (reduced
    /// internally).
    pub fn eval_jet(&self, z: Point) -> Result<Jet> {
        let (zr, _) = reduce(z);
        let star = self.star_jet_reduced(zr)?;
        self.finish_variant(star)
    }

    fn finish_variant(&self, star: Jet) -> Result<Jet> {
        match self.spec.variant {
            Variant::Star => Ok(star),
            Variant::Plain => star.div(&self.lam_plus),
            Variant::Regularized => {
                let plain = star.div(&self.lam_plus)?;
                Ok(plain.sub(self.m_jet.as_ref().expect("m jet present")))
            }
        }
    }

    /// Point value (the deriv-th s-derivative of the chosen variant).
    pub fn eval(&self, z: Point) -> Result<Complex64> {
        let jet = self.eval_jet(z)?;
        self.extract(jet)
    }

    fn extract(&self, jet: Jet) -> Result<Complex64> {
        let scale = jet.coeff(self.spec.deriv as i32).norm() + 1.0;
        for k in jet.k_min()..0 {
            if jet.coeff(k).norm() > 1e-5 * scale {
                return Err(Error::EisensteinPole(self.spec.s0));
            }
        }
        Ok(jet.df(self.spec.deriv as i32))
    }

    /// Jet of the constant term at height y:
    /// `y^(1/2+s) + m(s) y^(1/2-s)` for the plain variant, multiplied by
    /// L(1+2s) for the star variant, with the full m(s) subtracted for the
    /// regularized one.
    pub fn constant_term_jet(&self, y: f64) -> Result<Jet> {
        let s0 = self.spec.s0;
        let ly = y.ln();
        let e_plus = Jet::exponential(s0, ((s0 + 0.5) * ly).exp(), c64(ly), self.k_hi);
        let e_minus = Jet::exponential(s0, ((-s0 + 0.5) * ly).exp(), c64(-ly), self.k_hi);
        match self.spec.variant {
            Variant::Star => Ok(self.lam_plus.mul(&e_plus).add(&self.lam_minus.mul(&e_minus))),
            Variant::Plain => {
                let m = self.lam_minus.div(&self.lam_plus)?;
                Ok(e_plus.add(&m.mul(&e_minus)))
            }
            Variant::Regularized => {
                let m = self.m_jet.as_ref().expect("m jet present");
                Ok(e_plus.add(&m.mul(&e_minus)).sub(m))
            }
        }
    }

    pub fn constant_term(&self, y: f64) -> Result<Complex64> {
        let jet = self.constant_term_jet(y)?;
        self.extract(jet)
    }

    /// Truncation: subtract the constant term above height T (the input is
    /// reduced to the fundamental domain first, where truncation is the
    /// pointwise operation).
    pub fn truncate(&self, z: Point, t: f64) -> Result<Complex64> {
        if !(t >= 1.0) {
            return Err(Error::InvalidInput(format!("truncation height T = {t} must be >= 1")));
        }
        let (zr, _) = reduce(z);
        let mut jet = self.star_jet_reduced(zr)?;
        if zr.y > t {
            jet = jet.sub(&self.star_constant_term_jet(zr.y));
        }
        let jet = match self.spec.variant {
            Variant::Star => jet,
            Variant::Plain => jet.div(&self.lam_plus)?,
            Variant::Regularized => {
                return Err(Error::InvalidInput(
                    "truncation of the regularized variant is not defined".into(),
                ))
            }
        };
        self.extract(jet)
    }

    fn star_constant_term_jet(&self, y: f64) -> Jet {
        let s0 = self.spec.s0;
        let ly = y.ln();
        let e_plus = Jet::exponential(s0, ((s0 + 0.5) * ly).exp(), c64(ly), self.k_hi);
        let e_minus = Jet::exponential(s0, ((-s0 + 0.5) * ly).exp(), c64(-ly), self.k_hi);
        self.lam_plus.mul(&e_plus).add(&self.lam_minus.mul(&e_minus))
    }
}

fn contour_radius_for(u0: Complex64) -> f64 {
    let mut r = 0.05f64;
    for p in [ZERO, ONE] {
        let d = (u0 - p).norm();
        if d > 1e-12 {
            r = r.min(d / 2.5);
        }
    }
    r.max(1e-4)
}

/// Convenience one-shot evaluation.
pub fn eval(spec: &EisSpec, z: Point) -> Result<Complex64> {
    Evaluator::new(*spec)?.eval(z)
}

/// Normalized Hecke operator at the prime p:
/// `(T(p) f)(z) = (f(pz) + sum_{j mod p} f((z+j)/p)) / (p + 1)`,
/// i.e. the p^(-1/2)-rescaled double-coset sum divided by
/// p^(1/2) + p^(-1/2). The eigenvalue on E at spectral parameter sigma is
/// `(p^sigma + p^-sigma) / (p^(1/2) + p^(-1/2))`.
pub fn hecke_apply<F>(phi: F, p: u64, z: Point) -> Result<Complex64>
where
    F: Fn(Point) -> Result<Complex64>,
{
    let pf = p as f64;
    let mut acc = phi(Point::new(pf * z.x, pf * z.y)?)?;
    for j in 0..p {
        acc += phi(Point::new((z.x + j as f64) / pf, z.y / pf)?)?;
    }
    Ok(acc / (pf + 1.0))
}

/// Eigenvalue of T(p) on E at spectral parameter sigma.
pub fn hecke_eigenvalue(p: u64, sigma: Complex64) -> Complex64 {
    let lp = (p as f64).ln();
    ((sigma * lp).exp() + (-sigma * lp).exp()) / ((p as f64).sqrt() + 1.0 / (p as f64).sqrt())
}

/// The weight-12 cusp-form square |Delta(z)|^2 y^12 in the lattice
/// normalization Delta = q prod (1 - q^n)^24.
pub fn delta_square_y12(z: Point) -> f64 {
    let (zr, _) = reduce(z);
    let q_abs = (-2.0 * PI * zr.y).exp();
    let q = Complex64::from_polar(q_abs, 2.0 * PI * zr.x);
    let mut prod = ONE;
    let mut qn = q;
    for _ in 0..40 {
        prod *= ONE - qn;
        qn *= q;
        if qn.norm() < 1e-18 {
            break;
        }
    }
    let delta = q * prod.powi(24);
    delta.norm_sqr() * zr.y.powi(12)
}
