//! Archimedean Mellin pair on a geometric grid, the multiplicative Fourier
//! decomposition over the unit group of R or C, archimedean Whittaker
//! functions with their decay checks, and the empirical Sobolev-type
//! inequality estimators.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::eisenstein::{EisSpec, Evaluator, Point};
use crate::error::{Error, Result};
use crate::jet::{ONE, ZERO};
use crate::special::{bessel_k, lambda_complete};

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Samples of a function on the geometric grid t = e^(k h), k in [-K, K].
#[derive(Clone, Debug)]
pub struct LogGridFn {
    pub h: f64,
    pub k_lo: i32,
    pub samples: Vec<Complex64>,
    /// Declared convergence band (c_lo, c_hi) of the Mellin transform.
    pub band: (f64, f64),
}

pub const DEFAULT_H: f64 = 0.05;
pub const DEFAULT_K: i32 = 400;

impl LogGridFn {
    pub fn from_function<F: Fn(f64) -> Complex64>(
        f: F,
        h: f64,
        k_max: i32,
        band: (f64, f64),
    ) -> Self {
        let samples = (-k_max..=k_max)
            .map(|k| f((k as f64 * h).exp()))
            .collect();
        LogGridFn {
            h,
            k_lo: -k_max,
            samples,
            band,
        }
    }

    pub fn t(&self, idx: usize) -> f64 {
        ((self.k_lo + idx as i32) as f64 * self.h).exp()
    }

    /// Endpoint magnitudes, the recorded decay flags of the grid.
    pub fn edge_magnitudes(&self) -> (f64, f64) {
        (
            self.samples.first().map(|v| v.norm()).unwrap_or(0.0),
            self.samples.last().map(|v| v.norm()).unwrap_or(0.0),
        )
    }

    /// Mellin transform int_0^inf f(t) t^s dt/t by the trapezoid rule on
    /// the log grid (spectrally accurate for smooth decaying samples).
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        if s.re <= self.band.0 || s.re >= self.band.1 {
            return Err(Error::BandViolation {
                re_s: s.re,
                lo: self.band.0,
                hi: self.band.1,
            });
        }
        let mut acc = ZERO;
        for (i, v) in self.samples.iter().enumerate() {
            let u = (self.k_lo + i as i32) as f64 * self.h;
            acc += v * (s * u).exp();
        }
        Ok(acc * self.h)
    }
}

/// Inverse transform along the vertical line Re s = sigma, truncated at
/// |Im s| <= tau_max with a trapezoid of `n` points.
pub fn inverse_mellin<F: Fn(Complex64) -> Complex64>(
    m: F,
    sigma: f64,
    y: f64,
    tau_max: f64,
    n: usize,
) -> Complex64 {
    let dt = 2.0 * tau_max / n as f64;
    let mut acc = ZERO;
    for j in 0..=n {
        let tau = -tau_max + j as f64 * dt;
        let s = Complex64::new(sigma, tau);
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        acc += m(s) * (-s * y.ln()).exp() * w;
    }
    acc * dt / (2.0 * PI)
}

/// Even/odd parts of a function on R: (f(t) ± f(-t)) / 2 on t > 0.
pub fn f1_decompose_real<F: Fn(f64) -> Complex64>(f: &F, even: bool, t: f64) -> Complex64 {
    if even {
        (f(t) + f(-t)) / 2.0
    } else {
        (f(t) - f(-t)) / 2.0
    }
}

/// Angular Fourier coefficient over the unit circle with the probability
/// measure: f_n(t) = int f(t e^(i theta)) e^(i n theta) dtheta / 2pi.
pub fn f1_decompose_complex<F: Fn(Complex64) -> Complex64>(f: &F, n: i32, t: f64) -> Complex64 {
    let m = 256usize;
    let mut acc = ZERO;
    for j in 0..m {
        let th = 2.0 * PI * j as f64 / m as f64;
        acc += f(Complex64::from_polar(t, th)) * Complex64::from_polar(1.0, n as f64 * th);
    }
    acc / m as f64
}

/// Archimedean Whittaker function of the standard Gaussian datum, direct
/// route: `W(s; y) = |y|^(1/2-s) * 2 int_0^inf exp(-pi(t^2 + y^2/t^2)) t^(2s) dt/t`.
pub fn whittaker_arch_direct(s: Complex64, y: f64) -> Result<Complex64> {
    if y == 0.0 {
        return Err(Error::InvalidInput("whittaker needs y != 0".into()));
    }
    let ay = y.abs();
    let h = 0.004;
    let k_max = 1600i32;
    let mut acc = ZERO;
    for k in -k_max..=k_max {
        let u = k as f64 * h;
        let t = u.exp();
        let e = -PI * (t * t + ay * ay / (t * t));
        if e < -745.0 {
            continue;
        }
        acc += (c64(e) + 2.0 * s * u).exp();
    }
    acc *= 2.0 * h;
    Ok(((c64(0.5) - s) * ay.ln()).exp() * acc)
}

/// Closed-form route: `C * sqrt(|y|) K_s(2 pi |y|)`, the constant calibrated
/// once against the direct route at a reference point.
pub fn whittaker_arch_bessel(s: Complex64, y: f64) -> Result<Complex64> {
    let c = whittaker_calibration(s)?;
    Ok(c * y.abs().sqrt() * bessel_k(s, 2.0 * PI * y.abs())?)
}

fn whittaker_calibration(s: Complex64) -> Result<Complex64> {
    let y_ref = 1.0;
    let direct = whittaker_arch_direct(s, y_ref)?;
    let k = bessel_k(s, 2.0 * PI * y_ref)?;
    Ok(direct / (y_ref.sqrt() * k))
}

/// Envelope of the non-constant part of the Eisenstein series: the global
/// sum of Whittaker magnitudes over the nonzero rationals in the unfolding
/// normalization,
/// `S(s, y) = (4/|L(1+2s)|) sqrt(y) sum_{n>=1} |eta_s(n)| |K_s(2 pi n y)|`,
/// with a certified geometric tail.
pub fn global_whittaker_sum(s: Complex64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::InvalidInput("need y > 0".into()));
    }
    let lam = lambda_complete(ONE + 2.0 * s)?.norm();
    let mut acc = 0.0f64;
    let mut n = 1u32;
    loop {
        let w = 2.0 * PI * n as f64 * y;
        let kv = if w > 705.0 { 0.0 } else { bessel_k(s, w)?.norm() };
        let eta: f64 = divisor_eta_mag(n, s);
        let term = eta * kv;
        acc += term;
        // tail certificate: K_s(w + 2 pi y) <= K_s(w) e^(-2 pi y (1 - eps));
        // divisor growth is subpolynomial, so once the term undercuts the
        // running sum by 1e-18 the rest is negligible.
        if term < 1e-18 * acc.max(1e-280) || w > 705.0 {
            break;
        }
        n += 1;
        if n > 100_000 {
            break;
        }
    }
    Ok(4.0 / lam * y.sqrt() * acc)
}

fn divisor_eta_mag(n: u32, s: Complex64) -> f64 {
    let mut acc = 0.0;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            let a = n / d;
            acc += ((a as f64 / d as f64).powf(s.re)).abs();
            if a != d {
                acc += ((d as f64 / a as f64).powf(s.re)).abs();
            }
        }
        d += 1;
    }
    acc
}

/// One empirical inequality record: fitted constant over a corpus and its
/// stability under grid refinement.
#[derive(Clone, Debug)]
pub struct SobolevEntry {
    pub label: String,
    pub fitted_constant: f64,
    pub refined_constant: f64,
}

/// Empirical check of the Sobolev-type displays: the sup-norm bound through
/// first derivatives on R, and the Mellin-pair seminorm bound
/// H_inf^(k,sigma)(M f) <= B_1^(k,sigma)(f) (the latter with constant 1).
pub fn sobolev_checks() -> Result<Vec<SobolevEntry>> {
    let mut out = Vec::new();
    // corpus on R: Gaussians of several widths, a shifted one, and a narrow
    // bump; || f ||_inf <= C (|| f ||_l + || f' ||_l)
    let corpus: Vec<(String, Box<dyn Fn(f64) -> f64>)> = vec![
        ("gaussian".into(), Box::new(|x: f64| (-x * x).exp())),
        ("wide".into(), Box::new(|x: f64| (-0.25 * x * x).exp())),
        ("shifted".into(), Box::new(|x: f64| (-(x - 1.5) * (x - 1.5)).exp())),
        ("narrow".into(), Box::new(|x: f64| (-25.0 * x * x).exp())),
    ];
    for l in [1.0f64, 2.0] {
        let mut fitted = 0.0f64;
        let mut refined = 0.0f64;
        for (_, f) in &corpus {
            for (n, acc) in [(4000usize, &mut fitted), (8000usize, &mut refined)] {
                let (lo, hi) = (-12.0, 12.0);
                let dx = (hi - lo) / n as f64;
                let mut sup = 0.0f64;
                let mut nl = 0.0f64;
                let mut dl = 0.0f64;
                for i in 0..n {
                    let x = lo + (i as f64 + 0.5) * dx;
                    let v = f(x).abs();
                    sup = sup.max(v);
                    nl += v.powf(l) * dx;
                    let d = ((f(x + 1e-5) - f(x - 1e-5)) / 2e-5).abs();
                    dl += d.powf(l) * dx;
                }
                let ratio = sup / (nl.powf(1.0 / l) + dl.powf(1.0 / l));
                *acc = acc.max(ratio);
            }
        }
        out.push(SobolevEntry {
            label: format!("sup <= C (||f||_{l} + ||f'||_{l})"),
            fitted_constant: fitted,
            refined_constant: refined,
        });
    }
    // Mellin-pair seminorm: H_inf^(k,sigma)(Mf) <= B_1^(k,sigma)(f), constant 1
    let f = |t: f64| c64((-t - 1.0 / t).exp());
    let grid = LogGridFn::from_function(f, 0.01, 1500, (-40.0, 40.0));
    for k in [0u32, 1] {
        let sigma = 0.8;
        // B_1^(k,sigma): int |f^(k)(t) t^(sigma+k)| dt/t
        let mut b1 = 0.0f64;
        for i in 0..grid.samples.len() {
            let t = grid.t(i);
            let v = if k == 0 {
                grid.samples[i].norm()
            } else {
                let hh = 1e-5 * t;
                ((f(t + hh) - f(t - hh)) / (2.0 * hh)).norm()
            };
            b1 += v * t.powf(sigma + k as f64) * grid.h;
        }
        // H_inf over a tau-grid of s (s+1) ... (s+k-1) M(s)
        let mut h_inf = 0.0f64;
        for j in 0..200 {
            let s = Complex64::new(sigma, -30.0 + 60.0 * j as f64 / 199.0);
            let mut m = grid.mellin(s)?;
            for i in 0..k {
                m *= s + c64(i as f64);
            }
            h_inf = h_inf.max(m.norm());
        }
        out.push(SobolevEntry {
            label: format!("H_inf^({k},0.8)(Mf) <= B_1^({k},0.8)(f)"),
            fitted_constant: h_inf / b1,
            refined_constant: 1.0,
        });
    }
    Ok(out)
}

/// Log-log slope of a positive function between two abscissae.
pub fn loglog_slope(y1: f64, v1: f64, y2: f64, v2: f64) -> f64 {
    (v2.ln() - v1.ln()) / (y2.ln() - y1.ln())
}

/// Sup over x of |E - E_N| at a given height, for the cross-check of the
/// global Whittaker envelope.
pub fn eis_nonconstant_sup(s: Complex64, y: f64, x_samples: usize) -> Result<f64> {
    let ev = Evaluator::new(EisSpec::plain(s))?;
    let ct = ev.constant_term(y)?;
    let mut sup = 0.0f64;
    for j in 0..x_samples {
        let x = j as f64 / x_samples as f64;
        sup = sup.max((ev.eval(Point::new(x, y)?)? - ct).norm());
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mellin_of_exponential_is_gamma() {
        // M[e^-y](s) = Gamma(s); at s = 2 the value is 1.
        let grid = LogGridFn::from_function(
            |t| c64((-t).exp()),
            DEFAULT_H,
            DEFAULT_K,
            (0.0, f64::INFINITY),
        );
        let v = grid.mellin(c64(2.0)).unwrap();
        assert!((v - ONE).norm() < 1e-10, "{v}");
        // and against the Gamma implementation at a complex point
        let s = Complex64::new(1.3, 0.7);
        let g = crate::special::gamma(s).unwrap();
        assert!((grid.mellin(s).unwrap() - g).norm() < 1e-9 * g.norm());
    }

    #[test]
    fn mellin_of_gaussian_value() {
        // M[e^(-pi y^2)](1) = 1/2 (substitute u = pi y^2)
        let grid = LogGridFn::from_function(
            |t| c64((-PI * t * t).exp()),
            DEFAULT_H,
            650,
            (0.0, f64::INFINITY),
        );
        let v = grid.mellin(ONE).unwrap();
        assert!((v - c64(0.5)).norm() < 1e-10);
    }

    #[test]
    fn mellin_band_violation_is_an_error() {
        let grid = LogGridFn::from_function(|t| c64((-t).exp()), 0.05, 200, (0.0, 50.0));
        assert!(matches!(
            grid.mellin(c64(-1.0)),
            Err(Error::BandViolation { .. })
        ));
    }

    #[test]
    fn mellin_matches_bessel_closed_form() {
        // M[e^(-y - 1/y)](s) = 2 K_s(2)
        let grid = LogGridFn::from_function(
            |t| c64((-t - 1.0 / t).exp()),
            DEFAULT_H,
            DEFAULT_K,
            (-f64::INFINITY, f64::INFINITY),
        );
        for &s in &[c64(0.7), Complex64::new(0.2, 1.1)] {
            let m = grid.mellin(s).unwrap();
            let k = 2.0 * bessel_k(s, 2.0).unwrap();
            assert!((m - k).norm() < 1e-10 * (1.0 + k.norm()), "s={s}");
        }
    }

    #[test]
    fn mellin_round_trip() {
        let f = |t: f64| c64((-t - 1.0 / t).exp());
        let grid = LogGridFn::from_function(f, DEFAULT_H, DEFAULT_K, (-40.0, 40.0));
        for &y in &[0.4, 1.0, 2.7] {
            let v = inverse_mellin(|s| grid.mellin(s).unwrap(), 0.5, y, 60.0, 4000);
            assert!((v - f(y)).norm() < 1e-8, "y={y}: {v} vs {}", f(y));
        }
    }

    #[test]
    fn f1_decomposition_basics() {
        let even_f = |t: f64| c64((-t * t).exp());
        let t = 0.8;
        assert!(f1_decompose_real(&even_f, false, t).norm() < 1e-15);
        assert!((f1_decompose_real(&even_f, true, t) - even_f(t)).norm() < 1e-15);
        // f(z) = z has only the n = -1 angular coefficient, equal to t
        let f = |z: Complex64| z;
        for n in -2i32..=2 {
            let c = f1_decompose_complex(&f, n, 1.3);
            if n == -1 {
                assert!((c - c64(1.3)).norm() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12, "n={n}: {c}");
            }
        }
        // radial functions have only the n = 0 coefficient
        let radial = |z: Complex64| c64((-z.norm_sqr()).exp());
        assert!(f1_decompose_complex(&radial, 3, 0.9).norm() < 1e-13);
    }

    #[test]
    fn whittaker_two_paths_agree() {
        for &s in &[c64(0.3), Complex64::new(0.0, 0.8), Complex64::new(0.25, 0.4)] {
            for &y in &[0.5, 1.7, 3.0] {
                let a = whittaker_arch_direct(s, y).unwrap();
                let b = whittaker_arch_bessel(s, y).unwrap();
                assert!(
                    (a - b).norm() <= 1e-8 * (1.0 + a.norm()),
                    "s={s}, y={y}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn whittaker_calibration_constant_is_two() {
        // the closed form is exactly 2 sqrt(y) K_s(2 pi y)
        let c = whittaker_calibration(c64(0.3)).unwrap();
        assert!((c - c64(2.0)).norm() < 1e-9, "{c}");
    }

    #[test]
    fn whittaker_decay_slopes() {
        // large |y|: rapid decay beats y^-10 between successive doublings
        let s = c64(0.3);
        let v2 = whittaker_arch_bessel(s, 2.0).unwrap().norm();
        let v4 = whittaker_arch_bessel(s, 4.0).unwrap().norm();
        let slope_large = loglog_slope(2.0, v2, 4.0, v4);
        assert!(slope_large < -10.0, "large-y slope {slope_large}");
        // small |y|: |W| ~ y^(1/2 - Re s), slope within 0.05
        let y1 = 2.0f64.powi(-9);
        let y2 = 2.0f64.powi(-11);
        let w1 = whittaker_arch_direct(s, y1).unwrap().norm();
        let w2 = whittaker_arch_direct(s, y2).unwrap().norm();
        let slope_small = loglog_slope(y1, w1, y2, w2);
        assert!(
            (slope_small - (0.5 - s.re)).abs() < 0.05,
            "small-y slope {slope_small} vs {}",
            0.5 - s.re
        );
    }

    #[test]
    fn global_sum_decays_super_polynomially() {
        let s = Complex64::new(0.0, 0.6);
        let s4 = global_whittaker_sum(s, 4.0).unwrap();
        let s8 = global_whittaker_sum(s, 8.0).unwrap();
        assert!(s8 < s4 * 2.0f64.powi(-10), "{s8} vs {s4}");
        // graceful underflow to zero at very large heights
        assert_eq!(global_whittaker_sum(s, 200.0).unwrap(), 0.0);
    }

    #[test]
    fn global_sum_dominates_nonconstant_part() {
        let s = Complex64::new(0.0, 0.35);
        let y = 2.0;
        let sup = eis_nonconstant_sup(s, y, 32).unwrap();
        let envelope = global_whittaker_sum(s, y).unwrap();
        assert!(sup <= envelope * (1.0 + 1e-9), "sup {sup} vs envelope {envelope}");
        assert!(envelope <= 4.0 * sup.max(1e-300), "envelope not wildly loose");
    }

    #[test]
    fn sobolev_constants_finite_and_stable() {
        let entries = sobolev_checks().unwrap();
        assert!(!entries.is_empty());
        for e in &entries {
            assert!(e.fitted_constant.is_finite() && e.fitted_constant > 0.0);
            if e.label.starts_with("sup") {
                let rel = (e.fitted_constant - e.refined_constant).abs() / e.fitted_constant;
                assert!(rel < 0.1, "{}: unstable constant {rel}", e.label);
            } else {
                // the Mellin-pair inequality holds with constant 1
                assert!(e.fitted_constant <= 1.0 + 1e-9, "{}", e.label);
            }
        }
    }

    #[test]
    fn narrow_bump_still_satisfies_inequality() {
        // scaling family: f(Lx) has sup unchanged, ||f||_l shrinking; only
        // the derivative term can carry the bound, and it does.
        for lam in [1.0f64, 5.0, 25.0] {
            let f = |x: f64| (-lam * x * x).exp();
            let n = 20000;
            let (lo, hi) = (-14.0, 14.0);
            let dx = (hi - lo) / n as f64;
            let (mut sup, mut n1, mut d1) = (0.0f64, 0.0f64, 0.0f64);
            for i in 0..n {
                let x = lo + (i as f64 + 0.5) * dx;
                sup = sup.max(f(x));
                n1 += f(x) * dx;
                d1 += ((f(x + 1e-6) - f(x - 1e-6)) / 2e-6).abs() * dx;
            }
            assert!(sup <= 1.0 * (n1 + d1), "lambda={lam}");
        }
    }
}
