//! Shared oracles for integration tests. Everything here is deliberately
//! elementary (lattice sums, Euler-Maclaurin tails, brute-force searches) and
//! independent of the library's own evaluation paths.

#![allow(dead_code)]

use eisreg::eisenstein::Point;
use num_complex::Complex64;
use std::f64::consts::PI;

pub const C1: Complex64 = Complex64::new(1.0, 0.0);

/// Hurwitz zeta sum_{k>=0} (a+k)^{-s} for Re s > 1, a > 0, by
/// Euler-Maclaurin with a modest cutoff.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Complex64 {
    let m = 50u32;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..m {
        acc += (-s * (a + k as f64).ln()).exp();
    }
    let x = a + m as f64;
    let xp = (-s * x.ln()).exp(); // x^{-s}
    acc += xp * x / (s - 1.0) + xp * 0.5;
    // first three Bernoulli corrections
    let b2 = s * xp / x / 12.0;
    let b4 = s * (s + 1.0) * (s + 2.0) * xp / (x * x * x) / 720.0;
    let b6 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * xp / x.powi(5) / 30240.0;
    acc + b2 - b4 + b6
}

/// Tanh-sinh quadrature of int_0^1 g(t) dt; robust against algebraic
/// endpoint singularities.
pub fn tanh_sinh_01<F: Fn(f64) -> Complex64>(g: F) -> Complex64 {
    let h = 7.0 / 160.0;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in -160i32..=160 {
        let u = k as f64 * h;
        let s = (PI / 2.0) * u.sinh();
        let t = 0.5 * (1.0 + s.tanh());
        if t <= 0.0 || t >= 1.0 {
            continue;
        }
        let wgt = (PI / 4.0) * u.cosh() / s.cosh().powi(2);
        acc += g(t) * (wgt * h);
    }
    acc
}

/// int_R (t^2+1)^{-w} dt by the tangent substitution, independent of any
/// Gamma implementation.
pub fn beta_constant(w: Complex64) -> Complex64 {
    // t = tan(theta): integral = 2 int_0^{pi/2} cos^{2w-2} theta dtheta
    2.0 * tanh_sinh_01(|t| {
        let th = (PI / 2.0) * (1.0 - t);
        ((2.0 * w - 2.0) * th.cos().ln()).exp() * (PI / 2.0)
    })
}

/// Classical-normalization Eisenstein series E(z, w) = sum_{Gamma_inf\Gamma}
/// Im(g z)^w computed from the full lattice sum
/// sum'_{(c,d)} y^w / |cz+d|^{2w} = 2 zeta(2w) E(z, w)
/// with Euler-Maclaurin acceleration of the inner d-sums and a closed-form
/// tail over |c| > C, so the truncation error is far below 1e-10 relative.
pub fn epstein_eisenstein_oracle(w: Complex64, z: Point) -> Complex64 {
    let (x, y) = (z.x, z.y);
    let c_cut = 400i64;
    let d_cut = 2000i64;
    let mut total = Complex64::new(0.0, 0.0);
    // c = 0: 2 zeta(2w) y^w  (the d-sum; fold into the normalization later)
    let zeta2w = hurwitz_zeta(2.0 * w, 1.0);
    total += 2.0 * zeta2w * (w * y.ln()).exp();
    for c in 1..=c_cut {
        for sign in [-1.0f64, 1.0] {
            let cf = c as f64 * sign;
            let a2 = cf * cf * y * y;
            let f = |u: f64| {
                let v = cf * x + u;
                (-w * (v * v + a2).ln()).exp()
            };
            let fp = |u: f64| {
                let v = cf * x + u;
                -w * 2.0 * v * (-(w + 1.0) * (v * v + a2).ln()).exp()
            };
            let mut s = Complex64::new(0.0, 0.0);
            for d in -d_cut..=d_cut {
                s += f(d as f64);
            }
            // Euler-Maclaurin tails on both sides:
            // sum_{d > D} f = int_D^inf f - f(D)/2 - f'(D)/12 + ...
            for side in [1.0f64, -1.0] {
                let dcut = side * d_cut as f64;
                let tail_int = half_line_integral(&f, dcut, side);
                s += tail_int - f(dcut) * 0.5 - side * fp(dcut) / 12.0;
            }
            total += s * (w * y.ln()).exp();
        }
    }
    // |c| > C: S(c) = y^w (|c| y)^{1-2w} * int (t^2+1)^{-w} dt up to
    // exponentially small Poisson corrections.
    let iw = beta_constant(w);
    let tail_c = 2.0
        * iw
        * ((1.0 - w) * y.ln()).exp()
        * hurwitz_zeta(2.0 * w - 1.0, (c_cut + 1) as f64);
    total += tail_c;
    total / (2.0 * zeta2w)
}

/// int_{V}^{side * inf} f along the real line, mapped to [0,1] by u = V/t
/// (valid for |f| ~ u^{-2w} decay and V > 0 on the right, V < 0 left).
fn half_line_integral<F: Fn(f64) -> Complex64>(f: &F, v: f64, side: f64) -> Complex64 {
    // int_v^inf f(u) du with u = v/t, du = -v/t^2 dt => int_0^1 f(v/t) v/t^2 dt
    tanh_sinh_01(|t| f(v / t) * (v / (t * t))) * side
}
