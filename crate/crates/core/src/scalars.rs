//! Scalar Laurent data over Q: the quotient lambda(s) = Lambda(-2s)/Lambda(2+2s),
//! the volume of the modular surface, the Mellin functionals B and C of the
//! standard Gaussian test function, spherical Hecke eigen-scalars, the
//! invariance-defect scalars of the dilation action, and the principal-part
//! assembly of the continuous-spectrum term from externally supplied traces.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::jet::{Jet, ONE, ZERO};
use crate::special::{check_contour, lambda_complete, lambda_complete_jet, zeta, DEFAULT_CONTOUR_POINTS};

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Field data for Q together with the lambda-jet at 0.
#[derive(Clone, Debug)]
pub struct ZetaConstants {
    /// Residue of the Dedekind zeta function at s = 1 (exactly 1 over Q).
    pub zeta_star: f64,
    /// Laurent jet of lambda(s) = Lambda(-2s)/Lambda(2+2s) at 0, k_min = -1.
    pub lambda_jet: Jet,
    /// Volume of the quotient, pi/3 over Q.
    pub volume: f64,
    pub d_f: u32,
    pub r1: u32,
    pub r2: u32,
}

impl ZetaConstants {
    pub fn new() -> Result<Self> {
        let lj = lambda_jet(3)?;
        Ok(ZetaConstants {
            zeta_star: 1.0,
            volume: 1.0 / lj.residue().re,
            lambda_jet: lj,
            d_f: 1,
            r1: 1,
            r2: 0,
        })
    }
}

/// Laurent jet at 0 of lambda(s) = Lambda(-2s)/Lambda(2+2s); k_min = -1 and
/// residue 1/(2 Lambda(2)) = 3/pi over Q.
pub fn lambda_jet(order_max: i32) -> Result<Jet> {
    lambda_jet_at(ZERO, order_max)
}

/// Jet of lambda at an arbitrary anchor (k_min = -1 at the pole s = 0,
/// regular elsewhere; the contour radius adapts to the poles at 0 and -1/2).
pub fn lambda_jet_at(s0: Complex64, order_max: i32) -> Result<Jet> {
    // lambda has poles at s = 0 and s = -1/2 (and at zeta zeros far away).
    let poles = [ZERO, c64(-0.5), c64(0.5)];
    let mut radius = 0.1f64;
    for &p in &poles {
        let d = (p - s0).norm();
        if d > 1e-12 {
            radius = radius.min(d / 2.0);
        }
    }
    check_contour(s0, radius, &poles)?;
    Jet::from_fn(
        |s| Ok(lambda_complete(-2.0 * s)? / lambda_complete(2.0 * s + 2.0)?),
        s0,
        -1,
        order_max,
        radius,
        DEFAULT_CONTOUR_POINTS,
    )
}

/// Jet at `s0` of the intertwining scalar m(s) = Lambda(1-2s)/Lambda(1+2s)
/// (equal to lambda(s - 1/2)); regular at 0 with m(0) = -1, simple pole at
/// s = 1/2.
pub fn m_scalar_jet(s0: Complex64, order_max: i32) -> Result<Jet> {
    let shifted = lambda_jet_at(s0 - c64(0.5), order_max)?;
    Ok(Jet::new(
        s0,
        shifted.k_min(),
        (shifted.k_min()..=shifted.k_max()).map(|k| shifted.coeff(k)).collect(),
    ))
}

/// Point value of m(s) away from s = 1/2.
pub fn m_scalar(s: Complex64) -> Result<Complex64> {
    Ok(lambda_complete(ONE - 2.0 * s)? / lambda_complete(ONE + 2.0 * s)?)
}

/// The volume of the quotient, three ways as a closed form:
/// `2 pi^{-1} zeta(2) = pi/3` and `zeta_star / lambda^(-1)(0)`.
pub fn volume_pgl2() -> Result<(f64, f64)> {
    let closed = 2.0 * PI.powi(-1) * zeta(c64(2.0))?.re;
    let via_lambda = 1.0 / lambda_jet(0)?.residue().re;
    Ok((closed, via_lambda))
}

/// The functionals of the standard Gaussian-by-indicator test function on the
/// adeles of Q: C = 1 and B = Lambda^(0)(0) (finite part of Lambda at 0).
pub fn functionals_bc() -> Result<(f64, f64)> {
    let c = 1.0;
    let b = lambda_complete_jet(ZERO, 0, 0.05)?.value().re;
    Ok((c, b))
}

/// Jet at `s0` of the normalized Hecke eigenvalue recentered at the spherical
/// point: `lam_p(s) = (p^(1/2+s) + p^(-1/2-s)) / (p^(1/2) + p^(-1/2))`, the
/// eigenvalue of T(p) on the Eisenstein series at spectral parameter 1/2 + s.
pub fn hecke_scalar(p: u64, s0: Complex64, order_max: i32) -> Jet {
    let lp = (p as f64).ln();
    let denom = (p as f64).sqrt() + 1.0 / (p as f64).sqrt();
    let up = Jet::exponential(s0, ((s0 + 0.5) * lp).exp(), c64(lp), order_max);
    let dn = Jet::exponential(s0, (-(s0 + 0.5) * lp).exp(), c64(-lp), order_max);
    up.add(&dn).scale(c64(1.0 / denom))
}

/// The three scalar functions of the dilation action at a finite place with
/// residue cardinality `q`: `mu1`, `c0`, `c1`.
#[derive(Clone, Copy, Debug)]
pub struct MvScalars {
    pub mu1: Complex64,
    pub c0: Complex64,
    pub c1: Complex64,
}

/// `mu1(s) = q^{-2s} (1 - q^{-(1-2s)}) / (1 + q^{-(1+2s)})`,
/// `c1(s) = (q^{s+1/2} - q^{-(s+1/2)}) / (q^{1/2} + q^{-1/2})`,
/// `c0(s) = (q^s + q^{-s}) / (q^{1/2} + q^{-1/2})`.
pub fn mv_scalars(q: u64, s: Complex64) -> MvScalars {
    let lq = (q as f64).ln();
    let qs = |e: Complex64| (e * lq).exp();
    let denom = (q as f64).sqrt() + 1.0 / (q as f64).sqrt();
    let mu1 = qs(-2.0 * s) * (ONE - qs(-(ONE - 2.0 * s))) / (ONE + qs(-(ONE + 2.0 * s)));
    let c1 = (qs(s + 0.5) - qs(-(s + 0.5))) / denom;
    let c0 = (qs(s) + qs(-s)) / denom;
    MvScalars { mu1, c0, c1 }
}

/// The invariance defect `lambda^(-1)(0) * c0'(-1/2)` of the regularized
/// integral under the dilation by an inverse uniformizer at `q`. Nonzero,
/// which is exactly the failure of translation invariance.
pub fn mv_defect(q: u64) -> Result<Complex64> {
    let lq = (q as f64).ln();
    let denom = (q as f64).sqrt() + 1.0 / (q as f64).sqrt();
    // c0'(s) = ln q (q^s - q^{-s}) / (q^{1/2}+q^{-1/2}) at s = -1/2
    let c0p = lq * ((-0.5f64 * lq).exp() - (0.5f64 * lq).exp()) / denom;
    let rho = lambda_jet(0)?.residue();
    Ok(rho * c0p)
}

/// Principal part of the continuous-spectrum term at the center, as a jet at
/// s = 1/2 with k_min = -2, given the two operator traces as opaque numbers:
///
/// order -2: `-(2 tr0 / zeta_star) * (zeta_star^2 C / 2)`
/// order -1: `-(2 tr0 / zeta_star) * zeta_star B + (zeta_star^2 C / 2) * trM / zeta_star`
pub fn assemble_puzzle(trace0: Complex64, trace_m: Complex64) -> Result<Jet> {
    let (c, b) = functionals_bc()?;
    let zs = 1.0; // zeta_star over Q
    let half = c64(0.5);
    let a_m2 = -(trace0 * 2.0 / zs) * (zs * zs * c / 2.0);
    let a_m1 = -(trace0 * 2.0 / zs) * (zs * b) + (zs * zs * c / 2.0) * trace_m / zs;
    Ok(Jet::new(half, -2, vec![a_m2, a_m1, ZERO]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn lambda_residue_is_three_over_pi() {
        let j = lambda_jet(2).unwrap();
        assert!((j.residue().re - 3.0 / PI).abs() < 1e-9);
        assert!(j.residue().im.abs() < 1e-12);
    }

    #[test]
    fn lambda_finite_part_closed_form() {
        // lambda^(0)(0) = Lambda'(2) Lambda^(-1)(0) / Lambda(2)^2 + Lambda^(0)(0)/Lambda(2)
        let j = lambda_jet(1).unwrap();
        let at2 = lambda_complete_jet(c64(2.0), 1, 0.05).unwrap();
        let at0 = lambda_complete_jet(ZERO, 1, 0.05).unwrap();
        let closed = at2.df(1) * at0.residue() / (at2.value() * at2.value())
            + at0.value() / at2.value();
        assert!((j.value() - closed).norm() < 1e-9);
    }

    #[test]
    fn lambda_residue_two_routes_agree() {
        // -Lambda^(-1)(0) / (2 Lambda(2)) = Lambda^(-1)(1) / (2 Lambda(2))
        let at0 = lambda_complete_jet(ZERO, 0, 0.05).unwrap();
        let at1 = lambda_complete_jet(ONE, 0, 0.05).unwrap();
        let lam2 = lambda_complete(c64(2.0)).unwrap();
        let via0 = -at0.residue() / (2.0 * lam2);
        let via1 = at1.residue() / (2.0 * lam2);
        assert!((via0 - via1).norm() < 1e-10);
        let j = lambda_jet(0).unwrap();
        assert!((j.residue() - via0).norm() < 1e-10);
    }

    #[test]
    fn residue_identity_at_zero_and_one() {
        // Lambda^(-1)(1) = D^(1/2) (2 pi)^(-r2) zeta_star reads 1 = 1 over Q.
        let at1 = lambda_complete_jet(ONE, 0, 0.05).unwrap();
        assert!((at1.residue() - ONE).norm() < 1e-9);
    }

    #[test]
    fn volume_three_ways() {
        let (closed, via_lambda) = volume_pgl2().unwrap();
        assert!(rel(closed, PI / 3.0) < 1e-10);
        assert!(rel(via_lambda, PI / 3.0) < 1e-9);
        assert!((closed - via_lambda).abs() < 1e-9);
    }

    #[test]
    fn functionals_b_and_c() {
        let (c, b) = functionals_bc().unwrap();
        assert_eq!(c, 1.0);
        // Lambda^(0)(0) = gamma/2 - ln 2 - (ln pi)/2
        let egamma = 0.577_215_664_901_532_9_f64;
        let closed = egamma / 2.0 - 2.0f64.ln() - PI.ln() / 2.0;
        assert!(rel(b, closed) < 1e-10, "B = {b} vs {closed}");
    }

    #[test]
    fn functional_b_against_mellin_quadrature_oracle() {
        // Finite part at s = 1 of s -> zeta(s) * A(s), where
        // A(s) = 2 int_0^infty e^{-pi t^2} t^s dt/t is evaluated by direct
        // quadrature on a log grid. Independent of lambda_complete_jet.
        let arch = |s: Complex64| {
            let h = 1e-3;
            let mut acc = ZERO;
            let mut k = -22000i64;
            while k <= 4200 {
                let t = ((k as f64) * h).exp();
                acc += (-PI * t * t).exp() * (s * t.ln()).exp() * h;
                k += 1;
            }
            // analytic tail of int_0^{t_min} t^{s-1} (1 - pi t^2 + ...) dt
            let t_min = (-22000.0 * h).exp();
            let tp = (s * t_min.ln()).exp();
            acc += tp / s - PI * tp * t_min * t_min / (s + 2.0);
            2.0 * acc
        };
        let f = |s: Complex64| Ok(arch(s) * zeta(s)?);
        let jet = Jet::from_fn(f, ONE, -1, 0, 0.05, 64).unwrap();
        let (_, b) = functionals_bc().unwrap();
        assert!((jet.value().re - b).abs() < 1e-8);
        assert!((jet.residue() - ONE).norm() < 1e-8);
    }

    #[test]
    fn hecke_scalar_center_values() {
        let j = hecke_scalar(2, ZERO, 1);
        assert!((j.value() - ONE).norm() < 1e-14);
        // first derivative ln2 * (sqrt2 - 1/sqrt2) / (sqrt2 + 1/sqrt2) = ln2/3
        assert!((j.df(1).re - 2.0f64.ln() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn hecke_scalar_matches_finite_differences() {
        let s0 = c64(0.2);
        let j = hecke_scalar(3, s0, 1);
        let h = 1e-5;
        let f = |s: Complex64| {
            let l3 = 3.0f64.ln();
            (((s + 0.5) * l3).exp() + ((-(s + 0.5)) * l3).exp())
                / (3.0f64.sqrt() + 1.0 / 3.0f64.sqrt())
        };
        let fd = (f(s0 + c64(h)) - f(s0 - c64(h))) / (2.0 * h);
        assert!((j.df(1) - fd).norm() < 1e-9);
    }

    #[test]
    fn mv_unitarity_on_the_critical_axis() {
        // |c0(it)|^2 + |c1(it)|^2 = 1; brute numeric check over random t.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &q in &[2u64, 3, 4, 5, 8, 9] {
            for _ in 0..50 {
                let t: f64 = rng.gen_range(-6.0..6.0);
                let s = Complex64::new(0.0, t);
                let m = mv_scalars(q, s);
                let total = m.c0.norm_sqr() + m.c1.norm_sqr();
                assert!((total - 1.0).abs() < 1e-12, "q={q} t={t} total={total}");
            }
        }
    }

    #[test]
    fn mv_c0_symmetry_at_half() {
        let m = mv_scalars(3, c64(0.5));
        assert!((m.c0 - ONE).norm() < 1e-14);
    }

    #[test]
    fn mv_defect_closed_form() {
        // (3/pi) ln2 (2^(-1/2) - 2^(1/2)) / (2^(1/2) + 2^(-1/2))
        let d = mv_defect(2).unwrap();
        let ln2 = 2.0f64.ln();
        let closed = (3.0 / PI) * ln2 * (2.0f64.powf(-0.5) - 2.0f64.sqrt())
            / (2.0f64.sqrt() + 2.0f64.powf(-0.5));
        assert!((d.re - closed).abs() < 1e-9);
        assert!(d.norm() > 1e-3, "defect must be nonzero");
    }

    #[test]
    fn puzzle_assembly_unit_inputs() {
        let z = assemble_puzzle(ZERO, ZERO).unwrap();
        assert!(z.coeff(-2).norm() == 0.0 && z.coeff(-1).norm() == 0.0);
        let a = assemble_puzzle(ONE, ZERO).unwrap();
        assert!((a.coeff(-2) + ONE).norm() < 1e-12); // -zeta_star * C = -1
        let b = assemble_puzzle(ZERO, ONE).unwrap();
        assert!((b.coeff(-1) - c64(0.5)).norm() < 1e-12); // zeta_star * C / 2
    }

    #[test]
    fn m_scalar_value_at_zero() {
        let j = m_scalar_jet(ZERO, 1).unwrap();
        assert!((j.value() + ONE).norm() < 1e-10, "m(0) = -1");
    }
}
