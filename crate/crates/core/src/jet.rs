//! Finite Laurent jets at a numeric anchor.
//!
//! A [`Jet`] stores the plain Laurent coefficients `a_k` of a meromorphic
//! function around an anchor point, for orders `k_min ..= k_max`:
//!
//! ```text
//! f(anchor + h) = sum_k a_k h^k
//! ```
//!
//! Every residue, derivative and principal part in this crate is carried by a
//! jet. Coefficients of poles and derivatives in the usual normalization
//! `f(s) = sum_{k<0} f^(k)/(-k)! h^k + sum_{k>=0} f^(k)/k! h^k` are recovered
//! through [`Jet::df`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Clone, Debug)]
pub struct Jet {
    anchor: Complex64,
    k_min: i32,
    coeffs: Vec<Complex64>,
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl Jet {
    pub fn new(anchor: Complex64, k_min: i32, coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "jet must carry at least one coefficient");
        Jet {
            anchor,
            k_min,
            coeffs,
        }
    }

    /// Jet of the constant function.
    pub fn constant(anchor: Complex64, value: Complex64, k_max: i32) -> Self {
        assert!(k_max >= 0);
        let mut coeffs = vec![ZERO; (k_max + 1) as usize];
        coeffs[0] = value;
        Jet::new(anchor, 0, coeffs)
    }

    /// Jet of the identity map `s -> s` at the anchor.
    pub fn variable(anchor: Complex64, k_max: i32) -> Self {
        assert!(k_max >= 0);
        let mut coeffs = vec![ZERO; (k_max + 1) as usize];
        coeffs[0] = anchor;
        if k_max >= 1 {
            coeffs[1] = ONE;
        }
        Jet::new(anchor, 0, coeffs)
    }

    /// Jet of `s -> value * base^(s - anchor)` with `base = exp(log_base)`,
    /// i.e. coefficients `value * log_base^k / k!`.
    pub fn exponential(anchor: Complex64, value: Complex64, log_base: Complex64, k_max: i32) -> Self {
        assert!(k_max >= 0);
        let mut coeffs = Vec::with_capacity((k_max + 1) as usize);
        let mut c = value;
        coeffs.push(c);
        for k in 1..=k_max {
            c *= log_base / (k as f64);
            coeffs.push(c);
        }
        Jet::new(anchor, 0, coeffs)
    }

    /// Pure monomial `a * h^k` seen as a one-coefficient jet.
    pub fn monomial(anchor: Complex64, a: Complex64, k: i32) -> Self {
        Jet::new(anchor, k, vec![a])
    }

    pub fn anchor(&self) -> Complex64 {
        self.anchor
    }

    pub fn k_min(&self) -> i32 {
        self.k_min
    }

    pub fn k_max(&self) -> i32 {
        self.k_min + self.coeffs.len() as i32 - 1
    }

    /// Plain Laurent coefficient of order `k` (zero outside the stored range).
    pub fn coeff(&self, k: i32) -> Complex64 {
        if k < self.k_min || k > self.k_max() {
            ZERO
        } else {
            self.coeffs[(k - self.k_min) as usize]
        }
    }

    /// Coefficient of order -1.
    pub fn residue(&self) -> Complex64 {
        self.coeff(-1)
    }

    /// Laurent data in the factorial normalization: `df(k) = a_k * k!` for
    /// `k >= 0` (the k-th derivative at the anchor) and `a_k * (-k)!` for
    /// `k < 0`.
    pub fn df(&self, k: i32) -> Complex64 {
        self.coeff(k) * factorial(k.unsigned_abs())
    }

    /// Value at the anchor (order-0 coefficient).
    pub fn value(&self) -> Complex64 {
        self.coeff(0)
    }

    pub fn is_regular(&self) -> bool {
        (self.k_min..0).all(|k| self.coeff(k).norm() == 0.0)
    }

    /// Evaluate the truncated expansion at `anchor + h`.
    pub fn eval(&self, h: Complex64) -> Complex64 {
        let mut acc = ZERO;
        // Horner from the top order down to k_min, then the principal part.
        for k in (0.max(self.k_min)..=self.k_max()).rev() {
            acc = acc * h + self.coeff(k);
        }
        let mut neg = ZERO;
        if self.k_min < 0 {
            for k in self.k_min..0 {
                neg += self.coeff(k) * h.powi(k);
            }
        }
        acc + neg
    }

    fn assert_same_anchor(&self, other: &Jet) {
        assert!(
            (self.anchor - other.anchor).norm() < 1e-12,
            "jet arithmetic requires a common anchor"
        );
    }

    pub fn add(&self, other: &Jet) -> Jet {
        self.assert_same_anchor(other);
        let k_min = self.k_min.min(other.k_min);
        let k_max = self.k_max().max(other.k_max());
        let coeffs = (k_min..=k_max)
            .map(|k| self.coeff(k) + other.coeff(k))
            .collect();
        Jet::new(self.anchor, k_min, coeffs)
    }

    pub fn sub(&self, other: &Jet) -> Jet {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, c: Complex64) -> Jet {
        Jet::new(
            self.anchor,
            self.k_min,
            self.coeffs.iter().map(|a| a * c).collect(),
        )
    }

    /// Laurent product. The result keeps only the orders that are fully
    /// determined by the known coefficients of both factors.
    pub fn mul(&self, other: &Jet) -> Jet {
        self.assert_same_anchor(other);
        let k_min = self.k_min + other.k_min;
        let k_max = (self.k_min + other.k_max()).min(other.k_min + self.k_max());
        let mut coeffs = vec![ZERO; (k_max - k_min + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            let ka = self.k_min + i as i32;
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = ka + other.k_min + j as i32;
                if k >= k_min && k <= k_max {
                    coeffs[(k - k_min) as usize] += a * b;
                }
            }
        }
        Jet::new(self.anchor, k_min, coeffs)
    }

    /// Multiplicative inverse. Leading coefficients that are negligible
    /// relative to the largest stored one are stripped first, so that jets of
    /// regular functions stored with `k_min < 0` (numerically zero principal
    /// part) invert correctly.
    pub fn inverse(&self) -> Result<Jet> {
        let max_norm = self
            .coeffs
            .iter()
            .map(|a| a.norm())
            .fold(0.0f64, f64::max);
        let mut lead = 0usize;
        while lead + 1 < self.coeffs.len() && self.coeffs[lead].norm() < 1e-9 * max_norm {
            lead += 1;
        }
        let a0 = self.coeffs[lead];
        if a0.norm() < 1e-300 {
            return Err(Error::NonFinite("jet inverse of zero leading coefficient"));
        }
        let k0 = self.k_min + lead as i32;
        let tail = &self.coeffs[lead..];
        let n = tail.len();
        // (a0 h^{k0} (1 + u))^{-1} = a0^{-1} h^{-k0} (1 - u + u^2 - ...)
        let mut inv = vec![ZERO; n];
        inv[0] = ONE / a0;
        for k in 1..n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += tail[j] * inv[k - j];
            }
            inv[k] = -acc / a0;
        }
        Ok(Jet::new(self.anchor, -k0, inv))
    }

    pub fn div(&self, other: &Jet) -> Result<Jet> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Derivative with respect to the variable; the top stored order is lost.
    pub fn derivative(&self) -> Jet {
        let k_min = self.k_min - 1;
        let k_max = self.k_max() - 1;
        let coeffs = (k_min..=k_max)
            .map(|k| self.coeff(k + 1) * ((k + 1) as f64))
            .collect();
        Jet::new(self.anchor, k_min, coeffs)
    }

    /// Reinterpret this jet under the substitution `s = c * t` (valid when the
    /// anchor transforms accordingly): coefficients scale by `c^k`.
    pub fn compose_scale(&self, c: Complex64, new_anchor: Complex64) -> Jet {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * c.powi(self.k_min + i as i32))
            .collect();
        Jet::new(new_anchor, self.k_min, coeffs)
    }

    pub fn truncate(&self, k_max: i32) -> Jet {
        assert!(k_max >= self.k_min);
        let len = ((k_max - self.k_min) as usize + 1).min(self.coeffs.len());
        Jet::new(self.anchor, self.k_min, self.coeffs[..len].to_vec())
    }

    /// Extract the Laurent coefficients of `f` around `anchor` by trapezoid
    /// quadrature of the Cauchy integrals over a circle of radius `radius`
    /// with `n_points` samples. The trapezoid rule is spectrally accurate on
    /// circles. The caller must ensure no singularity other than possibly the
    /// anchor itself lies on or inside the contour.
    pub fn from_fn<F>(
        mut f: F,
        anchor: Complex64,
        k_min: i32,
        k_max: i32,
        radius: f64,
        n_points: usize,
    ) -> Result<Jet>
    where
        F: FnMut(Complex64) -> Result<Complex64>,
    {
        assert!(k_max >= k_min);
        assert!(radius > 0.0 && n_points >= 8);
        let len = (k_max - k_min + 1) as usize;
        let mut coeffs = vec![ZERO; len];
        for j in 0..n_points {
            let th = 2.0 * PI * (j as f64) / (n_points as f64);
            let w = Complex64::from_polar(radius, th);
            let v = f(anchor + w)?;
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite("contour sample"));
            }
            for (i, c) in coeffs.iter_mut().enumerate() {
                let k = k_min + i as i32;
                *c += v * Complex64::from_polar(radius.powi(-k), -(k as f64) * th);
            }
        }
        let scale = 1.0 / n_points as f64;
        for c in &mut coeffs {
            *c *= scale;
        }
        Ok(Jet::new(anchor, k_min, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn residue_and_df_normalization() {
        // f(h) = 2/h^2 + 3/h + 5 + 7h
        let j = Jet::new(ZERO, -2, vec![c(2.0, 0.0), c(3.0, 0.0), c(5.0, 0.0), c(7.0, 0.0)]);
        assert_eq!(j.residue(), c(3.0, 0.0));
        assert_eq!(j.df(-2), c(4.0, 0.0)); // a_{-2} * 2!
        assert_eq!(j.df(1), c(7.0, 0.0));
        assert_eq!(j.value(), c(5.0, 0.0));
    }

    #[test]
    fn product_against_pointwise_values() {
        // jets of f(s) = exp(s) and g(s) = 1/(s - 1) at s0 = 0, multiplied and
        // compared with pointwise f*g at anchor + h; halving h must shrink the
        // error by ~2^(k_max+1).
        let k_max = 4;
        let f = Jet::from_fn(|s| Ok(s.exp()), ZERO, 0, k_max, 0.3, 64).unwrap();
        let g = Jet::from_fn(|s| Ok(ONE / (s - ONE)), ZERO, 0, k_max, 0.3, 64).unwrap();
        let fg = f.mul(&g);
        let exact = |h: Complex64| (h.exp()) / (h - ONE);
        let mut errs = Vec::new();
        for &h in &[0.1, 0.05] {
            let h = c(h, 0.0);
            errs.push((fg.eval(h) - exact(h)).norm());
        }
        let ratio = errs[0] / errs[1];
        let expected = 2f64.powi(k_max + 1);
        assert!(
            ratio > expected * 0.6 && ratio < expected * 1.7,
            "error ratio {ratio} not compatible with order {expected}"
        );
    }

    #[test]
    fn contour_recovers_simple_pole() {
        // f(s) = 1/s + 4 + s^2 around 0
        let f = |s: Complex64| Ok(ONE / s + c(4.0, 0.0) + s * s);
        let j = Jet::from_fn(f, ZERO, -1, 2, 0.05, 64).unwrap();
        assert!((j.residue() - ONE).norm() < 1e-12);
        assert!((j.value() - c(4.0, 0.0)).norm() < 1e-11);
        assert!(j.coeff(1).norm() < 1e-10);
        assert!((j.coeff(2) - ONE).norm() < 1e-9);
    }

    #[test]
    fn inverse_of_laurent_jet() {
        // f(h) = h^{-1} (1 + h); 1/f = h (1 - h + h^2 - ...)
        let j = Jet::new(ZERO, -1, vec![ONE, ONE, ZERO, ZERO]);
        let inv = j.inverse().unwrap();
        assert_eq!(inv.k_min(), 1);
        assert!((inv.coeff(1) - ONE).norm() < 1e-14);
        assert!((inv.coeff(2) + ONE).norm() < 1e-14);
        assert!((inv.coeff(3) - ONE).norm() < 1e-14);
        let prod = j.mul(&inv);
        assert!((prod.coeff(0) - ONE).norm() < 1e-14);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        let j = Jet::from_fn(|s| Ok((s * c(0.7, 0.2)).exp()), c(0.3, 0.0), 0, 5, 0.4, 64).unwrap();
        let d = j.derivative();
        let h = 1e-4;
        let fd = ((c(0.3 + h, 0.0) * c(0.7, 0.2)).exp() - (c(0.3 - h, 0.0) * c(0.7, 0.2)).exp())
            / c(2.0 * h, 0.0);
        assert!((d.value() - fd).norm() < 1e-6);
    }
}
