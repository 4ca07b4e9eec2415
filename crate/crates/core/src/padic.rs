//! Exact calculus of Schwartz functions on Q_p and Q_p^2.
//!
//! A locally constant, compactly supported function is stored as a ball
//! array: per coordinate a support exponent d (support inside p^d Z_p) and an
//! invariance exponent delta (invariant under translation by p^delta Z_p),
//! with one complex value per cell of (p^d Z_p) / (p^delta Z_p). Support and
//! invariance are kept tight by canonicalization, so every integer-valued
//! statement (the index identities under Fourier transform, in particular)
//! is checked exactly; only the cell values are floating point.
//!
//! The additive character has conductor c: trivial on p^(-c) Z_p, not on
//! p^(-c-1) Z_p; the self-dual measure gives Z_p mass q^(-c/2).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jet::{ONE, ZERO};

use std::f64::consts::PI;

fn pow_i(p: u64, e: u32) -> i64 {
    (p as i64).pow(e)
}

#[derive(Clone, Debug)]
pub struct PadicSchwartz {
    p: u64,
    d: Vec<i32>,
    delta: Vec<i32>,
    values: Vec<Complex64>,
}

impl PadicSchwartz {
    /// Build from raw ball-array data and canonicalize.
    pub fn new(p: u64, d: Vec<i32>, delta: Vec<i32>, values: Vec<Complex64>) -> Result<Self> {
        if d.len() != delta.len() || d.is_empty() || d.len() > 2 {
            return Err(Error::InvalidInput("dimension must be 1 or 2".into()));
        }
        let mut expect = 1usize;
        for (di, de) in d.iter().zip(&delta) {
            if di > de {
                return Err(Error::InvalidInput(format!(
                    "support index {di} exceeds invariance index {de}"
                )));
            }
            expect *= pow_i(p, (de - di) as u32) as usize;
        }
        if values.len() != expect {
            return Err(Error::InvalidInput(format!(
                "expected {expect} cells, got {}",
                values.len()
            )));
        }
        let mut f = PadicSchwartz { p, d, delta, values };
        f.canonicalize();
        Ok(f)
    }

    /// Indicator of (p^k Z_p)^dim.
    pub fn ball_indicator(p: u64, dim: usize, k: i32) -> Self {
        PadicSchwartz {
            p,
            d: vec![k; dim],
            delta: vec![k; dim],
            values: vec![ONE],
        }
    }

    /// Indicator of the unit coset 1 + p Z_p.
    pub fn unit_coset_indicator(p: u64) -> Self {
        let mut values = vec![ZERO; p as usize];
        values[1] = ONE;
        PadicSchwartz {
            p,
            d: vec![0],
            delta: vec![1],
            values,
        }
    }

    pub fn dim(&self) -> usize {
        self.d.len()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm() == 0.0)
    }

    fn levels(&self) -> Vec<u32> {
        self.d
            .iter()
            .zip(&self.delta)
            .map(|(d, de)| (de - d) as u32)
            .collect()
    }

    fn cell_count(&self, i: usize) -> i64 {
        pow_i(self.p, self.levels()[i])
    }

    fn index_of(&self, u: &[i64]) -> usize {
        let mut idx = 0usize;
        for (i, &ui) in u.iter().enumerate() {
            let len = self.cell_count(i);
            idx = idx * len as usize + ui.rem_euclid(len) as usize;
        }
        idx
    }

    fn canonicalize(&mut self) {
        if self.is_zero() {
            self.d = vec![0; self.dim()];
            self.delta = vec![0; self.dim()];
            self.values = vec![ZERO];
            return;
        }
        let p = self.p as i64;
        loop {
            let mut changed = false;
            for coord in 0..self.dim() {
                let level = (self.delta[coord] - self.d[coord]) as u32;
                if level == 0 {
                    continue;
                }
                let len = pow_i(self.p, level);
                // raise d: all cells with unit digit (u % p != 0) vanish?
                let support_shrinks = self.cells().all(|u| {
                    u[coord] % p == 0 || self.values[self.index_of(&u)].norm() == 0.0
                });
                if support_shrinks {
                    self.remap(coord, level - 1, |u_new| u_new * p);
                    self.d[coord] += 1;
                    changed = true;
                    continue;
                }
                // lower delta: invariant under adding p^(level-1)?
                let step = len / p;
                let invariant = self.cells().all(|u| {
                    let mut shifted = u.clone();
                    shifted[coord] = (shifted[coord] + step).rem_euclid(len);
                    (self.values[self.index_of(&u)] - self.values[self.index_of(&shifted)]).norm()
                        == 0.0
                });
                if invariant {
                    self.remap(coord, level - 1, |u_new| u_new);
                    self.delta[coord] -= 1;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    /// Rebuild the value array with coordinate `coord` shrunk to `new_level`
    /// digits; `old_of_new` lifts a new cell label to an old one.
    fn remap(&mut self, coord: usize, new_level: u32, old_of_new: impl Fn(i64) -> i64) {
        let mut new_levels = self.levels();
        new_levels[coord] = new_level;
        let lens: Vec<i64> = new_levels.iter().map(|&l| pow_i(self.p, l)).collect();
        let total: usize = lens.iter().map(|&l| l as usize).product();
        let mut values = vec![ZERO; total];
        let mut u = vec![0i64; self.dim()];
        for (flat, slot) in values.iter_mut().enumerate() {
            let mut rem = flat;
            for i in (0..self.dim()).rev() {
                u[i] = (rem % lens[i] as usize) as i64;
                rem /= lens[i] as usize;
            }
            let mut old = u.clone();
            old[coord] = old_of_new(u[coord]);
            *slot = self.values[self.index_of(&old)];
        }
        self.values = values;
    }

    fn cells(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        let lens: Vec<i64> = (0..self.dim()).map(|i| self.cell_count(i)).collect();
        let total: usize = lens.iter().map(|&l| l as usize).product();
        (0..total).map(move |flat| {
            let mut u = vec![0i64; lens.len()];
            let mut rem = flat;
            for i in (0..lens.len()).rev() {
                u[i] = (rem % lens[i] as usize) as i64;
                rem /= lens[i] as usize;
            }
            u
        })
    }

    /// The (support, invariance, multiplicative) indices. The zero function
    /// reports the documented sentinels (i32::MAX, i32::MIN, 0).
    pub fn indices(&self) -> (i32, i32, u32) {
        if self.is_zero() {
            return (i32::MAX, i32::MIN, 0);
        }
        let d = *self.d.iter().min().unwrap();
        let delta = *self.delta.iter().max().unwrap();
        (d, delta, self.mult_index())
    }

    /// Support and invariance indices only (cheap; the multiplicative index
    /// slot is 0).
    pub fn indices_support_only(&self) -> (i32, i32, u32) {
        if self.is_zero() {
            return (i32::MAX, i32::MIN, 0);
        }
        (
            *self.d.iter().min().unwrap(),
            *self.delta.iter().max().unwrap(),
            0,
        )
    }

    /// Evaluate on a grid: coordinate i of the point is p^base_d[i] * c[i]
    /// with c[i] given modulo p^digits[i] (digits must reach delta[i]).
    fn value_scaled(&self, base_d: &[i32], digits: &[u32], c: &[i64]) -> Complex64 {
        let p = self.p as i64;
        let mut u = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let shift = self.d[i] - base_d[i];
            debug_assert!(shift >= 0 && (self.delta[i] - base_d[i]) as u32 <= digits[i]);
            let modulus = pow_i(self.p, digits[i]);
            let ci = c[i].rem_euclid(modulus);
            let div = p.pow(shift as u32);
            if ci % div != 0 {
                return ZERO;
            }
            u.push(ci / div);
        }
        self.values[self.index_of(&u)]
    }

    /// Smallest m >= 0 such that the documented generator family of the level-m
    /// congruence subgroup of GL_dim(Z_p) leaves the function invariant
    /// (exhaustive over units in dimension 1). Quadratic in the common grid
    /// size, so meant for functions of modest spread delta - D.
    pub fn mult_index(&self) -> u32 {
        let cap = (*self.delta.iter().max().unwrap() - *self.d.iter().min().unwrap()) as u32;
        for m in 0..=cap {
            if self.invariant_at_congruence_level(m) {
                return m;
            }
        }
        cap
    }

    /// Exact invariance test of Phi(x kappa) = Phi(x) for the documented
    /// generator family of the congruence subgroup at level m.
    pub fn invariant_at_congruence_level(&self, m: u32) -> bool {
        let base_d = *self.d.iter().min().unwrap();
        let digits = (*self.delta.iter().max().unwrap() - base_d) as u32;
        self.invariant_at_level(m, base_d, digits)
    }

    fn invariant_at_level(&self, m: u32, base_d: i32, digits: u32) -> bool {
        if digits == 0 {
            return true;
        }
        let p = self.p as i64;
        let modulus = pow_i(self.p, digits);
        let units: Vec<i64> = (1..modulus).filter(|u| u % p != 0).collect();
        let level_units: Vec<i64> = units
            .iter()
            .copied()
            .filter(|u| (u - 1).rem_euclid(pow_i(self.p, m.min(digits))) == 0)
            .collect();
        match self.dim() {
            1 => level_units
                .iter()
                .all(|&u| self.matches_under(base_d, digits, |c| vec![c[0] * u])),
            2 => {
                let pm = pow_i(self.p, m.min(digits));
                // diagonal families and scalars
                for &u in &level_units {
                    for mat in [[[u, 0], [0, 1]], [[1, 0], [0, u]], [[u, 0], [0, u]]] {
                        if !self.matches_under(base_d, digits, |c| apply2(c, &mat, modulus)) {
                            return false;
                        }
                    }
                }
                // elementary one-parameter families at level m
                for t in 0..(modulus / pm) {
                    let s = (t * pm).rem_euclid(modulus);
                    for mat in [[[1, s], [0, 1]], [[1, 0], [s, 1]]] {
                        if !self.matches_under(base_d, digits, |c| apply2(c, &mat, modulus)) {
                            return false;
                        }
                    }
                }
                // the Weyl rotation belongs to level 0 only
                if m == 0 {
                    let w = [[0, 1], [-1, 0]];
                    if !self.matches_under(base_d, digits, |c| apply2(c, &w, modulus)) {
                        return false;
                    }
                }
                true
            }
            _ => unreachable!(),
        }
    }

    fn matches_under(
        &self,
        base_d: i32,
        digits: u32,
        action: impl Fn(&[i64]) -> Vec<i64>,
    ) -> bool {
        let modulus = pow_i(self.p, digits);
        let dim = self.dim();
        let bases = vec![base_d; dim];
        let digit_vec = vec![digits; dim];
        let total = (modulus as usize).pow(dim as u32);
        for flat in 0..total {
            let mut c = vec![0i64; dim];
            let mut rem = flat;
            for x in c.iter_mut() {
                *x = (rem % modulus as usize) as i64;
                rem /= modulus as usize;
            }
            let moved = action(&c);
            let a = self.value_scaled(&bases, &digit_vec, &c);
            let b = self.value_scaled(&bases, &digit_vec, &moved);
            if (a - b).norm() > 1e-12 {
                return false;
            }
        }
        true
    }

    /// Exact finite Fourier transform along the listed coordinates, for an
    /// additive character of conductor c_psi and the self-dual measure.
    pub fn fourier(&self, c_psi: i32, coords: &[usize]) -> PadicSchwartz {
        let mut out = self.clone();
        for &coord in coords {
            out = out.fourier_one(c_psi, coord);
        }
        out.canonicalize();
        out
    }

    fn fourier_one(&self, c_psi: i32, coord: usize) -> PadicSchwartz {
        let level = (self.delta[coord] - self.d[coord]) as u32;
        let len = pow_i(self.p, level) as usize;
        let scale = (self.p as f64).powf(-(self.delta[coord] as f64) - c_psi as f64 / 2.0);
        let mut new = self.clone();
        new.d[coord] = -c_psi - self.delta[coord];
        new.delta[coord] = -c_psi - self.d[coord];
        // kernel exp(-2 pi i u v / p^level) along the transformed axis
        let roots: Vec<Complex64> = (0..len)
            .map(|k| Complex64::from_polar(1.0, -2.0 * PI * k as f64 / len as f64))
            .collect();
        let lens: Vec<usize> = (0..self.dim())
            .map(|i| self.cell_count(i) as usize)
            .collect();
        let stride: usize = lens[coord + 1..].iter().product();
        let total = self.values.len();
        let mut values = vec![ZERO; total];
        let block = stride * len;
        for base in 0..total {
            // walk over positions whose coord digit is 0
            if (base / stride) % len != 0 {
                continue;
            }
            for v in 0..len {
                let mut acc = ZERO;
                for u in 0..len {
                    acc += self.values[base + u * stride] * roots[(u * v) % len];
                }
                values[base + v * stride] = acc * scale;
            }
        }
        debug_assert!(block <= total.max(1));
        new.values = values;
        new
    }

    /// x -> -x (used by the double-transform identity F F phi = phi(-x)).
    pub fn negate_arg(&self) -> PadicSchwartz {
        let mut out = self.clone();
        let lens: Vec<i64> = (0..self.dim()).map(|i| self.cell_count(i)).collect();
        for u in self.cells() {
            let neg: Vec<i64> = u
                .iter()
                .zip(&lens)
                .map(|(&ui, &len)| (-ui).rem_euclid(len))
                .collect();
            let dst = out.index_of(&neg);
            out.values[dst] = self.values[self.index_of(&u)];
        }
        out
    }

    /// Largest pointwise difference against another function on the common
    /// refinement grid.
    pub fn max_difference(&self, other: &PadicSchwartz) -> f64 {
        assert_eq!(self.dim(), other.dim());
        assert_eq!(self.p, other.p);
        let dim = self.dim();
        let bases: Vec<i32> = (0..dim).map(|i| self.d[i].min(other.d[i])).collect();
        let digits: Vec<u32> = (0..dim)
            .map(|i| (self.delta[i].max(other.delta[i]) - bases[i]) as u32)
            .collect();
        let moduli: Vec<i64> = digits.iter().map(|&g| pow_i(self.p, g)).collect();
        let total: usize = moduli.iter().map(|&m| m as usize).product();
        let mut worst = 0.0f64;
        for flat in 0..total {
            let mut c = vec![0i64; dim];
            let mut rem = flat;
            for i in (0..dim).rev() {
                c[i] = (rem % moduli[i] as usize) as i64;
                rem /= moduli[i] as usize;
            }
            let a = self.value_scaled(&bases, &digits, &c);
            let b = other.value_scaled(&bases, &digits, &c);
            worst = worst.max((a - b).norm());
        }
        worst
    }

    /// Swap the two coordinates (dim 2).
    pub fn swap_coords(&self) -> PadicSchwartz {
        assert_eq!(self.dim(), 2);
        let lens: Vec<i64> = (0..2).map(|i| self.cell_count(i)).collect();
        let mut out = PadicSchwartz {
            p: self.p,
            d: vec![self.d[1], self.d[0]],
            delta: vec![self.delta[1], self.delta[0]],
            values: vec![ZERO; self.values.len()],
        };
        for u in self.cells() {
            let swapped = vec![u[1], u[0]];
            let mut idx = 0usize;
            for (i, &vi) in swapped.iter().enumerate() {
                let len = [lens[1], lens[0]][i];
                idx = idx * len as usize + vi as usize;
            }
            out.values[idx] = self.values[self.index_of(&u)];
        }
        out
    }

    /// Dilate one coordinate by a unit (x_i -> x_i * u).
    pub fn scale_coord_by_unit(&self, coord: usize, unit: i64) -> PadicSchwartz {
        let p = self.p as i64;
        assert!(unit % p != 0);
        let mut out = self.clone();
        let len = self.cell_count(coord);
        for u_cell in self.cells() {
            let mut src = u_cell.clone();
            src[coord] = (u_cell[coord] * unit).rem_euclid(len);
            let dst = out.index_of(&u_cell);
            out.values[dst] = self.values[self.index_of(&src)];
        }
        out
    }

    /// L^l norm with the conductor-0 self-dual measure.
    pub fn norm_l(&self, l: f64) -> f64 {
        assert!(l >= 1.0);
        let mass: f64 = self
            .delta
            .iter()
            .map(|&de| (self.p as f64).powi(-de))
            .product();
        let sum: f64 = self.values.iter().map(|v| v.norm().powf(l)).sum();
        (sum * mass).powf(1.0 / l)
    }

    pub fn norm_inf(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Weighted seminorm || |x|^sigma phi ||_l, exact per cell (the cell at
    /// the origin integrates the weight in closed form).
    pub fn seminorm(&self, l: f64, sigma: &[f64]) -> f64 {
        assert!(l >= 1.0);
        assert_eq!(sigma.len(), self.dim());
        let q = self.p as f64;
        let mut acc = 0.0f64;
        for u in self.cells() {
            let fv = self.values[self.index_of(&u)].norm();
            if fv == 0.0 {
                continue;
            }
            let mut w = 1.0f64;
            for i in 0..self.dim() {
                let sl = sigma[i] * l;
                if u[i] == 0 {
                    // int over p^delta Z_p of |x|^{sigma l} dx
                    let de = self.delta[i] as f64;
                    w *= if sl == 0.0 {
                        q.powf(-de)
                    } else {
                        (1.0 - 1.0 / q) * q.powf(-de * (sl + 1.0)) / (1.0 - q.powf(-sl - 1.0))
                    };
                } else {
                    let val = self.d[i] + v_p(self.p, u[i]) as i32;
                    w *= q.powf(-(val as f64) * sl) * q.powf(-(self.delta[i] as f64));
                }
            }
            acc += fv.powf(l) * w;
        }
        acc.powf(1.0 / l)
    }

    pub fn seminorm_inf(&self, sigma: &[f64]) -> f64 {
        let q = self.p as f64;
        let mut best = 0.0f64;
        for u in self.cells() {
            let fv = self.values[self.index_of(&u)].norm();
            if fv == 0.0 {
                continue;
            }
            let mut w = 1.0f64;
            for i in 0..self.dim() {
                let val = if u[i] == 0 {
                    self.delta[i]
                } else {
                    self.d[i] + v_p(self.p, u[i]) as i32
                };
                w *= q.powf(-(val as f64) * sigma[i]);
            }
            best = best.max(fv * w);
        }
        best
    }
}

fn v_p(p: u64, mut x: i64) -> u32 {
    assert!(x != 0);
    let p = p as i64;
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn apply2(c: &[i64], mat: &[[i64; 2]; 2], modulus: i64) -> Vec<i64> {
    vec![
        (c[0] * mat[0][0] + c[1] * mat[1][0]).rem_euclid(modulus),
        (c[0] * mat[0][1] + c[1] * mat[1][1]).rem_euclid(modulus),
    ]
}



// ---------------------------------------------------------------------------
// Discrete Mellin pair
// ---------------------------------------------------------------------------

/// Finitely supported sequence on the powers of the uniformizer.
#[derive(Clone, Debug)]
pub struct DiscreteSeq {
    pub q: u64,
    pub n0: i32,
    pub vals: Vec<Complex64>,
}

impl DiscreteSeq {
    pub fn value(&self, n: i32) -> Complex64 {
        if n < self.n0 || n >= self.n0 + self.vals.len() as i32 {
            ZERO
        } else {
            self.vals[(n - self.n0) as usize]
        }
    }

    /// B_l^sigma seminorm: (sum q^(-n sigma l) |f|^l)^(1/l).
    pub fn b_norm(&self, l: f64, sigma: f64) -> f64 {
        let q = self.q as f64;
        self.vals
            .iter()
            .enumerate()
            .map(|(k, v)| (q.powf(-(self.n0 + k as i32) as f64 * sigma) * v.norm()).powf(l))
            .sum::<f64>()
            .powf(1.0 / l)
    }
}

/// M f(s) = sum f(w^n) q^(-n s).
pub fn discrete_mellin(f: &DiscreteSeq, s: Complex64) -> Complex64 {
    let lq = (f.q as f64).ln();
    f.vals
        .iter()
        .enumerate()
        .map(|(k, v)| v * (-s * ((f.n0 + k as i32) as f64) * lq).exp())
        .sum()
}

/// Inverse by the trapezoid rule over one period 2 pi / log q on the line
/// Re s = sigma (spectrally exact once the point count exceeds the support
/// spread).
pub fn discrete_mellin_inverse<F>(m: F, q: u64, sigma: f64, n: i32, points: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let lq = (q as f64).ln();
    let period = 2.0 * PI / lq;
    let mut acc = ZERO;
    for j in 0..points {
        let tau = period * j as f64 / points as f64;
        let s = Complex64::new(sigma, tau);
        acc += m(s) * (s * (n as f64) * lq).exp();
    }
    acc / points as f64
}

/// H_inf^sigma seminorm of a Mellin transform, maximized over a tau grid.
pub fn h_norm_inf<F>(m: F, q: u64, sigma: f64, points: usize) -> f64
where
    F: Fn(Complex64) -> Complex64,
{
    let period = 2.0 * PI / (q as f64).ln();
    (0..points)
        .map(|j| m(Complex64::new(sigma, period * j as f64 / points as f64)).norm())
        .fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Non-archimedean Whittaker values
// ---------------------------------------------------------------------------

/// Unramified principal-series data at a finite place: Satake-type parameters
/// alpha = xi(w) q^(-s), beta = (omega xi^{-1})(w) q^(s).
#[derive(Clone, Copy, Debug)]
pub struct PadicCharSpec {
    pub q: u64,
    pub c_psi: i32,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub ramified: bool,
}

/// Closed-form spherical Whittaker value
/// `W(a(w^n)) = q^(-n/2) (alpha^(n+1) - beta^(n+1)) / (alpha - beta)` for
/// n >= 0, zero for n < 0; the equal-parameter case degenerates to
/// (n+1) alpha^n.
pub fn whittaker_na(spec: &PadicCharSpec, n: i32) -> Result<Complex64> {
    if spec.ramified {
        return Err(Error::RamifiedCharacter);
    }
    if n < 0 {
        return Ok(ZERO);
    }
    let (a, b) = (spec.alpha, spec.beta);
    let q = spec.q as f64;
    let geom = if (a - b).norm() < 1e-12 * (a.norm() + b.norm()).max(1e-30) {
        (n as f64 + 1.0) * a.powi(n)
    } else {
        (a.powi(n + 1) - b.powi(n + 1)) / (a - b)
    };
    Ok(q.powf(-(n as f64) / 2.0) * geom)
}

/// Whittaker value from a dim-2 Schwartz function:
/// `W_Phi(a(w^n)) = q^(-n/2) sum_k u_k alpha^k beta^(n-k)` where u_k is the
/// unit average of (F_2 Phi)(w^k u, w^(n-k)/u). Requires conductor 0 and
/// unramified data; for Phi = 1_{Z_p^2} it reproduces `whittaker_na` exactly.
pub fn whittaker_na_integral(
    phi: &PadicSchwartz,
    spec: &PadicCharSpec,
    n: i32,
) -> Result<Complex64> {
    if spec.ramified {
        return Err(Error::RamifiedCharacter);
    }
    if spec.c_psi != 0 {
        return Err(Error::InvalidInput(
            "whittaker integral implemented for conductor 0".into(),
        ));
    }
    if phi.dim() != 2 || phi.prime() != spec.q {
        return Err(Error::InvalidInput("need a dim-2 function at the same prime".into()));
    }
    let g = phi.fourier(0, &[1]);
    let (d1, delta1) = (g.d[0], g.delta[0]);
    let (d2, delta2) = (g.d[1], g.delta[1]);
    let q = spec.q as f64;
    let p = spec.q as i64;
    let mut acc = ZERO;
    // t = w^k u: support needs k >= d1 and n - k >= d2
    for k in d1..=(n - d2) {
        // unit average of G(w^k u, w^(n-k) u^{-1}) over u in (Z/p^M)^x
        let digits1 = (delta1 - k).max(0) as u32;
        let digits2 = (delta2 - (n - k)).max(0) as u32;
        let digits = digits1.max(digits2).max(1);
        let modulus = pow_i(spec.q, digits);
        let units: Vec<i64> = (1..modulus).filter(|u| u % p != 0).collect();
        let mut avg = ZERO;
        for &u in &units {
            let u_inv = mod_inverse(u, modulus);
            // evaluate G at (w^k u, w^(n-k) u_inv) on its own grid
            let v = eval_padic_at(&g, &[(k, u), (n - k, u_inv)]);
            avg += v;
        }
        avg /= units.len() as f64;
        acc += avg * spec.alpha.powi(k) * spec.beta.powi(n - k);
    }
    Ok(acc * q.powf(-(n as f64) / 2.0))
}

/// Evaluate at the exact point (w^{v1} u1, w^{v2} u2).
fn eval_padic_at(phi: &PadicSchwartz, coords: &[(i32, i64)]) -> Complex64 {
    let p = phi.p as i64;
    let mut u_cell = Vec::with_capacity(phi.dim());
    for (i, &(val, unit)) in coords.iter().enumerate() {
        if val < phi.d[i] {
            return ZERO;
        }
        let level = (phi.delta[i] - phi.d[i]) as u32;
        let len = pow_i(phi.p, level);
        let shift = (val - phi.d[i]) as u32;
        if shift >= level && level > 0 {
            u_cell.push(0);
            continue;
        }
        let cell = (unit.rem_euclid(len) * p.pow(shift)).rem_euclid(len);
        u_cell.push(cell);
    }
    phi.values[phi.index_of(&u_cell)]
}

fn mod_inverse(a: i64, modulus: i64) -> i64 {
    let (mut r0, mut r1) = (a.rem_euclid(modulus), modulus);
    let (mut s0, mut s1) = (1i64, 0i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(modulus)
}

/// Seeded random Schwartz function for the verification corpora.
pub fn random_schwartz(
    p: u64,
    dim: usize,
    max_level: u32,
    rng: &mut impl rand::Rng,
) -> PadicSchwartz {
    loop {
        let d: Vec<i32> = (0..dim).map(|_| rng.gen_range(-2..=2)).collect();
        let delta: Vec<i32> = d
            .iter()
            .map(|&di| di + rng.gen_range(0..=max_level) as i32)
            .collect();
        let total: usize = d
            .iter()
            .zip(&delta)
            .map(|(di, de)| pow_i(p, (de - di) as u32) as usize)
            .product();
        let values: Vec<Complex64> = (0..total)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    ZERO
                } else {
                    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                }
            })
            .collect();
        let f = PadicSchwartz::new(p, d, delta, values).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c64(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn indices_of_basic_indicators() {
        let f = PadicSchwartz::ball_indicator(3, 1, 0);
        assert_eq!(f.indices(), (0, 0, 0));
        let g = PadicSchwartz::unit_coset_indicator(5);
        assert_eq!(g.indices(), (0, 1, 1));
        let z = PadicSchwartz::new(2, vec![0], vec![1], vec![ZERO, ZERO]).unwrap();
        assert_eq!(z.indices(), (i32::MAX, i32::MIN, 0));
    }

    #[test]
    fn fourier_of_unit_ball_is_itself() {
        let f = PadicSchwartz::ball_indicator(3, 1, 0);
        let g = f.fourier(0, &[0]);
        assert_eq!(g.indices().0, 0);
        assert_eq!(g.indices().1, 0);
        assert!(g.max_difference(&f) < 1e-14);
    }

    #[test]
    fn fourier_of_deep_ball_closed_form() {
        // F(1_{p^2 Z_p}) = p^{-2} 1_{p^{-2} Z_p} at conductor 0
        let f = PadicSchwartz::ball_indicator(5, 1, 2);
        let g = f.fourier(0, &[0]);
        let (d, delta, _) = g.indices();
        assert_eq!((d, delta), (-2, -2));
        assert!((g.values[0] - c64(5.0f64.powi(-2))).norm() < 1e-14);
    }

    #[test]
    fn double_transform_is_reflection() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for p in [2u64, 3, 5] {
            for dim in [1usize, 2] {
                for _ in 0..10 {
                    let f = random_schwartz(p, dim, 2, &mut rng);
                    let coords: Vec<usize> = (0..dim).collect();
                    let ff = f.fourier(0, &coords).fourier(0, &coords);
                    let neg = f.negate_arg();
                    assert!(
                        ff.max_difference(&neg) < 1e-11,
                        "inversion failed at p={p}, dim={dim}"
                    );
                }
            }
        }
    }

    #[test]
    fn index_identities_random_corpus() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(22);
        for p in [2u64, 3, 5] {
            for _ in 0..200 {
                let dim = if rng.gen_bool(0.5) { 1 } else { 2 };
                let f = random_schwartz(p, dim, 2, &mut rng);
                let (d, delta) = {
                    let (d, delta, _) = f.indices_support_only();
                    (d, delta)
                };
                // Prop (0): m <= delta - D, checked exactly where the common
                // grid stays small
                if delta - d <= 2 {
                    let (_, _, m) = f.indices();
                    assert!(m as i32 <= delta - d, "m = {m} > {}", delta - d);
                }
                for c_psi in [-1i32, 0, 1] {
                    let coords: Vec<usize> = (0..dim).collect();
                    let g = f.fourier(c_psi, &coords);
                    let (dg, deltag, _) = g.indices_support_only();
                    assert_eq!(d + deltag, -c_psi, "D + delta(F) at p={p}");
                    assert_eq!(delta + dg, -c_psi, "delta + D(F) at p={p}");
                }
            }
        }
    }

    #[test]
    fn partial_transform_inequalities() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for p in [2u64, 3, 5] {
            for _ in 0..60 {
                let f = random_schwartz(p, 2, 2, &mut rng);
                let (d, delta, _) = f.indices_support_only();
                for c_psi in [-1i32, 0, 1] {
                    for coords in [vec![0usize], vec![1usize]] {
                        let g = f.fourier(c_psi, &coords);
                        let (dg, deltag, _) = g.indices_support_only();
                        assert!(deltag <= delta.max(-c_psi - d));
                        assert!(dg >= d.min(-c_psi - delta));
                    }
                }
            }
        }
    }

    #[test]
    fn indices_invariant_under_monomial_unit_matrices() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(24);
        for p in [2u64, 3, 5] {
            for _ in 0..20 {
                let f = random_schwartz(p, 2, 2, &mut rng);
                let u = (1..pow_i(p, 3)).find(|u| u % p as i64 != 0).unwrap();
                for g in [f.swap_coords(), f.scale_coord_by_unit(0, u), f.scale_coord_by_unit(1, u)]
                {
                    assert_eq!(g.indices_support_only().0, f.indices_support_only().0);
                    assert_eq!(g.indices_support_only().1, f.indices_support_only().1);
                }
            }
        }
    }

    #[test]
    fn norm_relations_random_corpus() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(25);
        for p in [2u64, 3, 5] {
            for _ in 0..200 {
                let dim = if rng.gen_bool(0.5) { 1 } else { 2 };
                let f = random_schwartz(p, dim, 2, &mut rng);
                let (d, delta, _) = f.indices_support_only();
                let q = p as f64;
                let dd = dim as f64;
                for l in [1.0f64, 2.0, 3.0] {
                    let nl = f.norm_l(l);
                    let ninf = f.norm_inf();
                    assert!(ninf <= q.powf(dd * delta as f64 / l) * nl * (1.0 + 1e-12));
                    assert!(nl <= q.powf(-dd * d as f64 / l) * ninf * (1.0 + 1e-12));
                    let sigma = vec![0.7; dim];
                    let s = f.seminorm(l, &sigma);
                    let total_sigma: f64 = sigma.iter().sum();
                    assert!(s <= q.powf(-total_sigma * d as f64) * nl * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn mass_of_unit_ball() {
        let f = PadicSchwartz::ball_indicator(7, 1, 0);
        assert!((f.norm_l(1.0) - 1.0).abs() < 1e-14);
        assert!((f.seminorm(1.0, &[0.0]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn seminorm_scaling_under_support_shift() {
        // substituting x -> p x shifts D by one and scales S_inf^sigma by
        // q^{-sigma}
        let f = PadicSchwartz::ball_indicator(3, 1, 1);
        let g = PadicSchwartz::ball_indicator(3, 1, 2);
        let s_f = f.seminorm_inf(&[1.3]);
        let s_g = g.seminorm_inf(&[1.3]);
        assert!((s_g / s_f - 3.0f64.powf(-1.3)).abs() < 1e-12);
    }

    #[test]
    fn discrete_mellin_basics_and_round_trip() {
        let q = 3u64;
        let delta0 = DiscreteSeq { q, n0: 0, vals: vec![ONE] };
        let m = discrete_mellin(&delta0, Complex64::new(0.8, 0.3));
        assert!((m - ONE).norm() < 1e-15);
        // geometric: f = 1_{n>=0} truncated far out at sigma > 0
        let geom = DiscreteSeq { q, n0: 0, vals: vec![ONE; 60] };
        let s = Complex64::new(1.1, 0.4);
        let mg = discrete_mellin(&geom, s);
        let closed = ONE / (ONE - (-s * (q as f64).ln()).exp());
        assert!((mg - closed).norm() < 1e-12);
        // round trip, exact to 1e-12
        let f = DiscreteSeq {
            q,
            n0: -2,
            vals: vec![c64(0.3), ONE, c64(-1.2), Complex64::new(0.0, 0.7), c64(2.0)],
        };
        for n in -4..=4 {
            let v = discrete_mellin_inverse(|s| discrete_mellin(&f, s), q, 0.7, n, 64);
            assert!((v - f.value(n)).norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn mellin_seminorm_chain() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(26);
        for _ in 0..40 {
            let q = 2u64;
            let vals: Vec<Complex64> = (0..8)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let f = DiscreteSeq { q, n0: -3, vals };
            let sigma = 0.9;
            let h = h_norm_inf(|s| discrete_mellin(&f, s), q, sigma, 128);
            let b = f.b_norm(1.0, sigma);
            assert!(h <= b * (1.0 + 1e-12), "H_inf {h} vs B_1 {b}");
        }
    }

    #[test]
    fn whittaker_closed_form_values() {
        let spec = PadicCharSpec {
            q: 3,
            c_psi: 0,
            alpha: Complex64::new(0.6, 0.4),
            beta: Complex64::new(0.3, -0.2),
            ramified: false,
        };
        assert!((whittaker_na(&spec, 0).unwrap() - ONE).norm() < 1e-14);
        assert_eq!(whittaker_na(&spec, -1).unwrap(), ZERO);
        let w1 = whittaker_na(&spec, 1).unwrap();
        let expect = (spec.alpha + spec.beta) / (3.0f64).sqrt();
        assert!((w1 - expect).norm() < 1e-14);
        // equal-parameter limit
        let degenerate = PadicCharSpec {
            beta: spec.alpha,
            ..spec
        };
        let w2 = whittaker_na(&degenerate, 2).unwrap();
        let expect = 3.0 * spec.alpha.powi(2) / 3.0;
        assert!((w2 - expect).norm() < 1e-13);
    }

    #[test]
    fn whittaker_integral_reproduces_closed_form() {
        let spec = PadicCharSpec {
            q: 5,
            c_psi: 0,
            alpha: Complex64::new(0.7, 0.1),
            beta: Complex64::new(0.5, -0.3),
            ramified: false,
        };
        let phi = PadicSchwartz::ball_indicator(5, 2, 0);
        for n in -2..=4 {
            let via_integral = whittaker_na_integral(&phi, &spec, n).unwrap();
            let closed = whittaker_na(&spec, n).unwrap();
            assert!(
                (via_integral - closed).norm() < 1e-12,
                "n={n}: {via_integral} vs {closed}"
            );
        }
    }

    #[test]
    fn whittaker_integral_support_shift() {
        let spec = PadicCharSpec {
            q: 3,
            c_psi: 0,
            alpha: c64(0.8),
            beta: c64(0.4),
            ramified: false,
        };
        // The cutoff 1_{y in p^(2D)} is governed by the support of the
        // partially transformed function. With Phi = 1_{p Z_p} x 1_{p^-1 Z_p}
        // the transform is supported in (p Z_p)^2, so W vanishes for n <= 1
        // and turns on at n = 2.
        let phi = PadicSchwartz::new(
            3,
            vec![1, -1],
            vec![1, -1],
            vec![ONE],
        )
        .unwrap();
        assert_eq!(whittaker_na_integral(&phi, &spec, 1).unwrap(), ZERO);
        assert_eq!(whittaker_na_integral(&phi, &spec, 0).unwrap(), ZERO);
        assert!(whittaker_na_integral(&phi, &spec, 2).unwrap().norm() > 0.0);
        // A scalar dilation of the unit ball, by contrast, only rescales W:
        // the cutoff stays at n >= 0 (the transformed support index is the
        // binding one).
        let scaled = PadicSchwartz::ball_indicator(3, 2, 1);
        let w0 = whittaker_na_integral(&scaled, &spec, 0).unwrap();
        assert!(w0.norm() > 0.0);
        let ratio = whittaker_na_integral(&scaled, &spec, 1).unwrap() / w0;
        let base = whittaker_na(&spec, 1).unwrap() / whittaker_na(&spec, 0).unwrap();
        assert!((ratio * c64(3.0f64.sqrt()) / c64(3.0f64.sqrt()) - base).norm() < 1e-12);
    }

    #[test]
    fn whittaker_small_y_bound_with_explicit_constant() {
        // |W(w^n)| <= (2/(eps log q)) sup(x e^-x) q^{-n(1/2 - |Re s| - eps)}
        // for n >= 1, with alpha = q^-s, beta = q^s.
        let q = 3u64;
        let lq = (q as f64).ln();
        for &s in &[0.1f64, 0.3] {
            let spec = PadicCharSpec {
                q,
                c_psi: 0,
                alpha: c64((q as f64).powf(-s)),
                beta: c64((q as f64).powf(s)),
                ramified: false,
            };
            let eps = 0.1;
            let constant = 2.0 / (eps * lq) * (1.0f64 / std::f64::consts::E);
            for n in 1..=12 {
                let w = whittaker_na(&spec, n).unwrap().norm();
                let bound = constant * (q as f64).powf(-(n as f64) * (0.5 - s - eps));
                assert!(w <= bound, "n={n}, s={s}: {w} vs {bound}");
            }
        }
    }
}
