//! Numerical verification of the classical lattice-sum estimates over the
//! rational and Gaussian fields.
//!
//! For an integral ideal (m) and the cut-off power function
//! `f_c(x) = prod min(1, |x_i|^-c) * prod min(1, |x_j|^-2c)` (real and complex
//! slots), the sums `sum_{a in (1/m) o, a != 0} f_c(t^(1/r) sigma(a))` obey
//!
//! * part 1: `<< m^(3c) t^-c` for c > r (slope -c in the adelic parameter t),
//! * part 2 (zero included): `<< t_e^(-r) m^-1 (1 + t_e m^2/sqrt(r))^(rc)`
//!   in the embedding scale `t_e = t^(1/r)` for c > 1.
//!
//! Enumeration is by shells with a certified geometric tail.

use crate::error::{Error, Result};


#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Rational,
    Gaussian,
}

impl Field {
    pub fn degree(&self) -> u32 {
        match self {
            Field::Rational => 1,
            Field::Gaussian => 2,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct LatticeSpec {
    pub field: Field,
    /// The ideal is (m).
    pub ideal_norm: u64,
    /// Exponent of the cut-off power function.
    pub c: f64,
    /// Enumeration radius in the embedding (multiples of 1/m).
    pub radius: u64,
}

impl LatticeSpec {
    pub fn new(field: Field, ideal_norm: u64, c: f64, radius: u64) -> Result<Self> {
        if ideal_norm == 0 || c <= 1.0 {
            return Err(Error::InvalidInput(
                "need a nonzero ideal and c > 1".into(),
            ));
        }
        Ok(LatticeSpec {
            field,
            ideal_norm,
            c,
            radius,
        })
    }
}

fn f_c_real(x: f64, c: f64) -> f64 {
    let a = x.abs();
    if a <= 1.0 {
        1.0
    } else {
        a.powf(-c)
    }
}

fn f_c_complex(re: f64, im: f64, c: f64) -> f64 {
    let a2 = re * re + im * im;
    if a2 <= 1.0 {
        1.0
    } else {
        a2.powf(-c) // |x|^(-2c)
    }
}

/// `sum f_c(t^(1/r) sigma(a))` over a in (1/m) o minus {0} (optionally with
/// the zero term, which contributes exactly 1), by direct enumeration with a
/// certified tail bound.
pub fn lattice_sum(spec: &LatticeSpec, t: f64, include_zero: bool) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput("need t > 0".into()));
    }
    let r = spec.field.degree();
    let scale = t.powf(1.0 / r as f64) / spec.ideal_norm as f64;
    let budget = 1e-10;
    let (head, tail) = match spec.field {
        Field::Rational => {
            let mut head = 0.0f64;
            for n in 1..=spec.radius {
                head += 2.0 * f_c_real(scale * n as f64, spec.c);
            }
            // tail: 2 sum_{n > R} (scale n)^(-c) <= 2 scale^-c R^(1-c)/(c-1)
            // valid once scale * R > 1
            if scale * spec.radius as f64 <= 1.0 {
                return Err(Error::RadiusInsufficient {
                    tail: f64::INFINITY,
                    budget: budget * head,
                });
            }
            let tail = 2.0 * scale.powf(-spec.c) * (spec.radius as f64).powf(1.0 - spec.c)
                / (spec.c - 1.0);
            (head, tail)
        }
        Field::Gaussian => {
            let mut head = 0.0f64;
            let rad = spec.radius as i64;
            for a in -rad..=rad {
                for b in -rad..=rad {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    head += f_c_complex(scale * a as f64, scale * b as f64, spec.c);
                }
            }
            if scale * spec.radius as f64 <= 2.0 {
                return Err(Error::RadiusInsufficient {
                    tail: f64::INFINITY,
                    budget: budget * head,
                });
            }
            // tail: integral comparison, sum over |z| > R of (scale |z|)^(-2c)
            // <= 2 pi scale^(-2c) (R-1)^(2-2c) / (2c-2) + boundary
            let rr = (spec.radius - 1) as f64;
            let tail = 2.0 * std::f64::consts::PI * scale.powf(-2.0 * spec.c)
                * rr.powf(2.0 - 2.0 * spec.c)
                / (2.0 * spec.c - 2.0)
                * 1.5;
            (head, tail)
        }
    };
    if tail > budget * head.max(1e-300) {
        return Err(Error::RadiusInsufficient {
            tail,
            budget: budget * head,
        });
    }
    Ok(head + if include_zero { 1.0 } else { 0.0 })
}

/// Verification report for the two estimates.
#[derive(Clone, Debug)]
pub struct LatticeReport {
    /// (t, sum, bound, ratio) for part 1 over the t grid.
    pub part1: Vec<(f64, f64, f64, f64)>,
    /// log-log slope of the part-1 sum between the extreme t values.
    pub part1_slope: f64,
    /// (t_embedding, sum-with-zero, bound, ratio) for part 2 at small t.
    pub part2: Vec<(f64, f64, f64, f64)>,
    /// slope of the part-2 sum against the embedding scale.
    pub part2_slope: f64,
    pub part1_max_ratio: f64,
    pub part2_max_ratio: f64,
}

/// lattice_sum with automatic radius growth until the tail certificate
/// meets the budget.
fn sum_with_retry(spec: &LatticeSpec, t: f64, include_zero: bool) -> Result<f64> {
    let mut attempt = *spec;
    for _ in 0..8 {
        match lattice_sum(&attempt, t, include_zero) {
            Err(Error::RadiusInsufficient { .. }) => attempt.radius *= 2,
            other => return other,
        }
    }
    lattice_sum(&attempt, t, include_zero)
}

/// Evaluate both parts over a t grid; part 1 wants large t (all points past
/// the cut-off), part 2 small t with the zero term included.
pub fn verify_lemma(spec: &LatticeSpec, t_grid: &[f64]) -> Result<LatticeReport> {
    let r = spec.field.degree() as f64;
    let m = spec.ideal_norm as f64;
    let mut part1 = Vec::new();
    for &t in t_grid {
        let s = sum_with_retry(spec, t, false)?;
        let bound = m.powf(3.0 * spec.c) * t.powf(-spec.c);
        part1.push((t, s, bound, s / bound));
    }
    let (t_first, s_first) = (part1[0].0, part1[0].1);
    let (t_last, s_last) = (part1[part1.len() - 1].0, part1[part1.len() - 1].1);
    let part1_slope = (s_last.ln() - s_first.ln()) / (t_last.ln() - t_first.ln());

    // part 2: small embedding scales, volume regime (the 2-dimensional
    // enumeration keeps its grid a little coarser to stay cheap)
    let te_grid: &[f64] = match spec.field {
        Field::Rational => &[0.05, 0.1, 0.2, 0.4],
        Field::Gaussian => &[0.2, 0.28, 0.4],
    };
    let mut part2 = Vec::new();
    for &te in te_grid {
        let t = te.powf(r);
        let s = sum_with_retry(spec, t, true)?;
        let bound = te.powf(-r) / m * (1.0 + te * m * m / r.sqrt()).powf(r * spec.c);
        part2.push((te, s, bound, s / bound));
    }
    let (e_first, v_first) = (part2[0].0, part2[0].1);
    let (e_last, v_last) = (part2[part2.len() - 1].0, part2[part2.len() - 1].1);
    let part2_slope = (v_last.ln() - v_first.ln()) / (e_last.ln() - e_first.ln());

    Ok(LatticeReport {
        part1_max_ratio: part1.iter().map(|e| e.3).fold(0.0, f64::max),
        part2_max_ratio: part2.iter().map(|e| e.3).fold(0.0, f64::max),
        part1,
        part1_slope,
        part2,
        part2_slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_closed_head() {
        // Q, m = 1, c = 3, t = 10: all |10 n| > 1, so the sum is
        // 2 * 10^-3 * zeta(3) exactly.
        let spec = LatticeSpec::new(Field::Rational, 1, 3.0, 1_000_000).unwrap();
        let s = lattice_sum(&spec, 10.0, false).unwrap();
        let zeta3 = 1.202_056_903_159_594_2;
        assert!((s - 2e-3 * zeta3).abs() < 1e-11, "{s}");
        // include_zero adds exactly 1
        let s0 = lattice_sum(&spec, 10.0, true).unwrap();
        assert!((s0 - s - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_radius_doubling_consistency() {
        let a = LatticeSpec::new(Field::Gaussian, 1, 2.5, 2500).unwrap();
        let b = LatticeSpec::new(Field::Gaussian, 1, 2.5, 5000).unwrap();
        let t = 16.0; // embedding scale 4
        let sa = lattice_sum(&a, t, false).unwrap();
        let sb = lattice_sum(&b, t, false).unwrap();
        assert!((sa - sb).abs() <= 1e-9 * sa, "{sa} vs {sb}");
    }

    #[test]
    fn radius_insufficient_is_detected() {
        let spec = LatticeSpec::new(Field::Rational, 4, 1.5, 30).unwrap();
        assert!(matches!(
            lattice_sum(&spec, 0.001, false),
            Err(Error::RadiusInsufficient { .. })
        ));
    }

    #[test]
    fn part1_slopes_match_exponent() {
        let grid: Vec<f64> = vec![10.0, 20.0, 40.0, 80.0, 160.0];
        for m in [1u64, 2, 4] {
            let spec = LatticeSpec::new(Field::Rational, m, 3.0, 1_000_000).unwrap();
            let rep = verify_lemma(&spec, &grid).unwrap();
            assert!(
                (rep.part1_slope + 3.0).abs() < 0.05,
                "Q slope {} at m={m}",
                rep.part1_slope
            );
        }
        let spec = LatticeSpec::new(Field::Gaussian, 1, 2.5, 2500).unwrap();
        let rep = verify_lemma(&spec, &grid).unwrap();
        assert!(
            (rep.part1_slope + 2.5).abs() < 0.05,
            "Q(i) slope {}",
            rep.part1_slope
        );
    }

    #[test]
    fn part2_volume_slope_and_bound() {
        let spec = LatticeSpec::new(Field::Rational, 1, 3.0, 1_000_000).unwrap();
        let rep = verify_lemma(&spec, &[10.0, 20.0]).unwrap();
        assert!((rep.part2_slope + 1.0).abs() < 0.05, "{}", rep.part2_slope);
        assert!(rep.part2_max_ratio.is_finite());
        let spec = LatticeSpec::new(Field::Gaussian, 1, 2.5, 2500).unwrap();
        let rep = verify_lemma(&spec, &[16.0, 32.0]).unwrap();
        assert!((rep.part2_slope + 2.0).abs() < 0.05, "{}", rep.part2_slope);
    }

    #[test]
    fn part1_ratio_bounded_in_the_ideal_norm() {
        let grid = vec![20.0, 40.0, 80.0];
        let mut ratios = Vec::new();
        for m in 1..=8u64 {
            let spec = LatticeSpec::new(Field::Rational, m, 3.0, 1_000_000).unwrap();
            let rep = verify_lemma(&spec, &grid).unwrap();
            ratios.push(rep.part1_max_ratio);
            assert!(rep.part1_max_ratio.is_finite());
        }
        // the m^(3c) factor massively over-covers; ratios must not grow
        let first = ratios[0];
        for r in &ratios {
            assert!(*r <= first * 1.01, "ratios {ratios:?}");
        }
    }
}
