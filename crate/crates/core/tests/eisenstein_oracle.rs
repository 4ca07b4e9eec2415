mod common;

use eisreg::eisenstein::{eval, EisSpec, Point};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn fourier_evaluation_matches_epstein_lattice_sum() {
    // Five points in the absolutely convergent region (classical weight
    // w = s + 1/2 with Re w > 1), relative error <= 1e-8.
    let cases = [
        (c(1.3, 0.0), Point::new(0.3, 1.1).unwrap()),
        (c(1.3, 0.0), Point::new(-0.21, 0.87).unwrap()),
        (c(0.9, 0.0), Point::new(0.05, 2.3).unwrap()),
        (c(1.6, 0.0), Point::new(0.49, 1.02).unwrap()),
        (c(0.8, 0.4), Point::new(0.11, 1.4).unwrap()),
    ];
    for (s, z) in cases {
        let w = s + c(0.5, 0.0);
        let oracle = common::epstein_eisenstein_oracle(w, z);
        let fourier = eval(&EisSpec::plain(s), z).unwrap();
        let rel = (oracle - fourier).norm() / oracle.norm();
        assert!(
            rel <= 1e-8,
            "s = {s}, z = ({}, {}): fourier {fourier} vs oracle {oracle} (rel {rel:.2e})",
            z.x,
            z.y
        );
    }
}
