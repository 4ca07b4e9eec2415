use eisreg::regint::*;
use eisreg::scalars::lambda_jet_at;
use num_complex::Complex64;
use std::time::Instant;

fn c64(re: f64) -> Complex64 { Complex64::new(re, 0.0) }

fn main() {
    let engine = Engine::with_defaults().unwrap();

    // 1. reg-int of a single Eisenstein series should vanish
    let t0 = Instant::now();
    let phi = phi_eis(c64(0.23)).unwrap();
    let reg = engine.reg_integral(&phi).unwrap();
    println!("reg-int E(0.23) = {:?}  ({:.1?})", reg.value, t0.elapsed());

    // 2. reg-int E_reg(1/2+s) = -lambda(s)/lambda^(-1)(0) at s = 0.07
    let t0 = Instant::now();
    let s = c64(0.07);
    let phi = phi_ereg(s).unwrap();
    let reg = engine.reg_integral(&phi).unwrap();
    let lam_s = lambda_jet_at(s, 0).unwrap().value();
    let rho = lambda_jet_at(Complex64::new(0.0,0.0), 0).unwrap().residue();
    println!("reg-int E_reg(1/2+0.07) = {:?} vs {:?}  ({:.1?})", reg.value, -lam_s/rho, t0.elapsed());

    // 3. fundamental identity for the product E(0.3)E(0.17i)
    let t0 = Instant::now();
    let phi = phi_eis_product(c64(0.3), Complex64::new(0.0, 0.17)).unwrap();
    let rep = engine.verify_fundamental_identity(
        &phi,
        &[c64(0.8), c64(0.9), Complex64::new(0.65, 0.3)],
        &[2.0, 4.0],
    ).unwrap();
    println!("eisprod: max_resid {:.2e}, T-indep {:.2e}, func-eq {:.2e}  ({:.1?})",
        rep.max_residual, rep.t_independence, rep.functional_equation, t0.elapsed());

    // 4. cusp form: R entire, matches unfolding
    let t0 = Instant::now();
    let phi = phi_cusp_delta().unwrap();
    let ctx = engine.ctx(&phi, 2.0).unwrap();
    let s = c64(1.5);
    let via_identity = engine.r_star_point(&ctx, s).unwrap();
    let via_unfold = engine.unfold_r(&phi, s).unwrap() * eisreg::special::lambda_complete(c64(1.0)+2.0*s).unwrap();
    println!("cusp R*(1.5): identity {:?} vs unfold {:?}  ({:.1?})", via_identity, via_unfold, t0.elapsed());

    // 5. reg-int of E_reg(1/2) itself (degenerate part empty, value 0)
    let phi = phi_ereg(Complex64::new(0.0, 0.0)).unwrap();
    let reg = engine.reg_integral(&phi).unwrap();
    println!("reg-int E_reg(1/2) = {:?} (principal {:?}, degenerate {:?})", reg.value, reg.principal, reg.degenerate);
}
