use eisreg::jet::ZERO;
use eisreg::scalars::{lambda_jet, m_scalar_jet};
fn main() {
    let lam = lambda_jet(3).unwrap();
    let m = m_scalar_jet(ZERO, 4).unwrap();
    let rho = lam.residue();
    let (l0, l1, l2) = (lam.df(0), lam.df(1), lam.df(2));
    let (m1, m2, m3) = (m.df(1), m.df(2), m.df(3));
    println!("rho={rho}, l0={l0}, l1={l1}, l2={l2}");
    println!("m1={m1}, m2={m2} (vs -m1^2 = {}), m3={m3}", -m1*m1);
    let derived = 4.0*l2/rho + 4.0*l1*m1/rho + l0*m1*m1/rho - m3/3.0 - m1*m2/2.0;
    println!("derived spherical value = {derived}");
    let printed = 4.0*l2/rho*(1.0+m1) + l0/rho*m1*m1 - m3/3.0 - m2*m1;
    println!("printed display value   = {printed}");
}
