use eisreg::products::*;
use eisreg::regint::*;
use std::time::Instant;

fn main() {
    let engine = Engine::with_defaults().unwrap();
    let t0 = Instant::now();
    let rhs = rip_unitary_rhs().unwrap();
    println!("RHS (scalar formula) = {rhs}  ({:.1?})", t0.elapsed());
    let t0 = Instant::now();
    let lhs = rip_unitary_lhs(&engine).unwrap();
    println!("LHS (engine)         = {} (principal {}, degenerate {})  ({:.1?})",
             lhs.value, lhs.principal, lhs.degenerate, t0.elapsed());
    println!("rel err = {:.3e}", (lhs.value - rhs).norm() / rhs.norm());

    let t0 = Instant::now();
    for s in [0.08, 0.04, 0.02] {
        let d = deformation_value(&engine, s).unwrap();
        println!("deformed({s}) = {d}   |d - RHS| = {:.4e}  ({:.1?})", (d - rhs).norm(), t0.elapsed());
    }

    let t0 = Instant::now();
    for e in vanishing_checks(&engine, 0.07).unwrap() {
        println!("{}: computed {} expected {} defect {:.3e}", e.label, e.computed, e.expected, e.defect);
    }
    println!("vanishing took {:.1?}", t0.elapsed());
}
