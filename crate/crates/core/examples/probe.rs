use qcompass::spin::make_spin_system;
fn main() {
    let sys = make_spin_system(8).unwrap();
    for (name, sol) in [("n8", qcompass::catalog::qc_3d(8).unwrap()), ("n8-mirror", qcompass::catalog::qc_3d_n8_mirror().unwrap())] {
        let c = qcompass::cost::cost_coefficients(&sys, &sol.psi_in, &sol.povm, &[0.0,0.0,0.0], 3).unwrap();
        println!("{name}: C1 = {:.9} C2 = {:.9} C3 = {:?} p2resid = {:.2e}", c.c1, c.c2, c.c3, c.p2_residual);
        let f = qcompass::info::fim(&sys, &sol.psi_in, &sol.povm, &[0.0,0.0,0.0]).unwrap();
        println!("   F00 {:.8} F11 {:.8} F22 {:.8}", f.info.entries[(0,0)], f.info.entries[(1,1)], f.info.entries[(2,2)]);
    }
    println!("-(4240-320sqrt385/3) = {:.9}", -(4240.0-320.0*385f64.sqrt()/3.0));
}
