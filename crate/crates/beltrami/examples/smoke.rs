use beltrami::debye::*;
use beltrami::geometry::make_torus;
use num_complex::Complex64 as C64;

fn main() {
    let torus = make_torus(2.0).unwrap();
    let n = 50;
    // Gauss identity: K0[1] at k=0 = -1/2
    if let KopBlock::ScalarToScalar(k0) = assemble_kop(BoundaryOp::K0, &torus, C64::new(0.0, 0.0), 0, n).unwrap() {
        let mut worst = 0.0f64;
        for i in 0..n {
            let s: C64 = (0..n).map(|j| k0[(i, j)]).sum();
            worst = worst.max((s + C64::new(0.5, 0.0)).norm());
        }
        println!("K0[1] + 1/2 worst deviation: {worst:.3e}");
    }
    // off-resonance condition number + sweep
    let builder = SystemBuilder::new(&torus, n, 0, 1.0, SignConvention::VariantA).unwrap();
    for &k in &[2.0, 3.5, 3.6, 3.63, 3.645, 3.6507, 3.6515, 3.66, 3.7, 3.8, 3.85, 3.8577, 3.86, 3.95, 4.0272, 4.1] {
        let sys = builder.assemble(C64::new(k, 0.0)).unwrap();
        let svd = sys.matrix.clone().svd(false, false);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        println!("k={k:8.5}  kappa={:.3e}", smax / smin);
    }
}
