//! Scratch: drill into the t = 0 event protocol pieces.

use num_complex::Complex;
use zetalab::trajectory::{detect_double_zero, local_quadratic_fit, ZetaFamily};

fn main() {
    let fam = ZetaFamily::<f64>::new();
    let tau0 = 0.926485681002;

    for &w in &[0.2, 0.1, 0.05, 0.02] {
        let r = detect_double_zero(&fam, (-w, w), (tau0 - 5e-4, tau0 + 5e-4));
        match r {
            Ok(ev) => println!(
                "detect w={w}: tau0={:.9} rho0={:.3e}+i{:.3e} |f''|={:.3}",
                ev.tau0, ev.rho0.re - 0.5, ev.rho0.im, ev.f_second_deriv.norm()
            ),
            Err(e) => println!("detect w={w}: ERR {e}"),
        }
    }

    let rho0 = Complex::new(0.5, 0.0);
    for &delta in &[8e-6f64, 3.2e-5, 1.28e-4, 5.12e-4] {
        let split: f64 = (2.0 * 3.1525f64 / 1.833).sqrt();
        let radius = 4.0 * split * delta.sqrt();
        for tau in [tau0 + delta, tau0 - delta] {
            match local_quadratic_fit(&fam, tau, rho0, radius) {
                Ok(fit) => println!(
                    "fit tau={tau:.8} r={radius:.4}: roots {:+.5e}/{:+.5e} (im {:+.1e}/{:+.1e})",
                    fit.roots.0.re - 0.5, fit.roots.1.re - 0.5, fit.roots.0.im, fit.roots.1.im
                ),
                Err(e) => println!("fit tau={tau:.8} r={radius:.4}: ERR {e}"),
            }
        }
    }
}
