//! Scratch: classify every census event at H = 100.

use zetalab::trajectory::{census, classify_theorem3, StepControl, ZetaFamily};

fn main() {
    let fam = ZetaFamily::<f64>::new();
    let run = census(&fam, 100.0, 0.01, &StepControl::default()).unwrap();
    for ev in &run.events {
        match classify_theorem3(&fam, ev, 0.02) {
            Ok(rep) => println!(
                "event ({:.6}, {:9.4}): s1={:?} s2={:?} orient={:?} theta={:.2e} equivalent={}",
                ev.tau0, ev.rho0.im, rep.statement1, rep.statement2, rep.orientation, rep.theta, rep.equivalent
            ),
            Err(e) => println!("event ({:.6}, {:9.4}): ERR {e}", ev.tau0, ev.rho0.im),
        }
    }
}
