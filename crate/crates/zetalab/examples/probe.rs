//! Scratch driver: discovery census on the real family.

use std::time::Instant;

use zetalab::trajectory::{census, StepControl, ZetaFamily};

fn main() {
    let h: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(30.0);
    let step: f64 = std::env::args()
        .nth(2)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1e-2);
    let fam = ZetaFamily::<f64>::new();
    let ctrl = StepControl::default();
    let t0 = Instant::now();
    match census(&fam, h, step, &ctrl) {
        Ok(c) => {
            println!(
                "H = {h}: total = {}, stays = {}, leaves = {}, events = {} [{:.1?}]",
                c.total,
                c.stays,
                c.leaves,
                c.events.len(),
                t0.elapsed()
            );
            for e in &c.events {
                println!(
                    "  event tau0 = {:.12}  rho0 = 0.5 + {:.12}i  |f''| = {:.6e}",
                    e.tau0,
                    e.rho0.im,
                    e.f_second_deriv.norm()
                );
            }
            for (rec, traj) in c.seeds.iter().zip(&c.trajectories) {
                let (_, last) = *traj.samples.last().unwrap();
                println!(
                    "  seed t0 = {:9.5} -> {:?} -> end ({:.6}, {:.6}) [{} samples]",
                    rec.rho.im,
                    short(&traj.classification),
                    last.re,
                    last.im,
                    traj.samples.len()
                );
            }
        }
        Err(e) => println!("census failed: {e}"),
    }
}

fn short(c: &zetalab::trajectory::Classification<f64>) -> String {
    use zetalab::trajectory::Classification::*;
    match c {
        StaysOnLine => "stays".into(),
        LeavesAt { tau, rho } => format!("leaves at tau = {:.9}, t = {:.9}", tau, rho.im),
        Incomplete { reason } => format!("INCOMPLETE: {reason}"),
    }
}
