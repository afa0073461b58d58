//! Scratch: per-seed census diagnostic with the census step control.

use zetalab::trajectory::{census_seeds, trace_seed, BranchRule, StepControl, ZetaFamily};
use zetalab::zero::ScanParams;

fn main() {
    let fam = ZetaFamily::<f64>::new();
    let seeds = census_seeds(&fam, 30.0, &ScanParams::default()).unwrap();
    let ctrl = StepControl {
        dtau_init: 0.01,
        dtau_min: 1e-6f64.min(0.01),
        dtau_max: 0.01,
        branch: BranchRule::Left,
        ..StepControl::default()
    };
    for s in &seeds {
        let tr = trace_seed(&fam, s, &ctrl);
        let (te, re) = *tr.samples.last().unwrap();
        println!(
            "seed t={:9.5} -> {:?} n={} events={} end=({:.8}, {:.8}) tau_end={te}",
            s.rho.im,
            tr.classification,
            tr.samples.len(),
            tr.events.len(),
            re.re,
            re.im
        );
    }
}
