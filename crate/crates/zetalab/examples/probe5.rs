//! Scratch: banded seed scans at H = 50.

use num_complex::Complex;
use zetalab::error::Error;
use zetalab::trajectory::{Family, ZetaFamily};
use zetalab::zero::{scan_zeros, Rect, ScanParams};

fn main() {
    let fam = ZetaFamily::<f64>::new();
    let f = |s: Complex<f64>, d: u8| -> Result<Complex<f64>, Error> {
        Ok(fam.f_all(s, 0.0, d as usize)?[d as usize])
    };
    for k in 0..10 {
        let (lo, hi) = (0.2f64.max(5.0 * k as f64), 5.0 * (k + 1) as f64);
        let rect = Rect::new(-2.0, 3.0, lo, hi);
        match scan_zeros(&f, &rect, 0, &ScanParams::default()) {
            Ok(mut recs) => {
                recs.sort_by(|a, b| a.rho.im.partial_cmp(&b.rho.im).unwrap());
                let ts: Vec<String> = recs.iter().map(|r| format!("{:.6}", r.rho.im)).collect();
                println!("band ({lo:5.1}, {hi:5.1}]: {} zeros: {}", recs.len(), ts.join(", "));
            }
            Err(e) => println!("band ({lo:5.1}, {hi:5.1}]: ERR {e}"),
        }
    }
}
