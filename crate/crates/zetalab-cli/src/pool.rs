//! Deterministic work-unit parallelism.
//!
//! Units are claimed from a shared counter and computed on scoped worker
//! threads, but results are merged by unit index, so the assembled output is
//! the same for any thread count or scheduling order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

/// Runs `work` over the unit indices `0..n` on up to `threads` workers and
/// returns the results in index order.
///
/// `progress` is invoked under a lock once per finished unit (in completion
/// order, which is scheduling-dependent); checkpoint writers hang off it.
pub fn run_units<R, W, P>(n: usize, threads: usize, work: W, progress: P) -> Vec<R>
where
    R: Send,
    W: Fn(usize) -> R + Sync,
    P: FnMut(usize, &R) + Send,
{
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<(usize, R)>> = Mutex::new(Vec::with_capacity(n));
    let progress = Mutex::new(progress);
    std::thread::scope(|scope| {
        for _ in 0..threads.max(1).min(n) {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= n {
                    break;
                }
                let result = work(idx);
                {
                    let mut hook = progress.lock().unwrap();
                    (*hook)(idx, &result);
                }
                done.lock().unwrap().push((idx, result));
            });
        }
    });
    let mut finished = done.into_inner().unwrap();
    finished.sort_by_key(|&(idx, _)| idx);
    finished.into_iter().map(|(_, result)| result).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_come_back_in_unit_order_for_any_thread_count() {
        let work = |idx: usize| {
            // Stagger completion so later units often finish first.
            std::thread::sleep(std::time::Duration::from_micros(
                ((37 * idx) % 11) as u64 * 50,
            ));
            idx * idx
        };
        let serial = run_units(20, 1, work, |_, _| {});
        for threads in [2, 4, 8] {
            assert_eq!(run_units(20, threads, work, |_, _| {}), serial);
        }
    }

    #[test]
    fn progress_sees_every_unit_exactly_once() {
        let mut seen = vec![0u32; 16];
        run_units(16, 4, |idx| idx, |idx, _| seen[idx] += 1);
        assert!(seen.iter().all(|&c| c == 1));
    }

    #[test]
    fn empty_input_spawns_nothing() {
        let out: Vec<usize> = run_units(0, 8, |idx| idx, |_, _| {});
        assert!(out.is_empty());
    }
}
