//! Suite driver with wall-clock timing.

use std::time::Instant;

use finlie_core::oracle::{run_suite_timed, Outcome, Scope, VerificationReport};
use finlie_core::Result;

/// Run a registered suite, timing each check with a monotonic clock.
pub fn run_suite(id: &str, scope: &Scope) -> Result<Vec<VerificationReport>> {
    let t0 = Instant::now();
    let mut clock = || t0.elapsed().as_micros() as u64;
    run_suite_timed(id, scope, &mut clock)
}

/// Process status for a set of reports: 1 on any failure, 3 when a check
/// could not finish, else 0.
pub fn status(reports: &[VerificationReport]) -> i32 {
    if reports.iter().any(|r| matches!(r.outcome, Outcome::Fail(_))) {
        1
    } else if reports.iter().any(|r| matches!(r.outcome, Outcome::Aborted(_))) {
        3
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use finlie_core::group::Preset;
    use finlie_core::oracle::Fault;
    use finlie_core::ring::RingKind;

    #[test]
    fn pass_and_fault() {
        let s = Scope::new(Preset::SL2, 2, 2, 1, RingKind::Witt);
        let reps = run_suite("filtration", &s).unwrap();
        assert_eq!(status(&reps), 0);
        let mut bad = Scope::new(Preset::SL3, 2, 2, 1, RingKind::Witt);
        let dat = bad.group().unwrap().datum().clone();
        let n = dat.root_count();
        let (alpha, beta) = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| {
                let sum: Vec<i32> = dat.roots()[a].iter().zip(&dat.roots()[b]).map(|(x, y)| x + y).collect();
                dat.find_root(&sum).is_some()
            })
            .unwrap();
        bad.fault = Some(Fault { alpha, beta, term: 0, constant: 3 });
        let reps = run_suite("chevalley", &bad).unwrap();
        assert_eq!(status(&reps), 1, "{reps:?}");
    }
}
