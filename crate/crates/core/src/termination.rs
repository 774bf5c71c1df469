//! Stop criteria, checked once per iteration and combined with OR.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum StopCriterion {
    MaxIter(usize),
    MaxEval(usize),
    /// Seconds of process CPU time.
    MaxTime(f64),
}

impl StopCriterion {
    pub fn name(&self) -> &'static str {
        match self {
            StopCriterion::MaxIter(_) => "maxiter",
            StopCriterion::MaxEval(_) => "maxeval",
            StopCriterion::MaxTime(_) => "maxtime",
        }
    }

    pub fn is_met(&self, state: &StopState) -> bool {
        match *self {
            StopCriterion::MaxIter(m) => state.iterations >= m,
            StopCriterion::MaxEval(m) => state.evaluations >= m,
            StopCriterion::MaxTime(s) => state.elapsed_seconds >= s,
        }
    }
}

/// Counters the stop criteria look at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopState {
    pub iterations: usize,
    pub evaluations: usize,
    pub elapsed_seconds: f64,
}

/// First criterion that is met, if any.
pub fn check_stop(criteria: &[StopCriterion], state: &StopState) -> Option<StopCriterion> {
    criteria.iter().copied().find(|c| c.is_met(state))
}

/// CPU time consumed by this process, in seconds.
pub fn process_time() -> f64 {
    let mut ts = libc::timespec {
        tv_sec: 0,
        tv_nsec: 0,
    };
    // SAFETY: `ts` is a valid, writable timespec for the duration of the call.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_PROCESS_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return 0.0;
    }
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

/// Measures process time from its creation.
#[derive(Debug, Clone, Copy)]
pub struct ProcessClock {
    start: f64,
}

impl ProcessClock {
    pub fn start() -> Self {
        ProcessClock {
            start: process_time(),
        }
    }

    pub fn elapsed(&self) -> f64 {
        process_time() - self.start
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(iterations: usize, evaluations: usize) -> StopState {
        StopState {
            iterations,
            evaluations,
            elapsed_seconds: 0.0,
        }
    }

    #[test]
    fn iteration_limit() {
        let c = [StopCriterion::MaxIter(200)];
        assert_eq!(
            check_stop(&c, &state(200, 20100)),
            Some(StopCriterion::MaxIter(200))
        );
        assert_eq!(check_stop(&c, &state(199, 20000)), None);
        assert_eq!(check_stop(&c, &state(0, 100)), None);
    }

    #[test]
    fn evaluation_limit_allows_overshoot() {
        let c = [StopCriterion::MaxEval(50_000)];
        assert!(check_stop(&c, &state(499, 50_050)).is_some());
        assert!(check_stop(&c, &state(498, 49_950)).is_none());
    }

    #[test]
    fn criteria_combine_with_or() {
        let c = [StopCriterion::MaxIter(10), StopCriterion::MaxEval(500)];
        assert_eq!(
            check_stop(&c, &state(3, 600)),
            Some(StopCriterion::MaxEval(500))
        );
        let zero_time = [StopCriterion::MaxTime(0.0)];
        assert!(check_stop(&zero_time, &state(0, 0)).is_some());
    }

    #[test]
    fn process_clock_is_monotone() {
        let clock = ProcessClock::start();
        let mut x = 0.0f64;
        for i in 0..200_000 {
            x += (i as f64).sqrt();
        }
        assert!(x > 0.0);
        assert!(clock.elapsed() >= 0.0);
    }
}
