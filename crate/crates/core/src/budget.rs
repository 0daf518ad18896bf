//! Cooperative cancellation: a wall-clock deadline plus an optional shared flag.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

#[derive(Clone, Debug, Default)]
pub struct Stop {
    deadline: Option<Instant>,
    flag: Option<Arc<AtomicBool>>,
}

impl Stop {
    /// Never stops.
    pub fn never() -> Stop {
        Stop::default()
    }

    /// Stops once `budget` has elapsed; a budget too large to represent never expires.
    pub fn after(budget: Duration) -> Stop {
        Stop {
            deadline: Instant::now().checked_add(budget),
            flag: None,
        }
    }

    pub fn with_flag(mut self, flag: Arc<AtomicBool>) -> Stop {
        self.flag = Some(flag);
        self
    }

    /// A child that stops at the earlier of the two deadlines and shares the flag.
    pub fn within(&self, budget: Duration) -> Stop {
        let d = Instant::now().checked_add(budget);
        let deadline = match (self.deadline, d) {
            (Some(p), Some(d)) => Some(p.min(d)),
            (p, d) => p.or(d),
        };
        Stop {
            deadline,
            flag: self.flag.clone(),
        }
    }

    pub fn should_stop(&self) -> bool {
        if let Some(f) = &self.flag {
            if f.load(Ordering::Relaxed) {
                return true;
            }
        }
        matches!(self.deadline, Some(d) if Instant::now() >= d)
    }

    /// Time left before the deadline; `None` when unbounded.
    pub fn remaining(&self) -> Option<Duration> {
        self.deadline
            .map(|d| d.saturating_duration_since(Instant::now()))
    }

    pub fn deadline(&self) -> Option<Instant> {
        self.deadline
    }
}

/// Seconds to a duration; negative and NaN become zero, huge values saturate.
pub fn secs(x: f64) -> Duration {
    if x.is_nan() || x <= 0.0 {
        return Duration::ZERO;
    }
    Duration::try_from_secs_f64(x).unwrap_or(Duration::MAX)
}
