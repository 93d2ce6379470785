//! Cooperative per-task wall-clock budgets.
//!
//! The verification harness gives each record a time budget. The expensive
//! inner loops (box enumeration, simplex pivots, homology ranks, power
//! searches) call [`checkpoint`] at coarse granularity; when the running
//! task is past its deadline the checkpoint unwinds with a private payload
//! that [`with_deadline`] converts into a `TimedOut` result. Code that never
//! sets a deadline pays one thread-local read per checkpoint.

use std::cell::Cell;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

thread_local! {
    static DEADLINE: Cell<Option<Instant>> = const { Cell::new(None) };
}

/// Marker payload carried by the unwind when a deadline fires.
struct DeadlineExceeded;

/// Returned by [`with_deadline`] when the closure ran out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimedOut;

/// Run `f` with a wall-clock budget on the current thread.
///
/// Nested calls keep the tighter of the two deadlines.
pub fn with_deadline<T>(budget: Duration, f: impl FnOnce() -> T) -> Result<T, TimedOut> {
    let new = Instant::now() + budget;
    let previous = DEADLINE.with(|d| d.get());
    let effective = match previous {
        Some(p) => p.min(new),
        None => new,
    };
    DEADLINE.with(|d| d.set(Some(effective)));
    let outcome = panic::catch_unwind(AssertUnwindSafe(f));
    DEADLINE.with(|d| d.set(previous));
    match outcome {
        Ok(value) => Ok(value),
        Err(payload) => {
            if payload.is::<DeadlineExceeded>() {
                Err(TimedOut)
            } else {
                panic::resume_unwind(payload)
            }
        }
    }
}

/// Abort the enclosing [`with_deadline`] call if its budget is spent.
#[inline]
pub fn checkpoint() {
    DEADLINE.with(|d| {
        if let Some(deadline) = d.get() {
            if Instant::now() > deadline {
                panic::panic_any(DeadlineExceeded);
            }
        }
    });
}
