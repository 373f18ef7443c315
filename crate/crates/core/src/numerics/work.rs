//! Per-thread tally of terms and integrand evaluations, read back by the
//! verification runner.

use std::cell::Cell;

thread_local! {
    static COUNT: Cell<u64> = const { Cell::new(0) };
}

pub fn record(n: u64) {
    COUNT.with(|c| c.set(c.get().saturating_add(n)));
}

/// Returns the tally and resets it.
pub fn take() -> u64 {
    COUNT.with(|c| c.replace(0))
}

/// Runs `f` and returns the work it recorded on this thread. Work recorded
/// before the call is kept, so nested and interleaved measurements do not
/// disturb one another.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, u64) {
    let saved = take();
    let r = f();
    let used = take();
    COUNT.with(|c| c.set(saved));
    (r, used)
}
