//! Search-node accounting.
//!
//! Every exhaustive search in the crate charges the thread-local budget.
//! The default budget is unlimited; callers that need a cap wrap the work in
//! [`with_limit`].

use std::cell::Cell;

use crate::error::{Error, Result};

thread_local! {
    static LIMIT: Cell<u64> = const { Cell::new(u64::MAX) };
    static USED: Cell<u64> = const { Cell::new(0) };
}

/// Runs `f` with a fresh budget of `limit` search nodes, restoring the
/// enclosing budget afterwards.
pub fn with_limit<R>(limit: u64, f: impl FnOnce() -> R) -> R {
    let saved = (LIMIT.with(Cell::get), USED.with(Cell::get));
    LIMIT.with(|l| l.set(limit));
    USED.with(|u| u.set(0));
    let out = f();
    LIMIT.with(|l| l.set(saved.0));
    USED.with(|u| u.set(saved.1));
    out
}

/// Nodes charged so far under the innermost budget.
pub fn used() -> u64 {
    USED.with(Cell::get)
}

pub(crate) fn tick(nodes: u64) -> Result<()> {
    let used = USED.with(|u| {
        let next = u.get().saturating_add(nodes);
        u.set(next);
        next
    });
    let limit = LIMIT.with(Cell::get);
    if used > limit {
        Err(Error::WorkLimit { limit })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_is_enforced_and_restored() {
        let r = with_limit(10, || {
            tick(5)?;
            tick(5)?;
            tick(1)
        });
        assert_eq!(r, Err(Error::WorkLimit { limit: 10 }));
        assert!(tick(1_000_000).is_ok());
    }
}
