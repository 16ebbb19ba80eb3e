//! Ordered parallel search for qualifying trials.

use rayon::prelude::*;

use crate::error::Result;

const FIRST_BATCH: u64 = 256;
const MAX_BATCH: u64 = 1 << 16;

/// What a search produced: the first `target` hits in attempt order and
/// the number of attempts up to and including the last one used.
#[derive(Debug)]
pub(crate) struct Found<T> {
    pub items: Vec<T>,
    pub attempts: u64,
}

/// Evaluates attempts `0, 1, 2, …` in parallel batches and keeps the first
/// `target` that return `Some`, so the outcome is independent of thread
/// count and batch size. An error in an attempt before the cut is returned.
pub(crate) fn first_qualifying<T, F>(target: u64, max_attempts: u64, f: F) -> Result<Found<T>>
where
    T: Send,
    F: Fn(u64) -> Result<Option<T>> + Sync,
{
    first_counted(target, max_attempts, f, |_| true)
}

/// Like [`first_qualifying`], but only items passing `counts` count toward
/// `target`; the others are kept too.
pub(crate) fn first_counted<T, F, C>(target: u64, max_attempts: u64, f: F, counts: C) -> Result<Found<T>>
where
    T: Send,
    F: Fn(u64) -> Result<Option<T>> + Sync,
    C: Fn(&T) -> bool,
{
    let mut items = Vec::new();
    let mut counted = 0u64;
    let mut next = 0u64;
    let mut batch = FIRST_BATCH;
    let mut attempts = 0u64;
    while counted < target && next < max_attempts {
        let end = next.saturating_add(batch).min(max_attempts);
        let results: Vec<Result<Option<T>>> = (next..end).into_par_iter().map(&f).collect();
        for (offset, r) in results.into_iter().enumerate() {
            attempts = next + offset as u64 + 1;
            if let Some(item) = r? {
                counted += u64::from(counts(&item));
                items.push(item);
                if counted == target {
                    break;
                }
            }
        }
        next = end;
        batch = (batch * 2).min(MAX_BATCH);
    }
    Ok(Found { items, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_attempt_order_and_stops_at_target() {
        let found = first_qualifying(5, 10_000, |i| Ok((i % 7 == 3).then_some(i))).unwrap();
        assert_eq!(found.items, vec![3, 10, 17, 24, 31]);
        assert_eq!(found.attempts, 32);
    }

    #[test]
    fn respects_the_attempt_budget() {
        let found = first_qualifying(5, 20, |i| Ok((i % 7 == 3).then_some(i))).unwrap();
        assert_eq!(found.items, vec![3, 10, 17]);
        assert_eq!(found.attempts, 20);
    }

    #[test]
    fn uncounted_items_are_kept() {
        let found = first_counted(2, 100, |i| Ok((i % 3 == 0).then_some(i)), |&i| i % 2 == 0).unwrap();
        assert_eq!(found.items, vec![0, 3, 6]);
        assert_eq!(found.attempts, 7);
    }

    #[test]
    fn zero_target_does_nothing() {
        let found = first_qualifying::<u64, _>(0, 100, |_| panic!("not called")).unwrap();
        assert!(found.items.is_empty());
        assert_eq!(found.attempts, 0);
    }
}
