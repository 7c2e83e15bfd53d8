//! Exhaustive generation of all weak orders on `[n]`, in ascending
//! lexicographic order of the ranking vector.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::order::WeakOrder;

/// Hard ceiling for enumeration (7 087 261 orders at n = 9).
pub const ENUMERATION_GUARD: usize = 9;

/// Streams every weak order on `[n]` exactly once.
pub fn enumerate_weak_orders(n: usize) -> Result<WeakOrderStream> {
    enumerate_weak_orders_with_guard(n, ENUMERATION_GUARD)
}

pub fn enumerate_weak_orders_with_guard(n: usize, guard: usize) -> Result<WeakOrderStream> {
    let guard = guard.min(ENUMERATION_GUARD);
    if n == 0 || n > guard {
        return Err(Error::ResourceLimit { n, guard });
    }
    Ok(WeakOrderStream {
        n,
        ranks: vec![0; n],
        state: StreamState::Fresh,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum StreamState {
    Fresh,
    Running,
    Done,
}

/// Depth-first walk over realizable rank vectors.
#[derive(Clone, Debug)]
pub struct WeakOrderStream {
    n: usize,
    ranks: Vec<u8>,
    state: StreamState,
}

impl WeakOrderStream {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Can the first `len` ranks be completed to a realizable vector?
    fn extendable(&self, len: usize) -> bool {
        let n = self.n;
        let mut counts = [0u8; ENUMERATION_GUARD + 2];
        for &r in &self.ranks[..len] {
            counts[r as usize] += 1;
        }
        let mut last: Option<(usize, usize)> = None;
        for (v, &c) in counts.iter().enumerate().take(n + 1).skip(1) {
            let c = c as usize;
            if c == 0 {
                continue;
            }
            if let Some((u, cu)) = last {
                if v - u < cu {
                    return false;
                }
            }
            last = Some((v, c));
        }
        match last {
            Some((u, c)) => u + c - 1 <= n,
            None => true,
        }
    }

    /// Fills positions `from..n` with the smallest feasible values.
    fn descend(&mut self, from: usize) {
        for i in from..self.n {
            let v = (1..=self.n as u8)
                .find(|&v| {
                    self.ranks[i] = v;
                    self.extendable(i + 1)
                })
                .expect("a feasible prefix always extends");
            self.ranks[i] = v;
        }
    }
}

impl Iterator for WeakOrderStream {
    type Item = WeakOrder;

    fn next(&mut self) -> Option<WeakOrder> {
        match self.state {
            StreamState::Done => return None,
            StreamState::Fresh => {
                self.descend(0);
                self.state = StreamState::Running;
                return Some(WeakOrder::from_rank_slice(&self.ranks));
            }
            StreamState::Running => {}
        }
        let n = self.n as u8;
        for i in (0..self.n).rev() {
            while self.ranks[i] < n {
                self.ranks[i] += 1;
                if self.extendable(i + 1) {
                    self.descend(i + 1);
                    return Some(WeakOrder::from_rank_slice(&self.ranks));
                }
            }
        }
        self.state = StreamState::Done;
        None
    }
}

/// Ordered Bell number: `a(n) = Σ_{k=1}^{n} C(n,k) a(n-k)`, `a(0) = 1`.
pub fn count_weak_orders(n: usize) -> BigUint {
    let mut a: Vec<BigUint> = vec![BigUint::one()];
    for m in 1..=n {
        let mut binom = BigUint::one();
        let mut total = BigUint::default();
        for k in 1..=m {
            binom = binom * BigUint::from(m - k + 1) / BigUint::from(k);
            total += &binom * &a[m - k];
        }
        a.push(total);
    }
    a.swap_remove(n)
}

const CACHE_LIMIT: usize = 8;

/// All weak orders on `[n]` in canonical order, materialized and shared.
/// Results for `n <= 8` are cached for the life of the process.
pub fn weak_orders(n: usize, guard: usize) -> Result<Arc<Vec<WeakOrder>>> {
    let stream = enumerate_weak_orders_with_guard(n, guard)?;
    if n > CACHE_LIMIT {
        return Ok(Arc::new(stream.collect()));
    }
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<WeakOrder>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().expect("cache poisoned").get(&n) {
        return Ok(Arc::clone(hit));
    }
    let list = Arc::new(stream.collect::<Vec<_>>());
    cache
        .lock()
        .expect("cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::clone(&list));
    Ok(list)
}
