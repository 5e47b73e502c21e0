// Copyright 2026 The mbgp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::collections::VecDeque;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use crate::registry::Registry;

/// Requests per minute allowed when nothing else is configured.
pub const DEFAULT_RATE_LIMIT: u32 = 6;

const WINDOW: Duration = Duration::from_secs(60);

/// Time source for rate limiting and retry backoff.
pub trait Clock: Send + Sync {
    /// Time elapsed since the clock's epoch.
    fn now(&self) -> Duration;
    fn sleep(&self, d: Duration);
}

/// Wall-clock time measured from construction.
#[derive(Debug)]
pub struct SystemClock {
    start: Instant,
}

impl Default for SystemClock {
    fn default() -> Self {
        SystemClock { start: Instant::now() }
    }
}

impl Clock for SystemClock {
    fn now(&self) -> Duration {
        self.start.elapsed()
    }

    fn sleep(&self, d: Duration) {
        std::thread::sleep(d)
    }
}

/// Virtual time: sleeping advances the clock instantly.
#[derive(Debug, Default)]
pub struct SimClock {
    now: Mutex<Duration>,
}

impl SimClock {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn advance(&self, d: Duration) {
        *self.now.lock().unwrap() += d;
    }
}

impl Clock for SimClock {
    fn now(&self) -> Duration {
        *self.now.lock().unwrap()
    }

    fn sleep(&self, d: Duration) {
        self.advance(d)
    }
}

pub fn clock_registry() -> Registry<dyn Clock> {
    let mut r: Registry<dyn Clock> = Registry::new("clock");
    r.register("system", "wall-clock time, sleeps block", |_| {
        Ok(Box::new(SystemClock::default()))
    });
    r.register("simulated", "virtual time, sleeps return immediately", |_| {
        Ok(Box::new(SimClock::new()))
    });
    r
}

/// Sliding-window request gate shared by every issuer of a campaign.
///
/// At most `per_minute` requests are admitted in any 60 s window: the
/// `(n + per_minute)`-th request waits until 60 s after the `n`-th.
pub struct RateLimiter {
    per_minute: u32,
    clock: Arc<dyn Clock>,
    issued: Mutex<VecDeque<Duration>>,
}

impl RateLimiter {
    pub fn new(per_minute: u32, clock: Arc<dyn Clock>) -> Self {
        assert!(per_minute >= 1, "rate limit must be at least 1 request per minute");
        RateLimiter {
            per_minute,
            clock,
            issued: Mutex::new(VecDeque::new()),
        }
    }

    pub fn per_minute(&self) -> u32 {
        self.per_minute
    }

    pub fn clock(&self) -> &Arc<dyn Clock> {
        &self.clock
    }

    /// Blocks until a request may be issued and returns its admission time.
    pub fn acquire(&self) -> Duration {
        // the lock is held while waiting so admissions stay ordered
        let mut issued = self.issued.lock().unwrap();
        loop {
            let now = self.clock.now();
            while issued.front().is_some_and(|t| now >= *t + WINDOW) {
                issued.pop_front();
            }
            if issued.len() < self.per_minute as usize {
                issued.push_back(now);
                return now;
            }
            let front = *issued.front().expect("window is full");
            self.clock.sleep(front + WINDOW - now);
        }
    }
}

/// Retries after a failed transport call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    /// Backoff before the first retry; doubled for each further retry.
    pub initial_backoff: Duration,
}

impl RetryPolicy {
    /// Three retries with 2 s, 4 s, 8 s backoff.
    pub fn live() -> Self {
        RetryPolicy {
            max_retries: 3,
            initial_backoff: Duration::from_secs(2),
        }
    }

    /// Three retries without waiting, for fixture replays.
    pub fn immediate() -> Self {
        RetryPolicy {
            max_retries: 3,
            initial_backoff: Duration::ZERO,
        }
    }

    pub fn backoff(&self, retry: u32) -> Duration {
        self.initial_backoff * 2u32.saturating_pow(retry.saturating_sub(1))
    }
}
