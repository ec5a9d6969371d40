//! Decision procedures that return certificates.
//!
//! Every checker returns a [`CheckOutcome`]: `Positive` carries a certificate
//! that the independent replay functions accept, `Negative` is only produced
//! by exhausted searches (or by sound invariants such as homology), and
//! `Unknown` reports a spent budget.

mod budget;
mod collapse;
mod endo;
mod nonevasive;
mod pl;
mod shelling;

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use budget::{CheckOutcome, SearchBudget, SearchStats, Strategy, Verdict};
pub use collapse::{check_collapse, collapses_onto, is_collapsible, verify_collapse, CollapseCertificate, ReplayError};
pub use endo::{is_endocollapsible, verify_endocollapse, EndoCertificate};
pub use nonevasive::{is_nonevasive, verify_nonevasive, NonevasiveTree};
pub use pl::{pl_links_check, LinkAggregate, PlLinksReport, VertexLink};
pub use shelling::{
    check_shelling, is_conforming, is_shellable, join_shelling, shells_to, verify_shelling, ShellingCertificate,
};

pub(crate) use budget::{Cutoff, Meter};

/// Per-run randomness: `None` means lexicographic tie-breaking.
pub(crate) type RunRng = Option<ChaCha8Rng>;

/// Runs `budget.restarts` independent greedy attempts and returns the
/// successful attempt with the smallest index, so parallel runs agree with a
/// single worker. Each attempt counts its steps; the steps of attempts up to
/// the winner (the ones a single worker would run) go to the meter.
pub(crate) fn run_restarts<T, F>(budget: &SearchBudget, deadline: Instant, meter: &mut Meter, run: F) -> Option<T>
where
    T: Send,
    F: Fn(RunRng, Instant, &AtomicU64) -> Option<T> + Sync,
{
    let steps: Vec<AtomicU64> = (0..budget.restarts).map(|_| AtomicU64::new(0)).collect();
    let attempt = |i: u32| -> Option<T> {
        if Instant::now() > deadline {
            return None;
        }
        let rng = (i > 0).then(|| ChaCha8Rng::seed_from_u64(budget.restart_seed(i)));
        run(rng, deadline, &steps[i as usize])
    };
    let (found, used) = if budget.jobs <= 1 {
        (0..budget.restarts)
            .find_map(|i| attempt(i).map(|t| (t, i + 1)))
            .map_or((None, budget.restarts), |(t, n)| (Some(t), n))
    } else {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(budget.jobs).build().expect("thread pool");
        let found =
            pool.install(|| (0..budget.restarts).into_par_iter().find_map_first(|i| attempt(i).map(|t| (i, t))));
        match found {
            Some((i, t)) => (Some(t), i + 1),
            None => (None, budget.restarts),
        }
    };
    meter.stats.restarts += used;
    meter.stats.nodes += steps[..used as usize].iter().map(|n| n.load(Ordering::Relaxed)).sum::<u64>();
    found
}

pub(crate) fn deadline_for(budget: &SearchBudget) -> Instant {
    let secs = budget.max_seconds.clamp(0.0, 1.0e9);
    Instant::now() + Duration::from_secs_f64(secs)
}

/// A set of small integers with O(1) insert, remove and uniform sampling.
#[derive(Default, Clone)]
pub(crate) struct IndexedSet {
    items: Vec<u32>,
    pos: std::collections::HashMap<u32, usize>,
}

impl IndexedSet {
    pub(crate) fn insert(&mut self, x: u32) {
        if let std::collections::hash_map::Entry::Vacant(e) = self.pos.entry(x) {
            e.insert(self.items.len());
            self.items.push(x);
        }
    }

    pub(crate) fn remove(&mut self, x: u32) {
        if let Some(i) = self.pos.remove(&x) {
            let last = self.items.pop().expect("nonempty");
            if i < self.items.len() {
                self.items[i] = last;
                self.pos.insert(last, i);
            }
        }
    }

    pub(crate) fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Smallest element without rng, uniform element with one.
    pub(crate) fn pick(&self, rng: &mut RunRng) -> Option<u32> {
        use rand::Rng;
        match rng {
            None => self.items.iter().copied().min(),
            Some(r) if !self.items.is_empty() => Some(self.items[r.gen_range(0..self.items.len())]),
            Some(_) => None,
        }
    }
}
