use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

/// How a checker explores its search space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Memoized depth-first search; the only strategy that can refute.
    Exhaustive,
    /// Seeded randomized greedy runs; Positive or Unknown only.
    GreedyRestarts,
    /// Greedy restarts first, then exhaustive search with what is left.
    Hybrid,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::GreedyRestarts => "greedy_restarts",
            Strategy::Hybrid => "hybrid",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.replace('-', "_").as_str() {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "greedy_restarts" | "greedy" => Ok(Strategy::GreedyRestarts),
            "hybrid" => Ok(Strategy::Hybrid),
            other => Err(format!("unknown strategy `{other}`")),
        }
    }
}

/// Resource limits and randomness for a search. The seed fully determines
/// every randomized run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub max_seconds: f64,
    pub seed: u64,
    pub strategy: Strategy,
    /// Number of greedy runs for the randomized strategies.
    pub restarts: u32,
    /// Worker threads for restarts and per-vertex checks.
    pub jobs: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 50_000_000,
            max_seconds: 600.0,
            seed: 0,
            strategy: Strategy::Hybrid,
            restarts: 32,
            jobs: 1,
        }
    }
}

impl SearchBudget {
    pub fn exhaustive() -> Self {
        SearchBudget { strategy: Strategy::Exhaustive, ..Self::default() }
    }

    pub fn greedy(seed: u64, restarts: u32) -> Self {
        SearchBudget { strategy: Strategy::GreedyRestarts, seed, restarts, ..Self::default() }
    }

    pub fn with_seconds(mut self, s: f64) -> Self {
        self.max_seconds = s;
        self
    }

    pub fn with_nodes(mut self, n: u64) -> Self {
        self.max_nodes = n;
        self
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub(crate) fn runs_greedy(&self) -> bool {
        matches!(self.strategy, Strategy::GreedyRestarts | Strategy::Hybrid)
    }

    pub(crate) fn runs_exhaustive(&self) -> bool {
        matches!(self.strategy, Strategy::Exhaustive | Strategy::Hybrid)
    }

    /// Seed for restart `i`; restart 0 uses lexicographic tie-breaking.
    pub(crate) fn restart_seed(&self, i: u32) -> u64 {
        self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i as u64)
    }
}

/// Search statistics reported with every outcome.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub memo_hits: u64,
    pub restarts: u32,
    pub seconds: f64,
}

/// Three-valued checker verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "certificate", rename_all = "snake_case")]
pub enum Verdict<C> {
    Positive(C),
    /// Emitted only after the whole search space was exhausted.
    Negative,
    /// Budget ran out before a decision.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome<C> {
    #[serde(flatten)]
    pub verdict: Verdict<C>,
    pub stats: SearchStats,
}

impl<C> CheckOutcome<C> {
    pub fn is_positive(&self) -> bool {
        matches!(self.verdict, Verdict::Positive(_))
    }

    pub fn is_negative(&self) -> bool {
        matches!(self.verdict, Verdict::Negative)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.verdict, Verdict::Unknown)
    }

    pub fn certificate(&self) -> Option<&C> {
        match &self.verdict {
            Verdict::Positive(c) => Some(c),
            _ => None,
        }
    }

    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::Positive(_) => "positive",
            Verdict::Negative => "negative",
            Verdict::Unknown => "unknown",
        }
    }

    pub fn map<D>(self, f: impl FnOnce(C) -> D) -> CheckOutcome<D> {
        let verdict = match self.verdict {
            Verdict::Positive(c) => Verdict::Positive(f(c)),
            Verdict::Negative => Verdict::Negative,
            Verdict::Unknown => Verdict::Unknown,
        };
        CheckOutcome { verdict, stats: self.stats }
    }
}

/// Raised when a search runs out of budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Cutoff;

/// Node and wall-clock accounting shared by nested searches.
pub(crate) struct Meter {
    start: Instant,
    max_nodes: u64,
    max_seconds: f64,
    pub(crate) stats: SearchStats,
}

impl Meter {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        Meter {
            start: Instant::now(),
            max_nodes: budget.max_nodes,
            max_seconds: budget.max_seconds,
            stats: SearchStats::default(),
        }
    }

    pub(crate) fn tick(&mut self) -> Result<(), Cutoff> {
        self.stats.nodes += 1;
        if self.stats.nodes > self.max_nodes {
            return Err(Cutoff);
        }
        if self.stats.nodes.is_multiple_of(256) && self.out_of_time() {
            return Err(Cutoff);
        }
        Ok(())
    }

    pub(crate) fn out_of_time(&self) -> bool {
        self.start.elapsed().as_secs_f64() > self.max_seconds
    }

    pub(crate) fn hit(&mut self) {
        self.stats.memo_hits += 1;
    }

    pub(crate) fn finish<C>(mut self, verdict: Verdict<C>) -> CheckOutcome<C> {
        self.stats.seconds = self.start.elapsed().as_secs_f64();
        CheckOutcome { verdict, stats: self.stats }
    }
}
