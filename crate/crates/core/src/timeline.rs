//! Discrete time and partial functions over it.
//!
//! [`TimedMap`] stores a partial function `Tick -> V` as sorted, disjoint
//! runs. Adjacent runs never carry equal values, so two maps are `==` exactly
//! when they agree at every tick.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{KernelError, Result};

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct Tick(pub u64);

impl Tick {
    pub const ZERO: Tick = Tick(0);

    pub fn value(self) -> u64 {
        self.0
    }

    pub fn next(self) -> Tick {
        Tick(self.0 + 1)
    }

    pub fn prev(self) -> Option<Tick> {
        self.0.checked_sub(1).map(Tick)
    }
}

impl fmt::Display for Tick {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

impl From<u64> for Tick {
    fn from(v: u64) -> Self {
        Tick(v)
    }
}

/// Closed interval of ticks; `end == None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TickRange {
    pub start: Tick,
    pub end: Option<Tick>,
}

impl TickRange {
    pub fn between(start: Tick, end: Tick) -> Result<Self> {
        if end < start {
            return Err(KernelError::EmptyInterval);
        }
        Ok(Self {
            start,
            end: Some(end),
        })
    }

    pub fn from(start: Tick) -> Self {
        Self { start, end: None }
    }

    pub fn at(t: Tick) -> Self {
        Self {
            start: t,
            end: Some(t),
        }
    }

    pub fn contains(&self, t: Tick) -> bool {
        t >= self.start && self.end.is_none_or(|e| t <= e)
    }

    /// Ticks of a bounded range; an unbounded range yields only its start.
    pub fn ticks(&self) -> impl Iterator<Item = Tick> {
        let end = self.end.unwrap_or(self.start);
        (self.start.0..=end.0).map(Tick)
    }
}

impl fmt::Display for TickRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            Some(e) => write!(f, "[{}, {}]", self.start, e),
            None => write!(f, "[{}, ..)", self.start),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Run<V> {
    start: Tick,
    end: Option<Tick>,
    value: V,
}

impl<V> Run<V> {
    fn covers(&self, t: Tick) -> bool {
        t >= self.start && self.end.is_none_or(|e| t <= e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TimedMap<V> {
    runs: Vec<Run<V>>,
}

impl<V> Default for TimedMap<V> {
    fn default() -> Self {
        Self { runs: Vec::new() }
    }
}

impl<V: Clone + PartialEq> TimedMap<V> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from `(start, end, value)` runs. Runs must be ordered and
    /// disjoint; only the last may be open.
    pub fn from_runs<I>(runs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Tick, Option<Tick>, V)>,
    {
        let mut map = Self::new();
        for (start, end, value) in runs {
            if let Some(e) = end {
                if e < start {
                    return Err(KernelError::InvertedRun { start, end: e });
                }
            }
            if let Some(last) = map.runs.last() {
                match last.end {
                    Some(e) if e < start => {}
                    _ => return Err(KernelError::OverlappingRuns(start)),
                }
            }
            map.push_run(start, end, value);
        }
        Ok(map)
    }

    /// Constant value from `start` on.
    pub fn starting(start: Tick, value: V) -> Self {
        let mut map = Self::new();
        map.push_run(start, None, value);
        map
    }

    fn push_run(&mut self, start: Tick, end: Option<Tick>, value: V) {
        if let Some(last) = self.runs.last_mut() {
            if last.value == value && last.end.map(Tick::next) == Some(start) {
                last.end = end;
                return;
            }
        }
        self.runs.push(Run { start, end, value });
    }

    fn run_index(&self, t: Tick) -> Option<usize> {
        let idx = self.runs.partition_point(|r| r.start <= t);
        if idx == 0 {
            return None;
        }
        self.runs[idx - 1].covers(t).then_some(idx - 1)
    }

    pub fn get(&self, t: Tick) -> Option<&V> {
        self.run_index(t).map(|i| &self.runs[i].value)
    }

    pub fn defined_at(&self, t: Tick) -> bool {
        self.run_index(t).is_some()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn first_defined(&self) -> Option<Tick> {
        self.runs.first().map(|r| r.start)
    }

    /// Last tick with a definition; `None` for empty or open-ended maps.
    pub fn last_defined(&self) -> Option<Tick> {
        self.runs.last().and_then(|r| r.end)
    }

    pub fn is_open_ended(&self) -> bool {
        self.runs.last().is_some_and(|r| r.end.is_none())
    }

    /// Maximal constant runs as `(start, end, value)`.
    pub fn runs(&self) -> impl Iterator<Item = (Tick, Option<Tick>, &V)> + '_ {
        self.runs.iter().map(|r| (r.start, r.end, &r.value))
    }

    pub fn values(&self) -> impl Iterator<Item = &V> + '_ {
        self.runs.iter().map(|r| &r.value)
    }

    /// Ticks where the function may change: run starts and the tick after
    /// each closed run.
    pub fn breakpoints(&self) -> Vec<Tick> {
        let mut out = Vec::with_capacity(self.runs.len() * 2);
        for r in &self.runs {
            out.push(r.start);
            if let Some(e) = r.end {
                out.push(e.next());
            }
        }
        out.dedup();
        out
    }

    /// Freeze at `t`: agree up to `t`, then hold the value at `t` forever
    /// (or stay undefined if undefined at `t`).
    pub fn prefix(&self, t: Tick) -> Self {
        let mut runs = Vec::new();
        for r in &self.runs {
            if r.start > t {
                break;
            }
            if r.covers(t) {
                runs.push(Run {
                    start: r.start,
                    end: None,
                    value: r.value.clone(),
                });
                break;
            }
            runs.push(r.clone());
        }
        Self { runs }
    }

    /// Restriction to a tick range; undefined outside it.
    pub fn restrict(&self, range: TickRange) -> Self {
        let mut runs = Vec::new();
        for r in &self.runs {
            if range.end.is_some_and(|e| r.start > e) {
                break;
            }
            if r.end.is_some_and(|e| e < range.start) {
                continue;
            }
            let start = r.start.max(range.start);
            let end = match (r.end, range.end) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            runs.push(Run {
                start,
                end,
                value: r.value.clone(),
            });
        }
        Self { runs }
    }

    /// Undefined from `t` on.
    pub fn clear_from(&mut self, t: Tick) {
        let keep = self.runs.partition_point(|r| r.start < t);
        self.runs.truncate(keep);
        if let Some(last) = self.runs.last_mut() {
            let cut = t.prev().expect("a run starts before t, so t > 0");
            last.end = Some(last.end.map_or(cut, |e| e.min(cut)));
        }
    }

    /// Value `v` from `t` on.
    pub fn set_from(&mut self, t: Tick, value: V) {
        self.clear_from(t);
        self.push_run(t, None, value);
    }

    pub fn map<W: Clone + PartialEq>(&self, mut f: impl FnMut(&V) -> W) -> TimedMap<W> {
        let mut out = TimedMap::new();
        for r in &self.runs {
            out.push_run(r.start, r.end, f(&r.value));
        }
        out
    }
}
