//! Exhaustive search over circulant first rows.
//!
//! Candidates are `u64` masks, bit `i` holding coordinate `i + 1`, so orders
//! up to 64 are supported. A row `g` gives a circulant Hadamard matrix iff
//! `d(g, x^i g) = N/2` for `1 <= i <= N/2`: the distance between rows `j` and
//! `j + i` depends only on the offset `i`, and offsets `i` and `N - i` agree.
//!
//! The candidate space is either every row or, under weight pruning, the
//! rows of weight `2n ± √n`. Enumeration order is ascending weight slice, then
//! ascending integer value within a slice; a candidate's position in that
//! order is its rank, which is what checkpoints record.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use log::info;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circulant::{admissible_weights, is_hadamard_generator, turyn_feasible};
use crate::gf2::BitVector;
use crate::poly::RingElement;

/// Checkpoints are written after every block of this many candidates.
pub const CHECKPOINT_INTERVAL: u64 = 1 << 20;

pub const MAX_ORDER: usize = 64;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search: {0}")]
    InvalidSpec(String),
    #[error("{planned} candidates exceed the budget of 2^{max_log2}")]
    BudgetExceeded { planned: u128, max_log2: u32 },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error("hit {0} violates the circulant Hadamard weight condition")]
    Inconsistent(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Prune {
    None,
    /// Only rows of weight `2n ± √n`.
    Weight,
    /// Weight pruning, and nothing at all unless `n` is an odd square.
    #[serde(rename = "turyn")]
    WeightAndTuryn,
}

impl fmt::Display for Prune {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Prune::None => "none",
            Prune::Weight => "weight",
            Prune::WeightAndTuryn => "turyn",
        })
    }
}

impl FromStr for Prune {
    type Err = SearchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Prune::None),
            "weight" => Ok(Prune::Weight),
            "turyn" | "weight_and_turyn" => Ok(Prune::WeightAndTuryn),
            other => Err(SearchError::InvalidSpec(format!("unknown prune level {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partition {
    pub index: usize,
    pub count: usize,
}

impl Partition {
    pub const WHOLE: Partition = Partition { index: 0, count: 1 };
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub order: usize,
    pub prune: Prune,
    pub partition: Partition,
    /// Stop after this many candidates.
    pub limit: Option<u64>,
}

impl SearchSpec {
    pub fn new(order: usize, prune: Prune) -> Self {
        SearchSpec {
            order,
            prune,
            partition: Partition::WHOLE,
            limit: None,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::InvalidSpec(m));
        if self.order == 0 || self.order % 4 != 0 {
            return bad(format!("order {} is not a positive multiple of 4", self.order));
        }
        if self.order > MAX_ORDER {
            return bad(format!("order {} exceeds {MAX_ORDER}", self.order));
        }
        if self.partition.count == 0 || self.partition.index >= self.partition.count {
            return bad(format!(
                "worker {} of {} is out of range",
                self.partition.index, self.partition.count
            ));
        }
        Ok(())
    }
}

/// Cap on the number of candidates a search may plan, as a power of two.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_log2: u32,
}

impl Budget {
    /// `2^24` candidates unpruned; `2^34` under pruning, which covers both
    /// weight slices at order 36.
    pub fn default_for(prune: Prune) -> Self {
        match prune {
            Prune::None => Budget { max_log2: 24 },
            _ => Budget { max_log2: 34 },
        }
    }

    fn check(&self, planned: u128) -> Result<(), SearchError> {
        if self.max_log2 < 128 && planned > 1u128 << self.max_log2 {
            return Err(SearchError::BudgetExceeded {
                planned,
                max_log2: self.max_log2,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub candidates_tested: u64,
    pub hits: Vec<BitVector>,
    /// One representative per cyclic-shift orbit of the hits: the least
    /// shift in polynomial order. A matrix and its complement land in
    /// different orbits; the notes give the count up to complement.
    pub shift_complement_classes: Vec<BitVector>,
    pub wall_notes: String,
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn rotate(row: u64, k: usize, n: usize) -> u64 {
    if k == 0 {
        row
    } else {
        ((row << k) | (row >> (n - k))) & mask(n)
    }
}

/// Offset test on a packed row of length `n <= 64`.
#[inline]
pub fn verify_bits(row: u64, n: usize) -> bool {
    let half = (n / 2) as u32;
    (1..=n / 2).all(|i| (row ^ rotate(row, i, n)).count_ones() == half)
}

/// True iff `circulant(row)` is a binary Hadamard matrix.
pub fn verify_candidate(row: &BitVector) -> Result<bool, SearchError> {
    let n = row.len();
    if n % 4 != 0 {
        return Err(SearchError::InvalidSpec(format!("length {n} is not a multiple of 4")));
    }
    if n <= 64 {
        return Ok(verify_bits(row.to_u64(), n));
    }
    Ok((1..=n / 2).all(|i| row.distance(&row.rotate_right(i)) == n / 2))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Weights to enumerate, or `None` for every row.
fn weight_slices(order: usize, prune: Prune) -> Option<Vec<usize>> {
    match prune {
        Prune::None => None,
        Prune::Weight => Some(admissible_weights(order)),
        Prune::WeightAndTuryn => {
            if turyn_feasible(order).unwrap_or(false) {
                Some(admissible_weights(order))
            } else {
                Some(Vec::new())
            }
        }
    }
}

/// Size of the full candidate space.
pub fn planned_candidates(order: usize, prune: Prune) -> u128 {
    match weight_slices(order, prune) {
        None => 1u128 << order,
        Some(ws) => ws.iter().map(|&w| binomial(order, w)).sum(),
    }
}

/// Next integer with the same popcount (Gosper), or `None` past `n` bits.
#[inline]
fn next_same_weight(x: u64, n: usize) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let c = x & x.wrapping_neg();
    let r = x.checked_add(c)?;
    let next = (((r ^ x) >> 2) / c) | r;
    (n == 64 || next >> n == 0).then_some(next)
}

fn lowest_with_weight(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

/// The `rank`-th `k`-subset of `0..n` in ascending integer order.
fn unrank_combination(mut rank: u128, k: usize, n: usize) -> u64 {
    let mut out = 0u64;
    let mut hi = n;
    for i in (1..=k).rev() {
        // largest c < hi with C(c, i) <= rank
        let mut c = i - 1;
        while c + 1 < hi && binomial(c + 1, i) <= rank {
            c += 1;
        }
        out |= 1 << c;
        rank -= binomial(c, i);
        hi = c;
    }
    out
}

/// Sequential cursor over the candidate space in rank order.
struct RankedCursor {
    order: usize,
    slices: Option<Vec<usize>>,
    slice: usize,
    current: Option<u64>,
}

impl RankedCursor {
    fn at(order: usize, prune: Prune, mut rank: u128) -> Self {
        let slices = weight_slices(order, prune);
        let (slice, current) = match &slices {
            None => (0, (rank < 1u128 << order).then_some(rank as u64)),
            Some(ws) => {
                let mut found = (ws.len(), None);
                for (i, &w) in ws.iter().enumerate() {
                    let size = binomial(order, w);
                    if rank < size {
                        found = (i, Some(unrank_combination(rank, w, order)));
                        break;
                    }
                    rank -= size;
                }
                found
            }
        };
        RankedCursor {
            order,
            slices,
            slice,
            current,
        }
    }
}

impl Iterator for RankedCursor {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        let cur = self.current?;
        self.current = match &self.slices {
            None => cur.checked_add(1).filter(|&x| self.order == 64 || x >> self.order == 0),
            Some(ws) => next_same_weight(cur, self.order).or_else(|| {
                self.slice += 1;
                ws.get(self.slice).map(|&w| lowest_with_weight(w))
            }),
        };
        Some(cur)
    }
}

fn prefix_bits(order: usize, workers: usize) -> usize {
    let mut p = 0;
    while (1usize << p) < workers && p < order {
        p += 1;
    }
    p
}

/// Calls `visit` on every candidate owned by `partition`: the high-order
/// prefixes `j` with `j % count == index`. Stops early when `visit` returns
/// false.
fn for_each_in_partition(
    order: usize,
    prune: Prune,
    partition: Partition,
    mut visit: impl FnMut(u64) -> bool,
) {
    let p = prefix_bits(order, partition.count);
    let low_bits = order - p;
    let slices = weight_slices(order, prune);
    for prefix in (0..1u64 << p).filter(|j| *j as usize % partition.count == partition.index) {
        let high = if low_bits == 64 { 0 } else { prefix << low_bits };
        match &slices {
            None => {
                for low in 0..=mask(low_bits.max(1)) >> usize::from(low_bits == 0) {
                    if !visit(high | low) {
                        return;
                    }
                }
            }
            Some(ws) => {
                for &w in ws {
                    let Some(r) = w.checked_sub(prefix.count_ones() as usize) else {
                        continue;
                    };
                    if r > low_bits {
                        continue;
                    }
                    let mut low = Some(lowest_with_weight(r));
                    while let Some(l) = low {
                        if !visit(high | l) {
                            return;
                        }
                        low = next_same_weight(l, low_bits);
                    }
                }
            }
        }
    }
}

/// The least cyclic shift of `row`.
pub fn shift_class_representative(row: &BitVector) -> BitVector {
    (0..row.len())
        .map(|i| row.rotate_right(i))
        .min()
        .expect("rows are nonempty")
}

fn finish(
    order: usize,
    prune: Prune,
    tested: u64,
    mut hits: Vec<u64>,
    elapsed: f64,
    extra: &str,
) -> Result<SearchResult, SearchError> {
    hits.sort_unstable();
    hits.dedup();
    let hits: Vec<BitVector> = hits.into_iter().map(|h| BitVector::from_u64(order, h)).collect();
    let allowed = admissible_weights(order);
    for h in &hits {
        // full-matrix recheck, then the weight law
        if !is_hadamard_generator(&RingElement::new(h.clone())) || !allowed.contains(&h.weight()) {
            return Err(SearchError::Inconsistent(h.to_string()));
        }
    }
    let mut classes: Vec<BitVector> = hits.iter().map(shift_class_representative).collect();
    classes.sort();
    classes.dedup();
    let mut up_to_complement: Vec<BitVector> = classes
        .iter()
        .map(|c| c.clone().min(shift_class_representative(&c.complement())))
        .collect();
    up_to_complement.sort();
    up_to_complement.dedup();
    let wall_notes = format!(
        "order {order}, prune {prune}: {tested} candidates, {} hits, {} shift classes ({} up to complement), {elapsed:.3}s{extra}",
        hits.len(),
        classes.len(),
        up_to_complement.len(),
    );
    Ok(SearchResult {
        candidates_tested: tested,
        hits,
        shift_complement_classes: classes,
        wall_notes,
    })
}

/// Runs one partition of the search serially.
pub fn run_search(spec: &SearchSpec, budget: Budget) -> Result<SearchResult, SearchError> {
    spec.validate()?;
    let planned = planned_candidates(spec.order, spec.prune);
    budget.check(spec.limit.map_or(planned, |l| planned.min(l as u128)))?;
    let start = Instant::now();
    let mut tested = 0u64;
    let mut hits = Vec::new();
    let limit = spec.limit.unwrap_or(u64::MAX);
    for_each_in_partition(spec.order, spec.prune, spec.partition, |row| {
        if tested >= limit {
            return false;
        }
        tested += 1;
        if verify_bits(row, spec.order) {
            hits.push(row);
        }
        true
    });
    let extra = if tested == limit && spec.limit.is_some() {
        ", stopped at the candidate limit"
    } else {
        ""
    };
    let part = if spec.partition.count > 1 {
        format!(", worker {} of {}", spec.partition.index, spec.partition.count)
    } else {
        String::new()
    };
    finish(
        spec.order,
        spec.prune,
        tested,
        hits,
        start.elapsed().as_secs_f64(),
        &format!("{part}{extra}"),
    )
}

/// Runs every partition of `spec` on its own thread and merges the results.
/// `spec.partition` is ignored; `spec.limit` applies per worker.
pub fn run_parallel(spec: &SearchSpec, jobs: usize, budget: Budget) -> Result<SearchResult, SearchError> {
    let jobs = jobs.max(1);
    let start = Instant::now();
    let parts: Vec<Result<SearchResult, SearchError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..jobs)
            .map(|index| {
                let spec = SearchSpec {
                    partition: Partition { index, count: jobs },
                    ..spec.clone()
                };
                scope.spawn(move || run_search(&spec, budget))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    let mut tested = 0;
    let mut hits = Vec::new();
    for part in parts {
        let part = part?;
        tested += part.candidates_tested;
        hits.extend(part.hits.iter().map(BitVector::to_u64));
    }
    finish(
        spec.order,
        spec.prune,
        tested,
        hits,
        start.elapsed().as_secs_f64(),
        &format!(", {jobs} workers"),
    )
}

/// Resumable progress of a serial-order search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub order: usize,
    pub prune: Prune,
    /// Number of candidates already tested, in rank order.
    pub cursor: u128,
    pub hits: Vec<BitVector>,
}

impl Checkpoint {
    pub fn render(&self) -> String {
        let hits: Vec<String> = self.hits.iter().map(|h| h.to_string()).collect();
        format!(
            "order={}\ncursor={}\nhits={}\nprune={}\n",
            self.order,
            self.cursor,
            hits.join(","),
            self.prune
        )
    }

    pub fn parse(text: &str) -> Result<Self, SearchError> {
        let bad = |m: String| SearchError::Checkpoint(m);
        let (mut order, mut cursor, mut hits, mut prune) = (None, None, None, Prune::None);
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("malformed line {line:?}")))?;
            match key {
                "order" => order = Some(value.parse::<usize>().map_err(|e| bad(e.to_string()))?),
                "cursor" => cursor = Some(value.parse::<u128>().map_err(|e| bad(e.to_string()))?),
                "hits" => {
                    hits = Some(
                        value
                            .split(',')
                            .filter(|s| !s.is_empty())
                            .map(|s| s.parse::<BitVector>().map_err(|e| bad(e.to_string())))
                            .collect::<Result<Vec<_>, _>>()?,
                    )
                }
                "prune" => prune = value.parse()?,
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        let order = order.ok_or_else(|| bad("missing order".into()))?;
        let hits = hits.unwrap_or_default();
        if hits.iter().any(|h| h.len() != order) {
            return Err(bad("hit length differs from order".into()));
        }
        Ok(Checkpoint {
            order,
            prune,
            cursor: cursor.ok_or_else(|| bad("missing cursor".into()))?,
            hits,
        })
    }

    pub fn load(path: &Path) -> Result<Self, SearchError> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Writes through a temporary file so an interrupted write keeps the
    /// previous checkpoint.
    pub fn store(&self, path: &Path) -> Result<(), SearchError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, self.render())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Serial-order search in blocks of [`CHECKPOINT_INTERVAL`] candidates, each
/// block split across `jobs` threads, with the checkpoint rewritten after
/// every block. With `resume`, progress continues from the file at `path`.
pub fn run_checkpointed(
    spec: &SearchSpec,
    jobs: usize,
    budget: Budget,
    path: &Path,
    resume: bool,
) -> Result<SearchResult, SearchError> {
    spec.validate()?;
    let total = planned_candidates(spec.order, spec.prune);
    let end = spec.limit.map_or(total, |l| total.min(l as u128));
    budget.check(end)?;
    let mut state = if resume && path.exists() {
        let cp = Checkpoint::load(path)?;
        if cp.order != spec.order || cp.prune != spec.prune {
            return Err(SearchError::Checkpoint(format!(
                "checkpoint is for order {} prune {}, not order {} prune {}",
                cp.order, cp.prune, spec.order, spec.prune
            )));
        }
        info!("resuming order {} at candidate {}", cp.order, cp.cursor);
        cp
    } else {
        Checkpoint {
            order: spec.order,
            prune: spec.prune,
            cursor: 0,
            hits: Vec::new(),
        }
    };
    let resumed_at = state.cursor;
    let jobs = jobs.max(1) as u128;
    let start = Instant::now();
    while state.cursor < end {
        let block_end = end.min(state.cursor + CHECKPOINT_INTERVAL as u128);
        let span = block_end - state.cursor;
        let found: Vec<u64> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|j| {
                    let lo = state.cursor + span * j / jobs;
                    let hi = state.cursor + span * (j + 1) / jobs;
                    let (order, prune) = (spec.order, spec.prune);
                    scope.spawn(move || {
                        RankedCursor::at(order, prune, lo)
                            .take((hi - lo) as usize)
                            .filter(|&row| verify_bits(row, order))
                            .collect::<Vec<u64>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("search worker panicked"))
                .collect()
        });
        state
            .hits
            .extend(found.into_iter().map(|h| BitVector::from_u64(spec.order, h)));
        state.cursor = block_end;
        state.store(path)?;
    }
    if !path.exists() {
        state.store(path)?;
    }
    let extra = if resumed_at > 0 {
        format!(", resumed at {resumed_at}")
    } else {
        String::new()
    };
    finish(
        spec.order,
        spec.prune,
        state.cursor as u64,
        state.hits.iter().map(BitVector::to_u64).collect(),
        start.elapsed().as_secs_f64(),
        &extra,
    )
}
