//! Trial campaigns: per-trial visit statistics and their aggregates.
//!
//! Every rule vector is tracked by its dense code, so campaigns are limited
//! to networks with at most two nodes (256 rule vectors).

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::chooser::RngChooser;
use crate::engine::{Engine, EngineConfig, PermutationStrategy};
use crate::error::{DbnError, Result};
use crate::vbn::{rule_count, rule_vector_count, state_count, RuleVector};

/// Largest node count a campaign can track.
pub const MAX_CAMPAIGN_NODES: usize = 2;

/// Everything that determines a campaign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationConfig {
    pub nodes: usize,
    pub trials: u64,
    pub steps: u64,
    pub seq_len: usize,
    pub strategy: PermutationStrategy,
    pub master_seed: u64,
    /// Steps excluded by [`never_visited_after`] and the reports built on it.
    pub burn_in: u64,
    pub initial_rule_restriction: Option<Vec<RuleVector>>,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl SimulationConfig {
    pub fn new(strategy: PermutationStrategy, trials: u64, steps: u64, master_seed: u64) -> Self {
        SimulationConfig {
            nodes: 2,
            trials,
            steps,
            seq_len: state_count(2) + 1,
            strategy,
            master_seed,
            burn_in: default_burn_in(strategy),
            initial_rule_restriction: None,
            threads: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes == 0 || self.nodes > MAX_CAMPAIGN_NODES {
            return Err(DbnError::Unsupported(format!(
                "campaigns track at most {MAX_CAMPAIGN_NODES} nodes, got {}",
                self.nodes
            )));
        }
        if self.trials == 0 || self.steps == 0 {
            return Err(DbnError::Config("trials and steps must be at least 1".into()));
        }
        if self.steps > u32::MAX as u64 {
            return Err(DbnError::Config(format!("{} steps is too many", self.steps)));
        }
        if self.burn_in >= self.steps {
            return Err(DbnError::Config(format!(
                "burn-in {} must be below the step count {}",
                self.burn_in, self.steps
            )));
        }
        if self.threads == Some(0) {
            return Err(DbnError::Config("thread count must be at least 1".into()));
        }
        self.engine_config().validate()
    }

    pub fn engine_config(&self) -> EngineConfig {
        EngineConfig {
            nodes: self.nodes,
            seq_len: self.seq_len,
            strategy: self.strategy,
            initial_rules: self.initial_rule_restriction.clone(),
        }
    }

    /// Number of possible rule vectors.
    pub fn space(&self) -> usize {
        space(self.nodes)
    }
}

fn space(nodes: usize) -> usize {
    rule_vector_count(nodes).expect("campaign node count is small") as usize
}

pub fn default_burn_in(strategy: PermutationStrategy) -> u64 {
    match strategy {
        PermutationStrategy::Type2 => 6,
        _ => 5,
    }
}

/// Child RNG for one trial: the master seed picks the key, the trial index
/// picks the stream.
pub fn trial_rng(master_seed: u64, trial_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}

/// Visit statistics of one trial, indexed by rule-vector code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub nodes: usize,
    pub steps: u64,
    /// Number of steps at which each rule vector was `T_k`.
    pub visits: Vec<u32>,
    /// First step of each visit, 0 if never visited.
    pub first_visit: Vec<u32>,
    /// Last step of each visit, 0 if never visited.
    pub last_visit: Vec<u32>,
}

impl TrialRecord {
    fn empty(trial_index: u64, nodes: usize, steps: u64) -> Self {
        let n = space(nodes);
        TrialRecord {
            trial_index,
            nodes,
            steps,
            visits: vec![0; n],
            first_visit: vec![0; n],
            last_visit: vec![0; n],
        }
    }

    fn record(&mut self, code: usize, step: u32) {
        if self.visits[code] == 0 {
            self.first_visit[code] = step;
        }
        self.visits[code] += 1;
        self.last_visit[code] = step;
    }

    /// Number of distinct rule vectors visited.
    pub fn distinct(&self) -> usize {
        self.visits.iter().filter(|&&v| v > 0).count()
    }

    /// Fraction of all rule vectors visited.
    pub fn coverage(&self) -> f64 {
        self.distinct() as f64 / self.visits.len() as f64
    }

    pub fn coverage_percent(&self) -> f64 {
        100.0 * self.coverage()
    }

    pub fn is_fully_covered(&self) -> bool {
        self.distinct() == self.visits.len()
    }

    /// Distinct rule vectors seen by the end of each step.
    pub fn first_visit_curve(&self) -> Vec<u32> {
        let mut curve = vec![0u32; self.steps as usize];
        for &f in self.first_visit.iter().filter(|&&f| f > 0) {
            curve[f as usize - 1] += 1;
        }
        let mut acc = 0;
        for c in &mut curve {
            acc += *c;
            *c = acc;
        }
        curve
    }

    /// Step at which the last new rule vector appeared, if all were seen.
    pub fn steps_to_full_coverage(&self) -> Option<u32> {
        if self.is_fully_covered() {
            self.first_visit.iter().copied().max()
        } else {
            None
        }
    }

    /// Codes whose visit count reaches `threshold`.
    pub fn hot(&self, threshold: f64) -> Vec<usize> {
        (0..self.visits.len())
            .filter(|&c| self.visits[c] as f64 >= threshold)
            .collect()
    }
}

/// Runs one trial: step 1 records `T_1`, each later step records `T_k`.
pub fn run_trial(cfg: &SimulationConfig, trial_index: u64) -> Result<TrialRecord> {
    cfg.validate()?;
    run_trial_unchecked(cfg, trial_index)
}

fn run_trial_unchecked(cfg: &SimulationConfig, trial_index: u64) -> Result<TrialRecord> {
    let mut chooser = RngChooser(trial_rng(cfg.master_seed, trial_index));
    let mut engine = Engine::init(cfg.engine_config(), &mut chooser)?;
    let mut record = TrialRecord::empty(trial_index, cfg.nodes, cfg.steps);
    let code = |e: &Engine| e.matrix().rule_vector_code().expect("small network") as usize;
    record.record(code(&engine), 1);
    for k in 2..=cfg.steps {
        engine.advance(&mut chooser)?;
        record.record(code(&engine), k as u32);
    }
    Ok(record)
}

/// Class of a type-4 trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrialClass {
    /// A few rule vectors take most of the visits.
    Concentrated,
    /// Visits are spread out.
    Spread,
}

/// Visits a rule vector needs to count as hot: 1000 per 10000 steps.
pub fn hot_threshold(steps: u64) -> f64 {
    1000.0 * steps as f64 / 10_000.0
}

/// Visits below which a rule vector counts as cold: 30 per 10000 steps.
pub fn cold_threshold(steps: u64) -> f64 {
    30.0 * steps as f64 / 10_000.0
}

pub fn classify_trial(record: &TrialRecord) -> TrialClass {
    let h = hot_threshold(record.steps);
    if record.visits.iter().any(|&v| v as f64 >= h) {
        TrialClass::Concentrated
    } else {
        TrialClass::Spread
    }
}

/// Expected draws to collect `m` of `n` equally likely coupons.
pub fn theta(n: u64, m: u64) -> Result<f64> {
    if m == 0 || m > n {
        return Err(DbnError::ThetaDomain { n, m });
    }
    Ok((1..=m).map(|i| n as f64 / (n - i + 1) as f64).sum())
}

/// Baseline coverage after `step` steps: the largest `m` with
/// `θ(pool, m) ≤ step`, as a percentage of `space`.
pub fn theta_baseline_percent(pool: u64, space: u64, step: u64) -> f64 {
    let mut acc = 0.0;
    let mut m = 0;
    while m < pool {
        let next = acc + pool as f64 / (pool - m) as f64;
        if next > step as f64 {
            break;
        }
        acc = next;
        m += 1;
    }
    100.0 * m as f64 / space as f64
}

/// A coverage-histogram bin in whole percent: `[lo, hi)`, or `[lo, hi]`
/// when `closed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bin {
    pub lo: u32,
    pub hi: u32,
    pub closed: bool,
}

impl Bin {
    const fn open(lo: u32, hi: u32) -> Self {
        Bin { lo, hi, closed: false }
    }
    const fn closed(lo: u32, hi: u32) -> Self {
        Bin { lo, hi, closed: true }
    }

    /// Exact test of `100 · distinct / space` against the bin.
    pub fn contains(&self, distinct: usize, space: usize) -> bool {
        let p = 100 * distinct as u64;
        let s = space as u64;
        p >= self.lo as u64 * s
            && (p < self.hi as u64 * s || (self.closed && p <= self.hi as u64 * s))
    }
}

impl std::fmt::Display for Bin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.closed, self.lo == self.hi) {
            (true, true) => write!(f, "{}", self.lo),
            (true, false) => write!(f, "[{},{}]", self.lo, self.hi),
            _ => write!(f, "[{},{})", self.lo, self.hi),
        }
    }
}

/// Histogram layout used for a strategy's coverage table.
pub fn coverage_bins(strategy: PermutationStrategy) -> Vec<Bin> {
    match strategy {
        PermutationStrategy::Type1 => {
            let mut b = vec![Bin::open(0, 65)];
            b.extend((65..70).map(|p| Bin::open(p, p + 1)));
            b.push(Bin::closed(70, 100));
            b
        }
        PermutationStrategy::Type2 => {
            let mut b = vec![Bin::open(0, 67)];
            b.extend((67..71).map(|p| Bin::open(p, p + 1)));
            b.push(Bin::closed(71, 100));
            b
        }
        _ => {
            let mut b = vec![Bin::open(0, 50)];
            b.extend((50..100).step_by(10).map(|p| Bin::open(p, p + 10)));
            b.push(Bin::closed(100, 100));
            b
        }
    }
}

/// Aggregate of a campaign. Built by an order-independent merge of trial
/// records.
#[derive(Clone, Debug, PartialEq)]
pub struct CampaignSummary {
    config: SimulationConfig,
    records: Vec<TrialRecord>,
    total_visits: Vec<u64>,
    max_last_visit: Vec<u32>,
    trials_visiting: Vec<u32>,
}

impl CampaignSummary {
    pub fn empty(config: SimulationConfig) -> Self {
        let n = config.space();
        CampaignSummary {
            config,
            records: Vec::new(),
            total_visits: vec![0; n],
            max_last_visit: vec![0; n],
            trials_visiting: vec![0; n],
        }
    }

    pub fn absorb(&mut self, record: TrialRecord) {
        for c in 0..self.total_visits.len() {
            self.total_visits[c] += record.visits[c] as u64;
            self.max_last_visit[c] = self.max_last_visit[c].max(record.last_visit[c]);
            self.trials_visiting[c] += (record.visits[c] > 0) as u32;
        }
        let at = self
            .records
            .partition_point(|r| r.trial_index < record.trial_index);
        self.records.insert(at, record);
    }

    pub fn merge(mut self, other: CampaignSummary) -> CampaignSummary {
        for r in other.records {
            self.absorb(r);
        }
        self
    }

    pub fn config(&self) -> &SimulationConfig {
        &self.config
    }

    /// Trial records in trial-index order.
    pub fn records(&self) -> &[TrialRecord] {
        &self.records
    }

    /// Visits per rule-vector code, summed over trials.
    pub fn total_visits(&self) -> &[u64] {
        &self.total_visits
    }

    /// Last step each rule vector was visited, maximized over trials.
    pub fn max_last_visit(&self) -> &[u32] {
        &self.max_last_visit
    }

    /// Number of trials in which each rule vector was visited.
    pub fn trials_visiting(&self) -> &[u32] {
        &self.trials_visiting
    }

    pub fn histogram(&self, bins: &[Bin]) -> Vec<usize> {
        let n = self.config.space();
        bins.iter()
            .map(|b| self.records.iter().filter(|r| b.contains(r.distinct(), n)).count())
            .collect()
    }

    /// Minimum, maximum and mean coverage in percent.
    pub fn coverage_stats(&self) -> (f64, f64, f64) {
        let cov: Vec<f64> = self.records.iter().map(TrialRecord::coverage_percent).collect();
        let min = cov.iter().copied().fold(f64::INFINITY, f64::min);
        let max = cov.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (min, max, cov.iter().sum::<f64>() / cov.len().max(1) as f64)
    }

    pub fn classes(&self) -> Vec<TrialClass> {
        self.records.iter().map(classify_trial).collect()
    }

    /// Visits per code summed over the trials of one class.
    pub fn class_visits(&self, class: TrialClass) -> Vec<u64> {
        let mut out = vec![0u64; self.config.space()];
        for r in self.records.iter().filter(|r| classify_trial(r) == class) {
            for (o, &v) in out.iter_mut().zip(&r.visits) {
                *o += v as u64;
            }
        }
        out
    }

    /// For each code, the number of trials of `class` in which it is hot.
    pub fn hot_trial_counts(&self, class: TrialClass) -> Vec<u32> {
        let mut out = vec![0u32; self.config.space()];
        let h = hot_threshold(self.config.steps);
        for r in self.records.iter().filter(|r| classify_trial(r) == class) {
            for c in r.hot(h) {
                out[c] += 1;
            }
        }
        out
    }

    /// Mean over fully covered trials of the step completing coverage.
    pub fn mean_steps_to_full_coverage(&self) -> Option<f64> {
        let done: Vec<u32> = self
            .records
            .iter()
            .filter_map(TrialRecord::steps_to_full_coverage)
            .collect();
        (!done.is_empty()).then(|| done.iter().map(|&s| s as f64).sum::<f64>() / done.len() as f64)
    }
}

/// Runs every trial, in parallel, and merges the records.
pub fn run_campaign(cfg: &SimulationConfig) -> Result<CampaignSummary> {
    cfg.validate()?;
    let work = || -> Result<Vec<TrialRecord>> {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| run_trial_unchecked(cfg, i))
            .collect()
    };
    let records = match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| DbnError::Config(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let mut summary = CampaignSummary::empty(cfg.clone());
    for r in records {
        summary.absorb(r);
    }
    Ok(summary)
}

/// Trace lines of one trial, from `k = 1` to `k = steps`; the draws are the
/// ones [`run_trial`] makes, so the trace explains that trial's record.
pub fn trace_trial(cfg: &SimulationConfig, trial_index: u64) -> Result<Vec<String>> {
    cfg.validate()?;
    let mut chooser = RngChooser(trial_rng(cfg.master_seed, trial_index));
    let mut engine = Engine::init(cfg.engine_config(), &mut chooser)?;
    let mut lines = vec![engine.trace_line()];
    for _ in 2..=cfg.steps {
        engine.advance(&mut chooser)?;
        lines.push(engine.trace_line());
    }
    Ok(lines)
}

/// Parses a rule-vector list: one vector per line, rule numbers separated by
/// commas or spaces, optional parentheses, `#` starts a comment.
pub fn parse_rule_vectors(text: &str) -> std::result::Result<Vec<RuleVector>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let numbers: std::result::Result<Vec<u64>, _> = line
            .trim_start_matches('(')
            .trim_end_matches(')')
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect();
        let rv = numbers
            .map_err(|e| e.to_string())
            .and_then(|n| RuleVector::from_numbers(&n).map_err(|e| e.to_string()))
            .map_err(|e| format!("line {}: {e}", i + 1))?;
        out.push(rv);
    }
    if out.is_empty() {
        return Err("no rule vectors listed".into());
    }
    Ok(out)
}

/// Inverse of [`parse_rule_vectors`].
pub fn format_rule_vectors(set: &[RuleVector]) -> String {
    set.iter().map(|rv| format!("{rv}\n")).collect()
}

/// Rule vectors never visited after step `b` of any trial.
pub fn never_visited_after(summary: &CampaignSummary, b: u64) -> Vec<RuleVector> {
    let nodes = summary.config.nodes;
    summary
        .max_last_visit
        .iter()
        .enumerate()
        .filter(|(_, &last)| last as u64 <= b)
        .map(|(c, _)| RuleVector::from_code(nodes, c as u64).expect("code in range"))
        .collect()
}

/// What [`block_pattern_check`] found in a subset of the 16×16 grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPatternReport {
    /// Number of the sixteen 4×4 blocks with at least one member.
    pub nonempty_blocks: usize,
    /// The in-block pattern, when every nonempty block has the same one.
    pub shared_pattern: Option<[[bool; 4]; 4]>,
    /// Cells in the shared pattern.
    pub pattern_cells: usize,
    /// Which blocks are nonempty, by block row and column.
    pub block_layout: [[bool; 4]; 4],
    /// The block layout equals the shared pattern turned upside down.
    pub layout_is_flipped_pattern: bool,
    /// Nine nonempty blocks with one nine-cell pattern, laid out as that
    /// pattern turned upside down.
    pub holds: bool,
}

/// Splits the grid (rows `f_1`, columns `f_2`) into sixteen 4×4 blocks and
/// compares the in-block patterns with the block layout.
pub fn block_pattern_check(set: &[RuleVector]) -> Result<BlockPatternReport> {
    let mut grid = [[false; 16]; 16];
    for rv in set {
        if rv.nodes() != 2 {
            return Err(DbnError::RuleVectorWidth {
                expected: 2,
                got: rv.nodes(),
            });
        }
        let n = rv.numbers();
        grid[n[0] as usize - 1][n[1] as usize - 1] = true;
    }
    let block = |br: usize, bc: usize| {
        let mut p = [[false; 4]; 4];
        for (i, row) in p.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = grid[4 * br + i][4 * bc + j];
            }
        }
        p
    };
    let mut layout = [[false; 4]; 4];
    let mut patterns = Vec::new();
    for (br, row) in layout.iter_mut().enumerate() {
        for (bc, cell) in row.iter_mut().enumerate() {
            let p = block(br, bc);
            if p.iter().flatten().any(|&x| x) {
                *cell = true;
                patterns.push(p);
            }
        }
    }
    let shared = match patterns.first() {
        Some(first) if patterns.iter().all(|p| p == first) => Some(*first),
        _ => None,
    };
    let cells = shared.map_or(0, |p| p.iter().flatten().filter(|&&x| x).count());
    let flipped = shared.is_some_and(|p| {
        let mut f = p;
        f.reverse();
        f == layout
    });
    Ok(BlockPatternReport {
        nonempty_blocks: patterns.len(),
        shared_pattern: shared,
        pattern_cells: cells,
        block_layout: layout,
        layout_is_flipped_pattern: flipped,
        holds: patterns.len() == 9 && cells == 9 && flipped,
    })
}

/// Mean distinct-visit curve over the trials accepted by `qualifies`, in
/// percent of all rule vectors, one entry per step.
pub fn cumulative_curve(
    summary: &CampaignSummary,
    qualifies: impl Fn(&TrialRecord) -> bool,
) -> Result<Vec<(u64, f64)>> {
    let steps = summary.config.steps as usize;
    let mut new_at = vec![0u64; steps];
    let mut count = 0u64;
    for r in summary.records.iter().filter(|r| qualifies(r)) {
        count += 1;
        for &f in r.first_visit.iter().filter(|&&f| f > 0) {
            new_at[f as usize - 1] += 1;
        }
    }
    if count == 0 {
        return Err(DbnError::EmptySelection);
    }
    let scale = 100.0 / (count as f64 * summary.config.space() as f64);
    let mut acc = 0u64;
    Ok(new_at
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            acc += n;
            (i as u64 + 1, acc as f64 * scale)
        })
        .collect())
}

/// First step at which a curve reaches `percent`.
pub fn curve_crossing(curve: &[(u64, f64)], percent: f64) -> Option<u64> {
    curve.iter().find(|(_, p)| *p >= percent - 1e-9).map(|(s, _)| *s)
}

/// Trials averaged in the cumulative curve: coverage of at least 68% for
/// types 1 and 2, every trial for type 3, full coverage for type 4.
pub fn default_qualifier(strategy: PermutationStrategy) -> impl Fn(&TrialRecord) -> bool {
    move |r: &TrialRecord| match strategy {
        PermutationStrategy::Type1 | PermutationStrategy::Type2 => {
            100 * r.distinct() >= 68 * r.visits.len()
        }
        PermutationStrategy::Type3 | PermutationStrategy::Type3Complement => true,
        PermutationStrategy::Type4 => r.is_fully_covered(),
    }
}

/// Rule-vector codes ordered by descending count, ties by code.
pub fn rank_by(counts: &[u64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then(a.cmp(&b)));
    order
}

fn grid_dims(nodes: usize) -> (usize, usize) {
    let r = rule_count(nodes) as usize;
    (space(nodes) / r, r)
}

fn write_grid<T: ToString>(path: &Path, nodes: usize, values: &[T]) -> csv::Result<()> {
    let (rows, cols) = grid_dims(nodes);
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["f1\\f2".to_string()];
    header.extend((1..=cols).map(|c| c.to_string()));
    w.write_record(&header)?;
    for r in 0..rows {
        let mut rec = vec![(r + 1).to_string()];
        rec.extend(values[r * cols..(r + 1) * cols].iter().map(T::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `coverage.csv`, `visits.csv`, `max_step.csv`, `cumulative.csv`
/// and `summary.txt` into `dir`.
pub fn write_outputs(summary: &CampaignSummary, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let cfg = &summary.config;
    let to_io = |e: csv::Error| io::Error::other(e);

    let mut w = csv::Writer::from_path(dir.join("coverage.csv")).map_err(to_io)?;
    w.write_record(["trial_index", "distinct_rule_vectors", "coverage_percent"])
        .map_err(to_io)?;
    for r in &summary.records {
        w.write_record([
            r.trial_index.to_string(),
            r.distinct().to_string(),
            format!("{:.4}", r.coverage_percent()),
        ])
        .map_err(to_io)?;
    }
    w.flush()?;

    write_grid(&dir.join("visits.csv"), cfg.nodes, &summary.total_visits).map_err(to_io)?;
    write_grid(&dir.join("max_step.csv"), cfg.nodes, &summary.max_last_visit).map_err(to_io)?;

    let pool = cumulative_pool(summary);
    let (curve, qualifying) = cumulative_with_fallback(summary);
    let mut w = csv::Writer::from_path(dir.join("cumulative.csv")).map_err(to_io)?;
    w.write_record(["step", "mean_coverage_percent", "theta_baseline_percent"])
        .map_err(to_io)?;
    let space = cfg.space() as u64;
    for (step, pct) in &curve {
        w.write_record([
            step.to_string(),
            format!("{pct:.4}"),
            format!("{:.4}", theta_baseline_percent(pool, space, *step)),
        ])
        .map_err(to_io)?;
    }
    w.flush()?;

    let mut f = fs::File::create(dir.join("summary.txt"))?;
    f.write_all(summary_text(summary, &curve, qualifying, pool).as_bytes())?;
    Ok(())
}

/// Coupon pool for the baseline: every rule vector for types 3 and 4, the
/// rule vectors seen after burn-in for types 1 and 2.
pub fn cumulative_pool(summary: &CampaignSummary) -> u64 {
    let cfg = &summary.config;
    match cfg.strategy {
        PermutationStrategy::Type1 | PermutationStrategy::Type2 => {
            let n = (cfg.space() - never_visited_after(summary, cfg.burn_in).len()) as u64;
            n.max(1)
        }
        _ => cfg.space() as u64,
    }
}

fn cumulative_with_fallback(summary: &CampaignSummary) -> (Vec<(u64, f64)>, usize) {
    let q = default_qualifier(summary.config.strategy);
    let n = summary.records.iter().filter(|r| q(r)).count();
    match cumulative_curve(summary, q) {
        Ok(c) => (c, n),
        Err(_) => (
            cumulative_curve(summary, |_| true).expect("campaign has trials"),
            summary.records.len(),
        ),
    }
}

fn summary_text(
    summary: &CampaignSummary,
    curve: &[(u64, f64)],
    qualifying: usize,
    pool: u64,
) -> String {
    let cfg = &summary.config;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "strategy {} nodes {} trials {} steps {} seq_len {} seed {} burn_in {}",
        cfg.strategy.name(),
        cfg.nodes,
        cfg.trials,
        cfg.steps,
        cfg.seq_len,
        cfg.master_seed,
        cfg.burn_in
    );
    if let Some(r) = &cfg.initial_rule_restriction {
        let _ = writeln!(s, "initial rule vectors restricted to {} entries", r.len());
    }
    let (min, max, mean) = summary.coverage_stats();
    let _ = writeln!(s, "coverage percent min {min:.2} max {max:.2} mean {mean:.2}");

    let bins = coverage_bins(cfg.strategy);
    let hist = summary.histogram(&bins);
    let _ = writeln!(s, "\ncoverage percent | trials");
    for (b, n) in bins.iter().zip(&hist) {
        let _ = writeln!(s, "{:>16} | {n}", b.to_string());
    }

    let never = never_visited_after(summary, cfg.burn_in);
    let _ = writeln!(s, "\nnever visited after step {}: {}", cfg.burn_in, never.len());
    for chunk in never.chunks(8) {
        let line: Vec<String> = chunk.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  {}", line.join(" "));
    }
    if cfg.nodes == 2 {
        if let Ok(rep) = block_pattern_check(&never) {
            let _ = writeln!(
                s,
                "block pattern: {} nonempty blocks, shared pattern cells {}, layout flipped {}, holds {}",
                rep.nonempty_blocks, rep.pattern_cells, rep.layout_is_flipped_pattern, rep.holds
            );
        }
    }
    let at_last = summary
        .max_last_visit
        .iter()
        .filter(|&&l| l as u64 == cfg.steps)
        .count();
    let _ = writeln!(s, "visited at the last step of some trial: {at_last}");

    let classes = summary.classes();
    let conc = classes.iter().filter(|&&c| c == TrialClass::Concentrated).count();
    let _ = writeln!(
        s,
        "\nclass (i) trials: {conc}  class (ii) trials: {}  (hot threshold {:.1} visits, cold {:.1})",
        classes.len() - conc,
        hot_threshold(cfg.steps),
        cold_threshold(cfg.steps)
    );
    if conc > 0 {
        let visits = summary.class_visits(TrialClass::Concentrated);
        let hot = summary.hot_trial_counts(TrialClass::Concentrated);
        let _ = writeln!(s, "class (i) top rule vectors: rule vector | visits | hot in trials");
        for c in rank_by(&visits).into_iter().take(10) {
            let rv = RuleVector::from_code(cfg.nodes, c as u64).expect("code in range");
            let _ = writeln!(s, "  {rv} | {} | {}", visits[c], hot[c]);
        }
        let ever_hot = hot.iter().filter(|&&h| h > 0).count();
        let _ = writeln!(s, "hot in at least one class (i) trial: {ever_hot}");
    }

    let _ = writeln!(
        s,
        "\ncumulative curve over {qualifying} trials, baseline pool {pool}"
    );
    if let Some((_, last)) = curve.last() {
        let _ = writeln!(s, "final mean coverage percent {last:.2}");
    }
    let pool_percent = 100.0 * pool as f64 / cfg.space() as f64;
    match curve_crossing(curve, pool_percent) {
        Some(step) => {
            let _ = writeln!(s, "mean curve reaches {pool_percent:.2}% at step {step}");
        }
        None => {
            let _ = writeln!(s, "mean curve never reaches {pool_percent:.2}%");
        }
    }
    if let Ok(th) = theta(pool, pool) {
        let _ = writeln!(s, "theta({pool},{pool}) = {th:.1}");
    }
    match summary.mean_steps_to_full_coverage() {
        Some(m) => {
            let _ = writeln!(s, "mean steps to full coverage {m:.1}");
        }
        None => {
            let _ = writeln!(s, "no trial reached full coverage");
        }
    }
    s
}
