//! Virtual Boolean networks: states, transition matrices and single-node
//! rules.
//!
//! Conventions used throughout the crate:
//!
//! - A state of a `μ`-node network is a bit vector `(x_1, …, x_μ)`. Its
//!   *code* is its 0-based lexicographic rank with `x_1` as the most
//!   significant bit; its *index* is the 1-based rank (`code + 1`).
//! - Node ids are 0-based in the API (`node 0` is `x_1`).
//! - A single-node rule is numbered `1 + Σ_s output(s)·2^code(s)`. For two
//!   nodes this is the usual 16-rule table (rule 7 is XOR, rule 11 copies
//!   `x_2`, rule 13 copies `x_1`).
//! - A transition matrix has rows and columns in state-code order and
//!   exactly one 1 per row; it is stored as a successor list.

use std::fmt;
use std::io::Write;

use crate::error::{DbnError, Result};

/// Largest supported node count. Rule numbers for five nodes reach `2^32`.
pub const MAX_NODES: usize = 5;

pub(crate) fn check_nodes(nodes: usize) -> Result<()> {
    if (1..=MAX_NODES).contains(&nodes) {
        Ok(())
    } else {
        Err(DbnError::NodeCount(nodes))
    }
}

/// Number of states of a `nodes`-node network.
pub fn state_count(nodes: usize) -> usize {
    1 << nodes
}

/// Number of distinct single-node rules, `2^(2^μ)`.
pub fn rule_count(nodes: usize) -> u64 {
    1u64 << state_count(nodes)
}

/// Number of distinct rule vectors, `(2^(2^μ))^μ`, if it fits in a `u64`.
pub fn rule_vector_count(nodes: usize) -> Option<u64> {
    rule_count(nodes).checked_pow(nodes as u32)
}

/// A global state of a network.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    nodes: u8,
    code: u32,
}

impl State {
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        check_nodes(bits.len())?;
        let mut code = 0u32;
        for &b in bits {
            if b > 1 {
                return Err(DbnError::NotABit(b));
            }
            code = (code << 1) | b as u32;
        }
        Ok(State {
            nodes: bits.len() as u8,
            code,
        })
    }

    /// State with the given 1-based lexicographic index.
    pub fn from_index(nodes: usize, index: usize) -> Result<Self> {
        check_nodes(nodes)?;
        let max = state_count(nodes);
        if !(1..=max).contains(&index) {
            return Err(DbnError::StateIndex { index, max });
        }
        Ok(State::from_code_unchecked(nodes, index - 1))
    }

    pub(crate) fn from_code_unchecked(nodes: usize, code: usize) -> Self {
        debug_assert!(code < state_count(nodes));
        State {
            nodes: nodes as u8,
            code: code as u32,
        }
    }

    /// All states in lexicographic order.
    pub fn all(nodes: usize) -> impl Iterator<Item = State> {
        (0..state_count(nodes)).map(move |c| State::from_code_unchecked(nodes, c))
    }

    pub fn nodes(&self) -> usize {
        self.nodes as usize
    }

    /// 1-based lexicographic rank.
    pub fn index(&self) -> usize {
        self.code as usize + 1
    }

    /// 0-based lexicographic rank.
    pub fn code(&self) -> usize {
        self.code as usize
    }

    /// Internal state of `node` (0-based).
    pub fn bit(&self, node: usize) -> u8 {
        debug_assert!(node < self.nodes());
        ((self.code >> (self.nodes() - 1 - node)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.nodes()).map(|i| self.bit(i)).collect()
    }

    /// The state with `node` negated.
    pub fn flip(&self, node: usize) -> State {
        State {
            nodes: self.nodes,
            code: self.code ^ (1 << (self.nodes() - 1 - node)),
        }
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.nodes() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", self.bit(i))?;
        }
        write!(f, ")")
    }
}

/// A single-node transition rule: one output bit per global state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    nodes: u8,
    table: u64,
}

impl Rule {
    pub fn new(nodes: usize, number: u64) -> Result<Self> {
        check_nodes(nodes)?;
        let max = rule_count(nodes);
        if !(1..=max).contains(&number) {
            return Err(DbnError::RuleNumber { number, max });
        }
        Ok(Rule {
            nodes: nodes as u8,
            table: number - 1,
        })
    }

    /// Rule from its output table, `outputs[code(s)]`.
    pub fn from_outputs(outputs: &[u8]) -> Result<Self> {
        let nodes = outputs.len().trailing_zeros() as usize;
        if !outputs.len().is_power_of_two() {
            return Err(DbnError::MatrixShape(format!(
                "{} outputs is not a power of two",
                outputs.len()
            )));
        }
        check_nodes(nodes)?;
        let mut table = 0u64;
        for (code, &b) in outputs.iter().enumerate() {
            if b > 1 {
                return Err(DbnError::NotABit(b));
            }
            table |= (b as u64) << code;
        }
        Ok(Rule {
            nodes: nodes as u8,
            table,
        })
    }

    pub(crate) fn from_table_unchecked(nodes: usize, table: u64) -> Self {
        Rule {
            nodes: nodes as u8,
            table,
        }
    }

    /// All rules for `nodes` nodes, by ascending number.
    pub fn all(nodes: usize) -> impl Iterator<Item = Rule> {
        (0..rule_count(nodes)).map(move |t| Rule::from_table_unchecked(nodes, t))
    }

    pub fn nodes(&self) -> usize {
        self.nodes as usize
    }

    pub fn number(&self) -> u64 {
        self.table + 1
    }

    pub fn output(&self, state: State) -> u8 {
        debug_assert_eq!(state.nodes(), self.nodes());
        ((self.table >> state.code()) & 1) as u8
    }

    pub fn outputs(&self) -> Vec<u8> {
        State::all(self.nodes()).map(|s| self.output(s)).collect()
    }

    /// Nodes whose negation can change the output (0-based, ascending).
    pub fn virtual_incoming_nodes(&self) -> Vec<usize> {
        (0..self.nodes())
            .filter(|&j| State::all(self.nodes()).any(|s| self.output(s) != self.output(s.flip(j))))
            .collect()
    }

    /// The mask `v` with `output(x) = x·v mod 2` for every state, if any.
    pub fn linear_mask(&self) -> Option<Vec<u8>> {
        let nodes = self.nodes();
        (0..state_count(nodes))
            .map(|m| State::from_code_unchecked(nodes, m))
            .find(|mask| {
                State::all(nodes).all(|s| {
                    let dot = (s.code() & mask.code()).count_ones() as u8 & 1;
                    dot == self.output(s)
                })
            })
            .map(|mask| mask.bits())
    }

    pub fn is_linear(&self) -> bool {
        self.linear_mask().is_some()
    }

    /// Pointwise complement of the output table.
    pub fn negate(&self) -> Rule {
        let mask = if state_count(self.nodes()) == 64 {
            u64::MAX
        } else {
            (1u64 << state_count(self.nodes())) - 1
        };
        Rule {
            nodes: self.nodes,
            table: !self.table & mask,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// Per-node rules of a VBN, `(F_1, …, F_μ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleVector {
    rules: Vec<Rule>,
}

impl RuleVector {
    pub fn new(rules: Vec<Rule>) -> Result<Self> {
        let nodes = rules.len();
        check_nodes(nodes)?;
        if let Some(r) = rules.iter().find(|r| r.nodes() != nodes) {
            return Err(DbnError::RuleVectorWidth {
                expected: nodes,
                got: r.nodes(),
            });
        }
        Ok(RuleVector { rules })
    }

    pub fn from_numbers(numbers: &[u64]) -> Result<Self> {
        let nodes = numbers.len();
        check_nodes(nodes)?;
        let rules = numbers
            .iter()
            .map(|&n| Rule::new(nodes, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(RuleVector { rules })
    }

    /// Inverse of [`RuleVector::code`].
    pub fn from_code(nodes: usize, code: u64) -> Result<Self> {
        check_nodes(nodes)?;
        let total = rule_vector_count(nodes)
            .ok_or_else(|| DbnError::Unsupported(format!("rule vector codes for {nodes} nodes")))?;
        if code >= total {
            return Err(DbnError::Config(format!("rule vector code {code} >= {total}")));
        }
        let base = rule_count(nodes);
        let mut rest = code;
        let mut rules = vec![Rule::from_table_unchecked(nodes, 0); nodes];
        for slot in rules.iter_mut().rev() {
            *slot = Rule::from_table_unchecked(nodes, rest % base);
            rest /= base;
        }
        Ok(RuleVector { rules })
    }

    pub fn nodes(&self) -> usize {
        self.rules.len()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn numbers(&self) -> Vec<u64> {
        self.rules.iter().map(Rule::number).collect()
    }

    /// Dense index in `0..(2^(2^μ))^μ` with `F_1` most significant. For two
    /// nodes this is `16·(f_1 − 1) + (f_2 − 1)`.
    pub fn code(&self) -> Option<u64> {
        rule_vector_count(self.nodes())?;
        let base = rule_count(self.nodes());
        Some(self.rules.iter().fold(0u64, |acc, r| acc * base + r.table))
    }

    pub fn is_linear(&self) -> bool {
        self.rules.iter().all(Rule::is_linear)
    }
}

impl fmt::Display for RuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, r) in self.rules.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Square 0/1 matrix over the states with exactly one 1 per row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanMatrix {
    nodes: u8,
    succ: Vec<u32>,
}

impl BooleanMatrix {
    /// Matrix whose row `i` has its 1 in column `successors[i]` (state codes).
    pub fn from_successors(nodes: usize, successors: Vec<usize>) -> Result<Self> {
        check_nodes(nodes)?;
        let n = state_count(nodes);
        if successors.len() != n {
            return Err(DbnError::MatrixShape(format!(
                "{} rows for {n} states",
                successors.len()
            )));
        }
        if let Some(&bad) = successors.iter().find(|&&s| s >= n) {
            return Err(DbnError::MatrixShape(format!("column {bad} out of range")));
        }
        Ok(BooleanMatrix {
            nodes: nodes as u8,
            succ: successors.into_iter().map(|s| s as u32).collect(),
        })
    }

    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        if !n.is_power_of_two() || n < 2 {
            return Err(DbnError::MatrixShape(format!("{n} rows")));
        }
        let nodes = n.trailing_zeros() as usize;
        check_nodes(nodes)?;
        let mut succ = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(DbnError::MatrixShape(format!("row {i} has {} columns", row.len())));
            }
            if let Some(&b) = row.iter().find(|&&b| b > 1) {
                return Err(DbnError::NotABit(b));
            }
            let ones = row.iter().filter(|&&b| b == 1).count();
            if ones != 1 {
                return Err(DbnError::NotBoolean { row: i, ones });
            }
            succ.push(row.iter().position(|&b| b == 1).unwrap());
        }
        BooleanMatrix::from_successors(nodes, succ)
    }

    /// Parses rows written as bit strings separated by `/`, e.g.
    /// `"0100/0100/0001/1000"`.
    pub fn parse_rows(text: &str) -> Result<Self> {
        let rows = text
            .split('/')
            .map(|row| {
                row.trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0),
                        '1' => Ok(1),
                        other => Err(DbnError::MatrixShape(format!("unexpected {other:?}"))),
                    })
                    .collect::<Result<Vec<u8>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        BooleanMatrix::from_dense(&rows)
    }

    pub fn identity(nodes: usize) -> Result<Self> {
        check_nodes(nodes)?;
        BooleanMatrix::from_successors(nodes, (0..state_count(nodes)).collect())
    }

    /// Matrix of the VBN whose node `i` follows `rules[i]`.
    pub fn from_rule_vector(rv: &RuleVector) -> Self {
        let nodes = rv.nodes();
        let succ = State::all(nodes)
            .map(|s| {
                rv.rules()
                    .iter()
                    .fold(0u32, |acc, r| (acc << 1) | r.output(s) as u32)
            })
            .collect();
        BooleanMatrix {
            nodes: nodes as u8,
            succ,
        }
    }

    /// Per-node rules read off the matrix: node `i` outputs bit `x_i` of
    /// the successor state.
    pub fn to_rule_vector(&self) -> RuleVector {
        let nodes = self.nodes();
        let rules = (0..nodes)
            .map(|i| {
                let shift = nodes - 1 - i;
                let table = self
                    .succ
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (code, &y)| acc | (((y >> shift) & 1) as u64) << code);
                Rule::from_table_unchecked(nodes, table)
            })
            .collect();
        RuleVector { rules }
    }

    /// Dense rule-vector code without building the vector; see
    /// [`RuleVector::code`].
    pub fn rule_vector_code(&self) -> Option<u64> {
        self.to_rule_vector().code()
    }

    pub fn nodes(&self) -> usize {
        self.nodes as usize
    }

    pub fn size(&self) -> usize {
        self.succ.len()
    }

    pub fn successor(&self, s: State) -> State {
        State::from_code_unchecked(self.nodes(), self.succ[s.code()] as usize)
    }

    pub fn successor_code(&self, code: usize) -> usize {
        self.succ[code] as usize
    }

    pub fn successors(&self) -> impl Iterator<Item = usize> + '_ {
        self.succ.iter().map(|&s| s as usize)
    }

    pub fn entry(&self, row: usize, col: usize) -> u8 {
        (self.succ[row] as usize == col) as u8
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.size())
            .map(|r| (0..self.size()).map(|c| self.entry(r, c)).collect())
            .collect()
    }

    pub fn has_fixed_point(&self) -> bool {
        self.succ.iter().enumerate().any(|(i, &s)| i == s as usize)
    }
}

impl fmt::Display for BooleanMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.size() {
            if r > 0 {
                write!(f, "/")?;
            }
            for c in 0..self.size() {
                write!(f, "{}", self.entry(r, c))?;
            }
        }
        Ok(())
    }
}

/// Cycles of a transition matrix and the basin each state drains into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AttractorDecomposition {
    /// Each cycle starts at its smallest state and follows the matrix.
    pub cycles: Vec<Vec<State>>,
    /// `basin[code(s)]` is the index into `cycles` that `s` reaches.
    pub basin: Vec<usize>,
}

impl AttractorDecomposition {
    pub fn basin_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cycles.len()];
        for &b in &self.basin {
            sizes[b] += 1;
        }
        sizes
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Vec::len).collect()
    }
}

/// Exhaustive attractor search over the functional graph of `t`.
pub fn attractors(t: &BooleanMatrix) -> AttractorDecomposition {
    const UNSEEN: usize = usize::MAX;
    const ON_PATH: usize = usize::MAX - 1;
    let n = t.size();
    let mut basin = vec![UNSEEN; n];
    let mut cycles: Vec<Vec<State>> = Vec::new();
    let mut path = Vec::new();
    for start in 0..n {
        if basin[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut s = start;
        while basin[s] == UNSEEN {
            basin[s] = ON_PATH;
            path.push(s);
            s = t.successor_code(s);
        }
        let id = if basin[s] == ON_PATH {
            let from = path.iter().position(|&p| p == s).unwrap();
            let mut cycle: Vec<usize> = path[from..].to_vec();
            let min_at = cycle.iter().enumerate().min_by_key(|(_, &c)| c).unwrap().0;
            cycle.rotate_left(min_at);
            cycles.push(
                cycle
                    .into_iter()
                    .map(|c| State::from_code_unchecked(t.nodes(), c))
                    .collect(),
            );
            cycles.len() - 1
        } else {
            basin[s]
        };
        for &p in &path {
            basin[p] = id;
        }
    }
    AttractorDecomposition { cycles, basin }
}

/// A node's rule in an ordinary Boolean network: a table over its incoming
/// nodes only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRule {
    /// Incoming nodes `W(i)`, 0-based and strictly ascending.
    pub incoming: Vec<usize>,
    /// Outputs over `Hom(W(i), 2)` in lexicographic order of the inputs,
    /// the first incoming node being most significant.
    pub table: Vec<u8>,
}

/// A finite Boolean network with explicit incoming-node sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BnSpec {
    pub nodes: usize,
    pub locals: Vec<LocalRule>,
}

/// Extends each local rule to all nodes, leaving every node outside `W(i)`
/// virtually disconnected.
pub fn embed_bn(bn: &BnSpec) -> Result<RuleVector> {
    check_nodes(bn.nodes)?;
    if bn.locals.len() != bn.nodes {
        return Err(DbnError::RuleVectorWidth {
            expected: bn.nodes,
            got: bn.locals.len(),
        });
    }
    let mut rules = Vec::with_capacity(bn.nodes);
    for (node, local) in bn.locals.iter().enumerate() {
        if let Some(&w) = local.incoming.iter().find(|&&w| w >= bn.nodes) {
            return Err(DbnError::IncomingNode {
                node: w,
                nodes: bn.nodes,
            });
        }
        if local.incoming.windows(2).any(|w| w[0] >= w[1]) {
            return Err(DbnError::Config(format!(
                "incoming nodes of node {node} must be strictly ascending"
            )));
        }
        let expected = 1usize << local.incoming.len();
        if local.table.len() != expected {
            return Err(DbnError::LocalTable {
                node,
                expected,
                got: local.table.len(),
            });
        }
        if let Some(&b) = local.table.iter().find(|&&b| b > 1) {
            return Err(DbnError::NotABit(b));
        }
        let outputs: Vec<u8> = State::all(bn.nodes)
            .map(|s| {
                let at = local
                    .incoming
                    .iter()
                    .fold(0usize, |acc, &w| (acc << 1) | s.bit(w) as usize);
                local.table[at]
            })
            .collect();
        rules.push(Rule::from_outputs(&outputs)?);
    }
    RuleVector::new(rules)
}

/// Writes the full single-node rule table as CSV: one row per input state,
/// one column per rule number, and a final `n` row with the number of
/// virtual incoming nodes of each rule.
pub fn write_rule_table<W: Write>(nodes: usize, out: W) -> Result<(), RuleTableError> {
    check_nodes(nodes)?;
    if nodes > 3 {
        return Err(DbnError::Unsupported(format!(
            "a rule table for {nodes} nodes has {} columns",
            rule_count(nodes)
        ))
        .into());
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["input".to_string()];
    header.extend(Rule::all(nodes).map(|r| r.number().to_string()));
    w.write_record(&header)?;
    for s in State::all(nodes) {
        let mut row = vec![s.to_string()];
        row.extend(Rule::all(nodes).map(|r| r.output(s).to_string()));
        w.write_record(&row)?;
    }
    let mut n_row = vec!["n".to_string()];
    n_row.extend(Rule::all(nodes).map(|r| r.virtual_incoming_nodes().len().to_string()));
    w.write_record(&n_row)?;
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum RuleTableError {
    #[error(transparent)]
    Domain(#[from] DbnError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
