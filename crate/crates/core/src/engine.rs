//! The time-step loop, state permutations and conjugation.
//!
//! One call to [`Engine::advance`] turns the current trajectory into the
//! next transition matrix:
//!
//! 1. the label sequence `α_k = Ξ_k(S_k)` gives an output digraph;
//! 2. the digraph is split, completed and relabeled with `Ξ_k` into `T`;
//! 3. `k` is incremented and `Ξ_k` is rebuilt from the frequency table of
//!    `S_{k−2}` against `α_{k−1}`;
//! 4. `T_k` is `T`, or `Q_k⁻¹ T Q_k` for a permutation drawn per strategy;
//! 5. `S_k` is the `T_k`-trajectory from the anchor state, `α_k = Ξ_k(S_k)`.
//!
//! Random decisions are drawn in exactly that order: branch splits, sentinel
//! targets, relabeling, labeling ties, permutation.

use std::fmt;

use crate::chooser::Chooser;
use crate::error::{DbnError, Result};
use crate::expansion::{
    complete_to_pseudo, relabel_to_vbn, split_branches, FunctionalDigraph, PseudoTransitionDiagram,
};
use crate::labeling::{update_labeling, FrequencyTable, Label, Labeling, OutputDigraph};
use crate::vbn::{check_nodes, state_count, BooleanMatrix, RuleVector, State};

/// A bijection on the states, stored on 0-based state codes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as u32).collect(),
        }
    }

    /// `images[i]` is the image of state code `i`.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(DbnError::Config(format!("{images:?} is not a permutation")));
            }
        }
        Ok(Permutation {
            image: images.into_iter().map(|i| i as u32).collect(),
        })
    }

    /// Builds a permutation of `n` states from disjoint cycles written with
    /// 1-based state indices, e.g. `&[&[1, 4, 2]]` for `(1 4 2)`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (pos, &from) in cycle.iter().enumerate() {
                let to = cycle[(pos + 1) % cycle.len()];
                if from == 0 || from > n || to == 0 || to > n {
                    return Err(DbnError::Config(format!("cycle entry outside 1..={n}")));
                }
                if std::mem::replace(&mut touched[from - 1], true) {
                    return Err(DbnError::Config(format!("{from} appears in two cycles")));
                }
                image[from - 1] = to - 1;
            }
        }
        Permutation::from_images(image)
    }

    /// Every permutation of `n` states, lexicographic by image.
    pub fn all(n: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<u32>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation {
                    image: prefix.clone(),
                });
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i as u32);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, code: usize) -> usize {
        self.image[code] as usize
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.len()];
        for (i, &p) in self.image.iter().enumerate() {
            inv[p as usize] = i as u32;
        }
        Permutation { image: inv }
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            image: self.image.iter().map(|&i| other.image[i as usize]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &p)| i == p as usize)
    }

    /// Non-trivial cycles in 1-based indices, each starting at its smallest
    /// element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for start in 0..self.len() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.apply(i);
            }
            out.push(cycle);
        }
        out
    }

    /// The permutation matrix `Q` with `Q[i][P(i)] = 1`.
    pub fn matrix(&self) -> Result<BooleanMatrix> {
        if !self.len().is_power_of_two() || self.len() < 2 {
            return Err(DbnError::MatrixShape(format!("{} states", self.len())));
        }
        BooleanMatrix::from_successors(
            self.len().trailing_zeros() as usize,
            self.image.iter().map(|&i| i as usize).collect(),
        )
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "e");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// `Q⁻¹ T Q`: entry `(i, j)` is `T[P⁻¹(i)][P⁻¹(j)]`, i.e. the successor of
/// `i` becomes `P(T(P⁻¹(i)))`.
pub fn conjugate(t: &BooleanMatrix, p: &Permutation) -> Result<BooleanMatrix> {
    if p.len() != t.size() {
        return Err(DbnError::MatrixShape(format!(
            "permutation of {} states for a {}-state matrix",
            p.len(),
            t.size()
        )));
    }
    let inv = p.inverse();
    let succ = (0..t.size())
        .map(|i| p.apply(t.successor_code(inv.apply(i))))
        .collect();
    BooleanMatrix::from_successors(t.nodes(), succ)
}

/// How `P_k` is chosen at each step `k ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PermutationStrategy {
    /// No permutation: `T_k = T`.
    Type1,
    /// Uniform over the identity, the 2-cycles and the products of two
    /// disjoint 2-cycles (two-node networks).
    Type2,
    /// Uniform over all permutations of the states.
    Type3,
    /// Uniform over the 3-cycles and 4-cycles (two-node networks); the
    /// complement of [`PermutationStrategy::Type2`].
    Type3Complement,
    /// A random full cycle on each label class of `Ξ_k`.
    Type4,
}

const TYPE2_CYCLES: [&[&[usize]]; 10] = [
    &[],
    &[&[1, 2]],
    &[&[1, 3]],
    &[&[1, 4]],
    &[&[2, 3]],
    &[&[2, 4]],
    &[&[3, 4]],
    &[&[1, 2], &[3, 4]],
    &[&[1, 3], &[2, 4]],
    &[&[1, 4], &[2, 3]],
];

const TYPE3C_CYCLES: [&[usize]; 14] = [
    &[1, 2, 3],
    &[1, 2, 4],
    &[1, 3, 2],
    &[1, 3, 4],
    &[1, 4, 2],
    &[1, 4, 3],
    &[2, 3, 4],
    &[2, 4, 3],
    &[1, 2, 3, 4],
    &[1, 2, 4, 3],
    &[1, 3, 2, 4],
    &[1, 3, 4, 2],
    &[1, 4, 2, 3],
    &[1, 4, 3, 2],
];

impl PermutationStrategy {
    pub const ALL: [PermutationStrategy; 5] = [
        PermutationStrategy::Type1,
        PermutationStrategy::Type2,
        PermutationStrategy::Type3,
        PermutationStrategy::Type3Complement,
        PermutationStrategy::Type4,
    ];

    /// Short name used on the command line: `1`, `2`, `3`, `3c`, `4`.
    pub fn name(&self) -> &'static str {
        match self {
            PermutationStrategy::Type1 => "1",
            PermutationStrategy::Type2 => "2",
            PermutationStrategy::Type3 => "3",
            PermutationStrategy::Type3Complement => "3c",
            PermutationStrategy::Type4 => "4",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }

    pub fn check_nodes(&self, nodes: usize) -> Result<()> {
        check_nodes(nodes)?;
        match self {
            PermutationStrategy::Type2 | PermutationStrategy::Type3Complement if nodes != 2 => {
                Err(DbnError::Unsupported(format!(
                    "strategy {} is defined for two-node networks only",
                    self.name()
                )))
            }
            _ => Ok(()),
        }
    }

    /// The explicit permutation list of a fixed-support strategy
    /// ([`PermutationStrategy::Type2`], [`PermutationStrategy::Type3Complement`],
    /// and [`PermutationStrategy::Type3`] for up to three nodes).
    pub fn support(&self, nodes: usize) -> Result<Vec<Permutation>> {
        self.check_nodes(nodes)?;
        let n = state_count(nodes);
        match self {
            PermutationStrategy::Type1 => Ok(vec![Permutation::identity(n)]),
            PermutationStrategy::Type2 => TYPE2_CYCLES
                .iter()
                .map(|c| Permutation::from_cycles(4, c))
                .collect(),
            PermutationStrategy::Type3Complement => TYPE3C_CYCLES
                .iter()
                .map(|c| Permutation::from_cycles(4, &[c]))
                .collect(),
            PermutationStrategy::Type3 if nodes <= 3 => Ok(Permutation::all(n)),
            _ => Err(DbnError::Unsupported(format!(
                "strategy {} has no enumerable support for {nodes} nodes",
                self.name()
            ))),
        }
    }

    /// Draws `P_k`. `None` means no conjugation (type 1).
    pub fn draw(
        &self,
        nodes: usize,
        labeling: &Labeling,
        chooser: &mut impl Chooser,
    ) -> Result<Option<Permutation>> {
        let n = state_count(nodes);
        Ok(match self {
            PermutationStrategy::Type1 => None,
            PermutationStrategy::Type2 => {
                let i = chooser.pick(TYPE2_CYCLES.len());
                Some(Permutation::from_cycles(n, TYPE2_CYCLES[i])?)
            }
            PermutationStrategy::Type3Complement => {
                let i = chooser.pick(TYPE3C_CYCLES.len());
                Some(Permutation::from_cycles(n, &[TYPE3C_CYCLES[i]])?)
            }
            PermutationStrategy::Type3 => {
                let mut image: Vec<usize> = (0..n).collect();
                chooser.shuffle(&mut image);
                Some(Permutation::from_images(image)?)
            }
            PermutationStrategy::Type4 => Some(build_type4_permutation(labeling, chooser)),
        })
    }
}

impl fmt::Display for PermutationStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type {}", self.name())
    }
}

/// Product over labels of a uniformly chosen full cycle on each class
/// `Ξ⁻¹(l)` with more than one state.
///
/// Labels are visited in ascending order. A class `s_1 < s_2 < … < s_r`
/// becomes the cycle `(s_1 t_2 … t_r)` where `t_2 … t_r` is a shuffle of
/// `s_2 … s_r`, giving each of the `(r − 1)!` cycles equal weight.
pub fn build_type4_permutation(labeling: &Labeling, chooser: &mut impl Chooser) -> Permutation {
    let n = state_count(labeling.nodes());
    let mut image: Vec<u32> = (0..n as u32).collect();
    for l in 1..=labeling.alphabet() {
        let mut class: Vec<usize> = labeling.preimage(l).iter().map(State::code).collect();
        if class.len() < 2 {
            continue;
        }
        chooser.shuffle(&mut class[1..]);
        for (pos, &from) in class.iter().enumerate() {
            image[from] = class[(pos + 1) % class.len()] as u32;
        }
    }
    Permutation { image }
}

/// `len` states starting at `start`, each the successor of the previous one.
pub fn trajectory(t: &BooleanMatrix, start: State, len: usize) -> Vec<State> {
    let mut out = Vec::with_capacity(len);
    let mut s = start;
    for _ in 0..len {
        out.push(s);
        s = t.successor(s);
    }
    out
}

/// Fixed parameters of one engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    pub nodes: usize,
    /// Length `L` of every state sequence; at least `2^μ + 1`.
    pub seq_len: usize,
    pub strategy: PermutationStrategy,
    /// If set, `T_1` is drawn uniformly from these rule vectors instead of
    /// from all Boolean matrices.
    pub initial_rules: Option<Vec<RuleVector>>,
}

impl EngineConfig {
    pub fn new(nodes: usize, strategy: PermutationStrategy) -> Self {
        EngineConfig {
            nodes,
            seq_len: state_count(nodes.min(crate::vbn::MAX_NODES)) + 1,
            strategy,
            initial_rules: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_nodes(self.nodes)?;
        self.strategy.check_nodes(self.nodes)?;
        let min = state_count(self.nodes) + 1;
        if self.seq_len < min {
            return Err(DbnError::Config(format!(
                "sequence length {} is below 2^μ + 1 = {min}",
                self.seq_len
            )));
        }
        if let Some(rules) = &self.initial_rules {
            if rules.is_empty() {
                return Err(DbnError::Config("initial rule restriction is empty".into()));
            }
            if let Some(rv) = rules.iter().find(|rv| rv.nodes() != self.nodes) {
                return Err(DbnError::RuleVectorWidth {
                    expected: self.nodes,
                    got: rv.nodes(),
                });
            }
        }
        Ok(())
    }
}

/// Intermediate products of one [`Engine::advance`] call.
#[derive(Clone, Debug)]
pub struct StepDetail {
    pub digraph: OutputDigraph,
    pub split: FunctionalDigraph,
    pub pseudo: PseudoTransitionDiagram,
    pub assignment: Vec<(Label, State)>,
    /// `T` before conjugation.
    pub relabeled: BooleanMatrix,
    pub frequency: FrequencyTable,
    pub permutation: Option<Permutation>,
}

/// A running DBN.
#[derive(Clone, Debug)]
pub struct Engine {
    config: EngineConfig,
    k: u64,
    labeling: Labeling,
    matrix: BooleanMatrix,
    states: Vec<State>,
    prev_states: Vec<State>,
    labels: Vec<u32>,
    anchor: State,
}

impl Engine {
    /// Step 1 with random choices, drawn in this order: `Ξ_1` (one label per
    /// state), `T_1` (one successor per state, or one whitelist entry), the
    /// anchor state, then the `L` states of `S_0`.
    pub fn init(config: EngineConfig, chooser: &mut impl Chooser) -> Result<Self> {
        config.validate()?;
        let nodes = config.nodes;
        let n = state_count(nodes);
        let labeling = Labeling::random(nodes, chooser)?;
        let matrix = match &config.initial_rules {
            Some(rules) => BooleanMatrix::from_rule_vector(&rules[chooser.pick(rules.len())]),
            None => BooleanMatrix::from_successors(nodes, (0..n).map(|_| chooser.pick(n)).collect())?,
        };
        let anchor = State::from_code_unchecked(nodes, chooser.pick(n));
        let s0 = (0..config.seq_len)
            .map(|_| State::from_code_unchecked(nodes, chooser.pick(n)))
            .collect();
        Engine::from_parts(config, labeling, matrix, anchor, s0)
    }

    /// Step 1 with explicit choices.
    pub fn from_parts(
        config: EngineConfig,
        labeling: Labeling,
        matrix: BooleanMatrix,
        anchor: State,
        s0: Vec<State>,
    ) -> Result<Self> {
        config.validate()?;
        let nodes = config.nodes;
        if labeling.nodes() != nodes || matrix.nodes() != nodes || anchor.nodes() != nodes {
            return Err(DbnError::Config("parts disagree on the node count".into()));
        }
        if s0.len() != config.seq_len {
            return Err(DbnError::LengthMismatch {
                states: s0.len(),
                labels: config.seq_len,
            });
        }
        if let Some(s) = s0.iter().find(|s| s.nodes() != nodes) {
            return Err(DbnError::StateWidth {
                expected: nodes,
                got: s.nodes(),
            });
        }
        let states = trajectory(&matrix, anchor, config.seq_len);
        let labels = labeling.apply(&states);
        Ok(Engine {
            config,
            k: 1,
            labeling,
            matrix,
            states,
            prev_states: s0,
            labels,
            anchor,
        })
    }

    /// One full time step; see the module documentation for the order.
    pub fn advance(&mut self, chooser: &mut impl Chooser) -> Result<StepDetail> {
        let nodes = self.config.nodes;
        let digraph = OutputDigraph::from_labels(&self.labels)?;
        let split = split_branches(&digraph, chooser)?;
        let pseudo = complete_to_pseudo(&split, nodes, chooser)?;
        let (relabeled, assignment) = relabel_to_vbn(&pseudo, &self.labeling, chooser)?;

        self.k += 1;
        let frequency = FrequencyTable::build(&self.prev_states, &self.labels)?;
        let labeling = update_labeling(&frequency, chooser);
        let permutation = self.config.strategy.draw(nodes, &labeling, chooser)?;
        let matrix = match &permutation {
            Some(p) => conjugate(&relabeled, p)?,
            None => relabeled.clone(),
        };
        let states = trajectory(&matrix, self.anchor, self.config.seq_len);
        self.labels = labeling.apply(&states);
        self.prev_states = std::mem::replace(&mut self.states, states);
        self.labeling = labeling;
        self.matrix = matrix;

        Ok(StepDetail {
            digraph,
            split,
            pseudo,
            assignment,
            relabeled,
            frequency,
            permutation,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Current time step `k` (1 after initialization).
    pub fn step(&self) -> u64 {
        self.k
    }

    /// `Ξ_k`.
    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    /// `T_k`.
    pub fn matrix(&self) -> &BooleanMatrix {
        &self.matrix
    }

    /// `S_k`.
    pub fn states(&self) -> &[State] {
        &self.states
    }

    /// `S_{k−1}` (`S_0` right after initialization).
    pub fn previous_states(&self) -> &[State] {
        &self.prev_states
    }

    /// `α_k`.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// First term of every `S_k`.
    pub fn anchor(&self) -> State {
        self.anchor
    }

    /// One trace line: step, rule vector of `T_k`, `Ξ_k` and `α_k`.
    pub fn trace_line(&self) -> String {
        let alpha: Vec<String> = self.labels.iter().map(u32::to_string).collect();
        format!(
            "k={} rules={} xi=[{}] alpha={}",
            self.k,
            self.matrix.to_rule_vector(),
            self.labeling,
            alpha.join(",")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chooser::{RngChooser, ScriptedChooser};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::{HashMap, HashSet};

    fn m(s: &str) -> BooleanMatrix {
        BooleanMatrix::parse_rows(s).unwrap()
    }
    fn st(a: u8, b: u8) -> State {
        State::from_bits(&[a, b]).unwrap()
    }

    /// Dense `Q⁻¹ T Q` with `Q⁻¹ = Qᵀ`, by plain matrix multiplication.
    fn conjugate_by_multiplication(t: &BooleanMatrix, p: &Permutation) -> Vec<Vec<u8>> {
        let q = p.matrix().unwrap().to_dense();
        let t = t.to_dense();
        let n = q.len();
        let mul = |a: &Vec<Vec<u8>>, b: &Vec<Vec<u8>>| -> Vec<Vec<u8>> {
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
                .collect()
        };
        let qt: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| q[j][i]).collect()).collect();
        mul(&mul(&qt, &t), &q)
    }

    #[test]
    fn permutation_matrix_examples() {
        let p = Permutation::from_cycles(4, &[&[1, 4, 2]]).unwrap();
        assert_eq!(p.matrix().unwrap(), m("0001/1000/0010/0100"));
        assert_eq!(Permutation::identity(4).matrix().unwrap(), BooleanMatrix::identity(2).unwrap());
        let swap = Permutation::from_cycles(4, &[&[1, 2]]).unwrap();
        assert_eq!(swap.matrix().unwrap(), m("0100/1000/0010/0001"));
        assert_eq!(p.to_string(), "(1 4 2)");
        assert_eq!(Permutation::identity(4).to_string(), "e");
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::from_images(vec![0, 0, 1, 2]).is_err());
        assert!(Permutation::from_cycles(4, &[&[1, 5]]).is_err());
        assert!(Permutation::from_cycles(4, &[&[1, 2], &[2, 3]]).is_err());
        assert_eq!(Permutation::all(4).len(), 24);
    }

    #[test]
    fn conjugation_examples() {
        let t = m("1000/0010/0100/0001");
        let p2 = Permutation::from_cycles(4, &[&[1, 4, 2]]).unwrap();
        assert_eq!(conjugate(&t, &p2).unwrap(), m("0010/0100/1000/0001"));
        assert_eq!(conjugate(&t, &Permutation::identity(4)).unwrap(), t);
        assert_eq!(conjugate_by_multiplication(&t, &p2), m("0010/0100/1000/0001").to_dense());
    }

    #[test]
    fn conjugation_agrees_with_matrix_product_exhaustively() {
        for code in 0..256 {
            let t = BooleanMatrix::from_rule_vector(&RuleVector::from_code(2, code).unwrap());
            for p in Permutation::all(4) {
                let c = conjugate(&t, &p).unwrap();
                assert_eq!(c.to_dense(), conjugate_by_multiplication(&t, &p));
            }
        }
    }

    #[test]
    fn conjugation_inverts_and_composes() {
        let mut ch = RngChooser(ChaCha8Rng::seed_from_u64(5));
        for _ in 0..50 {
            let t = BooleanMatrix::from_successors(3, (0..8).map(|_| ch.pick(8)).collect()).unwrap();
            let p = PermutationStrategy::Type3
                .draw(3, &Labeling::constant(3, 1).unwrap(), &mut ch)
                .unwrap()
                .unwrap();
            let r = PermutationStrategy::Type3
                .draw(3, &Labeling::constant(3, 1).unwrap(), &mut ch)
                .unwrap()
                .unwrap();
            assert_eq!(conjugate(&conjugate(&t, &p).unwrap(), &p.inverse()).unwrap(), t);
            assert_eq!(
                conjugate(&t, &p.then(&r)).unwrap(),
                conjugate(&conjugate(&t, &p).unwrap(), &r).unwrap()
            );
        }
    }

    #[test]
    fn strategy_supports_partition_the_symmetric_group() {
        let t2: HashSet<_> = PermutationStrategy::Type2.support(2).unwrap().into_iter().collect();
        let t3c: HashSet<_> = PermutationStrategy::Type3Complement
            .support(2)
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(t2.len(), 10);
        assert_eq!(t3c.len(), 14);
        assert!(t2.is_disjoint(&t3c));
        let all: HashSet<_> = Permutation::all(4).into_iter().collect();
        assert_eq!(t2.union(&t3c).cloned().collect::<HashSet<_>>(), all);
        assert!(PermutationStrategy::Type2.support(3).is_err());
        assert!(PermutationStrategy::Type3Complement.check_nodes(1).is_err());
    }

    #[test]
    fn type4_examples() {
        let xi2 = Labeling::new(2, vec![2, 2, 1, 2]).unwrap();
        let mut ch = ScriptedChooser::new([1]);
        let p = build_type4_permutation(&xi2, &mut ch);
        ch.finish().unwrap();
        assert_eq!(p.to_string(), "(1 4 2)");
        let mut ch = ScriptedChooser::new([0]);
        assert_eq!(build_type4_permutation(&xi2, &mut ch).to_string(), "(1 2 4)");

        let injective = Labeling::new(2, vec![3, 1, 4, 2]).unwrap();
        let mut none = ScriptedChooser::new([]);
        assert!(build_type4_permutation(&injective, &mut none).is_identity());
        none.finish().unwrap();

        let constant = Labeling::constant(2, 1).unwrap();
        let mut rng = RngChooser(ChaCha8Rng::seed_from_u64(9));
        let mut seen = HashMap::new();
        for _ in 0..6000 {
            let p = build_type4_permutation(&constant, &mut rng);
            assert_eq!(p.cycles().len(), 1);
            assert_eq!(p.cycles()[0].len(), 4);
            *seen.entry(p).or_insert(0) += 1;
        }
        assert_eq!(seen.len(), 6);
        assert!(seen.values().all(|&c| (800..1200).contains(&c)));
    }

    #[test]
    fn trajectory_examples() {
        let t = m("1000/0010/0100/0001");
        assert_eq!(
            trajectory(&t, st(1, 0), 5),
            vec![st(1, 0), st(0, 1), st(1, 0), st(0, 1), st(1, 0)]
        );
        let t1 = m("0100/0100/0001/1000");
        assert_eq!(
            trajectory(&t1, st(1, 0), 5),
            vec![st(1, 0), st(1, 1), st(0, 0), st(0, 1), st(0, 1)]
        );
        let id = BooleanMatrix::identity(2).unwrap();
        assert_eq!(trajectory(&id, st(0, 1), 5), vec![st(0, 1); 5]);
    }

    #[test]
    fn smallest_instance_initializes() {
        let mut ch = RngChooser(ChaCha8Rng::seed_from_u64(1));
        let mut e = Engine::init(EngineConfig::new(1, PermutationStrategy::Type1), &mut ch).unwrap();
        assert_eq!(e.matrix().size(), 2);
        assert_eq!(e.labeling().alphabet(), 2);
        for _ in 0..100 {
            e.advance(&mut ch).unwrap();
            assert_eq!(e.states()[0], e.anchor());
        }
    }

    #[test]
    fn initial_matrix_is_uniform() {
        let mut ch = RngChooser(ChaCha8Rng::seed_from_u64(2));
        let cfg = EngineConfig::new(2, PermutationStrategy::Type1);
        let draws = 10_000;
        let mut counts = vec![0usize; 256];
        for _ in 0..draws {
            let e = Engine::init(cfg.clone(), &mut ch).unwrap();
            counts[e.matrix().rule_vector_code().unwrap() as usize] += 1;
        }
        // Chi-square, 255 degrees of freedom; the 0.999 quantile is ~330.5.
        let expected = draws as f64 / 256.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 330.5, "chi2 = {chi2}");
        let sigma = (expected * (1.0 - 1.0 / 256.0)).sqrt();
        assert!(counts.iter().all(|&c| (c as f64 - expected).abs() < 5.0 * sigma));
    }

    #[test]
    fn fixed_point_anchor_gives_constant_sequences() {
        let cfg = EngineConfig::new(2, PermutationStrategy::Type1);
        let id = BooleanMatrix::identity(2).unwrap();
        let xi = Labeling::new(2, vec![1, 2, 3, 4]).unwrap();
        let e = Engine::from_parts(cfg, xi, id, st(1, 1), vec![st(0, 0); 5]).unwrap();
        assert_eq!(e.states(), &[st(1, 1); 5]);
        assert_eq!(e.labels(), &[4; 5]);
    }

    #[test]
    fn config_validation() {
        let mut cfg = EngineConfig::new(2, PermutationStrategy::Type1);
        cfg.seq_len = 4;
        assert!(cfg.validate().is_err());
        cfg.seq_len = 9;
        assert!(cfg.validate().is_ok());
        cfg.initial_rules = Some(vec![]);
        assert!(cfg.validate().is_err());
        assert!(EngineConfig::new(3, PermutationStrategy::Type2).validate().is_err());
        assert!(EngineConfig::new(0, PermutationStrategy::Type1).validate().is_err());
    }

    #[test]
    fn invariants_hold_over_random_runs() {
        for (seed, strategy) in PermutationStrategy::ALL.into_iter().enumerate() {
            for nodes in [1, 2, 3] {
                if strategy.check_nodes(nodes).is_err() {
                    continue;
                }
                let mut ch = RngChooser(ChaCha8Rng::seed_from_u64(seed as u64 * 10 + nodes as u64));
                let mut e = Engine::init(EngineConfig::new(nodes, strategy), &mut ch).unwrap();
                let anchor = e.anchor();
                for _ in 0..300 {
                    let d = e.advance(&mut ch).unwrap();
                    assert_eq!(e.states()[0], anchor);
                    assert_eq!(d.pseudo.graph().len(), state_count(nodes));
                    assert_eq!(d.split.collapsed_edges(), d.digraph.edges());
                    let last = *e.states().last().unwrap();
                    assert!(e.states()[..e.states().len() - 1].contains(&last));
                    if strategy == PermutationStrategy::Type1 {
                        assert_eq!(&d.relabeled, e.matrix());
                    }
                }
            }
        }
    }
}
