//! Labeling functions, label sequences and output digraphs.

use std::fmt;
use std::io::Write;

use crate::chooser::Chooser;
use crate::error::{DbnError, Result};
use crate::vbn::{check_nodes, state_count, State};

/// A vertex label.
///
/// Ordering is `Base < Copy < Sentinel`, then by the numeric fields; the
/// pipeline relies on it for a deterministic decision order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    /// A label in `Λ = {1, …, 2^μ}`.
    Base(u32),
    /// The `copy`-th extra vertex split off the vertex labeled `base`
    /// (written `2'`, `2''`, …).
    Copy { base: u32, copy: u32 },
    /// The `n`-th completion vertex `z_n` (1-based).
    Sentinel(u32),
}

impl Label {
    /// The base label a split copy descends from; sentinels have none.
    pub fn base(&self) -> Option<u32> {
        match *self {
            Label::Base(b) | Label::Copy { base: b, .. } => Some(b),
            Label::Sentinel(_) => None,
        }
    }

    /// Identifies a split copy with the vertex it was split from.
    pub fn collapsed(&self) -> Label {
        match *self {
            Label::Copy { base, .. } => Label::Base(base),
            other => other,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Label::Base(b) => write!(f, "{b}"),
            Label::Copy { base, copy } => {
                write!(f, "{base}")?;
                for _ in 0..copy {
                    write!(f, "'")?;
                }
                Ok(())
            }
            Label::Sentinel(n) => write!(f, "z{n}"),
        }
    }
}

/// A total map from states to base labels `1..=2^μ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Labeling {
    nodes: u8,
    labels: Vec<u32>,
}

impl Labeling {
    /// `labels[code(s)]` is the label of state `s`.
    pub fn new(nodes: usize, labels: Vec<u32>) -> Result<Self> {
        check_nodes(nodes)?;
        let n = state_count(nodes);
        if labels.len() != n {
            return Err(DbnError::LabelingWidth {
                expected: n,
                got: labels.len(),
            });
        }
        if let Some(&l) = labels.iter().find(|&&l| l == 0 || l as usize > n) {
            return Err(DbnError::LabelRange {
                label: l,
                max: n as u32,
            });
        }
        Ok(Labeling {
            nodes: nodes as u8,
            labels,
        })
    }

    pub fn constant(nodes: usize, label: u32) -> Result<Self> {
        check_nodes(nodes)?;
        Labeling::new(nodes, vec![label; state_count(nodes)])
    }

    /// Each state labeled independently and uniformly from `Λ`.
    pub fn random(nodes: usize, chooser: &mut impl Chooser) -> Result<Self> {
        check_nodes(nodes)?;
        let n = state_count(nodes);
        let labels = (0..n).map(|_| chooser.pick(n) as u32 + 1).collect();
        Ok(Labeling {
            nodes: nodes as u8,
            labels,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes as usize
    }

    /// Size of the label alphabet, `2^μ`.
    pub fn alphabet(&self) -> u32 {
        self.labels.len() as u32
    }

    pub fn label(&self, s: State) -> u32 {
        self.labels[s.code()]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    /// `S_l`: the states carrying label `l`, in lexicographic order.
    pub fn preimage(&self, label: u32) -> Vec<State> {
        State::all(self.nodes())
            .filter(|&s| self.label(s) == label)
            .collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.labels.len() + 1];
        self.labels
            .iter()
            .all(|&l| !std::mem::replace(&mut seen[l as usize], true))
    }

    /// Term-wise image of a state sequence.
    pub fn apply(&self, states: &[State]) -> Vec<u32> {
        states.iter().map(|&s| self.label(s)).collect()
    }
}

impl fmt::Display for Labeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in State::all(self.nodes()).enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}->{}", self.label(s))?;
        }
        Ok(())
    }
}

/// The digraph whose edges are the consecutive pairs of a label sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OutputDigraph {
    vertices: Vec<Label>,
    edges: Vec<(Label, Label)>,
}

impl OutputDigraph {
    pub fn from_labels(sequence: &[u32]) -> Result<Self> {
        if sequence.len() < 2 {
            return Err(DbnError::ShortSequence(sequence.len()));
        }
        let mut vertices: Vec<Label> = sequence.iter().map(|&l| Label::Base(l)).collect();
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges: Vec<(Label, Label)> = sequence
            .windows(2)
            .map(|w| (Label::Base(w[0]), Label::Base(w[1])))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(OutputDigraph { vertices, edges })
    }

    /// Builds a digraph from explicit parts. Edge endpoints must be vertices.
    pub fn from_parts(vertices: Vec<Label>, edges: Vec<(Label, Label)>) -> Result<Self> {
        let mut vertices = vertices;
        vertices.sort_unstable();
        vertices.dedup();
        let mut edges = edges;
        edges.sort_unstable();
        edges.dedup();
        if let Some((a, b)) = edges
            .iter()
            .find(|(a, b)| vertices.binary_search(a).is_err() || vertices.binary_search(b).is_err())
        {
            return Err(DbnError::Pipeline(format!("edge {a} -> {b} leaves the vertex set")));
        }
        Ok(OutputDigraph { vertices, edges })
    }

    /// Sorted vertices.
    pub fn vertices(&self) -> &[Label] {
        &self.vertices
    }

    /// Sorted, de-duplicated edges.
    pub fn edges(&self) -> &[(Label, Label)] {
        &self.edges
    }

    /// Targets of the out-going edges of `v`, sorted.
    pub fn successors(&self, v: Label) -> impl Iterator<Item = Label> + '_ {
        let start = self.edges.partition_point(|&(a, _)| a < v);
        self.edges[start..]
            .iter()
            .take_while(move |&&(a, _)| a == v)
            .map(|&(_, b)| b)
    }

    pub fn out_degree(&self, v: Label) -> usize {
        self.successors(v).count()
    }

    pub fn has_edge(&self, a: Label, b: Label) -> bool {
        self.edges.binary_search(&(a, b)).is_ok()
    }

    /// One `a -> b` line per edge.
    pub fn edge_list(&self) -> String {
        edge_list(self.edges.iter().copied())
    }
}

pub(crate) fn edge_list(edges: impl Iterator<Item = (Label, Label)>) -> String {
    let mut out = String::new();
    for (a, b) in edges {
        out.push_str(&format!("{a} -> {b}\n"));
    }
    out
}

/// `#(s, l)`: how often state `s` was paired with label `l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyTable {
    nodes: u8,
    /// Row-major by state code, then label − 1.
    counts: Vec<u32>,
}

impl FrequencyTable {
    pub fn build(states: &[State], labels: &[u32]) -> Result<Self> {
        if states.len() != labels.len() {
            return Err(DbnError::LengthMismatch {
                states: states.len(),
                labels: labels.len(),
            });
        }
        let nodes = states
            .first()
            .map(State::nodes)
            .ok_or(DbnError::ShortSequence(0))?;
        let n = state_count(nodes);
        let mut counts = vec![0u32; n * n];
        for (&s, &l) in states.iter().zip(labels) {
            if s.nodes() != nodes {
                return Err(DbnError::StateWidth {
                    expected: nodes,
                    got: s.nodes(),
                });
            }
            if l == 0 || l as usize > n {
                return Err(DbnError::LabelRange {
                    label: l,
                    max: n as u32,
                });
            }
            counts[s.code() * n + (l as usize - 1)] += 1;
        }
        Ok(FrequencyTable {
            nodes: nodes as u8,
            counts,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes as usize
    }

    fn width(&self) -> usize {
        state_count(self.nodes())
    }

    pub fn count(&self, s: State, label: u32) -> u32 {
        self.counts[s.code() * self.width() + label as usize - 1]
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// `m_s`, the highest frequency for state `s`.
    pub fn max_count(&self, s: State) -> u32 {
        let w = self.width();
        self.counts[s.code() * w..(s.code() + 1) * w]
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Labels attaining `m_s` for state `s`, ascending. All of `Λ` when `s`
    /// never occurred.
    pub fn argmax(&self, s: State) -> Vec<u32> {
        let w = self.width();
        let row = &self.counts[s.code() * w..(s.code() + 1) * w];
        let m = row.iter().copied().max().unwrap_or(0);
        row.iter()
            .enumerate()
            .filter(|&(_, &c)| c == m)
            .map(|(l, _)| l as u32 + 1)
            .collect()
    }

    /// Number of distinct labeling functions [`update_labeling`] can return.
    pub fn labeling_support_size(&self) -> u64 {
        State::all(self.nodes())
            .map(|s| self.argmax(s).len() as u64)
            .product()
    }

    /// CSV with one row per label and one column per state.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["label".to_string()];
        header.extend(State::all(self.nodes()).map(|s| s.to_string()));
        w.write_record(&header)?;
        for l in 1..=self.width() as u32 {
            let mut row = vec![l.to_string()];
            row.extend(State::all(self.nodes()).map(|s| self.count(s, l).to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Next labeling function: each state gets one of its most frequent labels,
/// ties broken uniformly. Decisions are drawn in state order, and only for
/// states with more than one candidate.
pub fn update_labeling(table: &FrequencyTable, chooser: &mut impl Chooser) -> Labeling {
    let labels = State::all(table.nodes())
        .map(|s| {
            let candidates = table.argmax(s);
            candidates[chooser.pick(candidates.len())]
        })
        .collect();
    Labeling {
        nodes: table.nodes,
        labels,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chooser::{RngChooser, ScriptedChooser};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn st(a: u8, b: u8) -> State {
        State::from_bits(&[a, b]).unwrap()
    }

    fn b(l: u32) -> Label {
        Label::Base(l)
    }

    fn xi1() -> Labeling {
        Labeling::new(2, vec![1, 2, 1, 2]).unwrap()
    }

    #[test]
    fn apply_labels_examples() {
        let s1 = [st(1, 0), st(1, 1), st(0, 0), st(0, 1), st(0, 1)];
        assert_eq!(xi1().apply(&s1), vec![1, 2, 1, 2, 2]);

        let xi2 = Labeling::new(2, vec![2, 2, 1, 2]).unwrap();
        let s2 = [st(1, 0), st(0, 1), st(1, 0), st(0, 1), st(1, 0)];
        assert_eq!(xi2.apply(&s2), vec![1, 2, 1, 2, 1]);

        let c = Labeling::constant(2, 3).unwrap();
        assert_eq!(c.apply(&s1), vec![3; 5]);
    }

    #[test]
    fn labeling_validation() {
        assert!(matches!(
            Labeling::new(2, vec![1, 2, 5, 1]),
            Err(DbnError::LabelRange { label: 5, max: 4 })
        ));
        assert!(Labeling::new(2, vec![0, 1, 1, 1]).is_err());
        assert!(Labeling::new(2, vec![1, 1]).is_err());
        assert!(Labeling::new(2, vec![4, 3, 2, 1]).unwrap().is_injective());
        assert!(!xi1().is_injective());
        assert_eq!(xi1().preimage(2), vec![st(0, 1), st(1, 1)]);
        assert!(xi1().preimage(3).is_empty());
    }

    #[test]
    fn output_digraph_examples() {
        let g = OutputDigraph::from_labels(&[1, 2, 1, 2, 2, 1, 1, 1]).unwrap();
        assert_eq!(g.vertices(), &[b(1), b(2)]);
        assert_eq!(g.edges(), &[(b(1), b(1)), (b(1), b(2)), (b(2), b(1)), (b(2), b(2))]);

        let g = OutputDigraph::from_labels(&[1, 2, 1, 2, 2]).unwrap();
        assert_eq!(g.edges(), &[(b(1), b(2)), (b(2), b(1)), (b(2), b(2))]);
        assert_eq!(g.out_degree(b(2)), 2);
        assert_eq!(g.successors(b(2)).collect::<Vec<_>>(), vec![b(1), b(2)]);
        assert_eq!(g.edge_list(), "1 -> 2\n2 -> 1\n2 -> 2\n");

        let g = OutputDigraph::from_labels(&[3, 3, 3]).unwrap();
        assert_eq!(g.vertices(), &[b(3)]);
        assert_eq!(g.edges(), &[(b(3), b(3))]);

        assert!(matches!(
            OutputDigraph::from_labels(&[1]),
            Err(DbnError::ShortSequence(1))
        ));
    }

    #[test]
    fn label_display() {
        assert_eq!(Label::Copy { base: 2, copy: 1 }.to_string(), "2'");
        assert_eq!(Label::Copy { base: 2, copy: 2 }.to_string(), "2''");
        assert_eq!(Label::Sentinel(1).to_string(), "z1");
        assert_eq!(Label::Copy { base: 2, copy: 1 }.collapsed(), b(2));
    }

    fn table2() -> FrequencyTable {
        let s0 = [st(1, 0), st(0, 0), st(0, 1), st(0, 0), st(0, 1)];
        FrequencyTable::build(&s0, &[1, 2, 1, 2, 2]).unwrap()
    }

    #[test]
    fn frequency_table_matches_worked_example() {
        let ft = table2();
        let expect = [
            (st(0, 0), 2, 2),
            (st(0, 1), 1, 1),
            (st(0, 1), 2, 1),
            (st(1, 0), 1, 1),
        ];
        for s in State::all(2) {
            for l in 1..=4 {
                let want = expect
                    .iter()
                    .find(|&&(es, el, _)| es == s && el == l)
                    .map_or(0, |e| e.2);
                assert_eq!(ft.count(s, l), want, "#({s},{l})");
            }
        }
        assert_eq!(ft.total(), 5);
        assert_eq!(ft.max_count(st(1, 1)), 0);

        let mut buf = Vec::new();
        ft.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "label,\"(0,0)\",\"(0,1)\",\"(1,0)\",\"(1,1)\"\n1,0,1,1,0\n2,2,1,0,0\n3,0,0,0,0\n4,0,0,0,0\n"
        );
    }

    #[test]
    fn frequency_table_errors() {
        assert!(matches!(
            FrequencyTable::build(&[st(0, 0)], &[1, 2]),
            Err(DbnError::LengthMismatch { .. })
        ));
        assert!(FrequencyTable::build(&[st(0, 0)], &[7]).is_err());
    }

    #[test]
    fn constant_labels_put_all_mass_in_one_row() {
        let seq = [st(0, 0), st(1, 1), st(1, 1), st(0, 1)];
        let ft = FrequencyTable::build(&seq, &[3; 4]).unwrap();
        for s in State::all(2) {
            for l in [1, 2, 4] {
                assert_eq!(ft.count(s, l), 0);
            }
        }
        assert_eq!(ft.count(st(1, 1), 3), 2);
    }

    #[test]
    fn update_labeling_reproduces_worked_draw() {
        // Ties: (0,1) over {1,2} -> index 1; (1,1) over {1,2,3,4} -> index 1.
        let mut c = ScriptedChooser::new([1, 1]);
        let xi2 = update_labeling(&table2(), &mut c);
        c.finish().unwrap();
        assert_eq!(xi2.labels(), &[2, 2, 1, 2]);
        assert_eq!(table2().labeling_support_size(), 8);
    }

    #[test]
    fn eight_possible_labelings() {
        let ft = table2();
        let mut seen = std::collections::HashSet::new();
        for a in 0..2 {
            for b in 0..4 {
                let mut c = ScriptedChooser::new([a, b]);
                seen.insert(update_labeling(&ft, &mut c).labels().to_vec());
                c.finish().unwrap();
            }
        }
        assert_eq!(seen.len(), 8);
        for l in &seen {
            assert_eq!(l[0], 2);
            assert_eq!(l[2], 1);
        }
    }

    #[test]
    fn strict_maximizers_are_deterministic() {
        let seq = [st(0, 0), st(0, 1), st(1, 0), st(1, 1)];
        let ft = FrequencyTable::build(&seq, &[4, 3, 2, 1]).unwrap();
        let mut c = ScriptedChooser::new([]);
        assert_eq!(update_labeling(&ft, &mut c).labels(), &[4, 3, 2, 1]);
        c.finish().unwrap();
    }

    #[test]
    fn empty_rows_are_uniform_over_the_alphabet() {
        // A table where no state occurs: build from a sequence of state
        // (0,0) only, then look at the other three states.
        let ft = FrequencyTable::build(&[st(0, 0), st(0, 0)], &[1, 1]).unwrap();
        let mut chooser = RngChooser(ChaCha8Rng::seed_from_u64(11));
        let draws = 100_000;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            let xi = update_labeling(&ft, &mut chooser);
            assert_eq!(xi.label(st(0, 0)), 1);
            counts[xi.label(st(1, 1)) as usize - 1] += 1;
        }
        let expected = draws as f64 / 4.0;
        let sigma = (draws as f64 * 0.25 * 0.75).sqrt();
        for c in counts {
            assert!((c as f64 - expected).abs() < 3.0 * sigma, "{counts:?}");
        }
        // Chi-square with 3 degrees of freedom, 0.999 quantile 16.27.
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }
}
