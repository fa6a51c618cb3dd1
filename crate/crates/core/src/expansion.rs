//! From an output digraph to a transition matrix.
//!
//! Three stages, each available as a sampler driven by a [`Chooser`] and,
//! for two-node networks, as an exhaustive enumeration:
//!
//! 1. [`split_branches`]: every vertex with `d ≥ 2` out-going edges gets
//!    `d − 1` copies, and the `d` edges are redistributed one per vertex.
//!    When the vertex has a loop, the loop may also be redirected to one of
//!    the copies.
//! 2. [`complete_to_pseudo`]: sentinel vertices `z_1 … z_ν` are added until
//!    there are `2^μ` vertices, each with one out-going edge to any vertex.
//! 3. [`relabel_to_vbn`]: every vertex receives a distinct state. A vertex
//!    labeled `l` and its copies take states from `Ξ⁻¹(l)`; the sentinels
//!    take what is left.

use crate::chooser::Chooser;
use crate::error::{DbnError, Result};
use crate::labeling::{edge_list, Label, Labeling, OutputDigraph};
use crate::vbn::{check_nodes, state_count, BooleanMatrix, State};

/// A digraph in which every vertex has exactly one out-going edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctionalDigraph {
    /// `(vertex, successor)`, sorted by vertex.
    arcs: Vec<(Label, Label)>,
}

impl FunctionalDigraph {
    pub fn new(arcs: Vec<(Label, Label)>) -> Result<Self> {
        let mut arcs = arcs;
        arcs.sort_unstable();
        if let Some(w) = arcs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(DbnError::Pipeline(format!(
                "vertex {} has more than one out-going edge",
                w[0].0
            )));
        }
        let g = FunctionalDigraph { arcs };
        if let Some(&(a, b)) = g.arcs.iter().find(|&&(_, b)| g.position(b).is_none()) {
            return Err(DbnError::Pipeline(format!("edge {a} -> {b} leaves the vertex set")));
        }
        Ok(g)
    }

    fn position(&self, v: Label) -> Option<usize> {
        self.arcs.binary_search_by(|&(a, _)| a.cmp(&v)).ok()
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Label> + '_ {
        self.arcs.iter().map(|&(a, _)| a)
    }

    pub fn successor(&self, v: Label) -> Option<Label> {
        self.position(v).map(|i| self.arcs[i].1)
    }

    pub fn edges(&self) -> &[(Label, Label)] {
        &self.arcs
    }

    /// Edge set after identifying every split copy with its original vertex.
    pub fn collapsed_edges(&self) -> Vec<(Label, Label)> {
        let mut edges: Vec<_> = self
            .arcs
            .iter()
            .map(|&(a, b)| (a.collapsed(), b.collapsed()))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    /// One `a -> b` line per edge.
    pub fn edge_list(&self) -> String {
        edge_list(self.arcs.iter().copied())
    }
}

/// A functional digraph with exactly `2^μ` vertices, ready for relabeling.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PseudoTransitionDiagram {
    nodes: u8,
    graph: FunctionalDigraph,
    sentinels: usize,
}

impl PseudoTransitionDiagram {
    pub fn nodes(&self) -> usize {
        self.nodes as usize
    }

    pub fn graph(&self) -> &FunctionalDigraph {
        &self.graph
    }

    /// Number of sentinel vertices `ν`.
    pub fn sentinels(&self) -> usize {
        self.sentinels
    }

    pub fn edge_list(&self) -> String {
        self.graph.edge_list()
    }
}

/// How one branch vertex can be split.
struct Branch {
    /// `x_1, x_2, …, x_d`.
    group: Vec<Label>,
    /// Target sets: `{y_1, …, y_d}`, then, when `x_1` has a loop,
    /// `{x_i, y_2, …, y_d}` for `i = 2..=d`.
    families: Vec<Vec<Label>>,
}

fn branch(g: &OutputDigraph, v: Label) -> Result<Option<Branch>> {
    let mut targets: Vec<Label> = g.successors(v).collect();
    match targets.len() {
        0 => return Err(DbnError::DeadVertex(v.to_string())),
        1 => return Ok(None),
        _ => {}
    }
    let base = match v {
        Label::Base(b) => b,
        other => {
            return Err(DbnError::Pipeline(format!(
                "only base-labeled vertices can be split, got {other}"
            )))
        }
    };
    let d = targets.len();
    let looped = match targets.iter().position(|&t| t == v) {
        Some(i) => {
            // y_1 is the loop target x_1 itself.
            let t = targets.remove(i);
            targets.insert(0, t);
            true
        }
        None => false,
    };
    let mut group = vec![v];
    group.extend((1..d as u32).map(|copy| Label::Copy { base, copy }));
    let mut families = vec![targets.clone()];
    if looped {
        for &copy in &group[1..] {
            let mut family = targets.clone();
            family[0] = copy;
            families.push(family);
        }
    }
    Ok(Some(Branch { group, families }))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Number of ways one branch vertex of out-degree `d` can be split:
/// `d!`, or `d · d!` when the vertex has a loop.
pub fn branch_variant_count(d: usize, looped: bool) -> u64 {
    if d <= 1 {
        1
    } else if looped {
        d as u64 * factorial(d)
    } else {
        factorial(d)
    }
}

/// Samples one split of every branch vertex.
///
/// Branch vertices are handled in ascending label order. For each one the
/// target family is drawn first (only when the vertex has a loop), then the
/// targets are shuffled onto `x_1, x_2, …` with
/// [`Chooser::shuffle`]. Each variant is equally likely.
pub fn split_branches(g: &OutputDigraph, chooser: &mut impl Chooser) -> Result<FunctionalDigraph> {
    let mut arcs = Vec::with_capacity(g.edges().len());
    for &v in g.vertices() {
        match branch(g, v)? {
            None => arcs.push((v, g.successors(v).next().unwrap())),
            Some(b) => {
                let family = chooser.pick(b.families.len());
                let mut targets = b.families[family].clone();
                chooser.shuffle(&mut targets);
                arcs.extend(b.group.iter().copied().zip(targets));
            }
        }
    }
    FunctionalDigraph::new(arcs)
}

fn permutations(items: &[Label]) -> Vec<Vec<Label>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

const ENUMERATION_MAX_DEGREE: usize = 4;

/// Every digraph [`split_branches`] can return. Limited to digraphs that
/// can arise in a two-node network (out-degree at most 4).
pub fn enumerate_splits(g: &OutputDigraph) -> Result<Vec<FunctionalDigraph>> {
    let mut partials: Vec<Vec<(Label, Label)>> = vec![Vec::new()];
    for &v in g.vertices() {
        if g.out_degree(v) > ENUMERATION_MAX_DEGREE {
            return Err(DbnError::EnumerationTooLarge);
        }
        let options: Vec<Vec<(Label, Label)>> = match branch(g, v)? {
            None => vec![vec![(v, g.successors(v).next().unwrap())]],
            Some(b) => b
                .families
                .iter()
                .flat_map(|family| permutations(family))
                .map(|targets| b.group.iter().copied().zip(targets).collect())
                .collect(),
        };
        partials = partials
            .iter()
            .flat_map(|p| {
                options.iter().map(move |o| {
                    let mut next = p.clone();
                    next.extend_from_slice(o);
                    next
                })
            })
            .collect();
    }
    partials.into_iter().map(FunctionalDigraph::new).collect()
}

fn sentinel_frame(h: &FunctionalDigraph, nodes: usize) -> Result<(Vec<Label>, usize)> {
    check_nodes(nodes)?;
    let n = state_count(nodes);
    if h.len() > n {
        return Err(DbnError::TooManyVertices {
            vertices: h.len(),
            states: n,
        });
    }
    let nu = n - h.len();
    let mut all: Vec<Label> = h.vertices().collect();
    all.extend((1..=nu as u32).map(Label::Sentinel));
    all.sort_unstable();
    Ok((all, nu))
}

/// Adds `ν = 2^μ − λ` sentinels; each one's target is drawn uniformly from
/// all `2^μ` vertices (sorted label order), `z_1` first.
pub fn complete_to_pseudo(
    h: &FunctionalDigraph,
    nodes: usize,
    chooser: &mut impl Chooser,
) -> Result<PseudoTransitionDiagram> {
    let (all, nu) = sentinel_frame(h, nodes)?;
    let mut arcs = h.edges().to_vec();
    for z in 1..=nu as u32 {
        arcs.push((Label::Sentinel(z), all[chooser.pick(all.len())]));
    }
    Ok(PseudoTransitionDiagram {
        nodes: nodes as u8,
        graph: FunctionalDigraph::new(arcs)?,
        sentinels: nu,
    })
}

/// All `(2^μ)^ν` completions of `h`. Two-node networks only.
pub fn enumerate_completions(
    h: &FunctionalDigraph,
    nodes: usize,
) -> Result<Vec<PseudoTransitionDiagram>> {
    if nodes > 2 {
        return Err(DbnError::EnumerationTooLarge);
    }
    let (all, nu) = sentinel_frame(h, nodes)?;
    let mut partials: Vec<Vec<(Label, Label)>> = vec![h.edges().to_vec()];
    for z in 1..=nu as u32 {
        partials = partials
            .iter()
            .flat_map(|p| {
                all.iter().map(move |&t| {
                    let mut next = p.clone();
                    next.push((Label::Sentinel(z), t));
                    next
                })
            })
            .collect();
    }
    partials
        .into_iter()
        .map(|arcs| {
            Ok(PseudoTransitionDiagram {
                nodes: nodes as u8,
                graph: FunctionalDigraph::new(arcs)?,
                sentinels: nu,
            })
        })
        .collect()
}

type LabelGroups = Vec<(u32, Vec<Label>)>;

/// Vertex groups sharing a base label, ascending, plus the sentinels.
fn groups(p: &PseudoTransitionDiagram) -> Result<(LabelGroups, Vec<Label>)> {
    let mut groups: Vec<(u32, Vec<Label>)> = Vec::new();
    let mut sentinels = Vec::new();
    // Sorted order puts every Base(l) before any Copy, so group heads are
    // seen first.
    for v in p.graph.vertices() {
        match v {
            Label::Base(l) => groups.push((l, vec![v])),
            Label::Copy { base, .. } => match groups.iter_mut().find(|(l, _)| *l == base) {
                Some((_, g)) => g.push(v),
                None => {
                    return Err(DbnError::Pipeline(format!(
                        "copy {v} without its original vertex"
                    )))
                }
            },
            Label::Sentinel(_) => sentinels.push(v),
        }
    }
    Ok((groups, sentinels))
}

/// Assigns states to the vertices of `p` and returns the resulting
/// transition matrix with the assignment (sorted by vertex).
///
/// Label groups are handled in ascending order; for each, the group's
/// states are an injective draw from `Ξ⁻¹(l)` (lexicographic order,
/// [`Chooser::partial_shuffle`]). The leftover states, in lexicographic
/// order, are then shuffled onto `z_1, z_2, …`.
pub fn relabel_to_vbn(
    p: &PseudoTransitionDiagram,
    labeling: &Labeling,
    chooser: &mut impl Chooser,
) -> Result<(BooleanMatrix, Vec<(Label, State)>)> {
    let nodes = p.nodes();
    if labeling.nodes() != nodes {
        return Err(DbnError::Pipeline(format!(
            "labeling is for {} nodes, diagram for {nodes}",
            labeling.nodes()
        )));
    }
    let (groups, sentinels) = groups(p)?;
    let mut assignment: Vec<(Label, State)> = Vec::with_capacity(p.graph.len());
    let mut used = vec![false; state_count(nodes)];
    for (l, group) in &groups {
        let mut pool = labeling.preimage(*l);
        if group.len() > pool.len() {
            return Err(DbnError::Pipeline(format!(
                "label {l} has {} vertices but only {} states",
                group.len(),
                pool.len()
            )));
        }
        chooser.partial_shuffle(&mut pool, group.len());
        for (&v, &s) in group.iter().zip(&pool) {
            used[s.code()] = true;
            assignment.push((v, s));
        }
    }
    let mut rest: Vec<State> = State::all(nodes).filter(|s| !used[s.code()]).collect();
    if rest.len() != sentinels.len() {
        return Err(DbnError::Pipeline(format!(
            "{} states left for {} sentinels",
            rest.len(),
            sentinels.len()
        )));
    }
    chooser.shuffle(&mut rest);
    assignment.extend(sentinels.into_iter().zip(rest));
    assignment.sort_unstable();

    let state_of = |v: Label| {
        assignment
            .binary_search_by(|(a, _)| a.cmp(&v))
            .map(|i| assignment[i].1)
            .map_err(|_| DbnError::Pipeline(format!("vertex {v} has no state")))
    };
    let mut succ = vec![0usize; state_count(nodes)];
    for &(v, w) in p.graph.edges() {
        succ[state_of(v)?.code()] = state_of(w)?.code();
    }
    let t = BooleanMatrix::from_successors(nodes, succ)?;
    Ok((t, assignment))
}

/// Number of distinct assignments [`relabel_to_vbn`] can draw:
/// `Π_l |S_l|!/(|S_l| − d_l)!` times `ν!`.
pub fn relabel_count(p: &PseudoTransitionDiagram, labeling: &Labeling) -> Result<u64> {
    let (groups, sentinels) = groups(p)?;
    let mut count = factorial(sentinels.len());
    for (l, group) in groups {
        let n = labeling.preimage(l).len();
        let d = group.len();
        if d > n {
            return Ok(0);
        }
        count *= ((n - d + 1)..=n).map(|k| k as u64).product::<u64>();
    }
    Ok(count)
}
