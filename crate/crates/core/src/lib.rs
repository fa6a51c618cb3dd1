//! Dynamical Boolean networks.
//!
//! A virtual Boolean network (VBN) is a Boolean network in which every node
//! reads every other node, so its transition rule and its `2^μ × 2^μ`
//! transition matrix determine each other. A dynamical Boolean network (DBN)
//! keeps the state set of a VBN fixed but rebuilds the transition matrix at
//! every time step: the trajectory of the current matrix is pushed through a
//! labeling function, the resulting label sequence becomes an output digraph,
//! the digraph is expanded into a pseudo-transition diagram, and the diagram
//! is relabeled with states to give the next matrix. Optionally the new
//! matrix is conjugated by a random permutation of the states.
//!
//! Module map:
//!
//! - [`vbn`]: states, Boolean matrices, single-node rules, rule vectors,
//!   linearity, attractors and BN embedding.
//! - [`labeling`]: labeling functions, output digraphs, frequency tables.
//! - [`expansion`]: branch splitting, sentinel completion and relabeling.
//! - [`engine`]: permutations, conjugation and the time-step loop.
//! - [`harness`]: trial campaigns and their statistics.
//! - [`golden`]: a scripted two-node example with every intermediate object.
//! - [`cli`]: the `dbn` command line front end.
//!
//! All random decisions are drawn through the [`Chooser`] trait, so a run is
//! fully determined by its seed and a worked example can be replayed by
//! scripting the decisions with [`ScriptedChooser`].

pub mod chooser;
pub mod cli;
pub mod engine;
pub mod error;
pub mod expansion;
pub mod golden;
pub mod harness;
pub mod labeling;
pub mod vbn;

pub use chooser::{Chooser, RngChooser, ScriptedChooser};
pub use engine::{Engine, EngineConfig, Permutation, PermutationStrategy};
pub use error::{DbnError, Result};
pub use expansion::{FunctionalDigraph, PseudoTransitionDiagram};
pub use harness::{CampaignSummary, SimulationConfig, TrialRecord};
pub use labeling::{FrequencyTable, Label, Labeling, OutputDigraph};
pub use vbn::{BooleanMatrix, Rule, RuleVector, State};
