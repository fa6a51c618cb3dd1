//! Replays of the hand-worked example with every random decision forced.
//!
//! [`golden_cases`] runs each check and reports instead of panicking, so the
//! `verify` command can list all failures at once.

use std::collections::HashSet;

use crate::chooser::ScriptedChooser;
use crate::engine::{Engine, EngineConfig, Permutation, PermutationStrategy};
use crate::expansion::{enumerate_completions, enumerate_splits};
use crate::harness::theta;
use crate::labeling::{FrequencyTable, Label, Labeling, OutputDigraph};
use crate::vbn::{write_rule_table, BooleanMatrix, State};
use crate::Result;

/// Outputs of the sixteen two-node rules plus the `n` row, transcribed by hand.
pub const RULE_TABLE_2: &str = "\
input,1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16
\"(0,0)\",0,1,0,1,0,1,0,1,0,1,0,1,0,1,0,1
\"(0,1)\",0,0,1,1,0,0,1,1,0,0,1,1,0,0,1,1
\"(1,0)\",0,0,0,0,1,1,1,1,0,0,0,0,1,1,1,1
\"(1,1)\",0,0,0,0,0,0,0,0,1,1,1,1,1,1,1,1
n,0,2,2,1,2,1,2,2,2,2,1,2,1,2,2,0
";

/// Split choice, sentinel target, relabeling, then the tie in `Ξ_2`.
pub const STEP2_SCRIPT: [usize; 7] = [1, 1, 3, 1, 0, 1, 1];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCase {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl GoldenCase {
    fn check<T: PartialEq + std::fmt::Debug>(name: &'static str, got: T, want: T) -> Self {
        GoldenCase {
            name,
            passed: got == want,
            detail: format!("got {got:?}, want {want:?}"),
        }
    }

    fn close(name: &'static str, got: f64, want: f64, tol: f64) -> Self {
        GoldenCase {
            name,
            passed: (got - want).abs() < tol,
            detail: format!("got {got:.4}, want {want} ± {tol}"),
        }
    }

    fn failed(name: &'static str, err: impl std::fmt::Display) -> Self {
        GoldenCase {
            name,
            passed: false,
            detail: format!("error: {err}"),
        }
    }
}

fn st(a: u8, b: u8) -> State {
    State::from_bits(&[a, b]).expect("two bits")
}

fn matrix(rows: &str) -> BooleanMatrix {
    BooleanMatrix::parse_rows(rows).expect("literal matrix")
}

/// The step-1 engine of the worked example.
pub fn example_engine(strategy: PermutationStrategy) -> Result<Engine> {
    Engine::from_parts(
        EngineConfig::new(2, strategy),
        Labeling::new(2, vec![1, 2, 1, 2])?,
        matrix("0100/0100/0001/1000"),
        st(1, 0),
        vec![st(1, 0), st(0, 0), st(0, 1), st(0, 0), st(0, 1)],
    )
}

/// Compares a rule table CSV against [`RULE_TABLE_2`].
pub fn check_rule_table(csv: &str) -> GoldenCase {
    let rows = |s: &str| -> Vec<String> { s.lines().map(str::to_owned).collect() };
    let got = rows(csv);
    let want = rows(RULE_TABLE_2);
    let bad: Vec<usize> = (0..got.len().max(want.len()))
        .filter(|&i| got.get(i) != want.get(i))
        .collect();
    GoldenCase {
        name: "rule table",
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "64 outputs and n row match".into()
        } else {
            format!("rows differ at lines {bad:?}")
        },
    }
}

fn generated_rule_table() -> GoldenCase {
    let mut buf = Vec::new();
    match write_rule_table(2, &mut buf) {
        Ok(()) => check_rule_table(&String::from_utf8_lossy(&buf)),
        Err(e) => GoldenCase::failed("rule table", e),
    }
}

type EdgeSets = HashSet<Vec<(Label, Label)>>;

fn split_set() -> GoldenCase {
    let b = Label::Base;
    let c = Label::Copy { base: 2, copy: 1 };
    let want: EdgeSets = [
        vec![(b(1), b(2)), (b(2), b(2)), (c, b(1))],
        vec![(b(1), b(2)), (b(2), b(1)), (c, b(2))],
        vec![(b(1), b(2)), (b(2), c), (c, b(1))],
        vec![(b(1), b(2)), (b(2), b(1)), (c, c)],
    ]
    .into_iter()
    .collect();
    let run = || -> Result<(EdgeSets, Vec<usize>)> {
        let g = OutputDigraph::from_labels(&[1, 2, 1, 2, 2])?;
        let splits = enumerate_splits(&g)?;
        let mut completions = Vec::new();
        for h in &splits {
            completions.push(enumerate_completions(h, 2)?.len());
        }
        Ok((splits.iter().map(|h| h.edges().to_vec()).collect(), completions))
    };
    match run() {
        Ok((got, completions)) => GoldenCase {
            name: "split and completion set",
            passed: got == want && completions == [4, 4, 4, 4],
            detail: format!("{} digraphs, completions per digraph {completions:?}", got.len()),
        },
        Err(e) => GoldenCase::failed("split and completion set", e),
    }
}

fn frequency_rows(ft: &FrequencyTable) -> Vec<Vec<u32>> {
    (1..=4)
        .map(|l| State::all(2).map(|s| ft.count(s, l)).collect())
        .collect()
}

fn worked_example(out: &mut Vec<GoldenCase>) -> Result<()> {
    let mut engine = example_engine(PermutationStrategy::Type1)?;
    out.push(GoldenCase::check(
        "S_1",
        engine.states().to_vec(),
        vec![st(1, 0), st(1, 1), st(0, 0), st(0, 1), st(0, 1)],
    ));
    out.push(GoldenCase::check("alpha_1", engine.labels().to_vec(), vec![1, 2, 1, 2, 2]));

    let mut ch = ScriptedChooser::new(STEP2_SCRIPT);
    let detail = engine.advance(&mut ch)?;
    ch.finish()?;

    let mut assignment = detail.assignment.clone();
    assignment.sort_by_key(|&(_, s)| s);
    out.push(GoldenCase::check(
        "Xi_1 prime",
        assignment
            .iter()
            .map(|(l, s)| format!("{s}->{l}"))
            .collect::<Vec<_>>()
            .join(" "),
        "(0,0)->z1 (0,1)->2 (1,0)->1 (1,1)->2'".to_string(),
    ));
    out.push(GoldenCase::check("T", detail.relabeled.clone(), matrix("1000/0010/0100/0001")));
    out.push(GoldenCase::check(
        "frequency table",
        frequency_rows(&detail.frequency),
        vec![vec![0, 1, 1, 0], vec![2, 1, 0, 0], vec![0; 4], vec![0; 4]],
    ));
    out.push(GoldenCase::check("Xi_2", engine.labeling().labels().to_vec(), vec![2, 2, 1, 2]));
    out.push(GoldenCase::check("T_2 = T", engine.matrix().clone(), detail.relabeled));
    out.push(GoldenCase::check(
        "S_2",
        engine.states().to_vec(),
        vec![st(1, 0), st(0, 1), st(1, 0), st(0, 1), st(1, 0)],
    ));
    out.push(GoldenCase::check("alpha_2", engine.labels().to_vec(), vec![1, 2, 1, 2, 1]));
    Ok(())
}

fn conjugated_example(out: &mut Vec<GoldenCase>) -> Result<()> {
    let mut engine = example_engine(PermutationStrategy::Type4)?;
    let mut ch = ScriptedChooser::new(STEP2_SCRIPT.iter().copied().chain([1]));
    let detail = engine.advance(&mut ch)?;
    ch.finish()?;
    let q2 = match &detail.permutation {
        Some(p) => p.matrix()?,
        None => BooleanMatrix::identity(2)?,
    };
    out.push(GoldenCase::check("Q_2", q2, matrix("0001/1000/0010/0100")));
    out.push(GoldenCase::check(
        "Q_2 permutation",
        detail.permutation.map(|p| p.to_string()),
        Some(Permutation::from_cycles(4, &[&[1, 4, 2]])?.to_string()),
    ));
    out.push(GoldenCase::check(
        "T_2 conjugated",
        engine.matrix().clone(),
        matrix("0010/0100/1000/0001"),
    ));
    Ok(())
}

fn theta_case(name: &'static str, n: u64, want: f64) -> GoldenCase {
    match theta(n, n) {
        Ok(v) => GoldenCase::close(name, v, want, 0.05),
        Err(e) => GoldenCase::failed(name, e),
    }
}

/// Every golden check, in a fixed order.
pub fn golden_cases() -> Vec<GoldenCase> {
    let mut out = vec![generated_rule_table(), split_set()];
    if let Err(e) = worked_example(&mut out) {
        out.push(GoldenCase::failed("worked example", e));
    }
    if let Err(e) = conjugated_example(&mut out) {
        out.push(GoldenCase::failed("conjugated example", e));
    }
    out.push(theta_case("theta(175,175)", 175, 1005.3));
    out.push(theta_case("theta(256,256)", 256, 1567.8));
    out
}
