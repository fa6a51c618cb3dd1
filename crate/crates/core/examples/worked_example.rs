//! One time step of a two-node DBN with every random choice forced, showing
//! each intermediate object, then the same step with a label-preserving
//! permutation.
//!
//! `cargo run --example worked_example`

use dbn::golden::{example_engine, golden_cases, STEP2_SCRIPT};
use dbn::{PermutationStrategy, ScriptedChooser, State};

fn main() -> dbn::Result<()> {
    let mut engine = example_engine(PermutationStrategy::Type1)?;
    let show = |s: &[State]| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
    println!("Xi_1 = [{}]", engine.labeling());
    println!("T_1 =\n{}", engine.matrix());
    println!("S_1 = {}", show(engine.states()));
    println!("alpha_1 = {:?}", engine.labels());

    let mut ch = ScriptedChooser::new(STEP2_SCRIPT);
    let step = engine.advance(&mut ch)?;
    ch.finish()?;
    println!("\noutput digraph: {}", step.digraph.edge_list().trim_end().replace('\n', ", "));
    println!("split:          {}", step.split.edge_list().trim_end().replace('\n', ", "));
    println!("pseudo:         {}", step.pseudo.edge_list().trim_end().replace('\n', ", "));
    let assignment: Vec<String> = step.assignment.iter().map(|(l, s)| format!("{l}={s}")).collect();
    println!("relabeling:     {}", assignment.join(" "));
    println!("T =\n{}", step.relabeled);
    println!("frequency table of S_0 against alpha_1:");
    step.frequency.write_csv(std::io::stdout()).expect("stdout");
    println!("Xi_2 = [{}]", engine.labeling());
    println!("S_2 = {}", show(engine.states()));
    println!("alpha_2 = {:?}", engine.labels());

    let mut conj = example_engine(PermutationStrategy::Type4)?;
    let mut ch = ScriptedChooser::new(STEP2_SCRIPT.iter().copied().chain([1]));
    let step = conj.advance(&mut ch)?;
    let p = step.permutation.expect("type 4 draws a permutation");
    println!("\ntype 4: P_2 = {p}, Q_2 =\n{}", p.matrix()?);
    println!("T_2 = Q_2^-1 T Q_2 =\n{}", conj.matrix());

    let cases = golden_cases();
    let passed = cases.iter().filter(|c| c.passed).count();
    println!("\ngolden checks: {passed}/{} pass", cases.len());
    Ok(())
}
