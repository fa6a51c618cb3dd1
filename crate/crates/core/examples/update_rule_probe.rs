//! Compares the engine's update with two alternative readings of it, on a
//! small batch of two-node trials.
//!
//! * `--cumulative`: label frequencies accumulate over every step instead of
//!   being rebuilt from the latest pair of sequences.
//! * `--no-inverse`: the next matrix is `Q T Q` rather than `Q^-1 T Q`.
//!
//! Neither is what [`dbn::Engine`] does. With both off this loop replays the
//! engine's own update, so the first row of output is the baseline.
//!
//! `cargo run --release --example update_rule_probe -- [--cumulative] [--no-inverse] [trials] [steps]`

use dbn::chooser::Chooser;
use dbn::engine::{conjugate, trajectory};
use dbn::expansion::{complete_to_pseudo, relabel_to_vbn, split_branches};
use dbn::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const NODES: usize = 2;
const STATES: usize = 4;
const SEQ_LEN: usize = STATES + 1;

#[derive(Clone, Copy)]
struct Variant {
    cumulative: bool,
    no_inverse: bool,
}

struct Outcome {
    distinct: usize,
    fixed_point_free_steps: usize,
    full_at: Option<usize>,
}

fn pick_state(ch: &mut impl Chooser) -> State {
    State::from_index(NODES, ch.pick(STATES) + 1).expect("in range")
}

fn trial(strategy: PermutationStrategy, v: Variant, seed: u64, steps: usize) -> Result<Outcome> {
    let mut ch = RngChooser(ChaCha8Rng::seed_from_u64(seed));
    let mut xi = Labeling::random(NODES, &mut ch)?;
    let t1 = BooleanMatrix::from_successors(NODES, (0..STATES).map(|_| ch.pick(STATES)).collect())?;
    let anchor = pick_state(&mut ch);
    let mut prev: Vec<State> = (0..SEQ_LEN).map(|_| pick_state(&mut ch)).collect();
    let mut s = trajectory(&t1, anchor, SEQ_LEN);
    let mut alpha = xi.apply(&s);
    let mut counts = [[0u32; STATES + 1]; STATES];
    let mut seen = [false; 256];
    seen[t1.rule_vector_code().expect("two nodes") as usize] = true;
    let mut out = Outcome { distinct: 1, fixed_point_free_steps: 0, full_at: None };

    for k in 2..=steps {
        let g = OutputDigraph::from_labels(&alpha)?;
        let h = split_branches(&g, &mut ch)?;
        let pseudo = complete_to_pseudo(&h, NODES, &mut ch)?;
        let t = relabel_to_vbn(&pseudo, &xi, &mut ch)?.0;

        if !v.cumulative {
            counts = [[0; STATES + 1]; STATES];
        }
        for (st, &l) in prev.iter().zip(&alpha) {
            counts[st.code()][l as usize] += 1;
        }
        let labels: Vec<u32> = counts
            .iter()
            .map(|row| {
                let m = *row[1..].iter().max().expect("nonempty");
                let ties: Vec<u32> = (1..=STATES as u32).filter(|&l| row[l as usize] == m).collect();
                ties[ch.pick(ties.len())]
            })
            .collect();
        xi = Labeling::new(NODES, labels)?;

        let tk = match strategy.draw(NODES, &xi, &mut ch)? {
            Some(p) if v.no_inverse => BooleanMatrix::from_successors(
                NODES,
                (0..STATES).map(|i| p.apply(t.successor_code(p.apply(i)))).collect(),
            )?,
            Some(p) => conjugate(&t, &p)?,
            None => t,
        };
        let next = trajectory(&tk, anchor, SEQ_LEN);
        prev = std::mem::replace(&mut s, next);
        alpha = xi.apply(&s);

        let c = tk.rule_vector_code().expect("two nodes") as usize;
        if !seen[c] {
            seen[c] = true;
            out.distinct += 1;
            if out.distinct == 256 {
                out.full_at = Some(k);
            }
        }
        if !tk.has_fixed_point() {
            out.fixed_point_free_steps += 1;
        }
    }
    Ok(out)
}

fn main() -> Result<()> {
    let mut v = Variant { cumulative: false, no_inverse: false };
    let mut nums = Vec::new();
    for a in std::env::args().skip(1) {
        match a.as_str() {
            "--cumulative" => v.cumulative = true,
            "--no-inverse" => v.no_inverse = true,
            n => nums.push(n.parse::<usize>().expect("trials and steps are integers")),
        }
    }
    let trials = nums.first().copied().unwrap_or(20);
    let steps = nums.get(1).copied().unwrap_or(10_000);
    println!("cumulative={} no_inverse={} trials={trials} steps={steps}", v.cumulative, v.no_inverse);

    for strategy in [
        PermutationStrategy::Type1,
        PermutationStrategy::Type2,
        PermutationStrategy::Type3,
        PermutationStrategy::Type4,
    ] {
        let mut covs = Vec::new();
        let mut fpf = 0;
        let mut fulls = Vec::new();
        for seed in 0..trials as u64 {
            let o = trial(strategy, v, seed, steps)?;
            covs.push(o.distinct);
            fpf += o.fixed_point_free_steps;
            fulls.extend(o.full_at);
        }
        covs.sort_unstable();
        let mean_full = if fulls.is_empty() {
            "-".to_string()
        } else {
            format!("{:.0}", fulls.iter().sum::<usize>() as f64 / fulls.len() as f64)
        };
        println!(
            "{strategy}: distinct min {} median {} max {}, full in {} (mean step {mean_full}), fixed-point-free steps {:.1}%",
            covs[0],
            covs[covs.len() / 2],
            covs[covs.len() - 1],
            fulls.len(),
            100.0 * fpf as f64 / (trials * (steps - 1)) as f64
        );
    }
    Ok(())
}
