//! Sources of random decisions.
//!
//! Every random choice in the pipeline reduces to "pick one of `n` options".
//! Routing them through one trait lets a seeded RNG drive simulations and a
//! scripted list of indices replay a hand-worked example.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{DbnError, Result};

pub trait Chooser {
    /// Uniform index in `0..n`. Callers never pass `n == 0`.
    fn choose_index(&mut self, n: usize) -> usize;

    /// Like [`Chooser::choose_index`], but a choice among one option is
    /// forced and consumes nothing.
    fn pick(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        if n == 1 {
            0
        } else {
            self.choose_index(n)
        }
    }

    /// Moves a uniformly chosen injective selection into the first `take`
    /// slots of `items` (partial Fisher-Yates). At each position `j` the
    /// decision is an index into the not-yet-placed tail `items[j..]`.
    fn partial_shuffle<T>(&mut self, items: &mut [T], take: usize) {
        let n = items.len();
        for j in 0..take.min(n) {
            let offset = self.pick(n - j);
            items.swap(j, j + offset);
        }
    }

    fn shuffle<T>(&mut self, items: &mut [T]) {
        let n = items.len();
        self.partial_shuffle(items, n);
    }
}

/// Draws decisions from any [`rand::Rng`].
#[derive(Debug, Clone)]
pub struct RngChooser<R>(pub R);

impl<R: Rng> Chooser for RngChooser<R> {
    fn choose_index(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }
}

/// Replays a fixed list of decisions.
///
/// Running out of decisions, or a decision that is out of range, is
/// recorded rather than panicking; [`ScriptedChooser::finish`] reports it.
#[derive(Debug, Clone, Default)]
pub struct ScriptedChooser {
    script: VecDeque<usize>,
    consumed: usize,
    fault: Option<String>,
}

impl ScriptedChooser {
    pub fn new(script: impl IntoIterator<Item = usize>) -> Self {
        ScriptedChooser {
            script: script.into_iter().collect(),
            consumed: 0,
            fault: None,
        }
    }

    pub fn remaining(&self) -> usize {
        self.script.len()
    }

    /// Ok if every decision was in range and the script is used up.
    pub fn finish(&self) -> Result<()> {
        if let Some(fault) = &self.fault {
            return Err(DbnError::Script(fault.clone()));
        }
        if !self.script.is_empty() {
            return Err(DbnError::Script(format!(
                "{} decisions left unused",
                self.script.len()
            )));
        }
        Ok(())
    }
}

impl Chooser for ScriptedChooser {
    fn choose_index(&mut self, n: usize) -> usize {
        let at = self.consumed;
        self.consumed += 1;
        match self.script.pop_front() {
            Some(i) if i < n => i,
            Some(i) => {
                self.fault.get_or_insert(format!(
                    "decision #{at} is {i} but only {n} options exist"
                ));
                0
            }
            None => {
                self.fault
                    .get_or_insert(format!("script exhausted at decision #{at} (n = {n})"));
                0
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_option_consumes_nothing() {
        let mut c = ScriptedChooser::new([1]);
        assert_eq!(c.pick(1), 0);
        assert_eq!(c.pick(3), 1);
        assert!(c.finish().is_ok());
    }

    #[test]
    fn out_of_range_and_exhaustion_are_reported() {
        let mut c = ScriptedChooser::new([5]);
        assert_eq!(c.pick(2), 0);
        assert!(c.finish().is_err());

        let mut c = ScriptedChooser::new([]);
        c.pick(2);
        assert!(c.finish().unwrap_err().to_string().contains("exhausted"));
    }

    #[test]
    fn leftover_script_is_an_error() {
        let c = ScriptedChooser::new([0, 1]);
        assert!(c.finish().is_err());
    }

    #[test]
    fn partial_shuffle_is_uniform_over_injections() {
        // 4 items, take 2: 12 ordered pairs, each with probability 1/12.
        let mut chooser = RngChooser(ChaCha8Rng::seed_from_u64(7));
        let mut counts = std::collections::HashMap::new();
        let draws = 120_000;
        for _ in 0..draws {
            let mut items = [0, 1, 2, 3];
            chooser.partial_shuffle(&mut items, 2);
            *counts.entry((items[0], items[1])).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 12);
        let expected = draws as f64 / 12.0;
        let sigma = (expected * (1.0 - 1.0 / 12.0)).sqrt();
        for &c in counts.values() {
            assert!((c as f64 - expected).abs() < 4.0 * sigma, "{counts:?}");
        }
    }
}
