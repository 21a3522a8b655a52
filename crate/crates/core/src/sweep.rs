//! Stimulus enumeration and parallel sweeps over a netlist's input space.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::trit::Trit;

/// Default number of stimuli a sweep may visit before it falls back to
/// sampling.
pub const DEFAULT_BUDGET: u64 = 2_000_000;
/// Seed used for sampled sweeps unless overridden.
pub const DEFAULT_SEED: u64 = 0x7e7a_2019;

const CHUNK: u64 = 4096;

/// The legal values of each primary input, in port order.
#[derive(Debug, Clone)]
pub struct StimulusSpace {
    choices: Vec<Vec<Trit>>,
}

impl StimulusSpace {
    pub fn new(choices: Vec<Vec<Trit>>) -> Self {
        debug_assert!(choices.iter().all(|c| !c.is_empty()));
        StimulusSpace { choices }
    }

    pub fn inputs(&self) -> usize {
        self.choices.len()
    }

    /// Number of distinct stimuli, `None` if it overflows `u128`.
    pub fn size(&self) -> Option<u128> {
        self.choices
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
    }

    /// Mixed-radix decode, input 0 varying fastest.
    pub fn decode(&self, mut index: u128, out: &mut [Trit]) {
        for (slot, choices) in out.iter_mut().zip(&self.choices) {
            let radix = choices.len() as u128;
            *slot = choices[(index % radix) as usize];
            index /= radix;
        }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R, out: &mut [Trit]) {
        for (slot, choices) in out.iter_mut().zip(&self.choices) {
            *slot = choices[rng.gen_range(0..choices.len())];
        }
    }
}

/// How a sweep walks the stimulus space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub space: u128,
    pub cases: u64,
    pub exhaustive: bool,
    pub seed: u64,
}

impl SweepPlan {
    /// Exhaustive when the space fits in `budget`, otherwise `budget`
    /// uniformly drawn samples.
    pub fn new(space: &StimulusSpace, budget: u64, seed: u64) -> Self {
        let size = space.size().unwrap_or(u128::MAX);
        if size <= budget as u128 {
            SweepPlan {
                space: size,
                cases: size as u64,
                exhaustive: true,
                seed,
            }
        } else {
            SweepPlan {
                space: size,
                cases: budget,
                exhaustive: false,
                seed,
            }
        }
    }
}

/// Visits every stimulus of `plan` in parallel.
///
/// Work is split into fixed chunks; sampled chunks draw from their own
/// ChaCha stream, so results depend only on the seed. `merge` must be
/// associative; partial results are combined in stimulus order.
pub fn run<A, I, V, M>(space: &StimulusSpace, plan: &SweepPlan, init: I, visit: V, merge: M) -> A
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &[Trit]) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    let chunks = plan.cases.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut acc = init();
            let mut stim = vec![Trit::ZERO; space.inputs()];
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(plan.cases);
            if plan.exhaustive {
                for k in start..end {
                    space.decode(k as u128, &mut stim);
                    visit(&mut acc, &stim);
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
                rng.set_stream(chunk);
                for _ in start..end {
                    space.sample(&mut rng, &mut stim);
                    visit(&mut acc, &stim);
                }
            }
            acc
        })
        .reduce(&init, &merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> StimulusSpace {
        StimulusSpace::new(vec![Trit::ALL.to_vec(), vec![Trit::ZERO, Trit::ONE], Trit::ALL.to_vec()])
    }

    #[test]
    fn decode_covers_space_once() {
        let s = space();
        assert_eq!(s.size(), Some(18));
        let mut seen = std::collections::HashSet::new();
        let mut buf = [Trit::ZERO; 3];
        for k in 0..18 {
            s.decode(k, &mut buf);
            assert!(buf[1] != Trit::TWO);
            seen.insert(buf);
        }
        assert_eq!(seen.len(), 18);
    }

    #[test]
    fn plan_switches_to_sampling() {
        let s = space();
        assert!(SweepPlan::new(&s, 18, 1).exhaustive);
        let p = SweepPlan::new(&s, 10, 1);
        assert!(!p.exhaustive);
        assert_eq!(p.cases, 10);
    }

    #[test]
    fn sampled_runs_are_reproducible() {
        let s = StimulusSpace::new(vec![Trit::ALL.to_vec(); 20]);
        let plan = SweepPlan::new(&s, 10_000, 42);
        let collect = || {
            run(
                &s,
                &plan,
                Vec::new,
                |acc: &mut Vec<Vec<Trit>>, st| acc.push(st.to_vec()),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )
        };
        let first = collect();
        assert_eq!(first.len(), 10_000);
        assert_eq!(first, collect());
    }
}
