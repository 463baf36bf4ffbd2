use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Clause, Literal, SatError, SatInstance, DEFAULT_EXHAUSTIVE_LIMIT};

/// Clause-to-variable ratio near the random 3-SAT threshold.
pub const CLAUSE_RATIO: f64 = 4.267;

/// `round(4.267 n)`, rounding half away from zero.
pub fn clause_count_for(n: usize) -> usize {
    (CLAUSE_RATIO * n as f64).round() as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub exhaustive_limit: usize,
    /// Maximum number of whole-instance draws.
    pub rejection_cap: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT,
            rejection_cap: 1_000_000,
        }
    }
}

/// Draws a canonical random instance. With `target_ns` set, whole instances
/// are redrawn until the exhaustive solution count matches.
pub fn generate_instance(
    n: usize,
    seed: u64,
    target_ns: Option<u64>,
    config: &GenConfig,
) -> Result<SatInstance, SatError> {
    if n < 4 {
        return Err(SatError::TooFewVariables(n));
    }
    if target_ns.is_some() && n > config.exhaustive_limit {
        return Err(SatError::ExhaustiveLimit {
            n,
            limit: config.exhaustive_limit,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_clauses = clause_count_for(n);
    for attempt in 1..=config.rejection_cap {
        let Some(clauses) = draw_clauses(n, n_clauses, &mut rng) else {
            continue;
        };
        let inst = SatInstance::new(n, clauses)?.with_seed(Some(seed));
        debug_assert!(inst.is_canonical());
        match target_ns {
            None => return Ok(inst),
            Some(target) => {
                let count = inst.count_solutions(0, config.exhaustive_limit)?.count;
                if count == target {
                    return Ok(inst.with_solution_count(Some(count)));
                }
            }
        }
        if attempt == config.rejection_cap {
            break;
        }
    }
    Err(SatError::GenerationFailed {
        attempts: config.rejection_cap,
        target: target_ns,
    })
}

/// One candidate draw: distinct random clauses in a shuffled order, or
/// `None` when some variable misses a polarity.
fn draw_clauses(n: usize, n_clauses: usize, rng: &mut ChaCha8Rng) -> Option<Vec<Clause>> {
    let mut seen = std::collections::HashSet::with_capacity(n_clauses);
    let mut clauses = Vec::with_capacity(n_clauses);
    while clauses.len() < n_clauses {
        let mut lits: Vec<Literal> = index::sample(rng, n, 3)
            .into_iter()
            .map(|var| Literal {
                var,
                negated: rng.random::<bool>(),
            })
            .collect();
        lits.sort_unstable();
        if seen.insert(lits.clone()) {
            clauses.push(Clause::new(lits));
        }
    }

    let mut pos = vec![false; n];
    let mut neg = vec![false; n];
    for l in clauses.iter().flat_map(|c| &c.literals) {
        if l.negated {
            neg[l.var] = true;
        } else {
            pos[l.var] = true;
        }
    }
    if !pos.iter().zip(&neg).all(|(p, q)| *p && *q) {
        return None;
    }
    clauses.shuffle(rng);
    Some(clauses)
}
