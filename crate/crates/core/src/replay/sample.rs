//! Seeded sampling of parameter points that satisfy a scenario's
//! preconditions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::rational::Rational;

use super::catalog::Scenario;
use super::expr::Env;
use super::verify::{bind, ReplayError};

/// Largest denominator of a sampled parameter.
pub const MAX_DENOMINATOR: i128 = 1000;

const MAX_ATTEMPTS: usize = 4_000_000;

fn stable_hash(text: &str) -> u64 {
    text.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

/// `count` distinct parameter points for `scenario`, each coordinate a
/// fraction with denominator at most [`MAX_DENOMINATOR`] inside its open
/// range, all preconditions holding. Deterministic in `seed`.
pub fn sample_params(scenario: &Scenario, seed: u64, count: usize) -> Result<Vec<Env>, ReplayError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ stable_hash(&scenario.id));
    let mut out: Vec<Env> = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > MAX_ATTEMPTS {
            return Err(ReplayError::NoSample(scenario.id.clone()));
        }
        let mut env = Env::new();
        for p in &scenario.params {
            let v = loop {
                let q = rng.gen_range(2..=MAX_DENOMINATOR);
                let v = Rational::new(rng.gen_range(1..q), q);
                if v > p.lo && v < p.hi {
                    break v;
                }
            };
            env.insert(p.name.clone(), v);
        }
        if bind(scenario, &env).is_ok() && !out.contains(&env) {
            out.push(env);
        }
    }
    Ok(out)
}
