use rand::Rng as _;

use crate::error::Result;
use crate::graph::{EdgeSet, VertexId};
use crate::meek::InterventionSet;
use crate::oracle::InterventionOracle;
use crate::seed;

use super::{check_targets, components_with_targets, Branch, Transcript};

/// Intervenes on uniformly sampled, not yet intervened vertices of the chain
/// components that still hold an unoriented target, until none remain.
pub fn random_baseline(o: &mut InterventionOracle, targets: &EdgeSet, seed: u64) -> Result<InterventionSet> {
    random_baseline_with(o, targets, seed, &mut Transcript::default())
}

pub fn random_baseline_with(
    o: &mut InterventionOracle,
    targets: &EdgeSet,
    seed: u64,
    transcript: &mut Transcript,
) -> Result<InterventionSet> {
    check_targets(o, targets)?;
    let mut rng = seed::rng(seed);
    let mut performed = InterventionSet::new();
    let mut used = vec![false; o.n()];
    loop {
        let pool: Vec<VertexId> = components_with_targets(o.revealed(), targets)
            .into_iter()
            .flatten()
            .filter(|&v| !used[v])
            .collect();
        if pool.is_empty() {
            return Ok(performed);
        }
        let v = pool[rng.random_range(0..pool.len())];
        used[v] = true;
        o.intervene(v)?;
        performed.push_atomic(v);
        let largest = components_with_targets(o.revealed(), targets)
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0);
        transcript.push(v, largest, Branch::Random);
    }
}
