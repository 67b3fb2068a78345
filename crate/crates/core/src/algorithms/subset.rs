use crate::error::Result;
use crate::graph::EdgeSet;
use crate::meek::InterventionSet;
use crate::oracle::InterventionOracle;

use super::{
    check_targets, components_with_targets, meek_separator_with, Picker, RandomPicker, SearchOptions, Transcript,
};

/// Adaptively intervenes until every target edge is oriented, splitting each
/// chain component that still holds a target with a Meek separator.
pub fn subset_search(o: &mut InterventionOracle, targets: &EdgeSet, seed: u64) -> Result<InterventionSet> {
    subset_search_with(
        o,
        targets,
        &mut RandomPicker::new(seed),
        SearchOptions::default(),
        &mut Transcript::default(),
    )
}

pub fn subset_search_with(
    o: &mut InterventionOracle,
    targets: &EdgeSet,
    picker: &mut dyn Picker,
    opts: SearchOptions,
    transcript: &mut Transcript,
) -> Result<InterventionSet> {
    check_targets(o, targets)?;
    let mut performed = InterventionSet::new();
    let done = |o: &InterventionOracle| o.all_oriented(targets);
    let stop: Option<&dyn Fn(&InterventionOracle) -> bool> = if opts.early_exit { Some(&done) } else { None };

    while !o.all_oriented(targets) {
        for comp in components_with_targets(o.revealed(), targets) {
            let r = meek_separator_with(o, &comp, picker, stop, transcript)?;
            for v in r.intervened {
                performed.push_atomic(v);
            }
            if r.stopped {
                return Ok(performed);
            }
        }
    }
    Ok(performed)
}
