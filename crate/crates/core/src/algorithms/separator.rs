use crate::chordal::{clique_separator, Fraction};
use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::oracle::InterventionOracle;

use super::{local_essential, Branch, Picker, RandomPicker, Transcript};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeekSeparatorResult {
    /// At most two vertices whose atomic interventions halve the component.
    pub separator: Vec<VertexId>,
    /// Every vertex queried, in order. Contains the separator.
    pub intervened: Vec<VertexId>,
    /// Chain component sizes of the input component after intervening on the
    /// separator alone, ordered by minimum vertex.
    pub component_sizes: Vec<usize>,
    /// Set when an early-exit predicate stopped the search; the separator is
    /// then empty.
    pub stopped: bool,
}

/// Finds a 1/2-Meek separator of a chain component with a uniformly random
/// binary search over a balanced clique separator.
pub fn meek_separator(o: &mut InterventionOracle, component: &[VertexId], seed: u64) -> Result<MeekSeparatorResult> {
    meek_separator_with(
        o,
        component,
        &mut RandomPicker::new(seed),
        None,
        &mut Transcript::default(),
    )
}

/// [`meek_separator`] with an explicit picker, an optional early-exit
/// predicate checked after every intervention, and a transcript sink.
pub fn meek_separator_with(
    o: &mut InterventionOracle,
    component: &[VertexId],
    picker: &mut dyn Picker,
    stop: Option<&dyn Fn(&InterventionOracle) -> bool>,
    transcript: &mut Transcript,
) -> Result<MeekSeparatorResult> {
    let mut comp = component.to_vec();
    comp.sort_unstable();
    if comp.len() < 2 {
        return Err(Error::Precondition("component needs at least two vertices".into()));
    }
    if !o.revealed().chain_components().contains(&comp) {
        return Err(Error::Precondition(format!(
            "{comp:?} is not a chain component of the revealed graph"
        )));
    }
    let n = comp.len();
    let (local, _) = o.revealed().induced_subgraph(&comp);
    let skeleton = local.skeleton();
    let clique = clique_separator(&skeleton, Fraction::HALF)?.clique;

    let mut remaining = clique.clone();
    let mut above: Option<usize> = None; // u: largest component below it
    let mut below: Option<usize> = None; // x: largest component above it
    let mut intervened = Vec::new();

    while !remaining.is_empty() {
        let globals: Vec<VertexId> = remaining.iter().map(|&i| comp[i]).collect();
        let pick = picker.pick(&globals);
        let ui = remaining[globals
            .iter()
            .position(|&g| g == pick)
            .expect("picker returns a candidate")];
        o.intervene(comp[ui])?;
        intervened.push(comp[ui]);

        let e = local_essential(o.revealed(), &comp, &skeleton, &[ui]);
        let comps = e.chain_components();
        let largest = comps
            .iter()
            .max_by(|a, b| a.len().cmp(&b.len()).then(b[0].cmp(&a[0])))
            .unwrap();

        if stop.is_some_and(|f| f(o)) {
            transcript.push(comp[ui], largest.len(), Branch::Stopped);
            return Ok(MeekSeparatorResult {
                separator: Vec::new(),
                intervened,
                component_sizes: Vec::new(),
                stopped: true,
            });
        }
        if Fraction::HALF.admits(largest.len(), n) {
            transcript.push(comp[ui], largest.len(), Branch::Separator);
            let component_sizes = comps.iter().map(Vec::len).collect();
            return Ok(MeekSeparatorResult {
                separator: vec![comp[ui]],
                intervened,
                component_sizes,
                stopped: false,
            });
        }
        let reach = e.directed_reach(ui);
        if largest.iter().any(|&h| reach[h]) {
            transcript.push(comp[ui], largest.len(), Branch::Descendants);
            remaining.retain(|&k| e.has_arc(ui, k));
            above = Some(ui);
        } else {
            transcript.push(comp[ui], largest.len(), Branch::Ancestors);
            remaining.retain(|&k| e.has_arc(k, ui));
            below = Some(ui);
        }
    }

    let sep_local: Vec<usize> = above.into_iter().chain(below).collect();
    let e = local_essential(o.revealed(), &comp, &skeleton, &sep_local);
    let component_sizes = e.chain_components().iter().map(Vec::len).collect();
    Ok(MeekSeparatorResult {
        separator: sep_local.iter().map(|&i| comp[i]).collect(),
        intervened,
        component_sizes,
        stopped: false,
    })
}
