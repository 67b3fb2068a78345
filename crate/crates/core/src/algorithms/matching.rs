use crate::error::{Error, Result};
use crate::graph::{Pdag, VertexId};
use crate::meek::InterventionSet;
use crate::oracle::{mismatch_set, InterventionOracle, MeanOracle, ShiftAssignment};

use super::{meek_separator_with, Branch, Picker, RandomPicker, SearchOptions, Transcript};

/// How the source search splits a chain component holding several
/// candidates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceStrategy {
    MeekSeparator,
    /// One uniformly sampled vertex of the component per step.
    Random,
}

/// Members of `t` whose every skeleton edge to another member is oriented
/// away from them in `revealed`.
pub fn identified_sources(revealed: &Pdag, t: &[VertexId]) -> Vec<VertexId> {
    let mut in_t = vec![false; revealed.n()];
    for &v in t {
        in_t[v] = true;
    }
    t.iter()
        .copied()
        .filter(|&v| {
            revealed
                .neighbors(v)
                .iter()
                .all(|&w| !in_t[w] || revealed.has_arc(v, w))
        })
        .collect()
}

/// Finds a vertex of `u_set` with no ancestor in `u_set`.
pub fn find_source(o: &mut InterventionOracle, u_set: &[VertexId], seed: u64) -> Result<(VertexId, InterventionSet)> {
    let (s, iset) = find_source_with(
        o,
        u_set,
        SourceStrategy::MeekSeparator,
        &mut RandomPicker::new(seed),
        None,
        &mut Transcript::default(),
    )?;
    Ok((s.expect("no stop predicate"), iset))
}

/// [`find_source`] with explicit strategy, picker and early-exit predicate.
/// Returns `None` only when `stop` fired.
pub fn find_source_with(
    o: &mut InterventionOracle,
    u_set: &[VertexId],
    strategy: SourceStrategy,
    picker: &mut dyn Picker,
    stop: Option<&dyn Fn(&InterventionOracle) -> bool>,
    transcript: &mut Transcript,
) -> Result<(Option<VertexId>, InterventionSet)> {
    if u_set.is_empty() {
        return Err(Error::Precondition("source search needs a non-empty vertex set".into()));
    }
    let n = o.n();
    let mut in_u = vec![false; n];
    for &v in u_set {
        if v >= n {
            return Err(Error::VertexOutOfRange { v, n });
        }
        in_u[v] = true;
    }
    let mut performed = InterventionSet::new();
    let mut scope = vec![true; n];

    loop {
        let revealed = o.revealed();
        let comps = revealed.chain_components();
        let index = revealed.component_index();
        let candidates: Vec<usize> = (0..comps.len())
            .filter(|&c| scope[comps[c][0]] && comps[c].iter().any(|&v| in_u[v]))
            .collect();

        // condensation arcs between chain components
        let mut succ = vec![Vec::new(); comps.len()];
        for (u, v) in revealed.arcs() {
            succ[index[u]].push(index[v]);
        }
        let mut reached = vec![false; comps.len()];
        for &c in &candidates {
            let mut stack = succ[c].clone();
            let mut seen = vec![false; comps.len()];
            while let Some(d) = stack.pop() {
                if !std::mem::replace(&mut seen[d], true) {
                    reached[d] = true;
                    stack.extend(&succ[d]);
                }
            }
        }
        let h = *candidates
            .iter()
            .find(|&&c| !reached[c])
            .expect("the condensation is acyclic");
        let comp = comps[h].clone();
        let hits: Vec<VertexId> = comp.iter().copied().filter(|&v| in_u[v]).collect();
        if hits.len() == 1 {
            return Ok((Some(hits[0]), performed));
        }
        scope = vec![false; n];
        for &v in &comp {
            scope[v] = true;
        }

        match strategy {
            SourceStrategy::MeekSeparator => {
                let r = meek_separator_with(o, &comp, picker, stop, transcript)?;
                for v in r.intervened {
                    performed.push_atomic(v);
                }
                if r.stopped {
                    return Ok((None, performed));
                }
            }
            SourceStrategy::Random => {
                let v = picker.pick(&comp);
                o.intervene(v)?;
                performed.push_atomic(v);
                let largest = o
                    .revealed()
                    .chain_components()
                    .iter()
                    .filter(|c| scope[c[0]])
                    .map(Vec::len)
                    .max()
                    .unwrap_or(0);
                let stopped = stop.is_some_and(|f| f(o));
                transcript.push(v, largest, if stopped { Branch::Stopped } else { Branch::Random });
                if stopped {
                    return Ok((None, performed));
                }
            }
        }
    }
}

/// Recovers the shift intervention that moves the observational means to
/// `target`, using the Meek separator source search.
pub fn causal_mean_match(
    o: &mut InterventionOracle,
    sem: &impl MeanOracle,
    target: &[f64],
    seed: u64,
) -> Result<ShiftAssignment> {
    causal_mean_match_with(
        o,
        sem,
        target,
        SourceStrategy::MeekSeparator,
        &mut RandomPicker::new(seed),
        SearchOptions::default(),
        &mut Transcript::default(),
    )
}

/// Repeatedly shifts the identified sources of the mismatch set. With
/// `early_exit` the source search stops as soon as any source is identified.
pub fn causal_mean_match_with(
    o: &mut InterventionOracle,
    sem: &impl MeanOracle,
    target: &[f64],
    strategy: SourceStrategy,
    picker: &mut dyn Picker,
    opts: SearchOptions,
    transcript: &mut Transcript,
) -> Result<ShiftAssignment> {
    let n = sem.n();
    if target.len() != n || o.n() != n {
        return Err(Error::Precondition(format!(
            "target has {} entries, model {n}, oracle {}",
            target.len(),
            o.n()
        )));
    }
    let mut current = ShiftAssignment::new();
    for _ in 0..=n {
        let t = mismatch_set(sem, &current, target, opts.mean_tol);
        if t.is_empty() {
            return Ok(current);
        }
        let mut sources = identified_sources(o.revealed(), &t);
        if sources.is_empty() {
            let ready = |o: &InterventionOracle| !identified_sources(o.revealed(), &t).is_empty();
            let stop: Option<&dyn Fn(&InterventionOracle) -> bool> = if opts.early_exit { Some(&ready) } else { None };
            find_source_with(o, &t, strategy, picker, stop, transcript)?;
            sources = identified_sources(o.revealed(), &t);
        }
        if sources.is_empty() {
            return Err(Error::NotRealizable(format!(
                "no identifiable source among {} mismatched vertices",
                t.len()
            )));
        }
        let mu = sem.mean(&current);
        for s in sources {
            let a = current.get(s).unwrap_or(0.0) + target[s] - mu[s];
            current.insert(s, a)?;
        }
    }
    Err(Error::NotRealizable(format!(
        "mismatch persists after {} rounds",
        n + 1
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Dag;
    use crate::oracle::{mean_vector, ShiftSem};

    #[test]
    fn singleton_set_is_free() {
        let mut o = InterventionOracle::new(Dag::complete(4));
        let (s, i) = find_source(&mut o, &[2], 0).unwrap();
        assert_eq!((s, i.len(), o.count()), (2, 0, 0));
    }

    #[test]
    fn d4_source_of_the_tail() {
        for seed in 0..20 {
            let mut o = InterventionOracle::new(Dag::complete(4));
            let (s, _) = find_source(&mut o, &[1, 2, 3], seed).unwrap();
            assert_eq!(s, 1);
        }
    }

    #[test]
    fn random_strategy_finds_the_same_source() {
        for seed in 0..20 {
            let mut o = InterventionOracle::new(Dag::complete(5));
            let (s, _) = find_source_with(
                &mut o,
                &[1, 3, 4],
                SourceStrategy::Random,
                &mut RandomPicker::new(seed),
                None,
                &mut Transcript::default(),
            )
            .unwrap();
            assert_eq!(s, Some(1));
        }
    }

    #[test]
    fn empty_set_is_rejected() {
        let mut o = InterventionOracle::new(Dag::complete(3));
        assert!(find_source(&mut o, &[], 0).is_err());
    }

    #[test]
    fn chain_recovery() {
        let dag = Dag::new(3, [(0, 1), (1, 2)]).unwrap();
        let sem = ShiftSem::new(dag.clone(), [((0, 1), 1.0), ((1, 2), 1.0)], vec![0.0; 3]).unwrap();
        let mut o = InterventionOracle::new(dag);
        let got = causal_mean_match(&mut o, &sem, &[1.0, 1.0, 1.0], 4).unwrap();
        assert_eq!(got.iter().collect::<Vec<_>>(), vec![(0, 1.0)]);
    }

    #[test]
    fn observational_target_needs_nothing() {
        let dag = Dag::complete(4);
        let w = dag.arcs().into_iter().map(|e| (e, 0.5));
        let sem = ShiftSem::new(dag.clone(), w, vec![1.0; 4]).unwrap();
        let target = mean_vector(&sem, &ShiftAssignment::new());
        let mut o = InterventionOracle::new(dag);
        assert!(causal_mean_match(&mut o, &sem, &target, 0).unwrap().is_empty());
        assert_eq!(o.count(), 0);
    }
}
