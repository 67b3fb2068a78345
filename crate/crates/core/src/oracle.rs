//! Simulated adaptive-intervention environment and the linear mean model used
//! for causal mean matching.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::{Dag, Pdag, VertexId};
use crate::meek::{essential_graph, refine, InterventionSet};

/// Default tolerance when comparing noiseless means.
pub const MEAN_TOL: f64 = 1e-9;

/// Holds a hidden DAG and answers atomic interventions with the updated
/// interventional essential graph. Algorithms only see [`revealed`],
/// [`count`] and [`intervene`].
///
/// [`revealed`]: InterventionOracle::revealed
/// [`count`]: InterventionOracle::count
/// [`intervene`]: InterventionOracle::intervene
#[derive(Debug, Clone)]
pub struct InterventionOracle {
    hidden: Dag,
    essential: Pdag,
    performed: InterventionSet,
    revealed: Pdag,
    count: usize,
}

impl InterventionOracle {
    pub fn new(hidden: Dag) -> Self {
        let essential = essential_graph(&hidden);
        Self {
            revealed: essential.clone(),
            essential,
            hidden,
            performed: InterventionSet::new(),
            count: 0,
        }
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    /// Current `E_I(G)` for the performed interventions `I`.
    pub fn revealed(&self) -> &Pdag {
        &self.revealed
    }

    /// Number of interventions charged so far, repeats included.
    pub fn count(&self) -> usize {
        self.count
    }

    pub fn performed(&self) -> &InterventionSet {
        &self.performed
    }

    /// Intervenes on `v` and returns the refreshed essential graph.
    pub fn intervene(&mut self, v: VertexId) -> Result<&Pdag> {
        if v >= self.n() {
            return Err(Error::VertexOutOfRange { v, n: self.n() });
        }
        self.performed.push_atomic(v);
        self.count += 1;
        self.revealed = refine(&self.hidden, &self.essential, &self.performed);
        Ok(&self.revealed)
    }

    /// True when every edge of `targets` is oriented in the revealed graph.
    pub fn all_oriented(&self, targets: &crate::graph::EdgeSet) -> bool {
        targets.iter().all(|(u, v)| !self.revealed.is_undirected(u, v))
    }
}

/// Atomic shift interventions: target vertex to additive shift.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShiftAssignment {
    shifts: BTreeMap<VertexId, f64>,
}

impl ShiftAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: VertexId, shift: f64) -> Result<()> {
        if !shift.is_finite() {
            return Err(Error::Precondition(format!("shift for vertex {v} is not finite")));
        }
        self.shifts.insert(v, shift);
        Ok(())
    }

    pub fn get(&self, v: VertexId) -> Option<f64> {
        self.shifts.get(&v).copied()
    }

    pub fn targets(&self) -> Vec<VertexId> {
        self.shifts.keys().copied().collect()
    }

    pub fn len(&self) -> usize {
        self.shifts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shifts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, f64)> + '_ {
        self.shifts.iter().map(|(&v, &a)| (v, a))
    }
}

impl FromIterator<(VertexId, f64)> for ShiftAssignment {
    fn from_iter<I: IntoIterator<Item = (VertexId, f64)>>(iter: I) -> Self {
        Self {
            shifts: iter.into_iter().collect(),
        }
    }
}

/// Linear structural equation model over a DAG: every vertex mean is its
/// intercept plus the weighted means of its parents.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftSem {
    dag: Dag,
    // aligned with dag.parents(v)
    parent_weights: Vec<Vec<f64>>,
    intercepts: Vec<f64>,
}

impl ShiftSem {
    pub fn new(
        dag: Dag,
        weights: impl IntoIterator<Item = ((VertexId, VertexId), f64)>,
        intercepts: Vec<f64>,
    ) -> Result<Self> {
        let n = dag.n();
        if intercepts.len() != n {
            return Err(Error::Precondition(format!(
                "expected {n} intercepts, got {}",
                intercepts.len()
            )));
        }
        if intercepts.iter().any(|c| !c.is_finite()) {
            return Err(Error::Precondition("intercepts must be finite".into()));
        }
        let mut parent_weights: Vec<Vec<f64>> = (0..n).map(|v| vec![f64::NAN; dag.parents(v).len()]).collect();
        for ((u, v), w) in weights {
            if u >= n || v >= n || !dag.has_arc(u, v) {
                return Err(Error::MissingArc(u, v));
            }
            if !w.is_finite() {
                return Err(Error::Precondition(format!("weight on {u} -> {v} is not finite")));
            }
            let i = dag.parents(v).binary_search(&u).unwrap();
            parent_weights[v][i] = w;
        }
        for (v, weights) in parent_weights.iter().enumerate() {
            if let Some(i) = weights.iter().position(|w| w.is_nan()) {
                return Err(Error::Precondition(format!(
                    "missing weight on {} -> {v}",
                    dag.parents(v)[i]
                )));
            }
        }
        Ok(Self {
            dag,
            parent_weights,
            intercepts,
        })
    }

    pub fn dag(&self) -> &Dag {
        &self.dag
    }

    pub fn intercepts(&self) -> &[f64] {
        &self.intercepts
    }

    pub fn weight(&self, u: VertexId, v: VertexId) -> Option<f64> {
        let i = self.dag.parents(v).binary_search(&u).ok()?;
        Some(self.parent_weights[v][i])
    }

    /// Arc weights in lexicographic arc order.
    pub fn weights(&self) -> Vec<((VertexId, VertexId), f64)> {
        self.dag
            .arcs()
            .into_iter()
            .map(|(u, v)| ((u, v), self.weight(u, v).unwrap()))
            .collect()
    }
}

/// Query access to interventional means; all that causal mean matching may
/// learn about the model.
pub trait MeanOracle {
    fn n(&self) -> usize;
    fn mean(&self, shifts: &ShiftAssignment) -> Vec<f64>;
}

impl MeanOracle for ShiftSem {
    fn n(&self) -> usize {
        self.dag.n()
    }

    fn mean(&self, shifts: &ShiftAssignment) -> Vec<f64> {
        mean_vector(self, shifts)
    }
}

/// Noiseless mean under `shifts`, propagated in topological order.
pub fn mean_vector(sem: &ShiftSem, shifts: &ShiftAssignment) -> Vec<f64> {
    let mut mu = vec![0.0; sem.dag.n()];
    for &v in sem.dag.topological_order() {
        let inflow: f64 = sem
            .dag
            .parents(v)
            .iter()
            .zip(&sem.parent_weights[v])
            .map(|(&u, &w)| w * mu[u])
            .sum();
        mu[v] = sem.intercepts[v] + shifts.get(v).unwrap_or(0.0) + inflow;
    }
    mu
}

/// Coordinates where the mean under `current` misses `target` by more than `tol`.
pub fn mismatch_set(sem: &impl MeanOracle, current: &ShiftAssignment, target: &[f64], tol: f64) -> Vec<VertexId> {
    let mu = sem.mean(current);
    mu.iter()
        .zip(target)
        .enumerate()
        .filter(|(_, (m, t))| (*m - *t).abs() > tol)
        .map(|(i, _)| i)
        .collect()
}
