//! Reduction of invariant checking to classical reachability.
//!
//! When no action has a degenerate spectrum, every eigenstate of every
//! action lies either in the reachable subspace or in its ortho-complement.
//! Pooling the eigenstates of all actions as classical states, connecting
//! nonorthogonal pairs, and marking those nonorthogonal to the initial
//! subspace as initial yields a transition system whose reachable states
//! span exactly the reachable subspace; the invariant then reduces to a
//! per-state satisfaction check over that finite graph.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::complexla::{dot, eig_unitary, is_degenerate, orthonormalize, CVector, Tolerances};
use crate::error::{Error, Result};
use crate::invcheck::{CheckKind, CheckReport};
use crate::props::PropositionSet;
use crate::qautomaton::QuantumAutomaton;
use crate::subspace::Subspace;

/// The classical transition system over pooled eigenstates: a single silent
/// action, transitions between nonorthogonal states.
#[derive(Clone, Debug)]
pub struct ClassicalTS {
    states: Vec<(String, CVector)>,
    transitions: Vec<(usize, usize)>,
    initials: Vec<usize>,
}

impl ClassicalTS {
    pub fn states(&self) -> &[(String, CVector)] {
        &self.states
    }

    pub fn transitions(&self) -> &[(usize, usize)] {
        &self.transitions
    }

    pub fn initials(&self) -> &[usize] {
        &self.initials
    }

    /// Reachable state indices in breadth-first discovery order, with the
    /// predecessor of each (for counterexample chains).
    pub fn reachable(&self) -> Vec<(usize, Option<usize>)> {
        let n = self.states.len();
        let mut seen = alloc::vec![false; n];
        let mut order: Vec<(usize, Option<usize>)> = Vec::new();
        let mut queue: Vec<(usize, Option<usize>)> =
            self.initials.iter().map(|&i| (i, None)).collect();
        let mut head = 0;
        for &(i, _) in &queue {
            seen[i] = true;
        }
        while head < queue.len() {
            let (cur, parent) = queue[head];
            head += 1;
            order.push((cur, parent));
            for &(from, to) in &self.transitions {
                if from == cur && !seen[to] {
                    seen[to] = true;
                    queue.push((to, Some(cur)));
                }
            }
        }
        order
    }
}

/// Builds the transition system from the pooled eigenstates of every
/// action. Fails with [`Error::DegenerateSpectrum`] if some action has two
/// eigenvalues closer than the degeneracy gap.
pub fn build_ts(automaton: &QuantumAutomaton, tol: &Tolerances) -> Result<ClassicalTS> {
    let mut states: Vec<(String, CVector)> = Vec::new();
    for (name, u) in automaton.actions() {
        let pairs = eig_unitary(u, tol)?;
        if is_degenerate(&pairs, tol) {
            return Err(Error::DegenerateSpectrum(name.clone()));
        }
        for (k, (_, v)) in pairs.into_iter().enumerate() {
            // Eigenstates of different actions on the same ray are pooled.
            let duplicate = states
                .iter()
                .any(|(_, w)| dot(w, &v).norm() > 1.0 - 1e-9);
            if !duplicate {
                states.push((format!("{name}:{k}"), v));
            }
        }
    }
    let mut transitions = Vec::new();
    for i in 0..states.len() {
        for j in 0..states.len() {
            if dot(&states[i].1, &states[j].1).norm() > tol.overlap_eps {
                transitions.push((i, j));
            }
        }
    }
    let initial = automaton.initial();
    let initials = (0..states.len())
        .filter(|&i| initial.project(&states[i].1).norm() > tol.overlap_eps)
        .collect();
    Ok(ClassicalTS {
        states,
        transitions,
        initials,
    })
}

/// Decides `𝔸 ⊨ inv X` through the classical transition system: the
/// verdict is true iff every reachable eigenstate satisfies `X`.
pub fn check_invariant_via_ts(
    automaton: &QuantumAutomaton,
    ap: &PropositionSet,
    x: &Subspace,
    tol: &Tolerances,
) -> Result<CheckReport> {
    if !ap.is_validated() {
        return Err(Error::UnvalidatedPropositions);
    }
    let ts = build_ts(automaton, tol)?;
    let order = ts.reachable();
    let reachable_vectors: Vec<CVector> =
        order.iter().map(|&(i, _)| ts.states[i].1.clone()).collect();
    let visited_basis = orthonormalize(&reachable_vectors, tol);
    let visited_rank = visited_basis.len();

    let mut parent_of: alloc::collections::BTreeMap<usize, Option<usize>> =
        alloc::collections::BTreeMap::new();
    for &(i, p) in &order {
        parent_of.insert(i, p);
    }

    for &(i, _) in &order {
        if !ap.satisfies(&ts.states[i].1, x, tol)? {
            // Chain of eigenstate names from an initial state to the
            // violation.
            let mut chain = Vec::new();
            let mut cur = Some(i);
            while let Some(c) = cur {
                chain.push(ts.states[c].0.clone());
                cur = parent_of[&c];
            }
            chain.reverse();
            return Ok(CheckReport {
                kind: CheckKind::Invariant,
                verdict: false,
                witness: None,
                classical_witness: Some(chain),
                visited_rank,
                visited_basis,
                iterations: order.len(),
            });
        }
    }
    Ok(CheckReport {
        kind: CheckKind::Invariant,
        verdict: true,
        witness: None,
        classical_witness: None,
        visited_rank,
        visited_basis,
        iterations: order.len(),
    })
}
