//! Invariant checking by depth-first search over a growing linearly
//! independent set of reachable states, plus the persistence checker
//! (which coincides with the invariant checker in finite dimension).
//!
//! The search keeps two parallel structures: the raw reachable states with
//! parent pointers (so a violating run can be replayed as a counterexample)
//! and an orthonormalized shadow basis used for the numerically sensitive
//! "candidate is already in span B" test.

use alloc::string::String;
use alloc::vec::Vec;

use crate::complexla::{project_residual, CVector, Tolerances};
use crate::error::{Error, Result};
use crate::props::PropositionSet;
use crate::qautomaton::{PathFragment, QuantumAutomaton};
use crate::subspace::Subspace;

/// What a report's verdict talks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Invariant,
    Persistence,
    Safety,
    Omega,
}

/// Outcome of a check: the verdict, a replayable counterexample when the
/// property is violated, and search statistics.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub verdict: bool,
    pub witness: Option<PathFragment>,
    /// Counterexample over classical eigenstate names (eigen engine only).
    pub classical_witness: Option<Vec<String>>,
    /// Final size of the linearly independent reachable set.
    pub visited_rank: usize,
    /// Orthonormal basis of the span of the visited set (complete only
    /// when the verdict is true; the search stops early on a violation).
    pub visited_basis: Vec<CVector>,
    /// Number of while-loop iterations (stack pops) performed.
    pub iterations: usize,
}

struct Node {
    state: CVector,
    parent: Option<(usize, String)>,
}

fn rebuild_fragment(nodes: &[Node], mut idx: usize, extra: Option<(String, CVector)>) -> PathFragment {
    let mut chain = Vec::new();
    loop {
        match &nodes[idx].parent {
            Some((p, alpha)) => {
                chain.push((alpha.clone(), nodes[idx].state.clone()));
                idx = *p;
            }
            None => break,
        }
    }
    chain.reverse();
    let start = nodes[idx].state.clone();
    let mut steps = Vec::new();
    let mut states = alloc::vec![start.clone()];
    for (alpha, state) in chain {
        steps.push(alpha);
        states.push(state);
    }
    if let Some((alpha, state)) = extra {
        steps.push(alpha);
        states.push(state);
    }
    PathFragment {
        start,
        steps,
        states,
    }
}

/// The depth-first invariant search, parameterized by a per-state
/// satisfaction predicate. Also drives the product-specialized checkers.
pub(crate) fn dfs_invariant<F>(
    automaton: &QuantumAutomaton,
    satisfies: F,
    kind: CheckKind,
    tol: &Tolerances,
) -> Result<CheckReport>
where
    F: Fn(&CVector) -> Result<bool>,
{
    let mut nodes: Vec<Node> = Vec::new();
    let mut shadow: Vec<CVector> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut iterations = 0usize;

    for psi in automaton.initial().basis() {
        if let Some(r) = project_residual(psi, &shadow, tol.membership_eps) {
            shadow.push(r);
        }
        nodes.push(Node {
            state: psi.clone(),
            parent: None,
        });
        stack.push(nodes.len() - 1);
        if !satisfies(psi)? {
            let witness = rebuild_fragment(&nodes, nodes.len() - 1, None);
            return Ok(CheckReport {
                kind,
                verdict: false,
                witness: Some(witness),
                classical_witness: None,
                visited_rank: shadow.len(),
                visited_basis: shadow,
                iterations,
            });
        }
    }

    while let Some(idx) = stack.pop() {
        iterations += 1;
        let psi = nodes[idx].state.clone();
        for (alpha, u) in automaton.actions() {
            let candidate = u.mul_vec(&psi);
            if !satisfies(&candidate)? {
                let witness =
                    rebuild_fragment(&nodes, idx, Some((alpha.clone(), candidate)));
                return Ok(CheckReport {
                    kind,
                    verdict: false,
                    witness: Some(witness),
                    classical_witness: None,
                    visited_rank: shadow.len(),
                    visited_basis: shadow,
                    iterations,
                });
            }
            if let Some(r) = project_residual(&candidate, &shadow, tol.membership_eps) {
                shadow.push(r);
                nodes.push(Node {
                    state: candidate,
                    parent: Some((idx, alpha.clone())),
                });
                stack.push(nodes.len() - 1);
            }
        }
    }

    Ok(CheckReport {
        kind,
        verdict: true,
        witness: None,
        classical_witness: None,
        visited_rank: shadow.len(),
        visited_basis: shadow,
        iterations,
    })
}

fn require_validated(ap: &PropositionSet, dim: usize) -> Result<()> {
    if !ap.is_validated() {
        return Err(Error::UnvalidatedPropositions);
    }
    if let Some(d) = ap.dim_ambient() {
        if d != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: d,
            });
        }
    }
    Ok(())
}

/// Decides `𝔸 ⊨ inv X` by depth-first search.
///
/// Requires a commuting, join-closed proposition set: the lift from basis
/// states to the whole reachable subspace is sound only then.
pub fn check_invariant(
    automaton: &QuantumAutomaton,
    ap: &PropositionSet,
    x: &Subspace,
    tol: &Tolerances,
) -> Result<CheckReport> {
    require_validated(ap, automaton.dim())?;
    if x.dim_ambient() != automaton.dim() {
        return Err(Error::DimensionMismatch {
            expected: automaton.dim(),
            got: x.dim_ambient(),
        });
    }
    dfs_invariant(
        automaton,
        |v| ap.satisfies(v, x, tol),
        CheckKind::Invariant,
        tol,
    )
}

/// Decides `𝔸 ⊨ pers X`, which in finite dimension coincides with
/// `𝔸 ⊨ inv X`.
pub fn check_persistence(
    automaton: &QuantumAutomaton,
    ap: &PropositionSet,
    x: &Subspace,
    tol: &Tolerances,
) -> Result<CheckReport> {
    let mut report = check_invariant(automaton, ap, x, tol)?;
    report.kind = CheckKind::Persistence;
    Ok(report)
}

/// Independent reference verdict: compute the reachable subspace by fixed
/// point and lift satisfaction over its basis. Used for differential
/// testing of [`check_invariant`].
pub fn check_invariant_oracle(
    automaton: &QuantumAutomaton,
    ap: &PropositionSet,
    x: &Subspace,
    tol: &Tolerances,
) -> Result<bool> {
    require_validated(ap, automaton.dim())?;
    let rs = automaton.reachable_subspace(tol);
    ap.subspace_satisfies(&rs, x, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexla::CMatrix;
    use alloc::string::ToString;
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn qubit_ap(t: &Tolerances) -> PropositionSet {
        PropositionSet::new(
            vec![
                (
                    "p0".to_string(),
                    Subspace::span_of(&[CVector::basis(2, 0)], 2, t),
                ),
                (
                    "p1".to_string(),
                    Subspace::span_of(&[CVector::basis(2, 1)], 2, t),
                ),
                ("full".to_string(), Subspace::full(2)),
            ],
            t,
        )
        .unwrap()
    }

    fn single_action(u: CMatrix, name: &str, t: &Tolerances) -> QuantumAutomaton {
        QuantumAutomaton::new(
            2,
            vec![(name.to_string(), u)],
            Subspace::span_of(&[CVector::basis(2, 0)], 2, t),
            &t,
        )
        .unwrap()
    }

    #[test]
    fn stabilizer_like_invariant_holds() {
        let t = tol();
        let z = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let a = single_action(z, "z", &t);
        let ap = qubit_ap(&t);
        let x = Subspace::span_of(&[CVector::basis(2, 0)], 2, &t);
        let report = check_invariant(&a, &ap, &x, &t).unwrap();
        assert!(report.verdict);
        assert!(report.witness.is_none());
        assert!(report.visited_rank <= 2 && report.iterations <= 2);
    }

    #[test]
    fn bit_flip_violates_with_witness() {
        let t = tol();
        let x_gate = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let a = single_action(x_gate, "x", &t);
        let ap = qubit_ap(&t);
        let x = Subspace::span_of(&[CVector::basis(2, 0)], 2, &t);
        let report = check_invariant(&a, &ap, &x, &t).unwrap();
        assert!(!report.verdict);
        let w = report.witness.unwrap();
        assert_eq!(w.steps, vec!["x".to_string()]);
        assert!(w.replays_on(&a, &t).unwrap());
        assert!(!ap.satisfies(w.last_state(), &x, &t).unwrap());
    }

    #[test]
    fn full_space_always_holds() {
        let t = tol();
        let x_gate = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let a = single_action(x_gate, "x", &t);
        let ap = qubit_ap(&t);
        let report = check_invariant(&a, &ap, &Subspace::full(2), &t).unwrap();
        assert!(report.verdict);
    }

    #[test]
    fn persistence_mirrors_invariant() {
        let t = tol();
        let ap = qubit_ap(&t);
        let ray0 = Subspace::span_of(&[CVector::basis(2, 0)], 2, &t);
        let x_gate = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        for (u, name, expect) in [(x_gate, "x", false), (z, "z", true)] {
            let a = single_action(u, name, &t);
            let inv = check_invariant(&a, &ap, &ray0, &t).unwrap();
            let pers = check_persistence(&a, &ap, &ray0, &t).unwrap();
            assert_eq!(inv.verdict, expect);
            assert_eq!(pers.verdict, inv.verdict);
            assert_eq!(pers.kind, CheckKind::Persistence);
        }
    }

    #[test]
    fn oracle_agrees_on_fixtures() {
        let t = tol();
        let ap = qubit_ap(&t);
        let ray0 = Subspace::span_of(&[CVector::basis(2, 0)], 2, &t);
        let x_gate = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let z = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        for (u, name) in [(x_gate, "x"), (z, "z")] {
            let a = single_action(u, name, &t);
            let fast = check_invariant(&a, &ap, &ray0, &t).unwrap().verdict;
            let slow = check_invariant_oracle(&a, &ap, &ray0, &t).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn unvalidated_ap_is_refused() {
        let t = tol();
        let open = PropositionSet::new(
            vec![
                (
                    "p0".to_string(),
                    Subspace::span_of(&[CVector::basis(2, 0)], 2, &t),
                ),
                (
                    "p1".to_string(),
                    Subspace::span_of(&[CVector::basis(2, 1)], 2, &t),
                ),
            ],
            &t,
        )
        .unwrap();
        let z = CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]);
        let a = single_action(z, "z", &t);
        let x = Subspace::full(2);
        assert!(matches!(
            check_invariant(&a, &open, &x, &t),
            Err(Error::UnvalidatedPropositions)
        ));
    }
}
