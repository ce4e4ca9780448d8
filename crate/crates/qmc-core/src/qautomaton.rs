//! Quantum automata: named unitary actions with a subspace of initial
//! states, path-fragment semantics, and the reachable subspace.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::complexla::{project_residual, CMatrix, CVector, Tolerances};
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// A quantum automaton `(Act, {U_α}, I)`.
///
/// Action names keep their insertion order so traversals are deterministic
/// and counterexamples reproducible.
#[derive(Clone, Debug)]
pub struct QuantumAutomaton {
    dim: usize,
    actions: Vec<(String, CMatrix)>,
    initial: Subspace,
}

impl QuantumAutomaton {
    pub fn new(
        dim: usize,
        actions: Vec<(String, CMatrix)>,
        initial: Subspace,
        tol: &Tolerances,
    ) -> Result<Self> {
        assert!(dim >= 1);
        for (name, u) in &actions {
            if !u.is_square() || u.rows() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: u.rows(),
                });
            }
            let violation = u.unitarity_violation();
            if violation > tol.unitarity_eps {
                let _ = name;
                return Err(Error::NotUnitary { violation });
            }
        }
        if initial.dim_ambient() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: initial.dim_ambient(),
            });
        }
        if initial.rank() == 0 {
            return Err(Error::EmptyInitialSubspace);
        }
        Ok(QuantumAutomaton {
            dim,
            actions,
            initial,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn initial(&self) -> &Subspace {
        &self.initial
    }

    pub fn actions(&self) -> &[(String, CMatrix)] {
        &self.actions
    }

    pub fn action_names(&self) -> Vec<String> {
        self.actions.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn unitary(&self, alpha: &str) -> Result<&CMatrix> {
        self.actions
            .iter()
            .find(|(n, _)| n == alpha)
            .map(|(_, u)| u)
            .ok_or_else(|| Error::UnknownAction(alpha.to_string()))
    }

    /// One transition step `U_α |v⟩`.
    pub fn step(&self, v: &CVector, alpha: &str) -> Result<CVector> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        Ok(self.unitary(alpha)?.mul_vec(v))
    }

    /// The reachable subspace `RS(𝔸)`: the least subspace containing `I`
    /// and invariant under every action.
    ///
    /// Fixed-point iteration over a growing orthonormal basis; a candidate
    /// image is added only when its residual against the current span
    /// exceeds the membership tolerance. Terminates in at most `dim`
    /// enlargement rounds.
    pub fn reachable_subspace(&self, tol: &Tolerances) -> Subspace {
        let mut basis: Vec<CVector> = self.initial.basis().to_vec();
        loop {
            let mut grown = false;
            let snapshot_len = basis.len();
            for k in 0..snapshot_len {
                for (_, u) in &self.actions {
                    let image = u.mul_vec(&basis[k]);
                    if let Some(r) = project_residual(&image, &basis, tol.membership_eps) {
                        basis.push(r);
                        grown = true;
                    }
                }
            }
            if !grown || basis.len() == self.dim {
                break;
            }
        }
        Subspace::from_orthonormal(basis, self.dim)
    }

    /// All path fragments of length at most `depth` starting from each of
    /// the given vectors, in declared action order. Test-oracle support.
    pub fn enumerate_fragments(&self, from_basis: &[CVector], depth: usize) -> Vec<PathFragment> {
        let mut out = Vec::new();
        for start in from_basis {
            let root = PathFragment {
                start: start.clone(),
                steps: Vec::new(),
                states: vec![start.clone()],
            };
            let mut frontier = vec![root.clone()];
            out.push(root);
            for _ in 0..depth {
                let mut next = Vec::new();
                for frag in &frontier {
                    for (name, u) in &self.actions {
                        let mut steps = frag.steps.clone();
                        steps.push(name.clone());
                        let mut states = frag.states.clone();
                        states.push(u.mul_vec(states.last().unwrap()));
                        next.push(PathFragment {
                            start: frag.start.clone(),
                            steps,
                            states,
                        });
                    }
                }
                out.extend(next.iter().cloned());
                frontier = next;
            }
        }
        out
    }
}

/// A finite run: a start vector, the actions taken, and every intermediate
/// state (`states.len() == steps.len() + 1`).
#[derive(Clone, Debug)]
pub struct PathFragment {
    pub start: CVector,
    pub steps: Vec<String>,
    pub states: Vec<CVector>,
}

impl PathFragment {
    pub fn last_state(&self) -> &CVector {
        self.states.last().unwrap()
    }

    /// Replays the fragment against an automaton: the start must lie in the
    /// initial subspace and every step must match the named unitary.
    pub fn replays_on(&self, automaton: &QuantumAutomaton, tol: &Tolerances) -> Result<bool> {
        if self.states.len() != self.steps.len() + 1 {
            return Ok(false);
        }
        if !automaton.initial().contains(&self.start, tol)? {
            return Ok(false);
        }
        if self.states[0].distance(&self.start) > 1e-8 {
            return Ok(false);
        }
        for (k, alpha) in self.steps.iter().enumerate() {
            let expected = automaton.step(&self.states[k], alpha)?;
            if expected.distance(&self.states[k + 1]) > 1e-8 {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
