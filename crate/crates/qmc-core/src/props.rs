//! Atomic propositions as closed subspaces: the labeling function
//! `L(|ψ⟩) = {X ∈ AP : |ψ⟩ ∈ X}` and the satisfaction relation
//! `|ψ⟩ ⊨ X  iff  ⋂_{Y ∈ L(|ψ⟩)} Y ⊆ X`.
//!
//! Checkers that lift satisfaction from basis vectors to whole subspaces
//! require the proposition set to be commuting and join-closed; both
//! hypotheses are validated at construction, never assumed.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::complexla::{CVector, Tolerances};
use crate::error::{Error, Result};
use crate::subspace::Subspace;

/// A named, finite set of subspaces serving as atomic propositions.
#[derive(Clone, Debug)]
pub struct PropositionSet {
    props: Vec<(String, Subspace)>,
    commuting: bool,
    join_closed: bool,
}

impl PropositionSet {
    /// Builds the set and validates the commuting and join-closure
    /// hypotheses (`O(|AP|²)` projector-commutator and join-membership
    /// checks).
    pub fn new(props: Vec<(String, Subspace)>, tol: &Tolerances) -> Result<Self> {
        if let Some(first) = props.first() {
            let d = first.1.dim_ambient();
            for (_, s) in &props {
                if s.dim_ambient() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: s.dim_ambient(),
                    });
                }
            }
        }
        let mut commuting = true;
        'outer: for i in 0..props.len() {
            for j in i + 1..props.len() {
                if !props[i].1.commutes(&props[j].1, tol) {
                    commuting = false;
                    break 'outer;
                }
            }
        }
        let mut join_closed = true;
        'outer2: for i in 0..props.len() {
            for j in i..props.len() {
                let join = props[i].1.join(&props[j].1, tol);
                let mut found = false;
                for (_, s) in &props {
                    if s.rank() == join.rank() && s.same(&join, tol)? {
                        found = true;
                        break;
                    }
                }
                if !found {
                    join_closed = false;
                    break 'outer2;
                }
            }
        }
        Ok(PropositionSet {
            props,
            commuting,
            join_closed,
        })
    }

    pub fn len(&self) -> usize {
        self.props.len()
    }

    pub fn is_empty(&self) -> bool {
        self.props.is_empty()
    }

    pub fn members(&self) -> &[(String, Subspace)] {
        &self.props
    }

    pub fn names(&self) -> Vec<String> {
        self.props.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Subspace> {
        self.props.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    pub fn is_commuting(&self) -> bool {
        self.commuting
    }

    pub fn is_join_closed(&self) -> bool {
        self.join_closed
    }

    /// Both Lemma hypotheses hold: pairwise commuting and join-closed.
    pub fn is_validated(&self) -> bool {
        self.commuting && self.join_closed
    }

    pub fn dim_ambient(&self) -> Option<usize> {
        self.props.first().map(|(_, s)| s.dim_ambient())
    }

    /// `L(|v⟩)`: the names of exactly those members containing `v`.
    pub fn label(&self, v: &CVector, tol: &Tolerances) -> Result<BTreeSet<String>> {
        let mut out = BTreeSet::new();
        for (name, s) in &self.props {
            if s.contains(v, tol)? {
                out.insert(name.clone());
            }
        }
        Ok(out)
    }

    /// `⋂_{Y ∈ L(|v⟩)} Y`; the meet over an empty label set is the whole
    /// space.
    pub fn label_meet(&self, v: &CVector, tol: &Tolerances) -> Result<Subspace> {
        let d = v.dim();
        let mut acc = Subspace::full(d);
        for (_, s) in &self.props {
            if s.contains(v, tol)? {
                acc = acc.meet(s, tol);
            }
        }
        Ok(acc)
    }

    /// `|v⟩ ⊨ X`.
    pub fn satisfies(&self, v: &CVector, x: &Subspace, tol: &Tolerances) -> Result<bool> {
        self.label_meet(v, tol)?.leq(x, tol)
    }

    /// Lifts satisfaction from the basis of `y` to every unit vector of
    /// `y`; valid only when the set is commuting and join-closed.
    pub fn subspace_satisfies(
        &self,
        y: &Subspace,
        x: &Subspace,
        tol: &Tolerances,
    ) -> Result<bool> {
        if !self.is_validated() {
            return Err(Error::UnvalidatedPropositions);
        }
        for b in y.basis() {
            if !self.satisfies(b, x, tol)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
