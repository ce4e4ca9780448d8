//! Product of a quantum automaton with a co-deterministic recognizer.
//!
//! The product lives on `H ⊗ C^{|Q|}`. An orthonormal basis of the quantum
//! reachable space is fixed once; each product unitary sends a basis pair
//! `|ψ_i⟩|q⟩` to `(U_α|ψ_i⟩) |π(q)⟩`, where `π` is the per-letter bijection
//! of the recognizer profile evaluated at the label of `U_α|ψ_i⟩`. Because
//! `π` is a permutation and the `|ψ_i⟩`-block is the restriction of a
//! unitary to an invariant subspace, the product matrices are unitary.

use alloc::string::String;
use alloc::vec::Vec;

use crate::classauto::ClassicalAutomaton;
use crate::complexla::{CMatrix, CVector, Tolerances, C64};
use crate::error::{Error, Result};
use crate::props::PropositionSet;
use crate::qautomaton::QuantumAutomaton;
use crate::subspace::Subspace;

/// The product automaton together with the data needed to project its
/// states back onto the two factors.
#[derive(Clone, Debug)]
pub struct ProductAutomaton {
    automaton: QuantumAutomaton,
    /// Orthonormal basis of the reachable subspace of the quantum factor.
    h_basis: Vec<CVector>,
    n_classical: usize,
}

impl ProductAutomaton {
    /// Builds the product. Requires a co-deterministic recognizer whose
    /// initial states avoid the finals, and a validated proposition set.
    pub fn build(
        quantum: &QuantumAutomaton,
        ap: &PropositionSet,
        recognizer: &ClassicalAutomaton,
        tol: &Tolerances,
    ) -> Result<Self> {
        if !recognizer.flags().co_deterministic {
            return Err(Error::NotCoDeterministic);
        }
        if recognizer
            .initials()
            .iter()
            .any(|q| recognizer.is_final(*q))
        {
            return Err(Error::InitialsMeetFinals);
        }
        if let Some(d) = ap.dim_ambient() {
            if d != quantum.dim() {
                return Err(Error::DimensionMismatch {
                    expected: quantum.dim(),
                    got: d,
                });
            }
        }
        if !ap.is_validated() {
            return Err(Error::UnvalidatedPropositions);
        }
        let profile = recognizer.extract_profile()?;
        let nq = recognizer.state_count();

        // Basis of the reachable quantum space: the action of every U_α on
        // it stays inside, so the restriction below is well defined.
        let reach = quantum.reachable_subspace(tol);
        let h_basis: Vec<CVector> = reach.basis().to_vec();
        let k = h_basis.len();
        let dim = k * nq;

        let mut actions: Vec<(String, CMatrix)> = Vec::new();
        for (name, u) in quantum.actions() {
            let mut m = CMatrix::zeros(dim, dim);
            for (i, psi) in h_basis.iter().enumerate() {
                let image = u.mul_vec(psi);
                let label = ap.label(&image, tol)?;
                // Coordinates of U_α|ψ_i⟩ in the reachable basis.
                let coeffs: Vec<C64> = h_basis
                    .iter()
                    .map(|b| crate::complexla::inner(b, &image))
                    .collect::<Result<Vec<_>>>()?;
                for q in 0..nq {
                    let p = profile.successor(q, &label);
                    for (j, c) in coeffs.iter().enumerate() {
                        m.set(j * nq + p, i * nq + q, *c);
                    }
                }
            }
            actions.push((name.clone(), m));
        }

        // Initial subspace: pairs of an initial-basis vector with every
        // first-step recognizer state its label allows.
        let mut initial_vectors: Vec<CVector> = Vec::new();
        for psi in quantum.initial().basis() {
            let label = ap.label(psi, tol)?;
            let coeffs: Vec<C64> = h_basis
                .iter()
                .map(|b| crate::complexla::inner(b, psi))
                .collect::<Result<Vec<_>>>()?;
            let mut targets: Vec<usize> = Vec::new();
            for &q0 in recognizer.initials() {
                for q in recognizer.succ(q0, &label) {
                    if !targets.contains(&q) {
                        targets.push(q);
                    }
                }
            }
            for q in targets {
                let mut v = CVector::zero(dim);
                for (j, c) in coeffs.iter().enumerate() {
                    v.set(j * nq + q, *c);
                }
                initial_vectors.push(v);
            }
        }
        if initial_vectors.is_empty() {
            return Err(Error::EmptyInitialSubspace);
        }
        let initial = Subspace::span_of(&initial_vectors, dim, tol);
        let automaton = QuantumAutomaton::new(dim, actions, initial, tol)?;
        Ok(ProductAutomaton {
            automaton,
            h_basis,
            n_classical: nq,
        })
    }

    pub fn automaton(&self) -> &QuantumAutomaton {
        &self.automaton
    }

    pub fn n_classical(&self) -> usize {
        self.n_classical
    }

    pub fn h_basis(&self) -> &[CVector] {
        &self.h_basis
    }

    /// The classical states carrying weight above the membership tolerance:
    /// the minimal `R` with `v ∈ H ⊗ span{|q⟩ : q ∈ R}`.
    pub fn meet_support(&self, v: &CVector, tol: &Tolerances) -> Result<Vec<usize>> {
        if v.dim() != self.h_basis.len() * self.n_classical {
            return Err(Error::DimensionMismatch {
                expected: self.h_basis.len() * self.n_classical,
                got: v.dim(),
            });
        }
        let mut support = Vec::new();
        for q in 0..self.n_classical {
            let mut norm_sq = 0.0;
            for j in 0..self.h_basis.len() {
                norm_sq += v.entries()[j * self.n_classical + q].norm_sqr();
            }
            if libm::sqrt(norm_sq) > tol.membership_eps {
                support.push(q);
            }
        }
        Ok(support)
    }

    /// Whether `v` lies in `H ⊗ span{|q⟩ : q ∈ allowed}`. Equivalent to
    /// the support being contained in `allowed`.
    pub fn in_classical_span(
        &self,
        v: &CVector,
        allowed: &[usize],
        tol: &Tolerances,
    ) -> Result<bool> {
        Ok(self
            .meet_support(v, tol)?
            .iter()
            .all(|q| allowed.contains(q)))
    }

    /// Projects a product state onto the quantum factor by tracing out the
    /// classical index with the largest weight (used for witnesses).
    pub fn quantum_component(&self, v: &CVector, q: usize) -> CVector {
        let ambient = self.h_basis.first().map(|b| b.dim()).unwrap_or(0);
        let mut out = CVector::zero(ambient);
        for (j, b) in self.h_basis.iter().enumerate() {
            let c = v.entries()[j * self.n_classical + q];
            out.axpy(c, b);
        }
        out
    }

    /// The classical index chain of a product basis-aligned state: indices
    /// ordered by decreasing weight.
    pub fn dominant_classical(&self, v: &CVector) -> Option<usize> {
        let mut best = None;
        let mut best_w = 0.0;
        for q in 0..self.n_classical {
            let mut w = 0.0;
            for j in 0..self.h_basis.len() {
                w += v.entries()[j * self.n_classical + q].norm_sqr();
            }
            if w > best_w {
                best_w = w;
                best = Some(q);
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classauto::{AcceptMode, Letter};
    use alloc::string::ToString;
    use alloc::vec;

    fn letter(names: &[&str]) -> Letter {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn qubit_x_automaton() -> QuantumAutomaton {
        let tol = Tolerances::default();
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let init = Subspace::span_of(&[CVector::basis(2, 0)], 2, &tol);
        QuantumAutomaton::new(2, vec![("x".to_string(), x)], init, &tol).unwrap()
    }

    fn qubit_props() -> PropositionSet {
        let tol = Tolerances::default();
        let p0 = Subspace::span_of(&[CVector::basis(2, 0)], 2, &tol);
        let p1 = Subspace::span_of(&[CVector::basis(2, 1)], 2, &tol);
        let full = Subspace::full(2);
        PropositionSet::new(
            vec![
                ("zero".to_string(), p0),
                ("one".to_string(), p1),
                ("top".to_string(), full),
            ],
            &tol,
        )
        .unwrap()
    }

    /// Recognizer of minimal bad prefixes of "always zero": the first
    /// letter containing "one" reaches the final state, which has no
    /// outgoing transitions (so the automaton stays reversible).
    fn bad_prefix_recognizer() -> ClassicalAutomaton {
        let ok = letter(&["zero", "top"]);
        let bad = letter(&["one", "top"]);
        ClassicalAutomaton::new(
            vec!["ok".to_string(), "bad".to_string()],
            vec![
                ("ok".to_string(), ok, "ok".to_string()),
                ("ok".to_string(), bad, "bad".to_string()),
            ],
            vec!["ok".to_string()],
            vec!["bad".to_string()],
            AcceptMode::Finite,
        )
        .unwrap()
    }

    #[test]
    fn product_unitaries_are_unitary() {
        let tol = Tolerances::default();
        let product = ProductAutomaton::build(
            &qubit_x_automaton(),
            &qubit_props(),
            &bad_prefix_recognizer(),
            &tol,
        )
        .unwrap();
        for (_, u) in product.automaton().actions() {
            assert!(u.unitarity_violation() <= tol.unitarity_eps);
        }
        assert_eq!(product.automaton().dim(), 4);
    }

    #[test]
    fn product_initial_pairs_label_with_recognizer_step() {
        let tol = Tolerances::default();
        let product = ProductAutomaton::build(
            &qubit_x_automaton(),
            &qubit_props(),
            &bad_prefix_recognizer(),
            &tol,
        )
        .unwrap();
        // |0⟩ labels as {zero, top}; from "ok" that letter goes to "ok",
        // so the single initial product vector has support {ok}.
        let init = product.automaton().initial();
        assert_eq!(init.rank(), 1);
        let support = product.meet_support(&init.basis()[0], &tol).unwrap();
        assert_eq!(support, vec![0]);
    }

    #[test]
    fn meet_support_tracks_classical_factor() {
        let tol = Tolerances::default();
        let product = ProductAutomaton::build(
            &qubit_x_automaton(),
            &qubit_props(),
            &bad_prefix_recognizer(),
            &tol,
        )
        .unwrap();
        let init = product.automaton().initial().basis()[0].clone();
        // One step of x flips the qubit to |1⟩, whose label drives the
        // recognizer into the final sink.
        let step = product.automaton().step(&init, "x").unwrap();
        let support = product.meet_support(&step, &tol).unwrap();
        assert_eq!(support, vec![1]);
        assert!(product.in_classical_span(&init, &[0], &tol).unwrap());
        assert!(!product.in_classical_span(&step, &[0], &tol).unwrap());
    }

    #[test]
    fn refuses_initials_meeting_finals() {
        let tol = Tolerances::default();
        let a = letter(&["zero", "top"]);
        let bad = ClassicalAutomaton::new(
            vec!["q".to_string()],
            vec![("q".to_string(), a, "q".to_string())],
            vec!["q".to_string()],
            vec!["q".to_string()],
            AcceptMode::Finite,
        )
        .unwrap();
        assert!(matches!(
            ProductAutomaton::build(&qubit_x_automaton(), &qubit_props(), &bad, &tol),
            Err(Error::InitialsMeetFinals)
        ));
    }
}
