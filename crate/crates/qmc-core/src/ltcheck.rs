//! Safety and ω-regular checking by reduction to an invariant on the
//! product automaton.
//!
//! A safety property is given by a recognizer of its bad prefixes; the
//! property holds iff the product never reaches the classical span of the
//! final states. The ω-case uses persistence on the same product, which in
//! finite dimension again coincides with the invariant. Exact verdicts
//! need a reversible recognizer; a merely co-deterministic one still
//! yields trustworthy violations when flagged `sound_for_violation`.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::classauto::{AcceptMode, ClassicalAutomaton};
use crate::complexla::Tolerances;
use crate::error::{Error, Result};
use crate::invcheck::{dfs_invariant, CheckKind, CheckReport};
use crate::product::ProductAutomaton;
use crate::props::PropositionSet;
use crate::qautomaton::{PathFragment, QuantumAutomaton};

/// Which class of linear-time property a recognizer describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PropertyKind {
    /// Recognizer of bad prefixes; finite acceptance mode.
    Safety,
    /// Recognizer of violating infinite words; Buechi acceptance mode.
    Omega,
}

/// A linear-time property, packaged as its violating-behavior recognizer.
#[derive(Clone, Debug)]
pub struct PropertySpec {
    pub kind: PropertyKind,
    pub recognizer: ClassicalAutomaton,
    /// When the recognizer is not reversible, a "violated" verdict is
    /// still sound if this is set; a "holds" verdict is then withheld.
    pub sound_for_violation: bool,
}

fn run_product_check(
    quantum: &QuantumAutomaton,
    ap: &PropositionSet,
    spec: &PropertySpec,
    kind: CheckKind,
    tol: &Tolerances,
) -> Result<CheckReport> {
    // States that are unreachable from the initials or cannot reach a
    // final state never affect the recognized language, but they would
    // occupy slots in the product's bookkeeping permutation and could
    // absorb classical amplitude. Drop them first.
    let recognizer = spec.recognizer.trim()?;
    let flags = recognizer.flags();
    if !flags.reversible && !spec.sound_for_violation {
        return Err(Error::NotReversible);
    }
    let vacuous = |kind: CheckKind| -> Result<CheckReport> {
        if !flags.reversible {
            return Err(Error::NotReversible);
        }
        Ok(CheckReport {
            kind,
            verdict: true,
            witness: None,
            classical_witness: None,
            visited_rank: 0,
            visited_basis: Vec::new(),
            iterations: 0,
        })
    };
    if recognizer.finals().is_empty() || recognizer.initials().is_empty() {
        // No word is recognized at all: the property holds trivially.
        return vacuous(kind);
    }
    let product = match ProductAutomaton::build(quantum, ap, &recognizer, tol) {
        Ok(p) => p,
        // No recognizer step matches any initial label: no trace can even
        // begin a recognized word.
        Err(Error::EmptyInitialSubspace) => return vacuous(kind),
        Err(e) => return Err(e),
    };
    let nonfinal: Vec<usize> = (0..recognizer.state_count())
        .filter(|q| !recognizer.is_final(*q))
        .collect();
    let mut report = dfs_invariant(
        product.automaton(),
        |v| product.in_classical_span(v, &nonfinal, tol),
        kind,
        tol,
    )?;
    if report.verdict && !flags.reversible {
        // Only the violation direction is sound here.
        return Err(Error::NotReversible);
    }
    if let Some(witness) = report.witness.take() {
        let projected = project_witness(&product, &recognizer, quantum, ap, &witness, tol)?;
        let projected = match projected {
            Some(p) => Some(p),
            // The invariant search over-approximated: its path does not
            // spell a recognized word. Fall back to a bounded search for a
            // genuine one over basis-state paths.
            None => search_witness(&recognizer, quantum, ap, product.automaton().dim(), tol)?,
        };
        match projected {
            Some((fragment, chain)) => {
                report.witness = Some(fragment);
                report.classical_witness = Some(chain);
            }
            None if flags.reversible => {
                // Theorem-backed verdict; report the raw product path so
                // the violation stays auditable even without a validated
                // word.
                report.witness = Some(witness);
            }
            // A violation claim without a validated witness is worthless
            // when only the violation direction is sound.
            None => return Err(Error::NotReversible),
        }
    }
    Ok(report)
}

/// Maps a product counterexample back to a quantum run plus the chain of
/// recognizer states it drives through: the quantum path is replayed from
/// the witness's starting basis vector and the letters are recomputed from
/// the proposition labels of the replayed states. Returns `None` when the
/// replayed word is not actually recognized (finite mode only).
fn project_witness(
    product: &ProductAutomaton,
    recognizer: &ClassicalAutomaton,
    quantum: &QuantumAutomaton,
    ap: &PropositionSet,
    fragment: &PathFragment,
    tol: &Tolerances,
) -> Result<Option<(PathFragment, Vec<alloc::string::String>)>> {
    // The initial subspace of the product is spanned by pure pairs, so the
    // witness start splits exactly into a quantum state and one classical
    // state.
    let q0 = product.dominant_classical(&fragment.start).unwrap_or(0);
    let psi0 = product.quantum_component(&fragment.start, q0);
    let mut states = alloc::vec![psi0];
    for alpha in &fragment.steps {
        let next = quantum.step(states.last().unwrap(), alpha)?;
        states.push(next);
    }
    let word: Vec<_> = states
        .iter()
        .map(|s| ap.label(s, tol))
        .collect::<Result<Vec<_>>>()?;
    if recognizer.mode() == AcceptMode::Finite && !recognizer.accepts_word(&word)? {
        return Ok(None);
    }
    // Replay the recognizer over the trace letters for the classical chain.
    let profile = recognizer.extract_profile()?;
    let mut chain = alloc::vec![recognizer.state_name(q0).to_string()];
    let mut q = q0;
    for letter in word.iter().skip(1) {
        q = profile.successor(q, letter);
        chain.push(recognizer.state_name(q).to_string());
    }
    let fragment = PathFragment {
        start: states[0].clone(),
        steps: fragment.steps.clone(),
        states,
    };
    Ok(Some((fragment, chain)))
}

/// Bounded search for a basis-state path whose trace is a recognized word.
fn search_witness(
    recognizer: &ClassicalAutomaton,
    quantum: &QuantumAutomaton,
    ap: &PropositionSet,
    product_dim: usize,
    tol: &Tolerances,
) -> Result<Option<(PathFragment, Vec<alloc::string::String>)>> {
    if recognizer.mode() != AcceptMode::Finite {
        return Ok(None);
    }
    // Cap the enumeration so the fallback stays cheap.
    let n_act = quantum.action_names().len().max(1);
    let mut depth = 0usize;
    let mut budget = 1usize;
    while depth < 2 * product_dim && budget.saturating_mul(n_act) <= 65536 {
        depth += 1;
        budget *= n_act;
    }
    let profile = recognizer.extract_profile()?;
    for fragment in quantum.enumerate_fragments(quantum.initial().basis(), depth) {
        let word: Vec<_> = fragment
            .states
            .iter()
            .map(|s| ap.label(s, tol))
            .collect::<Result<Vec<_>>>()?;
        if !recognizer.accepts_word(&word)? {
            continue;
        }
        // Initial recognizer state consistent with the first letter.
        let q0 = recognizer
            .initials()
            .iter()
            .copied()
            .find(|q| !recognizer.succ(*q, &word[0]).is_empty());
        let Some(mut q) = q0.map(|q| profile.successor(q, &word[0])) else {
            continue;
        };
        let mut chain = alloc::vec![recognizer.state_name(q).to_string()];
        for letter in word.iter().skip(1) {
            q = profile.successor(q, letter);
            chain.push(recognizer.state_name(q).to_string());
        }
        return Ok(Some((fragment, chain)));
    }
    Ok(None)
}

/// Decides a safety property: `𝔸 ⊨ P` iff no reachable product state
/// leaks into the classical span of the bad-prefix finals.
pub fn check_safety(
    quantum: &QuantumAutomaton,
    ap: &PropositionSet,
    spec: &PropertySpec,
    tol: &Tolerances,
) -> Result<CheckReport> {
    if spec.kind != PropertyKind::Safety || spec.recognizer.mode() != AcceptMode::Finite {
        return Err(Error::ModeMismatch);
    }
    run_product_check(quantum, ap, spec, CheckKind::Safety, tol)
}

/// Decides an ω-property via persistence on the product, which in finite
/// dimension reduces to the same invariant as the safety check.
pub fn check_omega(
    quantum: &QuantumAutomaton,
    ap: &PropositionSet,
    spec: &PropertySpec,
    tol: &Tolerances,
) -> Result<CheckReport> {
    if spec.kind != PropertyKind::Omega || spec.recognizer.mode() != AcceptMode::Buechi {
        return Err(Error::ModeMismatch);
    }
    run_product_check(quantum, ap, spec, CheckKind::Omega, tol)
}
