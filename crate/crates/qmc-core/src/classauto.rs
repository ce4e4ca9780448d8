//! Classical finite automata over the alphabet `2^AP`.
//!
//! Letters are canonical sorted sets of proposition names. Determinism,
//! co-determinism and reversibility are computed at construction; the
//! profile extraction (a deterministic successor choice `δ` completed per
//! letter by a bijection `κ` to a permutation of the state set) feeds the
//! product construction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A letter of the alphabet `2^AP`: a set of proposition names.
pub type Letter = BTreeSet<String>;

/// Acceptance mode of a classical automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcceptMode {
    Finite,
    Buechi,
}

/// Structural flags computed by validation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    /// No two transitions share a source and a letter.
    pub deterministic: bool,
    /// No two transitions share a letter and a target.
    pub co_deterministic: bool,
    /// Both of the above.
    pub reversible: bool,
}

/// An NFA (or Buechi automaton) over `2^AP`.
#[derive(Clone, Debug)]
pub struct ClassicalAutomaton {
    states: Vec<String>,
    transitions: Vec<(usize, Letter, usize)>,
    initials: BTreeSet<usize>,
    finals: BTreeSet<usize>,
    mode: AcceptMode,
    flags: Flags,
}

impl ClassicalAutomaton {
    pub fn new(
        states: Vec<String>,
        transitions: Vec<(String, Letter, String)>,
        initials: Vec<String>,
        finals: Vec<String>,
        mode: AcceptMode,
    ) -> Result<Self> {
        let index: BTreeMap<&str, usize> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let resolve = |name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::UnknownState(name.into()))
        };
        let transitions = transitions
            .into_iter()
            .map(|(from, letter, to)| Ok((resolve(&from)?, letter, resolve(&to)?)))
            .collect::<Result<Vec<_>>>()?;
        let initials = initials
            .iter()
            .map(|s| resolve(s))
            .collect::<Result<BTreeSet<_>>>()?;
        let finals = finals
            .iter()
            .map(|s| resolve(s))
            .collect::<Result<BTreeSet<_>>>()?;
        let flags = compute_flags(&transitions);
        Ok(ClassicalAutomaton {
            states,
            transitions,
            initials,
            finals,
            mode,
            flags,
        })
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn transitions(&self) -> &[(usize, Letter, usize)] {
        &self.transitions
    }

    pub fn initials(&self) -> &BTreeSet<usize> {
        &self.initials
    }

    pub fn finals(&self) -> &BTreeSet<usize> {
        &self.finals
    }

    pub fn mode(&self) -> AcceptMode {
        self.mode
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(&q)
    }

    /// The sub-automaton keeping only useful states: reachable from some
    /// initial state and able to reach some final state. Useless states
    /// never contribute to the accepted language (finite or Buechi), but
    /// they do occupy slots in the product's bookkeeping permutation, so
    /// the checkers trim before building a product.
    pub fn trim(&self) -> Result<ClassicalAutomaton> {
        let n = self.states.len();
        let mut fwd = alloc::vec![false; n];
        let mut stack: Vec<usize> = self.initials.iter().copied().collect();
        for &q in &self.initials {
            fwd[q] = true;
        }
        while let Some(q) = stack.pop() {
            for (a, _, b) in &self.transitions {
                if *a == q && !fwd[*b] {
                    fwd[*b] = true;
                    stack.push(*b);
                }
            }
        }
        let mut bwd = alloc::vec![false; n];
        let mut stack: Vec<usize> = self.finals.iter().copied().collect();
        for &q in &self.finals {
            bwd[q] = true;
        }
        while let Some(q) = stack.pop() {
            for (a, _, b) in &self.transitions {
                if *b == q && !bwd[*a] {
                    bwd[*a] = true;
                    stack.push(*a);
                }
            }
        }
        let keep: BTreeSet<usize> = (0..n).filter(|&q| fwd[q] && bwd[q]).collect();
        let name = |q: &usize| self.states[*q].clone();
        ClassicalAutomaton::new(
            keep.iter().map(name).collect(),
            self.transitions
                .iter()
                .filter(|(a, _, b)| keep.contains(a) && keep.contains(b))
                .map(|(a, l, b)| (name(a), l.clone(), name(b)))
                .collect(),
            self.initials.intersection(&keep).map(name).collect(),
            self.finals.intersection(&keep).map(name).collect(),
            self.mode,
        )
    }

    /// `succ(q, A)` in declaration order.
    pub fn succ(&self, q: usize, letter: &Letter) -> Vec<usize> {
        self.transitions
            .iter()
            .filter(|(from, l, _)| *from == q && l == letter)
            .map(|&(_, _, to)| to)
            .collect()
    }

    /// Standard NFA acceptance over a finite word (existential over runs).
    pub fn accepts_word(&self, word: &[Letter]) -> Result<bool> {
        if self.mode != AcceptMode::Finite {
            return Err(Error::ModeMismatch);
        }
        let mut current: BTreeSet<usize> = self.initials.clone();
        for letter in word {
            let mut next = BTreeSet::new();
            for &q in &current {
                next.extend(self.succ(q, letter));
            }
            current = next;
            if current.is_empty() {
                return Ok(false);
            }
        }
        Ok(current.iter().any(|q| self.finals.contains(q)))
    }

    /// Buechi acceptance of the lasso word `stem · loop^ω`: true iff the
    /// loop graph reachable after the stem contains a cycle through a
    /// final-visiting edge.
    pub fn buechi_accepts_lasso(&self, stem: &[Letter], lasso: &[Letter]) -> Result<bool> {
        if self.mode != AcceptMode::Buechi {
            return Err(Error::ModeMismatch);
        }
        if lasso.is_empty() {
            return Err(Error::EmptyLoop);
        }
        let n = self.states.len();

        // States reachable from the initials over the stem.
        let mut current: BTreeSet<usize> = self.initials.clone();
        for letter in stem {
            let mut next = BTreeSet::new();
            for &q in &current {
                next.extend(self.succ(q, letter));
            }
            current = next;
        }
        if current.is_empty() {
            return Ok(false);
        }

        // One pass of the loop as an edge relation q -> (q', saw_final),
        // where final visits count the states entered during the pass.
        let mut pass: Vec<Vec<(usize, bool)>> = alloc::vec![Vec::new(); n];
        for q in 0..n {
            let mut frontier: Vec<(usize, bool)> = alloc::vec![(q, false)];
            for letter in lasso {
                let mut next: BTreeSet<(usize, bool)> = BTreeSet::new();
                for &(r, f) in &frontier {
                    for s in self.succ(r, letter) {
                        next.insert((s, f || self.finals.contains(&s)));
                    }
                }
                frontier = next.into_iter().collect();
            }
            pass[q] = frontier;
        }

        // Transitive reachability over loop passes.
        let mut reach = alloc::vec![alloc::vec![false; n]; n];
        for q in 0..n {
            for &(r, _) in &pass[q] {
                reach[q][r] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        let from_stem = |q: usize| current.contains(&q) || current.iter().any(|&s| reach[s][q]);
        for q in 0..n {
            if !from_stem(q) {
                continue;
            }
            for &(r, saw_final) in &pass[q] {
                if saw_final && (r == q || reach[r][q]) {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Extracts the `(δ, κ)` profile: a successor choice preferring final
    /// states, completed per letter to a bijection on the state set.
    pub fn extract_profile(&self) -> Result<Profile> {
        if !self.flags.co_deterministic {
            return Err(Error::NotCoDeterministic);
        }
        let n = self.states.len();
        let mut letters: Vec<Letter> = Vec::new();
        for (_, l, _) in &self.transitions {
            if !letters.contains(l) {
                letters.push(l.clone());
            }
        }
        let mut table = BTreeMap::new();
        for letter in letters {
            let mut delta: Vec<Option<usize>> = alloc::vec![None; n];
            for q in 0..n {
                let succ = self.succ(q, &letter);
                if succ.is_empty() {
                    continue;
                }
                // Prefer a final successor, tie-broken by declaration order.
                let chosen = succ
                    .iter()
                    .copied()
                    .find(|s| self.finals.contains(s))
                    .unwrap_or(succ[0]);
                delta[q] = Some(chosen);
            }
            // Co-determinism makes the chosen successors pairwise distinct.
            let image: BTreeSet<usize> = delta.iter().flatten().copied().collect();
            debug_assert_eq!(image.len(), delta.iter().flatten().count());

            // κ: a bijection from states without a successor onto states
            // outside the image of δ. Final states are paired with final
            // states whenever possible, so the bookkeeping part of the
            // permutation never moves a live (non-final) component into a
            // final state unless no other choice exists.
            let undefined: Vec<usize> = (0..n).filter(|q| delta[*q].is_none()).collect();
            let missing: Vec<usize> = (0..n).filter(|q| !image.contains(q)).collect();
            debug_assert_eq!(undefined.len(), missing.len());
            let und_f: Vec<usize> = undefined
                .iter()
                .copied()
                .filter(|q| self.finals.contains(q))
                .collect();
            let mis_f: Vec<usize> = missing
                .iter()
                .copied()
                .filter(|q| self.finals.contains(q))
                .collect();
            let paired = und_f.len().min(mis_f.len());
            let mut kappa: BTreeMap<usize, usize> = BTreeMap::new();
            for i in 0..paired {
                kappa.insert(und_f[i], mis_f[i]);
            }
            let rest_dom: Vec<usize> = undefined
                .iter()
                .copied()
                .filter(|q| !kappa.contains_key(q))
                .collect();
            let rest_img: Vec<usize> = {
                let taken: BTreeSet<usize> = kappa.values().copied().collect();
                missing
                    .iter()
                    .copied()
                    .filter(|q| !taken.contains(q))
                    .collect()
            };
            for (q, t) in rest_dom.iter().zip(rest_img.iter()) {
                kappa.insert(*q, *t);
            }
            let mut combined: Vec<usize> = alloc::vec![0; n];
            for q in 0..n {
                combined[q] = delta[q].unwrap_or_else(|| kappa[&q]);
            }
            // The combined map must be a permutation of the states.
            let seen: BTreeSet<usize> = combined.iter().copied().collect();
            debug_assert_eq!(seen.len(), n);
            table.insert(letter, LetterProfile { delta, combined });
        }
        Ok(Profile {
            n_states: n,
            table,
        })
    }
}

fn compute_flags(transitions: &[(usize, Letter, usize)]) -> Flags {
    let mut deterministic = true;
    let mut co_deterministic = true;
    for i in 0..transitions.len() {
        for j in i + 1..transitions.len() {
            let (f1, l1, t1) = &transitions[i];
            let (f2, l2, t2) = &transitions[j];
            if l1 == l2 {
                if f1 == f2 && t1 != t2 {
                    deterministic = false;
                }
                if t1 == t2 && f1 != f2 {
                    co_deterministic = false;
                }
            }
        }
    }
    Flags {
        deterministic,
        co_deterministic,
        reversible: deterministic && co_deterministic,
    }
}

/// A per-letter deterministic view of a co-deterministic automaton:
/// `δ` where a successor exists, `κ` elsewhere, combining to a bijection.
#[derive(Clone, Debug)]
pub struct Profile {
    n_states: usize,
    table: BTreeMap<Letter, LetterProfile>,
}

#[derive(Clone, Debug)]
struct LetterProfile {
    delta: Vec<Option<usize>>,
    combined: Vec<usize>,
}

impl Profile {
    /// `δ(q, letter)`, if defined.
    pub fn delta(&self, q: usize, letter: &Letter) -> Option<usize> {
        self.table.get(letter).and_then(|lp| lp.delta[q])
    }

    /// The combined `δ/κ` successor; for a letter with no transitions at
    /// all, `κ` degenerates to the identity.
    pub fn successor(&self, q: usize, letter: &Letter) -> usize {
        match self.table.get(letter) {
            Some(lp) => lp.combined[q],
            None => q,
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }
}
