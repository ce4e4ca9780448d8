//! Shared generators for the integration and acceptance suites: seeded
//! random unitaries, orthogonal decompositions, commuting join-closed
//! proposition sets and whole models built on top of them.
//!
//! Not every helper is used by every test binary that includes this module.
#![allow(dead_code)]

use std::collections::BTreeSet;

use qmc_core::complexla::orthonormalize;
use qmc_core::props::PropositionSet;
use qmc_core::qautomaton::QuantumAutomaton;
use qmc_core::{CMatrix, CVector, Subspace, Tolerances, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian via Box-Muller.
pub fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = 2.0 * core::f64::consts::PI * u2;
    C64::new(r * theta.cos(), r * theta.sin())
}

pub fn gaussian_vector<R: Rng>(rng: &mut R, d: usize) -> CVector {
    CVector::new((0..d).map(|_| gaussian(rng)).collect())
}

/// Haar-ish random unitary: QR (Gram-Schmidt) of a complex Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> CMatrix {
    let tol = Tolerances::default();
    loop {
        let cols: Vec<CVector> = (0..d).map(|_| gaussian_vector(rng, d)).collect();
        let ortho = orthonormalize(&cols, &tol);
        if ortho.len() < d {
            continue; // measure-zero rank deficiency
        }
        let mut m = CMatrix::zeros(d, d);
        for (j, v) in ortho.iter().enumerate() {
            for i in 0..d {
                m.set(i, j, v.entries()[i]);
            }
        }
        return m;
    }
}

/// An orthonormal basis of the space partitioned into nonempty blocks;
/// spans of block unions pairwise commute and are closed under joins.
pub struct Decomposition {
    pub cols: Vec<CVector>,
    pub blocks: Vec<Vec<usize>>,
}

pub fn random_decomposition<R: Rng>(rng: &mut R, d: usize) -> Decomposition {
    let w = random_unitary(rng, d);
    let cols: Vec<CVector> = (0..d).map(|j| w.column(j)).collect();
    let n_blocks = rng.gen_range(1..=d.min(3));
    // Every block gets one index, the rest are spread at random.
    let mut blocks: Vec<Vec<usize>> = (0..n_blocks).map(|b| vec![b]).collect();
    for k in n_blocks..d {
        blocks[rng.gen_range(0..n_blocks)].push(k);
    }
    Decomposition { cols, blocks }
}

impl Decomposition {
    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    /// Span of the basis columns belonging to the given blocks.
    pub fn union_span(&self, block_ids: &BTreeSet<usize>, tol: &Tolerances) -> Subspace {
        let vectors: Vec<CVector> = block_ids
            .iter()
            .flat_map(|&b| self.blocks[b].iter().map(|&k| self.cols[k].clone()))
            .collect();
        Subspace::span_of(&vectors, self.dim(), tol)
    }

    /// A unitary that is block-diagonal in this basis, so every block-union
    /// span is invariant under it.
    pub fn block_unitary<R: Rng>(&self, rng: &mut R) -> CMatrix {
        let d = self.dim();
        let mut m = CMatrix::zeros(d, d);
        for block in &self.blocks {
            let r = random_unitary(rng, block.len());
            // Contribution Σ_{a,b} r[a,b] |w_{block[a]}⟩⟨w_{block[b]}|.
            for (a, &ia) in block.iter().enumerate() {
                for (b, &ib) in block.iter().enumerate() {
                    let c = r.get(a, b);
                    for i in 0..d {
                        for j in 0..d {
                            let add = c * self.cols[ia].entries()[i]
                                * self.cols[ib].entries()[j].conj();
                            m.set(i, j, m.get(i, j) + add);
                        }
                    }
                }
            }
        }
        m
    }
}

/// A commuting, join-closed proposition set of block-union spans, plus an
/// invariant target drawn from the same decomposition.
pub fn random_ap_and_target<R: Rng>(
    rng: &mut R,
    dec: &Decomposition,
    tol: &Tolerances,
) -> (PropositionSet, Subspace) {
    let n_blocks = dec.blocks.len();
    let mut seeds: Vec<BTreeSet<usize>> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let set: BTreeSet<usize> = (0..n_blocks).filter(|_| rng.gen_bool(0.5)).collect();
        if !set.is_empty() && !seeds.contains(&set) {
            seeds.push(set);
        }
    }
    let all: BTreeSet<usize> = (0..n_blocks).collect();
    if seeds.is_empty() {
        seeds.push(all.clone());
    }
    // Close under union; joins of block-union spans are exactly unions.
    let mut closed = seeds;
    loop {
        let mut grew = false;
        for i in 0..closed.len() {
            for j in 0..closed.len() {
                let u: BTreeSet<usize> = closed[i].union(&closed[j]).copied().collect();
                if !closed.contains(&u) {
                    closed.push(u);
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let props: Vec<(String, Subspace)> = closed
        .iter()
        .enumerate()
        .map(|(i, set)| (format!("p{i}"), dec.union_span(set, tol)))
        .collect();
    let ap = PropositionSet::new(props, tol).expect("block spans validate");
    assert!(ap.is_validated());

    let target_ids: BTreeSet<usize> = (0..n_blocks).filter(|_| rng.gen_bool(0.6)).collect();
    let target = dec.union_span(&target_ids, tol);
    (ap, target)
}

pub struct Model {
    pub automaton: QuantumAutomaton,
    pub ap: PropositionSet,
    pub target: Subspace,
}

/// A campaign model: unitaries from QR of complex Gaussians (half of them
/// block-diagonal in the decomposition basis so that both verdicts occur),
/// AP and target from a shared orthogonal decomposition.
pub fn random_model<R: Rng>(rng: &mut R, d: usize, n_actions: usize, tol: &Tolerances) -> Model {
    let dec = random_decomposition(rng, d);
    let (ap, target) = random_ap_and_target(rng, &dec, tol);

    let actions: Vec<(String, CMatrix)> = (0..n_actions)
        .map(|k| {
            let u = if rng.gen_bool(0.5) {
                dec.block_unitary(rng)
            } else {
                random_unitary(rng, d)
            };
            (format!("a{k}"), u)
        })
        .collect();

    // Initial subspace: usually inside a block-union span, sometimes fully
    // random.
    let initial = loop {
        let vectors: Vec<CVector> = if rng.gen_bool(0.7) {
            let ids: BTreeSet<usize> =
                (0..dec.blocks.len()).filter(|_| rng.gen_bool(0.5)).collect();
            let span = dec.union_span(&ids, tol);
            if span.rank() == 0 {
                continue;
            }
            let count = rng.gen_range(1..=span.rank());
            (0..count)
                .map(|_| {
                    let mut v = CVector::zero(d);
                    for b in span.basis() {
                        v.axpy(gaussian(rng), b);
                    }
                    v
                })
                .collect()
        } else {
            (0..rng.gen_range(1..=2)).map(|_| gaussian_vector(rng, d)).collect()
        };
        let s = Subspace::span_of(&vectors, d, tol);
        if s.rank() > 0 {
            break s;
        }
    };

    let automaton =
        QuantumAutomaton::new(d, actions, initial, tol).expect("generated model is well formed");
    Model {
        automaton,
        ap,
        target,
    }
}

/// Adds independent uniform noise of the given magnitude to every entry.
pub fn perturbed<R: Rng>(rng: &mut R, m: &CMatrix, magnitude: f64) -> CMatrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let noise = C64::new(
                rng.gen_range(-magnitude..magnitude),
                rng.gen_range(-magnitude..magnitude),
            );
            out.set(i, j, m.get(i, j) + noise);
        }
    }
    out
}

use qmc_core::classauto::{AcceptMode, ClassicalAutomaton, Letter};

/// Letters that actually occur as labels of states reachable from the
/// initial basis within a couple of steps.
pub fn label_pool(model: &Model, tol: &Tolerances) -> Vec<Letter> {
    let mut letters: Vec<Letter> = Vec::new();
    let fragments = model
        .automaton
        .enumerate_fragments(model.automaton.initial().basis(), 2);
    for f in &fragments {
        for s in &f.states {
            let l = model.ap.label(s, tol).expect("label");
            if !letters.contains(&l) {
                letters.push(l);
            }
        }
    }
    letters.truncate(4);
    letters
}

/// A reversible recognizer: per letter, a random partial injection on the
/// states. State 0 is initial, the last state final.
pub fn random_reversible_recognizer<R: Rng>(
    rng: &mut R,
    letters: &[Letter],
    n_states: usize,
    mode: AcceptMode,
) -> ClassicalAutomaton {
    assert!(n_states >= 2);
    let names: Vec<String> = (0..n_states).map(|i| format!("s{i}")).collect();
    let mut transitions = Vec::new();
    for letter in letters {
        // Fisher-Yates permutation, thinned to a partial injection.
        let mut perm: Vec<usize> = (0..n_states).collect();
        for i in (1..n_states).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        for q in 0..n_states {
            if rng.gen_bool(0.7) {
                transitions.push((names[q].clone(), letter.clone(), names[perm[q]].clone()));
            }
        }
    }
    ClassicalAutomaton::new(
        names.clone(),
        transitions,
        vec![names[0].clone()],
        vec![names[n_states - 1].clone()],
        mode,
    )
    .expect("generated recognizer is well formed")
}
