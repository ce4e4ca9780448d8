//! Acceptance suite: one test per release criterion, each printing a
//! single PASS line (visible with `--nocapture`) after its assertions.
//!
//! Run with `cargo test --test acceptance`.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use qmc_core::classauto::AcceptMode;
use qmc_core::complexla::eig_unitary;
use qmc_core::fixtures::{stabilizer_automaton, PauliWord};
use qmc_core::invcheck::{check_invariant, check_invariant_oracle, check_persistence};
use qmc_core::ltcheck::{check_omega, check_safety, PropertyKind, PropertySpec};
use qmc_core::product::ProductAutomaton;
use qmc_core::qautomaton::QuantumAutomaton;
use qmc_core::{CVector, Error, Subspace, Tolerances};
use rand::Rng;

use common::{
    gaussian_vector, label_pool, perturbed, random_model, random_reversible_recognizer, rng, Model,
};

const CAMPAIGN_SEED: u64 = 2024;
const CAMPAIGN_SIZE: usize = 200;

fn campaign_model(r: &mut rand_chacha::ChaCha8Rng, tol: &Tolerances) -> Model {
    let d = r.gen_range(2..=6);
    let n_act = r.gen_range(1..=3);
    random_model(r, d, n_act, tol)
}

#[test]
fn criterion_1_differential_invariant_campaign() {
    let tol = Tolerances::default();
    let start = Instant::now();
    let mut r = rng(CAMPAIGN_SEED);
    let mut holds = 0usize;
    for _ in 0..CAMPAIGN_SIZE {
        let m = campaign_model(&mut r, &tol);
        let report = check_invariant(&m.automaton, &m.ap, &m.target, &tol).unwrap();
        let oracle = check_invariant_oracle(&m.automaton, &m.ap, &m.target, &tol).unwrap();
        assert_eq!(
            report.verdict, oracle,
            "checker disagrees with fixed-point oracle"
        );
        if report.verdict {
            holds += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "campaign took {elapsed:?}");
    assert!(holds > 0 && holds < CAMPAIGN_SIZE, "campaign verdicts one-sided");
    println!(
        "criterion 1 PASS: 200/200 checker-vs-oracle agreement ({holds} hold) in {elapsed:?}"
    );
}

#[test]
fn criterion_2_iteration_and_rank_bounds() {
    let tol = Tolerances::default();
    let same_tol = Tolerances {
        membership_eps: 1e-8,
        ..Tolerances::default()
    };
    let mut r = rng(CAMPAIGN_SEED);
    for _ in 0..CAMPAIGN_SIZE {
        let m = campaign_model(&mut r, &tol);
        let d = m.automaton.dim();
        let report = check_invariant(&m.automaton, &m.ap, &m.target, &tol).unwrap();
        assert!(report.iterations <= d, "{} iterations > d={d}", report.iterations);
        assert!(report.visited_rank <= d);
        if report.verdict {
            let span_b = Subspace::span_of(&report.visited_basis, d, &tol);
            let rs = m.automaton.reachable_subspace(&tol);
            assert!(span_b.same(&rs, &same_tol).unwrap(), "span B != RS");
        }
    }
    println!("criterion 2 PASS: iterations ≤ d, rank ≤ d, span B = RS on all 200 models");
}

#[test]
fn criterion_3_stabilizer_fixtures() {
    let tol = Tolerances::default();

    let timed = |gens: &[&str], psi: &CVector, expect: bool| {
        let words: Vec<PauliWord> = gens.iter().map(|g| PauliWord::parse(g).unwrap()).collect();
        let start = Instant::now();
        let (automaton, ap, target) = stabilizer_automaton(&words, psi, &tol).unwrap();
        let report = check_invariant(&automaton, &ap, &target, &tol).unwrap();
        let elapsed = start.elapsed();
        assert!(elapsed.as_secs_f64() < 1.0, "fixture {gens:?} took {elapsed:?}");
        assert_eq!(report.verdict, expect, "fixture {gens:?}");
        if !expect {
            let w = report.witness.expect("violation must carry a witness");
            assert!(w.replays_on(&automaton, &tol).unwrap());
            assert!(!ap.satisfies(w.last_state(), &target, &tol).unwrap());
        }
    };

    timed(&["Z"], &CVector::basis(2, 0), true);

    let s = 1.0 / 2.0f64.sqrt();
    let mut ghz = vec![0.0; 8];
    ghz[0] = s;
    ghz[7] = s;
    timed(&["XXX", "ZZI", "IZZ"], &CVector::from_reals(&ghz), true);

    timed(&["X", "Z"], &CVector::basis(2, 0), false);

    println!("criterion 3 PASS: Z/|0⟩ holds, GHZ stabilizers hold, X/|0⟩ violated with witness, each < 1 s");
}

#[test]
fn criterion_4_eigen_reduction_equivalence() {
    let tol = Tolerances::default();
    let mut r = rng(31);
    let mut checked = 0usize;
    while checked < 100 {
        let d = r.gen_range(2..=5);
        let n_act = r.gen_range(1..=2);
        let m = random_model(&mut r, d, n_act, &tol);
        let via_ts = match qmc_core::eigenreduce::check_invariant_via_ts(
            &m.automaton,
            &m.ap,
            &m.target,
            &tol,
        ) {
            Ok(report) => report,
            Err(Error::DegenerateSpectrum(_)) => continue,
            Err(e) => panic!("unexpected error {e}"),
        };
        let direct = check_invariant(&m.automaton, &m.ap, &m.target, &tol).unwrap();
        assert_eq!(via_ts.verdict, direct.verdict, "eigen engine disagrees");

        // Eigenstate dichotomy: each eigenstate sits in RS or RS^⊥.
        let rs = m.automaton.reachable_subspace(&tol);
        for (_, u) in m.automaton.actions() {
            for (_, v) in eig_unitary(u, &tol).unwrap() {
                let inside = v.sub(&rs.project(&v)).norm();
                let outside = rs.project(&v).norm();
                assert!(
                    inside.min(outside) <= 1e-7,
                    "dichotomy residual {}",
                    inside.min(outside)
                );
            }
        }
        checked += 1;
    }
    println!("criterion 4 PASS: 100/100 eigen-reduction agreement, dichotomy residual ≤ 1e-7");
}

/// A (model, reversible recognizer, product) triple for criteria 5-7.
struct Pair {
    model: Model,
    spec: PropertySpec,
    product: ProductAutomaton,
}

fn generate_pairs(count: usize, tol: &Tolerances) -> Vec<Pair> {
    let mut r = rng(57);
    let mut pairs = Vec::new();
    while pairs.len() < count {
        let d = r.gen_range(2..=4);
        let n_act = r.gen_range(1..=2);
        let model = random_model(&mut r, d, n_act, tol);
        let letters = label_pool(&model, tol);
        let n_states = r.gen_range(2..=4);
        let recognizer =
            random_reversible_recognizer(&mut r, &letters, n_states, AcceptMode::Finite);
        assert!(recognizer.flags().reversible);
        let product = match ProductAutomaton::build(&model.automaton, &model.ap, &recognizer, tol)
        {
            Ok(p) => p,
            // No recognizer step matches the initial labels; redraw.
            Err(Error::EmptyInitialSubspace) => continue,
            Err(e) => panic!("unexpected product error {e}"),
        };
        let spec = PropertySpec {
            kind: PropertyKind::Safety,
            recognizer,
            sound_for_violation: false,
        };
        pairs.push(Pair {
            model,
            spec,
            product,
        });
    }
    pairs
}

#[test]
fn criterion_5_product_soundness() {
    let tol = Tolerances::default();
    let pairs = generate_pairs(50, &tol);
    let mut support_checks = 0usize;
    let mut r = rng(58);
    for pair in &pairs {
        for (_, v) in pair.product.automaton().actions() {
            assert!(
                v.unitarity_violation() <= 1e-8,
                "product action violates unitarity by {}",
                v.unitarity_violation()
            );
        }
    }
    // 500 random product states against the exhaustive subset enumeration.
    while support_checks < 500 {
        let pair = &pairs[r.gen_range(0..pairs.len())];
        let nq = pair.product.n_classical();
        if nq > 4 {
            continue;
        }
        let dim = pair.product.automaton().dim();
        let v = gaussian_vector(&mut r, dim);
        let support = pair.product.meet_support(&v, &tol).unwrap();

        // Independent oracle: among all 2^|Q|-1 nonempty subsets R, collect
        // those with v ∈ H ⊗ span{R}; the intersection of the containing
        // sets is the minimal one.
        let k = dim / nq;
        let member_of = |set: &BTreeSet<usize>| -> bool {
            (0..nq).filter(|q| !set.contains(q)).all(|q| {
                let norm_sq: f64 = (0..k)
                    .map(|j| v.entries()[j * nq + q].norm_sqr())
                    .sum();
                norm_sq.sqrt() <= tol.membership_eps
            })
        };
        let mut minimal: Option<BTreeSet<usize>> = None;
        for mask in 1u32..(1 << nq) {
            let set: BTreeSet<usize> = (0..nq).filter(|q| mask & (1 << q) != 0).collect();
            if member_of(&set) {
                minimal = Some(match minimal {
                    None => set,
                    Some(prev) => prev.intersection(&set).copied().collect(),
                });
            }
        }
        let minimal = minimal.expect("the full set always contains v");
        assert!(member_of(&minimal), "minimal set from enumeration inconsistent");
        let support_set: BTreeSet<usize> = support.into_iter().collect();
        assert_eq!(support_set, minimal, "meet support mismatch");
        support_checks += 1;
    }
    println!("criterion 5 PASS: product unitarity ≤ 1e-8; meet support matches enumeration on 500 states");
}

#[test]
fn criterion_6_safety_theorem_consistency() {
    let tol = Tolerances::default();
    let start = Instant::now();
    let pairs = generate_pairs(50, &tol);
    let mut violated = 0usize;
    for pair in &pairs {
        let report = check_safety(&pair.model.automaton, &pair.model.ap, &pair.spec, &tol)
            .unwrap();
        let d = pair.model.automaton.dim();
        let nq = pair.spec.recognizer.state_count();
        if !report.verdict {
            violated += 1;
            let w = report.witness.as_ref().expect("violation carries a witness");
            assert!(w.replays_on(&pair.model.automaton, &tol).unwrap());
            let word: Vec<_> = w
                .states
                .iter()
                .map(|s| pair.model.ap.label(s, &tol).unwrap())
                .collect();
            assert!(
                pair.spec.recognizer.accepts_word(&word).unwrap(),
                "witness trace is not a bad prefix"
            );
        } else {
            // No trace from the initial basis up to the stated depth may be
            // accepted by the bad-prefix recognizer.
            let depth = (2 * d * nq).min(8);
            let fragments = pair
                .model
                .automaton
                .enumerate_fragments(pair.model.automaton.initial().basis(), depth);
            for f in &fragments {
                let word: Vec<_> = f
                    .states
                    .iter()
                    .map(|s| pair.model.ap.label(s, &tol).unwrap())
                    .collect();
                assert!(
                    !pair.spec.recognizer.accepts_word(&word).unwrap(),
                    "verdict true but an accepted prefix exists at depth {}",
                    f.steps.len()
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 6 took {elapsed:?}");
    assert!(violated > 0 && violated < 50, "safety verdicts one-sided");
    println!(
        "criterion 6 PASS: 50/50 safety verdicts consistent ({violated} violated) in {elapsed:?}"
    );
}

#[test]
fn criterion_7_persistence_and_omega_coincide_with_invariant() {
    let tol = Tolerances::default();
    let mut r = rng(CAMPAIGN_SEED);
    for _ in 0..CAMPAIGN_SIZE {
        let m = campaign_model(&mut r, &tol);
        let inv = check_invariant(&m.automaton, &m.ap, &m.target, &tol).unwrap();
        let pers = check_persistence(&m.automaton, &m.ap, &m.target, &tol).unwrap();
        assert_eq!(inv.verdict, pers.verdict, "pers != inv");
    }

    // ω-verdicts equal the product-invariant (safety) verdicts on the same
    // recognizers, flipped to Buechi mode.
    let pairs = generate_pairs(50, &tol);
    for pair in &pairs {
        let safety = check_safety(&pair.model.automaton, &pair.model.ap, &pair.spec, &tol)
            .unwrap();
        let omega_spec = PropertySpec {
            kind: PropertyKind::Omega,
            recognizer: {
                let rec = &pair.spec.recognizer;
                qmc_core::classauto::ClassicalAutomaton::new(
                    rec.state_names().to_vec(),
                    rec.transitions()
                        .iter()
                        .map(|(q, l, p)| {
                            (
                                rec.state_name(*q).to_string(),
                                l.clone(),
                                rec.state_name(*p).to_string(),
                            )
                        })
                        .collect(),
                    rec.initials()
                        .iter()
                        .map(|&q| rec.state_name(q).to_string())
                        .collect(),
                    rec.finals()
                        .iter()
                        .map(|&q| rec.state_name(q).to_string())
                        .collect(),
                    AcceptMode::Buechi,
                )
                .unwrap()
            },
            sound_for_violation: false,
        };
        let omega = check_omega(&pair.model.automaton, &pair.model.ap, &omega_spec, &tol)
            .unwrap();
        assert_eq!(omega.verdict, safety.verdict, "omega != product invariant");
    }
    println!("criterion 7 PASS: pers ≡ inv on 200 models; ω ≡ product invariant on 50 pairs");
}

#[test]
fn criterion_8_noise_robustness() {
    let tol = Tolerances::default();
    let mut r = rng(CAMPAIGN_SEED);
    let mut noise_rng = rng(99);
    for _ in 0..CAMPAIGN_SIZE {
        let m = campaign_model(&mut r, &tol);
        let clean = check_invariant(&m.automaton, &m.ap, &m.target, &tol).unwrap();

        let noisy_actions: Vec<_> = m
            .automaton
            .actions()
            .iter()
            .map(|(name, u)| (name.clone(), perturbed(&mut noise_rng, u, 1e-12)))
            .collect();
        let noisy = QuantumAutomaton::new(
            m.automaton.dim(),
            noisy_actions,
            m.automaton.initial().clone(),
            &tol,
        )
        .expect("1e-12 noise stays within the unitarity tolerance");
        let report = check_invariant(&noisy, &m.ap, &m.target, &tol).unwrap();
        assert_eq!(report.verdict, clean.verdict, "verdict flipped under 1e-12 noise");
    }
    println!("criterion 8 PASS: no verdict changes under 1e-12 entrywise noise on 200 models");
}
