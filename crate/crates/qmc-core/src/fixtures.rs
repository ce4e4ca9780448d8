//! Ready-made model families: stabilizer-style automata built from Pauli
//! words, and local-unitary ray reachability between pure states.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::complexla::{CMatrix, CVector, Tolerances, C64};
use crate::error::{Error, Result};
use crate::props::PropositionSet;
use crate::qautomaton::QuantumAutomaton;
use crate::subspace::Subspace;

/// One tensor factor of a Pauli word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn matrix(self) -> CMatrix {
        let o = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let i = C64::new(0.0, 1.0);
        match self {
            Pauli::I => CMatrix::from_rows(&[alloc::vec![o, zero], alloc::vec![zero, o]]),
            Pauli::X => CMatrix::from_rows(&[alloc::vec![zero, o], alloc::vec![o, zero]]),
            Pauli::Y => CMatrix::from_rows(&[alloc::vec![zero, -i], alloc::vec![i, zero]]),
            Pauli::Z => CMatrix::from_rows(&[alloc::vec![o, zero], alloc::vec![zero, -o]]),
        }
    }
}

/// A phased tensor product of Pauli factors, e.g. `-ZZI` or `iXY`.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliWord {
    /// Power of `i`: the phase is `i^phase_power`, one of ±1, ±i.
    pub phase_power: u8,
    pub factors: Vec<Pauli>,
}

impl PauliWord {
    pub fn new(phase_power: u8, factors: Vec<Pauli>) -> PauliWord {
        assert!(!factors.is_empty());
        PauliWord {
            phase_power: phase_power % 4,
            factors,
        }
    }

    /// Parses `[-][i]WORD`, e.g. `"XXX"`, `"-ZZI"`, `"iY"`, `"-iXZ"`.
    pub fn parse(text: &str) -> Result<PauliWord> {
        let mut rest = text;
        let mut phase_power = 0u8;
        if let Some(r) = rest.strip_prefix('-') {
            phase_power = 2;
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase_power += 1;
            rest = r;
        }
        let mut factors = Vec::new();
        for c in rest.chars() {
            factors.push(match c {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(Error::UnknownAction(text.into())),
            });
        }
        if factors.is_empty() {
            return Err(Error::UnknownAction(text.into()));
        }
        Ok(PauliWord::new(phase_power, factors))
    }

    pub fn qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn phase(&self) -> C64 {
        match self.phase_power % 4 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    /// The `2^n × 2^n` unitary this word denotes.
    pub fn matrix(&self) -> CMatrix {
        let mut m = self.factors[0].matrix();
        for f in &self.factors[1..] {
            m = m.kron(&f.matrix());
        }
        m.scaled(self.phase())
    }

    pub fn name(&self) -> String {
        let mut s = String::new();
        match self.phase_power % 4 {
            0 => {}
            1 => s.push('i'),
            2 => s.push('-'),
            _ => s.push_str("-i"),
        }
        for f in &self.factors {
            s.push(match f {
                Pauli::I => 'I',
                Pauli::X => 'X',
                Pauli::Y => 'Y',
                Pauli::Z => 'Z',
            });
        }
        s
    }
}

/// Builds the automaton whose actions are the generators and whose initial
/// subspace is the ray of `psi`, together with the commuting join-closed
/// proposition set `{span{ψ}, span{ψ}^⊥, H}` and the invariant target
/// `span{ψ}`. `𝔸 ⊨ inv span{ψ}` iff every generator fixes the ray.
pub fn stabilizer_automaton(
    generators: &[PauliWord],
    psi: &CVector,
    tol: &Tolerances,
) -> Result<(QuantumAutomaton, PropositionSet, Subspace)> {
    let n = generators
        .first()
        .map(|g| g.qubits())
        .unwrap_or(0)
        .max(1);
    let dim = 1usize << n;
    for g in generators {
        if g.qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: 1usize << g.qubits(),
            });
        }
    }
    if psi.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: psi.dim(),
        });
    }
    let target = Subspace::ray(psi, tol)?;
    let actions: Vec<(String, CMatrix)> = generators
        .iter()
        .map(|g| (g.name(), g.matrix()))
        .collect();
    let automaton = QuantumAutomaton::new(dim, actions, target.clone(), tol)?;
    let ap = PropositionSet::new(
        alloc::vec![
            ("target".to_string(), target.clone()),
            ("rest".to_string(), target.complement(tol)),
            ("top".to_string(), Subspace::full(dim)),
        ],
        tol,
    )?;
    Ok((automaton, ap, target))
}

/// Outcome of the bounded local-equivalence search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reachability {
    Reachable,
    Unreachable,
    /// The step budget ran out before the orbit closed.
    Inconclusive,
}

/// Embeds `u` on site `i` of `n` sites with local dimension `u.rows()`.
fn single_site(u: &CMatrix, n: usize, i: usize) -> CMatrix {
    let d = u.rows();
    let mut m = CMatrix::identity(1);
    for j in 0..n {
        let factor = if j == i { u.clone() } else { CMatrix::identity(d) };
        m = m.kron(&factor);
    }
    m
}

/// Decides whether `target` lies on the orbit of `phi` under single-site
/// applications of the given local unitaries, up to a global phase.
///
/// Breadth-first over rays with ray deduplication; the budget of `4^n`
/// visited rays yields `Inconclusive` when exceeded, since the orbit of a
/// ray under an infinite group need not close.
pub fn locally_equivalent(
    u_set: &[CMatrix],
    n: usize,
    phi: &CVector,
    target: &CVector,
    tol: &Tolerances,
) -> Result<Reachability> {
    assert!(n >= 1);
    let d = u_set.first().map(|u| u.rows()).unwrap_or(2);
    let dim = d.pow(n as u32);
    if phi.dim() != dim || target.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: if phi.dim() != dim { phi.dim() } else { target.dim() },
        });
    }
    let actions: Vec<CMatrix> = u_set
        .iter()
        .flat_map(|u| (0..n).map(move |i| single_site(u, n, i)))
        .collect();
    for a in &actions {
        if !a.is_unitary(tol.unitarity_eps) {
            return Err(Error::NotUnitary {
                violation: a.unitarity_violation(),
            });
        }
    }
    let phi = phi
        .normalized(tol.membership_eps)
        .ok_or(Error::EmptyInitialSubspace)?;
    let target = target
        .normalized(tol.membership_eps)
        .ok_or(Error::EmptyInitialSubspace)?;

    let same_ray = |a: &CVector, b: &CVector| -> Result<bool> {
        Ok(crate::complexla::inner(a, b)?.norm() > 1.0 - tol.overlap_eps.max(1e-9))
    };

    let budget = 4usize.pow(n as u32).max(16);
    let mut visited: Vec<CVector> = alloc::vec![phi.clone()];
    let mut frontier: Vec<CVector> = alloc::vec![phi];
    if same_ray(&visited[0], &target)? {
        return Ok(Reachability::Reachable);
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for v in &frontier {
            for a in &actions {
                let w = a.mul_vec(v);
                if same_ray(&w, &target)? {
                    return Ok(Reachability::Reachable);
                }
                let mut seen = false;
                for old in visited.iter().chain(next.iter()) {
                    if same_ray(&w, old)? {
                        seen = true;
                        break;
                    }
                }
                if !seen {
                    next.push(w);
                }
            }
        }
        for w in &next {
            visited.push(w.clone());
            if visited.len() > budget {
                return Ok(Reachability::Inconclusive);
            }
        }
        frontier = next;
    }
    Ok(Reachability::Unreachable)
}
