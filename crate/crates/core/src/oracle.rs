//! Dense statevector reference.
//!
//! Prepares `|chi>^N`, applies the forced projectors `(I + (-1)^s O)/2` for
//! every stabiliser (all X-type, then all Z-type) and reads the logical
//! amplitudes off the signed codewords. Basis index bit `q` is data qubit `q`.

use num_complex::Complex64;

use crate::amplitude::InjectionState;
use crate::bitkit::BitWord;
use crate::coset::{Frame, Trajectory};
use crate::error::{Error, Result};
use crate::lattice::CodeLayout;
use crate::projector::{evaluate_result, Engine, Projector};

pub const MAX_ORACLE_QUBITS: usize = 13;

/// Readout residual above this means the state left the code space.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliKind {
    X,
    Z,
}

#[derive(Clone, Debug)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn prepare_product(chi: &InjectionState, num_qubits: usize) -> Result<Self> {
        if num_qubits > MAX_ORACLE_QUBITS {
            return Err(Error::OracleTooLarge { max: MAX_ORACLE_QUBITS, got: num_qubits });
        }
        // amplitude of |n> is the product of per-qubit factors
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for q in 0..num_qubits {
            let mut next = vec![Complex64::new(0.0, 0.0); amps.len() * 2];
            for (i, a) in amps.iter().enumerate() {
                next[i] = a * chi.alpha;
                next[i | (1 << q)] = a * chi.beta;
            }
            amps = next;
        }
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, basis: BitWord) -> Complex64 {
        self.amps[basis.raw() as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies the projector for outcome `forced` of the Pauli `kind` on
    /// `support`, renormalises, and returns the outcome probability. A zero
    /// probability leaves the zero vector behind.
    pub fn measure_operator(&mut self, support: BitWord, kind: PauliKind, forced: bool) -> f64 {
        let before = self.norm_sqr();
        let mask = support.raw() as usize;
        match kind {
            PauliKind::Z => {
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if ((i & mask).count_ones() & 1 == 1) != forced {
                        *a = Complex64::new(0.0, 0.0);
                    }
                }
            }
            PauliKind::X => {
                let sign = if forced { -1.0 } else { 1.0 };
                let old = self.amps.clone();
                for (i, a) in self.amps.iter_mut().enumerate() {
                    *a = (old[i] + old[i ^ mask] * sign) * 0.5;
                }
            }
        }
        let after = self.norm_sqr();
        let probability = if before > 0.0 { after / before } else { 0.0 };
        if after > 0.0 {
            let s = after.sqrt();
            self.amps.iter_mut().for_each(|a| *a /= s);
        }
        probability
    }
}

/// Result of running one trajectory through the oracle.
#[derive(Clone, Copy, Debug)]
pub struct OracleOutcome {
    pub alpha_l: Complex64,
    pub beta_l: Complex64,
    /// Product of the per-measurement outcome probabilities.
    pub probability: f64,
    pub residual: f64,
}

/// Forced measurements in the given order; each entry is (support, kind, outcome).
pub fn measure_sequence(
    sv: &mut StateVector,
    sequence: impl IntoIterator<Item = (BitWord, PauliKind, bool)>,
) -> f64 {
    let mut p = 1.0;
    for (support, kind, forced) in sequence {
        p *= sv.measure_operator(support, kind, forced);
        if p == 0.0 {
            break;
        }
    }
    p
}

/// All X-stabilisers in order, then all Z-stabilisers.
pub fn stabiliser_sequence(layout: &CodeLayout, t: &Trajectory) -> Vec<(BitWord, PauliKind, bool)> {
    let xs = layout
        .x_stabs
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, PauliKind::X, t.x_outcomes.get(i)));
    let zs = layout
        .z_stabs
        .iter()
        .enumerate()
        .map(|(i, s)| (*s, PauliKind::Z, t.z_outcomes.get(i)));
    xs.chain(zs).collect()
}

/// Normalised signed codeword for one orbit: `sum_g (-1)^(x.g) |rep XOR supp(g)>`.
/// Built by direct subset enumeration of the X generators.
fn codeword(layout: &CodeLayout, rep: BitWord, x_outcomes: BitWord) -> Vec<(usize, f64)> {
    let m = layout.x_stabs.len();
    let scale = (0.5f64).powf(m as f64 / 2.0);
    (0u64..1 << m)
        .map(|g| {
            let mut img = rep;
            let mut odd = false;
            for i in 0..m {
                if (g >> i) & 1 == 1 {
                    img ^= layout.x_stabs[i];
                    odd ^= x_outcomes.get(i);
                }
            }
            (img.raw() as usize, if odd { -scale } else { scale })
        })
        .collect()
}

/// Projects `sv` onto the two signed codewords of `frame`.
pub fn logical_readout(
    sv: &StateVector,
    layout: &CodeLayout,
    frame: &Frame,
    x_outcomes: BitWord,
) -> (Complex64, Complex64, f64) {
    let overlap = |cw: &[(usize, f64)]| -> Complex64 {
        cw.iter().map(|&(i, c)| sv.amps[i] * c).sum()
    };
    let c0 = codeword(layout, frame.rep0, x_outcomes);
    let c1 = codeword(layout, frame.rep1, x_outcomes);
    let a = overlap(&c0);
    let b = overlap(&c1);
    // norm of sv - a|c0> - b|c1>, formed explicitly
    let mut rest = sv.amps.clone();
    for (cw, coef) in [(&c0, a), (&c1, b)] {
        for &(i, c) in cw.iter() {
            rest[i] -= coef * c;
        }
    }
    let residual = rest.iter().map(|r| r.norm_sqr()).sum::<f64>().sqrt();
    (a, b, residual)
}

/// Prepares, measures and reads out one trajectory.
pub fn run_trajectory(
    layout: &CodeLayout,
    trajectory: &Trajectory,
    chi: &InjectionState,
    frame: &Frame,
) -> Result<OracleOutcome> {
    trajectory.check(layout)?;
    let mut sv = StateVector::prepare_product(chi, layout.num_data)?;
    let probability = measure_sequence(&mut sv, stabiliser_sequence(layout, trajectory));
    if probability == 0.0 {
        return Ok(OracleOutcome {
            alpha_l: Complex64::new(0.0, 0.0),
            beta_l: Complex64::new(0.0, 0.0),
            probability,
            residual: 0.0,
        });
    }
    let (alpha_l, beta_l, residual) = logical_readout(&sv, layout, frame, trajectory.x_outcomes);
    if residual > RESIDUAL_TOLERANCE {
        return Err(Error::OracleResidual(residual));
    }
    Ok(OracleOutcome { alpha_l, beta_l, probability, residual })
}

/// `|<a|b>|` for two normalised qubit states.
pub fn fidelity(a: (Complex64, Complex64), b: (Complex64, Complex64)) -> f64 {
    (a.0.conj() * b.0 + a.1.conj() * b.1).norm()
}

/// Largest disagreement between the algebraic engine and the oracle for one
/// trajectory over a set of injection states.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct Deviation {
    /// `1 - |<psi_alg|psi_oracle>|`, over states where the trajectory occurs.
    pub fidelity: f64,
    pub probability: f64,
    pub residual: f64,
}

/// Probabilities below this are compared as probabilities only.
const NEGLIGIBLE_PROBABILITY: f64 = 1e-12;

pub fn cross_check(
    projector: &Projector<'_>,
    trajectory: &Trajectory,
    chis: &[InjectionState],
    engine: Engine,
) -> Result<Deviation> {
    let layout = projector.layout();
    let result = projector.project(trajectory, engine)?;
    let mut dev = Deviation::default();
    for chi in chis {
        let (pair, p_alg) = evaluate_result(&result, chi);
        let out = run_trajectory(layout, trajectory, chi, &result.frame)?;
        dev.probability = dev.probability.max((p_alg - out.probability).abs());
        dev.residual = dev.residual.max(out.residual);
        if p_alg < NEGLIGIBLE_PROBABILITY || out.probability < NEGLIGIBLE_PROBABILITY {
            continue;
        }
        let Some(alg) = pair else { continue };
        let f = fidelity(alg, (out.alpha_l, out.beta_l));
        dev.fidelity = dev.fidelity.max((1.0 - f).abs());
    }
    Ok(dev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::coset_representatives;
    use crate::lattice::build_layout;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn product_state_amplitudes() {
        let sv = StateVector::prepare_product(&InjectionState::zero(), 5).unwrap();
        assert_eq!(sv.amplitude(w("00000")), Complex64::new(1.0, 0.0));
        assert!((sv.norm_sqr() - 1.0).abs() < 1e-15);

        let plus = StateVector::prepare_product(&InjectionState::plus(), 5).unwrap();
        for a in plus.amplitudes() {
            assert!((a.re - 0.5f64.powf(2.5)).abs() < 1e-15);
        }

        let chi = InjectionState::from_angles(1.1, 0.4);
        let sv = StateVector::prepare_product(&chi, 5).unwrap();
        let (al, be) = (chi.alpha, chi.beta);
        assert!((sv.amplitude(w("11101")) - al * be.powi(4)).norm() < 1e-15);
        assert!((sv.amplitude(w("00001")) - al.powi(4) * be).norm() < 1e-15);

        assert!(StateVector::prepare_product(&chi, 14).is_err());
    }

    #[test]
    fn z_measurement_keeps_even_terms() {
        let mut sv = StateVector::prepare_product(&InjectionState::zero(), 5).unwrap();
        assert_eq!(sv.measure_operator(w("10110"), PauliKind::Z, false), 1.0);
        assert_eq!(sv.amplitude(w("00000")), Complex64::new(1.0, 0.0));

        let chi = InjectionState::from_angles(0.9, 0.2);
        let mut sv = StateVector::prepare_product(&chi, 5).unwrap();
        let orig = sv.clone();
        sv.measure_operator(w("10110"), PauliKind::Z, false);
        for i in 0..32usize {
            let even = (i & 0b01101).count_ones() % 2 == 0;
            assert_eq!(sv.amplitudes()[i] == Complex64::new(0.0, 0.0), !even || orig.amplitudes()[i].norm() == 0.0);
        }
    }

    #[test]
    fn x_measurement_on_plus() {
        let mut sv = StateVector::prepare_product(&InjectionState::plus(), 5).unwrap();
        let p = sv.measure_operator(w("11100"), PauliKind::X, false);
        assert!((p - 1.0).abs() < 1e-12);
        let mut sv = StateVector::prepare_product(&InjectionState::plus(), 5).unwrap();
        assert!(sv.measure_operator(w("11100"), PauliKind::X, true) < 1e-15);
    }

    #[test]
    fn readout_of_zero_state() {
        let l = build_layout(2).unwrap();
        let t = Trajectory::trivial(&l);
        let frame = coset_representatives(&l, t.z_outcomes).unwrap();
        let out = run_trajectory(&l, &t, &InjectionState::zero(), &frame).unwrap();
        assert!((out.alpha_l.norm() - 1.0).abs() < 1e-12);
        assert!(out.beta_l.norm() < 1e-12);
        assert!(out.residual < 1e-10);
    }

    #[test]
    fn code_space_is_two_dimensional() {
        // the projector onto one trajectory's syndrome space has trace 2
        let l = build_layout(2).unwrap();
        let t: Trajectory = "1001".parse().unwrap();
        let mut trace = 0.0;
        for basis in 0..32u128 {
            let mut sv = StateVector { num_qubits: 5, amps: vec![Complex64::new(0.0, 0.0); 32] };
            sv.amps[basis as usize] = Complex64::new(1.0, 0.0);
            let p = measure_sequence(&mut sv, stabiliser_sequence(&l, &t));
            trace += p;
        }
        assert!((trace - 2.0).abs() < 1e-12);
    }

    #[test]
    fn measurement_order_invariance() {
        let l = build_layout(2).unwrap();
        let chi = InjectionState::from_angles(1.3, 0.8);
        for v in 0u128..16 {
            let t: Trajectory = format!("{v:04b}").parse().unwrap();
            let seq = stabiliser_sequence(&l, &t);
            let mut a = StateVector::prepare_product(&chi, 5).unwrap();
            let mut b = a.clone();
            let pa = measure_sequence(&mut a, seq.clone());
            let pb = measure_sequence(&mut b, seq.into_iter().rev());
            assert!((pa - pb).abs() < 1e-12);
            if pa > 0.0 {
                let overlap: Complex64 = a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum();
                assert!((overlap.norm() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn chained_probabilities_sum_to_one_d3() {
        let l = build_layout(3).unwrap();
        let chi = InjectionState::from_angles(2.0, -0.6);
        let mut total = 0.0;
        for v in 0u128..1 << 12 {
            let t = Trajectory::new(BitWord::from_raw(v, 6), BitWord::from_raw(v >> 6, 6));
            let mut sv = StateVector::prepare_product(&chi, 13).unwrap();
            total += measure_sequence(&mut sv, stabiliser_sequence(&l, &t));
        }
        assert!((total - 1.0).abs() < 1e-10, "{total}");
    }
}
