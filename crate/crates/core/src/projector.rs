//! Signed X-stabiliser projection of a coset onto the two logical orbits.
//!
//! The X-stabiliser group splits the coset into two orbits by logical-Z
//! parity. Relative to the frame representatives, a coset element `z` in
//! orbit `k` is `rep_k XOR supp(g)` for a unique generator subset `g`, and it
//! contributes `(-1)^(x . g) * alpha^(N-w) beta^w` (with `w = |z|`) to the
//! logical amplitude `S_k`. The projected, unnormalised state is
//! `2^-(N-1)/2 * (S_0 |c_0> + S_1 |c_1>)` with `|c_k>` the signed orbit sums,
//! hence `P = 2^-(N-1)/2 * (|S_0|^2 + |S_1|^2)`.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::amplitude::{bloch, normalize_pair, InjectionState, LogicalState};
use crate::bitkit::{masked_parity, BitWord, Gf2Solver};
use crate::coset::{frame_from, CosetPlan, Frame, GrayCoset, Trajectory};
use crate::error::{Error, Result};
use crate::lattice::CodeLayout;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Expands every X-group element for every coset element. Cost `2^N`.
    Expansion,
    /// Solves for the group element directly. Cost `2^((N+1)/2)` solves.
    #[default]
    Solver,
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "expansion" => Ok(Engine::Expansion),
            "solver" => Ok(Engine::Solver),
            other => Err(format!("unknown engine {other:?} (expected expansion|solver)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionResult {
    pub trajectory: Trajectory,
    pub logical: LogicalState,
    pub frame: Frame,
}

impl ProjectionResult {
    pub fn num_data(&self) -> usize {
        self.logical.a.num_data()
    }

    pub fn trajectory_probability(&self, chi: &InjectionState) -> f64 {
        let (a, b) = self.logical.evaluate(chi);
        let m = (self.num_data() - 1) / 2;
        (a.norm_sqr() + b.norm_sqr()) * 0.5f64.powi(m as i32)
    }

    /// Normalised `(alpha_L, beta_L)`, or `ZeroProbabilityTrajectory`.
    pub fn logical_amplitudes(&self, chi: &InjectionState) -> Result<(Complex64, Complex64)> {
        Ok(self.logical.normalize(chi)?.0)
    }

    pub fn bloch(&self, chi: &InjectionState) -> Result<[f64; 3]> {
        let (a, b) = self.logical_amplitudes(chi)?;
        bloch(a, b)
    }
}

/// Reusable per-layout state: the X-generator solver.
#[derive(Clone, Debug)]
pub struct Projector<'a> {
    layout: &'a CodeLayout,
    solver: Gf2Solver,
}

/// Cosets at least this large are split across the rayon pool.
const PARALLEL_THRESHOLD: u64 = 1 << 14;
const PARTS: usize = 64;

impl<'a> Projector<'a> {
    pub fn new(layout: &'a CodeLayout) -> Self {
        Projector { layout, solver: Gf2Solver::new(&layout.x_stabs) }
    }

    pub fn layout(&self) -> &CodeLayout {
        self.layout
    }

    pub fn project(&self, trajectory: &Trajectory, engine: Engine) -> Result<ProjectionResult> {
        trajectory.check(self.layout)?;
        let plan = Arc::new(CosetPlan::new(self.layout, trajectory.z_outcomes)?);
        let frame = frame_from(self.layout, &self.solver, &plan)?;
        let parts = if plan.len() >= PARALLEL_THRESHOLD { PARTS } else { 1 };
        let n = self.layout.num_data;

        let logical = if engine == Engine::Solver && trajectory.has_trivial_x() {
            // all signs are +1: parity-split weight counts over the coset
            let gray = GrayCoset::new(self.layout, &plan)?;
            let lz = self.layout.logical_z;
            (0..parts)
                .into_par_iter()
                .map(|k| {
                    let mut counts = vec![0u64; 2 * (n + 1)];
                    for z in gray.partition(k, parts) {
                        counts[masked_parity(z, lz) as usize * (n + 1) + z.hamming() as usize] += 1;
                    }
                    counts_to_state(n, &counts, None)
                })
                .try_reduce(|| LogicalState::zero(n), |a, b| a.checked_add(&b))?
        } else {
            (0..parts)
                .into_par_iter()
                .map(|k| self.accumulate(&plan, k, parts, trajectory, &frame, engine))
                .try_reduce(|| LogicalState::zero(n), |a, b| a.checked_add(&b))?
        };

        Ok(ProjectionResult { trajectory: *trajectory, logical, frame })
    }

    fn accumulate(
        &self,
        plan: &Arc<CosetPlan>,
        part: usize,
        parts: usize,
        trajectory: &Trajectory,
        frame: &Frame,
        engine: Engine,
    ) -> Result<LogicalState> {
        let n = self.layout.num_data;
        let lz = self.layout.logical_z;
        let reps = [frame.rep0, frame.rep1];
        let stream = plan.partition(part, parts);

        // counts per (orbit, weight, sign)
        let mut counts = vec![[0u64; 2]; 2 * (n + 1)];
        let slot = |orbit: usize, weight: usize| orbit * (n + 1) + weight;
        let mut stray: Option<BitWord> = None;

        match engine {
            Engine::Solver => {
                stream.for_each(|z| {
                    let orbit = masked_parity(z, lz) as usize;
                    match self.solver.solve_in_span(z ^ reps[orbit]) {
                        Some(g) => {
                            let negative = masked_parity(g, trajectory.x_outcomes) as usize;
                            counts[slot(orbit, z.hamming() as usize)][negative] += 1;
                        }
                        None => {
                            stray.get_or_insert(z);
                        }
                    }
                });
            }
            Engine::Expansion => {
                let group = GroupWalk::new(&self.layout.x_stabs, trajectory.x_outcomes);
                stream.for_each(|z| {
                    let orbit = masked_parity(z, lz) as usize;
                    let weight = z.hamming() as usize;
                    let mut hits = 0;
                    for (image, negative) in group.images(z) {
                        if image == reps[orbit] {
                            counts[slot(orbit, weight)][negative as usize] += 1;
                            hits += 1;
                        }
                    }
                    if hits != 1 {
                        stray.get_or_insert(z);
                    }
                });
            }
        }
        if let Some(z) = stray {
            return Err(Error::FrameMismatch(z.to_string()));
        }

        let flat: Vec<u64> = counts.iter().map(|c| c[0]).collect();
        let negative: Vec<u64> = counts.iter().map(|c| c[1]).collect();
        counts_to_state(n, &flat, Some(&negative))
    }
}

/// Turns per-(orbit, weight) counts into polynomials; `negative` holds the
/// counts entering with a minus sign.
fn counts_to_state(n: usize, positive: &[u64], negative: Option<&[u64]>) -> Result<LogicalState> {
    let mut state = LogicalState::zero(n);
    for orbit in 0..2 {
        let poly = if orbit == 0 { &mut state.a } else { &mut state.b };
        for w in 0..=n {
            let i = orbit * (n + 1) + w;
            poly.add_terms(w, 1, positive[i])?;
            if let Some(neg) = negative {
                poly.add_terms(w, -1, neg[i])?;
            }
        }
    }
    Ok(state)
}

/// Gray-code walk over the X-stabiliser group: yields `z XOR supp(g)` and
/// whether `x . g` is odd, for every subset `g`.
struct GroupWalk<'g> {
    gens: &'g [BitWord],
    signs: BitWord,
}

impl<'g> GroupWalk<'g> {
    fn new(gens: &'g [BitWord], signs: BitWord) -> Self {
        GroupWalk { gens, signs }
    }

    fn images(&self, z: BitWord) -> impl Iterator<Item = (BitWord, bool)> + '_ {
        let total = 1u64 << self.gens.len();
        let mut current = z;
        let mut negative = false;
        (0..total).map(move |step| {
            if step > 0 {
                let flip = step.trailing_zeros() as usize;
                current ^= self.gens[flip];
                negative ^= self.signs.get(flip);
            }
            (current, negative)
        })
    }
}

/// One-shot convenience wrapper.
pub fn project(layout: &CodeLayout, trajectory: &Trajectory, engine: Engine) -> Result<ProjectionResult> {
    Projector::new(layout).project(trajectory, engine)
}

/// Every signed image of `z` under the X-stabiliser group, in Gray-code order.
pub fn signed_images(layout: &CodeLayout, x_outcomes: BitWord, z: BitWord) -> Vec<(BitWord, i8)> {
    GroupWalk::new(&layout.x_stabs, x_outcomes)
        .images(z)
        .map(|(img, neg)| (img, if neg { -1 } else { 1 }))
        .collect()
}

/// Normalised amplitudes and probability, treating zero probability as a
/// value rather than an error.
pub fn evaluate_result(
    result: &ProjectionResult,
    chi: &InjectionState,
) -> (Option<(Complex64, Complex64)>, f64) {
    let p = result.trajectory_probability(chi);
    match normalize_pair(result.logical.evaluate(chi)) {
        Ok((pair, _)) => (Some(pair), p),
        Err(_) => (None, p),
    }
}
