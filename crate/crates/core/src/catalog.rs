//! Whole-family tables of trajectories, logical states and probabilities.

use std::collections::BTreeSet;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::amplitude::{bloch, InjectionState};
use crate::bitkit::BitWord;
use crate::coset::Trajectory;
use crate::error::{Error, Result};
use crate::lattice::{CodeLayout, LayoutJson};
use crate::projector::{evaluate_result, Engine, Projector};

pub const MAX_TRIVIAL_X_DISTANCE: usize = 4;
pub const MAX_ALL_DISTANCE: usize = 3;
pub const MAX_SAMPLE_DISTANCE: usize = 6;

/// Bloch points closer than this count as the same state.
pub const BLOCH_DEDUP_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub trajectory: String,
    pub a_coeffs: Vec<i64>,
    pub b_coeffs: Vec<i64>,
    /// `None` when the trajectory cannot occur for this injection state.
    pub alpha_l: Option<Complex64>,
    pub beta_l: Option<Complex64>,
    pub bloch: Option<[f64; 3]>,
    pub probability: f64,
    /// Probability conditioned on the trivial-X sector, when the whole sector
    /// was enumerated.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector_probability: Option<f64>,
}

fn entry_for(projector: &Projector<'_>, t: &Trajectory, chi: &InjectionState) -> Result<CatalogEntry> {
    let result = projector.project(t, Engine::Solver)?;
    let (pair, probability) = evaluate_result(&result, chi);
    let bloch = pair.map(|(a, b)| bloch(a, b)).transpose()?;
    Ok(CatalogEntry {
        trajectory: t.to_string(),
        a_coeffs: result.logical.a.coeffs().to_vec(),
        b_coeffs: result.logical.b.coeffs().to_vec(),
        alpha_l: pair.map(|p| p.0),
        beta_l: pair.map(|p| p.1),
        bloch,
        probability,
        sector_probability: None,
    })
}

fn build_entries(
    layout: &CodeLayout,
    chi: &InjectionState,
    trajectories: Vec<Trajectory>,
) -> Result<Vec<CatalogEntry>> {
    let projector = Projector::new(layout);
    let mut entries = trajectories
        .par_iter()
        .map(|t| entry_for(&projector, t, chi))
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| a.trajectory.cmp(&b.trajectory));
    Ok(entries)
}

fn check_distance(layout: &CodeLayout, what: &'static str, max: usize) -> Result<()> {
    if layout.distance > max {
        return Err(Error::TooLargeFor { what, distance: layout.distance, max });
    }
    Ok(())
}

fn all_words(width: usize) -> impl Iterator<Item = BitWord> {
    (0u128..1 << width).map(move |v| BitWord::from_raw(v, width))
}

/// One entry per Z-outcome string with all X outcomes trivial.
pub fn enumerate_trivial_x(layout: &CodeLayout, chi: &InjectionState) -> Result<Vec<CatalogEntry>> {
    check_distance(layout, "full trivial-X enumeration (use sampling)", MAX_TRIVIAL_X_DISTANCE)?;
    let m = layout.num_stabs();
    let trajectories = all_words(m).map(|z| Trajectory::new(BitWord::zero(m), z)).collect();
    let mut entries = build_entries(layout, chi, trajectories)?;
    let sector: f64 = entries.iter().map(|e| e.probability).sum();
    if sector > 0.0 {
        for e in &mut entries {
            e.sector_probability = Some(e.probability / sector);
        }
    }
    Ok(entries)
}

/// Every one of the `2^(N-1)` trajectories.
pub fn enumerate_all(layout: &CodeLayout, chi: &InjectionState) -> Result<Vec<CatalogEntry>> {
    check_distance(layout, "full trajectory enumeration", MAX_ALL_DISTANCE)?;
    let m = layout.num_stabs();
    let trajectories = all_words(2 * m)
        .map(|w| Trajectory::new(BitWord::from_raw(w.raw(), m), BitWord::from_raw(w.raw() >> m, m)))
        .collect();
    build_entries(layout, chi, trajectories)
}

/// Distinct trivial-X trajectories drawn uniformly over Z-outcome strings.
/// Each entry carries its true probability for re-weighting.
pub fn sample_trajectories(
    layout: &CodeLayout,
    chi: &InjectionState,
    count: usize,
    seed: u64,
) -> Result<Vec<CatalogEntry>> {
    check_distance(layout, "trajectory sampling", MAX_SAMPLE_DISTANCE)?;
    let m = layout.num_stabs();
    let available = 1u128 << m;
    let target = (count as u128).min(available) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = BTreeSet::new();
    while drawn.len() < target {
        drawn.insert(rng.gen::<u128>() & (available - 1));
    }
    let trajectories = drawn
        .into_iter()
        .map(|z| Trajectory::new(BitWord::zero(m), BitWord::from_raw(z, m)))
        .collect();
    build_entries(layout, chi, trajectories)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistributionStats {
    pub entries: usize,
    /// Entries with a defined logical state.
    pub occurring: usize,
    pub distinct_states: usize,
    /// Radians between distinct Bloch points; `None` with fewer than two.
    pub min_separation: Option<f64>,
    pub max_separation: Option<f64>,
    pub mean_bloch: [f64; 3],
}

pub fn distribution_stats(entries: &[CatalogEntry]) -> DistributionStats {
    let mut distinct: Vec<[f64; 3]> = Vec::new();
    let mut mean = [0.0; 3];
    let mut weight = 0.0;
    let mut occurring = 0;
    for e in entries {
        let Some(b) = e.bloch else { continue };
        occurring += 1;
        for (m, x) in mean.iter_mut().zip(b) {
            *m += e.probability * x;
        }
        weight += e.probability;
        let dup = distinct.iter().any(|d| {
            let dist2: f64 = d.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum();
            dist2.sqrt() < BLOCH_DEDUP_TOLERANCE
        });
        if !dup {
            distinct.push(b);
        }
    }
    if weight > 0.0 {
        mean.iter_mut().for_each(|m| *m /= weight);
    }

    let mut min_sep: Option<f64> = None;
    let mut max_sep: Option<f64> = None;
    for (i, p) in distinct.iter().enumerate() {
        for q in &distinct[i + 1..] {
            let dot: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
            let angle = dot.clamp(-1.0, 1.0).acos();
            min_sep = Some(min_sep.map_or(angle, |m| m.min(angle)));
            max_sep = Some(max_sep.map_or(angle, |m| m.max(angle)));
        }
    }

    DistributionStats {
        entries: entries.len(),
        occurring,
        distinct_states: distinct.len(),
        min_separation: min_sep,
        max_separation: max_sep,
        mean_bloch: mean,
    }
}

/// How the injection state was specified, echoed into catalog files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ChiSpec {
    Angles { theta: f64, phi: f64 },
    Amplitudes { alpha: Complex64, beta: Complex64 },
}

impl ChiSpec {
    pub fn state(&self) -> Result<InjectionState> {
        match *self {
            ChiSpec::Angles { theta, phi } => Ok(InjectionState::from_angles(theta, phi)),
            ChiSpec::Amplitudes { alpha, beta } => InjectionState::from_amplitudes(alpha, beta),
        }
    }
}

#[derive(Serialize)]
struct CatalogDoc<'a> {
    layout: LayoutJson,
    chi: ChiSpec,
    entries: &'a [CatalogEntry],
}

pub fn write_json<W: Write>(out: W, layout: &CodeLayout, chi: ChiSpec, entries: &[CatalogEntry]) -> std::io::Result<()> {
    let doc = CatalogDoc { layout: layout.into(), chi, entries };
    let mut out = out;
    serde_json::to_writer(&mut out, &doc)?;
    out.write_all(b"\n")
}

pub fn write_csv<W: Write>(out: W, entries: &[CatalogEntry]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "trajectory", "prob", "alphaL_re", "alphaL_im", "betaL_re", "betaL_im", "bloch_x", "bloch_y", "bloch_z",
    ])?;
    let num = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for e in entries {
        w.write_record([
            e.trajectory.clone(),
            e.probability.to_string(),
            num(e.alpha_l.map(|c| c.re)),
            num(e.alpha_l.map(|c| c.im)),
            num(e.beta_l.map(|c| c.re)),
            num(e.beta_l.map(|c| c.im)),
            num(e.bloch.map(|b| b[0])),
            num(e.bloch.map(|b| b[1])),
            num(e.bloch.map(|b| b[2])),
        ])?;
    }
    w.flush()
}
