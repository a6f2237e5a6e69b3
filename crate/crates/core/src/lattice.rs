//! Unrotated planar surface code layout.
//!
//! Cells of a `(2d-1) x (2d-1)` grid are assigned as follows:
//!
//! * `(row + col)` even: data qubit, numbered row-major from 0;
//! * row odd, col even: Z-type (plaquette) ancilla;
//! * row even, col odd: X-type (vertex) ancilla.
//!
//! Each ancilla acts on its grid neighbours. The logical Z chain is row 0 and
//! the logical X chain is column 0, so the logical readout is the parity of
//! the first `d` data qubits.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::bitkit::{masked_parity, BitWord, MAX_WIDTH};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeLayout {
    pub distance: usize,
    pub num_data: usize,
    pub x_stabs: Vec<BitWord>,
    pub z_stabs: Vec<BitWord>,
    pub logical_z: BitWord,
    pub logical_x: BitWord,
    /// Set bits of each Z support, ascending.
    pub z_aux_index: Vec<Vec<usize>>,
    /// Grid `(row, col)` of each data qubit.
    pub data_coords: Vec<(usize, usize)>,
}

impl CodeLayout {
    /// Number of stabilisers of each type, `(N-1)/2`.
    pub fn num_stabs(&self) -> usize {
        self.z_stabs.len()
    }

    /// Length of a full trajectory string (X bits then Z bits).
    pub fn trajectory_len(&self) -> usize {
        self.x_stabs.len() + self.z_stabs.len()
    }
}

pub fn num_data_qubits(d: usize) -> usize {
    d * d + (d - 1) * (d - 1)
}

#[allow(clippy::needless_range_loop)]
pub fn build_layout(d: usize) -> Result<CodeLayout> {
    if d < 2 {
        return Err(Error::DistanceTooSmall(d));
    }
    let n = num_data_qubits(d);
    if n > MAX_WIDTH {
        return Err(Error::DistanceTooLarge(d));
    }
    let side = 2 * d - 1;

    let mut index = vec![vec![None; side]; side];
    let mut data_coords = Vec::with_capacity(n);
    for r in 0..side {
        for c in 0..side {
            if (r + c) % 2 == 0 {
                index[r][c] = Some(data_coords.len());
                data_coords.push((r, c));
            }
        }
    }
    debug_assert_eq!(data_coords.len(), n);

    let support = |r: usize, c: usize| {
        let mut w = BitWord::zero(n);
        let neighbours = [
            (r.checked_sub(1), Some(c)),
            (Some(r + 1), Some(c)),
            (Some(r), c.checked_sub(1)),
            (Some(r), Some(c + 1)),
        ];
        for (nr, nc) in neighbours {
            if let (Some(nr), Some(nc)) = (nr, nc) {
                if nr < side && nc < side {
                    if let Some(q) = index[nr][nc] {
                        w.set(q, true);
                    }
                }
            }
        }
        w
    };

    let mut x_stabs = Vec::new();
    let mut z_stabs = Vec::new();
    for r in 0..side {
        for c in 0..side {
            match (r % 2, c % 2) {
                (1, 0) => z_stabs.push(support(r, c)),
                (0, 1) => x_stabs.push(support(r, c)),
                _ => {}
            }
        }
    }

    let logical_z = BitWord::from_indices(n, (0..side).step_by(2).filter_map(|c| index[0][c]));
    let logical_x = BitWord::from_indices(n, (0..side).step_by(2).filter_map(|r| index[r][0]));
    let z_aux_index = z_stabs.iter().map(|s| s.ones().collect()).collect();

    Ok(CodeLayout {
        distance: d,
        num_data: n,
        x_stabs,
        z_stabs,
        logical_z,
        logical_x,
        z_aux_index,
        data_coords,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NumData { expected: usize, got: usize },
    StabCount { kind: char, expected: usize, got: usize },
    Width { what: String },
    SupportWeight { kind: char, index: usize, weight: u32 },
    StabsAnticommute { x: usize, z: usize },
    LogicalZAnticommutes { x: usize },
    LogicalXAnticommutes { z: usize },
    LogicalsCommute,
    LogicalZWeight { expected: usize, got: u32 },
    LogicalZNotSpanning,
    AuxIndex { index: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NumData { expected, got } => {
                write!(f, "num_data is {got}, expected {expected}")
            }
            Violation::StabCount { kind, expected, got } => {
                write!(f, "{got} {kind}-stabilisers, expected {expected}")
            }
            Violation::Width { what } => write!(f, "{what} has the wrong width"),
            Violation::SupportWeight { kind, index, weight } => {
                write!(f, "{kind}-stabiliser {index} has weight {weight}")
            }
            Violation::StabsAnticommute { x, z } => {
                write!(f, "X-stabiliser {x} and Z-stabiliser {z} overlap oddly")
            }
            Violation::LogicalZAnticommutes { x } => {
                write!(f, "logical Z anticommutes with X-stabiliser {x}")
            }
            Violation::LogicalXAnticommutes { z } => {
                write!(f, "logical X anticommutes with Z-stabiliser {z}")
            }
            Violation::LogicalsCommute => write!(f, "logical X and Z overlap evenly"),
            Violation::LogicalZWeight { expected, got } => {
                write!(f, "logical Z has weight {got}, expected {expected}")
            }
            Violation::LogicalZNotSpanning => {
                write!(f, "logical Z is not a connected left-to-right chain")
            }
            Violation::AuxIndex { index } => {
                write!(f, "z_aux_index row {index} does not match its support")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_layout(layout: &CodeLayout) -> ValidationReport {
    let mut v = Vec::new();
    let d = layout.distance;
    let n = layout.num_data;

    let expected_n = if d >= 1 { num_data_qubits(d) } else { 0 };
    if n != expected_n {
        v.push(Violation::NumData { expected: expected_n, got: n });
    }
    let m = n.saturating_sub(1) / 2;
    for (kind, stabs) in [('X', &layout.x_stabs), ('Z', &layout.z_stabs)] {
        if stabs.len() != m {
            v.push(Violation::StabCount { kind, expected: m, got: stabs.len() });
        }
    }

    let all_words = layout
        .x_stabs
        .iter()
        .chain(&layout.z_stabs)
        .chain([&layout.logical_z, &layout.logical_x]);
    if all_words.into_iter().any(|w| w.width() != n) {
        v.push(Violation::Width { what: "stabiliser or logical support".into() });
        return ValidationReport { violations: v };
    }

    for (kind, stabs) in [('X', &layout.x_stabs), ('Z', &layout.z_stabs)] {
        for (index, s) in stabs.iter().enumerate() {
            let weight = s.hamming();
            if weight != 3 && weight != 4 {
                v.push(Violation::SupportWeight { kind, index, weight });
            }
        }
    }

    for (x, xs) in layout.x_stabs.iter().enumerate() {
        for (z, zs) in layout.z_stabs.iter().enumerate() {
            if masked_parity(*xs, *zs) {
                v.push(Violation::StabsAnticommute { x, z });
            }
        }
    }
    for (x, xs) in layout.x_stabs.iter().enumerate() {
        if masked_parity(layout.logical_z, *xs) {
            v.push(Violation::LogicalZAnticommutes { x });
        }
    }
    for (z, zs) in layout.z_stabs.iter().enumerate() {
        if masked_parity(layout.logical_x, *zs) {
            v.push(Violation::LogicalXAnticommutes { z });
        }
    }
    if !masked_parity(layout.logical_z, layout.logical_x) {
        v.push(Violation::LogicalsCommute);
    }

    let lz_weight = layout.logical_z.hamming();
    if lz_weight as usize != d {
        v.push(Violation::LogicalZWeight { expected: d, got: lz_weight });
    }
    if !spans_left_to_right(layout) {
        v.push(Violation::LogicalZNotSpanning);
    }

    if layout.z_aux_index.len() != layout.z_stabs.len() {
        v.push(Violation::AuxIndex { index: layout.z_aux_index.len().min(layout.z_stabs.len()) });
    }
    for (index, (row, s)) in layout.z_aux_index.iter().zip(&layout.z_stabs).enumerate() {
        let expected: Vec<usize> = s.ones().collect();
        if *row != expected {
            v.push(Violation::AuxIndex { index });
        }
    }

    ValidationReport { violations: v }
}

/// Logical Z qubits, linked whenever an X-stabiliser touches both, must form
/// one connected chain touching both the leftmost and rightmost columns.
fn spans_left_to_right(layout: &CodeLayout) -> bool {
    if layout.data_coords.len() != layout.num_data || layout.distance == 0 {
        return false;
    }
    let chain: Vec<usize> = layout.logical_z.ones().collect();
    if chain.is_empty() {
        return false;
    }
    let right = 2 * layout.distance - 2;
    let linked = |a: usize, b: usize| {
        layout.x_stabs.iter().any(|s| s.get(a) && s.get(b))
    };
    let mut seen = vec![false; chain.len()];
    let mut queue = VecDeque::new();
    for (i, &q) in chain.iter().enumerate() {
        if layout.data_coords[q].1 == 0 {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while let Some(i) = queue.pop_front() {
        for j in 0..chain.len() {
            if !seen[j] && linked(chain[i], chain[j]) {
                seen[j] = true;
                queue.push_back(j);
            }
        }
    }
    seen.iter().all(|&s| s)
        && chain.iter().any(|&q| layout.data_coords[q].1 == right)
}

#[derive(Serialize)]
pub struct LayoutJson {
    pub distance: usize,
    pub num_data: usize,
    pub x_stabs: Vec<Vec<usize>>,
    pub z_stabs: Vec<Vec<usize>>,
    pub logical_z: Vec<usize>,
    pub logical_x: Vec<usize>,
}

impl From<&CodeLayout> for LayoutJson {
    fn from(l: &CodeLayout) -> Self {
        let idx = |w: &BitWord| w.ones().collect::<Vec<_>>();
        LayoutJson {
            distance: l.distance,
            num_data: l.num_data,
            x_stabs: l.x_stabs.iter().map(idx).collect(),
            z_stabs: l.z_stabs.iter().map(idx).collect(),
            logical_z: idx(&l.logical_z),
            logical_x: idx(&l.logical_x),
        }
    }
}
