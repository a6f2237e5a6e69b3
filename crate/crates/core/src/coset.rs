//! Streaming enumeration of the data-qubit strings consistent with a set of
//! Z-stabiliser outcomes.
//!
//! Z-stabilisers are processed in order. For stabiliser `i` its support
//! splits into qubits already fixed by earlier stabilisers ("seen") and
//! fresh ones. The fresh qubits take every subset whose size parity equals
//! `z_i XOR parity(seen bits)`. Each stage therefore contributes
//! `2^(fresh-1)` choices whatever the earlier choices were, which makes the
//! stream a mixed-radix counter that can be seeked and split.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::bitkit::{combinations, masked_parity, BitWord, Gf2Solver};
use crate::error::{Error, Result};
use crate::lattice::CodeLayout;

/// Outcome string of one initialisation round: all X-stabiliser bits, then
/// all Z-stabiliser bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Trajectory {
    pub x_outcomes: BitWord,
    pub z_outcomes: BitWord,
}

impl Trajectory {
    pub fn new(x_outcomes: BitWord, z_outcomes: BitWord) -> Self {
        Trajectory { x_outcomes, z_outcomes }
    }

    /// Parses `X_1..X_m Z_1..Z_m` for the given layout.
    pub fn parse(layout: &CodeLayout, s: &str) -> Result<Self> {
        let m = layout.num_stabs();
        let word: BitWord = s.parse()?;
        if word.width() != 2 * m {
            return Err(Error::LengthMismatch {
                what: "trajectory",
                expected: 2 * m,
                got: word.width(),
            });
        }
        let x = BitWord::from_raw(word.raw(), m);
        let z = BitWord::from_raw(word.raw() >> m, m);
        Ok(Trajectory { x_outcomes: x, z_outcomes: z })
    }

    pub fn trivial(layout: &CodeLayout) -> Self {
        let m = layout.num_stabs();
        Trajectory { x_outcomes: BitWord::zero(m), z_outcomes: BitWord::zero(m) }
    }

    pub fn has_trivial_x(&self) -> bool {
        self.x_outcomes.is_zero()
    }

    pub fn check(&self, layout: &CodeLayout) -> Result<()> {
        let m = layout.num_stabs();
        for (what, w) in [("X outcome", self.x_outcomes), ("Z outcome", self.z_outcomes)] {
            if w.width() != m {
                return Err(Error::LengthMismatch { what, expected: m, got: w.width() });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.x_outcomes, self.z_outcomes)
    }
}

impl fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Trajectory({self})")
    }
}

impl FromStr for Trajectory {
    type Err = Error;

    /// Splits an even-length string in half; no layout check.
    fn from_str(s: &str) -> Result<Self> {
        let word: BitWord = s.parse()?;
        let w = word.width();
        if !w.is_multiple_of(2) {
            return Err(Error::LengthMismatch { what: "trajectory", expected: w + 1, got: w });
        }
        let m = w / 2;
        Ok(Trajectory {
            x_outcomes: BitWord::from_raw(word.raw(), m),
            z_outcomes: BitWord::from_raw(word.raw() >> m, m),
        })
    }
}

#[derive(Clone, Debug)]
struct Stage {
    seen: BitWord,
    outcome: bool,
    // subsets of the fresh qubits, indexed by required size parity
    choices: [Vec<BitWord>; 2],
}

impl Stage {
    #[inline]
    fn radix(&self) -> usize {
        self.choices[0].len()
    }

    #[inline]
    fn choice(&self, prefix: BitWord, digit: usize) -> BitWord {
        let t = self.outcome ^ masked_parity(prefix, self.seen);
        self.choices[t as usize][digit]
    }
}

/// Precomputed stage table for one layout and one Z-outcome string.
#[derive(Clone, Debug)]
pub struct CosetPlan {
    width: usize,
    stages: Vec<Stage>,
    total: u64,
}

impl CosetPlan {
    pub fn new(layout: &CodeLayout, z_outcomes: BitWord) -> Result<Self> {
        let m = layout.num_stabs();
        if z_outcomes.width() != m {
            return Err(Error::LengthMismatch {
                what: "Z outcome",
                expected: m,
                got: z_outcomes.width(),
            });
        }
        let n = layout.num_data;
        let mut covered = BitWord::zero(n);
        let mut stages = Vec::with_capacity(m + 1);
        for (i, row) in layout.z_aux_index.iter().enumerate() {
            let support = BitWord::from_indices(n, row.iter().copied());
            let seen = support & covered;
            let fresh: Vec<usize> = row.iter().copied().filter(|&q| !covered.get(q)).collect();
            if fresh.is_empty() {
                return Err(Error::NoFreshQubits(i));
            }
            covered ^= support ^ seen;
            stages.push(Stage {
                seen,
                outcome: z_outcomes.get(i),
                choices: [combinations(&fresh, false, n).collect(), combinations(&fresh, true, n).collect()],
            });
        }
        // qubits outside every Z support are unconstrained
        let free: Vec<usize> = (0..n).filter(|&q| !covered.get(q)).collect();
        if !free.is_empty() {
            let all: Vec<BitWord> = combinations(&free, false, n)
                .chain(combinations(&free, true, n))
                .collect();
            stages.push(Stage { seen: BitWord::zero(n), outcome: false, choices: [all.clone(), all] });
        }
        let total = stages.iter().map(|s| s.radix() as u64).product();
        Ok(CosetPlan { width: n, stages, total })
    }

    /// Number of strings in the coset.
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn stream(self: &Arc<Self>) -> CosetStream {
        CosetStream::seek(Arc::clone(self), 0, self.total)
    }

    /// Worker `k` of `parts`: a contiguous slice of the stream order. The
    /// slices are disjoint and cover the stream.
    pub fn partition(self: &Arc<Self>, k: usize, parts: usize) -> CosetStream {
        assert!(parts > 0 && k < parts, "partition {k} of {parts}");
        let bound = |i: usize| ((self.total as u128 * i as u128) / parts as u128) as u64;
        let (start, end) = (bound(k), bound(k + 1));
        CosetStream::seek(Arc::clone(self), start, end - start)
    }
}

/// Affine description `offset + span(basis)` of the same coset, walked in
/// Gray-code order so consecutive strings differ by one basis vector.
#[derive(Clone, Debug)]
pub struct GrayCoset {
    offset: BitWord,
    basis: Vec<BitWord>,
}

impl GrayCoset {
    pub fn new(layout: &CodeLayout, plan: &Arc<CosetPlan>) -> Result<Self> {
        let offset = plan.stream().next().ok_or(Error::FrameMismatch("empty coset".into()))?;
        let basis = Gf2Solver::new(&layout.z_stabs).null_space();
        Ok(GrayCoset { offset, basis })
    }

    pub fn len(&self) -> u64 {
        1u64 << self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Worker `k` of `parts`, contiguous in Gray index.
    pub fn partition(&self, k: usize, parts: usize) -> GrayStream<'_> {
        assert!(parts > 0 && k < parts, "partition {k} of {parts}");
        let total = self.len() as u128;
        let bound = |i: usize| ((total * i as u128) / parts as u128) as u64;
        let (start, end) = (bound(k), bound(k + 1));
        let code = start ^ (start >> 1);
        let current = (0..self.basis.len())
            .filter(|i| (code >> i) & 1 == 1)
            .fold(self.offset, |acc, i| acc ^ self.basis[i]);
        GrayStream { basis: &self.basis, index: start, end, current }
    }
}

pub struct GrayStream<'a> {
    basis: &'a [BitWord],
    index: u64,
    end: u64,
    current: BitWord,
}

impl Iterator for GrayStream<'_> {
    type Item = BitWord;

    #[inline]
    fn next(&mut self) -> Option<BitWord> {
        if self.index >= self.end {
            return None;
        }
        let out = self.current;
        self.index += 1;
        if self.index < self.end {
            self.current ^= self.basis[self.index.trailing_zeros() as usize];
        }
        Some(out)
    }
}

/// Deterministic stream over a coset (or a slice of it).
#[derive(Clone, Debug)]
pub struct CosetStream {
    plan: Arc<CosetPlan>,
    digits: Vec<usize>,
    partial: Vec<BitWord>,
    remaining: u64,
}

impl CosetStream {
    fn seek(plan: Arc<CosetPlan>, start: u64, count: u64) -> Self {
        let k = plan.stages.len();
        let mut digits = vec![0; k];
        let mut rest = start;
        for (d, stage) in digits.iter_mut().zip(&plan.stages).rev() {
            let r = stage.radix() as u64;
            *d = (rest % r) as usize;
            rest /= r;
        }
        let partial = vec![BitWord::zero(plan.width); k];
        let mut stream = CosetStream { plan, digits, partial, remaining: count };
        stream.refresh_from(0);
        stream
    }

    fn refresh_from(&mut self, from: usize) {
        let mut prefix = if from == 0 { BitWord::zero(self.plan.width) } else { self.partial[from - 1] };
        for j in from..self.partial.len() {
            prefix ^= self.plan.stages[j].choice(prefix, self.digits[j]);
            self.partial[j] = prefix;
        }
    }

    fn current(&self) -> BitWord {
        self.partial.last().copied().unwrap_or_else(|| BitWord::zero(self.plan.width))
    }

    fn increment(&mut self) {
        let mut i = self.digits.len();
        while i > 0 {
            i -= 1;
            if self.digits[i] + 1 < self.plan.stages[i].radix() {
                self.digits[i] += 1;
                self.refresh_from(i);
                return;
            }
            self.digits[i] = 0;
        }
    }
}

impl Iterator for CosetStream {
    type Item = BitWord;

    #[inline]
    fn next(&mut self) -> Option<BitWord> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.current();
        self.remaining -= 1;
        if self.remaining > 0 {
            self.increment();
        }
        Some(out)
    }

    /// Emits whole blocks of the last stage per prefix instead of stepping
    /// the counter once per element.
    fn fold<B, F>(mut self, init: B, mut f: F) -> B
    where
        F: FnMut(B, BitWord) -> B,
    {
        let mut acc = init;
        let Some(last) = self.digits.len().checked_sub(1) else {
            return match self.next() {
                Some(z) => f(acc, z),
                None => acc,
            };
        };
        let plan = Arc::clone(&self.plan);
        let stage = &plan.stages[last];
        let radix = stage.radix();
        while self.remaining > 0 {
            if self.digits[last] == 0 && self.remaining >= radix as u64 {
                let prefix = if last == 0 { BitWord::zero(plan.width) } else { self.partial[last - 1] };
                let t = stage.outcome ^ masked_parity(prefix, stage.seen);
                for &c in &stage.choices[t as usize] {
                    acc = f(acc, prefix ^ c);
                }
                self.remaining -= radix as u64;
                if self.remaining > 0 {
                    self.digits[last] = radix - 1;
                    self.increment();
                }
            } else if let Some(z) = self.next() {
                acc = f(acc, z);
            }
        }
        acc
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, usize::try_from(self.remaining).ok())
    }
}

/// Streams the full coset `{z : parity(z AND z_stabs[i]) = z_outcomes[i]}`.
pub fn enumerate_coset(layout: &CodeLayout, z_outcomes: BitWord) -> Result<CosetStream> {
    Ok(Arc::new(CosetPlan::new(layout, z_outcomes)?).stream())
}

/// Orbit representatives defining the Pauli frame.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    pub rep0: BitWord,
    pub rep1: BitWord,
}

/// `rep0` is the string-order minimum (qubit 0 most significant) of the
/// coset elements with even logical-Z parity; `rep1 = rep0 XOR logical_x`.
pub fn coset_representatives(layout: &CodeLayout, z_outcomes: BitWord) -> Result<Frame> {
    let solver = Gf2Solver::new(&layout.x_stabs);
    let plan = Arc::new(CosetPlan::new(layout, z_outcomes)?);
    frame_from(layout, &solver, &plan)
}

pub(crate) fn frame_from(layout: &CodeLayout, x_solver: &Gf2Solver, plan: &Arc<CosetPlan>) -> Result<Frame> {
    let mut z0 = plan.stream().next().ok_or(Error::FrameMismatch("empty coset".into()))?;
    if masked_parity(z0, layout.logical_z) {
        z0 ^= layout.logical_x;
    }
    // the even-parity half of the coset is z0 + span(X supports)
    let (rep0, _) = x_solver.reduce(z0);
    Ok(Frame { rep0, rep1: rep0 ^ layout.logical_x })
}
