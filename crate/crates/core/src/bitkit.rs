//! Fixed-width GF(2) words, subset streams and a small linear solver.
//!
//! Bit `i` of a [`BitWord`] is data qubit `i`. Rendered as a string, qubit 0
//! comes first, so string order ("lexicographic") treats qubit 0 as the most
//! significant position.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{BitAnd, BitXor, BitXorAssign};
use std::str::FromStr;

use crate::error::BitError;

/// Widest word supported.
pub const MAX_WIDTH: usize = 128;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitWord {
    bits: u128,
    width: u8,
}

fn width_mask(width: usize) -> u128 {
    if width == MAX_WIDTH {
        u128::MAX
    } else {
        (1u128 << width) - 1
    }
}

impl BitWord {
    pub fn zero(width: usize) -> Self {
        assert!(width <= MAX_WIDTH, "BitWord width {width} exceeds {MAX_WIDTH}");
        BitWord { bits: 0, width: width as u8 }
    }

    /// Builds a word from raw bits; bits at or above `width` are discarded.
    pub fn from_raw(bits: u128, width: usize) -> Self {
        assert!(width <= MAX_WIDTH, "BitWord width {width} exceeds {MAX_WIDTH}");
        BitWord { bits: bits & width_mask(width), width: width as u8 }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(width: usize, indices: I) -> Self {
        let mut w = BitWord::zero(width);
        for i in indices {
            w.set(i, true);
        }
        w
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width as usize
    }

    #[inline]
    pub fn raw(&self) -> u128 {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.width());
        (self.bits >> i) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.width(), "bit {i} out of range for width {}", self.width);
        if value {
            self.bits |= 1 << i;
        } else {
            self.bits &= !(1 << i);
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.width(), "bit {i} out of range for width {}", self.width);
        self.bits ^= 1 << i;
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn hamming(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> Ones {
        Ones { bits: self.bits }
    }

    /// Compares by string order: the first differing qubit decides, and a
    /// set bit sorts after a clear one.
    pub fn lex_cmp(&self, other: &BitWord) -> Ordering {
        let diff = self.bits ^ other.bits;
        if diff == 0 {
            return Ordering::Equal;
        }
        let first = diff.trailing_zeros();
        if (self.bits >> first) & 1 == 1 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
}

pub struct Ones {
    bits: u128,
}

impl Iterator for Ones {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let i = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(i)
    }
}

impl BitXor for BitWord {
    type Output = BitWord;

    #[inline]
    fn bitxor(self, rhs: BitWord) -> BitWord {
        debug_assert_eq!(self.width, rhs.width);
        BitWord { bits: self.bits ^ rhs.bits, width: self.width }
    }
}

impl BitXorAssign for BitWord {
    #[inline]
    fn bitxor_assign(&mut self, rhs: BitWord) {
        debug_assert_eq!(self.width, rhs.width);
        self.bits ^= rhs.bits;
    }
}

impl BitAnd for BitWord {
    type Output = BitWord;

    #[inline]
    fn bitand(self, rhs: BitWord) -> BitWord {
        debug_assert_eq!(self.width, rhs.width);
        BitWord { bits: self.bits & rhs.bits, width: self.width }
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl FromStr for BitWord {
    type Err = BitError;

    /// Parses a `0`/`1` string, first character is bit 0.
    fn from_str(s: &str) -> Result<Self, BitError> {
        if s.len() > MAX_WIDTH {
            return Err(BitError::TooWide(s.len()));
        }
        let mut w = BitWord::zero(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(i, true),
                other => return Err(BitError::BadChar(other)),
            }
        }
        Ok(w)
    }
}

/// Number of set bits.
#[inline]
pub fn hamming(w: BitWord) -> u32 {
    w.hamming()
}

/// `popcount(w AND mask) mod 2`.
#[inline]
pub fn masked_parity(w: BitWord, mask: BitWord) -> bool {
    (w & mask).hamming() & 1 == 1
}

/// Streams every subset of `indices` whose size has the given parity, as
/// words of `width` bits. Order: by size, then lexicographically by position
/// in `indices`.
pub fn combinations(indices: &[usize], parity: bool, width: usize) -> Combinations {
    Combinations::new(indices.to_vec(), parity, width)
}

pub struct Combinations {
    indices: Vec<usize>,
    width: usize,
    size: usize,
    // positions into `indices` for the current subset; None once exhausted
    cursor: Option<Vec<usize>>,
}

impl Combinations {
    fn new(indices: Vec<usize>, parity: bool, width: usize) -> Self {
        let size = parity as usize;
        let cursor = (size <= indices.len()).then(|| (0..size).collect());
        Combinations { indices, width, size, cursor }
    }

    fn advance(&mut self) {
        let n = self.indices.len();
        let Some(pos) = self.cursor.as_mut() else { return };
        let k = self.size;
        // rightmost position that can still move
        let mut i = k;
        while i > 0 {
            i -= 1;
            if pos[i] < n - k + i {
                pos[i] += 1;
                for j in i + 1..k {
                    pos[j] = pos[j - 1] + 1;
                }
                return;
            }
        }
        self.size += 2;
        self.cursor = (self.size <= n).then(|| (0..self.size).collect());
    }
}

impl Iterator for Combinations {
    type Item = BitWord;

    fn next(&mut self) -> Option<BitWord> {
        let pos = self.cursor.as_ref()?;
        let word = BitWord::from_indices(self.width, pos.iter().map(|&p| self.indices[p]));
        self.advance();
        Some(word)
    }
}

/// Row-reduced generator matrix over GF(2).
///
/// Pivots sit at the lowest set bit of each reduced row and every pivot
/// column is cleared in all other rows, so reducing a target by the rows in
/// pivot order also yields the string-order minimum of `target + span`.
#[derive(Clone, Debug)]
pub struct Gf2Solver {
    generators: Vec<BitWord>,
    width: usize,
    // (reduced row, pivot, generator combination producing it)
    rows: Vec<(BitWord, usize, BitWord)>,
}

impl Gf2Solver {
    pub fn new(generators: &[BitWord]) -> Self {
        let width = generators.first().map_or(0, BitWord::width);
        let count = generators.len();
        assert!(count <= MAX_WIDTH, "too many generators: {count}");
        let mut work: Vec<(BitWord, BitWord)> = generators
            .iter()
            .enumerate()
            .map(|(i, &g)| {
                assert_eq!(g.width(), width, "generator widths differ");
                (g, BitWord::from_indices(count, [i]))
            })
            .collect();

        let mut rows = Vec::new();
        let mut next = 0;
        for col in 0..width {
            let Some(found) = (next..work.len()).find(|&r| work[r].0.get(col)) else {
                continue;
            };
            work.swap(next, found);
            let (prow, pcombo) = work[next];
            for (r, (row, combo)) in work.iter_mut().enumerate() {
                if r != next && row.get(col) {
                    *row ^= prow;
                    *combo ^= pcombo;
                }
            }
            next += 1;
        }
        for (row, combo) in work.into_iter().take(next) {
            let pivot = row.raw().trailing_zeros() as usize;
            rows.push((row, pivot, combo));
        }
        Gf2Solver { generators: generators.to_vec(), width, rows }
    }

    pub fn generators(&self) -> &[BitWord] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Reduces `target` against the row space; returns the residual and the
    /// generator subset that was XORed in.
    pub fn reduce(&self, target: BitWord) -> (BitWord, BitWord) {
        let mut residual = target;
        let mut combo = BitWord::zero(self.generators.len());
        for (row, pivot, c) in &self.rows {
            if residual.get(*pivot) {
                residual ^= *row;
                combo ^= *c;
            }
        }
        (residual, combo)
    }

    /// Generator subset (as a word over generator indices) whose supports
    /// XOR to `target`, or `None` if `target` is not in the span.
    pub fn solve_in_span(&self, target: BitWord) -> Option<BitWord> {
        let (residual, combo) = self.reduce(target);
        residual.is_zero().then_some(combo)
    }

    /// XOR of the supports of the generators selected by `subset`.
    pub fn combine(&self, subset: BitWord) -> BitWord {
        subset
            .ones()
            .fold(BitWord::zero(self.width), |acc, i| acc ^ self.generators[i])
    }
}

impl Gf2Solver {
    /// Basis of `{v : row . v = 0 for every generator}`, one vector per
    /// non-pivot column.
    pub fn null_space(&self) -> Vec<BitWord> {
        let pivots: Vec<usize> = self.rows.iter().map(|r| r.1).collect();
        (0..self.width)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = BitWord::zero(self.width);
                v.set(free, true);
                for (row, pivot, _) in &self.rows {
                    if row.get(free) {
                        v.set(*pivot, true);
                    }
                }
                v
            })
            .collect()
    }
}

/// GF(2) rank of a list of rows.
pub fn rank(rows: &[BitWord]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    Gf2Solver::new(rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(w("00000")), 0);
        assert_eq!(hamming(w("11101")), 4);
        assert_eq!(hamming(w("10011")), 3);
    }

    #[test]
    fn masked_parity_examples() {
        assert!(!masked_parity(w("00001"), w("11000")));
        assert!(masked_parity(w("01000"), w("11000")));
        assert!(!masked_parity(w("10111"), w("00000")));
    }

    #[test]
    fn combinations_examples() {
        let even: Vec<String> = combinations(&[0, 2, 3], false, 5).map(|c| c.to_string()).collect();
        assert_eq!(even, ["00000", "10100", "10010", "00110"]);
        let odd: Vec<String> = combinations(&[1, 4], true, 5).map(|c| c.to_string()).collect();
        assert_eq!(odd, ["01000", "00001"]);
        assert_eq!(combinations(&[], true, 5).count(), 0);
        assert_eq!(combinations(&[], false, 5).count(), 1);
    }

    #[test]
    fn string_round_trip_and_order() {
        let a = w("00001");
        assert_eq!(a.to_string(), "00001");
        assert!(a.get(4));
        assert_eq!(a.lex_cmp(&w("00110")), Ordering::Less);
        assert_eq!(w("10000").lex_cmp(&w("01111")), Ordering::Greater);
        assert!("0120".parse::<BitWord>().is_err());
    }

    fn d2_x_stabs() -> Vec<BitWord> {
        vec![w("11100"), w("00111")]
    }

    #[test]
    fn solver_examples() {
        let solver = Gf2Solver::new(&d2_x_stabs());
        assert_eq!(solver.solve_in_span(w("00000")), Some(w("00")));
        assert_eq!(solver.solve_in_span(w("11101") ^ w("00001")), Some(w("10")));
        assert_eq!(solver.solve_in_span(w("10010")), None);
    }

    #[test]
    fn solver_brute_force_span() {
        // every one of the 32 targets: in span iff one of the 4 subset XORs hits it
        let gens = d2_x_stabs();
        let solver = Gf2Solver::new(&gens);
        for t in 0u128..32 {
            let target = BitWord::from_raw(t, 5);
            let brute = (0u128..4).find(|&s| {
                let subset = BitWord::from_raw(s, 2);
                subset.ones().fold(BitWord::zero(5), |a, i| a ^ gens[i]) == target
            });
            assert_eq!(solver.solve_in_span(target).map(|s| s.raw()), brute);
        }
    }

    #[test]
    fn reduce_gives_string_order_minimum() {
        let gens = [w("110100"), w("011010"), w("000111")];
        let solver = Gf2Solver::new(&gens);
        for t in 0u128..64 {
            let target = BitWord::from_raw(t, 6);
            let brute = (0u128..8)
                .map(|s| target ^ solver.combine(BitWord::from_raw(s, 3)))
                .min_by(|a, b| a.lex_cmp(b))
                .unwrap();
            assert_eq!(solver.reduce(target).0, brute);
        }
    }

    #[test]
    fn null_space_is_orthogonal_and_complete() {
        let rows = [w("1011000"), w("0110100"), w("1101001")];
        let solver = Gf2Solver::new(&rows);
        let kernel = solver.null_space();
        assert_eq!(kernel.len(), 7 - solver.rank());
        for v in &kernel {
            assert!(rows.iter().all(|r| !masked_parity(*r, *v)));
        }
        assert_eq!(rank(&kernel), kernel.len());
        let brute = (0u128..128)
            .filter(|&v| rows.iter().all(|r| !masked_parity(*r, BitWord::from_raw(v, 7))))
            .count();
        assert_eq!(brute, 1 << kernel.len());
    }

    proptest! {
        #[test]
        fn parity_split_covers_power_set(n in 0usize..8) {
            let idx: Vec<usize> = (0..n).map(|i| 2 * i).collect();
            let mut all: Vec<u128> = combinations(&idx, false, 16)
                .chain(combinations(&idx, true, 16))
                .map(|c| c.raw())
                .collect();
            all.sort_unstable();
            let before = all.len();
            all.dedup();
            prop_assert_eq!(before, 1usize << n);
            prop_assert_eq!(all.len(), 1usize << n);
        }

        #[test]
        fn hamming_parity_is_additive(a in any::<u64>(), b in any::<u64>()) {
            let x = BitWord::from_raw(a as u128, 64);
            let y = BitWord::from_raw(b as u128, 64);
            prop_assert_eq!(hamming(x ^ y) % 2, (hamming(x) + hamming(y)) % 2);
        }

        #[test]
        fn solver_recovers_independent_subsets(seed in any::<u64>(), pick in any::<u16>()) {
            // lower-triangular generators with distinct lowest bits are independent
            let gens: Vec<BitWord> = (0..10)
                .map(|i| BitWord::from_raw(((seed as u128) << (i + 1)) | (1u128 << i), 80))
                .collect();
            let solver = Gf2Solver::new(&gens);
            let subset = BitWord::from_raw(pick as u128 & 0x3ff, 10);
            let target = solver.combine(subset);
            prop_assert_eq!(solver.solve_in_span(target), Some(subset));
        }
    }
}
