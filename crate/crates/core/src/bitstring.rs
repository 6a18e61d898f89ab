//! Fixed-length bit-strings and the Gray-domain child transformation.
//!
//! Bits are stored most-significant first: index 0 is the leftmost bit. The
//! Gray code used throughout is the binary-reflected code over that order,
//! `g[0] = b[0]`, `g[i] = b[i - 1] ^ b[i]`.
//!
//! Storage is packed into `u64` words (bit `i` lives in word `i / 64` at
//! position `63 - i % 64`); unused low bits of the last word are always zero.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    words: Vec<u64>,
    len: usize,
}

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

impl BitString {
    /// All-zero string of `len` bits.
    ///
    /// # Panics
    /// If `len == 0`.
    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "bit-string length must be at least 1");
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Self::zeros(len);
        b.words.iter_mut().for_each(|w| *w = u64::MAX);
        b.clear_padding();
        b
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut b = Self::zeros(bits.len());
        for (i, &bit) in bits.iter().enumerate() {
            b.set(i, bit);
        }
        b
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_u64(value: u64, width: u32) -> Self {
        assert!((1..=64).contains(&width), "width must be in 1..=64");
        let mut b = Self::zeros(width as usize);
        b.words[0] = value << (64 - width);
        b
    }

    /// Uniformly random string of `len` bits.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut b = Self::zeros(len);
        b.words.iter_mut().for_each(|w| *w = rng.gen());
        b.clear_padding();
        b
    }

    pub fn len(&self) -> usize {
        self.len
    }

    /// Always `false`; present for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (63 - i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (63 - i % WORD);
        if bit {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (63 - i % WORD);
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.iter().collect()
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Reads `width` bits starting at `start` as an unsigned integer.
    pub fn field(&self, start: usize, width: u32) -> u64 {
        let width_us = width as usize;
        assert!((1..=64).contains(&width), "field width must be in 1..=64");
        assert!(start + width_us <= self.len, "field exceeds bit-string");
        let word = start / WORD;
        let offset = start % WORD;
        let hi = self.words[word] << offset;
        let raw = if offset + width_us > WORD {
            hi | (self.words[word + 1] >> (WORD - offset))
        } else {
            hi
        };
        raw >> (64 - width)
    }

    /// Writes the low `width` bits of `value` starting at `start`.
    pub fn set_field(&mut self, start: usize, width: u32, value: u64) {
        for k in 0..width as usize {
            let bit = (value >> (width as usize - 1 - k)) & 1 == 1;
            self.set(start + k, bit);
        }
    }

    /// Copies `len` bits starting at `start` into a new string.
    pub fn slice(&self, start: usize, len: usize) -> BitString {
        assert!(start + len <= self.len, "slice exceeds bit-string");
        let mut out = BitString::zeros(len);
        for i in 0..len {
            out.set(i, self.get(start + i));
        }
        out
    }

    fn clear_padding(&mut self) {
        let used = self.len % WORD;
        if used != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= u64::MAX << (WORD - used);
        }
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for bit in self.iter() {
            f.write_str(if bit { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseBitStringError {
    #[error("bit-string must not be empty")]
    Empty,
    #[error("invalid character {0:?} in bit-string")]
    InvalidChar(char),
}

impl FromStr for BitString {
    type Err = ParseBitStringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(ParseBitStringError::Empty);
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(ParseBitStringError::InvalidChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BitString::from_bits(&bits))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A contiguous run of bits addressed by the segment tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Segment {
    pub start: usize,
    pub len: usize,
    /// Breadth-first index of this node in the segment tree.
    pub node_id: usize,
}

/// How a segment of the parent is perturbed when generating children.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    /// Gray-encode, invert the segment, Gray-decode.
    #[default]
    Gray,
    /// Invert the segment of the plain binary string. Only useful as an ablation.
    Binary,
}

/// `g = b ^ (b >> 1)` over the most-significant-first bit order.
pub fn gray_encode(b: &BitString) -> BitString {
    let mut out = b.clone();
    let mut carry = 0u64;
    for (o, &w) in out.words.iter_mut().zip(&b.words) {
        *o = w ^ ((w >> 1) | carry);
        carry = w << 63;
    }
    out.clear_padding();
    out
}

/// Inverse of [`gray_encode`]: `b[i]` is the XOR of `g[0..=i]`.
pub fn gray_decode(g: &BitString) -> BitString {
    let mut out = g.clone();
    let mut parity = 0u64;
    for w in out.words.iter_mut() {
        let mut x = *w;
        x ^= x >> 1;
        x ^= x >> 2;
        x ^= x >> 4;
        x ^= x >> 8;
        x ^= x >> 16;
        x ^= x >> 32;
        if parity == 1 {
            x = !x;
        }
        parity = x & 1;
        *w = x;
    }
    out.clear_padding();
    out
}

/// Complements the bits of `g` covered by `s`.
///
/// # Panics
/// If the segment does not fit inside `g`.
pub fn invert_segment(g: &BitString, s: Segment) -> BitString {
    let mut out = g.clone();
    invert_in_place(&mut out, s);
    out
}

fn invert_in_place(b: &mut BitString, s: Segment) {
    assert!(
        s.len >= 1 && s.start + s.len <= b.len,
        "segment [{}, {}) out of range for length {}",
        s.start,
        s.start + s.len,
        b.len
    );
    let end = s.start + s.len;
    let mut i = s.start;
    while i < end {
        let word = i / WORD;
        let offset = i % WORD;
        let take = (WORD - offset).min(end - i);
        let mask = if take == WORD {
            u64::MAX
        } else {
            ((1u64 << take) - 1) << (WORD - offset - take)
        };
        b.words[word] ^= mask;
        i += take;
    }
}

/// Binary subdivision of `[0, length)`, breadth-first and left to right.
///
/// A segment of two or more bits splits into a left half of `ceil(len / 2)`
/// bits and a right half of `floor(len / 2)` bits; single bits are leaves.
/// The result always has `2 * length - 1` entries.
pub fn segment_tree(length: usize) -> Vec<Segment> {
    assert!(length >= 1, "segment tree needs at least one bit");
    let mut out = Vec::with_capacity(2 * length - 1);
    let mut queue = VecDeque::from([(0usize, length)]);
    while let Some((start, len)) = queue.pop_front() {
        out.push(Segment {
            start,
            len,
            node_id: out.len(),
        });
        if len >= 2 {
            let left = len.div_ceil(2);
            queue.push_back((start, left));
            queue.push_back((start + left, len - left));
        }
    }
    out
}

/// Builds the `2n - 1` children of `parent`, in segment-tree order.
pub fn generate_children(parent: &BitString) -> Vec<BitString> {
    generate_children_with(parent, Transform::Gray)
}

pub fn generate_children_with(parent: &BitString, transform: Transform) -> Vec<BitString> {
    let base = match transform {
        Transform::Gray => gray_encode(parent),
        Transform::Binary => parent.clone(),
    };
    segment_tree(parent.len())
        .into_iter()
        .map(|s| {
            let mut child = base.clone();
            invert_in_place(&mut child, s);
            match transform {
                Transform::Gray => gray_decode(&child),
                Transform::Binary => child,
            }
        })
        .collect()
}

/// Concatenation `b ∥ extra`.
pub fn refine(b: &BitString, extra: &BitString) -> BitString {
    let mut out = BitString::zeros(b.len + extra.len);
    for (i, bit) in b.iter().chain(extra.iter()).enumerate() {
        if bit {
            out.set(i, true);
        }
    }
    out
}
