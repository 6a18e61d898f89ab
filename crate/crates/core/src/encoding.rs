//! Fixed-point map between bit-strings and points of a bounded box.
//!
//! All variables are concatenated into a single bit-string in declaration
//! order. A `w`-bit field holding the unsigned integer `u` decodes to
//! `lower + (upper - lower) * u / (2^w - 1)`, so both bounds are exactly
//! representable.

use rand::Rng;
use serde::Serialize;

use crate::bitstring::{self, BitString};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VariableSpec<F> {
    pub lower: F,
    pub upper: F,
    pub bits: u32,
}

impl<F: Scalar> VariableSpec<F> {
    pub fn new(lower: F, upper: F, bits: u32) -> Result<Self> {
        let spec = Self { lower, upper, bits };
        spec.check(0)?;
        Ok(spec)
    }

    fn check(&self, index: usize) -> Result<()> {
        if !(self.lower.is_finite() && self.upper.is_finite()) {
            return Err(Error::InvalidVariable {
                index,
                reason: "bounds must be finite".into(),
            });
        }
        if self.lower >= self.upper {
            return Err(Error::InvalidVariable {
                index,
                reason: format!("lower {} is not below upper {}", self.lower, self.upper),
            });
        }
        if !(1..=64).contains(&self.bits) {
            return Err(Error::InvalidVariable {
                index,
                reason: format!("bit width {} outside 1..=64", self.bits),
            });
        }
        Ok(())
    }

    /// Largest field value, `2^w - 1`.
    pub fn max_field(&self) -> u64 {
        u64::MAX >> (64 - self.bits)
    }

    /// Distance between adjacent representable values.
    pub fn grid_step(&self) -> F {
        (self.upper - self.lower) / F::from_u64(self.max_field()).unwrap()
    }

    pub fn decode_field(&self, u: u64) -> F {
        let max = self.max_field();
        if u >= max {
            return self.upper;
        }
        let width = self.upper - self.lower;
        let v = self.lower + width * F::from_u64(u).unwrap() / F::from_u64(max).unwrap();
        v.max(self.lower).min(self.upper)
    }

    /// Nearest field value, rounding halves up.
    pub fn encode_field(&self, x: F) -> u64 {
        let max = self.max_field();
        let t = (x - self.lower) / (self.upper - self.lower) * F::from_u64(max).unwrap();
        let r = (t + F::lit(0.5)).floor();
        if r <= F::zero() {
            0
        } else {
            r.to_u64().map_or(max, |u| u.min(max))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchSpace<F> {
    variables: Vec<VariableSpec<F>>,
}

impl<F: Scalar> SearchSpace<F> {
    pub fn new(variables: Vec<VariableSpec<F>>) -> Result<Self> {
        if variables.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (i, v) in variables.iter().enumerate() {
            v.check(i)?;
        }
        Ok(Self { variables })
    }

    /// Every variable at the same resolution.
    pub fn uniform(bounds: &[(F, F)], bits: u32) -> Result<Self> {
        Self::new(
            bounds
                .iter()
                .map(|&(lower, upper)| VariableSpec { lower, upper, bits })
                .collect(),
        )
    }

    pub fn variables(&self) -> &[VariableSpec<F>] {
        &self.variables
    }

    pub fn dimension(&self) -> usize {
        self.variables.len()
    }

    pub fn total_bits(&self) -> usize {
        self.variables.iter().map(|v| v.bits as usize).sum()
    }

    /// Bit offset and spec of each variable's field.
    pub fn fields(&self) -> impl Iterator<Item = (usize, &VariableSpec<F>)> + '_ {
        self.variables.iter().scan(0usize, |offset, v| {
            let start = *offset;
            *offset += v.bits as usize;
            Some((start, v))
        })
    }

    fn check_len(&self, b: &BitString) -> Result<()> {
        let expected = self.total_bits();
        if b.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: b.len(),
            });
        }
        Ok(())
    }

    pub fn decode(&self, b: &BitString) -> Result<Vec<F>> {
        self.check_len(b)?;
        Ok(self.decode_unchecked(b))
    }

    pub(crate) fn decode_unchecked(&self, b: &BitString) -> Vec<F> {
        self.fields()
            .map(|(start, v)| v.decode_field(b.field(start, v.bits)))
            .collect()
    }

    /// The bit-string whose decoded point is nearest to `x`.
    pub fn encode_nearest(&self, x: &[F]) -> Result<BitString> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        let mut out = BitString::zeros(self.total_bits());
        for (i, ((start, v), &xi)) in self.fields().zip(x).enumerate() {
            if !(xi >= v.lower && xi <= v.upper) {
                return Err(Error::OutOfBounds {
                    index: i,
                    value: xi.to_f64().unwrap_or(f64::NAN),
                    lower: v.lower.to_f64().unwrap_or(f64::NAN),
                    upper: v.upper.to_f64().unwrap_or(f64::NAN),
                });
            }
            out.set_field(start, v.bits, v.encode_field(xi));
        }
        Ok(out)
    }

    /// Doubles every variable's width, filling the new low bits with random bits.
    pub fn refine_random<R: Rng + ?Sized>(
        &self,
        b: &BitString,
        rng: &mut R,
    ) -> Result<(SearchSpace<F>, BitString)> {
        self.refine_with(b, |w| BitString::random(w, rng))
    }

    /// Doubles every variable's width, filling the new low bits with zeros.
    pub fn refine_zeros(&self, b: &BitString) -> Result<(SearchSpace<F>, BitString)> {
        self.refine_with(b, BitString::zeros)
    }

    fn refine_with(
        &self,
        b: &BitString,
        mut extra: impl FnMut(usize) -> BitString,
    ) -> Result<(SearchSpace<F>, BitString)> {
        self.check_len(b)?;
        if let Some((index, v)) = self.variables.iter().enumerate().find(|(_, v)| v.bits > 32) {
            return Err(Error::WidthOverflow {
                index,
                bits: v.bits,
            });
        }
        let variables: Vec<_> = self
            .variables
            .iter()
            .map(|v| VariableSpec {
                bits: v.bits * 2,
                ..*v
            })
            .collect();
        let mut refined = BitString::zeros(2 * b.len());
        let mut offset = 0;
        for (start, v) in self.fields() {
            let w = v.bits as usize;
            let field = bitstring::refine(&b.slice(start, w), &extra(w));
            refined.set_field(offset, 2 * v.bits, field.field(0, 2 * v.bits));
            offset += 2 * w;
        }
        Ok((SearchSpace { variables }, refined))
    }
}

/// Doubles each variable's resolution; `rng` supplies the appended low bits,
/// or zeros are appended when it is `None`.
pub fn refine_space<F: Scalar, R: Rng + ?Sized>(
    space: &SearchSpace<F>,
    b: &BitString,
    rng: Option<&mut R>,
) -> Result<(SearchSpace<F>, BitString)> {
    match rng {
        Some(rng) => space.refine_random(b, rng),
        None => space.refine_zeros(b),
    }
}
