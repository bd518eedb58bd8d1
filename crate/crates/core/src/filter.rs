//! Periodic trigonometric time-pass filters.
//!
//! The base filter `R(x) = Σ_{l=-L}^{L} c_l e^{ilx}` approximates the indicator
//! of `[-π, 0]` on `[-π, π]`. The level-`j` filter uses the exponents `2^j l`,
//! so it has period `2π / 2^j` and selects `[-2^{-j}π, 0]` in each period; bit 1
//! selects the complement `1 - R`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Result, Wp4Error};

/// Fourier coefficients of the indicator of `[-π, 0]`, indexed `l + order`.
///
/// `c_0 = 1/2`, `c_l = i/(πl)` for odd `l`, zero for even `l ≠ 0`.
pub fn indicator_coeffs(order: usize) -> Result<Vec<Complex64>> {
    if order == 0 {
        return Err(Wp4Error::InvalidParameter("filter order must be at least 1".into()));
    }
    let l_max = order as i64;
    Ok((-l_max..=l_max)
        .map(|l| match l {
            0 => Complex64::new(0.5, 0.0),
            l if l % 2 != 0 => Complex64::new(0.0, 1.0 / (PI * l as f64)),
            _ => Complex64::new(0.0, 0.0),
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrigFilter {
    order: usize,
    level: u32,
    bit: u8,
    coeffs: Vec<Complex64>,
}

impl TrigFilter {
    /// Half-period indicator filter at `level`; `bit = 0` keeps the lower half.
    pub fn indicator(order: usize, level: u32, bit: u8) -> Result<Self> {
        let base = indicator_coeffs(order)?;
        Self::from_base(order, &base, level, bit)
    }

    /// Builds a level/bit filter from arbitrary base coefficients (`2·order + 1` of them).
    pub fn from_base(order: usize, base: &[Complex64], level: u32, bit: u8) -> Result<Self> {
        if base.len() != 2 * order + 1 {
            return Err(Wp4Error::LengthMismatch { expected: 2 * order + 1, actual: base.len() });
        }
        if bit > 1 {
            return Err(Wp4Error::InvalidParameter(format!("filter bit must be 0 or 1, got {bit}")));
        }
        if level > 40 {
            return Err(Wp4Error::InvalidParameter(format!("filter level {level} is too deep")));
        }
        let coeffs = if bit == 0 {
            base.to_vec()
        } else {
            base.iter()
                .enumerate()
                .map(|(i, c)| if i == order { Complex64::new(1.0, 0.0) - c } else { -c })
                .collect()
        };
        Ok(Self { order, level, bit, coeffs })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn bit(&self) -> u8 {
        self.bit
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Nonzero terms as `(shift in grid steps, coefficient)`, ascending in `l`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let order = self.order as i64;
        let stride = 1i64 << self.level;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm_sqr() != 0.0)
            .map(move |(i, &c)| ((i as i64 - order) * stride, c))
    }

    /// `Σ c_l e^{i 2^j l x}`.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.terms()
            .map(|(shift, c)| c * Complex64::from_polar(1.0, shift as f64 * x))
            .sum()
    }
}
