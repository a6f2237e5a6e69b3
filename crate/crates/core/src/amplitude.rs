//! Exact amplitudes in the injection parameters.
//!
//! A weight-`w` basis string of the product state `|chi>^N` carries the
//! amplitude `alpha^(N-w) beta^w`; every projected amplitude is an integer
//! combination of these monomials, stored as a coefficient per weight.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `sum_w coeffs[w] * alpha^(N-w) * beta^w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmplitudePoly {
    #[serde(rename = "N")]
    num_data: usize,
    coeffs: Vec<i64>,
}

impl AmplitudePoly {
    pub fn zero(num_data: usize) -> Self {
        AmplitudePoly { num_data, coeffs: vec![0; num_data + 1] }
    }

    pub fn from_coeffs(coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty(), "a degree-N polynomial has N+1 coefficients");
        AmplitudePoly { num_data: coeffs.len() - 1, coeffs }
    }

    pub fn num_data(&self) -> usize {
        self.num_data
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Adds `sign * alpha^(N-weight) beta^weight`.
    pub fn add_term(&mut self, weight: usize, sign: i64) -> Result<()> {
        debug_assert!(sign == 1 || sign == -1);
        let num_data = self.num_data;
        let c = self
            .coeffs
            .get_mut(weight)
            .ok_or(Error::WeightOutOfRange { weight, num_data })?;
        *c = c.checked_add(sign).ok_or(Error::CoefficientOverflow(weight))?;
        Ok(())
    }

    /// Adds `count` copies of the weight-`weight` term with the given sign.
    pub fn add_terms(&mut self, weight: usize, sign: i64, count: u64) -> Result<()> {
        let num_data = self.num_data;
        let c = self
            .coeffs
            .get_mut(weight)
            .ok_or(Error::WeightOutOfRange { weight, num_data })?;
        let delta = i64::try_from(count)
            .ok()
            .and_then(|k| k.checked_mul(sign))
            .ok_or(Error::CoefficientOverflow(weight))?;
        *c = c.checked_add(delta).ok_or(Error::CoefficientOverflow(weight))?;
        Ok(())
    }

    pub fn checked_add(&self, other: &AmplitudePoly) -> Result<AmplitudePoly> {
        if self.num_data != other.num_data {
            return Err(Error::DegreeMismatch(self.num_data, other.num_data));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .enumerate()
            .map(|(w, (a, b))| a.checked_add(*b).ok_or(Error::CoefficientOverflow(w)))
            .collect::<Result<Vec<_>>>()?;
        Ok(AmplitudePoly { num_data: self.num_data, coeffs })
    }

    pub fn neg(&self) -> AmplitudePoly {
        AmplitudePoly {
            num_data: self.num_data,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Evaluates at `(alpha, beta)`. Powers are built by repeated
    /// multiplication so no `0^0` or branch-cut issues arise.
    pub fn evaluate(&self, chi: &InjectionState) -> Complex64 {
        let n = self.num_data;
        let alpha_pows = powers(chi.alpha, n);
        let beta_pows = powers(chi.beta, n);
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(w, &c)| alpha_pows[n - w] * beta_pows[w] * c as f64)
            .sum()
    }
}

fn powers(z: Complex64, n: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        out.push(acc);
        acc *= z;
    }
    out
}

impl fmt::Display for AmplitudePoly {
    /// Human-readable form, e.g. `a^4 b + a^3 b^2 - a^2 b^3 - a b^4`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.num_data;
        let mut first = true;
        for (w, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.unsigned_abs();
            let mut parts = Vec::new();
            if mag != 1 {
                parts.push(mag.to_string());
            }
            for (sym, e) in [("a", n - w), ("b", w)] {
                match e {
                    0 => {}
                    1 => parts.push(sym.to_string()),
                    e => parts.push(format!("{sym}^{e}")),
                }
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            f.write_str(&parts.join(" "))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Single-qubit state `alpha|0> + beta|1>` prepared on every data qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InjectionState {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl InjectionState {
    /// Normalises the given pair; rejects (near-)zero or non-finite input.
    pub fn from_amplitudes(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm2 = alpha.norm_sqr() + beta.norm_sqr();
        if !norm2.is_finite() || norm2 < 1e-300 {
            return Err(Error::NotNormalisable(norm2));
        }
        let s = norm2.sqrt();
        Ok(InjectionState { alpha: alpha / s, beta: beta / s })
    }

    /// `alpha = cos(theta/2)`, `beta = e^{i phi} sin(theta/2)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        InjectionState {
            alpha: Complex64::new(c, 0.0),
            beta: Complex64::from_polar(s, phi),
        }
    }

    pub fn zero() -> Self {
        InjectionState { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) }
    }

    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        InjectionState { alpha: Complex64::new(h, 0.0), beta: Complex64::new(h, 0.0) }
    }

    pub fn is_real(&self) -> bool {
        self.alpha.im == 0.0 && self.beta.im == 0.0
    }
}

/// Unnormalised logical amplitudes: `A` on `|0>_L`, `B` on `|1>_L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogicalState {
    pub a: AmplitudePoly,
    pub b: AmplitudePoly,
}

/// Below this squared norm a trajectory is treated as never heralded.
pub const ZERO_NORM_SQR: f64 = f64::MIN_POSITIVE;

impl LogicalState {
    pub fn zero(num_data: usize) -> Self {
        LogicalState { a: AmplitudePoly::zero(num_data), b: AmplitudePoly::zero(num_data) }
    }

    pub fn checked_add(&self, other: &LogicalState) -> Result<LogicalState> {
        Ok(LogicalState { a: self.a.checked_add(&other.a)?, b: self.b.checked_add(&other.b)? })
    }

    pub fn evaluate(&self, chi: &InjectionState) -> (Complex64, Complex64) {
        (self.a.evaluate(chi), self.b.evaluate(chi))
    }

    /// Unit-norm `(alpha_L, beta_L)` and the squared norm before scaling.
    pub fn normalize(&self, chi: &InjectionState) -> Result<((Complex64, Complex64), f64)> {
        normalize_pair(self.evaluate(chi))
    }
}

pub fn normalize_pair((a, b): (Complex64, Complex64)) -> Result<((Complex64, Complex64), f64)> {
    let norm2 = a.norm_sqr() + b.norm_sqr();
    if norm2.is_nan() || norm2 <= ZERO_NORM_SQR {
        return Err(Error::ZeroProbabilityTrajectory);
    }
    let s = norm2.sqrt();
    Ok(((a / s, b / s), norm2))
}

/// Bloch vector of a normalised qubit state.
pub fn bloch(alpha_l: Complex64, beta_l: Complex64) -> Result<[f64; 3]> {
    let norm2 = alpha_l.norm_sqr() + beta_l.norm_sqr();
    if (norm2 - 1.0).abs() > 1e-9 {
        return Err(Error::NotNormalised(norm2));
    }
    let cross = alpha_l.conj() * beta_l;
    Ok([2.0 * cross.re, 2.0 * cross.im, alpha_l.norm_sqr() - beta_l.norm_sqr()])
}
