use std::sync::Arc;

use crate::error::{Error, Result};

use super::{PolyRing, Polynomial};

/// `c_0 + c_1 t + … + c_m t^m` modulo `t^(m+1)`, with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Polynomial>,
}

impl TruncatedSeries {
    /// The coefficient list fixes the bound: `m = coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Polynomial>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::InvalidArgument("a truncated series needs at least one coefficient".into()))?;
        let ring = first.ring().clone();
        for c in &coeffs {
            PolyRing::check_same(&ring, c.ring())?;
        }
        Ok(TruncatedSeries { coeffs })
    }

    pub fn constant(c: Polynomial, m: usize) -> Self {
        let zero = Polynomial::zero(c.ring());
        let mut coeffs = vec![c];
        coeffs.resize(m + 1, zero);
        TruncatedSeries { coeffs }
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        self.coeffs[0].ring()
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Polynomial> {
        self.coeffs
    }

    pub fn coeff(&self, j: usize) -> &Polynomial {
        &self.coeffs[j]
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.bound() != other.bound() {
            return Err(Error::BoundMismatch { expected: self.bound(), found: other.bound() });
        }
        PolyRing::check_same(self.ring(), other.ring())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(TruncatedSeries { coeffs })
    }

    /// Truncated Cauchy product.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let m = self.bound();
        let mut coeffs = vec![Polynomial::zero(self.ring()); m + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=m - i].iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = &coeffs[i + j] + &(a * b);
                }
            }
        }
        Ok(TruncatedSeries { coeffs })
    }
}
