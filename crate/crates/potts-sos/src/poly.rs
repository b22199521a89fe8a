//! Dense univariate polynomials with double-double coefficients, ascending
//! order.
//!
//! Just enough arithmetic for the deflation cross-check: products, shifts,
//! differences, and Euclidean division. Coefficients stay at compensated
//! width throughout because the division conditions like 1/lead^deg, and
//! the divisor's leading coefficient can be tiny compared to its other
//! coefficients (it is -theta^2 against O(r^2) terms).

use crate::numeric::Dd;

#[derive(Debug, Clone)]
pub(crate) struct Poly(Vec<Dd>);

impl Poly {
    pub fn from_f64(coeffs: &[f64]) -> Poly {
        Poly(coeffs.iter().map(|&c| Dd::from_f64(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.0.get(i).map(|c| c.value()).unwrap_or(0.0)
    }

    fn coeff_dd(&self, i: usize) -> Dd {
        self.0.get(i).copied().unwrap_or(Dd::ZERO)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![Dd::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (j, &b) in other.0.iter().enumerate() {
                out[i + j] = out[i + j].add(a.mul(b));
            }
        }
        Poly(out)
    }

    pub fn square(&self) -> Poly {
        self.mul(self)
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|c| c.mul_f64(s)).collect())
    }

    /// Multiplies by z^n.
    pub fn shift_up(&self, n: usize) -> Poly {
        let mut out = vec![Dd::ZERO; n];
        out.extend_from_slice(&self.0);
        Poly(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly(
            (0..len)
                .map(|i| self.coeff_dd(i).add(other.coeff_dd(i)))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let len = self.0.len().max(other.0.len());
        Poly(
            (0..len)
                .map(|i| self.coeff_dd(i).sub(other.coeff_dd(i)))
                .collect(),
        )
    }

    /// Euclidean division by a divisor with nonzero leading coefficient:
    /// returns (quotient, remainder) with deg(remainder) < deg(divisor).
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree();
        let lead = divisor.0[dd];
        assert!(lead.value() != 0.0, "divisor leading coefficient is zero");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly(vec![Dd::ZERO]), Poly(rem));
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![Dd::ZERO; qlen];
        for qi in (0..qlen).rev() {
            let factor = rem[qi + dd].div(lead);
            quot[qi] = factor;
            for di in 0..=dd {
                rem[qi + di] = rem[qi + di].sub(factor.mul(divisor.0[di]));
            }
        }
        rem.truncate(dd.max(1));
        (Poly(quot), Poly(rem))
    }
}
