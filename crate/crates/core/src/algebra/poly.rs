use std::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;

/// Dense univariate polynomial, lowest degree first. Exact-zero leading
/// coefficients are trimmed; numerically tiny ones are kept.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Scalar>,
    prec: u32,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>, prec: u32) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Poly { coeffs: Vec::new(), prec }
    }

    pub fn constant(c: Scalar) -> Self {
        let prec = c.prec();
        Poly::new(vec![c], prec)
    }

    /// The polynomial `x`.
    pub fn x(prec: u32) -> Self {
        Poly::new(vec![Scalar::zero(prec), Scalar::one(prec)], prec)
    }

    /// `c0 + c1 x`.
    pub fn linear(c0: Scalar, c1: Scalar) -> Self {
        let prec = c0.prec().max(c1.prec());
        Poly::new(vec![c0, c1], prec)
    }

    /// `lead · ∏ (x − r)`.
    pub fn from_roots(lead: &Scalar, roots: &[Scalar]) -> Self {
        let prec = lead.prec();
        let mut p = Poly::constant(lead.clone());
        for r in roots {
            p = &p * &Poly::linear(-r, Scalar::one(prec));
        }
        p
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k`, zero beyond the stored length.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.prec))
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero(self.prec);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect(), self.prec)
    }

    /// `p(c·x)`.
    pub fn dilate(&self, c: &Scalar) -> Poly {
        let mut pow = Scalar::one(self.prec);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow = pow * c;
        }
        Poly::new(out, self.prec)
    }

    /// `(p(x) − p(0)) / x`; the caller decides whether dropping `p(0)` is exact.
    pub fn div_x(&self) -> Poly {
        Poly::new(self.coeffs.iter().skip(1).cloned().collect(), self.prec)
    }

    /// Synthetic division by (x − r): quotient and remainder p(r).
    pub fn div_linear(&self, r: &Scalar) -> (Poly, Scalar) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Poly::zero(self.prec), Scalar::zero(self.prec));
        }
        let mut quot = vec![Scalar::zero(self.prec); n - 1];
        let mut acc = Scalar::zero(self.prec);
        for k in (0..n).rev() {
            acc = acc * r + &self.coeffs[k];
            if k > 0 {
                quot[k - 1] = acc.clone();
            }
        }
        (Poly::new(quot, self.prec), acc)
    }

    /// x^d·p(1/x) for d ≥ deg p.
    pub fn reverse(&self, d: usize) -> Poly {
        let mut c = vec![Scalar::zero(self.prec); d + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            c[d - k] = a.clone();
        }
        Poly::new(c, self.prec)
    }

    pub fn mul_x(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Scalar::zero(self.prec)];
        c.extend(self.coeffs.iter().cloned());
        Poly::new(c, self.prec)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(Scalar::abs_f64).fold(0.0, f64::max)
    }

    /// max_k |a_k − b_k| / max(1, ‖a‖∞, ‖b‖∞).
    pub fn max_coeff_diff(&self, other: &Poly) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let d = (0..len)
            .map(|k| (self.coeff(k) - other.coeff(k)).abs_f64())
            .fold(0.0, f64::max);
        d / 1f64.max(self.max_abs()).max(other.max_abs())
    }
}

impl<'b> Add<&'b Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &'b Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let prec = self.prec.max(rhs.prec);
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect(), prec)
    }
}

impl<'b> Sub<&'b Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &'b Poly) -> Poly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let prec = self.prec.max(rhs.prec);
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect(), prec)
    }
}

impl<'b> Mul<&'b Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &'b Poly) -> Poly {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(prec);
        }
        let mut out = vec![Scalar::zero(prec); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let prod = a * b;
                out[i + j] = std::mem::replace(&mut out[i + j], Scalar::zero(prec)) + prod;
            }
        }
        Poly::new(out, prec)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect(), self.prec)
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        &self - &rhs
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn s(v: i64) -> Scalar {
        Scalar::from_i64(v, P)
    }

    #[test]
    fn product_and_eval() {
        let p = Poly::from_roots(&s(3), &[s(0), s(5)]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.coeff(1), s(-15));
        assert!(p.eval(&s(5)).is_zero());
        assert_eq!(p.eval(&s(2)), s(-18));
    }

    #[test]
    fn dilate_matches_substitution() {
        let p = Poly::new(vec![s(1), s(2), s(3)], P);
        let q = Scalar::ratio(1, 2, P);
        let x = Scalar::ratio(7, 3, P);
        let lhs = p.dilate(&q).eval(&x);
        let rhs = p.eval(&(&q * &x));
        assert!(super::super::rel_diff(&lhs, &rhs) < 1e-35);
    }

    #[test]
    fn cancellation_trims_exact_zeros() {
        let p = Poly::new(vec![s(1), s(1)], P);
        let d = &p - &p;
        assert!(d.is_zero());
        assert_eq!(d.degree(), None);
    }

    #[test]
    fn linear_division_and_reversal() {
        let s = |v| Scalar::from_i64(v, 128);
        // (x − 2)(x² + 3) + 5
        let p = Poly::new(vec![s(-1), s(3), s(-2), s(1)], 128);
        let (quot, rem) = p.div_linear(&s(2));
        assert_eq!(quot, Poly::new(vec![s(3), s(0), s(1)], 128));
        assert_eq!(rem, s(5));
        let r = Poly::new(vec![s(1), s(2)], 128).reverse(3);
        assert_eq!(r, Poly::new(vec![s(0), s(0), s(2), s(1)], 128));
    }
}
