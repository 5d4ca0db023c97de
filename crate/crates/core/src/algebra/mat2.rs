use std::ops::{Add, Mul, Sub};

use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// 2×2 matrix over scalars or polynomials.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<T> {
    pub e11: T,
    pub e12: T,
    pub e21: T,
    pub e22: T,
}

impl<T> Mat2<T> {
    pub fn new(e11: T, e12: T, e21: T, e22: T) -> Self {
        Mat2 { e11, e12, e21, e22 }
    }

    pub fn entries(&self) -> [&T; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Mat2<U> {
        Mat2::new(f(&self.e11), f(&self.e12), f(&self.e21), f(&self.e22))
    }
}

impl<T> Mat2<T>
where
    for<'a> &'a T: Add<&'a T, Output = T> + Sub<&'a T, Output = T> + Mul<&'a T, Output = T>,
{
    pub fn det(&self) -> T {
        &(&self.e11 * &self.e22) - &(&self.e12 * &self.e21)
    }

    pub fn mul(&self, o: &Mat2<T>) -> Mat2<T> {
        Mat2::new(
            &(&self.e11 * &o.e11) + &(&self.e12 * &o.e21),
            &(&self.e11 * &o.e12) + &(&self.e12 * &o.e22),
            &(&self.e21 * &o.e11) + &(&self.e22 * &o.e21),
            &(&self.e21 * &o.e12) + &(&self.e22 * &o.e22),
        )
    }

    pub fn add(&self, o: &Mat2<T>) -> Mat2<T> {
        Mat2::new(
            &self.e11 + &o.e11,
            &self.e12 + &o.e12,
            &self.e21 + &o.e21,
            &self.e22 + &o.e22,
        )
    }

    pub fn sub(&self, o: &Mat2<T>) -> Mat2<T> {
        Mat2::new(
            &self.e11 - &o.e11,
            &self.e12 - &o.e12,
            &self.e21 - &o.e21,
            &self.e22 - &o.e22,
        )
    }
}

impl Mat2<Scalar> {
    pub fn identity(prec: u32) -> Self {
        Mat2::new(
            Scalar::one(prec),
            Scalar::zero(prec),
            Scalar::zero(prec),
            Scalar::one(prec),
        )
    }

    pub fn diag(a: Scalar, d: Scalar) -> Self {
        let prec = a.prec().max(d.prec());
        Mat2::new(a, Scalar::zero(prec), Scalar::zero(prec), d)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|e| e * c)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.entries().iter().map(|e| e.abs_f64()).fold(0.0, f64::max)
    }

    /// Inverse; fails when |det| ≤ tol·‖m‖².
    pub fn inv(&self, tol: f64) -> Result<Self> {
        let d = self.det();
        let norm = self.max_abs();
        if d.abs_f64() <= tol * norm * norm || d.is_zero() {
            return Err(Error::SingularMatrix(d.abs_f64()));
        }
        let r = d.recip();
        Ok(Mat2::new(
            &self.e22 * &r,
            -(&self.e12 * &r),
            -(&self.e21 * &r),
            &self.e11 * &r,
        ))
    }

    /// Entrywise max |a − b| / max(1, ‖a‖, ‖b‖).
    pub fn max_diff(&self, o: &Mat2<Scalar>) -> f64 {
        let d = self.sub(o).max_abs();
        d / 1f64.max(self.max_abs()).max(o.max_abs())
    }
}

impl Mat2<Poly> {
    pub fn eval(&self, x: &Scalar) -> Mat2<Scalar> {
        self.map(|p| p.eval(x))
    }

    /// Worst coefficient discrepancy over the four entries.
    pub fn max_coeff_diff(&self, o: &Mat2<Poly>) -> f64 {
        self.entries()
            .iter()
            .zip(o.entries())
            .map(|(a, b)| a.max_coeff_diff(b))
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    #[test]
    fn identity_and_diag_inverse() {
        let i = Mat2::identity(P);
        assert_eq!(i.inv(1e-30).unwrap(), i);
        let d = Mat2::diag(Scalar::from_i64(2, P), Scalar::from_i64(-4, P));
        let inv = d.inv(1e-30).unwrap();
        assert_eq!(inv, Mat2::diag(Scalar::ratio(1, 2, P), Scalar::ratio(-1, 4, P)));
    }

    #[test]
    fn singular_rejected() {
        let one = Scalar::one(P);
        let m = Mat2::new(one.clone(), one.clone(), one.clone(), one);
        assert!(matches!(m.inv(1e-30), Err(Error::SingularMatrix(_))));
    }
}
