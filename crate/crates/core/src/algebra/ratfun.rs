use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Quotient of two polynomials, kept unreduced.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::PoleHit("rational function with zero denominator"));
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(p: Poly) -> Self {
        let one = Poly::constant(Scalar::one(p.prec()));
        RatFun { num: p, den: one }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    /// Evaluation; a denominator that is small relative to the sum of the
    /// moduli of its terms counts as a pole.
    pub fn eval(&self, x: &Scalar, tol: f64) -> Result<Scalar> {
        let d = self.den.eval(x);
        let ax = x.abs_f64();
        let mut size = 0.0;
        let mut pow = 1.0;
        for c in self.den.coeffs() {
            size += c.abs_f64() * pow;
            pow *= ax;
        }
        if d.abs_f64() <= tol * size {
            return Err(Error::PoleHit("rational function"));
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        RatFun {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        RatFun {
            num: &(&self.num * &o.den) - &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        RatFun {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    pub fn scale(&self, c: &Scalar) -> RatFun {
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pole_is_an_error() {
        let p = 128;
        let x = Poly::x(p);
        let r = RatFun::new(Poly::constant(Scalar::one(p)), x).unwrap();
        assert!(matches!(r.eval(&Scalar::zero(p), 1e-30), Err(Error::PoleHit(_))));
        let v = r.eval(&Scalar::from_i64(4, p), 1e-30).unwrap();
        assert_eq!(v, Scalar::ratio(1, 4, p));
    }

    #[test]
    fn sum_of_fractions() {
        let p = 128;
        let one = Poly::constant(Scalar::one(p));
        let a = RatFun::new(one.clone(), Poly::x(p)).unwrap();
        let b = RatFun::new(one.clone(), Poly::linear(Scalar::one(p), Scalar::one(p))).unwrap();
        let x = Scalar::from_i64(3, p);
        let v = a.add(&b).eval(&x, 1e-30).unwrap();
        let expect = Scalar::ratio(1, 3, p) + Scalar::ratio(1, 4, p);
        assert!(crate::algebra::rel_diff(&v, &expect) < 1e-35);
    }
}
