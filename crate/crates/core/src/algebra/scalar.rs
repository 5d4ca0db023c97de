use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::ops::Pow;
use rug::{Complex, Float, Rational};

/// High-precision complex number. Precision travels with the value; binary
/// operations produce the larger of the two operand precisions.
#[derive(Clone, PartialEq)]
pub struct Scalar(Complex);

impl Scalar {
    pub fn zero(prec: u32) -> Self {
        Scalar(Complex::new(prec))
    }

    pub fn one(prec: u32) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Scalar(Complex::with_val(prec, v))
    }

    pub fn from_f64(v: f64, prec: u32) -> Self {
        Scalar(Complex::with_val(prec, v))
    }

    pub fn from_parts_f64(re: f64, im: f64, prec: u32) -> Self {
        Scalar(Complex::with_val(prec, (re, im)))
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Scalar(Complex::with_val(prec, r))
    }

    /// `p/q` rounded to the working precision.
    pub fn ratio(p: i64, q: i64, prec: u32) -> Self {
        Self::from_rational(&Rational::from((p, q)), prec)
    }

    pub fn from_complex(c: Complex) -> Self {
        Scalar(c)
    }

    pub fn imag_unit(prec: u32) -> Self {
        Scalar(Complex::with_val(prec, (0, 1)))
    }

    pub fn prec(&self) -> u32 {
        self.0.prec().0.max(self.0.prec().1)
    }

    pub fn as_complex(&self) -> &Complex {
        &self.0
    }

    pub fn re(&self) -> &Float {
        self.0.real()
    }

    pub fn im(&self) -> &Float {
        self.0.imag()
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.0.abs_ref())
    }

    /// Modulus rounded to `f64`; saturates to 0 or infinity outside its range.
    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64_round(Round::Up)
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }

    pub fn is_finite(&self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re().is_zero() && self.im().is_zero()
    }

    pub fn sqrt(&self) -> Self {
        Scalar(Complex::with_val(self.prec(), self.0.sqrt_ref()))
    }

    pub fn recip(&self) -> Self {
        Scalar(Complex::with_val(self.prec(), self.0.recip_ref()))
    }

    pub fn square(&self) -> Self {
        Scalar(Complex::with_val(self.prec(), self.0.square_ref()))
    }

    pub fn powi(&self, n: i32) -> Self {
        Scalar(Complex::with_val(self.prec(), (&self.0).pow(n)))
    }

    pub fn conj(&self) -> Self {
        Scalar(Complex::with_val(self.prec(), self.0.conj_ref()))
    }

    /// Same value rounded to another precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        Scalar(Complex::with_val(prec, &self.0))
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Scalar>>(items: I, prec: u32) -> Self {
        let mut acc = Complex::new(prec);
        for s in items {
            acc += &s.0;
        }
        Scalar(acc)
    }

    pub fn product<'a, I: IntoIterator<Item = &'a Scalar>>(items: I, prec: u32) -> Self {
        let mut acc = Complex::with_val(prec, 1);
        for s in items {
            acc *= &s.0;
        }
        Scalar(acc)
    }

    /// Decimal rendering of real and imaginary parts with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (
            format!("{:.*e}", digits.saturating_sub(1), self.re()),
            format!("{:.*e}", digits.saturating_sub(1), self.im()),
        )
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_decimal(20);
        write!(f, "({re}, {im})")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let (re, im) = self.to_decimal(digits);
        write!(f, "{re} + {im}i")
    }
}

/// |a − b| / max(1, |a|, |b|): absolute near the origin, relative for large values.
pub fn rel_diff(a: &Scalar, b: &Scalar) -> f64 {
    let d = (a - b).abs_f64();
    let scale = 1f64.max(a.abs_f64()).max(b.abs_f64());
    d / scale
}

macro_rules! binop {
    ($tr:ident, $method:ident, $assign:ident, $am:ident) => {
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'b Scalar) -> Scalar {
                let prec = self.prec().max(rhs.prec());
                Scalar(Complex::with_val(prec, $tr::$method(&self.0, &rhs.0)))
            }
        }
        impl<'b> $tr<&'b Scalar> for Scalar {
            type Output = Scalar;
            fn $method(mut self, rhs: &'b Scalar) -> Scalar {
                if self.prec() >= rhs.prec() {
                    std::ops::$assign::$am(&mut self.0, &rhs.0);
                    self
                } else {
                    $tr::$method(&self, rhs)
                }
            }
        }
        impl<'a> $tr<Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $tr::$method(self, &rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $tr::$method(self, &rhs)
            }
        }
        impl<'a> $tr<i32> for &'a Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i32) -> Scalar {
                Scalar(Complex::with_val(self.prec(), $tr::$method(&self.0, rhs)))
            }
        }
        impl $tr<i32> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: i32) -> Scalar {
                $tr::$method(&self, rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for i32 {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                Scalar(Complex::with_val(rhs.prec(), $tr::$method(self, &rhs.0)))
            }
        }
        impl $tr<Scalar> for i32 {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                $tr::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(Complex::with_val(self.prec(), -&self.0))
    }
}
