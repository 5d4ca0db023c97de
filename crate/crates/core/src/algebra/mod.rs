//! Complex scalars at arbitrary precision and the polynomial, rational and
//! 2×2 matrix algebra built on them.

mod interp;
pub mod linalg;
mod mat2;
mod poly;
mod ratfun;
mod scalar;

pub use interp::{poly_interpolate, poly_root_of_linear_factor};
pub use mat2::Mat2;
pub use poly::Poly;
pub use ratfun::RatFun;
pub use scalar::{rel_diff, Scalar};

/// `mat2_inv` under its conventional name.
pub fn mat2_inv(m: &Mat2<Scalar>, tol: f64) -> crate::error::Result<Mat2<Scalar>> {
    m.inv(tol)
}
