use super::poly::Poly;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Polynomial of degree ≤ `degree_bound` through the first `degree_bound + 1`
/// samples; every remaining sample is a holdout that must lie on it.
///
/// Holdout residuals are measured against max(1, max |y|).
pub fn poly_interpolate(samples: &[(Scalar, Scalar)], degree_bound: usize, tol: f64) -> Result<Poly> {
    let m = degree_bound + 1;
    if samples.len() < m + 1 {
        return Err(Error::ProfileMismatch(format!(
            "{} samples for degree bound {degree_bound}; need at least one holdout",
            samples.len()
        )));
    }
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            let (xi, xj) = (&samples[i].0, &samples[j].0);
            let scale = 1f64.max(xi.abs_f64());
            if (xi - xj).abs_f64() <= tol * scale {
                return Err(Error::DuplicateNode(i, j));
            }
        }
    }
    let prec = samples[0].1.prec().max(samples[0].0.prec());
    let xs: Vec<&Scalar> = samples[..m].iter().map(|s| &s.0).collect();
    let mut c: Vec<Scalar> = samples[..m].iter().map(|s| s.1.clone()).collect();
    for k in 1..m {
        for i in (k..m).rev() {
            c[i] = (&c[i] - &c[i - 1]) / (xs[i] - xs[i - k]);
        }
    }
    let mut p = Poly::constant(c[m - 1].clone());
    for k in (0..m - 1).rev() {
        p = &p * &Poly::linear(-xs[k], Scalar::one(prec));
        p = &p + &Poly::constant(c[k].clone());
    }
    let scale = samples.iter().map(|s| s.1.abs_f64()).fold(1.0, f64::max);
    for (index, (x, y)) in samples.iter().enumerate().skip(m) {
        let residual = (p.eval(x) - y).abs_f64() / scale;
        if residual > tol {
            return Err(Error::HoldoutMismatch { index, residual, tol });
        }
    }
    Ok(p)
}

/// Root λ of a polynomial with profile `c·(x − r)(x − λ)` (known root `r`,
/// default 0) or `c·(x − λ)`.
pub fn poly_root_of_linear_factor(p: &Poly, known_root: Option<&Scalar>, tol: f64) -> Result<Scalar> {
    match p.degree() {
        Some(1) => Ok(-(p.coeff(0) / p.coeff(1))),
        Some(2) => {
            let scale = 1f64.max(p.max_abs());
            let r = known_root.cloned().unwrap_or_else(|| Scalar::zero(p.prec()));
            let at_root = p.eval(&r).abs_f64();
            let rs = 1f64.max(r.abs_f64());
            if at_root > tol * scale * rs * rs {
                return Err(Error::ProfileMismatch(format!(
                    "known root is not a zero (residual {at_root:.3e})"
                )));
            }
            let c2 = p.coeff(2);
            if c2.abs_f64() <= tol * scale {
                return Err(Error::ProfileMismatch("vanishing quadratic coefficient".into()));
            }
            // deflate: c2 x² + c1 x + c0 = (x − r)(c2 x + c1 + c2 r)
            Ok(-((p.coeff(1) + &c2 * &r) / c2))
        }
        d => Err(Error::ProfileMismatch(format!("degree {d:?} is neither 1 nor 2"))),
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
    fn square_recovered() {
        let samples: Vec<_> = (1..=4).map(|x| (s(x), s(x * x))).collect();
        let p = poly_interpolate(&samples, 2, 1e-30).unwrap();
        assert_eq!(p.degree(), Some(2));
        assert!(p.coeff(0).abs_f64() < 1e-35);
        assert!(p.coeff(1).abs_f64() < 1e-35);
        assert!((p.coeff(2) - s(1)).abs_f64() < 1e-35);
    }

    #[test]
    fn constant_recovered() {
        let c = Scalar::ratio(7, 3, P);
        let samples: Vec<_> = (0..3).map(|x| (s(x), c.clone())).collect();
        let p = poly_interpolate(&samples, 0, 1e-30).unwrap();
        assert_eq!(p.coeffs(), &[c]);
    }

    #[test]
    fn wrong_degree_detected() {
        let samples: Vec<_> = (1..=5).map(|x| (s(x), s(x * x * x))).collect();
        assert!(matches!(
            poly_interpolate(&samples, 2, 1e-30),
            Err(Error::HoldoutMismatch { index: 3, .. })
        ));
    }

    #[test]
    fn duplicate_nodes_rejected() {
        let samples = vec![(s(1), s(1)), (s(2), s(2)), (s(1), s(3))];
        assert!(matches!(poly_interpolate(&samples, 1, 1e-30), Err(Error::DuplicateNode(0, 2))));
    }

    #[test]
    fn linear_factor_roots() {
        let p = Poly::from_roots(&s(3), &[s(0), s(5)]);
        assert_eq!(poly_root_of_linear_factor(&p, None, 1e-30).unwrap(), s(5));
        let l = Poly::linear(s(-2), s(1));
        assert_eq!(poly_root_of_linear_factor(&l, None, 1e-30).unwrap(), s(2));
        let shifted = Poly::from_roots(&s(2), &[s(1), s(-4)]);
        assert!(matches!(
            poly_root_of_linear_factor(&shifted, None, 1e-30),
            Err(Error::ProfileMismatch(_))
        ));
        assert_eq!(poly_root_of_linear_factor(&shifted, Some(&s(1)), 1e-30).unwrap(), s(-4));
    }
}
