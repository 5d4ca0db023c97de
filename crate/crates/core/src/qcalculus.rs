//! Operators on the q-linear lattice {x₀qˢ}, q-shifted factorials,
//! Jackson integration and the theta-type prefactors.

use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// A value obtained by truncating an infinite sum or product, with a bound
/// on the discarded part.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated {
    pub value: Scalar,
    pub tail_bound: f64,
}

/// The q-linear lattice: ι₊x = qx, ι₋x = x, Δy(x) = (q − 1)x.
#[derive(Clone, Debug, PartialEq)]
pub struct QLattice {
    pub q: Scalar,
}

impl QLattice {
    pub fn new(q: Scalar) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::ZeroArgument("QLattice"));
        }
        if (&q - 1).is_zero() {
            return Err(Error::DegenerateBase);
        }
        if q.abs_f64() >= 1.0 {
            return Err(Error::DivergentBase);
        }
        Ok(QLattice { q })
    }

    pub fn up(&self, x: &Scalar) -> Scalar {
        &self.q * x
    }

    pub fn delta_y(&self, x: &Scalar) -> Scalar {
        (&self.q - 1) * x
    }

    pub fn ddo(&self, f_qx: &Scalar, f_x: &Scalar, x: &Scalar) -> Result<Scalar> {
        ddo(f_qx, f_x, x, &self.q)
    }

    pub fn mean(&self, f_qx: &Scalar, f_x: &Scalar) -> Scalar {
        mean_op(f_qx, f_x)
    }
}

/// 𝔻f(x) = (f(qx) − f(x)) / ((q − 1)x).
pub fn ddo(f_qx: &Scalar, f_x: &Scalar, x: &Scalar, q: &Scalar) -> Result<Scalar> {
    if x.is_zero() {
        return Err(Error::ZeroNode);
    }
    let qm1 = q - 1;
    if qm1.is_zero() {
        return Err(Error::DegenerateBase);
    }
    Ok((f_qx - f_x) / (qm1 * x))
}

/// 𝕄f(x) = (f(qx) + f(x)) / 2.
pub fn mean_op(f_qx: &Scalar, f_x: &Scalar) -> Scalar {
    (f_qx + f_x) / 2
}

/// (a; q)_n = ∏_{j<n} (1 − a q^j).
pub fn qpochhammer(a: &Scalar, q: &Scalar, n: usize) -> Scalar {
    let prec = a.prec().max(q.prec());
    let mut acc = Scalar::one(prec);
    let mut term = a.clone();
    for _ in 0..n {
        acc = acc * (1 - &term);
        term = term * q;
    }
    acc
}

/// (a; q)_∞, truncated once |a q^j| < 2^(−prec−16).
///
/// The discarded factors satisfy |∏(1 − ε_k) − 1| ≤ exp(Σ|ε_k|) − 1 with
/// Σ|ε_k| ≤ |aq^J| / (1 − |q|), which is the recorded bound (relative).
pub fn qpochhammer_inf(a: &Scalar, q: &Scalar) -> Result<Truncated> {
    let aq = q.abs_f64();
    if aq >= 1.0 {
        return Err(Error::DivergentBase);
    }
    let prec = a.prec().max(q.prec());
    let eps = 2f64.powi(-(prec as i32) - 16);
    let mut acc = Scalar::one(prec);
    let mut term = a.clone();
    while term.abs_f64() >= eps {
        acc = acc * (1 - &term);
        term = term * q;
    }
    let s = term.abs_f64() / (1.0 - aq);
    Ok(Truncated {
        value: acc,
        tail_bound: s.exp_m1(),
    })
}

/// Terminals and truncation of a Jackson integral ∫_c^d.
#[derive(Clone, Debug, PartialEq)]
pub struct QIntegralSpec {
    pub lower: Scalar,
    pub upper: Scalar,
    pub truncation: usize,
}

impl QIntegralSpec {
    pub fn new(lower: Scalar, upper: Scalar, truncation: usize) -> Result<Self> {
        if truncation < 32 {
            return Err(Error::Config(format!("truncation {truncation} below 32")));
        }
        if lower.is_zero() || upper.is_zero() {
            return Err(Error::ZeroArgument("QIntegralSpec terminal"));
        }
        if (&lower - &upper).is_zero() {
            return Err(Error::Config("coincident integration terminals".into()));
        }
        Ok(QIntegralSpec { lower, upper, truncation })
    }

    /// From 0 to `upper`.
    pub fn from_zero(upper: Scalar, truncation: usize) -> Self {
        let prec = upper.prec();
        QIntegralSpec {
            lower: Scalar::zero(prec),
            upper,
            truncation,
        }
    }
}

/// ∫_c^d f d_qx = (1 − q) Σ_{s=0}^{S} qˢ [d f(dqˢ) − c f(cqˢ)].
///
/// The tail bound is |q|^(S+1)/(1 − |q|) · (1 − q) · max over the sampled
/// terms, which presumes the integrand is bounded near the origin.
pub fn qintegral<F>(f: F, spec: &QIntegralSpec, q: &Scalar) -> Result<Truncated>
where
    F: Fn(&Scalar) -> Result<Scalar>,
{
    let prec = spec.upper.prec().max(q.prec());
    let mut sum = Scalar::zero(prec);
    let mut qs = Scalar::one(prec);
    let mut largest = 0f64;
    for _ in 0..=spec.truncation {
        for (term, sign) in [(&spec.upper, 1), (&spec.lower, -1)] {
            if term.is_zero() {
                continue;
            }
            let x = term * &qs;
            let v = f(&x).map_err(|_| Error::NonFiniteIntegrand(format!("{x:?}")))?;
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand(format!("{x:?}")));
            }
            let contrib = &v * &x;
            largest = largest.max(v.abs_f64() * term.abs_f64());
            sum = if sign > 0 { sum + contrib } else { sum - contrib };
        }
        qs = qs * q;
    }
    let aq = q.abs_f64();
    let one_minus_q = 1 - q;
    let tail = qs.abs_f64() * largest * one_minus_q.abs_f64() / (1.0 - aq);
    Ok(Truncated {
        value: sum * one_minus_q,
        tail_bound: tail,
    })
}

/// Finite lattice sum Σ_{s=0}^{N−1} Δy(x_s) f(x_s) with x_s = x₀qˢ, i.e. the
/// D-integral over the segment from x₀ to x₀q^N.
pub fn lattice_sum<F>(f: F, x0: &Scalar, q: &Scalar, steps: usize) -> Result<Scalar>
where
    F: Fn(&Scalar) -> Result<Scalar>,
{
    let mut x = x0.clone();
    let mut acc = Scalar::zero(x0.prec());
    for _ in 0..steps {
        acc = acc + (q - 1) * &x * f(&x)?;
        x = x * q;
    }
    Ok(acc)
}

/// ϑ_q(z) = (q, −qz, −1/z; q)_∞.
pub fn theta_q(z: &Scalar, q: &Scalar) -> Result<Scalar> {
    if z.is_zero() {
        return Err(Error::ZeroArgument("theta_q"));
    }
    let a = qpochhammer_inf(q, q)?.value;
    let b = qpochhammer_inf(&-(q * z), q)?.value;
    let c = qpochhammer_inf(&-z.recip(), q)?.value;
    Ok(a * b * c)
}

/// e_{q,t}(z) = ϑ_q(z) ϑ_q(1/t) / ϑ_q(z/t).
pub fn e_qt(z: &Scalar, t: &Scalar, q: &Scalar, tol: f64) -> Result<Scalar> {
    if t.is_zero() {
        return Err(Error::ZeroArgument("e_qt"));
    }
    let den = theta_q(&(z / t), q)?;
    if den.abs_f64() <= tol {
        return Err(Error::PoleHit("e_qt"));
    }
    Ok(theta_q(z, q)? * theta_q(&t.recip(), q)? / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rel_diff;

    const P: u32 = 256;
    const TOL: f64 = 1e-60;

    fn half() -> Scalar {
        Scalar::ratio(1, 2, P)
    }

    #[test]
    fn ddo_on_simple_functions() {
        let q = half();
        let x = Scalar::from_parts_f64(0.7, -0.3, P);
        let sq = |v: &Scalar| v.square();
        let d = ddo(&sq(&(&q * &x)), &sq(&x), &x, &q).unwrap();
        assert!(rel_diff(&d, &((&q + 1) * &x)) < TOL);
        let c = Scalar::from_i64(5, P);
        assert!(ddo(&c, &c, &x, &q).unwrap().is_zero());
        let inv = ddo(&(&q * &x).recip(), &x.recip(), &x, &q).unwrap();
        assert!(rel_diff(&inv, &-(&q * x.square()).recip()) < TOL);
    }

    #[test]
    fn ddo_guards() {
        let q = half();
        let z = Scalar::zero(P);
        assert_eq!(ddo(&z, &z, &z, &q), Err(Error::ZeroNode));
        let one = Scalar::one(P);
        assert_eq!(ddo(&z, &z, &one, &one), Err(Error::DegenerateBase));
    }

    #[test]
    fn ddo_lowers_monomial_degree() {
        let q = Scalar::ratio(2, 3, P);
        let x = Scalar::from_parts_f64(1.25, 0.5, P);
        for n in 1..=6 {
            let d = ddo(&(&q * &x).powi(n), &x.powi(n), &x, &q).unwrap();
            let expect = (q.powi(n) - 1) / (&q - 1) * x.powi(n - 1);
            assert!(rel_diff(&d, &expect) < TOL, "n = {n}");
        }
    }

    #[test]
    fn mean_of_identity() {
        let q = half();
        let x = Scalar::from_i64(3, P);
        assert_eq!(mean_op(&(&q * &x), &x), (&q + 1) * &x / 2);
    }

    #[test]
    fn finite_and_infinite_products() {
        let q = half();
        assert_eq!(qpochhammer(&Scalar::from_i64(9, P), &q, 0), Scalar::one(P));
        assert!(qpochhammer_inf(&Scalar::one(P), &q).unwrap().value.is_zero());
        assert_eq!(qpochhammer_inf(&q, &Scalar::one(P)), Err(Error::DivergentBase));
        // the truncated product agrees with a much longer direct product
        let direct = qpochhammer(&q, &q, 600);
        let t = qpochhammer_inf(&q, &q).unwrap();
        assert!(rel_diff(&t.value, &direct) < 1e-75);
        assert!(t.tail_bound < 1e-75);
    }

    #[test]
    fn jackson_integrals_of_monomials() {
        let q = half();
        let c = Scalar::ratio(3, 4, P);
        let spec = QIntegralSpec::from_zero(c.clone(), 300);
        let one = qintegral(|_| Ok(Scalar::one(P)), &spec, &q).unwrap();
        assert!(rel_diff(&one.value, &c) < TOL);
        let spec = QIntegralSpec::from_zero(Scalar::one(P), 300);
        for k in 0..5 {
            let v = qintegral(|x| Ok(x.powi(k)), &spec, &q).unwrap();
            let expect = (1 - &q) / (1 - q.powi(k + 1));
            assert!(rel_diff(&v.value, &expect) < TOL, "k = {k}");
        }
    }

    #[test]
    fn fundamental_theorem_telescopes() {
        let q = Scalar::ratio(3, 5, P);
        let x0 = Scalar::from_parts_f64(1.5, 0.25, P);
        let cube = |x: &Scalar| x.powi(3);
        let n = 9;
        let lhs = lattice_sum(|x| ddo(&cube(&(&q * x)), &cube(x), x, &q), &x0, &q, n).unwrap();
        let rhs = cube(&(&x0 * q.powi(n as i32))) - cube(&x0);
        assert!(rel_diff(&lhs, &rhs) < TOL);
    }

    #[test]
    fn theta_zero_and_small_q() {
        let q = half();
        assert!(theta_q(&Scalar::from_i64(-1, P), &q).unwrap().is_zero());
        assert_eq!(theta_q(&Scalar::zero(P), &q), Err(Error::ZeroArgument("theta_q")));
        let tiny = Scalar::ratio(1, 1 << 40, P);
        let z = Scalar::from_parts_f64(0.8, 0.6, P);
        let lead = 1 + z.recip();
        assert!(rel_diff(&theta_q(&z, &tiny).unwrap(), &lead) < 1e-11);
    }

    #[test]
    fn theta_at_one() {
        let q = half();
        let direct = qpochhammer_inf(&q, &q).unwrap().value
            * qpochhammer_inf(&-&q, &q).unwrap().value
            * qpochhammer_inf(&Scalar::from_i64(-1, P), &q).unwrap().value;
        let t = Scalar::from_parts_f64(0.4, -0.2, P);
        let e = e_qt(&t, &t, &q, TOL).unwrap();
        let expect = theta_q(&t, &q).unwrap() * theta_q(&t.recip(), &q).unwrap() / direct;
        assert!(rel_diff(&e, &expect) < TOL);
    }

    #[test]
    fn theta_orientation() {
        let prec = 256;
        let q = Scalar::ratio(1, 2, prec);
        let t = Scalar::from_parts_f64(0.4, -0.2, prec);
        for z in [Scalar::from_parts_f64(0.3, 0.7, prec), Scalar::from_parts_f64(-1.2, 0.4, prec)] {
            let r = theta_q(&(&q * &z), &q).unwrap() / theta_q(&z, &q).unwrap();
            assert!(rel_diff(&r, &(&q * &z).recip()) < TOL);
            let e = e_qt(&z, &t, &q, TOL).unwrap();
            assert!(rel_diff(&(e_qt(&(&q * &z), &t, &q, TOL).unwrap() / &e), &t.recip()) < TOL);
            assert!(rel_diff(&(e_qt(&z, &(&q * &t), &q, TOL).unwrap() / &e), &z.recip()) < TOL);
        }
    }
}
