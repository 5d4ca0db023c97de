//! The deformed big q-Jacobi weight
//! w(x;t) = (b₂x, b₃x, x/(b₆t); q)_∞ / (b₁x, b₄x, b₆x/t; q)_∞
//! and its spectral and deformation data.

use crate::algebra::{poly_interpolate, rel_diff, Poly, Scalar};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::ops::OpsData;
use crate::qcalculus::{ddo, mean_op, qpochhammer_inf};

/// Window of lattice shifts scanned by the regularity check.
const REGULARITY_WINDOW: i32 = 64;

/// Exact-rational style inputs before derivation of b₄ and b₅.
#[derive(Clone, Debug)]
pub struct ParamSpec {
    pub q: Scalar,
    pub t: Scalar,
    pub b1: Scalar,
    pub b2: Scalar,
    pub b3: Scalar,
    pub b4: Option<Scalar>,
    pub b6: Scalar,
    pub n: usize,
}

/// A validated problem instance. `b5 = qⁿ b₁ b₄ b₆` is always derived.
#[derive(Clone, Debug, PartialEq)]
pub struct Params {
    pub q: Scalar,
    pub t: Scalar,
    pub b1: Scalar,
    pub b2: Scalar,
    pub b3: Scalar,
    pub b4: Scalar,
    pub b5: Scalar,
    pub b6: Scalar,
    pub n: usize,
    tol: f64,
}

fn near(a: &Scalar, b: &Scalar, tol: f64) -> bool {
    rel_diff(a, b) <= tol
}

impl Params {
    pub fn new(spec: ParamSpec, ctx: &Ctx) -> Result<Self> {
        let tol = ctx.tol;
        let ParamSpec { q, t, b1, b2, b3, b4, b6, n } = spec;
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if q.is_zero() || q.abs_f64() >= 1.0 {
            return bad("need 0 < |q| < 1");
        }
        if near(&q, &Scalar::one(ctx.prec), tol) {
            return bad("q = 1");
        }
        if t.is_zero() || b6.is_zero() {
            return bad("t and b6 must be nonzero");
        }
        for (name, b) in [("b1", &b1), ("b2", &b2), ("b3", &b3)] {
            if b.abs_f64() <= tol {
                return bad(&format!("{name} must be nonzero"));
            }
        }
        let derived = (&b1 * &b2 * &b3).recip();
        let b4 = match b4 {
            Some(b4) => {
                if !near(&(&b1 * &b2 * &b3 * &b4), &Scalar::one(ctx.prec), tol) {
                    return bad("b1 b2 b3 b4 = 1 violated");
                }
                b4
            }
            None => derived,
        };
        let b5 = &q.powi(n as i32) * &b1 * &b4 * &b6;
        let p = Params { q, t, b1, b2, b3, b4, b5, b6, n, tol };
        p.check_generic()?;
        p.check_regular()?;
        Ok(p)
    }

    /// q = 1/2, n = 1, b₁ = 3/2, b₂ = 4/5, b₃ = 5/7, b₆ = 2/3, t = 1/3.
    pub fn default_instance(ctx: &Ctx) -> Self {
        let r = |a, b| Scalar::ratio(a, b, ctx.prec);
        Params::new(
            ParamSpec {
                q: r(1, 2),
                t: r(1, 3),
                b1: r(3, 2),
                b2: r(4, 5),
                b3: r(5, 7),
                b4: None,
                b6: r(2, 3),
                n: 1,
            },
            ctx,
        )
        .expect("default instance is valid")
    }

    fn check_generic(&self) -> Result<()> {
        let one = Scalar::one(self.q.prec());
        let b5sq = self.b5.square();
        let fail = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if near(&b5sq, &one, self.tol) {
            return fail("b5 = ±1 excluded");
        }
        if near(&(&self.q * &b5sq), &one, self.tol) {
            return fail("b5 = q^(-1/2) excluded");
        }
        if near(&b5sq, &self.q, self.tol) {
            return fail("b5 = q^(1/2) excluded");
        }
        Ok(())
    }

    /// Zeros of W² − Δy²V² must not be related by a lattice shift qᵏ, |k| ≤ 64.
    fn check_regular(&self) -> Result<()> {
        let roots = self.spectral_zeros(&self.t);
        for i in 0..roots.len() {
            for j in 0..roots.len() {
                if i == j {
                    continue;
                }
                let mut shifted = roots[j].clone();
                for _ in 0..=REGULARITY_WINDOW {
                    if near(&roots[i], &shifted, self.tol) {
                        return Err(Error::InvalidParams(format!(
                            "irregular weight: spectral zeros {i} and {j} related by a lattice shift"
                        )));
                    }
                    shifted = shifted * &self.q;
                }
            }
        }
        Ok(())
    }

    /// Zeros of (W+ΔyV)(W−ΔyV) at time `t`: 1/b₁, 1/b₄, t/b₆, 1/b₂, 1/b₃, b₆t.
    pub fn spectral_zeros(&self, t: &Scalar) -> [Scalar; 6] {
        [
            self.b1.recip(),
            self.b4.recip(),
            t / &self.b6,
            self.b2.recip(),
            self.b3.recip(),
            &self.b6 * t,
        ]
    }

    /// Same weight, another polynomial index (b₅ re-derived).
    pub fn with_n(&self, n: usize) -> Result<Self> {
        let mut p = self.clone();
        p.n = n;
        p.b5 = &self.q.powi(n as i32) * &self.b1 * &self.b4 * &self.b6;
        p.check_generic()?;
        Ok(p)
    }

    /// Same parameters at another time.
    pub fn with_t(&self, t: Scalar) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::InvalidParams("t must be nonzero".into()));
        }
        let mut p = self.clone();
        p.t = t;
        p.check_regular()?;
        Ok(p)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn prec(&self) -> u32 {
        self.q.prec()
    }

    pub fn bs(&self) -> [&Scalar; 4] {
        [&self.b1, &self.b2, &self.b3, &self.b4]
    }

    /// ∏_{j=1}^{4} f(b_j).
    pub fn prod_b(&self, f: impl Fn(&Scalar) -> Scalar) -> Scalar {
        self.bs()
            .iter()
            .fold(Scalar::one(self.prec()), |acc, b| acc * f(b))
    }

    pub fn sum_b(&self) -> Scalar {
        &self.b1 + &self.b2 + &self.b3 + &self.b4
    }

    pub fn sum_inv_b(&self) -> Scalar {
        self.b1.recip() + self.b2.recip() + self.b3.recip() + self.b4.recip()
    }

    /// κ₊ = −b₅b₆, the x³ coefficient of 𝔚₊.
    pub fn kappa_plus(&self) -> Scalar {
        -(&self.b5 * &self.b6)
    }

    /// κ₋ = −b₆/b₅, the x³ coefficient of 𝔚₋.
    pub fn kappa_minus(&self) -> Scalar {
        -(&self.b6 / &self.b5)
    }

    /// u₁ = −b₆(1 − qb₅²)/(q(1 − q)b₅), the slope of Θ_n.
    pub fn u1(&self) -> Scalar {
        let q = &self.q;
        -(&self.b6 * (1 - q * self.b5.square())) / (q * (1 - q) * &self.b5)
    }
}

/// W + ΔyV and W − ΔyV.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData {
    pub w_plus: Poly,
    pub w_minus: Poly,
    q: Scalar,
}

impl SpectralData {
    pub fn w(&self) -> Poly {
        (&self.w_plus + &self.w_minus).scale(&Scalar::ratio(1, 2, self.q.prec()))
    }

    /// V = (w₊ − w₋)/(2Δy); exact because the constant terms agree.
    pub fn v(&self) -> Poly {
        let d = &self.w_plus - &self.w_minus;
        d.div_x().scale(&(2 * (&self.q - 1)).recip())
    }

    /// W² − Δy²V² = w₊w₋.
    pub fn det(&self) -> Poly {
        &self.w_plus * &self.w_minus
    }
}

/// R + ΔuS and R − ΔuS.
#[derive(Clone, Debug, PartialEq)]
pub struct DeformData {
    pub r_plus: Poly,
    pub r_minus: Poly,
}

fn one_minus(b: &Scalar) -> Poly {
    Poly::linear(Scalar::one(b.prec()), -b)
}

pub fn spectral_data(p: &Params, t: &Scalar) -> SpectralData {
    let b6 = &p.b6;
    let w_plus = &(&one_minus(&p.b1) * &one_minus(&p.b4)) * &Poly::linear(t.clone(), -b6);
    let w_minus = &(&one_minus(&p.b2) * &one_minus(&p.b3)) * &Poly::linear(b6 * t, Scalar::from_i64(-1, p.prec()));
    SpectralData {
        w_plus: w_plus.scale(b6),
        w_minus,
        q: p.q.clone(),
    }
}

pub fn deformation_data(p: &Params, t: &Scalar) -> DeformData {
    let b6 = &p.b6;
    let qt = &p.q * t;
    DeformData {
        r_plus: Poly::linear(qt.clone(), -b6.recip()),
        r_minus: Poly::linear(qt, -b6),
    }
}

/// w(x;t) as the six-factor quotient of infinite q-products.
pub fn weight_eval(x: &Scalar, t: &Scalar, p: &Params) -> Result<Scalar> {
    let q = &p.q;
    let inf = |a: Scalar| qpochhammer_inf(&a, q).map(|r| r.value);
    let den = inf(&p.b1 * x)? * inf(&p.b4 * x)? * inf(&p.b6 * x / t)?;
    if den.abs_f64() <= p.tol {
        return Err(Error::WeightPole(format!("{x:?}")));
    }
    let num = inf(&p.b2 * x)? * inf(&p.b3 * x)? * inf(x / (&p.b6 * t))?;
    Ok(num / den)
}

/// Relative residual of the spectral/deformation compatibility relation
/// (w₊/w₋)(x; qt)·(r₊/r₋)(x; t) = (w₊/w₋)(x; t)·(r₊/r₋)(qx; t).
pub fn check_wv_rs(p: &Params, t: &Scalar, x: &Scalar) -> Result<f64> {
    let qt = &p.q * t;
    let qx = &p.q * x;
    let s_t = spectral_data(p, t);
    let s_qt = spectral_data(p, &qt);
    let d = deformation_data(p, t);
    let guard = |v: Scalar, name| {
        if v.abs_f64() <= p.tol {
            Err(Error::FactorVanishes(name))
        } else {
            Ok(v)
        }
    };
    let wm_qt = guard(s_qt.w_minus.eval(x), "W-ΔyV at qt")?;
    let wm_t = guard(s_t.w_minus.eval(x), "W-ΔyV at t")?;
    let rm_x = guard(d.r_minus.eval(x), "R-ΔuS at x")?;
    let rm_qx = guard(d.r_minus.eval(&qx), "R-ΔuS at qx")?;
    let lhs = s_qt.w_plus.eval(x) / wm_qt * d.r_plus.eval(x) / rm_x;
    let rhs = s_t.w_plus.eval(x) / wm_t * d.r_plus.eval(&qx) / rm_qx;
    Ok(rel_diff(&lhs, &rhs))
}

/// Relative residual of w(qx; t)/w(x; t) = (W + ΔyV)/(W − ΔyV) at x.
pub fn sc_ratio_residual(x: &Scalar, t: &Scalar, p: &Params) -> Result<f64> {
    let sd = spectral_data(p, t);
    let den = sd.w_minus.eval(x);
    if den.abs_f64() <= p.tol {
        return Err(Error::FactorVanishes("W-ΔyV"));
    }
    let lhs = weight_eval(&(&p.q * x), t, p)? / weight_eval(x, t, p)?;
    Ok(rel_diff(&lhs, &(sd.w_plus.eval(x) / den)))
}

/// Relative residual of w(x; qt)/w(x; t) = (R + ΔuS)/(R − ΔuS) at x.
pub fn dsc_ratio_residual(x: &Scalar, t: &Scalar, p: &Params) -> Result<f64> {
    let d = deformation_data(p, t);
    let den = d.r_minus.eval(x);
    if den.abs_f64() <= p.tol {
        return Err(Error::FactorVanishes("R-ΔuS"));
    }
    let lhs = weight_eval(x, &(&p.q * t), p)? / weight_eval(x, t, p)?;
    Ok(rel_diff(&lhs, &(d.r_plus.eval(x) / den)))
}

/// χ = (x − qb₆t)(b₆x − qt) / (q(x − b₆t)(b₆x − t)).
pub fn chi(x: &Scalar, t: &Scalar, p: &Params) -> Result<Scalar> {
    let (q, b6) = (&p.q, &p.b6);
    let den = q * (x - b6 * t) * (b6 * x - t);
    let scale = 1f64.max(x.abs_f64()).powi(2);
    if den.abs_f64() <= p.tol * scale {
        return Err(Error::PoleHit("chi"));
    }
    Ok((x - q * b6 * t) * (b6 * x - q * t) / den)
}

/// The two defining product forms of χ, built from w± and r±.
pub fn chi_product_forms(x: &Scalar, t: &Scalar, p: &Params) -> Result<(Scalar, Scalar)> {
    let qt = &p.q * t;
    let qx = &p.q * x;
    let (s_t, s_qt, d) = (spectral_data(p, t), spectral_data(p, &qt), deformation_data(p, t));
    let ratio = |a: Scalar, b: Scalar| {
        if b.abs_f64() <= p.tol {
            Err(Error::PoleHit("chi product form"))
        } else {
            Ok(a / b)
        }
    };
    let plus = ratio(s_qt.w_plus.eval(x), s_t.w_plus.eval(x))? * ratio(d.r_plus.eval(x), d.r_plus.eval(&qx))?;
    let minus = ratio(s_qt.w_minus.eval(x), s_t.w_minus.eval(x))? * ratio(d.r_minus.eval(x), d.r_minus.eval(&qx))?;
    Ok((plus, minus))
}

/// U = W𝔻f − 2V𝕄f from Stieltjes values at off-lattice points, recovered as
/// a polynomial of degree 1 with holdouts.
pub fn compute_u(p: &Params, ops: &OpsData, xs: &[Scalar], ctx: &Ctx) -> Result<Poly> {
    let sd = spectral_data(p, &ops.t);
    let (w, v) = (sd.w(), sd.v());
    let mut samples = Vec::with_capacity(xs.len());
    for x in xs {
        let qx = &p.q * x;
        let f_x = ops.stieltjes(x)?;
        let f_qx = ops.stieltjes(&qx)?;
        let u = w.eval(x) * ddo(&f_qx, &f_x, x, &p.q)? - 2 * v.eval(x) * mean_op(&f_qx, &f_x);
        samples.push((x.clone(), u));
    }
    poly_interpolate(&samples, 1, ctx.tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Ctx, Params) {
        let ctx = Ctx::default();
        let p = Params::default_instance(&ctx);
        (ctx, p)
    }

    #[test]
    fn default_instance_derivations() {
        let (ctx, p) = setup();
        let r = |a, b| Scalar::ratio(a, b, ctx.prec);
        assert!(rel_diff(&p.b4, &r(7, 6)) < 1e-70);
        assert!(rel_diff(&p.b5, &r(7, 12)) < 1e-70);
    }

    #[test]
    fn rejects_broken_constraint() {
        let (ctx, p) = setup();
        let spec = ParamSpec {
            q: p.q.clone(),
            t: p.t.clone(),
            b1: p.b1.clone(),
            b2: p.b2.clone(),
            b3: p.b3.clone(),
            b4: Some(Scalar::from_i64(2, ctx.prec)),
            b6: p.b6.clone(),
            n: 1,
        };
        assert!(matches!(Params::new(spec, &ctx), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn rejects_irregular_weight() {
        let (ctx, p) = setup();
        // t/b6 = 1/b1 · q² makes two spectral zeros lattice-related
        let t = &p.b6 * p.q.square() / &p.b1;
        assert!(p.with_t(t).is_err());
        let _ = ctx;
    }

    #[test]
    fn spectral_data_coefficients() {
        let (_, p) = setup();
        let sd = spectral_data(&p, &p.t);
        let lead = -(&p.b1 * &p.b4 * p.b6.square());
        assert!(rel_diff(&sd.w_plus.coeff(3), &lead) < 1e-70);
        assert!(rel_diff(&sd.w_plus.coeff(0), &(&p.b6 * &p.t)) < 1e-70);
        assert_eq!(sd.w().degree(), Some(3));
        assert_eq!(sd.v().degree(), Some(2));
    }

    #[test]
    fn weight_special_points() {
        let (_, p) = setup();
        let zero = Scalar::zero(p.prec());
        assert_eq!(weight_eval(&zero, &p.t, &p).unwrap(), Scalar::one(p.prec()));
        assert!(weight_eval(&p.b2.recip(), &p.t, &p).unwrap().is_zero());
        assert!(matches!(weight_eval(&p.b1.recip(), &p.t, &p), Err(Error::WeightPole(_))));
    }

    #[test]
    fn deformation_roots() {
        let (_, p) = setup();
        let d = deformation_data(&p, &p.t);
        let qt = &p.q * &p.t;
        assert!(d.r_plus.eval(&(&p.b6 * &qt)).abs_f64() < 1e-70);
        assert!(d.r_minus.eval(&(&qt / &p.b6)).abs_f64() < 1e-70);
    }

    #[test]
    fn chi_zero_and_pole() {
        let (_, p) = setup();
        let x = &p.q * &p.b6 * &p.t;
        assert!(chi(&x, &p.t, &p).unwrap().abs_f64() < 1e-70);
        assert!(matches!(chi(&(&p.b6 * &p.t), &p.t, &p), Err(Error::PoleHit(_))));
    }

    #[test]
    fn wv_rs_guard() {
        let (_, p) = setup();
        let x = &p.q * &p.t / &p.b6;
        assert!(matches!(check_wv_rs(&p, &p.t, &x), Err(Error::FactorVanishes(_))));
    }

    #[test]
    fn ratio_residuals_small() {
        let (_, p) = setup();
        let mut s = crate::sampling::Sampler::new(7, p.prec());
        for x in s.points(5, 0.2, 2.0) {
            assert!(sc_ratio_residual(&x, &p.t, &p).unwrap() < 1e-60);
            assert!(dsc_ratio_residual(&x, &p.t, &p).unwrap() < 1e-60);
        }
    }
}
