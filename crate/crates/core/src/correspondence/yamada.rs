//! Yamada's form of the E6(1) Lax pair: the scalar second-order equation
//! for p_n in the gauge U = p_n/F, the mixed t/qt equation, and the
//! change of variables that turns both into Yamada's pair.

use crate::algebra::{rel_diff, Poly, RatFun, Scalar};
use crate::error::{Error, Result};
use crate::laxpair::identities::balance;
use crate::laxpair::SpectralMatrix;
use crate::ops::OpsData;
use crate::qcalculus::{e_qt, qpochhammer_inf};
use crate::weight::{spectral_data, Params};

fn guarded(v: Scalar, p: &Params, what: &'static str) -> Result<Scalar> {
    if v.abs_f64() <= p.tol() * 1e6 {
        Err(Error::DenominatorZero(what))
    } else {
        Ok(v)
    }
}

/// Coefficients of c₊U(qz) + c₀U(z) + c₋U(z/q) = 0.
#[derive(Clone, Debug)]
pub struct ScalarCoefficients {
    pub plus: Scalar,
    pub zero: Scalar,
    pub minus: Scalar,
}

impl ScalarCoefficients {
    pub fn as_array(&self) -> [&Scalar; 3] {
        [&self.plus, &self.zero, &self.minus]
    }

    pub fn max_diff(&self, o: &ScalarCoefficients) -> f64 {
        self.as_array().iter().zip(o.as_array()).map(|(a, b)| rel_diff(a, b)).fold(0.0, f64::max)
    }

    /// Residual of the equation applied to U(qz), U(z), U(z/q).
    pub fn apply(&self, u_up: &Scalar, u: &Scalar, u_down: &Scalar) -> f64 {
        balance(&[&self.plus * u_up, &self.zero * u, &self.minus * u_down])
    }
}

/// The coefficients written directly in (f, g):
/// c₊ = ∏(1 − b_jz)/(t²z(z − g)),
/// c₋ = (z − b₆qt)(b₆z − qt)/(b₆z(z − qg)),
/// and c₀ collecting the four remaining terms.
pub fn direct_coefficients(z: &Scalar, f: &Scalar, g: &Scalar, p: &Params, t: &Scalar) -> Result<ScalarCoefficients> {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let qt = q * t;
    let z_g = guarded(z * (z - g), p, "z = 0 or z = g")?;
    let z_qg = guarded(z * (z - q * g), p, "z = qg")?;
    let one_fz = guarded(1 - f * z, p, "fz = 1")?;
    let f_fg = guarded(f * (1 - f * g), p, "f = 0 or fg = 1")?;
    let pz = p.prod_b(|b| 1 - b * z);
    let t2 = t.square();
    let upper = (z - b6 * &qt) * (b6 * z - &qt);
    let plus = &pz / (&t2 * &z_g);
    let zero = -(&pz / (&z_g * &one_fz)) + z * p.prod_b(|b| b - f) / (&f_fg * &one_fz)
        - z * (f - b5 * &qt) * (b5 * f - t) / (b5 * &qt * t * f)
        - &upper * (q - f * z) / (b6 * q * &t2 * &z_qg);
    let minus = upper / (b6 * z_qg);
    Ok(ScalarCoefficients { plus, zero, minus })
}

/// The three coefficients as rational functions of z.
#[derive(Clone, Debug)]
pub struct YamadaCoefficients {
    pub c_plus: RatFun,
    pub c_zero: RatFun,
    pub c_minus: RatFun,
}

impl YamadaCoefficients {
    pub fn at(&self, z: &Scalar, tol: f64) -> Result<ScalarCoefficients> {
        Ok(ScalarCoefficients {
            plus: self.c_plus.eval(z, tol)?,
            zero: self.c_zero.eval(z, tol)?,
            minus: self.c_minus.eval(z, tol)?,
        })
    }
}

/// [`direct_coefficients`] assembled as rational functions.
pub fn direct_ratfuns(f: &Scalar, g: &Scalar, p: &Params, t: &Scalar) -> Result<YamadaCoefficients> {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let prec = p.prec();
    let one = Scalar::one(prec);
    let zero = Scalar::zero(prec);
    let qt = q * t;
    let t2 = t.square();
    let pz = [&p.b1, &p.b2, &p.b3, &p.b4]
        .iter()
        .fold(Poly::constant(one.clone()), |acc, b| &acc * &Poly::linear(one.clone(), -*b));
    let z_g = Poly::from_roots(&one, &[zero.clone(), g.clone()]);
    let z_qg = Poly::from_roots(&one, &[zero.clone(), q * g]);
    let one_fz = Poly::linear(one.clone(), -f);
    let upper = &Poly::linear(-(b6 * &qt), one.clone()) * &Poly::linear(-&qt, b6.clone());
    let f_fg = guarded(f * (1 - f * g), p, "f = 0 or fg = 1")?;
    let c_plus = RatFun::new(pz.clone(), z_g.scale(&t2))?;
    let c_minus = RatFun::new(upper.clone(), z_qg.scale(b6))?;
    let t1 = RatFun::new(-&pz, &z_g * &one_fz)?;
    let t2_term = RatFun::new(Poly::linear(zero.clone(), p.prod_b(|b| b - f)), one_fz.scale(&f_fg))?;
    let t3 = RatFun::from_poly(Poly::linear(zero, -((f - b5 * &qt) * (b5 * f - t) / (b5 * &qt * t * f))));
    let t4 = RatFun::new(-&(&upper * &Poly::linear(q.clone(), -f)), z_qg.scale(&(b6 * q * &t2)))?;
    Ok(YamadaCoefficients { c_plus, c_zero: t1.add(&t2_term).add(&t3).add(&t4), c_minus })
}

/// F(x, t)/F(qx, t) ratio data: F(qx)/F(x) = (1 − b₂x)(1 − b₃x)/(t(t − b₆x)).
fn gauge_up(x: &Scalar, p: &Params, t: &Scalar) -> Scalar {
    (1 - &p.b2 * x) * (1 - &p.b3 * x) / (t * (t - &p.b6 * x))
}

/// The same coefficients read off A*_n. With s = [x²]𝔗₊/(b₆t):
/// c₊ = s·w₊(x)/𝔗₊(x)·F(qx)/F(x), c₀ = −s(𝔚₊(x)/𝔗₊(x) + 𝔚₋(x/q)/𝔗₊(x/q)),
/// c₋ = s·w₋(x/q)/𝔗₊(x/q)·F(x/q)/F(x).
pub fn lax_coefficients(x: &Scalar, a: &SpectralMatrix, p: &Params, t: &Scalar) -> Result<ScalarCoefficients> {
    let q = &p.q;
    let sd = spectral_data(p, t);
    let xd = x / q;
    let s = a.t_plus.coeff(2) / (&p.b6 * t);
    let tp = guarded(a.t_plus.eval(x), p, "T+ vanishes")?;
    let tp_d = guarded(a.t_plus.eval(&xd), p, "T+ vanishes")?;
    let down = guarded(gauge_up(&xd, p, t), p, "gauge ratio vanishes")?.recip();
    Ok(ScalarCoefficients {
        plus: &s * sd.w_plus.eval(x) / &tp * gauge_up(x, p, t),
        zero: -(&s * (a.w_plus.eval(x) / &tp + a.w_minus.eval(&xd) / &tp_d)),
        minus: &s * sd.w_minus.eval(&xd) / &tp_d * down,
    })
}

/// F(x, t) = e_{q,t²}(x)(b₆x/t; q)_∞/((b₂x; q)_∞(b₃x; q)_∞).
pub fn gauge_f(x: &Scalar, t: &Scalar, p: &Params) -> Result<Scalar> {
    let q = &p.q;
    let e = e_qt(x, &t.square(), q, p.tol())?;
    let num = qpochhammer_inf(&(&p.b6 * x / t), q)?.value;
    let den = qpochhammer_inf(&(&p.b2 * x), q)?.value * qpochhammer_inf(&(&p.b3 * x), q)?.value;
    Ok(e * num / guarded(den, p, "F pole")?)
}

/// Residuals of F(qx)/F(x) and F(x/q)/F(x) against their rational forms.
pub fn gauge_ratio_residuals(x: &Scalar, t: &Scalar, p: &Params) -> Result<[f64; 2]> {
    let q = &p.q;
    let fx = gauge_f(x, t, p)?;
    let up = gauge_f(&(q * x), t, p)? / &fx;
    let down = gauge_f(&(x / q), t, p)? / &fx;
    let xd = x / q;
    let down_target = t * (t - &p.b6 * &xd) / ((1 - &p.b2 * &xd) * (1 - &p.b3 * &xd));
    Ok([rel_diff(&up, &gauge_up(x, p, t)), rel_diff(&down, &down_target)])
}

/// Ĉ/C = b₆qt/(g(f − b₅qt)ρ) with ρ = γ̂_n/γ_n: the ratio of gauge
/// normalisations between t and qt.
pub fn normalisation_ratio(f: &Scalar, g: &Scalar, rho: &Scalar, p: &Params, t: &Scalar) -> Result<Scalar> {
    let qt = &p.q * t;
    let den = guarded(g * (f - &p.b5 * &qt) * rho, p, "g(f - b5 qt) = 0")?;
    Ok(&p.b6 * &qt / den)
}

/// Residual of F(qx, qt)Ĉ/(F(qx, t)C) = b₆(b₆x − t)/(qg(b₅qt − f)x²ρ).
pub fn gauge_time_residual(x: &Scalar, f: &Scalar, g: &Scalar, rho: &Scalar, p: &Params, t: &Scalar) -> Result<f64> {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let qt = q * t;
    let qx = q * x;
    let lhs = gauge_f(&qx, &qt, p)? / gauge_f(&qx, t, p)? * normalisation_ratio(f, g, rho, p, t)?;
    let rhs = b6 * (b6 * x - t) / (q * g * (b5 * &qt - f) * x.square() * rho);
    Ok(rel_diff(&lhs, &rhs))
}

/// Orthogonal polynomial data at t and qt for one index, with the B*_n scale c.
pub struct PolyPair<'a> {
    pub now: &'a OpsData,
    pub next: &'a OpsData,
    pub n: usize,
    pub scale: Scalar,
}

impl PolyPair<'_> {
    fn p(&self, x: &Scalar) -> Result<Scalar> {
        self.now.eval_p(self.n, x)
    }

    fn p_hat(&self, x: &Scalar) -> Result<Scalar> {
        Ok(self.next.eval_p(self.n, x)? / &self.scale)
    }

    /// U(x) = p_n(x; t)/F(x, t).
    pub fn u(&self, x: &Scalar, p: &Params) -> Result<Scalar> {
        Ok(self.p(x)? / gauge_f(x, &self.now.t, p)?)
    }

    /// Û(x) = p_n(x; qt)/(c F(x, qt) Ĉ/C).
    pub fn u_hat(&self, x: &Scalar, norm: &Scalar, p: &Params) -> Result<Scalar> {
        Ok(self.p_hat(x)? / (gauge_f(x, &self.next.t, p)? * norm))
    }
}

/// Residual of the scalar equation c₊U(qz) + c₀U(z) + c₋U(z/q) = 0.
pub fn scalar_equation_residual(c: &ScalarCoefficients, z: &Scalar, polys: &PolyPair, p: &Params) -> Result<f64> {
    let q = &p.q;
    Ok(c.apply(&polys.u(&(q * z), p)?, &polys.u(z, p)?, &polys.u(&(z / q), p)?))
}

/// Residual of the mixed equation
/// −𝔗₊(x)p̂(qx)/w₋(x) + [𝔗₊(x)𝕽₊(qx) + 𝔓₊𝔚₋(x)]p(qx)/(w₋(x)r₊(qx)) − 𝔓₊p(x)/r₊(qx) = 0,
/// where r₊(x) = (b₆qt − x)/b₆ and p̂ carries the B*_n scale.
pub fn mixed_residual(x: &Scalar, a: &SpectralMatrix, r_plus: &Poly, p_plus: &Scalar, polys: &PolyPair, p: &Params, t: &Scalar) -> Result<f64> {
    let (q, b6) = (&p.q, &p.b6);
    let qx = q * x;
    let wm = guarded(spectral_data(p, t).w_minus.eval(x), p, "w- vanishes")?;
    let rps = guarded((b6 * q * t - &qx) / b6, p, "r+ vanishes")?;
    let tp = a.t_plus.eval(x);
    let mid = (&tp * r_plus.eval(&qx) + p_plus * a.w_minus.eval(x)) / (&wm * &rps);
    Ok(balance(&[
        -(&tp / &wm * polys.p_hat(&qx)?),
        mid * polys.p(&qx)?,
        -(p_plus / &rps * polys.p(x)?),
    ]))
}

/// The factored forms of the three mixed-equation coefficients, with ρ = γ̂_n/γ_n:
/// −r₊(qx)𝔗₊(x) = a_n(1 − qb₅²)x(x − b₆t)(x − g)/b₅,
/// −w₋(x)𝔓₊ = a_nb₆(1 − qb₅²)t(1 − b₂x)(1 − b₃x)(x − b₆t)/(ρb₅(b₅qt − f)),
/// 𝔗₊(x)𝕽₊(qx) + 𝔓₊𝔚₋(x) = a_nb₆(1 − qb₅²)(x − b₆t)(b₆x − t)(1 − fx)/(ρb₅(b₅qt − f)).
#[allow(clippy::too_many_arguments)]
pub fn mixed_coefficient_residuals(
    x: &Scalar,
    a: &SpectralMatrix,
    r_plus: &Poly,
    p_plus: &Scalar,
    f: &Scalar,
    g: &Scalar,
    a_n: &Scalar,
    rho: &Scalar,
    p: &Params,
    t: &Scalar,
) -> [f64; 3] {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let qt = q * t;
    let qx = q * x;
    let k = a_n * (1 - q * b5.square()) / b5;
    let kr = &k * b6 / (rho * (b5 * &qt - f));
    let tp = a.t_plus.eval(x);
    let rps = (b6 * &qt - &qx) / b6;
    let xb = x - b6 * t;
    let d1 = rel_diff(&(-(&rps * &tp)), &(&k * x * &xb * (x - g)));
    let wm = spectral_data(p, t).w_minus.eval(x);
    let d2 = rel_diff(&(-(wm * p_plus)), &(&kr * t * (1 - &p.b2 * x) * (1 - &p.b3 * x) * &xb));
    let lhs = &tp * r_plus.eval(&qx) + p_plus * a.w_minus.eval(x);
    let d3 = rel_diff(&lhs, &(&kr * &xb * (b6 * x - t) * (1 - f * x)));
    [d1, d2, d3]
}

/// Residual of t²U(x) − (1 − fx)U(qx) − (x − g)Û(qx)/(qgx) = 0.
pub fn u_form_residual(x: &Scalar, f: &Scalar, g: &Scalar, norm: &Scalar, polys: &PolyPair, p: &Params, t: &Scalar) -> Result<f64> {
    let q = &p.q;
    let qx = q * x;
    let coeff = (x - g) / guarded(q * g * x, p, "g x = 0")?;
    Ok(balance(&[
        t.square() * polys.u(x, p)?,
        -((1 - f * x) * polys.u(&qx, p)?),
        -(coeff * polys.u_hat(&qx, norm, p)?),
    ]))
}

/// Yamada's variables: τ = 1/t, f_Y = 1/g, g_Y = 1/f and parameters
/// (b₁, …, b₄, 1/b₆, b₆, qb₅, 1/b₅).
#[derive(Clone, Debug)]
pub struct YamadaVariables {
    pub tau: Scalar,
    pub f: Scalar,
    pub g: Scalar,
    pub b: [Scalar; 8],
}

pub fn yamada_variables(f: &Scalar, g: &Scalar, p: &Params, t: &Scalar) -> Result<YamadaVariables> {
    let f = guarded(f.clone(), p, "f = 0")?;
    let g = guarded(g.clone(), p, "g = 0")?;
    let b6 = &p.b6;
    Ok(YamadaVariables {
        tau: t.recip(),
        f: g.recip(),
        g: f.recip(),
        b: [
            p.b1.clone(),
            p.b2.clone(),
            p.b3.clone(),
            p.b4.clone(),
            b6.recip(),
            b6.clone(),
            &p.q * &p.b5,
            p.b5.recip(),
        ],
    })
}

impl YamadaVariables {
    fn prod4(&self, h: impl Fn(&Scalar) -> Scalar) -> Scalar {
        self.b[..4].iter().fold(Scalar::one(self.tau.prec()), |acc, b| acc * h(b))
    }

    /// Residuals of Yamada's two evolution equations given f̄_Y = 1/ĝ and g̲_Y = 1/f̌.
    pub fn evolution_residuals(&self, f_bar: &Scalar, g_under: &Scalar, q: &Scalar) -> [f64; 2] {
        let (fy, gy, tau, b) = (&self.f, &self.g, &self.tau, &self.b);
        let lhs_a = (fy * gy - 1) * (f_bar * gy - 1) / (fy * f_bar);
        let rhs_a = q * self.prod4(|bj| bj * gy - 1) / (&b[4] * &b[5] * (&b[6] * gy - tau) * (&b[7] * gy - tau));
        let lhs_b = (fy * g_under - 1) * (fy * gy - 1) / (gy * g_under);
        let rhs_b = self.prod4(|bj| bj - fy) / ((fy - &b[4] * tau) * (fy - &b[5] * tau));
        [balance(&[lhs_a, -rhs_a]), balance(&[lhs_b, -rhs_b])]
    }

    /// Coefficients of Yamada's first Lax equation at z_Y, ordered to match
    /// (c₊, c₀, c₋) under z_Y = q/z.
    pub fn first_equation(&self, zy: &Scalar, q: &Scalar) -> ScalarCoefficients {
        let (fy, gy, tau, b) = (&self.f, &self.g, &self.tau, &self.b);
        let tau2 = tau.square();
        let a = self.prod4(|bj| bj * q - zy) * &tau2 / (q * (q * fy - zy) * zy.powi(4));
        let c = (&b[4] * tau - zy) * (&b[5] * tau - zy) / (&tau2 * zy.square() * (fy - zy));
        let gz = gy * zy;
        let m = -(&a * &gz / (&tau2 * (&gz - q))) + q * self.prod4(|bj| bj * gy - 1) / (gy * (fy * gy - 1) * zy.square() * (&gz - q))
            - &b[4] * &b[5] * (&b[6] * gy - tau) * (&b[7] * gy - tau) / (fy * gy * zy.powi(3))
            - &c * &tau2 * (&gz - 1) / &gz;
        ScalarCoefficients { plus: a, zero: m, minus: c }
    }

    /// Coefficients of Yamada's second Lax equation on (y(z_Y), y(z_Y/q), ȳ(z_Y/q)).
    pub fn second_equation(&self, zy: &Scalar, q: &Scalar) -> [Scalar; 3] {
        let gz = &self.g * zy;
        [
            &gz / self.tau.square(),
            q - &gz,
            -(&gz * (q * &self.f - zy) / q.square()),
        ]
    }
}

/// Spread of the ratios (Yamada coefficient)/(z²·ours) across the three
/// coefficients and all sample points: the two first equations agree up to
/// a factor z² times a constant.
pub fn first_equation_spread(ys: &[(Scalar, ScalarCoefficients, ScalarCoefficients)]) -> f64 {
    let mut ratios = Vec::new();
    for (z, yam, ours) in ys {
        for (a, b) in yam.as_array().iter().zip(ours.as_array()) {
            ratios.push(*a / (b * z.square()));
        }
    }
    let first = ratios[0].clone();
    ratios.iter().map(|r| rel_diff(r, &first)).fold(0.0, f64::max)
}

/// Residual of Yamada's second equation against q/(fz) times the U form,
/// coefficientwise, at z_Y = q/z with y(y) = U(qy), ȳ(y) = Û(qy).
pub fn second_equation_residual(v: &YamadaVariables, z: &Scalar, f: &Scalar, g: &Scalar, p: &Params, t: &Scalar) -> f64 {
    let q = &p.q;
    let yam = v.second_equation(&(q / z), q);
    let k = q / (f * z);
    let ours = [&k * t.square(), -(&k * (1 - f * z)), -(&k * (z - g) / (q * g * z))];
    yam.iter().zip(&ours).map(|(a, b)| rel_diff(a, b)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctx::Ctx;
    use crate::laxpair::Family;
    use crate::painleve::{advance_g, retreat_f, PainleveState};
    use rand::{Rng, SeedableRng};

    fn family() -> Family {
        let ctx = Ctx::default();
        Family::new(Params::default_instance(&ctx), ctx)
    }

    fn points(prec: u32) -> Vec<Scalar> {
        [(0.3, 0.7), (-1.2, 0.4), (2.0, 1.0)].iter().map(|&(a, b)| Scalar::from_parts_f64(a, b, prec)).collect()
    }

    const TOL: f64 = 1e-50;

    #[test]
    fn scalar_equation_two_ways() {
        let fam = family();
        for n in 1..=2 {
            let p = fam.params(n, 0).unwrap();
            let fg = fam.fg(n, 0).unwrap();
            let a = fam.extraction(n, 0).unwrap().astar;
            let (now, next) = (fam.ops(0).unwrap(), fam.ops(1).unwrap());
            let polys = PolyPair { now: &now, next: &next, n, scale: fam.bstar(n, 0).unwrap().scale };
            for z in points(p.prec()) {
                let d = direct_coefficients(&z, &fg.f, &fg.g, &p, &p.t).unwrap();
                let l = lax_coefficients(&z, &a, &p, &p.t).unwrap();
                assert!(d.max_diff(&l) < TOL, "n={n}");
                let r = scalar_equation_residual(&d, &z, &polys, &p).unwrap();
                assert!(r < TOL, "n={n} {r:e}");
            }
            let u1a = (&p.q - 1) * p.u1() * &fam.ops(0).unwrap().a[n];
            assert!(rel_diff(&a.t_plus.coeff(2), &u1a) < TOL);
        }
    }

    #[test]
    fn rational_coefficients() {
        let fam = family();
        let p = fam.params(1, 0).unwrap();
        let fg = fam.fg(1, 0).unwrap();
        let c = direct_ratfuns(&fg.f, &fg.g, &p, &p.t).unwrap();
        for z in points(p.prec()) {
            let d = direct_coefficients(&z, &fg.f, &fg.g, &p, &p.t).unwrap();
            assert!(c.at(&z, 1e-60).unwrap().max_diff(&d) < TOL);
        }
        assert!(c.c_plus.eval(&p.b1.recip(), 1e-60).unwrap().abs_f64() < TOL);
        let b6qt = &p.b6 * &p.q * &p.t;
        assert!(c.c_minus.eval(&b6qt, 1e-60).unwrap().abs_f64() < TOL);
    }

    #[test]
    fn mixed_equation_and_displays() {
        let fam = family();
        let n = 1;
        let p = fam.params(n, 0).unwrap();
        let fg = fam.fg(n, 0).unwrap();
        let a = fam.extraction(n, 0).unwrap().astar;
        let b = fam.bstar(n, 0).unwrap();
        let (now, next) = (fam.ops(0).unwrap(), fam.ops(1).unwrap());
        let rho = fam.gamma_ratio(n, 0).unwrap();
        let a_n = now.a[n].clone();
        let polys = PolyPair { now: &now, next: &next, n, scale: b.scale.clone() };
        let norm = normalisation_ratio(&fg.f, &fg.g, &rho, &p, &p.t).unwrap();
        for x in points(p.prec()) {
            let r = mixed_residual(&x, &a, &b.matrix.r_plus, &b.matrix.p_plus, &polys, &p, &p.t).unwrap();
            assert!(r < TOL, "{r:e}");
            let d = mixed_coefficient_residuals(&x, &a, &b.matrix.r_plus, &b.matrix.p_plus, &fg.f, &fg.g, &a_n, &rho, &p, &p.t);
            assert!(d.iter().all(|v| *v < TOL), "{d:?}");
            let r = u_form_residual(&x, &fg.f, &fg.g, &norm, &polys, &p, &p.t).unwrap();
            assert!(r < TOL, "{r:e}");
            assert!(second_equation_residual(&yamada_variables(&fg.f, &fg.g, &p, &p.t).unwrap(), &x, &fg.f, &fg.g, &p, &p.t) < TOL);
        }
        // A wrong sign on the scale breaks the mixed equation.
        let flipped = PolyPair { now: &now, next: &next, n, scale: -&b.scale };
        let x = &points(p.prec())[0];
        assert!(mixed_residual(x, &a, &b.matrix.r_plus, &b.matrix.p_plus, &flipped, &p, &p.t).unwrap() > 1e-10);
    }

    #[test]
    fn gauge_ratios() {
        let fam = family();
        let p = fam.params(1, 0).unwrap();
        let fg = fam.fg(1, 0).unwrap();
        let rho = fam.gamma_ratio(1, 0).unwrap();
        for x in points(p.prec()) {
            let r = gauge_ratio_residuals(&x, &p.t, &p).unwrap();
            assert!(r[0] < TOL && r[1] < TOL, "{r:?}");
            assert!(gauge_time_residual(&x, &fg.f, &fg.g, &rho, &p, &p.t).unwrap() < TOL);
        }
    }

    #[test]
    fn normalisation_chain_stays_finite() {
        let fam = family();
        let p = fam.params(1, 0).unwrap();
        let mut acc = Scalar::one(p.prec());
        for k in 0..3 {
            let pk = fam.params(1, k).unwrap();
            let fg = fam.fg(1, k).unwrap();
            let rho = fam.gamma_ratio(1, k).unwrap();
            acc = acc * normalisation_ratio(&fg.f, &fg.g, &rho, &pk, &pk.t).unwrap();
            assert!(acc.is_finite() && acc.abs_f64() > 1e-30);
        }
    }

    #[test]
    fn first_equations_are_proportional() {
        let fam = family();
        let p = fam.params(1, 0).unwrap();
        let fg = fam.fg(1, 0).unwrap();
        let v = yamada_variables(&fg.f, &fg.g, &p, &p.t).unwrap();
        let rows: Vec<_> = points(p.prec())
            .into_iter()
            .map(|z| {
                let yam = v.first_equation(&(&p.q / &z), &p.q);
                let ours = direct_coefficients(&z, &fg.f, &fg.g, &p, &p.t).unwrap();
                (z, yam, ours)
            })
            .collect();
        assert!(first_equation_spread(&rows) < TOL);
    }

    #[test]
    fn evolution_pulls_back_at_random_states() {
        let ctx = Ctx::default();
        let p = Params::default_instance(&ctx);
        let prec = p.prec();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 10 {
            let f = Scalar::from_parts_f64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), prec);
            let g = Scalar::from_parts_f64(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), prec);
            let s = PainleveState::new(f.clone(), g.clone(), p.t.clone());
            let (Ok(g_hat), Ok(f_check)) = (advance_g(&s, &p), retreat_f(&s, &p)) else { continue };
            let v = yamada_variables(&f, &g, &p, &p.t).unwrap();
            let r = v.evolution_residuals(&g_hat.recip(), &f_check.recip(), &p.q);
            assert!(r[0] < TOL && r[1] < TOL, "{r:?}");
            checked += 1;
        }
    }
}
