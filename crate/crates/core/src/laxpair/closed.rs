//! Closed-form Lax matrices in terms of the Painlevé variables (f, g).

use crate::algebra::{poly_interpolate, Poly, Scalar};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::sampling::interpolation_nodes;
use crate::weight::Params;

use super::deform::DeformMatrix;
use super::spectral::SpectralMatrix;

/// Both partial-fraction forms of the diagonal entries alongside the
/// assembled matrix (which uses the first form).
#[derive(Clone, Debug)]
pub struct ClosedSpectral {
    pub matrix: SpectralMatrix,
    pub w_plus_alt: Poly,
    pub w_minus_alt: Poly,
}

struct Vars<'a> {
    p: &'a Params,
    f: &'a Scalar,
    g: &'a Scalar,
    t: &'a Scalar,
}

impl Vars<'_> {
    fn one_minus_b5sq(&self) -> Scalar {
        1 - self.p.b5.square()
    }

    fn b6_sum(&self) -> Scalar {
        (1 + self.p.b6.square()) / &self.p.b6
    }

    /// 𝔚₊, form with ∏(1 − gb_j).
    fn w_plus_1(&self, x: &Scalar) -> Scalar {
        let Vars { p, f, g, t } = *self;
        let (b5, b6) = (&p.b5, &p.b6);
        let b5sq = b5.square();
        let d = self.one_minus_b5sq();
        let pg = p.prod_b(|b| 1 - g * b);
        let r = -(x * b5 * b6)
            + b6 / &d * (-(&b5sq / t) + b5 * p.sum_inv_b())
            - b6 * (b5 * f - t) / (&d * t) * (g * (t - f * b5) / f + t * b5 * self.b6_sum())
            + b6 * t / &d
                * (&b5sq / g.square() - &d / (x * g) - p.sum_b() * &b5sq / g + &b5sq * f / g - g / f
                    + pg * (g - x * &b5sq) / ((1 - f * g) * g.square() * (x - g)));
        r * x * (x - g)
    }

    /// 𝔚₊, form with ∏(f − b_j).
    fn w_plus_2(&self, x: &Scalar) -> Scalar {
        let Vars { p, f, g, t } = *self;
        let (b5, b6) = (&p.b5, &p.b6);
        let b5sq = b5.square();
        let d = self.one_minus_b5sq();
        let pf = p.prod_b(|b| f - b);
        let px = p.prod_b(|b| 1 - x * b);
        let tail = &b5sq * t * self.b6_sum() + b5 * g / f * (t - b5 * f) + b5 / f.square() * (t + b5 * f - t * f * p.sum_inv_b());
        let r = -(b6 * t / &d * pf * (1 - &b5sq * f * x) / (f.square() * (1 - f * g) * (1 - f * x)))
            + b6 * t * px / (x * (1 - x * f) * (x - g))
            - b6 * (b5 * f - t) / f * x
            - b6 * (b5 * f - t) / (b5 * &d * t) * tail;
        r * x * (x - g)
    }

    /// 𝔚₋, form with ∏(t − b_jb₅).
    fn w_minus_1(&self, x: &Scalar) -> Scalar {
        let Vars { p, f, g, t } = *self;
        let (b5, b6) = (&p.b5, &p.b6);
        let b5sq = b5.square();
        let d = self.one_minus_b5sq();
        let pg = p.prod_b(|b| 1 - g * b);
        let ptb = p.prod_b(|b| t - b * b5);
        let tg = t * g - b5;
        let r = (1 - x * f) * (x - b6 * t) * (x * b6 - t) / (x * (x - g)) - b6 / &d * ptb / (b5 * &tg)
            + b6 * (b5 * f - t) / (b5 * &d)
                * (&d * x - t.square() / g - g * &b5sq + &b5sq * self.b6_sum() * t
                    - b5 * t.square() * pg / (g * (1 - f * g) * &tg));
        r * x * (x - g) / t
    }

    /// 𝔚₋, form with ∏(f − b_j).
    fn w_minus_2(&self, x: &Scalar) -> Scalar {
        let Vars { p, f, g, t } = *self;
        let (b5, b6) = (&p.b5, &p.b6);
        let b5sq = b5.square();
        let d = self.one_minus_b5sq();
        let pf = p.prod_b(|b| f - b);
        let r = (1 - x * f) * (x - b6 * t) * (b6 * x - t) / (x * (x - g))
            + b6 * t.square() / &d * pf / (f.square() * (1 - f * g))
            + b6 * (b5 * f - t) / (b5 * &d)
                * (&d * x + &b5sq * self.b6_sum() * t + b5 * g / f * (t - b5 * f)
                    + b5 / f.square() * (t + b5 * f - t * f * p.sum_inv_b()));
        r * x * (x - g) / t
    }
}

fn check_excluded(p: &Params, f: &Scalar, g: &Scalar, t: &Scalar) -> Result<()> {
    let tol = p.tol() * 1e6;
    let b6 = &p.b6;
    let checks: [(Scalar, &'static str); 7] = [
        (g.clone(), "g = 0"),
        (f.clone(), "f = 0"),
        (f * g - 1, "fg = 1"),
        (g - b6 * t, "g = b6 t"),
        (b6 * g - t, "g = t/b6"),
        (t * g - &p.b5, "tg = b5"),
        (&p.b5 * f - t, "f b5 = t"),
    ];
    for (v, name) in checks {
        if v.abs_f64() <= tol {
            return Err(Error::ExcludedValue(name));
        }
    }
    if (1 - p.b5.square()).abs_f64() <= tol {
        return Err(Error::ExcludedValue("b5^2 = 1"));
    }
    Ok(())
}

fn interpolate_fn(nodes: &[Scalar], deg: usize, tol: f64, f: impl Fn(&Scalar) -> Scalar) -> Result<Poly> {
    let samples: Vec<_> = nodes.iter().map(|x| (x.clone(), f(x))).collect();
    poly_interpolate(&samples, deg, tol)
}

/// A*_n from (f, g) at time t. `g_prev` is g_{n−1}(t), needed for 𝔗₋; pass
/// `None` for n = 0, where 𝔗₋ = 0.
pub fn astar_closed_form(
    f: &Scalar,
    g: &Scalar,
    g_prev: Option<&Scalar>,
    t: &Scalar,
    a_n: &Scalar,
    p: &Params,
    ctx: &Ctx,
) -> Result<ClosedSpectral> {
    check_excluded(p, f, g, t)?;
    let v = Vars { p, f, g, t };
    let nodes = interpolation_nodes(6, ctx.prec);
    let w_plus = interpolate_fn(&nodes, 3, ctx.tol, |x| v.w_plus_1(x))?;
    let w_plus_alt = interpolate_fn(&nodes, 3, ctx.tol, |x| v.w_plus_2(x))?;
    let w_minus = interpolate_fn(&nodes, 3, ctx.tol, |x| v.w_minus_1(x))?;
    let w_minus_alt = interpolate_fn(&nodes, 3, ctx.tol, |x| v.w_minus_2(x))?;
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let b5sq = b5.square();
    let c_plus = b6 / b5 * (q.recip() - &b5sq) * a_n;
    let t_plus = Poly::from_roots(&c_plus, &[Scalar::zero(ctx.prec), g.clone()]);
    let t_minus = match g_prev {
        Some(gp) => {
            let c_minus = b6 / b5 * (1 - &b5sq / q) * a_n;
            Poly::from_roots(&c_minus, &[Scalar::zero(ctx.prec), gp.clone()])
        }
        None => Poly::zero(ctx.prec),
    };
    Ok(ClosedSpectral {
        matrix: SpectralMatrix { w_plus, w_minus, t_plus, t_minus },
        w_plus_alt,
        w_minus_alt,
    })
}

/// γ̂_n/γ_n and γ̂_{n−1}/γ_{n−1}, the only normalisation data B* needs.
#[derive(Clone, Debug)]
pub struct GammaRatios {
    pub current: Scalar,
    pub previous: Scalar,
}

/// B*_n from (f, g), a_n and the γ ratios (n ≥ 1).
pub fn bstar_closed_form(f: &Scalar, g: &Scalar, t: &Scalar, a_n: &Scalar, rho: &GammaRatios, p: &Params) -> Result<DeformMatrix> {
    check_excluded(p, f, g, t)?;
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let b5sq = b5.square();
    let d = 1 - &b5sq;
    let pg = p.prod_b(|b| 1 - b * g);
    let ptb = p.prod_b(|b| t - b * b5);
    let tg = t * g - b5;
    let common = q * t.square() * b5 * pg / (g * (f * g - 1) * &tg) - q * ptb / (&tg * (f * b5 - t));
    let quad = |mid: Scalar| q * (t.square() * b6 + g.square() * &b5sq * b6 - t * g * mid) / (g * b6);
    let br_plus = -quad(&b5sq * (1 + b6.square())) + &common;
    let br_minus = quad(1 + b6.square()) - &common;
    let r1p = &rho.current / b6;
    let r1m = b6 / &rho.previous;
    let r_plus = Poly::linear(&r1p * br_plus / &d, r1p);
    let r_minus = Poly::linear(&r1m * br_minus / &d, r1m);
    let off = |r: &Scalar| a_n * (r / b6 - b6 / r);
    Ok(DeformMatrix {
        r_plus,
        r_minus,
        p_plus: off(&rho.current),
        p_minus: off(&rho.previous),
    })
}

/// r₀,₊/r₁,₊ and r₀,₋/r₁,₋ in the form that involves ĝ = g(qt).
pub fn r0_ratios_with_ghat(f: &Scalar, g: &Scalar, g_hat: &Scalar, t: &Scalar, p: &Params) -> (Scalar, Scalar) {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let b5sq = b5.square();
    let d = 1 - &b5sq;
    let qt = q * t;
    let b6s = (1 + b6.square()) / b6;
    let plus = q * b5 * (t / f - b5) * g + (b5 * &qt / f - 1) * g_hat + (1 + q * &b5sq - b5 * p.sum_inv_b() * &qt) / f
        + &b6s * &b5sq * &qt;
    let minus = q * b5 * (b5 - t / f) * g + (1 - b5 * &qt / f) * g_hat + (b5 * p.sum_inv_b() * &qt - q * &b5sq - 1) / f
        - b6s * &qt;
    (plus / &d, minus / d)
}

/// 2W_n − W rebuilt from (λ, ν).
pub fn wparam(lambda: &Scalar, nu: &Scalar, p: &Params, t: &Scalar) -> Poly {
    let prec = p.prec();
    let (b5, b6) = (&p.b5, &p.b6);
    let x = Poly::x(prec);
    let s = 1 + p.sum_b() * b6 * t + b6.square();
    let lam2 = lambda.square();
    let bracket = Poly::new(
        vec![
            -(2 * t * b6 / lambda),
            s / lambda - 2 * t * b6 / &lam2,
            -(b6 * (b5 + b5.recip())),
        ],
        prec,
    );
    let lin = Poly::linear(-lambda, Scalar::one(prec)).scale(&Scalar::ratio(1, 2, prec));
    &(&x * &x).scale(&(nu / &lam2)) + &(&lin * &bracket)
}

/// Ω_n + V rebuilt from (λ, ν, μ).
pub fn oparam(lambda: &Scalar, nu: &Scalar, mu: &Scalar, p: &Params, t: &Scalar) -> Poly {
    let prec = p.prec();
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let b5sq = b5.square();
    let d = 1 - &b5sq;
    let lam2 = lambda.square();
    let s = 1 + p.sum_b() * b6 * t + b6.square();
    let constant = -(2 * &b5sq * (p.sum_inv_b() + (b6 + b6.recip()) * t - 2 * lambda) * &lam2)
        + b5 / b6 * (1 + &b5sq) * (s * lambda + 2 * nu - 2 * t * b6);
    let brace = Poly::linear(constant, -(d.square() * &lam2));
    let pre = b6 / (2 * b5 * (1 - q) * &d * &lam2);
    let lin = Poly::linear(-lambda, Scalar::one(prec));
    &Poly::constant(mu.clone()) + &(&lin * &brace).scale(&pre)
}

/// Θ_n = u₁(x − λ).
pub fn tparam(lambda: &Scalar, p: &Params) -> Poly {
    Poly::linear(-(p.u1() * lambda), p.u1())
}

/// Coefficients of 2W_n − W = Σ w_k x^k, Ω_n + V = Σ v_k x^k and the slope
/// u₁ of Θ_n, in terms of (λ, ν, μ).
#[derive(Clone, Debug)]
pub struct SpectralCoefficients {
    pub w: [Scalar; 4],
    pub v: [Scalar; 3],
    pub u1: Scalar,
}

pub fn spectral_coefficients(lambda: &Scalar, nu: &Scalar, mu: &Scalar, p: &Params, t: &Scalar) -> SpectralCoefficients {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let b5sq = b5.square();
    let s = 1 + t * p.sum_b() * b6 + b6.square();
    let w3 = -(b6 * (1 + &b5sq) / (2 * b5));
    let w0 = b6 * t;
    let w1 = -(&s / 2);
    let w2 = &s / (2 * lambda) + b6 * (b5 + b5.recip()) * lambda / 2 + (nu - b6 * t) / lambda.square();
    let den = (1 - q) * (1 - &b5sq);
    let v2 = -(b6 * (1 - &b5sq) / (2 * (1 - q) * b5));
    let v1 = ((1 + &b5sq) * &w2 - p.sum_inv_b() * b5 * b6 - b5 * (1 + b6.square()) * t) / &den;
    let v0 = (&den * mu + b5 * b6 * (p.sum_inv_b() + (b6 + b6.recip()) * t) * lambda - 2 * b5 * b6 * lambda.square()
        - (1 + &b5sq) * &s / 2
        + (1 + &b5sq) * (b6 * t - nu) / lambda)
        / &den;
    SpectralCoefficients {
        w: [w0, w1, w2, w3],
        v: [v0, v1, v2],
        u1: p.u1(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laxpair::Family;

    fn family() -> Family {
        let ctx = Ctx::default();
        Family::new(Params::default_instance(&ctx), ctx)
    }

    #[test]
    fn closed_forms_match_numeric() {
        let fam = family();
        let tol = fam.ctx().tol * 1e4;
        for n in 1..=2 {
            let p = fam.params(n, 0).unwrap();
            let num = fam.extraction(n, 0).unwrap();
            let prev = fam.extraction(n - 1, 0).unwrap();
            let fg = fam.fg(n, 0).unwrap();
            let a_n = &fam.ops(0).unwrap().a[n];
            let closed = astar_closed_form(&fg.f, &fg.g, Some(&prev.lambda), &p.t, a_n, &p, fam.ctx()).unwrap();
            let diff = closed.matrix.as_mat().max_coeff_diff(&num.astar.as_mat());
            assert!(diff < tol, "n={n} A* diff {diff:e}");
            assert!(closed.w_plus_alt.max_coeff_diff(&num.astar.w_plus) < tol);
            assert!(closed.w_minus_alt.max_coeff_diff(&num.astar.w_minus) < tol);

            let rho = GammaRatios {
                current: fam.gamma_ratio(n, 0).unwrap(),
                previous: fam.gamma_ratio(n - 1, 0).unwrap(),
            };
            let b = bstar_closed_form(&fg.f, &fg.g, &p.t, a_n, &rho, &p).unwrap();
            let bn = fam.bstar(n, 0).unwrap();
            let diff = b.as_mat().max_coeff_diff(&bn.matrix.as_mat());
            assert!(diff < tol, "n={n} B* diff {diff:e}");
            let ghat = fam.extraction(n, 1).unwrap().lambda;
            let (r0p, r0m) = r0_ratios_with_ghat(&fg.f, &fg.g, &ghat, &p.t, &p);
            let rp = &bn.matrix.r_plus;
            let rm = &bn.matrix.r_minus;
            assert!(crate::algebra::rel_diff(&r0p, &(rp.coeff(0) / rp.coeff(1))) < tol);
            assert!(crate::algebra::rel_diff(&r0m, &(rm.coeff(0) / rm.coeff(1))) < tol);
        }
    }

    #[test]
    fn parametrisations_match_numeric() {
        let fam = family();
        let tol = fam.ctx().tol * 1e4;
        let n = 2;
        let p = fam.params(n, 0).unwrap();
        let e = fam.extraction(n, 0).unwrap();
        let a_n = &fam.ops(0).unwrap().a[n];
        let q = &p.q;
        assert!(wparam(&e.lambda, &e.nu, &p, &p.t).max_coeff_diff(&e.astar.two_wn_minus_w()) < tol);
        assert!(oparam(&e.lambda, &e.nu, &e.mu, &p, &p.t).max_coeff_diff(&e.astar.omega_plus_v(q)) < tol);
        assert!(tparam(&e.lambda, &p).max_coeff_diff(&e.astar.theta(q, a_n)) < tol);
        let c = spectral_coefficients(&e.lambda, &e.nu, &e.mu, &p, &p.t);
        let w = e.astar.two_wn_minus_w();
        let v = e.astar.omega_plus_v(q);
        for k in 0..4 {
            assert!(crate::algebra::rel_diff(&c.w[k], &w.coeff(k)) < tol, "w{k}");
        }
        for k in 0..3 {
            assert!(crate::algebra::rel_diff(&c.v[k], &v.coeff(k)) < tol, "v{k}");
        }
    }
}
