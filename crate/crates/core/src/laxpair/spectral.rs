use crate::algebra::{poly_interpolate, poly_root_of_linear_factor, Mat2, Poly, Scalar};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::ops::OpsData;
use crate::sampling::interpolation_nodes;
use crate::weight::{spectral_data, Params};

/// A*_n = [[𝔚₊, −𝔗₊], [𝔗₋, 𝔚₋]] with degree profile (3, 2; 2, 3).
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralMatrix {
    pub w_plus: Poly,
    pub w_minus: Poly,
    pub t_plus: Poly,
    pub t_minus: Poly,
}

impl SpectralMatrix {
    pub fn as_mat(&self) -> Mat2<Poly> {
        Mat2::new(
            self.w_plus.clone(),
            -&self.t_plus,
            self.t_minus.clone(),
            self.w_minus.clone(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Mat2<Scalar> {
        self.as_mat().eval(x)
    }

    /// 𝔚₊𝔚₋ + 𝔗₊𝔗₋.
    pub fn det(&self) -> Poly {
        &(&self.w_plus * &self.w_minus) + &(&self.t_plus * &self.t_minus)
    }

    /// 2W_n − W = (𝔚₊ + 𝔚₋)/2.
    pub fn two_wn_minus_w(&self) -> Poly {
        let half = Scalar::ratio(1, 2, self.w_plus.prec());
        (&self.w_plus + &self.w_minus).scale(&half)
    }

    /// Ω_n + V = (𝔚₊ − 𝔚₋)/(2Δy); the constant terms cancel.
    pub fn omega_plus_v(&self, q: &Scalar) -> Poly {
        (&self.w_plus - &self.w_minus)
            .div_x()
            .scale(&(2 * (q - 1)).recip())
    }

    /// Θ_n = 𝔗₊/(Δy a_n).
    pub fn theta(&self, q: &Scalar, a_n: &Scalar) -> Poly {
        self.t_plus.div_x().scale(&((q - 1) * a_n).recip())
    }

    /// Θ_{n−1} = 𝔗₋/(Δy a_n).
    pub fn theta_prev(&self, q: &Scalar, a_n: &Scalar) -> Poly {
        self.t_minus.div_x().scale(&((q - 1) * a_n).recip())
    }
}

/// A*_n(x) = (W + ΔyV)(x) · Y_n(qx) · Y_n(x)⁻¹ at one point.
pub fn astar_at(p: &Params, ops: &OpsData, x: &Scalar, tol: f64) -> Result<Mat2<Scalar>> {
    let n = p.n;
    let qx = &p.q * x;
    let y_qx = ops.y_matrix(n, &qx, p)?;
    let y_x = ops.y_matrix(n, x, p)?;
    let inv = y_x.inv(tol).map_err(|_| Error::SingularY(format!("{x:?}")))?;
    let wp = spectral_data(p, &ops.t).w_plus.eval(x);
    Ok(y_qx.mul(&inv).scale(&wp))
}

/// Numeric A*_n at the time of `ops`, recovered by interpolation over six
/// nodes with the degree profile asserted.
pub fn astar_numeric(p: &Params, ops: &OpsData, ctx: &Ctx) -> Result<SpectralMatrix> {
    let nodes = interpolation_nodes(6, ctx.prec);
    let mut vals = Vec::with_capacity(nodes.len());
    for x in &nodes {
        vals.push(astar_at(p, ops, x, ctx.tol)?);
    }
    let entry = |pick: fn(&Mat2<Scalar>) -> &Scalar, deg: usize| -> Result<Poly> {
        let samples: Vec<_> = nodes
            .iter()
            .zip(&vals)
            .map(|(x, m)| (x.clone(), pick(m).clone()))
            .collect();
        poly_interpolate(&samples, deg, ctx.tol)
    };
    Ok(SpectralMatrix {
        w_plus: entry(|m| &m.e11, 3)?,
        t_plus: -entry(|m| &m.e12, 2)?,
        t_minus: entry(|m| &m.e21, 2)?,
        w_minus: entry(|m| &m.e22, 3)?,
    })
}

/// (λ, ν, μ): the nonzero root of 𝔗₊ and the values of 2W_n − W and Ω_n + V there.
pub fn extract_lambda_mu_nu(a: &SpectralMatrix, p: &Params, tol: f64) -> Result<(Scalar, Scalar, Scalar)> {
    let lambda = poly_root_of_linear_factor(&a.t_plus, None, tol)?;
    let nu = a.two_wn_minus_w().eval(&lambda);
    let mu = a.omega_plus_v(&p.q).eval(&lambda);
    Ok((lambda, nu, mu))
}

/// κ₊z₊ = ν/λ + (q − 1)μ, κ₋z₋ = ν/λ − (q − 1)μ.
pub fn zpm_from_mu_nu(lambda: &Scalar, nu: &Scalar, mu: &Scalar, p: &Params) -> Result<(Scalar, Scalar)> {
    if lambda.abs_f64() <= p.tol() {
        return Err(Error::ZeroLambda);
    }
    let r = nu / lambda;
    let s = (&p.q - 1) * mu;
    Ok(((&r + &s) / p.kappa_plus(), (r - s) / p.kappa_minus()))
}

/// Inverse of [`zpm_from_mu_nu`].
pub fn mu_nu_from_zpm(lambda: &Scalar, z_plus: &Scalar, z_minus: &Scalar, p: &Params) -> (Scalar, Scalar) {
    let a = p.kappa_plus() * z_plus;
    let b = p.kappa_minus() * z_minus;
    let nu = (&a + &b) * lambda / 2;
    let mu = (a - b) / (2 * (&p.q - 1));
    (nu, mu)
}

/// Spectral data of one index at one time, with the derived variables.
#[derive(Clone, Debug)]
pub struct Extraction {
    pub astar: SpectralMatrix,
    pub lambda: Scalar,
    pub nu: Scalar,
    pub mu: Scalar,
    pub z_plus: Scalar,
    pub z_minus: Scalar,
}

pub fn extract(p: &Params, ops: &OpsData, ctx: &Ctx) -> Result<Extraction> {
    let astar = astar_numeric(p, ops, ctx)?;
    let (lambda, nu, mu) = extract_lambda_mu_nu(&astar, p, ctx.tol)?;
    let (z_plus, z_minus) = zpm_from_mu_nu(&lambda, &nu, &mu, p)?;
    Ok(Extraction { astar, lambda, nu, mu, z_plus, z_minus })
}

/// (f, g) at time t together with the second-route value of f.
#[derive(Clone, Debug)]
pub struct FgPair {
    pub f: Scalar,
    pub g: Scalar,
    /// f recovered from ẑ₋ instead of ẑ₊.
    pub f_alt: Scalar,
}

impl FgPair {
    pub fn route_gap(&self) -> f64 {
        crate::algebra::rel_diff(&self.f, &self.f_alt)
    }
}

/// g = λ_n(t); f from ẑ₊ at qt, cross-checked through ẑ₋:
/// f = [1 + q b₅b₆t ĝẑ₊ / ((ĝ − b₆qt)(b₆ĝ − qt))] / ĝ,
/// f = [1 + q b₅ t ∏(ĝb_j − 1) / (ĝẑ₋)] / ĝ.
pub fn fg_from_extractions(now: &Extraction, next: &Extraction, p: &Params) -> Result<FgPair> {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let t = &p.t;
    let qt = q * t;
    let gh = &next.lambda;
    let guard = p.tol() * 1e6;
    let d1 = gh - b6 * &qt;
    let d2 = b6 * gh - &qt;
    if gh.abs_f64() <= guard {
        return Err(Error::SingularConfiguration("g at qt vanishes"));
    }
    if d1.abs_f64() <= guard || d2.abs_f64() <= guard {
        return Err(Error::SingularConfiguration("g at qt on b6 qt or qt/b6"));
    }
    let f = (1 + q * b5 * b6 * t * gh * &next.z_plus / (d1 * d2)) / gh;
    let prod = p.prod_b(|b| gh * b - 1);
    let f_alt = (1 + q * b5 * t * prod / (gh * &next.z_minus)) / gh;
    Ok(FgPair { f, g: now.lambda.clone(), f_alt })
}
