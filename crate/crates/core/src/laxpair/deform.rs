use crate::algebra::{poly_interpolate, Mat2, Poly, Scalar};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::ops::OpsData;
use crate::sampling::interpolation_nodes;
use crate::weight::{deformation_data, Params};

/// B*_n = [[𝕽₊, −𝔓₊], [𝔓₋, 𝕽₋]] with degree profile (1, 0; 0, 1).
#[derive(Clone, Debug, PartialEq)]
pub struct DeformMatrix {
    pub r_plus: Poly,
    pub r_minus: Poly,
    pub p_plus: Scalar,
    pub p_minus: Scalar,
}

impl DeformMatrix {
    pub fn as_mat(&self) -> Mat2<Poly> {
        Mat2::new(
            self.r_plus.clone(),
            Poly::constant(-&self.p_plus),
            Poly::constant(self.p_minus.clone()),
            self.r_minus.clone(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Mat2<Scalar> {
        Mat2::new(
            self.r_plus.eval(x),
            -&self.p_plus,
            self.p_minus.clone(),
            self.r_minus.eval(x),
        )
    }

    /// 𝕽₊𝕽₋ + 𝔓₊𝔓₋.
    pub fn det(&self) -> Poly {
        let pp = Poly::constant(&self.p_plus * &self.p_minus);
        &(&self.r_plus * &self.r_minus) + &pp
    }

    pub fn r1_plus(&self) -> Scalar {
        self.r_plus.coeff(1)
    }

    pub fn r1_minus(&self) -> Scalar {
        self.r_minus.coeff(1)
    }
}

/// Numeric B*_n together with the scale c that was applied to
/// (R + ΔuS)(x)·Y_n(x; qt)·Y_n(x; t)⁻¹ to make [x]𝕽₊ = γ̂_n/(b₆γ_n).
#[derive(Clone, Debug)]
pub struct NumericDeform {
    pub matrix: DeformMatrix,
    pub scale: Scalar,
}

pub fn bstar_numeric(p: &Params, ops_t: &OpsData, ops_qt: &OpsData, ctx: &Ctx) -> Result<NumericDeform> {
    let n = p.n;
    let r_plus = deformation_data(p, &ops_t.t).r_plus;
    let nodes = interpolation_nodes(6, ctx.prec);
    let mut vals = Vec::with_capacity(nodes.len());
    for x in &nodes {
        let y_hat = ops_qt.y_matrix(n, x, p)?;
        let y = ops_t.y_matrix(n, x, p)?;
        let inv = y.inv(ctx.tol).map_err(|_| Error::SingularY(format!("{x:?}")))?;
        vals.push(y_hat.mul(&inv).scale(&r_plus.eval(x)));
    }
    let entry = |pick: fn(&Mat2<Scalar>) -> &Scalar, deg: usize| -> Result<Poly> {
        let samples: Vec<_> = nodes
            .iter()
            .zip(&vals)
            .map(|(x, m)| (x.clone(), pick(m).clone()))
            .collect();
        poly_interpolate(&samples, deg, ctx.tol)
    };
    let e11 = entry(|m| &m.e11, 1)?;
    let e12 = entry(|m| &m.e12, 0)?;
    let e21 = entry(|m| &m.e21, 0)?;
    let e22 = entry(|m| &m.e22, 1)?;
    let target = &ops_qt.gamma[n] / (&p.b6 * &ops_t.gamma[n]);
    let raw_lead = e11.coeff(1);
    if raw_lead.abs_f64() <= ctx.tol {
        return Err(Error::ProfileMismatch("B* (1,1) entry has no linear term".into()));
    }
    let scale = target / raw_lead;
    Ok(NumericDeform {
        matrix: DeformMatrix {
            r_plus: e11.scale(&scale),
            r_minus: e22.scale(&scale),
            p_plus: -(e12.coeff(0) * &scale),
            p_minus: e21.coeff(0) * &scale,
        },
        scale,
    })
}
