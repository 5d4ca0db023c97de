//! The spectral matrix A*_n and deformation matrix B*_n, computed numerically
//! from the orthogonal polynomials and in closed form from (f, g).

mod closed;
mod deform;
pub mod identities;
mod spectral;

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

pub use closed::{
    astar_closed_form, bstar_closed_form, oparam, r0_ratios_with_ghat, spectral_coefficients, tparam, wparam,
    ClosedSpectral, GammaRatios, SpectralCoefficients,
};
pub use deform::{bstar_numeric, DeformMatrix, NumericDeform};
pub use spectral::{
    astar_at, astar_numeric, extract, extract_lambda_mu_nu, fg_from_extractions, mu_nu_from_zpm, zpm_from_mu_nu,
    Extraction, FgPair, SpectralMatrix,
};

use crate::algebra::Scalar;
use crate::ctx::Ctx;
use crate::error::Result;
use crate::ops::OpsData;
use crate::weight::Params;

/// One weight followed along the time lattice t₀qᵏ. Orthogonal polynomial
/// data depends on the time only, so it is built once per k and shared by
/// every index n.
pub struct Family {
    base: Params,
    ctx: Ctx,
    ops: RefCell<BTreeMap<i32, Rc<OpsData>>>,
}

impl Family {
    pub fn new(base: Params, ctx: Ctx) -> Self {
        Family { base, ctx, ops: RefCell::new(BTreeMap::new()) }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn base(&self) -> &Params {
        &self.base
    }

    pub fn time(&self, k: i32) -> Scalar {
        &self.base.t * self.base.q.powi(k)
    }

    pub fn params(&self, n: usize, k: i32) -> Result<Params> {
        self.base.with_n(n)?.with_t(self.time(k))
    }

    pub fn ops(&self, k: i32) -> Result<Rc<OpsData>> {
        if let Some(o) = self.ops.borrow().get(&k) {
            return Ok(Rc::clone(o));
        }
        let o = Rc::new(OpsData::build(&self.base, &self.time(k), &self.ctx)?);
        self.ops.borrow_mut().insert(k, Rc::clone(&o));
        Ok(o)
    }

    pub fn extraction(&self, n: usize, k: i32) -> Result<Extraction> {
        extract(&self.params(n, k)?, &*self.ops(k)?, &self.ctx)
    }

    /// (f_n, g_n) at time t₀qᵏ.
    pub fn fg(&self, n: usize, k: i32) -> Result<FgPair> {
        let now = self.extraction(n, k)?;
        let next = self.extraction(n, k + 1)?;
        fg_from_extractions(&now, &next, &self.params(n, k)?)
    }

    /// B*_n between t₀qᵏ and t₀qᵏ⁺¹.
    pub fn bstar(&self, n: usize, k: i32) -> Result<NumericDeform> {
        bstar_numeric(&self.params(n, k)?, &*self.ops(k)?, &*self.ops(k + 1)?, &self.ctx)
    }

    /// γ̂_m/γ_m at time t₀qᵏ.
    pub fn gamma_ratio(&self, m: usize, k: i32) -> Result<Scalar> {
        Ok(&self.ops(k + 1)?.gamma[m] / &self.ops(k)?.gamma[m])
    }
}
