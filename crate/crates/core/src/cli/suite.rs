//! The verification suite behind `selftest`, `verify-lax` and `correspond`.
//! Every check is a residual compared against a fixed tolerance; module
//! errors become failed records.

use crate::algebra::{rel_diff, Scalar};
use crate::correspondence::{sakai, yamada};
use crate::error::{Error, Result};
use crate::laxpair::identities::*;
use crate::laxpair::{astar_closed_form, bstar_closed_form, oparam, tparam, wparam, Family, GammaRatios};
use crate::painleve::{advance_g, evolution_residuals, gamma_ratio_sq, orbit, retreat_f, step_forward, PainleveState};
use crate::sampling::Sampler;
use crate::weight::{check_wv_rs, dsc_ratio_residual, sc_ratio_residual, Params};

use super::report::{CheckRecord, Expect};

pub const TIGHT: f64 = 1e-30;
pub const STANDARD: f64 = 1e-25;
pub const COMPOUNDED: f64 = 1e-20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    Weight,
    Ops,
    Spectral,
    Index,
    Deform,
    Compat,
    Dynamics,
    Sakai,
    Yamada,
}

impl Group {
    pub const ALL: [Group; 9] = [
        Group::Weight,
        Group::Ops,
        Group::Spectral,
        Group::Index,
        Group::Deform,
        Group::Compat,
        Group::Dynamics,
        Group::Sakai,
        Group::Yamada,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Weight => "weight",
            Group::Ops => "ops",
            Group::Spectral => "spectral",
            Group::Index => "index",
            Group::Deform => "deform",
            Group::Compat => "compat",
            Group::Dynamics => "dynamics",
            Group::Sakai => "sakai",
            Group::Yamada => "yamada",
        }
    }
}

fn worst(vals: impl IntoIterator<Item = f64>) -> f64 {
    vals.into_iter().fold(0.0, f64::max)
}

/// Runs checks against one family, seeding each group's sample points from
/// the run seed and the group, so groups can be run in any order.
pub struct Suite<'a> {
    fam: &'a Family,
    seed: u64,
    out: Vec<CheckRecord>,
    group: Group,
}

impl<'a> Suite<'a> {
    pub fn new(fam: &'a Family, seed: u64) -> Self {
        Suite { fam, seed, out: Vec::new(), group: Group::Weight }
    }

    fn sampler(&self) -> Sampler {
        let salt = Group::ALL.iter().position(|g| *g == self.group).unwrap_or(0) as u64;
        Sampler::new(self.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt), self.fam.ctx().prec)
    }

    fn record(&mut self, id: &str, relation: &'static str, tol: f64, r: Result<f64>) {
        self.push(id, relation, tol, Expect::Below, r);
    }

    fn push(&mut self, id: &str, relation: &'static str, tol: f64, expect: Expect, r: Result<f64>) {
        let id = format!("{}.{id}", self.group.name());
        self.out.push(CheckRecord::from_result(id, self.group.name(), relation, tol, expect, r));
    }

    fn n(&self) -> usize {
        self.fam.base().n
    }

    pub fn run(mut self, groups: &[Group]) -> Vec<CheckRecord> {
        for &g in groups {
            self.group = g;
            match g {
                Group::Weight => self.weight(),
                Group::Ops => self.ops(),
                Group::Spectral => self.spectral(),
                Group::Index => self.index(),
                Group::Deform => self.deform(),
                Group::Compat => self.compat(),
                Group::Dynamics => self.dynamics(),
                Group::Sakai => self.sakai(),
                Group::Yamada => self.yamada(),
            }
        }
        self.out
    }

    fn weight(&mut self) {
        let p = self.fam.base().clone();
        let xs = self.sampler().points(10, 0.2, 1.5);
        let t = &p.t;
        let r = xs.iter().map(|x| sc_ratio_residual(x, t, &p)).collect::<Result<Vec<_>>>().map(worst);
        self.record("sc_ratio", "w(qx;t)/w(x;t) = (W+ΔyV)/(W-ΔyV)", TIGHT, r);
        let r = xs.iter().map(|x| dsc_ratio_residual(x, t, &p)).collect::<Result<Vec<_>>>().map(worst);
        self.record("dsc_ratio", "w(x;qt)/w(x;t) = (R+ΔuS)/(R-ΔuS)", TIGHT, r);
        let r = xs.iter().map(|x| check_wv_rs(&p, t, x)).collect::<Result<Vec<_>>>().map(worst);
        self.record("wv_rs", "spectral and deformation data compatible", TIGHT, r);
    }

    fn ops(&mut self) {
        let fam = self.fam;
        let xs = self.sampler().points(4, 0.3, 1.5);
        let r = (|| {
            let ops = fam.ops(0)?;
            let mut w = 0f64;
            for n in 1..=5 {
                for m in 0..n {
                    w = w.max(ops.inner_product(m, n)?.abs_f64());
                }
            }
            Ok(w)
        })();
        self.record("orthogonality", "∫ p_m p_n w = 0 for m < n <= 5", STANDARD, r);
        let r = (|| {
            let ops = fam.ops(0)?;
            let one = Scalar::one(fam.ctx().prec);
            let mut w = 0f64;
            for n in 0..=5 {
                w = w.max(rel_diff(&ops.inner_product(n, n)?, &one));
            }
            Ok(w)
        })();
        self.record("normalisation", "∫ p_n² w = 1 for n <= 5", STANDARD, r);
        let r = (|| {
            let ops = fam.ops(0)?;
            let one = Scalar::one(fam.ctx().prec);
            let mut w = 0f64;
            for n in 1..=5 {
                let p = fam.params(n, 0)?;
                for x in &xs {
                    w = w.max(rel_diff(&ops.casoratian(n, x, &p)?, &one));
                }
            }
            Ok(w)
        })();
        self.record("casoratian", "a_n w det Y_n = 1", STANDARD, r);
        let r = (|| {
            let ops = fam.ops(0)?;
            let mut w = 0f64;
            for n in 2..=3 {
                let poly = ops.p_poly(n)?;
                let lead = poly.coeff(n);
                let (c1, c2) = ops.p_expansion(n)?;
                w = w.max(rel_diff(&(poly.coeff(n - 1) / &lead), &c1));
                w = w.max(rel_diff(&(poly.coeff(n - 2) / &lead), &c2));
            }
            Ok(w)
        })();
        self.record("expansion", "subleading coefficients of p_2, p_3 from a_i, b_i", STANDARD, r);
    }

    fn spectral(&mut self) {
        let fam = self.fam;
        let per_n = |f: &dyn Fn(usize) -> Result<f64>| -> Result<f64> {
            let mut w = 0f64;
            for n in 0..=2 {
                w = w.max(f(n)?);
            }
            Ok(w)
        };
        let r = per_n(&|n| Ok(astar_det_residual(&fam.extraction(n, 0)?.astar, &fam.params(n, 0)?, &fam.time(0))));
        self.record("det", "det A* = W² - Δy²V², n = 0, 1, 2", STANDARD, r);
        let r = per_n(&|n| Ok(astar_leading_residual(&fam.extraction(n, 0)?.astar, &fam.params(n, 0)?)));
        self.record("leading", "[x³] diag A* = (-b5 b6, -b6/b5)", TIGHT, r);
        let r = per_n(&|n| Ok(astar_offdiag_constant(&fam.extraction(n, 0)?.astar)));
        self.record("offdiag_constant", "off-diagonal entries vanish at x = 0", STANDARD, r);
        let r = per_n(&|n| {
            let e = fam.extraction(n, 0)?;
            let p = fam.params(n, 0)?;
            Ok(quad_residual(&e.lambda, &e.nu, &e.mu, &p, &p.t).max(zpm_product_residual(&e.lambda, &e.z_plus, &e.z_minus, &p, &p.t)))
        });
        self.record("quad", "(λ, ν, μ) on the spectral curve; z+ z- product", STANDARD, r);
        let r = (|| {
            let mut w = 0f64;
            for n in 1..=2 {
                let p = fam.params(n, 0)?;
                let e = fam.extraction(n, 0)?;
                let prev = fam.extraction(n - 1, 0)?;
                let fg = fam.fg(n, 0)?;
                let a_n = &fam.ops(0)?.a[n];
                let c = astar_closed_form(&fg.f, &fg.g, Some(&prev.lambda), &p.t, a_n, &p, fam.ctx())?;
                w = w.max(c.matrix.as_mat().max_coeff_diff(&e.astar.as_mat()));
                w = w.max(c.w_plus_alt.max_coeff_diff(&e.astar.w_plus));
                w = w.max(c.w_minus_alt.max_coeff_diff(&e.astar.w_minus));
                let q = &p.q;
                w = w.max(wparam(&e.lambda, &e.nu, &p, &p.t).max_coeff_diff(&e.astar.two_wn_minus_w()));
                w = w.max(oparam(&e.lambda, &e.nu, &e.mu, &p, &p.t).max_coeff_diff(&e.astar.omega_plus_v(q)));
                w = w.max(tparam(&e.lambda, &p).max_coeff_diff(&e.astar.theta(q, a_n)));
            }
            Ok(w)
        })();
        self.record("closed_form", "A* from (f, g) and the (λ, ν, μ) forms equal numeric A*, n = 1, 2", STANDARD, r);
        let xs = self.sampler().points(4, 0.3, 1.5);
        let r = (|| {
            let ops = fam.ops(0)?;
            let mut w = 0f64;
            for n in 1..=2 {
                let p = fam.params(n, 0)?;
                let a = fam.extraction(n, 0)?.astar;
                for x in &xs {
                    w = w.max(lsodde_residual(&a, &ops, &p, x)?);
                }
            }
            Ok(w)
        })();
        self.record("scalar_equation", "p_n solves the second-order equation built from A*", STANDARD, r);
    }

    fn index(&mut self) {
        let fam = self.fam;
        let x = self.sampler().annulus_point(0.3, 1.5);
        let r = (|| {
            let ops = fam.ops(0)?;
            let t = fam.time(0);
            let mut coeffs = Vec::new();
            for n in 0..=2 {
                let p = fam.params(n, 0)?;
                let e = fam.extraction(n, 0)?;
                coeffs.push((IndexCoefficients::new(&e.astar, &ops.a[n], &p, &t), e.astar, p));
            }
            let mut rec = 0f64;
            let mut det = 0f64;
            let mut conj = 0f64;
            let mut exp = 0f64;
            for n in 0..=1 {
                let (cur, a_cur, p) = &coeffs[n];
                let (next, a_next, _) = &coeffs[n + 1];
                rec = rec.max(worst(index_recurrence_residuals(cur, next, &ops, n, p)));
                conj = conj.max(k_conjugation_residual(a_cur, a_next, &ops, n, p, &x)?);
            }
            for (n, (c, a, p)) in coeffs.iter().enumerate() {
                det = det.max(index_det_residual(c, &ops.a[n], p, &t));
                if n > 0 {
                    exp = exp.max(worst(expansion_residuals(a, &ops.a[n], p, &t)));
                }
            }
            Ok([rec, det, conj, exp])
        })();
        let part = |i: usize| r.clone().map(|v| v[i]);
        self.record("recurrences", "W, Ω, Θ recurrences in n across 0 -> 1 -> 2", STANDARD, part(0));
        self.record("det", "W_n(W_n - W) determinant relation", STANDARD, part(1));
        self.record("k_conjugation", "K_n(qx)C_n(x) = C_{n+1}(x)K_n(x)", STANDARD, part(2));
        self.record("expansion", "leading coefficients of W_n, Θ_n, Ω_n + V", STANDARD, part(3));
    }

    fn deform(&mut self) {
        let fam = self.fam;
        let r = (|| {
            let (ops, ops_hat) = (fam.ops(0)?, fam.ops(1)?);
            let mut det = 0f64;
            let mut off = 0f64;
            let mut closed = 0f64;
            let mut res = 0f64;
            let mut bs = Vec::new();
            for n in 1..=3 {
                let p = fam.params(n, 0)?;
                let b = fam.bstar(n, 0)?.matrix;
                let (a_n, a_hat) = (&ops.a[n], &ops_hat.a[n]);
                det = det.max(bstar_det_residual(&b, a_n, a_hat, &p, &p.t));
                off = off.max(worst(bstar_offdiag_residuals(&b, a_n, a_hat)));
                if n <= 2 {
                    let fg = fam.fg(n, 0)?;
                    let rho = GammaRatios { current: fam.gamma_ratio(n, 0)?, previous: fam.gamma_ratio(n - 1, 0)? };
                    let c = bstar_closed_form(&fg.f, &fg.g, &p.t, a_n, &rho, &p)?;
                    closed = closed.max(c.as_mat().max_coeff_diff(&b.as_mat()));
                    let a_t = fam.extraction(n, 0)?.astar;
                    let a_qt = fam.extraction(n, 1)?.astar;
                    res = res.max(worst(residue_residuals(&a_t, &a_qt, &b, &p, &p.t)?));
                }
                bs.push(b);
            }
            for i in 0..2 {
                off = off.max(defm_offdiag_residual(&bs[i], &bs[i + 1], &ops.a[i + 1], &ops.a[i + 2]));
            }
            Ok([det, off, closed, res])
        })();
        let part = |i: usize| r.clone().map(|v| v[i]);
        self.record("det", "det B* = (a_n/â_n)(R+ΔuS)(R-ΔuS), n = 1..3", STANDARD, part(0));
        self.record("offdiag", "off-diagonal entries of B* from r_1± and a_n, â_n", STANDARD, part(1));
        self.record("closed_form", "B* from (f, g) equals numeric B*, n = 1, 2", STANDARD, part(2));
        self.record("residues", "residue relations at x = b6qt, qt/b6", STANDARD, part(3));
    }

    fn compat(&mut self) {
        let fam = self.fam;
        let n = self.n();
        let xs = self.sampler().points(8, 0.3, 2.0);
        let r = (|| {
            let p = fam.params(n, 0)?;
            let a_t = fam.extraction(n, 0)?.astar;
            let a_qt = fam.extraction(n, 1)?.astar;
            let b = fam.bstar(n, 0)?.matrix;
            verify_compatibility(&a_t, &a_qt, &b, &p, &p.t, &xs)
        })();
        self.record("schlesinger", "χ B*(qx) A*(x;t) = A*(x;qt) B*(x) at 8 points", STANDARD, r);
    }

    fn dynamics(&mut self) {
        let fam = self.fam;
        let n = self.n();
        let states = (0..3)
                .map(|k| {
                    let fg = fam.fg(n, k)?;
                    Ok((PainleveState::new(fg.f.clone(), fg.g.clone(), fam.time(k)), fg.route_gap()))
                })
                .collect::<Result<Vec<_>>>();
        let r = states.clone().and_then(|s| {
            let p = fam.params(n, 0)?;
            let mut w = 0f64;
            for k in 0..2 {
                w = w.max(worst(evolution_residuals(&s[k].0, &s[k + 1].0, &p)?));
            }
            Ok(w)
        });
        self.record("evolution", "OPS (f, g) at t, qt, q²t satisfy both evolution equations", COMPOUNDED, r);
        let r = states.clone().map(|s| worst(s.iter().map(|v| v.1)));
        self.record("f_routes", "f from z+ and from z- agree", COMPOUNDED, r);
        let r = states.clone().and_then(|s| {
            let p = fam.params(n, 0)?;
            Ok(step_forward(&s[0].0, &p)?.distance(&s[1].0))
        });
        self.record("step_forward", "step_forward maps the OPS pair at t to the pair at qt", COMPOUNDED, r);
        let r = states.and_then(|s| {
            let p = fam.params(n, 0)?;
            let rho = fam.gamma_ratio(n, 0)? / &p.b6;
            Ok(rel_diff(&gamma_ratio_sq(&s[0].0.f, &p.t, &p)?, &rho.square()))
        });
        self.record("gamma_ratio", "(γ̂_n/(b6 γ_n))² = (f - t/b5)/(f - b5qt)", COMPOUNDED, r);
        let seed = {
            let mut s = self.sampler();
            (s.annulus_point(0.2, 1.5), s.annulus_point(0.2, 1.5))
        };
        let r = (|| {
            let p = fam.params(n, 0)?;
            let s0 = PainleveState::new(seed.0.clone(), seed.1.clone(), p.t.clone());
            let fwd = orbit(&s0, 5, &p)?;
            let back = orbit(fwd.last().expect("nonempty"), -5, &p)?;
            Ok(back.last().expect("nonempty").distance(&s0))
        })();
        self.record("round_trip", "five steps forward then back return to a generic seed", STANDARD, r);
    }

    fn sakai(&mut self) {
        let fam = self.fam;
        let n = self.n();
        let mut sampler = self.sampler();
        let xs6 = sampler.points(6, 0.3, 1.5);
        let xs5 = sampler.points(5, 0.3, 1.5);
        let gamma = sampler.point(2.0);
        let setup = (|| {
            let p = fam.params(n, 0)?;
            let now = fam.extraction(n, 0)?;
            let next = fam.extraction(n, 1)?;
            let b = fam.bstar(n, 0)?.matrix;
            let a_n = fam.ops(0)?.a[n].clone();
            let a_hat = fam.ops(1)?.a[n].clone();
            let compat = sakai::sakai_compat(&now, &next, &b, &a_n, &a_hat, &p)?;
            let dict = sakai::sakai_dictionary(&now.lambda, &now.z_plus, &now.z_minus, &a_n, &p, &p.t);
            Ok((p, now, compat, dict))
        })();
        let with = |f: &dyn Fn(&Params, &crate::laxpair::Extraction, &sakai::SakaiCompat, &sakai::SakaiDictionary) -> Result<f64>| {
            setup.as_ref().map_err(Clone::clone).and_then(|(p, e, c, d)| f(p, e, c, d))
        };
        let r = with(&|_, e, c, _| Ok(c.now.entries.max_coeff_diff(&e.astar.as_mat())));
        self.record("astar_match", "Sakai matrix from extracted (λ, z±, w) equals A*", STANDARD, r);
        let names = [
            ("det", "Sakai matrix determinant"),
            ("top", "Sakai matrix x³ coefficient diag(-b5b6, -b6/b5)"),
            ("constant", "Sakai matrix x⁰ coefficient b6t·1"),
            ("root", "Sakai matrix (1,2) entry vanishes at λ"),
            ("triangular", "Sakai matrix lower triangular at λ"),
        ];
        for (i, (id, rel)) in names.iter().enumerate() {
            let r = with(&|p, e, c, _| Ok(c.now.property_residuals(&e.z_plus, &e.z_minus, p, &p.t)[i]));
            self.record(&format!("property_{id}"), rel, STANDARD, r);
        }
        let r = with(&|_, _, c, _| {
            let r = &c.r12;
            Ok(rel_diff(&r[0], &r[1]).max(rel_diff(&r[0], &r[2])))
        });
        self.record("r12_routes", "three routes to the (1,2) entry of B0 agree", COMPOUNDED, r);
        let r = with(&|_, _, c, _| Ok(c.b0.max_diff(&c.b0_numeric)));
        self.record("b0", "B0 solved from the compatibility equals B0 read off B*", COMPOUNDED, r);
        let r = with(&|p, _, c, _| sakai::sakai_compat_residual(&c.now.entries, &c.next.entries, &c.b0, p, &p.t, &xs6));
        self.record("compat", "B̃(qx)Ã(x;t) = Ã(x;qt)B̃(x) at 6 points", COMPOUNDED, r);
        let r = with(&|p, _, c, _| {
            let f = fam.fg(n, 0)?.f;
            sakai::r12_gap_for_f(&(&f * Scalar::from_f64(1.0 + 1e-6, p.prec())), c, p)
        });
        self.push("sensitivity", "perturbing f separates the r12 routes", 1e-10, Expect::Above, r);
        let r = with(&|_, _, _, d| Ok(worst(sakai::cal_a_property_residuals(&sakai::cal_a(d)?, d))));
        self.record("gauged_properties", "five properties of the gauged Sakai matrix", COMPOUNDED, r);
        let r = with(&|_, _, _, d| Ok(worst(sakai::frak_property_residuals(&sakai::frak_transform(&sakai::cal_a(d)?, d), d))));
        self.record("inverted_properties", "five properties of the inverted Sakai matrix", COMPOUNDED, r);
        let r = with(&|_, e, _, d| {
            let frak = sakai::frak_transform(&sakai::cal_a(d)?, d);
            Ok(worst(xs5.iter().map(|x| frak.eval(x).max_diff(&e.astar.eval(x)))))
        });
        self.record("dictionary", "inverted Sakai matrix under the dictionary equals A* at 5 points", COMPOUNDED, r);
        let r = with(&|_, _, _, d| {
            let orig = sakai::sakai_original(d, &gamma)?;
            let g = sakai::sakai_gauge_residual(&orig, &sakai::cal_a(d)?, d, &xs5)?;
            Ok(g.max(orig.division_remainder))
        });
        self.record("gauge", "Sakai's original matrix gauges to the normalised one", COMPOUNDED, r);
        let r = with(&|_, _, _, d| {
            let fg = fam.fg(n, 0)?;
            let g_hat = fam.fg(n, 1)?.g;
            let f_prev = fam.fg(n, -1)?.f;
            Ok(worst(sakai::sakai_evolution_residual(&d.lambda, &fg.f, &g_hat.recip(), &f_prev, d)?))
        });
        self.record("evolution", "Sakai evolution equations on the OPS orbit", COMPOUNDED, r);
    }

    fn yamada(&mut self) {
        let fam = self.fam;
        let n = self.n();
        let mut sampler = self.sampler();
        let zs = sampler.points(6, 0.3, 1.5);
        let xs = sampler.points(4, 0.3, 1.5);
        let setup = (|| {
            let p = fam.params(n, 0)?;
            let fg = fam.fg(n, 0)?;
            let a = fam.extraction(n, 0)?.astar;
            let b = fam.bstar(n, 0)?;
            let rho = fam.gamma_ratio(n, 0)?;
            Ok((p, fg, a, b, rho))
        })();
        let (ops, ops_hat) = match (fam.ops(0), fam.ops(1)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                self.record("setup", "orthogonal polynomial data", COMPOUNDED, Err(e));
                return;
            }
        };
        let with = |f: &dyn Fn(&Params, &crate::laxpair::FgPair, &crate::laxpair::SpectralMatrix, &crate::laxpair::NumericDeform, &Scalar) -> Result<f64>| {
            setup.as_ref().map_err(Clone::clone).and_then(|(p, fg, a, b, rho)| f(p, fg, a, b, rho))
        };
        let polys = |b: &crate::laxpair::NumericDeform| yamada::PolyPair { now: &ops, next: &ops_hat, n, scale: b.scale.clone() };

        let r = with(&|p, fg, a, _, _| {
            let mut w = 0f64;
            for z in &zs {
                let d = yamada::direct_coefficients(z, &fg.f, &fg.g, p, &p.t)?;
                w = w.max(d.max_diff(&yamada::lax_coefficients(z, a, p, &p.t)?));
            }
            Ok(w)
        });
        self.record("coefficients", "scalar-equation coefficients from (f, g) equal those from A* at 6 points", COMPOUNDED, r);
        let r = with(&|p, fg, _, b, _| {
            let pp = polys(b);
            let mut w = 0f64;
            for z in &zs {
                let d = yamada::direct_coefficients(z, &fg.f, &fg.g, p, &p.t)?;
                w = w.max(yamada::scalar_equation_residual(&d, z, &pp, p)?);
            }
            Ok(w)
        });
        self.record("scalar_equation", "U = p_n/F solves the scalar equation", COMPOUNDED, r);
        let r = with(&|p, _, a, b, _| {
            let pp = polys(b);
            let mut w = 0f64;
            for x in &xs {
                w = w.max(yamada::mixed_residual(x, a, &b.matrix.r_plus, &b.matrix.p_plus, &pp, p, &p.t)?);
            }
            Ok(w)
        });
        self.record("mixed", "mixed t/qt equation on raw p_n at 4 points", COMPOUNDED, r);
        let r = with(&|p, fg, a, b, rho| {
            let a_n = &ops.a[n];
            Ok(worst(xs.iter().flat_map(|x| {
                yamada::mixed_coefficient_residuals(x, a, &b.matrix.r_plus, &b.matrix.p_plus, &fg.f, &fg.g, a_n, rho, p, &p.t)
            })))
        });
        self.record("mixed_displays", "factored forms of the mixed-equation coefficients", STANDARD, r);
        let r = with(&|p, fg, _, _, rho| {
            let mut w = 0f64;
            for x in &xs {
                w = w.max(worst(yamada::gauge_ratio_residuals(x, &p.t, p)?));
                w = w.max(yamada::gauge_time_residual(x, &fg.f, &fg.g, rho, p, &p.t)?);
            }
            Ok(w)
        });
        self.record("gauge_ratios", "F(qx)/F(x), F(x/q)/F(x) and the t-ratio in closed form", STANDARD, r);
        let r = with(&|p, fg, _, b, rho| {
            let pp = polys(b);
            let norm = yamada::normalisation_ratio(&fg.f, &fg.g, rho, p, &p.t)?;
            let mut w = 0f64;
            for x in &xs {
                w = w.max(yamada::u_form_residual(x, &fg.f, &fg.g, &norm, &pp, p, &p.t)?);
            }
            Ok(w)
        });
        self.record("u_form", "t²U(x) - (1 - fx)U(qx) - (x - g)Û(qx)/(qgx) = 0", COMPOUNDED, r);
        let r = (|| {
            let mut acc = Scalar::one(fam.ctx().prec);
            for k in 0..3 {
                let pk = fam.params(n, k)?;
                let fg = fam.fg(n, k)?;
                let rho = fam.gamma_ratio(n, k)?;
                acc = acc * yamada::normalisation_ratio(&fg.f, &fg.g, &rho, &pk, &pk.t)?;
            }
            if !acc.is_finite() {
                return Err(Error::PoleHit("normalisation recursion"));
            }
            Ok(acc.abs_f64())
        })();
        self.push("normalisation_chain", "gauge normalisation recursion finite and nonzero over 3 steps", 1e-30, Expect::Above, r);
        let r = with(&|p, fg, _, _, _| {
            let v = yamada::yamada_variables(&fg.f, &fg.g, p, &p.t)?;
            let rows = zs
                .iter()
                .map(|z| Ok((z.clone(), v.first_equation(&(&p.q / z), &p.q), yamada::direct_coefficients(z, &fg.f, &fg.g, p, &p.t)?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(yamada::first_equation_spread(&rows))
        });
        self.record("first_equation", "Yamada's scalar equation is z² times a constant multiple of ours", COMPOUNDED, r);
        let r = with(&|p, fg, _, _, _| {
            let v = yamada::yamada_variables(&fg.f, &fg.g, p, &p.t)?;
            Ok(worst(zs.iter().map(|z| yamada::second_equation_residual(&v, z, &fg.f, &fg.g, p, &p.t))))
        });
        self.record("second_equation", "Yamada's mixed equation equals q/(fz) times the U form", COMPOUNDED, r);
        let r = (|| {
            let p = fam.params(n, 0)?;
            let mut w = 0f64;
            let mut checked = 0;
            for _ in 0..100 {
                if checked == 10 {
                    break;
                }
                let s = PainleveState::new(sampler.annulus_point(0.2, 2.0), sampler.annulus_point(0.2, 2.0), p.t.clone());
                let (Ok(g_hat), Ok(f_check)) = (advance_g(&s, &p), retreat_f(&s, &p)) else { continue };
                let v = yamada::yamada_variables(&s.f, &s.g, &p, &p.t)?;
                w = w.max(worst(v.evolution_residuals(&g_hat.recip(), &f_check.recip(), &p.q)));
                checked += 1;
            }
            if checked < 10 {
                return Err(Error::SingularConfiguration("too few regular random states"));
            }
            Ok(w)
        })();
        self.record("pullback", "Yamada's evolution equations at 10 random states", STANDARD, r);
    }
}

/// Every check, in a fixed order.
pub fn full_suite(fam: &Family, seed: u64) -> Vec<CheckRecord> {
    Suite::new(fam, seed).run(&Group::ALL)
}
