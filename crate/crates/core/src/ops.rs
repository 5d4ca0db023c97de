//! Orthonormal polynomials for the deformed weight: moments by Jackson
//! summation, recurrence data from Hankel determinants, the associated
//! functions and the matrix variable Y_n.

use crate::algebra::{linalg, Mat2, Poly, Scalar};
use crate::ctx::Ctx;
use crate::error::{Error, Result};
use crate::weight::{weight_eval, Params};

/// Support terminals 1/b₃ (lower) and 1/b₂ (upper), both zeros of the weight.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportSpec {
    pub lower: Scalar,
    pub upper: Scalar,
    pub truncation: usize,
}

impl SupportSpec {
    pub fn new(p: &Params, truncation: usize) -> Self {
        SupportSpec {
            lower: p.b3.recip(),
            upper: p.b2.recip(),
            truncation,
        }
    }
}

/// Jackson quadrature on both half-lattices: ∫ g w d_qx ≈ Σ c_i g(x_i).
#[derive(Clone, Debug)]
pub struct JacksonRule {
    pub nodes: Vec<Scalar>,
    pub coeffs: Vec<Scalar>,
    /// Bound on |Σ over discarded nodes| for an integrand |g| ≤ 1.
    pub tail_bound: f64,
    radius: f64,
}

impl JacksonRule {
    pub fn build(p: &Params, t: &Scalar, spec: &SupportSpec) -> Result<Self> {
        let q = &p.q;
        let one_minus_q = 1 - q;
        for term in [&spec.lower, &spec.upper] {
            let w = weight_eval(term, t, p).map_err(|_| Error::NonFiniteIntegrand(format!("{term:?}")))?;
            if w.abs_f64() > p.tol() {
                return Err(Error::InvalidParams("weight does not vanish at a support terminal".into()));
            }
        }
        let mut nodes = Vec::with_capacity(2 * spec.truncation + 2);
        let mut coeffs = Vec::with_capacity(2 * spec.truncation + 2);
        let mut largest = 0f64;
        for (term, sign) in [(&spec.upper, 1), (&spec.lower, -1)] {
            let mut x = term.clone();
            for _ in 0..=spec.truncation {
                let w = weight_eval(&x, t, p).map_err(|_| Error::NonFiniteIntegrand(format!("{x:?}")))?;
                let c = &one_minus_q * &x * &w;
                largest = largest.max(c.abs_f64() / x.abs_f64());
                nodes.push(x.clone());
                coeffs.push(if sign > 0 { c } else { -c });
                x = x * q;
            }
        }
        let aq = q.abs_f64();
        let radius = spec.lower.abs_f64().max(spec.upper.abs_f64());
        let tail = largest * radius * aq.powi(spec.truncation as i32 + 1) / (1.0 - aq) * 2.0;
        Ok(JacksonRule { nodes, coeffs, tail_bound: tail, radius })
    }

    pub fn integrate(&self, g: impl Fn(&Scalar) -> Scalar) -> Scalar {
        let prec = self.coeffs[0].prec();
        let mut acc = Scalar::zero(prec);
        for (x, c) in self.nodes.iter().zip(&self.coeffs) {
            acc = acc + c * g(x);
        }
        acc
    }

    /// Tail bound for an integrand bounded by `sup` on the support disc.
    pub fn tail_for(&self, sup: f64) -> f64 {
        self.tail_bound * sup
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Recurrence data at one time t: p_{n+1} a_{n+1} = (x − b_n) p_n − a_n p_{n−1}.
#[derive(Clone, Debug)]
pub struct OpsData {
    pub t: Scalar,
    pub moments: Vec<Scalar>,
    pub moment_tails: Vec<f64>,
    /// a_0 := 1, a_1, …
    pub a: Vec<Scalar>,
    pub b: Vec<Scalar>,
    pub gamma: Vec<Scalar>,
    /// Δ_0 = 1, Δ_1, …
    pub hankel: Vec<Scalar>,
    pub rule: JacksonRule,
    nmax: usize,
    tol: f64,
}

/// m_k = ∫ x^k w(x;t) d_qx for k = 0..=kmax, with tail bounds.
pub fn moments(rule: &JacksonRule, kmax: usize) -> (Vec<Scalar>, Vec<f64>) {
    let prec = rule.coeffs[0].prec();
    let mut m = vec![Scalar::zero(prec); kmax + 1];
    for (x, c) in rule.nodes.iter().zip(&rule.coeffs) {
        let mut term = c.clone();
        for mk in m.iter_mut() {
            *mk = std::mem::replace(mk, Scalar::zero(prec)) + &term;
            term = term * x;
        }
    }
    let tails = (0..=kmax).map(|k| rule.tail_for(rule.radius().powi(k as i32))).collect();
    (m, tails)
}

/// Recurrence coefficients (a, b, γ, Δ) for indices up to `nmax + 1` from
/// moments m_0..m_{2nmax+3}.
pub fn recurrence_from_moments(
    m: &[Scalar],
    nmax: usize,
    tol: f64,
) -> Result<(Vec<Scalar>, Vec<Scalar>, Vec<Scalar>, Vec<Scalar>)> {
    let top = nmax + 2;
    if m.len() < 2 * top {
        return Err(Error::IndexOutOfRange { index: 2 * top - 1, max: m.len().saturating_sub(1) });
    }
    let prec = m[0].prec();
    let hankel = |k: usize, shifted: bool| -> Scalar {
        let rows = (0..k)
            .map(|i| {
                let off = usize::from(shifted && i + 1 == k);
                (0..k).map(|j| m[i + j + off].clone()).collect()
            })
            .collect();
        linalg::det(rows, prec)
    };
    let scale = m.iter().map(Scalar::abs_f64).fold(1.0, f64::max);
    let mut delta = vec![Scalar::one(prec)];
    let mut dprime = vec![Scalar::zero(prec)];
    for k in 1..=top {
        let d = hankel(k, false);
        // a Hankel pivot Δ_k/Δ_{k−1} at roundoff level relative to the data
        if (&d / &delta[k - 1]).abs_f64() <= tol * scale {
            return Err(Error::DegenerateHankel(k));
        }
        delta.push(d);
        dprime.push(hankel(k, true));
    }
    let gamma: Vec<Scalar> = (0..top).map(|k| (&delta[k] / &delta[k + 1]).sqrt()).collect();
    let mut a = vec![Scalar::one(prec)];
    for k in 1..top {
        a.push(&gamma[k - 1] / &gamma[k]);
    }
    let b = (0..top)
        .map(|k| {
            let hi = &dprime[k + 1] / &delta[k + 1];
            if k == 0 {
                hi
            } else {
                hi - &dprime[k] / &delta[k]
            }
        })
        .collect();
    Ok((a, b, gamma, delta))
}

impl OpsData {
    pub fn build(p: &Params, t: &Scalar, ctx: &Ctx) -> Result<Self> {
        let spec = SupportSpec::new(p, ctx.truncation);
        let rule = JacksonRule::build(p, t, &spec)?;
        let (m, tails) = moments(&rule, 2 * ctx.nmax + 3);
        let (a, b, gamma, hankel) = recurrence_from_moments(&m, ctx.nmax, ctx.tol)?;
        Ok(OpsData {
            t: t.clone(),
            moments: m,
            moment_tails: tails,
            a,
            b,
            gamma,
            hankel,
            rule,
            nmax: ctx.nmax,
            tol: ctx.tol,
        })
    }

    pub fn nmax(&self) -> usize {
        self.nmax
    }

    fn check_index(&self, n: usize) -> Result<()> {
        if n > self.nmax {
            Err(Error::IndexOutOfRange { index: n, max: self.nmax })
        } else {
            Ok(())
        }
    }

    /// p_{−1}(x), p_0(x), …, p_n(x).
    pub fn p_values(&self, n: usize, x: &Scalar) -> Result<Vec<Scalar>> {
        self.check_index(n)?;
        let prec = x.prec();
        Ok(self.run_recurrence(n, x, Scalar::zero(prec), self.gamma[0].clone()))
    }

    fn run_recurrence(&self, n: usize, x: &Scalar, init_m: Scalar, init_0: Scalar) -> Vec<Scalar> {
        let mut out = vec![init_m, init_0];
        for k in 0..n {
            let next = ((x - &self.b[k]) * &out[k + 1] - &self.a[k] * &out[k]) / &self.a[k + 1];
            out.push(next);
        }
        out
    }

    pub fn eval_p(&self, n: usize, x: &Scalar) -> Result<Scalar> {
        Ok(self.p_values(n, x)?.pop().expect("nonempty"))
    }

    fn off_lattice(&self, x: &Scalar) -> Result<()> {
        let scale = 1f64.max(x.abs_f64());
        if self.rule.nodes.iter().any(|y| (x - y).abs_f64() <= self.tol * scale) {
            return Err(Error::OnSupportLattice(format!("{x:?}")));
        }
        Ok(())
    }

    /// Stieltjes function f(x) = ∫ w(y)/(x − y) d_qy.
    pub fn stieltjes(&self, x: &Scalar) -> Result<Scalar> {
        self.off_lattice(x)?;
        Ok(self.rule.integrate(|y| (x - y).recip()))
    }

    /// q_{−1}(x), q_0(x), …, q_n(x), seeded with q_{−1} = 1/(a₀γ₀), q₀ = γ₀f.
    pub fn q_values(&self, n: usize, x: &Scalar) -> Result<Vec<Scalar>> {
        self.check_index(n)?;
        let f = self.stieltjes(x)?;
        let qm = (&self.a[0] * &self.gamma[0]).recip();
        Ok(self.run_recurrence(n, x, qm, &self.gamma[0] * f))
    }

    pub fn eval_q(&self, n: usize, x: &Scalar) -> Result<Scalar> {
        Ok(self.q_values(n, x)?.pop().expect("nonempty"))
    }

    /// Y_n = [[p_n, q_n/w], [p_{n−1}, q_{n−1}/w]].
    pub fn y_matrix(&self, n: usize, x: &Scalar, p: &Params) -> Result<Mat2<Scalar>> {
        let w = weight_eval(x, &self.t, p)?;
        if w.abs_f64() <= self.tol {
            return Err(Error::WeightZero(format!("{x:?}")));
        }
        let ps = self.p_values(n, x)?;
        let qs = self.q_values(n, x)?;
        Ok(Mat2::new(
            ps[n + 1].clone(),
            &qs[n + 1] / &w,
            ps[n].clone(),
            &qs[n] / &w,
        ))
    }

    /// K_n(x) with Y_{n+1} = K_n Y_n.
    pub fn k_matrix(&self, n: usize, x: &Scalar) -> Result<Mat2<Scalar>> {
        self.check_index(n + 1)?;
        let prec = x.prec();
        let inv = self.a[n + 1].recip();
        Ok(Mat2::new(
            (x - &self.b[n]) * &inv,
            -(&self.a[n] * &inv),
            Scalar::one(prec),
            Scalar::zero(prec),
        ))
    }

    /// p_n as an explicit polynomial, by running the recurrence on polynomials.
    pub fn p_poly(&self, n: usize) -> Result<Poly> {
        self.check_index(n)?;
        let prec = self.t.prec();
        let x = Poly::x(prec);
        let mut prev = Poly::zero(prec);
        let mut cur = Poly::constant(self.gamma[0].clone());
        for k in 0..n {
            let shifted = &x - &Poly::constant(self.b[k].clone());
            let next = (&(&shifted * &cur) - &prev.scale(&self.a[k])).scale(&self.a[k + 1].recip());
            prev = cur;
            cur = next;
        }
        Ok(cur)
    }

    /// The two subleading coefficients of p_n/γ_n predicted by the recurrence
    /// data: −Σ_{i<n} b_i and Σ_{i<j<n} b_ib_j − Σ_{1≤i<n} a_i².
    pub fn p_expansion(&self, n: usize) -> Result<(Scalar, Scalar)> {
        self.check_index(n)?;
        let prec = self.t.prec();
        let bs = &self.b[..n];
        let s1 = Scalar::sum(bs, prec);
        let mut s2 = Scalar::zero(prec);
        for i in 0..n {
            for j in i + 1..n {
                s2 = s2 + &bs[i] * &bs[j];
            }
        }
        for a in &self.a[1..n.max(1)] {
            s2 = s2 - a.square();
        }
        Ok((-s1, s2))
    }

    /// a_n·w(x)·det Y_n(x), identically 1.
    pub fn casoratian(&self, n: usize, x: &Scalar, p: &Params) -> Result<Scalar> {
        let w = weight_eval(x, &self.t, p)?;
        Ok(&self.a[n] * w * self.y_matrix(n, x, p)?.det())
    }

    /// ∫ p_m p_n w d_qx.
    pub fn inner_product(&self, m: usize, n: usize) -> Result<Scalar> {
        let top = m.max(n);
        self.check_index(top)?;
        let prec = self.t.prec();
        let mut acc = Scalar::zero(prec);
        for (x, c) in self.rule.nodes.iter().zip(&self.rule.coeffs) {
            let ps = self.p_values(top, x)?;
            acc = acc + c * &ps[m + 1] * &ps[n + 1];
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rel_diff;

    fn setup() -> (Ctx, Params, OpsData) {
        let ctx = Ctx::default();
        let p = Params::default_instance(&ctx);
        let ops = OpsData::build(&p, &p.t, &ctx).unwrap();
        (ctx, p, ops)
    }

    #[test]
    fn first_recurrence_entries() {
        let (_, _, ops) = setup();
        let m = &ops.moments;
        assert!(rel_diff(&ops.b[0], &(&m[1] / &m[0])) < 1e-60);
        assert!(rel_diff(&ops.gamma[0], &m[0].recip().sqrt()) < 1e-60);
        assert!(ops.moment_tails.iter().all(|&t| t < 1e-38));
    }

    #[test]
    fn low_order_polynomials() {
        let (ctx, _, ops) = setup();
        let x = Scalar::from_parts_f64(0.3, 0.9, ctx.prec);
        assert_eq!(ops.eval_p(0, &x).unwrap(), ops.gamma[0]);
        let p1 = &ops.gamma[1] * (&x - &ops.b[0]);
        assert!(rel_diff(&ops.eval_p(1, &x).unwrap(), &p1) < 1e-60);
        assert!(matches!(ops.eval_p(99, &x), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn associated_function_seeds() {
        let (ctx, p, ops) = setup();
        let x = Scalar::from_parts_f64(0.3, 0.9, ctx.prec);
        let qs = ops.q_values(0, &x).unwrap();
        assert_eq!(qs[0], (&ops.a[0] * &ops.gamma[0]).recip());
        assert!(rel_diff(&qs[1], &(&ops.gamma[0] * ops.stieltjes(&x).unwrap())) < 1e-70);
        let y0 = ops.y_matrix(0, &x, &p).unwrap();
        assert!(y0.e21.is_zero());
    }

    #[test]
    fn lattice_points_rejected() {
        let (_, p, ops) = setup();
        let node = &p.b2.recip() * &p.q;
        assert!(matches!(ops.stieltjes(&node), Err(Error::OnSupportLattice(_))));
    }

    #[test]
    fn casoratian_is_one() {
        let (_, p, ops) = setup();
        let x = Scalar::from_parts_f64(0.9, 0.35, 256);
        for n in 1..=5 {
            assert!(rel_diff(&ops.casoratian(n, &x, &p).unwrap(), &Scalar::one(256)) < 1e-60, "n={n}");
        }
    }

    #[test]
    fn expansion_coefficients() {
        let (_, _, ops) = setup();
        for n in 2..=3 {
            let p = ops.p_poly(n).unwrap();
            let g = &ops.gamma[n];
            let (c1, c2) = ops.p_expansion(n).unwrap();
            assert!(rel_diff(&(p.coeff(n) / g), &Scalar::one(256)) < 1e-60);
            assert!(rel_diff(&(p.coeff(n - 1) / g), &c1) < 1e-60);
            assert!(rel_diff(&(p.coeff(n - 2) / g), &c2) < 1e-60);
        }
    }

    #[test]
    fn polynomial_form_matches_recurrence() {
        let (ctx, _, ops) = setup();
        let x = Scalar::from_parts_f64(-0.4, 0.7, ctx.prec);
        for n in 0..=4 {
            assert!(rel_diff(&ops.p_poly(n).unwrap().eval(&x), &ops.eval_p(n, &x).unwrap()) < 1e-60);
        }
    }
}
