//! Residuals of the structural identities satisfied by A*_n and B*_n. Each
//! function returns a relative residual; callers compare it to a tolerance.

use crate::algebra::{rel_diff, Mat2, Poly, Scalar};
use crate::error::{Error, Result};
use crate::ops::OpsData;
use crate::weight::{chi, spectral_data, Params};

use super::deform::DeformMatrix;
use super::spectral::SpectralMatrix;

/// |Σ terms| / max(1, max |term|).
pub fn balance(terms: &[Scalar]) -> f64 {
    let prec = terms.first().map_or(64, Scalar::prec);
    let sum = Scalar::sum(terms, prec);
    let scale = terms.iter().map(Scalar::abs_f64).fold(1.0, f64::max);
    sum.abs_f64() / scale
}

fn nonzero(v: Scalar, tol: f64, what: &'static str) -> Result<Scalar> {
    if v.abs_f64() <= tol {
        Err(Error::PoleHit(what))
    } else {
        Ok(v)
    }
}

/// det A* against W² − Δy²V² = (W + ΔyV)(W − ΔyV), coefficientwise.
pub fn astar_det_residual(a: &SpectralMatrix, p: &Params, t: &Scalar) -> f64 {
    a.det().max_coeff_diff(&spectral_data(p, t).det())
}

/// Worst deviation of the x³ diagonal coefficients from (κ₊, κ₋).
pub fn astar_leading_residual(a: &SpectralMatrix, p: &Params) -> f64 {
    rel_diff(&a.w_plus.coeff(3), &p.kappa_plus()).max(rel_diff(&a.w_minus.coeff(3), &p.kappa_minus()))
}

/// Largest constant term among 𝔗₊, 𝔗₋.
pub fn astar_offdiag_constant(a: &SpectralMatrix) -> f64 {
    a.t_plus.coeff(0).abs_f64().max(a.t_minus.coeff(0).abs_f64())
}

/// n = 0: 𝔚± = W ± ΔyV, 𝔗₋ = 0 and 𝔗₊ = −Δy a₀γ₀²U.
pub fn astar_n0_residual(a: &SpectralMatrix, u: &Poly, ops: &OpsData, p: &Params) -> f64 {
    let sd = spectral_data(p, &ops.t);
    let c = -((&p.q - 1) * &ops.a[0] * ops.gamma[0].square());
    let t_plus = u.mul_x().scale(&c);
    [
        a.w_plus.max_coeff_diff(&sd.w_plus),
        a.w_minus.max_coeff_diff(&sd.w_minus),
        a.t_plus.max_coeff_diff(&t_plus),
        a.t_minus.max_abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

/// ν² − (1 − q)²λ²μ² − b₆∏(b_jλ − 1)(λ − tb₆)(b₆λ − t).
pub fn quad_residual(lambda: &Scalar, nu: &Scalar, mu: &Scalar, p: &Params, t: &Scalar) -> f64 {
    let (q, b6) = (&p.q, &p.b6);
    let curve = b6 * p.prod_b(|b| b * lambda - 1) * (lambda - t * b6) * (b6 * lambda - t);
    balance(&[nu.square(), -((1 - q).square() * lambda.square() * mu.square()), -curve])
}

/// κ₊κ₋z₊z₋ against λ⁻²(W² − Δy²V²)(λ).
pub fn zpm_product_residual(lambda: &Scalar, z_plus: &Scalar, z_minus: &Scalar, p: &Params, t: &Scalar) -> f64 {
    let lhs = p.kappa_plus() * p.kappa_minus() * z_plus * z_minus;
    let rhs = spectral_data(p, t).det().eval(lambda) / lambda.square();
    rel_diff(&lhs, &rhs)
}

/// The coefficient functions W_n, Ω_n, Θ_n, Θ_{n−1} of one spectral matrix.
pub struct IndexCoefficients {
    pub w_n: Poly,
    pub omega_n: Poly,
    pub theta_n: Poly,
    pub theta_prev: Poly,
}

impl IndexCoefficients {
    pub fn new(a: &SpectralMatrix, a_n: &Scalar, p: &Params, t: &Scalar) -> Self {
        let sd = spectral_data(p, t);
        let half = Scalar::ratio(1, 2, p.prec());
        let w_n = (&a.two_wn_minus_w() + &sd.w()).scale(&half);
        let omega_n = &a.omega_plus_v(&p.q) - &sd.v();
        IndexCoefficients {
            w_n,
            omega_n,
            theta_n: a.theta(&p.q, a_n),
            theta_prev: a.theta_prev(&p.q, a_n),
        }
    }
}

fn quarter_dy2(p: &Params) -> Poly {
    let prec = p.prec();
    let c = (&p.q - 1).square() / 4;
    Poly::new(vec![Scalar::zero(prec), Scalar::zero(prec), c], prec)
}

/// Residuals of the three recurrences in n linking index n to n + 1:
/// W_{n+1} = W_n + ¼Δy²Θ_n, Ω_{n+1} + Ω_n + 2V = (𝕄x − b_n)Θ_n, and the
/// quadratic relation between W_n, W_{n+1}, Ω_n, Ω_{n+1}, Θ_{n−1}, Θ_n, Θ_{n+1}.
pub fn index_recurrence_residuals(
    cur: &IndexCoefficients,
    next: &IndexCoefficients,
    ops: &OpsData,
    n: usize,
    p: &Params,
) -> [f64; 3] {
    let prec = p.prec();
    let q4 = quarter_dy2(p);
    let v = spectral_data(p, &ops.t).v();
    let mx_minus_b = Poly::linear(-&ops.b[n], (&p.q + 1) / 2);

    let ra = next.w_n.max_coeff_diff(&(&cur.w_n + &(&q4 * &cur.theta_n)));

    let lhs_b = &(&next.omega_n + &cur.omega_n) + &v.scale(&Scalar::from_i64(2, prec));
    let rb = lhs_b.max_coeff_diff(&(&mx_minus_b * &cur.theta_n));

    let a_n2 = ops.a[n].square();
    let a_n1 = ops.a[n + 1].square();
    let cross = &(&cur.w_n * &next.omega_n) - &(&next.w_n * &cur.omega_n);
    let lhs_c = &cross * &mx_minus_b;
    let rhs_c = &(&(&(-&q4) * &(&next.omega_n * &cur.omega_n)) + &(&cur.w_n * &next.w_n))
        + &(&(&cur.w_n * &next.theta_n).scale(&a_n1) - &(&next.w_n * &cur.theta_prev).scale(&a_n2));
    let rc = lhs_c.max_coeff_diff(&rhs_c);
    [ra, rb, rc]
}

/// W_n(W_n − W) = −¼Δy² det[[Ω_n, −a_nΘ_n], [a_nΘ_{n−1}, −Ω_n − 2V]].
pub fn index_det_residual(c: &IndexCoefficients, a_n: &Scalar, p: &Params, t: &Scalar) -> f64 {
    let sd = spectral_data(p, t);
    let v2 = sd.v().scale(&Scalar::from_i64(2, p.prec()));
    let lhs = &c.w_n * &(&c.w_n - &sd.w());
    let det = &(&c.omega_n * &(-&(&c.omega_n + &v2))) + &(&c.theta_n * &c.theta_prev).scale(&a_n.square());
    lhs.max_coeff_diff(&(&(-quarter_dy2(p)) * &det))
}

/// Leading coefficients at x = ∞: [x³]W_n, [x]Θ_n, [x²](Ω_n + V).
pub fn expansion_residuals(a: &SpectralMatrix, a_n: &Scalar, p: &Params, t: &Scalar) -> [f64; 3] {
    let c = IndexCoefficients::new(a, a_n, p, t);
    let q = &p.q;
    let sd = spectral_data(p, t);
    let kp = sd.w_plus.coeff(3);
    let km = sd.w_minus.coeff(3);
    let qn = q.powi(p.n as i32);
    let qmn = q.powi(-(p.n as i32));
    let w3 = (&kp + &km) / 4 + &kp * &qn / 4 + &km * &qmn / 4;
    let th1 = &kp * &qn / (q - 1) - &km * &qmn / (q * (q - 1));
    let ov2 = (&kp * &qn - &km * &qmn) / (2 * (q - 1));
    [
        rel_diff(&c.w_n.coeff(3), &w3),
        rel_diff(&c.theta_n.coeff(1), &th1),
        rel_diff(&a.omega_plus_v(q).coeff(2), &ov2),
    ]
}

/// The scalar second-order equation for p_n at x, built from A*_n:
/// (w₊/𝔗₊)(x)p(qx) − [𝔚₊/𝔗₊(x) + 𝔚₋/𝔗₊(x/q)]p(x) + (w₋/𝔗₊)(x/q)p(x/q).
pub fn lsodde_residual(a: &SpectralMatrix, ops: &OpsData, p: &Params, x: &Scalar) -> Result<f64> {
    let q = &p.q;
    let n = p.n;
    let sd = spectral_data(p, &ops.t);
    let (qx, xq) = (q * x, x / q);
    let tp_x = nonzero(a.t_plus.eval(x), p.tol(), "T+ at x")?;
    let tp_xq = nonzero(a.t_plus.eval(&xq), p.tol(), "T+ at x/q")?;
    let terms = [
        sd.w_plus.eval(x) / &tp_x * ops.eval_p(n, &qx)?,
        -((a.w_plus.eval(x) / &tp_x + a.w_minus.eval(&xq) / &tp_xq) * ops.eval_p(n, x)?),
        sd.w_minus.eval(&xq) / &tp_xq * ops.eval_p(n, &xq)?,
    ];
    Ok(balance(&terms))
}

/// K_n(qx)C_n(x) = C_{n+1}(x)K_n(x) with C_n = A*_n/(W + ΔyV).
pub fn k_conjugation_residual(
    a_n: &SpectralMatrix,
    a_next: &SpectralMatrix,
    ops: &OpsData,
    n: usize,
    p: &Params,
    x: &Scalar,
) -> Result<f64> {
    let wp = nonzero(spectral_data(p, &ops.t).w_plus.eval(x), p.tol(), "W+ΔyV")?;
    let inv = wp.recip();
    let c_n = a_n.eval(x).scale(&inv);
    let c_next = a_next.eval(x).scale(&inv);
    let lhs = ops.k_matrix(n, &(&p.q * x))?.mul(&c_n);
    let rhs = c_next.mul(&ops.k_matrix(n, x)?);
    Ok(lhs.max_diff(&rhs))
}

/// det B* = (a_n/â_n)(R + ΔuS)(R − ΔuS), coefficientwise.
pub fn bstar_det_residual(b: &DeformMatrix, a_n: &Scalar, a_hat: &Scalar, p: &Params, t: &Scalar) -> f64 {
    let d = crate::weight::deformation_data(p, t);
    let rhs = (&d.r_plus * &d.r_minus).scale(&(a_n / a_hat));
    b.det().max_coeff_diff(&rhs)
}

/// p₊ = −â_n r₁,₋ + a_n r₁,₊ and p₋ = −a_n r₁,₋ + â_n r₁,₊.
pub fn bstar_offdiag_residuals(b: &DeformMatrix, a_n: &Scalar, a_hat: &Scalar) -> [f64; 2] {
    let (r1p, r1m) = (b.r1_plus(), b.r1_minus());
    [
        rel_diff(&b.p_plus, &(a_n * &r1p - a_hat * &r1m)),
        rel_diff(&b.p_minus, &(a_hat * &r1p - a_n * &r1m)),
    ]
}

/// 𝔓₋(n + 1) = (a_{n+1}/a_n)𝔓₊(n).
pub fn defm_offdiag_residual(b_n: &DeformMatrix, b_next: &DeformMatrix, a_n: &Scalar, a_next: &Scalar) -> f64 {
    rel_diff(&b_next.p_minus, &(a_next / a_n * &b_n.p_plus))
}

/// Worst entry residual of χB*(qx)A*(x; t) = A*(x; qt)B*(x) over `xs`.
pub fn verify_compatibility(
    a_t: &SpectralMatrix,
    a_qt: &SpectralMatrix,
    b: &DeformMatrix,
    p: &Params,
    t: &Scalar,
    xs: &[Scalar],
) -> Result<f64> {
    let mut worst = 0f64;
    for x in xs {
        let c = chi(x, t, p)?;
        let lhs = b.eval(&(&p.q * x)).mul(&a_t.eval(x)).scale(&c);
        let rhs = a_qt.eval(x).mul(&b.eval(x));
        worst = worst.max(entrywise_rel(&lhs, &rhs));
    }
    Ok(worst)
}

fn entrywise_rel(a: &Mat2<Scalar>, b: &Mat2<Scalar>) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| rel_diff(x, y))
        .fold(0.0, f64::max)
}

/// Residue relations at the zeros of the compatibility prefactor:
/// 𝕽₋(X) + (𝔚₊/𝔗₊)(qt; X)𝔓₊ = 0 for X ∈ {b₆qt, qt/b₆}, and
/// 𝕽₊(X) + (𝔚₋/𝔗₊)(t; X/q)𝔓₊ = 0 for the same X.
pub fn residue_residuals(a_t: &SpectralMatrix, a_qt: &SpectralMatrix, b: &DeformMatrix, p: &Params, t: &Scalar) -> Result<[f64; 4]> {
    let (q, b6) = (&p.q, &p.b6);
    let qt = q * t;
    let xs = [b6 * &qt, &qt / b6];
    let mut out = [0f64; 4];
    for (i, x) in xs.iter().enumerate() {
        let tp = nonzero(a_qt.t_plus.eval(x), p.tol(), "T+ at qt")?;
        out[i] = balance(&[b.r_minus.eval(x), a_qt.w_plus.eval(x) / tp * &b.p_plus]);
        let xs_ = x / q;
        let tp = nonzero(a_t.t_plus.eval(&xs_), p.tol(), "T+ at t")?;
        out[i + 2] = balance(&[b.r_plus.eval(x), a_t.w_minus.eval(&xs_) / tp * &b.p_plus]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laxpair::Family;
    use crate::sampling::Sampler;
    use crate::weight::compute_u;
    use crate::Ctx;

    const TOL: f64 = 1e-50;

    fn family() -> Family {
        let ctx = Ctx::default();
        Family::new(Params::default_instance(&ctx), ctx)
    }

    #[test]
    fn spectral_structure() {
        let fam = family();
        let ops = fam.ops(0).unwrap();
        for n in 0..=2 {
            let p = fam.params(n, 0).unwrap();
            let e = fam.extraction(n, 0).unwrap();
            assert!(astar_det_residual(&e.astar, &p, &p.t) < TOL);
            assert!(astar_leading_residual(&e.astar, &p) < TOL);
            assert!(astar_offdiag_constant(&e.astar) < TOL);
            assert!(quad_residual(&e.lambda, &e.nu, &e.mu, &p, &p.t) < TOL);
            assert!(zpm_product_residual(&e.lambda, &e.z_plus, &e.z_minus, &p, &p.t) < TOL);
            if n > 0 {
                let r = expansion_residuals(&e.astar, &ops.a[n], &p, &p.t);
                assert!(r.iter().all(|&v| v < TOL), "{r:?}");
            }
        }
    }

    #[test]
    fn n_zero_matrix() {
        let fam = family();
        let ops = fam.ops(0).unwrap();
        let p = fam.params(0, 0).unwrap();
        let e = fam.extraction(0, 0).unwrap();
        let xs = Sampler::new(3, p.prec()).points(4, 0.3, 1.0);
        let u = compute_u(&p, &ops, &xs, fam.ctx()).unwrap();
        assert!(astar_n0_residual(&e.astar, &u, &ops, &p) < TOL);
    }

    #[test]
    fn index_recurrences() {
        let fam = family();
        let ops = fam.ops(0).unwrap();
        let t = fam.time(0);
        let coeffs: Vec<_> = (0..=3)
            .map(|n| {
                let p = fam.params(n, 0).unwrap();
                let e = fam.extraction(n, 0).unwrap();
                (IndexCoefficients::new(&e.astar, &ops.a[n], &p, &t), e.astar)
            })
            .collect();
        for n in 0..=2 {
            let p = fam.params(n, 0).unwrap();
            let r = index_recurrence_residuals(&coeffs[n].0, &coeffs[n + 1].0, &ops, n, &p);
            assert!(r.iter().all(|&v| v < TOL), "n={n} {r:?}");
            assert!(index_det_residual(&coeffs[n].0, &ops.a[n], &p, &t) < TOL);
            let x = Scalar::from_parts_f64(0.8, -0.6, p.prec());
            assert!(k_conjugation_residual(&coeffs[n].1, &coeffs[n + 1].1, &ops, n, &p, &x).unwrap() < TOL);
        }
    }

    #[test]
    fn scalar_equation() {
        let fam = family();
        let ops = fam.ops(0).unwrap();
        let p = fam.params(1, 0).unwrap();
        let e = fam.extraction(1, 0).unwrap();
        for x in Sampler::new(11, p.prec()).points(5, 0.3, 1.5) {
            assert!(lsodde_residual(&e.astar, &ops, &p, &x).unwrap() < TOL);
        }
    }

    #[test]
    fn deformation_structure() {
        let fam = family();
        let (ops, ops_hat) = (fam.ops(0).unwrap(), fam.ops(1).unwrap());
        let mut bs = Vec::new();
        for n in 1..=3 {
            let p = fam.params(n, 0).unwrap();
            let b = fam.bstar(n, 0).unwrap().matrix;
            assert!(bstar_det_residual(&b, &ops.a[n], &ops_hat.a[n], &p, &p.t) < TOL);
            let r = bstar_offdiag_residuals(&b, &ops.a[n], &ops_hat.a[n]);
            assert!(r.iter().all(|&v| v < TOL));
            let r1m = &p.b6 * &ops.gamma[n - 1] / &ops_hat.gamma[n - 1];
            assert!(rel_diff(&b.r1_minus(), &r1m) < TOL);
            bs.push(b);
        }
        for (i, n) in (1..=2).enumerate() {
            assert!(defm_offdiag_residual(&bs[i], &bs[i + 1], &ops.a[n], &ops.a[n + 1]) < TOL);
        }
    }

    #[test]
    fn compatibility_and_residues() {
        let fam = family();
        let p = fam.params(1, 0).unwrap();
        let a_t = fam.extraction(1, 0).unwrap().astar;
        let a_qt = fam.extraction(1, 1).unwrap().astar;
        let b = fam.bstar(1, 0).unwrap().matrix;
        let xs = Sampler::new(5, p.prec()).points(8, 0.3, 2.0);
        assert!(verify_compatibility(&a_t, &a_qt, &b, &p, &p.t, &xs).unwrap() < TOL);
        let r = residue_residuals(&a_t, &a_qt, &b, &p, &p.t).unwrap();
        assert!(r.iter().all(|&v| v < TOL), "{r:?}");
    }

    #[test]
    fn compatibility_detects_wrong_time() {
        let fam = family();
        let p = fam.params(1, 0).unwrap();
        let a_t = fam.extraction(1, 0).unwrap().astar;
        let a_q2t = fam.extraction(1, 2).unwrap().astar;
        let b = fam.bstar(1, 0).unwrap().matrix;
        let xs = Sampler::new(5, p.prec()).points(3, 0.3, 2.0);
        assert!(verify_compatibility(&a_t, &a_q2t, &b, &p, &p.t, &xs).unwrap() > 1e-6);
    }

    #[test]
    fn balance_scale() {
        let s = |v| Scalar::from_f64(v, 64);
        assert_eq!(balance(&[s(3.0), s(-3.0)]), 0.0);
        assert!((balance(&[s(4.0), s(-2.0)]) - 0.5).abs() < 1e-15);
    }
}
