//! Sakai's form of the E6(1) Lax pair: the cubic spectral matrix in the
//! variables (λ, z₁, z₂, w), its deformation partner, the gauge and inversion
//! that carry Sakai's own normalisation onto A*, and Sakai's evolution equations.

use crate::algebra::{rel_diff, Mat2, Poly, Scalar};
use crate::error::{Error, Result};
use crate::laxpair::identities::balance;
use crate::laxpair::{DeformMatrix, Extraction};
use crate::weight::{spectral_data, Params};

fn nonzero(v: Scalar, p: &Params, what: &'static str) -> Result<Scalar> {
    if v.abs_f64() <= p.tol() * 1e6 {
        Err(Error::ExcludedValue(what))
    } else {
        Ok(v)
    }
}

fn elementary(vals: &[Scalar], prec: u32) -> Vec<Scalar> {
    let mut e = vec![Scalar::one(prec)];
    for v in vals {
        let mut next = e.clone();
        next.push(Scalar::zero(prec));
        for k in 1..next.len() {
            next[k] = &next[k] + v * &e[k - 1];
        }
        e = next;
    }
    e
}

/// Spectral matrix with A₀ = b₆t·𝟙, A₃ = diag(κ₊, κ₋), (1,2) entry vanishing
/// at 0 and λ, and the prescribed determinant.
#[derive(Clone, Debug)]
pub struct SakaiMatrix {
    pub entries: Mat2<Poly>,
    pub lambda: Scalar,
    pub z1: Scalar,
    pub z2: Scalar,
    pub w: Scalar,
    pub alpha: Scalar,
    pub beta: Scalar,
    pub gamma: Scalar,
    pub delta: Scalar,
}

/// z₁ = z₊ + t/(b₅λ), z₂ = z₋ + tb₅/λ, then α, β, γ, δ from the structural properties.
pub fn sakai_build(lambda: &Scalar, z_plus: &Scalar, z_minus: &Scalar, w: &Scalar, p: &Params, t: &Scalar) -> Result<SakaiMatrix> {
    let prec = p.prec();
    let (b5, b6) = (&p.b5, &p.b6);
    let lambda = nonzero(lambda.clone(), p, "lambda = 0")?;
    let d = nonzero(1 - b5.square(), p, "b5^2 = 1")?;
    let w = nonzero(w.clone(), p, "w = 0")?;
    let b5sq = b5.square();
    let s1 = p.sum_inv_b();
    let s = p.sum_b();
    let e2 = elementary(&p.bs().map(Clone::clone), prec)[2].clone();
    let cb = b6.recip() + b6;
    let z1 = z_plus + t / (b5 * &lambda);
    let z2 = z_minus + t * b5 / &lambda;
    let shared = &s * b5 * t / &lambda + b5 * &cb / &lambda - &b5sq * &z1 / &lambda - &z2 / &lambda;
    let alpha = (&s1 + &cb * t - &shared - 2 * &lambda) / &d;
    let beta = (-(&s1 * &b5sq) - &cb * &b5sq * t + &shared + 2 * &b5sq * &lambda) / &d;
    let gamma = -&e2 - &s1 * &cb * t - t.square() + &alpha * &beta + &z1 + &z2 + 2 * (&alpha + &beta) * &lambda
        + lambda.square();
    let delta = &s + (&e2 * &cb - (b5.recip() + b5)) * t + &s1 * t.square() - &z1 * (&beta + &lambda)
        - &z2 * (&alpha + &lambda)
        + (-(2 * &alpha * &beta) + &gamma) * &lambda
        - (&alpha + &beta) * lambda.square();

    let x = Poly::x(prec);
    let xl = Poly::from_roots(&Scalar::one(prec), &[Scalar::zero(prec), lambda.clone()]);
    let quad = |root: &Scalar, z: &Scalar| {
        Poly::from_roots(&Scalar::one(prec), &[root.clone(), lambda.clone()]) + Poly::constant(z.clone())
    };
    let b6t = Poly::constant(b6 * t);
    let e11 = &b6t - &(&x * &quad(&alpha, &z1)).scale(&(b5 * b6));
    let e12 = xl.scale(&(-(b6 * &w) / b5));
    let e21 = (&x * &Poly::linear(delta.clone(), gamma.clone())).scale(&(-(b5 * b6) / &w));
    let e22 = &b6t - &(&x * &quad(&beta, &z2)).scale(&(b6 / b5));
    Ok(SakaiMatrix {
        entries: Mat2::new(e11, e12, e21, e22),
        lambda,
        z1,
        z2,
        w,
        alpha,
        beta,
        gamma,
        delta,
    })
}

impl SakaiMatrix {
    /// Residuals of the five defining properties: determinant, top coefficient,
    /// constant coefficient, the (1,2) root at λ, and triangularity at λ with
    /// diagonal (−b₅b₆λz₊, −b₆λz₋/b₅).
    pub fn property_residuals(&self, z_plus: &Scalar, z_minus: &Scalar, p: &Params, t: &Scalar) -> [f64; 5] {
        let (b5, b6) = (&p.b5, &p.b6);
        let m = &self.entries;
        let det = m.det().max_coeff_diff(&spectral_data(p, t).det());
        let top = rel_diff(&m.e11.coeff(3), &p.kappa_plus())
            .max(rel_diff(&m.e22.coeff(3), &p.kappa_minus()))
            .max(m.e12.coeff(3).abs_f64())
            .max(m.e21.coeff(3).abs_f64());
        let b6t = b6 * t;
        let bottom = rel_diff(&m.e11.coeff(0), &b6t)
            .max(rel_diff(&m.e22.coeff(0), &b6t))
            .max(m.e12.coeff(0).abs_f64())
            .max(m.e21.coeff(0).abs_f64());
        let at = m.eval(&self.lambda);
        let root = at.e12.abs_f64() / 1f64.max(at.max_abs());
        let l = &self.lambda;
        let tri = rel_diff(&at.e11, &(-(b5 * b6 * l * z_plus))).max(rel_diff(&at.e22, &(-(b6 * l * z_minus) / b5)));
        [det, top, bottom, root, tri]
    }
}

/// ŵ = (1 − qb₅²)â_n(r₁,₋/r₁,₊)/q: the Sakai w at qt in the gauge that
/// makes B̃ = x(x𝟙 + B₀)/((x − b₆qt)(x − qt/b₆)).
pub fn sakai_w(a_n: &Scalar, p: &Params) -> Scalar {
    (1 - &p.q * p.b5.square()) * a_n / &p.q
}

/// The three routes to the (1,2) entry of B₀: from ŵ − w, from the data at t,
/// and from the data at qt.
pub fn r12_routes(now: &SakaiMatrix, next: &SakaiMatrix, p: &Params, t: &Scalar) -> [Scalar; 3] {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let qt = q * t;
    let (w, wh) = (&now.w, &next.w);
    let (l, lh) = (&now.lambda, &next.lambda);
    let via_w = q * (wh - w) / (1 - q * b5.square());
    let a = b6 * t - l;
    let b = t - b6 * l;
    let via_t = -(q * t * w * &a * &b) / (t * b5 - t * b6 * &now.z2 + b5 * b6 * &a + t * &a * &b);
    let ah = &qt * b6 - lh;
    let bh = &qt - b6 * lh;
    let via_qt = -(q * t * wh * &ah * &bh)
        / (b5 * (&qt * (1 - b5 * b6 * &next.z1) + &ah * (b6 + &qt * b5 * &bh)));
    [via_w, via_t, via_qt]
}

/// The (2,2) entry of B₀ from the data at qt.
pub fn r22(next: &SakaiMatrix, p: &Params, t: &Scalar) -> Scalar {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let qt = q * t;
    let lh = &next.lambda;
    let cb = (1 + b6.square()) / b6;
    let ah = b6 * &qt - lh;
    let bh = &qt - b6 * lh;
    let num = &ah * &bh * (b6 + qt.square() * b5 * (1 + b6.square()) - b5 * b6 * &qt * (&next.alpha + lh));
    let den = b6.square() * (lh - b6 * &qt) - b6 * &qt + b5 * b6.square() * &qt * &next.z1 - b5 * b6 * &qt * &ah * &bh;
    lh - &qt * cb - num / den
}

/// (qx𝟙 + B₀)A(x)(x − b₆qt)(x − qt/b₆) − qÂ(x)(x𝟙 + B₀)(x − b₆t)(x − t/b₆),
/// the compatibility relation with denominators and the common factor x
/// cleared. Its x⁶ coefficient is free of B₀.
pub fn cleared_compatibility(a: &Mat2<Poly>, a_hat: &Mat2<Poly>, b0: &Mat2<Scalar>, p: &Params, t: &Scalar) -> Mat2<Poly> {
    let prec = p.prec();
    let (q, b6) = (&p.q, &p.b6);
    let one = Scalar::one(prec);
    let qt = q * t;
    let d1 = Poly::from_roots(&one, &[b6 * &qt, &qt / b6]);
    let d0 = Poly::from_roots(&one, &[b6 * t, t / b6]);
    let shifted = |c: &Scalar| -> Mat2<Poly> {
        Mat2::new(
            Poly::linear(b0.e11.clone(), c.clone()),
            Poly::constant(b0.e12.clone()),
            Poly::constant(b0.e21.clone()),
            Poly::linear(b0.e22.clone(), c.clone()),
        )
    };
    let lhs = shifted(q).mul(a).map(|e| e * &d1);
    let rhs = a_hat.mul(&shifted(&one)).map(|e| (e * &d0).scale(q));
    lhs.sub(&rhs)
}

/// r₁₁ and r₂₁ from the x⁵ coefficients of the (1,1) and (2,1) entries of
/// [`cleared_compatibility`] (x⁶ before the factor x is removed), given r₁₂
/// and r₂₂. The system is affine, so three probes fix it.
pub fn solve_r11_r21(a: &Mat2<Poly>, a_hat: &Mat2<Poly>, r12: &Scalar, r22: &Scalar, p: &Params, t: &Scalar) -> Result<(Scalar, Scalar)> {
    let prec = p.prec();
    let (zero, one) = (Scalar::zero(prec), Scalar::one(prec));
    let probe = |r11: &Scalar, r21: &Scalar| {
        let b0 = Mat2::new(r11.clone(), r12.clone(), r21.clone(), r22.clone());
        let e = cleared_compatibility(a, a_hat, &b0, p, t);
        (e.e11.coeff(5), e.e21.coeff(5))
    };
    let (c0, d0) = probe(&zero, &zero);
    let (c1, d1) = probe(&one, &zero);
    let (c2, d2) = probe(&zero, &one);
    let m = Mat2::new(c1 - &c0, c2 - &c0, d1 - &d0, d2 - &d0);
    let inv = m.inv(p.tol()).map_err(|_| Error::SingularConfiguration("B0 coefficient system"))?;
    let r11 = -(&inv.e11 * &c0 + &inv.e12 * &d0);
    let r21 = -(&inv.e21 * &c0 + &inv.e22 * &d0);
    Ok((r11, r21))
}

/// B̃(x) = x(x𝟙 + B₀)/((x − b₆qt)(x − qt/b₆)).
pub fn btilde(b0: &Mat2<Scalar>, x: &Scalar, p: &Params, t: &Scalar) -> Result<Mat2<Scalar>> {
    let (q, b6) = (&p.q, &p.b6);
    let qt = q * t;
    let den = (x - b6 * &qt) * (x - &qt / b6);
    if den.abs_f64() <= p.tol() * 1f64.max(x.abs_f64()).powi(2) {
        return Err(Error::PoleHit("B tilde"));
    }
    let shifted = Mat2::new(x + &b0.e11, b0.e12.clone(), b0.e21.clone(), x + &b0.e22);
    Ok(shifted.scale(&(x / den)))
}

/// Worst entry residual of B̃(qx)Ã(x; t) = Ã(x; qt)B̃(x) over `xs`.
pub fn sakai_compat_residual(a: &Mat2<Poly>, a_hat: &Mat2<Poly>, b0: &Mat2<Scalar>, p: &Params, t: &Scalar, xs: &[Scalar]) -> Result<f64> {
    let mut worst = 0f64;
    for x in xs {
        let lhs = btilde(b0, &(&p.q * x), p, t)?.mul(&a.eval(x));
        let rhs = a_hat.eval(x).mul(&btilde(b0, x, p, t)?);
        worst = worst.max(lhs.max_diff(&rhs));
    }
    Ok(worst)
}

/// Everything needed to confront the Sakai deformation with the numeric data
/// at one (n, t).
#[derive(Clone, Debug)]
pub struct SakaiCompat {
    pub now: SakaiMatrix,
    pub next: SakaiMatrix,
    pub r12: [Scalar; 3],
    pub r22: Scalar,
    pub b0: Mat2<Scalar>,
    /// B₀ read off the numeric B*: [[r₀,₊/r₁,₊, −𝔓₊/r₁,₊], [𝔓₋/r₁,₋, r₀,₋/r₁,₋]].
    pub b0_numeric: Mat2<Scalar>,
}

pub fn sakai_compat(now: &Extraction, next: &Extraction, b: &DeformMatrix, a_n: &Scalar, a_hat: &Scalar, p: &Params) -> Result<SakaiCompat> {
    let t = &p.t;
    let qt = &p.q * t;
    let (r1p, r1m) = (b.r1_plus(), b.r1_minus());
    let w = sakai_w(a_n, p);
    let wh = sakai_w(a_hat, p) * &r1m / &r1p;
    let s_now = sakai_build(&now.lambda, &now.z_plus, &now.z_minus, &w, p, t)?;
    let s_next = sakai_build(&next.lambda, &next.z_plus, &next.z_minus, &wh, p, &qt)?;
    let r12 = r12_routes(&s_now, &s_next, p, t);
    let r22 = r22(&s_next, p, t);
    let (r11, r21) = solve_r11_r21(&s_now.entries, &s_next.entries, &r12[0], &r22, p, t)?;
    let b0 = Mat2::new(r11, r12[0].clone(), r21, r22.clone());
    let b0_numeric = Mat2::new(
        b.r_plus.coeff(0) / &r1p,
        -(&b.p_plus / &r1p),
        &b.p_minus / &r1m,
        b.r_minus.coeff(0) / &r1m,
    );
    Ok(SakaiCompat { now: s_now, next: s_next, r12, r22, b0, b0_numeric })
}

/// Gap between the qt-data route to r₁₂ and the t-data route when the qt data
/// is rebuilt from a trial f: ẑ₊ = (fĝ − 1)(ĝ − b₆qt)(b₆ĝ − qt)/(qb₅b₆tĝ).
pub fn r12_gap_for_f(f: &Scalar, compat: &SakaiCompat, p: &Params) -> Result<f64> {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let t = &p.t;
    let qt = q * t;
    let gh = &compat.next.lambda;
    let zp_hat = (f * gh - 1) * (gh - b6 * &qt) * (b6 * gh - &qt) / (q * b5 * b6 * t * gh);
    let zm_hat = &compat.next.z2 - &qt * b5 / gh;
    let trial = sakai_build(gh, &zp_hat, &zm_hat, &compat.next.w, p, &qt)?;
    let routes = r12_routes(&compat.now, &trial, p, t);
    Ok(rel_diff(&routes[1], &routes[2]))
}

/// Sakai's parameters and variables obtained from ours: q_S = 1/q, s = 1/t,
/// κ₁ = b₆, θ₁ = −b₅b₆, θ₂ = −q_S b₆/b₅, a = (b₁, …, b₄, s/b₆, sb₆).
#[derive(Clone, Debug)]
pub struct SakaiDictionary {
    pub q_s: Scalar,
    pub s: Scalar,
    pub kappa1: Scalar,
    pub theta1: Scalar,
    pub theta2: Scalar,
    /// Roots a₁..a₄, a₅s, a₆s of the determinant.
    pub roots: [Scalar; 6],
    pub lambda: Scalar,
    pub mu1: Scalar,
    pub mu2: Scalar,
    pub w: Scalar,
}

/// λ_S = 1/g, μ₁ = −b₅z₊/(g²t), μ₂ = −z₋/(b₅g²t), w_S = g(1 − qb₅²)a_n/(b₅t).
pub fn sakai_dictionary(g: &Scalar, z_plus: &Scalar, z_minus: &Scalar, a_n: &Scalar, p: &Params, t: &Scalar) -> SakaiDictionary {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let q_s = q.recip();
    let s = t.recip();
    let g2t = g.square() * t;
    SakaiDictionary {
        theta1: -(b5 * b6),
        theta2: -(&q_s * b6 / b5),
        kappa1: b6.clone(),
        roots: [p.b1.clone(), p.b2.clone(), p.b3.clone(), p.b4.clone(), &s / b6, &s * b6],
        lambda: g.recip(),
        mu1: -(b5 * z_plus / &g2t),
        mu2: -(z_minus / (b5 * &g2t)),
        w: g * (1 - q * b5.square()) * a_n / (b5 * t),
        q_s,
        s,
    }
}

impl SakaiDictionary {
    fn e(&self) -> Vec<Scalar> {
        elementary(&self.roots, self.s.prec())
    }

    fn kappa2(&self) -> Scalar {
        &self.q_s * &self.kappa1
    }

    /// κ₁²∏(y − roots).
    pub fn det_target(&self) -> Poly {
        Poly::from_roots(&self.kappa1.square(), &self.roots)
    }

    /// ν₁ = (κ₁μ₁ − θ₁s)/(κ₁λ), ν₂ = (q_Sκ₁μ₂ − θ₂s)/(q_Sκ₁λ).
    pub fn nus(&self) -> (Scalar, Scalar) {
        let (k1, l, s) = (&self.kappa1, &self.lambda, &self.s);
        let nu1 = (k1 * &self.mu1 - &self.theta1 * s) / (k1 * l);
        let nu2 = (self.kappa2() * &self.mu2 - &self.theta2 * s) / (self.kappa2() * l);
        (nu1, nu2)
    }
}

/// Sakai's spectral matrix after the gauge 𝒮: A₃ = κ₁𝟙, A₀ = diag(θ₁s, θ₂s/q_S).
pub fn cal_a(d: &SakaiDictionary) -> Result<Mat2<Poly>> {
    let prec = d.s.prec();
    let (qs, k1, th1, th2, l, s, w) = (&d.q_s, &d.kappa1, &d.theta1, &d.theta2, &d.lambda, &d.s, &d.w);
    let e = d.e();
    let (nu1, nu2) = d.nus();
    let den = qs * th1 - th2;
    if den.abs_f64() <= 1e-20 {
        return Err(Error::ExcludedValue("q theta1 = theta2"));
    }
    let br = th2 * &nu1 + qs * th1 * &nu2 + qs * k1 * &e[5] / s;
    let fa = (&br / l + qs * th1 * &e[1] - 2 * qs * th1 * l) / &den;
    let fb = (-(&br / l) - th2 * &e[1] + 2 * th2 * l) / &den;
    let fc = (&fa * &fb + 2 * (&fa + &fb) * l + l.square() - &e[2] + &nu1 + &nu2) / qs;
    let fd = (-((&fa + &fb) * l.square()) - 2 * &fa * &fb * l - &fa * &nu2 - &fb * &nu1 + (qs * &fc - &nu1 - &nu2) * l
        + &e[3]
        + (qs * th1 + th2) / (qs * k1) * s)
        / qs;
    let one = Scalar::one(prec);
    let zero = Scalar::zero(prec);
    let y = Poly::x(prec);
    let yl = Poly::from_roots(&one, &[zero.clone(), l.clone()]);
    let diag = |root: &Scalar, nu: &Scalar| &y * &(Poly::from_roots(&one, &[l.clone(), root.clone()]) + Poly::constant(nu.clone()));
    let e11 = &Poly::constant(th1 * s) + &diag(&fa, &nu1).scale(k1);
    let e12 = yl.scale(&(qs * k1 * w));
    let e21 = (&y * &Poly::linear(fd, fc)).scale(&(k1 / w));
    let e22 = &Poly::constant(th2 * s / qs) + &diag(&fb, &nu2).scale(k1);
    Ok(Mat2::new(e11, e12, e21, e22))
}

/// The five properties of 𝒜: determinant, A₃ = κ₁𝟙, A₀ = diag(θ₁s, θ₂s/q_S),
/// (1,2) roots {0, λ}, and 𝒜(λ) lower triangular with diagonal (κ₁μ₁, κ₁μ₂).
pub fn cal_a_property_residuals(m: &Mat2<Poly>, d: &SakaiDictionary) -> [f64; 5] {
    let (k1, s) = (&d.kappa1, &d.s);
    let det = m.det().max_coeff_diff(&d.det_target());
    let top = rel_diff(&m.e11.coeff(3), k1)
        .max(rel_diff(&m.e22.coeff(3), k1))
        .max(m.e12.coeff(3).abs_f64())
        .max(m.e21.coeff(3).abs_f64());
    let bottom = rel_diff(&m.e11.coeff(0), &(&d.theta1 * s))
        .max(rel_diff(&m.e22.coeff(0), &(&d.theta2 * s / &d.q_s)))
        .max(m.e12.coeff(0).abs_f64())
        .max(m.e21.coeff(0).abs_f64());
    let at = m.eval(&d.lambda);
    let root = at.e12.abs_f64() / 1f64.max(at.max_abs());
    let tri = rel_diff(&at.e11, &(k1 * &d.mu1)).max(rel_diff(&at.e22, &(k1 * &d.mu2)));
    [det, top, bottom, root, tri]
}

/// 𝔄(x) = t·x³·𝒜(1/x), with t = 1/s.
pub fn frak_transform(cal: &Mat2<Poly>, d: &SakaiDictionary) -> Mat2<Poly> {
    let t = d.s.recip();
    cal.map(|e| e.reverse(3).scale(&t))
}

/// The five properties of 𝔄: determinant κ₁²∏(1 − a_jx)(t − a₅x)(t − a₆x),
/// 𝔄(0) = κ₁t𝟙, top coefficient diag(θ₁, θ₂/q_S), (1,2) roots {0, 1/λ}, and
/// 𝔄(1/λ) lower triangular with diagonal κ₁μ_j tλ⁻³.
pub fn frak_property_residuals(m: &Mat2<Poly>, d: &SakaiDictionary) -> [f64; 5] {
    let prec = d.s.prec();
    let (k1, l) = (&d.kappa1, &d.lambda);
    let t = d.s.recip();
    let one = Scalar::one(prec);
    let mut target = Poly::constant(k1.square());
    for a in &d.roots[..4] {
        target = &target * &Poly::linear(one.clone(), -a);
    }
    let (a5, a6) = (&d.roots[4] * &t, &d.roots[5] * &t);
    target = &(&target * &Poly::linear(t.clone(), -a5)) * &Poly::linear(t.clone(), -a6);
    let det = m.det().max_coeff_diff(&target);
    let kt = k1 * &t;
    let bottom = rel_diff(&m.e11.coeff(0), &kt)
        .max(rel_diff(&m.e22.coeff(0), &kt))
        .max(m.e12.coeff(0).abs_f64())
        .max(m.e21.coeff(0).abs_f64());
    let top = rel_diff(&m.e11.coeff(3), &d.theta1).max(rel_diff(&m.e22.coeff(3), &(&d.theta2 / &d.q_s)));
    let x = l.recip();
    let at = m.eval(&x);
    let root = at.e12.abs_f64() / 1f64.max(at.max_abs());
    let scale = &t / l.powi(3);
    let tri = rel_diff(&at.e11, &(k1 * &d.mu1 * &scale)).max(rel_diff(&at.e22, &(k1 * &d.mu2 * &scale)));
    [det, bottom, top, root, tri]
}

/// Sakai's original matrix with the free parameter γ and the gauge 𝒮(x) =
/// [[1, 0], [s₁ + s₂x, x]] that brings it to 𝒜.
pub struct SakaiOriginal {
    pub matrix: Mat2<Poly>,
    pub s1: Scalar,
    pub s2: Scalar,
    /// Remainder of the exact division defining the (2,1) entry.
    pub division_remainder: f64,
}

pub fn sakai_original(d: &SakaiDictionary, gamma: &Scalar) -> Result<SakaiOriginal> {
    let prec = d.s.prec();
    let (qs, k1, th1, th2, l, s, w) = (&d.q_s, &d.kappa1, &d.theta1, &d.theta2, &d.lambda, &d.s, &d.w);
    let k2 = d.kappa2();
    let e = d.e();
    let kd = k1 - &k2;
    if kd.abs_f64() <= 1e-20 {
        return Err(Error::ExcludedValue("kappa1 = kappa2"));
    }
    let lead = (k1 * &d.mu1 + &k2 * &d.mu2 - th1 * s - th2 * s) / l;
    let quad = gamma * (gamma + &e[1]) + 2 * l.square() - l * &e[1] + &e[2];
    let d1 = (&lead - &k2 * &quad) / &kd;
    let d2 = (-&lead + k1 * &quad) / &kd;
    let one = Scalar::one(prec);
    let ll = Poly::linear(-l, one.clone());
    let cubic = |dk: &Scalar, lin: Scalar| Poly::new(vec![dk.clone(), lin, one.clone()], prec);
    let z = &Poly::constant(d.mu2.clone()) + &(&ll * &cubic(&d2, gamma + l));
    let wp = &Poly::constant(d.mu1.clone()) + &(&ll * &cubic(&d1, -gamma - &e[1] + l));
    let prod = Poly::from_roots(&one, &d.roots);
    let (x_entry, rem) = (&(&wp * &z) - &prod).div_linear(l);
    let matrix = Mat2::new(wp.scale(k1), ll.scale(&(&k2 * w)), x_entry.scale(&(k1 / w)), z.scale(&k2));
    let s1 = ((th2 - th1) * s + k1 * (&d.mu1 - qs * &d.mu2 + (qs * &d2 - &d1) * l)) / (2 * qs * k1 * w * l);
    let s2 = ((2 * th1 * th2 / k1 * s - qs * th1 * &d.mu2 - th2 * &d.mu1) / l.square() - qs * k1 * &e[5] / s / l - &e[1] * th2
        + (qs * th1 - th2) * gamma
        + (qs * th1 + th2) * l)
        / (qs * (qs * th1 - th2) * w);
    Ok(SakaiOriginal { matrix, s1, s2, division_remainder: rem.abs_f64() })
}

/// Worst residual of 𝒮(q_Sx)⁻¹A(x)𝒮(x) = 𝒜(x) over `xs`.
pub fn sakai_gauge_residual(orig: &SakaiOriginal, cal: &Mat2<Poly>, d: &SakaiDictionary, xs: &[Scalar]) -> Result<f64> {
    let prec = d.s.prec();
    let gauge = |x: &Scalar| {
        Mat2::new(Scalar::one(prec), Scalar::zero(prec), &orig.s1 + &orig.s2 * x, x.clone())
    };
    let mut worst = 0f64;
    for x in xs {
        let inv = gauge(&(&d.q_s * x)).inv(1e-30)?;
        let lhs = inv.mul(&orig.matrix.eval(x)).mul(&gauge(x));
        worst = worst.max(lhs.max_diff(&cal.eval(x)));
    }
    Ok(worst)
}

/// Residuals of Sakai's two evolution equations,
/// (λ − ν̌)(λ − ν) = ∏_{j≤4}(λ − a_j)/((λ − a₅s)(λ − a₆s)) and
/// (1 − ν/λ̂)(1 − ν/λ) = (a₅a₆/q_S)∏(ν − a_j)/((a₅a₆sν + θ₁/(q_Sκ₁))(a₅a₆sν + θ₂/(q_Sκ₁))).
pub fn sakai_evolution_residual(lambda: &Scalar, nu: &Scalar, lambda_hat: &Scalar, nu_check: &Scalar, d: &SakaiDictionary) -> Result<[f64; 2]> {
    let prec = d.s.prec();
    let (qs, s, k1) = (&d.q_s, &d.s, &d.kappa1);
    let a5 = &d.roots[4] / s;
    let a6 = &d.roots[5] / s;
    let tol = 1e-40;
    let den1 = (lambda - &d.roots[4]) * (lambda - &d.roots[5]);
    if den1.abs_f64() <= tol {
        return Err(Error::DenominatorZero("lambda = a5 s or a6 s"));
    }
    let num1 = d.roots[..4].iter().fold(Scalar::one(prec), |acc, a| acc * (lambda - a));
    let r1 = balance(&[(lambda - nu_check) * (lambda - nu), -(num1 / den1)]);
    let a56 = &a5 * &a6;
    let den2 = (&a56 * s * nu + &d.theta1 / (qs * k1)) * (&a56 * s * nu + &d.theta2 / (qs * k1));
    if den2.abs_f64() <= tol {
        return Err(Error::DenominatorZero("Sakai second equation"));
    }
    let num2 = d.roots[..4].iter().fold(Scalar::one(prec), |acc, a| acc * (nu - a));
    let r2 = balance(&[(1 - nu / lambda_hat) * (1 - nu / lambda), -(&a56 / qs * num2 / den2)]);
    Ok([r1, r2])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ctx::Ctx;
    use crate::laxpair::Family;

    fn family() -> Family {
        let ctx = Ctx::default();
        Family::new(Params::default_instance(&ctx), ctx)
    }

    fn nodes(prec: u32) -> Vec<Scalar> {
        (0..5).map(|j| Scalar::from_parts_f64(0.3 + 0.41 * j as f64, 0.2 - 0.13 * j as f64, prec)).collect()
    }

    struct Setup {
        p: Params,
        compat: SakaiCompat,
    }

    fn setup(fam: &Family, n: usize) -> Setup {
        let p = fam.params(n, 0).unwrap();
        let now = fam.extraction(n, 0).unwrap();
        let next = fam.extraction(n, 1).unwrap();
        let b = fam.bstar(n, 0).unwrap().matrix;
        let a_n = fam.ops(0).unwrap().a[n].clone();
        let a_hat = fam.ops(1).unwrap().a[n].clone();
        let compat = sakai_compat(&now, &next, &b, &a_n, &a_hat, &p).unwrap();
        Setup { p, compat }
    }

    #[test]
    fn sakai_matrix_properties() {
        let fam = family();
        let tol = 1e-50;
        for n in 1..=2 {
            let p = fam.params(n, 0).unwrap();
            let e = fam.extraction(n, 0).unwrap();
            let w = sakai_w(&fam.ops(0).unwrap().a[n], &p);
            let m = sakai_build(&e.lambda, &e.z_plus, &e.z_minus, &w, &p, &p.t).unwrap();
            for (k, r) in m.property_residuals(&e.z_plus, &e.z_minus, &p, &p.t).iter().enumerate() {
                assert!(*r < tol, "n={n} property {k}: {r:e}");
            }
            assert!(m.entries.max_coeff_diff(&e.astar.as_mat()) < tol, "n={n}");
        }
    }

    #[test]
    fn deformation_routes_agree() {
        let fam = family();
        let tol = 1e-50;
        for n in 1..=2 {
            let Setup { p, compat } = setup(&fam, n);
            let r = &compat.r12;
            assert!(rel_diff(&r[0], &r[1]) < tol, "n={n}");
            assert!(rel_diff(&r[0], &r[2]) < tol, "n={n}");
            assert!(compat.b0.max_diff(&compat.b0_numeric) < tol, "n={n} B0 {:e}", compat.b0.max_diff(&compat.b0_numeric));
            let res = sakai_compat_residual(&compat.now.entries, &compat.next.entries, &compat.b0, &p, &p.t, &nodes(p.prec())).unwrap();
            assert!(res < tol, "n={n} compat {res:e}");
            let cleared = cleared_compatibility(&compat.now.entries, &compat.next.entries, &compat.b0, &p, &p.t);
            assert!(cleared.entries().iter().all(|e| e.max_abs() < tol));
        }
    }

    #[test]
    fn perturbed_f_breaks_routes() {
        let fam = family();
        let Setup { p, compat } = setup(&fam, 1);
        let f = fam.fg(1, 0).unwrap().f;
        assert!(r12_gap_for_f(&f, &compat, &p).unwrap() < 1e-50);
        let bumped = &f * Scalar::from_f64(1.0 + 1e-6, p.prec());
        assert!(r12_gap_for_f(&bumped, &compat, &p).unwrap() > 1e-10);
    }

    fn dictionary(fam: &Family, n: usize) -> (Params, SakaiDictionary) {
        let p = fam.params(n, 0).unwrap();
        let e = fam.extraction(n, 0).unwrap();
        let d = sakai_dictionary(&e.lambda, &e.z_plus, &e.z_minus, &fam.ops(0).unwrap().a[n], &p, &p.t);
        (p, d)
    }

    #[test]
    fn inverted_matrix_matches_astar() {
        let fam = family();
        let tol = 1e-50;
        for n in 1..=2 {
            let (_, d) = dictionary(&fam, n);
            let cal = cal_a(&d).unwrap();
            for (k, r) in cal_a_property_residuals(&cal, &d).iter().enumerate() {
                assert!(*r < tol, "n={n} cal property {k}: {r:e}");
            }
            let frak = frak_transform(&cal, &d);
            for (k, r) in frak_property_residuals(&frak, &d).iter().enumerate() {
                assert!(*r < tol, "n={n} frak property {k}: {r:e}");
            }
            let astar = fam.extraction(n, 0).unwrap().astar.as_mat();
            assert!(frak.max_coeff_diff(&astar) < tol);
        }
    }

    #[test]
    fn original_gauge_is_independent_of_gamma() {
        let fam = family();
        let (p, d) = dictionary(&fam, 1);
        let cal = cal_a(&d).unwrap();
        let prec = p.prec();
        for gamma in [Scalar::from_f64(0.3, prec), Scalar::from_parts_f64(-1.0, 2.0, prec)] {
            let orig = sakai_original(&d, &gamma).unwrap();
            assert!(orig.division_remainder < 1e-50);
            assert!(sakai_gauge_residual(&orig, &cal, &d, &nodes(prec)).unwrap() < 1e-50);
        }
    }

    #[test]
    fn sakai_evolution_holds() {
        let fam = family();
        for n in 1..=2 {
            let (_, d) = dictionary(&fam, n);
            let fg = fam.fg(n, 0).unwrap();
            let g_hat = fam.fg(n, 1).unwrap().g;
            let f_prev = fam.fg(n, -1).unwrap().f;
            let r = sakai_evolution_residual(&d.lambda, &fg.f, &g_hat.recip(), &f_prev, &d).unwrap();
            assert!(r[0] < 1e-50 && r[1] < 1e-50, "n={n} {r:?}");
            let r = sakai_evolution_residual(&d.lambda, &(&fg.f * 2), &g_hat.recip(), &f_prev, &d).unwrap();
            assert!(r[0] > 1e-10);
        }
    }

    #[test]
    fn coincident_nu_forces_root() {
        let fam = family();
        let (_, d) = dictionary(&fam, 1);
        let other = Scalar::from_f64(0.37, d.s.prec());
        let on_root = &d.roots[0];
        let r = sakai_evolution_residual(on_root, on_root, &other, &other, &d).unwrap();
        assert!(r[0] < 1e-60);
        let off = &d.lambda;
        let r = sakai_evolution_residual(off, off, &other, &other, &d).unwrap();
        assert!(r[0] > 1e-10);
    }
}
