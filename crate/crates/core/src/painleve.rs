//! The E6(1) q-Painlevé system in the variables (f, g): right-hand sides,
//! forward and backward time steps, and the normalisation flow.

use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::laxpair::identities::balance;
use crate::weight::Params;

#[derive(Clone, Debug, PartialEq)]
pub struct PainleveState {
    pub f: Scalar,
    pub g: Scalar,
    pub t: Scalar,
}

impl PainleveState {
    pub fn new(f: Scalar, g: Scalar, t: Scalar) -> Self {
        PainleveState { f, g, t }
    }

    /// max(|Δf|, |Δg|, |Δt|) in the relative measure.
    pub fn distance(&self, o: &PainleveState) -> f64 {
        use crate::algebra::rel_diff;
        rel_diff(&self.f, &o.f).max(rel_diff(&self.g, &o.g)).max(rel_diff(&self.t, &o.t))
    }
}

fn guard_tol(p: &Params) -> f64 {
    p.tol() * 1e6
}

fn denom(v: Scalar, p: &Params, what: &'static str) -> Result<Scalar> {
    if v.abs_f64() <= guard_tol(p) {
        Err(Error::DenominatorZero(what))
    } else {
        Ok(v)
    }
}

/// t²∏(b_jg − 1)/((g − b₆t)(g − t/b₆)).
pub fn rhs_first(g: &Scalar, t: &Scalar, p: &Params) -> Result<Scalar> {
    let b6 = &p.b6;
    let d = denom(g - b6 * t, p, "g = b6 t")? * denom(g - t / b6, p, "g = t/b6")?;
    Ok(t.square() * p.prod_b(|b| b * g - 1) / d)
}

/// t²∏(g − 1/b_j)/((g − b₆t)(g − t/b₆)); equal to [`rhs_first`] when b₁b₂b₃b₄ = 1.
pub fn rhs_first_alt(g: &Scalar, t: &Scalar, p: &Params) -> Result<Scalar> {
    let b6 = &p.b6;
    let d = denom(g - b6 * t, p, "g = b6 t")? * denom(g - t / b6, p, "g = t/b6")?;
    Ok(t.square() * p.prod_b(|b| g - b.recip()) / d)
}

/// qt²∏(f − b_j)/((f − b₅qt)(f − t/b₅)).
pub fn rhs_second(f: &Scalar, t: &Scalar, p: &Params) -> Result<Scalar> {
    let (q, b5) = (&p.q, &p.b5);
    let d = denom(f - b5 * q * t, p, "f = b5 q t")? * denom(f - t / b5, p, "f = t/b5")?;
    Ok(q * t.square() * p.prod_b(|b| f - b) / d)
}

/// qb₅t²∏(f − b_j)/((f − qb₅t)(b₅f − t)).
pub fn rhs_second_alt(f: &Scalar, t: &Scalar, p: &Params) -> Result<Scalar> {
    let (q, b5) = (&p.q, &p.b5);
    let d = denom(f - q * b5 * t, p, "f = b5 q t")? * denom(b5 * f - t, p, "f = t/b5")?;
    Ok(q * b5 * t.square() * p.prod_b(|b| f - b) / d)
}

fn check(v: &Scalar, p: &Params, step: usize, locus: &'static str) -> Result<()> {
    if v.abs_f64() <= guard_tol(p) {
        Err(Error::SingularStep { step, locus })
    } else {
        Ok(())
    }
}

/// ĝ = [1 + rhs_second(f, t)/(fg − 1)]/f, the first half of a forward step.
pub fn advance_g(s: &PainleveState, p: &Params) -> Result<Scalar> {
    let (f, g) = (&s.f, &s.g);
    Ok((1 + rhs_second(f, &s.t, p)? / denom(f * g - 1, p, "fg = 1")?) / denom(f.clone(), p, "f = 0")?)
}

/// f̌ = [1 + rhs_first(g, t)/(gf − 1)]/g, the first half of a backward step.
pub fn retreat_f(s: &PainleveState, p: &Params) -> Result<Scalar> {
    let (f, g) = (&s.f, &s.g);
    Ok((1 + rhs_first(g, &s.t, p)? / denom(g * f - 1, p, "fg = 1")?) / denom(g.clone(), p, "g = 0")?)
}

fn step_forward_at(s: &PainleveState, p: &Params, step: usize) -> Result<PainleveState> {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let (f, g, t) = (&s.f, &s.g, &s.t);
    let qt = q * t;
    check(f, p, step, "f = 0")?;
    check(&(f * g - 1), p, step, "fg = 1")?;
    check(&(f - b5 * &qt), p, step, "f = b5 q t")?;
    check(&(f - t / b5), p, step, "f = t/b5")?;
    let g_hat = advance_g(s, p)?;
    check(&g_hat, p, step, "g(qt) = 0")?;
    check(&(&g_hat - b6 * &qt), p, step, "g(qt) = b6 q t")?;
    check(&(&g_hat - &qt / b6), p, step, "g(qt) = q t/b6")?;
    check(&(&g_hat * f - 1), p, step, "g(qt) f = 1")?;
    let f_hat = (1 + rhs_first(&g_hat, &qt, p)? / (&g_hat * f - 1)) / &g_hat;
    Ok(PainleveState { f: f_hat, g: g_hat, t: qt })
}

fn step_backward_at(s: &PainleveState, p: &Params, step: usize) -> Result<PainleveState> {
    let (q, b5, b6) = (&p.q, &p.b5, &p.b6);
    let (f, g, t) = (&s.f, &s.g, &s.t);
    let tq = t / q;
    check(g, p, step, "g = 0")?;
    check(&(g * f - 1), p, step, "fg = 1")?;
    check(&(g - b6 * t), p, step, "g = b6 t")?;
    check(&(g - t / b6), p, step, "g = t/b6")?;
    let f_check = retreat_f(s, p)?;
    check(&f_check, p, step, "f(t/q) = 0")?;
    check(&(&f_check - b5 * t), p, step, "f(t/q) = b5 t")?;
    check(&(&f_check - &tq / b5), p, step, "f(t/q) = t/(q b5)")?;
    check(&(&f_check * g - 1), p, step, "f(t/q) g = 1")?;
    let g_check = (1 + rhs_second(&f_check, &tq, p)? / (&f_check * g - 1)) / &f_check;
    Ok(PainleveState { f: f_check, g: g_check, t: tq })
}

/// (f, g, t) ↦ (f̂, ĝ, qt): the second equation advances g, then the first
/// equation at qt advances f.
pub fn step_forward(s: &PainleveState, p: &Params) -> Result<PainleveState> {
    step_forward_at(s, p, 0)
}

/// (f, g, t) ↦ (f̌, ǧ, t/q), the inverse of [`step_forward`].
pub fn step_backward(s: &PainleveState, p: &Params) -> Result<PainleveState> {
    step_backward_at(s, p, 0)
}

/// (γ̂_n/(b₆γ_n))² = (f − t/b₅)/(f − b₅qt).
pub fn gamma_ratio_sq(f: &Scalar, t: &Scalar, p: &Params) -> Result<Scalar> {
    let (q, b5) = (&p.q, &p.b5);
    let d = denom(f - b5 * q * t, p, "f = b5 q t")?;
    Ok((f - t / b5) / d)
}

/// `steps` forward steps (backward when negative), starting state included.
pub fn orbit(s: &PainleveState, steps: i64, p: &Params) -> Result<Vec<PainleveState>> {
    let mut out = vec![s.clone()];
    for k in 0..steps.unsigned_abs() as usize {
        let last = out.last().expect("nonempty");
        let next = if steps > 0 {
            step_forward_at(last, p, k + 1)?
        } else {
            step_backward_at(last, p, k + 1)?
        };
        out.push(next);
    }
    Ok(out)
}

/// Residuals of both evolution equations on a consecutive pair (s at t, ŝ at qt):
/// (fg − 1)(fĝ − 1) = rhs_second(f, t) and (ĝf̂ − 1)(ĝf − 1) = rhs_first(ĝ, qt).
pub fn evolution_residuals(s: &PainleveState, s_hat: &PainleveState, p: &Params) -> Result<[f64; 2]> {
    let (f, g) = (&s.f, &s.g);
    let (fh, gh) = (&s_hat.f, &s_hat.g);
    let r2 = balance(&[(f * g - 1) * (f * gh - 1), -rhs_second(f, &s.t, p)?]);
    let r1 = balance(&[(gh * fh - 1) * (gh * f - 1), -rhs_first(gh, &s_hat.t, p)?]);
    Ok([r1, r2])
}
