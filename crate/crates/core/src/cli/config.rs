use std::path::{Path, PathBuf};

use rug::ops::Pow;
use rug::Rational;
use serde::Deserialize;

use crate::algebra::Scalar;
use crate::ctx::{Ctx, DEFAULT_PRECISION, DEFAULT_TRUNCATION};
use crate::error::{Error, Result};
use crate::weight::{ParamSpec, Params};

pub const DEFAULT_SEED: u64 = 20240601;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    #[serde(default)]
    params: ParamsBlock,
    #[serde(default)]
    numerics: NumericsBlock,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsBlock {
    q: Option<String>,
    t: Option<String>,
    b1: Option<String>,
    b2: Option<String>,
    b3: Option<String>,
    b4: Option<String>,
    b6: Option<String>,
    n: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NumericsBlock {
    precision: Option<u32>,
    truncation: Option<usize>,
    tol: Option<f64>,
    seed: Option<u64>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub truncation: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Exact parameter values as entered, before rounding to working precision.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactParams {
    pub q: Rational,
    pub t: Rational,
    pub b1: Rational,
    pub b2: Rational,
    pub b3: Rational,
    pub b4: Rational,
    pub b5: Rational,
    pub b6: Rational,
    pub n: usize,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub exact: ExactParams,
    pub ctx: Ctx,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

fn parse_rational(field: &str, s: &str) -> Result<Rational> {
    s.trim()
        .parse::<Rational>()
        .map_err(|_| Error::Config(format!("params.{field}: expected an exact rational \"p/q\", got {s:?}")))
}

fn field(field: &str, value: &Option<String>, default: (i64, i64)) -> Result<Rational> {
    match value {
        Some(s) => parse_rational(field, s),
        None => Ok(Rational::from(default)),
    }
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

/// Validates the constraints exactly; b₄ defaults to 1/(b₁b₂b₃).
fn validate(block: &ParamsBlock) -> Result<ExactParams> {
    let q = field("q", &block.q, (1, 2))?;
    let t = field("t", &block.t, (1, 3))?;
    let b1 = field("b1", &block.b1, (3, 2))?;
    let b2 = field("b2", &block.b2, (4, 5))?;
    let b3 = field("b3", &block.b3, (5, 7))?;
    let b6 = field("b6", &block.b6, (2, 3))?;
    let n = block.n.unwrap_or(1);
    if q == 1 {
        return Err(config_err("params.q: q = 1 is excluded"));
    }
    if q == 0 || q.clone().abs() >= 1 {
        return Err(config_err("params.q: need 0 < |q| < 1"));
    }
    for (name, v) in [("t", &t), ("b1", &b1), ("b2", &b2), ("b3", &b3), ("b6", &b6)] {
        if *v == 0 {
            return Err(config_err(format!("params.{name}: must be nonzero")));
        }
    }
    let b123 = Rational::from(&b1 * &b2) * &b3;
    let b4 = match &block.b4 {
        Some(s) => {
            let b4 = parse_rational("b4", s)?;
            if Rational::from(&b123 * &b4) != 1 {
                return Err(config_err("params.b4: constraint b1*b2*b3*b4 = 1 violated"));
            }
            b4
        }
        None => b123.recip(),
    };
    let qn = q.clone().pow(i32::try_from(n).map_err(|_| config_err("params.n: too large"))?);
    let b5 = qn * &b1 * &b4 * &b6;
    let b5sq = Rational::from(b5.square_ref());
    if b5sq == 1 {
        return Err(config_err("params: b5 = q^n b1 b4 b6 = ±1 is excluded"));
    }
    if Rational::from(&q * &b5sq) == 1 {
        return Err(config_err("params: q b5^2 = 1 is excluded"));
    }
    if b5sq == q {
        return Err(config_err("params: b5^2 = q is excluded"));
    }
    Ok(ExactParams { q, t, b1, b2, b3, b4, b5, b6, n })
}

impl RunConfig {
    pub fn from_toml(text: &str, ov: &Overrides) -> Result<Self> {
        let file: FileConfig = toml::from_str(text).map_err(|e| config_err(format!("config: {}", e.message())))?;
        let exact = validate(&file.params)?;
        let precision = ov.precision.or(file.numerics.precision).unwrap_or(DEFAULT_PRECISION);
        let mut ctx = Ctx::new(precision)?;
        let truncation = ov.truncation.or(file.numerics.truncation).unwrap_or(DEFAULT_TRUNCATION);
        ctx = ctx.with_truncation(truncation)?;
        if let Some(tol) = ov.tol.or(file.numerics.tol) {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(config_err(format!("numerics.tol: need 0 < tol < 1, got {tol}")));
            }
            ctx = ctx.with_tol(tol);
        }
        let seed = ov.seed.or(file.numerics.seed).unwrap_or(DEFAULT_SEED);
        Ok(RunConfig { exact, ctx, seed, out: ov.out.clone() })
    }

    pub fn load(path: Option<&Path>, ov: &Overrides) -> Result<Self> {
        let text = match path {
            Some(p) => std::fs::read_to_string(p).map_err(|e| config_err(format!("{}: {e}", p.display())))?,
            None => String::new(),
        };
        Self::from_toml(&text, ov)
    }

    /// The instance at working precision; remaining checks (regularity of the
    /// spectral zeros) happen here.
    pub fn params(&self) -> Result<Params> {
        let prec = self.ctx.prec;
        let e = &self.exact;
        let s = |r: &Rational| Scalar::from_rational(r, prec);
        let spec = ParamSpec {
            q: s(&e.q),
            t: s(&e.t),
            b1: s(&e.b1),
            b2: s(&e.b2),
            b3: s(&e.b3),
            b4: Some(s(&e.b4)),
            b6: s(&e.b6),
            n: e.n,
        };
        Params::new(spec, &self.ctx).map_err(|err| config_err(err.to_string()))
    }

    /// Parameter values as exact strings, in a fixed order.
    pub fn describe(&self) -> Vec<(String, String)> {
        let e = &self.exact;
        [("q", &e.q), ("t", &e.t), ("b1", &e.b1), ("b2", &e.b2), ("b3", &e.b3), ("b4", &e.b4), ("b5", &e.b5), ("b6", &e.b6)]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .chain(std::iter::once(("n".to_string(), e.n.to_string())))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<RunConfig> {
        RunConfig::from_toml(text, &Overrides::default())
    }

    #[test]
    fn defaults_match_default_instance() {
        let cfg = load("").unwrap();
        let ctx = Ctx::default();
        assert_eq!(cfg.params().unwrap(), Params::default_instance(&ctx));
        assert_eq!(cfg.exact.b4, Rational::from((7, 6)));
        assert_eq!(cfg.exact.b5, Rational::from((7, 12)));
        assert_eq!(cfg.seed, DEFAULT_SEED);
    }

    #[test]
    fn constraint_violations_are_named() {
        let err = load("[params]\nb4 = \"1/2\"").unwrap_err();
        assert!(err.to_string().contains("b1*b2*b3*b4 = 1"), "{err}");
        let err = load("[params]\nq = \"1\"").unwrap_err();
        assert!(err.to_string().contains("q = 1"), "{err}");
        let err = load("[params]\nb2 = \"0.8\"").unwrap_err();
        assert!(err.to_string().contains("params.b2"), "{err}");
        assert!(load("[params]\nbogus = \"1\"").is_err());
        assert!(load("[numerics]\nprecision = 8").is_err());
        assert!(load("[params]\nb4 = \"7/6\"").is_ok());
    }

    #[test]
    fn overrides_take_precedence() {
        let ov = Overrides { precision: Some(192), seed: Some(3), ..Default::default() };
        let cfg = RunConfig::from_toml("[numerics]\nprecision = 320\nseed = 9", &ov).unwrap();
        assert_eq!((cfg.ctx.prec, cfg.seed), (192, 3));
    }
}
