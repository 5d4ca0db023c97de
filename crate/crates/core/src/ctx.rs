use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 256;
pub const DEFAULT_TRUNCATION: usize = 200;
pub const DEFAULT_NMAX: usize = 6;
const PRECISION_RANGE: std::ops::RangeInclusive<u32> = 64..=2048;

/// Working precision and the derived tolerance, threaded through every
/// computation explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct Ctx {
    pub prec: u32,
    pub tol: f64,
    /// Lattice points per half-line in Jackson sums.
    pub truncation: usize,
    /// Highest polynomial index for which recurrence data is kept.
    pub nmax: usize,
}

impl Ctx {
    pub fn new(prec: u32) -> Result<Self> {
        if !PRECISION_RANGE.contains(&prec) {
            return Err(Error::Config(format!(
                "precision {prec} outside {}..={}",
                PRECISION_RANGE.start(),
                PRECISION_RANGE.end()
            )));
        }
        Ok(Ctx {
            prec,
            tol: default_tol(prec),
            truncation: DEFAULT_TRUNCATION,
            nmax: DEFAULT_NMAX,
        })
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_truncation(mut self, s: usize) -> Result<Self> {
        if s < 32 {
            return Err(Error::Config(format!("truncation {s} below 32")));
        }
        self.truncation = s;
        Ok(self)
    }
}

impl Default for Ctx {
    fn default() -> Self {
        Ctx::new(DEFAULT_PRECISION).expect("default precision is in range")
    }
}

/// 2^(-prec/2).
pub fn default_tol(prec: u32) -> f64 {
    2f64.powi(-(prec as i32) / 2)
}
