//! Reproducible sample points for residual checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Scalar;

/// Seeded generator of complex sample points with dyadic-rational parts, so
/// the same seed gives bit-identical points at any precision.
pub struct Sampler {
    rng: ChaCha8Rng,
    prec: u32,
}

impl Sampler {
    pub fn new(seed: u64, prec: u32) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            prec,
        }
    }

    /// Point with real and imaginary parts in [−radius, radius].
    pub fn point(&mut self, radius: f64) -> Scalar {
        let mut part = || {
            let k: i32 = self.rng.gen_range(-1024..=1024);
            radius * f64::from(k) / 1024.0
        };
        let (re, im) = (part(), part());
        Scalar::from_parts_f64(re, im, self.prec)
    }

    /// Point whose modulus lies in [rmin, rmax]; avoids the origin.
    pub fn annulus_point(&mut self, rmin: f64, rmax: f64) -> Scalar {
        loop {
            let z = self.point(rmax);
            let r = z.abs_f64();
            if r >= rmin && r <= rmax {
                return z;
            }
        }
    }

    pub fn points(&mut self, count: usize, rmin: f64, rmax: f64) -> Vec<Scalar> {
        (0..count).map(|_| self.annulus_point(rmin, rmax)).collect()
    }
}

/// Interpolation nodes x_j = (7/5 + i/2)(9/8)^j.
pub fn interpolation_nodes(count: usize, prec: u32) -> Vec<Scalar> {
    let x0 = Scalar::ratio(7, 5, prec) + Scalar::imag_unit(prec) / 2;
    let r = Scalar::ratio(9, 8, prec);
    let mut out = Vec::with_capacity(count);
    let mut x = x0;
    for _ in 0..count {
        out.push(x.clone());
        x = x * &r;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_points() {
        let a = Sampler::new(7, 128).points(5, 0.2, 1.5);
        let b = Sampler::new(7, 128).points(5, 0.2, 1.5);
        assert_eq!(a, b);
        assert!(a.iter().all(|z| z.abs_f64() >= 0.2 && z.abs_f64() <= 1.5));
    }
}
