use super::scalar::Scalar;

/// Determinant by Gaussian elimination with partial pivoting on modulus.
/// The empty matrix has determinant 1.
pub fn det(mut a: Vec<Vec<Scalar>>, prec: u32) -> Scalar {
    let n = a.len();
    let mut d = Scalar::one(prec);
    for k in 0..n {
        let piv = (k..n)
            .max_by(|&i, &j| a[i][k].abs_f64().total_cmp(&a[j][k].abs_f64()))
            .expect("nonempty range");
        if a[piv][k].is_zero() {
            return Scalar::zero(prec);
        }
        if piv != k {
            a.swap(piv, k);
            d = -d;
        }
        d = d * &a[k][k];
        for i in k + 1..n {
            let m = &a[i][k] / &a[k][k];
            for j in k + 1..n {
                let t = &m * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        let p = 128;
        let s = |v| Scalar::from_i64(v, p);
        assert_eq!(det(vec![], p), s(1));
        let m = vec![vec![s(0), s(2)], vec![s(3), s(4)]];
        assert_eq!(det(m, p), s(-6));
        let m = vec![vec![s(2), s(0), s(1)], vec![s(1), s(3), s(2)], vec![s(1), s(1), s(2)]];
        assert!(crate::algebra::rel_diff(&det(m, p), &s(6)) < 1e-35);
    }
}
