//! Complex roots of integer polynomials.
//!
//! Repeated roots are split off exactly first (Yun's squarefree decomposition over Q),
//! so the numerical stage only ever sees simple roots. Each squarefree factor is
//! solved by Aberth iteration, falling back to companion-matrix eigenvalues.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

type QPoly = Vec<BigRational>;

/// A root and its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Roots of `sum coeffs[n] u^n`, after substituting `u = scale * v` for conditioning
/// (pick `scale` near the expected root modulus).
pub fn integer_poly_roots(coeffs: &[i64], scale: f64) -> Result<Vec<Root>> {
    let p: QPoly = trim_q(
        coeffs
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect(),
    );
    if p.len() <= 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (factor, mult) in squarefree_decomposition(&p) {
        let scaled: Vec<Complex64> = factor
            .iter()
            .enumerate()
            .map(|(n, c)| Complex64::new(c.to_f64().unwrap_or(f64::NAN) * scale.powi(n as i32), 0.0))
            .collect();
        for v in simple_roots(&scaled)? {
            out.push(Root {
                value: v * scale,
                multiplicity: mult,
            });
        }
    }
    Ok(out)
}

/// Yun's algorithm: `p = c * prod f_i^i` with each `f_i` squarefree and monic.
/// Returns the nonconstant `(f_i, i)`.
pub(crate) fn squarefree_decomposition(p: &QPoly) -> Vec<(QPoly, usize)> {
    let mut out = Vec::new();
    let a = monic(p);
    let b = derivative(&a);
    let c = gcd(&a, &b);
    let mut w = div_exact(&a, &c);
    let mut y = div_exact(&b, &c);
    let mut i = 1;
    loop {
        let z = sub(&y, &derivative(&w));
        if w.len() <= 1 {
            break;
        }
        let g = gcd(&w, &z);
        if g.len() > 1 {
            out.push((g.clone(), i));
        }
        w = div_exact(&w, &g);
        y = div_exact(&z, &g);
        i += 1;
    }
    out
}

fn trim_q(mut p: QPoly) -> QPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn monic(p: &QPoly) -> QPoly {
    match p.last() {
        None => Vec::new(),
        Some(lead) => p.iter().map(|c| c / lead).collect(),
    }
}

fn derivative(p: &QPoly) -> QPoly {
    trim_q(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(n, c)| c * BigRational::from_integer(BigInt::from(n)))
            .collect(),
    )
}

fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    trim_q(
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                x - y
            })
            .collect(),
    )
}

fn div_rem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let mut rem = a.clone();
    let db = b.len() - 1;
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let lead = &b[db];
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = &rem[i] / lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i - db + j] = &rem[i - db + j] - &c * bj;
        }
        quot[i - db] = c;
    }
    rem.truncate(db);
    (trim_q(quot), trim_q(rem))
}

fn div_exact(a: &QPoly, b: &QPoly) -> QPoly {
    let (q, r) = div_rem(a, b);
    debug_assert!(r.is_empty(), "inexact division");
    q
}

fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = trim_q(a.clone());
    let mut y = trim_q(b.clone());
    while !y.is_empty() {
        let (_, r) = div_rem(&x, &y);
        x = y;
        y = monic(&r);
    }
    if x.is_empty() {
        vec![BigRational::one()]
    } else {
        monic(&x)
    }
}

fn horner(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = Complex64::zero();
    let mut der = Complex64::zero();
    for &c in p.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

/// Roots of a polynomial assumed to have only simple roots.
pub fn simple_roots(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![-p[0] / p[1]]);
    }
    match aberth(p, 500) {
        Some(r) => Ok(r),
        None => companion_eigenvalues(p),
    }
}

fn aberth(p: &[Complex64], max_iter: usize) -> Option<Vec<Complex64>> {
    let n = p.len() - 1;
    // Cauchy-style radius from the coefficient sizes
    let lead = p[n].norm();
    let radius = (0..n)
        .map(|k| (p[k].norm() / lead).powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .clamp(1e-3, 1e3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..max_iter {
        let mut max_step = 0.0f64;
        for k in 0..n {
            let (val, der) = horner(p, z[k]);
            if val.norm() == 0.0 {
                continue;
            }
            let ratio = val / der;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::one() / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::one() - ratio * repulsion);
            if !step.is_finite() {
                return None;
            }
            z[k] -= step;
            max_step = max_step.max(step.norm() / z[k].norm().max(1e-300));
        }
        if max_step < 1e-14 {
            return Some(polish(p, z));
        }
    }
    None
}

fn polish(p: &[Complex64], mut z: Vec<Complex64>) -> Vec<Complex64> {
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (val, der) = horner(p, *r);
            if der.norm() == 0.0 {
                break;
            }
            let step = val / der;
            if !step.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    z
}

fn companion_eigenvalues(p: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = p.len() - 1;
    let lead = p[n].re;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        m[(i, n - 1)] = -p[i].re / lead;
    }
    let eig = m
        .clone()
        .try_schur(1e-15, 10_000)
        .ok_or_else(|| Error::Numerical(format!("companion eigenvalues did not converge (degree {n})")))?
        .complex_eigenvalues();
    let roots: Vec<Complex64> = eig.iter().map(|c| Complex64::new(c.re, c.im)).collect();
    let roots = polish(p, roots);
    let worst = roots
        .iter()
        .map(|&r| horner(p, r).0.norm())
        .fold(0.0f64, f64::max);
    if !worst.is_finite() {
        return Err(Error::Numerical(format!(
            "root finding failed for degree {n}: residual {worst}"
        )));
    }
    Ok(roots)
}

/// Exact squarefreeness over Q of an integer polynomial.
#[cfg(test)]
pub(crate) fn is_squarefree_over_q(coeffs: &[i64]) -> bool {
    let p: QPoly = trim_q(
        coeffs
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect(),
    );
    if p.len() <= 2 {
        return true;
    }
    gcd(&p, &derivative(&p)).len() == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut r: Vec<Root>) -> Vec<Root> {
        r.sort_by(|a, b| {
            a.value
                .re
                .partial_cmp(&b.value.re)
                .unwrap()
                .then(a.value.im.partial_cmp(&b.value.im).unwrap())
        });
        r
    }

    #[test]
    fn linear_and_quadratic() {
        let r = integer_poly_roots(&[-2, 1], 1.0).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0].value - Complex64::new(2.0, 0.0)).norm() < 1e-14);
        // 1 + u^2
        let r = sorted(integer_poly_roots(&[1, 0, 1], 1.0).unwrap());
        assert!((r[0].value - Complex64::new(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1].value - Complex64::new(0.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn repeated_roots_are_exact() {
        // (1 + 2u + 3u^2)^2 = 1 + 4u + 10u^2 + 12u^3 + 9u^4
        let r = integer_poly_roots(&[1, 4, 10, 12, 9], 3f64.sqrt().recip()).unwrap();
        assert_eq!(r.len(), 2);
        for root in &r {
            assert_eq!(root.multiplicity, 2);
            assert!((root.value.norm() * 3f64.sqrt() - 1.0).abs() < 1e-13);
        }
        assert!(!is_squarefree_over_q(&[1, 4, 10, 12, 9]));
        assert!(is_squarefree_over_q(&[1, 2, 3]));
    }

    #[test]
    fn decomposition_multiplicities() {
        // (u - 1)^3 (u + 2)
        let coeffs = [-2, 5, -3, -1, 1];
        let r = integer_poly_roots(&coeffs, 1.0).unwrap();
        let total: usize = r.iter().map(|x| x.multiplicity).sum();
        assert_eq!(total, 4);
        let one = r.iter().find(|x| x.multiplicity == 3).unwrap();
        assert!((one.value - Complex64::new(1.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn companion_fallback_agrees() {
        let p: Vec<Complex64> = [6.0, -5.0, 1.0].iter().map(|&c| Complex64::new(c, 0.0)).collect();
        let mut r = companion_eigenvalues(&p).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0].re - 2.0).abs() < 1e-12 && (r[1].re - 3.0).abs() < 1e-12);
    }

    #[test]
    fn unit_circle_high_degree() {
        // u^12 - 1
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let r = integer_poly_roots(&c, 1.0).unwrap();
        assert_eq!(r.len(), 12);
        for root in r {
            assert!((root.value.norm() - 1.0).abs() < 1e-13);
        }
    }
}
