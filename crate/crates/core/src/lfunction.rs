//! L-polynomials `L(u, chi_D) = sum_f chi_D(f) u^{deg f}` of the family `H_{2g+1,q}`,
//! the zeta function of `A`, and evaluation on the circle `|u| = q^{-1/2}`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{enumerate_monic, Poly};
use crate::primes::{is_squarefree, PrimeTable};
use crate::roots::{integer_poly_roots, Root};
use crate::symbol::{symbol_raw, QuadraticCharacter};

/// `zeta_A(s) = 1 / (1 - q^{1-s})`.
pub fn zeta_a(s: Complex64, q: u32) -> Result<Complex64> {
    let w = ((Complex64::new(1.0, 0.0) - s) * (q as f64).ln()).exp();
    let denom = Complex64::new(1.0, 0.0) - w;
    if denom.norm() < 1e-14 {
        return Err(Error::Pole { re: s.re, im: s.im });
    }
    Ok(denom.inv())
}

/// `Z(u) = 1 / (1 - q u)`, the zeta function in the variable `u = q^{-s}`.
pub fn zeta_u(u: Complex64, q: u32) -> Result<Complex64> {
    let denom = Complex64::new(1.0, 0.0) - u * q as f64;
    if denom.norm() < 1e-14 {
        return Err(Error::Pole {
            re: u.re,
            im: u.im,
        });
    }
    Ok(denom.inv())
}

/// `|zeta_A(1 + i alpha / ln q + 1 / ln X)|` for an angle `alpha`, i.e.
/// `1 / |1 - e^{-ln q / ln X} e^{-i alpha}|`. Finite for every `alpha` since `X > 1`.
pub fn zeta_abs_at_angle(q: u32, alpha: f64, log_x: f64) -> f64 {
    let r = (-(q as f64).ln() / log_x).exp();
    let denom = Complex64::new(1.0, 0.0) - Complex64::from_polar(r, -alpha);
    1.0 / denom.norm()
}

/// Reduces an angle to `[0, 2 pi)`.
pub fn reduce_angle(theta: f64) -> f64 {
    let r = theta.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// A point `u = q^{-1/2} e^{i theta}` on the critical circle, i.e. `s = 1/2 - i theta / ln q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    theta: f64,
    q: u32,
}

impl SpectralPoint {
    pub fn new(theta: f64, q: u32) -> Self {
        SpectralPoint {
            theta: reduce_angle(theta),
            q,
        }
    }

    /// The point with `theta = t ln q`.
    pub fn from_t(t: f64, q: u32) -> Self {
        Self::new(t * (q as f64).ln(), q)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn u(&self) -> Complex64 {
        Complex64::from_polar((self.q as f64).powf(-0.5), self.theta)
    }

    pub fn s(&self) -> Complex64 {
        Complex64::new(0.5, -self.theta / (self.q as f64).ln())
    }
}

/// Exact coefficients `c_0, ..., c_{2g}` of `L(u, chi_D)` for `D` in `H_{2g+1,q}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LPolynomial {
    pub q: u32,
    pub g: usize,
    #[serde(with = "poly_string")]
    pub discriminant: Poly,
    pub coeffs: Vec<i64>,
}

mod poly_string {
    use super::Poly;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &Poly, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&p.encode())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Poly, D::Error> {
        let s = String::deserialize(d)?;
        Poly::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl LPolynomial {
    /// Degree in `u`; `None` only for the zero polynomial, which never arises.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    /// Horner evaluation at an arbitrary `u`.
    pub fn eval_u(&self, u: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c as f64)
    }

    pub fn eval(&self, pt: &SpectralPoint) -> Complex64 {
        self.eval_u(pt.u())
    }

    /// `L(q^{-1/2} e^{i theta}, chi_D)`.
    pub fn eval_theta(&self, theta: f64) -> Complex64 {
        self.eval(&SpectralPoint::new(theta, self.q))
    }

    /// `L(s, chi_D) = L(q^{-s}, chi_D)`.
    pub fn eval_s(&self, s: Complex64) -> Complex64 {
        self.eval_u((-s * (self.q as f64).ln()).exp())
    }

    /// Roots in `u`, with multiplicities.
    pub fn roots(&self) -> Result<Vec<Root>> {
        integer_poly_roots(&self.coeffs, (self.q as f64).powf(-0.5))
    }

    /// `sum_{n <= N} c_n` (with `c_n = 0` for `n > 2g`).
    pub fn prefix_sum(&self, n: usize) -> i64 {
        self.coeffs.iter().take(n + 1).sum()
    }
}

/// Checks `D` is monic, squarefree and of odd degree; returns `g` with `deg D = 2g + 1`.
pub fn family_genus(d: &Poly) -> Result<usize> {
    if !d.is_monic() {
        return Err(Error::domain(format!("discriminant {d} is not monic")));
    }
    let n = d.deg();
    if n % 2 == 0 {
        return Err(Error::domain(format!("discriminant {d} has even degree {n}")));
    }
    if !is_squarefree(d)? {
        return Err(Error::domain(format!("discriminant {d} is not squarefree")));
    }
    Ok((n - 1) / 2)
}

/// `sum_{deg f = n, f monic} chi_D(f)` by direct enumeration.
pub fn character_sum_of_degree(d: &Poly, n: usize) -> i64 {
    let field = d.field();
    enumerate_monic(field, n)
        .map(|f| symbol_raw(field, d.coeffs().to_vec(), f.coeffs().to_vec(), None) as i64)
        .sum()
}

/// Coefficients by summing `chi_D(f)` over all monic `f` of each degree `n <= 2g`.
pub fn lpoly_direct(d: &Poly) -> Result<LPolynomial> {
    let g = family_genus(d)?;
    let coeffs = (0..=2 * g).map(|n| character_sum_of_degree(d, n)).collect();
    Ok(LPolynomial {
        q: d.field().q(),
        g,
        discriminant: d.clone(),
        coeffs,
    })
}

/// Coefficients from the Euler product `prod_P (1 - chi_D(P) u^{deg P})^{-1}`, truncated at
/// `u^{2g}`; the table must reach degree `2g`.
pub fn lpoly_euler(d: &Poly, table: &PrimeTable) -> Result<LPolynomial> {
    let g = family_genus(d)?;
    if table.max_deg() < 2 * g {
        return Err(Error::config(format!(
            "prime table through degree {} is incomplete for g = {g}",
            table.max_deg()
        )));
    }
    let chi = QuadraticCharacter::new(d, table)?;
    lpoly_from_character(&chi, g)
}

/// Euler product from cached prime values of `chi_D`.
pub fn lpoly_from_character(chi: &QuadraticCharacter, g: usize) -> Result<LPolynomial> {
    let top = 2 * g;
    if chi.max_deg() < top {
        return Err(Error::config(format!(
            "character cache through degree {} is incomplete for g = {g}",
            chi.max_deg()
        )));
    }
    let mut c = vec![0i64; top + 1];
    c[0] = 1;
    let overflow = || Error::Numerical("L-coefficient overflow".into());
    for deg in 1..=top {
        for &v in chi.values_of_degree(deg) {
            if v == 0 {
                continue;
            }
            // in-place multiplication by 1 / (1 - v u^deg), ascending
            for n in deg..=top {
                let term = c[n - deg] * v as i64;
                c[n] = c[n].checked_add(term).ok_or_else(overflow)?;
            }
        }
    }
    Ok(LPolynomial {
        q: chi.modulus().field().q(),
        g,
        discriminant: chi.modulus().clone(),
        coeffs: c,
    })
}

#[derive(Clone, Debug)]
pub struct RhReport {
    /// `max | |u| sqrt(q) - 1 |` over all roots.
    pub max_deviation: f64,
    pub roots: Vec<Root>,
}

/// Finds every root of `L` and measures its distance from the circle `|u| = q^{-1/2}`.
/// Fails with an assertion error when the deviation reaches `tol`.
pub fn rh_check(l: &LPolynomial, tol: f64) -> Result<RhReport> {
    let roots = l.roots()?;
    let found: usize = roots.iter().map(|r| r.multiplicity).sum();
    let expected = l.degree().unwrap_or(0);
    if found != expected {
        return Err(Error::Numerical(format!(
            "found {found} roots for degree {expected} L-polynomial of {}",
            l.discriminant
        )));
    }
    let sq = (l.q as f64).sqrt();
    let max_deviation = roots
        .iter()
        .map(|r| (r.value.norm() * sq - 1.0).abs())
        .fold(0.0f64, f64::max);
    if !(max_deviation < tol) {
        return Err(Error::Assertion(format!(
            "root off the critical circle for D = {}: deviation {max_deviation:e} >= {tol:e}",
            l.discriminant
        )));
    }
    Ok(RhReport {
        max_deviation,
        roots,
    })
}
