//! Finite fields F_q of odd order.
//!
//! Elements are residues `0..q` stored as `u16`. For a prime field the residue is
//! the integer itself; for `q = p^k` with `k > 1` it is the base-`p` encoding of the
//! element's coordinates in `F_p[x]/(m(x))`, where `m` is the first primitive
//! polynomial of degree `k` in lexicographic order. Multiplication in extension
//! fields goes through exp/log tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Elem = u16;

/// Largest supported prime field order (residues must fit `u16`).
pub const MAX_PRIME_Q: u32 = 65_521;
/// Largest supported extension field order.
pub const MAX_EXT_Q: u32 = 4096;

#[derive(Clone)]
pub struct FieldSpec(Arc<Inner>);

struct Inner {
    q: u32,
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    ext: Option<ExtTables>,
    inv: Vec<Elem>,
    quad: Vec<i8>,
}

struct ExtTables {
    /// exp[i] = x^i, doubled in length so exp[log a + log b] needs no reduction.
    exp: Vec<Elem>,
    log: Vec<u32>,
    add: Option<Vec<Elem>>,
    neg: Vec<Elem>,
}

impl FieldSpec {
    pub fn new(q: u32) -> Result<Self> {
        if q < 3 {
            return Err(Error::config(format!("field order {q} must be at least 3")));
        }
        if q % 2 == 0 {
            return Err(Error::config(format!(
                "field order {q} is even; only odd characteristic is supported"
            )));
        }
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::config(format!("{q} is not a prime power")))?;
        if k == 1 && q > MAX_PRIME_Q {
            return Err(Error::config(format!("prime field order {q} exceeds {MAX_PRIME_Q}")));
        }
        if k > 1 && q > MAX_EXT_Q {
            return Err(Error::config(format!("extension field order {q} exceeds {MAX_EXT_Q}")));
        }

        let (modulus, ext) = if k == 1 {
            (vec![0, 1], None)
        } else {
            let (m, exp) = primitive_modulus(p, k);
            let qm1 = (q - 1) as usize;
            let mut log = vec![0u32; q as usize];
            for (i, &e) in exp.iter().enumerate().take(qm1) {
                log[e as usize] = i as u32;
            }
            let mut doubled = exp.clone();
            doubled.extend_from_slice(&exp);
            let neg: Vec<Elem> = (0..q).map(|a| digit_neg(a, p, k) as Elem).collect();
            let add = (q <= 256).then(|| {
                let mut t = vec![0; (q * q) as usize];
                for a in 0..q {
                    for b in 0..q {
                        t[(a * q + b) as usize] = digit_add(a, b, p, k) as Elem;
                    }
                }
                t
            });
            (
                m,
                Some(ExtTables {
                    exp: doubled,
                    log,
                    add,
                    neg,
                }),
            )
        };

        let tmp = FieldSpec(Arc::new(Inner {
            q,
            p,
            k,
            modulus,
            ext,
            inv: Vec::new(),
            quad: Vec::new(),
        }));
        let mut inv = vec![0 as Elem; q as usize];
        let mut quad = vec![-1i8; q as usize];
        quad[0] = 0;
        for a in 1..q as Elem {
            quad[tmp.mul(a, a) as usize] = 1;
            if inv[a as usize] == 0 {
                let b = tmp.pow(a, (q - 2) as u64);
                inv[a as usize] = b;
                inv[b as usize] = a;
            }
        }
        let mut inner = Arc::try_unwrap(tmp.0).unwrap_or_else(|_| unreachable!());
        inner.inv = inv;
        inner.quad = quad;
        Ok(FieldSpec(Arc::new(inner)))
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.k
    }

    /// Defining polynomial of F_q over F_p, constant term first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.0.ext.is_none()
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.ext {
            None => {
                let s = a as u32 + b as u32;
                (if s >= self.0.q { s - self.0.q } else { s }) as Elem
            }
            Some(t) => match &t.add {
                Some(tab) => tab[a as usize * self.0.q as usize + b as usize],
                None => digit_add(a as u32, b as u32, self.0.p, self.0.k) as Elem,
            },
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        match &self.0.ext {
            None => {
                if a == 0 {
                    0
                } else {
                    (self.0.q - a as u32) as Elem
                }
            }
            Some(t) => t.neg[a as usize],
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.0.ext {
            None => ((a as u32 * b as u32) % self.0.q) as Elem,
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize]
                }
            }
        }
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        (a != 0).then(|| self.0.inv[a as usize])
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc: Elem = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Quadratic character of F_q: 0 at 0, +1 on nonzero squares, -1 otherwise.
    #[inline]
    pub fn quadratic_character(&self, a: Elem) -> i8 {
        self.0.quad[a as usize]
    }

    /// The element `-1`.
    #[inline]
    pub fn minus_one(&self) -> Elem {
        self.neg(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.0.q as Elem
    }

    pub fn same_field(&self, other: &FieldSpec) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.q == other.0.q
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.same_field(other)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.0.q)
    }
}

/// Returns `(p, k)` with `n = p^k`, p prime.
pub fn prime_power(n: u32) -> Option<(u32, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            break;
        }
        p += 1;
    }
    if p * p > n {
        return Some((n, 1));
    }
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    (m == 1).then_some((p, k))
}

fn digit_add(mut a: u32, mut b: u32, p: u32, k: u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..k {
        let d = (a % p + b % p) % p;
        out += d * scale;
        scale *= p;
        a /= p;
        b /= p;
    }
    out
}

fn digit_neg(mut a: u32, p: u32, k: u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..k {
        let d = (p - a % p) % p;
        out += d * scale;
        scale *= p;
        a /= p;
    }
    out
}

/// Finds the first monic primitive polynomial of degree `k` over F_p and returns it
/// with the table of codes of x^0, ..., x^{q-2}.
fn primitive_modulus(p: u32, k: u32) -> (Vec<u32>, Vec<Elem>) {
    let q = p.pow(k);
    let k = k as usize;
    'candidates: for code in 0..q {
        let mut m = vec![0u32; k + 1];
        let mut c = code;
        for coef in m.iter_mut().take(k) {
            *coef = c % p;
            c /= p;
        }
        m[k] = 1;
        if m[0] == 0 {
            continue;
        }
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut x = vec![0u32; k];
        x[0] = 1;
        for i in 0..(q - 1) {
            let enc = x.iter().rev().fold(0, |acc, &d| acc * p + d);
            if i > 0 && enc == 1 {
                continue 'candidates;
            }
            exp.push(enc as Elem);
            // x <- x * t mod m
            let top = x[k - 1];
            for j in (1..k).rev() {
                x[j] = x[j - 1];
            }
            x[0] = 0;
            for j in 0..k {
                x[j] = (x[j] + (p - top) * m[j]) % p;
            }
        }
        let enc = x.iter().rev().fold(0, |acc, &d| acc * p + d);
        if enc == 1 {
            return (m, exp);
        }
    }
    unreachable!("primitive polynomials exist in every degree")
}
