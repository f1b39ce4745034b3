//! Dense polynomials over the prime field F_p, just enough to pick
//! irreducible moduli deterministically.

use alloc::vec;
use alloc::vec::Vec;

/// Coefficients, constant term first. Kept trimmed (no trailing zeros).
pub(crate) type FpPoly = Vec<u32>;

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is a small prime; Fermat.
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut b: u32, mut e: u32, m: u32) -> u32 {
    let mut acc = 1u64 % m as u64;
    let mut base = b as u64 % m as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m as u64;
        }
        base = base * base % m as u64;
        e >>= 1;
    }
    b = acc as u32;
    b
}

fn rem(a: &[u32], f: &[u32], p: u32) -> FpPoly {
    let mut a = trim(a.to_vec());
    let df = f.len() - 1;
    let lead_inv = inv_mod(f[df], p);
    while a.len() > df {
        let da = a.len() - 1;
        let c = (a[da] as u64 * lead_inv as u64 % p as u64) as u32;
        for (i, &fi) in f.iter().enumerate() {
            let idx = da - df + i;
            a[idx] = ((a[idx] as u64 + (p - c) as u64 * fi as u64) % p as u64) as u32;
        }
        a = trim(a);
    }
    a
}

fn mul(a: &[u32], b: &[u32], p: u32) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> FpPoly {
    rem(&mul(a, b, p), f, p)
}

/// x^(p^k) mod f.
fn frob_power_of_x(f: &[u32], p: u32, k: u32) -> FpPoly {
    let mut y = rem(&[0, 1], f, p);
    for _ in 0..k {
        // y <- y^p
        let mut acc: FpPoly = vec![1];
        let mut base = y.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base, f, p);
            }
            base = mulmod(&base, &base, f, p);
            e >>= 1;
        }
        y = acc;
    }
    y
}

fn gcd(a: &[u32], b: &[u32], p: u32) -> FpPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn sub(a: &[u32], b: &[u32], p: u32) -> FpPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(out)
}

/// Ben-Or irreducibility test for a monic polynomial over F_p.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for i in 1..=deg / 2 {
        let xp = frob_power_of_x(f, p, i as u32);
        let g = gcd(f, &sub(&xp, &[0, 1], p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The monic irreducible of degree `n` over F_p whose coefficient vector
/// (c_{n-1}, ..., c_0) is lexicographically smallest.
pub(crate) fn lowest_irreducible(p: u32, n: u32) -> Option<Vec<u32>> {
    let total = (p as u64).checked_pow(n)?;
    for v in 0..total {
        let mut f = Vec::with_capacity(n as usize + 1);
        let mut rest = v;
        for _ in 0..n {
            f.push((rest % p as u64) as u32);
            rest /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return Some(f);
        }
    }
    None
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d as u64 * d as u64 <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_irreducibles() {
        assert_eq!(lowest_irreducible(2, 1).unwrap(), vec![0, 1]);
        assert_eq!(lowest_irreducible(2, 2).unwrap(), vec![1, 1, 1]);
        assert_eq!(lowest_irreducible(2, 3).unwrap(), vec![1, 1, 0, 1]);
        // x^2 + 1 is irreducible over F_3
        assert_eq!(lowest_irreducible(3, 2).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn reducible_detected() {
        // x^2 + x = x(x + 1)
        assert!(!is_irreducible(&[0, 1, 1], 2));
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over F_2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
    }
}
