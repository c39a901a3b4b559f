//! Dense univariate polynomials over `F_p` and root finding.
//!
//! Coefficient vectors are stored lowest degree first with no trailing
//! zeros. Roots come from `gcd(f, x^p - x)` followed by equal-degree
//! splitting with random shifts; small primes use an exhaustive scan.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{usage, Result};
use crate::field::{Field, PrimeField};
use crate::poly::FpPoly;

/// Primes up to this bound are scanned exhaustively.
pub const SCAN_LIMIT: u64 = 1 << 16;

pub type Dense = Vec<u64>;

pub fn trim(mut a: Dense) -> Dense {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub fn eval(f: &PrimeField, a: &[u64], x: u64) -> u64 {
    a.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &x), c))
}

pub fn add(f: &PrimeField, a: &[u64], b: &[u64]) -> Dense {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| f.add(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0)))
        .collect())
}

pub fn sub(f: &PrimeField, a: &[u64], b: &[u64]) -> Dense {
    let n = a.len().max(b.len());
    trim((0..n)
        .map(|i| f.sub(a.get(i).unwrap_or(&0), b.get(i).unwrap_or(&0)))
        .collect())
}

pub fn mul(f: &PrimeField, a: &[u64], b: &[u64]) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p = f.modulus() as u128;
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            acc[i + j] = (acc[i + j] + (x as u128) * (y as u128)) % p;
        }
    }
    trim(acc.into_iter().map(|v| v as u64).collect())
}

/// Quotient and remainder.
pub fn div_rem(f: &PrimeField, a: &[u64], b: &[u64]) -> (Dense, Dense) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut q = vec![0; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = f.mul(&r[k + db], &inv);
        q[k] = c;
        if c != 0 {
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = f.sub(&r[k + j], &f.mul(&c, &bj));
            }
        }
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub fn rem(f: &PrimeField, a: &[u64], b: &[u64]) -> Dense {
    div_rem(f, a, b).1
}

pub fn monic(f: &PrimeField, a: &[u64]) -> Dense {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc).expect("nonzero");
            a.iter().map(|c| f.mul(c, &inv)).collect()
        }
    }
}

pub fn gcd(f: &PrimeField, a: &[u64], b: &[u64]) -> Dense {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

pub fn derivative(f: &PrimeField, a: &[u64]) -> Dense {
    trim(a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| f.mul(c, &(i as u64 % f.modulus())))
        .collect())
}

/// `base^e mod m`.
pub fn pow_mod(f: &PrimeField, base: &[u64], mut e: u64, m: &[u64]) -> Dense {
    let mut result = vec![1];
    let mut b = rem(f, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(f, &mul(f, &result, &b), m);
        }
        e >>= 1;
        if e > 0 {
            b = rem(f, &mul(f, &b, &b), m);
        }
    }
    rem(f, &result, m)
}

/// Distinct roots in `F_p`, sorted ascending.
pub fn roots_dense(f: &PrimeField, a: &[u64], seed: u64) -> Result<Vec<u64>> {
    let a = trim(a.to_vec());
    if a.is_empty() {
        return usage("roots of the zero polynomial");
    }
    let p = f.modulus();
    let mut roots = if p <= SCAN_LIMIT {
        (0..p).filter(|&x| eval(f, &a, x) == 0).collect()
    } else {
        let g = split_linear_part(f, &a);
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        equal_degree_split(f, g, &mut rng, &mut out);
        out
    };
    roots.sort_unstable();
    Ok(roots)
}

/// `gcd(a, x^p - x)`: the product of the distinct linear factors.
fn split_linear_part(f: &PrimeField, a: &[u64]) -> Dense {
    let a = monic(f, a);
    if a.len() <= 1 {
        return a;
    }
    let xp = pow_mod(f, &[0, 1], f.modulus(), &a);
    let h = sub(f, &xp, &[0, 1]);
    gcd(f, &a, &h)
}

fn equal_degree_split(f: &PrimeField, g: Dense, rng: &mut ChaCha8Rng, out: &mut Vec<u64>) {
    match g.len() {
        0 | 1 => {}
        2 => out.push(f.neg(&f.mul(&g[0], &f.inv(&g[1]).expect("monic")))),
        _ => loop {
            let shift = f.random_elem(rng);
            let half = (f.modulus() - 1) / 2;
            let t = pow_mod(f, &[shift, 1], half, &g);
            let d = gcd(f, &g, &sub(f, &t, &[1]));
            if d.len() > 1 && d.len() < g.len() {
                let (q, _) = div_rem(f, &g, &d);
                equal_degree_split(f, d, rng, out);
                equal_degree_split(f, monic(f, &q), rng, out);
                return;
            }
        },
    }
}

/// Multiplicity of the root `x` in `a`.
pub fn root_multiplicity(f: &PrimeField, a: &[u64], x: u64) -> usize {
    let mut cur = trim(a.to_vec());
    let lin = vec![f.neg(&x), 1];
    let mut m = 0;
    while !cur.is_empty() {
        let (q, r) = div_rem(f, &cur, &lin);
        if !r.is_empty() {
            break;
        }
        cur = q;
        m += 1;
    }
    m
}

/// Dense coefficients of a one-variable [`FpPoly`].
pub fn to_dense(f: &FpPoly) -> Result<Dense> {
    if f.nvars() != 1 {
        return usage(format!("expected a univariate polynomial, got {} variables", f.nvars()));
    }
    let d = f.degree().unwrap_or(0) as usize;
    let mut out = vec![0; d + 1];
    for (m, c) in f.terms() {
        out[m.exponents()[0] as usize] = *c;
    }
    Ok(trim(out))
}

/// Distinct roots in `F_p` of a one-variable polynomial.
pub fn univariate_roots_mod_p(f: &FpPoly) -> Result<Vec<u64>> {
    let dense = to_dense(f)?;
    roots_dense(f.field(), &dense, 0x5eed)
}

/// Dehomogenized restriction of a binary form given by coefficients
/// `c[k]` of `s^(d-k) t^k`: roots as points `[s:t]`, including `[1:0]`.
pub fn binary_form_roots(f: &PrimeField, c: &[u64], seed: u64) -> Result<Vec<(u64, u64)>> {
    let c = c.to_vec();
    if c.iter().all(|&v| v == 0) {
        return usage("roots of the zero binary form");
    }
    let mut out = Vec::new();
    // t = 0 is a root iff the coefficient of s^d vanishes
    if c[0] == 0 {
        out.push((1, 0));
    }
    // set t = 1: sum c[k] s^(d-k)
    let dense: Dense = trim(c.iter().rev().copied().collect());
    if dense.len() > 1 {
        for r in roots_dense(f, &dense, seed)? {
            out.push((r, 1));
        }
    }
    Ok(out)
}
