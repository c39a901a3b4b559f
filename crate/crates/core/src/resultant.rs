//! Sylvester resultants.
//!
//! Convention: for `f = a_m x^m + ... + a_0` and `g = b_n x^n + ... + b_0`
//! the Sylvester matrix has the `n` shifted coefficient rows of `f` first,
//! then the `m` rows of `g`, each row starting with the leading
//! coefficient. With this ordering `Res_x(x - a, x - b) = a - b` and
//! `Res_x(x^2 + b x + c, 2x + b) = -(b^2 - 4c)`.

use crate::error::{usage, Result};
use crate::field::Field;
use crate::poly::Polynomial;

/// Sylvester resultant of `f` and `g` with respect to variable `var`.
/// The result lies in the same ring and does not involve `var`.
pub fn resultant<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>, var: usize) -> Result<Polynomial<F>> {
    if f.nvars() != g.nvars() || f.field() != g.field() {
        return usage("resultant of polynomials over different rings");
    }
    if var >= f.nvars() {
        return usage(format!("variable index {var} out of range"));
    }
    let m = f.degree_in(var).unwrap_or(0) as usize;
    let n = g.degree_in(var).unwrap_or(0) as usize;
    if m == 0 || n == 0 {
        return usage("resultant needs positive degree in the eliminated variable");
    }
    let fc = f.coefficients_in(var);
    let gc = g.coefficients_in(var);
    let size = m + n;
    let zero = Polynomial::zero(f.field().clone(), f.nvars());
    let mut mat = vec![vec![zero.clone(); size]; size];
    for i in 0..n {
        for (k, c) in fc.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in gc.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    Ok(bareiss_det(mat))
}

/// Fraction-free determinant of a square matrix of polynomials.
pub fn bareiss_det<F: Field>(mut a: Vec<Vec<Polynomial<F>>>) -> Polynomial<F> {
    let n = a.len();
    assert!(n > 0 && a.iter().all(|r| r.len() == n));
    let field = a[0][0].field().clone();
    let nvars = a[0][0].nvars();
    let mut sign_flip = false;
    let mut prev = Polynomial::one(field.clone(), nvars);
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Polynomial::zero(field, nvars);
            };
            a.swap(k, p);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("same ring")
                    .expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        -&det
    } else {
        det
    }
}
