//! Dense truncated-Fock-space linear algebra for the oracle.

use crate::{FvError, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

/// Dense operator on the truncated oscillator Fock basis.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    entries: Array2<C64>,
}

impl DenseOperator {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c || r < 2 {
            return Err(FvError::Domain(format!("operator must be square with N >= 2, got {r}x{c}")));
        }
        Ok(Self { entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        let mut e = Array2::zeros((n, n));
        for m in 0..n {
            for k in 0..n {
                e[(m, k)] = f(m, k);
            }
        }
        Self::new(e)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::from_fn(values.len(), |m, k| if m == k { C64::from(values[m]) } else { C64::new(0.0, 0.0) })
    }

    /// The oscillator lowering operator `a` (`a |n> = sqrt(n) |n-1>`).
    pub fn lowering(n: usize) -> Result<Self> {
        Self::from_fn(n, |m, k| {
            if k == m + 1 { C64::from((k as f64).sqrt()) } else { C64::new(0.0, 0.0) }
        })
    }

    pub fn n(&self) -> usize { self.entries.nrows() }
    pub fn entries(&self) -> &Array2<C64> { &self.entries }

    pub fn dagger(&self) -> Self {
        let n = self.n();
        let mut e = Array2::zeros((n, n));
        for m in 0..n {
            for k in 0..n {
                e[(m, k)] = self.entries[(k, m)].conj();
            }
        }
        Self { entries: e }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for m in 0..n {
            for k in m..n {
                worst = worst.max((self.entries[(m, k)] - self.entries[(k, m)].conj()).norm());
            }
        }
        worst
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { entries: self.entries.dot(&other.entries) }
    }

    pub fn add_scaled(&self, other: &Self, s: C64) -> Self {
        let mut e = self.entries.clone();
        e.zip_mut_with(&other.entries, |a, b| *a += b * s);
        Self { entries: e }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |m, k| if m == k { C64::from(1.0) } else { C64::new(0.0, 0.0) }).unwrap()
    }

    pub fn apply(&self, v: &Array1<C64>) -> Array1<C64> {
        self.entries.dot(v)
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix exponential by scaling and squaring with a Taylor core.
    pub fn expm(&self) -> Self {
        let norm1 = (0..self.n())
            .map(|k| (0..self.n()).map(|m| self.entries[(m, k)].norm()).sum::<f64>())
            .fold(0.0f64, f64::max);
        let squarings = norm1.log2().ceil().max(0.0) as u32 + 1;
        let scale = 0.5f64.powi(squarings as i32);
        let scaled = Self { entries: self.entries.mapv(|v| v * scale) };
        let mut sum = Self::identity(self.n());
        let mut term = Self::identity(self.n());
        for k in 1..=24 {
            term = term.mul(&scaled);
            term.entries.mapv_inplace(|v| v / k as f64);
            sum = sum.add_scaled(&term, C64::from(1.0));
            if term.max_entry() < 1e-18 * sum.max_entry() {
                break;
            }
        }
        let mut out = sum;
        for _ in 0..squarings {
            out = out.mul(&out);
        }
        out
    }

    /// Inverse by Gauss–Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n();
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let (pivot, mag) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if mag < 1e-300 {
                return Err(FvError::Domain("singular matrix".into()));
            }
            if pivot != col {
                for j in 0..n {
                    a.swap((col, j), (pivot, j));
                    inv.swap((col, j), (pivot, j));
                }
            }
            let d = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= d;
                inv[(col, j)] /= d;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let acj = a[(col, j)];
                    let icj = inv[(col, j)];
                    a[(r, j)] -= f * acj;
                    inv[(r, j)] -= f * icj;
                }
            }
        }
        Self::new(inv)
    }

    /// Principal matrix square root by the Denman–Beavers iteration
    /// (a Newton-family method); requires eigenvalues off the negative axis.
    pub fn sqrt_newton(&self, tol: f64, max_iter: usize) -> Result<Self> {
        let mut y = self.clone();
        let mut z = Self::identity(self.n());
        for _ in 0..max_iter {
            let y_inv = y.inverse()?;
            let z_inv = z.inverse()?;
            let y_next = y.add_scaled(&z_inv, C64::from(1.0));
            let z_next = z.add_scaled(&y_inv, C64::from(1.0));
            let y_next = Self { entries: y_next.entries.mapv(|v| v * 0.5) };
            let z_next = Self { entries: z_next.entries.mapv(|v| v * 0.5) };
            let delta = y.max_diff(&y_next);
            y = y_next;
            z = z_next;
            if delta <= tol * y.max_entry() {
                let resid = y.mul(&y).max_diff(self);
                if resid > 100.0 * tol * self.max_entry().max(1.0) {
                    return Err(FvError::NonConvergent { tail: resid, tol });
                }
                return Ok(y);
            }
        }
        Err(FvError::NonConvergent { tail: y.mul(&y).max_diff(self), tol })
    }
}
