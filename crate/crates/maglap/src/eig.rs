//! Dense Hermitian eigensolver.
//!
//! A complex Hermitian matrix `H = A + iB` is embedded as the real symmetric
//! matrix `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every
//! eigenvalue doubled. The real problem is solved by Householder
//! tridiagonalization followed by the implicit-shift QL iteration (the classic
//! EISPACK/Jama pair `tred2`/`tql2`). Eigenvalues are then deduplicated by
//! sorted pairing; the pairing gap doubles as a numerical self-check.
//!
//! Dense and cubic, which is fine for the few-hundred-dimensional matrices
//! that arise from quotient graphs and their truncations.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix in row-major order, used for Hermitian operators.
#[derive(Clone, Debug)]
pub struct HermitianMatrix {
    pub n: usize,
    pub entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            n,
            entries: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.n + j] += v;
    }

    /// Largest absolute entry; scale reference for tolerances.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation from Hermitian symmetry, `max |h_ij - conj(h_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Principal submatrix on the given (sorted, distinct) row/column indices.
    pub fn principal_submatrix(&self, keep: &[usize]) -> HermitianMatrix {
        let m = keep.len();
        let mut out = HermitianMatrix::zeros(m);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i).re).sum()
    }

    /// Sorted eigenvalues. Errors if the matrix is not Hermitian to working
    /// tolerance or if the QL iteration fails to converge.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.solve(false).map(|(vals, _)| vals)
    }

    /// Sorted eigenvalues with an orthonormal eigenvector for each, so
    /// residuals `‖Hx - λx‖` can be checked on demand.
    pub fn eigenpairs(&self) -> Result<(Vec<f64>, Vec<Vec<Complex64>>)> {
        let (vals, vecs) = self.solve(true)?;
        Ok((vals, vecs.expect("vectors requested")))
    }

    /// `‖Hx - λx‖₂` for a candidate eigenpair.
    pub fn residual(&self, lambda: f64, x: &[Complex64]) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.n {
                acc += self.get(i, j) * x[j];
            }
            acc -= lambda * x[i];
            sum += acc.norm_sqr();
        }
        sum.sqrt()
    }

    fn solve(&self, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<Vec<Complex64>>>)> {
        let n = self.n;
        if n == 0 {
            return Ok((Vec::new(), want_vectors.then(Vec::new)));
        }
        let scale = self.max_abs().max(1.0);
        let defect = self.hermitian_defect();
        if defect > 1e-10 * scale {
            return Err(Error::NonHermitian(defect));
        }

        // Real-symmetric doubling: [[Re, -Im], [Im, Re]]. Symmetrize the
        // complex input first so roundoff in assembly cannot skew the real
        // matrix.
        let m = 2 * n;
        let mut a = vec![0.0f64; m * m];
        for i in 0..n {
            for j in 0..n {
                let h = 0.5 * (self.get(i, j) + self.get(j, i).conj());
                a[i * m + j] = h.re;
                a[i * m + (n + j)] = -h.im;
                a[(n + i) * m + j] = h.im;
                a[(n + i) * m + (n + j)] = h.re;
            }
        }

        let (mut vals, vecs) = sym_eig(&mut a, m, want_vectors)?;
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());

        // Each eigenvalue of H appears twice in the doubled spectrum; verify
        // the pairing and average each pair.
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            let (lo, hi) = (vals[2 * k], vals[2 * k + 1]);
            let gap = hi - lo;
            if gap > 1e-10 * scale {
                return Err(Error::PairingGap(gap));
            }
            out.push(0.5 * (lo + hi));
        }

        let cvecs = if want_vectors {
            let vecs = vecs.expect("vectors requested");
            // The doubled eigenvector (u; w) corresponds to x = u + i w.
            // Deduplicate by taking one representative per pair; order of the
            // sorted doubled spectrum keeps pairs adjacent.
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&p, &q| vecs.1[p].partial_cmp(&vecs.1[q]).unwrap());
            let mut reps = Vec::with_capacity(n);
            for k in 0..n {
                let col = order[2 * k];
                let mut x: Vec<Complex64> = (0..n)
                    .map(|i| Complex64::new(vecs.0[i * m + col], vecs.0[(n + i) * m + col]))
                    .collect();
                let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if norm > 0.0 {
                    for z in &mut x {
                        *z /= norm;
                    }
                }
                reps.push(x);
            }
            Some(reps)
        } else {
            None
        };
        Ok((out, cvecs))
    }
}

/// Eigen-decomposition of a dense real symmetric matrix (row-major, size n).
/// Returns unsorted eigenvalues; when vectors are requested, also the full
/// transformation matrix (columns are eigenvectors, aligned with the returned
/// eigenvalue list).
fn sym_eig(a: &mut [f64], n: usize, want_vectors: bool) -> Result<(Vec<f64>, Option<(Vec<f64>, Vec<f64>)>)> {
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    tred2(a, n, &mut d, &mut e, want_vectors);
    tql2(&mut d, &mut e, if want_vectors { Some(a) } else { None }, n)?;
    if want_vectors {
        Ok((d.clone(), Some((a.to_vec(), d))))
    } else {
        Ok((d, None))
    }
}

/// Householder reduction to tridiagonal form (Jama `tred2`). On exit `d`
/// holds the diagonal and `e` the subdiagonal (e[0] = 0). When vectors are
/// requested `a` accumulates the orthogonal transformation; otherwise `a` is
/// scratch.
fn tred2(a: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64], want_vectors: bool) {
    for j in 0..n {
        d[j] = a[(n - 1) * n + j];
    }

    for i in (1..n).rev() {
        let l = i;
        let mut h = 0.0;
        let mut scale = 0.0;
        for k in 0..l {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[l - 1];
            for j in 0..l {
                d[j] = a[(l - 1) * n + j];
                a[i * n + j] = 0.0;
                a[j * n + i] = 0.0;
            }
        } else {
            for k in 0..l {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[l - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[l - 1] = f - g;
            for j in 0..l {
                e[j] = 0.0;
            }

            for j in 0..l {
                f = d[j];
                a[j * n + i] = f;
                g = e[j] + a[j * n + j] * f;
                for k in (j + 1)..l {
                    g += a[k * n + j] * d[k];
                    e[k] += a[k * n + j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..l {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..l {
                e[j] -= hh * d[j];
            }
            for j in 0..l {
                f = d[j];
                g = e[j];
                for k in j..l {
                    a[k * n + j] -= f * e[k] + g * d[k];
                }
                d[j] = a[(l - 1) * n + j];
                a[i * n + j] = 0.0;
            }
        }
        d[i] = h;
    }

    if want_vectors {
        for i in 0..(n - 1) {
            a[(n - 1) * n + i] = a[i * n + i];
            a[i * n + i] = 1.0;
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = a[k * n + (i + 1)] / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += a[k * n + (i + 1)] * a[k * n + j];
                    }
                    for k in 0..=i {
                        a[k * n + j] -= g * d[k];
                    }
                }
            }
            for k in 0..=i {
                a[k * n + (i + 1)] = 0.0;
            }
        }
        for j in 0..n {
            d[j] = a[(n - 1) * n + j];
            a[(n - 1) * n + j] = 0.0;
        }
        a[(n - 1) * n + (n - 1)] = 1.0;
    } else {
        // Without accumulation the reduced diagonal sits on the (lower
        // triangle) diagonal of the worked matrix.
        for j in 0..n {
            d[j] = a[j * n + j];
        }
    }
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix
/// (Jama `tql2`). `d` is the diagonal, `e` the subdiagonal in e[1..]. When a
/// transformation matrix is supplied, eigenvectors accumulate into its
/// columns.
fn tql2(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>, n: usize) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0f64;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 50 {
                    return Err(Error::NoConvergence(l));
                }

                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for i in (l + 2)..n {
                    d[i] -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(zm) = z.as_deref_mut() {
                        for k in 0..n {
                            h = zm[k * n + (i + 1)];
                            zm[k * n + (i + 1)] = s * zm[k * n + i] + c * h;
                            zm[k * n + i] = c * zm[k * n + i] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
