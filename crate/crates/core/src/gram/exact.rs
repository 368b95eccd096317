use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{assemble, min_eigenvalue, GramProblem, GramSolution, Status};
use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::ncpoly::{s_poly, Word};

/// P·A·Pᵀ = L·D·Lᵀ with L unit lower triangular and D ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct LdlFactor {
    /// `perm[i]` is the original index of pivot row i.
    pub perm: Vec<usize>,
    pub l: Vec<Vec<BigRational>>,
    pub d: Vec<BigRational>,
    pub rank: usize,
}

impl LdlFactor {
    /// Rebuilds P·A·Pᵀ.
    pub fn reconstruct(&self) -> Vec<Vec<BigRational>> {
        let n = self.d.len();
        let mut out = vec![vec![BigRational::zero(); n]; n];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                for k in 0..=i.min(j) {
                    if !self.d[k].is_zero() {
                        *cell += &self.l[i][k] * &self.d[k] * &self.l[j][k];
                    }
                }
            }
        }
        out
    }
}

/// Exact symmetric LDLᵀ with largest-diagonal pivoting. Returns `None` when
/// the matrix is not positive semidefinite (a negative pivot, or a zero pivot
/// with a nonzero entry left in its row).
pub fn ldl_psd(a: &[Vec<BigRational>]) -> Option<LdlFactor> {
    let n = a.len();
    let mut w: Vec<Vec<BigRational>> = a.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = vec![vec![BigRational::zero(); n]; n];
    let mut d = vec![BigRational::zero(); n];
    let mut rank = n;
    for s in 0..n {
        let p = (s..n).max_by(|&i, &j| w[i][i].cmp(&w[j][j]).then(j.cmp(&i))).expect("nonempty range");
        if p != s {
            w.swap(s, p);
            for row in w.iter_mut() {
                row.swap(s, p);
            }
            l.swap(s, p);
            perm.swap(s, p);
        }
        let piv = w[s][s].clone();
        if piv.is_negative() {
            return None;
        }
        if piv.is_zero() {
            if (s..n).any(|i| (s..n).any(|j| !w[i][j].is_zero())) {
                return None;
            }
            rank = s;
            for (i, row) in l.iter_mut().enumerate().skip(s) {
                row[i] = BigRational::from_integer(1.into());
            }
            break;
        }
        l[s][s] = BigRational::from_integer(1.into());
        d[s] = piv.clone();
        for i in s + 1..n {
            l[i][s] = &w[i][s] / &piv;
        }
        for i in s + 1..n {
            if l[i][s].is_zero() {
                continue;
            }
            for j in s + 1..n {
                let t = &l[i][s] * &w[s][j];
                w[i][j] -= t;
            }
        }
    }
    Some(LdlFactor { perm, l, d, rank })
}

#[derive(Clone, Debug)]
pub struct CertificateGram {
    pub problem: GramProblem,
    /// G = m·Σₖ cₖ·cₖᵀ over the certificate basis.
    pub entries: Vec<Vec<BigRational>>,
    pub ldl: Option<LdlFactor>,
    /// Float view of the exact data; `status` is `Feasible` only when the
    /// exact constraint check and the exact PSD check both pass.
    pub solution: GramSolution,
}

/// Exact Gram matrix of a certificate, checked against the constraints for
/// S_{m,4}(X², Y²) and factored exactly.
pub fn gram_of_certificate(cert: &Certificate) -> Result<CertificateGram> {
    let basis: Vec<Word> = cert.basis();
    let n = basis.len();
    if n == 0 {
        return Err(Error::EmptyBasis);
    }
    let mut entries = vec![vec![BigRational::zero(); n]; n];
    for f in cert.generators() {
        let c: Vec<BigRational> = basis.iter().map(|b| f.coeff(b)).collect();
        for i in 0..n {
            if c[i].is_zero() {
                continue;
            }
            for j in 0..n {
                entries[i][j] += cert.multiplier() * &c[i] * &c[j];
            }
        }
    }
    let target = s_poly(cert.m(), 4)?.substitute_squares();
    let problem = assemble(&target, &basis)?;
    let residuals = problem.exact_residuals(&entries);
    let ldl = ldl_psd(&entries);

    let g = DMatrix::from_fn(n, n, |i, j| entries[i][j].to_f64().unwrap_or(f64::NAN));
    let min_eig = match &ldl {
        // exact: singular PSD has smallest eigenvalue exactly 0
        Some(f) if f.rank < n => 0.0,
        _ => min_eigenvalue(&g),
    };
    let scale = problem.max_abs_rhs().max(1.0);
    let worst = residuals.iter().map(|(_, r)| r.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
    let exact_ok = residuals.is_empty() && !problem.trivially_infeasible();
    let status = if exact_ok && ldl.is_some() { Status::Feasible } else { Status::InfeasibleGap };
    let solution =
        GramSolution { dim: n, g, min_eigenvalue: min_eig, constraint_residual: worst / scale, status, iterations: 0, gap: None };
    Ok(CertificateGram { problem, entries, ldl, solution })
}
