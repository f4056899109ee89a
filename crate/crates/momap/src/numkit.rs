//! Shared numerical kernel.
//!
//! Everything downstream funnels its linear algebra through this module:
//! the Hermitian eigendecomposition contract (sorted spectra, defensive
//! symmetrization), the minimum-norm point of a convex hull, tangent-space
//! projection on projective space, and the finite-difference gradient used
//! as the one derivative oracle for every analytic formula in the crate.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::{C64, CMatrix, CVector};

/// Numerical tolerances shared across the crate.
///
/// `eig_tol` thresholds spectra and singular values, `dedupe_tol` merges
/// nearby critical values, `flow_tol` is the gradient-residual stopping
/// criterion of the flows, and `fd_step` the central-difference step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub eig_tol: f64,
    pub dedupe_tol: f64,
    pub flow_tol: f64,
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eig_tol: 1e-10,
            dedupe_tol: 1e-9,
            flow_tol: 1e-8,
            fd_step: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        if self.eig_tol > 0.0 && self.dedupe_tol > 0.0 && self.flow_tol > 0.0 && self.fd_step > 0.0
        {
            Ok(())
        } else {
            Err(Error::InvalidArgument(
                "tolerances must all be positive".into(),
            ))
        }
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted
/// nonincreasing and eigenvectors in matching column order.
///
/// The input is symmetrized as `(A + A†)/2` before factorization, so
/// callers may pass matrices that are Hermitian only up to roundoff.
pub fn eigh(matrix: &CMatrix) -> (Vec<f64>, CMatrix) {
    assert_eq!(matrix.nrows(), matrix.ncols(), "eigh requires square input");
    let n = matrix.nrows();
    let herm = (matrix + matrix.adjoint()).scale(0.5);
    let decomp = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        decomp.eigenvalues[b]
            .partial_cmp(&decomp.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let values: Vec<f64> = order.iter().map(|&i| decomp.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &decomp.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Eigenvalues only, sorted nonincreasing.
pub fn eigvalsh(matrix: &CMatrix) -> Vec<f64> {
    let herm = (matrix + matrix.adjoint()).scale(0.5);
    let mut values: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    values
}

/// Numerical rank of a real matrix: singular values below
/// `rel_tol * σ_max` count as zero. A matrix whose largest singular value
/// is itself at roundoff scale (below `1e−12`) has rank zero; otherwise
/// the relative threshold would count pure noise.
pub fn real_rank(matrix: &DMatrix<f64>, rel_tol: f64) -> usize {
    if matrix.is_empty() {
        return 0;
    }
    let svals = matrix.clone().singular_values();
    let max = svals.max();
    if max <= 1e-12 {
        return 0;
    }
    svals.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Result of a minimum-norm-point computation: the point itself and the
/// convex coefficients over the input list (zero off the support).
#[derive(Debug, Clone)]
pub struct MinNormPoint {
    pub point: DVector<f64>,
    pub coefficients: Vec<f64>,
}

/// Projection of the origin onto the affine hull of `points`, solved via
/// the bordered Gram system.
///
/// Returns `None` when the points are affinely dependent (singular
/// system). The returned coefficients are affine (sum to one) and may be
/// negative; the projection lies in the convex hull iff they are all
/// nonnegative.
pub fn affine_min_norm(points: &[DVector<f64>]) -> Option<(DVector<f64>, Vec<f64>)> {
    let n = points.len();
    if n == 0 {
        return None;
    }
    let dim = points[0].len();
    let mut system = DMatrix::<f64>::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            system[(i, j)] = points[i].dot(&points[j]);
        }
        system[(i, n)] = 1.0;
        system[(n, i)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(n + 1);
    rhs[n] = 1.0;
    let lu = system.clone().lu();
    let sol = lu.solve(&rhs)?;
    // Reject near-singular solves that sneak past the LU pivot check.
    if (&system * &sol - &rhs).amax() > 1e-9 * (1.0 + sol.amax()) {
        return None;
    }
    let coeffs: Vec<f64> = sol.iter().take(n).copied().collect();
    let mut point = DVector::<f64>::zeros(dim);
    for (c, p) in coeffs.iter().zip(points) {
        point.axpy(*c, p, 1.0);
    }
    Some((point, coeffs))
}

/// Minimum-norm point of the convex hull of `points` (Wolfe's active-set
/// iteration over affinely independent corrals).
///
/// Ties in the linear oracle break by lexicographic point order, so the
/// result is deterministic. The output satisfies the KKT certificate
/// `⟨p − β, β⟩ ≥ −1e−9` for every input point `p`, has nonnegative
/// coefficients summing to one, and reproduces `β` to `1e−10`.
pub fn min_norm_point(points: &[DVector<f64>]) -> Result<MinNormPoint> {
    if points.is_empty() {
        return Err(Error::InvalidArgument(
            "min_norm_point requires a nonempty point list".into(),
        ));
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::Dimension(
            "min_norm_point requires points of a common dimension".into(),
        ));
    }

    let lex_less = |a: &DVector<f64>, b: &DVector<f64>| -> bool {
        for (x, y) in a.iter().zip(b.iter()) {
            if x < y {
                return true;
            }
            if x > y {
                return false;
            }
        }
        false
    };

    // Start from the shortest point, lexicographic on ties.
    let mut start = 0usize;
    for j in 1..points.len() {
        let ns = points[start].norm_squared();
        let nj = points[j].norm_squared();
        if nj < ns - 1e-15 || ((nj - ns).abs() <= 1e-15 && lex_less(&points[j], &points[start])) {
            start = j;
        }
    }

    let mut corral: Vec<usize> = vec![start];
    let mut weights: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();
    let scale = points.iter().map(|p| p.norm_squared()).fold(0.0, f64::max);
    let stop_tol = 1e-12 * (1.0 + scale);

    for _major in 0..(points.len() * points.len() + 64) {
        // Linear oracle: most-improving vertex.
        let mut best = 0usize;
        let mut best_val = f64::INFINITY;
        for (j, p) in points.iter().enumerate() {
            let val = p.dot(&x);
            if val < best_val - 1e-15
                || ((val - best_val).abs() <= 1e-15 && lex_less(p, &points[best]))
            {
                best = j;
                best_val = val;
            }
        }
        if best_val >= x.norm_squared() - stop_tol || corral.contains(&best) {
            break;
        }
        corral.push(best);
        weights.push(0.0);

        // Minor cycle: restore an affinely independent corral whose affine
        // minimizer is a convex combination.
        loop {
            let subset: Vec<DVector<f64>> = corral.iter().map(|&i| points[i].clone()).collect();
            match affine_min_norm(&subset) {
                Some((point, coeffs)) if coeffs.iter().all(|&c| c > -1e-12) => {
                    weights = coeffs;
                    x = point;
                    break;
                }
                Some((_, coeffs)) => {
                    // Step towards the affine minimizer until a weight hits zero.
                    let mut theta = f64::INFINITY;
                    for (w, v) in weights.iter().zip(coeffs.iter()) {
                        if *v <= 1e-12 && w - v > 0.0 {
                            theta = theta.min(w / (w - v));
                        }
                    }
                    let theta = theta.clamp(0.0, 1.0);
                    for (w, v) in weights.iter_mut().zip(coeffs.iter()) {
                        *w = theta * v + (1.0 - theta) * *w;
                    }
                    let mut keep_idx = Vec::new();
                    let mut keep_w = Vec::new();
                    for (pos, &i) in corral.iter().enumerate() {
                        if weights[pos] > 1e-12 {
                            keep_idx.push(i);
                            keep_w.push(weights[pos]);
                        }
                    }
                    if keep_idx.is_empty() {
                        // Numerical corner: fall back to the newest vertex.
                        keep_idx.push(*corral.last().expect("corral is nonempty"));
                        keep_w.push(1.0);
                    }
                    corral = keep_idx;
                    weights = keep_w;
                }
                None => {
                    // Affinely dependent corral: drop the smallest-weight
                    // older vertex and retry.
                    let newest = corral.len() - 1;
                    let drop_pos = weights[..newest]
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.partial_cmp(b.1).expect("weights are finite"))
                        .map(|(pos, _)| pos)
                        .unwrap_or(0);
                    corral.remove(drop_pos);
                    weights.remove(drop_pos);
                }
            }
            if corral.len() == 1 {
                weights = vec![1.0];
                x = points[corral[0]].clone();
                break;
            }
        }
    }

    let mut coefficients = vec![0.0; points.len()];
    for (pos, &i) in corral.iter().enumerate() {
        coefficients[i] += weights[pos].max(0.0);
    }
    let total: f64 = coefficients.iter().sum();
    if total > 0.0 {
        for c in coefficients.iter_mut() {
            *c /= total;
        }
    }
    let mut point = DVector::<f64>::zeros(dim);
    for (c, p) in coefficients.iter().zip(points) {
        point.axpy(*c, p, 1.0);
    }
    Ok(MinNormPoint {
        point,
        coefficients,
    })
}

/// Fubini–Study tangent projection at a unit vector `v`:
/// `w ↦ w − ⟨v,w⟩v`, removing the complex line through `v` (radial and
/// phase directions at once).
pub fn tangent_project(v: &CVector, w: &CVector) -> CVector {
    let overlap = v.dotc(w);
    w - v.scale_complex(overlap)
}

trait ScaleComplex {
    fn scale_complex(&self, factor: C64) -> CVector;
}

impl ScaleComplex for CVector {
    fn scale_complex(&self, factor: C64) -> CVector {
        self.map(|x| x * factor)
    }
}

/// Central-difference gradient of a phase-invariant scalar function on the
/// unit sphere, expressed over a real orthonormal tangent frame at `v`.
///
/// Serves as the independent derivative oracle for the analytic gradients
/// used by the flows; it has no business on any hot path.
pub fn fd_gradient<F>(f: F, v: &CVector, step: f64) -> CVector
where
    F: Fn(&CVector) -> f64,
{
    let n = v.len();
    let frame = tangent_frame(v);
    let mut grad = CVector::zeros(n);
    for t in &frame {
        let plus = renormalize(&(v + t.scale(step)));
        let minus = renormalize(&(v - t.scale(step)));
        let deriv = (f(&plus) - f(&minus)) / (2.0 * step);
        grad += t.scale(deriv);
    }
    grad
}

/// Real orthonormal frame of the projective tangent space at unit `v`:
/// a complex orthonormal completion `{e_j}` of `v` together with `{i e_j}`.
fn tangent_frame(v: &CVector) -> Vec<CVector> {
    let n = v.len();
    let mut basis: Vec<CVector> = vec![v.clone()];
    for k in 0..n {
        if basis.len() == n {
            break;
        }
        let mut cand = CVector::zeros(n);
        cand[k] = C64::new(1.0, 0.0);
        for b in &basis {
            let overlap = b.dotc(&cand);
            cand -= b.map(|x| x * overlap);
        }
        let norm = cand.norm();
        if norm > 1e-8 {
            basis.push(cand.unscale(norm));
        }
    }
    let mut frame = Vec::with_capacity(2 * (n - 1));
    for b in basis.iter().skip(1) {
        frame.push(b.clone());
        frame.push(b.map(|x| x * C64::new(0.0, 1.0)));
    }
    frame
}

fn renormalize(v: &CVector) -> CVector {
    v.unscale(v.norm())
}

/// Orthonormal basis of traceless Hermitian `n×n` matrices with respect to
/// the trace inner product `⟨X,Y⟩ = Tr(XY)`.
pub fn hermitian_traceless_basis(n: usize) -> Vec<CMatrix> {
    let mut out = Vec::with_capacity(n * n - 1);
    let inv_sqrt2 = 1.0 / 2.0_f64.sqrt();
    for a in 0..n {
        for b in (a + 1)..n {
            let mut sym = CMatrix::zeros(n, n);
            sym[(a, b)] = C64::new(inv_sqrt2, 0.0);
            sym[(b, a)] = C64::new(inv_sqrt2, 0.0);
            out.push(sym);
            let mut asym = CMatrix::zeros(n, n);
            asym[(a, b)] = C64::new(0.0, -inv_sqrt2);
            asym[(b, a)] = C64::new(0.0, inv_sqrt2);
            out.push(asym);
        }
    }
    for j in 1..n {
        let norm = 1.0 / ((j * (j + 1)) as f64).sqrt();
        let mut diag = CMatrix::zeros(n, n);
        for i in 0..j {
            diag[(i, i)] = C64::new(norm, 0.0);
        }
        diag[(j, j)] = C64::new(-(j as f64) * norm, 0.0);
        out.push(diag);
    }
    out
}

/// Basis of the real Lie algebra `su(n)` (anti-Hermitian traceless),
/// obtained by multiplying the Hermitian basis by `i`.
pub fn su_basis(n: usize) -> Vec<CMatrix> {
    hermitian_traceless_basis(n)
        .into_iter()
        .map(|m| m.map(|x| x * C64::new(0.0, 1.0)))
        .collect()
}
