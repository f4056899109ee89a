//! Geometry of isospectral orbits through mixed states.
//!
//! A local unitary group `K` acts on a density matrix by conjugation; the
//! orbit `K.ρ` carries the restriction of the Kirillov–Kostant–Souriau
//! form `ω(ξ̂₁, ξ̂₂) = −(i/2)Tr(ρ[ξ₁, ξ₂])`. Three integers summarize the
//! local geometry: the orbit dimension (complement of the stabilizer
//! kernel), the rank of `ω` restricted to the orbit, and the degeneracy
//! `D(K.ρ) = dim K.ρ − dim Ad_K μ(ρ)` measuring how far the momentum map
//! is from being injective on the orbit. The orbit is symplectic exactly
//! when the rank fills the dimension.
//!
//! Zero-discord states are detected structurally: `ρ` is classical on
//! side A iff the A-side operators of its expansion over a Hermitian
//! basis of side B pairwise commute (no eigenbasis selection, so B-side
//! degeneracy costs nothing), and classical-classical iff that holds on
//! both sides. Classical states are the orbits whose stabilizer contains
//! a maximal torus, which is where the Euler characteristic
//! `χ(K/K_x) = |W_K|/|W_{K_x}|` switches from zero to a positive count of
//! Weyl-chamber configurations.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numkit::{self, hermitian_traceless_basis, su_basis};
use crate::state::DensityMatrix;
use crate::CMatrix;

/// Relative threshold for numerical ranks: singular values below
/// `1e−8 · σ_max` count as zero.
pub const RANK_REL_TOL: f64 = 1e-8;

/// Commutator-norm threshold of the zero-discord tests.
pub const COMMUTE_TOL: f64 = 1e-9;

/// Per-factor choice of the acting group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorSpec {
    /// The full special unitary group of the factor.
    Full,
    /// The identity on the factor.
    Trivial,
}

/// Which product of local special unitary groups acts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    factors: Vec<FactorSpec>,
}

impl GroupSpec {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        if factors.iter().all(|&f| f == FactorSpec::Trivial) {
            return Err(Error::InvalidArgument(
                "at least one group factor must be nontrivial".into(),
            ));
        }
        Ok(Self { factors })
    }

    /// `SU(N_1) × … × SU(N_L)`.
    pub fn full(parties: usize) -> Result<Self> {
        Self::new(vec![FactorSpec::Full; parties])
    }

    /// `SU(N_1) × I` on a bipartite system.
    pub fn a_only() -> Self {
        Self {
            factors: vec![FactorSpec::Full, FactorSpec::Trivial],
        }
    }

    pub fn factors(&self) -> &[FactorSpec] {
        &self.factors
    }

    fn check(&self, rho: &DensityMatrix) -> Result<()> {
        if self.factors.len() != rho.dims().len() {
            return Err(Error::Dimension(format!(
                "group has {} factors, state has {} parties",
                self.factors.len(),
                rho.dims().len()
            )));
        }
        Ok(())
    }

    /// Real dimension of the acting group.
    pub fn dim(&self, dims: &[usize]) -> usize {
        self.factors
            .iter()
            .zip(dims)
            .map(|(f, &n)| match f {
                FactorSpec::Full => n * n - 1,
                FactorSpec::Trivial => 0,
            })
            .sum()
    }

    /// Order of the Weyl group `∏ N_k!` over the full factors.
    pub fn weyl_order(&self, dims: &[usize]) -> u64 {
        self.factors
            .iter()
            .zip(dims)
            .map(|(f, &n)| match f {
                FactorSpec::Full => factorial(n),
                FactorSpec::Trivial => 1,
            })
            .product()
    }

    /// Embedded anti-Hermitian basis of the acting Lie algebra.
    fn algebra_basis(&self, dims: &[usize]) -> Vec<CMatrix> {
        let mut out = Vec::new();
        for (k, (&spec, &nk)) in self.factors.iter().zip(dims).enumerate() {
            if spec == FactorSpec::Trivial {
                continue;
            }
            for x in su_basis(nk) {
                out.push(embed_factor(dims, k, &x));
            }
        }
        out
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// `I ⊗ … ⊗ X ⊗ … ⊗ I` with `X` in slot `k`.
fn embed_factor(dims: &[usize], k: usize, x: &CMatrix) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for (j, &d) in dims.iter().enumerate() {
        let factor = if j == k {
            x.clone()
        } else {
            CMatrix::identity(d, d)
        };
        out = out.kronecker(&factor);
    }
    out
}

/// Dimension of the stabilizer algebra `{ξ ∈ 𝔨 : [ξ, ρ] = 0}`, computed
/// as the kernel dimension of the commutator map over the algebra basis.
pub fn stabilizer_dim(rho: &DensityMatrix, group: &GroupSpec) -> Result<usize> {
    group.check(rho)?;
    let basis = group.algebra_basis(rho.dims());
    Ok(basis.len() - commutator_rank(rho, &basis))
}

/// Real dimension of the orbit `K.ρ` (rank of the commutator map).
pub fn orbit_dim(rho: &DensityMatrix, group: &GroupSpec) -> Result<usize> {
    group.check(rho)?;
    let basis = group.algebra_basis(rho.dims());
    Ok(commutator_rank(rho, &basis))
}

fn commutator_rank(rho: &DensityMatrix, basis: &[CMatrix]) -> usize {
    let d = rho.total_dim();
    let mut map = nalgebra::DMatrix::<f64>::zeros(2 * d * d, basis.len());
    for (col, xi) in basis.iter().enumerate() {
        let comm = xi * rho.matrix() - rho.matrix() * xi;
        for (idx, entry) in comm.iter().enumerate() {
            map[(2 * idx, col)] = entry.re;
            map[(2 * idx + 1, col)] = entry.im;
        }
    }
    numkit::real_rank(&map, RANK_REL_TOL)
}

/// Rank of the symplectic form restricted to the orbit:
/// the rank of `Ω_ab = −(i/2)Tr(ρ[ξ_a, ξ_b])` over an algebra basis
/// (stabilizer directions lie in the kernel automatically, so no
/// quotient bookkeeping is needed).
pub fn omega_rank(rho: &DensityMatrix, group: &GroupSpec) -> Result<usize> {
    group.check(rho)?;
    let basis = group.algebra_basis(rho.dims());
    let n = basis.len();
    let mut omega = nalgebra::DMatrix::<f64>::zeros(n, n);
    let products: Vec<CMatrix> = basis.iter().map(|xi| rho.matrix() * xi).collect();
    for a in 0..n {
        for b in (a + 1)..n {
            // −(i/2)Tr(ρ[ξ_a,ξ_b]) = −(i/2)(Tr(ρξ_aξ_b) − Tr(ρξ_bξ_a));
            // with ρξ precomputed, Tr(ρ ξ_a ξ_b) = Tr((ρξ_a)ξ_b).
            let t_ab = (&products[a] * &basis[b]).trace();
            let t_ba = (&products[b] * &basis[a]).trace();
            let value = Complex64::new(0.0, -0.5) * (t_ab - t_ba);
            omega[(a, b)] = value.re;
            omega[(b, a)] = -value.re;
        }
    }
    let mut rank = numkit::real_rank(&omega, RANK_REL_TOL);
    // Singular values of a real antisymmetric matrix pair up; a stray odd
    // count is a borderline threshold artifact.
    rank -= rank % 2;
    Ok(rank)
}

/// Degeneracy `D(K.ρ) = dim K.ρ − dim Ad_K μ(ρ)`, with the adjoint-orbit
/// dimension of each reduced block read off its eigenvalue multiplicities.
pub fn degeneracy_d(rho: &DensityMatrix, group: &GroupSpec) -> Result<i64> {
    group.check(rho)?;
    let orbit = orbit_dim(rho, group)? as i64;
    let mut adjoint = 0i64;
    for (k, (&spec, &nk)) in group.factors.iter().zip(rho.dims()).enumerate() {
        if spec == FactorSpec::Trivial {
            continue;
        }
        let reduced = rho.reduced(k)?;
        let block = reduced - CMatrix::identity(nk, nk).scale(1.0 / nk as f64);
        let eigs = numkit::eigvalsh(&block);
        let mults = cluster_multiplicities(&eigs, 1e-8);
        let centralizer: usize = mults.iter().map(|&m| m * m).sum();
        adjoint += (nk * nk - centralizer) as i64;
    }
    Ok(orbit - adjoint)
}

fn cluster_multiplicities(sorted_desc: &[f64], tol: f64) -> Vec<usize> {
    let mut mults = Vec::new();
    let mut count = 0usize;
    for (i, &e) in sorted_desc.iter().enumerate() {
        if i == 0 || (sorted_desc[i - 1] - e).abs() <= tol {
            count += 1;
        } else {
            mults.push(count);
            count = 1;
        }
        let _ = e;
    }
    if count > 0 {
        mults.push(count);
    }
    mults
}

/// Orthonormal Hermitian basis of `n×n` matrices (identity included).
fn hermitian_onb(n: usize) -> Vec<CMatrix> {
    let mut basis = vec![CMatrix::identity(n, n).scale(1.0 / (n as f64).sqrt())];
    basis.extend(hermitian_traceless_basis(n));
    basis
}

/// A-side expansion family of a bipartite state: the operators `A_m` in
/// `ρ = Σ_m A_m ⊗ Y_m` over an orthonormal Hermitian basis `{Y_m}` of
/// side B.
fn side_a_family(rho: &DensityMatrix) -> Result<Vec<CMatrix>> {
    let [na, nb] = bipartite_dims(rho)?;
    Ok(hermitian_onb(nb)
        .iter()
        .map(|y| {
            let mut a = CMatrix::zeros(na, na);
            for i in 0..na {
                for i2 in 0..na {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for j in 0..nb {
                        for j2 in 0..nb {
                            acc += rho.matrix()[(i * nb + j, i2 * nb + j2)] * y[(j2, j)];
                        }
                    }
                    a[(i, i2)] = acc;
                }
            }
            a
        })
        .collect())
}

/// B-side expansion family (mirror of [`side_a_family`]).
fn side_b_family(rho: &DensityMatrix) -> Result<Vec<CMatrix>> {
    let [na, nb] = bipartite_dims(rho)?;
    Ok(hermitian_onb(na)
        .iter()
        .map(|x| {
            let mut b = CMatrix::zeros(nb, nb);
            for j in 0..nb {
                for j2 in 0..nb {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for i in 0..na {
                        for i2 in 0..na {
                            acc += rho.matrix()[(i * nb + j, i2 * nb + j2)] * x[(i2, i)];
                        }
                    }
                    b[(j, j2)] = acc;
                }
            }
            b
        })
        .collect())
}

fn bipartite_dims(rho: &DensityMatrix) -> Result<[usize; 2]> {
    match rho.dims() {
        [na, nb] => Ok([*na, *nb]),
        _ => Err(Error::InvalidArgument(
            "this operation needs a bipartite density matrix".into(),
        )),
    }
}

fn family_commutes(family: &[CMatrix]) -> bool {
    for (i, a) in family.iter().enumerate() {
        for b in family.iter().skip(i + 1) {
            if (a * b - b * a).norm() > COMMUTE_TOL {
                return false;
            }
        }
    }
    true
}

/// Classical-quantum test (classical on side A): true iff the A-side
/// expansion family is pairwise commuting, i.e.
/// `ρ = Σ_i p_i |i⟩⟨i| ⊗ ρ_i` in some A-basis.
pub fn is_cq(rho: &DensityMatrix) -> Result<bool> {
    Ok(family_commutes(&side_a_family(rho)?))
}

/// Classical on side B.
pub fn is_cq_b_side(rho: &DensityMatrix) -> Result<bool> {
    Ok(family_commutes(&side_b_family(rho)?))
}

/// Classical-classical test: classical on both sides, i.e.
/// `ρ = Σ_ij p_ij |ij⟩⟨ij|` in some product basis.
pub fn is_cc(rho: &DensityMatrix) -> Result<bool> {
    Ok(is_cq(rho)? && is_cq_b_side(rho)?)
}

/// Simultaneously diagonalize a commuting Hermitian family: eigenbasis of
/// a generic linear combination, validated against every family member.
fn simultaneous_diagonalizer(family: &[CMatrix]) -> Option<CMatrix> {
    let n = family.first()?.nrows();
    // Deterministic "generic" coefficient sets; retry on the measure-zero
    // collisions where a combination fails to split a joint eigenspace.
    for attempt in 0..4u32 {
        let mut combo = CMatrix::zeros(n, n);
        let mut c = 0.318_309_886_183_790_7 + attempt as f64;
        for a in family {
            c = (c * 1.618_033_988_749_895).fract() + 0.1;
            combo += a.scale(c);
        }
        let (_, vectors) = numkit::eigh(&combo);
        let ok = family.iter().all(|a| {
            let rotated = vectors.adjoint() * a * &vectors;
            let mut off = 0.0f64;
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        off = off.max(rotated[(i, j)].norm());
                    }
                }
            }
            off < 1e-7
        });
        if ok {
            return Some(vectors);
        }
    }
    None
}

/// Euler characteristic `χ(K.ρ)` via the torus-containment criterion.
///
/// The stabilizer contains a maximal torus of `K` exactly when `ρ` is
/// classical on every full factor (CC for `SU(N₁)×SU(N₂)`, CQ for
/// `SU(N₁)×I`); then `χ = |W_K|/|W_{K_x}|` with the stabilizer Weyl order
/// read off the multiplicity pattern of identical classical blocks, and
/// otherwise `χ = 0`.
pub fn euler_characteristic(rho: &DensityMatrix, group: &GroupSpec) -> Result<i64> {
    group.check(rho)?;
    let [na, nb] = bipartite_dims(rho)?;
    let w_k = group.weyl_order(rho.dims()) as i64;
    match (group.factors[0], group.factors[1]) {
        (FactorSpec::Full, FactorSpec::Full) => {
            if !is_cc(rho)? {
                return Ok(0);
            }
            let ua = match simultaneous_diagonalizer(&side_a_family(rho)?) {
                Some(u) => u,
                None => return Ok(0),
            };
            let ub = match simultaneous_diagonalizer(&side_b_family(rho)?) {
                Some(u) => u,
                None => return Ok(0),
            };
            let u = ua.kronecker(&ub);
            let diag = u.adjoint() * rho.matrix() * &u;
            let mut p = nalgebra::DMatrix::<f64>::zeros(na, nb);
            for i in 0..na {
                for j in 0..nb {
                    p[(i, j)] = diag[(i * nb + j, i * nb + j)].re;
                }
            }
            let rows: Vec<Vec<f64>> = (0..na).map(|i| p.row(i).iter().copied().collect()).collect();
            let cols: Vec<Vec<f64>> = (0..nb).map(|j| p.column(j).iter().copied().collect()).collect();
            let w_x = group_pattern_order(&rows) * group_pattern_order(&cols);
            Ok(w_k / w_x)
        }
        (FactorSpec::Full, FactorSpec::Trivial) => {
            if !is_cq(rho)? {
                return Ok(0);
            }
            let ua = match simultaneous_diagonalizer(&side_a_family(rho)?) {
                Some(u) => u,
                None => return Ok(0),
            };
            let u = ua.kronecker(&CMatrix::identity(nb, nb));
            let rotated = u.adjoint() * rho.matrix() * &u;
            let blocks: Vec<Vec<f64>> = (0..na)
                .map(|i| {
                    let mut flat = Vec::with_capacity(2 * nb * nb);
                    for j in 0..nb {
                        for j2 in 0..nb {
                            let e = rotated[(i * nb + j, i * nb + j2)];
                            flat.push(e.re);
                            flat.push(e.im);
                        }
                    }
                    flat
                })
                .collect();
            Ok(w_k / group_pattern_order(&blocks))
        }
        (FactorSpec::Trivial, FactorSpec::Full) => {
            if !is_cq_b_side(rho)? {
                return Ok(0);
            }
            let ub = match simultaneous_diagonalizer(&side_b_family(rho)?) {
                Some(u) => u,
                None => return Ok(0),
            };
            let u = CMatrix::identity(na, na).kronecker(&ub);
            let rotated = u.adjoint() * rho.matrix() * &u;
            let blocks: Vec<Vec<f64>> = (0..nb)
                .map(|j| {
                    let mut flat = Vec::with_capacity(2 * na * na);
                    for i in 0..na {
                        for i2 in 0..na {
                            let e = rotated[(i * nb + j, i2 * nb + j)];
                            flat.push(e.re);
                            flat.push(e.im);
                        }
                    }
                    flat
                })
                .collect();
            Ok(w_k / group_pattern_order(&blocks))
        }
        (FactorSpec::Trivial, FactorSpec::Trivial) => unreachable!("validated in GroupSpec::new"),
    }
}

/// `∏ (group size)!` over groups of identical vectors (tolerance 1e−8).
fn group_pattern_order(items: &[Vec<f64>]) -> i64 {
    let mut used = vec![false; items.len()];
    let mut order = 1i64;
    for i in 0..items.len() {
        if used[i] {
            continue;
        }
        let mut size = 1usize;
        for j in (i + 1)..items.len() {
            if !used[j]
                && items[i]
                    .iter()
                    .zip(&items[j])
                    .all(|(x, y)| (x - y).abs() <= 1e-8)
            {
                used[j] = true;
                size += 1;
            }
        }
        order *= factorial(size) as i64;
    }
    order
}

/// The full geometric profile of an orbit through a mixed state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct OrbitReport {
    pub orbit_dim: usize,
    pub stabilizer_dim: usize,
    pub omega_rank: usize,
    pub degeneracy_d: i64,
    pub euler_chi: i64,
    pub is_symplectic: bool,
    pub is_cq: bool,
    pub is_cc: bool,
}

/// Assemble every orbit quantity for a bipartite mixed state.
pub fn orbit_report(rho: &DensityMatrix, group: &GroupSpec) -> Result<OrbitReport> {
    let orbit = orbit_dim(rho, group)?;
    let stab = group.dim(rho.dims()) - orbit;
    let rank = omega_rank(rho, group)?;
    let degeneracy = degeneracy_d(rho, group)?;
    let chi = euler_characteristic(rho, group)?;
    Ok(OrbitReport {
        orbit_dim: orbit,
        stabilizer_dim: stab,
        omega_rank: rank,
        degeneracy_d: degeneracy,
        euler_chi: chi,
        is_symplectic: rank == orbit,
        is_cq: is_cq(rho)?,
        is_cc: is_cc(rho)?,
    })
}

/// One grid point of the two-qubit CC-simplex scan.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct CcScanRow {
    pub p: [f64; 4],
    pub orbit_dim: usize,
    pub omega_rank: usize,
    pub degeneracy_d: i64,
    pub euler_chi: i64,
}

/// Scan the three-simplex of two-qubit CC states `Σ p_ij |ij⟩⟨ij|` on a
/// grid with `n` subdivisions, reporting the orbit profile under
/// `SU(2)×SU(2)` at every point.
pub fn cc_simplex_scan(n: usize) -> Result<Vec<CcScanRow>> {
    if n == 0 {
        return Err(Error::InvalidArgument("grid must have at least one cell".into()));
    }
    let group = GroupSpec::full(2)?;
    let mut rows = Vec::new();
    for i in 0..=n {
        for j in 0..=(n - i) {
            for k in 0..=(n - i - j) {
                let l = n - i - j - k;
                let p = [
                    i as f64 / n as f64,
                    j as f64 / n as f64,
                    k as f64 / n as f64,
                    l as f64 / n as f64,
                ];
                let rho = crate::catalog::cc_diagonal(&p)?;
                rows.push(CcScanRow {
                    p,
                    orbit_dim: orbit_dim(&rho, &group)?,
                    omega_rank: omega_rank(&rho, &group)?,
                    degeneracy_d: degeneracy_d(&rho, &group)?,
                    euler_chi: euler_characteristic(&rho, &group)?,
                });
            }
        }
    }
    Ok(rows)
}
