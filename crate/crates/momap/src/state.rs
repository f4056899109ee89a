//! Tensor states over declared particle sectors.
//!
//! A [`PureState`] is a unit amplitude tensor over a [`SectorSpec`]:
//! distinguishable particles with local dimensions `N_1..N_L`, or `L`
//! identical `d`-state bosons/fermions. Indistinguishable states are
//! stored as the embedded full tensor of dimension `d^L` with the
//! (anti)symmetry enforced, which keeps a single partial-trace kernel for
//! every sector at desk scale.
//!
//! Flattening convention (the wire convention for all JSON formats):
//! subsystems are 0-based and the tensor is flattened row-major with the
//! most significant slot first, so for qubits the basis state
//! `|b_1 b_2 … b_L⟩` sits at index `b_1·2^{L−1} + … + b_L`.

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{C64, CMatrix, CVector};

/// Exchange statistics of the particles making up a sector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorKind {
    Distinguishable,
    Bosonic,
    Fermionic,
}

/// Declares the Hilbert space a state lives in.
///
/// `dims` holds the local dimensions `N_1..N_L` for distinguishable
/// particles, and the pair `[d, L]` for bosons and fermions.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SectorSpec {
    kind: SectorKind,
    dims: Vec<usize>,
}

impl SectorSpec {
    /// `L` distinguishable particles with the given local dimensions.
    pub fn distinguishable(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Sector("at least one subsystem required".into()));
        }
        if dims.iter().any(|&d| d < 2) {
            return Err(Error::Sector("all local dimensions must be >= 2".into()));
        }
        Ok(Self {
            kind: SectorKind::Distinguishable,
            dims: dims.to_vec(),
        })
    }

    /// `l` identical `d`-state bosons.
    pub fn bosonic(d: usize, l: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Sector("single-particle dimension must be >= 2".into()));
        }
        if l == 0 {
            return Err(Error::Sector("particle count must be positive".into()));
        }
        Ok(Self {
            kind: SectorKind::Bosonic,
            dims: vec![d, l],
        })
    }

    /// `l` identical `d`-state fermions; requires `l <= d`.
    pub fn fermionic(d: usize, l: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::Sector("single-particle dimension must be >= 2".into()));
        }
        if l == 0 {
            return Err(Error::Sector("particle count must be positive".into()));
        }
        if l > d {
            return Err(Error::Sector(format!(
                "fermionic sector needs L <= d, got L={l}, d={d}"
            )));
        }
        Ok(Self {
            kind: SectorKind::Fermionic,
            dims: vec![d, l],
        })
    }

    /// Rebuild a spec from its wire fields, revalidating the invariants.
    pub fn from_parts(kind: SectorKind, dims: &[usize]) -> Result<Self> {
        match kind {
            SectorKind::Distinguishable => Self::distinguishable(dims),
            SectorKind::Bosonic | SectorKind::Fermionic => {
                if dims.len() != 2 {
                    return Err(Error::Sector(
                        "bosonic/fermionic dims must be [d, L]".into(),
                    ));
                }
                if kind == SectorKind::Bosonic {
                    Self::bosonic(dims[0], dims[1])
                } else {
                    Self::fermionic(dims[0], dims[1])
                }
            }
        }
    }

    pub fn kind(&self) -> SectorKind {
        self.kind
    }

    /// Raw dims field as declared (see type docs for its meaning per kind).
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Number of tensor slots `L`.
    pub fn num_slots(&self) -> usize {
        match self.kind {
            SectorKind::Distinguishable => self.dims.len(),
            _ => self.dims[1],
        }
    }

    /// Number of subsystems a reduced density matrix can be taken over:
    /// `L` for distinguishable particles, 1 for identical particles.
    pub fn num_subsystems(&self) -> usize {
        match self.kind {
            SectorKind::Distinguishable => self.dims.len(),
            _ => 1,
        }
    }

    /// Dimension of each tensor slot of the embedded full tensor.
    pub fn slot_dims(&self) -> Vec<usize> {
        match self.kind {
            SectorKind::Distinguishable => self.dims.clone(),
            _ => vec![self.dims[0]; self.dims[1]],
        }
    }

    /// Dimension of the embedded full tensor (`∏N_k` or `d^L`); this is
    /// the length of the amplitude vector on the wire.
    pub fn embedded_dim(&self) -> usize {
        self.slot_dims().iter().product()
    }

    /// Dimension of the abstract sector Hilbert space: `∏N_k`,
    /// `C(d+L−1, L)` or `C(d, L)`.
    pub fn sector_dim(&self) -> usize {
        match self.kind {
            SectorKind::Distinguishable => self.embedded_dim(),
            SectorKind::Bosonic => binomial(self.dims[0] + self.dims[1] - 1, self.dims[1]),
            SectorKind::Fermionic => binomial(self.dims[0], self.dims[1]),
        }
    }

    /// True for a distinguishable sector whose subsystems are all qubits.
    pub fn is_qubits(&self) -> bool {
        self.kind == SectorKind::Distinguishable && self.dims.iter().all(|&d| d == 2)
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// A normalized pure state over a sector. Immutable after construction;
/// global phase is not fixed, and no operation in the crate observes it.
#[derive(Debug, Clone)]
pub struct PureState {
    sector: SectorSpec,
    amplitudes: CVector,
}

/// Construct a normalized state, (anti)symmetrizing indistinguishable
/// input first. This is the only door into [`PureState`].
pub fn make_state(sector: SectorSpec, amplitudes: &[C64]) -> Result<PureState> {
    if amplitudes.len() != sector.embedded_dim() {
        return Err(Error::Dimension(format!(
            "expected {} amplitudes for the sector, got {}",
            sector.embedded_dim(),
            amplitudes.len()
        )));
    }
    let raw = CVector::from_column_slice(amplitudes);
    if raw.norm() < 1e-14 {
        return Err(Error::ZeroVector("cannot normalize the zero vector".into()));
    }
    let vec = match sector.kind() {
        SectorKind::Distinguishable => raw,
        SectorKind::Bosonic => symmetrize(&raw, &sector.slot_dims(), Parity::Symmetric),
        SectorKind::Fermionic => symmetrize(&raw, &sector.slot_dims(), Parity::Antisymmetric),
    };
    let norm = vec.norm();
    if norm < 1e-14 {
        return Err(Error::ZeroVector(match sector.kind() {
            SectorKind::Fermionic => "input has zero antisymmetric part".into(),
            SectorKind::Bosonic => "input has zero symmetric part".into(),
            SectorKind::Distinguishable => "cannot normalize the zero vector".into(),
        }));
    }
    Ok(PureState {
        sector,
        amplitudes: vec.unscale(norm),
    })
}

impl PureState {
    pub fn sector(&self) -> &SectorSpec {
        &self.sector
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Rewrap a unit vector that is already a valid member of the sector.
    /// Renormalizes defensively; callers guarantee the symmetry type.
    pub(crate) fn from_normalized(sector: SectorSpec, amplitudes: CVector) -> Self {
        let norm = amplitudes.norm();
        PureState {
            sector,
            amplitudes: amplitudes.unscale(norm),
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Parity {
    Symmetric,
    Antisymmetric,
}

/// Project the full tensor onto the (anti)symmetric subspace by averaging
/// over slot permutations.
fn symmetrize(vec: &CVector, slot_dims: &[usize], parity: Parity) -> CVector {
    let l = slot_dims.len();
    let dim = vec.len();
    let mut out = CVector::zeros(dim);
    let perms: Vec<Vec<usize>> = (0..l).permutations(l).collect();
    let mut digits = vec![0usize; l];
    for idx in 0..dim {
        decode_index(idx, slot_dims, &mut digits);
        let mut acc = Complex64::new(0.0, 0.0);
        for perm in &perms {
            let sign = if parity == Parity::Antisymmetric && permutation_is_odd(perm) {
                -1.0
            } else {
                1.0
            };
            let mut src = 0usize;
            for (slot, &p) in perm.iter().enumerate() {
                src = src * slot_dims[slot] + digits[p];
            }
            acc += vec[src] * sign;
        }
        out[idx] = acc / (perms.len() as f64);
    }
    out
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut odd = false;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0usize;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = perm[cur];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

fn decode_index(mut idx: usize, slot_dims: &[usize], digits: &mut [usize]) {
    for k in (0..slot_dims.len()).rev() {
        digits[k] = idx % slot_dims[k];
        idx /= slot_dims[k];
    }
}

/// Reduced one-particle density matrix of subsystem `k`: the partial trace
/// over all other slots.
///
/// For bosons and fermions there is a single subsystem (`k = 0`) and the
/// result is the slot-0 reduced matrix of the embedded tensor, which is
/// already trace one under the trace-1 normalization convention adopted
/// here for indistinguishable particles.
pub fn reduced_density_matrix(state: &PureState, k: usize) -> Result<DensityMatrix> {
    let bound = state.sector().num_subsystems();
    if k >= bound {
        return Err(Error::Index { index: k, bound });
    }
    let slot_dims = state.sector().slot_dims();
    let rho = rdm_slot(state.amplitudes(), &slot_dims, k);
    Ok(DensityMatrix {
        dims: vec![slot_dims[k]],
        matrix: rho,
    })
}

/// Partial-trace kernel on raw amplitudes: `ρ_k[a,b] = Σ ψ[p,a,q] ψ*[p,b,q]`.
pub(crate) fn rdm_slot(amps: &CVector, slot_dims: &[usize], k: usize) -> CMatrix {
    let nk = slot_dims[k];
    let pre: usize = slot_dims[..k].iter().product();
    let post: usize = slot_dims[k + 1..].iter().product();
    let mut rho = CMatrix::zeros(nk, nk);
    for p in 0..pre {
        for a in 0..nk {
            let base_a = (p * nk + a) * post;
            for b in 0..nk {
                let base_b = (p * nk + b) * post;
                let mut acc = Complex64::new(0.0, 0.0);
                for q in 0..post {
                    acc += amps[base_a + q] * amps[base_b + q].conj();
                }
                rho[(a, b)] += acc;
            }
        }
    }
    rho
}

/// Apply `m` to slot `k` of the tensor `amps`.
pub(crate) fn apply_slot(amps: &CVector, slot_dims: &[usize], k: usize, m: &CMatrix) -> CVector {
    let nk = slot_dims[k];
    let pre: usize = slot_dims[..k].iter().product();
    let post: usize = slot_dims[k + 1..].iter().product();
    let mut out = CVector::zeros(amps.len());
    for p in 0..pre {
        for a in 0..nk {
            let base_out = (p * nk + a) * post;
            for b in 0..nk {
                let coeff = m[(a, b)];
                if coeff.norm_sqr() == 0.0 {
                    continue;
                }
                let base_in = (p * nk + b) * post;
                for q in 0..post {
                    out[base_out + q] += coeff * amps[base_in + q];
                }
            }
        }
    }
    out
}

/// Apply the slot-wise sum `Σ_k m_k^{(k)}` to the tensor.
pub(crate) fn apply_slot_sum(amps: &CVector, slot_dims: &[usize], mats: &[CMatrix]) -> CVector {
    let mut out = CVector::zeros(amps.len());
    for (k, m) in mats.iter().enumerate() {
        out += apply_slot(amps, slot_dims, k, m);
    }
    out
}

/// One matrix per subsystem, acting slot-wise as a tensor product.
/// Factors need not be unitary or determinant one, so SLOCC elements are
/// representable; they must be square and finite.
#[derive(Debug, Clone)]
pub struct LocalOperator {
    factors: Vec<CMatrix>,
}

impl LocalOperator {
    pub fn new(factors: Vec<CMatrix>) -> Result<Self> {
        for (k, f) in factors.iter().enumerate() {
            if f.nrows() != f.ncols() {
                return Err(Error::Dimension(format!("factor {k} is not square")));
            }
            if f.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "factor {k} has non-finite entries"
                )));
            }
        }
        Ok(Self { factors })
    }

    /// The same single-particle operator on every one of `l` slots
    /// (the diagonal action used by indistinguishable sectors).
    pub fn diagonal(factor: CMatrix, l: usize) -> Result<Self> {
        Self::new(vec![factor; l])
    }

    pub fn identity(slot_dims: &[usize]) -> Self {
        Self {
            factors: slot_dims.iter().map(|&d| CMatrix::identity(d, d)).collect(),
        }
    }

    pub fn factors(&self) -> &[CMatrix] {
        &self.factors
    }
}

/// Slot-wise action of a local operator followed by renormalization
/// (the projective action).
///
/// Indistinguishable sectors require all factors equal, so the result
/// stays in the (anti)symmetric subspace.
pub fn apply_local(op: &LocalOperator, state: &PureState) -> Result<PureState> {
    let slot_dims = state.sector().slot_dims();
    if op.factors.len() != slot_dims.len() {
        return Err(Error::Dimension(format!(
            "operator has {} factors, state has {} slots",
            op.factors.len(),
            slot_dims.len()
        )));
    }
    for (k, f) in op.factors.iter().enumerate() {
        if f.nrows() != slot_dims[k] {
            return Err(Error::Dimension(format!(
                "factor {k} is {}x{}, slot dimension is {}",
                f.nrows(),
                f.ncols(),
                slot_dims[k]
            )));
        }
    }
    if state.sector().kind() != SectorKind::Distinguishable {
        let first = &op.factors[0];
        if op.factors.iter().any(|f| (f - first).norm() > 1e-12) {
            return Err(Error::InvalidArgument(
                "indistinguishable sectors admit only the diagonal action U ⊗ … ⊗ U".into(),
            ));
        }
    }
    let mut amps = state.amplitudes().clone();
    for (k, f) in op.factors.iter().enumerate() {
        amps = apply_slot(&amps, &slot_dims, k, f);
    }
    let norm = amps.norm();
    if norm < 1e-14 {
        return Err(Error::ZeroVector(
            "local operator annihilates the state".into(),
        ));
    }
    Ok(PureState {
        sector: state.sector().clone(),
        amplitudes: amps.unscale(norm),
    })
}

/// Inner product `⟨a|b⟩` (antilinear in the first argument).
pub fn overlap(a: &PureState, b: &PureState) -> Result<C64> {
    if a.sector() != b.sector() {
        return Err(Error::SectorMismatch(
            "overlap requires states from the same sector".into(),
        ));
    }
    Ok(a.amplitudes().dotc(b.amplitudes()))
}

/// `|⟨a|b⟩|²`.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(overlap(a, b)?.norm_sqr())
}

/// A mixed state over distinguishable subsystems: Hermitian, trace one,
/// positive semidefinite within tolerance.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(dims: &[usize], matrix: CMatrix) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::Sector("all local dimensions must be >= 2".into()));
        }
        if matrix.nrows() != total || matrix.ncols() != total {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, dims give {}",
                matrix.nrows(),
                matrix.ncols(),
                total
            )));
        }
        if (matrix.adjoint() - &matrix).norm() > 1e-12 {
            return Err(Error::InvalidArgument("matrix is not Hermitian".into()));
        }
        if (matrix.trace() - Complex64::new(1.0, 0.0)).norm() > 1e-12 {
            return Err(Error::InvalidArgument("matrix does not have trace one".into()));
        }
        let eigs = crate::numkit::eigvalsh(&matrix);
        if eigs.iter().any(|&e| e < -1e-10) {
            return Err(Error::InvalidArgument(
                "matrix has an eigenvalue below -1e-10".into(),
            ));
        }
        Ok(Self {
            dims: dims.to_vec(),
            matrix,
        })
    }

    /// Projector `|ψ⟩⟨ψ|` of a pure state.
    pub fn from_pure(state: &PureState) -> Self {
        let amps = state.amplitudes();
        let matrix = amps * amps.adjoint();
        Self {
            dims: state.sector().slot_dims(),
            matrix,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn total_dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Partial trace keeping only subsystem `k`.
    pub fn reduced(&self, k: usize) -> Result<CMatrix> {
        if k >= self.dims.len() {
            return Err(Error::Index {
                index: k,
                bound: self.dims.len(),
            });
        }
        let nk = self.dims[k];
        let pre: usize = self.dims[..k].iter().product();
        let post: usize = self.dims[k + 1..].iter().product();
        let mut out = CMatrix::zeros(nk, nk);
        for a in 0..nk {
            for b in 0..nk {
                let mut acc = Complex64::new(0.0, 0.0);
                for p in 0..pre {
                    for q in 0..post {
                        let row = (p * nk + a) * post + q;
                        let col = (p * nk + b) * post + q;
                        acc += self.matrix[(row, col)];
                    }
                }
                out[(a, b)] = acc;
            }
        }
        Ok(out)
    }
}
