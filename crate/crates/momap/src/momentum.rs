//! The momentum map and its derived quantities.
//!
//! The momentum map of the local unitary action sends a pure state to its
//! collection of shifted reduced one-particle density matrices
//! `m_k = ρ_k − I/N_k`, one traceless Hermitian block per subsystem (a
//! single block for identical particles). Stored without the conventional
//! `i/2` prefactor so the blocks are Hermitian and match tabulated shifted
//! matrices digit for digit; the squared norm is defined as
//! `‖μ‖² = (1/4) Σ_k Tr(m_k²)`, which restores the prefactor inside the
//! total-variance relation `Var + 4‖μ‖² = const`.
//!
//! `Ψ` sorts each block's spectrum into the positive Weyl chamber. For `L`
//! qubits the image is cut out by `0 ≤ λ_l ≤ 1/2` together with the
//! polygon-type inequalities `(1/2 − λ_l) ≤ Σ_{j≠l} (1/2 − λ_j)`; this
//! module classifies membership and evaluates the reduced-space dimension
//! formulas on the interior and on each boundary class.

use crate::error::{Error, Result};
use crate::numkit;
use crate::state::{apply_slot_sum, rdm_slot, PureState, SectorKind};
use crate::{C64, CMatrix};

/// Width of the band around polytope facets inside which a spectra point
/// counts as sitting on the boundary.
pub const KIRWAN_BAND: f64 = 1e-9;

/// The value of the momentum map at a state: one traceless Hermitian
/// block per subsystem.
#[derive(Debug, Clone)]
pub struct MomentumPoint {
    blocks: Vec<CMatrix>,
}

impl MomentumPoint {
    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// `‖μ‖² = (1/4) Σ_k Tr(m_k²)`.
    pub fn norm_sq(&self) -> f64 {
        0.25
            * self
                .blocks
                .iter()
                .map(|m| (m * m).trace().re)
                .sum::<f64>()
    }

    /// Frobenius distance between two momentum values, block by block.
    pub fn distance(&self, other: &MomentumPoint) -> f64 {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a - b).norm_squared())
            .sum::<f64>()
            .sqrt()
    }
}

/// Momentum map value `m_k = ρ_k − I/N_k` for every subsystem.
pub fn momentum(state: &PureState) -> MomentumPoint {
    MomentumPoint {
        blocks: momentum_blocks(state),
    }
}

pub(crate) fn momentum_blocks(state: &PureState) -> Vec<CMatrix> {
    let slot_dims = state.sector().slot_dims();
    let subsystems = state.sector().num_subsystems();
    (0..subsystems)
        .map(|k| {
            let rho = rdm_slot(state.amplitudes(), &slot_dims, k);
            let n = slot_dims[k];
            rho - CMatrix::identity(n, n).scale(1.0 / n as f64)
        })
        .collect()
}

/// Shifted blocks for every tensor slot (identical particles get one block
/// per slot, all equal); used by the flows, which act slot-wise.
pub(crate) fn momentum_blocks_per_slot(state: &PureState) -> Vec<CMatrix> {
    let slot_dims = state.sector().slot_dims();
    match state.sector().kind() {
        SectorKind::Distinguishable => momentum_blocks(state),
        _ => {
            let block = {
                let rho = rdm_slot(state.amplitudes(), &slot_dims, 0);
                let n = slot_dims[0];
                rho - CMatrix::identity(n, n).scale(1.0 / n as f64)
            };
            vec![block; slot_dims.len()]
        }
    }
}

/// `‖μ‖²` of a state (a quarter of the summed squared block norms).
pub fn norm_mu_squared(state: &PureState) -> f64 {
    momentum(state).norm_sq()
}

/// Mean one-particle linear entropy `(1/L) Σ_k (1 − Tr ρ_k²)`.
///
/// For qubit sectors this equals `1/2 − (4/L)‖μ‖²` as an algebraic
/// identity.
pub fn mean_linear_entropy(state: &PureState) -> f64 {
    let slot_dims = state.sector().slot_dims();
    let subsystems = state.sector().num_subsystems();
    let total: f64 = (0..subsystems)
        .map(|k| {
            let rho = rdm_slot(state.amplitudes(), &slot_dims, k);
            1.0 - (&rho * &rho).trace().re
        })
        .sum();
    total / subsystems as f64
}

/// Ordered shifted spectra: the image of a state under `Ψ`, one
/// nonincreasing eigenvalue list per subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectraPoint {
    lambdas: Vec<Vec<f64>>,
}

impl SpectraPoint {
    pub fn new(lambdas: Vec<Vec<f64>>) -> Self {
        Self { lambdas }
    }

    /// Per-subsystem eigenvalue lists, each sorted nonincreasing.
    pub fn lambdas(&self) -> &[Vec<f64>] {
        &self.lambdas
    }

    /// For all-qubit spectra, the single `λ_k ∈ [0, 1/2]` per qubit
    /// (largest shifted eigenvalue). `None` if any block is not 2×2.
    pub fn qubit_lambdas(&self) -> Option<Vec<f64>> {
        if self.lambdas.iter().any(|l| l.len() != 2) {
            return None;
        }
        Some(self.lambdas.iter().map(|l| l[0]).collect())
    }

    /// Squared polytope norm `Σ_k ‖λ^{(k)}‖²/2`; for qubits this is the
    /// plain `Σ_k λ_k²` of the per-qubit coordinates.
    pub fn norm_sq(&self) -> f64 {
        self.lambdas
            .iter()
            .map(|l| l.iter().map(|x| x * x).sum::<f64>() / 2.0)
            .sum()
    }
}

/// `Ψ(state)`: nonincreasing-sorted spectra of every momentum block.
pub fn psi(state: &PureState) -> SpectraPoint {
    let lambdas = momentum_blocks(state)
        .iter()
        .map(numkit::eigvalsh)
        .collect();
    SpectraPoint { lambdas }
}

/// Location of a spectra point relative to the qubit Kirwan polytope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeLocation {
    Inside,
    Boundary,
    Outside,
}

/// Membership of a per-qubit spectra vector in the `L`-qubit Kirwan
/// polytope, with a `1e−9` boundary band.
///
/// The polytope is `0 ≤ λ_l ≤ 1/2` together with
/// `(1/2 − λ_l) ≤ Σ_{j≠l} (1/2 − λ_j)` for every `l`.
pub fn kirwan_contains(lambdas: &[f64]) -> Result<PolytopeLocation> {
    if lambdas.len() < 2 {
        return Err(Error::InvalidArgument(
            "the qubit polytope needs at least two qubits".into(),
        ));
    }
    let mut on_boundary = false;
    for &l in lambdas {
        if l < -KIRWAN_BAND || l > 0.5 + KIRWAN_BAND {
            return Ok(PolytopeLocation::Outside);
        }
        if l < KIRWAN_BAND || l > 0.5 - KIRWAN_BAND {
            on_boundary = true;
        }
    }
    let deficits: Vec<f64> = lambdas.iter().map(|&l| 0.5 - l).collect();
    let total: f64 = deficits.iter().sum();
    for &d in &deficits {
        // d ≤ total − d, i.e. the polygon inequality for this qubit.
        let slack = total - 2.0 * d;
        if slack < -KIRWAN_BAND {
            return Ok(PolytopeLocation::Outside);
        }
        if slack < KIRWAN_BAND {
            on_boundary = true;
        }
    }
    Ok(if on_boundary {
        PolytopeLocation::Boundary
    } else {
        PolytopeLocation::Inside
    })
}

/// Which stratum of the polytope a point falls in, for the dimension
/// formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum BoundaryCase {
    /// Interior of the polytope.
    Interior,
    /// `k` of the `λ_l` equal `1/2` (pure qubits split off).
    BoundaryI { k: usize },
    /// A polygon inequality holds with equality (W-class boundary).
    BoundaryII,
    /// `k` of the `λ_l` equal `0` (maximally mixed qubits).
    BoundaryIII { k: usize },
}

/// Real dimension of the reduced space `Ψ⁻¹(λ)/K` at a polytope point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReducedSpaceReport {
    pub case: BoundaryCase,
    pub dim: u64,
}

/// Dimension of the reduced space at a per-qubit spectra point.
///
/// Interior points give `2^{L+1} − 4L − 2`. Boundary classes, in the
/// priority order (ii), (i), (iii): a polygon equality forces dimension
/// zero; `k` coordinates at `1/2` reduce to the `(L−k)`-qubit interior
/// formula `2^{L−k+1} − 4(L−k) − 2`; `k` coordinates at `0` give
/// `2^{L+1} − 4L − 2k − 2`.
pub fn reduced_space_dim(lambdas: &[f64]) -> Result<ReducedSpaceReport> {
    match kirwan_contains(lambdas)? {
        PolytopeLocation::Outside => {
            return Err(Error::OutsidePolytope(format!("{lambdas:?}")));
        }
        PolytopeLocation::Inside | PolytopeLocation::Boundary => {}
    }
    let l = lambdas.len();
    if l >= 60 {
        return Err(Error::InvalidArgument("qubit count too large".into()));
    }
    let deficits: Vec<f64> = lambdas.iter().map(|&x| 0.5 - x).collect();
    let total: f64 = deficits.iter().sum();
    let polygon_equality = deficits.iter().any(|&d| (total - 2.0 * d).abs() <= KIRWAN_BAND);
    if polygon_equality {
        return Ok(ReducedSpaceReport {
            case: BoundaryCase::BoundaryII,
            dim: 0,
        });
    }
    let k_half = lambdas.iter().filter(|&&x| (x - 0.5).abs() <= KIRWAN_BAND).count();
    if k_half > 0 {
        let rest = l - k_half;
        return Ok(ReducedSpaceReport {
            case: BoundaryCase::BoundaryI { k: k_half },
            dim: interior_dim(rest),
        });
    }
    let k_zero = lambdas.iter().filter(|&&x| x.abs() <= KIRWAN_BAND).count();
    if k_zero > 0 {
        // Clamped at zero where the formula's stable-point precondition
        // fails (only L = 3 with k ≥ 2 among the supported inputs).
        return Ok(ReducedSpaceReport {
            case: BoundaryCase::BoundaryIII { k: k_zero },
            dim: interior_dim(l).saturating_sub(2 * k_zero as u64),
        });
    }
    Ok(ReducedSpaceReport {
        case: BoundaryCase::Interior,
        dim: interior_dim(l),
    })
}

/// `2^{L+1} − 4L − 2`, the interior reduced-space dimension.
fn interior_dim(l: usize) -> u64 {
    let full = 1u64 << (l + 1);
    full.saturating_sub(4 * l as u64 + 2)
}

/// An element `ξ = Σ_k ξ_k^{(k)}` of the local unitary Lie algebra:
/// one traceless anti-Hermitian factor per slot, acting as a sum of
/// single-slot operators (not a tensor product).
#[derive(Debug, Clone)]
pub struct AlgebraElement {
    factors: Vec<CMatrix>,
}

impl AlgebraElement {
    /// Validates each factor to be square, traceless and anti-Hermitian.
    pub fn new(factors: Vec<CMatrix>) -> Result<Self> {
        for (k, f) in factors.iter().enumerate() {
            if f.nrows() != f.ncols() {
                return Err(Error::Dimension(format!("factor {k} is not square")));
            }
            if (f.adjoint() + f).norm() > 1e-10 {
                return Err(Error::InvalidArgument(format!(
                    "factor {k} is not anti-Hermitian"
                )));
            }
            if f.trace().norm() > 1e-10 {
                return Err(Error::InvalidArgument(format!("factor {k} has a trace")));
            }
        }
        Ok(Self { factors })
    }

    /// Algebra element supported on a single slot of an `L`-slot sector.
    pub fn single_slot(slot_dims: &[usize], k: usize, factor: CMatrix) -> Result<Self> {
        if k >= slot_dims.len() {
            return Err(Error::Index {
                index: k,
                bound: slot_dims.len(),
            });
        }
        let mut factors: Vec<CMatrix> = slot_dims
            .iter()
            .map(|&d| CMatrix::zeros(d, d))
            .collect();
        factors[k] = factor;
        Self::new(factors)
    }

    pub fn factors(&self) -> &[CMatrix] {
        &self.factors
    }
}

/// Kirillov–Kostant–Souriau form of the projective space, evaluated on the
/// fundamental vector fields of two local algebra elements at a state:
/// `ω(ξ̂₁, ξ̂₂) = −i⟨v|[ξ₁,ξ₂]v⟩ / (2⟨v|v⟩)`.
pub fn kks_form_pure(
    state: &PureState,
    xi1: &AlgebraElement,
    xi2: &AlgebraElement,
) -> Result<f64> {
    let slot_dims = state.sector().slot_dims();
    for (name, xi) in [("xi1", xi1), ("xi2", xi2)] {
        if xi.factors.len() != slot_dims.len() {
            return Err(Error::Dimension(format!(
                "{name} has {} factors, state has {} slots",
                xi.factors.len(),
                slot_dims.len()
            )));
        }
        for (k, f) in xi.factors.iter().enumerate() {
            if f.nrows() != slot_dims[k] {
                return Err(Error::Dimension(format!(
                    "{name} factor {k} does not match slot dimension {}",
                    slot_dims[k]
                )));
            }
        }
    }
    let v = state.amplitudes();
    let xi2_v = apply_slot_sum(v, &slot_dims, &xi2.factors);
    let xi1_v = apply_slot_sum(v, &slot_dims, &xi1.factors);
    let commutator_v =
        apply_slot_sum(&xi2_v, &slot_dims, &xi1.factors) - apply_slot_sum(&xi1_v, &slot_dims, &xi2.factors);
    let value = C64::new(0.0, -0.5) * v.dotc(&commutator_v);
    Ok(value.re)
}
