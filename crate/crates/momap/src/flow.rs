//! Gradient flow of `−‖μ‖²` and SLOCC stratification.
//!
//! The squared momentum norm is a smooth function on projective space
//! whose gradient is tangent to SLOCC orbits, so flowing downhill carries
//! a state to a critical point inside its own orbit closure. Matching the
//! spectra of the limit against the critical atlas assigns the state to a
//! stratum; states whose flow reaches the zero fiber are semistable, the
//! rest make up the null cone. The same machinery drives the
//! entanglement-polytope sampler and the small-system rank and invariant
//! utilities, including the classic rank-collapse limit that turns a GHZ
//! state into W.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::atlas::{canonical_beta, enumerate_b, Atlas, EnumOpts};
use crate::error::{Error, Result};
use crate::momentum::{momentum_blocks_per_slot, norm_mu_squared, psi, SpectraPoint};
use crate::numkit::{self, Tolerances};
use crate::state::{
    apply_local, apply_slot_sum, fidelity, LocalOperator, PureState, SectorKind,
};
use crate::{catalog, C64, CMatrix, CVector};

/// `‖μ‖²` threshold below which a flow limit counts as the zero fiber.
pub const SEMISTABLE_TOL: f64 = 1e-8;

/// Negative gradient direction of `‖μ‖²` at a state:
/// `−(Av − ⟨v,Av⟩v)` with `A = Σ_k m_k^{(k)}`. Vanishes exactly at
/// critical states.
pub fn descent_direction(state: &PureState) -> CVector {
    let slot_dims = state.sector().slot_dims();
    let blocks = momentum_blocks_per_slot(state);
    let v = state.amplitudes();
    let av = apply_slot_sum(v, &slot_dims, &blocks);
    -numkit::tangent_project(v, &av)
}

/// Options shared by the flows.
#[derive(Debug, Clone)]
pub struct FlowOpts {
    pub max_iters: usize,
    /// Distance below which the limit's spectra snap to an atlas value.
    pub match_tol: f64,
    pub armijo_c: f64,
    pub backtrack: f64,
    pub tol: Tolerances,
}

impl Default for FlowOpts {
    fn default() -> Self {
        Self {
            max_iters: 50_000,
            match_tol: 1e-5,
            armijo_c: 1e-4,
            backtrack: 0.5,
            tol: Tolerances::default(),
        }
    }
}

/// Outcome of flowing a state to a critical point.
#[derive(Debug, Clone)]
pub struct StratumAssignment {
    /// Canonical spectra of the flow limit (qubit sectors only).
    pub limit_beta: Option<Vec<f64>>,
    /// Nearest atlas value within `match_tol`, if any. Unmatched limits
    /// are reported as-is, never snapped.
    pub matched_beta: Option<Vec<f64>>,
    pub limit_state: PureState,
    pub iterations: usize,
    pub final_norm_mu_sq: f64,
    /// True when the limit lies in the zero fiber.
    pub semistable: bool,
    /// False when the iteration budget ran out before the residual target.
    pub converged: bool,
}

/// Flow a state along `−grad ‖μ‖²` (step-then-renormalize retraction with
/// Armijo backtracking) until the gradient residual drops below
/// `flow_tol`, then match the limit's spectra against the critical atlas.
pub fn flow_to_critical(state: &PureState, opts: &FlowOpts) -> Result<StratumAssignment> {
    let atlas = qubit_atlas(state, opts)?;
    flow_to_critical_with_atlas(state, opts, atlas.as_ref())
}

/// As [`flow_to_critical`], reusing a precomputed atlas for the matching
/// step (pass `None` to skip matching).
pub fn flow_to_critical_with_atlas(
    state: &PureState,
    opts: &FlowOpts,
    atlas: Option<&Atlas>,
) -> Result<StratumAssignment> {
    let (limit, iterations, converged) = descend(state, opts, StepRule::Retract)?;
    Ok(assemble_assignment(limit, iterations, converged, opts, atlas))
}

/// Null-cone membership: minimize `‖μ‖²` along the SLOCC orbit by the
/// multiplicative descent `v ← exp(−t·m_k)` per slot (renormalized).
///
/// The infimum over the orbit vanishes exactly on semistable states, so
/// the verdict is `Semistable` when the flow drives `‖μ‖²` below `1e−8`
/// and otherwise `Unstable` with the stratum of the critical limit.
pub fn null_cone_test(state: &PureState, opts: &FlowOpts) -> Result<NullConeReport> {
    let atlas = qubit_atlas(state, opts)?;
    let (limit, iterations, converged) = descend(state, opts, StepRule::Exponential)?;
    let assignment = assemble_assignment(limit, iterations, converged, opts, atlas.as_ref());
    Ok(NullConeReport {
        semistable: assignment.final_norm_mu_sq < SEMISTABLE_TOL,
        assignment,
    })
}

/// Verdict of [`null_cone_test`].
#[derive(Debug, Clone)]
pub struct NullConeReport {
    pub semistable: bool,
    pub assignment: StratumAssignment,
}

enum StepRule {
    /// Additive step along the negative gradient, then renormalize.
    Retract,
    /// Slot-wise `exp(−t·m_k)` group step (stays inside the SLOCC orbit).
    Exponential,
}

fn qubit_atlas(state: &PureState, opts: &FlowOpts) -> Result<Option<Atlas>> {
    let sector = state.sector();
    if sector.is_qubits() && (2..=5).contains(&sector.num_slots()) {
        let enum_opts = EnumOpts {
            search_witness: false,
            tol: opts.tol,
            ..EnumOpts::default()
        };
        Ok(Some(enumerate_b(sector.num_slots(), &enum_opts)?))
    } else {
        Ok(None)
    }
}

fn assemble_assignment(
    limit: PureState,
    iterations: usize,
    converged: bool,
    opts: &FlowOpts,
    atlas: Option<&Atlas>,
) -> StratumAssignment {
    let final_norm_mu_sq = norm_mu_squared(&limit);
    let limit_beta = canonical_beta(&psi(&limit));
    let matched_beta = match (&limit_beta, atlas) {
        (Some(beta), Some(atlas)) => atlas
            .values
            .iter()
            .map(|v| {
                let dist: f64 = v
                    .beta
                    .iter()
                    .zip(beta)
                    .map(|(x, y)| (x - y) * (x - y))
                    .sum::<f64>()
                    .sqrt();
                (dist, &v.beta)
            })
            .filter(|(dist, _)| *dist <= opts.match_tol)
            .min_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"))
            .map(|(_, beta)| beta.clone()),
        _ => None,
    };
    let semistable = matched_beta
        .as_ref()
        .map(|b| b.iter().all(|&x| x == 0.0))
        .unwrap_or(final_norm_mu_sq < SEMISTABLE_TOL);
    StratumAssignment {
        limit_beta,
        matched_beta,
        limit_state: limit,
        iterations,
        final_norm_mu_sq,
        semistable,
        converged,
    }
}

fn descend(
    state: &PureState,
    opts: &FlowOpts,
    rule: StepRule,
) -> Result<(PureState, usize, bool)> {
    let slot_dims = state.sector().slot_dims();
    let mut current = state.clone();
    let mut f = norm_mu_squared(&current);
    let mut step = 1.0f64;
    let mut iterations = 0usize;
    let mut converged = false;

    while iterations < opts.max_iters {
        let blocks = momentum_blocks_per_slot(&current);
        let v = current.amplitudes();
        let av = apply_slot_sum(v, &slot_dims, &blocks);
        let grad = numkit::tangent_project(v, &av);
        let residual = grad.norm();
        if residual < opts.tol.flow_tol {
            converged = true;
            break;
        }

        let mut t = step;
        let mut accepted = false;
        for _bt in 0..80 {
            let candidate = match rule {
                StepRule::Retract => {
                    let moved = v - grad.scale(t);
                    let norm = moved.norm();
                    if norm < 1e-14 {
                        t *= opts.backtrack;
                        continue;
                    }
                    PureState::from_normalized(current.sector().clone(), moved.unscale(norm))
                }
                StepRule::Exponential => {
                    let factors: Vec<CMatrix> =
                        blocks.iter().map(|m| hermitian_exp(m, -t)).collect();
                    let op = LocalOperator::new(factors)?;
                    apply_local(&op, &current)?
                }
            };
            let ft = norm_mu_squared(&candidate);
            if ft <= f - opts.armijo_c * t * residual * residual {
                debug_assert!(ft <= f, "the flow must not increase the momentum norm");
                current = candidate;
                f = ft;
                accepted = true;
                break;
            }
            t *= opts.backtrack;
        }
        if !accepted {
            // Line search exhausted at numerical stationarity.
            converged = residual < 1e2 * opts.tol.flow_tol || f < SEMISTABLE_TOL;
            break;
        }
        step = (t * 2.0).min(4.0);
        iterations += 1;
    }
    if !converged && iterations >= opts.max_iters {
        // Budget exhaustion is reported through `converged`, with the
        // partial result still returned.
        return Ok((current, iterations, false));
    }
    Ok((current, iterations, converged))
}

/// `exp(t·m)` of a Hermitian matrix via its eigendecomposition.
fn hermitian_exp(m: &CMatrix, t: f64) -> CMatrix {
    let (vals, vecs) = numkit::eigh(m);
    let exp_diag = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| C64::new((t * x).exp(), 0.0)),
    ));
    &vecs * exp_diag * vecs.adjoint()
}

/// A cloud of spectra sampled from a SLOCC orbit.
#[derive(Debug, Clone)]
pub struct PolytopeSample {
    pub points: Vec<SpectraPoint>,
    /// Smallest squared polytope norm over the cloud (`Σ λ_k²` for
    /// qubits).
    pub min_norm_sq: f64,
}

/// Sample the entanglement polytope of a state: `n` random invertible
/// local operators (i.i.d. standard complex normal entries, re-drawn on
/// near-singularity), spectra of each transformed state.
pub fn polytope_sample(state: &PureState, n: usize, seed: u64) -> Result<PolytopeSample> {
    if n == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slot_dims = state.sector().slot_dims();
    let mut points = Vec::with_capacity(n);
    let mut min_norm_sq = f64::INFINITY;
    for _ in 0..n {
        let op = match state.sector().kind() {
            SectorKind::Distinguishable => LocalOperator::new(
                slot_dims
                    .iter()
                    .map(|&d| catalog::random_invertible(d, &mut rng))
                    .collect(),
            )?,
            _ => LocalOperator::diagonal(
                catalog::random_invertible(slot_dims[0], &mut rng),
                slot_dims.len(),
            )?,
        };
        let moved = apply_local(&op, state)?;
        let spectra = psi(&moved);
        min_norm_sq = min_norm_sq.min(spectra.norm_sq());
        points.push(spectra);
    }
    Ok(PolytopeSample { points, min_norm_sq })
}

/// Fidelity of `A(a)^{⊗3}·GHZ₃` against the three-qubit W state, where
/// `A(a) = [[a, a], [−1/a, 1/a]]/√2`.
///
/// The transformed state stays in the rank-2 orbit for every `a > 0` but
/// converges to the rank-3 W state as `a → 0`: fidelity `3/(a⁸ + 3)`.
pub fn ghz_to_w_demo(a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "demo parameter must satisfy 0 < a ≤ 1, got {a}"
        )));
    }
    let inv = 1.0 / a;
    if !inv.is_finite() || inv.powi(3) > 1e280 {
        return Err(Error::Numerical(
            "normalization underflows for this parameter".into(),
        ));
    }
    let s = 1.0 / 2.0f64.sqrt();
    let factor = CMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(s * a, 0.0),
            C64::new(s * a, 0.0),
            C64::new(-s * inv, 0.0),
            C64::new(s * inv, 0.0),
        ],
    );
    let op = LocalOperator::diagonal(factor, 3)?;
    let moved = apply_local(&op, &catalog::ghz(3)?)?;
    fidelity(&moved, &catalog::w_state(3)?)
}

/// Number of nonzero singular values of the bipartition matricization.
pub fn schmidt_rank(state: &PureState, bipartition: &[usize]) -> Result<usize> {
    schmidt_coefficients(state, bipartition).map(|svals| {
        let tol = Tolerances::default().eig_tol;
        svals.iter().filter(|&&s| s > tol).count()
    })
}

/// Singular values of the bipartition matricization, sorted nonincreasing.
pub fn schmidt_coefficients(state: &PureState, bipartition: &[usize]) -> Result<Vec<f64>> {
    if state.sector().kind() != SectorKind::Distinguishable {
        return Err(Error::SectorMismatch(
            "schmidt decomposition requires a distinguishable sector".into(),
        ));
    }
    let slot_dims = state.sector().slot_dims();
    let l = slot_dims.len();
    let mut rows: Vec<usize> = bipartition.to_vec();
    rows.sort_unstable();
    rows.dedup();
    if rows.len() != bipartition.len() || rows.is_empty() || rows.len() == l {
        return Err(Error::InvalidArgument(
            "bipartition must be a nonempty proper subset of slots without repeats".into(),
        ));
    }
    if rows.iter().any(|&k| k >= l) {
        return Err(Error::Index {
            index: *rows.iter().max().expect("nonempty"),
            bound: l,
        });
    }
    let cols: Vec<usize> = (0..l).filter(|k| !rows.contains(k)).collect();
    let row_dim: usize = rows.iter().map(|&k| slot_dims[k]).product();
    let col_dim: usize = cols.iter().map(|&k| slot_dims[k]).product();
    let mut matrix = CMatrix::zeros(row_dim, col_dim);
    let amps = state.amplitudes();
    let mut digits = vec![0usize; l];
    for idx in 0..amps.len() {
        let mut rem = idx;
        for k in (0..l).rev() {
            digits[k] = rem % slot_dims[k];
            rem /= slot_dims[k];
        }
        let mut r = 0usize;
        for &k in &rows {
            r = r * slot_dims[k] + digits[k];
        }
        let mut c = 0usize;
        for &k in &cols {
            c = c * slot_dims[k] + digits[k];
        }
        matrix[(r, c)] = amps[idx];
    }
    let mut svals: Vec<f64> = matrix.singular_values().iter().copied().collect();
    svals.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(svals)
}

/// Modulus of Cayley's 2×2×2 hyperdeterminant, normalized so the GHZ
/// state scores 1.
pub fn three_tangle(state: &PureState) -> Result<f64> {
    let sector = state.sector();
    if !(sector.is_qubits() && sector.num_slots() == 3) {
        return Err(Error::SectorMismatch(
            "three_tangle is defined on three qubits".into(),
        ));
    }
    let a = state.amplitudes();
    let at = |i: usize, j: usize, k: usize| a[(i << 2) | (j << 1) | k];
    let d1 = at(0, 0, 0).powu(2) * at(1, 1, 1).powu(2)
        + at(0, 0, 1).powu(2) * at(1, 1, 0).powu(2)
        + at(0, 1, 0).powu(2) * at(1, 0, 1).powu(2)
        + at(1, 0, 0).powu(2) * at(0, 1, 1).powu(2);
    let d2 = at(0, 0, 0) * at(1, 1, 1) * at(0, 1, 1) * at(1, 0, 0)
        + at(0, 0, 0) * at(1, 1, 1) * at(1, 0, 1) * at(0, 1, 0)
        + at(0, 0, 0) * at(1, 1, 1) * at(1, 1, 0) * at(0, 0, 1)
        + at(0, 1, 1) * at(1, 0, 0) * at(1, 0, 1) * at(0, 1, 0)
        + at(0, 1, 1) * at(1, 0, 0) * at(1, 1, 0) * at(0, 0, 1)
        + at(1, 0, 1) * at(0, 1, 0) * at(1, 1, 0) * at(0, 0, 1);
    let d3 = at(0, 0, 0) * at(1, 1, 0) * at(1, 0, 1) * at(0, 1, 1)
        + at(1, 1, 1) * at(0, 0, 1) * at(0, 1, 0) * at(1, 0, 0);
    let det = d1 - d2.scale(2.0) + d3.scale(4.0);
    Ok(4.0 * det.norm())
}

/// The six SLOCC classes of three qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SloccClass3 {
    Sep,
    BiSepA,
    BiSepB,
    BiSepC,
    W,
    Ghz,
}

impl std::fmt::Display for SloccClass3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            SloccClass3::Sep => "Sep",
            SloccClass3::BiSepA => "BiSep_A|BC",
            SloccClass3::BiSepB => "BiSep_B|AC",
            SloccClass3::BiSepC => "BiSep_C|AB",
            SloccClass3::W => "W",
            SloccClass3::Ghz => "GHZ",
        };
        f.write_str(s)
    }
}

/// SLOCC class of a three-qubit state from local ranks and the tangle.
///
/// One-vs-rest ranks separate Sep and the three biseparable classes; among
/// genuinely tripartite states the hyperdeterminant separates GHZ (nonzero
/// tangle) from W. Closure-based stratum assignment cannot make this split
/// inside the null cone, which is why the rank/invariant route exists next
/// to the flow.
pub fn classify_slocc_3qubit(state: &PureState) -> Result<SloccClass3> {
    let sector = state.sector();
    if !(sector.is_qubits() && sector.num_slots() == 3) {
        return Err(Error::SectorMismatch(
            "classification is defined on three qubits".into(),
        ));
    }
    let ranks: Vec<usize> = (0..3)
        .map(|k| schmidt_rank(state, &[k]))
        .collect::<Result<_>>()?;
    let product_cuts = ranks.iter().filter(|&&r| r == 1).count();
    match product_cuts {
        3 => Ok(SloccClass3::Sep),
        2 => Ok(SloccClass3::Sep), // numerically degenerate: two pure cuts force the third
        1 => Ok(match ranks.iter().position(|&r| r == 1).expect("one cut") {
            0 => SloccClass3::BiSepA,
            1 => SloccClass3::BiSepB,
            _ => SloccClass3::BiSepC,
        }),
        _ => {
            let tangle = three_tangle(state)?;
            if tangle > 1e-8 {
                Ok(SloccClass3::Ghz)
            } else {
                Ok(SloccClass3::W)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::momentum::kirwan_contains;
    use crate::state::SectorSpec;
    use approx::assert_abs_diff_eq;

    #[test]
    fn descent_vanishes_at_critical_states() {
        for state in [catalog::ghz(4).unwrap(), catalog::w_state(3).unwrap()] {
            assert!(descent_direction(&state).norm() < 1e-12);
        }
    }

    #[test]
    fn descent_aligns_with_fd_gradient() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let sector = SectorSpec::distinguishable(&[2, 2, 2]).unwrap();
        let state = catalog::random_state(&sector, &mut rng);
        let d = descent_direction(&state);
        let fd = numkit::fd_gradient(
            |v| {
                let s = PureState::from_normalized(state.sector().clone(), v.clone());
                norm_mu_squared(&s)
            },
            state.amplitudes(),
            1e-6,
        );
        let cos = real_cosine(&d, &fd);
        assert!(cos < -0.999, "cosine {cos}");
    }

    fn real_cosine(a: &CVector, b: &CVector) -> f64 {
        let dot = a.dotc(b).re;
        dot / (a.norm() * b.norm())
    }

    #[test]
    fn flow_from_critical_is_stationary() {
        let w3 = catalog::w_state(3).unwrap();
        let out = flow_to_critical(&w3, &FlowOpts::default()).unwrap();
        assert_eq!(out.iterations, 0);
        let sixth = 1.0 / 6.0;
        let beta = out.matched_beta.unwrap();
        for x in beta {
            assert_abs_diff_eq!(x, sixth, epsilon = 1e-9);
        }
        assert!(!out.semistable);
    }

    #[test]
    fn flow_ghz_semistable_immediately() {
        let ghz = catalog::ghz(3).unwrap();
        let out = flow_to_critical(&ghz, &FlowOpts::default()).unwrap();
        assert_eq!(out.iterations, 0);
        assert!(out.semistable);
        assert!(out.final_norm_mu_sq < 1e-12);
    }

    #[test]
    fn flow_perturbed_ghz_reaches_zero_fiber() {
        let state = catalog::qubit_superposition(
            3,
            &[("000", 1.0), ("111", 1.0), ("010", 0.01)],
        )
        .unwrap();
        let out = flow_to_critical(&state, &FlowOpts::default()).unwrap();
        assert!(out.converged);
        assert!(out.final_norm_mu_sq < 1e-8, "got {}", out.final_norm_mu_sq);
        assert!(out.semistable);
        let rep = crate::atlas::is_critical(&out.limit_state);
        assert!(rep.residual < 1e-6);
    }

    #[test]
    fn flow_is_local_unitary_equivariant() {
        use crate::state::apply_local;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let sector = SectorSpec::distinguishable(&[2, 2, 2]).unwrap();
        let state = catalog::random_state(&sector, &mut rng);
        let op = LocalOperator::new(
            (0..3).map(|_| catalog::random_unitary(2, &mut rng)).collect(),
        )
        .unwrap();
        let rotated = apply_local(&op, &state).unwrap();
        let a = flow_to_critical(&state, &FlowOpts::default()).unwrap();
        let b = flow_to_critical(&rotated, &FlowOpts::default()).unwrap();
        let la = a.limit_beta.unwrap();
        let lb = b.limit_beta.unwrap();
        for (x, y) in la.iter().zip(&lb) {
            assert!((x - y).abs() < 1e-6, "{la:?} vs {lb:?}");
        }
    }

    #[test]
    fn null_cone_examples() {
        let opts = FlowOpts::default();
        let ghz3 = catalog::ghz(3).unwrap();
        assert!(null_cone_test(&ghz3, &opts).unwrap().semistable);
        let ghz4 = catalog::ghz(4).unwrap();
        assert!(null_cone_test(&ghz4, &opts).unwrap().semistable);

        let w3 = catalog::w_state(3).unwrap();
        let rep = null_cone_test(&w3, &opts).unwrap();
        assert!(!rep.semistable);
        let beta = rep.assignment.matched_beta.unwrap();
        for x in beta {
            assert_abs_diff_eq!(x, 1.0 / 6.0, epsilon = 1e-9);
        }

        let sep = catalog::qubit_ket("000").unwrap();
        let rep = null_cone_test(&sep, &opts).unwrap();
        assert!(!rep.semistable);
        let beta = rep.assignment.matched_beta.unwrap();
        for x in beta {
            assert_abs_diff_eq!(x, 0.5, epsilon = 1e-9);
        }
    }

    #[test]
    fn polytope_sampling_bounds() {
        let w3 = catalog::w_state(3).unwrap();
        let sample = polytope_sample(&w3, 400, 7).unwrap();
        // W is unstable at β_W, so no sample can undershoot ‖β_W‖².
        assert!(sample.min_norm_sq >= 1.0 / 12.0 - 1e-3);
        for p in &sample.points {
            let lams = p.qubit_lambdas().unwrap();
            assert_ne!(
                kirwan_contains(&lams).unwrap(),
                crate::momentum::PolytopeLocation::Outside
            );
        }

        // Full separability is preserved by local operations.
        let sep = catalog::qubit_ket("000").unwrap();
        let sample = polytope_sample(&sep, 50, 3).unwrap();
        for p in &sample.points {
            for lam in p.qubit_lambdas().unwrap() {
                assert_abs_diff_eq!(lam, 0.5, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn polytope_sampling_is_seed_deterministic() {
        let ghz = catalog::ghz(3).unwrap();
        let a = polytope_sample(&ghz, 25, 99).unwrap();
        let b = polytope_sample(&ghz, 25, 99).unwrap();
        assert_eq!(a.min_norm_sq, b.min_norm_sq);
    }

    #[test]
    fn ghz_to_w_limit() {
        let f1 = ghz_to_w_demo(1.0).unwrap();
        let f05 = ghz_to_w_demo(0.5).unwrap();
        let f01 = ghz_to_w_demo(0.1).unwrap();
        let f001 = ghz_to_w_demo(0.01).unwrap();
        assert!(f1 < 1.0);
        assert_abs_diff_eq!(f1, 0.75, epsilon = 1e-12);
        assert!(f1 < f05 && f05 < f01 && f01 <= f001);
        assert!(f001 > 0.999);
        assert!(ghz_to_w_demo(0.0).is_err());
        assert!(ghz_to_w_demo(1.5).is_err());
    }

    #[test]
    fn schmidt_rank_examples() {
        let bell = catalog::bell().unwrap();
        assert_eq!(schmidt_rank(&bell, &[0]).unwrap(), 2);
        let prod = catalog::qubit_ket("01").unwrap();
        assert_eq!(schmidt_rank(&prod, &[0]).unwrap(), 1);
        let ghz = catalog::ghz(3).unwrap();
        assert_eq!(schmidt_rank(&ghz, &[0]).unwrap(), 2);
        assert_eq!(schmidt_rank(&ghz, &[0, 1]).unwrap(), 2);
        assert!(schmidt_rank(&ghz, &[0, 1, 2]).is_err());
        assert!(schmidt_rank(&ghz, &[3]).is_err());
    }

    #[test]
    fn tangle_values() {
        assert_abs_diff_eq!(
            three_tangle(&catalog::ghz(3).unwrap()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert!(three_tangle(&catalog::w_state(3).unwrap()).unwrap() < 1e-14);
        assert!(three_tangle(&catalog::qubit_ket("010").unwrap()).unwrap() < 1e-14);
        let (x1, _) = catalog::spectra_matched_pair().unwrap();
        assert_abs_diff_eq!(three_tangle(&x1).unwrap(), 8.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn classify_examples() {
        // |0⟩ ⊗ Bell.
        let bisep = catalog::qubit_superposition(3, &[("000", 1.0), ("011", 1.0)]).unwrap();
        assert_eq!(classify_slocc_3qubit(&bisep).unwrap(), SloccClass3::BiSepA);
        assert_eq!(
            classify_slocc_3qubit(&catalog::w_state(3).unwrap()).unwrap(),
            SloccClass3::W
        );
        assert_eq!(
            classify_slocc_3qubit(&catalog::ghz(3).unwrap()).unwrap(),
            SloccClass3::Ghz
        );
        assert_eq!(
            classify_slocc_3qubit(&catalog::qubit_ket("101").unwrap()).unwrap(),
            SloccClass3::Sep
        );
    }

    #[test]
    fn classification_is_slocc_invariant() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(55);
        let reps = [
            (catalog::qubit_ket("000").unwrap(), SloccClass3::Sep),
            (
                catalog::qubit_superposition(3, &[("000", 1.0), ("011", 1.0)]).unwrap(),
                SloccClass3::BiSepA,
            ),
            (catalog::w_state(3).unwrap(), SloccClass3::W),
            (catalog::ghz(3).unwrap(), SloccClass3::Ghz),
        ];
        for (state, class) in reps {
            for _ in 0..25 {
                let op = LocalOperator::new(
                    (0..3).map(|_| catalog::random_invertible(2, &mut rng)).collect(),
                )
                .unwrap();
                let moved = apply_local(&op, &state).unwrap();
                assert_eq!(classify_slocc_3qubit(&moved).unwrap(), class);
            }
        }
    }

    #[test]
    fn momentum_does_not_separate_slocc_orbits() {
        // Same one-qubit spectra, different tangles: the spectra test
        // cannot distinguish these SLOCC-inequivalent states.
        let (x1, w_like) = catalog::spectra_matched_pair().unwrap();
        let a = psi(&x1).qubit_lambdas().unwrap();
        let b = psi(&w_like).qubit_lambdas().unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
        let ta = three_tangle(&x1).unwrap();
        let tb = three_tangle(&w_like).unwrap();
        assert_abs_diff_eq!(ta, 8.0 / 9.0, epsilon = 1e-12);
        assert!(tb < 1e-14);
    }
}
