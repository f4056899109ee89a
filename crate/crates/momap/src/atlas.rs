//! The critical atlas of the qubit momentum map.
//!
//! The maximal torus of the local unitary group sends the computational
//! basis states of `L` qubits to the weight set `𝔸 ⊂ {−1/2, +1/2}^L`
//! (coordinate `+1/2` where the bit is `0`). Critical values of `‖μ‖²`
//! live among the minimal convex combinations of weights: the closest
//! point to the origin of `conv(S)` over subsets `S ⊆ 𝔸`, pushed into the
//! positive chamber by per-qubit sign flips. Every such minimum is the
//! orthogonal projection of the origin onto the affine hull of an
//! affinely independent subset of at most `L+1` weights, so the
//! enumeration walks exactly those subsets.
//!
//! A candidate `β` carries the critical subspace `Z_β` — the span of the
//! basis states whose weights satisfy `⟨w, β⟩ = ⟨β, β⟩` — and becomes
//! *realizable* when a unit vector supported on `Z_β` with momentum
//! exactly `β` exists; the witness search is a seeded multi-start
//! projected descent inside that span.

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::momentum::{momentum_blocks, SpectraPoint};
use crate::numkit::{self, Tolerances};
use crate::state::{apply_slot_sum, PureState, SectorSpec};
use crate::{C64, CMatrix, CVector};

/// A weight of the torus action: the momentum of a computational basis
/// state, with coordinate `+1/2` where the bit is `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Weight {
    pub coords: Vec<f64>,
    pub basis_index: usize,
}

/// The `2^L` weights of the `L`-qubit torus action.
pub fn qubit_weights(l: usize) -> Result<Vec<Weight>> {
    if !(1..=6).contains(&l) {
        return Err(Error::InvalidArgument(format!(
            "qubit_weights supports 1 ≤ L ≤ 6, got {l}"
        )));
    }
    Ok((0..1usize << l)
        .map(|b| Weight {
            coords: (0..l)
                .map(|k| {
                    if (b >> (l - 1 - k)) & 1 == 0 {
                        0.5
                    } else {
                        -0.5
                    }
                })
                .collect(),
            basis_index: b,
        })
        .collect())
}

/// A candidate critical value `β` with its supporting weights, the span of
/// `Z_β`, and (when searched) a witness state with momentum `β`.
#[derive(Debug, Clone)]
pub struct CriticalValue {
    /// Canonical representative in the positive chamber, coordinates
    /// sorted nonincreasing (qubit-permutation representative).
    pub beta: Vec<f64>,
    pub norm_sq: f64,
    /// Weights on the support hyperplane `⟨w, β⟩ = ⟨β, β⟩`.
    pub support: Vec<Weight>,
    /// Basis-state indices spanning `Z_β` (same index set as `support`).
    pub z_basis: Vec<usize>,
    /// Whether a witness with `μ = β` was found (meaningful only when the
    /// enumeration ran with witness search enabled).
    pub nonempty: bool,
    pub witness: Option<PureState>,
}

/// Options for the enumeration and the witness search. The search bounds
/// are configuration, not contract.
#[derive(Debug, Clone)]
pub struct EnumOpts {
    /// Cap on the subset size; defaults to `L+1` (Carathéodory bound).
    pub max_subset_size: Option<usize>,
    /// Whether to run the witness search for each candidate.
    pub search_witness: bool,
    /// Random restarts of the witness search.
    pub restarts: usize,
    /// Iteration cap per restart.
    pub max_iters: usize,
    /// RNG seed for the witness search.
    pub seed: u64,
    /// Cap on the number of subsets examined; exceeding it flags the
    /// result as partial.
    pub budget: Option<u64>,
    pub tol: Tolerances,
}

impl Default for EnumOpts {
    fn default() -> Self {
        Self {
            max_subset_size: None,
            search_witness: true,
            restarts: 50,
            max_iters: 5000,
            seed: 0,
            budget: None,
            tol: Tolerances::default(),
        }
    }
}

/// The enumerated atlas; `complete` is false when the subset budget ran
/// out before the enumeration finished.
#[derive(Debug, Clone)]
pub struct Atlas {
    pub values: Vec<CriticalValue>,
    pub complete: bool,
}

/// Residual below which a witness counts as exact.
pub const WITNESS_RESIDUAL: f64 = 1e-7;

/// Enumerate the minimal weight combinations of `L` qubits.
///
/// Walks every affinely independent subset of at most `max_subset_size`
/// weights, projects the origin onto its affine hull, keeps projections
/// lying in the convex hull, Weyl-reduces into the positive chamber,
/// canonicalizes by nonincreasing sort, dedupes, and attaches `Z_β` and a
/// witness verdict to each survivor. Values are sorted by `‖β‖²`.
pub fn enumerate_b(l: usize, opts: &EnumOpts) -> Result<Atlas> {
    if !(2..=5).contains(&l) {
        return Err(Error::InvalidArgument(format!(
            "enumerate_b supports 2 ≤ L ≤ 5, got {l}"
        )));
    }
    opts.tol.validate()?;
    let weights = qubit_weights(l)?;
    let max_size = opts
        .max_subset_size
        .unwrap_or(l + 1)
        .min(weights.len())
        .max(1);

    let coords: Vec<DVector<f64>> = weights
        .iter()
        .map(|w| DVector::from_vec(w.coords.clone()))
        .collect();

    let mut candidates: Vec<Vec<f64>> = Vec::new();
    let mut examined: u64 = 0;
    let mut complete = true;
    let mut subset = Vec::with_capacity(max_size);
    let mut stack_points: Vec<DVector<f64>> = Vec::with_capacity(max_size);

    // Depth-first subset walk; projections are cheap enough that
    // incremental Gram updates would be noise.
    fn walk(
        start: usize,
        coords: &[DVector<f64>],
        subset: &mut Vec<usize>,
        points: &mut Vec<DVector<f64>>,
        max_size: usize,
        budget: Option<u64>,
        examined: &mut u64,
        complete: &mut bool,
        candidates: &mut Vec<Vec<f64>>,
    ) {
        if let Some(b) = budget {
            if *examined >= b {
                *complete = false;
                return;
            }
        }
        if !subset.is_empty() {
            *examined += 1;
            if let Some((projection, affine)) = numkit::affine_min_norm(points) {
                if affine.iter().all(|&c| c >= -1e-10) {
                    let canonical: Vec<f64> = {
                        let mut v: Vec<f64> = projection.iter().map(|x| x.abs()).collect();
                        v.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
                        v.iter_mut().for_each(|x| {
                            if *x < 1e-12 {
                                *x = 0.0;
                            }
                        });
                        v
                    };
                    candidates.push(canonical);
                }
            } else {
                // Affinely dependent: every superset is too; prune.
                return;
            }
        }
        if subset.len() == max_size {
            return;
        }
        for next in start..coords.len() {
            subset.push(next);
            points.push(coords[next].clone());
            walk(
                next + 1, coords, subset, points, max_size, budget, examined, complete, candidates,
            );
            subset.pop();
            points.pop();
        }
    }

    walk(
        0,
        &coords,
        &mut subset,
        &mut stack_points,
        max_size,
        opts.budget,
        &mut examined,
        &mut complete,
        &mut candidates,
    );

    // Deduplicate canonical representatives.
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite coordinates"));
    let mut unique: Vec<Vec<f64>> = Vec::new();
    for cand in candidates {
        let is_dup = unique.last().is_some_and(|prev: &Vec<f64>| {
            prev.iter()
                .zip(&cand)
                .all(|(x, y)| (x - y).abs() <= opts.tol.dedupe_tol)
        });
        if !is_dup {
            unique.push(cand);
        }
    }

    let mut values: Vec<CriticalValue> = unique
        .into_iter()
        .map(|beta| build_critical_value(beta, &weights, l, opts))
        .collect::<Result<_>>()?;
    values.sort_by(|a, b| {
        (a.norm_sq, &a.beta)
            .partial_cmp(&(b.norm_sq, &b.beta))
            .expect("finite")
    });
    Ok(Atlas { values, complete })
}

fn build_critical_value(
    beta: Vec<f64>,
    weights: &[Weight],
    l: usize,
    opts: &EnumOpts,
) -> Result<CriticalValue> {
    let norm_sq: f64 = beta.iter().map(|x| x * x).sum();
    let mut support = Vec::new();
    let mut z_basis = Vec::new();
    for w in weights {
        let ip: f64 = w.coords.iter().zip(&beta).map(|(a, b)| a * b).sum();
        if (ip - norm_sq).abs() <= 1e-9 {
            support.push(w.clone());
            z_basis.push(w.basis_index);
        }
    }
    let mut value = CriticalValue {
        beta,
        norm_sq,
        support,
        z_basis,
        nonempty: false,
        witness: None,
    };
    if opts.search_witness {
        if let Some(state) = find_witness(&value, l, opts)? {
            value.nonempty = true;
            value.witness = Some(state);
        }
    }
    Ok(value)
}

/// Search for a unit state supported on `Z_β` whose momentum equals `β`.
///
/// Multi-start projected descent of `Σ_k ‖m_k − diag(β_k, −β_k)‖²` inside
/// the span; succeeds when the residual drops below `1e−7`. Absence of a
/// witness after all restarts is a result, not an error.
pub fn find_witness(value: &CriticalValue, l: usize, opts: &EnumOpts) -> Result<Option<PureState>> {
    if value.z_basis.is_empty() {
        return Ok(None);
    }
    let sector = SectorSpec::distinguishable(&vec![2; l])?;
    let slot_dims = sector.slot_dims();
    let dim = 1usize << l;
    let span = &value.z_basis;

    let targets: Vec<CMatrix> = value
        .beta
        .iter()
        .map(|&b| {
            let mut m = CMatrix::zeros(2, 2);
            m[(0, 0)] = C64::new(b, 0.0);
            m[(1, 1)] = C64::new(-b, 0.0);
            m
        })
        .collect();

    let embed = |coeffs: &CVector| -> CVector {
        let mut full = CVector::zeros(dim);
        for (pos, &idx) in span.iter().enumerate() {
            full[idx] = coeffs[pos];
        }
        full
    };
    let restrict = |full: &CVector| -> CVector {
        CVector::from_iterator(span.len(), span.iter().map(|&idx| full[idx]))
    };

    let objective = |full: &CVector| -> f64 {
        let state = PureState::from_normalized(sector.clone(), full.clone());
        momentum_blocks(&state)
            .iter()
            .zip(&targets)
            .map(|(m, t)| (m - t).norm_squared())
            .sum()
    };

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best: Option<(f64, CVector)> = None;

    for _restart in 0..opts.restarts.max(1) {
        let mut coeffs = CVector::from_fn(span.len(), |_, _| {
            use rand::Rng;
            use rand_distr::StandardNormal;
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        });
        let norm = coeffs.norm();
        if norm < 1e-12 {
            continue;
        }
        coeffs.unscale_mut(norm);

        let mut full = embed(&coeffs);
        let mut f = objective(&full);
        let mut step = 0.5;
        for _iter in 0..opts.max_iters {
            // Euclidean gradient of the objective is 4·G v with
            // G = Σ (m_k − target_k)^{(k)}; the constant washes into the
            // line search.
            let state = PureState::from_normalized(sector.clone(), full.clone());
            let diffs: Vec<CMatrix> = momentum_blocks(&state)
                .iter()
                .zip(&targets)
                .map(|(m, t)| m - t)
                .collect();
            let gv = apply_slot_sum(state.amplitudes(), &slot_dims, &diffs);
            let g_full = numkit::tangent_project(state.amplitudes(), &gv);
            // Stay inside the span.
            let g = embed(&restrict(&g_full));
            let res = g.norm();
            // Polish well past the acceptance residual so witnesses also
            // satisfy the criticality test at its tighter tolerance.
            if res < 1e-13 || f < 1e-20 {
                break;
            }
            let mut t = step;
            let mut accepted = false;
            for _bt in 0..60 {
                let trial = {
                    let cand = &full - g.scale(t);
                    let n = cand.norm();
                    if n < 1e-14 {
                        t *= 0.5;
                        continue;
                    }
                    cand.unscale(n)
                };
                let ft = objective(&trial);
                if ft <= f - 1e-4 * t * res * res {
                    full = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                break;
            }
            step = (t * 2.0).min(2.0);
        }
        if best.as_ref().is_none_or(|(bf, _)| f < *bf) {
            best = Some((f, full.clone()));
        }
        if f.sqrt() < WITNESS_RESIDUAL {
            break;
        }
    }

    Ok(best.and_then(|(f, full)| {
        if f.sqrt() < WITNESS_RESIDUAL {
            Some(PureState::from_normalized(sector.clone(), full))
        } else {
            None
        }
    }))
}

/// Criticality verdict for a state: `‖Av − ⟨v,Av⟩v‖` with
/// `A = Σ_k m_k^{(k)}`.
#[derive(Debug, Clone, Copy)]
pub struct CriticalityReport {
    pub critical: bool,
    pub eigenvalue: f64,
    pub residual: f64,
}

/// Test whether a state solves `μ([v]).v = λv`.
pub fn is_critical(state: &PureState) -> CriticalityReport {
    is_critical_with(state, &Tolerances::default())
}

pub fn is_critical_with(state: &PureState, tol: &Tolerances) -> CriticalityReport {
    let slot_dims = state.sector().slot_dims();
    let blocks = crate::momentum::momentum_blocks_per_slot(state);
    let v = state.amplitudes();
    let av = apply_slot_sum(v, &slot_dims, &blocks);
    let eigenvalue = v.dotc(&av).re;
    let residual = (&av - v.map(|x| x * C64::new(eigenvalue, 0.0))).norm();
    CriticalityReport {
        critical: residual < tol.flow_tol,
        eigenvalue,
        residual,
    }
}

/// Canonical chamber representative of a per-qubit spectra point:
/// absolute values sorted nonincreasing.
pub fn canonical_beta(point: &SpectraPoint) -> Option<Vec<f64>> {
    let mut lams = point.qubit_lambdas()?;
    for x in lams.iter_mut() {
        *x = x.abs();
        if *x < 1e-12 {
            *x = 0.0;
        }
    }
    lams.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Some(lams)
}
