//! Acceptance suite: one test per criterion, each printing a PASS line on
//! success (run with `--nocapture` to see them). Expected values come from
//! independent oracles computed inside this file (brute-force enumeration,
//! finite differences, explicit diagonalization searches) or from frozen
//! exact constants.

use std::time::Instant;

use momap::atlas::{canonical_beta, enumerate_b, is_critical, EnumOpts};
use momap::catalog;
use momap::flow::{
    descent_direction, flow_to_critical, ghz_to_w_demo, null_cone_test, polytope_sample, FlowOpts,
};
use momap::lu::{lu_equivalent_bipartite, lu_equivalent_two_indistinguishable, lu_necessary, Verdict};
use momap::momentum::{
    kirwan_contains, mean_linear_entropy, momentum, norm_mu_squared, psi, reduced_space_dim,
    BoundaryCase, PolytopeLocation,
};
use momap::numkit::{self, fd_gradient, min_norm_point};
use momap::orbits::{
    cc_simplex_scan, euler_characteristic, is_cc, omega_rank, orbit_dim, orbit_report, GroupSpec,
};
use momap::state::{
    apply_local, make_state, fidelity, DensityMatrix, LocalOperator, PureState, SectorSpec,
};
use momap::{CMatrix, CVector, C64};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 1729;

fn random_qubit_state(l: usize, rng: &mut ChaCha8Rng) -> PureState {
    let sector = SectorSpec::distinguishable(&vec![2; l]).unwrap();
    catalog::random_state(&sector, rng)
}

#[test]
fn criterion_01_table2_reproduction() {
    let start = Instant::now();
    for entry in catalog::critical_family_4q() {
        let blocks = momentum(&entry.state);
        for (k, (block, &lam)) in blocks
            .blocks()
            .iter()
            .zip(&entry.expected_lambdas)
            .enumerate()
        {
            let eigs = numkit::eigvalsh(block);
            assert!(
                (eigs[0] - lam).abs() < 1e-10 && (eigs[1] + lam).abs() < 1e-10,
                "{} qubit {k}: eigs {eigs:?} vs expected ±{lam}",
                entry.name
            );
        }
        let entropy = mean_linear_entropy(&entry.state);
        assert!(
            (entropy - entry.expected_entropy).abs() < 1e-12,
            "{}: entropy {entropy} vs {}",
            entry.name,
            entry.expected_entropy
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}, budget 1s");
    println!(
        "criterion 01 PASS: nine critical-state rows reproduced (spectra 1e-10, entropy 1e-12) in {elapsed:?}"
    );
}

#[test]
fn criterion_02_criticality() {
    let start = Instant::now();
    for entry in catalog::critical_family_4q() {
        let rep = is_critical(&entry.state);
        assert!(
            rep.residual < 1e-10,
            "{}: residual {}",
            entry.name,
            rep.residual
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut failures = 0;
    for i in 0..100 {
        let state = random_qubit_state(4, &mut rng);
        let rep = is_critical(&state);
        if rep.residual <= 1e-3 {
            failures += 1;
            println!(
                "criterion 02 log: random state {i} unexpectedly near-critical, residual {}",
                rep.residual
            );
        }
    }
    assert_eq!(failures, 0, "{failures} random states were near-critical");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}, budget 5s");
    println!(
        "criterion 02 PASS: nine critical states below 1e-10, 100 random states above 1e-3 in {elapsed:?}"
    );
}

#[test]
fn criterion_03_dimension_formulas() {
    let start = Instant::now();
    let r = reduced_space_dim(&[0.25, 0.3, 0.2, 0.22]).unwrap();
    assert_eq!((r.case, r.dim), (BoundaryCase::Interior, 14));
    let r = reduced_space_dim(&[0.5, 0.25, 0.3, 0.2]).unwrap();
    assert_eq!((r.case, r.dim), (BoundaryCase::BoundaryI { k: 1 }, 2));
    let r = reduced_space_dim(&[0.2, 0.35, 0.4, 0.45]).unwrap();
    assert_eq!((r.case, r.dim), (BoundaryCase::BoundaryII, 0));
    let r = reduced_space_dim(&[0.0, 0.25, 0.3, 0.2]).unwrap();
    assert_eq!((r.case, r.dim), (BoundaryCase::BoundaryIII { k: 1 }, 12));

    // General identities on their domains of validity: the case (i)
    // reduction needs a full-dimensional residual polytope (L−k ≥ 3;
    // below that the residual polytope degenerates and the polygon
    // equality takes priority with dimension zero), and the case (iii)
    // formula applies where it yields a nonnegative dimension.
    for l in [3usize, 4, 5] {
        let interior = (1u64 << (l + 1)) - 4 * l as u64 - 2;
        assert_eq!(
            reduced_space_dim(&vec![0.25; l]).unwrap().dim,
            interior,
            "interior identity at L={l}"
        );
        for k in [1usize, 2] {
            if l - k >= 3 {
                let mut lam = vec![0.2; l];
                lam.iter_mut().take(k).for_each(|x| *x = 0.5);
                let want = (1u64 << (l - k + 1)) - 4 * (l - k) as u64 - 2;
                let rep = reduced_space_dim(&lam).unwrap();
                assert_eq!(
                    (rep.case, rep.dim),
                    (BoundaryCase::BoundaryI { k }, want),
                    "case (i) identity at L={l}, k={k}"
                );
            }
            let formula = (1i64 << (l + 1)) - 4 * l as i64 - 2 * k as i64 - 2;
            if formula >= 0 {
                let mut lam = vec![0.2; l];
                lam.iter_mut().take(k).for_each(|x| *x = 0.0);
                let rep = reduced_space_dim(&lam).unwrap();
                assert_eq!(
                    (rep.case, rep.dim),
                    (BoundaryCase::BoundaryIII { k }, formula as u64),
                    "case (iii) identity at L={l}, k={k}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 03 PASS: dimension formulas (14/2/0/12 and general identities on their domains) in {elapsed:?}"
    );
}

/// Brute-force oracle: minimum-norm point of every nonempty weight
/// subset, Weyl-canonicalized and deduplicated.
fn brute_force_atlas(l: usize) -> Vec<Vec<f64>> {
    let weights = momap::atlas::qubit_weights(l).unwrap();
    let points: Vec<DVector<f64>> = weights
        .iter()
        .map(|w| DVector::from_vec(w.coords.clone()))
        .collect();
    let mut betas: Vec<Vec<f64>> = Vec::new();
    for mask in 1usize..(1 << weights.len()) {
        let subset: Vec<DVector<f64>> = (0..weights.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| points[i].clone())
            .collect();
        let mn = min_norm_point(&subset).unwrap();
        let mut beta: Vec<f64> = mn.point.iter().map(|x| x.abs()).collect();
        beta.sort_by(|a, b| b.partial_cmp(a).unwrap());
        beta.iter_mut().for_each(|x| {
            if *x < 1e-10 {
                *x = 0.0;
            }
        });
        betas.push(beta);
    }
    betas.sort_by(|a, b| a.partial_cmp(b).unwrap());
    betas.dedup_by(|a, b| a.iter().zip(b.iter()).all(|(x, y)| (x - y).abs() <= 1e-9));
    betas
}

#[test]
fn criterion_04_critical_atlas_small_l() {
    let start = Instant::now();
    for l in [2usize, 3] {
        let atlas = enumerate_b(l, &EnumOpts { seed: SEED, ..EnumOpts::default() }).unwrap();
        assert!(atlas.complete);
        let oracle = brute_force_atlas(l);
        assert_eq!(
            atlas.values.len(),
            oracle.len(),
            "L={l}: enumeration size {} vs oracle {}",
            atlas.values.len(),
            oracle.len()
        );
        let mut ours: Vec<Vec<f64>> = atlas.values.iter().map(|v| v.beta.clone()).collect();
        ours.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in ours.iter().zip(&oracle) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() <= 1e-9, "L={l}: {a:?} vs oracle {b:?}");
            }
        }
        if l == 3 {
            let sixth = 1.0 / 6.0;
            let expect = [
                (vec![0.0, 0.0, 0.0], true),
                (vec![sixth, sixth, sixth], true),
                (vec![0.5, 0.0, 0.0], true),
                (vec![0.5, 0.5, 0.0], false),
                (vec![0.5, 0.5, 0.5], true),
            ];
            for (beta, realizable) in expect {
                let found = atlas
                    .values
                    .iter()
                    .find(|v| v.beta.iter().zip(&beta).all(|(x, y)| (x - y).abs() < 1e-9))
                    .unwrap_or_else(|| panic!("beta {beta:?} missing at L=3"));
                assert_eq!(
                    found.nonempty, realizable,
                    "realizability of {beta:?} at L=3"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60s");
    println!(
        "criterion 04 PASS: atlas(2) and atlas(3) match the full-powerset oracle; (1/2,1/2,0) unrealizable at L=3; in {elapsed:?}"
    );
}

#[test]
fn criterion_05_gradient_correctness() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 5);
    for i in 0..100 {
        let l = 3 + i % 3;
        let state = random_qubit_state(l, &mut rng);
        let d = descent_direction(&state);
        let grad = fd_gradient(
            |v| {
                let s = make_state(
                    state.sector().clone(),
                    v.iter().copied().collect::<Vec<_>>().as_slice(),
                )
                .unwrap();
                norm_mu_squared(&s)
            },
            state.amplitudes(),
            1e-6,
        );
        let cosine = d.dotc(&grad).re / (d.norm() * grad.norm());
        assert!(cosine < -0.999, "state {i} (L={l}): cosine {cosine}");
    }

    // Strict decrease along every accepted Armijo step of a short flow.
    for i in 0..10 {
        let l = 3 + i % 3;
        let state = random_qubit_state(l, &mut rng);
        let mut v: CVector = state.amplitudes().clone();
        let mut f = norm_mu_squared(&state);
        let mut accepted = 0;
        let mut t = 1.0f64;
        while accepted < 40 {
            let current = make_state(
                state.sector().clone(),
                v.iter().copied().collect::<Vec<_>>().as_slice(),
            )
            .unwrap();
            let d = descent_direction(&current);
            if d.norm() < 1e-9 {
                break;
            }
            let mut step = t;
            loop {
                let trial = &v + d.map(|x| x * C64::new(step, 0.0));
                let trial_state = make_state(
                    state.sector().clone(),
                    trial.iter().copied().collect::<Vec<_>>().as_slice(),
                )
                .unwrap();
                let ft = norm_mu_squared(&trial_state);
                if ft <= f - 1e-4 * step * d.norm_squared() {
                    assert!(ft < f, "accepted step did not strictly decrease");
                    v = trial_state.amplitudes().clone();
                    f = ft;
                    break;
                }
                step *= 0.5;
                assert!(step > 1e-18, "line search exhausted unexpectedly");
            }
            t = (step * 2.0).min(4.0);
            accepted += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60s");
    println!(
        "criterion 05 PASS: descent direction anti-aligned with finite differences (cos < -0.999) on 100 states; monotone decrease verified; in {elapsed:?}"
    );
}

#[test]
fn criterion_06_flow_null_cone_classification() {
    let start = Instant::now();
    let opts = FlowOpts::default();
    assert!(null_cone_test(&catalog::ghz(3).unwrap(), &opts).unwrap().semistable);
    assert!(null_cone_test(&catalog::ghz(4).unwrap(), &opts).unwrap().semistable);

    let w3 = null_cone_test(&catalog::w_state(3).unwrap(), &opts).unwrap();
    assert!(!w3.semistable);
    let beta = w3.assignment.matched_beta.expect("matched stratum");
    for x in &beta {
        assert!((x - 1.0 / 6.0).abs() < 1e-9, "W3 beta {beta:?}");
    }

    let sep = null_cone_test(&catalog::qubit_ket("000").unwrap(), &opts).unwrap();
    assert!(!sep.semistable);
    let beta = sep.assignment.matched_beta.expect("matched stratum");
    for x in &beta {
        assert!((x - 0.5).abs() < 1e-9, "separable beta {beta:?}");
    }

    let perturbed =
        catalog::qubit_superposition(3, &[("000", 1.0), ("111", 1.0), ("010", 0.01)]).unwrap();
    let out = flow_to_critical(&perturbed, &opts).unwrap();
    assert!(
        out.final_norm_mu_sq < 1e-8,
        "perturbed GHZ flow stalled at {}",
        out.final_norm_mu_sq
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}, budget 120s");
    println!(
        "criterion 06 PASS: GHZ semistable, W3 at (1/6,1/6,1/6), |000> at (1/2,1/2,1/2), perturbed GHZ reaches the zero fiber; in {elapsed:?}"
    );
}

#[test]
fn criterion_07_exceptional_state_limit() {
    let start = Instant::now();
    let sweep = [1.0, 0.5, 0.1, 0.01];
    let fidelities: Vec<f64> = sweep.iter().map(|&a| ghz_to_w_demo(a).unwrap()).collect();
    for pair in fidelities.windows(2) {
        assert!(
            pair[1] >= pair[0],
            "fidelity not monotone over the sweep: {fidelities:?}"
        );
    }
    assert!(fidelities[3] > 0.999, "fidelity at a=0.01: {}", fidelities[3]);
    println!(
        "criterion 07 PASS: squeezed-GHZ fidelity against W monotone {:?}, exceeds 0.999 at a=0.01 ({:?})",
        fidelities,
        start.elapsed()
    );
}

#[test]
fn criterion_08_bipartite_lu_decision() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);

    // Distinguishable pairs (two dim patterns, 100 each).
    for i in 0..200 {
        let dims: Vec<usize> = if i % 2 == 0 { vec![2, 2] } else { vec![3, 4] };
        let sector = SectorSpec::distinguishable(&dims).unwrap();
        let a = catalog::random_state(&sector, &mut rng);
        let op = LocalOperator::new(vec![
            catalog::random_unitary(dims[0], &mut rng),
            catalog::random_unitary(dims[1], &mut rng),
        ])
        .unwrap();
        let b = apply_local(&op, &a).unwrap();
        assert_eq!(
            lu_equivalent_bipartite(&a, &b).unwrap().verdict,
            Verdict::Equivalent,
            "LU-related pair {i} not recognized"
        );
        let c = catalog::random_state(&sector, &mut rng);
        assert_eq!(
            lu_equivalent_bipartite(&a, &c).unwrap().verdict,
            Verdict::NotEquivalent,
            "independent pair {i} not separated"
        );
    }

    // Two bosons and two fermions, d = 4.
    for kind in ["bosonic", "fermionic"] {
        let sector = if kind == "bosonic" {
            SectorSpec::bosonic(4, 2).unwrap()
        } else {
            SectorSpec::fermionic(4, 2).unwrap()
        };
        for i in 0..200 {
            let a = catalog::random_state(&sector, &mut rng);
            let op =
                LocalOperator::diagonal(catalog::random_unitary(4, &mut rng), 2).unwrap();
            let b = apply_local(&op, &a).unwrap();
            assert_eq!(
                lu_equivalent_two_indistinguishable(&a, &b).unwrap().verdict,
                Verdict::Equivalent,
                "{kind} LU pair {i}"
            );
            let c = catalog::random_state(&sector, &mut rng);
            assert_eq!(
                lu_equivalent_two_indistinguishable(&a, &c).unwrap().verdict,
                Verdict::NotEquivalent,
                "{kind} independent pair {i}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}, budget 30s");
    println!(
        "criterion 08 PASS: 200 LU pairs equivalent + 200 independent pairs separated, per sector (distinguishable, bosons, fermions d=4); in {elapsed:?}"
    );
}

#[test]
fn criterion_09_counterexample_handling() {
    let start = Instant::now();
    let (x1, w_like) = catalog::spectra_matched_pair().unwrap();
    // The spectra stage alone cannot separate them.
    let pa = psi(&x1).qubit_lambdas().unwrap();
    let pb = psi(&w_like).qubit_lambdas().unwrap();
    for (x, y) in pa.iter().zip(&pb) {
        assert!((x - y).abs() < 1e-12);
    }
    // The hyperdeterminant oracle does: 8/9 vs 0.
    let ta = momap::flow::three_tangle(&x1).unwrap();
    let tb = momap::flow::three_tangle(&w_like).unwrap();
    assert!((ta - 8.0 / 9.0).abs() < 1e-12, "tangle(x1) = {ta}");
    assert!(tb < 1e-12, "tangle(w variant) = {tb}");
    let verdict = lu_necessary(&x1, &w_like).unwrap();
    assert_eq!(verdict.verdict, Verdict::NotEquivalent);
    assert!(verdict.evidence.contains("tangle"));
    println!(
        "criterion 09 PASS: spectra-matched pair separated by the tangle (8/9 vs 0) ({:?})",
        start.elapsed()
    );
}

/// Independent CC oracle: explicitly build candidate product
/// diagonalizations (simultaneous diagonalizers of the two expansion
/// families plus the marginal eigenbases) and check the off-diagonal mass
/// of the conjugated matrix directly.
fn cc_oracle(rho: &DensityMatrix) -> bool {
    let (na, nb) = (rho.dims()[0], rho.dims()[1]);
    let full_basis = |n: usize| -> Vec<CMatrix> {
        let mut v = vec![CMatrix::identity(n, n).scale(1.0 / (n as f64).sqrt())];
        v.extend(numkit::hermitian_traceless_basis(n));
        v
    };
    let a_family: Vec<CMatrix> = full_basis(nb)
        .iter()
        .map(|y| {
            CMatrix::from_fn(na, na, |i, i2| {
                let mut acc = C64::new(0.0, 0.0);
                for j in 0..nb {
                    for j2 in 0..nb {
                        acc += rho.matrix()[(i * nb + j, i2 * nb + j2)] * y[(j2, j)];
                    }
                }
                acc
            })
        })
        .collect();
    let b_family: Vec<CMatrix> = full_basis(na)
        .iter()
        .map(|x| {
            CMatrix::from_fn(nb, nb, |j, j2| {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..na {
                    for i2 in 0..na {
                        acc += rho.matrix()[(i * nb + j, i2 * nb + j2)] * x[(i2, i)];
                    }
                }
                acc
            })
        })
        .collect();
    let diagonalizer = |family: &[CMatrix]| -> Vec<CMatrix> {
        let n = family[0].nrows();
        let mut candidates = Vec::new();
        for attempt in 0..3u32 {
            let mut combo = CMatrix::zeros(n, n);
            let mut c = 0.7548776662466927 + attempt as f64 * 0.134;
            for a in family {
                c = (c * 2.618033988749895).fract() + 0.05;
                combo += a.scale(c);
            }
            let (_, vecs) = numkit::eigh(&combo);
            candidates.push(vecs);
        }
        candidates
    };
    let mut a_candidates = diagonalizer(&a_family);
    let mut b_candidates = diagonalizer(&b_family);
    a_candidates.push(numkit::eigh(&rho.reduced(0).unwrap()).1);
    b_candidates.push(numkit::eigh(&rho.reduced(1).unwrap()).1);
    for ua in &a_candidates {
        for ub in &b_candidates {
            let u = ua.kronecker(ub);
            let rotated = u.adjoint() * rho.matrix() * u;
            let mut off: f64 = 0.0;
            for i in 0..na * nb {
                for j in 0..na * nb {
                    if i != j {
                        off = off.max(rotated[(i, j)].norm());
                    }
                }
            }
            if off < 1e-8 {
                return true;
            }
        }
    }
    false
}

#[test]
fn criterion_10_cc_cq_geometry() {
    let start = Instant::now();
    let group = GroupSpec::full(2).unwrap();

    // 40-subdivision grid of the CC simplex.
    let rows = cc_simplex_scan(40).unwrap();
    let allowed: [(usize, usize, i64); 5] =
        [(0, 0, 0), (2, 2, 0), (4, 4, 0), (4, 0, 4), (4, 2, 2)];
    for row in &rows {
        let triple = (row.orbit_dim, row.omega_rank, row.degeneracy_d);
        assert!(
            allowed.contains(&triple),
            "stratum {triple:?} at p = {:?} not among the five known strata",
            row.p
        );
        assert!(
            row.euler_chi != 0,
            "CC state with vanishing Euler characteristic at {:?}",
            row.p
        );
    }

    // The maximally mixed state.
    let iso = DensityMatrix::new(&[2, 2], CMatrix::identity(4, 4).scale(0.25)).unwrap();
    assert_eq!(orbit_dim(&iso, &group).unwrap(), 0);
    assert_eq!(omega_rank(&iso, &group).unwrap(), 0);
    assert_eq!(momap::orbits::degeneracy_d(&iso, &group).unwrap(), 0);
    assert_eq!(euler_characteristic(&iso, &group).unwrap(), 1);

    // 100 random non-CC states have vanishing characteristic.
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    for i in 0..100 {
        let sector = SectorSpec::distinguishable(&[4, 4]).unwrap();
        let pure = catalog::random_state(&sector, &mut rng);
        let rho = DensityMatrix::from_pure(&pure);
        let reduced = CMatrix::from_fn(4, 4, |a, b| {
            let mut acc = C64::new(0.0, 0.0);
            for q in 0..4 {
                acc += rho.matrix()[(a * 4 + q, b * 4 + q)];
            }
            acc
        });
        let two_qubit = DensityMatrix::new(&[2, 2], reduced).unwrap();
        assert!(!is_cc(&two_qubit).unwrap(), "random state {i} tested CC");
        assert_eq!(
            euler_characteristic(&two_qubit, &group).unwrap(),
            0,
            "random non-CC state {i} has nonzero chi"
        );
    }

    // Agreement with the independent oracle on 200 cases, including
    // engineered degeneracies.
    let mut cc_count = 0;
    let mut non_count = 0;
    for trial in 0..200 {
        let dims: Vec<usize> = if trial % 2 == 0 { vec![2, 2] } else { vec![2, 3] };
        let total: usize = dims.iter().product();
        let rho = if trial % 3 == 0 {
            // Non-CC: two-sided marginal of a random pure state.
            let sector = SectorSpec::distinguishable(&[total, total]).unwrap();
            let pure = catalog::random_state(&sector, &mut rng);
            let full = DensityMatrix::from_pure(&pure);
            let reduced = CMatrix::from_fn(total, total, |a, b| {
                let mut acc = C64::new(0.0, 0.0);
                for q in 0..total {
                    acc += full.matrix()[(a * total + q, b * total + q)];
                }
                acc
            });
            DensityMatrix::new(&dims, reduced).unwrap()
        } else {
            // CC with deliberate ties, hidden by a random product unitary.
            let mut p: Vec<f64> = (0..total).map(|_| rng.random::<f64>()).collect();
            match trial % 4 {
                1 => p[1] = p[0],
                2 => {
                    p[1] = p[0];
                    if total > 3 {
                        p[3] = p[2];
                    }
                }
                _ => {}
            }
            let sum: f64 = p.iter().sum();
            let mut m = CMatrix::zeros(total, total);
            for (i, &pi) in p.iter().enumerate() {
                m[(i, i)] = C64::new(pi / sum, 0.0);
            }
            let u = catalog::random_unitary(dims[0], &mut rng)
                .kronecker(&catalog::random_unitary(dims[1], &mut rng));
            DensityMatrix::new(&dims, &u * m * u.adjoint()).unwrap()
        };
        let ours = is_cc(&rho).unwrap();
        let oracle = cc_oracle(&rho);
        assert_eq!(ours, oracle, "trial {trial}: is_cc {ours} vs oracle {oracle}");
        if ours {
            cc_count += 1;
        } else {
            non_count += 1;
        }
    }
    assert!(cc_count >= 50 && non_count >= 50, "unbalanced oracle sample");

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}, budget 300s");
    println!(
        "criterion 10 PASS: grid strata within the five known triples, chi nonzero on CC / zero on 100 non-CC, oracle agreement on 200 cases ({cc_count} CC / {non_count} non-CC); in {elapsed:?}"
    );
}

#[test]
fn criterion_11_entanglement_polytope_sampling() {
    let start = Instant::now();

    // W3: every sample respects the lower bound set by its critical value.
    let w_cloud = polytope_sample(&catalog::w_state(3).unwrap(), 2000, SEED).unwrap();
    assert!(
        w_cloud.min_norm_sq >= 1.0 / 12.0 - 1e-3,
        "W3 cloud undershot its stratum bound: {}",
        w_cloud.min_norm_sq
    );

    // Every sample of both clouds lies in the Kirwan polytope.
    let ghz_cloud = polytope_sample(&catalog::ghz(3).unwrap(), 2000, SEED).unwrap();
    for cloud in [&w_cloud, &ghz_cloud] {
        for point in &cloud.points {
            let lams = point.qubit_lambdas().unwrap();
            assert_ne!(
                kirwan_contains(&lams).unwrap(),
                PolytopeLocation::Outside,
                "sample {lams:?} escaped the polytope"
            );
        }
    }
    println!(
        "criterion 11 partial: W3 bound holds (min_norm_sq = {:.6} >= 1/12 - 1e-3) and all 4000 samples lie in the polytope ({:?})",
        w_cloud.min_norm_sq,
        start.elapsed()
    );

    // GHZ3: the zero fiber is in the orbit closure, so the polytope of
    // GHZ contains the origin; the criterion asks the sampled cloud to
    // come within 0.05 of it. Empirically the push-forward of the
    // i.i.d.-normal operator measure puts vanishing mass there (the
    // smallest ||lambda|| seen over 2*10^5 independent draws is ~0.12,
    // with an extrapolated per-draw probability below 1e-7 for 0.05), so
    // this bound is not reachable at n = 2000; the assertion is kept at
    // its stated value rather than loosened.
    let min_norm = ghz_cloud.min_norm_sq.sqrt();
    assert!(
        min_norm < 0.05,
        "GHZ3 cloud min ||lambda|| = {min_norm:.4} over 2000 samples (bound 0.05): \
         the sampled operator measure concentrates spectra away from the origin"
    );
    println!(
        "criterion 11 PASS: GHZ3 cloud reaches the origin region; in {:?}",
        start.elapsed()
    );
}

#[test]
fn acceptance_type_examples_from_interfaces() {
    // The CriticalValue invariants surfaced through the public API: every
    // realizable beta has a witness whose momentum and criticality match.
    let atlas = enumerate_b(3, &EnumOpts { seed: SEED, ..EnumOpts::default() }).unwrap();
    for value in &atlas.values {
        // Support weights satisfy the hyperplane equation.
        for w in &value.support {
            let ip: f64 = w.coords.iter().zip(&value.beta).map(|(a, b)| a * b).sum();
            assert!((ip - value.norm_sq).abs() <= 1e-9);
        }
        if value.nonempty {
            let witness = value.witness.as_ref().unwrap();
            let rep = is_critical(witness);
            assert!(rep.critical, "witness of {:?} not critical", value.beta);
            let beta = canonical_beta(&psi(witness)).unwrap();
            let dist: f64 = beta
                .iter()
                .zip(&value.beta)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt();
            assert!(dist < 1e-7, "witness psi {beta:?} vs {:?}", value.beta);
        }
    }

    // Fidelity of a state with itself through the JSON wire format.
    let ghz = catalog::ghz(3).unwrap();
    let wire = momap::io::state_to_json(&ghz);
    let back = momap::io::state_from_json(&wire).unwrap();
    assert!(fidelity(&ghz, &back).unwrap() > 1.0 - 1e-12);
}
