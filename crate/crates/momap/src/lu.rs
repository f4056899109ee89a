//! Local-unitary equivalence decisions.
//!
//! For two distinguishable particles, two bosons and two fermions the
//! fibers of the momentum map lie inside single local-unitary orbits, so
//! comparing reduced one-particle spectra decides equivalence outright.
//! Everywhere else the spectra comparison is only necessary: a failed
//! comparison separates the states, a passed one leaves the question open
//! (for three qubits the hyperdeterminant is consulted as an extra
//! discriminator before giving up).

use crate::error::{Error, Result};
use crate::flow::{schmidt_coefficients, three_tangle};
use crate::momentum::psi;
use crate::state::{PureState, SectorKind};

/// Tolerance for sorted spectra comparison (absolute; spectra are bounded
/// by one).
pub const SPECTRA_TOL: f64 = 1e-9;

/// Outcome of an equivalence test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    UndecidedNecessaryPassed,
}

/// Verdict plus a human-readable account of the invariants compared.
#[derive(Debug, Clone)]
pub struct LuVerdict {
    pub verdict: Verdict,
    pub evidence: String,
}

fn spectra_match(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= SPECTRA_TOL)
}

/// Complete LU decision for two distinguishable particles: equivalent iff
/// the Schmidt coefficient multisets agree.
pub fn lu_equivalent_bipartite(a: &PureState, b: &PureState) -> Result<LuVerdict> {
    if a.sector() != b.sector() {
        return Err(Error::SectorMismatch(
            "bipartite comparison needs identical sectors".into(),
        ));
    }
    if a.sector().kind() != SectorKind::Distinguishable || a.sector().num_slots() != 2 {
        return Err(Error::SectorMismatch(
            "bipartite comparison needs two distinguishable particles".into(),
        ));
    }
    let sa = schmidt_coefficients(a, &[0])?;
    let sb = schmidt_coefficients(b, &[0])?;
    let verdict = if spectra_match(&sa, &sb) {
        Verdict::Equivalent
    } else {
        Verdict::NotEquivalent
    };
    Ok(LuVerdict {
        verdict,
        evidence: format!(
            "schmidt coefficients {:?} vs {:?} (complete test: spectra decide this sector)",
            rounded(&sa),
            rounded(&sb)
        ),
    })
}

/// Complete LU decision for two bosons or two fermions of the same `d`:
/// equivalent iff the single reduced spectra agree.
pub fn lu_equivalent_two_indistinguishable(a: &PureState, b: &PureState) -> Result<LuVerdict> {
    if a.sector() != b.sector() {
        return Err(Error::SectorMismatch(
            "comparison needs identical sectors".into(),
        ));
    }
    let kind = a.sector().kind();
    if kind == SectorKind::Distinguishable || a.sector().num_slots() != 2 {
        return Err(Error::SectorMismatch(
            "this test covers exactly two bosons or two fermions".into(),
        ));
    }
    let sa = psi(a);
    let sb = psi(b);
    let verdict = if spectra_match(&sa.lambdas()[0], &sb.lambdas()[0]) {
        Verdict::Equivalent
    } else {
        Verdict::NotEquivalent
    };
    Ok(LuVerdict {
        verdict,
        evidence: format!(
            "shifted one-particle spectra {:?} vs {:?} (complete test: spectra decide this sector)",
            rounded(&sa.lambdas()[0]),
            rounded(&sb.lambdas()[0])
        ),
    })
}

/// Necessary spectra test for any matching pair of sectors.
///
/// Compares the shifted spectra subsystem by subsystem in a fixed order
/// (local unitaries do not permute parties). Failure proves inequivalence.
/// Success is conclusive only in the spectra-complete sectors; for three
/// qubits the tangle is consulted first, and otherwise the verdict is
/// `UndecidedNecessaryPassed`.
pub fn lu_necessary(a: &PureState, b: &PureState) -> Result<LuVerdict> {
    if a.sector() != b.sector() {
        return Err(Error::SectorMismatch(
            "comparison needs identical sectors".into(),
        ));
    }
    let sa = psi(a);
    let sb = psi(b);
    for (k, (la, lb)) in sa.lambdas().iter().zip(sb.lambdas()).enumerate() {
        if !spectra_match(la, lb) {
            return Ok(LuVerdict {
                verdict: Verdict::NotEquivalent,
                evidence: format!(
                    "subsystem {k} spectra differ: {:?} vs {:?}",
                    rounded(la),
                    rounded(lb)
                ),
            });
        }
    }
    // Spectra agree. Complete sectors get a full verdict.
    let sector = a.sector();
    let complete = sector.num_slots() == 2
        && (sector.kind() != SectorKind::Distinguishable || sector.num_subsystems() == 2);
    if complete {
        return Ok(LuVerdict {
            verdict: Verdict::Equivalent,
            evidence: "all reduced spectra agree (complete test: spectra decide this sector)"
                .into(),
        });
    }
    if sector.is_qubits() && sector.num_slots() == 3 {
        let ta = three_tangle(a)?;
        let tb = three_tangle(b)?;
        if (ta - tb).abs() > 1e-8 {
            return Ok(LuVerdict {
                verdict: Verdict::NotEquivalent,
                evidence: format!(
                    "spectra agree but three-tangles differ: {ta:.12} vs {tb:.12}"
                ),
            });
        }
        return Ok(LuVerdict {
            verdict: Verdict::UndecidedNecessaryPassed,
            evidence: format!(
                "spectra and three-tangles agree (tangle {ta:.12}); the necessary test cannot certify equivalence"
            ),
        });
    }
    Ok(LuVerdict {
        verdict: Verdict::UndecidedNecessaryPassed,
        evidence: "all reduced spectra agree; the necessary test cannot certify equivalence"
            .into(),
    })
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| (x * 1e12).round() / 1e12).collect()
}
