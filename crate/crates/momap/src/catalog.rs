//! Named reference states and random-state constructors.
//!
//! Houses the standard multiqubit families (Bell, GHZ, W) and the nine
//! four-qubit critical states used as the built-in regression family, with
//! their exact shifted one-qubit spectra and mean linear entropies.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::state::{make_state, PureState, SectorSpec};
use crate::{C64, CMatrix};

/// Basis ket of an all-qubit sector from a bit string, e.g. `"1101"`.
pub fn qubit_ket(bits: &str) -> Result<PureState> {
    let l = bits.len();
    if l == 0 || bits.chars().any(|c| c != '0' && c != '1') {
        return Err(Error::InvalidArgument(format!(
            "not a qubit bit string: {bits:?}"
        )));
    }
    let idx = usize::from_str_radix(bits, 2).expect("validated bit string");
    let sector = SectorSpec::distinguishable(&vec![2; l])?;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << l];
    amps[idx] = C64::new(1.0, 0.0);
    make_state(sector, &amps)
}

/// Superposition of qubit basis kets with real coefficients.
pub fn qubit_superposition(l: usize, terms: &[(&str, f64)]) -> Result<PureState> {
    let sector = SectorSpec::distinguishable(&vec![2; l])?;
    let mut amps = vec![C64::new(0.0, 0.0); 1 << l];
    for (bits, coeff) in terms {
        if bits.len() != l {
            return Err(Error::Dimension(format!(
                "term {bits:?} does not have {l} bits"
            )));
        }
        let idx = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::InvalidArgument(format!("not a bit string: {bits:?}")))?;
        amps[idx] += C64::new(*coeff, 0.0);
    }
    make_state(sector, &amps)
}

/// The Bell state `(|00⟩ + |11⟩)/√2`.
pub fn bell() -> Result<PureState> {
    ghz(2)
}

/// `(|0…0⟩ + |1…1⟩)/√2` on `l` qubits.
pub fn ghz(l: usize) -> Result<PureState> {
    if l < 2 {
        return Err(Error::InvalidArgument("ghz needs at least 2 qubits".into()));
    }
    let ones = "1".repeat(l);
    let zeros = "0".repeat(l);
    qubit_superposition(l, &[(&zeros, 1.0), (&ones, 1.0)])
}

/// The `l`-qubit W state in the one-`0` convention,
/// `(|01…1⟩ + |101…1⟩ + … + |1…10⟩)/√l`; for three qubits this is
/// `(|011⟩ + |101⟩ + |110⟩)/√3`.
pub fn w_state(l: usize) -> Result<PureState> {
    if l < 2 {
        return Err(Error::InvalidArgument("w needs at least 2 qubits".into()));
    }
    let terms: Vec<(String, f64)> = (0..l)
        .map(|k| {
            let mut bits = vec!['1'; l];
            bits[k] = '0';
            (bits.into_iter().collect::<String>(), 1.0)
        })
        .collect();
    let refs: Vec<(&str, f64)> = terms.iter().map(|(s, c)| (s.as_str(), *c)).collect();
    qubit_superposition(l, &refs)
}

/// Image of [`w_state`] under `X^{⊗l}`: the single-excitation form
/// `(|10…0⟩ + … + |0…01⟩)/√l`. Same one-qubit spectra as `w_state`.
pub fn w_flipped(l: usize) -> Result<PureState> {
    if l < 2 {
        return Err(Error::InvalidArgument("w needs at least 2 qubits".into()));
    }
    let terms: Vec<(String, f64)> = (0..l)
        .map(|k| {
            let mut bits = vec!['0'; l];
            bits[k] = '1';
            (bits.into_iter().collect::<String>(), 1.0)
        })
        .collect();
    let refs: Vec<(&str, f64)> = terms.iter().map(|(s, c)| (s.as_str(), *c)).collect();
    qubit_superposition(l, &refs)
}

/// `√(2/3)|000⟩ + √(1/3)|111⟩`: a GHZ-class state whose one-qubit spectra
/// all equal `{2/3, 1/3}` — the same spectra as [`w_flipped`]`(3)`, even
/// though the two states are not related by local unitaries (their
/// three-tangles differ). See [`spectra_matched_pair`].
pub fn x1_state() -> Result<PureState> {
    qubit_superposition(
        3,
        &[("000", (2.0f64 / 3.0).sqrt()), ("111", (1.0f64 / 3.0).sqrt())],
    )
}

/// `(|000⟩ + |010⟩ + |001⟩)/√3`. Note this state is a product
/// `|0⟩ ⊗ (|00⟩+|10⟩+|01⟩)/√3`, so its first qubit is pure with spectrum
/// `{1, 0}`: it does **not** share one-qubit spectra with [`x1_state`].
/// The spectra-matched partner of `x1` is [`w_flipped`]`(3)`.
pub fn biseparable_three_term() -> Result<PureState> {
    qubit_superposition(3, &[("000", 1.0), ("010", 1.0), ("001", 1.0)])
}

/// The pair of three-qubit states with identical one-qubit spectra
/// (`{2/3, 1/3}` on every qubit) that no spectra test can distinguish:
/// `x1` and the flipped W state. Their three-tangles are `8/9` and `0`.
pub fn spectra_matched_pair() -> Result<(PureState, PureState)> {
    Ok((x1_state()?, w_flipped(3)?))
}

/// Random state of a sector: i.i.d. standard complex normal amplitudes,
/// then sector projection and normalization.
pub fn random_state<R: Rng + ?Sized>(sector: &SectorSpec, rng: &mut R) -> PureState {
    loop {
        let amps: Vec<C64> = (0..sector.embedded_dim())
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(re, im)
            })
            .collect();
        // Retry on the measure-zero degenerate draws (zero symmetric part etc).
        if let Ok(state) = make_state(sector.clone(), &amps) {
            return state;
        }
    }
}

/// Random complex matrix with i.i.d. standard complex normal entries.
pub fn random_complex_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re, im)
    })
}

/// Haar-ish random unitary via QR of a complex normal matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = random_complex_matrix(n, rng).qr();
    qr.q()
}

/// Random invertible matrix: complex normal entries, re-drawn while the
/// smallest singular value is below `1e-6` of the largest.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    loop {
        let m = random_complex_matrix(n, rng);
        let svals = m.clone().singular_values();
        if svals.min() > 1e-6 * svals.max() {
            return m;
        }
    }
}

/// One of the nine built-in four-qubit critical states, together with the
/// expected largest shifted one-qubit eigenvalue per qubit (the shifted
/// matrices are `diag(−λ_k, λ_k)` up to a local basis) and the expected
/// mean one-qubit linear entropy.
pub struct CriticalFamilyEntry {
    pub name: &'static str,
    pub state: PureState,
    pub expected_lambdas: [f64; 4],
    pub expected_entropy: f64,
}

/// The nine four-qubit critical states of the linear entropy, ordered by
/// increasing entropy: Sep, TriSep, W⁽³⁾⊗|1⟩, BiSep, W, Φ₃, Φ₂, Φ₁, GHZ.
///
/// Φ₂ here is a representative with exact momentum
/// `diag(∓1/6) ⊗ diag(∓1/6) ⊗ diag(∓1/6) ⊗ 0`: a superposition over the
/// six basis states carrying exactly two `1`s among the first three
/// qubits, arranged so every one-qubit reduced matrix is diagonal.
pub fn critical_family_4q() -> Vec<CriticalFamilyEntry> {
    let s = |terms: &[(&str, f64)]| qubit_superposition(4, terms).expect("valid built-in state");
    let sixth = 1.0 / 6.0;
    let inv2sqrt3 = 1.0 / (2.0 * 3.0f64.sqrt());
    let invsqrt3 = 1.0 / 3.0f64.sqrt();
    vec![
        CriticalFamilyEntry {
            name: "Sep",
            state: s(&[("1111", 1.0)]),
            expected_lambdas: [0.5, 0.5, 0.5, 0.5],
            expected_entropy: 0.0,
        },
        CriticalFamilyEntry {
            name: "TriSep",
            state: s(&[("1100", 1.0), ("1111", 1.0)]),
            expected_lambdas: [0.5, 0.5, 0.0, 0.0],
            expected_entropy: 0.25,
        },
        CriticalFamilyEntry {
            name: "W3x1",
            state: s(&[("0111", 1.0), ("1011", 1.0), ("1101", 1.0)]),
            expected_lambdas: [sixth, sixth, sixth, 0.5],
            expected_entropy: 1.0 / 3.0,
        },
        CriticalFamilyEntry {
            name: "BiSep",
            state: s(&[("1000", 1.0), ("1111", 1.0)]),
            expected_lambdas: [0.5, 0.0, 0.0, 0.0],
            expected_entropy: 0.375,
        },
        CriticalFamilyEntry {
            name: "W",
            state: s(&[("1110", 1.0), ("1101", 1.0), ("1011", 1.0), ("0111", 1.0)]),
            expected_lambdas: [0.25, 0.25, 0.25, 0.25],
            expected_entropy: 0.375,
        },
        CriticalFamilyEntry {
            name: "Phi3",
            state: s(&[
                ("1101", (0.3f64).sqrt()),
                ("1110", (0.3f64).sqrt()),
                ("0011", (0.4f64).sqrt()),
            ]),
            expected_lambdas: [0.1, 0.1, 0.2, 0.2],
            expected_entropy: 0.45,
        },
        CriticalFamilyEntry {
            name: "Phi2",
            state: s(&[
                ("0111", inv2sqrt3),
                ("1011", -inv2sqrt3),
                ("0110", -0.5),
                ("1010", -0.5),
                ("1101", invsqrt3),
            ]),
            expected_lambdas: [sixth, sixth, sixth, 0.0],
            expected_entropy: 11.0 / 24.0,
        },
        CriticalFamilyEntry {
            name: "Phi1",
            state: s(&[
                ("0011", (3.0f64 / 14.0).sqrt()),
                ("0101", (3.0f64 / 14.0).sqrt()),
                ("1001", (3.0f64 / 14.0).sqrt()),
                ("1110", (5.0f64 / 14.0).sqrt()),
            ]),
            expected_lambdas: [1.0 / 14.0, 1.0 / 14.0, 1.0 / 14.0, 1.0 / 7.0],
            expected_entropy: 27.0 / 56.0,
        },
        CriticalFamilyEntry {
            name: "GHZ",
            state: s(&[("0000", 1.0), ("1111", 1.0)]),
            expected_lambdas: [0.0, 0.0, 0.0, 0.0],
            expected_entropy: 0.5,
        },
    ]
}

/// A CC two-qubit density matrix `Σ p_ij |ij⟩⟨ij|` in the computational
/// product basis.
pub fn cc_diagonal(p: &[f64; 4]) -> Result<crate::state::DensityMatrix> {
    let total: f64 = p.iter().sum();
    if p.iter().any(|&x| x < -1e-12) || (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidArgument(
            "probabilities must be nonnegative and sum to one".into(),
        ));
    }
    let mut m = CMatrix::zeros(4, 4);
    for (i, &pi) in p.iter().enumerate() {
        m[(i, i)] = Complex64::new(pi.max(0.0) / total, 0.0);
    }
    crate::state::DensityMatrix::new(&[2, 2], m)
}
