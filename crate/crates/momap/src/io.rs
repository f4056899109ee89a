//! JSON wire formats.
//!
//! States: `{"sector": {"kind": "...", "dims": [...]}, "amplitudes":
//! [[re, im], ...]}` with the amplitudes flattened row-major, most
//! significant slot first (see [`crate::state`] for the full convention);
//! indistinguishable sectors carry the embedded `d^L` tensor. Density
//! matrices: `{"dims": [...], "matrix": [[[re, im], ...], ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{make_state, DensityMatrix, PureState, SectorKind, SectorSpec};
use crate::{C64, CMatrix};

#[derive(Serialize, Deserialize)]
struct SectorWire {
    kind: SectorKind,
    dims: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    sector: SectorWire,
    amplitudes: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct DensityWire {
    dims: Vec<usize>,
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Parse a pure state from its JSON wire form (revalidates and
/// renormalizes).
pub fn state_from_json(text: &str) -> Result<PureState> {
    let wire: StateWire = serde_json::from_str(text)?;
    let sector = SectorSpec::from_parts(wire.sector.kind, &wire.sector.dims)?;
    let amps: Vec<C64> = wire
        .amplitudes
        .iter()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    make_state(sector, &amps)
}

/// Serialize a pure state to its JSON wire form.
pub fn state_to_json(state: &PureState) -> String {
    let wire = StateWire {
        sector: SectorWire {
            kind: state.sector().kind(),
            dims: state.sector().dims().to_vec(),
        },
        amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
    };
    serde_json::to_string(&wire).expect("state wire form serializes")
}

/// Parse a density matrix from its JSON wire form (revalidates).
pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let wire: DensityWire = serde_json::from_str(text)?;
    let total: usize = wire.dims.iter().product();
    if wire.matrix.len() != total || wire.matrix.iter().any(|row| row.len() != total) {
        return Err(Error::Dimension(format!(
            "matrix must be {total}x{total} for dims {:?}",
            wire.dims
        )));
    }
    let mut m = CMatrix::zeros(total, total);
    for (i, row) in wire.matrix.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = C64::new(re, im);
        }
    }
    DensityMatrix::new(&wire.dims, m)
}

/// Serialize a density matrix to its JSON wire form.
pub fn density_to_json(rho: &DensityMatrix) -> String {
    let total = rho.total_dim();
    let matrix: Vec<Vec<[f64; 2]>> = (0..total)
        .map(|i| {
            (0..total)
                .map(|j| {
                    let e = rho.matrix()[(i, j)];
                    [e.re, e.im]
                })
                .collect()
        })
        .collect();
    let wire = DensityWire {
        dims: rho.dims().to_vec(),
        matrix,
    };
    serde_json::to_string(&wire).expect("density wire form serializes")
}
