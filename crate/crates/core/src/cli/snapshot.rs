//! Raw little-endian f64 snapshots with a text sidecar.

use std::fs;
use std::path::{Path, PathBuf};

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::grid::PhaseField;

/// Write `<dir>/<field>_<index>.bin` (q-major) and its `.txt` manifest.
pub fn write_snapshot(dir: &Path, field: &str, index: usize, t: f64, data: &PhaseField) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let stem = format!("{field}_{index:05}");
    let bin = dir.join(format!("{stem}.bin"));
    let values = data.values();
    let mut bytes = Vec::with_capacity(values.len() * 8);
    for row in values.rows() {
        for x in row {
            bytes.extend_from_slice(&x.to_le_bytes());
        }
    }
    fs::write(&bin, bytes)?;

    let grid = data.grid();
    let spec = grid.spec();
    let manifest = format!(
        "field = {field}\ntime = {t}\nshape = {} {}\naxes = q p\nq_extent = 0 {}\np_extent = {} {}\n\
         p_deriv = {}\ndtype = float64\nbyte_order = little\nlayout = row-major, q slowest\n",
        grid.n_q(),
        grid.n_p(),
        spec.l_q,
        -spec.p_max,
        spec.p_max,
        spec.p_deriv_order,
    );
    fs::write(dir.join(format!("{stem}.txt")), manifest)?;
    Ok(bin)
}

/// Read a snapshot written by [`write_snapshot`].
pub fn read_snapshot(bin: &Path, shape: (usize, usize)) -> Result<Array2<f64>> {
    let bytes = fs::read(bin)?;
    if bytes.len() != shape.0 * shape.1 * 8 {
        return Err(Error::Config(format!(
            "snapshot '{}' has {} bytes, expected {}",
            bin.display(),
            bytes.len(),
            shape.0 * shape.1 * 8
        )));
    }
    let values = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect();
    Ok(Array2::from_shape_vec(shape, values).expect("shape"))
}
