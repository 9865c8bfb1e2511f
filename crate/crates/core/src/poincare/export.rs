//! File formats: binary grids with a text sidecar, and Wavefront OBJ meshes.
//!
//! Grid layout, all little-endian: 16-byte magic, three `u64` dimensions,
//! three `f64` origin components, three `f64` spacings, then the values as
//! `f64` with the last index fastest.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{IsoMesh, ScalarGrid3D};
use crate::error::{Error, Result};

pub const GRID_MAGIC: [u8; 16] = *b"KERRQC-GRID-F64\0";

fn grid_bytes(grid: &ScalarGrid3D) -> Vec<u8> {
    let mut buf = Vec::with_capacity(16 + 72 + 8 * grid.values.len());
    buf.extend_from_slice(&GRID_MAGIC);
    for d in grid.dims {
        buf.extend_from_slice(&(d as u64).to_le_bytes());
    }
    for x in grid.origin.iter().chain(&grid.spacing).chain(&grid.values) {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    buf
}

/// Writes the binary grid and returns its SHA-256 as lowercase hex.
pub fn write_grid(grid: &ScalarGrid3D, path: &Path) -> Result<String> {
    let bytes = grid_bytes(grid);
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(&bytes)?;
    out.flush()?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

/// Writes the grid plus `<path>.meta`, a `key = value` sidecar holding the
/// layout, the scenario parameters and the checksum. Returns the sidecar
/// path and the grid checksum.
pub fn write_grid_with_sidecar(grid: &ScalarGrid3D, path: &Path) -> Result<(PathBuf, String)> {
    let checksum = write_grid(grid, path)?;
    let meta_path = sidecar_path(path);
    let mut out = BufWriter::new(File::create(&meta_path)?);
    writeln!(out, "format = kerrqc-grid-f64-le")?;
    writeln!(out, "layout = row-major, z fastest")?;
    writeln!(
        out,
        "units = Stokes components in photon-number units; values relative to peak"
    )?;
    writeln!(
        out,
        "dims = {} {} {}",
        grid.dims[0], grid.dims[1], grid.dims[2]
    )?;
    writeln!(
        out,
        "origin = {} {} {}",
        grid.origin[0], grid.origin[1], grid.origin[2]
    )?;
    writeln!(
        out,
        "spacing = {} {} {}",
        grid.spacing[0], grid.spacing[1], grid.spacing[2]
    )?;
    if let Some(m) = &grid.metadata {
        writeln!(out, "i0a = {}", m.i0a)?;
        writeln!(out, "i0b = {}", m.i0b)?;
        writeln!(out, "phi0a = {}", m.phi0a)?;
        writeln!(out, "phi0b = {}", m.phi0b)?;
        writeln!(out, "tau = {}", m.tau)?;
        writeln!(out, "chi = {}", m.chi)?;
        writeln!(out, "gamma_a = {}", m.gamma_a)?;
        writeln!(out, "gamma_b = {}", m.gamma_b)?;
        writeln!(out, "peak = {}", m.peak)?;
    }
    writeln!(out, "sha256 = {checksum}")?;
    out.flush()?;
    Ok((meta_path, checksum))
}

/// Reads a grid written by [`write_grid`]. Metadata is not restored.
pub fn read_grid(path: &Path) -> Result<ScalarGrid3D> {
    let mut bytes = Vec::new();
    BufReader::new(File::open(path)?).read_to_end(&mut bytes)?;
    if bytes.len() < 88 || bytes[..16] != GRID_MAGIC {
        return Err(Error::GridFormat(
            "missing magic or truncated header".into(),
        ));
    }
    let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
    let dims = [0, 1, 2].map(|i| u64_at(16 + 8 * i) as usize);
    let origin = [0, 1, 2].map(|i| f64_at(40 + 8 * i));
    let spacing = [0, 1, 2].map(|i| f64_at(64 + 8 * i));
    let count = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::GridFormat("dimension overflow".into()))?;
    if bytes.len() != 88 + 8 * count {
        return Err(Error::GridFormat(format!(
            "expected {} value bytes, found {}",
            8 * count,
            bytes.len() - 88
        )));
    }
    let values = bytes[88..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(ScalarGrid3D {
        origin,
        spacing,
        dims,
        values,
        metadata: None,
    })
}

/// Writes the mesh as Wavefront OBJ and returns its SHA-256.
pub fn write_obj(mesh: &IsoMesh, path: &Path) -> Result<String> {
    let mut text = String::new();
    use std::fmt::Write as _;
    let _ = writeln!(text, "# kerrqc isosurface, level {}", mesh.iso_level);
    let _ = writeln!(
        text,
        "# {} vertices, {} triangles",
        mesh.vertices.len(),
        mesh.triangles.len()
    );
    for v in &mesh.vertices {
        let _ = writeln!(text, "v {} {} {}", v[0], v[1], v[2]);
    }
    for t in &mesh.triangles {
        let _ = writeln!(text, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
    }
    let mut out = BufWriter::new(File::create(path)?);
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(hex::encode(Sha256::digest(text.as_bytes())))
}

/// Writes the mesh plus a `<path>.meta` sidecar with its level, sizes and
/// checksum. Returns the sidecar path and the mesh checksum.
pub fn write_obj_with_sidecar(mesh: &IsoMesh, path: &Path) -> Result<(PathBuf, String)> {
    let checksum = write_obj(mesh, path)?;
    let meta_path = sidecar_path(path);
    let mut out = BufWriter::new(File::create(&meta_path)?);
    writeln!(out, "format = wavefront-obj")?;
    writeln!(out, "iso_level = {}", mesh.iso_level)?;
    writeln!(out, "vertices = {}", mesh.vertices.len())?;
    writeln!(out, "triangles = {}", mesh.triangles.len())?;
    writeln!(out, "sha256 = {checksum}")?;
    out.flush()?;
    Ok((meta_path, checksum))
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta");
    PathBuf::from(name)
}
