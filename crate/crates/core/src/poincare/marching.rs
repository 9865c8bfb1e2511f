//! Marching cubes over a [`ScalarGrid3D`].

use std::collections::HashMap;

use rayon::prelude::*;

use super::tables::{EDGE_TABLE, TRI_TABLE};
use super::{IsoMesh, ScalarGrid3D};
use crate::error::{domain, Error, Result};

/// Cube corners as offsets from the lower node.
const CORNERS: [[usize; 3]; 8] = [
    [0, 0, 0],
    [1, 0, 0],
    [1, 1, 0],
    [0, 1, 0],
    [0, 0, 1],
    [1, 0, 1],
    [1, 1, 1],
    [0, 1, 1],
];

/// Each cube edge as (lower node offset, axis).
const EDGES: [([usize; 3], usize); 12] = [
    ([0, 0, 0], 0),
    ([1, 0, 0], 1),
    ([0, 1, 0], 0),
    ([0, 0, 0], 1),
    ([0, 0, 1], 0),
    ([1, 0, 1], 1),
    ([0, 1, 1], 0),
    ([0, 0, 1], 1),
    ([0, 0, 0], 2),
    ([1, 0, 0], 2),
    ([1, 1, 0], 2),
    ([0, 1, 0], 2),
];

fn edge_key(grid: &ScalarGrid3D, node: [usize; 3], axis: usize) -> u64 {
    grid.index(node[0], node[1], node[2]) as u64 * 3 + axis as u64
}

fn edge_vertex(grid: &ScalarGrid3D, key: u64, level: f64) -> [f64; 3] {
    let axis = (key % 3) as usize;
    let idx = (key / 3) as usize;
    let [_, ny, nz] = grid.dims;
    let (i, j, k) = (idx / (ny * nz), (idx / nz) % ny, idx % nz);
    let mut far = [i, j, k];
    far[axis] += 1;
    let v0 = grid.value(i, j, k);
    let v1 = grid.value(far[0], far[1], far[2]);
    let t = if v1 != v0 {
        ((level - v0) / (v1 - v0)).clamp(0.0, 1.0)
    } else {
        0.5
    };
    let mut p = grid.position(i, j, k);
    p[axis] += t * grid.spacing[axis];
    p
}

/// Triangulates the `level` isosurface with the 256-case cube table and
/// linear interpolation along cube edges. Vertices are shared between
/// neighbouring cubes, so closed surfaces come out watertight. Triangles
/// with area below `1e-12` of a grid face are dropped.
pub fn extract_isosurface(grid: &ScalarGrid3D, level: f64) -> Result<IsoMesh> {
    if !level.is_finite() {
        return Err(domain("iso level", format!("non-finite level {level}")));
    }
    let [nx, ny, nz] = grid.dims;
    if grid.values.len() != nx * ny * nz {
        return Err(domain(
            "grid",
            format!(
                "{} values for dimensions {:?}",
                grid.values.len(),
                grid.dims
            ),
        ));
    }
    let (min, max) = grid
        .values
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !(level > min && level < max) {
        return Err(Error::LevelOutOfRange { level, min, max });
    }
    let slabs: Vec<Vec<[u64; 3]>> = (0..nx.saturating_sub(1))
        .into_par_iter()
        .map(|i| {
            let mut tris = Vec::new();
            for j in 0..ny - 1 {
                for k in 0..nz - 1 {
                    let mut case = 0usize;
                    for (c, off) in CORNERS.iter().enumerate() {
                        if grid.value(i + off[0], j + off[1], k + off[2]) < level {
                            case |= 1 << c;
                        }
                    }
                    if EDGE_TABLE[case] == 0 {
                        continue;
                    }
                    let keys = EDGES.map(|(off, axis)| {
                        edge_key(grid, [i + off[0], j + off[1], k + off[2]], axis)
                    });
                    for tri in TRI_TABLE[case].chunks_exact(3) {
                        if tri[0] < 0 {
                            break;
                        }
                        tris.push([
                            keys[tri[0] as usize],
                            keys[tri[1] as usize],
                            keys[tri[2] as usize],
                        ]);
                    }
                }
            }
            tris
        })
        .collect();

    let face_area = grid.spacing[0] * grid.spacing[1];
    let min_area2 = (1e-12 * face_area).powi(2);
    let mut index_of: HashMap<u64, u32> = HashMap::new();
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for tri_keys in slabs.into_iter().flatten() {
        let pos = tri_keys.map(|key| edge_vertex(grid, key, level));
        let e1 = sub(pos[1], pos[0]);
        let e2 = sub(pos[2], pos[0]);
        let n = cross(e1, e2);
        if n[0] * n[0] + n[1] * n[1] + n[2] * n[2] <= 4.0 * min_area2 {
            continue;
        }
        let tri = std::array::from_fn(|c| {
            *index_of.entry(tri_keys[c]).or_insert_with(|| {
                vertices.push(pos[c]);
                (vertices.len() - 1) as u32
            })
        });
        triangles.push(tri);
    }
    Ok(IsoMesh {
        vertices,
        triangles,
        iso_level: level,
    })
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
