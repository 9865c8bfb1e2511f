//! Wigner function sampled on a Cartesian grid of Stokes space, its
//! isosurfaces and their shape metrics.

mod export;
mod marching;
mod tables;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::phasespace::{
    poincare_density, wigner_dephased, KerrConfig, PhasePoint, Tau, TwoModeCoherentInit,
};

pub use export::{
    read_grid, write_grid, write_grid_with_sidecar, write_obj, write_obj_with_sidecar, GRID_MAGIC,
};
pub use marching::extract_isosurface;

/// Axis-aligned box in Stokes space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3 {
    pub center: [f64; 3],
    pub half_width: [f64; 3],
}

impl Box3 {
    /// Cube centred on the initial Stokes vector with half-width `units`
    /// times the shot-noise scale `sqrt(2 I_0)`.
    pub fn around_initial(init: &TwoModeCoherentInit, units: f64) -> Self {
        let h = units * (2.0 * init.total_intensity()).sqrt();
        Self {
            center: init.stokes0(),
            half_width: [h; 3],
        }
    }

    pub fn lower(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.center[i] - self.half_width[i])
    }

    pub fn upper(&self) -> [f64; 3] {
        std::array::from_fn(|i| self.center[i] + self.half_width[i])
    }

    /// Whether the box meets the `S_z` axis, which contains both poles and
    /// the origin.
    pub fn touches_polar_axis(&self) -> bool {
        let (lo, hi) = (self.lower(), self.upper());
        lo[0] <= 0.0 && hi[0] >= 0.0 && lo[1] <= 0.0 && hi[1] >= 0.0
    }
}

/// Scenario and evaluation parameters recorded alongside a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMetadata {
    pub i0a: f64,
    pub i0b: f64,
    pub phi0a: f64,
    pub phi0b: f64,
    pub tau: f64,
    pub chi: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    /// Peak of the initial Wigner function, the unit of the stored values.
    pub peak: f64,
}

/// Scalar samples on a regular grid, `values[(i * ny + j) * nz + k]` at
/// `origin + (i, j, k) * spacing`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarGrid3D {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
    pub values: Vec<f64>,
    pub metadata: Option<GridMetadata>,
}

impl ScalarGrid3D {
    /// Samples `f` at every node.
    pub fn from_fn(
        origin: [f64; 3],
        spacing: [f64; 3],
        dims: [usize; 3],
        f: impl Fn([f64; 3]) -> f64 + Sync,
    ) -> Result<Self> {
        validate_dims(dims)?;
        let [_, ny, nz] = dims;
        let values = (0..dims[0])
            .into_par_iter()
            .flat_map_iter(|i| {
                let f = &f;
                (0..ny).flat_map(move |j| {
                    (0..nz).map(move |k| {
                        f([
                            origin[0] + i as f64 * spacing[0],
                            origin[1] + j as f64 * spacing[1],
                            origin[2] + k as f64 * spacing[2],
                        ])
                    })
                })
            })
            .collect();
        Ok(Self {
            origin,
            spacing,
            dims,
            values,
            metadata: None,
        })
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[self.index(i, j, k)]
    }

    pub fn position(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [
            self.origin[0] + i as f64 * self.spacing[0],
            self.origin[1] + j as f64 * self.spacing[1],
            self.origin[2] + k as f64 * self.spacing[2],
        ]
    }

    pub fn max_value(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

fn validate_dims(dims: [usize; 3]) -> Result<()> {
    if dims.iter().any(|&d| d < 2) {
        return Err(domain(
            "grid dimensions",
            format!("need at least 2 nodes per axis, got {dims:?}"),
        ));
    }
    Ok(())
}

/// Samples the Wigner function on the Poincaré space at `tau` over `bbox`.
/// Lossless evolution uses the exact Bessel form; with dephasing the
/// large-intensity closed form is used at time `t = 2 tau / chi`. Values are
/// divided by the peak of the initial Wigner function.
pub fn sample_grid(
    init: &TwoModeCoherentInit,
    tau: Tau,
    cfg: &KerrConfig,
    bbox: &Box3,
    dims: [usize; 3],
) -> Result<ScalarGrid3D> {
    validate_dims(dims)?;
    let gamma = cfg.gamma();
    if gamma > 0.0 && bbox.touches_polar_axis() {
        return Err(domain(
            "dephased grid box",
            "the box meets the S_z axis, where the dephased form is singular",
        ));
    }
    let i0 = init.total_intensity();
    let s0 = init.stokes0();
    let peak = poincare_density(i0, s0, s0, 0.0);
    let lower = bbox.lower();
    let spacing: [f64; 3] =
        std::array::from_fn(|i| 2.0 * bbox.half_width[i] / (dims[i] - 1) as f64);
    let t = tau.time(cfg.chi());
    let [_, ny, nz] = dims;

    let slabs: Vec<Result<Vec<f64>>> = (0..dims[0])
        .into_par_iter()
        .map(|i| {
            let mut slab = Vec::with_capacity(ny * nz);
            for j in 0..ny {
                for k in 0..nz {
                    let s = [
                        lower[0] + i as f64 * spacing[0],
                        lower[1] + j as f64 * spacing[1],
                        lower[2] + k as f64 * spacing[2],
                    ];
                    let w = if gamma > 0.0 {
                        let point = PhasePoint::PoincareCartesian {
                            stokes: s,
                            global_phase: 0.0,
                        };
                        wigner_dephased(init, &point, t, cfg).map_err(|e| Error::GridSample {
                            i,
                            j,
                            k,
                            reason: e.to_string(),
                        })?
                    } else {
                        poincare_density(i0, s0, s, tau.value())
                    };
                    let v = w / peak;
                    if !v.is_finite() {
                        return Err(Error::GridSample {
                            i,
                            j,
                            k,
                            reason: format!("non-finite value {v}"),
                        });
                    }
                    slab.push(v);
                }
            }
            Ok(slab)
        })
        .collect();
    let mut values = Vec::with_capacity(dims.iter().product());
    for slab in slabs {
        values.extend(slab?);
    }
    Ok(ScalarGrid3D {
        origin: lower,
        spacing,
        dims,
        values,
        metadata: Some(GridMetadata {
            i0a: init.i0a(),
            i0b: init.i0b(),
            phi0a: init.phi0a(),
            phi0b: init.phi0b(),
            tau: tau.value(),
            chi: cfg.chi(),
            gamma_a: cfg.gamma_a(),
            gamma_b: cfg.gamma_b(),
            peak,
        }),
    })
}

/// Closed triangle mesh of an isosurface; triangles wind so that normals
/// point away from the region where the field exceeds the level.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[u32; 3]>,
    pub iso_level: f64,
}

/// Volume, centroid and second central moments of the enclosed solid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolidMoments {
    pub volume: f64,
    pub centroid: [f64; 3],
    pub covariance: Matrix3<f64>,
}

/// Principal axes of a solid, longest first.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalAxes {
    /// Square roots of the covariance eigenvalues.
    pub lengths: [f64; 3],
    pub directions: [[f64; 3]; 3],
}

impl PrincipalAxes {
    /// Longest over shortest axis.
    pub fn ratio(&self) -> f64 {
        self.lengths[0] / self.lengths[2]
    }
}

impl IsoMesh {
    /// Mean of the vertex positions.
    pub fn vertex_centroid(&self) -> [f64; 3] {
        let n = self.vertices.len().max(1) as f64;
        let mut c = [0.0; 3];
        for v in &self.vertices {
            for a in 0..3 {
                c[a] += v[a] / n;
            }
        }
        c
    }

    /// Moments of the enclosed solid from signed tetrahedra against the
    /// vertex centroid (divergence theorem).
    pub fn solid_moments(&self) -> SolidMoments {
        let origin = Vector3::from(self.vertex_centroid());
        let mut volume = 0.0;
        let mut first = Vector3::zeros();
        let mut second = Matrix3::zeros();
        for tri in &self.triangles {
            let [a, b, c] = tri.map(|i| Vector3::from(self.vertices[i as usize]) - origin);
            let v = a.dot(&b.cross(&c)) / 6.0;
            let s = a + b + c;
            volume += v;
            first += v * s / 4.0;
            second += v / 20.0
                * (a * a.transpose() + b * b.transpose() + c * c.transpose() + s * s.transpose());
        }
        let mean = if volume != 0.0 {
            first / volume
        } else {
            Vector3::zeros()
        };
        let covariance = if volume != 0.0 {
            second / volume - mean * mean.transpose()
        } else {
            Matrix3::zeros()
        };
        SolidMoments {
            volume,
            centroid: (mean + origin).into(),
            covariance,
        }
    }

    pub fn volume(&self) -> f64 {
        self.solid_moments().volume
    }

    pub fn principal_axes(&self) -> PrincipalAxes {
        let cov = self.solid_moments().covariance;
        let eig = SymmetricEigen::new(cov);
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
        PrincipalAxes {
            lengths: order.map(|i| eig.eigenvalues[i].max(0.0).sqrt()),
            directions: order.map(|i| eig.eigenvectors.column(i).into_owned().into()),
        }
    }

    /// Largest over smallest vertex distance from the vertex centroid.
    pub fn radius_ratio(&self) -> f64 {
        let c = self.vertex_centroid();
        let (lo, hi) = self
            .vertices
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), v| {
                let r =
                    ((v[0] - c[0]).powi(2) + (v[1] - c[1]).powi(2) + (v[2] - c[2]).powi(2)).sqrt();
                (lo.min(r), hi.max(r))
            });
        hi / lo
    }
}

/// How dephasing changes an isosurface relative to the lossless one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkMetric {
    /// Enclosed volume with dephasing over the lossless one.
    pub volume_ratio: f64,
    /// Angle between the longest principal axes, in degrees.
    pub axis_angle_deg: f64,
    pub unitary_axes: PrincipalAxes,
    pub dephased_axes: PrincipalAxes,
}

/// Compares the isosurfaces of two grids at the same level.
pub fn dephasing_shrink_metric(
    unitary: &ScalarGrid3D,
    dephased: &ScalarGrid3D,
    level: f64,
) -> Result<ShrinkMetric> {
    if unitary.dims != dephased.dims
        || unitary.origin != dephased.origin
        || unitary.spacing != dephased.spacing
    {
        return Err(Error::GridMismatch(format!(
            "dims {:?} vs {:?}, origin {:?} vs {:?}, spacing {:?} vs {:?}",
            unitary.dims,
            dephased.dims,
            unitary.origin,
            dephased.origin,
            unitary.spacing,
            dephased.spacing
        )));
    }
    let mu = extract_isosurface(unitary, level)?;
    let md = extract_isosurface(dephased, level)?;
    let vu = mu.volume();
    if vu <= 0.0 {
        return Err(domain(
            "shrink metric",
            "the lossless isosurface encloses no volume",
        ));
    }
    let unitary_axes = mu.principal_axes();
    let dephased_axes = md.principal_axes();
    let (du, dd) = (unitary_axes.directions[0], dephased_axes.directions[0]);
    let cos = (du[0] * dd[0] + du[1] * dd[1] + du[2] * dd[2])
        .abs()
        .min(1.0);
    Ok(ShrinkMetric {
        volume_ratio: md.volume() / vu,
        axis_angle_deg: cos.acos().to_degrees(),
        unitary_axes,
        dephased_axes,
    })
}
