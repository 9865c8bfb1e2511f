//! The five batch products.

use std::path::Path;
use std::time::Instant;

use kerrqc::correlations::{
    covariance_matrix, entanglement_witness, purity_asymptotic, purity_exact, purity_qc_integral,
    symplectic_spectrum, ExactPurity, QcPuritySeries, QuadratureSpec,
};
use kerrqc::fockoracle::{coherent_fock, minimal_cutoff, Mode};
use kerrqc::phasespace::{KerrConfig, Tau};
use kerrqc::poincare::{
    dephasing_shrink_metric, extract_isosurface, sample_grid, write_grid_with_sidecar,
    write_obj_with_sidecar, Box3,
};
use kerrqc::polarization::squeezing_report_with;
use rayon::prelude::*;

use crate::config::{Config, Product, PurityColumn, StateKind};
use crate::error::CliError;
use crate::output::{fmt_num, write_text, CsvTable, OutputFile, Stage};

/// Records the wall time of `f` as a stage.
fn timed<T>(stages: &mut Vec<Stage>, name: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let value = f();
    stages.push(Stage {
        name: name.to_owned(),
        wall_seconds: start.elapsed().as_secs_f64(),
    });
    value
}

fn tau_of(product: Product, t: f64) -> Result<Tau, CliError> {
    Tau::new(t).map_err(CliError::at(product.name(), t))
}

fn flag(b: bool) -> String {
    u8::from(b).to_string()
}

pub fn run(
    product: Product,
    cfg: &Config,
    out: &Path,
    stages: &mut Vec<Stage>,
) -> Result<Vec<OutputFile>, CliError> {
    match product {
        Product::Purity => purity(cfg, out, stages),
        Product::Entangle => entangle(cfg, out, stages),
        Product::Squeeze => squeeze(cfg, out, stages),
        Product::Poincare => poincare(cfg, out, stages),
        Product::Oracle => oracle(cfg, out, stages),
    }
}

fn state_comment(table: &mut CsvTable, cfg: &Config) {
    let s = &cfg.state;
    match s.kind {
        StateKind::Product => table.comment(format!(
            "state: product coherent, i0a = {}, i0b = {}, phi0a = {}, phi0b = {}",
            fmt_num(s.i0a),
            fmt_num(s.i0b),
            fmt_num(s.phi0a),
            fmt_num(s.phi0b)
        )),
        StateKind::Circular => table.comment(format!(
            "state: circular, total intensity = {}",
            fmt_num(s.intensity)
        )),
    };
    table.comment("tau = chi t / 2 (dimensionless)");
}

fn purity(cfg: &Config, out: &Path, stages: &mut Vec<Stage>) -> Result<Vec<OutputFile>, CliError> {
    const NAME: &str = "purity";
    let init = cfg.state.init()?;
    let grid = cfg.tau.grid()?;
    let methods = &cfg.purity.methods;
    if methods.is_empty() {
        return Err(CliError::Config("purity.methods is empty".into()));
    }
    let series = QcPuritySeries::new(&init)?;
    let exact = if methods.contains(&PurityColumn::Exact) {
        Some(ExactPurity::new(&init)?)
    } else {
        None
    };
    let rows: Vec<Vec<String>> = timed(stages, "compute", || {
        grid.par_iter()
            .map(|&t| {
                let tau = tau_of(Product::Purity, t)?;
                let mut row = vec![fmt_num(t)];
                for m in methods {
                    let value = match m {
                        PurityColumn::QcSeries => series.eval(tau).value,
                        PurityColumn::QcIntegral => {
                            purity_qc_integral(&init, tau)
                                .map_err(CliError::at(NAME, t))?
                                .value
                        }
                        PurityColumn::Asymptotic => purity_asymptotic(&init, tau).value,
                        PurityColumn::Exact => match &exact {
                            Some(e) => e.eval(tau).value,
                            None => {
                                purity_exact(&init, tau)
                                    .map_err(CliError::at(NAME, t))?
                                    .value
                            }
                        },
                    };
                    row.push(fmt_num(value));
                }
                Ok(row)
            })
            .collect::<Result<_, CliError>>()
    })?;
    let mut table = CsvTable::new("reduced single-mode purity");
    state_comment(&mut table, cfg);
    table.column("tau", "1", "scaled time");
    for m in methods {
        let meaning = match m {
            PurityColumn::QcSeries => "quasiclassical purity, Bessel-product series",
            PurityColumn::QcIntegral => "quasiclassical purity, one-dimensional integral",
            PurityColumn::Asymptotic => "large-intensity short-time closed form",
            PurityColumn::Exact => "exact quantum purity",
        };
        table.column(m.name(), "1", meaning);
    }
    for r in rows {
        table.row(r);
    }
    let file = timed(stages, "write", || {
        write_text(out, "purity.csv", &table.render())
    })?;
    Ok(vec![file])
}

fn entangle(
    cfg: &Config,
    out: &Path,
    stages: &mut Vec<Stage>,
) -> Result<Vec<OutputFile>, CliError> {
    const NAME: &str = "entangle";
    let init = cfg.state.init()?;
    let grid = cfg.tau.grid()?;
    let quad = QuadratureSpec {
        order: cfg.entangle.order,
    };
    let rows: Vec<Vec<String>> = timed(stages, "compute", || {
        grid.par_iter()
            .map(|&t| {
                let tau = tau_of(Product::Entangle, t)?;
                let gamma = covariance_matrix(&init, tau, quad).map_err(CliError::at(NAME, t))?;
                let s = symplectic_spectrum(&gamma).map_err(CliError::at(NAME, t))?;
                Ok(vec![
                    fmt_num(t),
                    fmt_num(s.nu_tilde_minus),
                    fmt_num(s.nu_minus),
                    fmt_num(s.nu_plus),
                    flag(entanglement_witness(&s)),
                ])
            })
            .collect::<Result<_, CliError>>()
    })?;
    let mut table = CsvTable::new("Gaussian entanglement witness");
    state_comment(&mut table, cfg);
    table.comment(format!(
        "Gauss-Hermite order per coordinate = {}",
        quad.order
    ));
    table
        .column("tau", "1", "scaled time")
        .column(
            "nu_tilde_minus",
            "1",
            "smaller symplectic eigenvalue after partial transpose",
        )
        .column("nu_minus", "1", "smaller symplectic eigenvalue")
        .column("nu_plus", "1", "larger symplectic eigenvalue")
        .column("entangled", "bool", "nu_tilde_minus < 1/2");
    for r in rows {
        table.row(r);
    }
    let file = timed(stages, "write", || {
        write_text(out, "entangle.csv", &table.render())
    })?;
    Ok(vec![file])
}

fn squeeze(cfg: &Config, out: &Path, stages: &mut Vec<Stage>) -> Result<Vec<OutputFile>, CliError> {
    const NAME: &str = "squeeze";
    if cfg.state.kind != StateKind::Circular {
        return Err(CliError::Config(
            "squeeze requires state.kind = \"circular\"".into(),
        ));
    }
    let i0 = cfg.state.intensity;
    let chi = cfg.kerr.chi;
    let grid = cfg.tau.grid()?;
    let form = cfg.squeeze.form.into();
    let rates = &cfg.squeeze.gamma_over_chi;
    if rates.is_empty() {
        return Err(CliError::Config("squeeze.gamma_over_chi is empty".into()));
    }
    let points: Vec<(f64, f64)> = rates
        .iter()
        .flat_map(|&g| grid.iter().map(move |&t| (g, t)))
        .collect();
    let rows: Vec<Vec<String>> = timed(stages, "compute", || {
        points
            .par_iter()
            .map(|&(g, t)| {
                let kerr = KerrConfig::dephased(chi, g * chi).map_err(CliError::at(NAME, t))?;
                let time = tau_of(Product::Squeeze, t)?.time(chi);
                let r =
                    squeezing_report_with(i0, &kerr, time, form).map_err(CliError::at(NAME, t))?;
                Ok(vec![
                    fmt_num(g),
                    fmt_num(t),
                    fmt_num(r.mean_sy),
                    fmt_num(r.theta_sq),
                    fmt_num(r.var_sq),
                    fmt_num(r.var_antisq),
                    fmt_num(r.optimal_amount),
                    fmt_num(r.optimal_amount_closed_form),
                    flag(r.squeezing_certified),
                ])
            })
            .collect::<Result<_, CliError>>()
    })?;
    let mut table = CsvTable::new("polarization squeezing in the dark plane");
    state_comment(&mut table, cfg);
    table.comment(format!(
        "chi = {}, variance form = {}; one block of rows per gamma/chi",
        fmt_num(chi),
        form.label()
    ));
    table
        .column("gamma_over_chi", "1", "dephasing rate over Kerr coupling")
        .column("tau", "1", "scaled time")
        .column(
            "mean_sy",
            "photons",
            "mean Stokes component along the initial polarization",
        )
        .column("theta_sq", "rad", "squeezing angle in the dark plane")
        .column("var_sq", "photons", "dark-plane variance at theta_sq")
        .column(
            "var_antisq",
            "photons",
            "dark-plane variance at theta_sq + pi/2",
        )
        .column("optimal_amount", "photons", "var_sq - |mean_sy|")
        .column(
            "optimal_amount_closed_form",
            "photons",
            "short-time closed form of the same",
        )
        .column("certified", "bool", "var_sq < N < var_antisq");
    for r in rows {
        table.row(r);
    }
    let file = timed(stages, "write", || {
        write_text(out, "squeeze.csv", &table.render())
    })?;
    Ok(vec![file])
}

fn poincare(
    cfg: &Config,
    out: &Path,
    stages: &mut Vec<Stage>,
) -> Result<Vec<OutputFile>, CliError> {
    const NAME: &str = "poincare";
    let init = cfg.state.init()?;
    let kerr = cfg.kerr.config()?;
    let unitary = KerrConfig::unitary(kerr.chi())?;
    let dephased = kerr.gamma() > 0.0;
    let grid_taus = cfg.tau.grid()?;
    let p = &cfg.poincare;
    if p.half_width_units.is_nan() || p.half_width_units <= 0.0 || p.nodes < 2 {
        return Err(CliError::Config(
            "poincare needs half_width_units > 0 and nodes >= 2".into(),
        ));
    }
    let bbox = Box3::around_initial(&init, p.half_width_units);
    let dims = [p.nodes; 3];
    let frames = out.join("frames");
    std::fs::create_dir_all(&frames).map_err(CliError::io(&frames))?;

    let mut files = Vec::new();
    let mut table = CsvTable::new("Poincare-space isosurfaces");
    state_comment(&mut table, cfg);
    table.comment(format!(
        "chi = {}, gamma_a = {}, gamma_b = {}, box half-width = {} shot-noise units, {}^3 nodes, level = {} of the initial peak",
        fmt_num(kerr.chi()),
        fmt_num(kerr.gamma_a()),
        fmt_num(kerr.gamma_b()),
        fmt_num(p.half_width_units),
        p.nodes,
        fmt_num(p.level)
    ));
    table
        .column(
            "frame",
            "index",
            "grid frames/frame_NNN.grid and mesh frames/frame_NNN.obj",
        )
        .column("tau", "1", "scaled time")
        .column(
            "grid_max",
            "1",
            "largest node value relative to the initial peak",
        )
        .column("volume", "photons^3", "volume enclosed by the isosurface")
        .column("axis_ratio", "1", "longest over shortest principal axis")
        .column(
            "radius_ratio",
            "1",
            "largest over smallest vertex radius from the centroid",
        )
        .column("triangles", "count", "mesh size");
    if dephased {
        table
            .column("volume_ratio", "1", "enclosed volume over the lossless one")
            .column(
                "axis_angle_deg",
                "deg",
                "angle between the lossless and dephased long axes",
            );
    }
    for (k, &t) in grid_taus.iter().enumerate() {
        let tau = tau_of(Product::Poincare, t)?;
        let grid = timed(stages, &format!("sample frame {k}"), || {
            sample_grid(&init, tau, &kerr, &bbox, dims)
        })
        .map_err(CliError::at(NAME, t))?;
        let mesh = timed(stages, &format!("mesh frame {k}"), || {
            extract_isosurface(&grid, p.level)
        })
        .map_err(CliError::at(NAME, t))?;
        let stem = frames.join(format!("frame_{k:03}"));
        let grid_path = stem.with_extension("grid");
        let obj_path = stem.with_extension("obj");
        let (grid_meta, _) =
            write_grid_with_sidecar(&grid, &grid_path).map_err(CliError::at(NAME, t))?;
        let (obj_meta, _) =
            write_obj_with_sidecar(&mesh, &obj_path).map_err(CliError::at(NAME, t))?;
        for path in [&grid_path, &grid_meta, &obj_path, &obj_meta] {
            files.push(OutputFile::from_disk(out, path)?);
        }
        let grid_max = grid.max_value();
        let mut row = vec![
            k.to_string(),
            fmt_num(t),
            fmt_num(grid_max),
            fmt_num(mesh.volume()),
            fmt_num(mesh.principal_axes().ratio()),
            fmt_num(mesh.radius_ratio()),
            mesh.triangles.len().to_string(),
        ];
        if dephased {
            let reference = timed(stages, &format!("sample lossless frame {k}"), || {
                sample_grid(&init, tau, &unitary, &bbox, dims)
            })
            .map_err(CliError::at(NAME, t))?;
            let m = dephasing_shrink_metric(&reference, &grid, p.level)
                .map_err(CliError::at(NAME, t))?;
            row.push(fmt_num(m.volume_ratio));
            row.push(fmt_num(m.axis_angle_deg));
        }
        table.row(row);
    }
    files.insert(0, write_text(out, "poincare.csv", &table.render())?);
    Ok(files)
}

fn oracle(cfg: &Config, out: &Path, stages: &mut Vec<Stage>) -> Result<Vec<OutputFile>, CliError> {
    const NAME: &str = "oracle";
    let init = cfg.state.init()?;
    let grid = cfg.tau.grid()?;
    let cutoff = match cfg.oracle.cutoff {
        0 => minimal_cutoff(init.i0a().max(init.i0b())),
        c => c,
    };
    let state = coherent_fock(&init, cutoff)?;
    let rows: Vec<(f64, Vec<String>)> = timed(stages, "compute", || {
        grid.par_iter()
            .map(|&t| {
                let tau = tau_of(Product::Oracle, t)?;
                let evolved = state.evolve(tau);
                let pa = evolved.reduced_purity(Mode::A).value;
                let pb = evolved.reduced_purity(Mode::B).value;
                let exact = purity_exact(&init, tau)
                    .map_err(CliError::at(NAME, t))?
                    .value;
                let diff = (exact - pa).abs();
                let row = vec![
                    fmt_num(t),
                    fmt_num(exact),
                    fmt_num(pa),
                    fmt_num(pb),
                    fmt_num(diff),
                    fmt_num(evolved.boundary_occupancy()),
                ];
                Ok((diff, row))
            })
            .collect::<Result<_, CliError>>()
    })?;
    let worst = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let mut table = CsvTable::new("Fock-space cross-check of the exact purity");
    state_comment(&mut table, cfg);
    table.comment(format!(
        "cutoff = {cutoff} photons per mode, truncated probability = {}",
        fmt_num(state.norm_leak())
    ));
    table.comment(format!("max abs_diff = {}", fmt_num(worst)));
    table
        .column("tau", "1", "scaled time")
        .column("p_exact", "1", "exact purity, closed-form series")
        .column(
            "p_fock_a",
            "1",
            "purity of mode a from the truncated state vector",
        )
        .column(
            "p_fock_b",
            "1",
            "purity of mode b from the truncated state vector",
        )
        .column("abs_diff", "1", "|p_exact - p_fock_a|")
        .column(
            "boundary_occupancy",
            "1",
            "probability on the outermost number states",
        );
    for (_, r) in rows {
        table.row(r);
    }
    let file = timed(stages, "write", || {
        write_text(out, "oracle.csv", &table.render())
    })?;
    Ok(vec![file])
}
