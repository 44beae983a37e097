//! Grid sampling of the immersion and export as a JSON mesh (full C²
//! coordinates) plus a projected OBJ.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algebra::{Complex, SpherePoint};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::surface::SurfaceImmersion;
use crate::weierstrass::WeierstrassData;

pub const MESH_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chart {
    Z,
    W,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Window {
    Rect {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    /// Periodic in the angle.
    Annulus {
        r0: f64,
        r1: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub chart: Chart,
    pub window: Window,
    pub resolution: (usize, usize),
    /// Vertices closer than this (in the chart) to a puncture or a pole of
    /// `G₁`, `G₂` are cut.
    pub margin: f64,
}

impl Default for MeshSpec {
    fn default() -> Self {
        MeshSpec {
            chart: Chart::Z,
            window: Window::Annulus { r0: 0.2, r1: 5.0 },
            resolution: (64, 64),
            margin: 1e-3,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Projection {
    /// Drop coordinate `i ∈ {1, 2, 3, 4}` of `(Re f₁, Im f₁, Re f₂, Im f₂)`.
    DropCoordinate(usize),
    /// Rows must be orthonormal.
    Matrix([[f64; 4]; 3]),
}

impl Projection {
    pub fn validate(&self) -> Result<()> {
        match self {
            Projection::DropCoordinate(i) if (1..=4).contains(i) => Ok(()),
            Projection::DropCoordinate(i) => Err(Error::InvalidParameters(format!(
                "coordinate {i} is not in 1..=4"
            ))),
            Projection::Matrix(m) => {
                for a in 0..3 {
                    for b in 0..3 {
                        let d: f64 = (0..4).map(|k| m[a][k] * m[b][k]).sum();
                        let want = if a == b { 1.0 } else { 0.0 };
                        if (d - want).abs() > 1e-9 {
                            return Err(Error::InvalidParameters(
                                "projection rows are not orthonormal".into(),
                            ));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn apply(&self, f: &[f64; 4]) -> [f64; 3] {
        match self {
            Projection::DropCoordinate(i) => {
                let mut out = [0.0; 3];
                let mut n = 0;
                for (k, v) in f.iter().enumerate() {
                    if k + 1 != *i {
                        out[n] = *v;
                        n += 1;
                    }
                }
                out
            }
            Projection::Matrix(m) => std::array::from_fn(|r| (0..4).map(|k| m[r][k] * f[k]).sum()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vertex {
    /// Parameter in the chart coordinate.
    pub param: [f64; 2],
    pub f: [f64; 4],
    /// Conformal factor in the chart coordinate.
    pub lambda2: f64,
    pub curvature: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Mesh {
    pub schema: u32,
    pub chart: Chart,
    pub window: Window,
    pub resolution: (usize, usize),
    pub grid_vertices: usize,
    pub cut_vertices: usize,
    pub vertices: Vec<Vertex>,
    pub faces: Vec<[usize; 3]>,
}

fn grid_param(spec: &MeshSpec, i: usize, j: usize) -> Complex {
    let (nu, nv) = spec.resolution;
    let t = |k: usize, n: usize| {
        if n > 1 {
            k as f64 / (n - 1) as f64
        } else {
            0.0
        }
    };
    match spec.window {
        Window::Rect { x0, x1, y0, y1 } => {
            Complex::new(x0 + (x1 - x0) * t(i, nu), y0 + (y1 - y0) * t(j, nv))
        }
        Window::Annulus { r0, r1 } => {
            Complex::from_polar(r0 + (r1 - r0) * t(i, nu), TAU * j as f64 / nv as f64)
        }
    }
}

fn sample(
    s: &SurfaceImmersion,
    d: &WeierstrassData,
    spec: &MeshSpec,
    singular: &[SpherePoint],
    p: Complex,
) -> Option<Vertex> {
    let (z, jac) = match spec.chart {
        Chart::Z => (p, 1.0),
        Chart::W => {
            if p.norm() <= spec.margin {
                return None;
            }
            (1.0 / p, 1.0 / p.norm_sqr().powi(2))
        }
    };
    let chart_point = |q: &SpherePoint| match (spec.chart, q) {
        (Chart::Z, SpherePoint::Finite(v)) => Some(*v),
        (Chart::W, SpherePoint::Infinity) => Some(Complex::new(0.0, 0.0)),
        (Chart::W, SpherePoint::Finite(v)) if v.norm() > 0.0 => Some(1.0 / v),
        _ => None,
    };
    if singular
        .iter()
        .filter_map(chart_point)
        .any(|q| (q - p).norm() <= spec.margin)
    {
        return None;
    }
    let f = s.evaluate(z).ok()?;
    let lambda2 = d.metric_factor(z).ok()? * jac;
    let curvature = d.gauss_curvature(z).ok()?;
    (f.iter().all(|v| v.is_finite())
        && lambda2 > 0.0
        && lambda2.is_finite()
        && curvature.is_finite())
    .then_some(Vertex {
        param: [p.re, p.im],
        f,
        lambda2,
        curvature,
    })
}

/// Samples the immersion on the grid in row-major order, cutting vertices
/// near punctures and singularities.
pub fn build_mesh(
    s: &SurfaceImmersion,
    d: &WeierstrassData,
    spec: &MeshSpec,
    exec: Execution,
) -> Result<Mesh> {
    let (nu, nv) = spec.resolution;
    if nu < 2 || nv < 2 {
        return Err(Error::InvalidParameters(
            "resolution must be at least 2x2".into(),
        ));
    }
    if let Window::Annulus { r0, r1 } = spec.window {
        if !(r0 >= 0.0 && r1 > r0) {
            return Err(Error::InvalidParameters(
                "annulus needs 0 <= r0 < r1".into(),
            ));
        }
    }
    let mut singular: Vec<SpherePoint> = d.punctures().to_vec();
    for g in [s.g1(), s.g2()] {
        singular.extend(g.poles()?.into_iter().map(|r| SpherePoint::Finite(r.value)));
    }
    let rows: Vec<usize> = (0..nu).collect();
    let grid: Vec<Vec<Option<Vertex>>> = exec.map(&rows, |&i| {
        (0..nv)
            .map(|j| sample(s, d, spec, &singular, grid_param(spec, i, j)))
            .collect()
    });
    let mut index = vec![usize::MAX; nu * nv];
    let mut vertices = Vec::new();
    for (i, row) in grid.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            if let Some(v) = v {
                index[i * nv + j] = vertices.len();
                vertices.push(v);
            }
        }
    }
    if vertices.is_empty() {
        return Err(Error::EmptyMesh);
    }
    let periodic = matches!(spec.window, Window::Annulus { .. });
    let cols = if periodic { nv } else { nv - 1 };
    let mut faces = Vec::new();
    for i in 0..nu - 1 {
        for j in 0..cols {
            let jn = (j + 1) % nv;
            let q = [
                index[i * nv + j],
                index[(i + 1) * nv + j],
                index[(i + 1) * nv + jn],
                index[i * nv + jn],
            ];
            if q.iter().all(|&k| k != usize::MAX) {
                faces.push([q[0], q[1], q[2]]);
                faces.push([q[0], q[2], q[3]]);
            }
        }
    }
    Ok(Mesh {
        schema: MESH_SCHEMA,
        chart: spec.chart,
        window: spec.window,
        resolution: spec.resolution,
        grid_vertices: nu * nv,
        cut_vertices: nu * nv - vertices.len(),
        vertices,
        faces,
    })
}

impl Mesh {
    pub fn to_obj(&self, projection: &Projection) -> Result<String> {
        projection.validate()?;
        let mut out = String::new();
        for v in &self.vertices {
            let [x, y, z] = projection.apply(&v.f);
            writeln!(out, "v {x:.12e} {y:.12e} {z:.12e}").expect("string write");
        }
        for [a, b, c] in &self.faces {
            writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1).expect("string write");
        }
        Ok(out)
    }

    /// Writes `<stem>.json` and `<stem>.obj` into `dir`.
    pub fn write(
        &self,
        dir: &Path,
        stem: &str,
        projection: &Projection,
    ) -> Result<(PathBuf, PathBuf)> {
        let obj = self.to_obj(projection)?;
        std::fs::create_dir_all(dir)?;
        let json_path = dir.join(format!("{stem}.json"));
        let obj_path = dir.join(format!("{stem}.obj"));
        std::fs::write(&json_path, serde_json::to_string(self)?)?;
        std::fs::write(&obj_path, obj)?;
        Ok((json_path, obj_path))
    }
}
