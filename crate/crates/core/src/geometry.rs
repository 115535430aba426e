//! Measurement schemes built from figures whose vertices come in antipodal
//! pairs: the square and the four centrally symmetric Platonic solids.
//!
//! Each antipodal vertex pair gives one measurement axis. Coordinates are
//! fixed (no random orientation) so every downstream value is bit-stable:
//!
//! | n  | figure       | vertices                                            |
//! |----|--------------|-----------------------------------------------------|
//! | 2  | square       | ±x, ±y                                              |
//! | 3  | octahedron   | ±x, ±y, ±z                                          |
//! | 4  | cube         | (±1, ±1, ±1)/√3                                     |
//! | 6  | icosahedron  | (0, ±1, ±φ) and cyclic permutations, normalized     |
//! | 10 | dodecahedron | (±1, ±1, ±1), (0, ±1/φ, ±φ) and cyclic, normalized  |
//!
//! The representative of each pair is the lexicographically larger vertex,
//! and axes are listed in descending lexicographic order.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::BlochVector;
use crate::scalar::{lit, tol, Real};

/// Setting counts with a built-in scheme.
pub const SUPPORTED_SETTINGS: [usize; 5] = [2, 3, 4, 6, 10];

const DEDUP_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    Square,
    Octahedron,
    Cube,
    Icosahedron,
    Dodecahedron,
}

impl Figure {
    pub fn from_settings(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Figure::Square),
            3 => Ok(Figure::Octahedron),
            4 => Ok(Figure::Cube),
            6 => Ok(Figure::Icosahedron),
            10 => Ok(Figure::Dodecahedron),
            _ => Err(unsupported(n)),
        }
    }

    pub fn settings(self) -> usize {
        match self {
            Figure::Square => 2,
            Figure::Octahedron => 3,
            Figure::Cube => 4,
            Figure::Icosahedron => 6,
            Figure::Dodecahedron => 10,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Figure::Square => "square",
            Figure::Octahedron => "octahedron",
            Figure::Cube => "cube",
            Figure::Icosahedron => "icosahedron",
            Figure::Dodecahedron => "dodecahedron",
        }
    }

    /// All vertices, unit-normalized, antipodal-closed.
    pub fn vertices<T: Real>(self) -> Vec<BlochVector<T>> {
        let one = T::one();
        let zero = T::zero();
        let phi = (one + lit::<T>(5.0).sqrt()) * lit(0.5);
        let raw: Vec<BlochVector<T>> = match self {
            Figure::Square => signed_cyclic(&[one, zero, zero], true)
                .into_iter()
                .filter(|v| v.z == zero)
                .collect(),
            Figure::Octahedron => signed_cyclic(&[one, zero, zero], true),
            Figure::Cube => signed_cyclic(&[one, one, one], false),
            Figure::Icosahedron => signed_cyclic(&[zero, one, phi], true),
            Figure::Dodecahedron => {
                let mut v = signed_cyclic(&[one, one, one], false);
                v.extend(signed_cyclic(&[zero, phi.recip(), phi], true));
                v
            }
        };
        raw.iter().map(BlochVector::normalized).collect()
    }
}

impl std::fmt::Display for Figure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn unsupported(n: usize) -> Error {
    Error::domain(format!(
        "unsupported number of settings {n}; supported values are {SUPPORTED_SETTINGS:?}"
    ))
}

/// Every sign assignment of `base`, optionally with its cyclic permutations,
/// deduplicated.
fn signed_cyclic<T: Real>(base: &[T; 3], cyclic: bool) -> Vec<BlochVector<T>> {
    let shifts = if cyclic { 3 } else { 1 };
    let mut out: Vec<BlochVector<T>> = Vec::new();
    for shift in 0..shifts {
        for mask in 0..8u8 {
            let mut c = [T::zero(); 3];
            for (i, slot) in c.iter_mut().enumerate() {
                let v = base[(i + 3 - shift) % 3];
                *slot = if mask & (1 << i) != 0 { -v } else { v };
            }
            let v = BlochVector::from_array(c);
            if !out.iter().any(|w| w.max_abs_diff(&v) <= tol(DEDUP_TOL)) {
                out.push(v);
            }
        }
    }
    out
}

/// Whether a direction set holds a figure's vertices or its face centres.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionKind {
    Vertex,
    Dual,
}

impl std::str::FromStr for DirectionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vertex" => Ok(DirectionKind::Vertex),
            "dual" => Ok(DirectionKind::Dual),
            other => Err(Error::domain(format!(
                "unknown ensemble kind '{other}'; use vertex or dual"
            ))),
        }
    }
}

/// Antipodal-closed set of unit directions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectionSet<T> {
    pub directions: Vec<BlochVector<T>>,
    pub label: DirectionKind,
}

impl<T: Real> DirectionSet<T> {
    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn is_antipodal_closed(&self) -> bool {
        self.directions.iter().all(|v| {
            self.directions
                .iter()
                .any(|w| w.max_abs_diff(&-*v) <= tol(1e-12))
        })
    }
}

/// `n` measurement axes, one per setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementScheme<T> {
    pub n: usize,
    pub axes: Vec<BlochVector<T>>,
    /// `None` for user-supplied axis sets.
    pub figure: Option<Figure>,
}

impl<T: Real> MeasurementScheme<T> {
    /// Wraps an arbitrary set of unit axes.
    pub fn custom(axes: Vec<BlochVector<T>>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::domain(
                "a measurement scheme needs at least one axis",
            ));
        }
        if let Some(bad) = axes.iter().find(|u| !u.is_unit(tol(1e-12))) {
            return Err(Error::domain(format!(
                "measurement axis ({}, {}, {}) is not a unit vector",
                bad.x, bad.y, bad.z
            )));
        }
        Ok(Self {
            n: axes.len(),
            axes,
            figure: None,
        })
    }

    /// Checks the type invariants, e.g. after deserialization.
    pub fn validate(&self) -> Result<()> {
        if self.n != self.axes.len() {
            return Err(Error::domain("scheme n does not match the number of axes"));
        }
        Self::custom(self.axes.clone())?;
        if let Some(fig) = self.figure {
            if fig.settings() != self.n {
                return Err(Error::domain(format!(
                    "{fig} has {} settings, not {}",
                    fig.settings(),
                    self.n
                )));
            }
        }
        if let Some((j, k)) = self.parallel_pair() {
            return Err(Error::domain(format!(
                "axes {j} and {k} are parallel or antiparallel"
            )));
        }
        Ok(())
    }

    /// First pair of axes that are parallel or antiparallel, if any.
    pub fn parallel_pair(&self) -> Option<(usize, usize)> {
        let limit = T::one() - tol::<T>(1e-12);
        for j in 0..self.n {
            for k in j + 1..self.n {
                if self.axes[j].dot(&self.axes[k]).abs() >= limit {
                    return Some((j, k));
                }
            }
        }
        None
    }

    /// `|u_j · u_k|` for every unordered pair.
    pub fn pairwise_abs_dots(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.n * (self.n - 1) / 2);
        for j in 0..self.n {
            for k in j + 1..self.n {
                out.push(self.axes[j].dot(&self.axes[k]).abs());
            }
        }
        out
    }

    /// Applies one rotation to every axis; the figure label is kept.
    pub fn rotated(&self, r: &[[T; 3]; 3]) -> Self {
        Self {
            n: self.n,
            axes: self.axes.iter().map(|u| u.rotated(r)).collect(),
            figure: self.figure,
        }
    }
}

/// The built-in scheme with `n` settings.
pub fn scheme_axes<T: Real>(n: usize) -> Result<MeasurementScheme<T>> {
    let figure = Figure::from_settings(n)?;
    let eps = tol::<T>(DEDUP_TOL);
    let mut axes: Vec<BlochVector<T>> = figure
        .vertices()
        .into_iter()
        .filter(|v| v.lex_cmp(&-*v, eps) == std::cmp::Ordering::Greater)
        .collect();
    axes.sort_by(|a, b| b.lex_cmp(a, eps));
    debug_assert_eq!(axes.len(), n);
    Ok(MeasurementScheme {
        n,
        axes,
        figure: Some(figure),
    })
}

/// Vertex directions of the figure with `n` settings.
pub fn vertex_directions<T: Real>(n: usize) -> Result<DirectionSet<T>> {
    let figure = Figure::from_settings(n)?;
    Ok(DirectionSet {
        directions: figure.vertices(),
        label: DirectionKind::Vertex,
    })
}

/// Face-centre directions of the figure with `n` settings. For the square
/// these are the in-plane diagonals, i.e. the edge midpoints.
pub fn dual_directions<T: Real>(n: usize) -> Result<DirectionSet<T>> {
    let figure = Figure::from_settings(n)?;
    let directions = match figure {
        Figure::Square => {
            let h = T::FRAC_1_SQRT_2();
            let z = T::zero();
            vec![
                BlochVector::new(h, h, z),
                BlochVector::new(h, -h, z),
                BlochVector::new(-h, h, z),
                BlochVector::new(-h, -h, z),
            ]
        }
        _ => face_normals(&figure.vertices()),
    };
    Ok(DirectionSet {
        directions,
        label: DirectionKind::Dual,
    })
}

pub fn directions<T: Real>(n: usize, kind: DirectionKind) -> Result<DirectionSet<T>> {
    match kind {
        DirectionKind::Vertex => vertex_directions(n),
        DirectionKind::Dual => dual_directions(n),
    }
}

/// Outward unit normals of the convex hull of `points`, one per face.
fn face_normals<T: Real>(points: &[BlochVector<T>]) -> Vec<BlochVector<T>> {
    let eps = tol::<T>(DEDUP_TOL);
    let mut normals: Vec<BlochVector<T>> = Vec::new();
    let m = points.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let (a, b, c) = (points[i], points[j], points[k]);
                let mut normal = (b - a).cross(&(c - a));
                if normal.norm() <= eps {
                    continue;
                }
                if normal.dot(&a) < T::zero() {
                    normal = -normal;
                }
                let supporting = points.iter().all(|p| normal.dot(&(*p - a)) <= eps);
                if !supporting {
                    continue;
                }
                let unit = normal.normalized();
                if !normals.iter().any(|w| w.max_abs_diff(&unit) <= eps) {
                    normals.push(unit);
                }
            }
        }
    }
    normals
}
