//! Ising instances, spin configurations and the energy quantities derived from them.
//!
//! The Hamiltonian is
//!
//! ```text
//! H(σ) = -Σ_{x<y} J_xy σ_x σ_y - Σ_x h_x σ_x
//! ```
//!
//! and the cavity field felt by spin `x` is `h̃_x(σ) = Σ_y J_xy σ_y + h_x`.
//! Flipping spin `x` changes the energy by `2 h̃_x(σ) σ_x`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default vertex cap for anything that enumerates all `2^|V|` configurations.
pub const DEFAULT_ENUMERATION_CAP: usize = 20;

/// A finite Ising instance: symmetric pair couplings and local fields.
///
/// Couplings are stored once per unordered pair and mirrored into per-vertex
/// adjacency lists so cavity fields cost `O(deg)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    n_vertices: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
    fields: Vec<f64>,
}

impl IsingModel {
    /// A model with the given local fields and no couplings.
    pub fn with_fields(fields: Vec<f64>) -> Result<Self> {
        if fields.is_empty() {
            return Err(Error::InvalidModel("a model needs at least one vertex".into()));
        }
        if let Some(x) = fields.iter().position(|h| !h.is_finite()) {
            return Err(Error::InvalidModel(format!("field h_{x} is not finite")));
        }
        let n = fields.len();
        Ok(Self {
            n_vertices: n,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); n],
            fields,
        })
    }

    /// A model with `n_vertices` spins, all fields zero and no couplings.
    pub fn empty(n_vertices: usize) -> Result<Self> {
        Self::with_fields(vec![0.0; n_vertices])
    }

    /// Builds a model from an edge list `(x, y, J_xy)` and a field vector.
    pub fn new(n_vertices: usize, edges: &[(usize, usize, f64)], fields: Vec<f64>) -> Result<Self> {
        if fields.len() != n_vertices {
            return Err(Error::InvalidModel(format!(
                "fields has {} entries but n_vertices is {n_vertices}",
                fields.len()
            )));
        }
        let mut model = Self::with_fields(fields)?;
        for &(x, y, j) in edges {
            model.add_coupling(x, y, j)?;
        }
        Ok(model)
    }

    /// Adds the coupling `J_xy = J_yx = strength`.
    ///
    /// Self-loops and a second coupling on an existing pair are rejected.
    pub fn add_coupling(&mut self, x: usize, y: usize, strength: f64) -> Result<()> {
        let n = self.n_vertices;
        for v in [x, y] {
            if v >= n {
                return Err(Error::InvalidModel(format!(
                    "edge ({x}, {y}) references vertex {v}, but n_vertices is {n}"
                )));
            }
        }
        if x == y {
            return Err(Error::InvalidModel(format!("self-loop ({x}, {y}) is not allowed")));
        }
        if !strength.is_finite() {
            return Err(Error::InvalidModel(format!("coupling ({x}, {y}) is not finite")));
        }
        if self.adjacency[x].iter().any(|&(nb, _)| nb == y) {
            return Err(Error::InvalidModel(format!("duplicate coupling for pair ({x}, {y})")));
        }
        let (a, b) = if x < y { (x, y) } else { (y, x) };
        self.edges.push((a, b, strength));
        self.adjacency[x].push((y, strength));
        self.adjacency[y].push((x, strength));
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Couplings as `(x, y, J)` with `x < y`, in insertion order.
    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    /// Neighbours of `x` together with the coupling strength.
    pub fn neighbors(&self, x: usize) -> &[(usize, f64)] {
        &self.adjacency[x]
    }

    /// `J_xy`, zero when the pair is not coupled.
    pub fn coupling(&self, x: usize, y: usize) -> f64 {
        self.adjacency
            .get(x)
            .and_then(|adj| adj.iter().find(|&&(nb, _)| nb == y))
            .map_or(0.0, |&(_, j)| j)
    }

    /// Loads a model from the JSON file format.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json_str(&text).map_err(|e| match e {
            Error::Json { source, .. } => Error::Json {
                path: path.display().to_string(),
                source,
            },
            other => other,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: ModelFile = serde_json::from_str(text).map_err(|source| Error::Json {
            path: "<input>".into(),
            source,
        })?;
        file.into_model()
    }

    pub fn to_file(&self) -> ModelFile {
        ModelFile {
            n_vertices: self.n_vertices,
            edges: self.edges.clone(),
            fields: Some(self.fields.clone()),
        }
    }

    pub(crate) fn check_len(&self, sigma: &SpinConfiguration) -> Result<()> {
        if sigma.len() != self.n_vertices {
            return Err(Error::DimensionMismatch {
                expected: self.n_vertices,
                actual: sigma.len(),
            });
        }
        Ok(())
    }

    /// `H(σ)`, each unordered pair counted once.
    pub fn hamiltonian(&self, sigma: &SpinConfiguration) -> Result<f64> {
        self.check_len(sigma)?;
        Ok(self.energy_unchecked(sigma.spins()))
    }

    pub(crate) fn energy_unchecked(&self, s: &[i8]) -> f64 {
        let pair: f64 = self.edges.iter().map(|&(x, y, j)| j * f64::from(s[x] * s[y])).sum();
        let field: f64 = self.fields.iter().zip(s).map(|(h, &sx)| h * f64::from(sx)).sum();
        -pair - field
    }

    pub(crate) fn cavity_field_unchecked(&self, s: &[i8], x: usize) -> f64 {
        self.adjacency[x].iter().map(|&(y, j)| j * f64::from(s[y])).sum::<f64>() + self.fields[x]
    }

    /// All cavity fields `h̃_x(σ)`.
    pub fn cavity_fields(&self, sigma: &SpinConfiguration) -> Result<Vec<f64>> {
        self.check_len(sigma)?;
        let s = sigma.spins();
        Ok((0..self.n_vertices)
            .map(|x| self.cavity_field_unchecked(s, x))
            .collect())
    }

    /// `H(σ^x) - H(σ) = 2 h̃_x(σ) σ_x`, in `O(deg x)`.
    pub fn energy_delta_single_flip(&self, sigma: &SpinConfiguration, x: usize) -> Result<f64> {
        self.check_len(sigma)?;
        if x >= self.n_vertices {
            return Err(Error::VertexOutOfRange {
                index: x,
                n_vertices: self.n_vertices,
            });
        }
        let s = sigma.spins();
        Ok(2.0 * self.cavity_field_unchecked(s, x) * f64::from(s[x]))
    }

    /// Energies of all `2^|V|` configurations, indexed by the binary encoding.
    pub fn all_energies(&self, cap: usize) -> Result<Vec<f64>> {
        if self.n_vertices > cap {
            return Err(Error::Capacity {
                what: "enumerating all configurations",
                n_vertices: self.n_vertices,
                cap,
            });
        }
        let n = self.n_vertices;
        let mut spins = vec![0i8; n];
        Ok((0..1u64 << n)
            .map(|index| {
                decode_into(index, &mut spins);
                self.energy_unchecked(&spins)
            })
            .collect())
    }
}

/// On-disk model description.
///
/// `{"n_vertices": n, "edges": [[x, y, J], ...], "fields": [h_0, ..]}`,
/// with `fields` optional (all zero when absent).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub n_vertices: usize,
    #[serde(default)]
    pub edges: Vec<(usize, usize, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<Vec<f64>>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<IsingModel> {
        let fields = self.fields.unwrap_or_else(|| vec![0.0; self.n_vertices]);
        IsingModel::new(self.n_vertices, &self.edges, fields)
    }
}

/// A `±1` assignment to every vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinConfiguration(Vec<i8>);

impl SpinConfiguration {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if let Some(position) = spins.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidSpin {
                position,
                value: i64::from(spins[position]),
            });
        }
        Ok(Self(spins))
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn all_down(n: usize) -> Self {
        Self(vec![-1; n])
    }

    /// Decodes the canonical index: bit `x` set iff `σ_x = +1`.
    pub fn from_index(n: usize, index: u64) -> Self {
        let mut spins = vec![0; n];
        decode_into(index, &mut spins);
        Self(spins)
    }

    /// Canonical index; only meaningful for `len() <= 64`.
    pub fn index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == 1)
            .fold(0u64, |acc, (x, _)| acc | (1u64 << x))
    }

    pub fn spins(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spin(&self, x: usize) -> i8 {
        self.0[x]
    }

    pub fn flip(&mut self, x: usize) {
        self.0[x] = -self.0[x];
    }

    /// `σ^x`: a copy with spin `x` reversed.
    pub fn flipped(&self, x: usize) -> Self {
        let mut out = self.clone();
        out.flip(x);
        out
    }

    /// Number of sites where the two configurations differ.
    pub fn hamming(&self, other: &Self) -> usize {
        self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count()
    }

    pub(crate) fn spins_mut(&mut self) -> &mut [i8] {
        &mut self.0
    }
}

impl std::fmt::Display for SpinConfiguration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.0 {
            f.write_str(if s == 1 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

pub(crate) fn decode_into(index: u64, spins: &mut [i8]) {
    for (x, s) in spins.iter_mut().enumerate() {
        *s = if (index >> x) & 1 == 1 { 1 } else { -1 };
    }
}

/// Scalars derived from a model that every parameter formula consumes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConstants {
    /// `max_x (Σ_y |J_xy| + |h_x|)`, the largest attainable `|h̃_x(σ)|`.
    pub k_bar: f64,
    /// `Σ_{x<y} J_xy² + Σ_x h_x²`.
    pub v: f64,
    /// `max H - min H`, present only when enumerated.
    pub r_h_exact: Option<f64>,
    /// `2 (Σ_{x<y} |J_xy| + Σ_x |h_x|)`.
    pub r_h_upper: f64,
    /// `√v`.
    pub r_h_lower: f64,
}

impl ModelConstants {
    /// The range to use in closeness checks: exact when known, else `√v`.
    pub fn range_for_closeness(&self) -> f64 {
        self.r_h_exact.unwrap_or(self.r_h_lower)
    }
}

/// Computes [`ModelConstants`] with the default enumeration cap.
pub fn compute_constants(model: &IsingModel, exact_range: bool) -> Result<ModelConstants> {
    compute_constants_with_cap(model, exact_range, DEFAULT_ENUMERATION_CAP)
}

pub fn compute_constants_with_cap(model: &IsingModel, exact_range: bool, cap: usize) -> Result<ModelConstants> {
    let k_bar = (0..model.n_vertices())
        .map(|x| model.neighbors(x).iter().map(|&(_, j)| j.abs()).sum::<f64>() + model.fields()[x].abs())
        .fold(0.0, f64::max);
    let v =
        model.edges().iter().map(|&(_, _, j)| j * j).sum::<f64>() + model.fields().iter().map(|h| h * h).sum::<f64>();
    let r_h_upper = 2.0
        * (model.edges().iter().map(|&(_, _, j)| j.abs()).sum::<f64>()
            + model.fields().iter().map(|h| h.abs()).sum::<f64>());
    let r_h_exact = if exact_range {
        let energies = model.all_energies(cap)?;
        let (lo, hi) = energies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
                (lo.min(e), hi.max(e))
            });
        Some(hi - lo)
    } else {
        None
    };
    Ok(ModelConstants {
        k_bar,
        v,
        r_h_exact,
        r_h_upper,
        r_h_lower: v.sqrt(),
    })
}
