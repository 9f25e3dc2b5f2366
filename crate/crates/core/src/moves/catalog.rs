//! Spheres available to pinches.

use std::sync::Arc;

use thiserror::Error;

use crate::surface::{Classification, SurfaceEncoding};
use crate::triangulation::Triangulation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("catalog sphere `{0}` is not crudely normal")]
    NotCrudelyNormal(String),
    #[error("catalog sphere `{0}` is not a connected sphere")]
    NotSphere(String),
}

/// A crudely normal sphere together with where its points go when it is added
/// to another surface: the first `tail_count` points of each edge class before
/// the surface's own points, the rest after them.
#[derive(Clone, Debug)]
pub struct CatalogSphere {
    name: String,
    encoding: SurfaceEncoding,
    tail_counts: Vec<usize>,
}

impl CatalogSphere {
    /// The link of vertex class `v`, placed innermost at `v`.
    pub fn vertex_link(tri: Arc<Triangulation>, v: usize) -> Option<Self> {
        let tail_counts = tri
            .edge_classes()
            .iter()
            .map(|e| usize::from(e.tail == v))
            .collect();
        Some(Self {
            name: format!("link(v{v})"),
            encoding: SurfaceEncoding::vertex_link(tri, v)?,
            tail_counts,
        })
    }

    /// A user-supplied sphere, placed with all of its points at the tail end of
    /// each edge class.
    pub fn custom(
        name: impl Into<String>,
        encoding: SurfaceEncoding,
    ) -> Result<Self, CatalogError> {
        let name = name.into();
        if encoding.validate() != Classification::CrudelyNormal {
            return Err(CatalogError::NotCrudelyNormal(name));
        }
        if encoding.components() != 1 || encoding.euler_characteristic() != 2 {
            return Err(CatalogError::NotSphere(name));
        }
        let tail_counts = encoding.counts().to_vec();
        Ok(Self {
            name,
            encoding,
            tail_counts,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn encoding(&self) -> &SurfaceEncoding {
        &self.encoding
    }

    pub fn weight(&self) -> usize {
        self.encoding.weight()
    }

    pub fn tail_count(&self, edge: usize) -> usize {
        self.tail_counts[edge]
    }

    pub fn head_count(&self, edge: usize) -> usize {
        self.encoding.edge_count(edge) - self.tail_counts[edge]
    }
}

/// Catalog spheres, addressed by their index.
#[derive(Clone, Debug, Default)]
pub struct SphereCatalog {
    spheres: Vec<CatalogSphere>,
}

impl SphereCatalog {
    pub fn empty() -> Self {
        Self::default()
    }

    /// One vertex link per vertex class, in vertex order.
    pub fn vertex_links(tri: &Arc<Triangulation>) -> Self {
        let spheres = (0..tri.vertex_count())
            .map(|v| CatalogSphere::vertex_link(tri.clone(), v).expect("vertex exists"))
            .collect();
        Self { spheres }
    }

    pub fn push(&mut self, sphere: CatalogSphere) -> usize {
        self.spheres.push(sphere);
        self.spheres.len() - 1
    }

    pub fn get(&self, id: usize) -> Option<&CatalogSphere> {
        self.spheres.get(id)
    }

    pub fn len(&self) -> usize {
        self.spheres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spheres.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &CatalogSphere)> {
        self.spheres.iter().enumerate()
    }
}
