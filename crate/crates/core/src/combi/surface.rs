use serde::{Deserialize, Serialize};

use super::CombiError;

/// How a boundary cycle of a 2-dimensional nice manifold with corners looks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    /// No corners: a smooth boundary circle.
    Circle,
    /// A single corner where the one edge meets itself.
    CornerCycle,
    /// Two corners.
    Eye,
    /// Three or more corners: the boundary of a polygon.
    Polygon,
}

impl ComponentKind {
    pub fn classify(corners: usize) -> Self {
        match corners {
            0 => ComponentKind::Circle,
            1 => ComponentKind::CornerCycle,
            2 => ComponentKind::Eye,
            _ => ComponentKind::Polygon,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub corners: usize,
}

impl BoundaryComponent {
    pub fn kind(&self) -> ComponentKind {
        ComponentKind::classify(self.corners)
    }

    /// Edges in this component: one per corner, or one closed edge for a
    /// circle.
    pub fn edge_count(&self) -> usize {
        self.corners.max(1)
    }
}

/// Input data for [`OrbitSurface::build`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDescriptor {
    pub genus: u32,
    pub orientable: bool,
    pub boundary: Vec<BoundaryComponent>,
}

/// A corner of the surface. Corner `i` of a component is the initial point of
/// the component's local edge `i` and the terminal point of edge `i - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Corner {
    pub component: usize,
    pub index: usize,
}

/// Compact connected 2-dimensional nice manifold with corners, up to the
/// data the category theorems look at.
///
/// Boundary edges are numbered globally, component by component, so they can
/// carry characteristic vectors like facets of a polytope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SurfaceDescriptor", into = "SurfaceDescriptor")]
pub struct OrbitSurface {
    genus: u32,
    orientable: bool,
    components: Vec<BoundaryComponent>,
}

impl TryFrom<SurfaceDescriptor> for OrbitSurface {
    type Error = CombiError;

    fn try_from(d: SurfaceDescriptor) -> Result<Self, CombiError> {
        OrbitSurface::build(&d)
    }
}

impl From<OrbitSurface> for SurfaceDescriptor {
    fn from(s: OrbitSurface) -> Self {
        s.descriptor()
    }
}

impl OrbitSurface {
    pub fn build(d: &SurfaceDescriptor) -> Result<Self, CombiError> {
        if d.boundary.is_empty() {
            return Err(CombiError::NoBoundary);
        }
        if !d.orientable && d.genus == 0 {
            return Err(CombiError::NonOrientableGenusZero);
        }
        Ok(OrbitSurface { genus: d.genus, orientable: d.orientable, components: d.boundary.clone() })
    }

    pub fn disk(corners: usize) -> Self {
        Self::build(&SurfaceDescriptor {
            genus: 0,
            orientable: true,
            boundary: vec![BoundaryComponent { corners }],
        })
        .expect("disk")
    }

    pub fn descriptor(&self) -> SurfaceDescriptor {
        SurfaceDescriptor { genus: self.genus, orientable: self.orientable, boundary: self.components.clone() }
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn orientable(&self) -> bool {
        self.orientable
    }

    pub fn components(&self) -> &[BoundaryComponent] {
        &self.components
    }

    pub fn edge_count(&self) -> usize {
        self.components.iter().map(BoundaryComponent::edge_count).sum()
    }

    /// Global index of the first edge of `component`.
    pub fn edge_offset(&self, component: usize) -> usize {
        self.components[..component].iter().map(BoundaryComponent::edge_count).sum()
    }

    /// `(component, local index)` of a global edge.
    pub fn edge_location(&self, edge: usize) -> Option<(usize, usize)> {
        let mut offset = 0;
        for (c, comp) in self.components.iter().enumerate() {
            if edge < offset + comp.edge_count() {
                return Some((c, edge - offset));
            }
            offset += comp.edge_count();
        }
        None
    }

    pub fn corners(&self) -> Vec<Corner> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(component, c)| (0..c.corners).map(move |index| Corner { component, index }))
            .collect()
    }

    pub fn corner_count(&self) -> usize {
        self.components.iter().map(|c| c.corners).sum()
    }

    pub fn circle_count(&self) -> usize {
        self.components.iter().filter(|c| c.kind() == ComponentKind::Circle).count()
    }

    pub fn has_polygon_component(&self) -> bool {
        self.components.iter().any(|c| c.kind() == ComponentKind::Polygon)
    }

    /// Global edges `(incoming, outgoing)` at a corner. For a one-corner
    /// component both are the same edge.
    pub fn corner_edges(&self, corner: Corner) -> (usize, usize) {
        let comp = self.components[corner.component];
        let base = self.edge_offset(corner.component);
        let c = comp.corners;
        (base + (corner.index + c - 1) % c, base + corner.index)
    }

    /// Corners `(initial, terminal)` of a global edge; `None` for circles.
    pub fn edge_corners(&self, edge: usize) -> Option<(Corner, Corner)> {
        let (component, local) = self.edge_location(edge)?;
        let c = self.components[component].corners;
        if c == 0 {
            return None;
        }
        Some((Corner { component, index: local }, Corner { component, index: (local + 1) % c }))
    }

    /// `2 - 2g - b` when orientable, `2 - g - b` otherwise (`g` counts
    /// crosscaps).
    pub fn euler_characteristic(&self) -> i64 {
        let b = self.components.len() as i64;
        let g = i64::from(self.genus);
        if self.orientable { 2 - 2 * g - b } else { 2 - g - b }
    }

    /// Genus 0, orientable, one boundary component.
    pub fn is_disk(&self) -> bool {
        self.genus == 0 && self.orientable && self.components.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(genus: u32, orientable: bool, corners: &[usize]) -> Result<OrbitSurface, CombiError> {
        OrbitSurface::build(&SurfaceDescriptor {
            genus,
            orientable,
            boundary: corners.iter().map(|&c| BoundaryComponent { corners: c }).collect(),
        })
    }

    #[test]
    fn triangle_disk() {
        let s = surface(0, true, &[3]).unwrap();
        assert!(s.is_disk());
        assert_eq!(s.components()[0].kind(), ComponentKind::Polygon);
        assert_eq!(s.corner_count(), 3);
        assert_eq!(s.euler_characteristic(), 1);
    }

    #[test]
    fn eye_shape() {
        let s = surface(0, true, &[2]).unwrap();
        assert_eq!(s.components()[0].kind(), ComponentKind::Eye);
        assert_eq!(s.corner_count(), 2);
        assert_eq!(s.edge_count(), 2);
        assert_eq!(s.corner_edges(Corner { component: 0, index: 0 }), (1, 0));
        assert_eq!(s.edge_corners(0), Some((Corner { component: 0, index: 0 }, Corner { component: 0, index: 1 })));
    }

    #[test]
    fn annulus() {
        let s = surface(0, true, &[0, 0]).unwrap();
        assert_eq!(s.circle_count(), 2);
        assert_eq!(s.corner_count(), 0);
        assert_eq!(s.edge_count(), 2);
        assert_eq!(s.euler_characteristic(), 0);
        assert!(!s.is_disk());
        assert_eq!(s.edge_corners(1), None);
    }

    #[test]
    fn boundary_required() {
        assert_eq!(surface(1, true, &[]), Err(CombiError::NoBoundary));
        assert_eq!(surface(0, false, &[3]), Err(CombiError::NonOrientableGenusZero));
    }

    #[test]
    fn classification_total() {
        let kinds: Vec<ComponentKind> = (0..6).map(ComponentKind::classify).collect();
        assert_eq!(
            kinds,
            [
                ComponentKind::Circle,
                ComponentKind::CornerCycle,
                ComponentKind::Eye,
                ComponentKind::Polygon,
                ComponentKind::Polygon,
                ComponentKind::Polygon
            ]
        );
    }

    #[test]
    fn edge_numbering() {
        let s = surface(1, false, &[3, 0, 2]).unwrap();
        assert_eq!(s.edge_count(), 6);
        assert_eq!(s.edge_location(3), Some((1, 0)));
        assert_eq!(s.edge_location(5), Some((2, 1)));
        assert_eq!(s.edge_location(6), None);
        assert_eq!(s.corner_edges(Corner { component: 2, index: 0 }), (5, 4));
        assert_eq!(s.euler_characteristic(), 2 - 1 - 3);
    }
}
