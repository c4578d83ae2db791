//! Shipped test spaces, embedded from `fixtures/*.json`.

use std::sync::Arc;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::simplicial::{SimplicialComplex, SimplicialMap};

const SOURCES: &[(&str, &str)] = &[
    ("circle", include_str!("../fixtures/circle.json")),
    ("sphere", include_str!("../fixtures/sphere.json")),
    ("rp2", include_str!("../fixtures/rp2.json")),
    ("torus", include_str!("../fixtures/torus.json")),
    ("wedge", include_str!("../fixtures/wedge.json")),
    ("cylinder", include_str!("../fixtures/cylinder.json")),
    ("cone", include_str!("../fixtures/cone.json")),
    ("point", include_str!("../fixtures/point.json")),
];

const MAPS: &[(&str, &str)] = &[
    ("cylinder_to_circle", include_str!("../fixtures/cylinder_to_circle.map.json")),
    ("cone_to_point", include_str!("../fixtures/cone_to_point.map.json")),
];

/// Names accepted by [`by_name`].
pub fn names() -> impl Iterator<Item = &'static str> {
    SOURCES.iter().map(|(n, _)| *n)
}

pub fn by_name(name: &str) -> Result<SimplicialComplex> {
    let (_, text) = SOURCES.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::Parse(format!("no fixture named {name:?}")))?;
    SimplicialComplex::parse_json(text)
}

fn get(name: &str) -> SimplicialComplex {
    by_name(name).expect("embedded fixture is valid")
}

/// Boundary of a triangle: 3 vertices, 3 edges.
pub fn circle() -> SimplicialComplex {
    get("circle")
}

/// Boundary of the tetrahedron.
pub fn sphere() -> SimplicialComplex {
    get("sphere")
}

/// Six-vertex projective plane (10 triangles).
pub fn rp2() -> SimplicialComplex {
    get("rp2")
}

/// Seven-vertex Császár torus (14 triangles).
pub fn torus() -> SimplicialComplex {
    get("torus")
}

/// Two triangle circles glued at vertex 0.
pub fn wedge() -> SimplicialComplex {
    get("wedge")
}

/// Triangle circle times an interval, 6 triangles.
pub fn cylinder() -> SimplicialComplex {
    get("cylinder")
}

/// Cone over the triangle circle with apex 3.
pub fn cone() -> SimplicialComplex {
    get("cone")
}

pub fn point() -> SimplicialComplex {
    get("point")
}

#[derive(Deserialize)]
struct MapJson {
    source: String,
    target: String,
    vertex_images: Vec<usize>,
}

/// Shipped homotopy equivalences: `cylinder_to_circle` and `cone_to_point`.
pub fn map_by_name(name: &str) -> Result<SimplicialMap> {
    let (_, text) = MAPS.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::Parse(format!("no fixture map named {name:?}")))?;
    let json: MapJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    SimplicialMap::new(Arc::new(by_name(&json.source)?), Arc::new(by_name(&json.target)?), json.vertex_images)
}

pub fn map_names() -> impl Iterator<Item = &'static str> {
    MAPS.iter().map(|(n, _)| *n)
}
