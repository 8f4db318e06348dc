//! Triangulated surface combinatorics.
//!
//! A complex is an oriented face list plus derived incidence tables. Three
//! surface kinds are supported: disks (Euler characteristic 1, nonempty
//! boundary), spheres (characteristic 2), and flat tori given as quotient
//! complexes. Torus face lists may repeat vertices: edges can be loops or
//! parallel copies, and their identity is the vertex pair together with an
//! integer lift class, the deck translation picked up when the directed edge
//! is traversed in the universal cover.
//!
//! All faces end up with one consistent orientation; `build_complex` flips
//! faces as needed and rejects non-orientable input. Edge indices are stable:
//! edges are sorted by (low vertex, high vertex, lift class).

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurfaceKind {
    Disk,
    Sphere,
    Torus,
}

/// Deck translation in lattice coordinates. Always `[0, 0]` off the torus.
pub type Lift = [i64; 2];

/// A corner is (face, slot in 0..3); slot s of face (a, b, c) sits at its
/// s-th vertex. Corner angles are stored at linear index 3*face + slot.
pub type CornerIndex = (usize, usize);

pub fn corner_linear(c: CornerIndex) -> usize {
    3 * c.0 + c.1
}

/// One edge of the quotient complex.
///
/// `ends` is the canonical vertex pair (lo <= hi) and `lift` the lift class
/// of the directed edge ends.0 -> ends.1. The canonical representative of a
/// directed edge (u, w, m) is the lexicographic min of itself and its
/// reversal (w, u, -m), so loops are canonicalized by lift sign.
///
/// `sides` holds the traversals (face, slot), meaning face's directed side
/// slot -> slot+1 runs along this edge. Interior edges have two sides, the
/// one matching the canonical direction first; boundary edges have one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeRec {
    pub ends: (usize, usize),
    pub lift: Lift,
    pub sides: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TriComplex {
    vertex_count: usize,
    faces: Vec<[usize; 3]>,
    face_lifts: Option<Vec<[Lift; 3]>>,
    surface: SurfaceKind,
    edges: Vec<EdgeRec>,
    side_edge: Vec<[usize; 3]>,
    side_partner: Vec<[Option<(usize, usize)>; 3]>,
    boundary_flags: Vec<bool>,
    boundary_vertices: Vec<usize>,
    vertex_corners: Vec<Vec<CornerIndex>>,
}

fn neg(m: Lift) -> Lift {
    [-m[0], -m[1]]
}

type EdgeKey = (usize, usize, i64, i64);

/// Canonical key of the directed side (u -> w, lift m) plus whether the side
/// runs against the canonical direction.
fn side_key(u: usize, w: usize, m: Lift) -> (EdgeKey, bool) {
    let fwd = (u, w, m[0], m[1]);
    let rev = (w, u, -m[0], -m[1]);
    if fwd <= rev {
        (fwd, false)
    } else {
        (rev, true)
    }
}

pub fn build_complex(faces: Vec<[usize; 3]>) -> Result<TriComplex> {
    for f in &faces {
        if f[0] == f[1] || f[1] == f[2] || f[2] == f[0] {
            return Err(Error::LiftsRequired);
        }
    }
    build(faces, None)
}

/// Builds a torus quotient complex. `lifts[f][s]` is the deck translation of
/// face f's directed side s -> s+1, in coordinates of the realization's
/// lattice basis. The face list may contain loops and parallel edges.
pub fn build_torus_complex(faces: Vec<[usize; 3]>, lifts: Vec<[Lift; 3]>) -> Result<TriComplex> {
    if lifts.len() != faces.len() {
        return Err(Error::InvalidInput(format!(
            "{} faces but {} lift triples",
            faces.len(),
            lifts.len()
        )));
    }
    let t = build(faces, Some(lifts))?;
    if t.surface != SurfaceKind::Torus {
        return Err(Error::WrongSurfaceKind {
            expected: "torus",
            found: t.surface,
        });
    }
    Ok(t)
}

fn build(mut faces: Vec<[usize; 3]>, lifts: Option<Vec<[Lift; 3]>>) -> Result<TriComplex> {
    if faces.is_empty() {
        return Err(Error::NonManifold("empty face list".into()));
    }
    let vertex_count = 1 + faces
        .iter()
        .flatten()
        .copied()
        .max()
        .expect("nonempty face list");
    let mut seen = vec![false; vertex_count];
    for f in &faces {
        for &v in f {
            seen[v] = true;
        }
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return Err(Error::NonManifold(format!("vertex {v} appears in no face")));
    }

    let mut face_lifts = lifts.unwrap_or_else(|| vec![[[0, 0]; 3]; faces.len()]);
    let lift_of = |fl: &Vec<[Lift; 3]>, f: usize, s: usize| fl[f][s];

    // Group sides by canonical edge key. Keys are invariant under face flips,
    // so the grouping can be built once, before orientations are repaired.
    let mut groups: std::collections::BTreeMap<EdgeKey, Vec<(usize, usize)>> = Default::default();
    for (f, face) in faces.iter().enumerate() {
        for s in 0..3 {
            let (u, w) = (face[s], face[(s + 1) % 3]);
            let m = lift_of(&face_lifts, f, s);
            if u == w && m == [0, 0] {
                return Err(Error::NonManifold(format!(
                    "face {f} has a zero-lift loop edge at vertex {u}"
                )));
            }
            let (key, _) = side_key(u, w, m);
            groups.entry(key).or_default().push((f, s));
        }
    }
    for (key, sides) in &groups {
        if sides.len() > 2 {
            return Err(Error::NonManifold(format!(
                "edge ({}, {}) is shared by {} face sides",
                key.0,
                key.1,
                sides.len()
            )));
        }
    }

    // Orientation repair: BFS over face adjacency, flipping unvisited faces
    // whose shared side runs in the same direction as the side already fixed.
    // A conflict between two visited faces means the surface is one-sided.
    let nf = faces.len();
    let mut visited = vec![false; nf];
    let mut queue = std::collections::VecDeque::new();
    visited[0] = true;
    queue.push_back(0usize);
    let mut reached = 1usize;
    while let Some(f) = queue.pop_front() {
        for s in 0..3 {
            let (u, w) = (faces[f][s], faces[f][(s + 1) % 3]);
            let m = lift_of(&face_lifts, f, s);
            let (key, rev_f) = side_key(u, w, m);
            let group = groups[&key].clone();
            for (g, t) in group {
                if (g, t) == (f, s) {
                    continue;
                }
                let (gu, gw) = (faces[g][t], faces[g][(t + 1) % 3]);
                let gm = lift_of(&face_lifts, g, t);
                let (_, rev_g) = side_key(gu, gw, gm);
                if rev_f == rev_g {
                    // Same traversal direction on a shared edge: flip g, or
                    // give up if its orientation is already pinned.
                    if visited[g] {
                        return Err(Error::NonOrientable);
                    }
                    // Flipping swaps slots 0 and 2; keep the group entries
                    // current. Marked in one pass and unmarked in a second
                    // so two slots sharing an edge key cannot collide.
                    let keys: Vec<EdgeKey> = (0..3)
                        .map(|s2| {
                            side_key(
                                faces[g][s2],
                                faces[g][(s2 + 1) % 3],
                                lift_of(&face_lifts, g, s2),
                            )
                            .0
                        })
                        .collect();
                    for (s2, k2) in keys.iter().enumerate() {
                        if s2 == 1 {
                            continue;
                        }
                        let v = groups.get_mut(k2).expect("side key present");
                        if let Some(entry) = v.iter_mut().find(|e| **e == (g, s2)) {
                            entry.1 = 100 + (2 - s2);
                        }
                    }
                    for k2 in &keys {
                        for entry in groups.get_mut(k2).into_iter().flatten() {
                            if entry.0 == g && entry.1 >= 100 {
                                entry.1 -= 100;
                            }
                        }
                    }
                    faces[g] = [faces[g][0], faces[g][2], faces[g][1]];
                    let [m0, m1, m2] = face_lifts[g];
                    face_lifts[g] = [neg(m2), neg(m1), neg(m0)];
                }
                if !visited[g] {
                    visited[g] = true;
                    reached += 1;
                    queue.push_back(g);
                }
            }
        }
    }
    if reached != nf {
        return Err(Error::NonManifold("face graph is disconnected".into()));
    }

    // Edge table in canonical key order; within an edge, the side traversing
    // the canonical direction comes first.
    let mut edges = Vec::with_capacity(groups.len());
    let mut side_edge = vec![[usize::MAX; 3]; nf];
    for (key, group) in &groups {
        let mut fwd = Vec::new();
        let mut bwd = Vec::new();
        for &(f, s) in group {
            let (u, w) = (faces[f][s], faces[f][(s + 1) % 3]);
            let (_, rev) = side_key(u, w, lift_of(&face_lifts, f, s));
            if rev {
                bwd.push((f, s));
            } else {
                fwd.push((f, s));
            }
        }
        if fwd.len() > 1 || bwd.len() > 1 {
            return Err(Error::NonOrientable);
        }
        let e = edges.len();
        let mut sides: Vec<(usize, usize)> = fwd;
        sides.extend(bwd);
        for &(f, s) in &sides {
            side_edge[f][s] = e;
        }
        edges.push(EdgeRec {
            ends: (key.0, key.1),
            lift: [key.2, key.3],
            sides,
        });
    }

    let mut side_partner = vec![[None; 3]; nf];
    for rec in &edges {
        if let [a, b] = rec.sides[..] {
            side_partner[a.0][a.1] = Some(b);
            side_partner[b.0][b.1] = Some(a);
        }
    }

    let boundary_edge_count = edges.iter().filter(|e| e.sides.len() == 1).count();
    let chi = vertex_count as i64 - edges.len() as i64 + nf as i64;
    let surface = match (boundary_edge_count > 0, chi) {
        (true, 1) => SurfaceKind::Disk,
        (false, 2) => SurfaceKind::Sphere,
        (false, 0) => SurfaceKind::Torus,
        (b, c) => {
            return Err(Error::InvalidInput(format!(
                "unsupported surface: Euler characteristic {c}, boundary: {b}"
            )))
        }
    };

    // Vertex links. Walking counterclockwise from corner (f, s): the next
    // corner is across side (s+2)%3, the side entering the vertex; the
    // partner side starts at the vertex, so its slot is the new corner.
    // A corner whose own side s has no partner starts a boundary walk.
    let mut at_vertex: Vec<Vec<CornerIndex>> = vec![Vec::new(); vertex_count];
    for (f, face) in faces.iter().enumerate() {
        for s in 0..3 {
            at_vertex[face[s]].push((f, s));
        }
    }
    let ccw_next = |c: CornerIndex| -> Option<CornerIndex> { side_partner[c.0][(c.1 + 2) % 3] };
    let mut vertex_corners: Vec<Vec<CornerIndex>> = vec![Vec::new(); vertex_count];
    let mut boundary_flags = vec![false; vertex_count];
    for v in 0..vertex_count {
        let mut all = at_vertex[v].clone();
        all.sort_unstable();
        let starts: Vec<CornerIndex> = all
            .iter()
            .copied()
            .filter(|&(f, s)| side_partner[f][s].is_none())
            .collect();
        let (start, boundary) = match starts.len() {
            0 => (all[0], false),
            1 => (starts[0], true),
            _ => {
                return Err(Error::NonManifold(format!(
                    "link of vertex {v} has several boundary arcs"
                )))
            }
        };
        let mut walk = vec![start];
        let mut cur = start;
        loop {
            match ccw_next(cur) {
                Some(next) => {
                    if next == start && !boundary {
                        break;
                    }
                    if walk.len() > all.len() {
                        return Err(Error::NonManifold(format!(
                            "link walk at vertex {v} does not close"
                        )));
                    }
                    walk.push(next);
                    cur = next;
                }
                None if boundary => break,
                None => unreachable!("interior walk hit a boundary side"),
            }
        }
        if walk.len() != all.len() {
            return Err(Error::NonManifold(format!(
                "link of vertex {v} is disconnected"
            )));
        }
        boundary_flags[v] = boundary;
        vertex_corners[v] = walk;
    }

    if surface != SurfaceKind::Disk && boundary_flags.iter().any(|&b| b) {
        return Err(Error::NonManifold("closed surface with boundary vertices".into()));
    }

    let boundary_vertices: Vec<usize> = (0..vertex_count).filter(|&v| boundary_flags[v]).collect();

    Ok(TriComplex {
        vertex_count,
        faces,
        face_lifts: if surface == SurfaceKind::Torus {
            Some(face_lifts)
        } else {
            None
        },
        surface,
        edges,
        side_edge,
        side_partner,
        boundary_flags,
        boundary_vertices,
        vertex_corners,
    })
}

impl TriComplex {
    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn face(&self, f: usize) -> [usize; 3] {
        self.faces[f]
    }

    pub fn surface(&self) -> SurfaceKind {
        self.surface
    }

    pub fn face_lifts(&self) -> Option<&[[Lift; 3]]> {
        self.face_lifts.as_deref()
    }

    /// Deck translation of face f's directed side s -> s+1.
    pub fn side_lift(&self, f: usize, s: usize) -> Lift {
        self.face_lifts.as_ref().map_or([0, 0], |l| l[f][s])
    }

    pub fn edges(&self) -> &[EdgeRec] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_boundary_edge(&self, e: usize) -> bool {
        self.edges[e].sides.len() == 1
    }

    pub fn inner_edges(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.edges.len()).filter(|&e| !self.is_boundary_edge(e))
    }

    /// Edge index of face f's side s.
    pub fn side_edge(&self, f: usize, s: usize) -> usize {
        self.side_edge[f][s]
    }

    pub fn side_partner(&self, f: usize, s: usize) -> Option<(usize, usize)> {
        self.side_partner[f][s]
    }

    /// First edge joining u and w, if any. Unique off the torus.
    pub fn edge_between(&self, u: usize, w: usize) -> Option<usize> {
        let ends = (u.min(w), u.max(w));
        self.edges.iter().position(|e| e.ends == ends)
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_flags[v]
    }

    pub fn boundary_vertices(&self) -> &[usize] {
        &self.boundary_vertices
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count)
            .filter(|&v| !self.boundary_flags[v])
            .collect()
    }

    /// Corner of face f at vertex v.
    pub fn corner_at(&self, f: usize, v: usize) -> Result<CornerIndex> {
        let face = self.faces[f];
        match face.iter().position(|&x| x == v) {
            Some(s) => Ok((f, s)),
            None => Err(Error::NotIncident(v)),
        }
    }

    /// Corners incident to v in cyclic link order (counterclockwise). For a
    /// boundary vertex the walk starts at the clockwise-most corner.
    pub fn corners_around(&self, v: usize) -> &[CornerIndex] {
        &self.vertex_corners[v]
    }

    /// Number of corners at v. On a torus this can exceed the number of
    /// distinct neighboring vertices.
    pub fn degree(&self, v: usize) -> usize {
        self.vertex_corners[v].len()
    }

    pub fn vertex_of_corner(&self, c: CornerIndex) -> usize {
        self.faces[c.0][c.1]
    }

    /// Corners opposite edge e, one per side: for side (f, s) that is corner
    /// (f, (s+2)%3).
    pub fn opposite_corners(&self, e: usize) -> Vec<CornerIndex> {
        self.edges[e]
            .sides
            .iter()
            .map(|&(f, s)| (f, (s + 2) % 3))
            .collect()
    }

    /// How many endpoints of edge e equal v (2 for a loop at v).
    pub fn end_multiplicity(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e].ends;
        usize::from(a == v) + usize::from(b == v)
    }
}

/// Removes the open star of interior vertex v0 from a sphere complex,
/// yielding the disk complex T0 and (T0 vertex -> original vertex) mapping.
/// The boundary of T0 is the link of v0.
pub fn remove_open_star(t: &TriComplex, v0: usize) -> Result<(TriComplex, Vec<usize>)> {
    if t.surface() != SurfaceKind::Sphere {
        return Err(Error::WrongSurfaceKind {
            expected: "sphere",
            found: t.surface(),
        });
    }
    if v0 >= t.vertex_count() {
        return Err(Error::NotIncident(v0));
    }
    let kept: Vec<[usize; 3]> = t
        .faces()
        .iter()
        .filter(|f| !f.contains(&v0))
        .map(|f| f.map(|v| if v > v0 { v - 1 } else { v }))
        .collect();
    let mapping: Vec<usize> = (0..t.vertex_count()).filter(|&v| v != v0).collect();
    let t0 = build_complex(kept)?;
    if t0.surface() != SurfaceKind::Disk {
        return Err(Error::NonManifold(format!(
            "removing the star of {v0} does not leave a disk"
        )));
    }
    Ok((t0, mapping))
}

#[derive(Serialize, Deserialize)]
struct ComplexRepr {
    faces: Vec<[usize; 3]>,
    surface: SurfaceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lifts: Option<Vec<[[i64; 2]; 3]>>,
}

impl Serialize for TriComplex {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ComplexRepr {
            faces: self.faces.clone(),
            surface: self.surface,
            lifts: self.face_lifts.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for TriComplex {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = ComplexRepr::deserialize(de)?;
        let built = match repr.lifts {
            Some(l) => build_torus_complex(repr.faces, l),
            None => build_complex(repr.faces),
        }
        .map_err(D::Error::custom)?;
        if built.surface() != repr.surface {
            return Err(D::Error::custom(format!(
                "declared surface {:?} but faces build a {:?}",
                repr.surface,
                built.surface()
            )));
        }
        Ok(built)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    pub fn octahedron_faces() -> Vec<[usize; 3]> {
        // Vertices: 0..3 equatorial square, 4 top, 5 bottom.
        vec![
            [0, 1, 4],
            [1, 2, 4],
            [2, 3, 4],
            [3, 0, 4],
            [1, 0, 5],
            [2, 1, 5],
            [3, 2, 5],
            [0, 3, 5],
        ]
    }

    pub fn icosahedron_faces() -> Vec<[usize; 3]> {
        vec![
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 5, 1],
            [1, 6, 2],
            [2, 6, 7],
            [2, 7, 3],
            [3, 7, 8],
            [3, 8, 4],
            [4, 8, 9],
            [4, 9, 5],
            [5, 9, 10],
            [5, 10, 1],
            [1, 10, 6],
            [6, 11, 7],
            [7, 11, 8],
            [8, 11, 9],
            [9, 11, 10],
            [10, 11, 6],
        ]
    }

    /// Hexagonal wheel: vertex 0 interior, 1..=6 on the boundary.
    pub fn wheel_faces() -> Vec<[usize; 3]> {
        (0..6).map(|k| [0, 1 + k, 1 + (k + 1) % 6]).collect()
    }

    /// The 7-vertex simplicial torus (every edge a plain vertex pair).
    pub fn moebius_kantor_torus() -> Vec<[usize; 3]> {
        let mut f = Vec::new();
        for i in 0..7usize {
            f.push([i, (i + 1) % 7, (i + 3) % 7]);
            f.push([i, (i + 3) % 7, (i + 2) % 7]);
        }
        f
    }
}
