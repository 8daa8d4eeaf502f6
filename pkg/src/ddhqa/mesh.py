"""Triangle mesh loading and adjacency.

Meshes are triangles-only: polygonal faces are fan-triangulated at parse
time. Supported inputs are Wavefront OBJ and ASCII PLY; texture
coordinates, normals, materials and colors present in the files are
skipped, only the geometry is kept.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import EmptyMeshError, MeshParseError

# Faces with area below this fraction of the squared bounding-box diagonal
# are treated as degenerate and excluded from downstream attribute use.
DEGENERATE_AREA_REL = 1e-12


@dataclass(frozen=True)
class FaceGeometry:
    """Unit normal and area of a single face."""

    normal: np.ndarray
    area: float
    degenerate: bool


class TriangleMesh:
    """Indexed triangle mesh with edge and vertex adjacency.

    Attributes
    ----------
    vertices : (V, 3) float array
        Positions, read exactly as written in the source file.
    faces : (F, 3) int array
        Vertex index triples, counter-clockwise winding assumed.
    edges : (E, 2) int array
        Unique unordered vertex pairs, each stored as (lo, hi).
    edge_faces : list of lists
        For edge e, the indices of every face containing both endpoints.
    vertex_faces : list of lists
        For vertex v, the indices of every incident face.

    Instances are immutable after construction and safe to share across
    concurrent readers.
    """

    def __init__(self, vertices, faces):
        vertices = np.asarray(vertices, dtype=np.float64)
        faces = np.asarray(faces, dtype=np.int64)
        if vertices.ndim != 2 or vertices.shape[1] != 3:
            raise ValueError("vertices must be (V, 3)")
        if faces.ndim != 2 or faces.shape[1] != 3:
            raise ValueError("faces must be (F, 3)")
        if len(faces) and (faces.min() < 0 or faces.max() >= len(vertices)):
            raise ValueError("face references an out-of-range vertex index")
        self.vertices = vertices
        self.faces = faces
        self._build_adjacency()
        self._face_geom = None
        vertices.setflags(write=False)
        faces.setflags(write=False)

    def _build_adjacency(self):
        f = self.faces
        half_edges = np.concatenate([f[:, [0, 1]], f[:, [1, 2]], f[:, [2, 0]]])
        half_edges.sort(axis=1)
        owner = np.tile(np.arange(len(f)), 3)
        self.edges, inverse = np.unique(half_edges, axis=0, return_inverse=True)

        edge_faces = [[] for _ in range(len(self.edges))]
        for k, e in enumerate(inverse.ravel()):
            edge_faces[e].append(int(owner[k]))
        self.edge_faces = edge_faces

        vertex_faces = [[] for _ in range(len(self.vertices))]
        for i, (a, b, c) in enumerate(f):
            vertex_faces[a].append(i)
            vertex_faces[b].append(i)
            vertex_faces[c].append(i)
        self.vertex_faces = vertex_faces

        self._edge_index = {
            (int(a), int(b)): i for i, (a, b) in enumerate(self.edges)
        }

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def n_edges(self):
        return len(self.edges)

    def edge_id(self, a, b):
        """Index of the undirected edge (a, b), or None if absent."""
        return self._edge_index.get((min(a, b), max(a, b)))

    @property
    def bbox_diagonal(self):
        """Length of the axis-aligned bounding-box diagonal."""
        if not len(self.vertices):
            return 0.0
        extent = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.linalg.norm(extent))

    def face_geometries(self):
        """Normals, areas and the degenerate mask for all faces.

        Returns
        -------
        normals : (F, 3) array, unit length except on degenerate faces
        areas : (F,) array
        degenerate : (F,) bool array
        """
        if self._face_geom is None:
            v = self.vertices
            f = self.faces
            cross = np.cross(v[f[:, 1]] - v[f[:, 0]], v[f[:, 2]] - v[f[:, 0]])
            norm = np.linalg.norm(cross, axis=1)
            areas = 0.5 * norm
            # not-greater rather than less-than so a fully collapsed mesh
            # (bounding box of zero extent) still flags its faces
            degenerate = ~(areas > DEGENERATE_AREA_REL * self.bbox_diagonal ** 2)
            normals = np.zeros_like(cross)
            ok = ~degenerate
            normals[ok] = cross[ok] / norm[ok, None]
            self._face_geom = (normals, areas, degenerate)
        return self._face_geom


def face_geometry(mesh, face):
    """Geometry of one face: unit normal and area.

    The normal is the normalized cross product of the two edge vectors in
    stored winding order; the area is half the cross-product magnitude.
    Faces with area below ``DEGENERATE_AREA_REL * bbox_diagonal**2`` are
    flagged degenerate (their normal is the zero vector).
    """
    if not 0 <= face < mesh.n_faces:
        raise IndexError(f"face index {face} out of range")
    normals, areas, degenerate = mesh.face_geometries()
    return FaceGeometry(
        normal=normals[face].copy(),
        area=float(areas[face]),
        degenerate=bool(degenerate[face]),
    )


def _fan_triangulate(indices):
    v0 = indices[0]
    return [(v0, indices[i], indices[i + 1]) for i in range(1, len(indices) - 1)]


def _parse_obj(path):
    vertices = []
    pending = []  # (line_no, triple) with 0-based indices, validated later
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        for line_no, raw in enumerate(fh, start=1):
            tokens = raw.split()
            if not tokens or tokens[0].startswith("#"):
                continue
            key = tokens[0]
            if key == "v":
                if len(tokens) < 4:
                    raise MeshParseError(path, line_no, "vertex needs 3 coordinates")
                try:
                    vertices.append([float(t) for t in tokens[1:4]])
                except ValueError:
                    raise MeshParseError(path, line_no, "bad vertex coordinate") from None
            elif key == "f":
                refs = tokens[1:]
                if len(refs) < 3:
                    raise MeshParseError(path, line_no, "face needs at least 3 vertices")
                idx = []
                for ref in refs:
                    head = ref.split("/")[0]
                    try:
                        i = int(head)
                    except ValueError:
                        raise MeshParseError(path, line_no, f"bad face reference {ref!r}") from None
                    if i == 0:
                        raise MeshParseError(path, line_no, "OBJ indices are 1-based, got 0")
                    if i < 0:  # relative to the vertices read so far
                        i = len(vertices) + 1 + i
                        if i <= 0:
                            raise MeshParseError(path, line_no, "relative index before first vertex")
                    idx.append(i - 1)
                pending.extend((line_no, tri) for tri in _fan_triangulate(idx))
            # vn/vt/usemtl/mtllib/o/g/s/... carry no geometry; skipped
    faces = []
    for line_no, tri in pending:
        for i in tri:
            if i >= len(vertices):
                raise MeshParseError(path, line_no, f"face references missing vertex {i + 1}")
        faces.append(tri)
    return vertices, faces


def _parse_ply_ascii(path):
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        lines = fh.readlines()

    def tokens_at(i):
        return lines[i].split()

    if not lines or lines[0].split() != ["ply"]:
        raise MeshParseError(path, 1, "missing 'ply' magic")

    elements = []  # (name, count, properties) in declaration order
    i = 1
    saw_format = False
    while i < len(lines):
        tok = tokens_at(i)
        i += 1
        if not tok or tok[0] == "comment":
            continue
        if tok[0] == "format":
            if tok[1:2] != ["ascii"]:
                raise MeshParseError(path, i, "only ascii PLY is supported")
            saw_format = True
        elif tok[0] == "element":
            if len(tok) != 3:
                raise MeshParseError(path, i, "malformed element declaration")
            try:
                count = int(tok[2])
            except ValueError:
                raise MeshParseError(path, i, "bad element count") from None
            elements.append([tok[1], count, []])
        elif tok[0] == "property":
            if not elements:
                raise MeshParseError(path, i, "property before any element")
            elements[-1][2].append(tok[1:])
        elif tok[0] == "end_header":
            break
        else:
            raise MeshParseError(path, i, f"unexpected header keyword {tok[0]!r}")
    else:
        raise MeshParseError(path, len(lines), "missing end_header")
    if not saw_format:
        raise MeshParseError(path, 1, "missing format declaration")
    body_start = i

    vertices = []
    faces = []
    row = body_start
    for name, count, props in elements:
        if name == "vertex":
            scalar_names = [p[-1] for p in props if p[0] != "list"]
            try:
                pos = [scalar_names.index(ax) for ax in ("x", "y", "z")]
            except ValueError:
                raise MeshParseError(path, body_start, "vertex element lacks x/y/z") from None
            for _ in range(count):
                if row >= len(lines):
                    raise MeshParseError(path, row + 1, "truncated vertex data")
                tok = tokens_at(row)
                if len(tok) < len(scalar_names):
                    raise MeshParseError(path, row + 1, "short vertex record")
                try:
                    vertices.append([float(tok[p]) for p in pos])
                except ValueError:
                    raise MeshParseError(path, row + 1, "bad vertex coordinate") from None
                row += 1
        elif name == "face":
            list_names = [p[-1] for p in props if p[0] == "list"]
            if not any(n in ("vertex_indices", "vertex_index") for n in list_names):
                raise MeshParseError(path, body_start, "face element lacks vertex_indices")
            for _ in range(count):
                if row >= len(lines):
                    raise MeshParseError(path, row + 1, "truncated face data")
                tok = tokens_at(row)
                try:
                    k = int(tok[0])
                    idx = [int(t) for t in tok[1 : 1 + k]]
                except (ValueError, IndexError):
                    raise MeshParseError(path, row + 1, "bad face record") from None
                if len(idx) != k or k < 3:
                    raise MeshParseError(path, row + 1, "bad face vertex count")
                faces.extend(_fan_triangulate(idx))
                row += 1
        else:
            row += count  # unknown element, skip its rows
    for tri in faces:
        for v in tri:
            if v < 0 or v >= len(vertices):
                raise MeshParseError(path, 0, f"face references missing vertex {v}")
    return vertices, faces


_PARSERS = {"obj": _parse_obj, "ply-ascii": _parse_ply_ascii}


def parse_mesh(path, format=None):
    """Parse a mesh file into a :class:`TriangleMesh`.

    Parameters
    ----------
    path : str or Path
    format : {"obj", "ply-ascii"}, optional
        Inferred from the file suffix when omitted.

    Raises
    ------
    OSError if the file cannot be read, :class:`MeshParseError` on a
    malformed record (with line number), :class:`EmptyMeshError` when the
    file yields no faces.
    """
    if format is None:
        suffix = os.path.splitext(str(path))[1].lower()
        format = {".obj": "obj", ".ply": "ply-ascii"}.get(suffix)
        if format is None:
            raise ValueError(f"cannot infer mesh format from {path!r}")
    if format not in _PARSERS:
        raise ValueError(f"unsupported mesh format {format!r}")
    vertices, faces = _PARSERS[format](path)
    if not faces:
        raise EmptyMeshError(f"{path}: no faces")
    if len(vertices) < 3:
        raise EmptyMeshError(f"{path}: fewer than 3 vertices")
    return TriangleMesh(vertices, faces)


def write_obj(mesh, path):
    """Serialize a mesh as OBJ at full float precision.

    Positions are written with shortest round-trip formatting so that
    re-parsing reproduces them bit for bit.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for x, y, z in mesh.vertices:
            fh.write(f"v {float(x)!r} {float(y)!r} {float(z)!r}\n")
        for a, b, c in mesh.faces:
            fh.write(f"f {a + 1} {b + 1} {c + 1}\n")
