"""Per-element geometry attributes: dihedral angles and Gaussian curvature.

Both attributes are returned as flat scalar fields. Elements that cannot
produce a finite value (boundary or non-manifold edges, vertices with no
usable area, degenerate faces) are excluded and counted rather than
emitted as NaN.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyFieldError, ZeroAreaError

AREA_MODES = ("mixed", "barycentric")


@dataclass(frozen=True)
class ScalarField:
    """An array of finite per-element attribute values.

    ``element_ids`` maps each value back to the mesh element (edge or
    vertex index) it was computed on; ``n_excluded`` counts elements that
    did not qualify.
    """

    values: np.ndarray
    kind: str
    n_excluded: int = 0
    element_ids: np.ndarray = field(default=None, repr=False)

    def __len__(self):
        return len(self.values)


def dihedral_angles(mesh):
    """Dihedral angle of every interior manifold edge.

    For an edge shared by exactly two non-degenerate faces the angle is
    ``arccos`` of the clamped dot product of the two unit face normals,
    so it lies in [0, pi] and is insensitive to a global winding flip.
    Boundary edges, non-manifold edges and edges touching degenerate
    faces are excluded and counted.
    """
    normals, _, degenerate = mesh.face_geometries()
    values = []
    ids = []
    excluded = 0
    for e, face_ids in enumerate(mesh.edge_faces):
        live = [f for f in face_ids if not degenerate[f]]
        if len(live) != 2:
            excluded += 1
            continue
        cos = float(np.dot(normals[live[0]], normals[live[1]]))
        values.append(np.arccos(np.clip(cos, -1.0, 1.0)))
        ids.append(e)
    if not values:
        raise EmptyFieldError("no edge with exactly two non-degenerate faces")
    return ScalarField(
        values=np.asarray(values, dtype=np.float64),
        kind="dihedral",
        n_excluded=excluded,
        element_ids=np.asarray(ids, dtype=np.int64),
    )


def _corner_angles(mesh):
    """Interior angles (F, 3) of every face, one per corner.

    Angles of degenerate faces are set to 0 so they never contribute to
    angle sums.
    """
    v = mesh.vertices
    f = mesh.faces
    _, _, degenerate = mesh.face_geometries()
    angles = np.zeros((len(f), 3), dtype=np.float64)
    p0, p1, p2 = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    for corner, (a, b, c) in enumerate(((p0, p1, p2), (p1, p2, p0), (p2, p0, p1))):
        u = b - a
        w = c - a
        nu = np.linalg.norm(u, axis=1)
        nw = np.linalg.norm(w, axis=1)
        ok = ~degenerate & (nu > 0) & (nw > 0)
        cos = np.zeros(len(f))
        cos[ok] = np.einsum("ij,ij->i", u[ok], w[ok]) / (nu[ok] * nw[ok])
        angles[ok, corner] = np.arccos(np.clip(cos[ok], -1.0, 1.0))
    return angles


def vertex_areas(mesh, mode="mixed"):
    """Per-vertex surface area under the chosen convention.

    ``barycentric`` assigns one third of each incident face's area to the
    vertex. ``mixed`` uses the cotangent-weighted Voronoi cell on
    non-obtuse triangles, falling back to half the triangle area at an
    obtuse corner and a quarter elsewhere in that triangle. Degenerate
    faces contribute nothing in either mode.
    """
    if mode not in AREA_MODES:
        raise ValueError(f"unknown area mode {mode!r}")
    f = mesh.faces
    _, face_area, degenerate = mesh.face_geometries()
    areas = np.zeros(mesh.n_vertices, dtype=np.float64)
    live = ~degenerate
    if mode == "barycentric":
        for corner in range(3):
            np.add.at(areas, f[live, corner], face_area[live] / 3.0)
        return areas

    angles = _corner_angles(mesh)
    v = mesh.vertices
    # squared edge length opposite to each corner: corner k faces edge (k+1, k+2)
    opp_sq = np.stack(
        [
            np.sum((v[f[:, (k + 1) % 3]] - v[f[:, (k + 2) % 3]]) ** 2, axis=1)
            for k in range(3)
        ],
        axis=1,
    )
    obtuse_corner = np.argmax(angles, axis=1)
    is_obtuse = angles.max(axis=1) > np.pi / 2

    with np.errstate(divide="ignore", invalid="ignore"):
        cot = 1.0 / np.tan(angles)
    cot[~live] = 0.0

    for corner in range(3):
        j = (corner + 1) % 3
        k = (corner + 2) % 3
        # Voronoi share at this corner: (|edge to k|^2 cot(angle j) +
        # |edge to j|^2 cot(angle k)) / 8; opp_sq[:, j] is the squared
        # length of the edge between corners corner and k.
        voronoi = (opp_sq[:, j] * cot[:, j] + opp_sq[:, k] * cot[:, k]) / 8.0
        fallback = np.where(obtuse_corner == corner, face_area / 2.0, face_area / 4.0)
        contrib = np.where(is_obtuse, fallback, voronoi)
        sel = live
        np.add.at(areas, f[sel, corner], contrib[sel])
    return areas


def voronoi_area(mesh, vertex, mode="mixed"):
    """Area of one vertex's cell; see :func:`vertex_areas` for the modes.

    Raises :class:`ZeroAreaError` when every incident face is degenerate
    (or the vertex is isolated).
    """
    if mode not in AREA_MODES:
        raise ValueError(f"unknown area mode {mode!r}")
    incident = mesh.vertex_faces[vertex]
    _, face_area, degenerate = mesh.face_geometries()
    live = [fi for fi in incident if not degenerate[fi]]
    if not live:
        raise ZeroAreaError(f"vertex {vertex} has no non-degenerate incident face")
    if mode == "barycentric":
        return float(sum(face_area[fi] / 3.0 for fi in live))

    angles = _corner_angles(mesh)
    v = mesh.vertices
    total = 0.0
    for fi in live:
        tri = mesh.faces[fi]
        corner = int(np.where(tri == vertex)[0][0])
        ang = angles[fi]
        if ang.max() > np.pi / 2:
            if int(np.argmax(ang)) == corner:
                total += face_area[fi] / 2.0
            else:
                total += face_area[fi] / 4.0
        else:
            j = (corner + 1) % 3
            k = (corner + 2) % 3
            pj_sq = float(np.sum((v[tri[j]] - v[tri[corner]]) ** 2))
            pk_sq = float(np.sum((v[tri[k]] - v[tri[corner]]) ** 2))
            total += (pk_sq / np.tan(ang[j]) + pj_sq / np.tan(ang[k])) / 8.0
    return float(total)


def gaussian_curvature(mesh, area_mode="mixed"):
    """Discrete Gaussian curvature: angle defect over vertex area.

    For each vertex with positive area, ``(2*pi - sum of incident
    interior angles) / area``. Vertices with zero area (isolated, or all
    incident faces degenerate) are excluded and counted.
    """
    angles = _corner_angles(mesh)
    f = mesh.faces
    angle_sum = np.zeros(mesh.n_vertices, dtype=np.float64)
    for corner in range(3):
        np.add.at(angle_sum, f[:, corner], angles[:, corner])
    areas = vertex_areas(mesh, mode=area_mode)
    qualifying = areas > 0.0
    if not qualifying.any():
        raise EmptyFieldError("no vertex with positive area")
    defect = 2.0 * np.pi - angle_sum[qualifying]
    ids = np.nonzero(qualifying)[0]
    return ScalarField(
        values=defect / areas[qualifying],
        kind="curvature",
        n_excluded=int(np.count_nonzero(~qualifying)),
        element_ids=ids,
    )
