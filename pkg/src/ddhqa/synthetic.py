"""Synthetic meshes and corpora for experiments and verification.

Icospheres and a triangulated cube provide closed genus-0 meshes with
known geometry; the noise corpus pairs increasingly perturbed spheres
with a monotone pseudo-MOS so the full pipeline can be exercised without
a subjective study.
"""

from __future__ import annotations

import numpy as np

from .dataio import VideoSample
from .features import extract_geometry_features
from .fusion import ClipFeatureRecord
from .mesh import TriangleMesh


def triangulated_cube():
    """Unit cube split into 12 triangles with outward-facing windings."""
    vertices = np.array(
        [
            [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
            [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
        ],
        dtype=np.float64,
    )
    quads = [
        (0, 3, 2, 1),  # bottom, normal -z
        (4, 5, 6, 7),  # top, +z
        (0, 1, 5, 4),  # front, -y
        (2, 3, 7, 6),  # back, +y
        (0, 4, 7, 3),  # left, -x
        (1, 2, 6, 5),  # right, +x
    ]
    faces = []
    for a, b, c, d in quads:
        faces.append((a, b, c))
        faces.append((a, c, d))
    return TriangleMesh(vertices, faces)


_ICO_T = (1.0 + np.sqrt(5.0)) / 2.0

_ICO_VERTICES = np.array(
    [
        [-1, _ICO_T, 0], [1, _ICO_T, 0], [-1, -_ICO_T, 0], [1, -_ICO_T, 0],
        [0, -1, _ICO_T], [0, 1, _ICO_T], [0, -1, -_ICO_T], [0, 1, -_ICO_T],
        [_ICO_T, 0, -1], [_ICO_T, 0, 1], [-_ICO_T, 0, -1], [-_ICO_T, 0, 1],
    ],
    dtype=np.float64,
)

_ICO_FACES = [
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
]


def icosphere(level=0, radius=1.0):
    """Unit-sphere triangulation by icosahedron subdivision.

    Each level splits every triangle into four and reprojects the new
    vertices onto the sphere; level 0 is the icosahedron itself (20
    faces), level k has 20 * 4**k faces.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    vertices = [v / np.linalg.norm(v) for v in _ICO_VERTICES]
    faces = list(_ICO_FACES)
    for _ in range(level):
        midpoint = {}

        def split(a, b):
            key = (min(a, b), max(a, b))
            if key not in midpoint:
                mid = vertices[a] + vertices[b]
                vertices.append(mid / np.linalg.norm(mid))
                midpoint[key] = len(vertices) - 1
            return midpoint[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = split(a, b), split(b, c), split(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return TriangleMesh(np.array(vertices) * radius, faces)


def mean_edge_length(mesh):
    a = mesh.vertices[mesh.edges[:, 0]]
    b = mesh.vertices[mesh.edges[:, 1]]
    return float(np.mean(np.linalg.norm(a - b, axis=1)))


def perturb_vertices(mesh, amplitude, rng):
    """Gaussian vertex displacement scaled by the mean edge length."""
    scale = amplitude * mean_edge_length(mesh)
    noisy = mesh.vertices + rng.normal(0.0, scale, size=mesh.vertices.shape)
    return TriangleMesh(noisy, mesh.faces)


def noise_corpus(
    n_models=200,
    level=2,
    max_amplitude=0.3,
    d_s=8,
    d_t=8,
    clips_per_video=1,
    mos_jitter=0.1,
    n_groups=10,
    seed=0,
    area_mode="mixed",
):
    """Synthetic rated corpus: noisier spheres get lower pseudo-MOS.

    Model i is an icosphere with vertex noise of amplitude
    ``max_amplitude * i / (n_models - 1)``; its pseudo-MOS decreases
    linearly from 5 to 1 with the amplitude, plus Gaussian jitter. Clip
    features are zero vectors of the declared dimensions, so only the
    geometry features carry signal. Groups are assigned round-robin.

    Returns (samples, amplitudes).
    """
    rng = np.random.default_rng(seed)
    base = icosphere(level=level)
    samples = []
    amplitudes = np.linspace(0.0, max_amplitude, n_models)
    for i, amplitude in enumerate(amplitudes):
        noisy = perturb_vertices(base, amplitude, rng) if amplitude > 0 else base
        gf = extract_geometry_features(noisy, area_mode=area_mode)
        video_id = f"sphere{i:04d}"
        clips = [
            ClipFeatureRecord(
                video_id=video_id,
                clip_index=j,
                sf=np.zeros(d_s),
                tf=np.zeros(d_t),
            )
            for j in range(clips_per_video)
        ]
        mos = 5.0 - 4.0 * (amplitude / max_amplitude) + mos_jitter * rng.normal()
        samples.append(
            VideoSample(
                video_id=video_id,
                gf=gf.values,
                clips=clips,
                mos=float(mos),
                group_id=f"group{i % n_groups}",
            )
        )
    return samples, amplitudes
