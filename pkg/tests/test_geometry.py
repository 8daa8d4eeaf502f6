import numpy as np
import pytest

from ddhqa.errors import EmptyFieldError, ZeroAreaError
from ddhqa.geometry import (
    dihedral_angles,
    gaussian_curvature,
    vertex_areas,
    voronoi_area,
)
from ddhqa.mesh import TriangleMesh
from ddhqa.synthetic import icosphere


def equilateral_fan(side=1.0):
    """Interior vertex of a planar equilateral grid: 6 incident triangles."""
    ring = [
        [side * np.cos(a), side * np.sin(a), 0.0]
        for a in np.linspace(0.0, 2.0 * np.pi, 7)[:-1]
    ]
    vertices = np.vstack([[0.0, 0.0, 0.0], ring])
    faces = [(0, 1 + i, 1 + (i + 1) % 6) for i in range(6)]
    return TriangleMesh(vertices, faces)


def regular_tetrahedron():
    """Edge length exactly 1."""
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    return TriangleMesh(v / np.sqrt(8.0), [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)])


class TestDihedralAngles:
    def test_coplanar_triangles(self):
        mesh = TriangleMesh(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], [[0, 1, 2], [2, 1, 3]]
        )
        field = dihedral_angles(mesh)
        assert len(field) == 1
        assert field.values[0] == pytest.approx(0.0, abs=1e-12)
        assert field.n_excluded == 4  # the four boundary edges

    def test_cube_census(self, cube):
        # oracle: brute-force normals of the 12-face cube give 12 edges
        # across cube edges (pi/2) and 6 face diagonals (0)
        field = dihedral_angles(cube)
        assert len(field) == 18
        assert field.n_excluded == 0
        n_flat = int(np.sum(np.abs(field.values) < 1e-9))
        n_right = int(np.sum(np.abs(field.values - np.pi / 2) < 1e-9))
        assert (n_flat, n_right) == (6, 12)

    def test_isolated_triangle_is_empty_field(self):
        mesh = TriangleMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0]], [[0, 1, 2]])
        with pytest.raises(EmptyFieldError):
            dihedral_angles(mesh)

    def test_values_in_range(self, sphere2):
        field = dihedral_angles(sphere2)
        assert np.all(field.values >= 0.0)
        assert np.all(field.values <= np.pi)
        assert np.all(np.isfinite(field.values))

    def test_nonmanifold_edge_excluded(self):
        # three triangles share the edge (0, 1)
        mesh = TriangleMesh(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, -1, 0], [2, 2, 0], [2, 2, 1]],
            [[0, 1, 2], [0, 1, 3], [0, 1, 4], [1, 5, 6], [0, 5, 6]],
        )
        field = dihedral_angles(mesh)
        shared = mesh.edge_id(0, 1)
        assert shared not in field.element_ids

    def test_winding_flip_invariance(self, sphere2):
        flipped = TriangleMesh(sphere2.vertices, sphere2.faces[:, ::-1])
        a = dihedral_angles(sphere2)
        b = dihedral_angles(flipped)
        np.testing.assert_allclose(b.values, a.values, atol=1e-12)


class TestVoronoiArea:
    def test_equilateral_fan_barycentric(self):
        side = 1.3
        mesh = equilateral_fan(side)
        expected = np.sqrt(3.0) / 2.0 * side ** 2  # one third of incident area
        assert voronoi_area(mesh, 0, mode="barycentric") == pytest.approx(expected)

    def test_equilateral_fan_mixed_equals_barycentric(self):
        # for equilateral triangles the Voronoi cell is the barycentric cell
        mesh = equilateral_fan(0.8)
        assert voronoi_area(mesh, 0, mode="mixed") == pytest.approx(
            voronoi_area(mesh, 0, mode="barycentric")
        )

    def test_tetrahedron_barycentric(self):
        # oracle: direct area sum, 3 faces of area sqrt(3)/4 each
        mesh = regular_tetrahedron()
        assert voronoi_area(mesh, 0, mode="barycentric") == pytest.approx(
            np.sqrt(3.0) / 4.0
        )

    def test_zero_area_error(self):
        mesh = TriangleMesh(
            [[0, 0, 0], [0, 0, 0], [0, 0, 0], [1, 0, 0], [0, 1, 0]],
            [[0, 1, 2], [2, 3, 4]],
        )
        with pytest.raises(ZeroAreaError):
            voronoi_area(mesh, 0)

    @pytest.mark.parametrize("mode", ["mixed", "barycentric"])
    def test_single_vertex_matches_vectorized(self, sphere2, mode):
        areas = vertex_areas(sphere2, mode=mode)
        for v in range(0, sphere2.n_vertices, 17):
            assert voronoi_area(sphere2, v, mode=mode) == pytest.approx(
                areas[v], rel=1e-12
            )

    @pytest.mark.parametrize("mode", ["mixed", "barycentric"])
    def test_cell_areas_partition_surface(self, mode, cube, sphere2):
        for mesh in (cube, sphere2):
            _, face_area, _ = mesh.face_geometries()
            np.testing.assert_allclose(
                vertex_areas(mesh, mode=mode).sum(), face_area.sum(), rtol=1e-12
            )

    def test_obtuse_fallback(self):
        # one obtuse triangle: corner contributions are area/2 at the obtuse
        # corner and area/4 at the others
        mesh = TriangleMesh([[0, 0, 0], [4, 0, 0], [2, 0.5, 0]], [[0, 1, 2]])
        _, face_area, _ = mesh.face_geometries()
        area = face_area[0]
        assert voronoi_area(mesh, 2, mode="mixed") == pytest.approx(area / 2.0)
        assert voronoi_area(mesh, 0, mode="mixed") == pytest.approx(area / 4.0)
        assert voronoi_area(mesh, 1, mode="mixed") == pytest.approx(area / 4.0)


class TestGaussianCurvature:
    def test_planar_interior_vertex_is_flat(self):
        field = gaussian_curvature(equilateral_fan())
        center = np.where(field.element_ids == 0)[0][0]
        assert field.values[center] == pytest.approx(0.0, abs=1e-12)

    def test_tetrahedron_vertex(self):
        # oracle: angle defect 2*pi - 3*(pi/3) = pi over area sqrt(3)/4
        field = gaussian_curvature(regular_tetrahedron(), area_mode="barycentric")
        expected = 4.0 * np.pi / np.sqrt(3.0)
        np.testing.assert_allclose(field.values, expected, rtol=1e-12)

    @pytest.mark.parametrize("mode", ["mixed", "barycentric"])
    @pytest.mark.parametrize("level", [0, 1, 2])
    def test_gauss_bonnet_icospheres(self, mode, level):
        mesh = icosphere(level)
        field = gaussian_curvature(mesh, area_mode=mode)
        areas = vertex_areas(mesh, mode=mode)
        total = float(np.sum(field.values * areas[field.element_ids]))
        assert total == pytest.approx(4.0 * np.pi, rel=1e-6)

    def test_gauss_bonnet_cube(self, cube):
        for mode in ("mixed", "barycentric"):
            field = gaussian_curvature(cube, area_mode=mode)
            areas = vertex_areas(cube, mode=mode)
            total = float(np.sum(field.values * areas[field.element_ids]))
            assert total == pytest.approx(4.0 * np.pi, rel=1e-6)

    def test_empty_field(self):
        mesh = TriangleMesh([[0, 0, 0], [0, 0, 0], [0, 0, 0]], [[0, 1, 2]])
        with pytest.raises(EmptyFieldError):
            gaussian_curvature(mesh)

    def test_sphere_curvature_positive(self, sphere2):
        field = gaussian_curvature(sphere2)
        assert np.all(field.values > 0.0)  # convex surface


class TestTransformProperties:
    @pytest.fixture
    def rotation(self, rng):
        q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
        if np.linalg.det(q) < 0:
            q[:, 0] *= -1.0
        return q

    def test_rigid_invariance(self, sphere2, rotation, rng):
        moved = TriangleMesh(
            sphere2.vertices @ rotation.T + rng.normal(size=3) * 10.0, sphere2.faces
        )
        np.testing.assert_allclose(
            dihedral_angles(moved).values,
            dihedral_angles(sphere2).values,
            atol=1e-9,
        )
        np.testing.assert_allclose(
            gaussian_curvature(moved).values,
            gaussian_curvature(sphere2).values,
            atol=1e-9,
        )

    def test_scale_covariance(self, sphere2):
        s = 2.7
        scaled = TriangleMesh(sphere2.vertices * s, sphere2.faces)
        np.testing.assert_allclose(
            dihedral_angles(scaled).values,
            dihedral_angles(sphere2).values,
            atol=1e-12,
        )
        np.testing.assert_allclose(
            gaussian_curvature(scaled).values,
            gaussian_curvature(sphere2).values / s ** 2,
            rtol=1e-9,
        )
