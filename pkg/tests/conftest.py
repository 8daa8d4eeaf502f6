import numpy as np
import pytest

from ddhqa.synthetic import icosphere, triangulated_cube

CUBE_OBJ = """\
# triangulated unit cube
v 0 0 0
v 1 0 0
v 1 1 0
v 0 1 0
v 0 0 1
v 1 0 1
v 1 1 1
v 0 1 1
f 1 4 3
f 1 3 2
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 3 4 8
f 3 8 7
f 1 5 8
f 1 8 4
f 2 3 7
f 2 7 6
"""


@pytest.fixture
def cube():
    return triangulated_cube()


@pytest.fixture
def cube_obj(tmp_path):
    path = tmp_path / "cube.obj"
    path.write_text(CUBE_OBJ)
    return path


@pytest.fixture
def sphere2():
    return icosphere(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)
