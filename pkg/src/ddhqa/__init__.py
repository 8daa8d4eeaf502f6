"""Geometry-aware no-reference quality assessment for dynamic digital humans.

The toolkit extracts statistical geometry features from triangle meshes,
fuses them with precomputed per-clip video features, trains a small
regression head to predict quality scores, and evaluates predictions
against subjective scores with rank-correlation criteria.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    ArtifactVersionError,
    DDHQAError,
    DegenerateInputError,
    DimensionMismatchError,
    EmptyFieldError,
    EmptyMeshError,
    JoinMismatchError,
    MeshParseError,
    TrainingDivergedError,
    ZeroAreaError,
)
from .mesh import TriangleMesh, face_geometry, parse_mesh, write_obj  # noqa: F401
from .geometry import (  # noqa: F401
    ScalarField,
    dihedral_angles,
    gaussian_curvature,
    vertex_areas,
    voronoi_area,
)
from .fitting import (  # noqa: F401
    fit_aggd,
    fit_basic,
    fit_gamma,
    fit_ggd,
    shift_to_positive,
    zscore,
)
from .features import (  # noqa: F401
    GF_DIM,
    GF_SLOT_NAMES,
    GeometryFeatureVector,
    extract_geometry_features,
)
from .fusion import (  # noqa: F401
    ClipFeatureRecord,
    FeatureStandardizer,
    RegressionHead,
    TrainingConfig,
    adam_step,
    forward,
    fuse,
    predict_quality,
    train,
)
from .metrics import krcc, logistic_remap, plcc, rmse, srcc  # noqa: F401
from .evaluation import (  # noqa: F401
    CrossValConfig,
    EvaluationReport,
    FoldSpec,
    cyclic_clip_sample,
    kfold_split,
    run_cross_validation,
)
from .dataio import (  # noqa: F401
    VideoSample,
    assemble_dataset,
    load_head,
    read_clip_features,
    read_gf_records,
    read_mos_csv,
    save_head,
    write_clip_features,
    write_gf_records,
)
