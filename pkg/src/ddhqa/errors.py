"""Exception types shared across the toolkit."""


class DDHQAError(Exception):
    """Base class for all toolkit errors."""


class MeshParseError(DDHQAError):
    """Malformed record in a mesh file. Carries the offending line number."""

    def __init__(self, path, line, message):
        self.path = str(path)
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class EmptyMeshError(DDHQAError):
    """Parsed file contains no usable faces."""


class EmptyFieldError(DDHQAError):
    """No mesh element qualified for the requested geometry attribute."""


class DegenerateInputError(DDHQAError):
    """Input has no variation (or is otherwise unusable) for the requested fit
    or metric, where proceeding would silently produce NaN."""


class ZeroAreaError(DDHQAError):
    """All faces incident to a vertex are degenerate."""


class DimensionMismatchError(DDHQAError):
    """Feature vector length does not match the declared dimension."""


class TrainingDivergedError(DDHQAError):
    """Training loss became non-finite; typically the learning rate is too
    high for the data scale."""


class JoinMismatchError(DDHQAError):
    """Dataset files disagree on the set of ids. Carries the orphans."""

    def __init__(self, message, orphans):
        self.orphans = dict(orphans)
        detail = "; ".join(
            f"{side}: {sorted(ids)}" for side, ids in self.orphans.items() if ids
        )
        super().__init__(f"{message} ({detail})")


class ArtifactVersionError(DDHQAError):
    """Serialized artifact carries an unsupported format version."""
