"""Exception types shared across the package."""


class CloudcatError(Exception):
    """Base class for all library-specific errors."""


class InvalidQuaternion(CloudcatError):
    """Quaternion norm is zero (or underflows); it cannot define a rotation."""


class AllPointsCoincident(CloudcatError):
    """Every point sits at the barycenter; no frame or scale can be derived."""


class DegenerateFrame(CloudcatError):
    """Frame landmarks are collinear and no fallback candidate resolves it."""


class EigenFailure(CloudcatError):
    """Covariance matrix contains non-finite entries."""


class ConfigError(CloudcatError):
    """Inconsistent layer dimensions or invalid configuration values."""


class TrainingDiverged(CloudcatError):
    """Training loss became non-finite."""


class InvalidCount(CloudcatError):
    """Requested subsample size is outside [3, N]."""


class ZeroAreaMesh(CloudcatError):
    """Mesh has no positive-area triangle to sample from."""


class ParseError(CloudcatError):
    """An input file could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedHeader(ParseError):
    """Header, counts line, or a numeric token is malformed."""


class IndexOutOfRange(ParseError):
    """A face references a vertex index outside the declared range."""


class TruncatedFile(ParseError):
    """File ended before the declared vertex/face counts were satisfied."""


class NonNumericToken(ParseError):
    """A coordinate token could not be parsed as a number."""
