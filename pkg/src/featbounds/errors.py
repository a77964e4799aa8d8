"""Exception types shared across the package."""


class FeatboundsError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(FeatboundsError, ValueError):
    """An argument is outside its documented legal range."""


class FormatError(FeatboundsError, ValueError):
    """A file is in an unsupported or corrupt format."""


class CodecError(FeatboundsError, RuntimeError):
    """JPEG encode or decode failed."""


class ParseError(FeatboundsError, ValueError):
    """A structured text file is malformed (message names the line)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(FeatboundsError, ValueError):
    """A domain invariant is violated (keypoint bounds, homography, curves)."""


class InputTooSmallError(FeatboundsError, ValueError):
    """The image is below the minimum footprint a detector can process."""


class UndefinedScoreError(FeatboundsError, ArithmeticError):
    """Repeatability is undefined: no reference keypoints in the common region."""


class ConfigError(FeatboundsError, ValueError):
    """Inconsistent or invalid run configuration."""


class DegenerateColumnError(FeatboundsError, ValueError):
    """Every score in some transformation step is missing."""
