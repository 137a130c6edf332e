"""Exact verification toolkit for partial compact quantum groups."""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .scalars import Scalar, as_scalar, parse_scalar, sqrt
from .grading import BigradedSpace, BlockMap, Square
from .partial_hopf import PartialHopfData, SchemaError, verify_all
from .report import VerificationReport

__all__ = [
    "BigradedSpace", "BlockMap", "PartialHopfData", "Scalar", "SchemaError", "Square",
    "VerificationReport", "__version__", "as_scalar", "parse_scalar", "sqrt", "verify_all",
]
