"""Directional H2 matrices for Helmholtz boundary integral operators."""

from ._core import (
    CapExceeded,
    DH2Matrix,
    DimensionMismatch,
    Error,
    InconsistentOrientation,
    IndexOutOfRange,
    InvalidParameter,
    IoError,
    Mesh,
    OpenSurface,
    ParseError,
    assemble,
    assemble_dense,
    cube_mesh,
    error_frobenius,
    error_spectral,
    kappa_from_rule,
    load_mesh,
    recompress,
    sphere_mesh,
)

__all__ = [
    "CapExceeded",
    "DH2Matrix",
    "DimensionMismatch",
    "Error",
    "InconsistentOrientation",
    "IndexOutOfRange",
    "InvalidParameter",
    "IoError",
    "Mesh",
    "OpenSurface",
    "ParseError",
    "assemble",
    "assemble_dense",
    "cube_mesh",
    "error_frobenius",
    "error_spectral",
    "kappa_from_rule",
    "load_mesh",
    "recompress",
    "sphere_mesh",
]
