"""Tiling matroids on the upward cells of the triangular grid T_n."""

from tilingmatroid.errors import (
    EmptyInputError,
    InvalidParameterError,
    PreconditionError,
    ResourceLimitError,
    TilingMatroidError,
)
from tilingmatroid.matroid import MatroidContext
from tilingmatroid.tiler import HoleyRegion, Tile, TileKind, Tiling
from tilingmatroid.trigrid import CellSet, DownCell, LatticeTri, UpCell

__version__ = "0.1.0"

__all__ = [
    "CellSet",
    "DownCell",
    "EmptyInputError",
    "HoleyRegion",
    "InvalidParameterError",
    "LatticeTri",
    "MatroidContext",
    "PreconditionError",
    "ResourceLimitError",
    "Tile",
    "TileKind",
    "Tiling",
    "TilingMatroidError",
    "UpCell",
]
