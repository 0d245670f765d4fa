"""Interventional distributions from observational data via comb disintegration."""

from ._core import (
    JointState,
    ModelFile,
    NotIdentifiableError,
    ParseError,
    SurgeryError,
    comb_disintegrate,
    cut_plug,
    disintegrate,
    randcheck,
    run_cli,
)

__all__ = [
    "JointState",
    "ModelFile",
    "NotIdentifiableError",
    "ParseError",
    "SurgeryError",
    "comb_disintegrate",
    "cut_plug",
    "disintegrate",
    "randcheck",
    "run_cli",
]
