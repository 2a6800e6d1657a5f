"""Bundled example problems and their encoding matrices."""

from __future__ import annotations

from importlib.resources import files
from pathlib import Path

from .code import EncodingMatrix, load_matrix
from .problem import IndexCodingProblem, load_problem

EXAMPLES = ("example1", "example2", "example3", "example4", "example5", "example6")


def path(name: str) -> Path:
    return Path(str(files("icpsk") / "data" / f"{name}.json"))


def problem(name: str) -> IndexCodingProblem:
    return load_problem(path(name))


def matrix(name: str) -> EncodingMatrix:
    """``matrix("example5_L2")`` or ``matrix("example1")`` (the single code)."""
    p = path(name if "_L" in name else f"{name}_L")
    return load_matrix(p)
