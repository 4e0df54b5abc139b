"""Symbolic names of the indecomposable D-D-bimodules and their text grammar.

Grammar (shell-safe, round-trippable)::

    D | DxD | ProjInj | W:k | S:k | N:k | M:k | B:k:p/q
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from gmpy2 import mpq

from .linalg import format_scalar, scalar

SHAPES = ("M", "N", "S", "W")


class LabelError(ValueError):
    pass


@dataclass(frozen=True)
class StringLabel:
    shape: str
    k: int

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise LabelError(f"unknown string shape {self.shape!r}")
        if self.k < 0:
            raise LabelError("valley count must be nonnegative")

    @property
    def dim(self) -> int:
        return 2 * self.k + {"M": 3, "N": 2, "S": 2, "W": 1}[self.shape]

    @property
    def is_k_split(self) -> bool:
        return self.k == 0 and self.shape != "M"

    def __str__(self) -> str:
        return f"{self.shape}:{self.k}"


@dataclass(frozen=True)
class BandLabel:
    length: int
    eigenvalue: mpq

    def __post_init__(self):
        if self.length < 1:
            raise LabelError("band length must be positive")
        object.__setattr__(self, "eigenvalue", scalar(self.eigenvalue))
        if self.eigenvalue == 0:
            raise LabelError("band eigenvalue must be nonzero")

    @property
    def dim(self) -> int:
        return 2 * self.length

    is_k_split = False

    def __str__(self) -> str:
        return f"B:{self.length}:{format_scalar(self.eigenvalue)}"


@dataclass(frozen=True)
class ProjInjLabel:
    dim = 4
    is_k_split = True

    def __str__(self) -> str:
        return "ProjInj"


@dataclass(frozen=True)
class RegularLabel:
    dim = 2
    is_k_split = False

    def __str__(self) -> str:
        return "D"


Label = StringLabel | BandLabel | ProjInjLabel | RegularLabel

ProjInj = ProjInjLabel()
Regular = RegularLabel()


def W(k: int) -> StringLabel:
    return StringLabel("W", k)


def S(k: int) -> StringLabel:
    return StringLabel("S", k)


def N(k: int) -> StringLabel:
    return StringLabel("N", k)


def M(k: int) -> StringLabel:
    return StringLabel("M", k)


def Band(length: int, eigenvalue) -> BandLabel:
    return BandLabel(length, scalar(eigenvalue))


_KIND_ORDER = {"M": 0, "N": 1, "S": 2, "W": 3}


def label_key(label: Label) -> tuple:
    """Fixed tie-break order: M, N, S, W, bands, ProjInj, Regular."""
    if isinstance(label, StringLabel):
        return (_KIND_ORDER[label.shape], label.k, 0)
    if isinstance(label, BandLabel):
        return (4, label.length, label.eigenvalue)
    if isinstance(label, ProjInjLabel):
        return (5, 0, 0)
    return (6, 0, 0)


def candidate_order(label: Label) -> tuple:
    """Dimension descending, then :func:`label_key`."""
    return (-label.dim, label_key(label))


_STRING_RE = re.compile(r"^([WSNM]):(\d+)$")
_BAND_RE = re.compile(r"^B:(\d+):(-?\d+(?:/\d+)?)$")


def parse_label(text: str) -> Label:
    text = text.strip()
    if text == "D":
        return Regular
    if text in ("DxD", "ProjInj"):
        return ProjInj
    m = _STRING_RE.match(text)
    if m:
        return StringLabel(m.group(1), int(m.group(2)))
    m = _BAND_RE.match(text)
    if m:
        num = m.group(2)
        if num.endswith("/0"):
            raise LabelError(f"zero denominator in {text!r}")
        return BandLabel(int(m.group(1)), mpq(num))
    raise LabelError(f"cannot parse label {text!r}")


def format_multiset(labels) -> str:
    """``"ProjInj + W:0"``; the empty multiset prints as ``"0"``."""
    labels = sorted(labels, key=candidate_order)
    return " + ".join(str(x) for x in labels) if labels else "0"
