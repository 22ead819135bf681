"""Dotted module paths used as node and file identifiers."""

from __future__ import annotations

import re
from dataclasses import dataclass

_IDENTIFIER = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True, order=True)
class ModulePath:
    """A dotted path such as ``models.Item``.

    Segments must be valid identifiers and the path must be non-empty.
    Ordering and equality follow the segment tuple, which matches the
    lexicographic order of the dotted rendering.
    """

    segments: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.segments:
            raise ValueError("module path must have at least one segment")
        for seg in self.segments:
            if not _IDENTIFIER.match(seg):
                raise ValueError(f"invalid module path segment: {seg!r}")

    @classmethod
    def parse(cls, dotted: str) -> "ModulePath":
        return cls(tuple(dotted.split(".")))

    def child(self, segment: str) -> "ModulePath":
        return ModulePath(self.segments + (segment,))

    def parent(self) -> "ModulePath | None":
        if len(self.segments) == 1:
            return None
        return ModulePath(self.segments[:-1])

    def __str__(self) -> str:
        return ".".join(self.segments)


def class_path(module: ModulePath, class_name: str) -> ModulePath:
    """Identifier of a class defined in ``module``.

    A class whose name repeats the final path segment collapses onto the
    module path itself, so ``models/Item.py::Item`` and ``models.py::Item``
    are both addressed as ``models.Item``.
    """
    if module.segments[-1] == class_name:
        return module
    return module.child(class_name)
