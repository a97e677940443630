"""Facet-file interchange format.

Plain text, one facet per line as whitespace-separated positive
integers.  Everything after ``#`` is a comment; blank lines are
skipped.  This is the only on-disk format the CLI speaks.
"""

from __future__ import annotations

import io
from pathlib import Path
from typing import Union

from .complexes import SimplicialComplex, as_face


class FacetFileError(ValueError):
    """Parse failure, carrying the offending 1-based line number."""

    def __init__(self, message: str, line: int = None, path=None):
        self.line = line
        self.path = path
        where = f"{path or '<stream>'}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}")


def read_facets(source: Union[str, Path, io.TextIOBase]) -> list:
    """Parse a facet file into a list of faces (may be empty)."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            return _parse(fh, str(source))
    return _parse(source, getattr(source, "name", None))


def _parse(fh, path) -> list:
    facets = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            verts = [int(tok) for tok in line.split()]
        except ValueError:
            raise FacetFileError(f"not an integer list: {line!r}", lineno, path)
        if any(v <= 0 for v in verts):
            raise FacetFileError(f"vertex ids must be positive: {line!r}", lineno, path)
        try:
            facets.append(as_face(verts))
        except ValueError as exc:
            raise FacetFileError(str(exc), lineno, path)
    return facets


def read_complex(source) -> SimplicialComplex:
    """Read a facet file and build its downward closure."""
    facets = read_facets(source)
    if not facets:
        raise FacetFileError("no facets found",
                             path=source if isinstance(source, (str, Path)) else None)
    return SimplicialComplex.from_facets(facets)


def write_facets(target: Union[str, Path, io.TextIOBase], K: SimplicialComplex,
                 header: str = None) -> None:
    """Write the facets of a complex, one per line, optional # header."""
    if isinstance(target, (str, Path)):
        with open(target, "w") as fh:
            write_facets(fh, K, header)
        return
    if header:
        for line in header.splitlines():
            target.write(f"# {line}\n")
    for f in K.facets():
        target.write(" ".join(map(str, f)) + "\n")
