"""Content-addressed on-disk store for reduced Groebner bases.

One file per basis; the file name is the SHA-256 of the canonical description
of (field, weights, shifts, order, generators) and the content is one
serialized element per line.  A loaded basis must reduce every generator to
zero before it is used; a damaged file is recomputed and rewritten.
"""

from __future__ import annotations

import hashlib
import os
import tempfile
import threading
from pathlib import Path

from . import module


class GBCache:
    def __init__(self, directory: str | os.PathLike):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self.hits = 0
        self.misses = 0
        self._lock = threading.Lock()

    @staticmethod
    def key(sub: module.Submodule) -> str:
        F = sub.ambient
        lines = [
            f"field {F.ring.field.label()}",
            f"variables {' '.join(F.ring.variable_names)}",
            f"weights {' '.join(map(str, F.ring.weights))}",
            f"shifts {' '.join(map(str, F.shifts))}",
            "order top-wgrevlex",
        ]
        lines += sorted(g.serialize() for g in sub.generators)
        return hashlib.sha256("\n".join(lines).encode()).hexdigest()

    def fetch(self, sub: module.Submodule, compute) -> module.GroebnerBasis:
        from .dsl import ParseError, parse_serialized_element

        path = self.directory / self.key(sub)
        if path.exists():
            try:
                F = sub.ambient
                elems = [parse_serialized_element(ln, F) for ln in path.read_text().splitlines() if ln.strip()]
                gb = module.basis_from_elements(F, elems)
                if all(module.normal_form(g, gb).is_zero() for g in sub.generators):
                    with self._lock:
                        self.hits += 1
                    return gb
            except (OSError, ParseError, ValueError):
                pass
        gb = compute()
        with self._lock:
            self.misses += 1
        text = "".join(e.serialize() + "\n" for e in gb.elements)
        fd, tmp = tempfile.mkstemp(dir=self.directory)
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
        return gb
