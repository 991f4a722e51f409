"""File formats: flag and biflag JSON, exact-rational CSV, the flag cache.

Field entries are written as integers for prime fields and as coefficient
lists (low degree first) otherwise.  Rationals are written as "num/den"
strings, or "num" when the denominator is 1; never as floats.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence, TextIO

from . import __version__
from .biflag import BiFlag, biflag_from_window, biflag_standard
from .errors import DimensionMismatch, InvalidFlag
from .flag import Flag, cell_of
from .gfq import FieldSpec, field_new
from .kernel import GramMatrix
from .linalg import Subspace
from .perm import inversions, poincare_sum


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def _rows_out(spec: FieldSpec, sub: Subspace) -> list:
    return [[spec.decode(c) for c in row] for row in sub.basis]


def _subspace_in(spec: FieldSpec, n: int, rows, expect_dim: int) -> Subspace:
    rows = [tuple(spec.encode(c) for c in row) for row in rows]
    if any(len(r) != n for r in rows):
        raise DimensionMismatch(f"rows must have length {n}")
    sub = Subspace.span(spec, n, rows)
    if sub.dim != expect_dim:
        raise InvalidFlag(f"expected a {expect_dim}-dimensional subspace, rows span {sub.dim}")
    return sub


def flag_to_json(flag: Flag) -> dict:
    return {
        "q": flag.spec.q,
        "n": flag.n,
        "subspaces": [_rows_out(flag.spec, s) for s in flag.subspaces],
    }


def flag_from_json(obj: dict) -> Flag:
    spec = field_new(int(obj["q"]))
    n = int(obj["n"])
    subs = [_subspace_in(spec, n, rows, j) for j, rows in enumerate(obj["subspaces"], 1)]
    return Flag.from_subspaces(spec, n, subs)


def biflag_to_json(v: BiFlag) -> dict:
    return {
        "q": v.spec.q,
        "M": v.M,
        "N": v.N,
        "interior": [_rows_out(v.spec, s) for s in v.interior.subspaces],
    }


def biflag_from_json(obj: dict) -> BiFlag:
    spec = field_new(int(obj["q"]))
    M, N = int(obj["M"]), int(obj["N"])
    d = N - M
    if d <= 0:
        if obj.get("interior"):
            raise InvalidFlag("an empty window has no interior subspaces")
        return biflag_standard(spec)
    subs = [_subspace_in(spec, d, rows, a) for a, rows in enumerate(obj["interior"], 1)]
    return biflag_from_window(M, N, Flag.from_subspaces(spec, d, subs))


def load_json(path: str | Path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def dump_json(obj, fh: TextIO) -> None:
    json.dump(obj, fh, indent=2, sort_keys=True)
    fh.write("\n")


# --- CSV ---------------------------------------------------------------------------

def write_gram_csv(g: GramMatrix, fh: TextIO) -> None:
    """Header ``index,cell,0,1,...``; one row per flag, cells exact rationals."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["index", "cell"] + [str(i) for i in range(g.size)])
    for i, (label, row) in enumerate(zip(g.labels, g.entries)):
        w.writerow([i, str(cell_of(label))] + [rational_str(x) for x in row])


def read_gram_csv(fh: TextIO) -> list[list[Fraction]]:
    r = csv.reader(fh)
    next(r)
    return [[parse_rational(x) for x in row[2:]] for row in r]


def write_flags_csv(flags: Iterable[Flag], fh: TextIO) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["index", "cell", "inversions", "subspaces"])
    for i, f in enumerate(flags):
        sigma = cell_of(f)
        w.writerow([i, str(sigma), inversions(sigma),
                    json.dumps(flag_to_json(f)["subspaces"], separators=(",", ":"))])


def read_flags_csv(fh: TextIO, n: int, q: int) -> list[Flag]:
    r = csv.reader(fh)
    next(r)
    return [flag_from_json({"q": q, "n": n, "subspaces": json.loads(row[3])}) for row in r]


def cache_path(directory: str | Path, n: int, q: int) -> Path:
    """Cache files are keyed by (n, q, library version)."""
    return Path(directory) / f"flags_n{n}_q{q}_v{__version__}.csv"


def save_flag_cache(directory: str | Path, n: int, q: int, flags: Sequence[Flag]) -> Path:
    path = cache_path(directory, n, q)
    path.parent.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    write_flags_csv(flags, buf)
    path.write_text(buf.getvalue())
    return path


def load_flag_cache(directory: str | Path, n: int, q: int) -> list[Flag] | None:
    """Cached flags, or None when absent or inconsistent with the flag count."""
    path = cache_path(directory, n, q)
    if not path.exists():
        return None
    with open(path, newline="") as fh:
        flags = read_flags_csv(fh, n, q)
    if len(flags) != poincare_sum(n, q) or len(set(flags)) != len(flags):
        return None
    return flags
