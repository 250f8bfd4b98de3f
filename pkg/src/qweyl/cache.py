"""On-disk cache for generator matrices and the derived grading convention.

One file per matrix key (n, N, kind, i, r, lambda).  The format is plain
text: a header line `n N kind i r lambda rows cols` with lambda written as a
comma-joined tuple, then one line `row col <polynomial>` per nonzero entry.
Writes go through a temp file and an atomic rename, and existing files are
never rewritten, so concurrent fills of the same key are safe.
"""

from __future__ import annotations

import json
import os
import tempfile

from .braiding import GradingConvention
from .qalg import pparse, ptext
from .tensor_rep import OperatorMatrix, content_shift

CONVENTION_FILE = "convention.json"


class MatrixDiskCache:
    def __init__(self, root):
        self.root = str(root)
        os.makedirs(self.root, exist_ok=True)

    def _path(self, mod, kind, i, r, lam):
        name = "g_%dx%d_%s%d_r%d__%s.mat" % (
            mod.n, mod.N, kind, i, r, "-".join(map(str, lam)))
        return os.path.join(self.root, name)

    def load(self, mod, kind, i, r, lam):
        path = self._path(mod, kind, i, r, lam)
        try:
            with open(path, encoding="ascii") as fh:
                lines = fh.read().splitlines()
        except FileNotFoundError:
            return None
        if not lines:
            raise ValueError("cache file %s is empty" % path)
        head = lines[0].split()
        if len(head) != 8:
            raise ValueError("cache file %s has a malformed header" % path)
        dst = content_shift(lam, kind, i, r)
        want = [str(mod.n), str(mod.N), kind, str(i), str(r),
                ",".join(map(str, lam)), str(mod.dim(dst)), str(mod.dim(lam))]
        if head != want:
            raise ValueError("cache file %s does not match the request "
                             "(header %s, wanted %s)" % (path, head, want))
        cols = [{} for _ in range(mod.dim(lam))]
        for ln in lines[1:]:
            if not ln.strip():
                continue
            row_s, col_s, poly_s = ln.split(None, 2)
            row, col = int(row_s), int(col_s)
            if not (0 <= row < mod.dim(dst) and 0 <= col < mod.dim(lam)):
                raise ValueError("cache file %s has an out-of-range entry "
                                 "(%d, %d)" % (path, row, col))
            poly = pparse(poly_s)
            if poly:
                cols[col][row] = poly
        return OperatorMatrix(mod, lam, dst, cols)

    def store(self, mod, kind, i, r, lam, op):
        path = self._path(mod, kind, i, r, lam)
        if os.path.exists(path):
            return
        header = "%d %d %s %d %d %s %d %d" % (
            mod.n, mod.N, kind, i, r, ",".join(map(str, lam)),
            op.nrows, op.ncols)
        body = ["%d %d %s" % (row, col, ptext(v)) for row, col, v in op.entries() if v]
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="ascii") as fh:
                fh.write("\n".join([header] + body) + "\n")
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def clear(self):
        """Remove every cache artifact; returns the number of files removed."""
        removed = 0
        for name in sorted(os.listdir(self.root)):
            if name.endswith(".mat") or name == CONVENTION_FILE:
                os.unlink(os.path.join(self.root, name))
                removed += 1
        return removed

    def stats(self):
        files = 0
        total = 0
        for name in os.listdir(self.root):
            if name.endswith(".mat") or name == CONVENTION_FILE:
                files += 1
                total += os.path.getsize(os.path.join(self.root, name))
        return {"root": self.root, "files": files, "bytes": total}


def save_convention(root, conv, report_dict=None):
    """Persist the chosen grading convention (and optionally the derivation
    report payload) so later runs can reuse it verbatim."""
    os.makedirs(root, exist_ok=True)
    payload = {"convention": conv.as_dict()}
    if report_dict is not None:
        payload["report"] = report_dict
    path = os.path.join(root, CONVENTION_FILE)
    fd, tmp = tempfile.mkstemp(dir=root, suffix=".tmp")
    with os.fdopen(fd, "w", encoding="ascii") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)
    return path


def load_convention(root):
    """Returns (GradingConvention, stored report dict or None), or None if
    nothing was persisted."""
    path = os.path.join(root, CONVENTION_FILE)
    try:
        with open(path, encoding="ascii") as fh:
            payload = json.load(fh)
    except FileNotFoundError:
        return None
    d = payload["convention"]
    conv = GradingConvention(d["c1"], d["c2"], d["eps"], d["c"])
    return conv, payload.get("report")
