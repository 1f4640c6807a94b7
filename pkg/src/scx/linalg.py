"""Sparse exact linear algebra over F2, Laurent, and rational scalars.

Ranks of Laurent matrices are taken exactly by eliminating over the
rational function field (rank is invariant under the field extension to
the Novikov field); a truncated-window elimination is provided purely as
an independent cross-check.

Pivot rule everywhere: smallest column index, then (over Laurent-like
scalars) minimal T-order, then smallest row index.  This makes every
returned basis deterministic.
"""

from __future__ import annotations

from .fields import LaurentPoly, NovikovWindow, RationalFn

F2 = "F2"
LAURENT = "laurent"
RATIONAL = "rational"

_KINDS = (F2, LAURENT, RATIONAL)


def _scalar_zero(kind):
    if kind == F2:
        return 0
    if kind == LAURENT:
        return LaurentPoly.zero()
    return RationalFn.zero()


def _scalar_one(kind):
    if kind == F2:
        return 1
    if kind == LAURENT:
        return LaurentPoly.one()
    return RationalFn.one()


def _scalar_is_zero(kind, a) -> bool:
    if kind == F2:
        return a == 0
    return a.is_zero()


class SparseMatrix:
    """Immutable-by-convention sparse matrix with a scalar kind tag."""

    __slots__ = ("kind", "rows", "cols", "data")

    def __init__(self, kind: str, rows: int, cols: int, entries=()):
        if kind not in _KINDS:
            raise ValueError(f"unknown scalar kind {kind!r}")
        if rows < 0 or cols < 0:
            raise ValueError("negative dimensions")
        self.kind = kind
        self.rows = rows
        self.cols = cols
        data = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise ValueError(f"entry ({i}, {j}) out of range {rows}x{cols}")
            if kind == F2:
                v = int(v) & 1
            if _scalar_is_zero(kind, v):
                continue
            if (i, j) in data:
                raise ValueError(f"duplicate entry at ({i}, {j})")
            data[(i, j)] = v
        self.data = data

    # -- constructors

    @classmethod
    def zero(cls, kind: str, rows: int, cols: int) -> "SparseMatrix":
        return cls(kind, rows, cols)

    @classmethod
    def identity(cls, kind: str, n: int) -> "SparseMatrix":
        one = _scalar_one(kind)
        return cls(kind, n, n, [(i, i, one) for i in range(n)])

    # -- accessors

    def entries(self):
        return sorted(((i, j, v) for (i, j), v in self.data.items()))

    def get(self, i: int, j: int):
        return self.data.get((i, j), _scalar_zero(self.kind))

    def is_zero(self) -> bool:
        return not self.data

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            self.kind, self.cols, self.rows, [(j, i, v) for (i, j), v in self.data.items()]
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseMatrix)
            and self.kind == other.kind
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        return f"SparseMatrix({self.kind}, {self.rows}x{self.cols}, {len(self.data)} entries)"

    # -- arithmetic

    def add(self, other: "SparseMatrix") -> "SparseMatrix":
        self._check_compatible(other, same_shape=True)
        acc = dict(self.data)
        for key, v in other.data.items():
            if key in acc:
                s = (acc[key] ^ v) if self.kind == F2 else acc[key] + v
                if _scalar_is_zero(self.kind, s):
                    del acc[key]
                else:
                    acc[key] = s
            else:
                acc[key] = v
        m = SparseMatrix(self.kind, self.rows, self.cols)
        m.data.update(acc)
        return m

    def mul(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.kind != other.kind:
            raise ValueError("mixed scalar kinds")
        if self.cols != other.rows:
            raise ValueError(
                f"dimension mismatch {self.rows}x{self.cols} * {other.rows}x{other.cols}"
            )
        by_row = {}
        for (k, j), v in other.data.items():
            by_row.setdefault(k, []).append((j, v))
        acc = {}
        for (i, k), a in self.data.items():
            for j, b in by_row.get(k, ()):
                key = (i, j)
                if self.kind == F2:
                    acc[key] = acc.get(key, 0) ^ (a & b)
                else:
                    prod = a * b
                    acc[key] = acc[key] + prod if key in acc else prod
        m = SparseMatrix(self.kind, self.rows, other.cols)
        for key, v in acc.items():
            if not _scalar_is_zero(self.kind, v):
                m.data[key] = v
        return m

    def apply(self, vec: dict) -> dict:
        """Apply to a sparse column vector {index: scalar}."""
        out = {}
        for (i, j), a in self.data.items():
            if j in vec:
                if self.kind == F2:
                    out[i] = out.get(i, 0) ^ (a & vec[j])
                else:
                    prod = a * vec[j]
                    out[i] = out[i] + prod if i in out else prod
        return {i: v for i, v in out.items() if not _scalar_is_zero(self.kind, v)}

    def _check_compatible(self, other, same_shape=False):
        if self.kind != other.kind:
            raise ValueError("mixed scalar kinds")
        if same_shape and (self.rows != other.rows or self.cols != other.cols):
            raise ValueError("shape mismatch")

    def to_rational(self) -> "SparseMatrix":
        """Embed a Laurent (or F2) matrix into the rational function field."""
        if self.kind == RATIONAL:
            return self
        out = SparseMatrix(RATIONAL, self.rows, self.cols)
        for (i, j), v in self.data.items():
            if self.kind == F2:
                out.data[(i, j)] = RationalFn.one()
            else:
                out.data[(i, j)] = RationalFn.from_laurent(v)
        return out


# ---------------------------------------------------------------------------
# F2 elimination on int bitmask rows (bit j of row i = entry (i, j))


def _f2_rows(m: SparseMatrix) -> list[int]:
    rows = [0] * m.rows
    for (i, j) in m.data:
        rows[i] |= 1 << j
    return rows


def _f2_rref(rows: list[int], cols: int) -> tuple[list[int], list[tuple[int, int]]]:
    """Reduced row echelon form; returns (rows, [(pivot_row, pivot_col)])."""
    work = list(rows)
    pivots = []
    r = 0
    for c in range(cols):
        pr = -1
        for k in range(r, len(work)):
            if (work[k] >> c) & 1:
                pr = k
                break
        if pr < 0:
            continue
        work[r], work[pr] = work[pr], work[r]
        for k in range(len(work)):
            if k != r and ((work[k] >> c) & 1):
                work[k] ^= work[r]
        pivots.append((r, c))
        r += 1
        if r == len(work):
            break
    return work, pivots


# ---------------------------------------------------------------------------
# Generic dense elimination over an exact field


class _FieldOps:
    kind = None

    def is_zero(self, a):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def order_key(self, a):
        """Pivot preference among nonzero candidates (lower is better)."""
        return 0


class _RationalOps(_FieldOps):
    kind = RATIONAL
    zero = RationalFn.zero()
    one = RationalFn.one()

    def is_zero(self, a):
        return a.is_zero()

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inv()

    def order_key(self, a):
        return a.t_order()


def _dense(m: SparseMatrix, ops) -> list[list]:
    grid = [[ops.zero] * m.cols for _ in range(m.rows)]
    for (i, j), v in m.data.items():
        grid[i][j] = v
    return grid


def _generic_rref(grid: list[list], cols: int, ops) -> tuple[list[list], list[tuple[int, int]]]:
    work = [row[:] for row in grid]
    pivots = []
    r = 0
    for c in range(cols):
        best = -1
        best_key = None
        for k in range(r, len(work)):
            v = work[k][c]
            if not ops.is_zero(v):
                key = ops.order_key(v)
                if best < 0 or key < best_key:
                    best, best_key = k, key
        if best < 0:
            continue
        work[r], work[best] = work[best], work[r]
        inv = ops.inv(work[r][c])
        work[r] = [ops.mul(inv, v) for v in work[r]]
        for k in range(len(work)):
            if k != r and not ops.is_zero(work[k][c]):
                factor = work[k][c]
                work[k] = [
                    ops.add(work[k][j], ops.mul(factor, work[r][j])) for j in range(cols)
                ]
        pivots.append((r, c))
        r += 1
        if r == len(work):
            break
    return work, pivots


def _rref(m: SparseMatrix):
    """Dispatch to the right elimination; returns (repr, pivots, backend)."""
    if m.kind == F2:
        rows = _f2_rows(m)
        work, pivots = _f2_rref(rows, m.cols)
        return work, pivots, F2
    ops = _RationalOps()
    grid = _dense(m.to_rational(), ops)
    work, pivots = _generic_rref(grid, m.cols, ops)
    return work, pivots, RATIONAL


# ---------------------------------------------------------------------------
# Public kernels


def rank(m: SparseMatrix) -> int:
    _, pivots, _ = _rref(m)
    return len(pivots)


def kernel_basis(m: SparseMatrix) -> list[dict]:
    """Basis of the null space as sparse column vectors {index: scalar}.

    Scalars are F2 bits or RationalFn (Laurent matrices are eliminated
    over the fraction field).  Count always equals cols - rank.
    """
    work, pivots, backend = _rref(m)
    pivot_cols = {c: r for r, c in pivots}
    free_cols = [c for c in range(m.cols) if c not in pivot_cols]
    basis = []
    for f in free_cols:
        if backend == F2:
            vec = {f: 1}
            for r, c in pivots:
                if (work[r] >> f) & 1:
                    vec[c] = 1
        else:
            one = RationalFn.one()
            vec = {f: one}
            for r, c in pivots:
                v = work[r][f]
                if not v.is_zero():
                    vec[c] = v
        basis.append(vec)
    return basis


def solve_in_image(m: SparseMatrix, b: dict):
    """Solve m.x = b; returns a sparse vector or None when b is not in im(m).

    ``b`` is a sparse column vector over row indices.  The deterministic
    pivot rule fixes which preimage is returned (free variables are 0).
    """
    for i in b:
        if not (0 <= i < m.rows):
            raise ValueError(f"vector index {i} out of range for {m.rows} rows")
    if m.kind == F2:
        rows = _f2_rows(m)
        aug = [rows[i] | (((b.get(i, 0)) & 1) << m.cols) for i in range(m.rows)]
        work, pivots = _f2_rref(aug, m.cols + 1)
        for r, c in pivots:
            if c == m.cols:
                return None
        x = {}
        for r, c in pivots:
            if (work[r] >> m.cols) & 1:
                x[c] = 1
        return x
    ops = _RationalOps()
    grid = _dense(m.to_rational(), ops)
    for i in range(m.rows):
        v = b.get(i, RationalFn.zero())
        if isinstance(v, LaurentPoly):
            v = RationalFn.from_laurent(v)
        elif isinstance(v, int):
            v = RationalFn.one() if v & 1 else RationalFn.zero()
        grid[i].append(v)
    work, pivots = _generic_rref(grid, m.cols + 1, ops)
    for r, c in pivots:
        if c == m.cols:
            return None
    x = {}
    for r, c in pivots:
        v = work[r][m.cols]
        if not v.is_zero():
            x[c] = v
    return x


def reduced_echelon(m: SparseMatrix) -> tuple[SparseMatrix, list[tuple[int, int]]]:
    """Reduced row echelon form and its (row, col) pivots.

    F2 matrices come back over F2; Laurent matrices over the rational
    function field (pivots normalized to 1).
    """
    work, pivots, backend = _rref(m)
    if backend == F2:
        out = SparseMatrix(F2, m.rows, m.cols)
        for i, row in enumerate(work):
            j = 0
            while row:
                if row & 1:
                    out.data[(i, j)] = 1
                row >>= 1
                j += 1
        return out, pivots
    out = SparseMatrix(RATIONAL, m.rows, m.cols)
    for i, row in enumerate(work):
        for j, v in enumerate(row):
            if not v.is_zero():
                out.data[(i, j)] = v
    return out, pivots


def image_basis(m: SparseMatrix) -> list[dict]:
    """Columns of m at pivot positions (a deterministic image basis)."""
    _, pivots, _ = _rref(m)
    cols = []
    for _, c in pivots:
        vec = {}
        for (i, j), v in m.data.items():
            if j == c:
                vec[i] = v
        cols.append(vec)
    return cols


def window_rank(m: SparseMatrix, width: int) -> int:
    """Rank by fraction-free elimination on Novikov windows.

    Cross-check only.  Bareiss-style updates keep every stored entry an
    exact Laurent polynomial (a minor of the input, with row contents
    normalized by their gcd and T-offset), so a zero bit pattern
    certifies a true zero.  Intermediate products use double-width
    exact accumulators; a stored entry that no longer fits the window
    raises WindowOverflowError (the width is too small) rather than
    risking a corrupted verdict.  Pivots take the minimal T-order in
    the lowest unfinished column.
    """
    if m.kind not in (LAURENT, F2):
        raise ValueError("window elimination applies to Laurent matrices")
    from .fields import WindowOverflowError, poly_divmod, poly_mul

    # entries held as exact (origin, bits) pairs, normalized bits odd
    def norm(origin: int, bits: int):
        if bits == 0:
            return (0, 0)
        low = (bits & -bits).bit_length() - 1
        return (origin + low, bits >> low)

    def store(origin: int, bits: int):
        if bits.bit_length() > width:
            raise WindowOverflowError(
                f"entry of support width {bits.bit_length()} exceeds window {width}"
            )
        return norm(origin, bits)

    grid = [[(0, 0)] * m.cols for _ in range(m.rows)]
    for (i, j), v in m.data.items():
        if m.kind == F2:
            grid[i][j] = (0, 1)
        else:
            NovikovWindow.from_laurent(v, width)  # precondition check
            grid[i][j] = (v.offset, v.bits)

    prev = (0, 1)
    r = 0
    for c in range(m.cols):
        best = -1
        best_key = None
        for k in range(r, m.rows):
            o, bits = grid[k][c]
            if bits:
                if best < 0 or o < best_key:
                    best, best_key = k, o
        if best < 0:
            continue
        grid[r], grid[best] = grid[best], grid[r]
        po, pbits = grid[r][c]
        for k in range(r + 1, m.rows):
            fo, fbits = grid[k][c]
            if fbits == 0:
                # still divide through by prev to keep the minor form
                row = grid[k]
                new_row = []
                for (o, bits) in row:
                    if bits == 0:
                        new_row.append((0, 0))
                        continue
                    scaled = poly_mul(bits, pbits)
                    q, rem = poly_divmod(scaled, prev[1])
                    if rem:
                        raise AssertionError("fraction-free division failed")
                    new_row.append(store(o + po - prev[0], q))
                grid[k] = new_row
                continue
            new_row = []
            for j in range(m.cols):
                ao, abits = grid[k][j]
                bo, bbits = grid[r][j]
                # pivot*a + factor*b over a common T-offset, exactly
                t1 = (po + ao, poly_mul(pbits, abits)) if abits else None
                t2 = (fo + bo, poly_mul(fbits, bbits)) if bbits else None
                if t1 is None and t2 is None:
                    new_row.append((0, 0))
                    continue
                if t1 is None:
                    so, sbits = t2
                elif t2 is None:
                    so, sbits = t1
                else:
                    lo = min(t1[0], t2[0])
                    sbits = (t1[1] << (t1[0] - lo)) ^ (t2[1] << (t2[0] - lo))
                    so = lo
                if sbits == 0:
                    new_row.append((0, 0))
                    continue
                q, rem = poly_divmod(sbits, prev[1])
                if rem:
                    raise AssertionError("fraction-free division failed")
                new_row.append(store(so - prev[0], q))
            grid[k] = new_row
        prev = (po, pbits)
        r += 1
        if r == m.rows:
            break
    return r


def span_rank(kind: str, dim: int, vectors: list[dict]) -> int:
    """Rank of a list of sparse vectors inside a dim-dimensional space."""
    m = SparseMatrix(kind, dim, len(vectors))
    for j, vec in enumerate(vectors):
        for i, v in vec.items():
            if not _scalar_is_zero(kind, v):
                m.data[(i, j)] = v
    return rank(m)
