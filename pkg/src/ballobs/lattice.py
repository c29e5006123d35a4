"""Integer lattices with ordered bases, and exhaustive embedding enumeration.

A lattice is presented by its Gram matrix; the generators ("vertices") are
numbered 1..k in basis order.  An embedding into Z^m is an integer matrix A
with A A^T equal to the Gram matrix, considered up to the automorphisms of
Z^m, i.e. up to permuting and flipping signs of the ambient orthonormal
basis.

The search places one vertex image at a time.  Candidates for the next row
are integer vectors with the required inner products against the rows already
placed, enumerated on the touched coordinates by the kernels in
:mod:`ballobs.kernels`, then padded with a weakly decreasing block of positive
entries on fresh coordinates.  Insisting that fresh coordinates are consumed
left to right with positive, sorted entries removes most of the
signed-permutation redundancy during the search; a full canonical form
deduplicates whatever survives at the leaves.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import InternalCheckError, LimitExceeded, UsageError
from .kernels import resolve_backend

DEFAULT_NODE_BUDGET = 10 ** 8

# int64 overflow in the kernels is impossible while diagonal norms stay small;
# rank is capped where the exact minor check stays cheap.
MAX_AMBIENT = 64
MAX_DIAGONAL = 10 ** 6
_MINOR_CHECK_MAX = 16


def _as_int_rows(rows) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in rows)


# ---------------------------------------------------------------------------
# Gram lattices


@dataclass(frozen=True)
class GramLattice:
    """A finite-rank lattice presented by a symmetric integer Gram matrix."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = _as_int_rows(self.gram)
        if not g:
            raise UsageError("lattice must have rank >= 1")
        k = len(g)
        if any(len(row) != k for row in g):
            raise UsageError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(k) for j in range(i)):
            raise UsageError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def to_array(self):
        return np.array(self.gram, dtype=np.int64)

    def reversed(self) -> "GramLattice":
        """The same lattice with the basis order reversed."""
        k = self.rank
        return GramLattice(tuple(tuple(self.gram[k - 1 - i][k - 1 - j]
                                       for j in range(k)) for i in range(k)))


def linear_lattice(weights) -> GramLattice:
    """The lattice of a weighted path: weights on the diagonal, -1 off it."""
    w = tuple(int(a) for a in weights)
    if not w:
        raise UsageError("weight list must be nonempty")
    k = len(w)
    gram = tuple(tuple(w[i] if i == j else (-1 if abs(i - j) == 1 else 0)
                       for j in range(k)) for i in range(k))
    return GramLattice(gram)


def direct_sum(l1: GramLattice, l2: GramLattice) -> GramLattice:
    """Block-diagonal sum; basis order is l1's vertices then l2's."""
    k1, k2 = l1.rank, l2.rank
    gram = []
    for i in range(k1):
        gram.append(tuple(l1.gram[i]) + (0,) * k2)
    for i in range(k2):
        gram.append((0,) * k1 + tuple(l2.gram[i]))
    return GramLattice(tuple(gram))


def leading_principal_minors(gram) -> list[int]:
    """Exact leading principal minors, by fraction-free elimination.

    Stops after a zero pivot (later minors are then irrelevant for
    definiteness checks).
    """
    m = [list(row) for row in gram]
    n = len(m)
    minors = []
    prev = 1
    for j in range(n):
        piv = m[j][j]
        minors.append(piv)
        if piv == 0:
            break
        for i in range(j + 1, n):
            for c in range(j + 1, n):
                m[i][c] = (m[i][c] * piv - m[i][j] * m[j][c]) // prev
        prev = piv
    return minors


def lattice_determinant(l: GramLattice) -> int:
    """Determinant of the Gram matrix, exact (Bareiss elimination)."""
    return _bareiss_det([list(row) for row in l.gram])


def matrix_determinant(rows) -> int:
    """Exact determinant of any square integer matrix."""
    a = [[int(x) for x in row] for row in rows]
    n = len(a)
    if any(len(row) != n for row in a):
        raise UsageError("determinant needs a square matrix")
    if n == 0:
        return 1
    return _bareiss_det(a)


def _bareiss_det(m) -> int:
    n = len(m)
    sign = 1
    prev = 1
    for j in range(n - 1):
        if m[j][j] == 0:
            for i in range(j + 1, n):
                if m[i][j] != 0:
                    m[j], m[i] = m[i], m[j]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(j + 1, n):
            for c in range(j + 1, n):
                m[i][c] = (m[i][c] * m[j][j] - m[i][j] * m[j][c]) // prev
            m[i][j] = 0
        prev = m[j][j]
    return sign * m[n - 1][n - 1]


def is_positive_definite(l: GramLattice) -> bool:
    """Positive-definiteness via leading principal minors (small ranks only;
    beyond the cutoff just the diagonal is checked)."""
    if any(l.gram[i][i] < 1 for i in range(l.rank)):
        return False
    if l.rank > _MINOR_CHECK_MAX:
        return True
    return all(d > 0 for d in leading_principal_minors(l.gram))


# ---------------------------------------------------------------------------
# Embedding matrices


def is_isometric_embedding(l: GramLattice, rows) -> bool:
    """True iff A A^T equals the Gram matrix (exact integer arithmetic)."""
    a = _as_int_rows(rows)
    if len(a) != l.rank:
        raise UsageError(f"embedding has {len(a)} rows for a rank-{l.rank} lattice")
    widths = {len(r) for r in a}
    if len(widths) != 1:
        raise UsageError("embedding rows must all have the same length")
    for i in range(len(a)):
        for j in range(i + 1):
            dot = sum(x * y for x, y in zip(a[i], a[j]))
            if dot != l.gram[i][j]:
                return False
    return True


def canonical_form(rows) -> tuple[tuple[int, ...], ...]:
    """Canonical representative of a matrix under signed column permutations.

    Each column's first nonzero entry (scanning rows top-down) is made
    positive, then columns are sorted in descending lexicographic order.  Two
    matrices lie in the same orbit of the ambient automorphism group iff their
    canonical forms are equal.
    """
    canon, _, _ = canonical_form_with_transform(rows)
    return canon


def canonical_form_with_transform(rows):
    """As :func:`canonical_form`, also returning the column permutation and
    signs used, so orthogonal data (e.g. a complement generator) can be
    carried into the canonical coordinates."""
    a = _as_int_rows(rows)
    k = len(a)
    m = len(a[0]) if k else 0
    normalized = []
    for j in range(m):
        col = tuple(a[i][j] for i in range(k))
        sign = 1
        for x in col:
            if x:
                sign = 1 if x > 0 else -1
                break
        if sign < 0:
            col = tuple(-x for x in col)
        normalized.append((col, sign, j))
    order = sorted(range(m),
                   key=lambda j: (tuple(-x for x in normalized[j][0]), j))
    perm = tuple(normalized[j][2] for j in order)
    signs = tuple(normalized[j][1] for j in order)
    canon = tuple(tuple(normalized[j][0][i] for j in order) for i in range(k))
    return canon, perm, signs


def transform_vector(v, perm, signs) -> tuple[int, ...]:
    """Apply the column transform returned by canonical_form_with_transform."""
    vv = tuple(int(x) for x in v)
    return tuple(s * vv[p] for p, s in zip(perm, signs))


def is_primitive_vector(v) -> bool:
    """True iff the gcd of the coordinates is 1.  The zero vector is rejected."""
    vv = [abs(int(x)) for x in v]
    if not any(vv):
        raise UsageError("primitivity is undefined for the zero vector")
    return math.gcd(*vv) == 1


def integer_kernel(rows, m: int) -> tuple[tuple[int, ...], ...]:
    """Basis of {x in Z^m : x . r = 0 for every row r}.

    This is the saturated orthogonal complement of the row span.  Computed by
    unimodular row reduction of [A^T | I], reading the kernel off the rows
    whose A^T part vanishes; the result is automatically a basis of the full
    (hence saturated) kernel lattice.
    """
    a = [[int(x) for x in row] for row in rows]
    k = len(a)
    if any(len(row) != m for row in a):
        raise UsageError(f"rows must have length {m}")
    b = [[a[j][i] for j in range(k)] + [1 if t == i else 0 for t in range(m)]
         for i in range(m)]
    r = 0
    for col in range(k):
        while True:
            nz = [i for i in range(r, m) if b[i][col] != 0]
            if not nz:
                piv = None
                break
            if len(nz) == 1:
                piv = nz[0]
                break
            nz.sort(key=lambda i: abs(b[i][col]))
            p = nz[0]
            for i in nz[1:]:
                q = b[i][col] // b[p][col]
                if q:
                    b[i] = [x - q * y for x, y in zip(b[i], b[p])]
        if piv is None:
            continue
        b[r], b[piv] = b[piv], b[r]
        if b[r][col] < 0:
            b[r] = [-x for x in b[r]]
        r += 1
    kernel = []
    for i in range(r, m):
        row = b[i][k:]
        for lead in row:
            if lead:
                if lead < 0:
                    row = [-x for x in row]
                break
        kernel.append(tuple(row))
    return tuple(kernel)


@dataclass(frozen=True)
class OrthogonalComplement:
    """Saturated orthogonal complement of an embedded sublattice in Z^m."""

    basis: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def generator(self) -> tuple[int, ...]:
        if self.rank != 1:
            raise UsageError(f"complement has rank {self.rank}, not 1")
        return self.basis[0]

    @property
    def generator_norm(self) -> int:
        g = self.generator
        return sum(x * x for x in g)


def orthogonal_complement(rows, m: int) -> OrthogonalComplement:
    """Saturated complement of the row span in Z^m, with its Gram matrix.

    For a corank-one embedding the basis is a single primitive generator.
    """
    basis = integer_kernel(rows, m)
    gram = tuple(tuple(sum(x * y for x, y in zip(u, v)) for v in basis) for u in basis)
    return OrthogonalComplement(basis, gram)


@dataclass(frozen=True)
class PairingProfile:
    """Which ambient unit vectors pair nonzero with each of two orthogonal images."""

    m_flags: tuple[bool, ...]
    c_flags: tuple[bool, ...]

    @property
    def passes(self) -> bool:
        return all(self.m_flags) and all(self.c_flags)


def unit_pairing_profile(m_rows, c_rows, m: int) -> PairingProfile:
    """For each e_i, report whether it pairs nonzero with both row images.

    e_i pairs nonzero with an image iff column i of that matrix is nonzero.
    The two images must be mutually orthogonal.
    """
    am = _as_int_rows(m_rows)
    ac = _as_int_rows(c_rows)
    for rows in (am, ac):
        if any(len(r) != m for r in rows):
            raise UsageError(f"all rows must have length {m}")
    for u in am:
        for v in ac:
            if sum(x * y for x, y in zip(u, v)) != 0:
                raise UsageError("images are not orthogonal")
    m_flags = tuple(any(row[i] for row in am) for i in range(m))
    c_flags = tuple(any(row[i] for row in ac) for i in range(m))
    return PairingProfile(m_flags, c_flags)


# ---------------------------------------------------------------------------
# Embedding enumeration


@dataclass(frozen=True)
class SearchLimits:
    """Budgets for a single enumeration; exceeding either aborts the search
    with a LimitExceeded carrying partial statistics."""

    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float | None = None

    def __post_init__(self):
        if self.node_budget < 1:
            raise UsageError("node budget must be positive")
        if self.time_budget is not None and self.time_budget <= 0:
            raise UsageError("time budget must be positive")


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    leaves: int
    classes: int
    limit_hit: bool = False
    elapsed_ms: int = field(compare=False, default=0)


@dataclass(frozen=True)
class EmbeddingClass:
    """Canonical representative of an embedding orbit."""

    matrix: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @property
    def ambient(self) -> int:
        return len(self.matrix[0]) if self.matrix else 0

    @property
    def support(self) -> tuple[int, ...]:
        """Indices (0-based) of the ambient coordinates the image touches."""
        return tuple(j for j in range(self.ambient)
                     if any(row[j] for row in self.matrix))

    def to_array(self):
        return np.array(self.matrix, dtype=np.int64)


@dataclass(frozen=True)
class EmbeddingSearchResult:
    classes: tuple[EmbeddingClass, ...]
    stats: SearchStats


@lru_cache(maxsize=None)
def _square_parts(n: int, max_parts: int, cap: int) -> tuple[tuple[int, ...], ...]:
    # Weakly decreasing positive integers, each <= cap, whose squares sum to n,
    # using at most max_parts of them.
    if n == 0:
        return ((),)
    if max_parts <= 0:
        return ()
    out = []
    top = min(cap, math.isqrt(n))
    for c in range(top, 0, -1):
        for rest in _square_parts(n - c * c, max_parts - 1, c):
            out.append((c,) + rest)
    return tuple(out)


def search_embedding_classes(l: GramLattice, m: int, limits: SearchLimits | None = None,
                             backend: str | None = None) -> EmbeddingSearchResult:
    """Exhaustively enumerate the embedding classes of ``l`` in Z^m.

    Returns the classes in lexicographic order of their canonical matrices,
    together with search statistics.  Raises LimitExceeded (carrying partial
    statistics and the classes found so far) if a budget runs out.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise UsageError(f"ambient rank must be a positive integer, got {m!r}")
    if m > MAX_AMBIENT:
        raise UsageError(f"ambient rank {m} exceeds the supported maximum {MAX_AMBIENT}")
    if not is_positive_definite(l):
        raise UsageError("embedding search requires a positive-definite Gram matrix")
    if max(l.gram[i][i] for i in range(l.rank)) > MAX_DIAGONAL:
        raise UsageError(f"diagonal entries above {MAX_DIAGONAL} are not supported")
    limits = limits or SearchLimits()
    kernel = resolve_backend(backend)
    k = l.rank
    gram = l.to_array()
    rows = np.zeros((k, m), dtype=np.int64)
    found: dict[tuple, None] = {}
    nodes = 0
    leaves = 0
    start = time.monotonic()
    deadline = None if limits.time_budget is None else start + limits.time_budget

    def stats(hit: bool) -> SearchStats:
        return SearchStats(nodes=nodes, leaves=leaves, classes=len(found), limit_hit=hit,
                           elapsed_ms=int((time.monotonic() - start) * 1000))

    def partial() -> tuple[EmbeddingClass, ...]:
        return tuple(EmbeddingClass(mat) for mat in sorted(found))

    def place(i: int, used: int):
        nonlocal nodes, leaves
        if i == k:
            if not np.array_equal(rows @ rows.T, gram):
                raise InternalCheckError("search leaf is not an isometric embedding")
            found.setdefault(canonical_form(rows))
            leaves += 1
            return
        norm = int(gram[i, i])
        if used:
            cands = kernel(rows[:i, :used], gram[i, :i], norm)
        else:
            # no coordinates touched yet: one empty old-part with x.x = 0
            cands = np.zeros((1, 1), dtype=np.int64)
        for cand in cands:
            leftover = norm - int(cand[used])
            for parts in _square_parts(leftover, m - used, math.isqrt(leftover)):
                nodes += 1
                if nodes > limits.node_budget:
                    raise LimitExceeded(f"node budget {limits.node_budget} exhausted",
                                        stats(True), partial())
                if deadline is not None and time.monotonic() > deadline:
                    raise LimitExceeded(f"time budget {limits.time_budget}s exhausted",
                                        stats(True), partial())
                s = len(parts)
                rows[i, :used] = cand[:used]
                for t, val in enumerate(parts):
                    rows[i, used + t] = val
                rows[i, used + s:] = 0
                place(i + 1, used + s)

    place(0, 0)
    classes = tuple(EmbeddingClass(mat) for mat in sorted(found))
    return EmbeddingSearchResult(classes, stats(False))


def enumerate_embedding_classes(l: GramLattice, m: int, limits: SearchLimits | None = None,
                                backend: str | None = None) -> list[EmbeddingClass]:
    """The embedding classes of ``l`` in Z^m, in deterministic order."""
    return list(search_embedding_classes(l, m, limits=limits, backend=backend).classes)


def class_count_stabilization(l: GramLattice, m: int, extra: int = 2,
                              limits: SearchLimits | None = None,
                              backend: str | None = None):
    """Class counts at ambient ranks m .. m+extra, and whether they agree.

    Embedding classes of a fixed lattice stop changing once the ambient rank
    passes a lattice-dependent threshold; this reruns the count to exhibit
    that stabilization rather than asserting a formula for the threshold.
    """
    counts = []
    for mm in range(m, m + extra + 1):
        counts.append((mm, len(enumerate_embedding_classes(l, mm, limits=limits,
                                                           backend=backend))))
    stable = len({c for _, c in counts}) == 1
    return tuple(counts), stable
