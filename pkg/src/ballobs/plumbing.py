"""Blow-down calculus on linear plumbing chains.

A chain is a tuple of integer weights along a path graph.  Blowing down a
(-1)-framed vertex deletes it and adds 1 to each neighbour, joining them into
a single edge; the absolute determinant of the chain's intersection matrix is
preserved.  The rational-blow-up chains reduce to the pair (-3, 0), which is
the bookkeeping behind the blow-up description of the associated closed
4-manifolds.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InternalCheckError, UsageError


def rb_chain(n: int) -> tuple[int, ...]:
    """The length-2n chain (-3)^(n-1), -2, -1, (-3)^(n-2), -2 for n >= 2."""
    if n < 2:
        raise UsageError(f"need n >= 2, got {n!r}")
    return (-3,) * (n - 1) + (-2, -1) + (-3,) * (n - 2) + (-2,)


def blow_down(chain, index: int) -> tuple[int, ...]:
    """Blow down the -1 at ``index`` (1-based).

    Interior: both neighbours gain 1 and become adjacent.  End: the single
    neighbour gains 1.  Isolated: the vertex disappears.
    """
    c = tuple(chain)
    if not 1 <= index <= len(c):
        raise UsageError(f"index {index} out of range for chain of length {len(c)}")
    i = index - 1
    if c[i] != -1:
        raise UsageError(f"weight at index {index} is {c[i]}, not -1")
    if len(c) == 1:
        return ()
    if i == 0:
        return (c[1] + 1,) + c[2:]
    if i == len(c) - 1:
        return c[:-2] + (c[-2] + 1,)
    return c[:i - 1] + (c[i - 1] + 1, c[i + 1] + 1) + c[i + 2:]


def blow_up(chain, gap: int) -> tuple[int, ...]:
    """Insert a fresh -1 at ``gap`` (0 .. len), inverting a blow-down.

    gap = 0 or len(chain) prepends/appends -1 and decrements the end weight;
    an interior gap splits that edge, decrementing both sides.  On the empty
    chain this creates the isolated (-1).
    """
    c = tuple(chain)
    if not 0 <= gap <= len(c):
        raise UsageError(f"gap {gap} out of range for chain of length {len(c)}")
    if not c:
        return (-1,)
    if gap == 0:
        return (-1, c[0] - 1) + c[1:]
    if gap == len(c):
        return c[:-1] + (c[-1] - 1, -1)
    return c[:gap - 1] + (c[gap - 1] - 1, -1, c[gap] - 1) + c[gap + 1:]


def reduce(chain) -> tuple[tuple[int, ...], int]:
    """Blow down until no -1 remains; returns (final chain, blow-down count).

    The rightmost -1 is taken at every step.  This fixed order makes the
    output reproducible and, on the rational-blow-up chains, lands on the
    chain (-3, 0) rather than one of its blow-down-equivalent relabelings.
    """
    c = tuple(chain)
    count = 0
    while -1 in c:
        i = len(c) - 1 - c[::-1].index(-1)
        c = blow_down(c, i + 1)
        count += 1
    return c, count


def chain_determinant(chain) -> int:
    """Determinant of the chain's intersection matrix (weights on the diagonal,
    -1 on the off-diagonals), via the continuant d_k = a_k d_(k-1) - d_(k-2).

    The empty chain has determinant 1 (empty matrix).
    """
    prev, cur = 0, 1
    for a in chain:
        prev, cur = cur, a * cur - prev
    return cur


@dataclass(frozen=True)
class BlowdownCertificate:
    """Record of a full reduction of a rational-blow-up chain."""

    start: tuple[int, ...]
    final: tuple[int, ...]
    blowdowns: int
    b2: int


def simple_embedding_certificate(n: int) -> BlowdownCertificate:
    """Certify that the 2n-vertex rational-blow-up chain reduces to (-3, 0).

    The reduction takes exactly 2n - 2 blow-downs, so the closed manifold the
    chain describes has second Betti number b2 = 2n (= 1 + (2n - 1)).
    """
    if n < 2:
        raise UsageError(f"need n >= 2, got {n!r}")
    start = rb_chain(n)
    final, count = reduce(start)
    if final != (-3, 0) or count != 2 * n - 2:
        raise InternalCheckError(
            f"rb chain n={n} reduced to {final} after {count} blow-downs, "
            f"expected (-3, 0) after {2 * n - 2}")
    return BlowdownCertificate(start, final, count, 2 * n)
