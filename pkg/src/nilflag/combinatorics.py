"""Partition, dimension-vector and tableau combinatorics.

Partitions are tuples of weakly decreasing positive integers; the same
tuple serves as a Jordan type (block sizes of a nilpotent matrix), a
tableau shape and a highest weight.  Dimension vectors are fixed-length
tuples of non-negative integers recording the jumps of a partial flag.
Both use the canonical text form "2,1" (comma-separated integers).

All counts here fit comfortably in Python ints, which never wrap.
"""

from __future__ import annotations

import math
from functools import cache

Partition = tuple[int, ...]
DimVector = tuple[int, ...]
Tableau = tuple[tuple[int, ...], ...]


def check_partition(parts) -> Partition:
    """Validate a partition given as any iterable of ints; return a tuple."""
    p = tuple(int(x) for x in parts)
    for i, x in enumerate(p):
        if x <= 0:
            raise ValueError(f"partition parts must be positive: {p}")
        if i and p[i - 1] < x:
            raise ValueError(f"partition parts must be weakly decreasing: {p}")
    return p


def check_dimvec(entries, n: int | None = None) -> DimVector:
    """Validate a dimension vector; optionally pin its length to n."""
    dv = tuple(int(x) for x in entries)
    if not dv:
        raise ValueError("dimension vector needs at least one entry")
    if any(x < 0 for x in dv):
        raise ValueError(f"dimension vector entries must be non-negative: {dv}")
    if n is not None and len(dv) != n:
        raise ValueError(f"expected {n} entries, got {len(dv)}: {dv}")
    return dv


def parse_parts(text: str) -> tuple[int, ...]:
    """Parse the canonical comma-separated form, e.g. "2,1" -> (2, 1)."""
    try:
        return tuple(int(piece) for piece in text.split(","))
    except ValueError:
        raise ValueError(f"not a comma-separated integer list: {text!r}") from None


def format_parts(parts) -> str:
    return ",".join(str(int(x)) for x in parts)


def enumerate_partitions(n: int, d: int) -> list[Partition]:
    """All partitions of d with parts at most n, lexicographically decreasing."""
    if n < 1 or d < 1:
        raise ValueError("enumerate_partitions needs n >= 1 and d >= 1")
    out: list[Partition] = []

    def rec(remaining: int, biggest: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(biggest, remaining), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(d, n, [])
    return out


def conjugate(p) -> Partition:
    """Column lengths of the Young diagram (the transposed partition)."""
    p = check_partition(p)
    if not p:
        return ()
    return tuple(sum(1 for part in p if part > j) for j in range(p[0]))


def dominates(p, r) -> bool:
    """Prefix-sum (dominance) order on partitions of the same size."""
    p = check_partition(p)
    r = check_partition(r)
    if sum(p) != sum(r):
        raise ValueError("dominance compares partitions of equal size")
    total_p = total_r = 0
    for i in range(max(len(p), len(r))):
        total_p += p[i] if i < len(p) else 0
        total_r += r[i] if i < len(r) else 0
        if total_p < total_r:
            return False
    return True


def refines(p, r) -> bool:
    """True iff r is obtained by merging groups of parts of p, with p != r.

    This is strict refinement: parts of p are split into groups whose
    sums give the multiset of parts of r.
    """
    p = check_partition(p)
    r = check_partition(r)
    if sum(p) != sum(r):
        raise ValueError("refinement compares partitions of equal size")
    if p == r:
        return False

    def pack(parts: tuple[int, ...], caps: list[int]) -> bool:
        if not parts:
            return all(c == 0 for c in caps)
        x = parts[0]
        tried = set()
        for i, c in enumerate(caps):
            if c >= x and c not in tried:
                tried.add(c)
                caps[i] -= x
                if pack(parts[1:], caps):
                    caps[i] += x
                    return True
                caps[i] += x
        return False

    return pack(p, list(r))


def n_stat(p) -> int:
    """The statistic sum over rows i (1-based) of (i-1) * part_i."""
    p = check_partition(p)
    return sum(i * part for i, part in enumerate(p))


def orbit_dim(lam) -> int:
    """Dimension of the conjugacy class of nilpotents with Jordan type lam."""
    lam = check_partition(lam)
    d = sum(lam)
    return d * d - sum(c * c for c in conjugate(lam))


def nilcone_dim(n: int, d: int) -> int:
    """Dimension of the variety of d x d matrices whose n-th power vanishes.

    Equals the orbit dimension of the dominance-greatest Jordan type with
    parts at most n (k full parts of size n plus one remainder part).
    """
    if n < 1 or d < 1:
        raise ValueError("nilcone_dim needs n >= 1 and d >= 1")
    k, r = divmod(d, n)
    top = (n,) * k + ((r,) if r else ())
    return orbit_dim(top)


def enumerate_dimvecs(n: int, d: int) -> list[DimVector]:
    """All n-tuples of non-negative integers summing to d, lex decreasing."""
    if n < 1 or d < 1:
        raise ValueError("enumerate_dimvecs needs n >= 1 and d >= 1")
    out: list[DimVector] = []

    def rec(slots: int, remaining: int, prefix: list[int]) -> None:
        if slots == 1:
            out.append(tuple(prefix) + (remaining,))
            return
        for first in range(remaining, -1, -1):
            prefix.append(first)
            rec(slots - 1, remaining - first, prefix)
            prefix.pop()

    rec(n, d, [])
    return out


def flag_dim(dv) -> int:
    """Dimension of the flag-variety component with jump vector dv."""
    dv = check_dimvec(dv)
    total = sum(dv)
    return (total * total - sum(x * x for x in dv)) // 2


def enumerate_ssyt(shape, content) -> list[Tableau]:
    """All semistandard tableaux of the given shape and content.

    Content is a composition: entry i is the multiplicity of the letter
    i+1 (zeros allowed).  Rows weakly increase, columns strictly
    increase.  Tableaux come out ordered by their row-reading word.
    """
    shape = check_partition(shape)
    weight = tuple(int(x) for x in content)
    if any(x < 0 for x in weight):
        raise ValueError(f"content multiplicities must be non-negative: {weight}")
    if sum(shape) != sum(weight):
        raise ValueError("shape size and content total differ")
    if not shape:
        return [()]

    nletters = len(weight)
    remaining = list(weight)
    rows = [[0] * width for width in shape]
    cells = [(r, c) for r in range(len(shape)) for c in range(shape[r])]
    found: list[Tableau] = []

    def fill(idx: int) -> None:
        if idx == len(cells):
            found.append(tuple(tuple(row) for row in rows))
            return
        r, c = cells[idx]
        lo = rows[r][c - 1] if c else 1
        if r and rows[r - 1][c] >= lo:
            lo = rows[r - 1][c] + 1
        for v in range(lo, nletters + 1):
            if remaining[v - 1]:
                remaining[v - 1] -= 1
                rows[r][c] = v
                fill(idx + 1)
                remaining[v - 1] += 1
        rows[r][c] = 0

    fill(0)
    return found


@cache
def _kostka(shape: Partition, weight: Partition) -> int:
    return len(enumerate_ssyt(shape, weight))


def kostka_number(shape, content) -> int:
    """Number of semistandard tableaux of the given shape and content.

    Content may be any composition; the count only depends on the sorted
    multiplicities, so arbitrary dimension vectors are accepted.
    """
    shape = check_partition(shape)
    weight = tuple(sorted((int(x) for x in content if int(x) != 0), reverse=True))
    if sum(shape) != sum(weight):
        raise ValueError("shape size and content total differ")
    return _kostka(shape, weight)


def hook_lengths(shape) -> list[list[int]]:
    """Hook length of every cell, row by row."""
    shape = check_partition(shape)
    conj = conjugate(shape)
    return [
        [shape[i] - j + conj[j] - i - 1 for j in range(shape[i])]
        for i in range(len(shape))
    ]


def syt_count(shape) -> int:
    """Number of standard tableaux of the given shape (hook-length formula)."""
    shape = check_partition(shape)
    denom = 1
    for row in hook_lengths(shape):
        for h in row:
            denom *= h
    return math.factorial(sum(shape)) // denom


def schur_dim(shape, n: int) -> int:
    """Dimension of the degree-|shape| polynomial functor of an n-space.

    Hook-content formula; zero when the shape has more than n rows.  The
    value also equals the sum of kostka_number(shape, dv) over all
    dimension vectors dv of length n, which tests cross-check.
    """
    shape = check_partition(shape)
    if n < 1:
        raise ValueError("schur_dim needs n >= 1")
    if len(shape) > n:
        return 0
    num = 1
    den = 1
    for i, row in enumerate(hook_lengths(shape)):
        for j, h in enumerate(row):
            num *= n + j - i
            den *= h
    if num % den:
        raise ArithmeticError(f"hook-content product not divisible for {shape}, n={n}")
    return num // den
