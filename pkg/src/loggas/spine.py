"""Momentum algebra: modes eps_p, projections, structure coefficients,
and the Plucker / Toeplitz residual family.

The structure table for a shape is universal (independent of the
weight), so it is computed once per (L, M) and persisted as JSON under
a cache directory (env LOGGAS_CACHE_DIR, default ~/.cache/loggas).
"""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .exterior import (
    ModelShape,
    Multivector,
    blade_momentum,
    blade_weights,
    merge_sign,
    mask_to_degrees,
    wedge,
    zero_multivector,
)
from .scalars import rational

# guard for structure_table: refuse shapes whose blade space at grade L
# is too large to enumerate set partitions of
STRUCTURE_CEILING = 10_000_000

CACHE_ENV = "LOGGAS_CACHE_DIR"


@lru_cache(maxsize=None)
def epsilon(p: int, shape: ModelShape) -> Multivector:
    """The p-th momentum mode: all L-blades of momentum p with their
    renormalized Vandermonde weights.  Zero for |p| > K."""
    if abs(p) > shape.K:
        return zero_multivector(shape)
    terms = {}
    for mask, (w, _) in blade_weights(shape).items():
        if blade_momentum(mask, shape) == p:
            terms[mask] = rational(w)
    return Multivector(shape, terms, shape.L)


def momentum_project(a: Multivector, m: int, p: int) -> Multivector:
    """Projection onto the m-particle, momentum-p sector."""
    grade = m * a.shape.L
    terms = {
        mask: c
        for mask, c in a.terms.items()
        if mask.bit_count() == grade and blade_momentum(mask, a.shape) == p
    }
    return Multivector(a.shape, terms, grade if terms else None)


class StructureTable:
    """Canonical keys are weakly increasing zero-sum M-tuples over
    [-K, K]; zero coefficients are omitted, lookups default to 0."""

    __slots__ = ("shape", "entries")

    def __init__(self, shape: ModelShape, entries: dict):
        self.shape = shape
        self.entries = dict(sorted(entries.items()))

    def lookup(self, P) -> int:
        key = tuple(sorted(P))
        return self.entries.get(key, 0)

    def __eq__(self, other):
        if not isinstance(other, StructureTable):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def to_json_dict(self) -> dict:
        return {
            "L": self.shape.L,
            "M": self.shape.M,
            "K": self.shape.K,
            "entries": [[list(key), str(val)] for key, val in self.entries.items()],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "StructureTable":
        shape = ModelShape(int(data["L"]), int(data["M"]))
        if int(data["K"]) != shape.K:
            raise ValueError("inconsistent K in structure-table file")
        entries = {}
        for key, val in data["entries"]:
            P = tuple(int(p) for p in key)
            if len(P) != shape.M or sum(P) != 0 or any(abs(p) > shape.K for p in P):
                raise ValueError(f"invalid structure key {P}")
            if tuple(sorted(P)) != P:
                raise ValueError(f"non-canonical structure key {P}")
            entries[P] = int(val)
        return cls(shape, entries)


def _block_partitions(mask: int, L: int):
    """Unordered partitions of the slot set into blocks of size L,
    yielded as tuples in generation order: each block contains the
    smallest slot not used by earlier blocks."""
    if mask == 0:
        yield ()
        return
    low = mask & -mask
    rest = mask ^ low
    r = low.bit_length() - 1
    from itertools import combinations

    others = mask_to_degrees(rest)
    for extra in combinations(others, L - 1):
        block = low
        for s in extra:
            block |= 1 << s
        for tail in _block_partitions(mask & ~block, L):
            yield (block,) + tail


def _build_structure_table(shape: ModelShape) -> StructureTable:
    if math.comb(shape.N, shape.L) > STRUCTURE_CEILING:
        raise ValueError(
            f"blade space C({shape.N},{shape.L}) exceeds the structure-table ceiling"
        )
    weights = blade_weights(shape)
    acc: dict = {}
    for blocks in _block_partitions(shape.volume_mask, shape.L):
        w = 1
        sign = 1
        merged = 0
        momenta = []
        for b in blocks:
            w *= weights[b][0]
            sign *= merge_sign(merged, b)
            merged |= b
            momenta.append(blade_momentum(b, shape))
        key = tuple(sorted(momenta))
        acc[key] = acc.get(key, 0) + sign * w
    # an unordered partition stands for several ordered block sequences
    # of equal contribution (L even); the ordered star value needs the
    # product of multiplicity factorials of the repeated momenta
    entries = {}
    for key, s in acc.items():
        if s != 0:
            entries[key] = s * _multiplicity_factor(key)
    return StructureTable(shape, entries)


def _multiplicity_factor(key) -> int:
    out = 1
    run = 1
    for i in range(1, len(key)):
        if key[i] == key[i - 1]:
            run += 1
            out *= run
        else:
            run = 1
    return out


def cache_directory() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "loggas"


def structure_table(shape: ModelShape, cache: bool = True) -> StructureTable:
    """Build (or load) the table of C_P = star(eps_{p_1} ^ .. ^ eps_{p_M})."""
    path = cache_directory() / f"structure_L{shape.L}_M{shape.M}.json"
    if cache and path.is_file():
        try:
            table = StructureTable.from_json_dict(json.loads(path.read_text()))
            if table.shape == shape:
                return table
        except (ValueError, KeyError, json.JSONDecodeError):
            pass  # stale or foreign file; rebuild below
    table = _build_structure_table(shape)
    if cache:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
            with os.fdopen(fd, "w") as fh:
                json.dump(table.to_json_dict(), fh, indent=1)
            os.replace(tmp, path)
        except OSError:
            pass  # cache is best-effort; never fail the computation
    return table


def plucker_residual(n: int, shape: ModelShape) -> Multivector:
    """r_n = sum_{p+q=n} eps_p ^ eps_q.  Identically zero."""
    K = shape.K
    out = zero_multivector(shape)
    for p in range(max(-K, n - K), min(K, n + K) + 1):
        out = out + wedge(epsilon(p, shape), epsilon(n - p, shape))
    return out


def higher_plucker_residual(n: int, j: int, shape: ModelShape) -> Multivector:
    """sum over p_1+..+p_j = n of eps_{p_1} ^ .. ^ eps_{p_j}."""
    if not 2 <= j <= shape.M:
        raise ValueError(f"fold count j must lie in [2, M], got {j}")
    K = shape.K

    def rec(partial: Multivector, depth: int, remaining: int) -> Multivector:
        if depth == j - 1:
            if abs(remaining) > K:
                return zero_multivector(shape)
            return wedge(partial, epsilon(remaining, shape))
        acc = zero_multivector(shape)
        lo = max(-K, remaining - (j - 1 - depth) * K)
        hi = min(K, remaining + (j - 1 - depth) * K)
        for p in range(lo, hi + 1):
            nxt = wedge(partial, epsilon(p, shape))
            if nxt.is_zero():
                continue
            acc = acc + rec(nxt, depth + 1, remaining - p)
        return acc

    from .exterior import scalar_multivector

    return rec(scalar_multivector(shape, rational(1)), 0, n)


@dataclass(frozen=True)
class ToeplitzOperator:
    """Finite band T_k; acts on the spine by eps_q -> sum_j T_{q-j} eps_j."""

    band: tuple  # tuple of (offset, scalar) pairs, offsets distinct

    @classmethod
    def from_dict(cls, band: dict) -> "ToeplitzOperator":
        items = tuple(sorted((int(k), rational(v)) for k, v in band.items()))
        return cls(items)

    @classmethod
    def identity(cls) -> "ToeplitzOperator":
        return cls(((0, rational(1)),))

    @classmethod
    def shift(cls, k: int) -> "ToeplitzOperator":
        return cls(((k, rational(1)),))

    def apply(self, q: int, shape: ModelShape) -> Multivector:
        out = zero_multivector(shape)
        for offset, t in self.band:
            j = q - offset
            if abs(j) <= shape.K and t != 0:
                out = out + epsilon(j, shape).scale(t)
        return out


def adjunction_expansion(q: int, moments, shape: ModelShape, table: StructureTable | None = None):
    """star(eps_q ^ gamma^{^(M-1)}/(M-1)!) via the structure table:

        (1/(M-1)!) sum over ordered (p_1..p_{M-1}), sum p_i = -q,
                   of C_{(q, p_1..p_{M-1})} prod mhat_{p_i}

    moments needs only an mhat(p, K) accessor.  Independent of the
    exterior-algebra evaluation route by construction.
    """
    if table is None:
        table = structure_table(shape)
    K = shape.K
    M = shape.M
    total = rational(0)

    def rec(prefix, remaining, depth, prod):
        nonlocal total
        if depth == M - 1:
            if remaining != 0:
                return
            C = table.lookup(prefix + (q,))
            if C:
                total = total + C * prod
            return
        slots_left = M - 1 - depth - 1
        lo = max(-K, remaining - slots_left * K)
        hi = min(K, remaining + slots_left * K)
        for p in range(lo, hi + 1):
            rec(prefix + (p,), remaining - p, depth + 1, prod * moments.mhat(p, K))

    if M == 1:
        return rational(table.lookup((q,)))
    rec((), -q, 0, rational(1))
    return total / math.factorial(M - 1)


def toeplitz_residual(T: ToeplitzOperator, n: int, shape: ModelShape) -> Multivector:
    """r_{n,T} = sum_{p+q=n} eps_p ^ (T eps_q).  Identically zero."""
    K = shape.K
    out = zero_multivector(shape)
    for p in range(-K, K + 1):
        lhs = epsilon(p, shape)
        if lhs.is_zero():
            continue
        rhs = T.apply(n - p, shape)
        if rhs.is_zero():
            continue
        out = out + wedge(lhs, rhs)
    return out
