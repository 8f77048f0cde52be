"""Matroid structure read off a realization by exact column ranks.

All enumerations are exhaustive, so ground sets are capped at 16 elements.
Subsets are handled internally as bitmasks over ground-set positions and
returned as label lists in ground-set order.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from itertools import combinations
from typing import TYPE_CHECKING, Iterable

from .errors import Disconnected, InternalInvariantViolation, TooLarge, UnknownLabel
from .linalg import Matrix, det_raw, rank as mat_rank

if TYPE_CHECKING:
    from .configuration import Realization

MAX_GROUND = 16
INFINITY = math.inf


def _bits(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


@dataclass(frozen=True)
class Handle:
    elements: tuple[str, ...]
    disconnective: bool

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class HandleDecomposition:
    circuits: tuple[tuple[str, ...], ...]
    filtration: tuple[tuple[str, ...], ...]
    handles: tuple[tuple[str, ...], ...]

    @property
    def length(self) -> int:
        return len(self.circuits)


class MatroidView:
    """Rank oracle and cached combinatorics of the matroid of a realization."""

    def __init__(self, realization: "Realization"):
        self.realization = realization
        self.labels = realization.labels
        self.n = len(self.labels)
        self.r = realization.rank
        self._index = {l: i for i, l in enumerate(self.labels)}
        self._cols = [realization.matrix.column(j) for j in range(self.n)]
        self._rank_cache: dict[int, int] = {}
        self._lock = threading.RLock()
        self._bases = None
        self._circuits = None
        self._components = None
        self._handles = None

    # -- helpers ------------------------------------------------------------
    def _guard(self):
        if self.n > MAX_GROUND:
            raise TooLarge(f"ground set of size {self.n} exceeds {MAX_GROUND}")

    def mask(self, S: Iterable[str]) -> int:
        m = 0
        for l in S:
            try:
                m |= 1 << self._index[l]
            except KeyError:
                raise UnknownLabel(f"unknown label {l!r}") from None
        return m

    def names(self, mask: int) -> list[str]:
        return [self.labels[i] for i in _bits(mask)]

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def rank_mask(self, mask: int) -> int:
        hit = self._rank_cache.get(mask)
        if hit is None:
            idx = _bits(mask)
            if not idx or self.r == 0:
                hit = 0
            else:
                field = self.realization.field
                rows = [[self._cols[j][i] for j in idx] for i in range(self.r)]
                hit = mat_rank(Matrix._raw(field, rows, len(idx)))
            self._rank_cache[mask] = hit
        return hit

    # -- rank and closure -------------------------------------------------
    def rank(self, S: Iterable[str] = None) -> int:
        if S is None:
            return self.r
        return self.rank_mask(self.mask(S))

    def closure(self, S: Iterable[str]) -> list[str]:
        m = self.mask(S)
        rk = self.rank_mask(m)
        out = m
        for i in range(self.n):
            if not (m >> i) & 1 and self.rank_mask(m | (1 << i)) == rk:
                out |= 1 << i
        return self.names(out)

    def is_independent(self, S: Iterable[str]) -> bool:
        m = self.mask(S)
        return self.rank_mask(m) == _popcount(m)

    # -- bases and circuits -------------------------------------------------
    def basis_masks(self) -> list[int]:
        with self._lock:
            if self._bases is None:
                self._guard()
                field = self.realization.field
                out = []
                for combo in combinations(range(self.n), self.r):
                    rows = [[self._cols[j][i] for j in combo] for i in range(self.r)]
                    if det_raw(field, rows) != 0:
                        out.append(sum(1 << j for j in combo))
                self._bases = out
            return self._bases

    def bases(self) -> list[list[str]]:
        return [self.names(m) for m in self.basis_masks()]

    def is_basis(self, S: Iterable[str]) -> bool:
        S = list(S)
        return len(S) == self.r and self.rank(S) == self.r

    def circuit_masks(self) -> list[int]:
        with self._lock:
            if self._circuits is None:
                self._guard()
                found: list[int] = []
                for k in range(1, self.r + 2):
                    for combo in combinations(range(self.n), k):
                        m = sum(1 << j for j in combo)
                        if any(c & m == c for c in found):
                            continue
                        if self.rank_mask(m) < k:
                            found.append(m)
                self._circuits = sorted(found, key=lambda c: _bits(c))
            return self._circuits

    def circuits(self) -> list[list[str]]:
        return [self.names(m) for m in self.circuit_masks()]

    def loops(self) -> list[str]:
        return [l for i, l in enumerate(self.labels) if self.rank_mask(1 << i) == 0]

    def coloops(self) -> list[str]:
        full = self.full
        return [l for i, l in enumerate(self.labels) if self.rank_mask(full & ~(1 << i)) < self.r]

    # -- connectivity -------------------------------------------------------
    def component_masks(self) -> list[int]:
        with self._lock:
            if self._components is None:
                parent = list(range(self.n))

                def find(a):
                    while parent[a] != a:
                        parent[a] = parent[parent[a]]
                        a = parent[a]
                    return a

                for c in self.circuit_masks():
                    idx = _bits(c)
                    for j in idx[1:]:
                        ra, rb = find(idx[0]), find(j)
                        if ra != rb:
                            parent[max(ra, rb)] = min(ra, rb)
                groups: dict[int, int] = {}
                for i in range(self.n):
                    groups[find(i)] = groups.get(find(i), 0) | (1 << i)
                self._components = sorted(groups.values(), key=lambda m: _bits(m)[0])
            return self._components

    def components(self) -> list[list[str]]:
        return [self.names(m) for m in self.component_masks()]

    def is_connected(self) -> bool:
        return len(self.component_masks()) <= 1

    def connectivity_function(self, S: Iterable[str]) -> int:
        m = self.mask(S)
        return self.rank_mask(m) + self.rank_mask(self.full & ~m) - self.r

    lambda_ = connectivity_function

    def tutte_connectivity(self):
        """Least k admitting a k-separation; ``math.inf`` if there is none."""
        self._guard()
        best = INFINITY
        full = self.full
        for m in range(1, full):
            if m & 1 == 0 and self.n > 1:
                continue  # S and its complement give the same separation
            size = _popcount(m)
            k = self.rank_mask(m) + self.rank_mask(full & ~m) - self.r + 1
            if k <= min(size, self.n - size) and k < best:
                best = k
        return best

    def is_k_connected(self, k: int) -> bool:
        return self.tutte_connectivity() >= k

    def is_3_connected(self) -> bool:
        return self.is_k_connected(3)

    def separations(self, k: int) -> list[list[str]]:
        """Sides S (containing the first element) of all exact k-separations."""
        full = self.full
        out = []
        for m in range(1, full):
            if m & 1 == 0:
                continue
            size = _popcount(m)
            lam = self.rank_mask(m) + self.rank_mask(full & ~m) - self.r
            if lam == k - 1 and k <= min(size, self.n - size):
                out.append(self.names(m))
        return out

    # -- handles -------------------------------------------------------------
    def is_handle(self, H: Iterable[str]) -> bool:
        h = self.mask(H)
        if not h:
            return False
        return all(h & c == h for c in self.circuit_masks() if c & h)

    def handle_masks(self) -> list[int]:
        with self._lock:
            if self._handles is None:
                circuits = self.circuit_masks()
                covered = 0
                for c in circuits:
                    covered |= c
                patterns: dict[tuple, int] = {}
                for i in range(self.n):
                    if (covered >> i) & 1:
                        key = tuple(k for k, c in enumerate(circuits) if (c >> i) & 1)
                        patterns[key] = patterns.get(key, 0) | (1 << i)
                classes = list(patterns.values())
                rest = self.full & ~covered
                if rest:
                    classes.append(rest)
                self._handles = sorted(classes, key=lambda m: _bits(m)[0])
            return self._handles

    def is_disconnective(self, H: Iterable[str]) -> bool:
        """Whether deleting H leaves a disconnected matroid."""
        rest = self.realization.delete(list(H))
        return not rest.matroid.is_connected()

    def handle_partition(self) -> list[Handle]:
        return [
            Handle(tuple(self.names(m)), self.is_disconnective(self.names(m)))
            for m in self.handle_masks()
        ]

    def handle_decomposition(self, start: Iterable[str] | None = None) -> HandleDecomposition:
        """Greedy decomposition F_1 (a circuit) < F_2 < ... < F_k = E."""
        if not self.is_connected():
            raise Disconnected("handle decompositions need a connected matroid")
        circuits = self.circuit_masks()
        if start is None:
            if not circuits:
                # a connected matroid without circuits has at most one element
                F = self.full
                return HandleDecomposition((), (tuple(self.names(F)),) if F else (), ())
            F = circuits[0]
        else:
            F = self.mask(start)
            if F not in circuits:
                raise ValueError("the start set is not a circuit")
        chain = [F]
        used = [F]
        while F != self.full:
            contracted = self.realization.contract(self.names(F)).matroid
            for c in circuits:
                if not c & F or c & F == c:
                    continue
                rest = self.names(c & ~F)
                if contracted.is_circuit(rest):
                    F |= c
                    chain.append(F)
                    used.append(c)
                    break
            else:
                raise InternalInvariantViolation("no circuit extends the handle decomposition")
        handles = [chain[0]] + [chain[i] & ~chain[i - 1] for i in range(1, len(chain))]
        return HandleDecomposition(
            tuple(tuple(self.names(c)) for c in used),
            tuple(tuple(self.names(f)) for f in chain),
            tuple(tuple(self.names(h)) for h in handles),
        )

    def is_circuit(self, S: Iterable[str]) -> bool:
        m = self.mask(S)
        k = _popcount(m)
        if k == 0 or self.rank_mask(m) != k - 1:
            return False
        return all(self.rank_mask(m & ~(1 << i)) == k - 1 for i in _bits(m))

    # -- reports ---------------------------------------------------------------
    def report(self, decomposition: bool = True) -> dict:
        conn = self.tutte_connectivity()
        out = {
            "ground_set": list(self.labels),
            "rank": self.r,
            "bases": self.bases(),
            "circuits": self.circuits(),
            "loops": self.loops(),
            "coloops": self.coloops(),
            "components": self.components(),
            "connectivity": "infinity" if conn == INFINITY else conn,
            "handle_partition": [
                {"handle": list(h.elements), "size": h.size, "disconnective": h.disconnective}
                for h in self.handle_partition()
            ],
        }
        if decomposition:
            if self.is_connected() and self.n:
                d = self.handle_decomposition()
                out["decomposition"] = {
                    "length": d.length,
                    "circuits": [list(c) for c in d.circuits],
                    "filtration": [list(f) for f in d.filtration],
                    "handles": [list(h) for h in d.handles],
                }
            else:
                out["decomposition"] = None
        return out
