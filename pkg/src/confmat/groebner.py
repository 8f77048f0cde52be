"""Buchberger's algorithm and the ideal operations built on it.

Internally a monomial is an *order key*: for every block of variables the
tuple holds the negated block degree followed by the exponents in reversed
variable order.  With this encoding

* the leading monomial of a polynomial is ``min`` of its keys,
* multiplying monomials is elementwise addition of keys,
* divisibility is elementwise comparison of the exponent entries,

so the hot loops run on plain tuples and native comparisons.  Pairs are
chosen by the normal strategy and pruned with the Gebauer-Moeller criteria
(which include Buchberger's product criterion).
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from operator import add as _add, itemgetter, le as _le, sub as _sub
from typing import Iterable, Sequence

from .errors import ExactDivisionFailure, ResourceLimit, UnknownLabel, VarSetMismatch
from .fields import Rationals
from .poly import Poly, PolyRing

DEFAULT_MAX_PAIRS = 200_000


@dataclass(frozen=True)
class MonomialOrder:
    """``DegRevLex`` or ``BlockElim(front)``; the front block is compared first."""

    kind: str = "degrevlex"
    front: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in ("degrevlex", "block"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        object.__setattr__(self, "front", tuple(self.front))


DegRevLex = MonomialOrder()


def BlockElim(front: Iterable[str]) -> MonomialOrder:
    return MonomialOrder("block", tuple(front))


class _Layout:
    """Encoding of exponent tuples as order keys for one ring and order."""

    def __init__(self, ring: PolyRing, order: MonomialOrder):
        n = ring.ngens
        if order.kind == "block" and order.front:
            front = [ring.position(l) for l in order.front]
            fs = set(front)
            blocks = [sorted(front), [i for i in range(n) if i not in fs]]
            blocks = [b for b in blocks if b]
        else:
            blocks = [list(range(n))]
        self.n = n
        self.blocks = blocks
        pos = [0] * n
        degpos = []
        k = 0
        for b in blocks:
            degpos.append(k)
            k += 1
            for i in reversed(b):
                pos[i] = k
                k += 1
        self.pos = pos
        self.degpos = degpos
        self.width = k
        exp_positions = sorted(pos)
        if n == 0:
            self.ex = lambda key: ()
        elif n == 1:
            p0 = exp_positions[0]
            self.ex = lambda key: (key[p0],)
        else:
            self.ex = itemgetter(*exp_positions)

    def encode(self, exp: Sequence[int]) -> tuple:
        out = []
        for b in self.blocks:
            out.append(-sum(exp[i] for i in b))
            out.extend(exp[i] for i in reversed(b))
        return tuple(out)

    def decode(self, key: tuple) -> tuple:
        return tuple(key[p] for p in self.pos)

    def lcm(self, a: tuple, b: tuple) -> tuple:
        return self.encode([max(x, y) for x, y in zip(self.decode(a), self.decode(b))])

    def total_degree(self, key: tuple) -> int:
        return -sum(key[p] for p in self.degpos)


def _divides(a_ex: tuple, b_ex: tuple) -> bool:
    return all(map(_le, a_ex, b_ex))


class _Engine:
    """Coefficient-specialised reduction over one layout."""

    def __init__(self, ring: PolyRing, layout: _Layout, max_pairs: int):
        self.ring = ring
        self.field = ring.field
        self.layout = layout
        self.max_pairs = max_pairs
        self.p = None if isinstance(self.field, Rationals) else self.field.p

    # a polynomial is a dict {key: coeff}; a basis element is (lm, lm_ex, tail)
    # where tail is a list of (key, coeff) and the element is monic

    def to_internal(self, f: Poly) -> dict:
        enc = self.layout.encode
        return {enc(m): c for m, c in f.coeffs.items()}

    def to_poly(self, d: dict) -> Poly:
        dec = self.layout.decode
        return self.ring._make({dec(k): c for k, c in d.items()})

    def make_monic(self, d: dict) -> tuple:
        lm = min(d)
        inv = self.field.inv(d[lm])
        mul = self.field.mul
        tail = sorted((k, mul(inv, c)) for k, c in d.items() if k != lm)
        return (lm, self.layout.ex(lm), tail)

    def reduce(self, f: dict, reducers: list, elements: list, full: bool = True) -> dict:
        """Remainder of ``f`` modulo the listed basis elements."""
        f = dict(f)
        heap = list(f)
        heapq.heapify(heap)
        ex = self.layout.ex
        p = self.p
        out = {}
        while heap:
            m = heapq.heappop(heap)
            c = f.pop(m, None)
            if c is None:
                continue
            mex = ex(m)
            for idx in reducers:
                lm, lmex, tail = elements[idx]
                if all(map(_le, lmex, mex)):
                    break
            else:
                out[m] = c
                if not full:
                    out.update(f)
                    return out
                continue
            q = tuple(map(_sub, m, lm))
            if p is None:
                for gk, gc in tail:
                    mm = tuple(map(_add, q, gk))
                    old = f.get(mm)
                    if old is None:
                        f[mm] = -c * gc
                        heapq.heappush(heap, mm)
                    else:
                        v = old - c * gc
                        if v:
                            f[mm] = v
                        else:
                            del f[mm]
            else:
                for gk, gc in tail:
                    mm = tuple(map(_add, q, gk))
                    old = f.get(mm)
                    if old is None:
                        f[mm] = (-c * gc) % p
                        heapq.heappush(heap, mm)
                    else:
                        v = (old - c * gc) % p
                        if v:
                            f[mm] = v
                        else:
                            del f[mm]
        return out

    def spoly(self, a: tuple, b: tuple) -> dict:
        L = self.layout.lcm(a[0], b[0])
        qa = tuple(map(_sub, L, a[0]))
        qb = tuple(map(_sub, L, b[0]))
        f: dict = {}
        p = self.p
        for k, c in a[2]:
            f[tuple(map(_add, qa, k))] = c
        for k, c in b[2]:
            mm = tuple(map(_add, qb, k))
            old = f.get(mm)
            v = -c if old is None else old - c
            if p is not None:
                v %= p
            if v:
                f[mm] = v
            elif old is not None:
                del f[mm]
        return f

    def buchberger(self, gens: list[dict]) -> list[tuple]:
        layout = self.layout
        elements: list[tuple] = []
        active: list[int] = []
        pairs: list[tuple] = []  # (lcm, i, j)
        counter = 0

        def lcm_of(i, j):
            return layout.lcm(elements[i][0], elements[j][0])

        def disjoint(i, j):
            a, b = layout.decode(elements[i][0]), layout.decode(elements[j][0])
            return not any(x and y for x, y in zip(a, b))

        def update(h):
            nonlocal pairs, active
            hex_ = elements[h][1]
            cand = [(g, layout.lcm(elements[g][0], elements[h][0])) for g in active]
            kept = []
            for idx, (g1, l1) in enumerate(cand):
                if disjoint(h, g1):
                    kept.append((g1, l1))
                    continue
                l1ex = layout.ex(l1)
                others = cand[idx + 1:] + kept
                if not any(_divides(layout.ex(l2), l1ex) for _, l2 in others):
                    kept.append((g1, l1))
            new_pairs = [(l, g, h) for g, l in kept if not disjoint(h, g)]
            survivors = []
            for l, i, j in pairs:
                if _divides(hex_, layout.ex(l)) and lcm_of(i, h) != l and lcm_of(j, h) != l:
                    continue
                survivors.append((l, i, j))
            pairs = survivors + new_pairs
            active = [g for g in active if not _divides(hex_, elements[g][1])]
            active.append(h)

        def add_element(d):
            elements.append(self.make_monic(d))
            update(len(elements) - 1)

        def sorted_reducers():
            return sorted(active, key=lambda i: (len(elements[i][2]), elements[i][0]))

        for g in sorted(gens, key=lambda d: min(d), reverse=True):
            r = self.reduce(g, sorted_reducers(), elements)
            if r:
                add_element(r)
        while pairs:
            best = min(range(len(pairs)), key=lambda k: (layout.total_degree(pairs[k][0]), pairs[k][0], pairs[k][1], pairs[k][2]))
            l, i, j = pairs.pop(best)
            counter += 1
            if counter > self.max_pairs:
                raise ResourceLimit(f"Groebner computation exceeded {self.max_pairs} pair reductions")
            s = self.spoly(elements[i], elements[j])
            if not s:
                continue
            r = self.reduce(s, sorted_reducers(), elements)
            if r:
                add_element(r)
        # reduced basis: minimal leading monomials, then tail reduction
        basis = [elements[i] for i in active]
        basis.sort(key=lambda e: e[0])
        minimal = []
        for k, e in enumerate(basis):
            if not any(_divides(o[1], e[1]) for t, o in enumerate(basis) if t != k and (o[0] != e[0] or t < k)):
                minimal.append(e)
        out = []
        for k, e in enumerate(minimal):
            others = [o for t, o in enumerate(minimal) if t != k]
            d = {e[0]: self.field.one()}
            tail = self.reduce(dict(e[2]), list(range(len(others))), others)
            d.update(tail)
            out.append(self.make_monic(d))
        out.sort(key=lambda e: e[0])
        self.pairs_used = counter
        return out


def _engine(ring: PolyRing, order: MonomialOrder, max_pairs: int | None) -> _Engine:
    return _Engine(ring, _Layout(ring, order), DEFAULT_MAX_PAIRS if max_pairs is None else max_pairs)


class Ideal:
    """Ideal of a polynomial ring with a lazily cached reduced Groebner basis."""

    def __init__(self, ring: PolyRing, gens: Iterable[Poly] = (), max_pairs: int | None = None):
        gl = []
        for g in gens:
            g = ring(g)
            if g.ring != ring:
                raise VarSetMismatch("generator from a different ring")
            if g and g not in gl:
                gl.append(g)
        self.ring = ring
        self.gens: tuple[Poly, ...] = tuple(gl)
        self.max_pairs = max_pairs
        self._cache: dict = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.gens]})"

    def _basis_internal(self, order: MonomialOrder):
        with self._lock:
            hit = self._cache.get(order)
            if hit is None:
                eng = _engine(self.ring, order, self.max_pairs)
                internal = eng.buchberger([eng.to_internal(g) for g in self.gens])
                hit = (eng, internal)
                self._cache[order] = hit
            return hit

    def groebner_basis(self, order: MonomialOrder = DegRevLex) -> list[Poly]:
        """Reduced basis, monic, sorted by leading monomial (largest first)."""
        eng, internal = self._basis_internal(order)
        return [eng.to_poly(dict([(lm, eng.field.one())] + tail)) for lm, _, tail in internal]

    def normal_form(self, f: Poly, order: MonomialOrder = DegRevLex) -> Poly:
        f = self.ring(f)
        eng, internal = self._basis_internal(order)
        r = eng.reduce(eng.to_internal(f), list(range(len(internal))), internal)
        return eng.to_poly(r)

    def contains(self, f: Poly) -> bool:
        return not self.normal_form(f)

    def __contains__(self, f):
        return self.contains(f)

    def contains_ideal(self, other: "Ideal") -> bool:
        self._same_ring(other)
        return all(self.contains(g) for g in other.gens)

    def equals(self, other: "Ideal") -> bool:
        return self.contains_ideal(other) and other.contains_ideal(self)

    def is_unit(self) -> bool:
        basis = self.groebner_basis()
        return len(basis) == 1 and basis[0].degree() == 0

    def _same_ring(self, other: "Ideal"):
        if other.ring != self.ring:
            raise VarSetMismatch("ideals live in different rings")

    def __add__(self, other: "Ideal") -> "Ideal":
        self._same_ring(other)
        return Ideal(self.ring, self.gens + other.gens, self.max_pairs)

    def embed(self, ring: PolyRing) -> "Ideal":
        """The extension of this ideal to a larger ring."""
        return Ideal(ring, [g.embed(ring) for g in self.gens], self.max_pairs)

    # -- derived ideals ---------------------------------------------------
    def eliminate(self, drop: Iterable[str]) -> "Ideal":
        drop = list(drop)
        for l in drop:
            self.ring.position(l)
        keep = [l for l in self.ring.labels if l not in set(drop)]
        sub = PolyRing(self.ring.field, keep)
        if not drop:
            return Ideal(sub, [g.embed(sub) for g in self.gens], self.max_pairs)
        basis = self.groebner_basis(BlockElim(drop))
        idx = [self.ring.position(l) for l in drop]
        kept = [g for g in basis if all(m[i] == 0 for m in g.coeffs for i in idx)]
        return Ideal(sub, [g.embed(sub) for g in kept], self.max_pairs)

    def intersect(self, other: "Ideal") -> "Ideal":
        self._same_ring(other)
        t = self.ring.fresh_label("t")
        big = self.ring.extend([t])
        tv = big.var(t)
        gens = [tv * g.embed(big) for g in self.gens]
        gens += [(1 - tv) * g.embed(big) for g in other.gens]
        res = Ideal(big, gens, self.max_pairs).eliminate([t])
        return Ideal(self.ring, [g.embed(self.ring) for g in res.gens], self.max_pairs)

    def quotient(self, f: Poly) -> "Ideal":
        f = self.ring(f)
        if not f:
            raise ValueError("quotient by the zero polynomial")
        inter = self.intersect(Ideal(self.ring, [f]))
        return Ideal(self.ring, [divide_exact(g, f) for g in inter.gens], self.max_pairs)

    def saturate(self, f: Poly) -> "Ideal":
        current = self
        while True:
            nxt = current.quotient(f)
            if current.contains_ideal(nxt):
                return current
            current = nxt

    def radical_contains(self, f: Poly) -> bool:
        """Rabinowitsch trick: f is in the radical iff 1 is in I + <1 - y f>."""
        f = self.ring(f)
        if not f:
            raise ValueError("radical membership of the zero polynomial")
        y = self.ring.fresh_label("y")
        big = self.ring.extend([y])
        gens = [g.embed(big) for g in self.gens] + [1 - big.var(y) * f.embed(big)]
        return Ideal(big, gens, self.max_pairs).is_unit()

    def dimension(self) -> int:
        """Krull dimension of the quotient ring; -1 for the unit ideal."""
        n = self.ring.ngens
        basis = self.groebner_basis()
        if any(g.degree() == 0 for g in basis):
            return -1
        masks = []
        for g in basis:
            lm = g.leading_monomial()
            masks.append(sum(1 << i for i, e in enumerate(lm) if e))
        masks = _minimal_masks(masks)
        for size in range(n, -1, -1):
            for combo in combinations(range(n), size):
                s = 0
                for i in combo:
                    s |= 1 << i
                if not any(m & s == m for m in masks):
                    return size
        return 0  # pragma: no cover - the empty set always qualifies

    def codimension(self) -> int:
        """``#vars - dimension``; the unit ideal reports ``#vars + 1``."""
        return self.ring.ngens - self.dimension()


def _minimal_masks(masks: list[int]) -> list[int]:
    uniq = sorted(set(masks), key=lambda m: bin(m).count("1"))
    out: list[int] = []
    for m in uniq:
        if not any(o & m == o for o in out):
            out.append(m)
    return out


def divide_exact(g: Poly, f: Poly) -> Poly:
    """The quotient g/f; raises ExactDivisionFailure on a nonzero remainder."""
    ring = g.ring
    eng = _engine(ring, DegRevLex, None)
    fd = eng.to_internal(f)
    lm = min(fd)
    lc = fd[lm]
    field = ring.field
    inv = field.inv(lc)
    lmex = eng.layout.ex(lm)
    rem = eng.to_internal(g)
    quot: dict = {}
    while rem:
        m = min(rem)
        if not _divides(lmex, eng.layout.ex(m)):
            raise ExactDivisionFailure(f"{f} does not divide {g}")
        c = field.mul(rem[m], inv)
        q = tuple(map(_sub, m, lm))
        quot[q] = c
        for k, v in fd.items():
            mm = tuple(map(_add, q, k))
            w = field.sub(rem.get(mm, field.zero()), field.mul(c, v))
            if w == 0:
                rem.pop(mm, None)
            else:
                rem[mm] = w
    # quotient keys are differences of keys; decode handles them linearly
    return eng.to_poly(quot)


# -- functional interface ----------------------------------------------------


def groebner_basis(I: Ideal, order: MonomialOrder = DegRevLex) -> list[Poly]:
    return I.groebner_basis(order)


def normal_form(f: Poly, I: Ideal, order: MonomialOrder = DegRevLex) -> Poly:
    return I.normal_form(f, order)


def ideal_member(f: Poly, I: Ideal) -> bool:
    return I.contains(f)


def ideal_equal(I: Ideal, J: Ideal) -> bool:
    return I.equals(J)


def eliminate(I: Ideal, drop: Iterable[str]) -> Ideal:
    return I.eliminate(drop)


def ideal_intersect(I: Ideal, J: Ideal) -> Ideal:
    return I.intersect(J)


def ideal_quotient(I: Ideal, f: Poly) -> Ideal:
    return I.quotient(f)


def saturate(I: Ideal, f: Poly) -> Ideal:
    return I.saturate(f)


def radical_member(f: Poly, I: Ideal) -> bool:
    return I.radical_contains(f)


def krull_dimension(I: Ideal) -> int:
    return I.dimension()


def codimension(I: Ideal) -> int:
    return I.codimension()


def spoly_reduces_to_zero(I: Ideal, order: MonomialOrder = DegRevLex) -> bool:
    """Buchberger's criterion on the cached reduced basis."""
    eng, internal = I._basis_internal(order)
    idx = list(range(len(internal)))
    for i, j in combinations(idx, 2):
        s = eng.spoly(internal[i], internal[j])
        if s and eng.reduce(s, idx, internal):
            return False
    return True
