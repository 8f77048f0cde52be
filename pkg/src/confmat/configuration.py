"""Realizations W of a matroid, their polynomials, forms and ideals.

A :class:`Realization` is a full-row-rank matrix whose columns are indexed by
an ordered ground set.  The configuration polynomial is computed by summing
``det(A_B)^2 x^B`` over bases; the configuration form Q has entries
``sum_e x_e A[i][e] A[j][e]`` and ``det Q`` recovers the same polynomial.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Any, Iterable, Sequence

from .errors import (
    LabelCollision,
    NotA2Separation,
    NotABasis,
    NotAHandle,
    NotMultilinear,
    ParseError,
    TooLarge,
    UnknownLabel,
    ZeroCovector,
    FieldMismatch,
)
from .fields import Field, Scalar, parse_field
from .groebner import Ideal
from .linalg import Matrix, det_raw, kernel_basis, rank as mat_rank, row_basis, rref, solve
from .poly import Poly, PolyRing, proportionality, span_membership

MAX_SUBSETS = 1_000_000


class Realization:
    """A configuration ``W`` given by the row span of ``matrix``."""

    def __init__(self, field: Field, labels: Iterable[str], rows: Any):
        labels = tuple(str(l) for l in labels)
        if len(set(labels)) != len(labels):
            raise LabelCollision(f"duplicate ground-set labels {labels}")
        m = rows if isinstance(rows, Matrix) else Matrix(field, rows, ncols=len(labels))
        if m.ncols != len(labels):
            raise ValueError("matrix width does not match the ground set")
        if m.field != field:
            raise FieldMismatch("matrix and realization fields differ")
        if m.nrows and mat_rank(m) < m.nrows:
            m = row_basis(m)
        self.field = field
        self.labels = labels
        self.matrix = m
        self._lock = threading.RLock()
        self._ideals: dict = {}

    @classmethod
    def _trusted(cls, field: Field, labels: Sequence[str], rows, ncols: int) -> "Realization":
        return cls(field, labels, Matrix._raw(field, rows, ncols))

    # -- basic data ---------------------------------------------------------
    @property
    def rank(self) -> int:
        return self.matrix.nrows

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def ring(self) -> PolyRing:
        return PolyRing(self.field, self.labels)

    @cached_property
    def matroid(self):
        from .matroid import MatroidView

        return MatroidView(self)

    def position(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownLabel(f"unknown label {label!r}") from None

    def _check_labels(self, F: Iterable[str]) -> set[str]:
        F = set(F)
        for l in F:
            self.position(l)
        return F

    def __repr__(self):
        return f"Realization({self.field}, {list(self.labels)}, {self.matrix.to_lists()})"

    def same_space(self, other: "Realization") -> bool:
        """Equal ground sets and equal row spans."""
        if self.labels != other.labels or self.field != other.field:
            return False
        return row_basis(self.matrix) == row_basis(other.matrix) if self.rank else other.rank == 0

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "ground_set": list(self.labels),
            "matrix": self.matrix.to_json()["matrix"],
        }

    @classmethod
    def from_json(cls, data: dict, field: Field | None = None) -> "Realization":
        if "matrix" not in data:
            raise ParseError("realization JSON needs a 'matrix' entry")
        fld = field if field is not None else parse_field(data.get("field", "Q"))
        rows = data["matrix"]
        n = len(rows[0]) if rows else len(data.get("ground_set", []))
        labels = data.get("ground_set") or [str(i + 1) for i in range(n)]
        return cls(fld, labels, Matrix(fld, rows, ncols=len(labels)))

    # -- coordinates --------------------------------------------------------
    def coefficient(self, B: Iterable[str]) -> Scalar:
        """``c_{W,B} = det(A_B)^2``."""
        idx = sorted(self.position(l) for l in B)
        if len(idx) != self.rank:
            return Scalar(self.field, self.field.zero())
        d = det_raw(self.field, [[row[j] for j in idx] for row in self.matrix.rows])
        return Scalar(self.field, self.field.mul(d, d))

    def pivot_to(self, B: Iterable[str]) -> "Realization":
        """Same space with rows chosen so that the columns of B carry the identity."""
        idx = sorted(self.position(l) for l in B)
        if len(idx) != self.rank:
            raise NotABasis(f"{sorted(B)} has the wrong size for a basis")
        order = idx + [j for j in range(self.n) if j not in set(idx)]
        perm = self.matrix.columns(order)
        red, rk, piv = rref(perm)
        if piv != list(range(self.rank)):
            raise NotABasis(f"{sorted(B)} is not a basis")
        back = [0] * self.n
        for new, old in enumerate(order):
            back[old] = new
        return Realization._trusted(self.field, self.labels, [[r[back[j]] for j in range(self.n)] for r in red.rows], self.n)

    # -- minors ---------------------------------------------------------------
    def delete(self, F: Iterable[str]) -> "Realization":
        F = self._check_labels(F)
        keep = [j for j, l in enumerate(self.labels) if l not in F]
        return Realization(self.field, [self.labels[j] for j in keep], self.matrix.columns(keep))

    def restrict(self, F: Iterable[str]) -> "Realization":
        F = self._check_labels(F)
        return self.delete([l for l in self.labels if l not in F])

    def contract(self, F: Iterable[str]) -> "Realization":
        F = self._check_labels(F)
        f = self.field
        rows = [list(r) for r in self.matrix.rows]
        labels = list(self.labels)
        for e in [l for l in self.labels if l in F]:
            j = labels.index(e)
            piv = next((i for i, r in enumerate(rows) if r[j] != 0), None)
            if piv is not None:
                prow = rows[piv]
                s = f.inv(prow[j])
                prow = [f.mul(s, x) for x in prow]
                new_rows = []
                for i, r in enumerate(rows):
                    if i == piv:
                        continue
                    c = r[j]
                    if c != 0:
                        r = [f.sub(a, f.mul(c, b)) for a, b in zip(r, prow)]
                    new_rows.append(r)
                rows = new_rows
            rows = [r[:j] + r[j + 1:] for r in rows]
            del labels[j]
        return Realization._trusted(f, labels, rows, len(labels))

    def dual(self) -> "Realization":
        if self.rank == 0:
            return Realization(self.field, self.labels, Matrix.identity(self.field, self.n))
        k = kernel_basis(self.matrix)
        return Realization(self.field, self.labels, k)

    def direct_sum(self, other: "Realization") -> "Realization":
        if other.field != self.field:
            raise FieldMismatch("direct sum over different fields")
        clash = set(self.labels) & set(other.labels)
        if clash:
            raise LabelCollision(f"labels {sorted(clash)} occur in both summands")
        z = self.field.zero()
        rows = [list(r) + [z] * other.n for r in self.matrix.rows]
        rows += [[z] * self.n + list(r) for r in other.matrix.rows]
        return Realization._trusted(self.field, self.labels + other.labels, rows, self.n + other.n)

    def relabel(self, mapping: dict[str, str]) -> "Realization":
        return Realization(self.field, [mapping.get(l, l) for l in self.labels], self.matrix)

    def change_basis(self, T: Matrix) -> "Realization":
        """Rows replaced by ``T @ A`` for an invertible r x r matrix T."""
        return Realization(self.field, self.labels, T @ self.matrix)

    # -- polynomials ---------------------------------------------------------
    def config_poly(self) -> Poly:
        r, n, f = self.rank, self.n, self.field
        if comb(n, r) > MAX_SUBSETS:
            raise TooLarge(f"{comb(n, r)} basis candidates")
        rows = self.matrix.rows
        out = {}
        for combo in combinations(range(n), r):
            d = det_raw(f, [[row[j] for j in combo] for row in rows])
            if d != 0:
                e = [0] * n
                for j in combo:
                    e[j] = 1
                out[tuple(e)] = f.mul(d, d)
        return self.ring._make(out)

    def config_form(self) -> list[list[Poly]]:
        f, ring, n = self.field, self.ring, self.n
        rows = self.matrix.rows
        Q = [[None] * self.rank for _ in range(self.rank)]
        for i in range(self.rank):
            for j in range(i, self.rank):
                coeffs = {}
                for e in range(n):
                    v = f.mul(rows[i][e], rows[j][e])
                    if v != 0:
                        exp = [0] * n
                        exp[e] = 1
                        coeffs[tuple(exp)] = v
                Q[i][j] = Q[j][i] = ring._make(coeffs)
        return Q

    def det_form(self) -> Poly:
        return poly_det(self.config_form(), self.ring)

    # -- ideals --------------------------------------------------------------
    def jacobian_ideal(self, max_pairs: int | None = None) -> Ideal:
        psi = self.config_poly()
        gens = [psi] + [psi.diff(l) for l in self.labels]
        return Ideal(self.ring, gens, max_pairs)

    def minors_ideal(self, max_pairs: int | None = None) -> Ideal:
        return Ideal(self.ring, minors_generators(self), max_pairs)

    def ideal(self, which: str, max_pairs: int | None = None) -> Ideal:
        """Cached ``jacobian`` or ``minors`` ideal."""
        key = (which, max_pairs)
        with self._lock:
            if key not in self._ideals:
                if which == "jacobian":
                    self._ideals[key] = self.jacobian_ideal(max_pairs)
                elif which == "minors":
                    self._ideals[key] = self.minors_ideal(max_pairs)
                else:
                    raise ValueError(f"unknown ideal {which!r}")
            return self._ideals[key]


def poly_det(M: Sequence[Sequence[Poly]], ring: PolyRing) -> Poly:
    """Determinant by expansion along rows, memoised over column subsets."""
    r = len(M)
    if r == 0:
        return ring.one()
    D = {0: ring.one()}
    for size in range(1, r + 1):
        row = M[r - size]
        nd = {}
        for combo in combinations(range(r), size):
            mask = sum(1 << j for j in combo)
            total = ring.zero()
            for pos, j in enumerate(combo):
                entry = row[j]
                if not entry:
                    continue
                sub = D[mask & ~(1 << j)]
                if not sub:
                    continue
                term = entry * sub
                total = total + term if pos % 2 == 0 else total - term
            nd[mask] = total
        D = nd
    return D[(1 << r) - 1]


def minor(Q: Sequence[Sequence[Poly]], rows: Sequence[int], cols: Sequence[int], ring: PolyRing) -> Poly:
    return poly_det([[Q[i][j] for j in cols] for i in rows], ring)


def minors_generators(W: Realization) -> list[Poly]:
    """The (r-1)-minors of Q_W; for r <= 1 the unit ideal is returned."""
    r = W.rank
    if r <= 1:
        return [W.ring.one()]
    Q = W.config_form()
    gens = []
    for i in range(r):
        for j in range(i, r):
            rows = [a for a in range(r) if a != i]
            cols = [b for b in range(r) if b != j]
            g = minor(Q, rows, cols, W.ring)
            if g and g not in gens:
                gens.append(g)
    return gens


# -- functional interface ------------------------------------------------------


def config_poly(W: Realization) -> Poly:
    return W.config_poly()


def config_form(W: Realization) -> list[list[Poly]]:
    return W.config_form()


def det_form(W: Realization) -> Poly:
    return W.det_form()


def delete(W: Realization, F: Iterable[str]) -> Realization:
    return W.delete(F)


def contract(W: Realization, F: Iterable[str]) -> Realization:
    return W.contract(F)


def restrict(W: Realization, F: Iterable[str]) -> Realization:
    return W.restrict(F)


def dual(W: Realization) -> Realization:
    return W.dual()


def direct_sum(W1: Realization, W2: Realization) -> Realization:
    return W1.direct_sum(W2)


def jacobian_ideal(W: Realization) -> Ideal:
    return W.jacobian_ideal()


def minors_ideal(W: Realization) -> Ideal:
    return W.minors_ideal()


def cremona_transform(f: Poly) -> Poly:
    """``x^E f(1/x)``: the monomial x^S goes to x^(E-S)."""
    if not f.is_multilinear():
        raise NotMultilinear("Cremona transform needs a multilinear polynomial")
    if not f.is_homogeneous():
        raise NotMultilinear("Cremona transform needs a homogeneous polynomial")
    return f.ring._make({tuple(1 - e for e in m): c for m, c in f.coeffs.items()})


# -- elementary quotients -------------------------------------------------------


def _covector(W: Realization, phi: Sequence[Any]) -> list:
    if len(phi) != W.rank:
        raise ValueError(f"covector needs {W.rank} values, got {len(phi)}")
    vals = [W.field.convert(v) for v in phi]
    if all(v == 0 for v in vals):
        raise ZeroCovector("the covector vanishes")
    return vals


def elementary_quotient(W: Realization, phi: Sequence[Any]) -> Realization:
    """``W_phi = ker phi``, phi given by its values on the rows of W."""
    vals = _covector(W, phi)
    C = kernel_basis(Matrix._raw(W.field, [vals], W.rank))
    return Realization(W.field, W.labels, C @ W.matrix)


def lift_covector(W: Realization, phi: Sequence[Any]) -> list:
    """Some ``phi~`` on K^E with ``A phi~ = phi``."""
    vals = _covector(W, phi)
    x = solve(W.matrix, vals)
    if x is None:  # pragma: no cover - A has full row rank
        raise AssertionError("full-rank system without solution")
    return x


def quotient_poly_formula(W: Realization, phi: Sequence[Any]) -> Poly:
    """Expansion of psi of ker(phi) through maximal minors of W and a lift of phi."""
    f, r, n = W.field, W.rank, W.n
    lift = lift_covector(W, phi)
    rows = W.matrix.rows
    if comb(n, max(r - 1, 0)) > MAX_SUBSETS:
        raise TooLarge("too many subsets")
    out = {}
    for S in combinations(range(n), r - 1):
        Sset = set(S)
        total = f.zero()
        for e in range(n):
            if e in Sset or lift[e] == 0:
                continue
            cols = sorted(Sset | {e})
            d = det_raw(f, [[row[j] for j in cols] for row in rows])
            if d == 0:
                continue
            term = f.mul(lift[e], d)
            total = f.sub(total, term) if cols.index(e) % 2 else f.add(total, term)
        if total != 0:
            exp = [0] * n
            for j in S:
                exp[j] = 1
            out[tuple(exp)] = f.mul(total, total)
    return W.ring._make(out)


def extend_quotient(W: Realization, phi: Sequence[Any], w: int, e_new: str) -> Realization:
    """``W_{phi,w} = W_phi + K(w + e_new)`` where w is the w-th row of W.

    Row i receives the entry ``phi_i / phi_w`` in the new column, so deleting
    ``e_new`` gives back W and contracting it gives ``W_phi``.
    """
    vals = _covector(W, phi)
    if e_new in W.labels:
        raise LabelCollision(f"label {e_new!r} already in the ground set")
    if not 0 <= w < W.rank or vals[w] == 0:
        raise ValueError("the chosen row must have nonzero covector value")
    f = W.field
    inv = f.inv(vals[w])
    rows = [list(r) + [f.mul(v, inv)] for r, v in zip(W.matrix.rows, vals)]
    return Realization._trusted(f, W.labels + (e_new,), rows, W.n + 1)


# -- identity checks -------------------------------------------------------------


@dataclass
class CheckOutcome:
    ok: bool
    witness: dict


def squares_report(coeffs: Sequence[Scalar]) -> tuple[bool, list]:
    """Whether all coefficients are nonzero squares, with witnesses."""
    roots = []
    ok = True
    for c in coeffs:
        if c.is_zero():
            ok = False
            roots.append(None)
            continue
        flag, root = c.is_square()
        ok = ok and flag
        roots.append(str(root) if flag else None)
    return ok, roots


def dodgson_check(W: Realization, B: Iterable[str]) -> bool:
    """Dodgson identities for the form in a basis adapted to B."""
    B = list(B)
    if not W.matroid.is_basis(B):
        raise NotABasis(f"{sorted(B)} is not a basis")
    V = W.pivot_to(B)
    ring = V.ring
    Q = V.config_form()
    psi = poly_det(Q, ring)
    r = V.rank
    bcols = sorted(V.position(l) for l in B)
    bl = [V.labels[j] for j in bcols]

    def cof(skip_rows, skip_cols):
        rows = [a for a in range(r) if a not in skip_rows]
        cols = [a for a in range(r) if a not in skip_cols]
        return minor(Q, rows, cols, ring)

    for i in range(r):
        if psi.diff(bl[i]) != cof({i}, {i}):
            return False
    for i in range(r):
        for j in range(i + 1, r):
            lhs = cof({i}, {j}) ** 2
            rhs = psi.diff(bl[i]) * psi.diff(bl[j]) - psi * cof({i, j}, {i, j})
            if lhs != rhs:
                return False
    return True


def adapted_rows(W: Realization, e: str) -> Realization:
    """Rows where column e is the last unit vector (e not a loop)."""
    M = W.matroid
    j = W.position(e)
    B = [e]
    for l in W.labels:
        if l != e and M.is_independent(B + [l]):
            B.append(l)
        if len(B) == W.rank:
            break
    V = W.pivot_to(B)
    rows = list(V.matrix.rows)
    k = next(i for i, r in enumerate(rows) if r[j] != 0)
    rows = rows[:k] + rows[k + 1:] + [rows[k]]
    return Realization._trusted(W.field, W.labels, rows, W.n)


def deletion_contraction_check(W: Realization, e: str) -> bool:
    j = W.position(e)
    ring = W.ring
    psi = W.det_form()
    keep = [c for c in range(W.n) if c != j]
    small = [W.labels[c] for c in keep]
    if all(r[j] == 0 for r in W.matrix.rows):
        Wd = Realization._trusted(W.field, small, [[r[c] for c in keep] for r in W.matrix.rows], len(keep))
        return psi == Wd.det_form().embed(ring)
    V = adapted_rows(W, e)
    psi = V.det_form()
    rows = V.matrix.rows
    cut = lambda rs: [[r[c] for c in keep] for r in rs]
    xe = ring.var(e)
    if e in W.matroid.coloops():
        if any(rows[-1][c] != 0 for c in keep):
            return False
        Wd = Realization._trusted(W.field, small, cut(rows[:-1]), len(keep))
        return psi == xe * Wd.det_form().embed(ring)
    Wd = Realization._trusted(W.field, small, cut(rows), len(keep))
    Wc = Realization._trusted(W.field, small, cut(rows[:-1]), len(keep))
    return psi == Wd.det_form().embed(ring) + xe * Wc.det_form().embed(ring)


def handle_formula_coefficients(W: Realization, H: Iterable[str]) -> list[Scalar] | None:
    H = sorted(W._check_labels(H), key=W.position)
    M = W.matroid
    if not M.is_connected() or not H or len(H) == W.n or not M.is_handle(H):
        raise NotAHandle(f"{H} is not a proper handle of a connected matroid")
    ring = W.ring
    rest = [l for l in W.labels if l not in set(H)]
    g1 = W.contract(rest).config_poly().embed(ring) * W.delete(H).config_poly().embed(ring)
    g2 = ring.monomial(H) * W.contract(H).config_poly().embed(ring)
    return span_membership(W.config_poly(), [g1, g2])


def handle_formula_check(W: Realization, H: Iterable[str]) -> bool:
    coeffs = handle_formula_coefficients(W, H)
    return coeffs is not None and squares_report(coeffs)[0]


def two_separation_coefficients(W: Realization, E1: Iterable[str]) -> list[Scalar] | None:
    E1 = sorted(W._check_labels(E1), key=W.position)
    E2 = [l for l in W.labels if l not in set(E1)]
    M = W.matroid
    if (
        not M.is_connected()
        or min(len(E1), len(E2)) < 2
        or M.connectivity_function(E1) != 1
    ):
        raise NotA2Separation(f"{E1} is not an exact 2-separation of a connected matroid")
    ring = W.ring
    g1 = W.contract(E1).config_poly().embed(ring) * W.restrict(E1).config_poly().embed(ring)
    g2 = W.restrict(E2).config_poly().embed(ring) * W.contract(E2).config_poly().embed(ring)
    return span_membership(W.config_poly(), [g1, g2])


def two_separation_check(W: Realization, E1: Iterable[str]) -> bool:
    coeffs = two_separation_coefficients(W, E1)
    return coeffs is not None and squares_report(coeffs)[0]


def basis_coefficient_ratios(W: Realization, F: Iterable[str]) -> list[Scalar]:
    """``c_{W,B} / (c_{W/F,B-F} c_{W|F,B&F})`` over bases B with B&F a basis of M|F."""
    F = W._check_labels(F)
    Wc, Wr = W.contract(F), W.restrict(F)
    Mr = Wr.matroid
    out = []
    for B in W.matroid.bases():
        inside = [l for l in B if l in F]
        if not Mr.is_basis(inside):
            continue
        outside = [l for l in B if l not in F]
        den = Wc.coefficient(outside) * Wr.coefficient(inside)
        out.append(W.coefficient(B) / den)
    return out


def basis_coefficient_check(W: Realization, F: Iterable[str]) -> bool:
    ratios = basis_coefficient_ratios(W, F)
    return bool(ratios) and all(r == ratios[0] for r in ratios) and ratios[0].is_square()[0]


def zero_restriction_check(W: Realization, e: str) -> bool:
    """Setting x_e = 0 in M_W gives M of the deletion; J of the deletion lies in J_W + <x_e>."""
    ring = W.ring
    xe = ring.var(e)
    Wd = W.delete([e])
    MW = Ideal(ring, list(W.minors_ideal().gens) + [xe])
    Md = Ideal(ring, [g.embed(ring) for g in Wd.minors_ideal().gens] + [xe])
    if not MW.equals(Md):
        return False
    JW = Ideal(ring, list(W.jacobian_ideal().gens) + [xe])
    return all(JW.contains(g.embed(ring)) for g in Wd.jacobian_ideal().gens)


def duality_ratio(W: Realization) -> Scalar | None:
    """c with cremona(psi_W) = c * psi of the dual."""
    return proportionality(cremona_transform(W.config_poly()), W.dual().config_poly())
