"""Sparse multivariate polynomials with variables named by ground-set labels.

A :class:`PolyRing` fixes a field and an ordered tuple of labels; a
:class:`Poly` maps exponent tuples to nonzero raw coefficients.  Terms are
printed in degree-reverse-lexicographic order with ``x_{e1} > x_{e2} > ...``.

Purely numeric labels print as ``x<label>`` (label ``"3"`` is the variable
``x3``); every other label is used verbatim as the variable name.
"""

from __future__ import annotations

import re
from operator import add as _add
from typing import Any, Iterable, Mapping, Sequence

from .errors import (
    LabelCollision,
    MissingAssignment,
    ParseError,
    UnknownLabel,
    VarSetMismatch,
    FieldMismatch,
)
from .fields import Field, Scalar
from .linalg import Matrix, solve

NEG_INF = float("-inf")


def var_name(label: str) -> str:
    return f"x{label}" if label.isdigit() else label


def degrevlex_key(exp: Sequence[int]) -> tuple:
    """Sort key; a larger key is a larger monomial."""
    return (sum(exp),) + tuple(-e for e in reversed(exp))


class PolyRing:
    """Polynomial ring ``field[x_e : e in labels]`` with a fixed variable order."""

    __slots__ = ("field", "labels", "index", "_names", "__weakref__")

    def __init__(self, field: Field, labels: Iterable[str]):
        labels = tuple(str(l) for l in labels)
        if len(set(labels)) != len(labels):
            raise LabelCollision(f"duplicate labels in {labels}")
        self.field = field
        self.labels = labels
        self.index = {l: i for i, l in enumerate(labels)}
        names = {}
        for l in labels:
            names[l] = l
        for l in labels:
            vn = var_name(l)
            names.setdefault(vn, l)
        self._names = names

    @property
    def ngens(self) -> int:
        return len(self.labels)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self.field == other.field and self.labels == other.labels

    def __hash__(self):
        return hash((self.field, self.labels))

    def __repr__(self):
        return f"PolyRing({self.field}, {list(self.labels)})"

    def _make(self, coeffs: dict) -> "Poly":
        p = object.__new__(Poly)
        p.ring = self
        p.coeffs = coeffs
        return p

    def zero(self) -> "Poly":
        return self._make({})

    def one(self) -> "Poly":
        return self.constant(1)

    def constant(self, c: Any) -> "Poly":
        v = self.field.convert(c)
        return self._make({} if v == 0 else {(0,) * self.ngens: v})

    def var(self, label: str) -> "Poly":
        i = self.position(label)
        e = [0] * self.ngens
        e[i] = 1
        return self._make({tuple(e): self.field.one()})

    def gens(self) -> list["Poly"]:
        return [self.var(l) for l in self.labels]

    def position(self, label: str) -> int:
        try:
            return self.index[label]
        except KeyError:
            raise UnknownLabel(f"unknown label {label!r}") from None

    def monomial(self, labels: Iterable[str]) -> "Poly":
        """The square-free monomial x^S."""
        e = [0] * self.ngens
        for l in labels:
            e[self.position(l)] += 1
        return self._make({tuple(e): self.field.one()})

    def from_terms(self, terms: Mapping[tuple, Any]) -> "Poly":
        conv = self.field.convert
        out = {}
        for exp, c in terms.items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != self.ngens or min(exp, default=0) < 0:
                raise ValueError(f"bad exponent {exp}")
            v = conv(c)
            if v != 0:
                out[exp] = v
        return self._make(out)

    def __call__(self, obj: Any) -> "Poly":
        if isinstance(obj, Poly):
            if obj.ring != self:
                return obj.embed(self)
            return obj
        if isinstance(obj, str):
            return parse_poly(self, obj)
        return self.constant(obj)

    def parse(self, text: str) -> "Poly":
        return parse_poly(self, text)

    def extend(self, new_labels: Iterable[str]) -> "PolyRing":
        new_labels = list(new_labels)
        clash = set(new_labels) & set(self.labels)
        if clash:
            raise LabelCollision(f"labels {sorted(clash)} already in the ring")
        return PolyRing(self.field, self.labels + tuple(new_labels))

    def fresh_label(self, stem: str) -> str:
        label, k = stem, 0
        while label in self.index or label in self._names:
            k += 1
            label = f"{stem}{k}"
        return label

    def resolve(self, name: str) -> str:
        try:
            return self._names[name]
        except KeyError:
            raise UnknownLabel(f"unknown variable {name!r}") from None


class Poly:
    """Immutable sparse polynomial; ``coeffs`` maps exponent tuples to raw values."""

    __slots__ = ("ring", "coeffs")

    # -- coercion -------------------------------------------------------
    def _other(self, other) -> "Poly | None":
        if isinstance(other, Poly):
            if other.ring != self.ring:
                if other.ring.field != self.ring.field:
                    raise FieldMismatch(f"{self.ring.field} vs {other.ring.field}")
                raise VarSetMismatch(f"{self.ring.labels} vs {other.ring.labels}")
            return other
        if isinstance(other, (int, Scalar)):
            return self.ring.constant(other)
        return None

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.ring.field
        out = dict(self.coeffs)
        for m, c in o.coeffs.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = f.add(v, c)
                if v == 0:
                    del out[m]
                else:
                    out[m] = v
        return self.ring._make(out)

    __radd__ = __add__

    def __neg__(self):
        neg = self.ring.field.neg
        return self.ring._make({m: neg(c) for m, c in self.coeffs.items()})

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        f = self.ring.field
        fadd, fmul = f.add, f.mul
        out: dict = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in o.coeffs.items():
                m = tuple(map(_add, m1, m2))
                v = fmul(c1, c2)
                w = out.get(m)
                out[m] = v if w is None else fadd(w, v)
        return self.ring._make({m: c for m, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        f = self.ring.field
        v = f.convert(c)
        if v == 0:
            return self.ring.zero()
        return self.ring._make({m: f.mul(v, x) for m, x in self.coeffs.items()})

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        return self.scale(Scalar(self.ring.field, self.ring.field.inv(self.leading_coefficient().value)))

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self.coeffs == other.coeffs
        if isinstance(other, (int, Scalar)):
            return self.coeffs == self.ring.constant(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, frozenset(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    # -- structure ------------------------------------------------------
    def degree(self):
        """Total degree; the zero polynomial has degree ``-inf``."""
        if not self.coeffs:
            return NEG_INF
        return max(sum(m) for m in self.coeffs)

    def terms(self) -> list[tuple[tuple, Scalar]]:
        """(exponent, coefficient) pairs in descending degrevlex order."""
        f = self.ring.field
        return [(m, Scalar(f, self.coeffs[m])) for m in sorted(self.coeffs, key=degrevlex_key, reverse=True)]

    def leading_monomial(self) -> tuple:
        return max(self.coeffs, key=degrevlex_key)

    def leading_coefficient(self) -> Scalar:
        return Scalar(self.ring.field, self.coeffs[self.leading_monomial()])

    def coefficient(self, labels: Iterable[str] | tuple) -> Scalar:
        """Coefficient of x^S (a label iterable) or of an exponent tuple."""
        if isinstance(labels, tuple) and all(isinstance(x, int) for x in labels):
            exp = labels
        else:
            exp = self.ring.monomial(labels).leading_monomial()
        f = self.ring.field
        return Scalar(f, self.coeffs.get(exp, f.zero()))

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.coeffs}) <= 1

    def is_multilinear(self) -> bool:
        return all(e <= 1 for m in self.coeffs for e in m)

    def support(self) -> set[tuple]:
        return set(self.coeffs)

    def support_sets(self) -> list[frozenset]:
        """Monomials of a multilinear polynomial as label sets."""
        labels = self.ring.labels
        return [frozenset(labels[i] for i, e in enumerate(m) if e) for m in self.coeffs]

    def variables(self) -> list[str]:
        used = set()
        for m in self.coeffs:
            used.update(i for i, e in enumerate(m) if e)
        return [self.ring.labels[i] for i in sorted(used)]

    # -- calculus and substitution ----------------------------------------
    def diff(self, label: str) -> "Poly":
        i = self.ring.position(label)
        f = self.ring.field
        out = {}
        for m, c in self.coeffs.items():
            k = m[i]
            if k:
                v = f.mul(f.convert(k), c)
                if v != 0:
                    out[m[:i] + (k - 1,) + m[i + 1:]] = v
        return self.ring._make(out)

    def substitute_zero(self, label: str) -> "Poly":
        i = self.ring.position(label)
        return self.ring._make({m: c for m, c in self.coeffs.items() if m[i] == 0})

    def evaluate(self, point: Mapping[str, Any]) -> Scalar:
        f = self.ring.field
        vals = []
        for l in self.ring.labels:
            if l not in point:
                raise MissingAssignment(f"no value for {l!r}")
            vals.append(f.convert(point[l]))
        total = f.zero()
        for m, c in self.coeffs.items():
            t = c
            for v, e in zip(vals, m):
                if e:
                    t = f.mul(t, f._pow(v, e))
            total = f.add(total, t)
        return Scalar(f, total)

    def substitute(self, mapping: Mapping[str, "Poly"], ring: PolyRing | None = None) -> "Poly":
        """Replace variables by polynomials of ``ring`` (default: own ring)."""
        ring = ring or self.ring
        images = []
        for l in self.ring.labels:
            if l in mapping:
                images.append(ring(mapping[l]))
            elif ring is self.ring or l in ring.index:
                images.append(ring.var(l))
            else:
                raise MissingAssignment(f"no image for {l!r}")
        total = ring.zero()
        for m, c in self.coeffs.items():
            t = ring.constant(Scalar(ring.field, c))
            for img, e in zip(images, m):
                if e:
                    t = t * img**e
            total = total + t
        return total

    def embed(self, ring: PolyRing) -> "Poly":
        """Map into a ring whose labels contain every label used here."""
        if ring.field != self.ring.field:
            raise FieldMismatch(f"{self.ring.field} vs {ring.field}")
        pos = []
        for i, l in enumerate(self.ring.labels):
            j = ring.index.get(l)
            pos.append(j)
        n = ring.ngens
        out = {}
        for m, c in self.coeffs.items():
            e = [0] * n
            for i, k in enumerate(m):
                if k:
                    j = pos[i]
                    if j is None:
                        raise UnknownLabel(f"label {self.ring.labels[i]!r} missing from target ring")
                    e[j] = k
            out[tuple(e)] = c
        return ring._make(out)

    # -- text -------------------------------------------------------------
    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def to_json(self) -> str:
        return format_poly(self)


def format_poly(f: Poly) -> str:
    if not f.coeffs:
        return "0"
    field = f.ring.field
    names = [var_name(l) for l in f.ring.labels]
    parts = []
    for m, c in f.terms():
        s = field.to_str(c.value)
        neg = s.startswith("-")
        if neg:
            s = s[1:]
        mono = "*".join(
            names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(m) if e
        )
        if not mono:
            body = s
        elif s == "1":
            body = mono
        else:
            body = f"{s}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


# ---------------------------------------------------------------------------
# parser: sums of products of factors; juxtaposition means multiplication

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str]]:
    text = text.replace("²", "^2").replace("³", "^3").replace("−", "-")
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        kind = m.lastgroup
        val = m.group(kind)
        out.append((kind, "^" if val == "**" else val))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if val != op:
            raise ParseError(f"expected {op!r} in {self.text!r}")

    def parse(self) -> Poly:
        if not self.toks:
            raise ParseError("empty polynomial text")
        result = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return result

    def expr(self) -> Poly:
        sign = 1
        kind, val = self.peek()
        if val in ("+", "-"):
            self.take()
            sign = -1 if val == "-" else 1
        result = self.term()
        if sign < 0:
            result = -result
        while True:
            kind, val = self.peek()
            if val not in ("+", "-"):
                return result
            self.take()
            t = self.term()
            result = result + t if val == "+" else result - t

    def term(self) -> Poly:
        result = self.power()
        while True:
            kind, val = self.peek()
            if val == "*":
                self.take()
                result = result * self.power()
            elif val == "/":
                self.take()
                d = self.power()
                if not d.coeffs or d.degree() != 0:
                    raise ParseError("division only by nonzero constants")
                result = result.scale(Scalar(self.ring.field, self.ring.field.inv(d.coeffs[(0,) * self.ring.ngens])))
            elif kind in ("num", "name") or val == "(":
                result = result * self.power()
            else:
                return result

    def power(self) -> Poly:
        base = self.atom()
        kind, val = self.peek()
        if val == "^":
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer")
            base = base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return self.ring.constant(int(val))
        if kind == "name":
            return self.ring.var(self.ring.resolve(val))
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if val == "-":
            return -self.power()
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_poly(ring: PolyRing, text: str) -> Poly:
    return _Parser(ring, text).parse()


# ---------------------------------------------------------------------------
# scalar relations between polynomials


def partial_derivative(f: Poly, label: str) -> Poly:
    return f.diff(label)


def substitute_zero(f: Poly, label: str) -> Poly:
    return f.substitute_zero(label)


def evaluate(f: Poly, point: Mapping[str, Any]) -> Scalar:
    return f.evaluate(point)


def proportionality(f: Poly, g: Poly) -> Scalar | None:
    """The scalar ``c != 0`` with ``f = c*g``, if it exists."""
    if f.ring != g.ring:
        raise VarSetMismatch("proportionality across rings")
    if not f.coeffs or not g.coeffs or f.coeffs.keys() != g.coeffs.keys():
        return None
    field = f.ring.field
    m0 = next(iter(f.coeffs))
    c = field.div(f.coeffs[m0], g.coeffs[m0])
    for m, v in f.coeffs.items():
        if v != field.mul(c, g.coeffs[m]):
            return None
    return Scalar(field, c)


def span_membership(f: Poly, gens: Sequence[Poly]) -> list[Scalar] | None:
    """Scalars ``l_i`` with ``f = sum l_i g_i``, or None when f is outside the span."""
    if not gens:
        raise ValueError("span_membership needs at least one generator")
    ring = f.ring
    for g in gens:
        if g.ring != ring:
            raise VarSetMismatch("span_membership across rings")
    field = ring.field
    monos = sorted(set(f.coeffs).union(*(g.coeffs for g in gens)), key=degrevlex_key, reverse=True)
    z = field.zero()
    a = Matrix._raw(field, [[g.coeffs.get(m, z) for g in gens] for m in monos], len(gens))
    rhs = [f.coeffs.get(m, z) for m in monos]
    if not monos:
        return [Scalar(field, z) for _ in gens]
    x = solve(a, rhs)
    if x is None:
        return None
    return [Scalar(field, v) for v in x]


def poly_arith(f: Poly, g: Poly, op: str) -> Poly:
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")
