"""Named instances: graphs and their configurations, wheels, whirls, the prism,
generic uniform realizations and matroid basis polynomials."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Iterable, Mapping, Sequence

from .configuration import Realization, poly_det
from .errors import (
    BadParameter,
    Disconnected,
    EmptyBases,
    GenericityFailure,
    InvalidMomentum,
    LabelCollision,
    NotAWheelRealization,
    ParseError,
    UnknownLabel,
)
from .fields import QQ, Field, Scalar
from .linalg import Matrix, det_raw, rank as mat_rank
from .poly import Poly, PolyRing


# -- graphs ---------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Directed multigraph; an edge is ``(label, tail, head)``."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "edges", tuple((str(a), str(b), str(c)) for a, b, c in self.edges))
        if len(set(self.vertices)) != len(self.vertices):
            raise LabelCollision("duplicate vertex labels")
        labels = [e[0] for e in self.edges]
        if len(set(labels)) != len(labels):
            raise LabelCollision("duplicate edge labels")
        vs = set(self.vertices)
        for lab, t, h in self.edges:
            if t not in vs or h not in vs:
                raise UnknownLabel(f"edge {lab!r} has an endpoint outside the vertex set")

    @property
    def edge_labels(self) -> list[str]:
        return [e[0] for e in self.edges]

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Graph":
        try:
            return cls(tuple(data["vertices"]), tuple(tuple(e) for e in data["edges"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad graph JSON: {exc}") from None

    def components(self, edge_subset: Iterable[str] | None = None) -> list[list[str]]:
        """Vertex classes of the spanning subgraph on the given edges."""
        keep = set(self.edge_labels if edge_subset is None else edge_subset)
        parent = {v: v for v in self.vertices}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for lab, t, h in self.edges:
            if lab in keep:
                a, b = find(t), find(h)
                if a != b:
                    parent[b] = a
        groups: dict[str, list[str]] = {}
        for v in self.vertices:
            groups.setdefault(find(v), []).append(v)
        return list(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def delete_edge(self, label: str) -> "Graph":
        return Graph(self.vertices, tuple(e for e in self.edges if e[0] != label))

    def contract_edge(self, label: str) -> "Graph":
        """Identify the endpoints of a non-loop edge (the head merges into the tail)."""
        lab, t, h = next(e for e in self.edges if e[0] == label)
        ren = lambda v: t if v == h else v
        verts = tuple(v for v in self.vertices if v != h or t == h)
        return Graph(verts, tuple((a, ren(b), ren(c)) for a, b, c in self.edges if a != label))


def _forest_components(G: Graph, subset: Sequence[str]) -> list[list[str]] | None:
    """Components if the edge subset is acyclic, else None."""
    parent = {v: v for v in G.vertices}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ends = {lab: (t, h) for lab, t, h in G.edges}
    for lab in subset:
        t, h = ends[lab]
        a, b = find(t), find(h)
        if a == b:
            return None
        parent[b] = a
    groups: dict[str, list[str]] = {}
    for v in G.vertices:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def incidence_rows(G: Graph) -> list[list[int]]:
    """One row per vertex: +1 at edges entering it, -1 at edges leaving it."""
    rows = []
    for v in G.vertices:
        row = []
        for _, t, h in G.edges:
            row.append(0 if t == h else (1 if h == v else (-1 if t == v else 0)))
        rows.append(row)
    return rows


def graph_basis_vertices(G: Graph) -> list[str]:
    """Vertices whose covectors form the row basis: all but the last of each component."""
    drop = {comp[-1] for comp in G.components()}
    return [v for v in G.vertices if v not in drop]


def graph_configuration(G: Graph, field: Field = QQ) -> Realization:
    rows = incidence_rows(G)
    keep = set(graph_basis_vertices(G))
    chosen = [r for v, r in zip(G.vertices, rows) if v in keep]
    return Realization(field, G.edge_labels, Matrix(field, chosen, ncols=len(G.edges)))


def spanning_trees(G: Graph) -> list[list[str]]:
    if not G.is_connected():
        raise Disconnected("spanning trees need a connected graph")
    k = len(G.vertices) - 1
    return [list(S) for S in combinations(G.edge_labels, k) if _forest_components(G, S) is not None]


def _ring(G: Graph, field: Field) -> PolyRing:
    return PolyRing(field, G.edge_labels)


def kirchhoff(G: Graph, field: Field = QQ) -> Poly:
    ring = _ring(G, field)
    total = ring.zero()
    for T in spanning_trees(G):
        total = total + ring.monomial(T)
    return total


def symanzik(G: Graph, field: Field = QQ) -> Poly:
    ring = _ring(G, field)
    total = ring.zero()
    for T in spanning_trees(G):
        total = total + ring.monomial([l for l in G.edge_labels if l not in set(T)])
    return total


def validate_momentum(G: Graph, p: Mapping[str, Any], field: Field) -> dict[str, Any]:
    vals = {}
    for v in G.vertices:
        vals[v] = field.convert(p.get(v, 0))
    extra = set(p) - set(G.vertices)
    if extra:
        raise InvalidMomentum(f"momentum on unknown vertices {sorted(extra)}")
    if all(x == 0 for x in vals.values()):
        raise InvalidMomentum("momentum must be nonzero")
    for comp in G.components():
        s = field.zero()
        for v in comp:
            s = field.add(s, vals[v])
        if s != 0:
            raise InvalidMomentum(f"momentum does not sum to zero on component {comp}")
    return vals


def second_kirchhoff(G: Graph, p: Mapping[str, Any], variant: str = "forest", field: Field = QQ) -> Poly:
    """Momentum-weighted spanning 2-forest polynomial."""
    if variant not in ("forest", "cutset"):
        raise BadParameter(f"unknown variant {variant!r}")
    if not G.is_connected():
        raise Disconnected("second Kirchhoff polynomial needs a connected graph")
    vals = validate_momentum(G, p, field)
    ring = _ring(G, field)
    out = ring.zero()
    k = len(G.vertices) - 2
    if k < 0:
        return out
    for S in combinations(G.edge_labels, k):
        comps = _forest_components(G, S)
        if comps is None or len(comps) != 2:
            continue
        m = field.zero()
        for v in comps[0]:
            m = field.add(m, vals[v])
        w = field.mul(m, m)
        if w == 0:
            continue
        mono = S if variant == "forest" else [l for l in G.edge_labels if l not in set(S)]
        out = out + ring.monomial(mono).scale(Scalar(field, w))
    return out


def momentum_covector(G: Graph, p: Mapping[str, Any], field: Field = QQ) -> list:
    """Values of the momentum functional on the rows of graph_configuration(G)."""
    vals = validate_momentum(G, p, field)
    return [vals[v] for v in graph_basis_vertices(G)]


def random_graph(rng: random.Random, max_vertices: int = 5, max_edges: int = 7) -> Graph:
    """A random connected multigraph (loops and parallel edges allowed)."""
    nv = rng.randint(2, max_vertices)
    verts = [f"v{i + 1}" for i in range(nv)]
    edges = []
    for i in range(1, nv):  # random spanning tree first
        j = rng.randrange(i)
        a, b = (verts[i], verts[j]) if rng.random() < 0.5 else (verts[j], verts[i])
        edges.append((a, b))
    ne = rng.randint(nv - 1, max(nv - 1, max_edges))
    while len(edges) < ne:
        edges.append((rng.choice(verts), rng.choice(verts)))
    rng.shuffle(edges)
    return Graph(tuple(verts), tuple((f"e{k + 1}", a, b) for k, (a, b) in enumerate(edges)))


def random_momentum(G: Graph, rng: random.Random, field: Field = QQ) -> dict[str, Any]:
    while True:
        p = {v: field.random_element(rng) for v in G.vertices}
        last = G.vertices[-1]
        s = field.zero()
        for v in G.vertices[:-1]:
            s = field.add(s, p[v])
        p[last] = field.neg(s)
        if any(x != 0 for x in p.values()):
            return p


# -- matroid polynomial ------------------------------------------------------------


def matroid_polynomial(bases: Iterable[Iterable[str]], E: Sequence[str], field: Field = QQ) -> Poly:
    bases = [list(B) for B in bases]
    if not bases:
        raise EmptyBases("no bases given")
    if len({len(B) for B in bases}) != 1:
        raise BadParameter("bases must have equal cardinality")
    ring = PolyRing(field, E)
    total = ring.zero()
    for B in bases:
        total = total + ring.monomial(B)
    return total


# -- named realizations ---------------------------------------------------------------


def wheel_labels(n: int) -> list[str]:
    return [f"s{i}" for i in range(1, n + 1)] + [f"r{i}" for i in range(1, n + 1)]


def wheel_graph(n: int) -> Graph:
    """Spokes s_i = hub -> v_i, rim edges r_i = v_{i+1} -> v_i (indices mod n)."""
    if n < 3:
        raise BadParameter("wheels need n >= 3")
    verts = [f"v{i}" for i in range(1, n + 1)] + ["hub"]
    edges = [(f"s{i}", "hub", f"v{i}") for i in range(1, n + 1)]
    edges += [(f"r{i}", f"v{i % n + 1}", f"v{i}") for i in range(1, n + 1)]
    return Graph(tuple(verts), tuple(edges))


def wheel_whirl_realization(n: int, t: Any = 1, field: Field = QQ) -> Realization:
    """Rows w^1 = s1 + r1 - t r_n and w^i = s_i + r_i - r_{i-1}."""
    tv = field.convert(t)
    if tv == field.one():
        if n < 3:
            raise BadParameter("wheels need n >= 3")
    else:
        if tv == 0:
            raise BadParameter("t must be nonzero")
        if n < 2:
            raise BadParameter("whirls need n >= 2")
    z = field.zero()
    one = field.one()
    rows = []
    for i in range(n):
        row = [z] * (2 * n)
        row[i] = one
        row[n + i] = one
        prev = n + (i - 1) % n
        row[prev] = field.sub(row[prev], tv if i == 0 else one)
        rows.append(row)
    return Realization(field, wheel_labels(n), Matrix._raw(field, rows, 2 * n))


def prism_realization(field: Field = QQ) -> Realization:
    rows = [
        [1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 0],
        [0, 0, 0, 0, 1, 1],
        [1, 0, 1, 0, 1, 0],
    ]
    return Realization(field, [str(i) for i in range(1, 7)], rows)


def theta_graph() -> Graph:
    """The (2,2,2)-theta graph with e1..e6 from {v1,v2,v3} to {v4,v5}."""
    verts = ("v1", "v2", "v3", "v4", "v5")
    edges = (
        ("1", "v1", "v4"), ("2", "v1", "v5"),
        ("3", "v2", "v4"), ("4", "v2", "v5"),
        ("5", "v3", "v4"), ("6", "v3", "v5"),
    )
    return Graph(verts, edges)


def triangle_graph() -> Graph:
    return Graph(("v1", "v2", "v3"), (("1", "v1", "v2"), ("2", "v2", "v3"), ("3", "v3", "v1")))


def triangle_realization(field: Field = QQ) -> Realization:
    return Realization(field, ["1", "2", "3"], [[1, 0, 1], [0, 1, 1]])


def u24_example_realization(field: Field = QQ) -> Realization:
    return Realization(field, ["1", "2", "3", "4"], [[1, 0, 1, 1], [0, 1, 1, -1]])


def u36_example_realization(field: Field = QQ) -> Realization:
    rows = [[1, 0, 0, 1, 2, 3], [0, 1, 0, 2, 3, 4], [0, 0, 1, 2, 6, 12]]
    return Realization(field, [str(i) for i in range(1, 7)], rows)


def ternary_handles_realization() -> Realization:
    from .fields import GF

    rows = [
        [1, 0, 0, 0, 1, 1],
        [0, 1, 0, 0, 1, 1],
        [0, 0, 1, 0, 1, 2],
        [0, 0, 0, 1, 1, 2],
    ]
    return Realization(GF(3), [str(i) for i in range(1, 7)], rows)


def identity_realization(n: int, field: Field = QQ) -> Realization:
    return Realization(field, [str(i) for i in range(1, n + 1)], Matrix.identity(field, n))


def generic_uniform(r: int, n: int, seed: int = 0, field: Field = QQ, attempts: int = 100,
                    bound: int = 9) -> Realization:
    """Random r x n matrix with every maximal minor nonzero (seeded)."""
    if not 0 <= r <= n:
        raise BadParameter("need 0 <= r <= n")
    rng = random.Random(seed)
    for _ in range(attempts):
        rows = [[field.convert(rng.randint(-bound, bound)) for _ in range(n)] for _ in range(r)]
        if all(det_raw(field, [[row[j] for j in c] for row in rows]) != 0 for c in combinations(range(n), r)):
            return Realization(field, [str(i) for i in range(1, n + 1)], Matrix._raw(field, rows, n))
    raise GenericityFailure(f"no generic {r}x{n} matrix after {attempts} attempts")


def random_realization(field: Field, r: int, n: int, rng: random.Random, density: float = 0.8) -> Realization:
    """A random r x n full-rank matrix; entries zero with probability 1 - density."""
    if r > n:
        raise BadParameter("rank cannot exceed the ground set size")
    for _ in range(1000):
        rows = [
            [field.random_element(rng) if rng.random() < density else field.zero() for _ in range(n)]
            for _ in range(r)
        ]
        m = Matrix._raw(field, rows, n)
        if mat_rank(m) == r:
            return Realization(field, [str(i) for i in range(1, n + 1)], m)
    raise GenericityFailure("could not draw a full-rank matrix")


def catalog(field: Field = QQ) -> dict[str, Realization]:
    """Named instances used across the checks."""
    out = {
        "triangle": triangle_realization(field),
        "prism": prism_realization(field),
        "u24": u24_example_realization(field),
        "wheel3": wheel_whirl_realization(3, 1, field),
        "wheel4": wheel_whirl_realization(4, 1, field),
        "free3": identity_realization(3, field),
        "theta": graph_configuration(theta_graph(), field),
    }
    if field.characteristic != 2:
        # whirls are not binary
        out["whirl3"] = wheel_whirl_realization(3, 2, field)
        out["whirl4"] = wheel_whirl_realization(4, 2, field)
    if field.characteristic not in (2, 3):
        out["u36"] = u36_example_realization(field)
    return out


def cycle_graph(n: int) -> Graph:
    verts = tuple(f"v{i}" for i in range(1, n + 1))
    return Graph(verts, tuple((str(i), f"v{i}", f"v{i % n + 1}") for i in range(1, n + 1)))


def complete_graph(n: int) -> Graph:
    verts = tuple(f"v{i}" for i in range(1, n + 1))
    pairs = list(combinations(verts, 2))
    return Graph(verts, tuple((str(k + 1), a, b) for k, (a, b) in enumerate(pairs)))


def complete_bipartite_graph(m: int, n: int) -> Graph:
    left = [f"a{i}" for i in range(1, m + 1)]
    right = [f"b{j}" for j in range(1, n + 1)]
    edges = [(a, b) for a in left for b in right]
    return Graph(tuple(left + right), tuple((str(k + 1), a, b) for k, (a, b) in enumerate(edges)))


def theta_family_graph(lengths: Sequence[int]) -> Graph:
    """Two poles joined by internally disjoint paths of the given lengths."""
    verts = ["p", "q"]
    edges = []
    for k, length in enumerate(lengths):
        inner = [f"u{k}_{i}" for i in range(1, length)]
        verts += inner
        path = ["p"] + inner + ["q"]
        for a, b in zip(path, path[1:]):
            edges.append((str(len(edges) + 1), a, b))
    return Graph(tuple(verts), tuple(edges))


def fano_realization() -> Realization:
    from .fields import GF

    rows = [[1, 0, 0, 1, 1, 0, 1], [0, 1, 0, 1, 0, 1, 1], [0, 0, 1, 0, 1, 1, 1]]
    return Realization(GF(2), [str(i) for i in range(1, 8)], rows)


def connected_catalog(field: Field = QQ) -> list[tuple[str, Realization]]:
    """Connected instances of assorted shapes (at least twenty over large fields).

    Instances that do not exist over ``field`` (whirls in characteristic 2,
    degenerate specializations, generic matrices over tiny fields) are left out.
    """
    gc = lambda G: graph_configuration(G, field)
    builders = [
        ("triangle", lambda: triangle_realization(field)),
        ("prism", lambda: prism_realization(field)),
        ("u24", lambda: u24_example_realization(field)),
        ("u36", lambda: u36_example_realization(field)),
        ("ternary6", ternary_handles_realization),
        ("fano", fano_realization),
        ("cycle5", lambda: gc(cycle_graph(5))),
        ("K4", lambda: gc(complete_graph(4))),
        ("K5", lambda: gc(complete_graph(5))),
        ("K33", lambda: gc(complete_bipartite_graph(3, 3))),
        ("K24", lambda: gc(complete_bipartite_graph(2, 4))),
        ("theta123", lambda: gc(theta_family_graph([1, 2, 3]))),
        ("theta223", lambda: gc(theta_family_graph([2, 2, 3]))),
        ("theta2222", lambda: gc(theta_family_graph([2, 2, 2, 2]))),
        ("generic25", lambda: generic_uniform(2, 5, seed=1, field=field)),
        ("generic35", lambda: generic_uniform(3, 5, seed=2, field=field)),
        ("generic36", lambda: generic_uniform(3, 6, seed=3, field=field)),
    ]
    builders += [(f"wheel{n}", lambda n=n: wheel_whirl_realization(n, 1, field)) for n in (3, 4, 5, 6)]
    builders += [(f"whirl{n}", lambda n=n: wheel_whirl_realization(n, 2, field)) for n in (3, 4, 5)]
    out = []
    for name, build in builders:
        try:
            W = build()
        except (BadParameter, GenericityFailure):
            continue
        if W.matroid.is_connected():
            out.append((name, W))
    return out


# -- tridiagonal coordinates for wheels and whirls -------------------------------------


@dataclass
class WheelCoordinates:
    n: int
    t: Scalar
    ring: PolyRing  # coordinates z1..zn, y1..yn of the normal form
    Q: list[list[Poly]]
    substitution: dict[str, Poly]  # new coordinate -> polynomial in the original ring

    def determinant(self) -> Poly:
        return poly_det(self.Q, self.ring)

    def pulled_back(self, target: PolyRing) -> list[list[Poly]]:
        return [[q.substitute(self.substitution, target) for q in row] for row in self.Q]


def wheel_parameter(W: Realization) -> tuple[int, Scalar]:
    """Recover (n, t) from a realization built by wheel_whirl_realization."""
    n = W.n // 2
    if W.n != 2 * n or n < 3 or list(W.labels) != wheel_labels(n) or W.rank != n:
        raise NotAWheelRealization("expected ground set s1..sn, r1..rn with n >= 3")
    f = W.field
    t = f.neg(W.matrix.rows[0][2 * n - 1])
    if W.matrix != wheel_whirl_realization(n, Scalar(f, t), f).matrix:
        raise NotAWheelRealization("rows differ from the wheel/whirl normal form")
    return n, Scalar(f, t)


def wheel_coordinate_change(W: Realization) -> WheelCoordinates:
    """Tridiagonal-with-corners matrix Q_n and coordinates with det Q_n = psi_W.

    With z'_1 = z_1 + y_1 + t^2 y_n and z'_i = z_i + y_i + y_{i-1}, the form
    has off-diagonal entries -y_i and corner -t y_n; the scalings
    y'_i = -y_i (i < n) and y'_n = -t y_n turn it into Q_n.
    """
    n, t = wheel_parameter(W)
    f = W.field
    labels = [f"z{i}" for i in range(1, n + 1)] + [f"y{i}" for i in range(1, n + 1)]
    ring = PolyRing(f, labels)
    zero = ring.zero()
    Q = [[zero] * n for _ in range(n)]
    for i in range(n):
        Q[i][i] = ring.var(f"z{i + 1}")
    for i in range(n - 1):
        Q[i][i + 1] = Q[i + 1][i] = ring.var(f"y{i + 1}")
    Q[0][n - 1] = Q[n - 1][0] = ring.var(f"y{n}")
    old = W.ring
    z = [old.var(f"s{i}") for i in range(1, n + 1)]
    y = [old.var(f"r{i}") for i in range(1, n + 1)]
    sub = {}
    for i in range(n):
        if i == 0:
            sub["z1"] = z[0] + y[0] + y[n - 1].scale(t * t)
        else:
            sub[f"z{i + 1}"] = z[i] + y[i] + y[i - 1]
    for i in range(n - 1):
        sub[f"y{i + 1}"] = -y[i]
    sub[f"y{n}"] = y[n - 1].scale(-t)
    return WheelCoordinates(n, t, ring, Q, sub)


def load_graph(text: str) -> Graph:
    return Graph.from_json(json.loads(text))
