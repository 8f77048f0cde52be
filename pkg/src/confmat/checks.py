"""Named identity checks with deterministic JSON reports.

Each check returns a :class:`CheckReport`; timing is kept out of the
payload so that identical inputs give byte-identical reports.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Any, Callable

from . import configuration as cf
from . import families as fam
from .configuration import Realization
from .errors import BadParameter, ConfmatError, GenericityFailure
from .fields import GF, QQ, Field, Scalar
from .groebner import Ideal
from .linalg import Matrix, rank as mat_rank
from .poly import PolyRing, proportionality

DEFAULT_FIELD = GF(101)


@dataclass
class CheckContext:
    field: Field = DEFAULT_FIELD
    instance: Realization | None = None
    seed: int = 0
    samples: int | None = None  # random cases; None means the documented default
    field_given: bool = False

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    def count(self, default: int) -> int:
        return default if self.samples is None else self.samples


@dataclass
class CheckReport:
    check: str
    statement: str
    instance: str
    status: str  # pass, fail or skipped
    witness: dict = dc_field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "statement": self.statement,
            "instance": self.instance,
            "status": self.status,
            "witness": self.witness,
        }


@dataclass(frozen=True)
class CheckSpec:
    name: str
    statement: str
    fn: Callable[[CheckContext], tuple[bool, str, dict]]


REGISTRY: dict[str, CheckSpec] = {}


def _register(name: str, statement: str):
    def deco(fn):
        REGISTRY[name] = CheckSpec(name, statement, fn)
        return fn

    return deco


def run_check(name: str, ctx: CheckContext) -> CheckReport:
    spec = REGISTRY[name]
    t0 = time.perf_counter()
    try:
        ok, instance, witness = spec.fn(ctx)
        status = "pass" if ok else "fail"
    except ConfmatError as exc:
        if not isinstance(exc, _SKIP_ERRORS):
            raise
        instance, witness, status = "n/a", {"reason": str(exc)}, "skipped"
    return CheckReport(name, spec.statement, instance, status, witness, time.perf_counter() - t0)


class SkipCheck(ConfmatError):
    """Raised by a check that does not apply to the given instance."""


# instances that cannot be built over the requested field are skipped, not failed
_SKIP_ERRORS = (SkipCheck, BadParameter, GenericityFailure)


# -- instance pools ---------------------------------------------------------------


def _pool(ctx: CheckContext, random_default: int, r_max: int = 5, n_max: int = 8,
          salt: str = "pool") -> list[tuple[str, Realization]]:
    if ctx.instance is not None:
        return [("input", ctx.instance)]
    out = list(fam.catalog(ctx.field).items())
    rng = ctx.rng(salt)
    for k in range(ctx.count(random_default)):
        n = rng.randint(1, n_max)
        r = rng.randint(0, min(r_max, n))
        out.append((f"random{k}", fam.random_realization(ctx.field, r, n, rng)))
    return out


def _describe(pool) -> str:
    names = [name for name, _ in pool]
    randoms = sum(1 for n in names if n.startswith("random"))
    fixed = [n for n in names if not n.startswith("random")]
    text = ",".join(fixed)
    if randoms:
        text += f" + {randoms} random"
    return text


def _scalar(s: Scalar | None):
    return None if s is None else str(s)


# -- polynomial identities -------------------------------------------------------------


@_register("cauchy-binet", "det of the configuration form equals the basis expansion of psi_W")
def _cauchy_binet(ctx):
    pool = _pool(ctx, 200, salt="cb")
    bad = [name for name, W in pool if W.det_form() != W.config_poly()]
    return not bad, _describe(pool), {"instances": len(pool), "counterexamples": bad}


@_register("deletion-contraction", "psi_W = psi_(W minus e) + x_e psi_(W/e) in an adapted basis, with the loop and coloop cases")
def _deletion_contraction(ctx):
    pool = _pool(ctx, 100, salt="dc")
    bad, checked = [], 0
    for name, W in pool:
        for e in W.labels:
            checked += 1
            if not cf.deletion_contraction_check(W, e):
                bad.append([name, e])
    return not bad, _describe(pool), {"elements_checked": checked, "counterexamples": bad}


@_register("duality", "bases of the dual realization are the complements of the bases")
def _duality(ctx):
    pool = _pool(ctx, 50, n_max=7, salt="du")
    bad = []
    for name, W in pool:
        D = W.dual()
        comp = sorted([l for l in W.labels if l not in set(B)] for B in W.matroid.bases())
        if sorted(D.matroid.bases()) != comp or not D.dual().same_space(W):
            bad.append(name)
    return not bad, _describe(pool), {"instances": len(pool), "counterexamples": bad}


@_register("cremona", "the Cremona transform of psi_W is a square multiple of psi of the dual")
def _cremona(ctx):
    pool = _pool(ctx, 100, salt="cr")
    bad, witnesses = [], {}
    for name, W in pool:
        c = cf.duality_ratio(W)
        ok = c is not None and c.is_square()[0]
        if not ok:
            bad.append(name)
        elif not name.startswith("random"):
            witnesses[name] = {"ratio": str(c), "root": str(c.is_square()[1])}
    return not bad, _describe(pool), {"instances": len(pool), "square_witnesses": witnesses, "counterexamples": bad}


def _connected_pool(ctx, default_names):
    if ctx.instance is not None:
        return [("input", ctx.instance)]
    cat = fam.catalog(ctx.field)
    return [(n, cat[n]) for n in default_names if n in cat]


@_register("handle-formula", "psi_W is a combination, with nonzero square coefficients, of psi_(W/(E-H)) psi_(W minus H) and x^H psi_(W/H)")
def _handle_formula(ctx):
    pool = _connected_pool(ctx, ["prism", "wheel3", "whirl3", "wheel4", "u24"])
    results, bad = [], []
    for name, W in pool:
        M = W.matroid
        if not M.is_connected():
            raise SkipCheck(f"{name} is not connected")
        handles = [h.elements for h in M.handle_partition() if len(h.elements) < W.n]
        for H in handles:
            coeffs = cf.handle_formula_coefficients(W, H)
            ok = coeffs is not None and cf.squares_report(coeffs)[0]
            results.append({"instance": name, "handle": list(H),
                            "coefficients": None if coeffs is None else [str(c) for c in coeffs],
                            "ok": ok})
            if not ok:
                bad.append([name, list(H)])
    return not bad, ",".join(n for n, _ in pool), {"cases": results, "counterexamples": bad}


@_register("two-separation", "psi_W = psi_(W/E1) psi_(W|E1) + psi_(W|E2) psi_(W/E2) up to nonzero squares for an exact 2-separation")
def _two_separation(ctx):
    pool = _connected_pool(ctx, ["prism", "theta"])
    results, bad = [], []
    for name, W in pool:
        if not W.matroid.is_connected():
            raise SkipCheck(f"{name} is not connected")
        for E1 in W.matroid.separations(2):
            coeffs = cf.two_separation_coefficients(W, E1)
            ok = coeffs is not None and cf.squares_report(coeffs)[0]
            results.append({"instance": name, "E1": E1,
                            "coefficients": None if coeffs is None else [str(c) for c in coeffs],
                            "ok": ok})
            if not ok:
                bad.append([name, E1])
    if not results:
        raise SkipCheck("no exact 2-separations")
    return not bad, ",".join(n for n, _ in pool), {"separations": len(results), "cases": results, "counterexamples": bad}


@_register("dodgson", "Dodgson condensation identities for the configuration form in a basis adapted to B")
def _dodgson(ctx):
    pool = _pool(ctx, 100, salt="do")
    bad, checked = [], 0
    for name, W in pool:
        bases = W.matroid.bases()
        chosen = bases if ctx.instance is not None else bases[:3]
        for B in chosen:
            checked += 1
            if not cf.dodgson_check(W, B):
                bad.append([name, B])
    return not bad, _describe(pool), {"bases_checked": checked, "counterexamples": bad}


# -- ideal-level checks -------------------------------------------------------------


def _ideal_pool(ctx):
    if ctx.instance is not None:
        return [("input", ctx.instance)]
    f = ctx.field
    return _buildable([
        ("triangle", lambda: fam.triangle_realization(f)),
        ("prism", lambda: fam.prism_realization(f)),
        ("wheel3", lambda: fam.wheel_whirl_realization(3, 1, f)),
        ("whirl3", lambda: fam.wheel_whirl_realization(3, 2, f)),
    ])


def _buildable(builders) -> list[tuple[str, Realization]]:
    """The instances that exist over the requested field."""
    out = []
    for name, build in builders:
        try:
            out.append((name, build()))
        except _SKIP_ERRORS:
            continue
    return out


@_register("lemma50-membership", "every generator of J_W lies in M_W, and psi_W = det Q_W lies in M_W")
def _jacobian_in_minors(ctx):
    pool = _ideal_pool(ctx)
    bad = []
    for name, W in pool:
        M = W.minors_ideal()
        for g in list(W.jacobian_ideal().gens) + [W.det_form()]:
            if not M.contains(g):
                bad.append([name, str(g)])
    return not bad, ",".join(n for n, _ in pool), {"counterexamples": bad}


@_register("thm13-radical", "M_W and J_W have the same radical: M_W generators lie in rad J_W and J_W lies in M_W")
def _radical_cross_membership(ctx):
    pool = _ideal_pool(ctx)
    bad, counts = [], {}
    for name, W in pool:
        J, M = W.jacobian_ideal(), W.minors_ideal()
        n = 0
        for g in M.gens:
            n += 1
            if not J.radical_contains(g):
                bad.append([name, "M in rad J", str(g)])
        for g in J.gens:
            n += 1
            if not M.contains(g):
                bad.append([name, "J in M", str(g)])
        counts[name] = n
    return not bad, ",".join(n for n, _ in pool), {"memberships": counts, "counterexamples": bad}


@_register("lemma31-restriction", "M_W + <x_e> = M_(W minus e) + <x_e> and J_(W minus e) lies in J_W + <x_e> for non-(co)loops e")
def _zero_restriction(ctx):
    pool = _ideal_pool(ctx)
    bad, checked = [], 0
    for name, W in pool:
        M = W.matroid
        special = set(M.loops()) | set(M.coloops())
        for e in W.labels:
            if e in special:
                continue
            checked += 1
            if not cf.zero_restriction_check(W, e):
                bad.append([name, e])
    return not bad, ",".join(n for n, _ in pool), {"elements_checked": checked, "counterexamples": bad}


@_register("lemma2-coefficients", "c_(W,B) / (c_(W/F,B-F) c_(W|F,B&F)) is one nonzero square for all bases B compatible with F")
def _coefficient_factorization(ctx):
    if ctx.instance is not None:
        pool = [("input", ctx.instance)]
    else:
        f = ctx.field
        pool = _buildable([
            ("prism", lambda: fam.prism_realization(f)),
            ("wheel3", lambda: fam.wheel_whirl_realization(3, 1, f)),
            ("whirl3", lambda: fam.wheel_whirl_realization(3, 2, f)),
            ("wheel4", lambda: fam.wheel_whirl_realization(4, 1, f)),
        ])
    bad, checked = [], 0
    for name, W in pool:
        for k in range(W.n + 1):
            for F in combinations(W.labels, k):
                checked += 1
                if not cf.basis_coefficient_check(W, F):
                    bad.append([name, list(F)])
    return not bad, ",".join(n for n, _ in pool), {"subsets_checked": checked, "counterexamples": bad}


@_register("prop28-quotient", "psi of ker(phi) equals the squared lifted-minor expansion up to a nonzero square")
def _quotient_formula(ctx):
    rng = ctx.rng("q")
    bad, cases = [], 0
    pool = []
    if ctx.instance is not None:
        W = ctx.instance
        if W.rank == 0:
            raise SkipCheck("rank-0 realization has no nonzero covector")
        for _ in range(ctx.count(10)):
            phi = [W.field.random_element(rng) for _ in range(W.rank)]
            if any(v != 0 for v in phi):
                pool.append(("input", W, phi))
    else:
        while len(pool) < ctx.count(100):
            n = rng.randint(2, 7)
            r = rng.randint(1, min(5, n))
            W = fam.random_realization(ctx.field, r, n, rng)
            phi = [ctx.field.random_element(rng) for _ in range(r)]
            if any(v != 0 for v in phi):
                pool.append((f"random{len(pool)}", W, phi))
    for name, W, phi in pool:
        cases += 1
        ref = cf.elementary_quotient(W, phi).config_poly()
        formula = cf.quotient_poly_formula(W, phi)
        c = proportionality(formula, ref)
        ok = c is not None and c.is_square()[0]
        w = next(i for i, v in enumerate(phi) if W.field.convert(v) != 0)
        ext = cf.extend_quotient(W, phi, w, W.ring.fresh_label("e"))
        new = ext.labels[-1]
        ok = ok and ext.delete([new]).same_space(W) and ext.contract([new]).same_space(cf.elementary_quotient(W, phi))
        if not ok:
            bad.append({"instance": name, "matrix": W.matrix.to_lists(), "phi": [str(v) for v in phi]})
    desc = "input" if ctx.instance is not None else f"{cases} random"
    return not bad, desc, {"cases": cases, "counterexamples": bad}


@_register("prop78-second-kirchhoff", "the momentum 2-forest polynomial is psi of the elementary quotient of the graph configuration")
def _second_kirchhoff(ctx):
    rng = ctx.rng("g")
    field = ctx.field
    bad, cases = [], []
    for k in range(ctx.count(10)):
        G = fam.random_graph(rng, max_vertices=5, max_edges=7)
        p = fam.random_momentum(G, rng, field)
        W = fam.graph_configuration(G, field)
        phi = fam.momentum_covector(G, p, field)
        lhs = fam.second_kirchhoff(G, p, "forest", field)
        if all(field.convert(v) == 0 for v in phi):
            continue
        rhs = cf.elementary_quotient(W, phi).config_poly()
        if not lhs and not rhs:
            ok, c = True, None
        else:
            c = proportionality(lhs, rhs)
            ok = c is not None and c.is_square()[0]
        cases.append({"graph": G.to_json(), "ratio": _scalar(c)})
        if not ok:
            bad.append({"graph": G.to_json(), "momentum": {v: str(Scalar(field, x)) for v, x in p.items()}})
    return not bad, f"{len(cases)} random graphs", {"cases": len(cases), "counterexamples": bad}


# -- matroid checks ----------------------------------------------------------------------


@_register("handle-counts", "handle partitions of the named instances, and at least k+1 non-disconnective handles for decompositions of length k >= 2")
def _handle_counts(ctx):
    witness: dict[str, Any] = {}
    bad = []

    def partition(W):
        return [[list(h.elements), h.disconnective] for h in W.matroid.handle_partition()]

    if ctx.instance is None:
        P = fam.prism_realization(QQ)
        got = partition(P)
        witness["prism"] = got
        if got != [[["1", "2"], False], [["3", "4"], False], [["5", "6"], False]]:
            bad.append("prism partition")
        E = fam.ternary_handles_realization()
        got = partition(E)
        witness["ternary6"] = got
        if got != [[["1", "2"], False], [["3", "4"], False], [["5"], False], [["6"], False]]:
            bad.append("ternary6 partition")
        for n in (3, 4, 5):
            for t in (1, 2):
                W = fam.wheel_whirl_realization(n, t, QQ)
                hp = W.matroid.handle_partition()
                if len(hp) != 2 * n or any(h.size != 1 or h.disconnective for h in hp):
                    bad.append(f"wheel/whirl n={n} t={t}")
        pool = fam.connected_catalog()
    else:
        pool = [("input", ctx.instance)]
    rows = []
    for name, W in pool:
        M = W.matroid
        if not M.is_connected():
            raise SkipCheck(f"{name} is not connected")
        d = M.handle_decomposition()
        nondisc = sum(1 for h in M.handle_partition() if not h.disconnective)
        ok = d.length < 2 or nondisc >= d.length + 1
        rows.append([name, d.length, nondisc])
        if not ok:
            bad.append(f"{name}: k={d.length}, non-disconnective={nondisc}")
    witness["decompositions"] = rows
    witness["counterexamples"] = bad
    return not bad, f"{len(pool)} connected instances", witness


# -- named examples ------------------------------------------------------------------------


def _fields(ctx, defaults):
    return [ctx.field] if ctx.field_given else defaults


@_register("prism-example45", "four colon ideals of the prism Jacobian ideal equal the listed ideals")
def _prism_colons(ctx):
    cases = [
        ("2*((x3+x4)*x5^2 - (x3+x4)*x6^2)", ["x1", "x2", "x3*x4*x5+x3*x4*x6+x3*x5*x6+x4*x5*x6"]),
        ("2*(x1+x2)^2*x4*x6", ["x3", "x4", "x5", "x6"]),
        ("2*x2*(x3+x4)*x6^2", ["x1", "x2", "x3+x4", "x5+x6"]),
        ("2*(x1+x2)*(x3+x4)*x6", ["x1", "x2", "x3", "x4", "x5", "x6"]),
    ]
    out, bad = [], []
    for F in _fields(ctx, [QQ, GF(101)]):
        if F.characteristic == 2:
            raise SkipCheck("the colon identities need characteristic other than 2")
        W = fam.prism_realization(F)
        R, J = W.ring, W.jacobian_ideal()
        for f, gens in cases:
            Q = J.quotient(R(f))
            ok = Q.equals(Ideal(R, [R(g) for g in gens]))
            out.append({"field": str(F), "colon_by": f, "ok": ok})
            if not ok:
                bad.append({"field": str(F), "colon_by": f, "got": [str(g) for g in Q.groebner_basis()]})
    return not bad, "prism", {"cases": out, "counterexamples": bad}


WHIRL_CODIMENSIONS = {"Q": 4, "Fp:7": 4, "Fp:2": 4, "Fp:5": 4, "Fp:3": 3}


@_register("whirl-example55", "codimension of the partial-derivative ideal of the whirl matroid polynomial, and of J_W for t = 2")
def _whirl_codimensions(ctx):
    W = fam.wheel_whirl_realization(3, 2, QQ)
    bases = W.matroid.bases()
    found, bad = {}, []
    for F in [QQ, GF(7), GF(2), GF(5), GF(3)]:
        pM = fam.matroid_polynomial(bases, W.labels, F)
        I = Ideal(pM.ring, [pM.diff(l) for l in pM.ring.labels])
        c = I.codimension()
        found[str(F)] = c
        if c != WHIRL_CODIMENSIONS[str(F)]:
            bad.append(str(F))
    psi_codims = {}
    for F in _fields(ctx, [QQ, GF(101)]):
        if F.characteristic == 2:
            continue  # no whirl realization with t = 2
        c = fam.wheel_whirl_realization(3, 2, F).jacobian_ideal().codimension()
        psi_codims[str(F)] = c
        if c != 3:
            bad.append(f"psi_W over {F}")
    return not bad, "whirl3", {"matroid_polynomial_codim": found, "config_polynomial_codim": psi_codims, "counterexamples": bad}


@_register("triangle-example107", "triangle: M_W = J_W = <x1,x2,x3> over Q; over F_2, J_W = <x1-x3, x2-x3, x3^2> is non-reduced")
def _triangle_ideals(ctx):
    R = fam.triangle_realization(QQ)
    ring = R.ring
    m = Ideal(ring, ring.gens())
    w = {}
    w["Q_minors"] = R.minors_ideal().equals(m)
    w["Q_jacobian"] = R.jacobian_ideal().equals(m)
    T = fam.triangle_realization(GF(2))
    r2 = T.ring
    J = T.jacobian_ideal()
    w["F2_jacobian"] = J.equals(Ideal(r2, [r2("x1-x3"), r2("x2-x3"), r2("x3^2")]))
    w["F2_x3_radical"] = J.radical_contains(r2("x3"))
    w["F2_x3_member"] = J.contains(r2("x3"))
    w["F2_basis"] = [str(g) for g in J.groebner_basis()]
    ok = w["Q_minors"] and w["Q_jacobian"] and w["F2_jacobian"] and w["F2_x3_radical"] and not w["F2_x3_member"]
    return ok, "triangle", w


@_register("hessian-rank", "for generic rank-2 realizations the matrix (c_(W,{i,j})) has rank 3")
def _hessian(ctx):
    ranks, bad = {}, []
    F = ctx.field if ctx.field_given else QQ
    for n in range(4, 9):
        W = fam.generic_uniform(2, n, seed=ctx.seed + n, field=F)
        H = hessian_matrix(W)
        rk = mat_rank(H)
        ranks[str(n)] = rk
        if rk != 3:
            bad.append(n)
    return not bad, "generic U(2,n), n=4..8", {"ranks": ranks, "field": str(F), "counterexamples": bad}


def hessian_matrix(W: Realization) -> Matrix:
    f = W.field
    n = W.n
    rows = [[f.zero()] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        c = W.coefficient([W.labels[i], W.labels[j]]).value
        rows[i][j] = rows[j][i] = c
    return Matrix._raw(f, rows, n)


@_register("u36-relation", "entries of the form of the printed rank-3 realization satisfy q12 + q13 = q23")
def _u36(ctx):
    F = ctx.field if ctx.field_given else QQ
    W = fam.u36_example_realization(F)
    Q = W.config_form()
    ok = Q[0][1] + Q[0][2] == Q[1][2]
    return ok, "u36", {"q12": str(Q[0][1]), "q13": str(Q[0][2]), "q23": str(Q[1][2])}


CHECK_NAMES = sorted(REGISTRY)
