"""Mapping-torus trichotomy and layered triangulations of pseudo-Anosov bundles.

The layered triangulation follows the path in the Farey graph spelled by the
cyclic RL word.  At each letter one diagonal exchange turns the fiber
triangulation ``{l, r, l-r}`` into ``{l, r, l+r}``; the tetrahedron between
the two layers has bottom diagonal ``l-r``, top diagonal ``l+r`` and hinge
edges ``l`` (left) and ``r`` (right), each hinge appearing as a pair of
opposite edges.  An ``R`` letter keeps ``l`` and replaces ``r`` by ``l+r``;
``L`` keeps ``r``.  Vertices are tracked as lattice points of the plane
covering the torus, so face gluings are read off by translation.

Tetrahedron vertex convention: ``v0 = l``, ``v1 = r``, ``v2 = 0``,
``v3 = l + r``.  Bottom diagonal ``v0v1``, top ``v2v3``, left hinge
``v0v2``/``v1v3``, right hinge ``v1v2``/``v0v3``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations

from .errors import DomainError
from .lamination import CurveClass
from .mapping_class import (
    FiniteOrder,
    MappingClass,
    PseudoAnosov,
    RLForm,
    Reducible,
    canonical_rl_form,
    classify,
)

__all__ = [
    "GluingSystem",
    "Hyperbolic",
    "SeifertH2xR",
    "Tetrahedron",
    "TorusReducible",
    "TriangulatedBundle",
    "gluing_equations",
    "layered_triangulation",
    "trichotomy",
]


# --- trichotomy ----------------------------------------------------------------

@dataclass(frozen=True)
class SeifertH2xR:
    order: int
    tag = "seifert-H2xR"


@dataclass(frozen=True)
class TorusReducible:
    invariant: CurveClass
    tag = "torus-reducible"


@dataclass(frozen=True)
class Hyperbolic:
    rl: RLForm
    tag = "hyperbolic"


GeometrizationType = SeifertH2xR | TorusReducible | Hyperbolic


def trichotomy(phi: MappingClass) -> GeometrizationType:
    nt = classify(phi)
    if isinstance(nt, FiniteOrder):
        return SeifertH2xR(nt.order)
    if isinstance(nt, Reducible):
        return TorusReducible(nt.invariant)
    assert isinstance(nt, PseudoAnosov)
    return Hyperbolic(canonical_rl_form(phi))


# --- layered triangulation ---------------------------------------------------------

# shape parameter index carried by each edge pair: 0 -> z, 1 -> z', 2 -> z''
DIAG, LEFT, RIGHT = 0, 1, 2

# tetrahedron edges (vertex pairs) grouped by role
EDGE_ROLES = {
    (0, 1): DIAG,
    (2, 3): DIAG,
    (0, 2): LEFT,
    (1, 3): LEFT,
    (1, 2): RIGHT,
    (0, 3): RIGHT,
}


@dataclass(frozen=True)
class Tetrahedron:
    index: int
    letter: str
    bottom: int  # edge class of v0v1
    top: int  # edge class of v2v3
    left: int  # edge class of v0v2 and v1v3
    right: int  # edge class of v1v2 and v0v3
    # face f (opposite vertex f) -> (target tet, target face, vertex permutation)
    gluings: tuple = ()

    def edge_class(self, pair) -> int:
        role = EDGE_ROLES[tuple(sorted(pair))]
        if role == DIAG:
            return self.bottom if tuple(sorted(pair)) == (0, 1) else self.top
        return self.left if role == LEFT else self.right


@dataclass(frozen=True)
class GluingSystem:
    """Exponents over ``(log z_k, log z'_k, log z''_k)``, right-hand sides in units of pi*i."""

    n_tets: int
    edge_rows: tuple[tuple[int, ...], ...]
    edge_rhs: tuple[int, ...]
    cusp_row: tuple[int, ...]
    cusp_rhs: int
    redundant: int  # index of the edge row dropped by the solver

    def solver_rows(self):
        rows = [r for i, r in enumerate(self.edge_rows) if i != self.redundant]
        rhs = [h for i, h in enumerate(self.edge_rhs) if i != self.redundant]
        return rows + [self.cusp_row], rhs + [self.cusp_rhs]


@dataclass(frozen=True)
class TriangulatedBundle:
    rl: RLForm
    tetrahedra: tuple[Tetrahedron, ...]
    edge_classes: tuple[tuple[tuple[int, tuple[int, int]], ...], ...]
    equations: GluingSystem
    # edge classes of the reference fiber below tetrahedron 0, by slope
    fiber_edges: dict = field(default_factory=dict)
    # exponents (over the 3n shape logs) of the fiber edges' upper sums
    fiber_upper: dict = field(default_factory=dict)
    monodromy: MappingClass | None = None

    @property
    def n(self) -> int:
        return len(self.tetrahedra)

    def export_text(self) -> str:
        lines = [f"ptorus-bundle v1 {''.join(self.rl.letters)}"]
        for t in self.tetrahedra:
            parts = []
            for f in range(4):
                tgt, _, perm = t.gluings[f]
                parts.append(f"({tgt},{''.join(map(str, perm))})")
            lines.append(f"tet {t.index} " + " ".join(parts))
        for e, members in enumerate(self.edge_classes):
            mem = " ".join(f"{k}:{a}{b}" for k, (a, b) in members)
            lines.append(f"edge {e} {mem}")
        return "\n".join(lines) + "\n"


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _positions(l, r):
    return (l, r, (0, 0), _add(l, r))


def _match_face(src_pts, src_face, dst_pts, dst_face):
    """Vertex map between two faces that differ by a lattice translation."""
    src = [src_pts[i] for i in src_face]
    for perm in permutations(dst_face):
        dst = [dst_pts[j] for j in perm]
        t = _sub(dst[0], src[0])
        if all(_sub(d, s) == t for s, d in zip(src, dst)):
            return dict(zip(src_face, perm))
    return None


def layered_triangulation(rl: RLForm) -> TriangulatedBundle:
    letters = rl.letters
    n = len(letters)
    if "R" not in letters or "L" not in letters:
        raise DomainError("layered triangulation needs both letters")
    # unrolled simulation; frame entries are (vector, tag); tags of the
    # reference fiber are 'a' = (1,0), 'b' = (0,1), 'c' = (1,1)
    lvec, ltag = (1, 0), "a"
    rvec, rtag = (0, 1), "b"
    avec, atag = (1, 1), "c"
    steps = []
    for j in range(2 * n + 2):
        s = letters[j % n]
        if s == "R":
            hinges = ((lvec, ltag), (avec, atag))
            removed = rtag
        else:
            hinges = ((avec, atag), (rvec, rtag))
            removed = ltag
        (lvec, ltag), (rvec, rtag) = hinges
        avec, atag = _add(lvec, rvec), j
        steps.append(dict(letter=s, left=ltag, right=rtag, bottom=removed, top=j,
                          frame=(lvec, rvec)))

    # reference fiber tags name the classes alive at level n
    alias = {"a": steps[n - 1]["left"], "b": steps[n - 1]["right"], "c": n - 1}

    def cls(tag):
        while not isinstance(tag, int):
            tag = alias[tag]
        return tag % n

    # lifetime incidences of every edge tag
    incid: dict = {}
    for j, st in enumerate(steps):
        incid.setdefault(st["top"], []).append((j, DIAG))
        incid.setdefault(st["bottom"], []).append((j, DIAG))
        incid.setdefault(st["left"], []).extend([(j, LEFT), (j, LEFT)])
        incid.setdefault(st["right"], []).extend([(j, RIGHT), (j, RIGHT)])

    ncol = 3 * n
    edge_rows = []
    for k in range(n):
        row = [0] * ncol
        for j, role in incid[k]:
            row[3 * (j % n) + role] += 1
        edge_rows.append(tuple(row))

    # upper sums of the reference fiber edges: every incidence from tet 0
    # up to and including the death of the edge
    fiber_upper = {}
    for tag, slope in (("a", (1, 0)), ("b", (0, 1)), ("c", (1, 1))):
        row = [0] * ncol
        for j, role in incid[tag]:
            row[3 * (j % n) + role] += 1
        fiber_upper[slope] = tuple(row)
    cusp_row = tuple(sum(col) for col in zip(*fiber_upper.values()))

    # the reference fiber edges belong to classes born in the last cycle
    fiber_edges = {(1, 0): cls("a"), (0, 1): cls("b"), (1, 1): cls("c")}

    tets = []
    for k in range(n):
        st, nxt = steps[k], steps[k + 1]
        pts = _positions(*st["frame"])
        npts = _positions(*nxt["frame"])
        gl = {}
        # top faces (opposite v1 and v0) glue to bottom faces of the next tet
        for f in (0, 1):
            face = tuple(i for i in range(4) if i != f)
            for g in (2, 3):
                dface = tuple(i for i in range(4) if i != g)
                vm = _match_face(pts, face, npts, dface)
                if vm is not None:
                    vm[f] = g
                    gl[f] = ((k + 1) % n, g, tuple(vm[i] for i in range(4)))
                    break
        tets.append(dict(st=st, gl=gl))
    # bottom gluings are inverses of top gluings
    for k, t in enumerate(tets):
        for f, (tgt, g, perm) in list(t["gl"].items()):
            inv = [0] * 4
            for i, p in enumerate(perm):
                inv[p] = i
            tets[tgt]["gl"][g] = (k, f, tuple(inv))
    tet_objs = []
    for k, t in enumerate(tets):
        st = t["st"]
        if len(t["gl"]) != 4:
            raise RuntimeError("face gluing failed")
        tet_objs.append(Tetrahedron(k, st["letter"], cls(st["bottom"]), cls(st["top"]),
                                    cls(st["left"]), cls(st["right"]),
                                    tuple(t["gl"][f] for f in range(4))))

    edge_classes = [[] for _ in range(n)]
    for t in tet_objs:
        for pair in sorted(EDGE_ROLES):
            edge_classes[t.edge_class(pair)].append((t.index, pair))

    system = GluingSystem(
        n_tets=n,
        edge_rows=tuple(edge_rows),
        edge_rhs=tuple([2] * n),
        cusp_row=cusp_row,
        cusp_rhs=3,
        redundant=n - 1,
    )
    return TriangulatedBundle(
        rl=rl,
        tetrahedra=tuple(tet_objs),
        edge_classes=tuple(tuple(m) for m in edge_classes),
        equations=system,
        fiber_edges=fiber_edges,
        fiber_upper=fiber_upper,
        monodromy=rl.mapping_class(),
    )


def gluing_equations(tb: TriangulatedBundle) -> GluingSystem:
    return tb.equations
