"""JSON-ready summaries shared by the command line and the tests.

Floats carry 15 significant digits.  Exact quantities are written as
strings such as ``"3+2*sqrt(2)"``, with a float companion where useful.
"""

from __future__ import annotations

import json
import random
from importlib import resources

from . import mat2
from .bundle import Hyperbolic, SeifertH2xR, TorusReducible, layered_triangulation, trichotomy
from .errors import ClassificationError
from .geometry import solve_shapes, volume
from .holonomy import (
    apply_automorphism,
    fixed_trace_triple,
    holonomy,
    reduce_word,
    translation_length,
)
from .mapping_class import (
    FiniteOrder,
    MappingClass,
    PseudoAnosov,
    Reducible,
    canonical_rl_form,
    classify,
)
from .scalars import format_scalar

__all__ = [
    "classify_report",
    "cnum",
    "fnum",
    "four_curve_report",
    "invariance_check",
    "load_schema",
    "rl_form_report",
    "solve_report",
    "trichotomy_report",
]


def load_schema(command: str) -> dict:
    """JSON schema shipped for the output of a CLI subcommand."""
    text = resources.files("ptorus").joinpath("schemas", f"{command}.schema.json").read_text()
    return json.loads(text)


def fnum(x) -> float:
    """Float rounded to 15 significant digits."""
    return float(f"{float(x):.15g}")


def cnum(z) -> dict:
    z = complex(z)
    return {"re": fnum(z.real), "im": fnum(z.imag)}


def _matrix(m) -> list:
    return [list(r) for r in m]


def classify_report(phi: MappingClass) -> dict:
    nt = classify(phi)
    out = {"word": phi.text(), "matrix": _matrix(phi.matrix),
           "trace": mat2.trace(phi.matrix), "class": nt.tag}
    if isinstance(nt, FiniteOrder):
        out["order"] = nt.order
    elif isinstance(nt, Reducible):
        out["invariant"] = [nt.invariant.a, nt.invariant.b]
    elif isinstance(nt, PseudoAnosov):
        out["dilatation"] = format_scalar(nt.dilatation)
        out["dilatation_float"] = fnum(nt.dilatation)
        out["mu_u"] = nt.mu_u.to_json()
        out["mu_s"] = nt.mu_s.to_json()
    return out


def rl_form_report(phi: MappingClass) -> dict:
    rl = canonical_rl_form(phi)
    return {"word": phi.text(), "rl_form": str(rl), "sign": rl.sign,
            "blocks": list(rl.blocks), "letters": rl.letters}


def trichotomy_report(phi: MappingClass) -> dict:
    g = trichotomy(phi)
    out = {"word": phi.text(), "type": g.tag}
    if isinstance(g, SeifertH2xR):
        out["order"] = g.order
    elif isinstance(g, TorusReducible):
        out["invariant"] = [g.invariant.a, g.invariant.b]
    elif isinstance(g, Hyperbolic):
        out["rl_form"] = str(g.rl)
    return out


def _random_words(rng: random.Random, count: int, max_len: int = 8) -> list[str]:
    words = []
    while len(words) < count:
        w = reduce_word("".join(rng.choice("ABab") for _ in range(rng.randint(1, max_len))))
        if w:
            words.append(w)
    return words


def invariance_check(rep, count: int = 20, seed: int = 0, tol: float = 1e-6) -> dict:
    """Real translation lengths of random fiber words against their monodromy images."""
    words = _random_words(random.Random(seed), count)
    defect = max(abs(translation_length(rep, w).real
                     - translation_length(rep, apply_automorphism(rep.phi, w)).real)
                 for w in words)
    equiv = max(rep.equivariance_error(w) for w in words)
    return {"words": count, "max_length_defect": fnum(defect),
            "max_equivariance_error": fnum(equiv), "passed": bool(defect < tol and equiv < tol)}


def solve_report(phi: MappingClass) -> dict:
    g = trichotomy(phi)
    if not isinstance(g, Hyperbolic):
        raise ClassificationError(f"{phi} gives a {g.tag} mapping torus, not hyperbolic")
    tb = layered_triangulation(g.rl)
    sol = solve_shapes(tb)
    rep = holonomy(sol, tb)
    ta, tb_, tab = rep.traces()
    triples = fixed_trace_triple(rep.phi, reference=rep.traces())
    geo = triples[0]
    agreement = max(abs(a - b) for a, b in zip(geo.as_tuple(), rep.traces()))
    return {
        "word": phi.text(),
        "rl_word": str(g.rl),
        "n_tets": tb.n,
        "shapes": [cnum(z) for z in sol.shapes],
        "residual": fnum(sol.residual),
        "iterations": sol.iterations,
        "volume": fnum(volume(sol.shapes)),
        "traces": {"A": cnum(ta), "B": cnum(tb_), "AB": cnum(tab)},
        "commutator_trace": cnum(rep.commutator_trace()),
        "fixed_trace_triple": {
            "x": cnum(geo.x), "y": cnum(geo.y), "z": cnum(geo.z),
            "signs": list(geo.signs), "seeded": geo.seeded,
            "agreement": fnum(agreement), "companions": len(triples) - 1,
        },
        "invariance_check": invariance_check(rep),
    }


def four_curve_report(rep) -> dict:
    """Real translation lengths of the four shortest-slope curves of a fiber rep."""
    words = {"(1,0)": "A", "(0,1)": "B", "(1,1)": "AB", "(1,-1)": "Ab"}
    lengths = {k: fnum(translation_length(rep, w).real) for k, w in words.items()}
    return {"lengths": lengths, "max": fnum(max(lengths.values()))}

