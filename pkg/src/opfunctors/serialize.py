"""JSON documents for modules and linear maps.

A module document lists the per-arity dimensions, the matrices of the
adjacent transpositions and one matrix per basis morphism of ``Cat O``
keyed by :meth:`CatBasisElt.encode`.  Entries are strings ``p/q``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .catprop import CatBasisElt
from .exactlin import LinMap, Space, fraction_str, parse_fraction, transposition
from .fmod import ModuleError, TruncatedModule
from .operads import Operad

FORMAT = "opfunctors-module/1"


def matrix_to_json(f: LinMap) -> list[list[str]]:
    return [[fraction_str(x) for x in row] for row in f.to_dense()]


def matrix_from_json(rows: list, domain: Space, codomain: Space) -> LinMap:
    if len(rows) != codomain.dim or any(len(r) != domain.dim for r in rows):
        raise ModuleError(f"matrix of shape {len(rows)}x{len(rows[0]) if rows else 0} "
                          f"where {codomain.dim}x{domain.dim} was expected")
    return LinMap.from_rows(domain, codomain, [[parse_fraction(str(x)) for x in r] for r in rows])


def vector_to_json(v: dict, space: Space, label=str) -> dict[str, str]:
    return {label(space.labels[i]): fraction_str(c) for i, c in sorted(v.items())}


def module_to_dict(F: TruncatedModule) -> dict[str, Any]:
    op = F.operad
    N = F.bound
    sym = {}
    for n in range(N + 1):
        if F.dim(n):
            sym[str(n)] = [matrix_to_json(F.perm(n, transposition(n, i))) for i in range(n - 1)]
    action = {}
    for m in range(N + 1):
        for n in range(N + 1):
            for xi in F.basis_morphisms(m, n):
                action[xi.encode()] = matrix_to_json(F.act(xi))
    return {
        "format": FORMAT,
        "operad": op.name,
        "bound": N,
        "vanishes_above": F.vanishes_above,
        "dims": F.dims(),
        "sym": sym,
        "action": action,
        "name": F.name,
    }


def module_from_dict(doc: dict, op: Operad) -> TruncatedModule:
    if doc.get("format") != FORMAT:
        raise ModuleError(f"unknown module format {doc.get('format')!r}")
    if doc.get("operad") != op.name:
        raise ModuleError(f"module is over {doc.get('operad')!r}, not {op.name!r}")
    dims = [int(d) for d in doc["dims"]]
    if len(dims) != int(doc["bound"]) + 1:
        raise ModuleError("dims do not match the bound")
    spaces = [Space(range(d)) for d in dims]
    stored: dict = {}
    for key, rows in doc.get("action", {}).items():
        try:
            xi = CatBasisElt.decode(key)
        except ValueError as exc:
            raise ModuleError(str(exc)) from None
        if xi.source >= len(spaces) or xi.target >= len(spaces):
            raise ModuleError(f"basis morphism {key} outside the bound")
        stored[xi] = matrix_from_json(rows, spaces[xi.source], spaces[xi.target])

    def action(xi: CatBasisElt) -> LinMap:
        got = stored.get(xi)
        if got is None:
            raise ModuleError(f"no action matrix for {xi.encode()}")
        return got

    F = TruncatedModule(op, spaces, action, vanishes_above=bool(doc.get("vanishes_above")),
                        name=doc.get("name", "F"))
    # the stored Σ-action must agree with the permutations in the action table
    for n_str, gens in doc.get("sym", {}).items():
        n = int(n_str)
        for i, rows in enumerate(gens):
            g = matrix_from_json(rows, spaces[n], spaces[n])
            if g != F.perm(n, transposition(n, i)):
                raise ModuleError(f"symmetric action at arity {n} disagrees with the action table")
    return F


def dump_module(F: TruncatedModule, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(module_to_dict(F), fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_module(path: str, op: Operad) -> TruncatedModule:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModuleError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return module_from_dict(doc, op)


def to_json_text(obj: Any, pretty: bool = False) -> str:
    return json.dumps(obj, sort_keys=True, indent=2 if pretty else None,
                      separators=None if pretty else (",", ":"), default=_default) + "\n"


def _default(x):
    if isinstance(x, Fraction):
        return fraction_str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")
