"""Command line: ``caplattice <command> PROBLEM [options]``.

Exit codes: 0 success, 1 domain error (class name on stderr), 2 usage or
problem-file error.
"""

from __future__ import annotations

import argparse
import sys

from .capacity import classify, mobius_inverse, nabla, pi_set
from .errors import CapLatticeError, ProblemFormatError
from .frechet import (
    construct_extension_along_path,
    dual_bound,
    evaluate_indicator,
    frechet_bound_at,
    indicator_below,
    lambda_fn,
    lambda_path,
    successive_lambdas,
)
from .ideals import (
    DEFAULT_IDEAL_CAP,
    build_ideal_lattice,
    dual_mobius_extension,
    greedy_extension,
    mobius_extension,
)
from .lattice import DEFAULT_CAP
from .problem import load_problem, render_json, render_table
from .reference import checks
from .stochastic import (
    comp_condition,
    dominance_coupling,
    membership_coupling,
    norberg_dominance,
)


class UsageError(Exception):
    pass


def _seq(text: str | None, flag: str = "--seq") -> list:
    if not text:
        raise UsageError(f"{flag} is required")
    return [s.strip() for s in text.split(",") if s.strip()]


def _render_pmf(ideal, pmf) -> dict:
    return {ideal.render(U): m for U, m in pmf.items()}


def _render_joint(ideal, Gamma) -> list:
    out = []
    for (V, y), m in Gamma.atoms:
        first = ideal.render(V) if ideal is not None else V
        out.append({"first": first, "second": y, "mass": m})
    return out


# -- command bodies ------------------------------------------------------------


def cmd_validate(p, a):
    L = p.lattice
    return {"elements": len(L), "bottom": L.bottom, "top": L.top, "covers": [list(c) for c in L.covers],
            "capacities": list(p.capacities), "psi": p.psi is not None}


def cmd_classify(p, a):
    c = classify(p.capacity(a.capacity))
    return {"monotone": c.is_monotone, "capacity": c.is_capacity,
            "completely_monotone": c.is_completely_monotone,
            "completely_alternating": c.is_completely_alternating,
            "bottom_nonnegative": c.bottom_nonnegative}


def cmd_mobius_inverse(p, a):
    return {"inverse": mobius_inverse(p.capacity(a.capacity))}


def cmd_nabla(p, a):
    phi = p.capacity(a.capacity)
    A = _seq(a.seq)
    if not a.at:
        raise UsageError("--at is required")
    return {"set": A, "at": a.at, "value": nabla(phi, A, a.at),
            "pi_set": list(p.lattice.sort(pi_set(p.lattice, A, a.at)))}


def _ideal(p, a):
    return build_ideal_lattice(p.lattice, cap=a.cap)


def cmd_upsets(p, a):
    I = _ideal(p, a)
    return {"count": len(I), "upsets": [I.render(U) for U in I.nodes]}


def cmd_greedy_extend(p, a):
    I = _ideal(p, a)
    return {"pmf": _render_pmf(I, greedy_extension(p.capacity(a.capacity), I).pmf)}


def cmd_mobius_extend(p, a):
    I = _ideal(p, a)
    return {"pmf": _render_pmf(I, mobius_extension(p.capacity(a.capacity), I).pmf)}


def cmd_dual_mobius_extend(p, a):
    I = _ideal(p, a)
    return {"pmf": _render_pmf(I, dual_mobius_extension(p.capacity(a.capacity), I).pmf)}


def cmd_lambda(p, a):
    phi = p.capacity(a.capacity)
    seq = _seq(a.seq)
    if len(seq) != 1:
        raise UsageError("lambda takes a single element in --seq")
    if a.at:
        value, path = lambda_path(phi, seq[0], a.at)
        return {"from": seq[0], "at": a.at, "value": value, "path": list(path)}
    return {"from": seq[0], "values": lambda_fn(phi, seq[0])}


def cmd_lambda_seq(p, a):
    phi = p.capacity(a.capacity)
    result = successive_lambdas(phi, _seq(a.seq))[-1]
    if a.at:
        return {"seq": _seq(a.seq), "at": a.at, "value": result[a.at]}
    return {"seq": _seq(a.seq), "values": result}


def cmd_frechet_bound(p, a):
    phi = p.capacity(a.capacity)
    I = _ideal(p, a)
    if a.upset:
        U = I.upset(a.upset.split("|"))
        value = frechet_bound_at(phi, U, I)
        dual_value, r = dual_bound(phi, indicator_below(I, U), I)
        if dual_value != value:
            raise AssertionError("primal and dual bounds differ")
        return {"upset": I.render(U), "value": value, "certificate": r}
    return {"bounds": {I.render(U): frechet_bound_at(phi, U, I) for U in I.nodes}}


def cmd_construct_extension(p, a):
    phi = p.capacity(a.capacity)
    seq = _seq(a.seq)
    I = _ideal(p, a)
    Phi = construct_extension_along_path(phi, seq, I)
    stages = successive_lambdas(phi, seq)
    prefixes = []
    for k in range(1, len(seq) + 1):
        vals = {x: evaluate_indicator(Phi, x, seq[:k]) for x in p.lattice.elements}
        prefixes.append({"prefix": seq[:k], "values": vals, "matches": vals == stages[k].as_dict()})
    return {"pmf": _render_pmf(I, Phi.pmf), "prefixes": prefixes}


def cmd_compare(p, a):
    d = norberg_dominance(p.capacity(a.capacity), p.require_psi())
    out = {"holds": d.holds}
    if not d.holds:
        out.update(antichain=list(d.antichain), lhs=d.lhs, rhs=d.rhs)
    return out


def cmd_comp_condition(p, a):
    phi, psi = p.capacity(a.capacity), p.require_psi()
    paths = [_seq(a.seq)] if a.seq else None
    c = comp_condition(phi, psi, paths)
    out = {"holds": c.holds}
    if not c.holds:
        out.update(path=list(c.path), lhs=c.lhs, rhs=c.rhs)
    if paths is None:
        out["states"] = c.states
    return out


def cmd_couple(p, a):
    psi = p.require_psi()
    if a.kind == "dominance":
        G = dominance_coupling(p.capacity(a.capacity), psi)
        return {"kind": "dominance", "feasible": G is not None,
                "atoms": _render_joint(None, G) if G is not None else []}
    I = _ideal(p, a)
    G = membership_coupling(p.capacity(a.capacity), psi, I)
    return {"kind": "membership", "feasible": G is not None,
            "atoms": _render_joint(I, G) if G is not None else []}


COMMANDS = {
    "validate": (cmd_validate, "build the lattice and report its shape"),
    "classify": (cmd_classify, "monotone / capacity / completely monotone / completely alternating"),
    "mobius-inverse": (cmd_mobius_inverse, "Möbius inverse of a capacity"),
    "nabla": (cmd_nabla, "successive difference over --seq at --at"),
    "upsets": (cmd_upsets, "list the nonempty up-sets"),
    "greedy-extend": (cmd_greedy_extend, "layer-cake extension"),
    "mobius-extend": (cmd_mobius_extend, "extension on principal up-sets"),
    "dual-mobius-extend": (cmd_dual_mobius_extend, "extension on complements of principal ideals"),
    "lambda": (cmd_lambda, "pairwise lower bound from --seq a (at --at b, with a path)"),
    "lambda-seq": (cmd_lambda_seq, "successive λ-difference along --seq"),
    "frechet-bound": (cmd_frechet_bound, "lower bound at --upset a|b, or the whole table"),
    "construct-extension": (cmd_construct_extension, "extension realizing the λ-differences along --seq"),
    "compare": (cmd_compare, "antichain dominance of the --capacity cdf by psi"),
    "comp-condition": (cmd_comp_condition, "monotone-path condition, all paths or the one in --seq"),
    "couple": (cmd_couple, "coupling by linear feasibility (--kind dominance|membership)"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="caplattice", description="Exact capacities on finite lattices.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("problem", help="problem file (JSON)")
        sp.add_argument("--capacity", default="phi", help="capacity name (default: phi)")
        sp.add_argument("--seq", help="comma-separated element ids")
        sp.add_argument("--at", help="element id to evaluate at")
        sp.add_argument("--upset", help="up-set generators separated by |")
        sp.add_argument("--cap", type=int, default=DEFAULT_IDEAL_CAP, help="limit on the number of up-sets")
        sp.add_argument("--lattice-cap", type=int, default=DEFAULT_CAP, help="limit on lattice size")
        sp.add_argument("--kind", choices=("dominance", "membership"), default="membership")
        sp.add_argument("--table", action="store_true", help="plain text instead of JSON")
    sp = sub.add_parser("reference-examples", help="recompute the bundled worked examples")
    sp.add_argument("--table", action="store_true", help="plain text instead of JSON")
    return parser


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    def emit(report):
        out.write(render_table(report) if args.table else render_json(report))

    if args.command == "reference-examples":
        results = checks()
        emit({"command": "reference-examples",
              "checks": [{"name": c.name, "pass": c.ok} for c in results],
              "passed": sum(c.ok for c in results), "total": len(results)})
        return 0 if all(c.ok for c in results) else 1

    try:
        problem = load_problem(args.problem, cap=args.lattice_cap)
        body, _ = COMMANDS[args.command]
        result = body(problem, args)
    except (ProblemFormatError, UsageError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except CapLatticeError as exc:
        err.write(f"{type(exc).__name__}: {exc}\n")
        return 1
    emit({"command": args.command, "input_sha256": problem.digest, "options": _echo(args), "result": result})
    return 0


def _echo(args) -> dict:
    keys = ("capacity", "seq", "at", "upset") + (("kind",) if args.command == "couple" else ())
    return {k: getattr(args, k) for k in keys if getattr(args, k, None) is not None}


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
