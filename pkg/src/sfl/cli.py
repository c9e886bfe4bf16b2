"""Command-line front end.

Every subcommand prints one JSON document (sorted keys, compact).  Exit
status: 0 affirmative, 1 negative decision, 2 input or domain error.
"""

from __future__ import annotations

import argparse
import sys

from . import central, equivalence, functional, nullcone, transform
from .errors import SchemaError, SflError
from .groupmap import fit_sgn_nfix_form
from .io import (
    dumps,
    load_json_arg,
    load_map,
    map_to_json,
    matrix_from_json,
    permutation_from_text,
    transformation_from_json,
    vector_from_text,
)

OK, NEGATIVE, ERROR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError("argv", message)


def _matrix(args, F):
    return matrix_from_json(load_json_arg(args.m, "matrix"), F)


def _operator(args, F):
    return transformation_from_json(load_json_arg(args.u, "transformation"), F)


def _pair(args):
    f, g = load_map(args.f), load_map(args.g)
    return f, g


# -- handlers: each returns (payload, exit status) -----------------------------------


def cmd_eval(args):
    f = load_map(args.f)
    v = functional.eval_functional(f, _matrix(args, f.field))
    return {"value": f.field.to_json(v)}, OK


def cmd_partitions(args):
    f = load_map(args.f)
    return equivalence.partitions(f, exhaustive=args.exhaustive).to_json(), OK


def cmd_witness(args):
    f = load_map(args.f)
    fn = equivalence.column_witness if args.side == "column" else equivalence.row_witness
    w = fn(f, args.i, args.j)
    if w is None:
        return {"witness": None}, NEGATIVE
    return {"witness": w.to_json(f.field)}, OK


def cmd_normalize(args):
    f = load_map(args.f)
    w = equivalence.fully_normalize(f) if args.full else equivalence.normalize(f)
    out = w.to_json()
    out["g"] = map_to_json(w.g)
    return out, OK


def cmd_rigid(args):
    r = equivalence.is_rigid(load_map(args.f))
    return {"rigid": r}, OK if r else NEGATIVE


def cmd_check(args):
    f, g = _pair(args)
    U = _operator(args, f.field)
    if args.mode == "prob" and args.seed is None:
        raise SflError("probabilistic mode needs an explicit --seed")
    v = transform.is_transformation(f, g, U, mode=args.mode, trials=args.trials, seed=args.seed or 0)
    out = v.to_json(f.field)
    if args.mode == "prob":
        out["seed"] = args.seed
    return out, OK if v.kind == "yes" else NEGATIVE


def cmd_exists(args):
    f, g = _pair(args)
    U = transform.exists_transformation(f, g)
    if U is None:
        return {"exists": False}, NEGATIVE
    return {"exists": True, "U": U.to_json()}, OK


def cmd_decompose(args):
    f, g = _pair(args)
    U = _operator(args, f.field)
    return transform.decompose(U, f, g).to_json(), OK


def cmd_h_equiv(args):
    f, g = _pair(args)
    A = transform.decide_h_equivalence(f, g)
    if A is None:
        return {"equivalent": False}, NEGATIVE
    return {"equivalent": True, "A": A.to_json()}, OK


def cmd_ph_equiv(args):
    f, g = _pair(args)
    hit = transform.decide_ph_equivalence(f, g)
    if hit is None:
        return {"equivalent": False}, NEGATIVE
    A, t, t2 = hit
    return {"equivalent": True, "A": A.to_json(), "tau": list(t.images), "tau_prime": list(t2.images)}, OK


def cmd_central(args):
    f = load_map(args.f)
    F = f.field
    if args.action == "fit":
        ab = fit_sgn_nfix_form(f)
        if ab is None:
            return {"fit": None}, NEGATIVE
        return {"fit": {"alpha": F.to_json(ab[0]), "beta": F.to_json(ab[1])}}, OK
    if args.action == "gf":
        return central.compute_Gf(f).to_json(), OK
    if args.action == "coherent":
        if args.tau is None:
            raise SflError("central coherent needs --tau")
        w = central.is_f_coherent(f, permutation_from_text(args.tau, "--tau"))
        if w is None:
            return {"coherent": False}, NEGATIVE
        return {"coherent": True, "witness": w.to_json()}, OK
    if f.n == 3:
        w = central.three_cycle_adapted(f)
    elif f.n == 4:
        w = central.k4_adapted(f)
    else:
        raise SflError("explicit adapted matrices exist for n = 3 and n = 4")
    if w is None:
        return {"witness": None}, NEGATIVE
    return {"witness": w.to_json()}, OK


def cmd_oracle(args):
    f = load_map(args.f)
    if args.action == "nullcone":
        res = nullcone.minimal_subspace_oracle(f)
        found = [
            {"kind": h["kind"], "X": None if h["X"] is None else [f.field.to_json(x) for x in h["X"]]}
            for h in res["found"]
        ]
        out = {"found": found, "scanned": res["scanned"], "predicted": res["predicted"], "matches": res["matches"]}
        return out, OK if res["matches"] else NEGATIVE
    if args.action == "codim-check":
        codim = f.n - 1 if args.codim is None else args.codim
        hits, scanned = nullcone.codim_check(f, codim)
        return {"codim": codim, "in_cone": hits, "scanned": scanned}, OK if hits == 0 else NEGATIVE
    if args.X is None:
        raise SflError("oracle adapted needs -X")
    X = vector_from_text(args.X, f.field, "-X")
    ok = nullcone.is_adapted_vector(f, X, args.side)
    return {"adapted": ok}, OK if ok else NEGATIVE


# -- parser ---------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sfl", description="Exact computations with Schur matrix functionals.")
    p.add_argument("-o", dest="output", help="write the JSON result to this path")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, *, f=True, g=False, m=False, u=False):
        sp = sub.add_parser(name)
        if f:
            sp.add_argument("-f", required=True, help="map: built-in name, JSON file or inline JSON")
        if g:
            sp.add_argument("-g", required=True, help="second map")
        if m:
            sp.add_argument("-m", required=True, help="matrix JSON (row-major)")
        if u:
            sp.add_argument("-u", required=True, help="transformation JSON {n, entries}")
        sp.add_argument("-o", dest="output", default=argparse.SUPPRESS)
        sp.set_defaults(handler=fn)
        return sp

    add("eval", cmd_eval, m=True)
    add("partitions", cmd_partitions).add_argument("--exhaustive", action="store_true")
    sp = add("witness", cmd_witness)
    sp.add_argument("-i", type=int, required=True)
    sp.add_argument("-j", type=int, required=True)
    sp.add_argument("--side", choices=("column", "row"), default="column")
    add("normalize", cmd_normalize).add_argument("--full", action="store_true")
    add("rigid", cmd_rigid)
    sp = add("check", cmd_check, g=True, u=True)
    sp.add_argument("--mode", choices=("exact", "prob"), default="exact")
    sp.add_argument("--trials", type=int, default=20)
    sp.add_argument("--seed", type=int)
    add("exists", cmd_exists, g=True)
    add("decompose", cmd_decompose, g=True, u=True)
    add("h-equiv", cmd_h_equiv, g=True)
    add("ph-equiv", cmd_ph_equiv, g=True)
    sp = add("central", cmd_central)
    sp.add_argument("action", choices=("fit", "gf", "coherent", "adapted"))
    sp.add_argument("--tau", help="permutation in one-line notation, e.g. 2,3,1")
    sp = add("oracle", cmd_oracle)
    sp.add_argument("action", choices=("nullcone", "codim-check", "adapted"))
    sp.add_argument("--codim", type=int)
    sp.add_argument("-X", help="vector, e.g. 1,1,0")
    sp.add_argument("--side", choices=("column", "row"), default="column")
    return p


def _error_payload(exc):
    out = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    if isinstance(exc, SchemaError):
        out["error"]["path"] = exc.path
    return out


def main(argv=None) -> int:
    output = None
    try:
        args = build_parser().parse_args(argv)
        output = getattr(args, "output", None)
        payload, status = args.handler(args)
    except SflError as exc:
        payload, status = _error_payload(exc), ERROR
        print(f"sfl: {exc}", file=sys.stderr)
    text = dumps(payload) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
