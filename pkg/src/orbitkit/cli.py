"""Command line interface: ``orbitkit <command> [options]``.

Exit status: 0 success, 1 bad input, 2 failed verification (or an internal
consistency check), 3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .characters import character_table
from .coadjoint import DualVector, check_budget, default_budget, orbit, orbit_partition
from .errors import BudgetExceeded, InternalConsistencyError
from .linalg import Subspace
from .multiplicity import branching_table, induction_support, tensor_decomposition, tensor_table
from .nilalg import LieAlgebra, NilMatrix, SubalgebraEmbedding, build_algebra, generated_subalgebra, heisenberg, ut
from .polarization import polarize, verify_lagrangian_fiber
from .verify import verify_all

EXIT_OK, EXIT_INPUT, EXIT_VERIFY, EXIT_BUDGET = 0, 1, 2, 3

PRESETS = "ut3, ut4, ut5, ut (size from --N), ut:N, heisenberg (size from --N), heisenberg:N"


class InputError(Exception):
    pass


def _load_json(text: str):
    """Inline JSON or a path to a JSON file."""
    s = text.strip()
    if s.startswith(("{", "[")):
        source = s
    else:
        path = Path(text)
        if not path.is_file():
            raise InputError(f"no such file: {text}")
        source = path.read_text()
    try:
        return json.loads(source)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {text[:40]!r}: {exc}") from None


def _preset(name: str, p: int, n: int | None) -> LieAlgebra:
    kind, _, size = name.partition(":")
    if kind in ("ut3", "ut4", "ut5"):
        return ut(int(kind[2]), p)
    if size:
        try:
            n = int(size)
        except ValueError:
            raise InputError(f"bad matrix size in preset {name!r}") from None
    if kind in ("ut", "heisenberg"):
        if n is None:
            raise InputError(f"preset {name!r} needs a size: {kind}:N or --N")
        return ut(n, p) if kind == "ut" else heisenberg(n, p)
    raise InputError(f"unknown algebra preset {name!r}; known: {PRESETS}")


def load_algebra(source: str, p: int | None, n: int | None) -> LieAlgebra:
    """A preset name or JSON ``{"p": .., "N": .., "generators": [matrix, ...]}`` (file or inline)."""
    looks_like_preset = source.split(":")[0] in ("ut3", "ut4", "ut5", "ut", "heisenberg")
    if looks_like_preset and not Path(source).is_file():
        if p is None:
            raise InputError("--p is required with a preset algebra")
        return _preset(source, p, n)
    obj = _load_json(source)
    if not isinstance(obj, dict) or "generators" not in obj:
        raise InputError("algebra JSON must be an object with a 'generators' list")
    p = obj.get("p", p)
    n = obj.get("N", n)
    if p is None or n is None:
        raise InputError("algebra JSON needs 'p' and 'N' (or pass --p/--N)")
    return build_algebra(int(p), int(n), obj["generators"])


def load_sub(source: str, a: LieAlgebra) -> Subspace:
    """Subalgebra as generator matrices, or as ``{"coords": [...]}`` in algebra coordinates.

    The bracket closure of the given generators is taken.
    """
    obj = _load_json(source)
    if isinstance(obj, dict):
        if "coords" in obj:
            vecs = [tuple(int(c) for c in v) for v in obj["coords"]]
            if any(len(v) != a.dim for v in vecs):
                raise InputError(f"subalgebra coordinates must have length {a.dim}")
            gens = [a.element(v) for v in vecs]
        elif "generators" in obj:
            gens = [NilMatrix(a.n, a.p, g) for g in obj["generators"]]
        else:
            raise InputError("subalgebra JSON needs 'generators' or 'coords'")
    elif isinstance(obj, list):
        gens = [NilMatrix(a.n, a.p, g) for g in obj]
    else:
        raise InputError("subalgebra must be a JSON list or object")
    for g in gens:
        if g not in a:
            raise InputError("a subalgebra generator is not in the algebra")
    return generated_subalgebra(a, [a.coords(g) for g in gens])


def parse_lambda(text: str, a: LieAlgebra) -> DualVector:
    try:
        vals = tuple(int(v) for v in text.replace(" ", "").split(",") if v != "")
    except ValueError:
        raise InputError(f"--lambda expects comma-separated integers, got {text!r}") from None
    if len(vals) != a.dim:
        raise InputError(f"--lambda needs {a.dim} values for this algebra, got {len(vals)}")
    return DualVector(a, vals)


def _header(a: LieAlgebra) -> dict:
    return {"p": a.p, "N": a.n, "dim": a.dim, "basis": [[list(r) for r in b.entries] for b in a.basis]}


def _rep(o) -> list[int]:
    return list(o.rep.coords)


# -- commands ---------------------------------------------------------------


def cmd_orbits(a: LieAlgebra, args) -> tuple[object, list[list[str]]]:
    orbits = orbit_partition(a, args.budget)
    data = {
        "algebra": _header(a),
        "count": len(orbits),
        "orbits": [o.to_json(elements=args.elements) for o in orbits],
    }
    rows = [["rep", "size", "stab_dim"]] + [[" ".join(map(str, _rep(o))), str(o.size), str(o.stab_dim)] for o in orbits]
    return data, rows


def cmd_character_table(a: LieAlgebra, args):
    table = character_table(a, args.budget)
    return table.to_json(approx=args.approx), table.csv_rows(approx=args.approx)


def cmd_polarize(a: LieAlgebra, args):
    if not args.lam:
        raise InputError("polarize needs --lambda")
    results, rows = [], [["lambda", "dim", "polarization_coords"]]
    for text in args.lam:
        lam = parse_lambda(text, a)
        pol = polarize(a, lam)
        out = pol.to_json()
        if a.order <= args.budget:
            rep = verify_lagrangian_fiber(pol)
            out["lagrangian"] = {
                "fiber_size": rep.fiber_size,
                "p_orbit_size": rep.p_orbit_size,
                "orbit_size": rep.orbit_size,
                "checks": rep.checks,
            }
        results.append(out)
        rows.append([" ".join(map(str, lam.coords)), str(pol.dim), ";".join(" ".join(map(str, v)) for v in pol.space.basis)])
    return (results[0] if len(results) == 1 else results), rows


def _embedding(a: LieAlgebra, args) -> SubalgebraEmbedding:
    if not args.sub:
        raise InputError(f"{args.command} needs --sub")
    return SubalgebraEmbedding.of(a, a.restrict(load_sub(args.sub, a)))


def cmd_branch(a: LieAlgebra, args):
    e = _embedding(a, args)
    table = branching_table(e, args.budget)
    data = {"algebra": _header(a), "subalgebra": _header(e.sub), **table.to_json()}
    return data, table.csv_rows()


def cmd_induce(a: LieAlgebra, args):
    e = _embedding(a, args)
    h = e.sub
    if args.lam:
        omegas = [orbit(parse_lambda(t, h)) for t in args.lam]
    else:
        omegas = orbit_partition(h, args.budget)
    results, rows = [], [["omega", "Omega", "Omega_size", "multiplicity"]]
    for om in omegas:
        dec = induction_support(om, e, args.budget)
        results.append(
            {
                "omega": _rep(om),
                "omega_size": om.size,
                "index": a.p**e.codim,
                "decomposition": [{"orbit": _rep(O), "size": O.size, "multiplicity": m} for O, m in dec],
            }
        )
        for O, m in dec:
            rows.append([" ".join(map(str, _rep(om))), " ".join(map(str, _rep(O))), str(O.size), str(m)])
    return {"algebra": _header(a), "subalgebra": _header(h), "inductions": results}, rows


def cmd_tensor(a: LieAlgebra, args):
    if not args.lam:
        table = tensor_table(a, args.budget)
        return {"algebra": _header(a), **table.to_json()}, table.csv_rows()
    if len(args.lam) != 2:
        raise InputError("tensor takes either no --lambda (full table) or exactly two")
    o1, o2 = (orbit(parse_lambda(t, a)) for t in args.lam)
    dec = [(O, m) for O, m in tensor_decomposition(o1, o2, args.budget) if m]
    data = {
        "algebra": _header(a),
        "factors": [{"rep": _rep(o1), "size": o1.size}, {"rep": _rep(o2), "size": o2.size}],
        "decomposition": [{"orbit": _rep(O), "size": O.size, "multiplicity": m} for O, m in dec],
    }
    rows = [["Omega", "size", "multiplicity"]] + [[" ".join(map(str, _rep(O))), str(O.size), str(m)] for O, m in dec]
    return data, rows


def cmd_verify(a: LieAlgebra, args):
    sub = load_sub(args.sub, a) if args.sub else None
    report = verify_all(a, sub, args.budget, seed=args.seed)
    rows = [["item", "pass"]] + [[k, str(v["pass"]).lower()] for k, v in report["items"].items()]
    return report, rows


COMMANDS = {
    "orbits": cmd_orbits,
    "character-table": cmd_character_table,
    "polarize": cmd_polarize,
    "branch": cmd_branch,
    "induce": cmd_induce,
    "tensor": cmd_tensor,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="prime modulus")
    common.add_argument("--N", type=int, help="matrix size for presets that need one")
    common.add_argument("--algebra", required=True, help=f"preset ({PRESETS}) or JSON file/inline JSON")
    common.add_argument("--sub", help="subalgebra: JSON file or inline JSON (generator matrices or coords)")
    common.add_argument("--lambda", dest="lam", action="append", help="functional as a,b,c (repeatable)")
    common.add_argument("--budget", type=int, default=None, help="max points to enumerate (default $ORBITKIT_BUDGET)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--approx", action="store_true", help="add floating-point renderings (display only)")
    common.add_argument("--elements", action="store_true", help="list orbit elements (orbits command)")
    common.add_argument("--threads", type=int, default=1, help="worker cap; computations run in one process")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (verify)")
    common.add_argument("--out", help="output path (default: stdout)")
    parser = argparse.ArgumentParser(prog="orbitkit", description="Coadjoint orbits and characters of unipotent groups over F_p.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _render(data, rows, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    if args.budget is None:
        args.budget = default_budget()
    try:
        if args.budget <= 0:
            raise InputError("--budget must be positive")
        if args.threads <= 0:
            raise InputError("--threads must be positive")
        a = load_algebra(args.algebra, args.p, args.N)
        check_budget(a.order, args.budget)
        data, rows = COMMANDS[args.command](a, args)
    except (InputError, ValueError) as exc:
        print(f"orbitkit: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"orbitkit: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalConsistencyError as exc:
        print(f"orbitkit: check failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    text = _render(data, rows, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    if args.command == "verify" and not data["pass"]:
        print("orbitkit: verification failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
