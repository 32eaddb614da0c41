"""Command line front end.

Every command prints a JSON report (with --json) or a one-line summary.
Exit codes:

    0  POINTED / success / YES / NO_OBSTRUCTION
    1  NOT_POINTED / NO / OBSTRUCTED
    2  UNDECIDED (budget exhausted)
    3  x is not nilpotent, or no sl2-triple exists
    4  unsupported input or failed precondition
    64 malformed input or usage error
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import catalog
from . import exact as ex
from .algebra import ConelabError, Element, LieAlgebra, MalformedInput, NotNilpotent
from .convex import GenCone
from .quadcone import DEFAULT_BUDGET, NOT_POINTED, POINTED, UNDECIDED
from .spindler import SpindlerAlgebra, from_json as spindler_from_json, to_json as spindler_to_json

EXIT_OK = 0
EXIT_NO = 1
EXIT_UNDECIDED = 2
EXIT_NOT_NILPOTENT = 3
EXIT_UNSUPPORTED = 4
EXIT_MALFORMED = 64

STATUS_EXIT = {POINTED: EXIT_OK, NOT_POINTED: EXIT_NO, UNDECIDED: EXIT_UNDECIDED}


class UsageError(MalformedInput):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_MALFORMED)


# ---------------------------------------------------------------------------
# serialization


def jsonable(obj):
    """Convert results to JSON-ready data; rationals become "p/q" strings."""
    if isinstance(obj, Fraction):
        return ex.fmt(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, Element):
        return [ex.fmt(a) for a in obj.coords]
    if isinstance(obj, GenCone):
        return {"dim": obj.dim, "generators": jsonable(obj.generators)}
    if isinstance(obj, (LieAlgebra, SpindlerAlgebra)):
        return repr(obj)
    if isinstance(obj, dict):
        return {(ex.fmt(k) if isinstance(k, Fraction) else str(k)): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        out = {}
        for f in dataclasses.fields(obj):
            v = getattr(obj, f.name)
            if isinstance(v, (LieAlgebra, SpindlerAlgebra)):
                continue
            out[f.name] = jsonable(v)
        return out
    return str(obj)


@dataclasses.dataclass
class RunReport:
    command: str
    inputs: dict
    digest: str
    verdicts: dict
    certificates: dict
    timing: float
    seed: int | None

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": jsonable(self.inputs),
            "digest": self.digest,
            "verdicts": jsonable(self.verdicts),
            "certificates": jsonable(self.certificates),
            "timing": round(self.timing, 4),
            "seed": self.seed,
        }


def digest_of(inputs: dict, algebra_data) -> str:
    blob = json.dumps({"inputs": jsonable(inputs), "algebra": algebra_data}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


# ---------------------------------------------------------------------------
# inputs


def load_algebra(source: str):
    """``catalog:name``, a bare catalog name, or a JSON file path."""
    if source is None:
        raise UsageError("no algebra given (positional name or --algebra)")
    name = source[len("catalog:"):] if source.startswith("catalog:") else source
    if source.startswith("catalog:") or (name in catalog.names() and not Path(source).exists()):
        return catalog.get(name)
    path = Path(source)
    try:
        text = path.read_text()
    except OSError as err:
        raise MalformedInput(f"cannot read {source}: {err}") from err
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise MalformedInput(f"{source} is not valid JSON: {err}") from err
    if not isinstance(data, dict):
        raise MalformedInput(f"{source}: expected a JSON object")
    if "dim_V" in data:
        return spindler_from_json(data, base=path.parent)
    return LieAlgebra.from_json(data)


def algebra_data(obj) -> dict:
    if isinstance(obj, SpindlerAlgebra):
        return spindler_to_json(obj)
    return obj.to_json()


def parse_x(obj, text: str | None) -> Element:
    """Full coordinates, l-coordinates (Spindler algebras), or a combination
    of basis names such as ``e+2*z``."""
    alg = obj.algebra if isinstance(obj, SpindlerAlgebra) else obj
    if text is None:
        raise UsageError("--x is required")
    if any(ch.isalpha() for ch in text):
        return alg.parse(text)
    try:
        v = ex.parse_vec(text)
    except (ValueError, ZeroDivisionError) as err:
        raise MalformedInput(f"cannot parse --x {text!r}: {err}") from err
    if len(v) == alg.dim:
        return alg.element(v)
    if isinstance(obj, SpindlerAlgebra) and len(v) == obj.dl:
        return obj.element(l=v)
    raise MalformedInput(f"--x has {len(v)} coordinates; expected {alg.dim}")


def budget_of(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("CONELAB_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError as err:
            raise MalformedInput(f"CONELAB_BUDGET must be an integer, got {env!r}") from err
    return DEFAULT_BUDGET


def _as_spindler(obj) -> SpindlerAlgebra:
    return obj if isinstance(obj, SpindlerAlgebra) else catalog.as_spindler(obj)


# ---------------------------------------------------------------------------
# commands; each returns (exit code, verdicts, certificates)


def cmd_check_pointed(obj, args):
    from .pointedness import co_pointed, cx_pointed, hamiltonian_of, reductive_co, reductive_cx

    x = parse_x(obj, args.x)
    what = args.what
    if isinstance(obj, SpindlerAlgebra):
        fn = co_pointed if what == "co" else cx_pointed
        v = fn(obj, x, budget_of(args), args.seed)
        H = hamiltonian_of(obj, x)
        certs = {"certificate": v.certificate, "hamiltonian": H}
    else:
        v = (reductive_co if what == "co" else reductive_cx)(obj, x)
        certs = {"certificate": v.certificate}
    return STATUS_EXIT[v.status], {"what": what, "status": v.status}, certs


def cmd_affine_pair(obj, args):
    from .affine import AffinePair, SpectrumOutOfRange, build_D, verify_affine_pair
    from .spindler import Obstruction, reduce_to_zl

    g = _as_spindler(obj)
    x = parse_x(obj, args.x)
    if isinstance(obj, LieAlgebra):
        x = g.algebra.element(x.coords)
    certs = {}
    _, xV, _ = g.split(x)
    if not ex.is_zero_vec(xV):
        red = reduce_to_zl(g, x)
        if isinstance(red, Obstruction):
            return EXIT_UNSUPPORTED, {"status": "NO_AFFINE_PAIR", "reason": "co(x) is not pointed"}, {"obstruction": red}
        certs["conjugator"] = red.conjugator
        x = red.reduced
    try:
        D = build_D(g, x)
    except SpectrumOutOfRange as err:
        return (
            EXIT_UNSUPPORTED,
            {"status": "SPECTRUM_OUT_OF_RANGE", "spectrum": err.spectrum},
            {"h_s": err.derivation.h_s, "D": err.derivation.matrix},
        )
    report = verify_affine_pair(AffinePair(x, D))
    certs.update({"x": x, "h_s": D.h_s, "D": D.matrix, "checks": report})
    verdicts = {"status": "OK" if report["ok"] else "FAILED", "spectrum": D.spectrum, "euler": D.is_euler}
    return (EXIT_OK if report["ok"] else EXIT_NO), verdicts, certs


def cmd_obstruct(obj, args):
    from .pointedness import extension_obstruction
    from .spindler import Obstruction, reduce_to_zl

    if not isinstance(obj, SpindlerAlgebra):
        raise ConelabError("obstruct needs an algebra z + V + l")
    x = parse_x(obj, args.x)
    red = reduce_to_zl(obj, x)
    if isinstance(red, Obstruction):
        return EXIT_UNSUPPORTED, {"status": "NOT_POINTED", "reason": "co(x) contains an affine line"}, {"obstruction": red}
    rep = extension_obstruction(obj, red.reduced, budget_of(args))
    systems = [
        {"positive_roots": [r.label() for r in ps.roots], "status": v.status, "certificate": v.certificate}
        for ps, v in rep.systems
    ]
    viable = None if rep.viable is None else [r.label() for r in rep.viable.roots]
    code = {"NO_OBSTRUCTION": EXIT_OK, "OBSTRUCTED": EXIT_NO, "UNDECIDED": EXIT_UNDECIDED}[rep.status]
    return code, {"status": rep.status, "viable_system": viable}, {"systems": systems}


def cmd_roots(obj, args):
    from .roots import c_alpha, c_min_max, cartan_of, positive_systems

    cd = cartan_of(obj)
    roots = []
    for rt in cd.roots:
        entry = {"root": rt.label(), "kind": rt.kind, "multiplicity": rt.multiplicity}
        if rt.coroot is not None:
            entry["coroot"] = rt.coroot
        if rt.kind == "solvable":
            cone, exact = c_alpha(cd, rt)
            entry["C_alpha"] = cone
            entry["C_alpha_exact"] = exact
        roots.append(entry)
    systems = []
    for ps in positive_systems(cd):
        item = {"positive_roots": [r.label() for r in ps.roots], "adapted": ps.adapted}
        if ps.adapted:
            mm = c_min_max(cd, ps)
            item["C_min"], item["C_max"] = mm.c_min, mm.c_max
        systems.append(item)
    verdicts = {"rank": cd.rank, "root_count": len(cd.roots), "positive_systems": len(systems)}
    return EXIT_OK, verdicts, {"roots": roots, "systems": systems}


def cmd_euler(obj, args):
    from .affine import DecompositionCheck, euler_exists, zero_part_generated

    g = _as_spindler(obj)
    x = parse_x(obj, args.x)
    if isinstance(obj, LieAlgebra):
        x = g.algebra.element(x.coords)
    cands = None
    if args.h:
        cands = [ex.parse_vec(part) for part in args.h.split(";")]
    rep = euler_exists(g, x, cands)
    attempts = []
    for a in rep.attempts:
        if isinstance(a, DecompositionCheck):
            attempts.append(
                {"h": a.h, "plus": a.plus, "minus": a.minus, "a": a.a, "b": a.b, "c": a.c,
                 "covers_z": a.covers_z, "witness": {k: v for k, v in a.witness.items()}}
            )
        else:
            attempts.append(a)
    verdicts = {"status": rep.status, "complete": rep.complete}
    certs = {"attempts": attempts}
    if rep.derivation is not None:
        from .spindler import rational_spectrum

        verdicts["spectrum"] = rational_spectrum(rep.derivation.matrix)
        verdicts["g0_generated"] = zero_part_generated(rep.derivation)
        certs["D"] = rep.derivation.matrix
        certs["h"] = rep.derivation.h
    return (EXIT_OK if rep.status == "YES" else EXIT_NO), verdicts, certs


def cmd_jm_triple(obj, args):
    from .affine import NoTriple, jm_triple

    if isinstance(obj, SpindlerAlgebra):
        l = obj.l
        x = parse_x(l, args.x)
        from .spindler import levi_split

        within = levi_split(obj)[0]
    else:
        l, x, within = obj, parse_x(obj, args.x), None
    try:
        t = jm_triple(l, x, within=within)
    except NoTriple as err:
        raise NotNilpotent(str(err)) from err
    return EXIT_OK, {"status": "OK", "relations": t.check()}, {"h": t.h, "e": t.e, "f": t.f, "half_h": t.half_h}


COMMANDS = {
    "check-pointed": cmd_check_pointed,
    "affine-pair": cmd_affine_pair,
    "obstruct": cmd_obstruct,
    "roots": cmd_roots,
    "euler": cmd_euler,
    "euler-test": cmd_euler,
    "jm-triple": cmd_jm_triple,
}


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conelab", description="Invariant convex cones in Lie algebras")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp):
        sp.add_argument("name", nargs="?", help="catalog name or algebra file")
        sp.add_argument("--algebra", help="file path or catalog:name")
        sp.add_argument("--x", help="element: comma rationals or basis-name combination")
        sp.add_argument("--budget", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--json", action="store_true", help="print the full JSON report")

    for name in COMMANDS:
        sp = sub.add_parser(name)
        common(sp)
        if name == "check-pointed":
            sp.add_argument("--what", choices=["co", "cx"], default="cx")
        if name in ("euler", "euler-test"):
            sp.add_argument("--h", help="Euler element candidates in l-coordinates, separated by ';'")
    cat = sub.add_parser("catalog")
    cat.add_argument("action", choices=["list", "dump"])
    cat.add_argument("entry", nargs="?")
    return p


def _summary(command, verdicts) -> str:
    parts = [f"{k}={jsonable(v)}" for k, v in verdicts.items() if not isinstance(v, (dict, list))]
    return f"{command}: " + " ".join(parts)


def run(argv=None) -> tuple[int, dict | None]:
    """Run a command; returns (exit code, report dict)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_MALFORMED, None
    if args.command == "catalog":
        if args.action == "list":
            print("\n".join(catalog.names()))
            return EXIT_OK, None
        if not args.entry:
            print("conelab: catalog dump needs an entry name", file=sys.stderr)
            return EXIT_MALFORMED, None
        try:
            print(json.dumps(algebra_data(catalog.get(args.entry)), indent=2))
        except MalformedInput as err:
            print(f"conelab: {err}", file=sys.stderr)
            return EXIT_MALFORMED, None
        return EXIT_OK, None
    if args.name and args.algebra and args.name != args.algebra:
        print("conelab: give the algebra either positionally or with --algebra", file=sys.stderr)
        return EXIT_MALFORMED, None
    start = time.perf_counter()
    inputs = {k: v for k, v in vars(args).items() if k not in ("json", "name")}
    inputs["algebra"] = args.algebra or args.name
    try:
        obj = load_algebra(inputs["algebra"])
        inputs["budget"] = budget_of(args)
        code, verdicts, certs = COMMANDS[args.command](obj, args)
        data = algebra_data(obj)
    except MalformedInput as err:
        print(f"conelab: {err}", file=sys.stderr)
        return EXIT_MALFORMED, None
    except NotNilpotent as err:
        print(f"conelab: not nilpotent: {err}", file=sys.stderr)
        return EXIT_NOT_NILPOTENT, None
    except ConelabError as err:
        print(f"conelab: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_UNSUPPORTED, None
    report = RunReport(
        command=args.command,
        inputs=inputs,
        digest=digest_of(inputs, data),
        verdicts=verdicts,
        certificates=certs,
        timing=time.perf_counter() - start,
        seed=args.seed,
    ).to_dict()
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(_summary(args.command, verdicts))
    return code, report


def main(argv=None) -> int:
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
