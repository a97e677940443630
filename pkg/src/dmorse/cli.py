"""Command-line surface: build, transform, spectrum, verify.

Facet files are the only interchange format.  Exit codes: 0 success,
1 usage error, 2 unreadable/unparseable input, 3 consistency failure
(stage mismatch, failed check, guarded size limit).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .complexes import (
    LinkConditionViolatedError,
    QuotientUnsafeError,
    SimplicialComplex,
)
from .constructions import (
    barycentric_subdivision,
    build_E,
    build_sigma,
    build_two_optima,
    cone,
    dunce_hat,
    one_point_suspension,
    product_with_interval,
    simplex,
    cross_polytope,
    stack_facet,
    stellar_subdivision,
    suspension,
)
from .engine import STRATEGIES, spectrum
from .fileio import FacetFileError, read_complex, write_facets
from .pipeline import PipelineError, load_poincare, pipeline_5manifold
from .verify import (
    SizeLimitExceeded,
    betti_numbers,
    check_morse_consistency,
    exhaustive_collapsible,
    exhaustive_nonevasive,
)

_SIZE_LIMIT_ENV = "DMORSE_SIZE_LIMIT"
_DIMMED_BUILDERS = {
    "simplex": simplex,
    "cross_polytope": cross_polytope,
    "sigma": build_sigma,
    "E": build_E,
}
_PLAIN_BUILDERS = {
    "two_optima": build_two_optima,
    "dunce_hat": dunce_hat,
    "poincare": load_poincare,
}
_BUILD_NAMES = (*_DIMMED_BUILDERS, *_PLAIN_BUILDERS, "pipeline_5manifold")
_TRANSFORM_OPS = ("sd", "cone", "suspension", "opsusp", "product_I",
                  "stellar", "stack", "link", "star", "delete", "boundary",
                  "quotient", "contract")
_VERIFY_MODES = ("fvector", "homology", "free-faces", "morse-check", "oracle")


def _size_limit(args) -> int:
    if getattr(args, "size_limit", None) is not None:
        return args.size_limit
    env = os.environ.get(_SIZE_LIMIT_ENV)
    return int(env) if env else 100_000


def _summary(K: SimplicialComplex) -> str:
    return (f"f={tuple(K.f_vector())} chi={K.euler_characteristic} "
            f"dim={K.dim}")


def _write(K: SimplicialComplex, path: Path, header: str) -> None:
    write_facets(path, K, header=f"{header}\n{_summary(K)}\ndmorse {__version__}")
    print(f"{path}: {_summary(K)}")


# ----------------------------------------------------------------- build


def _cmd_build(args) -> int:
    name = args.name
    if name in _DIMMED_BUILDERS:
        if args.dim is None:
            raise ValueError(f"build {name} requires --dim")
        K = _DIMMED_BUILDERS[name](args.dim)
        default = f"{name}{args.dim}.fac"
    elif name in _PLAIN_BUILDERS:
        if args.dim is not None:
            raise ValueError(f"build {name} takes no --dim")
        K = _PLAIN_BUILDERS[name]()
        default = f"{name}.fac"
    else:  # pipeline_5manifold
        if args.dim is not None:
            raise ValueError("build pipeline_5manifold takes no --dim")
        return _cmd_build_pipeline(args)
    out = Path(args.output) if args.output else Path(default)
    _write(K, out, f"{name}" + (f" dim={args.dim}" if args.dim is not None else ""))
    return 0


def _cmd_build_pipeline(args) -> int:
    stages = pipeline_5manifold(progress=lambda s: print(s, file=sys.stderr))
    out = Path(args.output) if args.output else Path("collar5.fac")
    bnd_out = (Path(args.boundary_output) if args.boundary_output
               else out.with_name(out.stem + "_boundary" + out.suffix))
    for st in stages:
        exp = ",".join("*" if e is None else str(e) for e in st.f_expected)
        print(f"stage {st.index} {st.name}: f={st.f_actual} "
              f"expected=({exp}) [{st.seconds:.1f}s]"
              + (f" {st.notes}" if st.notes else ""))
    _write(stages[6].complex, out, "pipeline_5manifold collar")
    _write(stages[7].complex, bnd_out, "pipeline_5manifold collar boundary")
    if args.report:
        doc = {"version": __version__,
               "stages": [{"index": st.index, "name": st.name,
                           "f_expected": list(st.f_expected),
                           "f_actual": list(st.f_actual),
                           "seconds": st.seconds, "notes": st.notes}
                          for st in stages]}
        Path(args.report).write_text(json.dumps(doc, indent=2) + "\n")
        print(f"{args.report}: stage report")
    return 0


# -------------------------------------------------------------- transform


def _closed_star(K: SimplicialComplex, face) -> SimplicialComplex:
    face = tuple(sorted(face))
    if face not in K:
        raise ValueError(f"face {face} not in complex")
    fset = set(face)
    carriers = [F for F in K.facets() if fset.issubset(F)]
    return SimplicialComplex.from_facets(carriers)


def _parse_face(text: str) -> tuple:
    """Vertex list given as one token: '7', '1,2,3' or '1 2 3'."""
    try:
        face = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError:
        raise ValueError(f"not a vertex list: {text!r}")
    if not face:
        raise ValueError(f"not a vertex list: {text!r}")
    return face


def _cmd_transform(args) -> int:
    K = read_complex(args.input)
    op = args.op

    def need(flag, value):
        if value is None:
            raise ValueError(f"--op {op} requires --{flag}")
        return value

    if op == "sd":
        out_K = barycentric_subdivision(K, iterations=args.iterations)
    elif op == "cone":
        out_K = cone(K, apex=args.vertex)
    elif op == "suspension":
        out_K = suspension(K)
    elif op == "opsusp":
        out_K = one_point_suspension(K, need("vertex", args.vertex))
    elif op == "product_I":
        out_K = product_with_interval(K)
    elif op == "stellar":
        out_K = stellar_subdivision(K, need("face", args.face))
    elif op == "stack":
        out_K = stack_facet(K, need("face", args.face),
                            args.vertex if args.vertex is not None
                            else max(K.vertices) + 1)
    elif op == "link":
        out_K = K.link_of(need("face", args.face))
    elif op == "star":
        out_K = _closed_star(K, need("face", args.face))
    elif op == "delete":
        out_K = K.delete_vertex(need("vertex", args.vertex))
    elif op == "boundary":
        out_K = K.boundary_complex()
    elif op == "quotient":
        pairs = need("map", args.map)
        vmap = {}
        for item in pairs:
            old, _, new = item.partition("=")
            if not new:
                raise ValueError(f"--map wants old=new, got {item!r}")
            vmap[int(old)] = int(new)
        out_K = K.apply_map(vmap)
    else:  # contract
        edge = need("edge", args.edge)
        if len(edge) != 2:
            raise ValueError("--edge wants exactly two vertices")
        out_K = K.contract_edge(edge)

    if out_K.dim < 0:
        raise ValueError(f"--op {op} produced the empty complex")
    stem = Path(args.input).stem
    out = Path(args.output) if args.output else Path(f"{stem}.{op}.fac")
    _write(out_K, out, f"{op} of {Path(args.input).name}")
    return 0


# --------------------------------------------------------------- spectrum


def _cmd_spectrum(args) -> int:
    K = read_complex(args.input)
    workers = args.workers if args.workers else (os.cpu_count() or 1)
    report = spectrum(K, args.strategy, args.runs, master_seed=args.seed,
                      workers=workers, engine=args.engine)
    doc = report.to_json_dict()
    doc["version"] = __version__
    doc["input"] = str(args.input)
    doc["workers"] = workers

    if args.format == "json":
        text = json.dumps(doc, indent=2) + "\n"
    elif args.format == "csv":
        lines = [f"# {k}={doc[k]}" for k in
                 ("input", "strategy", "runs", "master_seed", "mean", "version")]
        lines.append("vector,count,share")
        for row in doc["histogram"]:
            vec = " ".join(map(str, row["vector"]))
            lines.append(f"{vec},{row['count']},{row['count'] / report.runs}")
        text = "\n".join(lines) + "\n"
    else:
        lines = [f"{args.input}: {args.strategy}, {report.runs} runs, "
                 f"master seed {report.master_seed}",
                 f"mean critical cells {report.mean:.4f}"]
        for row in doc["histogram"]:
            vec = tuple(row["vector"])
            lines.append(f"  {vec}: {row['count']} "
                         f"({row['count'] / report.runs:.4f})")
        text = "\n".join(lines) + "\n"

    if args.output:
        Path(args.output).write_text(text)
        print(f"{args.output}: {report.runs} runs, mean {report.mean:.4f}")
    else:
        sys.stdout.write(text)
    return 0


# ----------------------------------------------------------------- verify


def _cmd_verify(args) -> int:
    K = read_complex(args.input)
    mode = args.mode
    if mode == "fvector":
        print(_summary(K))
        return 0
    if mode == "homology":
        b = betti_numbers(K, size_limit=_size_limit(args), prime=args.prime)
        print(f"ranks={b.ranks}"
              + (f" (mod {args.prime})" if args.prime else f" torsion={b.torsion}"))
        return 0
    if mode == "free-faces":
        pairs = K.free_faces()
        print(len(pairs))
        for sigma, tau in pairs:
            print(f"{' '.join(map(str, sigma))} -> {' '.join(map(str, tau))}")
        return 0
    if mode == "morse-check":
        if args.vector is None:
            raise ValueError("--mode morse-check requires --vector")
        vec = tuple(int(x) for x in args.vector.replace(",", " ").split())
        violations = check_morse_consistency(K, vec)
        if violations:
            for v in violations:
                print(f"violation: {v}")
            return 3
        print(f"{vec} consistent with {_summary(K)}")
        return 0
    # oracle
    answers = {}
    if args.question in ("collapsible", "both"):
        answers["collapsible"] = exhaustive_collapsible(K, node_budget=args.budget)
    if args.question in ("nonevasive", "both"):
        answers["nonevasive"] = exhaustive_nonevasive(K, node_budget=args.budget)
    for q, a in answers.items():
        print(f"{q}: {a}")
    return 0


# ------------------------------------------------------------------ main


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dmorse",
        description="Build, transform, verify, and randomly deconstruct "
                    "simplicial complexes.")
    p.add_argument("--version", action="version", version=f"dmorse {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="write a named construction as a facet file")
    b.add_argument("name", choices=_BUILD_NAMES)
    b.add_argument("--dim", type=int, default=None)
    b.add_argument("-o", "--output", default=None)
    b.add_argument("--boundary-output", default=None,
                   help="second output file (pipeline_5manifold only)")
    b.add_argument("--report", default=None,
                   help="JSON stage report (pipeline_5manifold only)")
    b.set_defaults(func=_cmd_build)

    t = sub.add_parser("transform", help="apply one operation to a facet file")
    t.add_argument("input")
    t.add_argument("--op", required=True, choices=_TRANSFORM_OPS)
    t.add_argument("--face", type=_parse_face, default=None, metavar="V[,V...]",
                   help="face vertices (stellar/stack/link/star)")
    t.add_argument("--vertex", type=int, default=None,
                   help="vertex argument (opsusp/stack/delete, cone apex)")
    t.add_argument("--edge", type=_parse_face, default=None, metavar="U,V")
    t.add_argument("--map", action="append", default=None, metavar="OLD=NEW")
    t.add_argument("--iterations", type=int, default=1, help="sd rounds")
    t.add_argument("-o", "--output", default=None)
    t.set_defaults(func=_cmd_transform)

    s = sub.add_parser("spectrum",
                       help="histogram of Morse vectors over seeded runs")
    s.add_argument("input")
    s.add_argument("--strategy", choices=STRATEGIES, default="random")
    s.add_argument("--runs", type=int, default=100)
    s.add_argument("--seed", type=int, default=0, help="master seed")
    s.add_argument("--workers", type=int, default=None,
                   help="defaults to the available parallelism")
    s.add_argument("--engine", choices=("auto", "numba", "python"),
                   default="auto")
    s.add_argument("--format", choices=("json", "csv", "text"), default="json")
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=_cmd_spectrum)

    v = sub.add_parser("verify", help="checks and reports on a facet file")
    v.add_argument("input")
    v.add_argument("--mode", required=True, choices=_VERIFY_MODES)
    v.add_argument("--prime", type=int, default=None,
                   help="field-rank homology instead of integer SNF")
    v.add_argument("--size-limit", type=int, default=None,
                   help=f"face-count guard (default ${_SIZE_LIMIT_ENV} or 100000)")
    v.add_argument("--vector", default=None,
                   help="critical-cell counts for morse-check, e.g. 1,2,2,1")
    v.add_argument("--question", choices=("collapsible", "nonevasive", "both"),
                   default="both")
    v.add_argument("--budget", type=int, default=200_000,
                   help="oracle search-node budget")
    v.set_defaults(func=_cmd_verify)
    return p


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 1
    try:
        return args.func(args)
    except FacetFileError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (PipelineError, SizeLimitExceeded, QuotientUnsafeError,
            LinkConditionViolatedError, AssertionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
