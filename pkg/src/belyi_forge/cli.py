"""Command-line front end.

Every pipeline stage is a subcommand with reproducible, scriptable output:
JSON (or CSV/DOT where noted) on stdout, machine-readable JSON error
objects on stderr, and exit codes 0 (success), 1 (verification mismatch
or numerical failure), 2 (usage error).

Word strings use single-letter codes resolved by the seed's family:
a, b for the two-letter rewriting alphabet and A, B, g, d, D for the
five-letter one (alpha, beta, gamma, delta, delta-bar).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .arrangement_jd import (
    DEFAULT_DEN_BOUND,
    DEFAULT_PRECISION,
    RationalizationError,
    build_Jd,
    census_matches_jstats,
    jd_census,
    jstats,
    verify_Jd_dual_path,
)
from .belyi_numeric import (
    DEFAULT_CLUSTER_TOL,
    DEFAULT_TOL,
    DEGREE_GUARD,
    DegreeGuardError,
    NoConvergenceError,
    census_matches_profile,
    census_to_json,
    critical_census_uni,
    shabat_for_derivation,
    solution_to_json,
    tree_for_derivation,
)
from .profile_core import profile_to_json, validate_profile
from .seed_families import (
    SeedDomainError,
    format_seed,
    parse_seed,
    seed_profile,
    seed_satisfies_E,
    seed_to_json,
    seed_triple,
)
from .surface_counts import (
    BoundTable,
    bound_table,
    build_nodal_surface,
    build_surface,
    census_matches_spectrum,
    constructions_up_to,
    nodal_surface_count,
    seed_grid,
    singular_census_3d,
    spectrum,
)
from .tree_realization import RealizationError, export_dot, export_json_adjacency
from .word_engine import (
    AlphabetMismatchError,
    LetterNotApplicableError,
    NoFamilyRecordedError,
    enumerate_LE,
    is_E_admissible,
    paper_word_families,
    trajectory,
    word_from_str,
    word_to_str,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    """argparse variant whose usage failures emit JSON on stderr."""

    def error(self, message: str):
        _emit_error("usage", message)
        raise SystemExit(EXIT_USAGE)


def _emit_error(kind: str, message: str, **extra) -> None:
    payload = {"error": {"type": kind, "message": message, **extra}}
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    sys.stderr.flush()


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write_output(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("BELYI_FORGE_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _parse_word(text: str, seed):
    return word_from_str(text, seed) if text else ()


def cmd_seeds(args) -> int:
    rows = []
    all_ok = True
    for seed in seed_grid(args.max_degree):
        name = format_seed(seed)
        if args.family != "all" and not name.startswith(args.family + ":"):
            continue
        tri = seed_triple(seed)
        report = validate_profile(seed_profile(seed))
        ok_e = seed_satisfies_E(seed)
        all_ok = all_ok and report.ok and ok_e
        rows.append(
            {
                "seed": name,
                "spec": seed_to_json(seed),
                "d0": tri.d0,
                "nu": tri.nu,
                "eps": tri.eps,
                "profile_valid": report.ok,
                "satisfies_E": ok_e,
            }
        )
    _write_output(
        _dumps({"count": len(rows), "all_valid": all_ok, "seeds": rows}), args.output
    )
    return EXIT_OK if all_ok else EXIT_MISMATCH


def cmd_derive(args) -> int:
    seed = parse_seed(args.seed)
    word = _parse_word(args.word, seed)
    states = trajectory(seed, word)
    lines = []
    all_e = True
    for i, st in enumerate(states):
        s = st.stats()
        ok = st.satisfies_E()
        all_e = all_e and ok
        lines.append(
            json.dumps(
                {
                    "step": i,
                    "word": word_to_str(st.word),
                    "degree": st.profile.degree,
                    "nu": s.nu,
                    "n_minus1": s.n_minus1,
                    "n_plus1": s.n_plus1,
                    "satisfies_E": ok,
                    "profile": profile_to_json(st.profile),
                },
                sort_keys=True,
            )
        )
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK if all_e else EXIT_MISMATCH


def cmd_enumerate(args) -> int:
    seed = parse_seed(args.seed)
    words = enumerate_LE(seed, args.max_len)
    payload = {
        "seed": format_seed(seed),
        "max_len": args.max_len,
        "count": len(words),
        "words": [word_to_str(w) for w in words],
    }
    _write_output(_dumps(payload), args.output)
    return EXIT_OK


def cmd_families(args) -> int:
    seed = parse_seed(args.seed)
    words = paper_word_families(seed, limit=args.limit)
    rows = []
    all_ok = True
    for w in words:
        ok = is_E_admissible(seed, w)
        all_ok = all_ok and ok
        final = trajectory(seed, w)[-1].profile if ok else None
        rows.append(
            {
                "word": word_to_str(w),
                "admissible": ok,
                "degree": final.degree if final else None,
            }
        )
    payload = {
        "seed": format_seed(seed),
        "count": len(rows),
        "all_admissible": all_ok,
        "words": rows,
    }
    _write_output(_dumps(payload), args.output)
    return EXIT_OK if all_ok else EXIT_MISMATCH


def cmd_shabat(args) -> int:
    seed = parse_seed(args.seed)
    word = _parse_word(args.word, seed)
    sol = shabat_for_derivation(
        seed,
        word,
        tol=args.tol,
        max_restarts=args.restarts,
        rng_seed=args.rng_seed,
        max_degree=args.max_degree,
    )
    census = critical_census_uni(sol.polynomial(), args.cluster_tol)
    prof = trajectory(seed, word)[-1].profile
    match = census_matches_profile(census, prof)
    payload = {
        "seed": format_seed(seed),
        "word": word_to_str(word),
        "degree": prof.degree,
        "solution": solution_to_json(sol),
        "census": census_to_json(census),
        "census_matches_profile": match,
    }
    _write_output(_dumps(payload), args.output)
    return EXIT_OK if (sol.converged and match) else EXIT_MISMATCH


def cmd_jd_verify(args) -> int:
    build_Jd(args.degree, args.precision, args.den_bound)
    dual = verify_Jd_dual_path(args.degree, args.precision)
    census = jd_census(
        args.degree, grid=args.grid, tol=args.tol, precision=args.precision
    )
    st = jstats(args.degree)
    match = census_matches_jstats(census, st)
    dual_ok = dual < 1e-20
    payload = {
        "degree": args.degree,
        "expected": st.as_dict(),
        "census": census.as_dict(),
        "dual_path_max_diff": dual,
        "dual_path_ok": dual_ok,
        "match": match,
    }
    _write_output(_dumps(payload), args.output)
    return EXIT_OK if (match and dual_ok) else EXIT_MISMATCH


def cmd_table(args) -> int:
    tbl = bound_table(args.max_degree, workers=_resolve_threads(args.threads))
    rows = tbl.rows
    if args.nu is not None:
        rows = tuple(r for r in rows if r.nu == args.nu)
    tbl = BoundTable(rows=rows)
    if args.format == "csv":
        _write_output(tbl.to_csv(), args.output)
    else:
        _write_output(_dumps(tbl.to_json()), args.output)
    return EXIT_OK


def cmd_surface_verify(args) -> int:
    d = args.degree
    if args.nodal or (args.seed is None and find_default(d) is None):
        surface = build_nodal_surface(d, args.precision)
        expected_types = {1: nodal_surface_count(d)}
        provenance = "nodal"
    else:
        if args.seed is not None:
            seed = parse_seed(args.seed)
            word = _parse_word(args.word or "", seed)
        else:
            cons = find_default(d)
            seed, word = cons.seed, cons.word
        surface = build_surface(
            d,
            seed,
            word,
            precision=args.precision,
            tol=args.tol,
            max_restarts=args.restarts,
            rng_seed=args.rng_seed,
            max_degree=args.max_degree,
        )
        prof = trajectory(seed, word)[-1].profile
        sp = spectrum(jstats(d), prof, seed=seed, word=word_to_str(word))
        expected_types = {k: v for k, v in sp.counts.items() if v}
        provenance = f"{format_seed(seed)} {word_to_str(word) or '(empty)'}"
    census = singular_census_3d(
        surface,
        tol=args.census_tol,
        grid=args.grid,
        cluster_tol=args.cluster_tol,
    )
    match = census.by_type == expected_types and census.verified
    payload = {
        "degree": d,
        "construction": provenance,
        "expected_by_type": {f"A{k}": v for k, v in sorted(expected_types.items())},
        "expected_total": sum(expected_types.values()),
        "census": census.as_dict(),
        "match": match,
    }
    _write_output(_dumps(payload), args.output)
    return EXIT_OK if match else EXIT_MISMATCH


def find_default(d: int):
    """Lowest-multiplicity catalogued construction at exactly degree d."""
    for c in constructions_up_to(d):
        if c.degree == d:
            return c
    return None


def cmd_export(args) -> int:
    seed = parse_seed(args.seed)
    word = _parse_word(args.word, seed)
    tree = tree_for_derivation(seed, word)
    if args.format == "dot":
        _write_output(export_dot(tree), args.output)
    else:
        _write_output(_dumps(export_json_adjacency(tree)), args.output)
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output", default=None, help="write output to a file (UTF-8)")


def _add_seed_word(p: argparse.ArgumentParser, word_required: bool = False) -> None:
    p.add_argument(
        "--seed", required=True, help="seed flags, e.g. F1:1,1 or F2:0,1,2,2"
    )
    p.add_argument(
        "--word",
        default="" if not word_required else None,
        required=word_required,
        help="letter string over the seed's alphabet",
    )


def _add_solver(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--max-degree", type=int, default=DEGREE_GUARD)
    p.add_argument("--cluster-tol", type=float, default=DEFAULT_CLUSTER_TOL)


def build_parser() -> _Parser:
    root = _Parser(prog="belyi-forge", description=__doc__)
    root.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker threads (default: BELYI_FORGE_THREADS or CPU count)",
    )
    sub = root.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("seeds", help="list and validate seed triples over grids")
    p.add_argument("--family", choices=["F1", "F2", "F3", "all"], default="all")
    p.add_argument("--max-degree", type=int, default=60)
    _add_common(p)
    p.set_defaults(func=cmd_seeds)

    p = sub.add_parser("derive", help="apply a word, print the state trajectory")
    _add_seed_word(p)
    _add_common(p)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("enumerate", help="list admissible words up to a length")
    p.add_argument("--seed", required=True)
    p.add_argument("--max-len", type=int, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("families", help="catalogued word families plus subset check")
    p.add_argument("--seed", required=True)
    p.add_argument("--limit", type=int, default=20)
    _add_common(p)
    p.set_defaults(func=cmd_families)

    p = sub.add_parser("shabat", help="solve vertex positions and census the result")
    _add_seed_word(p)
    _add_solver(p)
    _add_common(p)
    p.set_defaults(func=cmd_shabat)

    p = sub.add_parser("jd-verify", help="build the arrangement polynomial, census it")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--grid", type=int, default=48)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    p.add_argument("--den-bound", type=int, default=DEFAULT_DEN_BOUND)
    _add_common(p)
    p.set_defaults(func=cmd_jd_verify)

    p = sub.add_parser("table", help="lower-bound table over catalogued constructions")
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--nu", type=int, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("surface-verify", help="trivariate singular-point census")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--seed", default=None)
    p.add_argument("--word", default=None)
    p.add_argument("--nodal", action="store_true", help="use the all-nodes surface")
    p.add_argument("--grid", type=int, default=48)
    p.add_argument("--census-tol", type=float, default=1e-6)
    p.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    _add_solver(p)
    _add_common(p)
    p.set_defaults(func=cmd_surface_verify)

    p = sub.add_parser("export", help="export the derived tree as DOT or JSON")
    _add_seed_word(p)
    p.add_argument("--format", choices=["dot", "json"], default="dot")
    _add_common(p)
    p.set_defaults(func=cmd_export)

    return root


_USAGE_ERRORS = (SeedDomainError, AlphabetMismatchError, DegreeGuardError)
_MISMATCH_ERRORS = (
    NoConvergenceError,
    RationalizationError,
    NoFamilyRecordedError,
    LetterNotApplicableError,
    RealizationError,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_USAGE
    except _MISMATCH_ERRORS as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_MISMATCH
    except ValueError as exc:
        _emit_error("ValueError", str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
