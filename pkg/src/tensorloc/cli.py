"""``tensorloc`` command line.

Exit codes: 0 success or certified, 1 inconclusive or violation found,
2 invalid input, 3 precondition violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import (
    BoundKind,
    Method,
    best_bound_over_s,
    eta_max,
    pi_min,
    r_max_bound,
    r_min_bound,
    region_scan_bound,
)
from .definiteness import check_pd, check_pd_diagonal_dominance, check_psd, search_pd_certificate
from .errors import DimensionTooLargeForExhaustiveCheck, InvalidInput, PreconditionViolated
from .io import load_tensor
from .oracle import spectral_radius_nonneg, tau_strong_m, verify_eigenvalue_in_regions
from .regions import RegionKind, RegionSpec, Window, default_window, raster, verify_inclusion_chain, write_csv, write_pgm
from .tensor import (
    MAX_DIM_IRREDUCIBLE,
    SubsetPartition,
    all_partitions,
    classify,
    is_irreducible,
    is_nonnegative,
    is_weakly_irreducible,
    is_z_tensor,
)

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_PRECONDITION = 0, 1, 2, 3

log = logging.getLogger("tensorloc")


class UsageError(InvalidInput):
    pass


def fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (float, int, np.floating)):
        return f"{float(x):.6g}"
    return str(x)


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, default=_jsonable) + "\n"
    else:
        out = text.rstrip("\n") + "\n"
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)


def _table(rows, headers) -> str:
    cells = [headers] + [[fmt(c) for c in row] for row in rows]
    widths = [max(len(r[k]) for r in cells) for k in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _partition(args, t, required: bool = True) -> SubsetPartition | None:
    """The explicit S, or None when --search-s was given."""
    explicit = getattr(args, "s", None)
    search = getattr(args, "search_s", False)
    if explicit is not None and search:
        raise UsageError("give either --s or --search-s, not both")
    if explicit is None and not search:
        if required:
            raise UsageError("this command needs --s i,j,... or --search-s")
        return None
    return SubsetPartition.parse(explicit, t.dim) if explicit is not None else None


# classify


def cmd_classify(args) -> int:
    t = load_tensor(args.input)
    flags = classify(t).as_dict()
    flags["weakly_irreducible"] = is_weakly_irreducible(t)
    flags["irreducible"] = is_irreducible(t) if t.dim <= MAX_DIM_IRREDUCIBLE else None
    payload = {"order": t.order, "dim": t.dim, "flags": flags, "strong_m": None}
    if flags["z_tensor"]:
        est = tau_strong_m(t)
        payload["strong_m"] = est.strong_m
        payload["shift"] = est.shift
        payload["rho_b"] = est.shift - est.lam
        payload["tau"] = est.lam
        payload["oracle"] = est.to_dict()
    lines = [f"order {t.order}, dimension {t.dim}"]
    lines += [f"{k:20s} {fmt(v)}" for k, v in flags.items()]
    lines.append(f"{'strong_m':20s} {fmt(payload['strong_m'])}")
    if flags["z_tensor"]:
        lines.append(f"{'rho(B)':20s} {fmt(payload['rho_b'])}  (s = {fmt(payload['shift'])})")
        lines.append(f"{'tau':20s} {fmt(payload['tau'])}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


# bounds


def _bounds_rows(t, kind: BoundKind, part: SubsetPartition | None, tol: float):
    rho = kind is BoundKind.RHO_UPPER
    if part is None:
        closed = best_bound_over_s(t, Method.ETA_MAX if rho else Method.PI_MIN)
        part = closed.partition
    else:
        closed = eta_max(t, part) if rho else pi_min(t, part)
    if rho:
        oracle = spectral_radius_nonneg(t)
    else:
        oracle = tau_strong_m(t)
        if not oracle.strong_m:
            raise PreconditionViolated("tensor is not a strong M-tensor")
        if not is_weakly_irreducible(t):
            raise PreconditionViolated("tensor is not weakly irreducible")
    classic = r_max_bound(t) if rho else r_min_bound(t)
    scans = [
        region_scan_bound(t, RegionSpec(RegionKind.BRAUER_K), kind, tol),
        region_scan_bound(t, RegionSpec(RegionKind.K_S, part), kind, tol),
        region_scan_bound(t, RegionSpec(RegionKind.OMEGA_S, part), kind, tol),
    ]
    return part, [classic, *scans, closed], oracle


def cmd_bounds(args) -> int:
    t = load_tensor(args.input)
    kind = BoundKind.RHO_UPPER if args.kind == "rho" else BoundKind.TAU_LOWER
    part = _partition(args, t)
    part, reports, oracle = _bounds_rows(t, kind, part, args.tol)
    target = "rho" if args.kind == "rho" else "tau"
    payload = {
        "kind": kind.value,
        "partition": list(part.members),
        "searched": args.search_s,
        "bounds": [{"label": r.label, **r.to_dict()} for r in reports],
        "oracle": oracle.to_dict(),
    }
    rows = [[r.label, r.value] for r in reports]
    rows.append([f"oracle {target}", oracle.lam])
    text = f"{target} bounds, S = {{{part}}}\n" + _table(rows, ["method", "value"])
    text += f"\noracle residual {fmt(oracle.residual)}, converged {fmt(oracle.converged)}"
    _emit(args, payload, text)
    return EXIT_OK


# pd-check


def cmd_pd_check(args) -> int:
    t = load_tensor(args.input)
    part = _partition(args, t)
    if part is None:
        verdict = search_pd_certificate(t, semi=args.semi)
    else:
        verdict = check_psd(t, part) if args.semi else check_pd(t, part)
    baseline = check_pd_diagonal_dominance(t)
    payload = {"verdict": verdict.to_dict(), "baseline": baseline.to_dict()}
    lines = [verdict.status.value]
    if verdict.certifying_s is not None:
        lines.append(f"certifying S = {{{verdict.certifying_s}}}")
    if verdict.reason:
        lines.append(f"reason: {verdict.reason}")
    for c in verdict.trace:
        rel = ">" if c.strict else ">="
        where = f"i={c.i}" if c.j is None else f"i={c.i}, j={c.j}"
        line = f"  ({c.condition}) {where}: {fmt(c.lhs)} {rel} {fmt(c.rhs)}  {'ok' if c.holds else 'fails'}"
        if c.alternative is not None and not c.holds:
            a = c.alternative
            line += f"; alt {fmt(a.lhs)} {rel} {fmt(a.rhs)} {'ok' if a.holds else 'fails'}"
        lines.append(line)
    lines.append(f"diagonal dominance baseline: {baseline.status.value}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if verdict.certified else EXIT_INCONCLUSIVE


# raster


def cmd_raster(args) -> int:
    t = load_tensor(args.input)
    kinds = [RegionKind.parse(tok) for tok in args.sets.split(",") if tok.strip()]
    if not kinds:
        raise UsageError("--sets is empty")
    needs_s = any(k.needs_partition for k in kinds)
    part = SubsetPartition.parse(args.s, t.dim) if args.s is not None else None
    if needs_s and part is None:
        raise UsageError("the requested sets need --s")
    window = Window.parse(args.window) if args.window else default_window(t)
    specs = [RegionSpec(k, part if k.needs_partition else None) for k in kinds]
    r = raster(t, specs, window, args.res)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    if args.emit in ("pgm", "both"):
        for k in kinds:
            path = out / f"{k.value}.pgm"
            write_pgm(r.masks[k], path)
            files.append(path.name)
    if args.emit in ("csv", "both"):
        write_csv(r, out / "raster.csv")
        files.append("raster.csv")
    counts = r.counts()
    payload = {
        "window": [window.x0, window.x1, window.y0, window.y1],
        "resolution": args.res,
        "partition": list(part.members) if part else None,
        "counts": counts,
        "files": files,
    }
    text = "\n".join(f"{k:8s} {v}" for k, v in counts.items())
    _emit(args, payload, text + "\nwrote " + ", ".join(files))
    return EXIT_OK


# verify


def cmd_verify(args) -> int:
    t = load_tensor(args.input)
    part = _partition(args, t)
    parts = [part] if part is not None else list(all_partitions(t.dim))
    window = Window.parse(args.window) if args.window else None
    reports = [verify_inclusion_chain(t, p, args.samples, window, args.seed) for p in parts]
    violations = sum(r.violations for r in reports)
    payload = {"inclusion": [r.to_dict() for r in reports], "eigenvalue": None}
    lines = [f"S = {{{r.partition}}}: {r.sample_count} points, {r.violations} violations" for r in reports]
    est, target = None, None
    if is_nonnegative(t):
        est, target = spectral_radius_nonneg(t), "rho"
    elif is_z_tensor(t):
        cand = tau_strong_m(t)
        if cand.strong_m:
            est, target = cand, "tau"
    contain_ok = True
    if est is not None:
        rep = verify_eigenvalue_in_regions(t, est.lam, parts, est.uncertainty)
        contain_ok = rep.ok
        payload["eigenvalue"] = {"target": target, "estimate": est.to_dict(), "containment": rep.to_dict()}
        lines.append(
            f"{target} = {fmt(est.lam)}: contained in {len(rep.results) - len(rep.failures)}"
            f"/{len(rep.results)} set checks"
        )
    else:
        lines.append("no eigenvalue oracle applies")
    ok = violations == 0 and contain_ok
    payload["ok"] = ok
    lines.append("OK" if ok else "VIOLATION")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_INCONCLUSIVE


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")


def _add_s(p: argparse.ArgumentParser) -> None:
    p.add_argument("--s", help="subset S as comma-separated 1-based indices, e.g. 1,2")
    p.add_argument("--search-s", action="store_true", help="try every nonempty proper S")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tensorloc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="structural flags and strong-M status")
    p.add_argument("input")
    _add_output(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bounds", help="compare bounds on rho(A) or tau(A)")
    p.add_argument("input")
    p.add_argument("--kind", choices=("rho", "tau"), required=True)
    p.add_argument("--tol", type=float, default=1e-4, help="region-scan tolerance")
    _add_s(p)
    _add_output(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("pd-check", help="certify positive (semi-)definiteness")
    p.add_argument("input")
    p.add_argument("--semi", action="store_true")
    _add_s(p)
    _add_output(p)
    p.set_defaults(func=cmd_pd_check)

    p = sub.add_parser("raster", help="rasterize localization sets to PGM/CSV")
    p.add_argument("input")
    p.add_argument("--sets", default="gamma,k,ks,omega,upsilon")
    p.add_argument("--s")
    p.add_argument("--window", help="x0,x1,y0,y1")
    p.add_argument("--res", type=int, default=200)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--emit", choices=("pgm", "csv", "both"), default="pgm")
    _add_output(p)
    p.set_defaults(func=cmd_raster)

    p = sub.add_parser("verify", help="sample the inclusion chain and check eigenvalue containment")
    p.add_argument("input")
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", help="x0,x1,y0,y1")
    _add_s(p)
    _add_output(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, which already matches the contract
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (PreconditionViolated, DimensionTooLargeForExhaustiveCheck) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
