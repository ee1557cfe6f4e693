"""Command line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error, 3 I/O or
input-file error.
"""
import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import suite
from .errors import FieldFileError
from .fieldio import field_to_dict, parse_field_file, write_field_file
from .loop import random_killing_field
from .report import ReportDocument, digest_bytes, emit_report, field_digest, render_report, to_jsonable

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def parse_seeds(text):
    """'1..20', '3', or '1,4,9' (ranges inclusive)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty seed range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out:
        raise UsageError("no seeds given")
    return out


def parse_zetas(text):
    out = []
    for part in text.split(","):
        z = complex(part.strip().replace(" ", ""))
        if z == 0:
            raise UsageError("zeta must be nonzero")
        out.append(z)
    return out


def max_workers():
    raw = os.environ.get("G2SPECTRAL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"G2SPECTRAL_THREADS must be an integer, got {raw!r}") from None


def _file_digest(path):
    with open(path, "rb") as fh:
        return digest_bytes(fh.read())


def _write(doc, out):
    if out:
        emit_report(doc, out)
    else:
        sys.stdout.write(render_report(doc))


def _finish(doc, out):
    _write(doc, out)
    if doc.overall_status != "pass":
        where = out or "stdout"
        sys.stderr.write(f"checks failed; report written to {where}\n")
        return EXIT_FAIL
    return EXIT_OK


# ---- commands ------------------------------------------------------------------

def cmd_gen(args):
    A = random_killing_field(args.k, args.seed)
    if args.out:
        write_field_file(A, args.out, seed=args.seed)
    else:
        sys.stdout.write(json.dumps(field_to_dict(A, seed=args.seed), sort_keys=True, indent=1) + "\n")
    return EXIT_OK


def _load(args):
    if not args.input:
        raise UsageError("--in is required")
    return parse_field_file(args.input, tol=args.tol), _file_digest(args.input)


def cmd_inspect(args):
    A, digest = _load(args)
    doc = ReportDocument("inspect", digest, suite.inspect_checks(A, args.tol))
    return _finish(doc, args.out)


def cmd_spectral(args):
    A, digest = _load(args)
    doc = ReportDocument("spectral", digest)
    entries, S, R, sm = suite.spectral_checks(A, args.tol, args.samples, doc)
    doc.entries.extend(entries)
    doc.genus = R.as_dict()
    doc.extra["moduli_dim"] = R.moduli_dim
    doc.extra["spectral_coefficients"] = {
        "k": S.k,
        "b1": {"lo": S.b1.lo, "coeffs": S.b1.coeffs},
        "b2": {"lo": S.b2.lo, "coeffs": S.b2.coeffs},
    }
    return _finish(doc, args.out)


def cmd_flow(args):
    A, digest = _load(args)
    doc = ReportDocument("flow", digest)
    entries, series = suite.flow_checks(A, args.t, min(args.tol, 1e-10), doc=doc)
    doc.entries.extend(entries)
    doc.extra["drift_series"] = series
    if args.out:
        base, _ = os.path.splitext(args.out)
        with open(base + ".csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["t", "drift_b1", "drift_b2", "trace_drift"])
            for row in series:
                w.writerow([f"{row['t']:.6g}", f"{row['drift_b1']:.5e}", f"{row['drift_b2']:.5e}",
                            f"{row['trace_drift']:.5e}"])
    return _finish(doc, args.out)


def cmd_fiber(args):
    A, digest = _load(args)
    zetas = parse_zetas(args.zeta) if args.zeta else None
    doc = ReportDocument("fiber", digest)
    doc.entries.extend(suite.fiber_checks(A, zetas, args.tol, doc=doc))
    return _finish(doc, args.out)


def verify_seed(k, seed, tol, samples, t_end):
    """Full battery for one random field; returns plain data so it can cross processes."""
    A = random_killing_field(k, seed)
    doc = ReportDocument("verify", field_digest(A))
    doc.entries.extend(suite.inspect_checks(A, tol))
    entries, _, R, sm = suite.spectral_checks(A, tol, samples, doc)
    doc.entries.extend(entries)
    flow, _ = suite.flow_checks(A, t_end, 1e-10, doc=doc)
    doc.entries.extend(flow)
    doc.entries.extend(suite.fiber_checks(A, None, tol, doc=doc))
    return {"seed": seed, "digest": doc.input_digest, "entries": doc.entries, "genus": R.as_dict(),
            "smooth": bool(sm.smooth), "stats": doc.stats}


def cmd_verify(args):
    seeds = parse_seeds(args.seeds) if args.seeds else [args.seed]
    jobs = [(args.k, s, args.tol, args.samples, args.t) for s in seeds]
    workers = min(max_workers(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(verify_seed, *zip(*jobs)))
    else:
        results = [verify_seed(*j) for j in jobs]
    from .report import check
    doc = ReportDocument("verify", digest_bytes(json.dumps({"k": args.k, "seeds": seeds}).encode()))
    per_seed = []
    for res in results:
        for e in res["entries"]:
            doc.entries.append(type(e)(f"seed{res['seed']}.{e.name}", e.paper_anchor, e.status, e.residual,
                                       e.tolerance, e.detail))
        for key, n in res["stats"].items():
            doc.count(key, n)
        per_seed.append({"seed": res["seed"], "digest": res["digest"], "genus": res["genus"]})
    smooth_frac = np.mean([r["smooth"] for r in results])
    doc.entries.append(check("smooth_fraction", "smooth-generic", 1.0 - smooth_frac, 0.05,
                             fraction=float(smooth_frac)))
    doc.count("seeds", len(seeds))
    doc.extra["k"] = args.k
    doc.extra["seeds"] = per_seed
    flagged = sorted({e.name.split(".", 1)[1] for e in doc.entries if e.status == "flagged"})
    doc.extra["flagged"] = flagged
    return _finish(doc, args.out)


# ---- argument parsing ------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="g2spectral", description="Spectral data of G2 polynomial Killing fields")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_in=True):
        if need_in:
            sp.add_argument("--in", dest="input", help="field file (JSON)")
        sp.add_argument("--out", help="output path (default: stdout)")
        sp.add_argument("--tol", type=float, default=1e-9, help="structural residual tolerance")

    g = sub.add_parser("gen", help="write a random Killing field")
    g.add_argument("--k", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("inspect", help="symmetry residuals of a field file")
    common(s)
    s.set_defaults(func=cmd_inspect)

    s = sub.add_parser("spectral", help="spectral coefficients, branch counts and genera")
    common(s)
    s.add_argument("--samples", type=int, default=None)
    s.set_defaults(func=cmd_spectral)

    s = sub.add_parser("flow", help="integrate the Lax flow and measure drift")
    common(s)
    s.add_argument("--t", type=float, default=1.0)
    s.set_defaults(func=cmd_flow)

    s = sub.add_parser("fiber", help="fiberwise omega / v0 / eigenline checks")
    common(s)
    s.add_argument("--zeta", help="comma-separated complex values, e.g. '0.9+0.4j,1.1-0.2j'")
    s.set_defaults(func=cmd_fiber)

    s = sub.add_parser("verify", help="run every check on random fields")
    common(s, need_in=False)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--seeds", help="e.g. 1..20 or 1,5,9")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--samples", type=int, default=None)
    s.add_argument("--t", type=float, default=1.0)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if getattr(args, "k", 0) is not None and getattr(args, "k", 0) < 0:
        sys.stderr.write("error: --k must be nonnegative\n")
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (OSError, FieldFileError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_IO
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

__all__ = ["main", "build_parser", "parse_seeds", "parse_zetas", "to_jsonable"]
