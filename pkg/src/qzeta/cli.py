"""Batch front-end: evaluate, verify, scan, extrapolate; machine-readable reports.

Every command emits one record per case with a fixed field set
(case_id, inputs, lhs, rhs, abs_diff, error_estimate, converged,
convention_note, error), as newline-delimited JSON or CSV.  Complex values
serialize as {re, im} objects (paired columns in CSV).  Exit status: 0 when
every case passed its tolerance, 1 on tolerance failures, 2 on domain or pole
errors, 64 on malformed flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace

import numpy as np

from .analysis import (check_alpha_derivative, check_pointwise_bounds,
                       check_pole_term_split, check_reciprocal_telescoping)
from .auxseries import check_aux_identity
from .limits import mzv_reference, q_to_1_extrapolate
from .qcore import (DEFAULT_POLICY, DomainError, PoleProximityError,
                    TruncationPolicy)
from .qmzf import convergence_margin, is_admissible, zeta_q
from .sumformula import (check_interp_collapse, check_sum_formula,
                         interpolated_sum_depth2)

USAGE_ERROR = 64

_COMPLEX_RE = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"(?:\s*([+-]\s*(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)\s*i)?\s*$")


def parse_complex(text: str) -> complex:
    """Parse 'a', 'a+bi' or 'a-bi' with decimal components."""
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse complex literal {text!r}")
    re_part = float(m.group(1))
    im_part = float(m.group(2).replace(" ", "")) if m.group(2) else 0.0
    return complex(re_part, im_part)


def parse_index(text: str) -> tuple[complex, ...]:
    return tuple(parse_complex(p) for p in text.split(","))


def parse_q_list(text: str) -> list[float]:
    return [float(p) for p in text.split(",")]


def parse_grid(text: str) -> list[float]:
    """'start:stop:count' -> evenly spaced values; a plain number is a 1-grid."""
    if ":" in text:
        start, stop, count = text.split(":")
        return [float(v) for v in np.linspace(float(start), float(stop), int(count))]
    return [float(text)]


def _c(z) -> dict | None:
    if z is None:
        return None
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def make_record(case_id: str, inputs: dict, lhs=None, rhs=None, abs_diff=0.0,
                error_estimate=0.0, converged=True, convention_note="",
                error=None) -> dict:
    return {
        "case_id": case_id,
        "inputs": inputs,
        "lhs": _c(lhs),
        "rhs": _c(rhs),
        "abs_diff": float(abs_diff),
        "error_estimate": float(error_estimate),
        "converged": bool(converged),
        "convention_note": convention_note,
        "error": error,
    }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(USAGE_ERROR)


def _policy_from_args(args) -> TruncationPolicy:
    pol = DEFAULT_POLICY
    overrides = {}
    if args.tol is not None:
        overrides["tol"] = args.tol
    if args.max_outer is not None:
        overrides["max_outer"] = args.max_outer
    if args.stall_window is not None:
        overrides["stall_window"] = args.stall_window
    if args.quad_order is not None:
        overrides["quad_order"] = args.quad_order
    if args.tail_fit_window is not None:
        overrides["tail_fit_window"] = args.tail_fit_window
    return replace(pol, **overrides) if overrides else pol


# ---------------------------------------------------------------------------
# per-command case builders; each case is (case_id, tolerance, thunk)
# ---------------------------------------------------------------------------

def _cases_eval(args, policy):
    index = parse_index(args.index)
    for q in parse_q_list(args.q):
        cid = f"eval-q{q}-index{args.index}"
        inputs = {"index": [_c(s) for s in index], "q": q}

        def thunk(q=q, cid=cid, inputs=inputs):
            res = zeta_q(index, q, policy)
            return make_record(cid, inputs, lhs=res.value, rhs=None,
                               abs_diff=0.0, error_estimate=res.abs_error_estimate,
                               converged=res.converged)

        yield cid, math.inf, thunk


def _cases_sum_formula(args, policy):
    for q in parse_q_list(args.q):
        cid = f"sum-formula-k{args.k}-r{args.r}-q{q}"
        inputs = {"k": args.k, "r": args.r, "q": q}

        def thunk(q=q, cid=cid, inputs=inputs):
            rep = check_sum_formula(args.k, args.r, q, policy)
            return make_record(cid, inputs, lhs=rep.lhs, rhs=rep.rhs,
                               abs_diff=rep.abs_diff,
                               error_estimate=rep.tail_estimate,
                               convention_note=rep.convention_note)

        yield cid, args.check_tol or 1e-9, thunk


def _cases_theorem3(args, policy):
    s_values = [parse_complex(p) for p in args.s.split(";")]
    for q in parse_q_list(args.q):
        for s in s_values:
            cid = f"theorem3-s{s}-q{q}"
            inputs = {"s": _c(s), "q": q}
            default_tol = 1e-6 if s.real > 2.0 else 1e-4

            def thunk(q=q, s=s, cid=cid, inputs=inputs):
                res = interpolated_sum_depth2(s, q, policy, n_max=args.n_max)
                rhs = zeta_q((s,), q, policy)
                return make_record(cid, inputs, lhs=res.value, rhs=rhs.value,
                                   abs_diff=abs(res.value - rhs.value),
                                   error_estimate=res.abs_error_estimate
                                   + rhs.abs_error_estimate,
                                   converged=res.converged and rhs.converged)

            yield cid, args.check_tol or default_tol, thunk


def _cases_theorem4(args, policy):
    for q in parse_q_list(args.q):
        for s_text in args.s.split(";"):
            s = parse_complex(s_text)
            cid = f"theorem4-b{args.b}-s{s}-q{q}"
            inputs = {"b": args.b, "s": _c(s), "q": q}

            def thunk(q=q, s=s, cid=cid, inputs=inputs):
                rep = check_interp_collapse(args.b, s, q, policy)
                return make_record(cid, inputs, lhs=rep.lhs, rhs=rep.rhs,
                                   abs_diff=rep.abs_diff,
                                   error_estimate=rep.tail_estimate,
                                   convention_note=rep.convention_note)

            yield cid, args.check_tol or 1e-7, thunk


def _cases_f_identity(args, policy):
    for q in parse_q_list(args.q):
        cid = f"f-identity-D{args.D}-s{args.s}-d{args.d}-q{q}"
        s = parse_complex(args.s)
        inputs = {"D": args.D, "s": _c(s), "d": args.d, "q": q}

        def thunk(q=q, s=s, cid=cid, inputs=inputs):
            rep = check_aux_identity(args.D, s, args.d, q, policy)
            return make_record(cid, inputs, lhs=rep.lhs, rhs=rep.rhs,
                               abs_diff=rep.abs_diff,
                               error_estimate=rep.tail_estimate,
                               convention_note=rep.convention_note)

        yield cid, args.check_tol or 1e-9, thunk


def _cases_lemmas(args, policy):
    rng = np.random.default_rng(args.seed)
    for q in parse_q_list(args.q):
        for m1 in (1, 3, 20):
            cid = f"lemmas-telescoping-m1_{m1}-q{q}"

            def thunk(q=q, m1=m1, cid=cid):
                rep = check_reciprocal_telescoping(m1, q, policy)
                return make_record(cid, {"lemma": "telescoping", "m1": m1, "q": q},
                                   lhs=rep.lhs, rhs=rep.rhs, abs_diff=rep.abs_diff,
                                   error_estimate=rep.tail_estimate)

            yield cid, args.check_tol or 1e-10, thunk
        for (s, alpha) in ((3.5, 2.0), (4.0, 2.5), (5.0 + 1.0j, 3.0)):
            cid = f"lemmas-pole-split-s{s}-a{alpha}-q{q}"

            def thunk(q=q, s=s, alpha=alpha, cid=cid):
                rep = check_pole_term_split(s, alpha, q, policy)
                return make_record(cid, {"lemma": "pole-split", "s": _c(s),
                                         "alpha": _c(alpha), "q": q},
                                   lhs=rep.lhs, rhs=rep.rhs, abs_diff=rep.abs_diff,
                                   error_estimate=rep.tail_estimate,
                                   convention_note=rep.convention_note)

            yield cid, args.check_tol or 1e-8, thunk
        for (s, alpha) in ((2.5, 4.0), (4.0, 2.5)):
            cid = f"lemmas-derivative-s{s}-a{alpha}-q{q}"

            def thunk(q=q, s=s, alpha=alpha, cid=cid):
                rep = check_alpha_derivative(s, alpha, q, policy)
                return make_record(cid, {"lemma": "alpha-derivative", "s": _c(s),
                                         "alpha": _c(alpha), "q": q},
                                   lhs=rep.lhs, rhs=rep.rhs, abs_diff=rep.abs_diff,
                                   error_estimate=0.0,
                                   convention_note=rep.convention_note)

            yield cid, args.check_tol or 1e-4, thunk
        cid = f"lemmas-pointwise-q{q}"

        def thunk(q=q, cid=cid, rng=rng):
            n_pts = args.bound_samples
            ms = rng.integers(1, 101, n_pts)
            us = rng.uniform(0.0, 1e3, n_pts)
            als = rng.uniform(1.0 + 1e-6, 20.0, n_pts)
            ss = rng.uniform(1.0 + 1e-6, 2.0, n_pts)
            bad = 0
            for m, u, al, sv in zip(ms, us, als, ss):
                ok1, ok2 = check_pointwise_bounds(int(m), float(u), float(al),
                                                  float(sv), q)
                bad += (not ok1) + (not ok2)
            note = (f"{bad} violations in {2 * n_pts} checks; the stated kernel "
                    "bounds fail for alpha > 1, m >= 2 once u is large (the "
                    "comparison function tends to (m/[m])^(alpha-s) "
                    "q^{(m-1)(alpha-1)} < 1), so a zero-violation expectation "
                    "over this grid cannot be met")
            return make_record(cid, {"lemma": "pointwise-bounds", "q": q,
                                     "samples": n_pts, "seed": args.seed},
                               lhs=complex(bad), rhs=0.0, abs_diff=float(bad),
                               error_estimate=0.0, convention_note=note)

        yield cid, 0.5, thunk


def _cases_limit(args, policy):
    index = parse_index(args.index)
    cid = f"limit-index{args.index}"
    grid = parse_q_list(args.q) if args.q else None
    inputs = {"index": [_c(s) for s in index]}

    def thunk(cid=cid, inputs=inputs):
        ref = None
        if is_admissible(index):
            ref = mzv_reference(index, precision_terms=args.reference_terms)
        rep = q_to_1_extrapolate(index, q_grid=grid, policy=policy, reference=ref)
        note = f"observed_order={rep.observed_order:.4f}"
        diff = abs(rep.extrapolated - ref) if ref is not None else 0.0
        return make_record(cid, inputs, lhs=rep.extrapolated, rhs=ref,
                           abs_diff=diff, error_estimate=0.0,
                           converged=True, convention_note=note)

    yield cid, args.check_tol or 5e-4, thunk


def _cases_scan(args, policy):
    target = args.scan_command
    qs = []
    for part in args.q.split(","):
        qs.extend(parse_grid(part))
    if target == "theorem3":
        ss = parse_grid(args.s)
        for q in qs:
            for s in ss:
                ns = argparse.Namespace(s=str(s), q=str(q), n_max=args.n_max,
                                        check_tol=args.check_tol)
                yield from _cases_theorem3(ns, policy)
    elif target == "theorem4":
        ss = parse_grid(args.s)
        for q in qs:
            for s in ss:
                ns = argparse.Namespace(b=args.b, s=str(s), q=str(q),
                                        check_tol=args.check_tol)
                yield from _cases_theorem4(ns, policy)
    elif target == "sum-formula":
        for q in qs:
            for k in range(3, args.k + 1):
                for r in range(1, min(args.r, k - 1) + 1):
                    ns = argparse.Namespace(k=k, r=r, q=str(q),
                                            check_tol=args.check_tol)
                    yield from _cases_sum_formula(ns, policy)
    else:
        raise ValueError(f"scan does not support command {target!r}")


# ---------------------------------------------------------------------------
# execution and output
# ---------------------------------------------------------------------------

def _run_case(entry):
    cid, tol, thunk = entry
    try:
        record = thunk()
        status = 0 if record["abs_diff"] <= max(tol, record["error_estimate"]) else 1
    except (DomainError, PoleProximityError) as exc:
        kind = ("pole proximity" if isinstance(exc, PoleProximityError)
                else "out of convergence domain")
        record = make_record(cid, {}, error=f"{kind}: {exc}")
        status = 2
    return record, status


def _emit(records: list[dict], fmt: str, path: str | None) -> None:
    if fmt == "json":
        text = "\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n"
    else:
        buf = io.StringIO()
        cols = ["case_id", "inputs", "lhs_re", "lhs_im", "rhs_re", "rhs_im",
                "abs_diff", "error_estimate", "converged", "convention_note",
                "error"]
        writer = csv.writer(buf)
        writer.writerow(cols)
        for r in records:
            writer.writerow([
                r["case_id"], json.dumps(r["inputs"], sort_keys=True),
                r["lhs"]["re"] if r["lhs"] else "",
                r["lhs"]["im"] if r["lhs"] else "",
                r["rhs"]["re"] if r["rhs"] else "",
                r["rhs"]["im"] if r["rhs"] else "",
                r["abs_diff"], r["error_estimate"], r["converged"],
                r["convention_note"], r["error"] or "",
            ])
        text = buf.getvalue()
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qzeta", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, q_required=True):
        p.add_argument("--q", required=q_required, default=None,
                       help="deformation parameter, single value or comma list")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", default=None, help="output path (default stdout)")
        p.add_argument("--check-tol", type=float, default=None,
                       help="override the per-command pass tolerance")
        p.add_argument("--seed", type=int, default=20240801,
                       help="seed for randomized bound grids")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--max-outer", type=int, default=None)
        p.add_argument("--stall-window", type=int, default=None)
        p.add_argument("--quad-order", type=int, default=None)
        p.add_argument("--tail-fit-window", type=int, default=None)

    p = sub.add_parser("eval", help="evaluate zeta_q at a multi-index")
    p.add_argument("--index", required=True, help='comma list, e.g. "1,2" or "0.5,0.4"')
    common(p)

    p = sub.add_parser("sum-formula", help="integer sum formula at weight k, depth r")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    common(p)

    p = sub.add_parser("theorem3", help="depth-2 interpolated sum formula at complex s")
    p.add_argument("--s", required=True, help='complex literal(s), ";"-separated')
    p.add_argument("--n-max", type=int, default=400)
    common(p)

    p = sub.add_parser("theorem4", help="order-(0,b) interpolation collapse")
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--s", required=True)
    common(p)

    p = sub.add_parser("f-identity", help="auxiliary chain-series convention experiment")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--d", type=int, required=True)
    common(p)

    p = sub.add_parser("lemmas", help="analytic lemma suite")
    p.add_argument("--bound-samples", type=int, default=2500)
    common(p)

    p = sub.add_parser("limit", help="q->1 Richardson extrapolation")
    p.add_argument("--index", required=True)
    p.add_argument("--reference-terms", type=int, default=1_000_000)
    common(p, q_required=False)  # --q overrides the default halving grid

    p = sub.add_parser("scan", help="cross-product grid scan of another command")
    p.add_argument("--scan-command", required=True,
                   choices=("theorem3", "theorem4", "sum-formula"))
    p.add_argument("--s", default="2.5:4.5:5", help='grid "start:stop:count"')
    p.add_argument("--b", type=int, default=2)
    p.add_argument("--k", type=int, default=7)
    p.add_argument("--r", type=int, default=4)
    p.add_argument("--n-max", type=int, default=400)
    common(p)

    return parser


_CASE_BUILDERS = {
    "eval": _cases_eval,
    "sum-formula": _cases_sum_formula,
    "theorem3": _cases_theorem3,
    "theorem4": _cases_theorem4,
    "f-identity": _cases_f_identity,
    "lemmas": _cases_lemmas,
    "limit": _cases_limit,
    "scan": _cases_scan,
}


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    policy = _policy_from_args(args)
    try:
        cases = list(_CASE_BUILDERS[args.command](args, policy))
    except (ValueError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    workers = max(1, min(len(cases) or 1,
                         int(os.environ.get("QZETA_MAX_THREADS", "4"))))
    if workers > 1 and len(cases) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_case, cases))
    else:
        outcomes = [_run_case(c) for c in cases]
    outcomes.sort(key=lambda rs: rs[0]["case_id"])
    records = [r for r, _ in outcomes]
    statuses = [s for _, s in outcomes]
    _emit(records, args.format, args.output)
    if any(s == 2 for s in statuses):
        return 2
    if any(s == 1 for s in statuses):
        return 1
    return 0


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
