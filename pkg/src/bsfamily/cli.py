"""Command-line front end.

    bsfamily bfunction --f "x^2" --x x
    bsfamily generic   --f "x1^2+y*x2^2+x2^3" --x x1,x2 --y y --Q y
    bsfamily stratify  --f "x1^2+y*x2^2+x2^3" --x x1,x2 --y y
    bsfamily verify    --certificate cert.json

Output is a JSON document (keys sorted, rationals as "p/q") or, with
--format text, a short human summary.  Exit codes follow the error classes
in `bsfamily.errors`; 0 means success and 1 a failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from .arith import ParamPoly, PrimeIdealSpec, factor_irreducible
from .bfunction import BFunction, bernstein
from .division import DivisionConfig, default_step_budget
from .errors import BsFamilyError, MalformedCertificate, ParseError
from .ncalg import NCOperator, weyl_signature
from .parametric import (Certificate, generic_bernstein, specialization_check, strata_disjoint,
                         stratify, weak_certificate)
from .polyparse import format_rational, parse_poly, parse_rational
from .verify import certificate_check

INTERNAL_ERROR = 8


@dataclass
class JobSpec:
    command: str
    f: str = ""
    x_vars: list = field(default_factory=list)
    y_vars: list = field(default_factory=list)
    Q: list = field(default_factory=list)
    certificate: str | None = None
    output_format: str = "json"
    step_budget: int = field(default_factory=default_step_budget)
    scan_cap: int = 50
    samples: int = 0
    seed: int = 0
    order: str = "local"


def _split_names(text: str | None) -> list:
    if not text:
        return []
    return [t.strip() for t in text.split(",") if t.strip()]


def _roots_doc(b: BFunction) -> list:
    return [{"root": format_rational(r), "multiplicity": k} for r, k in b.roots]


def _poly_doc(p: ParamPoly, names) -> str:
    return p.format(names)


def _factors_doc(p: ParamPoly, names) -> list:
    if p.is_constant():
        return []
    return [{"factor": q.format(names), "multiplicity": k} for q, k in factor_irreducible(p)]


def operator_to_doc(op: NCOperator) -> list:
    sig = op.sig
    n = sig.n
    out = []
    for mo in sorted(op.terms, reverse=True):
        out.append({
            "x": list(mo[:n]),
            "z": {sig.z_names[j]: e for j, e in enumerate(mo[n:]) if e},
            "c": op.terms[mo].format(sig.y_names),
        })
    return out


def operator_from_doc(doc, sig) -> NCOperator:
    if not isinstance(doc, list):
        raise MalformedCertificate("an operator must be a list of terms")
    idx = {nm: j for j, nm in enumerate(sig.z_names)}
    op = NCOperator.zero(sig)
    for t in doc:
        try:
            alpha = [int(a) for a in t["x"]]
            beta = [0] * sig.q
            for nm, e in t.get("z", {}).items():
                if nm not in idx:
                    raise MalformedCertificate(f"unknown operator generator {nm!r}")
                beta[idx[nm]] = int(e)
            c = parse_poly(str(t["c"]), sig.y_names)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedCertificate(f"bad operator term {t!r}") from exc
        if len(alpha) != sig.n or min(alpha + beta, default=0) < 0:
            raise MalformedCertificate(f"bad exponents in {t!r}")
        op = op + NCOperator.monomial(sig, tuple(alpha) + tuple(beta), c)
    return op


def certificate_to_doc(cert: Certificate, x_names, y_names) -> dict:
    names = list(x_names) + list(y_names)
    return {
        "f": cert.f.format(names),
        "x": list(x_names),
        "y": list(y_names),
        "Q": [g.format(y_names) for g in cert.Q.generators],
        "b": _roots_doc(cert.b),
        "h": cert.h.format(names),
        "P0": operator_to_doc(cert.P0),
        "P1": operator_to_doc(cert.P1),
    }


def certificate_from_doc(doc: dict):
    try:
        x = list(doc["x"])
        y = list(doc.get("y", []))
        names = x + y
        f = parse_poly(doc["f"], names)
        Q = PrimeIdealSpec([parse_poly(g, y) for g in doc.get("Q", [])], len(y))
        b = BFunction(tuple((parse_rational(r["root"]), int(r["multiplicity"])) for r in doc["b"]))
        h = parse_poly(doc["h"], names)
        sig = weyl_signature(len(x), len(y), x_names=x, y_names=y)
        P0 = operator_from_doc(doc["P0"], sig)
        P1 = operator_from_doc(doc["P1"], sig)
    except (KeyError, TypeError) as exc:
        raise MalformedCertificate(f"certificate is missing a field: {exc}") from exc
    except ParseError as exc:
        raise MalformedCertificate(str(exc)) from exc
    return f, len(x), Q, b, h, P0, P1


# ---------------------------------------------------------------------------

def _parse_job_inputs(job: JobSpec):
    if set(job.x_vars) & set(job.y_vars):
        raise ParseError("x and y variable names must be disjoint")
    if not job.x_vars:
        raise ParseError("at least one x variable is required")
    names = job.x_vars + job.y_vars
    f = parse_poly(job.f, names)
    if f.is_zero():
        raise ParseError("f must be nonzero")
    Q = PrimeIdealSpec([parse_poly(g, job.y_vars) for g in job.Q], len(job.y_vars))
    return f, Q


def _run_bfunction(job: JobSpec, cfg: DivisionConfig) -> tuple[int, dict]:
    if job.y_vars:
        raise ParseError("bfunction takes no parameters; use generic")
    f, _ = _parse_job_inputs(job)
    b, trace = bernstein(f, config=cfg, cap=job.scan_cap)
    doc = {
        "command": "bfunction",
        "f": f.format(job.x_vars),
        "x": job.x_vars,
        "b": {"roots": _roots_doc(b), "factored": b.factored(), "degree": b.degree},
        "b0": {"roots": [{"root": format_rational(r), "multiplicity": k}
                         for r, k in BFunction(tuple(_b0_roots(trace.b0))).roots]},
        "exponents": [{"root": format_rational(d.root), "mu": d.mu, "l": d.l} for d in trace.roots],
    }
    if job.certificate:
        res = generic_bernstein(f, len(job.x_vars), None, cfg, job.scan_cap, job.x_vars)
        cert = weak_certificate(f, len(job.x_vars), None, res, cfg, job.x_vars)
        _write_cert(job, cert, doc)
    return 0, doc


def _b0_roots(b0):
    from .arith import rational_roots

    return rational_roots(b0)[0]


def _write_cert(job: JobSpec, cert: Certificate, doc: dict):
    cdoc = certificate_to_doc(cert, job.x_vars, job.y_vars)
    ok = certificate_check(cert.f, cert.n, cert.Q, cert.b, cert.h, cert.P0, cert.P1).ok
    if job.certificate == "-":
        doc["certificate"] = cdoc
    else:
        with open(job.certificate, "w") as fh:
            json.dump(cdoc, fh, indent=2, sort_keys=True)
            fh.write("\n")
        doc["certificate_file"] = job.certificate
    doc["certificate_verified"] = ok


def _run_generic(job: JobSpec, cfg: DivisionConfig) -> tuple[int, dict]:
    f, Q = _parse_job_inputs(job)
    n = len(job.x_vars)
    res = generic_bernstein(f, n, Q, cfg, job.scan_cap, job.x_vars, job.y_vars)
    y = job.y_vars
    doc = {
        "command": "generic",
        "f": f.format(job.x_vars + y),
        "x": job.x_vars,
        "y": y,
        "Q": [g.format(y) for g in Q.generators],
        "b": {"roots": _roots_doc(res.b), "factored": res.b.factored(), "degree": res.b.degree},
        "h_prime": {
            "value": res.h_prime.format(y),
            "factors": _factors_doc(res.h_prime, y),
            "stages": [{"stage": lab, "value": h.format(y), "factors": _factors_doc(h, y)}
                       for lab, h in res.h_factors],
        },
    }
    if job.samples:
        rep = specialization_check(res, f, job.samples, job.seed, cfg)
        doc["specialization"] = {
            "points": [{"y": [format_rational(v) for v in p], "roots": _roots_doc(bp), "equal": eq}
                       for p, bp, eq in rep.points],
            "requested": job.samples,
            "all_equal": rep.all_equal,
        }
    if job.certificate:
        cert = weak_certificate(f, n, Q, res, cfg, job.x_vars, job.y_vars)
        _write_cert(job, cert, doc)
    return 0, doc


def _run_stratify(job: JobSpec, cfg: DivisionConfig) -> tuple[int, dict]:
    f, Q = _parse_job_inputs(job)
    if Q.generators:
        raise ParseError("stratify covers the whole parameter space; omit --Q")
    y = job.y_vars
    strata = stratify(f, len(job.x_vars), cfg, job.scan_cap)
    doc = {
        "command": "stratify",
        "f": f.format(job.x_vars + y),
        "x": job.x_vars,
        "y": y,
        "strata": [
            {
                "roots": _roots_doc(st.b) if st.b is not None else None,
                "factored": st.b.factored() if st.b is not None else "f vanishes identically",
                "carrier": [{"Q": [g.format(y) for g in c.Q.generators],
                             "excluded": c.excluded.format(y),
                             "excluded_factors": _factors_doc(c.excluded, y),
                             "description": c.format(y)} for c in st.carrier],
            }
            for st in strata
        ],
        "disjoint": strata_disjoint(strata),
    }
    return 0, doc


def _run_verify(job: JobSpec, cfg: DivisionConfig) -> tuple[int, dict]:
    if not job.certificate:
        raise ParseError("verify needs --certificate FILE")
    try:
        if job.certificate == "-":
            raw = json.load(sys.stdin)
        else:
            with open(job.certificate) as fh:
                raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedCertificate(f"cannot read certificate: {exc}") from exc
    if not isinstance(raw, dict):
        raise MalformedCertificate("certificate must be a JSON object")
    f, n, Q, b, h, P0, P1 = certificate_from_doc(raw)
    res = certificate_check(f, n, Q, b, h, P0, P1)
    names = list(raw["x"]) + list(raw.get("y", []))
    doc = {
        "command": "verify",
        "ok": res.ok,
        "message": res.message,
        "residual": [c.format(names) for c in res.residual.components] if not res.ok else [],
    }
    return (0 if res.ok else 1), doc


_COMMANDS = {
    "bfunction": _run_bfunction,
    "generic": _run_generic,
    "stratify": _run_stratify,
    "verify": _run_verify,
}


def run(job: JobSpec) -> tuple[int, dict]:
    """Execute a job; returns (exit code, output document)."""
    try:
        cfg = DivisionConfig(step_budget=job.step_budget, order=job.order)
        return _COMMANDS[job.command](job, cfg)
    except BsFamilyError as exc:
        return exc.exit_code, {"command": job.command, "error": type(exc).__name__, "message": str(exc)}
    except ValueError as exc:
        return ParseError.exit_code, {"command": job.command, "error": "InvalidInput", "message": str(exc)}
    except Exception as exc:  # noqa: BLE001 - reported as an internal failure
        return INTERNAL_ERROR, {"command": job.command, "error": type(exc).__name__, "message": str(exc)}


def render_text(doc: dict) -> str:
    if "error" in doc:
        return f"error: {doc['error']}: {doc['message']}"
    cmd = doc["command"]
    lines = []
    if cmd in ("bfunction", "generic"):
        lines.append(f"b(s) = {doc['b']['factored']}")
        if cmd == "generic":
            lines.append(f"Q = ({', '.join(doc['Q']) or '0'})")
            lines.append(f"h' = {doc['h_prime']['value']}")
        if "specialization" in doc:
            sp = doc["specialization"]
            lines.append(f"specialization: {len(sp['points'])} points, all equal: {sp['all_equal']}")
        if "certificate_verified" in doc:
            lines.append(f"certificate verified: {doc['certificate_verified']}")
    elif cmd == "stratify":
        for st in doc["strata"]:
            where = " u ".join(c["description"] for c in st["carrier"])
            lines.append(f"{where}: b(s) = {st['factored']}")
    else:
        lines.append("certificate OK" if doc["ok"] else "certificate FAILED")
        for i, r in enumerate(doc.get("residual", [])):
            if r != "0":
                lines.append(f"  residual xi_{i}: {r}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsfamily", description="Local Bernstein-Sato polynomials of families")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("bfunction", "generic", "stratify", "verify"):
        sp = sub.add_parser(name)
        if name != "verify":
            sp.add_argument("--f", required=True, help="polynomial in the x (and y) variables")
            sp.add_argument("--x", required=True, help="comma-separated x variables")
        if name in ("generic", "stratify"):
            sp.add_argument("--y", default="", help="comma-separated parameters")
        if name == "generic":
            sp.add_argument("--Q", action="append", default=[],
                            help="generator of the prime Q (repeat or comma-separate)")
            sp.add_argument("--samples", type=int, default=0, help="specialization points to check")
            sp.add_argument("--seed", type=int, default=0)
        if name in ("bfunction", "generic"):
            sp.add_argument("--certificate", help="write a certificate to FILE ('-' to embed)")
        if name == "verify":
            sp.add_argument("--certificate", required=True, help="certificate JSON ('-' for stdin)")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--budget", type=int, default=None, help="step budget per division")
        sp.add_argument("--cap", type=int, default=50, help="cap on the exponent scan")
        sp.add_argument("--order", choices=("local", "global"), default="local",
                        help="monomial order in x for the eliminations")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ParseError.exit_code if exc.code else 0
    try:
        budget = args.budget if args.budget is not None else default_step_budget()
    except ValueError:
        print("error: ParseError: BSFAMILY_STEP_BUDGET must be an integer", file=sys.stderr)
        return ParseError.exit_code
    qs = []
    for item in getattr(args, "Q", []) or []:
        qs += _split_names(item)
    job = JobSpec(
        command=args.command,
        f=getattr(args, "f", "") or "",
        x_vars=_split_names(getattr(args, "x", "")),
        y_vars=_split_names(getattr(args, "y", "")),
        Q=qs,
        certificate=getattr(args, "certificate", None),
        output_format=args.format,
        step_budget=budget,
        scan_cap=args.cap,
        samples=getattr(args, "samples", 0),
        seed=getattr(args, "seed", 0),
        order=args.order,
    )
    code, doc = run(job)
    if job.output_format == "text":
        out = render_text(doc)
    else:
        out = json.dumps(doc, indent=2, sort_keys=True)
    stream = sys.stdout if code in (0, 1) else sys.stderr
    print(out, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
