"""Command-line entry point: ``superw --algebra q:3 --command skryabin-conditions``.

Reports are JSON on stdout (or ``--output``); short summaries go to stderr.
Exit codes: 0 all checks pass or warn, 1 some check fails, 2 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from superw import __version__
from superw.algebra import (
    AlgebraError,
    bracket,
    build_algebra,
    check_anticommutativity,
    check_form_invariance,
    check_jacobi,
    check_matrix_consistency,
    default_form,
    validate_params,
)
from superw.scalars import fmt, parse_rational_list

COMMANDS = (
    "jacobi",
    "grading",
    "whittaker-vectors",
    "osp12-series",
    "skryabin-conditions",
    "skryabin-conclusions",
    "freeness",
    "pn-tables",
    "automorphism",
    "linkage",
)
NEEDS_WEIGHT = {"whittaker-vectors", "osp12-series", "linkage"}
CONCLUSION_MAX_N = 3
TABLE_MAX_N = 6


class ParseError(ValueError):
    pass


class MissingRequiredField(ParseError):
    pass


@dataclass(frozen=True)
class RunSpec:
    command: str
    family: str | None = None
    params: tuple[int, ...] = ()
    weight: tuple[Fraction, ...] | None = None
    mu: tuple[Fraction, ...] | None = None
    truncation: int = 12
    wt_bound: int = 6
    scaling: tuple[Fraction, ...] | None = None
    seed: int = 0
    output: str | None = None
    bound: int = 10

    @property
    def algebra_text(self) -> str:
        if self.family is None:
            return ""
        return self.family + (":" + ",".join(map(str, self.params)) if self.params else "")


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def parse_algebra(text: str, where: str) -> tuple[str, tuple[int, ...]]:
    text = text.strip()
    if ":" in text:
        fam, _, rest = text.partition(":")
        tokens = rest.replace(",", " ").split()
    else:
        fam, *tokens = text.replace(",", " ").split()
    try:
        params = tuple(int(t) for t in tokens)
        params = validate_params(fam.strip(), params)
    except (ValueError, AlgebraError) as exc:
        raise ParseError(f"{where}: invalid algebra {text!r}: {exc}") from exc
    return fam.strip(), params


def _rationals(text: str, where: str) -> tuple[Fraction, ...]:
    try:
        return tuple(parse_rational_list(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"{where}: cannot parse rational list {text!r}") from exc


def _int(text: str, where: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ParseError(f"{where}: expected an integer, got {text!r}") from exc


_FILE_KEYS = {
    "algebra", "command", "weight", "mu", "truncation", "wt-bound", "scaling", "seed", "output", "bound",
}


def parse_spec_text(text: str, source: str = "<spec>") -> dict:
    """Line-based ``key value`` pairs; ``#`` starts a comment."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition(" ")
        key = key.strip().lower().replace("_", "-")
        value = value.strip()
        where = f"{source}:{lineno}"
        if key not in _FILE_KEYS:
            raise ParseError(f"{where}: unknown key {key!r}")
        if not value:
            raise ParseError(f"{where}: key {key!r} has no value")
        values[key] = (value, where)
    return values


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="superw", description=__doc__.splitlines()[0])
    p.add_argument("--algebra", help="FAM:params, e.g. gl:1,2  q:3  p:2  osp12  osp22")
    p.add_argument("--command", choices=COMMANDS)
    p.add_argument("--weight", help="comma-separated rationals, e.g. 3/2,0,1")
    p.add_argument("--mu", help="second weight for the linkage command")
    p.add_argument("--truncation", help="h-degree truncation K (default 12)")
    p.add_argument("--wt-bound", dest="wt_bound", help="multi-index weight bound (default 6)")
    p.add_argument("--scaling", help="non-zero rationals a_1..a_{n-1}, e.g. 2,3,-1/2")
    p.add_argument("--seed", help="RNG seed (fallback: SUPERW_SEED, then 0)")
    p.add_argument("--bound", help="linkage search bound on |c_i| (default 10)")
    p.add_argument("--spec", help="read key/value settings from FILE; flags override")
    p.add_argument("--output", help="write the JSON report to FILE")
    p.add_argument("--version", action="version", version=f"superw {__version__}")
    return p


def parse_spec(argv: Sequence[str] | None = None, env: dict | None = None) -> RunSpec:
    env = os.environ if env is None else env
    parser = _build_parser()
    try:
        ns = parser.parse_args(list(argv) if argv is not None else None)
    except SystemExit as exc:
        if exc.code == 0:
            raise
        raise ParseError("invalid command-line flags") from exc

    values: dict = {}
    if ns.spec:
        try:
            with open(ns.spec, encoding="utf-8") as fh:
                values = parse_spec_text(fh.read(), ns.spec)
        except OSError as exc:
            raise ParseError(f"--spec: cannot read {ns.spec}: {exc}") from exc
    for key in ("algebra", "command", "weight", "mu", "truncation", "scaling", "seed", "output", "bound"):
        v = getattr(ns, key)
        if v is not None:
            values[key] = (v, f"--{key}")
    if ns.wt_bound is not None:
        values["wt-bound"] = (ns.wt_bound, "--wt-bound")
    return spec_from_values(values, env)


def spec_from_values(values: dict, env: dict) -> RunSpec:
    if "command" not in values:
        raise MissingRequiredField("missing required field: command")
    command, where = values["command"]
    if command not in COMMANDS:
        raise ParseError(f"{where}: unknown command {command!r}")
    kw: dict = {"command": command}
    if "algebra" in values:
        kw["family"], kw["params"] = parse_algebra(*values["algebra"])
    elif command == "osp12-series":
        kw["family"], kw["params"] = "osp12", ()
    else:
        raise MissingRequiredField(f"command {command!r} needs --algebra")
    for key in ("weight", "mu", "scaling"):
        if key in values:
            kw[key] = _rationals(*values[key])
    for key, attr in (("truncation", "truncation"), ("wt-bound", "wt_bound"), ("bound", "bound"), ("seed", "seed")):
        if key in values:
            kw[attr] = _int(*values[key])
    if "seed" not in kw and env.get("SUPERW_SEED"):
        kw["seed"] = _int(env["SUPERW_SEED"], "SUPERW_SEED")
    if "output" in values:
        kw["output"] = values["output"][0]
    if command in NEEDS_WEIGHT and "weight" not in kw:
        raise MissingRequiredField(f"command {command!r} needs --weight")
    if command == "linkage" and "mu" not in kw:
        raise MissingRequiredField("command 'linkage' needs --mu")
    if kw.get("truncation", 12) < 0 or kw.get("wt_bound", 6) < 0 or kw.get("bound", 10) < 0:
        raise ParseError("truncation, wt-bound and bound must be non-negative")
    return RunSpec(**kw)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _check(name: str, status: str, witnesses=None, **extra) -> dict:
    out = {"check": name, "status": status, "witnesses": witnesses or []}
    out.update(extra)
    return out


def _as_entry(c: dict) -> dict:
    """Module reports key on ``check``; report entries key on ``name``."""
    out = {"name": c["check"]}
    out.update((k, v) for k, v in c.items() if k != "check")
    return out


def _status_of(witnesses: list) -> str:
    return "fail" if witnesses else "pass"


def _from_report(r) -> dict:
    return _check(r.check, r.status, r.witnesses)


def _cmd_jacobi(spec: RunSpec, A):
    checks = [c.to_json() for c in (
        check_jacobi(A),
        check_anticommutativity(A),
        check_matrix_consistency(A),
        check_form_invariance(A),
    )]
    return checks, {"dim": A.dim, "labels": list(A.labels), "form": default_form(A)}


def _cmd_grading(spec: RunSpec, A):
    from superw.grading import build_m_and_zeta, chi_form_matrix, is_nonsingular
    from superw.linalg import rank

    nil = build_m_and_zeta(A)
    chi = chi_form_matrix(nil)
    g1 = len(chi)
    nondeg = g1 == 0 or rank(chi, g1) == g1
    t = nil.triple
    sl2_bad = [
        {"indices": [a, b], "expected": A.format(want), "computed": A.format(got)}
        for a, b, got, want in (
            ("h", "e", bracket(A, t.h, t.e), {i: 2 * c for i, c in t.e.items()}),
            ("h", "f", bracket(A, t.h, t.f), {i: -2 * c for i, c in t.f.items()}),
            ("e", "f", bracket(A, t.e, t.f), t.h),
        )
        if got != want
    ]
    char_bad = [
        {"indices": [A.labels[x], A.labels[y]], "expected": "0/1", "computed": fmt(nil.zeta(A.bracket_basis(x, y)))}
        for k, x in enumerate(nil.m_basis)
        for y in nil.m_basis[k:]
        if nil.zeta(A.bracket_basis(x, y))
    ]
    checks = [
        _check("sl2-relations", _status_of(sl2_bad), sl2_bad),
        _check("character-property", _status_of(char_bad), char_bad),
        _check("nonsingular", "pass" if is_nonsingular(A, nil.zeta) else "fail"),
        _check("chi-form-nondegenerate", "pass" if nondeg else "fail"),
    ]
    payload = {
        "triple": {k: A.format(getattr(nil.triple, k)) for k in ("e", "h", "f")},
        "degrees": {A.labels[i]: d for i, d in enumerate(nil.grading.degree)},
        "m": [A.labels[i] for i in nil.m_basis],
        "lagrangian": [A.labels[i] for i in nil.lagrangian],
        "zeta": {A.labels[i]: fmt(nil.zeta.values[i]) for i in nil.m_basis},
        "zeta_raw": {A.labels[i]: fmt(nil.raw_values[i]) for i in nil.m_basis},
    }
    return checks, payload


def _cmd_whittaker(spec: RunSpec, A):
    from superw.grading import build_m_and_zeta
    from superw.whittaker import TypeIModule, casimir_scalar, gl12_c, typicality_osp22, whittaker_vectors

    module = TypeIModule(A, spec.weight)
    nil = build_m_and_zeta(A)
    even = whittaker_vectors(module, nil, even_only=True, K=spec.truncation)
    full = whittaker_vectors(module, nil, even_only=False, K=spec.truncation)
    checks = [dict(c, check=f"even-{c['check']}") for c in even.checks]
    checks += [dict(c, check=f"full-{c['check']}") for c in full.checks]
    payload = {"even": even.to_json(), "full": full.to_json(), "gamma": fmt(module.core.gamma)}
    if A.family == "gl":
        payload["c"] = fmt(gl12_c(spec.weight))
    if A.family == "osp22":
        payload["typical"] = typicality_osp22(spec.weight)
        payload["casimir"] = fmt(casimir_scalar(spec.weight))
    return checks, payload


def _cmd_series(spec: RunSpec, A):
    from superw.whittaker import osp12_whittaker_series

    if A.family != "osp12":
        raise AlgebraError("osp12-series runs on osp12 only")
    if len(spec.weight) != 1:
        raise ParseError("--weight: osp12-series takes the single value lambda(h)")
    res = osp12_whittaker_series(spec.weight[0], spec.truncation)
    checks = [dict(c) for c in res.checks]
    return checks, {"lambda_h": fmt(spec.weight[0]), "coefficients": [fmt(c) for c in res.coefficients]}


def _pq_setup(spec: RunSpec, A, max_n: int):
    from superw.grading import build_m_and_zeta
    from superw.skryabin import pn_datum, qn_datum

    if A.family not in ("p", "q"):
        raise AlgebraError(f"{spec.command} runs on p(n) or q(n), not {A.name}")
    n = A.params[0]
    if n > max_n:
        raise AlgebraError(f"{spec.command} is capped at n <= {max_n}")
    nil = build_m_and_zeta(A)
    datum = (qn_datum if A.family == "q" else pn_datum)(n, A, nil)
    return nil, datum


def _cmd_conditions(spec: RunSpec, A):
    from superw.skryabin import check_conditions, datum_to_json

    nil, datum = _pq_setup(spec, A, TABLE_MAX_N)
    return [_from_report(r) for r in check_conditions(A, nil, datum)], {"datum": datum_to_json(A, datum)}


def _cmd_conclusions(spec: RunSpec, A):
    from superw.skryabin import verify_conclusions

    nil, datum = _pq_setup(spec, A, CONCLUSION_MAX_N)
    reports = verify_conclusions(A, nil, datum, spec.wt_bound)
    return [_from_report(r) for r in reports], {"wt_bound": spec.wt_bound, **reports[0].payload, **reports[1].payload}


def _cmd_freeness(spec: RunSpec, A):
    from superw.skryabin import check_freeness

    nil, datum = _pq_setup(spec, A, CONCLUSION_MAX_N)
    r = check_freeness(A, nil, datum, spec.wt_bound)
    return [_from_report(r)], {"wt_bound": spec.wt_bound, **r.payload}


def _cmd_tables(spec: RunSpec, A):
    from superw.skryabin import check_pn_zeta_tables

    if A.family != "p":
        raise AlgebraError("pn-tables runs on p(n) only")
    if A.params[0] > TABLE_MAX_N:
        raise AlgebraError(f"pn-tables is capped at n <= {TABLE_MAX_N}")
    reports = check_pn_zeta_tables(A.params[0])
    return [_from_report(r) for r in reports], {r.check: r.payload for r in reports}


def _cmd_automorphism(spec: RunSpec, A):
    from superw.automorphisms import (
        build_phi,
        is_automorphism,
        normalizing_sequence,
        random_scalings,
        scaling_coeffs,
        simple_values,
        transport_character,
    )
    from superw.grading import build_m_and_zeta

    if A.family not in ("p", "q"):
        raise AlgebraError(f"automorphism runs on p(n) or q(n), not {A.name}")
    n = A.params[0]
    seq = scaling_coeffs(spec.scaling) if spec.scaling is not None else random_scalings(n, 1, spec.seed)[0]
    phi = build_phi(A, seq, "uniform")
    literal = build_phi(A, seq, "as-written")
    main = is_automorphism(A, phi)
    alt = is_automorphism(A, literal)
    inverse = phi.compose(build_phi(A, seq.inverse()))
    nil = build_m_and_zeta(A)
    moved = transport_character(A, phi, nil)
    back = transport_character(A, build_phi(A, normalizing_sequence(A, moved)), nil, moved)
    normalized = all(v in (0, 1) for v in simple_values(A, back))
    checks = [
        _from_report(main),
        _check("bracket-preservation-as-written", "pass" if alt.passed else "warn", alt.witnesses),
        _check("inverse-composition", "pass" if all(c == 1 for c in inverse.scale) else "fail"),
        _check("transport-normalizes", "pass" if normalized else "fail"),
    ]
    payload = {
        "scaling": [fmt(x) for x in seq.a],
        "phi": {A.labels[i]: fmt(c) for i, c in enumerate(phi.scale)},
        "transported_simple_values": [fmt(x) for x in simple_values(A, moved)],
        "normalized_simple_values": [fmt(x) for x in simple_values(A, back)],
    }
    return checks, payload


def _cmd_linkage(spec: RunSpec, A):
    from superw.grading import linkage_gl

    if A.family != "gl":
        raise AlgebraError("linkage runs on gl(m|n) only")
    m, n = A.params
    fwd = linkage_gl(m, n, spec.weight, spec.mu, spec.bound)
    bwd = linkage_gl(m, n, spec.mu, spec.weight, spec.bound)
    checks = [_check("symmetry", "pass" if (fwd is None) == (bwd is None) else "fail")]
    payload = {
        "linked": fwd is not None,
        "bound": spec.bound,
        "witness": fwd.to_json() if fwd else None,
        "reverse_witness": bwd.to_json() if bwd else None,
    }
    return checks, payload


_DISPATCH = {
    "jacobi": _cmd_jacobi,
    "grading": _cmd_grading,
    "whittaker-vectors": _cmd_whittaker,
    "osp12-series": _cmd_series,
    "skryabin-conditions": _cmd_conditions,
    "skryabin-conclusions": _cmd_conclusions,
    "freeness": _cmd_freeness,
    "pn-tables": _cmd_tables,
    "automorphism": _cmd_automorphism,
    "linkage": _cmd_linkage,
}


def _meta(spec: RunSpec) -> dict:
    return {"command": spec.command, "algebra": spec.algebra_text, "version": __version__, "seed": spec.seed}


def run(spec: RunSpec) -> tuple[dict, int]:
    """Execute ``spec``; returns the report and the exit code."""
    try:
        A = build_algebra(spec.family, spec.params)
        if spec.weight is not None and spec.command != "osp12-series" and len(spec.weight) != len(A.cartan):
            raise ParseError(f"--weight: {A.name} weights have {len(A.cartan)} coordinates")
        checks, payload = _DISPATCH[spec.command](spec, A)
    except (AlgebraError, ValueError, KeyError) as exc:
        report = {"meta": _meta(spec), "status": "error", "error": {"type": type(exc).__name__, "message": str(exc)}}
        return report, 2
    checks = [_as_entry(c) for c in checks]
    statuses = [c["status"] for c in checks]
    status = "fail" if "fail" in statuses else "warn" if "warn" in statuses else "pass"
    report = {"meta": _meta(spec), "status": status, "checks": checks, "payload": payload}
    return report, 1 if status == "fail" else 0


def render(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    try:
        spec = parse_spec(argv)
    except ParseError as exc:
        print(f"superw: {exc}", file=sys.stderr)
        sys.stdout.write(render({"status": "error", "error": {"type": type(exc).__name__, "message": str(exc)}}))
        return 2
    report, code = run(spec)
    text = render(report)
    if spec.output:
        with open(spec.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    n_checks = len(report.get("checks", []))
    print(f"superw {spec.command} {spec.algebra_text}: {report['status']} ({n_checks} checks)", file=sys.stderr)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
