"""Command-line front end.

Usage::

    supercurves <command> --input job.yaml [--output out.yaml] [--format text|structured]

A job is a YAML document with keys ``algebra`` (``{odd: [...], even: [...]}``),
optionally ``command`` (must agree with the command line) and ``payload``.
Elements are strings in the shared grammar, e.g. ``"1 + 2/3 t eps del"``.
The structured output is YAML with sorted keys; it echoes the job with every
element in canonical form and adds a ``result`` section.

Exit codes: 0 success, 1 domain error (or a failed identity check),
2 parse error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Any

import yaml

from .grassmann import AlgebraSignature, GrassmannError, ParseError, format_element, parse_element
from .identities import CHECKS, run_checks
from .superelliptic import (
    SPACES,
    EllipticMultiplier,
    EllipticOneForm,
    SuperEllipticCurve,
    admits_flat_connection,
    classify_curve,
    direct_image_projected,
    dual_curve,
    h0_structure,
    h1_structure,
    is_delta_trivial,
    is_trivial_bundle,
    lift_to_delta,
    same_delta_class,
    transform_constant_multiplier,
    transform_pullback_case,
    transform_trivial_with_connection,
)

__all__ = ["COMMANDS", "JobDescription", "JobError", "main", "parse_job", "render", "run_job"]

COMMANDS = ("dual-curve", "classify", "cohomology", "transform-bundle", "direct-image",
            "lift-delta", "check-identities")
CURVE_COMMANDS = set(COMMANDS) - {"check-identities"}
TRANSFORM_CASES = ("trivial", "pullback", "constant")
_CURVE_KEYS = {"tau", "epsilon", "delta"}
PAYLOAD_KEYS = {
    "dual-curve": _CURVE_KEYS,
    "classify": _CURVE_KEYS,
    "cohomology": _CURVE_KEYS | {"space", "degree"},
    "transform-bundle": _CURVE_KEYS | {"case", "one_form", "multiplier"},
    "direct-image": _CURVE_KEYS | {"one_form"},
    "lift-delta": _CURVE_KEYS | {"multipliers"},
    "check-identities": {"seed", "checks"},
}


class JobError(Exception):
    """A parse or validation error, located by a dotted path into the job."""

    exit_code = 2

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class DomainError(Exception):
    exit_code = 1


@dataclass
class JobDescription:
    algebra: AlgebraSignature
    command: str
    payload: dict[str, Any]                       # canonical echo of the input payload
    objects: dict[str, Any] = field(default_factory=dict)


# --------------------------------------------------------------------------
# parsing


def _element(sig: AlgebraSignature, value, path: str):
    if value is None or isinstance(value, bool) or not isinstance(value, (str, int)):
        raise JobError(path, f"expected an element string, got {value!r}")
    try:
        return parse_element(str(value), sig)
    except ParseError as exc:
        raise JobError(path, str(exc)) from None


def _mapping(value, path: str) -> dict:
    if value is None:
        return {}
    if not isinstance(value, dict):
        raise JobError(path, f"expected a mapping, got {type(value).__name__}")
    return value


def _names(value, path: str) -> tuple[str, ...]:
    if value is None:
        return ()
    if isinstance(value, str) or not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise JobError(path, "expected a list of generator names")
    return tuple(value)


def _algebra(doc: dict) -> AlgebraSignature:
    alg = _mapping(doc.get("algebra"), "algebra")
    unknown = set(alg) - {"odd", "even"}
    if unknown:
        raise JobError("algebra", f"unknown keys {sorted(unknown)}")
    try:
        return AlgebraSignature(_names(alg.get("odd"), "algebra.odd"), _names(alg.get("even"), "algebra.even"))
    except GrassmannError as exc:
        raise JobError("algebra", str(exc)) from None


def _curve(sig: AlgebraSignature, payload: dict, echo: dict) -> SuperEllipticCurve:
    default_tau = "t" if "t" in sig.even else "0"
    params = {}
    for key, default in (("tau", default_tau), ("epsilon", None), ("delta", None)):
        if key not in payload and default is None:
            raise JobError(f"payload.{key}", "missing curve parameter")
        params[key] = _element(sig, payload.get(key, default), f"payload.{key}")
        echo[key] = format_element(params[key])
    try:
        return SuperEllipticCurve(**params)
    except GrassmannError as exc:
        raise JobError("payload", str(exc)) from None


def _one_form(sig: AlgebraSignature, payload: dict, echo: dict) -> EllipticOneForm:
    form = _mapping(payload.get("one_form"), "payload.one_form")
    parts = {k: _element(sig, form.get(k, "0"), f"payload.one_form.{k}") for k in ("A", "B")}
    echo["one_form"] = {k: format_element(v) for k, v in parts.items()}
    try:
        return EllipticOneForm(parts["A"], parts["B"])
    except GrassmannError as exc:
        raise JobError("payload.one_form", str(exc)) from None


def _multiplier(sig: AlgebraSignature, data, path: str) -> tuple[EllipticMultiplier, dict]:
    data = _mapping(data, path)
    unknown = set(data) - {"A", "alpha", "dual_rho_term", "lattice", "space"}
    if unknown:
        raise JobError(path, f"unknown keys {sorted(unknown)}")
    parts = {k: _element(sig, data.get(k, "0"), f"{path}.{k}") for k in ("A", "alpha", "dual_rho_term")}
    lattice = data.get("lattice", [0, 0])
    if (not isinstance(lattice, list) or len(lattice) != 2
            or not all(isinstance(n, int) and not isinstance(n, bool) for n in lattice)):
        raise JobError(f"{path}.lattice", "expected two integers [m, n]")
    on = data.get("space", "X")
    try:
        m = EllipticMultiplier(parts["A"], parts["alpha"], parts["dual_rho_term"], tuple(lattice), str(on))
    except GrassmannError as exc:
        raise JobError(path, str(exc)) from None
    echo = {k: format_element(v) for k, v in parts.items()}
    echo.update(lattice=list(lattice), space=str(on))
    return m, echo


def parse_job(text: str, command: str | None = None) -> JobDescription:
    """Parse and validate a YAML job; ``command`` overrides/must match the document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise JobError("", f"not valid YAML: {exc}") from None
    doc = _mapping(doc, "document")
    unknown = set(doc) - {"algebra", "command", "payload"}
    if unknown:
        raise JobError("document", f"unknown top-level keys {sorted(unknown)}")
    declared = doc.get("command")
    if command is None:
        command = declared
    elif declared is not None and declared != command:
        raise JobError("command", f"document says {declared!r} but {command!r} was requested")
    if command not in COMMANDS:
        raise JobError("command", f"unknown command {command!r}; expected one of {list(COMMANDS)}")
    sig = _algebra(doc)
    payload = _mapping(doc.get("payload"), "payload")
    unknown = set(payload) - PAYLOAD_KEYS[command]
    if unknown:
        raise JobError("payload", f"unknown keys {sorted(unknown)} for {command}")
    echo: dict[str, Any] = {}
    objects: dict[str, Any] = {}

    if command in CURVE_COMMANDS:
        objects["curve"] = _curve(sig, payload, echo)

    if command == "cohomology":
        space = payload.get("space", "all")
        if space != "all" and space not in SPACES:
            raise JobError("payload.space", f"expected one of {list(SPACES)} or 'all'")
        degree = payload.get("degree")
        if degree is not None and (not isinstance(degree, int) or isinstance(degree, bool) or degree < 0):
            raise JobError("payload.degree", "expected a non-negative integer")
        objects.update(space=space, degree=degree)
        echo["space"] = space
        if degree is not None:
            echo["degree"] = degree

    elif command in ("transform-bundle", "direct-image"):
        case = payload.get("case", "trivial") if command == "transform-bundle" else "trivial"
        if case not in TRANSFORM_CASES:
            raise JobError("payload.case", f"expected one of {list(TRANSFORM_CASES)}")
        objects["case"] = case
        if command == "transform-bundle":
            echo["case"] = case
        if case == "constant":
            objects["multiplier"], echo["multiplier"] = _multiplier(sig, payload.get("multiplier"),
                                                                    "payload.multiplier")
        else:
            objects["one_form"] = _one_form(sig, payload, echo)

    elif command == "lift-delta":
        items = payload.get("multipliers")
        if not isinstance(items, list) or not items:
            raise JobError("payload.multipliers", "expected a non-empty list of multipliers")
        parsed = [_multiplier(sig, m, f"payload.multipliers[{i}]") for i, m in enumerate(items)]
        objects["multipliers"] = [m for m, _ in parsed]
        echo["multipliers"] = [e for _, e in parsed]

    elif command == "check-identities":
        seed = payload.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise JobError("payload.seed", "expected an integer")
        checks = list(_names(payload.get("checks"), "payload.checks"))
        bad = [c for c in checks if c not in CHECKS]
        if bad:
            raise JobError("payload.checks", f"unknown checks {bad}; available: {list(CHECKS)}")
        objects.update(seed=seed, checks=checks)
        echo["seed"] = seed
        if checks:
            echo["checks"] = checks

    return JobDescription(sig, command, echo, objects)


# --------------------------------------------------------------------------
# running


def _curve_doc(c: SuperEllipticCurve) -> dict:
    return {"tau": format_element(c.tau), "epsilon": format_element(c.epsilon),
            "delta": format_element(c.delta)}


def _run_cohomology(job: JobDescription) -> dict:
    curve = job.objects["curve"]
    spaces = SPACES if job.objects["space"] == "all" else (job.objects["space"],)
    deg = job.objects["degree"]
    return {s: {"H0": h0_structure(s, curve, deg).describe(), "H1": h1_structure(s, curve, deg).describe()}
            for s in spaces}


def _run_transform(job: JobDescription) -> dict:
    curve = job.objects["curve"]
    case = job.objects["case"]
    if case == "constant":
        m = transform_constant_multiplier(job.objects["multiplier"], curve)
    elif case == "pullback":
        m = transform_pullback_case(job.objects["one_form"], curve)
    else:
        m = transform_trivial_with_connection(job.objects["one_form"], curve)
    return {"multiplier": m.describe(), "trivial": is_trivial_bundle(m, curve),
            "admits_flat_connection": admits_flat_connection(m, curve)}


def _run_lift(job: JobDescription) -> dict:
    curve = job.objects["curve"]
    ms = job.objects["multipliers"]
    lifts = []
    for m in ms:
        slots = lift_to_delta(m, curve)
        lifts.append({"slots": dict(zip(("A", "alpha", "beta", "B"), map(format_element, slots))),
                      "trivial": is_delta_trivial(m, curve)})
    same = [[same_delta_class(a, b, curve) for b in ms] for a in ms]
    return {"lifts": lifts, "same_class": same}


def run_job(job: JobDescription) -> tuple[dict, int]:
    """Execute a job; returns the result document and the exit status."""
    status = 0
    try:
        if job.command == "dual-curve":
            d = dual_curve(job.objects["curve"])
            result = dict(_curve_doc(d), involutive=dual_curve(d) == job.objects["curve"])
        elif job.command == "classify":
            result = classify_curve(job.objects["curve"])
        elif job.command == "cohomology":
            result = _run_cohomology(job)
        elif job.command == "transform-bundle":
            result = _run_transform(job)
        elif job.command == "direct-image":
            curve = job.objects["curve"]
            m = direct_image_projected(job.objects["one_form"], curve)
            result = {"multiplier": m.describe(), "trivial": is_trivial_bundle(m, curve)}
        elif job.command == "lift-delta":
            result = _run_lift(job)
        else:
            rows = run_checks(job.objects["seed"], job.objects["checks"])
            result = {"checks": [{"name": n, "passed": ok, "detail": d} for n, ok, d in rows],
                      "all_passed": all(ok for _, ok, _ in rows)}
            status = 0 if result["all_passed"] else 1
    except GrassmannError as exc:
        raise DomainError(f"{job.command}: {exc}") from None
    doc = {
        "command": job.command,
        "algebra": {"odd": list(job.algebra.odd), "even": list(job.algebra.even)},
        "payload": job.payload,
        "result": result,
    }
    return doc, status


# --------------------------------------------------------------------------
# rendering


def _render_text(value, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k in sorted(value):
            v = value[k]
            if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}{k}: [" + ", ".join(_scalar(x) for x in v) + "]")
            elif isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        if all(not isinstance(v, (dict, list)) for v in value):
            lines.append(pad + "[" + ", ".join(_scalar(v) for v in value) + "]")
        else:
            for v in value:
                if isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v):
                    lines.append(pad + "- [" + ", ".join(_scalar(x) for x in v) + "]")
                else:
                    lines.append(f"{pad}-")
                    lines.extend(_render_text(v, indent + 1))
    else:
        lines.append(pad + _scalar(value))
    return lines


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if v == [] or v == {}:
        return "(none)"
    return str(v)


def _render_checks(doc: dict) -> list[str]:
    rows = doc["result"]["checks"]
    width = max(len(r["name"]) for r in rows)
    out = [f"{'check'.ljust(width)}  result  detail"]
    for r in rows:
        out.append(f"{r['name'].ljust(width)}  {'PASS' if r['passed'] else 'FAIL':6}  {r['detail']}")
    out.append(f"all passed: {_scalar(doc['result']['all_passed'])}")
    return out


def render(doc: dict, fmt: str = "structured") -> str:
    if fmt == "structured":
        return yaml.safe_dump(doc, sort_keys=True, default_flow_style=False, allow_unicode=True)
    if doc.get("command") == "check-identities":
        return "\n".join(_render_checks(doc)) + "\n"
    return "\n".join(_render_text(doc)) + "\n"


def parse_result(text: str) -> dict:
    """Inverse of ``render(doc, "structured")``."""
    return yaml.safe_load(text)


# --------------------------------------------------------------------------
# entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="supercurves", description="Duality computations for (1|1) supercurves.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i", help="job file (YAML); '-' reads stdin")
    p.add_argument("--output", "-o", help="write the result here instead of stdout")
    p.add_argument("--format", "-f", choices=("text", "structured"), default="text")
    p.add_argument("--space", choices=SPACES + ("all",), help="cohomology: override payload.space")
    return p


def _read_input(args) -> str:
    if args.input is None:
        if args.command == "check-identities":
            return "algebra: {}\n"
        raise JobError("--input", f"{args.command} needs a job file")
    if args.input == "-":
        return sys.stdin.read()
    try:
        with open(args.input, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise JobError("--input", str(exc)) from None


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        job = parse_job(_read_input(args), args.command)
        if args.space is not None:
            if args.command != "cohomology":
                raise JobError("--space", "only valid for cohomology")
            job.objects["space"] = args.space
            job.payload["space"] = args.space
        doc, status = run_job(job)
    except (JobError, DomainError) as exc:
        kind = "parse error" if isinstance(exc, JobError) else "error"
        print(f"supercurves: {kind}: {exc}", file=sys.stderr)
        return exc.exit_code
    out = render(doc, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
