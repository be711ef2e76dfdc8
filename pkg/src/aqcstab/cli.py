"""Scenario configuration, orchestration and report emission.

Config files are line-oriented ``key=value`` text with ``#`` comments.
Command-line flags override file values.  Exit status: 0 when every
selected check passes, 1 on failed checks or inadmissible hypotheses,
2 on usage or configuration errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .aqc.limits import StabilizationPolicy, decompose_full
from .aqc.models import FnModel, Perturbation
from .aqc.verify import (
    BoundCheck, CheckId, verify_additivity, verify_bound, verify_defect,
    verify_functional_eq, verify_homogeneity, verify_increment, verify_oracle,
)
from .control import (
    ControlFn, Decision, Theorem, check_admissibility, check_uniqueness_condition,
)
from .oracle import recovery_oracle
from .padic import INF, is_prime

RESIDUAL_SLACK = 8  # digits between working precision and the residual cap
SPECIAL_SAMPLES = (1, 2, 8, -1)
SAMPLE_RANGE = 4096
INT64 = (-(1 << 63), (1 << 63) - 1)

# Report-only id: the strict (2.44) verdict next to the slack-adjusted B244.
B244_STRICT = "B244_STRICT"

# check -> theorem whose hypotheses the construction behind it needs
REQUIRES: dict[CheckId, Theorem | None] = {
    CheckId.DEFECT: None,
    CheckId.B25: Theorem.T21,
    CheckId.DQ_ZERO: Theorem.T21,
    CheckId.HOM_Q: Theorem.T21,
    CheckId.INC28: Theorem.T21,
    CheckId.B214: Theorem.T22,
    CheckId.INC29: Theorem.T22,
    CheckId.DA_ZERO: Theorem.T22,
    CheckId.HOM_A: Theorem.T22,
    CheckId.ADDITIVITY: Theorem.T22,
    CheckId.B235: Theorem.T23,
    CheckId.INC37: Theorem.T23,
    CheckId.DC_ZERO: Theorem.T23,
    CheckId.HOM_C: Theorem.T23,
    CheckId.B241: Theorem.T24,
    CheckId.B244: Theorem.T25,
    CheckId.ORACLE: Theorem.T25,
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    prime: int = 2
    k: int = 2
    precision: int = 64
    eps_w: int | float = 20  # INF ("exact") disables the perturbation
    r: int = 4
    seed: int = 1
    a1: Fraction = Fraction(3)
    a2: Fraction = Fraction(5)
    a3: Fraction = Fraction(7)
    samples: int | tuple = 256  # a count, or an explicit tuple of integers
    pairs: int = 1000
    inc_samples: int = 64
    inc_steps: int = 16
    max_iter: int = 48
    checks: tuple | None = None  # None selects every applicable check
    slack_w: int = 2
    format: str = "tsv"

    @property
    def exact(self) -> bool:
        return self.eps_w == INF

    @property
    def residual_cap_w(self) -> int:
        return self.precision - RESIDUAL_SLACK

    def control(self) -> ControlFn:
        return ControlFn(self.prime, self.eps_w, self.r)

    def selected_checks(self) -> tuple:
        if self.checks is not None:
            return tuple(self.checks)
        return tuple(c for c in CheckId if c != CheckId.ORACLE or self.exact)


# -- parsing -----------------------------------------------------------------


def _int(key, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from None


def _eps(key, text):
    if text.strip().lower() in ("exact", "inf"):
        return INF
    return _int(key, text)


def _rational(key, text):
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{key}: expected a rational, got {text!r}") from None


def _samples(key, text):
    text = text.strip()
    if "," in text:
        return tuple(_int(key, t) for t in text.split(",") if t.strip())
    return _int(key, text)


def _checks(key, text):
    out = []
    for t in text.split(","):
        t = t.strip().upper()
        if not t:
            continue
        try:
            out.append(CheckId(t))
        except ValueError:
            names = ", ".join(c.value for c in CheckId)
            raise ConfigError(f"{key}: unknown check {t!r} (known: {names})") from None
    return tuple(out)


def _format(key, text):
    text = text.strip()
    if text not in ("text", "tsv"):
        raise ConfigError(f"{key}: expected 'text' or 'tsv', got {text!r}")
    return text


_PARSERS = {
    "prime": _int, "k": _int, "precision": _int, "eps_w": _eps, "r": _int,
    "seed": _int, "a1": _rational, "a2": _rational, "a3": _rational,
    "samples": _samples, "pairs": _int, "inc_samples": _int, "inc_steps": _int,
    "max_iter": _int, "checks": _checks, "slack_w": _int, "format": _format,
}


def parse_config_text(text: str) -> dict:
    """key=value lines to typed values; unknown keys are rejected."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _PARSERS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = _PARSERS[key](key, val)
    return values


def validate(s: Scenario) -> Scenario:
    if not is_prime(s.prime):
        raise ConfigError(f"prime: {s.prime} is not a prime")
    if s.k in (0, 1, -1):
        raise ConfigError(f"k: {s.k} violates the requirement k not in {{0, +1, -1}}")
    if s.precision < 16:
        raise ConfigError(f"precision: N={s.precision} must be >= 16")
    if s.r < 0:
        raise ConfigError(f"r: {s.r} must be >= 0")
    if s.max_iter < 1:
        raise ConfigError(f"max_iter: {s.max_iter} must be >= 1")
    if s.slack_w < 0:
        raise ConfigError(f"slack_w: {s.slack_w} must be >= 0")
    for key in ("pairs", "inc_samples", "inc_steps"):
        if getattr(s, key) < 0:
            raise ConfigError(f"{key}: must be >= 0")
    if isinstance(s.samples, int):
        if s.samples < 1:
            raise ConfigError(f"samples: count {s.samples} must be >= 1")
    else:
        if not s.samples:
            raise ConfigError("samples: list must be nonempty")
        for x in s.samples:
            if not INT64[0] <= x <= INT64[1]:
                raise ConfigError(f"samples: {x} does not fit in 64 bits")
    return s


def parse_config(path: str | None = None, overrides: dict | None = None) -> Scenario:
    """Defaults, then the file at ``path``, then ``overrides``."""
    values = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                values.update(parse_config_text(fh.read()))
        except OSError as e:
            raise ConfigError(f"config: cannot read {path}: {e.strerror}") from None
    values.update(overrides or {})
    return validate(Scenario(**values))


def _fmt_value(key: str, v) -> str:
    if key == "eps_w" and v == INF:
        return "exact"
    if key == "samples" and not isinstance(v, int):
        return ",".join(str(x) for x in v) + ("," if len(v) == 1 else "")
    if key == "checks":
        return ",".join(c.value for c in v)
    return str(v)


def serialize(s: Scenario) -> str:
    """Scenario back to key=value text; re-parsing gives an equal Scenario."""
    lines = []
    for f in dataclasses.fields(s):
        v = getattr(s, f.name)
        if f.name == "checks" and v is None:
            continue
        lines.append(f"{f.name}={_fmt_value(f.name, v)}")
    return "\n".join(lines) + "\n"


# -- sampling ----------------------------------------------------------------


def sample_points(s: Scenario) -> tuple[list[int], list[tuple[int, int]]]:
    """Deterministic sample points and sample pairs for a scenario."""
    rng = random.Random(s.seed)
    if isinstance(s.samples, int):
        pts = list(SPECIAL_SAMPLES[: s.samples])
        seen = set(pts)
        while len(pts) < s.samples:
            x = rng.randint(-SAMPLE_RANGE, SAMPLE_RANGE)
            if x and x not in seen:
                seen.add(x)
                pts.append(x)
    else:
        pts = list(dict.fromkeys(s.samples))
    pts.sort()
    n = len(pts)
    idx = rng.sample(range(n * n), min(s.pairs, n * n))
    pairs = sorted((pts[i // n], pts[i % n]) for i in idx)
    return pts, pairs


# -- running -----------------------------------------------------------------


@dataclass
class Report:
    scenario: Scenario
    admissibility: dict
    uniqueness: dict
    rows: list = field(default_factory=list)
    skipped: list = field(default_factory=list)  # (check, theorem)

    @property
    def failed(self) -> list[BoundCheck]:
        return [r for r in self.rows if r.check_id != B244_STRICT and not r.ok]

    @property
    def exit_status(self) -> int:
        return 1 if self.failed or self.skipped else 0


@dataclass(frozen=True)
class _StrictRow:
    """The strict B244 verdict, reported next to the slack-adjusted one."""

    x: int
    y: None
    bound_w: object
    actual_w: object
    passed: bool
    note: str = ""
    check_id: str = B244_STRICT

    @property
    def ok(self) -> bool:
        return self.passed

    def sort_key(self):
        return (self.check_id, self.x, -INF)


def _b244_rows(row: BoundCheck):
    slack = dataclasses.replace(row, bound_w=row.slack_bound_w, passed=row.passed_slack)
    strict = _StrictRow(row.x, None, row.bound_w, row.actual_w, row.passed, row.note)
    return [slack, strict]


def run_scenario(s: Scenario, enforce_admissibility: bool = True) -> Report:
    """Build the decomposition and run every selected check.

    Checks whose construction needs an inadmissible theorem are skipped
    unless ``enforce_admissibility`` is False, in which case they run anyway
    and any stabilization failure shows up as a failed row.
    """
    validate(s)
    cf = s.control()
    adm = {t: check_admissibility(cf, s.k, t) for t in Theorem}
    uniq = {t: check_uniqueness_condition(cf, s.k, t) for t in Theorem}
    report = Report(s, adm, uniq)

    pert = None if s.exact else Perturbation(s.seed, s.eps_w, s.r)
    f = FnModel((s.a1, s.a2, s.a3), s.prime, s.k, pert, s.precision)
    d = decompose_full(f, StabilizationPolicy(max_iter=s.max_iter))
    pts, pairs = sample_points(s)
    cap = s.residual_cap_w
    inc_pts = pts[: s.inc_samples]

    rows = []
    for check in s.selected_checks():
        need = REQUIRES[check]
        if need is not None and not adm[need].holds:
            if enforce_admissibility:
                report.skipped.append((check, need))
                continue
        if check == CheckId.DEFECT:
            rows += [verify_defect(f, cf, x, y) for x, y in pairs]
        elif check in (CheckId.B25, CheckId.B214, CheckId.B235, CheckId.B241):
            rows += [verify_bound(check, f, d, cf, x) for x in pts]
        elif check == CheckId.B244:
            for x in pts:
                rows += _b244_rows(verify_bound(check, f, d, cf, x, s.slack_w))
        elif check in (CheckId.DQ_ZERO, CheckId.DA_ZERO, CheckId.DC_ZERO):
            target = {CheckId.DQ_ZERO: d.Q, CheckId.DA_ZERO: d.A, CheckId.DC_ZERO: d.C}
            rows += verify_functional_eq(target[check], pairs, cap, check)
        elif check in (CheckId.INC28, CheckId.INC29, CheckId.INC37):
            th = {CheckId.INC28: Theorem.T21, CheckId.INC29: Theorem.T22,
                  CheckId.INC37: Theorem.T23}[check]
            rows += [verify_increment(th, f, cf, x, n, d)
                     for x in inc_pts for n in range(1, s.inc_steps + 1)]
        elif check in (CheckId.HOM_Q, CheckId.HOM_A, CheckId.HOM_C):
            fn = {CheckId.HOM_Q: d.Q, CheckId.HOM_A: d.A, CheckId.HOM_C: d.C}[check]
            rows += [verify_homogeneity(check, fn, x, cap) for x in pts]
        elif check == CheckId.ADDITIVITY:
            rows += [verify_additivity(d.A, x, y, cap) for x, y in pairs]
        elif check == CheckId.ORACLE:
            expected = recovery_oracle(s.a1, s.a2, s.a3, s.k).triple()
            rows += [verify_oracle(d, expected, x, cap) for x in pts]
    rows.sort(key=lambda r: (_cid(r), r.x, -INF if r.y is None else r.y))
    report.rows = rows
    return report


def _cid(row) -> str:
    c = row.check_id
    return c.value if isinstance(c, CheckId) else c


# -- emission ----------------------------------------------------------------


def _w(v) -> str:
    if v is None:
        return "-"
    return "inf" if v == INF else str(int(v))


def _actual(row) -> str:
    if row.actual_w is None:
        return row.note or "-"
    return _w(row.actual_w)


def _decision_lines(name: str, decisions: dict[Theorem, Decision]) -> list[str]:
    out = [f"{name}:"]
    for th, dec in decisions.items():
        out.append(f"  {th.value}: {'holds' if dec.holds else 'FAILS'}")
        for c in dec.failing:
            out.append(f"    {c.describe()}")
    return out


def emit_report(r: Report, fmt: str | None = None) -> bytes:
    """Serialize a report; equal scenarios give byte-identical output."""
    fmt = fmt or r.scenario.format
    buf = io.StringIO()
    if fmt == "tsv":
        buf.write("check_id\tx\ty\tbound_w\tactual_w\tpass\n")
        for row in r.rows:
            y = "-" if row.y is None else str(row.y)
            buf.write(f"{_cid(row)}\t{row.x}\t{y}\t{_w(row.bound_w)}\t"
                      f"{_actual(row)}\t{'true' if row.ok else 'false'}\n")
        return buf.getvalue().encode()
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = ["aqcstab report", "scenario:"]
    lines += ["  " + ln for ln in serialize(r.scenario).splitlines()]
    lines += _decision_lines("admissibility", r.admissibility)
    lines += _decision_lines("uniqueness", r.uniqueness)
    for check, th in r.skipped:
        fam = ", ".join(sorted(r.admissibility[th].failing_families))
        lines.append(f"skipped {check.value}: {th.value} inadmissible (families {fam})")
    lines.append("rows:")
    for row in r.rows:
        y = "-" if row.y is None else str(row.y)
        verdict = "pass" if row.ok else "FAIL"
        lines.append(f"  {_cid(row):<12} x={row.x:<8} y={y:<8} "
                     f"bound_w={_w(row.bound_w):<6} actual_w={_actual(row):<8} {verdict}")
    failed = len(r.failed)
    lines.append(f"summary: {len(r.rows)} rows, {len(r.rows) - failed} passed, "
                 f"{failed} failed, {len(r.skipped)} checks skipped")
    lines.append(f"exit status: {r.exit_status}")
    return ("\n".join(lines) + "\n").encode()


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="aqcstab",
        description="Verify stability bounds for the mixed additive-quadratic-cubic "
                    "equation over Q_p on sampled integer points.",
    )
    ap.add_argument("--config", metavar="PATH")
    ap.add_argument("--prime")
    ap.add_argument("--k")
    ap.add_argument("--precision")
    ap.add_argument("--eps-w", dest="eps_w", help="integer, or 'exact' for no perturbation")
    ap.add_argument("--r")
    ap.add_argument("--seed")
    ap.add_argument("--a1")
    ap.add_argument("--a2")
    ap.add_argument("--a3")
    ap.add_argument("--samples", help="a count, or a comma-separated list of integers")
    ap.add_argument("--pairs")
    ap.add_argument("--max-iter", dest="max_iter")
    ap.add_argument("--slack-w", dest="slack_w")
    ap.add_argument("--checks", metavar="LIST")
    ap.add_argument("--format", choices=("text", "tsv"))
    ap.add_argument("--out", metavar="PATH")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    overrides = {}
    try:
        for key, parse in _PARSERS.items():
            val = getattr(args, key, None)
            if val is not None:
                overrides[key] = parse(key, val)
        scenario = parse_config(args.config, overrides)
    except ConfigError as e:
        print(f"aqcstab: config error: {e}", file=sys.stderr)
        return 2
    report = run_scenario(scenario)
    data = emit_report(report)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    failed = len(report.failed)
    print(f"aqcstab: {len(report.rows)} rows, {failed} failed, "
          f"{len(report.skipped)} checks skipped; exit {report.exit_status}",
          file=sys.stderr)
    return report.exit_status


if __name__ == "__main__":
    raise SystemExit(main())
