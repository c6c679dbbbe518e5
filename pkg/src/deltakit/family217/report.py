"""Running a scenario end to end and serializing the result."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..exactnum import rat_str
from ..intersection import IntersectionError
from ..invariants import (
    FlagScenario,
    IncompleteProfiles,
    PointProfile,
    Verdict,
    certify_center,
    double_term,
    f_o_term,
    first_term,
    quadratic_term,
    s_divisor,
)
from ..sweep import ChamberedDecomposition, sweep_threefold
from ..zariski import check_zariski, decompose_surface, decompose_threefold_rank2
from .schema import Scenario


class ScenarioRunError(RuntimeError):
    """A computation failed; the message starts with the scenario name."""

    def __init__(self, scenario: str, cause: BaseException):
        self.scenario = scenario
        self.cause = cause
        super().__init__(f"{scenario}: {type(cause).__name__}: {cause}")


@dataclass(frozen=True)
class ProfileResult:
    name: str
    local_mults: dict
    f_o: Fraction
    s_o: Fraction


@dataclass(frozen=True)
class Check:
    key: str
    expected: str
    computed: Fraction | None
    ok: bool


@dataclass(frozen=True)
class Report:
    scenario: str
    tau: Fraction
    s_divisor: Fraction
    flag_kind: str
    first_term: Fraction | None = None
    double_term: Fraction | None = None
    flag_value: Fraction | None = None
    quadratic_term: Fraction | None = None
    profiles: tuple[ProfileResult, ...] = ()
    verdict: Verdict | None = None
    checks: tuple[Check, ...] = ()
    chambers: dict | None = None
    assumptions: tuple[str, ...] = ()

    @property
    def mismatches(self) -> list[Check]:
        return [c for c in self.checks if not c.ok]

    @property
    def certified(self) -> bool:
        return bool(self.verdict and self.verdict.certified)

    def values(self) -> dict[str, Fraction]:
        """Every computed value under the names used by ``expected``."""
        out = {"tau": self.tau, "S_X": self.s_divisor}
        if self.flag_kind == "curve":
            out.update({"first_term": self.first_term, "double_term": self.double_term, "S(W;C)": self.flag_value})
        elif self.flag_kind == "point":
            out.update(
                {
                    "first_term": self.first_term,
                    "double_term": self.double_term,
                    "S(W;F)": self.flag_value,
                    "quadratic_term": self.quadratic_term,
                }
            )
            for p in self.profiles:
                out[f"F_O[{p.name}]"] = p.f_o
                out[f"S(W;O)[{p.name}]"] = p.s_o
        return out

    def recheck_verdict(self) -> bool:
        """Recompute the verdict from the reported values alone."""
        ok = self.s_divisor < 1
        if self.flag_kind == "curve":
            ok = ok and self.flag_value < 1
        elif self.flag_kind == "point":
            ok = ok and self.flag_value < 2 and bool(self.profiles) and all(p.s_o < 1 for p in self.profiles)
        return ok


def threefold_sweep(s: Scenario) -> ChamberedDecomposition:
    alg = s.algebra
    return sweep_threefold(alg, alg.expand_relation(s.ray[0]), alg.expand_relation(s.ray[1]), s.tau_hint)


def flag_scenario(s: Scenario, cd: ChamberedDecomposition | None = None) -> FlagScenario:
    if s.flag_kind == "none":
        raise ValueError(f"{s.name} has no flag")
    return FlagScenario(
        threefold=cd if cd is not None else threefold_sweep(s),
        restriction=s.restriction_map,
        curves=s.curve_records,
        kind=s.flag_kind,
        flag_curve=s.flag_curve,
        ord_bounds=dict(s.ord_bounds),
        negative_restrictions=dict(s.negative_restrictions),
        blowup_candidates=s.blowup_candidates,
        minus_k_cubed=s.minus_k_cubed,
    )


def _chamber_rows(cd: ChamberedDecomposition) -> list[dict]:
    return [
        {
            "lo": rat_str(c.lo),
            "hi": rat_str(c.hi),
            "vol": [rat_str(x) for x in c.vol.coeffs],
            "negative": {k: [rat_str(x) for x in p.coeffs] for k, p in sorted(c.negative.items())},
        }
        for c in cd.chambers
    ]


def chamber_tables(cd: ChamberedDecomposition, fs: FlagScenario | None) -> dict:
    out: dict[str, Any] = {"threefold": _chamber_rows(cd)}
    if fs is not None:
        walls = fs.nested.outer_walls()
        out["outer_walls"] = [rat_str(w) for w in walls]
        out["inner"] = [
            {"u": rat_str((a + b) / 2), "chambers": _chamber_rows(fs.nested.at((a + b) / 2))}
            for a, b in zip(walls, walls[1:])
        ]
    return out


def run_report(s: Scenario, emit_chambers: bool = False, fs: FlagScenario | None = None) -> Report:
    """Compute everything a scenario asks for and compare with its expectations."""
    try:
        cd = fs.threefold if fs is not None else threefold_sweep(s)
        sx = s_divisor(cd, s.minus_k_cubed)
        fields: dict[str, Any] = {}
        if s.flag_kind == "none":
            verdict = certify_center(sx)
        else:
            fs = fs or flag_scenario(s, cd)
            fields["first_term"] = first_term(fs)
            fields["double_term"] = double_term(fs)
            fields["flag_value"] = fields["first_term"] + fields["double_term"]
            if s.flag_kind == "curve":
                verdict = certify_center(sx, curve_value=fields["flag_value"])
            else:
                profiles = s.profile_list()
                if not profiles:
                    raise IncompleteProfiles("point flag needs at least one point profile")
                quad = quadratic_term(fs)
                results = []
                for p in profiles:
                    fo = f_o_term(fs, PointProfile(p.name, dict(p.local_mults)))
                    results.append(ProfileResult(p.name, dict(p.local_mults), fo, quad + fo))
                fields["quadratic_term"] = quad
                fields["profiles"] = tuple(results)
                verdict = certify_center(
                    sx, f_value=fields["flag_value"], point_values={r.name: r.s_o for r in results}
                )
        report = Report(
            scenario=s.name,
            tau=cd.tau,
            s_divisor=sx,
            flag_kind=s.flag_kind,
            verdict=verdict,
            chambers=chamber_tables(cd, fs) if emit_chambers else None,
            assumptions=s.assumptions,
            **fields,
        )
    except (ArithmeticError, IntersectionError, IncompleteProfiles, ValueError) as exc:
        raise ScenarioRunError(s.name, exc) from exc
    values = report.values()
    checks = []
    for key, exp in s.expected.items():
        got = values.get(key)
        checks.append(Check(key, str(exp), got, got is not None and exp.holds(got)))
    return Report(**{**report.__dict__, "checks": tuple(checks)})


# --- serialization --------------------------------------------------------------


def _r(x):
    return None if x is None else rat_str(x)


def report_to_dict(r: Report) -> dict:
    out: dict[str, Any] = {
        "scenario": r.scenario,
        "tau": _r(r.tau),
        "S_X": _r(r.s_divisor),
        "flag": r.flag_kind,
    }
    if r.flag_kind != "none":
        out["first_term"] = _r(r.first_term)
        out["double_term"] = _r(r.double_term)
        out["S(W;C)" if r.flag_kind == "curve" else "S(W;F)"] = _r(r.flag_value)
    if r.flag_kind == "point":
        out["quadratic_term"] = _r(r.quadratic_term)
        out["profiles"] = [
            {"name": p.name, "local_mults": dict(sorted(p.local_mults.items())), "F_O": _r(p.f_o), "S(W;O)": _r(p.s_o)}
            for p in r.profiles
        ]
    out["verdict"] = {
        "certified": r.certified,
        "thresholds": dict(r.verdict.thresholds) if r.verdict else {},
    }
    out["checks"] = [
        {"key": c.key, "expected": c.expected, "computed": _r(c.computed), "ok": c.ok} for c in r.checks
    ]
    out["discrepancies"] = [
        f"{c.key}: expected {c.expected}, computed {_r(c.computed)}" for c in r.mismatches
    ]
    if r.assumptions:
        out["assumptions"] = list(r.assumptions)
    if r.chambers is not None:
        out["chambers"] = r.chambers
    return out


def report_to_json(r: Report) -> str:
    return json.dumps(report_to_dict(r), indent=2) + "\n"


def report_to_text(r: Report) -> str:
    lines = [f"scenario  {r.scenario}", f"tau       {rat_str(r.tau)}", f"S_X       {rat_str(r.s_divisor)}"]
    if r.flag_kind != "none":
        label = "S(W;C)" if r.flag_kind == "curve" else "S(W;F)"
        lines.append(f"{label:<9} {rat_str(r.flag_value)}  (first {rat_str(r.first_term)}, double {rat_str(r.double_term)})")
    if r.flag_kind == "point":
        lines.append(f"quadratic {rat_str(r.quadratic_term)}")
        width = max(len(p.name) for p in r.profiles)
        for p in r.profiles:
            lines.append(f"  O {p.name:<{width}}  F_O {rat_str(p.f_o):>10}  S(W;O) {rat_str(p.s_o):>10}")
    for c in r.checks:
        mark = "ok  " if c.ok else "FAIL"
        lines.append(f"  [{mark}] {c.key} expected {c.expected} computed {_r(c.computed)}")
    lines.append(f"verdict   {'certified' if r.certified else 'NOT certified'}")
    if r.chambers is not None:
        for row in r.chambers["threefold"]:
            lines.append(f"  u in [{row['lo']}, {row['hi']}]  vol {row['vol']}  N {row['negative']}")
        for block in r.chambers.get("inner", []):
            lines.append(f"  inner sweep at u = {block['u']}")
            for row in block["chambers"]:
                lines.append(f"    v in [{row['lo']}, {row['hi']}]  vol {row['vol']}  N {row['negative']}")
    return "\n".join(lines) + "\n"


# --- audits ------------------------------------------------------------------------


@dataclass
class AuditResult:
    decompositions: int = 0
    spot_checks: int = 0
    problems: list[str] = field(default_factory=list)


def _samples(lo: Fraction, hi: Fraction, n: int) -> list[Fraction]:
    return [lo + (hi - lo) * Fraction(2 * k + 1, 2 * n) for k in range(n)]


def audit_scenario(s: Scenario, fs: FlagScenario | None = None, samples: int = 20) -> AuditResult:
    """Recheck every decomposition a scenario run produced.

    For the threefold sweep and each cached inner sweep: continuity across
    walls, Zariski postconditions at chamber midpoints, and equality of the
    chamber volume with a direct decomposition at ``samples`` points.
    """
    out = AuditResult()
    cd = fs.threefold if fs is not None else threefold_sweep(s)
    alg = s.algebra
    A, B = alg.expand_relation(s.ray[0]), alg.expand_relation(s.ray[1])
    out.problems += [f"threefold: {p}" for p in cd.continuity_defects()]
    for u in _samples(Fraction(0), cd.tau, samples):
        direct = decompose_threefold_rank2(alg, A - B * u)
        out.spot_checks += 1
        if direct.volume != cd.vol_at(u) or direct.positive != cd.positive_at(u):
            out.problems.append(f"threefold: chamber data disagrees with a direct decomposition at u={u}")
    if fs is None:
        return out
    lat, curves = fs.sweep_lattice, fs.sweep_curves
    for u, inner in sorted(fs.nested._cache.items()):
        out.problems += [f"inner u={u}: {p}" for p in inner.continuity_defects()]
        D = fs.family(u)
        for ch in inner.chambers:
            v = (ch.lo + ch.hi) / 2
            target = D - fs.flag_class * v
            res = decompose_surface(lat, target, curves)
            out.decompositions += 1
            for p in check_zariski(target, res, curves):
                out.problems.append(f"inner u={u} v={v}: {p}")
            if res.positive != ch.positive_at(lat, v):
                out.problems.append(f"inner u={u} v={v}: chamber positive part differs from direct decomposition")
    for u in _samples(Fraction(0), cd.tau, 4):
        inner = fs.nested.at(u)
        if not inner.chambers:
            continue
        D = fs.family(u)
        for v in _samples(Fraction(0), inner.tau, samples):
            res = decompose_surface(lat, D - fs.flag_class * v, curves)
            out.spot_checks += 1
            if res.volume != inner.vol_at(v):
                out.problems.append(f"inner u={u} v={v}: vol {inner.vol_at(v)} != direct {res.volume}")
    return out
