"""Scenario files: JSON with every rational written as a ``"p/q"`` string.

A scenario bundles the threefold algebra, the divisor ray, an optional
surface with its curves, the flag, point profiles and expected values.
Loading validates every cross reference and reports problems with the
dotted path of the offending field, e.g. ``surface.curves[2].class.L``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Any, Mapping

from ..exactnum import ExactNumError, rat_str, to_rat
from ..intersection import (
    CurveRecord,
    IntersectionError,
    NefWall,
    RestrictionMap,
    SurfaceLattice,
    ThreefoldAlgebra,
    blow_up_point,
    pair,
)

FLAG_KINDS = ("none", "curve", "point")
SCALAR_KEYS = (
    "tau",
    "S_X",
    "S(W;C)",
    "S(W;F)",
    "first_term",
    "double_term",
    "quadratic_term",
)
PROFILE_KEYS = ("F_O", "S(W;O)")
GENERIC = "generic"


class ScenarioError(ValueError):
    """Problem with a scenario file; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}" if path else message)


class ScenarioParseError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    pass


@dataclass(frozen=True)
class Expectation:
    """An expected value: exact (``"p/q"``) or a strict/weak upper bound."""

    value: Fraction
    relation: str = "=="

    @classmethod
    def parse(cls, text: str, path: str) -> "Expectation":
        if not isinstance(text, str):
            raise ScenarioParseError(path, "expected values must be strings")
        relation = "=="
        body = text.strip()
        for prefix in ("<=", "<"):
            if body.startswith(prefix):
                relation, body = prefix, body[len(prefix) :].strip()
                break
        value = _rat(body, path)
        if rat_str(value) != body:
            raise ScenarioValidationError(path, f"{body!r} is not in lowest terms (use {rat_str(value)!r})")
        return cls(value, relation)

    def holds(self, computed: Fraction) -> bool:
        if self.relation == "<":
            return computed < self.value
        if self.relation == "<=":
            return computed <= self.value
        return computed == self.value

    def __str__(self) -> str:
        prefix = "" if self.relation == "==" else self.relation
        return prefix + rat_str(self.value)


@dataclass(frozen=True)
class CurveSpec:
    name: str
    cls: Mapping[str, Fraction]
    negative_candidate: bool = True
    bundle_size: int = 1
    mult: int = 0


@dataclass(frozen=True)
class ProfileSpec:
    name: str
    local_mults: Mapping[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    name: str
    basis: tuple[str, ...]
    cubes: tuple[Fraction, ...]
    relations: Mapping[str, tuple[int, int]]
    walls: tuple[NefWall, ...]
    minus_k_cubed: Fraction
    ray: tuple[str, str]
    tau_hint: Fraction | None = None
    restriction: tuple[tuple[Fraction, ...], ...] | None = None
    surface_basis: tuple[str, ...] = ()
    surface_form: tuple[tuple[Fraction, ...], ...] = ()
    hodge: bool = True
    curves: tuple[CurveSpec, ...] = ()
    negative_restrictions: Mapping[str, str] = field(default_factory=dict)
    flag_kind: str = "none"
    flag_curve: str | None = None
    ord_bounds: Mapping[str, Fraction] = field(default_factory=dict)
    blowup_candidates: tuple[str, ...] | None = None
    profiles: tuple[ProfileSpec, ...] = ()
    expected: Mapping[str, Expectation] = field(default_factory=dict)
    assumptions: tuple[str, ...] = ()

    # --- domain objects (built lazily; equality ignores the caches) ---------

    @cached_property
    def algebra(self) -> ThreefoldAlgebra:
        return ThreefoldAlgebra(self.basis, self.cubes, self.relations, self.walls, self.name)

    @cached_property
    def lattice(self) -> SurfaceLattice | None:
        if not self.surface_basis:
            return None
        return SurfaceLattice(self.surface_basis, self.surface_form, hodge=self.hodge, name=self.name)

    @cached_property
    def curve_records(self) -> tuple[CurveRecord, ...]:
        lat = self.lattice
        return tuple(
            CurveRecord(c.name, lat.divisor(dict(c.cls)), c.negative_candidate, c.bundle_size, c.mult)
            for c in self.curves
        )

    @cached_property
    def restriction_map(self) -> RestrictionMap | None:
        if self.restriction is None:
            return None
        return RestrictionMap(self.algebra, self.lattice, self.restriction)

    def profile_list(self) -> tuple[ProfileSpec, ...]:
        """The declared profiles plus the generic one when it is missing."""
        if any(p.name == GENERIC for p in self.profiles) or not self.profiles:
            return self.profiles
        return self.profiles + (ProfileSpec(GENERIC, {}),)


# --- parsing helpers ----------------------------------------------------------


def _rat(value: Any, path: str) -> Fraction:
    if isinstance(value, float):
        raise ScenarioParseError(path, "floats are not allowed; write rationals as \"p/q\" strings")
    try:
        return to_rat(value)
    except (ExactNumError, TypeError) as exc:
        raise ScenarioParseError(path, str(exc)) from None


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioParseError(path, f"expected an integer, got {value!r}")
    return value


def _str(value: Any, path: str) -> str:
    if not isinstance(value, str) or not value:
        raise ScenarioParseError(path, f"expected a non-empty string, got {value!r}")
    return value


def _get(obj: Mapping, key: str, path: str, default=...):
    if not isinstance(obj, Mapping):
        raise ScenarioParseError(path, "expected an object")
    if key not in obj:
        if default is ...:
            raise ScenarioParseError(f"{path}.{key}" if path else key, "missing field")
        return default
    return obj[key]


def _list(value: Any, path: str) -> list:
    if not isinstance(value, list):
        raise ScenarioParseError(path, "expected a list")
    return value


def _matrix(value: Any, rows: int, cols: int, path: str) -> tuple[tuple[Fraction, ...], ...]:
    value = _list(value, path)
    if len(value) != rows:
        raise ScenarioValidationError(path, f"expected {rows} rows, got {len(value)}")
    out = []
    for i, row in enumerate(value):
        row = _list(row, f"{path}[{i}]")
        if len(row) != cols:
            raise ScenarioValidationError(f"{path}[{i}]", f"expected {cols} entries, got {len(row)}")
        out.append(tuple(_rat(x, f"{path}[{i}][{j}]") for j, x in enumerate(row)))
    return tuple(out)


def _check_names_unique(names: list[str], path: str):
    seen = set()
    for i, n in enumerate(names):
        if n in seen:
            raise ScenarioValidationError(f"{path}[{i}]", f"duplicate name {n!r}")
        seen.add(n)


# --- dict -> Scenario ---------------------------------------------------------


def scenario_from_dict(data: Mapping) -> Scenario:
    """Build and fully validate a scenario from parsed JSON."""
    if not isinstance(data, Mapping):
        raise ScenarioParseError("", "scenario must be a JSON object")
    name = _str(_get(data, "name", ""), "name")

    tf = _get(data, "threefold", "")
    basis = tuple(_str(b, f"threefold.basis[{i}]") for i, b in enumerate(_list(_get(tf, "basis", "threefold"), "threefold.basis")))
    if len(basis) != 2:
        raise ScenarioValidationError("threefold.basis", "the threefold algebra has exactly two generators")
    cubes_raw = _list(_get(tf, "cubes", "threefold"), "threefold.cubes")
    if len(cubes_raw) != 4:
        raise ScenarioValidationError("threefold.cubes", "need four cube constants")
    cubes = tuple(_rat(c, f"threefold.cubes[{i}]") for i, c in enumerate(cubes_raw))
    rel_raw = _get(tf, "relations", "threefold", {})
    if not isinstance(rel_raw, Mapping):
        raise ScenarioParseError("threefold.relations", "expected an object")
    relations = {}
    for k, v in rel_raw.items():
        v = _list(v, f"threefold.relations.{k}")
        if len(v) != 2:
            raise ScenarioValidationError(f"threefold.relations.{k}", "a relation has two coefficients")
        relations[k] = tuple(_int(x, f"threefold.relations.{k}[{i}]") for i, x in enumerate(v))
    known_classes = set(basis) | set(relations)
    walls = []
    for i, w in enumerate(_list(_get(tf, "walls", "threefold", []), "threefold.walls")):
        p = f"threefold.walls[{i}]"
        fn = _list(_get(w, "functional", p), f"{p}.functional")
        if len(fn) != 2:
            raise ScenarioValidationError(f"{p}.functional", "a functional has two entries")
        nef, eff = _str(_get(w, "nef", p), f"{p}.nef"), _str(_get(w, "effective", p), f"{p}.effective")
        for key, val in (("nef", nef), ("effective", eff)):
            if val not in known_classes:
                raise ScenarioValidationError(f"{p}.{key}", f"unknown class {val!r}")
        walls.append(
            NefWall(
                _str(_get(w, "curve", p), f"{p}.curve"),
                (_rat(fn[0], f"{p}.functional[0]"), _rat(fn[1], f"{p}.functional[1]")),
                nef,
                eff,
            )
        )
    mk = _rat(_get(tf, "minus_k_cubed", "threefold"), "threefold.minus_k_cubed")
    try:
        algebra = ThreefoldAlgebra(basis, cubes, relations, walls, name)
    except IntersectionError as exc:
        raise ScenarioValidationError("threefold.walls", str(exc)) from None
    if "minus_K" not in relations:
        raise ScenarioValidationError("threefold.relations", "the anticanonical class 'minus_K' must be named")
    if algebra.cube(algebra.expand_relation("minus_K")) != mk:
        raise ScenarioValidationError(
            "threefold.cubes",
            f"cube of minus_K is {algebra.cube(algebra.expand_relation('minus_K'))}, declared {mk}",
        )

    ray = _get(data, "ray", "")
    ray_names = (_str(_get(ray, "A", "ray"), "ray.A"), _str(_get(ray, "B", "ray"), "ray.B"))
    for key, val in zip("AB", ray_names):
        if val not in known_classes:
            raise ScenarioValidationError(f"ray.{key}", f"unknown class {val!r}")
    tau_raw = _get(data, "tau_hint", "", None)
    tau_hint = None if tau_raw is None else _rat(tau_raw, "tau_hint")

    surface = _get(data, "surface", "", None)
    kw: dict[str, Any] = {}
    curve_names: list[str] = []
    if surface is not None:
        sbasis = tuple(_str(b, f"surface.basis[{i}]") for i, b in enumerate(_list(_get(surface, "basis", "surface"), "surface.basis")))
        _check_names_unique(list(sbasis), "surface.basis")
        form = _matrix(_get(surface, "form", "surface"), len(sbasis), len(sbasis), "surface.form")
        hodge = _get(surface, "hodge", "surface", True)
        if not isinstance(hodge, bool):
            raise ScenarioParseError("surface.hodge", "expected a boolean")
        try:
            lattice = SurfaceLattice(sbasis, form, hodge=hodge, name=name)
        except IntersectionError as exc:
            raise ScenarioValidationError("surface.form", str(exc)) from None
        curves = []
        raw_curves = _list(_get(surface, "curves", "surface", []), "surface.curves")
        for i, c in enumerate(raw_curves):
            p = f"surface.curves[{i}]"
            cname = _str(_get(c, "name", p), f"{p}.name")
            cls_raw = _get(c, "class", p)
            if not isinstance(cls_raw, Mapping):
                raise ScenarioParseError(f"{p}.class", "expected an object mapping basis names to coefficients")
            cls = {}
            for k, v in cls_raw.items():
                if k not in sbasis:
                    raise ScenarioValidationError(f"{p}.class.{k}", f"unknown basis element {k!r}")
                cls[k] = _rat(v, f"{p}.class.{k}")
            spec = CurveSpec(
                cname,
                cls,
                bool(_get(c, "negative_candidate", p, True)),
                _int(_get(c, "bundle_size", p, 1), f"{p}.bundle_size"),
                _int(_get(c, "mult", p, 0), f"{p}.mult"),
            )
            try:
                CurveRecord(spec.name, lattice.divisor(cls), spec.negative_candidate, spec.bundle_size, spec.mult)
            except IntersectionError as exc:
                raise ScenarioValidationError(p, str(exc)) from None
            curves.append(spec)
            curve_names.append(cname)
        _check_names_unique(curve_names, "surface.curves")
        neg_raw = _get(surface, "negative_restrictions", "surface", {})
        if not isinstance(neg_raw, Mapping):
            raise ScenarioParseError("surface.negative_restrictions", "expected an object")
        for k, v in neg_raw.items():
            if k not in known_classes:
                raise ScenarioValidationError(f"surface.negative_restrictions.{k}", f"unknown threefold class {k!r}")
            if v not in curve_names:
                raise ScenarioValidationError(f"surface.negative_restrictions.{k}", f"unknown curve {v!r}")
        restriction = _matrix(
            _get(_get(data, "restriction", ""), "matrix", "restriction"), 2, len(sbasis), "restriction.matrix"
        )
        kw.update(
            restriction=restriction,
            surface_basis=sbasis,
            surface_form=form,
            hodge=hodge,
            curves=tuple(curves),
            negative_restrictions=dict(neg_raw),
        )
    elif "restriction" in data:
        raise ScenarioValidationError("restriction", "a restriction needs a surface")

    flag = _get(data, "flag", "", {"kind": "none"})
    kind = _get(flag, "kind", "flag")
    if kind not in FLAG_KINDS:
        raise ScenarioValidationError("flag.kind", f"expected one of {FLAG_KINDS}, got {kind!r}")
    if kind != "none" and surface is None:
        raise ScenarioValidationError("flag.kind", f"a {kind} flag needs a surface")
    flag_curve = _get(flag, "curve", "flag", None)
    if kind == "curve":
        if flag_curve not in curve_names:
            raise ScenarioValidationError("flag.curve", f"unknown flag curve {flag_curve!r}")
    elif flag_curve is not None:
        raise ScenarioValidationError("flag.curve", "only curve flags name a curve")
    ob_raw = _get(flag, "ord_bounds", "flag", {})
    if not isinstance(ob_raw, Mapping):
        raise ScenarioParseError("flag.ord_bounds", "expected an object")
    ord_bounds = {}
    for k, v in ob_raw.items():
        if k not in known_classes:
            raise ScenarioValidationError(f"flag.ord_bounds.{k}", f"unknown threefold class {k!r}")
        ord_bounds[k] = _rat(v, f"flag.ord_bounds.{k}")
        if ord_bounds[k] < 0:
            raise ScenarioValidationError(f"flag.ord_bounds.{k}", "bounds are nonnegative")
    bc_raw = _get(flag, "blowup_candidates", "flag", None)
    blowup_candidates = None
    if bc_raw is not None:
        if kind != "point":
            raise ScenarioValidationError("flag.blowup_candidates", "only point flags blow up")
        blowup_candidates = tuple(_str(x, f"flag.blowup_candidates[{i}]") for i, x in enumerate(_list(bc_raw, "flag.blowup_candidates")))
        for i, x in enumerate(blowup_candidates):
            if x not in curve_names:
                raise ScenarioValidationError(f"flag.blowup_candidates[{i}]", f"unknown curve {x!r}")

    profiles = []
    raw_profiles = _list(_get(data, "profiles", "", []), "profiles")
    if raw_profiles and kind != "point":
        raise ScenarioValidationError("profiles", "point profiles need a point flag")
    for i, pr in enumerate(raw_profiles):
        p = f"profiles[{i}]"
        pname = _str(_get(pr, "name", p), f"{p}.name")
        lm_raw = _get(pr, "local_mults", p, {})
        if not isinstance(lm_raw, Mapping):
            raise ScenarioParseError(f"{p}.local_mults", "expected an object")
        lm = {}
        for k, v in lm_raw.items():
            if k not in curve_names:
                raise ScenarioValidationError(f"{p}.local_mults.{k}", f"unknown curve {k!r}")
            lm[k] = _int(v, f"{p}.local_mults.{k}")
            if lm[k] < 0:
                raise ScenarioValidationError(f"{p}.local_mults.{k}", "local multiplicities are nonnegative")
        profiles.append(ProfileSpec(pname, lm))
    _check_names_unique([p.name for p in profiles], "profiles")

    exp_raw = _get(data, "expected", "", {})
    if not isinstance(exp_raw, Mapping):
        raise ScenarioParseError("expected", "expected an object")
    profile_names = {p.name for p in profiles} | ({GENERIC} if profiles else set())
    expected = {}
    for k, v in exp_raw.items():
        _check_expected_key(k, profile_names)
        expected[k] = Expectation.parse(v, f"expected.{k}")

    assumptions = tuple(str(a) for a in _list(_get(data, "assumptions", "", []), "assumptions"))

    scenario = Scenario(
        name=name,
        basis=basis,
        cubes=cubes,
        relations=relations,
        walls=tuple(walls),
        minus_k_cubed=mk,
        ray=ray_names,
        tau_hint=tau_hint,
        flag_kind=kind,
        flag_curve=flag_curve,
        ord_bounds=ord_bounds,
        blowup_candidates=blowup_candidates,
        profiles=tuple(profiles),
        expected=expected,
        assumptions=assumptions,
        **kw,
    )
    if kind == "point":
        _check_profiles_against_blowup(scenario)
    return scenario


def _check_expected_key(key: str, profile_names: set[str]):
    if key in SCALAR_KEYS:
        return
    for prefix in PROFILE_KEYS:
        if key.startswith(prefix + "[") and key.endswith("]"):
            inner = key[len(prefix) + 1 : -1]
            if inner not in profile_names:
                raise ScenarioValidationError(f"expected.{key}", f"unknown profile {inner!r}")
            return
    raise ScenarioValidationError(f"expected.{key}", "unknown expected-value key")


def _check_profiles_against_blowup(s: Scenario):
    bu = blow_up_point(
        s.lattice,
        s.curve_records,
        candidates=s.blowup_candidates
        if s.blowup_candidates is not None
        else [c.name for c in s.curve_records if c.negative_candidate],
    )
    F = bu.exceptional_class()
    for i, pr in enumerate(s.profiles):
        for k, m in pr.local_mults.items():
            limit = pair(bu.curve(k).cls, F)
            if m > limit:
                raise ScenarioValidationError(
                    f"profiles[{i}].local_mults.{k}",
                    f"local multiplicity {m} exceeds the intersection {limit} with the exceptional curve",
                )


# --- Scenario -> dict ---------------------------------------------------------


def scenario_to_dict(s: Scenario) -> dict:
    out: dict[str, Any] = {
        "name": s.name,
        "threefold": {
            "basis": list(s.basis),
            "cubes": [rat_str(c) for c in s.cubes],
            "relations": {k: list(v) for k, v in s.relations.items()},
            "walls": [
                {
                    "curve": w.curve,
                    "functional": [rat_str(to_rat(x)) for x in w.functional],
                    "nef": w.nef,
                    "effective": w.effective,
                }
                for w in s.walls
            ],
            "minus_k_cubed": rat_str(s.minus_k_cubed),
        },
        "ray": {"A": s.ray[0], "B": s.ray[1]},
    }
    if s.tau_hint is not None:
        out["tau_hint"] = rat_str(s.tau_hint)
    if s.surface_basis:
        out["restriction"] = {"matrix": [[rat_str(x) for x in row] for row in s.restriction]}
        out["surface"] = {
            "basis": list(s.surface_basis),
            "form": [[rat_str(x) for x in row] for row in s.surface_form],
            "hodge": s.hodge,
            "curves": [
                {
                    "name": c.name,
                    "class": {k: rat_str(v) for k, v in c.cls.items()},
                    "negative_candidate": c.negative_candidate,
                    "bundle_size": c.bundle_size,
                    "mult": c.mult,
                }
                for c in s.curves
            ],
            "negative_restrictions": dict(s.negative_restrictions),
        }
    flag: dict[str, Any] = {"kind": s.flag_kind}
    if s.flag_curve is not None:
        flag["curve"] = s.flag_curve
    if s.ord_bounds:
        flag["ord_bounds"] = {k: rat_str(v) for k, v in s.ord_bounds.items()}
    if s.blowup_candidates is not None:
        flag["blowup_candidates"] = list(s.blowup_candidates)
    out["flag"] = flag
    if s.profiles:
        out["profiles"] = [{"name": p.name, "local_mults": dict(p.local_mults)} for p in s.profiles]
    if s.expected:
        out["expected"] = {k: str(v) for k, v in s.expected.items()}
    if s.assumptions:
        out["assumptions"] = list(s.assumptions)
    return out


def loads_scenario(text: str) -> Scenario:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError("", f"invalid JSON: {exc}") from None
    return scenario_from_dict(data)


def dumps_scenario(s: Scenario) -> str:
    return json.dumps(scenario_to_dict(s), indent=2) + "\n"


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioParseError("", f"cannot read {path}: {exc.strerror}") from None
    return loads_scenario(text)


def dump_scenario(s: Scenario, path) -> None:
    Path(path).write_text(dumps_scenario(s), encoding="utf-8")
