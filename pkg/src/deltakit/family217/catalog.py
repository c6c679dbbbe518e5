"""Built-in scenarios for the blow-up of P^3 along a quintic elliptic curve.

Every scenario is written as plain JSON-shaped data and then passed through
the same validator used for scenario files, so the catalog doubles as a set
of schema examples (``deltakit export DIR`` writes them out).

The threefold has Picard basis ``H`` (hyperplane pullback) and ``E`` (the
exceptional divisor).  ``H_Q = 3H - E`` and ``E_Q = 5H - 2E`` span the other
side of the cones; ``minus_K = 4H - E``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..exactnum import rat_str
from .schema import Scenario, scenario_from_dict

THREEFOLD = {
    "basis": ["H", "E"],
    # H^3, H^2 E, H E^2, E^3
    "cubes": ["1", "0", "-5", "-20"],
    "relations": {"H_Q": [3, -1], "E_Q": [5, -2], "minus_K": [4, -1]},
    "walls": [
        # fibres of E over the curve: negative on E, zero on H
        {"curve": "fibre_E", "functional": ["0", "-1"], "nef": "H", "effective": "E"},
        # proper transforms of trisecant lines: negative on E_Q, zero on H_Q
        {"curve": "trisecant", "functional": ["1", "3"], "nef": "H_Q", "effective": "E_Q"},
    ],
    "minus_k_cubed": "24",
}

DIVISORS = {
    # name: (ray class, tau, S_X)
    "HP3": ("H", "3/2", "23/48"),
    "HQ": ("H_Q", "4/3", "121/288"),
    "E": ("E", "3/5", "227/1080"),
}

RULED_E_VALUES = (0, 2, 4, 6, 8, 10)


def _base(name: str, ray_class: str, tau: str) -> dict:
    return {
        "name": name,
        "threefold": THREEFOLD,
        "ray": {"A": "minus_K", "B": ray_class},
        "tau_hint": tau,
    }


def _expected_divisor(key: str) -> dict:
    _, tau, s = DIVISORS[key]
    return {"tau": tau, "S_X": s}


def divisor_scenarios() -> list[dict]:
    out = []
    for key, (cls, tau, _) in DIVISORS.items():
        d = _base(f"divisor-{key}", cls, tau)
        d["expected"] = _expected_divisor(key)
        out.append(d)
    return out


def ruled_scenario(e: int) -> dict:
    """Curve flag on the ruled surface E over the quintic, with invariant e."""
    lam = Fraction(20 - e, 2)
    d = _base(f"ruled-E-e{e}", "E", "3/5")
    d["restriction"] = {"matrix": [["0", "5"], ["-1", rat_str(lam)]]}
    d["surface"] = {
        "basis": ["C0", "f"],
        "form": [[str(-e), "1"], ["1", "0"]],
        "hodge": True,
        "curves": [
            {"name": "C0", "class": {"C0": "1"}, "negative_candidate": e > 0},
            # E_Q restricted to E; never part of a negative part on E
            {"name": "R", "class": {"C0": "2", "f": str(5 + e)}, "negative_candidate": False},
        ],
        "negative_restrictions": {"E_Q": "R"},
    }
    d["flag"] = {"kind": "curve", "curve": "C0", "ord_bounds": {"E_Q": "2"}}
    double = Fraction(377 * e, 25920) + Fraction(733, 1296)
    d["expected"] = {
        **_expected_divisor("E"),
        "first_term": "32/405",
        "double_term": rat_str(double),
        "S(W;C)": rat_str(double + Fraction(32, 405)),
    }
    d["assumptions"] = [
        "C0 is the worst case: any other section aC0 + bf (a >= 1, b >= ae) gives smaller inner volumes",
        "ord_C(E_Q|_E) <= 2 along the chosen section",
    ]
    return d


def _dp4_surface(variant: str, p_in_eq: bool) -> dict:
    curves = [
        # five lines through P, one through each blown-up point
        {"name": "Z", "class": {"L": "5", "eps": "-1"}, "negative_candidate": False, "bundle_size": 5, "mult": 5},
    ]
    if variant == "secant":
        curves.append(
            {"name": "Zp", "class": {"L": "10", "eps": "-4"}, "negative_candidate": False, "bundle_size": 5, "mult": 5}
        )
    else:
        curves.append({"name": "B", "class": {"L": "2", "eps": "-1"}, "negative_candidate": False, "mult": 1})
    curves.append(
        {"name": "R", "class": {"L": "5", "eps": "-2"}, "negative_candidate": False, "mult": 1 if p_in_eq else 0}
    )
    return {
        "basis": ["L", "eps"],
        "form": [["1", "0"], ["0", "-5"]],
        "hodge": True,
        "curves": curves,
        "negative_restrictions": {"E_Q": "R"},
    }


def dp4_scenario(variant: str, p_in_eq: bool) -> dict:
    """Point flag on a quartic del Pezzo surface in |H| through a general P."""
    tag = "PinEQ" if p_in_eq else "PnotinEQ"
    d = _base(f"dP4-{variant}-{tag}", "H", "3/2")
    d["restriction"] = {"matrix": [["1", "0"], ["0", "1"]]}
    d["surface"] = _dp4_surface(variant, p_in_eq)
    d["flag"] = {"kind": "point", "blowup_candidates": ["Z", "Zp" if variant == "secant" else "B"]}
    exp = _expected_divisor("HP3")
    if variant == "secant":
        profiles = [("on-Z", {"Z": 1})]
        if p_in_eq:
            profiles = [("on-R-and-Z", {"R": 1, "Z": 1})] + profiles + [("on-R", {"R": 1})]
        exp.update({"S(W;F)": "691/384" if p_in_eq else "229/128", "quadratic_term": "163/192"})
        if p_in_eq:
            exp.update({"F_O[on-R-and-Z]": "11/384", "S(W;O)[on-R-and-Z]": "337/384"})
        for pname, _ in profiles[1:] if p_in_eq else profiles:
            exp[f"S(W;O)[{pname}]"] = "<337/384"
        exp["S(W;O)[generic]"] = "<337/384"
    else:
        table = {
            "on-B-and-R": ({"B": 1, "R": 1}, "257/288"),
            "on-Z-and-R": ({"Z": 1, "R": 1}, "119/144"),
            "on-B": ({"B": 1}, "127/144"),
            "on-Z": ({"Z": 1}, "235/288"),
            "on-R": ({"R": 1}, "307/384"),
        }
        profiles = [(k, m) for k, (m, _) in table.items() if p_in_eq or "R" not in m]
        exp["S(W;F)"] = "523/288" if p_in_eq else "65/36"
        for pname, _ in profiles:
            exp[f"S(W;O)[{pname}]"] = table[pname][1]
        exp["S(W;O)[generic]"] = "101/128"
        exp["quadratic_term"] = "101/128"
    d["profiles"] = [{"name": n, "local_mults": m} for n, m in profiles]
    d["expected"] = exp
    d["assumptions"] = [
        "S is a general member of |H| through P, a smooth quartic del Pezzo surface",
        "-K_S is ample",
    ]
    return d


def _cubic_common(name: str) -> dict:
    return _base(name, "H_Q", "4/3")


def _cubic_surface(basis, form, named: dict, T: dict, L1: dict, L2: dict) -> dict:
    """Curves named in ``named`` (name -> mult) are basis curves; C5 = 3T - L1 - L2."""
    c5 = {b: Fraction(0) for b in basis}
    for src, sign in ((T, 3), (L1, -1), (L2, -1)):
        for k, v in src.items():
            c5[k] += sign * v
    curves = [
        {"name": n, "class": {n: "1"}, "negative_candidate": False, "mult": m} for n, m in named.items()
    ]
    curves.append(
        {"name": "C5", "class": {k: rat_str(v) for k, v in c5.items() if v}, "negative_candidate": False, "mult": 1}
    )
    return {
        "basis": list(basis),
        "form": [[str(x) for x in row] for row in form],
        "hodge": True,
        "curves": curves,
        "negative_restrictions": {"E": "C5"},
    }


def _cubic_restriction(basis, T: dict, C5_sum: dict) -> dict:
    return {"matrix": [[rat_str(T.get(b, 0)) for b in basis], [rat_str(C5_sum.get(b, 0)) for b in basis]]}


def _cubic(name, basis, form, mults, T, L1, L2, candidates, profiles, expected, assumptions) -> dict:
    d = _cubic_common(name)
    surface = _cubic_surface(basis, form, mults, T, L1, L2)
    c5 = next(c for c in surface["curves"] if c["name"] == "C5")["class"]
    d["restriction"] = _cubic_restriction(basis, T, {k: Fraction(v) for k, v in c5.items()})
    d["surface"] = surface
    d["flag"] = {"kind": "point", "blowup_candidates": candidates}
    d["profiles"] = [{"name": n, "local_mults": m} for n, m in profiles]
    d["expected"] = {**_expected_divisor("HQ"), **expected}
    d["assumptions"] = assumptions
    return d


def cubic_case_a() -> dict:
    """Tangent section T_P irreducible with a node or a cusp at P."""
    basis = ("T", "L1", "L2")
    form = [[3, 2, 2], [2, 0, 1], [2, 1, 0]]
    profiles = [
        ("node-C5", {"T": 1, "C5": 1}),
        ("node", {"T": 1}),
        ("cusp-C5", {"T": 2, "C5": 1}),
        ("cusp", {"T": 2}),
        ("L-C5", {"L1": 1, "C5": 1}),
        ("L", {"L1": 1}),
        ("C5", {"C5": 1}),
    ]
    values = ["131/144", "29/32", "277/288", "23/24", "1045/1152", "347/384", "247/288"]
    expected = {"S(W;F)": "1103/576", "S(W;O)[generic]": "41/48"}
    expected.update({f"S(W;O)[{n}]": v for (n, _), v in zip(profiles, values)})
    return _cubic(
        "cubic-case-a",
        basis,
        form,
        {"T": 2, "L1": 1, "L2": 1},
        {"T": 1},
        {"L1": 1},
        {"L2": 1},
        ["T", "L1", "L2"],
        profiles,
        expected,
        ["S is a general cubic surface in |H_Q| through P", "T_P is irreducible, singular at P"],
    )


def cubic_case_b() -> dict:
    """Tangent section T_P = l + C2 with a line l and a conic C2 through P."""
    basis = ("l", "C2", "L1", "L2")
    form = [[-1, 2, 1, 1], [2, 0, 1, 1], [1, 1, 0, 1], [1, 1, 1, 0]]
    profiles = [
        ("l-C2-C5", {"l": 1, "C2": 1, "C5": 1}),
        ("l-C2", {"l": 1, "C2": 1}),
        ("l-C5", {"l": 1, "C5": 1}),
        ("C2-C5", {"C2": 1, "C5": 1}),
        ("l", {"l": 1}),
        ("C2", {"C2": 1}),
        ("L-C5", {"L1": 1, "C5": 1}),
        ("L", {"L1": 1}),
        ("C5", {"C5": 1}),
    ]
    expected = {
        "S(W;F)": "1661/864",
        "F_O[l-C2-C5]": "119/864",
        "S(W;O)[l-C2-C5]": "211/216",
        "S(W;O)[L-C5]": "43/48",
        "S(W;O)[L]": "257/288",
    }
    for n in ("l-C2", "l-C5", "C2-C5", "l", "C2", "C5", "generic"):
        expected[f"S(W;O)[{n}]"] = "<=211/216"
    return _cubic(
        "cubic-case-b",
        basis,
        form,
        {"l": 1, "C2": 1, "L1": 1, "L2": 1},
        {"l": 1, "C2": 1},
        {"L1": 1},
        {"L2": 1},
        ["l", "C2", "L1", "L2"],
        profiles,
        expected,
        ["S is a general cubic surface in |H_Q| through P", "T_P = l + C2 with P on both components"],
    )


def cubic_case_e() -> dict:
    """Tangent section T_P = l1 + l2 + l3 with P = l1 n l2 and P off l3."""
    basis = ("l1", "l2", "l3", "L1", "L2")
    form = [
        [-1, 1, 1, 1, 1],
        [1, -1, 1, 1, 1],
        [1, 1, -1, 0, 0],
        [1, 1, 0, 0, 1],
        [1, 1, 0, 1, 0],
    ]
    profiles = [
        ("l-C5", {"l1": 1, "C5": 1}),
        ("l", {"l1": 1}),
        ("L-C5", {"L1": 1, "C5": 1}),
        ("L", {"L1": 1}),
        ("C5", {"C5": 1}),
    ]
    expected = {
        "S(W;F)": "31/16",
        "quadratic_term": "29/36",
        "S(W;O)[l]": "521/576",
        "S(W;O)[L]": "125/144",
        "S(W;O)[generic]": "29/36",
        "S(W;O)[l-C5]": "523/576",
        "S(W;O)[L-C5]": "251/288",
        "S(W;O)[C5]": "233/288",
    }
    return _cubic(
        "cubic-case-e",
        basis,
        form,
        {"l1": 1, "l2": 1, "l3": 0, "L1": 1, "L2": 1},
        {"l1": 1, "l2": 1, "l3": 1},
        {"L1": 1},
        {"L2": 1},
        ["l1", "l2", "l3", "L1", "L2"],
        profiles,
        expected,
        [
            "S is a general cubic surface in |H_Q| through P",
            "T_P is three coplanar lines, P = l1 n l2",
            "the u-range ends at tau = 4/3, where the volume vanishes; no chamber extends to 3/2",
        ],
    )


def catalog_dicts() -> list[dict]:
    out = divisor_scenarios()
    out += [ruled_scenario(e) for e in RULED_E_VALUES]
    for variant in ("secant", "conic"):
        for p_in_eq in (True, False):
            out.append(dp4_scenario(variant, p_in_eq))
    out += [cubic_case_a(), cubic_case_b(), cubic_case_e()]
    return sorted(out, key=lambda d: d["name"])


@lru_cache(maxsize=1)
def builtin_catalog() -> tuple[Scenario, ...]:
    return tuple(scenario_from_dict(d) for d in catalog_dicts())


def get_scenario(name: str) -> Scenario:
    for s in builtin_catalog():
        if s.name == name:
            return s
    raise KeyError(f"no built-in scenario named {name!r}")
