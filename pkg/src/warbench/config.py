"""Scenario configuration: parsing, validation, canonical serialization.

One JSON document drives the CLI, the HTTP API and the console. Missing
fields take the documented defaults (the repo's reference scenario);
unknown or duplicate fields are rejected; validation reports every
problem at once as a list of field-level errors.
"""

from __future__ import annotations

import copy
import hashlib
import json

from .aggregate import AversionSpec, PriorSet
from .dynamics import AttritionParams, BrackenParams, ForceState, TimeGrid
from .errors import ConfigError
from .objective import DecisionPreferences
from .optimizer import OptimizerSettings
from .shocks import COPULA_KINDS, Copula, Marginals, StepShockModel, build_joint

#: Resolved defaults; also the reference scenario used by the oracles.
DEFAULTS = {
    "initial": {"B0": 100.0, "R0": 80.0},
    "attrition": {"r": 0.08, "b": 0.10},
    "grid": {"dt": 1.0, "n_steps": 6},
    "priors": [
        {"p_B": 0.7, "p_R": 0.5, "copula": {"kind": "independence"}},
        {"p_B": 0.5, "p_R": 0.6, "copula": {"kind": "frechet_lower"}},
    ],
    "weights": [0.6, 0.4],
    "prior_floor": 1e-9,
    "aversion": {"mode": "tilt", "value": 0.01},
    "preferences": {"theta": [0.5, 0.3, 0.2], "zeta": 0.05, "b_min": 60.0},
    "simulator": "exact",
    "bracken": {"p_exp": 1.0, "q_exp": 0.05},
    "absorb_at_zero": True,
    "optimizer": {
        "pi_init": 0.5,
        "pi_floor": 0.0,
        "a0": 0.1,
        "tau": 50.0,
        "mc_paths": 256,
        "h": 1e-20,
        "tol": 1e-4,
        "window": 20,
        "max_iters": 2000,
        "retilt_every": 0,
        "worstcase_backend": "auto",
        "worstcase_mc_paths": 4096,
    },
    "seed": 1234,
}

_SIMULATORS = ("exact", "gaussian")
_BACKENDS = ("auto", "path", "iid")


def _reject_duplicates(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise ValueError(f"duplicate field {key!r}")
        seen.add(key)
    return dict(pairs)


class _Check:
    """Collects field-level errors while pulling values out of the document."""

    def __init__(self):
        self.errors = []

    def fail(self, field, message):
        self.errors.append({"field": field, "message": message})

    def number(self, sec, field, *, lo=None, hi=None, lo_open=False, hi_open=False,
               integer=False):
        name = field.split(".")[-1]
        value = sec[name]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(field, f"must be a number, got {value!r}")
            return None
        if integer and int(value) != value:
            self.fail(field, f"must be an integer, got {value!r}")
            return None
        if lo is not None and (value <= lo if lo_open else value < lo):
            self.fail(field, f"must be {'>' if lo_open else '>='} {lo}, got {value!r}")
            return None
        if hi is not None and (value >= hi if hi_open else value > hi):
            self.fail(field, f"must be {'<' if hi_open else '<='} {hi}, got {value!r}")
            return None
        return int(value) if integer else float(value)

    def choice(self, sec, field, options):
        name = field.split(".")[-1]
        value = sec[name]
        if value not in options:
            self.fail(field, f"must be one of {options}, got {value!r}")
            return None
        return value

    def section(self, doc, field, known):
        value = doc[field.split(".")[-1]]
        if not isinstance(value, dict):
            self.fail(field, f"must be an object, got {value!r}")
            return None
        for key in value:
            if key not in known:
                self.fail(f"{field}.{key}", "unknown field")
        merged = {k: value.get(k, v) for k, v in known.items()}
        return merged


def _merge_section(doc, key, check):
    defaults = DEFAULTS[key]
    if key not in doc:
        return copy.deepcopy(defaults)
    sec = check.section(doc, key, defaults)
    return copy.deepcopy(defaults) if sec is None else sec


def _validate_copula(spec, field, check):
    if not isinstance(spec, dict):
        check.fail(field, f"must be an object, got {spec!r}")
        return None
    kind = spec.get("kind")
    if kind not in COPULA_KINDS:
        check.fail(f"{field}.kind", f"must be one of {COPULA_KINDS}, got {kind!r}")
        return None
    allowed = {"kind"}
    out = {"kind": kind}
    if kind == "gaussian":
        allowed.add("rho")
        if "rho" not in spec:
            check.fail(f"{field}.rho", "gaussian copula requires rho")
            return None
        rho = check.number(spec, f"{field}.rho", lo=-1.0, hi=1.0, lo_open=True, hi_open=True)
        if rho is None:
            return None
        out["rho"] = rho
    elif kind == "clayton":
        allowed.add("alpha")
        if "alpha" not in spec:
            check.fail(f"{field}.alpha", "clayton copula requires alpha")
            return None
        alpha = check.number(spec, f"{field}.alpha", lo=0.0, lo_open=True)
        if alpha is None:
            return None
        out["alpha"] = alpha
    for key in spec:
        if key not in allowed:
            check.fail(f"{field}.{key}", "unknown field")
    return out


def _validate(doc: dict) -> dict:
    check = _Check()
    if not isinstance(doc, dict):
        raise ConfigError([{"field": "$", "message": "document must be a JSON object"}])
    for key in doc:
        if key not in DEFAULTS:
            check.fail(key, "unknown field")

    out = {}

    sec = _merge_section(doc, "initial", check)
    b0 = check.number(sec, "initial.B0", lo=0.0, lo_open=True)
    r0 = check.number(sec, "initial.R0", lo=0.0, lo_open=True)
    out["initial"] = {"B0": b0, "R0": r0}

    sec = _merge_section(doc, "attrition", check)
    out["attrition"] = {
        "r": check.number(sec, "attrition.r", lo=0.0),
        "b": check.number(sec, "attrition.b", lo=0.0),
    }

    sec = _merge_section(doc, "grid", check)
    out["grid"] = {
        "dt": check.number(sec, "grid.dt", lo=0.0, lo_open=True),
        "n_steps": check.number(sec, "grid.n_steps", lo=1, integer=True),
    }

    priors = doc.get("priors", copy.deepcopy(DEFAULTS["priors"]))
    if not isinstance(priors, list) or not priors:
        check.fail("priors", f"must be a non-empty array, got {priors!r}")
        priors = []
    out_priors = []
    for i, spec in enumerate(priors):
        field = f"priors[{i}]"
        if not isinstance(spec, dict):
            check.fail(field, f"must be an object, got {spec!r}")
            continue
        for key in spec:
            if key not in ("p_B", "p_R", "copula"):
                check.fail(f"{field}.{key}", "unknown field")
        entry = {}
        for pkey in ("p_B", "p_R"):
            if pkey not in spec:
                check.fail(f"{field}.{pkey}", "required")
                continue
            val = check.number(spec, f"{field}.{pkey}", lo=0.0, hi=1.0)
            if val is not None:
                entry[pkey] = val
        cop = _validate_copula(spec.get("copula", {"kind": "independence"}), f"{field}.copula", check)
        if cop is not None and len(entry) == 2:
            entry["copula"] = cop
            out_priors.append(entry)
    out["priors"] = out_priors

    weights = doc.get("weights", copy.deepcopy(DEFAULTS["weights"]))
    if not isinstance(weights, list) or not all(
        isinstance(w, (int, float)) and not isinstance(w, bool) for w in weights
    ):
        check.fail("weights", f"must be an array of numbers, got {weights!r}")
        weights = []
    else:
        weights = [float(w) for w in weights]
        if any(w < 0 for w in weights):
            check.fail("weights", f"must be nonnegative, got {weights}")
        elif abs(sum(weights) - 1.0) > 1e-9:
            check.fail("weights", f"weights must sum to 1, got sum {sum(weights)!r}")
    if priors and weights and len(weights) != len(priors):
        check.fail("weights", f"{len(weights)} weights for {len(priors)} priors")
    out["weights"] = weights

    floor = doc.get("prior_floor", DEFAULTS["prior_floor"])
    if isinstance(floor, bool) or not isinstance(floor, (int, float)) or not 0 <= floor < 0.25:
        check.fail("prior_floor", f"must be a number in [0, 0.25), got {floor!r}")
    else:
        out["prior_floor"] = float(floor)

    sec = _merge_section(doc, "aversion", check)
    mode = check.choice(sec, "aversion.mode", ("tilt", "radius"))
    value = check.number(sec, "aversion.value", lo=0.0, lo_open=(mode == "radius"))
    out["aversion"] = {"mode": mode, "value": value}

    sec = _merge_section(doc, "preferences", check)
    theta = sec["theta"]
    if (
        not isinstance(theta, list)
        or len(theta) != 3
        or not all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in theta)
    ):
        check.fail("preferences.theta", f"must be an array of three numbers, got {theta!r}")
        theta = None
    else:
        theta = [float(t) for t in theta]
        if any(t < 0 for t in theta):
            check.fail("preferences.theta", f"components must be >= 0, got {theta}")
            theta = None
        elif abs(sum(theta) - 1.0) > 1e-9:
            check.fail("preferences.theta", f"theta must sum to 1, got sum {sum(theta)!r}")
            theta = None
    zeta = check.number(sec, "preferences.zeta", lo=0.0, lo_open=True)
    b_min = check.number(sec, "preferences.b_min")
    if b_min is not None and b0 is not None and b_min > b0:
        check.fail("preferences.b_min", f"must be <= B0 = {b0}, got {b_min}")
    out["preferences"] = {"theta": theta, "zeta": zeta, "b_min": b_min}

    sim = doc.get("simulator", DEFAULTS["simulator"])
    if sim not in _SIMULATORS:
        check.fail("simulator", f"must be one of {_SIMULATORS}, got {sim!r}")
    out["simulator"] = sim

    sec = _merge_section(doc, "bracken", check)
    out["bracken"] = {
        "p_exp": check.number(sec, "bracken.p_exp", lo=0.0, lo_open=True),
        "q_exp": check.number(sec, "bracken.q_exp", lo=0.0),
    }

    absorb = doc.get("absorb_at_zero", DEFAULTS["absorb_at_zero"])
    if not isinstance(absorb, bool):
        check.fail("absorb_at_zero", f"must be a boolean, got {absorb!r}")
    out["absorb_at_zero"] = absorb

    sec = _merge_section(doc, "optimizer", check)
    opt = {
        "pi_init": check.number(sec, "optimizer.pi_init", lo=0.0, hi=1.0, lo_open=True),
        "pi_floor": check.number(sec, "optimizer.pi_floor", lo=0.0, hi=1.0, hi_open=True),
        "a0": check.number(sec, "optimizer.a0", lo=0.0, lo_open=True),
        "tau": check.number(sec, "optimizer.tau", lo=0.0, lo_open=True),
        "mc_paths": check.number(sec, "optimizer.mc_paths", lo=1, integer=True),
        "h": check.number(sec, "optimizer.h", lo=0.0, lo_open=True),
        "tol": check.number(sec, "optimizer.tol", lo=0.0, lo_open=True),
        "window": check.number(sec, "optimizer.window", lo=1, integer=True),
        "max_iters": check.number(sec, "optimizer.max_iters", lo=1, integer=True),
        "retilt_every": check.number(sec, "optimizer.retilt_every", lo=0, integer=True),
        "worstcase_backend": check.choice(sec, "optimizer.worstcase_backend", _BACKENDS),
        "worstcase_mc_paths": check.number(sec, "optimizer.worstcase_mc_paths", lo=1000, integer=True),
    }
    out["optimizer"] = opt

    seed = doc.get("seed", DEFAULTS["seed"])
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
        check.fail("seed", f"must be an integer in [0, 2^64), got {seed!r}")
    out["seed"] = seed

    if check.errors:
        raise ConfigError(check.errors)
    return out


class ScenarioConfig:
    """Validated scenario document with typed accessors.

    Construct via :func:`parse_config` or :func:`scenario_from_dict`;
    the raw resolved document round-trips through :meth:`to_dict`.
    """

    def __init__(self, resolved: dict):
        self._doc = resolved

    def __eq__(self, other):
        return isinstance(other, ScenarioConfig) and self._doc == other._doc

    def __repr__(self):
        return f"ScenarioConfig(hash={self.config_hash()[:12]})"

    def to_dict(self) -> dict:
        return copy.deepcopy(self._doc)

    def to_json(self) -> str:
        return json.dumps(self._doc, indent=2) + "\n"

    def config_hash(self) -> str:
        canonical = json.dumps(self._doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def with_overrides(self, **kwargs) -> "ScenarioConfig":
        """New scenario with top-level fields replaced (revalidated)."""
        doc = self.to_dict()
        doc.update(kwargs)
        return scenario_from_dict(doc)

    # -- typed accessors -------------------------------------------------
    def initial_state(self) -> ForceState:
        return ForceState(self._doc["initial"]["B0"], self._doc["initial"]["R0"])

    def attrition(self) -> AttritionParams:
        return AttritionParams(self._doc["attrition"]["r"], self._doc["attrition"]["b"])

    def grid(self) -> TimeGrid:
        return TimeGrid(self._doc["grid"]["dt"], self._doc["grid"]["n_steps"])

    def preferences(self) -> DecisionPreferences:
        p = self._doc["preferences"]
        return DecisionPreferences(tuple(p["theta"]), p["zeta"], p["b_min"])

    def bracken(self) -> BrackenParams:
        b = self._doc["bracken"]
        return BrackenParams(self.attrition(), b["p_exp"], b["q_exp"])

    def aversion(self) -> AversionSpec:
        a = self._doc["aversion"]
        return AversionSpec(a["mode"], a["value"])

    def prior_models(self) -> tuple[StepShockModel, ...]:
        models = []
        for spec in self._doc["priors"]:
            cop = spec["copula"]
            param = cop.get("rho", cop.get("alpha"))
            models.append(
                build_joint(Marginals(spec["p_B"], spec["p_R"]), Copula(cop["kind"], param))
            )
        return tuple(models)

    def prior_set(self) -> PriorSet:
        base = PriorSet(self.prior_models(), tuple(self._doc["weights"]))
        return base.floored(self._doc["prior_floor"])

    def optimizer_settings(self) -> OptimizerSettings:
        return OptimizerSettings(**self._doc["optimizer"])

    @property
    def simulator(self) -> str:
        return self._doc["simulator"]

    @property
    def absorb_at_zero(self) -> bool:
        return self._doc["absorb_at_zero"]

    @property
    def seed(self) -> int:
        return self._doc["seed"]


def scenario_from_dict(doc: dict) -> ScenarioConfig:
    """Validate a (possibly partial) plain document into a scenario."""
    return ScenarioConfig(_validate(doc))


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a JSON scenario document.

    Raises :class:`ConfigError` carrying the full list of field-level
    problems (schema violations, domain violations, unknown or duplicate
    fields).
    """
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except ValueError as exc:
        raise ConfigError([{"field": "$", "message": f"not valid JSON: {exc}"}]) from exc
    return scenario_from_dict(doc)


def reference_scenario() -> ScenarioConfig:
    """The repo's canonical parameter set (all defaults)."""
    return scenario_from_dict({})
