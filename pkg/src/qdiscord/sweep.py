"""Parameter sweeps producing figure-ready records.

A record is a flat dict whose first keys are ``COLUMNS``; model-specific
reference and consistency columns follow. Missing values are ``None``.
"""

import json
import logging
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .aligned import (
    AlignedMixtureParams,
    aligned_discord,
    aligned_I2,
    aligned_I3,
    aligned_state,
)
from .chains.dense import ground_state_dense, pair_rdm_dense
from .chains.factorize import check_factorization, uniform_factorizing_field
from .chains.jw import ground_state_jw, pair_observables_jw
from .chains.lipkin import lipkin_ground_state, pair_rdm_symmetric_bloch
from .chains.model import MAX_DENSE_DIM, ChainSpec, build_hamiltonian, product_state
from .chains.pairs import pair_rdm_from_observables
from .entropy import CUBIC, LINEAR, VON_NEUMANN, EntropyKind
from .errors import ConfigError, ConsistencyError, DomainError
from .measures import (
    cubic_discord_closed,
    geometric_discord_closed,
    info_deficit,
    quantum_discord,
)
from .states import bloch_compose, bloch_decompose, concurrence

log = logging.getLogger(__name__)

SCHEMA = 1
COLUMNS = ("model", "n", "chi", "B_or_theta", "L", "parity", "E_minus", "E_plus",
           "D", "I1", "I2", "I3", "C", "kx", "ky", "kz", "flags")
FACTORIZE_COLUMNS = ("geometry", "n", "s", "Jx", "Jy", "Jz", "chi", "swapped_xy", "theta",
                     "B_s", "B_first", "B_last", "max_pair_residual", "max_site_residual",
                     "dense_residual")
MODELS = ("aligned", "cyclic_nn", "fully_connected")
MODEL_ALIASES = {"chain": "cyclic_nn", "lipkin": "fully_connected"}
BASE_MEASURES = ("D", "I1", "I2", "I3", "C")
SOLVERS = {"cyclic_nn": ("jw", "dense"), "fully_connected": ("block", "dense")}

# closed form vs sphere search
CONSISTENCY_TOL = 1e-8
WORKERS_ENV = "QDISCORD_WORKERS"

_IQ = re.compile(r"^Iq\(?([0-9.eE+-]+)\)?$")


@dataclass(frozen=True)
class SweepConfig:
    model: str
    n: int = None
    chi: float = 0.5
    jx: float = 1.0
    grid: tuple = (0.0, 1.0, 11)
    separations: object = "all"
    measures: tuple = BASE_MEASURES
    solver: str = None
    output: str = "-"
    format: str = "csv"

    @property
    def grid_values(self):
        lo, hi, pts = self.grid
        return np.linspace(lo, hi, pts) if pts > 1 else np.array([lo])

    @property
    def q_values(self):
        return tuple(float(_IQ.match(m).group(1)) for m in self.measures if _IQ.match(m))

    @property
    def separation_list(self):
        if self.model != "cyclic_nn":
            return ["all"]
        if self.separations == "all":
            return list(range(1, self.n // 2 + 1))
        return list(self.separations)


# -- configuration ---------------------------------------------------------

def parse_grid(text):
    """``"min:max:points"`` -> ``(min, max, points)``."""
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = str(text).split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be min:max:points, got {text!r}")
    try:
        lo, hi, pts = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"cannot parse grid {text!r}") from exc
    return lo, hi, pts


def parse_measures(text):
    items = text if isinstance(text, (list, tuple)) else str(text).split(",")
    return tuple(m.strip() for m in items if m.strip())


def parse_separations(text):
    if text == "all":
        return "all"
    items = text if isinstance(text, (list, tuple)) else str(text).split(",")
    try:
        return tuple(int(x) for x in items)
    except ValueError as exc:
        raise ConfigError(f"cannot parse separations {text!r}") from exc


def validate_config(cfg):
    if cfg.model not in MODELS:
        raise ConfigError(f"model must be one of {MODELS}, got {cfg.model!r}")
    lo, hi, pts = cfg.grid
    if pts < 1 or (pts > 1 and not hi > lo):
        raise ConfigError("grid must be strictly increasing")
    if not np.all(np.isfinite([lo, hi])):
        raise ConfigError("grid bounds must be finite")
    for m in cfg.measures:
        if m in BASE_MEASURES:
            continue
        match = _IQ.match(m)
        if not match:
            raise ConfigError(f"unknown measure {m!r}")
        try:
            q = float(match.group(1))
        except ValueError as exc:
            raise ConfigError(f"cannot parse Tsallis index in {m!r}") from exc
        if q <= 0 or q == 1:
            raise ConfigError(f"Tsallis index must be positive and != 1, got {q}")
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.model == "aligned":
        if lo < 0 or hi > np.pi / 2 + 1e-12:
            raise ConfigError("theta grid must lie in [0, pi/2]")
        return cfg
    if cfg.n is None or cfg.n < 2:
        raise ConfigError("chain models need n >= 2")
    if cfg.jx <= 0:
        raise ConfigError("Jx must be positive")
    solver = cfg.solver or SOLVERS[cfg.model][0]
    if solver not in SOLVERS[cfg.model]:
        raise ConfigError(f"solver for {cfg.model} must be one of {SOLVERS[cfg.model]}")
    if cfg.model == "cyclic_nn" and cfg.separations != "all":
        if any(not 1 <= L <= cfg.n // 2 for L in cfg.separations):
            raise ConfigError(f"separations must lie in [1, {cfg.n // 2}]")
    return replace(cfg, solver=solver)


def load_config(path=None, overrides=None):
    """Config from an optional JSON file with flag overrides applied on top."""
    data = {}
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    data.update({k: v for k, v in (overrides or {}).items() if v is not None})
    known = {"model", "n", "chi", "jx", "grid", "separations", "measures", "solver",
             "output", "format"}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "model" not in data:
        raise ConfigError("config needs a model")
    kwargs = dict(data)
    kwargs["model"] = MODEL_ALIASES.get(kwargs["model"], kwargs["model"])
    try:
        if "grid" in kwargs:
            kwargs["grid"] = parse_grid(kwargs["grid"])
        if "measures" in kwargs:
            kwargs["measures"] = parse_measures(kwargs["measures"])
        if "separations" in kwargs:
            kwargs["separations"] = parse_separations(kwargs["separations"])
        for key, conv in (("n", int), ("chi", float), ("jx", float)):
            if key in kwargs:
                kwargs[key] = conv(kwargs[key])
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    return validate_config(SweepConfig(**kwargs))


# -- measure evaluation ----------------------------------------------------

def _direction(res):
    return [float(x) for x in res.optimal_direction]


def evaluate_measures(b, measures, q_values=()):
    """Measures of a two-qubit Bloch state.

    Returns ``(values, direction, flags, diffs)``. The direction is that of
    the first requested measure among D, I1, I2, I3; ``diffs`` holds the
    closed-form minus search differences for I2 and I3.
    """
    values, flags, diffs = {}, set(), {}
    direction = None

    def take(name, res):
        nonlocal direction
        values[name] = float(res.value)
        flags.update(res.flags)
        if direction is None:
            direction = _direction(res)

    if "D" in measures:
        take("D", quantum_discord(b))
    if "I1" in measures:
        take("I1", info_deficit(VON_NEUMANN, b))
    for name, closed, kind in (("I2", geometric_discord_closed, LINEAR),
                               ("I3", cubic_discord_closed, CUBIC)):
        if name in measures:
            res = closed(b)
            take(name, res)
            diffs[name] = float(res.value - info_deficit(kind, b).value)
    if "C" in measures:
        values["C"] = float(concurrence(bloch_compose(b)))
    for q in q_values:
        values[f"Iq({q:g})"] = float(info_deficit(EntropyKind.tsallis(q), b).value)
    return values, direction, flags, diffs


def _record(cfg, x, L, values, direction, flags, parity=None, energies=None, extra=None):
    rec = dict.fromkeys(COLUMNS)
    chi = None if cfg.model == "aligned" else cfg.chi
    rec.update(model=cfg.model, n=cfg.n, chi=chi, B_or_theta=float(x), L=L, parity=parity)
    if energies is not None:
        rec["E_plus"], rec["E_minus"] = float(energies[1]), float(energies[-1])
    for name in BASE_MEASURES:
        rec[name] = values.get(name)
    if direction is not None:
        rec["kx"], rec["ky"], rec["kz"] = direction
    rec["flags"] = "|".join(sorted(flags))
    for q in cfg.q_values:
        rec[f"Iq({q:g})"] = values.get(f"Iq({q:g})")
    rec.update(extra or {})
    return rec


def _check_consistency(diffs, where):
    for name, d in diffs.items():
        if abs(d) > CONSISTENCY_TOL:
            raise ConsistencyError(f"{name} closed form and search differ by {d:.3e} at {where}")


def _reference_columns(cfg, field_value, measures):
    """Aligned-mixture values at the mean-field angle ``cos theta = |B|/Jx``."""
    ratio = abs(field_value) / cfg.jx
    cols = {f"{m}_ref": None for m in ("D", "I2", "I3") if m in measures}
    if ratio > 1.0:
        return cols
    theta = float(np.arccos(ratio))
    refs = {"D": aligned_discord(theta), "I2": aligned_I2(theta)[0], "I3": aligned_I3(theta)[0]}
    for m in cols:
        cols[m] = float(refs[m[:-4]])
    return cols


# -- sweeps ----------------------------------------------------------------

def _aligned_point(cfg, theta):
    b = aligned_state(AlignedMixtureParams(theta))
    measures = set(cfg.measures) | {"D", "I2", "I3"}
    values, direction, flags, diffs = evaluate_measures(b, measures, cfg.q_values)
    closed = {"D": aligned_discord(theta), "I2": aligned_I2(theta)[0], "I3": aligned_I3(theta)[0]}
    extra = {}
    for m in ("D", "I2", "I3"):
        extra[f"{m}_search"] = values[m] if m == "D" else values[m] - diffs[m]
        diffs[m] = float(closed[m] - extra[f"{m}_search"])
        extra[f"{m}_diff"] = diffs[m]
        values[m] = float(closed[m])
    extra["branch_I2"] = aligned_I2(theta)[1]
    extra["branch_I3"] = aligned_I3(theta)[1]
    for m in set(BASE_MEASURES) - set(cfg.measures):
        values.pop(m, None)
    _check_consistency(diffs, f"theta={theta!r}")
    return [_record(cfg, theta, None, values, direction, flags, extra=extra)]


def _chain_point(cfg, field_value):
    spec = ChainSpec.cyclic(cfg.n, cfg.jx, cfg.chi * cfg.jx, 0.0, field_value * cfg.jx)
    if cfg.solver == "jw":
        gs = ground_state_jw(spec)
        rdm = lambda L: bloch_decompose(  # noqa: E731
            pair_rdm_from_observables(pair_observables_jw(gs.data, 0, L)))
    else:
        gs = ground_state_dense(spec)
        rdm = lambda L: bloch_decompose(pair_rdm_dense(gs.data, cfg.n, 0, L))  # noqa: E731
    refs = _reference_columns(cfg, field_value * cfg.jx, cfg.measures)
    out = []
    for L in cfg.separation_list:
        values, direction, flags, diffs = evaluate_measures(rdm(L), cfg.measures, cfg.q_values)
        _check_consistency(diffs, f"B={field_value!r}, L={L}")
        if gs.degeneracy_flag:
            flags.add("degenerate")
        extra = dict(refs)
        extra.update({f"{m}_search_diff": d for m, d in diffs.items()})
        out.append(_record(cfg, field_value, L, values, direction, flags, gs.parity,
                           gs.sector_energies, extra))
    return out


def _lipkin_point(cfg, field_value):
    if cfg.solver == "block":
        gs = lipkin_ground_state(cfg.n, cfg.jx, cfg.chi * cfg.jx, field_value * cfg.jx)
        b = pair_rdm_symmetric_bloch(gs.data, cfg.n)
    else:
        spec = ChainSpec.fully_connected(cfg.n, cfg.jx, cfg.chi * cfg.jx, 0.0,
                                         field_value * cfg.jx)
        gs = ground_state_dense(spec)
        b = bloch_decompose(pair_rdm_dense(gs.data, cfg.n, 0, 1))
    values, direction, flags, diffs = evaluate_measures(b, cfg.measures, cfg.q_values)
    _check_consistency(diffs, f"B={field_value!r}")
    if gs.degeneracy_flag:
        flags.add("degenerate")
    extra = _reference_columns(cfg, field_value * cfg.jx, cfg.measures)
    extra.update({f"{m}_search_diff": d for m, d in diffs.items()})
    return [_record(cfg, field_value, "all", values, direction, flags, gs.parity,
                    gs.sector_energies, extra)]


_POINT = {"aligned": _aligned_point, "cyclic_nn": _chain_point,
          "fully_connected": _lipkin_point}


def _run_point(args):
    cfg, x = args
    return _POINT[cfg.model](cfg, x)


def _workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def run_sweep(cfg, workers=None):
    """All records of a sweep, ordered by (grid value, separation)."""
    cfg = validate_config(cfg)
    workers = workers or _workers()
    tasks = [(cfg, float(x)) for x in cfg.grid_values]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_point, tasks))
    else:
        chunks = []
        for i, t in enumerate(tasks):
            chunks.append(_run_point(t))
            log.info("point %d/%d done", i + 1, len(tasks))
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: (r["B_or_theta"], r["L"] if isinstance(r["L"], int) else 0))
    return records


def run_aligned_sweep(cfg, workers=None):
    return run_sweep(replace(cfg, model="aligned"), workers)


def run_chain_sweep(cfg, workers=None):
    return run_sweep(replace(cfg, model="cyclic_nn"), workers)


def run_lipkin_sweep(cfg, workers=None):
    return run_sweep(replace(cfg, model="fully_connected"), workers)


# -- factorization report ----------------------------------------------------

def run_factorize(n, jx=1.0, jy=0.5, jz=0.0, geometry="cyclic", s=0.5):
    """Factorizing field of a uniform chain and the residuals of its product state."""
    builders = {"cyclic": ChainSpec.cyclic, "open": ChainSpec.open,
                "fully_connected": ChainSpec.fully_connected}
    if geometry not in builders:
        raise ConfigError(f"geometry must be one of {sorted(builders)}")
    spec = builders[geometry](n, jx, jy, jz, 0.0, s)
    ff = uniform_factorizing_field(spec)
    res = check_factorization(ff.spec, ff.theta)
    dense_residual = None
    if ff.spec.dim <= MAX_DENSE_DIM:
        dense_residual = product_state_residual(ff.spec, ff.theta)
    return {
        "geometry": spec.geometry, "n": n, "s": s, "Jx": jx, "Jy": jy, "Jz": jz,
        "chi": ff.chi, "swapped_xy": ff.swapped_xy, "theta": ff.theta, "B_s": ff.B_s,
        "B_first": float(ff.fields[0]), "B_last": float(ff.fields[-1]),
        "max_pair_residual": float(np.max(np.abs(res.pair))),
        "max_site_residual": float(np.max(np.abs(res.site))),
        "dense_residual": dense_residual,
    }


def product_state_residual(spec, thetas):
    """``||(H - E)|Theta>||`` with ``E = <Theta|H|Theta>``, from the dense Hamiltonian."""
    if spec.dim > MAX_DENSE_DIM:
        raise DomainError("chain too large for the dense residual")
    th = np.broadcast_to(np.asarray(thetas, dtype=float), (spec.n,))
    psi = product_state(th, spec.s)
    hpsi = build_hamiltonian(spec) @ psi
    e = np.vdot(psi, hpsi).real
    return float(np.linalg.norm(hpsi - e * psi))


# -- output ------------------------------------------------------------------

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def record_columns(records, base=COLUMNS):
    cols = list(base)
    for r in records:
        for k in r:
            if k not in cols:
                cols.append(k)
    return cols


def write_records(records, fh, fmt="csv", base=COLUMNS):
    if fmt == "json":
        json.dump(records, fh, indent=1, default=float)
        fh.write("\n")
        return
    cols = record_columns(records, base)
    fh.write(f"# schema={SCHEMA}\n")
    fh.write(",".join(cols) + "\n")
    for r in records:
        fh.write(",".join(_fmt(r.get(c)) for c in cols) + "\n")
