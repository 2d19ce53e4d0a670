"""Monte Carlo sweeps over the resource split, persistence and plotting.

Seeds
-----
Run ``r`` of cell ``(n_tot, n_s)`` uses the seed::

    int.from_bytes(blake2b(struct.pack("<4q", master_seed, n_tot, n_s, r),
                           digest_size=8).digest(), "little")

fed to ``numpy.random.PCG64``; normal deviates come from
``Generator.standard_normal``.  Results therefore do not depend on how runs
are scheduled across workers.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import struct
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .exceptions import ConfigError, InvalidRangeError, SweepError
from .noise import CoherentProbe, DetectorAdjustedFock, FockProbe
from .optics import AbsorptionModel, MediumGeometry
from .pipeline import EstimationConfig, RunResult, bound_error_integral, run_estimation

__all__ = [
    "SweepConfig",
    "SweepRow",
    "SweepResult",
    "CSV_COLUMNS",
    "DEFAULT_N_S_VALUES",
    "default_n_s_values",
    "derive_seed",
    "run_cell",
    "run_sweep",
    "write_results",
    "read_results",
    "emit_plot",
    "estimation_config_from_dict",
    "estimation_config_to_dict",
    "sweep_config_from_dict",
    "sweep_config_to_dict",
    "load_json_config",
]

CSV_COLUMNS = (
    "n_tot",
    "n_s",
    "mean_d2_eta",
    "sd_d2_eta",
    "mean_d2_phi_kkr",
    "sd_d2_phi_kkr",
    "mean_d2_alpha_kkr",
    "sd_d2_alpha_kkr",
    "d2_phi_bound",
    "clamp_events",
)

DEFAULT_N_S_VALUES = (10, 20, 50, 100, 200, 500, 1000, 2000, 5000)


def default_n_s_values(n_tot) -> list[int]:
    """1-2-5 series from 10 up to ``min(5000, n_tot)``."""
    top = min(5000, n_tot)
    return [n for n in DEFAULT_N_S_VALUES if n <= top]


@dataclass(frozen=True)
class SweepConfig:
    base: EstimationConfig = field(default_factory=EstimationConfig)
    n_tot_values: tuple = (100_000, 100_000_000)
    n_s_values: tuple | None = None
    n_mc: int = 50
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "n_tot_values", tuple(int(v) for v in self.n_tot_values))
        if self.n_s_values is not None:
            object.__setattr__(self, "n_s_values", tuple(int(v) for v in self.n_s_values))
        if not self.n_tot_values:
            raise InvalidRangeError("n_tot_values must not be empty")
        if self.n_s_values is not None and not self.n_s_values:
            raise InvalidRangeError("n_s_values must not be empty")
        if int(self.n_mc) != self.n_mc or self.n_mc < 1:
            raise InvalidRangeError("n_mc must be an integer >= 1")
        for n_tot, n_s in self.cells():
            if n_s > n_tot:
                raise InvalidRangeError(f"n_s={n_s} exceeds n_tot={n_tot}")

    def cells(self) -> list[tuple[int, int]]:
        out = []
        for n_tot in self.n_tot_values:
            n_s_values = self.n_s_values or default_n_s_values(n_tot)
            out.extend((n_tot, n_s) for n_s in n_s_values)
        return out

    def cell_config(self, n_tot: int, n_s: int) -> EstimationConfig:
        return replace(self.base, n_tot=n_tot, n_s=n_s)


@dataclass(frozen=True)
class SweepRow:
    n_tot: int
    n_s: int
    mean_d2_eta: float
    sd_d2_eta: float
    mean_d2_phi_kkr: float
    sd_d2_phi_kkr: float
    mean_d2_alpha_kkr: float
    sd_d2_alpha_kkr: float
    d2_phi_bound: float
    clamp_events: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple = ()

    def for_n_tot(self, n_tot) -> list[SweepRow]:
        return [r for r in self.rows if r.n_tot == n_tot]

    @property
    def n_tot_values(self) -> list[int]:
        return sorted({r.n_tot for r in self.rows})


def derive_seed(master_seed: int, n_tot: int, n_s: int, run_index: int) -> int:
    packed = struct.pack("<4q", master_seed, n_tot, n_s, run_index)
    return int.from_bytes(hashlib.blake2b(packed, digest_size=8).digest(), "little")


def run_cell(config: SweepConfig, n_tot: int, n_s: int) -> list[RunResult]:
    cell = config.cell_config(n_tot, n_s)
    return [run_estimation(cell, derive_seed(config.master_seed, n_tot, n_s, r)) for r in range(config.n_mc)]


def _task(args):
    cell, seed = args
    try:
        return run_estimation(cell, seed)
    except (ValueError, ArithmeticError) as exc:
        where = (cell.n_tot, cell.n_s, seed)
        raise SweepError(f"run failed in cell n_tot={cell.n_tot}, n_s={cell.n_s} (seed {seed}): {exc}", where) from exc


def _aggregate(n_tot, n_s, runs: list[RunResult], bound: float) -> SweepRow:
    def stats(name):
        v = np.array([getattr(r, name) for r in runs])
        sd = float(np.std(v, ddof=1)) if v.size > 1 else 0.0
        return float(np.mean(v)), sd

    m_eta, s_eta = stats("delta2_eta")
    m_phi, s_phi = stats("delta2_phi_kkr")
    m_alpha, s_alpha = stats("delta2_alpha_kkr")
    return SweepRow(
        n_tot, n_s, m_eta, s_eta, m_phi, s_phi, m_alpha, s_alpha, bound,
        int(sum(r.clamp_events for r in runs)),
    )


def run_sweep(config: SweepConfig, workers: int = 1) -> SweepResult:
    """Run every ``(n_tot, n_s)`` cell ``n_mc`` times and aggregate.

    Work is mapped over ``workers`` processes in a fixed order; the output is
    identical for any worker count.
    """
    cells = config.cells()
    tasks = []
    for n_tot, n_s in cells:
        cell = config.cell_config(n_tot, n_s)
        tasks.extend((cell, derive_seed(config.master_seed, n_tot, n_s, r)) for r in range(config.n_mc))

    if workers <= 1:
        results = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))

    rows = []
    for i, (n_tot, n_s) in enumerate(cells):
        runs = results[i * config.n_mc:(i + 1) * config.n_mc]
        bound = bound_error_integral(config.cell_config(n_tot, n_s))
        rows.append(_aggregate(n_tot, n_s, runs, bound))
    return SweepResult(tuple(rows))


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def write_results(result: SweepResult, path, format: str | None = None) -> None:
    """Write ``result`` as CSV or JSON (chosen from the suffix when ``format`` is None)."""
    path = Path(path)
    format = format or ("json" if path.suffix.lower() == ".json" else "csv")
    if format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in result.rows:
            writer.writerow([_fmt(getattr(row, c)) for c in CSV_COLUMNS])
        text = buf.getvalue()
    elif format == "json":
        text = json.dumps({"rows": [asdict(r) for r in result.rows]}, indent=2) + "\n"
    else:
        raise ValueError(f"unknown format {format!r}")
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write results to {path}: {exc}") from exc


def _row_from_mapping(m) -> SweepRow:
    kw = {}
    for f in fields(SweepRow):
        v = m[f.name]
        kw[f.name] = int(v) if f.type in ("int", int) else float(v)
    return SweepRow(**kw)


def read_results(path) -> SweepResult:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read results from {path}: {exc}") from exc
    if path.suffix.lower() == ".json":
        data = json.loads(text)
        return SweepResult(tuple(_row_from_mapping(r) for r in data["rows"]))
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ConfigError(f"{path} does not have the sweep CSV header")
    return SweepResult(tuple(_row_from_mapping(r) for r in reader))


def emit_plot(result: SweepResult, path) -> None:
    """Log-log error versus ``n_s``: transmittivity on top, phase below, one column per ``n_tot``.

    SVG output is byte-reproducible (fixed hash salt, no date).  Every series
    is wrapped in a group with id ``<series>-<n_tot>``.
    """
    if not result.rows:
        raise InvalidRangeError("nothing to plot")
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    n_tots = result.n_tot_values
    with matplotlib.rc_context({"svg.hashsalt": "kkphase", "svg.fonttype": "path"}):
        fig, axes = plt.subplots(2, len(n_tots), figsize=(4.5 * len(n_tots), 6.5), squeeze=False)
        for col, n_tot in enumerate(n_tots):
            rows = sorted(result.for_n_tot(n_tot), key=lambda r: r.n_s)
            ns = np.array([r.n_s for r in rows], dtype=float)
            top, bottom = axes[0, col], axes[1, col]
            c = top.errorbar(ns, [r.mean_d2_eta for r in rows], yerr=[r.sd_d2_eta for r in rows],
                             fmt="o", color="tab:red", capsize=0, label="transmittivity")
            c[0].set_gid(f"eta-{n_tot}")
            c = bottom.errorbar(ns, [r.mean_d2_phi_kkr for r in rows], yerr=[r.sd_d2_phi_kkr for r in rows],
                                fmt="s", color="lightskyblue", capsize=0, label="phase via KK")
            c[0].set_gid(f"phi_kkr-{n_tot}")
            (line,) = bottom.plot(ns, [r.d2_phi_bound for r in rows], "D-", color="navy", label="lossy bound")
            line.set_gid(f"phi_bound-{n_tot}")
            for ax in (top, bottom):
                ax.set_xscale("log")
                ax.set_yscale("log")
                ax.set_xlabel("$N_s$")
            top.set_ylabel(r"$\delta^2_\eta$")
            bottom.set_ylabel(r"$\delta^2_\varphi$")
            top.set_title(f"$N_{{tot}}$ = {n_tot:.0e}")
            bottom.legend(fontsize="small")
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        finally:
            plt.close(fig)


# --- JSON configuration ---------------------------------------------------

_PROBE_KINDS = {"fock", "coherent", "detector"}


def _strict(d, allowed, where):
    if not isinstance(d, dict):
        raise ConfigError(f"{where}: expected an object")
    unknown = set(d) - set(allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")


def _probe_from_dict(d):
    if d is None:
        return FockProbe()
    _strict(d, {"kind", "efficiency_T"}, "probe")
    kind = d.get("kind", "fock")
    if kind not in _PROBE_KINDS:
        raise ConfigError(f"probe.kind must be one of {sorted(_PROBE_KINDS)}")
    if kind != "detector" and "efficiency_T" in d:
        raise ConfigError("efficiency_T only applies to the detector probe")
    if kind == "fock":
        return FockProbe()
    if kind == "coherent":
        return CoherentProbe()
    return DetectorAdjustedFock(1, float(d.get("efficiency_T", 1.0)))


def _probe_to_dict(p):
    if isinstance(p, FockProbe):
        return {"kind": "fock"}
    if isinstance(p, CoherentProbe):
        return {"kind": "coherent"}
    if callable(p.efficiency_T):
        raise ConfigError("a callable detector efficiency cannot be serialised")
    return {"kind": "detector", "efficiency_T": p.efficiency_T}


_ESTIMATION_FIELDS = {"model", "probe", "interval", "n_tot", "n_s", "n_ref", "j", "clamp_epsilon", "length_l"}


def estimation_config_from_dict(d, where="config") -> EstimationConfig:
    _strict(d, _ESTIMATION_FIELDS, where)
    kw = {}
    try:
        if "model" in d:
            _strict(d["model"], {"alpha0_l", "omega0", "sigma"}, f"{where}.model")
            kw["model"] = AbsorptionModel(**d["model"])
        if "probe" in d:
            kw["probe"] = _probe_from_dict(d["probe"])
        if "interval" in d:
            kw["interval"] = tuple(d["interval"])
        if "length_l" in d:
            kw["geometry"] = MediumGeometry(length_l=float(d["length_l"]))
        for name in ("n_tot", "n_s", "n_ref", "j", "clamp_epsilon"):
            if name in d:
                kw[name] = d[name]
        return EstimationConfig(**kw)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def estimation_config_to_dict(c: EstimationConfig) -> dict:
    return {
        "model": asdict(c.model),
        "probe": _probe_to_dict(c.probe),
        "interval": list(c.interval),
        "n_tot": c.n_tot,
        "n_s": c.n_s,
        "n_ref": c.n_ref,
        "j": c.j,
        "clamp_epsilon": c.clamp_epsilon,
        "length_l": c.geometry.length_l,
    }


_SWEEP_FIELDS = {"base", "n_tot_values", "n_s_values", "n_mc", "master_seed"}


def sweep_config_from_dict(d) -> SweepConfig:
    """Parse a sweep configuration.  ``base`` may omit ``n_tot``/``n_s``."""
    _strict(d, _SWEEP_FIELDS, "sweep config")
    base_d = dict(d.get("base", {}))
    _strict(base_d, _ESTIMATION_FIELDS, "base")
    # the template's own split is irrelevant; keep it valid for any cell
    base_d.setdefault("n_tot", max(d.get("n_tot_values", [1])) if d.get("n_tot_values") else 100_000)
    base_d.setdefault("n_s", 2)
    base_d.setdefault("n_ref", 10_000)
    base = estimation_config_from_dict(base_d, "base")
    kw = {k: d[k] for k in ("n_tot_values", "n_s_values", "n_mc", "master_seed") if k in d}
    try:
        return SweepConfig(base=base, **kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"sweep config: {exc}") from exc


def sweep_config_to_dict(c: SweepConfig) -> dict:
    return {
        "base": estimation_config_to_dict(c.base),
        "n_tot_values": list(c.n_tot_values),
        "n_s_values": None if c.n_s_values is None else list(c.n_s_values),
        "n_mc": c.n_mc,
        "master_seed": c.master_seed,
    }


def load_json_config(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise OSError(f"cannot read config {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from exc
