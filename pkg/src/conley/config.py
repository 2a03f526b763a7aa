"""Scenario configuration: JSON text in, validated dataclasses out.

Every validation problem is reported with its dotted key path, and all
problems are collected before :class:`ConfigError` is raised.
"""
import json
from dataclasses import asdict, dataclass, field

from .dynamics import CATALOG, Grid, VectorFieldSpec, f_dot_h, sinusoid
from .errors import ConfigError, PreconditionError
from .homology.fields import RINGS
from .pairs import SlicedCubeSet

REGION_NAMES = ("N", "N_A", "N_R", "U_A", "U_R")
BOX_TOL = 1e-9

_SCHEMA = {
    "system": {"name", "params", "forcing"},
    "system.forcing": {"kind", "amplitude", "frequency", "h_embedded"},
    "grid": {"lower", "upper", "divisions", "padding"},
    "time": {"tau", "slices", "burn_in", "margin", "substeps"},
    "regions": set(REGION_NAMES),
    "homology": {"ring", "thickening_m"},
    "sweep": {"amplitudes"},
    "output": {"path", "emit_matrices", "emit_witness_csv", "emit_betti_csv"},
}
_TOP = {"system", "grid", "time", "regions", "homology", "sweep", "output"}


@dataclass
class ForcingConfig:
    kind: str = "none"
    amplitude: float = 0.0
    frequency: float = 1.0
    h_embedded: bool = False

    def spec(self, amplitude=None):
        amp = self.amplitude if amplitude is None else amplitude
        if self.kind == "none" and amplitude is None:
            return None
        f = sinusoid(amp, self.frequency)
        return f_dot_h(f) if self.h_embedded else f


@dataclass
class SystemConfig:
    name: str
    params: dict = field(default_factory=dict)
    forcing: ForcingConfig = field(default_factory=ForcingConfig)


@dataclass
class GridConfig:
    lower: list
    upper: list
    divisions: list
    padding: int = 0

    def build(self):
        return Grid(tuple(self.lower), tuple(self.upper), tuple(self.divisions))


@dataclass
class TimeConfig:
    tau: float
    slices: int
    burn_in: int
    margin: int = 0
    substeps: int = 8


@dataclass
class Region:
    """Box list shared by all slices, or one box list per slice."""

    boxes: list
    per_slice: bool = False

    def to_json(self):
        return {"per_slice": self.boxes} if self.per_slice else self.boxes

    def cells(self, grid, nslices):
        boxes = [[(tuple(lo), tuple(hi)) for lo, hi in bl] for bl in self.boxes] \
            if self.per_slice else [(tuple(lo), tuple(hi)) for lo, hi in self.boxes]
        return SlicedCubeSet.from_boxes(grid, boxes, nslices, per_slice=self.per_slice)


@dataclass
class HomologyConfig:
    ring: str = "F2"
    thickening_m: int = 1


@dataclass
class OutputConfig:
    path: str = "report.json"
    emit_matrices: bool = False
    emit_witness_csv: bool = False
    emit_betti_csv: bool = False


@dataclass
class ScenarioConfig:
    system: SystemConfig
    grid: GridConfig
    time: TimeConfig
    regions: dict
    homology: HomologyConfig
    output: OutputConfig
    sweep: list = None

    @property
    def nslices(self):
        return self.time.slices + 1

    def vector_field(self, amplitude=None):
        forcing = self.system.forcing.spec(amplitude)
        kw = {"forcing": forcing} if forcing is not None else {}
        return VectorFieldSpec(self.system.name, dict(self.system.params), **kw)

    def region(self, name, grid=None):
        """Sliced cell set of a region; ``None`` when the region is not given."""
        grid = grid or self.grid.build()
        r = self.regions.get(name)
        if r is None:
            if name == "N":
                return SlicedCubeSet.constant(grid.cells(), self.nslices)
            if name in ("U_A", "U_R"):
                return SlicedCubeSet.empty(self.nslices)
            return None
        return r.cells(grid, self.nslices)

    def to_dict(self):
        """Canonical echo with all defaults filled in."""
        d = {
            "system": asdict(self.system),
            "grid": asdict(self.grid),
            "time": asdict(self.time),
            "regions": {k: v.to_json() for k, v in sorted(self.regions.items()) if v is not None},
            "homology": asdict(self.homology),
            "output": asdict(self.output),
        }
        if self.sweep is not None:
            d["sweep"] = {"amplitudes": list(self.sweep)}
        return d


class _Collector:
    def __init__(self):
        self.errors = []

    def add(self, path, msg):
        self.errors.append(f"{path} {msg}")

    def section(self, data, path, required=()):
        if not isinstance(data, dict):
            self.add(path, "must be an object")
            return {}
        for key in sorted(set(data) - _SCHEMA[path]):
            self.add(f"{path}.{key}", "is not a recognized key")
        for key in required:
            if key not in data:
                self.add(f"{path}.{key}", "is required")
        return data

    def number(self, data, key, path, default=None, positive=False, integer=False, minimum=None):
        full = f"{path}.{key}"
        if key not in data:
            return default
        v = data[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            self.add(full, "must be a number")
            return default
        if integer and int(v) != v:
            self.add(full, "must be an integer")
            return default
        if positive and not v > 0:
            self.add(full, "must be positive")
            return default
        if minimum is not None and v < minimum:
            self.add(full, f"must be >= {minimum}")
            return default
        return int(v) if integer else float(v)

    def boolean(self, data, key, path, default=False):
        if key not in data:
            return default
        if not isinstance(data[key], bool):
            self.add(f"{path}.{key}", "must be true or false")
            return default
        return data[key]

    def vector(self, data, key, path, integer=False):
        v = data.get(key)
        if v is None:
            return None
        ok = isinstance(v, list) and v and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)
        if not ok:
            self.add(f"{path}.{key}", "must be a nonempty list of numbers")
            return None
        if integer and any(int(x) != x or x < 1 for x in v):
            self.add(f"{path}.{key}", "must hold positive integers")
            return None
        return [int(x) for x in v] if integer else [float(x) for x in v]


def _boxes(col, value, path, grid, nslices):
    """Validate a box list (or per-slice box lists) against the grid."""
    if isinstance(value, dict):
        if set(value) != {"per_slice"}:
            col.add(path, "must be a box list or {\"per_slice\": [...]}")
            return None
        lists = value["per_slice"]
        if not isinstance(lists, list) or len(lists) != nslices:
            col.add(f"{path}.per_slice", f"must hold one box list per slice ({nslices})")
            return None
        checked = [_box_list(col, bl, f"{path}.per_slice[{k}]", grid) for k, bl in enumerate(lists)]
        return None if any(b is None for b in checked) else Region(checked, True)
    checked = _box_list(col, value, path, grid)
    return None if checked is None else Region(checked)


def _box_list(col, value, path, grid):
    if not isinstance(value, list):
        col.add(path, "must be a list of [lower, upper] boxes")
        return None
    out = []
    d = grid.dim if grid else None
    for i, box in enumerate(value):
        bp = f"{path}[{i}]"
        try:
            lo, hi = ([float(x) for x in corner] for corner in box)
        except (TypeError, ValueError):
            col.add(bp, "must be [lower, upper] with numeric corners")
            return None
        if len(lo) != len(hi) or (d is not None and len(lo) != d):
            col.add(bp, f"corners must have the grid dimension {d}")
            return None
        if any(a >= b for a, b in zip(lo, hi)):
            col.add(bp, "lower corner must be below upper corner")
            return None
        if grid is not None and any(a < g - BOX_TOL or b > h + BOX_TOL for a, b, g, h
                                    in zip(lo, hi, grid.lower, grid.upper)):
            col.add(bp, "lies outside the grid")
            return None
        out.append([lo, hi])
    return out


def parse_config(text):
    """Parse and validate a JSON scenario; raises :class:`ConfigError`.

    Defaults: ``time.burn_in = slices // 2``, ``time.margin = 0``,
    ``time.substeps = 8``, ``grid.padding = 0``, ``homology.ring = "F2"``,
    ``homology.thickening_m = 1``, ``regions.N`` = whole grid.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"malformed JSON: {exc}"]) from None
    col = _Collector()
    if not isinstance(data, dict):
        raise ConfigError(["config must be a JSON object"])
    for key in sorted(set(data) - _TOP):
        col.add(key, "is not a recognized key")
    for key in ("system", "grid", "time"):
        if key not in data:
            col.add(key, "is required")

    sysd = col.section(data.get("system", {}), "system", ("name",))
    name = sysd.get("name")
    if name is not None and name not in CATALOG:
        col.add("system.name", f"must be one of {list(CATALOG)}")
    params = sysd.get("params", {})
    if not isinstance(params, dict):
        col.add("system.params", "must be an object")
        params = {}
    fd = col.section(sysd.get("forcing", {}), "system.forcing")
    kind = fd.get("kind", "none")
    if kind not in ("none", "sinusoid"):
        col.add("system.forcing.kind", "must be \"none\" or \"sinusoid\"")
    forcing = ForcingConfig(kind, col.number(fd, "amplitude", "system.forcing", 0.0, minimum=0),
                            col.number(fd, "frequency", "system.forcing", 1.0),
                            col.boolean(fd, "h_embedded", "system.forcing"))

    gd = col.section(data.get("grid", {}), "grid", ("lower", "upper", "divisions") if "grid" in data else ())
    lower, upper = col.vector(gd, "lower", "grid"), col.vector(gd, "upper", "grid")
    divisions = col.vector(gd, "divisions", "grid", integer=True)
    padding = col.number(gd, "padding", "grid", 0, integer=True, minimum=0)
    grid = None
    if lower and upper and divisions:
        try:
            grid = Grid(tuple(lower), tuple(upper), tuple(divisions))
        except PreconditionError as exc:
            col.add("grid", str(exc))

    td = col.section(data.get("time", {}), "time", ("tau", "slices") if "time" in data else ())
    tau = col.number(td, "tau", "time", positive=True)
    slices = col.number(td, "slices", "time", integer=True, minimum=1)
    burn_in = col.number(td, "burn_in", "time", integer=True, minimum=0)
    if slices is not None:
        if burn_in is None:
            burn_in = slices // 2
        elif burn_in >= slices:
            col.add("time.burn_in", "must be smaller than time.slices")
    margin = col.number(td, "margin", "time", 0, integer=True, minimum=0)
    substeps = col.number(td, "substeps", "time", 8, integer=True, minimum=1)

    nslices = slices + 1 if slices else 0
    regions = {}
    rd = col.section(data.get("regions", {}), "regions")
    for key in REGION_NAMES:
        if key in rd:
            regions[key] = _boxes(col, rd[key], f"regions.{key}", grid, nslices) if nslices else None

    hd = col.section(data.get("homology", {}), "homology")
    ring = hd.get("ring", "F2")
    if ring not in RINGS:
        col.add("homology.ring", f"must be one of {list(RINGS)}")
    m = col.number(hd, "thickening_m", "homology", 1, integer=True, minimum=0)

    sweep = None
    if "sweep" in data:
        sd = col.section(data["sweep"], "sweep", ("amplitudes",))
        amps = sd.get("amplitudes")
        if amps is not None:
            if not isinstance(amps, list) or not all(
                    isinstance(a, (int, float)) and not isinstance(a, bool) and a >= 0 for a in amps):
                col.add("sweep.amplitudes", "must be a list of nonnegative numbers")
            else:
                sweep = [float(a) for a in amps]

    od = col.section(data.get("output", {}), "output")
    path = od.get("path", "report.json")
    if not isinstance(path, str) or not path:
        col.add("output.path", "must be a nonempty string")
    output = OutputConfig(path, col.boolean(od, "emit_matrices", "output"),
                          col.boolean(od, "emit_witness_csv", "output"),
                          col.boolean(od, "emit_betti_csv", "output"))

    if name in CATALOG and not col.errors:
        try:
            spec = VectorFieldSpec(name, dict(params))
            if grid is not None and spec.dim != grid.dim:
                col.add("grid", f"dimension {grid.dim} does not match {name} (dimension {spec.dim})")
        except PreconditionError as exc:
            col.add("system.params", str(exc))

    if not col.errors and grid is not None:
        ua = regions.get("U_A")
        ur = regions.get("U_R")
        if ua is not None and ur is not None:
            both = ua.cells(grid, nslices) & ur.cells(grid, nslices)
            bad = [k for k in range(nslices) if both[k]]
            if bad:
                col.add("regions.U_R", f"overlaps regions.U_A at slice {bad[0]}; the attractor and "
                        "repeller neighbourhoods U_A and U_R must be disjoint")
        na = regions.get("N_A")
        if na is not None:
            nset = regions["N"].cells(grid, nslices) if regions.get("N") else \
                SlicedCubeSet.constant(grid.cells(), nslices)
            if not na.cells(grid, nslices).issubset(nset):
                col.add("regions.N_A", "must lie inside regions.N")

    if col.errors:
        raise ConfigError(col.errors)
    return ScenarioConfig(
        SystemConfig(name, dict(params), forcing),
        GridConfig(lower, upper, divisions, padding),
        TimeConfig(tau, slices, burn_in, margin, substeps),
        regions, HomologyConfig(ring, m), output, sweep)


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
