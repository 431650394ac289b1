"""TOML scenario files for ``graphsync simulate``.

Example::

    graph = "path:3"
    field = "vdp:alpha=2,delta=1"
    subspace = "a,0,-a"
    x0 = "generic"          # or "random:SEED", or a flat list of n*k numbers
    dt = 1e-3
    steps = 10000
    every = 10              # CSV sampling stride
    csv = "p3_antisync.csv"

``field`` may also be a table: ``[field]`` with ``family`` and parameters
(``g``/``h`` coefficient lists for ``custom_poly``).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..graph import Graph, GraphError, build_graph
from ..partitions import DescriptorError, SubspaceDescriptor, full_space, parse_descriptor
from .fields import FieldSpecError, NetworkField, VectorFieldSpec, classify_field, parse_field
from .integrate import SubspaceCoordinates, Trajectory, generic_reduced_state, integrate

KEYS = {"graph", "field", "subspace", "x0", "dt", "steps", "every", "csv"}
FAMILY_ALIASES = {"vdp": "vanderpol", "cubic": "cubic_scalar", "poly": "custom_poly"}


class ScenarioError(ValueError):
    pass


@dataclass
class Scenario:
    graph: Graph
    field: VectorFieldSpec
    subspace: SubspaceDescriptor
    x0: str | list = "generic"
    dt: float = 1e-3
    steps: int = 1000
    every: int = 1
    csv: str | None = None


def _field_from_table(tab: dict) -> VectorFieldSpec:
    tab = dict(tab)
    fam = tab.pop("family", None)
    if fam is None:
        raise ScenarioError("[field] table needs a family")
    fam = FAMILY_ALIASES.get(fam, fam)
    if fam == "vanderpol" and "epsilon" in tab:
        tab["eps"] = tab.pop("epsilon")
    return VectorFieldSpec(fam, tab)


def scenario_from_dict(d: dict) -> Scenario:
    bad = set(d) - KEYS
    if bad:
        raise ScenarioError(f"unknown keys {sorted(bad)}")
    for key in ("graph", "field"):
        if key not in d:
            raise ScenarioError(f"missing required key {key!r}")
    try:
        G = build_graph(str(d["graph"]))
        fd = d["field"]
        f = _field_from_table(fd) if isinstance(fd, dict) else parse_field(str(fd))
        W = parse_descriptor(str(d["subspace"]), G.n) if "subspace" in d else full_space(G.n)
    except (GraphError, FieldSpecError, DescriptorError) as e:
        raise ScenarioError(str(e)) from None
    dt = d.get("dt", 1e-3)
    steps = d.get("steps", 1000)
    every = d.get("every", 1)
    if not isinstance(dt, (int, float)) or not math.isfinite(dt) or dt <= 0:
        raise ScenarioError("dt must be a positive number")
    if not isinstance(steps, int) or steps < 0:
        raise ScenarioError("steps must be a nonnegative integer")
    if not isinstance(every, int) or every < 1:
        raise ScenarioError("every must be a positive integer")
    x0 = d.get("x0", "generic")
    if isinstance(x0, list):
        if len(x0) != G.n * f.k:
            raise ScenarioError(f"x0 has {len(x0)} values, expected {G.n * f.k}")
    elif not (x0 == "generic" or str(x0).startswith("random:")):
        raise ScenarioError("x0 must be 'generic', 'random:SEED' or a list of numbers")
    csv = d.get("csv")
    return Scenario(G, f, W, x0, float(dt), steps, every, None if csv is None else str(csv))


def load_scenario(path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ScenarioError(f"cannot read {path}: {e.strerror}") from None
    try:
        d = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ScenarioError(f"bad TOML: {e}") from None
    return scenario_from_dict(d)


def initial_state(sc: Scenario) -> np.ndarray:
    c = SubspaceCoordinates(sc.subspace)
    r, k = sc.subspace.free_dim, sc.field.k
    if isinstance(sc.x0, list):
        try:
            x = np.array(sc.x0, dtype=float).reshape(sc.graph.n, k)
        except (TypeError, ValueError):
            raise ScenarioError("x0 entries must be numbers") from None
        return x
    if sc.x0 == "generic":
        return c.lift(generic_reduced_state(r, k))
    try:
        seed = int(str(sc.x0).split(":", 1)[1])
    except ValueError:
        raise ScenarioError(f"bad random seed in {sc.x0!r}") from None
    return c.lift(np.random.default_rng(seed).uniform(-1.0, 1.0, size=(r, k)))


@dataclass
class SimulationResult:
    scenario: Scenario
    trajectory: Trajectory

    @property
    def graph(self) -> Graph:
        return self.scenario.graph

    @property
    def field(self) -> VectorFieldSpec:
        return self.scenario.field

    def summary(self) -> dict:
        t = self.trajectory
        return {
            "graph": self.graph.name,
            "subspace": self.scenario.subspace.render(),
            "field_class": classify_field(self.field),
            "max_residual": t.max_residual,
            "final_residual": float(t.residuals[-1]) if t.residuals is not None else 0.0,
            "diverged": t.diverged,
            "steps": t.steps,
        }


def run_scenario(sc: Scenario) -> SimulationResult:
    x0 = initial_state(sc)
    if not np.all(np.isfinite(x0)):
        raise ScenarioError("initial state is not finite")
    c = SubspaceCoordinates(sc.subspace)
    traj = integrate(NetworkField(sc.graph, sc.field), x0, sc.dt, sc.steps, monitor=c.residual, every=sc.every)
    return SimulationResult(sc, traj)
