"""Graph file formats, JSON/CSV artifacts and the run manifest."""

from __future__ import annotations

import csv
import io
import json
import math
import re
import shlex
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import InputError
from .graph import Cut, Graph
from .localspectral import DualCertificate, Solution
from .partition import ProfilePoint

SCHEMA_VERSION = 1
PROFILE_HEADER = ("gamma", "c", "volume", "conductance", "lower_bound_lambda", "k_gamma", "status")


def _build(labels, edges, largest_component: bool, unweighted: bool) -> Graph:
    if unweighted:
        edges = [(u, v, 1.0) for u, v in sorted({(min(u, v), max(u, v)) for u, v, _ in edges})]
    n = len(labels)
    if largest_component and n > 1:
        u = np.array([e[0] for e in edges], dtype=np.int64)
        v = np.array([e[1] for e in edges], dtype=np.int64)
        adj = sp.coo_matrix((np.ones(len(u)), (u, v)), shape=(n, n))
        _, comp = connected_components(adj, directed=False)
        keep = np.bincount(comp).argmax()
        new_id = np.full(n, -1)
        kept = np.flatnonzero(comp == keep)
        new_id[kept] = np.arange(len(kept))
        labels = [labels[i] for i in kept]
        edges = [(int(new_id[a]), int(new_id[b]), w) for a, b, w in edges if comp[a] == keep]
    return Graph(len(labels), edges, labels=labels)


def _weight(token: str, where: str) -> float:
    try:
        w = float(token)
    except ValueError:
        raise InputError(f"bad weight {token!r} at {where}") from None
    if not math.isfinite(w) or w <= 0:
        raise InputError(f"non-positive or non-finite weight {token} at {where}")
    return w


def parse_edge_list(text: str, largest_component: bool = False, unweighted: bool = False) -> Graph:
    """Lines ``u v [w]``; ``#`` starts a comment. Labels are arbitrary tokens,
    numbered in order of first appearance. Repeated edges add their weights."""
    index: dict[str, int] = {}
    labels: list[str] = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise InputError(f"line {lineno}: expected 'u v [w]', got {raw.strip()!r}")
        a, b = parts[0], parts[1]
        if a == b:
            raise InputError(f"self-loop at line {lineno}")
        w = _weight(parts[2], f"line {lineno}") if len(parts) == 3 else 1.0
        ids = []
        for lab in (a, b):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
            ids.append(index[lab])
        edges.append((ids[0], ids[1], w))
    if not labels:
        raise InputError("edge list is empty")
    return _build(labels, edges, largest_component, unweighted)


_SECTION = re.compile(r"^\*(\w+)", re.IGNORECASE)


def parse_pajek(text: str, largest_component: bool = False, unweighted: bool = False) -> Graph:
    """Pajek subset: ``*Vertices n`` (optional ``id "name" ...`` lines) then
    ``*Edges`` with 1-based ``u v [w]`` rows. Labels are the vertex numbers."""
    n = None
    section = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        m = _SECTION.match(line)
        if m:
            key = m.group(1).lower()
            if key == "vertices":
                parts = line.split()
                if len(parts) < 2:
                    raise InputError(f"line {lineno}: *Vertices needs a count")
                try:
                    n = int(parts[1])
                except ValueError:
                    raise InputError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
                if n < 1:
                    raise InputError(f"line {lineno}: vertex count must be positive")
                section = "vertices"
            elif key in ("arcs", "arcslist"):
                raise InputError(f"line {lineno}: directed graphs unsupported (*{m.group(1)})")
            elif key == "edges":
                if n is None:
                    raise InputError(f"line {lineno}: *Edges before *Vertices")
                section = "edges"
            elif key == "network":
                section = None
            else:
                raise InputError(f"line {lineno}: unsupported section *{m.group(1)}")
            continue
        if section == "vertices":
            continue
        if section != "edges":
            raise InputError(f"line {lineno}: data outside a *Vertices or *Edges section")
        parts = line.split()
        if len(parts) < 2:
            raise InputError(f"line {lineno}: expected 'u v [w]'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"line {lineno}: vertex ids must be integers") from None
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputError(f"line {lineno}: vertex id out of range 1..{n}")
        if u == v:
            raise InputError(f"self-loop at line {lineno}")
        w = _weight(parts[2], f"line {lineno}") if len(parts) >= 3 else 1.0
        edges.append((u - 1, v - 1, w))
    if n is None:
        raise InputError("missing *Vertices header")
    return _build([str(i) for i in range(1, n + 1)], edges, largest_component, unweighted)


def _format_float(x: float) -> str:
    return repr(float(x))


def write_edge_list(graph: Graph) -> str:
    """Edge-list text that parses back to the same graph."""
    out = []
    for u, v, w in graph.edges:
        out.append(f"{graph.labels[u]} {graph.labels[v]} {_format_float(w)}\n")
    return "".join(out)


def detect_format(path) -> str:
    return "pajek" if Path(path).suffix.lower() in (".net", ".paj", ".pajek") else "edgelist"


def load_graph(path, fmt: str = "auto", largest_component: bool = False, unweighted: bool = False) -> Graph:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise InputError(f"cannot read graph file {path}: {exc}") from None
    if fmt == "auto":
        fmt = detect_format(path)
    if fmt == "pajek":
        return parse_pajek(text, largest_component, unweighted)
    if fmt == "edgelist":
        return parse_edge_list(text, largest_component, unweighted)
    raise InputError(f"unknown graph format {fmt!r}")


@dataclass(frozen=True)
class RunManifest:
    """What was run, with enough detail to run it again."""

    command: str
    graph_path: str | None
    seed_spec: str | None
    parameters: dict = field(default_factory=dict)
    version: str = ""
    argv: tuple = ()

    def to_dict(self) -> dict:
        d = asdict(self)
        d["argv"] = list(self.argv)
        return d

    def command_line(self) -> str:
        return shlex.join(["localspec", *self.argv])


def _finite(x):
    x = float(x)
    return x if math.isfinite(x) else None


def cut_to_dict(graph: Graph, cut: Cut) -> dict:
    members = sorted(cut.members)
    return {
        "members": [graph.labels[i] for i in members],
        "size": len(members),
        "volume": cut.volume,
        "cut_weight": cut.cut_weight,
        "conductance": cut.conductance,
        "min_volume_conductance": cut.min_volume_conductance,
        "graph_volume": cut.graph_volume,
    }


def solution_to_dict(graph: Graph, sol: Solution, include_vector: bool = True) -> dict:
    d = {
        "gamma": sol.gamma,
        "kappa_target": sol.kappa_target,
        "kappa_achieved": sol.kappa_achieved,
        "lambda": sol.lambda_value,
        "k_gamma": _finite(sol.k_gamma),
        "active": sol.active,
        "residual": sol.residual,
        "iterations": sol.iterations,
        "bisection_steps": sol.bisection_steps,
    }
    if not sol.active:
        d["note"] = "constraint inactive"
    if include_vector:
        d["labels"] = list(graph.labels)
        d["x"] = [float(v) for v in sol.x]
    return d


def certificate_to_dict(cert: DualCertificate, tol: float = 1e-6) -> dict:
    return {
        "alpha": cert.alpha,
        "beta": cert.beta,
        "min_eigenvalue": cert.min_eigenvalue,
        "objective": cert.objective,
        "active": cert.active,
        "feasible": cert.is_feasible(tol),
    }


def dumps_artifact(manifest: RunManifest, payload: dict) -> str:
    doc = {"schema": SCHEMA_VERSION, "manifest": manifest.to_dict(), **payload}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _csv_float(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return repr(x) if math.isfinite(x) else ""


def profile_to_csv(points: list[ProfilePoint]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PROFILE_HEADER)
    for p in points:
        cut = p.cut
        w.writerow(
            [
                _csv_float(p.gamma),
                _csv_float(p.size_factor),
                _csv_float(cut.volume if cut else None),
                _csv_float(cut.conductance if cut else None),
                _csv_float(p.lower_bound_lambda if cut else None),
                _csv_float(p.lower_bound_volume if cut else None),
                p.status,
            ]
        )
    return buf.getvalue()


def read_profile_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
