"""JSON/DOT serialization with deterministic output."""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import networkx as nx


def jsonable(obj):
    if isinstance(obj, dict):
        return {_key(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in obj]
        return sorted(items, key=json.dumps) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    return obj


def _key(k):
    if isinstance(k, str):
        return k
    if isinstance(k, tuple):
        return ",".join(map(str, k))
    return str(k)


def dumps(obj):
    return json.dumps(jsonable(obj), sort_keys=True, indent=2)


def to_dot(G, label=str):
    """DOT text for a networkx graph with deterministic node order."""
    directed = isinstance(G, nx.DiGraph)
    nodes = sorted(G.nodes, key=lambda v: label(v))
    idx = {v: i for i, v in enumerate(nodes)}
    lines = ["digraph G {" if directed else "graph G {"]
    for v in nodes:
        lines.append(f'  n{idx[v]} [label="{label(v)}"];')
    arrow = "->" if directed else "--"
    edges = sorted((idx[u], idx[v]) for u, v in G.edges)
    lines += [f"  n{a} {arrow} n{b};" for a, b in edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
