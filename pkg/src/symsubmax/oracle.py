"""Value oracles for non-negative symmetric submodular set functions.

The ground set is {0, ..., n-1}. Three concrete oracle kinds are provided:
weighted graph cuts, weighted hypergraph cuts, and explicit value tables
(indexed by bitmask, subset S -> sum(2**i for i in S)).

Every call to :meth:`Oracle.eval` counts as one query. Marginal values are
computed from a caller-supplied cached base value so that one marginal costs
exactly one query; the oracle never caches function values on the caller's
behalf.
"""

from __future__ import annotations

import json
import math
import threading
from dataclasses import dataclass, field

import numpy as np

# Lazy full-table memoization kicks in below this ground-set size; 2^16
# doubles is small and turns eval into an O(1) lookup.
_TABLE_CACHE_MAX_N = 16

# Hard cap for materializing all 2^n values (brute force, validation).
TABLE_MAX_N = 24

EQ_TOL = 1e-9


class OracleError(Exception):
    pass


class InvalidSetError(OracleError):
    """A set argument contains ids outside 0..n-1 or violates a precondition."""


class MalformedInstanceError(OracleError):
    """Instance payload is structurally invalid (bad table length, bad edge...)."""


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    edges: tuple  # of (u, v, w)

    def __post_init__(self):
        for u, v, w in self.edges:
            if u == v:
                raise MalformedInstanceError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise MalformedInstanceError(f"edge ({u},{v}) outside 0..{self.n - 1}")
            if w < 0:
                raise MalformedInstanceError(f"negative weight {w} on edge ({u},{v})")


@dataclass(frozen=True)
class WeightedHypergraph:
    n: int
    hyperedges: tuple  # of (frozenset of members, w)

    def __post_init__(self):
        for members, w in self.hyperedges:
            if len(members) < 2:
                raise MalformedInstanceError("hyperedge needs at least 2 members")
            if not all(0 <= u < self.n for u in members):
                raise MalformedInstanceError("hyperedge member outside ground set")
            if w < 0:
                raise MalformedInstanceError(f"negative hyperedge weight {w}")


def _mask_of(S, n):
    mask = 0
    for u in S:
        u = int(u)
        if not 0 <= u < n:
            raise InvalidSetError(f"element {u} outside ground set 0..{n - 1}")
        mask |= 1 << u
    return mask


def _set_of(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


class Oracle:
    """Counting value oracle over a fixed payload.

    The payload is immutable after construction; the query counter is the
    only mutable state and is guarded by a lock so concurrent evals never
    lose counts.
    """

    def __init__(self, kind, n, payload):
        self.kind = kind
        self.n = n
        self._payload = payload
        self._queries = 0
        self._lock = threading.Lock()
        self._table = None
        if kind == "graph-cut":
            g = payload
            self._eu = np.array([e[0] for e in g.edges], dtype=np.int64)
            self._ev = np.array([e[1] for e in g.edges], dtype=np.int64)
            self._ew = np.array([e[2] for e in g.edges], dtype=np.float64)
        elif kind == "hypergraph-cut":
            hg = payload
            self._hmasks = [sum(1 << u for u in members) for members, _ in hg.hyperedges]
            self._hsizes = [len(members) for members, _ in hg.hyperedges]
            self._hw = [float(w) for _, w in hg.hyperedges]
        elif kind == "table":
            values = payload
            if len(values) != 1 << n:
                raise MalformedInstanceError(
                    f"table has {len(values)} entries, expected {1 << n}"
                )
            self._table = np.asarray(values, dtype=np.float64)
        else:
            raise MalformedInstanceError(f"unknown oracle kind {kind!r}")

    # -- query accounting ---------------------------------------------------

    @property
    def query_count(self):
        return self._queries

    def reset_queries(self):
        with self._lock:
            self._queries = 0

    # -- evaluation ----------------------------------------------------------

    def eval(self, S):
        """Return f(S), counting one query."""
        mask = _mask_of(S, self.n)
        with self._lock:
            self._queries += 1
        return self._value(mask)

    def eval_uncounted(self, S):
        """f(S) without touching the counter (validators, exact baselines)."""
        return self._value(_mask_of(S, self.n))

    def marginal(self, u, S, fS):
        """Return f(u | S) = f(S + u) - fS using exactly one new query.

        The caller supplies the cached value fS = f(S); this contract is what
        keeps solver query counts tight.
        """
        u = int(u)
        mask = _mask_of(S, self.n)
        if not 0 <= u < self.n:
            raise InvalidSetError(f"element {u} outside ground set")
        if mask & (1 << u):
            raise InvalidSetError(f"element {u} already in the set")
        with self._lock:
            self._queries += 1
        return self._value(mask | (1 << u)) - fS

    def _value(self, mask):
        if self._table is not None:
            return float(self._table[mask])
        if self.n <= _TABLE_CACHE_MAX_N:
            self._table = self._build_table()
            return float(self._table[mask])
        return self._value_direct(mask)

    def _value_direct(self, mask):
        if self.kind == "graph-cut":
            # pure-int arithmetic: masks may exceed 64 bits when n is large
            total = 0.0
            for u, v, w in zip(self._eu, self._ev, self._ew):
                if (mask >> int(u)) & 1 != (mask >> int(v)) & 1:
                    total += w
            return total
        # hypergraph-cut
        total = 0.0
        for hm, sz, w in zip(self._hmasks, self._hsizes, self._hw):
            inter = (mask & hm).bit_count()
            if 0 < inter < sz:
                total += w
        return total

    def value_table(self):
        """All 2^n values as a float array indexed by subset bitmask.

        Never counts queries. Refuses n > TABLE_MAX_N.
        """
        if self.n > TABLE_MAX_N:
            raise InvalidSetError(f"n={self.n} too large for full table (cap {TABLE_MAX_N})")
        if self._table is None:
            self._table = self._build_table()
        return self._table

    def _build_table(self):
        size = 1 << self.n
        masks = np.arange(size, dtype=np.int64)
        vals = np.zeros(size, dtype=np.float64)
        if self.kind == "graph-cut":
            for u, v, w in zip(self._eu, self._ev, self._ew):
                vals += w * (((masks >> int(u)) ^ (masks >> int(v))) & 1)
        else:
            for hm, sz, w in zip(self._hmasks, self._hsizes, self._hw):
                inter = np.bitwise_count(masks & hm)
                vals += w * ((inter > 0) & (inter < sz))
        return vals


def graph_cut_oracle(graph):
    return Oracle("graph-cut", graph.n, graph)


def hypergraph_cut_oracle(hypergraph):
    return Oracle("hypergraph-cut", hypergraph.n, hypergraph)


def table_oracle(n, values):
    return Oracle("table", n, values)


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    valid: bool
    mode: str
    checks: int
    violations: list = field(default_factory=list)

    def to_dict(self):
        return {
            "valid": self.valid,
            "mode": self.mode,
            "checks": self.checks,
            "violations": self.violations,
        }


def _record(report, kind, **data):
    report.valid = False
    report.violations.append({"kind": kind, **data})


def validate(oracle, mode="exhaustive", trials=1000, seed=0, tol=EQ_TOL):
    """Check non-negativity, symmetry and submodularity of an oracle.

    Exhaustive mode (n <= 20) checks every subset for non-negativity and
    symmetry, and every (S, u, v) local submodularity condition
    f(S+u) + f(S+v) >= f(S+u+v) + f(S), which is equivalent to full
    submodularity. Sampled mode checks random (S, T, u) diminishing-returns
    triples plus symmetry/non-negativity on the sampled sets.

    Violations are report content, never exceptions.
    """
    n = oracle.n
    if mode == "exhaustive":
        if n > 20:
            raise InvalidSetError(f"exhaustive validation capped at n=20, got n={n}")
        return _validate_exhaustive(oracle, tol)
    return _validate_sampled(oracle, trials, seed, tol)


def _validate_exhaustive(oracle, tol):
    n = oracle.n
    vals = oracle.value_table()
    full = (1 << n) - 1
    report = ValidationReport(valid=True, mode="exhaustive", checks=0)

    bad = np.nonzero(vals < -tol)[0]
    for m in bad[:50]:
        _record(report, "non-negativity", S=_set_of(int(m)), value=float(vals[m]))
    report.checks += len(vals)

    comp = vals[full ^ np.arange(len(vals))]
    bad = np.nonzero(np.abs(vals - comp) > tol)[0]
    for m in bad[:50]:
        _record(
            report,
            "symmetry",
            S=_set_of(int(m)),
            value=float(vals[m]),
            complement_value=float(comp[m]),
        )
    report.checks += len(vals)

    masks = np.arange(len(vals), dtype=np.int64)
    for u in range(n):
        bu = 1 << u
        for v in range(u + 1, n):
            bv = 1 << v
            base = masks[(masks & (bu | bv)) == 0]
            lhs = vals[base | bu] + vals[base | bv]
            rhs = vals[base | bu | bv] + vals[base]
            bad = np.nonzero(lhs < rhs - tol)[0]
            for i in bad[:5]:
                m = int(base[i])
                _record(
                    report,
                    "submodularity",
                    S=_set_of(m),
                    u=u,
                    v=v,
                    deficit=float(rhs[i] - lhs[i]),
                )
            report.checks += len(base)
    return report


def _validate_sampled(oracle, trials, seed, tol):
    import random

    rng = random.Random(seed)
    n = oracle.n
    full = set(range(n))
    report = ValidationReport(valid=True, mode=f"sampled({trials},{seed})", checks=0)
    for _ in range(trials):
        T = {u for u in range(n) if rng.random() < 0.5}
        S = {u for u in T if rng.random() < 0.5}
        fT = oracle.eval_uncounted(T)
        fS = oracle.eval_uncounted(S)
        if fT < -tol:
            _record(report, "non-negativity", S=sorted(T), value=fT)
        fTc = oracle.eval_uncounted(full - T)
        if abs(fT - fTc) > tol:
            _record(report, "symmetry", S=sorted(T), value=fT, complement_value=fTc)
        outside = sorted(full - T)
        if outside:
            u = rng.choice(outside)
            gS = oracle.eval_uncounted(S | {u}) - fS
            gT = oracle.eval_uncounted(T | {u}) - fT
            if gS < gT - tol:
                _record(
                    report,
                    "diminishing-returns",
                    S=sorted(S),
                    T=sorted(T),
                    u=u,
                    deficit=gT - gS,
                )
        report.checks += 1
    return report


# -- instance files -----------------------------------------------------------


def parse_instance(obj):
    """Build an oracle from a parsed instance object (see file format docs)."""
    try:
        kind = obj["type"]
        n = int(obj["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInstanceError(f"bad instance object: {exc}") from exc
    if n < 0:
        raise MalformedInstanceError(f"n must be >= 0, got {n}")
    if kind == "graph-cut":
        edges = tuple((int(u), int(v), float(w)) for u, v, w in obj["edges"])
        return graph_cut_oracle(WeightedGraph(n, edges))
    if kind == "hypergraph-cut":
        hyperedges = tuple(
            (frozenset(int(u) for u in e["members"]), float(e["w"])) for e in obj["edges"]
        )
        return hypergraph_cut_oracle(WeightedHypergraph(n, hyperedges))
    if kind == "table":
        return table_oracle(n, [float(v) for v in obj["values"]])
    raise MalformedInstanceError(f"unknown instance type {kind!r}")


def instance_to_dict(oracle):
    if oracle.kind == "graph-cut":
        g = oracle._payload
        return {
            "type": "graph-cut",
            "n": g.n,
            "edges": [[u, v, w] for u, v, w in g.edges],
        }
    if oracle.kind == "hypergraph-cut":
        hg = oracle._payload
        return {
            "type": "hypergraph-cut",
            "n": hg.n,
            "edges": [{"members": sorted(m), "w": w} for m, w in hg.hyperedges],
        }
    return {"type": "table", "n": oracle.n, "values": list(map(float, oracle._payload))}


def load_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(json.load(fh))


def save_instance(oracle, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance_to_dict(oracle), fh, indent=2, sort_keys=True)
        fh.write("\n")
