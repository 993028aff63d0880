"""Discrete Bayesian networks: variables, CPTs, roles, validation, serialization.

A network is an immutable bundle of variables and one CPT per variable.
CPTs come in three kinds: full tables, noisy-OR gates, and deterministic
maps with exception rows. Tables are stored row-major with the rightmost
parent varying fastest and child states innermost; everything downstream
(inference factors, the JSON file format) shares that layout.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Union

import networkx as nx

ROLES = ("target", "observation", "auxiliary")

ROW_SUM_TOL = 1e-9

# Partial map variable -> state. Used for evidence, explanations, and MAP
# configurations alike.
Assignment = Mapping[str, str]


@dataclass(frozen=True)
class Variable:
    name: str
    states: tuple[str, ...]
    role: str = "auxiliary"


@dataclass(frozen=True)
class TableCpt:
    child: str
    parents: tuple[str, ...]
    # Flat row-major probabilities: one row of child-state probabilities per
    # parent configuration, rightmost parent fastest.
    rows: tuple[float, ...]
    kind: str = field(default="table", init=False, repr=False)


@dataclass(frozen=True)
class NoisyOrTrigger:
    parent: str
    activating_state: str
    p: float


@dataclass(frozen=True)
class NoisyOrCpt:
    """Binary noisy-OR: each active parent independently causes the effect."""

    child: str
    parents: tuple[str, ...]
    effect_state: str
    triggers: tuple[NoisyOrTrigger, ...]
    leak: float = 0.0
    kind: str = field(default="noisy_or", init=False, repr=False)


@dataclass(frozen=True)
class DeterministicCpt:
    """Child state selected per parent configuration: a default plus exceptions.

    Each exception binds a full parent configuration (in parent order) to a
    child state.
    """

    child: str
    parents: tuple[str, ...]
    default_state: str
    exceptions: tuple[tuple[tuple[str, ...], str], ...] = ()
    kind: str = field(default="deterministic", init=False, repr=False)


Cpt = Union[TableCpt, NoisyOrCpt, DeterministicCpt]


@dataclass(frozen=True)
class Network:
    variables: tuple[Variable, ...]
    cpts: tuple[Cpt, ...]

    def __post_init__(self):
        object.__setattr__(self, "_vars", {v.name: v for v in self.variables})
        object.__setattr__(self, "_cpts", {c.child: c for c in self.cpts})

    def var(self, name: str) -> Variable:
        try:
            return self._vars[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def states(self, name: str) -> tuple[str, ...]:
        return self.var(name).states

    def card(self, name: str) -> int:
        return len(self.var(name).states)

    def cpt(self, name: str) -> Cpt:
        self.var(name)
        return self._cpts[name]

    def parents(self, name: str) -> tuple[str, ...]:
        return self.cpt(name).parents

    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def by_role(self, role: str) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables if v.role == role)

    @property
    def targets(self) -> tuple[str, ...]:
        return self.by_role("target")

    @property
    def observations(self) -> tuple[str, ...]:
        return self.by_role("observation")

    def graph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.names())
        for c in self.cpts:
            g.add_edges_from((p, c.child) for p in c.parents)
        return g


def parent_configs(network: Network, parents: tuple[str, ...]) -> Iterator[tuple[str, ...]]:
    """All parent configurations in table order (rightmost parent fastest)."""
    return itertools.product(*(network.states(p) for p in parents))


def check_assignment(network: Network, assignment: Assignment) -> None:
    for var, state in assignment.items():
        if state not in network.states(var):
            raise ValueError(f"{state!r} is not a state of {var!r}")


# ---------------------------------------------------------------------------
# validation

def validate(network: Network) -> list[str]:
    """Return all invariant violations; an empty list means the network is ok."""
    problems: list[str] = []
    seen = set()
    for v in network.variables:
        if v.name in seen:
            problems.append(f"duplicate variable {v.name!r}")
        seen.add(v.name)
        if len(v.states) < 2:
            problems.append(f"{v.name}: fewer than 2 states")
        if len(set(v.states)) != len(v.states):
            problems.append(f"{v.name}: duplicate state names")
        if v.role not in ROLES:
            problems.append(f"{v.name}: unknown role {v.role!r}")

    children = [c.child for c in network.cpts]
    if len(set(children)) != len(children):
        problems.append("multiple CPTs for one variable")
    for name in seen:
        if name not in network._cpts:
            problems.append(f"{name}: no CPT")

    for cpt in network.cpts:
        problems.extend(_check_cpt(network, cpt, seen))

    g = network.graph()
    if not nx.is_directed_acyclic_graph(g):
        cycle = nx.find_cycle(g)
        problems.append("cycle: " + " -> ".join(a for a, _ in cycle))
    return problems


def _check_cpt(network, cpt, known) -> list[str]:
    out = []
    where = f"CPT of {cpt.child}"
    if cpt.child not in known:
        return [f"{where}: unknown child"]
    for p in cpt.parents:
        if p not in known:
            out.append(f"{where}: unknown parent {p!r}")
    if len(set(cpt.parents)) != len(cpt.parents) or cpt.child in cpt.parents:
        out.append(f"{where}: bad parent list")
    if out:
        return out

    if isinstance(cpt, TableCpt):
        nconf = 1
        for p in cpt.parents:
            nconf *= network.card(p)
        width = network.card(cpt.child)
        if len(cpt.rows) != nconf * width:
            out.append(f"{where}: {len(cpt.rows)} entries, expected {nconf * width}")
            return out
        for i in range(nconf):
            row = cpt.rows[i * width:(i + 1) * width]
            if any(x < 0 or x > 1 for x in row):
                out.append(f"{where}: row {i} has entries outside [0,1]")
            s = sum(row)
            if abs(s - 1.0) > ROW_SUM_TOL:
                out.append(f"{where}: row {i} sum {s} != 1")
    elif isinstance(cpt, NoisyOrCpt):
        if network.card(cpt.child) != 2:
            out.append(f"{where}: noisy-OR child must be binary")
        if cpt.effect_state not in network.states(cpt.child):
            out.append(f"{where}: effect state {cpt.effect_state!r} unknown")
        if not 0 <= cpt.leak <= 1:
            out.append(f"{where}: leak {cpt.leak} outside [0,1]")
        seen_parents = set()
        for t in cpt.triggers:
            if t.parent not in cpt.parents:
                out.append(f"{where}: trigger on non-parent {t.parent!r}")
                continue
            if t.parent in seen_parents:
                out.append(f"{where}: two triggers on {t.parent!r}")
            seen_parents.add(t.parent)
            if t.activating_state not in network.states(t.parent):
                out.append(f"{where}: bad activating state for {t.parent!r}")
            if not 0 <= t.p <= 1:
                out.append(f"{where}: trigger p {t.p} outside [0,1]")
    else:
        if cpt.default_state not in network.states(cpt.child):
            out.append(f"{where}: default state {cpt.default_state!r} unknown")
        seen_conf = set()
        for conf, state in cpt.exceptions:
            if len(conf) != len(cpt.parents):
                out.append(f"{where}: exception does not bind every parent")
                continue
            for p, s in zip(cpt.parents, conf):
                if s not in network.states(p):
                    out.append(f"{where}: exception state {s!r} not a state of {p!r}")
            if state not in network.states(cpt.child):
                out.append(f"{where}: exception child state {state!r} unknown")
            if conf in seen_conf:
                out.append(f"{where}: parent configuration {conf} covered twice")
            seen_conf.add(conf)
    return out


# ---------------------------------------------------------------------------
# CPT expansion

def expand_cpt(network: Network, cpt: Cpt) -> TableCpt:
    """Lower a noisy-OR or deterministic CPT to an equivalent full table."""
    if isinstance(cpt, TableCpt):
        return cpt
    child_states = network.states(cpt.child)
    rows: list[float] = []
    if isinstance(cpt, NoisyOrCpt):
        effect = child_states.index(cpt.effect_state)
        by_parent = {t.parent: t for t in cpt.triggers}
        for conf in parent_configs(network, cpt.parents):
            q = 1.0 - cpt.leak
            for p, s in zip(cpt.parents, conf):
                t = by_parent.get(p)
                if t is not None and s == t.activating_state:
                    q *= 1.0 - t.p
            row = [0.0, 0.0]
            row[effect] = 1.0 - q
            row[1 - effect] = q
            rows.extend(row)
    else:
        chosen = dict(cpt.exceptions)
        for conf in parent_configs(network, cpt.parents):
            state = chosen.get(conf, cpt.default_state)
            rows.extend(1.0 if s == state else 0.0 for s in child_states)
    return TableCpt(child=cpt.child, parents=cpt.parents, rows=tuple(rows))


# ---------------------------------------------------------------------------
# serialization

def serialize_network(network: Network) -> str:
    doc = {
        "variables": [
            {"name": v.name, "states": list(v.states), "role": v.role}
            for v in network.variables
        ],
        "cpts": [_cpt_doc(c) for c in network.cpts],
    }
    return json.dumps(doc, indent=2)


def _cpt_doc(cpt):
    doc = {"child": cpt.child, "parents": list(cpt.parents), "kind": cpt.kind}
    if isinstance(cpt, TableCpt):
        doc["rows"] = list(cpt.rows)
    elif isinstance(cpt, NoisyOrCpt):
        doc["effect_state"] = cpt.effect_state
        doc["triggers"] = [
            {"parent": t.parent, "activating_state": t.activating_state, "p": t.p}
            for t in cpt.triggers
        ]
        doc["leak"] = cpt.leak
    else:
        doc["default_state"] = cpt.default_state
        doc["exceptions"] = [
            {"when": dict(zip(cpt.parents, conf)), "then": state}
            for conf, state in cpt.exceptions
        ]
    return doc


def parse_network(text: str) -> Network:
    """Parse the JSON network format; raises ValueError naming the bad field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ValueError("top level must be an object")
    raw_vars = doc.get("variables")
    if not raw_vars:
        raise ValueError("empty or missing 'variables'")
    variables = []
    for i, rv in enumerate(raw_vars):
        try:
            variables.append(Variable(
                name=rv["name"],
                states=tuple(rv["states"]),
                role=rv.get("role", "auxiliary"),
            ))
        except (KeyError, TypeError) as e:
            raise ValueError(f"variables[{i}]: missing field {e}") from None
    cpts = []
    for i, rc in enumerate(doc.get("cpts", [])):
        try:
            cpts.append(_parse_cpt(rc))
        except (KeyError, TypeError) as e:
            raise ValueError(f"cpts[{i}]: bad or missing field {e}") from None
    net = Network(variables=tuple(variables), cpts=tuple(cpts))
    problems = validate(net)
    if problems:
        raise ValueError("; ".join(problems))
    return net


def _parse_cpt(rc) -> Cpt:
    child = rc["child"]
    parents = tuple(rc["parents"])
    kind = rc["kind"]
    if kind == "table":
        return TableCpt(child=child, parents=parents, rows=tuple(float(x) for x in rc["rows"]))
    if kind == "noisy_or":
        triggers = tuple(
            NoisyOrTrigger(t["parent"], t["activating_state"], float(t["p"]))
            for t in rc["triggers"]
        )
        return NoisyOrCpt(child=child, parents=parents,
                          effect_state=rc["effect_state"], triggers=triggers,
                          leak=float(rc.get("leak", 0.0)))
    if kind == "deterministic":
        exceptions = tuple(
            (tuple(ex["when"][p] for p in parents), ex["then"])
            for ex in rc.get("exceptions", [])
        )
        return DeterministicCpt(child=child, parents=parents,
                                default_state=rc["default_state"],
                                exceptions=exceptions)
    raise ValueError(f"unknown CPT kind {kind!r}")


def load_network(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


# ---------------------------------------------------------------------------
# graph queries

def d_separated(network: Network, a, b, z) -> bool:
    """True iff every path between variable sets a and b is blocked by z."""
    a, b, z = set(a), set(b), set(z)
    for name in a | b | z:
        network.var(name)
    return nx.is_d_separator(network.graph(), a, b, z)
