"""Exact probabilistic queries: marginal, conditional, likelihood, and do-queries.

Production inference is variable elimination with a min-fill ordering; the
brute-force joint is kept as a testing oracle. All information measures are
in nats.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import Assignment, Network, TableCpt, check_assignment, expand_cpt


class ImpossibleEvidenceError(ValueError):
    """Conditioning evidence has probability zero."""


@dataclass
class Factor:
    """Nonnegative table over an ordered variable scope.

    One array axis per scope variable, C order, so the flat view is row-major
    with the rightmost scope variable varying fastest.
    """

    scope: tuple[str, ...]
    values: np.ndarray

    def item(self) -> float:
        if self.scope:
            raise ValueError("not a scalar factor")
        return float(self.values)


def cpt_factor(network: Network, name: str) -> Factor:
    """CPT as a factor with scope parents + (child,)."""
    cpt = expand_cpt(network, network.cpt(name))
    shape = [network.card(p) for p in cpt.parents] + [network.card(name)]
    values = np.asarray(cpt.rows, dtype=float).reshape(shape)
    return Factor(scope=cpt.parents + (name,), values=values)


def multiply(a: Factor, b: Factor) -> Factor:
    scope = a.scope + tuple(v for v in b.scope if v not in a.scope)
    return Factor(scope, _aligned(a, scope) * _aligned(b, scope))


def _aligned(f: Factor, scope: tuple[str, ...]) -> np.ndarray:
    pos = {v: i for i, v in enumerate(f.scope)}
    order = [pos[v] for v in scope if v in pos]
    vals = np.transpose(f.values, order)
    shape = [f.values.shape[pos[v]] if v in pos else 1 for v in scope]
    return vals.reshape(shape)


def sum_out(f: Factor, var: str) -> Factor:
    i = f.scope.index(var)
    return Factor(f.scope[:i] + f.scope[i + 1:], f.values.sum(axis=i))


def restrict(f: Factor, var: str, index: int) -> Factor:
    i = f.scope.index(var)
    return Factor(f.scope[:i] + f.scope[i + 1:], np.take(f.values, index, axis=i))


def _minfill_order(scopes: list[tuple[str, ...]], keep: set[str]) -> list[str]:
    """Elimination order by min-fill, lexicographic tie-break."""
    adj: dict[str, set[str]] = {}
    for sc in scopes:
        for v in sc:
            adj.setdefault(v, set()).update(u for u in sc if u != v)
    todo = set(adj) - keep
    order = []
    while todo:
        def fill(v):
            ns = [u for u in adj[v]]
            return sum(1 for i in range(len(ns)) for j in range(i + 1, len(ns))
                       if ns[j] not in adj[ns[i]])
        v = min(todo, key=lambda u: (fill(u), u))
        ns = adj.pop(v)
        for u in ns:
            adj[u].discard(v)
        for u in ns:
            for w in ns:
                if u != w:
                    adj[u].add(w)
        todo.remove(v)
        order.append(v)
    return order


def query(network: Network, variables: tuple[str, ...] = (), condition: Assignment | None = None) -> Factor:
    """Unnormalized factor: values[config] = P(variables=config, condition).

    With empty `variables` the result is a scalar factor holding P(condition).
    """
    condition = dict(condition or {})
    check_assignment(network, condition)
    for v in variables:
        network.var(v)
        if v in condition:
            raise ValueError(f"{v!r} is both queried and conditioned on")

    factors = []
    for name in network.names():
        f = cpt_factor(network, name)
        for var, state in condition.items():
            if var in f.scope:
                f = restrict(f, var, network.states(var).index(state))
        factors.append(f)

    for v in _minfill_order([f.scope for f in factors], set(variables)):
        bucket = [f for f in factors if v in f.scope]
        factors = [f for f in factors if v not in f.scope]
        prod = bucket[0]
        for f in bucket[1:]:
            prod = multiply(prod, f)
        factors.append(sum_out(prod, v))

    out = factors[0]
    for f in factors[1:]:
        out = multiply(out, f)
    # align scope to the requested variable order
    if out.scope != tuple(variables):
        pos = {v: i for i, v in enumerate(out.scope)}
        out = Factor(tuple(variables),
                     np.transpose(out.values, [pos[v] for v in variables]))
    return out


def prob(network: Network, assignment: Assignment, evidence: Assignment | None = None) -> float:
    """Exact P(assignment | evidence); prior probability when evidence is empty."""
    assignment = dict(assignment)
    evidence = dict(evidence or {})
    merged = _merge(assignment, evidence)
    if not evidence:
        return query(network, (), merged).item()
    pe = query(network, (), evidence).item()
    if pe <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {evidence} has probability 0")
    return query(network, (), merged).item() / pe


def likelihood(network: Network, evidence: Assignment, assignment: Assignment) -> float:
    """Exact P(evidence | assignment)."""
    merged = _merge(dict(evidence), dict(assignment))
    px = query(network, (), dict(assignment)).item()
    if px <= 0.0:
        raise ValueError(f"conditioning assignment {dict(assignment)} has probability 0")
    return query(network, (), merged).item() / px


def _merge(a: dict, b: dict) -> dict:
    for var, state in b.items():
        if a.get(var, state) != state:
            raise ValueError(f"{var!r} bound to both {a[var]!r} and {state!r}")
    return {**a, **b}


def marginal(network: Network, variables: tuple[str, ...], evidence: Assignment | None = None) -> Factor:
    """Normalized posterior factor over `variables` given evidence."""
    f = query(network, variables, evidence)
    z = f.values.sum()
    if z <= 0.0:
        raise ImpossibleEvidenceError(f"evidence {dict(evidence or {})} has probability 0")
    return Factor(f.scope, f.values / z)


def mutilate(network: Network, intervention: Assignment) -> Network:
    """Graph surgery for do-queries: point-mass CPTs, incoming arcs severed."""
    check_assignment(network, intervention)
    cpts = []
    for cpt in network.cpts:
        if cpt.child in intervention:
            states = network.states(cpt.child)
            row = tuple(1.0 if s == intervention[cpt.child] else 0.0 for s in states)
            cpts.append(TableCpt(child=cpt.child, parents=(), rows=row))
        else:
            cpts.append(cpt)
    return Network(variables=network.variables, cpts=tuple(cpts))


def prob_do(network: Network, event: Assignment, evidence: Assignment | None,
            intervention: Assignment) -> float:
    """P(event | evidence) in the mutilated network.

    Querying an intervened variable is allowed (its post-surgery CPT is a
    point mass, so the answer is 1 or 0); evidence may not mention it.
    """
    for v in evidence or {}:
        if v in intervention:
            raise ValueError(f"{v!r} is both intervened on and observed")
    return prob(mutilate(network, intervention), event, evidence)


def brute_force_joint(network: Network, cap: int = 2 ** 24) -> Factor:
    """Full joint over all variables (declared order) by chain-rule product."""
    size = 1
    for v in network.variables:
        size *= len(v.states)
    if size > cap:
        raise ValueError(f"joint size {size} exceeds cap {cap}")
    out = Factor((), np.float64(1.0))
    for name in network.names():
        out = multiply(out, cpt_factor(network, name))
    names = network.names()
    pos = {v: i for i, v in enumerate(out.scope)}
    return Factor(names, np.transpose(out.values, [pos[v] for v in names]))


# ---------------------------------------------------------------------------
# information measures (nats)

def cond_mutual_information(network: Network, x: str, ys, context: Assignment | None = None) -> float:
    """Mean over y in ys of I(x; y | context), each term clamped at zero."""
    ys = tuple(ys)
    if not ys:
        raise ValueError("empty companion set")
    if x in ys:
        raise ValueError(f"{x!r} appears in its own companion set")
    return sum(pairwise_mutual_information(network, x, y, context) for y in ys) / len(ys)


def pairwise_mutual_information(network: Network, x: str, y: str,
                                context: Assignment | None = None) -> float:
    """I(x; y | context). Variables are ordered canonically so I(x,y) == I(y,x)
    bit for bit."""
    a, b = sorted((x, y))
    f = query(network, (a, b), context)
    z = f.values.sum()
    if z == 0.0:
        return 0.0
    pj = f.values / z
    pa = pj.sum(axis=1, keepdims=True)
    pb = pj.sum(axis=0, keepdims=True)
    mask = pj > 0
    total = float((pj[mask] * np.log(pj[mask] / (pa * pb)[mask])).sum())
    return max(0.0, total)


def set_mutual_information(network: Network, x: str, others,
                           context: Assignment | None = None) -> float:
    """I(x; others jointly | context)."""
    others = tuple(sorted(others))
    f = query(network, (x,) + others, context)
    z = f.values.sum()
    if z == 0.0:
        return 0.0
    pj = (f.values / z).reshape(network.card(x), -1)
    px = pj.sum(axis=1, keepdims=True)
    po = pj.sum(axis=0, keepdims=True)
    mask = pj > 0
    total = float((pj[mask] * np.log(pj[mask] / (px * po)[mask])).sum())
    return max(0.0, total)


def causal_information_flow(network: Network, x: str, evidence_vars,
                            context: Assignment | None = None) -> float:
    """Interventional information flow I(x -> evidence_vars | context).

    Forward KL of each interventional outcome distribution against their
    mixture, with intervention states weighted by P(x | context).
    """
    evidence_vars = tuple(evidence_vars)
    context = dict(context or {})
    w = query(network, (x,), context).values
    z = w.sum()
    if z <= 0.0:
        raise ImpossibleEvidenceError(f"context {context} has probability 0")
    w = w / z
    dists = {}
    for i, state in enumerate(network.states(x)):
        if w[i] == 0.0:
            continue
        mnet = mutilate(network, {x: state})
        f = query(mnet, evidence_vars, context)
        zz = f.values.sum()
        if zz == 0.0:
            continue  # this intervention makes the context impossible
        dists[i] = f.values.ravel() / zz
    if not dists:
        return 0.0
    mix = sum(w[i] * d for i, d in dists.items())
    flow = 0.0
    for i, d in dists.items():
        mask = d > 0
        flow += w[i] * float((d[mask] * np.log(d[mask] / mix[mask])).sum())
    return max(0.0, flow)
