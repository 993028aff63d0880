"""Reference explanation methods: K-MAP, K-SIMP, explanation trees, causal
explanation trees.

These exist to be compared against MRE on the benchmark scenarios, so their
conventions (tie-breaks, thresholds, stopping rules) are pinned down
precisely; see the docstrings of the individual methods.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import infer
from .infer import query
from .model import Assignment, Network
from .search import ScoredExplanation

# Sort keys round scores so that ties which are exact in real arithmetic
# survive elimination round-off.
_KEY_DECIMALS = 10


def _r(x: float) -> float:
    return round(x, _KEY_DECIMALS)


@dataclass(frozen=True)
class BaselineParams:
    """Thresholds shared by the baseline methods.

    simplify_factor: K-SIMP keeps deleting while the likelihood stays within
        this factor of the original MAP solution's likelihood.
    branch_floor: minimum P(branch|e) for an explanation-tree child.
    mi_threshold: minimum ET selection criterion for a non-root node.
    flow_threshold: minimum CET causal flow for a non-root node.
    k: number of solutions (MAP seeds, reported rows).
    """

    simplify_factor: float = 0.05
    branch_floor: float = 0.0
    mi_threshold: float = 0.05
    flow_threshold: float = 0.01
    k: int = 3


# ---------------------------------------------------------------------------
# K-MAP

def k_map(network: Network, evidence: Assignment, k: int = 3) -> list[ScoredExplanation]:
    """Top-k full target configurations by joint probability with the evidence.

    Reported score is the joint P(x, e). Ties break by higher prior, then by
    enumeration order (targets in declared order, rightmost fastest).
    """
    targets = network.targets
    if not targets:
        raise ValueError("network has no target variables")
    evidence = dict(evidence)
    rows = []
    for i, states in enumerate(itertools.product(*(network.states(v) for v in targets))):
        ev = dict(zip(targets, states))
        prior = query(network, (), ev).item()
        joint = query(network, (), {**ev, **evidence}).item()
        rows.append(ScoredExplanation(bindings=tuple(zip(targets, states)),
                                      kind="joint", value=joint, prior=prior, order=i))
    rows.sort(key=lambda r: (-_r(r.value), -_r(r.prior), r.order))
    return rows[:k]


# ---------------------------------------------------------------------------
# K-SIMP

def k_simp(network: Network, evidence: Assignment,
           params: BaselineParams = BaselineParams()) -> list[ScoredExplanation]:
    """Simplified MAP solutions.

    Each of the k MAP configurations is shrunk greedily: a variable may be
    deleted while the evidence likelihood of the reduced assignment stays
    within (1 - simplify_factor) of the ORIGINAL solution's likelihood. Each
    step deletes the variable leaving the highest likelihood (ties delete the
    latest-declared variable). Identical results are deduplicated; output is
    ranked by likelihood, then by fewer variables.
    """
    evidence = dict(evidence)
    maps = k_map(network, evidence, params.k)
    declared = {name: i for i, name in enumerate(network.names())}

    results = []
    for m in maps:
        cur = m.assignment()
        like = infer.likelihood(network, evidence, cur)
        bound = (1.0 - params.simplify_factor) * like
        while len(cur) > 1:
            best = None
            for v in cur:
                trial = {u: s for u, s in cur.items() if u != v}
                lt = infer.likelihood(network, evidence, trial)
                if lt >= bound:
                    key = (_r(lt), declared[v])
                    if best is None or key > best[0]:
                        best = (key, v, lt)
            if best is None:
                break
            cur = {u: s for u, s in cur.items() if u != best[1]}
            like = best[2]
        results.append((tuple(sorted(cur.items())), like))

    seen: dict = {}
    order = []
    for bindings, like in results:
        if bindings not in seen:
            seen[bindings] = like
            order.append(bindings)
    rows = [ScoredExplanation(bindings=b, kind="likelihood", value=seen[b], order=i)
            for i, b in enumerate(order)]
    rows.sort(key=lambda r: (-_r(r.value), len(r.bindings)))
    return rows[:params.k]


# ---------------------------------------------------------------------------
# trees

@dataclass
class TreeBranch:
    state: str
    label: float
    child: "TreeNode | None"


@dataclass
class TreeNode:
    var: str
    criterion: float
    branches: tuple[TreeBranch, ...]


def _entropy(values: np.ndarray) -> float:
    p = values / values.sum()
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def explanation_tree(network: Network, evidence: Assignment,
                     params: BaselineParams = BaselineParams()) -> TreeNode | None:
    """Explanation tree over the target variables.

    At each node the unused target with the highest criterion is installed:
    the MAXIMUM over the other unused targets of pairwise mutual information
    with the candidate, conditioned on the branch and the evidence. Ties
    break toward higher posterior entropy, then lexicographically. The last
    unused target is judged by its mutual information with the joint evidence
    variable set given the branch alone, so the deepest level can still
    expand. The root is always installed; deeper nodes require the criterion
    to reach mi_threshold and the branch to have conditional mass above
    branch_floor. Branch labels are P(branch | e).
    """
    evidence = dict(evidence)
    evidence_vars = tuple(sorted(evidence))
    pe = query(network, (), evidence).item()
    if pe <= 0.0:
        raise infer.ImpossibleEvidenceError(f"evidence {evidence} has probability 0")

    def pick(unused, branch):
        ctx = {**branch, **evidence}
        ranked = []
        for v in sorted(unused):
            others = [u for u in unused if u != v]
            if others:
                crit = max(infer.pairwise_mutual_information(network, v, u, ctx)
                           for u in others)
            else:
                crit = infer.set_mutual_information(network, v, evidence_vars, branch)
            ent = _entropy(query(network, (v,), ctx).values)
            ranked.append((-crit, -ent, v))
        ranked.sort()
        _, _, best = ranked[0]
        return best, -ranked[0][0]

    def expand(branch, unused, root):
        if not unused:
            return None
        if not root:
            pbe = query(network, (), {**branch, **evidence}).item() / pe
            if pbe <= params.branch_floor:
                return None
        best, crit = pick(unused, branch)
        if not root and crit < params.mi_threshold:
            return None
        rest = [u for u in unused if u != best]
        branches = []
        for s in network.states(best):
            nb = {**branch, best: s}
            label = query(network, (), {**nb, **evidence}).item() / pe
            branches.append(TreeBranch(state=s, label=label,
                                       child=expand(nb, rest, False)))
        return TreeNode(var=best, criterion=crit, branches=tuple(branches))

    return expand({}, list(network.targets), True)


def causal_flow(network: Network, var: str, evidence_vars: tuple[str, ...],
                branch: Assignment, evidence: Assignment) -> float:
    """Interventional flow from var to the evidence variables at a branch.

    Intervention states are weighted by their posterior P(state | branch, e);
    the interventional outcome distributions condition on the branch only
    (interventions are judged against the pre-observation world). The
    divergence is the symmetrized KL of each outcome distribution against
    the weighted mixture, restricted to each intervention's support.
    """
    w = query(network, (var,), {**branch, **evidence}).values.astype(float)
    z = w.sum()
    if z == 0.0:
        return 0.0
    w = w / z
    dists = {}
    for i, state in enumerate(network.states(var)):
        if w[i] == 0.0:
            continue
        mnet = infer.mutilate(network, {var: state})
        f = query(mnet, evidence_vars, dict(branch))
        pc = f.values.sum()
        if pc == 0.0:
            continue  # intervention makes the branch impossible
        dists[i] = f.values.ravel() / pc
    if not dists:
        return 0.0
    mix = sum(w[i] * d for i, d in dists.items())
    flow = 0.0
    for i, d in dists.items():
        mask = d > 0
        p, q = d[mask], mix[mask]
        flow += w[i] * float(((p - q) * np.log(p / q)).sum())
    return max(0.0, flow)


def causal_explanation_tree(network: Network, evidence: Assignment,
                            params: BaselineParams = BaselineParams()) -> TreeNode | None:
    """Causal explanation tree: nodes picked by maximum causal flow.

    The root is always installed; deeper nodes require flow_threshold.
    Branch labels are ln P(e|branch) - ln P(e); impossible branches get
    label -inf and become leaves.
    """
    evidence = dict(evidence)
    evidence_vars = tuple(sorted(evidence))
    pe = query(network, (), evidence).item()
    if pe <= 0.0:
        raise infer.ImpossibleEvidenceError(f"evidence {evidence} has probability 0")

    def expand(branch, unused, root):
        if not unused:
            return None
        if query(network, (), {**branch, **evidence}).item() == 0.0:
            return None
        flows = {v: causal_flow(network, v, evidence_vars, branch, evidence)
                 for v in sorted(unused)}
        best = min(flows, key=lambda v: (-flows[v], v))
        if not root and flows[best] < params.flow_threshold:
            return None
        rest = [u for u in unused if u != best]
        branches = []
        for s in network.states(best):
            nb = {**branch, best: s}
            pb = query(network, (), nb).item()
            pbe = query(network, (), {**nb, **evidence}).item()
            label = math.log(pbe / pb / pe) if pbe > 0.0 else -math.inf
            branches.append(TreeBranch(state=s, label=label,
                                       child=expand(nb, rest, False)))
        return TreeNode(var=best, criterion=flows[best], branches=tuple(branches))

    return expand({}, list(network.targets), True)


# ---------------------------------------------------------------------------
# rendering

def tree_doc(node: TreeNode | None):
    """JSON-ready dict form of a tree (full precision)."""
    if node is None:
        return None
    return {
        "variable": node.var,
        "criterion": node.criterion,
        "branches": [
            {"state": b.state, "label": b.label, "child": tree_doc(b.child)}
            for b in node.branches
        ],
    }


def render_tree(node: TreeNode | None, indent: str = "") -> str:
    if node is None:
        return indent + "(empty)\n"
    out = [f"{indent}{node.var}  [criterion {node.criterion:.4f}]\n"]
    for b in node.branches:
        label = f"{b.label:.4f}" if math.isfinite(b.label) else str(b.label)
        out.append(f"{indent}  = {b.state}  ({label})\n")
        if b.child is not None:
            out.append(render_tree(b.child, indent + "      "))
    return "".join(out)
