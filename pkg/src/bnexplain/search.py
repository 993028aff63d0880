"""Candidate enumeration and exact MRE search over partial target instantiations."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from . import infer, relevance
from .model import Assignment, Network, d_separated

Bindings = tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class ScoredExplanation:
    bindings: Bindings
    kind: str  # "gbf" | "joint" | "likelihood"
    value: float
    prior: float | None = None
    posterior: float | None = None
    order: int = 0  # enumeration index, the final tie-break

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(v for v, _ in self.bindings)

    @property
    def strength(self) -> str | None:
        return relevance.strength_label(self.value) if self.kind == "gbf" else None

    def assignment(self) -> dict[str, str]:
        return dict(self.bindings)


def enumerate_explanations(network: Network) -> Iterator[Bindings]:
    """Every nonempty partial instantiation of the targets, exactly once.

    Order: subset size ascending, subsets lexicographic by variable name,
    then the state product with the rightmost variable fastest.
    """
    targets = sorted(network.targets)
    if not targets:
        raise ValueError("network has no target variables")
    for size in range(1, len(targets) + 1):
        for combo in itertools.combinations(targets, size):
            for states in itertools.product(*(network.states(v) for v in combo)):
                yield tuple(zip(combo, states))


def candidate_count(network: Network) -> int:
    n = 1
    for v in network.targets:
        n *= network.card(v) + 1
    return n - 1


def _rank(row: ScoredExplanation):
    # score descending, then concise, then enumeration order
    return (-row.value, len(row.bindings), row.order)


def score_all(network: Network, evidence: Assignment) -> list[ScoredExplanation]:
    """GBF-score every candidate, sorted descending. Always exhaustive."""
    evidence = dict(evidence)
    pe = infer.query(network, (), evidence).item()
    if pe <= 0.0:
        raise infer.ImpossibleEvidenceError(f"evidence {evidence} has probability 0")
    rows = []
    for i, bindings in enumerate(enumerate_explanations(network)):
        rows.append(_scored(network, bindings, evidence, pe, i))
    rows.sort(key=_rank)
    return rows


def _scored(network, bindings, evidence, pe, order) -> ScoredExplanation:
    ev = dict(bindings)
    prior = infer.query(network, (), ev).item()
    pxe = infer.query(network, (), {**ev, **evidence}).item()
    posterior = pxe / pe
    return ScoredExplanation(bindings=bindings, kind="gbf",
                             value=relevance.gbf_from_probs(prior, posterior),
                             prior=prior, posterior=posterior, order=order)


def mre(network: Network, evidence: Assignment, prune: bool = True) -> ScoredExplanation:
    """The candidate with maximum GBF (exact; pruning never changes the answer)."""
    evidence = dict(evidence)
    if not prune:
        return score_all(network, evidence)[0]
    pe = infer.query(network, (), evidence).item()
    if pe <= 0.0:
        raise infer.ImpossibleEvidenceError(f"evidence {evidence} has probability 0")
    evidence_vars = set(evidence)
    sep = {}

    def separated(y: str, rest: frozenset) -> bool:
        key = (y, rest)
        if key not in sep:
            sep[key] = d_separated(network, {y}, evidence_vars, rest)
        return sep[key]

    best = None
    for i, bindings in enumerate(enumerate_explanations(network)):
        names = frozenset(v for v, _ in bindings)
        # A variable that is d-separated from the evidence given the rest of
        # the candidate adds no explanatory power; the subset without it is
        # enumerated earlier and scores at least as high.
        if not (names & evidence_vars) and any(separated(y, names - {y}) for y in names):
            continue
        row = _scored(network, bindings, evidence, pe, i)
        if best is None or _rank(row) < _rank(best):
            best = row
    return best
