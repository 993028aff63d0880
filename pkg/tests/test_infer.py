import itertools
import math

import numpy as np
import pytest

import oracle
from bnexplain.infer import (
    Factor,
    ImpossibleEvidenceError,
    brute_force_joint,
    causal_information_flow,
    cond_mutual_information,
    likelihood,
    marginal,
    mutilate,
    pairwise_mutual_information,
    prob,
    prob_do,
    query,
    set_mutual_information,
)
from bnexplain.model import DeterministicCpt, Network, TableCpt, Variable, validate


def _roots(net):
    return [n for n in net.names() if not net.parents(n)]


# ---------------------------------------------------------------------------
# variable elimination vs enumeration

def test_evidence_probability_matches_oracle(nets, joints, scenarios):
    for sid, fid, evidence in scenarios:
        ve = query(nets[fid], (), evidence).item()
        enum = oracle.prob(nets[fid], joints[fid], evidence)
        assert ve == pytest.approx(enum, abs=1e-9), sid


def test_posterior_marginals_match_oracle(nets, joints, scenarios):
    for sid, fid, evidence in scenarios:
        net = nets[fid]
        for name in net.names():
            if name in evidence:
                continue
            f = marginal(net, (name,), evidence)
            for i, state in enumerate(net.states(name)):
                enum = oracle.prob(net, joints[fid], {name: state}, evidence)
                assert f.values[i] == pytest.approx(enum, abs=1e-9), (sid, name, state)


def test_joint_assignments_match_oracle(nets, joints):
    cases = [
        ("asia", {"Tuberculosis": "yes", "Bronchitis": "yes"}, {"Dyspnea": "yes"}),
        ("asia", {"LungCancer": "no"}, {"XRay": "abnormal", "Smoking": "yes"}),
        ("circuit", {"A": "defective", "C": "defective"},
         {"Input": "current", "TotalOutput": "noCurr"}),
        ("academe", {"Theory": "bad", "Practice": "average"}, {"FinalMark": "fail"}),
        ("circuit2", {"OK1": "abnormal", "OK2": "abnormal"}, {"E": "low"}),
        ("vacation1", {"Healthy": "unhealthy", "Location": "hiking"}, {"Alive": "dead"}),
    ]
    for fid, x, e in cases:
        got = prob(nets[fid], x, e)
        want = oracle.prob(nets[fid], joints[fid], x, e)
        assert got == pytest.approx(want, abs=1e-9), (fid, x, e)


def test_brute_force_joint_equals_oracle_table(nets, joints):
    for fid in ("asia", "circuit", "academe", "circuit2", "vacation1"):
        net = nets[fid]
        f = brute_force_joint(net)
        assert f.scope == net.names()
        flat = f.values.ravel()
        assert flat.sum() == pytest.approx(1.0, abs=1e-9)
        for i, config in enumerate(itertools.product(*[net.states(n) for n in net.names()])):
            assert flat[i] == pytest.approx(joints[fid][config], abs=1e-12), (fid, config)


def test_brute_force_joint_two_node_product():
    net = Network(
        variables=(Variable("A", ("a0", "a1")), Variable("B", ("b0", "b1"))),
        cpts=(TableCpt(child="A", parents=(), rows=(0.3, 0.7)),
              TableCpt(child="B", parents=("A",), rows=(0.9, 0.1, 0.2, 0.8))),
    )
    f = brute_force_joint(net)
    assert f.values.ravel() == pytest.approx(
        [0.3 * 0.9, 0.3 * 0.1, 0.7 * 0.2, 0.7 * 0.8], abs=1e-15)


def test_brute_force_joint_cap(nets):
    with pytest.raises(ValueError, match="cap"):
        brute_force_joint(nets["asia"], cap=4)


def test_marginal_from_joint_equals_elimination(nets):
    net = nets["circuit"]
    idx = net.names().index("TotalOutput")
    axes = tuple(i for i in range(len(net.names())) if i != idx)
    from_joint = brute_force_joint(net).values.sum(axis=axes)
    ve = marginal(net, ("TotalOutput",)).values
    assert ve == pytest.approx(from_joint, abs=1e-9)


# ---------------------------------------------------------------------------
# conditional probabilities and likelihoods

def test_posteriors_after_circuit_failure(nets):
    net = nets["circuit"]
    e = {"Input": "current", "TotalOutput": "current"}
    want = {"A": 0.391, "B": 0.649, "C": 0.446, "D": 0.301}
    for gate, p in want.items():
        assert prob(net, {gate: "defective"}, e) == pytest.approx(p, abs=5e-4), gate


def test_conditioning_on_itself(nets):
    assert prob(nets["asia"], {"Smoking": "yes"}, {"Smoking": "yes"}) == pytest.approx(1.0, abs=1e-12)


def test_asia_posterior_vs_oracle(nets, joints):
    got = prob(nets["asia"], {"Bronchitis": "yes"}, {"Dyspnea": "yes"})
    want = oracle.prob(nets["asia"], joints["asia"], {"Bronchitis": "yes"}, {"Dyspnea": "yes"})
    assert got == pytest.approx(want, abs=1e-9)


def test_likelihood_examples(nets):
    assert likelihood(nets["circuit2"], {"E": "low"}, {"OK3": "abnormal"}) == pytest.approx(1.0, abs=1e-9)
    full_bad = {"Theory": "bad", "Practice": "bad", "Extra": "no", "OtherFactors": "minus"}
    assert likelihood(nets["academe"], {"FinalMark": "fail"}, full_bad) == pytest.approx(1.0, abs=1e-9)


def test_likelihood_of_full_parent_instantiation_is_cpt_product(nets):
    # evidence variables whose parents are all pinned: the likelihood reads
    # straight off the CPT rows
    net = nets["asia"]
    cond = {"TbOrCa": "yes", "Bronchitis": "yes"}
    got = likelihood(net, {"XRay": "abnormal", "Dyspnea": "yes"}, cond)
    assert got == pytest.approx(0.98 * 0.9, abs=1e-12)


def test_likelihood_zero_prior_assignment_raises(nets):
    with pytest.raises(ValueError, match="probability 0"):
        likelihood(nets["circuit"], {"TotalOutput": "current"}, {"Input": "noCurr"})


def test_bayes_consistency(nets, scenarios):
    # P(x|e) P(e) == P(e|x) P(x) on a target binding from every scenario
    for sid, fid, evidence in scenarios:
        net = nets[fid]
        target = net.targets[0]
        x = {target: net.states(target)[0]}
        pe = query(net, (), evidence).item()
        px = query(net, (), x).item()
        lhs = prob(net, x, evidence) * pe
        rhs = likelihood(net, evidence, x) * px
        assert lhs == pytest.approx(rhs, abs=1e-9), sid


def test_impossible_evidence_raises(nets):
    with pytest.raises(ImpossibleEvidenceError):
        prob(nets["circuit"], {"B": "defective"}, {"Input": "noCurr"})
    with pytest.raises(ImpossibleEvidenceError):
        marginal(nets["circuit"], ("B",), {"Input": "noCurr"})


def test_probabilities_in_unit_interval(nets, scenarios):
    for sid, fid, evidence in scenarios:
        net = nets[fid]
        for name in net.names():
            if name in evidence:
                continue
            vals = marginal(net, (name,), evidence).values
            assert (vals >= 0.0).all() and (vals <= 1.0 + 1e-12).all(), (sid, name)


# ---------------------------------------------------------------------------
# factor plumbing

def test_scalar_factor_item():
    with pytest.raises(ValueError, match="scalar"):
        Factor(("X",), np.array([0.5, 0.5])).item()


def test_query_rejects_overlap(nets):
    with pytest.raises(ValueError, match="queried and conditioned"):
        query(nets["asia"], ("Smoking",), {"Smoking": "yes"})


# ---------------------------------------------------------------------------
# interventions

def test_root_intervention_equals_conditioning(nets):
    for fid, net in nets.items():
        root = _roots(net)[0]
        state = net.states(root)[0]
        if query(net, (), {root: state}).item() <= 0.0:
            state = net.states(root)[1]
        probe = next(n for n in net.names() if n != root)
        event = {probe: net.states(probe)[0]}
        assert prob_do(net, event, None, {root: state}) == pytest.approx(
            prob(net, event, {root: state}), abs=1e-9), fid


def test_intervened_variable_is_certain(nets):
    assert prob_do(nets["asia"], {"Bronchitis": "yes"}, None, {"Bronchitis": "yes"}) == \
        pytest.approx(1.0, abs=1e-12)
    assert prob_do(nets["asia"], {"Bronchitis": "no"}, None, {"Bronchitis": "yes"}) == \
        pytest.approx(0.0, abs=1e-12)


def test_intervention_on_evidence_variable_rejected(nets):
    with pytest.raises(ValueError, match="intervened"):
        prob_do(nets["asia"], {"Dyspnea": "yes"}, {"Bronchitis": "no"}, {"Bronchitis": "yes"})


def test_do_bronchitis_vs_conditioning(nets, joints):
    # smoking confounds Bronchitis and LungCancer, so surgery and
    # conditioning disagree on the lung-cancer side
    net = nets["asia"]
    mnet = mutilate(net, {"Bronchitis": "yes"})
    mjoint = oracle.joint(mnet)
    did = prob_do(net, {"Dyspnea": "yes"}, None, {"Bronchitis": "yes"})
    assert did == pytest.approx(oracle.prob(mnet, mjoint, {"Dyspnea": "yes"}), abs=1e-9)
    saw = prob(net, {"Dyspnea": "yes"}, {"Bronchitis": "yes"})
    assert abs(did - saw) > 1e-4


def test_mutilated_cpt_is_point_mass(nets):
    mnet = mutilate(nets["asia"], {"Smoking": "no"})
    cpt = mnet.cpt("Smoking")
    assert cpt.parents == ()
    assert cpt.rows == (0.0, 1.0)
    assert validate(mnet) == []


# ---------------------------------------------------------------------------
# information measures

def _copy_pair(p0):
    return Network(
        variables=(Variable("X", ("x0", "x1")), Variable("Y", ("x0", "x1"))),
        cpts=(TableCpt(child="X", parents=(), rows=(p0, 1.0 - p0)),
              DeterministicCpt(child="Y", parents=("X",), default_state="x0",
                               exceptions=((("x1",), "x1"),))),
    )


def test_mutual_information_of_copied_pair():
    assert pairwise_mutual_information(_copy_pair(0.5), "X", "Y") == pytest.approx(
        math.log(2.0), abs=1e-12)


def test_mutual_information_of_independent_pair():
    net = Network(
        variables=(Variable("X", ("a", "b")), Variable("Y", ("a", "b"))),
        cpts=(TableCpt(child="X", parents=(), rows=(0.3, 0.7)),
              TableCpt(child="Y", parents=(), rows=(0.6, 0.4))),
    )
    assert pairwise_mutual_information(net, "X", "Y") == pytest.approx(0.0, abs=1e-12)
    assert cond_mutual_information(net, "X", ("Y",)) == pytest.approx(0.0, abs=1e-12)


def test_mutual_information_is_symmetric(nets):
    net = nets["asia"]
    a = pairwise_mutual_information(net, "Bronchitis", "LungCancer", {"Dyspnea": "yes"})
    b = pairwise_mutual_information(net, "LungCancer", "Bronchitis", {"Dyspnea": "yes"})
    assert a == b


def test_cond_mutual_information_is_mean_of_pairs(nets, joints):
    net = nets["academe"]
    others = ("Practice", "Extra", "OtherFactors")
    got = cond_mutual_information(net, "Theory", others)
    want = sum(oracle.mutual_information(net, joints["academe"], "Theory", y)
               for y in others) / len(others)
    assert got == pytest.approx(want, abs=1e-9)
    assert got >= 0.0


def test_cond_mutual_information_rejects_bad_companions(nets):
    with pytest.raises(ValueError, match="companion"):
        cond_mutual_information(nets["asia"], "Smoking", ())
    with pytest.raises(ValueError, match="companion"):
        cond_mutual_information(nets["asia"], "Smoking", ("Smoking",))


def test_set_mutual_information_collapses_to_pairwise(nets):
    net = nets["asia"]
    a = set_mutual_information(net, "Bronchitis", ("Dyspnea",))
    b = pairwise_mutual_information(net, "Bronchitis", "Dyspnea")
    assert a == pytest.approx(b, abs=1e-12)


def test_flow_without_directed_path_is_zero(nets):
    # Dyspnea is a sink: no directed path back to Bronchitis
    assert causal_information_flow(nets["asia"], "Dyspnea", ("Bronchitis",)) == pytest.approx(
        0.0, abs=1e-12)


def test_flow_of_copied_root_is_entropy():
    net = _copy_pair(0.3)
    want = -(0.3 * math.log(0.3) + 0.7 * math.log(0.7))
    assert causal_information_flow(net, "X", ("Y",)) == pytest.approx(want, abs=1e-12)


def test_flow_matches_oracle_on_asia(nets):
    net = nets["asia"]
    got = causal_information_flow(net, "Bronchitis", ("Dyspnea",))
    prior = [oracle.prob(net, oracle.joint(net), {"Bronchitis": s})
             for s in net.states("Bronchitis")]
    dists = []
    for s in net.states("Bronchitis"):
        mnet = mutilate(net, {"Bronchitis": s})
        mjoint = oracle.joint(mnet)
        dists.append([oracle.prob(mnet, mjoint, {"Dyspnea": d})
                      for d in net.states("Dyspnea")])
    mix = [sum(w * d[j] for w, d in zip(prior, dists)) for j in range(2)]
    want = sum(w * p * math.log(p / m)
               for w, d in zip(prior, dists) for p, m in zip(d, mix) if p > 0.0)
    assert got == pytest.approx(want, abs=1e-9)
    assert got >= 0.0
