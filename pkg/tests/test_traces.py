"""Nominal traces replay correctly; abstract strategies are sound."""

import pytest

from conftest import load_spec
from gr1report import parse_spec, compile_to_boolean
from gr1report.oracle import eval_ir
from gr1report.traces import (
    nominal_trace, abstract_strategy, AnnotatedTrace, TraceError, STAR,
    VIOLATION,
)


def compile_text(text):
    return compile_to_boolean(parse_spec(text))


def _env_of(spec, step, nxt=None):
    vals = {}
    for name, v in list(step.inputs.items()) + list(step.outputs.items()):
        if name in spec.groups:
            g = spec.groups[name]
            for i, b in enumerate(g.bits):
                vals[(b, False)] = bool(((v - g.lo) >> i) & 1)
        else:
            vals[(name, False)] = v
    if nxt is not None:
        for (b, primed), v in _env_of(spec, nxt).items():
            vals[(b, True)] = v
    return vals


def replay_ok(spec, trace: AnnotatedTrace) -> bool:
    """Trace validity checked against the parts only, not the generator."""
    te = [p.ir for p in spec.parts["env_trans"]]
    ts = [p.ir for p in spec.parts["sys_trans"]]
    ie = [p.ir for p in spec.parts["env_init"]]
    i_s = [p.ir for p in spec.parts["sys_init"]]
    env0 = _env_of(spec, trace.steps[0])
    if not all(eval_ir(p, env0) for p in ie + i_s):
        return False
    for a, b in zip(trace.steps, trace.steps[1:]):
        env = _env_of(spec, a, b)
        if not all(eval_ir(p, env) for p in te + ts):
            return False
    return True


def lasso_satisfies_liveness(spec, trace: AnnotatedTrace) -> bool:
    k = trace.lasso_start
    cycle = trace.steps[k:]
    if not cycle:
        return False
    pairs = list(zip(cycle, cycle[1:] + [cycle[0]]))
    for kind in ("env_liveness", "sys_liveness"):
        for part in spec.parts[kind]:
            if not any(eval_ir(part.ir, _env_of(spec, a, b))
                       for a, b in pairs):
                return False
    return True


def test_trace_replays_on_regression_corpus():
    for name in ("mutex", "patrol", "doors", "tworobot", "delivery_ready",
                 "request_grant"):
        spec = load_spec(name)
        tr = nominal_trace(spec, max_steps=48)
        assert isinstance(tr, AnnotatedTrace), name
        assert replay_ok(spec, tr), name
        assert tr.lasso_start < len(tr.steps), name
        assert lasso_satisfies_liveness(spec, tr), name


def test_trace_lasso_contains_assumed_event():
    spec = compile_text(
        "[INPUT]\nr\n[OUTPUT]\ng\n[ENV_LIVENESS]\nr\n[SYS_LIVENESS]\nTRUE\n")
    tr = nominal_trace(spec)
    assert isinstance(tr, AnnotatedTrace)
    assert any(s.inputs["r"] for s in tr.steps[tr.lasso_start:])


def test_trace_requires_realizability():
    with pytest.raises(TraceError, match="realizable"):
        nominal_trace(load_spec("counter"))


def test_trace_reports_unwinnable_environment():
    # the environment cannot honor GF(r & !r)
    spec = compile_text(
        "[INPUT]\nr\n[OUTPUT]\ng\n[ENV_LIVENESS]\nr & !r\n"
        "[SYS_LIVENESS]\nTRUE\n")
    out = nominal_trace(spec)
    assert isinstance(out, dict) and "finding" in out


def test_trace_deterministic():
    spec = load_spec("doors")
    t1 = nominal_trace(spec).to_json()
    t2 = nominal_trace(spec).to_json()
    assert t1 == t2


def test_trace_json_shape():
    spec = load_spec("mutex")
    data = nominal_trace(spec).to_json()
    assert set(data) == {"steps", "lassoStart"}
    assert set(data["steps"][0]) == {"in", "out", "envGoal", "sysGoal"}


# ----------------------------------------------------------------------
# abstract strategies

def test_abstract_none_for_liveness_decided_games():
    spec = compile_text(
        "[INPUT]\nr\n[OUTPUT]\ng\n[ENV_LIVENESS]\nr\n[SYS_LIVENESS]\ng\n")
    assert abstract_strategy(spec) is None


def test_abstract_counter_strategy_for_oscillator():
    ab = abstract_strategy(load_spec("oscillator_unreal"))
    assert ab.winner == "environment"
    assert ab.horizon == 2
    assert ab.rounds == [{"g": True}, {"g": False}, {"g": VIOLATION}]


def test_abstract_strategy_for_system_safety_win():
    # the system can jam the assumption g -> X(r & !r)
    spec = compile_text(
        "[INPUT]\nr\n[OUTPUT]\ng\n[ENV_TRANS]\ng -> (X(r) & !X(r))\n"
        "[SYS_LIVENESS]\nTRUE\n")
    ab = abstract_strategy(spec)
    assert ab is not None and ab.winner == "system"
    assert ab.rounds[-1] == {"r": VIOLATION, "g": VIOLATION}
    # the winning move raises g, read straight off the table
    assert ab.rounds[0]["g"] is True


def test_abstract_soundness_exhaustive_oscillator():
    # every legal play of the loser violates its safety parts no later
    # than the round marked X
    spec = load_spec("oscillator_unreal")
    ab = abstract_strategy(spec)
    ts = [p.ir for p in spec.parts["sys_trans"]]
    i_s = [p.ir for p in spec.parts["sys_init"]]
    for g0 in (False, True):
        env = {("g", False): g0}
        if not all(eval_ir(p, env) for p in i_s):
            continue  # violated immediately, before round 1
        alive = True
        for rnd in range(1, ab.horizon + 1):
            moves = [g1 for g1 in (False, True)
                     if all(eval_ir(p, {("g", False): g0, ("g", True): g1})
                            for p in ts)]
            if not moves:
                alive = False
                break
            g0 = moves[0]
        assert not alive


def test_abstract_star_entries_have_alternatives():
    ab = abstract_strategy(load_spec("counter"))
    # stars on loser rows: both values occur among surviving plays
    for rnd in ab.rounds[:-1]:
        for name, v in rnd.items():
            assert v == STAR or v == VIOLATION or isinstance(v, (bool, int))


def test_abstract_winner_star_when_any_value_works():
    # irrelevant inputs get a star: either constant preserves the win
    spec = compile_text(
        "[INPUT]\nr\ns\n[OUTPUT]\ng\n[SYS_INIT]\ng\n"
        "[SYS_TRANS]\ng -> X(!g)\n!g -> X(g)\ng\n")
    ab = abstract_strategy(spec)
    assert ab.winner == "environment" and ab.horizon == 2
    for rnd in ab.rounds[:-1]:
        assert rnd["r"] == STAR and rnd["s"] == STAR
    assert [rd["g"] for rd in ab.rounds] == [True, False, VIOLATION]


def test_abstract_counter_table_soundness_exhaustive():
    # every system play against the table-constrained environment dies
    # no later than the marked round: breadth-first over the reachable
    # valuation sets, environment pinned to the table (stars = free)
    spec = load_spec("counter")
    ab = abstract_strategy(spec)
    assert ab.winner == "environment"
    te = [p.ir for p in spec.parts["env_trans"]]
    ts = [p.ir for p in spec.parts["sys_trans"]]
    ie = [p.ir for p in spec.parts["env_init"]]
    i_s = [p.ir for p in spec.parts["sys_init"]]
    n = len(spec.props)

    def valuations(round_idx):
        import itertools
        table = ab.rounds[round_idx]
        for bits in itertools.product([False, True], repeat=n):
            vals = dict(zip(spec.props, bits))
            decoded = spec.decode(vals)
            ok = True
            for name, want in table.items():
                if want in (STAR, VIOLATION):
                    continue
                if decoded.get(name) != want:
                    ok = False
                    break
            if ok:
                yield vals

    def env_of(cur, nxt=None):
        env = {(k, False): v for k, v in cur.items()}
        if nxt:
            env.update({(k, True): v for k, v in nxt.items()})
        return env

    reach = set()
    for vals in valuations(0):
        env = env_of(vals)
        if all(eval_ir(p, env) for p in ie + i_s):
            reach.add(tuple(sorted(vals.items())))
    assert reach
    for t in range(1, ab.horizon + 1):
        nxt_reach = set()
        if t < ab.horizon:
            for frozen in reach:
                cur = dict(frozen)
                for nxt in valuations(t):
                    env = env_of(cur, nxt)
                    if all(eval_ir(p, env) for p in te + ts):
                        nxt_reach.add(tuple(sorted(nxt.items())))
        else:
            # the X round: no legal continuation may exist at all
            import itertools
            for frozen in reach:
                cur = dict(frozen)
                for bits in itertools.product([False, True], repeat=n):
                    nxt = dict(zip(spec.props, bits))
                    env = env_of(cur, nxt)
                    if all(eval_ir(p, env) for p in te + ts):
                        nxt_reach.add(tuple(sorted(nxt.items())))
        reach = nxt_reach
    assert reach == set()
