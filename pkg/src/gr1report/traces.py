"""Nominal-case traces and abstract safety (counter-)strategies.

nominal_trace plays the extracted machine against an environment that
follows a non-deterministic generalized-Buchi strategy for its own
liveness assumptions (goal rotation; all distance-minimal moves kept,
lexicographically smallest emitted) until the product laces into a
lasso.

abstract_strategy handles games decided by the safety parts alone: it
probes, round by round and proposition by proposition, whether fixing a
value preserves the winner's forced win within the minimal horizon, and
renders the play as a table of constants, input-dependent stars, and a
terminal violation marker.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bdd import BddRef
from .compiler import BooleanSpec
from .game import (
    SymbolicGame, build_game, solve_game, check_realizability,
    extract_strategy,
)

STAR = "star"
VIOLATION = "X"


class TraceError(Exception):
    pass


# ----------------------------------------------------------------------
# nominal-case trace

@dataclass
class TraceStep:
    inputs: dict[str, object]
    outputs: dict[str, object]
    env_goal: int
    sys_goal: int

    def to_json(self) -> dict:
        return {"in": self.inputs, "out": self.outputs,
                "envGoal": self.env_goal, "sysGoal": self.sys_goal}


@dataclass
class AnnotatedTrace:
    steps: list[TraceStep]
    lasso_start: int

    def to_json(self) -> dict:
        return {"steps": [s.to_json() for s in self.steps],
                "lassoStart": self.lasso_start}


def _decode_vals(spec: BooleanSpec, assignment: dict[str, bool],
                 names: list[str]) -> dict[str, object]:
    sub = {k: assignment[k] for k in names}
    return spec.decode(sub)


def _env_buchi(game: SymbolicGame):
    """Winning set and per-goal attractor iterates for the environment's
    generalized-Buchi objective (all liveness assumptions, rotating)."""
    mgr = game.mgr

    def mu_r(i: int, w: BddRef):
        hit = game.live_env[i] & game.prime(w)
        rs = []
        r = mgr.false
        while True:
            rn = game.env_pre(hit | game.prime(r))
            if rn == r:
                break
            r = rn
            rs.append(r)
        return r, rs

    m = len(game.live_env)
    w = mgr.true
    while True:
        wprev = w
        for i in range(m):
            w, _ = mu_r(i, w)
        if w == wprev:
            break
    iterates = [mu_r(i, w)[1] for i in range(m)]
    return w, iterates


def nominal_trace(spec: BooleanSpec, max_steps: int = 64, robotics=False,
                  node_budget=None, deadline=None):
    """Annotated nominal-case run, or a finding dict when no suitable
    initial position exists or the environment cannot meet its liveness
    assumptions from it."""
    game = build_game(spec, robotics=robotics, node_budget=node_budget,
                      deadline=deadline)
    region = solve_game(game)
    if check_realizability(game, region) != "realizable":
        raise TraceError("nominal trace needs a realizable specification")
    machine = extract_strategy(game, region)
    mgr = game.mgr
    starts = game.init_env & game.init_sys & region.win
    if starts.is_false():
        return {"finding": "no initial position satisfies the initial parts"}
    p0 = mgr.pick_min_model(starts, game.positions)
    w_env, iterates = _env_buchi(game)
    if not mgr.eval(w_env, p0):
        return {"finding": "the environment cannot satisfy its liveness "
                           "assumptions from the initial position"}

    state = None
    in_names, out_names = machine.input_names, machine.output_names
    want_inputs = tuple(p0[n] for n in in_names)
    for sid in machine.initial:
        if machine.states[sid].inputs == want_inputs:
            state = machine.states[sid]
            break
    if state is None or state.outputs != tuple(p0[n] for n in out_names):
        raise TraceError("initial machine state does not cover the chosen "
                         "initial position")

    m = len(game.live_env)
    move_ok_memo: dict[tuple[int, int], BddRef] = {}

    def move_filter(c: int, rank: int) -> BddRef:
        # inputs whose every legal system reply either satisfies the
        # pursued assumption (into the winning set) or strictly lowers
        # the rank
        key = (c, rank)
        got = move_ok_memo.get(key)
        if got is not None:
            return got
        good = game.live_env[c] & game.prime(w_env)
        if rank > 0:
            good = good | game.prime(iterates[c][rank - 1])
        ok = ~mgr.and_exists(game.trans_sys, ~good, game.primed_outputs)
        got = game.trans_env & ok
        move_ok_memo[key] = got
        return got

    trans = {sid: dict(machine.transitions[sid])
             for sid in machine.transitions}
    steps: list[TraceStep] = []
    seen: dict[tuple[int, int], int] = {}
    c = 0
    while len(steps) < max_steps:
        pos = machine.position(state)
        key = (state.sid, c)
        if key in seen:
            return AnnotatedTrace(steps=steps, lasso_start=seen[key])
        seen[key] = len(steps)
        steps.append(TraceStep(
            inputs=_decode_vals(spec, pos, in_names),
            outputs=_decode_vals(spec, pos, out_names),
            env_goal=c, sys_goal=state.goal))
        rank = next((r for r, s in enumerate(iterates[c])
                     if mgr.eval(s, pos)), None)
        if rank is None:
            raise TraceError("environment left its winning region")
        moves = mgr.restrict(move_filter(c, rank), pos)
        if moves.is_false():
            raise TraceError("environment strategy has no move")
        imodel = mgr.pick_min_model(moves, game.primed_inputs)
        ivals = tuple(imodel[n + "'"] for n in in_names)
        nxt_sid = trans[state.sid].get(ivals)
        if nxt_sid is None:
            raise TraceError("machine is missing a transition for an "
                             "admissible input")
        nxt = machine.states[nxt_sid]
        full = dict(pos)
        full.update({n + "'": v for n, v in
                     zip(in_names + out_names, nxt.inputs + nxt.outputs)})
        if mgr.eval(game.live_env[c], full):
            c = (c + 1) % m
        state = nxt
    return AnnotatedTrace(steps=steps, lasso_start=len(steps))


# ----------------------------------------------------------------------
# abstract strategies for safety-decided games

@dataclass
class AbstractStrategy:
    winner: str                        # "system" | "environment"
    rounds: list[dict[str, object]]    # var -> bool | int | "star" | "X"
    horizon: int                       # index of the violation round

    def to_json(self) -> dict:
        def cell(v):
            if v is True:
                return "1"
            if v is False:
                return "0"
            return str(v)
        return {"winner": self.winner, "horizon": self.horizon,
                "rounds": [{k: cell(v) for k, v in r.items()}
                           for r in self.rounds],
                "note": "a star marks an entry with no single working "
                        "constant: the value either must depend on the "
                        "opponent or several constants preserve the win"}


def _attractor(game: SymbolicGame, pre, horizon: int) -> list[BddRef]:
    sets = [game.mgr.false]
    for _ in range(horizon):
        nxt = pre(sets[-1])
        if nxt == sets[-1]:
            break
        sets.append(nxt)
    return sets


def _group_ir(spec: BooleanSpec, name: str, value, primed: bool):
    """Position/move predicate pinning one user variable to a value."""
    from .compiler import ir_var, ir_not, ir_and, IR_TRUE
    if name in spec.bool_vars:
        lit = ir_var(name, primed)
        return lit if value else ir_not(lit)
    g = spec.groups[name]
    enc = value - g.lo
    out = IR_TRUE
    for i, b in enumerate(g.bits):
        lit = ir_var(b, primed)
        out = ir_and(out, lit if (enc >> i) & 1 else ir_not(lit))
    return out


def abstract_strategy(spec: BooleanSpec, horizon: int = 64,
                      node_budget=None, deadline=None):
    """Abstract strategy/counter-strategy for safety-decided games.

    Returns None unless one player forces the opponent into a safety
    dead end from the initial condition within the horizon.
    """
    game = build_game(spec, node_budget=node_budget, deadline=deadline)
    mgr = game.mgr

    def sys_pre(v):
        return game.cox(v)

    def env_pre(v):
        return game.pre_env(v)

    def sys_start_ok(v) -> bool:
        some = mgr.exists(game.outputs, game.init_sys & v)
        return mgr.forall(game.inputs,
                          game.init_env.implies(some)).is_true()

    def env_start_ok(v) -> bool:
        every = mgr.forall(game.outputs, game.init_sys.implies(v))
        return not (game.init_env & every).is_false()

    a_sys = _attractor(game, sys_pre, horizon)
    h_sys = next((h for h in range(len(a_sys)) if sys_start_ok(a_sys[h])),
                 None)
    a_env = _attractor(game, env_pre, horizon)
    h_env = next((h for h in range(len(a_env)) if env_start_ok(a_env[h])),
                 None)
    if h_sys is not None and h_env is not None:
        raise TraceError("both players cannot force a safety win")
    if h_sys is not None:
        return _build_table(game, spec, "system", h_sys, a_sys)
    if h_env is not None:
        return _build_table(game, spec, "environment", h_env, a_env)
    return None


def _build_table(game: SymbolicGame, spec: BooleanSpec, winner: str,
                 h: int, attr: list[BddRef]) -> AbstractStrategy:
    mgr = game.mgr
    from .game import ir_to_bdd
    ir_memo: dict = {}

    def bdd_of(ir):
        return ir_to_bdd(mgr, ir, ir_memo)

    def unconstrained(t: int) -> BddRef:
        # win-by-h backward set for round t with no later constraints
        k = h - t
        return attr[k] if k < len(attr) else attr[-1]

    if winner == "environment":
        def pre(v):
            return game.pre_env(v)

        def start_ok(v) -> bool:
            every = mgr.forall(game.outputs, game.init_sys.implies(v))
            return not (game.init_env & every).is_false()
        winner_vars = [v for v in spec.user_vars()
                       if _owner(spec, v) == "input"]
    else:
        def pre(v):
            return game.cox(v)

        def start_ok(v) -> bool:
            some = mgr.exists(game.outputs, game.init_sys & v)
            return mgr.forall(game.inputs,
                              game.init_env.implies(some)).is_true()
        winner_vars = [v for v in spec.user_vars()
                       if _owner(spec, v) == "output"]

    cons: list[BddRef] = [mgr.true for _ in range(h)]

    def wins_with(t: int, extra: BddRef) -> bool:
        v = unconstrained(t) & cons[t] & extra
        for s in range(t - 1, -1, -1):
            v = pre(v) & cons[s]
        return start_ok(v)

    def values_of(name):
        if name in spec.bool_vars:
            return [False, True]
        g = spec.groups[name]
        return list(range(g.lo, g.hi + 1))

    rounds: list[dict[str, object]] = []
    table_winner: list[dict[str, object]] = []
    for t in range(h):
        row: dict[str, object] = {}
        for name in winner_vars:
            working = []
            for val in values_of(name):
                pin = bdd_of(_group_ir(spec, name, val, False))
                if wins_with(t, pin):
                    working.append(val)
            if len(working) == 1:
                row[name] = working[0]
                cons[t] = cons[t] & bdd_of(
                    _group_ir(spec, name, working[0], False))
            else:
                row[name] = STAR
        table_winner.append(row)

    # forward reachable sets under the final constraints fill the
    # opponent's rows
    final: list[BddRef] = [mgr.false] * (h + 1)
    final[h] = mgr.false
    for s in range(h - 1, -1, -1):
        final[s] = pre(final[s + 1]) & cons[s]

    if winner == "environment":
        keeps = mgr.forall(game.outputs, game.init_sys.implies(final[0]))
        r = game.init_env & keeps & game.init_sys
    else:
        r = game.init_env & game.init_sys & cons[0] & final[0]
    reach = [r]
    for s in range(1, h):
        prev = reach[-1]
        if winner == "environment":
            good = game.prime(final[s])
            ok = ~mgr.and_exists(game.trans_sys, ~good, game.primed_outputs)
            img = mgr.and_exists(prev & ok, game.trans_env & game.trans_sys,
                                 game.positions)
        else:
            img = mgr.and_exists(
                prev, game.trans_env & game.trans_sys
                & game.prime(final[s] & cons[s]), game.positions)
        reach.append(mgr.rename(img, "unprime"))

    for t in range(h):
        row = dict(table_winner[t])
        for name in spec.user_vars():
            if name in row:
                continue
            present = []
            for val in values_of(name):
                pin = bdd_of(_group_ir(spec, name, val, False))
                if not (reach[t] & pin).is_false():
                    present.append(val)
            if len(present) == 1:
                row[name] = present[0]
            elif not present:
                row[name] = VIOLATION
            else:
                row[name] = STAR
        rounds.append({name: row[name] for name in spec.user_vars()})

    rounds.append({name: VIOLATION for name in spec.user_vars()})
    return AbstractStrategy(winner=winner, rounds=rounds, horizon=h)


def _owner(spec: BooleanSpec, name: str) -> str:
    if name in spec.bool_vars:
        return spec.bool_vars[name]
    return spec.groups[name].kind
