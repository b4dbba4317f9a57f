"""Specification debugging analyses.

Each analysis builds its own game in a fresh manager from the compiled
specification, so analyses are independent and can run concurrently.
All results are deterministic functions of (specification, options).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .bdd import Cube
from .compiler import BooleanSpec, BoolPart, ir_var, ir_not, IR_FALSE
from .game import (
    SymbolicGame, WinningRegion, build_game, solve_game,
    check_realizability, extract_strategy,
)

INFINITE = float("inf")


class AnalysisError(Exception):
    pass


def _deadline(timeout: float | None):
    return None if timeout is None else time.monotonic() + timeout


def _solve(spec: BooleanSpec, semantics="strict", robotics=False,
           node_budget=None, timeout=None, record=True):
    game = build_game(spec, semantics=semantics, robotics=robotics,
                      node_budget=node_budget, deadline=_deadline(timeout))
    region = solve_game(game, record=record)
    return game, region


def _variant(spec: BooleanSpec, drop: tuple[str, int] | None = None,
             add: dict[str, list[BoolPart]] | None = None) -> BooleanSpec:
    """Copy of the spec with one part removed and/or parts appended."""
    out = BooleanSpec(
        input_props=spec.input_props, output_props=spec.output_props,
        props=spec.props, groups=spec.groups, bool_vars=spec.bool_vars,
        source=spec.source)
    for kind, parts in spec.parts.items():
        kept = [p for p in parts
                if drop is None or (kind, p.index) != drop]
        out.parts[kind] = kept
    if add:
        for kind, parts in add.items():
            out.parts[kind] = out.parts[kind] + parts
    return out


# ----------------------------------------------------------------------
# strict vs. classical implication

@dataclass
class SemanticsComparison:
    strict: str
    nonstrict: str

    @property
    def differs(self) -> bool:
        return self.strict != self.nonstrict


def semantics_comparison(spec: BooleanSpec, robotics=False,
                         node_budget=None, timeout=None) -> SemanticsComparison:
    """Realizability under the native strict implication and under the
    classical implication; a difference flags specs whose auxiliary
    signals let the system provoke assumption violations."""
    game_s, region_s = _solve(spec, "strict", robotics, node_budget, timeout,
                              record=False)
    game_n, region_n = _solve(spec, "nonstrict", robotics, node_budget,
                              timeout, record=False)
    return SemanticsComparison(
        strict=check_realizability(game_s, region_s),
        nonstrict=check_realizability(game_n, region_n))


# ----------------------------------------------------------------------
# winning/losing position statistics

@dataclass
class ClassCount:
    total: int
    winning: int


@dataclass
class PositionStats:
    classes: dict[str, ClassCount]
    winning_cubes: list[Cube]
    losing_cubes: list[Cube]
    realizable: str


def position_statistics(spec: BooleanSpec, max_cubes: int = 10,
                        robotics=False, node_budget=None,
                        timeout=None) -> PositionStats:
    """Counts of winning positions in four position classes plus the
    largest winning and losing cubes."""
    game, region = _solve(spec, "strict", robotics, node_budget, timeout,
                          record=False)
    mgr = game.mgr
    pos = game.positions
    win = region.win
    n = len(pos)

    def cls(pred):
        return ClassCount(total=mgr.count_models(pred, pos),
                          winning=mgr.count_models(pred & win, pos))

    classes = {
        "all": cls(mgr.true),
        "init_assumptions": cls(game.init_env),
        "init_guarantees": cls(game.init_sys),
        "init_both": cls(game.init_env & game.init_sys),
    }
    assert classes["all"].total == 1 << n
    wcubes, lcubes = [], []
    for c in mgr.prime_cubes(win, pos):
        wcubes.append(c)
        if len(wcubes) >= max_cubes:
            break
    for c in mgr.prime_cubes(~win, pos):
        lcubes.append(c)
        if len(lcubes) >= max_cubes:
            break
    return PositionStats(classes=classes, winning_cubes=wcubes,
                         losing_cubes=lcubes,
                         realizable=check_realizability(game, region))


# ----------------------------------------------------------------------
# positions from which assumptions can be falsified

@dataclass
class FalsificationResult:
    count: int
    cubes: list[Cube]
    game: SymbolicGame
    region_bdd: object  # BddRef over game.positions


def assumption_falsification(spec: BooleanSpec, max_cubes: int = 10,
                             node_budget=None,
                             timeout=None) -> FalsificationResult:
    """Winning set of the game whose only system goal is FALSE: exactly
    the positions from which the system can force an assumption
    violation."""
    impossible = BoolPart(ir=IR_FALSE, text="FALSE", kind="sys_liveness",
                          index=0, synthetic=True)
    variant = _variant(spec, add={"sys_liveness": []})
    variant.parts["sys_liveness"] = [impossible]
    game, region = _solve(variant, "strict", False, node_budget, timeout,
                          record=False)
    mgr = game.mgr
    cubes = []
    for c in mgr.prime_cubes(region.win, game.positions):
        cubes.append(c)
        if len(cubes) >= max_cubes:
            break
    return FalsificationResult(
        count=mgr.count_models(region.win, game.positions),
        cubes=cubes, game=game, region_bdd=region.win)


# ----------------------------------------------------------------------
# superfluous assumptions

@dataclass
class AssumptionVerdict:
    kind: str
    index: int
    text: str
    test_a: bool          # removing it changes realizability
    test_b: bool          # it makes more positions winning
    test_c: bool          # it shrinks some reactive distance
    test_d: bool          # ... at a position the canonical machine reaches
    test_c_goals: list[int] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return ("useful" if (self.test_a or self.test_b or self.test_c
                             or self.test_d) else "superfluous")


def _strata_tables(region: WinningRegion, props):
    mgr = region.game.mgr
    return [[mgr.to_truthtable(s, props) for s in per_goal]
            for per_goal in region.strata]


def _pad(tables, d, full):
    if not tables:
        return full
    return tables[min(d, len(tables) - 1)]


def classify_assumptions(spec: BooleanSpec, robotics=False, node_budget=None,
                         timeout=None) -> list[AssumptionVerdict]:
    """Four-test classification of every user assumption.

    An assumption is superfluous when removing it neither changes
    realizability (a) nor the winning set (b) nor any reactive distance
    (c), including distances at the reachable states of the canonically
    extracted machine (d).
    """
    game, region = _solve(spec, "strict", robotics, node_budget, timeout)
    if check_realizability(game, region) != "realizable":
        raise AnalysisError(
            "assumption classification needs a realizable specification")
    mgr = game.mgr
    props = game.positions
    win_full = mgr.to_truthtable(region.win, props)
    strata_full = _strata_tables(region, props)
    machine = extract_strategy(game, region)
    n_goals = len(region.strata)
    # positions the machine visits, split by pursued goal
    reach: list[int] = [0] * n_goals
    pspace_bits = len(props)
    for st in machine.states:
        posmap = machine.position(st)
        idx = 0
        for k, p in enumerate(props):
            if posmap[p]:
                idx |= 1 << (pspace_bits - 1 - k)
        reach[st.goal] |= 1 << idx

    verdicts = []
    for kind in ("env_init", "env_trans", "env_liveness"):
        for part in spec.parts[kind]:
            if part.synthetic:
                continue
            sub = _variant(spec, drop=(kind, part.index))
            g2, r2 = _solve(sub, "strict", robotics, node_budget, timeout)
            win_wo = g2.mgr.to_truthtable(r2.win, g2.positions)
            strata_wo = _strata_tables(r2, g2.positions)
            test_a = check_realizability(g2, r2) != "realizable"
            test_b = win_full != win_wo  # removal never grows the set
            both = win_full & win_wo
            test_c_goals = []
            test_d = False
            for j in range(n_goals):
                depth = max(len(strata_full[j]), len(strata_wo[j]))
                helped = 0
                for d in range(depth):
                    sf = _pad(strata_full[j], d, win_full)
                    sw = _pad(strata_wo[j], d, win_wo)
                    helped |= sf & ~sw & both
                if helped:
                    test_c_goals.append(j)
                    if helped & reach[j]:
                        test_d = True
            verdicts.append(AssumptionVerdict(
                kind=kind, index=part.index, text=part.text,
                test_a=test_a, test_b=test_b, test_c=bool(test_c_goals),
                test_d=test_d, test_c_goals=test_c_goals))
    return verdicts


# ----------------------------------------------------------------------
# error resilience against assumption glitches

@dataclass
class ResilienceResult:
    level: float            # int level or INFINITE
    exceeded: bool = False  # True when the search stopped at max_k

    def render(self, max_k: int) -> str:
        if self.level == INFINITE:
            return "infinite"
        if self.exceeded:
            return f"> {max_k}"
        return str(int(self.level))


def error_resilience(spec: BooleanSpec, max_k: int = 16, robotics=False,
                     node_budget=None, timeout=None) -> ResilienceResult:
    """Largest glitch budget under which the specification stays
    realizable.

    A glitch is an environment transition violating exactly one safety
    assumption conjunct (all others still hold); liveness assumptions
    never glitch.  The budget-k winning sets form a shrinking chain
    W_0 over W_1 ... where W_{k+1} is the winning set of the base game
    restricted to positions from which every glitch successor admits a
    system reply back into W_k.  Chain stabilization proves saturation,
    i.e. an infinite level.
    """
    if max_k < 1:
        raise AnalysisError("max_k must be at least 1")
    game, region = _solve(spec, "strict", robotics, node_budget, timeout,
                          record=False)
    if check_realizability(game, region) != "realizable":
        raise AnalysisError("error resilience needs a realizable specification")
    mgr = game.mgr
    parts = [b for (_p, b) in game.trans_env_parts]
    if not parts:
        return ResilienceResult(level=INFINITE)
    # transitions violating exactly one assumption conjunct
    glitch = mgr.false
    for ell in range(len(parts)):
        term = ~parts[ell]
        for m in range(len(parts)):
            if m != ell:
                term = term & parts[m]
        glitch = glitch | term
    if glitch.is_false():
        return ResilienceResult(level=INFINITE)

    w = region.win
    for k in range(1, max_k + 1):
        canv = mgr.and_exists(game.trans_sys, game.prime(w),
                              game.primed_outputs)
        hole = mgr.and_exists(glitch, ~canv, game.primed_inputs)
        game.position_filter = ~hole
        region_k = solve_game(game, record=False, start=w)
        game.position_filter = None
        if region_k.win == w:
            return ResilienceResult(level=INFINITE)
        if check_realizability(game, region_k) != "realizable":
            return ResilienceResult(level=k - 1)
        w = region_k.win
    return ResilienceResult(level=max_k, exceeded=True)


# ----------------------------------------------------------------------
# moving output decisions before the input

@dataclass
class PrecommitResult:
    per_output: dict[str, bool]
    maximal_set: list[str]


def precommit_analysis(spec: BooleanSpec, robotics=False, node_budget=None,
                       timeout=None) -> PrecommitResult:
    """Which outputs can have their next value fixed before the next
    input is observed, individually and greedily jointly."""
    game, region = _solve(spec, "strict", robotics, node_budget, timeout,
                          record=False)
    if check_realizability(game, region) != "realizable":
        raise AnalysisError("precommit analysis needs a realizable specification")

    def realizable_with(outs: list[str]) -> bool:
        game.precommit = outs
        try:
            r = solve_game(game, record=False)
            return check_realizability(game, r) == "realizable"
        finally:
            game.precommit = None

    per_output = {}
    for o in spec.output_props:
        per_output[o] = realizable_with([o])
    maximal: list[str] = []
    for o in spec.output_props:
        if per_output[o] and realizable_with(maximal + [o]):
            maximal.append(o)
    return PrecommitResult(per_output=per_output, maximal_set=maximal)


# ----------------------------------------------------------------------
# stuck-at faults

@dataclass
class StuckAtTable:
    direction: str                       # "outputs" | "inputs"
    baseline: str
    entries: dict[tuple[str, bool], str]  # (signal, value) -> verdict


def stuck_at_analysis(spec: BooleanSpec, robotics=False, node_budget=None,
                      timeout=None) -> StuckAtTable:
    """Realizability with one signal forced constant from power-on.

    Realizable specification: outputs are stuck one by one; a verdict of
    realizable means the output never needs to react.  Unrealizable
    specification: inputs are stuck via added assumptions; persisting
    unrealizability means that input's freedom is not the cause.
    """
    game, region = _solve(spec, "strict", robotics, node_budget, timeout,
                          record=False)
    baseline = check_realizability(game, region)
    if baseline == "realizable":
        direction, signals = "outputs", spec.output_props
        init_kind, safe_kind = "sys_init", "sys_trans"
    else:
        direction, signals = "inputs", spec.input_props
        init_kind, safe_kind = "env_init", "env_trans"
    entries = {}
    for sig in signals:
        for value in (False, True):
            lit_now = ir_var(sig) if value else ir_not(ir_var(sig))
            lit_next = (ir_var(sig, True) if value
                        else ir_not(ir_var(sig, True)))
            text = f"{sig} stuck at {'1' if value else '0'}"
            variant = _variant(spec, add={
                init_kind: [BoolPart(lit_now, text, init_kind, 10_000,
                                     synthetic=True)],
                safe_kind: [BoolPart(lit_next, text, safe_kind, 10_000,
                                     synthetic=True)],
            })
            g2, r2 = _solve(variant, "strict", robotics, node_budget, timeout,
                            record=False)
            entries[(sig, value)] = check_realizability(g2, r2)
    return StuckAtTable(direction=direction, baseline=baseline,
                        entries=entries)
