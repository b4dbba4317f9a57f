"""Two-player synthesis game: construction, solving, strategy extraction.

The game is solved with the three-nested fixpoint for generalized
reactivity(1).  Goals and liveness assumptions are transition predicates
(they may mention next-state variables), so the usual position-level
disjunction moves inside the controllable predecessor: the system may
answer each environment move with a goal transition, a strict-progress
transition, or an assumption-starving transition, independently per
move:

    cpre(T) = forall I' (trans_env -> exists O' (trans_sys & T))

    win = nu Z. AND_j mu Y. OR_i nu X.
              cpre( (g_j & Z') | Y' | (!a_i & X') )

The mu-iterates of the final pass are kept as distance strata: a
position's reactive distance to goal j is the index of the first
stratum containing it, so that one iterate charges for one transition
or one whole waiting phase.  To make that charge honest, each iterate
first grows with stationary waiting only (assumption-starving moves
that repeat the current output); the unrestricted waiting disjunct is
used as a fallback when the stationary chain stalls, which keeps the
winning-set limit exact.  The inner nu-fixpoints are kept per stratum
and assumption for deterministic strategy extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bdd import BddManager, BddRef
from .compiler import BooleanSpec, BoolPart, IR

ENV_VIOL = "__env_viol"
SYS_VIOL = "__sys_viol"


class GameError(Exception):
    pass


def ir_to_bdd(mgr: BddManager, ir: IR, memo: dict | None = None) -> BddRef:
    if memo is None:
        memo = {}

    def rec(e: IR) -> BddRef:
        r = memo.get(e)
        if r is not None:
            return r
        tag = e[0]
        if tag == "const":
            r = mgr.true if e[1] else mgr.false
        elif tag == "var":
            r = mgr.var(e[1] + "'" if e[2] else e[1])
        elif tag == "not":
            r = ~rec(e[1])
        else:
            a, b = rec(e[1]), rec(e[2])
            r = mgr.apply({"and": "and", "or": "or", "xor": "xor",
                           "iff": "iff", "imp": "implies"}[tag], a, b)
        memo[e] = r
        return r

    return rec(ir)


@dataclass
class SymbolicGame:
    mgr: BddManager
    spec: BooleanSpec
    semantics: str                 # strict | nonstrict
    robotics: bool
    inputs: list[str]              # unprimed input propositions
    outputs: list[str]             # unprimed outputs (trackers included)
    init_env: BddRef
    init_sys: BddRef
    init_env_user: BddRef          # original init assumptions
    init_sys_user: BddRef          # original init guarantees (= init_sys when strict)
    trans_env: BddRef
    trans_sys: BddRef
    live_env: list[BddRef]
    live_sys: list[BddRef]
    trans_env_parts: list[tuple[BoolPart, BddRef]] = field(default_factory=list)
    trackers: list[str] = field(default_factory=list)
    position_filter: BddRef | None = None   # conjoined into every cox
    precommit: list[str] | None = None      # outputs fixed before inputs

    def __post_init__(self):
        self.positions = self.inputs + self.outputs
        order = {n: i for i, n in enumerate(self.mgr.var_names)}
        self.positions.sort(key=order.__getitem__)
        self.primed_inputs = [n + "'" for n in self.inputs]
        self.primed_outputs = [n + "'" for n in self.outputs]
        self._ts_goal = [self.trans_sys & g for g in self.live_sys]
        self._ts_nota = [self.trans_sys & ~a for a in self.live_env]
        stay = self.mgr.true
        for o in self.outputs:
            stay = stay & self.mgr.var(o).iff(self.mgr.var(o + "'"))
        self.stay_outputs = stay

    # -- controllable predecessors -------------------------------------

    def prime(self, v: BddRef) -> BddRef:
        return self.mgr.rename(v, "prime")

    def cpre(self, target: BddRef) -> BddRef:
        """Positions where every legal env move has a legal sys reply whose
        transition satisfies `target` (a predicate over current and next
        variables).  A deadlocked environment counts as controllable."""
        m = self.mgr
        if self.precommit:
            fixed = [o + "'" for o in self.precommit]
            rest = [o for o in self.primed_outputs if o not in fixed]
            can = m.and_exists(self.trans_sys, target, rest)
            bad = m.and_exists(self.trans_env, ~can, self.primed_inputs)
            good = m.exists(fixed, ~bad)
        else:
            can = m.and_exists(self.trans_sys, target, self.primed_outputs)
            bad = m.and_exists(self.trans_env, ~can, self.primed_inputs)
            good = ~bad
        if self.position_filter is not None:
            good = good & self.position_filter
        return good

    def cox(self, v: BddRef) -> BddRef:
        """Positions where every legal env move has a legal sys reply into v."""
        return self.cpre(self.prime(v))

    def env_pre(self, target: BddRef) -> BddRef:
        """Positions where some legal env move makes every legal sys reply
        satisfy `target` (a stuck system counts as forced)."""
        m = self.mgr
        ok = ~m.and_exists(self.trans_sys, ~target, self.primed_outputs)
        return m.and_exists(self.trans_env, ok, self.primed_inputs)

    def pre_env(self, v: BddRef) -> BddRef:
        return self.env_pre(self.prime(v))


@dataclass
class WinningRegion:
    win: BddRef
    strata: list[list[BddRef]]            # [goal][d] = distance <= d
    xcores: list[list[list[BddRef]]]      # [goal][d][assumption]
    stationary: list[list[bool]]          # [goal][d]: waits were stationary
    game: SymbolicGame

    def distance(self, position: dict[str, bool], goal: int):
        """Smallest stratum index containing the position; inf if losing."""
        for d, s in enumerate(self.strata[goal]):
            if self.game.mgr.eval(s, position):
                return d
        return float("inf")


def _nu_x(game: SymbolicGame, base: BddRef, nota: BddRef) -> BddRef:
    x = game.mgr.true
    while True:
        xn = game.cpre(base | (nota & game.prime(x)))
        if xn == x:
            return x
        x = xn


def _mu_y(game: SymbolicGame, z: BddRef, j: int):
    """One mu-Y evaluation for goal j against outer value z.
    Returns (y, strata list, xcore rows, stationary flags)."""
    mgr = game.mgr
    goal_z = game.live_sys[j] & game.prime(z)
    y = mgr.false
    strata: list[BddRef] = []
    xrows: list[list[BddRef]] = []
    flags: list[bool] = []
    while True:
        base = goal_z | game.prime(y)
        ynew = mgr.false
        xrow = []
        for i in range(len(game.live_env)):
            x = _nu_x(game, base, ~game.live_env[i] & game.stay_outputs)
            xrow.append(x)
            ynew = ynew | x
        stationary = True
        if ynew == y:
            # free waiting made no progress; allow moving waits so the
            # chain still converges to the exact winning set
            ynew = mgr.false
            xrow = []
            for i in range(len(game.live_env)):
                x = _nu_x(game, base, ~game.live_env[i])
                xrow.append(x)
                ynew = ynew | x
            stationary = False
            if ynew == y:
                break
        y = ynew
        strata.append(y)
        xrows.append(xrow)
        flags.append(stationary)
    return y, strata, xrows, flags


def solve_game(game: SymbolicGame, record: bool = True,
               start: BddRef | None = None) -> WinningRegion:
    """GR(1) fixpoint; resource limits surface as ResourceLimitError.

    `start` may give a known upper bound on the winning set (e.g. the
    previous element of a shrinking chain of games); correctness needs
    one sweep to be deflationary from it, which holds whenever `start`
    is the winning set of an otherwise identical game with more system
    power.
    """
    mgr = game.mgr
    z = start if start is not None else mgr.true
    while True:
        zprev = z
        for j in range(len(game.live_sys)):
            z, _, _, _ = _mu_y(game, z, j)
        # safe point: everything the solver keeps is held through BddRefs
        mgr.maybe_collect()
        if z == zprev:
            break
    if not record:
        return WinningRegion(win=z, strata=[], xcores=[], stationary=[],
                             game=game)
    strata, xcores, stat = [], [], []
    for j in range(len(game.live_sys)):
        y, ys, xrows, flags = _mu_y(game, z, j)
        if y != z:
            raise GameError("fixpoint recording pass diverged")
        strata.append(ys)
        xcores.append(xrows)
        stat.append(flags)
    return WinningRegion(win=z, strata=strata, xcores=xcores,
                         stationary=stat, game=game)


def check_realizability(game: SymbolicGame, region) -> str:
    """'realizable' or 'unrealizable' for a solved region (or plain
    winning-set BDD).

    Standard semantics: every initial input admitted by the assumptions
    has some initial output satisfying the guarantees inside the winning
    set.  Robotics semantics: every such output must be winning.
    """
    mgr = game.mgr
    win = region.win if isinstance(region, WinningRegion) else region
    if game.robotics:
        trackers = [t for t in game.trackers]
        inner = game.init_sys & win
        if trackers:
            inner = mgr.exists(trackers, inner)
        user_outs = [o for o in game.outputs if o not in game.trackers]
        cond = (game.init_env_user & game.init_sys_user).implies(inner)
        ok = mgr.forall(game.inputs + user_outs, cond)
    elif game.precommit:
        fixed = list(game.precommit)
        rest = [o for o in game.outputs if o not in fixed]
        some = mgr.exists(rest, game.init_sys & win)
        cond = mgr.forall(game.inputs, game.init_env.implies(some))
        ok = mgr.exists(fixed, cond)
        return "realizable" if ok.is_true() else "unrealizable"
    else:
        some = mgr.exists(game.outputs, game.init_sys & win)
        ok = mgr.forall(game.inputs, game.init_env.implies(some))
    return "realizable" if ok.is_true() else "unrealizable"


# ----------------------------------------------------------------------
# construction

def build_game(spec: BooleanSpec, semantics: str = "strict",
               robotics: bool = False, node_budget: int | None = None,
               deadline: float | None = None) -> SymbolicGame:
    """Build the synthesis game for a compiled specification.

    strict: the native game; the system loses on violating its safety
    parts unless the environment violated first.  nonstrict: classical
    implication, encoded with two violation-tracker bits and transformed
    liveness; solved by the same fixpoint.
    """
    if semantics not in ("strict", "nonstrict"):
        raise GameError(f"unknown semantics {semantics!r}")
    mgr = BddManager(node_budget=node_budget)
    mgr.deadline = deadline
    for p in spec.props:
        mgr.declare_signal(p)
    trackers: list[str] = []
    if semantics == "nonstrict":
        for t in (ENV_VIOL, SYS_VIOL):
            if t in spec.props:
                raise GameError(f"proposition {t!r} is reserved")
            mgr.declare_signal(t)
            trackers.append(t)
    memo: dict = {}

    def conj(kind: str) -> BddRef:
        out = mgr.true
        for part in spec.parts[kind]:
            out = out & ir_to_bdd(mgr, part.ir, memo)
        return out

    init_env = conj("env_init")
    init_sys = conj("sys_init")
    trans_env = conj("env_trans")
    trans_sys = conj("sys_trans")
    live_env = [ir_to_bdd(mgr, p.ir, memo) for p in spec.parts["env_liveness"]]
    live_sys = [ir_to_bdd(mgr, p.ir, memo) for p in spec.parts["sys_liveness"]]
    if not live_env:
        live_env = [mgr.true]
    if not live_sys:
        live_sys = [mgr.true]
    te_parts = [(p, ir_to_bdd(mgr, p.ir, memo)) for p in spec.parts["env_trans"]]

    if semantics == "strict":
        return SymbolicGame(
            mgr=mgr, spec=spec, semantics=semantics, robotics=robotics,
            inputs=list(spec.input_props), outputs=list(spec.output_props),
            init_env=init_env, init_sys=init_sys,
            init_env_user=init_env, init_sys_user=init_sys,
            trans_env=trans_env, trans_sys=trans_sys,
            live_env=live_env, live_sys=live_sys,
            trans_env_parts=te_parts)

    # classical implication: free moves, violations are tracked and folded
    # into the liveness conditions (monotone bits make G/F collapse to GF)
    ev, sv = mgr.var(ENV_VIOL), mgr.var(SYS_VIOL)
    evp, svp = mgr.var(ENV_VIOL + "'"), mgr.var(SYS_VIOL + "'")
    ts_ns = evp.iff(ev | ~trans_env) & svp.iff(sv | ~trans_sys)
    init_sys_ns = ev.iff(~init_env) & sv.iff(~init_sys)
    live_env_ns = [a & ~ev for a in live_env]
    live_sys_ns = [g & ~sv for g in live_sys]
    return SymbolicGame(
        mgr=mgr, spec=spec, semantics=semantics, robotics=robotics,
        inputs=list(spec.input_props),
        outputs=list(spec.output_props) + trackers,
        init_env=mgr.true, init_sys=init_sys_ns,
        init_env_user=init_env, init_sys_user=init_sys,
        trans_env=mgr.true, trans_sys=ts_ns,
        live_env=live_env_ns, live_sys=live_sys_ns,
        trans_env_parts=[], trackers=trackers)


# ----------------------------------------------------------------------
# strategy extraction

@dataclass(frozen=True)
class MealyState:
    sid: int
    inputs: tuple[bool, ...]
    outputs: tuple[bool, ...]
    goal: int


@dataclass
class MealyMachine:
    input_names: list[str]
    output_names: list[str]
    states: list[MealyState]
    initial: list[int]
    transitions: dict[int, list[tuple[tuple[bool, ...], int]]]
    n_goals: int

    def state_key(self, s: MealyState):
        return (s.inputs, s.outputs, s.goal)

    def position(self, s: MealyState) -> dict[str, bool]:
        pos = dict(zip(self.input_names, s.inputs))
        pos.update(zip(self.output_names, s.outputs))
        return pos

    def to_json(self, spec: BooleanSpec | None = None) -> dict:
        def val_map(names, values):
            m = dict(zip(names, values))
            out = {k: v for k, v in m.items()}
            if spec is not None:
                ints = {n: v for n, v in spec.decode(m).items()
                        if n in spec.groups}
                if ints:
                    return {"bits": out, "ints": ints}
            return {"bits": out}

        states = []
        for s in self.states:
            entry = {"id": s.sid, "goal": s.goal}
            entry["inputs"] = val_map(self.input_names, s.inputs)
            entry["outputs"] = val_map(self.output_names, s.outputs)
            states.append(entry)
        transitions = []
        for sid in sorted(self.transitions):
            for ivals, nxt in self.transitions[sid]:
                transitions.append({
                    "from": sid,
                    "input": val_map(self.input_names, ivals),
                    "to": nxt,
                })
        return {"states": states, "initial": list(self.initial),
                "transitions": transitions}


def _assign_tuple(model: dict[str, bool], names: list[str]) -> tuple[bool, ...]:
    return tuple(model[n] for n in names)


def extract_strategy(game: SymbolicGame, region: WinningRegion) -> MealyMachine:
    """Deterministic winning machine, states labeled (input, output, goal).

    From a state pursuing goal j the machine takes, per admissible input:
    a goal transition into the winning set when one exists (then rotates
    to goal j+1), else a stratum-decreasing transition, else a waiting
    move inside the first assumption-starving region containing the
    state.  Ties break to the lexicographically smallest next-output
    cube in variable order.
    """
    if check_realizability(game, region) != "realizable":
        raise GameError("extract_strategy on an unrealizable game")
    mgr = game.mgr
    n_goals = len(game.live_sys)
    win_p = game.prime(region.win)
    goal_move = [game._ts_goal[j] & win_p for j in range(n_goals)]
    strata_p = [[game.prime(s) for s in region.strata[j]]
                for j in range(n_goals)]
    inputs, outputs = game.inputs, game.outputs

    states: dict[tuple, MealyState] = {}
    order: list[MealyState] = []
    transitions: dict[int, list[tuple[tuple[bool, ...], int]]] = {}

    def intern(ivals, ovals, goal) -> MealyState:
        key = (ivals, ovals, goal)
        s = states.get(key)
        if s is None:
            s = MealyState(len(order), ivals, ovals, goal)
            states[key] = s
            order.append(s)
            transitions[s.sid] = []
        return s

    initial: list[int] = []
    init_options = game.init_sys & region.win
    for model in mgr.iter_models(game.init_env, inputs):
        opts = mgr.restrict(init_options, model)
        if opts.is_false():
            raise GameError("initial input without a winning output")
        out_model = mgr.pick_min_model(opts, outputs)
        s = intern(_assign_tuple(model, inputs),
                   _assign_tuple(out_model, outputs), 0)
        if s.sid not in initial:
            initial.append(s.sid)

    queue = list(initial)
    seen = set(initial)
    while queue:
        sid = queue.pop(0)
        st = order[sid]
        pos = dict(zip(inputs, st.inputs))
        pos.update(zip(outputs, st.outputs))
        j = st.goal
        d = region.distance(pos, j)
        if d == float("inf"):
            raise GameError("reached a losing state during extraction")
        env_moves = mgr.restrict(game.trans_env, pos)
        for imodel in mgr.iter_models(env_moves, game.primed_inputs):
            step = dict(pos)
            step.update(imodel)
            # priority 1: take a goal transition and rotate
            opts = mgr.restrict(goal_move[j], step)
            next_goal = (j + 1) % n_goals
            if opts.is_false():
                next_goal = j
                # priority 2: decrease the stratum index
                if d > 0:
                    opts = mgr.restrict(game.trans_sys & strata_p[j][d - 1],
                                        step)
                if d == 0 or opts.is_false():
                    # waiting move in the first starving region holding pos
                    wait_req = (game.stay_outputs if region.stationary[j][d]
                                else mgr.true)
                    opts = mgr.false
                    for i in range(len(game.live_env)):
                        xcore = region.xcores[j][d][i]
                        if not mgr.eval(xcore, pos):
                            continue
                        cand = mgr.restrict(
                            game._ts_nota[i] & wait_req & game.prime(xcore),
                            step)
                        if not cand.is_false():
                            opts = cand
                            break
                    if opts.is_false():
                        raise GameError("no admissible move found")
            omodel = mgr.pick_min_model(opts, game.primed_outputs)
            ivals = tuple(imodel[n + "'"] for n in inputs)
            ovals = tuple(omodel[n + "'"] for n in outputs)
            nxt = intern(ivals, ovals, next_goal)
            transitions[sid].append((ivals, nxt.sid))
            if nxt.sid not in seen:
                seen.add(nxt.sid)
                queue.append(nxt.sid)

    return MealyMachine(
        input_names=list(inputs), output_names=list(outputs),
        states=order, initial=initial, transitions=transitions,
        n_goals=n_goals)


def reactive_distance(region: WinningRegion, position: dict[str, bool],
                      goal: int):
    """Waiting-phase distance of a position to a system goal; inf when
    the position is losing."""
    if not 0 <= goal < len(region.strata):
        raise GameError(f"goal index {goal} out of range")
    return region.distance(position, goal)
