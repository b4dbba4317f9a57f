"""BDD manager: canonicity, operations, counting, prime cubes."""

import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from gr1report.bdd import BddManager, Cube, BddError, ResourceLimitError
from gr1report.oracle import brute_force_primes

VARS = ["a", "b", "c", "d", "e"]


def fresh(n=5):
    m = BddManager()
    for v in VARS[:n]:
        m.declare_signal(v)
    return m


# random expression trees evaluated both as BDDs and directly
def eval_tree(tree, env):
    kind = tree[0]
    if kind == "var":
        return env[tree[1]]
    if kind == "const":
        return tree[1]
    if kind == "not":
        return not eval_tree(tree[1], env)
    a, b = eval_tree(tree[1], env), eval_tree(tree[2], env)
    return {"and": a and b, "or": a or b, "xor": a != b,
            "implies": (not a) or b, "iff": a == b}[kind]


def build_bdd(m, tree):
    kind = tree[0]
    if kind == "var":
        return m.var(tree[1])
    if kind == "const":
        return m.true if tree[1] else m.false
    if kind == "not":
        return ~build_bdd(m, tree[1])
    return m.apply(kind, build_bdd(m, tree[1]), build_bdd(m, tree[2]))


@st.composite
def trees(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        if draw(st.integers(0, 6)) == 0:
            return ("const", draw(st.booleans()))
        return ("var", draw(st.sampled_from(VARS)))
    op = draw(st.sampled_from(["and", "or", "xor", "implies", "iff", "not"]))
    if op == "not":
        return ("not", draw(trees(depth=depth - 1)))
    return (op, draw(trees(depth=depth - 1)), draw(trees(depth=depth - 1)))


@settings(max_examples=200, deadline=None)
@given(trees(), trees())
def test_canonicity_matches_truth_tables(t1, t2):
    m = fresh()
    f, g = build_bdd(m, t1), build_bdd(m, t2)
    equal = all(
        eval_tree(t1, dict(zip(VARS, bits))) == eval_tree(t2, dict(zip(VARS, bits)))
        for bits in itertools.product([False, True], repeat=5))
    assert (f == g) == equal


@settings(max_examples=100, deadline=None)
@given(trees())
def test_count_models_matches_enumeration(t):
    m = fresh()
    f = build_bdd(m, t)
    want = sum(
        eval_tree(t, dict(zip(VARS, bits)))
        for bits in itertools.product([False, True], repeat=5))
    assert m.count_models(f, VARS) == want


def test_apply_basics():
    m = fresh(2)
    a, b = m.var("a"), m.var("b")
    assert (a & ~a).is_false()
    assert (a | m.true).is_true()
    assert (a ^ a).is_false()
    assert m.apply("diff", a | b, b) == (a & ~b)
    assert a.implies(a).is_true()
    assert a.iff(~(~a)).is_true()


def test_quantify():
    m = fresh(3)
    a, b = m.var("a"), m.var("b")
    assert m.exists(["a"], a & b) == b
    assert m.forall(["a"], a | b) == b
    assert m.exists([], a & b) == (a & b)
    assert m.forall(["a"], a & b).is_false()


def test_rename_register_checks():
    m = fresh(2)
    a = m.var("a")
    ap = m.rename(a, "prime")
    assert m.support(ap) == ["a'"]
    assert m.rename(ap, "unprime") == a
    assert m.rename(m.true, "prime").is_true()
    with pytest.raises(BddError, match="wrong register"):
        m.rename(ap, "prime")


def test_manager_mismatch_rejected():
    m1, m2 = fresh(1), fresh(1)
    with pytest.raises(BddError, match="different manager"):
        m1.apply("and", m1.var("a"), m2.var("a"))


def test_count_models_support_check():
    m = fresh(2)
    with pytest.raises(BddError, match="escapes"):
        m.count_models(m.var("a") & m.var("b"), ["a"])


def test_pick_min_model_is_lexicographic():
    m = fresh(3)
    a, b, c = m.var("a"), m.var("b"), m.var("c")
    f = (a & c) | (b & c)
    assert m.pick_min_model(f, ["a", "b", "c"]) == {
        "a": False, "b": True, "c": True}


def test_garbage_collection_keeps_referenced_nodes():
    m = fresh(3)
    a, b, c = m.var("a"), m.var("b"), m.var("c")
    keep = (a & b) | c

    def churn():
        for _ in range(200):
            tmp = (a | b) & (b | c) & (~a | c)
            tmp = tmp ^ keep

    churn()
    before = len(m)
    freed = m.collect()
    assert freed > 0 and len(m) < before
    # the kept function still evaluates correctly after collection
    assert m.count_models(keep, ["a", "b", "c"]) == 5


def test_node_budget():
    m = BddManager(node_budget=16)
    for v in VARS:
        m.declare_signal(v)
    with pytest.raises(ResourceLimitError):
        f = m.true
        for v in VARS:
            f = f & (m.var(v) ^ m.var(v + "'"))


def test_to_dot():
    m = fresh(2)
    dot = m.to_dot(m.var("a") & m.var("b"))
    assert "digraph" in dot and "solid" in dot and "dashed" in dot


# ----------------------------------------------------------------------
# prime implicant enumeration

def tt_of(m, f, names):
    return m.to_truthtable(f, names)


def cubes_as_sets(cubes, names):
    idx = {n: i for i, n in enumerate(names)}
    return {frozenset((idx[n], v) for n, v in c.literals) for c in cubes}


def test_prime_cubes_examples():
    m = fresh(3)
    a, b, c = m.var("a"), m.var("b"), m.var("c")
    cubes = list(m.prime_cubes(a | (b & c), ["a", "b", "c"]))
    assert [set(c.literals) for c in cubes] == [
        {("a", True)}, {("b", True), ("c", True)}]
    assert list(m.prime_cubes(m.true, ["a", "b"])) == [Cube(())]
    xor = list(m.prime_cubes(a ^ b, ["a", "b"]))
    assert sorted(str(c) for c in xor) == ["!a & b", "a & !b"]


def test_prime_cubes_empty_for_false():
    m = fresh(2)
    assert list(m.prime_cubes(m.false, ["a", "b"])) == []


def test_prime_cubes_ordered_largest_first():
    m = fresh(4)
    f = m.var("a") | (m.var("b") & m.var("c") & m.var("d"))
    sizes = [len(c) for c in m.prime_cubes(f, ["a", "b", "c", "d"])]
    assert sizes == sorted(sizes)


@settings(max_examples=120, deadline=None)
@given(trees())
def test_prime_cubes_properties(t):
    m = fresh()
    f = build_bdd(m, t)
    if f.is_false():
        return
    cubes = list(m.prime_cubes(f, VARS))
    union = m.false
    for c in cubes:
        lit = m.true
        for name, val in c.literals:
            lit = lit & (m.var(name) if val else ~m.var(name))
        # every cube is an implicant
        assert (lit & ~f).is_false()
        union = union | lit
    # the cubes cover the function
    assert union == f
    # no cube strictly contains another
    sets = [set(c.literals) for c in cubes]
    for i, s in enumerate(sets):
        for j, t2 in enumerate(sets):
            assert i == j or not s < t2


def test_prime_cubes_match_bruteforce_oracle():
    rng = random.Random(7)
    for n in (3, 4, 5):
        m = fresh(n)
        names = VARS[:n]
        for _ in range(30):
            table = rng.getrandbits(1 << n)
            if table == 0:
                continue
            f = m.false
            for i in range(1 << n):
                if (table >> i) & 1:
                    lit = m.true
                    for k, name in enumerate(names):
                        bit = (i >> (n - 1 - k)) & 1
                        lit = lit & (m.var(name) if bit else ~m.var(name))
                    f = f | lit
            got = cubes_as_sets(m.prime_cubes(f, names), names)
            want = brute_force_primes(table, n)
            assert got == want


def test_prime_cubes_sixteen_variables():
    # sparse function over 16 variables: agreement with the merge oracle
    names = [f"v{i}" for i in range(16)]
    m = BddManager()
    for nm in names:
        m.declare_signal(nm)
    rng = random.Random(3)
    minterms = sorted(rng.sample(range(1 << 16), 40))
    f = m.false
    table = 0
    for i in minterms:
        table |= 1 << i
        lit = m.true
        for k, nm in enumerate(names):
            bit = (i >> (16 - 1 - k)) & 1
            lit = lit & (m.var(nm) if bit else ~m.var(nm))
        f = f | lit
    got = cubes_as_sets(m.prime_cubes(f, names), names)
    assert got == brute_force_primes(table, 16)
