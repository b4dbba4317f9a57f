import random
from pathlib import Path

import pytest

from gr1report import parse_spec, compile_to_boolean

SPEC_DIR = Path(__file__).resolve().parent.parent / "specs"


def load_spec(name: str):
    doc = parse_spec((SPEC_DIR / f"{name}.spec").read_text())
    return compile_to_boolean(doc)


def spec_path(name: str) -> Path:
    return SPEC_DIR / f"{name}.spec"


@pytest.fixture
def specs_dir() -> Path:
    return SPEC_DIR


# ----------------------------------------------------------------------
# random specification generator (valid GR(1) shape by construction)

def _formula(rng: random.Random, atoms: list[str], depth: int) -> str:
    if depth == 0 or rng.random() < 0.3:
        a = rng.choice(atoms)
        return a if rng.random() < 0.7 else f"!{a}"
    op = rng.choice(["&", "|", "->", "|", "&"])
    lhs = _formula(rng, atoms, depth - 1)
    rhs = _formula(rng, atoms, depth - 1)
    return f"({lhs} {op} {rhs})"


def random_spec_text(seed: int, max_bits: int = 8) -> str:
    """Small random specification; deterministic in the seed."""
    rng = random.Random(seed)
    n_in = rng.randint(1, 3)
    n_out = rng.randint(1, min(3, max_bits - n_in))
    ins = [f"i{k}" for k in range(n_in)]
    outs = [f"o{k}" for k in range(n_out)]
    in_decls, out_decls = list(ins), list(outs)
    cur = ins + outs
    # sometimes add a small integer variable; its comparisons join the
    # boolean atom pools
    int_cur, int_next = [], []
    if rng.random() < 0.4 and n_in + n_out + 2 <= max_bits:
        name = "v0"
        hi = rng.choice([2, 3])
        owner_in = rng.random() < 0.5
        (in_decls if owner_in else out_decls).append(f"{name}: 0...{hi}")
        c = rng.randint(0, hi)
        int_cur = [f"({name} = {c})", f"({name} < {max(1, hi)})",
                   f"({name} + 1 > {c})"]
        int_next = [f"(X({name}) = {name})", f"(X({name}) = {name} + 1)",
                    f"(X({name}) <= {hi - 1})"]
        cur = cur + int_cur
    env_atoms = cur + [f"X({i})" for i in ins]
    sys_atoms = cur + [f"X({v})" for v in ins + outs]
    if int_cur:
        sys_atoms = sys_atoms + int_next
        env_atoms = env_atoms + (int_next if owner_in else [])

    lines = ["[INPUT]"] + in_decls + ["[OUTPUT]"] + out_decls
    if rng.random() < 0.5:
        lines += ["[ENV_INIT]", _formula(rng, ins, 1)]
    if rng.random() < 0.5:
        lines += ["[SYS_INIT]", _formula(rng, cur, 1)]
    if rng.random() < 0.8:
        lines.append("[ENV_TRANS]")
        for _ in range(rng.randint(1, 2)):
            lines.append(_formula(rng, env_atoms, 2))
    if rng.random() < 0.9:
        lines.append("[SYS_TRANS]")
        for _ in range(rng.randint(1, 2)):
            lines.append(_formula(rng, sys_atoms, 2))
    if rng.random() < 0.7:
        lines.append("[ENV_LIVENESS]")
        for _ in range(rng.randint(1, 3)):
            lines.append(_formula(rng, sys_atoms, 1))
    lines.append("[SYS_LIVENESS]")
    for _ in range(rng.randint(1, 3)):
        lines.append(_formula(rng, sys_atoms, 1))
    return "\n".join(lines) + "\n"


def random_boolean_spec(seed: int, max_bits: int = 8):
    return compile_to_boolean(parse_spec(random_spec_text(seed, max_bits)))
