# Two ways to see behavior without interactive simulation: a
# nominal-case lasso trace (environment plays a Buchi strategy for its
# own assumptions against the synthesized controller), and an abstract
# counter-strategy table for safety-decided games.
from pathlib import Path

from gr1report import parse_spec, compile_to_boolean
from gr1report.traces import nominal_trace, abstract_strategy

SPECS = Path(__file__).resolve().parent.parent / "specs"

spec = compile_to_boolean(parse_spec((SPECS / "patrol.spec").read_text()))
tr = nominal_trace(spec, max_steps=24)
print(f"nominal trace: {len(tr.steps)} steps, lasso from {tr.lasso_start}")
for i, step in enumerate(tr.steps):
    region = [k for k, v in step.outputs.items() if v and k.startswith("r")]
    mark = "*" if i >= tr.lasso_start else " "
    print(f" {mark} step {i}: at {region} camera={step.outputs['camera']} "
          f"(env goal {step.env_goal}, sys goal {step.sys_goal})")

# The counter spec is unrealizable purely through its safety parts; the
# table shows the environment pacing requests every other round until
# the mis-specified counter has nowhere to go.
spec = compile_to_boolean(parse_spec((SPECS / "counter.spec").read_text()))
ab = abstract_strategy(spec)
print(f"\nabstract counter-strategy (winner: {ab.winner}):")
names = list(ab.rounds[0])
for name in names:
    cells = ["*" if rd[name] == "star" else str(rd[name])[:5]
             for rd in ab.rounds]
    print(f"   {name:8s} " + " ".join(f"{c:>5s}" for c in cells))
