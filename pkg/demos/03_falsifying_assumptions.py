# Where can the system win only by wrecking its environment
# assumptions?  Appending FALSE to the system goals answers exactly
# that: whatever remains winning can only be won by falsification.
#
# In the two-robot workspace the primary robot can corner the secondary
# one against the top wall; weakening the progress assumption to excuse
# the top row removes every such position.
from pathlib import Path

from gr1report import parse_spec, compile_to_boolean
from gr1report.analyses import assumption_falsification

SPECS = Path(__file__).resolve().parent.parent / "specs"

for name in ("tworobot.spec", "tworobot_weak.spec"):
    spec = compile_to_boolean(parse_spec((SPECS / name).read_text()))
    res = assumption_falsification(spec)
    print(f"{name}: {res.count} positions can force an assumption violation")
    for cube in res.cubes[:3]:
        print("   e.g.", cube)
