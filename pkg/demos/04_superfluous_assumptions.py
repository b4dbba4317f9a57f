# Four increasingly fine-grained tests per assumption:
#   a) does removing it change realizability?
#   b) does it make more positions winning?
#   c) does it shorten some reactive distance?
#   d) ... at a position the extracted strategy actually reaches?
#
# In the doors workspace neither door assumption affects realizability,
# the top door only ever helps the detour to the lower-left corner (and
# never on the canonical strategy), while the bottom door speeds up
# both goals.
from pathlib import Path

from gr1report import parse_spec, compile_to_boolean
from gr1report.analyses import classify_assumptions

SPECS = Path(__file__).resolve().parent.parent / "specs"

spec = compile_to_boolean(parse_spec((SPECS / "doors.spec").read_text()))
for v in classify_assumptions(spec):
    print(f"{v.text:14s} a={v.test_a!s:5s} b={v.test_b!s:5s} "
          f"c={v.test_c!s:5s} d={v.test_d!s:5s} "
          f"helps goals {v.test_c_goals} -> {v.verdict}")
