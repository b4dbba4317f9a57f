# Per-signal sanity checks: which outputs can be decided before seeing
# the next input, and which signals could be wired to a constant?
from pathlib import Path

from gr1report import parse_spec, compile_to_boolean
from gr1report.analyses import precommit_analysis, stuck_at_analysis

SPECS = Path(__file__).resolve().parent.parent / "specs"

# The patrol robot can pick its next region blind, but the camera has
# to mirror the person sensor.
spec = compile_to_boolean(parse_spec((SPECS / "patrol.spec").read_text()))
r = precommit_analysis(spec)
print("precommittable outputs:", [o for o, ok in r.per_output.items() if ok])
print("not precommittable:   ", [o for o, ok in r.per_output.items() if not ok])
print("jointly (greedy):     ", r.maximal_set)

# Stuck-at faults: every motion signal of the delivery robot can be
# stuck at 0 without losing realizability -- the spec never forces the
# robot to actually do anything.
spec = compile_to_boolean(parse_spec((SPECS / "delivery.spec").read_text()))
tbl = stuck_at_analysis(spec)
print(f"\nstuck-at table over {tbl.direction}:")
for (sig, val), verdict in sorted(tbl.entries.items()):
    print(f"   {sig:6s} stuck at {int(val)}: {verdict}")
