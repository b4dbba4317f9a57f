# How many one-shot assumption glitches can the system ride out?
#
# The delivery robot tolerates five uncommanded moves: suspiciously
# many.  The missing "raise ready infinitely often" guarantee lets it
# park in a corner and ignore its job.  Adding the guarantee drops the
# tolerance to one glitch, matching the single free cell between the
# delivery pocket and the obstacle.
from pathlib import Path

from gr1report import parse_spec, compile_to_boolean
from gr1report.analyses import error_resilience

SPECS = Path(__file__).resolve().parent.parent / "specs"

for name in ("delivery.spec", "delivery_ready.spec"):
    spec = compile_to_boolean(parse_spec((SPECS / name).read_text()))
    res = error_resilience(spec, max_k=16)
    print(f"{name}: tolerated glitches = {res.render(16)}")
