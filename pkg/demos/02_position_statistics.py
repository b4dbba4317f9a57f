# Winning/losing position statistics catch a classic pre-announcement
# bug: the buggy mutex has NO losing positions at all, so nothing stops
# the system from promising two grants at once.
from pathlib import Path

from gr1report import parse_spec, compile_to_boolean
from gr1report.analyses import position_statistics

SPECS = Path(__file__).resolve().parent.parent / "specs"


def show(name):
    spec = compile_to_boolean(parse_spec((SPECS / name).read_text()))
    st = position_statistics(spec)
    print(f"== {name} ({st.realizable})")
    for cls, c in st.classes.items():
        print(f"   {cls:18s} total {c.total:4d}   winning {c.winning:4d}")
    print("   largest losing cubes:",
          [str(c) for c in st.losing_cubes] or "none")


show("mutex.spec")        # all 64 positions winning: suspicious!
show("mutex_fixed.spec")  # losing exactly at promise1 & promise2
