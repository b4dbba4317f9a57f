# The push-button entry point: run every analysis on a specification
# file and write deterministic JSON plus a self-contained HTML page.
# Equivalent to:  gr1report specs/doors.spec
import json
import tempfile
from pathlib import Path

from gr1report.report import ReportConfig, run_report

SPECS = Path(__file__).resolve().parent.parent / "specs"

out = Path(tempfile.mkdtemp(prefix="gr1report-"))
report = run_report(SPECS / "doors.spec", ReportConfig(max_cubes=5),
                    json_path=out / "doors.report.json",
                    html_path=out / "doors.report.html")

print("baseline:", report.baseline)
for name, entry in report.analyses.items():
    note = "" if entry["status"] == "ok" else f" ({entry['reason']})"
    print(f"  {name:12s} {entry['status']}{note}   "
          f"[{report.timings[name]*1000:.0f} ms]")

data = json.loads((out / "doors.report.json").read_text())
print("\nassumption verdicts from the JSON artifact:")
for a in data["analyses"]["assumptions"]["result"]["assumptions"]:
    print(f"   {a['text']}: {a['verdict']}")
print("\nreports written to", out)
