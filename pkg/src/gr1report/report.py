"""One-step report generation.

run_report parses, validates, and compiles a specification file, runs
the requested analyses in a fixed canonical order, and writes a
machine-readable JSON report plus a self-contained static HTML page
generated purely from that JSON.

The canonical JSON is byte-identical across runs for the same
(specification, configuration, version); per-analysis wall-clock times
are therefore kept out of it and reported on the Report object and the
log stream instead.
"""

from __future__ import annotations

import hashlib
import html as _html
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .bdd import Cube, ResourceLimitError
from .compiler import compile_to_boolean, validate_gr1_shape
from .syntax import parse_spec
from .game import build_game, solve_game, check_realizability
from .analyses import (
    AnalysisError, semantics_comparison, position_statistics,
    assumption_falsification, classify_assumptions, error_resilience,
    precommit_analysis, stuck_at_analysis,
)
from .traces import nominal_trace, abstract_strategy, TraceError

ANALYSIS_ORDER = ("semantics", "positions", "falsify", "assumptions",
                  "resilience", "precommit", "stuckat", "trace", "abstract")

# structural schema for the canonical JSON artifact (a small JSON-Schema
# subset: type / required / properties / items / enum / additional)
REPORT_SCHEMA = {
    "type": "object",
    "required": ["version", "spec", "config", "baseline", "analyses"],
    "properties": {
        "version": {"type": "string"},
        "spec": {
            "type": "object",
            "required": ["name", "sha256"],
            "properties": {"name": {"type": "string"},
                           "sha256": {"type": "string"}},
        },
        "config": {
            "type": "object",
            "required": ["analyses", "semantics", "robotics", "max_k",
                         "max_cubes", "max_trace_steps", "abstract_horizon"],
            "properties": {
                "analyses": {"type": "array", "items": {"type": "string"}},
                "semantics": {"enum": ["strict", "nonstrict", "both"]},
                "robotics": {"type": "boolean"},
                "max_k": {"type": "integer"},
                "max_cubes": {"type": "integer"},
                "max_trace_steps": {"type": "integer"},
                "abstract_horizon": {"type": "integer"},
            },
        },
        "baseline": {
            "type": "object",
            "required": ["semantics", "realizable"],
            "properties": {
                "semantics": {"enum": ["strict", "nonstrict"]},
                "realizable": {"enum": ["realizable", "unrealizable"]},
            },
        },
        "analyses": {
            "type": "object",
            "values": {
                "type": "object",
                "required": ["status"],
                "properties": {
                    "status": {"enum": ["ok", "skipped"]},
                    "reason": {"type": "string"},
                    "result": {"type": "object"},
                },
            },
        },
    },
}


def validate_report(data, schema=None, path="$"):
    """Check a report dict against REPORT_SCHEMA; returns a list of
    violation strings (empty when valid)."""
    schema = REPORT_SCHEMA if schema is None else schema
    out = []
    kind = schema.get("type")
    if kind == "object":
        if not isinstance(data, dict):
            return [f"{path}: expected object"]
        for key in schema.get("required", ()):
            if key not in data:
                out.append(f"{path}.{key}: missing")
        for key, sub in schema.get("properties", {}).items():
            if key in data:
                out += validate_report(data[key], sub, f"{path}.{key}")
        if "values" in schema:
            for key, val in data.items():
                out += validate_report(val, schema["values"], f"{path}.{key}")
    elif kind == "array":
        if not isinstance(data, list):
            return [f"{path}: expected array"]
        for i, item in enumerate(data):
            out += validate_report(item, schema["items"], f"{path}[{i}]")
    elif kind == "string":
        if not isinstance(data, str):
            out.append(f"{path}: expected string")
    elif kind == "integer":
        if not isinstance(data, int) or isinstance(data, bool):
            out.append(f"{path}: expected integer")
    elif kind == "boolean":
        if not isinstance(data, bool):
            out.append(f"{path}: expected boolean")
    if "enum" in schema and data not in schema["enum"]:
        out.append(f"{path}: {data!r} not one of {schema['enum']}")
    return out


class ReportError(Exception):
    pass


class BaselineResourceError(ReportError):
    """The baseline realizability check ran out of resources."""


@dataclass
class ReportConfig:
    analyses: tuple[str, ...] = ANALYSIS_ORDER
    semantics: str = "strict"          # strict | nonstrict | both
    robotics: bool = False
    max_k: int = 16
    max_cubes: int = 10
    max_trace_steps: int = 64
    abstract_horizon: int = 64
    node_budget: int | None = None
    timeout_seconds: float | None = None

    def __post_init__(self):
        unknown = set(self.analyses) - set(ANALYSIS_ORDER)
        if unknown:
            raise ReportError(f"unknown analyses: {sorted(unknown)}")
        for name in ("max_k", "max_cubes", "max_trace_steps",
                     "abstract_horizon"):
            if getattr(self, name) <= 0:
                raise ReportError(f"{name} must be positive")
        if self.semantics not in ("strict", "nonstrict", "both"):
            raise ReportError(f"bad semantics {self.semantics!r}")


@dataclass
class Report:
    version: str
    spec_name: str
    spec_digest: str
    config: dict
    baseline: dict
    analyses: dict[str, dict]
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "spec": {"name": self.spec_name, "sha256": self.spec_digest},
            "config": self.config,
            "baseline": self.baseline,
            "analyses": self.analyses,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True,
                          separators=(",", ":")) + "\n"


def _cube_json(c: Cube) -> dict:
    return {name: val for name, val in c.literals}


def _deadline_of(config: ReportConfig):
    if config.timeout_seconds is None:
        return None
    return time.monotonic() + config.timeout_seconds


def _run_analysis(name: str, config: ReportConfig, spec, baseline_verdict):
    kw = dict(node_budget=config.node_budget,
              timeout=config.timeout_seconds)
    if name == "semantics":
        r = semantics_comparison(spec, robotics=config.robotics, **kw)
        return {"strict": r.strict, "nonstrict": r.nonstrict,
                "differs": r.differs}
    if name == "positions":
        r = position_statistics(spec, max_cubes=config.max_cubes,
                                robotics=config.robotics, **kw)
        return {
            "classes": {k: {"total": v.total, "winning": v.winning}
                        for k, v in r.classes.items()},
            "winning_cubes": [_cube_json(c) for c in r.winning_cubes],
            "losing_cubes": [_cube_json(c) for c in r.losing_cubes],
        }
    if name == "falsify":
        r = assumption_falsification(spec, max_cubes=config.max_cubes, **kw)
        return {"count": r.count, "cubes": [_cube_json(c) for c in r.cubes]}
    if name == "assumptions":
        rs = classify_assumptions(spec, robotics=config.robotics, **kw)
        return {"assumptions": [
            {"kind": v.kind, "index": v.index, "text": v.text,
             "changes_realizability": v.test_a,
             "grows_winning_set": v.test_b,
             "shrinks_distance": v.test_c,
             "shrinks_distance_on_strategy": v.test_d,
             "helped_goals": v.test_c_goals,
             "verdict": v.verdict}
            for v in rs]}
    if name == "resilience":
        r = error_resilience(spec, max_k=config.max_k,
                             robotics=config.robotics, **kw)
        level = ("infinite" if r.level == float("inf")
                 else int(r.level))
        return {"level": level, "exceeded_max_k": r.exceeded,
                "display": r.render(config.max_k)}
    if name == "precommit":
        r = precommit_analysis(spec, robotics=config.robotics, **kw)
        return {"per_output": r.per_output, "maximal_set": r.maximal_set}
    if name == "stuckat":
        r = stuck_at_analysis(spec, robotics=config.robotics, **kw)
        return {"direction": r.direction,
                "entries": [{"signal": s, "value": v, "verdict": verdict}
                            for (s, v), verdict in sorted(r.entries.items())]}
    if name == "trace":
        r = nominal_trace(spec, max_steps=config.max_trace_steps,
                          robotics=config.robotics,
                          node_budget=config.node_budget,
                          deadline=_deadline_of(config))
        if isinstance(r, dict):
            return r
        return r.to_json()
    if name == "abstract":
        r = abstract_strategy(spec, horizon=config.abstract_horizon,
                              node_budget=config.node_budget,
                              deadline=_deadline_of(config))
        if r is None:
            return {"finding": "neither player wins with the safety parts alone"}
        return r.to_json()
    raise ReportError(f"unknown analysis {name!r}")


def run_report(spec_path, config: ReportConfig | None = None,
               json_path=None, html_path=None, log=sys.stderr) -> Report:
    """Run all requested analyses on a specification file and write the
    JSON and HTML reports next to it (or to the given paths)."""
    config = config or ReportConfig()
    spec_path = Path(spec_path)
    text = spec_path.read_text(encoding="utf-8")
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    doc = parse_spec(text)
    violations = validate_gr1_shape(doc)
    if violations:
        raise ReportError("specification violates the grammar:\n  "
                          + "\n  ".join(str(v) for v in violations))
    spec = compile_to_boolean(doc)

    base_sem = "nonstrict" if config.semantics == "nonstrict" else "strict"
    try:
        game = build_game(spec, semantics=base_sem, robotics=config.robotics,
                          node_budget=config.node_budget,
                          deadline=_deadline_of(config))
        region = solve_game(game, record=False)
        verdict = check_realizability(game, region)
    except ResourceLimitError as exc:
        raise BaselineResourceError(str(exc)) from exc
    baseline = {"semantics": base_sem, "realizable": verdict}

    results: dict[str, dict] = {}
    timings: dict[str, float] = {}
    for name in ANALYSIS_ORDER:
        if name not in config.analyses:
            continue
        t0 = time.monotonic()
        try:
            results[name] = {"status": "ok",
                             "result": _run_analysis(name, config, spec,
                                                     verdict)}
        except (AnalysisError, TraceError) as exc:
            results[name] = {"status": "skipped", "reason": str(exc)}
        except ResourceLimitError as exc:
            results[name] = {"status": "skipped",
                             "reason": f"resource limit: {exc}"}
        timings[name] = time.monotonic() - t0
        if log is not None:
            print(f"gr1report: {name}: {results[name]['status']} "
                  f"({timings[name]:.3f}s)", file=log)

    report = Report(
        version=__version__, spec_name=spec_path.name, spec_digest=digest,
        config={
            "analyses": [a for a in ANALYSIS_ORDER if a in config.analyses],
            "semantics": config.semantics, "robotics": config.robotics,
            "max_k": config.max_k, "max_cubes": config.max_cubes,
            "max_trace_steps": config.max_trace_steps,
            "abstract_horizon": config.abstract_horizon,
        },
        baseline=baseline, analyses=results, timings=timings)

    json_path = Path(json_path) if json_path else spec_path.with_name(
        spec_path.name + ".report.json")
    html_path = Path(html_path) if html_path else spec_path.with_name(
        spec_path.name + ".report.html")
    json_text = report.to_json()
    json_path.write_text(json_text, encoding="utf-8")
    html_path.write_text(render_html(json.loads(json_text)),
                         encoding="utf-8")
    return report


# ----------------------------------------------------------------------
# HTML rendering (a pure function of the JSON content)

_CSS = """
body { font-family: sans-serif; margin: 2em; color: #222; }
h1 { font-size: 1.4em; } h2 { font-size: 1.1em; margin-top: 1.5em; }
table { border-collapse: collapse; margin: 0.5em 0; }
td, th { border: 1px solid #999; padding: 0.25em 0.6em; text-align: center; }
th { background: #eee; }
.skip { color: #888; font-style: italic; }
.bad { color: #a00; font-weight: bold; }
.good { color: #070; }
code { background: #f4f4f4; padding: 0 0.2em; }
"""


def _esc(x) -> str:
    return _html.escape(str(x))


def _cube_str(cube: dict) -> str:
    if not cube:
        return "TRUE"
    return " & ".join(n if v else "!" + n for n, v in cube.items())


def render_html(data: dict) -> str:
    out = ["<!DOCTYPE html>", "<html><head><meta charset='utf-8'>",
           f"<title>Report: {_esc(data['spec']['name'])}</title>",
           f"<style>{_CSS}</style></head><body>"]
    out.append(f"<h1>Specification report: {_esc(data['spec']['name'])}</h1>")
    out.append(f"<p>Generator version {_esc(data['version'])}; "
               f"spec sha256 <code>{_esc(data['spec']['sha256'])}</code></p>")
    b = data["baseline"]
    cls = "good" if b["realizable"] == "realizable" else "bad"
    out.append(f"<p>Baseline ({_esc(b['semantics'])} semantics): "
               f"<span class='{cls}'>{_esc(b['realizable'])}</span></p>")
    for name in ANALYSIS_ORDER:
        if name not in data["analyses"]:
            continue
        entry = data["analyses"][name]
        out.append(f"<h2>{_esc(name)}</h2>")
        if entry["status"] != "ok":
            out.append(f"<p class='skip'>skipped: {_esc(entry['reason'])}</p>")
            continue
        out.append(_render_result(name, entry["result"]))
    out.append("</body></html>")
    return "\n".join(out) + "\n"


def _render_result(name: str, r: dict) -> str:
    if name == "semantics":
        return (f"<p>strict: <b>{_esc(r['strict'])}</b>; nonstrict: "
                f"<b>{_esc(r['nonstrict'])}</b>; differs: "
                f"<b>{_esc(r['differs'])}</b></p>")
    if name == "positions":
        rows = "".join(
            f"<tr><td>{_esc(k)}</td><td>{_esc(v['total'])}</td>"
            f"<td>{_esc(v['winning'])}</td></tr>"
            for k, v in r["classes"].items())
        cubes = "".join(
            f"<li><code>{_esc(_cube_str(c))}</code></li>"
            for c in r["winning_cubes"])
        lcubes = "".join(
            f"<li><code>{_esc(_cube_str(c))}</code></li>"
            for c in r["losing_cubes"])
        return (f"<table><tr><th>class</th><th>total</th><th>winning</th>"
                f"</tr>{rows}</table>"
                f"<p>largest winning cubes:</p><ul>{cubes or '<li>none</li>'}"
                f"</ul><p>largest losing cubes:</p>"
                f"<ul>{lcubes or '<li>none</li>'}</ul>")
    if name == "falsify":
        cubes = "".join(f"<li><code>{_esc(_cube_str(c))}</code></li>"
                        for c in r["cubes"])
        return (f"<p>positions from which the system can force an "
                f"assumption violation: <b>{_esc(r['count'])}</b></p>"
                f"<ul>{cubes or '<li>none</li>'}</ul>")
    if name == "assumptions":
        rows = "".join(
            "<tr><td><code>{}</code></td><td>{}</td><td>{}</td><td>{}</td>"
            "<td>{}</td><td>{}</td><td><b>{}</b></td></tr>".format(
                _esc(a["text"]), _esc(a["kind"]),
                _esc(a["changes_realizability"]),
                _esc(a["grows_winning_set"]),
                _esc(a["shrinks_distance"]),
                _esc(a["shrinks_distance_on_strategy"]),
                _esc(a["verdict"]))
            for a in r["assumptions"])
        return ("<table><tr><th>assumption</th><th>kind</th><th>a</th>"
                "<th>b</th><th>c</th><th>d</th><th>verdict</th></tr>"
                f"{rows}</table>")
    if name == "resilience":
        return f"<p>tolerated glitches: <b>{_esc(r['display'])}</b></p>"
    if name == "precommit":
        rows = "".join(f"<tr><td>{_esc(o)}</td><td>{_esc(v)}</td></tr>"
                       for o, v in r["per_output"].items())
        return (f"<table><tr><th>output</th><th>precommittable</th></tr>"
                f"{rows}</table><p>jointly precommittable (greedy): "
                f"<code>{_esc(', '.join(r['maximal_set']) or 'none')}</code></p>")
    if name == "stuckat":
        rows = "".join(
            f"<tr><td>{_esc(e['signal'])}</td>"
            f"<td>{'1' if e['value'] else '0'}</td>"
            f"<td>{_esc(e['verdict'])}</td></tr>"
            for e in r["entries"])
        return (f"<p>direction: {_esc(r['direction'])}</p>"
                f"<table><tr><th>signal</th><th>stuck at</th>"
                f"<th>verdict</th></tr>{rows}</table>")
    if name == "trace":
        if "finding" in r:
            return f"<p class='skip'>{_esc(r['finding'])}</p>"
        head = "".join(f"<th>{i}</th>" for i in range(len(r["steps"])))
        names = []
        for s in r["steps"]:
            for k in list(s["in"]) + list(s["out"]):
                if k not in names:
                    names.append(k)
        rows = []
        for n in names:
            cells = []
            for s in r["steps"]:
                v = s["in"].get(n, s["out"].get(n, ""))
                cells.append(f"<td>{_esc(v)}</td>")
            rows.append(f"<tr><td>{_esc(n)}</td>{''.join(cells)}</tr>")
        goals = "".join(
            f"<td>{s['envGoal']}/{s['sysGoal']}</td>" for s in r["steps"])
        return (f"<p>lasso starts at step {_esc(r['lassoStart'])}</p>"
                f"<table><tr><th>step</th>{head}</tr>"
                + "".join(rows)
                + f"<tr><td>env/sys goal</td>{goals}</tr></table>")
    if name == "abstract":
        if "finding" in r:
            return f"<p class='skip'>{_esc(r['finding'])}</p>"
        rounds = r["rounds"]
        head = "".join(f"<th>{i}</th>" for i in range(len(rounds)))
        names = list(rounds[0]) if rounds else []
        rows = []
        for n in names:
            cells = "".join(
                "<td>{}</td>".format(
                    "&#9733;" if rd[n] == "star" else _esc(rd[n]))
                for rd in rounds)
            rows.append(f"<tr><td>{_esc(n)}</td>{cells}</tr>")
        return (f"<p>winner: <b>{_esc(r['winner'])}</b></p>"
                f"<table><tr><th>proposition / round</th>{head}</tr>"
                + "".join(rows) + "</table>")
    return f"<pre>{_esc(json.dumps(r, indent=2, sort_keys=True))}</pre>"
