"""Command line front end: ``coxcohom analyze|verify <config.json>``.

A job config names a labelled graph (the Coxeter diagram in presentation
form: an edge ``[s, t, m]`` means ``(st)^m = 1``, an unlabelled edge means
``m = 2``, and non-edges take the default label).  The same graph, with its
edges read as commuting pairs, is the base of any graph product.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import __version__
from .acceptance import CRITERIA, run_all
from .coxeter import (INF, CoxeterSystem, MultiParameter, enumerate_words, growth_series,
                      radius_of_convergence, regime_test, to_fraction, classify_finite)
from .errors import CohomError, InvalidInput, ProvisoViolation, RegimeUncertifiable
from .homology import FgAbelianGroup
from .mvss import build_pages, check_conditions, pjoin_cover
from .products import (cohen_macaulay, duality_report, groupring_coxeter, groupring_graphproduct,
                       l2_graphproduct, pjoin_cohomology, punctured_homology)
from .simplicial import PjoinContext, SimplicialComplex, flag_complex, sort_labels, sphere0
from .weighted import (VertexGroupDescriptor, dims_D, graph_product_system, l2_graphproduct_finite,
                       oct_limits, oct_weighted, weighted_betti, weighted_graphproduct)

CONFIG_VERSION = 1
REPORT_VERSION = 1
TASKS = ("l2", "groupring", "weighted", "oct", "duality", "pjoin", "verify", "growth")
TOP_KEYS = {"version", "graph", "vertex_groups", "weights", "tasks", "options"}
OPTION_KEYS = {"max_length", "max_elements", "force_regime", "duality_contexts", "pjoin",
               "oct_limits", "acceptance", "criteria"}
UNVERIFIED = "unverified-hypothesis"


# ---------------------------------------------------------------------------
# config


class Job:
    """A validated job config with the objects it describes."""

    def __init__(self, data, force=None, max_length=None, max_elements=None):
        if not isinstance(data, dict):
            raise InvalidInput("config must be a JSON object")
        extra = set(data) - TOP_KEYS
        if extra:
            raise InvalidInput(f"unknown config keys {sorted(extra)}")
        if data.get("version") != CONFIG_VERSION:
            raise InvalidInput(f'config "version" must be {CONFIG_VERSION}')
        self.raw = data
        g = data.get("graph")
        if not isinstance(g, dict) or "vertices" not in g:
            raise InvalidInput('config needs "graph" with "vertices"')
        self.vertices = list(g["vertices"])
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidInput("duplicate vertices")
        for v in self.vertices:
            if not isinstance(v, (str, int)) or isinstance(v, bool):
                raise InvalidInput(f"vertex {v!r} must be a string or integer")
        default = str(g.get("default", "2"))
        if default not in ("2", "infinity"):
            raise InvalidInput('graph "default" must be "2" or "infinity"')
        self.default = INF if default == "infinity" else 2
        self.edges, self.labels = [], {}
        for e in g.get("edges", []):
            if not isinstance(e, list) or len(e) not in (2, 3):
                raise InvalidInput(f"edge {e!r} must be [s, t] or [s, t, label]")
            s, t = e[0], e[1]
            for v in (s, t):
                if v not in self.vertices:
                    raise InvalidInput(f"edge {e!r} references unknown vertex {v!r}")
            label = e[2] if len(e) == 3 else 2
            self.labels[(s, t)] = label
            self.edges.append((s, t))
        self.system = CoxeterSystem(self.vertices, self.labels, default=self.default)
        self.L = flag_complex(self.vertices, self.edges)

        vg = data.get("vertex_groups") or {}
        if not isinstance(vg, dict):
            raise InvalidInput('"vertex_groups" must be an object')
        for v in vg:
            if v not in map(str, self.vertices):
                raise InvalidInput(f"vertex group for unknown vertex {v!r}")
        by_str = {str(v): v for v in self.vertices}
        self.vertex_groups = {by_str[k]: VertexGroupDescriptor.from_json(d) for k, d in vg.items()}
        if self.vertex_groups and set(self.vertex_groups) != set(self.vertices):
            raise InvalidInput("vertex_groups must cover every vertex")

        w = data.get("weights") or {}
        if not isinstance(w, dict):
            raise InvalidInput('"weights" must be an object')
        self.weights = {}
        for k, v in w.items():
            if not isinstance(v, str):
                raise InvalidInput(f"weight for {k!r} must be an exact rational string such as \"1/3\"")
            q = to_fraction(v)
            if q <= 0:
                raise InvalidInput(f"weight for {k!r} must be positive")
            self.weights[k] = q

        tasks = data.get("tasks", [])
        if not isinstance(tasks, list) or any(t not in TASKS for t in tasks):
            raise InvalidInput(f"tasks must be a list drawn from {list(TASKS)}")
        self.tasks = list(tasks)

        opts = data.get("options") or {}
        extra = set(opts) - OPTION_KEYS
        if extra:
            raise InvalidInput(f"unknown options {sorted(extra)}")
        self.options = opts
        self.force = force or opts.get("force_regime")
        if self.force not in (None, "small", "large"):
            raise InvalidInput('force_regime must be "small" or "large"')
        self.max_length = int(max_length if max_length is not None else opts.get("max_length", 8))
        self.max_elements = int(max_elements if max_elements is not None else opts.get("max_elements", 100_000))

    # weights ---------------------------------------------------------------
    def q_for(self, sys: CoxeterSystem) -> MultiParameter:
        """Weights for ``sys``: key ``"*"`` is uniform, other keys name
        generators or class indices (``"class:k"``)."""
        if not self.weights:
            raise InvalidInput("this task needs weights")
        if set(self.weights) == {"*"}:
            return MultiParameter.uniform(sys, self.weights["*"])
        by_str = {str(s): s for s in sys.generators}
        mapping = {}
        base = self.weights.get("*")
        for k, v in self.weights.items():
            if k == "*":
                continue
            if k.startswith("class:"):
                mapping[int(k[6:])] = v
            elif k in by_str:
                mapping[by_str[k]] = v
            else:
                raise InvalidInput(f"weight on unknown generator {k!r}")
        if base is not None:
            covered = {sys.class_of[sys.index[s]] if s in sys.index else s for s in mapping}
            for c in range(sys.nclasses):
                if c not in covered:
                    mapping[c] = base
        return MultiParameter(sys, mapping)

    def vertex_weights(self):
        """Per-vertex weights for octahedralization: ``"*"`` or vertex keys."""
        if not self.weights:
            return Fraction(1)
        if set(self.weights) == {"*"}:
            return self.weights["*"]
        out = {}
        for v in self.vertices:
            out[v] = self.weights.get(str(v), self.weights.get("*"))
            if out[v] is None:
                raise InvalidInput(f"missing weight for vertex {v!r}")
        return out

    # polyhedral join -------------------------------------------------------
    def pjoin_context(self) -> PjoinContext | None:
        desc = self.options.get("pjoin")
        if not desc:
            return None
        factors = desc.get("factors", {})
        by_str = {str(v): v for v in self.vertices}
        if set(factors) != set(by_str):
            raise InvalidInput("pjoin factors must be given for every vertex")
        return PjoinContext(self.L, {by_str[k]: _complex_from(v) for k, v in factors.items()})


def _complex_from(desc) -> SimplicialComplex:
    if desc == "S0":
        return sphere0()
    if isinstance(desc, dict) and "simplex" in desc:
        return SimplicialComplex.simplex(desc["simplex"])
    if isinstance(desc, dict) and "simplices" in desc:
        return SimplicialComplex.from_simplices(desc["simplices"])
    if isinstance(desc, dict) and "vertices" in desc:
        return flag_complex(desc["vertices"], desc.get("edges", []))
    raise InvalidInput(f"cannot read complex {desc!r}")


def digest(data) -> str:
    return hashlib.sha256(canonical(data).encode()).hexdigest()


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


# ---------------------------------------------------------------------------
# tasks


def _betti_json(b: dict) -> dict:
    return {str(d): str(v) for d, v in sorted(b.items())}


def _finite_order(d: VertexGroupDescriptor) -> int:
    if d.kind == "finite":
        return d.order
    return classify_finite(d.system).order


def task_l2(job: Job) -> dict:
    if not job.vertex_groups:
        prof = weighted_betti(job.system, 1, force=job.force)
        return {"object": "Coxeter group", **prof.to_json()}
    desc = job.vertex_groups
    finite = [s for s in job.vertices if desc[s].is_finite]
    if finite and len(finite) < len(job.vertices):
        raise ProvisoViolation("vertex groups mix finite and infinite groups")
    if finite:
        prof = l2_graphproduct_finite(job.L, {s: _finite_order(desc[s]) for s in job.vertices}, force=job.force)
        return {"object": "graph product of finite groups", **prof.to_json()}
    prof = l2_graphproduct(job.L, desc, force=job.force)
    return {"object": "graph product of infinite groups", **prof.to_json()}


def task_groupring(job: Job) -> dict:
    if job.vertex_groups:
        return groupring_graphproduct(job.L, job.vertex_groups).to_json()
    return groupring_coxeter(job.system, census_length=job.max_length,
                             element_cap=job.max_elements).to_json()


def task_weighted(job: Job) -> dict:
    out = {}
    coxeter_vertices = job.vertex_groups and all(
        d.kind == "coxeter" or (d.kind == "finite" and d.order == 2) for d in job.vertex_groups.values())
    if coxeter_vertices:
        factors = {s: _vertex_system(d) for s, d in job.vertex_groups.items()}
        V = graph_product_system(job.L, factors)
        res = weighted_graphproduct(job.L, factors, job.q_for(V), force=job.force)
        out["graph_product"] = res.to_json()
    elif job.vertex_groups:
        raise ProvisoViolation("weighted graph products need Coxeter vertex groups (or Z/2)")
    else:
        q = job.q_for(job.system)
        out["coxeter"] = weighted_betti(job.system, q, force=job.force).to_json()
    return out


def _vertex_system(d: VertexGroupDescriptor) -> CoxeterSystem:
    if d.kind == "coxeter":
        return d.system
    return CoxeterSystem(["a"])


def task_oct(job: Job) -> dict:
    out = {"weighted": oct_weighted(job.L, job.vertex_weights(), force=job.force).to_json()}
    if job.options.get("oct_limits"):
        lim = oct_limits(job.L)
        out["limits"] = {"acyclic": lim["acyclic"]} | {
            k: {str(n): (None if v is None else str(v)) for n, v in lim[k].items()}
            for k in ("from_below", "from_above", "link_sum")}
    return out


def task_duality(job: Job) -> dict:
    out = {}
    cm, wit = cohen_macaulay(job.L)
    out["cohen_macaulay"] = {"holds": cm, "witness": wit}
    ph, wit = punctured_homology(job.L)
    out["punctured_homology"] = {"m": job.L.dimension, "holds": ph, "witness": wit}
    for ctx in job.options.get("duality_contexts", ["raag"]):
        out[ctx] = duality_report(job.L, ctx).to_json()
    return out


def task_pjoin(job: Job) -> dict:
    ctx = job.pjoin_context()
    if ctx is None:
        raise InvalidInput('task "pjoin" needs options.pjoin.factors')
    wanted = job.options["pjoin"].get("simplices", "all")
    if wanted == "all":
        simplices = sorted(ctx.complex.simplices(), key=lambda I: (len(I), sort_labels(I)))
    else:
        simplices = [frozenset(tuple(x) for x in I) for I in wanted]
    return {"simplices": [pjoin_cohomology(ctx, I).to_json() for I in simplices]}


def task_growth(job: Job) -> dict:
    W = job.system
    out = {"classification": classify_finite(W).describe() if W.is_finite() else "infinite"}
    census = enumerate_words(W, job.max_length, element_cap=job.max_elements)
    out["census"] = {"length_bound": job.max_length, "complete": census.complete,
                     "counts": list(census.length_profile())}
    out["series"] = growth_series(W).to_json()
    rho = radius_of_convergence(W)
    if rho is not None:
        out["rho_interval"] = [str(rho[0]), str(rho[1])]
    if job.weights:
        out["regime"] = regime_test(W, job.q_for(W)).to_json()
    return out


def task_verify(job: Job) -> dict:
    checks = []
    W = job.system
    # growth series against the census
    census = enumerate_words(W, job.max_length, element_cap=job.max_elements)
    series = {e: c for e, c in growth_series(W).series(job.max_length).items() if c}
    counted = census.growth_polynomial()
    if census.complete:
        series = {e: c for e, c in series.items() if sum(e) <= job.max_length}
    checks.append(("growth series = word census", counted == series, f"through length {job.max_length}"))
    # decomposition dimensions
    qs = [job.q_for(W)] if job.weights else [MultiParameter.uniform(W, x) for x in (Fraction(1, 2), 2)]
    for q in qs:
        total = sum(dims_D(W, q).values(), Fraction(0))
        checks.append((f"sum of dim D^J at q = {q}", total == 1, str(total)))
    # polyhedral join and spectral sequence
    ctx = job.pjoin_context() or PjoinContext(job.L, {s: SimplicialComplex.simplex([0]) for s in job.vertices})
    reports = [pjoin_cohomology(ctx, I) for I in ctx.complex.simplices()]
    checks.append(("polyhedral join formula = direct ranks", all(r.ranks_agree for r in reports),
                   f"{len(reports)} simplices"))
    ps = pjoin_cover(ctx)
    pages, cond = build_pages(ps), check_conditions(ps)
    checks.append(("spectral sequence degenerates under (Z)", (not cond.Z) or pages.degenerates,
                   f"(Z)={cond.Z}, E2 total {pages.e2_total()}, direct {pages.direct}"))
    # graph products where both sides certify
    if job.vertex_groups and job.weights:
        checks.extend(_graph_product_checks(job))
    if job.options.get("acceptance"):
        for c in run_all(job.options.get("criteria")):
            checks.append((f"criterion {c.criterion}: {c.name}", c.passed, c.detail))
    return {"checks": [{"name": n, "passed": bool(p), "detail": d} for n, p, d in checks],
            "passed": all(p for _, p, _ in checks)}


def _graph_product_checks(job: Job) -> list:
    desc = job.vertex_groups
    if not all(d.kind == "coxeter" or (d.kind == "finite" and d.order == 2) for d in desc.values()):
        return [("graph product agreement", True, "skipped: vertex groups are not Coxeter groups")]
    factors = {s: _vertex_system(d) for s, d in desc.items()}
    V = graph_product_system(job.L, factors)
    q = job.q_for(V)
    try:
        res = weighted_graphproduct(job.L, factors, q)
        direct = weighted_betti(V, q)
    except (RegimeUncertifiable, ProvisoViolation) as e:
        return [("graph product agreement", True, f"skipped: {e}")]
    out = [(f"graph product ({res.branch} branch) = direct computation on (V, T)",
            res.betti == direct.betti, f"{_betti_json(res.betti)} vs {_betti_json(direct.betti)}")]
    if res.growth_check:
        a, b = res.growth_check["V(q)"], res.growth_check["W(p)"]
        out.append(("V(q) = W(p)", a == b, f"{a} vs {b}"))
    return out


DISPATCH = {"l2": task_l2, "groupring": task_groupring, "weighted": task_weighted, "oct": task_oct,
            "duality": task_duality, "pjoin": task_pjoin, "verify": task_verify, "growth": task_growth}


# ---------------------------------------------------------------------------
# running and reporting


def _mark(obj):
    if isinstance(obj, dict):
        return {**obj, UNVERIFIED: True}
    return {"value": obj, UNVERIFIED: True}


def run(data, force=None, max_length=None, max_elements=None, tasks=None):
    """Run a config; returns ``(report, exit_code)``."""
    report = {"version": REPORT_VERSION, "tool": {"name": "coxcohom", "version": __version__},
              "input_digest": digest(data), "results": [], "certificates": {}, "warnings": [],
              "timing": None}
    try:
        job = Job(data, force, max_length, max_elements)
        todo = tasks if tasks is not None else job.tasks
        if not todo:
            report["warnings"].append("empty task list: nothing to do")
        if job.force:
            report["warnings"].append(f"regime forced to {job.force!r}: results are unverified")
        if job.weights and not job.vertex_groups:
            try:
                report["certificates"]["regime"] = regime_test(job.system, job.q_for(job.system)).to_json()
            except InvalidInput as e:
                report["warnings"].append(f"no regime certificate: {e}")
        for name in todo:
            result = DISPATCH[name](job)
            if job.force:
                result = _mark(result)
            report["results"].append({"task": name, "result": result})
        code = 0
        if any(r["task"] == "verify" and not r["result"].get("passed", True) for r in report["results"]):
            code = 1
    except CohomError as e:
        code = e.exit_code
        report["error"] = {"type": type(e).__name__, "message": str(e)}
        cert = getattr(e, "certificate", None)
        if cert is not None:
            report["certificates"]["regime"] = cert.to_json() if hasattr(cert, "to_json") else cert
    report["exit_code"] = code
    return report, code


def emit(report, fmt="json") -> bytes:
    if fmt == "json":
        return (json.dumps(_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode()
    if fmt == "markdown":
        return render_markdown(report).encode()
    raise InvalidInput(f"unknown format {fmt!r}")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted((_jsonable(v) for v in x), key=str)
    if isinstance(x, Fraction):
        return str(x)
    if x == INF:
        return "infinity"
    return x


def render_markdown(report) -> str:
    rep = _jsonable(report)
    out = [f"# coxcohom report (v{rep['version']})", "",
           f"- tool: {rep['tool']['name']} {rep['tool']['version']}",
           f"- input digest: `{rep['input_digest']}`", f"- exit code: {rep['exit_code']}", ""]
    if rep.get("error"):
        out += [f"**error** ({rep['error']['type']}): {rep['error']['message']}", ""]
    for w in rep["warnings"]:
        out.append(f"> warning: {w}")
    if rep["warnings"]:
        out.append("")
    for r in rep["results"]:
        out += [f"## {r['task']}", ""]
        out += _md_value(r["result"], 3)
        out.append("")
    if rep["certificates"]:
        out += ["## certificates", ""] + _md_value(rep["certificates"], 3) + [""]
    return "\n".join(out)


def _md_value(v, level) -> list:
    if isinstance(v, dict):
        if "terms" in v and isinstance(v["terms"], list):
            lines = ["| degree | J | coefficient | base module |", "|---|---|---|---|"]
            for t in v["terms"]:
                J = "{" + ",".join(t["J"]) + "}"
                coeff = FgAbelianGroup.from_json(t["coefficient"])
                lines.append(f"| {t['degree']} | {J} | {coeff} | {t['baseModule']['tag']} |")
            if not v["terms"]:
                lines.append("| - | - | 0 | - |")
            rest = {k: x for k, x in v.items() if k != "terms"}
            return lines + [""] + (_md_value(rest, level) if rest else [])
        if "checks" in v:
            lines = ["| check | result | detail |", "|---|---|---|"]
            for c in v["checks"]:
                lines.append(f"| {c['name']} | {'pass' if c['passed'] else 'FAIL'} | {c['detail']} |")
            return lines
        lines = []
        for k, x in v.items():
            if k == "betti" and isinstance(x, dict):
                lines += [f"{'#' * level} betti", "", "| degree | value |", "|---|---|"]
                lines += [f"| {d} | {b} |" for d, b in x.items()] or ["| - | 0 |"]
                lines.append("")
            elif isinstance(x, (dict, list)) and x:
                lines += [f"{'#' * level} {k}", ""] + _md_value(x, min(level + 1, 6)) + [""]
            else:
                lines.append(f"- {k}: {json.dumps(x, ensure_ascii=False)}")
        return lines
    if isinstance(v, list):
        lines = []
        for i, x in enumerate(v):
            if isinstance(x, (dict, list)):
                lines += [f"{'#' * level} item {i}", ""] + _md_value(x, min(level + 1, 6)) + [""]
            else:
                lines.append(f"- {json.dumps(x, ensure_ascii=False)}")
        return lines
    return [f"- {json.dumps(v, ensure_ascii=False)}"]


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="coxcohom", description="Cohomology of Coxeter groups and graph products.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, help_ in (("analyze", "run the tasks listed in a job config"),
                        ("verify", "run the cross-check suites on a job config")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="path to a JSON job config ('-' for stdin)")
        p.add_argument("--format", choices=("json", "markdown"), default="json")
        p.add_argument("--force-regime", choices=("small", "large"), default=None)
        p.add_argument("--max-elements", type=int, default=None)
        p.add_argument("--max-length", type=int, default=None)
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
    args = ap.parse_args(argv)
    try:
        text = sys.stdin.read() if args.config == "-" else open(args.config, encoding="utf-8").read()
        data = json.loads(text, parse_float=_reject_float)
    except (OSError, json.JSONDecodeError, InvalidInput) as e:
        data, err = None, e
    if data is None:
        report = {"version": REPORT_VERSION, "tool": {"name": "coxcohom", "version": __version__},
                  "input_digest": None, "results": [], "certificates": {}, "warnings": [], "timing": None,
                  "error": {"type": type(err).__name__, "message": str(err)}, "exit_code": 2}
        code = 2
    else:
        tasks = ["verify"] if args.command == "verify" else None
        report, code = run(data, args.force_regime, args.max_length, args.max_elements, tasks)
    blob = emit(report, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(blob)
    else:
        sys.stdout.buffer.write(blob)
    if "error" in report:
        print(f"coxcohom: {report['error']['message']}", file=sys.stderr)
    return code


def _reject_float(s):
    raise InvalidInput(f"decimal literal {s} is not allowed; write weights as exact rational strings")


__all__ = ["Job", "run", "emit", "main", "render_markdown", "CRITERIA", "TASKS"]
