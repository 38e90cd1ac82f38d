"""``lnd-lab`` command-line front end.

Every command reads one input (``--example ID [--param k=v ...]`` or
``--input FILE``), builds a report dictionary and prints it as text or JSON.
Reports contain no timings or paths that vary between runs, so the same job
always prints the same bytes, whatever ``--jobs`` is.

Exit codes: 0 success, 1 domain error, 2 parse or usage error. Errors are a
single line on stderr, ``error[<kind>]: <message>``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import catalog
from .derivation import (DEFAULT_CAP, NEG_INF, Derivation, apply, is_locally_nilpotent_structural,
                         iterate, local_slice_kernel, nu, phi_t, slice_kernel)
from .dmodule import (DeltaModule, ModuleElement, hom, module_kernel_basis, module_kernel_generators,
                      module_weights, omega, parse_element, sym_extend, tensor)
from .dsl import Document, parse_document
from .errors import LndError, ParseError
from .groebner import is_delta_ideal, is_delta_submodule
from .kernel import DEFAULT_PIECE_LIMIT, WeightSystem, infer_weights, kernel_basis, kernel_generators
from .kuroda import ExponentData, exponent_data_from_derivation, kuroda_verdict
from .ring import Polynomial, format_poly, parse_poly, parse_poly_list, split_top_level

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- input ---------------------------------------------------------------------------


@dataclass
class JobSpec:
    command: str
    example: Optional[str] = None
    params: Dict[str, int] = field(default_factory=dict)
    input: Optional[str] = None
    options: Dict[str, object] = field(default_factory=dict)

    def validate(self) -> None:
        if (self.example is None) == (self.input is None):
            raise UsageError("give exactly one of --example or --input")
        if self.params and self.example is None:
            raise UsageError("--param only applies to --example")


@dataclass
class Loaded:
    """The objects an input provides."""

    derivation: Optional[Derivation] = None
    module: Optional[DeltaModule] = None
    data: Optional[ExponentData] = None
    document: Optional[Document] = None


def _parse_param(text: str):
    name, eq, value = text.partition("=")
    if not eq or not name.strip():
        raise UsageError(f"--param expects name=value, got {text!r}")
    try:
        return name.strip(), int(value)
    except ValueError:
        raise UsageError(f"--param {name.strip()} needs an integer, got {value!r}") from None


def load(job: JobSpec) -> Loaded:
    if job.example is not None:
        entry = catalog.get(job.example, job.params)
        p = entry.payload
        if isinstance(p, DeltaModule):
            return Loaded(derivation=p.base, module=p)
        if isinstance(p, Derivation):
            return Loaded(derivation=p)
        return Loaded(data=p)
    try:
        with open(job.input, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise LndError(f"cannot read {job.input}: {exc.strerror}") from None
    doc = parse_document(text)
    name = job.options.get("derivation")
    der = doc.derivation(name) if (doc.derivations or name) else None
    mname = job.options.get("module")
    mod = doc.module(mname) if (doc.modules or mname) else None
    if der is None and mod is not None:
        der = mod.base
    return Loaded(derivation=der, module=mod, document=doc)


def _need_derivation(src: Loaded) -> Derivation:
    if src.derivation is None:
        raise LndError("this command needs a derivation; the input provides none")
    return src.derivation


def _need_module(src: Loaded, opts) -> DeltaModule:
    if opts.get("omega"):
        return omega(_need_derivation(src))
    if src.module is None:
        raise LndError("this command needs a delta-module; the input has none (try --omega)")
    return src.module


def _second_module(src: Loaded, opts, first: DeltaModule) -> DeltaModule:
    name = opts.get("with_module")
    if name is None:
        return first
    if src.document is None:
        raise LndError("--with needs an --input file defining that module")
    return src.document.module(name)


# -- serialisation -------------------------------------------------------------------


def _q(c) -> str:
    return str(Fraction(c))


def _derivation_report(d: Derivation) -> dict:
    return {"variables": list(d.ring.names),
            "images": {n: format_poly(img) for n, img in zip(d.ring.names, d.images)}}


def _derivation_lines(d: Derivation) -> List[str]:
    return [f"ring: Q[{', '.join(d.ring.names)}]"] + [f"  {ln}" for ln in str(d).splitlines()]


def _module_report(m: DeltaModule) -> dict:
    return {"base": _derivation_report(m.base),
            "basis": list(m.basis),
            "images": {e: m.format(m.image(j)) for j, e in enumerate(m.basis)},
            "relations": [m.format(r) for r in m.relations]}


def _module_lines(m: DeltaModule) -> List[str]:
    lines = _derivation_lines(m.base)
    lines.append(f"module basis: {', '.join(m.basis)}")
    lines += [f"  {ln}" for ln in str(m).splitlines()]
    return lines


def _weights_report(ws: WeightSystem) -> dict:
    return {"rows": [list(r) for r in ws.rows], "shift": list(ws.shift), "positive": list(ws.positive)}


def _nu_value(v):
    if v is None:
        return "exceeded cap"
    if v == NEG_INF:
        return "-inf"
    return v


# -- commands ------------------------------------------------------------------------


def cmd_check_lnd(src, opts):
    d = _need_derivation(src)
    ok, order = is_locally_nilpotent_structural(d)
    result = {"locally_nilpotent": ok, "method": "triangular", "order": order}
    if not ok:
        # nilpotent on every variable implies locally nilpotent
        degs = {n: _nu_value(nu(d, d.ring.var(n), opts["cap"])) for n in d.ring.names}
        ok = all(v != "exceeded cap" for v in degs.values())
        result = {"locally_nilpotent": ok if ok else None, "method": "generators",
                  "order": None, "variable_degrees": degs}
    lines = _derivation_lines(d)
    if result["method"] == "triangular":
        lines.append(f"locally nilpotent: true (triangular order: {', '.join(order)})")
    elif ok:
        lines.append("locally nilpotent: true (every variable is killed by an iterate)")
    else:
        stuck = [n for n, v in result["variable_degrees"].items() if v == "exceeded cap"]
        lines.append(f"locally nilpotent: unknown ({', '.join(stuck)} survive {opts['cap']} iterations)")
    return result, lines


def _poly_arg(d: Derivation, opts) -> Polynomial:
    if opts.get("poly") is None:
        raise UsageError("this command needs --poly")
    return parse_poly(opts["poly"], d.ring)


def cmd_apply(src, opts):
    d = _need_derivation(src)
    f = _poly_arg(d, opts)
    n = opts["times"]
    if n < 0:
        raise UsageError("--times must be non-negative")
    g = iterate(d, f, n)
    return ({"poly": format_poly(f), "times": n, "image": format_poly(g)},
            [f"d^{n}({format_poly(f)}) = {format_poly(g)}"])


def cmd_phi_t(src, opts):
    d = _need_derivation(src)
    f = _poly_arg(d, opts)
    var = opts["var"]
    g = phi_t(d, f, var=var, cap=opts["cap"])
    return ({"poly": format_poly(f), "var": var, "image": format_poly(g)},
            [f"phi_{var}({format_poly(f)}) = {format_poly(g)}"])


def cmd_nu(src, opts):
    d = _need_derivation(src)
    f = _poly_arg(d, opts)
    v = _nu_value(nu(d, f, opts["cap"]))
    return {"poly": format_poly(f), "cap": opts["cap"], "nu": v}, [f"nu({format_poly(f)}) = {v}"]


def _generators_arg(d: Derivation, opts):
    if opts.get("poly") is None:
        return None
    return parse_poly_list(opts["poly"], d.ring)


def cmd_slice_kernel(src, opts):
    d = _need_derivation(src)
    if opts.get("slice") is None:
        raise UsageError("slice-kernel needs --slice")
    u = parse_poly(opts["slice"], d.ring)
    gens = _generators_arg(d, opts)
    gens_list = d.ring.gens() if gens is None else gens
    images = slice_kernel(d, u, gens, cap=opts["cap"])
    rows = [{"generator": format_poly(g), "image": format_poly(h)} for g, h in zip(gens_list, images)]
    lines = [f"slice: {format_poly(u)}"] + [f"  phi({r['generator']}) = {r['image']}" for r in rows]
    return {"slice": format_poly(u), "images": rows}, lines


def cmd_local_slice_kernel(src, opts):
    d = _need_derivation(src)
    if opts.get("slice") is None:
        raise UsageError("local-slice-kernel needs --slice")
    u = parse_poly(opts["slice"], d.ring)
    gens = _generators_arg(d, opts)
    gens_list = d.ring.gens() if gens is None else gens
    images = local_slice_kernel(d, u, gens, cap=opts["cap"])
    a = apply(d, u)
    rows = [{"generator": format_poly(g), "numerator": format_poly(z.numerator), "power": z.power,
             "value": str(z)} for g, z in zip(gens_list, images)]
    lines = [f"local slice: {format_poly(u)}, d(u') = {format_poly(a)}"]
    lines += [f"  phi({r['generator']}) = {r['value']}" for r in rows]
    return {"local_slice": format_poly(u), "denominator": format_poly(a), "images": rows}, lines


def _target_arg(opts, ws: WeightSystem):
    t = opts.get("target")
    if t is None:
        return None
    try:
        w = tuple(int(x) for x in t.split(",") if x.strip())
    except ValueError:
        raise UsageError(f"--target expects comma-separated integers, got {t!r}") from None
    if len(w) != ws.ngrades:
        raise UsageError(f"--target needs {ws.ngrades} entries for this grading")
    return w


def _graded_result(report, fmt_el, extra=None):
    pieces = []
    for p in report.pieces:
        pieces.append({"weight": list(p.weight), "degree": p.degree, "size": p.size,
                       "kernel_dim": p.kernel_dim, "span_dim": p.span_dim,
                       "skipped": p.skipped, "incomplete": p.incomplete,
                       "basis": [fmt_el(b) for b in p.basis],
                       "new_generators": [fmt_el(g) for g in p.new_generators]})
    gens = [{"weight": list(w), "element": fmt_el(g)} for w, g in report.generators]
    out = {"max_weight": report.bound, "weights": _weights_report(report.weights),
           "piece_limit": report.piece_limit, "pieces": pieces, "generators": gens,
           "generator_weights": [list(w) for w in report.generator_weights()]}
    if extra:
        out.update(extra)
    return out


def _graded_lines(result, title) -> List[str]:
    ws = result["weights"]
    lines = [f"grading rows: {ws['rows']}, shift {ws['shift']}, positive combination {ws['positive']}",
             f"{title} up to positive degree {result['max_weight']}"]
    for p in result["pieces"]:
        w = tuple(p["weight"])
        if p["skipped"]:
            lines.append(f"  weight {w}: {p['size']} monomials, skipped (limit {result['piece_limit']})")
            continue
        flag = " (incomplete)" if p["incomplete"] else ""
        lines.append(f"  weight {w}: size {p['size']}, kernel dim {p['kernel_dim']}, "
                     f"generated part {p['span_dim']}{flag}")
        for g in p["new_generators"]:
            lines.append(f"    new generator: {g}")
    lines.append(f"{len(result['generators'])} generator(s) at "
                 f"{len(result['generator_weights'])} weight(s)")
    return lines


def cmd_kernel(src, opts):
    d = _need_derivation(src)
    ws = infer_weights(d)
    target = _target_arg(opts, ws)
    if target is not None:
        basis = kernel_basis(d, ws, target)
        res = {"weights": _weights_report(ws), "target": list(target),
               "basis": [format_poly(b) for b in basis]}
        lines = [f"kernel at weight {target}: dim {len(basis)}"] + [f"  {format_poly(b)}" for b in basis]
        return res, lines
    if opts.get("max_weight") is None:
        raise UsageError("kernel needs --max-weight or --target")
    rep = kernel_generators(d, ws, opts["max_weight"], jobs=opts["jobs"], piece_limit=opts["piece_limit"])
    verified = all(not apply(d, g) for _, g in rep.generators)
    res = _graded_result(rep, format_poly, {"verified_in_kernel": verified})
    return res, _derivation_lines(d) + _graded_lines(res, "kernel")


def cmd_module_kernel(src, opts):
    m = _need_module(src, opts)
    ws = infer_weights(m.base)
    target = _target_arg(opts, ws)
    if target is not None:
        basis = module_kernel_basis(m, target, ws)
        res = {"weights": _weights_report(ws), "basis_weights": [list(w) for w in module_weights(m, ws)],
               "target": list(target), "basis": [m.format(z) for z in basis]}
        lines = [f"M_0 at weight {target}: dim {len(basis)}"] + [f"  {m.format(z)}" for z in basis]
        return res, lines
    if opts.get("max_weight") is None:
        raise UsageError("module-kernel needs --max-weight or --target")
    rep = module_kernel_generators(m, opts["max_weight"], ws, jobs=opts["jobs"],
                                   piece_limit=opts["piece_limit"])
    verified = all(not m.apply(z) for _, z in rep.generators)
    res = _graded_result(rep, m.format, {"basis_weights": [list(w) for w in rep.basis_weights],
                                         "verified_in_kernel": verified})
    lines = _module_lines(m)
    lines.append(f"basis weights: {res['basis_weights']}")
    return res, lines + _graded_lines(res, "M_0")


def cmd_omega(src, opts):
    m = omega(_need_derivation(src))
    return {"module": _module_report(m)}, _module_lines(m)


def cmd_sym_extend(src, opts):
    m = _need_module(src, opts)
    d = sym_extend(m)
    return {"derivation": _derivation_report(d)}, _derivation_lines(d)


def cmd_tensor(src, opts):
    m = _need_module(src, opts)
    t = tensor(m, _second_module(src, opts, m))
    return {"module": _module_report(t)}, _module_lines(t)


def cmd_hom(src, opts):
    m = _need_module(src, opts)
    h = hom(m, _second_module(src, opts, m))
    return {"module": _module_report(h)}, _module_lines(h)


def cmd_delta_ideal_check(src, opts):
    order = opts["order"]
    if (opts.get("ideal") is None) == (opts.get("submodule") is None):
        raise UsageError("delta-ideal-check needs exactly one of --ideal or --submodule")
    if opts.get("ideal") is not None:
        d = _need_derivation(src)
        gens = parse_poly_list(opts["ideal"], d.ring)
        if not gens:
            raise UsageError("--ideal needs at least one generator")
        ok, wit = is_delta_ideal(d, gens, order)
        res = {"kind": "ideal", "generators": [format_poly(g) for g in gens], "stable": ok,
               "witness": None if ok else {"element": format_poly(wit[0]), "image": format_poly(wit[1])}}
        lines = [f"ideal ({', '.join(res['generators'])}): delta-stable {str(ok).lower()}"]
    else:
        m = _need_module(src, opts)
        texts = [t.strip() for t in split_top_level(opts["submodule"], ",") if t.strip()]
        if not texts:
            raise UsageError("--submodule needs at least one generator")
        gens = [parse_element(t, m) for t in texts]
        ok, wit = is_delta_submodule(m, gens, order)
        res = {"kind": "submodule", "generators": [m.format(g) for g in gens], "stable": ok,
               "witness": None if ok else {"element": m.format(wit[0]), "image": m.format(wit[1])}}
        lines = [f"submodule <{', '.join(res['generators'])}>: delta-stable {str(ok).lower()}"]
    if not ok:
        lines.append(f"  witness: d({res['witness']['element']}) = {res['witness']['image']} is not in it")
    return res, lines


def cmd_kuroda(src, opts):
    if src.data is not None:
        data = src.data
    elif opts.get("omega") or src.module is not None:
        data = exponent_data_from_derivation(sym_extend(_need_module(src, opts)))
    else:
        data = exponent_data_from_derivation(_need_derivation(src))
    v = kuroda_verdict(data)
    systems = []
    lines = [f"m = {data.m}, r = {data.r}", f"eta = {v.eta}"]
    for s, r in zip(v.systems, v.results):
        systems.append({"k": s.k,
                        "rows": [{"coeffs": [_q(c) for c in co], "constant": _q(b)} for co, b in s.rows],
                        "display": s.format(), "feasible": r.feasible,
                        "witness": [_q(x) for x in r.witness] if r.feasible else None})
        lines.append(f"system k = {s.k}:")
        lines += [f"  {ln}" for ln in s.format()]
        if r.feasible:
            lines.append(f"  witness: ({', '.join(_q(x) for x in r.witness)})")
        else:
            lines.append("  infeasible")
    lines.append(f"verdict: {v.verdict}")
    res = {"m": data.m, "r": data.r, "delta": [list(x) for x in data.delta],
           "x_names": list(data.x_names), "y_names": list(data.y_names),
           "eta": _q(v.eta), "systems": systems, "verdict": v.verdict, "failing_k": v.failing_k}
    return res, lines


COMMANDS = {
    "check-lnd": (cmd_check_lnd, "decide local nilpotency"),
    "apply": (cmd_apply, "apply the derivation (--times n) to --poly"),
    "phi-t": (cmd_phi_t, "exponential map of --poly"),
    "nu": (cmd_nu, "degree of --poly with respect to the derivation"),
    "slice-kernel": (cmd_slice_kernel, "kernel generators from a slice"),
    "local-slice-kernel": (cmd_local_slice_kernel, "kernel elements from a local slice"),
    "kernel": (cmd_kernel, "graded kernel up to --max-weight"),
    "module-kernel": (cmd_module_kernel, "graded kernel of the module derivation"),
    "omega": (cmd_omega, "module of differentials"),
    "sym-extend": (cmd_sym_extend, "derivation on the symmetric algebra of a free module"),
    "tensor": (cmd_tensor, "tensor product of modules"),
    "hom": (cmd_hom, "module of homomorphisms"),
    "delta-ideal-check": (cmd_delta_ideal_check, "is an ideal or submodule stable"),
    "kuroda": (cmd_kuroda, "linear-inequality non-finite-generation criterion"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lnd-lab", description="Exact computations with locally nilpotent derivations.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--example", help="catalog id")
        p.add_argument("--param", action="append", default=[], metavar="NAME=INT")
        p.add_argument("--input", help="input file in the ring/derivation/module format")
        p.add_argument("--derivation", help="derivation name in the input file")
        p.add_argument("--module", help="module name in the input file")
        p.add_argument("--format", choices=["text", "json"], default="text")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="iteration cap")
        if name in ("apply", "phi-t", "nu", "slice-kernel", "local-slice-kernel"):
            p.add_argument("--poly", help="polynomial (comma-separated list for slice commands)")
        if name == "apply":
            p.add_argument("--times", type=int, default=1)
        if name == "phi-t":
            p.add_argument("--var", default="t", help="name of the new variable")
        if name in ("slice-kernel", "local-slice-kernel"):
            p.add_argument("--slice", help="slice u (or local slice u')")
        if name in ("kernel", "module-kernel"):
            p.add_argument("--max-weight", type=int, dest="max_weight")
            p.add_argument("--target", help="single weight, comma-separated")
            p.add_argument("--jobs", type=int, default=1)
            p.add_argument("--piece-limit", type=int, default=DEFAULT_PIECE_LIMIT, dest="piece_limit")
        if name in ("module-kernel", "sym-extend", "tensor", "hom", "delta-ideal-check", "kuroda"):
            p.add_argument("--omega", action="store_true", help="use the module of differentials")
        if name in ("tensor", "hom"):
            p.add_argument("--with", dest="with_module", help="second module from the input file")
        if name == "delta-ideal-check":
            p.add_argument("--ideal", help="comma-separated ideal generators")
            p.add_argument("--submodule", help="comma-separated module elements")
            p.add_argument("--order", choices=["grevlex", "lex"], default="grevlex")
    return parser


def parse_job(argv: Sequence[str]) -> JobSpec:
    args = build_parser().parse_args(list(argv))
    if not args.command:
        raise UsageError("missing command; choose from " + ", ".join(COMMANDS))
    opts = {k: v for k, v in vars(args).items() if k not in ("command", "example", "param", "input")}
    if opts["cap"] < 1:
        raise UsageError("--cap must be positive")
    if opts.get("jobs", 1) < 1:
        raise UsageError("--jobs must be positive")
    if opts.get("max_weight") is not None and opts["max_weight"] < 0:
        raise UsageError("--max-weight must be non-negative")
    params = dict(_parse_param(p) for p in args.param)
    job = JobSpec(args.command, args.example, params, args.input, opts)
    job.validate()
    return job


def run(job: JobSpec) -> dict:
    """Execute ``job`` and return the report (raises on error)."""
    src = load(job)
    fn = COMMANDS[job.command][0]
    result, lines = fn(src, job.options)
    if job.example is not None:
        inp = {"source": "example", "id": job.example, "params": dict(sorted(job.params.items()))}
    else:
        inp = {"source": "file", "path": job.input}
    return {"schema": SCHEMA_VERSION, "command": job.command, "input": inp, "result": result,
            "text": lines}


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        body = {k: v for k, v in report.items() if k != "text"}
        return json.dumps(body, indent=2, ensure_ascii=False) + "\n"
    return "\n".join(report["text"]) + "\n"


def _fail(kind: str, message: str, code: int) -> int:
    message = " ".join(str(message).split())
    sys.stderr.write(f"error[{kind}]: {message}\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        job = parse_job(argv)
        report = run(job)
    except UsageError as exc:
        return _fail("usage", exc, 2)
    except ParseError as exc:
        return _fail("parse", exc, 2)
    except LndError as exc:
        return _fail(exc.kind, exc, 1)
    except (ValueError, ZeroDivisionError) as exc:
        return _fail("domain", exc, 1)
    sys.stdout.write(render(report, job.options["format"]))
    return 0


def load_schema() -> dict:
    """The JSON schema every ``--format json`` report validates against."""
    from importlib import resources
    return json.loads(resources.files("lndlab").joinpath("report_schema.json").read_text(encoding="utf-8"))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
