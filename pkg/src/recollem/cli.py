"""``recollem`` command line.

Exit status: 0 when every check passes, 2 when a check fails, 1 on bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

from . import __version__
from .complexes import Complex
from .errors import RecollemError
from .exactla import Field
from .io import (
    algebra_from_json,
    category_from_json,
    complexes_from_json,
    load_json,
    modules_from_json,
    rep_from_json,
    reps_from_json,
)
from .kan import lan, lan_unit, ran, ran_counit, restrict
from .lincat import LinCat, SubcatSpec, validate_category
from .recollement_ab import AbRecollement, default_test_objects, in_S_A, verify_ab_recollement
from .recollement_der import DerRecollement, default_test_complexes, verify_der_recollement
from .report import Report, jsonable
from .repcat import hom_space
from .idempotent import compare_with_recollement
from .voevodsky import (
    VSetup,
    bigthm_build_and_verify,
    in_E_Q,
    model_complex,
    strict_v_check,
    v_property_check,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _objects(spec: Optional[str]) -> List[str]:
    if not spec:
        return []
    return [s.strip() for s in spec.split(",") if s.strip()]


def _category(args) -> LinCat:
    return category_from_json(load_json(args.category), args.field_obj)


def _rep_over(cat: LinCat, sub: SubcatSpec, data):
    """A representation file over the subcategory, or over ``cat`` (then restricted)."""
    if isinstance(data, dict) and data.get("cat") == cat.name:
        return restrict(rep_from_json(cat, data), sub)
    return rep_from_json(sub.cat, data)


def cmd_validate(args) -> List[Report]:
    cat = _category(args)
    v = validate_category(cat)
    rep = Report("validate", {"category": cat.name, "objects": list(cat.objects)})
    rep.clause("category_axioms", v.valid, v.to_json()["violations"] or None)
    rep.data = {"hom": {f"{a}->{b}": cat.homdim(a, b) for a in cat.objects for b in cat.objects}}
    return [rep]


def cmd_hom(args) -> List[Report]:
    cat = _category(args)
    x = rep_from_json(cat, load_json(args.rep_x))
    y = rep_from_json(cat, load_json(args.rep_y))
    rep = Report("hom", {"category": cat.name})
    basis = hom_space(x, y)
    rep.clause("inputs_are_representations", True)
    rep.data = {"source": x.dims(), "target": y.dims(), "hom_dim": len(basis)}
    return [rep]


def cmd_kan(args) -> List[Report]:
    cat = _category(args)
    sub = SubcatSpec(cat, tuple(_objects(args.sub)))
    f = _rep_over(cat, sub, load_json(args.rep))
    rep = Report(args.direction, {"category": cat.name, "subcategory": list(sub.objects)})
    if args.direction == "lan":
        out = lan(f, sub)
        rep.clause("unit_is_iso", lan_unit(f, sub).is_iso())
    else:
        out = ran(f, sub)
        rep.clause("counit_is_iso", ran_counit(f, sub).is_iso())
    rep.data = {"input": f.dims(), "result": out.to_json()}
    return [rep]


def cmd_abrec(args) -> List[Report]:
    cat = _category(args)
    rec = AbRecollement.of(cat, _objects(args.sub))
    tests = reps_from_json(cat, load_json(args.tests)) if args.tests else default_test_objects(cat, args.seed)
    return [verify_ab_recollement(rec, tests)]


def cmd_peirce(args) -> List[Report]:
    alg = algebra_from_json(load_json(args.algebra), args.field_obj)
    mods = modules_from_json(alg, load_json(args.modules)) if args.modules else None
    return [compare_with_recollement(alg, mods)]


def cmd_derrec(args) -> List[Report]:
    cat = _category(args)
    rec = DerRecollement(AbRecollement.of(cat, _objects(args.sub)))
    if args.complexes:
        tests = complexes_from_json(cat, load_json(args.complexes))
    else:
        tests = default_test_complexes(rec, default_test_objects(cat, args.seed, count=4))
    return [verify_der_recollement(rec, tests)]


def _setup(args, cat) -> VSetup:
    return VSetup.of(cat, _objects(args.s_objects), _objects(args.q_objects),
                     max_fixpoint_steps=args.max_steps)


def cmd_vcheck(args) -> List[Report]:
    cat = _category(args)
    v = _setup(args, cat)
    suite = reps_from_json(cat, load_json(args.suite))
    members = [s for s in suite if in_S_A(s, v.recA)]
    skipped = [k for k, s in enumerate(suite) if not in_S_A(s, v.recA)]
    vrep = v_property_check(v, members)
    vrep.data["skipped_outside_S_A"] = skipped
    if args.complexes:
        zs = complexes_from_json(cat, load_json(args.complexes))
        zs = [model_complex(z, v) for z in zs]
    else:
        zs = [Complex.concentrated(restrict(s, v.subB)) for s in members]
    keep = [z for z in zs if in_E_Q(z, v)]
    srep = strict_v_check(v, keep)
    srep.data["skipped_outside_E_Q"] = [k for k, z in enumerate(zs) if not in_E_Q(z, v)]
    return [vrep, srep]


def cmd_bigthm(args) -> List[Report]:
    cat = _category(args)
    v = _setup(args, cat)
    tests = complexes_from_json(cat, load_json(args.complexes)) if args.complexes else None
    suite = None
    if args.suite:
        suite = [s for s in reps_from_json(cat, load_json(args.suite)) if in_S_A(s, v.recA)]
    return [bigthm_build_and_verify(v, tests, suite, seed=args.seed)]


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--field", default="q", help="q or fp:<p>")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-steps", type=int, default=32, help="fixpoint step limit for join localization")
    common.add_argument("--report", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "md"), default="json")

    p = _Parser(prog="recollem", description="Exact verification of recollements over finite linear categories.")
    p.add_argument("--version", action="version", version=f"recollem {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", parents=[common], help="check the category axioms")
    s.add_argument("category")
    s.set_defaults(run=cmd_validate)

    s = sub.add_parser("hom", parents=[common], help="dimension of Hom(X, Y)")
    s.add_argument("category")
    s.add_argument("rep_x")
    s.add_argument("rep_y")
    s.set_defaults(run=cmd_hom)

    s = sub.add_parser("kan", parents=[common], help="left or right Kan extension")
    s.add_argument("direction", choices=("lan", "ran"))
    s.add_argument("category")
    s.add_argument("rep")
    s.add_argument("--sub", required=True)
    s.set_defaults(run=cmd_kan)

    s = sub.add_parser("abrec", parents=[common], help="verify the abelian recollement")
    s.add_argument("category")
    s.add_argument("--sub", required=True)
    s.add_argument("--tests")
    s.set_defaults(run=cmd_abrec)

    s = sub.add_parser("peirce", parents=[common], help="compare with the module-theoretic recollement")
    s.add_argument("algebra")
    s.add_argument("--modules")
    s.set_defaults(run=cmd_peirce)

    s = sub.add_parser("derrec", parents=[common], help="verify the derived recollement")
    s.add_argument("category")
    s.add_argument("--sub", required=True)
    s.add_argument("--complexes")
    s.set_defaults(run=cmd_derrec)

    for name, fn, help_ in (("vcheck", cmd_vcheck, "Voevodsky property checks"),
                            ("bigthm", cmd_bigthm, "recollement of the quotient by Q")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("category")
        s.add_argument("--s-objects", required=True)
        s.add_argument("--q-objects", required=True)
        s.add_argument("--suite", required=(name == "vcheck"))
        s.add_argument("--complexes")
        s.set_defaults(run=fn)
    return p


def emit_report(reports: Sequence[Report], meta: dict, fmt: str = "json") -> str:
    """Deterministic rendering: sorted keys, fixed indentation, no timestamps."""
    if fmt == "md":
        head = [f"<!-- recollem {meta['version']} field={meta['field']} seed={meta['seed']} -->", ""]
        return "\n".join(head) + "\n".join(r.to_markdown() for r in reports)
    body = dict(meta)
    body["holds"] = all(r.holds for r in reports)
    body["reports"] = [r.to_json() for r in reports]
    return json.dumps(jsonable(body), sort_keys=True, indent=2) + "\n"


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        args.field_obj = Field.parse(args.field)
        reports = args.run(args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return 1
    except (RecollemError, OSError) as e:
        where = getattr(e, "path", None)
        print(f"error: {e}" + (f" (at {where})" if where and where not in str(e) else ""), file=sys.stderr)
        return 1
    meta = {"tool": "recollem", "version": __version__, "command": args.command,
            "field": args.field_obj.spec(), "seed": args.seed}
    text = emit_report(reports, meta, args.format)
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            print(f"error: cannot write report: {e}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0 if all(r.holds for r in reports) else 2


def main() -> None:
    sys.exit(run())
