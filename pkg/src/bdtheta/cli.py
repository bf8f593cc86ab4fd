"""Command-line interface: ``bdtheta <group> <command> [options]``.

Exit codes: 0 success, 1 mathematical verdict against (NoSolution, NotExact,
failed recurrence, non-member, rejected certificate), 2 usage error.
All JSON output is written with sorted keys, so identical inputs give
byte-identical artifacts.
"""

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, fields

from . import __version__
from .errors import BDThetaError, NotExact
from .fitting import Presentation, fitting_ideal, membership_certificate, verify_certificate, wmc_check
from .groupring import (
    AtLeastCap,
    GroupRingElement,
    ZpRing,
    augmentation_order,
    omega,
)
from .padic import PrecisionProfile
from .pipeline import demo_chain
from .theta import (
    HorocyclicForm,
    RadialForm,
    TableForm,
    ThetaElement,
    bd_theta,
    check_lambda_compat,
    check_recurrence,
    lambda_stabilize,
    pm_extract,
)
from .torus import AnticyclotomicTorus
from .tree import BruhatTitsTree, TreeVertex

CONFIG_ENV = "BDTHETA_CONFIG"
SCHEMA_VERSION = "v1"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    p: int = 5
    a: int = 8
    guard: int = 2
    max_depth: int | None = None
    d: int | None = None
    seed: int = 0
    out: str | None = None

    def profile(self):
        return PrecisionProfile(self.p, self.a, self.guard)


def load_config(args):
    """Defaults, then the JSON config file (--config or $BDTHETA_CONFIG), then flags."""
    cfg = RunConfig()
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if path:
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from None
        known = {f.name for f in fields(RunConfig)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        cfg = RunConfig(**{**asdict(cfg), **data})
    overrides = {"p": "p", "a": "a", "guard": "guard", "depth": "max_depth", "seed": "seed", "out": "out", "d": "d"}
    for flag, name in overrides.items():
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, name, value)
    return cfg


def _profile(cfg, arithmetic=False):
    if arithmetic and cfg.p < 5:
        raise UsageError("arithmetic commands require p >= 5")
    try:
        return cfg.profile()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def emit(record, cfg, schema):
    record = {"schema": f"{schema}/{SCHEMA_VERSION}", **record}
    text = json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def read_json(path, what):
    if not path:
        raise UsageError(f"{what} requires --in FILE")
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def make_form(cfg, args, profile):
    radius = cfg.max_depth or profile.depth_budget
    spec = args.form
    if spec == "horocyclic":
        sign = -1 if getattr(args, "lam", None) == "-pi" else 1
        return HorocyclicForm(profile, sign, radius)
    if spec == "radial":
        return RadialForm(profile, radius)
    if spec == "constant":
        return TableForm.constant(profile, min(radius, args.level + 2))
    if spec and os.path.exists(spec):
        return TableForm.from_json(read_json(spec, "table form"), profile)
    raise UsageError(f"unknown form {spec!r}: use horocyclic, radial, constant or a JSON table")


def _torus(cfg, profile):
    return AnticyclotomicTorus(profile, cfg.d)


# commands


def cmd_tree_sphere(args, cfg):
    profile = _profile(cfg)
    tree = BruhatTitsTree(profile)
    center = tree.v0 if args.center is None else TreeVertex.from_json(read_json(args.center, "center"))
    if args.dot:
        text = tree.to_dot(center, args.r)
        if cfg.out:
            with open(cfg.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return 0
    sphere = tree.sphere(center, args.r)
    emit(
        {"p": cfg.p, "center": center.to_json(), "r": args.r, "count": len(sphere), "vertices": [v.to_json() for v in sphere]},
        cfg,
        "sphere",
    )
    return 0


def cmd_torus_cosets(args, cfg):
    profile = _profile(cfg, arithmetic=True)
    torus = _torus(cfg, profile)
    rows = torus.coset_table(args.m)
    emit({"p": cfg.p, "m": args.m, "d": torus.d, "order": torus.order(args.m), "rows": rows}, cfg, "coset_table")
    return 0


def cmd_ring_omega(args, cfg):
    profile = _profile(cfg)
    ring = ZpRing(profile)
    om = omega(ring, args.sign, args.n, args.level, tilde=args.tilde)
    emit(
        {
            "sign": args.sign,
            "n": args.n,
            "tilde": args.tilde,
            "element": om.element.to_json(),
            "poly": om.poly,
            "display": om.element.poly_string(),
        },
        cfg,
        "omega",
    )
    return 0


def _theta_input(args, cfg, profile, level):
    if args.input:
        record = read_json(args.input, "theta element")
        elem = GroupRingElement.from_json(record, profile if record.get("p") == profile.p and record.get("a") == profile.a else None)
        return ThetaElement(elem.n, elem, record.get("provenance", {"source": "file"}))
    if not args.form:
        raise UsageError("give --form or --in")
    return bd_theta(make_form(cfg, args, profile), level, _torus(cfg, profile))


def cmd_bd_compute(args, cfg):
    profile = _profile(cfg, arithmetic=True)
    theta = bd_theta(make_form(cfg, args, profile), args.level, _torus(cfg, profile))
    record = theta.to_json()
    record["display"] = theta.element.poly_string()
    emit(record, cfg, "theta_element")
    return 0


def cmd_bd_recurrence(args, cfg):
    profile = _profile(cfg, arithmetic=True)
    form = make_form(cfg, args, profile)
    report = check_recurrence(form, args.level, torus=_torus(cfg, profile))
    emit({"form": form.form_id, **report.to_json()}, cfg, "recurrence")
    return 0 if report.passed else 1


def cmd_bd_pm_extract(args, cfg):
    profile = _profile(cfg, arithmetic=True)
    theta = _theta_input(args, cfg, profile, args.level)
    result = pm_extract(theta.element)
    if not result:
        emit({"n": theta.n, **result.to_json()}, cfg, "pm_extract")
        return 1
    emit({"verdict": "ok", **result.to_json()}, cfg, "pm_extract")
    return 0


def cmd_bd_stabilize(args, cfg):
    profile = _profile(cfg, arithmetic=True)
    if args.level < 1:
        raise UsageError("stabilization needs --level >= 1")
    form = make_form(cfg, args, profile)
    torus = _torus(cfg, profile)
    lam = args.lam or "+pi"
    current = bd_theta(form, args.level, torus).element
    previous = bd_theta(form, args.level - 1, torus).element
    stabilized = lambda_stabilize(current, previous, lam)
    record = {"lambda": lam, "n": args.level, "element": stabilized.to_json(), "display": stabilized.poly_string()}
    ok = True
    if args.check_compat:
        report = check_lambda_compat(form, args.level, lam, torus)
        record["compat"] = report.to_json()
        ok = report.passed
    emit(record, cfg, "stabilized")
    return 0 if ok else 1


def cmd_fitt_compute(args, cfg):
    P = Presentation.from_json(read_json(args.input, "fitt compute"))
    ideal = fitting_ideal(P)
    emit({"presentation": P.to_json(), "ideal": ideal.to_json(), "cardinality_log_p": _log_card(ideal)}, cfg, "fitting_ideal")
    return 0


def _log_card(ideal):
    return sum(ideal.ring.a - v for _, v in ideal.basis.pivots)


def _element_vector(path):
    record = read_json(path, "--element")
    if isinstance(record, dict):
        return GroupRingElement.from_json(record)
    return record


def cmd_fitt_member(args, cfg):
    P = Presentation.from_json(read_json(args.input, "fitt member"))
    cert = membership_certificate("fitt member", _element_vector(args.element), P)
    emit(cert, cfg, "certificate")
    return 0 if cert["verdict"] == "member" else 1


def cmd_fitt_verify_cert(args, cfg):
    cert = read_json(args.input, "fitt verify-cert")
    cert.pop("schema", None)
    ok, problems = verify_certificate(cert)
    emit({"ok": ok, "problems": problems, "verdict": cert.get("verdict")}, cfg, "verification")
    return 0 if ok else 1


def cmd_wmc_run(args, cfg):
    P = Presentation.from_json(read_json(args.input, "wmc run"))
    Lp = _element_vector(args.element)
    if not isinstance(Lp, GroupRingElement):
        Lp = GroupRingElement(ZpRing(PrecisionProfile(P.ring.p, P.ring.a)), P.ring.n, P.ring.reduce(Lp))
    cert = wmc_check(Lp, P)
    emit(cert, cfg, "certificate")
    return 0 if cert["verdict"] == "member" else 1


def cmd_vanish_order(args, cfg):
    if args.input:
        A = GroupRingElement.from_json(read_json(args.input, "vanish order"))
    elif args.power is not None:
        profile = _profile(cfg)
        ring = ZpRing(profile)
        A = (GroupRingElement.gamma(ring, args.n) - 1) ** args.power
    else:
        raise UsageError("give --in FILE or --power r")
    order = augmentation_order(A, args.char, args.cap)
    value = order.to_json() if isinstance(order, AtLeastCap) else order
    emit({"element": A.to_json(), "char": args.char, "cap": args.cap, "order": value}, cfg, "vanishing_order")
    return 0


def cmd_demo_chain(args, cfg):
    _profile(cfg, arithmetic=True)
    record = demo_chain(cfg.p, args.n, cfg.a, cfg.seed)
    emit(record, cfg, "demo_chain")
    return 0 if record["verdict"] == "member" else 1


# parser


def _common():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="the prime")
    common.add_argument("--a", type=int, help="precision exponent (work mod p^a)")
    common.add_argument("--guard", type=int, help="guard digits")
    common.add_argument("--depth", type=int, help="maximum tree depth / form radius")
    common.add_argument("--d", type=int, help="quadratic non-residue override")
    common.add_argument("--seed", type=int, help="seed for randomized inputs")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    return common


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="bdtheta", description="Theta elements, group rings and Fitting ideals at finite level.")
    parser.add_argument("--version", action="version", version=f"bdtheta {__version__}")
    groups = parser.add_subparsers(dest="group", required=True)

    def command(group_parser, name, func, help_text):
        sub = group_parser.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(func=func)
        return sub

    tree = groups.add_parser("tree").add_subparsers(dest="command", required=True)
    sp = command(tree, "sphere", cmd_tree_sphere, "vertices at distance r")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--center", help="JSON file with a vertex")
    sp.add_argument("--dot", action="store_true", help="emit the ball as Graphviz DOT")

    torus = groups.add_parser("torus").add_subparsers(dest="command", required=True)
    command(torus, "cosets", cmd_torus_cosets, "coset table of the level-m torus").add_argument("--m", type=int, required=True)

    ring = groups.add_parser("ring").add_subparsers(dest="command", required=True)
    om = command(ring, "omega", cmd_ring_omega, "the elements omega_n^+-")
    om.add_argument("--n", type=int, required=True)
    om.add_argument("--sign", choices=["+", "-"], required=True)
    om.add_argument("--level", type=int)
    om.add_argument("--tilde", action="store_true")

    bd = groups.add_parser("bd").add_subparsers(dest="command", required=True)
    for name, func, text in (
        ("compute", cmd_bd_compute, "theta element of a form"),
        ("recurrence", cmd_bd_recurrence, "check the a_p = 0 recurrence"),
        ("pm-extract", cmd_bd_pm_extract, "signed part of a theta element"),
        ("stabilize", cmd_bd_stabilize, "lambda-stabilized theta element"),
    ):
        sub = command(bd, name, func, text)
        sub.add_argument("--form", help="horocyclic | radial | constant | table JSON")
        sub.add_argument("--level", type=int, default=1)
        sub.add_argument("--lambda", dest="lam", choices=["+pi", "-pi"], help="write --lambda=-pi for the negative root")
        if name == "pm-extract":
            sub.add_argument("--in", dest="input", help="theta element JSON")
        if name == "stabilize":
            sub.add_argument("--check-compat", action="store_true")

    fitt = groups.add_parser("fitt").add_subparsers(dest="command", required=True)
    command(fitt, "compute", cmd_fitt_compute, "Fitting ideal of a presentation").add_argument("--in", dest="input")
    mem = command(fitt, "member", cmd_fitt_member, "membership certificate")
    mem.add_argument("--in", dest="input")
    mem.add_argument("--element", required=True)
    command(fitt, "verify-cert", cmd_fitt_verify_cert, "replay a certificate").add_argument("--in", dest="input")

    wmc = groups.add_parser("wmc").add_subparsers(dest="command", required=True)
    run = command(wmc, "run", cmd_wmc_run, "Lp membership in Fitt(Sel)")
    run.add_argument("--in", dest="input")
    run.add_argument("--element", required=True)

    vanish = groups.add_parser("vanish").add_subparsers(dest="command", required=True)
    vo = command(vanish, "order", cmd_vanish_order, "augmentation-power order")
    vo.add_argument("--in", dest="input")
    vo.add_argument("--power", type=int, help="use (gamma - 1)^power")
    vo.add_argument("--n", type=int, default=2)
    vo.add_argument("--char", type=int, default=0, help="conductor exponent j")
    vo.add_argument("--cap", type=int, default=8)

    demo = groups.add_parser("demo").add_subparsers(dest="command", required=True)
    command(demo, "chain", cmd_demo_chain, "synthetic end-to-end membership chain").add_argument("--n", type=int, default=1)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"bdtheta: error: {exc}", file=sys.stderr)
        return 2
    except NotExact as exc:
        print(json.dumps({"verdict": "not_exact", "message": str(exc), "detail": exc.detail}, sort_keys=True))
        return 1
    except BDThetaError as exc:
        print(f"bdtheta: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
