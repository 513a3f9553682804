"""Command-line interface: JSON on stdout, a short summary on stderr.

Exit codes: 0 success, 1 usage or unreadable input, 2 domain error (not
symplectic, zero target, singular point, uncertified field, ...), 3 a
tolerance or verification failure.

Settings resolve as command-line flags > ``--config`` file (TOML or JSON) >
built-in defaults; the seed falls back to ``SYMPFACTOR_SEED`` when neither
the flag nor the file sets it.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import exact as ex
from . import serialize as ser
from .config import Config
from .elemsym import NotSymplectic, NonUnit, reconstruct, validate
from .factorizer import (BlockAssertFailed, LiftFailed, NotUnimodular, ResidualTooLarge,
                         factorize)
from .phimap import ClassificationMismatch, ZeroTarget, classify, lift_pad, phi_eval
from .polyfield.completeness import completeness_check, verify_type_table
from .polyfield.fields import TYPE_KINDS, IndexClash, point_values
from .polyfield.flows import NotCertified, field_flow, gamma_flow, lifted_flow
from .polyfield.span import SingularPoint, builtin_collection, span_check

DOMAIN_ERRORS = (NotSymplectic, NonUnit, NotUnimodular, ZeroTarget, SingularPoint, NotCertified,
                 IndexClash, ClassificationMismatch, LiftFailed, BlockAssertFailed)


class UsageError(Exception):
    pass


class CheckFailed(Exception):
    """A computed result missed its tolerance; carries the JSON to print."""

    def __init__(self, msg, payload=None):
        super().__init__(msg)
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kw):
        kw.setdefault("allow_abbrev", False)   # --t must not read as a --tol-* prefix
        super().__init__(*args, **kw)

    def error(self, message):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    # defaults are suppressed so a flag given before or after the subcommand both count
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    g = p.add_argument_group("configuration")
    g.add_argument("--config", default=argparse.SUPPRESS, help="TOML or JSON config file")
    g.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    g.add_argument("--mode", choices=("float", "exact"), default=argparse.SUPPRESS)
    for name in ("symp", "factor", "rank", "solve", "zero", "pivot"):
        g.add_argument(f"--tol-{name}", type=float, default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="sympfactor", parents=[common],
                     description="Elementary symplectic factorization and fiber geometry of Phi_K.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    p = sub.add_parser("factor", parents=[common], help="factor a symplectic matrix")
    p.add_argument("matrix")
    p.add_argument("--compact", action="store_true", help="merge adjacent same-side factors")
    p.add_argument("--exact", action="store_true", help="read the input as exact rationals")
    p.add_argument("--emit", help="also write the word JSON to this file")
    p.add_argument("--precision", type=int, help="working bits (53 = plain complex128)")

    p = sub.add_parser("reconstruct", parents=[common], help="multiply out a factor word")
    p.add_argument("word")
    p.add_argument("--exact", action="store_true", help="print exact rationals")

    p = sub.add_parser("validate", parents=[common], help="check M^T J M = J")
    p.add_argument("matrix")

    p = sub.add_parser("lift", parents=[common], help="a point of W_K over a target y")
    p.add_argument("--target", required=True)
    p.add_argument("--K", type=int, required=True)

    for name, text in (("classify", "W_K / S_K membership"), ("phi", "evaluate Phi_K")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--point", required=True)

    p = sub.add_parser("fields", parents=[common], help="polynomial vector fields")
    fsub = p.add_subparsers(dest="fields_command", parser_class=_Parser, required=True)
    q = fsub.add_parser("check-type", parents=[common], help="certify a type of complete tuples")
    q.add_argument("--type", required=True, help="type1 .. type8 or all")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--K", type=int, required=True)
    q = fsub.add_parser("lie", parents=[common], help="Lie derivatives of the defining polynomials")
    q.add_argument("--spec", required=True)
    q = fsub.add_parser("flow", parents=[common], help="flow a certified field")
    q.add_argument("--spec", required=True)
    q.add_argument("--point", required=True)
    q.add_argument("--t", required=True, help='complex time as "re,im"')
    q = fsub.add_parser("span", parents=[common], help="span check of a field collection")
    _span_args(q)

    p = sub.add_parser("span", parents=[common], help="same as 'fields span'")
    _span_args(p)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _span_args(p):
    p.add_argument("--point", required=True)
    p.add_argument("--collection", default="builtin", help='"builtin" or "builtin:k<K>"')


def load_config(args) -> Config:
    overrides = {k: getattr(args, k) for k in
                 ("seed", "mode", "tol_symp", "tol_factor", "tol_rank", "tol_solve", "tol_zero",
                  "tol_pivot") if hasattr(args, k)}
    try:
        return Config.load(getattr(args, "config", None), overrides)
    except OSError as e:
        raise UsageError(f"cannot read config: {e}") from None
    except ValueError as e:
        raise UsageError(f"bad configuration: {e}") from None


def _read(path):
    try:
        return ser.load_json(path)
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except ValueError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def _num(x):
    """A residual for JSON; zero prints as 0."""
    if x == 0:
        return 0
    return float(abs(x)) if not isinstance(x, float) else x


def _exact_flag(args, cfg) -> bool | None:
    return True if getattr(args, "exact", False) or cfg.mode == "exact" else None


# -- subcommands -------------------------------------------------------------------

def cmd_factor(args, cfg):
    M = ser.decode_matrix(_read(args.matrix), _exact_flag(args, cfg))
    try:
        r = factorize(M, cfg.tol_factor, cfg.tol_pivot, cfg.tol_symp, do_compact=args.compact,
                      precision=args.precision)
    except ResidualTooLarge as e:
        raise CheckFailed(str(e), _factor_json(e.result)) from None
    out = _factor_json(r)
    if args.emit:
        Path(args.emit).write_text(ser.dumps(out["word"]) + "\n")
    return out, f"{r.factor_count} factors (bound {r.bound}), residual {r.reconstruction_residual:.2e}"


def _factor_json(r):
    return {"n": r.word.n, "factor_count": r.factor_count, "bound": r.bound,
            "residual": _num(r.reconstruction_residual), "precision": r.precision,
            "word": ser.encode_word(r.word)}


def cmd_reconstruct(args, cfg):
    obj = _read(args.word)
    w = ser.decode_word(obj.get("word", obj))
    M = reconstruct(w).M
    if not (args.exact or cfg.mode == "exact"):
        M = ex.float_array(M)
    return {"n": w.n, "M": ser.encode_matrix(M)}, f"product of {len(w)} factors"


def cmd_validate(args, cfg):
    M = ser.decode_matrix(_read(args.matrix), _exact_flag(args, cfg))
    try:
        sm = validate(M, cfg.tol_symp)
    except NotSymplectic as e:
        rep = e.report or {}
        payload = {"symplectic": False, "residual": _num(rep.get("residual", float("nan")))}
        raise _DomainWithPayload(str(e), payload) from None
    return {"symplectic": True, "residual": _num(sm.residual)}, "symplectic"


class _DomainWithPayload(Exception):
    def __init__(self, msg, payload):
        super().__init__(msg)
        self.payload = payload


def cmd_lift(args, cfg):
    y = ser.decode_target(_read(args.target), _exact_flag(args, cfg))
    p = lift_pad(y, args.K, cfg.tol_zero)
    err = ex.max_abs(phi_eval(p) - y.vector)
    rep = classify(p, cfg.tol_rank, cfg.tol_zero, strict=False)
    out = {"point": ser.encode_point(p), "residual": _num(err), "in_WK": rep.in_WK}
    if err > cfg.tol_solve:
        raise CheckFailed(f"lift residual {float(err):.2e} > {cfg.tol_solve:.1e}", out)
    return out, f"lifted to K={args.K}, residual {float(err):.2e}"


def cmd_classify(args, cfg):
    p = ser.decode_point(_read(args.point))
    rep = classify(p, cfg.tol_rank, cfg.tol_zero, strict=False)
    out = rep.as_dict()
    if not rep.consistent:
        raise CheckFailed("closed form and Jacobian rank disagree", out)
    return out, f"in_WK={rep.in_WK} in_SK={rep.in_SK} rank={rep.jacobian_rank}"


def cmd_phi(args, cfg):
    p = ser.decode_point(_read(args.point))
    v = phi_eval(p)
    return {"n": p.n, "K": p.K, "phi": ser.encode_matrix(v)}, f"Phi_{p.K} evaluated"


def cmd_check_type(args, cfg):
    kinds = TYPE_KINDS if args.type == "all" else (args.type,)
    if any(k not in TYPE_KINDS for k in kinds):
        raise UsageError(f"--type must be one of {', '.join(TYPE_KINDS)} or all")
    rep = verify_type_table(args.n, args.K, kinds)
    out = rep.as_dict()
    if not rep.passed:
        raise CheckFailed("type table check failed", out)
    return out, f"{sum(v['passed'] for v in rep.per_type.values())} tuples certified"


def cmd_lie(args, cfg):
    fs = ser.decode_field(_read(args.spec))
    polys = fs.defining_polys()
    derivs = [fs.field.apply(q) for q in polys]
    out = {"kind": fs.kind, "field": ser.encode_field(fs.field),
           "defining": "ptilde" if fs.kind == "dx" else "phi",
           "lie_derivatives": [ser.poly_text(d) for d in derivs],
           "zero": all(d.is_zero() for d in derivs)}
    if fs.kind == "dx":
        out["completeness"] = completeness_check(fs.tuple, polys).as_dict()
    return out, "fiber preserving" if out["zero"] else "NOT fiber preserving"


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(s) for s in text.split(",")]
    except ValueError:
        raise UsageError(f'--t must be "re,im", got {text!r}') from None
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise UsageError(f'--t must be "re,im", got {text!r}')
    return complex(*parts)


def cmd_flow(args, cfg):
    fs = ser.decode_field(_read(args.spec))
    p = ser.decode_point(_read(args.point), exact=False)
    t = _complex_arg(args.t)
    if p.n != fs.n:
        raise UsageError("point and field have different n")
    if fs.kind == "dx":
        if p.K < fs.K:
            raise UsageError(f"point needs at least K={fs.K} factors")
        q = field_flow(fs.tuple, fs.K, p, t)
        before = [c.eval(point_values(p)) for c in fs.defining_polys()]
        after = [c.eval(point_values(q)) for c in fs.defining_polys()]
        drift = float(np.max(np.abs(np.subtract(after, before))))
    elif fs.kind in ("phi", "gamma"):
        if p.K != fs.K:
            raise UsageError(f"point must have exactly K={fs.K} factors")
        if fs.kind == "phi":
            q = lifted_flow(fs.tuple, fs.jstar, fs.K, p, t)
        else:
            q = gamma_flow(*fs.gamma, fs.jstar, p, t)
        drift = float(np.max(np.abs(phi_eval(q) - phi_eval(p))))
    else:
        raise NotCertified("explicit component maps have no certified flow; use a tuple spec")
    out = {"point": ser.encode_point(q), "t": [t.real, t.imag], "drift": drift}
    if not np.isfinite(drift) or drift > cfg.tol_factor * max(1.0, ex.max_abs(phi_eval(p))):
        raise CheckFailed(f"flow drifted off the fiber by {drift:.2e}", out)
    return out, f"flowed to t={t}, drift {drift:.2e}"


def cmd_span(args, cfg):
    p = ser.decode_point(_read(args.point), exact=False)
    name = args.collection
    if name not in ("builtin",) and not name.startswith("builtin:k"):
        raise UsageError('--collection must be "builtin" or "builtin:k<K>"')
    if name.startswith("builtin:k"):
        try:
            K = int(name[len("builtin:k"):])
        except ValueError:
            raise UsageError(f"bad collection {name!r}") from None
        if K != p.K:
            raise UsageError(f"collection is for K={K} but the point has K={p.K}")
    rep = span_check(p.n, p.K, p, builtin_collection(p.n, p.K, p), cfg.tol_rank)
    return rep.as_dict(), f"spanned {rep.spanned_dim} of {rep.kernel_dim}"


def cmd_selftest(args, cfg):
    from .acceptance import CRITERIA, run_all

    only = None
    if args.only:
        try:
            only = sorted({int(s) for s in args.only.split(",")})
        except ValueError:
            raise UsageError("--only takes comma-separated integers") from None
        if any(k not in CRITERIA for k in only):
            raise UsageError(f"criteria are numbered 1..{len(CRITERIA)}")
    results = run_all(cfg.seed, only, echo=lambda line: print(line, file=args.stderr, flush=True))
    # timings go to stderr only so that reruns print identical JSON
    out = {"seed": cfg.seed, "criteria": [
        {k: v for k, v in r.as_dict().items() if k != "seconds"} for r in results],
        "passed": all(r.passed for r in results)}
    failed = [r.number for r in results if not r.passed]
    if failed:
        raise CheckFailed(f"criteria failed: {failed}", out)
    return out, f"all {len(results)} criteria passed"


COMMANDS = {"factor": cmd_factor, "reconstruct": cmd_reconstruct, "validate": cmd_validate,
            "lift": cmd_lift, "classify": cmd_classify, "phi": cmd_phi, "span": cmd_span,
            "selftest": cmd_selftest}
FIELD_COMMANDS = {"check-type": cmd_check_type, "lie": cmd_lie, "flow": cmd_flow, "span": cmd_span}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.stderr = stderr
        cfg = load_config(args)
        if args.command == "fields":
            fn = FIELD_COMMANDS[args.fields_command]
        else:
            fn = COMMANDS[args.command]
        out, summary = fn(args, cfg)
    except UsageError as e:
        print(f"usage error: {e}", file=stderr)
        return 1
    except CheckFailed as e:
        if e.payload is not None:
            print(ser.dumps(e.payload), file=stdout)
        print(f"check failed: {e}", file=stderr)
        return 3
    except _DomainWithPayload as e:
        print(ser.dumps(e.payload), file=stdout)
        print(f"error: {e}", file=stderr)
        return 2
    except DOMAIN_ERRORS as e:
        print(f"error: {type(e).__name__}: {e}", file=stderr)
        return 2
    except (ValueError, KeyError, TypeError, IndexError) as e:
        # malformed input that parsed as JSON but not as the expected object
        print(f"error: {type(e).__name__}: {e}", file=stderr)
        return 2
    print(ser.dumps(out), file=stdout)
    print(summary, file=stderr)
    return 0


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
