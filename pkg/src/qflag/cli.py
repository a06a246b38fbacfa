"""Command-line entry point: ``qflag <subcommand> [options]``.

Exit codes: 0 every verdict passes, 1 a verification fails, 2 invalid
configuration, 3 internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import flagalg
from .funalg import (FunElem, haar, haar_inner, haar_norm, irrep, matrix_coefficient,
                     multiply, random_element, star, su2_generators)
from .repengine import checks
from .repengine.rank1 import InternalError
from .repengine.soibelman import RepSpec, TorusPoint, pi_wt, rank_one_cross_check
from .rootsys import (ConfigurationError, _check_subset, build_root_system, coset_factorize,
                      minimal_coset_reps, parabolic_subgroup, poincare_polynomial,
                      poisson_subgroup_descriptor, reduced_words, schubert_cells, weyl_enumerate,
                      weyl_group)
from .uqmod import (DomainError, parse_q, relation_check, sl2_strings,
                    star_adjointness_check)


# -- option parsing -------------------------------------------------------------------------

def _int_list(text: str | None) -> list:
    if text is None or text.strip() == "":
        return []
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise ConfigurationError(f"expected a comma separated integer list, got {text!r}")


def _float_list(text: str | None) -> list:
    if not text:
        return []
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise ConfigurationError(f"expected a comma separated list of numbers, got {text!r}")


def _q(text: str):
    try:
        return parse_q(text)
    except (ValueError, ZeroDivisionError, TypeError) as e:
        if isinstance(e, ConfigurationError):
            raise
        raise ConfigurationError(f"q must be an exact fraction p/r, got {text!r}")


def _root_system(args):
    return build_root_system(args.type, args.rank)


def _weight(R, text, name="Lambda") -> tuple:
    lam = tuple(_int_list(text))
    if len(lam) != R.rank:
        raise ConfigurationError(f"--{name} needs {R.rank} coordinates")
    return lam


def _element(R, q, spec: str | None) -> FunElem:
    """``L-+`` style generators in rank one, or ``c:<lambda>:<u>:<v>``."""
    if spec is None:
        if R.rank != 1:
            raise ConfigurationError("--elem is required above rank one")
        spec = "L-+"
    if spec.startswith("L"):
        if R.name != "A1":
            raise ConfigurationError("L generators exist only for type A rank 1")
        gens = su2_generators(q)
        key = spec[1:]
        if key not in gens:
            raise ConfigurationError(f"unknown generator {spec!r}")
        return gens[key]
    parts = spec.split(":")
    if len(parts) != 4 or parts[0] != "c":
        raise ConfigurationError(f"element must be L<eps><xi> or c:<lambda>:<u>:<v>, got {spec!r}")
    lam = _weight(R, parts[1], "elem lambda")
    dim = irrep(R, q, lam).dim
    try:
        u, v = int(parts[2]), int(parts[3])
    except ValueError:
        raise ConfigurationError(f"bad basis indices in {spec!r}")
    if not (0 <= u < dim and 0 <= v < dim):
        raise ConfigurationError(f"basis indices must lie in 0..{dim - 1}")
    return matrix_coefficient(R, q, lam, u, v)


def _torus(R, text, S=()) -> TorusPoint:
    ph = _float_list(text)
    if not ph:
        return TorusPoint.unit(R.rank)
    if len(ph) != R.rank:
        raise ConfigurationError(f"--t needs {R.rank} phases")
    return TorusPoint.from_phases(ph)


# -- output --------------------------------------------------------------------------------------

def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    return str(x)


def _emit(payload: dict, fmt: str, out) -> None:
    if fmt == "csv":
        rows = payload.get("rows") or [payload]
        keys = sorted({k for r in rows for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(r[k], default=_json_default, sort_keys=True)
                        if isinstance(r.get(k), (list, dict)) else r.get(k, "") for k in keys})
        out.write(buf.getvalue())
        return
    out.write(json.dumps(payload, default=_json_default, sort_keys=True, indent=2))
    out.write("\n")


def _reports(reports) -> tuple[dict, bool]:
    ok = all(r.passed for r in reports)
    if len(reports) == 1:
        return reports[0].to_json(), ok
    rows = [row for r in reports for row in r.rows]
    return {"verdict": "PASS" if ok else "FAIL", "reports": [r.to_json() for r in reports],
            "rows": rows}, ok


# -- subcommands ----------------------------------------------------------------------------------

def cmd_roots(args):
    R = _root_system(args)
    return {"type": R.name, "cartan": R.cartan, "gram": R.gram, "d": R.d,
            "simple_roots": R.simple_roots, "positive_roots": R.positive_roots,
            "num_positive_roots": len(R.positive_roots), "rho": R.rho(),
            "weyl_order": len(weyl_group(R))}, True


def cmd_weyl(args):
    R = _root_system(args)
    S = _check_subset(R, _int_list(args.S))
    reps = minimal_coset_reps(R, S)
    WS = parabolic_subgroup(R, S)
    W = weyl_enumerate(R)
    ok = len(reps) * len(WS) == len(W)
    for w in W:
        u, v = coset_factorize(w, S)
        ok &= u.length + v.length == w.length and u * v == w
    return {"type": R.name, "S": sorted(S), "weyl_order": len(W), "parabolic_order": len(WS),
            "coset_representatives": [w.to_json() for w in reps],
            "verdict": "PASS" if ok else "FAIL"}, ok


def cmd_cells(args):
    R = _root_system(args)
    S = _check_subset(R, _int_list(args.S))
    cells = schubert_cells(R, S)
    return {"type": R.name, "S": sorted(S),
            "cells": [{"w": list(c.w.word), "dim": c.dim} for c in cells],
            "poincare": poincare_polynomial([c.w for c in cells])}, True


def cmd_poisson(args):
    R = _root_system(args)
    d = poisson_subgroup_descriptor(R, _int_list(args.S))
    return dict(d.to_json(), type=R.name), True


def cmd_module(args):
    R = _root_system(args)
    q = _q(args.q)
    lam = _weight(R, args.Lambda)
    M = irrep(R, q, lam)
    rel = relation_check(M)
    adj = star_adjointness_check(M)
    pos = all(n > 0 for n in M.norms)
    ok = rel and adj and pos
    char = sorted(M.character().items())
    strings = {str(i): [str(s) for s in sorted(x.spin for x in sl2_strings(M, i))]
               for i in range(1, R.rank + 1)}
    return {"type": R.name, "q": str(q), "Lambda": list(lam), "dim": M.dim,
            "character": [{"weight": list(mu), "mult": m} for mu, m in char],
            "sl2_spins": strings,
            "relations": rel, "star_adjoint": adj, "gram_positive": pos,
            "claim": "module:V(lambda) is a unitarizable U_q(g)-module",
            "verdict": "PASS" if ok else "FAIL"}, ok


def cmd_funalg(args):
    """Haar and star checks on random elements supported on the given weights."""
    R = _root_system(args)
    q = _q(args.q)
    lams = [(0,) * R.rank]
    if args.Lambda:
        lams.append(_weight(R, args.Lambda))
    else:
        lams += [R.fundamental(i) for i in range(1, R.rank + 1)]
    rng = np.random.default_rng(args.seed)
    one = FunElem.one(R, q)
    rows = [{"check": "h(1)=1", "value": str(haar(one)), "verdict":
             "PASS" if haar(one) == 1 else "FAIL"}]
    for lam in lams[1:]:
        dim = irrep(R, q, lam).dim
        zero = all(haar(matrix_coefficient(R, q, lam, u, v)) == 0
                   for u in range(dim) for v in range(dim))
        rows.append({"check": "h=0 on W(lambda)", "lambda": list(lam),
                     "verdict": "PASS" if zero else "FAIL"})
    elems = [random_element(R, q, [lam], rng) for lam in lams]
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            v = haar_inner(elems[i], elems[j])
            rows.append({"check": "orthogonality", "lambda": list(lams[i]), "mu": list(lams[j]),
                         "value": str(v), "verdict": "PASS" if v == 0 else "FAIL"})
    for lam, a, b in zip(lams, elems, elems[1:] + elems[:1]):
        # star is an antimultiplicative involution
        good = star(star(a)) == a and star(multiply(a, b)) == multiply(star(b), star(a))
        rows.append({"check": "star", "lambda": list(lam), "verdict": "PASS" if good else "FAIL"})
        if not a.is_zero():
            n = haar_norm(a)
            rows.append({"check": "positivity", "lambda": list(lam), "value": n,
                         "verdict": "PASS" if n > 0 else "FAIL"})
    for r in rows:
        r["claim"] = ("star:(ab)*=b*a*" if r["check"] == "star"
                      else "peter-weyl:h is the projection onto W(0)")
    ok = all(r["verdict"] == "PASS" for r in rows)
    return {"type": R.name, "q": str(q), "seed": args.seed, "rows": rows,
            "verdict": "PASS" if ok else "FAIL"}, ok


def cmd_flag(args):
    R = _root_system(args)
    q = _q(args.q)
    S = _int_list(args.S)
    d = args.degree
    if d < 0:
        raise ConfigurationError("--degree must be nonnegative")
    if args.flag_cmd == "verify-algthm":
        fw = flagalg.FlagWeight.make(R, S, _weight(R, args.Lambda))
        rep = flagalg.verify_theorem_algthm(fw, d, q)
    elif args.flag_cmd == "verify-ss":
        rep = flagalg.verify_theorem_ss_a(R, S, d, q)
    else:
        fw = flagalg.FlagWeight.make(R, S, _weight(R, args.Lambda))
        rep = flagalg.check_a0_proper(fw, d, q)
        return rep.to_json(), rep.verdict in ("PROPER", "NOT-APPLICABLE")
    return rep.to_json(), rep.passed


def cmd_rep(args):
    R = _root_system(args)
    q = _q(args.q)
    if args.rep_cmd == "matrix":
        a = _element(R, q, args.elem)
        word = tuple(_int_list(args.w))
        spec = RepSpec(R, word, args.N, _torus(R, args.t))
        op = pi_wt(a, spec, args.margin)
        if len(word) == 1:
            rank_one_cross_check(a, word[0], args.N)
        if args.format == "binary":
            return op.to_binary(), True
        return dict(op.to_json(), word=list(word)), True
    S = _check_subset(R, _int_list(args.S))
    if args.rep_cmd == "verify-class":
        reports = []
        free = [k for k in range(1, R.rank + 1) if k not in S]
        if free:
            lam = _weight(R, args.Lambda) if args.Lambda else tuple(
                1 if k in free else 0 for k in range(1, R.rank + 1))
            fw = flagalg.FlagWeight.make(R, S, lam)
            reports.append(checks.inequivalence_patterns(fw, args.N, q))
        longest = weyl_group(R).longest
        words = reduced_words(longest)
        samples = checks.class_samples(R, q)
        if len(words) >= 2:
            reports.append(checks.reduced_word_independence(R, words[0], words[-1], samples,
                                                            args.N))
        spec = RepSpec(R, words[0], min(args.N, 8))
        for a in samples[:3]:
            reports.append(checks.star_rep_check(a, spec))
        return _reports(reports)
    if args.rep_cmd == "verify-ssb":
        rep = checks.verify_theorem_ss_b(R, S, args.N, q, args.samples, args.seed)
        return rep.to_json(), rep.passed
    # norms
    rng = np.random.default_rng(args.seed)
    Ns = _int_list(args.Ns) or [args.N]
    tp = checks.torus_samples(R, 2, S=(), seed=args.seed)
    elems = [checks.random_invariant_element(R, S, q, rng) for _ in range(args.count)]
    rep = checks.sup_norm_vs_haar(elems, Ns, tp)
    return rep.to_json(), rep.passed


# -- parser ------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--type", default="A", help="Cartan type (A, B, C, G)")
    common.add_argument("--rank", type=int, default=1)
    common.add_argument("--q", default="1/2", help="deformation parameter p/r in (0, 1)")
    common.add_argument("--S", default="", help="comma separated simple root indices")
    common.add_argument("--Lambda", default=None, help="weight in fundamental coordinates")
    common.add_argument("--degree", type=int, default=2)
    common.add_argument("--N", type=int, default=8, help="truncation levels per factor")
    common.add_argument("--margin", type=int, default=0)
    common.add_argument("--format", choices=["json", "csv", "binary"], default="json")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="qflag", description="Quantum flag manifold verification")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name in ("roots", "weyl", "cells", "poisson", "module", "funalg"):
        sub.add_parser(name, parents=[common])
    flag = sub.add_parser("flag").add_subparsers(dest="flag_cmd", required=True)
    for name in ("verify-algthm", "verify-ss", "a0-proper"):
        flag.add_parser(name, parents=[common])
    rep = sub.add_parser("rep").add_subparsers(dest="rep_cmd", required=True)
    m = rep.add_parser("matrix", parents=[common])
    m.add_argument("--w", default="", help="reduced word, e.g. 1,2,1")
    m.add_argument("--t", default="", help="torus phases: t_i = exp(2 pi i phase_i)")
    m.add_argument("--elem", default=None, help="L-+ (rank one) or c:<lambda>:<u>:<v>")
    rep.add_parser("verify-class", parents=[common])
    s = rep.add_parser("verify-ssb", parents=[common])
    s.add_argument("--samples", type=int, default=8, help="torus points per free coordinate")
    n = rep.add_parser("norms", parents=[common])
    n.add_argument("--Ns", default="16,32", help="truncations to compare")
    n.add_argument("--count", type=int, default=5, help="number of random elements")
    return p


COMMANDS = {"roots": cmd_roots, "weyl": cmd_weyl, "cells": cmd_cells, "poisson": cmd_poisson,
            "module": cmd_module, "funalg": cmd_funalg, "flag": cmd_flag, "rep": cmd_rep}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        if args.N < 1:
            raise ConfigurationError("--N must be positive")
        if args.format == "binary" and getattr(args, "rep_cmd", None) != "matrix":
            raise ConfigurationError("binary output is only available for rep matrix")
        payload, ok = COMMANDS[args.cmd](args)
    except (ConfigurationError, DomainError) as e:
        print(f"qflag: configuration error: {e}", file=sys.stderr)
        return 2
    except InternalError as e:
        print(f"qflag: internal error: {e}", file=sys.stderr)
        return 3
    if isinstance(payload, bytes):
        target = getattr(out, "buffer", out)
        target.write(payload)
        target.flush()
    else:
        _emit(payload, args.format, out)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
