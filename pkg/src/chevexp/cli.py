"""Command line entry point: ``chevexp <subcommand> [options]``.

Every subcommand prints one JSON document (or an aligned table) carrying a
top-level ``"schema": 1``. Exit codes: 0 pass, 1 falsification or failed
certificate, 2 usage error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
import warnings
from fractions import Fraction

from .exactnum import GF, QQ, is_prime
from .linalg import scalar_json

SCHEMA = 1


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument helpers


def _threads():
    value = os.environ.get("CHEVEXP_THREADS")
    if value is None:
        return
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"CHEVEXP_THREADS must be an integer, got {value!r}") from None
    if n < 1:
        raise UsageError("CHEVEXP_THREADS must be at least 1")
    import flint

    flint.ctx.threads = n


def _algebra(args, required=True):
    from .chevalley import algebra

    label = args.type or getattr(args, "type_pos", None)
    if not label:
        if required:
            raise UsageError("a root system is required: pass --type (e.g. --type G2)")
        return None
    try:
        return algebra(label, args.rank)
    except (ValueError, KeyError, IndexError) as exc:
        raise UsageError(f"unknown root system {label!r}{'' if args.rank is None else f' rank {args.rank}'}: {exc}") from None


def _prime(args, required=True):
    if args.p is None:
        if required:
            raise UsageError("a prime is required: pass --p")
        return None
    if not is_prime(args.p):
        raise UsageError(f"--p must be prime, got {args.p}")
    return args.p


def _field(args):
    p = _prime(args)
    try:
        return GF(p, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _scalar(token: str, ring):
    token = token.strip()
    try:
        if ":" in token:
            if ring is QQ:
                raise UsageError(f"extension-field scalar {token!r} over the rationals")
            return ring.from_coeffs([int(t) for t in token.split(":")])
        return ring(Fraction(token))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read scalar {token!r}: {exc}") from None


def _element(alg, spec, ring, rng):
    """"regular", "random", a full coordinate list, or a sum like "2*e(1,0)+f(0,1)"."""
    from .chevalley import AlgebraElement
    from .springer import random_u_element, regular_nilpotent

    spec = (spec or "regular").strip()
    if spec == "regular":
        return regular_nilpotent(alg, ring)
    if spec == "random":
        return random_u_element(alg, ring, rng)
    if "(" in spec or spec.startswith("h"):
        coords = [ring.zero] * alg.dim
        index = {label: i for i, label in enumerate(alg.labels)}
        for term in spec.replace(" ", "").replace("-", "+-").split("+"):
            if not term:
                continue
            coeff, _, label = term.rpartition("*")
            if label.startswith("-"):
                coeff, label = coeff + "-1", label[1:]
            if label not in index:
                raise UsageError(f"unknown basis label {label!r}; labels look like {alg.labels[alg.rank]}")
            c = _scalar(coeff, ring) if coeff not in ("", "-1") else ring(-1 if coeff == "-1" else 1)
            coords[index[label]] = coords[index[label]] + c
        return AlgebraElement(alg, coords, ring)
    tokens = spec.split(",")
    if len(tokens) != alg.dim:
        raise UsageError(f"{alg.name} has dimension {alg.dim}; got {len(tokens)} coordinates")
    return AlgebraElement(alg, [_scalar(t, ring) for t in tokens], ring)


# ---------------------------------------------------------------------------
# subcommands; each returns (payload, ok)


def cmd_rootdata(args):
    """Exponents, Coxeter number and bad primes of a root system."""
    from .rootdata import bad_primes, coxeter_number, facts, is_good_prime, weyl_exponents

    alg = _algebra(args)
    rs = alg.rs
    t = facts(rs)
    exps = weyl_exponents(rs)
    out = {
        "type": rs.name,
        "rank": rs.rank,
        "exponents": list(exps),
        "coxeter_number": coxeter_number(rs),
        "bad_primes": sorted(bad_primes(rs)),
        "positive_roots": len(rs.positive_roots),
        "table_match": list(exps) == list(t.exponents) and coxeter_number(rs) == t.coxeter_number,
    }
    out["sum_exponents_equals_positive_roots"] = sum(exps) == len(rs.positive_roots)
    out["max_exponent_is_h_minus_1"] = max(exps) == out["coxeter_number"] - 1
    if args.p is not None:
        out["p"] = _prime(args)
        out["good"] = is_good_prime(rs, args.p)
    ok = out["table_match"] and out["sum_exponents_equals_positive_roots"] and out["max_exponent_is_h_minus_1"]
    return out, ok


def cmd_structconsts(args):
    """Structure constants N(a, b) of the Chevalley basis."""
    from .chevalley import structure_constant_rows

    alg = _algebra(args)
    return {"type": alg.name, "constants": structure_constant_rows(alg)}, True


def cmd_gram(args):
    """Trace-form Gram matrix of the representation, with nondegeneracy mod p."""
    from .splitting import gram_determinant, gram_matrix, is_nondegenerate_mod_p

    alg = _algebra(args)
    out = {
        "type": alg.name,
        "representation": alg.rep,
        "gram": [[scalar_json(Fraction(v)) for v in row] for row in gram_matrix(alg)],
        "determinant": str(gram_determinant(alg)),
    }
    if args.p is not None:
        out["p"] = _prime(args)
        out["nondegenerate_mod_p"] = is_nondegenerate_mod_p(alg, args.p)
    return out, True


def cmd_project(args):
    """Project a power of the represented element back into the Lie algebra."""
    from .chevalley import rep_matrix
    from .splitting import project_g, project_m

    alg = _algebra(args)
    p = _prime(args, required=False)
    ring = QQ if p is None else GF(p, args.k)
    x = _element(alg, args.element, ring, random.Random(args.seed))
    d = args.max_degree or 2
    M = rep_matrix(x) ** d
    g_part = project_g(M, alg, p)
    m_part = project_m(M, alg, p)
    ok = rep_matrix(g_part) + m_part == M
    return {
        "type": alg.name,
        "element": x.to_json(),
        "power": d,
        "matrix": M.to_json(),
        "g_component": g_part.to_json(),
        "m_component": m_part.to_json(),
        "recombines": ok,
    }, ok


def cmd_mpower(args):
    """Iterate the characteristic-zero p-power map with integrality certificates."""
    from .ppower import m_power

    alg = _algebra(args)
    p = _prime(args, required=False)
    x = _element(alg, args.element, QQ, random.Random(args.seed))
    top = args.max_degree or (p or 2)
    powers = []
    for i in range(1, top + 1):
        y = m_power(x, i)
        entry = {"i": i, "value": y.to_json()}
        if p is not None:
            from .exactnum import certify_p_integral

            entry["certificate"] = certify_p_integral(y.coords, p).to_json()
        powers.append(entry)
    ok = all(e.get("certificate", {"ok": True})["ok"] for e in powers)
    return {"type": alg.name, "element": x.to_json(), "powers": powers}, ok


def _theorem_a_cases(alg, p, element, seed, samples):
    from .ppower import theorem_a_scan
    from .springer import random_u_element, regular_nilpotent

    rng = random.Random(seed)
    if element:
        xs = [_element(alg, element, QQ, rng)]
    else:
        xs = [regular_nilpotent(alg)] + [random_u_element(alg, QQ, rng) for _ in range(samples)]
    cases, failures = [], []
    for n, x in enumerate(xs):
        try:
            r = theorem_a_scan(alg, p, x)
            cases.append({"case": n, "vanishing_index": r.vanishing_index, "bound": r.bound, "ok": r.ok})
            if not r.ok:
                failures.append({"case": n, "element": x.to_json()})
        except AssertionError as exc:
            failures.append({"case": n, "element": x.to_json(), "reason": str(exc)})
    return cases, failures


def cmd_theorem_a(args):
    """Check integrality and vanishing of the p-power iterates on the nilradical."""
    from .chevalley import SplittingUnavailable

    alg = _algebra(args)
    p = _prime(args)
    try:
        cases, failures = _theorem_a_cases(alg, p, args.element, args.seed, args.samples)
    except SplittingUnavailable as exc:
        raise UsageError(str(exc)) from None
    return {"type": alg.name, "p": p, "cases": cases, "failures": failures}, not failures


def cmd_ah_coeffs(args):
    """Truncated Artin-Hasse coefficients and their p-adic valuations."""
    from .artinhasse import ah_coefficients

    p = _prime(args)
    N = args.max_degree if args.max_degree is not None else 20
    if not 0 <= N <= 10**4:
        raise UsageError("--max-degree must lie in 0..10000")
    s = ah_coefficients(p, N)
    cert = s.certificate()
    return {
        "p": p,
        "N": N,
        "coefficients": [scalar_json(c) for c in s.coefficients],
        "valuations": [s.valuation(j) for j in range(N + 1)],
        "certificate": cert.to_json(),
    }, bool(cert)


def cmd_gexp(args):
    """The exponential map through both constructions, compared mod p."""
    from .artinhasse import gexp_tilde, psi_path
    from .chevalley import SplittingUnavailable

    alg = _algebra(args)
    F = _field(args)
    x = _element(alg, args.element, F, random.Random(args.seed))
    try:
        main = gexp_tilde(x)
    except (SplittingUnavailable, ValueError) as exc:
        raise UsageError(str(exc)) from None
    out = {"type": alg.name, "field": repr(F), "exp": main.to_json()}
    ok = bool(main.certificate)
    try:
        other = psi_path(x)
    except (SplittingUnavailable, ValueError) as exc:
        out["psi"] = {"skipped": str(exc)}
    else:
        out["psi"] = other.to_json()
        out["paths_agree"] = other.modp_result == main.modp_result
        ok = ok and out["paths_agree"]
    out["result"] = main.modp_result.to_json()
    return out, ok


def _witt_vector(text, F, m):
    from .witt import WittVector

    parts = text.split(",")
    if len(parts) != m:
        raise UsageError(f"Witt vector {text!r} must have {m} components")
    return WittVector(F, [_scalar(t, F) for t in parts])


def cmd_witt(args):
    """Witt addition law, sums, and the Witt embedding at the regular nilpotent."""
    from .springer import gexp_family, nilpotent_order, regular_nilpotent
    from .witt import verify_witt_embedding, witt_addition_law

    F = _field(args)
    alg = _algebra(args, required=False)
    m = args.max_degree
    if m is None:
        m = nilpotent_order(regular_nilpotent(alg, F)) if alg else 2
    if not 1 <= m <= 4:
        raise UsageError("Witt vector length (--max-degree) must lie in 1..4")
    law = witt_addition_law(F.p, m)
    out = {"p": F.p, "field": repr(F), "length": m, "addition_law": law.as_strings()}
    ok = True
    if args.add:
        a, b = (_witt_vector(t, F, m) for t in args.add)
        out["sum"] = {"a": a.to_json(), "b": b.to_json(), "a+b": (a + b).to_json()}
    if alg is not None:
        phi = gexp_family(alg, F)
        rep = verify_witt_embedding(phi, phi.regular, F, pairs=None if F.degree == 1 else 200, seed=args.seed)
        out["type"] = alg.name
        out["embedding"] = rep.to_json()
        ok = rep.ok
    return out, ok


def cmd_pgl2(args):
    """Closed formulas for PGL2 in characteristic 2 and the Frobenius witness."""
    from . import pgl2char2 as P

    k = args.k
    if not 1 <= k <= 2:
        raise UsageError("point tables are produced for k = 1 or 2")
    F = GF(2, k)
    els = F.elements()
    sl2 = list(P.sl2_points(F))
    points = list(P.pgl2_points(F))
    image = {tuple(P.ad_matrix_sl2(g).entries()) for g in sl2}
    solutions = {tuple(Q.entries()) for Q in points}
    checks = {
        "image_equals_solution_set": image == solutions,
        "ad_matches_conjugation": all(P.ad_matrix_sl2(g) == P.conjugation_matrix(g) for g in sl2),
        "ad_inverse_round_trip": all(P.ad_matrix_sl2(P.ad_inverse(Q)) == Q for Q in points),
        "characteristic_polynomial_matches": all(
            P.characteristic_polynomial(Q) == P.displayed_characteristic_polynomial(Q) for Q in points
        ),
        "unipotent_equations_match_nilpotency": all(
            P.unipotent_membership(Q) == ((Q - P.Matrix.identity(F, 3)) ** 3).is_zero() for Q in points
        ),
        "ad_matches_commutators": all(
            P.ad_sl2(X) == P.ad_by_commutators(X)
            for a, b, c in itertools.product(els, repeat=3)
            for X in [P.Matrix.from_rows(F, [[a, b], [c, a]])]
        ),
        "phibar_round_trips": all(P.phibar_inv(P.phibar(x, y)) == (x, y) for x in els for y in els)
        and all(P.phibar(*P.phibar_inv(Q)) == Q for Q in points if P.unipotent_membership(Q)),
        "phibar_matches_lift": all(P.phibar(x, y) == P.phibar_by_lifting(x, y) for x in els for y in els),
    }
    witness = P.frobenius_descent_witness()
    out = {
        "field": repr(F),
        "formulas": P.formulas_json(),
        "points": [
            {
                "coordinates": [c.to_json() for c in P.coordinates(Q)],
                "ad_inverse": P.ad_inverse(Q).to_json(),
                "unipotent": P.unipotent_membership(Q),
            }
            for Q in points
        ],
        "nilpotents": [
            {"x": x.to_json(), "y": y.to_json(), "phibar": P.phibar(x, y).to_json()} for x in els for y in els
        ],
        "checks": checks,
        "witness": witness.to_json(),
    }
    return out, all(checks.values()) and witness.to_json()["ok"]


# ---------------------------------------------------------------------------
# verify


def _is_d_exceptional(alg, p):
    """Type D_{p^n + 1}."""
    if alg.rs.type_label != "D":
        return False
    q = alg.rank - 1
    while q % p == 0:
        q //= p
    return q == 1 and alg.rank - 1 > 1


def _family_params(m, F, limit=5):
    """Valid parameter tuples: a_0 in F_p^x, middle entries in F_p, the last from F."""
    p = F.p
    if m == 1:
        yield from ((a,) for a in F.nonzero_elements()[:limit])
        return
    tail = F.elements()[:limit]
    for head in itertools.product(range(1, p), *([range(p)] * (m - 2))):
        for a in tail:
            yield tuple(F(h) for h in head) + (a,)


def suite_equivariance(alg, F, args):
    from .springer import equivariance_suite, gexp_family

    return equivariance_suite(gexp_family(alg, F), alg, F, samples=args.samples, seed=args.seed).to_json()


def suite_witt(alg, F, args):
    from .chevalley import p_power
    from .springer import Report, gexp_family, random_u_element
    from .witt import verify_witt_embedding

    phi = gexp_family(alg, F)
    emb = verify_witt_embedding(phi, phi.regular, F, pairs=None if F.degree == 1 else 200, seed=args.seed)
    rep = Report("witt")
    rng = random.Random(args.seed)
    for s in range(max(args.samples, 50)):
        x = random_u_element(alg, F, rng)
        rep.cases += 1
        if phi(p_power(x)) != phi(x) ** F.p:
            rep.fail({"sample": s, "x": x.to_json()})
    rep.details["embedding"] = emb.to_json()
    if not emb.ok:
        rep.fail({"reason": "Witt embedding check failed"})
    return rep.to_json()


def suite_canonical(alg, F, args):
    from .springer import Report, canonical_witt_check, gexp_family

    phi = gexp_family(alg, F)
    rep = Report("canonical")
    comparisons = []
    if _is_d_exceptional(alg, F.p):
        rep.details["excluded_type"] = True
        for b in [F.one] + ([F.gen()] if F.degree > 1 else []):
            psi = gexp_family(alg, F, b=b)
            r = canonical_witt_check(phi, psi)
            rep.cases += r.cases
            comparisons.append({"b": b.to_json(), **r.details})
        rep.details["inequality_witnessed"] = any(not c["equal"] for c in comparisons)
    else:
        for params in _family_params(phi.m, F):
            psi = gexp_family(alg, F, params)
            r = canonical_witt_check(phi, psi)
            rep.cases += r.cases
            comparisons.append({"params": [a.to_json() for a in psi.params], **r.details})
            if not r.details["equal"]:
                rep.fail({"params": [a.to_json() for a in psi.params]})
    rep.details["comparisons"] = comparisons
    return rep.to_json()


def suite_centralizer(alg, F, args):
    from .springer import centralizer_decomposition_check, gexp_family

    if alg.rs.type_label != "A":
        raise UsageError("the centralizer suite runs on type A only")
    return centralizer_decomposition_check(gexp_family(alg, F)).to_json()


def suite_family(alg, F, args):
    from .chevalley import p_power
    from .springer import Report, gexp_family, random_u_element

    rng = random.Random(args.seed)
    rep = Report("family")
    members = []
    m = gexp_family(alg, F).m
    xs = [random_u_element(alg, F, rng) for _ in range(args.samples)]
    for params in _family_params(m, F):
        psi = gexp_family(alg, F, params)
        bad = 0
        for x in xs:
            rep.cases += 1
            if psi(p_power(x)) != psi(x) ** F.p:
                bad += 1
                rep.fail({"params": [a.to_json() for a in params], "x": x.to_json()})
        members.append({"params": [a.to_json() for a in psi.params], "relation_failures": bad})
    rep.details["members"] = members
    if F.degree > 1 and m >= 2:
        outside = [F.zero] * m
        outside[0] = F.gen()
        loose = gexp_family(alg, F, outside, strict=False)
        rep.details["constraint_witness"] = {
            "params": [a.to_json() for a in loose.params],
            "domain_problems": loose.domain_problems(),
            "relation_holds": loose.relation_holds,
        }
        last = [F.one] + [F.zero] * (m - 2) + [F.gen()]
        free = gexp_family(alg, F, last, strict=False)
        rep.details["free_last_parameter"] = {
            "params": [a.to_json() for a in free.params],
            "relation_holds": free.relation_holds,
        }
        if loose.relation_holds:
            rep.fail({"reason": "a parameter outside the prime field kept the relation"})
    if _is_d_exceptional(alg, F.p):
        extra = {}
        for label, b in (("b=0", F.zero), ("b=1", F.one)):
            psi = gexp_family(alg, F, b=b, strict=False)
            extra[label] = {"relation_holds": psi.relation_holds, "domain_problems": psi.domain_problems()}
        rep.details["extra_parameter"] = extra
    return rep.to_json()


def suite_theorem_a(alg, F, args):
    cases, failures = _theorem_a_cases(alg, F.p, args.element, args.seed, args.samples)
    return {"suite": "theorem-a", "cases": len(cases), "failures": failures, "ok": not failures, "runs": cases}


SUITES = {
    "equivariance": suite_equivariance,
    "witt": suite_witt,
    "canonical": suite_canonical,
    "centralizer": suite_centralizer,
    "family": suite_family,
    "theorem-a": suite_theorem_a,
}


def cmd_verify(args):
    """Run a verification suite; exit 1 on any falsification."""
    from .chevalley import SplittingUnavailable

    if not args.suite:
        raise UsageError(f"--suite is required; choose from {', '.join(SUITES)}")
    alg = _algebra(args)
    F = _field(args)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = SUITES[args.suite](alg, F, args)
    except SplittingUnavailable as exc:
        raise UsageError(str(exc)) from None
    return {"type": alg.name, "field": repr(F), **report}, report["ok"]


COMMANDS = {
    "rootdata": cmd_rootdata,
    "structconsts": cmd_structconsts,
    "gram": cmd_gram,
    "project": cmd_project,
    "mpower": cmd_mpower,
    "theorem-a": cmd_theorem_a,
    "ah-coeffs": cmd_ah_coeffs,
    "gexp": cmd_gexp,
    "witt": cmd_witt,
    "verify": cmd_verify,
    "pgl2": cmd_pgl2,
}


# ---------------------------------------------------------------------------
# output


def _default(obj):
    if isinstance(obj, Fraction):
        return scalar_json(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        for i, v in enumerate(value):
            _flatten(f"{prefix}[{i}]", v, out)
    else:
        out.append((prefix, json.dumps(value, default=_default, ensure_ascii=False)))


def render(payload, fmt):
    if fmt == "json":
        return json.dumps(payload, indent=2, default=_default, ensure_ascii=False)
    rows = []
    _flatten("", payload, rows)
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k.ljust(width)}  {v}" for k, v in rows)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("type_pos", nargs="?", metavar="TYPE", help="root system, e.g. G2 (same as --type)")
    common.add_argument("--type", help="root system label such as A3, G2 or E8")
    common.add_argument("--rank", type=int, help="rank when --type is a bare letter")
    common.add_argument("--p", type=int, help="prime")
    common.add_argument("--k", type=int, default=1, help="extension degree of the finite field (default 1)")
    common.add_argument("--element", help='"regular", "random", a coordinate list, or a sum like "e(1,0)+2*e(0,1)"')
    common.add_argument("--seed", type=int, default=0, help="seed for randomized cases")
    common.add_argument("--samples", type=int, default=20, help="random samples per suite")
    common.add_argument("--suite", choices=sorted(SUITES), help="verification suite")
    common.add_argument("--format", choices=["json", "table"], default="json")
    common.add_argument("--max-degree", type=int, help="truncation degree, matrix power or Witt length")
    common.add_argument("--add", nargs=2, metavar=("A", "B"), help="two Witt vectors to add, e.g. 1,0 1,0")

    parser = argparse.ArgumentParser(prog="chevexp", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=COMMANDS[name].__doc__, description=COMMANDS[name].__doc__)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads()
        payload, ok = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        # ValueError covers out-of-domain inputs such as a degenerate trace form
        print(f"chevexp {args.command}: {exc}", file=sys.stderr)
        return 2
    except AssertionError as exc:
        print(json.dumps({"schema": SCHEMA, "command": args.command, "ok": False, "error": str(exc)}, indent=2))
        return 1
    print(render({"schema": SCHEMA, "command": args.command, "ok": bool(ok), **payload}, args.format))
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
