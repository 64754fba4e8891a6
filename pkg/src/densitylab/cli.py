"""Command-line front end: set-spec parsing, density computations, and
smallness certificates, plus a battery of named demos.

Exit codes: 0 success, 1 verification/bound failure, 2 usage error.
Machine output is JSON (or CSV for estimates); --pretty switches to
indented, human-oriented output. Output is assembled fully before printing,
so failures never leave partial reports behind.
"""

import argparse
import json
import sys
from dataclasses import asdict, is_dataclass
from fractions import Fraction

from . import certify as cert_mod
from . import density, estimators, quadform
from . import setspec as ss
from .errors import DensityLabError
from .numtheory import nonresidue_cover, sieve_primes


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return {"numerator": str(obj.numerator), "denominator": str(obj.denominator),
                "float": float(obj)}
    if is_dataclass(obj) and not isinstance(obj, type):
        return _jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_jsonable(v) for v in items]
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)


def _dumps(obj, pretty):
    return json.dumps(_jsonable(obj), indent=2 if pretty else None, sort_keys=True)


def _load_spec(raw, ambient):
    text = raw
    if not raw.lstrip().startswith("{"):
        with open(raw, encoding="utf-8") as fh:
            text = fh.read()
    obj = json.loads(text)
    if ambient:
        obj["ambient"] = ambient
    return ss.spec_from_obj(obj)


def _parse_moduli(raw, budget):
    if raw == "prime-squares":
        return [int(p) * int(p) for p in sieve_primes(budget)]
    return [int(tok) for tok in raw.split(",") if tok.strip()]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="densitylab",
        description="Residue-class density bounds and smallness certificates "
        "for integer sets.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indented output")

    class _Sub(argparse.ArgumentParser):
        def __init__(self, **kwargs):
            kwargs.setdefault("parents", [common])
            super().__init__(**kwargs)

    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Sub)

    p = sub.add_parser("buck", help="upper Buck density bound")
    p.add_argument("--spec", required=True, help="set spec (JSON string or file)")
    p.add_argument("--depth", type=int, default=density.DEFAULT_DEPTH)
    p.add_argument("--moduli", default="", help="extra moduli, comma-separated")
    p.add_argument("--ambient", choices=["N", "Z"], default=None)

    p = sub.add_parser("estimate", help="numeric upper-density estimators")
    p.add_argument("--spec", required=True)
    p.add_argument("--method", choices=["alpha", "banach", "analytic", "polya", "all"],
                   default="all")
    p.add_argument("--window", type=int, default=10**5)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--ambient", choices=["N", "Z"], default=None)

    p = sub.add_parser("certify", help="emit a smallness certificate")
    p.add_argument("--spec", required=True)
    p.add_argument("--moduli", required=True,
                   help="comma-separated moduli, or 'prime-squares'")
    p.add_argument("--budget", type=int, default=10**4,
                   help="prime budget for 'prime-squares'")
    p.add_argument("--epsilon", default="0.01")
    p.add_argument("--output", default=None, help="write the certificate here too")
    p.add_argument("--ambient", choices=["N", "Z"], default=None)

    p = sub.add_parser("verify", help="verify a certificate against a spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--certificate", required=True, help="certificate JSON file")
    p.add_argument("--ambient", choices=["N", "Z"], default=None)

    p = sub.add_parser("classify-form", help="classify a binary quadratic form")
    p.add_argument("--form", required=True, help="a,b,c")
    p.add_argument("--ambient", choices=["N", "Z"], default="N")

    p = sub.add_parser("nonresidue-cover", help="non-residue cover for d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--budget", type=int, default=50, help="verification primes")

    p = sub.add_parser("demo", help="run a named demonstration")
    p.add_argument("name", choices=sorted(DEMOS))

    sub.add_parser("list-demos", help="list demo names")
    return parser


def _cmd_buck(args, out):
    spec = _load_spec(args.spec, args.ambient)
    extra = [int(t) for t in args.moduli.split(",") if t.strip()]
    bound = density.buck_upper(spec, args.depth, extra)
    out.append(_dumps(density.buck_to_obj(bound), args.pretty))
    return 0


def _cmd_estimate(args, out):
    spec = _load_spec(args.spec, args.ambient)
    n = args.window
    results = []
    if args.method in ("alpha", "all"):
        results.append(estimators.alpha_density_upper(spec, args.alpha, n))
    if args.method in ("banach", "all"):
        results.append(estimators.banach_upper(spec, min(600, n), n))
    if args.method in ("analytic", "all"):
        results.append(estimators.analytic_upper(spec, truncation=n))
    if args.method in ("polya", "all"):
        results.append(estimators.polya_upper(spec, n_max=n))
    if args.format == "csv":
        out.append(estimators.estimates_to_csv(results).rstrip("\n"))
    else:
        out.append(_dumps(results, args.pretty))
    return 0


def _cmd_certify(args, out):
    spec = _load_spec(args.spec, args.ambient)
    moduli = _parse_moduli(args.moduli, args.budget)
    cert = cert_mod.smallness_certificate(spec, moduli, Fraction(args.epsilon))
    payload = _dumps(cert_mod.cert_to_obj(cert), args.pretty)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(payload + "\n")
    out.append(payload)
    return 0


def _cmd_verify(args, out):
    spec = _load_spec(args.spec, args.ambient)
    with open(args.certificate, encoding="utf-8") as fh:
        cert = cert_mod.cert_from_obj(fh.read())
    ok, report = cert_mod.verify_certificate(cert, spec)
    out.append(_dumps({"ok": ok, "report": report}, args.pretty))
    return 0 if ok else 1


def _cmd_classify(args, out):
    a, b, c = (int(t) for t in args.form.split(","))
    result = quadform.classify_form(a, b, c, args.ambient)
    out.append(_dumps(result, args.pretty))
    return 0


def _cmd_cover(args, out):
    cover = nonresidue_cover(args.d, args.budget)
    out.append(_dumps(cover, args.pretty))
    return 0


# ---------------------------------------------------------------------------
# Demos: each prints the claim being illustrated and the computed numbers.


def _demo_squares(out):
    out.append("claim: the perfect squares are a small set "
               "(they miss p-1 residue classes mod p^2 for every odd prime p)")
    spec = ss.SetSpec(ss.PolyImage((0, 0, 1)))
    cert = cert_mod.smallness_certificate(
        spec, [p * p for p in sieve_primes(100) if p > 2], Fraction(1)
    )
    out.append("moduli: squares of odd primes up to 100")
    out.append(f"certified product bound: {float(cert.product_bound):.3e}")


def _demo_perfect_powers(out):
    out.append("claim: the perfect powers are a small set")
    spec = ss.SetSpec(ss.PerfectPowers())
    cert = cert_mod.smallness_certificate(
        spec, [p * p for p in sieve_primes(1000)], Fraction(1)
    )
    out.append("moduli: p^2 for primes p <= 1000 (count p^2 - p + 1 each)")
    out.append(f"certified product bound: {float(cert.product_bound):.6f}")


def _demo_digit_avoider(out):
    out.append("claim: integers avoiding a fixed digit block are small; "
               "each extra block multiplies the bound by (b^l - 1)/b^l")
    for n in range(1, 7):
        bound = cert_mod.digit_pattern_bound(10, "9", n)
        out.append(f"blocks n={n}: bound {float(bound):.6f}")
    spec = ss.SetSpec(ss.DigitAvoider(10, (9,)))
    r, exact = ss.hit_count(spec, 100)
    out.append(f"exact residue count mod 100: {r} of 100 (exact={exact})")


def _demo_omega(out):
    out.append("claim: integers with at most k prime factors (with "
               "multiplicity) are small; primorial moduli drive the bound down")
    for n in range(1, 7):
        bound = cert_mod.omega_primorial_bound(1, n)
        out.append(f"first {n} primes: bound {float(bound):.6f}")


def _demo_chain(out):
    out.append("claim: any infinite divisibility chain is small: mod |x_2n| "
               "it occupies at most 2n classes")
    prefix = [2**i for i in range(1, 11)]
    for modulus, bound in cert_mod.chain_bound(prefix):
        out.append(f"modulus {modulus}: at most {bound} classes "
                   f"(ratio {bound / modulus:.6f})")


def _demo_factorial_shift(out):
    out.append("claim: {h! + h} meets every residue class mod every k "
               "(upper Buck density 1) yet is extremely sparse")
    spec = ss.SetSpec(ss.FactorialShift())
    all_full = all(ss.hit_count(spec, k)[0] == k for k in range(1, 841))
    bound = density.buck_upper(spec, 8)
    est = estimators.banach_upper(spec, 100, 10**6)
    out.append(f"r_k = k for all k <= 840: {all_full}")
    out.append(f"Buck upper bound: {bound.upper}")
    out.append(f"Banach window estimate (n=100, B=10^6): {est.value:.4f}")


def _demo_poly_image(out):
    out.append("claim: the image of a polynomial of degree >= 2 is small "
               "(degree 1 gives exact positive density)")
    cert = cert_mod.poly_image_certificate((0, 0, 1), 300, Fraction(1))
    meta = cert.justifications[-1]
    out.append(f"F = x^2, primes <= 300: kept-prime density "
               f"{meta['kept_prime_density']:.3f}")
    out.append(f"certified product bound: {float(cert.product_bound):.3e}")


def _demo_poly_prime_preimage(out):
    out.append("claim: {k : |F(k)| prime} is small for non-constant F; "
               "each root class mod p holds only finitely many members")
    cert = cert_mod.poly_prime_preimage_certificate((0, 1), 1000, Fraction(1))
    out.append(f"F = x (the primes), primes <= 1000: product bound "
               f"{float(cert.product_bound):.6f}")


def _demo_two_squares(out):
    out.append("claim: the sums of two squares have asymptotic density zero "
               "(certificate over p^2 for primes p == 3 mod 4)")
    cert = quadform.form_smallness_certificate(1, 0, 1, 1000, Fraction(1))
    out.append(f"primes used: {len(cert.moduli)}")
    out.append(f"certified product bound: {float(cert.product_bound):.6f}")


def _demo_mixed_form(out):
    out.append("claim: for a form with square discriminant over N, the "
               "asymptotic density vanishes while the Buck density stays positive")
    report = quadform.mixed_case_experiment(1, 3, 2, 10**6)
    out.append(f"Buck lower bound for the witness progression set: "
               f"{report['buck_lower_bound_A']}")
    for chk in report["subap_checks"]:
        out.append(f"k={chk['k']}: residues hit {chk['residues_hit']} >= "
                   f"required {chk['required']}: {chk['ok']}")
    for row in report["table_ratios"]:
        out.append(f"bounded-ratio products up to n={row['n']}: "
                   f"density {row['ratio']:.6f}")
    out.append(f"monotone decline: {report['declining']}")


def _demo_product_of_small(out):
    out.append("claim: smallness is not closed under products: two small "
               "sets can multiply onto all odd numbers (density 1/2)")
    report = quadform.closing_demos()
    out.append(f"all pairwise products odd: {report['products_all_odd']}")
    covered = all(report["odd_cover_by_modulus"].values())
    out.append(f"products cover every odd class mod k <= 30: {covered}")
    out.append(f"odd numbers density: {report['odds_density']}")
    for name, info in sorted(report["smallness"].items()):
        out.append(f"factor set {name}: verdict {info['verdict']} "
                   f"(reciprocal sum {float(info['partial_sum']):.3f})")


def _demo_sum_of_small(out):
    out.append("claim: smallness is not closed under sumsets: the small set "
               "of two-square sums satisfies Q + Q = N")
    report = quadform.closing_demos()
    missing = report["sumset_first_missing"]
    out.append(
        f"first integer in [0, {report['sumset_bound']}] not in Q + Q: "
        + ("none" if missing == -1 else str(missing))
    )


DEMOS = {
    "squares": _demo_squares,
    "perfect-powers": _demo_perfect_powers,
    "digit-avoider": _demo_digit_avoider,
    "omega": _demo_omega,
    "chain": _demo_chain,
    "factorial-shift": _demo_factorial_shift,
    "poly-image": _demo_poly_image,
    "poly-prime-preimage": _demo_poly_prime_preimage,
    "two-squares": _demo_two_squares,
    "mixed-form": _demo_mixed_form,
    "product-of-small": _demo_product_of_small,
    "sum-of-small": _demo_sum_of_small,
}


def _cmd_demo(args, out):
    DEMOS[args.name](out)
    return 0


def _cmd_list_demos(args, out):
    out.extend(sorted(DEMOS))
    return 0


_HANDLERS = {
    "buck": _cmd_buck,
    "estimate": _cmd_estimate,
    "certify": _cmd_certify,
    "verify": _cmd_verify,
    "classify-form": _cmd_classify,
    "nonresidue-cover": _cmd_cover,
    "demo": _cmd_demo,
    "list-demos": _cmd_list_demos,
}


def run(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0,) else 0
    out: list = []
    try:
        code = _HANDLERS[args.verb](args, out)
    except DensityLabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError, json.JSONDecodeError) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    print("\n".join(out))
    return code


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
