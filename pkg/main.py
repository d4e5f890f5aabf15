#!/usr/bin/python
# -*- coding: UTF-8 -*-
# @author:anning
# @email:anningforchina@gmail.com
# @time:2024/11/12 10:05
# @file:main.py
import argparse
import sys

from arith import format_poly_text, is_prime
from certificates import (
    twin_rank_check,
    verify_certificates,
    verify_ff_witness,
    verify_low_order_identities,
)
from conf import Config
from diamond import ProductMatrix, rank_probe
from experiments import (
    ExperimentConfig,
    certify_rank,
    decimation_scan,
    nonprimitive_probe,
    predicted_rank,
    probe_mode,
    probe_radius,
    run_gr_experiment,
)
from integrality import (
    denominator_containment,
    lambda_set,
    laurent_audit,
    theta_chain,
    xi_coprimality_probe,
)
from invariants import (
    builtin_invariant,
    is_invariant,
    kernel_dimension_mod_p,
    omega_box_kernel,
    symmetry_report,
    upsilon_box_basis,
)
from sequences import gale_robinson, master_sequence, somos, write_dump
from utils import (
    DivisionFailure,
    NotDivisible,
    ProbeInconclusive,
    SomosError,
    SpecError,
    TableError,
    UsageError,
    Verdict,
    get_logger,
    setup_logging,
)

logger = get_logger("cli")

OK, FALSIFIED, USAGE = 0, 1, 2


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _int_range(text):
    """lo..hi（含端点）"""
    try:
        lo, hi = (int(v) for v in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo..hi, got {text!r}")
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _order_of(args):
    if args.gr:
        return tuple(args.gr)
    return args.order


def _print_header(command):
    print(f"# somos-lab {command}")
    for key, value in sorted(Config.snapshot().items()):
        print(f"# {key} = {value}")


def _sequence(args):
    """由 --order/--gr、--coeffs、--seed、--unit、--unit-seed、--p 构造序列"""
    if args.p is not None and not is_prime(args.p):
        raise UsageError(f"--p {args.p} is not prime")
    if args.gr:
        n = sum(args.gr)
        k = 3
    else:
        n = args.order
        k = n // 2
    if getattr(args, "master", False):
        return master_sequence(_order_of(args))
    coeffs = args.coeffs
    seed = args.seed
    if args.unit:
        coeffs = coeffs or [1] * k
        seed = [1] * n
    if args.unit_seed:
        seed = [1] * n
    if coeffs is None or seed is None:
        raise UsageError("give --coeffs and --seed, or --unit / --unit-seed")
    if len(coeffs) != k:
        raise UsageError(f"expected {k} coefficients, got {len(coeffs)}")
    if args.gr:
        return gale_robinson(args.gr, coeffs, seed, args.p)
    return somos(coeffs, seed, args.p)


def cmd_gen(args):
    seq = _sequence(args)
    lo, hi = args.range
    seq.extend(lo, hi)
    _print_header("gen")
    lo, hi = max(lo, seq.lo), min(hi, seq.hi)
    sys.stdout.write(write_dump(seq, lo, hi))
    failure = seq.failures["forward"] if seq.hi < args.range[1] else None
    failure = failure or (seq.failures["backward"] if seq.lo > args.range[0] else None)
    if failure is not None:
        logger.error("%s", failure)
        return FALSIFIED
    return OK


def cmd_rank(args):
    seq = _sequence(args)
    n = seq.n
    mode = args.mode or probe_mode(n)
    probe = args.probe or Config.probe_size
    radius = probe_radius(probe, mode)
    window = (args.centre - radius, args.centre + radius)
    seq.require(*window)
    result = rank_probe(ProductMatrix(seq), mode, probe, window=window)
    _print_header("rank")
    print(f"mode = {mode}")
    print(f"window = {window[0]}..{window[1]}")
    print(f"probe = {result.size} ({result.spec})")
    for key, value in sorted(result.class_ranks.items()):
        print(f"class {key} = {value}")
    print(f"rank = {result.rank}")
    if not args.no_certificate:
        certified = certify_rank(seq, result.rank, args.centre, mode)
        print(f"certificate = {'certified' if certified else 'not-certified'}")
    if args.expect is not None and result.rank != args.expect:
        logger.error("measured rank %d, expected %d", result.rank, args.expect)
        return FALSIFIED
    return OK


def cmd_invariants(args):
    order = _order_of(args)
    _print_header("invariants")
    code = OK
    if args.check:
        f = builtin_invariant(args.check)
        verdict = is_invariant(f)
        print(f"{args.check} = {verdict.verdict.value} ({verdict.trials} trials)")
        if verdict.witness:
            print(f"witness = {verdict.witness}")
        if verdict.verdict == Verdict.failed:
            code = FALSIFIED
    if order is None:
        return code
    if args.kernel:
        kernel = omega_box_kernel(order)
        for k, poly in enumerate(kernel):
            print(f"-- basis {k}")
            print(format_poly_text(poly))
    if args.symmetry:
        report = symmetry_report(order)
        print(f"reversal_closed = {report.reversal_closed}")
        print(f"positive = {','.join(map(str, report.positive))}")
    if args.dims or not (args.kernel or args.symmetry):
        upsilon = len(upsilon_box_basis(order))
        if args.mod_p:
            print(f"{upsilon} / <= {kernel_dimension_mod_p(order)} (mod p)")
        else:
            print(f"{upsilon} / {len(omega_box_kernel(order))}")
    return code


def cmd_certify(args):
    n = args.order
    _print_header("certify")
    ok = True
    if n in (6, 7):
        report = verify_certificates(n)
        print(f"primary_residual_terms = {report.primary_residual_terms}")
        print(f"derived_exact = {report.derived_exact}")
        print(f"derived_residual_terms = {report.derived_residual_terms}")
        print(f"verdict = {report.verdict.value}")
        if report.witness:
            print(f"witness = {report.witness}")
        ok = report.verdict == Verdict.passed
    elif n in (4, 5):
        report = verify_low_order_identities()
        for order, terms in sorted(report.residual_terms.items()):
            print(f"residual {order} = {terms}")
        print(f"verdict = {report.verdict.value}")
        ok = report.verdict == Verdict.passed
    else:
        raise UsageError(f"certificates cover orders 4 to 7, got {n}")
    if args.witness:
        w = verify_ff_witness(n)
        print(f"witness_p = {w.p}")
        print(f"witness_polynomial = {','.join(map(str, w.polynomial))}")
        for option in w.options:
            print(
                f"option seed={','.join(map(str, option.seed))} periods={option.period_s},{option.period_t} "
                f"minors={option.minors_nonzero}/{option.minors_checked} "
                f"mu_zero={'-' if option.mu_zero is None else option.mu_zero}"
            )
        print(f"witness_verdict = {w.verdict.value}")
        ok = ok and w.verdict == Verdict.passed
    if args.twin_rank:
        if n not in (6, 7):
            raise UsageError("twin rank checks cover orders 6 and 7")
        t = twin_rank_check(n, trials=args.twin_rank)
        print(f"twin_p = {t.p} twin_pairs = {t.pairs} vanishing = {t.vanishing} verdict = {t.verdict.value}")
        ok = ok and t.verdict == Verdict.passed
    return OK if ok else FALSIFIED


def cmd_laurent(args):
    order = _order_of(args)
    lo, hi = args.range if args.range else (None, None)
    report = laurent_audit(order, lo, hi)
    _print_header("laurent")
    print(report.table())
    print(f"verdict = {report.verdict.value}")
    code = OK
    if isinstance(order, int) and (args.theta or args.xi or args.containment):
        print(f"lambda = {','.join(lambda_set(order))}")
        if args.theta:
            for k, theta in enumerate(theta_chain(order)):
                print(f"theta({k}) = {','.join(theta)}")
        if args.xi:
            xi = xi_coprimality_probe(order)
            for m in xi.minors:
                print(f"minor {m.spec}: degree {m.degree}, {m.summands} summands")
            print(f"xi = {xi.verdict.value}")
        if args.containment:
            c = denominator_containment(order)
            print(f"theta_base = {','.join(c.theta_base)}")
            print(f"theta_k = {','.join(c.theta_k)}")
            print(f"contained = {c.contained}")
            if not c.contained:
                code = FALSIFIED
    return code


def cmd_experiment(args):
    _print_header("experiment")
    if args.predict:
        pred = predicted_rank(args.predict)
        print(f"predicted = {pred.rank} ({pred.kind})")
        return OK
    if args.nonprimitive:
        report = nonprimitive_probe(args.nonprimitive, probe_size=args.probe)
        print(f"prime = {report.prime}")
        print(f"probe = {report.probe_size}")
        print(f"rank = {report.rank}")
        print(f"default_rank = {report.default_rank}")
        print(f"full_rank = {report.full_rank}")
        return OK
    if not args.gr:
        raise UsageError("experiment needs --gr, --predict or --nonprimitive")
    cfg = ExperimentConfig(
        gr_type=tuple(args.gr),
        trials=args.trials,
        probe_size=args.probe,
        seed=args.seed,
        certify=args.certify,
        workers=args.workers,
    )
    report = run_gr_experiment(cfg)
    if args.json:
        print(report.model_dump_json(indent=2))
    else:
        print("\n".join(report.lines()))
    return OK


def cmd_decimate(args):
    seq = _sequence(args)
    seq.require(0, args.length)
    d_lo, d_hi = args.d
    n_lo, n_hi = args.n
    rows = decimation_scan(seq, range(d_lo, d_hi + 1), range(n_lo, n_hi + 1))
    _print_header("decimate")
    for row in rows:
        vector = ",".join(map(str, row.vector)) if row.vector else "-"
        print(f"d={row.d} n={row.n} dims={','.join(map(str, row.dims))} shared={row.shared} vector={vector}")
    return OK


def _add_sequence_args(p, master=False):
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--order", type=int, help="Somos order n")
    which.add_argument("--gr", type=_int_list, help="Gale-Robinson type n1,n2,n3")
    p.add_argument("--coeffs", type=_int_list, help="coefficients a1,...")
    p.add_argument("--seed", type=_int_list, help="initial terms s0,...,s_{n-1}")
    p.add_argument("--unit", action="store_true", help="unit coefficients and unit seed")
    p.add_argument("--unit-seed", action="store_true", help="unit seed with the given coefficients")
    p.add_argument("--p", type=int, help="work over F_p")
    if master:
        p.add_argument("--master", action="store_true", help="symbolic master sequence")


def build_parser():
    parser = argparse.ArgumentParser(prog="somos-lab", description="Somos and Gale-Robinson sequence laboratory")
    parser.add_argument("--config", help="key=value override file for conf.Config")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a sequence dump")
    _add_sequence_args(p, master=True)
    p.add_argument("--range", type=_int_range, required=True, help="lo..hi")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("rank", help="probe the diamond or half-diamond rank")
    _add_sequence_args(p)
    p.add_argument("--probe", type=int, help="probe size")
    p.add_argument("--mode", choices=("diamond", "half"))
    p.add_argument("--centre", type=int, default=0)
    p.add_argument("--expect", type=int, help="exit 1 unless the measured rank equals this")
    p.add_argument("--no-certificate", action="store_true", help="skip the contiguous-minor certificate")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("invariants", help="invariant spaces and bundled invariants")
    which = p.add_mutually_exclusive_group()
    which.add_argument("--order", type=int)
    which.add_argument("--gr", type=_int_list)
    p.add_argument("--dims", action="store_true", help="print dim Upsilon_box / dim Omega_box")
    p.add_argument("--mod-p", action="store_true", help="modular upper bound on dim Omega_box instead of the exact kernel")
    p.add_argument("--kernel", action="store_true", help="print a kernel basis")
    p.add_argument("--symmetry", action="store_true", help="reversal and positivity report")
    p.add_argument("--check", help="check a bundled invariant, e.g. F6")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("certify", help="verify certificate identities")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--witness", action="store_true", help="also verify the finite-field witness")
    p.add_argument("--twin-rank", type=int, metavar="TRIALS", help="random twin pairs to check")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("laurent", help="Laurent audit of the master sequence")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--order", type=int)
    which.add_argument("--gr", type=_int_list)
    p.add_argument("--range", type=_int_range, help="lo..hi")
    p.add_argument("--theta", action="store_true", help="print the denominator chain")
    p.add_argument("--xi", action="store_true", help="run the coprimality probe")
    p.add_argument("--containment", action="store_true", help="check denominator containment")
    p.set_defaults(func=cmd_laurent)

    p = sub.add_parser("experiment", help="randomised Gale-Robinson rank experiment")
    p.add_argument("--gr", type=_int_list)
    p.add_argument("--trials", type=int)
    p.add_argument("--probe", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--certify", action="store_true")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--predict", type=_int_list, help="only print the predicted rank of a type")
    p.add_argument("--nonprimitive", type=_int_list, help="full-rank probe of a non-primitive type")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("decimate", help="nonstrict orders of decimations")
    _add_sequence_args(p)
    p.add_argument("--length", type=int, default=90, help="realise s_0..s_length")
    p.add_argument("--d", type=_int_range, default=(1, 3), help="factors lo..hi")
    p.add_argument("--n", type=_int_range, default=(8, 9), help="orders lo..hi")
    p.set_defaults(func=cmd_decimate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        if args.config:
            Config.load(args.config)
        return args.func(args)
    except (UsageError, SpecError, TableError, KeyError, ValueError) as e:
        logger.error("%s", e)
        return USAGE
    except (DivisionFailure, NotDivisible, ProbeInconclusive) as e:
        logger.error("%s", e)
        return FALSIFIED
    except SomosError as e:
        logger.error("%s", e)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
