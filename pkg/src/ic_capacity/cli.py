"""Command-line front end.

Verbs:
  classify  regime classification and certified capacity for a Gaussian spec
  bound     evaluate/maximize an outer-bound expression for a channel spec
  verify    run the numerical verification suites (seeded, self-contained)
  sweep     grid sweeps over Gaussian channel parameters, CSV output

Channel specs are JSON: {"kind": "gaussian", "gains": [[...]], "powers": [...]}
or {"kind": "discrete", "input_cards": [...], "output_cards": [...],
"transition": [...]} with the transition flattened row-major, inputs outer,
outputs inner.  Gains use the a_ji convention (row = receiver, column =
transmitter) and parameters are named 1-based (a12, P1) on the command line.

Exit codes: 0 success, 1 input error, 2 no certified regime, 3 verification
violation.  IC_CAPACITY_THREADS overrides the sweep worker count.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import oracle
from .discrete import (
    DiscreteIC,
    SearchConfig,
    bsc_kernel,
    build_degraded_chain,
    chain_less_noisy_spec,
    falsify_condition,
    many_to_one_condition_spec,
    many_to_one_ic,
    maximize_expression,
)
from .expressions import (
    canonical_decode_order,
    grouped_chain_expression,
    per_user_chain_expression,
    receiver_groups_expression,
)
from .gaussian import (
    GaussianIC,
    classify_three_user,
    gaussian_cmi,
    heuristic_outer_bounds,
    mixed_regime_two_user,
    normalize,
    proportional_degradation_report,
    rank_one_degraded_check,
    regime_matched_outer,
    successive_decoding_sum_rate,
    theorem_bound_gaussian,
)
from .joints import csiszar_korner_residual, random_joint
from .reports import NO_REGIME, RANK_ONE_DEGRADED, ConditionCheck, RegimeReport

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_REGIME = 2
EXIT_VIOLATION = 3


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 10_000
    restarts: int = 64
    q_card: int | None = None
    tolerance: float = 1e-9
    json_path: str | None = None
    csv_path: str | None = None

    def __post_init__(self):
        if self.samples < 1 or self.restarts < 1:
            raise SpecError("samples and restarts must be >= 1")
        if self.q_card is not None and self.q_card < 1:
            raise SpecError("q-card must be >= 1")
        if self.tolerance <= 0:
            raise SpecError("tolerance must be positive")


def worker_count() -> int:
    env = os.environ.get("IC_CAPACITY_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise SpecError(f"IC_CAPACITY_THREADS={env!r} is not an integer") from exc
        if n < 1:
            raise SpecError("IC_CAPACITY_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Channel spec I/O
# ---------------------------------------------------------------------------


def load_channel_spec(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError as exc:
        raise SpecError(f"spec file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict) or "kind" not in raw:
        raise SpecError(f"{path}: top level must be an object with a 'kind' field")
    kind = raw["kind"]
    if kind == "gaussian":
        for field in ("gains", "powers"):
            if field not in raw:
                raise SpecError(f"{path}: gaussian spec is missing field '{field}'")
        try:
            return GaussianIC(np.array(raw["gains"], dtype=float), np.array(raw["powers"], dtype=float))
        except ValueError as exc:
            raise SpecError(f"{path}: {exc}") from exc
    if kind == "discrete":
        for field in ("input_cards", "output_cards", "transition"):
            if field not in raw:
                raise SpecError(f"{path}: discrete spec is missing field '{field}'")
        in_cards = tuple(int(c) for c in raw["input_cards"])
        out_cards = tuple(int(c) for c in raw["output_cards"])
        flat = np.array(raw["transition"], dtype=float).ravel()
        expected = int(np.prod(in_cards + out_cards, dtype=np.int64))
        if flat.size != expected:
            raise SpecError(
                f"{path}: field 'transition' has {flat.size} entries, expected {expected} "
                f"(inputs outer, outputs inner, row-major)"
            )
        t = flat.reshape(in_cards + out_cards)
        rows = t.reshape(int(np.prod(in_cards, dtype=np.int64)), -1)
        dev = float(np.abs(rows.sum(axis=1) - 1.0).max())
        if dev > 1e-9:
            raise SpecError(f"{path}: transition rows deviate from 1 by {dev:.2e} (> 1e-9)")
        if dev > 1e-12:
            print(f"warning: {path}: renormalizing transition rows (deviation {dev:.2e})", file=sys.stderr)
            t = t / rows.sum(axis=1).reshape(in_cards + (1,) * len(out_cards))
        try:
            return DiscreteIC(in_cards, out_cards, t)
        except ValueError as exc:
            raise SpecError(f"{path}: {exc}") from exc
    raise SpecError(f"{path}: unknown channel kind {kind!r}")


def save_channel_spec(channel, path: str) -> None:
    if isinstance(channel, GaussianIC):
        raw = {"kind": "gaussian", "gains": channel.gains.tolist(), "powers": channel.powers.tolist()}
    elif isinstance(channel, DiscreteIC):
        raw = {
            "kind": "discrete",
            "input_cards": list(channel.input_cards),
            "output_cards": list(channel.output_cards),
            "transition": channel.transition.ravel().tolist(),
        }
    else:
        raise SpecError(f"cannot serialize {type(channel).__name__}")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(raw, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _write_json(payload: dict, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------


def _print_report(report: RegimeReport) -> None:
    print(f"{report.regime} conditions:")
    for cond in report.conditions:
        status = "PASS" if cond.holds else "FAIL"
        print(f"  [{status}] {cond.cond_id}  margin={cond.margin:+.6e}")


def cmd_classify(args) -> int:
    cfg = _config(args)
    channel = load_channel_spec(args.spec)
    if not isinstance(channel, GaussianIC):
        raise SpecError("classify requires a gaussian channel spec")
    channel = normalize(channel)
    k = channel.num_users
    print(f"channel: gaussian, K={k} (normalized, unit direct gains)")

    reports: list[RegimeReport] = []
    if k == 3:
        reports.append(classify_three_user(channel))
    if k == 2:
        reports.append(mixed_regime_two_user(channel))
    reports.append(proportional_degradation_report(channel))
    rank_one = rank_one_degraded_check(channel)
    singular = np.linalg.svd(channel.gains, compute_uv=False)
    rank_margin = float(1e-9 * singular[0] - singular[1])
    reports.append(
        RegimeReport(
            RANK_ONE_DEGRADED,
            (ConditionCheck("gain_matrix_rank_one", rank_one, rank_margin),),
        )
    )

    for report in reports:
        _print_report(report)

    certified = next((r for r in reports if r.certified_capacity is not None), None)
    matched = certified or next((r for r in reports if r.all_hold), None)

    inner = successive_decoding_sum_rate(channel, canonical_decode_order(k))
    outer_regime = regime_matched_outer(channel)
    outers = heuristic_outer_bounds(channel)
    payload = {
        "reports": [r.to_json() for r in reports],
        "certified": certified.to_json() if certified else None,
        "successive_decoding_canonical": inner,
        "regime_matched_outer": outer_regime,
        "outer_bounds": [b.to_json() for b in outers],
    }
    _write_json(payload, cfg.json_path)

    if certified is not None:
        print(f"{certified.regime}: certified, C_sum = {certified.certified_capacity:.6f} bits")
        print(f"successive decoding (canonical order): {inner:.6f} bits")
        return EXIT_OK
    if matched is not None:
        print(f"{matched.regime}: conditions hold, no closed-form capacity attached")
        print(f"heuristic successive decoding (canonical order): {inner:.6f} bits")
        return EXIT_OK
    print("no certified regime; heuristic values (bounds valid only under their conditions):")
    print(f"  successive decoding (canonical order): {inner:.6f} bits")
    print(f"  regime-matched outer expression: {outer_regime:.6f} bits")
    for bound in outers:
        print(f"  outer {bound.expression_id}: {bound.value:.6f} bits")
    return EXIT_NO_REGIME


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def _parse_perm_cuts(args, k: int):
    if args.perm is None or args.cuts is None:
        raise SpecError("--theorem 3 requires --perm and --cuts")
    try:
        perm = tuple(int(p) - 1 for p in args.perm.split(","))
        cuts = tuple(int(c) for c in args.cuts.split(","))
    except ValueError as exc:
        raise SpecError(f"bad --perm/--cuts: {exc}") from exc
    return perm, cuts


def _parse_groups(args):
    if args.groups is None:
        raise SpecError("--theorem 4 requires --groups (e.g. '1,2|3')")
    try:
        return tuple(tuple(int(i) - 1 for i in part.split(",")) for part in args.groups.split("|"))
    except ValueError as exc:
        raise SpecError(f"bad --groups: {exc}") from exc


def cmd_bound(args) -> int:
    cfg = _config(args)
    channel = load_channel_spec(args.spec)
    k = channel.num_users
    try:
        if args.theorem == 1:
            expr = per_user_chain_expression(k)
        elif args.theorem == 3:
            perm, cuts = _parse_perm_cuts(args, k)
            expr = grouped_chain_expression(k, perm, cuts)
        else:
            expr = receiver_groups_expression(k, _parse_groups(args))
    except ValueError as exc:
        raise SpecError(str(exc)) from exc

    if isinstance(channel, GaussianIC):
        result = theorem_bound_gaussian(channel, expr)
        argmax_note = "independent full-power Gaussian inputs, degenerate Q"
    else:
        search = SearchConfig(restarts=cfg.restarts, tol=cfg.tolerance, q_card=cfg.q_card)
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed))
        result = maximize_expression(channel, expr, search, rng)
        argmax_note = json.dumps(result.argmax.to_json(), sort_keys=True)
    print(f"expression: {result.expression_id}")
    print(f"value: {result.value:.6f} bits")
    print(f"certified: {result.certified}")
    print(f"argmax: {argmax_note}")
    _write_json(result.to_json(), cfg.json_path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _suite_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _garbled_pair_channel() -> DiscreteIC:
    """Two-user binary channel whose second output is a flipped copy of the first."""
    front = np.zeros((2, 2, 2))
    for x1 in range(2):
        for x2 in range(2):
            front[x1, x2, x1 ^ x2] = 1.0
    return build_degraded_chain((2, 2), front, [bsc_kernel(0.1)])


def _verify_ck(seed: int, ns, joints: int):
    rng = _suite_rng(seed, 0)
    checks = []
    for n in ns:
        worst = 0.0
        for _ in range(joints):
            cards = [int(rng.integers(2, 4))]  # W
            names = ["W"]
            for t in range(1, n + 1):
                names.append(f"Ya{t}")
                cards.append(int(rng.integers(2, 4)))
            for t in range(1, n + 1):
                names.append(f"Yb{t}")
                cards.append(int(rng.integers(2, 4)))
            dist = random_joint(cards, rng, names)
            worst = max(worst, abs(csiszar_korner_residual(dist, n)))
        checks.append((f"ck:n={n}", worst < 1e-10, worst, f"max |residual| over {joints} joints"))
    return checks


def _verify_gaussian_degradation(seed: int, systems: int):
    rng = _suite_rng(seed, 1)
    worst = 0.0
    for _ in range(systems):
        total = int(rng.integers(2, 6))
        split = int(rng.integers(1, total + 1))
        b = rng.normal(size=total)
        alpha = float(rng.uniform(-1.0, 1.0))
        a = np.concatenate([alpha * b[:split], rng.normal(size=total - split)])
        system = oracle.GaussianSystem(a, b, split)
        worst = max(worst, oracle.degradation_equivalence_check(system, alpha))
    return [("gaussian-degradation", worst <= 1e-12, worst, f"max residual over {systems} systems")]


def _verify_conditioning(seed: int, samples: int, adversarial: bool):
    rng = _suite_rng(seed, 2)
    channel = _garbled_pair_channel()
    specs = {
        "conditioning:set": oracle.side_conditioned_set_spec(channel, (0, 1), (), worse=1, better=0),
        "conditioning:subset": oracle.side_conditioned_subset_spec(
            channel, (0, 1), (), omega=(1,), worse=1, better=0
        ),
        "conditioning:aux": oracle.side_conditioned_aux_spec(channel, (), worse=1, better=0),
    }
    checks = []
    for name, spec in specs.items():
        if adversarial:
            spec = spec.reversed()
        hit = oracle.conditioning_preservation_check(channel, spec, samples, rng)
        if adversarial:
            ok = False if hit is not None else True
            detail = (
                f"reversed direction: counterexample {hit.inequality_id} margin={hit.margin:.3e}"
                if hit
                else "reversed direction: no counterexample found"
            )
            checks.append((f"{name}:reversed", ok, hit.margin if hit else 0.0, detail))
        else:
            checks.append(
                (
                    name,
                    hit is None,
                    0.0 if hit is None else hit.margin,
                    f"{samples} samples" if hit is None else f"violation {hit.inequality_id}",
                )
            )
    return checks


def _verify_nletter(seed: int, codes: int, adversarial: bool):
    rng = _suite_rng(seed, 3)
    channel = _garbled_pair_channel()
    receivers = (0, 1) if adversarial else (1, 0)
    worst = -math.inf
    for _ in range(codes):
        sizes = [int(rng.integers(1, 5)), int(rng.integers(1, 5))]
        code = oracle.RandomCode.random((2, 2), 2, sizes, rng)
        resid = oracle.nletter_inequality_check(channel, code, omega1=(1,), omega2=(), receivers=receivers)
        worst = max(worst, resid)
    name = "nletter:reversed" if adversarial else "nletter"
    detail = f"max residual over {codes} codes" + (" (reversed receivers)" if adversarial else "")
    return [(name, worst <= 1e-9, worst, detail)]


def _verify_sign_equivalence(seed: int, draws: int):
    rng = _suite_rng(seed, 4)
    bad = 0
    for _ in range(draws):
        a12 = float(rng.uniform(0.0, 2.0))
        a21 = float(rng.uniform(0.0, 2.0))
        p = rng.uniform(0.05, 3.0, size=3)
        gains = np.eye(3)
        gains[0, 1] = a12
        gains[1, 0] = a21
        channel = GaussianIC(gains, p)
        own = gaussian_cmi(channel, (1,), (2,), 1)
        cross = gaussian_cmi(channel, (1,), (2,), 0)
        predicate = p[0] + 1.0 >= a12**2 * (a21**2 * p[0] + 1.0)
        if (own >= cross) != predicate and abs(own - cross) > 1e-9:
            bad += 1
    return [("sign-equivalence", bad == 0, float(bad), f"{draws} random parameter draws")]


def _verify_falsify(seed: int, samples: int, adversarial: bool):
    rng = _suite_rng(seed, 5)
    chain = _garbled_pair_channel()
    spec = chain_less_noisy_spec(chain)
    if adversarial:
        spec = spec.reversed()
    hit = falsify_condition(chain, spec, samples, rng)
    name = "falsify:chain" + (":reversed" if adversarial else "")
    checks = [
        (
            name,
            hit is None,
            0.0 if hit is None else hit.margin,
            f"{samples} samples" if hit is None else f"violation {hit.inequality_id}",
        )
    ]
    m2o = many_to_one_ic([bsc_kernel(0.1)], np.broadcast_to(np.eye(2)[None, :, :], (2, 2, 2)))
    spec2 = many_to_one_condition_spec(m2o)
    if adversarial:
        spec2 = spec2.reversed()
    hit2 = falsify_condition(m2o, spec2, samples, rng)
    name2 = "falsify:many-to-one" + (":reversed" if adversarial else "")
    checks.append(
        (
            name2,
            hit2 is None,
            0.0 if hit2 is None else hit2.margin,
            f"{samples} samples" if hit2 is None else f"violation {hit2.inequality_id}",
        )
    )
    return checks


SUITES = ("ck", "gaussian-degradation", "conditioning", "nletter", "sign-equivalence", "falsify")


def cmd_verify(args) -> int:
    cfg = _config(args)
    suites = SUITES if args.suite == "all" else (args.suite,)
    ns = (args.n,) if args.n else (1, 2, 3, 4)
    checks = []
    if "ck" in suites:
        checks += _verify_ck(cfg.seed, ns, joints=100)
    if "gaussian-degradation" in suites:
        checks += _verify_gaussian_degradation(cfg.seed, systems=1000)
    if "conditioning" in suites:
        checks += _verify_conditioning(cfg.seed, cfg.samples, args.adversarial)
    if "nletter" in suites:
        checks += _verify_nletter(cfg.seed, codes=100, adversarial=args.adversarial)
    if "sign-equivalence" in suites:
        checks += _verify_sign_equivalence(cfg.seed, cfg.samples)
    if "falsify" in suites:
        checks += _verify_falsify(cfg.seed, cfg.samples, args.adversarial)

    passed = 0
    for name, ok, value, detail in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}  value={value:.6e}  ({detail})")
        passed += ok
    print(f"{passed}/{len(checks)} checks passed")
    payload = {
        "seed": cfg.seed,
        "checks": [
            {"id": name, "passed": bool(ok), "value": float(value), "detail": detail}
            for name, ok, value, detail in checks
        ],
    }
    _write_json(payload, cfg.json_path)
    return EXIT_OK if passed == len(checks) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _apply_param(gains: np.ndarray, powers: np.ndarray, name: str, value: float):
    if len(name) == 3 and name[0] == "a" and name[1:].isdigit():
        j, i = int(name[1]) - 1, int(name[2]) - 1
        if not (0 <= j < gains.shape[0] and 0 <= i < gains.shape[0]):
            raise SpecError(f"parameter {name} is out of range for K={gains.shape[0]}")
        gains[j, i] = value
        return
    if len(name) == 2 and name[0] in "Pp" and name[1].isdigit():
        i = int(name[1]) - 1
        if not 0 <= i < powers.size:
            raise SpecError(f"parameter {name} is out of range for K={powers.size}")
        powers[i] = value
        return
    raise SpecError(f"unknown sweep parameter {name!r} (use a<rx><tx> or P<user>, 1-based)")


def _sweep_point(channel: GaussianIC, names, values):
    gains = channel.gains.copy()
    powers = channel.powers.copy()
    for name, value in zip(names, values):
        _apply_param(gains, powers, name, value)
    point = normalize(GaussianIC(gains, powers))
    k = point.num_users
    if k == 3:
        report = classify_three_user(point)
    elif k == 2:
        report = mixed_regime_two_user(point)
    else:
        report = proportional_degradation_report(point)
    inner = successive_decoding_sum_rate(point, canonical_decode_order(k))
    outer = regime_matched_outer(point)
    return report, inner, outer


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def cmd_sweep(args) -> int:
    cfg = _config(args)
    channel = load_channel_spec(args.spec)
    if not isinstance(channel, GaussianIC):
        raise SpecError("sweep requires a gaussian channel spec")
    if not args.param:
        raise SpecError("at least one --param NAME MIN MAX STEPS is required")
    names, axes = [], []
    for name, lo, hi, steps in args.param:
        try:
            lo, hi, steps = float(lo), float(hi), int(steps)
        except ValueError as exc:
            raise SpecError(f"bad --param {name}: {exc}") from exc
        if steps < 1:
            raise SpecError(f"--param {name}: steps must be >= 1")
        names.append(name)
        axes.append(np.linspace(lo, hi, steps) if steps > 1 else np.array([lo]))
    # validate parameter names up front
    _apply_param(channel.gains.copy(), channel.powers.copy(), names[0], float(axes[0][0]))
    for name in names[1:]:
        _apply_param(channel.gains.copy(), channel.powers.copy(), name, 0.0)

    grid = list(itertools.product(*axes))
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(lambda vals: _sweep_point(channel, names, vals), grid))

    cond_ids = [c.cond_id for c in results[0][0].conditions]
    header = names + ["regime"] + [f"margin:{cid}" for cid in cond_ids]
    header += ["certified_capacity", "inner_successive", "outer_regime_expr"]
    lines = [",".join(header)]
    for values, (report, inner, outer) in zip(grid, results):
        row = [_fmt(v) for v in values]
        row.append(report.regime if report.all_hold else NO_REGIME)
        row += [_fmt(c.margin) for c in report.conditions]
        row.append(_fmt(report.certified_capacity) if report.certified_capacity is not None else "")
        row += [_fmt(inner), _fmt(outer)]
        lines.append(",".join(row))
    text = "\n".join(lines) + "\n"
    if cfg.csv_path:
        with open(cfg.csv_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; keep 1 for input errors
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INPUT)


def _config(args) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        samples=args.samples,
        restarts=args.restarts,
        q_card=args.q_card,
        tolerance=args.tol,
        json_path=args.json,
        csv_path=getattr(args, "csv", None),
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ic-capacity", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, *, spec_required=True):
        if spec_required:
            p.add_argument("--spec", required=True, help="channel spec JSON path")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=10_000)
        p.add_argument("--restarts", type=int, default=64)
        p.add_argument("--q-card", dest="q_card", type=int, default=None)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--json", default=None, help="write a JSON report here")

    p = sub.add_parser("classify", help="regime classification for a Gaussian spec")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("bound", help="evaluate or maximize an outer-bound expression")
    common(p)
    p.add_argument("--theorem", type=int, choices=(1, 3, 4), required=True)
    p.add_argument("--perm", default=None, help="1-based permutation, e.g. 2,1,3")
    p.add_argument("--cuts", default=None, help="1-based cut points ending at K, e.g. 2,3")
    p.add_argument("--groups", default=None, help="1-based receiver groups, e.g. 1,2|3")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="run the numerical verification suites")
    common(p, spec_required=False)
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--n", type=int, default=None, help="restrict the ck suite to one blocklength")
    p.add_argument("--adversarial", action="store_true", help="flip inequality directions; a reported counterexample demonstrates sampler power")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="grid sweep over Gaussian channel parameters")
    common(p)
    p.add_argument(
        "--param",
        nargs=4,
        action="append",
        metavar=("NAME", "MIN", "MAX", "STEPS"),
        help="sweep parameter, repeatable; NAME like a21 or P1 (1-based)",
    )
    p.add_argument("--csv", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
