"""Batch front door: load families, run the pipeline and the oracle side by
side, fuzz random families, and emit deterministic reports.

Reports are plain dicts rendered as JSON or indented text; for a fixed
configuration (including the seed) the emitted bytes are identical across
runs.  Exit status is 0 exactly when no asserted property failed; findings
(such as the literal-universe empty Q_S) are recorded without failing.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import oracle
from .construction import (
    DEFAULT_PRODUCT_CAP,
    Family,
    U2Variant,
    build_Fc,
    build_Fc_literal,
    build_QS,
    phi3_holds,
    run_pipeline,
    theorem4_order_from_choice,
)
from .errors import CapExceeded, EmptyFamily, ParseError, ZfLabError
from .hfs import (
    DEFAULT_POWERSET_CAP,
    hfs_literal,
    iter_hfs_by_rank,
    make_set,
    parse_hfs,
)
from .intervals import (
    Interval,
    choice_value,
    parse_interval,
    phi2_holds,
    pol_compare,
    sample_check_pol,
)
from .orders import OrderKind, enumerate_orders

__all__ = ["RunConfig", "execute", "load_family", "main"]

_KINDS = {k.value: k for k in OrderKind}
_VARIANTS = {v.value: v for v in U2Variant}


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's output."""

    command: str
    family: Optional[str] = None
    kind: str = "wellorder"
    u2: str = "union"
    seed: int = 0
    trials: int = 100
    allow_empty: bool = False
    out: Optional[str] = None
    format: str = "json"
    powerset_cap: int = DEFAULT_POWERSET_CAP
    product_cap: int = DEFAULT_PRODUCT_CAP
    literals: tuple = ()


def load_family(path: str) -> Family:
    """Read a family file: ``{"family": ["{{}}", ...]}`` with set literals."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: {e}") from None
    if not isinstance(data, dict) or not isinstance(data.get("family"), list):
        raise ParseError(f'{path}: expected a top-level {{"family": [...]}} object')
    members = []
    for entry in data["family"]:
        if not isinstance(entry, str):
            raise ParseError(f"{path}: family entries must be set literals")
        members.append(parse_hfs(entry))
    if not members:
        raise EmptyFamily(f"{path}: the family list is empty")
    return Family.of(members)


def _resolve_caps(env: Optional[str], powerset_flag: Optional[int],
                  product_flag: Optional[int]) -> tuple:
    powerset_cap = DEFAULT_POWERSET_CAP
    product_cap = DEFAULT_PRODUCT_CAP
    if env:
        parts = env.split(",")
        if len(parts) != 2:
            raise ParseError(f"ZFLAB_CAPS must be 'powerset,product', got {env!r}")
        if parts[0].strip():
            powerset_cap = int(parts[0])
        if parts[1].strip():
            product_cap = int(parts[1])
    if powerset_flag is not None:
        powerset_cap = powerset_flag
    if product_flag is not None:
        product_cap = product_flag
    return powerset_cap, product_cap


def _config_dict(cfg: RunConfig) -> dict:
    return {
        "command": cfg.command,
        "family": cfg.family,
        "kind": cfg.kind,
        "u2": cfg.u2,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "allow_empty": cfg.allow_empty,
        "powerset_cap": cfg.powerset_cap,
        "product_cap": cfg.product_cap,
    }


def _verify(cfg: RunConfig, report: dict, findings: list, failures: list) -> None:
    family = load_family(cfg.family)
    kind = _KINDS[cfg.kind]
    variant = _VARIANTS[cfg.u2]
    warnings = []
    if family.has_empty_member:
        warnings.append("family contains the empty set")
    report["warnings"] = warnings

    pipeline = run_pipeline(family, variant, kind, cfg.powerset_cap, cfg.product_cap)
    report["pipeline"] = pipeline.to_dict()
    verdict = oracle.verify_equivalence(family)
    report["equivalence"] = {
        "fingerprint": verdict.fingerprint,
        "has_choice": verdict.has_choice,
        "all_members_have_pol": verdict.all_members_have_pol,
        "agree": verdict.agree,
    }
    if not verdict.agree:
        failures.append("choice existence and per-member orderability disagree")

    checks = {}
    fcs = build_Fc(family, variant, kind, cfg.powerset_cap, cfg.product_cap)
    if variant is U2Variant.UNION_OF_PRODUCTS:
        expected = oracle.enumerate_choice_functions(family, cap=cfg.product_cap)
        match = tuple(cf.graph for cf in fcs) == expected
        checks["oracle_fc_match"] = match
        if not match:
            failures.append("pipeline choice functions differ from the oracle")
    if pipeline.q_s_empty and variant is U2Variant.LITERAL:
        findings.append(
            "literal U2 yields empty Q_S (expected for multi-member families)"
        )

    k = len(family.members) * len(family.union)
    if k <= 16:
        direct = build_Fc_literal(family, variant, kind, max(cfg.powerset_cap, k),
                                  cfg.product_cap)
        agree = [cf.graph for cf in direct] == [cf.graph for cf in fcs]
        checks["route_agreement"] = agree
        if not agree:
            failures.append("subset-filter route disagrees with the closed route")
    else:
        checks["route_agreement"] = None

    roundtrip = all(
        phi3_holds(theorem4_order_from_choice(a, cf), a, cf)
        for cf in fcs
        for a in family
    )
    checks["induced_order_roundtrip"] = roundtrip
    if not roundtrip:
        failures.append("choice-induced order failed its defining condition")
    report["cross_checks"] = checks


def _enumerate(cfg: RunConfig, report: dict, findings: list, failures: list) -> None:
    family = load_family(cfg.family)
    kind = _KINDS[cfg.kind]
    variant = _VARIANTS[cfg.u2]
    members = []
    for a in family:
        orders = enumerate_orders(a, kind)
        members.append({
            "member": hfs_literal(a),
            "order_count": len(orders),
            "orders": [hfs_literal(r.pairs) for r in orders],
        })
    report["members"] = members
    qs = build_QS(family, variant, kind, cfg.powerset_cap, cfg.product_cap)
    fcs = build_Fc(family, variant, kind, cfg.powerset_cap, cfg.product_cap)
    report["q_s"] = {
        "size": len(qs),
        "relations": [hfs_literal(q) for q in qs.children],
    }
    report["f_c"] = {
        "size": len(fcs),
        "graphs": [hfs_literal(cf.graph) for cf in fcs],
    }
    report["oracle_choice_functions"] = [
        hfs_literal(g)
        for g in oracle.enumerate_choice_functions(family, cap=cfg.product_cap)
    ]


def _random_family(rng: random.Random, universe: tuple, allow_empty: bool) -> Family:
    members = []
    for _ in range(rng.randint(1, 3)):
        low = 0 if allow_empty else 1
        size = rng.randint(low, 3)
        members.append(make_set(rng.sample(universe, size)))
    return Family.of(members)


def _fuzz(cfg: RunConfig, report: dict, findings: list, failures: list) -> None:
    rng = random.Random(cfg.seed)
    universe = iter_hfs_by_rank(2)
    kind = _KINDS[cfg.kind]
    checked = 0
    skipped = 0
    with_empty = 0
    samples = []
    for trial in range(cfg.trials):
        family = _random_family(rng, universe, cfg.allow_empty)
        literal = hfs_literal(family.members)
        if trial < 5:
            samples.append(literal)
        if family.has_empty_member:
            with_empty += 1
        verdict = oracle.verify_equivalence(family)
        if not verdict.agree:
            failures.append(f"trial {trial}: equivalence disagreement on {literal}")
            continue
        try:
            fcs = build_Fc(family, U2Variant.UNION_OF_PRODUCTS, kind,
                           cfg.powerset_cap, cfg.product_cap)
            expected = oracle.enumerate_choice_functions(family, cap=cfg.product_cap)
        except CapExceeded:
            skipped += 1
            continue
        if tuple(cf.graph for cf in fcs) != expected:
            failures.append(f"trial {trial}: choice mismatch on {literal}")
            continue
        if not all(
            phi3_holds(theorem4_order_from_choice(a, cf), a, cf)
            for cf in fcs
            for a in family
        ):
            failures.append(f"trial {trial}: induced order failed on {literal}")
            continue
        checked += 1
    if skipped:
        findings.append(f"{skipped} trials skipped at the configured caps")
    report["fuzz"] = {
        "trials": cfg.trials,
        "checked": checked,
        "skipped_by_cap": skipped,
        "families_with_empty_member": with_empty,
        "sample_families": samples,
    }


def _random_interval(rng: random.Random) -> Interval:
    def endpoint() -> Fraction:
        return Fraction(rng.randint(-20, 20), rng.randint(1, 8))

    shape = rng.randrange(4)
    if shape == 0:
        return Interval(None, None, False, False)
    if shape == 1:
        return Interval(None, endpoint(), False, rng.random() < 0.5)
    if shape == 2:
        return Interval(endpoint(), None, rng.random() < 0.5, False)
    lo, hi = sorted((endpoint(), endpoint()))
    if lo == hi:
        return Interval(lo, hi, True, True)
    return Interval(lo, hi, rng.random() < 0.5, rng.random() < 0.5)


def _random_sample(rng: random.Random, interval: Interval) -> list:
    base = choice_value(interval)
    sample = []
    for _ in range(rng.randint(0, 8)):
        offset = Fraction(rng.randint(-24, 24), rng.randint(1, 6))
        if interval.contains(base + offset):
            sample.append(base + offset)
    return sample


def _intervals(cfg: RunConfig, report: dict, findings: list, failures: list) -> None:
    demo = []
    for text in ("[1,3]", "(-inf,5]", "(0,+inf)", "(-inf,+inf)"):
        interval = parse_interval(text)
        value = choice_value(interval)
        demo.append({
            "interval": str(interval),
            "choice_value": str(value),
            "satisfies_condition": phi2_holds(interval, value),
        })
    report["demo"] = demo

    named = []
    for text in cfg.literals:
        interval = parse_interval(text)
        value = choice_value(interval)
        entry = {
            "interval": str(interval),
            "choice_value": str(value),
            "satisfies_condition": phi2_holds(interval, value),
        }
        if not entry["satisfies_condition"]:
            failures.append(f"{interval}: chosen point fails its condition")
        named.append(entry)
    if named:
        report["intervals"] = named

    rng = random.Random(cfg.seed)
    passed = 0
    for trial in range(cfg.trials):
        interval = _random_interval(rng)
        sample = _random_sample(rng, interval)
        props = sample_check_pol(interval, sample)
        ok = (props.reflexive and props.antisymmetric and props.transitive
              and props.total and props.least == choice_value(interval))
        if ok:
            passed += 1
        else:
            failures.append(
                f"trial {trial}: distance order broke on {interval} sample {sample}"
            )
    report["sample_checks"] = {"trials": cfg.trials, "passed": passed}


_COMMANDS = {
    "verify": _verify,
    "enumerate": _enumerate,
    "fuzz": _fuzz,
    "intervals": _intervals,
}


def execute(cfg: RunConfig) -> tuple:
    """Run one command; return (exit status, rendered report)."""
    report = {"command": cfg.command, "config": _config_dict(cfg)}
    findings: list = []
    failures: list = []
    status = 0
    try:
        _COMMANDS[cfg.command](cfg, report, findings, failures)
    except ZfLabError as e:
        report["error"] = {"type": type(e).__name__, "message": str(e)}
        status = 2
    except OSError as e:
        report["error"] = {"type": "IoError", "message": str(e)}
        status = 2
    report["findings"] = findings
    report["failures"] = failures
    report["ok"] = status == 0 and not failures
    if failures and status == 0:
        status = 1
    return status, _render(report, cfg.format)


def _render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    return "\n".join(_text_lines(report, 0)) + "\n"


def _text_lines(value, depth: int) -> list:
    pad = "  " * depth
    lines = []
    if isinstance(value, dict):
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines.extend(_text_lines(item, depth + 1))
            else:
                lines.append(f"{pad}{key}: {_scalar(item)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}-")
                lines.extend(_text_lines(item, depth + 1))
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (dict, list)):
        return "empty"
    return str(value)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zflab",
        description="finite set-theory workbench: choice-function pipelines over "
                    "hereditarily finite sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run the pipeline and the oracle side by side"),
        ("enumerate", "dump orders, combined relations, and choice functions"),
        ("fuzz", "run seeded random families through every invariant"),
        ("intervals", "rational-interval choice demo and sample checks"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--family", help="path to a family file")
        cmd.add_argument("--kind", choices=sorted(_KINDS), default="wellorder")
        cmd.add_argument("--u2", choices=sorted(_VARIANTS), default="union")
        cmd.add_argument("--seed", type=int, default=0)
        cmd.add_argument("--trials", type=int, default=100)
        cmd.add_argument("--allow-empty", action="store_true")
        cmd.add_argument("--out", help="write the report here instead of stdout")
        cmd.add_argument("--format", choices=("json", "text"), default="json")
        cmd.add_argument("--powerset-cap", type=int)
        cmd.add_argument("--product-cap", type=int)
        if name == "intervals":
            cmd.add_argument("literals", nargs="*",
                             help="interval literals such as [1,3] or (0,+inf)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command in ("verify", "enumerate") and not args.family:
        print("error: --family is required for this command", file=sys.stderr)
        return 2
    try:
        powerset_cap, product_cap = _resolve_caps(
            os.environ.get("ZFLAB_CAPS"), args.powerset_cap, args.product_cap
        )
    except (ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    cfg = RunConfig(
        command=args.command,
        family=args.family,
        kind=args.kind,
        u2=args.u2,
        seed=args.seed,
        trials=args.trials,
        allow_empty=args.allow_empty,
        out=args.out,
        format=args.format,
        powerset_cap=powerset_cap,
        product_cap=product_cap,
        literals=tuple(getattr(args, "literals", ())),
    )
    status, rendered = execute(cfg)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(rendered)
    else:
        sys.stdout.write(rendered)
    return status


if __name__ == "__main__":
    sys.exit(main())
