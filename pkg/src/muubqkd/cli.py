"""Command-line front end: ``python -m muubqkd <subcommand> [options]``.

Data goes to stdout or ``--out``; diagnostics go to stderr. Exit status is
0 on success, 1 on a domain or configuration error and 2 on a usage error.

Every subcommand accepts ``--config FILE`` with ``key = value`` lines
(keys are option names without the leading dashes); explicit flags win
over the file, which wins over the built-in defaults.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .attack import (
    AttackParams,
    bob_eve_states,
    build_ancillas,
    gram_from_states,
    lambda_closed,
)
from .entropy import binary_entropy, von_neumann_entropy
from .errors import ConfigError, DomainError
from .protocol import NoiseSpec, SessionConfig, simulate_block, n_blocks, summarize, RoundLog
from .qstate import I2, Y, muub_overlap, ry
from .security import (
    QAB_MAX,
    Q_MAX,
    classify_point,
    dominance_margin,
    ie_curve,
    keyrate_grid,
    qab_bound,
    threshold_area,
)


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_attack(text: str) -> AttackParams:
    """``Q,cos_x,cos_y``; an empty ``cos_x`` selects the symmetric attack."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"--attack expects Q,cosx,cosy, got {text!r}")
    try:
        q = float(parts[0])
        cos_y = float(parts[2])
        if parts[1] == "":
            return AttackParams.symmetric(q, cos_y)
        return AttackParams.from_cosines(q, float(parts[1]), cos_y)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise ConfigError(f"bad --attack value {text!r}") from None


def parse_bases(text: str) -> tuple:
    try:
        return tuple(float(b) for b in text.split(","))
    except ValueError:
        raise ConfigError(f"bad --bases value {text!r}") from None


# -- subcommands -------------------------------------------------------------------
# Each returns (data text, resolved parameters).


def cmd_muub_check(args):
    values = [muub_overlap(u, ry(z)) for u in (I2, Y) for z in (math.pi / 2, -math.pi / 2)]
    out = {
        "pairs": len(values),
        "constant": round(float(np.mean(values)), 12),
        "max_deviation": float(max(abs(v - 2.0) for v in values)),
        "identity_overlap": muub_overlap(I2, I2),
        "params": {},
    }
    return _json(out), {}


def cmd_ie_curve(args):
    params = {"protocol": args.protocol, "steps": args.steps}
    return _csv(("q", "i_e"), ie_curve(args.protocol, args.steps)), params


def cmd_keyrate_grid(args):
    params = {
        "protocol": args.protocol,
        "q_cells": args.q_cells,
        "qab_cells": args.qab_cells,
        "per_raw_pulse": args.per_raw_pulse,
    }
    grid = keyrate_grid(args.protocol, args.q_cells, args.qab_cells, args.per_raw_pulse)
    rows = ((p.q, p.q_ab, p.i_e, p.rate) for p in grid.points())
    return _csv(("q", "q_ab", "i_e", "rate"), rows), params


def cmd_threshold_area(args):
    params = {"protocol": args.protocol, "resolution": args.resolution}
    area = threshold_area(args.protocol, args.resolution)
    return _json({**params, "area": area}), params


def cmd_qab_bound(args):
    return _json({"bound": qab_bound(), "params": {}}), {}


def cmd_gram_eigs(args):
    if args.cos_x is None:
        attack = AttackParams.symmetric(args.Q, args.cos_y)
    else:
        attack = AttackParams.from_cosines(args.Q, args.cos_x, args.cos_y)
    params = {"Q": args.Q, "cos_x": attack.cos_x, "cos_y": attack.cos_y}
    spec = lambda_closed(attack.alpha)
    gram = gram_from_states(bob_eve_states(build_ancillas(attack)))
    numeric = np.linalg.eigvalsh(gram)
    out = {
        "alpha": spec.alpha,
        "lambda_plus": spec.lambda_plus,
        "lambda_minus": spec.lambda_minus,
        "entropy": von_neumann_entropy(gram),
        "i_e": binary_entropy(2 * spec.lambda_minus),
        "closed_vs_numeric_delta": float(np.max(np.abs(np.sort(spec.eigenvalues) - numeric))),
        "params": params,
    }
    return _json(out), params


def _clip(v: float, hi: float) -> float:
    return min(max(v, 0.0), hi)


def cmd_simulate(args):
    attack = parse_attack(args.attack) if args.attack else None
    config = SessionConfig(
        n_pulses=args.pulses,
        control_prob=args.control_prob,
        bases=parse_bases(args.bases),
        noise_forward=NoiseSpec.parse(args.noise_fwd),
        noise_backward=NoiseSpec.parse(args.noise_bwd),
        attack=attack,
        seed=args.seed,
        protocol=args.protocol,
        cm_random_basis=args.cm_random_basis,
        normalize_by_total=args.normalize_by_total,
    )
    params = {
        "pulses": config.n_pulses,
        "control_prob": config.control_prob,
        "bases": list(config.bases),
        "noise_fwd": str(config.noise_forward),
        "noise_bwd": str(config.noise_backward),
        "attack": None if attack is None else {"Q": attack.Q, "cos_x": attack.cos_x, "cos_y": attack.cos_y},
        "protocol": config.protocol,
        "seed": config.seed,
        "cm_random_basis": config.cm_random_basis,
        "normalize_by_total": config.normalize_by_total,
    }
    logs = [simulate_block(config, k) for k in range(n_blocks(config))]
    stats = None
    for log in logs:
        s = summarize(log, config)
        stats = s if stats is None else stats + s
    if args.log:
        with open(args.log, "w", newline="") as fh:
            fh.write(RoundLog.concatenate(logs).to_csv())
    # sampling noise can push estimates past the analysed range
    q_used = _clip(stats.q_hat, Q_MAX)
    qab_used = _clip(stats.q_ab_hat, QAB_MAX)
    rate, region = classify_point(config.protocol, q_used, qab_used)
    out = {
        "params": params,
        "stats": stats.to_dict(),
        "classification": {
            "q": q_used,
            "q_ab": qab_used,
            "clamped": (q_used, qab_used) != (stats.q_hat, stats.q_ab_hat),
            "rate": rate,
            "region": region,
        },
    }
    return _json(out), params


def cmd_compare(args):
    params = {"resolution": args.resolution, "grid_cells": args.grid_cells}
    muub2 = threshold_area("muub2", args.resolution)
    lm05 = threshold_area("lm05", args.resolution)
    margin = dominance_margin(args.grid_cells, args.grid_cells)
    out = {
        "muub2_area": muub2,
        "lm05_area": lm05,
        "area_ratio": muub2 / lm05,
        "dominance": {"holds": margin >= 0.0, "min_margin": margin},
        "params": params,
    }
    return _json(out), params


# -- parser --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write data here instead of stdout")
    common.add_argument("--config", help="key = value defaults file")
    common.add_argument("--manifest", help="write a JSON run manifest here")

    parser = argparse.ArgumentParser(prog="muubqkd", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    def add(name, func, help):
        p = sub.add_parser(name, parents=[common], help=help, description=help)
        p.set_defaults(func=func)
        return p

    protocol = dict(choices=("muub2", "lm05"), default="muub2")

    add("muub-check", cmd_muub_check, "verify the MUUB overlap constant")

    p = add("ie-curve", cmd_ie_curve, "Eve's information versus Q (CSV)")
    p.add_argument("--protocol", **protocol)
    p.add_argument("--steps", type=int, default=100)

    p = add("keyrate-grid", cmd_keyrate_grid, "key rate over the (Q, Q_AB) plane (CSV)")
    p.add_argument("--protocol", **protocol)
    p.add_argument("--q-cells", type=int, default=200)
    p.add_argument("--qab-cells", type=int, default=200)
    p.add_argument("--per-raw-pulse", action="store_true")

    p = add("threshold-area", cmd_threshold_area, "area of the positive key-rate region")
    p.add_argument("--protocol", **protocol)
    p.add_argument("--resolution", type=int, default=2000)

    add("qab-bound", cmd_qab_bound, "largest Q_AB tolerable at maximal Eve information")

    p = add("gram-eigs", cmd_gram_eigs, "Gram spectrum and entropy for one attack")
    p.add_argument("--Q", type=float, default=0.25)
    p.add_argument("--cos-x", type=float, default=None,
                   help="default: solved from the symmetric-attack constraint")
    p.add_argument("--cos-y", type=float, default=1.0)

    p = add("simulate", cmd_simulate, "Monte Carlo protocol session")
    p.add_argument("--pulses", type=int, default=100_000)
    p.add_argument("--control-prob", type=float, default=0.5)
    p.add_argument("--bases", default=f"0,{math.pi / 2!r}")
    p.add_argument("--noise-fwd", default="none")
    p.add_argument("--noise-bwd", default="none")
    p.add_argument("--attack", default=None, help="Q,cosx,cosy")
    p.add_argument("--protocol", **protocol)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log", default=None, help="per-round CSV log path")
    p.add_argument("--cm-random-basis", action="store_true")
    p.add_argument("--normalize-by-total", action="store_true")

    p = add("compare", cmd_compare, "areas of both protocols and the dominance check")
    p.add_argument("--resolution", type=int, default=2000)
    p.add_argument("--grid-cells", type=int, default=200)

    return parser


def read_config(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _apply_config(parser, argv, args):
    """Re-parse with the config file's values installed as defaults."""
    subparser = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, raw in read_config(args.config).items():
        action = actions.get(key)
        if action is None or key in ("config", "help", "func"):
            raise ConfigError(f"unknown config key {key!r} for {args.command}")
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = raw.lower() in ("1", "true", "yes", "on")
        elif action.type is not None:
            defaults[key] = action.type(raw)
        else:
            defaults[key] = raw
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def cli_main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            try:
                args = _apply_config(parser, argv, args)
            except ValueError as exc:
                if isinstance(exc, (ConfigError, DomainError)):
                    raise
                raise ConfigError(f"bad value in {args.config}: {exc}") from None
        text, params = args.func(args)
    except (DomainError, ConfigError, OSError) as exc:
        print(f"muubqkd {args.command}: error: {exc}", file=sys.stderr)
        return 1

    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.manifest:
        manifest = {
            "subcommand": args.command,
            "params": params,
            "seed": params.get("seed"),
            "version": __version__,
            "sha256": hashlib.sha256(text.encode()).hexdigest(),
        }
        with open(args.manifest, "w") as fh:
            fh.write(_json(manifest))
    return 0


def main() -> None:
    sys.exit(cli_main())
