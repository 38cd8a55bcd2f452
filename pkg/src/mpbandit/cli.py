"""Command-line front end: config parsing, experiment runs, CSV emission.

Three subcommands:

* ``run``: one policy at one alpha; writes the per-turn CSV plus a
  ``*.agg.csv`` companion with per-turn mean/std across replications.
* ``sweep-alpha``: one or more policies crossed with a list of alphas;
  writes one final-regret summary row per (policy, alpha).
* ``validate-allocation``: prints the loss-minimizing distribution for a
  given mean vector, with a brute-force cross-check on small instances.

Settings come from an optional flat ``key = value`` config file; flags
override file values. Relative output paths land in $MPBANDIT_OUT_DIR when
set, else the working directory. Exit codes: 0 success, 2 bad usage or
config, 1 runtime failure (I/O).
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

from .allocation import (
    brute_force_allocation,
    expected_turn_gain,
    expected_turn_loss,
    optimal_allocation,
)
from .engine import ExperimentConfig, run_experiment
from .presets import PRESETS

RUN_HEADER = [
    "policy", "alpha", "replication", "turn",
    "expected_gain", "realized_gain", "cumulative_regret", "collisions",
]
AGG_HEADER = [
    "policy", "alpha", "turn",
    "expected_gain_mean", "expected_gain_std",
    "realized_gain_mean", "realized_gain_std",
    "cumulative_regret_mean", "cumulative_regret_std",
    "collisions_mean", "collisions_std",
]
SWEEP_HEADER = [
    "policy", "alpha", "final_regret_mean", "final_regret_std",
    "replications", "turns",
]

CONFIG_KEYS = (
    "arms", "players", "means", "alpha", "policy",
    "epsilon", "epsilon_decay", "turns", "replications", "seed", "out",
)

DEFAULTS = {
    "turns": 20000,
    "replications": 20,
    "seed": 0,
    "epsilon": 1.0,
    "epsilon_decay": 0.999,
}


class UsageError(ValueError):
    """Bad flags or config; reported on stderr with exit code 2."""


def _parse_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"{key}: expected an integer, got {text!r}") from None


def _parse_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"{key}: expected a number, got {text!r}") from None


def parse_means(text: str) -> tuple[float, ...]:
    """Comma-separated reals, or ``preset:<name>`` for a shipped mean vector."""
    text = text.strip()
    if text.startswith("preset:"):
        name = text[len("preset:"):]
        try:
            return PRESETS[name]
        except KeyError:
            known = ", ".join(sorted(PRESETS))
            raise UsageError(f"means: unknown preset {name!r}; known: {known}") from None
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("means: empty list")
    return tuple(_parse_float("means", p) for p in parts)


def parse_config_file(path: str) -> dict[str, str]:
    """Flat ``key = value`` lines; ``#`` starts a comment; later keys win."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in CONFIG_KEYS:
                known = ", ".join(CONFIG_KEYS)
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}; known: {known}")
            if not value:
                raise UsageError(f"{path}:{lineno}: empty value for {key!r}")
            values[key] = value
    return values


def _merge_settings(args: argparse.Namespace) -> dict:
    """defaults < config file < flags, with type conversion at each layer."""
    settings: dict = dict(DEFAULTS)
    if args.config:
        raw = parse_config_file(args.config)
        for key, text in raw.items():
            if key in ("arms", "players", "turns", "replications", "seed"):
                settings[key] = _parse_int(key, text)
            elif key in ("alpha", "epsilon", "epsilon_decay"):
                settings[key] = _parse_float(key, text)
            elif key == "means":
                settings[key] = parse_means(text)
            else:
                settings[key] = text
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = parse_means(flag) if key == "means" else flag
    return settings


def _require(settings: dict, key: str):
    if key not in settings:
        raise UsageError(f"missing required setting {key!r} (flag --{key.replace('_', '-')} or config key)")
    return settings[key]


def _experiment_config(settings: dict, policy: str, alpha: float) -> ExperimentConfig:
    means = _require(settings, "means")
    if "arms" in settings and settings["arms"] != len(means):
        raise UsageError(f"arms = {settings['arms']} but means has {len(means)} entries")
    try:
        return ExperimentConfig(
            policy=policy,
            means=means,
            n_players=_require(settings, "players"),
            alpha=alpha,
            turns=settings["turns"],
            replications=settings["replications"],
            base_seed=settings["seed"],
            epsilon=settings["epsilon"],
            decay=settings["epsilon_decay"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def resolve_out_path(out: str) -> str:
    """Relative paths go under $MPBANDIT_OUT_DIR when that is set."""
    if os.path.isabs(out):
        return out
    base = os.environ.get("MPBANDIT_OUT_DIR")
    return os.path.join(base, out) if base else out


def agg_path(out_path: str) -> str:
    root, ext = os.path.splitext(out_path)
    return f"{root}.agg{ext or '.csv'}"


def _fmt(value) -> str:
    return repr(value) if isinstance(value, float) else str(value)


def write_run_csv(path: str, result, log_every: int = 1) -> None:
    """Per-turn rows, replication-major, turns ascending and 1-based.

    With ``log_every = n`` only turns divisible by n are kept, plus the final
    turn so the last cumulative regret always survives decimation.
    """
    cfg = result.config
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RUN_HEADER)
        for replication, series in enumerate(result.series):
            for idx in range(series.n_turns):
                turn = idx + 1
                if turn % log_every and turn != series.n_turns:
                    continue
                writer.writerow([
                    cfg.policy, _fmt(cfg.alpha), replication, turn,
                    _fmt(series.expected_gain[idx]),
                    series.realized_gain[idx],
                    _fmt(series.cumulative_regret[idx]),
                    series.collisions[idx],
                ])


def write_agg_csv(path: str, result) -> None:
    """Per-turn across-replication mean/std; never decimated."""
    cfg = result.config
    agg = result.aggregate
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(AGG_HEADER)
        for idx in range(len(agg.expected_gain_mean)):
            writer.writerow([
                cfg.policy, _fmt(cfg.alpha), idx + 1,
                _fmt(agg.expected_gain_mean[idx]), _fmt(agg.expected_gain_std[idx]),
                _fmt(agg.realized_gain_mean[idx]), _fmt(agg.realized_gain_std[idx]),
                _fmt(agg.cumulative_regret_mean[idx]), _fmt(agg.cumulative_regret_std[idx]),
                _fmt(agg.collisions_mean[idx]), _fmt(agg.collisions_std[idx]),
            ])


def cmd_run(args: argparse.Namespace) -> int:
    settings = _merge_settings(args)
    policy = _require(settings, "policy")
    if "," in policy:
        raise UsageError("run takes a single policy; use sweep-alpha for comparisons")
    if "alpha" not in settings:
        raise UsageError("missing required setting 'alpha'")
    log_every = args.log_every if args.log_every is not None else 1
    if log_every < 1:
        raise UsageError(f"log-every must be >= 1, got {log_every}")
    config = _experiment_config(settings, policy, settings["alpha"])

    out = resolve_out_path(settings.get("out", "run.csv"))
    result = run_experiment(config)
    write_run_csv(out, result, log_every)
    agg_out = agg_path(out)
    write_agg_csv(agg_out, result)
    print(
        f"run complete: policy={config.policy} alpha={config.alpha} "
        f"turns={config.turns} replications={config.replications} "
        f"final_regret_mean={result.aggregate.final_regret_mean:.6g}"
    )
    print(f"wrote {out}")
    print(f"wrote {agg_out}")
    return 0


def _parse_alphas(text: str) -> list[float]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    alphas = [_parse_float("alphas", p) for p in parts]
    if len(alphas) < 2:
        raise UsageError("alphas: need at least two values to sweep")
    for a in alphas:
        if not 0.0 <= a <= 1.0:
            raise UsageError(f"alphas: {a} outside [0, 1]")
    return alphas


def cmd_sweep_alpha(args: argparse.Namespace) -> int:
    settings = _merge_settings(args)
    policies = [p.strip() for p in _require(settings, "policy").split(",") if p.strip()]
    if not policies:
        raise UsageError("policy: empty list")
    if args.alphas is None:
        raise UsageError("missing required flag --alphas")
    alphas = _parse_alphas(args.alphas)

    out = resolve_out_path(settings.get("out", "sweep.csv"))
    rows = []
    for policy in policies:
        for alpha in alphas:
            config = _experiment_config(settings, policy, alpha)
            result = run_experiment(config)
            agg = result.aggregate
            rows.append([
                policy, _fmt(alpha),
                _fmt(agg.final_regret_mean), _fmt(agg.final_regret_std),
                config.replications, config.turns,
            ])
            print(
                f"swept policy={policy} alpha={alpha}: "
                f"final_regret_mean={agg.final_regret_mean:.6g}"
            )
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_HEADER)
        writer.writerows(rows)
    print(f"wrote {out}")
    return 0


def cmd_validate_allocation(args: argparse.Namespace) -> int:
    means = parse_means(args.mu)
    for m in means:
        if not 0.0 < m <= 1.0:
            raise UsageError(f"mu: {m} outside (0, 1]")
    if args.players < 1:
        raise UsageError(f"players must be >= 1, got {args.players}")

    allocation = optimal_allocation(means, args.players)
    loss = expected_turn_loss(means, allocation.probabilities, args.players)
    gain = expected_turn_gain(means, allocation.probabilities, args.players)
    discarded = [i for i in range(len(means)) if i not in allocation.active_set]

    print(f"means: {list(means)}")
    print(f"players: {args.players}")
    print(f"active arms: {list(allocation.active_set)}")
    print(f"discarded arms: {discarded}")
    print(f"probabilities: {[round(c, 12) for c in allocation.probabilities]}")
    print(f"equalized constant: {allocation.equalized_constant:.12g}")
    print(f"expected per-turn loss: {loss:.12g}")
    print(f"expected per-turn gain: {gain:.12g}")
    if len(means) <= 4:
        grid_probs, grid_loss = brute_force_allocation(means, args.players, 0.01)
        print(f"grid search (step 0.01): probabilities {list(grid_probs)}, loss {grid_loss:.12g}")
        print(f"closed form minus grid loss: {loss - grid_loss:.3g} (<= 0 means closed form wins)")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpbandit",
        description="Multiplayer Bernoulli bandit simulator with collision and gossip dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="flat key = value settings file")
        p.add_argument("--policy", help="policy name: "
                                        "ucb1, eps_greedy, thompson, asymp_opt, optimal_cycle")
        p.add_argument("--means", help="comma-separated arm means in [0,1], or preset:mu1 / preset:mu2")
        p.add_argument("--arms", type=int, help="arm count; consistency check against means")
        p.add_argument("--players", type=int, help="player count")
        p.add_argument("--turns", type=int, help="turns per replication (default 20000)")
        p.add_argument("--replications", type=int, help="independent replications (default 20)")
        p.add_argument("--seed", type=int, help="base seed; replication streams derive from it (default 0)")
        p.add_argument("--epsilon", type=float, help="initial exploration probability (default 1.0)")
        p.add_argument("--epsilon-decay", dest="epsilon_decay", type=float,
                       help="per-turn multiplicative decay in (0,1) (default 0.999)")
        p.add_argument("--out", help="output CSV path; relative paths honor $MPBANDIT_OUT_DIR")

    run_p = sub.add_parser("run", help="run one policy at one alpha, write per-turn CSVs")
    add_common(run_p)
    run_p.add_argument("--alpha", type=float, help="edge probability of the per-turn graph, in [0,1]")
    run_p.add_argument("--log-every", dest="log_every", type=int,
                       help="keep every n-th turn in the per-turn CSV (final turn always kept)")
    run_p.set_defaults(func=cmd_run)

    sweep_p = sub.add_parser("sweep-alpha", help="final regret for each (policy, alpha) pair")
    add_common(sweep_p)
    sweep_p.add_argument("--alphas", help="comma-separated alpha values, at least two")
    sweep_p.set_defaults(func=cmd_sweep_alpha)

    val_p = sub.add_parser("validate-allocation", help="print the optimal pull distribution for given means")
    val_p.add_argument("--mu", required=True, help="comma-separated arm means in (0,1], or preset:mu1 / preset:mu2")
    val_p.add_argument("--players", type=int, required=True, help="player count")
    val_p.set_defaults(func=cmd_validate_allocation)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


def entry(argv=None) -> int:
    try:
        return main(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(entry())
