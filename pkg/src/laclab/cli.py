"""Batch front door: run generators, sums, experiments and reports from flags
or a flat key-value JSON config, emitting CSV/JSON with embedded configuration.

Exit codes: 0 success (all assertions passing), 2 assertion failure (a KS
distance above threshold or a failed bound), 1 usage or configuration error.
Outputs are byte-identical for a fixed (config, seed) regardless of thread
count; wall-clock timing goes to stderr only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from . import limits
from .coupling import simulate_coupling
from .diophantine import clt_condition_profile, lil_condition_profile
from .discrepancy import PointSet, discrepancy, star_discrepancy
from .orbit import PeriodicFunction, gap_condition_series
from .seqgen import IntegerSequence, SequenceSpec, dyer_harman_sum, gcd_sum, generate


class ConfigError(ValueError):
    """Carries one message per offending key."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _positive_int(v):
    n = int(v)
    if n < 1:
        raise ValueError("must be >= 1")
    return n


def _seed(v):
    return int(v)


def _float(v):
    return float(v)


def _str(v):
    return str(v)


def _int_list(v):
    if isinstance(v, (list, tuple)):
        return [int(x) for x in v]
    return [int(x) for x in str(v).split(",") if x.strip()]


# command -> {key: (converter, default, help)}; None default means required
_SEQ_KEYS = {
    "kind": (_str, "geometric", "sequence kind"),
    "theta": (int, 2, "ratio for geometric kinds"),
    "gamma": (_float, 1.0, "exponent for power_gap"),
    "n1": (_positive_int, 1, "first term for power_gap"),
    "base": (int, 2, "base for superlacunary_square"),
    "terms": (_int_list, None, "explicit terms (comma separated)"),
    "n": (_positive_int, 16, "number of terms"),
}

_FUNC_KEYS = {
    "function": (_str, "cos", "cos | centered_frac | sign_sine | erdos_fortet"
                 " | heavy_tail:ALPHA | centered_indicator:T"),
}

COMMANDS: dict[str, dict[str, tuple]] = {
    "gen": dict(_SEQ_KEYS),
    "gcdsum": dict(_SEQ_KEYS),
    "dh-sum": dict(_SEQ_KEYS),
    "disc": {"points": (_str, None, "CSV file of unit-interval values, one per line")},
    "dioph": {
        **_SEQ_KEYS,
        "window": (_positive_int, None, "largest window N'"),
        "d": (_positive_int, 2, "coefficient bound"),
        "nu": (_int_list, None, "offsets (comma separated); default auto"),
        "mode": (_str, "clt", "clt | lil"),
        "eps": (_float, 0.1, "exponent bump for the lil profile"),
    },
    "couple": {
        **_SEQ_KEYS,
        "k": (_positive_int, 6, "number of coupled levels"),
        "m": (_positive_int, 100000, "Monte Carlo replicas"),
    },
    "condition": {
        **_SEQ_KEYS,
        **_FUNC_KEYS,
        "k": (_positive_int, 8, "number of series terms"),
    },
    "clt": {
        "samples_out": (_str, None, "optional CSV path for the sorted sample"),
        "theta": (int, 2, "geometric ratio"),
        "N": (_positive_int, 4096, "inner sum length"),
        "M": (_positive_int, 20000, "replicas"),
        "tol": (_float, 0.05, "KS tolerance"),
        "normalization": (_str, "half_n", "half_n | kac | sample"),
    },
    "ef": {
        "samples_out": (_str, None, "optional CSV path for the sorted sample"),
        "N": (_positive_int, 4096, "inner sum length"),
        "M": (_positive_int, 20000, "replicas"),
        "tol": (_float, 0.05, "KS tolerance"),
    },
    "kdist": {
        "samples_out": (_str, None, "optional CSV path for the sorted sample"),
        "base": (int, 2, "superlacunary base"),
        "N": (_positive_int, 256, "points per replica"),
        "M": (_positive_int, 10000, "replicas"),
        "tol": (_float, 0.05, "KS tolerance"),
        "control": (_str, "sequence", "sequence | iid"),
    },
    "stable": {
        "samples_out": (_str, None, "optional CSV path for the sorted sample"),
        "alpha": (_float, 1.5, "tail exponent in (0, 2)"),
        "N": (_positive_int, 1024, "inner sum length"),
        "M": (_positive_int, 10000, "replicas"),
        "tol": (_float, 0.05, "two-sample KS tolerance"),
        "gamma": (_float, None, "gap exponent override"),
    },
    "frechet": {
        "samples_out": (_str, None, "optional CSV path for the sorted sample"),
        "alpha": (_float, 1.0, "tail exponent in (0, 2)"),
        "N": (_positive_int, 1024, "points per replica"),
        "M": (_positive_int, 10000, "replicas"),
        "tol": (_float, 0.05, "KS tolerance"),
        "gamma": (_float, None, "gap exponent override"),
    },
    "lil-trace": {
        "theta": (int, 2, "geometric ratio (power of two)"),
        "max_n": (_positive_int, 1 << 16, "largest checkpoint"),
        **_FUNC_KEYS,
    },
    "gamma": {
        "a": (int, 2, "integer base"),
        "s": (_float, 0.5, "first argument"),
        "t": (_float, 0.5, "second argument"),
        "kmax": (int, 40, "series truncation"),
    },
    "kac": {
        **_FUNC_KEYS,
        "kmax": (int, 20, "series truncation"),
    },
}

_COMMON_KEYS = {
    "seed": (_seed, 0, "base seed for counter-based streams"),
    "threads": (_positive_int, None, "worker threads (env LACLAB_THREADS, default 1)"),
    "out": (_str, None, "output path (default stdout)"),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: dict
    seed: int
    threads: int
    out: str | None


def _parse_function(spec: str) -> PeriodicFunction:
    name, _, arg = spec.partition(":")
    if name in ("cos", "cosine"):
        return PeriodicFunction.cosine()
    if name == "centered_frac":
        return PeriodicFunction.centered_frac()
    if name == "sign_sine":
        return PeriodicFunction.sign_sine()
    if name == "erdos_fortet":
        return PeriodicFunction.erdos_fortet()
    if name == "heavy_tail":
        if not arg:
            raise ValueError("heavy_tail needs an alpha, e.g. heavy_tail:1.5")
        return PeriodicFunction.heavy_tail(float(arg))
    if name == "centered_indicator":
        if not arg:
            raise ValueError("centered_indicator needs a threshold, e.g. centered_indicator:0.3")
        return PeriodicFunction.centered_indicator(float(arg))
    raise ValueError(f"unknown function {spec!r}")


def _sequence_from_params(params: dict) -> IntegerSequence:
    kind = params["kind"]
    n = params["n"]
    if kind == "geometric":
        spec = SequenceSpec.geometric(params["theta"], n)
    elif kind == "geometric_minus_one":
        spec = SequenceSpec.geometric_minus_one(params["theta"], n)
    elif kind == "power_gap":
        spec = SequenceSpec.power_gap(params["gamma"], params["n1"], n)
    elif kind == "superlacunary_square":
        spec = SequenceSpec.superlacunary_square(params["base"], n)
    elif kind == "explicit":
        if not params.get("terms"):
            raise ValueError("explicit kind needs terms")
        spec = SequenceSpec.explicit(params["terms"])
    else:
        raise ValueError(f"unknown sequence kind {kind!r}")
    return generate(spec)


def validate_config(path: str) -> RunConfig:
    """Parse and fully validate a flat JSON config file.

    Every error message names the offending key and its line in the file;
    nothing executes unless the whole file validates.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError([f"{path}:{e.lineno}: invalid JSON: {e.msg}"]) from e
    if not isinstance(raw, dict):
        raise ConfigError([f"{path}: config must be a flat JSON object"])
    return _validate_mapping(raw, path=path, text=text)


def _key_line(text: str | None, key: str) -> str:
    if text is None:
        return ""
    for i, line in enumerate(text.splitlines(), 1):
        if f'"{key}"' in line:
            return f":{i}"
    return ""


def _validate_mapping(raw: dict, path: str = "<flags>", text: str | None = None) -> RunConfig:
    errors = []
    command = raw.get("command")
    if command is None:
        raise ConfigError([f"{path}: missing required key 'command'"])
    if command not in COMMANDS:
        raise ConfigError([f"{path}{_key_line(text, 'command')}: unknown command {command!r}"])
    schema = {**COMMANDS[command], **_COMMON_KEYS}
    params: dict = {}
    for key, value in raw.items():
        if key == "command":
            continue
        if key not in schema:
            errors.append(f"{path}{_key_line(text, key)}: unknown key {key!r} for command {command!r}")
            continue
        conv = schema[key][0]
        try:
            params[key] = conv(value)
        except (TypeError, ValueError) as e:
            errors.append(f"{path}{_key_line(text, key)}: key {key!r}: {e}")
    if errors:
        raise ConfigError(errors)
    for key, (_conv, default, _help) in schema.items():
        if key not in params:
            params[key] = default
    missing = [
        k for k, (_c, d, _h) in COMMANDS[command].items() if params.get(k) is None and d is None
        and k != "samples_out"
        and not (command == "dioph" and k == "nu")
        and not (k == "terms" and params.get("kind") != "explicit")
        and not (k == "gamma" and command in ("stable", "frechet"))
    ]
    if missing:
        raise ConfigError([f"{path}: missing required key(s): {', '.join(missing)}"])
    threads = params.pop("threads", None)
    if threads is None:
        threads = int(os.environ.get("LACLAB_THREADS", "1"))
    seed = params.pop("seed", 0) or 0
    out = params.pop("out", None)
    return RunConfig(command=command, params=params, seed=seed, threads=threads, out=out)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="laclab",
        description="fractional-part orbit laboratory: sequences, sums, "
        "discrepancy, couplings and limit-theorem experiments",
    )
    sub = parser.add_subparsers(dest="command")
    for name, schema in COMMANDS.items():
        p = sub.add_parser(name)
        for key, (_conv, _default, help_text) in {**schema, **_COMMON_KEYS}.items():
            p.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None, help=help_text)
        p.add_argument("--config", dest="config", default=None, help="JSON config file")
    return parser


def run(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help(sys.stderr)
        return 1
    try:
        cfg = _resolve_config(args)
    except ConfigError as e:
        for msg in e.errors:
            print(f"error: {msg}", file=sys.stderr)
        return 1
    t0 = time.perf_counter()
    try:
        text, passed = _dispatch(cfg)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    # resolved config, hash and version for line-oriented outputs (JSON
    # payloads embed them already); stderr keeps output bytes deterministic
    resolved = {"command": cfg.command, "seed": cfg.seed, **cfg.params}
    print(
        f"config_hash={limits.config_hash(_jsonable(resolved))}"
        f" version={limits.__version__} config={json.dumps(_jsonable(resolved), sort_keys=True)}",
        file=sys.stderr,
    )
    print(f"runtime_ms={runtime_ms:.1f}", file=sys.stderr)
    return 0 if passed else 2


def _jsonable(mapping: dict) -> dict:
    return {k: v for k, v in mapping.items() if v is not None}


def _resolve_config(args) -> RunConfig:
    base: dict = {"command": args.command}
    if args.config:
        file_cfg = validate_config(args.config)
        if file_cfg.command != args.command:
            raise ConfigError(
                [f"config file command {file_cfg.command!r} differs from {args.command!r}"]
            )
        base.update(file_cfg.params)
        base["seed"] = file_cfg.seed
        base["threads"] = file_cfg.threads
        if file_cfg.out:
            base["out"] = file_cfg.out
    schema = {**COMMANDS[args.command], **_COMMON_KEYS}
    for key in schema:
        v = getattr(args, key, None)
        if v is not None:
            base[key] = v
    return _validate_mapping(base)


def _json_payload(command: str, config: dict, results: dict, passed: bool) -> str:
    payload = {
        "command": command,
        "config": config,
        "config_hash": limits.config_hash(config),
        "version": limits.__version__,
        "results": results,
        "pass": passed,
        "exit_code_advisory": 0 if passed else 2,
    }
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _finish_experiment(rep, params: dict) -> str:
    path = params.get("samples_out")
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(rep.samples_csv())
    return rep.to_json()


def _dispatch(cfg: RunConfig) -> tuple[str, bool]:
    p = cfg.params
    if cfg.command == "gen":
        return _sequence_from_params(p).serialize(), True
    if cfg.command == "gcdsum":
        seq = _sequence_from_params(p)
        value = gcd_sum(seq)
        cfgd = {"sequence": seq.provenance.to_dict()}
        return _json_payload("gcdsum", cfgd, {
            "gcd_sum": f"{value.numerator}/{value.denominator}",
            "gcd_sum_float": float(value),
        }, True), True
    if cfg.command == "dh-sum":
        seq = _sequence_from_params(p)
        cfgd = {"sequence": seq.provenance.to_dict()}
        return _json_payload("dh-sum", cfgd, {"dyer_harman_sum": dyer_harman_sum(seq)}, True), True
    if cfg.command == "disc":
        with open(p["points"], "r", encoding="utf-8") as fh:
            ps = PointSet.deserialize(fh.read())
        results = {"D_N": discrepancy(ps), "star_D_N": star_discrepancy(ps), "N": len(ps)}
        return _json_payload("disc", {"points": p["points"]}, results, True), True
    if cfg.command == "dioph":
        seq = _sequence_from_params(p)
        prof_fn = clt_condition_profile if p["mode"] == "clt" else lil_condition_profile
        kwargs = {"offsets": p["nu"]} if p.get("nu") else {}
        if p["mode"] == "lil":
            kwargs["eps"] = p["eps"]
        elif p["mode"] != "clt":
            raise ValueError("mode must be clt or lil")
        profile = prof_fn(seq, p["window"], p["d"], **kwargs)
        return profile.to_csv(), True
    if cfg.command == "couple":
        seq = _sequence_from_params(p)
        report = simulate_coupling(seq, p["k"], p["m"], cfg.seed)
        return report.to_csv(), report.all_passed()
    if cfg.command == "condition":
        seq = _sequence_from_params(p)
        f = _parse_function(p["function"])
        report = gap_condition_series(f, seq, p["k"])
        return report.to_csv(), True
    if cfg.command == "clt":
        rep = limits.clt_experiment(
            theta=p["theta"], n_terms=p["N"], replicas=p["M"], seed=cfg.seed,
            threads=cfg.threads, tol=p["tol"], normalization=p["normalization"],
            keep_samples=bool(p.get("samples_out")),
        )
        return _finish_experiment(rep, p), rep.passed
    if cfg.command == "ef":
        rep = limits.erdos_fortet_experiment(
            n_terms=p["N"], replicas=p["M"], seed=cfg.seed, threads=cfg.threads, tol=p["tol"],
            keep_samples=bool(p.get("samples_out")),
        )
        return _finish_experiment(rep, p), rep.passed
    if cfg.command == "kdist":
        rep = limits.discrepancy_limit_experiment(
            base=p["base"], n_terms=p["N"], replicas=p["M"], seed=cfg.seed,
            threads=cfg.threads, tol=p["tol"], control=p["control"],
            keep_samples=bool(p.get("samples_out")),
        )
        return _finish_experiment(rep, p), rep.passed
    if cfg.command == "stable":
        rep = limits.stable_experiment(
            alpha=p["alpha"], n_terms=p["N"], replicas=p["M"], seed=cfg.seed,
            threads=cfg.threads, tol=p["tol"], gamma=p.get("gamma"),
            keep_samples=bool(p.get("samples_out")),
        )
        return _finish_experiment(rep, p), rep.passed
    if cfg.command == "frechet":
        rep = limits.frechet_experiment(
            alpha=p["alpha"], n_terms=p["N"], replicas=p["M"], seed=cfg.seed,
            threads=cfg.threads, tol=p["tol"], gamma=p.get("gamma"),
            keep_samples=bool(p.get("samples_out")),
        )
        return _finish_experiment(rep, p), rep.passed
    if cfg.command == "lil-trace":
        trace = limits.lil_trace(
            f=_parse_function(p["function"]), theta=p["theta"], max_n=p["max_n"], seed=cfg.seed,
        )
        return trace.to_csv(), True
    if cfg.command == "gamma":
        value = limits.gaussian_covariance(p["a"], p["s"], p["t"], p["kmax"])
        cfgd = {"a": p["a"], "s": p["s"], "t": p["t"], "kmax": p["kmax"]}
        return _json_payload("gamma", cfgd, {"covariance": value}, True), True
    if cfg.command == "kac":
        f = _parse_function(p["function"])
        value = limits.kac_variance(f, kmax=p["kmax"])
        cfgd = {"function": p["function"], "kmax": p["kmax"]}
        return _json_payload("kac", cfgd, {
            "variance": value,
            "tail_bound": limits.kac_tail_bound(f, p["kmax"]),
        }, True), True
    raise ValueError(f"unhandled command {cfg.command!r}")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
