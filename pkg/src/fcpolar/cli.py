"""Monte-Carlo harness and command-line front door.

Subcommands: simulate (BLER/complexity curves), de (density evolution),
bounds (DT and MC reference curves), mlbound (simulation-based ML lower
bound), toy-compare (BI-AWGN MAP comparison on the worked example),
build-code, dump-fc, and dump-matrices.

Every random quantity is keyed by (seed, substream, trial, position), so
a (config, seed) pair fully determines every trial regardless of
chunking, and rerunning a point reproduces the CSV byte for byte. The
per-point stop rule finishes at min(trials, first trial reaching
max-errors block errors), evaluating trials in index order.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, batch, bounds, de, oracle
from .codes import CodeSpec, build_example1, build_nr_code
from .constraints import future_constraints
from .gf2 import format_matrix, mat_mul
from .rng import STREAM_CHANNEL, keyed_array
from .scl import decode_scl

CSV_HEADER = "p,bler,stderr,avg_visits,avg_iters,trials,errors"

_CHUNK = 4096


def run_point(spec: CodeSpec, decoder: str, p: float, trials: int, seed: int,
              i_max: int = 1, list_size: int = 32,
              max_errors: int | None = None) -> dict:
    """Simulate one channel point; returns the summary row plus metadata.

    Trials are evaluated in index order in chunks; once the cumulative
    block-error count reaches max_errors the point is cut at exactly that
    trial, so the result is identical to a sequential trial loop.
    """
    if decoder not in ("sc", "scc", "bpscc", "bpscc-sbj", "scl"):
        raise ValueError(f"unknown decoder {decoder!r}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability {p} out of range")
    a_cols = list(spec.A)
    err_flags = []
    dead_flags = []
    visits_parts = []
    backjump_parts = []
    iters_total = 0
    checks_total = 0
    done = 0
    while done < trials:
        ids = np.arange(done, min(done + _CHUNK, trials))
        msg = batch.sample_messages(spec, seed, ids)
        u, x = batch.encode_batch(spec, msg)
        erased = batch.sample_erasures(spec, p, seed, ids)
        yp = batch.channel_planes(x, erased)
        if decoder == "sc":
            out = batch.decode_sc_batch(spec, yp, seed, ids)
        elif decoder == "scl":
            out = _decode_scl_chunk(spec, yp, list_size, seed, ids)
        else:
            engine = "scc" if decoder == "scc" else "bp_scc"
            out = batch.decode_fc_batch(spec, yp, engine=engine, i_max=i_max,
                                        sbj=decoder == "bpscc-sbj", seed=seed,
                                        trials=ids)
        wrong = (out.u_hat[:, a_cols] != u[:, a_cols]).any(axis=1)
        err = ~out.success | wrong
        err_flags.append(err)
        dead_flags.append(~out.success)
        visits_parts.append(out.visits)
        backjump_parts.append(out.backjumps)
        iters_total += int(out.iters_sum.sum())
        checks_total += int(out.checks.sum())
        done = ids[-1] + 1
        if max_errors is not None and np.concatenate(err_flags).sum() >= max_errors:
            break

    err = np.concatenate(err_flags)
    dead = np.concatenate(dead_flags)
    visits = np.concatenate(visits_parts)
    backjumps = np.concatenate(backjump_parts)
    if max_errors is not None:
        reached = np.flatnonzero(np.cumsum(err) >= max_errors)
        if reached.size:
            cut = reached[0] + 1
            err, dead = err[:cut], dead[:cut]
            visits, backjumps = visits[:cut], backjumps[:cut]
    ran = err.size
    errors = int(err.sum())
    bler = errors / ran
    return {
        "p": p,
        "bler": bler,
        "stderr": float(np.sqrt(bler * (1.0 - bler) / ran)),
        "avg_visits": float(visits.mean()),
        "avg_iters": (iters_total / checks_total) if checks_total else 1.0,
        "trials": ran,
        "errors": errors,
        "dead_ends": int(dead.sum()),
        "coin_misses": int((err & ~dead).sum()),
        "avg_backjumps": float(backjumps.mean()),
    }


def _decode_scl_chunk(spec, yp, list_size, seed, ids) -> batch.BatchOutcome:
    y_sym = batch.planes_to_symbol_rows(yp)
    rows = y_sym.shape[0]
    out = batch.BatchOutcome(
        success=np.zeros(rows, dtype=bool),
        u_hat=np.zeros((rows, spec.N), dtype=np.uint8),
        visits=np.zeros(rows, dtype=np.int64),
        backjumps=np.zeros(rows, dtype=np.int64),
        iters_sum=np.ones(rows, dtype=np.int64),
        checks=np.ones(rows, dtype=np.int64))
    for r in range(rows):
        res = decode_scl(spec, y_sym[r], list_size, seed=seed, trial=int(ids[r]))
        out.success[r] = res.status == "success"
        if res.u_hat is not None:
            out.u_hat[r] = res.u_hat
        out.visits[r] = res.visited_nodes
    return out


def emit_results(rows: list[dict], out_path: str | None, meta: dict) -> str:
    """Render the pinned CSV and persist it (plus a JSON sidecar) if asked."""
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(
            f"{row['p']:.6g},{row['bler']:.8g},{row['stderr']:.6g},"
            f"{row['avg_visits']:.8g},{row['avg_iters']:.8g},"
            f"{row['trials']},{row['errors']}")
    text = "\n".join(lines) + "\n"
    if out_path:
        try:
            with open(out_path, "w") as fh:
                fh.write(text)
            with open(out_path + ".json", "w") as fh:
                json.dump({**meta, "points": rows}, fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as exc:
            raise SystemExit(f"cannot write {out_path}: {exc}")
    else:
        sys.stdout.write(text)
    return text


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) == 1:
        return [float(parts[0])]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"bad grid {text!r}, want start:stop:step")
    start, stop, step = (float(t) for t in parts)
    if step <= 0:
        raise argparse.ArgumentTypeError("grid step must be positive")
    grid = []
    v = start
    while v <= stop + 1e-9:
        grid.append(round(v, 12))
        v += step
    return grid


def _read_config(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            for raw in fh:
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise SystemExit(f"bad config line in {path}: {raw.rstrip()}")
                key, val = (t.strip() for t in line.split("=", 1))
                values[key.replace("-", "_")] = val
    except OSError as exc:
        raise SystemExit(f"cannot read config {path}: {exc}")
    return values


def _build_spec(args) -> CodeSpec:
    if args.n is None or args.k is None:
        raise SystemExit("--n and --k are required for this command")
    return build_nr_code(1 << args.n, args.k, crc=args.crc)


def _add_code_args(sub):
    sub.add_argument("--n", type=int, help="log2 of the block length N")
    sub.add_argument("--k", type=int, help="number of information bits")
    sub.add_argument("--crc", choices=("nr11", "none"), default="nr11")


def _meta(spec: CodeSpec, args, extra: dict | None = None) -> dict:
    meta = {
        "version": __version__,
        "seed": args.seed,
        "code_hash": spec.code_hash(),
        "config": {k: v for k, v in sorted(vars(args).items())
                   if k != "func" and v is not None},
    }
    if extra:
        meta.update(extra)
    return meta


def _cmd_simulate(args) -> int:
    spec = _build_spec(args)
    rows = []
    for p in args.p_grid:
        rows.append(run_point(spec, args.decoder, p, args.trials, args.seed,
                              i_max=args.imax, list_size=args.list_size,
                              max_errors=args.max_errors))
    emit_results(rows, args.out, _meta(spec, args))
    return 0


def _cmd_de(args) -> int:
    spec = _build_spec(args)
    lines = ["p,P_B," + ",".join(f"pb_{i}" for i in spec.A)]
    for p in args.p_grid:
        per_bit, bler = de.de_run(spec, args.decoder, p)
        lines.append(f"{p:.6g},{bler:.8g}," +
                     ",".join(f"{v:.8g}" for v in per_bit))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bounds(args) -> int:
    N, K = 1 << args.n, args.k
    lines = ["p,dt,mc"]
    for p in args.p_grid:
        lines.append(f"{p:.6g},{bounds.dt_bound(N, K, p):.8g},"
                     f"{bounds.mc_bound(N, K, p):.8g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_mlbound(args) -> int:
    spec = _build_spec(args)
    lines = ["p,ml_bound,trials"]
    for p in args.p_grid:
        val = bounds.ml_bound_sim(spec, p, args.trials, args.seed)
        lines.append(f"{p:.6g},{val:.8g},{args.trials}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_toy_compare(args) -> int:
    spec = build_example1()
    ids = np.arange(args.trials)
    msg = batch.sample_messages(spec, args.seed, ids)
    u, x = batch.encode_batch(spec, msg)
    s = 1.0 - 2.0 * x.astype(float)
    lines = ["esn0_db,bler_sc,bler_bitwise,bler_blockwise,trials"]
    for esn0 in args.esn0_grid:
        sigma2 = oracle.awgn_sigma2(esn0)
        noise = _gaussian_noise(args.seed, ids, spec.N, esn0) * np.sqrt(sigma2)
        ll = oracle.awgn_loglik(s + noise, sigma2)
        blers = []
        for decode in (oracle.sc_marginal_decode_batch,
                       oracle.bitwise_map_sc_decode_batch,
                       oracle.blockwise_map_decode_batch):
            u_hat = decode(spec, ll)
            blers.append(float((u_hat != u).any(axis=1).mean()))
        lines.append(f"{esn0:.6g}," + ",".join(f"{b:.8g}" for b in blers) +
                     f",{args.trials}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _gaussian_noise(seed: int, ids: np.ndarray, N: int, tag: float) -> np.ndarray:
    """Standard normal draws keyed per (trial, position, SNR tag)."""
    from scipy.special import ndtri
    tag_key = np.uint64(int(round(1000 * tag)) & 0xFFFFFFFF)
    h = keyed_array(seed, STREAM_CHANNEL, np.asarray(ids, dtype=np.uint64)[:, None],
                    np.arange(N, dtype=np.uint64)[None, :], tag_key)
    return ndtri((h.astype(np.float64) + 0.5) / 2.0 ** 64)


def _cmd_build_code(args) -> int:
    spec = _build_spec(args)
    out = [
        f"N = {spec.N}",
        f"K = {spec.K}",
        f"outer = {spec.outer.kind if spec.outer else 'none'}",
        f"code_hash = {spec.code_hash()}",
        f"A = {' '.join(map(str, spec.A))}",
        f"P = {' '.join(map(str, spec.P))}",
        f"F = {' '.join(map(str, spec.F))}",
    ]
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def _cmd_dump_fc(args) -> int:
    spec = _build_spec(args) if args.n else build_example1()
    targets = [args.i] if args.i is not None else list(spec.A)
    for i in targets:
        fc = future_constraints(spec, i)
        sys.stdout.write(f"i={i} L={list(fc.L)}\n")
        for t, cols in enumerate(fc.per_stage):
            if cols:
                sys.stdout.write(f"  t={t}: {list(cols)}\n")
    return 0


def _cmd_dump_matrices(args) -> int:
    spec = _build_spec(args) if args.n else build_example1()
    from .constraints import global_Q
    sections = [("T", spec.T), ("H", spec.H), ("G", spec.generator),
                ("TG", mat_mul(spec.T, spec.generator)),
                ("Q", global_Q(spec))]
    chunks = [f"# {name}\n{format_matrix(m)}" for name, m in sections]
    text = "\n".join(chunks)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="fcpolar",
        description="future-constraint-aided polar decoding workbench")
    parser.add_argument("--config", help="key=value file of default flags")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte-Carlo BLER/complexity curves")
    _add_code_args(sim)
    sim.add_argument("--decoder", default="bpscc-sbj",
                     choices=("sc", "scc", "bpscc", "bpscc-sbj", "scl"))
    sim.add_argument("--imax", type=int, default=1)
    sim.add_argument("--list-size", type=int, default=32)
    sim.add_argument("--p-grid", type=_parse_grid, default=[0.5])
    sim.add_argument("--trials", type=int, default=10000)
    sim.add_argument("--max-errors", type=int)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--out")
    sim.set_defaults(func=_cmd_simulate)

    dep = sub.add_parser("de", help="density evolution curves")
    _add_code_args(dep)
    dep.add_argument("--decoder", default="bpscc1",
                     choices=("sc", "scc", "bpscc1"))
    dep.add_argument("--p-grid", type=_parse_grid, default=[0.5])
    dep.add_argument("--out")
    dep.set_defaults(func=_cmd_de, seed=0)

    bnd = sub.add_parser("bounds", help="DT and MC reference curves")
    _add_code_args(bnd)
    bnd.add_argument("--p-grid", type=_parse_grid, default=[0.5])
    bnd.add_argument("--out")
    bnd.set_defaults(func=_cmd_bounds, seed=0)

    mlb = sub.add_parser("mlbound", help="simulation-based ML lower bound")
    _add_code_args(mlb)
    mlb.add_argument("--p-grid", type=_parse_grid, default=[0.5])
    mlb.add_argument("--trials", type=int, default=10000)
    mlb.add_argument("--seed", type=int, default=0)
    mlb.add_argument("--out")
    mlb.set_defaults(func=_cmd_mlbound)

    toy = sub.add_parser("toy-compare",
                         help="BI-AWGN MAP comparison on the worked example")
    toy.add_argument("--esn0-grid", type=_parse_grid, default=[-2.0, 0.0, 2.0, 4.0])
    toy.add_argument("--trials", type=int, default=10000)
    toy.add_argument("--seed", type=int, default=0)
    toy.add_argument("--out")
    toy.set_defaults(func=_cmd_toy_compare)

    bld = sub.add_parser("build-code", help="print code construction summary")
    _add_code_args(bld)
    bld.set_defaults(func=_cmd_build_code, seed=0)

    dfc = sub.add_parser("dump-fc", help="future-constraint index sets per bit")
    _add_code_args(dfc)
    dfc.add_argument("--i", type=int, help="restrict to one information bit")
    dfc.set_defaults(func=_cmd_dump_fc, seed=0)

    dmx = sub.add_parser("dump-matrices", help="emit T, H, G, TG, Q as text")
    _add_code_args(dmx)
    dmx.add_argument("--out")
    dmx.set_defaults(func=_cmd_dump_matrices, seed=0)

    args, remaining = parser.parse_known_args(argv)
    if remaining:
        parser.error(f"unrecognized arguments: {' '.join(remaining)}")
    if args.config:
        defaults = _read_config(args.config)
        coerced = {}
        for key, val in defaults.items():
            if key in ("p_grid", "esn0_grid"):
                coerced[key] = _parse_grid(val)
            elif key in ("n", "k", "imax", "list_size", "trials",
                         "max_errors", "seed", "i"):
                coerced[key] = int(val)
            else:
                coerced[key] = val
        for key, val in coerced.items():
            if getattr(args, key, None) is None or _is_default(parser, argv, key):
                setattr(args, key, val)
    try:
        return args.func(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _is_default(parser, argv, key: str) -> bool:
    flag = "--" + key.replace("_", "-")
    tokens = argv if argv is not None else sys.argv[1:]
    return not any(tok == flag or tok.startswith(flag + "=") for tok in tokens)


if __name__ == "__main__":
    sys.exit(main())
