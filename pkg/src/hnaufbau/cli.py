"""Command-line front end.

Subcommands: spectrum | observables | skin | hcb-compare | verify. Flags
can also come from a key=value config file (--config); explicit flags win.
CSV output starts with '#'-prefixed key=value parameter lines and carries
complex values as separate _re/_im columns; JSON mirrors the same payload.
Nothing time- or host-dependent is ever written, so identical inputs give
byte-identical files at any worker count.

Exit codes: 0 success, 1 verification/computation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import verify as verify_mod
from .aufbau import ManyBodyLevel, OccupationConfig, build_spectrum, occupation_string
from .fock import eigenstate_from_config
from .hardcore import delta_E_scan, im_delta_closed_form
from .lattice import HNParams, single_particle_levels
from .observables import (
    correlation_matrix,
    density_from_fock,
    momentum_distribution,
    skin_metrics,
)

__all__ = ["main", "read_table"]

# test hook: verify's residual suite applies this to the bond list
_VERIFY_BOND_TRANSFORM = None

_COMMON_DEFAULTS = {
    "L": 10,
    "N": 5,
    "t": 1.0,
    "g": 0.5,
    "bc": "pbc",
    "stats": "fermion",
    "out": None,
    "format": "csv",
    "workers": 1,
    "tol": None,
}

_CMD_DEFAULTS = {
    "spectrum": {},
    "observables": {"ranks": "lowest8"},
    "skin": {"ranks": "lowest8"},
    "hcb-compare": {"lengths": "160:480:16", "filling": 0.5},
    "verify": {"suite": None},
}

_COERCE = {
    "L": int,
    "N": int,
    "t": float,
    "g": float,
    "workers": int,
    "tol": float,
    "filling": float,
}


class UsageError(ValueError):
    pass


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-L", type=int, default=None)
    common.add_argument("-N", type=int, default=None)
    common.add_argument("-t", type=float, default=None)
    common.add_argument("-g", type=float, default=None)
    common.add_argument("--bc", default=None, help="pbc | obc | twist=<radians>")
    common.add_argument("--stats", choices=("fermion", "boson", "hardcore"), default=None)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--config", default=None, help="key=value file, '#' comments")
    common.add_argument("--workers", type=int, default=None)
    common.add_argument(
        "--tol", type=float, default=None,
        help="tie tolerance override for degeneracy grouping",
    )
    parser = argparse.ArgumentParser(
        prog="hnaufbau",
        description="Many-body spectra of the nonreciprocal chain by the generalized Aufbau rule",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="full many-body spectrum")
    p_obs = sub.add_parser("observables", parents=[common], help="n_j/n_k profiles per eigenstate")
    p_obs.add_argument("--ranks", default=None, help="comma list, 'all', or 'lowest8'")
    p_skin = sub.add_parser("skin", parents=[common], help="localization metrics per eigenstate")
    p_skin.add_argument("--ranks", default=None, help="comma list, 'all', or 'lowest8'")
    p_hcb = sub.add_parser("hcb-compare", parents=[common], help="fermion vs hard-core gap scan")
    p_hcb.add_argument("--lengths", default=None, help="comma list or start:stop:step")
    p_hcb.add_argument("--filling", type=float, default=None)
    p_ver = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p_ver.add_argument(
        "--suite", action="append", default=None,
        help=f"suite name, repeatable; one of {', '.join(verify_mod.SUITES)}",
    )
    return parser


def _read_config_file(path):
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key] = val
    return values


def _merge_config(args):
    """Fill unset flags from the config file, then from defaults."""
    defaults = dict(_COMMON_DEFAULTS)
    defaults.update(_CMD_DEFAULTS[args.command])
    if args.config is not None:
        file_vals = _read_config_file(args.config)
        unknown = set(file_vals) - set(defaults)
        if unknown:
            raise UsageError(
                f"unknown config keys {sorted(unknown)}; valid: {sorted(defaults)}"
            )
        for key, raw in file_vals.items():
            if getattr(args, key.replace("-", "_"), None) is None:
                coerce = _COERCE.get(key, str)
                try:
                    setattr(args, key, coerce(raw))
                except ValueError:
                    raise UsageError(
                        f"config key {key}={raw!r} is not a valid {coerce.__name__}"
                    ) from None
    for key, val in defaults.items():
        attr = key.replace("-", "_")
        if getattr(args, attr, None) is None:
            setattr(args, attr, val)
    return args


def _parse_bc(bc):
    if bc == "pbc":
        return "periodic", 0.0
    if bc == "obc":
        return "open", 0.0
    if bc.startswith("twist="):
        try:
            return "twisted", float(bc.split("=", 1)[1])
        except ValueError:
            raise UsageError(f"bad twist angle in --bc {bc!r}") from None
    raise UsageError(f"--bc must be pbc, obc, or twist=<radians>, got {bc!r}")


def _effective_params(args):
    """HNParams for the requested sector; hard-core ring sectors get the
    parity twist of their fermion image baked in."""
    boundary, twist = _parse_bc(args.bc)
    if args.stats == "hardcore" and boundary == "twisted":
        raise UsageError("--stats hardcore combines only with --bc pbc or obc")
    effective_twist = None
    if args.stats == "hardcore" and boundary == "periodic" and args.N % 2 == 0:
        boundary, twist = "twisted", math.pi
        effective_twist = math.pi
    if boundary == "twisted":
        p = HNParams(L=args.L, t=args.t, g=args.g, boundary="twisted", twist=twist)
    else:
        p = HNParams(L=args.L, t=args.t, g=args.g, boundary=boundary)
    return p, effective_twist


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _emit(args, header, columns, rows, comments=(), metrics=None):
    if args.format == "json":
        payload = {"params": header, "columns": list(columns), "rows": rows}
        if metrics is not None:
            payload["metrics"] = metrics
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# {k}={_fmt(v)}" for k, v in header.items()]
        lines.extend(comments)
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(cell) for cell in row))
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def read_table(path):
    """Parse a CSV written by _emit: ('#' key=value header, columns, rows
    as lists of strings). The inverse of the writer, for round-trip tests."""
    header = {}
    columns = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, val = body.split("=", 1)
                    header[key.strip()] = val.strip()
                continue
            if columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    return header, columns, rows


def _spectrum_for(args):
    p, effective_twist = _effective_params(args)
    levels = single_particle_levels(p)
    fill_stats = "fermion" if args.stats == "hardcore" else args.stats
    spec = build_spectrum(levels, fill_stats, args.N, tie_tol=args.tol)
    if args.stats == "hardcore":
        # relabel: the filling ran on the fermion image, the sector is hard-core
        spec = [
            ManyBodyLevel(
                energy=lv.energy,
                config=OccupationConfig("hardcore", lv.config.occupations),
                rank=lv.rank,
                degeneracy_group=lv.degeneracy_group,
            )
            for lv in spec
        ]
    return p, effective_twist, spec


def _base_header(args, command, effective_twist):
    header = {
        "command": command,
        "L": args.L,
        "N": args.N,
        "t": float(args.t),
        "g": float(args.g),
        "bc": args.bc,
        "stats": args.stats,
    }
    if effective_twist is not None:
        header["effective_twist"] = float(effective_twist)
    if args.tol is not None:
        header["tie_tol"] = float(args.tol)
    return header


def cmd_spectrum(args) -> int:
    _p, effective_twist, spec = _spectrum_for(args)
    header = _base_header(args, "spectrum", effective_twist)
    header["states"] = len(spec)
    columns = ["rank", "energy_re", "energy_im", "degeneracy_group", "occupation"]
    rows = [
        [lv.rank, lv.energy.real, lv.energy.imag, lv.degeneracy_group,
         occupation_string(lv.config)]
        for lv in spec
    ]
    _emit(args, header, columns, rows)
    return 0


def _select_ranks(ranks_arg, dim):
    if ranks_arg == "all":
        return list(range(dim))
    if ranks_arg == "lowest8":
        return list(range(min(8, dim)))
    try:
        ranks = [int(part) for part in str(ranks_arg).split(",") if part.strip()]
    except ValueError:
        raise UsageError(f"--ranks must be 'all', 'lowest8', or ints, got {ranks_arg!r}") from None
    if not ranks:
        raise UsageError("--ranks selected nothing")
    for r in ranks:
        if not 0 <= r < dim:
            raise UsageError(f"rank {r} outside 0..{dim - 1}")
    return ranks


def _state_report(p, level):
    v = eigenstate_from_config(p, level.config)
    nj = density_from_fock(v)
    nk = momentum_distribution(correlation_matrix(v))
    return nj, nk, skin_metrics(nj)


def cmd_observables(args) -> int:
    p, effective_twist, spec = _spectrum_for(args)
    ranks = _select_ranks(args.ranks, len(spec))
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as ex:
        reports = list(ex.map(lambda r: _state_report(p, spec[r]), ranks))
    header = _base_header(args, "observables", effective_twist)
    header["ranks"] = ";".join(str(r) for r in ranks)
    columns = ["rank", "kind", "index", "grid", "value"]
    rows = []
    comments = []
    metrics_obj = {}
    for rank, (nj, nk, met) in zip(ranks, reports):
        for idx in range(nj.values.size):
            rows.append([rank, "position", idx + 1, float(nj.grid[idx]), float(nj.values[idx])])
        for idx in range(nk.values.size):
            rows.append([rank, "momentum", idx + 1, float(nk.grid[idx]), float(nk.values[idx])])
        comments.append(
            f"# metrics rank={rank} left_fraction={met.left_fraction!r} "
            f"ipr={met.ipr!r} log_slope={met.log_slope!r}"
        )
        metrics_obj[str(rank)] = {
            "left_fraction": met.left_fraction,
            "ipr": met.ipr,
            "log_slope": met.log_slope,
        }
    _emit(args, header, columns, rows, comments=comments, metrics=metrics_obj)
    return 0


def cmd_skin(args) -> int:
    p, effective_twist, spec = _spectrum_for(args)
    ranks = _select_ranks(args.ranks, len(spec))
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as ex:
        reports = list(ex.map(lambda r: _state_report(p, spec[r]), ranks))
    header = _base_header(args, "skin", effective_twist)
    columns = ["rank", "energy_re", "energy_im", "left_fraction", "ipr", "log_slope"]
    rows = []
    for rank, (_nj, _nk, met) in zip(ranks, reports):
        lv = spec[rank]
        rows.append(
            [rank, lv.energy.real, lv.energy.imag,
             met.left_fraction, met.ipr, met.log_slope]
        )
    _emit(args, header, columns, rows)
    return 0


def _parse_lengths(spec_str):
    s = str(spec_str)
    if ":" in s:
        parts = s.split(":")
        if len(parts) != 3:
            raise UsageError(f"--lengths range must be start:stop:step, got {s!r}")
        try:
            start, stop, step = (int(x) for x in parts)
        except ValueError:
            raise UsageError(f"--lengths range must be integers, got {s!r}") from None
        if step <= 0 or stop < start:
            raise UsageError(f"empty --lengths range {s!r}")
        return list(range(start, stop + 1, step))
    try:
        lengths = [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--lengths must be integers, got {s!r}") from None
    if not lengths:
        raise UsageError("--lengths selected nothing")
    return lengths


def cmd_hcb_compare(args) -> int:
    lengths = _parse_lengths(args.lengths)
    g, t, filling = float(args.g), float(args.t), float(args.filling)

    def point(L):
        return delta_E_scan([L], filling, g, t)[0]

    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as ex:
        gaps = list(ex.map(point, sorted(lengths)))
    header = {
        "command": "hcb-compare",
        "g": g,
        "t": t,
        "filling": filling,
        "lengths": ";".join(str(L) for L in sorted(lengths)),
    }
    columns = [
        "L", "N", "delta_re", "delta_im", "closed_form_im",
        "abs_im_minus_closed", "delta_im_over_100",
    ]
    rows = []
    for gap in gaps:
        closed = im_delta_closed_form(gap.L, gap.N, g, t)
        rows.append(
            [gap.L, gap.N, gap.delta.real, gap.delta.imag, closed,
             abs(gap.delta.imag - closed), gap.delta.imag / 100.0]
        )
    _emit(args, header, columns, rows)
    return 0


def cmd_verify(args) -> int:
    suites = None
    if args.suite:
        parts = [args.suite] if isinstance(args.suite, str) else list(args.suite)
        suites = []
        for part in parts:
            suites.extend(s.strip() for s in part.split(",") if s.strip())
    try:
        results = verify_mod.run_checks(
            g=args.g, t=args.t, suites=suites, bond_transform=_VERIFY_BOND_TRANSFORM
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    table = verify_mod.summary_table(results, g=float(args.g), t=float(args.t))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(table + "\n")
    sys.stdout.write(table + "\n")
    return 0 if all(r.passed for r in results) else 1


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "observables": cmd_observables,
    "skin": cmd_skin,
    "hcb-compare": cmd_hcb_compare,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args = _merge_config(args)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
