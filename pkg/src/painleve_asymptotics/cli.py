"""Command-line entry point: ``painleve-asymptotics <subcommand> [flags]``.

Exit status is 0 on success, 1 when a validation check fails and 2 on a
usage error.  Every run writes its resolved configuration to ``config.kv`` in
the output directory, and every output file carries the configuration hash.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .harness import fmt

SUBCOMMANDS = ("ladder", "geometry", "boundary", "edge", "corner", "poles", "verify")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str = ""
    m: int = 10
    m_list: str = "10,20"
    x_min: float = 1.0
    x_max: float = 2.0
    t_min: float = -5.0
    t_max: float = 2.0
    points: int = 200
    window: str = ""
    precision: int = 256
    trunc: int = -1          # -1 means K + 12
    delta: float = 0.5
    clearance: float = 0.3
    out: str = "out"
    seed: int = 0
    emit: str = "rational"
    suite: str = "all"

    def hashed_items(self) -> dict:
        # the output directory does not influence any computed value
        return {k: v for k, v in asdict(self).items() if k != "out"}

    def hash(self) -> str:
        from .harness import config_hash
        return config_hash(self.hashed_items())

    def ms(self) -> list[int]:
        try:
            vals = [int(v) for v in self.m_list.replace(" ", ",").split(",") if v]
        except ValueError as exc:
            raise UsageError(f"bad --m-list {self.m_list!r}") from exc
        if not vals or min(vals) < 1:
            raise UsageError("--m-list needs positive integers")
        return vals

    def window_box(self) -> tuple[float, float, float, float] | None:
        if not self.window:
            return None
        try:
            box = tuple(float(v) for v in self.window.replace(",", " ").split())
        except ValueError as exc:
            raise UsageError(f"bad --window {self.window!r}") from exc
        if len(box) != 4 or box[0] >= box[1] or box[2] >= box[3]:
            raise UsageError("--window needs four reals re_min re_max im_min im_max")
        return box

    def n_terms(self) -> int | None:
        return None if self.trunc < 0 else self.trunc


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}
_CASTS = {"int": int, "float": float, "str": str}


def read_config_file(path: str) -> dict:
    out = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELD_TYPES or key == "subcommand":
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CASTS[_FIELD_TYPES[key]](value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: bad value for {key}") from exc
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="painleve-asymptotics",
                description="Rational Painleve-II functions and their large-degree asymptotics.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--m", type=int)
    p.add_argument("--m-list", dest="m_list")
    p.add_argument("--x-min", type=float)
    p.add_argument("--x-max", type=float)
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--window", nargs=4, type=float, metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"))
    p.add_argument("--precision", type=int, help="working precision in bits (default 256)")
    p.add_argument("--trunc", type=int, help="series truncation N (default K + 12)")
    p.add_argument("--delta", type=float, help="hole radius in units of epsilon (default 0.5)")
    p.add_argument("--clearance", type=float, help="pole clearance in the corner variable (default 0.3)")
    p.add_argument("--out", help="output directory (default ./out)")
    p.add_argument("--config", help="key=value file; flags override its entries")
    p.add_argument("--seed", type=int)
    p.add_argument("--emit", choices=("rational", "roots"))
    p.add_argument("--suite")
    return p


def resolve(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(subcommand=args.subcommand)
    if args.config:
        for k, v in read_config_file(args.config).items():
            setattr(cfg, k, v)
    for k in _FIELD_TYPES:
        if k == "subcommand":
            continue
        v = getattr(args, k, None)
        if v is None:
            continue
        if k == "window":
            v = " ".join(repr(float(w)) for w in v)
        setattr(cfg, k, v)
    if cfg.m < 1:
        raise UsageError("--m must be positive")
    if cfg.points < 1:
        raise UsageError("--points must be positive")
    if cfg.precision < 64:
        raise UsageError("--precision must be at least 64 bits")
    if cfg.delta <= 0:
        raise UsageError("--delta must be positive")
    return cfg


# --- output ------------------------------------------------------------------------

class Writer:
    def __init__(self, cfg: RunConfig):
        self.cfg = cfg
        self.dir = Path(cfg.out)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.tag = cfg.hash()
        self.kv("config.kv", cfg.hashed_items())

    def text(self, name: str, body: str, kv: bool = False) -> Path:
        path = self.dir / name
        head = f"config_hash={self.tag}" if kv else f"# config_hash={self.tag}"
        path.write_text(f"{head}\n{body}")
        return path

    def csv(self, name: str, header: str, rows) -> Path:
        from .harness import fmt
        body = header + "\n" + "".join(",".join(fmt(v) for v in row) + "\n" for row in rows)
        return self.text(name, body)

    def kv(self, name: str, items: dict) -> Path:
        from .harness import fmt
        path = self.dir / name
        lines = [f"config_hash={self.tag}"] + [f"{k}={fmt(v)}" for k, v in items.items()]
        path.write_text("\n".join(lines) + "\n")
        return path


# --- subcommands -------------------------------------------------------------------

def run_ladder(cfg: RunConfig, w: Writer) -> int:
    from . import harness
    from .ladder import dumps
    st = harness.ladder_state(cfg.m)
    if cfg.emit == "rational":
        w.text(f"U_{cfg.m}.txt", dumps(cfg.m, st.u))
        w.text(f"V_{cfg.m}.txt", dumps(cfg.m, st.v))
    else:
        rows = [(y, 1) for y in harness.u_zeros(cfg.m, cfg.precision)]
        rows += [(y, -1) for y in harness.u_poles(cfg.m, cfg.precision)]
        w.csv(f"P_{cfg.m}_poles.csv", "re_y,im_y,residue", rows)
    print(f"m={cfg.m} degree(num)={len(st.u.n) - 1} degree(den)={len(st.u.d) - 1}")
    return 0


def _grid(cfg: RunConfig) -> list[complex]:
    import numpy as np
    box = cfg.window_box()
    if box is None:
        return [complex(x) for x in np.linspace(cfg.x_min, cfg.x_max, cfg.points)]
    side = max(2, int(math.isqrt(cfg.points)))
    return [complex(a, b) for b in np.linspace(box[2], box[3], side) for a in np.linspace(box[0], box[1], side)]


def run_geometry(cfg: RunConfig, w: Writer) -> int:
    from . import geometry as geo
    rows, skipped = [], 0
    for x in _grid(cfg):
        try:
            sd = geo.spectral_data(x, full=True)
        except geo.BranchError:
            skipped += 1
            continue
        rows.append((x, sd.S, sd.Delta, sd.a, sd.b, sd.z_star, sd.r_star, sd.t_star, sd.ell,
                     sd.lam, sd.mu, sd.frak_c, sd.frak_d))
    names = ("x", "S", "Delta", "a", "b", "z_star", "r_star", "t_star", "ell", "lambda", "mu", "c", "d")
    header = ",".join(f"re_{n},im_{n}" for n in names)
    w.csv("geometry.csv", header, rows)
    w.kv("geometry.kv", {"rows": len(rows), "skipped": skipped})
    print(f"rows={len(rows)} skipped={skipped}")
    return 0


def run_boundary(cfg: RunConfig, w: Writer) -> int:
    from .acceptance import boundary
    res = boundary(cfg.points)
    w.text("boundary.csv", res.artifacts["boundary.csv"])
    w.kv("boundary.kv", res.details)
    print(f"x_e={fmt(res.details['x_e'])}")
    print(f"corner_angle={fmt(res.details['corner_angle'])}")
    print(f"failed_checks={res.details['failed_checks']}")
    return 0 if res.passed else 1


def run_edge(cfg: RunConfig, w: Writer) -> int:
    from . import harness
    rep = harness.compare_edge(cfg.ms(), cfg.x_min, cfg.x_max, cfg.points, cfg.delta, cfg.n_terms(),
                               families=("U", "V", "P", "Q"), precision_bits=cfg.precision)
    w.text("edge_compare.csv", rep.csv_text())
    w.text("edge_compare.kv", rep.summary_text(), kv=True)
    print(rep.summary_text(), end="")
    return 0


def run_corner(cfg: RunConfig, w: Writer) -> int:
    from . import harness
    rep = harness.compare_corner(cfg.ms(), cfg.t_min, cfg.t_max, cfg.points, cfg.clearance,
                                 families=("U", "V", "P", "Q"), precision_bits=cfg.precision)
    w.text("corner_compare.csv", rep.csv_text())
    w.text("corner_compare.kv", rep.summary_text(), kv=True)
    print(rep.summary_text(), end="")
    return 0


def run_poles(cfg: RunConfig, w: Writer) -> int:
    from . import harness
    from . import painleve_one as pi1
    from .ladder import to_x
    fld = pi1.default_field()
    w.csv("poles_Y.csv", "re_t0,im_t0,re_c2,im_c2,re_h_residue,im_h_residue",
          [(p.t0, complex(p.y_coeffs[2]), complex(p.h_residue)) for p in fld.poles])
    exact = [(to_x(y, cfg.m), 1) for y in harness.u_zeros(cfg.m, cfg.precision)]
    exact += [(to_x(y, cfg.m), -1) for y in harness.u_poles(cfg.m, cfg.precision)]
    w.csv(f"poles_P{cfg.m}.csv", "re_x,im_x,residue", exact)
    pr = harness.edge_pole_pairing(cfg.m)
    rows = []
    for i, j, d in pr.pairing.pairs:
        x, n, alpha = pr.predicted[j]
        rows.append((n, alpha, x, pr.actual[i], d))
    w.csv(f"lattice_U{cfg.m}.csv", "n,alpha,re_pred,im_pred,re_actual,im_actual,distance", rows)
    summary = {"Y_poles": len(fld.poles), "m": cfg.m, **pr.pairing.summary("lattice")}
    w.kv("poles.kv", summary)
    for k, v in summary.items():
        print(f"{k}={fmt(v)}")
    return 0


def run_verify(cfg: RunConfig, w: Writer) -> int:
    import time
    from . import acceptance
    try:
        runners = acceptance.criterion_runners(cfg.seed)
        numbers = acceptance.SUITES[cfg.suite]
    except KeyError as exc:
        raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(acceptance.SUITES)}") from exc
    lines, ok = [], True
    for k in numbers:
        res = runners[k]()
        w.text(f"criterion_{k}.kv", res.report_text(), kv=True)
        for name, body in res.artifacts.items():
            w.text(f"criterion_{k}_{name}", body)
        lines.append(res.line())
        ok = ok and res.passed
        print(res.line(), flush=True)
        print(f"  time {res.seconds:.1f}s", file=sys.stderr, flush=True)
    w.text("verify.txt", "".join(l + "\n" for l in lines))
    return 0 if ok else 1


RUNNERS = {"ladder": run_ladder, "geometry": run_geometry, "boundary": run_boundary, "edge": run_edge,
           "corner": run_corner, "poles": run_poles, "verify": run_verify}


def dispatch(argv) -> int:
    from .harness import HarnessError
    try:
        cfg = resolve(list(argv))
        return RUNNERS[cfg.subcommand](cfg, Writer(cfg))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except HarnessError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
