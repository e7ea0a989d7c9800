"""Command-line driver.

Exit codes: 0 pass, 1 verification failure, 2 configuration or parse error,
3 method misuse.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path
from typing import Any, Sequence

from . import aut, deform, hopf, stem_slice
from .quat_core import Quaternion
from .series import OrderedSeries, eval_series
from .verify import ACCEPTANCE_GRID, GridRow, verify_grid

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_MISUSE = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# deterministic output


def dumps(obj: Any) -> str:
    """JSON with sorted keys and floats at 17 significant digits; non-finite floats become null."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format(obj, ".17g") if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = (f"{json.dumps(str(k))}: {dumps(v)}" for k, v in sorted(obj.items(), key=lambda kv: str(kv[0])))
        return "{" + ", ".join(items) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if hasattr(obj, "item"):
        return dumps(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format(v, ".17g") if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _qstr(q: Quaternion) -> str:
    return ";".join(format(c + 0.0, ".17g") for c in q.to_list())


# ---------------------------------------------------------------------------
# parsing


def parse_quaternion(text: Any) -> Quaternion:
    """``"0.5"`` is real 0.5; ``"w,x,y,z"`` gives all four components. Lists are accepted from configs."""
    if isinstance(text, Quaternion):
        return text
    if isinstance(text, (int, float)):
        return Quaternion(float(text))
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = [p for p in str(text).split(",")]
    try:
        vals = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"cannot parse quaternion {text!r}") from exc
    if len(vals) == 1:
        return Quaternion(vals[0])
    if len(vals) == 4:
        return Quaternion(*vals)
    raise ConfigError(f"quaternion needs 1 or 4 components, got {text!r}")


def parse_quaternion_list(text: str) -> list[Quaternion]:
    return [parse_quaternion(t) for t in text.split(";") if t.strip()]


DEFAULTS: dict[str, Any] = {
    "p": 1,
    "alpha": None,
    "beta": None,
    "lambda": 0.0,
    "degree": None,
    "samples": None,
    "seed": None,
    "atol": 1e-12,
    "rtol": 1e-10,
    "sv_tol": aut.DEFAULT_SV_TOL,
    "out": None,
    "format": "json",
}


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    """Defaults, then the JSON config file, then explicit flags."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            cfg.update(json.loads(Path(args.config).read_text()))
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    for key, val in vars(args).items():
        if val is not None and key not in ("config", "func", "command"):
            cfg[key] = val
    if cfg.get("seed") is None:
        env = os.environ.get("SLICEQUAT_SEED")
        try:
            cfg["seed"] = int(env) if env else 0
        except ValueError as exc:
            raise ConfigError(f"SLICEQUAT_SEED must be an integer, got {env!r}") from exc
    return cfg


def hopf_params(cfg: dict[str, Any]) -> hopf.HopfParams:
    if cfg.get("alpha") is None and cfg.get("beta") is None:
        raise ConfigError("need --alpha and/or --beta")
    p = int(cfg["p"])
    beta = parse_quaternion(cfg["beta"] if cfg.get("beta") is not None else cfg["alpha"])
    alpha = parse_quaternion(cfg["alpha"]) if cfg.get("alpha") is not None else beta**p
    return hopf.HopfParams(p, alpha, beta, parse_quaternion(cfg.get("lambda", 0.0)))


# ---------------------------------------------------------------------------
# commands


def cmd_classify(cfg: dict[str, Any]) -> int:
    params = hopf_params(cfg)
    c = hopf.classify(params, atol=float(cfg["atol"]))
    report = {
        "case": str(c.case),
        "reason": c.reason,
        "params": params.to_json(),
        "constraint_defect": ((params.alpha - params.beta**params.p) * params.lam).norm(),
    }
    print(str(c.case))
    if cfg.get("out"):
        Path(cfg["out"]).write_text(dumps(report) + "\n")
    if c.case is hopf.HopfCase.INVALID:
        print(c.reason, file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def cmd_autdim(cfg: dict[str, Any]) -> int:
    params = hopf_params(cfg)
    if hopf.classify(params).case is hopf.HopfCase.INVALID:
        print(f"invalid parameters: {hopf.classify(params).reason}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        rep = aut.aut_dimension(
            params,
            method=cfg.get("method") or "auto",
            degree=cfg.get("degree"),
            samples=cfg.get("samples"),
            seed=int(cfg["seed"]),
            sv_tol=float(cfg["sv_tol"]),
        )
    except aut.MethodError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_MISUSE
    if cfg["format"] == "csv":
        text = _csv_text(
            ["case", "alpha", "beta", "lambda", "p", "nullity", "expected", "pass"],
            [[str(rep.case), _qstr(params.alpha), _qstr(params.beta), _qstr(params.lam), params.p,
              rep.nullity, ";".join(map(str, sorted(rep.expected))), rep.passed]],
        )
    else:
        text = dumps(rep.to_json())
    _emit(text, cfg.get("out"))
    return EXIT_OK if rep.passed else EXIT_FAIL


def _grid_from_config(cfg: dict[str, Any]) -> list[GridRow]:
    grid = cfg.get("grid")
    if grid is None:
        return list(ACCEPTANCE_GRID)
    rows = []
    for i, entry in enumerate(grid):
        params = hopf_params({**DEFAULTS, **entry})
        exp = entry.get("expected")
        if exp is not None:
            exp = frozenset([exp] if isinstance(exp, int) else exp)
        rows.append(GridRow(entry.get("label", f"row{i}"), params, exp))
    return rows


def cmd_verify_theorems(cfg: dict[str, Any]) -> int:
    rows = _grid_from_config(cfg)
    results = verify_grid(rows, seed=int(cfg["seed"]), sv_tol=float(cfg["sv_tol"]))
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(
            f"{status}  {r.label:<32} case={r.case!s:<4} nullity={r.nullities} expected={sorted(r.expected)} "
            f"gap={r.min_gap:.1e} fixed_point_free={r.fixed_point_free} iterate_err={r.iterate_error:.1e}",
            file=sys.stderr,
        )
    n_pass = sum(r.passed for r in results)
    print(f"{n_pass}/{len(results)} rows passed", file=sys.stderr)
    if cfg.get("out"):
        if cfg["format"] == "csv":
            text = _csv_text(
                ["case", "alpha", "beta", "lambda", "p", "nullity", "expected", "pass"],
                [[str(r.case), _qstr(r.params.alpha), _qstr(r.params.beta), _qstr(r.params.lam), r.params.p,
                  r.nullity, ";".join(map(str, sorted(r.expected))), r.passed] for r in results],
            )
        else:
            text = dumps({"rows": [r.to_json() for r in results], "passed": n_pass, "total": len(results)})
        Path(cfg["out"]).write_text(text if text.endswith("\n") else text + "\n")
    return EXIT_OK if n_pass == len(results) else EXIT_FAIL


def _family(cfg: dict[str, Any]) -> deform.FamilyParams:
    kind = str(cfg.get("kind") or "2")
    kind = {"1": "A1_to_A3", "2": "A21_to_B"}.get(kind, kind)
    if kind == "A1_to_A3":
        return deform.FamilyParams(kind, alpha=parse_quaternion(cfg.get("alpha") if cfg.get("alpha") is not None else 0.5))
    p = int(cfg["p"]) if cfg.get("p") not in (None, 1) else 2
    return deform.FamilyParams(kind, p=p, beta=parse_quaternion(cfg.get("beta") if cfg.get("beta") is not None else 0.5))


def cmd_scan_family(cfg: dict[str, Any]) -> int:
    try:
        family = _family(cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    lam_text = cfg.get("lambdas")
    if lam_text is None:
        lambdas = [Quaternion(), Quaternion(0, 0, 1, 0)]
    elif isinstance(lam_text, list):
        lambdas = [parse_quaternion(l) for l in lam_text]
    else:
        lambdas = parse_quaternion_list(lam_text)
    if not lambdas:
        raise ConfigError("empty lambda list")
    rows = deform.dimension_scan(
        family, lambdas, degree=cfg.get("degree"), samples=cfg.get("samples"),
        seed=int(cfg["seed"]), sv_tol=float(cfg["sv_tol"]),
    )
    if cfg["format"] == "json":
        text = dumps({"kind": family.kind, "rows": [r.to_json() for r in rows]})
    else:
        text = _csv_text(
            ["lambda", "case", "nullity", "expected", "pass", "slice_regular_family"],
            [[_qstr(r.lam), str(r.case), r.nullity, ";".join(map(str, sorted(r.expected))), r.passed,
              r.slice_regular_family] for r in rows],
        )
    _emit(text, cfg.get("out"))
    return EXIT_OK if all(r.passed or not r.asserted for r in rows) else EXIT_FAIL


def cmd_orbit(cfg: dict[str, Any]) -> int:
    params = hopf_params(cfg)
    if hopf.classify(params).case is hopf.HopfCase.INVALID:
        raise ConfigError(hopf.classify(params).reason)
    a, b = parse_quaternion_list(cfg["a"]), parse_quaternion_list(cfg["b"])
    if len(a) != 2 or len(b) != 2:
        raise ConfigError("points are given as 'z;w' with quaternions z and w")
    k = hopf.orbit_equivalent(params, a, b, k_max=int(cfg.get("k_max", 10)), tol=float(cfg.get("tol", 1e-9)))
    _emit(dumps({"k": k, "equivalent": k is not None}), cfg.get("out"))
    return EXIT_OK if k is not None else EXIT_FAIL


def cmd_stem_check(cfg: dict[str, Any]) -> int:
    if cfg.get("poly"):
        try:
            terms = json.loads(Path(cfg["poly"]).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read polynomial {cfg['poly']}: {exc}") from exc
        degree = max((int(t["h"]) + int(t["k"]) for t in terms), default=0)
        S = OrderedSeries.from_json(degree, terms)
    else:
        S = OrderedSeries(2, {(1, 1): Quaternion(0.3, -0.2, 0.5, 0.1)})
    box = stem_slice.Box((-0.35, 0.35), 0.35, (-0.35, 0.35), 0.35)
    F = stem_slice.stem_from_series(S, box)
    seed = int(cfg["seed"])
    parity = stem_slice.parity_residual(F, samples=int(cfg.get("samples") or 50), seed=seed)
    import numpy as np

    rng = np.random.default_rng(seed)
    dbar = 0.0
    slice_err = 0.0
    for z1, z2 in box.sample(rng, 20):
        dbar = max(dbar, *stem_slice.dbar_residual(F, z1, z2, 1e-4))
        x = stem_slice.SlicePoint.of(
            Quaternion(z1.real) + Quaternion.from_array(_unit(rng)) * abs(z1.imag),
            Quaternion(z2.real) + Quaternion.from_array(_unit(rng)) * abs(z2.imag),
        )
        slice_err = max(slice_err, (stem_slice.slice_eval(F, x) - eval_series(S, x.x1, x.x2)).norm())
    ok = parity <= 1e-12 and dbar <= 1e-8 and slice_err <= 1e-10
    _emit(dumps({"parity_residual": parity, "dbar_residual": dbar, "slice_vs_series": slice_err, "pass": ok}), cfg.get("out"))
    return EXIT_OK if ok else EXIT_FAIL


def _unit(rng) -> list[float]:
    import numpy as np

    v = rng.standard_normal(3)
    v /= np.linalg.norm(v)
    return [0.0, *v]


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file of defaults (flags override it)")
    common.add_argument("--degree", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int, help="default: $SLICEQUAT_SEED or 0")
    common.add_argument("--atol", type=float)
    common.add_argument("--rtol", type=float)
    common.add_argument("--sv-tol", dest="sv_tol", type=float)
    common.add_argument("--out")
    common.add_argument("--format", choices=("json", "csv"))

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--p", type=int)
    params.add_argument("--alpha", help="quaternion: 'w' or 'w,x,y,z'")
    params.add_argument("--beta")
    params.add_argument("--lambda", dest="lambda")

    parser = argparse.ArgumentParser(prog="slicequat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, params], help="case of the Hopf parameters")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("autdim", parents=[common, params], help="automorphism group dimension")
    p.add_argument("--method", choices=("auto", "direct", "linearized"))
    p.set_defaults(func=cmd_autdim)

    p = sub.add_parser("verify-theorems", parents=[common], help="run the verification grid")
    p.set_defaults(func=cmd_verify_theorems)

    p = sub.add_parser("scan-family", parents=[common, params], help="dimensions along a deformation family")
    p.add_argument("--kind", help="1 / A1_to_A3 or 2 / A21_to_B")
    p.add_argument("--lambdas", help="';'-separated quaternions")
    p.set_defaults(func=cmd_scan_family)

    p = sub.add_parser("orbit", parents=[common, params], help="orbit equivalence of two points")
    p.add_argument("--a", required=True, help="'z;w'")
    p.add_argument("--b", required=True, help="'z;w'")
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("stem-check", parents=[common], help="parity, holomorphy and slice checks of a polynomial stem")
    p.add_argument("--poly", help="JSON list of {h, k, coeff}")
    p.set_defaults(func=cmd_stem_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve(args)
        return args.func(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
