"""Batch experiment runner.

    qcmap transform|solve|verify|sweep --config <path> [--out <dir>]
                                       [--seed <int>] [--grid-n <int>]

Exit codes: 0 all checks passed, 1 at least one hard check failed, 2 config
error.  Outputs are deterministic for a fixed config and seed (JSON is
key-sorted, CSV uses a fixed float format, SVG carries no timestamps).
``QCMAP_THREADS`` caps the numerical thread pools.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

__all__ = ["main"]

_FLOAT = "%.12g"


def _fail_config(msg: str) -> int:
    print(f"config error: {msg}", file=sys.stderr)
    return 2


def _load_config(path: str) -> dict:
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(f"config file {p} does not exist")
    return json.loads(p.read_text())


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=1) + "\n")


def _grid_from_config(cfg: dict, grid_n):
    from .grid import make_grid

    g = cfg.get("grid", {})
    n = int(grid_n) if grid_n else int(g.get("n", 1024))
    return make_grid(complex(*g.get("center", [0.0, 0.0])), float(g.get("half_width", 4.0)), n)


def _cmd_transform(cfg: dict, out: Path, seed: int, grid_n) -> int:
    import numpy as np

    from . import operators
    from .domains import Disc, domain_from_json, indicator, interior_mask
    from .grid import read_field, write_field
    from .svgplot import heatmap_svg

    grid = _grid_from_config(cfg, grid_n)
    spec = cfg.get("input", {})
    dom = None
    if "field" in spec:
        f = read_field(spec["field"])
    elif "domain" in spec:
        dom = domain_from_json(spec["domain"])
        f = indicator(dom, grid, spec.get("indicator", "center"))
    else:
        f = indicator(Disc(0.0, 1.0), grid, "center")
        dom = Disc(0.0, 1.0)
    op = cfg.get("operator", "beurling")
    if op == "beurling":
        result = operators.beurling(f)
        kernel = operators.KernelDescriptor(degree=1)
    elif op == "cauchy":
        result = operators.cauchy(f)
        kernel = None
    elif isinstance(op, dict) and "power" in op:
        result = operators.beurling_power(f, int(op["power"]))
        kernel = operators.KernelDescriptor(degree=int(op["power"]))
    else:
        return _fail_config(f"unknown operator {op!r}")
    write_field(result, out / "output")
    (out / "output_magnitude.svg").write_text(heatmap_svg(np.abs(result.values), f"|{op}|"))

    rows = []
    oracle = cfg.get("oracle", "auto")
    if oracle != "none" and dom is not None and kernel is not None:
        rng = np.random.default_rng(seed)
        n_probes = int(cfg.get("probes", 12))
        z = grid.nodes()
        ok = ~interior_mask(dom, grid, 0.0)
        ok &= dom.boundary_distance_points(z) > 8.0 * grid.spacing
        # periodic-image error grows like |z|^4; stay in the calibrated annulus
        ok &= np.abs(z - grid.center) < 0.4 * grid.half_width
        cand = np.flatnonzero(ok.ravel())
        pick = rng.choice(cand, size=min(n_probes, cand.size), replace=False)
        probes = z.ravel()[pick]
        got = result.values.ravel()[pick]
        if isinstance(dom, Disc) and kernel.degree == 1 and oracle in ("auto", "disc"):
            want = np.asarray(operators.disc_oracle(dom.center, dom.radius, probes))
        else:
            member = dom.contains_points

            def ffun(y, member=member):
                return member(y).astype(complex)

            want = np.array(
                [
                    operators.pv_quadrature(
                        ffun, kernel, complex(p), dom.bounding_radius() + abs(p) + 1.0, grid.spacing / 2.0
                    )
                    for p in probes
                ]
            )
        for p, a, b in zip(probes, got, want):
            denom = max(abs(b), 1e-12)
            rows.append((p.real, p.imag, a.real, a.imag, b.real, b.imag, abs(a - b) / denom))
        with open(out / "oracle_comparison.csv", "w") as fh:
            fh.write("probe_re,probe_im,fft_re,fft_im,oracle_re,oracle_im,rel_err\n")
            for row in rows:
                fh.write(",".join(_FLOAT % v for v in row) + "\n")
    print(f"transform: wrote {out}/output.{{json,csv}} and heatmap; {len(rows)} oracle probes")
    return 0


def _cmd_solve(cfg_path: str, out: Path, seed: int, grid_n) -> int:
    import numpy as np

    from .grid import make_grid
    from .solve import load_problem, neumann_solve, save_solution
    from .svgplot import heatmap_svg

    mu, grid, options = load_problem(cfg_path)
    if grid_n:
        grid = make_grid(grid.center, grid.half_width, int(grid_n))
    sol = neumann_solve(mu, grid, tol=options["tol"], max_terms=options["max_terms"])
    save_solution(sol, out)
    (out / "h_magnitude.svg").write_text(heatmap_svg(np.abs(sol.h.values), "|h|"))
    print(
        f"solve: {sol.terms_used} terms, residual {sol.residual:.3e}; "
        f"solution archive in {out}"
    )
    return 0


def _cmd_verify(cfg: dict, out: Path, seed: int, grid_n=None) -> int:
    from .verify import run_recipe

    recipe = cfg.get("recipe")
    if not recipe:
        return _fail_config("verify config needs a 'recipe' name")
    quick = bool(cfg.get("quick", False)) or (grid_n is not None and int(grid_n) <= 256)
    try:
        verdict = run_recipe(recipe, seed=seed, quick=quick)
    except KeyError as exc:
        return _fail_config(str(exc))
    _write_json(out / "verdict.json", verdict)
    for c in verdict["checks"]:
        tag = "PASS" if c["passed"] else ("FAIL" if c["hard"] else "note")
        print(f"[{tag}] {c['name']}: {c['value']:.6g} ({c['threshold']})")
    print(f"verify {recipe}: {'PASS' if verdict['passed'] else 'FAIL'}; verdict in {out}/verdict.json")
    return 0 if verdict["passed"] else 1


def _cmd_sweep(cfg: dict, out: Path, seed: int, grid_n) -> int:
    import numpy as np

    from .domains import Disc, Square
    from .grid import make_grid, sample
    from .regularity import bilipschitz_constants, holder_seminorm
    from .solve import BeltramiCoefficient, MapEvaluator, neumann_solve
    from .svgplot import loglog_svg
    from . import operators

    recipe = cfg.get("recipe")
    sizes = [int(v) for v in cfg.get("sizes", [128, 256, 512])]
    if grid_n:
        sizes = [s for s in sizes if s <= int(grid_n)] or [int(grid_n)]
    lam = float(cfg.get("lambda", 0.9))
    trace = []
    if recipe in ("disc-lower-trace", "square-lower-trace"):
        dom = Disc(0.0, 1.0) if recipe.startswith("disc") else Square(0.0, 2.0)
        for n in sizes:
            grid = make_grid(0.0, 4.0, n)
            sol = neumann_solve(BeltramiCoefficient(((dom, lam),)), grid)
            rep = bilipschitz_constants(MapEvaluator(sol), dom, pairs=4000, seed=seed)
            trace.append((n, rep.lower))
        label = f"lower bilipschitz, lambda={lam}"
    elif recipe == "cusp-seminorm-trace":
        eps = float(cfg.get("eps", 0.75))
        dom = Disc(0.0, 2.0)
        for n in sizes:
            g0 = make_grid(0.0, 4.0, n)
            g = make_grid(0.5 * g0.spacing * (1 + 1j), 4.0, n)
            f = sample(operators.drop_example_oracle, g)
            est = holder_seminorm(f, dom, eps, pairs=max(1000, n * n // 8), seed=seed)
            trace.append((n, est.value))
        label = f"holder seminorm eps={eps}"
    else:
        return _fail_config(f"unknown sweep recipe {recipe!r}")
    with open(out / "trace.csv", "w") as fh:
        fh.write("n,value\n")
        for n, v in trace:
            fh.write(f"{n}," + (_FLOAT % v) + "\n")
    (out / "trace.svg").write_text(loglog_svg({label: trace}, f"sweep: {recipe}"))
    ratios = [b / a for (_, a), (_, b) in zip(trace[:-1], trace[1:])]
    flagged = len(ratios) >= 2 and all(r >= 1.5 for r in ratios[-2:])
    _write_json(
        out / "summary.json",
        {
            "recipe": recipe,
            "seed": seed,
            "sizes": sizes,
            "values": [v for _, v in trace],
            "growth_flagged": flagged,
        },
    )
    print(f"sweep {recipe}: trace {['%.4g' % v for _, v in trace]}, growth_flagged={flagged}")
    return 0


def main(argv=None) -> int:
    threads = os.environ.get("QCMAP_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, threads)

    parser = argparse.ArgumentParser(prog="qcmap", description=__doc__)
    parser.add_argument("command", choices=["transform", "solve", "verify", "sweep"])
    parser.add_argument("--config", required=True, help="experiment JSON (or problem JSON for solve)")
    parser.add_argument("--out", default="qcmap_out", help="output directory")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--grid-n", type=int, default=None, help="override the grid resolution")
    args = parser.parse_args(argv)

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        if args.command == "solve":
            return _cmd_solve(args.config, out, args.seed, args.grid_n)
        cfg = _load_config(args.config)
        if args.command == "transform":
            return _cmd_transform(cfg, out, args.seed, args.grid_n)
        if args.command == "verify":
            return _cmd_verify(cfg, out, args.seed, args.grid_n)
        return _cmd_sweep(cfg, out, args.seed, args.grid_n)
    except (FileNotFoundError, KeyError, ValueError, json.JSONDecodeError) as exc:
        return _fail_config(str(exc))


if __name__ == "__main__":
    sys.exit(main())
