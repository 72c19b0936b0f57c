"""Command-line front end: config files, verification suites, mesh export.

Usage:
    spinim generate      --config cfg.json [--resolution N] [--seed S] [--out DIR]
    spinim verify-lemmas --config cfg.json [--seed S] [--out DIR]
    spinim check         --config cfg.json [--resolution N] [--out DIR]

Config files are single JSON documents with a top-level "version" field; see
`config_schema_doc` or the README for the schema. Exit codes: 0 all checks
pass, 1 verification failure, 2 usage or config error.

Reports are deterministic for a fixed config and seed; wall-clock timings are
kept under a separate "timing" key and omitted entirely with --no-timings so
the remaining document is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bryant, grc
from .clifford import (
    MultiVector,
    bivector_of_skew,
    clifford_exp,
    commutator,
    extended_B,
    mixed_bivector,
)
from .grids import Chart, convergence_order
from .liealg import LieModel, build_sl_n
from .spin_rep import (
    GeodesicFamily,
    SpinorGrid,
    killing_residual,
    killing_residual_canonical,
    morel_dirac_check,
    weierstrass_F,
)
from .surfaces import SurfaceSpec

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

CONFIG_VERSION = 1

PIPELINES = ("bryant", "reconstruct", "verify-lemmas", "check-grc", "gaussmap",
             "killing", "dirac")

SURFACE_PRESETS = {
    "horosphere": SurfaceSpec.horosphere,
    "horosphere-exp-gauge": SurfaceSpec.horosphere_exp_gauge,
    "catenoid-cousin": SurfaceSpec.catenoid_cousin,
    "geodesic-disc": SurfaceSpec.geodesic_disc,
    "non-cmc-control": SurfaceSpec.non_cmc_control,
}


class ConfigError(ValueError):
    """Malformed or inconsistent run configuration."""


def thread_width() -> int:
    """Data-parallel width cap from SPINIM_THREADS (default: available cores)."""
    env = os.environ.get("SPINIM_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return os.cpu_count() or 1


def parallel_map(fn, items):
    width = min(thread_width(), max(1, len(items)))
    if width <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=width) as pool:
        return list(pool.map(fn, items))


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


@dataclass
class RunConfig:
    n: int = 2
    lambda_killing: float | None = None
    pipeline: str = "bryant"
    chart: dict = field(default_factory=lambda: {"n": 33, "half_width": 1.0})
    surface: dict = field(default_factory=lambda: {"preset": "horosphere"})
    tolerances: dict = field(default_factory=dict)
    seed: int = 2024
    output: dict = field(default_factory=dict)

    @staticmethod
    def from_file(path: str | Path) -> "RunConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return RunConfig.from_dict(doc)

    @staticmethod
    def from_dict(doc: dict) -> "RunConfig":
        if doc.get("version") != CONFIG_VERSION:
            raise ConfigError(f"config version must be {CONFIG_VERSION}")
        cfg = RunConfig(
            n=int(doc.get("n", 2)),
            lambda_killing=doc.get("lambda_killing"),
            pipeline=doc.get("pipeline", "bryant"),
            chart=doc.get("chart", {"n": 33, "half_width": 1.0}),
            surface=doc.get("surface", {"preset": "horosphere"}),
            tolerances=doc.get("tolerances", {}),
            seed=int(doc.get("seed", 2024)),
            output=doc.get("output", {}),
        )
        if cfg.pipeline not in PIPELINES:
            raise ConfigError(f"pipeline must be one of {PIPELINES}")
        if cfg.n not in (2, 3):
            raise ConfigError("n must be 2 or 3")
        for name, tol in cfg.tolerances.items():
            if not tol > 0:
                raise ConfigError(f"tolerance {name!r} must be positive")
        size = cfg.chart.get("n", 33)
        if size < 5:
            raise ConfigError("chart sizes must be >= 5 (stencil minimum)")
        return cfg

    def model(self) -> LieModel:
        return build_sl_n(self.n, self.lambda_killing)

    def build_chart(self, resolution: int | None = None) -> Chart:
        c = dict(self.chart)
        if resolution:
            c["n"] = resolution
        if "x_range" in c:
            return Chart.rect(tuple(c["x_range"]), tuple(c["y_range"]),
                              c.get("n", 33), c.get("n", 33))
        return Chart.square(c.get("n", 33), c.get("half_width", 1.0),
                            tuple(c.get("center", (0.0, 0.0))))

    def build_surface(self, chart: Chart) -> SurfaceSpec:
        spec = dict(self.surface)
        if "preset" in spec:
            name = spec["preset"]
            if name not in SURFACE_PRESETS:
                raise ConfigError(f"unknown surface preset {name!r}; "
                                  f"have {sorted(SURFACE_PRESETS)}")
            data = SURFACE_PRESETS[name](chart)
        elif "conformal_factor" in spec:
            ny, nx = chart.ny, chart.nx
            as_grid = lambda v: (np.full((ny, nx), float(v)) if np.isscalar(v)
                                 else np.asarray(v, dtype=float))
            data = SurfaceSpec(
                chart=chart,
                conformal_factor=as_grid(spec["conformal_factor"]),
                mean_curvature=as_grid(spec.get("mean_curvature", 1.0))[None],
                alpha=as_grid(spec.get("alpha", 0.0))[None],
                gamma=as_grid(spec.get("gamma", 0.0))[None],
                name="inline")
        else:
            raise ConfigError("surface must give a 'preset' or inline fields "
                              "('conformal_factor', optionally 'mean_curvature', "
                              "'alpha', 'gamma')")
        for fname, node, size in spec.get("bumps", []):
            data = data.with_bump(fname, (int(node[0]), int(node[1])), float(size))
        return data

    def null_curve(self, chart: Chart) -> bryant.NullCurve | None:
        """Closed-form holomorphic input, bypassing integration."""
        spec = self.surface.get("null_curve")
        if spec is None:
            return None
        if spec.get("preset") == "horosphere":
            poly = bryant.QuaternionPolynomial.horosphere()
        else:
            coeffs = np.array([[complex(re, im) for re, im in row]
                               for row in spec["coeffs"]])
            poly = bryant.QuaternionPolynomial(coeffs)
        return poly.sample(chart)

    def tol(self, name: str, default: float) -> float:
        return float(self.tolerances.get(name, default))


# --------------------------------------------------------------------------
# verification report
# --------------------------------------------------------------------------


@dataclass
class CheckResult:
    check: str
    residual: float
    tol: float
    order: float | None = None
    order_threshold: float | None = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        ok = self.residual <= self.tol
        if self.order is not None and self.order_threshold is not None:
            ok = ok and self.order >= self.order_threshold
        return ok

    def row(self) -> dict:
        row = {"check": self.check, "residual": _round_float(self.residual),
               "tol": self.tol, "pass": self.passed}
        if self.order is not None:
            row["order"] = _round_float(self.order)
            row["order_threshold"] = self.order_threshold
        return row


def _round_float(v: float):
    if v != v:  # NaN
        return "nan"
    if v == float("inf"):
        return "inf"
    return float(f"{v:.12e}")


def write_report(results: list[CheckResult], out_dir: Path, name: str,
                 config_echo: dict, timings: bool) -> Path:
    doc = {
        "version": CONFIG_VERSION,
        "config": config_echo,
        "checks": [r.row() for r in results],
        "pass": all(r.passed for r in results),
    }
    if timings:
        doc["timing"] = {r.check: _round_float(r.elapsed) for r in results}
        doc["timing"]["total"] = _round_float(sum(r.elapsed for r in results))
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def print_results(results: list[CheckResult]):
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  order={r.order:.2f}>={r.order_threshold}" if r.order is not None else ""
        print(f"[{status}] {r.check}: residual={r.residual:.3e} tol={r.tol:.1e}{extra}")


# --------------------------------------------------------------------------
# lemma suites (the appendix oracle suite)
# --------------------------------------------------------------------------


def _random_mv(alg, rng, even_only=False) -> np.ndarray:
    c = rng.normal(size=alg.n_blades) + 1j * rng.normal(size=alg.n_blades)
    if even_only:
        c = np.where(alg.grades % 2 == 0, c, 0.0)
    return c / np.linalg.norm(c)


def _random_bivector(alg, rng, scale=0.5) -> MultiVector:
    c = np.zeros(alg.n_blades, dtype=complex)
    sel = alg.grades == 2
    c[sel] = scale * (rng.normal(size=sel.sum()) + 1j * rng.normal(size=sel.sum()))
    return MultiVector(alg, c)


def lemma_suites(model: LieModel, n_samples: int, seed: int,
                 corrupt_signs: bool = False) -> dict[str, float]:
    """Randomized checks of the skew-operator dictionary and the invariance of
    the extended bilinear form; returns max deviations per suite.

    corrupt_signs flips one entry of the product sign table first (negative
    control for the test harness)."""
    alg = model.algebra
    d = model.d
    rng = np.random.default_rng(seed)
    restore = None
    if corrupt_signs:
        # flip a bivector-times-vector entry (e1e2 · e1), which every suite hits
        restore = alg.sign[3, 1]
        alg.sign[3, 1] = -restore
    try:
        dev = dict.fromkeys(("A1", "A2", "A3", "B1", "B2"), 0.0)

        for _ in range(n_samples):
            # A1: commutator action of the skew bivector
            A = rng.normal(size=(d, d))
            A = A - A.T
            u = bivector_of_skew(alg, A)
            xi = rng.normal(size=d)
            got = commutator(u, MultiVector.vector(alg, xi)).vector_coords()
            dev["A1"] = max(dev["A1"], float(np.abs(got - A @ xi).max()))

            # A2: [u, v] represents the operator commutator
            B = rng.normal(size=(d, d))
            B = B - B.T
            v = bivector_of_skew(alg, B)
            got2 = commutator(u, v) - bivector_of_skew(alg, A @ B - B @ A)
            dev["A2"] = max(dev["A2"], got2.norm())

            # A3: rectangular block map, both expressions and the action
            p = max(1, d - 2)
            tangent = tuple(range(p))
            normal = tuple(range(p, d))
            U = rng.normal(size=(d - p, p))
            mb = mixed_bivector(alg, U, tangent, normal)
            full = np.zeros((d, d))
            full[p:, :p] = U
            full[:p, p:] = -U.T
            dev["A3"] = max(dev["A3"], (mb - bivector_of_skew(alg, full)).norm())
            xi = rng.normal(size=d)
            act = commutator(mb, MultiVector.vector(alg, xi)).vector_coords()
            expect = full @ xi
            dev["A3"] = max(dev["A3"], float(np.abs(act - expect).max()))

        # B1: invariance of the extended form under spin multiplication,
        # plus the infinitesimal bracket-skewness
        n_groups = max(1, n_samples // 20)
        per = max(1, n_samples // n_groups)
        for _ in range(n_groups):
            g = clifford_exp(_random_bivector(alg, rng))
            for _ in range(per):
                a = MultiVector(alg, _random_mv(alg, rng))
                b = MultiVector(alg, _random_mv(alg, rng))
                base = extended_B(a, b)
                dev["B1"] = max(dev["B1"], abs(extended_B(g * a, g * b) - base),
                                abs(extended_B(a * g, b * g) - base))
            Zb = _random_bivector(alg, rng)
            Xb = _random_bivector(alg, rng)
            Yb = _random_bivector(alg, rng)
            dev["B1"] = max(dev["B1"], abs(extended_B(commutator(Zb, Xb), Yb)
                                           + extended_B(Xb, commutator(Zb, Yb))))

        # B2: B(adt X, adt Y) = -(1/(8 lambda)) B(X, Y)
        for _ in range(n_samples):
            X = rng.normal(size=d) + 1j * rng.normal(size=d)
            Y = rng.normal(size=d) + 1j * rng.normal(size=d)
            lhs = extended_B(model.ad_tilde(X), model.ad_tilde(Y))
            rhs = -model.B(X, Y) / (8 * model.lam)
            dev["B2"] = max(dev["B2"], abs(lhs - rhs))
        return dev
    finally:
        if restore is not None:
            alg.sign[1, 2] = restore


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------


def cmd_verify_lemmas(cfg: RunConfig, out_dir: Path, timings: bool,
                      n_samples: int = 1000, corrupt_signs: bool = False) -> int:
    model = cfg.model()
    tol = cfg.tol("lemmas", 1e-10)
    t0 = time.perf_counter()
    dev = lemma_suites(model, n_samples, cfg.seed, corrupt_signs=corrupt_signs)
    dt = (time.perf_counter() - t0) / len(dev)
    results = [CheckResult(check=f"lemma-{k}", residual=v, tol=tol, elapsed=dt)
               for k, v in dev.items()]
    print_results(results)
    write_report(results, out_dir, "lemmas-report.json",
                 {"n": cfg.n, "seed": cfg.seed, "samples": n_samples}, timings)
    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


def _surface_grid(cfg: RunConfig, chart: Chart, model: LieModel,
                  data: SurfaceSpec) -> SpinorGrid:
    """Spinor grid for checks: the null-curve pipeline on CMC-1 data, the
    flat-connection integrator otherwise (forced for negative controls)."""
    H = data.mean_curvature[0]
    if data.normal_rank == 1 and np.max(np.abs(H - 1.0)) < 1e-12 and model.n == 2:
        return bryant.bryant_pipeline(data, model).grid
    return grc.reconstruct(data, model, MultiVector.one(model.algebra), force=True)


def _geodesic_family(cfg: RunConfig, model: LieModel, chart: Chart) -> GeodesicFamily:
    rng = np.random.default_rng(cfg.seed)
    X1 = rng.normal(size=model.d)
    X1 /= np.linalg.norm(X1)
    X2 = rng.normal(size=model.d)
    X2 -= X1 * (X2 @ X1)
    X2 /= np.linalg.norm(X2)
    return GeodesicFamily(model, X1, X2, chart)


def cmd_check(cfg: RunConfig, out_dir: Path, timings: bool,
              resolution: int | None = None) -> int:
    model = cfg.model()
    base = cfg.build_chart(resolution)
    fine = base.refined(2)
    order_min = cfg.tol("order", 1.9)
    results: list[CheckResult] = []

    def timed(name, fn, tol, order_threshold=None):
        t0 = time.perf_counter()
        coarse_res, fine_res = fn()
        order = convergence_order(coarse_res, fine_res) if fine_res is not None else None
        results.append(CheckResult(
            check=name, residual=fine_res if fine_res is not None else coarse_res,
            tol=tol, order=order, order_threshold=order_threshold,
            elapsed=time.perf_counter() - t0))

    if cfg.pipeline == "killing":
        def run():
            def at(chart):
                grid = _geodesic_family(cfg, model, chart).spinor_grid()
                return killing_residual_canonical(grid).max()
            return parallel_map(at, [base, fine])
        timed("killing-canonical", run, tol=cfg.tol("killing", 1e-2),
              order_threshold=order_min)

    elif cfg.pipeline == "check-grc":
        def run_grc():
            data = cfg.build_surface(base)
            rep = grc.grc_residuals(data, model)
            return rep.max_residual(), None
        timed("grc-residuals", run_grc, tol=cfg.tol("grc", 1e-8))

        def run_D():
            data = cfg.build_surface(base)
            return float(grc.grc_residuals(data, model).D_res.max()), None
        timed("grc-D-term", run_D, tol=cfg.tol("D", 1e-10))

    elif cfg.pipeline == "dirac":
        def run_dirac():
            def at(chart):
                data = cfg.build_surface(chart)
                grid = _surface_grid(cfg, chart, model, data)
                rep = morel_dirac_check(grid, data)
                return max(rep.max_dirac(), rep.max_norm_condition())
            return parallel_map(at, [base, fine])
        timed("dirac-characterization", run_dirac, tol=cfg.tol("dirac", 1e-2),
              order_threshold=order_min)

    elif cfg.pipeline == "gaussmap":
        def run_gm():
            def at(chart):
                data = cfg.build_surface(chart)
                grid = _surface_grid(cfg, chart, model, data)
                gm = bryant.gauss_map_holomorphy(grid, data, model, tolerance=1.0)
                return float(gm.cr_residual.max())
            return parallel_map(at, [base, fine])
        timed("gauss-map-holomorphy", run_gm, tol=cfg.tol("gaussmap", 1e-2),
              order_threshold=order_min)

    else:
        raise ConfigError(f"pipeline {cfg.pipeline!r} is not a check pipeline")

    print_results(results)
    write_report(results, out_dir, "check-report.json",
                 {"n": cfg.n, "seed": cfg.seed, "pipeline": cfg.pipeline,
                  "surface": cfg.surface.get("preset", "inline")}, timings)
    return EXIT_PASS if all(r.passed for r in results) else EXIT_FAIL


def write_obj(path: Path, vertices: np.ndarray, faces: list[tuple[int, int, int]]):
    with path.open("w") as fh:
        fh.write("# spinim mesh export\n")
        for v in vertices:
            fh.write(f"v {v[0]:.12g} {v[1]:.12g} {v[2]:.12g}\n")
        for f in faces:
            fh.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")


def write_ply(path: Path, vertices: np.ndarray, faces: list[tuple[int, int, int]]):
    with path.open("w") as fh:
        fh.write("ply\nformat ascii 1.0\n")
        fh.write(f"element vertex {len(vertices)}\n")
        fh.write("property float x\nproperty float y\nproperty float z\n")
        fh.write(f"element face {len(faces)}\n")
        fh.write("property list uchar int vertex_indices\nend_header\n")
        for v in vertices:
            fh.write(f"{v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
        for f in faces:
            fh.write(f"3 {f[0]} {f[1]} {f[2]}\n")


def grid_faces(ny: int, nx: int) -> list[tuple[int, int, int]]:
    """Two triangles per grid quad, row-major vertex numbering."""
    faces = []
    for j in range(ny - 1):
        for i in range(nx - 1):
            a = j * nx + i
            b = a + 1
            c = a + nx
            d = c + 1
            faces.append((a, b, d))
            faces.append((a, d, c))
    return faces


def cmd_generate(cfg: RunConfig, out_dir: Path, timings: bool,
                 resolution: int | None = None) -> int:
    if cfg.pipeline not in ("bryant", "reconstruct"):
        raise ConfigError("generate requires pipeline 'bryant' or 'reconstruct'")
    model = cfg.model()
    chart = cfg.build_chart(resolution)
    t0 = time.perf_counter()

    curve = cfg.null_curve(chart)
    if curve is not None and cfg.pipeline == "bryant":
        mesh = bryant.assemble_F(curve, model)
        residuals = {
            "holomorphy": float(curve.holomorphy_residual().max()),
            "isotropy": float(curve.isotropy_residual().max()),
            "unit": curve.unit_defect(),
        }
    else:
        data = cfg.build_surface(chart)
        if cfg.pipeline == "bryant":
            result = bryant.bryant_pipeline(data, model)
            mesh = result.mesh
            residuals = {
                "structure-equation": float(result.eta.structure_residual().max()),
                "null-holomorphy": float(result.curve.holomorphy_residual().max()),
                "null-isotropy": float(result.curve.isotropy_residual().max()),
                "killing": killing_residual(result.grid, data, model).max(),
            }
        else:
            grid = grc.reconstruct(data, model, MultiVector.one(model.algebra))
            mesh = weierstrass_F(grid)
            residuals = {"killing": killing_residual(grid, data, model).max()}

    out_dir.mkdir(parents=True, exist_ok=True)
    sidecar = {
        "version": CONFIG_VERSION,
        "n": cfg.n,
        "pipeline": cfg.pipeline,
        "chart": {"nx": chart.nx, "ny": chart.ny, "hx": chart.hx, "hy": chart.hy,
                  "x0": chart.x0, "y0": chart.y0},
        "residuals": {k: _round_float(v) for k, v in residuals.items()},
    }
    mesh_tol = cfg.tol("minkowski", 1e-8)
    ok = True
    if mesh.hyper is not None:
        defect = float(mesh.minkowski_defect().max())
        sidecar["minkowski_defect"] = _round_float(defect)
        sidecar["hyperboloid"] = np.round(mesh.hyper, 14).reshape(-1, 4).tolist()
        verts = mesh.ball.reshape(-1, 3)
        if np.max(np.sum(verts ** 2, axis=1)) >= 1.0:
            raise RuntimeError("ball projection left the unit ball")
        faces = grid_faces(chart.ny, chart.nx)
        write_obj(out_dir / "mesh.obj", verts, faces)
        write_ply(out_dir / "mesh.ply", verts, faces)
        ok = defect <= mesh_tol
        if not ok:
            worst = np.unravel_index(np.argmax(mesh.minkowski_defect()),
                                     (chart.ny, chart.nx))
            sidecar["worst_node"] = [int(worst[0]), int(worst[1])]
    else:
        sidecar["F_coefficients"] = np.round(mesh.F, 14).reshape(
            chart.ny * chart.nx, -1).view(float).tolist()
    sidecar["pass"] = bool(ok)
    if timings:
        sidecar["timing"] = {"total": _round_float(time.perf_counter() - t0)}
    (out_dir / "surface.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    print(f"wrote {out_dir}/surface.json"
          + (" + mesh.obj/mesh.ply" if mesh.hyper is not None else ""))
    return EXIT_PASS if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="spinim",
                                description="spinorial surface toolkit for SL_n(C)/SU(n)")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("generate", "verify-lemmas", "check"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True)
        sp.add_argument("--resolution", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--out", default="out")
        sp.add_argument("--timings", dest="timings", action="store_true", default=True)
        sp.add_argument("--no-timings", dest="timings", action="store_false")
        if name == "verify-lemmas":
            sp.add_argument("--samples", type=int, default=1000)
            sp.add_argument("--corrupt-signs", action="store_true",
                            help=argparse.SUPPRESS)  # negative-control harness hook
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_file(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        out_dir = Path(args.out)
        if args.command == "generate":
            return cmd_generate(cfg, out_dir, args.timings, resolution=args.resolution)
        if args.command == "verify-lemmas":
            return cmd_verify_lemmas(cfg, out_dir, args.timings,
                                     n_samples=args.samples,
                                     corrupt_signs=args.corrupt_signs)
        return cmd_check(cfg, out_dir, args.timings, resolution=args.resolution)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (grc.GRCGateError, bryant.StructureEquationError, RuntimeError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
