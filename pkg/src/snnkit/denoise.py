"""Image denoising as joint labeling over a 4-connected pixel grid.

Pixel denoising labels every noisy pixel with an RGB color, trading
fidelity to the observed color against color distance along grid edges
(unit weights, Euclidean RGB).  Two label spaces are compared: the full
{0..255}^3 cube, and the colors present in the noisy image itself; the
latter is exactly what nearest-label pruning of the cube produces, so the
ratio of the two achieved costs is an empirical pruning gap.

Patch denoising reconstructs the right half of an image from clean 5x5
patches of the left half, scoring database patches against each noisy
patch and its four axis neighbors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import SnnInstance, make_instance
from .graphs import grid_graph
from .inn import Stage2Solver, inn_solve
from .metric import EuclideanSpace, LatticeBox
from .treesolve import tree_labeling_solve

PATCH = 5


@dataclass(frozen=True)
class NoiseConfig:
    kind: str = "salt-pepper"   # salt-pepper | gaussian | none
    density: float = 0.05       # per-channel corruption probability
    sigma: float = 10.0         # gaussian std on the 0..255 scale
    seed: int = 42

    def __post_init__(self):
        if self.kind not in ("salt-pepper", "gaussian", "none"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.density <= 1.0:
            raise ValueError("density must be in [0, 1]")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")


def add_noise(img: np.ndarray, cfg: NoiseConfig) -> np.ndarray:
    """Corrupt an image; each channel value is hit independently."""
    a = np.asarray(img)
    if a.dtype != np.uint8 or a.ndim != 3 or a.shape[2] != 3:
        raise ValueError("expected a (h, w, 3) uint8 image")
    if cfg.kind == "none":
        return a.copy()
    rng = np.random.default_rng(cfg.seed)
    if cfg.kind == "salt-pepper":
        out = a.copy()
        hit = rng.random(a.shape) < cfg.density
        white = rng.random(a.shape) < 0.5
        out[hit & white] = 255
        out[hit & ~white] = 0
        return out
    noisy = a.astype(float) + rng.normal(0.0, cfg.sigma, size=a.shape)
    return np.clip(np.rint(noisy), 0, 255).astype(np.uint8)


def pixel_instance(img: np.ndarray, label_space: str = "full") -> SnnInstance:
    """Joint-labeling instance of an image; queries are its pixel colors."""
    a = np.asarray(img)
    if a.ndim != 3 or a.shape[2] != 3:
        raise ValueError("expected a (h, w, 3) image")
    h, w = a.shape[:2]
    queries = a.reshape(-1, 3).astype(float)
    if label_space == "full":
        labels = LatticeBox(0, 255, 3)
    elif label_space == "image":
        labels = np.unique(queries, axis=0)
    else:
        raise ValueError(f"unknown label space {label_space!r}")
    return make_instance(EuclideanSpace(3), labels, queries, grid_graph(w, h))


@dataclass(eq=False)
class PixelRun:
    image: np.ndarray
    nn_cost: float
    pw_cost: float
    total: float
    label_space: str
    seed: int


def denoise_pixels(img: np.ndarray, label_space: str = "image",
                   rng_seed: int = 42, stage2: Stage2Solver | None = None) -> PixelRun:
    """Denoise one image over the chosen label space.

    The full cube is solved directly by tree descent over the lattice; the
    image palette goes through the pruning pipeline (the palette is what
    pruning the cube keeps).  Reported costs are true Euclidean objectives.
    """
    h, w = np.asarray(img).shape[:2]
    inst = pixel_instance(img, "full")
    if stage2 is None:
        stage2 = Stage2Solver(kind="tree", rng_seed=rng_seed)
    rng_seed = stage2.rng_seed
    if label_space == "full":
        a = tree_labeling_solve(inst, rng_seed=rng_seed,
                                descent_passes=stage2.descent_passes,
                                refine_passes=stage2.refine_passes)
    elif label_space == "image":
        a = inn_solve(inst, stage2)
    else:
        raise ValueError(f"unknown label space {label_space!r}")
    out = np.clip(np.rint(np.asarray(a.points, dtype=float)), 0, 255)
    out = out.reshape(h, w, 3).astype(np.uint8)
    return PixelRun(image=out, nn_cost=a.nn_cost, pw_cost=a.pw_cost,
                    total=a.total, label_space=label_space, seed=rng_seed)


@dataclass(eq=False)
class DenoiseReport:
    """Across-seed comparison of the two label spaces on one noisy image."""
    seeds: list[int]
    costs_full: list[float]
    costs_image: list[float]

    @property
    def mean_full(self) -> float:
        return float(np.mean(self.costs_full))

    @property
    def mean_image(self) -> float:
        return float(np.mean(self.costs_image))

    @property
    def spread_full(self) -> float:
        """Relative std in percent."""
        m = self.mean_full
        return float(np.std(self.costs_full) / m * 100) if m else 0.0

    @property
    def spread_image(self) -> float:
        m = self.mean_image
        return float(np.std(self.costs_image) / m * 100) if m else 0.0

    @property
    def empirical_gap(self) -> float:
        return self.mean_image / self.mean_full if self.mean_full else 1.0

    def table(self, name: str = "image") -> str:
        head = f"{'input':<12} {'avg cost (full)':>20} {'avg cost (image)':>20} {'gap':>8}"
        row = (f"{name:<12} {self.mean_full:>14.1f} ±{self.spread_full:>4.1f}% "
               f"{self.mean_image:>14.1f} ±{self.spread_image:>4.1f}% "
               f"{self.empirical_gap:>8.3f}")
        return head + "\n" + row

    def to_dict(self) -> dict:
        return {
            "schema": "denoise-report/1",
            "seeds": list(map(int, self.seeds)),
            "costs_full": self.costs_full,
            "costs_image": self.costs_image,
            "mean_full": self.mean_full,
            "mean_image": self.mean_image,
            "spread_full_pct": self.spread_full,
            "spread_image_pct": self.spread_image,
            "empirical_gap": self.empirical_gap,
        }


def pixel_gap_experiment(clean: np.ndarray, noise: NoiseConfig,
                         seeds=range(42, 62)) -> tuple[np.ndarray, DenoiseReport]:
    """Noise the image once, denoise over both label spaces per seed."""
    noisy = add_noise(clean, noise)
    seeds = list(seeds)
    costs_full, costs_image = [], []
    for s in seeds:
        costs_full.append(denoise_pixels(noisy, "full", rng_seed=s).total)
        costs_image.append(denoise_pixels(noisy, "image", rng_seed=s).total)
    return noisy, DenoiseReport(seeds=seeds, costs_full=costs_full,
                                costs_image=costs_image)


# ---------- patch-level denoising ----------


def _patch_stack(img: np.ndarray) -> tuple[np.ndarray, tuple[int, int]]:
    """All 5x5 patches (stride 1) flattened to rows of 75 floats.

    Row layout is (dy, dx, channel); rows are ordered row-major over the
    patch grid.
    """
    win = np.lib.stride_tricks.sliding_window_view(img, (PATCH, PATCH), axis=(0, 1))
    ph, pw = win.shape[:2]
    rows = win.transpose(0, 1, 3, 4, 2).reshape(ph * pw, PATCH * PATCH * 3).astype(float)
    return rows, (ph, pw)


@dataclass(eq=False)
class PatchReport:
    nn_cost: float
    pw_cost: float
    total: float
    n_db: int
    n_query: int

    def to_dict(self) -> dict:
        return {"schema": "patch-report/1", "nn_cost": self.nn_cost,
                "pw_cost": self.pw_cost, "total": self.total,
                "n_db": self.n_db, "n_query": self.n_query}


def denoise_patches(img: np.ndarray, noise: NoiseConfig | None = None,
                    chunk: int = 512) -> tuple[np.ndarray, np.ndarray, PatchReport]:
    """Reconstruct a noisy right half from clean left-half patches.

    Every right-half patch n (fully inside the right half) picks the
    database patch minimizing squared distance to itself plus one fifth of
    the squared distances to its four axis-adjacent noisy patches.  Pixels
    average over all covering chosen patches.  Returns (noisy, output,
    report); the report's cost is the patch-level objective of the chosen
    assignment: sum of squared distances to the noisy patches plus, per
    adjacent patch pair, the squared distance between the chosen patches.
    """
    a = np.asarray(img)
    if a.dtype != np.uint8 or a.ndim != 3 or a.shape[2] != 3:
        raise ValueError("expected a (h, w, 3) uint8 image")
    h, w = a.shape[:2]
    half = w // 2
    if half < PATCH or w - half < PATCH or h < PATCH:
        raise ValueError(f"image too small; both halves must fit a {PATCH}x{PATCH} patch")

    noise = noise or NoiseConfig()
    noisy = a.copy()
    noisy[:, half:] = add_noise(a[:, half:], noise)

    db, _ = _patch_stack(a[:, :half].copy())
    qs, (ph, pw) = _patch_stack(noisy[:, half:].copy())
    n_db, n_q = len(db), len(qs)

    grid = grid_graph(pw, ph)
    deg = grid.degrees().astype(float)

    # neighbor-blended targets: v_n = q_n + (1/5) sum of adjacent noisy patches
    v = qs * 1.0
    e = grid.edges
    np.add.at(v, e[:, 0], qs[e[:, 1]] / PATCH)
    np.add.at(v, e[:, 1], qs[e[:, 0]] / PATCH)
    coef = 1.0 + deg / PATCH

    sq = np.einsum("ij,ij->i", db, db)
    choice = np.empty(n_q, dtype=np.int64)
    for s in range(0, n_q, chunk):
        block = slice(s, min(n_q, s + chunk))
        g = db @ v[block].T                      # (n_db, b)
        score = sq[:, None] * coef[block][None, :] - 2.0 * g
        choice[block] = np.argmin(score, axis=0)

    chosen = db[choice]
    d_nn = np.einsum("ij,ij->i", chosen - qs, chosen - qs)
    nn_cost = float(d_nn.sum())
    diff = chosen[e[:, 0]] - chosen[e[:, 1]]
    pw_cost = float(np.einsum("ij,ij->i", diff, diff).sum())

    # paste: average every output pixel over the chosen patches covering it
    accum = np.zeros((h, w - half, 3))
    count = np.zeros((h, w - half, 1))
    tiles = chosen.reshape(ph, pw, PATCH, PATCH, 3)
    for dy in range(PATCH):
        for dx in range(PATCH):
            accum[dy:dy + ph, dx:dx + pw] += tiles[:, :, dy, dx]
            count[dy:dy + ph, dx:dx + pw] += 1.0
    right = np.clip(np.floor(accum / count + 0.5), 0, 255).astype(np.uint8)
    out = a.copy()
    out[:, half:] = right
    report = PatchReport(nn_cost=nn_cost, pw_cost=pw_cost,
                         total=nn_cost + pw_cost, n_db=n_db, n_query=n_q)
    return noisy, out, report
