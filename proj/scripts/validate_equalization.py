#!/usr/bin/env python3
# SPDX-License-Identifier: Apache-2.0
"""Simulation harness for the masked histogram-equalization semantics.

Checks, ahead of any C++ work, that the interpolated-CDF formulation used by
the library behaves as expected:

  1. it agrees with scikit-image's ``equalize_hist`` on masked inputs,
  2. equalized scores of continuous data are near-uniform on (0, 1]
     (Kolmogorov-Smirnov distance < 0.02 at 1e5 voxels, 256 bins),
  3. a grid search over 100 interior thresholds with a 20-voxel
     connected-component filter recovers Dice >= 0.99 on a phantom whose
     lesions are strictly hyperintense.

Run: python3 scripts/validate_equalization.py
"""

import numpy as np


def equalize_masked(values: np.ndarray, bins: int = 256) -> np.ndarray:
    """Interpolated-CDF equalization of a 1-D sample, as the library does it."""
    vmin = float(values.min())
    vmax = float(values.max())
    if not vmax > vmin:
        return np.ones_like(values, dtype=np.float64)
    hist, edges = np.histogram(values, bins=bins, range=(vmin, vmax))
    centers = (edges[:-1] + edges[1:]) / 2.0
    cdf = np.cumsum(hist).astype(np.float64)
    cdf /= cdf[-1]
    return np.interp(values, centers, cdf)


def ks_to_uniform(scores: np.ndarray) -> float:
    s = np.sort(scores)
    n = len(s)
    lo = np.abs(np.arange(0, n) / n - s)
    hi = np.abs(np.arange(1, n + 1) / n - s)
    return float(max(lo.max(), hi.max()))


def check_skimage_agreement(rng) -> None:
    try:
        from skimage import exposure
    except ImportError:
        print("skimage not available, skipping agreement check")
        return
    img = rng.normal(100.0, 15.0, size=(64, 64, 32))
    mask = rng.random(img.shape) < 0.7
    ours = np.zeros_like(img)
    ours[mask] = equalize_masked(img[mask])
    theirs = exposure.equalize_hist(img, nbins=256, mask=mask)
    diff = np.abs(ours[mask] - theirs[mask]).max()
    print(f"skimage agreement: max |diff| = {diff:.3e}")
    assert diff < 1e-12, "interpolated-CDF semantics deviate from skimage"


def check_ks(rng) -> None:
    n = 100_000
    samples = {
        "uniform": rng.uniform(0.0, 100.0, n),
        "gaussian": rng.normal(50.0, 10.0, n),
        "bimodal": np.concatenate(
            [rng.normal(30.0, 5.0, n // 2), rng.normal(70.0, 12.0, n - n // 2)]
        ),
    }
    for name, vals in samples.items():
        ks = ks_to_uniform(equalize_masked(vals))
        print(f"KS({name}) = {ks:.5f}")
        assert ks < 0.02, f"KS bound violated for {name}"


def check_phantom_grid_dice(rng) -> None:
    """Dice loss at 100 interior thresholds comes from normal voxels whose
    equalized score falls between the best grid point and the lesion block.
    Scattered ones are removed by the 20-voxel filter; only those attached to
    a lesion surface survive, so the loss scales with surface/volume. Radii
    around 9-13 voxels keep the worst-case loss safely under the 0.99 bound.
    """
    from scipy import ndimage

    nx, ny, nz = 128, 128, 111
    zz, yy, xx = np.mgrid[0:nz, 0:ny, 0:nx]
    struct = np.ones((3, 3, 3), dtype=bool)  # 26-connectivity

    worst = 1.0
    for trial in range(3):
        brain = (
            ((xx - nx / 2) / (0.40 * nx)) ** 2
            + ((yy - ny / 2) / (0.42 * ny)) ** 2
            + ((zz - nz / 2) / (0.40 * nz)) ** 2
        ) <= 1.0
        vol = np.zeros((nz, ny, nx))
        vol[brain] = rng.uniform(0.8, 1.2, brain.sum())
        lesion = np.zeros_like(brain)
        for _ in range(4):
            r = rng.uniform(9.0, 13.0)
            cx = rng.uniform(0.3 * nx, 0.7 * nx)
            cy = rng.uniform(0.3 * ny, 0.7 * ny)
            cz = rng.uniform(0.3 * nz, 0.7 * nz)
            lesion |= ((xx - cx) ** 2 + (yy - cy) ** 2 + (zz - cz) ** 2) <= r * r
        lesion &= brain
        vol[lesion] *= 2.0

        scores = np.zeros_like(vol)
        scores[brain] = equalize_masked(vol[brain])
        best = 0.0
        for i in range(1, 101):
            t = i / 101.0
            pred = scores > t
            lab, k = ndimage.label(pred, structure=struct)
            if k:
                sizes = np.bincount(lab.ravel())
                pred = sizes[lab] >= 20
                pred[lab == 0] = False
            inter = (pred & lesion).sum()
            denom = pred.sum() + lesion.sum()
            dice = 2.0 * inter / denom if denom else 1.0
            best = max(best, dice)
        print(f"phantom grid dice ceiling, trial {trial}: {best:.4f}")
        worst = min(worst, best)
    assert worst >= 0.99, "grid + component filter does not reach 0.99 Dice"


def main() -> None:
    rng = np.random.default_rng(20260809)
    check_skimage_agreement(rng)
    check_ks(rng)
    check_phantom_grid_dice(rng)
    print("all checks passed")


if __name__ == "__main__":
    main()
