#!/usr/bin/env python3
"""Write the synthetic cartoon test image (and optional noisy copies) as PPM.

Usage:
  python3 scripts/make_fixture_image.py fixture.ppm
  python3 scripts/make_fixture_image.py fixture.ppm --noisy --width 128
"""
from __future__ import annotations

import argparse

from snnkit.denoise import NoiseConfig, add_noise
from snnkit.generators import cartoon_fixture
from snnkit.ppm import save_ppm


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out", help="output PPM path")
    ap.add_argument("--width", type=int, default=64)
    ap.add_argument("--height", type=int, default=64)
    ap.add_argument("--noisy", action="store_true",
                    help="also write salt-pepper and gaussian corrupted copies")
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    img = cartoon_fixture(args.width, args.height)
    save_ppm(args.out, img)
    print(f"wrote {args.out} ({args.width}x{args.height})")
    if args.noisy:
        stem = args.out[:-4] if args.out.endswith(".ppm") else args.out
        for tag, cfg in (
                ("sp05", NoiseConfig(density=0.05, seed=args.seed)),
                ("sp10", NoiseConfig(density=0.10, seed=args.seed)),
                ("g10", NoiseConfig(kind="gaussian", sigma=10.0, seed=args.seed))):
            path = f"{stem}-{tag}.ppm"
            save_ppm(path, add_noise(img, cfg))
            print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
