"""Write the stock scene files into scenes/.

Run from the repository root:
    python3 scripts/make_scenes.py [--out scenes]
"""

import argparse
from pathlib import Path

from viewprm import make_gallery_scene, make_office_scene, make_sweep_scene, save_scene


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="scenes")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    scenes = {
        "office.json": make_office_scene(),
        "office8.json": make_office_scene(8),
        "gallery.json": make_gallery_scene(),
        "gallery_flipped.json": make_gallery_scene(0.2, 1.0),
    }
    for n in (2, 5, 8):
        scenes[f"sweep_{n}.json"] = make_sweep_scene(n)

    for name, scene in scenes.items():
        save_scene(scene, out / name)
        print(f"wrote {out / name} ({len(scene.objects)} objects, "
              f"{len(scene.monitored())} monitored)")


if __name__ == "__main__":
    main()
