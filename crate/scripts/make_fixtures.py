"""Regenerate the grayscale PGM fixtures in crates/core/fixtures/.

Sources are the scikit-image sample photographs (camera: CC0; astronaut,
coins, moon: public domain). Each image is converted to 8-bit grayscale,
centre-cropped to a square and downsampled with anti-aliasing.
"""

import pathlib

import numpy as np
from skimage import color, data, transform

OUT = pathlib.Path(__file__).resolve().parent.parent / "crates" / "core" / "fixtures"

SOURCES = {
    "camera": data.camera,
    "astronaut": lambda: color.rgb2gray(data.astronaut()),
    "coins": data.coins,
    "moon": data.moon,
}
SIZES = {64: list(SOURCES), 144: list(SOURCES), 276: ["camera", "astronaut"]}


def square(img):
    h, w = img.shape
    side = min(h, w)
    top, left = (h - side) // 2, (w - side) // 2
    return img[top : top + side, left : left + side]


def write_pgm(path, pixels, source):
    n = pixels.shape[0]
    header = f"P5\n# {source} (scikit-image sample data)\n{n} {n}\n255\n".encode()
    path.write_bytes(header + pixels.astype(np.uint8).tobytes())


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for size, names in SIZES.items():
        for name in names:
            img = square(np.asarray(SOURCES[name](), dtype=np.float64))
            if img.max() > 1.0:
                img = img / 255.0
            small = transform.resize(img, (size, size), anti_aliasing=True)
            pixels = np.clip(np.rint(small * 255.0), 0, 255)
            write_pgm(OUT / f"{name}_{size}.pgm", pixels, name)


if __name__ == "__main__":
    main()
