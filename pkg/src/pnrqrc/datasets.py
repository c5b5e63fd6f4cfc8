"""Minimal binary image-dataset container.

Layout: magic b"IMGS", then uint32 little-endian count, height, width,
channels, then count*height*width*channels pixel bytes (row-major
grayscale or channel-last), then count label bytes.  Keeps desk-scale
subsets out of version control while staying trivial to produce from any
source with a few lines of numpy.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"IMGS"
_HEADER = struct.Struct("<4sIIII")


@dataclass
class ImageDataset:
    images: np.ndarray  # (count, height, width, channels) uint8
    labels: np.ndarray  # (count,) uint8

    @property
    def flat(self) -> np.ndarray:
        """Images flattened to (count, height*width*channels) floats in [0, 1]."""
        return self.images.reshape(len(self.labels), -1).astype(float) / 255.0


def write_dataset(path, images, labels) -> None:
    images = np.asarray(images, dtype=np.uint8)
    labels = np.asarray(labels, dtype=np.uint8)
    if images.ndim == 3:
        images = images[..., None]
    count, height, width, channels = images.shape
    if labels.shape != (count,):
        raise ValueError("label count must match image count")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, count, height, width, channels))
        fh.write(images.tobytes())
        fh.write(labels.tobytes())


def read_dataset(path) -> ImageDataset:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) < _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, count, height, width, channels = _HEADER.unpack(header)
        if magic != MAGIC:
            raise ValueError(f"{path}: not an image dataset (bad magic)")
        n_pixels = count * height * width * channels
        pixels = fh.read(n_pixels)
        labels = fh.read(count)
        if len(pixels) < n_pixels or len(labels) < count:
            raise ValueError(f"{path}: truncated payload")
    images = np.frombuffer(pixels, dtype=np.uint8).reshape(
        count, height, width, channels
    )
    return ImageDataset(
        images=images, labels=np.frombuffer(labels, dtype=np.uint8)
    )


def synthetic_blobs(
    classes: int,
    per_class: int,
    height: int = 8,
    width: int = 8,
    separation: float = 6.0,
    noise: float = 0.5,
    seed: int = 0,
) -> ImageDataset:
    """Synthetic linearly separable image classes: one random direction per
    class plus Gaussian pixel noise, quantised to bytes."""
    rng = np.random.default_rng(seed)
    dim = height * width
    centres = rng.normal(size=(classes, dim))
    centres /= np.linalg.norm(centres, axis=1, keepdims=True)
    images = []
    labels = []
    for c in range(classes):
        pts = separation * centres[c] + noise * rng.normal(size=(per_class, dim))
        images.append(pts)
        labels.extend([c] * per_class)
    raw = np.concatenate(images)
    lo, hi = raw.min(), raw.max()
    scaled = np.clip((raw - lo) / (hi - lo) * 255.0, 0, 255).astype(np.uint8)
    order = rng.permutation(len(labels))
    return ImageDataset(
        images=scaled.reshape(-1, height, width, 1)[order],
        labels=np.asarray(labels, dtype=np.uint8)[order],
    )
