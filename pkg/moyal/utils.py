import argparse
import warnings

import imageio
import numpy as np
from cv2 import resize, INTER_AREA, INTER_LINEAR

from .errors import ParseError
from .phasegrid import GridFunction

HEATMAP_LEVELS = 256

def get_parser(**kwargs):
    """Argument parser that shows defaults in --help"""
    return argparse.ArgumentParser(formatter_class=argparse.ArgumentDefaultsHelpFormatter,
                                   **kwargs)

def _parse_pair(text: str, cast):
    try:
        first, second = (cast(x) for x in text.split(','))
    except ValueError as e:
        raise ParseError(f'Expected two comma-separated numbers, got {text!r}') from e
    return first, second

def parse_index_pair(text: str):
    """'m,n' -> (m, n), both non-negative"""
    m, n = _parse_pair(text, int)
    if m < 0 or n < 0:
        raise ParseError(f'Indices must be non-negative, got {text!r}')
    return m, n

def parse_weight_pair(text: str):
    """'s,t' -> (s, t)"""
    return _parse_pair(text, float)

def to_rgb(array: np.ndarray):
    """Add a channel dimension with 3 entries"""
    if array.ndim == 3 and array.shape[-1] == 3:
        return array
    return np.tile(array[:, :, np.newaxis], (1, 1, 3))

def _resize_if_necessary(image, desired_shape):
    current_shape = image.shape[:2]
    if desired_shape is None or current_shape == tuple(desired_shape):
        return image
    warnings.warn(f'Resizing heatmap from {current_shape} to {tuple(desired_shape)}',
                  RuntimeWarning)
    if np.prod(desired_shape) < np.prod(current_shape):
        interp_mode = INTER_AREA # downscale
    else:
        interp_mode = INTER_LINEAR # upscale
    # cv2 takes (width, height)
    image = resize(image, tuple(desired_shape)[::-1], interpolation=interp_mode)
    return np.clip(image, 0, HEATMAP_LEVELS - 1)

def heatmap_levels(f: GridFunction) -> np.ndarray:
    """|f| scaled linearly onto 0..255, q to the right and p upward"""
    magnitude = np.abs(f.values)
    peak = magnitude.max()
    scaled = magnitude / peak if peak > 0 else magnitude
    levels = np.round(scaled * (HEATMAP_LEVELS - 1)).astype(np.uint8)
    return np.flipud(levels.T)

def write_heatmap(f: GridFunction, filename, shape=None) -> float:
    """Write |f| as a binary (P6) portable pixmap; returns the max |f| used for scaling"""
    image = heatmap_levels(f)
    image = _resize_if_necessary(image, shape).astype(np.uint8)
    imageio.imwrite(filename, to_rgb(image))
    return float(np.abs(f.values).max())
