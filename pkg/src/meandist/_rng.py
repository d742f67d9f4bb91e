"""Counter-based random streams keyed by ``(seed, block)``.

Philox is a counter-based generator, so every block gets an independent
stream without any shared state; results never depend on how blocks are
scheduled across workers.
"""
import numpy as np

BLOCK_SIZE = 4096


def block_generator(seed: int, block: int) -> np.random.Generator:
    key = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(block)])
    return np.random.Generator(np.random.Philox(key))


def standard_normal_rows(seed: int, n_rows: int, n_cols: int, stream: int = 0) -> np.ndarray:
    """``n_rows`` x ``n_cols`` standard normals, generated in fixed row blocks.

    ``stream`` separates independent uses of one seed (e.g. the two ends of
    a sampled pair).
    """
    out = np.empty((n_rows, n_cols))
    for b, start in enumerate(range(0, n_rows, BLOCK_SIZE)):
        stop = min(start + BLOCK_SIZE, n_rows)
        gen = block_generator(seed, (stream << 32) | b)
        out[start:stop] = gen.standard_normal((stop - start, n_cols))
    return out


def unit_vectors(seed: int, n_rows: int, dim: int, stream: int = 0) -> np.ndarray:
    """Uniform points on the unit sphere S^dim in R^(dim+1)."""
    g = standard_normal_rows(seed, n_rows, dim + 1, stream)
    g /= np.linalg.norm(g, axis=1)[:, None]
    return g
