"""Geometric and sampling primitives shared by every other module.

Everything here is a pure function of its inputs; the RNG is an explicit
value owned by the caller, never shared state. The scalar variants
(`*_s` suffix) are numba-compiled and run inside the render kernels, the
array-taking wrappers are the convenient surface for tests and tools.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

# ---------------------------------------------------------------------------
# Counter-based RNG (splitmix64 over a Weyl sequence).
#
# State advances by a fixed odd constant and the output is a strong 64-bit
# mix of the state, so any (seed, stream) pair yields a reproducible,
# platform-independent sequence and derived streams are decorrelated.
# ---------------------------------------------------------------------------

U64 = np.uint64
_WEYL = U64(0x9E3779B97F4A7C15)
_MUL1 = U64(0xBF58476D1CE4E5B9)
_MUL2 = U64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True, inline="always")
def mix64(z):
    z = (z ^ (z >> U64(30))) * _MUL1
    z = (z ^ (z >> U64(27))) * _MUL2
    return z ^ (z >> U64(31))


@njit(cache=True, inline="always")
def rng_init(seed, stream):
    a = mix64(U64(seed) * _MUL1 + _WEYL)
    b = mix64(U64(stream) * _MUL2 + _MUL1)
    return mix64(a ^ b)


@njit(cache=True, inline="always")
def rng_next_u64(state):
    state = state + _WEYL
    return state, mix64(state)


@njit(cache=True, inline="always")
def rng_uniform(state):
    state, z = rng_next_u64(state)
    return state, float(z >> U64(11)) * _INV_2_53


@njit(cache=True, inline="always")
def stream_key(frame, index, purpose):
    return mix64(mix64(U64(frame) * _MUL1 ^ U64(index) * _MUL2) ^ U64(purpose) * _WEYL)


@njit(cache=True, inline="always")
def pixel_state(seed, frame, index, purpose):
    return rng_init(seed, stream_key(frame, index, purpose))


@njit(cache=True)
def _fill_uniforms(state, out):
    for i in range(out.shape[0]):
        state, u = rng_uniform(state)
        out[i] = u
    return state


# Purpose tags used to decorrelate per-pixel / per-probe streams.
PURPOSE_CAMERA = 1
PURPOSE_CANDIDATES = 2
PURPOSE_MERGE = 3
PURPOSE_SHADE = 4
PURPOSE_PROBE = 5
PURPOSE_ROTATION = 6
PURPOSE_PATH = 7


@dataclass
class Rng:
    """Seedable counter-based RNG value.

    Identical (seed, stream, call sequence) produce identical outputs on
    every platform; `derive` builds a decorrelated child stream.
    """

    seed: int
    stream: int = 0
    _state: np.uint64 = field(init=False, repr=False)

    def __post_init__(self):
        self._state = rng_init(U64(self.seed & 0xFFFFFFFFFFFFFFFF),
                               U64(self.stream & 0xFFFFFFFFFFFFFFFF))

    def uniform(self) -> float:
        self._state, u = rng_uniform(self._state)
        return u

    def uniforms(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.float64)
        self._state = _fill_uniforms(self._state, out)
        return out

    def derive(self, *tags: int) -> "Rng":
        s = U64(self.stream & 0xFFFFFFFFFFFFFFFF)
        for t in tags:
            s = mix64(s * _MUL1 ^ U64(t & 0xFFFFFFFFFFFFFFFF))
        return Rng(self.seed, int(s))


# ---------------------------------------------------------------------------
# Small vector helpers on scalar triples (hot path, no allocation).
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def dot3(ax, ay, az, bx, by, bz):
    return ax * bx + ay * by + az * bz


@njit(cache=True, inline="always")
def cross3(ax, ay, az, bx, by, bz):
    return ay * bz - az * by, az * bx - ax * bz, ax * by - ay * bx


@njit(cache=True, inline="always")
def norm3(x, y, z):
    return math.sqrt(x * x + y * y + z * z)


@njit(cache=True, inline="always")
def normalize3(x, y, z):
    n = math.sqrt(x * x + y * y + z * z)
    inv = 1.0 / n
    return x * inv, y * inv, z * inv


@njit(cache=True, inline="always")
def build_onb(nx, ny, nz):
    """Orthonormal basis (t, b) around unit n, branchless Duff et al. style."""
    s = 1.0 if nz >= 0.0 else -1.0
    a = -1.0 / (s + nz)
    b = nx * ny * a
    tx, ty, tz = 1.0 + s * nx * nx * a, s * b, -s * nx
    bx, by, bz = b, s + ny * ny * a, -ny
    return tx, ty, tz, bx, by, bz


@njit(cache=True, inline="always")
def luminance(r, g, b):
    return 0.2126 * r + 0.7152 * g + 0.0722 * b


# ---------------------------------------------------------------------------
# Geometry term and its bounding split.
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def geometry_term_s(xx, xy, xz, nxx, nxy, nxz, yx, yy, yz, nyx, nyy, nyz):
    """G = cos+ * cos+ / dist^2; returns -1.0 for coincident points."""
    dx, dy, dz = yx - xx, yy - xy, yz - xz
    d2 = dx * dx + dy * dy + dz * dz
    if d2 <= 0.0:
        return -1.0
    inv = 1.0 / math.sqrt(d2)
    cx = (nxx * dx + nxy * dy + nxz * dz) * inv
    cy = -(nyx * dx + nyy * dy + nyz * dz) * inv
    if cx < 0.0:
        cx = 0.0
    if cy < 0.0:
        cy = 0.0
    return cx * cy / d2


@njit(cache=True, inline="always")
def split_g_s(g, g_max):
    bounded = g if g < g_max else g_max
    residual = 0.0
    if g > g_max:
        residual = 1.0 - g_max / g
    return bounded, residual


@dataclass
class GeometryTermParts:
    bounded: float
    residual_fraction: float


def geometry_term(x, n_x, y, n_y) -> float:
    g = geometry_term_s(x[0], x[1], x[2], n_x[0], n_x[1], n_x[2],
                        y[0], y[1], y[2], n_y[0], n_y[1], n_y[2])
    if g < 0.0:
        raise ValueError("degenerate pair")
    return g


def split_geometry_term(g: float, g_max: float) -> GeometryTermParts:
    bounded, residual = split_g_s(g, g_max)
    return GeometryTermParts(bounded, residual)


# ---------------------------------------------------------------------------
# Octahedral direction mapping.
#
# Convention: +z hemisphere fills the inner diamond |u|+|v| <= 1, the lower
# hemisphere is folded outward; an exact antipode ties to non-negative
# (u, v), so (0,0,-1) encodes to (1,1).
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def _sign_nn(v):
    return 1.0 if v >= 0.0 else -1.0


@njit(cache=True, inline="always")
def octa_encode_s(x, y, z):
    l1 = abs(x) + abs(y) + abs(z)
    u = x / l1
    v = y / l1
    if z < 0.0:
        fu = (1.0 - abs(v)) * _sign_nn(u)
        fv = (1.0 - abs(u)) * _sign_nn(v)
        u, v = fu, fv
    return u, v


@njit(cache=True, inline="always")
def octa_decode_s(u, v):
    z = 1.0 - abs(u) - abs(v)
    if z < 0.0:
        fu = (1.0 - abs(v)) * _sign_nn(u)
        fv = (1.0 - abs(u)) * _sign_nn(v)
        u, v = fu, fv
    n = math.sqrt(u * u + v * v + z * z)
    return u / n, v / n, z / n


def octa_encode(d) -> tuple[float, float]:
    return octa_encode_s(float(d[0]), float(d[1]), float(d[2]))


def octa_decode(u: float, v: float) -> np.ndarray:
    return np.array(octa_decode_s(float(u), float(v)))


# ---------------------------------------------------------------------------
# Direction sampling.
# ---------------------------------------------------------------------------


@njit(cache=True, inline="always")
def sample_cosine_hemisphere_s(nx, ny, nz, state):
    state, u1 = rng_uniform(state)
    state, u2 = rng_uniform(state)
    r = math.sqrt(u1)
    phi = 2.0 * math.pi * u2
    lx = r * math.cos(phi)
    ly = r * math.sin(phi)
    lz = math.sqrt(max(0.0, 1.0 - u1))
    tx, ty, tz, bx, by, bz = build_onb(nx, ny, nz)
    dx = tx * lx + bx * ly + nx * lz
    dy = ty * lx + by * ly + ny * lz
    dz = tz * lx + bz * ly + nz * lz
    return state, dx, dy, dz, lz / math.pi


@njit(cache=True, inline="always")
def sample_uniform_sphere_s(state):
    state, u1 = rng_uniform(state)
    state, u2 = rng_uniform(state)
    z = 1.0 - 2.0 * u1
    r = math.sqrt(max(0.0, 1.0 - z * z))
    phi = 2.0 * math.pi * u2
    return state, r * math.cos(phi), r * math.sin(phi), z, 1.0 / (4.0 * math.pi)


@njit(cache=True, inline="always")
def cosine_pdf_s(nx, ny, nz, dx, dy, dz):
    c = nx * dx + ny * dy + nz * dz
    return c / math.pi if c > 0.0 else 0.0


def sample_cosine_hemisphere(n, rng: Rng):
    rng._state, dx, dy, dz, pdf = sample_cosine_hemisphere_s(
        float(n[0]), float(n[1]), float(n[2]), rng._state)
    return np.array((dx, dy, dz)), pdf


def sample_uniform_sphere(rng: Rng):
    rng._state, dx, dy, dz, pdf = sample_uniform_sphere_s(rng._state)
    return np.array((dx, dy, dz)), pdf


def cosine_hemisphere_pdf(n, d) -> float:
    return cosine_pdf_s(float(n[0]), float(n[1]), float(n[2]),
                        float(d[0]), float(d[1]), float(d[2]))


def spherical_fibonacci(n: int) -> np.ndarray:
    """n near-uniform directions on the sphere (golden-angle spiral)."""
    i = np.arange(n, dtype=np.float64)
    phi = 2.0 * math.pi * i * (1.0 - 1.0 / ((1.0 + math.sqrt(5.0)) / 2.0))
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    return np.stack((r * np.cos(phi), r * np.sin(phi), z), axis=1)


def random_rotation(rng: Rng) -> np.ndarray:
    """Uniform random rotation matrix (Shoemake quaternion method)."""
    u1, u2, u3 = rng.uniform(), rng.uniform(), rng.uniform()
    a, b = math.sqrt(1.0 - u1), math.sqrt(u1)
    qx = a * math.sin(2.0 * math.pi * u2)
    qy = a * math.cos(2.0 * math.pi * u2)
    qz = b * math.sin(2.0 * math.pi * u3)
    qw = b * math.cos(2.0 * math.pi * u3)
    return np.array([
        [1 - 2 * (qy * qy + qz * qz), 2 * (qx * qy - qz * qw), 2 * (qx * qz + qy * qw)],
        [2 * (qx * qy + qz * qw), 1 - 2 * (qx * qx + qz * qz), 2 * (qy * qz - qx * qw)],
        [2 * (qx * qz - qy * qw), 2 * (qy * qz + qx * qw), 1 - 2 * (qx * qx + qy * qy)],
    ])
