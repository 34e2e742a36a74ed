"""ForceAtlas2 layout with exact O(N^2) repulsion.

Classic gravity, linear attraction and the swinging/traction adaptive speed.
Forces are evaluated synchronously from the current positions and reduced
in a fixed node order, so repeated runs are bit-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .semnet import WeightedGraph


@dataclass(frozen=True)
class LayoutConfig:
    iterations: int = 600
    seed: int = 42
    k_r: float = 2.0  # repulsion scaling
    k_g: float = 1.0  # gravity scaling
    delta: float = 1.0  # edge weight exponent
    tolerance: float = 1.0  # jitter tolerance
    k_s: float = 0.1
    k_smax: float = 10.0
    epsilon_d: float = 1e-9
    convergence_eps: float = 1e-4  # 0 disables the early stop

    def __post_init__(self):
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.k_r < 0 or self.k_g < 0 or self.delta < 0:
            raise ValueError("k_r, k_g and delta must be >= 0")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be > 0")
        if self.seed < 0:
            raise ValueError("seed must be unsigned")


@dataclass
class Layout:
    positions: np.ndarray  # (N, 2); row i is node id i
    iterations_run: int = 0
    converged: bool = False

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64).reshape(-1, 2)


@dataclass
class StepState:
    """Carry-over between iterations: last forces and global speed."""

    forces: np.ndarray
    speed: float | None = None
    max_displacement: float = 0.0


@dataclass(frozen=True)
class _Arrays:
    """Per-graph arrays hoisted out of the iteration loop."""
    mass: np.ndarray
    src: np.ndarray
    tgt: np.ndarray
    weight: np.ndarray

    @classmethod
    def of(cls, graph: WeightedGraph) -> "_Arrays":
        src = np.array([e.source for e in graph.edges], dtype=np.intp)
        tgt = np.array([e.target for e in graph.edges], dtype=np.intp)
        deg = np.bincount(np.concatenate([src, tgt]), minlength=graph.n).astype(np.float64)
        weight = np.array([e.weight for e in graph.edges], dtype=np.float64)
        return cls(deg + 1.0, src, tgt, weight)


def init_positions(graph: WeightedGraph, seed: int = 42) -> Layout:
    n = graph.n
    half = math.sqrt(n)
    rng = np.random.default_rng(seed)
    return Layout(rng.uniform(-half, half, size=(n, 2)))


def _jitter(seed: int, step: int, i: int, j: int) -> np.ndarray:
    angle = np.random.default_rng([seed, step, i, j]).uniform(0.0, 2.0 * math.pi)
    return np.array([math.cos(angle), math.sin(angle)])


def compute_forces(graph: WeightedGraph, pos: np.ndarray, config: LayoutConfig, step: int = 0) -> np.ndarray:
    return _forces(_Arrays.of(graph), pos, config, step)


def _forces(arr: _Arrays, pos: np.ndarray, config: LayoutConfig, step: int) -> np.ndarray:
    mass = arr.mass
    eps = config.epsilon_d
    # i - j: points away from j
    dx = pos[:, 0, None] - pos[None, :, 0]
    dy = pos[:, 1, None] - pos[None, :, 1]
    d2 = dx * dx + dy * dy
    close = d2 < eps * eps
    np.fill_diagonal(close, False)
    if close.any():
        for i, j in zip(*np.nonzero(np.triu(close))):
            ux, uy = eps * _jitter(config.seed, step, int(i), int(j))
            dx[i, j], dy[i, j], dx[j, i], dy[j, i] = ux, uy, -ux, -uy
            d2[i, j] = d2[j, i] = eps * eps
    np.fill_diagonal(d2, 1.0)
    coef = config.k_r * np.outer(mass, mass) / d2
    np.fill_diagonal(coef, 0.0)
    forces = np.stack([(coef * dx).sum(axis=1), (coef * dy).sum(axis=1)], axis=1)

    if arr.src.size:
        n = pos.shape[0]
        pull = (arr.weight ** config.delta)[:, None] * (pos[arr.tgt] - pos[arr.src])
        for k in (0, 1):
            forces[:, k] += np.bincount(arr.src, pull[:, k], n) - np.bincount(arr.tgt, pull[:, k], n)

    if config.k_g > 0:
        r = np.sqrt(np.einsum("ij,ij->i", pos, pos))
        moving = r > 0
        forces[moving] -= (config.k_g * mass[moving] / r[moving])[:, None] * pos[moving]
    return forces


def fa2_step(
    graph: WeightedGraph,
    layout: Layout,
    prev: StepState | None,
    config: LayoutConfig,
) -> tuple[Layout, StepState]:
    if layout.positions.shape[0] != graph.n:
        raise ValueError(f"layout has {layout.positions.shape[0]} positions for a graph of {graph.n} nodes")
    return _step(_Arrays.of(graph), layout, prev, config)


def _step(arr: _Arrays, layout: Layout, prev: StepState | None, config: LayoutConfig) -> tuple[Layout, StepState]:
    pos = layout.positions
    n = pos.shape[0]
    prev_forces = prev.forces if prev is not None else np.zeros((n, 2))
    prev_speed = prev.speed if prev is not None else None

    forces = _forces(arr, pos, config, layout.iterations_run)
    mass = arr.mass
    swing = np.linalg.norm(forces - prev_forces, axis=1)
    traction = np.linalg.norm(forces + prev_forces, axis=1) / 2.0
    speed = config.tolerance * float(np.dot(mass, traction)) / max(config.epsilon_d, float(np.dot(mass, swing)))
    if prev_speed is not None:
        speed = min(speed, 1.5 * prev_speed)

    node_speed = config.k_s * speed / (1.0 + speed * np.sqrt(swing))
    fnorm = np.linalg.norm(forces, axis=1)
    pushed = fnorm > 0
    node_speed[pushed] = np.minimum(node_speed[pushed], config.k_smax * speed / fnorm[pushed])
    disp = node_speed[:, None] * forces

    # a step may not carry a node past the origin (stops a lone node under
    # gravity from overshooting and freezing away from the centre)
    r = np.linalg.norm(pos, axis=1)
    step_len = np.linalg.norm(disp, axis=1)
    inward = (np.einsum("ij,ij->i", disp, pos) < 0) & (step_len > r)
    disp[inward] *= (r[inward] / step_len[inward])[:, None]

    new = Layout(pos + disp, layout.iterations_run + 1, False)
    max_disp = float(np.max(np.linalg.norm(disp, axis=1))) if n else 0.0
    return new, StepState(forces, speed, max_disp)


def layout_graph(graph: WeightedGraph, config: LayoutConfig | None = None) -> Layout:
    config = config or LayoutConfig()
    layout = init_positions(graph, config.seed)
    if graph.n == 0:
        layout.converged = True
        return layout
    arr, state = _Arrays.of(graph), None
    for _ in range(config.iterations):
        layout, state = _step(arr, layout, state, config)
        if config.convergence_eps > 0 and state.max_displacement < config.convergence_eps:
            layout.converged = True
            break
    return layout
