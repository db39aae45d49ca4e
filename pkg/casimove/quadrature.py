from __future__ import annotations

import asyncio
import logging
import math
from collections.abc import Callable
from concurrent.futures import Executor, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from casimove._constants import (
    DEFAULT_ABS_TOL,
    DEFAULT_BATCH,
    DEFAULT_CUTOFF,
    DEFAULT_DISK_RADIUS,
    DEFAULT_MAX_CELLS,
    DEFAULT_QVAC_REL_TOL,
    DEFAULT_REAL_OMEGA_MAX,
    DEFAULT_THERMAL_REL_TOL,
)
from casimove.cavity import Cavity, CavityConfig
from casimove.event_log import EventLog, EventType
from casimove.exceptions import (
    CavityResonanceError,
    KinematicDomainError,
    ReflectionPoleError,
    SingularFrequencyError,
)
from casimove.kinematics import build_context, build_imaginary_context
from casimove.reflection import reflect
from casimove.spectral import Channel, evaluate_density

logger = logging.getLogger("casimove")

# 15-point Kronrod abscissae on [-1, 1] (non-negative half, descending) and weights.
_XK_HALF = np.array(
    [
        0.991455371120812639206854697526329,
        0.949107912342758524526189684047851,
        0.864864423359769072789712788640926,
        0.741531185599394439863864773280788,
        0.586087235467691130294144845693013,
        0.405845151377397166906606412076961,
        0.207784955007898467600689403773245,
        0.0,
    ]
)
_WK_HALF = np.array(
    [
        0.022935322010529224963732008058970,
        0.063092092629978553290700663189204,
        0.104790010322250183839876322541518,
        0.140653259715525918745189590510238,
        0.169004726639267902826583426598550,
        0.190350578064785409913256402421014,
        0.204432940075298892414161999234649,
        0.209482141084727828012999174891714,
    ]
)
# Embedded 7-point Gauss weights, at Kronrod positions 1, 3, 5, 7 of the half list.
_WG_HALF = np.array(
    [
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
    ]
)


def _unit_rule() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    nodes = np.concatenate([-_XK_HALF[:-1], [0.0], _XK_HALF[:-1][::-1]])
    kronrod = np.concatenate([_WK_HALF[:-1], [_WK_HALF[-1]], _WK_HALF[:-1][::-1]])
    gauss = np.zeros(15)
    gauss[[1, 3, 5]] = _WG_HALF[:3]
    gauss[7] = _WG_HALF[3]
    gauss[[9, 11, 13]] = _WG_HALF[:3][::-1]
    return (nodes + 1.0) / 2.0, kronrod / 2.0, gauss / 2.0


_NODES, _WK, _WG = _unit_rule()
NODES_PER_CELL = _NODES.size**3

# Density failures that exclude a cell instead of aborting the integral.
_EXCLUDABLE: tuple[type[BaseException], ...] = (
    CavityResonanceError,
    ReflectionPoleError,
    SingularFrequencyError,
    KinematicDomainError,
    FloatingPointError,
)


@dataclass(frozen=True)
class IntegrationPlan:
    rel_tol: float | None = None
    abs_tol: float = DEFAULT_ABS_TOL
    max_cells: int = DEFAULT_MAX_CELLS
    batch: int = DEFAULT_BATCH
    threads: int = 1
    fold_v: bool = True
    cutoff: float = DEFAULT_CUTOFF
    disk_radius: float | None = None
    real_omega_max: float = DEFAULT_REAL_OMEGA_MAX

    def __post_init__(self) -> None:
        if self.rel_tol is not None and not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if self.max_cells < 1 or self.batch < 1 or self.threads < 1:
            raise ValueError("max_cells, batch and threads must be >= 1")
        if not self.cutoff > 0:
            raise ValueError(f"cutoff must be positive, got {self.cutoff}")
        if self.disk_radius is not None and not self.disk_radius > 0:
            raise ValueError(f"disk_radius must be positive, got {self.disk_radius}")

    def tolerance_for(self, channel: Channel) -> float:
        if self.rel_tol is not None:
            return self.rel_tol
        if channel in (Channel.QVAC_IMAG, Channel.QVAC_REAL):
            return DEFAULT_QVAC_REL_TOL
        return DEFAULT_THERMAL_REL_TOL


@dataclass(frozen=True)
class Patch:
    """Unit-cube map onto one integration region; ``integrand`` includes the Jacobian."""

    name: str
    integrand: Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ExcludedCell:
    patch: str
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    reason: str


@dataclass(frozen=True)
class ChannelIntegral:
    channel: Channel
    value: float
    error: float
    evaluations: int
    converged: bool
    cells: int = 0
    tail_bound: float = 0.0
    excluded: list[ExcludedCell] = field(default_factory=list)
    event_log: EventLog | None = None


@dataclass(frozen=True)
class StressParts:
    qvac: float = 0.0
    thermal1: float = 0.0
    thermal2: float = 0.0

    @property
    def total(self) -> float:
        return self.qvac + self.thermal1 + self.thermal2


@dataclass(frozen=True)
class StressResult:
    """Stress components and Poynting flux in reduced units.

    ``sigma_xx`` keeps the Maxwell-stress sign (positive means attraction);
    ``pressure`` is the normal pressure -sigma_xx. ``sigma_xy`` is the lateral
    force per area on plate 1 along +y.

    ``radiation_pressure`` holds the blackbody pressure pi^2 T^4 / 90 that each
    plate's free emission puts into the thermal parts of ``sigma_xx``;
    ``cavity_sigma_xx`` removes it, which at rest and equal temperatures is
    the Lifshitz stress.
    """

    sigma_xx: StressParts
    sigma_xy: StressParts
    poynting_1x: float
    errors: dict[str, float]
    evaluations: int
    converged: bool
    radiation_pressure: StressParts = field(default_factory=StressParts)
    integrals: dict[Channel, ChannelIntegral] = field(default_factory=dict)
    event_log: EventLog | None = None

    @property
    def pressure(self) -> float:
        return -self.sigma_xx.total

    @property
    def cavity_sigma_xx(self) -> float:
        return self.sigma_xx.total + self.radiation_pressure.total


@dataclass(frozen=True)
class HeatResult:
    """Poynting flux S1x of plate 1 (lab frame) and S'2x of plate 2 (its rest frame).

    Both are x components in reduced units; S'2x < 0 means plate 2 emits
    toward plate 1.
    """

    poynting_1x: float
    poynting_2x: float
    errors: dict[str, float]
    evaluations: int
    converged: bool
    integrals: dict[Channel, ChannelIntegral] = field(default_factory=dict)
    event_log: EventLog | None = None


def blackbody_pressure(temperature: float) -> float:
    """Pressure pi^2 T^4 / 90 of the radiation one plate emits into the gap."""
    return math.pi**2 * temperature**4 / 90.0


def planck_tail_fraction(cutoff: float) -> float:
    """Upper bound of the Planck-weighted tail beyond ``cutoff`` * T."""
    x = cutoff
    return math.exp(-x) * (x**3 + 3 * x**2 + 6 * x + 6) / 6.0


# --- Cell evaluation ---


@dataclass
class _Cell:
    patch: int
    key: tuple[int, ...]
    lower: np.ndarray
    width: np.ndarray
    value: float = 0.0
    error: float = 0.0
    split_axis: int = 0
    excluded: str | None = None

    @property
    def order(self) -> tuple[int, tuple[int, ...]]:
        return self.patch, self.key


def _evaluate_cell(
    integrand: Callable[[np.ndarray], np.ndarray], lower: np.ndarray, width: np.ndarray
) -> tuple[float, float, int]:
    axes = [lower[d] + width[d] * _NODES for d in range(3)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    with np.errstate(over="ignore", under="ignore"):
        values = np.asarray(integrand(grid), dtype=float).reshape(15, 15, 15)
    if not np.all(np.isfinite(values)):
        raise FloatingPointError("non-finite density inside cell")
    volume = float(np.prod(width))
    kronrod = np.einsum("i,j,k,ijk->", _WK, _WK, _WK, values) * volume
    gauss = np.einsum("i,j,k,ijk->", _WG, _WG, _WG, values) * volume
    mixed = [
        np.einsum("i,j,k,ijk->", *[_WG if d == axis else _WK for d in range(3)], values) * volume
        for axis in range(3)
    ]
    split_axis = int(np.argmax([abs(kronrod - m) for m in mixed]))
    return float(kronrod), float(abs(kronrod - gauss)), split_axis


def _split(cell: _Cell) -> list[_Cell]:
    axis = cell.split_axis
    half = cell.width.copy()
    half[axis] /= 2.0
    upper_lower = cell.lower.copy()
    upper_lower[axis] += half[axis]
    return [
        _Cell(cell.patch, cell.key + (0,), cell.lower.copy(), half),
        _Cell(cell.patch, cell.key + (1,), upper_lower, half.copy()),
    ]


def _reduce(cells: list[_Cell]) -> tuple[float, float]:
    ordered = sorted(cells, key=lambda c: c.order)
    value = math.fsum(c.value for c in ordered)
    error = math.sqrt(math.fsum(c.error**2 for c in ordered))
    return value, error


async def _adaptive(
    label: str,
    patches: list[Patch],
    plan: IntegrationPlan,
    rel_tol: float,
    executor: Executor,
    event_log: EventLog | None,
) -> tuple[float, float, int, bool, int, list[ExcludedCell]]:
    loop = asyncio.get_running_loop()
    excluded: list[ExcludedCell] = []

    def record(event_type: EventType, patch: str, round_: int, **details: Any) -> None:
        if event_log is not None:
            event_log.record(event_type, patch, round_, **details)

    async def evaluate(cells: list[_Cell], round_: int) -> None:
        tasks = [
            loop.run_in_executor(
                executor, _evaluate_cell, patches[c.patch].integrand, c.lower, c.width
            )
            for c in cells
        ]
        results = await asyncio.gather(*tasks, return_exceptions=True)
        for cell, result in zip(cells, results):
            if isinstance(result, _EXCLUDABLE):
                name = patches[cell.patch].name
                cell.excluded = str(result)
                cell.value = cell.error = 0.0
                excluded.append(
                    ExcludedCell(
                        name,
                        tuple(float(x) for x in cell.lower),
                        tuple(float(x) for x in cell.lower + cell.width),
                        str(result),
                    )
                )
                logger.warning("Cell excluded from %s/%s: %s", label, name, result)
                record("exclude", name, round_, reason=str(result), key=cell.key)
            elif isinstance(result, BaseException):
                raise result
            else:
                cell.value, cell.error, cell.split_axis = result

    leaves = [
        _Cell(index, (), np.zeros(3), np.ones(3)) for index in range(len(patches))
    ]
    for patch in patches:
        record("patch_start", patch.name, 0)
    await evaluate(leaves, 0)
    evaluations = len(leaves) * NODES_PER_CELL
    round_ = 0
    converged = False
    while True:
        value, error = _reduce(leaves)
        target = max(plan.abs_tol, rel_tol * abs(value))
        if error <= target:
            converged = True
            record("converged", "*", round_, value=value, error=error, cells=len(leaves))
            break
        active = [c for c in leaves if c.excluded is None and c.error > 0.0]
        if len(leaves) >= plan.max_cells or not active:
            record("capped", "*", round_, value=value, error=error, cells=len(leaves))
            break
        round_ += 1
        chosen = sorted(active, key=lambda c: (-c.error, c.order))[: plan.batch]
        chosen_ids = {id(c) for c in chosen}
        children = [child for c in chosen for child in _split(c)]
        await evaluate(children, round_)
        evaluations += len(children) * NODES_PER_CELL
        leaves = [c for c in leaves if id(c) not in chosen_ids] + children
        logger.debug(
            "%s round %d: %d cells, value=%.6e, error=%.3e", label, round_, len(leaves), value, error
        )
        for c in chosen:
            record("refine", patches[c.patch].name, round_, key=c.key, error=c.error, axis=c.split_axis)
    for index, patch in enumerate(patches):
        own = [c for c in leaves if c.patch == index]
        patch_value, patch_error = _reduce(own)
        record("patch_done", patch.name, round_, value=patch_value, error=patch_error, cells=len(own))
    return value, error, evaluations, converged, len(leaves), excluded


# --- Patch construction ---


def _angular(plan: IntegrationPlan) -> tuple[float, float]:
    """(span of phi, multiplicity) with v >= 0 folded when requested."""
    return (math.pi, 2.0) if plan.fold_v else (2.0 * math.pi, 1.0)


def _real_density(channel: Channel, cavity: Cavity, omega: Any, u: Any, v: Any, *, thermal: bool) -> np.ndarray:
    ctx = build_context(omega, u, v, cavity.beta)
    refl = reflect(ctx, cavity.medium1, cavity.medium2)
    sample = evaluate_density(channel, ctx, refl, t1=cavity.t1, t2=cavity.t2)
    return sample.thermal if thermal else sample.value


# (frequency, transverse wavenumber, azimuth) in the source frame -> density
SourceDensity = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _source_patches(
    channel: Channel, omega_max: float, slope: float, density: SourceDensity, plan: IntegrationPlan
) -> list[Patch]:
    """Evanescent and propagating patches of one radiating plate.

    ``slope`` places the seam where the partner plate's frequency changes
    sign: omega = slope * s * cos(phi) in source-frame variables. On the
    evanescent side that surface is omega = b*q / sqrt(1 - b^2) with
    b = slope * cos(phi), which becomes an edge of its own patches; the
    propagating region never reaches it since |slope| < 1.
    """
    span, fold = _angular(plan)

    def evanescent(
        phi_start: float,
        phi_span: float,
        lower: Callable[[np.ndarray, np.ndarray], np.ndarray],
        upper: Callable[[np.ndarray, np.ndarray], np.ndarray],
    ) -> Callable[[np.ndarray], np.ndarray]:
        def integrand(t: np.ndarray) -> np.ndarray:
            q = t[:, 1] / (1.0 - t[:, 1])
            phi = phi_start + phi_span * t[:, 2]
            lo, hi = lower(q, phi), upper(q, phi)
            omega = lo + (hi - lo) * t[:, 0]
            s = np.sqrt(omega * omega + q * q)
            jac = (hi - lo) * phi_span * fold * q / (1.0 - t[:, 1]) ** 2
            return density(omega, s, phi) * jac

        return integrand

    def propagating(t: np.ndarray) -> np.ndarray:
        omega = omega_max * t[:, 0]
        theta = 0.5 * math.pi * t[:, 1]
        phi = span * t[:, 2]
        jac = omega_max * 0.5 * math.pi * span * fold * omega**2 * np.sin(theta) * np.cos(theta)
        return density(omega, omega * np.sin(theta), phi) * jac

    def floor(q: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return np.zeros_like(q)

    def ceiling(q: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return np.full_like(q, omega_max)

    def seam(q: np.ndarray, phi: np.ndarray) -> np.ndarray:
        b = np.clip(slope * np.cos(phi), 0.0, None)
        return np.minimum(b * q / np.sqrt(1.0 - b * b), omega_max)

    name = channel.value
    last = Patch(f"{name}:propagating", propagating)
    if slope == 0.0:
        return [Patch(f"{name}:evanescent", evanescent(0.0, span, floor, ceiling)), last]
    # the seam only exists on the half of the circle where slope * cos(phi) > 0
    half = 0.5 * span
    if plan.fold_v:
        seam_start, far_start = (0.0, half) if slope > 0 else (half, 0.0)
    else:
        seam_start, far_start = (-0.5 * half, 0.5 * half) if slope > 0 else (0.5 * half, -0.5 * half)
    return [
        Patch(f"{name}:below_seam", evanescent(seam_start, half, floor, seam)),
        Patch(f"{name}:above_seam", evanescent(seam_start, half, seam, ceiling)),
        Patch(f"{name}:evanescent", evanescent(far_start, half, floor, ceiling)),
        last,
    ]


def _plate1_patches(channel: Channel, cavity: Cavity, plan: IntegrationPlan) -> list[Patch]:
    def density(omega: np.ndarray, s: np.ndarray, phi: np.ndarray) -> np.ndarray:
        return _real_density(channel, cavity, omega, s * np.cos(phi), s * np.sin(phi), thermal=True)

    # plate 2 sees omega' < 0 below omega = beta * u
    return _source_patches(channel, plan.cutoff * cavity.t1, cavity.beta, density, plan)


def _to_lab(cavity: Cavity, omega_p: np.ndarray, u_p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Co-moving (omega', u') to lab (omega, u), folding omega < 0 onto (-omega, -u)."""
    g, b = cavity.gamma, cavity.beta
    omega = g * (omega_p + b * u_p)
    u = g * (u_p + b * omega_p)
    flip = omega < 0
    return np.where(flip, -omega, omega), np.where(flip, -u, u)


def _plate2_patches(channel: Channel, cavity: Cavity, plan: IntegrationPlan) -> list[Patch]:
    def density(omega_p: np.ndarray, s_p: np.ndarray, phi: np.ndarray) -> np.ndarray:
        omega, u = _to_lab(cavity, omega_p, s_p * np.cos(phi))
        return _real_density(channel, cavity, omega, u, s_p * np.sin(phi), thermal=True)

    # the lab frequency of plate 1 changes sign at omega' = -beta * u'
    return _source_patches(channel, plan.cutoff * cavity.t2, -cavity.beta, density, plan)


def _qvac_imag_patches(cavity: Cavity, plan: IntegrationPlan) -> list[Patch]:
    span, fold = _angular(plan)
    radius = plan.disk_radius

    def _density(kappa: np.ndarray, s: np.ndarray, phi: np.ndarray) -> np.ndarray:
        ctx = build_imaginary_context(kappa, s * np.cos(phi), s * np.sin(phi), cavity.beta)
        refl = reflect(ctx, cavity.medium1, cavity.medium2)
        return evaluate_density(Channel.QVAC_IMAG, ctx, refl).value

    def full(t: np.ndarray) -> np.ndarray:
        big_w = t[:, 0] / (1.0 - t[:, 0])
        alpha = 0.5 * math.pi * t[:, 1]
        phi = span * t[:, 2]
        jac = 0.5 * math.pi * span * fold * big_w**2 * np.sin(alpha) / (1.0 - t[:, 0]) ** 2
        return _density(big_w * np.cos(alpha), big_w * np.sin(alpha), phi) * jac

    def disk(t: np.ndarray) -> np.ndarray:
        assert radius is not None
        kappa = t[:, 0] / (1.0 - t[:, 0])
        s = radius * t[:, 1]
        phi = span * t[:, 2]
        jac = radius * span * fold * s / (1.0 - t[:, 0]) ** 2
        return _density(kappa, s, phi) * jac

    if radius is None:
        return [Patch("qvac_imag:quadrant", full)]
    return [Patch("qvac_imag:disk", disk)]


def _qvac_real_patches(cavity: Cavity, plan: IntegrationPlan) -> list[Patch]:
    span, fold = _angular(plan)
    radius = plan.disk_radius if plan.disk_radius is not None else DEFAULT_DISK_RADIUS
    omega_max = plan.real_omega_max
    if omega_max <= radius:
        raise ValueError(f"real_omega_max ({omega_max}) must exceed the disk radius ({radius})")

    def evanescent(t: np.ndarray) -> np.ndarray:
        s = radius * t[:, 1]
        omega = s * t[:, 0]
        phi = span * t[:, 2]
        jac = radius * span * fold * s * s
        return _real_density(Channel.QVAC_REAL, cavity, omega, s * np.cos(phi), s * np.sin(phi), thermal=False) * jac

    def propagating(t: np.ndarray) -> np.ndarray:
        s = radius * t[:, 1]
        omega = s + (omega_max - s) * t[:, 0]
        phi = span * t[:, 2]
        jac = radius * span * fold * s * (omega_max - s)
        return _real_density(Channel.QVAC_REAL, cavity, omega, s * np.cos(phi), s * np.sin(phi), thermal=False) * jac

    return [Patch("qvac_real:evanescent", evanescent), Patch("qvac_real:propagating", propagating)]


def build_patches(channel: Channel | str, cavity: Cavity, plan: IntegrationPlan) -> list[Patch]:
    """Patches whose sum is the integrated channel.

    Real-axis channels carry only their thermal part; an empty list means the
    thermal part vanishes identically (source plate at T = 0).
    """
    channel = Channel(channel)
    if channel is Channel.QVAC_IMAG:
        return _qvac_imag_patches(cavity, plan)
    if channel is Channel.QVAC_REAL:
        return _qvac_real_patches(cavity, plan)
    if channel is Channel.LATERAL:
        patches: list[Patch] = []
        if cavity.t1 > 0:
            patches += _plate1_patches(Channel.SIGMA1_XY, cavity, plan)
        if cavity.t2 > 0:
            patches += _plate2_patches(Channel.SIGMA2_XY, cavity, plan)
        return patches
    if channel.source_plate == 1:
        return _plate1_patches(channel, cavity, plan) if cavity.t1 > 0 else []
    if channel.source_plate == 2:
        return _plate2_patches(channel, cavity, plan) if cavity.t2 > 0 else []
    raise ValueError(f"Unknown channel: {channel}")


# --- Public API ---


def _as_cavity(cavity: Cavity | CavityConfig) -> Cavity:
    return cavity.reduced() if isinstance(cavity, CavityConfig) else cavity


async def async_integrate_channel(
    channel: Channel | str,
    cavity: Cavity | CavityConfig,
    plan: IntegrationPlan | None = None,
    *,
    debug: bool = False,
    executor: Executor | None = None,
) -> ChannelIntegral:
    channel = Channel(channel)
    cavity = _as_cavity(cavity)
    plan = plan or IntegrationPlan()
    patches = build_patches(channel, cavity, plan)
    event_log = EventLog(channel.value) if debug else None
    if not patches:
        logger.info("Channel %s: thermal part vanishes (T = 0)", channel.value)
        return ChannelIntegral(channel, 0.0, 0.0, 0, True, event_log=event_log)

    own_executor = executor is None
    pool = executor or ThreadPoolExecutor(max_workers=plan.threads)
    try:
        value, error, evaluations, converged, cells, excluded = await _adaptive(
            channel.value, patches, plan, plan.tolerance_for(channel), pool, event_log
        )
    finally:
        if own_executor:
            pool.shutdown(wait=True)

    tail = 0.0
    if channel not in (Channel.QVAC_IMAG, Channel.QVAC_REAL):
        tail = planck_tail_fraction(plan.cutoff) * abs(value)
    if not converged:
        logger.warning(
            "Channel %s did not converge: %.6e +- %.3e after %d cells",
            channel.value, value, error, cells,
        )
    if tail > max(plan.abs_tol, plan.tolerance_for(channel) * abs(value)):
        logger.warning("Channel %s: Planck tail bound %.3e exceeds tolerance", channel.value, tail)
    logger.info(
        "Channel %s: %.10e +- %.3e (%d evaluations, %d cells)",
        channel.value, value, error, evaluations, cells,
    )
    if debug and event_log is not None:
        logger.debug("Quadrature events for %s:\n%s", channel.value, event_log.format())
    return ChannelIntegral(
        channel=channel,
        value=value,
        error=error,
        evaluations=evaluations,
        converged=converged,
        cells=cells,
        tail_bound=tail,
        excluded=excluded,
        event_log=event_log,
    )


def integrate_channel(
    channel: Channel | str,
    cavity: Cavity | CavityConfig,
    plan: IntegrationPlan | None = None,
    *,
    debug: bool = False,
) -> ChannelIntegral:
    return asyncio.run(async_integrate_channel(channel, cavity, plan, debug=debug))


_FORCE_CHANNELS = (
    Channel.QVAC_IMAG,
    Channel.SIGMA1_XX,
    Channel.SIGMA2_XX,
    Channel.SIGMA1_XY,
    Channel.SIGMA2_XY,
    Channel.POYNTING1_X,
)
_HEAT_CHANNELS = (Channel.POYNTING1_X, Channel.POYNTING2_X)


def _combined_error(*integrals: ChannelIntegral) -> float:
    quad = math.sqrt(math.fsum(i.error**2 for i in integrals))
    return quad + math.fsum(i.tail_bound for i in integrals)


async def _integrate_all(
    channels: tuple[Channel, ...], cavity: Cavity, plan: IntegrationPlan, debug: bool
) -> dict[Channel, ChannelIntegral]:
    pool = ThreadPoolExecutor(max_workers=plan.threads)
    try:
        results = await asyncio.gather(
            *[async_integrate_channel(ch, cavity, plan, debug=debug, executor=pool) for ch in channels]
        )
    finally:
        pool.shutdown(wait=True)
    return dict(zip(channels, results))


def _merged_log(integrals: dict[Channel, ChannelIntegral], debug: bool) -> EventLog | None:
    return EventLog.merge(i.event_log for i in integrals.values()) if debug else None


async def async_integrate_force(
    cavity: Cavity | CavityConfig,
    plan: IntegrationPlan | None = None,
    *,
    debug: bool = False,
) -> StressResult:
    """sigma_xx = qvac + thermal(1xx) + thermal(2xx); sigma_xy = thermal(1xy) + thermal(2xy)."""
    cavity = _as_cavity(cavity)
    plan = plan or IntegrationPlan()
    by_channel = await _integrate_all(_FORCE_CHANNELS, cavity, plan, debug)
    qvac = by_channel[Channel.QVAC_IMAG]
    xx1, xx2 = by_channel[Channel.SIGMA1_XX], by_channel[Channel.SIGMA2_XX]
    xy1, xy2 = by_channel[Channel.SIGMA1_XY], by_channel[Channel.SIGMA2_XY]
    flux = by_channel[Channel.POYNTING1_X]
    return StressResult(
        sigma_xx=StressParts(qvac.value, xx1.value, xx2.value),
        sigma_xy=StressParts(0.0, xy1.value, xy2.value),
        poynting_1x=flux.value,
        errors={
            "sigma_xx": _combined_error(qvac, xx1, xx2),
            "sigma_xy": _combined_error(xy1, xy2),
            "poynting_1x": _combined_error(flux),
        },
        evaluations=sum(r.evaluations for r in by_channel.values()),
        converged=all(r.converged for r in by_channel.values()),
        radiation_pressure=StressParts(
            0.0, blackbody_pressure(cavity.t1), blackbody_pressure(cavity.t2)
        ),
        integrals=by_channel,
        event_log=_merged_log(by_channel, debug),
    )


def integrate_force(
    cavity: Cavity | CavityConfig,
    plan: IntegrationPlan | None = None,
    *,
    debug: bool = False,
) -> StressResult:
    return asyncio.run(async_integrate_force(cavity, plan, debug=debug))


async def async_integrate_heat(
    cavity: Cavity | CavityConfig,
    plan: IntegrationPlan | None = None,
    *,
    debug: bool = False,
) -> HeatResult:
    """Thermal Poynting fluxes S1x(T1) and S'2x(T2) (reduced units)."""
    cavity = _as_cavity(cavity)
    plan = plan or IntegrationPlan()
    by_channel = await _integrate_all(_HEAT_CHANNELS, cavity, plan, debug)
    first, second = by_channel[Channel.POYNTING1_X], by_channel[Channel.POYNTING2_X]
    return HeatResult(
        poynting_1x=first.value,
        poynting_2x=second.value,
        errors={
            "poynting_1x": _combined_error(first),
            "poynting_2x": _combined_error(second),
        },
        evaluations=first.evaluations + second.evaluations,
        converged=first.converged and second.converged,
        integrals=by_channel,
        event_log=_merged_log(by_channel, debug),
    )


def integrate_heat(
    cavity: Cavity | CavityConfig,
    plan: IntegrationPlan | None = None,
    *,
    debug: bool = False,
) -> HeatResult:
    return asyncio.run(async_integrate_heat(cavity, plan, debug=debug))
