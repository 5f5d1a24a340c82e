"""Line-of-sight per-element channels and cascaded partition gains.

Each transmitter-to-element and element-to-receiver hop is a pure free-space
ray: phase from the exact per-element distance, amplitude from path loss and
the endpoint antenna gains. The cascaded gain of a partition is the coherent
sum over its elements with amplitudes normalized to unit mean, so received
powers factor exactly into (path-loss product L) x |gain|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as kernels
from .scene import (
    ISOTROPIC,
    AntennaPattern,
    DegenerateGeometryError,
    Position3D,
    ScenarioConfig,
    distance,
    fspl,
    partition_split,
    pattern_gain,
    rotation_to_frame,
)

TWO_PI = 2.0 * math.pi

#: (source, partition, user) keys of the path-loss map.
PATH_KEYS = tuple(
    (src, part, user) for src in ("s", "a") for part in ("rb", "re") for user in ("b", "e")
)


@dataclass(frozen=True)
class ElementChannel:
    """Single-hop channel h = amplitude * exp(-j*phase), phase in [0, 2pi)."""

    amplitude: float
    phase: float

    def __post_init__(self):
        if self.amplitude < 0.0:
            raise ValueError("amplitude must be non-negative")
        if not 0.0 <= self.phase < TWO_PI:
            raise ValueError("phase must lie in [0, 2pi)")


def los_channel(
    tx: Position3D,
    el: Position3D,
    fc: float,
    tx_pat: AntennaPattern,
    el_pat: AntennaPattern,
    tx_boresight: np.ndarray | None = None,
    el_boresight: np.ndarray | None = None,
) -> ElementChannel:
    """Free-space channel between two antennas.

    Boresights default to "aimed at the other endpoint" (on-axis gain); pass
    explicit world-frame boresight vectors for fixed antenna orientations.
    """
    d = distance(tx, el)
    if d <= 0.0:
        raise DegenerateGeometryError("coincident antenna positions")
    lam = 299_792_458.0 / fc
    direction = (el.as_array() - tx.as_array()) / d

    if tx_boresight is None:
        g_tx = pattern_gain(tx_pat, np.array([1.0, 0.0, 0.0]))
    else:
        g_tx = pattern_gain(tx_pat, rotation_to_frame(tx_boresight) @ direction)
    if el_boresight is None:
        g_el = pattern_gain(el_pat, np.array([1.0, 0.0, 0.0]))
    else:
        g_el = pattern_gain(el_pat, rotation_to_frame(el_boresight) @ (-direction))

    amplitude = math.sqrt(fspl(d, fc) * g_tx * g_el)
    phase = math.fmod(TWO_PI * d / lam, TWO_PI)
    return ElementChannel(amplitude=amplitude, phase=phase)


@dataclass
class ChannelSet:
    """Per-element channels for the four hops plus per-partition path-loss products.

    path_loss[(source, partition, user)] is the squared mean per-element
    amplitude product over that partition, so that power = L * |G|^2 with G
    the normalized cascaded gain.
    """

    h_s: tuple[ElementChannel, ...]
    h_a: tuple[ElementChannel, ...]
    h_b: tuple[ElementChannel, ...]
    h_e: tuple[ElementChannel, ...]
    path_loss: dict[tuple[str, str, str], float]
    bob_indices: tuple[int, ...]
    eve_indices: tuple[int, ...]
    _arrays: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_elements(self) -> int:
        return len(self.h_s)

    def link(self, name: str) -> tuple[ElementChannel, ...]:
        return {"s": self.h_s, "a": self.h_a, "b": self.h_b, "e": self.h_e}[name]

    def amplitudes(self, name: str) -> np.ndarray:
        key = ("amp", name)
        if key not in self._arrays:
            self._arrays[key] = np.array([c.amplitude for c in self.link(name)])
        return self._arrays[key]

    def phases(self, name: str) -> np.ndarray:
        key = ("phase", name)
        if key not in self._arrays:
            self._arrays[key] = np.array([c.phase for c in self.link(name)])
        return self._arrays[key]

    def partition(self, which: str) -> tuple[int, ...]:
        if which == "rb":
            return self.bob_indices
        if which == "re":
            return self.eve_indices
        raise ValueError(f"partition must be 'rb' or 're', got {which!r}")


def build_channel_set(sc: ScenarioConfig) -> ChannelSet:
    """Synthesize all per-element channels and path-loss products for a scenario.

    The communication-signal antenna is aimed at the centroid of Bob's
    partition and the noise antenna at the centroid of Eve's partition (each
    signal feeds its own panel half); RIS elements radiate along the surface
    normal on both hops; receivers are isotropic.
    """
    elements = sc.elements
    normal = np.asarray(sc.ris.normal, dtype=float)
    bob_idx, eve_idx = partition_split(sc.ris)

    def centroid(indices) -> np.ndarray:
        return np.mean([elements[n].as_array() for n in indices], axis=0)

    aim_cs = centroid(bob_idx) - sc.cs_tx.as_array()
    aim_an = centroid(eve_idx) - sc.an_tx.as_array()

    h_s = tuple(
        los_channel(sc.cs_tx, el, sc.fc_hz, sc.tx_pattern, sc.ris_element_pattern,
                    tx_boresight=aim_cs, el_boresight=normal)
        for el in elements
    )
    h_a = tuple(
        los_channel(sc.an_tx, el, sc.fc_hz, sc.tx_pattern, sc.ris_element_pattern,
                    tx_boresight=aim_an, el_boresight=normal)
        for el in elements
    )
    h_b = tuple(
        los_channel(el, sc.bob, sc.fc_hz, sc.ris_element_pattern, ISOTROPIC,
                    tx_boresight=normal)
        for el in elements
    )
    h_e = tuple(
        los_channel(el, sc.eve, sc.fc_hz, sc.ris_element_pattern, ISOTROPIC,
                    tx_boresight=normal)
        for el in elements
    )

    links = {"s": h_s, "a": h_a, "b": h_b, "e": h_e}
    path_loss = {}
    for src, part, user in PATH_KEYS:
        idx = bob_idx if part == "rb" else eve_idx
        prod = np.array([links[src][n].amplitude * links[user][n].amplitude for n in idx])
        path_loss[(src, part, user)] = float(np.mean(prod)) ** 2
    return ChannelSet(
        h_s=h_s, h_a=h_a, h_b=h_b, h_e=h_e,
        path_loss=path_loss, bob_indices=bob_idx, eve_indices=eve_idx,
    )


def cascaded_gain(in_ch, out_ch, phases, indices) -> complex:
    """Normalized coherent gain of an element set.

    Returns sum over n in indices of a_n * exp(-j*(phi_in + phi_out + theta_n))
    with a_n the per-element amplitude product divided by its mean over the
    set, so a perfectly phase-aligned set of k elements has |gain| = k.
    """
    idx = np.asarray(list(indices), dtype=np.intp)
    if idx.size == 0:
        return 0j
    if idx.min() < 0 or idx.max() >= min(len(in_ch), len(out_ch)):
        raise IndexError("cascaded_gain index outside the channel lists")
    amp = np.array([in_ch[n].amplitude * out_ch[n].amplitude for n in idx])
    mean = float(np.mean(amp))
    if mean == 0.0:
        return 0j
    psi = np.array([in_ch[n].phase + out_ch[n].phase for n in idx])
    theta = np.ascontiguousarray(np.asarray(phases, dtype=float)[idx])
    return kernels.coherent_sum(np.ascontiguousarray(amp / mean), np.ascontiguousarray(psi), theta)


def channel_dump_rows(ch: ChannelSet):
    """Rows (n, amp/phase for each of the four hops) with 1-based element index."""
    for n in range(ch.n_elements):
        yield (
            n + 1,
            ch.h_s[n].amplitude, ch.h_s[n].phase,
            ch.h_a[n].amplitude, ch.h_a[n].phase,
            ch.h_b[n].amplitude, ch.h_b[n].phase,
            ch.h_e[n].amplitude, ch.h_e[n].phase,
        )


CHANNEL_DUMP_COLUMNS = (
    "n",
    "h_s_amp", "h_s_phase",
    "h_a_amp", "h_a_phase",
    "h_b_amp", "h_b_phase",
    "h_e_amp", "h_e_phase",
)
