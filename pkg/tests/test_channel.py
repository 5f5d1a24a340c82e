import cmath
import math

import numpy as np
import pytest

from risjam.channel import (
    ElementChannel,
    build_channel_set,
    cascaded_gain,
    channel_dump_rows,
    los_channel,
)
from risjam.scene import (
    ISOTROPIC,
    AntennaPattern,
    DegenerateGeometryError,
    Position3D,
    distance,
    fspl,
    pattern_gain,
    rotation_to_frame,
)

FC = 3.75e9
LAM = 299_792_458.0 / FC


def _wrapped_distance(phase: float) -> float:
    return min(phase, 2 * math.pi - phase)


class TestLosChannel:
    def test_full_wavelength_phase_wrap(self):
        ch = los_channel(Position3D(0, 0, 0), Position3D(LAM, 0, 0), FC, ISOTROPIC, ISOTROPIC)
        assert _wrapped_distance(ch.phase) < 1e-6

    def test_half_wavelength(self):
        ch = los_channel(Position3D(0, 0, 0), Position3D(LAM / 2, 0, 0), FC, ISOTROPIC, ISOTROPIC)
        assert abs(ch.phase - math.pi) < 1e-6

    def test_isotropic_amplitude_is_sqrt_fspl(self):
        a, b = Position3D(0, 0, 0), Position3D(1.3, -0.4, 0.2)
        ch = los_channel(a, b, FC, ISOTROPIC, ISOTROPIC)
        assert ch.amplitude == pytest.approx(math.sqrt(fspl(distance(a, b), FC)), rel=1e-12)

    def test_table_geometry_composed_oracle(self):
        # compose the independent primitives: distance, fspl, pattern_gain
        tx = Position3D(0.74, 0.31, 0.0)
        el = Position3D(0.0, 0.0, 0.4)
        tx_pat = AntennaPattern(kind="cosine", boresight_gain_dbi=13.0)
        el_pat = AntennaPattern(kind="cosine")
        aim = el.as_array() - tx.as_array()
        normal = np.array([1.0, 0.0, 0.0])

        d = distance(tx, el)
        u = (el.as_array() - tx.as_array()) / d
        g_tx = pattern_gain(tx_pat, rotation_to_frame(aim) @ u)
        g_el = pattern_gain(el_pat, rotation_to_frame(normal) @ (-u))
        expected_amp = math.sqrt(fspl(d, FC) * g_tx * g_el)
        expected_phase = math.fmod(2 * math.pi * d / LAM, 2 * math.pi)

        ch = los_channel(tx, el, FC, tx_pat, el_pat, tx_boresight=aim, el_boresight=normal)
        assert d == pytest.approx(0.8965, abs=5e-5)
        assert ch.amplitude == pytest.approx(expected_amp, rel=1e-12)
        assert ch.phase == pytest.approx(expected_phase, rel=1e-12)

    def test_coincident_points_raise(self):
        p = Position3D(1, 2, 3)
        with pytest.raises(DegenerateGeometryError):
            los_channel(p, p, FC, ISOTROPIC, ISOTROPIC)

    def test_phase_in_range(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            a = Position3D(*rng.uniform(-2, 2, 3))
            b = Position3D(*rng.uniform(-2, 2, 3))
            if distance(a, b) < 1e-6:
                continue
            ch = los_channel(a, b, FC, ISOTROPIC, ISOTROPIC)
            assert 0.0 <= ch.phase < 2 * math.pi


def _mirror_index(n: int, rows: int, cols: int) -> int:
    r, c = divmod(n, cols)
    return r * cols + (cols - 1 - c)


class TestBuildChannelSet:
    def test_table_scenario_lengths(self, table_channels):
        for name in ("s", "a", "b", "e"):
            assert len(table_channels.link(name)) == 256

    def test_all_amplitudes_positive(self, table_channels):
        for name in ("s", "a", "b", "e"):
            assert np.all(table_channels.amplitudes(name) > 0)

    def test_mirror_symmetry_of_default_scenario(self, table_scenario, table_channels):
        # the bundled scenario is exactly y-mirror symmetric: the CS/Bob side
        # channels map onto the AN/Eve side under column reflection
        ch = table_channels
        rows, cols = table_scenario.ris.rows, table_scenario.ris.cols
        for n in range(ch.n_elements):
            m = _mirror_index(n, rows, cols)
            assert ch.h_s[n].amplitude == pytest.approx(ch.h_a[m].amplitude, rel=1e-12)
            assert ch.h_b[n].amplitude == pytest.approx(ch.h_e[m].amplitude, rel=1e-12)
            assert ch.h_s[n].phase == pytest.approx(ch.h_a[m].phase, rel=1e-9, abs=1e-9)

    def test_mirroring_an_asymmetric_scenario(self):
        # mirroring a scenario across y swaps the CS/AN and Bob/Eve roles and
        # reflects the panel columns; the channel sets must map onto each other
        from dataclasses import replace

        from risjam.harness import default_scenario
        from risjam.scene import Position3D as P

        def flip(p):
            return P(p.x, -p.y, p.z)

        sc = replace(
            default_scenario(),
            cs_tx=P(0.74, 0.36, 0.05),
            an_tx=P(0.70, -0.22, -0.04),
            bob=P(1.19, 1.10, 0.11),
            eve=P(1.30, -1.41, 0.0),
        )
        mirrored = replace(sc, cs_tx=flip(sc.an_tx), an_tx=flip(sc.cs_tx),
                           bob=flip(sc.eve), eve=flip(sc.bob))
        a, b = build_channel_set(sc), build_channel_set(mirrored)
        rows, cols = sc.ris.rows, sc.ris.cols
        for n in range(a.n_elements):
            m = _mirror_index(n, rows, cols)
            assert a.h_s[n].amplitude == pytest.approx(b.h_a[m].amplitude, rel=1e-12)
            assert a.h_a[n].amplitude == pytest.approx(b.h_s[m].amplitude, rel=1e-12)
            assert a.h_b[n].amplitude == pytest.approx(b.h_e[m].amplitude, rel=1e-12)
            assert a.h_e[n].amplitude == pytest.approx(b.h_b[m].amplitude, rel=1e-12)

    def test_two_element_mirror_toy(self):
        from risjam.scene import RisGeometry, ScenarioConfig

        sc = ScenarioConfig(
            fc_hz=FC, fs_hz=1.0, pt_dbm=0.0, noise_bob_dbm=-90.0, noise_eve_dbm=-90.0,
            cs_tx=Position3D(0.7, 0.2, 0.0), an_tx=Position3D(0.7, -0.2, 0.0),
            bob=Position3D(1.0, 1.0, 0.0), eve=Position3D(1.0, -1.0, 0.0),
            ris=RisGeometry(rows=1, cols=2, spacing=0.041, center=Position3D(0, 0, 0)),
            tx_pattern=ISOTROPIC, ris_element_pattern=ISOTROPIC,
        )
        ch = build_channel_set(sc)
        assert ch.h_s[0].amplitude == pytest.approx(ch.h_a[1].amplitude, rel=1e-12)
        assert ch.h_s[1].amplitude == pytest.approx(ch.h_a[0].amplitude, rel=1e-12)
        assert ch.h_b[0].amplitude == pytest.approx(ch.h_e[1].amplitude, rel=1e-12)

    def test_path_loss_values_in_unit_interval(self, table_channels):
        for key, value in table_channels.path_loss.items():
            assert 0.0 < value <= 1.0, key

    def test_path_loss_is_squared_mean_amplitude_product(self, table_channels):
        ch = table_channels
        idx = list(ch.partition("rb"))
        prod = ch.amplitudes("s")[idx] * ch.amplitudes("b")[idx]
        assert ch.path_loss[("s", "rb", "b")] == pytest.approx(float(np.mean(prod)) ** 2, rel=1e-12)

    def test_dump_rows_shape(self, table_channels):
        rows = list(channel_dump_rows(table_channels))
        assert len(rows) == 256
        assert rows[0][0] == 1 and rows[-1][0] == 256
        assert len(rows[0]) == 9


def _unit_channels(phases):
    return [ElementChannel(1.0, p) for p in phases]


class TestCascadedGain:
    def test_single_element_identity(self):
        g = cascaded_gain(_unit_channels([0.0]), _unit_channels([0.0]), [0.0], [0])
        assert g == pytest.approx(1.0 + 0.0j)

    def test_two_element_enumeration_oracle(self):
        # brute-force oracle: passive phases {0, pi}; enumerate all 4 binary configs
        in_ch = _unit_channels([0.0, math.pi])
        out_ch = _unit_channels([0.0, 0.0])
        results = {}
        for t0 in (0.0, math.pi):
            for t1 in (0.0, math.pi):
                g = cascaded_gain(in_ch, out_ch, [t0, t1], [0, 1])
                results[(t0, t1)] = abs(g)
        best = max(results.values())
        assert best == pytest.approx(2.0, rel=1e-12)
        winners = {k for k, v in results.items() if v == pytest.approx(2.0, rel=1e-12)}
        # (pi, 0) is (0, pi) plus a global pi offset: the same physical config
        assert winners == {(0.0, math.pi), (math.pi, 0.0)}
        assert results[(0.0, 0.0)] == pytest.approx(0.0, abs=1e-12)

    def test_coherent_sum_bound(self):
        n = 128
        g = cascaded_gain(_unit_channels([0.0] * n), _unit_channels([0.0] * n),
                          [0.0] * n, range(n))
        assert g == pytest.approx(n + 0j)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            n = int(rng.integers(2, 40))
            in_ch = [ElementChannel(float(a), float(p)) for a, p in
                     zip(rng.uniform(0.1, 2.0, n), rng.uniform(0, 2 * math.pi, n))]
            out_ch = [ElementChannel(float(a), float(p)) for a, p in
                      zip(rng.uniform(0.1, 2.0, n), rng.uniform(0, 2 * math.pi, n))]
            theta = rng.choice([0.0, math.pi], n)
            idx = list(range(n))
            g = cascaded_gain(in_ch, out_ch, theta, idx)
            amp = np.array([in_ch[k].amplitude * out_ch[k].amplitude for k in idx])
            bound = float(np.sum(amp / amp.mean()))
            assert abs(g) <= bound * (1 + 1e-12)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(5)
        n = 16
        in_ch = _unit_channels(rng.uniform(0, 2 * math.pi, n))
        out_ch = _unit_channels(rng.uniform(0, 2 * math.pi, n))
        theta = list(rng.choice([0.0, math.pi], n))
        idx = list(range(n))
        g1 = cascaded_gain(in_ch, out_ch, theta, idx)
        perm = list(rng.permutation(idx))
        g2 = cascaded_gain(in_ch, out_ch, theta, perm)
        assert g1 == pytest.approx(g2, rel=1e-12)

    def test_global_phase_offset_leaves_magnitude(self):
        rng = np.random.default_rng(6)
        n = 10
        in_ch = _unit_channels(rng.uniform(0, 2 * math.pi, n))
        out_ch = _unit_channels(rng.uniform(0, 2 * math.pi, n))
        theta = np.array(rng.choice([0.0, math.pi], n))
        g1 = cascaded_gain(in_ch, out_ch, theta, range(n))
        offset = 1.234
        shifted = [ElementChannel(c.amplitude, (c.phase + offset) % (2 * math.pi)) for c in in_ch]
        g2 = cascaded_gain(shifted, out_ch, theta, range(n))
        assert abs(g1) == pytest.approx(abs(g2), rel=1e-12)

    def test_matches_direct_complex_sum(self):
        rng = np.random.default_rng(7)
        n = 12
        amps_in = rng.uniform(0.5, 2.0, n)
        amps_out = rng.uniform(0.5, 2.0, n)
        ph_in = rng.uniform(0, 2 * math.pi, n)
        ph_out = rng.uniform(0, 2 * math.pi, n)
        theta = rng.choice([0.0, math.pi], n)
        in_ch = [ElementChannel(float(a), float(p)) for a, p in zip(amps_in, ph_in)]
        out_ch = [ElementChannel(float(a), float(p)) for a, p in zip(amps_out, ph_out)]
        idx = [3, 7, 1, 9]
        prod = amps_in[idx] * amps_out[idx]
        expected = sum(
            (prod[j] / prod.mean()) * cmath.exp(-1j * (ph_in[k] + ph_out[k] + theta[k]))
            for j, k in enumerate(idx)
        )
        got = cascaded_gain(in_ch, out_ch, theta, idx)
        assert got == pytest.approx(expected, rel=1e-12)

    def test_index_out_of_range(self):
        with pytest.raises(IndexError):
            cascaded_gain(_unit_channels([0.0]), _unit_channels([0.0]), [0.0, 0.0], [1])
        with pytest.raises(IndexError):
            cascaded_gain(_unit_channels([0.0]), _unit_channels([0.0]), [0.0], [-1])

    def test_element_channel_validation(self):
        with pytest.raises(ValueError):
            ElementChannel(-0.1, 0.0)
        with pytest.raises(ValueError):
            ElementChannel(1.0, 7.0)
