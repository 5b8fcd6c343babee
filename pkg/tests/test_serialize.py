import json
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gatefid.channels import ChoiMatrix, choi_from_kraus, depolarizing, validate_cptp
from gatefid.minimum import StateNet, build_net
from gatefid.sampling import RngSpec, levy_bound, mc_fidelity_stats
from gatefid.serialize import (
    canonical_hash,
    channel_from_dict,
    channel_to_dict,
    choi_from_dict,
    choi_to_dict,
    concentration_to_dict,
    cptp_report_to_dict,
    dumps_canonical,
    load_channel,
    load_operator,
    net_from_dict,
    net_to_dict,
    pairs_to_matrix,
    read_json,
    state_from_dict,
    state_to_dict,
    stats_to_dict,
    unitary_from_dict,
    unitary_to_dict,
    write_csv,
    write_json,
)


def _bits(x: float) -> bytes:
    return struct.pack("<d", x)


class TestCanonicalJson:
    def test_floats_round_trip_exactly(self):
        awkward = [0.1, 1.0 / 3.0, 2.0 / 3.0, 1e-300, 1e300, 0.30618621784789674]
        parsed = json.loads(dumps_canonical(awkward))
        for original, back in zip(awkward, parsed):
            assert _bits(original) == _bits(back)

    @given(st.floats(allow_nan=False, allow_infinity=False))
    @settings(max_examples=200, deadline=None)
    def test_any_finite_float_round_trips(self, x):
        back = json.loads(dumps_canonical(x))
        assert _bits(x) == _bits(back)

    def test_integral_floats_stay_floats(self):
        text = dumps_canonical({"a": 2.0, "b": 2})
        assert text == '{"a":2.0,"b":2}'
        parsed = json.loads(text)
        assert isinstance(parsed["a"], float)
        assert isinstance(parsed["b"], int)

    def test_bool_is_not_int(self):
        assert dumps_canonical([True, False, 1, 0]) == "[true,false,1,0]"

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            dumps_canonical(float("nan"))
        with pytest.raises(ValueError):
            dumps_canonical({"x": float("inf")})

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            dumps_canonical({"x": object()})
        with pytest.raises(TypeError):
            dumps_canonical({1: "non-string key"})

    def test_key_order_is_insertion_order(self):
        assert dumps_canonical({"b": 1, "a": 2}) == '{"b":1,"a":2}'

    def test_byte_determinism_and_hash(self):
        payload = {"values": [0.1, 0.2], "n": 3, "tag": "x"}
        assert dumps_canonical(payload) == dumps_canonical(payload)
        assert canonical_hash(payload) == canonical_hash(payload)
        assert canonical_hash(payload) != canonical_hash({"values": [0.1], "n": 3})
        assert len(canonical_hash(payload)) == 64


class TestChannelSerialization:
    def test_round_trip(self, tmp_path):
        ch = depolarizing(0.3, 3)
        path = tmp_path / "ch.json"
        write_json(path, channel_to_dict(ch))
        back = load_channel(path)
        assert back.dim_in == 3 and back.dim_out == 3
        assert np.array_equal(np.stack(back.kraus), np.stack(ch.kraus))

    def test_written_files_are_byte_identical(self, tmp_path):
        ch = depolarizing(0.7, 2)
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_json(a, channel_to_dict(ch))
        write_json(b, channel_to_dict(ch))
        assert a.read_bytes() == b.read_bytes()

    def test_choi_round_trip(self, tmp_path):
        choi = choi_from_kraus(depolarizing(0.4, 2))
        path = tmp_path / "choi.json"
        write_json(path, choi_to_dict(choi))
        back = load_operator(path)
        assert isinstance(back, ChoiMatrix)
        assert np.array_equal(back.matrix, choi.matrix)

    def test_load_channel_converts_choi(self, tmp_path):
        choi = choi_from_kraus(depolarizing(0.4, 2))
        path = tmp_path / "choi.json"
        write_json(path, choi_to_dict(choi))
        ch = load_channel(path)
        report = validate_cptp(ch)
        assert report.is_cp and report.is_tp
        diff = choi_from_kraus(ch).matrix - choi.matrix
        assert np.max(np.abs(diff)) < 1e-12

    def test_missing_kraus_field(self):
        with pytest.raises(ValueError, match="missing field 'kraus'"):
            channel_from_dict({"dim_in": 2, "dim_out": 2})

    def test_missing_dims(self):
        with pytest.raises(ValueError, match="'dim_in'"):
            channel_from_dict({"kraus": []})

    def test_bad_kraus_shape_names_entry(self):
        good = channel_to_dict(depolarizing(0.5, 2))
        good["kraus"][1] = [[[1.0, 0.0]]]  # 1x1 instead of 2x2
        with pytest.raises(ValueError, match=r"kraus\[1\]"):
            channel_from_dict(good)

    def test_bad_pair_entry_named(self):
        with pytest.raises(ValueError, match=r"entry \(0,1\)"):
            pairs_to_matrix([[[1.0, 0.0], [1.0]]], "m")

    def test_choi_shape_check(self):
        data = choi_to_dict(choi_from_kraus(depolarizing(0.4, 2)))
        data["dim_in"] = 3
        with pytest.raises(ValueError, match="'choi'"):
            choi_from_dict(data)

    def test_neither_kraus_nor_choi(self, tmp_path):
        path = tmp_path / "odd.json"
        write_json(path, {"dim_in": 2})
        with pytest.raises(ValueError, match="neither 'kraus' nor 'choi'"):
            load_operator(path)

    def test_malformed_json_reports_path(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ValueError, match="malformed JSON"):
            read_json(path)


class TestSmallObjects:
    def test_unitary_round_trip(self):
        h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
        back = unitary_from_dict(unitary_to_dict(h))
        assert np.array_equal(back, h.astype(complex))

    def test_unitary_must_be_square(self):
        with pytest.raises(ValueError, match="'unitary'"):
            unitary_from_dict({"unitary": [[[1.0, 0.0], [0.0, 0.0]]]})

    def test_state_round_trip(self):
        v = np.array([1.0, 1.0j]) / np.sqrt(2.0)
        back = state_from_dict(state_to_dict(v))
        assert np.max(np.abs(back - v)) < 1e-16

    def test_state_norm_check(self):
        with pytest.raises(ValueError, match="'state'"):
            state_from_dict({"state": [[1.0, 0.0], [1.0, 0.0]]})

    def test_stats_dict_carries_seed(self):
        stats = mc_fidelity_stats(depolarizing(0.7, 2), None, 500, rng=11)
        data = stats_to_dict(stats)
        assert data["seed"] == {"seed": 11, "algorithm_id": "pcg64-block4096"}
        assert data["n"] == 500
        assert set(data) == {"n", "mean", "variance", "min", "max", "stderr", "seed"}

    def test_cptp_report_dict(self):
        data = cptp_report_to_dict(validate_cptp(depolarizing(0.5, 2)))
        assert data["is_cp"] is True and data["is_tp"] is True
        assert set(data) == {
            "is_cp",
            "is_tp",
            "min_eigenvalue",
            "tp_residual",
            "hermiticity_gap",
            "tolerance",
        }

    def test_concentration_dict(self):
        data = concentration_to_dict(levy_bound(1024, 0.1))
        assert data["d"] == 1024 and data["epsilon"] == 0.1
        assert data["one_sided_bound"] == data["two_sided_bound"] / 2.0


class TestNetSerialization:
    def test_round_trip(self, tmp_path):
        net = build_net(2, 0.9, rng=5)
        path = tmp_path / "net.json"
        write_json(path, net_to_dict(net))
        back = net_from_dict(read_json(path))
        assert isinstance(back, StateNet)
        assert back.d == net.d and back.epsilon == net.epsilon
        assert back.seed == net.seed
        assert np.array_equal(back.states, net.states)

    def test_unknown_metric_rejected(self):
        data = net_to_dict(build_net(2, 0.9, rng=5))
        data["metric_id"] = "chebyshev"
        with pytest.raises(ValueError, match="'metric_id'"):
            net_from_dict(data)

    def test_non_unit_state_rejected(self):
        data = net_to_dict(build_net(2, 0.9, rng=5))
        data["states"][0][0] = [2.0, 0.0]
        with pytest.raises(ValueError, match=r"states\[0\]"):
            net_from_dict(data)

    def test_wrong_length_state_rejected(self):
        data = net_to_dict(build_net(2, 0.9, rng=5))
        data["states"][0] = [[1.0, 0.0]]
        with pytest.raises(ValueError, match=r"states\[0\]"):
            net_from_dict(data)


class TestCsv:
    def test_fixed_columns_and_formatting(self, tmp_path):
        path = tmp_path / "out.csv"
        rows = [
            {"d": 2, "x": 0.1, "label": "a", "flag": True},
            {"d": 4, "x": 2.0, "label": "b", "flag": False},
        ]
        write_csv(path, rows, columns=("d", "x", "label", "flag"))
        text = path.read_text(encoding="utf-8")
        lines = text.splitlines()
        assert lines[0] == "d,x,label,flag"
        assert lines[1].startswith("2,0.1")
        assert lines[1].endswith("a,true")
        assert lines[2] == "4,2.0,b,false"

    def test_byte_determinism(self, tmp_path):
        rows = [{"a": 1.0 / 3.0, "b": 7}]
        p1, p2 = tmp_path / "1.csv", tmp_path / "2.csv"
        write_csv(p1, rows, columns=("a", "b"))
        write_csv(p2, rows, columns=("a", "b"))
        assert p1.read_bytes() == p2.read_bytes()
        value = float(p1.read_text().splitlines()[1].split(",")[0])
        assert _bits(value) == _bits(1.0 / 3.0)


class TestRngSpecValidation:
    def test_defaults(self):
        spec = RngSpec(seed=3)
        assert spec.algorithm_id == "pcg64-block4096"
