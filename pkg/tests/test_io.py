import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qrenyi.channels import CqChannel
from qrenyi.errors import DimensionMismatch, InputError, NotPSD, UnknownLabel
from qrenyi.exponents import depolarizing_channel
from qrenyi.io import (MalformedFile, channel_from_dict, channel_to_dict, csv_text, format_number,
                       operator_from_dict, operator_to_dict, parse_json, read_channel,
                       read_operator, write_channel, write_operator)
from qrenyi.sampling import random_state

from strategies import hermitians


class TestNumbers:
    def test_special_values(self):
        assert format_number(float("inf")) == "inf"
        assert format_number(float("-inf")) == "-inf"
        assert format_number(float("nan")) == "nan"
        assert format_number(0.0) == "0"
        assert format_number(-0.0) == "0"

    @given(st.floats(allow_nan=False, allow_infinity=False))
    def test_round_trip(self, x):
        assert float(format_number(x)) == x

    def test_csv(self):
        assert csv_text(["a", "b"], [[1.5, "x"]]) == "a,b\n1.5,x\n"


class TestOperators:
    @given(hermitians())
    def test_round_trip(self, A):
        B = operator_from_dict(json.loads(json.dumps(operator_to_dict(A))))
        assert np.max(np.abs(A - B)) <= 1e-12

    def test_file_round_trip(self, tmp_path, rng):
        rho = random_state(3, rng=rng)
        write_operator(tmp_path / "rho.json", rho)
        assert np.max(np.abs(read_operator(tmp_path / "rho.json") - rho)) <= 1e-12

    def test_dim_mismatch(self):
        data = operator_to_dict(np.eye(2))
        data["dim"] = 3
        with pytest.raises(DimensionMismatch):
            operator_from_dict(data)

    def test_bad_entries(self):
        with pytest.raises(MalformedFile):
            operator_from_dict({"matrix": [[1, 0], [0, 1]]})
        with pytest.raises(MalformedFile):
            operator_from_dict({"dim": 2})

    def test_malformed_json_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"dim": 2,\n "matrix": [[[1, 0] [0, 0]]]}\n')
        with pytest.raises(MalformedFile, match="line 2, column"):
            read_operator(path)

    def test_parse_json_position(self):
        with pytest.raises(MalformedFile, match="line 1, column 2"):
            parse_json("{x}")

    def test_missing_file(self, tmp_path):
        with pytest.raises(InputError):
            read_operator(tmp_path / "absent.json")


class TestChannels:
    def test_round_trip(self, tmp_path, rng):
        W = CqChannel.from_states([random_state(2, rng=rng) for _ in range(3)], ["a", "b", "c"])
        prior = np.array([0.2, 0.3, 0.5])
        write_channel(tmp_path / "w.json", W, prior)
        spec = read_channel(tmp_path / "w.json")
        assert spec.channel.labels == W.labels
        for A, B in zip(spec.channel.outputs, W.outputs):
            assert np.max(np.abs(A - B)) <= 1e-12
        assert np.allclose(spec.prior, prior)
        assert spec.kraus is None

    def test_kraus_round_trip(self):
        Phi = depolarizing_channel(0.2)
        spec = channel_from_dict(json.loads(json.dumps(channel_to_dict(kraus=Phi))))
        assert spec.channel is None
        for A, B in zip(spec.kraus.kraus, Phi.kraus):
            assert np.max(np.abs(A - B)) <= 1e-12

    def test_unknown_prior_label(self):
        data = channel_to_dict(CqChannel.from_states([np.eye(2) / 2] * 2, ["0", "1"]))
        data["prior"] = {"0": 0.5, "7": 0.5}
        with pytest.raises(UnknownLabel):
            channel_from_dict(data)

    def test_prior_must_sum_to_one(self):
        data = channel_to_dict(CqChannel.from_states([np.eye(2) / 2] * 2))
        data["prior"] = {"0": 0.5, "1": 0.6}
        with pytest.raises(InputError):
            channel_from_dict(data)

    def test_output_must_be_state(self):
        data = channel_to_dict(CqChannel.from_states([np.eye(2) / 2] * 2))
        data["inputs"][0]["matrix"] = [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]
        with pytest.raises(NotPSD):
            channel_from_dict(data)

    def test_needs_content(self):
        with pytest.raises(MalformedFile):
            channel_from_dict({"dim": 2})
