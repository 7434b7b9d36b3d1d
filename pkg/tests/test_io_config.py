import numpy as np
import pytest

from squeezenhse.config import (ConfigError, emit_config, load_config,
                                parse_config)
from squeezenhse.io import format_value, write_csv, write_json
from squeezenhse.presets import FIGURE_PRESETS, preset_config

MINIMAL = """
[model]
j_y = [0.0, 1.0]
j_xy = [0.0, 4.0]
delta0 = [3.0, 0.0]
delta_x = [2.0, 0.0]

[lattice]
l_x = 8
l_y = 8
bc_y = "periodic"
"""


class TestFormatValue:
    def test_float_roundtrips(self):
        for x in (0.1, 1.0 / 3.0, -2.5e-300, 1e17 + 1.0):
            assert float(format_value(x)) == x

    def test_int_and_str(self):
        assert format_value(7) == "7"
        assert format_value("abc") == "abc"

    def test_numpy_scalars(self):
        assert format_value(np.float64(0.5)) == "0.5"
        assert format_value(np.int64(3)) == "3"

    def test_rejected_types(self):
        for bad in (True, 1 + 2j, None, [1.0]):
            with pytest.raises(TypeError):
                format_value(bad)


class TestWriters:
    def test_csv_contents(self, tmp_path):
        p = tmp_path / "t.csv"
        write_csv(p, ["a", "b"], [(1, 0.5), (2, -1.0)])
        assert p.read_text() == "a,b\n1,0.5\n2,-1\n"

    def test_csv_width_check(self, tmp_path):
        with pytest.raises(ValueError):
            write_csv(tmp_path / "t.csv", ["a", "b"], [(1,)])

    def test_no_tmp_leftover_on_failure(self, tmp_path):
        p = tmp_path / "t.csv"
        with pytest.raises(TypeError):
            write_csv(p, ["a"], [(1,), (None,)])
        assert list(tmp_path.iterdir()) == []

    def test_csv_deterministic(self, tmp_path):
        rows = [(i, np.sin(i)) for i in range(50)]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(p1, ["i", "v"], rows)
        write_csv(p2, ["i", "v"], rows)
        assert p1.read_bytes() == p2.read_bytes()

    def test_json_sorted(self, tmp_path):
        p = tmp_path / "m.json"
        write_json(p, {"b": 1, "a": [2, 3]})
        assert p.read_text() == '{\n  "a": [\n    2,\n    3\n  ],\n  "b": 1\n}\n'


class TestParseConfig:
    def test_minimal(self):
        cfg = parse_config(MINIMAL)
        assert cfg.model.j_xy == 4j
        assert (cfg.l_x, cfg.l_y, cfg.bc_x, cfg.bc_y) == (8, 8, "open",
                                                          "periodic")
        assert cfg.kinds == ("spectrum",)
        assert cfg.epsilon == 0.0
        assert cfg.ky_points == 256

    def test_solvable_reduction(self):
        sp = parse_config(MINIMAL).solvable_params()
        assert (sp.t_y, sp.t_xy, sp.delta0, sp.delta_x) == (1.0, 4.0, 3.0, 2.0)

    def test_nonsolvable_rejected(self):
        cfg = parse_config(MINIMAL.replace("j_y = [0.0, 1.0]",
                                           "j_y = [1.0, 0.0]"))
        with pytest.raises(ConfigError):
            cfg.solvable_params()

    def test_unknown_key_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL + "\n[analysis]\nbogus = 1\n")
        with pytest.raises(ConfigError):
            parse_config(MINIMAL + "\n[extra]\nx = 1\n")

    def test_syntax_error(self):
        with pytest.raises(ConfigError):
            parse_config("[model\n")

    def test_bad_complex(self):
        with pytest.raises(ConfigError):
            parse_config("[model]\nj_y = [1.0]\n[lattice]\nl_x = 2\nl_y = 2\n")

    def test_bad_kind(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL + '\n[analysis]\nkinds = ["wavelet"]\n')

    def test_duplicate_kinds(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL
                         + '\n[analysis]\nkinds = ["fd", "fd"]\n')

    def test_negative_epsilon(self):
        with pytest.raises(ConfigError):
            parse_config(MINIMAL + "\n[analysis]\nepsilon = -0.5\n")

    def test_oblique_periodic_rejected(self):
        text = """
[model]
delta0 = [3.0, 0.0]

[lattice]
shape = "oblique"
side = 5
tilt_deg = 15.0
bc_x = "periodic"
"""
        with pytest.raises(ConfigError):
            parse_config(text)

    def test_impurity_tables(self):
        text = MINIMAL + """
[impurities]
onsite = [[1, 1, 0.01], [8, 4, 0.01]]
hopping = [[1, 1, 5, 4, 0.005]]
"""
        cfg = parse_config(text)
        assert cfg.impurities.n_onsite == 2
        assert cfg.impurities.hopping[0][2] == 0.005

    def test_duplicate_impurity_site_rejected(self):
        text = MINIMAL + """
[impurities]
onsite = [[1, 1, 0.01], [1, 1, 0.02]]
"""
        with pytest.raises(ConfigError):
            parse_config(text)


class TestEmitConfig:
    def test_emit_parse_emit_is_identity(self):
        cfg = parse_config(MINIMAL)
        once = emit_config(cfg)
        again = emit_config(parse_config(once))
        assert once == again

    def test_all_presets_roundtrip(self):
        for panels in FIGURE_PRESETS.values():
            for name in panels:
                for scale in ("desk", "full"):
                    cfg = preset_config(name, scale)
                    once = emit_config(cfg)
                    assert emit_config(parse_config(once)) == once

    def test_load_config(self, tmp_path):
        p = tmp_path / "c.toml"
        p.write_text(MINIMAL, encoding="utf-8")
        assert load_config(p) == parse_config(MINIMAL)
