"""Generated SVG charts: well-formedness, determinism, content hooks."""

import re
import xml.etree.ElementTree as ET

import pytest

from helios_audit.figures import PALETTE, bar_chart, line_chart, stem_chart

SVG_NS = "{http://www.w3.org/2000/svg}"


def parse(svg_text):
    return ET.fromstring(svg_text)


def tags(root, name):
    return root.findall(f".//{SVG_NS}{name}")


class TestBarChart:
    def make(self, **kwargs):
        defaults = dict(
            title="MAE by lead day",
            ylabel="MAE",
            labels=["D1", "D2", "D3"],
            values=[1.0, 2.0, 3.0],
        )
        defaults.update(kwargs)
        return bar_chart(**defaults)

    def test_well_formed(self):
        root = parse(self.make())
        assert root.tag == f"{SVG_NS}svg"
        # background + one bar per value
        assert len(tags(root, "rect")) == 1 + 3

    def test_title_and_labels_present(self):
        svg = self.make()
        for text in ("MAE by lead day", "D1", "D2", "D3"):
            assert text in svg

    def test_whiskers(self):
        plain = parse(self.make())
        with_ci = parse(self.make(lower=[0.8, 1.7, 2.6], upper=[1.2, 2.3, 3.4]))

        def whisker_lines(root):
            return [el for el in tags(root, "line") if el.get("stroke") == "#202020"]

        # three lines (stem + two caps) per bar
        assert len(whisker_lines(plain)) == 0
        assert len(whisker_lines(with_ci)) == 9

    def test_custom_colors(self):
        svg = self.make(colors=[PALETTE[4], PALETTE[0], PALETTE[0]])
        assert PALETTE[4] in svg

    def test_deterministic(self):
        assert self.make() == self.make()

    def test_coordinates_have_two_decimals(self):
        root = parse(self.make())
        seen = 0
        for el in root.iter():
            for attr in ("x", "y", "x1", "y1", "x2", "y2", "width", "height"):
                value = el.get(attr)
                if value is not None and el.tag != f"{SVG_NS}svg":
                    assert re.fullmatch(r"-?\d+\.\d{2}", value), (attr, value)
                    seen += 1
        assert seen > 10

    def test_validates_lengths(self):
        with pytest.raises(ValueError):
            bar_chart("t", "y", ["a"], [1.0, 2.0])
        with pytest.raises(ValueError):
            bar_chart("t", "y", [], [])

    def test_escapes_markup(self):
        svg = self.make(title="a < b & c > d")
        parse(svg)
        assert "a &lt; b &amp; c &gt; d" in svg


class TestStemChart:
    def make(self, n=20, bound=0.25):
        values = [((-1) ** k) * 0.5 / (k + 1) for k in range(n)]
        return stem_chart("Residual ACF", "r(k)", list(range(1, n + 1)), values, bound)

    def test_well_formed(self):
        parse(self.make())

    def test_has_dashed_bound_lines(self):
        svg = self.make()
        assert svg.count('stroke-dasharray="4 3"') == 2

    def test_one_stem_per_lag(self):
        root = parse(self.make(n=15))
        stems = [el for el in tags(root, "line")
                 if el.get("stroke") == PALETTE[0]]
        assert len(stems) == 15

    def test_deterministic(self):
        assert self.make() == self.make()

    def test_validates(self):
        with pytest.raises(ValueError):
            stem_chart("t", "y", [], [], 0.1)
        with pytest.raises(ValueError):
            stem_chart("t", "y", [1, 2], [0.5], 0.1)


class TestLineChart:
    def make(self, **kwargs):
        defaults = dict(
            title="Scenario MAPE",
            ylabel="MAPE (%)",
            x_values=[1, 2, 3, 4, 5, 6],
            series=[
                ("baseline", [20.0, 22.0, 25.0, 27.0, 30.0, 31.0]),
                ("perfect rh", [15.0, 16.0, 18.0, 19.0, 21.0, 22.0]),
            ],
        )
        defaults.update(kwargs)
        return line_chart(**defaults)

    def test_well_formed(self):
        root = parse(self.make())
        assert len(tags(root, "polyline")) == 2

    def test_series_get_distinct_palette_colors(self):
        root = parse(self.make())
        strokes = [el.get("stroke") for el in tags(root, "polyline")]
        assert strokes == [PALETTE[0], PALETTE[1]]

    def test_legend_entries(self):
        svg = self.make()
        assert "baseline" in svg and "perfect rh" in svg

    def test_x_label_thinning(self):
        dense = self.make(x_label_every=1)
        sparse = self.make(x_label_every=3)
        assert dense.count('>4</text>') == 1
        assert sparse.count('>4</text>') == 1   # 1-based x=4 is the 3rd index
        assert sparse.count('>2</text>') == 0

    def test_deterministic(self):
        assert self.make() == self.make()

    def test_validates(self):
        with pytest.raises(ValueError):
            line_chart("t", "y", [], [])
        with pytest.raises(ValueError):
            line_chart("t", "y", [1, 2], [("s", [1.0])])
