import pandas as pd
import plotly.graph_objects as go

from config import config
from distribution import sweep
from selmer import selmer_group
from visualizer import SelmerVisualizer


def test_matrix_count_table():
    table = SelmerVisualizer(config).create_matrix_count_table(3)
    assert table["count"].tolist() == [1, 7, 28, 28]
    assert table["bruteforce"].tolist() == [1, 7, 28, 28]


def test_sweep_charts(congruent_triple):
    visualizer = SelmerVisualizer(config)
    result = sweep(congruent_triple, 200, 1, 2)
    for fig in (visualizer.create_predicate_pie_chart(result.frame),
                visualizer.create_density_chart([result.record]),
                visualizer.create_branch_split_chart(result.record),
                visualizer.create_genus_histogram(result.frame),
                visualizer.create_matrix_count_chart(4)):
        assert isinstance(fig, go.Figure)
    summary = visualizer.create_dashboard_summary(result.record)
    assert summary["P_count"] == "5" and summary["predicted_exact"] == "1/8"


def test_empty_inputs_give_placeholder_figures():
    visualizer = SelmerVisualizer(config)
    empty = pd.DataFrame(columns=["n", "h8", "sha_predicate"])
    assert isinstance(visualizer.create_predicate_pie_chart(empty), go.Figure)
    assert isinstance(visualizer.create_density_chart([]), go.Figure)
    assert isinstance(visualizer.create_branch_split_chart({}), go.Figure)


def test_selmer_table(congruent_triple):
    table = SelmerVisualizer(config).create_selmer_table(selmer_group(congruent_triple, 17))
    assert list(table.columns) == ["d1", "d2", "d3"]
    assert len(table) == 4
