import plotly.graph_objects as go
import plotly.express as px
import pandas as pd
from typing import Dict, List

from distribution import count_symmetric_rank, count_symmetric_rank_bruteforce


class SelmerVisualizer:
    def __init__(self, config):
        self.config = config
        self.colors = config.DEFAULT_COLORS if hasattr(config, 'DEFAULT_COLORS') else {
            'sha': '#28a745',
            'no_sha': '#dc3545',
            'inadmissible': '#6c757d',
            'predicted': '#1f77b4'
        }
        self.theme = config.CHART_THEME if hasattr(config, 'CHART_THEME') else 'plotly_white'

    def _empty_figure(self, message: str) -> go.Figure:
        fig = go.Figure()
        fig.add_annotation(
            text=message,
            xref="paper", yref="paper",
            x=0.5, y=0.5, showarrow=False,
            font=dict(size=16)
        )
        fig.update_layout(template=self.theme, height=400)
        return fig

    def create_predicate_pie_chart(self, frame: pd.DataFrame) -> go.Figure:
        """Share of admissible n with Sha[2^inf] = (Z/2)^2"""

        if frame.empty:
            return self._empty_figure("No admissible n in range")

        hits = int(frame['sha_predicate'].astype(bool).sum())
        labels = ['Sha = (Z/2)^2', 'other']
        values = [hits, len(frame) - hits]

        fig = go.Figure(data=[go.Pie(
            labels=labels,
            values=values,
            marker_colors=[self.colors['sha'], self.colors['no_sha']],
            hole=0.4,
            textinfo='label+percent+value',
            textfont_size=12,
            textposition='auto'
        )])

        fig.update_layout(
            title={
                'text': 'Sha Predicate over Admissible n',
                'x': 0.5,
                'font': {'size': 20}
            },
            template=self.theme,
            height=400,
            showlegend=True,
            legend=dict(
                orientation="h",
                yanchor="bottom",
                y=1.02,
                xanchor="right",
                x=1
            )
        )

        return fig

    def create_density_chart(self, records: List[Dict]) -> go.Figure:
        """Empirical #P_k(x)/#C_k(x) against the predicted constant"""

        if not records:
            return self._empty_figure("Run a sweep first")

        data = pd.DataFrame(records).sort_values('x')

        fig = go.Figure()
        fig.add_trace(go.Scatter(
            x=data['x'],
            y=data['ratio'],
            mode='lines+markers',
            name='empirical P/C',
            line=dict(color=self.colors['sha']),
            marker=dict(size=6)
        ))
        fig.add_trace(go.Scatter(
            x=data['x'],
            y=data['predicted'],
            mode='lines',
            name='predicted',
            line=dict(color=self.colors['predicted'], dash='dash')
        ))

        fig.update_layout(
            title={
                'text': 'Density of P_k(x) in C_k(x)',
                'x': 0.5,
                'font': {'size': 18}
            },
            xaxis_title="x",
            yaxis_title="ratio",
            xaxis_type="log",
            template=self.theme,
            height=400,
            hovermode='x unified'
        )

        return fig

    def create_branch_split_chart(self, record: Dict) -> go.Figure:
        """P_k(x) split by rank of A, empirical against predicted"""

        c_count = record.get('C_count', 0)
        if not c_count:
            return self._empty_figure("C_k(x) is empty")

        predicted = {
            'rank k-1': record.get('predicted_rank_full', 0.0),
            'rank k-2': record.get('predicted_rank_deficient', 0.0),
        }
        empirical = {
            'rank k-1': record.get('P_rank_full', 0) / c_count,
            'rank k-2': record.get('P_rank_deficient', 0) / c_count,
        }
        rows = [{'branch': b, 'source': 'empirical', 'ratio': empirical[b]} for b in empirical]
        rows += [{'branch': b, 'source': 'predicted', 'ratio': predicted[b]} for b in predicted]

        fig = px.bar(
            pd.DataFrame(rows),
            x='branch',
            y='ratio',
            color='source',
            barmode='group',
            color_discrete_map={'empirical': self.colors['sha'], 'predicted': self.colors['predicted']},
            title='P_k(x) by Rank of A',
            labels={'ratio': 'share of C_k(x)', 'branch': 'rank of A'}
        )

        fig.update_layout(
            template=self.theme,
            height=400,
            title_x=0.5
        )

        return fig

    def create_matrix_count_chart(self, k: int) -> go.Figure:
        """Symmetric k x k matrices over F_2 by rank"""

        frame = self.create_matrix_count_table(k)

        fig = go.Figure(data=[
            go.Bar(
                x=frame['rank'],
                y=frame['count'],
                marker_color=self.colors['predicted'],
                text=frame['count'],
                textposition='auto',
            )
        ])

        fig.update_layout(
            title={
                'text': f'Symmetric {k}x{k} Matrices over F2 by Rank',
                'x': 0.5,
                'font': {'size': 18}
            },
            xaxis_title="Rank",
            yaxis_title="Number of Matrices",
            template=self.theme,
            height=400
        )

        return fig

    def create_matrix_count_table(self, k: int) -> pd.DataFrame:
        """Closed-form counts, with the exhaustive count where feasible"""

        rows = []
        for r in range(k + 1):
            row = {'rank': r, 'count': count_symmetric_rank(k, r)}
            row['bruteforce'] = count_symmetric_rank_bruteforce(k, r) if k <= 4 else None
            rows.append(row)
        return pd.DataFrame(rows)

    def create_genus_histogram(self, frame: pd.DataFrame) -> go.Figure:
        """h8 values among admissible n with h4 = 1"""

        if frame.empty or frame['h8'].dropna().empty:
            return self._empty_figure("No n with h4 = 1 in range")

        counts = frame.dropna(subset=['h8']).groupby(['h8', 'sha_predicate']).size().reset_index(name='count')
        counts['h8'] = counts['h8'].astype(int).astype(str)
        counts['sha_predicate'] = counts['sha_predicate'].map({True: 'sha', False: 'no_sha'})

        fig = px.bar(
            counts,
            x='h8',
            y='count',
            color='sha_predicate',
            color_discrete_map=self.colors,
            title='8-rank among n with h4 = 1',
            labels={'count': 'Number of n', 'h8': 'h8(n)'}
        )

        fig.update_layout(
            template=self.theme,
            height=400,
            title_x=0.5
        )

        return fig

    def create_selmer_table(self, elements: List) -> pd.DataFrame:
        """Selmer classes as a table"""

        return pd.DataFrame(
            [{'d1': e.d1, 'd2': e.d2, 'd3': e.d3} for e in elements],
            columns=['d1', 'd2', 'd3']
        )

    def create_dashboard_summary(self, record: Dict) -> Dict:
        """Headline metrics of a sweep"""

        metrics = {
            'C_count': f"{record.get('C_count', 0):,}",
            'Q_count': f"{record.get('Q_count', 0):,}",
            'P_count': f"{record.get('P_count', 0):,}",
            'ratio': f"{record.get('ratio', 0):.5f}",
            'predicted': f"{record.get('predicted', 0):.5f}",
            'predicted_exact': record.get('predicted_exact', 'N/A')
        }

        return metrics
