"""
Rate Region Plot - static boundary figures
Plotly HTML figure of all computed boundaries plus a gnuplot script over the CSVs
"""
import logging
import os
from typing import Dict, Mapping, Optional

import plotly.graph_objects as go

from ..services.pareto import Boundary

logger = logging.getLogger(__name__)

# Corporate color scheme
COLORS = {
    'primary': '#1E3A5F',
    'primary_light': '#2C5282',
    'success': '#276749',
    'warning': '#975A16',
    'danger': '#9B2C2C',
    'gray_700': '#4A5568',
    'gray_300': '#CBD5E0',
    'white': '#FFFFFF'
}

SCENARIO_COLORS = {
    'nn': COLORS['primary'],
    'nn-closed': COLORS['primary_light'],
    'dn': COLORS['success'],
    'nd': COLORS['warning'],
    'dd': COLORS['danger'],
    'union': COLORS['gray_700'],
}

SCENARIO_LABELS = {
    'nn': 'B<sup>nn</sup> (numerical)',
    'nn-closed': 'B<sup>nn</sup> (closed form)',
    'dn': 'B<sup>dn</sup>',
    'nd': 'B<sup>nd</sup>',
    'dd': 'B<sup>dd</sup>',
    'union': 'SIC region',
}


def _trace(key: str, boundary: Boundary) -> go.Scatter:
    oracle = key.startswith('oracle:')
    base = key.split(':', 1)[1] if oracle else key
    color = SCENARIO_COLORS.get(base, COLORS['gray_700'])
    if oracle:
        return go.Scatter(
            x=boundary.r1, y=boundary.r2,
            mode='markers',
            name=f"{SCENARIO_LABELS.get(base, base)} oracle",
            marker=dict(size=3, color=color, opacity=0.5),
            hovertemplate='R1=%{x:.4f}<br>R2=%{y:.4f}<extra>oracle</extra>'
        )
    return go.Scatter(
        x=boundary.r1, y=boundary.r2,
        mode='lines',
        name=SCENARIO_LABELS.get(key, key),
        line=dict(color=color, width=3 if key == 'union' else 2,
                  dash='dash' if key == 'union' else 'solid'),
        hovertemplate='R1=%{x:.4f}<br>R2=%{y:.4f}<extra>' + key + '</extra>'
    )


def build_region_figure(boundaries: Mapping[str, Boundary],
                        title: str = "Pareto boundaries of the SIC rate region") -> go.Figure:
    """
    Build the rate region figure
    Args:
        boundaries: method key -> Boundary, in drawing order
        title: figure title
    Returns:
        Plotly Figure
    """
    if not boundaries:
        fig = go.Figure()
        fig.add_annotation(
            text="No boundary computed",
            x=0.5, y=0.5,
            xref="paper", yref="paper",
            showarrow=False,
            font=dict(size=16, color=COLORS['gray_700'])
        )
        fig.update_layout(height=500, paper_bgcolor="rgba(0,0,0,0)")
        return fig

    fig = go.Figure()
    for key, boundary in boundaries.items():
        if len(boundary):
            fig.add_trace(_trace(key, boundary))

    axis = dict(
        rangemode='tozero',
        gridcolor=COLORS['gray_300'],
        title_font=dict(family="Inter, sans-serif", size=14, color=COLORS['gray_700'])
    )
    fig.update_layout(
        title=dict(
            text=title,
            font=dict(family="Inter, sans-serif", size=20, color=COLORS['primary']),
            x=0.5
        ),
        xaxis=dict(title='R<sub>1</sub> [bpcu]', **axis),
        yaxis=dict(title='R<sub>2</sub> [bpcu]', **axis),
        height=600,
        plot_bgcolor=COLORS['white'],
        paper_bgcolor=COLORS['white'],
        legend=dict(orientation='h', y=-0.15)
    )
    return fig


def write_region_html(boundaries: Mapping[str, Boundary], path: str) -> None:
    build_region_figure(boundaries).write_html(path, include_plotlyjs='cdn')
    logger.info(f"Wrote region figure to {path}")


def write_gnuplot_script(csv_files: Dict[str, str], path: str,
                         title: Optional[str] = None) -> None:
    """
    Write a gnuplot script plotting r2 over r1 from each boundary CSV.
    Args:
        csv_files: method key -> CSV path (made relative to the script's directory)
        path: script path, conventionally region.gp
    """
    base = os.path.dirname(os.path.abspath(path))
    lines = [
        'set datafile separator ","',
        'set xlabel "R_1 [bpcu]"',
        'set ylabel "R_2 [bpcu]"',
        f'set title "{title or "Pareto boundaries of the SIC rate region"}"',
        'set key bottom left',
        'set grid',
    ]
    plots = []
    for key, csv_path in csv_files.items():
        rel = os.path.relpath(os.path.abspath(csv_path), base)
        style = 'points pt 7 ps 0.3' if key.startswith('oracle:') else 'lines lw 2'
        if key == 'union':
            style = 'lines lw 3 dt 2'
        plots.append(f'"{rel}" skip 1 using 2:3 with {style} title "{key}"')
    if plots:
        lines.append('plot ' + ', \\\n     '.join(plots))
    with open(path, 'w') as f:
        f.write('\n'.join(lines) + '\n')
    logger.info(f"Wrote gnuplot script to {path}")
