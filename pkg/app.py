import streamlit as st
import pandas as pd
from datetime import datetime
from pathlib import Path
import sys
import json
import random

# Add src to path
sys.path.append(str(Path(__file__).parent / "src"))

# Import our modules
from config import config
from arith import factor_squarefree
from cassels import criterion_trace
from distribution import count_rank_deficient, sweep
from family import TwistTriple, admissible_n, base_selmer_dim, survey_triples, triple_from_k
from genus import class_group_forms, genus_report
from selmer import selmer_group, torsion_images
from torsion import torsion_oracle
from utils import (ContractViolation, SearchExhausted, build_summary, format_factorization,
                   format_number, get_verdict_emoji, parse_triple, sweep_to_csv, validate_n_input)
from visualizer import SelmerVisualizer

# Page configuration
st.set_page_config(
    page_title="Twist Selmer Explorer",
    page_icon="🧮",
    layout="wide",
    initial_sidebar_state="expanded"
)

st.markdown("""
<style>
    .main-header {
        font-size: 3rem;
        font-weight: bold;
        text-align: center;
        color: #1f77b4;
        margin-bottom: 2rem;
        text-shadow: 2px 2px 4px rgba(0,0,0,0.1);
    }

    .metric-highlight {
        background: #e7f3ff;
        padding: 1rem;
        border-radius: 8px;
        border-left: 4px solid #007bff;
        margin: 0.5rem 0;
        color: #333;
    }
</style>
""", unsafe_allow_html=True)


def initialize_session_state():
    """Initialize session state variables"""
    if 'sweep_records' not in st.session_state:
        st.session_state.sweep_records = []
    if 'sweep_frame' not in st.session_state:
        st.session_state.sweep_frame = None


def choose_triple() -> TwistTriple:
    """Sidebar selection of (a, b, c)"""
    method = st.radio(
        "Choose the triple:",
        ["🔍 From the k family", "✏️ Custom a,b,c"],
        help="(|4k^2-4k-1|, 4k^2+4k-1, 4k^2+1) or any primitive odd a^2 + b^2 = 2c^2"
    )
    if method == "🔍 From the k family":
        k = st.selectbox("k:", options=config.SAMPLE_TRIPLE_KS, index=0)
        return triple_from_k(k)
    return parse_triple(st.text_input("a,b,c:", value="1,1,1"))


def main():
    initialize_session_state()

    # Header
    st.markdown('''
    <div class="main-header">
        🧮 Twist Selmer Explorer
    </div>
    <div style="text-align: center; margin-bottom: 2rem; color: #6c757d; font-size: 1.1em;">
        <em>2-Selmer groups, genus theory and Sha of y^2 = x(x - a^2 n)(x + b^2 n)</em>
    </div>
    ''', unsafe_allow_html=True)

    st.markdown("---")

    with st.sidebar:
        st.markdown("### 🎯 Curve")
        try:
            t = choose_triple()
        except ContractViolation as e:
            st.error(f"❌ {e}")
            return
        st.caption(f"abc primes: {format_factorization(list(t.qprimes))}, k' = {t.kprime}")

        n_text = st.text_input("n:", value=str(config.SAMPLE_N[0]),
                               help=f"Known instances: {', '.join(map(str, config.SAMPLE_N))}")
        if not validate_n_input(n_text):
            st.error("⚠️ Please enter a positive integer n")
            return
        theorem = st.radio("Criterion:", [1, 2], index=1, horizontal=True)
        seed = st.number_input("Seed:", value=config.DEFAULT_SEED, step=1)

        st.markdown("---")
        page = st.radio("Page:", ["🔬 Instance", "📈 Density", "🧩 Matrices", "📋 Base triples"])

    visualizer = SelmerVisualizer(config)
    rng = random.Random(int(seed))

    try:
        if page == "🔬 Instance":
            display_instance(t, int(n_text), theorem, rng)
        elif page == "📈 Density":
            display_density(t, theorem, int(seed), visualizer)
        elif page == "🧩 Matrices":
            display_matrices(visualizer)
        else:
            display_survey()
    except ContractViolation as e:
        st.error(f"❌ Precondition failed: {e}")
    except SearchExhausted as e:
        st.error(f"❌ Search exhausted: {e}")


def display_instance(t: TwistTriple, n_value: int, theorem: int, rng: random.Random):
    """Genus data, Selmer group, pairing and torsion for one n"""

    n = factor_squarefree(n_value)
    st.markdown(f"## 🔬 E^({n.value}) for (a, b, c) = ({t})")

    report = genus_report(n, oracle=n.value <= config.CLASSGROUP_MAX_N, rng=rng) if n.value % 4 == 1 else None
    admissible = admissible_n(n, t, theorem)

    col1, col2, col3, col4, col5 = st.columns(5)
    with col1:
        st.metric("🔢 Primes", n.k)
    with col2:
        st.metric("h4", report.h4 if report else "N/A")
    with col3:
        st.metric("h8", report.h8 if report and report.h8 is not None else "N/A")
    with col4:
        st.metric("d0", report.d0 if report and report.d0 else "N/A")
    with col5:
        st.metric(f"Admissible {get_verdict_emoji(admissible)}", "yes" if admissible else "no")

    tab1, tab2, tab3 = st.tabs(["📐 Selmer group", "🔑 Sha criterion", "🌀 Torsion"])

    with tab1:
        st.dataframe(pd.DataFrame([str(e) for e in torsion_images(t, n)], columns=["torsion image"]),
                     use_container_width=True)
        try:
            elements = selmer_group(t, n)
            st.success(f"✅ Pure 2-Selmer group has dimension {len(elements).bit_length() - 1}")
            st.dataframe(SelmerVisualizer(config).create_selmer_table(elements), use_container_width=True)
        except ContractViolation as e:
            st.info(f"💡 Matrix description unavailable: {e}")
        if report and report.oracle is not None:
            st.caption(f"Class group oracle (h2, h4, h8) = {report.oracle}, "
                       f"agrees: {get_verdict_emoji(report.oracle_agrees)}, "
                       f"{len(class_group_forms(n.value))} reduced forms")

    with tab2:
        if not admissible or base_selmer_dim(t) != 2:
            st.warning(f"⚠️ n = {n.value} is outside the criterion's range for theorem {theorem}")
        else:
            trace = criterion_trace(t, n, theorem, rng=rng, with_pairing=True)
            verdict = trace["sha_predicate"]
            st.markdown(f"""
            <div class="metric-highlight">
                <b>{get_verdict_emoji(verdict)} rank 0 and Sha[2^inf] = (Z/2)^2:</b> {verdict}<br>
                {trace['criterion']}
            </div>
            """, unsafe_allow_html=True)
            st.json(trace)
            summary = build_summary(dict(trace, triple=str(t)))
            st.download_button(
                label="📋 Download Summary (JSON)",
                data=json.dumps(summary, indent=2, default=str),
                file_name=f"sha_{n.value}_{datetime.now().strftime('%Y%m%d_%H%M%S')}.json",
                mime="application/json",
                use_container_width=True
            )

    with tab3:
        shape = torsion_oracle(t.a, t.b, n.value)
        st.metric("E^(n)(Q)_tors", str(shape))


def display_density(t: TwistTriple, theorem: int, seed: int, visualizer: SelmerVisualizer):
    """Empirical densities of P_k(x)"""

    st.markdown("## 📈 Density of P_k(x)")
    col1, col2, col3 = st.columns(3)
    with col1:
        k = st.number_input("k:", min_value=1, max_value=6, value=1)
    with col2:
        x = st.number_input("x:", min_value=10, max_value=config.SIEVE_MAX, value=10_000, step=1_000)
    with col3:
        jobs = st.number_input("Workers:", min_value=1, max_value=16, value=config.DEFAULT_JOBS)

    if st.button("🚀 Run Sweep", type="primary", use_container_width=True):
        progress_bar = st.progress(0, text="Sieving...")
        with st.spinner(f"🔍 Sweeping n <= {format_number(int(x))}..."):
            result = sweep(t, int(x), int(k), theorem, jobs=int(jobs), seed=seed)
        progress_bar.progress(100, text="Sweep complete!")
        record = dict(result.record, kprime=t.kprime)
        st.session_state.sweep_records.append(record)
        st.session_state.sweep_frame = result.frame
        progress_bar.empty()

    if not st.session_state.sweep_records:
        st.info("👆 Choose k and x, then run a sweep")
        return

    record = st.session_state.sweep_records[-1]
    metrics = visualizer.create_dashboard_summary(record)
    col1, col2, col3, col4, col5 = st.columns(5)
    with col1:
        st.metric("#C_k(x)", metrics['C_count'])
    with col2:
        st.metric("#Q_k(x)", metrics['Q_count'])
    with col3:
        st.metric("#P_k(x)", metrics['P_count'])
    with col4:
        st.metric("P/C", metrics['ratio'])
    with col5:
        st.metric("Predicted", metrics['predicted'], help=metrics['predicted_exact'])
    st.caption("Convergence is in log log x, so small x shows large deviations.")

    frame = st.session_state.sweep_frame
    tab1, tab2 = st.tabs(["📈 Overview", "📊 Analysis"])
    with tab1:
        col1, col2 = st.columns(2)
        with col1:
            same = [r for r in st.session_state.sweep_records if r['k'] == record['k'] and r['t'] == record['t']]
            st.plotly_chart(visualizer.create_density_chart(same), use_container_width=True)
        with col2:
            st.plotly_chart(visualizer.create_predicate_pie_chart(frame), use_container_width=True)
    with tab2:
        col1, col2 = st.columns(2)
        with col1:
            st.plotly_chart(visualizer.create_branch_split_chart(record), use_container_width=True)
        with col2:
            st.plotly_chart(visualizer.create_genus_histogram(frame), use_container_width=True)

    header = {key: record[key] for key in ('t', 'x', 'k', 'theorem', 'seed')}
    st.download_button(
        label="📊 Download Sweep (CSV)",
        data=sweep_to_csv(frame, header),
        file_name=f"sweep_k{record['k']}_x{record['x']}.csv",
        mime="text/csv",
        use_container_width=True,
        type="primary"
    )


def display_matrices(visualizer: SelmerVisualizer):
    """Symmetric matrix counts by rank"""

    st.markdown("## 🧩 Symmetric matrices over F2")
    k = st.slider("k:", 1, 8, 3)
    col1, col2 = st.columns(2)
    with col1:
        st.dataframe(visualizer.create_matrix_count_table(k), use_container_width=True)
        if k >= 2:
            st.metric("Zero row sums, rank k-2", count_rank_deficient(k))
    with col2:
        st.plotly_chart(visualizer.create_matrix_count_chart(k), use_container_width=True)


def display_survey():
    """Base curves of the k family"""

    st.markdown("## 📋 Base triples")
    kmax = st.slider("k up to:", 1, 50, 12)
    with st.spinner("🔍 Computing base Selmer dimensions..."):
        frame = survey_triples(kmax)
    st.success(f"✅ {int(frame['usable'].sum())} triples with 2-Selmer dimension two")
    st.dataframe(frame, use_container_width=True)


if __name__ == "__main__":
    main()
