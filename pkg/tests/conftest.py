from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

from coxcohom import CoxeterSystem, flag_complex

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_vertices=1, max_vertices=6):
    n = draw(st.integers(min_vertices, max_vertices))
    verts = [f"v{i}" for i in range(n)]
    pairs = [(verts[i], verts[j]) for i in range(n) for j in range(i + 1, n)]
    edges = [p for p in pairs if draw(st.booleans())]
    return verts, edges


@st.composite
def flag_complexes(draw, min_vertices=1, max_vertices=6):
    verts, edges = draw(graphs(min_vertices, max_vertices))
    return flag_complex(verts, edges)


@st.composite
def coxeter_systems(draw, max_rank=4, labels=(2, 3, 4, 5, 6, "infinity")):
    n = draw(st.integers(1, max_rank))
    gens = [f"s{i}" for i in range(n)]
    lab = {}
    for i in range(n):
        for j in range(i + 1, n):
            lab[(gens[i], gens[j])] = draw(st.sampled_from(labels))
    return CoxeterSystem.from_edges(gens, lab)


positive_rationals = st.builds(Fraction, st.integers(1, 60), st.integers(1, 60))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import ACCEPTANCE_LINES
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
