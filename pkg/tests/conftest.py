import itertools

from hypothesis import HealthCheck, settings, strategies as st

from ainftorus.core import AinfCategory, Atom

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def small_categories(draw, max_gens=5, arities=(1, 2, 3)):
    """Random presentations on three atoms whose mu entries respect
    endpoints and degrees (relations are not imposed)."""
    objs = [Atom(s) for s in "ABC"]
    n = draw(st.integers(0, max_gens))
    gens = {}
    for i in range(n):
        s, t = draw(st.sampled_from(objs)), draw(st.sampled_from(objs))
        gens[f"g{i}"] = (s, t, (draw(st.integers(-1, 2)), draw(st.integers(0, 2))))
    table = {}
    for d in arities:
        for seq in itertools.product(gens, repeat=d):
            if any(gens[a][1] != gens[b][0] for a, b in zip(seq, seq[1:])):
                continue
            want = (sum(gens[k][2][0] for k in seq) + 2 - d, sum(gens[k][2][1] for k in seq))
            outs = [g for g, (s, t, bd) in gens.items()
                    if s == gens[seq[0]][0] and t == gens[seq[-1]][1] and bd == want]
            pick = [g for g in outs if draw(st.booleans())]
            if pick:
                table[seq] = set(pick)
    return AinfCategory(objs, gens, table, name="R")


def relabel(c: AinfCategory, names: dict) -> AinfCategory:
    gens = {names[g]: v for g, v in c.gens.items()}
    table = {tuple(names[k] for k in ins): {names[k] for k in outs} for ins, outs in c.table.items()}
    return AinfCategory(list(c.objects()), gens, table, name=c.name)
