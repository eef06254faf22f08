import pytest

from relrep.algebra import validate_structure
from relrep.family import gen_sn, sn_elements, sn_strategy
from relrep.game import Challenge, PlayState, consistent, net_nref, respond
from relrep.game.network import FRESH
from relrep.game.strategy import RandomForall, playout, refute, survival_rate
from relrep.preorder import find_prec_cycle

# the products as displayed for S_n, index i, modulo N for the shifted ones
SAME = {("d", "c"): "eps", ("c", "d"): "cd", ("cd", "cd"): "cd", ("cd", "c"): "c",
        ("d", "cd"): "d", ("a", "b"): "ab", ("a", "c"): "ac", ("a", "cd"): "acd",
        ("c", "db"): "cdb", ("d", "b"): "db", ("ac", "d"): "acd", ("acd", "c"): "ac",
        ("cd", "b"): "cdb"}
SHIFT = {("a", "cdb"), ("acd", "cdb"), ("ac", "db"), ("acd", "b")}
DOM = {"a": "d", "ac": "d", "acd": "d", "ab": "d", "c": "m", "b": "m", "cdb": "m",
       "cd": "m", "d": "eps", "db": "eps"}
RAN = {"a": "m", "d": "m", "cd": "m", "acd": "m", "c": "eps", "ac": "eps", "ab": "r",
       "cdb": "r", "db": "r", "b": "r"}


def oracle_product(n, x, y):
    """Product of two S_n element names straight from the displayed tables."""
    N = 2 * n + 1

    def split(e):
        f, _, i = e.rpartition("_")
        return (f, int(i)) if f else (e, None)

    def dom(e):
        f, i = split(e)
        if i is not None and f in DOM:
            t = DOM[f]
            return t if t in ("d", "r") else f"{t}_{i}"
        return e

    def ran(e):
        f, i = split(e)
        if i is not None and f in RAN:
            t = RAN[f]
            return t if t in ("d", "r") else f"{t}_{i}"
        return e

    is_dr = lambda e: dom(e) == e
    if is_dr(x) and is_dr(y):
        return x if x == y else "0"
    if is_dr(x):
        return y if dom(y) == x else "0"
    if is_dr(y):
        return x if ran(x) == y else "0"
    (fx, i), (fy, j) = split(x), split(y)
    if i != j:
        return "0"
    if (fx, fy) in SAME:
        return f"{SAME[fx, fy]}_{i}"
    if (fx, fy) in SHIFT:
        return f"ab_{(i + 1) % N}"
    return "0"


@pytest.fixture(scope="module")
def s1():
    return gen_sn(1)


def test_size():
    assert len(gen_sn(1).elements) == 39
    assert len(gen_sn(2).elements) == 3 + 12 * 5
    assert gen_sn(0).size == 15


def test_displayed_products(s1):
    mul = lambda x, y: s1.elements[s1.mul(s1.id_of(x), s1.id_of(y))]
    assert mul("a_0", "b_0") == "ab_0"
    assert mul("d", "m_0") == "0"
    assert mul("a_2", "cdb_2") == "ab_0"
    assert mul("d_1", "c_1") == "eps_1"


@pytest.mark.parametrize("n", [1, 2])
def test_tables_match_displayed_equations(n):
    s = gen_sn(n)
    for x in s.elements:
        for y in s.elements:
            got = s.elements[s.mul(s.id_of(x), s.id_of(y))]
            assert got == oracle_product(n, x, y), (x, y)


def test_domain_range_tables(s1):
    name = lambda i: s1.elements[i]
    assert name(s1.D(s1.id_of("cd_1"))) == "m_1"
    assert name(s1.R(s1.id_of("acd_1"))) == "m_1"
    assert name(s1.R(s1.id_of("ab_2"))) == "r"
    for e in ("0", "d", "r", "m_0", "eps_2"):
        i = s1.id_of(e)
        assert s1.D(i) == i and s1.R(i) == i


@pytest.mark.parametrize("n", [1, 2])
def test_validates_without_errors(n):
    report = validate_structure(gen_sn(n))
    assert not report.errors
    # S_n is not associative: (a_0 * cd_0) * cd_0 = acd_0 * cd_0 = 0 but cd_0 * cd_0 = cd_0
    assert report.status_of("associativity") == "warning"


@pytest.mark.parametrize("n", [1, 2])
def test_cycle_length(n):
    cert = find_prec_cycle(gen_sn(n))
    assert len(cert.cycle) == 2 * n + 1


def test_element_order():
    assert sn_elements(1)[:6] == ["0", "d", "r", "m_0", "eps_0", "a_0"]


# -- strategy -------------------------------------------------------------------------

def init_state(s, strat, a, b, moves=1):
    ch = Challenge("init", (s.id_of(a), s.id_of(b)))
    state = PlayState(s, None, moves)
    return respond(state, ch, strat.respond(state, ch))


@pytest.mark.parametrize("pair", [("a_0", "acd_0"), ("acd_0", "a_0")])
def test_forced_init_plays_companion(s1, pair):
    strat = sn_strategy(1)
    strat.reset(s1, 1)
    net = init_state(s1, strat, *pair).network
    assert net.tops(0, 1) == {s1.id_of("acd_0")} and net.bots(0, 1) == {s1.id_of("a_0")}


def test_init_on_ab_pair(s1):
    strat = sn_strategy(1)
    net = init_state(s1, strat, "ab_0", "ab_2").network
    # growing ⊤ from ab_0 takes two index steps to reach ab_2, from ab_2 only one to ab_0
    assert net.tops(0, 1) == {s1.id_of("ab_0")} and net.bots(0, 1) == {s1.id_of("ab_2")}


def test_init_reflexive_iff_domain_range_element(s1):
    strat = sn_strategy(1)
    assert init_state(s1, strat, "m_0", "b_0").network.nodes == (0,)
    assert init_state(s1, strat, "0", "b_0").network.nodes == (0, 1)


def test_witness_for_shifted_product(s1):
    a, cdb, ab1 = (s1.id_of(x) for x in ("a_0", "cdb_0", "ab_1"))
    state = PlayState(s1, net_nref(ab1, s1.id_of("ab_0")), 1)
    ch = Challenge("witness", (0, 1, a, cdb))
    r = sn_strategy(1).respond(state, ch)
    assert r.node == FRESH
    net = respond(state, ch, r).network
    assert {s1.elements[e] for e in net.tops(0, 2)} >= {"a_0", "acd_0"}
    assert consistent(net, s1)
    # the eager variant with the m companion also labels the new loop with m_0 and cd_0
    r = sn_strategy(1, companions=("a", "b", "m"), eager=True).respond(state, ch)
    net = respond(state, ch, r).network
    assert {"m_0", "cd_0"} <= {s1.elements[e] for e in net.tops(2, 2)}


def test_strategy_rejects_other_structures():
    with pytest.raises(ValueError):
        sn_strategy(2).reset(gen_sn(1), 1)


def reachable_states(s, n, games, seed):
    strat = sn_strategy(n)
    forall = RandomForall(seed)
    for _ in range(games):
        p = playout(s, n, strat, forall)
        state = PlayState(s, None, n)
        for ch, r in p.moves:
            state = respond(state, ch, r)
            yield state.network


@pytest.mark.parametrize("n", [1, 2])
def test_label_closure_invariant(n):
    s = gen_sn(n)
    zero = s.id_of("0")
    for net in reachable_states(s, n, 200, seed=11):
        for (x, y), labels in net.top.items():
            names = {s.elements[e] for e in labels}
            assert zero not in labels
            for e in names:
                fam, _, i = e.rpartition("_")
                if fam == "a":
                    assert f"acd_{i}" in names
                if fam == "b":
                    assert f"cdb_{i}" in names


@pytest.mark.parametrize("n", [1, 2])
def test_partner_is_unique(n):
    s = gen_sn(n)
    for net in reachable_states(s, n, 200, seed=5):
        for i in range(2 * n + 1):
            c, d = s.id_of(f"c_{i}"), s.id_of(f"d_{i}")
            for x in net.nodes:
                outs = {y for y in net.nodes if c in net.tops(x, y) or d in net.tops(y, x)}
                assert len(outs) <= 1


@pytest.mark.parametrize("n", [1, 2])
def test_random_survival(n):
    won, games, loss = survival_rate(gen_sn(n), n, sn_strategy(n), 1000, seed=n)
    assert won == games, loss


def test_exhaustive_depth_one_on_s1(s1):
    assert refute(s1, 1, sn_strategy(1), prune=False) is None


def test_refute_finds_loss_of_a_weak_strategy(s1):
    """Refutation search is not vacuous: the eager m-companion variant loses at depth 2."""
    strat = sn_strategy(1, companions=("a", "b", "m"), eager=True)
    line = refute(s1, 2, strat, prune=False)
    assert line is not None
