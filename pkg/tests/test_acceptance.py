"""The ten acceptance criteria; each prints a PASS/FAIL line in the terminal summary."""

import itertools
import subprocess
import sys

import pytest

import oracles
from relrep.algebra import FinStructure, abstract_proper, check_equation, validate_structure
from relrep.dsl import serialize_structure
from relrep.family import gen_sn, sn_strategy
from relrep.game import exists_wins
from relrep.game.saturate import SaturationFailed, saturate_and_extract
from relrep.game.strategy import survival_rate
from relrep.preorder import find_prec_cycle, prec_pairs, replay_certificate
from relrep.relcore import (Rel, compose_demonic, converse, dom, generate_concrete,
                            refines_demonic, rng)
from relrep.repbuild import (Inconclusive, brute_force_search, cayley_rep, closed_set_rep,
                             verify_representation, zareckii_rep)
from relrep.signature import DRS, Signature

from structures import drs_corpus, one_element, partial_function_algebra, proper, rel


def test_criterion_1_oracle_equivalence(criterion):
    with criterion(1, "relational operations match quantifier enumeration on bases 1-3", 60):
        for n in (1, 2, 3):
            rels = list(Rel.all_relations(n))
            sets = [frozenset(r.pairs()) for r in rels]
            for r, sr in zip(rels, sets):
                assert frozenset(dom(r).pairs()) == oracles.dom(n, sr)
                assert frozenset(rng(r).pairs()) == oracles.rng(n, sr)
                assert frozenset(converse(r).pairs()) == oracles.converse(sr)
            for r, sr in zip(rels, sets):
                for s, ss in zip(rels, sets):
                    assert frozenset(compose_demonic(r, s).pairs()) == oracles.compose_demonic(n, sr, ss)
                    assert refines_demonic(r, s) == oracles.refines_demonic(n, sr, ss)


def test_criterion_2_soundness_axiom(criterion):
    with criterion(2, "demonic domain soundness holds on full relation algebras, bases 1-3", 60):
        for n in (1, 2, 3):
            s, _ = abstract_proper(list(Rel.all_relations(n)), DRS)
            assert s.size == 2 ** (n * n)
            assert check_equation(s, "demonic-domain-soundness") == []


def test_criterion_3_refinement_is_a_partial_order(criterion):
    with criterion(3, "demonic refinement is reflexive, antisymmetric, transitive on bases 1-3", 60):
        for n in (1, 2, 3):
            rels = list(Rel.all_relations(n))
            up = []
            for r in rels:
                mask = 0
                for j, s in enumerate(rels):
                    if refines_demonic(r, s):
                        mask |= 1 << j
                up.append(mask)
            for i, mask in enumerate(up):
                assert mask >> i & 1
                for j in range(len(rels)):
                    if j != i and mask >> j & 1:
                        assert not up[j] >> i & 1
                        assert up[j] & ~mask == 0


# every product displayed for S_n, at index i (N = 3)
DISPLAYED = [("d_{i}", "c_{i}", "eps_{i}"), ("c_{i}", "d_{i}", "cd_{i}"),
             ("cd_{i}", "cd_{i}", "cd_{i}"), ("a_{i}", "cdb_{i}", "ab_{j}"),
             ("acd_{i}", "cdb_{i}", "ab_{j}"), ("ac_{i}", "db_{i}", "ab_{j}"),
             ("acd_{i}", "b_{i}", "ab_{j}"), ("cd_{i}", "c_{i}", "c_{i}"),
             ("d_{i}", "cd_{i}", "d_{i}"), ("a_{i}", "b_{i}", "ab_{i}"),
             ("a_{i}", "c_{i}", "ac_{i}"), ("a_{i}", "cd_{i}", "acd_{i}"),
             ("c_{i}", "db_{i}", "cdb_{i}"), ("d_{i}", "b_{i}", "db_{i}"),
             ("ac_{i}", "d_{i}", "acd_{i}"), ("acd_{i}", "c_{i}", "ac_{i}"),
             ("cd_{i}", "b_{i}", "cdb_{i}")]
DISPLAYED_D = {"d": ["a", "ac", "acd", "ab"], "m": ["c", "b", "cdb"], "eps": ["d", "db"]}
DISPLAYED_R = {"m": ["a", "d", "cd"], "eps": ["c", "ac"], "r": ["ab", "cdb", "db", "b"]}


def test_criterion_4_sn_pipeline(criterion):
    with criterion(4, "S_1 has 39 elements, matches the displayed tables, has the ab 3-cycle", 10):
        s = gen_sn(1)
        assert s.size == 39
        assert not validate_structure(s).errors
        name = lambda e: s.elements[e]
        for i in range(3):
            for x, y, z in DISPLAYED:
                x, y, z = (t.format(i=i, j=(i + 1) % 3) for t in (x, y, z))
                assert name(s.mul(s.id_of(x), s.id_of(y))) == z, (x, y)
            for table, op in ((DISPLAYED_D, s.D), (DISPLAYED_R, s.R)):
                for target, fams in table.items():
                    want = target if target in ("d", "r") else f"{target}_{i}"
                    for f in fams:
                        assert name(op(s.id_of(f"{f}_{i}"))) == want
        dr = ["0", "d", "r"] + [f"{f}_{i}" for i in range(3) for f in ("m", "eps")]
        for x in dr:
            for y in dr:
                assert name(s.mul(s.id_of(x), s.id_of(y))) == (x if x == y else "0")
        cert = find_prec_cycle(s)
        assert cert.cycle == ("ab_0", "ab_1", "ab_2")
        assert replay_certificate(s, cert)


def test_criterion_5_preorder_soundness(criterion):
    with criterion(5, "every ⪯ pair is a demonic refinement in proper structures over base ≤ 2", 300):
        seen = set()
        checked = 0
        for n in (1, 2):
            rels = list(Rel.all_relations(n))
            gen_sets = itertools.chain(*(itertools.combinations(rels, k) for k in (1, 2, 3)))
            for gens in itertools.chain(gen_sets, [tuple(rels)]):
                closed = frozenset(generate_concrete(n, list(gens), DRS))
                if closed in seen:
                    continue
                seen.add(closed)
                s, theta = abstract_proper(list(closed), DRS)
                for a, b in prec_pairs(s):
                    assert refines_demonic(theta[a], theta[b]), (s.name, a, b)
                    checked += 1
        assert len(seen) > 50 and checked > 500


def test_criterion_6_game_solver(criterion):
    with criterion(6, "solver verdicts on the one-element structure, S_1 and the corpus", 600):
        assert exists_wins(one_element(), 3)
        assert exists_wins(gen_sn(1), 1)
        corpus = drs_corpus()
        assert len(corpus) == 10
        for s in corpus:
            verdicts = [exists_wins(s, k) for k in range(4)]
            for k in range(3):
                assert verdicts[k] or not verdicts[k + 1], (s.name, verdicts)


def test_criterion_7_sn_strategy(criterion):
    with criterion(7, "sn_strategy survives 1000 random playouts on S_1 and S_2", 300):
        for n in (1, 2):
            won, games, loss = survival_rate(gen_sn(n), n, sn_strategy(n), 1000, seed=n)
            assert won == games == 1000, loss


ORDERED = Signature("angelic", frozenset(), order=True)
SEMI = Signature("angelic", frozenset())
SEMI_ID = Signature("angelic", frozenset(), constants=frozenset({"id"}))


def test_criterion_8_builders(criterion):
    with criterion(8, "Zareckii, closed-set and Cayley builders verify", 60):
        for gens in ([rel(2, (0, 1))], [rel(2, (0, 1), (1, 0))], [rel(2, (0, 0), (0, 1))],
                     [rel(3, (0, 1), (1, 2))], [rel(2, (0, 1)), rel(2, (1, 1))]):
            s, _ = proper(gens, ORDERED)
            rep = zareckii_rep(s)
            assert rep.base == s.size + 1 and verify_representation(rep) == []
        s, _ = partial_function_algebra()
        assert {"D", "R", "conv"} <= s.signature.unary and s.signature.order
        assert {"zero", "one", "id"} == set(s.signature.constants)
        assert verify_representation(closed_set_rep(s)) == []
        group = FinStructure.build("z2", SEMI_ID, ["1", "a"],
                                   compose={("1", "1"): "1", ("1", "a"): "a", ("a", "1"): "a",
                                            ("a", "a"): "1"}, consts={"id": "1"})
        nil = FinStructure.build("nil", SEMI, ["a", "0"], compose=lambda x, y: "0")
        for t in (group, nil):
            assert verify_representation(cayley_rep(t)) == []


def drs_structures(max_size):
    for k in range(1, max_size + 1):
        names = tuple(f"x{i}" for i in range(k))
        maps = list(itertools.product(range(k), repeat=k))
        for comp in itertools.product(range(k), repeat=k * k):
            table = tuple(comp[i * k:(i + 1) * k] for i in range(k))
            for d in maps:
                for r in maps:
                    yield FinStructure(f"w{k}", DRS, names, table, d, r)


def test_criterion_9_cross_oracle(criterion):
    with criterion(9, "brute force and saturation never contradict on {D,R,*} sizes ≤ 2", 600):
        counts = {"structures": 0, "represented": 0, "cycles": 0}
        for s in drs_structures(2):
            if validate_structure(s).errors:
                continue
            counts["structures"] += 1
            cycle = find_prec_cycle(s) is not None
            found = brute_force_search(s, 2)
            try:
                sat = saturate_and_extract(s)
            except (Inconclusive, SaturationFailed):
                sat = None
            for rep in (found, sat):
                if rep is not None:
                    assert verify_representation(rep) == []
                    assert not cycle
            counts["cycles"] += cycle
            counts["represented"] += found is not None or sat is not None
        assert counts["structures"] == 257
        assert counts["represented"] and counts["cycles"]


CLI = [
    ["validate", "{sn1}"],
    ["validate", "{sn1}", "--json"],
    ["gen-sn", "1"],
    ["cycle", "{sn1}", "--json"],
    ["cycle", "{sn1}"],
    ["triangle", "{one}", "--variant", "demonic"],
    ["game", "solve", "{sn1}", "-n", "1", "--json"],
    ["game", "play", "{sn1}", "--role", "forall", "-n", "1", "--machine", "sn", "--json"],
    ["saturate", "{one}", "--json"],
    ["rep", "cayley", "{z2}", "--json"],
    ["rep", "zareckii", "{ord}", "--json"],
    ["rep", "closed-set", "{pfun}", "--json"],
    ["rep", "verify", "{pfun}", "{repmap}"],
    ["oracle", "{one}", "--max-base", "1", "--json"],
    ["export", "dot", "{sn1}"],
    ["export", "dot", "{repmap}"],
]

PLAY_INPUT = b"init ab_0 ab_2\ndomain_range 0 1 ab_0\n"


@pytest.fixture(scope="module")
def cli_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("det")
    group = FinStructure.build("z2", SEMI_ID, ["1", "a"],
                               compose={("1", "1"): "1", ("1", "a"): "a", ("a", "1"): "a",
                                        ("a", "a"): "1"}, consts={"id": "1"})
    pfun = partial_function_algebra()[0]
    texts = {"sn1": serialize_structure(gen_sn(1)), "one": serialize_structure(one_element()),
             "z2": serialize_structure(group), "pfun": serialize_structure(pfun),
             "ord": serialize_structure(proper([rel(2, (0, 1))], ORDERED)[0]),
             "repmap": closed_set_rep(pfun).dumps()}
    paths = {}
    for key, text in texts.items():
        p = d / key
        p.write_text(text)
        paths[key] = str(p)
    return paths


def test_criterion_10_cli_determinism(criterion, cli_files):
    with criterion(10, "every CLI command gives byte-identical output across two runs"):
        for argv in CLI:
            argv = [a.format(**cli_files) for a in argv]
            stdin = PLAY_INPUT if argv[0] == "game" else b""
            runs = [subprocess.run([sys.executable, "-m", "relrep.cli", *argv], input=stdin,
                                   capture_output=True) for _ in range(2)]
            assert runs[0].returncode in (0, 1), (argv, runs[0].stderr)
            assert runs[0].stdout, argv
            assert runs[0].stdout == runs[1].stdout, argv
            assert runs[0].returncode == runs[1].returncode
