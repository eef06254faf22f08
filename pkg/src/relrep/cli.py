"""relrep command line.

Exit codes: 0 verdict produced, 1 negative verdict, 2 usage or parse
error, 3 inconclusive (a cap was hit).
"""

from __future__ import annotations

import argparse
import json
import sys

from relrep.algebra import StructureError, validate_structure
from relrep.dsl import StructureParseError, parse_structure, serialize_structure
from relrep.family import gen_sn, sn_elements, sn_strategy
from relrep.game.interactive import EXISTS_SURVIVES, play_interactive, replay_transcript
from relrep.game.moves import IllegalMove
from relrep.game.network import dot_graph, network_from_json, network_to_dot
from relrep.game.saturate import SaturationFailed, saturate_and_extract
from relrep.game.solver import exists_wins, losing_pair
from relrep.game.strategy import FirstConsistent, RandomForall, SolverForall, SolverStrategy
from relrep.preorder import SignatureMismatch, find_prec_cycle, triangle_closure
from relrep.repbuild import (Inconclusive, PreconditionError, RepMap, RepresentationError,
                             brute_force_search, cayley_rep, closed_set_rep,
                             verify_representation, zareckii_rep)

OK, NEGATIVE, USAGE, INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _structure(path: str):
    return parse_structure(_read(path))


def _emit(args, text: str, payload=None):
    if args.json and payload is not None:
        print(json.dumps(payload, indent=2, ensure_ascii=False, sort_keys=True))
    else:
        print(text)


# -- subcommands ----------------------------------------------------------------------

def cmd_validate(args):
    s = _structure(args.file)
    report = validate_structure(s)
    payload = {"structure": s.name, "level": report.level,
               "findings": [{"law": f.law, "status": f.status,
                             "counterexample": list(f.counterexample), "message": f.message}
                            for f in report.findings]}
    _emit(args, report.render(), payload)
    return NEGATIVE if report.errors else OK


def cmd_gen_sn(args):
    if args.n < 0:
        raise UsageError("n must be a natural number")
    sys.stdout.write(serialize_structure(gen_sn(args.n)))
    return OK


def cmd_cycle(args):
    s = _structure(args.file)
    cert = find_prec_cycle(s, one_sided=args.one_sided)
    if cert is None:
        _emit(args, "no cycle", {"structure": s.name, "cycle": None})
        return NEGATIVE
    if args.json:
        print(cert.dumps())
        return OK
    print("cycle: " + " ⪯ ".join(cert.cycle + cert.cycle[:1]))
    for steps in cert.derivations:
        last = steps[-1]
        print(f"{last.s} ⪯ {last.t}:")
        for st in steps:
            print(f"  {st.kind} {st.s} ⪯ {st.t} via {', '.join(str(w) for w in st.witnesses)}")
    return OK


def cmd_triangle(args):
    s = _structure(args.file)
    pairs = sorted(triangle_closure(s, args.variant), key=lambda p: (s.id_of(p[0]), s.id_of(p[1])))
    _emit(args, "\n".join(f"{a} ◁ {b}" for a, b in pairs),
          {"structure": s.name, "variant": args.variant, "pairs": [list(p) for p in pairs]})
    return OK


def cmd_game_solve(args):
    s = _structure(args.file)
    budget = args.budget or None
    wins = exists_wins(s, args.n, budget=budget, jobs=args.jobs)
    payload = {"structure": s.name, "n": args.n,
               "verdict": "exists-wins" if wins else "forall-wins"}
    if not wins:
        payload["losing_pair"] = list(losing_pair(s, args.n, budget=budget))
    text = payload["verdict"]
    if not wins:
        text += " (opening pair " + " ".join(payload["losing_pair"]) + ")"
    _emit(args, text, payload)
    return OK if wins else NEGATIVE


def _sn_n(s):
    if (s.size - 3) % 12 or ((s.size - 3) // 12) % 2 == 0:
        return None
    n = ((s.size - 3) // 12 - 1) // 2
    return n if tuple(s.elements) == tuple(sn_elements(n)) else None


def _machine(args, s):
    if args.role == "forall":
        if args.machine == "sn":
            n = _sn_n(s)
            if n is None:
                raise UsageError("the sn machine only plays on S_n structures")
            return sn_strategy(n)
        if args.machine == "first":
            return FirstConsistent()
        if args.machine in ("solver", None):
            return SolverStrategy()
        raise UsageError(f"no ∃ machine called {args.machine!r}")
    if args.machine == "random":
        return RandomForall(args.seed)
    if args.machine in ("solver", None):
        return SolverForall()
    raise UsageError(f"no ∀ machine called {args.machine!r}")


def cmd_game_play(args):
    s = _structure(args.file)
    if args.replay:
        verdict, state = replay_transcript(s, _read(args.replay).splitlines())
        _emit(args, verdict or "unfinished", {"structure": s.name, "verdict": verdict})
        if verdict is None:
            return INCONCLUSIVE
        return OK if verdict == EXISTS_SURVIVES else NEGATIVE
    machine = _machine(args, s)
    out = sys.stderr if args.json else sys.stdout
    log = play_interactive(s, args.role, args.n, machine, sys.stdin, out)
    if args.transcript:
        with open(args.transcript, "w", encoding="utf-8") as fh:
            fh.write("\n".join(log.lines()) + "\n")
    if args.json:
        print("\n".join(log.lines()))
    if log.verdict is None:
        return INCONCLUSIVE
    return OK if log.verdict == EXISTS_SURVIVES else NEGATIVE


def cmd_saturate(args):
    s = _structure(args.file)
    try:
        rep = saturate_and_extract(s, args.node_cap, args.step_cap)
    except SaturationFailed as exc:
        print(f"saturation failed: {exc}", file=sys.stderr)
        return NEGATIVE
    print(rep.dumps() if args.json else _rep_text(rep))
    return OK


def _rep_text(rep: RepMap) -> str:
    lines = [f"base {rep.base}"]
    for e in rep.structure.elements:
        lines.append(f"{e} ↦ {rep.assignment[e]}")
    return "\n".join(lines)


_BUILDERS = {"cayley": cayley_rep, "zareckii": zareckii_rep, "closed-set": closed_set_rep}


def cmd_rep(args):
    s = _structure(args.file)
    if args.builder == "verify":
        if not args.repmap:
            raise UsageError("rep verify needs a repmap file")
        try:
            rep = RepMap.from_json(s, json.loads(_read(args.repmap)))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad repmap: {exc}") from None
        bad = verify_representation(rep)
        _emit(args, "valid" if not bad else "\n".join(map(str, bad)),
              {"valid": not bad, "violations": [str(v) for v in bad]})
        return NEGATIVE if bad else OK
    if args.repmap:
        raise UsageError(f"rep {args.builder} takes one file")
    try:
        rep = _BUILDERS[args.builder](s)
    except PreconditionError as exc:
        print(f"precondition: {exc}", file=sys.stderr)
        return NEGATIVE
    print(rep.dumps() if args.json else _rep_text(rep))
    return OK


def cmd_oracle(args):
    s = _structure(args.file)
    rep = brute_force_search(s, args.max_base, step_cap=args.step_cap, jobs=args.jobs)
    if rep is None:
        _emit(args, f"no representation over a base of size at most {args.max_base}",
              {"structure": s.name, "max_base": args.max_base, "representation": None})
        return NEGATIVE
    if args.json:
        print(json.dumps({"structure": s.name, "max_base": args.max_base,
                          "representation": rep.to_json()}, indent=2, sort_keys=True))
    else:
        print(_rep_text(rep))
    return OK


def cmd_export_dot(args):
    text = _read(args.file)
    try:
        data = json.loads(text)
    except ValueError:
        data = None
    if isinstance(data, dict) and "assignment" in data:
        edges = {}
        for e in sorted(data["assignment"]):
            for x, y in data["assignment"][e]:
                edges.setdefault((int(x), int(y)), []).append(e)
        print(dot_graph("repmap", range(int(data["base"])), edges), end="")
        return OK
    if isinstance(data, dict) and "nodes" in data:
        if args.structure:
            s = _structure(args.structure)
            print(network_to_dot(network_from_json(data, s), s), end="")
            return OK

        def table(rows):
            return {(int(x), int(y)): list(labels) for x, y, labels in rows}
        print(dot_graph("network", data["nodes"], table(data.get("top", [])),
                        table(data.get("bot", []))), end="")
        return OK
    s = parse_structure(text)
    print(structure_dot(s), end="")
    return OK


def structure_dot(s) -> str:
    """Domain-range elements as nodes; every other element an edge from its domain to its range."""
    dr = sorted(s.dr_image) if {"D", "R"} <= s.signature.unary else []
    pos = {e: i for i, e in enumerate(dr)}
    names = s.elements
    lines = [f'digraph "{s.name}" {{']
    lines += [f'  n{pos[e]} [label="{names[e]}"];' for e in dr]
    edges = {}
    for a in range(s.size):
        if a in pos:
            continue
        edges.setdefault((pos[s.D(a)], pos[s.R(a)]), []).append(names[a])
    for (x, y), labels in sorted(edges.items()):
        lines.append(f'  n{x} -> n{y} [label="{", ".join(labels)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized players")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")

    p = argparse.ArgumentParser(prog="relrep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("validate", parents=[common], help="check a structure file")
    c.add_argument("file")
    c.set_defaults(func=cmd_validate)

    c = sub.add_parser("gen-sn", parents=[common], help="print the structure S_n")
    c.add_argument("n", type=int)
    c.set_defaults(func=cmd_gen_sn)

    c = sub.add_parser("cycle", parents=[common], help="find a ⪯-cycle certificate")
    c.add_argument("file")
    c.add_argument("--one-sided", action="store_true", help="also sandwich on one side only")
    c.set_defaults(func=cmd_cycle)

    c = sub.add_parser("triangle", parents=[common], help="print the ◁ relation")
    c.add_argument("file")
    c.add_argument("--variant", choices=["angelic", "demonic"], required=True)
    c.set_defaults(func=cmd_triangle)

    g = sub.add_parser("game", help="the representation game").add_subparsers(
        dest="game_command", required=True)
    c = g.add_parser("solve", parents=[common], help="decide the n-move game")
    c.add_argument("file")
    c.add_argument("-n", type=int, required=True)
    c.add_argument("--budget", type=int, default=5_000_000, help="position cap, 0 for none")
    c.set_defaults(func=cmd_game_solve)
    c = g.add_parser("play", parents=[common], help="play on stdin against a machine")
    c.add_argument("file")
    c.add_argument("--role", choices=["forall", "exists"], default="forall")
    c.add_argument("-n", type=int, default=1)
    c.add_argument("--machine", choices=["solver", "sn", "first", "random"])
    c.add_argument("--transcript", help="write the JSON-lines transcript here")
    c.add_argument("--replay", help="replay a transcript instead of playing")
    c.set_defaults(func=cmd_game_play)

    c = sub.add_parser("saturate", parents=[common], help="capped saturation to a representation")
    c.add_argument("file")
    c.add_argument("--node-cap", type=int, default=12)
    c.add_argument("--step-cap", type=int, default=20000)
    c.set_defaults(func=cmd_saturate)

    c = sub.add_parser("rep", parents=[common], help="build or verify a representation")
    c.add_argument("builder", choices=["cayley", "zareckii", "closed-set", "verify"])
    c.add_argument("file")
    c.add_argument("repmap", nargs="?")
    c.set_defaults(func=cmd_rep)

    c = sub.add_parser("oracle", parents=[common], help="brute-force representation search")
    c.add_argument("file")
    c.add_argument("--max-base", type=int, default=2)
    c.add_argument("--step-cap", type=int, default=2_000_000)
    c.set_defaults(func=cmd_oracle)

    e = sub.add_parser("export", help="export artifacts").add_subparsers(
        dest="export_command", required=True)
    c = e.add_parser("dot", parents=[common], help="DOT for a structure, repmap or network")
    c.add_argument("file")
    c.add_argument("--structure", help="structure file naming a network's labels")
    c.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, StructureParseError, IllegalMove) as exc:
        print(f"relrep: {exc}", file=sys.stderr)
        return USAGE
    except (SignatureMismatch, StructureError) as exc:
        print(f"relrep: {exc}", file=sys.stderr)
        return USAGE
    except RepresentationError as exc:
        print(f"relrep: {exc}", file=sys.stderr)
        return NEGATIVE
    except Inconclusive as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
