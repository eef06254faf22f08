"""Line-oriented play against a machine player, with JSON-lines transcripts."""

from __future__ import annotations

import json

from relrep.algebra import FinStructure, StructureError
from relrep.game.moves import (IllegalMove, PlayState, challenge_from_json, is_legal,
                               legal_challenges, parse_challenge, parse_response, respond,
                               response_from_json, responses)
from relrep.game.network import consistent, dumps_network
from relrep.game.strategy import ExistsStrategy, ForallStrategy, Resign

EXISTS_SURVIVES = "∃ survives"
FORALL_WINS = "∀ wins"

_RESPONSE_SYNTAX = {
    "init": "init <0-3>  (0 ref[a,b], 1 nref[a,b], 2 ref[b,a], 3 nref[b,a])",
    "witness": "node <id|fresh>", "domain": "node <id|fresh>", "range": "node <id|fresh>",
    "composition": "compose | bottom <id|fresh>",
    "composition_domain": "ok", "domain_range": "ok",
}


class Transcript:
    def __init__(self):
        self.records = []

    def add(self, **record):
        self.records.append(record)

    @property
    def verdict(self):
        for rec in reversed(self.records):
            if "verdict" in rec:
                return rec["verdict"]
        return None

    def lines(self) -> list[str]:
        return [json.dumps(r, ensure_ascii=False, sort_keys=True) for r in self.records]


def _say(output, text):
    if output is not None:
        output.write(text + "\n")
        output.flush()


def _help_forall(state: PlayState, output, limit=60):
    s = state.structure
    opts = legal_challenges(state, prune=True)
    _say(output, f"{len(opts)} open challenges (syntax: kind then parameters):")
    for ch in opts[:limit]:
        _say(output, "  " + ch.describe(s))
    if len(opts) > limit:
        _say(output, f"  ... {len(opts) - limit} more")


def _help_exists(state: PlayState, ch, output):
    s = state.structure
    _say(output, "reply with: " + _RESPONSE_SYNTAX[ch.kind])
    for r in responses(s, state.network, ch):
        _say(output, "  " + r.describe())


def play_interactive(s: FinStructure, human_role: str, n: int, machine, input,
                     output=None) -> Transcript:
    """Play one game; the human side reads lines from ``input``.

    ``machine`` is an ``ExistsStrategy`` when the human is ∀ and a
    ``ForallStrategy`` otherwise.  Bad input is answered with a re-prompt and
    recorded; end of input or ``quit`` stops the game without a verdict.
    """
    if human_role not in ("forall", "exists"):
        raise ValueError("human_role must be 'forall' or 'exists'")
    want = ExistsStrategy if human_role == "forall" else ForallStrategy
    if not isinstance(machine, want):
        raise TypeError(f"machine player must be a {want.__name__}")
    machine.reset(s, n)
    log = Transcript()
    log.add(event="start", structure=s.name, moves=n, human=human_role)
    state = PlayState(s, None, n)
    lines = iter(input)

    def ask(prompt):
        _say(output, prompt)
        for raw in lines:
            text = raw.strip()
            if text:
                return text
        return None

    if s.size < 2:
        _say(output, "no pair of distinct elements: nothing to challenge")
    while s.size > 1 and (state.network is None or state.moves_left > 0):
        if human_role == "forall":
            ch = None
            while ch is None:
                text = ask(f"[{state.moves_left} left] ∀> ")
                if text is None or text == "quit":
                    log.add(event="stopped")
                    return log
                if text == "help":
                    _help_forall(state, output)
                    continue
                try:
                    cand = parse_challenge(s, text)
                    if not is_legal(s, state.network, cand):
                        raise IllegalMove("side conditions do not hold here")
                    ch = cand
                except (IllegalMove, StructureError) as exc:
                    log.add(event="reprompt", input=text, error=str(exc))
                    _say(output, f"rejected: {exc}")
            try:
                r = machine.respond(state, ch)
            except Resign as exc:
                log.add(role="forall", challenge=ch.to_json(s))
                log.add(verdict=FORALL_WINS, reason=str(exc))
                _say(output, FORALL_WINS)
                return log
            _say(output, f"∃ replies: {r.describe()}")
        else:
            ch = machine.challenge(state)
            if ch is None:
                break
            _say(output, f"∀ challenges: {ch.describe(s)}")
            r = None
            while r is None:
                text = ask(f"[{state.moves_left} left] ∃> ")
                if text is None or text == "quit":
                    log.add(role="forall", challenge=ch.to_json(s))
                    log.add(event="stopped")
                    return log
                if text == "help":
                    _help_exists(state, ch, output)
                    continue
                try:
                    cand = parse_response(ch, text)
                    respond(state, ch, cand)
                    r = cand
                except IllegalMove as exc:
                    log.add(event="reprompt", input=text, error=str(exc))
                    _say(output, f"rejected: {exc}")
        log.add(role="forall", challenge=ch.to_json(s))
        log.add(role="exists", response=r.to_json(s))
        state = respond(state, ch, r)
        if not consistent(state.network, s):
            _finish(log, state, FORALL_WINS, output)
            return log
    _finish(log, state, EXISTS_SURVIVES, output)
    return log


def _finish(log, state, verdict, output):
    rec = {"verdict": verdict}
    if state.network is not None:
        rec["network"] = json.loads(dumps_network(state.network, state.structure))
    log.add(**rec)
    _say(output, verdict)


def replay_transcript(s: FinStructure, lines) -> tuple[str | None, PlayState]:
    """Re-apply the moves of a transcript; returns the verdict they lead to.

    Every challenge is checked for legality.  The verdict is None when the
    transcript stops early.
    """
    records = [json.loads(line) for line in lines if line.strip()]
    n = next((r["moves"] for r in records if r.get("event") == "start"), None)
    if n is None:
        raise IllegalMove("transcript has no start record")
    state = PlayState(s, None, int(n))
    pending = None
    for rec in records:
        if rec.get("role") == "forall":
            pending = challenge_from_json(s, rec["challenge"])
        elif rec.get("role") == "exists":
            if pending is None:
                raise IllegalMove("response without a challenge")
            state = respond(state, pending, response_from_json(s, rec["response"]))
            pending = None
            if not consistent(state.network, s):
                return FORALL_WINS, state
    if pending is not None:
        return FORALL_WINS if any("verdict" in r for r in records) else None, state
    if s.size < 2 or (state.network is not None and state.moves_left == 0):
        return EXISTS_SURVIVES, state
    return None, state
