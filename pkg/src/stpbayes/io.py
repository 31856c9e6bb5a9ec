"""JSON game documents.

A document looks like::

    {
      "order": "lex-tma",
      "players": 2,
      "types": [2, 2],
      "actions": [3, 3],
      "admissible": [[[1, 2], [2, 3]], [[1, 2, 3], [1, 3]]],
      "prior": [0.3, 0.2, 0.1, 0.4],
      "payoffs": [[2, 1, 1, ...], [3, 4, -2, ...]]
    }

Payoff lists run over ``(t, a)`` with the type profile most significant and
player 1 most significant inside each block; ``null`` marks an inadmissible
cell. All indices are 1-based.
"""
from __future__ import annotations

import json
from math import prod

import numpy as np

from .bayesian import PRIOR_TOL, BayesianGame
from .errors import ParseError, ValidationError
from .extreal import NEG_INF
from .stp import ProfileSpace

ORDER = "lex-tma"
FIELDS = ("order", "players", "types", "actions", "admissible", "prior", "payoffs")


def _int_list(doc, name, n):
    value = doc[name]
    if not isinstance(value, list) or len(value) != n:
        raise ValidationError(f"{name}: expected a list of {n} integers")
    for k, x in enumerate(value, start=1):
        if isinstance(x, bool) or not isinstance(x, int) or x < 1:
            raise ValidationError(f"{name}[{k}]: expected a positive integer, got {x!r}")
    return tuple(value)


def _number(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)) or not np.isfinite(x):
        raise ValidationError(f"{where}: expected a finite number, got {x!r}")
    return float(x)


def parse_game(text: str) -> BayesianGame:
    """Parse and validate a game document. Diagnostics name field and coordinate."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("a game document must be a JSON object")
    missing = [f for f in FIELDS if f not in doc]
    if missing:
        raise ValidationError(f"missing field(s): {', '.join(missing)}")
    if doc["order"] != ORDER:
        raise ValidationError(f"order: only {ORDER!r} is supported, got {doc['order']!r}")
    n = doc["players"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"players: expected a positive integer, got {n!r}")
    tc = _int_list(doc, "types", n)
    ac = _int_list(doc, "actions", n)
    tau, r = prod(tc), prod(ac)

    adm = doc["admissible"]
    if not isinstance(adm, list) or len(adm) != n:
        raise ValidationError(f"admissible: expected one entry per player ({n})")
    admissible = []
    for i in range(n):
        per = adm[i]
        if not isinstance(per, list) or len(per) != tc[i]:
            raise ValidationError(f"admissible[{i + 1}]: expected {tc[i]} action lists")
        sets = []
        for j, acts in enumerate(per, start=1):
            where = f"admissible[{i + 1}][{j}]"
            if not isinstance(acts, list) or not acts:
                raise ValidationError(f"{where}: expected a nonempty list of actions")
            for a in acts:
                if isinstance(a, bool) or not isinstance(a, int) or not 1 <= a <= ac[i]:
                    raise ValidationError(f"{where}: action {a!r} outside 1..{ac[i]}")
            sets.append(frozenset(acts))
        admissible.append(tuple(sets))

    prior = doc["prior"]
    if not isinstance(prior, list) or len(prior) != tau:
        raise ValidationError(f"prior: expected {tau} entries")
    prior = [_number(x, f"prior[{k}]") for k, x in enumerate(prior, start=1)]
    for k, x in enumerate(prior, start=1):
        if x < 0:
            raise ValidationError(f"prior[{k}]: negative probability {x}")
    if abs(sum(prior) - 1.0) > PRIOR_TOL:
        raise ValidationError(f"prior: entries sum to {sum(prior):.12g}, not 1")

    pay = doc["payoffs"]
    if not isinstance(pay, list) or len(pay) != n:
        raise ValidationError(f"payoffs: expected one list per player ({n})")
    joint = ProfileSpace(tc + ac)
    mask = np.ones(tc + ac, dtype=bool)
    for i in range(n):
        m = np.zeros((tc[i], ac[i]), dtype=bool)
        for j, s in enumerate(admissible[i]):
            m[j, [a - 1 for a in s]] = True
        shape = [1] * (2 * n)
        shape[i], shape[n + i] = tc[i], ac[i]
        mask &= m.reshape(shape)
    mask = mask.reshape(-1)
    rows = np.empty((n, tau * r))
    for i in range(n):
        row = pay[i]
        if not isinstance(row, list) or len(row) != tau * r:
            raise ValidationError(f"payoffs[{i + 1}]: expected {tau * r} entries")
        for k, x in enumerate(row):
            prof = joint.unindex(k + 1)
            where = f"payoffs[{i + 1}][{k + 1}] (t={prof[:n]}, a={prof[n:]})"
            if x is None:
                if mask[k]:
                    raise ValidationError(f"{where}: null but the actions are admissible")
                rows[i, k] = NEG_INF
            else:
                if not mask[k]:
                    raise ValidationError(f"{where}: a number but the actions are inadmissible")
                rows[i, k] = _number(x, where)
    return BayesianGame(tc, ac, admissible, rows, prior)


def load_game(path) -> BayesianGame:
    with open(path, encoding="utf-8") as fh:
        return parse_game(fh.read())


def ext_to_json(values) -> list:
    """Floats with ``-inf`` written as ``None``."""
    return [None if np.isneginf(x) else float(x) for x in np.asarray(values, dtype=float).reshape(-1)]


def game_to_dict(g: BayesianGame) -> dict:
    return {
        "order": ORDER,
        "players": g.n,
        "types": list(g.type_cards),
        "actions": list(g.action_cards),
        "admissible": [[sorted(s) for s in per] for per in g.admissible],
        "prior": [float(x) for x in g.prior],
        "payoffs": [ext_to_json(row) for row in g.payoffs],
    }


def _compact(x):
    if isinstance(x, float) and x.is_integer():
        return int(x)
    if isinstance(x, list):
        return [_compact(v) for v in x]
    return x


def dump_game(g: BayesianGame) -> str:
    """One field per line; integral payoffs are written without a decimal point."""
    doc = game_to_dict(g)
    body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(_compact(v))}" for k, v in doc.items())
    return "{\n" + body + "\n}"
