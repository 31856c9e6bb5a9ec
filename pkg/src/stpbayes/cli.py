"""Command-line interface.

Exit codes: 0 success, 2 parse or validation error, 3 infeasible analysis,
4 negative existence result (no equilibrium, not potential).
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .bayes_potential import NOTIONS, bayes_potential
from .bayesian import BayesianGame, belief, interim_bne, marginal_prior
from .conversions import at_bne, at_convert, harsanyi_convert, selten_convert
from .dynamics import SurConfig, marginal, simulate, stationary_distribution, step_maps, transition_matrix
from .errors import (
    BadPrior,
    DimensionMismatch,
    IndexOutOfRange,
    InfeasibleUpdate,
    InfinitePayoff,
    MissingEntry,
    NotApplicable,
    ParseError,
    ValidationError,
    ZeroProbabilityType,
)
from .io import ext_to_json, load_game
from .normal_game import pure_nash
from .stp import ProfileSpace

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_NEGATIVE = 0, 2, 3, 4


class _Negative(Exception):
    """Carries the payload of a negative existence answer."""

    def __init__(self, payload, text):
        super().__init__(text)
        self.payload = payload
        self.text = text


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _fmt(x: float) -> str:
    return "-inf" if np.isneginf(x) else f"{x:.6g}"


def _row(values) -> str:
    return "[" + ", ".join(_fmt(x) for x in np.asarray(values).reshape(-1)) + "]"


def _bimatrix(rows: np.ndarray, cards, row_labels=None, col_labels=None) -> str:
    """Two-player payoff table: ``c_1, c_2`` in each cell."""
    k1, k2 = cards
    t1, t2 = rows[0].reshape(k1, k2), rows[1].reshape(k1, k2)
    rl = row_labels or [f"a1={i + 1}" for i in range(k1)]
    cl = col_labels or [f"a2={j + 1}" for j in range(k2)]
    cells = [[f"{_fmt(t1[i, j])}, {_fmt(t2[i, j])}" for j in range(k2)] for i in range(k1)]
    w0 = max(len(x) for x in rl + ["c1\\c2"])
    w = max(len(x) for x in cl + [c for r in cells for c in r])
    lines = ["c1\\c2".ljust(w0) + " | " + " | ".join(c.rjust(w) for c in cl)]
    lines.append("-" * len(lines[0]))
    for lab, r in zip(rl, cells):
        lines.append(lab.ljust(w0) + " | " + " | ".join(c.rjust(w) for c in r))
    return "\n".join(lines)


def _profile(p) -> str:
    return "(" + ", ".join(f"a{i + 1}^{a}" for i, a in enumerate(p)) + ")"


def _type_profile(args, g: BayesianGame):
    if args.type_profile is None:
        raise ValidationError("--type-profile is required for the selten conversion")
    if len(args.type_profile) != g.n:
        raise ValidationError(f"--type-profile needs {g.n} entries")
    return args.type_profile


# -- commands --------------------------------------------------------------


def cmd_info(args, g: BayesianGame):
    beliefs = {}
    for i in range(1, g.n + 1):
        for j in range(1, g.type_cards[i - 1] + 1):
            try:
                beliefs[f"{i},{j}"] = belief(g, i, j).ravel().tolist()
            except ZeroProbabilityType:
                beliefs[f"{i},{j}"] = None
    payload = {
        "players": g.n,
        "types": list(g.type_cards),
        "actions": list(g.action_cards),
        "admissible": [[sorted(s) for s in per] for per in g.admissible],
        "prior": g.prior.tolist(),
        "marginal_priors": [marginal_prior(g, i).tolist() for i in range(1, g.n + 1)],
        "beliefs": beliefs,
        "fully_admissible": g.fully_admissible(),
    }
    lines = [
        f"players: {g.n}",
        f"types: {list(g.type_cards)}",
        f"actions: {list(g.action_cards)}",
        f"prior: {_row(g.prior)}",
    ]
    for i in range(1, g.n + 1):
        lines.append(f"player {i} type marginal: {_row(payload['marginal_priors'][i - 1])}")
        for j in range(1, g.type_cards[i - 1] + 1):
            b = beliefs[f"{i},{j}"]
            adm = sorted(g.admissible[i - 1][j - 1])
            lines.append(f"  type {j}: admissible {adm}, belief {'undefined' if b is None else _row(b)}")
    return payload, "\n".join(lines)


def _converted(args, g):
    if args.kind == "harsanyi":
        return harsanyi_convert(g)
    if args.kind == "selten":
        return selten_convert(g, _type_profile(args, g))
    return at_convert(g)


def cmd_convert(args, g: BayesianGame):
    cg = _converted(args, g)
    payload = {"kind": cg.kind, "vectors": [ext_to_json(v) for v in cg.vectors]}
    if cg.type_profile is not None:
        payload["type_profile"] = list(cg.type_profile)
    lines = [f"{cg.kind} conversion"]
    for i, v in enumerate(cg.vectors, start=1):
        lines.append(f"V_{i} = {_row(v)}")
    if g.n == 2:
        game = cg.game
        if cg.kind == "at":
            rl = [f"t1={t + 1} a1={a + 1}" for t in range(g.type_cards[0]) for a in range(g.action_cards[0])]
            cl = [f"t2={t + 1} a2={a + 1}" for t in range(g.type_cards[1]) for a in range(g.action_cards[1])]
            lines += ["", _bimatrix(game.payoffs, game.cardinalities, rl, cl)]
        else:
            lines += ["", _bimatrix(game.payoffs, game.cardinalities)]
    return payload, "\n".join(lines)


def cmd_nash(args, g: BayesianGame):
    notion = args.notion
    if notion == "interim":
        eq = sorted(interim_bne(g))
        payload = {"notion": notion, "equilibria": [[list(s) for s in sigma] for sigma in eq]}
        text = "\n".join(
            "; ".join(f"player {i + 1}: " + ",".join(map(str, s)) for i, s in enumerate(sigma))
            for sigma in eq
        )
        label = "Bayesian-Nash equilibrium"
    elif notion == "at":
        eq = sorted(at_bne(g))
        payload = {"notion": notion, "equilibria": [[list(p) for p in prof] for prof in eq]}
        text = "\n".join(
            "(" + ", ".join(f"t{i + 1}^{t} a{i + 1}^{a}" for i, (t, a) in enumerate(prof)) + ")"
            for prof in eq
        )
        label = "AT-BN-E"
    else:
        if notion == "harsanyi":
            cg = harsanyi_convert(g)
            label = "H-BN-E"
        else:
            cg = selten_convert(g, _type_profile(args, g))
            label = "S-BN-E"
        eq = sorted(pure_nash(cg.game))
        payload = {"notion": notion, "equilibria": [list(p) for p in eq]}
        if cg.type_profile is not None:
            payload["type_profile"] = list(cg.type_profile)
        text = "\n".join(_profile(p) for p in eq)
    if not eq:
        raise _Negative(payload, f"no {label}")
    return payload, text


def cmd_potential(args, g: BayesianGame):
    tp = _type_profile(args, g) if args.notion == "selten" else None
    rep = bayes_potential(g, args.notion, tp)
    payload = {
        "notion": rep.notion,
        "is_potential": rep.is_potential,
        "residual": rep.residual,
        "potential_vector": None if rep.potential_vector is None else ext_to_json(rep.potential_vector),
    }
    if tp is not None:
        payload["type_profile"] = list(tp)
    lines = [f"{rep.notion} potential: {'yes' if rep.is_potential else 'no'} (residual {rep.residual:.3g})"]
    if rep.notion == "tn":
        payload["per_type"] = {
            ",".join(map(str, t)): None if v is None else ext_to_json(v) for t, v in rep.per_type.items()
        }
        for t, v in rep.per_type.items():
            lines.append(f"  t={t}: {'not potential' if v is None else _row(v)}")
    elif rep.potential_vector is not None:
        lines.append(f"potential = {_row(rep.potential_vector)}")
    if not rep.is_potential:
        raise _Negative(payload, "\n".join(lines))
    return payload, "\n".join(lines)


def _dynamics_setup(args, g: BayesianGame):
    cfg = SurConfig(
        conversion=args.conversion,
        rule=args.sur,
        lam=args.lam,
        mode=args.mode,
        order=args.order,
        tie_break=args.tie_break,
        seed=args.seed,
    )
    if args.conversion == "selten":
        cg = selten_convert(g, _type_profile(args, g))
    else:
        cg = at_convert(g)
    return cg, cfg


def _state_label(space: ProfileSpace, idx: int, n: int, at: bool) -> str:
    prof = space.unindex(idx)
    if at:
        return "(" + ", ".join(
            [f"t{i + 1}^{prof[i]}" for i in range(n)] + [f"a{i + 1}^{prof[n + i]}" for i in range(n)]
        ) + ")"
    return _profile(prof)


def cmd_simulate(args, g: BayesianGame):
    cg, cfg = _dynamics_setup(args, g)
    if cfg.mode == "rr":
        maps = step_maps(cg, cfg)
    else:
        maps = transition_matrix(cg, cfg)
    space = (maps[0] if isinstance(maps, list) else maps).space
    if len(args.init) != len(space.cardinalities):
        raise ValidationError(
            f"--init needs {len(space.cardinalities)} coordinates {'(t..., a...)' if cg.kind == 'at' else '(a...)'}"
        )
    x0 = space.index(args.init)
    traj = simulate(maps, x0, args.steps, seed=args.seed)
    at = cg.kind == "at"
    payload = {
        "conversion": cfg.conversion,
        "sur": cfg.rule,
        "mode": cfg.mode,
        "lambda": cfg.lam,
        "seed": cfg.seed,
        "trajectory": [list(space.unindex(x)) for x in traj],
    }
    text = "\n".join(f"{k}: {_state_label(space, x, g.n, at)}" for k, x in enumerate(traj))
    return payload, text


def cmd_stationary(args, g: BayesianGame):
    cg, cfg = _dynamics_setup(args, g)
    m = transition_matrix(cg, cfg)
    res = stationary_distribution(m)
    space = m.space
    at = cg.kind == "at"
    payload = {
        "conversion": cfg.conversion,
        "sur": cfg.rule,
        "mode": cfg.mode,
        "lambda": cfg.lam,
        "distribution": res.distribution.tolist(),
        "converged": res.converged,
        "iterations": res.iterations,
        "reducible": res.reducible,
        "marginals": [marginal(res.distribution, k, space).tolist()
                      for k in range(1, len(space.cardinalities) + 1)],
    }
    lines = [f"converged: {res.converged} after {res.iterations} iterations"]
    for k, p in enumerate(res.distribution, start=1):
        lines.append(f"{_state_label(space, k, g.n, at)}: {p:.6f}")
    for k, p in enumerate(payload["marginals"], start=1):
        lines.append(f"coordinate {k} marginal: {_row(p)}")
    return payload, "\n".join(lines)


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stpbayes", description="Analyse finite static Bayesian games.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("file", help="game document (JSON)")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="summarise a game")

    p = sub.add_parser("convert", parents=[common], help="convert to a complete-information game")
    p.add_argument("--kind", choices=("harsanyi", "selten", "at"), required=True)
    p.add_argument("--type-profile", type=_ints)

    p = sub.add_parser("nash", parents=[common], help="pure equilibria")
    p.add_argument("--notion", choices=("interim", "harsanyi", "selten", "at"), required=True)
    p.add_argument("--type-profile", type=_ints)

    p = sub.add_parser("potential", parents=[common], help="potential-game test")
    p.add_argument("--notion", choices=NOTIONS, required=True)
    p.add_argument("--type-profile", type=_ints)

    for name, helptext in (("simulate", "simulate strategy updating"),
                           ("stationary", "stationary law of the updating chain")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--conversion", choices=("selten", "at-concurrent", "at-separate"), required=True)
        p.add_argument("--sur", choices=("mbra", "logit"), default="logit" if name == "stationary" else "mbra")
        p.add_argument("--lambda", dest="lam", type=float, default=1.0)
        p.add_argument("--mode", choices=("sync", "rr", "uniform"), default="sync")
        p.add_argument("--order", type=_ints)
        p.add_argument("--tie-break", choices=("lowest", "uniform"), default="lowest")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--type-profile", type=_ints)
        if name == "simulate":
            p.add_argument("--steps", type=int, default=10)
            p.add_argument("--init", type=_ints, required=True)
    return parser


COMMANDS = {
    "info": cmd_info,
    "convert": cmd_convert,
    "nash": cmd_nash,
    "potential": cmd_potential,
    "simulate": cmd_simulate,
    "stationary": cmd_stationary,
}


def _emit(args, payload, text, out):
    if args.json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    elif text:
        out.write(text + "\n")


def run_command(argv=None, stdout=None, stderr=None) -> int:
    out = stdout or sys.stdout
    err = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        g = load_game(args.file)
        payload, text = COMMANDS[args.command](args, g)
    except _Negative as neg:
        _emit(args, neg.payload, neg.text, out)
        return EXIT_NEGATIVE
    except OSError as exc:
        err.write(f"error: cannot read {args.file}: {exc.strerror}\n")
        return EXIT_INPUT
    except (ParseError, ValidationError, BadPrior, MissingEntry, IndexOutOfRange, DimensionMismatch) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (ZeroProbabilityType, InfeasibleUpdate, InfinitePayoff, NotApplicable) as exc:
        err.write(f"infeasible: {exc}\n")
        return EXIT_INFEASIBLE
    _emit(args, payload, text, out)
    return EXIT_OK


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
