"""Seeded random generation of systems, formulas and tests.

Randomness is derived per trial by hashing the master seed together with a
path of labels, so any trial can be regenerated in isolation and the
results never depend on process hash randomization or trial order.
"""

import hashlib
import random
from dataclasses import dataclass

from . import formulas as fm
from . import testterms as tm
from .lts import TAU, Lts, visible

_LETTERS = "abcdefghijklmnopqrstuvxyz"  # no w: reserved for success


@dataclass
class TrialConfig:
    """Knobs for the randomized checks.

    trials drives the representation theorems; property_trials the
    algebraic properties (fixpoints, approximants, equivalences).
    divergence_bias is the chance a generated system gets an extra tau
    self-loop; tau_density the chance a generated transition or modality
    is silent.
    """

    seed: int = 0
    trials: int = 500
    property_trials: int = 200
    max_states: int = 8
    alphabet_size: int = 3
    max_formula_depth: int = 5
    max_test_depth: int = 5
    max_sim_vars: int = 4
    tau_density: float = 0.3
    divergence_bias: float = 0.5

    def __post_init__(self):
        if not 1 <= self.alphabet_size <= len(_LETTERS):
            raise ValueError("alphabet_size out of range")
        if self.max_states < 1:
            raise ValueError("max_states must be positive")

    def alphabet(self) -> list[str]:
        return list(_LETTERS[: self.alphabet_size])


def spawn_rng(seed: int, *path) -> random.Random:
    """Independent generator for (seed, path), stable across processes."""
    key = ":".join([str(seed), *map(str, path)])
    digest = hashlib.sha256(key.encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def generate_lts(cfg: TrialConfig, rng: random.Random, name: str = "g") -> Lts:
    """A random system over the configured alphabet.  All alphabet letters
    are declared even when unused, so formulas over the same configuration
    can be interpreted directly."""
    n = rng.randint(1, cfg.max_states)
    states = [f"s{i}" for i in range(n)]
    letters = cfg.alphabet()
    transitions = []
    for i in range(n):
        for _ in range(rng.randint(0, 3)):
            action = TAU if rng.random() < cfg.tau_density else visible(rng.choice(letters))
            transitions.append((states[i], action, states[rng.randrange(n)]))
    if rng.random() < cfg.divergence_bias:
        looper = states[rng.randrange(n)]
        transitions.append((looper, TAU, looper))
    return Lts(states=states, transitions=transitions, alphabet=letters, name=name)


def _action(cfg, rng):
    if rng.random() < cfg.tau_density:
        return TAU
    return visible(rng.choice(cfg.alphabet()))


def _acc_set(cfg, rng) -> frozenset[str]:
    return frozenset(a for a in cfg.alphabet() if rng.random() < 0.5)


def generate_formula(cfg: TrialConfig, rng: random.Random, fragment: str = "full",
                     depth: int | None = None, scope: tuple[str, ...] = ()):
    """A closed random formula in the given fragment ("may", "must" or
    "full").  scope lists variables allowed free, for recursive use."""
    if depth is None:
        depth = cfg.max_formula_depth
    leaves: list = [fm.Tt(), fm.Ff()]
    if fragment in ("must", "full"):
        leaves.append(fm.Acc(_acc_set(cfg, rng)))
    if scope:
        leaves.append(fm.Var(rng.choice(scope)))
    if depth <= 0:
        return rng.choice(leaves)
    kinds = {
        "may": ("dia", "or", "min", "leaf"),
        "must": ("box", "and", "min", "leaf"),
        "full": ("dia", "box", "or", "and", "min", "max", "acc", "leaf"),
    }[fragment]
    kind = rng.choice(kinds)
    sub = lambda sc=scope: generate_formula(cfg, rng, fragment, depth - 1, sc)
    match kind:
        case "dia":
            return fm.Dia(_action(cfg, rng), sub())
        case "box":
            return fm.Box(_action(cfg, rng), sub())
        case "or":
            return fm.Or(sub(), sub())
        case "and":
            return fm.And(sub(), sub())
        case "min" | "max":
            var = f"X{len(scope)}"
            body = generate_formula(cfg, rng, fragment, depth - 1, scope + (var,))
            return fm.Min(var, body) if kind == "min" else fm.Max(var, body)
        case "acc":
            return fm.Acc(_acc_set(cfg, rng))
        case _:
            return rng.choice(leaves)


def generate_test(cfg: TrialConfig, rng: random.Random,
                  depth: int | None = None, scope: tuple[str, ...] = ()):
    """A closed random test term."""
    if depth is None:
        depth = cfg.max_test_depth
    leaves: list = [tm.Nil(), tm.Success()]
    if scope:
        leaves.append(tm.Var(rng.choice(scope)))
    if depth <= 0:
        return rng.choice(leaves)
    kind = rng.choice(("prefix", "prefix", "sum", "mu", "leaf"))
    match kind:
        case "prefix":
            return tm.Prefix(_action(cfg, rng), generate_test(cfg, rng, depth - 1, scope))
        case "sum":
            return tm.Sum(
                generate_test(cfg, rng, depth - 1, scope),
                generate_test(cfg, rng, depth - 1, scope),
            )
        case "mu":
            var = f"X{len(scope)}"
            return tm.Mu(var, generate_test(cfg, rng, depth - 1, scope + (var,)))
        case _:
            return rng.choice(leaves)


def generate_sim_system(cfg: TrialConfig, rng: random.Random) -> fm.SimFormula:
    """A closed random simultaneous least fixpoint with up to max_sim_vars
    equations, bodies drawn from the full logic over those variables."""
    n = rng.randint(1, cfg.max_sim_vars)
    variables = tuple(f"Z{i}" for i in range(n))
    depth = max(2, cfg.max_formula_depth - 2)
    bodies = tuple(
        generate_formula(cfg, rng, "full", depth, variables) for _ in range(n)
    )
    return fm.SimFormula(variables, bodies, rng.randrange(n))
