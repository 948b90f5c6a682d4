"""Clauser-Horne-type Bell functionals as signed term tables.

A functional is a linear combination of joint coincidence probabilities
P(k, l | i, j) and single-party marginals P(k | i), with local-realistic
bound 0.  Functionals are plain data so custom tables can be loaded from
text files; the two standard ones ship as presets:

* "ch-qutrit": two settings and two of three outcomes per party, twelve
  joint terms and four negative singles;
* "ch-qubit": the original two-outcome Clauser-Horne sum.

Term indices are 0-based (settings 0..1, outcomes 0..d-1); the text file
format uses 1-based indices, see `load_functional`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .qcore import StateVector
from .scenarios import Scenario, mix_with_noise, probability_tables

PRESETS = ("ch-qutrit", "ch-qubit")


@dataclass(frozen=True)
class BellFunctional:
    """Signed term table over joint and single detection probabilities."""

    joint_terms: tuple  # of (i, j, k, l, sign)
    single_terms: tuple  # of (party, i, k, sign) with party 0=Alice, 1=Bob
    n_outcomes: int
    n_settings: int = 2
    lhv_bound: float = 0.0
    name: str = "custom"

    def __post_init__(self):
        if not self.joint_terms or not self.single_terms:
            raise ValueError("term lists must be non-empty")
        for (i, j, k, l, s) in self.joint_terms:
            if not (0 <= i < self.n_settings and 0 <= j < self.n_settings):
                raise ValueError(f"setting index out of range in joint term {(i, j, k, l, s)}")
            if not (0 <= k < self.n_outcomes and 0 <= l < self.n_outcomes):
                raise ValueError(f"outcome index out of range in joint term {(i, j, k, l, s)}")
            if s not in (1, -1):
                raise ValueError("signs must be +1 or -1")
        for (p, i, k, s) in self.single_terms:
            if p not in (0, 1):
                raise ValueError(f"party must be 0 or 1 in single term {(p, i, k, s)}")
            if not (0 <= i < self.n_settings and 0 <= k < self.n_outcomes):
                raise ValueError(f"index out of range in single term {(p, i, k, s)}")
            if s not in (1, -1):
                raise ValueError("signs must be +1 or -1")
        object.__setattr__(self, "joint_terms", tuple(tuple(t) for t in self.joint_terms))
        object.__setattr__(self, "single_terms", tuple(tuple(t) for t in self.single_terms))

    def noise_value(self) -> float:
        """Value on the maximally mixed state: every joint probability is
        1/d^2 and every marginal 1/d, independent of the settings."""
        d = self.n_outcomes
        j = sum(s for (_, _, _, _, s) in self.joint_terms) / d**2
        s = sum(s for (_, _, _, s) in self.single_terms) / d
        return j + s


@dataclass(frozen=True)
class BellValue:
    """A functional value split into joint (J) and single (S) parts.

    joint and single carry whatever efficiency/noise scaling they were
    evaluated with; total is always their sum.
    """

    joint: float
    single: float

    @property
    def total(self) -> float:
        return self.joint + self.single

    @property
    def ratio(self) -> float:
        """|S| / J, the singles-to-joint diagnostic; nan when J <= 0."""
        if self.joint <= 0:
            return float("nan")
        return abs(self.single) / self.joint

    def at_efficiency(self, eta: float) -> "BellValue":
        """Scale for detection efficiency eta: joints go as eta^2,
        singles as eta (undetected events discarded)."""
        if not 0.0 <= eta <= 1.0:
            raise ValueError(f"efficiency {eta} outside [0, 1]")
        return BellValue(eta * eta * self.joint, eta * self.single)


# --- presets ------------------------------------------------------------

def ch_qutrit_functional() -> BellFunctional:
    """The two-setting, three-outcome Clauser-Horne functional.

    Twelve joint terms on outcomes {0, 1} with signs (+, +, -, +) per
    outcome block, minus Alice's two setting-0 singles and Bob's two
    setting-1 singles.  Its deterministic local bound is exactly 0.
    """
    signs = {(0, 0): 1, (0, 1): 1, (1, 0): -1, (1, 1): 1}
    joint = []
    # two uniform outcome blocks followed by a mixed one; each block runs
    # over the settings (0,0) (0,1) (1,0) (1,1) with signs (+, +, -, +)
    blocks = [
        [((i, j), (1, 0)) for (i, j) in signs] ,
        [((i, j), (0, 1)) for (i, j) in signs],
        [((0, 0), (1, 1)), ((0, 1), (0, 0)), ((1, 0), (1, 1)), ((1, 1), (1, 1))],
    ]
    for block in blocks:
        for (i, j), (k, l) in block:
            joint.append((i, j, k, l, signs[(i, j)]))
    single = [(0, 0, 0, -1), (0, 0, 1, -1), (1, 1, 0, -1), (1, 1, 1, -1)]
    return BellFunctional(tuple(joint), tuple(single), n_outcomes=3, name="ch-qutrit")


def ch_qubit_functional() -> BellFunctional:
    """The original two-outcome Clauser-Horne sum on the (pass, pass)
    coincidences, minus Alice's second-setting and Bob's first-setting
    pass marginals."""
    joint = ((0, 0, 0, 0, 1), (0, 1, 0, 0, -1), (1, 0, 0, 0, 1), (1, 1, 0, 0, 1))
    single = ((0, 1, 0, -1), (1, 0, 0, -1))
    return BellFunctional(joint, single, n_outcomes=2, name="ch-qubit")


def functional_preset(name: str) -> BellFunctional:
    if name == "ch-qutrit":
        return ch_qutrit_functional()
    if name == "ch-qubit":
        return ch_qubit_functional()
    raise ValueError(f"unknown functional preset {name!r}; available: {PRESETS}")


# --- evaluation ---------------------------------------------------------

def _check_compatible(f: BellFunctional, sc: Scenario):
    if f.n_outcomes > sc.local_dim:
        raise ValueError(
            f"functional uses {f.n_outcomes} outcomes but scenario has local dimension {sc.local_dim}"
        )


def evaluate(f: BellFunctional, sc: Scenario, state, settings) -> BellValue:
    """Evaluate the functional at unit efficiency from scenario probabilities."""
    _check_compatible(f, sc)
    joint, sa, sb = probability_tables(sc, state, settings)
    j = sum(s * joint[i, jj, k, l] for (i, jj, k, l, s) in f.joint_terms)
    singles = (sa, sb)
    s_part = sum(s * singles[p][i, k] for (p, i, k, s) in f.single_terms)
    return BellValue(float(j), float(s_part))


def value_at_efficiency(v: BellValue, eta: float) -> float:
    """eta^2 * J + eta * S: the functional value at detection efficiency eta."""
    return v.at_efficiency(eta).total


def value_at_noise(f: BellFunctional, sc: Scenario, state: StateVector, settings, noise_fraction: float) -> float:
    """Value on (1 - F)|psi><psi| + F I/d^2, evaluated on the mixed state."""
    rho = mix_with_noise(state, noise_fraction)
    return evaluate(f, sc, rho, settings).total


def lhv_max(f: BellFunctional) -> float:
    """Exact maximum over local deterministic strategies.

    The functional is linear in each party's local response distribution,
    so the maximum over all local-hidden-variable models is attained at a
    deterministic assignment of one outcome per setting per party.
    """
    n, d = f.n_settings, f.n_outcomes
    best = -np.inf
    for a in itertools.product(range(d), repeat=n):
        for b in itertools.product(range(d), repeat=n):
            v = sum(s for (i, j, k, l, s) in f.joint_terms if a[i] == k and b[j] == l)
            v += sum(s for (p, i, k, s) in f.single_terms if (a, b)[p][i] == k)
            best = max(best, v)
    return float(best)


# --- custom table files -------------------------------------------------

def load_functional(path) -> BellFunctional:
    """Parse a term table file.

    Lines are `joint i j k l sign` or `single party i k sign` with
    1-based setting/outcome indices and party A|B (or 1|2); blank lines
    and `#` comments are ignored.
    """
    text = Path(path).read_text()
    return parse_functional(text, name=Path(path).stem)


def parse_functional(text: str, name: str = "custom") -> BellFunctional:
    joint, single = [], []
    max_outcome = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if fields[0] == "joint" and len(fields) == 6:
                i, j, k, l, s = (int(x) for x in fields[1:])
                joint.append((i - 1, j - 1, k - 1, l - 1, s))
                max_outcome = max(max_outcome, k, l)
            elif fields[0] == "single" and len(fields) == 5:
                party = {"A": 0, "B": 1, "1": 0, "2": 1}[fields[1]]
                i, k, s = (int(x) for x in fields[2:])
                single.append((party, i - 1, k - 1, s))
                max_outcome = max(max_outcome, k)
            else:
                raise ValueError(f"unrecognized term line {line!r}")
        except (ValueError, KeyError) as exc:
            raise ValueError(f"line {lineno}: cannot parse {line!r}") from exc
    n_outcomes = max(2, max_outcome)
    return BellFunctional(tuple(joint), tuple(single), n_outcomes=n_outcomes, name=name)


def format_functional(f: BellFunctional) -> str:
    """Inverse of parse_functional (1-based indices, party letters)."""
    lines = [f"# functional: {f.name}"]
    for (i, j, k, l, s) in f.joint_terms:
        lines.append(f"joint {i + 1} {j + 1} {k + 1} {l + 1} {s:+d}")
    for (p, i, k, s) in f.single_terms:
        lines.append(f"single {'AB'[p]} {i + 1} {k + 1} {s:+d}")
    return "\n".join(lines) + "\n"
