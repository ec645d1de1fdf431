"""Embedded presentations: O(U(1)), O(SU_q(2)) and its classical limit O(SU(2))."""
from __future__ import annotations

import re

from .ncpoly import Presentation

U1 = """
algebra u1
  order u u^*
  rule u * u^* -> 1
  rule u^* * u -> 1
  relation u * u^* - 1
  relation u^* * u - 1
  delta u = [u, u]
  counit u = 1
  antipode u = u^*
  antipode u^* = u
  coaction right u=1
  coaction left u=1
end
"""

SUQ2 = """
algebra suq2
  order gamma gamma^* alpha alpha^*
  rule alpha * gamma -> q * gamma * alpha
  rule alpha * gamma^* -> q * gamma^* * alpha
  rule alpha^* * gamma -> q^-1 * gamma * alpha^*
  rule alpha^* * gamma^* -> q^-1 * gamma^* * alpha^*
  rule gamma^* * gamma -> gamma * gamma^*
  rule alpha^* * alpha -> 1 - gamma * gamma^*
  rule alpha * alpha^* -> 1 - q^2 * gamma * gamma^*
  relation alpha * gamma - q * gamma * alpha
  relation alpha * gamma^* - q * gamma^* * alpha
  relation gamma * gamma^* - gamma^* * gamma
  relation alpha^* * alpha + gamma^* * gamma - 1
  relation alpha * alpha^* + q^2 * gamma * gamma^* - 1
  # matrix U = [[alpha, -q gamma^*], [gamma, alpha^*]]
  delta alpha = [alpha, alpha] - q * [gamma^*, gamma]
  delta gamma = [gamma, alpha] + [alpha^*, gamma]
  counit alpha = 1
  counit gamma = 0
  antipode gamma = -q * gamma
  antipode gamma^* = -q^-1 * gamma^*
  antipode alpha = alpha^*
  antipode alpha^* = alpha
  coaction right alpha=1 gamma=1
  coaction left alpha=1 gamma=-1
  morphism pi -> u1: alpha = u; gamma = 0
end
"""

SU2 = """
algebra su2
  order c c^* a a^*
  rule a * c -> c * a
  rule a * c^* -> c^* * a
  rule a^* * c -> c * a^*
  rule a^* * c^* -> c^* * a^*
  rule c^* * c -> c * c^*
  rule a^* * a -> 1 - c * c^*
  rule a * a^* -> 1 - c * c^*
  relation a * c - c * a
  relation a * c^* - c^* * a
  relation c * c^* - c^* * c
  relation a^* * a + c^* * c - 1
  relation a * a^* + c * c^* - 1
  delta a = [a, a] - [c^*, c]
  delta c = [c, a] + [a^*, c]
  counit a = 1
  counit c = 0
  antipode c = -c
  antipode c^* = -c^*
  antipode a = a^*
  antipode a^* = a
  coaction right a=1 c=1
  coaction left a=1 c=-1
  morphism pi -> u1: a = u; c = 0
end
"""

PRESETS = {"u1": U1, "suq2": SUQ2, "su2": SU2}

_loaded: dict[str, Presentation] = {}


def load_preset(name: str) -> Presentation:
    """Load an embedded presentation; repeated calls return the same object."""
    hit = _loaded.get(name)
    if hit is not None:
        return hit
    if name not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    from .dsl import loads

    p = loads(PRESETS[name], source=f"<preset {name}>", resolve=_resolve)[name]
    _loaded[name] = p
    return p


def _resolve(name: str):
    return load_preset(name) if name in PRESETS else None


def laurent_algebra(name: str, gen: str) -> Presentation:
    """A fresh Laurent algebra in one unitary generator, graded by its degree."""
    from .dsl import loads

    text = re.sub(r"\bu\b", gen, U1.replace("algebra u1", f"algebra {name}"))
    return loads(text, source=f"<laurent {name}>")[name]
