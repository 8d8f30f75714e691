"""Finitely generated groups with evaluatable generating families.

Three families are supported, all with exact integer arithmetic so the group
law never suffers float drift:

* ``lattice`` -- Z^d, elements are length-d integer tuples;
* ``free``    -- F_k, elements are reduced words stored as tuples of nonzero
  signed letters in {-k..-1, 1..k};
* ``matrix``  -- subgroups of GL_2(Z), elements are 2x2 integer matrices
  stored as flat 4-tuples (a, b, c, d), det = +-1 so inverses stay integral.

A generating family is a *multiset*: repeated generators are kept and their
multiplicity matters for the walk operator and k-fold families.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable

from .errors import PresentationError, CapExceededError

DEFAULT_FAMILY_CAP = 500_000

Element = tuple


def _lattice_mul(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _lattice_inv(a):
    return tuple(-x for x in a)


def _free_mul(a, b):
    a = list(a)
    i = 0
    while a and i < len(b) and a[-1] == -b[i]:
        a.pop()
        i += 1
    return tuple(a) + tuple(b[i:])


def _free_inv(a):
    return tuple(-x for x in reversed(a))


def _mat_mul(a, b):
    a11, a12, a21, a22 = a
    b11, b12, b21, b22 = b
    return (a11 * b11 + a12 * b21, a11 * b12 + a12 * b22,
            a21 * b11 + a22 * b21, a21 * b12 + a22 * b22)


def _mat_inv(a):
    a11, a12, a21, a22 = a
    det = a11 * a22 - a12 * a21
    if det not in (1, -1):
        raise PresentationError(f"matrix {a} is not invertible over Z (det={det})")
    return (a22 // det, -a12 // det, -a21 // det, a11 // det)


_OPS = {
    "lattice": (_lattice_mul, _lattice_inv),
    "free": (_free_mul, _free_inv),
    "matrix": (_mat_mul, _mat_inv),
}


@dataclass(frozen=True)
class GroupPresentation:
    """A group with an evaluatable generating family (a multiset).

    ``generators`` preserves multiplicity and order.  ``element_key`` maps an
    element to the hashable, totally ordered canonical form used for identity
    tests during ball enumeration; the default is the element itself, which is
    exactly injective for the built-in encodings.
    """

    name: str
    family: str
    identity: Element
    generators: tuple
    element_key: Callable[[Element], tuple] = field(repr=False, default=lambda e: e)
    # provenance of derived families: ("kfold", base_presentation, k)
    derived: tuple | None = field(default=None, repr=False, compare=False)

    def mul(self, a, b):
        return _OPS[self.family][0](a, b)

    def inv(self, a):
        return _OPS[self.family][1](a)

    @property
    def d(self) -> int:
        """Family size (with multiplicity); the walk-operator degree."""
        return len(self.generators)

    @property
    def symmetric(self) -> bool:
        """True when the family equals its image under inversion, with multiplicity."""
        from collections import Counter
        fwd = Counter(self.generators)
        bwd = Counter(self.inv(s) for s in self.generators)
        return fwd == bwd

    @property
    def contains_identity(self) -> bool:
        return self.identity in self.generators

    @property
    def geometric_neighbors(self) -> tuple:
        """Distinct non-identity generator values: the simple-graph neighbor offsets."""
        seen = []
        for s in self.generators:
            if s != self.identity and s not in seen:
                seen.append(s)
        return tuple(seen)

    @property
    def geometric_degree(self) -> int:
        return len(self.geometric_neighbors)

    @property
    def generator_pairs(self) -> tuple:
        """One representative per {s, s^-1} pair of geometric neighbors.

        These are the partial-isomorphism maps of the cluster graphing; an
        involution (s = s^-1) contributes one representative.
        """
        reps = []
        seen = set()
        for s in self.geometric_neighbors:
            if s in seen:
                continue
            seen.add(s)
            seen.add(self.inv(s))
            reps.append(s)
        return tuple(reps)

    def is_tree_graph(self) -> bool:
        """True when the geometric Cayley graph is provably acyclic.

        Holds for free groups with single-letter generators (the 2k-regular
        tree or a sub-tree of it) and for Z with unit generators: reduced-word
        and integer encodings admit no relations, so no cycle can close.
        """
        if self.family == "free":
            return all(len(w) <= 1 for w in self.generators)
        if self.family == "lattice" and len(self.identity) == 1:
            return all(abs(g[0]) <= 1 for g in self.generators)
        return False

    def validate(self):
        for s in self.generators:
            self.inv(s)  # raises for non-invertible matrices
        if not self.generators:
            raise PresentationError("empty generating family")


def lattice_presentation(d: int, generators=None, name=None) -> GroupPresentation:
    if d < 1:
        raise PresentationError(f"lattice dimension must be >= 1, got {d}")
    if generators is None:
        gens = []
        for i in range(d):
            e = tuple(1 if j == i else 0 for j in range(d))
            gens.extend([e, _lattice_inv(e)])
        generators = tuple(gens)
    else:
        generators = tuple(tuple(g) for g in generators)
        for g in generators:
            if len(g) != d:
                raise PresentationError(f"generator {g} has dimension != {d}")
    pres = GroupPresentation(name or f"Z^{d}", "lattice", tuple([0] * d), generators)
    pres.validate()
    return pres


def free_presentation(k: int, generators=None, name=None) -> GroupPresentation:
    if k < 1:
        raise PresentationError(f"free rank must be >= 1, got {k}")
    if generators is None:
        generators = tuple((i,) for i in range(1, k + 1)) + tuple((-i,) for i in range(1, k + 1))
    else:
        generators = tuple(tuple(w) for w in generators)
        for w in generators:
            for c in w:
                if not (1 <= abs(c) <= k):
                    raise PresentationError(f"letter {c} outside rank-{k} alphabet in word {w}")
            for a, b in zip(w, w[1:]):
                if a == -b:
                    raise PresentationError(f"word {w} is not reduced")
    pres = GroupPresentation(name or f"F_{k}", "free", (), generators)
    pres.validate()
    return pres


def matrix_presentation(generators, name=None) -> GroupPresentation:
    gens = []
    for g in generators:
        flat = tuple(g[0]) + tuple(g[1]) if len(g) == 2 else tuple(g)
        if len(flat) != 4:
            raise PresentationError(f"matrix generator {g} is not 2x2")
        gens.append(tuple(int(x) for x in flat))
    pres = GroupPresentation(name or "matrix", "matrix", (1, 0, 0, 1), tuple(gens))
    pres.validate()
    return pres


# ---------------------------------------------------------------------------
# text format:  line-oriented "key = value", '#' comments.  Keys: family,
# d (lattice) | k (free), generators (optional), mode (optional), name.
# ---------------------------------------------------------------------------

_PRESENTATION_KEYS = {"family", "d", "k", "generators", "mode", "name"}


def parse_keyvalues(text: str) -> dict:
    """Parse flat ``key = value`` lines; later duplicates override."""
    out = {}
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise PresentationError(f"line {ln}: expected 'key = value', got {raw!r}")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _parse_lattice_generator(tok: str, d: int):
    body = tok.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    parts = [p for p in re.split(r"[,\s]+", body) if p]
    vec = tuple(int(p.replace("−", "-")) for p in parts)
    if len(vec) != d:
        raise PresentationError(f"lattice generator {tok!r} has dimension != {d}")
    return vec


def _parse_free_word(tok: str, k: int):
    """Words in letters a..z with uppercase as inverse; 'e' or '1' is the identity."""
    tok = tok.strip()
    if tok in ("e", "1"):
        return ()
    word = []
    for ch in tok:
        if ch.islower():
            letter = ord(ch) - ord("a") + 1
        elif ch.isupper():
            letter = -(ord(ch) - ord("A") + 1)
        else:
            raise PresentationError(f"bad character {ch!r} in free-group word {tok!r}")
        if abs(letter) > k:
            raise PresentationError(f"letter {ch!r} outside rank-{k} alphabet")
        word.append(letter)
    # reduce adjacent cancellations
    out = []
    for c in word:
        if out and out[-1] == -c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def _parse_matrix_generators(val: str):
    mats = re.findall(r"\[\s*\[[^][]*\]\s*,\s*\[[^][]*\]\s*\]", val)
    if not mats:
        raise PresentationError(f"no matrix generators found in {val!r}")
    out = []
    for m in mats:
        nums = [int(x) for x in re.findall(r"-?\d+", m)]
        if len(nums) != 4:
            raise PresentationError(f"matrix {m!r} does not have 4 integer entries")
        out.append(tuple(nums))
    return out


def parse_presentation(spec_text: str) -> GroupPresentation:
    """Build a presentation from ``key = value`` text.

    Raises PresentationError for unsupported families, empty or malformed
    generator lists, and non-invertible matrix generators.
    """
    kv = parse_keyvalues(spec_text)
    unknown = set(kv) - _PRESENTATION_KEYS
    if unknown:
        raise PresentationError(f"unknown presentation keys: {sorted(unknown)}")
    family = kv.get("family")
    if family not in _OPS:
        raise PresentationError(f"unsupported family {family!r} (expected lattice|free|matrix)")
    name = kv.get("name")

    if family == "lattice":
        if "d" not in kv:
            raise PresentationError("lattice presentation requires 'd ='")
        d = int(kv["d"])
        gens = None
        if "generators" in kv:
            toks = re.findall(r"\([^()]*\)", kv["generators"])
            if not toks:
                raise PresentationError("empty generating family")
            gens = [_parse_lattice_generator(t, d) for t in toks]
        return lattice_presentation(d, gens, name)

    if family == "free":
        if "k" not in kv:
            raise PresentationError("free presentation requires 'k ='")
        k = int(kv["k"])
        gens = None
        if "generators" in kv:
            toks = kv["generators"].split()
            if not toks:
                raise PresentationError("empty generating family")
            gens = [_parse_free_word(t, k) for t in toks]
        return free_presentation(k, gens, name)

    # matrix
    if "generators" not in kv:
        raise PresentationError("matrix presentation requires explicit generators")
    return matrix_presentation(_parse_matrix_generators(kv["generators"]), name)


def kfold_family(pres: GroupPresentation, k: int,
                 family_cap: int = DEFAULT_FAMILY_CAP) -> GroupPresentation:
    """The multiset of all ordered k-products of family members, size |S|^k.

    Multiplicities are preserved; the derived presentation remembers its base
    so the walk engine can compose k base steps instead of convolving the
    (possibly huge) product family directly.
    """
    if k < 1:
        raise PresentationError(f"k-fold exponent must be >= 1, got {k}")
    if k == 1:
        return pres
    size = pres.d ** k
    if size > family_cap:
        raise CapExceededError(f"k-fold family size {pres.d}^{k} = {size} exceeds cap {family_cap}")
    gens = []
    for combo in itertools.product(pres.generators, repeat=k):
        g = pres.identity
        for s in combo:
            g = pres.mul(g, s)
        gens.append(g)
    return GroupPresentation(f"{pres.name}^[{k}]", pres.family, pres.identity,
                             tuple(gens), pres.element_key,
                             derived=("kfold", pres, k))


def lazify(pres: GroupPresentation) -> GroupPresentation:
    """Append one copy of the identity to the family (S union {1})."""
    return GroupPresentation(f"{pres.name}+e", pres.family, pres.identity,
                             pres.generators + (pres.identity,), pres.element_key)
