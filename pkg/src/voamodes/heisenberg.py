"""Rank-1 free boson: oscillator algebra, Fock vectors, vertex-operator engine.

States are finite rational combinations of partition basis vectors
a(-n_1)...a(-n_r)|q> over a charge q, with the oscillator relations
[a(m), a(n)] = m delta_{m+n,0} and a(0)|q> = q|q>.  The vertex-operator
engine expands

    Y(a(-n_1)...a(-n_r)|q1>, x) w
      = :d^(n_1-1)a(x)/(n_1-1)! ... d^(n_r-1)a(x)/(n_r-1)!
         E-(q1,x) E+(q1,x) S_{q1} x^{q1 a(0)}: w

with E-+(q,x) the usual exponentials of creation/annihilation halves of
the current and S_q the charge shift.  Normal ordering puts every
annihilation or zero mode to the right of every creation mode; the zero
modes (including x^{q1 a(0)}) act before the charge shift, so they read
the charge of w.  All arithmetic is exact.

The algebra of the conformal vector w = (1/2)a(-1)^2 |0> acts through
the same engine; the Sugawara forms of L(0), L(+-1) are provided
directly as fast paths and are cross-checked against the engine in the
test suite.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import NonHomogeneous, TruncationOverflow
from .series import LogLaurent, gen_binomial, rat, rat_str

Q = Fraction

EMPTY = ()


# ---------------------------------------------------------------------------
# partitions


def normalize_partition(parts) -> tuple:
    if isinstance(parts, tuple) and all(
            parts[i] >= parts[i + 1] for i in range(len(parts) - 1)):
        out = parts
    else:
        out = tuple(sorted((int(p) for p in parts), reverse=True))
    if out and out[-1] <= 0:
        raise ValueError("partition parts must be positive")
    return out


def partitions_of(n: int):
    """All partitions of n as non-increasing tuples, lexicographically sorted."""

    def gen(total, largest):
        if total == 0:
            yield EMPTY
            return
        for first in range(min(total, largest), 0, -1):
            for rest in gen(total - first, first):
                yield (first,) + rest

    return sorted(gen(n, n))


def _insert_part(p: tuple, d: int) -> tuple:
    for i, q in enumerate(p):
        if d >= q:
            return p[:i] + (d,) + p[i:]
    return p + (d,)


# ---------------------------------------------------------------------------
# raw oscillator actions on {partition: coeff} dicts


def _acc(target: dict, key, coeff) -> None:
    cur = target.get(key)
    if cur is None:
        target[key] = coeff
    else:
        cur = cur + coeff
        if cur == 0:
            del target[key]
        else:
            target[key] = cur


def apply_creator(d: int, terms: dict) -> dict:
    return {_insert_part(p, d): c for p, c in terms.items()}


def apply_annihilator(k: int, terms: dict) -> dict:
    out = {}
    for p, c in terms.items():
        mult = p.count(k)
        if mult:
            q = list(p)
            q.remove(k)
            _acc(out, tuple(q), c * k * mult)
    return out


def _scale_terms(terms: dict, s: Fraction) -> dict:
    if s == 0:
        return {}
    return {p: c * s for p, c in terms.items()}


def _add_into(target: dict, terms: dict, s: Fraction = Q(1)) -> None:
    if s == 0:
        return
    for p, c in terms.items():
        _acc(target, p, c * s)


def _max_part(terms: dict) -> int:
    return max((p[0] for p in terms if p), default=0)


# ---------------------------------------------------------------------------
# the vertex-operator engine

_EXPAND_CACHE: dict = {}


def _apply_exp_annihilation(states: dict, lam1: Fraction, top: int) -> dict:
    """exp(-lam1 sum_{n>0} a(n) x^-n / n) on {xoffset: terms}."""
    for n in range(1, top + 1):
        out = {}
        for t, terms in states.items():
            j = 0
            factor = Q(1)
            cur = terms
            while cur:
                _add_into(out.setdefault(t - n * j, {}), cur, factor)
                j += 1
                factor = factor * (-lam1) / (n * j)
                cur = apply_annihilator(n, cur)
        states = {t: v for t, v in out.items() if v}
    return states


_DRESSING_CACHE: dict = {}


def _creation_dressing(pending: tuple, lam1: Fraction, budget: int) -> dict:
    """{(xoffset, inserted partition): coeff} for the creation stage.

    The creation halves of the pending currents and the creation
    exponential only ever insert parts, with coefficients independent of
    what they act on; the whole stage collapses to this finite table
    (insertions bounded by `budget`).
    """
    key = (pending, lam1, budget)
    got = _DRESSING_CACHE.get(key)
    if got is not None:
        return got
    dressing = {(0, EMPTY): Q(1)}
    for ni in pending:
        nxt: dict = {}
        for (t, ins), c in dressing.items():
            room = budget - sum(ins)
            for d in range(ni, room + 1):
                cd = gen_binomial(d - 1, ni - 1)
                if cd != 0:
                    _acc(nxt, (t + d - ni, _insert_part(ins, d)), c * cd)
        dressing = nxt
    if lam1 != 0:
        for n in range(1, budget + 1):
            nxt = {}
            for (t, ins), c in dressing.items():
                j = 0
                factor = Q(1)
                cur = ins
                while sum(cur) <= budget:
                    _acc(nxt, (t + n * j, cur), c * factor)
                    j += 1
                    factor = factor * lam1 / (n * j)
                    cur = _insert_part(cur, n)
            dressing = nxt
    _DRESSING_CACHE[key] = dressing
    return dressing


def _merge_parts(p: tuple, ins: tuple) -> tuple:
    if not ins:
        return p
    if not p:
        return ins
    return tuple(sorted(p + ins, reverse=True))


def _expand_basis_pair(nu: tuple, lam1: Fraction, mu: tuple, lam2: Fraction,
                       max_level: int) -> dict:
    """Coefficients {t: terms} of x^(lam1*lam2 + t) in Y(a(-nu)|lam1>, x) a(-mu)|lam2>.

    Output terms live at charge lam1 + lam2; every t with
    0 <= sum(nu) + sum(mu) + t <= max_level is present (possibly zero and
    then absent).
    """
    r = len(nu)
    start = {0: {mu: Q(1)}}
    if lam1 != 0:
        start = _apply_exp_annihilation(start, lam1, sum(mu))

    # annihilation stage per subset of currents, grouped by what remains
    # for the creation stage
    by_pending: dict = {}
    for take in range(r + 1):
        for right in combinations(range(r), take):
            right_set = set(right)
            states = start
            for i in right:
                ni = nu[i]
                nxt: dict = {}
                for t, terms in states.items():
                    if lam2 != 0:
                        c0 = lam2 * gen_binomial(-1, ni - 1)
                        _add_into(nxt.setdefault(t - ni, {}), terms, c0)
                    for k in range(1, _max_part(terms) + 1):
                        hit = apply_annihilator(k, terms)
                        if hit:
                            _add_into(nxt.setdefault(t - k - ni, {}), hit,
                                      gen_binomial(-k - 1, ni - 1))
                states = {t: v for t, v in nxt.items() if v}
                if not states:
                    break
            if not states:
                continue
            pending = tuple(sorted((nu[i] for i in range(r)
                                    if i not in right_set), reverse=True))
            bucket = by_pending.setdefault(pending, {})
            for t, terms in states.items():
                _add_into(bucket.setdefault(t, {}), terms)

    # creation stage once per distinct pending multiset
    out: dict = {}
    for pending, states in by_pending.items():
        dressing = _creation_dressing(pending, lam1, max_level)
        for t, terms in states.items():
            for p, c in terms.items():
                room = max_level - sum(p)
                for (dt, ins), dc in dressing.items():
                    if sum(ins) <= room:
                        _acc(out.setdefault(t + dt, {}), _merge_parts(p, ins),
                             c * dc)

    return {t: v for t, v in out.items() if v}


def expand_pair(nu: tuple, lam1, mu: tuple, lam2, max_level: int) -> dict:
    """Cached engine expansion; see _expand_basis_pair.

    Cache entries are computed at a quantized level ceiling so runs of
    nearby requests share one expansion.
    """
    lam1 = rat(lam1)
    lam2 = rat(lam2)
    key = (nu, lam1, mu, lam2)
    cached = _EXPAND_CACHE.get(key)
    if cached is None or cached[0] < max_level:
        ceiling = max(8, -(-max_level // 8) * 8)
        cached = (ceiling, _expand_basis_pair(nu, lam1, mu, lam2, ceiling))
        _EXPAND_CACHE[key] = cached
    base = sum(nu) + sum(mu)
    top = max_level - base
    return {t: terms for t, terms in cached[1].items() if t <= top}


# ---------------------------------------------------------------------------
# Fock vectors


class FockVector:
    """Finite rational combination of partition basis vectors over one charge."""

    __slots__ = ("charge", "terms", "_hash")

    def __init__(self, charge, terms=None):
        object.__setattr__(self, "charge", rat(charge))
        cleaned = {}
        if terms:
            for p, c in terms.items():
                c = rat(c)
                if c != 0:
                    cleaned[normalize_partition(p)] = c
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *a):
        raise AttributeError("FockVector is immutable")

    @classmethod
    def basis(cls, charge, partition) -> "FockVector":
        return cls(charge, {tuple(partition): Q(1)})

    def __add__(self, other: "FockVector") -> "FockVector":
        if self.charge != other.charge:
            raise ValueError("cannot add vectors of different charge")
        out = dict(self.terms)
        for p, c in other.terms.items():
            _acc(out, p, c)
        return FockVector(self.charge, out)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + other.scale(-1)

    def scale(self, s) -> "FockVector":
        return FockVector(self.charge, _scale_terms(self.terms, rat(s)))

    def __eq__(self, other):
        return (isinstance(other, FockVector)
                and self.charge == other.charge and self.terms == other.terms)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.charge, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def is_zero(self) -> bool:
        return not self.terms

    def levels(self):
        return sorted({sum(p) for p in self.terms})

    def level_component(self, n: int) -> "FockVector":
        return FockVector(self.charge,
                          {p: c for p, c in self.terms.items() if sum(p) == n})

    def level(self) -> int:
        """Level of a homogeneous vector (0 for the zero vector)."""
        levels = self.levels()
        if not levels:
            return 0
        if len(levels) > 1:
            raise NonHomogeneous(f"mixed levels {levels}")
        return levels[0]

    def __repr__(self):
        if not self.terms:
            return f"FockVector({rat_str(self.charge)}; 0)"
        bits = [f"{rat_str(c)}*a{list(p)}" for p, c in sorted(self.terms.items())]
        return f"FockVector({rat_str(self.charge)}; " + " + ".join(bits) + ")"


def zero_vector(charge) -> FockVector:
    return FockVector(charge, {})


# ---------------------------------------------------------------------------
# Sugawara fast paths (charge-aware); engine agreement is covered by tests


def sugawara_l(m: int, vec: FockVector) -> FockVector:
    """L(m) = (1/2) sum_j :a(-j)a(j+m):  acting on a Fock vector."""
    out: dict = {}
    lam = vec.charge

    def apply(mode: int, terms: dict) -> dict:
        if mode > 0:
            return apply_annihilator(mode, terms)
        if mode == 0:
            return _scale_terms(terms, lam)
        return apply_creator(-mode, terms)

    top = _max_part(vec.terms) + abs(m) + 1
    for j in range(-top, top + 1):
        a, b = -j, j + m
        if a < b:
            a, b = b, a
        # normal order: the annihilation-side mode a acts first; each
        # unordered pair occurs for two values of j (one when a == b),
        # so the uniform 1/2 yields the right multiplicity
        cur = apply(a, vec.terms)
        if not cur:
            continue
        cur = apply(b, cur)
        _add_into(out, cur, Q(1, 2))
    return FockVector(vec.charge, out)


def l_zero(vec: FockVector) -> FockVector:
    out: dict = {}
    h0 = vec.charge * vec.charge / 2
    for p, c in vec.terms.items():
        _acc(out, p, c * (h0 + sum(p)))
    return FockVector(vec.charge, out)


def weight_of(vec: FockVector) -> Fraction:
    """Conformal weight of a homogeneous vector: charge^2/2 + level."""
    return vec.charge * vec.charge / 2 + vec.level()


# ---------------------------------------------------------------------------
# the vertex operator algebra proper


def vacuum() -> FockVector:
    return FockVector(0, {EMPTY: Q(1)})


def conformal_vector() -> FockVector:
    return FockVector(0, {(1, 1): Q(1, 2)})


class Heisenberg:
    """The rank-1 Heisenberg vertex operator algebra, central charge 1.

    `weight_cap` bounds the weights the public operations may produce;
    exceeding it raises TruncationOverflow rather than truncating.
    """

    def __init__(self, weight_cap: int = 6):
        if weight_cap < 4:
            raise ValueError("weight_cap must be at least 4")
        self.weight_cap = weight_cap

    def basis(self, weight: int):
        return [FockVector.basis(0, p) for p in partitions_of(weight)]

    def basis_upto(self, weight: int):
        return [v for n in range(weight + 1) for v in self.basis(n)]

    def mode(self, v: FockVector, n: int, u: FockVector) -> FockVector:
        """(Y_V)_n(v) u, the x^(-n-1) coefficient of Y_V(v, x)u.

        Components of negative weight vanish identically (V is lower
        bounded); components above the cap are an error.
        """
        if v.charge != 0 or u.charge != 0:
            raise ValueError("algebra modes act on charge-0 vectors")
        out: dict = {}
        t = -n - 1
        for nu, cv in v.terms.items():
            for mu, cu in u.terms.items():
                lev = sum(nu) + sum(mu) + t
                if lev < 0:
                    continue
                if lev > self.weight_cap:
                    raise TruncationOverflow(
                        f"mode result weight {lev} exceeds cap {self.weight_cap}")
                got = expand_pair(nu, 0, mu, 0, lev).get(t)
                if got:
                    _add_into(out, got, cv * cu)
        return FockVector(0, out)

    def weight(self, v: FockVector) -> Fraction:
        return weight_of(v)

    def l0(self, v: FockVector) -> FockVector:
        return self.mode(conformal_vector(), 1, v)

    def l1(self, v: FockVector) -> FockVector:
        return self.mode(conformal_vector(), 2, v)

    def lm1(self, v: FockVector) -> FockVector:
        return self.mode(conformal_vector(), 0, v)

    def vertex_series(self, v: FockVector, u: FockVector, lo: int,
                      hi: int) -> LogLaurent:
        """Y_V(v, x)u over the integer exponent window [lo, hi]."""
        for nu in v.terms:
            for mu in u.terms:
                if sum(nu) + sum(mu) + hi > self.weight_cap:
                    raise TruncationOverflow(
                        "series window exceeds the weight cap")
        out: dict = {}
        for nu, cv in v.terms.items():
            for mu, cu in u.terms.items():
                pairs = expand_pair(nu, 0, mu, 0, sum(nu) + sum(mu) + hi)
                for t, terms in pairs.items():
                    if lo <= t <= hi:
                        key = (Q(t), 0)
                        piece = FockVector(0, _scale_terms(terms, cv * cu))
                        if key in out:
                            out[key] = out[key] + piece
                        else:
                            out[key] = piece
        return LogLaurent(out)
