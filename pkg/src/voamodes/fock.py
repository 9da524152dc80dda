"""Fock modules over the rank-1 boson, their intertwiners, and evaluation maps.

F(q) is the charge-q Fock module with lowest weight q^2/2; its basis at
level n is the set of partitions of n acting on |q>.  All weights of
F(q) live in one congruence class mod Z.  The intertwiner of type
(F(q1+q2); F(q1) F(q2)) is the free-field one, normalized so that
Y(|q1>, x)|q2> = x^(q1 q2)(|q1+q2> + ...); its exponents sit in q1*q2 + Z.

The evaluation maps turn doubly indexed matrices into operators:

    theta(k, l, v, w)      kills w unless level(w) = l, else extracts the
                           residue of x^(l-k-1) Y(x^L(0) v, x) w  -- lands
                           in level k;
    theta of intertwiner   same with the exponent shifted by the lowest
                           weights of source and target.

The contragredient module is realized on the same partition basis via
the pairing with a(n)* = a(-n) and <|q>,|q>> = 1.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .errors import LogOrderExceeded, TruncationOverflow
from .heisenberg import (
    FockVector,
    _add_into,
    _scale_terms,
    expand_pair,
    partitions_of,
    sugawara_l,
    weight_of,
    zero_vector,
)
from .series import LogLaurent, rat, rat_str

Q = Fraction


def pair_mode_terms(nu: tuple, lam1, mu: tuple, lam2, t: int) -> dict:
    """Terms of the x^(lam1*lam2 + t) coefficient of Y(a(-nu)|lam1>, x) a(-mu)|lam2>."""
    level = sum(nu) + sum(mu) + t
    if level < 0:
        return {}
    return expand_pair(nu, lam1, mu, lam2, level).get(t, {})


def fock_norm(partition: tuple) -> Fraction:
    """<a(-p)|q>, a(-p)|q>> for the diagonal free-field pairing."""
    z = 1
    seen: dict = {}
    for part in partition:
        seen[part] = seen.get(part, 0) + 1
    for part, mult in seen.items():
        z *= part ** mult * factorial(mult)
    return Q(z)


class FockModule:
    """The Fock module F(lam): charge lam, lowest weight lam^2/2.

    `level_cap` is the hard truncation bound: operations whose stated
    result would live above it raise TruncationOverflow.
    """

    def __init__(self, lam, level_cap: int = 6):
        self.lam = rat(lam)
        self.level_cap = int(level_cap)
        self.h = self.lam * self.lam / 2
        self.class_tag = self.h - (self.h.__floor__())

    def classes(self):
        """Congruence classes of weights: a single class for a Fock module."""
        return [(self.class_tag, self.h)]

    def highest(self) -> FockVector:
        return FockVector(self.lam, {(): Q(1)})

    def zero(self) -> FockVector:
        return zero_vector(self.lam)

    def basis(self, level: int):
        return [FockVector.basis(self.lam, p) for p in partitions_of(level)]

    def omega0_basis(self, n: int):
        """Basis of Omega_n^0: all levels 0..n."""
        if n > self.level_cap:
            raise TruncationOverflow(f"level {n} above cap {self.level_cap}")
        return [v for m in range(n + 1) for v in self.basis(m)]

    def weight(self, w: FockVector) -> Fraction:
        return weight_of(w)

    # -- module vertex operator modes ---------------------------------------

    def mode(self, v: FockVector, n_index, w: FockVector) -> FockVector:
        """(Y_W)_n(v) w for v in the algebra; zero for non-integer n."""
        if v.charge != 0:
            raise ValueError("module modes take algebra vectors on the left")
        if w.charge != self.lam:
            raise ValueError("vector does not belong to this module")
        n_index = rat(n_index)
        if n_index.denominator != 1:
            return self.zero()
        t = -int(n_index) - 1
        out: dict = {}
        for nu, cv in v.terms.items():
            for mu, cw in w.terms.items():
                level = sum(nu) + sum(mu) + t
                if level < 0:
                    continue
                if level > self.level_cap:
                    raise TruncationOverflow(
                        f"mode result level {level} exceeds cap {self.level_cap}")
                got = pair_mode_terms(nu, 0, mu, self.lam, t)
                if got:
                    _add_into(out, got, cv * cw)
        return FockVector(self.lam, out)

    def l0(self, w: FockVector) -> FockVector:
        out: dict = {}
        h = self.h
        for p, c in w.terms.items():
            out[p] = c * (h + sum(p))
        return FockVector(self.lam, out)

    def lm1(self, w: FockVector) -> FockVector:
        return sugawara_l(-1, w)

    def l1(self, w: FockVector) -> FockVector:
        return sugawara_l(1, w)

    # -- evaluation map of matrices over the algebra ------------------------

    def theta(self, k: int, l: int, v: FockVector, w: FockVector) -> FockVector:
        """Residue map sending [v]_{kl} to an operator: level l -> level k."""
        if k > self.level_cap:
            raise TruncationOverflow(f"target level {k} above cap")
        w_l = w.level_component(l)
        if w_l.is_zero():
            return self.zero()
        out = self.zero()
        for h in sorted({sum(nu) for nu in v.terms}):
            v_h = FockVector(0, {p: c for p, c in v.terms.items() if sum(p) == h})
            out = out + self.mode(v_h, h + l - k - 1, w_l)
        return out

    # -- contragredient module ----------------------------------------------

    def inner(self, a: FockVector, b: FockVector) -> Fraction:
        """Diagonal pairing with a(n)* = a(-n), <|q>,|q>> = 1 (bilinear)."""
        total = Q(0)
        small, large = (a.terms, b.terms) if len(a.terms) <= len(b.terms) else (b.terms, a.terms)
        for p, c in small.items():
            other = large.get(p)
            if other is not None:
                total += c * other * fock_norm(p)
        return total

    def dual_mode(self, v: FockVector, n_index, wprime: FockVector) -> FockVector:
        """Mode of the contragredient vertex operator on W' (same basis).

        Defined by <Y'(v,x)w', w> = <w', Y(e^{xL(1)}(-x^-2)^{L(0)} v, x^-1) w>;
        for homogeneous v of weight h the x^(-n-1) coefficient pairs w'
        against (-1)^h / j! times the (2h-j-n-2)-th mode of L(1)^j v.
        """
        if v.charge != 0:
            raise ValueError("contragredient modes take algebra vectors")
        n_index = rat(n_index)
        if n_index.denominator != 1:
            return self.zero()
        n = int(n_index)
        out = self.zero()
        for h in sorted({sum(nu) for nu in v.terms}):
            v_h = FockVector(0, {p: c for p, c in v.terms.items() if sum(p) == h})
            sign = Q(-1) if h % 2 else Q(1)
            for lev_p in wprime.levels():
                wp = wprime.level_component(lev_p)
                target = lev_p + h - n - 1
                if target < 0:
                    continue
                if target > self.level_cap:
                    raise TruncationOverflow(
                        f"contragredient mode level {target} exceeds cap")
                coords: dict = {}
                u = v_h
                for j in range(0, h + 1):
                    if u.is_zero():
                        break
                    m = 2 * h - j - n - 2
                    cj = sign / factorial(j)
                    for p in partitions_of(target):
                        b = FockVector.basis(self.lam, p)
                        val = self.inner(wp, self.mode(u, m, b))
                        if val != 0:
                            cur = coords.get(p, Q(0)) + cj * val / fock_norm(p)
                            coords[p] = cur
                    u = sugawara_l(1, u)
                out = out + FockVector(self.lam, coords)
        return out

    def theta_dual(self, k: int, l: int, v: FockVector, wprime: FockVector) -> FockVector:
        """The residue map on the contragredient module."""
        if k > self.level_cap:
            raise TruncationOverflow(f"target level {k} above cap")
        wp = wprime.level_component(l)
        if wp.is_zero():
            return self.zero()
        out = self.zero()
        for h in sorted({sum(nu) for nu in v.terms}):
            v_h = FockVector(0, {p: c for p, c in v.terms.items() if sum(p) == h})
            out = out + self.dual_mode(v_h, h + l - k - 1, wp)
        return out

    def __repr__(self):
        return f"FockModule(lam={rat_str(self.lam)}, cap={self.level_cap})"


class FockIntertwiner:
    """Free-field intertwiner of type (F(q1+q2); F(q1) F(q2)).

    Log order is 0: the shipped modules have semisimple L(0), so the
    log-index-k modes vanish for k >= 1.  `scale` multiplies the whole
    operator (the fusion space is one-dimensional; scale 1 pins the
    leading coefficient of Y(|q1>,x)|q2> to 1).
    """

    log_order = 0

    def __init__(self, lam1, lam2, level_cap: int = 6, scale=1):
        self.lam1 = rat(lam1)
        self.lam2 = rat(lam2)
        self.lam3 = self.lam1 + self.lam2
        self.level_cap = int(level_cap)
        self.scale = rat(scale)
        self.source = FockModule(self.lam1, level_cap)
        self.left_input = self.source
        self.right_input = FockModule(self.lam2, level_cap)
        self.target = FockModule(self.lam3, level_cap)
        self.base_exponent = self.lam1 * self.lam2

    def h_shift(self) -> Fraction:
        """h2 - h3: the lowest-weight shift entering the residue exponents."""
        return self.right_input.h - self.target.h

    def mode(self, k: int, m, w1: FockVector, w2: FockVector) -> FockVector:
        """The log-index-k mode Y_{m,k}(w1) w2 (weight wt w1 + wt w2 - m - 1)."""
        if k > self.log_order:
            raise LogOrderExceeded(f"log index {k} > declared order {self.log_order}")
        if k >= 1:
            return self.target.zero()
        m = rat(m)
        t = -m - 1 - self.base_exponent
        if t.denominator != 1:
            return self.target.zero()
        t = int(t)
        out: dict = {}
        for nu, c1 in w1.terms.items():
            for mu, c2 in w2.terms.items():
                level = sum(nu) + sum(mu) + t
                if level < 0:
                    continue
                if level > self.level_cap:
                    raise TruncationOverflow(
                        f"intertwiner mode level {level} exceeds cap {self.level_cap}")
                got = pair_mode_terms(nu, self.lam1, mu, self.lam2, t)
                if got:
                    _add_into(out, got, c1 * c2 * self.scale)
        return FockVector(self.lam3, out)

    def series(self, w1: FockVector, w2: FockVector, lo, hi) -> LogLaurent:
        """Y(w1, x) w2 over the exponent window [lo, hi]."""
        lo = rat(lo)
        hi = rat(hi)
        out: dict = {}
        for nu, c1 in w1.terms.items():
            for mu, c2 in w2.terms.items():
                base = sum(nu) + sum(mu)
                t_hi = (hi - self.base_exponent).__floor__()
                if base + t_hi > self.level_cap:
                    raise TruncationOverflow("series window exceeds the level cap")
                pairs = expand_pair(nu, self.lam1, mu, self.lam2, base + t_hi)
                for t, terms in pairs.items():
                    s = self.base_exponent + t
                    if lo <= s <= hi:
                        key = (s, 0)
                        piece = FockVector(self.lam3,
                                           _scale_terms(terms, c1 * c2 * self.scale))
                        if key in out:
                            out[key] = out[key] + piece
                        else:
                            out[key] = piece
        return LogLaurent(out)

    def theta(self, k: int, l: int, w1: FockVector, w2: FockVector) -> FockVector:
        """Evaluation of [w1]_{kl}: kills w2 off level l, lands in level k.

        Extracts, for each congruence class of the target, the residue of
        x^(h2 - h3 + l - k - 1) Y(x^{L(0)} w1, x) w2 at log-power zero.
        """
        if k > self.level_cap:
            raise TruncationOverflow(f"target level {k} above cap")
        w2_l = w2.level_component(l)
        if w2_l.is_zero():
            return self.target.zero()
        out = self.target.zero()
        h2 = self.right_input.h
        for _tag, h3 in self.target.classes():
            for a in sorted({sum(nu) for nu in w1.terms}):
                w1_a = FockVector(self.lam1,
                                  {p: c for p, c in w1.terms.items() if sum(p) == a})
                wt1 = self.source.h + a
                m = h2 - h3 + l - k + wt1 - 1
                out = out + self.mode(0, m, w1_a, w2_l)
        return out

    def __repr__(self):
        return (f"FockIntertwiner({rat_str(self.lam1)}, {rat_str(self.lam2)}; "
                f"cap={self.level_cap})")


def fock_intertwiner(lam1, lam2, level_cap: int = 6) -> FockIntertwiner:
    return FockIntertwiner(lam1, lam2, level_cap)


def right_vertex_op(module: FockModule, w: FockVector, v: FockVector,
                    lo: int, hi: int) -> LogLaurent:
    """Y(w, x)v on the right: e^{x L(-1)} Y_W(v, -x) w, over [lo, hi]."""
    if w.charge != module.lam or v.charge != 0:
        raise ValueError("right vertex operator takes (module, algebra) vectors")
    # modes of Y_W(v, z) w, z-exponent t
    by_t: dict = {}
    for nu, cv in v.terms.items():
        for mu, cw in w.terms.items():
            base = sum(nu) + sum(mu)
            if base + hi > module.level_cap:
                raise TruncationOverflow("window exceeds the level cap")
            for t, terms in expand_pair(nu, 0, mu, module.lam, base + hi).items():
                piece = FockVector(module.lam, _scale_terms(terms, cv * cw))
                by_t[t] = by_t.get(t, module.zero()) + piece
    out: dict = {}
    for t, vec in sorted(by_t.items()):
        if vec.is_zero():
            continue
        sign = Q(-1) if t % 2 else Q(1)
        cur = vec.scale(sign)
        a = 0
        while t + a <= hi:
            if t + a >= lo and not cur.is_zero():
                key = (Q(t + a), 0)
                out[key] = out.get(key, module.zero()) + cur
            a += 1
            cur = sugawara_l(-1, cur).scale(Q(1, a))
    return LogLaurent(out)
