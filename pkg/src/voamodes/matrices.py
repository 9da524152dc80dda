"""Doubly indexed matrices over the boson algebra and its modules.

The product on matrices with algebra entries, and the left/right module
actions, all share one shape: the (k,l) entry of a product through the
middle index n is the residue of

    T_{k+l+1}((x+1)^(-k+n-l-1)) * (1+x)^l * Y((1+x)^{L(0)} u, x) v

with T the Taylor polynomial in x^-1 of order k+l+1 (so its inner sum
runs to m = n).  The right action replaces the last factor by
Y((1+x)^{-L(0)} v, -x(1+x)^{-1}) w and (1+x)^l by (1+x)^k; it can be
evaluated three ways (directly, through L(0)-conjugation, or through the
right vertex operator), and the three evaluations are kept as separate
code paths so their agreement is a real check.

Matrix entries are exact and uncapped: products routinely pass through
weights above the module truncation bound on their way to a residue, and
nothing is dropped.  The caps are enforced where results are promised to
land (the theta maps, the public mode operations).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .fock import FockIntertwiner, FockModule, right_vertex_op
from .heisenberg import (
    FockVector,
    _add_into,
    conformal_vector,
    expand_pair,
    l_zero,
    sugawara_l,
    vacuum,
    weight_of,
    zero_vector,
)
from .series import LogLaurent, binom_series, gen_binomial, rat

Q = Fraction


class IndexedMatrix:
    """Sparse N x N matrix with entries in one Fock space (fixed charge)."""

    __slots__ = ("charge", "entries")

    def __init__(self, charge, entries=None):
        object.__setattr__(self, "charge", rat(charge))
        cleaned = {}
        if entries:
            for (k, l), vec in entries.items():
                if k < 0 or l < 0:
                    raise ValueError("matrix indices are naturals")
                if vec.charge != self.charge:
                    raise ValueError("entry charge mismatch")
                if not vec.is_zero():
                    cleaned[(int(k), int(l))] = vec
        object.__setattr__(self, "entries", cleaned)

    def __setattr__(self, *a):
        raise AttributeError("IndexedMatrix is immutable")

    @classmethod
    def single(cls, vec: FockVector, k: int, l: int) -> "IndexedMatrix":
        return cls(vec.charge, {(k, l): vec})

    @classmethod
    def zero(cls, charge) -> "IndexedMatrix":
        return cls(charge, {})

    def __add__(self, other: "IndexedMatrix") -> "IndexedMatrix":
        if self.charge != other.charge:
            raise ValueError("charge mismatch")
        out = dict(self.entries)
        for key, vec in other.entries.items():
            out[key] = out[key] + vec if key in out else vec
        return IndexedMatrix(self.charge, out)

    def __sub__(self, other: "IndexedMatrix") -> "IndexedMatrix":
        return self + other.scale(-1)

    def scale(self, s) -> "IndexedMatrix":
        s = rat(s)
        if s == 0:
            return IndexedMatrix(self.charge, {})
        return IndexedMatrix(self.charge,
                             {key: vec.scale(s) for key, vec in self.entries.items()})

    def entry(self, k: int, l: int) -> FockVector:
        return self.entries.get((k, l), zero_vector(self.charge))

    def __eq__(self, other):
        return (isinstance(other, IndexedMatrix)
                and self.charge == other.charge and self.entries == other.entries)

    def __hash__(self):
        return hash((self.charge, frozenset(self.entries.items())))

    def is_zero(self) -> bool:
        return not self.entries

    def __repr__(self):
        body = ", ".join(f"({k},{l}): {v!r}" for (k, l), v in sorted(self.entries.items()))
        return f"IndexedMatrix[{body}]"


# ---------------------------------------------------------------------------
# canonical algebra matrices


def identity_n(n: int) -> IndexedMatrix:
    one = vacuum()
    return IndexedMatrix(0, {(k, k): one for k in range(n + 1)})


def omega0_n(n: int) -> IndexedMatrix:
    w = conformal_vector()
    return IndexedMatrix(0, {(k, k): w for k in range(n + 1)})


def omega1_n(n: int) -> IndexedMatrix:
    w = conformal_vector()
    return IndexedMatrix(0, {(k + 1, k): w for k in range(n)})


# ---------------------------------------------------------------------------
# entry-level residue formulas


def left_entry(v: FockVector, w: FockVector, k: int, n: int, l: int) -> FockVector:
    """Res_x T_{k+l+1}((x+1)^(-k+n-l-1)) (1+x)^l Y((1+x)^{L(0)}v, x) w."""
    if v.charge != 0:
        raise ValueError("left factor must be an algebra vector")
    return _left_entry_cached(v, w, k, n, l)


@lru_cache(maxsize=1 << 18)
def _left_entry_cached(v, w, k, n, l):
    alpha = -k + n - l - 1
    out: dict = {}
    for nu, cv in v.terms.items():
        h = sum(nu)
        for mu, cw in w.terms.items():
            pairs = expand_pair(nu, 0, mu, w.charge, sum(nu) + sum(mu) + k + l)
            for m in range(0, n + 1):
                cm = gen_binomial(alpha, m)
                if cm == 0:
                    continue
                for j in range(0, l + h + 1):
                    cj = gen_binomial(l + h, j)
                    if cj == 0:
                        continue
                    got = pairs.get(k - n + l + m - j)
                    if got:
                        _add_into(out, got, cv * cw * cm * cj)
    return FockVector(w.charge, out)


def _wv_modes(w: FockVector, v: FockVector, t_hi: int) -> dict:
    """{t: vector} modes of Y_W(v, z) w with z-exponent at most t_hi."""
    by_t: dict = {}
    for nu, cv in v.terms.items():
        for mu, cw in w.terms.items():
            base = sum(nu) + sum(mu)
            for t, terms in expand_pair(nu, 0, mu, w.charge, base + t_hi).items():
                vec = FockVector(w.charge, terms).scale(cv * cw)
                by_t[t] = by_t.get(t, zero_vector(w.charge)) + vec
    return {t: vec for t, vec in by_t.items() if not vec.is_zero()}


def _residue_against(stuff: dict, charge, k: int, n: int, l: int) -> FockVector:
    """Res_x T_{k+l+1}((x+1)^(-k+n-l-1)) (1+x)^k * sum_s stuff[s] x^s."""
    alpha = -k + n - l - 1
    out = zero_vector(charge)
    for m in range(0, n + 1):
        cm = gen_binomial(alpha, m)
        if cm == 0:
            continue
        for j in range(0, k + 1):
            cj = gen_binomial(k, j)
            s = -1 - (alpha - m) - j
            vec = stuff.get(s)
            if vec is not None:
                out = out + vec.scale(cm * cj)
    return out


def right_entry_conjugated(w: FockVector, v: FockVector, k: int, n: int,
                           l: int) -> FockVector:
    """Right action entry via (1+x)^{-L(0)} Y_W(v, -x) (1+x)^{L(0)} w.

    Per homogeneous pieces the conjugation collapses to the scalar factor
    (1+x)^(-h - t) on the t-th mode of Y_W(v, -x) w (h = wt v): the
    fractional parts of the two L(0) weights cancel exactly.
    """
    t_hi = k + l
    stuff: dict = {}
    for h in sorted({sum(nu) for nu in v.terms}):
        v_h = FockVector(0, {p: c for p, c in v.terms.items() if sum(p) == h})
        for t, vec in _wv_modes(w, v_h, t_hi).items():
            sign = Q(-1) if t % 2 else Q(1)
            for j in range(0, t_hi - t + 1):
                cj = gen_binomial(-h - t, j)
                if cj == 0:
                    continue
                s = t + j
                cur = stuff.get(s, zero_vector(w.charge))
                stuff[s] = cur + vec.scale(sign * cj)
    return _residue_against(stuff, w.charge, k, n, l)


def right_entry_direct(w: FockVector, v: FockVector, k: int, n: int,
                       l: int) -> FockVector:
    """Right action entry via Y_W((1+x)^{-L(0)} v, -x(1+x)^{-1}) w.

    Substitutes z = -x(1+x)^{-1} into the mode expansion and multiplies
    out the (1+x) powers as honest series products.
    """
    t_hi = k + l
    acc = LogLaurent()
    for h in sorted({sum(nu) for nu in v.terms}):
        v_h = FockVector(0, {p: c for p, c in v.terms.items() if sum(p) == h})
        for t, vec in _wv_modes(w, v_h, t_hi).items():
            # (1+x)^{-h} * z^t = (-1)^t x^t (1+x)^{-t-h}
            sign = Q(-1) if t % 2 else Q(1)
            expanded = binom_series(-t - h, max(0, t_hi - t)).shift(t)
            term = LogLaurent({(Q(0), 0): vec.scale(sign)}).mul_scalar_series(expanded)
            acc = acc + term
    stuff = {}
    for (e, logp), vec in acc.terms.items():
        if logp == 0 and e.denominator == 1:
            stuff[int(e)] = vec
    return _residue_against(stuff, w.charge, k, n, l)


def right_entry_right_op(w: FockVector, v: FockVector, k: int, n: int,
                         l: int) -> FockVector:
    """Right action entry via the right vertex operator:

    Res_x T (1+x)^k (1+x)^{-(L(-1)+L(0))} Y_{WV}((1+x)^{L(0)} w, x) v.
    """
    t_hi = k + l
    charge = w.charge
    scratch = FockModule(charge, level_cap=10 ** 9)
    lowest = -(max(w.levels(), default=0)
               + max((sum(nu) for nu in v.terms), default=0) + 1)
    # (1+x)^{L(0)} w as a series of vectors (rational binomials per level)
    dressed: dict = {}
    for lev in w.levels():
        w_lev = w.level_component(lev)
        hw = scratch.h + lev
        for d in range(0, t_hi - lowest + 1):
            c = gen_binomial(hw, d)
            if c != 0:
                dressed[d] = dressed.get(d, zero_vector(charge)) + w_lev.scale(c)
    # right vertex operator, shifted by the dressing degree
    assembled: dict = {}
    for d, wv in dressed.items():
        ser = right_vertex_op(scratch, wv, v, lowest, t_hi - d)
        for (e, logp), vec in ser.terms.items():
            s = int(e) + d
            if s <= t_hi:
                assembled[s] = assembled.get(s, zero_vector(charge)) + vec
    # (1+x)^{-(L(-1)+L(0))} through the operator binomial
    final: dict = {}
    for s, vec in sorted(assembled.items()):
        cur = vec
        d = 0
        while s + d <= t_hi and not cur.is_zero():
            final[s + d] = final.get(s + d, zero_vector(charge)) + cur
            d += 1
            cur = (sugawara_l(-1, cur) + l_zero(cur)
                   + cur.scale(d - 1)).scale(Q(-1, d))
    return _residue_against(final, charge, k, n, l)


@lru_cache(maxsize=1 << 18)
def _right_entry_cached(w, v, k, n, l, form):
    if form == "conjugated":
        return right_entry_conjugated(w, v, k, n, l)
    if form == "direct":
        return right_entry_direct(w, v, k, n, l)
    return right_entry_right_op(w, v, k, n, l)


def right_entry(w: FockVector, v: FockVector, k: int, n: int, l: int,
                form: str = "conjugated") -> FockVector:
    if form not in ("conjugated", "direct", "right-op"):
        raise ValueError(f"unknown right-action form {form!r}")
    return _right_entry_cached(w, v, k, n, l, form)


# ---------------------------------------------------------------------------
# matrix-level products


def diamond_left(a: IndexedMatrix, b: IndexedMatrix) -> IndexedMatrix:
    """Product/left action: entries of a are algebra vectors."""
    if a.charge != 0:
        raise ValueError("left factor must be a matrix over the algebra")
    out: dict = {}
    for (k, n1), u in a.entries.items():
        for (n2, l), v in b.entries.items():
            if n1 != n2:
                continue
            piece = left_entry(u, v, k, n1, l)
            if not piece.is_zero():
                key = (k, l)
                out[key] = out[key] + piece if key in out else piece
    return IndexedMatrix(b.charge, out)


def diamond_vv(a: IndexedMatrix, b: IndexedMatrix) -> IndexedMatrix:
    return diamond_left(a, b)


def diamond_vw(a: IndexedMatrix, b: IndexedMatrix) -> IndexedMatrix:
    return diamond_left(a, b)


def diamond_wv(a: IndexedMatrix, b: IndexedMatrix,
               form: str = "conjugated") -> IndexedMatrix:
    """Right action: entries of b are algebra vectors."""
    if b.charge != 0:
        raise ValueError("right factor must be a matrix over the algebra")
    out: dict = {}
    for (k, n1), w in a.entries.items():
        for (n2, l), v in b.entries.items():
            if n1 != n2:
                continue
            piece = right_entry(w, v, k, n1, l, form=form)
            if not piece.is_zero():
                key = (k, l)
                out[key] = out[key] + piece if key in out else piece
    return IndexedMatrix(a.charge, out)


# ---------------------------------------------------------------------------
# kernel elements from the Jacobi identity


def jacobi_kernel_element(module: FockModule, k: int, l: int, n: int, p: int,
                          v: FockVector, w: FockVector,
                          form: str = "conjugated") -> IndexedMatrix:
    """The three-sum combination sitting in every evaluation kernel.

    For homogeneous v and p with l+p >= 0:

      sum_j (-1)^j C(p,j) [v]_{k,n+p-j} . [w]_{n+p-j,l+p}
      - sum_j (-1)^(p-j) C(p,j) [w]_{k,q_j} . [v]_{q_j,l+p}    (q_j = l-n+k+p-j >= 0)
      - sum_j C(wt v + n - k - 1, j) [(Y_W)_{p+j}(v) w]_{k,l+p}

    Sums over negative matrix indices are dropped (the guard on the
    second sum, extended to the first).
    """
    if l + p < 0:
        raise ValueError("l + p must be a natural number")
    hv = weight_of(v)
    if hv.denominator != 1:
        raise ValueError("algebra weights are integers")
    hv = int(hv)
    charge = w.charge
    acc = zero_vector(charge)

    j = 0
    while n + p - j >= 0:
        c = gen_binomial(p, j)
        if c != 0:
            sign = Q(-1) if j % 2 else Q(1)
            acc = acc + left_entry(v, w, k, n + p - j, l + p).scale(sign * c)
        j += 1

    j = 0
    while l - n + k + p - j >= 0:
        c = gen_binomial(p, j)
        if c != 0:
            q = l - n + k + p - j
            sign = Q(-1) if (p - j) % 2 else Q(1)
            acc = acc - right_entry(w, v, k, q, l + p, form=form).scale(sign * c)
        j += 1

    top = max(w.levels(), default=0) + hv - 1 - p
    for j in range(0, max(0, top) + 1):
        c = gen_binomial(hv + n - k - 1, j)
        if c == 0:
            continue
        acc = acc - module.mode(v, p + j, w).scale(c)

    return IndexedMatrix.single(acc, k, l + p) if not acc.is_zero() else \
        IndexedMatrix.zero(charge)


# ---------------------------------------------------------------------------
# opposite-algebra map


def opposite_map(mat: IndexedMatrix, sign: str = "plus") -> IndexedMatrix:
    """Transpose indices and send entries v to +-e^{L(1)} (-1)^{L(0)} v.

    The two sign conventions are both exposed; exactly one of them
    satisfies the adjoint pairing identity against the contragredient
    action, and the verification suite calibrates which.
    """
    if mat.charge != 0:
        raise ValueError("the opposite map acts on matrices over the algebra")
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be 'plus' or 'minus'")
    factor = Q(1) if sign == "plus" else Q(-1)
    out: dict = {}
    for (k, l), vec in mat.entries.items():
        acc = zero_vector(0)
        for lev in vec.levels():
            comp = vec.level_component(lev)
            comp = comp.scale(Q(-1) if lev % 2 else Q(1))
            term = comp
            fact = Q(1)
            j = 0
            while not term.is_zero():
                acc = acc + term.scale(fact)
                j += 1
                fact = fact / j
                term = sugawara_l(1, term)
        key = (l, k)
        piece = acc.scale(factor)
        out[key] = out[key] + piece if key in out else piece
    return IndexedMatrix(0, out)


# ---------------------------------------------------------------------------
# probe families


class Probe:
    """One evaluation context: an intertwiner whose source matches the matrices."""

    def __init__(self, intertwiner: FockIntertwiner, max_level: int):
        self.intertwiner = intertwiner
        self.max_level = max_level

    def annihilates(self, mat: IndexedMatrix) -> bool:
        Y = self.intertwiner
        if mat.charge != Y.lam1:
            raise ValueError("probe source charge does not match the matrix")
        for (k, l), vec in mat.entries.items():
            if l > self.max_level or k > Y.level_cap:
                continue
            for w2 in Y.right_input.basis(l):
                if not Y.theta(k, l, vec, w2).is_zero():
                    return False
        return True


class ProbeFamily:
    def __init__(self, probes):
        self.probes = list(probes)
        if not self.probes:
            raise ValueError("a probe family must be non-empty")

    @classmethod
    def modules(cls, charges, level_cap: int, max_level: int) -> "ProbeFamily":
        """Module-action probes for matrices over the algebra."""
        return cls([Probe(FockIntertwiner(0, c, level_cap), max_level)
                    for c in charges])


def probe_equal(a: IndexedMatrix, b: IndexedMatrix, probes: ProbeFamily) -> bool:
    """Equality after evaluation: every probe kills a - b on its basis."""
    diff = a - b
    if diff.is_zero():
        return True
    return all(p.annihilates(diff) for p in probes.probes)
