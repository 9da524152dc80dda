"""The two-way dictionary between intertwiners and module-map tables.

A map table is the finite data of a module map out of the tensor
product: its values on generators [w1]_{kl} (x) w2 with w2 of level l.
`rho` fills a table from an intertwiner by evaluating theta; the inverse
direction reads the table entries as the zero-log modes of a
reconstructed operator and assembles its series.  Certification checks
the residue-level Jacobi identity and the L(-1)-derivative property of
the reconstruction directly on the table, and the round trip lands back
on the table entry by entry.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import OutOfTable
from .fock import FockIntertwiner, FockModule
from .heisenberg import FockVector, partitions_of, weight_of, zero_vector
from .series import LogLaurent, gen_binomial, rat, rat_str

Q = Fraction


class MapTable:
    """Values of a module map on the generator grid.

    entries[(k, l, nu, mu)] is the image of [a(-nu)|q1>]_{kl} (x) a(-mu)|q2>
    (mu a partition of l), a vector of level k in the target module.
    """

    def __init__(self, lam1, lam2, kmax: int, w1_levels: int, entries: dict,
                 level_cap: int):
        self.lam1 = rat(lam1)
        self.lam2 = rat(lam2)
        self.lam3 = self.lam1 + self.lam2
        self.kmax = int(kmax)
        self.w1_levels = int(w1_levels)
        self.level_cap = int(level_cap)
        self.entries = dict(entries)
        self.source = FockModule(self.lam1, level_cap)
        self.right_input = FockModule(self.lam2, level_cap)
        self.target = FockModule(self.lam3, level_cap)

    # -- construction --------------------------------------------------------

    @classmethod
    def from_intertwiner(cls, Y: FockIntertwiner, kmax: int,
                         w1_levels: int) -> "MapTable":
        entries = {}
        for k in range(kmax + 1):
            for l in range(kmax + 1):
                for a in range(w1_levels + 1):
                    for nu in partitions_of(a):
                        w1 = FockVector.basis(Y.lam1, nu)
                        for mu in partitions_of(l):
                            w2 = FockVector.basis(Y.lam2, mu)
                            val = Y.theta(k, l, w1, w2)
                            if not val.is_zero():
                                entries[(k, l, nu, mu)] = val
        return cls(Y.lam1, Y.lam2, kmax, w1_levels, entries, Y.level_cap)

    def scale(self, s) -> "MapTable":
        s = rat(s)
        return MapTable(self.lam1, self.lam2, self.kmax, self.w1_levels,
                        {key: vec.scale(s) for key, vec in self.entries.items()},
                        self.level_cap)

    def zeros_like(self) -> "MapTable":
        return MapTable(self.lam1, self.lam2, self.kmax, self.w1_levels, {},
                        self.level_cap)

    def add(self, other: "MapTable") -> "MapTable":
        out = dict(self.entries)
        for key, vec in other.entries.items():
            cur = out.get(key)
            merged = vec if cur is None else cur + vec
            if merged.is_zero():
                out.pop(key, None)
            else:
                out[key] = merged
        return MapTable(self.lam1, self.lam2, self.kmax, self.w1_levels, out,
                        self.level_cap)

    def perturbed(self, key, delta: FockVector) -> "MapTable":
        """A copy with one entry shifted; for sensitivity tests."""
        out = dict(self.entries)
        cur = out.get(key, zero_vector(self.lam3))
        out[key] = cur + delta
        return MapTable(self.lam1, self.lam2, self.kmax, self.w1_levels, out,
                        self.level_cap)

    # -- lookup ---------------------------------------------------------------

    def value(self, k: int, l: int, w1: FockVector, w2: FockVector) -> FockVector:
        """Bilinear extension of the stored generators.

        w2 components off level l contribute zero (the generator grid is
        exhaustive in that direction); w1 components above the stored
        level bound are genuinely unknown and raise OutOfTable.
        """
        if not (0 <= k <= self.kmax and 0 <= l <= self.kmax):
            raise OutOfTable(f"indices ({k},{l}) outside the stored grid")
        out = zero_vector(self.lam3)
        w2_l = w2.level_component(l)
        if w2_l.is_zero():
            return out
        for nu, c1 in w1.terms.items():
            if sum(nu) > self.w1_levels:
                raise OutOfTable(
                    f"first-slot level {sum(nu)} beyond stored bound {self.w1_levels}")
            for mu, c2 in w2_l.terms.items():
                vec = self.entries.get((k, l, nu, mu))
                if vec is not None:
                    out = out + vec.scale(c1 * c2)
        return out

    def is_zero(self) -> bool:
        return not self.entries

    def sorted_keys(self):
        return sorted(self.entries)

    def mode_index(self, k: int, l: int, wt1) -> Fraction:
        """The zero-log mode index attached to slot (k, l) and weight wt1."""
        return self.right_input.h - self.target.h + l - k + rat(wt1) - 1

    def __repr__(self):
        return (f"MapTable({rat_str(self.lam1)},{rat_str(self.lam2)}; "
                f"kmax={self.kmax}, {len(self.entries)} entries)")


def rho(Y: FockIntertwiner, kmax: int, w1_levels: int) -> MapTable:
    """The module map induced by an intertwiner, tabulated on generators."""
    return MapTable.from_intertwiner(Y, kmax, w1_levels)


def rho_n(Y: FockIntertwiner, n: int, w1_levels: int | None = None) -> MapTable:
    """Restriction to the (N+1) x (N+1) grid with inputs of level <= N."""
    if w1_levels is None:
        w1_levels = Y.level_cap
    return MapTable.from_intertwiner(Y, n, w1_levels)


# ---------------------------------------------------------------------------
# the reconstructed operator


def yf_zero_mode(f: MapTable, k: int, l: int, w1: FockVector,
                 w2: FockVector) -> FockVector:
    """Table value read as the zero-log mode at index mode_index(k,l,wt w1)."""
    return f.value(k, l, w1, w2)


def yf_series(f: MapTable, w1: FockVector, w2: FockVector,
              lo=None, hi=None) -> LogLaurent:
    """The reconstructed operator's series on w1 (x) w2.

    For semisimple L(0) (log order zero, the shipped case) the series is
    sum_k f([w1]_{kl} (x) w2) x^(h3-h2-l+k-wt w1) over each level l of w2;
    a window [lo, hi] restricts the exponents, defaulting to everything
    the table knows.
    """
    shift = f.target.h - f.right_input.h
    lo = None if lo is None else rat(lo)
    hi = None if hi is None else rat(hi)
    out: dict = {}
    for a in sorted({sum(nu) for nu in w1.terms}):
        w1_a = FockVector(f.lam1, {p: c for p, c in w1.terms.items() if sum(p) == a})
        wt1 = f.source.h + a
        for l in w2.levels():
            w2_l = w2.level_component(l)
            if hi is not None and shift - l + f.kmax - wt1 < hi:
                raise OutOfTable("window extends beyond the stored grid")
            for k in range(f.kmax + 1):
                e = shift - l + k - wt1
                if lo is not None and e < lo:
                    continue
                if hi is not None and e > hi:
                    continue
                val = f.value(k, l, w1_a, w2_l)
                if val.is_zero():
                    continue
                key = (e, 0)
                out[key] = out[key] + val if key in out else val
    return LogLaurent(out)


def log_dress(series: LogLaurent, nilpotent, max_power: int) -> LogLaurent:
    """Apply x^N for a nilpotent operator N: each term picks up log-powers.

    x^N = sum_j N^j (log x)^j / j!; `nilpotent` maps coefficients to
    coefficients and must eventually annihilate.  With the zero operator
    this is the identity, which is the shipped situation; the general
    path exists for gradings with a nilpotent part of L(0).
    """
    from math import factorial

    out: dict = {}
    for (e, logp), coeff in series.terms.items():
        cur = coeff
        j = 0
        while j <= max_power:
            if not _coeff_is_zero(cur):
                key = (e, logp + j)
                piece = _coeff_scale(cur, Q(1, factorial(j)))
                if key in out:
                    out[key] = out[key] + piece
                else:
                    out[key] = piece
            j += 1
            cur = nilpotent(cur)
            if _coeff_is_zero(cur):
                break
    return LogLaurent(out)


def _coeff_is_zero(c) -> bool:
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


def _coeff_scale(c, s: Fraction):
    if isinstance(c, (int, Fraction)):
        return c * s
    return c.scale(s)


# ---------------------------------------------------------------------------
# certification


class CertReport:
    """Outcome of a certification sweep: exact counts plus first failure."""

    def __init__(self, name: str):
        self.name = name
        self.cases = 0
        self.passed = 0
        self.first_failure = None

    def record(self, ok: bool, detail) -> None:
        self.cases += 1
        if ok:
            self.passed += 1
        elif self.first_failure is None:
            self.first_failure = detail() if callable(detail) else detail

    @property
    def ok(self) -> bool:
        return self.cases == self.passed

    def __repr__(self):
        status = "ok" if self.ok else f"FAIL ({self.first_failure})"
        return f"CertReport({self.name}: {self.passed}/{self.cases} {status})"


def certify_jacobi(f: MapTable, v_list, w1_list, kmax: int, p_lo: int,
                   p_hi: int) -> CertReport:
    """Check the coefficient-extracted Jacobi identity on the table.

    For every grid point (k, l, n <= kmax; p in [p_lo, p_hi]; homogeneous v;
    w1 from w1_list; w2 over the level-(l+p) basis):

      sum_j (-1)^j C(p,j) theta3(k, n+p-j, v, f(n+p-j, l+p, w1, w2))
      = sum_j (-1)^(p-j) C(p,j) f(k, q_j, w1, theta2(q_j, l+p, v, w2))
        + sum_j C(wt v + n - k - 1, j) f(k, l+p, (Y)_{p+j}(v) w1, w2)

    with q_j = l-n+k+p-j and all sums index-guarded.
    """
    report = CertReport("jacobi")
    W1, W2, W3 = f.source, f.right_input, f.target
    for v in v_list:
        hv = weight_of(v)
        if hv.denominator != 1:
            raise ValueError("algebra vectors have integer weight")
        hv = int(hv)
        for w1 in w1_list:
            lev1 = w1.level()
            for k in range(kmax + 1):
                for l in range(kmax + 1):
                    for n in range(kmax + 1):
                        for p in range(p_lo, p_hi + 1):
                            if l + p < 0:
                                continue
                            for w2 in W2.basis(l + p):
                                _jacobi_point(report, f, W1, W2, W3, v, hv,
                                              w1, lev1, w2, k, l, n, p)
    return report


def _jacobi_point(report, f, W1, W2, W3, v, hv, w1, lev1, w2, k, l, n, p):
    L = l + p
    lhs = f.target.zero()
    j = 0
    while n + p - j >= 0:
        c = gen_binomial(p, j)
        if c != 0:
            mid = n + p - j
            val = f.value(mid, L, w1, w2)
            sign = Q(-1) if j % 2 else Q(1)
            lhs = lhs + W3.theta(k, mid, v, val).scale(sign * c)
        j += 1
    rhs = f.target.zero()
    j = 0
    while l - n + k + p - j >= 0:
        c = gen_binomial(p, j)
        if c != 0:
            q = l - n + k + p - j
            sign = Q(-1) if (p - j) % 2 else Q(1)
            moved = W2.theta(q, L, v, w2)
            rhs = rhs + f.value(k, q, w1, moved).scale(sign * c)
        j += 1
    top = lev1 + hv - 1 - p
    for j in range(0, max(0, top) + 1):
        c = gen_binomial(hv + n - k - 1, j)
        if c == 0:
            continue
        shifted = W1.mode(v, p + j, w1)
        if not shifted.is_zero():
            rhs = rhs + f.value(k, L, shifted, w2).scale(c)
    ok = lhs == rhs
    report.record(ok, lambda: {
        "point": {"k": k, "l": l, "n": n, "p": p},
        "v": repr(v), "w1": repr(w1), "w2": repr(w2),
        "lhs": repr(lhs), "rhs": repr(rhs)})


def certify_l1_derivative(f: MapTable, w1_list, w2_levels: int) -> CertReport:
    """d/dx of the reconstructed series against the L(-1)-shifted table.

    Per slot k the series coefficient sits at exponent e_k; the identity
    reads e_k * f(k, l, w1, w2) = f(k, l, L(-1) w1, w2) for every k.
    """
    report = CertReport("l1-derivative")
    shift = f.target.h - f.right_input.h
    for w1 in w1_list:
        lev1 = w1.level()
        wt1 = f.source.h + lev1
        lw1 = f.source.lm1(w1)
        for l in range(min(w2_levels, f.kmax) + 1):
            for w2 in f.right_input.basis(l):
                for k in range(f.kmax + 1):
                    e = shift - l + k - wt1
                    lhs = f.value(k, l, w1, w2).scale(e)
                    rhs = f.value(k, l, lw1, w2)
                    ok = lhs == rhs
                    report.record(ok, lambda: {
                        "point": {"k": k, "l": l}, "w1": repr(w1),
                        "w2": repr(w2), "d/dx": repr(lhs), "shifted": repr(rhs)})
    return report


def roundtrip(f: MapTable) -> CertReport:
    """Entry-exact comparison of the table with rho of its reconstruction.

    The evaluation map of the reconstructed operator extracts, per slot,
    the series coefficient at the slot's exponent; the report certifies
    it reproduces every stored entry.
    """
    report = CertReport("roundtrip")
    shift = f.target.h - f.right_input.h
    for key in f.sorted_keys():
        k, l, nu, mu = key
        w1 = FockVector.basis(f.lam1, nu)
        w2 = FockVector.basis(f.lam2, mu)
        wt1 = f.source.h + sum(nu)
        e = shift - l + k - wt1
        ser = yf_series(f, w1, w2)
        got = ser.coeff(e)
        if got is None:
            got = f.target.zero()
        expect = f.entries[key]
        report.record(got == expect, lambda: {
            "entry": {"k": k, "l": l, "w1": list(nu), "w2": list(mu)},
            "reconstructed": repr(got), "stored": repr(expect)})
    return report


# ---------------------------------------------------------------------------
# reachability (generation from the bottom levels)


class _Span:
    """Row space over Q of partition-keyed vectors, per level."""

    def __init__(self):
        self.rows: dict = {}

    def add(self, vec: FockVector) -> bool:
        terms = dict(vec.terms)
        for pivot, row in self.rows.items():
            c = terms.get(pivot)
            if c:
                for p, rc in row.items():
                    cur = terms.get(p, Q(0)) - c * rc
                    if cur == 0:
                        terms.pop(p, None)
                    else:
                        terms[p] = cur
        if not terms:
            return False
        pivot = min(terms)
        lead = terms[pivot]
        self.rows[pivot] = {p: c / lead for p, c in terms.items()}
        return True

    def dim(self) -> int:
        return len(self.rows)


def reachability_closure(module: FockModule, n: int, generators,
                         dual: bool = False) -> CertReport:
    """Check the bottom levels generate everything below the cap.

    Starting from the levels 0..n, repeatedly applies the evaluation maps
    of single-entry matrices over the given algebra vectors and verifies
    the span reaches the full basis of every level up to the module cap.
    """
    report = CertReport("reachability")
    cap = module.level_cap
    theta = module.theta_dual if dual else module.theta
    spans = {lev: _Span() for lev in range(cap + 1)}
    frontier = []
    for lev in range(min(n, cap) + 1):
        for b in module.basis(lev):
            if spans[lev].add(b):
                frontier.append(b)
    while frontier:
        new_frontier = []
        for w in frontier:
            l = w.level()
            for v in generators:
                hv = int(weight_of(v))
                for k in range(cap + 1):
                    image = theta(k, l, v, w)
                    if image.is_zero():
                        continue
                    if spans[k].add(image):
                        new_frontier.append(image)
        frontier = new_frontier
    for lev in range(cap + 1):
        want = len(partitions_of(lev))
        got = spans[lev].dim()
        report.record(got == want, lambda: {
            "level": lev, "reached": got, "basis": want})
    return report
