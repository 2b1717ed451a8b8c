"""Buchberger engine over F_p and QQ with normal forms, dimension, degree,
saturation, elimination, radical membership and ideal intersection.

Pair handling uses the Gebauer-Moeller criteria with sugar-degree selection;
ties break by the pair's lcm in the ambient order, then by insertion index.
All reductions are full (head and tail), so intermediate elements stay small.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush

from .errors import (
    DomainMismatchError,
    GroebnerTimeout,
    PreconditionError,
    StructuralError,
)
from .ring import (
    DEGREVLEX,
    GF,
    MPoly,
    MonomialOrder,
    PolyRing,
    VarUniverse,
    block_order,
)

DEFAULT_TIMEOUT = 600.0


def transport(p: MPoly, ring: PolyRing) -> MPoly:
    """Move a polynomial into another ring, matching variables by name.

    Only variables actually appearing in ``p`` need to exist in the target.
    """
    if p.ring is ring:
        return p
    src = p.universe
    tgt_index = ring.universe.index
    perm: dict = {}
    n = len(ring.universe)
    unpack = p.ring.pack.unpack
    out = {}
    for k, c in p.terms:
        exps = [0] * n
        for i, e in enumerate(unpack(k)):
            if e:
                j = perm.get(i)
                if j is None:
                    nm = src.names[i]
                    j = tgt_index.get(nm)
                    if j is None:
                        raise DomainMismatchError(f"target universe lacks variable {nm!r}")
                    perm[i] = j
                exps[j] = e
        cc = ring.domain.coerce(c)
        if cc:
            out[ring.pack.pack(exps)] = cc
    return ring.from_terms(out)


def over_prime(gens, p: int, order: MonomialOrder | None = None):
    """Map integer/rational generators into F_p (same universe)."""
    gens = list(gens)
    if not gens:
        return gens
    ring = gens[0].ring
    target = PolyRing(ring.universe, GF(p), order or ring.order)
    return [g.convert(target) for g in gens]


def load_ideal_file(path: str, domain, order: MonomialOrder = DEGREVLEX):
    """Read generators from a text file.

    Format: a ``vars: x y z`` header naming the universe, then one
    polynomial per non-comment line in the canonical text form.
    """
    from .ring import poly_from_text

    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("vars:"):
        raise StructuralError("ideal file must start with a 'vars:' header line")
    names = lines[0][5:].split()
    ring = PolyRing(VarUniverse(names), domain, order)
    return [poly_from_text(ln, ring) for ln in lines[1:]]


def save_ideal_file(path: str, gens):
    """Write generators in the canonical text form with a vars header."""
    if not gens:
        raise StructuralError("nothing to write")
    ring = gens[0].ring
    with open(path, "w") as fh:
        fh.write("vars: " + " ".join(ring.universe.names) + "\n")
        for g in gens:
            fh.write(g.text() + "\n")


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis with cached structure."""

    gens: tuple
    ring: PolyRing
    stats: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def order(self) -> MonomialOrder:
        return self.ring.order

    @property
    def lead_ideal(self):
        """Minimal generators of the leading-term ideal, as exponent tuples."""
        got = self._cache.get("lead_ideal")
        if got is None:
            unpack = self.ring.pack.unpack
            got = [unpack(g.lead_key()) for g in self.gens]
            self._cache["lead_ideal"] = got
        return got

    def dimension_report(self):
        """Dimension data, computed once and cached on the basis."""
        got = self._cache.get("dimension")
        if got is None:
            got = ideal_dimension(self)
            self._cache["dimension"] = got
        return got

    def degree(self) -> int:
        """Hilbert-series degree (homogeneous ideals), cached."""
        got = self._cache.get("degree")
        if got is None:
            got = hilbert_degree(self)
            self._cache["degree"] = got
        return got

    def is_unit_ideal(self) -> bool:
        return len(self.gens) == 1 and self.gens[0].is_constant() and bool(self.gens[0])

    def contains(self, f: MPoly) -> bool:
        return normal_form(f, self).is_zero()

    def verify(self) -> bool:
        """Re-check that every S-polynomial of basis pairs reduces to zero."""
        pack = self.ring.pack
        gens = self.gens
        for i in range(len(gens)):
            for j in range(i + 1, len(gens)):
                s = _spoly(gens[i], gens[j], pack)
                if not _reduce_mpoly(s, gens).is_zero():
                    return False
        return True

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)


def _spoly(f: MPoly, g: MPoly, pack) -> MPoly:
    l = pack.lcm(f.lead_key(), g.lead_key())
    uf = pack.quotient(l, f.lead_key())
    ug = pack.quotient(l, g.lead_key())
    ring = f.ring
    off = pack.offset
    dom = ring.domain
    acc = {}
    if dom.kind == "fp":
        p = dom.modulus
        inv_f = dom.inv(f.lead_coeff())
        inv_g = dom.inv(g.lead_coeff())
        for k, c in f.terms:
            acc[k + uf - off] = c * inv_f % p
        for k, c in g.terms:
            kk = k + ug - off
            v = (acc.get(kk, 0) - c * inv_g) % p
            if v:
                acc[kk] = v
            elif kk in acc:
                del acc[kk]
    else:
        inv_f = dom.inv(f.lead_coeff())
        inv_g = dom.inv(g.lead_coeff())
        for k, c in f.terms:
            acc[k + uf - off] = c * inv_f
        for k, c in g.terms:
            kk = k + ug - off
            v = acc.get(kk, 0) - c * inv_g
            if v:
                acc[kk] = v
            elif kk in acc:
                del acc[kk]
    return ring.from_terms(acc)


def _reduce_terms(work: dict, reducers, ring, deadline: float | None = None):
    """Fully reduce a term dict modulo a list of monic reducers.

    ``reducers`` is a list of (lead_key, terms) pairs; returns the normal
    form as a dict.  Specializes the coefficient arithmetic per domain.
    """
    pack = ring.pack
    divides = pack.divides
    off = pack.offset
    dom = ring.domain
    modp = dom.kind == "fp"
    p = dom.modulus if modp else None
    out = {}
    heap = [-k for k in work]
    heapify(heap)
    steps = 0
    while heap:
        steps += 1
        if deadline is not None and steps % 1024 == 0 and time.monotonic() > deadline:
            raise GroebnerTimeout("reduction exceeded the wall-clock budget")
        k = -heappop(heap)
        c = work.pop(k, None)
        if c is None:
            continue
        hit = None
        for lt, terms in reducers:
            if lt <= k and divides(lt, k):
                hit = (lt, terms)
                break
        if hit is None:
            out[k] = c
            continue
        lt, terms = hit
        shift = k - lt
        if modp:
            for kk, cc in terms[1:]:
                k2 = kk + shift
                v = (work.get(k2, 0) - c * cc) % p
                if v:
                    if k2 not in work:
                        heappush(heap, -k2)
                    work[k2] = v
                elif k2 in work:
                    del work[k2]
        else:
            for kk, cc in terms[1:]:
                k2 = kk + shift
                v = work.get(k2, 0) - c * cc
                if v:
                    if k2 not in work:
                        heappush(heap, -k2)
                    work[k2] = v
                elif k2 in work:
                    del work[k2]
    return out


def _reduce_mpoly(f: MPoly, basis) -> MPoly:
    reducers = [(g.lead_key(), g.terms) for g in basis if g]
    res = _reduce_terms(dict(f.terms), reducers, f.ring)
    return f.ring.from_terms(res)


def normal_form(f: MPoly, G: GroebnerBasis) -> MPoly:
    """Unique remainder of f modulo a Groebner basis; zero iff f is in the ideal."""
    if f.ring is not G.ring:
        f = transport(f, G.ring)
    return _reduce_mpoly(f, G.gens)


def buchberger(
    gens,
    order: MonomialOrder | None = None,
    timeout_s: float = DEFAULT_TIMEOUT,
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Deterministic for a fixed input list.  Raises GroebnerTimeout (carrying
    partial statistics) if the wall-clock budget is exhausted.
    """
    gens = [g for g in gens if g is not None]
    if not gens:
        raise StructuralError("empty generator list")
    ring = gens[0].ring
    if order is not None and order != ring.order:
        ring = ring.with_order(order)
        gens = [g.convert(ring) for g in gens]
    if not ring.domain.is_field:
        raise PreconditionError("Groebner bases require a field domain (QQ or F_p)")
    for g in gens:
        if g.ring is not ring:
            raise DomainMismatchError("generators live in different rings")
    pack = ring.pack
    deg = pack.degree
    t0 = time.monotonic()
    deadline = t0 + timeout_s

    basis: list[MPoly] = []
    lts: list[int] = []
    sugars: list[int] = []
    alive: list[bool] = []
    pair_meta: dict = {}  # (i, j) -> (sugar, lcm_key)
    heap: list = []
    seq = 0
    stats = {"pairs": 0, "zero_reductions": 0, "basis_additions": 0}

    def reducers():
        return [(lts[i], basis[i].terms) for i in range(len(basis)) if alive[i]]

    def add_poly(h: MPoly, sugar: int):
        nonlocal seq
        t = len(basis)
        mh = h.lead_key()
        # Gebauer-Moeller update of the pair set
        cand = sorted(
            (i for i in range(t) if alive[i]),
            key=lambda i: (pack.lcm(mh, lts[i]), i),
        )
        lcms = {i: pack.lcm(mh, lts[i]) for i in cand}
        kept: list[int] = []
        for pos, i in enumerate(cand):
            li = lcms[i]
            if pack.gcd_is_one(mh, lts[i]):
                keep = True  # goes to D, dropped later by the product criterion
            else:
                keep = True
                for j in cand[pos + 1 :]:
                    if pack.divides(lcms[j], li):
                        keep = False
                        break
                if keep:
                    for j in kept:
                        if lcms[j] != li and pack.divides(lcms[j], li):
                            keep = False
                            break
            if keep:
                kept.append(i)
        new_pairs = [i for i in kept if not pack.gcd_is_one(mh, lts[i])]
        # filter old pairs through the new leading term
        for (i, j), (s_ij, l_ij) in list(pair_meta.items()):
            if (
                pack.divides(mh, l_ij)
                and pack.lcm(lts[i], mh) != l_ij
                and pack.lcm(mh, lts[j]) != l_ij
            ):
                del pair_meta[(i, j)]
        for i in new_pairs:
            l = lcms[i]
            s = max(sugars[i] + deg(pack.quotient(l, lts[i])), sugar + deg(pack.quotient(l, mh)))
            pair_meta[(i, t)] = (s, l)
            heappush(heap, (s, l, seq, i, t))
            seq += 1
        for i in range(t):
            if alive[i] and pack.divides(mh, lts[i]):
                alive[i] = False
        basis.append(h)
        lts.append(mh)
        sugars.append(sugar)
        alive.append(True)
        stats["basis_additions"] += 1

    # seed with normalized inputs (deduplicated, monic, reduced against earlier ones)
    for g in gens:
        if g.is_zero():
            continue
        red = _reduce_terms(dict(g.terms), reducers(), ring, deadline)
        if not red:
            continue
        h = ring.from_terms(red).monic()
        add_poly(h, h.total_degree())

    while heap:
        if time.monotonic() > deadline:
            stats["wall_ms"] = int((time.monotonic() - t0) * 1000)
            stats["pending_pairs"] = len(pair_meta)
            raise GroebnerTimeout(
                f"Groebner computation exceeded {timeout_s:.0f}s", stats
            )
        s, l, _, i, j = heappop(heap)
        meta = pair_meta.pop((i, j), None)
        if meta is None:
            continue  # pruned by a later update
        stats["pairs"] += 1
        sp = _spoly(basis[i], basis[j], pack)
        try:
            red = _reduce_terms(dict(sp.terms), reducers(), ring, deadline)
        except GroebnerTimeout:
            stats["wall_ms"] = int((time.monotonic() - t0) * 1000)
            stats["pending_pairs"] = len(pair_meta) + 1
            raise GroebnerTimeout(
                f"Groebner computation exceeded {timeout_s:.0f}s", stats
            ) from None
        if not red:
            stats["zero_reductions"] += 1
            continue
        h = ring.from_terms(red).monic()
        add_poly(h, max(s, h.total_degree()))

    final = _interreduce([basis[i] for i in range(len(basis)) if alive[i]], ring)
    stats["wall_ms"] = int((time.monotonic() - t0) * 1000)
    if ring.domain.kind == "rat":
        stats["max_coeff_bits"] = max((g.max_coeff_bits() for g in final), default=0)
    return GroebnerBasis(tuple(final), ring, stats)


def _interreduce(polys, ring):
    """Auto-reduce a set with pairwise non-divisible leading terms."""
    # drop elements whose leading term another one divides
    polys = sorted((p.monic() for p in polys if p), key=lambda p: p.lead_key())
    pack = ring.pack
    minimal: list[MPoly] = []
    for p in polys:
        if not any(pack.divides(q.lead_key(), p.lead_key()) for q in minimal):
            minimal.append(p)
    changed = True
    while changed:
        changed = False
        for idx, p in enumerate(minimal):
            others = [(q.lead_key(), q.terms) for pos, q in enumerate(minimal) if pos != idx]
            red = ring.from_terms(_reduce_terms(dict(p.terms), others, ring))
            if red.terms != p.terms:
                minimal[idx] = red.monic()
                changed = True
    return sorted(minimal, key=lambda p: p.lead_key())


# ---------------------------------------------------------------------------
# dimension, degree


@dataclass(frozen=True)
class DimensionReport:
    dim: int
    codim: int
    degree: int | None
    independent_set: tuple


def ideal_dimension(G: GroebnerBasis) -> DimensionReport:
    """Krull dimension of the quotient via maximal independent variable sets."""
    n = len(G.ring.universe)
    if n > 30:
        raise PreconditionError("independent-set dimension search capped at 30 variables")
    if G.is_unit_ideal():
        # empty scheme: no degree is reported
        return DimensionReport(-1, n + 1, None, ())
    supports = []
    for exps in G.lead_ideal:
        mask = 0
        for i, e in enumerate(exps):
            if e:
                mask |= 1 << i
        supports.append(mask)
    # independent: no leading-term support lies inside the candidate set
    best = 0
    best_mask = 0

    def extend(S: int, idx: int, size: int):
        nonlocal best, best_mask
        if size + (n - idx) <= best:
            return
        if idx == n:
            if size > best:
                best, best_mask = size, S
            return
        bit = 1 << idx
        S2 = S | bit
        if all(m & ~S2 for m in supports):
            extend(S2, idx + 1, size + 1)
        extend(S, idx + 1, size)

    extend(0, 0, 0)
    names = G.ring.universe.names
    ind = tuple(names[i] for i in range(n) if best_mask >> i & 1)
    degree = None
    if best == 0:
        degree = quotient_degree_from_lead(G)
    return DimensionReport(best, n - best, degree, ind)


def quotient_degree(G: GroebnerBasis) -> int:
    """Number of standard monomials; only defined for zero-dimensional ideals."""
    rep = ideal_dimension(G)
    if rep.dim > 0:
        raise StructuralError(f"quotient degree needs dimension 0, got {rep.dim}")
    if G.is_unit_ideal():
        return 0
    return quotient_degree_from_lead(G)


def quotient_degree_from_lead(G: GroebnerBasis, cap: int = 10**6) -> int:
    lead = G.lead_ideal
    n = len(G.ring.universe)
    # pure-power bounds guarantee a finite box
    bounds = [None] * n
    for exps in lead:
        supp = [i for i, e in enumerate(exps) if e]
        if len(supp) == 1:
            i = supp[0]
            b = exps[i]
            if bounds[i] is None or b < bounds[i]:
                bounds[i] = b
    if any(b is None for b in bounds):
        raise StructuralError("leading-term ideal is not zero-dimensional")

    count = 0

    def rec(i: int, current: tuple):
        nonlocal count
        if i == n:
            count += 1
            if count > cap:
                raise StructuralError("standard monomial count exceeds cap")
            return
        for e in range(bounds[i]):
            cand = current + (e,)
            if any(
                all(ge <= ce for ge, ce in zip(g[: i + 1], cand)) and not any(g[i + 1 :])
                for g in lead
            ):
                # a generator supported on the first i+1 variables divides
                break
            rec(i + 1, cand)

    rec(0, ())
    return count


def standard_monomials(G: GroebnerBasis):
    """All monomials outside the leading-term ideal (dimension 0 only)."""
    lead = G.lead_ideal
    n = len(G.ring.universe)
    bounds = []
    for i in range(n):
        b = None
        for exps in lead:
            if exps[i] and all(e == 0 for j, e in enumerate(exps) if j != i):
                if b is None or exps[i] < b:
                    b = exps[i]
        if b is None:
            raise StructuralError("leading-term ideal is not zero-dimensional")
        bounds.append(b)
    out = []

    def divisible(cand):
        return any(all(ge <= ce for ge, ce in zip(g, cand)) for g in lead)

    def rec(i, current):
        if i == n:
            if not divisible(current):
                out.append(current)
            return
        for e in range(bounds[i]):
            rec(i + 1, current + (e,))

    rec(0, ())
    return sorted(out, key=G.ring.pack.pack)


def is_homogeneous_ideal(gens) -> bool:
    return all(g.is_homogeneous() for g in gens)


def hilbert_numerator(G: GroebnerBasis):
    """Coefficients of the numerator N(t) of HS_{R/I} = N(t)/(1-t)^n."""
    gens = [tuple(e) for e in G.lead_ideal]
    memo: dict = {}

    def minimalize(ms):
        ms = sorted(set(ms), key=lambda m: (sum(m), m))
        out = []
        for m in ms:
            if not any(all(o <= e for o, e in zip(g, m)) for g in out):
                out.append(m)
        return tuple(out)

    def poly_mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return out

    def poly_add(a, b, shift=0, sign=1):
        out = list(a) + [0] * max(0, shift + len(b) - len(a))
        for j, y in enumerate(b):
            out[shift + j] += sign * y
        return out

    def num(ms):
        if not ms:
            return [1]
        if any(sum(m) == 0 for m in ms):
            return [0]
        key = ms
        got = memo.get(key)
        if got is not None:
            return got
        supports = [tuple(i for i, e in enumerate(m) if e) for m in ms]
        if all(len(s) == 1 for s in supports):
            # pairwise coprime pure powers: product of (1 - t^deg)
            out = [1]
            for m in ms:
                d = sum(m)
                f = [0] * (d + 1)
                f[0] = 1
                f[d] = -1
                out = poly_mul(out, f)
            memo[key] = out
            return out
        # pivot: the most frequent variable among non-simple generators
        counts: dict = {}
        for s in supports:
            if len(s) > 1:
                for i in s:
                    counts[i] = counts.get(i, 0) + 1
        piv = max(sorted(counts), key=lambda i: counts[i])
        pivot = tuple(1 if i == piv else 0 for i in range(len(ms[0])))
        plus = minimalize(list(ms) + [pivot])
        colon = minimalize(
            tuple(max(e - p, 0) for e, p in zip(m, pivot)) for m in ms
        )
        out = poly_add(num(plus), num(colon), shift=1)
        memo[key] = out
        return out

    return num(minimalize(gens))


def hilbert_degree(G: GroebnerBasis) -> int:
    """Degree of the projective scheme cut out by a homogeneous ideal."""
    if not is_homogeneous_ideal(G.gens):
        raise StructuralError("Hilbert-series degree needs a homogeneous ideal")
    if G.is_unit_ideal():
        raise StructuralError("unit ideal has no degree")
    coeffs = hilbert_numerator(G)
    divisions = 0
    while True:
        if sum(coeffs) != 0:
            break
        # exact division by (1 - t)
        out = [0] * (len(coeffs) - 1)
        acc = 0
        for i in range(len(coeffs) - 1):
            acc += coeffs[i]
            out[i] = acc
        coeffs = out if out else [0]
        divisions += 1
    value = sum(coeffs)
    if value <= 0:
        raise StructuralError("Hilbert numerator degenerate; not a proper ideal?")
    rep = ideal_dimension(G)
    if divisions != rep.codim:
        raise StructuralError(
            f"(1-t)-valuation {divisions} disagrees with codimension {rep.codim}"
        )
    return value


# ---------------------------------------------------------------------------
# elimination, saturation, radical membership, intersection

def _front_ring(ring: PolyRing, count: int = 1) -> PolyRing:
    """Ring with ``count`` fresh elimination variables prepended."""
    taken = set(ring.universe.names)
    fresh = []
    i = 0
    while len(fresh) < count:
        nm = f"t_{i}"
        if nm not in taken:
            fresh.append(nm)
        i += 1
    names = fresh + list(ring.universe.names)
    return PolyRing(VarUniverse(names), ring.domain, block_order(count))


def eliminate(gens, front_vars: int, timeout_s: float = DEFAULT_TIMEOUT):
    """Basis elements free of the first ``front_vars`` variables.

    The generators must already live in a universe whose first ``front_vars``
    variables are the ones to eliminate; a block order is imposed here.
    """
    if not gens:
        return []
    ring = gens[0].ring
    target = ring.with_order(block_order(front_vars))
    G = buchberger([g.convert(target) for g in gens], timeout_s=timeout_s)
    pack = target.pack
    return [g for g in G.gens if pack.front_free(g.lead_key())]


def _strip_aux(polys, ring: PolyRing):
    return [transport(p, ring) for p in polys]


def saturate(
    gens,
    f: MPoly,
    timeout_s: float = DEFAULT_TIMEOUT,
    strategy: str = "auto",
):
    """Generators of I : f^infinity.

    A product of variables is saturated variable by variable.  Single
    variables use the degrevlex divide-through shortcut when the ideal is
    homogeneous ("divide"), else one auxiliary variable t and elimination of
    the Rabinowitsch relation 1 - t*f ("rabinowitsch").
    """
    gens = [g for g in gens if g]
    if not gens:
        return []
    ring = gens[0].ring
    if f.ring is not ring:
        f = transport(f, ring)
    if f.is_zero():
        raise PreconditionError("cannot saturate by zero")
    deadline = time.monotonic() + timeout_s

    def budget():
        return max(deadline - time.monotonic(), 0.001)

    if len(f.terms) == 1:
        exps = f.lead_monomial()
        var_list = [i for i, e in enumerate(exps) if e]
        if var_list:
            current = gens
            for i in var_list:
                current = _saturate_one_var(current, i, budget(), strategy)
                if len(current) == 1 and current[0].is_constant():
                    break
            return list(buchberger(current, timeout_s=budget()).gens)
    return _saturate_general(gens, f, budget())


def _saturate_one_var(gens, var_index: int, timeout_s: float, strategy: str):
    ring = gens[0].ring
    if strategy == "rabinowitsch":
        return _saturate_general(gens, ring.gen(var_index), timeout_s)
    if strategy in ("auto", "divide"):
        if is_homogeneous_ideal(gens):
            return _saturate_divide(gens, var_index, timeout_s)
        if strategy == "divide":
            raise PreconditionError("divide strategy needs a homogeneous ideal")
        return _saturate_general(gens, ring.gen(var_index), timeout_s)
    raise StructuralError(f"unknown saturation strategy {strategy!r}")


def _saturate_divide(gens, var_index: int, timeout_s: float):
    """Saturation by one variable of a homogeneous ideal: compute a degrevlex
    basis with that variable cheapest, then divide out its powers.

    The returned list generates the saturation (it is a basis only with
    respect to the permuted order, so it is NOT interreduced here).
    """
    ring = gens[0].ring
    names = list(ring.universe.names)
    moved = names[var_index]
    perm_names = [nm for nm in names if nm != moved] + [moved]
    work = PolyRing(VarUniverse(perm_names), ring.domain, DEGREVLEX)
    G = buchberger([transport(g, work) for g in gens], timeout_s=timeout_s)
    last = len(perm_names) - 1
    out = []
    for g in G.gens:
        e = min(exp[last] for exp, _ in g.exp_terms())
        if e:
            pack = work.pack
            unpack = pack.unpack
            shifted = {}
            for k, c in g.terms:
                exps = list(unpack(k))
                exps[last] -= e
                shifted[pack.pack(exps)] = c
            g = work.from_terms(shifted)
        out.append(g)
    return [transport(g, ring) for g in out]


def _saturate_general(gens, f: MPoly, timeout_s: float):
    ring = gens[0].ring
    ext = _front_ring(ring)
    t = ext.gen(0)
    moved = [transport(g, ext) for g in gens]
    moved.append(ext.one - t * transport(f, ext))
    elim = eliminate(moved, 1, timeout_s)
    return _interreduce(_strip_aux(elim, ring), ring)


def radical_membership(
    f: MPoly,
    gens,
    timeout_s: float = DEFAULT_TIMEOUT,
    gb: GroebnerBasis | None = None,
) -> bool:
    """Rabinowitsch test: f lies in the radical iff 1 is in I + (1 - t*f)."""
    gens = [g for g in gens if g]
    if f.is_zero():
        return True
    if not gens:
        return False
    ring = gens[0].ring
    if f.ring is not ring:
        f = transport(f, ring)
    if gb is not None:
        # sound shortcut: small-power membership implies radical membership
        power = f
        for _ in range(3):
            if normal_form(power, gb).is_zero():
                return True
            power = power * power
    ext = _front_ring(ring)
    t = ext.gen(0)
    moved = [transport(g, ext) for g in gens]
    moved.append(ext.one - t * transport(f, ext))
    G = buchberger(moved, timeout_s=timeout_s)
    return G.is_unit_ideal()


def ideal_intersection(I, J, timeout_s: float = DEFAULT_TIMEOUT):
    """Generators of the intersection, via t*I + (1-t)*J and elimination."""
    I = [g for g in I if g]
    J = [g for g in J if g]
    if not I:
        return _interreduce(list(J), J[0].ring) if J else []
    if not J:
        return _interreduce(list(I), I[0].ring)
    ring = I[0].ring
    ext = _front_ring(ring)
    t = ext.gen(0)
    one_minus_t = ext.one - t
    moved = [t * transport(g, ext) for g in I]
    moved.extend(one_minus_t * transport(g, ext) for g in J)
    elim = eliminate(moved, 1, timeout_s)
    return _interreduce(_strip_aux(elim, ring), ring)
