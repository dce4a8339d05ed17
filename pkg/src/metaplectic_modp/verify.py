"""Verification suites: each checks one family of identities and returns a SuiteResult.

The suites are deterministic for a fixed RunConfig (all sampling goes through
``random.Random`` seeded from the config), and their reports contain no
timings, so two runs with the same config produce identical output.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .arith import FieldElement, PadicField, hilbert_symbol
from .characters import (
    AdditiveCharDescriptor,
    COMPACTS,
    GenuineTorusChar,
    all_unit_characters,
    chi_psi,
    expected_twist,
    lambda_param,
    ps_parameters,
    ps_weights,
    sign_exponent,
    twist_parameters,
    weil_index,
)
from .config import RunConfig
from .cosets import (
    brute_count,
    check_product_rule,
    closed_count,
    coset_reps,
    reps_upto,
)
from .hecke import (
    Section,
    ball_dim,
    basic_sections,
    free_basis,
    hecke_apply,
    hecke_apply_oracle,
    in_span,
    satake_eval,
    satake_expected,
    specialize,
    torus_basic,
    torus_hecke_apply,
)
from .metaplectic import (
    Mat2,
    MetaElem,
    alpha_mat,
    cocycle,
    cocycle_gl2,
    h_mat,
    h_tilde,
    theta,
    theta_prime,
    u_mat,
    ubar_mat,
    w_mat,
)
from .weights import (
    all_weights,
    half_weight,
    is_admissible_pair,
    top_weight,
    weight_dict,
    weight_exponent,
    weight_module,
    zero_weight,
)

MAX_LISTED_FAILURES = 5


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.checks > 0

    def check(self, ok: bool, message) -> None:
        self.checks += 1
        if not ok:
            self.failure_count += 1
            if len(self.failures) < MAX_LISTED_FAILURES:
                self.failures.append(message() if callable(message) else str(message))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": self.failure_count,
            "first_failures": list(self.failures),
            "details": self.details,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.checks} checks, {self.failure_count} failures"


# -- random sampling ----------------------------------------------------------------------------

def random_element(F: PadicField, rng: random.Random, vmin: int = -2, vmax: int = 2,
                   digits: int = 3, allow_zero: bool = False) -> FieldElement:
    if allow_zero and rng.random() < 0.1:
        return F.zero()
    ds = [rng.randrange(1, F.q)] + [rng.randrange(F.q) for _ in range(digits - 1)]
    return F.from_digits(ds, rng.randint(vmin, vmax))


def random_unit(F: PadicField, rng: random.Random) -> FieldElement:
    return random_element(F, rng, 0, 0)


def random_sl2(F: PadicField, rng: random.Random) -> Mat2:
    """A product u(a) ubar(b) h(c) u(d), sometimes times w(1)."""
    g = (u_mat(random_element(F, rng, allow_zero=True)) @ ubar_mat(random_element(F, rng, allow_zero=True))
         @ h_mat(random_element(F, rng)) @ u_mat(random_element(F, rng, allow_zero=True)))
    if rng.random() < 0.3:
        g = g @ w_mat(F.one())
    return g


def random_k(F: PadicField, rng: random.Random) -> Mat2:
    """A random element of SL_2(O_F), biased towards small valuations of the lower-left entry."""
    integral = lambda: random_element(F, rng, 0, 3, allow_zero=True)  # noqa: E731
    k = u_mat(integral()) @ ubar_mat(integral()) @ h_mat(random_unit(F, rng))
    if rng.random() < 0.3:
        k = w_mat(F.one()) @ k
    if rng.random() < 0.5:
        k = k @ ubar_mat(random_element(F, rng, 1, 3))
    return k


def random_k_prime(F: PadicField, rng: random.Random) -> Mat2:
    a = alpha_mat(F)
    return a @ random_k(F, rng) @ a.inverse()


# -- 1. cocycle -----------------------------------------------------------------------------

def cocycle_suite(F: PadicField, rng: random.Random, triples: int = 1000) -> SuiteResult:
    res = SuiteResult("cocycle")
    for _ in range(triples):
        g1, g2, g3 = random_sl2(F, rng), random_sl2(F, rng), random_sl2(F, rng)
        lhs = cocycle(g1, g2) * cocycle(g1 @ g2, g3)
        rhs = cocycle(g2, g3) * cocycle(g1, g2 @ g3)
        res.check(lhs == rhs, lambda: f"2-cocycle identity fails for {g1}, {g2}, {g3}")
        res.check(cocycle(g1, g2) == cocycle_gl2(g1, g2), "GL2 cocycle differs on SL2")
    grid = [F.teichmuller(c) * F.pi_power(v) for c in F.k.units() for v in range(-2, 3)]
    for x in grid:
        for y in grid:
            res.check(cocycle(h_mat(x), h_mat(y)) == hilbert_symbol(x, y),
                      lambda: f"Delta(h({x}), h({y})) != ({x}, {y})")
    res.details = {"triples": triples, "torus_grid": len(grid) ** 2}
    return res


# -- 2. splittings --------------------------------------------------------------------------

def splitting_suite(F: PadicField, rng: random.Random, pairs: int = 1000) -> SuiteResult:
    res = SuiteResult("splitting")
    for _ in range(pairs):
        k1, k2 = random_k(F, rng), random_k(F, rng)
        res.check(theta(k1 @ k2) == theta(k1) * theta(k2) * cocycle(k1, k2),
                  lambda: f"theta not a splitting on {k1}, {k2}")
        c1, c2 = random_k_prime(F, rng), random_k_prime(F, rng)
        res.check(theta_prime(c1 @ c2) == theta_prime(c1) * theta_prime(c2) * cocycle(c1, c2),
                  lambda: f"theta' not a splitting on {c1}, {c2}")
    # a torus element of K and K' on which the two splittings disagree
    nonsq = next(c for c in F.k.units() if not F.k.is_square(c))
    k = h_mat(F.teichmuller(nonsq))
    res.check(theta(k) == 1, "theta(h(x)) != 1 for a nonsquare unit x")
    res.check(theta_prime(k) == -1, "theta'(h(x)) != -1 for a nonsquare unit x")
    res.details = {"pairs": pairs, "discrepancy": {"x_residue": nonsq, "theta": theta(k),
                                                   "theta_prime": theta_prime(k)}}
    return res


# -- 3. Cartan-Iwasawa counts ------------------------------------------------------------------

def coset_suite(F: PadicField, max_n: int = 3, rng: random.Random | None = None,
                sampled_n: int | None = None, samples: int = 2) -> SuiteResult:
    """Exhaustive for n <= max_n; at n = sampled_n only ``samples`` random values of m are enumerated."""
    res = SuiteResult("cosets")
    rows = []
    plan = [(n, list(range(-n, n + 1))) for n in range(max_n + 1)]
    if sampled_n is not None and sampled_n > max_n:
        rng = rng or random.Random(0)
        plan.append((sampled_n, sorted(rng.sample(range(-sampled_n, sampled_n + 1), samples))))
    bound = 2 * max(n for n, _ in plan)
    for n, ms in plan:
        for m in ms:
            for zeta in (1, -1):
                closed = closed_count(F, n, m, zeta)
                up = brute_count(F, n, m, zeta, "upper", max_depth=bound)
                low = brute_count(F, n, m, zeta, "lower", max_depth=bound)
                res.check(up == closed, f"upper count n={n} m={m} zeta={zeta}: {up} != {closed}")
                res.check(low == closed, f"transposed count n={n} m={m} zeta={zeta}: {low} != {closed}")
                rows.append([n, m, zeta, closed])
    for n in range(1, max_n + 1):
        e = F.minus_one_pi()
        total = sum(closed_count(F, n, -n + 1, z) for z in (1, -1))
        res.check(total % F.q == (F.q - 1) % F.q, f"m=-n+1 count not = q-1 mod q at n={n}")
        res.check(closed_count(F, n, n, e ** n) == F.q ** (2 * n), f"m=n count wrong at n={n}")
    res.details = {"max_n": max_n, "sampled": {str(n): ms for n, ms in plan[max_n + 1:]}, "counts": rows}
    return res


# -- 4. products of representatives ----------------------------------------------------------------

def product_suite(F: PadicField, max_n: int = 2) -> SuiteResult:
    res = SuiteResult("products")
    seen: dict[str, int] = {}
    for n in range(1, max_n + 1):
        for a in coset_reps(F, n):
            for b in coset_reps(F, 1):
                rule, ok, msg = check_product_rule(F, a, b)
                seen[rule.case] = seen.get(rule.case, 0) + 1
                res.check(ok, f"case {rule.case}: {a} * {b}: {msg}")
    cases = ["1a", "1b", "1c", "2a", "2b(i)", "2b(ii)", "2b(iii)", "2c(i)", "2c(ii)", "3a", "3b", "3c", "3d"]
    for case in cases:
        # 2b(i) and 2c(i) need a kind-1 label of valuation <= 2n-3, i.e. n >= 2
        if case in ("2b(i)", "2c(i)") and max_n < 2:
            continue
        res.check(seen.get(case, 0) > 0, f"case {case} never exercised")
    res.details = {"max_n": max_n, "cases": {c: seen.get(c, 0) for c in cases}}
    return res


# -- 5. Hecke operators -------------------------------------------------------------------------

def random_section(F: PadicField, r, rng: random.Random, max_n: int = 2, terms: int = 3) -> Section:
    V = weight_module(F, r)
    reps = reps_upto(F, max_n)
    while True:
        s = Section(F, V.r)
        for _ in range(rng.randint(1, terms)):
            rep = reps[rng.randrange(len(reps))]
            vec = [rng.randrange(F.E.size) for _ in range(V.dim)]
            s.add_term(rep, np.array(vec, dtype=np.int64))
        s.normalize()
        if not s.is_zero():
            return s


def hecke_suite(F: PadicField, rng: random.Random, max_n: int = 2, samples: int = 100,
                square_n: int | None = None, weights=None) -> SuiteResult:
    """Closed-form T_1 against the convolution oracle on basics of S_{<= max_n}.

    The identities T_1^2 = T_2 and T^{s,r} T^{r,s} = (T^r)^2 are checked on
    basics of S_{<= square_n} (default max_n); ``weights`` restricts the weights.
    """
    res = SuiteResult("hecke")
    square_n = max_n if square_n is None else square_n
    weights = all_weights(F) if weights is None else weights
    for r in weights:
        for b in basic_sections(F, r, max_n):
            t1 = hecke_apply(F, r, b)
            res.check(t1 == hecke_apply_oracle(F, 1, r, r, b),
                      lambda: f"closed-form T1 != oracle on {b.to_json()} (r={r})")
            if max(rep.n for rep in b.support()) <= square_n:
                res.check(hecke_apply(F, r, t1) == hecke_apply_oracle(F, 2, r, r, b),
                          lambda: f"T1^2 != T2 on {b.to_json()} (r={r})")
    z, top = zero_weight(F), top_weight(F)
    for r, s in ((z, top), (top, z)):
        for b in basic_sections(F, r, square_n):
            lhs = hecke_apply_oracle(F, 1, s, r, hecke_apply_oracle(F, 1, r, s, b))
            rhs = hecke_apply(F, r, hecke_apply(F, r, b))
            res.check(lhs == rhs, lambda: f"T^(s,r) T^(r,s) != (T^r)^2 on {b.to_json()} (r={r}, s={s})")
    growth = 0
    for _ in range(samples):
        r = weights[rng.randrange(len(weights))]
        f = random_section(F, r, rng, max(max_n, 1))
        out = hecke_apply(F, r, f)
        ok = (not out.is_zero()) and out.radius() == f.radius() + 1
        growth += ok
        res.check(ok, lambda: f"support radius did not grow by one for {f.to_json()}")
    inadmissible = [(r, s) for r in all_weights(F) for s in all_weights(F) if not is_admissible_pair(F, r, s)]
    for r, s in inadmissible[:4]:
        b = basic_sections(F, r, 0)[0]
        res.check(hecke_apply_oracle(F, 1, r, s, b).is_zero(), f"nonzero T^({r},{s}) for an inadmissible pair")
    res.details = {"max_n": max_n, "square_n": square_n, "weights": [list(r) for r in weights], "radius_samples": samples,
                   "radius_grew": growth}
    return res


# -- 6. Satake transform ------------------------------------------------------------------------

def satake_suite(F: PadicField, max_n: int = 2) -> SuiteResult:
    res = SuiteResult("satake")
    pairs = [(r, s) for r in all_weights(F) for s in all_weights(F) if is_admissible_pair(F, r, s)]
    cancellations = []
    for n in range(max_n + 1):
        for r, s in pairs:
            for m in range(-n - 1, n + 2):
                exp = satake_expected(F, n, r, s, m)
                brute = satake_eval(F, n, r, s, m, depth=n + abs(m), method="brute")
                counts = satake_eval(F, n, r, s, m, method="counts")
                res.check(brute.value == exp, f"brute S(T_{n}^({r},{s}))(h^{m}) = {brute.value} != {exp}")
                res.check(counts.value == exp, f"counts S(T_{n}^({r},{s}))(h^{m}) = {counts.value} != {exp}")
                if n >= 1 and m == -n + 1 and s == zero_weight(F):
                    half = (F.q - 1) // 2
                    (cp, sp), (cm, sm) = brute.by_sign[1], brute.by_sign[-1]
                    ok = cp == cm == half and sp != 0 and F.E.add(sp, sm) == 0
                    res.check(ok, f"no (q-1)/2 cancellation at n={n}, r={r}: {brute.by_sign}")
                    cancellations.append({"n": n, "r": list(r), "plus": [cp, sp], "minus": [cm, sm]})
    res.details = {"max_n": max_n, "pairs": [[list(r), list(s)] for r, s in pairs],
                   "cancellations": cancellations}
    return res


# -- 7. freeness --------------------------------------------------------------------------------

def freeness_suite(F: PadicField, max_N: int = 3) -> SuiteResult:
    res = SuiteResult("freeness")
    sizes = {}
    for r in all_weights(F):
        for N in range(max_N + 1):
            try:
                B = free_basis(F, r, N)
            except ArithmeticError as exc:  # dependence found
                res.check(False, f"free_basis(r={r}, N={N}) failed: {exc}")
                continue
            dim = weight_module(F, r).dim
            predicted = dim * sum(1 if i == 0 else F.q ** (2 * i) + F.q ** (2 * i - 1) for i in range(N + 1))
            res.check(len(B.elements) == predicted == ball_dim(F, r, N),
                      f"|B_{N}| = {len(B.elements)} != {predicted} (r={r})")
            res.check(B.echelon.rank == predicted, f"B_{N} not of full rank (r={r})")
            sizes[f"{list(r)}:{N}"] = len(B.elements)
        # T(B_N) lies in the span of B_{N+1}
        if max_N >= 1:
            small, big = free_basis(F, r, max_N - 1), free_basis(F, r, max_N)
            for sec in small.sections():
                res.check(in_span(big.echelon, hecke_apply(F, r, sec)), f"T(b) outside span(B_{max_N}) (r={r})")
    res.details = {"max_N": max_N, "sizes": sizes}
    return res


# -- 8. characters ------------------------------------------------------------------------------

def _expected_weights(F: PadicField, mu_r, m: int, compact: str) -> set:
    """The four-case description of principal-series weights."""
    half = (F.q - 1) // 2
    shift = m if compact == "K" else m + 1
    target = (weight_exponent(F, mu_r) + half * shift) % (F.q - 1)
    if target == 0:
        return {zero_weight(F), top_weight(F)}
    hits = {r for r in all_weights(F) if weight_exponent(F, r) % (F.q - 1) == target}
    assert len(hits) == 1
    return hits


def character_suite(F: PadicField, rng: random.Random, pairs: int = 1000) -> SuiteResult:
    res = SuiteResult("characters")
    E = F.E
    for m in (0, 1):
        psi = AdditiveCharDescriptor(F, m)
        for _ in range(pairs // 2):
            a, b = random_element(F, rng, -3, 3), random_element(F, rng, -3, 3)
            lhs = (weil_index(a, psi) + weil_index(b, psi)) % 4
            rhs = (weil_index(a * b, psi) + sign_exponent(hilbert_symbol(a, b))) % 4
            res.check(lhs == rhs, f"Weil index product formula fails at a={a}, b={b}, m={m}")
            c = random_element(F, rng, -2, 2)
            res.check(weil_index(a * c * c, psi) == weil_index(a, psi), "Weil index not a square-class function")
            t = MetaElem(h_mat(a), rng.choice((1, -1)))
            res.check(chi_psi(MetaElem(t.g, -t.zeta), psi) == E.neg(chi_psi(t, psi)), "chi_psi not genuine")
        for u in F.k.units():
            res.check(weil_index(F.teichmuller(u), psi) == sign_exponent(F.legendre(u) ** m),
                      f"gamma(u) != (u,p)^m for unit residue {u}")

    # four cases of the principal-series weights, over the full grid
    grid = 0
    for m in (0, 1, 2, 3):
        psi = AdditiveCharDescriptor(F, m)
        for mu_r in all_unit_characters(F):
            ch = GenuineTorusChar(psi, E.generator(), mu_r)
            for compact in COMPACTS:
                got = {r for r, mult in ps_weights(ch, compact)}
                exp = _expected_weights(F, mu_r, m, compact)
                res.check(got == exp, f"ps_weights({compact}) m={m} mu_r={mu_r}: {sorted(got)} != {sorted(exp)}")
                if len(exp) == 1:
                    (r,) = exp
                    res.check(r not in (zero_weight(F), top_weight(F)), "unique weight is 1- or q-dimensional")
                grid += 1
            # three shapes of the parameter sets
            params = ps_parameters(ch)
            lam = lambda_param(ch)
            trivial = weight_exponent(F, mu_r) % (F.q - 1) == 0
            quad = weight_exponent(F, mu_r) % (F.q - 1) == (F.q - 1) // 2
            ends = {zero_weight(F), top_weight(F)}
            halfw = {half_weight(F)}
            if (m % 2 == 0 and trivial) or (m % 2 == 1 and quad):
                exp_k, exp_kp = ends, halfw
            elif (m % 2 == 0 and quad) or (m % 2 == 1 and trivial):
                exp_k, exp_kp = halfw, ends
            else:
                (r,) = _expected_weights(F, mu_r, m, "K")
                exp_k = {r}
                exp_kp = weight_dict(F, r)
                res.check(r not in ends | halfw, "generic parameter hits a degenerate weight")
            res.check({P.r for P in params["K"]} == exp_k and {P.r for P in params["Kprime"]} == exp_kp,
                      f"ps_parameters m={m} mu_r={mu_r}: {params}")
            res.check(all(P.lam == lam and not P.supersingular for c in COMPACTS for P in params[c]),
                      "parameter lambda differs from lambda_param")
            # psi -> psi_a
            nonsq = F.teichmuller(next(c for c in F.k.units() if not F.k.is_square(c)))
            for a in (F.one(), nonsq, F.uniformizer(), F.uniformizer() * nonsq):
                res.check(twist_parameters(ch, a) == expected_twist(ch, a),
                          f"twist by {a} at m={m} mu_r={mu_r}")
                twisted = lambda_param(GenuineTorusChar(psi.twist(a), ch.mu_pi, mu_r))
                sign = hilbert_symbol(a, F.uniformizer())
                res.check(twisted == E.mul(lam, E.from_int(sign)), "lambda does not scale by (a, p)_F")
                if a == F.one():
                    res.check(twist_parameters(ch, a) == params, "square twist changed the parameters")

    # torus Hecke operators act on a principal series through chi(h~(p))^{-n}
    for mu_r in all_unit_characters(F):
        ch = GenuineTorusChar(AdditiveCharDescriptor(F, 0), E.generator(), mu_r)
        at_pi = ch(h_tilde(F.uniformizer()))
        res.check(at_pi == lambda_param(ch), "lambda differs from chi(h~(p))")
        for n in range(3):
            for r, _ in ps_weights(ch, "K"):
                img = torus_hecke_apply(F, n, r, r, torus_basic(F, r))
                res.check(specialize(F, img, at_pi) == E.pow(at_pi, -n),
                          f"torus eigenvalue wrong at n={n}, r={r}")

    # genuine characters <-> (mu(p), mu|units), exhaustively
    psi = AdditiveCharDescriptor(F, 0)
    tables = set()
    for mu_pi in range(1, E.size):
        for mu_r in all_unit_characters(F):
            tables.add(GenuineTorusChar(psi, mu_pi, mu_r).value_table())
    res.check(len(tables) == (E.size - 1) * (F.q - 1), "genuine characters not in bijection with mu")
    res.details = {"pairs": pairs, "grid": grid, "genuine_characters": len(tables)}
    return res


# -- running everything -------------------------------------------------------------------------

SUITES = ("cocycle", "splitting", "cosets", "products", "hecke", "satake", "freeness", "characters")


def run_suite(name: str, config: RunConfig) -> SuiteResult:
    F = config.field()
    rng = random.Random(f"{config.seed}:{name}")
    depth = config.depth
    if name == "cocycle":
        return cocycle_suite(F, rng)
    if name == "splitting":
        return splitting_suite(F, rng)
    if name == "cosets":
        if F.q <= 3:
            return coset_suite(F, max_n=depth)
        return coset_suite(F, max_n=min(depth, 2), rng=rng, sampled_n=3 if depth >= 3 else None)
    if name == "products":
        return product_suite(F, max_n=min(depth, 2) if F.q <= 3 else 1)
    if name == "hecke":
        if F.q <= 3:
            return hecke_suite(F, rng, max_n=min(depth, 2))
        if F.q <= 5:
            return hecke_suite(F, rng, max_n=1)
        # larger residue fields: spot checks on the extreme weights and one generic weight
        ws = all_weights(F)
        picked = sorted({zero_weight(F), top_weight(F), half_weight(F), ws[rng.randrange(len(ws))]})
        return hecke_suite(F, rng, max_n=1, square_n=0, samples=30, weights=picked)
    if name == "satake":
        return satake_suite(F, max_n=min(depth, 2))
    if name == "freeness":
        return freeness_suite(F, max_N=depth if F.q <= 3 else min(depth, 2))
    if name == "characters":
        return character_suite(F, rng)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")


def run_all(config: RunConfig, names=SUITES) -> list[SuiteResult]:
    return [run_suite(n, config) for n in names]


__all__ = [
    "SuiteResult", "SUITES", "run_suite", "run_all",
    "cocycle_suite", "splitting_suite", "coset_suite", "product_suite", "hecke_suite",
    "satake_suite", "freeness_suite", "character_suite",
    "random_element", "random_unit", "random_sl2", "random_k", "random_k_prime", "random_section",
]
