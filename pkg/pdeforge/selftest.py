# Bundled acceptance checks, run by `pdeforge selftest`.
import concurrent.futures
import json
import logging
import os
import random
import time
from dataclasses import dataclass, field
from datetime import datetime
from math import factorial

import numpy as np

from pdeforge import boolean, circuit, matrixalg, orbits, symmetric
from pdeforge.config import get_settings, worker_count
from pdeforge.messages import get_text
from pdeforge.mlpoly import GeneralPoly, MLPoly, evaluate_indicator
from pdeforge.ring import GF2, QQ

SUITES = ("quick", "full")


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def to_json(self):
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "seconds": round(self.seconds, 3)}


@dataclass
class SelfTestReport:
    suite: str
    seed: int
    results: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def to_json(self):
        return {"suite": self.suite, "seed": self.seed, "passed": self.passed,
                "checks": [r.to_json() for r in self.results]}


# Checks. Each takes (full, seed) and returns (passed, detail).

def check_worked_example(full, seed):
    table = boolean.TruthTable(2, (1, 1, 0, 1))
    p = boolean.interpolate_sumproduct(table)
    expected = MLPoly(2, QQ, {0: 1, 1: 1, 3: 1})
    rows = [boolean.pde_evaluate(p, T, 1) for T in range(4)]
    return p == expected and rows == list(table.bits), f"P = {p!r}; rows {rows}"


def check_binary_interpolation(full, seed):
    n = 3 if full else 2
    bad = []
    for bits in range(1 << (1 << n)):
        table = _table(n, bits)
        if boolean.lagrange_binary(table) != boolean.lagrange_sumproduct(table, GF2):
            bad.append(bits)
        elif boolean.interpolate_binary(table) != boolean.interpolate_sumproduct(table, GF2):
            bad.append(bits)
    return not bad, f"{1 << (1 << n)} tables on {n} inputs, {len(bad)} disagreements"


def _table(n, bits):
    return boolean.TruthTable(n, tuple((bits >> b) & 1 for b in range(1 << n)))


def check_boole_correspondence(full, seed):
    depth = 3 if full else 2
    formulas = boolean.enumerate_formulas(3, depth, distinct_children=True)
    bad = 0
    for f in formulas:
        p = boolean.boole_encode(f, 3)
        if any(evaluate_indicator(p, mask) != int(f.evaluate(mask)) for mask in range(8)):
            bad += 1
    return bad == 0, f"{len(formulas)} formulas of depth <= {depth}, {bad} disagreements"


def check_product_counts(full, seed):
    rng = random.Random(seed)
    top = 12 if full else 8
    checked = 0
    for N in range(1, top + 1):
        masks = range(1 << N) if N <= 6 else [rng.randrange(1 << N) for _ in range(8)]
        for S in masks:
            sub = circuit.expand(circuit.subset_product(S, N))
            sup = circuit.expand(circuit.superset_product(S, N))
            if sub.term_count() != 1 << S.bit_count() or sup.term_count() != 1 << (N - S.bit_count()):
                return False, f"wrong term count at N={N}, S={S}"
            if any(not c.is_one() for _, c in sub.terms()) or any(not c.is_one() for _, c in sup.terms()):
                return False, f"non-unit coefficient at N={N}, S={S}"
            checked += 1
    return True, f"{checked} subset/superset products"


def check_cardinality(full, seed):
    top, expand_top = (12, 8) if full else (8, 5)
    for N in range(1, top + 1):
        for kind in ("le", "ge", "eq"):
            for s in range(N + 1):
                q = symmetric.cardinality_pdp(kind, s, N)
                if not boolean.verify_pde(q, boolean.cardinality_table(kind, s, N)).passed:
                    return False, f"threshold mismatch for {kind} s={s} N={N}"
                if N <= expand_top and q.to_mlpoly() != q.expand_monomial_basis():
                    return False, f"expansion mismatch for {kind} s={s} N={N}"
    for N in range(expand_top + 1):
        for t in range(N + 1):
            if symmetric.e_to_binomial(t, N).expand_monomial_basis() != symmetric.elementary_symmetric(N, t):
                return False, f"e_t congruence fails at t={t} N={N}"
    return True, f"thresholds up to N={top}, expansions up to N={expand_top}"


def check_newton(full, seed):
    top = 6 if full else 4
    for N in range(1, top + 1):
        for t in range(1, N + 1):
            expected = GeneralPoly.from_mlpoly(symmetric.elementary_symmetric(N, t), cap=t)
            if symmetric.newton_substitute(t, N) != expected:
                return False, f"Newton identity fails at t={t} N={N}"
    return True, f"t <= N <= {top}"


def check_determinants(full, seed):
    rng = np.random.default_rng(seed)
    sizes, count = (range(2, 6), 50) if full else (range(2, 5), 10)
    for n in sizes:
        for _ in range(count):
            A = matrixalg.random_nonzero_column_matrix(n, rng)
            values = {matrixalg.det_grassmann(A), matrixalg.det_vandermonde(A), matrixalg.det_cofactor(A),
                      matrixalg.det_grassmann(A, mode="exterior")}
            if len(values) != 1:
                return False, f"methods disagree on {A.to_json()}"
    return True, f"{count} matrices per n in {list(sizes)}"


def check_permanent(full, seed):
    rng = np.random.default_rng(seed)
    top, count = (6, 50) if full else (5, 10)
    for n in range(1, top + 1):
        for _ in range(count):
            A = matrixalg.random_rational_matrix(n, rng)
            if matrixalg.permanent(A) != matrixalg.permanent_brute(A):
                return False, f"permanent mismatch on {A.to_json()}"
    return True, f"{count} matrices per n <= {top}"


def check_anticommutation(full, seed):
    bad = [n for n in range(1, 5) if not matrixalg.anticommutation_holds(n)]
    return not bad, f"failed for n in {bad}" if bad else "n <= 4"


def check_tree_and_cycles(full, seed):
    n = 3 if full else 2
    for kind in ("ftree", "fcycles"):
        report = matrixalg.exhaustive_check(kind, n)
        if not report.passed:
            return False, f"{kind} mismatches at n={n}: {report.mismatches[:5]}"
    top = 5 if full else 4
    for k in range(1, top + 1):
        if matrixalg.p_tree(n=k).term_count() != k ** (k - 1):
            return False, f"P_Tree term count wrong at n={k}"
    return True, f"exhaustive n={n}, term counts n <= {top}"


def check_gf2_determinant(full, seed):
    sizes = (2, 3) if full else (2,)
    for n in sizes:
        if matrixalg.p_det_gf2(n).term_count() != matrixalg.p_det_term_count(n):
            return False, f"P_det term count wrong at n={n}"
        report = matrixalg.exhaustive_check("fdet2", n)
        if not report.passed:
            return False, f"fdet2 mismatches at n={n}: {report.mismatches[:5]}"
    return True, f"n in {list(sizes)}"


def _random_graph(n, rng):
    return orbits.GraphSet(n, rng.randrange(1 << orbits.edge_space(n).size))


def check_orbits(full, seed):
    rng = random.Random(seed)
    if orbits.polya_count(3) != len(orbits.iso_classes(3)) or orbits.polya_count(3) != 16:
        return False, "Polya count and class enumeration disagree at n=3"
    samples = 100 if full else 20
    for _ in range(samples):
        S = _random_graph(rng.randint(2, 5 if full else 4), rng)
        if len(orbits.orbit(S)) * len(orbits.automorphisms(S)) != factorial(S.n):
            return False, f"orbit-stabilizer fails for {S!r}"
    cases = [(3, _random_graph(3, rng)) for _ in range(3)]
    if full:
        cases += [(4, _random_graph(4, rng)) for _ in range(2)]
    for _, S in cases:
        for kind in ("iso", "sub", "super"):
            bad = orbits.exhaustive_relation_check(kind, S, 1)
            if bad:
                return False, f"{kind} PDE disagrees for {S!r} at {bad[:5]}"
    return True, f"{samples} orbit-stabilizer samples, {len(cases)} exhaustive relation cases"


def check_certificates(full, seed):
    rng = random.Random(seed)
    samples = 100 if full else 20
    for _ in range(samples):
        S = _random_graph(rng.randint(2, 5 if full else 4), rng)
        image = list(range(S.n))
        rng.shuffle(image)
        T = orbits.act(orbits.VertexPermutation(tuple(image)), S)
        sigma = orbits.decode_certificate(orbits.np_certificate(S, T), S.n)
        if sigma is None or orbits.act(sigma, S) != T:
            return False, f"bad certificate for {S!r} -> {T!r}"
        other = _random_graph(S.n, rng)
        if (orbits.np_certificate(S, other) != 0) != orbits.is_isomorphic(S, other):
            return False, f"certificate disagrees with isomorphism for {S!r}, {other!r}"
    return True, f"{samples} random pairs"


def check_orbit_list_identity(full, seed):
    top = 3 if full else 2
    bad = [S for S in range(8) if S.bit_count() <= top and not orbits.prop3_literal_verify(3, S).passed]
    return not bad, f"failed for S in {bad}" if bad else f"Nvars=3, |S| <= {top}"


def check_legendre(full, seed):
    if orbits.legendre_lower_bound(4) != 52 or sum(orbits.legendre_alphas(4).values()) != 4:
        return False, "Legendre bound at n=4 is not 52"
    for n in range(1, 11):
        if sum(orbits.legendre_alphas(n).values()) != orbits.factor_width(factorial(n)):
            return False, f"Legendre sum disagrees with factoring {n}!"
    return True, "n <= 10"


def check_pdp_search(full, seed):
    target = MLPoly(2, QQ, {0: 1, 1: 1, 3: 1})
    seeds = range(seed, seed + (8 if full else 4))
    found = circuit.pdp_search(target, 1, 2, seeds=seeds, tol=1e-10)
    if found.residual >= 1e-8:
        return False, f"free search residual {found.residual:.3e}"
    e = -((4 * 15 ** 0.5 + 17) ** 0.5 + 1) / 2
    fixed = {(0, 0, 2): -1.0, (0, 1, 2): 1.0, (0, 1, 1): e}
    pinned = circuit.pdp_search(target, 1, 2, seeds=seeds, tol=1e-10, fixed=fixed)
    if pinned.residual >= 1e-6:
        return False, f"partial assignment residual {pinned.residual:.3e}"
    return True, f"free {found.residual:.1e}, pinned {pinned.residual:.1e}"


def check_integer_roots(full, seed):
    failed = [d for d in (2, 3, 5, 12) if not matrixalg.integer_roots_check(d).passed]
    return not failed, f"failed for d in {failed}" if failed else "d in [2, 3, 5, 12]"


def check_resolvent(full, seed):
    t_max = 2 if full else 1
    report = orbits.resolvent_check(orbits.GraphSet.from_edges(3, [(0, 1)]), t_max)
    return report.passed, f"{report.cosets} cosets, t <= {t_max}"


CHECKS = [
    (1, "worked interpolation example", check_worked_example),
    (2, "binary and sum-product interpolants agree", check_binary_interpolation),
    (3, "Boole correspondence", check_boole_correspondence),
    (4, "subset and superset product term counts", check_product_counts),
    (5, "cardinality programs", check_cardinality),
    (6, "Newton identities", check_newton),
    (7, "determinant methods agree", check_determinants),
    (8, "permanent", check_permanent),
    (9, "Grassmann anticommutation", check_anticommutation),
    (10, "functional trees and cycle covers", check_tree_and_cycles),
    (11, "GF(2) determinant", check_gf2_determinant),
    (12, "orbit machinery", check_orbits),
    (13, "NP certificates", check_certificates),
    (14, "orbit list identity", check_orbit_list_identity),
    (15, "Legendre bound", check_legendre),
    (16, "PDP search", check_pdp_search),
    (17, "integer roots circuit", check_integer_roots),
    (18, "resolvent coefficients", check_resolvent),
]


class SelfTestRunner:
    def __init__(self, settings=None, lang=None, progress_callback=None):
        self.settings = settings or get_settings()
        self.lang = lang or self.settings.language
        self.progress_callback = progress_callback
        self.logger = logging.getLogger("SelfTest")

    def _run_check(self, number, name, func, full, seed):
        start = time.perf_counter()
        try:
            passed, detail = func(full, seed)
        except Exception as e:
            self.logger.error(f"Check {number} ({name}) raised: {e}", exc_info=True)
            passed, detail = False, f"{type(e).__name__}: {e}"
        result = CheckResult(number, name, bool(passed), detail, time.perf_counter() - start)
        level = logging.INFO if result.passed else logging.WARNING
        self.logger.log(level, f"Check {number} {name}: {'pass' if result.passed else 'FAIL'} ({detail})")
        return result

    def run(self, suite="quick", seed=0, only=None):
        if suite not in SUITES:
            raise ValueError(f"unknown suite {suite!r}")
        full = suite == "full"
        selected = [c for c in CHECKS if only is None or c[0] in only]
        self.logger.info(f"Starting selftest suite '{suite}' with {len(selected)} checks (seed {seed})")

        with concurrent.futures.ThreadPoolExecutor(max_workers=worker_count(len(selected), self.settings)) as executor:
            results = list(executor.map(lambda c: self._run_check(c[0], c[1], c[2], full, seed), selected))

        report = SelfTestReport(suite, seed, results)
        failed = sum(1 for r in results if not r.passed)
        if report.passed:
            message = get_text(self.lang, "selftest_pass", suite=suite, passed=len(results), total=len(results))
        else:
            message = get_text(self.lang, "selftest_fail", suite=suite, failed=failed, total=len(results))
        if self.progress_callback:
            self.progress_callback(message)
        self._update_state_file("success" if report.passed else "failed", suite, results)
        return report

    def _update_state_file(self, status, suite, results):
        """Updates the JSON state file with the latest run."""
        state_path = self.settings.state_file
        data = {}

        # Keep last_success from earlier runs
        if os.path.exists(state_path):
            try:
                with open(state_path, "r") as f:
                    data = json.load(f)
            except (OSError, ValueError):
                pass

        now = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        data["last_attempt"] = now
        data["last_status"] = status
        data["suite"] = suite
        data["checks"] = {str(r.number): r.passed for r in results}
        if status == "success":
            data["last_success"] = now

        try:
            directory = os.path.dirname(state_path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(state_path, "w") as f:
                json.dump(data, f, indent=4)
        except OSError as e:
            self.logger.warning(f"Failed to update state file: {e}")


def run_selftest(suite="quick", seed=0, settings=None, lang=None):
    return SelfTestRunner(settings=settings, lang=lang).run(suite, seed)