"""Rule generation: roots, weights, caching, stabilization, residuals."""

from decimal import Decimal
from fractions import Fraction

import pytest

from quadtables import (BigNum, PrecisionPolicy, QuadratureRule, RuleCache,
                        apply_rule, build_recurrence, compute_weights,
                        cosine_kernel, default_policy, find_roots,
                        generate_rule, generate_rule_with_report, log_kernel,
                        log_moment, moment_residuals)

# Small rules frozen from an independent construction: monic orthogonal
# polynomials by exact Gram-Schmidt on the moment Hankel matrix, nodes from
# a binary-arithmetic polynomial root finder, weights both by solving the
# Vandermonde moment system and from Jacobi-matrix eigenvectors (the two
# agreed to 1e-55 before freezing).  40 significant digits each.
ORACLE_RULES = {
    ("log", 1, 4): [
        ("0.04144848019938322080332131015635901100846",
         "0.3834640681451351248500465223430427353478"),
        ("0.2452749143206022519396757595233099729048",
         "0.3868753177747626273360082345543494063770"),
        ("0.5561654535602758371801843543760399390234",
         "0.1904351269501424153613600145473887189807"),
        ("0.8489823945329851746478491880846829206536",
         "0.03922548712995983245258522855521913929456"),
    ],
    ("log", 2, 5): [
        ("0.01796244846478768860654517702479613417288",
         "0.9588537969771939187008259802076408797684"),
        ("0.1317184306194857584272554931220406142885",
         "0.6830020584553584052634052913052043029510"),
        ("0.3395971926226855521023859602179527540420",
         "0.2815660271506238892160064210164388510853"),
        ("0.5945982934786717520179240492962950349442",
         "0.06958564122332767412292172373242299388287"),
        ("0.8320575995725527062497664237955897563102",
         "0.006992476193496112696840583738292972312337"),
    ],
    ("log", 3, 4): [
        ("0.01454516583414255748449056516968526085009",
         "4.241724446286348445677887539726686090088"),
        ("0.1373254257343341540040131144703336045085",
         "1.484727834905863058829148662310167320770"),
        ("0.3818346332929008978009892850456381748059",
         "0.2571835396185197309355027956606271623637"),
        ("0.6850908810696016545944216478683221057126",
         "0.01636417918926876455746100230251942677791"),
    ],
    ("cosine", None, 4): [
        ("-0.7580082430701569846634424612099936142272",
         "0.1426477859066687923284701661497637158965"),
        ("-0.2796590871563542762196343718132414743565",
         "0.4939719864609125507470648873402937322414"),
        ("0.2796590871563542762196343718132414743565",
         "0.4939719864609125507470648873402937322414"),
        ("0.7580082430701569846634424612099936142272",
         "0.1426477859066687923284701661497637158965"),
    ],
    ("cosine", None, 5): [
        ("-0.8253395159627676971722479333761262058466",
         "0.07646567295662187436680752903886210787735"),
        ("-0.4621775118500733309541722861471203691552",
         "0.3207179083593561323010635612548296508711"),
        ("0.0", "0.4788723821032066728153279263927313787787"),
        ("0.4621775118500733309541722861471203691552",
         "0.3207179083593561323010635612548296508711"),
        ("0.8253395159627676971722479333761262058466",
         "0.07646567295662187436680752903886210787735"),
    ],
}


def kernel_of(kind, m):
    return log_kernel(m) if kind == "log" else cosine_kernel()


def assert_close(got: BigNum, want: str, digits: int = 38):
    g = Fraction(got.value)
    w = Fraction(Decimal(want))
    if w == 0:
        assert g == 0
        return
    assert abs(g - w) / abs(w) < Fraction(1, 10 ** digits), (str(got), want)


class TestAgainstOracle:
    @pytest.mark.parametrize("key", sorted(ORACLE_RULES, key=str))
    def test_nodes_and_weights(self, key, shared_cache):
        kind, m, n = key
        rule = generate_rule(kernel_of(kind, m), n, cache=shared_cache)
        for i, (x, w) in enumerate(ORACLE_RULES[key]):
            assert_close(rule.nodes[i], x)
            assert_close(rule.weights[i], w)


class TestQuadratureRuleValidation:
    def _rule(self, **overrides):
        base = dict(kernel=log_kernel(1), n=2,
                    nodes=(BigNum(Fraction(1, 10), 40), BigNum(Fraction(1, 2), 40)),
                    weights=(BigNum(Fraction(71, 100), 40),
                             BigNum(Fraction(29, 100), 40)),
                    output_digits=30, working_digits=30)
        base.update(overrides)
        return QuadratureRule(**base)

    def test_weight_sum_tolerance(self):
        # 0.71 + 0.29 = mu_0 = 1 exactly, accepted; a 1e-15 nudge is not
        self._rule()
        with pytest.raises(ValueError):
            self._rule(weights=(BigNum(Fraction(71, 100) + Fraction(1, 10 ** 15), 40),
                                BigNum(Fraction(29, 100), 40)))

    def test_counts(self):
        with pytest.raises(ValueError):
            self._rule(nodes=(BigNum(Fraction(1, 2), 40),))

    def test_interval_membership(self):
        with pytest.raises(ValueError):
            self._rule(nodes=(BigNum(Fraction(1, 10), 40), BigNum(1, 40)))

    def test_monotonicity(self):
        with pytest.raises(ValueError):
            self._rule(nodes=(BigNum(Fraction(1, 2), 40),
                              BigNum(Fraction(1, 10), 40)))

    def test_positive_weights(self):
        with pytest.raises(ValueError):
            self._rule(weights=(BigNum(Fraction(101, 100), 40),
                                BigNum(Fraction(-1, 100), 40)))


class TestFindRoots:
    def test_positions_and_types(self):
        t = build_recurrence(log_kernel(1), 7, digits=50)
        roots = find_roots(t, 6, 50)
        assert len(roots) == 6
        assert all(isinstance(r, BigNum) and r.precision == 50 for r in roots)
        assert all(Fraction(0) < Fraction(r.value) < 1 for r in roots)
        assert all(roots[i] < roots[i + 1] for i in range(5))

    def test_roots_interlace_under_degree_growth(self):
        t = build_recurrence(log_kernel(2), 9, digits=50)
        inner = find_roots(t, 7, 50)
        outer = find_roots(t, 8, 50)
        for i in range(7):
            assert outer[i] < inner[i] < outer[i + 1]

    def test_symmetric_layout(self):
        t = build_recurrence(cosine_kernel(), 8, digits=50)
        roots = find_roots(t, 7, 50)
        assert roots[3] == 0
        for i in range(7):
            assert roots[i] == -roots[6 - i]

    def test_degree_beyond_table(self):
        t = build_recurrence(log_kernel(1), 3, digits=50)
        with pytest.raises(ValueError):
            find_roots(t, 5, 50)

    def test_cache_reuses_seed_ladder(self):
        cache = RuleCache()
        t = build_recurrence(log_kernel(3), 7, digits=50)
        find_roots(t, 6, 50, cache)
        ladder = cache.seed_state(log_kernel(3))
        assert len(ladder) == 7
        find_roots(t, 4, 50, cache)
        assert len(cache.seed_state(log_kernel(3))) == 7


class TestComputeWeights:
    def test_matches_generated_rule(self, shared_cache):
        rule = generate_rule(log_kernel(1), 6, cache=shared_cache)
        t = build_recurrence(log_kernel(1), 7, digits=rule.working_digits)
        roots = find_roots(t, 6, rule.working_digits)
        weights = compute_weights(t, 6, roots, rule.working_digits)
        for got, want in zip(weights, rule.weights):
            assert_close(got, str(want), digits=min(35, rule.working_digits - 9))

    def test_symmetric_pairs_share_an_object(self):
        t = build_recurrence(cosine_kernel(), 6, digits=50)
        roots = find_roots(t, 5, 50)
        weights = compute_weights(t, 5, roots, 50)
        assert weights[0] is weights[4]
        assert weights[1] is weights[3]

    def test_root_count_must_match(self):
        t = build_recurrence(log_kernel(1), 4, digits=50)
        roots = find_roots(t, 4, 50)
        with pytest.raises(ValueError):
            compute_weights(t, 3, roots, 50)


class TestRuleCache:
    def test_table_reuse_at_or_below_depth(self):
        cache = RuleCache(min_degree=12)
        t1 = cache.table(log_kernel(1), 5, 40)
        t2 = cache.table(log_kernel(1), 12, 40)
        assert t1 is t2
        assert t1.n_max == 12

    def test_deeper_request_rebuilds(self):
        cache = RuleCache()
        t1 = cache.table(log_kernel(1), 4, 40)
        t2 = cache.table(log_kernel(1), 6, 40)
        assert t2.n_max == 6
        assert cache.table(log_kernel(1), 5, 40) is t2

    def test_key_includes_precision(self):
        cache = RuleCache()
        assert cache.table(log_kernel(1), 4, 40) is not \
            cache.table(log_kernel(1), 4, 60)


class TestPolicy:
    def test_kernel_defaults(self):
        assert default_policy(log_kernel(1)).initial_digits == 270
        assert default_policy(log_kernel(3)).initial_digits == 270
        assert default_policy(cosine_kernel()).initial_digits == 650

    def test_high_output_raises_the_floor(self):
        policy = default_policy(log_kernel(1), output_digits=400)
        assert policy.initial_digits == 440
        assert policy.output_digits == 400


class TestGenerateRule:
    def test_report_fields(self, shared_cache):
        rule, report = generate_rule_with_report(log_kernel(1), 5,
                                                 cache=shared_cache)
        assert rule.working_digits == report.working_digits == 405
        assert report.escalations == 0
        assert len(report.values) == 10
        assert rule.output_digits == 30

    def test_cosine_default_acceptance_precision(self, shared_cache):
        rule = generate_rule(cosine_kernel(), 6, cache=shared_cache)
        assert rule.working_digits == 975

    def test_small_custom_policy(self):
        policy = PrecisionPolicy(initial_digits=60, max_digits=400)
        rule = generate_rule(log_kernel(1), 4, policy=policy)
        assert rule.working_digits == 90
        for i, (x, w) in enumerate(ORACLE_RULES[("log", 1, 4)]):
            assert_close(rule.nodes[i], x)
            assert_close(rule.weights[i], w)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            generate_rule(log_kernel(1), 0)


class TestApplyRule:
    def test_polynomial_exactness(self, shared_cache):
        # an n-point rule integrates x^k exactly through k = 2n-1
        rule = generate_rule(log_kernel(2), 4, cache=shared_cache)
        for k in (3, 7):
            got = apply_rule(rule, lambda x: x ** k)
            want = log_moment(k, 2)
            assert abs(Fraction(got.value) - want) < Fraction(1, 10 ** 380)

    def test_odd_function_integrates_to_zero(self, shared_cache):
        rule = generate_rule(cosine_kernel(), 5, cache=shared_cache)
        got = apply_rule(rule, lambda x: x ** 3 + x)
        assert abs(Fraction(got.value)) < Fraction(1, 10 ** 950)


class TestMomentResiduals:
    @pytest.mark.parametrize("kind, m, n", [
        ("log", 1, 6), ("log", 3, 5), ("cosine", None, 6),
    ])
    def test_within_working_tolerance(self, kind, m, n, shared_cache):
        rule = generate_rule(kernel_of(kind, m), n, cache=shared_cache)
        residuals = moment_residuals(rule)
        assert len(residuals) == 2 * n
        bound = Decimal(10) ** -(rule.working_digits - 10)
        assert max(residuals) < bound
