import random

import pytest

from rmcover import (
    BooleanFunction,
    InconsistentTableError,
    InfeasibleError,
    RadiusTable,
    bounds_propagate,
    covering_radius_exact,
    dirac,
    exact_nonlinearity,
    nl_probe,
    odd_weight_reduction,
    orbit_enumerate,
    parse_function,
    random_affine,
    relative_rho,
    rm_dimension,
    rm_generator_matrix,
    scan_representatives,
    walsh_spectrum,
    weight,
)
from rmcover.boolfun import apply_affine, degree
from rmcover.group import gf2_rank

BENT4 = "ab+cd"


def table_row_m7():
    t = RadiusTable()
    for k, rho in zip(range(1, 8), (56, 40, 20, 8, 2, 1, 0)):
        t.set_exact(k, 7, rho, "m7-row")
    return t


class TestGeneratorMatrix:
    def test_order_zero(self):
        g = rm_generator_matrix(0, 2)
        assert g.rows == (0b1111,)

    def test_first_order(self):
        g = rm_generator_matrix(1, 2)
        assert g.nrows == 3

    def test_dimension_formula(self):
        assert rm_generator_matrix(4, 8).nrows == 163
        assert rm_dimension(4, 8) == 163

    def test_rows_independent(self):
        for k, m in ((1, 4), (2, 5), (3, 6)):
            g = rm_generator_matrix(k, m)
            assert gf2_rank(g.rows) == g.nrows

    def test_order_out_of_range(self):
        with pytest.raises(ValueError):
            rm_generator_matrix(5, 4)


class TestExactNonlinearity:
    def test_codeword_distance_zero(self):
        rows = rm_generator_matrix(2, 4).rows
        f = BooleanFunction(4, rows[3] ^ rows[7])
        assert exact_nonlinearity(2, 4, f) == 0
        assert exact_nonlinearity(1, 4, BooleanFunction(4, rows[2])) == 0

    def test_bent_function(self):
        assert exact_nonlinearity(1, 4, parse_function(BENT4, 4)) == 6

    def test_dirac_distance_one(self):
        for m in (3, 4):
            assert exact_nonlinearity(m - 2, m, dirac(3, m)) == 1

    def test_affine_invariance(self):
        rng = random.Random(0)
        for _ in range(20):
            f = BooleanFunction(4, rng.getrandbits(16))
            s = random_affine(4, rng)
            assert exact_nonlinearity(1, 4, f) == exact_nonlinearity(
                1, 4, apply_affine(f, s)
            )
            assert exact_nonlinearity(2, 4, f) == exact_nonlinearity(
                2, 4, apply_affine(f, s)
            )

    def test_walsh_matches_enumeration(self):
        rng = random.Random(1)
        for _ in range(20):
            f = BooleanFunction(4, rng.getrandbits(16))
            via_walsh = exact_nonlinearity(1, 4, f)
            rows = rm_generator_matrix(1, 4).rows
            best = f.tt.bit_count()
            c = 0
            for i in range(1, 1 << len(rows)):
                c ^= rows[(i & -i).bit_length() - 1]
                best = min(best, (f.tt ^ c).bit_count())
            assert via_walsh == best

    def test_guard(self):
        with pytest.raises(InfeasibleError):
            exact_nonlinearity(2, 8, BooleanFunction(8, 1))

    def test_walsh_spectrum_parseval(self):
        rng = random.Random(2)
        for m in (3, 5):
            f = BooleanFunction(m, rng.getrandbits(1 << m))
            w = walsh_spectrum(f)
            assert int((w.astype(object) ** 2).sum()) == 1 << (2 * m)


class TestProbe:
    def test_codeword_found_immediately(self):
        row = BooleanFunction(4, rm_generator_matrix(1, 4).rows[1])
        r = nl_probe(1, 4, row, 50, 0, random.Random(0))
        assert r.found and r.best_weight == 0

    def test_bent_limits(self):
        bent = parse_function(BENT4, 4)
        r = nl_probe(1, 4, bent, 500, 6, random.Random(1))
        assert r.found and r.best_weight == 6
        r = nl_probe(1, 4, bent, 2000, 5, random.Random(2))
        assert not r.found and r.best_weight == 6

    def test_found_respects_limit(self):
        rng = random.Random(3)
        for _ in range(30):
            f = BooleanFunction(4, rng.getrandbits(16))
            limit = rng.randrange(0, 7)
            r = nl_probe(1, 4, f, 200, limit, rng)
            assert r.found == (r.best_weight <= limit)

    def test_best_upper_bounds_exact(self):
        rng = random.Random(4)
        for _ in range(250):
            m = rng.choice((4, 5))
            k = rng.choice((1, 2))
            f = BooleanFunction(m, rng.getrandbits(1 << m))
            r = nl_probe(k, m, f, 30, 0, rng)
            assert r.best_weight >= exact_nonlinearity(k, m, f)

    def test_coset_preserved(self):
        rng = random.Random(5)
        for _ in range(5):
            f = BooleanFunction(4, rng.getrandbits(16))
            nl_probe(2, 4, f, 16, 0, rng, check_coset=True)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            nl_probe(1, 3, BooleanFunction(4, 1), 10, 0, random.Random(0))


class TestCoveringRadius:
    def test_rho_last_order(self):
        # the window above the penultimate order holds only near-codewords
        assert covering_radius_exact(1, 2) == 1
        assert covering_radius_exact(2, 3) == 1
        assert covering_radius_exact(3, 4) == 1

    def test_rho_1_4(self):
        assert covering_radius_exact(1, 4) == 6

    def test_rho_top_is_zero(self):
        assert covering_radius_exact(3, 3) == 0

    def test_guard(self):
        with pytest.raises(InfeasibleError):
            covering_radius_exact(2, 8)


class TestRelativeRho:
    def test_degenerate_window(self, oracle234):
        assert relative_rho(3, 3, 4, orbit_enumerate(4, 3, 4)) == (0, True)

    def test_two_oracles_agree(self, oracle234):
        # representative maximum equals the direct maximum over the window
        value, certified = relative_rho(1, 3, 4, oracle234)
        assert certified
        space = oracle234.space
        direct = max(
            exact_nonlinearity(1, 4, space.function(key).lift())
            for key in range(1 << space.dim)
        )
        assert value == direct

    def test_space_mismatch(self, oracle234):
        with pytest.raises(ValueError):
            relative_rho(2, 3, 4, oracle234)

    def test_uncertified_probe_path(self):
        # exact order-2 nonlinearity at m=8 is infeasible, so the probe
        # supplies upper evidence and the result is flagged uncertified
        from rmcover.classify import Classification
        from rmcover.quotient import quotient_space

        space = quotient_space(3, 3, 8)
        reps = Classification(space=space, reps=[0, 1], provenance="adhoc")
        value, certified = relative_rho(
            2, 3, 8, reps, probe_iter=16, rng=random.Random(0)
        )
        assert not certified
        assert value >= 0


class TestBounds:
    def test_interval_for_next_row(self):
        # the relative value is probe evidence, so it enters as an upper bound
        t = table_row_m7()
        t.set_relative(4, 6, 8, 0, 26, provenance="probe")
        t.set_exact(6, 8, 2)
        out = bounds_propagate(t)
        b = out.bound(4, 8)
        assert (b.lo, b.hi) == (20, 28)

    def test_handbook_rows_consistent(self):
        t = table_row_m7()
        t.set_exact(1, 8, 120)
        t.set_interval(2, 8, 88, 96)
        t.set_interval(3, 8, 50, 67)
        t.set_exact(4, 8, 26)
        t.set_exact(5, 8, 10)
        t.set_exact(6, 8, 2)
        t.set_exact(7, 8, 1)
        t.set_exact(8, 8, 0)
        out = bounds_propagate(t)
        for k, rho in zip(range(1, 8), (56, 40, 20, 8, 2, 1, 0)):
            b = out.bound(k, 7)
            assert (b.lo, b.hi) == (rho, rho)

    def test_doubling_bound_matches_oracle(self):
        t = RadiusTable()
        t.set_exact(1, 4, covering_radius_exact(1, 4))
        t.set_interval(1, 5, 0, 16)
        out = bounds_propagate(t)
        assert out.bound(1, 5).lo == 12

    def test_idempotent_and_monotone(self):
        t = table_row_m7()
        t.set_relative(4, 6, 8, 0, 26)
        t.set_exact(6, 8, 2)
        once = bounds_propagate(t)
        twice = bounds_propagate(once)
        for key, b in once.absolute.items():
            b2 = twice.absolute[key]
            assert (b.lo, b.hi) == (b2.lo, b2.hi)
            orig = t.absolute.get(key)
            if orig is not None:
                assert b.lo >= orig.lo and b.hi <= orig.hi

    def test_inconsistency_flagged(self):
        t = RadiusTable()
        t.set_exact(1, 4, 6)
        t.set_exact(1, 5, 10)  # violates the doubling bound
        with pytest.raises(InconsistentTableError):
            bounds_propagate(t)


class TestOddWeight:
    def test_dirac_recovers_point(self):
        for m in (2, 4, 6):
            for a in (0, 1, (1 << m) - 1):
                assert odd_weight_reduction(dirac(a, m)) == a

    def test_degree_drop_random(self):
        rng = random.Random(6)
        for m in (3, 5, 8):
            for _ in range(100):
                tt = rng.getrandbits(1 << m)
                if tt.bit_count() % 2 == 0:
                    tt ^= 1 << rng.randrange(1 << m)
                h = BooleanFunction(m, tt)
                a = odd_weight_reduction(h)
                assert degree(h ^ dirac(a, m)) <= m - 2

    def test_even_weight_rejected(self):
        with pytest.raises(ValueError):
            odd_weight_reduction(BooleanFunction(3, 0b11))


class TestScan:
    def test_zero_representative(self):
        reps = orbit_enumerate(2, 2, 3)
        report = scan_representatives(1, reps, 4, 32, seed=1)
        assert report.entries[0].result.found  # the zero class
        assert report.entries[0].result.best_weight == 0

    def test_partition(self, oracle234):
        report = scan_representatives(1, oracle234, 2, 64, seed=2)
        assert len(report.found) + len(report.not_found) == oracle234.n_classes
        for e in report.entries:
            exact = exact_nonlinearity(
                1, 4, oracle234.rep_function(e.index).lift()
            )
            if e.result.found:
                assert exact <= 2

    def test_dirac_translates(self):
        reps = orbit_enumerate(2, 2, 3)
        report = scan_representatives(1, reps, 0, 16, seed=3, dirac_translates=True)
        assert len(report.entries) == reps.n_classes * 8
        shifts = {e.shift for e in report.entries}
        assert shifts == set(range(8))

    def test_jobs_agree_with_serial(self, oracle234):
        serial = scan_representatives(1, oracle234, 2, 32, seed=4)
        parallel = scan_representatives(1, oracle234, 2, 32, seed=4, jobs=2)
        assert [e.result for e in serial.entries] == [
            e.result for e in parallel.entries
        ]
