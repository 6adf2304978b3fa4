import math
import random
from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from bowditch import DegenerateError, DomainError, ImaginaryCharacter, base_vertex, kappa, step
from bowditch.tree import (
    EdgeDirection,
    GeodesicRegime,
    RegionParity,
    VertexType,
    ab_product,
    alternating_geodesic,
    bfs,
    canonical,
    classify_real_region_geodesic,
    edge_info,
    farey_flip,
    fork_lemma_check,
    geodesic_closed_form,
    geodesic_value,
    is_orthogonal_indecisive,
    parabolic_geodesic,
    vertex_type,
)

C = ImaginaryCharacter


def farey_neighbours_oracle(u, v, bound=60):
    """All primitive classes adjacent (determinant +-1) to both u and v, by enumeration."""
    found = set()
    for p in range(-bound, bound + 1):
        for q in range(-bound, bound + 1):
            if (p, q) == (0, 0) or gcd(p, q) != 1:
                continue
            if abs(p * u[1] - q * u[0]) == 1 and abs(p * v[1] - q * v[0]) == 1:
                found.add(canonical(p, q))
    return found


def det(a, b):
    return a[0] * b[1] - a[1] * b[0]


class TestFarey:
    def test_base_flip_of_real_region(self):
        v = step(base_vertex(C(1, 1, 3)), 3)
        assert v.character.as_tuple() == (1, 1, -4)
        assert v.fractions[2] == (-1, 1)

    def test_flip_matches_tessellation(self):
        v = base_vertex(C(1, 1, 3))
        rng = random.Random(3)
        for _ in range(200):
            col = rng.choice((1, 2, 3))
            others = [v.fractions[i] for i in range(3) if i != col - 1]
            old = v.fractions[col - 1]
            nxt = step(v, col)
            if max(abs(t) for f in others for t in f) > 25:
                v = base_vertex(C(1, 1, 3))
                continue
            candidates = farey_neighbours_oracle(*others)
            assert candidates == {old, nxt.fractions[col - 1]}
            v = nxt

    def test_depth_ten_invariants(self):
        count = 0
        for v in bfs(base_vertex(C(1, 2, 3)), 10):
            f = v.fractions
            assert abs(det(f[0], f[1])) == abs(det(f[1], f[2])) == abs(det(f[0], f[2])) == 1
            parities = [r.parity for r in v.regions]
            assert parities == [RegionParity.IMAGINARY_X, RegionParity.IMAGINARY_Y, RegionParity.REAL]
            assert v.real_region.trace == v.character.z
            count += 1
        assert count == 1 + 3 * (2**10 - 1)

    @given(st.lists(st.sampled_from([1, 2, 3]), max_size=20))
    def test_step_twice_is_identity(self, colors):
        v = base_vertex(C(Fraction(1, 2), 3, -2))
        for c in colors:
            v = step(v, c)
        for c in colors:
            w = step(step(v, c), c)
            assert (w.character, w.fractions) == (v.character, v.fractions)

    def test_flip_formula_against_reflection(self):
        # projectively the new class is 2u - w
        u, v, w = (1, 0), (0, 1), (1, 1)
        p, q = 2 * u[0] - w[0], 2 * u[1] - w[1]
        assert farey_flip(u, v, w) == canonical(p, q)


class TestEdges:
    def test_examples(self):
        e = edge_info(base_vertex(C(1, 1, 3)), 3)
        assert e.decisive and e.direction is EdgeDirection.TOWARD_SELF and e.flipped_value == -4
        e = edge_info(base_vertex(C(1, 1, 3)), 1)
        assert e.decisive and e.direction is EdgeDirection.TOWARD_SELF and e.flipped_value == 2
        e = edge_info(base_vertex(C(0, 0, 3)), 1)
        assert not e.decisive and e.flipped_value == 0

    @pytest.mark.parametrize("c, t", [((1, 1, 3), VertexType.SINK), ((1, 1, -4), VertexType.MERGE),
                                      ((2, 2, 4), VertexType.SINK), ((0, 0, 3), VertexType.SINK)])
    def test_vertex_types(self, c, t):
        assert vertex_type(base_vertex(C(*c))) is t

    def test_inward_count_matches_table(self):
        for v in bfs(base_vertex(C(1, 2, 3)), 4):
            inward = sum(edge_info(v, c).direction is EdgeDirection.TOWARD_SELF for c in (1, 2, 3))
            assert vertex_type(v) is [VertexType.SOURCE, VertexType.FORK, VertexType.MERGE, VertexType.SINK][inward]

    def test_orthogonal(self):
        # z = -xy/2 makes the real edge indecisive
        c = C(2, 3, -3)
        assert is_orthogonal_indecisive(base_vertex(c), 3)
        assert not edge_info(c, 3).decisive
        assert not is_orthogonal_indecisive(base_vertex(C(1, 1, 3)), 3)

    @given(st.fractions(min_value=-5, max_value=5), st.fractions(min_value=-5, max_value=5),
           st.fractions(min_value=-5, max_value=5))
    def test_positive_vertex_real_edge_inward(self, x, y, z):
        c = C(x, y, z)
        if x * y * z > 0:
            e = edge_info(c, 3)
            assert e.direction is EdgeDirection.TOWARD_SELF and e.decisive

    def test_bigger_than_two_on_real_regions(self):
        c = C(Fraction(3, 2), Fraction(-1, 3), 5)
        assert kappa(c) > 2
        for v in bfs(base_vertex(c), 7):
            assert abs(v.character.z) > 2


class TestForkProperty:
    def test_examples(self):
        assert fork_lemma_check(base_vertex(C(1, 1, 3))) is None
        assert fork_lemma_check(base_vertex(C(0, 0, 3))) is None

    @given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-8, 8))
    def test_no_violation_near_random_seeds(self, x, y, z):
        c = C(x, y, z)
        if x == 0 or y == 0:
            return
        for v in bfs(base_vertex(c), 4):
            assert fork_lemma_check(v) is None


def point_on_level(z, k, rng):
    for _ in range(1000):
        x = rng.uniform(-5, 5)
        disc = (x * z) ** 2 - 4 * (x * x - z * z + 2 + k)
        if disc >= 0:
            y = (x * z + rng.choice((-1, 1)) * math.sqrt(disc)) / 2
            return C(x, y, z)
    return None


class TestGeodesics:
    def test_fibonacci(self):
        seq = alternating_geodesic(C(1, 1, 3), 3, range(0, 6))
        assert seq == [1, 1, 2, 5, 13, 34]
        fit = geodesic_closed_form(3, 1, 1)
        assert fit.lam == pytest.approx((3 + math.sqrt(5)) / 2, rel=1e-15)
        assert fit.a * fit.b == pytest.approx(0.2, rel=1e-14)
        for n in range(-10, 10):
            assert geodesic_value(fit, n) == pytest.approx(alternating_geodesic(C(1, 1, 3), 3, [n])[0], rel=1e-12)

    def test_negative_indices_recurse_backwards(self):
        seq = alternating_geodesic(C(1, 1, 3), 3, range(-3, 2))
        assert seq == [13, 5, 2, 1, 1]

    def test_geodesic_is_a_tree_walk(self):
        c = C(Fraction(1, 2), 2, Fraction(7, 3))
        seq = alternating_geodesic(c, 3, range(-6, 8))
        v, walk = base_vertex(c), {0: c.x, 1: c.y}
        for n in range(1, 7):
            v = step(v, 1 if n % 2 else 2)
            walk[n + 1] = v.character.as_tuple()[(0 if n % 2 else 1)]
        assert [walk[n] for n in range(0, 8)] == seq[6:]

    @pytest.mark.parametrize("slot", [1, 2])
    def test_imaginary_slots_walk_the_tree(self, slot):
        c = C(Fraction(1, 2), Fraction(3, 4), 3)
        seq = alternating_geodesic(c, slot, range(-4, 6))
        a, b = [col for col in (1, 2, 3) if col != slot]
        v, walk = base_vertex(c), {0: c.as_tuple()[a - 1], 1: c.as_tuple()[b - 1]}
        for n in range(1, 5):
            col = a if n % 2 else b
            v = step(v, col)
            walk[n + 1] = v.character.as_tuple()[col - 1]
        v = base_vertex(c)
        for n in range(0, -4, -1):
            col = b if n % 2 == 0 else a
            v = step(v, col)
            walk[n - 1] = v.character.as_tuple()[col - 1]
        assert [walk[n] for n in range(-4, 6)] == seq

    def test_closed_form_random(self):
        rng = random.Random(11)
        done = 0
        while done < 200:
            z = rng.choice((-1, 1)) * rng.uniform(2.05, 9)
            k = rng.uniform(-30, 30)
            c = point_on_level(z, k, rng)
            if c is None:
                continue
            fit = geodesic_closed_form(z, c.x, c.y)
            seq = alternating_geodesic(c, 3, range(-20, 21))
            for n, val in zip(range(-20, 21), seq):
                scale = max(1.0, abs(fit.a * fit.lam**n) + abs(fit.b * fit.lam ** (-n)))
                assert abs(geodesic_value(fit, n) - val) <= 1e-8 * scale
            assert abs(fit.a * fit.b - ab_product(z, kappa(c))) <= 1e-8 * max(1.0, abs(ab_product(z, kappa(c))))
            done += 1

    def test_elliptic_closed_form(self):
        fit = geodesic_closed_form(1, 2, 3)
        seq = alternating_geodesic(C(2, 3, 1), 3, range(-8, 9))
        for n, v in zip(range(-8, 9), seq):
            val = geodesic_value(fit, n)
            assert abs(val.imag) < 1e-12 and val.real == pytest.approx(v, abs=1e-12)

    @given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-25, 25))
    def test_parabolic_exact(self, y0, y1, n):
        for z in (2, -2):
            assert alternating_geodesic(C(y0, y1, z), 3, [n])[0] == parabolic_geodesic(z, y0, y1, n)

    def test_parabolic_degenerate(self):
        with pytest.raises(DegenerateError):
            parabolic_geodesic(3, 1, 1, 2)
        with pytest.raises(DegenerateError):
            geodesic_closed_form(2, 1, 1)

    def test_zero_trace_period_four(self):
        seq = alternating_geodesic(C(Fraction(3, 7), 5, 0), 3, range(0, 12))
        assert all(seq[n + 2] == -seq[n] for n in range(10))


class TestAbProduct:
    @pytest.mark.parametrize("z, k, ab", [(3, 8, Fraction(1, 5)), (4, 22, Fraction(2, 3))])
    def test_examples(self, z, k, ab):
        assert ab_product(Fraction(z), k) == ab

    def test_vanishes_on_dihedral_height(self):
        assert ab_product(math.sqrt(10), 8) == pytest.approx(0, abs=1e-15)

    def test_domain(self):
        with pytest.raises(DomainError):
            ab_product(-2, 3)


class TestRegimes:
    @pytest.mark.parametrize("z, k, regime", [
        (3, 8, GeodesicRegime.SINK_ON_BOUNDARY),
        (math.sqrt(10), 8, GeodesicRegime.ALL_MERGES_ONE_DIRECTION),
        (4, 8, GeodesicRegime.ONE_OUTWARD_MERGE),
        (1, -4, GeodesicRegime.ELLIPTIC),
        (-2, 8, GeodesicRegime.PARABOLIC_BOUNDARY),
        (3, -10, GeodesicRegime.SINK_OR_MERGE_BY_COMPARISON),
    ])
    def test_examples(self, z, k, regime):
        assert classify_real_region_geodesic(z, k) is regime

    @pytest.mark.parametrize("c, sinks", [((1, 1, 3), 1), ((2, 2, 4), 1), ((1, -1, 4), 0)])
    def test_sinks_along_real_geodesic(self, c, sinks):
        # walk 30 vertices each way around the real region and count sinks
        v0 = base_vertex(C(*c))
        seen = [v0]
        for first in (1, 2):
            v, col = v0, first
            for _ in range(30):
                v = step(v, col)
                seen.append(v)
                col = 3 - col
        assert sum(vertex_type(v) is VertexType.SINK for v in seen) == sinks
