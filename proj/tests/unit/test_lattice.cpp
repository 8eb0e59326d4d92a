#include <doctest.h>

#include <persym/lattice.hpp>

#include <set>

using namespace persym;

TEST_CASE("dual_point: identity matrix returns the index itself") {
    auto L = PeriodMatrix::identity(2);
    auto mu = L.dual_point(MultiIndex{3, -1});
    CHECK(mu[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(mu[1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("dual_point: diagonal lattice gives (h/a, k/b)") {
    std::vector<double> diag{2.0, 4.0};
    auto L = PeriodMatrix::diagonal(diag);
    auto mu = L.dual_point(MultiIndex{1, 1});
    CHECK(mu[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(mu[1] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("dual_point: shear matrix, hand-inverted") {
    // L = [[1,1],[0,1]]: adjugate inverse [[1,-1],[0,1]], so L^{-T} kappa for
    // kappa = (1,0) is (1,-1).
    PeriodMatrix L(2, {1.0, 1.0, 0.0, 1.0});
    auto mu = L.dual_point(MultiIndex{1, 0});
    CHECK(mu[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mu[1] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("dual_point is additive in the index") {
    PeriodMatrix L(2, {1.3, -0.4, 0.2, 2.1});
    MultiIndex k1{2, -3}, k2{-1, 5}, sum{1, 2};
    auto a = L.dual_point(k1), b = L.dual_point(k2), c = L.dual_point(sum);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(a[i] + b[i] - c[i]) < 1e-12);
}

TEST_CASE("PeriodMatrix rejects singular and ill-conditioned input") {
    CHECK_THROWS_AS(PeriodMatrix(2, {1.0, 2.0, 2.0, 4.0}), std::invalid_argument);
    CHECK_THROWS_AS(PeriodMatrix(2, {1.0, 0.0, 0.0, 1e-14}), std::invalid_argument);
    CHECK_THROWS_AS(PeriodMatrix(2, {1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("split_components slices halves") {
    std::vector<double> mu{0.5, 0.25};
    auto [a, b] = split_components(mu);
    CHECK(a == std::vector<double>{0.5});
    CHECK(b == std::vector<double>{0.25});

    std::vector<double> mu4{1, 2, 3, 4};
    auto [c, d] = split_components(mu4);
    CHECK(c == std::vector<double>({1, 2}));
    CHECK(d == std::vector<double>({3, 4}));

    std::vector<double> odd{1, 2, 3};
    CHECK_THROWS_AS(split_components(odd), std::invalid_argument);
}

TEST_CASE("split of a diagonal dual point matches (h/a, k/b)") {
    std::vector<double> diag{2.0, 4.0};
    auto L = PeriodMatrix::diagonal(diag);
    auto [x, w] = split_components(L.dual_point(MultiIndex{3, -2}));
    CHECK(x[0] == doctest::Approx(1.5));
    CHECK(w[0] == doctest::Approx(-0.5));
}

TEST_CASE("symplectic map and form") {
    std::vector<double> z{1.0, 2.0};
    auto jz = symplectic_apply(z);
    CHECK(jz[0] == -2.0);
    CHECK(jz[1] == 1.0);

    // J^2 = -I
    auto jjz = symplectic_apply(jz);
    CHECK(jjz[0] == -z[0]);
    CHECK(jjz[1] == -z[1]);

    CHECK(symplectic_form(z, z) == 0.0);
    std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0};
    CHECK(symplectic_form(e1, e2) == doctest::Approx(-1.0));
}

TEST_CASE("symplectic form equals x2.w1 - x1.w2 in 2d") {
    std::vector<double> z1{1.0, -2.0, 0.5, 3.0}, z2{-1.5, 0.25, 2.0, -0.75};
    // z = (x, w) with d = 2.
    double expected = (-1.5 * 0.5 + 0.25 * 3.0) - (1.0 * 2.0 + (-2.0) * (-0.75));
    CHECK(symplectic_form(z1, z2) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("enumerate_truncation: ring-then-lex order and counts") {
    auto k0 = enumerate_truncation(0, 2);
    REQUIRE(k0.size() == 1);
    CHECK(k0[0] == MultiIndex{0, 0});

    auto k1 = enumerate_truncation(1, 1);
    REQUIRE(k1.size() == 3);
    CHECK(k1[0] == MultiIndex{0});
    CHECK(k1[1] == MultiIndex{-1});
    CHECK(k1[2] == MultiIndex{1});

    auto k2 = enumerate_truncation(1, 2);
    REQUIRE(k2.size() == 9);
    CHECK(k2[0] == MultiIndex{0, 0});

    CHECK(enumerate_truncation(3, 2).size() == 49);
}

TEST_CASE("enumerate_truncation is stable and bijective over the box") {
    auto a = enumerate_truncation(2, 3);
    auto b = enumerate_truncation(2, 3);
    CHECK(a == b);
    CHECK(a.size() == 125);
    std::set<MultiIndex> dedup(a.begin(), a.end());
    CHECK(dedup.size() == a.size());
}
