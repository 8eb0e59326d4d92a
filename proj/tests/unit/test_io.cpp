#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <persym/io.hpp>

using namespace persym;

namespace {

std::filesystem::path tmpdir() {
    auto p = std::filesystem::temp_directory_path() / "persym_io_test";
    std::filesystem::create_directories(p);
    return p;
}

GridSignal noise_signal(int d, double T, int N, std::uint64_t seed) {
    SplitMix64 rng(seed);
    GridSignal f(d, T, N);
    for (auto& v : f.values) v = rng.gaussian();
    return f;
}

}  // namespace

TEST_CASE("signal CSV and binary round trips are exact") {
    auto f = noise_signal(1, 16.0, 64, 1);
    auto dir = tmpdir();

    save_signal_csv(f, dir / "sig.csv");
    auto g = load_signal_csv(dir / "sig.csv");
    CHECK(g.dim == f.dim);
    CHECK(g.extent == f.extent);
    CHECK(g.npoints == f.npoints);
    CHECK(g.values == f.values);  // %.17g round-trips doubles exactly

    save_signal_bin(f, dir / "sig.psig");
    auto h = load_signal_bin(dir / "sig.psig");
    CHECK(h.values == f.values);
    CHECK(h.extent == f.extent);
}

TEST_CASE("2-d signal round trip via extension dispatch") {
    auto f = noise_signal(2, 8.0, 8, 2);
    auto dir = tmpdir();
    save_signal(f, dir / "sig2.csv");
    CHECK(load_signal(dir / "sig2.csv").values == f.values);
    save_signal(f, dir / "sig2.bin");
    CHECK(load_signal(dir / "sig2.bin").values == f.values);
}

TEST_CASE("cell samples round trip with the period matrix") {
    PeriodMatrix L(2, {1.0, 0.5, -0.25, 2.0});
    SplitMix64 rng(3);
    std::vector<cplx> vals(64);
    for (auto& v : vals) v = rng.gaussian();
    PeriodCellSamples c(L, 8, vals);
    auto dir = tmpdir();

    save_cell_samples_csv(c, dir / "cell.csv");
    auto c2 = load_cell_samples_csv(dir / "cell.csv");
    CHECK(c2.M == 8);
    CHECK(c2.L.entries() == L.entries());
    CHECK(c2.values == vals);

    save_cell_samples_bin(c, dir / "cell.pcel");
    auto c3 = load_cell_samples_bin(dir / "cell.pcel");
    CHECK(c3.values == vals);
    CHECK(c3.L.entries() == L.entries());
}

TEST_CASE("symbol JSON round trip") {
    PeriodMatrix L(2, {2.0, 0.0, 0.0, 0.5});
    PeriodicSymbol p(L);
    p.coeffs.emplace(MultiIndex{0, 0}, cplx(1.0, 0.0));
    p.coeffs.emplace(MultiIndex{1, -2}, cplx(-0.25, 0.125));
    p.coeffs.emplace(MultiIndex{-3, 1}, cplx(0.0, -0.5));
    auto dir = tmpdir();
    save_symbol_json(p, dir / "symbol.json");
    auto q = load_symbol_json(dir / "symbol.json");
    CHECK(q.L.entries() == L.entries());
    REQUIRE(q.coeffs.size() == p.coeffs.size());
    for (const auto& [k, c] : p.coeffs) CHECK(q.coefficient(k) == c);
}

TEST_CASE("loaders reject foreign files") {
    auto dir = tmpdir();
    {
        std::ofstream out(dir / "junk.csv");
        out << "x,re,im\n0,1,2\n";
    }
    CHECK_THROWS_AS(load_signal_csv(dir / "junk.csv"), io_error);
    CHECK_THROWS_AS(load_signal_bin(dir / "junk.csv"), io_error);
    CHECK_THROWS_AS(load_symbol_json(dir / "junk.csv"), io_error);
    CHECK_THROWS_AS(load_signal_csv(dir / "missing.csv"), io_error);
}
