#include "persym_cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <persym/analysis.hpp>
#include <persym/gabor.hpp>
#include <persym/io.hpp>
#include <persym/oracle.hpp>

namespace persym::cli {

namespace {

using nlohmann::json;

json make_error(const std::string& kind, const std::string& message) {
    return json{{"schema", 1}, {"error", {{"kind", kind}, {"message", message}}}};
}

void emit(const json& j, const std::filesystem::path& path, std::ostream& fallback,
          bool append = false) {
    if (path.empty()) {
        fallback << j.dump(2) << "\n";
        return;
    }
    if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw io_error("cannot open report file: " + path.string());
    out << (append ? j.dump() : j.dump(2)) << "\n";
}

json warnings_json(const Diagnostics& diag) {
    json arr = json::array();
    for (const auto& w : diag.warnings()) arr.push_back(w);
    return arr;
}

double parse_scan_part(const std::string& part, double& lo, double& hi, int& count) {
    // "lo:hi:count"
    std::stringstream ss(part);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw std::invalid_argument("bad scan range: " + part);
    lo = std::stod(a);
    hi = std::stod(b);
    count = std::stoi(c);
    if (count < 1 || !(hi >= lo)) throw std::invalid_argument("bad scan range: " + part);
    return hi - lo;
}

ScanGrid parse_scan(const std::string& scan) {
    auto comma = scan.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("scan expects a0:a1:na,b0:b1:nb");
    ScanGrid g{};
    parse_scan_part(scan.substr(0, comma), g.alpha_lo, g.alpha_hi, g.alpha_count);
    parse_scan_part(scan.substr(comma + 1), g.beta_lo, g.beta_hi, g.beta_count);
    return g;
}

GridSignal make_gaussian_window(double T, int N) {
    return GridSignal::sample(1, T, N, [](std::span<const double> t) {
        return cplx(std::pow(2.0, 0.25) * std::exp(-std::numbers::pi * t[0] * t[0]), 0.0);
    });
}


// Resolves the weight selector: the preset overrides s and C when present.
std::pair<PolynomialWeight, double> resolve_weight(const RunConfig& cfg) {
    if (!cfg.weight.empty()) {
        ModerateWeight mw = parse_weight(cfg.weight);
        return {mw.v, mw.C};
    }
    return {PolynomialWeight(cfg.s), cfg.C};
}

int run_coeffs(const RunConfig& cfg, std::ostream& out) {
    auto cell = load_cell_samples(cfg.cell_path);
    auto p = fourier_coefficients(cell, cfg.K, cfg.prune);
    save_symbol_json(p, cfg.out_path);
    double ell1 = 0.0;
    for (const auto& [k, c] : p.coeffs) ell1 += std::abs(c);
    json rep{{"schema", 1},
             {"command", "coeffs"},
             {"K", cfg.K},
             {"prune_threshold", cfg.prune},
             {"coefficients", p.coeffs.size()},
             {"ell1", ell1},
             {"output", cfg.out_path.string()},
             {"conventions", conventions()}};
    emit(rep, cfg.report_path, out);
    return kExitOk;
}

int run_apply(const RunConfig& cfg, std::ostream& out) {
    auto p = load_symbol_json(cfg.symbol_path);
    auto f = load_signal(cfg.signal_path);
    OperatorSpec spec(std::move(p), cfg.tau, cfg.K);
    Diagnostics diag;
    auto t0 = std::chrono::steady_clock::now();
    GridSignal result = apply_series(spec, f, &diag);
    auto t1 = std::chrono::steady_clock::now();
    save_signal(result, cfg.out_path);

    double mod = max_modulation(spec);
    json rec{{"schema", 1},
             {"command", "apply"},
             {"tau", cfg.tau},
             {"K", cfg.K},
             {"terms", spec.symbol.coeffs.size()},
             {"nyquist", nyquist(f)},
             {"max_modulation", mod},
             {"aliasing_margin", 0.8 * nyquist(f) - mod},
             {"runtime_ms",
              std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() / 1000.0},
             {"warnings", warnings_json(diag)},
             {"output", cfg.out_path.string()},
             {"conventions", conventions()}};
    emit(rec, cfg.report_path, out, /*append=*/true);
    return kExitOk;
}

int run_bound(const RunConfig& cfg, std::ostream& out) {
    auto p = load_symbol_json(cfg.symbol_path);
    auto [v, C] = resolve_weight(cfg);
    std::optional<double> measured;
    NormEstimate est;
    if (cfg.measure) {
        OperatorSpec spec(p, cfg.tau, std::max(cfg.K, p.support_radius()));
        GridSignal tmpl(spec.signal_dim(), cfg.T, cfg.N);
        if (v.s == 0.0) {
            est = operator_norm_estimate(spec, tmpl, cfg.iters);
        } else {
            auto m = ModerateWeight::polynomial(v.s);
            est = operator_norm_estimate(spec, tmpl, cfg.iters, &m);
        }
        measured = est.value;
    }
    BoundReport rep = continuity_bound(p, v, C, measured);
    json j{{"schema", 1},
           {"command", "bound"},
           {"s", v.s},
           {"C", rep.C},
           {"ell1_v", rep.ell1_v},
           {"bound", rep.bound},
           {"pass", rep.pass},
           {"conventions", conventions()}};
    if (measured) {
        j["measured_norm"] = *measured;
        j["power_iteration"] = {{"iterations", est.iterations},
                                {"converged", est.converged},
                                {"last_rel_change", est.last_rel_change}};
    }
    emit(j, cfg.report_path, out);
    return kExitOk;
}

json invertibility_json(const InvertibilityReport& rep) {
    json j{{"c0", {rep.c0.real(), rep.c0.imag()}},
           {"tail", rep.tail},
           {"threshold", rep.threshold},
           {"invertible", rep.invertible}};
    if (rep.inverse_norm_bound) j["inverse_norm_bound"] = *rep.inverse_norm_bound;
    return j;
}

int run_invert(const RunConfig& cfg, std::ostream& out) {
    auto p = load_symbol_json(cfg.symbol_path);
    auto f = load_signal(cfg.signal_path);
    OperatorSpec spec(std::move(p), cfg.tau, std::max(cfg.K, 0));
    auto [v, C] = resolve_weight(cfg);
    Diagnostics diag;
    NeumannResult res = neumann_inverse_apply(spec, f, cfg.terms, v, C, 1e-6, &diag);
    if (!cfg.out_path.empty()) save_signal(res.result, cfg.out_path);
    json j{{"schema", 1},
           {"command", "invert"},
           {"tau", cfg.tau},
           {"terms", res.terms},
           {"residual", res.residual},
           {"rho", res.rho},
           {"certificate", invertibility_json(res.certificate)},
           {"warnings", warnings_json(diag)},
           {"conventions", conventions()}};
    if (!cfg.out_path.empty()) j["output"] = cfg.out_path.string();
    emit(j, cfg.report_path, out);
    return kExitOk;
}

int run_gabor(const RunConfig& cfg, std::ostream& out) {
    if (cfg.window != "gaussian")
        throw std::invalid_argument("unknown window preset: " + cfg.window);
    if (!cfg.scan.empty()) {
        ScanGrid grid = parse_scan(cfg.scan);
        auto rows = gabor_scan(grid, cfg.H, cfg.K, cfg.M, cfg.T, cfg.N);
        if (!cfg.out_path.parent_path().empty())
            std::filesystem::create_directories(cfg.out_path.parent_path());
        std::ofstream csv(cfg.out_path);
        if (!csv) throw io_error("cannot open scan output: " + cfg.out_path.string());
        csv << "alpha,beta,c0_abs,tail,certified,lower_frame_bound,upper_frame_bound,zone\n";
        std::size_t certified = 0;
        for (const auto& r : rows) {
            csv << format_double(r.alpha) << "," << format_double(r.beta) << ","
                << format_double(r.c0_abs) << "," << format_double(r.tail) << ","
                << (r.certified ? 1 : 0) << "," << format_double(r.lower_frame_bound) << ","
                << format_double(r.upper_frame_bound) << "," << r.zone << "\n";
            certified += r.certified ? 1 : 0;
        }
        json j{{"schema", 1},
               {"command", "gabor"},
               {"mode", "scan"},
               {"rows", rows.size()},
               {"certified_cells", certified},
               {"H", cfg.H},
               {"K", cfg.K},
               {"M", cfg.M},
               {"output", cfg.out_path.string()},
               {"conventions", conventions()}};
        emit(j, cfg.report_path, out);
        return kExitOk;
    }

    GridSignal g = make_gaussian_window(cfg.T, cfg.N);
    GaborSystem sys(g, cfg.alpha, cfg.beta, cfg.H);
    Diagnostics diag;
    DualWindowResult res = dual_window(sys, cfg.terms, cfg.K, cfg.M, &diag);
    if (!cfg.out_path.empty()) save_signal(res.gamma, cfg.out_path);
    json j{{"schema", 1},
           {"command", "gabor"},
           {"mode", "dual_window"},
           {"alpha", cfg.alpha},
           {"beta", cfg.beta},
           {"H", cfg.H},
           {"K", cfg.K},
           {"M", cfg.M},
           {"terms", res.terms},
           {"series_residual", res.series_residual},
           {"direct_residual", res.direct_residual},
           {"certificate", invertibility_json(res.certificate)},
           {"warnings", warnings_json(diag)},
           {"conventions", conventions()}};
    if (!cfg.out_path.empty()) j["output"] = cfg.out_path.string();
    emit(j, cfg.report_path, out);
    return kExitOk;
}

int run_multiplier(const RunConfig& cfg, std::ostream& out) {
    auto sigma = load_symbol_json(cfg.symbol_path);
    auto [v, C] = resolve_weight(cfg);
    (void)C;
    json j{{"schema", 1}, {"command", "multiplier"}, {"s", v.s}, {"conventions", conventions()}};

    if (cfg.witness) {
        auto [u, rep] = multiplier_necessity_witness(sigma, v, cfg.T, cfg.N);
        j["witness"] = {{"norm_u", rep.norm_u}, {"lhs", rep.lhs},
                        {"rhs_unscaled", rep.rhs_unscaled}, {"K", rep.K},
                        {"rhs", rep.rhs},     {"holds", rep.holds}};
        if (!cfg.out_path.empty()) {
            save_signal(u, cfg.out_path);
            j["witness_signal"] = cfg.out_path.string();
        }
    }
    if (!cfg.signal_path.empty()) {
        auto u = load_signal(cfg.signal_path);
        auto series = apply_multiplier(sigma, u, MultiplierPath::translation_series);
        auto fourier = apply_multiplier(sigma, u, MultiplierPath::frequency_side);
        double nf = l2_norm(series);
        double agreement = nf > 0.0 ? l2_norm(series - fourier) / nf : 0.0;
        j["path_agreement_rel_l2"] = agreement;
        if (!cfg.witness && !cfg.out_path.empty()) {
            save_signal(series, cfg.out_path);
            j["output"] = cfg.out_path.string();
        }
    }
    emit(j, cfg.report_path, out);
    return kExitOk;
}

struct Check {
    std::string name;
    double value;
    double tolerance;
    bool pass;
};

int run_selftest(const RunConfig& cfg, std::ostream& out) {
    std::vector<Check> checks;
    auto add = [&](const std::string& name, double value, double tol) {
        checks.push_back({name, value, tol, value <= tol});
    };

    const double T = 16.0;
    const int N = 256;
    auto g = make_gaussian_window(T, N);

    // Transform identities.
    auto back = dft(dft(g, FftDirection::forward), FftDirection::inverse);
    add("dft_round_trip", l2_norm(back - g) / l2_norm(g), 1e-12);
    add("parseval", std::abs(l2_norm(dft(g, FftDirection::forward)) - l2_norm(g)) / l2_norm(g),
        1e-12);

    // tfs commutation.
    PhasePoint z(0.7, -1.3);
    auto lhs = translate(modulate(g, z.w), z.x);
    auto rhs = std::polar(1.0, -two_pi * z.x[0] * z.w[0]) * tfs_apply(g, z);
    add("tfs_commutation", l2_norm(lhs - rhs) / l2_norm(g), 1e-10);

    // Symbol round trip.
    PeriodMatrix L = PeriodMatrix::identity(2);
    PeriodicSymbol p(L);
    p.coeffs.emplace(MultiIndex{0, 0}, cplx(1.0, 0.0));
    p.coeffs.emplace(MultiIndex{1, -1}, cplx(0.25, 0.1));
    p.coeffs.emplace(MultiIndex{-2, 1}, cplx(-0.1, 0.05));
    auto cell = sample_period_cell(L, 16, [&](std::span<const double> zz) {
        return synthesize(p, zz);
    });
    auto q = fourier_coefficients(cell, 3);
    double worst = 0.0;
    for (const MultiIndex& k : enumerate_truncation(3, 2))
        worst = std::max(worst, std::abs(p.coefficient(k) - q.coefficient(k)));
    add("symbol_round_trip", worst, 1e-12);

    // Identity operator.
    PeriodicSymbol one(L);
    one.coeffs.emplace(MultiIndex{0, 0}, cplx(1.0, 0.0));
    add("identity_operator", l2_norm(apply_series(OperatorSpec(one, 0.5, 1), g) - g) / l2_norm(g),
        1e-12);

    // Series vs oracle on a 2-term symbol.
    {
        PeriodicSymbol two(L);
        two.coeffs.emplace(MultiIndex{0, 0}, cplx(1.0, 0.0));
        two.coeffs.emplace(MultiIndex{1, 1}, cplx(0.3, -0.1));
        OperatorSpec spec(two, 0.5, 1);
        auto fsig = TestSignal::gaussian(1);
        auto series = apply_series(spec, fsig.sample(32.0, 512));
        auto oracle = apply_oracle(spec, fsig, 32.0, 512);
        add("series_vs_oracle", l2_norm(series - oracle) / l2_norm(series), 1e-8);
    }

    // Moderation check.
    auto m2 = ModerateWeight::polynomial(2.0);
    auto mrep = moderation_check(m2, default_moderation_samples(1));
    add("moderation_v2", mrep.pass ? 0.0 : 1.0, 0.5);

    // Invertibility arithmetic + Neumann residual.
    {
        PeriodicSymbol inv(L);
        inv.coeffs.emplace(MultiIndex{0, 0}, cplx(1.0, 0.0));
        inv.coeffs.emplace(MultiIndex{1, 0}, cplx(0.3, 0.0));
        PolynomialWeight v0(0.0);
        auto rep = invertibility_check(inv, v0, 1.0);
        add("invertibility_criterion", rep.invertible ? 0.0 : 1.0, 0.5);
        auto res = neumann_inverse_apply(OperatorSpec(inv, 0.0, 1), g, 26, v0, 1.0, 1.0);
        add("neumann_residual", res.residual, 1e-6);
    }

    // STFT isometry.
    {
        auto table = stft(g, g, StftGrid::native(g));
        double cell_area = table.x_spacing() * table.w_spacing();
        double mass = 0.0;
        for (const cplx& vv : table.values) mass += std::norm(vv) * cell_area;
        double expect = l2_norm(g) * l2_norm(g);
        add("stft_isometry", std::abs(std::sqrt(mass) - expect) / expect, 1e-4);
    }

    // Periodization identity.
    {
        auto Lone = PeriodMatrix::identity(1);
        auto pou = [](std::span<const double> x) { return cplx(partition_unity_bump(x), 0.0); };
        auto per = periodize(pou, Lone, 3);
        double w = 0.0;
        for (double x : {-0.4, -0.1, 0.0, 0.2, 0.45}) {
            std::vector<double> pt{x};
            w = std::max(w, std::abs(per(pt) - cplx(1.0, 0.0)));
        }
        add("partition_of_unity_periodization", w, 1e-12);
    }

    json jchecks = json::array();
    bool all_pass = true;
    for (const auto& c : checks) {
        jchecks.push_back(
            {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
        all_pass = all_pass && c.pass;
    }
    json j{{"schema", 1},
           {"command", "selftest"},
           {"checks", jchecks},
           {"all_pass", all_pass},
           {"conventions", conventions()}};
    emit(j, cfg.report_path, out);
    return all_pass ? kExitOk : kExitNumerical;
}

}  // namespace

json conventions() {
    return json{
        {"coefficient_sign",
         "c_kappa = (1/M^n) sum_j p(L y_j) e^{-2 pi i kappa . y_j}; synthesis uses "
         "e^{+2 pi i <L^{-T} kappa, x>} (the pairing that makes the round trip exact)"},
        {"invertibility_weight",
         "the criterion weighs |c_kappa| by v(J L^{-T} kappa), the weight at the phase-space "
         "point of the shift, not a weight of the operator"},
        {"summation_order",
         "series terms ordered by ||kappa||_inf then lexicographically and reduced with a fixed "
         "pairwise tree"},
        {"frequency_layout", "centered bins xi_k = k/T, k in [-N/2, N/2)"}};
}

void validate(const RunConfig& cfg) {
    static const std::vector<std::string> commands{"coeffs", "apply",      "bound",   "invert",
                                                   "gabor",  "multiplier", "selftest"};
    if (std::find(commands.begin(), commands.end(), cfg.command) == commands.end())
        throw std::invalid_argument("unknown command: " + cfg.command);
    if (!(cfg.tau >= 0.0 && cfg.tau <= 1.0)) throw std::invalid_argument("tau must be in [0,1]");
    if (cfg.K < 0) throw std::invalid_argument("K must be >= 0");
    if (cfg.H < 0) throw std::invalid_argument("H must be >= 0");
    if (cfg.M < 2) throw std::invalid_argument("M must be >= 2");
    if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0))
        throw std::invalid_argument("alpha and beta must be positive");
    if (!(cfg.s >= 0.0)) throw std::invalid_argument("s must be >= 0");
    if (!(cfg.C > 0.0)) throw std::invalid_argument("C must be positive");
    if (!(cfg.p >= 1.0) || !(cfg.q >= 1.0)) throw std::invalid_argument("p, q must be >= 1");
    if (cfg.terms < 1) throw std::invalid_argument("terms must be >= 1");
    if (cfg.iters < 10) throw std::invalid_argument("iters must be >= 10");
    if (!(cfg.T > 0.0)) throw std::invalid_argument("T must be positive");
    if (cfg.N < 2 || cfg.N % 2 != 0) throw std::invalid_argument("N must be even and >= 2");
    if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (!cfg.weight.empty()) (void)parse_weight(cfg.weight);  // throws on bad selector

    auto need = [](const std::filesystem::path& p, const char* what) {
        if (p.empty()) throw std::invalid_argument(std::string("missing required path: ") + what);
        if (!std::filesystem::exists(p))
            throw std::invalid_argument("file not found: " + p.string());
    };
    auto need_out = [](const std::filesystem::path& p, const char* what) {
        if (p.empty()) throw std::invalid_argument(std::string("missing required path: ") + what);
    };
    if (cfg.command == "coeffs") {
        need(cfg.cell_path, "--cell");
        need_out(cfg.out_path, "--out");
    } else if (cfg.command == "apply") {
        need(cfg.symbol_path, "--symbol");
        need(cfg.signal_path, "--signal");
        need_out(cfg.out_path, "--out");
    } else if (cfg.command == "bound") {
        need(cfg.symbol_path, "--symbol");
    } else if (cfg.command == "invert") {
        need(cfg.symbol_path, "--symbol");
        need(cfg.signal_path, "--signal");
    } else if (cfg.command == "gabor") {
        if (!cfg.scan.empty()) need_out(cfg.out_path, "--out");
    } else if (cfg.command == "multiplier") {
        need(cfg.symbol_path, "--symbol");
        if (!cfg.signal_path.empty()) need(cfg.signal_path, "--signal");
        if (!cfg.witness && cfg.signal_path.empty())
            throw std::invalid_argument("multiplier needs --witness and/or --signal");
    }
}

int dispatch(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        err << make_error("config", e.what()).dump(2) << "\n";
        return kExitConfig;
    }
    set_max_threads(cfg.threads);
    try {
        if (cfg.command == "coeffs") return run_coeffs(cfg, out);
        if (cfg.command == "apply") return run_apply(cfg, out);
        if (cfg.command == "bound") return run_bound(cfg, out);
        if (cfg.command == "invert") return run_invert(cfg, out);
        if (cfg.command == "gabor") return run_gabor(cfg, out);
        if (cfg.command == "multiplier") return run_multiplier(cfg, out);
        if (cfg.command == "selftest") return run_selftest(cfg, out);
        err << make_error("config", "unknown command").dump(2) << "\n";
        return kExitConfig;
    } catch (const aliasing_error& e) {
        json j = make_error("aliasing", e.what());
        j["error"]["required_band"] = e.required_band;
        j["error"]["allowed_band"] = e.allowed_band;
        err << j.dump(2) << "\n";
        return kExitNumerical;
    } catch (const not_invertible_error& e) {
        json j = make_error("criterion_inconclusive", e.what());
        j["error"]["certificate"] = invertibility_json(e.report);
        j["error"]["note"] =
            "the certified region is smaller than the true frame/invertibility region";
        err << j.dump(2) << "\n";
        return kExitNumerical;
    } catch (const io_error& e) {
        err << make_error("io", e.what()).dump(2) << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        err << make_error("config", e.what()).dump(2) << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << make_error("internal", e.what()).dump(2) << "\n";
        return kExitNumerical;
    }
}

}  // namespace persym::cli
