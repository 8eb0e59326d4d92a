#include "persym/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace persym {

double ell1_v_norm(const PeriodicSymbol& p, const PolynomialWeight& v) {
    double s = 0.0;
    for (const auto& [kappa, c] : p.coeffs) {
        auto mu = p.L.dual_point(kappa);
        s += v(symplectic_apply(mu)) * std::abs(c);
    }
    return s;
}

BoundReport continuity_bound(const PeriodicSymbol& p, const PolynomialWeight& v, double C,
                             std::optional<double> measured_norm) {
    if (!(C > 0.0)) throw std::invalid_argument("continuity_bound: C must be positive");
    BoundReport rep;
    rep.ell1_v = ell1_v_norm(p, v);
    rep.C = C;
    rep.bound = C * rep.ell1_v;
    rep.measured_norm = measured_norm;
    rep.pass = !measured_norm || *measured_norm <= rep.bound * (1.0 + 1e-9);
    return rep;
}

namespace {

GridSignal random_like(const GridSignal& tmpl, std::uint64_t seed) {
    SplitMix64 rng(seed);
    GridSignal v(tmpl.dim, tmpl.extent, tmpl.npoints);
    for (cplx& x : v.values) x = rng.gaussian();
    return v;
}

std::vector<double> weight_on_grid(const GridSignal& tmpl, const ModerateWeight& m) {
    std::vector<double> w(tmpl.size());
    for (std::size_t flat = 0; flat < tmpl.size(); ++flat) {
        auto t = tmpl.node(flat);
        std::vector<double> z(2 * static_cast<std::size_t>(tmpl.dim), 0.0);
        std::copy(t.begin(), t.end(), z.begin());
        w[flat] = m(z);
    }
    return w;
}

constexpr std::uint64_t kPowerIterationSeed = 0x70657273796d3031ULL;

}  // namespace

NormEstimate operator_norm_estimate(const OperatorSpec& spec, const GridSignal& grid_template,
                                    int iters, const ModerateWeight* m) {
    if (iters < 10) throw std::invalid_argument("operator_norm_estimate: need iters >= 10");
    std::vector<double> w;
    if (m) w = weight_on_grid(grid_template, *m);

    // On L^2_m the norm equals the plain L^2 norm of M_m Op M_{1/m}.
    auto forward = [&](const GridSignal& u) {
        if (!m) return apply_series(spec, u);
        GridSignal t = u;
        for (std::size_t i = 0; i < t.size(); ++i) t.values[i] /= w[i];
        t = apply_series(spec, t);
        for (std::size_t i = 0; i < t.size(); ++i) t.values[i] *= w[i];
        return t;
    };
    auto backward = [&](const GridSignal& u) {
        if (!m) return apply_adjoint(spec, u);
        GridSignal t = u;
        for (std::size_t i = 0; i < t.size(); ++i) t.values[i] *= w[i];
        t = apply_adjoint(spec, t);
        for (std::size_t i = 0; i < t.size(); ++i) t.values[i] /= w[i];
        return t;
    };

    GridSignal v = random_like(grid_template, kPowerIterationSeed);
    double nv = l2_norm(v);
    if (nv == 0.0) return {0.0, 0, true, 0.0};
    v = cplx(1.0 / nv, 0.0) * v;

    NormEstimate est;
    double prev = -1.0;
    for (int it = 1; it <= iters; ++it) {
        GridSignal av = forward(v);
        double sigma = l2_norm(av);
        est.value = sigma;
        est.iterations = it;
        if (sigma == 0.0) { est.converged = true; return est; }
        est.last_rel_change = prev < 0.0 ? 1.0 : std::abs(sigma - prev) / sigma;
        if (prev >= 0.0 && est.last_rel_change <= 1e-6) {
            est.converged = true;
            return est;
        }
        prev = sigma;
        GridSignal u = backward(av);
        double nu = l2_norm(u);
        if (nu == 0.0) { est.converged = true; return est; }
        v = cplx(1.0 / nu, 0.0) * u;
    }
    return est;
}

InvertibilityReport invertibility_check(const PeriodicSymbol& p, const PolynomialWeight& v,
                                        double C) {
    if (!(C > 0.0)) throw std::invalid_argument("invertibility_check: C must be positive");
    InvertibilityReport rep;
    rep.c0 = p.coefficient(MultiIndex(std::vector<int>(static_cast<std::size_t>(p.dim()), 0)));
    double tail = 0.0;
    for (const auto& [kappa, c] : p.coeffs) {
        if (kappa.is_zero()) continue;
        auto mu = p.L.dual_point(kappa);
        tail += v(symplectic_apply(mu)) * std::abs(c);
    }
    rep.tail = tail;
    rep.threshold = std::abs(rep.c0) / C;
    rep.invertible = rep.c0 != cplx(0.0, 0.0) && tail < rep.threshold;
    if (rep.invertible) {
        std::vector<double> zero(static_cast<std::size_t>(p.dim()), 0.0);
        double v0 = v(zero);
        double denom = (1.0 + C * v0) * std::abs(rep.c0) - C * ell1_v_norm(p, v);
        if (denom > 1e-12) rep.inverse_norm_bound = 1.0 / denom;
    }
    return rep;
}

NeumannResult neumann_inverse_apply(const OperatorSpec& spec, const GridSignal& f, int terms,
                                    const PolynomialWeight& v, double C,
                                    double residual_tolerance, Diagnostics* diag) {
    if (terms < 1) throw std::invalid_argument("neumann_inverse_apply: need terms >= 1");
    InvertibilityReport cert = invertibility_check(spec.symbol, v, C);
    if (!cert.invertible) throw not_invertible_error(cert);

    const cplx inv_c0 = cplx(1.0, 0.0) / cert.c0;
    // Horner accumulation: y <- f + (I - Op/c0) y sums one extra power per pass.
    GridSignal y = f;
    for (int k = 1; k < terms; ++k) {
        GridSignal opy = apply_series(spec, y, diag);
        GridSignal correction = y - inv_c0 * opy;
        y = f + correction;
    }
    NeumannResult res{inv_c0 * y, 0.0, 0.0, terms, cert};

    double nf = l2_norm(f);
    if (nf > 0.0) {
        GridSignal back = apply_series(spec, res.result, diag);
        res.residual = l2_norm(back - f) / nf;
    }
    res.rho = C * cert.tail / std::abs(cert.c0);
    if (res.residual > residual_tolerance)
        maybe_warn(diag, "neumann_inverse_apply: residual " + std::to_string(res.residual) +
                             " above tolerance after " + std::to_string(terms) +
                             " terms (rho = " + std::to_string(res.rho) + ")");
    return res;
}

namespace {

double weighted_l1(const GridSignal& f, const PolynomialWeight& v) {
    double cell = std::pow(f.spacing(), f.dim);
    double s = 0.0;
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        auto t = f.node(flat);
        s += v(t) * std::abs(f.values[flat]) * cell;
    }
    return s;
}

}  // namespace

std::pair<GridSignal, WitnessReport> multiplier_necessity_witness(const PeriodicSymbol& sigma,
                                                                  const PolynomialWeight& v,
                                                                  double T, int N) {
    const PeriodMatrix& P = sigma.L;
    int d = P.dim();

    // u(x) = |det P| psi(P^T x) / v(x), supported on P^{-T}[0,1]^d.
    auto u_eval = [&](std::span<const double> x) -> double {
        auto y = P.apply_transpose(x);
        double psi = unit_cube_bump(y);
        if (psi == 0.0) return 0.0;
        return std::abs(P.det()) * psi / v(x);
    };
    GridSignal u = GridSignal::sample(d, T, N, [&](std::span<const double> x) {
        return cplx(u_eval(x), 0.0);
    });

    WitnessReport rep;
    rep.norm_u = weighted_l1(u, v);

    // sigma(D) u by direct summation of analytically translated copies.
    GridSignal su(d, T, N);
    std::vector<std::pair<std::vector<double>, cplx>> shifts;
    for (const auto& [k, c] : sigma.coeffs) shifts.emplace_back(P.dual_point(k), c);
    std::vector<double> pt(static_cast<std::size_t>(d));
    for (std::size_t flat = 0; flat < su.size(); ++flat) {
        auto x = su.node(flat);
        cplx acc(0.0, 0.0);
        for (const auto& [mu, c] : shifts) {
            for (int a = 0; a < d; ++a)
                pt[static_cast<std::size_t>(a)] = x[static_cast<std::size_t>(a)] +
                                                  mu[static_cast<std::size_t>(a)];
            acc += c * u_eval(pt);
        }
        su.values[flat] = acc;
    }
    rep.lhs = weighted_l1(su, v);

    double i_u = 0.0;  // integral of |u| over its cell
    double cell = std::pow(u.spacing(), d);
    for (const cplx& val : u.values) i_u += std::abs(val) * cell;

    // sup_{y in P0} v(P^{-T}k) / v(y - P^{-T}k) <= 2^{s/2} sup_{P0} v
    // (moderation), with sup over the cell attained at a corner.
    double sup_v_cell = 0.0;
    std::vector<double> corner(static_cast<std::size_t>(d));
    for (std::size_t mask = 0; mask < (static_cast<std::size_t>(1) << d); ++mask) {
        for (int a = 0; a < d; ++a)
            corner[static_cast<std::size_t>(a)] = (mask >> a) & 1 ? 1.0 : 0.0;
        sup_v_cell = std::max(sup_v_cell, v(P.apply_inv_transpose(corner)));
    }
    rep.K = std::pow(2.0, 0.5 * v.s) * sup_v_cell / i_u;

    for (const auto& [k, c] : sigma.coeffs)
        rep.rhs_unscaled += std::abs(c) * v(P.dual_point(k));
    rep.rhs = rep.rhs_unscaled / rep.K;
    rep.holds = rep.lhs >= rep.rhs - 1e-6;
    return {std::move(u), rep};
}

cplx square_wave_coefficient(int h) {
    if (h == 0) return {0.5, 0.0};
    if (h % 2 == 0) return {0.0, 0.0};
    return {0.0, -1.0 / (std::numbers::pi * h)};
}

namespace {

// Partial Fourier sum of the half-interval indicator at x.
double nu_partial(int H, double x) {
    double s = 0.5;
    for (int h = 1; h <= H; h += 2)
        s += 2.0 / (std::numbers::pi * h) * std::sin(two_pi * h * x);
    return s;
}

double nu_supremum(int H) {
    int samples = std::max(4096, 32 * H);
    double best = 0.0, xb = 0.0;
    for (int j = 0; j < samples; ++j) {
        double x = static_cast<double>(j) / samples;
        double val = nu_partial(H, x);
        if (val > best) { best = val; xb = x; }
    }
    double lo = xb - 1.0 / samples, hi = xb + 1.0 / samples;
    for (int it = 0; it < 200; ++it) {
        double m1 = lo + 0.381966 * (hi - lo);
        double m2 = hi - 0.381966 * (hi - lo);
        if (nu_partial(H, m1) < nu_partial(H, m2)) lo = m1;
        else hi = m2;
    }
    return nu_partial(H, 0.5 * (lo + hi));
}

}  // namespace

CounterexampleReport counterexample_demo(const std::vector<int>& truncations) {
    CounterexampleReport rep;
    // Fixed 3-coefficient multiplier: sigma(w) = 1 + 0.5 cos(2 pi w).
    const double sigma_c0 = 1.0, sigma_c1 = 0.25;
    rep.sigma_coefficient_sum = sigma_c0 + 2.0 * sigma_c1;

    const double T = 2.0;
    const int N = 2048;
    GridSignal tmpl(1, T, N);

    for (int H : truncations) {
        CounterexampleRow row;
        row.H = H;
        for (int h = -H; h <= H; ++h) row.partial_sum += std::abs(square_wave_coefficient(h));
        row.sup_nu = nu_supremum(H);
        row.exact_norm = row.sup_nu * rep.sigma_coefficient_sum;
        row.bound = row.sup_nu * rep.sigma_coefficient_sum;

        // Discretized factorized operator u -> nu_H . (sigma(D) u); at tau = 0
        // the Kohn-Nirenberg operator of nu(x) sigma(w) splits exactly this way.
        std::vector<double> nu_grid(static_cast<std::size_t>(N));
        for (int j = 0; j < N; ++j) nu_grid[static_cast<std::size_t>(j)] =
            nu_partial(H, tmpl.coord(j));
        GridSignal freq_probe = dft(tmpl, FftDirection::forward);
        std::vector<double> sigma_grid(static_cast<std::size_t>(N));
        for (int j = 0; j < N; ++j) {
            double w = freq_probe.coord(j);
            sigma_grid[static_cast<std::size_t>(j)] = sigma_c0 + 2.0 * sigma_c1 *
                                                      std::cos(two_pi * w);
        }
        auto apply_fwd = [&](const GridSignal& x) {
            GridSignal spec = dft(x, FftDirection::forward);
            for (int j = 0; j < N; ++j)
                spec.values[static_cast<std::size_t>(j)] *= sigma_grid[static_cast<std::size_t>(j)];
            GridSignal out = dft(spec, FftDirection::inverse);
            for (int j = 0; j < N; ++j)
                out.values[static_cast<std::size_t>(j)] *= nu_grid[static_cast<std::size_t>(j)];
            return out;
        };
        auto apply_adj = [&](const GridSignal& x) {
            GridSignal t = x;
            for (int j = 0; j < N; ++j)
                t.values[static_cast<std::size_t>(j)] *= nu_grid[static_cast<std::size_t>(j)];
            GridSignal spec = dft(t, FftDirection::forward);
            for (int j = 0; j < N; ++j)
                spec.values[static_cast<std::size_t>(j)] *= sigma_grid[static_cast<std::size_t>(j)];
            return dft(spec, FftDirection::inverse);
        };

        GridSignal v = random_like(tmpl, kPowerIterationSeed);
        v = cplx(1.0 / l2_norm(v), 0.0) * v;
        double prev = -1.0, sigma_est = 0.0;
        for (int it = 0; it < 600; ++it) {
            GridSignal av = apply_fwd(v);
            sigma_est = l2_norm(av);
            if (prev >= 0.0 && std::abs(sigma_est - prev) <= 1e-7 * sigma_est) break;
            prev = sigma_est;
            GridSignal u = apply_adj(av);
            double nu_norm = l2_norm(u);
            if (nu_norm == 0.0) break;
            v = cplx(1.0 / nu_norm, 0.0) * u;
        }
        row.power_estimate = sigma_est;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace persym
