#include "persym/gabor.hpp"

#include <algorithm>
#include <cmath>

namespace persym {

std::size_t StftTable::x_points() const {
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= x_nodes.size();
    return n;
}

std::size_t StftTable::w_points() const {
    std::size_t n = 1;
    for (int i = 0; i < dim; ++i) n *= w_nodes.size();
    return n;
}

namespace {

std::vector<double> multi_node(const std::vector<double>& axis_nodes, int d, std::size_t flat) {
    std::vector<double> out(static_cast<std::size_t>(d));
    std::size_t n = axis_nodes.size();
    for (int a = d - 1; a >= 0; --a) {
        out[static_cast<std::size_t>(a)] = axis_nodes[flat % n];
        flat /= n;
    }
    return out;
}

}  // namespace

StftTable stft(const GridSignal& f, const GridSignal& g, const StftGrid& grid,
               Diagnostics* diag) {
    if (l2_norm(g) <= 0.0) throw std::invalid_argument("stft: zero window");
    if (f.dim != g.dim || f.npoints != g.npoints || f.extent != g.extent)
        throw std::invalid_argument("stft: window layout must match the signal");
    if (grid.x_count < 1 || grid.w_count < 1 || grid.w_count > f.npoints ||
        grid.w_count % 2 != 0)
        throw std::invalid_argument("stft: bad grid (w_count must be even and <= npoints)");

    StftTable table;
    table.dim = f.dim;
    table.x_nodes.resize(static_cast<std::size_t>(grid.x_count));
    for (int j = 0; j < grid.x_count; ++j)
        table.x_nodes[static_cast<std::size_t>(j)] = -0.5 * f.extent + j * f.extent / grid.x_count;
    // Centered native bins.
    table.w_nodes.resize(static_cast<std::size_t>(grid.w_count));
    for (int k = 0; k < grid.w_count; ++k)
        table.w_nodes[static_cast<std::size_t>(k)] = (k - grid.w_count / 2) / f.extent;

    std::size_t xp = table.x_points(), wp = table.w_points();
    table.values.resize(xp * wp);

    int bin_off = (f.npoints - grid.w_count) / 2;
    parallel_for(xp, [&](std::size_t xf) {
        auto x = multi_node(table.x_nodes, f.dim, xf);
        GridSignal shifted = translate(g, x, diag);
        GridSignal prod = f;
        for (std::size_t i = 0; i < prod.size(); ++i)
            prod.values[i] *= std::conj(shifted.values[i]);
        GridSignal spec = dft(prod, FftDirection::forward);
        // Gather the centered w_count^d block.
        std::vector<int> idx(static_cast<std::size_t>(f.dim), 0);
        for (std::size_t wf = 0; wf < wp; ++wf) {
            std::size_t src = 0;
            for (int a = 0; a < f.dim; ++a)
                src = src * static_cast<std::size_t>(f.npoints) +
                      static_cast<std::size_t>(bin_off + idx[static_cast<std::size_t>(a)]);
            table.values[xf * wp + wf] = spec.values[src];
            int a = f.dim - 1;
            while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == grid.w_count) {
                idx[static_cast<std::size_t>(a)] = 0;
                --a;
            }
        }
    });
    return table;
}

double modulation_norm(const GridSignal& f, const GridSignal& g, double p, double q,
                       const ModerateWeight& m, const StftGrid& grid, Diagnostics* diag) {
    if (!(p >= 1.0) || !(q >= 1.0))
        throw std::invalid_argument("modulation_norm: exponents must be >= 1");
    StftTable table = stft(f, g, grid, diag);
    std::size_t xp = table.x_points(), wp = table.w_points();
    double cell_x = std::pow(table.x_spacing(), f.dim);
    double cell_w = std::pow(table.w_spacing(), f.dim);

    std::vector<double> z(2 * static_cast<std::size_t>(f.dim));
    double outer = 0.0, outer_max = 0.0;
    for (std::size_t wf = 0; wf < wp; ++wf) {
        auto w = multi_node(table.w_nodes, f.dim, wf);
        double inner = 0.0, inner_max = 0.0;
        for (std::size_t xf = 0; xf < xp; ++xf) {
            auto x = multi_node(table.x_nodes, f.dim, xf);
            std::copy(x.begin(), x.end(), z.begin());
            std::copy(w.begin(), w.end(), z.begin() + f.dim);
            double val = m(z) * std::abs(table.at(xf, wf));
            if (std::isinf(p)) inner_max = std::max(inner_max, val);
            else inner += std::pow(val, p) * cell_x;
        }
        double slice = std::isinf(p) ? inner_max : std::pow(inner, 1.0 / p);
        if (std::isinf(q)) outer_max = std::max(outer_max, slice);
        else outer += std::pow(slice, q) * cell_w;
    }
    return std::isinf(q) ? outer_max : std::pow(outer, 1.0 / q);
}

FrameOperator::FrameOperator(const GaborSystem& sys, Diagnostics* diag)
    : sys_(sys), lattice_(enumerate_truncation(sys.H, 2 * sys.g.dim)) {
    windows_.reserve(lattice_.size());
    int d = sys_.g.dim;
    for (const MultiIndex& hk : lattice_) {
        std::vector<double> shift(static_cast<std::size_t>(d)), mod(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            shift[static_cast<std::size_t>(a)] = sys_.alpha * hk.k[static_cast<std::size_t>(a)];
            mod[static_cast<std::size_t>(a)] =
                sys_.beta * hk.k[static_cast<std::size_t>(d + a)];
        }
        windows_.push_back(modulate(translate(sys_.g, shift, diag), mod));
    }
}

std::vector<cplx> FrameOperator::coefficients(const GridSignal& f) const {
    std::vector<cplx> out;
    out.reserve(windows_.size());
    for (const GridSignal& w : windows_) out.push_back(inner(f, w));
    return out;
}

GridSignal FrameOperator::synthesize_with(const std::vector<cplx>& coeff, const GridSignal& gamma,
                                          Diagnostics* diag) const {
    if (coeff.size() != lattice_.size())
        throw std::invalid_argument("synthesize_with: coefficient count mismatch");
    int d = gamma.dim;
    std::vector<std::vector<cplx>> buffers;
    buffers.reserve(coeff.size());
    for (std::size_t j = 0; j < coeff.size(); ++j) {
        const MultiIndex& hk = lattice_[j];
        std::vector<double> shift(static_cast<std::size_t>(d)), mod(static_cast<std::size_t>(d));
        for (int a = 0; a < d; ++a) {
            shift[static_cast<std::size_t>(a)] = sys_.alpha * hk.k[static_cast<std::size_t>(a)];
            mod[static_cast<std::size_t>(a)] = sys_.beta * hk.k[static_cast<std::size_t>(d + a)];
        }
        GridSignal w = modulate(translate(gamma, shift, diag), mod);
        for (cplx& v : w.values) v *= coeff[j];
        buffers.push_back(std::move(w.values));
    }
    GridSignal out(gamma.dim, gamma.extent, gamma.npoints);
    out.values = pairwise_tree_sum(std::move(buffers), out.size());
    return out;
}

GridSignal FrameOperator::apply(const GridSignal& f) const {
    std::vector<std::vector<cplx>> buffers;
    buffers.reserve(windows_.size());
    for (const GridSignal& w : windows_) {
        cplx c = inner(f, w);
        std::vector<cplx> buf(w.values);
        for (cplx& v : buf) v *= c;
        buffers.push_back(std::move(buf));
    }
    GridSignal out(f.dim, f.extent, f.npoints);
    out.values = pairwise_tree_sum(std::move(buffers), out.size());
    return out;
}

GridSignal frame_operator_direct(const GaborSystem& sys, const GridSignal& f, Diagnostics* diag) {
    return FrameOperator(sys, diag).apply(f);
}

std::function<cplx(std::span<const double>)> gaussian_window_evaluator(int d) {
    return [d](std::span<const double> t) {
        double q = norm_sq(t);
        return cplx(std::pow(2.0, 0.25 * d) * std::exp(-std::numbers::pi * q), 0.0);
    };
}

PeriodicSymbol gabor_frame_symbol(const GaborSystem& sys, int K, int M) {
    TrigInterpolant g_interp(sys.g);
    TrigInterpolant ghat_interp(dft(sys.g, FftDirection::forward));
    auto g_eval = [&](std::span<const double> t) { return g_interp(t); };
    auto ghat_eval = [&](std::span<const double> w) { return ghat_interp(w); };
    PeriodCellSamples cell =
        gabor_symbol(g_eval, ghat_eval, sys.alpha, sys.beta, sys.H, sys.g.dim, M);
    return fourier_coefficients(cell, K);
}

DualWindowResult dual_window(const GaborSystem& sys, int terms, int K, int M, Diagnostics* diag) {
    PeriodicSymbol a = gabor_frame_symbol(sys, K, M);
    OperatorSpec spec(std::move(a), 0.0, K);
    PolynomialWeight v0(0.0);
    NeumannResult inv = neumann_inverse_apply(spec, sys.g, terms, v0, 1.0, 1e-6, diag);

    DualWindowResult res{std::move(inv.result), inv.certificate, inv.residual, 0.0, terms};
    GridSignal direct = frame_operator_direct(sys, res.gamma, diag);
    double ng = l2_norm(sys.g);
    res.direct_residual = ng > 0.0 ? l2_norm(direct - sys.g) / ng : 0.0;
    return res;
}

namespace {

// Largest / smallest eigenvalue estimates of the (self-adjoint, PSD) frame
// operator by power iteration and a spectral shift.
std::pair<double, double> frame_bounds_estimate(const FrameOperator& S, const GridSignal& tmpl,
                                                int iters) {
    SplitMix64 rng(0x6761626f72736eULL);
    GridSignal v(tmpl.dim, tmpl.extent, tmpl.npoints);
    for (cplx& x : v.values) x = rng.gaussian();
    v = cplx(1.0 / l2_norm(v), 0.0) * v;

    double lam_max = 0.0;
    for (int it = 0; it < iters; ++it) {
        GridSignal sv = S.apply(v);
        double n = l2_norm(sv);
        if (n == 0.0) return {0.0, 0.0};
        double est = std::real(inner(sv, v));  // Rayleigh quotient, ||v|| = 1
        if (it > 3 && std::abs(est - lam_max) <= 1e-9 * std::max(est, 1e-30)) {
            lam_max = est;
            break;
        }
        lam_max = est;
        v = cplx(1.0 / n, 0.0) * sv;
    }

    // lambda_min(S) = c - lambda_max(c I - S) for c above the spectrum.
    double c = 1.02 * lam_max + 1e-12;
    SplitMix64 rng2(0x6761626f72736fULL);
    GridSignal u(tmpl.dim, tmpl.extent, tmpl.npoints);
    for (cplx& x : u.values) x = rng2.gaussian();
    u = cplx(1.0 / l2_norm(u), 0.0) * u;
    double shifted_max = 0.0;
    for (int it = 0; it < iters; ++it) {
        GridSignal su = S.apply(u);
        GridSignal cu = cplx(c, 0.0) * u - su;
        double n = l2_norm(cu);
        if (n == 0.0) break;
        double est = std::real(inner(cu, u));
        if (it > 3 && std::abs(est - shifted_max) <= 1e-9 * std::max(est, 1e-30)) {
            shifted_max = est;
            break;
        }
        shifted_max = est;
        u = cplx(1.0 / n, 0.0) * cu;
    }
    return {lam_max, c - shifted_max};
}

}  // namespace

std::vector<ScanRow> gabor_scan(const ScanGrid& grid, int H, int K, int M, double T, int N,
                                Diagnostics* diag) {
    if (grid.alpha_count < 1 || grid.beta_count < 1)
        throw std::invalid_argument("gabor_scan: counts must be positive");
    auto g_eval = gaussian_window_evaluator(1);
    PolynomialWeight v0(0.0);

    GridSignal window = GridSignal::sample(1, T, N, [&](std::span<const double> t) {
        return g_eval(t);
    });

    std::vector<ScanRow> rows;
    rows.reserve(static_cast<std::size_t>(grid.alpha_count) *
                 static_cast<std::size_t>(grid.beta_count));
    for (int ia = 0; ia < grid.alpha_count; ++ia) {
        double alpha = grid.alpha_count == 1
                           ? grid.alpha_lo
                           : grid.alpha_lo + ia * (grid.alpha_hi - grid.alpha_lo) /
                                                 (grid.alpha_count - 1);
        for (int ib = 0; ib < grid.beta_count; ++ib) {
            double beta = grid.beta_count == 1
                              ? grid.beta_lo
                              : grid.beta_lo + ib * (grid.beta_hi - grid.beta_lo) /
                                                   (grid.beta_count - 1);
            ScanRow row;
            row.alpha = alpha;
            row.beta = beta;

            PeriodCellSamples cell = gabor_symbol(g_eval, g_eval, alpha, beta, H, 1, M);
            PeriodicSymbol a = fourier_coefficients(cell, K);
            InvertibilityReport cert = invertibility_check(a, v0, 1.0);
            row.c0_abs = std::abs(cert.c0);
            row.tail = cert.tail;
            row.certified = cert.invertible;

            GaborSystem sys(window, alpha, beta, H);
            FrameOperator S(sys, diag);
            auto [lmax, lmin] = frame_bounds_estimate(S, window, 60);
            row.upper_frame_bound = lmax;
            row.lower_frame_bound = lmin;
            row.zone = row.certified ? 0 : (lmin > 1e-3 * std::max(lmax, 1e-30) ? 1 : 2);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace persym
