#include "persym/signal.hpp"

#include <algorithm>
#include <cmath>

#include "persym/fft.hpp"

namespace persym {

GridSignal::GridSignal(int d, double T, int N) : dim(d), extent(T), npoints(N) {
    if (d < 1) throw std::invalid_argument("GridSignal: dimension must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("GridSignal: extent must be positive");
    if (N < 2) throw std::invalid_argument("GridSignal: need at least 2 points per axis");
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= static_cast<std::size_t>(N);
    values.assign(total, cplx(0.0, 0.0));
}

GridSignal::GridSignal(int d, double T, int N, std::vector<cplx> vals) : GridSignal(d, T, N) {
    if (vals.size() != values.size()) throw std::invalid_argument("GridSignal: value count mismatch");
    for (const cplx& v : vals)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw std::invalid_argument("GridSignal: non-finite sample");
    values = std::move(vals);
}

std::vector<int> GridSignal::unflatten(std::size_t flat) const {
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (int axis = dim - 1; axis >= 0; --axis) {
        idx[static_cast<std::size_t>(axis)] = static_cast<int>(flat % static_cast<std::size_t>(npoints));
        flat /= static_cast<std::size_t>(npoints);
    }
    return idx;
}

std::vector<double> GridSignal::node(std::size_t flat) const {
    auto idx = unflatten(flat);
    std::vector<double> t(static_cast<std::size_t>(dim));
    for (int axis = 0; axis < dim; ++axis)
        t[static_cast<std::size_t>(axis)] = coord(idx[static_cast<std::size_t>(axis)]);
    return t;
}

GridSignal GridSignal::sample(int d, double T, int N,
                              const std::function<cplx(std::span<const double>)>& f) {
    GridSignal out(d, T, N);
    std::vector<double> t(static_cast<std::size_t>(d));
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        for (int axis = 0; axis < d; ++axis)
            t[static_cast<std::size_t>(axis)] = out.coord(idx[static_cast<std::size_t>(axis)]);
        out.values[flat] = f(t);
        int axis = d - 1;
        while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == N) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
    }
    return out;
}

namespace {

// Rotate every axis by N/2: maps centered-node order to zero-first order and
// back (identical for even N).
std::vector<cplx> rotate_half(const std::vector<cplx>& in, int d, int N) {
    std::vector<cplx> out(in.size());
    std::size_t total = in.size();
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t target = 0;
        for (int axis = 0; axis < d; ++axis) {
            int shifted = (idx[static_cast<std::size_t>(axis)] + N / 2) % N;
            target = target * static_cast<std::size_t>(N) + static_cast<std::size_t>(shifted);
        }
        out[target] = in[flat];
        int axis = d - 1;
        while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == N) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
    }
    return out;
}

void check_even(const GridSignal& f) {
    if (f.npoints % 2 != 0)
        throw std::invalid_argument("dft: centered frequency layout requires even N");
}

}  // namespace

GridSignal dft(const GridSignal& f, FftDirection direction) {
    check_even(f);
    std::vector<cplx> work = rotate_half(f.values, f.dim, f.npoints);
    detail::fft_nd(work, f.dim, f.npoints, direction == FftDirection::forward ? -1 : +1);
    work = rotate_half(work, f.dim, f.npoints);

    double out_extent = static_cast<double>(f.npoints) / f.extent;
    GridSignal out(f.dim, out_extent, f.npoints);
    // Both directions are Riemann sums against their kernel: the quadrature
    // cell of the input grid.  Round trip: Delta^d (1/T)^d N^d = 1.
    double scale = std::pow(f.spacing(), f.dim);
    for (std::size_t i = 0; i < work.size(); ++i) out.values[i] = scale * work[i];
    return out;
}

GridSignal modulate(const GridSignal& f, std::span<const double> omega) {
    if (static_cast<int>(omega.size()) != f.dim)
        throw std::invalid_argument("modulate: frequency dimension mismatch");
    if (!all_finite(omega)) throw std::invalid_argument("modulate: non-finite frequency");
    // Separable phase: per-axis tables.
    std::vector<std::vector<cplx>> axis_phase(static_cast<std::size_t>(f.dim));
    for (int axis = 0; axis < f.dim; ++axis) {
        auto& tab = axis_phase[static_cast<std::size_t>(axis)];
        tab.resize(static_cast<std::size_t>(f.npoints));
        for (int j = 0; j < f.npoints; ++j)
            tab[static_cast<std::size_t>(j)] =
                std::polar(1.0, two_pi * omega[static_cast<std::size_t>(axis)] * f.coord(j));
    }
    GridSignal out = f;
    std::vector<int> idx(static_cast<std::size_t>(f.dim), 0);
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        cplx ph(1.0, 0.0);
        for (int axis = 0; axis < f.dim; ++axis)
            ph *= axis_phase[static_cast<std::size_t>(axis)]
                            [static_cast<std::size_t>(idx[static_cast<std::size_t>(axis)])];
        out.values[flat] *= ph;
        int axis = f.dim - 1;
        while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == f.npoints) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
    }
    return out;
}

namespace {

// Relative mass of |f|^2 within distance |x_axis| of the torus seam, per axis.
double seam_mass_fraction(const GridSignal& f, std::span<const double> x) {
    double total = 0.0, seam = 0.0;
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        double w = std::norm(f.values[flat]);
        total += w;
        auto idx = f.unflatten(flat);
        bool in_strip = false;
        for (int axis = 0; axis < f.dim; ++axis) {
            double margin = std::abs(x[static_cast<std::size_t>(axis)]);
            double t = f.coord(idx[static_cast<std::size_t>(axis)]);
            if (f.extent / 2.0 - std::abs(t) < margin) { in_strip = true; break; }
        }
        if (in_strip) seam += w;
    }
    return total > 0.0 ? seam / total : 0.0;
}

}  // namespace

GridSignal translate(const GridSignal& f, std::span<const double> x, Diagnostics* diag) {
    if (static_cast<int>(x.size()) != f.dim)
        throw std::invalid_argument("translate: shift dimension mismatch");
    if (!all_finite(x)) throw std::invalid_argument("translate: non-finite shift");
    if (diag) {
        double frac = seam_mass_fraction(f, x);
        if (frac > 1e-10)
            diag->warn("translate: " + std::to_string(frac) +
                       " of signal mass may wrap across the torus seam");
    }
    GridSignal spec = dft(f, FftDirection::forward);
    // Multiply bin xi by e^{-2pi i xi.x}: separable.
    std::vector<double> neg(x.begin(), x.end());
    for (double& v : neg) v = -v;
    spec = modulate(spec, neg);
    return dft(spec, FftDirection::inverse);
}

GridSignal tfs_apply(const GridSignal& f, const PhasePoint& z, Diagnostics* diag) {
    if (z.dim() != f.dim) throw std::invalid_argument("tfs_apply: phase point dimension mismatch");
    return modulate(translate(f, z.x, diag), z.w);
}

double l2_norm(const GridSignal& f) {
    double s = 0.0;
    for (const cplx& v : f.values) s += std::norm(v);
    return std::sqrt(s * std::pow(f.spacing(), f.dim));
}

cplx inner(const GridSignal& f, const GridSignal& g) {
    if (f.size() != g.size() || f.dim != g.dim)
        throw std::invalid_argument("inner: signal layout mismatch");
    cplx s(0.0, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) s += f.values[i] * std::conj(g.values[i]);
    return s * std::pow(f.spacing(), f.dim);
}

GridSignal operator+(const GridSignal& a, const GridSignal& b) {
    if (a.size() != b.size() || a.dim != b.dim || a.extent != b.extent)
        throw std::invalid_argument("signal +: layout mismatch");
    GridSignal out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] += b.values[i];
    return out;
}

GridSignal operator-(const GridSignal& a, const GridSignal& b) {
    if (a.size() != b.size() || a.dim != b.dim || a.extent != b.extent)
        throw std::invalid_argument("signal -: layout mismatch");
    GridSignal out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] -= b.values[i];
    return out;
}

GridSignal operator*(cplx c, const GridSignal& f) {
    GridSignal out = f;
    for (cplx& v : out.values) v *= c;
    return out;
}

namespace {

double weighted_lp(const GridSignal& g, double p, const std::function<double(std::size_t)>& weight) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp norm: p must be >= 1");
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i)
            mx = std::max(mx, weight(i) * std::abs(g.values[i]));
        return mx;
    }
    double cell = std::pow(g.spacing(), g.dim);
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        s += std::pow(weight(i) * std::abs(g.values[i]), p) * cell;
    return std::pow(s, 1.0 / p);
}

}  // namespace

double lp_m_norm(const GridSignal& f, double p, const ModerateWeight& m) {
    return weighted_lp(f, p, [&](std::size_t flat) {
        auto t = f.node(flat);
        std::vector<double> z(2 * static_cast<std::size_t>(f.dim), 0.0);
        std::copy(t.begin(), t.end(), z.begin());
        return m(z);
    });
}

double flp_m_norm(const GridSignal& f, double p, const ModerateWeight& m) {
    GridSignal spec = dft(f, FftDirection::forward);
    return weighted_lp(spec, p, [&](std::size_t flat) {
        auto xi = spec.node(flat);
        std::vector<double> z(2 * static_cast<std::size_t>(f.dim), 0.0);
        std::copy(xi.begin(), xi.end(), z.begin() + static_cast<std::ptrdiff_t>(f.dim));
        return m(z);
    });
}

double essential_band(const GridSignal& f, double rel_threshold) {
    GridSignal spec = dft(f, FftDirection::forward);
    double mx = 0.0;
    for (const cplx& v : spec.values) mx = std::max(mx, std::abs(v));
    if (mx == 0.0) return 0.0;
    double band = 0.0;
    for (std::size_t flat = 0; flat < spec.size(); ++flat) {
        if (std::abs(spec.values[flat]) <= rel_threshold * mx) continue;
        auto xi = spec.node(flat);
        for (double v : xi) band = std::max(band, std::abs(v));
    }
    return band;
}

TrigInterpolant::TrigInterpolant(const GridSignal& f) : spectrum_(dft(f, FftDirection::forward)) {}

cplx TrigInterpolant::operator()(std::span<const double> t) const {
    if (static_cast<int>(t.size()) != spectrum_.dim)
        throw std::invalid_argument("TrigInterpolant: point dimension mismatch");
    // f(t) = (1/T^d) sum_k F(xi_k) e^{2pi i xi_k . t}; per-axis phase tables.
    int d = spectrum_.dim;
    int N = spectrum_.npoints;
    std::vector<std::vector<cplx>> axis_phase(static_cast<std::size_t>(d));
    for (int axis = 0; axis < d; ++axis) {
        auto& tab = axis_phase[static_cast<std::size_t>(axis)];
        tab.resize(static_cast<std::size_t>(N));
        for (int j = 0; j < N; ++j)
            tab[static_cast<std::size_t>(j)] =
                std::polar(1.0, two_pi * spectrum_.coord(j) * t[static_cast<std::size_t>(axis)]);
    }
    cplx acc(0.0, 0.0);
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (std::size_t flat = 0; flat < spectrum_.size(); ++flat) {
        cplx ph(1.0, 0.0);
        for (int axis = 0; axis < d; ++axis)
            ph *= axis_phase[static_cast<std::size_t>(axis)]
                            [static_cast<std::size_t>(idx[static_cast<std::size_t>(axis)])];
        acc += spectrum_.values[flat] * ph;
        int axis = d - 1;
        while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == N) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
        }
    }
    double freq_spacing = spectrum_.spacing();  // = 1/T
    return acc * std::pow(freq_spacing, d);
}

}  // namespace persym
