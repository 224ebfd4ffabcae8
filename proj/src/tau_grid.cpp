#include "slowlight/tau_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "slowlight/error.hpp"

namespace slowlight {

TauGrid::TauGrid(double tau_min, double tau_max, std::size_t n) {
    if (!std::isfinite(tau_min) || !std::isfinite(tau_max))
        throw GridError("tau grid bounds must be finite");
    if (!(tau_min < 0.0 && tau_max > 0.0))
        throw GridError("tau grid must satisfy tau_min < 0 < tau_max");
    if (n < 3) throw GridError("tau grid needs at least 3 points");
    h_ = (tau_max - tau_min) / static_cast<double>(n - 1);
    n_ = n;
    const double j0 = -tau_min / h_;
    const double r = std::round(j0);
    if (std::abs(j0 - r) > 1e-9)
        throw GridError("tau = 0 must be a grid node (tau_min / h is not an integer)");
    zero_ = static_cast<std::size_t>(r);
}

TauGrid TauGrid::with_spacing(double tau_min, double tau_max, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw GridError("tau grid spacing must be positive");
    if (!(tau_min < 0.0 && tau_max > 0.0))
        throw GridError("tau grid must satisfy tau_min < 0 < tau_max");
    const auto left = static_cast<std::size_t>(std::ceil(-tau_min / h - 1e-9));
    const auto right = static_cast<std::size_t>(std::ceil(tau_max / h - 1e-9));
    TauGrid g;
    g.h_ = h;
    g.zero_ = left;
    g.n_ = left + right + 1;
    if (g.n_ < 3) throw GridError("tau grid needs at least 3 points");
    return g;
}

std::optional<std::size_t> TauGrid::node_index(double t) const {
    const double j = t / h_ + static_cast<double>(zero_);
    const double r = std::round(j);
    if (std::abs(j - r) > 1e-9 || r < 0.0 || r > static_cast<double>(n_ - 1)) return std::nullopt;
    return static_cast<std::size_t>(r);
}

std::size_t TauGrid::interval_index(double t) const {
    const double j = std::floor(t / h_ + static_cast<double>(zero_));
    if (j <= 0.0) return 0;
    return std::min(static_cast<std::size_t>(j), n_ - 2);
}

Segmentation Segmentation::make(const TauGrid& g, std::span<const double> breakpoints) {
    Segmentation s;
    s.bounds = {0, g.zero_index(), g.size() - 1};
    for (double b : breakpoints) {
        if (b <= g.tau_min() || b >= g.tau_max()) continue;
        const auto j = g.node_index(b);
        if (!j)
            throw GridError("field breakpoint tau = " + std::to_string(b) +
                            " does not fall on a grid node");
        s.bounds.push_back(*j);
    }
    std::sort(s.bounds.begin(), s.bounds.end());
    s.bounds.erase(std::unique(s.bounds.begin(), s.bounds.end()), s.bounds.end());
    return s;
}

bool Segmentation::is_bound(std::size_t j) const {
    return std::binary_search(bounds.begin(), bounds.end(), j);
}

cplx PiecewiseSamples::at(std::size_t j, bool from_right) const {
    // segment whose closed range holds j, preferring the one on the requested side
    auto it = std::upper_bound(seg.bounds.begin(), seg.bounds.end(), j);
    std::size_t s = static_cast<std::size_t>(std::distance(seg.bounds.begin(), it)) - 1;
    if (s >= seg.count()) s = seg.count() - 1;
    if (!from_right && j == seg.first(s) && s > 0) --s;
    return values[s][j - seg.first(s)];
}

cplx PiecewiseSamples::mean_at(std::size_t j) const { return 0.5 * (at(j, false) + at(j, true)); }

namespace {

// int_0^1 exp(-x (1 - u)) u^p du
cplx moment(cplx x, int p) {
    cplx term = 1.0 / static_cast<double>(p + 1);
    cplx sum = term;
    for (int m = 1; m < 80; ++m) {
        term *= -x / static_cast<double>(p + m + 1);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return sum;
}

// monomial coefficients of the Lagrange basis polynomial for node r
std::vector<double> lagrange_coeffs(std::span<const int> nodes, std::size_t r) {
    std::vector<double> c{1.0};
    double denom = 1.0;
    for (std::size_t q = 0; q < nodes.size(); ++q) {
        if (q == r) continue;
        std::vector<double> next(c.size() + 1, 0.0);
        for (std::size_t p = 0; p < c.size(); ++p) {
            next[p + 1] += c[p];
            next[p] -= nodes[q] * c[p];
        }
        c = std::move(next);
        denom *= nodes[r] - nodes[q];
    }
    for (double& v : c) v /= denom;
    return c;
}

constexpr int kStencil4[3][4] = {{-1, 0, 1, 2}, {0, 1, 2, 3}, {-2, -1, 0, 1}};
constexpr int kStencil3[2][3] = {{0, 1, 2}, {-1, 0, 1}};
constexpr int kStencil2[2] = {0, 1};

}  // namespace

ProductRule::ProductRule(cplx x, double h) : x_(x), h_(h), decay_(std::exp(-x)) {
    if (std::abs(x) > 1.0) throw GridError("product rule requires |k| h <= 1");
    for (int t = 0; t < 3; ++t) w4_[t] = weights(kStencil4[t]);
    for (int t = 0; t < 2; ++t) w3_[t] = weights(kStencil3[t]);
    w2_ = weights(kStencil2);
}

std::vector<cplx> ProductRule::weights(std::span<const int> offsets) const {
    std::vector<cplx> m(offsets.size());
    for (std::size_t p = 0; p < m.size(); ++p) m[p] = moment(x_, static_cast<int>(p));
    std::vector<cplx> w(offsets.size());
    for (std::size_t r = 0; r < offsets.size(); ++r) {
        const auto c = lagrange_coeffs(offsets, r);
        cplx acc = 0.0;
        for (std::size_t p = 0; p < c.size(); ++p) acc += c[p] * m[p];
        w[r] = h_ * acc;
    }
    return w;
}

cplx ProductRule::increment(const PiecewiseSamples& f, std::size_t s, std::size_t j) const {
    const std::size_t lo = f.seg.first(s);
    const std::size_t hi = f.seg.last(s);
    const auto& v = f.values[s];
    const std::size_t m = hi - lo;
    const std::vector<cplx>* w = nullptr;
    std::size_t start = lo;
    if (m >= 3) {
        start = std::clamp(j == 0 ? lo : j - 1, lo, hi - 3);
        const auto off = static_cast<std::ptrdiff_t>(start) - static_cast<std::ptrdiff_t>(j);
        w = off == -1 ? &w4_[0] : off == 0 ? &w4_[1] : &w4_[2];
    } else if (m == 2) {
        w = (j == lo) ? &w3_[0] : &w3_[1];
    } else {
        w = &w2_;
    }
    cplx acc = 0.0;
    for (std::size_t r = 0; r < w->size(); ++r) acc += (*w)[r] * v[start - lo + r];
    return acc;
}

std::vector<cplx> ProductRule::causal(const PiecewiseSamples& f, cplx initial) const {
    const std::size_t n = f.seg.bounds.back() + 1;
    std::vector<cplx> y(n);
    y[0] = initial;
    for (std::size_t s = 0; s < f.seg.count(); ++s)
        for (std::size_t j = f.seg.first(s); j < f.seg.last(s); ++j)
            y[j + 1] = decay_ * y[j] + increment(f, s, j);
    return y;
}

std::vector<cplx> ProductRule::anticausal(const PiecewiseSamples& f, cplx final_value) const {
    const std::size_t last = f.seg.bounds.back();
    PiecewiseSamples rev;
    for (auto it = f.seg.bounds.rbegin(); it != f.seg.bounds.rend(); ++it)
        rev.seg.bounds.push_back(last - *it);
    for (auto it = f.values.rbegin(); it != f.values.rend(); ++it)
        rev.values.emplace_back(it->rbegin(), it->rend());
    auto y = causal(rev, final_value);
    std::reverse(y.begin(), y.end());
    return y;
}

std::vector<cplx> cumulative_integral(const TauGrid& g, const PiecewiseSamples& f, cplx initial) {
    return ProductRule(0.0, g.h()).causal(f, initial);
}

cplx integrate(const TauGrid& g, const PiecewiseSamples& f) { return cumulative_integral(g, f).back(); }

}  // namespace slowlight
