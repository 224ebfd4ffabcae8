#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "slowlight/model.hpp"

namespace slowlight {

/// Uniform retarded-time grid that always contains tau = 0 as a node.
class TauGrid {
public:
    /// Throws GridError unless tau_min < 0 < tau_max, n >= 3 and tau = 0 falls on a node.
    TauGrid(double tau_min, double tau_max, std::size_t n);

    /// Grid with spacing at most h whose end points are rounded outward to multiples of h.
    static TauGrid with_spacing(double tau_min, double tau_max, double h);

    double tau_min() const noexcept { return tau(0); }
    double tau_max() const noexcept { return tau(n_ - 1); }
    std::size_t size() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    std::size_t zero_index() const noexcept { return zero_; }
    double tau(std::size_t j) const noexcept {
        return (static_cast<double>(j) - static_cast<double>(zero_)) * h_;
    }
    bool contains(double t) const noexcept { return t >= tau_min() && t <= tau_max(); }

    /// Index of the node at t (within 1e-9 h), if any.
    std::optional<std::size_t> node_index(double t) const;
    /// Index j with tau(j) <= t < tau(j+1), clamped to [0, n-2]. Requires contains(t).
    std::size_t interval_index(double t) const;

    bool operator==(const TauGrid& o) const noexcept { return n_ == o.n_ && zero_ == o.zero_ && h_ == o.h_; }

private:
    TauGrid() = default;
    std::size_t n_ = 0;
    std::size_t zero_ = 0;
    double h_ = 0.0;
};

/// Node-index boundaries of the smooth pieces of a grid: the first is 0, the last is n-1 and
/// every interior bound is a breakpoint node (tau = 0 is always one).
struct Segmentation {
    std::vector<std::size_t> bounds;

    /// Throws GridError if a breakpoint inside the grid is not a node.
    static Segmentation make(const TauGrid& g, std::span<const double> breakpoints);

    std::size_t count() const { return bounds.size() - 1; }
    std::size_t first(std::size_t s) const { return bounds[s]; }
    std::size_t last(std::size_t s) const { return bounds[s + 1]; }
    bool is_bound(std::size_t j) const;
};

/// Values of a function that may jump at segment bounds: segment s holds one value per node
/// in [first(s), last(s)], taking one-sided limits from inside the segment.
struct PiecewiseSamples {
    Segmentation seg;
    std::vector<std::vector<cplx>> values;

    /// Limit from the given side at node j; at interior nodes both sides agree.
    cplx at(std::size_t j, bool from_right) const;
    /// Mean of both one-sided limits at node j.
    cplx mean_at(std::size_t j) const;
};

/// Product integration of piecewise-cubic interpolants against exp(-x(1 - u)) on unit intervals.
///
/// With x = i k h, the causal recursion y(tau + h) = exp(-ikh) y(tau) + increment evaluates
/// int_{-inf}^{tau} exp(-ik(tau - s)) f(s) ds exactly for cubic f; with x = 0 the same weights
/// give a fourth-order cumulative quadrature.
class ProductRule {
public:
    /// Requires |x| <= 1.
    ProductRule(cplx x, double h);

    cplx decay() const noexcept { return decay_; }

    /// int_{tau_j}^{tau_{j+1}} exp(-x (tau_{j+1} - s)/h) f(s) ds for j in segment s.
    cplx increment(const PiecewiseSamples& f, std::size_t s, std::size_t j) const;

    /// y_0 = initial, y_{j+1} = decay * y_j + increment_j.
    std::vector<cplx> causal(const PiecewiseSamples& f, cplx initial) const;
    /// y_{n-1} = final, y_j = decay * y_{j+1} + int_{tau_j}^{tau_{j+1}} exp(-x (s - tau_j)/h) f(s) ds.
    std::vector<cplx> anticausal(const PiecewiseSamples& f, cplx final_value) const;

    /// Weights for the Lagrange stencil with the given offsets (relative to the interval start).
    std::vector<cplx> weights(std::span<const int> offsets) const;

private:
    cplx x_;
    double h_;
    cplx decay_;
    // stencils: 4-point starting at offsets -1, 0, -2; 3-point at 0, -1; 2-point at 0
    std::vector<cplx> w4_[3];
    std::vector<cplx> w3_[2];
    std::vector<cplx> w2_;
};

/// Fourth-order cumulative integral from tau_min: result[0] = initial.
std::vector<cplx> cumulative_integral(const TauGrid& g, const PiecewiseSamples& f, cplx initial = {});
/// Fourth-order integral over the whole grid.
cplx integrate(const TauGrid& g, const PiecewiseSamples& f);

/// Samples fn(j, side) into PiecewiseSamples, asking for one-sided limits at segment bounds.
template <class Fn>
PiecewiseSamples sample_piecewise(const Segmentation& seg, Fn&& fn) {
    PiecewiseSamples p{seg, {}};
    p.values.resize(seg.count());
    for (std::size_t s = 0; s < seg.count(); ++s) {
        auto& v = p.values[s];
        v.reserve(seg.last(s) - seg.first(s) + 1);
        for (std::size_t j = seg.first(s); j <= seg.last(s); ++j) {
            const bool from_right = (j < seg.last(s));
            v.push_back(fn(j, from_right));
        }
    }
    return p;
}

}  // namespace slowlight
