#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "adanav/core/error.hpp"
#include "adanav/subgoal/scan.hpp"

namespace adanav {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

// Weighted point set; masses are nonnegative and sum to 1 within 1e-9.
struct DiscreteDistribution {
    std::vector<Point2> points;
    std::vector<double> masses;

    void validate() const {
        if (points.size() != masses.size() || points.empty())
            throw NotADistribution("DiscreteDistribution: empty or mismatched support");
        double sum = 0.0;
        for (double m : masses) {
            if (m < 0.0) throw NotADistribution("DiscreteDistribution: negative mass");
            sum += m;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw NotADistribution("DiscreteDistribution: masses must sum to 1");
    }

    // Zero-mass support points carry no transport and are dropped up front.
    DiscreteDistribution pruned() const {
        DiscreteDistribution d;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (masses[i] > 0.0) {
                d.points.push_back(points[i]);
                d.masses.push_back(masses[i]);
            }
        }
        return d;
    }
};

inline DiscreteDistribution distribution_from_headings(const std::vector<double>& headings_deg,
                                                       const std::vector<double>& weights = {}) {
    DiscreteDistribution d;
    if (headings_deg.empty()) throw NotADistribution("distribution_from_headings: empty");
    double total = 0.0;
    for (std::size_t i = 0; i < headings_deg.size(); ++i) {
        double rad = headings_deg[i] * std::numbers::pi / 180.0;
        Point2 p{std::cos(rad), std::sin(rad)};
        double w = weights.empty() ? 1.0 : weights[i];
        total += w;
        // Near-coincident support points are merged: they change the
        // divergence by less than the solver tolerance but degrade Sinkhorn
        // conditioning badly.
        bool merged = false;
        for (std::size_t k = 0; k < d.points.size() && !merged; ++k) {
            double dx = d.points[k].x - p.x, dy = d.points[k].y - p.y;
            if (dx * dx + dy * dy < 1e-4) {
                d.masses[k] += w;
                merged = true;
            }
        }
        if (!merged) {
            d.points.push_back(p);
            d.masses.push_back(w);
        }
    }
    for (double& m : d.masses) m /= total;
    return d;
}

inline DiscreteDistribution distribution_from_subgoals(const SubgoalSet& s) {
    std::vector<double> headings;
    headings.reserve(s.indices.size());
    for (int idx : s.indices) headings.push_back(view_center_heading(idx));
    return distribution_from_headings(headings, s.weights);
}

namespace detail {

// Entropic OT value min <P,C> + eps*KL(P | mu (x) nu) with squared-Euclidean
// ground cost, computed by log-domain Sinkhorn. Returns the dual value
// <f,mu> + <g,nu>, which equals the primal at convergence.
inline double entropic_ot(const DiscreteDistribution& mu, const DiscreteDistribution& nu,
                          double eps, int max_iters, double tol) {
    const std::size_t n = mu.points.size();
    const std::size_t m = nu.points.size();
    std::vector<double> cost(n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            double dx = mu.points[i].x - nu.points[j].x;
            double dy = mu.points[i].y - nu.points[j].y;
            cost[i * m + j] = dx * dx + dy * dy;
        }
    }
    std::vector<double> log_mu(n), log_nu(m);
    for (std::size_t i = 0; i < n; ++i) log_mu[i] = std::log(mu.masses[i]);
    for (std::size_t j = 0; j < m; ++j) log_nu[j] = std::log(nu.masses[j]);

    std::vector<double> f(n, 0.0), g(m, 0.0), buf(std::max(n, m));
    double residual = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iters; ++it) {
        // f-update: row log-sum-exp
        for (std::size_t i = 0; i < n; ++i) {
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < m; ++j) {
                buf[j] = (g[j] - cost[i * m + j]) / eps + log_nu[j];
                mx = std::max(mx, buf[j]);
            }
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += std::exp(buf[j] - mx);
            f[i] = -eps * (mx + std::log(s));
        }
        // g-update: column log-sum-exp
        for (std::size_t j = 0; j < m; ++j) {
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                buf[i] = (f[i] - cost[i * m + j]) / eps + log_mu[i];
                mx = std::max(mx, buf[i]);
            }
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += std::exp(buf[i] - mx);
            g[j] = -eps * (mx + std::log(s));
        }
        // After a g-update column marginals are exact; check the rows.
        residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < m; ++j)
                row += std::exp((f[i] + g[j] - cost[i * m + j]) / eps + log_mu[i] + log_nu[j]);
            residual = std::max(residual, std::abs(row - mu.masses[i]));
        }
        if (residual <= tol) {
            double value = 0.0;
            for (std::size_t i = 0; i < n; ++i) value += f[i] * mu.masses[i];
            for (std::size_t j = 0; j < m; ++j) value += g[j] * nu.masses[j];
            return value;
        }
    }
    throw ConvergenceError("sinkhorn: marginal violation above tolerance after max iterations",
                           residual);
}

inline bool distribution_less(const DiscreteDistribution& a, const DiscreteDistribution& b) {
    if (a.points.size() != b.points.size()) return a.points.size() < b.points.size();
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        if (a.points[i].x != b.points[i].x) return a.points[i].x < b.points[i].x;
        if (a.points[i].y != b.points[i].y) return a.points[i].y < b.points[i].y;
        if (a.masses[i] != b.masses[i]) return a.masses[i] < b.masses[i];
    }
    return false;
}

}  // namespace detail

// Debiased Sinkhorn divergence
//   S(mu, nu) = OT_eps(mu, nu) - OT_eps(mu, mu)/2 - OT_eps(nu, nu)/2
// with squared-Euclidean ground cost. Arguments are canonicalized so the
// result is exactly symmetric in (mu, nu).
inline double sinkhorn_divergence(const DiscreteDistribution& mu_in,
                                  const DiscreteDistribution& nu_in, double eps = 0.05,
                                  int max_iters = 500, double tol = 1e-6) {
    if (eps <= 0.0) throw RangeError("sinkhorn_divergence: eps must be > 0");
    mu_in.validate();
    nu_in.validate();
    DiscreteDistribution mu = mu_in.pruned();
    DiscreteDistribution nu = nu_in.pruned();
    if (detail::distribution_less(nu, mu)) std::swap(mu, nu);

    double ot_mn = detail::entropic_ot(mu, nu, eps, max_iters, tol);
    double ot_mm = detail::entropic_ot(mu, mu, eps, max_iters, tol);
    double ot_nn = detail::entropic_ot(nu, nu, eps, max_iters, tol);
    return ot_mn - 0.5 * ot_mm - 0.5 * ot_nn;
}

// One evaluation sample: a scan plus the ground-truth navigable headings.
struct SgmSample {
    OccupancyScan scan;
    std::vector<double> truth_headings_deg;
};

struct SgmEvalResult {
    double mean_divergence = 0.0;
    int samples = 0;
    int empty_predictions = 0;  // flagged: scored against the uniform fallback
};

// Mean Sinkhorn divergence between predicted and ground-truth subgoal
// distributions. An empty prediction is scored against the uniform
// distribution over all 36 view sectors and flagged.
inline SgmEvalResult evaluate_sgm(const std::vector<SgmSample>& samples, double clearance_deg,
                                  double min_depth, double eps = 0.05, int max_iters = 500) {
    if (samples.empty()) throw EmptySample("evaluate_sgm: empty sample");
    SgmEvalResult res;
    for (const auto& s : samples) {
        DiscreteDistribution truth = distribution_from_headings(s.truth_headings_deg);
        SubgoalSet pred = scan_to_subgoals(s.scan, clearance_deg, min_depth);
        DiscreteDistribution mu;
        if (pred.empty()) {
            ++res.empty_predictions;
            std::vector<double> all;
            for (int i = 1; i <= kViewsPerPanorama; ++i)
                all.push_back(view_center_heading(i));
            mu = distribution_from_headings(all);
        } else {
            mu = distribution_from_subgoals(pred);
        }
        res.mean_divergence += sinkhorn_divergence(mu, truth, eps, max_iters);
        ++res.samples;
    }
    res.mean_divergence /= static_cast<double>(res.samples);
    return res;
}

}  // namespace adanav
