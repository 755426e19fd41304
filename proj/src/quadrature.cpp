#include "dualfield/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "dualfield/core.hpp"

namespace dualfield {

static QuadRule compute_gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess for the i-th root of P_n.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence for P_n(x) and P_n'(x).
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;  // roots found in descending order; store ascending
        rule.weights[i] = w;
        rule.nodes[n - 1 - i] = x;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

const QuadRule& gauss_legendre(int n) {
    static std::map<int, QuadRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

PanelSet::PanelSet(std::vector<double> edges, int nodes_per_panel)
    : edges_(std::move(edges)), nodes_(nodes_per_panel) {
    if (edges_.size() < 2) throw std::invalid_argument("PanelSet: need at least one panel");
    if (!std::is_sorted(edges_.begin(), edges_.end()))
        throw std::invalid_argument("PanelSet: edges must be sorted");
}

PanelSet PanelSet::uniform(double a, double b, int n_panels, int nodes_per_panel) {
    if (!(b > a) || n_panels < 1) throw std::invalid_argument("PanelSet::uniform: bad interval");
    std::vector<double> e(n_panels + 1);
    for (int i = 0; i <= n_panels; ++i) e[i] = a + (b - a) * i / n_panels;
    return PanelSet(std::move(e), nodes_per_panel);
}

PanelSet PanelSet::refined(double a, double b, int n_panels, int nodes_per_panel,
                           const std::vector<double>& focus, double focus_width) {
    std::vector<double> e;
    for (int i = 0; i <= n_panels; ++i) e.push_back(a + (b - a) * i / n_panels);
    for (double f : focus) {
        if (f <= a || f >= b) continue;
        // Geometric ladder of half-widths from the coarse panel scale down to
        // focus_width, on both sides of the feature.
        double w = (b - a) / n_panels;
        while (w > focus_width) {
            if (f - w > a) e.push_back(f - w);
            if (f + w < b) e.push_back(f + w);
            w *= 0.5;
        }
        if (f - focus_width > a) e.push_back(f - focus_width);
        if (f + focus_width < b) e.push_back(f + focus_width);
        e.push_back(f);
    }
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end(),
                        [&](double u, double v) { return std::abs(u - v) < 1e-13 * (b - a); }),
            e.end());
    return PanelSet(std::move(e), nodes_per_panel);
}

double PanelSet::integrate(const std::function<double(double)>& f) const {
    const QuadRule& rule = gauss_legendre(nodes_);
    std::vector<double> parts;
    parts.reserve((edges_.size() - 1) * nodes_);
    for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
        const double mid = 0.5 * (edges_[p] + edges_[p + 1]);
        const double half = 0.5 * (edges_[p + 1] - edges_[p]);
        for (int i = 0; i < nodes_; ++i)
            parts.push_back(half * rule.weights[i] * f(mid + half * rule.nodes[i]));
    }
    return pairwise_sum<double>(parts);
}

void PanelSet::flatten(std::vector<double>& x, std::vector<double>& w) const {
    const QuadRule& rule = gauss_legendre(nodes_);
    x.clear();
    w.clear();
    for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
        const double mid = 0.5 * (edges_[p] + edges_[p + 1]);
        const double half = 0.5 * (edges_[p + 1] - edges_[p]);
        for (int i = 0; i < nodes_; ++i) {
            x.push_back(mid + half * rule.nodes[i]);
            w.push_back(half * rule.weights[i]);
        }
    }
}

}  // namespace dualfield
