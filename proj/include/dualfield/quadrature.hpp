// quadrature.hpp — Gauss-Legendre nodes and composite panel rules
#pragma once

#include <functional>
#include <vector>

namespace dualfield {

struct QuadRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Gauss-Legendre rule of order n (Newton iteration on Legendre polynomials).
const QuadRule& gauss_legendre(int n);

// A set of integration panels [a_i, b_i] sharing one Gauss-Legendre order.
// Integration enumerates panels and nodes in fixed order, so results are
// bit-reproducible.
class PanelSet {
  public:
    PanelSet() = default;
    PanelSet(std::vector<double> edges, int nodes_per_panel);

    static PanelSet uniform(double a, double b, int n_panels, int nodes_per_panel);

    // Panels refined geometrically around each focus point (half-width spans
    // [focus_width, panel scale]), coarse elsewhere. Used for integrands with
    // narrow features such as absorption lines.
    static PanelSet refined(double a, double b, int n_panels, int nodes_per_panel,
                            const std::vector<double>& focus, double focus_width);

    double integrate(const std::function<double(double)>& f) const;

    // All abscissae with their composite weights, in panel order.
    void flatten(std::vector<double>& x, std::vector<double>& w) const;

    const std::vector<double>& edges() const { return edges_; }
    int nodes_per_panel() const { return nodes_; }

  private:
    std::vector<double> edges_;
    int nodes_ = 16;
};

}  // namespace dualfield
