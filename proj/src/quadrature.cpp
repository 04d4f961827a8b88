#include "adiabatic/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace adiabatic {

namespace {

// Kronrod nodes on [0, 1]; odd indices are the embedded Gauss points.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b, int& evaluations) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(mid);
    double kronrod = fc * kKronrod[7];
    double gauss = fc * kGauss[3];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kNodes[i];
        const double pair = f(mid - dx) + f(mid + dx);
        kronrod += kKronrod[i] * pair;
        if (i % 2 == 1) gauss += kGauss[i / 2] * pair;
    }
    evaluations += 15;
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tolerance, int max_intervals) {
    QuadratureResult out;
    if (a == b) return out;
    std::priority_queue<Panel> panels;
    panels.push(gauss_kronrod(f, a, b, out.evaluations));
    double value = panels.top().value;
    double error = panels.top().error;
    while (error > abs_tolerance && static_cast<int>(panels.size()) < max_intervals) {
        const Panel worst = panels.top();
        if (worst.b - worst.a < 1e-14 * std::abs(b - a)) break;
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gauss_kronrod(f, worst.a, mid, out.evaluations);
        const Panel right = gauss_kronrod(f, mid, worst.b, out.evaluations);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        panels.push(left);
        panels.push(right);
    }
    // Re-sum to drop the cancellation drift of the running totals.
    value = 0.0;
    error = 0.0;
    std::vector<Panel> rest;
    while (!panels.empty()) {
        rest.push_back(panels.top());
        panels.pop();
    }
    for (auto it = rest.rbegin(); it != rest.rend(); ++it) {
        value += it->value;
        error += it->error;
    }
    out.value = value;
    out.error_estimate = error;
    return out;
}

}  // namespace adiabatic
