#include "adiabatic/heat.hpp"

#include "adiabatic/error.hpp"
#include "adiabatic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace adiabatic {

namespace {

constexpr double kPi = std::numbers::pi;

/// Positive definite exponent A x^2 + 2 B x y + C y^2 on Z^2.
struct GaussianForm {
    double a;
    double b;
    double c;
    double det() const { return a * c - b * b; }
};

/// sum_{j >= 0} exp(-coef (d + j)^2) for d >= 0.
double one_sided_tail(double coef, double d) {
    const double head = std::exp(-coef * d * d);
    if (head == 0.0) return 0.0;
    const double geometric = d > 0.0 ? 1.0 / -std::expm1(-2.0 * coef * d) : INFINITY;
    const double integral = 1.0 + 0.5 * std::sqrt(kPi / coef);
    return head * std::min(geometric, integral);
}

/// The truncated lattice region {exponent <= radius} swept in strips along
/// `outer`, with a bound on everything left out.
///
/// Writing the exponent as a (x + b y / a)^2 + (det / a) y^2 with y the outer
/// variable, strip y keeps every x within sqrt((radius - D y^2) / a) + 1 of
/// the strip centre. Omitted points of a kept strip are at least that far
/// out, and whole omitted strips are bounded by the one-dimensional theta
/// sum 1 + sqrt(pi / a).
class TruncatedEllipse {
public:
    TruncatedEllipse(const GaussianForm& form, double radius) : radius_(radius) {
        // Sweep along the variable with the shorter extent.
        outer_is_first_ = form.c < form.a;
        // inner coefficient, cross term, outer coefficient
        inner_ = outer_is_first_ ? form.c : form.a;
        cross_ = form.b;
        reduced_outer_ = form.det() / inner_;
        outer_max_ = static_cast<std::int64_t>(std::floor(std::sqrt(radius / reduced_outer_)));
    }

    template <class Visit>
    void for_each(Visit visit) const {
        for (std::int64_t y = -outer_max_; y <= outer_max_; ++y) {
            const auto [lo, hi] = inner_range(y);
            for (std::int64_t x = lo; x <= hi; ++x) {
                if (outer_is_first_)
                    visit(y, x);
                else
                    visit(x, y);
            }
        }
    }

    double tail_bound() const {
        double bound = 0.0;
        for (std::int64_t y = -outer_max_; y <= outer_max_; ++y) {
            const double yd = static_cast<double>(y);
            const double kept = reduced_outer_ * yd * yd;
            const double reach = std::sqrt(std::max(0.0, radius_ - kept) / inner_) + 1.0;
            bound += 2.0 * std::exp(-kept) * one_sided_tail(inner_, reach);
        }
        const double strip_sum = 1.0 + std::sqrt(kPi / inner_);
        bound += 2.0 * one_sided_tail(reduced_outer_, static_cast<double>(outer_max_) + 1.0) * strip_sum;
        return bound;
    }

    std::int64_t outer_max() const { return outer_max_; }

private:
    std::pair<std::int64_t, std::int64_t> inner_range(std::int64_t y) const {
        const double yd = static_cast<double>(y);
        const double centre = -cross_ * yd / inner_;
        const double reach = std::sqrt(std::max(0.0, radius_ - reduced_outer_ * yd * yd) / inner_) + 1.0;
        return {static_cast<std::int64_t>(std::ceil(centre - reach)),
                static_cast<std::int64_t>(std::floor(centre + reach))};
    }

    double radius_;
    bool outer_is_first_;
    double inner_;
    double cross_;
    double reduced_outer_;
    std::int64_t outer_max_;
};

constexpr double kMaxOuterStrips = 5.0e7;

/// Smallest radius (in steps of 1) whose tail bound, scaled, is <= eps.
TruncatedEllipse truncate(const GaussianForm& form, double scale, double eps) {
    if (!(form.a > 0.0 && form.c > 0.0 && form.det() > 0.0))
        throw Error(ErrorKind::invalid_argument, "heat trace exponent is not positive definite");
    double radius = std::max(1.0, std::log(scale / eps));
    for (;;) {
        if (std::sqrt(radius * std::max(form.a, form.c) / form.det()) > kMaxOuterStrips)
            throw Error(ErrorKind::instance_too_large, "heat trace truncation needs too many strips");
        TruncatedEllipse ellipse(form, radius);
        if (scale * ellipse.tail_bound() <= eps) return ellipse;
        radius += 1.0;
    }
}

/// Sums exp(-e) over the exponents, smallest terms first, with
/// Neumaier compensation.
double ascending_sum(std::vector<double>& exponents) {
    std::sort(exponents.begin(), exponents.end(), std::greater<>());
    double total = 0.0;
    double carry = 0.0;
    for (double e : exponents) {
        const double term = std::exp(-e);
        const double next = total + term;
        carry += std::abs(total) >= term ? (total - next) + term : (term - next) + total;
        total = next;
    }
    return total + carry;
}

void check_trace_args(double t, double eps) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorKind::invalid_argument, "t must be positive");
    if (!(eps > 0.0)) throw Error(ErrorKind::invalid_argument, "eps must be positive");
}

/// Displacement (k, l) split into the leaf direction and its normal.
struct ImageGeometry {
    double along_k, along_l, across_k, across_l;
    double inv_h2;
    double denom;  // 4 t (1 + a^2), or 4 t (p^2 + q^2) in integer form

    double exponent(std::int64_t k, std::int64_t l) const {
        const double kd = static_cast<double>(k);
        const double ld = static_cast<double>(l);
        const double along = along_k * kd + along_l * ld;
        const double across = across_k * kd + across_l * ld;
        return (along * along + inv_h2 * across * across) / denom;
    }
};

ImageGeometry image_geometry(const Slope& s, double h, double t) {
    ImageGeometry g{};
    g.inv_h2 = 1.0 / (h * h);
    if (const auto* r = s.as_rational()) {
        const double p = static_cast<double>(r->p);
        const double q = static_cast<double>(r->q);
        g.along_k = q, g.along_l = p, g.across_k = -p, g.across_l = q;
        g.denom = 4.0 * t * (p * p + q * q);
    } else {
        const double a = s.value();
        g.along_k = 1.0, g.along_l = a, g.across_k = -a, g.across_l = 1.0;
        g.denom = 4.0 * t * (1.0 + a * a);
    }
    return g;
}

}  // namespace

double image_exponent(const Slope& s, AdiabaticScale h, double t, std::int64_t k, std::int64_t l) {
    check_trace_args(t, 1.0);
    return image_geometry(s, h.value(), t).exponent(k, l);
}

const char* to_string(HeatTraceResult::Method method) noexcept {
    return method == HeatTraceResult::Method::spectral ? "spectral" : "image";
}

HeatTraceResult heat_trace_spectral(const Slope& s, AdiabaticScale h, double t, double eps) {
    check_trace_args(t, eps);
    // t lambda_kl as a quadratic form in (k, l).
    const double h2 = h.value() * h.value();
    GaussianForm form{};
    if (const auto* r = s.as_rational()) {
        const double p = static_cast<double>(r->p);
        const double q = static_cast<double>(r->q);
        const double n = p * p + q * q;
        form = {(q * q + h2 * p * p) / n, p * q * (1.0 - h2) / n, (p * p + h2 * q * q) / n};
    } else {
        const double a = s.value();
        const double n = 1.0 + a * a;
        form = {(1.0 + a * a * h2) / n, a * (1.0 - h2) / n, (a * a + h2) / n};
    }
    const double scale = kFourPiSq * t;
    form = {form.a * scale, form.b * scale, form.c * scale};

    const TruncatedEllipse ellipse = truncate(form, 1.0, eps);
    std::vector<double> exponents;
    ellipse.for_each([&](std::int64_t k, std::int64_t l) { exponents.push_back(t * eigenvalue(s, h, k, l)); });

    HeatTraceResult out;
    out.method = HeatTraceResult::Method::spectral;
    out.terms_used = exponents.size();
    out.truncation_bound = ellipse.tail_bound();
    out.value = ascending_sum(exponents);
    return out;
}

HeatTraceResult heat_trace_image(const Slope& s, AdiabaticScale h, double t, double eps) {
    check_trace_args(t, eps);
    const double hv = h.value();
    const double prefactor = 1.0 / (hv * 4.0 * kPi * t);

    const ImageGeometry g = image_geometry(s, hv, t);
    auto exponent = [&](std::int64_t k, std::int64_t l) { return g.exponent(k, l); };
    const double denom = g.denom;
    const GaussianForm form{(g.along_k * g.along_k + g.inv_h2 * g.across_k * g.across_k) / denom,
                            (g.along_k * g.along_l + g.inv_h2 * g.across_k * g.across_l) / denom,
                            (g.along_l * g.along_l + g.inv_h2 * g.across_l * g.across_l) / denom};

    const TruncatedEllipse ellipse = truncate(form, prefactor, eps);
    std::vector<double> exponents;
    ellipse.for_each([&](std::int64_t k, std::int64_t l) { exponents.push_back(exponent(k, l)); });

    HeatTraceResult out;
    out.method = HeatTraceResult::Method::image;
    out.terms_used = exponents.size();
    out.truncation_bound = prefactor * ellipse.tail_bound();
    out.value = prefactor * ascending_sum(exponents);
    return out;
}

double adiabatic_trace_limit(const Slope& s, double t) {
    if (s.is_rational())
        throw Error(ErrorKind::rational_slope, "the adiabatic trace limit is stated for irrational slopes only");
    if (!(t > 0.0)) throw Error(ErrorKind::invalid_argument, "t must be positive");
    return 1.0 / (4.0 * kPi * t);
}

double laplace_stieltjes(const DistributionFunction& df, double t, double growth) {
    if (!(t > growth))
        throw Error(ErrorKind::divergence, "Laplace transform diverges for t <= growth exponent");
    if (const auto* s = df.steps()) {
        double total = 0.0;
        for (auto it = s->jumps.rbegin(); it != s->jumps.rend(); ++it)
            total += it->height * std::exp(-it->location * t);
        return total;
    }
    const auto& d = *df.smooth();
    // tau = start + u^2, u = x / (1 - x) maps [start, inf) onto [0, 1).
    auto integrand = [&](double x) {
        if (x >= 1.0) return 0.0;
        const double u = x / (1.0 - x);
        const double tau = d.support_start + u * u;
        const double jac = 2.0 * u / ((1.0 - x) * (1.0 - x));
        const double decay = std::exp(-tau * t);
        return decay == 0.0 ? 0.0 : decay * d.density(tau) * jac;
    };
    return integrate_adaptive(integrand, 0.0, 1.0, 1e-13).value;
}

DistributionFunction sampled_distribution(const Slope& s, AdiabaticScale h, double cap) {
    StepFunction steps;
    steps.cap = cap;
    for (const auto& rec : eigenvalues_below(s, h, EnergyWindow::absolute(cap))) {
        if (!steps.jumps.empty() && steps.jumps.back().location == rec.value)
            steps.jumps.back().height += 1.0;
        else
            steps.jumps.push_back({rec.value, 1.0});
    }
    return DistributionFunction(std::move(steps));
}

}  // namespace adiabatic
