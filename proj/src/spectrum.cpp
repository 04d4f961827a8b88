#include "adiabatic/spectrum.hpp"

#include "adiabatic/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

namespace adiabatic {

namespace {

constexpr double kMaxStripBound = 2.0e18;  // 2K + 1 stays below 2^62

/// Coefficients of lambda / 4 pi^2 = a k^2 + 2 b k l + c l^2.
/// The determinant a c - b^2 equals h^2.
struct ReducedForm {
    double a;
    double b;
    double c;
};

ReducedForm reduced_form(const Slope& s, double h) {
    const double h2 = h * h;
    if (const auto* r = s.as_rational()) {
        const double p = static_cast<double>(r->p);
        const double q = static_cast<double>(r->q);
        const double n = p * p + q * q;
        return {(q * q + h2 * p * p) / n, p * q * (1.0 - h2) / n, (p * p + h2 * q * q) / n};
    }
    const double a = s.value();
    const double n = 1.0 + a * a;
    return {(1.0 + a * a * h2) / n, a * (1.0 - h2) / n, (a * a + h2) / n};
}

std::int64_t checked_bound(double bound) {
    if (!std::isfinite(bound) || bound > kMaxStripBound)
        throw Error(ErrorKind::overflow, "strip range exceeds 2^62 strips");
    return static_cast<std::int64_t>(std::floor(bound));
}

/// Integers i with inside(i), assuming the set is an interval close to
/// (center - radius, center + radius). Returns [lo, hi], empty when lo > hi.
template <class Inside>
std::pair<std::int64_t, std::int64_t> resolve_interval(double center, double radius, Inside inside) {
    std::int64_t lo;
    std::int64_t hi;
    if (radius >= 0.0) {
        lo = static_cast<std::int64_t>(std::ceil(center - radius));
        hi = static_cast<std::int64_t>(std::floor(center + radius));
    } else {
        lo = static_cast<std::int64_t>(std::floor(center)) + 1;
        hi = lo - 1;
    }
    if (lo > hi) {
        const auto m = static_cast<std::int64_t>(std::floor(center));
        if (inside(m)) {
            lo = hi = m;
        } else if (inside(m + 1)) {
            lo = hi = m + 1;
        } else {
            return {lo, hi};
        }
    }
    while (inside(lo - 1)) --lo;
    while (inside(hi + 1)) ++hi;
    while (lo <= hi && !inside(lo)) ++lo;
    while (hi >= lo && !inside(hi)) --hi;
    return {lo, hi};
}

std::uint64_t interval_size(std::pair<std::int64_t, std::int64_t> iv) {
    return iv.first > iv.second ? 0 : static_cast<std::uint64_t>(iv.second - iv.first) + 1;
}

/// Strip geometry shared by the floating-point counters.
struct StripPlan {
    StripBounds bounds;
    ReducedForm form;
    double h;

    std::int64_t outer_max() const { return bounds.strips_over_l ? bounds.l_max : bounds.k_max; }
    double inner_coeff() const { return bounds.strips_over_l ? form.a : form.c; }

    // Approximate inner interval of { inner : Q < mu } on strip `outer`.
    std::pair<double, double> inner_window(std::int64_t outer, double mu) const {
        const double o = static_cast<double>(outer);
        const double ci = inner_coeff();
        const double disc = ci * mu - h * h * o * o;
        const double center = -form.b * o / ci;
        return {center, disc >= 0.0 ? std::sqrt(disc) / ci : -1.0};
    }
};

StripPlan make_plan(const Slope& s, AdiabaticScale h, const EnergyWindow& w) {
    return {strip_bounds(s, h, w), reduced_form(s, h.value()), h.value()};
}

template <class Visit>
void for_each_strip(const StripPlan& plan, const Slope& s, AdiabaticScale h, double threshold, bool strict,
                    std::int64_t outer_lo, std::int64_t outer_hi, Visit visit) {
    const double mu = threshold / kFourPiSq;
    for (std::int64_t o = outer_lo; o <= outer_hi; ++o) {
        auto inside = [&](std::int64_t i) {
            const double v = plan.bounds.strips_over_l ? eigenvalue(s, h, i, o) : eigenvalue(s, h, o, i);
            return strict ? v < threshold : v <= threshold;
        };
        const auto [center, radius] = plan.inner_window(o, mu);
        visit(o, resolve_interval(center, radius, inside));
    }
}

std::uint64_t count_strips(const StripPlan& plan, const Slope& s, AdiabaticScale h, double threshold, bool strict,
                           std::int64_t outer_lo, std::int64_t outer_hi) {
    std::uint64_t n = 0;
    for_each_strip(plan, s, h, threshold, strict, outer_lo, outer_hi,
                   [&](std::int64_t, auto iv) { n += interval_size(iv); });
    return n;
}

/// Sums job(lo, hi) over [-outer, outer] split into contiguous chunks.
template <class Job>
std::uint64_t parallel_sum(std::int64_t outer, unsigned threads, Job job) {
    const std::uint64_t strips = 2 * static_cast<std::uint64_t>(outer) + 1;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(strips, 256))));
    if (threads == 1) return job(-outer, outer);
    std::vector<std::uint64_t> partial(threads, 0);
    {
        std::vector<std::jthread> pool;
        const std::uint64_t chunk = (strips + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::int64_t lo = -outer + static_cast<std::int64_t>(t * chunk);
            const std::int64_t hi = std::min<std::int64_t>(outer, lo + static_cast<std::int64_t>(chunk) - 1);
            if (lo > hi) break;
            pool.emplace_back([&partial, &job, t, lo, hi] { partial[t] = job(lo, hi); });
        }
    }
    std::uint64_t total = 0;
    for (auto p : partial) total += p;  // integer sum, independent of schedule
    return total;
}

}  // namespace

AdiabaticScale::AdiabaticScale(double h) : h_(h) {
    if (!(h > 0.0 && h <= 1.0)) throw Error(ErrorKind::invalid_argument, "h must lie in (0, 1]");
}

EnergyWindow EnergyWindow::absolute(double lambda) {
    if (std::isnan(lambda)) throw Error(ErrorKind::invalid_argument, "lambda is NaN");
    return {lambda, lambda / kFourPiSq, Unit::absolute};
}

EnergyWindow EnergyWindow::reduced(double mu) {
    if (std::isnan(mu)) throw Error(ErrorKind::invalid_argument, "mu is NaN");
    return {mu * kFourPiSq, mu, Unit::reduced};
}

double eigenvalue(const Slope& s, AdiabaticScale scale, std::int64_t k, std::int64_t l) {
    const double h2 = scale.value() * scale.value();
    const double kd = static_cast<double>(k);
    const double ld = static_cast<double>(l);
    if (const auto* r = s.as_rational()) {
        const double p = static_cast<double>(r->p);
        const double q = static_cast<double>(r->q);
        const double along = q * kd + p * ld;
        const double across = q * ld - p * kd;
        return kFourPiSq * (along * along + h2 * across * across) / (p * p + q * q);
    }
    const double a = s.value();
    const double along = kd + a * ld;
    const double across = -a * kd + ld;
    return kFourPiSq * (along * along + h2 * across * across) / (1.0 + a * a);
}

StripBounds strip_bounds(const Slope& s, AdiabaticScale h, const EnergyWindow& w) {
    StripBounds b;
    const double mu = w.reduced_value();
    if (!(mu > 0.0)) return b;
    const ReducedForm f = reduced_form(s, h.value());
    // |k| <= sqrt(mu c) / h and |l| <= sqrt(mu a) / h on the ellipse.
    const double slack = 1.0 + 1e-12;
    b.k_max = checked_bound(std::sqrt(mu * f.c) / h.value() * slack);
    b.l_max = checked_bound(std::sqrt(mu * f.a) / h.value() * slack);
    b.strips_over_l = b.l_max < b.k_max;
    return b;
}

LatticeCount count_exact(const Slope& s, AdiabaticScale h, const EnergyWindow& w, const CountOptions& options) {
    if (options.tie_tolerance < 0.0) throw Error(ErrorKind::invalid_argument, "tie tolerance must be >= 0");
    const double lambda = w.lambda();
    const double tol = options.tie_tolerance;
    if (lambda + tol < 0.0) return {};

    LatticeCount out;
    const StripPlan plan = make_plan(s, h, w);
    const std::int64_t outer = plan.outer_max();
    out.strips_visited = 2 * static_cast<std::uint64_t>(outer) + 1;
    out.count = parallel_sum(outer, options.threads, [&](std::int64_t lo, std::int64_t hi) {
        return count_strips(plan, s, h, lambda, true, lo, hi);
    });

    // Ties are counted over the box of the widened window.
    const StripPlan wide = make_plan(s, h, EnergyWindow::absolute(lambda + tol));
    const std::int64_t wide_outer = wide.outer_max();
    const std::uint64_t at_most = parallel_sum(wide_outer, options.threads, [&](std::int64_t lo, std::int64_t hi) {
        return count_strips(wide, s, h, lambda + tol, false, lo, hi);
    });
    const std::uint64_t below = parallel_sum(wide_outer, options.threads, [&](std::int64_t lo, std::int64_t hi) {
        return count_strips(wide, s, h, lambda - tol, true, lo, hi);
    });
    out.near_boundary = at_most - below;
    return out;
}

LatticeCount count_naive(const Slope& s, AdiabaticScale h, const EnergyWindow& w) {
    const double lambda = w.lambda();
    if (lambda < 0.0) return {};
    const StripBounds b = strip_bounds(s, h, w);
    const double box = (2.0 * static_cast<double>(b.k_max) + 1.0) * (2.0 * static_cast<double>(b.l_max) + 1.0);
    if (box > static_cast<double>(kNaiveLimit))
        throw Error(ErrorKind::instance_too_large,
                    "naive count would visit " + std::to_string(box) + " lattice points");
    LatticeCount out;
    for (std::int64_t k = -b.k_max; k <= b.k_max; ++k) {
        ++out.strips_visited;
        for (std::int64_t l = -b.l_max; l <= b.l_max; ++l) {
            const double v = eigenvalue(s, h, k, l);
            if (v < lambda) ++out.count;
            if (v == lambda) ++out.near_boundary;
        }
    }
    return out;
}

LatticeCount count_exact_rational(const Slope& s, const Exact& h_squared, const Exact& mu) {
    const auto* r = s.as_rational();
    if (!r) throw Error(ErrorKind::invalid_argument, "integer counting needs a rational slope");
    if (!(h_squared > 0 && h_squared <= 1)) throw Error(ErrorKind::invalid_argument, "h^2 must lie in (0, 1]");
    if (mu < 0) return {};

    const BigInt p = r->p;
    const BigInt q = r->q;
    const BigInt norm = p * p + q * q;
    const BigInt hn = numerator(h_squared);
    const BigInt hd = denominator(h_squared);
    const BigInt mn = numerator(mu);
    const BigInt md = denominator(mu);
    const BigInt rhs = mn * hd * norm;

    // md (hd u^2 + hn v^2) compared with mn hd (p^2 + q^2).
    auto form = [&](std::int64_t k, std::int64_t l) -> BigInt {
        const BigInt u = q * k + p * l;
        const BigInt v = q * l - p * k;
        return md * (hd * u * u + hn * v * v);
    };

    // On the ellipse k^2 <= mu c / h^2 with c = (p^2 + h^2 q^2) / norm, and
    // symmetrically for l.
    const Exact k_sq = mu * (Exact(p * p) + h_squared * Exact(q * q)) / (Exact(norm) * h_squared);
    const Exact l_sq = mu * (Exact(q * q) + h_squared * Exact(p * p)) / (Exact(norm) * h_squared);
    auto isqrt_floor = [](const Exact& x) {
        const BigInt f = numerator(x) / denominator(x);
        const BigInt root = sqrt(f);
        if (root > BigInt(static_cast<std::int64_t>(kMaxStripBound)))
            throw Error(ErrorKind::overflow, "strip range exceeds 2^62 strips");
        return root.convert_to<std::int64_t>();
    };
    const std::int64_t k_max = isqrt_floor(k_sq);
    const std::int64_t l_max = isqrt_floor(l_sq);
    const bool over_l = l_max < k_max;

    const double pd = static_cast<double>(r->p);
    const double qd = static_cast<double>(r->q);
    const double h2 = h_squared.convert_to<double>();
    const double mud = mu.convert_to<double>();
    const double nd = pd * pd + qd * qd;
    const ReducedForm f{(qd * qd + h2 * pd * pd) / nd, pd * qd * (1.0 - h2) / nd, (pd * pd + h2 * qd * qd) / nd};
    const double ci = over_l ? f.a : f.c;

    LatticeCount out;
    const std::int64_t outer = over_l ? l_max : k_max;
    for (std::int64_t o = -outer; o <= outer; ++o) {
        ++out.strips_visited;
        auto at = [&](std::int64_t i) -> BigInt { return over_l ? form(i, o) : form(o, i); };
        const double od = static_cast<double>(o);
        const double disc = ci * mud - h2 * od * od;
        const double center = -f.b * od / ci;
        const double radius = disc >= 0.0 ? std::sqrt(disc) / ci : -1.0;
        const auto below = resolve_interval(center, radius, [&](std::int64_t i) { return at(i) < rhs; });
        const auto at_most = resolve_interval(center, radius, [&](std::int64_t i) { return at(i) <= rhs; });
        out.count += interval_size(below);
        out.near_boundary += interval_size(at_most) - interval_size(below);
    }
    return out;
}

std::vector<EigenvalueRecord> eigenvalues_below(const Slope& s, AdiabaticScale h, const EnergyWindow& w) {
    const LatticeCount total = count_exact(s, h, w);
    if (total.count > kEigenvalueListLimit)
        throw Error(ErrorKind::too_many_eigenvalues,
                    std::to_string(total.count) + " eigenvalues below lambda exceed the listing limit");
    std::vector<EigenvalueRecord> out;
    out.reserve(total.count);
    if (w.lambda() <= 0.0) return out;

    const StripPlan plan = make_plan(s, h, w);
    const std::int64_t outer = plan.outer_max();
    for_each_strip(plan, s, h, w.lambda(), true, -outer, outer, [&](std::int64_t o, auto iv) {
        for (std::int64_t i = iv.first; i <= iv.second; ++i) {
            const std::int64_t k = plan.bounds.strips_over_l ? i : o;
            const std::int64_t l = plan.bounds.strips_over_l ? o : i;
            out.push_back({k, l, eigenvalue(s, h, k, l)});
        }
    });
    std::sort(out.begin(), out.end(), [](const EigenvalueRecord& x, const EigenvalueRecord& y) {
        if (x.value != y.value) return x.value < y.value;
        if (x.k != y.k) return x.k < y.k;
        return x.l < y.l;
    });
    return out;
}

}  // namespace adiabatic
