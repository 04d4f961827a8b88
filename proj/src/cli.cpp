#include "adiabatic/cli.hpp"

#include "adiabatic/error.hpp"
#include "adiabatic/exact.hpp"
#include "adiabatic/heat.hpp"
#include "adiabatic/leafwise.hpp"
#include "adiabatic/spectrum.hpp"
#include "adiabatic/weyl.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>
#include <ostream>
#include <sstream>

namespace adiabatic::cli {

namespace {

double parse_real(const std::string& text, const char* what) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || std::isnan(value))
        throw Error(ErrorKind::parse, std::string("bad ") + what + " '" + text + "'");
    return value;
}

double parse_h(const std::string& text) {
    const double h = parse_real(text, "h");
    if (!(h > 0.0 && h <= 1.0)) throw Error(ErrorKind::invalid_argument, "h must lie in (0, 1], got " + text);
    return h;
}

std::vector<double> parse_real_list(const std::string& text, const char* what) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(parse_real(item, what));
    }
    return out;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::overflow:
    case ErrorKind::instance_too_large:
    case ErrorKind::too_many_eigenvalues:
        return kResourceLimit;
    case ErrorKind::precision_exhausted:
        return kPrecision;
    default:
        return kUsage;
    }
}

/// One output record: ordered (name, value) pairs; empty optionals become
/// an empty CSV field and JSON null.
using Field = std::pair<std::string, nlohmann::json>;
using Record = std::vector<Field>;

std::string csv_field(const nlohmann::json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_number(v.get<double>());
    if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

void write_records(std::ostream& out, const std::vector<Record>& records, const std::vector<std::string>& columns,
                   Format format) {
    if (format == Format::json) {
        // ordered_json keeps the column order in the printed text.
        nlohmann::ordered_json printed = nlohmann::ordered_json::array();
        for (const auto& rec : records) {
            nlohmann::ordered_json obj;
            for (const auto& [name, value] : rec) obj[name] = value;
            printed.push_back(obj);
        }
        out << printed.dump(2) << '\n';
        return;
    }
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << "\r\n";
    for (const auto& rec : records) {
        for (std::size_t i = 0; i < rec.size(); ++i) out << (i ? "," : "") << csv_field(rec[i].second);
        out << "\r\n";
    }
}

Record to_record(const ReportRow& row, const Outputs& outputs) {
    auto opt = [](const auto& v) { return v ? nlohmann::json(*v) : nlohmann::json(); };
    Record rec;
    rec.emplace_back("h", row.h);
    if (outputs.exact_count) {
        rec.emplace_back("N_h", opt(row.n_h));
        rec.emplace_back("h_N_h", opt(row.h_n_h));
    }
    if (outputs.asym_closed_form) rec.emplace_back("closed_form_asym", opt(row.closed_form_asym));
    if (outputs.weyl) rec.emplace_back("weyl_value", opt(row.weyl_value));
    if (outputs.residual) rec.emplace_back("residual", opt(row.residual));
    if (outputs.exact_count) rec.emplace_back("near_boundary", opt(row.near_boundary));
    rec.emplace_back("wall_time_ms", row.wall_time_ms);
    return rec;
}

std::vector<std::string> columns_of(const Record& rec) {
    std::vector<std::string> names;
    for (const auto& f : rec) names.push_back(f.first);
    return names;
}

Outputs outputs_from_names(const std::vector<std::string>& names) {
    Outputs o{false, false, false, false};
    for (const auto& n : names) {
        if (n == "exact_count")
            o.exact_count = true;
        else if (n == "weyl")
            o.weyl = true;
        else if (n == "asym_closed_form")
            o.asym_closed_form = true;
        else if (n == "residual")
            o.residual = true;
        else
            throw Error(ErrorKind::parse, "unknown output '" + n + "'");
    }
    return o;
}

void fill_derived(ReportRow& row, const Slope& s, double lambda, const Outputs& outputs) {
    const AdiabaticScale scale(row.h);
    if (outputs.asym_closed_form || outputs.residual) row.closed_form_asym = closed_form_asymptotic(s, scale, lambda);
    if (outputs.weyl) row.weyl_value = weyl_estimate(s, scale, WeylParams{1, lambda, 1e-10});
    if (row.n_h) row.h_n_h = row.h * static_cast<double>(*row.n_h);
    if (outputs.residual && row.h_n_h && row.closed_form_asym)
        row.residual = *row.h_n_h - row.h * *row.closed_form_asym;
}

struct GlobalOptions {
    std::string format = "csv";
    bool reduced = false;
    double tol = 0.0;
    double eps = 1e-12;
    unsigned threads = 1;
    std::string config;
};

Format format_of(const GlobalOptions& g) {
    if (g.format == "csv") return Format::csv;
    if (g.format == "json") return Format::json;
    throw Error(ErrorKind::parse, "unknown format '" + g.format + "'");
}

double lambda_of(const std::string& text, const GlobalOptions& g) {
    const double v = parse_real(text, "lambda");
    return g.reduced ? EnergyWindow::reduced(v).lambda() : v;
}

}  // namespace

std::vector<double> geometric_grid(double start, double end, int points) {
    if (points < 1) throw Error(ErrorKind::invalid_argument, "grid needs at least one point");
    if (!(start > 0.0 && start <= 1.0 && end > 0.0 && end <= 1.0))
        throw Error(ErrorKind::invalid_argument, "grid ends must lie in (0, 1]");
    if (points == 1) return {start};
    if (!(start > end)) throw Error(ErrorKind::invalid_argument, "geometric grid must be strictly decreasing");
    std::vector<double> out;
    // Decades are exact: pow(10, -2.0) == 0.01.
    const double first = std::log10(start);
    const double step = (std::log10(end) - first) / (points - 1);
    for (int i = 0; i < points; ++i) out.push_back(i == points - 1 ? end : std::pow(10.0, first + step * i));
    return out;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
    SweepSpec spec;
    const auto& slope = j.at("slope");
    spec.slope = slope.is_string() ? Slope::parse(slope.get<std::string>()) : slope.get<Slope>();
    spec.lambda = j.at("lambda").get<double>();
    if (j.contains("h_values")) spec.h_values = j.at("h_values").get<std::vector<double>>();
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        auto grid = geometric_grid(g.at("start").get<double>(), g.at("end").get<double>(), g.at("points").get<int>());
        spec.h_values.insert(spec.h_values.end(), grid.begin(), grid.end());
    }
    if (j.contains("tie_tolerance")) spec.tie_tolerance = j.at("tie_tolerance").get<double>();
    if (j.contains("outputs")) spec.outputs = outputs_from_names(j.at("outputs").get<std::vector<std::string>>());
    return spec;
}

void validate(SweepSpec& spec) {
    if (spec.h_values.empty()) throw Error(ErrorKind::invalid_argument, "sweep needs at least one h value");
    for (double h : spec.h_values)
        if (!(h > 0.0 && h <= 1.0)) throw Error(ErrorKind::invalid_argument, "sweep h values must lie in (0, 1]");
    if (!(spec.tie_tolerance >= 0.0)) throw Error(ErrorKind::invalid_argument, "tie tolerance must be >= 0");
    if (std::isnan(spec.lambda)) throw Error(ErrorKind::invalid_argument, "lambda is NaN");
    std::sort(spec.h_values.begin(), spec.h_values.end(), std::greater<>());
    spec.h_values.erase(std::unique(spec.h_values.begin(), spec.h_values.end()), spec.h_values.end());
}

ReportRow compute_row(const Slope& s, double h, double lambda, double tie_tolerance, const Outputs& outputs,
                      unsigned threads) {
    const auto start = std::chrono::steady_clock::now();
    ReportRow row;
    row.h = h;
    const AdiabaticScale scale(h);
    if (outputs.exact_count || outputs.residual) {
        const LatticeCount c =
            count_exact(s, scale, EnergyWindow::absolute(lambda), CountOptions{tie_tolerance, threads});
        row.n_h = c.count;
        row.near_boundary = c.near_boundary;
    }
    fill_derived(row, s, lambda, outputs);
    row.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return row;
}

std::vector<std::string> row_columns(const Outputs& outputs) { return columns_of(to_record(ReportRow{}, outputs)); }

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

void write_rows(std::ostream& out, const std::vector<ReportRow>& rows, const Outputs& outputs, Format format) {
    std::vector<Record> records;
    for (const auto& r : rows) records.push_back(to_record(r, outputs));
    write_records(out, records, row_columns(outputs), format);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact eigenvalue counting for the adiabatic Laplacian on a Kronecker-foliated torus", "adiabatic"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--reduced", g.reduced, "Read lambda in units of 4 pi^2");
    app.add_option("--tol", g.tol, "Tie tolerance for boundary diagnostics");
    app.add_option("--eps", g.eps, "Truncation budget for heat traces");
    app.add_option("--threads", g.threads, "Worker threads");
    app.add_option("--config", g.config, "JSON sweep configuration");

    std::string slope_text, h_text, lambda_text, t_text, n_text;

    auto* count = app.add_subcommand("count", "Exact N_h(lambda)");
    bool exact_arith = false;
    count->add_option("SLOPE", slope_text)->required();
    count->add_option("H", h_text, "Adiabatic parameter in (0, 1]")->required();
    count->add_option("LAMBDA", lambda_text)->required();
    count->add_flag("--exact-arith", exact_arith, "Integer arithmetic (rational slope, h and reduced lambda)");

    auto* asym = app.add_subcommand("asym", "Leading h -> 0 asymptotic of N_h(lambda)");
    asym->add_option("SLOPE", slope_text)->required();
    asym->add_option("H", h_text, "Adiabatic parameter in (0, 1]")->required();
    asym->add_option("LAMBDA", lambda_text)->required();

    auto* weyl = app.add_subcommand("weyl", "Weyl convolution against the leafwise spectrum");
    int q = 1;
    weyl->add_option("SLOPE", slope_text)->required();
    weyl->add_option("H", h_text, "Adiabatic parameter in (0, 1]")->required();
    weyl->add_option("LAMBDA", lambda_text)->required();
    weyl->add_option("--q", q, "Transverse dimension")->check(CLI::PositiveNumber);

    auto* leaf = app.add_subcommand("leafwise", "Leafwise distribution function N_F(lambda)");
    leaf->add_option("SLOPE", slope_text)->required();
    leaf->add_option("LAMBDA", lambda_text)->required();

    auto* heat = app.add_subcommand("heat", "Heat trace by spectral and image sums");
    heat->add_option("SLOPE", slope_text)->required();
    heat->add_option("H", h_text, "Adiabatic parameter in (0, 1]")->required();
    heat->add_option("T", t_text)->required();

    auto* sweep = app.add_subcommand("sweep", "N_h(lambda) over a list of h");
    std::string h_list, grid, outputs_text;
    sweep->add_option("SLOPE", slope_text);
    sweep->add_option("LAMBDA", lambda_text);
    sweep->add_option("--h-values", h_list, "Comma-separated h values");
    sweep->add_option("--grid", grid, "Geometric grid start,end,points");
    sweep->add_option("--outputs", outputs_text, "Comma-separated subset of exact_count,weyl,asym_closed_form,residual");

    auto* cf = app.add_subcommand("cf", "Continued fraction of the slope");
    cf->add_option("SLOPE", slope_text)->required();
    cf->add_option("N", n_text, "Number of partial quotients, or - for the full expansion")->required();

    auto* eig = app.add_subcommand("eig", "Eigenvalues below lambda");
    eig->add_option("SLOPE", slope_text)->required();
    eig->add_option("H", h_text, "Adiabatic parameter in (0, 1]")->required();
    eig->add_option("LAMBDA", lambda_text)->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        const Format format = format_of(g);

        if (count->parsed()) {
            const Slope s = Slope::parse(slope_text);
            ReportRow row;
            const auto start = std::chrono::steady_clock::now();
            if (exact_arith) {
                if (!s.is_rational())
                    throw Error(ErrorKind::invalid_argument, "--exact-arith needs a rational slope");
                if (!g.reduced)
                    throw Error(ErrorKind::invalid_argument, "--exact-arith needs lambda in reduced units (--reduced)");
                const Exact h_exact = parse_exact(h_text);
                const Exact mu = parse_exact(lambda_text);
                row.h = parse_h(h_text);
                if (!(h_exact > 0 && h_exact <= 1)) throw Error(ErrorKind::invalid_argument, "h must lie in (0, 1]");
                const LatticeCount c = count_exact_rational(s, h_exact * h_exact, mu);
                row.n_h = c.count;
                row.near_boundary = c.near_boundary;
                fill_derived(row, s, EnergyWindow::reduced(mu.convert_to<double>()).lambda(), Outputs{});
                row.wall_time_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            } else {
                row = compute_row(s, parse_h(h_text), lambda_of(lambda_text, g), g.tol, Outputs{}, g.threads);
            }
            write_rows(out, {row}, Outputs{}, format);
            return kOk;
        }

        if (asym->parsed()) {
            const Slope s = Slope::parse(slope_text);
            const double h = parse_h(h_text);
            const double lambda = lambda_of(lambda_text, g);
            const Record rec{{"slope", s.to_string()},
                             {"h", h},
                             {"lambda", lambda},
                             {"asym", closed_form_asymptotic(s, AdiabaticScale(h), lambda)}};
            write_records(out, {rec}, columns_of(rec), format);
            return kOk;
        }

        if (weyl->parsed()) {
            const Slope s = Slope::parse(slope_text);
            const double h = parse_h(h_text);
            const double lambda = lambda_of(lambda_text, g);
            const Record rec{{"slope", s.to_string()},
                             {"h", h},
                             {"lambda", lambda},
                             {"q", q},
                             {"weyl", weyl_estimate(s, AdiabaticScale(h), WeylParams{q, lambda, 1e-10})}};
            write_records(out, {rec}, columns_of(rec), format);
            return kOk;
        }

        if (leaf->parsed()) {
            const Slope s = Slope::parse(slope_text);
            const double lambda = lambda_of(lambda_text, g);
            const LeafSpectrum spectrum = leafwise_df(s, std::max(lambda, 0.0));
            Record rec{{"slope", s.to_string()}, {"lambda", lambda}, {"N_F", spectrum.df.evaluate(lambda)}};
            if (format == Format::json) rec.emplace_back("distribution", to_json(spectrum.df));
            write_records(out, {rec}, columns_of(rec), format);
            return kOk;
        }

        if (heat->parsed()) {
            const Slope s = Slope::parse(slope_text);
            const double h = parse_h(h_text);
            const double t = parse_real(t_text, "t");
            const AdiabaticScale scale(h);
            const HeatTraceResult spectral = heat_trace_spectral(s, scale, t, g.eps);
            const HeatTraceResult image = heat_trace_image(s, scale, t, g.eps);
            Record rec{{"slope", s.to_string()},
                       {"h", h},
                       {"t", t},
                       {"spectral", spectral.value},
                       {"image", image.value},
                       {"discrepancy", std::abs(spectral.value - image.value)},
                       {"spectral_bound", spectral.truncation_bound},
                       {"image_bound", image.truncation_bound},
                       {"spectral_terms", spectral.terms_used},
                       {"image_terms", image.terms_used},
                       {"h_trace", h * image.value},
                       {"adiabatic_limit", s.is_rational() ? nlohmann::json()
                                                            : nlohmann::json(adiabatic_trace_limit(s, t))}};
            write_records(out, {rec}, columns_of(rec), format);
            return kOk;
        }

        if (sweep->parsed()) {
            SweepSpec spec;
            if (!g.config.empty()) {
                std::ifstream in(g.config);
                if (!in) throw Error(ErrorKind::parse, "cannot open config '" + g.config + "'");
                nlohmann::json j;
                try {
                    in >> j;
                    spec = sweep_spec_from_json(j);
                } catch (const nlohmann::json::exception& e) {
                    throw Error(ErrorKind::parse, std::string("bad config: ") + e.what());
                }
            }
            if (!slope_text.empty()) spec.slope = Slope::parse(slope_text);
            if (!lambda_text.empty()) spec.lambda = lambda_of(lambda_text, g);
            if (g.config.empty() && (slope_text.empty() || lambda_text.empty()))
                throw Error(ErrorKind::parse, "sweep needs slope and lambda (or --config)");
            if (!h_list.empty()) {
                const auto hs = parse_real_list(h_list, "h");
                spec.h_values.insert(spec.h_values.end(), hs.begin(), hs.end());
            }
            if (!grid.empty()) {
                const auto parts = parse_real_list(grid, "grid");
                if (parts.size() != 3 || parts[2] != std::floor(parts[2]))
                    throw Error(ErrorKind::parse, "--grid expects start,end,points");
                const auto hs = geometric_grid(parts[0], parts[1], static_cast<int>(parts[2]));
                spec.h_values.insert(spec.h_values.end(), hs.begin(), hs.end());
            }
            if (!outputs_text.empty()) {
                std::vector<std::string> names;
                std::stringstream in(outputs_text);
                for (std::string item; std::getline(in, item, ',');) names.push_back(item);
                spec.outputs = outputs_from_names(names);
            }
            if (app.get_option("--tol")->count() > 0) spec.tie_tolerance = g.tol;
            validate(spec);

            // Rows run concurrently; output order is the sorted h order.
            std::vector<std::future<ReportRow>> jobs;
            const unsigned workers = std::max(1u, g.threads);
            std::vector<ReportRow> rows;
            int status = kOk;
            std::string failure;
            for (std::size_t begin = 0; begin < spec.h_values.size(); begin += workers) {
                jobs.clear();
                const std::size_t end = std::min(spec.h_values.size(), begin + workers);
                for (std::size_t i = begin; i < end; ++i)
                    jobs.push_back(std::async(std::launch::async, [&spec, i] {
                        return compute_row(spec.slope, spec.h_values[i], spec.lambda, spec.tie_tolerance,
                                           spec.outputs);
                    }));
                for (auto& job : jobs) {
                    try {
                        rows.push_back(job.get());
                    } catch (const Error& e) {
                        const int code = exit_code_for(e.kind());
                        if (code == kUsage) throw;
                        status = std::max(status, code);
                        failure = e.what();
                    }
                }
            }
            write_rows(out, rows, spec.outputs, format);
            if (status != kOk) err << "error: " << failure << '\n';
            return status;
        }

        if (cf->parsed()) {
            const Slope s = Slope::parse(slope_text);
            std::optional<std::size_t> n;
            if (n_text != "-") {
                const double v = parse_real(n_text, "n");
                if (!(v >= 1.0) || v != std::floor(v) || v > 1e6)
                    throw Error(ErrorKind::invalid_argument, "n must be a positive integer or -");
                n = static_cast<std::size_t>(v);
            }
            const ContinuedFraction expansion = continued_fraction(s, n);
            std::string notation = "[";
            std::vector<Record> records;
            for (std::size_t i = 0; i < expansion.quotients.size(); ++i) {
                notation += std::to_string(expansion.quotients[i]);
                if (i + 1 < expansion.quotients.size()) notation += i == 0 ? ";" : ",";
                const Convergent& c = expansion.convergents[i];
                const ApproximationGap gap = approximation_gap(s, c);
                records.push_back({{"n", i},
                                   {"quotient", expansion.quotients[i]},
                                   {"p", c.p},
                                   {"q", c.q},
                                   {"abs_error", gap.error},
                                   {"below_inverse_square", gap.below_inverse_square}});
            }
            notation += "]";
            if (format == Format::json) {
                nlohmann::ordered_json j;
                j["slope"] = s.to_string();
                j["expansion"] = notation;
                j["terminated"] = expansion.terminated;
                j["quotients"] = expansion.quotients;
                nlohmann::ordered_json conv = nlohmann::ordered_json::array();
                for (const auto& rec : records) {
                    nlohmann::ordered_json obj;
                    for (const auto& [name, value] : rec) obj[name] = value;
                    conv.push_back(obj);
                }
                j["convergents"] = conv;
                out << j.dump(2) << '\n';
            } else {
                write_records(out, records, {"n", "quotient", "p", "q", "abs_error", "below_inverse_square"},
                              format);
            }
            return kOk;
        }

        if (eig->parsed()) {
            const Slope s = Slope::parse(slope_text);
            const double h = parse_h(h_text);
            const auto list = eigenvalues_below(s, AdiabaticScale(h), EnergyWindow::absolute(lambda_of(lambda_text, g)));
            std::vector<Record> records;
            records.reserve(list.size());
            for (const auto& r : list) records.push_back({{"k", r.k}, {"l", r.l}, {"value", r.value}});
            write_records(out, records, {"k", "l", "value"}, format);
            return kOk;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    }
    return kUsage;
}

}  // namespace adiabatic::cli
