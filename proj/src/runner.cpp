#include "subdiff/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "subdiff/cell.hpp"
#include "subdiff/config.hpp"
#include "subdiff/errors.hpp"
#include "subdiff/forward.hpp"
#include "subdiff/fracalc.hpp"
#include "subdiff/inverse.hpp"
#include "subdiff/mlf.hpp"
#include "subdiff/output.hpp"

namespace subdiff::runner {

namespace {

using config::Config;
using nlohmann::ordered_json;
using output::CsvTable;
using output::format_double;

constexpr double kPi = 3.141592653589793238462643383279502884;

std::string error_type_name(const Error& e)
{
    if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
    if (dynamic_cast<const ResolutionError*>(&e)) return "ResolutionError";
    if (dynamic_cast<const NonConvergence*>(&e)) return "NonConvergence";
    if (dynamic_cast<const UnsupportedRange*>(&e)) return "UnsupportedRange";
    if (dynamic_cast<const GridMismatch*>(&e)) return "GridMismatch";
    if (dynamic_cast<const EllipticityViolation*>(&e)) return "EllipticityViolation";
    if (dynamic_cast<const AsymmetricInput*>(&e)) return "AsymmetricInput";
    if (dynamic_cast<const CoefficientOutOfBounds*>(&e)) return "CoefficientOutOfBounds";
    if (dynamic_cast<const SingularSystem*>(&e)) return "SingularSystem";
    if (dynamic_cast<const OutOfDomain*>(&e)) return "OutOfDomain";
    if (dynamic_cast<const ObservationOutOfRange*>(&e)) return "ObservationOutOfRange";
    if (dynamic_cast<const MonotonicityViolation*>(&e)) return "MonotonicityViolation";
    if (dynamic_cast<const DegenerateInitialData*>(&e)) return "DegenerateInitialData";
    if (dynamic_cast<const WindowTooEarly*>(&e)) return "WindowTooEarly";
    if (dynamic_cast<const FamilyNotMonotone*>(&e)) return "FamilyNotMonotone";
    if (dynamic_cast<const InvalidArgument*>(&e)) return "InvalidArgument";
    return "Error";
}

// Run body(0..n-1) on up to `jobs` worker threads.  Results must be written
// into index-addressed slots by the body, so aggregation order never depends
// on completion order.  The first exception wins and is rethrown after join.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body)
{
    const std::size_t width = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
    if (width <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex gate;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(width);
    for (std::size_t w = 0; w < width; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n)
                    return;
                try {
                    body(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(gate);
                    if (!first_error)
                        first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

std::string brief(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// config -> domain objects
// ---------------------------------------------------------------------------

cell::PeriodicCoefficient1D parse_coefficient(const Config& cfg, const std::string& section)
{
    const std::string kind = cfg.get_string(section, "kind");
    const double period = cfg.get_double(section, "period", 1.0);
    if (!(period > 0.0) || !std::isfinite(period))
        cfg.fail(section, "period", "must be a positive number");

    if (kind == "constant") {
        const double value = cfg.get_double(section, "value");
        if (!(value > 0.0))
            cfg.fail(section, "value", "must be positive");
        return cell::PeriodicCoefficient1D::constant(value, period);
    }
    if (kind == "two_phase") {
        const double low = cfg.get_double(section, "low");
        const double high = cfg.get_double(section, "high");
        const double split = cfg.get_double(section, "split", period / 2.0);
        if (!(low > 0.0))
            cfg.fail(section, "low", "must be positive");
        if (!(high > 0.0))
            cfg.fail(section, "high", "must be positive");
        if (!(split > 0.0 && split < period))
            cfg.fail(section, "split", "must lie strictly inside (0, period)");
        return cell::PeriodicCoefficient1D::two_phase(low, high, split, period);
    }
    if (kind == "sinusoid") {
        const double base = cfg.get_double(section, "base");
        const double amplitude = cfg.get_double(section, "amplitude");
        if (!(base > 0.0))
            cfg.fail(section, "base", "must be positive");
        if (!(std::fabs(amplitude) < base))
            cfg.fail(section, "amplitude",
                     "|amplitude| must stay below base so the coefficient remains elliptic");
        return cell::PeriodicCoefficient1D::sinusoid(base, amplitude, period);
    }
    if (kind == "table") {
        const std::string file = cfg.get_string(section, "file");
        if (!std::filesystem::exists(file))
            cfg.fail(section, "file", "referenced file does not exist: " + file);
        std::ifstream in(file);
        std::vector<std::pair<double, double>> points;
        std::string line;
        int line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty() || line.front() == '#')
                continue;
            double y = 0.0, v = 0.0;
            if (std::sscanf(line.c_str(), "%lf , %lf", &y, &v) != 2 &&
                std::sscanf(line.c_str(), "%lf %lf", &y, &v) != 2)
                cfg.fail(section, "file",
                         file + ":" + std::to_string(line_no) + ": expected `y,value`");
            if (!(v > 0.0))
                cfg.fail(section, "file",
                         file + ":" + std::to_string(line_no) + ": values must be positive");
            points.emplace_back(y, v);
        }
        if (points.size() < 2)
            cfg.fail(section, "file", file + ": needs at least two (y, value) rows");
        return cell::PeriodicCoefficient1D::table(std::move(points), period);
    }
    cfg.fail(section, "kind",
             "unknown coefficient kind `" + kind + "` (constant|two_phase|sinusoid|table)");
}

forward::IntervalDomain parse_domain(const Config& cfg)
{
    const double length = cfg.get_double("domain", "length", 1.0);
    if (!(length > 0.0) || !std::isfinite(length))
        cfg.fail("domain", "length", "must be a positive number");
    return forward::IntervalDomain{length};
}

struct TimeBlock {
    double alpha = 0.5;
    double horizon = 1.0;
    long steps = 128;
};

TimeBlock parse_time(const Config& cfg)
{
    TimeBlock tb;
    tb.alpha = cfg.get_double("time", "alpha", 0.5);
    if (!(tb.alpha > 0.0 && tb.alpha < 1.0))
        cfg.fail("time", "alpha", "must lie in the open interval (0, 1)");
    tb.horizon = cfg.get_double("time", "horizon", 1.0);
    if (!(tb.horizon > 0.0) || !std::isfinite(tb.horizon))
        cfg.fail("time", "horizon", "must be a positive number");
    tb.steps = cfg.get_int("time", "steps", 128);
    if (tb.steps < 1)
        cfg.fail("time", "steps", "must be at least 1");
    return tb;
}

double parse_sine_scale(const Config& cfg)
{
    return cfg.get_double("initial", "sine_scale", -1.0);
}

std::function<double(double)> sine_initial(const Config& cfg, double length)
{
    const double scale = parse_sine_scale(cfg);
    return [scale, length](double x) { return scale * std::sin(kPi * x / length); };
}

// Modal data matching the sine profile when no explicit coefficients are
// given: u0 = s sin(pi x / L) projects to c_1 = s sqrt(L / 2).
std::vector<double> parse_initial_coeffs(const Config& cfg, double length)
{
    if (cfg.has("initial", "coeffs"))
        return cfg.get_double_list("initial", "coeffs");
    return {parse_sine_scale(cfg) * std::sqrt(length / 2.0)};
}

// ---------------------------------------------------------------------------
// subcommand payloads
// ---------------------------------------------------------------------------

struct CommandOutput {
    ordered_json result;
    std::vector<std::pair<std::string, std::string>> files; // name -> content
    std::string key_outputs;
    std::string summary;
};

std::optional<double> closed_form_scalar(const Config& cfg)
{
    const std::string kind = cfg.get_string("coefficient", "kind");
    const double period = cfg.get_double("coefficient", "period", 1.0);
    if (kind == "constant")
        return cfg.get_double("coefficient", "value");
    if (kind == "sinusoid") {
        const double base = cfg.get_double("coefficient", "base");
        const double amp = cfg.get_double("coefficient", "amplitude");
        return std::sqrt(base * base - amp * amp);
    }
    if (kind == "two_phase") {
        const double low = cfg.get_double("coefficient", "low");
        const double high = cfg.get_double("coefficient", "high");
        const double split = cfg.get_double("coefficient", "split", period / 2.0);
        return period / (split / low + (period - split) / high);
    }
    return std::nullopt; // tabulated data has no closed form
}

CommandOutput cmd_homogenize(const Config& cfg)
{
    const long quad = cfg.get_int("homogenize", "quad_points", 10000);
    if (quad < 2)
        cfg.fail("homogenize", "quad_points", "must be at least 2");
    const long verify_points = cfg.get_int("homogenize", "verify_points", 256);
    if (verify_points < 8)
        cfg.fail("homogenize", "verify_points", "must be at least 8");
    const bool layered = cfg.get_bool("homogenize", "layered", false);
    const auto q = static_cast<std::size_t>(quad);
    const auto vp = static_cast<std::size_t>(verify_points);

    CommandOutput out;
    CsvTable table({"quantity", "value"});

    if (!layered) {
        const auto a = parse_coefficient(cfg, "coefficient");
        const double a0 = cell::harmonic_mean(a, q);
        const double mean = cell::mean_value(a, q);

        // independent definition check through the corrector route, with the
        // scalar embedded as the first block of a diagonal matrix
        const auto embedded = cell::LayeredMatrix::diagonal(
            {a, cell::PeriodicCoefficient1D::constant(1.0, a.period)});
        const auto tensor = cell::homogenize_layered(embedded, q);
        const double discrepancy = cell::verify_against_definition(embedded, tensor, vp);

        out.result["effective"] = a0;
        out.result["cell_mean"] = mean;
        out.result["definition_check"] = discrepancy;
        table.add_row({"effective", CsvTable::cell(a0)});
        table.add_row({"cell_mean", CsvTable::cell(mean)});
        table.add_row({"definition_check", CsvTable::cell(discrepancy)});

        std::string closed_note;
        if (const auto closed = closed_form_scalar(cfg)) {
            const double gap = std::fabs(a0 - *closed);
            out.result["closed_form"] = *closed;
            out.result["closed_form_gap"] = gap;
            table.add_row({"closed_form", CsvTable::cell(*closed)});
            table.add_row({"closed_form_gap", CsvTable::cell(gap)});
            closed_note = ", closed form " + brief(*closed) + " (gap " + brief(gap) + ")";
        }

        const auto chi = cell::corrector_1d(a, 512);
        out.files.emplace_back("corrector.dat", output::dat_series(chi.grid, chi.chi));

        out.key_outputs = "effective=" + format_double(a0) +
                          ";definition_check=" + format_double(discrepancy);
        out.summary = "effective coefficient " + brief(a0) + closed_note +
                      ", definition check " + brief(discrepancy);
    } else {
        const auto a1 = parse_coefficient(cfg, "coefficient");
        const auto a2 = parse_coefficient(cfg, "coefficient2");
        const auto A = cell::LayeredMatrix::diagonal({a1, a2});
        const auto tensor = cell::homogenize_layered(A, q);
        const double discrepancy = cell::verify_against_definition(A, tensor, vp);

        // closed forms for a diagonal laminate: harmonic mean along the
        // layering direction, plain mean across it
        const double closed11 = cell::harmonic_mean(a1, q);
        const double closed22 = cell::mean_value(a2, q);
        const double gap = std::max(std::fabs(tensor(0, 0) - closed11),
                                    std::fabs(tensor(1, 1) - closed22));
        const auto ev = tensor.eigenvalues();

        out.result["tensor"] = {{tensor(0, 0), tensor(0, 1)}, {tensor(1, 0), tensor(1, 1)}};
        out.result["eigenvalues"] = {ev[0], ev[1]};
        out.result["definition_check"] = discrepancy;
        out.result["closed_form"] = {{"a11", closed11}, {"a22", closed22}};
        out.result["closed_form_gap"] = gap;

        table.add_row({"a11", CsvTable::cell(tensor(0, 0))});
        table.add_row({"a12", CsvTable::cell(tensor(0, 1))});
        table.add_row({"a21", CsvTable::cell(tensor(1, 0))});
        table.add_row({"a22", CsvTable::cell(tensor(1, 1))});
        table.add_row({"definition_check", CsvTable::cell(discrepancy)});
        table.add_row({"closed_form_gap", CsvTable::cell(gap)});

        out.key_outputs = "a11=" + format_double(tensor(0, 0)) +
                          ";a22=" + format_double(tensor(1, 1)) +
                          ";definition_check=" + format_double(discrepancy);
        out.summary = "effective tensor diag(" + brief(tensor(0, 0)) + ", " +
                      brief(tensor(1, 1)) + "), definition check " + brief(discrepancy);
    }

    out.files.emplace_back("table.csv", table.str());
    return out;
}

CommandOutput cmd_convergence(const Config& cfg, int jobs)
{
    const auto domain = parse_domain(cfg);
    const auto tb = parse_time(cfg);
    const long cells = cfg.get_int("grid", "cells", 512);
    if (cells < 4)
        cfg.fail("grid", "cells", "must be at least 4");
    const auto a = parse_coefficient(cfg, "coefficient");
    const auto eps = cfg.get_double_list("convergence", "eps");
    if (eps.empty())
        cfg.fail("convergence", "eps", "needs at least one value");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0))
            cfg.fail("convergence", "eps", "entries must be positive");
        if (i && !(eps[i] < eps[i - 1]))
            cfg.fail("convergence", "eps", "entries must decrease strictly");
    }

    // the sweep is only meaningful when the finest microstructure is
    // resolved: at least 16 cells per oscillation period
    for (const double e : eps) {
        const double needed = 16.0 * domain.length / (e * a.period);
        if (static_cast<double>(cells) < needed) {
            std::ostringstream os;
            os << "epsilon = " << format_double(e) << " needs at least "
               << static_cast<long>(std::ceil(needed)) << " cells (16 per period of "
               << format_double(e * a.period) << "); configured " << cells;
            throw ResolutionError(os.str());
        }
    }

    const fracalc::TimeGrid grid(tb.horizon, static_cast<std::size_t>(tb.steps));
    const auto u0 = sine_initial(cfg, domain.length);
    const double band_lo = 0.5 * a.nu;
    const double band_hi = 2.0 * a.mu;

    // reference: the effective constant-coefficient problem on the very same
    // grids, so the comparison isolates the microstructure error
    const double a0 = cell::harmonic_mean(a, 10000);
    forward::FdmProblem ref;
    ref.domain = domain;
    ref.diffusion = [a0](double) { return a0; };
    ref.nu = band_lo;
    ref.mu = band_hi;
    ref.initial = u0;
    const auto u_ref = forward::fdm_solve(ref, static_cast<std::size_t>(cells), grid, tb.alpha);

    std::vector<double> dist(eps.size(), 0.0);
    std::vector<bool> resolved(eps.size(), true);
    parallel_for(eps.size(), jobs, [&](std::size_t i) {
        const auto a_eps = cell::oscillate(a, eps[i]);
        forward::FdmProblem prob;
        prob.domain = domain;
        prob.diffusion = [a_eps](double x) { return a_eps(x); };
        prob.nu = band_lo;
        prob.mu = band_hi;
        prob.initial = u0;
        prob.micro_period = eps[i] * a.period;
        const auto u_eps =
            forward::fdm_solve(prob, static_cast<std::size_t>(cells), grid, tb.alpha);
        dist[i] = forward::l2_space_time_distance(u_eps, u_ref);
        resolved[i] = !u_eps.under_resolved;
    });

    CsvTable table({"epsilon", "error", "rate"});
    ordered_json rows = ordered_json::array();
    bool strictly_decreasing = true;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        double rate = std::numeric_limits<double>::quiet_NaN();
        if (i && dist[i] > 0.0 && dist[i - 1] > 0.0)
            rate = std::log(dist[i - 1] / dist[i]) / std::log(eps[i - 1] / eps[i]);
        if (i && !(dist[i] < dist[i - 1]))
            strictly_decreasing = false;
        table.add_row({CsvTable::cell(eps[i]), CsvTable::cell(dist[i]),
                       std::isfinite(rate) ? CsvTable::cell(rate) : std::string{}});
        ordered_json row;
        row["epsilon"] = eps[i];
        row["error"] = dist[i];
        if (std::isfinite(rate))
            row["rate"] = rate;
        else
            row["rate"] = nullptr;
        row["resolved"] = static_cast<bool>(resolved[i]);
        rows.push_back(std::move(row));
    }

    CommandOutput out;
    out.result["effective_reference"] = a0;
    out.result["cells"] = cells;
    out.result["steps"] = tb.steps;
    out.result["rows"] = std::move(rows);
    out.result["strictly_decreasing"] = strictly_decreasing;
    out.files.emplace_back("table.csv", table.str());
    out.files.emplace_back("error.dat", output::dat_series(eps, dist));
    out.key_outputs = "first_error=" + format_double(dist.front()) +
                      ";last_error=" + format_double(dist.back());
    out.summary = std::to_string(eps.size()) + " epsilon values: error " + brief(dist.front()) +
                  " -> " + brief(dist.back()) +
                  (strictly_decreasing ? " (strictly decreasing)" : "");
    return out;
}

CommandOutput cmd_solve(const Config& cfg)
{
    const std::string method = cfg.get_string("solve", "method", "spectral");
    const long samples = cfg.get_int("solve", "samples", 201);
    if (samples < 2)
        cfg.fail("solve", "samples", "must be at least 2");
    const auto domain = parse_domain(cfg);
    const auto tb = parse_time(cfg);

    std::vector<double> x(static_cast<std::size_t>(samples));
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = domain.length * static_cast<double>(i) / static_cast<double>(samples - 1);
    std::vector<double> profile(x.size(), 0.0);

    CommandOutput out;
    out.result["method"] = method;
    out.result["alpha"] = tb.alpha;
    out.result["horizon"] = tb.horizon;

    if (method == "spectral") {
        const double p = cfg.get_double("solve", "p", 1.0);
        if (!(p > 0.0))
            cfg.fail("solve", "p", "must be positive");
        const long modes = cfg.get_int("solve", "modes", 64);
        if (modes < 1)
            cfg.fail("solve", "modes", "must be at least 1");
        const auto coeffs = parse_initial_coeffs(cfg, domain.length);
        const auto u =
            forward::spectral_solve(domain, p, tb.alpha, coeffs, static_cast<int>(modes));
        for (std::size_t i = 0; i < x.size(); ++i)
            profile[i] = u(x[i], tb.horizon);
        out.result["p"] = p;
        out.result["modes"] = modes;
        out.result["tail_bound"] = u.tail_bound;
    } else if (method == "fdm") {
        const auto a = parse_coefficient(cfg, "coefficient");
        const double epsilon = cfg.get_double("solve", "epsilon", 0.0);
        if (epsilon < 0.0)
            cfg.fail("solve", "epsilon", "must be nonnegative (0 disables oscillation)");
        const long cells = cfg.get_int("grid", "cells", 256);
        if (cells < 4)
            cfg.fail("grid", "cells", "must be at least 4");

        forward::FdmProblem prob;
        prob.domain = domain;
        if (epsilon > 0.0) {
            const auto a_eps = cell::oscillate(a, epsilon);
            prob.diffusion = [a_eps](double xx) { return a_eps(xx); };
            prob.micro_period = epsilon * a.period;
        } else {
            prob.diffusion = [a](double xx) { return a(xx); };
        }
        prob.nu = 0.5 * a.nu;
        prob.mu = 2.0 * a.mu;
        prob.initial = sine_initial(cfg, domain.length);
        const fracalc::TimeGrid grid(tb.horizon, static_cast<std::size_t>(tb.steps));
        const auto field =
            forward::fdm_solve(prob, static_cast<std::size_t>(cells), grid, tb.alpha);

        // interpolate the final row onto the requested sample points
        const auto& fx = field.x;
        const auto& last = field.values.back();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto it = std::upper_bound(fx.begin(), fx.end(), x[i]);
            if (it == fx.begin()) {
                profile[i] = last.front();
            } else if (it == fx.end()) {
                profile[i] = last.back();
            } else {
                const std::size_t j = static_cast<std::size_t>(it - fx.begin());
                const double w = (x[i] - fx[j - 1]) / (fx[j] - fx[j - 1]);
                profile[i] = (1.0 - w) * last[j - 1] + w * last[j];
            }
        }
        out.result["cells"] = cells;
        out.result["steps"] = tb.steps;
        out.result["epsilon"] = epsilon;
        out.result["under_resolved"] = field.under_resolved;
    } else {
        cfg.fail("solve", "method", "unknown method `" + method + "` (spectral|fdm)");
    }

    double max_abs = 0.0;
    double l2 = 0.0;
    const double dx = domain.length / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < profile.size(); ++i) {
        max_abs = std::max(max_abs, std::fabs(profile[i]));
        const double w = (i == 0 || i + 1 == profile.size()) ? 0.5 : 1.0;
        l2 += w * profile[i] * profile[i] * dx;
    }
    l2 = std::sqrt(l2);
    out.result["final_max_abs"] = max_abs;
    out.result["final_l2"] = l2;

    CsvTable table({"x", "u_final"});
    for (std::size_t i = 0; i < x.size(); ++i)
        table.add_row({CsvTable::cell(x[i]), CsvTable::cell(profile[i])});
    out.files.emplace_back("table.csv", table.str());
    out.files.emplace_back("profile.dat", output::dat_series(x, profile));
    out.key_outputs = "final_max_abs=" + format_double(max_abs);
    out.summary = method + " solve to t = " + brief(tb.horizon) + ": max |u(., T)| = " +
                  brief(max_abs) + ", L2 norm " + brief(l2);
    return out;
}

void append_quantity_rows(CsvTable& table, const ordered_json& result)
{
    for (const auto& [key, value] : result.items()) {
        if (value.is_number())
            table.add_row({key, format_double(value.get<double>())});
        else if (value.is_boolean())
            table.add_row({key, value.get<bool>() ? "true" : "false"});
        else if (value.is_string())
            table.add_row({key, value.get<std::string>()});
    }
}

CommandOutput cmd_invert(const Config& cfg)
{
    const std::string mode = cfg.get_string("invert", "mode");
    const auto domain = parse_domain(cfg);
    const auto tb = parse_time(cfg);
    CommandOutput out;
    out.result["mode"] = mode;

    if (mode == "counterexample") {
        const double x0 = cfg.get_double("invert", "x0", kPi / 3.0);
        const long n_times = cfg.get_int("invert", "n_times", 100);
        if (n_times < 2)
            cfg.fail("invert", "n_times", "must be at least 2");
        const double t_max = cfg.get_double("invert", "t_max", 10.0);
        if (!(t_max > 0.0))
            cfg.fail("invert", "t_max", "must be positive");

        const auto rep =
            inverse::counterexample_demo(tb.alpha, static_cast<int>(n_times), t_max, x0);

        out.result["x0"] = rep.x0;
        out.result["p"] = rep.p;
        out.result["q"] = rep.q;
        out.result["max_gap"] = rep.max_gap;
        out.result["projection_q"] = rep.projection_q;

        CsvTable table({"t", "trace_p", "trace_q"});
        for (std::size_t i = 0; i < rep.times.size(); ++i)
            table.add_row({CsvTable::cell(rep.times[i]), CsvTable::cell(rep.trace_p[i]),
                           CsvTable::cell(rep.trace_q[i])});
        out.files.emplace_back("table.csv", table.str());
        out.key_outputs = "max_gap=" + format_double(rep.max_gap);
        out.summary = "two coefficients, one trace: max gap " + brief(rep.max_gap) +
                      ", slow-mode projection of the second model " + brief(rep.projection_q);
        return out;
    }

    inverse::RecoverySpec spec;
    spec.domain = domain;
    spec.alpha = tb.alpha;
    spec.u0_coeffs = parse_initial_coeffs(cfg, domain.length);
    spec.n_max = static_cast<int>(cfg.get_int("invert", "modes", 64));
    spec.nu = cfg.get_double("invert", "nu", 0.5);
    spec.mu = cfg.get_double("invert", "mu", 3.0);
    if (!(spec.nu > 0.0 && spec.nu < spec.mu))
        cfg.fail("invert", "nu", "needs 0 < nu < mu");
    spec.tolerance = cfg.get_double("invert", "tolerance", 1e-8);
    if (!(spec.tolerance > 0.0))
        cfg.fail("invert", "tolerance", "must be positive");

    double p_true = std::numeric_limits<double>::quiet_NaN();
    const std::string obs_raw = cfg.get_string("invert", "observation", "auto");

    if (mode == "point" || mode == "region") {
        if (mode == "point") {
            spec.kind = inverse::ObservationKind::point;
            spec.x0 = cfg.get_double("invert", "x0", domain.length / 2.0);
            spec.t0 = cfg.get_double("invert", "t0", tb.horizon);
        } else {
            spec.kind = inverse::ObservationKind::region;
            spec.x_lo = cfg.get_double("invert", "x_lo", 0.25 * domain.length);
            spec.x_hi = cfg.get_double("invert", "x_hi", 0.75 * domain.length);
            spec.t_lo = cfg.get_double("invert", "t_lo", 0.5 * tb.horizon);
            spec.t_hi = cfg.get_double("invert", "t_hi", tb.horizon);
            if (!(spec.x_lo < spec.x_hi))
                cfg.fail("invert", "x_lo", "window needs x_lo < x_hi");
            if (!(spec.t_lo < spec.t_hi))
                cfg.fail("invert", "t_lo", "window needs t_lo < t_hi");
        }
        if (obs_raw == "auto") {
            p_true = cfg.get_double("invert", "p_true");
            if (!(p_true >= spec.nu && p_true <= spec.mu))
                cfg.fail("invert", "p_true", "must lie inside [nu, mu]");
            spec.observation = inverse::forward_data(p_true, spec);
        } else {
            spec.observation = cfg.get_double("invert", "observation");
        }

        const auto rec = inverse::recover_monotone(spec);
        out.result["observation"] = spec.observation;
        out.result["p_hat"] = rec.p_hat;
        out.result["bracket"] = {rec.bracket_lo, rec.bracket_hi};
        out.result["iterations"] = rec.iterations;
        out.result["residual"] = rec.residual;
        out.result["stability"] = rec.stability;
        if (std::isfinite(p_true)) {
            out.result["p_true"] = p_true;
            out.result["abs_error"] = std::fabs(rec.p_hat - p_true);
        }
        out.key_outputs = "p_hat=" + format_double(rec.p_hat);
        out.summary = mode + " recovery: p_hat = " + brief(rec.p_hat) + " in " +
                      std::to_string(rec.iterations) + " iterations, stability " +
                      brief(rec.stability);
    } else if (mode == "trace") {
        spec.x0 = cfg.get_double("invert", "x0", domain.length / 2.0);
        const double fit_lo = cfg.get_double("invert", "fit_lo", 50.0);
        const double fit_hi = cfg.get_double("invert", "fit_hi", 500.0);
        if (!(fit_lo > 0.0 && fit_lo < fit_hi))
            cfg.fail("invert", "fit_lo", "window needs 0 < fit_lo < fit_hi");
        const long n_times = cfg.get_int("invert", "n_times", 60);
        if (n_times < 2)
            cfg.fail("invert", "n_times", "must be at least 2");
        if (obs_raw != "auto")
            cfg.fail("invert", "observation",
                     "trace mode synthesizes its own data; set p_true instead");
        p_true = cfg.get_double("invert", "p_true");
        if (!(p_true >= spec.nu && p_true <= spec.mu))
            cfg.fail("invert", "p_true", "must lie inside [nu, mu]");

        const auto u = forward::spectral_solve(spec.domain, p_true, spec.alpha, spec.u0_coeffs,
                                               spec.n_max);
        std::vector<double> times(static_cast<std::size_t>(n_times));
        std::vector<double> values(times.size());
        const double ratio = fit_hi / fit_lo;
        for (std::size_t i = 0; i < times.size(); ++i) {
            times[i] = fit_lo * std::pow(ratio, static_cast<double>(i) /
                                                    static_cast<double>(times.size() - 1));
            values[i] = u(spec.x0, times[i]);
        }

        const auto rec = inverse::recover_from_trace(times, values, spec, fit_lo, fit_hi);
        out.result["p_hat"] = rec.p_hat;
        out.result["bracket"] = {rec.bracket_lo, rec.bracket_hi};
        out.result["residual"] = rec.residual;
        out.result["contamination"] = rec.contamination;
        out.result["stability"] = rec.stability;
        out.result["p_true"] = p_true;
        out.result["rel_error"] = std::fabs(rec.p_hat - p_true) / std::fabs(p_true);
        out.files.emplace_back("trace.dat", output::dat_series(times, values));
        out.key_outputs = "p_hat=" + format_double(rec.p_hat);
        out.summary = "trace recovery: p_hat = " + brief(rec.p_hat) + " (rel error " +
                      brief(std::fabs(rec.p_hat - p_true) / std::fabs(p_true)) +
                      ", contamination bound " + brief(rec.contamination) + ")";
    } else {
        cfg.fail("invert", "mode",
                 "unknown mode `" + mode + "` (point|region|trace|counterexample)");
    }

    CsvTable table({"quantity", "value"});
    append_quantity_rows(table, out.result);
    out.files.emplace_back("table.csv", table.str());
    return out;
}

CommandOutput cmd_cross(const Config& cfg, int jobs)
{
    const std::string mode = cfg.get_string("cross", "mode");
    const auto domain = parse_domain(cfg);
    const auto tb = parse_time(cfg);
    CommandOutput out;
    out.result["mode"] = mode;

    if (mode == "to_homogenized") {
        const auto a = parse_coefficient(cfg, "coefficient");
        const auto eps = cfg.get_double_list("cross", "eps");
        if (eps.empty())
            cfg.fail("cross", "eps", "needs at least one value");
        for (std::size_t i = 0; i < eps.size(); ++i) {
            if (!(eps[i] > 0.0))
                cfg.fail("cross", "eps", "entries must be positive");
            if (i && !(eps[i] < eps[i - 1]))
                cfg.fail("cross", "eps", "entries must decrease strictly");
        }

        inverse::CrossSpec cs;
        cs.length = domain.length;
        cs.alpha = tb.alpha;
        cs.t_final = tb.horizon;
        cs.steps = static_cast<std::size_t>(tb.steps);
        cs.space_cells = static_cast<std::size_t>(cfg.get_int("grid", "cells", 128));
        if (cs.space_cells < 4)
            cfg.fail("grid", "cells", "must be at least 4");
        cs.initial = sine_initial(cfg, domain.length);
        cs.x_lo = cfg.get_double("cross", "x_lo", 0.25 * domain.length);
        cs.x_hi = cfg.get_double("cross", "x_hi", 0.75 * domain.length);
        cs.t_lo = cfg.get_double("cross", "t_lo", 0.5 * tb.horizon);
        cs.t_hi = cfg.get_double("cross", "t_hi", tb.horizon);
        if (!(cs.x_lo < cs.x_hi))
            cfg.fail("cross", "x_lo", "window needs x_lo < x_hi");
        if (!(cs.t_lo < cs.t_hi))
            cfg.fail("cross", "t_lo", "window needs t_lo < t_hi");
        cs.tolerance = cfg.get_double("cross", "tolerance", 1e-6);
        if (!(cs.tolerance > 0.0))
            cfg.fail("cross", "tolerance", "must be positive");

        const double reference = cell::harmonic_mean(a, 10000);
        std::vector<inverse::CrossRow> rows(eps.size());
        parallel_for(eps.size(), jobs, [&](std::size_t i) {
            const std::vector<double> one{eps[i]};
            rows[i] = inverse::cross_recover_homogenized(a, one, cs).front();
        });

        CsvTable table({"epsilon", "a0_hat", "error", "resolved"});
        ordered_json jrows = ordered_json::array();
        bool strictly_decreasing = true;
        std::vector<double> errs(eps.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            errs[i] = rows[i].error;
            if (i && !(rows[i].error < rows[i - 1].error))
                strictly_decreasing = false;
            table.add_row({CsvTable::cell(rows[i].epsilon), CsvTable::cell(rows[i].a0_hat),
                           CsvTable::cell(rows[i].error),
                           rows[i].under_resolved ? "false" : "true"});
            ordered_json row;
            row["epsilon"] = rows[i].epsilon;
            row["a0_hat"] = rows[i].a0_hat;
            row["error"] = rows[i].error;
            row["resolved"] = !rows[i].under_resolved;
            jrows.push_back(std::move(row));
        }

        out.result["reference"] = reference;
        out.result["rows"] = std::move(jrows);
        out.result["strictly_decreasing"] = strictly_decreasing;
        out.files.emplace_back("table.csv", table.str());
        out.files.emplace_back("error.dat", output::dat_series(eps, errs));
        out.key_outputs = "reference=" + format_double(reference) +
                          ";last_error=" + format_double(errs.back());
        out.summary = "effective-coefficient recovery from " + std::to_string(eps.size()) +
                      " microstructures: |a0_hat - " + brief(reference) + "| down to " +
                      brief(errs.back());
        return out;
    }

    if (mode == "to_periodic") {
        const std::string family_kind = cfg.get_string("cross", "family");
        const double s_lo = cfg.get_double("cross", "s_lo");
        const double s_hi = cfg.get_double("cross", "s_hi");
        if (!(s_lo < s_hi))
            cfg.fail("cross", "s_lo", "family range needs s_lo < s_hi");
        const double period = cfg.get_double("cross", "period", 1.0);
        if (!(period > 0.0))
            cfg.fail("cross", "period", "must be positive");

        inverse::CoefficientFamily family;
        double family_nu = 0.0, family_mu = 0.0;
        if (family_kind == "sinusoid") {
            const double amplitude = cfg.get_double("cross", "amplitude", 1.0);
            if (!(s_lo - std::fabs(amplitude) > 0.0))
                cfg.fail("cross", "amplitude",
                         "smallest family member s_lo + amplitude sin must stay positive");
            family = [amplitude, period](double s) {
                return cell::PeriodicCoefficient1D::sinusoid(s, amplitude, period);
            };
            family_nu = s_lo - std::fabs(amplitude);
            family_mu = s_hi + std::fabs(amplitude);
        } else if (family_kind == "constant") {
            family = [period](double s) {
                return cell::PeriodicCoefficient1D::constant(s, period);
            };
            family_nu = s_lo;
            family_mu = s_hi;
        } else {
            cfg.fail("cross", "family",
                     "unknown family `" + family_kind + "` (sinusoid|constant)");
        }

        inverse::RecoverySpec spec;
        spec.domain = domain;
        spec.alpha = tb.alpha;
        spec.u0_coeffs = parse_initial_coeffs(cfg, domain.length);
        spec.kind = inverse::ObservationKind::region;
        spec.x_lo = cfg.get_double("cross", "x_lo", 0.25 * domain.length);
        spec.x_hi = cfg.get_double("cross", "x_hi", 0.75 * domain.length);
        spec.t_lo = cfg.get_double("cross", "t_lo", 0.5 * tb.horizon);
        spec.t_hi = cfg.get_double("cross", "t_hi", tb.horizon);
        if (!(spec.x_lo < spec.x_hi))
            cfg.fail("cross", "x_lo", "window needs x_lo < x_hi");
        if (!(spec.t_lo < spec.t_hi))
            cfg.fail("cross", "t_lo", "window needs t_lo < t_hi");
        spec.tolerance = cfg.get_double("cross", "tolerance", 1e-8);
        if (!(spec.tolerance > 0.0))
            cfg.fail("cross", "tolerance", "must be positive");

        double s_true = std::numeric_limits<double>::quiet_NaN();
        const std::string obs_raw = cfg.get_string("cross", "observation", "auto");
        if (obs_raw == "auto") {
            s_true = cfg.get_double("cross", "s_true");
            if (!(s_true >= s_lo && s_true <= s_hi))
                cfg.fail("cross", "s_true", "must lie inside [s_lo, s_hi]");
            const double a0_true = cell::harmonic_mean(family(s_true), 10000);
            auto gen = spec;
            gen.nu = 0.5 * a0_true;
            gen.mu = 2.0 * a0_true;
            spec.observation = inverse::forward_data(a0_true, gen);
        } else {
            spec.observation = cfg.get_double("cross", "observation");
        }

        const auto rec = inverse::cross_recover_periodic(family, s_lo, s_hi, spec);
        const auto sandwich =
            inverse::sandwich_check(family(s_hi), family(s_lo), family_nu, family_mu);

        out.result["s_hat"] = rec.s_hat;
        out.result["a0_hat"] = rec.a0_hat;
        out.result["a0_at_s_hat"] = rec.a0_at_s_hat;
        out.result["iterations"] = rec.iterations;
        out.result["lower_constant"] = rec.lower_constant;
        out.result["upper_constant"] = rec.upper_constant;
        if (std::isfinite(s_true)) {
            out.result["s_true"] = s_true;
            out.result["abs_error"] = std::fabs(rec.s_hat - s_true);
        }
        out.result["stage1"] = {{"p_hat", rec.stage1.p_hat},
                                {"iterations", rec.stage1.iterations},
                                {"residual", rec.stage1.residual},
                                {"stability", rec.stage1.stability}};
        out.result["endpoint_sandwich"] = {
            {"l1_distance", sandwich.l1_distance}, {"gap", sandwich.gap},
            {"lower", sandwich.lower},             {"upper", sandwich.upper},
            {"ordered", sandwich.ordered},         {"holds", sandwich.holds}};

        CsvTable table({"quantity", "value"});
        table.add_row({"s_hat", CsvTable::cell(rec.s_hat)});
        table.add_row({"a0_hat", CsvTable::cell(rec.a0_hat)});
        table.add_row({"a0_at_s_hat", CsvTable::cell(rec.a0_at_s_hat)});
        table.add_row({"lower_constant", CsvTable::cell(rec.lower_constant)});
        table.add_row({"upper_constant", CsvTable::cell(rec.upper_constant)});
        table.add_row({"sandwich_gap", CsvTable::cell(sandwich.gap)});
        table.add_row({"sandwich_holds", sandwich.holds ? "true" : "false"});
        out.files.emplace_back("table.csv", table.str());
        out.key_outputs = "s_hat=" + format_double(rec.s_hat);
        out.summary = "family recovery: s_hat = " + brief(rec.s_hat) + ", a0_hat = " +
                      brief(rec.a0_hat) + ", endpoint sandwich " +
                      (sandwich.holds ? "holds" : "FAILS");
        return out;
    }

    cfg.fail("cross", "mode", "unknown mode `" + mode + "` (to_homogenized|to_periodic)");
}

CommandOutput dispatch(const std::string& subcommand, const Config& cfg, int jobs)
{
    if (subcommand == "homogenize")
        return cmd_homogenize(cfg);
    if (subcommand == "convergence")
        return cmd_convergence(cfg, jobs);
    if (subcommand == "solve")
        return cmd_solve(cfg);
    if (subcommand == "invert")
        return cmd_invert(cfg);
    if (subcommand == "cross")
        return cmd_cross(cfg, jobs);
    throw InvalidArgument("unknown subcommand `" + subcommand + "`");
}

RunOutcome report_error(const std::string& subcommand, const std::string& scenario,
                        const std::string& hash, const std::filesystem::path& out_dir,
                        const std::string& type, const std::string& message)
{
    ordered_json envelope;
    envelope["scenario"] = scenario;
    envelope["subcommand"] = subcommand;
    envelope["input_hash"] = hash;
    envelope["status"] = "error";
    envelope["error"] = {{"type", type}, {"message", message}};
    try {
        output::write_text_file(out_dir / "result.json", envelope.dump(2) + "\n");
        output::append_ledger(out_dir / "ledger.csv", scenario, subcommand, hash,
                              "error=" + type, {"result.json"});
    } catch (...) {
        // reporting must never mask the original failure
    }
    return RunOutcome{1, "error: " + type + ": " + message};
}

} // namespace

RunOutcome run(const std::string& subcommand, const std::filesystem::path& config_path,
               const std::filesystem::path& out_dir, int jobs)
{
    std::string scenario = config_path.stem().string();
    std::string hash;
    try {
        const Config cfg = Config::parse_file(config_path.string());
        scenario = cfg.get_string("scenario", "id", scenario);
        hash = cfg.input_hash_hex();

        CommandOutput cmd = dispatch(subcommand, cfg, jobs);

        ordered_json envelope;
        envelope["scenario"] = scenario;
        envelope["subcommand"] = subcommand;
        envelope["input_hash"] = hash;
        envelope["status"] = "ok";
        for (auto& [key, value] : cmd.result.items())
            envelope[key] = value;

        std::vector<std::string> artifacts{"result.json"};
        output::write_text_file(out_dir / "result.json", envelope.dump(2) + "\n");
        for (const auto& [name, content] : cmd.files) {
            output::write_text_file(out_dir / name, content);
            artifacts.push_back(name);
        }
        output::append_ledger(out_dir / "ledger.csv", scenario, subcommand, hash,
                              cmd.key_outputs, artifacts);
        return RunOutcome{0, cmd.summary};
    } catch (const Error& e) {
        return report_error(subcommand, scenario, hash, out_dir, error_type_name(e), e.what());
    } catch (const std::exception& e) {
        return report_error(subcommand, scenario, hash, out_dir, "Internal", e.what());
    }
}

RunOutcome run_mlf_table(double alpha, double z_from, double z_to, long points,
                         const std::filesystem::path& out_dir)
{
    try {
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw InvalidArgument("alpha must lie in (0, 1]");
        if (points < 2)
            throw InvalidArgument("points must be at least 2");
        if (!(z_from <= z_to))
            throw InvalidArgument("need z_from <= z_to");

        CsvTable table({"z", "value"});
        for (long i = 0; i < points; ++i) {
            const double z =
                z_from + (z_to - z_from) * static_cast<double>(i) /
                             static_cast<double>(points - 1);
            table.add_row({CsvTable::cell(z), CsvTable::cell(mlf::ml(alpha, z))});
        }
        output::write_text_file(out_dir / "mlf_table.csv", table.str());
        return RunOutcome{0, std::to_string(points) + " relaxation values on [" +
                                 brief(z_from) + ", " + brief(z_to) + "]"};
    } catch (const Error& e) {
        return report_error("mlf-table", "mlf-table", "", out_dir, error_type_name(e),
                            e.what());
    } catch (const std::exception& e) {
        return report_error("mlf-table", "mlf-table", "", out_dir, "Internal", e.what());
    }
}

} // namespace subdiff::runner
