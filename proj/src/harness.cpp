#include "arratia/harness.hpp"

#include "arratia/kernel.hpp"
#include "arratia/oracle.hpp"
#include "arratia/plot.hpp"
#include "arratia/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace arratia::harness {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        RunConfig tmp;
        tmp.set("item", item);
        out.push_back(tmp.get_real("item", 0.0));
    }
    return out;
}

bool stochastic(Method m) { return m == Method::mc || m == Method::flow || m == Method::series; }

struct Evaluation {
    DensityEstimate estimate;
    std::vector<flow::PointProcessSample> samples;
    flow::Histogram histogram;
};

Evaluation evaluate(Method method, const DriftSpec& d, double t, double x, const RunConfig& cfg,
                    const pde::RotatedGrid* grid = nullptr)
{
    Evaluation ev;
    DensityEstimate& est = ev.estimate;
    switch (method) {
    case Method::oracle:
        if (d.is_zero())
            est.value = oracle::density_zero(t);
        else if (const auto* lin = std::get_if<drift::Linear>(&d.kind()))
            est.value = oracle::density_linear(lin->c, t);
        else
            throw std::invalid_argument("oracle: closed form known only for zero and linear drift");
        break;
    case Method::series:
        if (!d.bounded())
            throw std::invalid_argument("unbounded drift unsupported by series");
        est = series::density_series(x, t, d, cfg.get_real("tol", 1e-6), series_config(cfg));
        break;
    case Method::pde: {
        if (!d.bounded())
            throw std::invalid_argument("unbounded drift unsupported by pde");
        const pde::RotatedGrid g = grid ? *grid : pde_grid(cfg, d, t, {x});
        const pde::WField f = pde::solve(d, t, g);
        if (cfg.has("dump-field"))
            pde::write_field_csv(f, cfg.get("dump-field"));
        est = pde::density_from_field(f, x);
        break;
    }
    case Method::mc:
        est = mc::density_mc(x, t, cfg.get_real("delta", mc::default_delta(t)), d, path_config(cfg),
                             cfg.get_bool("richardson", false));
        break;
    case Method::flow: {
        const flow::FlowConfig fc = flow_config(cfg, t);
        ev.samples = flow::simulate_runs(d, fc);
        const double width = cfg.get_real("width", 0.5);
        const int bins = static_cast<int>(cfg.get_int("bins", 1));
        ev.histogram = flow::empirical_density(ev.samples, {x - 0.5 * width, x + 0.5 * width}, bins, d, fc);
        est = ev.histogram.pooled;
        if (cfg.has("samples-out"))
            flow::write_samples_csv(ev.samples, cfg.get("samples-out"));
        break;
    }
    }
    est.method = method;
    est.seed.reset();
    if (stochastic(method))
        est.seed = cfg.get_uint("seed", kDefaultSeed);
    return ev;
}

CsvRow make_row(const std::string& method, const std::string& drift, double t, double x, DensityEstimate est,
                const std::string& digest, std::optional<double> ms)
{
    est.config_digest = digest;
    return CsvRow{method, drift, t, x, std::move(est), ms};
}

struct BudgetParts {
    double fixed = 0.0;
    double stat = 0.0;
};

BudgetParts budget_parts(const DensityEstimate& e)
{
    const double v = std::abs(e.value);
    switch (e.method) {
    case Method::series: return {e.det_bound, e.stat_error};
    case Method::pde: return {std::max(0.01 * v, e.det_bound), e.stat_error};
    case Method::mc: return {0.02 * v + e.det_bound, e.stat_error};
    case Method::flow: return {0.05 * v + e.det_bound, e.stat_error};
    case Method::oracle: return {0.0, 0.0};
    }
    return {};
}

} // namespace

std::uint64_t resolve_seed(RunConfig& cfg)
{
    std::uint64_t seed = kDefaultSeed;
    if (cfg.has("seed"))
        seed = cfg.get_uint("seed", kDefaultSeed);
    else if (const auto env = seed_from_env())
        seed = *env;
    cfg.set("seed", std::to_string(seed));
    return seed;
}

series::Config series_config(const RunConfig& cfg)
{
    series::Config c;
    c.n_max = static_cast<int>(cfg.get_int("nmax", c.n_max));
    c.samples = cfg.get_uint("samples", c.samples);
    c.seed = cfg.get_uint("seed", kDefaultSeed);
    return c;
}

mc::PathConfig path_config(const RunConfig& cfg)
{
    mc::PathConfig c;
    c.n_paths = cfg.get_uint("paths", c.n_paths);
    c.dt = cfg.get_real("dt", c.dt);
    c.bridge_correction = cfg.get_bool("bridge", c.bridge_correction);
    c.seed = cfg.get_uint("seed", kDefaultSeed);
    return c;
}

flow::FlowConfig flow_config(const RunConfig& cfg, double t)
{
    flow::FlowConfig c;
    c.t = t;
    c.half_width = cfg.get_real("U", c.half_width);
    c.spacing = cfg.get_real("spacing", c.spacing);
    c.dt = cfg.get_real("dt", c.dt);
    c.n_runs = cfg.get_uint("runs", c.n_runs);
    c.eval_margin = cfg.get_real("margin", c.eval_margin);
    c.bridge_merge = cfg.get_bool("bridge-merge", c.bridge_merge);
    c.seed = cfg.get_uint("seed", kDefaultSeed);
    return c;
}

pde::RotatedGrid pde_grid(const RunConfig& cfg, const DriftSpec& d, double t, const std::vector<double>& xs)
{
    if (xs.empty())
        throw std::invalid_argument("pde: no evaluation points");
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    pde::RotatedGrid g = pde::RotatedGrid::for_problem(d, t, {*lo, *hi}, cfg.get_real("h", 0.02),
                                                       cfg.get_real("umax", 0.0), cfg.get_real("vpad", 0.0));
    g.ramp = cfg.get_real("ramp", 1.0);
    return g;
}

double method_budget(const DensityEstimate& e)
{
    const BudgetParts b = budget_parts(e);
    return b.fixed + 3.0 * b.stat;
}

DensityRun run_density(const RunConfig& input)
{
    RunConfig cfg = input;
    resolve_seed(cfg);
    const Method method = parse_method(cfg.get_or("method", "oracle"));
    const DriftSpec d = parse_drift(cfg.get_or("drift", "zero"));
    const double t = cfg.get_real("t", 1.0);
    const double x = cfg.get_real("x", 0.0);
    const std::string digest = cfg.digest();
    const bool timing = cfg.get_bool("timing", false);

    const auto start = Clock::now();
    Evaluation ev = evaluate(method, d, t, x, cfg);
    const std::optional<double> ms = timing ? std::optional<double>(elapsed_ms(start)) : std::nullopt;

    DensityRun run;
    ev.estimate.config_digest = digest;
    run.estimate = ev.estimate;
    const std::string name = to_string(method);
    if (method == Method::flow && ev.histogram.bins.size() > 1) {
        for (std::size_t b = 0; b < ev.histogram.bins.size(); ++b) {
            DensityEstimate e = ev.histogram.bins[b];
            e.seed = ev.estimate.seed;
            const double centre = 0.5 * (ev.histogram.edges[b] + ev.histogram.edges[b + 1]);
            run.rows.push_back(make_row(name, d.describe(), t, centre, e, digest, ms));
        }
    } else {
        run.rows.push_back(make_row(name, d.describe(), t, x, ev.estimate, digest, ms));
    }
    return run;
}

bool ComparisonReport::pass() const
{
    return std::all_of(pairs.begin(), pairs.end(), [](const PairCheck& p) { return p.pass; });
}

ComparisonReport compare_methods(const RunConfig& input)
{
    RunConfig cfg = input;
    resolve_seed(cfg);
    ComparisonReport r;
    const DriftSpec d = parse_drift(cfg.get_or("drift", "zero"));
    r.drift = d.describe();
    r.t = cfg.get_real("t", 1.0);
    r.x = cfg.get_real("x", 0.0);
    std::vector<Method> methods;
    {
        std::stringstream ss(cfg.get_or("methods", "series,pde,mc,flow"));
        std::string item;
        while (std::getline(ss, item, ','))
            methods.push_back(parse_method(item));
    }
    if (methods.empty())
        throw std::invalid_argument("compare: no methods given");
    cfg.set("methods", [&] {
        std::string s;
        for (Method m : methods)
            s += (s.empty() ? "" : ",") + to_string(m);
        return s;
    }());
    const std::string digest = cfg.digest();
    const bool timing = cfg.get_bool("timing", false);
    for (Method m : methods) {
        const auto start = Clock::now();
        DensityEstimate e = evaluate(m, d, r.t, r.x, cfg).estimate;
        e.config_digest = digest;
        const std::optional<double> ms = timing ? std::optional<double>(elapsed_ms(start)) : std::nullopt;
        r.estimates.push_back(e);
        r.rows.push_back(make_row(to_string(m), r.drift, r.t, r.x, e, digest, ms));
    }
    for (std::size_t i = 0; i < r.estimates.size(); ++i)
        for (std::size_t j = i + 1; j < r.estimates.size(); ++j) {
            const auto& a = r.estimates[i];
            const auto& b = r.estimates[j];
            const BudgetParts pa = budget_parts(a), pb = budget_parts(b);
            PairCheck p;
            p.a = a.method;
            p.b = b.method;
            p.difference = a.value - b.value;
            p.budget = pa.fixed + pb.fixed + 3.0 * std::hypot(pa.stat, pb.stat);
            p.pass = std::abs(p.difference) <= p.budget;
            r.pairs.push_back(p);
        }
    return r;
}

NormMode parse_norm_mode(const std::string& s)
{
    if (s == "L1" || s == "l1")
        return NormMode::L1;
    if (s == "Linf" || s == "linf" || s == "Linfty")
        return NormMode::Linf;
    throw std::invalid_argument("unknown norm mode '" + s + "' (L1|Linf)");
}

std::string to_string(NormMode m) { return m == NormMode::L1 ? "L1" : "Linf"; }

bool ConvergenceReport::tail_within_tolerance() const
{
    return std::all_of(rows.begin(), rows.end(),
                       [&](const ConvergenceRow& r) { return r.n < n_pass || r.error <= r.tolerance; });
}

bool ConvergenceReport::last_not_worse() const
{
    if (rows.empty())
        return false;
    const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end(),
                                              [](const auto& a, const auto& b) { return a.n < b.n; });
    return hi->error <= lo->error;
}

std::vector<CsvRow> ConvergenceReport::csv() const
{
    std::vector<CsvRow> out;
    const std::string m = to_string(method);
    out.push_back(CsvRow{m, base, t, x, reference, std::nullopt});
    for (const auto& r : rows)
        out.push_back(CsvRow{m, r.drift, t, x, r.estimate, std::nullopt});
    return out;
}

ConvergenceReport experiment_converge(const DriftSpec& a0, NormMode mode, const std::vector<int>& ns, Method method,
                                      double t, double x, const RunConfig& input)
{
    if (method == Method::flow || method == Method::oracle)
        throw std::invalid_argument("convergence experiment supports series, pde and mc");
    if (!a0.bounded())
        throw std::invalid_argument("convergence experiment needs a bounded base drift");
    if (mode == NormMode::L1 && !a0.is_zero() && !std::holds_alternative<drift::Step>(a0.kind()))
        throw std::invalid_argument("L1 mode needs a compactly supported (step) base drift");
    if (ns.empty())
        throw std::invalid_argument("convergence experiment needs at least one n");
    for (int n : ns)
        if (n < 1)
            throw std::invalid_argument("convergence indices must be >= 1");

    RunConfig cfg = input;
    resolve_seed(cfg);
    cfg.set("experiment", "converge");
    cfg.set("method", to_string(method));
    cfg.set("drift", a0.describe());
    cfg.set("mode", to_string(mode));
    cfg.set("t", t);
    cfg.set("x", x);
    {
        std::string s;
        for (int n : ns)
            s += (s.empty() ? "" : ",") + std::to_string(n);
        cfg.set("ns", s);
    }
    ConvergenceReport rep;
    rep.mode = mode;
    rep.method = method;
    rep.base = a0.describe();
    rep.t = t;
    rep.x = x;
    rep.n_pass = static_cast<int>(cfg.get_int("npass", 8));
    const std::string digest = cfg.digest();

    std::vector<DriftSpec> seq;
    for (int n : ns)
        seq.push_back(mode == NormMode::Linf ? a0.scaled(1.0 + 1.0 / n) : a0.mollify(n));

    // One grid for the whole sequence, sized for the largest drift.
    std::optional<pde::RotatedGrid> grid;
    if (method == Method::pde) {
        const DriftSpec* widest = &a0;
        for (const auto& d : seq)
            if (d.sup_norm() > widest->sup_norm())
                widest = &d;
        grid = pde_grid(cfg, *widest, t, {x});
    }
    const double reach = pde::required_margin(a0.scaled(2.0), t) + 1.0;
    const Interval window{x - reach, x + reach};

    rep.reference = evaluate(method, a0, t, x, cfg, grid ? &*grid : nullptr).estimate;
    rep.reference.config_digest = digest;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        ConvergenceRow row;
        row.n = ns[i];
        row.drift = seq[i].describe();
        row.distance = mode == NormMode::Linf ? l_inf_distance(seq[i], a0, window, 4001)
                                              : l1_distance(seq[i], a0, window);
        row.estimate = evaluate(method, seq[i], t, x, cfg, grid ? &*grid : nullptr).estimate;
        row.estimate.config_digest = digest;
        row.error = std::abs(row.estimate.value - rep.reference.value);
        row.tolerance = method_budget(row.estimate) + method_budget(rep.reference);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

ConvergenceReport experiment_converge(const RunConfig& cfg)
{
    std::vector<int> ns;
    for (double v : parse_list(cfg.get_or("ns", "1,2,4,8,16")))
        ns.push_back(static_cast<int>(std::lround(v)));
    return experiment_converge(parse_drift(cfg.get_or("drift", "zero")), parse_norm_mode(cfg.get_or("mode", "Linf")),
                               ns, parse_method(cfg.get_or("method", "pde")), cfg.get_real("t", 1.0),
                               cfg.get_real("x", 0.0), cfg);
}

bool CoalescenceReport::pass(double tolerance) const
{
    return std::isfinite(slope) && slope > 0.0 && max_relative_residual <= tolerance;
}

std::vector<CsvRow> CoalescenceReport::csv() const
{
    std::vector<CsvRow> out;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        DensityEstimate e;
        e.method = Method::flow;
        e.value = probabilities[i].p;
        e.stat_error = probabilities[i].stderr_;
        e.config_digest = digest;
        e.seed = seed;
        out.push_back(CsvRow{"flow:meeting", drift, t, gaps[i], e, std::nullopt});
    }
    return out;
}

CoalescenceReport experiment_coalescence(const RunConfig& input)
{
    RunConfig cfg = input;
    CoalescenceReport r;
    r.seed = resolve_seed(cfg);
    cfg.set("experiment", "coalescence");
    const DriftSpec d = parse_drift(cfg.get_or("drift", "zero"));
    r.drift = d.describe();
    r.t = cfg.get_real("t", 1.0);
    r.u = cfg.get_real("u", 0.0);
    if (cfg.has("gaps")) {
        r.gaps = parse_list(cfg.get("gaps"));
    } else {
        for (double g : {0.01, 0.02, 0.05})
            r.gaps.push_back(g * std::sqrt(r.t));
    }
    if (r.gaps.empty())
        throw std::invalid_argument("coalescence: no gaps");
    for (double g : r.gaps)
        if (!(g > 0.0))
            throw std::invalid_argument("coalescence: gaps must be positive");
    if (!cfg.has("runs"))
        cfg.set("runs", "1000000");
    r.digest = cfg.digest();
    const flow::FlowConfig fc = flow_config(cfg, r.t);
    double sgp = 0.0, sgg = 0.0, sgg_var = 0.0;
    for (double g : r.gaps) {
        const auto p = flow::meeting_probability(r.u, r.u + g, d, fc);
        r.probabilities.push_back(p);
        sgp += g * p.p;
        sgg += g * g;
        sgg_var += g * g * p.stderr_ * p.stderr_;
    }
    r.slope = sgp / sgg;
    r.slope_stderr = std::sqrt(sgg_var) / sgg;
    for (std::size_t i = 0; i < r.gaps.size(); ++i) {
        const double fit = r.slope * r.gaps[i];
        r.max_relative_residual = std::max(r.max_relative_residual, std::abs(r.probabilities[i].p - fit) / fit);
    }
    if (!(r.slope > 0.0))
        r.max_relative_residual = std::numeric_limits<double>::infinity();
    return r;
}

bool DualityReport::pass() const
{
    return std::abs(result.lhs.p - result.rhs.p) <= 3.0 * result.combined_stderr;
}

std::vector<CsvRow> DualityReport::csv() const
{
    std::vector<CsvRow> out;
    auto row = [&](const std::string& name, const flow::ProbabilityEstimate& p) {
        DensityEstimate e;
        e.method = Method::flow;
        e.value = p.p;
        e.stat_error = p.stderr_;
        e.config_digest = digest;
        e.seed = seed;
        return CsvRow{name, drift, t, u, e, std::nullopt};
    };
    out.push_back(row("flow:occupancy", result.lhs));
    out.push_back(row("flow:meeting-dual", result.rhs));
    return out;
}

DualityReport experiment_duality(const RunConfig& input)
{
    RunConfig cfg = input;
    DualityReport r;
    r.seed = resolve_seed(cfg);
    cfg.set("experiment", "duality");
    const DriftSpec d = parse_drift(cfg.get_or("drift", "zero"));
    r.drift = d.describe();
    r.t = cfg.get_real("t", 1.0);
    r.u = cfg.get_real("u", 0.0);
    r.v = cfg.get_real("v", 0.1);
    if (!(r.u < r.v))
        throw std::invalid_argument("duality: need u < v");
    if (!cfg.has("runs"))
        cfg.set("runs", "10000");
    flow::FlowConfig fc = flow_config(cfg, r.t);
    if (!cfg.has("U")) {
        fc.half_width = std::max(std::abs(r.u), std::abs(r.v)) + fc.margin(d);
        cfg.set("U", fc.half_width);
    }
    r.digest = cfg.digest();
    r.result = flow::duality_check(r.u, r.v, d, fc);
    return r;
}

std::vector<Check> validate_kernels(std::uint64_t seed)
{
    std::vector<Check> out;
    rng::Stream rng(seed, 7, 0);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
    auto wedge = [&](double lo, double hi) {
        double a = uni(lo, hi), b = uni(lo, hi);
        if (a > b)
            std::swap(a, b);
        return WedgePoint(a, b);
    };

    {
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double u = uni(-5, 5);
            worst = std::max(worst, std::abs(green_killed(uni(0.01, 3), WedgePoint(u, u), wedge(-5, 5))));
        }
        out.push_back({"diagonal_vanishing", worst, 0.0, 0.0, worst == 0.0});
    }
    {
        double lowest = 0.0;
        for (int k = 0; k < 10000; ++k)
            lowest = std::min(lowest, green_killed(uni(0.01, 3), wedge(-4, 4), wedge(-4, 4)));
        out.push_back({"nonnegativity", lowest, 0.0, 0.0, lowest >= 0.0});
    }
    {
        struct CK {
            double r, s;
            WedgePoint x, y;
        };
        const CK sets[] = {{0.5, 0.5, {0, 1}, {0.2, 1.5}},      {1.0, 0.5, {-1, 0}, {0, 1}},
                           {0.3, 0.7, {0, 0.5}, {0, 0.8}},      {0.25, 0.25, {0, 0.3}, {0.1, 0.6}},
                           {1.0, 1.0, {-0.5, 0.5}, {0, 2}}};
        int i = 0;
        for (const auto& c : sets) {
            const double exact = green_killed(c.r + c.s, c.x, c.y);
            const double q = chapman_kolmogorov_quadrature(c.r, c.s, c.x, c.y);
            const double rel = std::abs(q / exact - 1.0);
            out.push_back({"chapman_kolmogorov_" + std::to_string(++i), rel, 0.0, 1e-3, rel <= 1e-3});
        }
    }
    {
        double worst = 0.0;
        const double h = 1e-5;
        for (int k = 0; k < 100; ++k) {
            const double r = uni(0.2, 2.0);
            const WedgePoint x = wedge(-2, 2), y = wedge(-2, 2);
            const auto g = grad_green(r, x, y);
            const double x1 = x.point().x1, x2 = x.point().x2;
            // Stay inside the closed wedge for the difference quotients.
            const double d1 = (green_killed(r, {std::min(x1 + h, x2), x2}, y) - green_killed(r, {x1 - h, x2}, y)) /
                              (std::min(x1 + h, x2) - (x1 - h));
            const double d2 = (green_killed(r, {x1, x2 + h}, y) - green_killed(r, {x1, std::max(x2 - h, x1)}, y)) /
                              (x2 + h - std::max(x2 - h, x1));
            worst = std::max({worst, std::abs(d1 - g[0]), std::abs(d2 - g[1])});
        }
        out.push_back({"gradient_finite_difference", worst, 0.0, 1e-6, worst <= 1e-6});
    }
    {
        const auto& c = KernelBoundConstants::calibrated();
        int violations = 0;
        for (int k = 0; k < 10000; ++k) {
            DriftSpec d = DriftSpec::zero();
            switch (k % 4) {
            case 0: d = DriftSpec::constant(uni(-2, 2)); break;
            case 1: d = DriftSpec::tanh(uni(-2, 2), uni(0.2, 3)); break;
            case 2: {
                const double lo = uni(-3, 2);
                d = DriftSpec::step(uni(-2, 2), lo, lo + uni(0.1, 3));
                break;
            }
            default: break;
            }
            const double r = uni(0.01, 4.0);
            const WedgePoint x = wedge(-4, 4), y = wedge(-4, 4);
            if (std::abs(drift_grad_green(r, x, y, d)) > grad_bound(r, x, d, y.point(), c))
                ++violations;
        }
        out.push_back({"gradient_bound_dominance", static_cast<double>(violations), 0.0, 0.0, violations == 0});
    }
    for (int n = 1; n <= 3; ++n)
        for (bool with : {true, false})
            for (double s : {1.0, 2.5}) {
                const double exact = simplex_gamma_integral(n, s, with);
                const double rel = std::abs(simplex_gamma_quadrature(n, s, with) / exact - 1.0);
                out.push_back({"simplex_gamma_n" + std::to_string(n) + (with ? "_with_s" : "_without_s") +
                                   format_real(s),
                               rel, 0.0, 1e-6, rel < 1e-6});
            }
    {
        const double pi = std::numbers::pi;
        const struct {
            const char* name;
            double value, target;
        } examples[] = {{"simplex_gamma_example_n1_with", simplex_gamma_integral(1, 1.0, true), pi},
                        {"simplex_gamma_example_n1_without", simplex_gamma_integral(1, 1.0, false), 2.0},
                        {"simplex_gamma_example_n2_with", simplex_gamma_integral(2, 1.0, true), 2.0 * pi}};
        for (const auto& e : examples) {
            const double err = std::abs(e.value - e.target);
            out.push_back({e.name, e.value, e.target, 1e-12, err <= 1e-12 * e.target});
        }
    }
    return out;
}

void write_checks(std::ostream& out, const std::vector<Check>& checks)
{
    out << "check_name,value,target,tolerance,pass\n";
    for (const auto& c : checks)
        out << c.name << ',' << format_real(c.value) << ',' << format_real(c.target) << ','
            << format_real(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
}

void emit_plot_data(const ConvergenceReport& r, const std::string& base)
{
    if (r.rows.empty())
        throw std::invalid_argument("nothing to plot");
    std::vector<std::vector<double>> table;
    plot::Line est{"p(a_n)", {}, {}, {}}, ref{"p(a_0)", {}, {}, {}};
    for (const auto& row : r.rows) {
        table.push_back({static_cast<double>(row.n), row.distance, row.estimate.value, row.estimate.stat_error,
                         row.error, row.tolerance});
        est.x.push_back(row.n);
        est.y.push_back(row.estimate.value);
        est.err.push_back(row.estimate.stat_error);
        ref.x.push_back(row.n);
        ref.y.push_back(r.reference.value);
    }
    plot::write_dat(base + ".dat", {"n", "distance", "estimate", "stat_error", "error", "tolerance"}, table);
    plot::write_line_chart(base + ".svg",
                           "density vs n (" + to_string(r.mode) + ", " + to_string(r.method) + ")", "n",
                           "density", {est, ref}, true);
}

void emit_plot_data(const ComparisonReport& r, const std::string& base)
{
    if (r.estimates.empty())
        throw std::invalid_argument("nothing to plot");
    std::vector<std::vector<double>> table;
    plot::Bars bars;
    bars.series = {"estimate"};
    bars.values.resize(1);
    bars.errors.resize(1);
    for (std::size_t i = 0; i < r.estimates.size(); ++i) {
        const auto& e = r.estimates[i];
        table.push_back({static_cast<double>(i), e.value, e.stat_error, e.det_bound});
        bars.groups.push_back(to_string(e.method));
        bars.values[0].push_back(e.value);
        bars.errors[0].push_back(method_budget(e));
    }
    plot::write_dat(base + ".dat", {"index", "estimate", "stat_error", "det_bound"}, table);
    plot::write_grouped_bars(base + ".svg", "density by method (" + r.drift + ", t=" + format_real(r.t) + ")",
                             "density", bars);
}

void emit_plot_data(const CoalescenceReport& r, const std::string& base)
{
    if (r.gaps.empty())
        throw std::invalid_argument("nothing to plot");
    std::vector<std::vector<double>> table;
    plot::Line p{"P(distinct)", {}, {}, {}}, fit{"fit", {}, {}, {}};
    for (std::size_t i = 0; i < r.gaps.size(); ++i) {
        table.push_back({r.gaps[i], r.probabilities[i].p, r.probabilities[i].stderr_, r.slope * r.gaps[i]});
        p.x.push_back(r.gaps[i]);
        p.y.push_back(r.probabilities[i].p);
        p.err.push_back(r.probabilities[i].stderr_);
        fit.x.push_back(r.gaps[i]);
        fit.y.push_back(r.slope * r.gaps[i]);
    }
    plot::write_dat(base + ".dat", {"gap", "probability", "stat_error", "fit"}, table);
    plot::write_line_chart(base + ".svg", "non-meeting probability vs gap", "gap", "probability", {p, fit});
}

} // namespace arratia::harness
