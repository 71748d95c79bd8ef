#include "arratia/drift.hpp"
#include "arratia/quadrature.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace arratia {

namespace drift {

namespace {

double raw_bump(double x)
{
    const double q = 1.0 - x * x;
    return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

} // namespace

double bump_normalization()
{
    static const double c = 1.0 / quad::adaptive(raw_bump, -1.0, 1.0, 1e-15);
    return c;
}

double bump(double x)
{
    return bump_normalization() * raw_bump(x);
}

} // namespace drift

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// tanh(x) == 1 in double precision for x > 19.1.
constexpr double kTanhFlat = 20.0;
constexpr std::size_t kMaxLattice = 4'000'000;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

std::string format_real(double x)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

struct DriftSpec::Impl {
    drift::Kind kind;
    double sup = 0.0;
    std::optional<double> l1;
    bool smooth = true;

    // Mollified only: lattice of precomputed values.
    double lattice_origin = 0.0;
    double lattice_step = 0.0;
    std::vector<double> lattice;
    Interval cached{1.0, -1.0};
    Interval passthrough{1.0, -1.0};

    double mollified_direct(const drift::Mollified& m, double x) const;
    double eval(double x) const;
};

double DriftSpec::Impl::mollified_direct(const drift::Mollified& m, double x) const
{
    const DriftSpec& base = *m.base;
    const double width = 1.0 / m.n;
    // Integrate base(x - y) n eta(n y) over |y| < 1/n, split where base kinks.
    std::vector<double> cuts{-width, width};
    for (double b : base.breakpoints()) {
        const double y = x - b;
        if (y > -width && y < width)
            cuts.push_back(y);
    }
    std::sort(cuts.begin(), cuts.end());
    const auto& rule = quad::gauss_legendre(64);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] <= cuts[i])
            continue;
        acc += quad::integrate(
            rule, [&](double y) { return base.evaluate(x - y) * m.n * drift::bump(m.n * y); }, cuts[i],
            cuts[i + 1]);
    }
    return std::clamp(acc, -sup, sup);
}

double DriftSpec::Impl::eval(double x) const
{
    return std::visit(
        overloaded{
            [](const drift::Zero&) { return 0.0; },
            [x](const drift::Linear& l) { return l.c * x; },
            [](const drift::Constant& c) { return c.k; },
            [x](const drift::Tanh& t) { return t.k * std::tanh(x / t.lambda); },
            [x](const drift::Step& s) { return (x >= s.lo && x <= s.hi) ? s.h : 0.0; },
            [x](const drift::Tabulated& t) {
                if (x <= t.knots.front())
                    return t.values.front();
                if (x >= t.knots.back())
                    return t.values.back();
                const auto it = std::upper_bound(t.knots.begin(), t.knots.end(), x);
                const std::size_t j = static_cast<std::size_t>(it - t.knots.begin());
                const double w = (x - t.knots[j - 1]) / (t.knots[j] - t.knots[j - 1]);
                return (1.0 - w) * t.values[j - 1] + w * t.values[j];
            },
            [this, x](const drift::Mollified& m) {
                if (!passthrough.contains(x) && passthrough.lo <= passthrough.hi)
                    return m.base->evaluate(x);
                if (passthrough.lo > passthrough.hi && lattice.empty())
                    return m.base->evaluate(x);
                if (!lattice.empty() && cached.contains(x)) {
                    const double s = (x - lattice_origin) / lattice_step;
                    const std::size_t i =
                        std::min(static_cast<std::size_t>(s), lattice.size() - 2);
                    const double w = s - static_cast<double>(i);
                    return (1.0 - w) * lattice[i] + w * lattice[i + 1];
                }
                return mollified_direct(m, x);
            },
        },
        kind);
}

DriftSpec::DriftSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

DriftSpec DriftSpec::zero()
{
    auto impl = std::make_shared<Impl>();
    impl->kind = drift::Zero{};
    impl->l1 = 0.0;
    return DriftSpec(std::move(impl));
}

DriftSpec DriftSpec::linear(double c)
{
    auto impl = std::make_shared<Impl>();
    impl->kind = drift::Linear{c};
    impl->sup = c == 0.0 ? 0.0 : kInf;
    impl->l1 = c == 0.0 ? std::optional<double>(0.0) : std::nullopt;
    return DriftSpec(std::move(impl));
}

DriftSpec DriftSpec::constant(double k)
{
    auto impl = std::make_shared<Impl>();
    impl->kind = drift::Constant{k};
    impl->sup = std::abs(k);
    if (k == 0.0)
        impl->l1 = 0.0;
    return DriftSpec(std::move(impl));
}

DriftSpec DriftSpec::tanh(double k, double lambda)
{
    if (!(lambda > 0.0))
        throw std::invalid_argument("tanh drift needs lam > 0");
    auto impl = std::make_shared<Impl>();
    impl->kind = drift::Tanh{k, lambda};
    impl->sup = std::abs(k);
    if (k == 0.0)
        impl->l1 = 0.0;
    return DriftSpec(std::move(impl));
}

DriftSpec DriftSpec::step(double h, double lo, double hi)
{
    if (!(lo < hi))
        throw std::invalid_argument("step drift needs lo < hi");
    auto impl = std::make_shared<Impl>();
    impl->kind = drift::Step{h, lo, hi};
    impl->sup = std::abs(h);
    impl->l1 = std::abs(h) * (hi - lo);
    impl->smooth = h == 0.0;
    return DriftSpec(std::move(impl));
}

DriftSpec DriftSpec::tabulated(std::vector<double> knots, std::vector<double> values, std::string source)
{
    if (knots.empty() || knots.size() != values.size())
        throw std::invalid_argument("table drift needs matching, non-empty knot and value columns");
    for (std::size_t i = 1; i < knots.size(); ++i)
        if (!(knots[i] > knots[i - 1]))
            throw std::invalid_argument("table drift knots must be strictly increasing");
    auto impl = std::make_shared<Impl>();
    impl->sup = 0.0;
    for (double v : values)
        impl->sup = std::max(impl->sup, std::abs(v));
    if (values.front() == 0.0 && values.back() == 0.0) {
        double area = 0.0;
        for (std::size_t i = 1; i < knots.size(); ++i) {
            const double a = values[i - 1], b = values[i], w = knots[i] - knots[i - 1];
            // Exact integral of |piecewise linear| on a segment.
            if (a * b >= 0.0)
                area += 0.5 * w * (std::abs(a) + std::abs(b));
            else
                area += 0.5 * w * (a * a + b * b) / (std::abs(a) + std::abs(b));
        }
        impl->l1 = area;
    }
    impl->smooth = knots.size() == 1;
    impl->kind = drift::Tabulated{std::move(knots), std::move(values), std::move(source)};
    return DriftSpec(std::move(impl));
}

DriftSpec DriftSpec::load_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open drift table '" + path + "'");
    std::vector<double> knots, values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double k, v;
        if (!(row >> k >> v)) {
            if (knots.empty())
                continue; // header
            throw std::runtime_error("malformed row in drift table '" + path + "': " + line);
        }
        knots.push_back(k);
        values.push_back(v);
    }
    return tabulated(std::move(knots), std::move(values), path);
}

DriftSpec DriftSpec::mollify(int n) const
{
    if (n < 1)
        throw std::invalid_argument("mollification index must be a positive integer");
    auto impl = std::make_shared<Impl>();
    drift::Mollified m{std::make_shared<const DriftSpec>(*this), n};
    impl->sup = sup_norm();
    impl->l1 = l1_norm();
    impl->smooth = true;
    impl->kind = m;

    const double width = 1.0 / n;
    const auto region = active_region();
    if (region && region->lo <= region->hi) {
        impl->passthrough = {region->lo - width, region->hi + width};
        const double step = 1.0 / (128.0 * n);
        const std::size_t points =
            static_cast<std::size_t>(std::ceil(impl->passthrough.length() / step)) + 1;
        if (points <= kMaxLattice) {
            impl->lattice_origin = impl->passthrough.lo;
            impl->lattice_step = step;
            impl->lattice.resize(points);
            for (std::size_t i = 0; i < points; ++i)
                impl->lattice[i] = impl->mollified_direct(m, impl->lattice_origin + step * i);
            impl->cached = {impl->lattice_origin, impl->lattice_origin + step * (points - 1)};
        }
    }
    // Constant or linear bases are reproduced exactly by a symmetric unit-mass
    // kernel: leave passthrough empty and lattice empty.
    return DriftSpec(std::move(impl));
}

double DriftSpec::evaluate(double x) const { return impl_->eval(x); }
const drift::Kind& DriftSpec::kind() const { return impl_->kind; }
double DriftSpec::sup_norm() const { return impl_->sup; }
std::optional<double> DriftSpec::l1_norm() const { return impl_->l1; }
bool DriftSpec::smooth() const { return impl_->smooth; }
bool DriftSpec::bounded() const { return std::isfinite(impl_->sup); }
bool DriftSpec::is_zero() const { return impl_->sup == 0.0; }

std::vector<double> DriftSpec::breakpoints() const
{
    return std::visit(
        overloaded{
            [](const drift::Step& s) { return std::vector<double>{s.lo, s.hi}; },
            [](const drift::Tabulated& t) { return t.knots; },
            [](const drift::Mollified& m) {
                std::vector<double> out;
                const double w = 1.0 / m.n;
                for (double b : m.base->breakpoints()) {
                    out.push_back(b - w);
                    out.push_back(b + w);
                }
                std::sort(out.begin(), out.end());
                return out;
            },
            [](const auto&) { return std::vector<double>{}; },
        },
        impl_->kind);
}

std::optional<Interval> DriftSpec::active_region() const
{
    using R = std::optional<Interval>;
    return std::visit(
        overloaded{
            [](const drift::Zero&) -> R { return Interval{1.0, -1.0}; },
            [](const drift::Constant&) -> R { return Interval{1.0, -1.0}; },
            [](const drift::Linear& l) -> R {
                return l.c == 0.0 ? R(Interval{1.0, -1.0}) : std::nullopt;
            },
            [](const drift::Tanh& t) -> R { return Interval{-kTanhFlat * t.lambda, kTanhFlat * t.lambda}; },
            [](const drift::Step& s) -> R { return Interval{s.lo, s.hi}; },
            [](const drift::Tabulated& t) -> R { return Interval{t.knots.front(), t.knots.back()}; },
            [](const drift::Mollified& m) -> R {
                auto r = m.base->active_region();
                if (r && r->lo <= r->hi) {
                    r->lo -= 1.0 / m.n;
                    r->hi += 1.0 / m.n;
                }
                return r;
            },
        },
        impl_->kind);
}

std::string DriftSpec::describe() const
{
    return std::visit(
        overloaded{
            [](const drift::Zero&) { return std::string("zero"); },
            [](const drift::Linear& l) { return "linear:c=" + format_real(l.c); },
            [](const drift::Constant& c) { return "const:k=" + format_real(c.k); },
            [](const drift::Tanh& t) { return "tanh:k=" + format_real(t.k) + ",lam=" + format_real(t.lambda); },
            [](const drift::Step& s) {
                return "step:h=" + format_real(s.h) + ",lo=" + format_real(s.lo) + ",hi=" + format_real(s.hi);
            },
            [](const drift::Tabulated& t) {
                if (!t.source.empty())
                    return "table:" + t.source;
                return "table:<" + std::to_string(t.knots.size()) + " knots>";
            },
            [](const drift::Mollified& m) {
                return "mollify(" + m.base->describe() + ",n=" + std::to_string(m.n) + ")";
            },
        },
        impl_->kind);
}

DriftSpec DriftSpec::scaled(double f) const
{
    return std::visit(
        overloaded{
            [](const drift::Zero&) { return DriftSpec::zero(); },
            [f](const drift::Linear& l) { return DriftSpec::linear(f * l.c); },
            [f](const drift::Constant& c) { return DriftSpec::constant(f * c.k); },
            [f](const drift::Tanh& t) { return DriftSpec::tanh(f * t.k, t.lambda); },
            [f](const drift::Step& s) { return DriftSpec::step(f * s.h, s.lo, s.hi); },
            [f](const drift::Tabulated& t) {
                std::vector<double> v = t.values;
                for (double& x : v)
                    x *= f;
                return DriftSpec::tabulated(t.knots, std::move(v));
            },
            [f](const drift::Mollified& m) { return m.base->scaled(f).mollify(m.n); },
        },
        impl_->kind);
}

DriftSpec DriftSpec::negate() const
{
    return scaled(-1.0);
}

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("bad drift spec '" + std::string(text) + "': " + what);
    }

    static std::string_view trim(std::string_view s)
    {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
            s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
            s.remove_suffix(1);
        return s;
    }

    static double number(std::string_view s, const Parser& p)
    {
        s = trim(s);
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
            p.fail("expected a real number, got '" + std::string(s) + "'");
        return v;
    }

    std::map<std::string, double, std::less<>> params(std::string_view body, const std::vector<std::string>& keys) const
    {
        std::map<std::string, double, std::less<>> out;
        while (!body.empty()) {
            const auto comma = body.find(',');
            std::string_view item = trim(body.substr(0, comma));
            body = comma == std::string_view::npos ? std::string_view{} : body.substr(comma + 1);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos)
                fail("expected key=value, got '" + std::string(item) + "'");
            const std::string key(trim(item.substr(0, eq)));
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                fail("unknown parameter '" + key + "'");
            out[key] = number(item.substr(eq + 1), *this);
        }
        for (const auto& k : keys)
            if (!out.count(k))
                fail("missing parameter '" + k + "'");
        return out;
    }

    DriftSpec parse(std::string_view s) const
    {
        s = trim(s);
        if (s == "zero")
            return DriftSpec::zero();
        if (s.starts_with("mollify(")) {
            if (!s.ends_with(")"))
                fail("unbalanced parentheses");
            std::string_view inner = s.substr(8, s.size() - 9);
            const auto comma = inner.rfind(',');
            if (comma == std::string_view::npos)
                fail("mollify needs ',n=<int>'");
            std::string_view tail = trim(inner.substr(comma + 1));
            if (!tail.starts_with("n="))
                fail("mollify needs ',n=<int>'");
            tail.remove_prefix(2);
            int n = 0;
            auto res = std::from_chars(tail.data(), tail.data() + tail.size(), n);
            if (res.ec != std::errc() || res.ptr != tail.data() + tail.size() || n < 1)
                fail("mollification index must be a positive integer");
            return parse(inner.substr(0, comma)).mollify(n);
        }
        const auto colon = s.find(':');
        if (colon == std::string_view::npos)
            fail("unknown drift family");
        const std::string_view family = s.substr(0, colon);
        const std::string_view body = s.substr(colon + 1);
        if (family == "table")
            return DriftSpec::load_table(std::string(trim(body)));
        if (family == "linear")
            return DriftSpec::linear(params(body, {"c"}).at("c"));
        if (family == "const")
            return DriftSpec::constant(params(body, {"k"}).at("k"));
        if (family == "tanh") {
            auto p = params(body, {"k", "lam"});
            return DriftSpec::tanh(p.at("k"), p.at("lam"));
        }
        if (family == "step") {
            auto p = params(body, {"h", "lo", "hi"});
            return DriftSpec::step(p.at("h"), p.at("lo"), p.at("hi"));
        }
        fail("unknown drift family '" + std::string(family) + "'");
    }
};

} // namespace

DriftSpec parse_drift(std::string_view text)
{
    Parser p{text};
    return p.parse(text);
}

double l_inf_distance(const DriftSpec& d1, const DriftSpec& d2, Interval window, int grid_points)
{
    if (!(window.lo < window.hi))
        throw std::invalid_argument("l_inf_distance: empty window");
    if (grid_points < 2)
        throw std::invalid_argument("l_inf_distance: need at least 2 grid points");
    double worst = 0.0;
    const double h = window.length() / (grid_points - 1);
    for (int i = 0; i < grid_points; ++i) {
        const double x = i + 1 == grid_points ? window.hi : window.lo + h * i;
        worst = std::max(worst, std::abs(d1(x) - d2(x)));
    }
    return worst;
}

double l1_distance(const DriftSpec& d1, const DriftSpec& d2, Interval window)
{
    if (!(window.lo < window.hi))
        throw std::invalid_argument("l1_distance: empty window");
    std::vector<double> cuts{window.lo, window.hi};
    for (const auto* d : {&d1, &d2})
        for (double b : d->breakpoints())
            if (b > window.lo && b < window.hi)
                cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double tol = 1e-8 / static_cast<double>(cuts.size());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += quad::adaptive([&](double x) { return std::abs(d1(x) - d2(x)); }, cuts[i], cuts[i + 1], tol);
    return total;
}

} // namespace arratia
