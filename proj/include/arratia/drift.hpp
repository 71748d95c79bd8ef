#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace arratia {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

class DriftSpec;

namespace drift {

struct Zero {};
/// a(x) = c x. Unbounded; only flow, mc_exit and oracle accept it.
struct Linear { double c; };
struct Constant { double k; };
/// a(x) = k tanh(x / lambda).
struct Tanh { double k; double lambda; };
/// a(x) = h on [lo, hi], 0 elsewhere.
struct Step { double h; double lo; double hi; };
/// Piecewise linear through (knots, values), constant beyond the end knots.
struct Tabulated {
    std::vector<double> knots;
    std::vector<double> values;
    std::string source;
};
/// base * n eta(n .), eta the normalised C-infinity bump on (-1, 1).
struct Mollified {
    std::shared_ptr<const DriftSpec> base;
    int n;
};

using Kind = std::variant<Zero, Linear, Constant, Tanh, Step, Tabulated, Mollified>;

/// Normalised bump eta(x) = C exp(-1 / (1 - x^2)) on (-1, 1).
double bump(double x);
/// The constant C, from adaptive quadrature.
double bump_normalization();

} // namespace drift

/// An immutable drift function a in L-infinity (plus the unbounded Linear
/// family). Copies share state; safe for concurrent reads.
class DriftSpec {
public:
    static DriftSpec zero();
    static DriftSpec linear(double c);
    static DriftSpec constant(double k);
    static DriftSpec tanh(double k, double lambda);
    static DriftSpec step(double h, double lo, double hi);
    static DriftSpec tabulated(std::vector<double> knots, std::vector<double> values,
                               std::string source = {});
    /// Two-column CSV (knot,value); a header line is tolerated.
    static DriftSpec load_table(const std::string& path);

    double evaluate(double x) const;
    double operator()(double x) const { return evaluate(x); }

    const drift::Kind& kind() const;
    /// Certified upper bound on sup |a|; +inf for Linear.
    double sup_norm() const;
    std::optional<double> l1_norm() const;
    bool smooth() const;
    bool bounded() const;
    bool is_zero() const;

    /// Points where a (or a derivative) may jump; used to split quadratures.
    std::vector<double> breakpoints() const;
    /// a is constant outside this interval (nullopt: never, e.g. Linear;
    /// empty optional interval with lo > hi: constant everywhere).
    std::optional<Interval> active_region() const;

    /// Canonical mini-language form, e.g. "mollify(step:h=1,lo=0,hi=1,n=4)".
    std::string describe() const;

    DriftSpec negate() const;
    DriftSpec scaled(double factor) const;
    DriftSpec mollify(int n) const;

private:
    struct Impl;
    explicit DriftSpec(std::shared_ptr<const Impl> impl);
    std::shared_ptr<const Impl> impl_;
};

/// Parse the drift mini-language:
///   zero | linear:c=R | const:k=R | tanh:k=R,lam=R | step:h=R,lo=R,hi=R
///   | table:PATH | mollify(SPEC,n=INT)
DriftSpec parse_drift(std::string_view text);

/// Max of |d1 - d2| over an equispaced grid of the window (endpoints
/// included). A lower approximation of the sup-norm distance.
double l_inf_distance(const DriftSpec& d1, const DriftSpec& d2, Interval window, int grid_points);

/// Integral of |d1 - d2| over the window, adaptive quadrature split at the
/// breakpoints of both drifts; absolute tolerance 1e-8.
double l1_distance(const DriftSpec& d1, const DriftSpec& d2, Interval window);

std::string format_real(double x);

} // namespace arratia
