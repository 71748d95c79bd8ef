#pragma once

#include "arratia/config.hpp"
#include "arratia/drift.hpp"
#include "arratia/estimate.hpp"
#include "arratia/flow.hpp"
#include "arratia/mc_exit.hpp"
#include "arratia/pde.hpp"
#include "arratia/report.hpp"
#include "arratia/series.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace arratia::harness {

inline constexpr std::uint64_t kDefaultSeed = 20240501;

/// Seed key, else ARRATIA_SEED, else kDefaultSeed. The result is written
/// back so it enters the digest.
std::uint64_t resolve_seed(RunConfig& cfg);

series::Config series_config(const RunConfig& cfg);
mc::PathConfig path_config(const RunConfig& cfg);
flow::FlowConfig flow_config(const RunConfig& cfg, double t);
/// Grid from h, umax, vpad, ramp around the points xs.
pde::RotatedGrid pde_grid(const RunConfig& cfg, const DriftSpec& d, double t, const std::vector<double>& xs);

/// Tolerance a single estimate is held to: series det_bound + 3 stat_error;
/// pde max(1% of the value, det_bound); mc 3 stat_error + 2% + det_bound;
/// flow max(5%, 3 stat_error); oracle 0.
double method_budget(const DensityEstimate& e);

struct DensityRun {
    DensityEstimate estimate;
    std::vector<CsvRow> rows;
};

/// Evaluate one density (keys method, drift, t, x plus method parameters).
/// Flow with bins > 1 yields one row per bin and the pooled estimate.
DensityRun run_density(const RunConfig& cfg);

struct PairCheck {
    Method a;
    Method b;
    double difference = 0.0;
    double budget = 0.0;
    bool pass = false;
};

struct ComparisonReport {
    std::string drift;
    double t = 0.0;
    double x = 0.0;
    std::vector<DensityEstimate> estimates;
    std::vector<PairCheck> pairs;
    std::vector<CsvRow> rows;
    bool pass() const;
};

/// Key methods = comma list (default series,pde,mc,flow). A pair passes when
/// |difference| <= budget_a + budget_b with the stochastic parts combined
/// in quadrature.
ComparisonReport compare_methods(const RunConfig& cfg);

enum class NormMode { L1, Linf };
NormMode parse_norm_mode(const std::string& s);
std::string to_string(NormMode m);

struct ConvergenceRow {
    int n = 0;
    std::string drift;
    double distance = 0.0; ///< windowed norm distance to the base drift
    DensityEstimate estimate;
    double error = 0.0;     ///< |p_n - p_0|
    double tolerance = 0.0; ///< method_budget(p_n) + method_budget(p_0)
};

struct ConvergenceReport {
    NormMode mode = NormMode::Linf;
    Method method = Method::pde;
    std::string base;
    double t = 0.0;
    double x = 0.0;
    int n_pass = 8;
    DensityEstimate reference;
    std::vector<ConvergenceRow> rows;

    /// error <= tolerance for every n >= n_pass.
    bool tail_within_tolerance() const;
    /// error at the largest n <= error at the smallest n.
    bool last_not_worse() const;
    bool pass() const { return tail_within_tolerance() && last_not_worse(); }
    std::vector<CsvRow> csv() const;
};

/// Linf: a_n = (1 + 1/n) a_0. L1: a_n = mollify(a_0, n), a_0 compactly
/// supported. All members of the sequence share one grid (pde) or one seed
/// (mc).
ConvergenceReport experiment_converge(const DriftSpec& a0, NormMode mode, const std::vector<int>& ns, Method method,
                                      double t, double x, const RunConfig& cfg);
ConvergenceReport experiment_converge(const RunConfig& cfg);

struct CoalescenceReport {
    std::string drift;
    double t = 0.0;
    double u = 0.0;
    std::vector<double> gaps;
    std::vector<flow::ProbabilityEstimate> probabilities;
    double slope = 0.0; ///< least squares through the origin
    double slope_stderr = 0.0;
    double max_relative_residual = 0.0;
    std::string digest;
    std::uint64_t seed = 0;

    bool pass(double tolerance = 0.05) const;
    std::vector<CsvRow> csv() const;
};

CoalescenceReport experiment_coalescence(const RunConfig& cfg);

struct DualityReport {
    std::string drift;
    double t = 0.0;
    double u = 0.0;
    double v = 0.0;
    flow::DualityResult result;
    std::string digest;
    std::uint64_t seed = 0;

    bool pass() const;
    std::vector<CsvRow> csv() const;
};

DualityReport experiment_duality(const RunConfig& cfg);

struct Check {
    std::string name;
    double value = 0.0;
    double target = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Kernel and Gamma-integral invariants on random samples drawn from seed.
std::vector<Check> validate_kernels(std::uint64_t seed);
/// CSV with header check_name,value,target,tolerance,pass.
void write_checks(std::ostream& out, const std::vector<Check>& checks);

/// <base>.dat and <base>.svg.
void emit_plot_data(const ConvergenceReport& r, const std::string& base);
void emit_plot_data(const ComparisonReport& r, const std::string& base);
void emit_plot_data(const CoalescenceReport& r, const std::string& base);

} // namespace arratia::harness
