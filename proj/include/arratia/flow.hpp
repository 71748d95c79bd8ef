#pragma once

#include "arratia/drift.hpp"
#include "arratia/estimate.hpp"
#include "arratia/parallel.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace arratia::flow {

struct FlowConfig {
    double half_width = 10.0; ///< starters cover [-U, U]
    double spacing = 0.01;
    double dt = 1e-3;
    double t = 1.0;
    std::uint64_t n_runs = 200;
    std::uint64_t seed = 20240501;
    /// Evaluation margin; 0 selects 4 sqrt(t) + |a| t.
    double eval_margin = 0.0;
    /// Also merge adjacent clusters that stay ordered at both ends of a step
    /// with the Brownian-bridge meeting probability exp(-g0 g1 / dt).
    bool bridge_merge = true;
    parallel::Exec exec = parallel::Exec::parallel;

    /// Throws std::invalid_argument on spacing > 0.05 sqrt t, dt > t/20,
    /// a margin below 4 sqrt(t) + |a| t, or non-positive sizes.
    void validate(const DriftSpec& d) const;
    double margin(const DriftSpec& d) const;
};

/// Clusters alive at time t, positions strictly increasing.
struct PointProcessSample {
    std::uint64_t run = 0;
    std::vector<double> positions;
    std::vector<std::uint64_t> masses;
};

/// One run: starters k * spacing in [-U, U], each cluster moves by
/// a(x) dt + sqrt(dt) N(0,1), adjacent clusters whose order inverted are
/// merged at the midpoint. Run r uses the stream (seed, r).
PointProcessSample simulate_flow(const DriftSpec& d, const FlowConfig& cfg, std::uint64_t run);

/// Runs 0 .. n_runs-1, in run order.
std::vector<PointProcessSample> simulate_runs(const DriftSpec& d, const FlowConfig& cfg);

/// Same as simulate_runs, one run after the other on the calling thread.
std::vector<PointProcessSample> simulate_runs_reference(const DriftSpec& d, const FlowConfig& cfg);

/// Region where the finite starter set is indistinguishable from the flow
/// started everywhere: [-U + m, U - m] for bounded drift; for linear drift
/// the image of [-U, U] shrunk by four standard deviations.
Interval usable_window(const DriftSpec& d, const FlowConfig& cfg);

struct Histogram {
    Interval window;
    std::vector<double> edges;         ///< bins + 1 edges
    std::vector<DensityEstimate> bins; ///< per-bin intensity
    DensityEstimate pooled;            ///< whole window
};

/// Mean number of clusters per bin and run divided by the bin width; errors
/// are standard errors across runs. Throws when window leaves `allowed`.
Histogram empirical_density(const std::vector<PointProcessSample>& samples, Interval window, int bins,
                            Interval allowed);
Histogram empirical_density(const std::vector<PointProcessSample>& samples, Interval window, int bins,
                            const DriftSpec& d, const FlowConfig& cfg);

struct ProbabilityEstimate {
    double p = 0.0;
    double stderr_ = 0.0;
    std::uint64_t runs = 0;
};

/// Fraction of two-starter runs (u, v) still distinct at cfg.t.
ProbabilityEstimate meeting_probability(double u, double v, const DriftSpec& d, const FlowConfig& cfg);

/// Fraction of full-flow runs with a cluster in [u, v].
ProbabilityEstimate occupancy_probability(double u, double v, const DriftSpec& d, const FlowConfig& cfg);

struct DualityResult {
    ProbabilityEstimate lhs; ///< occupancy under a
    ProbabilityEstimate rhs; ///< non-meeting under -a
    double combined_stderr = 0.0;
};

DualityResult duality_check(double u, double v, const DriftSpec& d, const FlowConfig& cfg);

/// CSV with header run_id,position,mass.
void write_samples_csv(const std::vector<PointProcessSample>& samples, const std::string& path);

} // namespace arratia::flow
