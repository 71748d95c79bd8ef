#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace arratia {

enum class Method { series, pde, mc, flow, oracle };

std::string to_string(Method m);
Method parse_method(const std::string& name);

/// A value of the 1-point density with its error budget.
struct DensityEstimate {
    double value = 0.0;
    double stat_error = 0.0;
    /// Deterministic bias/truncation allowance.
    double det_bound = 0.0;
    Method method = Method::oracle;
    /// "ok", or a reason the estimate should not be trusted at face value.
    std::string flag = "ok";
    std::string config_digest;
    std::optional<std::uint64_t> seed;
};

/// Monte Carlo estimate of P(theta_x > t).
struct SurvivalEstimate {
    double p_hat = 0.0;
    double stderr_ = 0.0;
    std::uint64_t n_paths = 0;
    std::string config_digest;
};

} // namespace arratia
