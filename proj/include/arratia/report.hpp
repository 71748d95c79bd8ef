#pragma once

#include "arratia/estimate.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace arratia {

/// One line of the result table.
struct CsvRow {
    std::string method;
    std::string drift;
    double t = 0.0;
    double x = 0.0;
    DensityEstimate estimate;
    std::optional<double> runtime_ms;
};

/// method,drift,t,x,estimate,stat_error,det_bound,flag,seed,config_digest,runtime_ms
const std::string& csv_header();

/// Shortest round-trip formatting of every number; "NA" for a missing seed
/// or runtime. Fields containing commas or quotes are quoted.
std::string csv_line(const CsvRow& row);

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows, bool header = true);

} // namespace arratia
