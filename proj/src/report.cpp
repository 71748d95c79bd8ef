#include "arratia/report.hpp"

#include "arratia/drift.hpp"

#include <stdexcept>

namespace arratia {

std::string to_string(Method m)
{
    switch (m) {
    case Method::series: return "series";
    case Method::pde: return "pde";
    case Method::mc: return "mc";
    case Method::flow: return "flow";
    case Method::oracle: return "oracle";
    }
    return "unknown";
}

Method parse_method(const std::string& name)
{
    for (Method m : {Method::series, Method::pde, Method::mc, Method::flow, Method::oracle})
        if (to_string(m) == name)
            return m;
    throw std::invalid_argument("unknown method '" + name + "' (series|pde|mc|flow|oracle)");
}

namespace {

std::string field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"')
            q += '"';
        q += c;
    }
    return q + "\"";
}

} // namespace

const std::string& csv_header()
{
    static const std::string h = "method,drift,t,x,estimate,stat_error,det_bound,flag,seed,config_digest,runtime_ms";
    return h;
}

std::string csv_line(const CsvRow& r)
{
    const DensityEstimate& e = r.estimate;
    std::string s;
    s += field(r.method) + ',';
    s += field(r.drift) + ',';
    s += format_real(r.t) + ',';
    s += format_real(r.x) + ',';
    s += format_real(e.value) + ',';
    s += format_real(e.stat_error) + ',';
    s += format_real(e.det_bound) + ',';
    s += field(e.flag) + ',';
    s += (e.seed ? std::to_string(*e.seed) : std::string("NA")) + ',';
    s += field(e.config_digest) + ',';
    s += r.runtime_ms ? format_real(*r.runtime_ms) : std::string("NA");
    return s;
}

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows, bool header)
{
    if (header)
        out << csv_header() << '\n';
    for (const auto& r : rows)
        out << csv_line(r) << '\n';
}

} // namespace arratia
