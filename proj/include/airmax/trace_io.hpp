#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "airmax/nomographic.hpp"
#include "airmax/protocols.hpp"
#include "airmax/tdma.hpp"

namespace airmax {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Strict parse of a whole field; throws InvalidArgument.
double parse_double(const std::string& field);

inline constexpr const char* kTraceHeader = "k,agent,x,y,t_window,u,v_lyapunov";
inline constexpr const char* kComparisonHeader = "n,trial,k_t_slots,k_b_slots,ratio";
inline constexpr const char* kDemoHeader = "p,abs_error";

/// One row per (iteration, agent). The u column is empty on the final record.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> parse_trace_csv(std::istream& in);

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRecord>& records);
/// Parses the CSV columns only; hashes and iteration counts are not stored.
std::vector<ComparisonRecord> parse_comparison_csv(std::istream& in);

void write_demo_csv(std::ostream& out, const std::vector<FailurePoint>& rows);
std::vector<FailurePoint> parse_demo_csv(std::istream& in);

nlohmann::json summary_json(const RunResult& result, Protocol protocol);

}  // namespace airmax
