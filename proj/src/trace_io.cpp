#include "airmax/trace_io.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "airmax/error.hpp"

namespace airmax {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = first + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw InvalidArgument("not a number: \"" + field + "\"");
    return v;
}

namespace {

std::uint64_t parse_unsigned(const std::string& field) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size())
        throw InvalidArgument("not an unsigned integer: \"" + field + "\"");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

void expect_header(std::istream& in, const char* header) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("empty CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) throw InvalidArgument("unexpected CSV header: " + line);
}

}  // namespace

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
    out << kTraceHeader << '\n';
    for (const TraceRecord& r : trace) {
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            out << r.k << ',' << i << ',' << format_double(r.x[i]) << ',' << (r.y[i] ? 1 : 0)
                << ',' << r.t_window << ',';
            if (!r.u.empty()) out << format_double(r.u[i]);
            out << ',' << format_double(r.v_lyapunov) << '\n';
        }
    }
}

std::vector<TraceRecord> parse_trace_csv(std::istream& in) {
    expect_header(in, kTraceHeader);
    std::vector<TraceRecord> trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw InvalidArgument("trace row has " + std::to_string(f.size()) + " fields");
        const std::uint64_t k = parse_unsigned(f[0]);
        const std::uint64_t agent = parse_unsigned(f[1]);
        if (agent == 0) {
            TraceRecord r;
            r.k = k;
            r.t_window = parse_unsigned(f[4]);
            r.v_lyapunov = parse_double(f[6]);
            trace.push_back(std::move(r));
        }
        if (trace.empty() || trace.back().k != k || trace.back().x.size() != agent)
            throw InvalidArgument("trace rows out of order at k=" + f[0] + ", agent=" + f[1]);
        TraceRecord& r = trace.back();
        r.x.push_back(parse_double(f[2]));
        if (f[3] != "0" && f[3] != "1") throw InvalidArgument("y must be 0 or 1");
        r.y.push_back(f[3] == "1");
        if (!f[5].empty()) r.u.push_back(parse_double(f[5]));
    }
    for (const TraceRecord& r : trace)
        if (!r.u.empty() && r.u.size() != r.x.size())
            throw InvalidArgument("trace record k=" + std::to_string(r.k) + " has a partial u column");
    return trace;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRecord>& records) {
    out << kComparisonHeader << '\n';
    for (const ComparisonRecord& r : records)
        out << r.n << ',' << r.trial << ',' << r.k_t_slots << ',' << r.k_b_slots << ','
            << format_double(r.ratio) << '\n';
}

std::vector<ComparisonRecord> parse_comparison_csv(std::istream& in) {
    expect_header(in, kComparisonHeader);
    std::vector<ComparisonRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 5) throw InvalidArgument("comparison row needs 5 fields");
        ComparisonRecord r;
        r.n = parse_unsigned(f[0]);
        r.trial = parse_unsigned(f[1]);
        r.k_t_slots = parse_unsigned(f[2]);
        r.k_b_slots = parse_unsigned(f[3]);
        r.ratio = parse_double(f[4]);
        records.push_back(r);
    }
    return records;
}

void write_demo_csv(std::ostream& out, const std::vector<FailurePoint>& rows) {
    out << kDemoHeader << '\n';
    for (const FailurePoint& r : rows) out << format_double(r.p) << ',' << format_double(r.abs_error) << '\n';
}

std::vector<FailurePoint> parse_demo_csv(std::istream& in) {
    expect_header(in, kDemoHeader);
    std::vector<FailurePoint> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 2) throw InvalidArgument("demo row needs 2 fields");
        rows.push_back({parse_double(f[0]), parse_double(f[1])});
    }
    return rows;
}

nlohmann::json summary_json(const RunResult& result, Protocol protocol) {
    return {{"protocol", std::string(to_string(protocol))},
            {"n", result.final_x.size()},
            {"converged", result.converged},
            {"iterations", result.iterations},
            {"slots", result.slots},
            {"x_star", result.x_star},
            {"final_x", result.final_x},
            {"monotone_bounded", result.monotone_bounded}};
}

}  // namespace airmax
