#include "recip/io.hpp"

#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace recip {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

double parse_double(std::string_view s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(s) + "'");
  }
  return v;
}

namespace {

long long parse_int(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(ErrorKind::InvalidArgument, "not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

/// Data rows of a CSV with the expected header; each row has `fields` cells.
std::vector<std::vector<std::string_view>> csv_rows(std::string_view text,
                                                    std::string_view header,
                                                    std::size_t fields) {
  std::vector<std::vector<std::string_view>> rows;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) {
        throw Error(ErrorKind::InvalidArgument, "expected CSV header '" + std::string(header) +
                                                    "', got '" + std::string(line) + "'");
      }
      seen_header = true;
      continue;
    }
    auto cells = split(line, ',');
    if (cells.size() != fields) {
      throw Error(ErrorKind::InvalidArgument, "line " + std::to_string(line_no) + " has " +
                                                  std::to_string(cells.size()) + " fields, expected " +
                                                  std::to_string(fields));
    }
    rows.push_back(std::move(cells));
  }
  if (!seen_header) throw Error(ErrorKind::InvalidArgument, "empty CSV");
  return rows;
}

}  // namespace

void write_atomic(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::system_error(errno, std::generic_category(), "cannot write " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string edge_label(AgentId from, AgentId to) {
  return std::to_string(from) + "->" + std::to_string(to);
}

// ---------------------------------------------------------------------------

std::string trajectory_csv(const Trajectory& traj, const InteractionGraph& g) {
  std::string out = "t,from,to,value\n";
  for (std::size_t t = 0; t < traj.states.size(); ++t) {
    const auto& s = traj.states[t];
    for (std::size_t k = 0; k < s.size(); ++k) {
      const auto e = g.edge_of(k);
      out += std::to_string(t) + ',' + std::to_string(e.from) + ',' + std::to_string(e.to) + ',' +
             format_double(s[k]) + '\n';
    }
  }
  return out;
}

std::vector<TrajectoryRow> parse_trajectory_csv(std::string_view text) {
  std::vector<TrajectoryRow> rows;
  for (const auto& c : csv_rows(text, "t,from,to,value", 4)) {
    rows.push_back({parse_int(c[0]), static_cast<AgentId>(parse_int(c[1])),
                    static_cast<AgentId>(parse_int(c[2])), parse_double(c[3])});
  }
  return rows;
}

std::string limit_csv(const ActionVector& values, const InteractionGraph& g, LimitSource source) {
  std::string out = "edge_from,edge_to,limit,source\n";
  for (std::size_t k = 0; k < values.size(); ++k) {
    const auto e = g.edge_of(k);
    out += std::to_string(e.from) + ',' + std::to_string(e.to) + ',' + format_double(values[k]) +
           ',' + std::string(to_string(source)) + '\n';
  }
  return out;
}

std::string limit_csv(const LimitResult& result, const InteractionGraph& g) {
  if (auto v = edge_limits(result, g)) return limit_csv(*v, g, result.source);
  return limit_csv(ActionVector(g.directed_edge_count(), std::numeric_limits<double>::quiet_NaN()),
                   g, LimitSource::None);
}

std::vector<LimitRow> parse_limit_csv(std::string_view text) {
  std::vector<LimitRow> rows;
  for (const auto& c : csv_rows(text, "edge_from,edge_to,limit,source", 4)) {
    rows.push_back({static_cast<AgentId>(parse_int(c[0])), static_cast<AgentId>(parse_int(c[1])),
                    parse_double(c[2]), std::string(c[3])});
  }
  return rows;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = "param_value,edge_from,edge_to,limit\n";
  for (const auto& row : result.rows) {
    for (const auto& e : row.limits) {
      out += format_double(row.param) + ',' + std::to_string(e.from) + ',' +
             std::to_string(e.to) + ',' + format_double(e.value) + '\n';
    }
  }
  return out;
}

std::vector<SweepCsvRow> parse_sweep_csv(std::string_view text) {
  std::vector<SweepCsvRow> rows;
  for (const auto& c : csv_rows(text, "param_value,edge_from,edge_to,limit", 4)) {
    rows.push_back({parse_double(c[0]), static_cast<AgentId>(parse_int(c[1])),
                    static_cast<AgentId>(parse_int(c[2])), parse_double(c[3])});
  }
  return rows;
}

std::string sweep_report(const SweepResult& result) {
  std::ostringstream os;
  os << "parameter: " << result.parameter << '\n';
  os << "grid points: " << result.rows.size() << '\n';
  os << "monotonicity tolerance: " << kMonotoneTolerance
     << ", linearity residual threshold: " << kAffineTolerance << '\n';
  os << "edge,monotonicity,slope,intercept,max_residual,affine\n";
  for (const auto& v : result.verdicts) {
    os << edge_label(v.from, v.to) << ',' << to_string(v.monotonicity) << ','
       << format_double(v.fit.slope) << ',' << format_double(v.fit.intercept) << ','
       << format_double(v.fit.max_residual) << ',' << (v.affine ? "yes" : "no") << '\n';
  }
  return os.str();
}

std::string matrix_csv(const DynamicsMatrix& m, const InteractionGraph& g) {
  std::string out = "edge";
  for (const auto& e : g.directed_edges()) out += ',' + edge_label(e.from, e.to);
  out += '\n';
  for (std::size_t r = 0; r < m.size(); ++r) {
    const auto e = g.edge_of(r);
    out += edge_label(e.from, e.to);
    for (double v : m.entries.row(r)) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string svg_chart(const Trajectory& traj, const InteractionGraph& g) {
  constexpr double W = 720, H = 420, L = 60, R = 150, T = 20, B = 40;
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& s : traj.states) {
    for (double v : s) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double tmax = std::max<double>(1.0, static_cast<double>(traj.states.size() - 1));
  auto px = [&](double t) { return L + (W - L - R) * t / tmax; };
  auto py = [&](double v) { return H - B - (H - T - B) * (v - lo) / (hi - lo); };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - 10 << "\">t = 0</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - 10 << "\" text-anchor=\"end\">t = "
     << traj.states.size() - 1 << "</text>\n";
  os << "<text x=\"" << L - 5 << "\" y=\"" << py(hi) + 4 << "\" text-anchor=\"end\">" << hi
     << "</text>\n";
  os << "<text x=\"" << L - 5 << "\" y=\"" << py(lo) + 4 << "\" text-anchor=\"end\">" << lo
     << "</text>\n";

  const std::size_t m = g.directed_edge_count();
  for (std::size_t k = 0; k < m; ++k) {
    const char* color = kColors[k % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
      os << px(static_cast<double>(t)) << ',' << py(traj.states[t][k]) << ' ';
    }
    os << "\"/>\n";
    const auto e = g.edge_of(k);
    const double ly = T + 14.0 * static_cast<double>(k);
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30
       << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R + 35 << "\" y=\"" << ly + 4 << "\">x " << edge_label(e.from, e.to)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace recip
