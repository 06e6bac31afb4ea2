// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
#include "smlc/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

#include "smlc/config.hpp"

namespace smlc {
namespace {

void append(std::string& line, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  line.append(buf, res.ptr);
}

void put(std::string& line, double v) {
  line += ',';
  append(line, v);
}

}  // namespace

std::vector<std::string> trace_columns(int state_dim) {
  std::vector<std::string> cols{"t"};
  for (int i = 1; i <= state_dim; ++i) cols.push_back("x" + std::to_string(i));
  for (int i = 1; i <= state_dim; ++i) cols.push_back("m" + std::to_string(i));
  for (const char* c : {"xd", "e", "edot", "eddot", "s", "u_c", "u_n", "u", "k", "alpha", "q",
                        "clamp_flags", "deadzone"})
    cols.emplace_back(c);
  return cols;
}

void write_trace_csv(std::ostream& os, const SimulationTrace& trace) {
  os << "# smlc trace\n";
  std::istringstream cfg(format_config(trace.config));
  for (std::string l; std::getline(cfg, l);) os << "# " << l << "\n";

  const int dim = static_cast<int>(trace.config.x0.size());
  const auto cols = trace_columns(dim);
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";

  std::string line;
  for (const auto& r : trace.records) {
    line.clear();
    append(line, r.t);
    for (int i = 0; i < dim; ++i) put(line, r.x(i));
    for (int i = 0; i < dim; ++i) put(line, r.m(i));
    for (double v : {r.ref.x, r.e, r.e_dot, r.e_ddot, r.s, r.u_c, r.u_n, r.u, r.k, r.alpha, r.q})
      put(line, v);
    line += ',' + std::to_string(r.flags) + ',' + (r.deadzone ? '1' : '0');
    os << line << "\n";
  }
}

SimulationTrace read_trace_csv(std::istream& is) {
  std::string cfg_text;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.rfind("#", 0) != 0) break;
    const std::string body = line.substr(1);
    if (body.find('=') != std::string::npos) cfg_text += body + "\n";
  }
  SimulationTrace trace;
  trace.config = parse_config_text(cfg_text);
  const PlantModel plant = make_plant(trace.config.plant_name,
                                      {trace.config.headway_h, trace.config.disturbance});
  trace.order_n = plant.order_n;
  trace.g = plant.g;

  const int dim = plant.state_dim;
  const auto cols = trace_columns(dim);
  std::string expected;
  for (std::size_t i = 0; i < cols.size(); ++i) expected += (i ? "," : "") + cols[i];
  if (line != expected) throw ConfigError("unexpected trace header '" + line + "'", line_no);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> v(cols.size());
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t n = 0;
    while (std::getline(row, cell, ',')) {
      if (n == v.size()) throw ConfigError("too many columns", line_no);
      char* end = nullptr;
      v[n++] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) throw ConfigError("bad number '" + cell + "'", line_no);
    }
    if (n != v.size()) throw ConfigError("too few columns", line_no);

    TraceRecord r;
    std::size_t c = 0;
    r.t = v[c++];
    r.x.resize(dim);
    r.m.resize(dim);
    for (int i = 0; i < dim; ++i) r.x(i) = v[c++];
    for (int i = 0; i < dim; ++i) r.m(i) = v[c++];
    // Only x_d is stored; its derivatives come back from the plant's reference.
    r.ref = plant.reference(r.t);
    r.ref.x = v[c++];
    r.d = plant.disturbance_at(r.t);
    r.e = v[c++];
    r.e_dot = v[c++];
    r.e_ddot = v[c++];
    r.s = v[c++];
    r.u_c = v[c++];
    r.u_n = v[c++];
    r.u = v[c++];
    r.k = v[c++];
    r.alpha = v[c++];
    r.q = v[c++];
    r.flags = static_cast<std::uint32_t>(v[c++]);
    r.deadzone = v[c++] != 0.0;
    r.lower_norm_sum = nan;
    r.upper_norm_sum = nan;
    trace.records.push_back(std::move(r));
  }
  return trace;
}

SimulationTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace '" + path.string() + "'", 0);
  return read_trace_csv(in);
}

void write_plot_script(std::ostream& os, const std::string& csv_name, int state_dim) {
  const auto cols = trace_columns(state_dim);
  auto idx = [&](const std::string& name) {
    for (std::size_t i = 0; i < cols.size(); ++i)
      if (cols[i] == name) return i + 1;
    return std::size_t{0};
  };
  os << "# gnuplot -p plot.gp\n"
     << "set datafile separator ','\n"
     << "set datafile commentschars '#'\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't [s]'\n"
     << "set multiplot layout 2,2\n";
  os << "set title 'states'\nplot";
  for (int i = 1; i <= state_dim; ++i)
    os << (i > 1 ? "," : "") << " '" << csv_name << "' using 1:" << idx("x" + std::to_string(i))
       << " with lines";
  os << "\n";
  os << "set title 'tracking'\nplot '" << csv_name << "' using 1:" << idx("e")
     << " with lines, '' using 1:" << idx("s") << " with lines\n";
  os << "set title 'control'\nplot '" << csv_name << "' using 1:" << idx("u_c")
     << " with lines, '' using 1:" << idx("u_n") << " with lines, '' using 1:" << idx("u")
     << " with lines\n";
  os << "set title 'adaptation'\nplot '" << csv_name << "' using 1:" << idx("k")
     << " with lines, '' using 1:" << idx("alpha") << " with lines, '' using 1:" << idx("q")
     << " with lines\n";
  os << "unset multiplot\n";
}

}  // namespace smlc
