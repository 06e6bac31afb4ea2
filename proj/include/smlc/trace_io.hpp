// Copyright 2026 The smlc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "smlc/sim.hpp"

namespace smlc {

/// Fixed column order: t, x1..xn, m1..mn, xd, e, edot, eddot, s, u_c, u_n,
/// u, k, alpha, q, clamp_flags, deadzone.
std::vector<std::string> trace_columns(int state_dim);

/// A `# key = value` block with the run's config, then the header row, then
/// one row per record. Reals use the shortest exact round-trip form.
void write_trace_csv(std::ostream& os, const SimulationTrace& trace);

/// Rebuilds a trace from CSV. Firing sums and controller states are not
/// stored in the file, so the loaded trace has neither.
SimulationTrace read_trace_csv(std::istream& is);
SimulationTrace read_trace_csv(const std::filesystem::path& path);

/// Gnuplot script plotting states, control split and adapted gains.
void write_plot_script(std::ostream& os, const std::string& csv_name, int state_dim);

}  // namespace smlc
