#pragma once

#include <string>

#include "blasts/harness.hpp"

namespace blasts::harness {

// Multi-line chart of mean cumulative regret vs t, one line per agent with a
// shaded 95% CI band. Plotting beyond this stays with external tools reading
// the CSVs.
std::string render_summary_svg(const SummaryTable& table);

}  // namespace blasts::harness
