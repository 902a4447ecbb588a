#pragma once

// Self-contained SVG emission from the CSV artifacts: time-series line
// plots from diagnostics.csv, an overlay from comparison CSVs, and a
// (g, B) outcome heatmap from sweep.csv. No display; files only.

#include <string>
#include <vector>

namespace ksns {

// Dispatches on each CSV header (diagnostics / comparison / sweep) and
// writes the corresponding SVG files under out_dir. Comparison files are
// overlaid into a single plot with one legend entry per input. Returns the
// paths written. Throws on unrecognized headers or I/O failure; header-only
// inputs produce empty-axes plots.
std::vector<std::string> emit_plots(const std::vector<std::string>& csv_paths,
                                    const std::string& out_dir);

}  // namespace ksns
