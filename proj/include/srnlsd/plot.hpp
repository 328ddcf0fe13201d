#pragma once

#include <string>
#include <vector>

#include "srnlsd/montecarlo.hpp"

namespace srnlsd {

struct HeatmapOptions {
    /// Rate mapped to the neutral midpoint of the diverging color scale.
    double nominal = 0.05;
    double cell_px = 44.0;
};

/**
 * Standalone SVG with one heatmap panel per (df, test) pair: rows are T,
 * columns the N or K axis, color the rejection rate on a blue-white-red
 * scale centered at the nominal level. Unavailable rates are drawn grey.
 * Output depends only on the input records. Throws ParseError("no cells")
 * for an empty record list.
 */
[[nodiscard]] std::string render_size_heatmap(const std::vector<SizeRecord>& records,
                                              const HeatmapOptions& options = {});

}  // namespace srnlsd
