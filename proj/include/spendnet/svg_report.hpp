#pragma once

#include <string>

#include "spendnet/category_correlation.hpp"
#include "spendnet/demographics.hpp"

namespace spendnet {

/// Correlation heat-map over the graph's categories, rows/columns ordered
/// by community then code, with community frames.
void write_rho_heatmap_svg(const CorrelationMatrix& m, const CategoryCorrelationGraph& labeled,
                           const std::string& path);

/// Scatter of the per-category feature triplets: x = age, y = seg,
/// marker size and fill encode the gender balance.
void write_afs_scatter_svg(const CategoryFeatureSet& f, const std::string& path);

}  // namespace spendnet
