#pragma once

#include <string>

#include "mdl/experiment.hpp"

namespace mdl {

/// Runs one named figure recipe (fig1..fig5) and writes a bundle of per-rate
/// sweep CSVs plus a provenance JSON under <out_dir>/<figure>/.
int run_figure(const ExperimentSpec& spec, const std::string& out_dir, int threads);

} // namespace mdl
