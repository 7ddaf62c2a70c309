#pragma once

#include <voxpose/experiment.hpp>
#include <voxpose/renderer.hpp>

namespace voxpose {

// Six-panel chart of the per-epoch curves (average / median / failure rate
// for rotation and translation error), one polyline per ablation arm.
Image plot_curves(const ExperimentReport& report);

}  // namespace voxpose
