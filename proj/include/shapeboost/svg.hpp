// Copyright 2026 The shapeboost Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Static SVG plots of factorized effects.

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "shapeboost/factorize.hpp"

namespace shapeboost {

/// Pole (solid) and Exp_p(tau xi) (dashed) with a segment joining each pair
/// of corresponding points. `closed` joins the last point to the first.
std::string direction_svg(const DirectionVisual& visual, const std::string& title,
                          bool closed = true);

/// One polyline per column of `ys` against `x`, with point markers. Use
/// `tick_labels` to label x positions of categorical effects.
std::string scalar_effect_svg(const Eigen::VectorXd& x, const Eigen::MatrixXd& ys,
                              const std::vector<std::string>& series,
                              const std::string& x_label, const std::string& title,
                              const std::vector<std::string>& tick_labels = {});

}  // namespace shapeboost
