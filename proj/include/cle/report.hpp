/*
 * Copyright 2026 The CLE Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef CLE_REPORT_HPP_
#define CLE_REPORT_HPP_

#include <string>
#include <vector>

#include "cle/explainer.hpp"
#include "cle/repr.hpp"

namespace cle {

// Per-feature display weight: the coefficient of each singleton term, the
// greedy drop, or 1 for unweighted (random) picks. Zero elsewhere.
std::vector<double> feature_weights(const Explanation& explanation, int dim);

// Green for positive, red for negative; opacity grows with |weight| relative
// to the largest magnitude.
std::string render_segment_svg(const Image& image, const SegmentMap& segments,
                               const std::vector<double>& weights);

// Self-contained HTML page: highlighted text, segment overlay or bar table,
// followed by the term table (combinations appear as "A AND B" rows).
std::string render_report_html(const Explanation& explanation,
                               const InterpretableInstance& instance);

}  // namespace cle

#endif  // CLE_REPORT_HPP_
