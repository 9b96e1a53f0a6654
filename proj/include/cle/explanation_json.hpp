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

#ifndef CLE_EXPLANATION_JSON_HPP_
#define CLE_EXPLANATION_JSON_HPP_

#include <nlohmann/json.hpp>

#include "cle/explainer.hpp"

namespace cle {

// Wall-clock timings vary run to run, so they are only written on request.
nlohmann::json explanation_to_json(const Explanation& explanation, bool include_timings = false);

// Inverse of explanation_to_json for the fields it writes. The config echo
// is restored as far as it was serialized.
Explanation explanation_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const ExplainConfig& cfg);

}  // namespace cle

#endif  // CLE_EXPLANATION_JSON_HPP_
