// Copyright 2026 The sl3hecke Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON documents exchanged through the C interface.

#pragma once

#include <vector>

#include "galois.hpp"
#include "json.hpp"

namespace sl3 {

nlohmann::json homology_json(const HomologySpace& H);

// One row per eigensystem and requested prime; "*" where ell divides pN.
nlohmann::json eigensystems_json(const HomologySpace& H, const std::vector<EigenSystem>& systems,
                                 const std::vector<u32>& ells);

struct PredictionReport {
  std::vector<WeightPrediction> weights;
  std::vector<ParityResult> parity;  // per Levi shape
  bool parity_ok = false;
  std::string parity_reason;
  LevelNebentype level;
  std::vector<FrobeniusData> frobenius;
  std::string frobenius_note;  // why Frobenius data is missing, if it is
};

PredictionReport predict_report(const GaloisRepSpec& spec, u32 ell_max);
nlohmann::json prediction_json(const GaloisRepSpec& spec, const PredictionReport& r);
nlohmann::json frobenius_json(const FrobeniusData& d);
nlohmann::json match_json(const MatchReport& r);

}  // namespace sl3
