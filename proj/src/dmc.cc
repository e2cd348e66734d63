// Copyright 2026 The chansynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chansynth/dmc.h"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "chansynth/error.h"
#include "json.hpp"

namespace chansynth {
namespace {

void CheckEntries(std::span<const Real> values, const char* what) {
  for (Real v : values) {
    if (std::isnan(v)) {
      throw Error(ErrorCode::kNonStochastic, std::string(what) + " has NaN");
    }
    if (v < 0.0L) {
      throw Error(ErrorCode::kNegativeEntry,
                  std::string(what) + " has a negative entry");
    }
  }
  Real sum = 0.0L;
  for (Real v : values) sum += v;
  if (std::fabs(sum - 1.0L) > kStochasticTolerance) {
    std::ostringstream os;
    os << what << " sums to " << static_cast<double>(sum);
    throw Error(ErrorCode::kNonStochastic, os.str());
  }
}

}  // namespace

Dmc Dmc::Validate(std::vector<Real> px, std::vector<std::vector<Real>> pyx) {
  if (px.empty()) throw Error(ErrorCode::kEmptyAlphabet, "empty input alphabet");
  if (pyx.size() != px.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "channel matrix must have one row per input symbol");
  }
  const std::size_t ny = pyx.front().size();
  if (ny == 0) throw Error(ErrorCode::kEmptyAlphabet, "empty output alphabet");
  for (const auto& row : pyx) {
    if (row.size() != ny) {
      throw Error(ErrorCode::kDimensionMismatch, "ragged channel matrix");
    }
  }
  CheckEntries(px, "px");
  for (const auto& row : pyx) CheckEntries(row, "pyx row");

  Dmc dmc;
  dmc.px_ = std::move(px);
  dmc.pyx_.reserve(dmc.px_.size() * ny);
  for (const auto& row : pyx) {
    dmc.pyx_.insert(dmc.pyx_.end(), row.begin(), row.end());
  }
  dmc.py_.assign(ny, 0.0L);
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < dmc.x_size(); ++x) {
      dmc.py_[y] += dmc.px(x) * dmc.pyx(x, y);
    }
  }

  dmc.singularity_ = IsSingular(dmc);
  dmc.llr_ = LlrTable(dmc.x_size(), ny);
  for (std::size_t y = 0; y < ny; ++y) {
    bool have_first = false;
    Real first = 0.0L;
    for (std::size_t x = 0; x < dmc.x_size(); ++x) {
      if (dmc.joint(x, y) <= 0.0L) continue;
      Real lam = std::log2(dmc.pyx(x, y) / dmc.py(y));
      if (dmc.singularity_.singular) {
        if (!have_first) {
          first = lam;
          have_first = true;
        }
        lam = first;
      }
      dmc.llr_.Set(x, y, lam);
    }
  }
  return dmc;
}

std::vector<Real> MarginalY(const Dmc& dmc) {
  return {dmc.output_law().begin(), dmc.output_law().end()};
}

Real MutualInformation(const Dmc& dmc) {
  Real mi = 0.0L;
  for (std::size_t x = 0; x < dmc.x_size(); ++x) {
    for (std::size_t y = 0; y < dmc.y_size(); ++y) {
      if (dmc.llr().defined(x, y)) mi += dmc.joint(x, y) * dmc.llr().at(x, y);
    }
  }
  return std::max(mi, 0.0L);
}

Singularity IsSingular(const Dmc& dmc) {
  for (std::size_t y = 0; y < dmc.y_size(); ++y) {
    for (std::size_t x1 = 0; x1 < dmc.x_size(); ++x1) {
      if (dmc.px(x1) <= 0.0L || dmc.pyx(x1, y) <= 0.0L) continue;
      for (std::size_t x2 = x1 + 1; x2 < dmc.x_size(); ++x2) {
        if (dmc.px(x2) <= 0.0L || dmc.pyx(x2, y) <= 0.0L) continue;
        if (std::fabs(dmc.pyx(x1, y) - dmc.pyx(x2, y)) > kSingularTolerance) {
          return {false, SingularityWitness{y, x1, x2}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

Real LlrSigma2(const Dmc& dmc) {
  const Real mean = MutualInformation(dmc);
  Real var = 0.0L;
  for (std::size_t x = 0; x < dmc.x_size(); ++x) {
    for (std::size_t y = 0; y < dmc.y_size(); ++y) {
      if (!dmc.llr().defined(x, y)) continue;
      const Real d = dmc.llr().at(x, y) - mean;
      var += dmc.joint(x, y) * d * d;
    }
  }
  return var;
}

Real MaxLlr(const Dmc& dmc) {
  Real best = -INFINITY;
  for (std::size_t x = 0; x < dmc.x_size(); ++x) {
    for (std::size_t y = 0; y < dmc.y_size(); ++y) {
      if (dmc.llr().defined(x, y)) best = std::max(best, dmc.llr().at(x, y));
    }
  }
  return best;
}

Dmc MakeBsc(Real crossover, Real p0) {
  return Dmc::Validate({p0, 1.0L - p0}, {{1.0L - crossover, crossover},
                                         {crossover, 1.0L - crossover}});
}

Dmc MakeBec(Real erasure, Real p0) {
  return Dmc::Validate({p0, 1.0L - p0}, {{1.0L - erasure, 0.0L, erasure},
                                         {0.0L, 1.0L - erasure, erasure}});
}

Dmc MakeIdentity(std::size_t size) {
  std::vector<Real> px(size, 1.0L / static_cast<Real>(size));
  std::vector<std::vector<Real>> pyx(size, std::vector<Real>(size, 0.0L));
  for (std::size_t i = 0; i < size; ++i) pyx[i][i] = 1.0L;
  return Dmc::Validate(std::move(px), std::move(pyx));
}

namespace {

Real ParseProbability(const nlohmann::json& value) {
  if (value.is_number()) return static_cast<Real>(value.get<double>());
  if (!value.is_string()) {
    throw Error(ErrorCode::kParseError, "probability must be a decimal string");
  }
  const std::string text = value.get<std::string>();
  char* end = nullptr;
  errno = 0;
  const Real v = std::strtold(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || errno == ERANGE) {
    throw Error(ErrorCode::kParseError, "bad decimal string '" + text + "'");
  }
  return v;
}

std::size_t ParseSize(const nlohmann::json& doc, const char* field) {
  if (!doc.contains(field) || !doc[field].is_number_integer() ||
      doc[field].get<long long>() < 0) {
    throw Error(ErrorCode::kParseError,
                std::string("missing or invalid field '") + field + "'");
  }
  return doc[field].get<std::size_t>();
}

std::string FormatReal(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.21Lg", v);
  return buf;
}

}  // namespace

Dmc ParseChannelSpec(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParseError, "channel spec must be an object");
  }
  const std::size_t nx = ParseSize(doc, "x_size");
  const std::size_t ny = ParseSize(doc, "y_size");
  if (!doc.contains("px") || !doc["px"].is_array() || !doc.contains("pyx") ||
      !doc["pyx"].is_array()) {
    throw Error(ErrorCode::kParseError, "missing 'px' or 'pyx' arrays");
  }
  std::vector<Real> px;
  for (const auto& v : doc["px"]) px.push_back(ParseProbability(v));
  std::vector<std::vector<Real>> pyx;
  for (const auto& row : doc["pyx"]) {
    if (!row.is_array()) throw Error(ErrorCode::kParseError, "pyx row");
    auto& out = pyx.emplace_back();
    for (const auto& v : row) out.push_back(ParseProbability(v));
  }
  if (px.size() != nx || pyx.size() != nx) {
    throw Error(ErrorCode::kDimensionMismatch, "x_size disagrees with arrays");
  }
  for (const auto& row : pyx) {
    if (row.size() != ny) {
      throw Error(ErrorCode::kDimensionMismatch, "y_size disagrees with pyx");
    }
  }
  return Dmc::Validate(std::move(px), std::move(pyx));
}

Dmc LoadChannelSpec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseChannelSpec(buf.str());
}

std::string FormatChannelSpec(const Dmc& dmc) {
  nlohmann::json doc;
  doc["x_size"] = dmc.x_size();
  doc["y_size"] = dmc.y_size();
  doc["px"] = nlohmann::json::array();
  for (Real p : dmc.input_law()) doc["px"].push_back(FormatReal(p));
  doc["pyx"] = nlohmann::json::array();
  for (std::size_t x = 0; x < dmc.x_size(); ++x) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t y = 0; y < dmc.y_size(); ++y) {
      row.push_back(FormatReal(dmc.pyx(x, y)));
    }
    doc["pyx"].push_back(row);
  }
  return doc.dump(2) + "\n";
}

}  // namespace chansynth
