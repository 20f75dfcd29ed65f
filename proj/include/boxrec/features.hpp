/*
 * Copyright 2026 The BoxRec Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "boxrec/catalog.hpp"

namespace boxrec {

/// Row-major so that row i of the map is the local feature vector of patch i.
using FeatureMap = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct ItemFeatures {
  Eigen::VectorXd global;  // retrieval vector, D_g
  FeatureMap map;          // M x D1
};

struct FeatureDims {
  Eigen::Index global = 0;  // D_g
  Eigen::Index patches = 0;  // M
  Eigen::Index channels = 0;  // D1
  friend bool operator==(const FeatureDims&, const FeatureDims&) = default;
};

/// Immutable per-item visual features. Every record shares one FeatureDims
/// and holds only finite values.
class FeatureStore {
 public:
  FeatureStore() = default;
  explicit FeatureStore(FeatureDims dims) : dims_(dims) {}

  /// Throws on shape mismatch or non-finite entries.
  void insert(const std::string& ref, ItemFeatures features);

  const FeatureDims& dims() const { return dims_; }
  std::size_t size() const { return records_.size(); }
  bool contains(const std::string& ref) const { return records_.count(ref) > 0; }
  const ItemFeatures& at(const std::string& ref) const;
  const std::map<std::string, ItemFeatures>& records() const { return records_; }

 private:
  FeatureDims dims_;
  std::map<std::string, ItemFeatures> records_;
};

/// Reads either container (detected by the leading magic bytes) and checks
/// that every catalog item has a record and no record is unknown.
FeatureStore load_features(const std::filesystem::path& path, const Catalog& catalog);

/// Reads without catalog cross-checks.
FeatureStore read_feature_file(const std::filesystem::path& path);

/// Binary container: "BXFS" magic, u32 version, u64 D_g, M, D1, count, then
/// per record: u64 id length, id bytes, D_g doubles, M*D1 doubles row-major.
/// Little-endian host layout.
void write_features_binary(const FeatureStore& store, const std::filesystem::path& path);

/// JSON container: {"dims":{"global","patches","channels"},
///                  "items":{id:{"global":[...],"map":[... row-major ...]}}}
void write_features_json(const FeatureStore& store, const std::filesystem::path& path);

}  // namespace boxrec
