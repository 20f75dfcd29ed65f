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
#include "boxrec/features.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace boxrec {

namespace {

constexpr char kMagic[4] = {'B', 'X', 'F', 'S'};
constexpr std::uint32_t kVersion = 1;

std::string shape_string(Eigen::Index r, Eigen::Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

void FeatureStore::insert(const std::string& ref, ItemFeatures features) {
  if (features.global.size() != dims_.global) {
    throw Error("feature record '" + ref + "': global vector has dimension " +
                std::to_string(features.global.size()) + ", expected " +
                std::to_string(dims_.global));
  }
  if (features.map.rows() != dims_.patches || features.map.cols() != dims_.channels) {
    throw Error("feature record '" + ref + "': map has shape " +
                shape_string(features.map.rows(), features.map.cols()) + ", expected " +
                shape_string(dims_.patches, dims_.channels));
  }
  if (!features.global.allFinite() || !features.map.allFinite()) {
    throw Error("feature record '" + ref + "' contains a non-finite value");
  }
  if (!records_.emplace(ref, std::move(features)).second) {
    throw Error("duplicate feature record '" + ref + "'");
  }
}

const ItemFeatures& FeatureStore::at(const std::string& ref) const {
  auto it = records_.find(ref);
  if (it == records_.end()) throw Error("no feature record for '" + ref + "'");
  return it->second;
}

namespace {

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T read_pod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw Error("truncated feature file");
  return v;
}

void read_doubles(std::istream& in, double* dst, std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n * sizeof(double)));
  if (!in) throw Error("truncated feature file");
}

FeatureStore read_binary(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw Error("bad feature file magic");
  if (read_pod<std::uint32_t>(in) != kVersion) throw Error("unsupported feature file version");
  FeatureDims dims;
  dims.global = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  dims.patches = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  dims.channels = static_cast<Eigen::Index>(read_pod<std::uint64_t>(in));
  const auto count = read_pod<std::uint64_t>(in);
  FeatureStore store(dims);
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto len = read_pod<std::uint64_t>(in);
    if (len > (1u << 20)) throw Error("implausible id length in feature file");
    std::string id(len, '\0');
    in.read(id.data(), static_cast<std::streamsize>(len));
    if (!in) throw Error("truncated feature file");
    ItemFeatures f;
    f.global.resize(dims.global);
    f.map.resize(dims.patches, dims.channels);
    read_doubles(in, f.global.data(), static_cast<std::size_t>(dims.global));
    read_doubles(in, f.map.data(), static_cast<std::size_t>(dims.patches * dims.channels));
    store.insert(id, std::move(f));
  }
  return store;
}

double json_number(const nlohmann::json& v) {
  // null stands in for NaN, which plain JSON cannot spell.
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) throw Error("feature value is not a number");
  return v.get<double>();
}

FeatureStore read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("feature file is not valid JSON: ") + e.what());
  }
  FeatureDims dims;
  try {
    dims.global = doc.at("dims").at("global").get<Eigen::Index>();
    dims.patches = doc.at("dims").at("patches").get<Eigen::Index>();
    dims.channels = doc.at("dims").at("channels").get<Eigen::Index>();
  } catch (const nlohmann::json::exception&) {
    throw Error("feature file header must record dims.global, dims.patches, dims.channels");
  }
  FeatureStore store(dims);
  for (const auto& [id, rec] : doc.at("items").items()) {
    const auto& g = rec.at("global");
    const auto& m = rec.at("map");
    if (static_cast<Eigen::Index>(g.size()) != dims.global) {
      throw Error("feature record '" + id + "': global vector has dimension " +
                  std::to_string(g.size()) + ", expected " + std::to_string(dims.global));
    }
    if (static_cast<Eigen::Index>(m.size()) != dims.patches * dims.channels) {
      throw Error("feature record '" + id + "': map has " + std::to_string(m.size()) +
                  " values, expected " + std::to_string(dims.patches * dims.channels));
    }
    ItemFeatures f;
    f.global.resize(dims.global);
    for (Eigen::Index i = 0; i < dims.global; ++i) f.global(i) = json_number(g[i]);
    f.map.resize(dims.patches, dims.channels);
    for (Eigen::Index i = 0; i < f.map.size(); ++i) f.map.data()[i] = json_number(m[i]);
    store.insert(id, std::move(f));
  }
  return store;
}

}  // namespace

FeatureStore read_feature_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open feature file " + path.string());
  char head[4] = {};
  in.read(head, 4);
  in.clear();
  in.seekg(0);
  if (std::memcmp(head, kMagic, 4) == 0) return read_binary(in);
  return read_json(in);
}

FeatureStore load_features(const std::filesystem::path& path, const Catalog& catalog) {
  FeatureStore store = read_feature_file(path);
  std::set<std::string> refs;
  for (const auto& [id, item] : catalog.items()) {
    if (!store.contains(item.feature_ref)) {
      throw Error("missing feature record for item '" + id + "'");
    }
    refs.insert(item.feature_ref);
  }
  for (const auto& [ref, rec] : store.records()) {
    if (!refs.count(ref)) throw Error("feature record for unknown item id '" + ref + "'");
  }
  return store;
}

void write_features_binary(const FeatureStore& store, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write feature file " + path.string());
  out.write(kMagic, 4);
  write_pod(out, kVersion);
  write_pod(out, static_cast<std::uint64_t>(store.dims().global));
  write_pod(out, static_cast<std::uint64_t>(store.dims().patches));
  write_pod(out, static_cast<std::uint64_t>(store.dims().channels));
  write_pod(out, static_cast<std::uint64_t>(store.size()));
  for (const auto& [id, f] : store.records()) {
    write_pod(out, static_cast<std::uint64_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    out.write(reinterpret_cast<const char*>(f.global.data()),
              static_cast<std::streamsize>(f.global.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(f.map.data()),
              static_cast<std::streamsize>(f.map.size() * sizeof(double)));
  }
}

void write_features_json(const FeatureStore& store, const std::filesystem::path& path) {
  nlohmann::json doc;
  doc["dims"] = {{"global", store.dims().global},
                 {"patches", store.dims().patches},
                 {"channels", store.dims().channels}};
  doc["items"] = nlohmann::json::object();
  for (const auto& [id, f] : store.records()) {
    std::vector<double> g(f.global.data(), f.global.data() + f.global.size());
    std::vector<double> m(f.map.data(), f.map.data() + f.map.size());
    doc["items"][id] = {{"global", g}, {"map", m}};
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write feature file " + path.string());
  out << doc.dump();
}

}  // namespace boxrec
