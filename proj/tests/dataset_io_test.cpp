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

#include <filesystem>

#include <gtest/gtest.h>

#include "boxrec/dataset_io.hpp"
#include "boxrec/demo_data.hpp"

using namespace boxrec;

namespace {

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / "boxrec_io" / name;
}

}  // namespace

TEST(PairsFile, RoundTripAndOrientation) {
  DemoOptions o;
  o.pairs_per_class = 10;
  o.test_outfits = 10;
  auto d = make_demo(o);
  const auto& pairs = d.pairs[1];  // bw-fw
  auto path = scratch("pairs.jsonl");
  write_pairs_jsonl(pairs, path);
  auto back = read_pairs_jsonl(path, pairs.pair, d.catalog);
  EXPECT_EQ(back.positives, pairs.positives);
  EXPECT_EQ(back.negatives, pairs.negatives);

  // Reversed members are put back in type order.
  const auto& [a, b] = pairs.positives[0];
  write_text_file(path, nlohmann::json{{"a", b}, {"b", a}, {"label", 1}}.dump() + "\n");
  auto flipped = read_pairs_jsonl(path, PairType::parse("fw-bw"), d.catalog);
  EXPECT_EQ(flipped.positives[0], pairs.positives[0]);

  write_text_file(path, R"({"a":"tw-0001","b":"bw-0001","label":1})" "\n");
  EXPECT_THROW(read_pairs_jsonl(path, pairs.pair, d.catalog), Error);
  write_text_file(path, R"({"a":")" + a + R"(","b":")" + b + R"(","label":7})" "\n");
  EXPECT_THROW(read_pairs_jsonl(path, pairs.pair, d.catalog), Error);
  std::filesystem::remove_all(path.parent_path());
}

TEST(QueryFile, RoundTrip) {
  PreferenceQuery q;
  q.occasion = Occasion::formal;
  q[ClothingType::top_wear] = {{"tw-0001", "tw-0002"}, 100, 900, 15};
  q[ClothingType::bottom_wear] = {{"bw-0003"}, 0, 1000, 3};
  q[ClothingType::foot_wear] = {{"fw-0004"}, 5, 6, 2};
  auto j = query_to_json(q);
  auto back = query_from_json(j);
  EXPECT_EQ(query_to_json(back), j);
  EXPECT_EQ(back.occasion, Occasion::formal);
  EXPECT_EQ(back[ClothingType::top_wear].count, 15u);
}

TEST(TestsetFile, FlagsBecomePairLabels) {
  auto j = nlohmann::json::parse(R"([
    {"items": ["t", "b", "f"], "label": 1},
    {"items": ["t", "b", "f"], "label": 0, "mismatch": ["bw"]},
    {"items": ["t", "b", "f"], "label": 0, "pair_labels": {"tw-bw": 1, "bw-fw": 0, "tw-fw": 1}}
  ])");
  auto cases = testset_from_json(j);
  ASSERT_EQ(cases.size(), 3u);
  EXPECT_FALSE(cases[0].pair_labels.has_value());
  EXPECT_EQ(*cases[1].pair_labels, (std::array<int, 3>{0, 0, 1}));
  EXPECT_EQ(*cases[2].pair_labels, (std::array<int, 3>{1, 0, 1}));
  auto again = testset_from_json(testset_to_json(cases));
  EXPECT_EQ(again[2].pair_labels, cases[2].pair_labels);
  EXPECT_EQ(again[1].label, 0);
}

TEST(Demo, Deterministic) {
  DemoOptions o;
  o.pairs_per_class = 30;
  o.test_outfits = 20;
  auto a = make_demo(o);
  auto b = make_demo(o);
  EXPECT_EQ(a.catalog.to_jsonl(), b.catalog.to_jsonl());
  EXPECT_EQ(a.pairs[2].negatives, b.pairs[2].negatives);
  EXPECT_EQ(testset_to_json(a.testset), testset_to_json(b.testset));
  for (const auto& [id, item] : a.catalog.items()) {
    const auto [lo, hi] = demo_price_range(item.type);
    EXPECT_GE(item.price, lo);
    EXPECT_LT(item.price, hi);
  }
  // Pair labels follow the hidden hues.
  for (const auto& ds : a.pairs) {
    for (const auto& [x, y] : ds.positives) EXPECT_EQ(a.hue.at(x), a.hue.at(y));
    for (const auto& [x, y] : ds.negatives) EXPECT_NE(a.hue.at(x), a.hue.at(y));
  }
}

TEST(Demo, WritesFiles) {
  DemoOptions o;
  o.pairs_per_class = 5;
  o.test_outfits = 4;
  auto d = make_demo(o);
  auto dir = scratch("demo");
  write_demo(d, dir);
  for (const char* f : {"catalog.jsonl", "features.bin", "pairs-tw-bw.jsonl", "pairs-bw-fw.jsonl",
                        "pairs-tw-fw.jsonl", "testset.json", "hues.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  std::filesystem::remove_all(dir);
}
