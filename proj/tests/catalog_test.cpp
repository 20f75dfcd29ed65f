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
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "boxrec/catalog.hpp"
#include "boxrec/types.hpp"
#include "fixtures.hpp"

using namespace boxrec;
using boxrec::testing::make_item;

TEST(Types, PairTypeIsCanonical) {
  PairType a(ClothingType::bottom_wear, ClothingType::top_wear);
  PairType b(ClothingType::top_wear, ClothingType::bottom_wear);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.first(), ClothingType::top_wear);
  EXPECT_EQ(a.name(), "tw-bw");
  EXPECT_EQ(PairType::parse("fw-tw"), PairType(ClothingType::top_wear, ClothingType::foot_wear));
  EXPECT_THROW(PairType(ClothingType::foot_wear, ClothingType::foot_wear), Error);
}

TEST(Types, ParseNames) {
  EXPECT_EQ(parse_clothing_type("bw"), ClothingType::bottom_wear);
  EXPECT_EQ(parse_clothing_type(long_name(ClothingType::foot_wear)), ClothingType::foot_wear);
  EXPECT_THROW(parse_clothing_type("hat"), Error);
  EXPECT_EQ(parse_occasion("formal"), Occasion::formal);
  EXPECT_THROW(parse_occasion("party"), Error);
}

TEST(Tokenize, LowercaseAndPunctuation) {
  EXPECT_EQ(tokenize("Blue  Oxford-Shirt, slim!"),
            (std::vector<std::string>{"blue", "oxfordshirt", "slim"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_TRUE(tokenize(" ,. ").empty());
}

TEST(Catalog, VocabularyFromTitles) {
  const char* text =
      R"({"id":"t1","type":"tw","category":"shirt","occasion":"casual","price":10,"title":"blue shirt"})"
      "\n"
      R"({"id":"t2","type":"tw","category":"shirt","occasion":"casual","price":12,"title":"red shirt"})"
      "\n";
  auto load = parse_catalog(text, CatalogFormat::jsonl);
  EXPECT_TRUE(load.rejected.empty());
  EXPECT_EQ(load.catalog.vocabulary().tokens(), (std::vector<std::string>{"blue", "red", "shirt"}));
  EXPECT_EQ(load.catalog.vocabulary().index("red"), 1u);
  EXPECT_THROW(load.catalog.vocabulary().index("green"), Error);
}

TEST(Catalog, CsvRowMissingPriceIsRejected) {
  const char* text =
      "id,type,category,occasion,price,title\n"
      "t1,tw,shirt,casual,100,plain shirt\n"
      "t2,tw,shirt,casual,,plain shirt\n"
      "b1,bw,jeans,formal,250,\"dark, washed jeans\"\n";
  auto load = parse_catalog(text, CatalogFormat::csv);
  EXPECT_EQ(load.catalog.size(), 2u);
  ASSERT_EQ(load.rejected.size(), 1u);
  EXPECT_EQ(load.rejected[0].line, 3u);
  EXPECT_EQ(load.catalog.at("b1").title, "dark, washed jeans");
}

TEST(Catalog, MalformedRowsAreReported) {
  const char* text =
      "not json\n"
      R"({"id":"t1","type":"tw","category":"jeans","occasion":"casual","price":10,"title":"x"})"
      "\n"
      R"({"id":"t2","type":"tw","category":"shirt","occasion":"casual","price":1.5,"title":"x"})"
      "\n"
      R"({"id":"t3","type":"tw","category":"shirt","occasion":"casual","price":-4,"title":"x"})"
      "\n"
      R"({"id":"t4","type":"hat","category":"shirt","occasion":"casual","price":4,"title":"x"})"
      "\n";
  auto load = parse_catalog(text, CatalogFormat::jsonl);
  EXPECT_EQ(load.catalog.size(), 0u);
  EXPECT_EQ(load.rejected.size(), 5u);
}

TEST(Catalog, DuplicateIdThrows) {
  const char* text =
      R"({"id":"t1","type":"tw","category":"shirt","occasion":"casual","price":10,"title":"x"})"
      "\n"
      R"({"id":"t1","type":"tw","category":"shirt","occasion":"casual","price":11,"title":"y"})"
      "\n";
  EXPECT_THROW(parse_catalog(text, CatalogFormat::jsonl), Error);
}

TEST(Catalog, EmptyFile) {
  auto load = parse_catalog("", CatalogFormat::jsonl);
  EXPECT_EQ(load.catalog.size(), 0u);
  EXPECT_EQ(load.catalog.vocabulary().size(), 0u);
  EXPECT_TRUE(load.rejected.empty());
}

TEST(Catalog, ItemsOfPartition) {
  auto c = Catalog::build({make_item("t2", ClothingType::top_wear, "shirt", 5),
                           make_item("t1", ClothingType::top_wear, "tshirt", 5),
                           make_item("b1", ClothingType::bottom_wear, "jeans", 5)});
  auto tops = items_of(c, ClothingType::top_wear);
  ASSERT_EQ(tops.size(), 2u);
  EXPECT_EQ(tops[0]->id, "t1");
  EXPECT_EQ(tops[1]->id, "t2");
  EXPECT_TRUE(items_of(c, ClothingType::foot_wear).empty());
  std::size_t total = 0;
  for (ClothingType t : kClothingTypes) total += items_of(c, t).size();
  EXPECT_EQ(total, c.size());
}

TEST(Catalog, TokensAreInVocabulary) {
  auto c = Catalog::build({make_item("t1", ClothingType::top_wear, "polo tshirt", 5,
                                     Occasion::casual, "Striped Polo"),
                           make_item("b1", ClothingType::bottom_wear, "trouser/chino", 5)});
  for (const auto& [id, item] : c.items()) {
    for (const auto& tok : item.title_tokens) EXPECT_TRUE(c.vocabulary().contains(tok)) << tok;
  }
  EXPECT_TRUE(c.vocabulary().contains("trouserchino"));
  EXPECT_EQ(c.at("t1").feature_ref, "t1");
  EXPECT_THROW(c.at("zz"), Error);
}

TEST(Catalog, BuildRejectsUnknownCategory) {
  EXPECT_THROW(Catalog::build({make_item("t1", ClothingType::top_wear, "jeans", 5)}), Error);
}

TEST(Catalog, ReloadIsByteIdentical) {
  auto c = Catalog::build({make_item("f1", ClothingType::foot_wear, "trainer", 900),
                           make_item("t1", ClothingType::top_wear, "shirt", 300,
                                     Occasion::formal, "white \"oxford\" shirt")});
  const auto path = std::filesystem::temp_directory_path() / "boxrec_catalog_reload.jsonl";
  {
    std::ofstream out(path);
    out << c.to_jsonl();
  }
  auto first = load_catalog(path, CatalogFormat::jsonl);
  auto second = load_catalog(path, CatalogFormat::jsonl);
  EXPECT_EQ(first.catalog.to_jsonl(), c.to_jsonl());
  EXPECT_EQ(first.catalog.to_jsonl(), second.catalog.to_jsonl());
  EXPECT_EQ(first.catalog.vocabulary().hash(), second.catalog.vocabulary().hash());
  std::filesystem::remove(path);
}

TEST(Catalog, Buckets) {
  auto c = Catalog::build({make_item("t2", ClothingType::top_wear, "shirt", 5),
                           make_item("t1", ClothingType::top_wear, "shirt", 5),
                           make_item("t3", ClothingType::top_wear, "shirt", 5, Occasion::formal)});
  EXPECT_EQ(c.bucket(ClothingType::top_wear, "shirt", Occasion::casual),
            (std::vector<std::string>{"t1", "t2"}));
  EXPECT_TRUE(c.bucket(ClothingType::top_wear, "tshirt", Occasion::casual).empty());
}
