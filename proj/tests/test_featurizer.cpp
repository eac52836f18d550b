#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "models.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"
#include "settype/settype.hpp"

using namespace settype;
using namespace settype::testing;

namespace {

Mention wallace_mention() {
  Mention m;
  m.tokens = {"David", "Foster", "Wallace", "wrote", "Infinite", "Jest", "."};
  m.span_start = 0;
  m.span_end = 3;
  m.head_index = 2;
  m.dep_parent = {2, 2, 3, -1, 5, 3, 3};
  m.dep_label = {"compound", "compound", "nsubj", "ROOT", "compound", "dobj", "punct"};
  m.entity_id = "David Foster Wallace";
  return m;
}

TypeSystem writers() {
  // 0 writer, 1 novelist, 2 essayist, 3 physicist, 4 treaty
  TypeSystem ts({"writer", "novelist", "essayist", "physicist", "treaty"}, {{0, 1}, {0, 2}});
  return ts;
}

}  // namespace

TEST(WordShape, Examples) {
  EXPECT_EQ(word_shape("NATO"), "X");
  EXPECT_EQ(word_shape("Einstein"), "Xx");
  EXPECT_EQ(word_shape("B-52s"), "Xodx");
  EXPECT_EQ(word_shape("1996"), "d");
  EXPECT_EQ(word_shape("iPhone"), "xXx");
  EXPECT_THROW(word_shape(""), contract_error);
}

TEST(MentionFeatures, EinsteinExample) {
  auto cache = extract_mention_features(einstein_mention(), FeaturizerConfig{});
  for (const char* f : {"CU=was", "CU=a", "CB=was_a", "DP=physicist", "DPL=nsubj", "HD=Einstein",
                        "SH=Xx"})
    EXPECT_TRUE(cache.contains(f)) << f;
  EXPECT_FALSE(cache.contains("CU=physicist"));
  EXPECT_FALSE(cache.contains("CU=Einstein"));
}

TEST(MentionFeatures, SentenceStartHasOnlyRightContext) {
  auto cache = extract_mention_features(einstein_mention(), FeaturizerConfig{});
  std::size_t context = 0;
  for (const auto& f : cache.features)
    if (f.text.rfind("CU=", 0) == 0 || f.text.rfind("CB=", 0) == 0) ++context;
  EXPECT_EQ(context, 3u);  // CU=was, CU=a, CB=was_a
}

TEST(MentionFeatures, HeadAndNonHeadTokens) {
  auto cache = extract_mention_features(wallace_mention(), FeaturizerConfig{});
  EXPECT_TRUE(cache.contains("HD=Wallace"));
  EXPECT_TRUE(cache.contains("NH=David"));
  EXPECT_TRUE(cache.contains("NH=Foster"));
  EXPECT_FALSE(cache.contains("NH=Wallace"));
  EXPECT_EQ(cache.count("SH=Xx"), 3.0);
  // children of the head include the in-span compounds
  EXPECT_EQ(cache.count("DC=David"), 1.0);
  EXPECT_EQ(cache.count("DCL=compound"), 2.0);
  EXPECT_TRUE(cache.contains("DP=wrote"));
  EXPECT_TRUE(cache.contains("DPL=nsubj"));
  EXPECT_TRUE(cache.contains("CU=wrote"));
  EXPECT_TRUE(cache.contains("CU=Infinite"));
  EXPECT_TRUE(cache.contains("CB=wrote_Infinite"));
  EXPECT_FALSE(cache.contains("CU=Jest"));
}

TEST(MentionFeatures, RootHeadHasNoParentFeatures) {
  auto m = wallace_mention();
  m.dep_parent[2] = -1;
  auto cache = extract_mention_features(m, FeaturizerConfig{});
  for (const auto& f : cache.features) {
    EXPECT_NE(f.text.rfind("DP=", 0), 0u) << f.text;
    EXPECT_NE(f.text.rfind("DPL=", 0), 0u) << f.text;
  }
}

TEST(MentionFeatures, FlagsDisableFamilies) {
  FeaturizerConfig config;
  config.use_bigrams = false;
  config.use_dependency = false;
  config.use_shape = false;
  config.context_window = 1;
  auto cache = extract_mention_features(wallace_mention(), config);
  for (const auto& f : cache.features) {
    for (const char* prefix : {"CB=", "DP=", "DPL=", "DC=", "DCL=", "SH="})
      EXPECT_NE(f.text.rfind(prefix, 0), 0u) << f.text;
  }
  EXPECT_TRUE(cache.contains("CU=wrote"));
  EXPECT_FALSE(cache.contains("CU=Infinite"));
  config.context_window = 0;
  cache = extract_mention_features(wallace_mention(), config);
  EXPECT_FALSE(cache.contains("CU=wrote"));
  EXPECT_TRUE(cache.contains("HD=Wallace"));
}

TEST(MentionFeatures, RepeatedFeaturesAccumulateCounts) {
  Mention m = Mention::flat({"the", "the", "NATO", "the", "the"}, 2, 3, 2, "NATO");
  auto cache = extract_mention_features(m, FeaturizerConfig{});
  EXPECT_EQ(cache.count("CU=the"), 4.0);
  EXPECT_EQ(cache.count("CB=the_the"), 2.0);
  for (std::size_t i = 1; i < cache.features.size(); ++i)
    EXPECT_LT(cache.features[i - 1].text, cache.features[i].text);
}

TEST(MentionFeatures, Deterministic) {
  auto a = extract_mention_features(wallace_mention(), FeaturizerConfig{});
  auto b = extract_mention_features(wallace_mention(), FeaturizerConfig{});
  EXPECT_EQ(a.features, b.features);
}

TEST(MentionFeatures, InvalidMentionThrows) {
  auto m = wallace_mention();
  m.head_index = 5;
  EXPECT_THROW(extract_mention_features(m, FeaturizerConfig{}), index_error);
}

TEST(ConjunctionFeatures, Examples) {
  TypeSystem ts({"physicist"});
  MentionFeatureCache cache{{{"CU=was", 1.0}}};
  auto out = conjunction_features(cache, 0, ts);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].text, "CJ=physicist|CU=was");
  EXPECT_EQ(out[1].text, "CJ=physicist|BIAS");
  auto only_bias = conjunction_features(MentionFeatureCache{}, 0, ts);
  ASSERT_EQ(only_bias.size(), 1u);
  EXPECT_EQ(only_bias[0].text, "CJ=physicist|BIAS");
  auto full = extract_mention_features(einstein_mention(), FeaturizerConfig{});
  EXPECT_EQ(conjunction_features(full, 0, ts).size(), full.features.size() + 1);
}

TEST(TypePairFeatures, CanonicalOrder) {
  auto ts = writers();
  EXPECT_EQ(type_pair_features(0, 1, ts), (std::vector<std::string>{"TP=novelist|writer"}));
  EXPECT_EQ(type_pair_features(1, 0, ts), type_pair_features(0, 1, ts));
  EXPECT_NE(type_pair_features(0, 2, ts), type_pair_features(1, 2, ts));
  EXPECT_THROW(type_pair_features(2, 2, ts), contract_error);
}

TEST(TypePairFeatures, DistinctPairsAreDistinct) {
  auto ts = writers();
  std::set<std::string> seen;
  for (TypeIndex a = 0; a < ts.size(); ++a)
    for (TypeIndex b = a + 1; b < ts.size(); ++b) EXPECT_TRUE(seen.insert(type_pair_features(a, b, ts)[0]).second);
}

TEST(GraphPatternFeatures, Patterns) {
  auto ts = writers();
  EXPECT_EQ(graph_pattern_features(0, 1, ts), (std::vector<std::string>{"GP=PARENT_CHILD"}));
  EXPECT_EQ(graph_pattern_features(1, 0, ts), (std::vector<std::string>{"GP=PARENT_CHILD"}));
  EXPECT_EQ(graph_pattern_features(1, 2, ts), (std::vector<std::string>{"GP=SIBLINGS"}));
  EXPECT_EQ(graph_pattern_features(3, 4, ts), (std::vector<std::string>{"GP=UNRELATED"}));
  EXPECT_THROW(graph_pattern_features(3, 3, ts), contract_error);
}

TEST(GraphPatternFeatures, ParentChildAndSiblingsTogether) {
  TypeSystem ts({"person", "writer", "novelist"}, {{0, 1}, {0, 2}, {1, 2}});
  EXPECT_EQ(graph_pattern_features(1, 2, ts),
            (std::vector<std::string>{"GP=PARENT_CHILD", "GP=SIBLINGS"}));
}

TEST(JointFeatures, EmptyAndSingleton) {
  auto ts = writers();
  FeaturizerConfig config;
  config.use_graph_features = true;
  auto m = wallace_mention();
  EXPECT_TRUE(joint_features(m, TypeSet{}, ts, config).empty());
  auto single = joint_features(m, TypeSet{2}, ts, config);
  for (const auto& [text, value] : single) EXPECT_EQ(text.rfind("CJ=essayist|", 0), 0u) << text;
  auto cache = extract_mention_features(m, config);
  EXPECT_EQ(single.size(), cache.features.size() + 1);
}

TEST(JointFeatures, PairAndGraphFeatures) {
  auto ts = writers();
  FeaturizerConfig config;
  config.use_graph_features = true;
  auto phi = joint_features(MentionFeatureCache{}, TypeSet{0, 1, 2}, ts, config);
  EXPECT_EQ(phi.get("TP=novelist|writer"), 1.0);
  EXPECT_EQ(phi.get("TP=essayist|writer"), 1.0);
  EXPECT_EQ(phi.get("TP=essayist|novelist"), 1.0);
  EXPECT_EQ(phi.get("GP=PARENT_CHILD"), 2.0);
  EXPECT_EQ(phi.get("GP=SIBLINGS"), 1.0);
  EXPECT_EQ(phi.get("GP=UNRELATED"), 0.0);
  config.use_pair_features = false;
  phi = joint_features(MentionFeatureCache{}, TypeSet{0, 1}, ts, config);
  EXPECT_EQ(phi.get("TP=novelist|writer"), 0.0);
  EXPECT_EQ(phi.get("GP=PARENT_CHILD"), 1.0);
}

TEST(JointFeatures, SetSizeIndicator) {
  TypeSystem ts = numbered_types(12);
  FeaturizerConfig config;
  config.use_set_size_feature = true;
  EXPECT_TRUE(joint_features(MentionFeatureCache{}, TypeSet{}, ts, config).empty());
  EXPECT_EQ(joint_features(MentionFeatureCache{}, TypeSet{3}, ts, config).get("SZ=1"), 1.0);
  std::vector<TypeIndex> ten(10), eleven(11);
  std::iota(ten.begin(), ten.end(), TypeIndex{0});
  std::iota(eleven.begin(), eleven.end(), TypeIndex{0});
  EXPECT_EQ(joint_features(MentionFeatureCache{}, TypeSet(ten), ts, config).get("SZ=10+"), 1.0);
  EXPECT_EQ(joint_features(MentionFeatureCache{}, TypeSet(eleven), ts, config).get("SZ=10+"), 1.0);
  EXPECT_EQ(joint_features(MentionFeatureCache{}, TypeSet{1, 2, 3}, ts, config).get("SZ=3"), 1.0);
}

TEST(JointFeatures, FactorsIntoMembersAndPairs) {
  std::mt19937_64 rng(21);
  TypeSystem ts({"a", "b", "c", "d", "e", "f"}, {{0, 1}, {0, 2}, {3, 4}});
  FeaturizerConfig config;
  config.use_graph_features = true;
  auto cache = extract_mention_features(wallace_mention(), config);
  for (int trial = 0; trial < 100; ++trial) {
    auto set = mask_to_set(static_cast<std::uint32_t>(rng() % 64), 6);
    FeatureVector expected;
    for (TypeIndex t : set) {
      for (const auto& f : conjunction_features(cache, t, ts)) expected.add(f.text, f.value);
      for (TypeIndex u : set)
        if (t < u)
          for (const auto& f : pair_features(t, u, ts, config)) expected.add(f, 1.0);
    }
    EXPECT_EQ(joint_features(cache, set, ts, config), expected);
  }
}

TEST(JointFeatures, DotEqualsScoreSet) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> normal(0.0, 1.0);
  TypeSystem ts({"a", "b", "c", "d", "e"}, {{0, 1}, {1, 2}});
  auto m = wallace_mention();
  for (int trial = 0; trial < 100; ++trial) {
    Model model;
    model.types = ts;
    model.features.use_graph_features = trial % 2 == 0;
    model.features.use_set_size_feature = trial % 3 == 0;
    auto cache = extract_mention_features(m, model.features);
    for (TypeIndex t = 0; t < ts.size(); ++t)
      for (const auto& f : conjunction_features(cache, t, ts))
        if (rng() % 2) model.set_weight(f.text, normal(rng));
    for (TypeIndex a = 0; a < ts.size(); ++a)
      for (TypeIndex b = a + 1; b < ts.size(); ++b)
        for (const auto& f : pair_features(a, b, ts, model.features)) model.set_weight(f, normal(rng));
    for (std::size_t n = 1; n <= ts.size(); ++n) model.set_weight(features::set_size(n), normal(rng));
    auto set = mask_to_set(static_cast<std::uint32_t>(rng() % 32), 5);
    const double direct = model.dot(joint_features(cache, set, ts, model.features));
    EXPECT_NEAR(direct, score_set(model, cache, set), 1e-9 * std::max(1.0, std::abs(direct)));
  }
}

TEST(JointFeatures, InvalidSetThrows) {
  auto ts = writers();
  EXPECT_THROW(joint_features(MentionFeatureCache{}, TypeSet{9}, ts, FeaturizerConfig{}), index_error);
}
