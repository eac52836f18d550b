#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "models.hpp"
#include "oracles.hpp"
#include "settype/settype.hpp"

using namespace settype;
using namespace settype::testing;

TEST(SparseVector, DotMatchesDenseOracle) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<FeatureKey> key(0, 49);
  std::normal_distribution<double> value(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    SparseVector a, b;
    for (int i = 0; i < 20; ++i) a.add(key(rng), value(rng));
    for (int i = 0; i < 20; ++i) b.add(key(rng), value(rng));
    auto da = dense(a, 50), db = dense(b, 50);
    double expected = std::inner_product(da.begin(), da.end(), db.begin(), 0.0);
    EXPECT_NEAR(a.dot(b), expected, 1e-12);
    EXPECT_NEAR(b.dot(a), a.dot(b), 1e-12);
    auto sum = a + b;
    auto dsum = dense(sum, 50);
    for (std::size_t k = 0; k < 50; ++k) EXPECT_NEAR(dsum[k], da[k] + db[k], 1e-12);
  }
}

TEST(SparseVector, Bilinear) {
  SparseVector a, b, c;
  a.set(1, 2.0);
  a.set(3, -1.0);
  b.set(1, 0.5);
  b.set(2, 4.0);
  c.set(3, 3.0);
  c.set(2, 1.0);
  auto bc = b + c;
  EXPECT_DOUBLE_EQ(a.dot(bc), a.dot(b) + a.dot(c));
  auto scaled = a;
  scaled.scale(3.0);
  EXPECT_DOUBLE_EQ(scaled.dot(b), 3.0 * a.dot(b));
}

TEST(SparseVector, CanonicalizeDropsZeros) {
  SparseVector v;
  v.set(1, 1.0);
  v.set(2, 0.0);
  v.add(3, 2.0);
  v.add(3, -2.0);
  v.canonicalize();
  EXPECT_EQ(v.size(), 1u);
  EXPECT_TRUE(v.contains(1));
  EXPECT_FALSE(v.contains(3));
  SparseVector w;
  w.set(1, 1.0);
  w.set(9, 0.0);
  EXPECT_EQ(v, w);
}

TEST(SparseVector, Axpy) {
  SparseVector a, b;
  a.set(0, 1.0);
  b.set(0, 2.0);
  b.set(5, -1.0);
  a.axpy(-0.5, b);
  EXPECT_DOUBLE_EQ(a.get(0), 0.0);
  EXPECT_DOUBLE_EQ(a.get(5), 0.5);
  EXPECT_DOUBLE_EQ(a.get(42), 0.0);
}

TEST(FeatureDict, InjectiveBothWays) {
  FeatureDict d;
  auto a = d.intern("CU=was");
  auto b = d.intern("HD=Einstein");
  EXPECT_NE(a, b);
  EXPECT_EQ(d.intern("CU=was"), a);
  EXPECT_EQ(d.text(a), "CU=was");
  EXPECT_EQ(d.text(b), "HD=Einstein");
  EXPECT_EQ(d.size(), 2u);
  EXPECT_THROW(d.text(7), index_error);
  EXPECT_FALSE(d.find("missing"));
}

TEST(FeatureDict, LookupDropsUnseenFeatures) {
  FeatureDict d;
  d.intern("known");
  FeatureVector phi;
  phi.add("known", 2.0);
  phi.add("unseen", 5.0);
  auto v = d.lookup_all(phi);
  EXPECT_EQ(v.size(), 1u);
  EXPECT_DOUBLE_EQ(v.get(*d.find("known")), 2.0);
  EXPECT_EQ(d.size(), 1u);
}

TEST(TypeSet, SortedWithoutDuplicates) {
  TypeSet s{3, 1, 3, 2};
  EXPECT_EQ(s.members(), (std::vector<TypeIndex>{1, 2, 3}));
  EXPECT_FALSE(s.insert(2));
  EXPECT_TRUE(s.insert(0));
  EXPECT_TRUE(s.erase(3));
  EXPECT_FALSE(s.erase(3));
  EXPECT_EQ(s.members(), (std::vector<TypeIndex>{0, 1, 2}));
  EXPECT_EQ(s.intersection_size(TypeSet{1, 2, 7}), 2u);
  EXPECT_EQ(s.united(TypeSet{7}).members(), (std::vector<TypeIndex>{0, 1, 2, 7}));
  EXPECT_TRUE(TypeSet{}.empty());
  EXPECT_LT((TypeSet{0, 5}), (TypeSet{1}));
}

TEST(TypeSystem, NamesAreUniqueAndNonEmpty) {
  TypeSystem ts;
  EXPECT_EQ(ts.add_type("writer"), 0u);
  EXPECT_EQ(ts.add_type("novelist"), 1u);
  EXPECT_THROW(ts.add_type("writer"), contract_error);
  EXPECT_THROW(ts.add_type(""), contract_error);
  EXPECT_EQ(ts.index_of("novelist"), 1u);
  EXPECT_THROW(ts.index_of("poet"), lookup_error);
  EXPECT_FALSE(ts.find("poet"));
}

TEST(TypeSystem, EdgesAreValidated) {
  TypeSystem ts;
  ts.add_type("writer");
  ts.add_type("novelist");
  ts.add_type("essayist");
  EXPECT_TRUE(ts.add_edge(0, 1));
  EXPECT_FALSE(ts.add_edge(0, 1));
  EXPECT_TRUE(ts.add_edge(0, 2));
  EXPECT_THROW(ts.add_edge(1, 1), contract_error);
  EXPECT_THROW(ts.add_edge(0, 9), index_error);
  EXPECT_TRUE(ts.has_edge(0, 1));
  EXPECT_FALSE(ts.has_edge(1, 0));
  EXPECT_EQ(ts.children(0), (std::vector<TypeIndex>{1, 2}));
  EXPECT_EQ(ts.parents(2), (std::vector<TypeIndex>{0}));
  EXPECT_THROW(ts.check(TypeSet{0, 3}), index_error);
}

TEST(Mention, ValidateRejectsBadOffsets) {
  auto m = einstein_mention();
  EXPECT_NO_THROW(m.validate());
  auto bad = m;
  bad.span_end = 0;
  EXPECT_THROW(bad.validate(), index_error);
  bad = m;
  bad.span_end = 6;
  EXPECT_THROW(bad.validate(), index_error);
  bad = m;
  bad.head_index = 2;
  EXPECT_THROW(bad.validate(), index_error);
  bad = m;
  bad.dep_label.pop_back();
  EXPECT_THROW(bad.validate(), index_error);
  bad = m;
  bad.dep_parent[1] = 5;
  EXPECT_THROW(bad.validate(), index_error);
  bad = m;
  bad.dep_parent[1] = -2;
  EXPECT_THROW(bad.validate(), index_error);
}

TEST(ScoreSet, EmptySetScoresZero) {
  auto model = table_model({"a", "b"}, {2.0, 1.0}, {{"a", "b", 1.0}});
  EXPECT_EQ(score_set(model, empty_cache(), TypeSet{}), 0.0);
}

TEST(ScoreSet, SingletonIsUnary) {
  auto model = table_model({"a", "b"}, {2.0, 1.0}, {{"a", "b", 17.0}});
  EXPECT_EQ(score_set(model, empty_cache(), TypeSet{0}), 2.0);
  EXPECT_EQ(score_set(model, empty_cache(), TypeSet{1}), 1.0);
}

TEST(ScoreSet, PairCountedOnce) {
  auto model = table_model({"a", "b"}, {2.0, 1.0}, {{"a", "b", 1.0}});
  const TypeSet ab{0, 1};
  EXPECT_EQ(score_set(model, empty_cache(), ab), 4.0);
  auto phi = joint_features(empty_cache(), ab, model.types, model.features);
  EXPECT_EQ(model.dot(phi), 4.0);
}

TEST(ScoreSet, UsesMentionFeatures) {
  auto m = einstein_mention();
  auto model = table_model({"physicist", "treaty"}, {0.5, 0.0});
  model.set_weight(features::conjunction("physicist", "HD=Einstein"), 2.0);
  model.set_weight(features::conjunction("treaty", "CU=was"), -1.0);
  auto cache = extract_mention_features(m, model.features);
  EXPECT_DOUBLE_EQ(score_set(model, cache, TypeSet{0}), 2.5);
  EXPECT_DOUBLE_EQ(score_set(model, cache, TypeSet{1}), -1.0);
}

TEST(ScoreSet, InvalidIndexThrows) {
  auto model = table_model({"a", "b"}, {2.0, 1.0});
  EXPECT_THROW(score_set(model, empty_cache(), TypeSet{2}), index_error);
  EXPECT_THROW(marginal_gain(model, empty_cache(), TypeSet{}, 5), index_error);
}

TEST(MarginalGain, FromEmptyIsUnary) {
  auto model = table_model({"a", "b", "c"}, {2.0, 1.0, -3.0});
  EXPECT_EQ(marginal_gain(model, empty_cache(), TypeSet{}, 2), -3.0);
}

TEST(MarginalGain, AddsPairTerms) {
  auto model = table_model({"a", "b", "c"}, {2.0, 1.0, -3.0}, {{"a", "c", 0.25}, {"b", "c", 0.75}});
  const TypeSet current{0, 1};
  EXPECT_EQ(marginal_gain(model, empty_cache(), current, 2), -2.0);
  EXPECT_EQ(score_set(model, empty_cache(), TypeSet{0, 1, 2}) - score_set(model, empty_cache(), current),
            -2.0);
}

TEST(MarginalGain, MemberCandidateIsContractViolation) {
  auto model = table_model({"a", "b"}, {2.0, 1.0});
  EXPECT_THROW(marginal_gain(model, empty_cache(), TypeSet{0}, 0), contract_error);
}

TEST(MarginalGain, MatchesScoreDifferenceOnRandomInstances) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = random_instance(rng, 8);
    auto scorer = inst.scorer();
    std::uint32_t mask = static_cast<std::uint32_t>(rng() % 256);
    auto current = mask_to_set(mask, 8);
    for (TypeIndex c = 0; c < 8; ++c) {
      if (current.contains(c)) continue;
      auto next = current;
      next.insert(c);
      EXPECT_NEAR(marginal_gain(scorer, current, c) + table_score(inst, mask),
                  table_score(inst, mask | (1u << c)), 1e-9);
    }
  }
}

TEST(ScoreSet, PathIndependence) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = random_instance(rng, 9);
    auto scorer = inst.scorer();
    std::uint32_t mask = static_cast<std::uint32_t>(rng() % 512);
    auto target = mask_to_set(mask, 9);
    std::vector<TypeIndex> order = target.members();
    std::shuffle(order.begin(), order.end(), rng);
    TypeSet built;
    double sum = 0.0;
    for (TypeIndex t : order) {
      sum += marginal_gain(scorer, built, t);
      built.insert(t);
    }
    EXPECT_NEAR(sum, score_set(scorer, target), 1e-9);
    EXPECT_NEAR(score_set(scorer, target), table_score(inst, mask), 1e-9);
  }
}

TEST(ScoreSet, ScalingPreservesArgmax) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + trial % 9;  // up to 12 types
    auto inst = random_instance(rng, n);
    const double lambda = 0.25 + static_cast<double>(trial % 7);
    Instance scaled = inst;
    for (auto& u : scaled.unary) u *= lambda;
    for (auto& row : scaled.pair)
      for (auto& p : row) p *= lambda;
    auto a = inst.scorer(), b = scaled.scorer();
    for (int k = 0; k < 10; ++k) {
      auto mask = static_cast<std::uint32_t>(rng() % (1u << n));
      auto set = mask_to_set(mask, n);
      EXPECT_NEAR(score_set(b, set), lambda * score_set(a, set), 1e-9);
    }
    EXPECT_EQ(brute_force_best(inst).mask, brute_force_best(scaled).mask);
    EXPECT_EQ(decode_exact(a).set, decode_exact(b).set);
  }
}

TEST(ScoreSet, SizeTermAppliesToNonEmptySets) {
  TableScorer s(3);
  s.set_unary(0, 1.0);
  s.set_unary(1, 1.0);
  s.set_size_terms({0.5, -2.0});
  EXPECT_EQ(score_set(s, TypeSet{}), 0.0);
  EXPECT_EQ(score_set(s, TypeSet{0}), 1.5);
  EXPECT_EQ(score_set(s, TypeSet{0, 1}), 0.0);
  EXPECT_EQ(marginal_gain(s, TypeSet{0}, 1), -1.5);
  EXPECT_THROW(s.set_pair(1, 1, 1.0), contract_error);
}

namespace {

Model sample_model() {
  auto model = table_model({"writer", "novelist", "essayist"}, {0.5, -0.25, 1e-17},
                           {{"writer", "novelist", 0.1}});
  model.types.add_edge(0, 1);
  model.types.add_edge(0, 2);
  model.types.raw_to_projected()["Writers"] = 0;
  model.types.raw_to_projected()["Short_story_writers"] = 0;
  model.set_weight("CJ=writer|HD=Wallace", 1.0 / 3.0);
  model.set_weight("CJ=novelist|CU=wrote", 0.0);
  model.decoder.mode = DecoderMode::connected;
  model.decoder.graph = GraphKind::cooccur;
  model.decoder.threshold = -0.5;
  model.decoder.max_set_size = 4;
  model.features.context_window = 3;
  model.features.use_graph_features = true;
  model.cooccurrence = {{0, 1}, {1, 2}};
  return model;
}

}  // namespace

TEST(ModelIo, RoundTripPreservesEverything) {
  auto model = sample_model();
  auto text = model_to_string(model);
  auto loaded = model_from_string(text);
  EXPECT_EQ(loaded.types, model.types);
  EXPECT_EQ(loaded.types.raw_to_projected(), model.types.raw_to_projected());
  EXPECT_EQ(loaded.decoder, model.decoder);
  EXPECT_EQ(loaded.features, model.features);
  EXPECT_EQ(loaded.cooccurrence, model.cooccurrence);
  for (const auto& [key, value] : model.weights)
    EXPECT_EQ(loaded.weight(model.dict.text(key)), value) << model.dict.text(key);
  EXPECT_EQ(model_to_string(loaded), text);
}

TEST(ModelIo, RecordsAreSortedByKindThenKey) {
  auto text = model_to_string(sample_model());
  std::istringstream in(text);
  std::string line, previous_kind;
  std::vector<std::string> kinds;
  std::vector<std::string> weight_keys;
  while (std::getline(in, line)) {
    auto kind = line.substr(0, 1);
    if (kinds.empty() || kinds.back() != kind) kinds.push_back(kind);
    if (kind == "F") weight_keys.push_back(line.substr(2, line.rfind('\t') - 2));
  }
  EXPECT_EQ(kinds, (std::vector<std::string>{"C", "E", "F", "R", "T"}));
  EXPECT_TRUE(std::is_sorted(weight_keys.begin(), weight_keys.end()));
  EXPECT_EQ(text.find("CU=wrote"), std::string::npos);
}

TEST(ModelIo, ByteStableRegardlessOfInsertionOrder) {
  Model a = table_model({"x", "y"}, {1.0, 2.0}, {{"x", "y", 3.0}});
  Model b;
  b.types = a.types;
  b.set_weight(features::type_pair("x", "y"), 3.0);
  b.set_weight(features::bias("y"), 2.0);
  b.set_weight(features::bias("x"), 1.0);
  EXPECT_EQ(model_to_string(a), model_to_string(b));
}

TEST(ModelIo, TypeSystemFileHasNoWeights) {
  auto model = sample_model();
  std::ostringstream out;
  save_type_system(model.types, out);
  EXPECT_EQ(out.str().find("F\t"), std::string::npos);
  EXPECT_EQ(out.str().find("C\t"), std::string::npos);
  std::istringstream in(out.str());
  EXPECT_EQ(load_type_system(in), model.types);
}

TEST(ModelIo, MalformedInputIsRejected) {
  EXPECT_THROW(model_from_string("T\t0\n"), format_error);
  EXPECT_THROW(model_from_string("Q\t0\tx\n"), format_error);
  EXPECT_THROW(model_from_string("T\t1\tx\n"), format_error);
  EXPECT_THROW(model_from_string("T\t0\tx\nT\t0\ty\n"), format_error);
  EXPECT_THROW(model_from_string("T\t0\tx\nF\tCJ=x|BIAS\tabc\n"), format_error);
  EXPECT_THROW(model_from_string("C\tnonsense\t1\nT\t0\tx\n"), format_error);
  EXPECT_THROW(model_from_string("T\t0\tx\nE\t0\t3\n"), index_error);
  EXPECT_THROW(model_from_string("T\t0\tx\nR\tCat\t2\n"), index_error);
  EXPECT_THROW(load_model_file("/nonexistent/model.tsv"), error);
}
