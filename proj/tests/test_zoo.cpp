#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "crosshair/zoo.hpp"
#include "crosshair/zoo_io.hpp"

using namespace crosshair;

namespace {

const GranularityConfig kF3Grid{0.001, 1.0, 32.0};
// Fine enough that random real-valued zoos never trip the separation check.
const GranularityConfig kLoose{1e-9, 1e-9, 1e6};

ModelProfile model(std::string id, double acc, double lat) { return {id, id, acc, lat, 10}; }

ParetoFrontier f3() {
  return build_frontier({model("slow", 0.9, 20), model("mid", 0.8, 10), model("stale", 0.85, 25), model("fast", 0.7, 5)},
                        kF3Grid);
}

std::vector<std::pair<double, double>> points(const ParetoFrontier& f) {
  std::vector<std::pair<double, double>> out;
  for (const auto& m : f.entries()) out.emplace_back(m.accuracy, m.latency_ms);
  return out;
}

// O(n^2) reference: keep every model no other model dominates.
std::set<std::string> brute_force_frontier_ids(const std::vector<ModelProfile>& zoo) {
  std::set<std::string> ids;
  for (const auto& m : zoo) {
    bool dominated = false;
    for (const auto& other : zoo) dominated = dominated || (other.accuracy > m.accuracy && other.latency_ms < m.latency_ms);
    if (!dominated) ids.insert(m.id);
  }
  return ids;
}

std::vector<ModelProfile> random_zoo(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> acc(0.0, 1.0);
  std::uniform_real_distribution<double> lat(0.1, 100.0);
  std::vector<ModelProfile> zoo;
  for (std::size_t i = 0; i < n; ++i) zoo.push_back(model("z" + std::to_string(i), acc(rng), lat(rng)));
  return zoo;
}

}  // namespace

TEST(Dominates, Examples) {
  EXPECT_TRUE(dominates(model("a", 0.9, 20), model("b", 0.85, 25)));
  EXPECT_FALSE(dominates(model("a", 0.9, 20), model("b", 0.9, 20)));
  EXPECT_FALSE(dominates(model("a", 0.8, 10), model("b", 0.9, 20)));
}

TEST(BuildFrontier, Empty) { EXPECT_TRUE(build_frontier({}, kF3Grid).empty()); }

TEST(BuildFrontier, SingleModel) {
  const auto f = build_frontier({model("a", 0.9, 20)}, kF3Grid);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].id, "a");
}

TEST(BuildFrontier, DropsDominatedAndSorts) {
  using P = std::pair<double, double>;
  EXPECT_EQ(points(f3()), (std::vector<P>{{0.7, 5}, {0.8, 10}, {0.9, 20}}));
}

TEST(BuildFrontier, IdenticalPointsKeepSmallerId) {
  const auto f = build_frontier({model("zz", 0.8, 10), model("aa", 0.8, 10)}, kF3Grid);
  ASSERT_EQ(f.size(), 1u);
  EXPECT_EQ(f[0].id, "aa");
}

TEST(BuildFrontier, RejectsDuplicateIds) {
  EXPECT_THROW(build_frontier({model("a", 0.8, 10), model("a", 0.9, 20)}, kF3Grid), ValidationError);
}

TEST(BuildFrontier, RejectsInvalidProfiles) {
  EXPECT_THROW(build_frontier({model("a", 1.2, 10)}, kF3Grid), ValidationError);
  EXPECT_THROW(build_frontier({model("a", 0.5, 0.0)}, kF3Grid), ValidationError);
}

TEST(BuildFrontier, GranularityViolations) {
  EXPECT_THROW(build_frontier({model("a", 0.7, 5), model("b", 0.7005, 9)}, kF3Grid), GranularityViolation);
  EXPECT_THROW(build_frontier({model("a", 0.7, 5), model("b", 0.8, 5.5)}, kF3Grid), GranularityViolation);
  EXPECT_THROW(build_frontier({model("a", 0.7, 5), model("b", 0.8, 40)}, kF3Grid), GranularityViolation);
  // Exactly one step apart is still "within" a step.
  EXPECT_THROW(build_frontier({model("a", 0.7, 5), model("b", 0.8, 6)}, kF3Grid), GranularityViolation);
  // Dominated models are never checked.
  EXPECT_NO_THROW(build_frontier({model("a", 0.8, 5), model("b", 0.7995, 40)}, kF3Grid));
}

TEST(BuildFrontier, MatchesBruteForceDominanceScan) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto zoo = random_zoo(rng, 1 + trial % 40);
    const auto f = build_frontier(zoo, kLoose);
    std::set<std::string> got;
    for (const auto& m : f.entries()) got.insert(m.id);
    ASSERT_EQ(got, brute_force_frontier_ids(zoo)) << "trial " << trial;
  }
}

TEST(BuildFrontier, InvariantsOnRandomZoos) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto zoo = random_zoo(rng, 30);
    const auto f = build_frontier(zoo, kLoose);
    for (std::size_t i = 1; i < f.size(); ++i) {
      EXPECT_LT(f[i - 1].latency_ms, f[i].latency_ms);
      EXPECT_LT(f[i - 1].accuracy, f[i].accuracy);
    }
    // Every zoo model is on the frontier or dominated by a frontier entry.
    for (const auto& m : zoo) {
      const bool on = f.index_of(m.id) != f.size();
      const bool covered = std::any_of(f.entries().begin(), f.entries().end(),
                                       [&](const ModelProfile& e) { return dominates(e, m); });
      EXPECT_TRUE(on || covered);
    }
    // Idempotence.
    const auto again = build_frontier(f.entries(), kLoose);
    EXPECT_EQ(again.entries(), f.entries());
  }
}

TEST(FeasibilitySet, Examples) {
  const auto f = f3();
  EXPECT_EQ(feasibility_set(f, 0.0, std::numeric_limits<double>::infinity()).size(), 3u);
  const auto one = feasibility_set(f, 0.75, 12);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.members[0].id, "mid");
  EXPECT_TRUE(feasibility_set(f, 0.95, 4).empty());
}

TEST(FeasibilitySet, ExactTargetingIsUnique) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = build_frontier(random_zoo(rng, 25), kLoose);
    for (const auto& m : f.entries()) {
      const auto fs = feasibility_set(f, m.accuracy, m.latency_ms);
      ASSERT_EQ(fs.size(), 1u);
      EXPECT_EQ(fs.members[0].id, m.id);
    }
  }
}

TEST(FeasibilitySet, RelaxingNeverRemovesMembers) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> acc(0.0, 1.0);
  std::uniform_real_distribution<double> lat(0.1, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = build_frontier(random_zoo(rng, 25), kLoose);
    const double a = acc(rng), l = lat(rng);
    const auto base = feasibility_set(f, a, l);
    const auto relaxed = feasibility_set(f, a * 0.9, l * 1.1);
    for (const auto& m : base.members) {
      EXPECT_TRUE(std::any_of(relaxed.members.begin(), relaxed.members.end(),
                              [&](const ModelProfile& r) { return r.id == m.id; }));
    }
    // The slowest member is also the most accurate one.
    const auto open = feasibility_set(f, 0.0, l);
    if (!open.empty()) {
      const auto by_lat = std::max_element(open.members.begin(), open.members.end(),
                                           [](auto& x, auto& y) { return x.latency_ms < y.latency_ms; });
      const auto by_acc = std::max_element(open.members.begin(), open.members.end(),
                                           [](auto& x, auto& y) { return x.accuracy < y.accuracy; });
      EXPECT_EQ(by_lat->id, by_acc->id);
    }
  }
}

TEST(GridRange, AgreesWithRealValuedFeasibility) {
  const auto f = f3();
  std::mt19937_64 rng(15);
  std::uniform_int_distribution<grid::Ticks> acc(0, 1000), lat(0, 32);
  for (int i = 0; i < 5000; ++i) {
    const auto a = acc(rng), l = lat(rng);
    const auto [lo, hi] = f.grid_range(a, l);
    const auto fs = feasibility_set(f, grid::value(a, 0.001), grid::value(l, 1.0));
    ASSERT_EQ(hi - lo, fs.size());
    for (std::size_t k = lo; k < hi; ++k) EXPECT_EQ(f[k].id, fs.members[k - lo].id);
  }
}

TEST(Granularity, Validation) {
  EXPECT_THROW((GranularityConfig{0.0, 1, 32}.validate()), ValidationError);
  EXPECT_THROW((GranularityConfig{1.5, 1, 32}.validate()), ValidationError);
  EXPECT_THROW((GranularityConfig{0.01, 40, 32}.validate()), ValidationError);
  EXPECT_NO_THROW((GranularityConfig{0.01, 0.5, 32}.validate()));
}

TEST(ZooFile, LoadsSample) {
  const auto doc = load_zoo(std::string(CROSSHAIR_SAMPLES_DIR) + "/f3.json");
  EXPECT_EQ(doc.models.size(), 4u);
  EXPECT_EQ(doc.granularity, kF3Grid);
  EXPECT_EQ(build_frontier(doc.models, doc.granularity).size(), 3u);
}

TEST(ZooFile, RoundTrip) {
  const std::vector<ModelProfile> zoo{model("a", 0.5, 3), model("b", 0.75, 7.5)};
  const auto doc = parse_zoo(nlohmann::json::parse(zoo_to_json(zoo, kF3Grid).dump()));
  EXPECT_EQ(doc.models, zoo);
  EXPECT_EQ(doc.granularity, kF3Grid);
}

TEST(ZooFile, RejectsBadDocuments) {
  EXPECT_THROW(parse_zoo(nlohmann::json::array()), ValidationError);
  EXPECT_THROW(parse_zoo(nlohmann::json::parse(R"({"models": []})")), ValidationError);
  EXPECT_THROW(parse_zoo(nlohmann::json::parse(
                   R"({"models": [{"id": "a", "name": "a", "accuracy": "high", "latency_ms": 1, "num_classes": 2}],
                       "granularity": {"acc_g": 0.01, "lat_g": 1, "l_up_ms": 32}})")),
               ValidationError);
  EXPECT_THROW(load_zoo("/nonexistent/zoo.json"), ValidationError);
}
