#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "stratcv/federation.hpp"
#include "stratcv/partition.hpp"
#include "unit/fixtures.hpp"

namespace stratcv {
namespace {

using testing::make_fed;
using testing::make_record;

std::vector<Record> numbered(std::size_t n) {
  std::vector<Record> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_record(i, static_cast<double>(i), int(i % 2)));
  return out;
}

TEST(AssignHospitals, SingleHospitalTakesAll) {
  Rng rng(1);
  const auto fed = assign_hospitals(numbered(37), 1, rng);
  ASSERT_EQ(fed.num_hospitals(), 1u);
  EXPECT_EQ(fed.hospitals[0].size(), 37u);
  EXPECT_EQ(fed.n_original, 37u);
  EXPECT_EQ(fed.n_duplicates, 0u);
}

TEST(AssignHospitals, BalancedWithinBinomialBound) {
  Rng rng(2);
  const auto fed = assign_hospitals(numbered(10000), 5, rng);
  std::size_t total = 0;
  for (const auto& h : fed.hospitals) {
    EXPECT_NEAR(static_cast<double>(h.size()), 2000.0, 200.0);
    total += h.size();
  }
  EXPECT_EQ(total, 10000u);
}

TEST(AssignHospitals, EmptyInputAndZeroHospitals) {
  Rng rng(3);
  const auto fed = assign_hospitals({}, 4, rng);
  EXPECT_EQ(fed.num_hospitals(), 4u);
  EXPECT_EQ(fed.total_records(), 0u);
  EXPECT_THROW(assign_hospitals(numbered(3), 0, rng), InvalidArgument);
}

TEST(InjectDuplicates, ZeroLeavesDatasetUnchanged) {
  Rng rng(4);
  const auto fed = assign_hospitals(numbered(50), 3, rng);
  const auto out = inject_duplicates(fed, 0, rng);
  ASSERT_EQ(out.num_hospitals(), 3u);
  for (std::size_t h = 0; h < 3; ++h) {
    ASSERT_EQ(out.hospitals[h].size(), fed.hospitals[h].size());
    for (std::size_t i = 0; i < fed.hospitals[h].size(); ++i) {
      EXPECT_EQ(out.hospitals[h][i].id, fed.hospitals[h][i].id);
    }
  }
  EXPECT_EQ(out.n_duplicates, 0u);
}

TEST(InjectDuplicates, SingleIndividualFillsEveryHospital) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto fed = assign_hospitals(numbered(1), 5, rng);
    const auto out = inject_duplicates(fed, 4, rng);
    for (const auto& h : out.hospitals) {
      ASSERT_EQ(h.size(), 1u);
      EXPECT_EQ(h[0].id.value, 0u);
    }
    EXPECT_EQ(out.n_original, 1u);
    EXPECT_EQ(out.n_duplicates, 4u);
  }
}

TEST(InjectDuplicates, CapacityIsEnforced) {
  Rng rng(6);
  const auto fed = assign_hospitals(numbered(3), 2, rng);
  EXPECT_NO_THROW(inject_duplicates(fed, 3, rng));
  EXPECT_THROW(inject_duplicates(fed, 4, rng), InvalidArgument);
}

TEST(InjectDuplicates, ReferenceSizes) {
  const auto fed = testing::duplicated_dataset(1);
  EXPECT_EQ(fed.total_records(), 12000u);
  EXPECT_EQ(fed.n_original, 10000u);
  EXPECT_EQ(fed.n_duplicates, 2000u);
  EXPECT_NEAR(static_cast<double>(fed.n_duplicates) / fed.total_records(), 0.17, 0.005);
}

TEST(InjectDuplicates, CopiesAreExactAndDefinitionOneHolds) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto fed = testing::duplicated_dataset(seed, 500, 300, 4);
    EXPECT_TRUE(audit(fed).def1_satisfied);
    std::map<std::uint64_t, const Record*> first;
    for (const auto& h : fed.hospitals) {
      for (const auto& r : h) {
        auto [it, fresh] = first.emplace(r.id.value, &r);
        if (!fresh) {
          EXPECT_EQ(it->second->x, r.x);
          EXPECT_EQ(it->second->y, r.y);
        }
      }
    }
    EXPECT_EQ(first.size(), 500u);
  }
}

TEST(InjectDuplicates, DeterministicPerSeed) {
  const auto a = testing::duplicated_dataset(9, 300, 100, 5);
  const auto b = testing::duplicated_dataset(9, 300, 100, 5);
  for (std::size_t h = 0; h < 5; ++h) {
    ASSERT_EQ(a.hospitals[h].size(), b.hospitals[h].size());
    for (std::size_t i = 0; i < a.hospitals[h].size(); ++i) {
      EXPECT_EQ(a.hospitals[h][i].id, b.hospitals[h][i].id);
    }
  }
}

TEST(Audit, NoDuplicatesSatisfiesAll) {
  const auto fed = make_fed({{make_record(1, 0.0), make_record(2, 1.0)}, {make_record(3, 2.0)}});
  FoldAssignment folds{2, {{0, 1}, {1}}};
  const auto r = audit(fed, &folds);
  EXPECT_TRUE(r.def1_satisfied);
  EXPECT_TRUE(r.def2_satisfied);
  ASSERT_TRUE(r.def3_satisfied.has_value());
  EXPECT_TRUE(*r.def3_satisfied);
  EXPECT_FALSE(audit(fed).def3_satisfied.has_value());
}

TEST(Audit, CrossHospitalCopiesInSameFold) {
  const auto fed = make_fed({{make_record(1, 0.0), make_record(2, 1.0)}, {make_record(1, 0.0)}});
  FoldAssignment folds{3, {{2, 0}, {2}}};
  const auto r = audit(fed, &folds);
  EXPECT_TRUE(r.def1_satisfied);
  EXPECT_FALSE(r.def2_satisfied);
  ASSERT_EQ(r.def2_violations.size(), 1u);
  EXPECT_EQ(r.def2_violations[0].id.value, 1u);
  EXPECT_TRUE(*r.def3_satisfied);
}

TEST(Audit, DetectsEachDefinition) {
  const auto fed = make_fed({{make_record(1, 0.0), make_record(1, 0.0), make_record(2, 0.0)},
                             {make_record(2, 0.0)}});
  FoldAssignment folds{2, {{0, 0, 1}, {0}}};
  const auto r = audit(fed, &folds);
  ASSERT_EQ(r.def1_violations.size(), 1u);
  EXPECT_EQ(r.def1_violations[0].id.value, 1u);
  ASSERT_EQ(r.def2_violations.size(), 1u);
  EXPECT_EQ(r.def2_violations[0].id.value, 2u);
  ASSERT_EQ(r.def3_violations.size(), 1u);
  EXPECT_EQ(r.def3_violations[0].id.value, 2u);
  const auto& locs = r.def3_violations[0].locations;
  ASSERT_EQ(locs.size(), 2u);
  EXPECT_EQ(locs[0], (RecordLocation{0, 2, 1}));
  EXPECT_EQ(locs[1], (RecordLocation{1, 0, 0}));
}

TEST(Audit, FoldsMustCoverEveryRecord) {
  const auto fed = make_fed({{make_record(1, 0.0), make_record(2, 1.0)}});
  FoldAssignment short_folds{2, {{0}}};
  EXPECT_THROW(audit(fed, &short_folds), InvalidArgument);
  FoldAssignment out_of_range{2, {{0, 2}}};
  EXPECT_THROW(audit(fed, &out_of_range), InvalidArgument);
}

TEST(Audit, RandomFoldsOnReferenceDataViolateDefinitionThree) {
  int violated = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto fed = testing::duplicated_dataset(seed);
    Rng rng = Rng::derive(seed, "folds");
    const auto folds = random_partition(fed, 5, rng);
    violated += *audit(fed, &folds).def3_satisfied ? 0 : 1;
  }
  EXPECT_EQ(violated, 10);
}

}  // namespace
}  // namespace stratcv
