#include "thalparc/error.hpp"
#include "thalparc/feature_store.hpp"
#include "thalparc/synthgen.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace thalparc;

namespace {

std::string small_table(std::string_view bad_cell = "") {
    std::ostringstream t;
    t << "subject\ti\tj\tk\tlabels\textra";
    for (const auto& c : group_columns(FeatureGroup::conn6)) t << '\t' << c;
    t << '\n';
    for (int r = 0; r < 4; ++r) {
        t << (r < 2 ? "s1" : "s2") << '\t' << r << '\t' << 2 * r << "\t5\t" << (r == 1 ? "MD;CL" : "AN") << "\tzz";
        for (int c = 0; c < 6; ++c) {
            if (r == 3 && c == 4 && !bad_cell.empty()) t << '\t' << bad_cell;
            else t << '\t' << r * 10 + c;
        }
        t << '\n';
    }
    return t.str();
}

} // namespace

TEST(Groups, DimensionsOfEverySubset) {
    for (unsigned mask = 1; mask < 32; ++mask) {
        std::vector<FeatureGroup> chosen;
        std::size_t expected = 0;
        for (std::size_t b = 0; b < 5; ++b) {
            if (mask & (1u << b)) {
                chosen.push_back(kAllGroups[b]);
                expected += group_dimension(kAllGroups[b]);
            }
        }
        const FeatureGroupSpec spec(chosen);
        EXPECT_EQ(spec.dimension(), expected);
        EXPECT_EQ(spec.column_names().size(), expected);
        EXPECT_EQ(spec.directional().size(), expected);
        const auto names = spec.column_names();
        const std::set<std::string> unique(names.begin(), names.end());
        EXPECT_EQ(unique.size(), expected);
        EXPECT_EQ(FeatureGroupSpec::parse(spec.to_string()), spec);
    }
    EXPECT_EQ(FeatureGroupSpec::all().dimension(), 167u);
}

TEST(Groups, CanonicalOrderAndDirectionalColumns) {
    const auto spec = FeatureGroupSpec::parse("multiti,base,base");
    ASSERT_EQ(spec.groups().size(), 2u);
    EXPECT_EQ(spec.groups()[0], FeatureGroup::base);
    const auto dir = FeatureGroupSpec{FeatureGroup::base}.directional();
    const auto names = FeatureGroupSpec{FeatureGroup::base}.column_names();
    std::size_t n_dir = 0;
    for (std::size_t i = 0; i < dir.size(); ++i) {
        if (dir[i]) {
            ++n_dir;
            EXPECT_EQ(names[i].substr(0, 4), "knut");
        }
    }
    EXPECT_EQ(n_dir, 5u);
    EXPECT_THROW(FeatureGroupSpec::parse("base,dwi"), Error);
    EXPECT_THROW(FeatureGroupSpec::parse(""), Error);
}

TEST(Dataset, ReadsTableAndIgnoresExtras) {
    std::istringstream in(small_table());
    const auto d = read_dataset(in, FeatureGroupSpec{FeatureGroup::conn6, FeatureGroup::coord});
    ASSERT_EQ(d.size(), 4u);
    EXPECT_EQ(d.group(FeatureGroup::conn6)(2, 3), 23.0);
    EXPECT_TRUE(d.record(1).labels.contains(Nucleus::CL));
    EXPECT_EQ(d.subjects(), (std::vector<std::string>{"s1", "s2"}));
    // s1 spans i 0..1 and j 0..2: centre (0.5, 1, 5).
    EXPECT_EQ(d.coords()(0, 0), -0.5);
    EXPECT_EQ(d.coords()(1, 1), 1.0);
    EXPECT_EQ(d.coords()(1, 2), 0.0);
    EXPECT_THROW(d.group(FeatureGroup::base), Error);
}

TEST(Dataset, SchemaAndDataErrors) {
    {
        std::istringstream in(small_table());
        try {
            read_dataset(in, FeatureGroupSpec{FeatureGroup::base});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::schema);
            EXPECT_NE(std::string(e.what()).find("mprage"), std::string::npos);
        }
    }
    for (std::string_view bad : {"nan", "inf", "abc"}) {
        std::istringstream in(small_table(bad));
        try {
            read_dataset(in, FeatureGroupSpec{FeatureGroup::conn6});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::data);
            const std::string msg = e.what();
            EXPECT_NE(msg.find("conn6_4"), std::string::npos);
            EXPECT_NE(msg.find("s2"), std::string::npos);
        }
    }
}

TEST(Dataset, WriteReadRoundTrip) {
    synth::SynthSpec spec;
    spec.n_subjects = 3;
    spec.voxels_per_subject = 40;
    spec.groups = FeatureGroupSpec::all();
    spec.overlap_fraction = 0.1;
    const auto d = synth::generate(spec).dataset;
    std::ostringstream out;
    write_dataset(out, d);
    std::istringstream in(out.str());
    const auto back = read_dataset(in, FeatureGroupSpec::all());
    ASSERT_EQ(back.size(), d.size());
    for (FeatureGroup g : kAllGroups) {
        EXPECT_EQ(back.group(g), d.group(g));
    }
    for (std::size_t r = 0; r < d.size(); ++r) {
        EXPECT_EQ(back.record(r).labels, d.record(r).labels);
        EXPECT_EQ(back.record(r).ijk, d.record(r).ijk);
    }
}

TEST(Dataset, SelectFeaturesConcatenatesInCanonicalOrder) {
    synth::SynthSpec spec;
    spec.n_subjects = 2;
    spec.voxels_per_subject = 20;
    const auto d = synth::generate(spec).dataset;
    const std::vector<std::size_t> rows{3, 1};
    const auto x = select_features(d, FeatureGroupSpec{FeatureGroup::coord, FeatureGroup::base}, rows);
    ASSERT_EQ(x.cols(), 22u);
    EXPECT_EQ(x(0, 0), d.group(FeatureGroup::base)(3, 0));
    EXPECT_EQ(x(1, 19), d.coords()(1, 0));
}

TEST(Recenter, HalfIntegerOffsets) {
    const std::vector<std::array<std::int32_t, 3>> ijk{{10, 0, -3}, {13, 2, -3}};
    const auto c = recenter_coords(ijk);
    EXPECT_EQ(c[0][0], -1.5);
    EXPECT_EQ(c[1][0], 1.5);
    EXPECT_EQ(c[0][1], -1.0);
    EXPECT_EQ(c[1][2], 0.0);
}

TEST(Folds, PartitionIsDisjointAndBalanced) {
    std::vector<std::string> ids;
    for (int i = 0; i < 23; ++i) ids.push_back("sub" + std::to_string(i));
    const auto plan = make_folds(ids, 5, 42);
    std::multiset<std::string> seen;
    for (const auto& f : plan.folds) {
        EXPECT_GE(f.size(), 4u);
        EXPECT_LE(f.size(), 5u);
        seen.insert(f.begin(), f.end());
    }
    EXPECT_EQ(seen.size(), ids.size());
    EXPECT_EQ(std::set<std::string>(seen.begin(), seen.end()).size(), ids.size());
    for (std::size_t f = 0; f < 5; ++f) {
        const auto train = plan.training_subjects(f);
        EXPECT_EQ(train.size() + plan.folds[f].size(), ids.size());
        for (const auto& s : plan.folds[f]) {
            EXPECT_EQ(std::count(train.begin(), train.end(), s), 0);
        }
    }
    auto shuffled = ids;
    std::reverse(shuffled.begin(), shuffled.end());
    EXPECT_EQ(make_folds(shuffled, 5, 42).folds, plan.folds);
    EXPECT_NE(make_folds(ids, 5, 43).folds, plan.folds);
    EXPECT_THROW(make_folds(ids, 1, 0), Error);
    EXPECT_THROW(make_folds(ids, 24, 0), Error);
}
