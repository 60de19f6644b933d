#include "obtuse/distribution_spec.hpp"
#include "obtuse/io.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

using namespace obtuse;
using nlohmann::json;

TEST(DistributionSpec, ParsesEveryKind) {
    const auto a = parse_distribution_spec(json::parse(R"({"kind":"arc_triple","params":{"epsilon":0.02},"tol":0})"));
    ASSERT_TRUE(std::holds_alternative<ArcTripleParams>(a.params));
    EXPECT_EQ(std::get<ArcTripleParams>(a.params).epsilon, static_cast<long double>(0.02));
    EXPECT_EQ(spec_tolerance(a), 0.0);

    const auto s = parse_distribution_spec(json::parse(R"({"kind":"self_similar","params":{"p":"optimal","epsilon":0.1}})"));
    const auto& ss = std::get<SelfSimilarParams>(s.params);
    EXPECT_NEAR(static_cast<double>(ss.p), optimal_cap_mass(), 1e-15);
    EXPECT_NEAR(static_cast<double>(ss.delta), 0.01 / 30, 1e-15);
    EXPECT_EQ(spec_tolerance(s), kDefaultTolerance);

    const auto sp = parse_distribution_spec(json::parse(R"({"kind":"sphere","params":{"d":7}})"));
    EXPECT_EQ(std::get<SphereSpec>(sp.params).d, 7);
    EXPECT_EQ(DistributionSampler(sp).dim(), 7u);

    const auto arc = parse_distribution_spec(json::parse(R"({"kind":"arc","params":{"extent":0.1,"center":[1,2]}})"));
    EXPECT_EQ(std::get<SingleArcParams>(arc.params).center[1], 2.0L);
}

TEST(DistributionSpec, RoundTrips) {
    for (const char* text : {R"({"kind":"arc_triple","params":{"alpha":0.001,"radius":0.5},"tol":0})",
                             R"({"kind":"sphere","params":{"d":4}})",
                             R"({"kind":"arc","params":{"radius":3,"extent":0.2}})",
                             R"({"kind":"mixture","params":{"components":[
                                  {"weight":2,"spec":{"kind":"sphere","params":{"d":2}}},
                                  {"weight":1,"spec":{"kind":"arc"}}]}})"}) {
        const json first = to_json(parse_distribution_spec(json::parse(text)));
        const json second = to_json(parse_distribution_spec(first));
        EXPECT_EQ(first, second) << text;
    }
}

TEST(DistributionSpec, RejectsBadInput) {
    for (const char* text : {R"({"kind":"cube"})",
                             R"({"params":{}})",
                             R"({"kind":"sphere","params":{"d":1}})",
                             R"({"kind":"sphere","params":{"dim":3}})",
                             R"({"kind":"sphere","extra":1})",
                             R"({"kind":"arc_triple","params":{"epsilon":2}})",
                             R"({"kind":"self_similar","params":{"p":"best"}})",
                             R"({"kind":"arc","params":{"extent":4}})",
                             R"({"kind":"mixture","params":{"components":[]}})",
                             R"({"kind":"mixture","params":{"components":[{"weight":-1,"spec":{"kind":"arc"}}]}})",
                             R"({"kind":"sphere","tol":-1})"}) {
        EXPECT_THROW(parse_distribution_spec(json::parse(text)), UsageError) << text;
    }
}

TEST(DistributionSpec, MixtureDimensionsMustAgree) {
    const auto spec = parse_distribution_spec(json::parse(R"({"kind":"mixture","params":{"components":[
        {"spec":{"kind":"sphere","params":{"d":3}}},{"spec":{"kind":"arc"}}]}})"));
    EXPECT_THROW(DistributionSampler{spec}, UsageError);
}

TEST(DistributionSpec, MixtureLabelsFollowWeights) {
    const auto spec = parse_distribution_spec(json::parse(R"({"kind":"mixture","params":{"components":[
        {"weight":3,"spec":{"kind":"sphere","params":{"d":2}}},{"weight":1,"spec":{"kind":"arc"}}]}})"));
    const DistributionSampler s(spec);
    Rng rng(3);
    std::array<long double, 2> buf{};
    int first = 0;
    const int n = 100'000;
    for (int i = 0; i < n; ++i) first += s.sample(rng, buf) == 0;
    EXPECT_NEAR(first / static_cast<double>(n), 0.75, 5 * std::sqrt(0.75 * 0.25 / n));
}

TEST(ConfigurationJson, RoundTrips) {
    const Configuration c({PointD{0.1, 0.2, 0.3}, PointD{1, 0, 0}, PointD{-1e-300, 5, 7}});
    const Configuration back = configuration_from_json(to_json(c));
    ASSERT_EQ(back.size(), c.size());
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(back[i], c[i]);
}

TEST(ConfigurationJson, Rejects) {
    EXPECT_THROW(configuration_from_json(json::parse(R"({"points":[[0,0],[1]]})")), UsageError);
    EXPECT_THROW(configuration_from_json(json::parse(R"({"points":[[0,"a"]]})")), UsageError);
    EXPECT_THROW(configuration_from_json(json::parse(R"({"dim":3,"points":[[0,0],[1,0],[0,1]]})")), UsageError);
    EXPECT_THROW(configuration_from_json(json::parse(R"([1,2])")), UsageError);
}

TEST(BigToJson, SwitchesToStringsBeyond64Bits) {
    EXPECT_EQ(big_to_json(BigCount(42)), json(42u));
    const BigCount huge = BigCount(1) << 80;
    EXPECT_EQ(big_to_json(huge), json(huge.str()));
}

TEST(ReadJsonFile, Errors) {
    EXPECT_THROW(read_json_file("/nonexistent/file.json"), UsageError);
    const std::string path = testing::TempDir() + "bad.json";
    std::ofstream(path) << "{not json";
    EXPECT_THROW(read_json_file(path), UsageError);
    std::remove(path.c_str());
}

TEST(ShippedSpecs, AllParse) {
    for (const char* name : {"arc_triple.json", "arc_triple_fine.json", "self_similar.json", "sphere3.json",
                             "arc.json", "mixture.json"}) {
        const auto spec = parse_distribution_spec(read_json_file(std::string(OBTUSE_SPEC_DIR) + "/" + name));
        EXPECT_NO_THROW(DistributionSampler{spec}) << name;
    }
}
