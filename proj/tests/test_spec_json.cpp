#include <gtest/gtest.h>

#include "cmgiant/errors.hpp"
#include "cmgiant/spec_json.hpp"
#include "test_support.hpp"

using namespace cmgiant;

TEST(SpecJson, CanonicalExamples) {
    EXPECT_EQ(parse_distribution(R"({"type":"finite","pmf":{"1":0.125,"2":0.75,"3":0.125}})"),
              DegreeDistribution(cmgiant::testing::counterexample_p()));
    EXPECT_EQ(parse_distribution(R"({"type":"poisson","lambda":2.0})"), DegreeDistribution(Poisson{2.0}));
    EXPECT_EQ(parse_distribution(R"({"type":"binomial","n":10,"p":0.2})"), DegreeDistribution(Binomial{10, 0.2}));
    EXPECT_EQ(parse_distribution(R"({"type":"mpoi","mixing":{"type":"pareto","alpha":2.5,"scale":1.2}})"),
              DegreeDistribution(MixedPoisson{Pareto{2.5, 1.2}}));
    EXPECT_EQ(parse_distribution(R"({"type":"mpoi","mixing":{"type":"lognormal","location":0.1,"scale2":0.5}})"),
              DegreeDistribution(MixedPoisson{Lognormal{0.1, 0.5}}));
    EXPECT_EQ(parse_distribution(R"({"type":"mpoi","mixing":{"type":"dirac","x":2}})"),
              DegreeDistribution(MixedPoisson{Dirac{2.0}}));
    const auto t = parse_distribution(R"({"type":"thinned","r":0.6,"base":{"type":"poisson","lambda":3}})");
    EXPECT_EQ(t, DegreeDistribution::thinned(Poisson{3.0}, 0.6));
}

TEST(SpecJson, RoundTrip) {
    const std::vector<DegreeDistribution> laws{
        cmgiant::testing::counterexample_q(),
        FinitePmf({{0, 0.1}, {1, 0.2}, {1000, 0.7}}),
        Poisson{0.1 + 0.2},
        Binomial{7, 1.0 / 3},
        MixedPoisson{Pareto{2.0 / 3 + 1, 1e-3}},
        MixedPoisson{Lognormal{-0.7, 1.0 / 7}},
        MixedPoisson{Dirac{M_PI}},
        DegreeDistribution::thinned(DegreeDistribution::thinned(MixedPoisson{Pareto{3.0, 2.0}}, 0.3), 0.9),
    };
    for (const auto& d : laws) {
        const auto text = to_spec_string(d);
        EXPECT_EQ(parse_distribution(text), d) << text;
        EXPECT_EQ(to_spec_string(parse_distribution(text)), text);
    }
    cmgiant::testing::Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const DegreeDistribution d = cmgiant::testing::random_pmf(rng);
        EXPECT_EQ(parse_distribution(to_spec_string(d)), d);
    }
}

TEST(SpecJson, KeyOrderIsCanonical) {
    EXPECT_EQ(to_spec_string(Poisson{2.0}), R"({"type":"poisson","lambda":2.0})");
    EXPECT_EQ(to_spec_string(FinitePmf({{2, 0.5}, {10, 0.5}})), R"({"type":"finite","pmf":{"2":0.5,"10":0.5}})");
}

TEST(SpecJson, RejectsUnknownAndMissingKeys) {
    EXPECT_THROW(parse_distribution(R"({"type":"poisson","lambda":2,"extra":1})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"poisson"})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"mpoi","mixing":{"type":"pareto","alpha":2.5}})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"mpoi","mixing":{"type":"pareto","alpha":2.5,"scale":1,"c":1}})"),
                 SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"gamma","shape":1})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"lambda":1})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"thinned","r":0.5})"), SpecError);
}

TEST(SpecJson, RejectsBadValues) {
    EXPECT_THROW(parse_distribution("not json"), SpecError);
    EXPECT_THROW(parse_distribution("[1,2]"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"poisson","lambda":"2"})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"poisson","lambda":-1})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"binomial","n":0,"p":0.5})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"binomial","n":2.5,"p":0.5})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"binomial","n":4,"p":1.5})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"thinned","r":1.5,"base":{"type":"poisson","lambda":1}})"),
                 SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"finite","pmf":{"-1":1}})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"finite","pmf":{"1x":1}})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"finite","pmf":{"1":0.5,"2":0.4}})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"finite","pmf":{"1":-0.5,"2":1.5}})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"finite","pmf":{}})"), SpecError);
    EXPECT_THROW(parse_distribution(R"({"type":"mpoi","mixing":{"type":"lognormal","location":0,"scale2":0}})"),
                 SpecError);
}

TEST(SpecJson, RenormalizesTinyShortfall) {
    const auto d = parse_distribution(R"({"type":"finite","pmf":{"1":0.3333333333,"2":0.6666666666}})");
    const auto* p = d.get_if<FinitePmf>();
    ASSERT_NE(p, nullptr);
    EXPECT_NEAR((*p)[1] + (*p)[2], 1.0, 1e-15);
    EXPECT_NEAR((*p)[1], 1.0 / 3, 1e-9);
}
