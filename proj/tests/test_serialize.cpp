#include "affdec/errors.hpp"
#include "affdec/serialize.hpp"
#include "affdec/surfaces.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

using namespace affdec;

TEST(Serialize, NonFiniteNumbersUseStrings) {
    const double inf = std::numeric_limits<double>::infinity();
    EXPECT_EQ(number_to_json(inf), "inf");
    EXPECT_EQ(number_to_json(-inf), "-inf");
    EXPECT_EQ(number_to_json(std::nan("")), "nan");
    EXPECT_EQ(number_from_json(number_to_json(-inf)), -inf);
    EXPECT_TRUE(std::isnan(number_from_json(number_to_json(std::nan("")))));
    EXPECT_EQ(number_from_json(number_to_json(0.1)), 0.1);
}

TEST(Serialize, PolynomialAndParallelogramRoundTrip) {
    const Poly2 p = surface_by_name("random(9,4)");
    const Poly2 q = poly_from_json(Json::parse(dump(to_json(p))));
    EXPECT_EQ(q.max_degree(), p.max_degree());
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j) EXPECT_EQ(q.coeff(i, j), p.coeff(i, j));

    const Parallelogram omega = Parallelogram::from_edges({0.1, -0.3}, {0.2, 0.05}, {-0.01, 0.4});
    const Parallelogram back = parallelogram_from_json(Json::parse(dump(to_json(omega))));
    for (int k = 0; k < 2; ++k) {
        EXPECT_EQ(back.center()[k], omega.center()[k]);
        EXPECT_EQ(back.u()[k], omega.u()[k]);
        EXPECT_EQ(back.v()[k], omega.v()[k]);
    }
}

TEST(Serialize, DecompositionRoundTripValidatesIdentically) {
    for (const char* name : {"quartic", "monkey"}) {
        const Poly2 phi = surface_by_name(name);
        const DecompositionResult res = decompose(phi, 64, 0.25);
        const std::string text = dump(to_json(res));
        const DecompositionResult back = decomposition_from_json(Json::parse(text));
        EXPECT_EQ(back.leaf_count(), res.leaf_count());
        EXPECT_EQ(dump(to_json(back)), text) << name;
        EXPECT_EQ(dump(to_json(validate(back, phi, 100))), dump(to_json(validate(res, phi, 100)))) << name;
    }
}

TEST(Serialize, ArtifactCarriesSchemaAndIsDeterministic) {
    const Json a = artifact("decompose", {{"R", 64}}, {{"x", 1}});
    EXPECT_EQ(a.at("schema"), "spec/1");
    EXPECT_TRUE(a.contains("build"));
    EXPECT_NO_THROW(check_schema(a));
    EXPECT_EQ(dump(a), dump(artifact("decompose", {{"R", 64}}, {{"x", 1}})));
    EXPECT_EQ(dump(a).back(), '\n');
    Json bad = a;
    bad["schema"] = "spec/0";
    EXPECT_THROW(check_schema(bad), InvalidArgument);
}

TEST(Serialize, RuntimeOnlyWithTimings) {
    CounterexampleScan s;
    s.runtime = 1.5;
    EXPECT_FALSE(to_json(s).contains("runtime"));
    EXPECT_EQ(to_json(s, true).at("runtime"), 1.5);
    RatioReport r;
    r.inputs_hash = 0xabc;
    EXPECT_EQ(to_json(r).at("inputs_hash"), "0000000000000abc");
}
