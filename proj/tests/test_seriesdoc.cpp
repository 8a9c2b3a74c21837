#include "k3q/modforms.hpp"
#include "k3q/seriesdoc.hpp"

#include "testutil.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace k3q;

TEST_CASE("document shape") {
    QSeries c2 = eisenstein_c(2, 3);
    SeriesDocument doc = to_document(c2, SeriesMeta{1, 2, 0});
    CHECK(doc.valuation == 0);
    CHECK(doc.order == 3);
    REQUIRE(doc.coefficients.size() == 4);
    CHECK(doc.coefficients[0] == "-1/24");
    CHECK(doc.coefficients[1] == "1");
    CHECK(doc.coefficients[2] == "3");
    CHECK(doc.coefficients[3] == "4");

    std::string text = dump_document(doc);
    CHECK(text.find("\"valuation\":0") != std::string::npos);
    CHECK(text.find("\"poleOrder\":0") != std::string::npos);
}

TEST_CASE("emitted documents round-trip byte-identically") {
    std::mt19937_64 rng(91);
    for (int trial = 0; trial < 20; ++trial) {
        QSeries f = testutil::random_series(rng, -3, 20);
        SeriesMeta meta;
        if (trial % 2) meta = SeriesMeta{1 + trial % 2, -12 + trial, trial % 3};
        std::string text = dump_document(to_document(f, meta), trial % 3 == 0);
        SeriesDocument parsed = parse_document(text);
        CHECK(dump_document(parsed, trial % 3 == 0) == text);
        CHECK(equal_on_common_window(from_document(parsed), f));
        CHECK(from_document(parsed).valuation() == f.valuation());
    }
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS(parse_document("{\"valuation\":0,\"order\":2,\"coefficients\":[\"1\"]}"));
    CHECK_THROWS(parse_document("{\"valuation\":0,\"order\":0,\"coefficients\":[\"1/0\"]}"));
    CHECK_THROWS(parse_document("not json"));
    CHECK_THROWS(parse_document("{\"valuation\":0,\"order\":0,\"coefficients\":[\"x\"]}"));
}
