#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "trxcat/error.hpp"
#include "trxcat/tfidf.hpp"

using namespace trxcat;
using oracles::make_docs;

TEST_CASE("idf of a term in every document is exactly 1") {
    auto model = fit_tfidf(make_docs({{"a"}, {"a"}}));
    REQUIRE(model.vocab_size() == 1);
    CHECK(model.idf[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("smoothed idf for df=1 of 2 documents") {
    auto model = fit_tfidf(make_docs({{"a"}, {"b"}}));
    REQUIRE(model.vocab_size() == 2);
    const double expected = std::log(3.0 / 2.0) + 1.0;  // ~1.405465
    CHECK(model.idf[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(model.idf[1] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(1.405465).epsilon(1e-6));
}

TEST_CASE("min_df prunes the vocabulary") {
    auto model = fit_tfidf(make_docs({{"a", "b"}, {"a"}}), 2);
    REQUIRE(model.vocab_size() == 1);
    CHECK(model.terms[0] == "a");
}

TEST_CASE("columns follow first appearance order") {
    auto model = fit_tfidf(make_docs({{"z", "m"}, {"a", "z"}}));
    CHECK(model.terms == std::vector<std::string>{"z", "m", "a"});
}

TEST_CASE("all-empty corpus is an explicit error") {
    CHECK_THROWS_AS(fit_tfidf(make_docs({{}, {}})), Error);
    CHECK_THROWS_AS(fit_tfidf({}), Error);
}

TEST_CASE("single-term document normalizes to weight 1") {
    auto model = fit_tfidf(make_docs({{"a"}, {"b"}}));
    auto m = tfidf_transform(model, make_docs({{"a"}}));
    REQUIRE(m.nnz() == 1);
    CHECK(m.values[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("empty and all-OOV documents become zero rows") {
    auto model = fit_tfidf(make_docs({{"a"}, {"b"}}));
    auto m = tfidf_transform(model, make_docs({{}, {"zz", "qq"}}));
    CHECK(m.rows == 2);
    CHECK(m.nnz() == 0);
    CHECK(m.row_norm(0) == 0.0);
}

TEST_CASE("matches the dense reference on a small corpus") {
    const std::vector<std::vector<std::string>> corpus = {
        {"cb", "market", "market"},
        {"cb", "fastfood"},
        {"virement", "salaire"},
        {"virement", "avance", "salaire", "carte"},
        {"retrait", "dab", "cb"},
    };
    auto model = fit_tfidf(make_docs(corpus));
    auto m = tfidf_transform(model, make_docs(corpus));
    m.check_invariants();

    std::vector<std::string> terms;
    const auto dense = oracles::dense_tfidf(corpus, 1, &terms);
    REQUIRE(terms == model.terms);

    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (std::size_t j = 0; j < terms.size(); ++j) {
            double got = 0.0;
            auto cols = m.row_cols(i);
            auto vals = m.row_vals(i);
            for (std::size_t k = 0; k < cols.size(); ++k) {
                if (cols[k] == j) got = vals[k];
            }
            CHECK(std::abs(got - dense[i][j]) <= 1e-12);
        }
    }
}

TEST_CASE("row dot products agree with the norms") {
    auto model = fit_tfidf(make_docs({{"a", "b"}, {"b", "c"}, {"d"}}));
    auto m = tfidf_transform(model, make_docs({{"a", "b"}, {"b", "c"}, {"d"}, {}}));
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double n = m.row_norm(r);
        CHECK(dot(m, r, r) == doctest::Approx(n * n).epsilon(1e-12));
    }
    CHECK(dot(m, 0, 2) == 0.0);  // disjoint terms
    CHECK(dot(m, 0, 1) > 0.0);   // shared "b"
    CHECK(dot(m, 0, 3) == 0.0);  // empty row
}

TEST_CASE("transform rows are unit or zero") {
    const std::vector<std::vector<std::string>> corpus = {
        {"a", "b", "c"}, {"a", "a"}, {"d"}, {}, {"b", "c", "d", "e", "e"}};
    auto model = fit_tfidf(make_docs(corpus));
    auto m = tfidf_transform(model, make_docs(corpus));
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double norm = m.row_norm(i);
        CHECK((norm == 0.0 || std::abs(norm - 1.0) <= 1e-9));
    }
}
