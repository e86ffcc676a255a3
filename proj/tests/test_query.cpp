#include <doctest.h>

#include <cmath>

#include "ltca/query.hpp"
#include "ltca/rng.hpp"

using namespace ltca;

namespace {

Matrix random_matrix(SplitMix64& rng, std::size_t rows, std::size_t cols) {
    Matrix m(rows, cols);
    for (double& v : m.data) v = 2.0 * rng.next_double() - 1.0;
    return m;
}

}  // namespace

TEST_CASE("sinusoidal pe canonical values") {
    Matrix pe = sinusoidal_pe(4, 4);
    for (std::size_t c = 0; c < 4; c += 2) {
        CHECK(pe.at(0, c) == 0.0);
        CHECK(pe.at(0, c + 1) == 1.0);
    }
    CHECK(pe.at(2, 0) == doctest::Approx(std::sin(2.0)).epsilon(1e-12));
    CHECK(pe.at(2, 0) == doctest::Approx(0.909297).epsilon(1e-6));
    CHECK(pe.at(2, 1) == doctest::Approx(std::cos(2.0)).epsilon(1e-12));
    // Channel pair 1 rate: 10000^(2/4).
    CHECK(pe.at(3, 2) == doctest::Approx(std::sin(3.0 / 100.0)).epsilon(1e-12));

    for (double v : pe.data) {
        CHECK(v <= 1.0);
        CHECK(v >= -1.0);
    }
    CHECK_THROWS_AS(sinusoidal_pe(4, 5), ParamError);
}

TEST_CASE("assemble adds object and frame embeddings per slot") {
    GeometrySpec g{2, 2, 1};
    SplitMix64 rng(3);
    Matrix emb = random_matrix(rng, 4, 2);
    PositionalEmbeddings pe;
    pe.object_pe = random_matrix(rng, 2, 2);
    pe.frame_pe = random_matrix(rng, 2, 2);
    Matrix global_init = random_matrix(rng, 1, 2);

    QueryBundle q = assemble(emb, pe, global_init, g);
    REQUIRE(q.features.rows == 5);
    for (std::size_t c = 0; c < 2; ++c) CHECK(q.features.at(0, c) == global_init.at(0, c));
    for (std::size_t f = 0; f < 2; ++f)
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t c = 0; c < 2; ++c) {
                double want = emb.at(f * 2 + s, c) + pe.object_pe.at(s, c) + pe.frame_pe.at(f, c);
                CHECK(q.features.at(1 + f * 2 + s, c) == want);
            }
}

TEST_CASE("assemble with zero PEs passes object rows through") {
    GeometrySpec g{3, 1, 0};
    SplitMix64 rng(9);
    Matrix emb = random_matrix(rng, 3, 4);
    PositionalEmbeddings pe{Matrix(1, 4, 0.0), Matrix(3, 4, 0.0)};
    QueryBundle q = assemble(emb, pe, Matrix(0, 0), g);
    CHECK(q.features.data == emb.data);
}

TEST_CASE("assemble with zero embeddings exposes the PE sum") {
    GeometrySpec g{3, 1, 0};
    PositionalEmbeddings pe{Matrix(1, 4, 0.5), sinusoidal_pe(3, 4)};
    QueryBundle q = assemble(Matrix(3, 4, 0.0), pe, Matrix(0, 0), g);
    for (std::size_t f = 0; f < 3; ++f)
        for (std::size_t c = 0; c < 4; ++c)
            CHECK(q.features.at(f, c) == 0.5 + pe.frame_pe.at(f, c));
}

TEST_CASE("assemble is linear on object rows") {
    GeometrySpec g{2, 2, 0};
    SplitMix64 rng(21);
    Matrix a = random_matrix(rng, 4, 3);
    Matrix b = random_matrix(rng, 4, 3);
    PositionalEmbeddings pe{random_matrix(rng, 2, 3), random_matrix(rng, 2, 3)};
    PositionalEmbeddings zero{Matrix(2, 3, 0.0), Matrix(2, 3, 0.0)};

    Matrix sum = assemble(a + b, pe, Matrix(0, 0), g).features;
    Matrix split = assemble(a, pe, Matrix(0, 0), g).features +
                   assemble(b, zero, Matrix(0, 0), g).features;
    CHECK(max_abs_diff(sum, split) < 1e-12);
}

TEST_CASE("assemble shape errors") {
    GeometrySpec g{2, 1, 1};
    PositionalEmbeddings pe{Matrix(1, 4, 0.0), Matrix(2, 4, 0.0)};
    CHECK_THROWS_AS(assemble(Matrix(3, 4), pe, Matrix(1, 4), g), ShapeError);
    CHECK_THROWS_AS(assemble(Matrix(2, 4), pe, Matrix(2, 4), g), ShapeError);
    PositionalEmbeddings bad{Matrix(2, 4, 0.0), Matrix(2, 4, 0.0)};
    CHECK_THROWS_AS(assemble(Matrix(2, 4), bad, Matrix(1, 4), g), ShapeError);
}

TEST_CASE("sentence repetition and mean") {
    std::vector<double> fe = {1.0, -2.0, 0.5};
    Matrix one = init_queries_from_sentence(fe, 1);
    CHECK(one.rows == 1);
    CHECK(one.data == std::vector<double>{1.0, -2.0, 0.5});

    Matrix three = init_queries_from_sentence(fe, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t c = 0; c < 3; ++c) CHECK(three.at(i, c) == fe[c]);

    Matrix words(2, 3);
    words.data = {1.0, 0.0, 2.0, 3.0, 4.0, -2.0};
    CHECK(mean_rows(words) == std::vector<double>{2.0, 2.0, 0.0});
}
