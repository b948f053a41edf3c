#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "streamclust/metric_space.hpp"
#include "streamclust/rng.hpp"

using namespace streamclust;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("streamclust_test_" + name);
}

void write_text(const fs::path& path, const std::string& body) {
    std::ofstream out(path);
    out << body;
}

}  // namespace

TEST_CASE("euclidean distances") {
    PointSet points({{0.0, 0.0}, {3.0, 4.0}});
    DistanceSpace space{points};
    CHECK(space.distance(0, 1) == 5.0);
    CHECK(space.distance(1, 0) == 5.0);
    CHECK(space.distance(0, 0) == 0.0);
    CHECK(space.distance(1, 1) == 0.0);
    CHECK(space.euclidean());
    CHECK(space.metric_claimed());
}

TEST_CASE("matrix backing is symmetric through set()") {
    DistanceMatrix m(3);
    m.set(1, 2, 1.7);
    DistanceSpace space{std::move(m)};
    CHECK(space.distance(1, 2) == 1.7);
    CHECK(space.distance(2, 1) == 1.7);
    CHECK(space.distance(0, 0) == 0.0);
}

TEST_CASE("point set rejects malformed input") {
    CHECK_THROWS_AS(PointSet({{1.0, 2.0}, {1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(PointSet(std::vector<std::vector<double>>{{std::nan("")}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(PointSet(std::vector<std::vector<double>>{{}}), std::invalid_argument);
}

TEST_CASE("index range errors") {
    DistanceSpace space{PointSet({{0.0}, {1.0}})};
    CHECK_THROWS_AS(space.distance(0, 2), std::out_of_range);
    CHECK_THROWS_AS(space.distance(5, 0), std::out_of_range);
}

TEST_CASE("values in [1.2, 1.7] satisfy the triangle inequality") {
    Rng rng(17);
    DistanceMatrix m(6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) m.set(i, j, rng.uniform(1.2, 1.7));
    DistanceSpace space{std::move(m), true};

    // independent oracle: scan every ordered triple directly
    bool triangle_ok = true;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            for (std::size_t k = 0; k < 6; ++k)
                if (space.distance(i, k) > space.distance(i, j) + space.distance(j, k) + 1e-12)
                    triangle_ok = false;
    CHECK(triangle_ok);
    CHECK(validate_space(space).empty());
}

TEST_CASE("axiom violations are reported with witnesses") {
    SUBCASE("asymmetry") {
        DistanceMatrix m(2);
        m.raw(0, 1) = 1.0;
        m.raw(1, 0) = 2.0;
        DistanceSpace space{std::move(m)};
        auto report = validate_space(space);
        REQUIRE(report.size() == 1);
        CHECK(report[0].axiom == Axiom::Symmetry);
        CHECK(report[0].i == 0);
        CHECK(report[0].j == 1);
    }
    SUBCASE("nonzero diagonal") {
        DistanceMatrix m(2);
        m.raw(0, 0) = 0.5;
        DistanceSpace space{std::move(m)};
        auto report = validate_space(space);
        REQUIRE(report.size() == 1);
        CHECK(report[0].axiom == Axiom::ZeroDiagonal);
    }
    SUBCASE("negative entry") {
        DistanceMatrix m(2);
        m.set(0, 1, -1.0);
        DistanceSpace space{std::move(m)};
        auto report = validate_space(space);
        REQUIRE(!report.empty());
        CHECK(report[0].axiom == Axiom::NonNegativity);
    }
    SUBCASE("triangle checked only when claimed") {
        DistanceMatrix m(3);
        m.set(0, 1, 1.0);
        m.set(1, 2, 1.0);
        m.set(0, 2, 5.0);
        DistanceMatrix claimed = m;
        CHECK(validate_space(DistanceSpace{std::move(m), false}).empty());
        auto report = validate_space(DistanceSpace{std::move(claimed), true});
        REQUIRE(report.size() == 1);
        CHECK(report[0].axiom == Axiom::Triangle);
        CHECK(!report[0].describe().empty());
    }
}

TEST_CASE("euclidean spaces satisfy sampled triangle inequalities") {
    Rng rng(5);
    std::vector<std::vector<double>> coords(20);
    for (auto& c : coords) {
        c.resize(3);
        for (double& x : c) x = rng.uniform(-10.0, 10.0);
    }
    DistanceSpace space{PointSet(coords)};
    CHECK(validate_space(space).empty());
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t i = rng.index(20), j = rng.index(20), k = rng.index(20);
        CHECK(space.distance(i, k) <= space.distance(i, j) + space.distance(j, k) + 1e-12);
    }
}

TEST_CASE("coordinate file format") {
    SUBCASE("the four-point line loads as 1-D") {
        auto path = temp_file("line.txt");
        write_text(path, "1\n2\n4\n5\n");
        DistanceSpace space = load_space(path, SpaceFormat::Coordinates);
        REQUIRE(space.size() == 4);
        CHECK(space.points().dim() == 1);
        CHECK(space.distance(0, 1) == 1.0);
        CHECK(space.distance(1, 2) == 2.0);
        fs::remove(path);
    }
    SUBCASE("dim header is honored") {
        auto path = temp_file("header.txt");
        write_text(path, "# dim=2\n0,0\n3,4\n");
        DistanceSpace space = load_space(path, SpaceFormat::Coordinates);
        CHECK(space.points().dim() == 2);
        CHECK(space.distance(0, 1) == 5.0);
        fs::remove(path);
    }
    SUBCASE("empty file is rejected") {
        auto path = temp_file("empty.txt");
        write_text(path, "");
        CHECK_THROWS_WITH_AS(load_space(path, SpaceFormat::Coordinates),
                             doctest::Contains("no items"), std::runtime_error);
        fs::remove(path);
    }
    SUBCASE("ragged rows name the line") {
        auto path = temp_file("ragged.txt");
        write_text(path, "0,0\n1\n");
        CHECK_THROWS_WITH_AS(load_space(path, SpaceFormat::Coordinates),
                             doctest::Contains("line 2"), std::runtime_error);
        fs::remove(path);
    }
}

TEST_CASE("matrix file format") {
    SUBCASE("round trip") {
        DistanceMatrix m(3);
        m.set(0, 1, 1.25);
        m.set(0, 2, 2.5);
        m.set(1, 2, 0.125);
        DistanceSpace space{std::move(m)};
        auto path = temp_file("matrix.txt");
        save_space(space, path);
        DistanceSpace back = load_space(path, SpaceFormat::Matrix);
        REQUIRE(back.size() == 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(back.distance(i, j) == space.distance(i, j));
        fs::remove(path);
    }
    SUBCASE("asymmetric matrix rejected at load") {
        auto path = temp_file("asym.txt");
        write_text(path, "2\n0,1\n2,0\n");
        CHECK_THROWS_WITH_AS(load_space(path, SpaceFormat::Matrix),
                             doctest::Contains("asymmetric"), std::runtime_error);
        fs::remove(path);
    }
    SUBCASE("row length mismatch names the row") {
        auto path = temp_file("short_row.txt");
        write_text(path, "2\n0,1\n1\n");
        CHECK_THROWS_WITH_AS(load_space(path, SpaceFormat::Matrix), doctest::Contains("line 3"),
                             std::runtime_error);
        fs::remove(path);
    }
}

TEST_CASE("persistence reproduces distances bit-exactly") {
    Rng rng(99);
    std::vector<std::vector<double>> coords(12);
    for (auto& c : coords) {
        c.resize(4);
        for (double& x : c) x = rng.normal() * 1e3;
    }
    DistanceSpace space{PointSet(coords)};
    auto path = temp_file("roundtrip.txt");
    save_space(space, path);
    DistanceSpace back = load_space(path, SpaceFormat::Coordinates);
    REQUIRE(back.size() == space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        for (std::size_t j = 0; j < space.size(); ++j)
            CHECK(back.distance(i, j) == space.distance(i, j));
    fs::remove(path);
}

TEST_CASE("format_double round trips arbitrary doubles") {
    Rng rng(123);
    for (int i = 0; i < 1000; ++i) {
        double x = std::ldexp(rng.uniform(-1.0, 1.0), static_cast<int>(rng.below(40)) - 20);
        CHECK(parse_double(format_double(x), 1) == x);
    }
    CHECK(format_double(1.0) == "1");
    CHECK(parse_double("-0.5", 1) == -0.5);
    CHECK_THROWS_AS(parse_double("zebra", 7), std::runtime_error);
}

TEST_CASE("restrict_to keeps the selected distances in order") {
    Rng rng(4);
    DistanceMatrix m(6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) m.set(i, j, rng.uniform(1.0, 9.0));
    DistanceSpace space{std::move(m)};
    std::vector<std::size_t> picks = {4, 1, 5};
    DistanceSpace sub = space.restrict_to(picks);
    REQUIRE(sub.size() == 3);
    for (std::size_t a = 0; a < picks.size(); ++a)
        for (std::size_t b = 0; b < picks.size(); ++b)
            CHECK(sub.distance(a, b) == space.distance(picks[a], picks[b]));

    DistanceSpace points{PointSet({{0.0}, {1.0}, {5.0}})};
    DistanceSpace psub = points.restrict_to(std::vector<std::size_t>{2, 0});
    CHECK(psub.distance(0, 1) == 5.0);
    CHECK(psub.points()[0][0] == 5.0);
}
